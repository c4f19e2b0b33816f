//! The acceptance criteria as ordinary tests, so failures show up with
//! their messages under `cargo test`.

mod common;

use common::{big_stack, criteria};

#[test]
fn corpus_completes() {
    big_stack(criteria::corpus_completion).unwrap();
}

#[test]
fn scalar_results() {
    big_stack(|| criteria::scalar_results(&criteria::run_corpus())).unwrap();
}

#[test]
fn f_and_g_series() {
    big_stack(|| criteria::f_and_g_series(&criteria::run_corpus())).unwrap();
}

#[test]
fn fourier_cube() {
    big_stack(|| criteria::fourier(&criteria::run_corpus())).unwrap();
}

#[test]
fn relativity_program() {
    big_stack(criteria::relativity).unwrap();
}

#[test]
fn matrix_results() {
    big_stack(|| criteria::matrices(&criteria::run_corpus())).unwrap();
}

#[test]
fn corpus_runs_within_budget() {
    let best = big_stack(criteria::performance).unwrap();
    assert!(best.as_secs_f64() <= 5.0);
}
