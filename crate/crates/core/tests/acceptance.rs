//! Acceptance report: one PASS or FAIL line per criterion.

mod common;

use common::criteria;

fn line(n: usize, name: &str, r: Result<String, String>) -> bool {
    match r {
        Ok(note) if note.is_empty() => {
            println!("PASS {n}. {name}");
            true
        }
        Ok(note) => {
            println!("PASS {n}. {name} ({note})");
            true
        }
        Err(why) => {
            println!("FAIL {n}. {name}: {why}");
            false
        }
    }
}

fn report() -> bool {
    let t = criteria::run_corpus();
    let done = |r: Result<(), String>| r.map(|_| String::new());
    let results = [
        ("corpus completion", done(criteria::corpus_completion())),
        ("scalar results", done(criteria::scalar_results(&t))),
        ("f and g series", done(criteria::f_and_g_series(&t))),
        ("Fourier example", done(criteria::fourier(&t))),
        ("general relativity program", done(criteria::relativity())),
        ("matrix results", done(criteria::matrices(&t))),
        ("property suites", done(criteria::properties())),
        (
            "performance",
            criteria::performance().map(|d| format!("best of 5 runs: {:.1} ms", d.as_secs_f64() * 1000.0)),
        ),
    ];
    let mut ok = true;
    for (i, (name, r)) in results.into_iter().enumerate() {
        ok &= line(i + 1, name, r);
    }
    ok
}

fn main() {
    if !common::big_stack(report) {
        std::process::exit(1);
    }
}
