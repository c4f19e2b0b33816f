#![allow(dead_code)]

pub mod criteria;
pub mod einstein;
pub mod numeval;
pub mod poly;
pub mod props;

use std::path::PathBuf;

use minireduce::session::{Session, Transcript};

pub fn corpus_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus").join(name)
}

pub fn corpus_text(name: &str) -> String {
    std::fs::read_to_string(corpus_path(name)).expect("corpus file is readable")
}

/// The corpus after its leading `(begin)`, which is Lisp input.
pub fn algebraic_corpus() -> String {
    let text = corpus_text("alg.red");
    let rest = text.strip_prefix("(begin)").expect("corpus starts in Lisp mode");
    rest.to_string()
}

/// Runs `f` on a thread with room for deeply nested evaluation.
pub fn big_stack<T: Send + 'static>(f: impl FnOnce() -> T + Send + 'static) -> T {
    std::thread::Builder::new()
        .stack_size(256 * 1024 * 1024)
        .spawn(f)
        .expect("thread starts")
        .join()
        .unwrap_or_else(|e| std::panic::resume_unwind(e))
}

pub fn session() -> Session {
    Session::new().expect("prelude loads")
}

/// Runs source text without echo and returns the transcript.
pub fn quiet(src: &str) -> Transcript {
    let mut s = session();
    s.set_echo(false);
    s.run_source(src)
}

/// Output of a quiet run with chunk separators collapsed to newlines.
pub fn lines(src: &str) -> Vec<String> {
    let t = quiet(src);
    assert_eq!(t.errors, 0, "errors: {}", t.stderr);
    minireduce::check::chunks(&t.stdout)
}
