//! Golden transcript comparison.
//!
//! Transcripts are split into blank-line separated chunks. Chunks that
//! differ textually are compared again line by line, and lines of the form
//! `lhs := expr` or plain expressions are compared semantically: both
//! sides are parsed and their difference must simplify to zero. TIME lines
//! are ignored.

use crate::rlisp::{parse_expr, Mode, Translator};
use crate::session::Session;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Mismatch {
    /// Index of the chunk in the expected transcript.
    pub chunk: usize,
    pub expected: String,
    pub actual: String,
}

pub fn chunks(text: &str) -> Vec<String> {
    text.split("\n\n")
        .map(|c| c.trim_matches('\n').to_string())
        .filter(|c| !c.is_empty() && !c.starts_with("TIME:"))
        .collect()
}

/// Joins continuation lines (starting with "+ ", "- " or a space) onto
/// the line they continue.
pub fn logical_lines(chunk: &str) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for line in chunk.lines() {
        let cont = line.starts_with("+ ") || line.starts_with("- ") || line.starts_with(' ');
        match out.last_mut() {
            Some(prev) if cont => {
                prev.push(' ');
                prev.push_str(line.trim());
            }
            _ => out.push(line.to_string()),
        }
    }
    out
}

fn split_assignment(line: &str) -> (&str, &str) {
    match line.find(" := ") {
        Some(i) => (&line[..i + 4], &line[i + 4..]),
        None => ("", line),
    }
}

impl Session {
    /// True when two printed expressions denote the same value.
    pub fn same_value(&mut self, a: &str, b: &str) -> bool {
        let (Ok(ea), Ok(eb)) = (parse_expr(a), parse_expr(b)) else {
            return false;
        };
        let it = self.interp();
        let r = it.capture_output(|i| {
            let mut tr = Translator::new(i, Mode::Algebraic);
            let fa = tr.alg(&ea)?;
            let fb = tr.alg(&eb)?;
            let va = i.eval(&fa)?;
            let vb = i.eval(&fb)?;
            let minus = i.sym("DIFFERENCE");
            let d = crate::lisp::SExpr::list([minus, va, vb]);
            Ok(i.simp_top(&d)?.is_zero())
        });
        matches!(r, Ok((true, _)))
    }

    fn same_line(&mut self, expected: &str, actual: &str) -> bool {
        if expected == actual {
            return true;
        }
        let (le, re) = split_assignment(expected);
        let (la, ra) = split_assignment(actual);
        le == la && self.same_value(re, ra)
    }

    fn same_chunk(&mut self, expected: &str, actual: &str) -> bool {
        if expected == actual {
            return true;
        }
        let e = logical_lines(expected);
        let a = logical_lines(actual);
        e.len() == a.len() && e.iter().zip(&a).all(|(x, y)| self.same_line(x, y))
    }
}

/// Compares an actual transcript against a golden one, using `judge` for
/// semantic comparisons.
pub fn compare(judge: &mut Session, expected: &str, actual: &str) -> Vec<Mismatch> {
    let e = chunks(expected);
    let a = chunks(actual);
    let mut out = Vec::new();
    for i in 0..e.len().max(a.len()) {
        let x = e.get(i).map(String::as_str).unwrap_or("");
        let y = a.get(i).map(String::as_str).unwrap_or("");
        if !judge.same_chunk(x, y) {
            out.push(Mismatch {
                chunk: i,
                expected: x.to_string(),
                actual: y.to_string(),
            });
        }
    }
    out
}
