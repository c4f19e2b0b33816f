//! Statement runner shared by the command line, the REPL and the Python
//! bindings.
//!
//! Output is a sequence of chunks, each followed by a blank line: the
//! echoed statement, whatever it wrote, then its result. Diagnostics are
//! kept apart for standard error.

use crate::error::{LispError, Result};
use crate::lisp::{Interp, Reader, SExpr};
use crate::rlisp::{Mode, ParsedStmt, Parser, StmtKind, Translator};

/// Where a piece of session output belongs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stream {
    Out,
    Err,
}

/// What happened to one statement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatementOutcome {
    Done,
    Failed { line: usize, msg: String },
    /// `end;` was reached; nothing after it runs.
    End,
}

/// Everything a source run produced.
#[derive(Clone, Debug, Default)]
pub struct Transcript {
    pub stdout: String,
    pub stderr: String,
    pub errors: usize,
    pub ended: bool,
}

pub struct Session {
    interp: Interp,
    mode: Mode,
    echo: bool,
}

impl Session {
    /// A session with the standard prelude loaded.
    pub fn new() -> Result<Session> {
        Ok(Session::with_interp(Interp::new()?))
    }

    pub fn with_interp(interp: Interp) -> Session {
        Session {
            interp,
            mode: Mode::Algebraic,
            echo: true,
        }
    }

    pub fn interp(&mut self) -> &mut Interp {
        &mut self.interp
    }

    /// Turns statement echo on or off; results still print.
    pub fn set_echo(&mut self, echo: bool) {
        self.echo = echo;
    }

    /// Runs a whole source text, collecting its output.
    pub fn run_source(&mut self, src: &str) -> Transcript {
        let mut t = Transcript::default();
        let (errors, ended) = self.run_source_with(src, &mut |stream, text| match stream {
            Stream::Out => t.stdout.push_str(text),
            Stream::Err => t.stderr.push_str(text),
        });
        t.errors = errors;
        t.ended = ended;
        t
    }

    /// Runs a source text, passing output to `sink` as it is produced.
    /// Returns the number of failed statements and whether `end;` was seen.
    ///
    /// A text starting with `(` is read as Lisp until `(BEGIN)` is
    /// evaluated; the rest is then algebraic source.
    pub fn run_source_with(
        &mut self,
        src: &str,
        sink: &mut dyn FnMut(Stream, &str),
    ) -> (usize, bool) {
        let mut errors = 0;
        let mut rest = src;
        let mut line_offset = 0;
        if starts_with_lisp_form(src) {
            match self.run_lisp_prefix(src, sink, &mut errors) {
                Some(pos) => {
                    line_offset = src[..pos].matches('\n').count();
                    rest = &src[pos..];
                }
                None => return (errors, false),
            }
        }
        let mut parser = Parser::new(rest);
        while let Some(r) = parser.next_statement() {
            let outcome = match r {
                Ok(ps) => self.run_parsed(rest, &ps, sink),
                Err(e) => StatementOutcome::Failed {
                    line: e.line,
                    msg: e.msg,
                },
            };
            match outcome {
                StatementOutcome::Done => {}
                StatementOutcome::Failed { line, msg } => {
                    errors += 1;
                    let text = format!("***** line {}: {}\n", line + line_offset, msg);
                    sink(Stream::Err, &text);
                }
                StatementOutcome::End => return (errors, true),
            }
        }
        (errors, false)
    }

    // Evaluates leading Lisp forms. Returns the byte offset just after the
    // form that requested algebraic input, or None if none did.
    fn run_lisp_prefix(
        &mut self,
        src: &str,
        sink: &mut dyn FnMut(Stream, &str),
        errors: &mut usize,
    ) -> Option<usize> {
        let mut reader = Reader::new(src);
        self.interp.begin_requested = false;
        loop {
            let line = reader.line();
            let form = match reader.read(&mut self.interp) {
                Ok(Some(f)) => f,
                Ok(None) => return None,
                Err(e) => {
                    *errors += 1;
                    sink(Stream::Err, &format!("***** line {line}: {e}\n"));
                    return None;
                }
            };
            let r = self.interp.errorset(&form);
            self.flush(sink);
            if let Err(msg) = r {
                *errors += 1;
                sink(Stream::Err, &format!("***** line {line}: {msg}\n"));
            }
            if self.interp.begin_requested {
                self.interp.begin_requested = false;
                return Some(reader.position());
            }
        }
    }

    fn flush(&mut self, sink: &mut dyn FnMut(Stream, &str)) {
        let out = self.interp.take_output();
        if !out.is_empty() {
            sink(Stream::Out, &out);
        }
        let diag = self.interp.take_diagnostics();
        if !diag.is_empty() {
            sink(Stream::Err, &diag);
        }
    }

    fn run_parsed(
        &mut self,
        src: &str,
        ps: &ParsedStmt,
        sink: &mut dyn FnMut(Stream, &str),
    ) -> StatementOutcome {
        let translated = Translator::new(&mut self.interp, self.mode).statement(&ps.stmt);
        let (form, kind) = match translated {
            Ok(x) => x,
            Err(e) => {
                return StatementOutcome::Failed {
                    line: ps.line,
                    msg: e.to_string(),
                }
            }
        };
        match kind {
            StmtKind::End => return StatementOutcome::End,
            StmtKind::Mode(m) => {
                self.mode = m;
                return StatementOutcome::Done;
            }
            _ => {}
        }
        let show = ps.echo && self.echo;
        if show {
            let text = src[ps.start..ps.end].trim_end();
            sink(Stream::Out, &format!("{text}\n\n"));
        }
        let r = self.interp.errorset(&form);
        self.flush(sink);
        let value = match r {
            Ok(v) => v,
            Err(msg) => return StatementOutcome::Failed { line: ps.line, msg },
        };
        let printed = match kind {
            StmtKind::Value => self.finish_value(&value, ps.echo),
            StmtKind::Lisp if ps.echo => Ok(Some(self.interp.print(&value))),
            _ => Ok(None),
        };
        match printed {
            Ok(Some(text)) => {
                self.flush(sink);
                sink(Stream::Out, &format!("{text}\n\n"));
                StatementOutcome::Done
            }
            Ok(None) => {
                self.flush(sink);
                StatementOutcome::Done
            }
            Err(e) => {
                self.flush(sink);
                StatementOutcome::Failed {
                    line: ps.line,
                    msg: e.to_string(),
                }
            }
        }
    }

    // Records *ANS and formats the result when it is to be shown.
    fn finish_value(&mut self, value: &SExpr, show: bool) -> Result<Option<String>> {
        let it = &mut self.interp;
        let (text, ans) = match it.assignment_parts(value) {
            Some((target, v)) => {
                let text = if show {
                    it.format_assignment(&target, &v)?
                } else {
                    None
                };
                (text, v)
            }
            None => {
                let text = if show { Some(it.format_value(value)?) } else { None };
                (text, value.clone())
            }
        };
        self.set_ans(&ans)?;
        Ok(text)
    }

    fn set_ans(&mut self, v: &SExpr) -> Result<()> {
        let it = &mut self.interp;
        let ans = it.intern("*ANS");
        it.alg.values.remove(&ans);
        it.alg.matrices.remove(&ans);
        it.setk(&SExpr::Sym(ans), v)?;
        Ok(())
    }

    /// Runs a single statement (terminator optional) and returns its
    /// printed output, or the error message.
    pub fn eval_statement(&mut self, text: &str) -> std::result::Result<String, String> {
        let mut src = text.trim_end().to_string();
        if !src.ends_with(';') && !src.ends_with('$') {
            src.push(';');
        }
        let saved = self.echo;
        self.echo = false;
        let t = self.run_source(&src);
        self.echo = saved;
        if t.errors > 0 {
            return Err(t.stderr.trim_end().to_string());
        }
        Ok(t.stdout.trim_end().to_string())
    }

    /// Simplifies an algebraic expression and returns its printed form.
    pub fn simplify(&mut self, expr: &str) -> std::result::Result<String, String> {
        let e = crate::rlisp::parse_expr(expr).map_err(|e| e.msg)?;
        let mut tr = Translator::new(&mut self.interp, Mode::Algebraic);
        let form = tr.alg(&e).map_err(|e| e.to_string())?;
        let v = self.interp.eval(&form).map_err(|e: LispError| e.to_string())?;
        let r = self
            .interp
            .capture_output(|i| {
                let v = i.aeval(&v)?;
                i.format_value(&v)
            })
            .map_err(|e| e.to_string())?;
        Ok(r.0)
    }
}

// True when the input opens with a parenthesised form that is not the
// start of an algebraic expression such as `(x+1)*(x-1);`.
fn starts_with_lisp_form(src: &str) -> bool {
    let text = src.trim_start();
    if !text.starts_with('(') {
        return false;
    }
    let mut depth = 0usize;
    let mut in_str = false;
    for (i, c) in text.char_indices() {
        match c {
            '"' => in_str = !in_str,
            '(' if !in_str => depth += 1,
            ')' if !in_str => {
                depth -= 1;
                if depth == 0 {
                    let next = text[i + 1..].trim_start().chars().next();
                    return !matches!(
                        next,
                        Some(';' | '$' | '+' | '-' | '*' | '/' | '^' | '=' | ':' | ',' | '<' | '>')
                    );
                }
            }
            _ => {}
        }
    }
    true
}
