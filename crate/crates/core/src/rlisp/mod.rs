//! The algebraic source language: tokenizer, parser and translation to
//! Lisp forms.

pub mod ast;
pub mod lexer;
pub mod parser;
pub mod translate;

pub use ast::{Expr, Mode, Stmt};
pub use parser::{parse_expr, ParseError, ParsedStmt, Parser};
pub use translate::{StmtKind, Translator};

use crate::error::Result;
use crate::lisp::{Interp, SExpr};

/// Parses every statement in `src`, collecting errors in place.
pub fn parse_program(src: &str) -> Vec<std::result::Result<ParsedStmt, ParseError>> {
    let mut p = Parser::new(src);
    let mut out = Vec::new();
    while let Some(r) = p.next_statement() {
        out.push(r);
    }
    out
}

/// Translates one algebraic-mode statement to its Lisp form.
pub fn translate(interp: &mut Interp, stmt: &Stmt) -> Result<(SExpr, StmtKind)> {
    Translator::new(interp, Mode::Algebraic).statement(stmt)
}
