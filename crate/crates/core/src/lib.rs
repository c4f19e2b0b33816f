//! A small REDUCE-style computer algebra system on an interpreter-only Lisp.
//!
//! Layers, bottom up: [`lisp`] (kernel), [`prelude`] (Lisp source loaded at
//! boot), [`algebra`] (standard forms and quotients), [`matrix`],
//! [`output`], [`rlisp`] (the algebraic source language) and [`session`]
//! (statement runner used by the command line and the Python bindings).

pub mod algebra;
pub mod check;
pub mod error;
pub mod lisp;
pub mod matrix;
pub mod output;
pub mod prelude;
pub mod rlisp;
pub mod session;

pub use error::{LispError, Result};
pub use lisp::{Interp, SExpr};
pub use session::{Session, StatementOutcome};
