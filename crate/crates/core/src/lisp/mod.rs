//! The Lisp kernel: values, reader, printer, evaluator and primitives.

mod arith;
mod builtins;
mod interp;
mod printer;
mod reader;
mod symbols;
mod types;

pub use arith::ArithOp;
pub use interp::{Interp, StorageProbe, DEFAULT_STORAGE};
pub use reader::Reader;
pub use symbols::{Arity, Builtin, BuiltinFn, FnCell, Special};
pub use types::{Bignum, Int, Pair, SExpr, SymId, RADIX};

