use std::collections::HashMap;
use std::sync::Arc;

use super::types::{SExpr, SymId};
use crate::error::Result;
use crate::lisp::Interp;

pub type BuiltinFn = fn(&mut Interp, &[SExpr]) -> Result<SExpr>;

#[derive(Clone, Copy, Debug)]
pub enum Arity {
    Exact(usize),
    AtLeast(usize),
    Range(usize, usize),
}

impl Arity {
    pub fn accepts(self, n: usize) -> bool {
        match self {
            Arity::Exact(k) => n == k,
            Arity::AtLeast(k) => n >= k,
            Arity::Range(lo, hi) => (lo..=hi).contains(&n),
        }
    }

    pub fn describe(self) -> String {
        match self {
            Arity::Exact(k) => k.to_string(),
            Arity::AtLeast(k) => format!("at least {k}"),
            Arity::Range(lo, hi) => format!("{lo} to {hi}"),
        }
    }
}

#[derive(Clone, Copy)]
pub struct Builtin {
    pub name: &'static str,
    pub arity: Arity,
    pub f: BuiltinFn,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Special {
    Quote,
    Function,
    Cond,
    Setq,
    Lambda,
    Prog,
    Progn,
    Go,
    Return,
    And,
    Or,
    De,
}

/// Contents of a symbol's function cell.
#[derive(Clone)]
pub enum FnCell {
    Empty,
    Builtin(Builtin),
    /// A `(LAMBDA params . body)` expression.
    Lambda(SExpr),
    Special(Special),
}

pub struct Symbol {
    pub name: Arc<str>,
    pub value: Option<SExpr>,
    pub func: FnCell,
    pub plist: Vec<(SymId, SExpr)>,
}

#[derive(Default)]
pub struct SymbolTable {
    syms: Vec<Symbol>,
    names: HashMap<Arc<str>, SymId>,
}

impl SymbolTable {
    pub fn intern(&mut self, name: &str) -> SymId {
        if let Some(id) = self.names.get(name) {
            return *id;
        }
        let id = SymId(self.syms.len() as u32);
        let name: Arc<str> = Arc::from(name);
        self.syms.push(Symbol {
            name: name.clone(),
            value: None,
            func: FnCell::Empty,
            plist: Vec::new(),
        });
        self.names.insert(name, id);
        id
    }

    pub fn lookup(&self, name: &str) -> Option<SymId> {
        self.names.get(name).copied()
    }

    pub fn name(&self, id: SymId) -> &str {
        &self.syms[id.0 as usize].name
    }

    pub fn get(&self, id: SymId) -> &Symbol {
        &self.syms[id.0 as usize]
    }

    pub fn get_mut(&mut self, id: SymId) -> &mut Symbol {
        &mut self.syms[id.0 as usize]
    }

}

macro_rules! well_known {
    ($($field:ident = $name:expr),* $(,)?) => {
        /// Symbols the Rust side refers to by identity.
        pub struct Syms {
            $(pub $field: SymId,)*
        }

        impl Syms {
            pub fn intern_all(table: &mut SymbolTable) -> Syms {
                Syms { $($field: table.intern($name),)* }
            }
        }
    };
}

well_known! {
    nil = "NIL",
    t = "T",
    quote = "QUOTE",
    lambda = "LAMBDA",
    plus = "PLUS",
    difference = "DIFFERENCE",
    minus = "MINUS",
    times = "TIMES",
    quotient = "QUOTIENT",
    expt = "EXPT",
    recip = "RECIP",
    df = "DF",
    e = "E",
    sin = "SIN",
    cos = "COS",
    tan = "TAN",
    log = "LOG",
    exp = "EXP",
    sqrt = "SQRT",
    mat = "MAT",
    det = "DET",
    share = "SHARE",
    algproc = "ALGPROC",
    assign = "*ASSIGN",
    ok = "OK",
    err = "ERR",
    bigadd = "BIGADD",
    bigdifference = "BIGDIFFERENCE",
    bigtimes = "BIGTIMES",
    bigquotient = "BIGQUOTIENT",
    bigremainder = "BIGREMAINDER",
    biglessp = "BIGLESSP",
    bigminus = "BIGMINUS",
    prettyprint = "PRETTYPRINT",
}
