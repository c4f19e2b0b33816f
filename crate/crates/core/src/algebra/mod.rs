//! Canonical algebra: kernels, standard forms and quotients, the SIMP
//! dispatcher, differentiation, LET rules, arrays and assignment.

mod builtins;
mod diff;
pub mod kernel;
mod prep;
mod rules;
pub mod sf;
mod simp;
pub mod sq;

use std::collections::{HashMap, HashSet};

pub use kernel::{KernelId, KernelTable};
pub use rules::{Pattern, Rule};
pub use sf::{Monomial, Sf, Term};
pub use sq::Sq;

use crate::error::{alg_err, Result};
use crate::lisp::{Interp, SExpr, SymId};
use crate::matrix::Matrix;

pub(crate) use builtins::install;

/// Default cap on rule firings during one top-level simplification.
pub const DEFAULT_FIRING_CAP: usize = 2048;

/// ON/OFF switches. Output switches live here too so one ON statement
/// handles every flag.
#[derive(Clone, Debug)]
pub struct Switches {
    pub mcd: bool,
    pub exp: bool,
    pub list: bool,
    pub div: bool,
    pub nero: bool,
}

impl Default for Switches {
    fn default() -> Switches {
        Switches {
            mcd: true,
            exp: true,
            list: false,
            div: false,
            nero: false,
        }
    }
}

/// A value together with the generation it was simplified in.
#[derive(Clone, Debug)]
pub struct Stored {
    pub sq: Sq,
    pub generation: u64,
}

/// A declared array: inclusive bounds `0..=b` per dimension.
#[derive(Clone, Debug)]
pub struct AlgArray {
    pub bounds: Vec<usize>,
    pub data: Vec<Option<Stored>>,
}

impl AlgArray {
    pub fn new(bounds: Vec<usize>) -> AlgArray {
        let n = bounds.iter().map(|b| b + 1).product();
        AlgArray {
            bounds,
            data: vec![None; n],
        }
    }

    pub fn offset(&self, idx: &[usize]) -> Option<usize> {
        if idx.len() != self.bounds.len() {
            return None;
        }
        let mut off = 0;
        for (i, b) in idx.iter().zip(&self.bounds) {
            if i > b {
                return None;
            }
            off = off * (b + 1) + i;
        }
        Some(off)
    }
}

pub struct AlgState {
    pub kernels: KernelTable,
    pub switches: Switches,
    pub values: HashMap<SymId, Stored>,
    pub arrays: HashMap<SymId, AlgArray>,
    pub matrices: HashMap<SymId, Option<Matrix>>,
    pub operators: HashSet<SymId>,
    pub rules: Vec<Rule>,
    /// Bumped whenever a stored value might simplify differently.
    pub generation: u64,
    pub firings: usize,
    pub firing_cap: usize,
}

impl Default for AlgState {
    fn default() -> AlgState {
        AlgState {
            kernels: KernelTable::default(),
            switches: Switches::default(),
            values: HashMap::new(),
            arrays: HashMap::new(),
            matrices: HashMap::new(),
            operators: HashSet::new(),
            rules: Vec::new(),
            generation: 0,
            firings: 0,
            firing_cap: DEFAULT_FIRING_CAP,
        }
    }
}

impl Interp {
    pub fn switch(&self, name: &str) -> Option<bool> {
        let s = &self.alg.switches;
        Some(match name {
            "MCD" => s.mcd,
            "EXP" => s.exp,
            "LIST" => s.list,
            "DIV" => s.div,
            "NERO" => s.nero,
            _ => return None,
        })
    }

    pub fn set_switch(&mut self, name: &str, on: bool) -> Result<()> {
        let s = &mut self.alg.switches;
        match name {
            "MCD" => {
                s.mcd = on;
                self.alg.generation += 1;
            }
            "EXP" => {
                if !on {
                    return alg_err("OFF EXP is not supported");
                }
                s.exp = on;
            }
            "LIST" => s.list = on,
            "DIV" => s.div = on,
            "NERO" => s.nero = on,
            _ => return alg_err(format!("unknown switch {name}")),
        }
        Ok(())
    }

    pub fn set_firing_cap(&mut self, cap: usize) {
        self.alg.firing_cap = cap;
    }

    pub(crate) fn store(&self, sq: Sq) -> Stored {
        Stored {
            sq,
            generation: self.alg.generation,
        }
    }

    /// Returns a stored value, resimplifying it when declarations made
    /// since it was stored could change it.
    pub(crate) fn fetch(&mut self, st: &Stored) -> Result<Sq> {
        if st.generation == self.alg.generation
            || (st.sq.num.as_num().is_some() && st.sq.den.as_num().is_some())
        {
            return Ok(st.sq.clone());
        }
        let p = self.prepsq(&st.sq)?;
        let sq = self.simp(&p)?;
        self.subs2(&sq)
    }

    /// Canonical prefix of the simplified expression.
    pub fn reval(&mut self, e: &SExpr) -> Result<SExpr> {
        let sq = self.simp_top(e)?;
        self.prepsq(&sq)
    }

    pub(crate) fn is_matrix_name(&self, id: SymId) -> bool {
        self.alg.matrices.contains_key(&id)
    }

    /// True when `e` denotes a matrix rather than a scalar.
    pub fn is_matrix_expr(&self, e: &SExpr) -> bool {
        match e {
            SExpr::Sym(id) => self.is_matrix_name(*id),
            SExpr::Pair(p) => match p.car.as_sym() {
                Some(h) if h == self.s.mat => true,
                Some(h) if h == self.s.det => false,
                Some(h) if self.is_matrix_name(h) => false,
                Some(_) => p.cdr.iter().any(|a| self.is_matrix_expr(a)),
                None => false,
            },
            _ => false,
        }
    }
}
