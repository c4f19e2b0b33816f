//! Interned kernels and their global order.

use std::cmp::Ordering;
use std::collections::HashMap;

use crate::lisp::SExpr;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct KernelId(pub u32);

const UNORDERED_BASE: u64 = 1 << 32;

/// Kernels named by ORDER come first in declaration sequence; the rest
/// follow in order of first encounter.
#[derive(Default)]
pub struct KernelTable {
    forms: Vec<SExpr>,
    rank: Vec<u64>,
    index: HashMap<SExpr, KernelId>,
    ordered: Vec<SExpr>,
}

impl KernelTable {
    pub fn intern(&mut self, form: &SExpr) -> KernelId {
        if let Some(id) = self.index.get(form) {
            return *id;
        }
        let id = KernelId(self.forms.len() as u32);
        let rank = match self.ordered.iter().position(|o| o == form) {
            Some(i) => i as u64,
            None => UNORDERED_BASE + id.0 as u64,
        };
        self.forms.push(form.clone());
        self.rank.push(rank);
        self.index.insert(form.clone(), id);
        id
    }

    pub fn lookup(&self, form: &SExpr) -> Option<KernelId> {
        self.index.get(form).copied()
    }

    pub fn form(&self, id: KernelId) -> &SExpr {
        &self.forms[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    /// `Less` when `a` is the higher-ranking (main) kernel.
    pub fn cmp(&self, a: KernelId, b: KernelId) -> Ordering {
        self.rank[a.0 as usize].cmp(&self.rank[b.0 as usize])
    }

    /// Appends kernels to the ORDER list and reranks every kernel.
    pub fn set_order(&mut self, forms: &[SExpr]) {
        for f in forms {
            self.ordered.retain(|o| o != f);
            self.ordered.push(f.clone());
        }
        for (i, form) in self.forms.iter().enumerate() {
            self.rank[i] = match self.ordered.iter().position(|o| o == form) {
                Some(p) => p as u64,
                None => UNORDERED_BASE + i as u64,
            };
        }
    }
}
