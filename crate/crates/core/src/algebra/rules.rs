//! LET rules: kernel, power and product templates with optional FOR ALL
//! variables.
//!
//! Kernel rules fire when a kernel is built. Power and product rules fire
//! in a pass over the monomials of a simplified quotient, since that is
//! the only place products of kernels are visible.

use super::sf::{Monomial, Sf};
use super::sq::Sq;
use super::KernelId;
use crate::error::{alg_err, LispError, Result};
use crate::lisp::{Interp, SExpr, SymId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Pattern {
    Kernel(SExpr),
    Power(SExpr, u32),
    Product(SExpr, SExpr),
}

#[derive(Clone, Debug)]
pub struct Rule {
    pub vars: Vec<SymId>,
    pub lhs: Pattern,
    pub rhs: SExpr,
}

type Bindings = Vec<(SymId, SExpr)>;

fn match_template(pat: &SExpr, e: &SExpr, vars: &[SymId], b: &mut Bindings) -> bool {
    if let SExpr::Sym(id) = pat {
        if vars.contains(id) {
            if let Some((_, v)) = b.iter().find(|(s, _)| s == id) {
                return v == e;
            }
            b.push((*id, e.clone()));
            return true;
        }
    }
    match (pat, e) {
        (SExpr::Pair(p), SExpr::Pair(q)) => {
            let mark = b.len();
            let ok = match_template(&p.car, &q.car, vars, b)
                && match_template(&p.cdr, &q.cdr, vars, b);
            if !ok {
                b.truncate(mark);
            }
            ok
        }
        _ => pat == e,
    }
}

fn substitute(e: &SExpr, b: &Bindings) -> SExpr {
    match e {
        SExpr::Sym(id) => b
            .iter()
            .find(|(s, _)| s == id)
            .map(|(_, v)| v.clone())
            .unwrap_or_else(|| e.clone()),
        SExpr::Pair(p) => SExpr::cons(substitute(&p.car, b), substitute(&p.cdr, b)),
        _ => e.clone(),
    }
}

impl Interp {
    fn is_kernel_template(&self, e: &SExpr) -> bool {
        match e {
            SExpr::Sym(id) => *id != SymId::NIL && *id != SymId::T,
            SExpr::Pair(p) => match p.car.as_sym() {
                Some(h) => {
                    let s = &self.s;
                    ![s.plus, s.times, s.difference, s.minus, s.quotient, s.expt, s.recip]
                        .contains(&h)
                }
                None => false,
            },
            _ => false,
        }
    }

    /// Classifies a LET left-hand side.
    pub fn pattern_of(&self, lhs: &SExpr) -> Result<Pattern> {
        let bad = || -> Result<Pattern> {
            alg_err(format!("unsupported LET pattern {}", self.print(lhs)))
        };
        if let SExpr::Pair(p) = lhs {
            let h = p.car.as_sym();
            let args = p.cdr.to_vec();
            if h == Some(self.s.expt) && args.len() == 2 {
                return match args[1].as_fix() {
                    Some(n) if n >= 2 && self.is_kernel_template(&args[0]) => {
                        Ok(Pattern::Power(args[0].clone(), n as u32))
                    }
                    Some(1) if self.is_kernel_template(&args[0]) => {
                        Ok(Pattern::Kernel(args[0].clone()))
                    }
                    _ => bad(),
                };
            }
            if h == Some(self.s.times) {
                return match args.as_slice() {
                    [a, b] if self.is_kernel_template(a) && self.is_kernel_template(b) => {
                        Ok(Pattern::Product(a.clone(), b.clone()))
                    }
                    _ => bad(),
                };
            }
        }
        if self.is_kernel_template(lhs) {
            Ok(Pattern::Kernel(lhs.clone()))
        } else {
            bad()
        }
    }

    /// Adds a rule at highest priority, replacing one with the same pattern.
    pub fn add_rule(&mut self, vars: Vec<SymId>, lhs: &SExpr, rhs: SExpr) -> Result<()> {
        let pat = self.pattern_of(lhs)?;
        let vars = own_vars(lhs, &vars);
        self.alg.rules.retain(|r| !(r.lhs == pat && r.vars == vars));
        self.alg.rules.insert(0, Rule { vars, lhs: pat, rhs });
        self.alg.generation += 1;
        Ok(())
    }

    /// Removes rules whose pattern matches; returns how many went.
    pub fn clear_rule(&mut self, vars: &[SymId], lhs: &SExpr) -> Result<usize> {
        let pat = self.pattern_of(lhs)?;
        let vars = own_vars(lhs, vars);
        let before = self.alg.rules.len();
        self.alg.rules.retain(|r| !(r.lhs == pat && r.vars == vars));
        Ok(before - self.alg.rules.len())
    }

    fn count_firing(&mut self, rule: &Rule) -> Result<()> {
        self.alg.firings += 1;
        if self.alg.firings > self.alg.firing_cap {
            let lhs = match &rule.lhs {
                Pattern::Kernel(k) => self.print(k),
                Pattern::Power(k, n) => format!("{}**{}", self.print(k), n),
                Pattern::Product(a, b) => format!("{}*{}", self.print(a), self.print(b)),
            };
            return Err(LispError::Alg(format!(
                "rule application limit exceeded (circular rule for {lhs}?)"
            )));
        }
        Ok(())
    }

    /// Replacement for a kernel under the first matching kernel rule.
    pub(crate) fn match_kernel_rule(&mut self, form: &SExpr) -> Result<Option<SExpr>> {
        let mut found = None;
        for rule in &self.alg.rules {
            if let Pattern::Kernel(pat) = &rule.lhs {
                let mut b = Vec::new();
                if match_template(pat, form, &rule.vars, &mut b) {
                    found = Some((rule.clone(), substitute(&rule.rhs, &b)));
                    break;
                }
            }
        }
        match found {
            Some((rule, rhs)) => {
                self.count_firing(&rule)?;
                Ok(Some(rhs))
            }
            None => Ok(None),
        }
    }

    fn has_monomial_rules(&self) -> bool {
        self.alg
            .rules
            .iter()
            .any(|r| !matches!(r.lhs, Pattern::Kernel(_)))
    }

    /// Applies power and product rules until none fires.
    pub fn subs2(&mut self, sq: &Sq) -> Result<Sq> {
        if !self.has_monomial_rules() {
            return Ok(sq.clone());
        }
        let num = self.subs2f(&sq.num)?;
        let den = self.subs2f(&sq.den)?;
        self.quotsq(&num, &den)
    }

    fn subs2f(&mut self, f: &Sf) -> Result<Sq> {
        if f.as_num().is_some() {
            return Ok(Sq::from_sf(f.clone()));
        }
        let monos = self.monomials(f);
        let mut changed = false;
        let mut acc = Sq::zero();
        for m in &monos {
            let term = match self.rewrite_monomial(m)? {
                Some(r) => {
                    changed = true;
                    r
                }
                None => Sq::from_sf(self.monomial_sf(m)?),
            };
            acc = self.addsq(&acc, &term)?;
        }
        if !changed {
            return Ok(Sq::from_sf(f.clone()));
        }
        let num = self.subs2f(&acc.num)?;
        let den = self.subs2f(&acc.den)?;
        self.quotsq(&num, &den)
    }

    fn rewrite_monomial(&mut self, m: &Monomial) -> Result<Option<Sq>> {
        let rules = self.alg.rules.clone();
        for rule in &rules {
            let hit = match &rule.lhs {
                Pattern::Kernel(_) => None,
                Pattern::Power(pat, n) => self.match_power(m, pat, *n, &rule.vars),
                Pattern::Product(a, b) => self.match_product(m, a, b, &rule.vars),
            };
            if let Some((rest, bindings)) = hit {
                self.count_firing(rule)?;
                let rhs = substitute(&rule.rhs, &bindings);
                let r = self.simp(&rhs)?;
                let rest = self.monomial_sf(&rest)?;
                return Ok(Some(self.multsq(&Sq::from_sf(rest), &r)?));
            }
        }
        Ok(None)
    }

    fn match_power(
        &self,
        m: &Monomial,
        pat: &SExpr,
        n: u32,
        vars: &[SymId],
    ) -> Option<(Monomial, Bindings)> {
        for (i, (k, d)) in m.powers.iter().enumerate() {
            if *d < n {
                continue;
            }
            let mut b = Vec::new();
            if match_template(pat, self.alg.kernels.form(*k), vars, &mut b) {
                return Some((reduce_power(m, i, n), b));
            }
        }
        None
    }

    fn match_product(
        &self,
        m: &Monomial,
        pa: &SExpr,
        pb: &SExpr,
        vars: &[SymId],
    ) -> Option<(Monomial, Bindings)> {
        for (i, (ki, _)) in m.powers.iter().enumerate() {
            for (j, (kj, _)) in m.powers.iter().enumerate() {
                if i == j {
                    continue;
                }
                let mut b = Vec::new();
                if match_template(pa, self.alg.kernels.form(*ki), vars, &mut b)
                    && match_template(pb, self.alg.kernels.form(*kj), vars, &mut b)
                {
                    let first = reduce_power(m, i.max(j), 1);
                    let rest = reduce_power(&first, i.min(j), 1);
                    return Some((rest, b));
                }
            }
        }
        None
    }

    pub fn rule_count(&self) -> usize {
        self.alg.rules.len()
    }
}

// A FOR ALL list may name variables that only some of its rules use.
fn own_vars(lhs: &SExpr, vars: &[SymId]) -> Vec<SymId> {
    vars.iter().copied().filter(|v| occurs(lhs, *v)).collect()
}

fn occurs(e: &SExpr, v: SymId) -> bool {
    match e {
        SExpr::Sym(id) => *id == v,
        SExpr::Pair(p) => occurs(&p.car, v) || occurs(&p.cdr, v),
        _ => false,
    }
}

// Lowers the degree of the i-th power by n, dropping it at zero. Removing
// an entry never disturbs the index of an earlier one.
fn reduce_power(m: &Monomial, i: usize, n: u32) -> Monomial {
    let mut powers: Vec<(KernelId, u32)> = m.powers.clone();
    if powers[i].1 == n {
        powers.remove(i);
    } else {
        powers[i].1 -= n;
    }
    Monomial {
        coeff: m.coeff.clone(),
        powers,
    }
}
