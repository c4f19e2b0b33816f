//! Conversion from standard quotients back to prefix form.

use super::sf::{Monomial, Sf};
use super::sq::Sq;
use super::KernelId;
use crate::error::Result;
use crate::lisp::{Interp, SExpr};

impl Interp {
    pub fn prepsq(&mut self, sq: &Sq) -> Result<SExpr> {
        let num = self.prepsf(&sq.num)?;
        if sq.den.is_one() {
            return Ok(num);
        }
        let den = self.prepsf(&sq.den)?;
        Ok(SExpr::list([SExpr::Sym(self.s.quotient), num, den]))
    }

    pub fn prepsf(&mut self, f: &Sf) -> Result<SExpr> {
        let monos = self.monomials(f);
        let mut terms = Vec::with_capacity(monos.len());
        for m in &monos {
            terms.push(self.prep_monomial(m)?);
        }
        Ok(match terms.len() {
            0 => SExpr::Fix(0),
            1 => terms.pop().unwrap_or(SExpr::Fix(0)),
            _ => {
                terms.insert(0, SExpr::Sym(self.s.plus));
                SExpr::list(terms)
            }
        })
    }

    pub(crate) fn prep_power(&self, k: KernelId, d: u32) -> SExpr {
        let form = self.alg.kernels.form(k).clone();
        if d == 1 {
            form
        } else {
            SExpr::list([SExpr::Sym(self.s.expt), form, SExpr::Fix(d as i64)])
        }
    }

    pub(crate) fn prep_monomial(&mut self, m: &Monomial) -> Result<SExpr> {
        if m.powers.is_empty() {
            return Ok(m.coeff.as_sexpr().clone());
        }
        let negative = m.coeff.is_negative();
        let c = if negative {
            self.int_neg(&m.coeff)?
        } else {
            m.coeff.clone()
        };
        let mut factors: Vec<SExpr> = Vec::new();
        if !c.is_one() {
            factors.push(c.into_sexpr());
        }
        for (k, d) in &m.powers {
            factors.push(self.prep_power(*k, *d));
        }
        let body = if factors.len() == 1 {
            factors.pop().unwrap_or(SExpr::Fix(1))
        } else {
            factors.insert(0, SExpr::Sym(self.s.times));
            SExpr::list(factors)
        };
        Ok(if negative {
            SExpr::list([SExpr::Sym(self.s.minus), body])
        } else {
            body
        })
    }
}
