//! Partial differentiation of standard quotients.

use super::sf::Sf;
use super::sq::Sq;
use super::KernelId;
use crate::error::Result;
use crate::lisp::{Int, Interp, SExpr};

fn contains(form: &SExpr, x: &SExpr) -> bool {
    if form == x {
        return true;
    }
    match form {
        SExpr::Pair(p) => p.cdr.iter().any(|a| contains(a, x)),
        _ => false,
    }
}

impl Interp {
    pub fn diffsq(&mut self, p: &Sq, x: KernelId) -> Result<Sq> {
        let dn = self.diffsf(&p.num, x)?;
        if p.den.is_one() {
            return Ok(dn);
        }
        let dd = self.diffsf(&p.den, x)?;
        let den = Sq::from_sf(p.den.clone());
        let a = self.quotsq(&dn, &den)?;
        let b = self.quotsq(&dd, &den)?;
        let b = self.multsq(p, &b)?;
        self.subsq(&a, &b)
    }

    fn diffsf(&mut self, f: &Sf, x: KernelId) -> Result<Sq> {
        let t = match f {
            Sf::Num(_) => return Ok(Sq::zero()),
            Sf::Term(t) => t.clone(),
        };
        let mut acc = self.diffsf(&t.red, x)?;
        let dk = self.diff_kernel(t.k, x)?;
        if !dk.is_zero() {
            let lower = Sf::power(t.k, t.deg - 1);
            let m = self.multf(&lower, &t.coeff)?;
            let m = self.multd(&Int::small(t.deg as i64), &m)?;
            let term = self.multsq(&Sq::from_sf(m), &dk)?;
            acc = self.addsq(&acc, &term)?;
        }
        let dc = self.diffsf(&t.coeff, x)?;
        if !dc.is_zero() {
            let pw = Sq::from_sf(Sf::power(t.k, t.deg));
            let term = self.multsq(&pw, &dc)?;
            acc = self.addsq(&acc, &term)?;
        }
        Ok(acc)
    }

    fn diff_kernel(&mut self, k: KernelId, x: KernelId) -> Result<Sq> {
        if k == x {
            return Ok(Sq::one());
        }
        let form = self.alg.kernels.form(k).clone();
        let xform = self.alg.kernels.form(x).clone();
        if !contains(&form, &xform) {
            return Ok(Sq::zero());
        }
        let SExpr::Pair(p) = &form else {
            return Ok(Sq::zero());
        };
        let head = p.car.as_sym();
        let args = p.cdr.to_vec();
        let s = &self.s;
        let (sin, cos, expt, log, sqrt, df, e) = (s.sin, s.cos, s.expt, s.log, s.sqrt, s.df, s.e);
        match (head, args.as_slice()) {
            (Some(h), [u]) if h == sin || h == cos => {
                let du = self.diff_prefix(u, x)?;
                let other = if h == sin { cos } else { sin };
                let g = SExpr::list([SExpr::Sym(other), u.clone()]);
                let g = self.simp(&g)?;
                let r = self.multsq(&g, &du)?;
                if h == cos {
                    self.negsq(&r)
                } else {
                    Ok(r)
                }
            }
            (Some(h), [b, u]) if h == expt => {
                let ksq = Sq::from_sf(Sf::power(k, 1));
                let du = self.diff_prefix(u, x)?;
                if b.as_sym() == Some(e) {
                    return self.multsq(&ksq, &du);
                }
                // d(b**u) = b**u * (u' log b + u b'/b)
                let logb = SExpr::list([SExpr::Sym(log), b.clone()]);
                let logb = self.simp(&logb)?;
                let t1 = self.multsq(&du, &logb)?;
                let db = self.diff_prefix(b, x)?;
                let usq = self.simp(u)?;
                let bsq = self.simp(b)?;
                let t2 = self.multsq(&usq, &db)?;
                let t2 = self.quotsq(&t2, &bsq)?;
                let sum = self.addsq(&t1, &t2)?;
                self.multsq(&ksq, &sum)
            }
            (Some(h), [u]) if h == log => {
                let du = self.diff_prefix(u, x)?;
                let usq = self.simp(u)?;
                self.quotsq(&du, &usq)
            }
            (Some(h), [u]) if h == sqrt => {
                let du = self.diff_prefix(u, x)?;
                let ksq = Sq::from_sf(Sf::power(k, 1));
                let two_k = self.multsq(&Sq::small(2), &ksq)?;
                self.quotsq(&du, &two_k)
            }
            (Some(h), [f, rest @ ..]) if h == df => {
                if !contains(f, &xform) {
                    return Ok(Sq::zero());
                }
                let mut vars = parse_df_vars(rest);
                match vars.iter_mut().find(|(v, _)| *v == xform) {
                    Some(slot) => slot.1 += 1,
                    None => vars.push((xform, 1)),
                }
                self.df_kernel(f.clone(), vars)
            }
            _ => self.df_kernel(form, vec![(xform, 1)]),
        }
    }

    fn diff_prefix(&mut self, u: &SExpr, x: KernelId) -> Result<Sq> {
        let usq = self.simp(u)?;
        self.diffsq(&usq, x)
    }

    /// Builds `df(f, v1, n1, v2, n2, ...)` with variables in kernel order and
    /// orders of one omitted.
    fn df_kernel(&mut self, f: SExpr, mut vars: Vec<(SExpr, i64)>) -> Result<Sq> {
        let mut keyed: Vec<(KernelId, SExpr, i64)> = vars
            .drain(..)
            .map(|(v, n)| (self.alg.kernels.intern(&v), v, n))
            .collect();
        keyed.sort_by(|a, b| self.alg.kernels.cmp(a.0, b.0));
        let mut items = vec![SExpr::Sym(self.s.df), f];
        for (_, v, n) in keyed {
            items.push(v);
            if n != 1 {
                items.push(SExpr::Fix(n));
            }
        }
        self.kernel_sq(&SExpr::list(items))
    }
}

fn parse_df_vars(rest: &[SExpr]) -> Vec<(SExpr, i64)> {
    let mut out: Vec<(SExpr, i64)> = Vec::new();
    let mut i = 0;
    while i < rest.len() {
        let v = rest[i].clone();
        let mut n = 1;
        if let Some(c) = rest.get(i + 1).and_then(SExpr::as_fix) {
            n = c;
            i += 1;
        }
        out.push((v, n));
        i += 1;
    }
    out
}
