//! Standard forms: recursive sparse polynomials over the integers.
//!
//! A form is a number or a leading term `k**d * c + r` where `k` is the
//! main kernel, `c` only involves kernels ordered below `k`, and `r` is
//! either free of `k` or has a lower degree in it.

use std::cmp::Ordering;
use std::sync::Arc;

use super::kernel::KernelId;
use crate::error::{LispError, Result};
use crate::lisp::{Int, Interp};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Sf {
    Num(Int),
    Term(Arc<Term>),
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Term {
    pub k: KernelId,
    pub deg: u32,
    pub coeff: Sf,
    pub red: Sf,
}

impl Sf {
    pub fn zero() -> Sf {
        Sf::Num(Int::zero())
    }

    pub fn one() -> Sf {
        Sf::Num(Int::one())
    }

    pub fn small(n: i64) -> Sf {
        Sf::Num(Int::small(n))
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Sf::Num(n) if n.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Sf::Num(n) if n.is_one())
    }

    pub fn as_num(&self) -> Option<&Int> {
        match self {
            Sf::Num(n) => Some(n),
            Sf::Term(_) => None,
        }
    }

    pub fn as_term(&self) -> Option<&Term> {
        match self {
            Sf::Term(t) => Some(t),
            Sf::Num(_) => None,
        }
    }

    /// `k**deg * coeff + red`, assuming the result is canonical.
    pub fn term(k: KernelId, deg: u32, coeff: Sf, red: Sf) -> Sf {
        debug_assert!(!coeff.is_zero() && deg > 0);
        Sf::Term(Arc::new(Term { k, deg, coeff, red }))
    }

    /// The power `k**deg`.
    pub fn power(k: KernelId, deg: u32) -> Sf {
        if deg == 0 {
            Sf::one()
        } else {
            Sf::term(k, deg, Sf::one(), Sf::zero())
        }
    }

    /// Leading numeric coefficient, found by following leading coefficients.
    pub fn lnc(&self) -> &Int {
        let mut f = self;
        loop {
            match f {
                Sf::Num(n) => return n,
                Sf::Term(t) => f = &t.coeff,
            }
        }
    }

    /// Degree in `k` when `k` is the main kernel, else zero.
    pub fn degree_in(&self, k: KernelId) -> u32 {
        match self {
            Sf::Term(t) if t.k == k => t.deg,
            _ => 0,
        }
    }

    /// Coefficients with respect to the main kernel `k`, including the
    /// degree-zero part when it is nonzero.
    pub fn coeffs_in(&self, k: KernelId) -> Vec<Sf> {
        let mut out = Vec::new();
        let mut f = self;
        loop {
            match f {
                Sf::Term(t) if t.k == k => {
                    out.push(t.coeff.clone());
                    f = &t.red;
                }
                _ => {
                    if !f.is_zero() {
                        out.push(f.clone());
                    }
                    return out;
                }
            }
        }
    }

    /// Every kernel occurring anywhere in the form.
    pub fn kernels(&self, out: &mut Vec<KernelId>) {
        let mut f = self;
        while let Sf::Term(t) = f {
            if !out.contains(&t.k) {
                out.push(t.k);
            }
            t.coeff.kernels(out);
            f = &t.red;
        }
    }

    /// Number of monomials.
    pub fn size(&self) -> usize {
        match self {
            Sf::Num(n) => usize::from(!n.is_zero()),
            Sf::Term(t) => t.coeff.size() + t.red.size(),
        }
    }
}

/// A monomial: integer coefficient times kernel powers, main kernel first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: Int,
    pub powers: Vec<(KernelId, u32)>,
}

impl Interp {
    /// True when `a` ranks above `b` as a main kernel.
    pub(crate) fn kernel_before(&self, a: KernelId, b: KernelId) -> bool {
        self.alg.kernels.cmp(a, b) == Ordering::Less
    }

    pub fn addf(&mut self, a: &Sf, b: &Sf) -> Result<Sf> {
        self.tick()?;
        match (a, b) {
            (Sf::Num(x), Sf::Num(y)) => Ok(Sf::Num(self.int_add(x, y)?)),
            _ if a.is_zero() => Ok(b.clone()),
            _ if b.is_zero() => Ok(a.clone()),
            (Sf::Num(_), Sf::Term(t)) | (Sf::Term(t), Sf::Num(_)) => {
                let other = if matches!(a, Sf::Num(_)) { a } else { b };
                let red = self.addf(other, &t.red)?;
                Ok(Sf::term(t.k, t.deg, t.coeff.clone(), red))
            }
            (Sf::Term(s), Sf::Term(t)) => {
                if s.k == t.k {
                    match s.deg.cmp(&t.deg) {
                        Ordering::Equal => {
                            let c = self.addf(&s.coeff, &t.coeff)?;
                            let r = self.addf(&s.red, &t.red)?;
                            if c.is_zero() {
                                Ok(r)
                            } else {
                                Ok(Sf::term(s.k, s.deg, c, r))
                            }
                        }
                        Ordering::Greater => {
                            let r = self.addf(&s.red, b)?;
                            Ok(Sf::term(s.k, s.deg, s.coeff.clone(), r))
                        }
                        Ordering::Less => {
                            let r = self.addf(a, &t.red)?;
                            Ok(Sf::term(t.k, t.deg, t.coeff.clone(), r))
                        }
                    }
                } else if self.kernel_before(s.k, t.k) {
                    let r = self.addf(&s.red, b)?;
                    Ok(Sf::term(s.k, s.deg, s.coeff.clone(), r))
                } else {
                    let r = self.addf(a, &t.red)?;
                    Ok(Sf::term(t.k, t.deg, t.coeff.clone(), r))
                }
            }
        }
    }

    /// Multiplies every coefficient by a nonzero integer.
    pub fn multd(&mut self, n: &Int, f: &Sf) -> Result<Sf> {
        if n.is_zero() {
            return Ok(Sf::zero());
        }
        if n.is_one() {
            return Ok(f.clone());
        }
        match f {
            Sf::Num(m) => Ok(Sf::Num(self.int_mul(n, m)?)),
            Sf::Term(t) => {
                let c = self.multd(n, &t.coeff)?;
                let r = self.multd(n, &t.red)?;
                Ok(Sf::term(t.k, t.deg, c, r))
            }
        }
    }

    pub fn negf(&mut self, f: &Sf) -> Result<Sf> {
        self.multd(&Int::small(-1), f)
    }

    pub fn subf(&mut self, a: &Sf, b: &Sf) -> Result<Sf> {
        let nb = self.negf(b)?;
        self.addf(a, &nb)
    }

    pub fn multf(&mut self, a: &Sf, b: &Sf) -> Result<Sf> {
        match (a, b) {
            (Sf::Num(x), _) => self.multd(x, b),
            (_, Sf::Num(y)) => self.multd(y, a),
            (Sf::Term(s), Sf::Term(t)) => {
                self.tick()?;
                if s.k == t.k {
                    let c = self.multf(&s.coeff, &t.coeff)?;
                    let lead = Sf::term(s.k, s.deg + t.deg, c, Sf::zero());
                    let r1 = self.multf(&s.red, b)?;
                    let lt_s = Sf::term(s.k, s.deg, s.coeff.clone(), Sf::zero());
                    let r2 = self.multf(&lt_s, &t.red)?;
                    let rest = self.addf(&r1, &r2)?;
                    self.addf(&lead, &rest)
                } else if self.kernel_before(s.k, t.k) {
                    let c = self.multf(&s.coeff, b)?;
                    let lead = Sf::term(s.k, s.deg, c, Sf::zero());
                    let rest = self.multf(&s.red, b)?;
                    self.addf(&lead, &rest)
                } else {
                    let c = self.multf(a, &t.coeff)?;
                    let lead = Sf::term(t.k, t.deg, c, Sf::zero());
                    let rest = self.multf(a, &t.red)?;
                    self.addf(&lead, &rest)
                }
            }
        }
    }

    pub fn exptf(&mut self, f: &Sf, n: u32) -> Result<Sf> {
        if let Sf::Term(t) = f {
            if t.red.is_zero() && t.coeff.is_one() {
                return Ok(Sf::power(t.k, t.deg * n));
            }
        }
        let mut result = Sf::one();
        let mut base = f.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = self.multf(&result, &base)?;
            }
            n >>= 1;
            if n > 0 {
                base = self.multf(&base, &base)?;
            }
        }
        Ok(result)
    }

    /// Exact quotient `a / b`, or `None` when `b` does not divide `a`.
    pub fn quotf(&mut self, a: &Sf, b: &Sf) -> Result<Option<Sf>> {
        if b.is_zero() {
            return Err(LispError::DivZero);
        }
        if a.is_zero() {
            return Ok(Some(Sf::zero()));
        }
        if b.is_one() {
            return Ok(Some(a.clone()));
        }
        if a == b {
            return Ok(Some(Sf::one()));
        }
        match (a, b) {
            (_, Sf::Num(n)) => self.quotd(a, n),
            (Sf::Num(_), Sf::Term(_)) => Ok(None),
            (Sf::Term(s), Sf::Term(t)) => {
                if s.k == t.k {
                    self.quotf_same(a, b, t)
                } else if self.kernel_before(s.k, t.k) {
                    let Some(c) = self.quotf(&s.coeff, b)? else {
                        return Ok(None);
                    };
                    let Some(r) = self.quotf(&s.red, b)? else {
                        return Ok(None);
                    };
                    Ok(Some(Sf::term(s.k, s.deg, c, r)))
                } else {
                    Ok(None)
                }
            }
        }
    }

    fn quotd(&mut self, a: &Sf, n: &Int) -> Result<Option<Sf>> {
        match a {
            Sf::Num(m) => Ok(self.int_divides(m, n)?.map(Sf::Num)),
            Sf::Term(t) => {
                let Some(c) = self.quotd(&t.coeff, n)? else {
                    return Ok(None);
                };
                let Some(r) = self.quotd(&t.red, n)? else {
                    return Ok(None);
                };
                Ok(Some(Sf::term(t.k, t.deg, c, r)))
            }
        }
    }

    // Long division when both forms share the main kernel.
    fn quotf_same(&mut self, a: &Sf, b: &Sf, bt: &Term) -> Result<Option<Sf>> {
        let k = bt.k;
        let mut rem = a.clone();
        let mut quot = Sf::zero();
        loop {
            if rem.is_zero() {
                return Ok(Some(quot));
            }
            let (rdeg, rcoeff) = match &rem {
                Sf::Term(r) if r.k == k => (r.deg, r.coeff.clone()),
                _ => return Ok(None),
            };
            if rdeg < bt.deg {
                return Ok(None);
            }
            let Some(q1) = self.quotf(&rcoeff, &bt.coeff)? else {
                return Ok(None);
            };
            let qterm = if rdeg == bt.deg {
                q1
            } else {
                Sf::term(k, rdeg - bt.deg, q1, Sf::zero())
            };
            let prod = self.multf(&qterm, b)?;
            rem = self.subf(&rem, &prod)?;
            quot = self.addf(&quot, &qterm)?;
        }
    }

    /// Greatest common divisor with positive leading numeric coefficient.
    pub fn gcdf(&mut self, a: &Sf, b: &Sf) -> Result<Sf> {
        let g = self.gcdf1(a, b)?;
        self.normalize_sign(&g)
    }

    pub(crate) fn normalize_sign(&mut self, f: &Sf) -> Result<Sf> {
        if f.lnc().is_negative() {
            self.negf(f)
        } else {
            Ok(f.clone())
        }
    }

    fn gcdf1(&mut self, a: &Sf, b: &Sf) -> Result<Sf> {
        if a.is_zero() {
            return Ok(b.clone());
        }
        if b.is_zero() || a == b {
            return Ok(a.clone());
        }
        match (a, b) {
            (Sf::Num(x), Sf::Num(y)) => Ok(Sf::Num(self.int_gcd(x, y)?)),
            (Sf::Num(x), Sf::Term(_)) => self.gcd_with_int(b, x),
            (Sf::Term(_), Sf::Num(y)) => self.gcd_with_int(a, y),
            (Sf::Term(s), Sf::Term(t)) => {
                if s.k == t.k {
                    self.gcd_same(a, b, s.k)
                } else if self.kernel_before(s.k, t.k) {
                    self.gcd_coeffs(a, s.k, b)
                } else {
                    self.gcd_coeffs(b, t.k, a)
                }
            }
        }
    }

    fn gcd_with_int(&mut self, f: &Sf, n: &Int) -> Result<Sf> {
        let mut g = n.clone();
        self.numeric_content_into(f, &mut g)?;
        Ok(Sf::Num(g))
    }

    fn numeric_content_into(&mut self, f: &Sf, g: &mut Int) -> Result<()> {
        match f {
            Sf::Num(n) => {
                *g = self.int_gcd(g, n)?;
            }
            Sf::Term(t) => {
                if g.is_one() {
                    return Ok(());
                }
                self.numeric_content_into(&t.coeff, g)?;
                self.numeric_content_into(&t.red, g)?;
            }
        }
        Ok(())
    }

    // gcd of `g` with every coefficient of `f` in its main kernel `k`.
    fn gcd_coeffs(&mut self, f: &Sf, k: KernelId, g: &Sf) -> Result<Sf> {
        let mut acc = g.clone();
        for c in f.coeffs_in(k) {
            acc = self.gcdf1(&acc, &c)?;
            if matches!(&acc, Sf::Num(n) if n.is_one() || n.as_fix() == Some(-1)) {
                return Ok(Sf::one());
            }
        }
        Ok(acc)
    }

    /// Content of `f` with respect to its main kernel `k`.
    fn content_in(&mut self, f: &Sf, k: KernelId) -> Result<Sf> {
        let mut acc = Sf::zero();
        for c in f.coeffs_in(k) {
            acc = self.gcdf1(&acc, &c)?;
            if matches!(&acc, Sf::Num(n) if n.is_one() || n.as_fix() == Some(-1)) {
                return Ok(Sf::one());
            }
        }
        self.normalize_sign(&acc)
    }

    fn primitive_part(&mut self, f: &Sf, k: KernelId) -> Result<(Sf, Sf)> {
        let c = self.content_in(f, k)?;
        let p = self
            .quotf(f, &c)?
            .ok_or_else(|| LispError::Alg("content does not divide polynomial".into()))?;
        Ok((c, p))
    }

    // Primitive Euclidean remainder sequence in the shared main kernel.
    fn gcd_same(&mut self, a: &Sf, b: &Sf, k: KernelId) -> Result<Sf> {
        if let Some(_q) = self.quotf(a, b)? {
            return Ok(b.clone());
        }
        if let Some(_q) = self.quotf(b, a)? {
            return Ok(a.clone());
        }
        let (ca, mut pa) = self.primitive_part(a, k)?;
        let (cb, mut pb) = self.primitive_part(b, k)?;
        let content = self.gcdf1(&ca, &cb)?;
        if pa.degree_in(k) < pb.degree_in(k) {
            std::mem::swap(&mut pa, &mut pb);
        }
        let g = loop {
            let r = self.prem(&pa, &pb, k)?;
            if r.is_zero() {
                break pb;
            }
            if r.degree_in(k) == 0 {
                break Sf::one();
            }
            let (_, pr) = self.primitive_part(&r, k)?;
            pa = pb;
            pb = pr;
        };
        let g = if g.degree_in(k) == 0 {
            Sf::one()
        } else {
            self.primitive_part(&g, k)?.1
        };
        self.multf(&content, &g)
    }

    /// Pseudo-remainder of `a` by `b` in the main kernel `k`.
    fn prem(&mut self, a: &Sf, b: &Sf, k: KernelId) -> Result<Sf> {
        let bt = match b {
            Sf::Term(t) if t.k == k => t.clone(),
            _ => return Ok(Sf::zero()),
        };
        let mut r = a.clone();
        loop {
            let (rdeg, rcoeff, rred) = match &r {
                Sf::Term(t) if t.k == k && t.deg >= bt.deg => (t.deg, t.coeff.clone(), t.red.clone()),
                _ => return Ok(r),
            };
            let left = self.multf(&bt.coeff, &rred)?;
            let shift = Sf::power(k, rdeg - bt.deg);
            let m = self.multf(&rcoeff, &shift)?;
            let right = self.multf(&m, &bt.red)?;
            r = self.subf(&left, &right)?;
        }
    }

    /// Flattens a form into monomials in canonical order.
    pub fn monomials(&self, f: &Sf) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut prefix = Vec::new();
        collect_monomials(f, &mut prefix, &mut out);
        out
    }

    /// Rebuilds a form from a monomial.
    pub fn monomial_sf(&mut self, m: &Monomial) -> Result<Sf> {
        let mut f = Sf::Num(m.coeff.clone());
        for (k, d) in m.powers.iter().rev() {
            let p = Sf::power(*k, *d);
            f = self.multf(&p, &f)?;
        }
        Ok(f)
    }
}

fn collect_monomials(f: &Sf, prefix: &mut Vec<(KernelId, u32)>, out: &mut Vec<Monomial>) {
    let mut f = f;
    loop {
        match f {
            Sf::Num(n) => {
                if !n.is_zero() {
                    out.push(Monomial {
                        coeff: n.clone(),
                        powers: prefix.clone(),
                    });
                }
                return;
            }
            Sf::Term(t) => {
                prefix.push((t.k, t.deg));
                collect_monomials(&t.coeff, prefix, out);
                prefix.pop();
                f = &t.red;
            }
        }
    }
}
