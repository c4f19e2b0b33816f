//! Standard quotients: rational functions kept in lowest terms.

use super::sf::Sf;
use crate::error::{LispError, Result};
use crate::lisp::{Int, Interp};

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Sq {
    pub num: Sf,
    pub den: Sf,
}

impl Sq {
    pub fn zero() -> Sq {
        Sq {
            num: Sf::zero(),
            den: Sf::one(),
        }
    }

    pub fn one() -> Sq {
        Sq::from_sf(Sf::one())
    }

    pub fn from_sf(num: Sf) -> Sq {
        Sq { num, den: Sf::one() }
    }

    pub fn from_int(n: Int) -> Sq {
        Sq::from_sf(Sf::Num(n))
    }

    pub fn small(n: i64) -> Sq {
        Sq::from_sf(Sf::small(n))
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The integer value, when the quotient is one.
    pub fn as_int(&self) -> Option<&Int> {
        if self.den.is_one() {
            self.num.as_num()
        } else {
            None
        }
    }
}

impl Interp {
    /// Builds a canonical quotient: common factors cancelled (under MCD)
    /// and the denominator's leading numeric coefficient positive.
    pub fn mk_sq(&mut self, num: Sf, den: Sf) -> Result<Sq> {
        if den.is_zero() {
            return Err(LispError::DivZero);
        }
        if num.is_zero() {
            return Ok(Sq::zero());
        }
        let (mut num, mut den) = (num, den);
        if !den.is_one() && self.alg.switches.mcd {
            let g = self.gcdf(&num, &den)?;
            if !g.is_one() {
                num = self.quotf(&num, &g)?.ok_or_else(gcd_failure)?;
                den = self.quotf(&den, &g)?.ok_or_else(gcd_failure)?;
            }
        }
        if den.lnc().is_negative() {
            num = self.negf(&num)?;
            den = self.negf(&den)?;
        }
        Ok(Sq { num, den })
    }

    pub fn addsq(&mut self, p: &Sq, q: &Sq) -> Result<Sq> {
        if p.is_zero() {
            return Ok(q.clone());
        }
        if q.is_zero() {
            return Ok(p.clone());
        }
        if p.den == q.den {
            let n = self.addf(&p.num, &q.num)?;
            if p.den.is_one() {
                return Ok(Sq::from_sf(n));
            }
            return self.mk_sq(n, p.den.clone());
        }
        if !self.alg.switches.mcd {
            let a = self.multf(&p.num, &q.den)?;
            let b = self.multf(&q.num, &p.den)?;
            let n = self.addf(&a, &b)?;
            let d = self.multf(&p.den, &q.den)?;
            return self.mk_sq(n, d);
        }
        let g = self.gcdf(&p.den, &q.den)?;
        let pd = self.quotf(&p.den, &g)?.ok_or_else(gcd_failure)?;
        let qd = self.quotf(&q.den, &g)?.ok_or_else(gcd_failure)?;
        let a = self.multf(&p.num, &qd)?;
        let b = self.multf(&q.num, &pd)?;
        let n = self.addf(&a, &b)?;
        let d = self.multf(&pd, &q.den)?;
        self.mk_sq(n, d)
    }

    pub fn negsq(&mut self, p: &Sq) -> Result<Sq> {
        Ok(Sq {
            num: self.negf(&p.num)?,
            den: p.den.clone(),
        })
    }

    pub fn subsq(&mut self, p: &Sq, q: &Sq) -> Result<Sq> {
        let nq = self.negsq(q)?;
        self.addsq(p, &nq)
    }

    pub fn multsq(&mut self, p: &Sq, q: &Sq) -> Result<Sq> {
        if p.is_zero() || q.is_zero() {
            return Ok(Sq::zero());
        }
        if p.den.is_one() && q.den.is_one() {
            return Ok(Sq::from_sf(self.multf(&p.num, &q.num)?));
        }
        if !self.alg.switches.mcd {
            let n = self.multf(&p.num, &q.num)?;
            let d = self.multf(&p.den, &q.den)?;
            return self.mk_sq(n, d);
        }
        let g1 = self.gcdf(&p.num, &q.den)?;
        let g2 = self.gcdf(&q.num, &p.den)?;
        let pn = self.quotf(&p.num, &g1)?.ok_or_else(gcd_failure)?;
        let qd = self.quotf(&q.den, &g1)?.ok_or_else(gcd_failure)?;
        let qn = self.quotf(&q.num, &g2)?.ok_or_else(gcd_failure)?;
        let pd = self.quotf(&p.den, &g2)?.ok_or_else(gcd_failure)?;
        let n = self.multf(&pn, &qn)?;
        let d = self.multf(&pd, &qd)?;
        if d.lnc().is_negative() {
            let n = self.negf(&n)?;
            let d = self.negf(&d)?;
            return Ok(Sq { num: n, den: d });
        }
        Ok(Sq { num: n, den: d })
    }

    pub fn invsq(&mut self, p: &Sq) -> Result<Sq> {
        if p.is_zero() {
            return Err(LispError::DivZero);
        }
        let (mut n, mut d) = (p.den.clone(), p.num.clone());
        if d.lnc().is_negative() {
            n = self.negf(&n)?;
            d = self.negf(&d)?;
        }
        Ok(Sq { num: n, den: d })
    }

    pub fn quotsq(&mut self, p: &Sq, q: &Sq) -> Result<Sq> {
        let iq = self.invsq(q)?;
        self.multsq(p, &iq)
    }

    pub fn exptsq(&mut self, p: &Sq, n: i64) -> Result<Sq> {
        if n == 0 {
            return Ok(Sq::one());
        }
        if n < 0 {
            if p.is_zero() {
                return Err(LispError::DivZero);
            }
            let pos = self.exptsq(p, -n)?;
            return self.invsq(&pos);
        }
        let e = u32::try_from(n).map_err(|_| LispError::Alg(format!("exponent {n} too large")))?;
        let num = self.exptf(&p.num, e)?;
        let den = self.exptf(&p.den, e)?;
        Ok(Sq { num, den })
    }
}

fn gcd_failure() -> LispError {
    LispError::Alg("internal error: gcd does not divide".into())
}
