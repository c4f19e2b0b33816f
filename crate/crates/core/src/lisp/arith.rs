//! Fixnum arithmetic with overflow handoff to the prelude's digit-list
//! routines. The kernel itself never does multi-digit arithmetic.

use std::cmp::Ordering;
use std::sync::Arc;

use super::types::{Bignum, Int, SExpr, RADIX, RADIX_DIGITS};
use super::Interp;
use crate::error::{LispError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Plus,
    Times,
    Difference,
    Quotient,
    Remainder,
    Minus,
    Lessp,
    Greaterp,
}

impl Interp {
    /// Builds a canonical integer from a sign and least-significant-first
    /// digits; values in fixnum range come back as fixnums.
    pub fn make_big(&mut self, negative: bool, digits: &[i64]) -> SExpr {
        let mut len = digits.len();
        while len > 0 && digits[len - 1] == 0 {
            len -= 1;
        }
        let digits = &digits[..len];
        if digits.is_empty() {
            return SExpr::Fix(0);
        }
        if digits.len() <= 5 {
            let mut v: i128 = 0;
            for d in digits.iter().rev() {
                v = v * RADIX as i128 + *d as i128;
            }
            if negative {
                v = -v;
            }
            if let Ok(n) = i64::try_from(v) {
                return SExpr::Fix(n);
            }
        }
        SExpr::Big(Arc::new(Bignum {
            negative,
            digits: SExpr::list(digits.iter().map(|d| SExpr::Fix(*d)).collect::<Vec<_>>()),
        }))
    }

    pub(crate) fn bignum_from_decimal(&mut self, negative: bool, text: &str) -> SExpr {
        let bytes = text.as_bytes();
        let mut digits = Vec::new();
        let mut end = bytes.len();
        while end > 0 {
            let start = end.saturating_sub(RADIX_DIGITS);
            let chunk = &text[start..end];
            digits.push(chunk.parse::<i64>().unwrap_or(0));
            end = start;
        }
        self.make_big(negative, &digits)
    }

    fn expect_number(&self, e: &SExpr) -> Result<()> {
        if e.is_number() {
            Ok(())
        } else {
            Err(LispError::Type(format!("{} is not a number", self.print(e))))
        }
    }

    /// Arithmetic entry point shared by the Lisp builtins and the algebra
    /// layer. `b` is ignored for `Minus`.
    pub fn fix_arith(&mut self, op: ArithOp, a: &SExpr, b: &SExpr) -> Result<SExpr> {
        self.expect_number(a)?;
        if op != ArithOp::Minus {
            self.expect_number(b)?;
        }
        if let (SExpr::Fix(x), SExpr::Fix(y)) = (a, b) {
            let (x, y) = (*x, *y);
            let fast = match op {
                ArithOp::Plus => x.checked_add(y).map(SExpr::Fix),
                ArithOp::Times => x.checked_mul(y).map(SExpr::Fix),
                ArithOp::Difference => x.checked_sub(y).map(SExpr::Fix),
                ArithOp::Quotient => {
                    if y == 0 {
                        return Err(LispError::DivZero);
                    }
                    x.checked_div(y).map(SExpr::Fix)
                }
                ArithOp::Remainder => {
                    if y == 0 {
                        return Err(LispError::DivZero);
                    }
                    x.checked_rem(y).map(SExpr::Fix)
                }
                ArithOp::Minus => x.checked_neg().map(SExpr::Fix),
                ArithOp::Lessp => Some(SExpr::from_bool(x < y)),
                ArithOp::Greaterp => Some(SExpr::from_bool(x > y)),
            };
            if let Some(r) = fast {
                return Ok(r);
            }
        } else if op == ArithOp::Minus {
            if let SExpr::Fix(x) = a {
                if let Some(n) = x.checked_neg() {
                    return Ok(SExpr::Fix(n));
                }
            }
        }
        let s = &self.s;
        let (f, args) = match op {
            ArithOp::Plus => (s.bigadd, vec![a.clone(), b.clone()]),
            ArithOp::Times => (s.bigtimes, vec![a.clone(), b.clone()]),
            ArithOp::Difference => (s.bigdifference, vec![a.clone(), b.clone()]),
            ArithOp::Quotient => (s.bigquotient, vec![a.clone(), b.clone()]),
            ArithOp::Remainder => (s.bigremainder, vec![a.clone(), b.clone()]),
            ArithOp::Minus => (s.bigminus, vec![a.clone()]),
            ArithOp::Lessp => (s.biglessp, vec![a.clone(), b.clone()]),
            ArithOp::Greaterp => (s.biglessp, vec![b.clone(), a.clone()]),
        };
        self.apply_sym(f, &args)
    }

    fn int_op(&mut self, op: ArithOp, a: &Int, b: &Int) -> Result<Int> {
        let r = self.fix_arith(op, a.as_sexpr(), b.as_sexpr())?;
        Int::from_sexpr(&r)
            .ok_or_else(|| LispError::Type(format!("arithmetic returned {}", self.print(&r))))
    }

    pub fn int_add(&mut self, a: &Int, b: &Int) -> Result<Int> {
        self.int_op(ArithOp::Plus, a, b)
    }

    pub fn int_sub(&mut self, a: &Int, b: &Int) -> Result<Int> {
        self.int_op(ArithOp::Difference, a, b)
    }

    pub fn int_mul(&mut self, a: &Int, b: &Int) -> Result<Int> {
        if a.is_one() {
            return Ok(b.clone());
        }
        if b.is_one() {
            return Ok(a.clone());
        }
        self.int_op(ArithOp::Times, a, b)
    }

    pub fn int_quot(&mut self, a: &Int, b: &Int) -> Result<Int> {
        if b.is_one() {
            return Ok(a.clone());
        }
        self.int_op(ArithOp::Quotient, a, b)
    }

    pub fn int_rem(&mut self, a: &Int, b: &Int) -> Result<Int> {
        self.int_op(ArithOp::Remainder, a, b)
    }

    pub fn int_neg(&mut self, a: &Int) -> Result<Int> {
        self.int_op(ArithOp::Minus, a, a)
    }

    pub fn int_abs(&mut self, a: &Int) -> Result<Int> {
        if a.is_negative() {
            self.int_neg(a)
        } else {
            Ok(a.clone())
        }
    }

    pub fn int_cmp(&mut self, a: &Int, b: &Int) -> Result<Ordering> {
        if let (Some(x), Some(y)) = (a.as_fix(), b.as_fix()) {
            return Ok(x.cmp(&y));
        }
        if a == b {
            return Ok(Ordering::Equal);
        }
        let lt = self.fix_arith(ArithOp::Lessp, a.as_sexpr(), b.as_sexpr())?;
        Ok(if lt.is_nil() {
            Ordering::Greater
        } else {
            Ordering::Less
        })
    }

    /// Nonnegative greatest common divisor.
    pub fn int_gcd(&mut self, a: &Int, b: &Int) -> Result<Int> {
        if let (Some(x), Some(y)) = (a.as_fix(), b.as_fix()) {
            let (mut x, mut y) = ((x as i128).abs(), (y as i128).abs());
            while y != 0 {
                (x, y) = (y, x % y);
            }
            if let Ok(n) = i64::try_from(x) {
                return Ok(Int::small(n));
            }
        }
        let mut x = self.int_abs(a)?;
        let mut y = self.int_abs(b)?;
        while !y.is_zero() {
            let r = self.int_rem(&x, &y)?;
            x = y;
            y = r;
        }
        Ok(x)
    }

    /// Exact division test: returns the quotient when `b` divides `a`.
    pub fn int_divides(&mut self, a: &Int, b: &Int) -> Result<Option<Int>> {
        if b.is_one() {
            return Ok(Some(a.clone()));
        }
        if b.is_zero() {
            return Err(LispError::DivZero);
        }
        let r = self.int_rem(a, b)?;
        if r.is_zero() {
            Ok(Some(self.int_quot(a, b)?))
        } else {
            Ok(None)
        }
    }
}
