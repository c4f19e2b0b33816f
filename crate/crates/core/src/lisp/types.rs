//! The universal Lisp value and its immediate building blocks.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::{Arc, Mutex};

/// Radix of the digit lists used by bignums.
pub const RADIX: i64 = 10_000;
/// Decimal digits per bignum digit.
pub const RADIX_DIGITS: usize = 4;

/// Index of an interned symbol inside one interpreter's symbol table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymId(pub u32);

impl SymId {
    pub const NIL: SymId = SymId(0);
    pub const T: SymId = SymId(1);
}

/// A Lisp datum.
///
/// Pairs are immutable and reference counted, so reclamation is automatic
/// and no cycle can be built through them.
#[derive(Clone)]
pub enum SExpr {
    Sym(SymId),
    Fix(i64),
    Big(Arc<Bignum>),
    Str(Arc<str>),
    Vector(Arc<Mutex<Vec<SExpr>>>),
    Pair(Arc<Pair>),
}

pub struct Pair {
    pub car: SExpr,
    pub cdr: SExpr,
}

// Long lists would otherwise be freed by recursion down the cdr chain.
impl Drop for Pair {
    fn drop(&mut self) {
        let mut next = std::mem::replace(&mut self.cdr, SExpr::NIL);
        while let SExpr::Pair(p) = next {
            match Arc::try_unwrap(p) {
                Ok(mut pair) => next = std::mem::replace(&mut pair.cdr, SExpr::NIL),
                Err(_) => break,
            }
        }
    }
}

/// An integer too large for a fixnum: a sign and a list of digit fixnums,
/// least significant first, every digit in `0..RADIX`, top digit nonzero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bignum {
    pub negative: bool,
    pub digits: SExpr,
}

impl Bignum {
    /// Digits as a vector, least significant first.
    pub fn digit_vec(&self) -> Vec<i64> {
        self.digits
            .iter()
            .map(|d| d.as_fix().unwrap_or(0))
            .collect()
    }

    /// Decimal rendering of the magnitude.
    pub fn magnitude_string(&self) -> String {
        let ds = self.digit_vec();
        let mut s = String::new();
        for (i, d) in ds.iter().rev().enumerate() {
            if i == 0 {
                s.push_str(&d.to_string());
            } else {
                s.push_str(&format!("{:0width$}", d, width = RADIX_DIGITS));
            }
        }
        s
    }
}

impl SExpr {
    pub const NIL: SExpr = SExpr::Sym(SymId::NIL);
    pub const T: SExpr = SExpr::Sym(SymId::T);

    pub fn cons(car: SExpr, cdr: SExpr) -> SExpr {
        SExpr::Pair(Arc::new(Pair { car, cdr }))
    }

    pub fn string(s: &str) -> SExpr {
        SExpr::Str(Arc::from(s))
    }

    pub fn list<I>(items: I) -> SExpr
    where
        I: IntoIterator<Item = SExpr>,
        I::IntoIter: DoubleEndedIterator,
    {
        items
            .into_iter()
            .rev()
            .fold(SExpr::NIL, |acc, x| SExpr::cons(x, acc))
    }

    pub fn from_bool(b: bool) -> SExpr {
        if b {
            SExpr::T
        } else {
            SExpr::NIL
        }
    }

    pub fn is_nil(&self) -> bool {
        matches!(self, SExpr::Sym(SymId::NIL))
    }

    pub fn is_pair(&self) -> bool {
        matches!(self, SExpr::Pair(_))
    }

    pub fn is_atom(&self) -> bool {
        !self.is_pair()
    }

    pub fn is_number(&self) -> bool {
        matches!(self, SExpr::Fix(_) | SExpr::Big(_))
    }

    pub fn as_sym(&self) -> Option<SymId> {
        match self {
            SExpr::Sym(s) => Some(*s),
            _ => None,
        }
    }

    pub fn as_fix(&self) -> Option<i64> {
        match self {
            SExpr::Fix(n) => Some(*n),
            _ => None,
        }
    }

    pub fn car(&self) -> Option<&SExpr> {
        match self {
            SExpr::Pair(p) => Some(&p.car),
            _ => None,
        }
    }

    pub fn cdr(&self) -> Option<&SExpr> {
        match self {
            SExpr::Pair(p) => Some(&p.cdr),
            _ => None,
        }
    }

    /// Iterates the cars of a (possibly improper) list.
    pub fn iter(&self) -> ListIter<'_> {
        ListIter { cur: self }
    }

    pub fn to_vec(&self) -> Vec<SExpr> {
        self.iter().cloned().collect()
    }

    pub fn list_len(&self) -> usize {
        self.iter().count()
    }

    /// Identity in the sense of EQ.
    pub fn eq_id(&self, other: &SExpr) -> bool {
        match (self, other) {
            (SExpr::Sym(a), SExpr::Sym(b)) => a == b,
            (SExpr::Fix(a), SExpr::Fix(b)) => a == b,
            (SExpr::Big(a), SExpr::Big(b)) => Arc::ptr_eq(a, b),
            (SExpr::Str(a), SExpr::Str(b)) => Arc::ptr_eq(a, b),
            (SExpr::Vector(a), SExpr::Vector(b)) => Arc::ptr_eq(a, b),
            (SExpr::Pair(a), SExpr::Pair(b)) => Arc::ptr_eq(a, b),
            _ => false,
        }
    }
}

pub struct ListIter<'a> {
    cur: &'a SExpr,
}

impl<'a> Iterator for ListIter<'a> {
    type Item = &'a SExpr;

    fn next(&mut self) -> Option<&'a SExpr> {
        match self.cur {
            SExpr::Pair(p) => {
                self.cur = &p.cdr;
                Some(&p.car)
            }
            _ => None,
        }
    }
}

/// Structural equality (EQUAL).
impl PartialEq for SExpr {
    fn eq(&self, other: &SExpr) -> bool {
        let (mut a, mut b) = (self, other);
        loop {
            match (a, b) {
                (SExpr::Pair(x), SExpr::Pair(y)) => {
                    if Arc::ptr_eq(x, y) {
                        return true;
                    }
                    if x.car != y.car {
                        return false;
                    }
                    a = &x.cdr;
                    b = &y.cdr;
                }
                (SExpr::Sym(x), SExpr::Sym(y)) => return x == y,
                (SExpr::Fix(x), SExpr::Fix(y)) => return x == y,
                (SExpr::Big(x), SExpr::Big(y)) => return x == y,
                (SExpr::Str(x), SExpr::Str(y)) => return x == y,
                (SExpr::Vector(x), SExpr::Vector(y)) => {
                    if Arc::ptr_eq(x, y) {
                        return true;
                    }
                    let xv = x.lock().unwrap().clone();
                    let yv = y.lock().unwrap().clone();
                    return xv == yv;
                }
                _ => return false,
            }
        }
    }
}

impl Eq for SExpr {}

impl Hash for SExpr {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let mut cur = self;
        loop {
            match cur {
                SExpr::Pair(p) => {
                    0u8.hash(state);
                    p.car.hash(state);
                    cur = &p.cdr;
                }
                SExpr::Sym(s) => return (1u8, s).hash(state),
                SExpr::Fix(n) => return (2u8, n).hash(state),
                SExpr::Big(b) => {
                    3u8.hash(state);
                    return b.hash(state);
                }
                SExpr::Str(s) => return (4u8, s).hash(state),
                SExpr::Vector(v) => {
                    5u8.hash(state);
                    return v.lock().unwrap().hash(state);
                }
            }
        }
    }
}

impl fmt::Debug for SExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SExpr::Sym(s) => write!(f, "#{}", s.0),
            SExpr::Fix(n) => write!(f, "{n}"),
            SExpr::Big(b) => write!(
                f,
                "{}{}",
                if b.negative { "-" } else { "" },
                b.magnitude_string()
            ),
            SExpr::Str(s) => write!(f, "{s:?}"),
            SExpr::Vector(v) => write!(f, "{:?}", v.lock().unwrap()),
            SExpr::Pair(_) => {
                write!(f, "(")?;
                let mut cur = self;
                let mut first = true;
                while let SExpr::Pair(p) = cur {
                    if !first {
                        write!(f, " ")?;
                    }
                    first = false;
                    write!(f, "{:?}", p.car)?;
                    cur = &p.cdr;
                }
                if !cur.is_nil() {
                    write!(f, " . {cur:?}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// An exact integer as used by the algebra layer: always a fixnum or a
/// canonical bignum.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Int(SExpr);

impl Int {
    pub fn small(n: i64) -> Int {
        Int(SExpr::Fix(n))
    }

    pub fn zero() -> Int {
        Int(SExpr::Fix(0))
    }

    pub fn one() -> Int {
        Int(SExpr::Fix(1))
    }

    /// Wraps a numeric datum; `None` for non-numbers.
    pub fn from_sexpr(e: &SExpr) -> Option<Int> {
        e.is_number().then(|| Int(e.clone()))
    }

    pub fn as_sexpr(&self) -> &SExpr {
        &self.0
    }

    pub fn into_sexpr(self) -> SExpr {
        self.0
    }

    pub fn as_fix(&self) -> Option<i64> {
        self.0.as_fix()
    }

    pub fn is_zero(&self) -> bool {
        matches!(self.0, SExpr::Fix(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self.0, SExpr::Fix(1))
    }

    pub fn is_negative(&self) -> bool {
        match &self.0 {
            SExpr::Fix(n) => *n < 0,
            SExpr::Big(b) => b.negative,
            _ => false,
        }
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}
