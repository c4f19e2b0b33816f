//! A small parser and evaluator for printed algebraic output, written
//! separately from the system so it can serve as a check on it.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Num(BigInt),
    Var(String),
    Call(String, Vec<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, Box<Node>),
    Neg(Box<Node>),
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(BigInt),
    Id(String),
    Sym(char),
    Pow,
}

fn lex(s: &str) -> Result<Vec<Tok>, String> {
    let cs: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            let t: String = cs[st..i].iter().collect();
            out.push(Tok::Num(t.parse().unwrap()));
        } else if c.is_alphabetic() || c == '!' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '!' || cs[i] == '*' && cs[i - 1] == '!') {
                i += 1;
            }
            let t: String = cs[st..i].iter().filter(|c| **c != '!').collect();
            out.push(Tok::Id(t.to_uppercase()));
        } else if c == '*' && cs.get(i + 1) == Some(&'*') {
            out.push(Tok::Pow);
            i += 2;
        } else if c == '^' {
            out.push(Tok::Pow);
            i += 1;
        } else if "+-*/(),".contains(c) {
            out.push(Tok::Sym(c));
            i += 1;
        } else {
            return Err(format!("unexpected character {c:?} in {s:?}"));
        }
    }
    Ok(out)
}

struct P {
    t: Vec<Tok>,
    i: usize,
}

impl P {
    fn peek(&self) -> Option<&Tok> {
        self.t.get(self.i)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.i += 1;
            true
        } else {
            false
        }
    }

    fn sum(&mut self) -> Result<Node, String> {
        let mut l = if self.eat('-') {
            Node::Neg(Box::new(self.product()?))
        } else {
            self.eat('+');
            self.product()?
        };
        loop {
            if self.eat('+') {
                l = Node::Add(Box::new(l), Box::new(self.product()?));
            } else if self.eat('-') {
                l = Node::Sub(Box::new(l), Box::new(self.product()?));
            } else {
                return Ok(l);
            }
        }
    }

    fn product(&mut self) -> Result<Node, String> {
        let mut l = self.power()?;
        loop {
            if self.eat('*') {
                l = Node::Mul(Box::new(l), Box::new(self.power()?));
            } else if self.eat('/') {
                l = Node::Div(Box::new(l), Box::new(self.power()?));
            } else {
                return Ok(l);
            }
        }
    }

    fn power(&mut self) -> Result<Node, String> {
        let b = self.atom()?;
        if self.peek() == Some(&Tok::Pow) {
            self.i += 1;
            let e = if self.eat('-') {
                Node::Neg(Box::new(self.atom()?))
            } else {
                self.atom()?
            };
            return Ok(Node::Pow(Box::new(b), Box::new(e)));
        }
        Ok(b)
    }

    fn atom(&mut self) -> Result<Node, String> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.i += 1;
                Ok(Node::Num(n))
            }
            Some(Tok::Id(name)) => {
                self.i += 1;
                if self.eat('(') {
                    let mut args = vec![self.sum()?];
                    while self.eat(',') {
                        args.push(self.sum()?);
                    }
                    if !self.eat(')') {
                        return Err("missing )".into());
                    }
                    Ok(Node::Call(name, args))
                } else {
                    Ok(Node::Var(name))
                }
            }
            Some(Tok::Sym('(')) => {
                self.i += 1;
                let e = self.sum()?;
                if !self.eat(')') {
                    return Err("missing )".into());
                }
                Ok(e)
            }
            Some(Tok::Sym('-')) => {
                self.i += 1;
                Ok(Node::Neg(Box::new(self.power()?)))
            }
            t => Err(format!("unexpected token {t:?}")),
        }
    }
}

pub fn parse(s: &str) -> Result<Node, String> {
    let mut p = P { t: lex(s)?, i: 0 };
    let n = p.sum()?;
    if p.i != p.t.len() {
        return Err(format!("trailing input in {s:?}"));
    }
    Ok(n)
}

/// Number systems the evaluator can work in.
pub trait Field: Clone {
    fn from_int(n: &BigInt) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Self {
        Self::from_int(&BigInt::zero()).sub(self)
    }
    fn powi(&self, n: i64) -> Option<Self> {
        let mut r = Self::from_int(&BigInt::one());
        for _ in 0..n.unsigned_abs() {
            r = r.mul(self);
        }
        if n < 0 {
            Self::from_int(&BigInt::one()).div(&r)
        } else {
            Some(r)
        }
    }
    /// Power with a non-integer exponent, where meaningful.
    fn pow_general(&self, _e: &Self) -> Option<Self> {
        None
    }
}

impl Field for f64 {
    fn from_int(n: &BigInt) -> f64 {
        n.to_f64().unwrap()
    }
    fn add(&self, o: &f64) -> f64 {
        self + o
    }
    fn sub(&self, o: &f64) -> f64 {
        self - o
    }
    fn mul(&self, o: &f64) -> f64 {
        self * o
    }
    fn div(&self, o: &f64) -> Option<f64> {
        Some(self / o)
    }
    fn powi(&self, n: i64) -> Option<f64> {
        Some(f64::powi(*self, n as i32))
    }
    fn pow_general(&self, e: &f64) -> Option<f64> {
        Some(self.powf(*e))
    }
}

impl Field for BigRational {
    fn from_int(n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Option<Self> {
        if o.is_zero() {
            None
        } else {
            Some(self / o)
        }
    }
}

/// Supplies values for variables (empty argument list) and calls.
pub type Env<'a, F> = &'a dyn Fn(&str, &[Node]) -> Option<F>;

pub fn eval<F: Field>(n: &Node, env: Env<'_, F>) -> Option<F> {
    Some(match n {
        Node::Num(k) => F::from_int(k),
        Node::Var(v) => env(v, &[])?,
        Node::Call(f, args) => env(f, args)?,
        Node::Add(a, b) => eval(a, env)?.add(&eval(b, env)?),
        Node::Sub(a, b) => eval(a, env)?.sub(&eval(b, env)?),
        Node::Mul(a, b) => eval(a, env)?.mul(&eval(b, env)?),
        Node::Div(a, b) => eval(a, env)?.div(&eval(b, env)?)?,
        Node::Neg(a) => eval(a, env)?.neg(),
        Node::Pow(a, b) => {
            let base = eval(a, env)?;
            match int_value(b) {
                Some(k) => base.powi(k)?,
                None => base.pow_general(&eval(b, env)?)?,
            }
        }
    })
}

/// The value of a literal integer node, if it is one.
pub fn int_value(n: &Node) -> Option<i64> {
    match n {
        Node::Num(k) => k.to_i64(),
        Node::Neg(a) => int_value(a).map(|k| -k),
        _ => None,
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Relative closeness for float comparisons.
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

pub fn is_integer(r: &BigRational) -> bool {
    r.denom().is_one() || r.denom().abs().is_one()
}
