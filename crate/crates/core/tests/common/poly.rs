//! Dense-map multivariate polynomials with integer coefficients, just
//! enough to run the f-and-g recurrence independently of the system.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::numeval::Field;

/// Variables are MU, EPSILON and SIGMA, in that exponent order.
pub const VARS: [&str; 3] = ["MU", "EPSILON", "SIGMA"];

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(pub BTreeMap<[u32; 3], BigInt>);

impl Poly {
    pub fn constant(c: i64) -> Poly {
        let mut m = BTreeMap::new();
        if c != 0 {
            m.insert([0, 0, 0], BigInt::from(c));
        }
        Poly(m)
    }

    pub fn var(i: usize) -> Poly {
        let mut e = [0; 3];
        e[i] = 1;
        Poly(BTreeMap::from([(e, BigInt::one())]))
    }

    fn insert(&mut self, e: [u32; 3], c: BigInt) {
        let slot = self.0.entry(e).or_insert_with(BigInt::zero);
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&e);
        }
    }

    pub fn plus(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.0 {
            r.insert(*e, c.clone());
        }
        r
    }

    pub fn minus(&self, o: &Poly) -> Poly {
        let mut r = self.clone();
        for (e, c) in &o.0 {
            r.insert(*e, -c.clone());
        }
        r
    }

    pub fn times(&self, o: &Poly) -> Poly {
        let mut r = Poly::default();
        for (ea, ca) in &self.0 {
            for (eb, cb) in &o.0 {
                let e = [ea[0] + eb[0], ea[1] + eb[1], ea[2] + eb[2]];
                r.insert(e, ca * cb);
            }
        }
        r
    }

    pub fn deriv(&self, v: usize) -> Poly {
        let mut r = Poly::default();
        for (e, c) in &self.0 {
            if e[v] > 0 {
                let mut e2 = *e;
                e2[v] -= 1;
                r.insert(e2, c * BigInt::from(e[v]));
            }
        }
        r
    }
}

impl Field for Poly {
    fn from_int(n: &BigInt) -> Poly {
        let mut p = Poly::default();
        p.insert([0, 0, 0], n.clone());
        p
    }
    fn add(&self, o: &Poly) -> Poly {
        self.plus(o)
    }
    fn sub(&self, o: &Poly) -> Poly {
        self.minus(o)
    }
    fn mul(&self, o: &Poly) -> Poly {
        self.times(o)
    }
    fn div(&self, _o: &Poly) -> Option<Poly> {
        None
    }
}

/// Variable lookup for evaluating printed output as a polynomial.
pub fn poly_env(name: &str, args: &[super::numeval::Node]) -> Option<Poly> {
    if !args.is_empty() {
        return None;
    }
    VARS.iter().position(|v| *v == name).map(Poly::var)
}

/// F(i) and G(i) for i = 1..=n, from the recurrence
/// f' = -mu*g + deps*df(f,epsilon) + dmu*df(f,mu) + dsig*df(f,sigma),
/// g' = f + deps*df(g,epsilon) + dmu*df(g,mu) + dsig*df(g,sigma),
/// with deps = -sigma*(mu+2*epsilon), dmu = -3*mu*sigma,
/// dsig = epsilon-2*sigma**2, starting from f = 1, g = 0.
pub fn f_and_g(n: usize) -> Vec<(Poly, Poly)> {
    let (mu, eps, sig) = (Poly::var(0), Poly::var(1), Poly::var(2));
    let two = Poly::constant(2);
    let deps = Poly::constant(0).minus(&sig.times(&mu.plus(&two.times(&eps))));
    let dmu = Poly::constant(-3).times(&mu).times(&sig);
    let dsig = eps.minus(&two.times(&sig).times(&sig));
    let step = |p: &Poly| {
        deps.times(&p.deriv(1))
            .plus(&dmu.times(&p.deriv(0)))
            .plus(&dsig.times(&p.deriv(2)))
    };
    let mut f = Poly::constant(1);
    let mut g = Poly::constant(0);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let f2 = Poly::constant(0).minus(&mu.times(&g)).plus(&step(&f));
        let g2 = f.plus(&step(&g));
        out.push((f2.clone(), g2.clone()));
        f = f2;
        g = g2;
    }
    out
}
