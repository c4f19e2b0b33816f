//! Randomized property suites. Each returns Err with the minimal failing
//! case so both the unit tests and the acceptance harness can use them.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use std::cell::RefCell;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use minireduce::lisp::{Interp, SExpr};

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    // A fixed seed keeps acceptance runs reproducible.
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &[7; 32]);
    TestRunner::new_with_rng(config, rng)
}

fn report<T: std::fmt::Debug>(
    name: &str,
    r: Result<(), proptest::test_runner::TestError<T>>,
) -> Result<(), String> {
    r.map_err(|e| format!("{name}: {e}"))
}

fn interp() -> Interp {
    Interp::new().expect("prelude loads")
}

/// Integer polynomial expressions over W, X, Y, Z.
#[derive(Clone, Debug)]
pub enum Poly {
    Int(i64),
    Var(usize),
    Add(Box<Poly>, Box<Poly>),
    Sub(Box<Poly>, Box<Poly>),
    Mul(Box<Poly>, Box<Poly>),
    Pow(Box<Poly>, u32),
}

const NAMES: [&str; 4] = ["W", "X", "Y", "Z"];

pub fn poly_strategy() -> impl Strategy<Value = Poly> {
    let leaf = prop_oneof![(-9i64..10).prop_map(Poly::Int), (0usize..4).prop_map(Poly::Var)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Poly::Add(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Poly::Sub(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Poly::Mul(Box::new(a), Box::new(b))),
            (inner, 0u32..4).prop_map(|(a, n)| Poly::Pow(Box::new(a), n)),
        ]
    })
}

impl Poly {
    pub fn prefix(&self) -> String {
        match self {
            Poly::Int(n) => n.to_string(),
            Poly::Var(v) => NAMES[*v].to_string(),
            Poly::Add(a, b) => format!("(PLUS {} {})", a.prefix(), b.prefix()),
            Poly::Sub(a, b) => format!("(DIFFERENCE {} {})", a.prefix(), b.prefix()),
            Poly::Mul(a, b) => format!("(TIMES {} {})", a.prefix(), b.prefix()),
            Poly::Pow(a, n) => format!("(EXPT {} {})", a.prefix(), n),
        }
    }

    pub fn eval(&self, at: &[BigInt; 4]) -> BigInt {
        match self {
            Poly::Int(n) => BigInt::from(*n),
            Poly::Var(v) => at[*v].clone(),
            Poly::Add(a, b) => a.eval(at) + b.eval(at),
            Poly::Sub(a, b) => a.eval(at) - b.eval(at),
            Poly::Mul(a, b) => a.eval(at) * b.eval(at),
            Poly::Pow(a, n) => num_traits::pow(a.eval(at), *n as usize),
        }
    }

    /// An equal expression with different shape: arguments commuted and
    /// products distributed over sums.
    pub fn rearranged(&self) -> Poly {
        match self {
            Poly::Add(a, b) => Poly::Add(Box::new(b.rearranged()), Box::new(a.rearranged())),
            Poly::Mul(a, b) => match (a.as_ref(), b.as_ref()) {
                (l, Poly::Add(x, y)) | (Poly::Add(x, y), l) => Poly::Add(
                    Box::new(Poly::Mul(Box::new(x.rearranged()), Box::new(l.rearranged()))),
                    Box::new(Poly::Mul(Box::new(l.rearranged()), Box::new(y.rearranged()))),
                ),
                _ => Poly::Mul(Box::new(b.rearranged()), Box::new(a.rearranged())),
            },
            Poly::Sub(a, b) => Poly::Add(
                Box::new(Poly::Mul(Box::new(Poly::Int(-1)), Box::new(b.rearranged()))),
                Box::new(a.rearranged()),
            ),
            Poly::Pow(a, n) => Poly::Pow(Box::new(a.rearranged()), *n),
            leaf => leaf.clone(),
        }
    }
}

/// simp(e1) and simp(e2) are structurally equal exactly when e1 - e2
/// vanishes at 30 random integer points.
pub fn canonical_soundness(cases: u32) -> Result<(), String> {
    let it = RefCell::new(interp());
    let pair = (poly_strategy(), poly_strategy(), any::<bool>(), proptest::collection::vec(-50i64..50, 120));
    let r = runner(cases).run(&pair, |(a, b, same, pts)| {
        let mut it = it.borrow_mut();
        let b = if same { a.rearranged() } else { b };
        let fa = it.read_str(&a.prefix()).unwrap();
        let fb = it.read_str(&b.prefix()).unwrap();
        let sa = it.simp_top(&fa).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let sb = it.simp_top(&fb).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let vanishes = pts.chunks(4).all(|p| {
            let at = [p[0], p[1], p[2], p[3]].map(BigInt::from);
            a.eval(&at) == b.eval(&at)
        });
        prop_assert_eq!(sa == sb, vanishes);
        Ok(())
    });
    report("canonical-form soundness", r)
}

/// Rational expressions: polynomials and quotients of them.
pub fn rational_strategy() -> impl Strategy<Value = String> {
    (poly_strategy(), poly_strategy(), poly_strategy()).prop_map(|(a, b, c)| {
        format!("(PLUS (QUOTIENT {} {}) (QUOTIENT {} {}))", a.prefix(), b.prefix(), c.prefix(), b.prefix())
    })
}

/// Every simplified quotient has coprime parts and a denominator whose
/// leading coefficient is positive.
pub fn lowest_terms(cases: u32) -> Result<(), String> {
    let it = RefCell::new(interp());
    let r = runner(cases).run(&rational_strategy(), |text| {
        let mut it = it.borrow_mut();
        let form = it.read_str(&text).unwrap();
        let sq = match it.simp_top(&form) {
            Ok(sq) => sq,
            // Division by a polynomial that happens to be zero.
            Err(_) => return Ok(()),
        };
        let g = it.gcdf(&sq.num, &sq.den).unwrap();
        let unit = g.as_num().and_then(|n| n.as_fix()).map(i64::abs) == Some(1);
        prop_assert!(unit || sq.num.is_zero(), "gcd {:?} for {}", g, text);
        prop_assert!(!sq.den.lnc().is_negative(), "negative denominator for {}", text);
        if sq.num.is_zero() {
            prop_assert!(sq.den.is_one());
        }
        Ok(())
    });
    report("SQ lowest terms", r)
}

fn big_strategy() -> impl Strategy<Value = BigInt> {
    (any::<bool>(), proptest::collection::vec(0u8..10, 1..=120)).prop_map(|(neg, digits)| {
        let s: String = digits.iter().map(|d| char::from(b'0' + d)).collect();
        let n: BigInt = s.parse().unwrap();
        if neg {
            -n
        } else {
            n
        }
    })
}

fn lisp_int(it: &mut Interp, form: &str) -> Result<BigInt, TestCaseError> {
    let v = it.eval_str(form).map_err(|e| TestCaseError::fail(format!("{form}: {e}")))?;
    if let SExpr::Big(_) = v {
        // No value that fits a fixnum may come back as a bignum.
        let printed = it.print(&v);
        let n: BigInt = printed.parse().unwrap();
        if i64::try_from(&n).is_ok() {
            return Err(TestCaseError::fail(format!("{form} returned unnormalized {printed}")));
        }
    }
    it.print(&v)
        .parse()
        .map_err(|_| TestCaseError::fail(format!("{form} gave non-integer {}", it.print(&v))))
}

/// Ring laws for prelude bignum arithmetic, checked against num-bigint.
pub fn bignum_ring_laws(cases: u32) -> Result<(), String> {
    let it = RefCell::new(interp());
    let triple = (big_strategy(), big_strategy(), big_strategy());
    let r = runner(cases).run(&triple, |(a, b, c)| {
        let mut it = it.borrow_mut();
        let sum_ab = lisp_int(&mut it, &format!("(PLUS2 {a} {b})"))?;
        let sum_ba = lisp_int(&mut it, &format!("(PLUS2 {b} {a})"))?;
        prop_assert_eq!(&sum_ab, &(&a + &b));
        prop_assert_eq!(&sum_ab, &sum_ba);
        let prod_ab = lisp_int(&mut it, &format!("(TIMES2 {a} {b})"))?;
        let prod_ba = lisp_int(&mut it, &format!("(TIMES2 {b} {a})"))?;
        prop_assert_eq!(&prod_ab, &(&a * &b));
        prop_assert_eq!(&prod_ab, &prod_ba);
        let l = lisp_int(&mut it, &format!("(PLUS2 (PLUS2 {a} {b}) {c})"))?;
        let r = lisp_int(&mut it, &format!("(PLUS2 {a} (PLUS2 {b} {c}))"))?;
        prop_assert_eq!(l, r);
        let l = lisp_int(&mut it, &format!("(TIMES2 (TIMES2 {a} {b}) {c})"))?;
        let r = lisp_int(&mut it, &format!("(TIMES2 {a} (TIMES2 {b} {c}))"))?;
        prop_assert_eq!(l, r);
        let l = lisp_int(&mut it, &format!("(TIMES2 {a} (PLUS2 {b} {c}))"))?;
        let r = lisp_int(&mut it, &format!("(PLUS2 (TIMES2 {a} {b}) (TIMES2 {a} {c}))"))?;
        prop_assert_eq!(l, r);
        let diff = lisp_int(&mut it, &format!("(DIFFERENCE {a} {b})"))?;
        prop_assert_eq!(diff, &a - &b);
        if !a.is_zero() {
            let q = lisp_int(&mut it, &format!("(QUOTIENT {b} {a})"))?;
            let rem = lisp_int(&mut it, &format!("(REMAINDER {b} {a})"))?;
            prop_assert_eq!(&q, &(&b / &a));
            prop_assert_eq!(&a * &q + &rem, b.clone());
            prop_assert!(rem.abs() < a.abs());
        }
        Ok(())
    });
    report("bignum ring laws", r)
}

/// Expressions in X and Y with known and unknown operators.
fn diff_strategy() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (-5i64..6).prop_map(|n| n.to_string()),
        Just("X".to_string()),
        Just("Y".to_string()),
    ];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("(PLUS {a} {b})")),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| format!("(TIMES {a} {b})")),
            (inner.clone(), 1u32..4).prop_map(|(a, n)| format!("(EXPT {a} {n})")),
            inner.clone().prop_map(|a| format!("(SIN {a})")),
            inner.clone().prop_map(|a| format!("(COS {a})")),
            inner.clone().prop_map(|a| format!("(EXPT E {a})")),
            inner.prop_map(|a| format!("(FN1 {a})")),
        ]
    })
}

/// df(u*v, x) - (u*df(v, x) + v*df(u, x)) simplifies to zero.
pub fn product_rule(cases: u32) -> Result<(), String> {
    let it = RefCell::new(interp());
    let r = runner(cases).run(&(diff_strategy(), diff_strategy()), |(u, v)| {
        let mut it = it.borrow_mut();
        let text = format!(
            "(DIFFERENCE (DF (TIMES {u} {v}) X) (PLUS (TIMES {u} (DF {v} X)) (TIMES {v} (DF {u} X))))"
        );
        let form = it.read_str(&text).unwrap();
        let sq = it.simp_top(&form).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert!(sq.is_zero(), "nonzero for u = {}, v = {}", u, v);
        Ok(())
    });
    report("differentiation product rule", r)
}

/// Printable data: symbols, integers of any size, strings, lists and
/// dotted pairs.
pub fn datum_strategy() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        "[A-Z][A-Z0-9]{0,6}",
        any::<i64>().prop_map(|n| n.to_string()),
        big_strategy().prop_map(|n| n.to_string()),
        "[a-z ]{0,8}".prop_map(|s| format!("\"{s}\"")),
        Just("NIL".to_string()),
    ];
    leaf.prop_recursive(4, 32, 4, |inner| {
        prop_oneof![
            proptest::collection::vec(inner.clone(), 0..4).prop_map(|v| format!("({})", v.join(" "))),
            (inner.clone(), inner).prop_map(|(a, b)| format!("({a} . {b})")),
        ]
    })
}

/// read(print(e)) is structurally e.
pub fn read_print(cases: u32) -> Result<(), String> {
    let it = RefCell::new(interp());
    let r = runner(cases).run(&datum_strategy(), |text| {
        let mut it = it.borrow_mut();
        let e = it.read_str(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
        let printed = it.print(&e);
        let back = it.read_str(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        prop_assert_eq!(&back, &e, "printed as {}", printed);
        prop_assert_eq!(it.print(&back), printed);
        Ok(())
    });
    report("read/print round trip", r)
}

/// compress(explode(s)) is s for names over letters, digits, * ! and =.
pub fn compress_explode(cases: u32) -> Result<(), String> {
    let it = RefCell::new(interp());
    let r = runner(cases).run(&"[A-Z][A-Z0-9*!=]{0,10}", |name| {
        let mut it = it.borrow_mut();
        let s = it.intern(&name);
        let explode = it.intern("EXPLODE");
        let compress = it.intern("COMPRESS");
        let chars = it.apply_sym(explode, &[SExpr::Sym(s)]).unwrap();
        prop_assert_eq!(chars.list_len(), name.chars().count());
        let back = it.apply_sym(compress, &[chars]).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(back.as_sym(), Some(s), "{} came back as {}", name, it.print(&back));
        Ok(())
    });
    report("compress/explode round trip", r)
}

/// All suites at the sample sizes used for acceptance.
pub fn all() -> Vec<Result<(), String>> {
    vec![
        canonical_soundness(200),
        lowest_terms(200),
        bignum_ring_laws(200),
        product_rule(100),
        read_print(200),
        compress_explode(200),
    ]
}
