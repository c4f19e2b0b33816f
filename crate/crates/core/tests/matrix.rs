mod common;

use common::session;
use minireduce::Session;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn run(s: &mut Session, stmt: &str) -> String {
    s.eval_statement(stmt).unwrap_or_else(|e| panic!("{stmt}: {e}"))
}

fn simp(s: &mut Session, expr: &str) -> String {
    s.simplify(expr).unwrap_or_else(|e| panic!("{expr}: {e}"))
}

fn mat_literal(rows: &[Vec<i64>]) -> String {
    let rows: Vec<String> = rows
        .iter()
        .map(|r| format!("({})", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
        .collect();
    format!("mat({})", rows.join(","))
}

// Exact determinant by fraction-carrying Gaussian elimination.
fn det_oracle(rows: &[Vec<i64>]) -> BigRational {
    let n = rows.len();
    let mut a: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|x| BigRational::from_integer(BigInt::from(*x))).collect())
        .collect();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c].clone();
        for r in c + 1..n {
            let f = a[r][c].clone() / a[c][c].clone();
            for k in c..n {
                let v = a[c][k].clone() * f.clone();
                a[r][k] -= v;
            }
        }
    }
    det
}

// Assignment lines printed for an n by n identity with NERO off.
fn identity_lines(name: &str, n: usize) -> Vec<String> {
    let mut v = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            v.push(format!("{name}({i},{j}) := {}", u8::from(i == j)));
        }
    }
    v
}

fn random_matrix(rng: &mut StdRng, n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|_| (0..n).map(|_| rng.gen_range(-9..10)).collect()).collect()
}

#[test]
fn identity_product() {
    let mut s = session();
    run(&mut s, "matrix m(2,2),i2(2,2)");
    run(&mut s, "m:=mat((a,b),(c,d))");
    run(&mut s, "i2:=mat((1,0),(0,1))");
    assert_eq!(simp(&mut s, "det(m*i2-m)"), "0");
    assert_eq!(simp(&mut s, "det(i2*m)-det m"), "0");
}

#[test]
fn symbolic_two_by_two_determinant() {
    let mut s = session();
    let d = simp(&mut s, "det mat((a11,a12),(a21,a22))");
    let expected = simp(&mut s, "a11*a22-a12*a21");
    assert_eq!(d, expected);
}

#[test]
fn numeric_determinants() {
    let mut s = session();
    assert_eq!(simp(&mut s, "det mat((1,2),(3,4))"), "-2");
    assert_eq!(simp(&mut s, "det mat((2,0,0),(0,3,0),(0,0,4))"), "24");
    assert_eq!(simp(&mut s, "det mat((1,2,3),(4,5,6),(7,8,9))"), "0");
}

#[test]
fn determinants_match_elimination_oracle() {
    let mut s = session();
    let mut rng = StdRng::seed_from_u64(11);
    for n in 1..=6 {
        for _ in 0..4 {
            let m = random_matrix(&mut rng, n);
            let got = simp(&mut s, &format!("det {}", mat_literal(&m)));
            assert_eq!(got, det_oracle(&m).to_string(), "{m:?}");
        }
    }
}

#[test]
fn row_swap_negates_determinant() {
    let mut s = session();
    let mut rng = StdRng::seed_from_u64(3);
    for n in 2..=5 {
        let m = random_matrix(&mut rng, n);
        let mut swapped = m.clone();
        swapped.swap(0, n - 1);
        let a = simp(&mut s, &format!("det {}", mat_literal(&m)));
        let b = simp(&mut s, &format!("-det {}", mat_literal(&swapped)));
        assert_eq!(a, b);
    }
}

#[test]
fn singular_matrix_has_no_inverse() {
    let mut s = session();
    run(&mut s, "matrix m(2,2)");
    run(&mut s, "m:=mat((1,2),(2,4))");
    let err = s.eval_statement("1/m").unwrap_err();
    assert!(err.to_lowercase().contains("singular"), "{err}");
}

#[test]
fn two_by_two_inverse() {
    let mut s = session();
    run(&mut s, "matrix m(2,2),n(2,2)");
    run(&mut s, "m:=mat((1,2),(3,4))");
    let out = run(&mut s, "n:=1/m");
    assert!(out.contains("N(1,1) := -2"), "{out}");
    assert!(out.contains("N(2,1) := 3/2"), "{out}");
    assert!(out.contains("N(2,2) := -1/2"), "{out}");
}

#[test]
fn symbolic_inverse_times_matrix_is_identity() {
    let mut s = session();
    run(&mut s, "matrix m(2,2),p(2,2)");
    run(&mut s, "m:=mat((a,b),(c,d))");
    let out = run(&mut s, "p:=m*(1/m)");
    let lines: Vec<&str> = out.lines().filter(|l| !l.is_empty()).collect();
    assert_eq!(lines, identity_lines("P", 2));
}

#[test]
fn random_products_with_inverse() {
    let mut s = session();
    let mut rng = StdRng::seed_from_u64(29);
    run(&mut s, "matrix m(3,3),p(3,3)");
    let mut tried = 0;
    while tried < 5 {
        let m = random_matrix(&mut rng, 3);
        if det_oracle(&m).is_zero() {
            continue;
        }
        tried += 1;
        run(&mut s, &format!("m:={}", mat_literal(&m)));
        let out = run(&mut s, "p:=m*(1/m)");
        let lines: Vec<&str> = out.lines().filter(|l| !l.is_empty()).collect();
        assert_eq!(lines, identity_lines("P", 3), "{m:?}");
    }
}

#[test]
fn determinant_is_multiplicative() {
    let mut s = session();
    let mut rng = StdRng::seed_from_u64(5);
    run(&mut s, "matrix a(3,3),b(3,3)");
    for _ in 0..5 {
        let a = random_matrix(&mut rng, 3);
        let b = random_matrix(&mut rng, 3);
        run(&mut s, &format!("a:={}", mat_literal(&a)));
        run(&mut s, &format!("b:={}", mat_literal(&b)));
        assert_eq!(simp(&mut s, "det(a*b)-det(a)*det(b)"), "0");
    }
}

#[test]
fn shape_mismatch_is_an_error() {
    let mut s = session();
    run(&mut s, "matrix a(2,2),b(3,3)");
    run(&mut s, "a:=mat((1,2),(3,4))");
    run(&mut s, "b:=mat((1,0,0),(0,1,0),(0,0,1))");
    assert!(s.eval_statement("a*b").is_err());
    assert!(s.eval_statement("a+b").is_err());
    assert_eq!(simp(&mut s, "det(a**2)"), "4");
}
