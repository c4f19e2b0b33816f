//! Numeric curvature of the static spherically symmetric metric
//! diag(e^q(r), -e^p(r), -r^2, -r^2 sin^2 th), with every derivative
//! taken by fourth-order central differences.

/// Concrete stand-ins for the unknown metric functions, with their
/// exact derivatives for evaluating symbolic output.
pub struct Profile {
    pub q: fn(f64) -> f64,
    pub dq: fn(f64) -> f64,
    pub ddq: fn(f64) -> f64,
    pub p: fn(f64) -> f64,
    pub dp: fn(f64) -> f64,
    pub ddp: fn(f64) -> f64,
}

pub const PROFILE: Profile = Profile {
    q: |r| 0.3 * r * r - 0.2 * r,
    dq: |r| 0.6 * r - 0.2,
    ddq: |_| 0.6,
    p: |r| 0.5 * r.sin(),
    dp: |r| 0.5 * r.cos(),
    ddp: |r| -0.5 * r.sin(),
};

const H: f64 = 1e-3;

type Pt = [f64; 4];

fn d4<F: Fn(Pt) -> f64>(f: &F, x: Pt, dir: usize) -> f64 {
    let at = |s: f64| {
        let mut y = x;
        y[dir] += s;
        f(y)
    };
    (-at(2.0 * H) + 8.0 * at(H) - 8.0 * at(-H) + at(-2.0 * H)) / (12.0 * H)
}

fn metric(pr: &Profile, x: Pt, i: usize, j: usize) -> f64 {
    if i != j {
        return 0.0;
    }
    let (r, th) = (x[1], x[2]);
    match i {
        0 => (pr.q)(r).exp(),
        1 => -(pr.p)(r).exp(),
        2 => -r * r,
        _ => -r * r * th.sin().powi(2),
    }
}

fn inverse(pr: &Profile, x: Pt, i: usize, j: usize) -> f64 {
    if i != j {
        0.0
    } else {
        1.0 / metric(pr, x, i, i)
    }
}

/// Christoffel symbol of the second kind, upper index k.
fn gamma(pr: &Profile, x: Pt, k: usize, i: usize, j: usize) -> f64 {
    let mut s = 0.0;
    for l in 0..4 {
        let hk = inverse(pr, x, k, l);
        if hk == 0.0 {
            continue;
        }
        let dg = |a: usize, b: usize, dir: usize| d4(&|y| metric(pr, y, a, b), x, dir);
        s += 0.5 * hk * (dg(l, j, i) + dg(l, i, j) - dg(i, j, l));
    }
    s
}

/// Ricci tensor R_ij = d_k G^k_ij - d_j G^k_ik + G^k_kl G^l_ij - G^k_jl G^l_ik.
pub fn ricci(pr: &Profile, x: Pt) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut s = 0.0;
            for k in 0..4 {
                s += d4(&|y| gamma(pr, y, k, i, j), x, k);
                s -= d4(&|y| gamma(pr, y, k, i, k), x, j);
                for l in 0..4 {
                    s += gamma(pr, x, k, k, l) * gamma(pr, x, l, i, j);
                    s -= gamma(pr, x, k, j, l) * gamma(pr, x, l, i, k);
                }
            }
            out[i][j] = s;
        }
    }
    out
}

/// Einstein tensor G_ij = R_ij - R g_ij / 2 at coordinates (t, r, th, ph).
pub fn einstein(pr: &Profile, x: Pt) -> [[f64; 4]; 4] {
    let ric = ricci(pr, x);
    let scalar: f64 = (0..4).map(|i| inverse(pr, x, i, i) * ric[i][i]).sum();
    let mut out = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = ric[i][j] - scalar * metric(pr, x, i, j) / 2.0;
        }
    }
    out
}
