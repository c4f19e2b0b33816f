//! Matrices of standard quotients.

use crate::algebra::Sq;
use crate::error::{alg_err, Result};
use crate::lisp::{Interp, SExpr, SymId};

/// Dense row-major matrix of canonical quotients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Sq>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Sq>) -> Matrix {
        debug_assert_eq!(rows * cols, data.len());
        Matrix { rows, cols, data }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut data = vec![Sq::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Sq::one();
        }
        Matrix::new(n, n, data)
    }

    pub fn get(&self, i: usize, j: usize) -> &Sq {
        &self.data[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    fn minor(&self, skip_row: usize, skip_col: usize) -> Matrix {
        let mut data = Vec::with_capacity((self.rows - 1) * (self.cols - 1));
        for i in (0..self.rows).filter(|i| *i != skip_row) {
            for j in (0..self.cols).filter(|j| *j != skip_col) {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix::new(self.rows - 1, self.cols - 1, data)
    }

    fn shape(&self) -> String {
        format!("{}x{}", self.rows, self.cols)
    }
}

/// Result of evaluating an expression that may denote a matrix.
#[derive(Clone, Debug)]
pub enum MVal {
    Scalar(Sq),
    Mat(Matrix),
}

impl MVal {
    pub fn into_matrix(self, context: &str) -> Result<Matrix> {
        match self {
            MVal::Mat(m) => Ok(m),
            MVal::Scalar(_) => alg_err(format!("{context} needs a matrix argument")),
        }
    }
}

impl Interp {
    /// Evaluates an expression over matrices and scalars.
    pub fn mat_eval(&mut self, e: &SExpr) -> Result<MVal> {
        if !self.is_matrix_expr(e) {
            return Ok(MVal::Scalar(self.simp_top(e)?));
        }
        match e {
            SExpr::Sym(id) => match self.alg.matrices.get(id).cloned() {
                Some(Some(m)) => Ok(MVal::Mat(self.fresh_matrix(&m)?)),
                Some(None) => alg_err(format!("matrix {} has no value", self.name(*id))),
                None => unreachable!("is_matrix_expr accepted a non-matrix symbol"),
            },
            SExpr::Pair(p) => {
                let h = p.car.as_sym().unwrap_or(SymId::NIL);
                let args = p.cdr.to_vec();
                let s = &self.s;
                if h == s.mat {
                    return self.mat_literal(&args).map(MVal::Mat);
                }
                if h == s.plus {
                    let mut acc: Option<MVal> = None;
                    for a in &args {
                        let v = self.mat_eval(a)?;
                        acc = Some(match acc {
                            None => v,
                            Some(x) => self.mval_add(x, v)?,
                        });
                    }
                    return acc.map_or_else(|| Ok(MVal::Scalar(Sq::zero())), Ok);
                }
                if h == s.times {
                    let mut acc = MVal::Scalar(Sq::one());
                    for a in &args {
                        let v = self.mat_eval(a)?;
                        acc = self.mval_mul(acc, v)?;
                    }
                    return Ok(acc);
                }
                if h == s.minus && args.len() == 1 {
                    let v = self.mat_eval(&args[0])?;
                    return self.mval_scale(&Sq::small(-1), v);
                }
                if h == s.difference && args.len() == 2 {
                    let a = self.mat_eval(&args[0])?;
                    let b = self.mat_eval(&args[1])?;
                    let nb = self.mval_scale(&Sq::small(-1), b)?;
                    return self.mval_add(a, nb);
                }
                if h == s.quotient && args.len() == 2 {
                    let a = self.mat_eval(&args[0])?;
                    let b = self.mat_eval(&args[1])?;
                    let inv = match b {
                        MVal::Mat(m) => MVal::Mat(self.mat_inverse(&m)?),
                        MVal::Scalar(q) => {
                            if q.is_zero() {
                                return alg_err("zero denominator");
                            }
                            MVal::Scalar(self.invsq(&q)?)
                        }
                    };
                    return self.mval_mul(a, inv);
                }
                if h == s.expt && args.len() == 2 {
                    let base = self.mat_eval(&args[0])?;
                    let n = self.simp_int(&args[1])?;
                    let Some(n) = n.as_fix() else {
                        return alg_err("matrix exponent too large");
                    };
                    return match base {
                        MVal::Scalar(q) => Ok(MVal::Scalar(self.exptsq(&q, n)?)),
                        MVal::Mat(m) => Ok(MVal::Mat(self.mat_power(&m, n)?)),
                    };
                }
                alg_err(format!(
                    "operator {} cannot be applied to a matrix",
                    self.name(h)
                ))
            }
            _ => alg_err("bad matrix expression"),
        }
    }

    fn mat_literal(&mut self, rows: &[SExpr]) -> Result<Matrix> {
        if rows.is_empty() {
            return alg_err("MAT needs at least one row");
        }
        let cols = rows[0].list_len();
        let mut data = Vec::new();
        for r in rows {
            if !r.is_pair() || r.list_len() != cols || cols == 0 {
                return alg_err("MAT rows must be nonempty and of equal length");
            }
            for x in r.iter() {
                data.push(self.simp_top(x)?);
            }
        }
        Ok(Matrix::new(rows.len(), cols, data))
    }

    fn fresh_matrix(&mut self, m: &Matrix) -> Result<Matrix> {
        Ok(m.clone())
    }

    fn mval_scale(&mut self, c: &Sq, v: MVal) -> Result<MVal> {
        match v {
            MVal::Scalar(q) => Ok(MVal::Scalar(self.multsq(c, &q)?)),
            MVal::Mat(m) => {
                let mut data = Vec::with_capacity(m.data.len());
                for x in &m.data {
                    data.push(self.multsq(c, x)?);
                }
                Ok(MVal::Mat(Matrix::new(m.rows, m.cols, data)))
            }
        }
    }

    fn mval_add(&mut self, a: MVal, b: MVal) -> Result<MVal> {
        match (a, b) {
            (MVal::Scalar(x), MVal::Scalar(y)) => Ok(MVal::Scalar(self.addsq(&x, &y)?)),
            (MVal::Mat(x), MVal::Mat(y)) => Ok(MVal::Mat(self.mat_add(&x, &y)?)),
            _ => alg_err("cannot add a scalar and a matrix"),
        }
    }

    fn mval_mul(&mut self, a: MVal, b: MVal) -> Result<MVal> {
        match (a, b) {
            (MVal::Scalar(x), MVal::Scalar(y)) => Ok(MVal::Scalar(self.multsq(&x, &y)?)),
            (MVal::Scalar(x), m @ MVal::Mat(_)) | (m @ MVal::Mat(_), MVal::Scalar(x)) => {
                self.mval_scale(&x, m)
            }
            (MVal::Mat(x), MVal::Mat(y)) => Ok(MVal::Mat(self.mat_mul(&x, &y)?)),
        }
    }

    pub fn mat_add(&mut self, a: &Matrix, b: &Matrix) -> Result<Matrix> {
        if a.rows != b.rows || a.cols != b.cols {
            return alg_err(format!(
                "matrix shapes {} and {} do not match for addition",
                a.shape(),
                b.shape()
            ));
        }
        let mut data = Vec::with_capacity(a.data.len());
        for (x, y) in a.data.iter().zip(&b.data) {
            data.push(self.addsq(x, y)?);
        }
        Ok(Matrix::new(a.rows, a.cols, data))
    }

    pub fn mat_mul(&mut self, a: &Matrix, b: &Matrix) -> Result<Matrix> {
        if a.cols != b.rows {
            return alg_err(format!(
                "matrix shapes {} and {} do not match for multiplication",
                a.shape(),
                b.shape()
            ));
        }
        let mut data = Vec::with_capacity(a.rows * b.cols);
        for i in 0..a.rows {
            for j in 0..b.cols {
                let mut acc = Sq::zero();
                for k in 0..a.cols {
                    let p = self.multsq(a.get(i, k), b.get(k, j))?;
                    acc = self.addsq(&acc, &p)?;
                }
                data.push(self.subs2(&acc)?);
            }
        }
        Ok(Matrix::new(a.rows, b.cols, data))
    }

    pub fn mat_power(&mut self, m: &Matrix, n: i64) -> Result<Matrix> {
        if !m.is_square() {
            return alg_err(format!("cannot raise {} matrix to a power", m.shape()));
        }
        let base = if n < 0 { self.mat_inverse(m)? } else { m.clone() };
        let mut result = Matrix::identity(m.rows);
        for _ in 0..n.unsigned_abs() {
            result = self.mat_mul(&result, &base)?;
        }
        Ok(result)
    }

    /// Determinant: cofactor expansion up to 4x4, fraction-free
    /// elimination above that.
    pub fn mat_det(&mut self, m: &Matrix) -> Result<Sq> {
        if !m.is_square() {
            return alg_err(format!("determinant of non-square {} matrix", m.shape()));
        }
        let d = if m.rows <= 4 {
            self.det_cofactor(m)?
        } else {
            self.det_bareiss(m)?
        };
        self.subs2(&d)
    }

    fn det_cofactor(&mut self, m: &Matrix) -> Result<Sq> {
        match m.rows {
            0 => Ok(Sq::one()),
            1 => Ok(m.get(0, 0).clone()),
            2 => {
                let a = self.multsq(m.get(0, 0), m.get(1, 1))?;
                let b = self.multsq(m.get(0, 1), m.get(1, 0))?;
                self.subsq(&a, &b)
            }
            n => {
                let mut acc = Sq::zero();
                for j in 0..n {
                    if m.get(0, j).is_zero() {
                        continue;
                    }
                    let minor = m.minor(0, j);
                    let d = self.det_cofactor(&minor)?;
                    let mut t = self.multsq(m.get(0, j), &d)?;
                    if j % 2 == 1 {
                        t = self.negsq(&t)?;
                    }
                    acc = self.addsq(&acc, &t)?;
                }
                Ok(acc)
            }
        }
    }

    fn det_bareiss(&mut self, m: &Matrix) -> Result<Sq> {
        let n = m.rows;
        let mut a: Vec<Vec<Sq>> = (0..n).map(|i| (0..n).map(|j| m.get(i, j).clone()).collect()).collect();
        let mut sign = false;
        let mut prev = Sq::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|r| !a[*r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        sign = !sign;
                    }
                    None => return Ok(Sq::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let x = self.multsq(&a[i][j], &a[k][k])?;
                    let y = self.multsq(&a[i][k], &a[k][j])?;
                    let d = self.subsq(&x, &y)?;
                    a[i][j] = self.quotsq(&d, &prev)?;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        if sign {
            self.negsq(&d)
        } else {
            Ok(d)
        }
    }

    /// Adjugate over determinant.
    pub fn mat_inverse(&mut self, m: &Matrix) -> Result<Matrix> {
        if !m.is_square() {
            return alg_err(format!("cannot invert non-square {} matrix", m.shape()));
        }
        let det = self.mat_det(m)?;
        if det.is_zero() {
            return alg_err("singular matrix (determinant is 0)");
        }
        let n = m.rows;
        let inv_det = self.invsq(&det)?;
        if n == 1 {
            return Ok(Matrix::new(1, 1, vec![inv_det]));
        }
        let mut data = vec![Sq::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                let minor = m.minor(i, j);
                let c = self.mat_det(&minor)?;
                let mut c = self.multsq(&c, &inv_det)?;
                if (i + j) % 2 == 1 {
                    c = self.negsq(&c)?;
                }
                data[j * n + i] = c;
            }
        }
        Ok(Matrix::new(n, n, data))
    }

    /// Prefix form `(MAT (row...) ...)`.
    pub fn prep_matrix(&mut self, m: &Matrix) -> Result<SExpr> {
        let mut rows = vec![SExpr::Sym(self.s.mat)];
        for i in 0..m.rows {
            let mut row = Vec::with_capacity(m.cols);
            for j in 0..m.cols {
                row.push(self.prepsq(m.get(i, j))?);
            }
            rows.push(SExpr::list(row));
        }
        Ok(SExpr::list(rows))
    }

    pub fn set_matrix(&mut self, name: SymId, m: Matrix) {
        self.alg.matrices.insert(name, Some(m));
    }

    pub fn matrix_value(&self, name: SymId) -> Option<&Matrix> {
        self.alg.matrices.get(&name).and_then(Option::as_ref)
    }

    pub(crate) fn matrix_element(&mut self, name: SymId, idx: &[usize]) -> Result<Sq> {
        let (i, j) = self.matrix_index(name, idx)?;
        Ok(self
            .matrix_value(name)
            .map(|m| m.get(i, j).clone())
            .unwrap_or_else(Sq::zero))
    }

    pub(crate) fn set_matrix_element(&mut self, name: SymId, idx: &[usize], v: Sq) -> Result<()> {
        let (i, j) = self.matrix_index(name, idx)?;
        match self.alg.matrices.get_mut(&name) {
            Some(Some(m)) => {
                let cols = m.cols;
                m.data[i * cols + j] = v;
                Ok(())
            }
            _ => alg_err(format!("matrix {} has no value", self.name(name))),
        }
    }

    // One-based indices in, zero-based out.
    fn matrix_index(&self, name: SymId, idx: &[usize]) -> Result<(usize, usize)> {
        let m = match self.matrix_value(name) {
            Some(m) => m,
            None => return alg_err(format!("matrix {} has no value", self.name(name))),
        };
        match idx {
            [i, j] if *i >= 1 && *j >= 1 && *i <= m.rows && *j <= m.cols => Ok((i - 1, j - 1)),
            _ => alg_err(format!(
                "index ({}) out of range for {} matrix {}",
                idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
                m.shape(),
                self.name(name)
            )),
        }
    }
}
