//! SIMP: prefix expressions to standard quotients, dispatching on the
//! head symbol.

use super::sf::Sf;
use super::sq::Sq;
use super::KernelId;
use crate::error::{alg_err, LispError, Result};
use crate::lisp::{FnCell, Int, Interp, SExpr, SymId};

impl Interp {
    /// Simplifies with power and product rules applied afterwards. This is
    /// the entry point used for every user-visible value.
    pub fn simp_top(&mut self, e: &SExpr) -> Result<Sq> {
        self.alg.firings = 0;
        let sq = self.simp(e)?;
        self.subs2(&sq)
    }

    pub fn simp(&mut self, e: &SExpr) -> Result<Sq> {
        match e {
            SExpr::Fix(_) | SExpr::Big(_) => Ok(Sq::from_int(Int::from_sexpr(e).unwrap_or_else(Int::zero))),
            SExpr::Sym(id) => self.simp_symbol(*id),
            SExpr::Str(s) => alg_err(format!("string \"{s}\" used in an algebraic expression")),
            SExpr::Vector(_) => alg_err("vector used in an algebraic expression"),
            SExpr::Pair(p) => {
                self.enter()?;
                let r = match p.car.as_sym() {
                    Some(h) => self.simp_form(h, &p.cdr),
                    None => alg_err(format!("{} is not an operator", self.print(&p.car))),
                };
                self.leave();
                r
            }
        }
    }

    fn simp_symbol(&mut self, id: SymId) -> Result<Sq> {
        if id == SymId::NIL {
            return Ok(Sq::zero());
        }
        if self.flagp(id, self.s.share) {
            return match self.value(id).cloned() {
                Some(v) if !v.is_nil() => self.simp(&v),
                Some(_) => Ok(Sq::zero()),
                None => self.kernel_sq(&SExpr::Sym(id)),
            };
        }
        if let Some(st) = self.alg.values.get(&id).cloned() {
            return self.fetch(&st);
        }
        if self.alg.matrices.contains_key(&id) {
            return alg_err(format!("matrix {} used in a scalar expression", self.name(id)));
        }
        if self.alg.arrays.contains_key(&id) {
            return alg_err(format!("array {} used without indices", self.name(id)));
        }
        self.kernel_sq(&SExpr::Sym(id))
    }

    fn simp_form(&mut self, h: SymId, args: &SExpr) -> Result<Sq> {
        let s = &self.s;
        if h == s.plus {
            let mut acc = Sq::zero();
            for a in args.iter() {
                let x = self.simp(a)?;
                acc = self.addsq(&acc, &x)?;
            }
            return Ok(acc);
        }
        if h == s.times {
            let mut acc = Sq::one();
            for a in args.iter() {
                let x = self.simp(a)?;
                acc = self.multsq(&acc, &x)?;
                if acc.is_zero() {
                    return Ok(acc);
                }
            }
            return Ok(acc);
        }
        if h == s.difference {
            let [a, b] = self.args_n::<2>(h, args)?;
            let x = self.simp(&a)?;
            let y = self.simp(&b)?;
            return self.subsq(&x, &y);
        }
        if h == s.minus {
            let [a] = self.args_n::<1>(h, args)?;
            let x = self.simp(&a)?;
            return self.negsq(&x);
        }
        if h == s.quotient {
            let [a, b] = self.args_n::<2>(h, args)?;
            let x = self.simp(&a)?;
            let y = self.simp(&b)?;
            if y.is_zero() {
                return alg_err("zero denominator");
            }
            return self.quotsq(&x, &y);
        }
        if h == s.recip {
            let [a] = self.args_n::<1>(h, args)?;
            let x = self.simp(&a)?;
            if x.is_zero() {
                return alg_err("zero denominator");
            }
            return self.invsq(&x);
        }
        if h == s.expt {
            let [a, b] = self.args_n::<2>(h, args)?;
            return self.simp_expt(&a, &b);
        }
        if h == s.df {
            return self.simp_df(args);
        }
        if h == s.det {
            let [m] = self.args_n::<1>(h, args)?;
            let mv = self.mat_eval(&m)?;
            let mv = mv.into_matrix("DET")?;
            return self.mat_det(&mv);
        }
        if h == s.mat {
            return alg_err("matrix used in a scalar expression");
        }
        if self.alg.arrays.contains_key(&h) {
            let idx = self.eval_indices(args)?;
            return self.array_get(h, &idx);
        }
        if self.alg.matrices.contains_key(&h) {
            let idx = self.eval_indices(args)?;
            return self.matrix_element(h, &idx);
        }
        if self.flagp(h, self.s.algproc) {
            return self.call_algproc(h, args);
        }
        if !self.alg.operators.contains(&h) {
            if let FnCell::Lambda(_) = self.function_cell(h) {
                return alg_err(format!(
                    "{} is a Lisp function, not an algebraic operator",
                    self.name(h)
                ));
            }
            if !self.is_builtin_operator(h) {
                self.alg.operators.insert(h);
                let msg = format!("*** {} declared operator\n\n", self.name(h));
                self.emit(&msg);
            }
        }
        self.simp_operator(h, args)
    }

    fn is_builtin_operator(&self, h: SymId) -> bool {
        let s = &self.s;
        [s.sin, s.cos, s.tan, s.log, s.exp, s.sqrt].contains(&h)
    }

    fn args_n<const N: usize>(&self, h: SymId, args: &SExpr) -> Result<[SExpr; N]> {
        let v = args.to_vec();
        v.try_into().map_err(|v: Vec<SExpr>| {
            LispError::Alg(format!(
                "{} called with {} arguments, expected {}",
                self.name(h),
                v.len(),
                N
            ))
        })
    }

    fn simp_expt(&mut self, base: &SExpr, ex: &SExpr) -> Result<Sq> {
        let exs = self.simp(ex)?;
        if let Some(n) = exs.as_int() {
            let Some(n) = n.as_fix() else {
                return alg_err("exponent too large");
            };
            let b = self.simp(base)?;
            if b.is_zero() && n < 0 {
                return alg_err("zero raised to a negative power");
            }
            return self.exptsq(&b, n);
        }
        let b = self.simp(base)?;
        if b == Sq::one() {
            return Ok(b);
        }
        if exs.is_zero() {
            return Ok(Sq::one());
        }
        let bp = self.prepsq(&b)?;
        let ep = self.prepsq(&exs)?;
        let form = SExpr::list([SExpr::Sym(self.s.expt), bp, ep]);
        self.kernel_sq(&form)
    }

    fn simp_df(&mut self, args: &SExpr) -> Result<Sq> {
        let v = args.to_vec();
        if v.len() < 2 {
            return alg_err("DF needs an expression and at least one variable");
        }
        let mut f = self.simp(&v[0])?;
        let mut i = 1;
        while i < v.len() {
            let k = self.as_kernel(&v[i])?;
            let mut n = 1;
            if let Some(next) = v.get(i + 1) {
                if next.is_number() {
                    n = next
                        .as_fix()
                        .filter(|n| *n >= 0)
                        .ok_or_else(|| LispError::Alg("bad derivative order".into()))?;
                    i += 1;
                }
            }
            for _ in 0..n {
                f = self.diffsq(&f, k)?;
            }
            i += 1;
        }
        Ok(f)
    }

    /// Interprets an expression that must simplify to a single kernel.
    pub(crate) fn as_kernel(&mut self, e: &SExpr) -> Result<KernelId> {
        let sq = self.simp(e)?;
        if sq.den.is_one() {
            if let Sf::Term(t) = &sq.num {
                if t.deg == 1 && t.coeff.is_one() && t.red.is_zero() {
                    return Ok(t.k);
                }
            }
        }
        alg_err(format!("{} is not a kernel", self.print(e)))
    }

    fn simp_operator(&mut self, h: SymId, args: &SExpr) -> Result<Sq> {
        let mut vals = Vec::new();
        for a in args.iter() {
            let sq = self.simp(a)?;
            vals.push(sq);
        }
        let s = &self.s;
        let (sin, cos, exp, log) = (s.sin, s.cos, s.exp, s.log);
        if vals.len() == 1 {
            let u = vals[0].clone();
            if h == sin || h == cos {
                if u.is_zero() {
                    return Ok(if h == sin { Sq::zero() } else { Sq::one() });
                }
                if u.num.lnc().is_negative() {
                    let nu = self.negsq(&u)?;
                    let inner = self.operator_kernel(h, &[nu])?;
                    return if h == sin { self.negsq(&inner) } else { Ok(inner) };
                }
            } else if h == exp {
                let up = self.prepsq(&u)?;
                let e = SExpr::Sym(self.s.e);
                return self.simp_expt(&e, &up);
            } else if h == log {
                if u == Sq::one() {
                    return Ok(Sq::zero());
                }
                let e = SExpr::Sym(self.s.e);
                let us = self.prepsq(&u)?;
                if us == e {
                    return Ok(Sq::one());
                }
            }
        }
        self.operator_kernel(h, &vals)
    }

    fn operator_kernel(&mut self, h: SymId, vals: &[Sq]) -> Result<Sq> {
        let mut items = vec![SExpr::Sym(h)];
        for v in vals {
            items.push(self.prepsq(v)?);
        }
        self.kernel_sq(&SExpr::list(items))
    }

    /// A kernel after applying any kernel-level LET rule to it.
    pub(crate) fn kernel_sq(&mut self, form: &SExpr) -> Result<Sq> {
        if let Some(rhs) = self.match_kernel_rule(form)? {
            return self.simp(&rhs);
        }
        let k = self.alg.kernels.intern(form);
        Ok(Sq::from_sf(Sf::power(k, 1)))
    }

    /// Evaluates index expressions to nonnegative integers.
    pub(crate) fn eval_indices(&mut self, args: &SExpr) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for a in args.iter() {
            let sq = self.simp(a)?;
            match sq.as_int().and_then(Int::as_fix) {
                Some(n) if n >= 0 => out.push(n as usize),
                _ => {
                    let p = self.prepsq(&sq)?;
                    return alg_err(format!("index {} is not a nonnegative integer", self.print(&p)));
                }
            }
        }
        Ok(out)
    }

    fn call_algproc(&mut self, h: SymId, args: &SExpr) -> Result<Sq> {
        let mut argv = Vec::new();
        for a in args.iter() {
            let sq = self.simp(a)?;
            argv.push(self.prepsq(&sq)?);
        }
        let r = self.apply_sym(h, &argv)?;
        self.simp(&r)
    }

    /// Simplifies to an integer, or fails naming the expression.
    pub fn simp_int(&mut self, e: &SExpr) -> Result<Int> {
        let sq = self.simp_top(e)?;
        match sq.as_int() {
            Some(n) => Ok(n.clone()),
            None => {
                let p = self.prepsq(&sq)?;
                alg_err(format!("{} is not an integer", self.print(&p)))
            }
        }
    }
}
