//! Lisp entry points into the algebra layer. Values cross the boundary as
//! prefix forms.

use std::cmp::Ordering;

use super::sq::Sq;
use super::AlgArray;
use crate::error::{alg_err, LispError, Result};
use crate::lisp::{Arity, Int, Interp, SExpr, SymId};
use crate::matrix::{MVal, Matrix};

pub(crate) fn install(i: &mut Interp) {
    use Arity::*;
    i.def_builtin("AEVAL", Exact(1), |i, a| i.aeval(&a[0]));
    i.def_builtin("SETK", Exact(2), |i, a| i.setk(&a[0], &a[1]));
    i.def_builtin("ASSIGNK", Exact(2), |i, a| i.assignk(&a[0], &a[1]));
    i.def_builtin("IEVAL", Exact(1), |i, a| Ok(i.simp_int(&a[0])?.into_sexpr()));
    i.def_builtin("ALGADD", Exact(2), |i, a| {
        let x = i.simp(&a[0])?;
        let y = i.simp(&a[1])?;
        let s = i.addsq(&x, &y)?;
        let s = i.subs2(&s)?;
        i.prepsq(&s)
    });
    i.def_builtin("ALGMULT", Exact(2), |i, a| {
        let x = i.simp(&a[0])?;
        let y = i.simp(&a[1])?;
        let s = i.multsq(&x, &y)?;
        let s = i.subs2(&s)?;
        i.prepsq(&s)
    });
    i.def_builtin("EVALEQUAL", Exact(2), |i, a| {
        let d = i.alg_difference(&a[0], &a[1])?;
        Ok(SExpr::from_bool(d.is_zero()))
    });
    i.def_builtin("EVALGREATERP", Exact(2), |i, a| {
        i.alg_compare(&a[0], &a[1], |o| o == Ordering::Greater)
    });
    i.def_builtin("EVALLESSP", Exact(2), |i, a| {
        i.alg_compare(&a[0], &a[1], |o| o == Ordering::Less)
    });
    i.def_builtin("EVALGEQ", Exact(2), |i, a| {
        i.alg_compare(&a[0], &a[1], |o| o != Ordering::Less)
    });
    i.def_builtin("EVALLEQ", Exact(2), |i, a| {
        i.alg_compare(&a[0], &a[1], |o| o != Ordering::Greater)
    });
    i.def_builtin("FORSTEP", Exact(1), |i, a| {
        let n = i.simp_int(&a[0])?;
        if n.is_zero() {
            return alg_err("FOR loop step is zero");
        }
        Ok(n.into_sexpr())
    });
    i.def_builtin("FORDONE", Exact(3), |i, a| {
        let (Some(v), Some(fin), Some(step)) = (
            Int::from_sexpr(&a[0]),
            Int::from_sexpr(&a[1]),
            Int::from_sexpr(&a[2]),
        ) else {
            return alg_err("FOR loop bounds must be integers");
        };
        let c = i.int_cmp(&v, &fin)?;
        let done = if step.is_negative() {
            c == Ordering::Less
        } else {
            c == Ordering::Greater
        };
        Ok(SExpr::from_bool(done))
    });
    i.def_builtin("ARRAY", AtLeast(0), |i, a| {
        for spec in a {
            i.declare_array(spec)?;
        }
        Ok(SExpr::NIL)
    });
    i.def_builtin("OPERATOR", AtLeast(0), |i, a| {
        for x in a {
            let id = i.expect_name(x)?;
            i.alg.operators.insert(id);
        }
        Ok(SExpr::NIL)
    });
    i.def_builtin("MATRIX", AtLeast(0), |i, a| {
        for x in a {
            i.declare_matrix(x)?;
        }
        Ok(SExpr::NIL)
    });
    i.def_builtin("LET", Exact(2), |i, a| {
        let vars = i.name_list(&a[0])?;
        for rule in a[1].iter() {
            let lhs = rule.car().cloned().unwrap_or(SExpr::NIL);
            let rhs = rule.cdr().and_then(SExpr::car).cloned().unwrap_or(SExpr::NIL);
            i.let_rule(&vars, &lhs, rhs)?;
        }
        Ok(SExpr::NIL)
    });
    i.def_builtin("CLEAR", Exact(2), |i, a| {
        let vars = i.name_list(&a[0])?;
        for item in a[1].iter() {
            i.clear_item(&vars, item)?;
        }
        Ok(SExpr::NIL)
    });
    i.def_builtin("ON", AtLeast(0), |i, a| {
        for x in a {
            let id = i.expect_name(x)?;
            let name = i.name(id).to_string();
            i.set_switch(&name, true)?;
        }
        Ok(SExpr::NIL)
    });
    i.def_builtin("OFF", AtLeast(0), |i, a| {
        for x in a {
            let id = i.expect_name(x)?;
            let name = i.name(id).to_string();
            i.set_switch(&name, false)?;
        }
        Ok(SExpr::NIL)
    });
    i.def_builtin("ORDER", AtLeast(0), |i, a| {
        let mut forms = Vec::new();
        for x in a {
            forms.push(i.reval(x)?);
        }
        i.alg.kernels.set_order(&forms);
        i.alg.generation += 1;
        Ok(SExpr::NIL)
    });
}

impl Interp {
    fn expect_name(&self, x: &SExpr) -> Result<SymId> {
        match x.as_sym() {
            Some(id) if id != SymId::NIL => Ok(id),
            _ => alg_err(format!("{} is not a name", self.print(x))),
        }
    }

    fn name_list(&self, x: &SExpr) -> Result<Vec<SymId>> {
        x.iter().map(|v| self.expect_name(v)).collect()
    }

    /// Evaluates an algebraic expression to canonical prefix; matrices come
    /// back as `(MAT (row...) ...)`.
    pub fn aeval(&mut self, e: &SExpr) -> Result<SExpr> {
        if self.is_matrix_expr(e) {
            return match self.mat_eval(e)? {
                MVal::Mat(m) => self.prep_matrix(&m),
                MVal::Scalar(q) => self.prepsq(&q),
            };
        }
        self.reval(e)
    }

    fn alg_difference(&mut self, a: &SExpr, b: &SExpr) -> Result<Sq> {
        let d = SExpr::list([SExpr::Sym(self.s.difference), a.clone(), b.clone()]);
        self.simp_top(&d)
    }

    fn alg_compare(
        &mut self,
        a: &SExpr,
        b: &SExpr,
        test: impl Fn(Ordering) -> bool,
    ) -> Result<SExpr> {
        let d = self.alg_difference(a, b)?;
        match d.num.as_num() {
            Some(n) => {
                let o = if n.is_zero() {
                    Ordering::Equal
                } else if n.is_negative() {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
                Ok(SExpr::from_bool(test(o)))
            }
            None => {
                let p = self.prepsq(&d)?;
                alg_err(format!(
                    "cannot compare non-numeric difference {}",
                    self.print(&p)
                ))
            }
        }
    }

    fn declare_array(&mut self, spec: &SExpr) -> Result<()> {
        let name = spec.car().and_then(SExpr::as_sym);
        let Some(name) = name else {
            return alg_err(format!("bad array declaration {}", self.print(spec)));
        };
        let mut bounds = Vec::new();
        for b in spec.cdr().map(SExpr::to_vec).unwrap_or_default() {
            match b.as_fix() {
                Some(n) if n >= 0 => bounds.push(n as usize),
                _ => return alg_err(format!("bad bound for array {}", self.name(name))),
            }
        }
        if bounds.is_empty() {
            return alg_err(format!("array {} needs bounds", self.name(name)));
        }
        let cells: usize = bounds.iter().map(|b| b + 1).product();
        if cells > 10_000_000 {
            return alg_err(format!("array {} is too large", self.name(name)));
        }
        self.alg.values.remove(&name);
        self.alg.arrays.insert(name, AlgArray::new(bounds));
        Ok(())
    }

    fn declare_matrix(&mut self, spec: &SExpr) -> Result<()> {
        match spec {
            SExpr::Sym(id) => {
                self.alg.matrices.insert(*id, None);
                Ok(())
            }
            SExpr::Pair(_) => {
                let v = spec.to_vec();
                match v.as_slice() {
                    [SExpr::Sym(id), r, c] => match (r.as_fix(), c.as_fix()) {
                        (Some(r), Some(c)) if r > 0 && c > 0 => {
                            let m = Matrix::new(
                                r as usize,
                                c as usize,
                                vec![Sq::zero(); (r * c) as usize],
                            );
                            self.alg.matrices.insert(*id, Some(m));
                            Ok(())
                        }
                        _ => alg_err("bad matrix dimensions"),
                    },
                    _ => alg_err(format!("bad matrix declaration {}", self.print(spec))),
                }
            }
            _ => alg_err(format!("bad matrix declaration {}", self.print(spec))),
        }
    }

    pub(crate) fn array_get(&mut self, name: SymId, idx: &[usize]) -> Result<Sq> {
        let arr = &self.alg.arrays[&name];
        let Some(off) = arr.offset(idx) else {
            return Err(self.bounds_error(name, idx));
        };
        match arr.data[off].clone() {
            Some(st) => self.fetch(&st),
            None => Ok(Sq::zero()),
        }
    }

    fn array_set(&mut self, name: SymId, idx: &[usize], v: Sq) -> Result<()> {
        let stored = self.store(v);
        let arr = self.alg.arrays.get_mut(&name).expect("array exists");
        match arr.offset(idx) {
            Some(off) => {
                arr.data[off] = Some(stored);
                Ok(())
            }
            None => Err(self.bounds_error(name, idx)),
        }
    }

    fn bounds_error(&self, name: SymId, idx: &[usize]) -> LispError {
        let arr = &self.alg.arrays[&name];
        LispError::Alg(format!(
            "index ({}) out of bounds for array {}({})",
            idx.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(","),
            self.name(name),
            arr.bounds.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",")
        ))
    }

    /// Assigns an algebraic value to a variable, array element, matrix or
    /// matrix element, or binds an operator kernel. Returns the value in
    /// prefix form.
    pub fn setk(&mut self, target: &SExpr, value: &SExpr) -> Result<SExpr> {
        match target {
            SExpr::Sym(id) => {
                let id = *id;
                if id == SymId::NIL || id == SymId::T {
                    return alg_err(format!("cannot assign to {}", self.name(id)));
                }
                if self.is_matrix_name(id) || self.is_matrix_expr(value) {
                    return match self.mat_eval(value)? {
                        MVal::Mat(m) => {
                            let p = self.prep_matrix(&m)?;
                            self.alg.values.remove(&id);
                            self.set_matrix(id, m);
                            Ok(p)
                        }
                        MVal::Scalar(_) => alg_err(format!(
                            "cannot assign a scalar to matrix {}",
                            self.name(id)
                        )),
                    };
                }
                if self.alg.arrays.contains_key(&id) {
                    return alg_err(format!("cannot assign to array {} without indices", self.name(id)));
                }
                let q = self.simp_top(value)?;
                let p = self.prepsq(&q)?;
                if self.flagp(id, self.s.share) {
                    self.set_value(id, p.clone());
                } else {
                    if self.alg.kernels.lookup(target).is_some() {
                        self.alg.generation += 1;
                    }
                    let st = self.store(q);
                    self.alg.values.insert(id, st);
                }
                Ok(p)
            }
            SExpr::Pair(pair) => {
                let Some(h) = pair.car.as_sym() else {
                    return alg_err(format!("cannot assign to {}", self.print(target)));
                };
                let q = self.simp_top(value)?;
                let p = self.prepsq(&q)?;
                if self.alg.arrays.contains_key(&h) {
                    let idx = self.eval_indices(&pair.cdr)?;
                    self.array_set(h, &idx, q)?;
                } else if self.is_matrix_name(h) {
                    let idx = self.eval_indices(&pair.cdr)?;
                    self.set_matrix_element(h, &idx, q)?;
                } else {
                    let mut items = vec![SExpr::Sym(h)];
                    for a in pair.cdr.iter() {
                        items.push(self.reval(a)?);
                    }
                    let lhs = SExpr::list(items);
                    self.add_rule(Vec::new(), &lhs, p.clone())?;
                }
                Ok(p)
            }
            _ => alg_err(format!("cannot assign to {}", self.print(target))),
        }
    }

    /// Like [`Interp::setk`], but returns `(*ASSIGN target value)` with the
    /// target's indices evaluated, for display.
    pub fn assignk(&mut self, target: &SExpr, value: &SExpr) -> Result<SExpr> {
        let v = self.setk(target, value)?;
        let shown = match target {
            SExpr::Pair(pair) => {
                let mut items = vec![pair.car.clone()];
                for a in pair.cdr.iter() {
                    items.push(self.reval(a)?);
                }
                SExpr::list(items)
            }
            other => other.clone(),
        };
        Ok(SExpr::list([SExpr::Sym(self.s.assign), shown, v]))
    }

    fn let_rule(&mut self, vars: &[SymId], lhs: &SExpr, rhs: SExpr) -> Result<()> {
        if vars.is_empty() {
            if let SExpr::Sym(id) = lhs {
                if self.is_matrix_name(*id) || self.is_matrix_expr(&rhs) {
                    self.setk(lhs, &rhs)?;
                    return Ok(());
                }
                self.alg.values.remove(id);
            }
            if let Some(h) = lhs.car().and_then(SExpr::as_sym) {
                if self.alg.arrays.contains_key(&h) || self.is_matrix_name(h) {
                    self.setk(lhs, &rhs)?;
                    return Ok(());
                }
            }
        }
        self.add_rule(vars.to_vec(), lhs, rhs)
    }

    fn clear_item(&mut self, vars: &[SymId], item: &SExpr) -> Result<()> {
        if vars.is_empty() {
            if let SExpr::Sym(id) = item {
                self.alg.values.remove(id);
                self.alg.arrays.remove(id);
                self.alg.matrices.remove(id);
            }
        }
        self.clear_rule(vars, item)?;
        Ok(())
    }
}
