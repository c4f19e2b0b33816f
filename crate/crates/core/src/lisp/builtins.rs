//! Primitive functions implemented in the kernel.

use std::sync::{Arc, Mutex};

use super::arith::ArithOp;
use super::reader::parse_integer;
use super::symbols::{Arity, FnCell};
use super::types::{SExpr, SymId, RADIX};
use super::Interp;
use crate::error::{LispError, Result};

pub(crate) fn install(i: &mut Interp) {
    use Arity::*;
    i.def_builtin("CAR", Exact(1), |i, a| car(i, &a[0]));
    i.def_builtin("CDR", Exact(1), |i, a| cdr(i, &a[0]));
    i.def_builtin("CONS", Exact(2), |_, a| Ok(SExpr::cons(a[0].clone(), a[1].clone())));
    i.def_builtin("LIST", AtLeast(0), |_, a| Ok(SExpr::list(a.to_vec())));
    i.def_builtin("ATOM", Exact(1), |_, a| Ok(SExpr::from_bool(a[0].is_atom())));
    i.def_builtin("PAIRP", Exact(1), |_, a| Ok(SExpr::from_bool(a[0].is_pair())));
    i.def_builtin("EQ", Exact(2), |_, a| Ok(SExpr::from_bool(a[0].eq_id(&a[1]))));
    i.def_builtin("EQUAL", Exact(2), |_, a| Ok(SExpr::from_bool(a[0] == a[1])));
    i.def_builtin("NULL", Exact(1), |_, a| Ok(SExpr::from_bool(a[0].is_nil())));
    i.def_builtin("NOT", Exact(1), |_, a| Ok(SExpr::from_bool(a[0].is_nil())));
    i.def_builtin("IDP", Exact(1), |_, a| {
        Ok(SExpr::from_bool(matches!(a[0], SExpr::Sym(_))))
    });
    i.def_builtin("SYMBOLP", Exact(1), |_, a| {
        Ok(SExpr::from_bool(matches!(a[0], SExpr::Sym(_))))
    });
    i.def_builtin("NUMBERP", Exact(1), |_, a| Ok(SExpr::from_bool(a[0].is_number())));
    i.def_builtin("FIXP", Exact(1), |_, a| Ok(SExpr::from_bool(a[0].is_number())));
    i.def_builtin("BIGP", Exact(1), |_, a| {
        Ok(SExpr::from_bool(matches!(a[0], SExpr::Big(_))))
    });
    i.def_builtin("STRINGP", Exact(1), |_, a| {
        Ok(SExpr::from_bool(matches!(a[0], SExpr::Str(_))))
    });
    i.def_builtin("VECTORP", Exact(1), |_, a| {
        Ok(SExpr::from_bool(matches!(a[0], SExpr::Vector(_))))
    });

    i.def_builtin("PLUS2", Exact(2), |i, a| i.fix_arith(ArithOp::Plus, &a[0], &a[1]));
    i.def_builtin("TIMES2", Exact(2), |i, a| i.fix_arith(ArithOp::Times, &a[0], &a[1]));
    i.def_builtin("DIFFERENCE", Exact(2), |i, a| {
        i.fix_arith(ArithOp::Difference, &a[0], &a[1])
    });
    i.def_builtin("QUOTIENT", Exact(2), |i, a| {
        i.fix_arith(ArithOp::Quotient, &a[0], &a[1])
    });
    i.def_builtin("REMAINDER", Exact(2), |i, a| {
        i.fix_arith(ArithOp::Remainder, &a[0], &a[1])
    });
    i.def_builtin("MINUS", Exact(1), |i, a| i.fix_arith(ArithOp::Minus, &a[0], &a[0]));
    i.def_builtin("LESSP", Exact(2), |i, a| i.fix_arith(ArithOp::Lessp, &a[0], &a[1]));
    i.def_builtin("GREATERP", Exact(2), |i, a| {
        i.fix_arith(ArithOp::Greaterp, &a[0], &a[1])
    });
    i.def_builtin("PLUS", AtLeast(0), |i, a| fold_arith(i, ArithOp::Plus, a, 0));
    i.def_builtin("TIMES", AtLeast(0), |i, a| fold_arith(i, ArithOp::Times, a, 1));

    i.def_builtin("BIG-DIGITS", Exact(1), |i, a| match &a[0] {
        SExpr::Big(b) => Ok(b.digits.clone()),
        other => Err(LispError::Type(format!("{} is not a bignum", i.print(other)))),
    });
    i.def_builtin("BIG-NEGP", Exact(1), |i, a| match &a[0] {
        SExpr::Big(b) => Ok(SExpr::from_bool(b.negative)),
        other => Err(LispError::Type(format!("{} is not a bignum", i.print(other)))),
    });
    i.def_builtin("MAKE-BIG", Exact(2), |i, a| {
        let mut digits = Vec::new();
        for d in a[1].iter() {
            match d.as_fix() {
                Some(n) if (0..RADIX).contains(&n) => digits.push(n),
                _ => {
                    return Err(LispError::Type(format!(
                        "{} is not a bignum digit",
                        i.print(d)
                    )))
                }
            }
        }
        Ok(i.make_big(!a[0].is_nil(), &digits))
    });

    i.def_builtin("PUT", Exact(3), |i, a| {
        let s = expect_symbol(i, &a[0])?;
        let k = expect_symbol(i, &a[1])?;
        i.put_prop(s, k, a[2].clone());
        Ok(a[2].clone())
    });
    i.def_builtin("GET", Exact(2), |i, a| match (&a[0], &a[1]) {
        (SExpr::Sym(s), SExpr::Sym(k)) => Ok(i.get_prop(*s, *k)),
        _ => Ok(SExpr::NIL),
    });
    i.def_builtin("REMPROP", Exact(2), |i, a| {
        let s = expect_symbol(i, &a[0])?;
        let k = expect_symbol(i, &a[1])?;
        Ok(i.rem_prop(s, k))
    });
    i.def_builtin("FLAG", Exact(2), |i, a| {
        let f = expect_symbol(i, &a[1])?;
        for x in a[0].iter() {
            let s = expect_symbol(i, x)?;
            i.put_prop(s, f, SExpr::T);
        }
        Ok(SExpr::NIL)
    });
    i.def_builtin("REMFLAG", Exact(2), |i, a| {
        let f = expect_symbol(i, &a[1])?;
        for x in a[0].iter() {
            let s = expect_symbol(i, x)?;
            i.rem_prop(s, f);
        }
        Ok(SExpr::NIL)
    });
    i.def_builtin("FLAGP", Exact(2), |i, a| match (&a[0], &a[1]) {
        (SExpr::Sym(s), SExpr::Sym(f)) => Ok(SExpr::from_bool(i.flagp(*s, *f))),
        _ => Ok(SExpr::NIL),
    });
    i.def_builtin("PLIST", Exact(1), |i, a| {
        let s = expect_symbol(i, &a[0])?;
        Ok(i.plist(s))
    });

    i.def_builtin("EXPLODE", Exact(1), |i, a| i.explode(&a[0]));
    i.def_builtin("COMPRESS", Exact(1), |i, a| i.compress(&a[0]));
    i.def_builtin("LITER", Exact(1), |i, a| Ok(SExpr::from_bool(i.liter(&a[0]))));
    i.def_builtin("INTERN", Exact(1), |i, a| match &a[0] {
        SExpr::Str(s) => {
            let s = s.clone();
            Ok(i.sym(&s))
        }
        SExpr::Sym(_) => Ok(a[0].clone()),
        other => Err(LispError::Type(format!("cannot intern {}", i.print(other)))),
    });
    i.def_builtin("GENSYM", Exact(0), |i, _| Ok(SExpr::Sym(i.gensym())));

    i.def_builtin("PRINC", Exact(1), |i, a| {
        let s = i.princ_string(&a[0]);
        i.emit(&s);
        Ok(a[0].clone())
    });
    i.def_builtin("PRIN1", Exact(1), |i, a| {
        let s = i.print(&a[0]);
        i.emit(&s);
        Ok(a[0].clone())
    });
    i.def_builtin("PRINT", Exact(1), |i, a| {
        let s = i.print(&a[0]);
        i.emit(&s);
        i.emit("\n");
        Ok(a[0].clone())
    });
    i.def_builtin("TERPRI", Exact(0), |i, _| {
        i.emit("\n");
        Ok(SExpr::NIL)
    });
    i.def_builtin("POSN", Exact(0), |i, _| Ok(SExpr::Fix(i.column() as i64)));
    i.def_builtin("FLATSIZE", Exact(1), |i, a| {
        Ok(SExpr::Fix(i.print(&a[0]).chars().count() as i64))
    });

    i.def_builtin("APPLY", Exact(2), |i, a| {
        let args = a[1].to_vec();
        i.apply(&a[0], &args)
    });
    i.def_builtin("EVAL", Exact(1), |i, a| i.eval(&a[0]));
    i.def_builtin("SET", Exact(2), |i, a| {
        let s = expect_symbol(i, &a[0])?;
        if s == SymId::NIL || s == SymId::T {
            return Err(LispError::Type(format!("cannot assign to {}", i.name(s))));
        }
        i.set_value(s, a[1].clone());
        Ok(a[1].clone())
    });
    i.def_builtin("BOUNDP", Exact(1), |i, a| {
        let s = expect_symbol(i, &a[0])?;
        Ok(SExpr::from_bool(i.value(s).is_some()))
    });
    i.def_builtin("GETD", Exact(1), |i, a| {
        let s = expect_symbol(i, &a[0])?;
        Ok(match i.function_cell(s) {
            FnCell::Lambda(l) => l.clone(),
            FnCell::Builtin(_) | FnCell::Special(_) => SExpr::T,
            FnCell::Empty => SExpr::NIL,
        })
    });
    i.def_builtin("ERROR", AtLeast(0), |i, a| {
        let msg: Vec<String> = a.iter().map(|x| i.princ_string(x)).collect();
        Err(LispError::User(msg.join(" ")))
    });
    i.def_builtin("ERRORSET", Range(1, 2), |i, a| {
        let s = i.s.ok;
        let e = i.s.err;
        match i.errorset(&a[0]) {
            Ok(v) => Ok(SExpr::list([SExpr::Sym(s), v])),
            Err(msg) => {
                if a.get(1).is_some_and(|m| !m.is_nil()) {
                    i.diagnostic(&msg);
                }
                Ok(SExpr::list([SExpr::Sym(e), SExpr::string(&msg)]))
            }
        }
    });

    i.def_builtin("MKVECT", Exact(1), |i, a| match a[0].as_fix() {
        Some(n) if n >= 0 => Ok(SExpr::Vector(Arc::new(Mutex::new(vec![
            SExpr::NIL;
            n as usize + 1
        ])))),
        _ => Err(LispError::Type(format!("bad vector size {}", i.print(&a[0])))),
    });
    i.def_builtin("GETV", Exact(2), |i, a| {
        let (v, k) = vector_index(i, &a[0], &a[1])?;
        let r = v.lock().unwrap()[k].clone();
        Ok(r)
    });
    i.def_builtin("PUTV", Exact(3), |i, a| {
        let (v, k) = vector_index(i, &a[0], &a[1])?;
        v.lock().unwrap()[k] = a[2].clone();
        Ok(a[2].clone())
    });
    i.def_builtin("UPBV", Exact(1), |i, a| match &a[0] {
        SExpr::Vector(v) => Ok(SExpr::Fix(v.lock().unwrap().len() as i64 - 1)),
        other => Err(LispError::Type(format!("{} is not a vector", i.print(other)))),
    });

    i.def_builtin("BEGIN", Exact(0), |i, _| {
        i.begin_requested = true;
        Ok(SExpr::NIL)
    });
}

fn fold_arith(i: &mut Interp, op: ArithOp, args: &[SExpr], unit: i64) -> Result<SExpr> {
    let mut acc = SExpr::Fix(unit);
    for a in args {
        acc = i.fix_arith(op, &acc, a)?;
    }
    Ok(acc)
}

fn car(i: &Interp, x: &SExpr) -> Result<SExpr> {
    match x {
        SExpr::Pair(p) => Ok(p.car.clone()),
        _ if x.is_nil() => Ok(SExpr::NIL),
        other => Err(LispError::Type(format!("CAR of atom {}", i.print(other)))),
    }
}

fn cdr(i: &Interp, x: &SExpr) -> Result<SExpr> {
    match x {
        SExpr::Pair(p) => Ok(p.cdr.clone()),
        _ if x.is_nil() => Ok(SExpr::NIL),
        other => Err(LispError::Type(format!("CDR of atom {}", i.print(other)))),
    }
}

fn expect_symbol(i: &Interp, x: &SExpr) -> Result<SymId> {
    x.as_sym()
        .ok_or_else(|| LispError::Type(format!("{} is not a symbol", i.print(x))))
}

type SharedVec = Arc<Mutex<Vec<SExpr>>>;

fn vector_index(i: &Interp, v: &SExpr, k: &SExpr) -> Result<(SharedVec, usize)> {
    let vec = match v {
        SExpr::Vector(v) => v.clone(),
        other => return Err(LispError::Type(format!("{} is not a vector", i.print(other)))),
    };
    let len = vec.lock().unwrap().len();
    match k.as_fix() {
        Some(n) if n >= 0 && (n as usize) < len => Ok((vec, n as usize)),
        _ => Err(LispError::Type(format!("vector index {} out of range", i.print(k)))),
    }
}

impl Interp {
    /// Decomposes the printed name of an atom into single-character
    /// symbols, with digits as the fixnums 0 to 9 so they print plainly.
    pub fn explode(&mut self, a: &SExpr) -> Result<SExpr> {
        let text = match a {
            SExpr::Pair(_) | SExpr::Vector(_) => {
                return Err(LispError::Type(format!(
                    "EXPLODE of non-atom {}",
                    self.print(a)
                )))
            }
            other => self.princ_string(other),
        };
        let chars: Vec<SExpr> = text
            .chars()
            .map(|c| match c.to_digit(10) {
                Some(d) => SExpr::Fix(d as i64),
                None => {
                    let mut buf = [0u8; 4];
                    self.sym(c.encode_utf8(&mut buf))
                }
            })
            .collect();
        Ok(SExpr::list(chars))
    }

    /// Inverse of `explode`: a number when the characters spell one,
    /// otherwise the symbol with exactly that name.
    pub fn compress(&mut self, cs: &SExpr) -> Result<SExpr> {
        let mut text = String::new();
        for c in cs.iter() {
            match c {
                SExpr::Sym(id) => {
                    let name = self.name(*id);
                    if name.chars().count() != 1 {
                        return Err(LispError::Type(format!(
                            "COMPRESS element {} is not a single character",
                            self.print(c)
                        )));
                    }
                    text.push_str(name);
                }
                SExpr::Fix(n) if (0..=9).contains(n) => text.push_str(&n.to_string()),
                other => {
                    return Err(LispError::Type(format!(
                        "COMPRESS element {} is not a character",
                        self.print(other)
                    )))
                }
            }
        }
        if text.is_empty() {
            return Err(LispError::Type("COMPRESS of empty list".into()));
        }
        if let Some(n) = parse_integer(self, &text) {
            return Ok(n);
        }
        Ok(self.sym(&text))
    }

    /// True for a one-character symbol naming a letter of either case.
    pub fn liter(&self, x: &SExpr) -> bool {
        match x {
            SExpr::Sym(id) => {
                let mut chars = self.name(*id).chars();
                match (chars.next(), chars.next()) {
                    (Some(c), None) => {
                        let code = c as u32;
                        (65..=90).contains(&code) || (97..=122).contains(&code)
                    }
                    _ => false,
                }
            }
            _ => false,
        }
    }
}
