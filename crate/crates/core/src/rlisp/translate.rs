//! Purely syntactic translation of statement trees into Lisp forms.
//!
//! In algebraic mode every expression becomes a form that evaluates to a
//! prefix expression. Local variables (procedure parameters, BEGIN
//! scalars and FOR variables) are Lisp variables holding prefix values;
//! everything else is quoted and left to the simplifier.

use super::ast::{Block, BlockItem, Expr, ForAction, ForLoop, Mode, ProcKind, RelOp, Stmt};
use crate::error::{LispError, Result};
use crate::lisp::{Interp, SExpr};

/// How the session treats the value of a translated statement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StmtKind {
    /// An algebraic value (or `(*ASSIGN target value)`) to print.
    Value,
    /// Evaluated for effect only.
    Void,
    /// A symbolic-mode value, printed as Lisp data.
    Lisp,
    /// Changes the default mode for later statements.
    Mode(Mode),
    End,
}

pub struct Translator<'i> {
    it: &'i mut Interp,
    locals: Vec<String>,
    mode: Mode,
}

fn syntax(msg: String) -> LispError {
    LispError::Alg(msg)
}

impl<'i> Translator<'i> {
    pub fn new(it: &'i mut Interp, mode: Mode) -> Translator<'i> {
        Translator {
            it,
            locals: Vec::new(),
            mode,
        }
    }

    fn sym(&mut self, name: &str) -> SExpr {
        self.it.sym(name)
    }

    fn quote(&mut self, x: SExpr) -> SExpr {
        let q = self.sym("QUOTE");
        SExpr::list([q, x])
    }

    fn call(&mut self, f: &str, args: impl IntoIterator<Item = SExpr>) -> SExpr {
        let mut items = vec![self.sym(f)];
        items.extend(args);
        SExpr::list(items)
    }

    fn is_local(&self, name: &str) -> bool {
        self.locals.iter().any(|l| l == name)
    }

    // The constant value of a form, if evaluating it is trivial.
    fn constant(&self, f: &SExpr) -> Option<SExpr> {
        match f {
            SExpr::Fix(_) | SExpr::Big(_) | SExpr::Str(_) => Some(f.clone()),
            SExpr::Sym(id) if f.is_nil() || *id == crate::lisp::SymId::T => Some(f.clone()),
            SExpr::Pair(p) if p.car.as_sym() == self.it.lookup_symbol("QUOTE") => {
                p.cdr.car().cloned()
            }
            _ => None,
        }
    }

    /// A form building the list of the values of `forms`, folded into a
    /// single quoted constant when every element is constant.
    fn mk_list(&mut self, forms: Vec<SExpr>) -> SExpr {
        let consts: Option<Vec<SExpr>> = forms.iter().map(|f| self.constant(f)).collect();
        match consts {
            Some(vals) => self.quote(SExpr::list(vals)),
            None => self.call("LIST", forms),
        }
    }

    fn number(&mut self, text: &str) -> Result<SExpr> {
        self.it.read_str(text)
    }

    // ---- statements --------------------------------------------------

    pub fn statement(&mut self, stmt: &Stmt) -> Result<(SExpr, StmtKind)> {
        match stmt {
            Stmt::Expr(e) if self.mode == Mode::Symbolic => Ok((self.lisp(e)?, StmtKind::Lisp)),
            Stmt::Expr(e) => self.top_expr(e),
            Stmt::Proc {
                kind,
                name,
                params,
                body,
            } => self.procedure(*kind, name, params, body),
            Stmt::Array(specs) => {
                let mut args = Vec::new();
                for (name, bounds) in specs {
                    let mut items = vec![self.sym(name)];
                    items[0] = self.quote(items[0].clone());
                    for b in bounds {
                        let v = self.alg(b)?;
                        items.push(self.call("IEVAL", [v]));
                    }
                    args.push(self.mk_list(items));
                }
                Ok((self.call("ARRAY", args), StmtKind::Void))
            }
            Stmt::Operator(names) => Ok((self.quoted_call("OPERATOR", names), StmtKind::Void)),
            Stmt::Matrix(specs) => {
                let mut args = Vec::new();
                for (name, dims) in specs {
                    let n = self.sym(name);
                    let n = self.quote(n);
                    match dims {
                        None => args.push(n),
                        Some((r, c)) => {
                            let r = self.alg(r)?;
                            let c = self.alg(c)?;
                            let r = self.call("IEVAL", [r]);
                            let c = self.call("IEVAL", [c]);
                            args.push(self.mk_list(vec![n, r, c]));
                        }
                    }
                }
                Ok((self.call("MATRIX", args), StmtKind::Void))
            }
            Stmt::Let { vars, rules } => {
                let vars = self.name_data(vars);
                let mut data = Vec::new();
                for (lhs, rhs) in rules {
                    let l = self.prefix(lhs)?;
                    let r = self.prefix(rhs)?;
                    data.push(SExpr::list([l, r]));
                }
                let v = self.quote(vars);
                let d = self.quote(SExpr::list(data));
                Ok((self.call("LET", [v, d]), StmtKind::Void))
            }
            Stmt::Clear { vars, items } => {
                let vars = self.name_data(vars);
                let mut data = Vec::new();
                for x in items {
                    data.push(self.prefix(x)?);
                }
                let v = self.quote(vars);
                let d = self.quote(SExpr::list(data));
                Ok((self.call("CLEAR", [v, d]), StmtKind::Void))
            }
            Stmt::Switch { on, names } => {
                let f = if *on { "ON" } else { "OFF" };
                Ok((self.quoted_call(f, names), StmtKind::Void))
            }
            Stmt::Factor(names) => Ok((self.quoted_call("FACTOR", names), StmtKind::Void)),
            Stmt::Remfac(names) => Ok((self.quoted_call("REMFAC", names), StmtKind::Void)),
            Stmt::Order(items) => {
                let mut args = Vec::new();
                for x in items {
                    let p = self.prefix(x)?;
                    args.push(self.quote(p));
                }
                Ok((self.call("ORDER", args), StmtKind::Void))
            }
            Stmt::Showtime => Ok((self.call("SHOWTIME", []), StmtKind::Void)),
            Stmt::Mode(m) => Ok((SExpr::NIL, StmtKind::Mode(*m))),
            Stmt::InMode(m, inner) => {
                let saved = std::mem::replace(&mut self.mode, *m);
                let r = self.statement(inner);
                self.mode = saved;
                r
            }
            Stmt::End => Ok((SExpr::NIL, StmtKind::End)),
        }
    }

    fn name_data(&mut self, names: &[String]) -> SExpr {
        let items: Vec<SExpr> = names.iter().map(|n| self.sym(n)).collect();
        SExpr::list(items)
    }

    fn quoted_call(&mut self, f: &str, names: &[String]) -> SExpr {
        let args: Vec<SExpr> = names
            .iter()
            .map(|n| {
                let s = self.sym(n);
                self.quote(s)
            })
            .collect();
        self.call(f, args)
    }

    fn top_expr(&mut self, e: &Expr) -> Result<(SExpr, StmtKind)> {
        match e {
            Expr::Assign(t, v) => {
                let value = self.alg(v)?;
                let target = self.target(t)?;
                Ok((self.call("ASSIGNK", [target, value]), StmtKind::Value))
            }
            Expr::For(f) if f.action == ForAction::Do => Ok((self.for_loop(f)?, StmtKind::Void)),
            Expr::Write(_) | Expr::Block(_) | Expr::If(..) | Expr::Go(_) | Expr::Return(_) => {
                Ok((self.stmt(e)?, StmtKind::Void))
            }
            _ => {
                let v = self.alg(e)?;
                Ok((self.call("AEVAL", [v]), StmtKind::Value))
            }
        }
    }

    fn procedure(
        &mut self,
        kind: ProcKind,
        name: &str,
        params: &[String],
        body: &Expr,
    ) -> Result<(SExpr, StmtKind)> {
        let saved_locals = std::mem::replace(&mut self.locals, params.to_vec());
        let saved_mode = self.mode;
        self.mode = if kind == ProcKind::Symbolic {
            Mode::Symbolic
        } else {
            Mode::Algebraic
        };
        let body = match self.mode {
            Mode::Symbolic => self.lisp(body),
            Mode::Algebraic => self.alg(body),
        };
        self.locals = saved_locals;
        self.mode = saved_mode;
        let body = body?;
        let fname = self.sym(name);
        let plist = self.name_data(params);
        let de = self.call("DE", [fname.clone(), plist, body]);
        let qname = self.quote(fname);
        let form = if kind == ProcKind::Symbolic {
            self.call("PROGN", [de, qname])
        } else {
            let fsym = self.sym(name);
            let flist = self.quote(SExpr::list([fsym]));
            let flag = self.sym("ALGPROC");
            let flag = self.quote(flag);
            let fl = self.call("FLAG", [flist, flag]);
            self.call("PROGN", [de, fl, qname])
        };
        Ok((form, StmtKind::Void))
    }

    // ---- algebraic mode ----------------------------------------------

    /// Static prefix data for an expression, used by LET, CLEAR and ORDER.
    fn prefix(&mut self, e: &Expr) -> Result<SExpr> {
        match e {
            Expr::Num(n) => self.number(n),
            Expr::Id(n) => Ok(self.sym(n)),
            Expr::App(h, args) => {
                let mut items = vec![self.sym(h)];
                for a in args {
                    items.push(self.prefix(a)?);
                }
                Ok(SExpr::list(items))
            }
            Expr::Mat(rows) => {
                let mut items = vec![self.sym("MAT")];
                for r in rows {
                    let mut row = Vec::new();
                    for x in r {
                        row.push(self.prefix(x)?);
                    }
                    items.push(SExpr::list(row));
                }
                Ok(SExpr::list(items))
            }
            other => Err(syntax(format!("{other} is not allowed here"))),
        }
    }

    /// A form evaluating to the prefix value of `e`.
    pub fn alg(&mut self, e: &Expr) -> Result<SExpr> {
        match e {
            Expr::Num(n) => self.number(n),
            Expr::Str(s) => Ok(SExpr::string(s)),
            Expr::Id(n) if self.is_local(n) => Ok(self.sym(n)),
            Expr::Id(n) => {
                let s = self.sym(n);
                Ok(self.quote(s))
            }
            Expr::Quote(text) => {
                let d = self.it.read_str(text)?;
                Ok(self.quote(d))
            }
            Expr::App(h, args) => {
                let head = self.sym(h);
                let mut forms = vec![self.quote(head)];
                for a in args {
                    forms.push(self.alg(a)?);
                }
                Ok(self.mk_list(forms))
            }
            Expr::Mat(rows) => {
                let head = self.sym("MAT");
                let mut forms = vec![self.quote(head)];
                for r in rows {
                    let mut row = Vec::new();
                    for x in r {
                        row.push(self.alg(x)?);
                    }
                    forms.push(self.mk_list(row));
                }
                Ok(self.mk_list(forms))
            }
            Expr::Rel(..) | Expr::Not(_) | Expr::And(_) | Expr::Or(_) => self.cond(e),
            Expr::Assign(t, v) => self.assign(t, v),
            Expr::If(c, a, b) => {
                let c = self.cond(c)?;
                let a = self.alg(a)?;
                let b = match b {
                    Some(b) => self.alg(b)?,
                    None => SExpr::Fix(0),
                };
                let t = SExpr::T;
                let cond = self.sym("COND");
                Ok(SExpr::list([cond, SExpr::list([c, a]), SExpr::list([t, b])]))
            }
            Expr::For(f) => self.for_loop(f),
            Expr::Block(b) => self.block(b),
            Expr::Go(l) => {
                let l = self.sym(l);
                Ok(self.call("GO", [l]))
            }
            Expr::Return(v) => {
                let v = match v {
                    Some(v) => self.alg(v)?,
                    None => SExpr::NIL,
                };
                Ok(self.call("RETURN", [v]))
            }
            Expr::Write(items) => {
                let mut args = Vec::new();
                for x in items {
                    args.push(match x {
                        Expr::Assign(t, v) => {
                            let value = self.alg(v)?;
                            let target = self.target(t)?;
                            self.call("ASSIGNK", [target, value])
                        }
                        _ => self.alg(x)?,
                    });
                }
                Ok(self.call("AWRITE", args))
            }
        }
    }

    /// Like [`Self::alg`], for a position where the value is discarded.
    fn stmt(&mut self, e: &Expr) -> Result<SExpr> {
        match e {
            Expr::Num(_) | Expr::Str(_) | Expr::Id(_) | Expr::Quote(_) | Expr::App(..) | Expr::Mat(_) => {
                let v = self.alg(e)?;
                Ok(self.call("AEVAL", [v]))
            }
            Expr::If(c, a, b) => {
                let c = self.cond(c)?;
                let a = self.stmt(a)?;
                let mut clauses = vec![self.sym("COND"), SExpr::list([c, a])];
                if let Some(b) = b {
                    let b = self.stmt(b)?;
                    clauses.push(SExpr::list([SExpr::T, b]));
                }
                Ok(SExpr::list(clauses))
            }
            _ => self.alg(e),
        }
    }

    fn target(&mut self, t: &Expr) -> Result<SExpr> {
        match t {
            Expr::Id(n) => {
                let s = self.sym(n);
                Ok(self.quote(s))
            }
            Expr::App(..) => self.alg(t),
            other => Err(syntax(format!("cannot assign to {other}"))),
        }
    }

    fn assign(&mut self, t: &Expr, v: &Expr) -> Result<SExpr> {
        let value = self.alg(v)?;
        if let Expr::Id(n) = t {
            if self.is_local(n) {
                let var = self.sym(n);
                let ev = self.call("AEVAL", [value]);
                return Ok(self.call("SETQ", [var, ev]));
            }
        }
        let target = self.target(t)?;
        Ok(self.call("SETK", [target, value]))
    }

    fn cond(&mut self, e: &Expr) -> Result<SExpr> {
        if self.mode == Mode::Symbolic {
            return self.lisp(e);
        }
        match e {
            Expr::Rel(op, a, b) => {
                let a = self.alg(a)?;
                let b = self.alg(b)?;
                let f = match op {
                    RelOp::Eq | RelOp::Neq => "EVALEQUAL",
                    RelOp::Lt => "EVALLESSP",
                    RelOp::Gt => "EVALGREATERP",
                    RelOp::Le => "EVALLEQ",
                    RelOp::Ge => "EVALGEQ",
                };
                let test = self.call(f, [a, b]);
                Ok(if *op == RelOp::Neq {
                    self.call("NOT", [test])
                } else {
                    test
                })
            }
            Expr::Not(a) => {
                let a = self.cond(a)?;
                Ok(self.call("NOT", [a]))
            }
            Expr::And(xs) | Expr::Or(xs) => {
                let mut forms = Vec::new();
                for x in xs {
                    forms.push(self.cond(x)?);
                }
                let f = if matches!(e, Expr::And(_)) { "AND" } else { "OR" };
                Ok(self.call(f, forms))
            }
            _ => {
                // A bare expression is true when nonzero.
                let v = self.alg(e)?;
                let test = self.call("EVALEQUAL", [v, SExpr::Fix(0)]);
                Ok(self.call("NOT", [test]))
            }
        }
    }

    fn block(&mut self, b: &Block) -> Result<SExpr> {
        let mark = self.locals.len();
        self.locals.extend(b.locals.iter().cloned());
        let r = self.block_body(b);
        self.locals.truncate(mark);
        r
    }

    fn block_body(&mut self, b: &Block) -> Result<SExpr> {
        let vars = self.name_data(&b.locals);
        let init = match self.mode {
            Mode::Algebraic => SExpr::Fix(0),
            Mode::Symbolic => SExpr::NIL,
        };
        let mut items = vec![self.sym("PROG"), vars];
        for v in &b.locals {
            let s = self.sym(v);
            items.push(self.call("SETQ", [s, init.clone()]));
        }
        for it in &b.items {
            items.push(match it {
                BlockItem::Label(l) => self.sym(l),
                BlockItem::Stmt(e) => match self.mode {
                    Mode::Algebraic => self.stmt(e)?,
                    Mode::Symbolic => self.lisp(e)?,
                },
            });
        }
        Ok(SExpr::list(items))
    }

    fn for_loop(&mut self, f: &ForLoop) -> Result<SExpr> {
        let var = self.sym(&f.var);
        let acc = SExpr::Sym(self.it.gensym());
        let step = SExpr::Sym(self.it.gensym());
        let label = SExpr::Sym(self.it.gensym());
        let symbolic = self.mode == Mode::Symbolic;
        let start = if symbolic {
            self.lisp(&f.start)?
        } else {
            let s = self.alg(&f.start)?;
            self.call("IEVAL", [s])
        };
        let step_val = match &f.step {
            Some(s) if symbolic => self.lisp(s)?,
            Some(s) => self.alg(s)?,
            None => SExpr::Fix(1),
        };
        self.locals.push(f.var.clone());
        let parts = self.for_parts(f, symbolic);
        self.locals.pop();
        let (finish, body) = parts?;

        let init = match f.action {
            ForAction::Product => SExpr::Fix(1),
            _ => SExpr::Fix(0),
        };
        let result = match f.action {
            ForAction::Do => SExpr::NIL,
            _ => acc.clone(),
        };
        let done = self.call("FORDONE", [var.clone(), finish, step.clone()]);
        let ret = self.call("RETURN", [result]);
        let cond = self.call("COND", [SExpr::list([done, ret])]);
        let action = match f.action {
            ForAction::Do => body,
            ForAction::Sum | ForAction::Product => {
                let op = match (f.action, symbolic) {
                    (ForAction::Sum, false) => "ALGADD",
                    (ForAction::Sum, true) => "PLUS",
                    (_, false) => "ALGMULT",
                    (_, true) => "TIMES",
                };
                let v = self.call(op, [acc.clone(), body]);
                self.call("SETQ", [acc.clone(), v])
            }
        };
        let next = self.call("PLUS", [var.clone(), step.clone()]);
        let forms = vec![
            self.sym("PROG"),
            SExpr::list([var.clone(), acc.clone(), step.clone()]),
            self.call("SETQ", [var.clone(), start]),
            {
                let s = self.call("FORSTEP", [step_val]);
                self.call("SETQ", [step.clone(), s])
            },
            self.call("SETQ", [acc, init]),
            label.clone(),
            cond,
            action,
            self.call("SETQ", [var, next]),
            self.call("GO", [label]),
        ];
        Ok(SExpr::list(forms))
    }

    fn for_parts(&mut self, f: &ForLoop, symbolic: bool) -> Result<(SExpr, SExpr)> {
        if symbolic {
            return Ok((self.lisp(&f.finish)?, self.lisp(&f.body)?));
        }
        let fin = self.alg(&f.finish)?;
        let finish = self.call("IEVAL", [fin]);
        let body = match f.action {
            ForAction::Do => self.stmt(&f.body)?,
            _ => self.alg(&f.body)?,
        };
        Ok((finish, body))
    }

    // ---- symbolic mode -----------------------------------------------

    /// Translation of `e` as ordinary Lisp code.
    pub fn lisp(&mut self, e: &Expr) -> Result<SExpr> {
        let saved = std::mem::replace(&mut self.mode, Mode::Symbolic);
        let r = self.lisp_inner(e);
        self.mode = saved;
        r
    }

    fn lisp_inner(&mut self, e: &Expr) -> Result<SExpr> {
        match e {
            Expr::Num(n) => self.number(n),
            Expr::Str(s) => Ok(SExpr::string(s)),
            Expr::Id(n) => Ok(self.sym(n)),
            Expr::Quote(text) => {
                let d = self.it.read_str(text)?;
                Ok(self.quote(d))
            }
            Expr::App(h, args) => {
                let mut forms = vec![self.sym(h)];
                for a in args {
                    forms.push(self.lisp_inner(a)?);
                }
                Ok(SExpr::list(forms))
            }
            Expr::Mat(_) => Err(syntax("MAT is not available in symbolic mode".into())),
            Expr::Rel(op, a, b) => {
                let a = self.lisp_inner(a)?;
                let b = self.lisp_inner(b)?;
                let (f, negate) = match op {
                    RelOp::Eq => ("EQUAL", false),
                    RelOp::Neq => ("EQUAL", true),
                    RelOp::Lt => ("LESSP", false),
                    RelOp::Gt => ("GREATERP", false),
                    RelOp::Le => ("GREATERP", true),
                    RelOp::Ge => ("LESSP", true),
                };
                let test = self.call(f, [a, b]);
                Ok(if negate {
                    self.call("NOT", [test])
                } else {
                    test
                })
            }
            Expr::Not(a) => {
                let a = self.lisp_inner(a)?;
                Ok(self.call("NOT", [a]))
            }
            Expr::And(xs) | Expr::Or(xs) => {
                let mut forms = Vec::new();
                for x in xs {
                    forms.push(self.lisp_inner(x)?);
                }
                let f = if matches!(e, Expr::And(_)) { "AND" } else { "OR" };
                Ok(self.call(f, forms))
            }
            Expr::Assign(t, v) => match &**t {
                Expr::Id(n) => {
                    let var = self.sym(n);
                    let v = self.lisp_inner(v)?;
                    Ok(self.call("SETQ", [var, v]))
                }
                other => Err(syntax(format!("cannot assign to {other} in symbolic mode"))),
            },
            Expr::If(c, a, b) => {
                let c = self.lisp_inner(c)?;
                let a = self.lisp_inner(a)?;
                let mut clauses = vec![self.sym("COND"), SExpr::list([c, a])];
                if let Some(b) = b {
                    let b = self.lisp_inner(b)?;
                    clauses.push(SExpr::list([SExpr::T, b]));
                }
                Ok(SExpr::list(clauses))
            }
            Expr::For(f) => self.for_loop(f),
            Expr::Block(b) => self.block(b),
            Expr::Go(_) | Expr::Return(_) => self.alg_control(e),
            Expr::Write(items) => {
                let mut forms = vec![self.sym("PROGN")];
                for x in items {
                    let v = self.lisp_inner(x)?;
                    forms.push(self.call("PRINC", [v]));
                }
                forms.push(self.call("TERPRI", []));
                Ok(SExpr::list(forms))
            }
        }
    }

    fn alg_control(&mut self, e: &Expr) -> Result<SExpr> {
        match e {
            Expr::Go(l) => {
                let l = self.sym(l);
                Ok(self.call("GO", [l]))
            }
            Expr::Return(v) => {
                let v = match v {
                    Some(v) => self.lisp_inner(v)?,
                    None => SExpr::NIL,
                };
                Ok(self.call("RETURN", [v]))
            }
            _ => unreachable!("only GO and RETURN reach here"),
        }
    }
}
