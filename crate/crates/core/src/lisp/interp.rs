//! The evaluator: shallow-bound variables, Lisp-2 function cells, and the
//! handful of special forms the kernel understands.


use super::symbols::{Arity, Builtin, BuiltinFn, FnCell, Special, SymbolTable, Syms};
use super::types::{SExpr, SymId};
use crate::algebra::AlgState;
use crate::error::{LispError, Result};
use crate::output::OutputState;

/// Default storage budget, in bytes.
pub const DEFAULT_STORAGE: usize = 64 * 1024 * 1024;

const DEFAULT_MAX_DEPTH: usize = 20_000;

/// Reports the number of live heap bytes attributable to the interpreter.
pub type StorageProbe = fn() -> usize;

/// One interpreter instance: Lisp state, algebra state and output buffers.
///
/// Instances share nothing; an `Interp` may be moved between threads.
pub struct Interp {
    pub(crate) table: SymbolTable,
    pub(crate) s: Syms,
    bindings: Vec<(SymId, Option<SExpr>)>,
    depth: usize,
    max_depth: usize,
    gensym_counter: u64,
    eval_count: u64,
    storage: Option<(usize, StorageProbe)>,
    out: String,
    col: usize,
    diag: String,
    pub(crate) begin_requested: bool,
    pub(crate) alg: AlgState,
    pub(crate) fmt: OutputState,
}

impl Interp {
    /// A bare kernel with builtins installed but no prelude loaded.
    pub fn bare() -> Interp {
        let mut table = SymbolTable::default();
        let s = Syms::intern_all(&mut table);
        debug_assert_eq!(s.nil, SymId::NIL);
        debug_assert_eq!(s.t, SymId::T);
        let mut interp = Interp {
            table,
            s,
            bindings: Vec::new(),
            depth: 0,
            max_depth: DEFAULT_MAX_DEPTH,
            gensym_counter: 0,
            eval_count: 0,
            storage: None,
            out: String::new(),
            col: 0,
            diag: String::new(),
            begin_requested: false,
            alg: AlgState::default(),
            fmt: OutputState::default(),
        };
        interp.set_value(SymId::NIL, SExpr::NIL);
        interp.set_value(SymId::T, SExpr::T);
        interp.install_specials();
        super::builtins::install(&mut interp);
        crate::algebra::install(&mut interp);
        crate::output::install(&mut interp);
        interp
    }

    /// A kernel with the standard prelude loaded.
    pub fn new() -> Result<Interp> {
        let mut interp = Interp::bare();
        crate::prelude::load_default(&mut interp)?;
        Ok(interp)
    }

    fn install_specials(&mut self) {
        let specials = [
            ("QUOTE", Special::Quote),
            ("FUNCTION", Special::Function),
            ("COND", Special::Cond),
            ("SETQ", Special::Setq),
            ("LAMBDA", Special::Lambda),
            ("PROG", Special::Prog),
            ("PROGN", Special::Progn),
            ("GO", Special::Go),
            ("RETURN", Special::Return),
            ("AND", Special::And),
            ("OR", Special::Or),
            ("DE", Special::De),
        ];
        for (name, sp) in specials {
            let id = self.intern(name);
            self.table.get_mut(id).func = FnCell::Special(sp);
        }
    }

    // ---- symbols -------------------------------------------------------

    pub fn intern(&mut self, name: &str) -> SymId {
        self.table.intern(name)
    }

    pub fn sym(&mut self, name: &str) -> SExpr {
        SExpr::Sym(self.intern(name))
    }

    pub fn name(&self, id: SymId) -> &str {
        self.table.name(id)
    }

    pub fn lookup_symbol(&self, name: &str) -> Option<SymId> {
        self.table.lookup(name)
    }

    pub fn gensym(&mut self) -> SymId {
        loop {
            self.gensym_counter += 1;
            let name = format!("G{:04}", self.gensym_counter);
            if self.table.lookup(&name).is_none() {
                return self.intern(&name);
            }
        }
    }

    pub fn value(&self, id: SymId) -> Option<&SExpr> {
        self.table.get(id).value.as_ref()
    }

    pub fn set_value(&mut self, id: SymId, v: SExpr) {
        self.table.get_mut(id).value = Some(v);
    }

    pub fn function_cell(&self, id: SymId) -> &FnCell {
        &self.table.get(id).func
    }

    pub fn set_function(&mut self, id: SymId, cell: FnCell) {
        self.table.get_mut(id).func = cell;
    }

    pub fn def_builtin(&mut self, name: &'static str, arity: Arity, f: BuiltinFn) {
        let id = self.intern(name);
        self.set_function(id, FnCell::Builtin(Builtin { name, arity, f }));
    }

    pub fn get_prop(&self, s: SymId, key: SymId) -> SExpr {
        self.table
            .get(s)
            .plist
            .iter()
            .find(|(k, _)| *k == key)
            .map(|(_, v)| v.clone())
            .unwrap_or(SExpr::NIL)
    }

    pub fn put_prop(&mut self, s: SymId, key: SymId, v: SExpr) {
        let plist = &mut self.table.get_mut(s).plist;
        match plist.iter_mut().find(|(k, _)| *k == key) {
            Some(slot) => slot.1 = v,
            None => plist.push((key, v)),
        }
    }

    pub fn rem_prop(&mut self, s: SymId, key: SymId) -> SExpr {
        let plist = &mut self.table.get_mut(s).plist;
        match plist.iter().position(|(k, _)| *k == key) {
            Some(i) => plist.remove(i).1,
            None => SExpr::NIL,
        }
    }

    pub fn flagp(&self, s: SymId, flag: SymId) -> bool {
        !self.get_prop(s, flag).is_nil()
    }

    pub fn plist(&self, s: SymId) -> SExpr {
        SExpr::list(
            self.table
                .get(s)
                .plist
                .iter()
                .map(|(k, v)| SExpr::cons(SExpr::Sym(*k), v.clone()))
                .collect::<Vec<_>>(),
        )
    }

    // ---- bindings ------------------------------------------------------

    pub(crate) fn binding_mark(&self) -> usize {
        self.bindings.len()
    }

    pub(crate) fn bind(&mut self, id: SymId, v: SExpr) {
        let old = self.table.get_mut(id).value.replace(v);
        self.bindings.push((id, old));
    }

    pub(crate) fn unbind_to(&mut self, mark: usize) {
        while self.bindings.len() > mark {
            let (id, old) = self.bindings.pop().expect("binding stack");
            self.table.get_mut(id).value = old;
        }
    }

    // ---- output --------------------------------------------------------

    /// Appends text to the standard output buffer.
    pub fn emit(&mut self, s: &str) {
        match s.rfind('\n') {
            Some(i) => self.col = s[i + 1..].chars().count(),
            None => self.col += s.chars().count(),
        }
        self.out.push_str(s);
    }

    pub fn column(&self) -> usize {
        self.col
    }

    pub fn take_output(&mut self) -> String {
        std::mem::take(&mut self.out)
    }

    /// Records a diagnostic line with the conventional prefix.
    pub fn diagnostic(&mut self, msg: &str) {
        self.diag.push_str("***** ");
        self.diag.push_str(msg);
        self.diag.push('\n');
    }

    /// Runs `f` with a fresh output buffer and returns what it printed.
    pub fn capture_output<R>(
        &mut self,
        f: impl FnOnce(&mut Interp) -> Result<R>,
    ) -> Result<(R, String)> {
        let saved = std::mem::take(&mut self.out);
        let saved_col = std::mem::replace(&mut self.col, 0);
        let r = f(self);
        let text = std::mem::replace(&mut self.out, saved);
        self.col = saved_col;
        r.map(|v| (v, text))
    }

    pub fn take_diagnostics(&mut self) -> String {
        std::mem::take(&mut self.diag)
    }

    // ---- limits --------------------------------------------------------

    pub fn set_max_depth(&mut self, depth: usize) {
        self.max_depth = depth;
    }

    /// Installs a storage budget checked periodically during evaluation.
    pub fn set_storage_limit(&mut self, bytes: usize, probe: StorageProbe) {
        self.storage = Some((bytes, probe));
    }

    /// Counts one unit of work and polls the storage budget now and then.
    pub(crate) fn tick(&mut self) -> Result<()> {
        self.eval_count = self.eval_count.wrapping_add(1);
        if self.eval_count % 1024 == 0 {
            if let Some((limit, probe)) = self.storage {
                if probe() > limit {
                    return Err(LispError::Storage(limit));
                }
            }
        }
        Ok(())
    }

    pub(crate) fn enter(&mut self) -> Result<()> {
        if self.depth >= self.max_depth {
            return Err(LispError::Depth);
        }
        self.depth += 1;
        Ok(())
    }

    pub(crate) fn leave(&mut self) {
        self.depth -= 1;
    }

    // ---- evaluation ----------------------------------------------------

    pub fn eval(&mut self, form: &SExpr) -> Result<SExpr> {
        match form {
            SExpr::Sym(id) => match self.value(*id) {
                Some(v) => Ok(v.clone()),
                None => Err(LispError::Unbound(self.name(*id).to_string())),
            },
            SExpr::Pair(p) => {
                self.tick()?;
                self.enter()?;
                let r = self.eval_pair(&p.car, &p.cdr);
                self.leave();
                r
            }
            _ => Ok(form.clone()),
        }
    }

    fn eval_pair(&mut self, head: &SExpr, args: &SExpr) -> Result<SExpr> {
        match head {
            SExpr::Sym(id) => {
                let cell = self.table.get(*id).func.clone();
                match cell {
                    FnCell::Special(sp) => self.eval_special(sp, args),
                    FnCell::Builtin(b) => {
                        let argv = self.eval_args(args)?;
                        self.call_builtin(&b, &argv)
                    }
                    FnCell::Lambda(lam) => {
                        let argv = self.eval_args(args)?;
                        let name = self.name(*id).to_string();
                        self.apply_lambda(&lam, &argv, &name)
                    }
                    FnCell::Empty => Err(LispError::Undefined(self.name(*id).to_string())),
                }
            }
            SExpr::Pair(p) if p.car.as_sym() == Some(self.s.lambda) => {
                let argv = self.eval_args(args)?;
                self.apply_lambda(head, &argv, "LAMBDA")
            }
            other => Err(LispError::Type(format!(
                "{} is not a function",
                self.print(other)
            ))),
        }
    }

    fn eval_args(&mut self, args: &SExpr) -> Result<Vec<SExpr>> {
        args.iter().map(|a| self.eval(a)).collect()
    }

    fn call_builtin(&mut self, b: &Builtin, argv: &[SExpr]) -> Result<SExpr> {
        if !b.arity.accepts(argv.len()) {
            return Err(LispError::Arity {
                name: b.name.to_string(),
                got: argv.len(),
                expected: b.arity.describe(),
            });
        }
        (b.f)(self, argv)
    }

    fn apply_lambda(&mut self, lam: &SExpr, argv: &[SExpr], name: &str) -> Result<SExpr> {
        let rest = lam.cdr().cloned().unwrap_or(SExpr::NIL);
        let params = rest.car().cloned().unwrap_or(SExpr::NIL);
        let body = rest.cdr().cloned().unwrap_or(SExpr::NIL);
        let nparams = params.list_len();
        if nparams != argv.len() {
            return Err(LispError::Arity {
                name: name.to_string(),
                got: argv.len(),
                expected: nparams.to_string(),
            });
        }
        let mark = self.binding_mark();
        for (p, a) in params.iter().zip(argv) {
            match p.as_sym() {
                Some(id) if id != SymId::NIL && id != SymId::T => self.bind(id, a.clone()),
                _ => {
                    self.unbind_to(mark);
                    return Err(LispError::Type(format!(
                        "bad parameter {} in {}",
                        self.print(p),
                        name
                    )));
                }
            }
        }
        let r = self.progn(&body);
        self.unbind_to(mark);
        r
    }

    /// Applies a function designator (symbol or lambda expression) to
    /// already-evaluated arguments.
    pub fn apply(&mut self, f: &SExpr, argv: &[SExpr]) -> Result<SExpr> {
        match f {
            SExpr::Sym(id) => {
                let cell = self.table.get(*id).func.clone();
                match cell {
                    FnCell::Builtin(b) => {
                        self.enter()?;
                        let r = self.call_builtin(&b, argv);
                        self.leave();
                        r
                    }
                    FnCell::Lambda(lam) => {
                        self.enter()?;
                        let name = self.name(*id).to_string();
                        let r = self.apply_lambda(&lam, argv, &name);
                        self.leave();
                        r
                    }
                    FnCell::Special(_) => Err(LispError::Type(format!(
                        "cannot apply special form {}",
                        self.name(*id)
                    ))),
                    FnCell::Empty => Err(LispError::Undefined(self.name(*id).to_string())),
                }
            }
            SExpr::Pair(p) if p.car.as_sym() == Some(self.s.lambda) => {
                self.enter()?;
                let r = self.apply_lambda(f, argv, "LAMBDA");
                self.leave();
                r
            }
            other => Err(LispError::Type(format!(
                "{} is not a function",
                self.print(other)
            ))),
        }
    }

    pub fn apply_sym(&mut self, id: SymId, argv: &[SExpr]) -> Result<SExpr> {
        self.apply(&SExpr::Sym(id), argv)
    }

    pub fn progn(&mut self, body: &SExpr) -> Result<SExpr> {
        let mut r = SExpr::NIL;
        for form in body.iter() {
            r = self.eval(form)?;
        }
        Ok(r)
    }

    fn eval_special(&mut self, sp: Special, args: &SExpr) -> Result<SExpr> {
        match sp {
            Special::Quote | Special::Function => Ok(args.car().cloned().unwrap_or(SExpr::NIL)),
            Special::Lambda => Ok(SExpr::cons(SExpr::Sym(self.s.lambda), args.clone())),
            Special::Progn => self.progn(args),
            Special::Cond => {
                for clause in args.iter() {
                    let test = clause.car().cloned().unwrap_or(SExpr::NIL);
                    let v = self.eval(&test)?;
                    if !v.is_nil() {
                        let body = clause.cdr().cloned().unwrap_or(SExpr::NIL);
                        return if body.is_nil() { Ok(v) } else { self.progn(&body) };
                    }
                }
                Ok(SExpr::NIL)
            }
            Special::And => {
                let mut r = SExpr::T;
                for a in args.iter() {
                    r = self.eval(a)?;
                    if r.is_nil() {
                        return Ok(r);
                    }
                }
                Ok(r)
            }
            Special::Or => {
                for a in args.iter() {
                    let r = self.eval(a)?;
                    if !r.is_nil() {
                        return Ok(r);
                    }
                }
                Ok(SExpr::NIL)
            }
            Special::Setq => {
                let items = args.to_vec();
                if items.len() % 2 != 0 || items.is_empty() {
                    return Err(LispError::Type("SETQ needs variable/value pairs".into()));
                }
                let mut r = SExpr::NIL;
                for pair in items.chunks(2) {
                    let id = match pair[0].as_sym() {
                        Some(id) if id != SymId::NIL && id != SymId::T => id,
                        _ => {
                            return Err(LispError::Type(format!(
                                "cannot assign to {}",
                                self.print(&pair[0])
                            )))
                        }
                    };
                    r = self.eval(&pair[1])?;
                    self.set_value(id, r.clone());
                }
                Ok(r)
            }
            Special::Prog => {
                let vars = args.car().cloned().unwrap_or(SExpr::NIL);
                let body: Vec<SExpr> = args.cdr().map(|b| b.to_vec()).unwrap_or_default();
                let mark = self.binding_mark();
                for v in vars.iter() {
                    match v.as_sym() {
                        Some(id) if id != SymId::NIL && id != SymId::T => self.bind(id, SExpr::NIL),
                        _ => {
                            self.unbind_to(mark);
                            return Err(LispError::Type(format!(
                                "bad PROG variable {}",
                                self.print(v)
                            )));
                        }
                    }
                }
                let r = self.run_prog(&body);
                self.unbind_to(mark);
                r
            }
            Special::Go => match args.car().and_then(SExpr::as_sym) {
                Some(label) => Err(LispError::Go {
                    label,
                    name: self.name(label).to_string(),
                }),
                None => Err(LispError::Type("GO needs a label".into())),
            },
            Special::Return => {
                let v = match args.car() {
                    Some(form) => self.eval(form)?,
                    None => SExpr::NIL,
                };
                Err(LispError::Return(v))
            }
            Special::De => {
                let name = args.car().and_then(SExpr::as_sym).ok_or_else(|| {
                    LispError::Type("DE needs a function name".into())
                })?;
                let rest = args.cdr().cloned().unwrap_or(SExpr::NIL);
                let lam = SExpr::cons(SExpr::Sym(self.s.lambda), rest);
                self.set_function(name, FnCell::Lambda(lam));
                Ok(SExpr::Sym(name))
            }
        }
    }

    fn run_prog(&mut self, body: &[SExpr]) -> Result<SExpr> {
        let mut pc = 0;
        while pc < body.len() {
            let stmt = &body[pc];
            pc += 1;
            if stmt.is_atom() {
                continue;
            }
            match self.eval(stmt) {
                Ok(_) => {}
                Err(LispError::Return(v)) => return Ok(v),
                Err(LispError::Go { label, name }) => {
                    match body.iter().position(|x| x.as_sym() == Some(label)) {
                        Some(i) => pc = i + 1,
                        None => return Err(LispError::Go { label, name }),
                    }
                }
                Err(e) => return Err(e),
            }
        }
        Ok(SExpr::NIL)
    }

    /// Evaluates `form`, catching every error. Bindings made inside are
    /// unwound either way.
    pub fn errorset(&mut self, form: &SExpr) -> std::result::Result<SExpr, String> {
        let mark = self.binding_mark();
        let depth = self.depth;
        match self.eval(form) {
            Ok(v) => Ok(v),
            Err(e) => {
                self.unbind_to(mark);
                self.depth = depth;
                Err(e.to_string())
            }
        }
    }

    /// Reads and evaluates every form in `text`, returning the last value.
    pub fn eval_str(&mut self, text: &str) -> Result<SExpr> {
        let mut reader = super::Reader::new(text);
        let mut last = SExpr::NIL;
        while let Some(form) = reader.read(self)? {
            last = self.eval(&form)?;
        }
        Ok(last)
    }

    /// Parses a single datum.
    pub fn read_str(&mut self, text: &str) -> Result<SExpr> {
        let mut reader = super::Reader::new(text);
        reader
            .read(self)?
            .ok_or(LispError::Incomplete)
    }
}
