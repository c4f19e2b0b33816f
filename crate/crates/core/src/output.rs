//! Linear algebraic output: FACTOR grouping, the LIST, DIV and NERO
//! switches, line wrapping, WRITE and SHOWTIME.

use std::time::Instant;

use crate::algebra::{KernelId, Monomial, Sf, Sq};
use crate::error::{alg_err, Result};
use crate::lisp::{Arity, Interp, SExpr, SymId};

pub const DEFAULT_WIDTH: usize = 80;
pub const MIN_WIDTH: usize = 16;

pub struct OutputState {
    pub factors: Vec<SymId>,
    pub width: usize,
    pub anchor: Instant,
}

impl Default for OutputState {
    fn default() -> OutputState {
        OutputState {
            factors: Vec::new(),
            width: DEFAULT_WIDTH,
            anchor: Instant::now(),
        }
    }
}

/// One signed top-level term of an expression being printed.
struct OTerm {
    neg: bool,
    body: String,
}

// Binding strength of a printed prefix form.
const P_SUM: u8 = 0;
const P_PROD: u8 = 1;
const P_POW: u8 = 3;
const P_ATOM: u8 = 4;

pub(crate) fn install(i: &mut Interp) {
    use Arity::*;
    i.def_builtin("AWRITE", AtLeast(0), |i, a| {
        i.awrite(a)?;
        Ok(SExpr::NIL)
    });
    i.def_builtin("SHOWTIME", Exact(0), |i, _| {
        let line = i.showtime();
        i.emit(&line);
        i.emit("\n\n");
        Ok(SExpr::NIL)
    });
    i.def_builtin("FACTOR", AtLeast(0), |i, a| {
        for x in a {
            match x.as_sym() {
                Some(id) if !i.fmt.factors.contains(&id) => i.fmt.factors.push(id),
                Some(_) => {}
                None => return alg_err(format!("{} is not a name", i.print(x))),
            }
        }
        Ok(SExpr::NIL)
    });
    i.def_builtin("REMFAC", AtLeast(0), |i, a| {
        for x in a {
            if let Some(id) = x.as_sym() {
                i.fmt.factors.retain(|f| *f != id);
            }
        }
        Ok(SExpr::NIL)
    });
}

impl Interp {
    pub fn set_width(&mut self, width: usize) {
        self.fmt.width = width.max(MIN_WIDTH);
    }

    pub fn width(&self) -> usize {
        self.fmt.width
    }

    /// "TIME: n MS" since the previous call (or session start).
    pub fn showtime(&mut self) -> String {
        let now = Instant::now();
        let ms = now.duration_since(self.fmt.anchor).as_millis();
        self.fmt.anchor = now;
        format!("TIME: {ms} MS")
    }

    /// Linear text of a prefix form, with minimal parentheses.
    pub fn prefix_text(&self, e: &SExpr) -> String {
        self.pp(e).0
    }

    fn paren(&self, e: &SExpr, min: u8) -> String {
        let (t, p) = self.pp(e);
        if p < min {
            format!("({t})")
        } else {
            t
        }
    }

    fn pp(&self, e: &SExpr) -> (String, u8) {
        match e {
            SExpr::Fix(n) if *n < 0 => (n.to_string(), P_SUM),
            SExpr::Big(b) if b.negative => (self.print(e), P_SUM),
            SExpr::Sym(id) => (self.name(*id).to_string(), P_ATOM),
            SExpr::Str(s) => (format!("\"{s}\""), P_ATOM),
            SExpr::Pair(p) => {
                let args = p.cdr.to_vec();
                let h = match p.car.as_sym() {
                    Some(h) => h,
                    None => return (self.print(e), P_ATOM),
                };
                let s = &self.s;
                if h == s.plus && !args.is_empty() {
                    let mut out = self.paren(&args[0], P_SUM);
                    for a in &args[1..] {
                        match a {
                            SExpr::Pair(q) if q.car.as_sym() == Some(s.minus) => {
                                let inner = q.cdr.car().cloned().unwrap_or(SExpr::NIL);
                                out.push_str(" - ");
                                out.push_str(&self.paren(&inner, P_PROD));
                            }
                            SExpr::Fix(n) if *n < 0 => {
                                out.push_str(&format!(" - {}", -(*n as i128)));
                            }
                            _ => {
                                out.push_str(" + ");
                                out.push_str(&self.paren(a, P_PROD));
                            }
                        }
                    }
                    return (out, P_SUM);
                }
                if h == s.difference && args.len() == 2 {
                    let out = format!(
                        "{} - {}",
                        self.paren(&args[0], P_SUM),
                        self.paren(&args[1], P_PROD)
                    );
                    return (out, P_SUM);
                }
                if h == s.minus && args.len() == 1 {
                    return (format!("-{}", self.paren(&args[0], P_PROD)), P_SUM);
                }
                if h == s.times && !args.is_empty() {
                    let parts: Vec<String> = args.iter().map(|a| self.paren(a, P_PROD)).collect();
                    return (parts.join("*"), P_PROD);
                }
                if h == s.quotient && args.len() == 2 {
                    let out = format!(
                        "{}/{}",
                        self.paren(&args[0], P_PROD),
                        self.paren(&args[1], P_POW)
                    );
                    return (out, P_PROD);
                }
                if h == s.expt && args.len() == 2 {
                    let out = format!(
                        "{}**{}",
                        self.paren(&args[0], P_ATOM),
                        self.paren(&args[1], P_ATOM)
                    );
                    return (out, P_POW);
                }
                if h == s.mat {
                    let rows: Vec<String> = args
                        .iter()
                        .map(|r| {
                            let items: Vec<String> = r.iter().map(|x| self.prefix_text(x)).collect();
                            format!("({})", items.join(","))
                        })
                        .collect();
                    return (format!("MAT({})", rows.join(",")), P_ATOM);
                }
                let items: Vec<String> = args.iter().map(|a| self.prefix_text(a)).collect();
                (format!("{}({})", self.name(h), items.join(",")), P_ATOM)
            }
            _ => (self.print(e), P_ATOM),
        }
    }

    fn kernel_text(&self, k: KernelId, deg: u32) -> String {
        let form = self.alg.kernels.form(k);
        if deg == 1 {
            self.paren(form, P_PROD)
        } else {
            format!("{}**{}", self.paren(form, P_ATOM), deg)
        }
    }

    // Text of |m|, and whether m is negative.
    fn monomial_text(&mut self, m: &Monomial) -> Result<(bool, String)> {
        let neg = m.coeff.is_negative();
        let c = self.int_abs(&m.coeff)?;
        let mut parts = Vec::new();
        if !c.is_one() || m.powers.is_empty() {
            parts.push(self.print(c.as_sexpr()));
        }
        for (k, d) in &m.powers {
            parts.push(self.kernel_text(*k, *d));
        }
        Ok((neg, parts.join("*")))
    }

    fn sf_terms(&mut self, f: &Sf) -> Result<Vec<OTerm>> {
        let monos = self.monomials(f);
        let mut out = Vec::with_capacity(monos.len());
        for m in &monos {
            let (neg, body) = self.monomial_text(m)?;
            out.push(OTerm { neg, body });
        }
        if out.is_empty() {
            out.push(OTerm {
                neg: false,
                body: "0".into(),
            });
        }
        Ok(out)
    }

    fn join_terms(terms: &[OTerm]) -> String {
        let mut s = String::new();
        for (i, t) in terms.iter().enumerate() {
            match (i, t.neg) {
                (0, false) => {}
                (0, true) => s.push('-'),
                (_, false) => s.push_str(" + "),
                (_, true) => s.push_str(" - "),
            }
            s.push_str(&t.body);
        }
        s
    }

    fn den_text(&mut self, den: &Sf) -> Result<String> {
        let monos = self.monomials(den);
        if monos.len() == 1 {
            let m = &monos[0];
            if m.powers.is_empty() || (m.coeff.is_one() && m.powers.len() == 1) {
                return Ok(self.monomial_text(m)?.1);
            }
            return Ok(format!("({})", self.monomial_text(m)?.1));
        }
        let terms = self.sf_terms(den)?;
        Ok(format!("({})", Self::join_terms(&terms)))
    }

    fn quotient_term(&mut self, q: &Sq) -> Result<OTerm> {
        let monos = self.monomials(&q.num);
        let (neg, mut body) = if monos.len() == 1 {
            self.monomial_text(&monos[0])?
        } else {
            let terms = self.sf_terms(&q.num)?;
            (false, format!("({})", Self::join_terms(&terms)))
        };
        if !q.den.is_one() {
            body.push('/');
            body.push_str(&self.den_text(&q.den)?);
        }
        Ok(OTerm { neg, body })
    }

    fn is_factored(&self, k: KernelId) -> bool {
        if self.fmt.factors.is_empty() {
            return false;
        }
        let form = self.alg.kernels.form(k);
        let head = match form {
            SExpr::Sym(id) => Some(*id),
            SExpr::Pair(p) => p.car.as_sym(),
            _ => None,
        };
        head.is_some_and(|h| self.fmt.factors.contains(&h))
    }

    fn sq_terms(&mut self, sq: &Sq) -> Result<Vec<OTerm>> {
        if sq.is_zero() {
            return Ok(vec![OTerm {
                neg: false,
                body: "0".into(),
            }]);
        }
        let monos = self.monomials(&sq.num);
        let mut kernels = Vec::new();
        sq.num.kernels(&mut kernels);
        if kernels.iter().any(|k| self.is_factored(*k)) {
            return self.factored_terms(&monos, &sq.den);
        }
        if sq.den.is_one() {
            return self.sf_terms(&sq.num);
        }
        if self.alg.switches.div {
            let mut out = Vec::new();
            for m in &monos {
                let f = self.monomial_sf(m)?;
                let q = self.mk_sq(f, sq.den.clone())?;
                out.push(self.quotient_term(&q)?);
            }
            return Ok(out);
        }
        Ok(vec![self.quotient_term(sq)?])
    }

    fn factored_terms(&mut self, monos: &[Monomial], den: &Sf) -> Result<Vec<OTerm>> {
        let mut groups: Vec<(Vec<(KernelId, u32)>, Vec<Monomial>)> = Vec::new();
        for m in monos {
            let (head, rest): (Vec<_>, Vec<_>) =
                m.powers.iter().partition(|(k, _)| self.is_factored(*k));
            let rest_m = Monomial {
                coeff: m.coeff.clone(),
                powers: rest,
            };
            match groups.iter_mut().find(|(h, _)| *h == head) {
                Some(g) => g.1.push(rest_m),
                None => groups.push((head, vec![rest_m])),
            }
        }
        // Terms free of factored kernels go last.
        groups.sort_by_key(|(h, _)| h.is_empty());
        let mut out = Vec::new();
        for (head, members) in groups {
            let mut f = Sf::zero();
            for m in &members {
                let t = self.monomial_sf(m)?;
                f = self.addf(&f, &t)?;
            }
            let q = self.mk_sq(f, den.clone())?;
            if head.is_empty() {
                let sub = if q.den.is_one() || self.alg.switches.div {
                    let mut v = Vec::new();
                    for m in self.monomials(&q.num) {
                        let f = self.monomial_sf(&m)?;
                        let mq = self.mk_sq(f, q.den.clone())?;
                        v.push(self.quotient_term(&mq)?);
                    }
                    v
                } else {
                    vec![self.quotient_term(&q)?]
                };
                out.extend(sub);
                continue;
            }
            let head_text: Vec<String> = head.iter().map(|(k, d)| self.kernel_text(*k, *d)).collect();
            let head_text = head_text.join("*");
            let qmonos = self.monomials(&q.num);
            if qmonos.len() == 1 {
                let (neg, mt) = self.monomial_text(&qmonos[0])?;
                // Numeric coefficient, then the factored kernels, then the rest.
                let (num, rest) = match mt.split_once('*') {
                    Some((n, r)) if n.bytes().all(|b| b.is_ascii_digit()) => (Some(n), Some(r)),
                    _ if mt.bytes().all(|b| b.is_ascii_digit()) => (Some(mt.as_str()), None),
                    _ => (None, Some(mt.as_str())),
                };
                let mut body = String::new();
                if let Some(n) = num.filter(|n| *n != "1") {
                    body.push_str(n);
                    body.push('*');
                }
                body.push_str(&head_text);
                if let Some(r) = rest {
                    body.push('*');
                    body.push_str(r);
                }
                if !q.den.is_one() {
                    body.push('/');
                    body.push_str(&self.den_text(&q.den)?);
                }
                out.push(OTerm { neg, body });
            } else {
                let inner = self.sf_terms(&q.num)?;
                let mut body = format!("{}*({})", head_text, Self::join_terms(&inner));
                if !q.den.is_one() {
                    body.push('/');
                    body.push_str(&self.den_text(&q.den)?);
                }
                out.push(OTerm { neg: false, body });
            }
        }
        Ok(out)
    }

    /// Formats a quotient starting at column `col`, honouring LIST and
    /// wrapping at the line width.
    pub fn format_sq(&mut self, sq: &Sq, col: usize) -> Result<String> {
        let terms = self.sq_terms(sq)?;
        if self.alg.switches.list && terms.len() > 1 {
            let mut lines = Vec::new();
            for (i, t) in terms.iter().enumerate() {
                let sign = match (i, t.neg) {
                    (0, false) => "",
                    (0, true) => "-",
                    (_, false) => "+ ",
                    (_, true) => "- ",
                };
                let start = if i == 0 { col } else { 0 };
                lines.push(self.wrap(&format!("{sign}{}", t.body), start));
            }
            return Ok(lines.join("\n"));
        }
        Ok(self.wrap(&Self::join_terms(&terms), col))
    }

    /// Breaks a line before " + " or " - " so no line exceeds the width
    /// where that is possible. A term too long on its own is split after a
    /// "*", with the rest indented by one space. Function arguments are
    /// never split.
    pub fn wrap(&self, text: &str, col: usize) -> String {
        let width = self.fmt.width;
        let bytes = text.as_bytes();
        // (position, is_sum): a sum break replaces the space at position,
        // a product break goes just after the "*" at position.
        let mut cands: Vec<(usize, bool)> = Vec::new();
        let mut parens: Vec<bool> = Vec::new();
        for i in 0..bytes.len() {
            match bytes[i] {
                b'(' => {
                    let call = i > 0 && (bytes[i - 1].is_ascii_alphanumeric() || bytes[i - 1] == b'!');
                    parens.push(call);
                }
                b')' => {
                    parens.pop();
                }
                _ if parens.iter().any(|c| *c) => {}
                b' ' if i + 2 < bytes.len()
                    && (bytes[i + 1] == b'+' || bytes[i + 1] == b'-')
                    && bytes[i + 2] == b' ' =>
                {
                    cands.push((i, true))
                }
                b'*' if i + 1 < bytes.len() && bytes[i + 1] != b'*' && i > 0 && bytes[i - 1] != b'*' => {
                    cands.push((i + 1, false))
                }
                _ => {}
            }
        }
        let mut out = String::with_capacity(text.len() + 8);
        let mut start = 0;
        let mut used = col;
        let mut next = 0;
        while text.len() - start + used > width {
            while next < cands.len() && cands[next].0 <= start {
                next += 1;
            }
            let fits = |c: &&(usize, bool)| c.0 - start + used <= width;
            let window = &cands[next..];
            let pick = window
                .iter()
                .take_while(fits)
                .filter(|c| c.1)
                .last()
                .or_else(|| window.iter().take_while(fits).last())
                .or_else(|| window.first());
            let Some(&(pos, sum)) = pick else { break };
            out.push_str(&text[start..pos]);
            if sum {
                out.push('\n');
                start = pos + 1;
                used = 0;
            } else {
                out.push_str("\n ");
                start = pos;
                used = 1;
            }
        }
        out.push_str(&text[start..]);
        out
    }

    /// Text for a value returned by an algebraic statement.
    pub fn format_value(&mut self, v: &SExpr) -> Result<String> {
        if let Some(rows) = self.matrix_rows(v) {
            return self.format_matrix("MAT", &rows);
        }
        let sq = self.simp(v)?;
        self.format_sq(&sq, 0)
    }

    fn matrix_rows(&self, v: &SExpr) -> Option<Vec<Vec<SExpr>>> {
        match v {
            SExpr::Pair(p) if p.car.as_sym() == Some(self.s.mat) => {
                Some(p.cdr.iter().map(SExpr::to_vec).collect())
            }
            _ => None,
        }
    }

    fn format_matrix(&mut self, name: &str, rows: &[Vec<SExpr>]) -> Result<String> {
        let mut lines = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                let sq = self.simp(x)?;
                if sq.is_zero() && self.alg.switches.nero {
                    continue;
                }
                let lhs = format!("{}({},{}) := ", name, i + 1, j + 1);
                let rhs = self.format_sq(&sq, lhs.len())?;
                lines.push(format!("{lhs}{rhs}"));
            }
        }
        Ok(lines.join("\n\n"))
    }

    /// Text for `target := value`, or `None` when NERO suppresses it.
    pub fn format_assignment(&mut self, target: &SExpr, v: &SExpr) -> Result<Option<String>> {
        if let Some(rows) = self.matrix_rows(v) {
            let name = self.prefix_text(target);
            let text = self.format_matrix(&name, &rows)?;
            return Ok((!text.is_empty()).then_some(text));
        }
        let sq = self.simp(v)?;
        if sq.is_zero() && self.alg.switches.nero {
            return Ok(None);
        }
        let lhs = format!("{} := ", self.prefix_text(target));
        let rhs = self.format_sq(&sq, lhs.len())?;
        Ok(Some(format!("{lhs}{rhs}")))
    }

    /// If `v` is `(*ASSIGN target value)`, its parts.
    pub fn assignment_parts(&self, v: &SExpr) -> Option<(SExpr, SExpr)> {
        match v {
            SExpr::Pair(p) if p.car.as_sym() == Some(self.s.assign) => {
                let items = p.cdr.to_vec();
                match items.as_slice() {
                    [t, val] => Some((t.clone(), val.clone())),
                    _ => None,
                }
            }
            _ => None,
        }
    }

    fn awrite(&mut self, items: &[SExpr]) -> Result<()> {
        let mut line = String::new();
        let start_col = self.column();
        for item in items {
            let col = start_col + line.rsplit('\n').next().map_or(0, str::len);
            match item {
                SExpr::Str(s) => line.push_str(s),
                _ => {
                    if let Some((t, v)) = self.assignment_parts(item) {
                        match self.format_assignment(&t, &v)? {
                            Some(text) => line.push_str(&text),
                            None => return Ok(()),
                        }
                        continue;
                    }
                    if self.is_matrix_expr(item) {
                        let p = self.aeval(item)?;
                        line.push_str(&self.prefix_text(&p));
                        continue;
                    }
                    let sq = self.simp_top(item)?;
                    line.push_str(&self.format_sq(&sq, col)?);
                }
            }
        }
        line.push_str("\n\n");
        self.emit(&line);
        Ok(())
    }
}
