//! Linear printing. The indenting printer lives in the prelude.

use super::types::{SExpr, SymId};
use super::Interp;

fn looks_numeric(name: &str) -> bool {
    let digits = name.strip_prefix(['-', '+']).unwrap_or(name);
    !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
}

fn needs_escape(c: char) -> bool {
    c.is_whitespace()
        || c.is_ascii_lowercase()
        || matches!(c, '(' | ')' | '[' | ']' | '\'' | '"' | '%' | '!')
}

impl Interp {
    /// Printed form that reads back to an equal value.
    pub fn print(&self, e: &SExpr) -> String {
        let mut s = String::new();
        self.write_expr(&mut s, e, true);
        s
    }

    /// Printed form without escapes or string quotes.
    pub fn princ_string(&self, e: &SExpr) -> String {
        let mut s = String::new();
        self.write_expr(&mut s, e, false);
        s
    }

    pub(crate) fn symbol_text(&self, id: SymId, escape: bool) -> String {
        let name = self.name(id);
        if !escape {
            return name.to_string();
        }
        let mut out = String::with_capacity(name.len());
        if looks_numeric(name) || name == "." || name.is_empty() {
            out.push('!');
        }
        for c in name.chars() {
            if needs_escape(c) {
                out.push('!');
            }
            out.push(c);
        }
        out
    }

    fn write_expr(&self, out: &mut String, e: &SExpr, escape: bool) {
        match e {
            SExpr::Sym(id) => out.push_str(&self.symbol_text(*id, escape)),
            SExpr::Fix(n) => out.push_str(&n.to_string()),
            SExpr::Big(b) => {
                if b.negative {
                    out.push('-');
                }
                out.push_str(&b.magnitude_string());
            }
            SExpr::Str(s) => {
                if escape {
                    out.push('"');
                    out.push_str(&s.replace('"', "\"\""));
                    out.push('"');
                } else {
                    out.push_str(s);
                }
            }
            SExpr::Vector(v) => {
                out.push('[');
                let items = v.lock().unwrap().clone();
                for (i, x) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    self.write_expr(out, x, escape);
                }
                out.push(']');
            }
            SExpr::Pair(_) => {
                out.push('(');
                let mut cur = e;
                let mut first = true;
                while let SExpr::Pair(p) = cur {
                    if !first {
                        out.push(' ');
                    }
                    first = false;
                    self.write_expr(out, &p.car, escape);
                    cur = &p.cdr;
                }
                if !cur.is_nil() {
                    out.push_str(" . ");
                    self.write_expr(out, cur, escape);
                }
                out.push(')');
            }
        }
    }
}
