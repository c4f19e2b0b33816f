//! Character stream to S-expressions.

use super::types::SExpr;
use super::Interp;
use crate::error::{LispError, Result};

pub struct Reader<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '[' | ']' | '\'' | '"' | '%')
}

impl<'a> Reader<'a> {
    pub fn new(src: &'a str) -> Reader<'a> {
        Reader { src, pos: 0, line: 1 }
    }

    /// Byte offset of the next unread character.
    pub fn position(&self) -> usize {
        self.pos
    }

    pub fn line(&self) -> usize {
        self.line
    }

    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
        }
        Some(c)
    }

    fn skip_blank(&mut self) {
        while let Some(c) = self.peek() {
            if c == '%' {
                while let Some(c) = self.bump() {
                    if c == '\n' {
                        break;
                    }
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(LispError::Read {
            line: self.line,
            msg: msg.into(),
        })
    }

    /// Reads the next datum, or `None` at end of input.
    pub fn read(&mut self, interp: &mut Interp) -> Result<Option<SExpr>> {
        self.skip_blank();
        if self.peek().is_none() {
            return Ok(None);
        }
        self.datum(interp).map(Some)
    }

    fn datum(&mut self, interp: &mut Interp) -> Result<SExpr> {
        self.skip_blank();
        let c = match self.peek() {
            Some(c) => c,
            None => return Err(LispError::Incomplete),
        };
        match c {
            '(' => {
                self.bump();
                self.list_tail(interp)
            }
            ')' => {
                self.bump();
                self.error("unbalanced )")
            }
            '[' => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_blank();
                    match self.peek() {
                        None => return Err(LispError::Incomplete),
                        Some(']') => {
                            self.bump();
                            break;
                        }
                        Some(')') => {
                            self.bump();
                            return self.error("unbalanced ) inside vector");
                        }
                        Some(_) => items.push(self.datum(interp)?),
                    }
                }
                Ok(SExpr::Vector(std::sync::Arc::new(std::sync::Mutex::new(
                    items,
                ))))
            }
            ']' => {
                self.bump();
                self.error("unbalanced ]")
            }
            '\'' => {
                self.bump();
                let d = self.datum(interp)?;
                Ok(SExpr::list([SExpr::Sym(interp.s.quote), d]))
            }
            '"' => {
                self.bump();
                let mut s = String::new();
                loop {
                    match self.bump() {
                        None => return Err(LispError::Incomplete),
                        Some('"') => {
                            if self.peek() == Some('"') {
                                self.bump();
                                s.push('"');
                            } else {
                                break;
                            }
                        }
                        Some(ch) => s.push(ch),
                    }
                }
                Ok(SExpr::string(&s))
            }
            _ => self.atom(interp),
        }
    }

    fn list_tail(&mut self, interp: &mut Interp) -> Result<SExpr> {
        let mut items = Vec::new();
        let mut tail = SExpr::NIL;
        loop {
            self.skip_blank();
            match self.peek() {
                None => return Err(LispError::Incomplete),
                Some(')') => {
                    self.bump();
                    break;
                }
                Some('.') if self.dot_is_alone() => {
                    self.bump();
                    if items.is_empty() {
                        return self.error("dot at start of list");
                    }
                    tail = self.datum(interp)?;
                    self.skip_blank();
                    match self.bump() {
                        Some(')') => break,
                        None => return Err(LispError::Incomplete),
                        Some(_) => return self.error("expected ) after dotted tail"),
                    }
                }
                Some(_) => items.push(self.datum(interp)?),
            }
        }
        Ok(items
            .into_iter()
            .rev()
            .fold(tail, |acc, x| SExpr::cons(x, acc)))
    }

    fn dot_is_alone(&self) -> bool {
        let mut it = self.src[self.pos..].chars();
        it.next();
        match it.next() {
            None => true,
            Some(c) => is_delimiter(c),
        }
    }

    fn atom(&mut self, interp: &mut Interp) -> Result<SExpr> {
        let mut name = String::new();
        let mut escaped = false;
        while let Some(c) = self.peek() {
            if is_delimiter(c) {
                break;
            }
            self.bump();
            if c == '!' {
                match self.bump() {
                    Some(n) => {
                        name.push(n);
                        escaped = true;
                    }
                    None => return Err(LispError::Incomplete),
                }
            } else {
                name.push(c.to_ascii_uppercase());
            }
        }
        if !escaped {
            if let Some(n) = parse_integer(interp, &name) {
                return Ok(n);
            }
        }
        Ok(interp.sym(&name))
    }
}

/// Parses an optionally signed decimal integer token.
pub(crate) fn parse_integer(interp: &mut Interp, text: &str) -> Option<SExpr> {
    let (negative, digits) = match text.as_bytes().first()? {
        b'-' => (true, &text[1..]),
        b'+' => (false, &text[1..]),
        _ => (false, text),
    };
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    if let Ok(n) = text.trim_start_matches('+').parse::<i64>() {
        return Some(SExpr::Fix(n));
    }
    Some(interp.bignum_from_decimal(negative, digits))
}
