//! Tokenizer for the algebraic source language.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    /// Identifier, upper-cased; `!` escapes are resolved.
    Ident(String),
    /// Unsigned decimal integer.
    Num(String),
    Str(String),
    /// Text of a quoted Lisp datum following `'`.
    Quote(String),
    /// Operator or punctuation, e.g. `:=`, `**`, `(`, `;`.
    Op(&'static str),
    /// A lexical error, reported when the parser reaches it.
    Bad(String),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) | Tok::Num(s) => f.write_str(s),
            Tok::Str(s) => write!(f, "\"{s}\""),
            Tok::Quote(s) => write!(f, "'{s}"),
            Tok::Op(s) => f.write_str(s),
            Tok::Bad(s) => f.write_str(s),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Token {
    pub tok: Tok,
    pub line: usize,
    /// Byte span in the source.
    pub start: usize,
    pub end: usize,
}

impl Token {
    pub fn is_op(&self, op: &str) -> bool {
        matches!(&self.tok, Tok::Op(o) if *o == op)
    }

    pub fn is_ident(&self, name: &str) -> bool {
        matches!(&self.tok, Tok::Ident(s) if s == name)
    }

    pub fn is_terminator(&self) -> bool {
        self.is_op(";") || self.is_op("$")
    }
}

const OPS2: [&str; 4] = [":=", "**", "<=", ">="];
const OPS1: [&str; 15] = [
    "+", "-", "*", "/", "^", "=", "<", ">", "(", ")", ",", ";", "$", ":", ".",
];

/// Splits `src` into tokens. Never fails: problems become [`Tok::Bad`].
pub fn tokenize(src: &str) -> Vec<Token> {
    let mut lx = Lexer {
        src,
        pos: 0,
        line: 1,
        out: Vec::new(),
    };
    lx.run();
    lx.out
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    out: Vec<Token>,
}

impl Lexer<'_> {
    fn peek(&self) -> Option<char> {
        self.src[self.pos..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.src[self.pos..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
        }
        Some(c)
    }

    fn push(&mut self, tok: Tok, start: usize, line: usize) {
        self.out.push(Token {
            tok,
            line,
            start,
            end: self.pos,
        });
    }

    fn run(&mut self) {
        loop {
            self.skip_space();
            let start = self.pos;
            let line = self.line;
            let Some(c) = self.peek() else {
                self.push(Tok::Eof, start, line);
                return;
            };
            if c.is_ascii_alphabetic() || c == '!' || c == '_' {
                let name = self.ident();
                if name == "COMMENT" {
                    self.skip_comment();
                    continue;
                }
                self.push(Tok::Ident(name), start, line);
            } else if c.is_ascii_digit() {
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.bump();
                }
                let text = self.src[start..self.pos].to_string();
                self.push(Tok::Num(text), start, line);
            } else if c == '"' {
                let tok = self.string();
                self.push(tok, start, line);
            } else if c == '\'' {
                self.bump();
                let tok = self.quoted();
                self.push(tok, start, line);
            } else if let Some(op) = self.operator() {
                self.push(Tok::Op(op), start, line);
            } else {
                self.bump();
                self.push(Tok::Bad(format!("illegal character '{c}'")), start, line);
            }
        }
    }

    fn skip_space(&mut self) {
        while let Some(c) = self.peek() {
            if c.is_whitespace() {
                self.bump();
            } else if c == '%' {
                while self.peek().is_some_and(|c| c != '\n') {
                    self.bump();
                }
            } else {
                break;
            }
        }
    }

    fn skip_comment(&mut self) {
        while let Some(c) = self.bump() {
            if c == ';' || c == '$' {
                return;
            }
        }
    }

    fn ident(&mut self) -> String {
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c == '!' {
                self.bump();
                if let Some(e) = self.bump() {
                    name.extend(e.to_uppercase());
                }
            } else if c.is_ascii_alphanumeric() || c == '_' {
                self.bump();
                name.push(c.to_ascii_uppercase());
            } else {
                break;
            }
        }
        name
    }

    fn string(&mut self) -> Tok {
        self.bump();
        let mut s = String::new();
        loop {
            match self.bump() {
                None => return Tok::Bad("unterminated string".into()),
                Some('"') if self.peek() == Some('"') => {
                    self.bump();
                    s.push('"');
                }
                Some('"') => return Tok::Str(s),
                Some(c) => s.push(c),
            }
        }
    }

    // The datum after a quote mark, as raw text for the Lisp reader.
    fn quoted(&mut self) -> Tok {
        self.skip_space();
        let start = self.pos;
        if self.peek() == Some('(') {
            let mut depth = 0usize;
            let mut in_str = false;
            while let Some(c) = self.bump() {
                match c {
                    '"' => in_str = !in_str,
                    '!' if !in_str => {
                        self.bump();
                    }
                    '(' if !in_str => depth += 1,
                    ')' if !in_str => {
                        depth -= 1;
                        if depth == 0 {
                            return Tok::Quote(self.src[start..self.pos].to_string());
                        }
                    }
                    _ => {}
                }
            }
            return Tok::Bad("unbalanced parenthesis in quoted datum".into());
        }
        while let Some(c) = self.peek() {
            if c.is_whitespace() || "();$,".contains(c) {
                break;
            }
            self.bump();
            if c == '!' {
                self.bump();
            }
        }
        if self.pos == start {
            return Tok::Bad("nothing after quote mark".into());
        }
        Tok::Quote(self.src[start..self.pos].to_string())
    }

    fn operator(&mut self) -> Option<&'static str> {
        let c = self.peek()?;
        if let Some(d) = self.peek2() {
            let pair: String = [c, d].iter().collect();
            if let Some(op) = OPS2.iter().find(|o| **o == pair) {
                self.bump();
                self.bump();
                return Some(op);
            }
        }
        let single = OPS1.iter().find(|o| o.starts_with(c))?;
        self.bump();
        Some(single)
    }
}
