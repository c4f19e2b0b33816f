//! Recursive-descent parser from tokens to statement trees.

use super::ast::{Block, BlockItem, Expr, ForAction, ForLoop, Mode, ProcKind, RelOp, Stmt};
use super::lexer::{tokenize, Tok, Token};

/// Words that end an expression wherever they appear.
const KEYWORDS: &[&str] = &[
    "IF", "THEN", "ELSE", "FOR", "STEP", "UNTIL", "DO", "SUM", "PRODUCT", "BEGIN", "END", "RETURN",
    "GO", "GOTO", "WRITE", "OR", "AND", "NOT", "NEQ",
];

const UNSUPPORTED: &[&str] = &["MASS", "MSHELL", "VECTOR", "INDEX"];

pub fn is_keyword(name: &str) -> bool {
    KEYWORDS.contains(&name)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
    /// True when the input ended inside the statement.
    pub incomplete: bool,
    /// Byte span of the statement text that was skipped.
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug)]
pub struct ParsedStmt {
    pub stmt: Stmt,
    /// False for `$`-terminated statements.
    pub echo: bool,
    pub line: usize,
    pub start: usize,
    pub end: usize,
}

type PResult<T> = Result<T, ParseError>;

pub struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    pos: usize,
}

impl<'a> Parser<'a> {
    pub fn new(src: &'a str) -> Parser<'a> {
        Parser {
            src,
            toks: tokenize(src),
            pos: 0,
        }
    }

    pub fn source(&self) -> &'a str {
        self.src
    }

    /// Byte offset of the next unread token.
    pub fn offset(&self) -> usize {
        self.peek().start
    }

    fn peek(&self) -> &Token {
        &self.toks[self.pos.min(self.toks.len() - 1)]
    }

    fn peek_at(&self, k: usize) -> &Token {
        &self.toks[(self.pos + k).min(self.toks.len() - 1)]
    }

    fn bump(&mut self) -> Token {
        let t = self.peek().clone();
        if self.pos < self.toks.len() - 1 {
            self.pos += 1;
        }
        t
    }

    fn at_op(&self, op: &str) -> bool {
        self.peek().is_op(op)
    }

    fn at_ident(&self, name: &str) -> bool {
        self.peek().is_ident(name)
    }

    fn eat_op(&mut self, op: &str) -> bool {
        if self.at_op(op) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_ident(&mut self, name: &str) -> bool {
        if self.at_ident(name) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn error_at(&self, tok: &Token, msg: String) -> ParseError {
        ParseError {
            line: tok.line,
            msg,
            incomplete: tok.tok == Tok::Eof,
            start: tok.start,
            end: tok.end,
        }
    }

    fn unexpected(&self, expected: &str) -> ParseError {
        let t = self.peek();
        let msg = match &t.tok {
            Tok::Bad(m) => m.clone(),
            Tok::Op(".") => "the \".\" operator is not supported".to_string(),
            other => format!("syntax error: expected {expected} but found {other}"),
        };
        self.error_at(t, msg)
    }

    fn expect_op(&mut self, op: &str) -> PResult<()> {
        if self.eat_op(op) {
            Ok(())
        } else {
            Err(self.unexpected(&format!("\"{op}\"")))
        }
    }

    fn expect_ident(&mut self, name: &str) -> PResult<()> {
        if self.eat_ident(name) {
            Ok(())
        } else {
            Err(self.unexpected(name))
        }
    }

    fn name(&mut self) -> PResult<String> {
        match &self.peek().tok {
            Tok::Ident(s) if !is_keyword(s) => {
                let s = s.clone();
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn name_list(&mut self) -> PResult<Vec<String>> {
        let mut out = vec![self.name()?];
        while self.eat_op(",") {
            out.push(self.name()?);
        }
        Ok(out)
    }

    fn comma_list(&mut self, mut item: impl FnMut(&mut Self) -> PResult<Expr>) -> PResult<Vec<Expr>> {
        let mut out = vec![item(self)?];
        while self.eat_op(",") {
            out.push(item(self)?);
        }
        Ok(out)
    }

    /// The next statement, or `None` at end of input. After an error the
    /// parser has skipped to the end of the offending statement.
    pub fn next_statement(&mut self) -> Option<Result<ParsedStmt, ParseError>> {
        while self.peek().is_terminator() {
            self.bump();
        }
        let first = self.peek().clone();
        if first.tok == Tok::Eof {
            return None;
        }
        let begin = self.pos;
        let r = self.statement().and_then(|stmt| {
            if matches!(stmt, Stmt::End) && self.peek().tok == Tok::Eof {
                return Ok((stmt, true, self.peek().start));
            }
            let t = self.peek().clone();
            if t.is_terminator() {
                self.bump();
                Ok((stmt, t.is_op(";"), t.end))
            } else {
                Err(self.unexpected("\";\" or \"$\""))
            }
        });
        Some(match r {
            Ok((stmt, echo, end)) => Ok(ParsedStmt {
                stmt,
                echo,
                line: first.line,
                start: first.start,
                end,
            }),
            Err(mut e) => {
                let end = self.recover(begin);
                e.start = first.start;
                e.end = end;
                Err(e)
            }
        })
    }

    // Skips to the terminator that ends the statement starting at token
    // `begin`, balancing BEGIN and END. Returns the byte offset after it.
    fn recover(&mut self, begin: usize) -> usize {
        let failed = self.pos;
        let mut depth = 0i64;
        let mut fallback = None;
        for i in begin..self.toks.len() {
            let t = &self.toks[i];
            if t.is_ident("BEGIN") {
                depth += 1;
            } else if t.is_ident("END") {
                depth -= 1;
            } else if t.is_terminator() && i >= failed {
                fallback.get_or_insert(i);
                if depth <= 0 {
                    self.pos = i + 1;
                    return t.end;
                }
            } else if t.tok == Tok::Eof {
                break;
            }
        }
        match fallback {
            Some(i) => {
                self.pos = i + 1;
                self.toks[i].end
            }
            None => {
                self.pos = self.toks.len() - 1;
                self.src.len()
            }
        }
    }

    fn statement(&mut self) -> PResult<Stmt> {
        let Tok::Ident(head) = self.peek().tok.clone() else {
            return Ok(Stmt::Expr(self.expr()?));
        };
        let next = self.peek_at(1).clone();
        match head.as_str() {
            "END" if next.is_terminator() || next.tok == Tok::Eof => {
                self.bump();
                Ok(Stmt::End)
            }
            "SYMBOLIC" | "LISP" | "ALGEBRAIC" => {
                self.bump();
                let (mode, kind) = if head == "ALGEBRAIC" {
                    (Mode::Algebraic, ProcKind::Algebraic)
                } else {
                    (Mode::Symbolic, ProcKind::Symbolic)
                };
                if self.eat_ident("PROCEDURE") {
                    return self.procedure(kind);
                }
                if self.peek().is_terminator() {
                    return Ok(Stmt::Mode(mode));
                }
                Ok(Stmt::InMode(mode, Box::new(self.statement()?)))
            }
            "INTEGER" | "REAL" | "SCALAR" if next.is_ident("PROCEDURE") => {
                self.bump();
                self.bump();
                let kind = if head == "INTEGER" {
                    ProcKind::Integer
                } else {
                    ProcKind::Algebraic
                };
                self.procedure(kind)
            }
            "PROCEDURE" => {
                self.bump();
                self.procedure(ProcKind::Algebraic)
            }
            "ARRAY" => {
                self.bump();
                let mut specs = Vec::new();
                loop {
                    let name = self.name()?;
                    self.expect_op("(")?;
                    let bounds = self.comma_list(Self::expr)?;
                    self.expect_op(")")?;
                    specs.push((name, bounds));
                    if !self.eat_op(",") {
                        break;
                    }
                }
                Ok(Stmt::Array(specs))
            }
            "OPERATOR" => {
                self.bump();
                Ok(Stmt::Operator(self.name_list()?))
            }
            "MATRIX" => {
                self.bump();
                let mut specs = Vec::new();
                loop {
                    let name = self.name()?;
                    let dims = if self.eat_op("(") {
                        let r = self.expr()?;
                        self.expect_op(",")?;
                        let c = self.expr()?;
                        self.expect_op(")")?;
                        Some((r, c))
                    } else {
                        None
                    };
                    specs.push((name, dims));
                    if !self.eat_op(",") {
                        break;
                    }
                }
                Ok(Stmt::Matrix(specs))
            }
            "LET" => {
                self.bump();
                self.let_rules(Vec::new())
            }
            "CLEAR" => {
                self.bump();
                let items = self.comma_list(Self::sum)?;
                Ok(Stmt::Clear {
                    vars: Vec::new(),
                    items,
                })
            }
            "FOR" if next.is_ident("ALL") => {
                self.bump();
                self.bump();
                let vars = self.name_list()?;
                if self.eat_ident("LET") {
                    self.let_rules(vars)
                } else if self.eat_ident("CLEAR") {
                    let items = self.comma_list(Self::sum)?;
                    Ok(Stmt::Clear { vars, items })
                } else {
                    Err(self.unexpected("LET or CLEAR"))
                }
            }
            "ON" | "OFF" => {
                self.bump();
                Ok(Stmt::Switch {
                    on: head == "ON",
                    names: self.name_list()?,
                })
            }
            "FACTOR" => {
                self.bump();
                Ok(Stmt::Factor(self.name_list()?))
            }
            "REMFAC" => {
                self.bump();
                Ok(Stmt::Remfac(self.name_list()?))
            }
            "ORDER" => {
                self.bump();
                Ok(Stmt::Order(self.comma_list(Self::sum)?))
            }
            "SHOWTIME" if next.is_terminator() || next.tok == Tok::Eof => {
                self.bump();
                Ok(Stmt::Showtime)
            }
            h if UNSUPPORTED.contains(&h) => {
                let t = self.peek().clone();
                Err(self.error_at(
                    &t,
                    format!("unsupported package: {h} belongs to the high-energy physics package"),
                ))
            }
            _ => Ok(Stmt::Expr(self.expr()?)),
        }
    }

    fn procedure(&mut self, kind: ProcKind) -> PResult<Stmt> {
        let name = self.name()?;
        let params = if self.eat_op("(") {
            if self.eat_op(")") {
                Vec::new()
            } else {
                let p = self.name_list()?;
                self.expect_op(")")?;
                p
            }
        } else if matches!(&self.peek().tok, Tok::Ident(s) if !is_keyword(s)) {
            self.name_list()?
        } else {
            Vec::new()
        };
        if !self.peek().is_terminator() {
            return Err(self.unexpected("\";\""));
        }
        self.bump();
        let body = self.expr()?;
        Ok(Stmt::Proc {
            kind,
            name,
            params,
            body,
        })
    }

    fn let_rules(&mut self, vars: Vec<String>) -> PResult<Stmt> {
        let mut rules = Vec::new();
        loop {
            let lhs = self.sum()?;
            self.expect_op("=")?;
            let rhs = self.sum()?;
            rules.push((lhs, rhs));
            if !self.eat_op(",") {
                break;
            }
        }
        Ok(Stmt::Let { vars, rules })
    }

    // ---- expressions -------------------------------------------------

    pub fn expr(&mut self) -> PResult<Expr> {
        let lhs = self.or_expr()?;
        if self.at_op(":=") {
            let t = self.bump();
            let ok = match &lhs {
                Expr::Id(_) => true,
                Expr::App(h, _) => !matches!(
                    h.as_str(),
                    "PLUS" | "TIMES" | "MINUS" | "QUOTIENT" | "EXPT"
                ),
                _ => false,
            };
            if !ok {
                return Err(self.error_at(&t, format!("cannot assign to {lhs}")));
            }
            let rhs = self.expr()?;
            return Ok(Expr::Assign(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn or_expr(&mut self) -> PResult<Expr> {
        let first = self.and_expr()?;
        if !self.at_ident("OR") {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat_ident("OR") {
            items.push(self.and_expr()?);
        }
        Ok(Expr::Or(items))
    }

    fn and_expr(&mut self) -> PResult<Expr> {
        let first = self.not_expr()?;
        if !self.at_ident("AND") {
            return Ok(first);
        }
        let mut items = vec![first];
        while self.eat_ident("AND") {
            items.push(self.not_expr()?);
        }
        Ok(Expr::And(items))
    }

    fn not_expr(&mut self) -> PResult<Expr> {
        if self.eat_ident("NOT") {
            return Ok(Expr::Not(Box::new(self.not_expr()?)));
        }
        self.relation()
    }

    fn relation(&mut self) -> PResult<Expr> {
        let lhs = self.sum()?;
        let op = match &self.peek().tok {
            Tok::Op("=") => RelOp::Eq,
            Tok::Op("<") => RelOp::Lt,
            Tok::Op(">") => RelOp::Gt,
            Tok::Op("<=") => RelOp::Le,
            Tok::Op(">=") => RelOp::Ge,
            Tok::Ident(s) if s == "NEQ" => RelOp::Neq,
            _ => return Ok(lhs),
        };
        self.bump();
        let rhs = self.sum()?;
        Ok(Expr::Rel(op, Box::new(lhs), Box::new(rhs)))
    }

    pub fn sum(&mut self) -> PResult<Expr> {
        let first = if self.eat_op("-") {
            Expr::app("MINUS", vec![self.term()?])
        } else {
            self.eat_op("+");
            self.term()?
        };
        let mut items = vec![first];
        loop {
            if self.eat_op("+") {
                items.push(self.term()?);
            } else if self.eat_op("-") {
                items.push(Expr::app("MINUS", vec![self.term()?]));
            } else {
                break;
            }
        }
        Ok(if items.len() == 1 {
            items.pop().expect("one item")
        } else {
            Expr::app("PLUS", items)
        })
    }

    fn term(&mut self) -> PResult<Expr> {
        fn collapse(mut f: Vec<Expr>) -> Expr {
            if f.len() == 1 {
                f.pop().expect("one factor")
            } else {
                Expr::app("TIMES", f)
            }
        }
        let mut factors = vec![self.unary()?];
        loop {
            if self.eat_op("*") {
                factors.push(self.unary()?);
            } else if self.eat_op("/") {
                let num = collapse(std::mem::take(&mut factors));
                let den = self.unary()?;
                factors.push(Expr::app("QUOTIENT", vec![num, den]));
            } else {
                break;
            }
        }
        Ok(collapse(factors))
    }

    fn unary(&mut self) -> PResult<Expr> {
        if self.eat_op("-") {
            return Ok(Expr::app("MINUS", vec![self.unary()?]));
        }
        if self.eat_op("+") {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> PResult<Expr> {
        let base = self.application()?;
        if self.eat_op("**") || self.eat_op("^") {
            let exp = self.unary()?;
            return Ok(Expr::app("EXPT", vec![base, exp]));
        }
        Ok(base)
    }

    // Whether the next token can begin the operand of `f x` application.
    fn starts_operand(&self, k: usize) -> bool {
        match &self.peek_at(k).tok {
            Tok::Num(_) | Tok::Quote(_) => true,
            Tok::Ident(s) => !is_keyword(s),
            _ => false,
        }
    }

    fn application(&mut self) -> PResult<Expr> {
        if let Tok::Ident(name) = &self.peek().tok {
            if !is_keyword(name) && self.starts_operand(1) {
                let name = name.clone();
                self.bump();
                let arg = self.power()?;
                return Ok(Expr::App(name, vec![arg]));
            }
        }
        self.primary()
    }

    fn primary(&mut self) -> PResult<Expr> {
        let t = self.peek().clone();
        match &t.tok {
            Tok::Num(n) => {
                self.bump();
                Ok(Expr::Num(n.clone()))
            }
            Tok::Str(s) => {
                self.bump();
                Ok(Expr::Str(s.clone()))
            }
            Tok::Quote(s) => {
                self.bump();
                Ok(Expr::Quote(s.clone()))
            }
            Tok::Op("(") => {
                self.bump();
                let e = self.expr()?;
                self.expect_op(")")?;
                Ok(e)
            }
            Tok::Ident(name) => match name.as_str() {
                "IF" => self.if_expr(),
                "FOR" => self.for_expr(),
                "BEGIN" => self.block(),
                "RETURN" => {
                    self.bump();
                    let t = self.peek();
                    if t.is_terminator() || t.is_ident("END") || t.is_ident("ELSE") || t.tok == Tok::Eof {
                        Ok(Expr::Return(None))
                    } else {
                        Ok(Expr::Return(Some(Box::new(self.expr()?))))
                    }
                }
                "GO" | "GOTO" => {
                    self.bump();
                    if name == "GO" {
                        self.eat_ident("TO");
                    }
                    Ok(Expr::Go(self.name()?))
                }
                "WRITE" => {
                    self.bump();
                    Ok(Expr::Write(self.comma_list(Self::expr)?))
                }
                "MAT" if self.peek_at(1).is_op("(") => self.mat(),
                n if is_keyword(n) => Err(self.unexpected("an expression")),
                _ => {
                    let name = name.clone();
                    self.bump();
                    if self.eat_op("(") {
                        let args = if self.at_op(")") {
                            Vec::new()
                        } else {
                            self.comma_list(Self::expr)?
                        };
                        self.expect_op(")")?;
                        Ok(Expr::App(name, args))
                    } else {
                        Ok(Expr::Id(name))
                    }
                }
            },
            _ => Err(self.unexpected("an expression")),
        }
    }

    fn mat(&mut self) -> PResult<Expr> {
        self.bump();
        self.expect_op("(")?;
        let mut rows = Vec::new();
        loop {
            self.expect_op("(")?;
            rows.push(self.comma_list(Self::expr)?);
            self.expect_op(")")?;
            if !self.eat_op(",") {
                break;
            }
        }
        self.expect_op(")")?;
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            let t = self.peek().clone();
            return Err(self.error_at(&t, "matrix rows differ in length".into()));
        }
        Ok(Expr::Mat(rows))
    }

    fn if_expr(&mut self) -> PResult<Expr> {
        self.bump();
        let cond = self.expr()?;
        self.expect_ident("THEN")?;
        let then = self.expr()?;
        let other = if self.eat_ident("ELSE") {
            Some(Box::new(self.expr()?))
        } else {
            None
        };
        Ok(Expr::If(Box::new(cond), Box::new(then), other))
    }

    fn for_expr(&mut self) -> PResult<Expr> {
        self.bump();
        if self.at_ident("ALL") {
            return Err(self.unexpected("a loop variable"));
        }
        let var = self.name()?;
        self.expect_op(":=")?;
        let start = self.expr()?;
        let (step, finish) = if self.eat_ident("STEP") {
            let s = self.expr()?;
            self.expect_ident("UNTIL")?;
            (Some(s), self.expr()?)
        } else {
            self.expect_op(":")?;
            (None, self.expr()?)
        };
        let action = if self.eat_ident("DO") {
            ForAction::Do
        } else if self.eat_ident("SUM") {
            ForAction::Sum
        } else if self.eat_ident("PRODUCT") {
            ForAction::Product
        } else {
            return Err(self.unexpected("DO, SUM or PRODUCT"));
        };
        let body = self.expr()?;
        Ok(Expr::For(Box::new(ForLoop {
            var,
            start,
            step,
            finish,
            action,
            body,
        })))
    }

    fn block(&mut self) -> PResult<Expr> {
        self.bump();
        let mut locals = Vec::new();
        while self.at_ident("SCALAR") || self.at_ident("INTEGER") || self.at_ident("REAL") {
            self.bump();
            locals.extend(self.name_list()?);
            if !self.peek().is_terminator() {
                return Err(self.unexpected("\";\""));
            }
            self.bump();
        }
        let mut items = Vec::new();
        loop {
            while self.peek().is_terminator() {
                self.bump();
            }
            if self.eat_ident("END") {
                break;
            }
            if let Tok::Ident(n) = &self.peek().tok {
                if !is_keyword(n) && self.peek_at(1).is_op(":") {
                    items.push(BlockItem::Label(n.clone()));
                    self.bump();
                    self.bump();
                    continue;
                }
            }
            items.push(BlockItem::Stmt(self.expr()?));
            if !self.peek().is_terminator() && !self.at_ident("END") {
                return Err(self.unexpected("\";\" or END"));
            }
        }
        Ok(Expr::Block(Block { locals, items }))
    }
}

/// Parses a single expression (no terminator needed).
pub fn parse_expr(src: &str) -> Result<Expr, ParseError> {
    let mut p = Parser::new(src);
    let e = p.expr()?;
    p.eat_op(";");
    p.eat_op("$");
    if p.peek().tok != Tok::Eof {
        return Err(p.unexpected("end of expression"));
    }
    Ok(e)
}
