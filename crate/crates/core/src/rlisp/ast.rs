//! Syntax trees for parsed statements, and a canonical unparser whose
//! output re-parses to the same tree.

use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RelOp {
    Eq,
    Neq,
    Lt,
    Gt,
    Le,
    Ge,
}

impl RelOp {
    pub fn text(self) -> &'static str {
        match self {
            RelOp::Eq => "=",
            RelOp::Neq => "neq",
            RelOp::Lt => "<",
            RelOp::Gt => ">",
            RelOp::Le => "<=",
            RelOp::Ge => ">=",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ForAction {
    Do,
    Sum,
    Product,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForLoop {
    pub var: String,
    pub start: Expr,
    pub step: Option<Expr>,
    pub finish: Expr,
    pub action: ForAction,
    pub body: Expr,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BlockItem {
    Label(String),
    Stmt(Expr),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub locals: Vec<String>,
    pub items: Vec<BlockItem>,
}

/// An expression or executable statement. Arithmetic uses the prefix
/// operator names PLUS, TIMES, MINUS, QUOTIENT and EXPT.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Num(String),
    Str(String),
    Id(String),
    Quote(String),
    App(String, Vec<Expr>),
    Mat(Vec<Vec<Expr>>),
    Rel(RelOp, Box<Expr>, Box<Expr>),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
    Assign(Box<Expr>, Box<Expr>),
    If(Box<Expr>, Box<Expr>, Option<Box<Expr>>),
    For(Box<ForLoop>),
    Block(Block),
    Go(String),
    Return(Option<Box<Expr>>),
    Write(Vec<Expr>),
}

impl Expr {
    pub fn app(head: &str, args: Vec<Expr>) -> Expr {
        Expr::App(head.to_string(), args)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProcKind {
    Algebraic,
    Integer,
    Symbolic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Algebraic,
    Symbolic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    Expr(Expr),
    Proc {
        kind: ProcKind,
        name: String,
        params: Vec<String>,
        body: Expr,
    },
    Array(Vec<(String, Vec<Expr>)>),
    Operator(Vec<String>),
    Matrix(Vec<(String, Option<(Expr, Expr)>)>),
    Let {
        vars: Vec<String>,
        rules: Vec<(Expr, Expr)>,
    },
    Clear {
        vars: Vec<String>,
        items: Vec<Expr>,
    },
    Switch {
        on: bool,
        names: Vec<String>,
    },
    Factor(Vec<String>),
    Remfac(Vec<String>),
    Order(Vec<Expr>),
    Showtime,
    /// A bare `SYMBOLIC` or `ALGEBRAIC` switching the default mode.
    Mode(Mode),
    /// A statement evaluated in the given mode only.
    InMode(Mode, Box<Stmt>),
    End,
}

// Binding strengths for the unparser, loosest first.
const L_ASSIGN: u8 = 0;
const L_OR: u8 = 1;
const L_AND: u8 = 2;
const L_NOT: u8 = 3;
const L_REL: u8 = 4;
const L_SUM: u8 = 5;
const L_PROD: u8 = 6;
const L_UNARY: u8 = 7;
const L_POW: u8 = 8;
const L_ATOM: u8 = 9;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Num(_) | Expr::Str(_) | Expr::Id(_) | Expr::Quote(_) | Expr::Mat(_) => L_ATOM,
        Expr::App(h, args) => match (h.as_str(), args.len()) {
            ("PLUS", _) => L_SUM,
            ("TIMES", _) | ("QUOTIENT", 2) => L_PROD,
            // -a*b parses as a negated product, so only a minus applied to
            // a power or atom binds like a unary operator.
            ("MINUS", 1) if level(&args[0]) >= L_UNARY => L_UNARY,
            ("MINUS", 1) => L_SUM,
            ("EXPT", 2) => L_POW,
            _ => L_ATOM,
        },
        Expr::Rel(..) => L_REL,
        Expr::Not(_) => L_NOT,
        Expr::And(_) => L_AND,
        Expr::Or(_) => L_OR,
        _ => L_ASSIGN,
    }
}

struct Wrapped<'a>(&'a Expr, u8);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if level(self.0) < self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

fn join(f: &mut fmt::Formatter<'_>, items: &[Expr], sep: &str, min: u8) -> fmt::Result {
    for (i, x) in items.iter().enumerate() {
        if i > 0 {
            f.write_str(sep)?;
        }
        write!(f, "{}", Wrapped(x, min))?;
    }
    Ok(())
}

fn escape_ident(s: &str) -> String {
    let mut out = String::new();
    for (i, c) in s.chars().enumerate() {
        let plain = c.is_ascii_uppercase() || c == '_' || (i > 0 && c.is_ascii_digit());
        if !plain {
            out.push('!');
        }
        out.push(c);
    }
    out
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Num(n) => f.write_str(n),
            Expr::Str(s) => write!(f, "\"{}\"", s.replace('"', "\"\"")),
            Expr::Id(s) => f.write_str(&escape_ident(s)),
            Expr::Quote(s) => write!(f, "'{s}"),
            Expr::App(h, args) => match (h.as_str(), args.as_slice()) {
                ("PLUS", [first, rest @ ..]) => {
                    write!(f, "{}", Wrapped(first, L_PROD))?;
                    for x in rest {
                        match x {
                            Expr::App(m, a) if m == "MINUS" && a.len() == 1 => {
                                write!(f, " - {}", Wrapped(&a[0], L_PROD))?
                            }
                            _ => write!(f, " + {}", Wrapped(x, L_PROD))?,
                        }
                    }
                    Ok(())
                }
                ("TIMES", _) => join(f, args, "*", L_POW),
                ("QUOTIENT", [a, b]) => {
                    // A leading minus would otherwise capture the quotient.
                    let min = if level(a) == L_UNARY { L_POW } else { L_PROD };
                    write!(f, "{}/{}", Wrapped(a, min), Wrapped(b, L_UNARY))
                }
                ("MINUS", [a]) => write!(f, "-{}", Wrapped(a, L_PROD)),
                ("EXPT", [a, b]) => write!(f, "{}**{}", Wrapped(a, L_ATOM), Wrapped(b, L_UNARY)),
                _ => {
                    write!(f, "{}(", escape_ident(h))?;
                    join(f, args, ",", L_ASSIGN)?;
                    f.write_str(")")
                }
            },
            Expr::Mat(rows) => {
                f.write_str("mat(")?;
                for (i, r) in rows.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    f.write_str("(")?;
                    join(f, r, ",", L_ASSIGN)?;
                    f.write_str(")")?;
                }
                f.write_str(")")
            }
            Expr::Rel(op, a, b) => write!(
                f,
                "{} {} {}",
                Wrapped(a, L_SUM),
                op.text(),
                Wrapped(b, L_SUM)
            ),
            Expr::Not(a) => write!(f, "not {}", Wrapped(a, L_NOT)),
            Expr::And(xs) => join(f, xs, " and ", L_NOT),
            Expr::Or(xs) => join(f, xs, " or ", L_AND),
            Expr::Assign(t, v) => write!(f, "{} := {}", Wrapped(t, L_ATOM), v),
            Expr::If(c, a, b) => {
                write!(f, "if {c} then {}", Wrapped(a, L_OR))?;
                if let Some(b) = b {
                    write!(f, " else {b}")?;
                }
                Ok(())
            }
            Expr::For(fl) => {
                write!(f, "for {} := {}", escape_ident(&fl.var), Wrapped(&fl.start, L_OR))?;
                match &fl.step {
                    Some(s) => write!(
                        f,
                        " step {} until {}",
                        Wrapped(s, L_OR),
                        Wrapped(&fl.finish, L_OR)
                    )?,
                    None => write!(f, " : {}", Wrapped(&fl.finish, L_OR))?,
                }
                let kw = match fl.action {
                    ForAction::Do => "do",
                    ForAction::Sum => "sum",
                    ForAction::Product => "product",
                };
                write!(f, " {kw} {}", fl.body)
            }
            Expr::Block(b) => {
                f.write_str("begin ")?;
                if !b.locals.is_empty() {
                    let names: Vec<String> = b.locals.iter().map(|s| escape_ident(s)).collect();
                    write!(f, "scalar {}; ", names.join(","))?;
                }
                for (i, it) in b.items.iter().enumerate() {
                    if i > 0 {
                        f.write_str("; ")?;
                    }
                    match it {
                        BlockItem::Label(l) => write!(f, "{}: ", escape_ident(l))?,
                        BlockItem::Stmt(s) => write!(f, "{s}")?,
                    }
                }
                f.write_str(" end")
            }
            Expr::Go(l) => write!(f, "go to {}", escape_ident(l)),
            Expr::Return(None) => f.write_str("return"),
            Expr::Return(Some(e)) => write!(f, "return {e}"),
            Expr::Write(items) => {
                f.write_str("write ")?;
                join(f, items, ",", L_ASSIGN)
            }
        }
    }
}
