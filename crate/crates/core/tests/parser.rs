mod common;

use common::{algebraic_corpus, corpus_text, lines, quiet};
use minireduce::rlisp::ast::{ForAction, ProcKind};
use minireduce::rlisp::lexer::{tokenize, Tok};
use minireduce::rlisp::{parse_expr, parse_program, Expr, Stmt};

fn toks(src: &str) -> Vec<Tok> {
    tokenize(src).into_iter().map(|t| t.tok).collect()
}

fn id(s: &str) -> Tok {
    Tok::Ident(s.to_string())
}

fn num(s: &str) -> Tok {
    Tok::Num(s.to_string())
}

fn only_statement(src: &str) -> Stmt {
    let mut v = parse_program(src);
    assert_eq!(v.len(), 1, "{src}");
    v.pop().unwrap().expect("parses").stmt
}

#[test]
fn tokens_of_a_for_statement() {
    let got = toks("w := for i:=1:10 product i;");
    let want = vec![
        id("W"),
        Tok::Op(":="),
        id("FOR"),
        id("I"),
        Tok::Op(":="),
        num("1"),
        Tok::Op(":"),
        num("10"),
        id("PRODUCT"),
        id("I"),
        Tok::Op(";"),
        Tok::Eof,
    ];
    assert_eq!(got, want);
}

#[test]
fn tokens_of_power_with_dollar() {
    assert_eq!(
        toks("x**2$"),
        vec![id("X"), Tok::Op("**"), num("2"), Tok::Op("$"), Tok::Eof]
    );
}

#[test]
fn comments_run_to_the_first_terminator() {
    let got = toks("COMMENT anything at all; x;");
    assert_eq!(got, vec![id("X"), Tok::Op(";"), Tok::Eof]);
    let got = toks("comment lower case too$ y;");
    assert_eq!(got, vec![id("Y"), Tok::Op(";"), Tok::Eof]);
}

#[test]
fn escaped_characters_join_identifiers() {
    assert_eq!(toks("!*ans"), vec![id("*ANS"), Tok::Eof]);
}

#[test]
fn token_lines_are_counted() {
    let t = tokenize("a;\n\nb;");
    assert_eq!(t[0].line, 1);
    assert_eq!(t[2].line, 3);
}

#[test]
fn integer_procedure_shape() {
    let src = "integer procedure fac n;\n begin integer m;\n m:=1;\n l1: if n=0 then return m;\n m:=m*n; n:=n-1; go to l1 end;";
    match only_statement(src) {
        Stmt::Proc {
            kind,
            name,
            params,
            body,
        } => {
            assert_eq!(kind, ProcKind::Integer);
            assert_eq!(name, "FAC");
            assert_eq!(params, ["N"]);
            assert!(matches!(body, Expr::Block(_)));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn precedence_and_unary_application() {
    let e = parse_expr("z**2+fac(4)-2*fac 2*y").unwrap();
    let z2 = Expr::app("EXPT", vec![Expr::Id("Z".into()), Expr::Num("2".into())]);
    let fac4 = Expr::app("FAC", vec![Expr::Num("4".into())]);
    let fac2 = Expr::app("FAC", vec![Expr::Num("2".into())]);
    let prod = Expr::app("TIMES", vec![Expr::Num("2".into()), fac2, Expr::Id("Y".into())]);
    let want = Expr::app("PLUS", vec![z2, fac4, Expr::app("MINUS", vec![prod])]);
    assert_eq!(e, want);
}

#[test]
fn for_loop_shape() {
    match only_statement("for i:=2 step 2 until 10 sum i;") {
        Stmt::Expr(Expr::For(f)) => {
            assert_eq!(f.var, "I");
            assert_eq!(f.action, ForAction::Sum);
            assert_eq!(f.step, Some(Expr::Num("2".into())));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn empty_ranges() {
    assert_eq!(lines("for i:=1:0 sum i;"), ["0"]);
    assert_eq!(lines("for i:=1:0 product i;"), ["1"]);
    assert_eq!(lines("for i:=5 step -2 until 1 sum i;"), ["9"]);
}

#[test]
fn finish_bound_is_reevaluated_each_iteration() {
    // Start and step are fixed at entry; the finish bound is not.
    let out = lines("n:=5$ for i:=1:n do n:=n-1$ n;");
    assert_eq!(out, ["2"]);
}

#[test]
fn conditional_finish_bound() {
    let out = lines("s:=0$ k:=2$ for l:=k+1:if k=2 then 5 else 3 do s:=s+l$ s;");
    assert_eq!(out, ["12"]);
}

#[test]
fn conditional_expressions() {
    assert_eq!(lines("x:=4$ y:=if x>3 then 1 else 2$ y;"), ["1"]);
    assert_eq!(lines("x:=2$ y:=if x>3 or x=2 then 10 else 20$ y;"), ["10"]);
}

#[test]
fn dollar_suppresses_output() {
    let t = quiet("a:=5$ a;");
    assert_eq!(t.stdout.trim(), "5");
    let t = quiet("a:=5; a$");
    assert_eq!(t.stdout.trim(), "A := 5");
}

#[test]
fn parse_errors_are_localised() {
    let t = quiet("x:=1;\ny:=(2;\nz:=3;\nz;");
    assert_eq!(t.errors, 1);
    assert!(t.stderr.starts_with("***** line 2"), "{}", t.stderr);
    assert!(t.stdout.contains("Z := 3"));
}

#[test]
fn whole_corpus_parses() {
    for (i, r) in parse_program(&algebraic_corpus()).into_iter().enumerate() {
        assert!(r.is_ok(), "statement {i}: {:?}", r.err());
    }
}

#[test]
fn physics_statements_are_diagnosed_and_skipped() {
    let t = quiet(&corpus_text("hep.red"));
    assert!(t.errors > 0);
    assert!(t.stderr.contains("unsupported package: MASS"), "{}", t.stderr);
    assert!(t.stderr.contains("unsupported package: VECTOR"));
    assert!(t.stderr.contains("\".\" operator is not supported"));
    assert!(t.ended);
    assert!(t.stdout.contains("CXN ="));
}

#[test]
fn printed_expressions_reparse_to_the_same_tree() {
    for src in [
        "a*(b+c)**2",
        "-x**2",
        "(a-b)-(c-d)",
        "a/(b*c)",
        "x**(y**2)",
        "f(x,y+1)*g 3",
        "if a=b then c else d",
        "a:=b:=c+1",
        "not a and b or c",
    ] {
        let e = parse_expr(src).unwrap();
        let again = parse_expr(&e.to_string()).unwrap_or_else(|err| panic!("{src}: {err:?}"));
        assert_eq!(e, again, "{src} printed as {e}");
    }
}

#[test]
fn corpus_expressions_reparse() {
    for r in parse_program(&algebraic_corpus()) {
        if let Stmt::Expr(e) = r.unwrap().stmt {
            let again = parse_expr(&e.to_string()).unwrap();
            assert_eq!(e, again);
        }
    }
}
