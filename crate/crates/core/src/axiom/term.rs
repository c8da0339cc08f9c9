//! Modal terms over `0 1 + · − f f^∂`, their syntax and evaluation.
//!
//! Grammar (whitespace is insignificant):
//!
//! ```text
//! equation := expr [ ("<=" | "=") expr ]
//! expr     := meet { "+" meet }
//! meet     := unary { ("." | "*") unary }
//! unary    := "-" unary | "f" unary | "fd" unary | atom
//! atom     := "0" | "1" | ident | "(" expr ")" | "(" op unary unary { unary } ")"
//! op       := "+" | "." | "*"
//! ```
//!
//! The last `atom` form is prefix notation, e.g. `(+ x (f y))`; unary
//! operators need no special prefix form since `(f x)` and `(- x)` already parse. Identifiers
//! start with a letter or `_` and continue with letters, digits, `_` or `'`;
//! `f` and `fd` are reserved.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::algebra::ClosureAlgebra;
use crate::bits::Element;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Join(Box<Term>, Box<Term>),
    Meet(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    Closure(Box<Term>),
    Interior(Box<Term>),
}

/// Variable assignment.
pub type Env = BTreeMap<String, Element>;

pub fn var(name: &str) -> Term {
    Term::Var(name.to_string())
}

pub fn join(a: Term, b: Term) -> Term {
    Term::Join(Box::new(a), Box::new(b))
}

pub fn meet(a: Term, b: Term) -> Term {
    Term::Meet(Box::new(a), Box::new(b))
}

pub fn neg(a: Term) -> Term {
    Term::Neg(Box::new(a))
}

pub fn cl(a: Term) -> Term {
    Term::Closure(Box::new(a))
}

pub fn int(a: Term) -> Term {
    Term::Interior(Box::new(a))
}

/// `a ≤ b`, as the term `−a + b` that must equal 1.
pub fn le(a: Term, b: Term) -> Term {
    join(neg(a), b)
}

impl Term {
    pub fn variables(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Zero | Term::One => {}
            Term::Join(a, b) | Term::Meet(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            Term::Neg(a) | Term::Closure(a) | Term::Interior(a) => a.collect_vars(out),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Zero | Term::One => 1,
            Term::Join(a, b) | Term::Meet(a, b) => 1 + a.size() + b.size(),
            Term::Neg(a) | Term::Closure(a) | Term::Interior(a) => 1 + a.size(),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Join(..) => 1,
            Term::Meet(..) => 2,
            _ => 3,
        }
    }
}

/// Evaluates `t` in `a` under `env`.
pub fn eval(t: &Term, a: &ClosureAlgebra, env: &Env) -> Result<Element> {
    Ok(match t {
        Term::Var(v) => *env
            .get(v)
            .ok_or_else(|| Error::UnboundVariable(v.clone()))?,
        Term::Zero => a.bottom(),
        Term::One => a.top(),
        Term::Join(x, y) => eval(x, a, env)? | eval(y, a, env)?,
        Term::Meet(x, y) => eval(x, a, env)? & eval(y, a, env)?,
        Term::Neg(x) => a.complement(eval(x, a, env)?),
        Term::Closure(x) => a.closure(eval(x, a, env)?),
        Term::Interior(x) => a.interior(eval(x, a, env)?),
    })
}

/// Evaluation with variables looked up by position in a pre-resolved slice;
/// used by the exhaustive checkers to avoid map lookups.
pub(crate) fn eval_indexed(t: &Compiled, a: &ClosureAlgebra, vals: &[Element]) -> Element {
    match t {
        Compiled::Var(i) => vals[*i],
        Compiled::Zero => a.bottom(),
        Compiled::One => a.top(),
        Compiled::Join(x, y) => eval_indexed(x, a, vals) | eval_indexed(y, a, vals),
        Compiled::Meet(x, y) => eval_indexed(x, a, vals) & eval_indexed(y, a, vals),
        Compiled::Neg(x) => a.complement(eval_indexed(x, a, vals)),
        Compiled::Closure(x) => a.closure(eval_indexed(x, a, vals)),
        Compiled::Interior(x) => a.interior(eval_indexed(x, a, vals)),
    }
}

pub(crate) enum Compiled {
    Var(usize),
    Zero,
    One,
    Join(Box<Compiled>, Box<Compiled>),
    Meet(Box<Compiled>, Box<Compiled>),
    Neg(Box<Compiled>),
    Closure(Box<Compiled>),
    Interior(Box<Compiled>),
}

impl Compiled {
    pub(crate) fn new(t: &Term, vars: &[String]) -> Compiled {
        let b = |x: &Term| Box::new(Compiled::new(x, vars));
        match t {
            Term::Var(v) => Compiled::Var(vars.iter().position(|w| w == v).expect("collected")),
            Term::Zero => Compiled::Zero,
            Term::One => Compiled::One,
            Term::Join(x, y) => Compiled::Join(b(x), b(y)),
            Term::Meet(x, y) => Compiled::Meet(b(x), b(y)),
            Term::Neg(x) => Compiled::Neg(b(x)),
            Term::Closure(x) => Compiled::Closure(b(x)),
            Term::Interior(x) => Compiled::Interior(b(x)),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |f: &mut fmt::Formatter<'_>, t: &Term, min: u8| {
            if t.precedence() < min {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Zero => f.write_str("0"),
            Term::One => f.write_str("1"),
            Term::Join(a, b) => {
                child(f, a, 1)?;
                f.write_str(" + ")?;
                child(f, b, 2)
            }
            Term::Meet(a, b) => {
                child(f, a, 2)?;
                f.write_str("·")?;
                child(f, b, 3)
            }
            Term::Neg(a) => {
                f.write_str("-")?;
                child(f, a, 3)
            }
            Term::Closure(a) => write!(f, "f({a})"),
            Term::Interior(a) => write!(f, "fd({a})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Zero,
    One,
    Plus,
    Dot,
    Minus,
    F,
    Fd,
    LParen,
    RParen,
    Le,
    Eq,
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    // columns are 1-based and counted in characters
    while i < chars.len() {
        let (_, c) = chars[i];
        let col = i + 1;
        match c {
            c if c.is_whitespace() => {
                i += 1;
                continue;
            }
            '+' => out.push((col, Tok::Plus)),
            '.' | '*' | '·' => out.push((col, Tok::Dot)),
            '-' | '−' => out.push((col, Tok::Minus)),
            '(' => out.push((col, Tok::LParen)),
            ')' => out.push((col, Tok::RParen)),
            '=' => out.push((col, Tok::Eq)),
            '≤' => out.push((col, Tok::Le)),
            '<' => {
                if chars.get(i + 1).map(|p| p.1) == Some('=') {
                    out.push((col, Tok::Le));
                    i += 1;
                } else {
                    return Err(Error::parse(1, col, "expected `<=`"));
                }
            }
            '0' | '1' if !chars.get(i + 1).is_some_and(|p| p.1.is_ascii_digit()) => {
                out.push((col, if c == '0' { Tok::Zero } else { Tok::One }));
            }
            c if c.is_alphabetic() || c == '_' => {
                let start = i;
                while i + 1 < chars.len() {
                    let n = chars[i + 1].1;
                    if n.is_alphanumeric() || n == '_' || n == '\'' || n == '′' {
                        i += 1;
                    } else {
                        break;
                    }
                }
                let word: String = chars[start..=i].iter().map(|p| p.1).collect();
                out.push((
                    col,
                    match word.as_str() {
                        "f" => Tok::F,
                        "fd" => Tok::Fd,
                        _ => Tok::Ident(word),
                    },
                ));
            }
            other => return Err(Error::parse(1, col, format!("unexpected character `{other}`"))),
        }
        i += 1;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
    end_col: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.1)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.0)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|t| t.1.clone());
        self.pos += 1;
        t
    }

    fn expect(&mut self, want: Tok, what: &str) -> Result<()> {
        let col = self.col();
        match self.bump() {
            Some(t) if t == want => Ok(()),
            _ => Err(Error::parse(1, col, format!("expected {what}"))),
        }
    }

    fn expr(&mut self) -> Result<Term> {
        let mut t = self.meet()?;
        while self.peek() == Some(&Tok::Plus) {
            self.bump();
            t = join(t, self.meet()?);
        }
        Ok(t)
    }

    fn meet(&mut self) -> Result<Term> {
        let mut t = self.unary()?;
        while self.peek() == Some(&Tok::Dot) {
            self.bump();
            t = meet(t, self.unary()?);
        }
        Ok(t)
    }

    fn unary(&mut self) -> Result<Term> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                Ok(neg(self.unary()?))
            }
            Some(Tok::F) => {
                self.bump();
                Ok(cl(self.unary()?))
            }
            Some(Tok::Fd) => {
                self.bump();
                Ok(int(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Term> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Zero) => Ok(Term::Zero),
            Some(Tok::One) => Ok(Term::One),
            Some(Tok::Ident(v)) => Ok(Term::Var(v)),
            Some(Tok::LParen) => {
                let t = match self.peek() {
                    // `(- x)` and `(f x)` are already valid infix
                    Some(Tok::Plus) | Some(Tok::Dot) => self.prefix_nary()?,
                    _ => self.expr()?,
                };
                self.expect(Tok::RParen, "`)`")?;
                Ok(t)
            }
            Some(_) => Err(Error::parse(1, col, "expected a term")),
            None => Err(Error::parse(1, col, "unexpected end of input")),
        }
    }

    fn prefix_nary(&mut self) -> Result<Term> {
        let op = self.bump().expect("peeked");
        let mut args = vec![self.prefix_arg()?];
        while !matches!(self.peek(), Some(Tok::RParen) | None) {
            args.push(self.prefix_arg()?);
        }
        if args.len() < 2 {
            return Err(Error::parse(1, self.col(), "prefix operator needs two or more operands"));
        }
        let combine = if op == Tok::Plus { join } else { meet };
        let mut it = args.into_iter();
        let first = it.next().expect("non-empty");
        Ok(it.fold(first, combine))
    }

    /// An operand of a prefix form: a unary chain without infix operators.
    fn prefix_arg(&mut self) -> Result<Term> {
        self.unary()
    }
}

/// Parses a term, or an inequation `s <= t` / equation `s = t` which becomes
/// the term that equals 1 exactly when it holds.
pub fn parse_term(text: &str) -> Result<Term> {
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: text.chars().count() + 1,
    };
    let lhs = p.expr()?;
    let t = match p.peek() {
        Some(Tok::Le) => {
            p.bump();
            le(lhs, p.expr()?)
        }
        Some(Tok::Eq) => {
            p.bump();
            let rhs = p.expr()?;
            if rhs == Term::One {
                lhs
            } else {
                meet(le(lhs.clone(), rhs.clone()), le(rhs, lhs))
            }
        }
        _ => lhs,
    };
    if p.pos < p.toks.len() {
        return Err(Error::parse(1, p.col(), "unexpected trailing input"));
    }
    Ok(t)
}

impl std::str::FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Term> {
        parse_term(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::cm;
    use crate::frame::fork;

    fn env(pairs: &[(&str, Element)]) -> Env {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn evaluates_in_fork() {
        let bf = cm(&fork()).unwrap();
        let v = Element::singleton(1);
        let e = env(&[("x", v)]);
        assert_eq!(eval(&cl(var("x")), &bf, &e).unwrap(), Element::from_indices([0, 1]));
        assert_eq!(eval(&int(cl(var("x"))), &bf, &e).unwrap(), v);
        assert_eq!(eval(&join(var("x"), neg(var("x"))), &bf, &e).unwrap(), bf.top());
        assert_eq!(
            eval(&var("y"), &bf, &e),
            Err(Error::UnboundVariable("y".into()))
        );
    }

    #[test]
    fn parses_infix_and_prefix() {
        let a = parse_term("fd(f(x.f(-x)) + x) <= x").unwrap();
        let b = parse_term("(+ (- (fd (+ (f (. x (f (- x)))) x))) x)").unwrap();
        assert_eq!(a, b);
        assert_eq!(parse_term("x + y . z").unwrap(), join(var("x"), meet(var("y"), var("z"))));
        assert_eq!(parse_term("- x . y").unwrap(), meet(neg(var("x")), var("y")));
        assert_eq!(parse_term("f x'").unwrap(), cl(var("x'")));
        assert_eq!(parse_term("fdx").unwrap(), var("fdx"));
        assert_eq!(parse_term("x = 1").unwrap(), var("x"));
        assert_eq!(parse_term("x0 * 1").unwrap(), meet(var("x0"), Term::One));
    }

    #[test]
    fn parse_errors_have_columns() {
        assert!(matches!(parse_term("x + "), Err(Error::Parse { column: 5, .. })));
        assert!(matches!(parse_term("(x"), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(parse_term("x ? y"), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(parse_term("x y"), Err(Error::Parse { column: 3, .. })));
        assert!(matches!(parse_term("(+ x)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "fd(f(x·f(-x)) + x)",
            "-x·f(x) + f(fd(x))",
            "-(x·y·f(x·-y))",
            "(x + y)·z",
            "x + (y + z)",
            "--x",
            "-(x + 0)·1",
        ] {
            let t = parse_term(s).unwrap();
            assert_eq!(parse_term(&t.to_string()).unwrap(), t, "{s}");
        }
    }
}
