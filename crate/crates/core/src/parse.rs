//! Text syntax for coefficient expressions, operators and noncommutative
//! polynomials.
//!
//! One infix grammar serves all three:
//!
//! ```text
//! expr  := term (("+" | "-") term)*
//! term  := unary (("*" | "/") unary)*
//! unary := "-" unary | power
//! power := atom ("^" exponent)?
//! exponent := "-"? integer | "(" "-"? integer ")"
//! atom  := number | ident | ident "(" expr ")" | "(" expr ")"
//! ```
//!
//! Numbers are integers or decimals (with optional `e` exponent) and are kept
//! as exact rationals. The parse tree is lowered in one of three ways:
//! [`lower_expr`] for coefficients, [`lower_operator`] where `p1..pn` tokens
//! compose left to right, and [`lower_ncpoly`] where `F1..Fr` do not commute.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::expr::{Expr, Func, Rational};
use crate::ncpoly::NCPolynomial;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl Pos {
    pub fn error(self, message: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            column: self.column,
            message: message.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(Rational),
    Ident(String),
    Sym(char),
}

fn lex(text: &str, origin: Pos) -> Result<Vec<(Tok, Pos)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    let (mut line, mut col) = (origin.line, origin.column);
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, column: col };
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '.') {
                i += 1;
            }
            if i < chars.len() && (chars[i] == 'e' || chars[i] == 'E') {
                let mut j = i + 1;
                if j < chars.len() && (chars[j] == '-' || chars[j] == '+') {
                    j += 1;
                }
                if j < chars.len() && chars[j].is_ascii_digit() {
                    i = j;
                    while i < chars.len() && chars[i].is_ascii_digit() {
                        i += 1;
                    }
                }
            }
            let s: String = chars[start..i].iter().collect();
            let r = decimal(&s).ok_or_else(|| pos.error(format!("malformed number '{s}'")))?;
            out.push((Tok::Num(r), pos));
        } else if c.is_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), pos));
        } else if "+-*/^(),".contains(c) {
            i += 1;
            out.push((Tok::Sym(c), pos));
        } else {
            return Err(pos.error(format!("unexpected character '{c}'")));
        }
        col += i - start;
    }
    Ok(out)
}

/// Exact value of a decimal literal such as `12`, `0.25` or `1.5e-3`.
fn decimal(s: &str) -> Option<Rational> {
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (int, frac) = match mantissa.split_once('.') {
        Some((a, b)) => {
            if b.contains('.') {
                return None;
            }
            (a, b)
        }
        None => (mantissa, ""),
    };
    let digits = format!("{int}{frac}");
    if digits.is_empty() {
        return None;
    }
    let n = BigInt::parse_bytes(digits.as_bytes(), 10)?;
    let shift = exp - frac.len() as i64;
    let ten = BigInt::from(10);
    let scale = num_traits::pow(ten, shift.unsigned_abs() as usize);
    let value = if shift >= 0 {
        BigRational::from_integer(n * scale)
    } else {
        BigRational::new(n, scale)
    };
    Some(Rational::new(value))
}

/// Parse tree node.
#[derive(Clone, Debug, PartialEq)]
pub struct Node {
    pub kind: NodeKind,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq)]
pub enum NodeKind {
    Num(Rational),
    Ident(String),
    Call(String, Box<Node>),
    Neg(Box<Node>),
    Add(Box<Node>, Box<Node>),
    Sub(Box<Node>, Box<Node>),
    Mul(Box<Node>, Box<Node>),
    Div(Box<Node>, Box<Node>),
    Pow(Box<Node>, i64),
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    end: Pos,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(t, _)| t)
    }

    fn pos(&self) -> Pos {
        self.toks.get(self.at).map(|(_, p)| *p).unwrap_or(self.end)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.pos().error(format!("expected '{c}'")))
        }
    }

    fn expr(&mut self) -> Result<Node> {
        let mut lhs = self.term()?;
        loop {
            let pos = self.pos();
            let kind = if self.eat('+') {
                NodeKind::Add(Box::new(lhs), Box::new(self.term()?))
            } else if self.eat('-') {
                NodeKind::Sub(Box::new(lhs), Box::new(self.term()?))
            } else {
                return Ok(lhs);
            };
            lhs = Node { kind, pos };
        }
    }

    fn term(&mut self) -> Result<Node> {
        let mut lhs = self.unary()?;
        loop {
            let pos = self.pos();
            let kind = if self.eat('*') {
                NodeKind::Mul(Box::new(lhs), Box::new(self.unary()?))
            } else if self.eat('/') {
                NodeKind::Div(Box::new(lhs), Box::new(self.unary()?))
            } else {
                return Ok(lhs);
            };
            lhs = Node { kind, pos };
        }
    }

    fn unary(&mut self) -> Result<Node> {
        let pos = self.pos();
        if self.eat('-') {
            let inner = self.unary()?;
            return Ok(Node {
                kind: NodeKind::Neg(Box::new(inner)),
                pos,
            });
        }
        self.power()
    }

    fn power(&mut self) -> Result<Node> {
        let base = self.atom()?;
        let pos = self.pos();
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let k = match self.toks.get(self.at) {
            Some((Tok::Num(r), _)) if r.is_integer() => r.to_i64().ok_or_else(|| pos.error("exponent out of range"))?,
            _ => return Err(self.pos().error("exponent must be an integer")),
        };
        self.at += 1;
        if paren {
            self.expect(')')?;
        }
        Ok(Node {
            kind: NodeKind::Pow(Box::new(base), if neg { -k } else { k }),
            pos,
        })
    }

    fn atom(&mut self) -> Result<Node> {
        let pos = self.pos();
        match self.toks.get(self.at).map(|(t, _)| t.clone()) {
            Some(Tok::Num(r)) => {
                self.at += 1;
                Ok(Node {
                    kind: NodeKind::Num(r),
                    pos,
                })
            }
            Some(Tok::Ident(name)) => {
                self.at += 1;
                if self.eat('(') {
                    let arg = self.expr()?;
                    self.expect(')')?;
                    Ok(Node {
                        kind: NodeKind::Call(name, Box::new(arg)),
                        pos,
                    })
                } else {
                    Ok(Node {
                        kind: NodeKind::Ident(name),
                        pos,
                    })
                }
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let inner = self.expr()?;
                self.expect(')')?;
                Ok(inner)
            }
            Some(Tok::Sym(c)) => Err(pos.error(format!("unexpected '{c}'"))),
            None => Err(pos.error("unexpected end of input")),
        }
    }
}

/// Parses `text`, reporting positions relative to `origin` (the position of
/// the first character).
pub fn parse_at(text: &str, origin: Pos) -> Result<Node> {
    let toks = lex(text, origin)?;
    let end = Pos {
        line: origin.line + text.matches('\n').count(),
        column: match text.rfind('\n') {
            Some(k) => text[k + 1..].chars().count() + 1,
            None => origin.column + text.chars().count(),
        },
    };
    let mut p = Parser { toks, at: 0, end };
    let node = p.expr()?;
    if p.at < p.toks.len() {
        return Err(p.pos().error("unexpected trailing input"));
    }
    Ok(node)
}

pub fn parse(text: &str) -> Result<Node> {
    parse_at(text, Pos { line: 1, column: 1 })
}

impl Node {
    fn any(&self, pred: &dyn Fn(&str) -> bool) -> bool {
        match &self.kind {
            NodeKind::Num(_) => false,
            NodeKind::Ident(n) => pred(n),
            NodeKind::Call(_, a) | NodeKind::Neg(a) | NodeKind::Pow(a, _) => a.any(pred),
            NodeKind::Add(a, b) | NodeKind::Sub(a, b) | NodeKind::Mul(a, b) | NodeKind::Div(a, b) => {
                a.any(pred) || b.any(pred)
            }
        }
    }
}

/// `x3`, `p1`, `F2`, `G1` and the like are never free parameters.
fn reserved(name: &str) -> bool {
    name.len() > 1 && name.starts_with(['x', 'p', 'F', 'G']) && name[1..].chars().all(|c| c.is_ascii_digit())
}

fn call(name: &str, arg: Expr, pos: Pos) -> Result<Expr> {
    let f = Func::from_name(name).ok_or_else(|| pos.error(format!("unknown function '{name}'")))?;
    Ok(Expr::func(f, arg))
}

/// Lowers to a coefficient expression; `resolve` maps identifiers to
/// variables or parameters.
pub fn lower_expr(node: &Node, resolve: &dyn Fn(&str) -> Option<Expr>) -> Result<Expr> {
    let go = |n: &Node| lower_expr(n, resolve);
    Ok(match &node.kind {
        NodeKind::Num(r) => Expr::Const(r.clone()),
        NodeKind::Ident(name) => resolve(name).ok_or_else(|| node.pos.error(format!("unknown identifier '{name}'")))?,
        NodeKind::Call(name, a) => call(name, go(a)?, node.pos)?,
        NodeKind::Neg(a) => -go(a)?,
        NodeKind::Add(a, b) => go(a)? + go(b)?,
        NodeKind::Sub(a, b) => go(a)? - go(b)?,
        NodeKind::Mul(a, b) => go(a)? * go(b)?,
        NodeKind::Div(a, b) => go(a)? / go(b)?,
        NodeKind::Pow(a, k) => go(a)?.pow(*k),
    })
}

/// Names visible while lowering operator expressions.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    /// Coordinate names; `x_i` pairs with momentum token `p{i+1}`.
    pub vars: Vec<String>,
    /// Declared parameters; `None` accepts any other identifier as a parameter.
    pub params: Option<Vec<String>>,
    /// Previously defined operators.
    pub ops: BTreeMap<String, DiffOperator>,
}

impl Scope {
    /// Scope with coordinates `x1..xn` and free parameters.
    pub fn standard(dim: usize) -> Scope {
        Scope {
            vars: (1..=dim).map(|i| format!("x{i}")).collect(),
            params: None,
            ops: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.vars.len()
    }

    pub fn momentum(&self, name: &str) -> Option<usize> {
        let k: usize = name.strip_prefix('p')?.parse().ok()?;
        (name == format!("p{k}") && (1..=self.dim()).contains(&k)).then(|| k - 1)
    }

    fn is_param(&self, name: &str) -> bool {
        match &self.params {
            Some(ps) => ps.iter().any(|p| p == name),
            None => Func::from_name(name).is_none() && !reserved(name),
        }
    }

    /// Coordinates and parameters as coefficient expressions.
    pub fn resolve(&self, name: &str) -> Option<Expr> {
        if let Some(i) = self.vars.iter().position(|v| v == name) {
            return Some(Expr::var(i));
        }
        if self.momentum(name).is_some() || self.ops.contains_key(name) {
            return None;
        }
        self.is_param(name).then(|| Expr::param(name))
    }

    fn is_operator_token(&self, name: &str) -> bool {
        self.momentum(name).is_some() || self.ops.contains_key(name)
    }
}

/// Lowers to an operator. Subtrees without momentum tokens or operator names
/// become multiplication operators; `*` composes left to right, and `/`
/// composes on the right with the reciprocal of a coefficient.
pub fn lower_operator(node: &Node, scope: &Scope) -> Result<DiffOperator> {
    let dim = scope.dim();
    if !node.any(&|n| scope.is_operator_token(n)) {
        let e = lower_expr(node, &|n| scope.resolve(n))?;
        return Ok(DiffOperator::coefficient(dim, e));
    }
    let go = |n: &Node| lower_operator(n, scope);
    let coefficient_only = |n: &Node, what: &str| -> Result<Expr> {
        if n.any(&|name| scope.is_operator_token(name)) {
            return Err(n.pos.error(format!("{what} must not contain momenta or operators")));
        }
        lower_expr(n, &|name| scope.resolve(name))
    };
    Ok(match &node.kind {
        NodeKind::Num(_) => unreachable!("numbers are coefficients"),
        NodeKind::Ident(name) => match scope.momentum(name) {
            Some(i) => DiffOperator::momentum(dim, i),
            None => scope.ops[name.as_str()].clone(),
        },
        NodeKind::Call(name, _) => {
            return Err(node
                .pos
                .error(format!("argument of '{name}' must not contain momenta or operators")))
        }
        NodeKind::Neg(a) => go(a)?.scale(&Expr::int(-1)),
        NodeKind::Add(a, b) => go(a)?.try_add(&go(b)?)?,
        NodeKind::Sub(a, b) => go(a)?.try_sub(&go(b)?)?,
        NodeKind::Mul(a, b) => go(a)?.compose(&go(b)?)?,
        NodeKind::Div(a, b) => {
            let d = coefficient_only(b, "divisor")?;
            go(a)?.compose(&DiffOperator::coefficient(dim, d.recip()))?
        }
        NodeKind::Pow(a, k) => {
            if *k < 0 {
                return Err(node.pos.error("negative powers of operators are not defined"));
            }
            go(a)?.pow(*k as u32)
        }
    })
}

/// Lowers to a noncommutative polynomial over letters `F1..Fr` and commuting
/// variables `G1..Gl`. Coordinates are rejected; other identifiers resolve
/// through `params`.
pub fn lower_ncpoly(
    node: &Node,
    g_count: usize,
    f_count: usize,
    params: &dyn Fn(&str) -> Option<Expr>,
) -> Result<NCPolynomial> {
    let letter = |name: &str| -> Option<usize> {
        let k: usize = name.strip_prefix('F')?.parse().ok()?;
        (name == format!("F{k}") && (1..=f_count).contains(&k)).then(|| k - 1)
    };
    let resolve = |name: &str| -> Option<Expr> {
        if let Some(k) = name.strip_prefix('G').and_then(|s| s.parse::<usize>().ok()) {
            if name == format!("G{k}") && (1..=g_count).contains(&k) {
                return Some(Expr::var(k - 1));
            }
        }
        if letter(name).is_some() {
            return None;
        }
        params(name)
    };
    if !node.any(&|n| letter(n).is_some()) {
        let e = lower_expr(node, &resolve)?;
        return Ok(NCPolynomial::scalar(g_count, f_count, e));
    }
    let go = |n: &Node| lower_ncpoly(n, g_count, f_count, params);
    Ok(match &node.kind {
        NodeKind::Num(_) => unreachable!("numbers are scalars"),
        NodeKind::Ident(name) => NCPolynomial::f(g_count, f_count, letter(name).expect("a letter")),
        NodeKind::Call(name, _) => {
            return Err(node
                .pos
                .error(format!("argument of '{name}' must not contain noncommuting letters")))
        }
        NodeKind::Neg(a) => go(a)?.neg(),
        NodeKind::Add(a, b) => go(a)?.try_add(&go(b)?)?,
        NodeKind::Sub(a, b) => go(a)?.try_add(&go(b)?.neg())?,
        NodeKind::Mul(a, b) => go(a)?.try_mul(&go(b)?)?,
        NodeKind::Div(a, b) => {
            if b.any(&|n| letter(n).is_some()) {
                return Err(b.pos.error("divisor must not contain noncommuting letters"));
            }
            let d = lower_expr(b, &resolve)?;
            go(a)?.try_mul(&NCPolynomial::scalar(g_count, f_count, d.recip()))?
        }
        NodeKind::Pow(a, k) => {
            if *k < 0 {
                return Err(node.pos.error("negative powers of letters are not defined"));
            }
            go(a)?.pow(*k as u32)
        }
    })
}

/// Parses a coefficient expression in `x1..xn` with free parameters.
pub fn parse_expr(text: &str, dim: usize) -> Result<Expr> {
    let scope = Scope::standard(dim);
    lower_expr(&parse(text)?, &|n| scope.resolve(n))
}

/// Parses an operator in `x1..xn`, `p1..pn` with free parameters.
pub fn parse_operator(text: &str, dim: usize) -> Result<DiffOperator> {
    lower_operator(&parse(text)?, &Scope::standard(dim))
}

/// Parses a noncommutative polynomial in `F1..Fr`, `G1..Gl` with free parameters.
pub fn parse_ncpoly(text: &str, g_count: usize, f_count: usize) -> Result<NCPolynomial> {
    let params = |n: &str| -> Option<Expr> { (!reserved(n) && Func::from_name(n).is_none()).then(|| Expr::param(n)) };
    lower_ncpoly(&parse(text)?, g_count, f_count, &params)
}

/// Canonical rational for numeric input that must be exact.
pub fn rational_literal(text: &str) -> Option<Rational> {
    let t = text.trim();
    if let Some(rest) = t.strip_prefix('-') {
        return rational_literal(rest).map(|r| -&r);
    }
    match t.split_once('/') {
        Some((a, b)) => {
            let a = decimal(a.trim())?;
            let b = decimal(b.trim())?;
            if b.is_zero() {
                return None;
            }
            Some(Rational::new(a.value() / b.value()))
        }
        None => decimal(t),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diffop::MultiIndex;
    use crate::random;
    use proptest::prelude::*;

    fn x(i: usize) -> Expr {
        Expr::var(i)
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_expr("-x1^2", 1).unwrap().simplify(), (-x(0).pow(2)).simplify());
        assert_eq!(
            parse_expr("1 + 2*x1^3/4", 1).unwrap().simplify(),
            (Expr::one() + Expr::rat(1, 2) * x(0).pow(3)).simplify()
        );
        assert_eq!(parse_expr("x1^(-2)", 1).unwrap(), x(0).pow(-2));
        assert_eq!(parse_expr("x1^-2", 1).unwrap(), x(0).pow(-2));
        assert_eq!(parse_expr("2 - 3 - 4", 0).unwrap().simplify(), Expr::int(-5));
        assert_eq!(parse_expr("1/2/2", 0).unwrap().simplify(), Expr::rat(1, 4));
        assert_eq!(parse_expr("a*sin(x1)", 1).unwrap(), Expr::param("a") * x(0).sin());
    }

    #[test]
    fn decimals_are_exact() {
        assert_eq!(parse_expr("0.25", 0).unwrap(), Expr::rat(1, 4));
        assert_eq!(parse_expr("1.5e-1", 0).unwrap(), Expr::rat(3, 20));
        assert_eq!(parse_expr("2e3", 0).unwrap(), Expr::int(2000));
        assert_eq!(rational_literal("-3/4"), Some(Rational::from_ratio(-3, 4)));
        assert_eq!(rational_literal("1/0"), None);
    }

    #[test]
    fn errors_carry_positions() {
        match parse("x1 + * 2") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 6)),
            other => panic!("{other:?}"),
        }
        match parse_expr("foo(x1)", 1) {
            Err(Error::Parse { message, .. }) => assert!(message.contains("unknown function")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("x1^y"), Err(Error::Parse { .. })));
        assert!(matches!(parse("(x1"), Err(Error::Parse { .. })));
        assert!(matches!(parse("x1 $"), Err(Error::Parse { line: 1, column: 4, .. })));
        assert!(matches!(parse_expr("x3", 2), Err(Error::Parse { .. })));
        let origin = Pos { line: 7, column: 10 };
        assert!(matches!(
            parse_at("x1 )", origin),
            Err(Error::Parse {
                line: 7,
                column: 13,
                ..
            })
        ));
    }

    #[test]
    fn operator_lowering() {
        // p1*x1 composes to x1 p1 + 1
        let a = parse_operator("p1*x1", 1).unwrap();
        assert_eq!(a.to_string(), "x1*p1 + 1");
        let b = parse_operator("x1*p1", 1).unwrap();
        assert_eq!(b.to_string(), "x1*p1");
        let c = parse_operator("p1/x1", 1).unwrap();
        assert_eq!(
            c,
            DiffOperator::from_terms(
                1,
                [
                    (MultiIndex::new(vec![1]), x(0).recip()),
                    (MultiIndex::new(vec![0]), -x(0).pow(-2)),
                ]
            )
        );
        let h = parse_operator("1/2*(p1^2+p2^2) - a/sqrt(x1^2+x2^2)", 2).unwrap();
        assert_eq!(h.order(), Some(2));
        assert!(matches!(parse_operator("sin(p1)", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("x1/p1", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("p1^(-1)", 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_operator("p2", 1), Err(Error::Parse { .. })));
    }

    #[test]
    fn operator_names_in_scope() {
        let mut scope = Scope::standard(1);
        scope.params = Some(vec![]);
        scope.ops.insert("A".into(), parse_operator("p1 + x1", 1).unwrap());
        let sq = lower_operator(&parse("A*A").unwrap(), &scope).unwrap();
        assert_eq!(sq, scope.ops["A"].pow(2));
        assert!(matches!(
            lower_operator(&parse("B*A").unwrap(), &scope),
            Err(Error::Parse { ref message, .. }) if message.contains("unknown identifier")
        ));
    }

    #[test]
    fn ncpoly_lowering() {
        let s = parse_ncpoly("F1*F2 - F2*F1", 0, 2).unwrap();
        assert_eq!(s.to_string(), "F1*F2 - F2*F1");
        let t = parse_ncpoly("2*G1*F1*(G1 + 1)*F2 + sin(G1)", 1, 2).unwrap();
        assert_eq!(t.to_string(), "sin(G1) + 2*G1*F1*(1 + G1)*F2");
        assert_eq!(parse_ncpoly(&t.to_string(), 1, 2).unwrap(), t);
        assert!(matches!(parse_ncpoly("x1*F1", 0, 1), Err(Error::Parse { .. })));
        assert!(matches!(parse_ncpoly("F3", 0, 2), Err(Error::Parse { .. })));
        assert!(matches!(parse_ncpoly("sin(F1)", 0, 1), Err(Error::Parse { .. })));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn printed_expressions_reparse(seed in any::<u64>()) {
            let mut rng = random::rng(seed);
            let e = random::general_expr(&mut rng, 2, 3).simplify();
            let back = parse_expr(&e.to_string(), 2).unwrap().simplify();
            prop_assert_eq!(back, e);
        }

        #[test]
        fn printed_operators_reparse(seed in any::<u64>()) {
            let mut rng = random::rng(seed);
            let a = random::operator(&mut rng, 2, 3, 2);
            prop_assert_eq!(parse_operator(&a.to_string(), 2).unwrap(), a);
        }

        #[test]
        fn printed_ncpolys_reparse(seed in any::<u64>()) {
            let mut rng = random::rng(seed);
            let s = random::ncpoly(&mut rng, 2, 3, 3, 3);
            prop_assert_eq!(parse_ncpoly(&s.to_string(), 2, 3).unwrap(), s);
        }
    }
}
