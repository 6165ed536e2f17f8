//! Infix printing in the same grammar the parser accepts, so canonical trees
//! round-trip through text.

use std::fmt::{self, Write};

use super::{Expr, Rational};

const PREC_ADD: u8 = 1;
const PREC_MUL: u8 = 2;
const PREC_NEG: u8 = 3;
const PREC_POW: u8 = 4;
const PREC_ATOM: u8 = 5;

/// Display adaptor with caller-chosen variable names.
pub struct ExprDisplay<'a> {
    expr: &'a Expr,
    names: &'a dyn Fn(usize) -> String,
}

impl Expr {
    pub fn display_with<'a>(&'a self, names: &'a dyn Fn(usize) -> String) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, names }
    }
}

pub fn default_var_name(i: usize) -> String {
    format!("x{}", i + 1)
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(self, &default_var_name, PREC_ADD, &mut s)?;
        f.write_str(&s)
    }
}

impl fmt::Display for ExprDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(self.expr, self.names, PREC_ADD, &mut s)?;
        f.write_str(&s)
    }
}

fn const_prec(c: &Rational) -> u8 {
    if !c.is_integer() {
        PREC_MUL
    } else if c.is_negative() {
        PREC_NEG
    } else {
        PREC_ATOM
    }
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Const(c) => const_prec(c),
        Expr::Var(_) | Expr::Param(_) | Expr::Func(..) => PREC_ATOM,
        Expr::Add(_) => PREC_ADD,
        Expr::Mul(_) => PREC_MUL,
        Expr::Pow(..) => PREC_POW,
    }
}

fn write_expr(e: &Expr, names: &dyn Fn(usize) -> String, ctx: u8, out: &mut String) -> fmt::Result {
    let paren = prec(e) < ctx;
    if paren {
        out.push('(');
    }
    match e {
        Expr::Const(c) => write!(out, "{}", c.value())?,
        Expr::Var(i) => out.push_str(&names(*i)),
        Expr::Param(p) => out.push_str(p),
        Expr::Add(ts) => {
            // lead with a positive term when there is one
            let mut ts: Vec<&Expr> = ts.iter().collect();
            if let Some(k) = ts.iter().position(|t| negated(t).is_none()) {
                let t = ts.remove(k);
                ts.insert(0, t);
            }
            for (k, t) in ts.into_iter().enumerate() {
                if k == 0 {
                    write_expr(t, names, PREC_ADD, out)?;
                } else if let Some(neg) = negated(t) {
                    out.push_str(" - ");
                    write_expr(&neg, names, PREC_MUL, out)?;
                } else {
                    out.push_str(" + ");
                    write_expr(t, names, PREC_MUL, out)?;
                }
            }
        }
        Expr::Mul(fs) => {
            let mut rest: &[Expr] = fs;
            let mut first = true;
            if let Some(Expr::Const(c)) = fs.first() {
                if fs.len() > 1 && (-c).is_one() {
                    out.push('-');
                    rest = &fs[1..];
                    // the first remaining factor binds to the unary minus
                    write_expr(&rest[0], names, PREC_POW, out)?;
                    rest = &rest[1..];
                    first = false;
                }
            }
            for f in rest {
                if first {
                    write_expr(f, names, PREC_MUL, out)?;
                    first = false;
                } else {
                    out.push('*');
                    write_expr(f, names, PREC_NEG, out)?;
                }
            }
        }
        Expr::Pow(b, k) => {
            write_expr(b, names, PREC_ATOM, out)?;
            if *k < 0 {
                write!(out, "^({k})")?;
            } else {
                write!(out, "^{k}")?;
            }
        }
        Expr::Func(f, a) => {
            out.push_str(f.name());
            out.push('(');
            write_expr(a, names, PREC_ADD, out)?;
            out.push(')');
        }
    }
    if paren {
        out.push(')');
    }
    Ok(())
}

/// `-t` when `t` is a monomial with a negative leading coefficient.
pub(crate) fn negated(t: &Expr) -> Option<Expr> {
    match t {
        Expr::Const(c) if c.is_negative() => Some(Expr::Const(-c)),
        Expr::Mul(fs) => match fs.first() {
            Some(Expr::Const(c)) if c.is_negative() => {
                let c = -c;
                let mut rest: Vec<Expr> = fs[1..].to_vec();
                if !c.is_one() {
                    rest.insert(0, Expr::Const(c));
                }
                Some(Expr::product(rest))
            }
            _ => None,
        },
        _ => None,
    }
}
