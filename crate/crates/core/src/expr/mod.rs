//! Coefficient functions `A_α(x)`: an expression tree over rational constants,
//! coordinates `x_i`, named parameters and a handful of elementary functions.
//!
//! Trees are plain values. [`Expr::simplify`] brings a tree into a canonical
//! sum-of-monomials form (products are expanded, like terms collected), which
//! makes polynomial identities decidable structurally; anything the rewriter
//! cannot decide is settled by [`is_zero`]'s numeric sampling.

mod diff;
mod display;
mod domain;
mod eval;
mod rational;
mod simplify;

use std::collections::BTreeSet;
use std::sync::Arc;

pub(crate) use display::negated;
pub use display::{default_var_name, ExprDisplay};
pub use domain::{is_zero, is_zero_with, rng_from_seed, DomainSpec, ZeroVerdict, MAX_ATTEMPTS};
pub use eval::{Params, DEFAULT_SINGULAR_TOL};
pub use rational::Rational;

/// Elementary functions allowed inside coefficient expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Cot,
    Exp,
    Sqrt,
    Neg,
    Recip,
}

impl Func {
    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Cot => "cot",
            Func::Exp => "exp",
            Func::Sqrt => "sqrt",
            Func::Neg => "neg",
            Func::Recip => "recip",
        }
    }

    pub fn from_name(name: &str) -> Option<Func> {
        Some(match name {
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            "tan" => Func::Tan,
            "cot" => Func::Cot,
            "exp" => Func::Exp,
            "sqrt" => Func::Sqrt,
            "neg" => Func::Neg,
            "recip" => Func::Recip,
            _ => return None,
        })
    }
}

/// A coefficient expression. Variable indices are zero based; `Var(0)` prints as `x1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expr {
    Const(Rational),
    Var(usize),
    Param(Arc<str>),
    Add(Vec<Expr>),
    Mul(Vec<Expr>),
    Pow(Box<Expr>, i64),
    Func(Func, Box<Expr>),
}

impl Expr {
    pub fn zero() -> Expr {
        Expr::Const(Rational::zero())
    }

    pub fn one() -> Expr {
        Expr::Const(Rational::one())
    }

    pub fn int(n: i64) -> Expr {
        Expr::Const(Rational::from_integer(n))
    }

    pub fn rat(num: i64, den: i64) -> Expr {
        Expr::Const(Rational::from_ratio(num, den))
    }

    pub fn constant(r: Rational) -> Expr {
        Expr::Const(r)
    }

    pub fn var(i: usize) -> Expr {
        Expr::Var(i)
    }

    pub fn param(name: &str) -> Expr {
        Expr::Param(Arc::from(name))
    }

    pub fn func(f: Func, arg: Expr) -> Expr {
        Expr::Func(f, Box::new(arg))
    }

    pub fn sin(self) -> Expr {
        Expr::func(Func::Sin, self)
    }

    pub fn cos(self) -> Expr {
        Expr::func(Func::Cos, self)
    }

    pub fn tan(self) -> Expr {
        Expr::func(Func::Tan, self)
    }

    pub fn cot(self) -> Expr {
        Expr::func(Func::Cot, self)
    }

    pub fn exp(self) -> Expr {
        Expr::func(Func::Exp, self)
    }

    pub fn sqrt(self) -> Expr {
        Expr::func(Func::Sqrt, self)
    }

    pub fn recip(self) -> Expr {
        Expr::Pow(Box::new(self), -1)
    }

    pub fn pow(self, k: i64) -> Expr {
        Expr::Pow(Box::new(self), k)
    }

    pub fn sum(terms: impl IntoIterator<Item = Expr>) -> Expr {
        let terms: Vec<Expr> = terms.into_iter().collect();
        match terms.len() {
            0 => Expr::zero(),
            1 => terms.into_iter().next().unwrap(),
            _ => Expr::Add(terms),
        }
    }

    pub fn product(factors: impl IntoIterator<Item = Expr>) -> Expr {
        let factors: Vec<Expr> = factors.into_iter().collect();
        match factors.len() {
            0 => Expr::one(),
            1 => factors.into_iter().next().unwrap(),
            _ => Expr::Mul(factors),
        }
    }

    pub fn as_const(&self) -> Option<&Rational> {
        match self {
            Expr::Const(c) => Some(c),
            _ => None,
        }
    }

    /// Structural zero test; meaningful on simplified trees.
    pub fn is_zero_const(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_zero())
    }

    pub fn is_one_const(&self) -> bool {
        matches!(self, Expr::Const(c) if c.is_one())
    }

    pub fn depends_on(&self, i: usize) -> bool {
        match self {
            Expr::Const(_) | Expr::Param(_) => false,
            Expr::Var(j) => *j == i,
            Expr::Add(ts) | Expr::Mul(ts) => ts.iter().any(|t| t.depends_on(i)),
            Expr::Pow(b, _) => b.depends_on(i),
            Expr::Func(_, a) => a.depends_on(i),
        }
    }

    /// Largest variable index plus one (0 for variable-free trees).
    pub fn var_bound(&self) -> usize {
        match self {
            Expr::Const(_) | Expr::Param(_) => 0,
            Expr::Var(j) => j + 1,
            Expr::Add(ts) | Expr::Mul(ts) => ts.iter().map(Expr::var_bound).max().unwrap_or(0),
            Expr::Pow(b, _) => b.var_bound(),
            Expr::Func(_, a) => a.var_bound(),
        }
    }

    pub fn params(&self) -> BTreeSet<Arc<str>> {
        let mut out = BTreeSet::new();
        self.collect_params(&mut out);
        out
    }

    fn collect_params(&self, out: &mut BTreeSet<Arc<str>>) {
        match self {
            Expr::Const(_) | Expr::Var(_) => {}
            Expr::Param(p) => {
                out.insert(p.clone());
            }
            Expr::Add(ts) | Expr::Mul(ts) => ts.iter().for_each(|t| t.collect_params(out)),
            Expr::Pow(b, _) => b.collect_params(out),
            Expr::Func(_, a) => a.collect_params(out),
        }
    }

    /// Replaces every `Var(i)` by `f(i)`. The result is not simplified.
    pub fn substitute(&self, f: &dyn Fn(usize) -> Expr) -> Expr {
        match self {
            Expr::Const(_) | Expr::Param(_) => self.clone(),
            Expr::Var(i) => f(*i),
            Expr::Add(ts) => Expr::Add(ts.iter().map(|t| t.substitute(f)).collect()),
            Expr::Mul(ts) => Expr::Mul(ts.iter().map(|t| t.substitute(f)).collect()),
            Expr::Pow(b, k) => Expr::Pow(Box::new(b.substitute(f)), *k),
            Expr::Func(g, a) => Expr::Func(*g, Box::new(a.substitute(f))),
        }
    }

    /// Renumbers variables, `Var(i) -> Var(map(i))`.
    pub fn relabel(&self, map: &dyn Fn(usize) -> usize) -> Expr {
        self.substitute(&|i| Expr::Var(map(i)))
    }

    /// Replaces a named parameter by an expression.
    pub fn substitute_param(&self, name: &str, value: &Expr) -> Expr {
        match self {
            Expr::Param(p) if &**p == name => value.clone(),
            Expr::Const(_) | Expr::Var(_) | Expr::Param(_) => self.clone(),
            Expr::Add(ts) => Expr::Add(ts.iter().map(|t| t.substitute_param(name, value)).collect()),
            Expr::Mul(ts) => Expr::Mul(ts.iter().map(|t| t.substitute_param(name, value)).collect()),
            Expr::Pow(b, k) => Expr::Pow(Box::new(b.substitute_param(name, value)), *k),
            Expr::Func(g, a) => Expr::Func(*g, Box::new(a.substitute_param(name, value))),
        }
    }

    pub fn node_count(&self) -> usize {
        1 + match self {
            Expr::Const(_) | Expr::Var(_) | Expr::Param(_) => 0,
            Expr::Add(ts) | Expr::Mul(ts) => ts.iter().map(Expr::node_count).sum(),
            Expr::Pow(b, _) => b.node_count(),
            Expr::Func(_, a) => a.node_count(),
        }
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Self {
        Expr::int(n)
    }
}

impl From<Rational> for Expr {
    fn from(r: Rational) -> Self {
        Expr::Const(r)
    }
}

impl std::ops::Add for Expr {
    type Output = Expr;
    fn add(self, rhs: Expr) -> Expr {
        Expr::Add(vec![self, rhs])
    }
}

impl std::ops::Sub for Expr {
    type Output = Expr;
    fn sub(self, rhs: Expr) -> Expr {
        Expr::Add(vec![self, Expr::Mul(vec![Expr::int(-1), rhs])])
    }
}

impl std::ops::Mul for Expr {
    type Output = Expr;
    fn mul(self, rhs: Expr) -> Expr {
        Expr::Mul(vec![self, rhs])
    }
}

impl std::ops::Div for Expr {
    type Output = Expr;
    fn div(self, rhs: Expr) -> Expr {
        Expr::Mul(vec![self, rhs.recip()])
    }
}

impl std::ops::Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::Mul(vec![Expr::int(-1), self])
    }
}

#[cfg(test)]
mod tests;
