use std::collections::BTreeMap;
use std::fmt;

use crate::diffop::Symbol;
use crate::error::{Error, Result};
use crate::expr::{Expr, Params};

use super::substitute_g;

/// A commutative polynomial in `F_1..F_r` whose coefficients are expressions
/// in `G_1..G_l`: the codomain of abelianization.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CommutativePoly {
    g_count: usize,
    f_count: usize,
    terms: BTreeMap<Vec<u32>, Expr>,
}

impl CommutativePoly {
    pub fn zero(g_count: usize, f_count: usize) -> Self {
        CommutativePoly {
            g_count,
            f_count,
            terms: BTreeMap::new(),
        }
    }

    /// Collects like exponents and drops zero coefficients.
    pub fn from_terms(g_count: usize, f_count: usize, terms: impl IntoIterator<Item = (Vec<u32>, Expr)>) -> Self {
        let mut grouped: BTreeMap<Vec<u32>, Vec<Expr>> = BTreeMap::new();
        for (e, c) in terms {
            grouped.entry(e).or_default().push(c);
        }
        let terms = grouped
            .into_iter()
            .filter_map(|(e, cs)| {
                let c = Expr::sum(cs).simplify();
                (!c.is_zero_const()).then_some((e, c))
            })
            .collect();
        CommutativePoly {
            g_count,
            f_count,
            terms,
        }
    }

    pub fn g_count(&self) -> usize {
        self.g_count
    }

    pub fn f_count(&self) -> usize {
        self.f_count
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Expr> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &CommutativePoly) -> CommutativePoly {
        Self::from_terms(
            self.g_count,
            self.f_count,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(e, c)| (e.clone(), c.clone())),
        )
    }

    pub fn mul(&self, other: &CommutativePoly) -> CommutativePoly {
        let mut out = Vec::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.push((e, ca.clone() * cb.clone()));
            }
        }
        Self::from_terms(self.g_count, self.f_count, out)
    }

    /// `∂/∂F_i`.
    pub fn d_f(&self, i: usize) -> CommutativePoly {
        Self::from_terms(
            self.g_count,
            self.f_count,
            self.terms.iter().filter(|(e, _)| e[i] > 0).map(|(e, c)| {
                let mut e2 = e.clone();
                e2[i] -= 1;
                (e2, Expr::int(e[i] as i64) * c.clone())
            }),
        )
    }

    /// `∂/∂G_j`.
    pub fn d_g(&self, j: usize) -> CommutativePoly {
        Self::from_terms(
            self.g_count,
            self.f_count,
            self.terms.iter().map(|(e, c)| (e.clone(), c.derivative(j))),
        )
    }

    /// Largest weighted degree `Σ w_i e_i` over the terms.
    pub fn weighted_degrees(&self, w: &[u32]) -> Vec<u32> {
        self.terms
            .keys()
            .map(|e| e.iter().zip(w).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn eval(&self, g: &[f64], f: &[f64], params: &Params) -> Result<f64> {
        if g.len() != self.g_count || f.len() != self.f_count {
            return Err(Error::ArityMismatch {
                expected: self.g_count + self.f_count,
                found: g.len() + f.len(),
            });
        }
        let mut acc = 0.0;
        for (e, c) in &self.terms {
            let mono: f64 = e.iter().zip(f).map(|(&k, &v)| v.powi(k as i32)).product();
            acc += c.evaluate(g, params)? * mono;
        }
        Ok(acc)
    }

    /// Gradient with respect to `(G_1..G_l, F_1..F_r)`.
    pub fn gradient(&self, g: &[f64], f: &[f64], params: &Params) -> Result<Vec<f64>> {
        let mut out = Vec::with_capacity(self.g_count + self.f_count);
        for j in 0..self.g_count {
            out.push(self.d_g(j).eval(g, f, params)?);
        }
        for i in 0..self.f_count {
            out.push(self.d_f(i).eval(g, f, params)?);
        }
        Ok(out)
    }

    /// The phase-space function `P(G(x), F(x,p))` for order-0 expressions `g`
    /// and symbols `f`.
    pub fn to_symbol(&self, dim: usize, g: &[Expr], f: &[Symbol]) -> Symbol {
        let mut powers: Vec<Vec<Symbol>> = f.iter().map(|s| vec![Symbol::constant(dim, 1), s.clone()]).collect();
        let mut acc = Symbol::zero(dim);
        for (e, c) in &self.terms {
            let mut term = Symbol::coefficient(dim, substitute_g(c, g));
            for (i, &k) in e.iter().enumerate() {
                let k = k as usize;
                while powers[i].len() <= k {
                    let next = &powers[i][powers[i].len() - 1] * &f[i];
                    powers[i].push(next);
                }
                if k > 0 {
                    term = &term * &powers[i][k];
                }
            }
            acc = &acc + &term;
        }
        acc
    }
}

impl fmt::Display for CommutativePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let names = super::default_g_name;
        for (k, (e, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({})", c.display_with(&names))?;
            for (i, &a) in e.iter().enumerate() {
                match a {
                    0 => {}
                    1 => write!(f, "*F{}", i + 1)?,
                    _ => write!(f, "*F{}^{}", i + 1, a)?,
                }
            }
        }
        Ok(())
    }
}
