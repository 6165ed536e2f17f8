use std::collections::BTreeMap;
use std::fmt;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use super::MultiIndex;
use crate::error::{Error, Result};
use crate::expr::{default_var_name, negated, Expr, Params, DEFAULT_SINGULAR_TOL};

/// A polynomial in the momenta `p` with coefficient expressions in `x`:
/// `F(x, p) = Σ A_α(x) p^α`.
///
/// Coefficients are kept simplified and structurally nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    dim: usize,
    terms: BTreeMap<MultiIndex, Expr>,
}

impl Symbol {
    pub fn zero(dim: usize) -> Self {
        Symbol {
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// The `p`-free symbol `e(x)`.
    pub fn coefficient(dim: usize, e: Expr) -> Self {
        Self::from_terms(dim, [(MultiIndex::zero(dim), e)])
    }

    pub fn constant(dim: usize, c: i64) -> Self {
        Self::coefficient(dim, Expr::int(c))
    }

    pub fn position(dim: usize, i: usize) -> Self {
        Self::coefficient(dim, Expr::var(i))
    }

    pub fn momentum(dim: usize, i: usize) -> Self {
        Self::monomial(dim, MultiIndex::unit(dim, i), Expr::one())
    }

    pub fn monomial(dim: usize, alpha: MultiIndex, coeff: Expr) -> Self {
        Self::from_terms(dim, [(alpha, coeff)])
    }

    /// Collects terms with equal exponents, simplifies and drops zero coefficients.
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, Expr)>) -> Self {
        let mut grouped: BTreeMap<MultiIndex, Vec<Expr>> = BTreeMap::new();
        for (alpha, e) in terms {
            assert_eq!(alpha.dim(), dim, "multi-index dimension mismatch");
            grouped.entry(alpha).or_default().push(e);
        }
        let terms = grouped
            .into_iter()
            .filter_map(|(alpha, es)| {
                let c = Expr::sum(es).simplify();
                (!c.is_zero_const()).then_some((alpha, c))
            })
            .collect();
        Symbol { dim, terms }
    }

    pub(crate) fn from_simplified(dim: usize, terms: BTreeMap<MultiIndex, Expr>) -> Self {
        Symbol { dim, terms }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Expr> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<MultiIndex, Expr> {
        self.terms
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Option<&Expr> {
        self.terms.get(alpha)
    }

    /// The `p`-free coefficient, zero if absent.
    pub fn constant_term(&self) -> Expr {
        self.terms
            .get(&MultiIndex::zero(self.dim))
            .cloned()
            .unwrap_or_else(Expr::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Largest `|α|` present; `None` for the zero symbol.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(MultiIndex::order).max()
    }

    /// Terms with `|α| = g`.
    pub fn homogeneous(&self, g: u32) -> Symbol {
        Symbol {
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .filter(|(a, _)| a.order() == g)
                .map(|(a, c)| (a.clone(), c.clone()))
                .collect(),
        }
    }

    /// Highest-degree homogeneous part.
    pub fn main_part(&self) -> Symbol {
        match self.degree() {
            Some(m) => self.homogeneous(m),
            None => self.clone(),
        }
    }

    /// Homogeneous part one degree below the top, zero for degree 0.
    pub fn second_main_part(&self) -> Symbol {
        match self.degree() {
            Some(m) if m > 0 => self.homogeneous(m - 1),
            _ => Symbol::zero(self.dim),
        }
    }

    fn check_dim(&self, other: &Symbol) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Symbol) -> Result<Symbol> {
        self.check_dim(other)?;
        Ok(Self::from_terms(
            self.dim,
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(a, c)| (a.clone(), c.clone())),
        ))
    }

    pub fn try_sub(&self, other: &Symbol) -> Result<Symbol> {
        self.try_add(&other.neg())
    }

    /// Commutative product of polynomials in `p`.
    pub fn try_mul(&self, other: &Symbol) -> Result<Symbol> {
        self.check_dim(other)?;
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.push((a.plus(b), Expr::Mul(vec![ca.clone(), cb.clone()])));
            }
        }
        Ok(Self::from_terms(self.dim, out))
    }

    pub fn neg(&self) -> Symbol {
        self.scale(&Expr::int(-1))
    }

    /// Multiplies every coefficient by `e(x)`.
    pub fn scale(&self, e: &Expr) -> Symbol {
        Self::from_terms(
            self.dim,
            self.terms
                .iter()
                .map(|(a, c)| (a.clone(), Expr::Mul(vec![e.clone(), c.clone()]))),
        )
    }

    pub fn pow(&self, k: u32) -> Symbol {
        let mut acc = Symbol::constant(self.dim, 1);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// `∂F/∂p_i`.
    pub fn d_p(&self, i: usize) -> Symbol {
        Self::from_terms(
            self.dim,
            self.terms.iter().filter_map(|(a, c)| {
                let k = a.get(i);
                a.lower(i).map(|b| (b, Expr::Mul(vec![Expr::int(k as i64), c.clone()])))
            }),
        )
    }

    /// `∂F/∂x_i`.
    pub fn d_x(&self, i: usize) -> Symbol {
        Self::from_terms(self.dim, self.terms.iter().map(|(a, c)| (a.clone(), c.derivative(i))))
    }

    /// Applies `f` to each coefficient.
    pub fn map_coeffs(&self, f: impl Fn(&Expr) -> Expr) -> Symbol {
        Self::from_terms(self.dim, self.terms.iter().map(|(a, c)| (a.clone(), f(c))))
    }

    pub fn eval(&self, x: &[f64], p: &[f64], params: &Params) -> Result<f64> {
        self.eval_with(x, p, params, DEFAULT_SINGULAR_TOL)
    }

    pub fn eval_with(&self, x: &[f64], p: &[f64], params: &Params, singular_tol: f64) -> Result<f64> {
        if p.len() != self.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: p.len(),
            });
        }
        let mut acc = 0.0;
        for (a, c) in &self.terms {
            acc += c.evaluate_with(x, params, singular_tol)? * monomial_value(a, p);
        }
        Ok(acc)
    }

    /// Sum of the absolute values of the individual terms at `(x, p)`.
    pub fn magnitude(&self, x: &[f64], p: &[f64], params: &Params) -> Result<f64> {
        let mut acc = 0.0;
        for (a, c) in &self.terms {
            acc += (c.evaluate(x, params)? * monomial_value(a, p)).abs();
        }
        Ok(acc)
    }

    /// Largest variable index used by a coefficient, plus one.
    pub fn var_bound(&self) -> usize {
        self.terms.values().map(Expr::var_bound).max().unwrap_or(0)
    }

    /// Terms ordered by descending `|α|`, then descending `α`.
    pub fn sorted_terms(&self) -> Vec<(&MultiIndex, &Expr)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|(a, _), (b, _)| b.order().cmp(&a.order()).then_with(|| b.cmp(a)));
        v
    }

    pub fn display_with<'a>(
        &'a self,
        vars: &'a dyn Fn(usize) -> String,
        momenta: &'a dyn Fn(usize) -> String,
    ) -> SymbolDisplay<'a> {
        SymbolDisplay {
            symbol: self,
            vars,
            momenta,
        }
    }
}

pub fn monomial_value(alpha: &MultiIndex, p: &[f64]) -> f64 {
    alpha
        .as_slice()
        .iter()
        .zip(p)
        .map(|(&k, &v)| v.powi(k as i32))
        .product()
}

pub fn default_momentum_name(i: usize) -> String {
    format!("p{}", i + 1)
}

pub struct SymbolDisplay<'a> {
    symbol: &'a Symbol,
    vars: &'a dyn Fn(usize) -> String,
    momenta: &'a dyn Fn(usize) -> String,
}

fn momentum_word(alpha: &MultiIndex, momenta: &dyn Fn(usize) -> String) -> String {
    let mut parts = Vec::new();
    for (i, &k) in alpha.as_slice().iter().enumerate() {
        match k {
            0 => {}
            1 => parts.push(momenta(i)),
            _ => parts.push(format!("{}^{}", momenta(i), k)),
        }
    }
    parts.join("*")
}

fn coeff_text(c: &Expr, vars: &dyn Fn(usize) -> String) -> String {
    let s = c.display_with(vars).to_string();
    if matches!(c, Expr::Add(_)) {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for SymbolDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.symbol.sorted_terms();
        if terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (alpha, c)) in terms.into_iter().enumerate() {
            let (neg, c) = match negated(c) {
                Some(n) => (true, n),
                None => (false, c.clone()),
            };
            if k == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            let word = momentum_word(alpha, self.momenta);
            if word.is_empty() {
                // a bare constant term
                let s = c.display_with(self.vars).to_string();
                if neg && matches!(c, Expr::Add(_)) {
                    write!(f, "({s})")?;
                } else {
                    f.write_str(&s)?;
                }
            } else if c.is_one_const() {
                f.write_str(&word)?;
            } else {
                write!(f, "{}*{}", coeff_text(&c, self.vars), word)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&default_var_name, &default_momentum_name))
    }
}

impl Serialize for Symbol {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Term {
            alpha: Vec<u32>,
            coeff: String,
        }
        let terms: Vec<Term> = self
            .sorted_terms()
            .into_iter()
            .map(|(a, c)| Term {
                alpha: a.as_slice().to_vec(),
                coeff: c.to_string(),
            })
            .collect();
        let mut st = serializer.serialize_struct("Symbol", 2)?;
        st.serialize_field("dim", &self.dim)?;
        st.serialize_field("terms", &terms)?;
        st.end()
    }
}

impl std::ops::Add for &Symbol {
    type Output = Symbol;
    /// Panics on a dimension mismatch; use [`Symbol::try_add`] to get an error instead.
    fn add(self, rhs: &Symbol) -> Symbol {
        self.try_add(rhs).expect("symbol dimensions differ")
    }
}

impl std::ops::Sub for &Symbol {
    type Output = Symbol;
    fn sub(self, rhs: &Symbol) -> Symbol {
        self.try_sub(rhs).expect("symbol dimensions differ")
    }
}

impl std::ops::Mul for &Symbol {
    type Output = Symbol;
    fn mul(self, rhs: &Symbol) -> Symbol {
        self.try_mul(rhs).expect("symbol dimensions differ")
    }
}

impl std::ops::Neg for &Symbol {
    type Output = Symbol;
    fn neg(self) -> Symbol {
        Symbol::neg(self)
    }
}
