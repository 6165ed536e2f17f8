use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use super::{MultiIndex, Symbol};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::expr::{is_zero_with, DomainSpec, Expr, ZeroVerdict};

/// A linear differential operator `Σ A_α(x) ∂^α` in standard representation
/// (coefficients to the left of all derivatives).
///
/// The coefficient map is shared verbatim with the operator's [`Symbol`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOperator {
    symbol: Symbol,
}

impl DiffOperator {
    pub fn zero(dim: usize) -> Self {
        Symbol::zero(dim).into()
    }

    pub fn identity(dim: usize) -> Self {
        Symbol::constant(dim, 1).into()
    }

    /// Multiplication by `e(x)`.
    pub fn coefficient(dim: usize, e: Expr) -> Self {
        Symbol::coefficient(dim, e).into()
    }

    pub fn constant(dim: usize, c: i64) -> Self {
        Symbol::constant(dim, c).into()
    }

    /// Multiplication by `x_i`.
    pub fn position(dim: usize, i: usize) -> Self {
        Symbol::position(dim, i).into()
    }

    /// `∂/∂x_i`.
    pub fn momentum(dim: usize, i: usize) -> Self {
        Symbol::momentum(dim, i).into()
    }

    pub fn monomial(dim: usize, alpha: MultiIndex, coeff: Expr) -> Self {
        Symbol::monomial(dim, alpha, coeff).into()
    }

    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (MultiIndex, Expr)>) -> Self {
        Symbol::from_terms(dim, terms).into()
    }

    pub fn from_symbol(symbol: Symbol) -> Self {
        DiffOperator { symbol }
    }

    pub fn symbol(&self) -> &Symbol {
        &self.symbol
    }

    pub fn into_symbol(self) -> Symbol {
        self.symbol
    }

    pub fn dim(&self) -> usize {
        self.symbol.dim()
    }

    pub fn terms(&self) -> &BTreeMap<MultiIndex, Expr> {
        self.symbol.terms()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> Option<&Expr> {
        self.symbol.coeff(alpha)
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.is_zero()
    }

    /// `max |α|` over nonzero coefficients; `None` for the zero operator.
    pub fn order(&self) -> Option<u32> {
        self.symbol.degree()
    }

    /// Rejects coefficients that use variables beyond the dimension.
    pub fn check_variables(&self) -> Result<()> {
        let bound = self.symbol.var_bound();
        if bound > self.dim() {
            return Err(Error::VariableOutOfRange {
                index: bound - 1,
                dim: self.dim(),
            });
        }
        Ok(())
    }

    fn check_dim(&self, other: &DiffOperator) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(())
    }

    /// `A ∘ B` through the symbol formula
    /// `Σ_β (1/β!) ∂_p^β A · ∂_x^β B`, written per coefficient as
    /// `Σ_{a,b} Σ_{β≤a} C(a,β) A_a ∂^β B_b p^{a−β+b}`.
    pub fn compose(&self, other: &DiffOperator) -> Result<DiffOperator> {
        self.check_dim(other)?;
        let dim = self.dim();
        let b_terms: Vec<(&MultiIndex, &Expr)> = other.terms().iter().collect();
        let mut derivs = DerivativeCache::new(b_terms.iter().map(|(_, c)| (*c).clone()).collect());
        let mut out = Vec::new();
        for (a, ca) in self.terms() {
            for beta in a.sub_indices() {
                let binom = Expr::Const(a.binomial_rational(&beta));
                let rest = a.checked_sub(&beta).expect("sub-index");
                for (k, (b, _)) in b_terms.iter().enumerate() {
                    let d = derivs.get(k, &beta);
                    if d.is_zero_const() {
                        continue;
                    }
                    out.push((rest.plus(b), Expr::Mul(vec![binom.clone(), ca.clone(), d.clone()])));
                }
            }
        }
        Ok(DiffOperator::from_terms(dim, out))
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &DiffOperator) -> Result<DiffOperator> {
        Ok(&self.compose(other)? - &other.compose(self)?)
    }

    pub fn pow(&self, k: u32) -> DiffOperator {
        let mut acc = DiffOperator::identity(self.dim());
        for _ in 0..k {
            acc = acc.compose(self).expect("same dimension");
        }
        acc
    }

    /// `H_g`: the terms with `|α| = g`.
    pub fn homogeneous_part(&self, g: u32) -> DiffOperator {
        self.symbol.homogeneous(g).into()
    }

    /// `H_m` with `m` the order; zero for the zero operator.
    pub fn main_part(&self) -> DiffOperator {
        self.symbol.main_part().into()
    }

    /// `H_{m−1}`, or zero when the order is 0.
    pub fn second_main_part(&self) -> DiffOperator {
        self.symbol.second_main_part().into()
    }

    pub fn scale(&self, e: &Expr) -> DiffOperator {
        self.symbol.scale(e).into()
    }

    pub fn try_add(&self, other: &DiffOperator) -> Result<DiffOperator> {
        Ok(self.symbol.try_add(&other.symbol)?.into())
    }

    pub fn try_sub(&self, other: &DiffOperator) -> Result<DiffOperator> {
        Ok(self.symbol.try_sub(&other.symbol)?.into())
    }

    /// Coefficient-wise zero verdicts for `self − other`; the operators are
    /// equal iff every verdict is zero.
    pub fn difference_verdicts(
        &self,
        other: &DiffOperator,
        domain: &DomainSpec,
        cfg: &Config,
    ) -> Result<Vec<(MultiIndex, ZeroVerdict)>> {
        let diff = self.try_sub(other)?;
        diff.coefficient_verdicts(domain, cfg)
    }

    /// Zero verdict of every stored coefficient.
    pub fn coefficient_verdicts(&self, domain: &DomainSpec, cfg: &Config) -> Result<Vec<(MultiIndex, ZeroVerdict)>> {
        self.terms()
            .iter()
            .map(|(a, c)| Ok((a.clone(), is_zero_with(c, domain, cfg)?)))
            .collect()
    }

    /// Whether every coefficient vanishes (symbolically or on samples).
    pub fn is_zero_on(&self, domain: &DomainSpec, cfg: &Config) -> Result<bool> {
        for c in self.terms().values() {
            if !is_zero_with(c, domain, cfg)?.is_zero() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn equals_on(&self, other: &DiffOperator, domain: &DomainSpec, cfg: &Config) -> Result<bool> {
        self.try_sub(other)?.is_zero_on(domain, cfg)
    }

    /// Drops coefficients that the numeric zero test accepts, so that the order
    /// reflects the operator rather than unsimplified trigonometric identities.
    pub fn prune(&self, domain: &DomainSpec, cfg: &Config) -> Result<DiffOperator> {
        let mut kept = BTreeMap::new();
        for (a, c) in self.terms() {
            if !is_zero_with(c, domain, cfg)?.is_zero() {
                kept.insert(a.clone(), c.clone());
            }
        }
        Ok(Symbol::from_simplified(self.dim(), kept).into())
    }

    pub fn display_with<'a>(
        &'a self,
        vars: &'a dyn Fn(usize) -> String,
        momenta: &'a dyn Fn(usize) -> String,
    ) -> super::SymbolDisplay<'a> {
        self.symbol.display_with(vars, momenta)
    }
}

/// Memoized `∂^β` of a fixed list of coefficients.
struct DerivativeCache {
    base: Vec<Expr>,
    memo: HashMap<(usize, MultiIndex), Expr>,
}

impl DerivativeCache {
    fn new(base: Vec<Expr>) -> Self {
        DerivativeCache {
            base,
            memo: HashMap::new(),
        }
    }

    fn get(&mut self, k: usize, beta: &MultiIndex) -> &Expr {
        if !self.memo.contains_key(&(k, beta.clone())) {
            let value = match (0..beta.dim()).find(|&i| beta.get(i) > 0) {
                None => self.base[k].clone(),
                Some(i) => {
                    let lower = beta.lower(i).expect("positive entry");
                    self.get(k, &lower).derivative(i)
                }
            };
            self.memo.insert((k, beta.clone()), value);
        }
        &self.memo[&(k, beta.clone())]
    }
}

impl From<Symbol> for DiffOperator {
    fn from(symbol: Symbol) -> Self {
        DiffOperator { symbol }
    }
}

impl fmt::Display for DiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.symbol, f)
    }
}

impl Serialize for DiffOperator {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.symbol.serialize(serializer)
    }
}

impl std::ops::Add for &DiffOperator {
    type Output = DiffOperator;
    /// Panics on a dimension mismatch; [`DiffOperator::try_add`] reports it instead.
    fn add(self, rhs: &DiffOperator) -> DiffOperator {
        self.try_add(rhs).expect("operator dimensions differ")
    }
}

impl std::ops::Sub for &DiffOperator {
    type Output = DiffOperator;
    fn sub(self, rhs: &DiffOperator) -> DiffOperator {
        self.try_sub(rhs).expect("operator dimensions differ")
    }
}

impl std::ops::Neg for &DiffOperator {
    type Output = DiffOperator;
    fn neg(self) -> DiffOperator {
        self.symbol.neg().into()
    }
}
