//! Noncommutative polynomials `Σ Z₀ F_{β₁} Z₁ ⋯ F_{β_q} Z_q` in letters
//! `F_1..F_r`, with coefficients `Z_j` that are functions of commuting
//! variables `G_1..G_l`.
//!
//! Inside coefficient expressions `G_j` is `Expr::Var(j - 1)`.

mod abelian;
mod top;

use std::collections::BTreeMap;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::config::Config;
use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::expr::{is_zero_with, negated, DomainSpec, Expr, Params};

pub use abelian::CommutativePoly;
pub(crate) use top::residual_terms;
pub use top::{verify_top_identity, ResidualTerm, TopIdentityReport};

/// `Z₀ F_{β₁} Z₁ ⋯ F_{β_q} Z_q`; `word` holds zero-based letter indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NCMonomial {
    word: Vec<usize>,
    coeffs: Vec<Expr>,
}

impl NCMonomial {
    pub fn new(word: Vec<usize>, coeffs: Vec<Expr>) -> Result<Self> {
        if coeffs.len() != word.len() + 1 {
            return Err(Error::ArityMismatch {
                expected: word.len() + 1,
                found: coeffs.len(),
            });
        }
        Ok(NCMonomial {
            word,
            coeffs: coeffs.iter().map(Expr::simplify).collect(),
        })
    }

    pub fn scalar(e: Expr) -> Self {
        NCMonomial {
            word: Vec::new(),
            coeffs: vec![e.simplify()],
        }
    }

    pub fn letter(i: usize) -> Self {
        NCMonomial {
            word: vec![i],
            coeffs: vec![Expr::one(), Expr::one()],
        }
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn coeffs(&self) -> &[Expr] {
        &self.coeffs
    }

    pub fn len(&self) -> usize {
        self.word.len()
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Zero iff some coefficient is structurally zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().any(Expr::is_zero_const)
    }

    /// Concatenation; the touching coefficients multiply.
    pub fn mul(&self, other: &NCMonomial) -> NCMonomial {
        let q = self.word.len();
        let mut coeffs = self.coeffs[..q].to_vec();
        coeffs.push((self.coeffs[q].clone() * other.coeffs[0].clone()).simplify());
        coeffs.extend_from_slice(&other.coeffs[1..]);
        let mut word = self.word.clone();
        word.extend_from_slice(&other.word);
        NCMonomial { word, coeffs }
    }

    pub fn scale(&self, e: &Expr) -> NCMonomial {
        let mut m = self.clone();
        m.coeffs[0] = (e.clone() * m.coeffs[0].clone()).simplify();
        m
    }

    /// `Σ_j w_{β_j}`.
    pub fn weight(&self, w: &[u32]) -> u32 {
        self.word.iter().map(|&i| w[i]).sum()
    }

    /// `Π_j Z_j`, the coefficient of the monomial after abelianization.
    pub fn coefficient_product(&self) -> Expr {
        Expr::product(self.coeffs.clone()).simplify()
    }

    /// Letter counts.
    pub fn exponents(&self, f_count: usize) -> Vec<u32> {
        let mut e = vec![0; f_count];
        for &i in &self.word {
            e[i] += 1;
        }
        e
    }

    /// `Π_j Z_j(G^{(j)})` with an independent copy of the `G` variables per slot,
    /// the image of the monomial in the tensor product of coefficient algebras.
    fn tensor_term(&self, g_count: usize) -> Expr {
        Expr::product(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, z)| z.relabel(&|k| j * g_count + k)),
        )
    }
}

/// A finite sum of [`NCMonomial`]s with `l` commuting and `r` noncommuting variables.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NCPolynomial {
    g_count: usize,
    f_count: usize,
    terms: Vec<NCMonomial>,
}

impl NCPolynomial {
    pub fn zero(g_count: usize, f_count: usize) -> Self {
        NCPolynomial {
            g_count,
            f_count,
            terms: Vec::new(),
        }
    }

    pub fn scalar(g_count: usize, f_count: usize, e: Expr) -> Self {
        Self::from_monomials(g_count, f_count, vec![NCMonomial::scalar(e)])
    }

    /// The letter `F_{i+1}`.
    pub fn f(g_count: usize, f_count: usize, i: usize) -> Self {
        Self::from_monomials(g_count, f_count, vec![NCMonomial::letter(i)])
    }

    /// The commuting variable `G_{j+1}`.
    pub fn g(g_count: usize, f_count: usize, j: usize) -> Self {
        Self::scalar(g_count, f_count, Expr::var(j))
    }

    /// Canonical term list: monomials sharing the word and `Z_1..Z_q` are
    /// merged by adding their `Z_0`, structural zeros are dropped, and terms
    /// are ordered by word.
    pub fn from_monomials(g_count: usize, f_count: usize, terms: Vec<NCMonomial>) -> Self {
        let mut merged: BTreeMap<(Vec<usize>, Vec<Expr>), Vec<Expr>> = BTreeMap::new();
        for m in terms {
            let mut coeffs = m.coeffs;
            let z0 = coeffs.remove(0);
            merged.entry((m.word, coeffs)).or_default().push(z0);
        }
        let terms = merged
            .into_iter()
            .map(|((word, tail), z0s)| {
                let z0 = if z0s.len() == 1 {
                    z0s.into_iter().next().unwrap()
                } else {
                    Expr::sum(z0s).simplify()
                };
                let mut coeffs = Vec::with_capacity(tail.len() + 1);
                coeffs.push(z0);
                coeffs.extend(tail);
                NCMonomial { word, coeffs }
            })
            .filter(|m| !m.is_zero())
            .collect();
        NCPolynomial {
            g_count,
            f_count,
            terms,
        }
    }

    /// Checks letter indices and coefficient variables against the arity.
    pub fn validate(&self) -> Result<()> {
        for m in &self.terms {
            if let Some(&i) = m.word.iter().find(|&&i| i >= self.f_count) {
                return Err(Error::ArityMismatch {
                    expected: self.f_count,
                    found: i + 1,
                });
            }
            if let Some(b) = m.coeffs.iter().map(Expr::var_bound).max() {
                if b > self.g_count {
                    return Err(Error::ArityMismatch {
                        expected: self.g_count,
                        found: b,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn g_count(&self) -> usize {
        self.g_count
    }

    pub fn f_count(&self) -> usize {
        self.f_count
    }

    pub fn terms(&self) -> &[NCMonomial] {
        &self.terms
    }

    fn check_arity(&self, other: &NCPolynomial) -> Result<()> {
        if (self.g_count, self.f_count) != (other.g_count, other.f_count) {
            return Err(Error::ArityMismatch {
                expected: self.f_count,
                found: other.f_count,
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &NCPolynomial) -> Result<NCPolynomial> {
        self.check_arity(other)?;
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Self::from_monomials(self.g_count, self.f_count, terms))
    }

    pub fn try_mul(&self, other: &NCPolynomial) -> Result<NCPolynomial> {
        self.check_arity(other)?;
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(a.mul(b));
            }
        }
        Ok(Self::from_monomials(self.g_count, self.f_count, terms))
    }

    pub fn scale(&self, e: &Expr) -> NCPolynomial {
        Self::from_monomials(
            self.g_count,
            self.f_count,
            self.terms.iter().map(|m| m.scale(e)).collect(),
        )
    }

    pub fn neg(&self) -> NCPolynomial {
        self.scale(&Expr::int(-1))
    }

    pub fn pow(&self, k: u32) -> NCPolynomial {
        let mut acc = Self::scalar(self.g_count, self.f_count, Expr::one());
        for _ in 0..k {
            acc = acc.try_mul(self).expect("same arity");
        }
        acc
    }

    /// Monomials grouped by word.
    pub fn groups(&self) -> BTreeMap<Vec<usize>, Vec<&NCMonomial>> {
        let mut out: BTreeMap<Vec<usize>, Vec<&NCMonomial>> = BTreeMap::new();
        for m in &self.terms {
            out.entry(m.word.clone()).or_default().push(m);
        }
        out
    }

    /// `S_β` as a single expression over `(q+1)·l` variables: slot `j` of the
    /// word uses its own copy `G^{(j)}` of the commuting variables, so that
    /// `G F − F G` does not collapse.
    pub fn tensor_form(&self, word: &[usize]) -> Expr {
        Expr::sum(
            self.terms
                .iter()
                .filter(|m| m.word == word)
                .map(|m| m.tensor_term(self.g_count)),
        )
        .simplify()
    }

    /// Whether the group of monomials with this word vanishes.
    pub fn word_vanishes(&self, word: &[usize], params: &Params, cfg: &Config) -> Result<bool> {
        let t = self.tensor_form(word);
        if t.is_zero_const() {
            return Ok(true);
        }
        let mut domain = DomainSpec::new((word.len() + 1) * self.g_count);
        domain.params = params.clone();
        Ok(is_zero_with(&t, &domain, cfg)?.is_zero())
    }

    /// Words whose group does not vanish, in word order.
    pub fn nonzero_words(&self, params: &Params, cfg: &Config) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        for word in self.groups().into_keys() {
            if !self.word_vanishes(&word, params, cfg)? {
                out.push(word);
            }
        }
        Ok(out)
    }

    /// The canonical zero test: every group `S_β` vanishes.
    pub fn is_zero(&self, params: &Params, cfg: &Config) -> Result<bool> {
        Ok(self.nonzero_words(params, cfg)?.is_empty())
    }

    /// Removes the monomials of vanishing groups.
    pub fn canonical(&self, params: &Params, cfg: &Config) -> Result<NCPolynomial> {
        let keep = self.nonzero_words(params, cfg)?;
        Ok(Self::from_monomials(
            self.g_count,
            self.f_count,
            self.terms.iter().filter(|m| keep.contains(&m.word)).cloned().collect(),
        ))
    }

    /// `C_{d,w}`: monomials of weighted length `d`.
    pub fn quasi_homogeneous_part(&self, d: u32, w: &[u32]) -> NCPolynomial {
        Self::from_monomials(
            self.g_count,
            self.f_count,
            self.terms.iter().filter(|m| m.weight(w) == d).cloned().collect(),
        )
    }

    /// `(deg_w S, ℳ_w S, ℳ'_w S)`; the degree is `None` for the zero polynomial.
    pub fn degree_and_main(&self, w: &[u32], params: &Params, cfg: &Config) -> Result<MainParts> {
        if w.len() != self.f_count {
            return Err(Error::ArityMismatch {
                expected: self.f_count,
                found: w.len(),
            });
        }
        let canonical = self.canonical(params, cfg)?;
        let degree = canonical.terms.iter().map(|m| m.weight(w)).max();
        let zero = Self::zero(self.g_count, self.f_count);
        Ok(match degree {
            None => MainParts {
                degree: None,
                main: zero.clone(),
                second: zero,
            },
            Some(d) => MainParts {
                degree: Some(d),
                main: canonical.quasi_homogeneous_part(d, w),
                second: if d == 0 {
                    zero
                } else {
                    canonical.quasi_homogeneous_part(d - 1, w)
                },
            },
        })
    }

    /// The image under the abelianization map `T`.
    pub fn abelianize(&self) -> CommutativePoly {
        CommutativePoly::from_terms(
            self.g_count,
            self.f_count,
            self.terms
                .iter()
                .map(|m| (m.exponents(self.f_count), m.coefficient_product())),
        )
    }

    /// Renames letters, `F_i -> F_{map(i)}`, into a polynomial with `f_count` letters.
    pub fn relabel_letters(&self, f_count: usize, map: &dyn Fn(usize) -> usize) -> NCPolynomial {
        Self::from_monomials(
            self.g_count,
            f_count,
            self.terms
                .iter()
                .map(|m| NCMonomial {
                    word: m.word.iter().map(|&i| map(i)).collect(),
                    coeffs: m.coeffs.clone(),
                })
                .collect(),
        )
    }

    /// The operator `S(G, F)`: each `Z` becomes multiplication by `Z(G_1(x), …)`
    /// and each letter the corresponding operator, composed in word order.
    pub fn substitute(&self, g_ops: &[DiffOperator], f_ops: &[DiffOperator]) -> Result<DiffOperator> {
        let dim = check_substitution(self, g_ops, f_ops)?;
        let g_exprs = g_exprs(g_ops);
        let mut acc = DiffOperator::zero(dim);
        for m in &self.terms {
            let mut op = DiffOperator::coefficient(dim, substitute_g(&m.coeffs[0], &g_exprs));
            for (k, &i) in m.word.iter().enumerate() {
                op = op.compose(&f_ops[i])?;
                let z = substitute_g(&m.coeffs[k + 1], &g_exprs);
                if !z.is_one_const() {
                    op = op.compose(&DiffOperator::coefficient(dim, z))?;
                }
            }
            acc = &acc + &op;
        }
        Ok(acc)
    }

    pub fn display_with<'a>(
        &'a self,
        f_names: &'a dyn Fn(usize) -> String,
        g_names: &'a dyn Fn(usize) -> String,
    ) -> NCPolynomialDisplay<'a> {
        NCPolynomialDisplay {
            poly: self,
            f_names,
            g_names,
        }
    }
}

/// Main and second-main parts with respect to a weight vector.
#[derive(Clone, Debug, PartialEq)]
pub struct MainParts {
    pub degree: Option<u32>,
    pub main: NCPolynomial,
    pub second: NCPolynomial,
}

/// Validates arities and returns the common dimension.
pub(crate) fn check_substitution(s: &NCPolynomial, g_ops: &[DiffOperator], f_ops: &[DiffOperator]) -> Result<usize> {
    if g_ops.len() != s.g_count {
        return Err(Error::ArityMismatch {
            expected: s.g_count,
            found: g_ops.len(),
        });
    }
    if f_ops.len() != s.f_count {
        return Err(Error::ArityMismatch {
            expected: s.f_count,
            found: f_ops.len(),
        });
    }
    for (index, g) in g_ops.iter().enumerate() {
        if g.order().unwrap_or(0) > 0 {
            return Err(Error::NotOrderZero { index });
        }
    }
    let dim = g_ops
        .iter()
        .chain(f_ops)
        .map(DiffOperator::dim)
        .next()
        .ok_or_else(|| Error::InvalidArgument("no operators to substitute".into()))?;
    for op in g_ops.iter().chain(f_ops) {
        if op.dim() != dim {
            return Err(Error::DimensionMismatch {
                left: dim,
                right: op.dim(),
            });
        }
    }
    Ok(dim)
}

pub(crate) fn g_exprs(g_ops: &[DiffOperator]) -> Vec<Expr> {
    g_ops.iter().map(|g| g.symbol().constant_term()).collect()
}

/// `Z(G_1(x), …, G_l(x))`.
pub(crate) fn substitute_g(z: &Expr, g: &[Expr]) -> Expr {
    z.substitute(&|j| g[j].clone()).simplify()
}

pub fn default_f_name(i: usize) -> String {
    format!("F{}", i + 1)
}

pub fn default_g_name(j: usize) -> String {
    format!("G{}", j + 1)
}

pub struct NCPolynomialDisplay<'a> {
    poly: &'a NCPolynomial,
    f_names: &'a dyn Fn(usize) -> String,
    g_names: &'a dyn Fn(usize) -> String,
}

fn factor_text(z: &Expr, g_names: &dyn Fn(usize) -> String) -> String {
    let s = z.display_with(g_names).to_string();
    if matches!(z, Expr::Add(_)) {
        format!("({s})")
    } else {
        s
    }
}

impl fmt::Display for NCPolynomialDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, m) in self.poly.terms.iter().enumerate() {
            let (neg, z0) = match negated(&m.coeffs[0]) {
                Some(n) => (true, n),
                None => (false, m.coeffs[0].clone()),
            };
            match (k, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mut parts = Vec::new();
            if !z0.is_one_const() || m.word.is_empty() {
                parts.push(factor_text(&z0, self.g_names));
            }
            for (j, &i) in m.word.iter().enumerate() {
                parts.push((self.f_names)(i));
                let z = &m.coeffs[j + 1];
                if !z.is_one_const() {
                    parts.push(factor_text(z, self.g_names));
                }
            }
            f.write_str(&parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Display for NCPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.display_with(&default_f_name, &default_g_name))
    }
}

impl Serialize for NCPolynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl std::ops::Add for &NCPolynomial {
    type Output = NCPolynomial;
    /// Panics on an arity mismatch; [`NCPolynomial::try_add`] reports it instead.
    fn add(self, rhs: &NCPolynomial) -> NCPolynomial {
        self.try_add(rhs).expect("arities differ")
    }
}

impl std::ops::Sub for &NCPolynomial {
    type Output = NCPolynomial;
    fn sub(self, rhs: &NCPolynomial) -> NCPolynomial {
        self.try_add(&rhs.neg()).expect("arities differ")
    }
}

impl std::ops::Mul for &NCPolynomial {
    type Output = NCPolynomial;
    fn mul(self, rhs: &NCPolynomial) -> NCPolynomial {
        self.try_mul(rhs).expect("arities differ")
    }
}

#[cfg(test)]
mod tests;
