//! Normal ordering by repeated use of `∂_i ∘ f = f ∘ ∂_i + ∂f/∂x_i`.
//!
//! This route never touches the symbol formula, so it serves as an
//! independent check of [`DiffOperator::compose`](super::DiffOperator::compose).

use super::{DiffOperator, MultiIndex};
use crate::error::{Error, Result};
use crate::expr::Expr;

/// One factor of an operator word.
#[derive(Clone, Debug, PartialEq)]
pub enum Factor {
    /// Multiplication by a coefficient.
    Coeff(Expr),
    /// `∂/∂x_i`.
    P(usize),
}

/// Standard representation of the product `factors[0] ∘ factors[1] ∘ …`.
pub fn normalize(dim: usize, factors: &[Factor]) -> Result<DiffOperator> {
    for f in factors {
        match f {
            Factor::P(i) if *i >= dim => {
                return Err(Error::VariableOutOfRange { index: *i, dim });
            }
            Factor::Coeff(e) if e.var_bound() > dim => {
                return Err(Error::VariableOutOfRange {
                    index: e.var_bound() - 1,
                    dim,
                });
            }
            _ => {}
        }
    }
    let mut pending = vec![factors.to_vec()];
    let mut done = Vec::new();
    while let Some(word) = pending.pop() {
        let swap = word
            .windows(2)
            .position(|w| matches!(w, [Factor::P(_), Factor::Coeff(_)]));
        match swap {
            None => done.push(ordered_term(dim, &word)),
            Some(k) => {
                let (Factor::P(i), Factor::Coeff(f)) = (&word[k], &word[k + 1]) else {
                    unreachable!()
                };
                let (i, f) = (*i, f.clone());
                let df = f.derivative(i);
                let mut swapped = word.clone();
                swapped[k] = Factor::Coeff(f);
                swapped[k + 1] = Factor::P(i);
                if !df.is_zero_const() {
                    let mut differentiated = word[..k].to_vec();
                    differentiated.push(Factor::Coeff(df));
                    differentiated.extend_from_slice(&word[k + 2..]);
                    pending.push(differentiated);
                }
                pending.push(swapped);
            }
        }
    }
    Ok(DiffOperator::from_terms(dim, done))
}

/// A word with all coefficients to the left of all derivatives.
fn ordered_term(dim: usize, word: &[Factor]) -> (MultiIndex, Expr) {
    let mut alpha = MultiIndex::zero(dim);
    let mut coeffs = Vec::new();
    for f in word {
        match f {
            Factor::Coeff(e) => coeffs.push(e.clone()),
            Factor::P(i) => alpha = alpha.raise(*i),
        }
    }
    (alpha, Expr::product(coeffs))
}

/// The factors `A_α ∂^α` of one term, derivatives in index order.
pub fn term_factors(alpha: &MultiIndex, coeff: &Expr) -> Vec<Factor> {
    let mut out = vec![Factor::Coeff(coeff.clone())];
    for (i, &k) in alpha.as_slice().iter().enumerate() {
        out.extend((0..k).map(|_| Factor::P(i)));
    }
    out
}

/// `A ∘ B` by normal ordering every product of a term of `A` with a term of `B`.
pub fn compose_by_normalization(a: &DiffOperator, b: &DiffOperator) -> Result<DiffOperator> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let mut acc = DiffOperator::zero(a.dim());
    for (alpha, ca) in a.terms() {
        for (beta, cb) in b.terms() {
            let mut word = term_factors(alpha, ca);
            word.extend(term_factors(beta, cb));
            acc = acc.try_add(&normalize(a.dim(), &word)?)?;
        }
    }
    Ok(acc)
}
