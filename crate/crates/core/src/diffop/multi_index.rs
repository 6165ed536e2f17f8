use std::fmt;

use num_bigint::{BigInt, BigUint};
use serde::Serialize;

use crate::expr::Rational;

/// Exponent vector `α ∈ ℤ₊ⁿ` of a momentum monomial `p^α`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(exponents: Vec<u32>) -> Self {
        MultiIndex(exponents)
    }

    pub fn zero(dim: usize) -> Self {
        MultiIndex(vec![0; dim])
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = vec![0; dim];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    /// `|α|`.
    pub fn order(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// `α!`, exact.
    pub fn factorial(&self) -> BigUint {
        self.0.iter().fold(BigUint::from(1u32), |acc, &a| {
            (1..=a).fold(acc, |acc, k| acc * BigUint::from(k))
        })
    }

    /// `Π C(αᵢ, βᵢ)`, zero unless `β ≤ α`.
    pub fn binomial(&self, beta: &MultiIndex) -> BigUint {
        self.0.iter().zip(&beta.0).fold(BigUint::from(1u32), |acc, (&a, &b)| {
            if b > a {
                BigUint::from(0u32)
            } else {
                acc * num_integer::binomial(BigUint::from(a), BigUint::from(b))
            }
        })
    }

    pub fn binomial_rational(&self, beta: &MultiIndex) -> Rational {
        Rational::from_bigint(BigInt::from(self.binomial(beta)))
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    /// `α − eᵢ`, if nonnegative.
    pub fn lower(&self, i: usize) -> Option<MultiIndex> {
        if self.0[i] == 0 {
            return None;
        }
        let mut v = self.0.clone();
        v[i] -= 1;
        Some(MultiIndex(v))
    }

    pub fn raise(&self, i: usize) -> MultiIndex {
        let mut v = self.0.clone();
        v[i] += 1;
        MultiIndex(v)
    }

    /// Every `β` with `β ≤ α` componentwise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.dim())];
        for &a in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for prefix in &out {
                for b in 0..=a {
                    let mut v: Vec<u32> = prefix.clone();
                    v.push(b);
                    next.push(v);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// Every multi-index of dimension `dim` with `|α| = order`.
    pub fn of_order(dim: usize, order: u32) -> Vec<MultiIndex> {
        fn rec(dim: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if prefix.len() + 1 == dim {
                prefix.push(left);
                out.push(MultiIndex(prefix.clone()));
                prefix.pop();
                return;
            }
            for a in (0..=left).rev() {
                prefix.push(a);
                rec(dim, left - a, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if dim == 0 {
            if order == 0 {
                out.push(MultiIndex(Vec::new()));
            }
            return out;
        }
        rec(dim, order, &mut Vec::new(), &mut out);
        out
    }

    /// Inserts `k` as a new leading exponent.
    pub fn prepend(&self, k: u32) -> MultiIndex {
        let mut v = Vec::with_capacity(self.dim() + 1);
        v.push(k);
        v.extend_from_slice(&self.0);
        MultiIndex(v)
    }

    /// Drops the leading exponent.
    pub fn tail(&self) -> MultiIndex {
        MultiIndex(self.0[1..].to_vec())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}
