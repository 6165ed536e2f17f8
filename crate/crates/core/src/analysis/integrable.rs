use serde::Serialize;

use super::poisson_bracket;
use super::rank::{check_dims, main_symbols, pruned, quasi_independence, RankReport};
use crate::config::Config;
use crate::diffop::{DiffOperator, Symbol};
use crate::error::{Error, Result};
use crate::expr::{is_zero_with, DomainSpec, ZeroVerdict};

/// Worst verdict over a list: a nonzero witness wins, then the largest numeric residue.
pub(crate) fn combine(verdicts: impl IntoIterator<Item = ZeroVerdict>) -> ZeroVerdict {
    let mut out = ZeroVerdict::SymbolicZero;
    for v in verdicts {
        out = match (out, v) {
            (nz @ ZeroVerdict::NonZero { .. }, _) => nz,
            (_, nz @ ZeroVerdict::NonZero { .. }) => nz,
            (ZeroVerdict::NumericZero { max_abs: a }, ZeroVerdict::NumericZero { max_abs: b }) => {
                ZeroVerdict::NumericZero { max_abs: a.max(b) }
            }
            (ZeroVerdict::SymbolicZero, v) | (v, ZeroVerdict::SymbolicZero) => v,
        };
    }
    out
}

pub(crate) fn symbol_verdict(s: &Symbol, domain: &DomainSpec, cfg: &Config) -> Result<ZeroVerdict> {
    let vs = s
        .terms()
        .values()
        .map(|c| is_zero_with(c, domain, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(combine(vs))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutationEntry {
    pub i: usize,
    pub j: usize,
    pub verdict: ZeroVerdict,
}

/// Verdicts for `[W_i, W_j]` with `i < k` (zero based) and `j > i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommutationMatrix {
    pub central: usize,
    pub size: usize,
    pub entries: Vec<CommutationEntry>,
    pub all_zero: bool,
}

impl CommutationMatrix {
    pub fn failing(&self) -> Vec<(usize, usize)> {
        self.entries
            .iter()
            .filter(|e| !e.verdict.is_zero())
            .map(|e| (e.i, e.j))
            .collect()
    }
}

fn pairs(k: usize, size: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..k).flat_map(move |i| (i + 1..size).map(move |j| (i, j)))
}

fn check_central(k: usize, size: usize) -> Result<()> {
    if k == 0 || k > size {
        return Err(Error::InvalidArgument(format!(
            "central count {k} must lie in 1..={size}"
        )));
    }
    Ok(())
}

/// `[W_i, W_j] = 0` for the first `k` operators against all others, each
/// commutator tested coefficient-wise with the numeric zero test.
pub fn check_commutation(
    ops: &[DiffOperator],
    k: usize,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<CommutationMatrix> {
    check_dims(ops, domain)?;
    check_central(k, ops.len())?;
    let mut entries = Vec::new();
    for (i, j) in pairs(k, ops.len()) {
        let c = ops[i].commutator(&ops[j])?;
        let verdict = combine(c.coefficient_verdicts(domain, cfg)?.into_iter().map(|(_, v)| v));
        entries.push(CommutationEntry { i, j, verdict });
    }
    let all_zero = entries.iter().all(|e| e.verdict.is_zero());
    Ok(CommutationMatrix {
        central: k,
        size: ops.len(),
        entries,
        all_zero,
    })
}

/// Same pattern as [`check_commutation`] for `{MW_i, MW_j}`.
pub fn check_classical_commutation(
    ops: &[DiffOperator],
    k: usize,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<CommutationMatrix> {
    check_dims(ops, domain)?;
    check_central(k, ops.len())?;
    let mains = main_symbols(&pruned(ops, domain, cfg)?);
    let mut entries = Vec::new();
    for (i, j) in pairs(k, ops.len()) {
        let b = poisson_bracket(&mains[i], &mains[j])?;
        entries.push(CommutationEntry {
            i,
            j,
            verdict: symbol_verdict(&b, domain, cfg)?,
        });
    }
    let all_zero = entries.iter().all(|e| e.verdict.is_zero());
    Ok(CommutationMatrix {
        central: k,
        size: ops.len(),
        entries,
        all_zero,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum IntegrableVerdict {
    IntegrableAtSampledPoints,
    NotCommuting { pairs: Vec<(usize, usize)> },
    NotQuasiIndependent { full_rank_fraction: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IntegrableReport {
    pub verdict: IntegrableVerdict,
    pub dim: usize,
    pub central: usize,
    pub commutation: CommutationMatrix,
    /// `{MW_i, MW_j}` for the same pairs; zero whenever the commutators vanish.
    pub classical: CommutationMatrix,
    pub rank: RankReport,
    pub warnings: Vec<String>,
}

impl IntegrableReport {
    pub fn passes(&self) -> bool {
        self.verdict == IntegrableVerdict::IntegrableAtSampledPoints
    }
}

/// Commutation of the `k` central operators with the rest, plus sampled
/// quasi-independence of the whole set.
pub fn check_integrable_set(
    ops: &[DiffOperator],
    k: usize,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<IntegrableReport> {
    check_dims(ops, domain)?;
    let n = domain.dim;
    if k == 0 || k > n {
        return Err(Error::InvalidArgument(format!("central count {k} must lie in 1..={n}")));
    }
    check_central(k, ops.len())?;
    let mut warnings = Vec::new();
    if ops.len() != 2 * n - k {
        warnings.push(format!(
            "set has {} operators, expected 2n-k = {}",
            ops.len(),
            2 * n - k
        ));
    }
    if k + ops.len() > 2 * n {
        warnings.push(format!(
            "the {k} central operators and the {} operators of the set exceed the bound l+s <= 2n = {}",
            ops.len(),
            2 * n
        ));
    }
    let commutation = check_commutation(ops, k, domain, cfg)?;
    let classical = check_classical_commutation(ops, k, domain, cfg)?;
    if commutation.all_zero && !classical.all_zero {
        warnings.push("operators commute but main-part Poisson brackets do not vanish".into());
    }
    let rank = quasi_independence(ops, domain, cfg)?;
    let verdict = if !commutation.all_zero {
        IntegrableVerdict::NotCommuting {
            pairs: commutation.failing(),
        }
    } else if !rank.is_quasi_independent() {
        IntegrableVerdict::NotQuasiIndependent {
            full_rank_fraction: rank.full_rank_fraction,
        }
    } else {
        IntegrableVerdict::IntegrableAtSampledPoints
    };
    Ok(IntegrableReport {
        verdict,
        dim: n,
        central: k,
        commutation,
        classical,
        rank,
        warnings,
    })
}

/// Two commuting, separately quasi-independent families obey `l + s ≤ 2n`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FamilyBoundReport {
    pub l: usize,
    pub s: usize,
    pub dim: usize,
    pub commute: bool,
    pub first_independent: bool,
    pub second_independent: bool,
    /// True when the hypotheses hold and `l + s > 2n`.
    pub violation: bool,
}

pub fn check_family_bound(
    first: &[DiffOperator],
    second: &[DiffOperator],
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<FamilyBoundReport> {
    check_dims(first, domain)?;
    check_dims(second, domain)?;
    let mut commute = true;
    'outer: for a in first {
        for b in second {
            if !a.commutator(b)?.is_zero_on(domain, cfg)? {
                commute = false;
                break 'outer;
            }
        }
    }
    let first_independent = quasi_independence(first, domain, cfg)?.is_quasi_independent();
    let second_independent = quasi_independence(second, domain, cfg)?.is_quasi_independent();
    let (l, s) = (first.len(), second.len());
    Ok(FamilyBoundReport {
        l,
        s,
        dim: domain.dim,
        commute,
        first_independent,
        second_independent,
        violation: commute && first_independent && second_independent && l + s > 2 * domain.dim,
    })
}

/// Top part of a commutator against the bracket of the main symbols.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BridgeReport {
    pub orders: (u32, u32),
    pub commutator_order: Option<u32>,
    /// `ord [A, B] ≤ k + l − 1`.
    pub order_bound_holds: bool,
    /// `H_{k+l−1}([A, B])^smb − {MA, MB}`.
    pub residual: ZeroVerdict,
}

impl BridgeReport {
    pub fn passes(&self) -> bool {
        self.order_bound_holds && self.residual.is_zero()
    }
}

/// Compares the order `k + l − 1` part of `[A, B]` with `{MA, MB}`, where
/// `k = ord A` and `l = ord B` after pruning.
pub fn check_bracket_bridge(
    a: &DiffOperator,
    b: &DiffOperator,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<BridgeReport> {
    let ops = pruned(&[a.clone(), b.clone()], domain, cfg)?;
    let (k, l) = (
        ops[0].order().ok_or(Error::ZeroOperator)?,
        ops[1].order().ok_or(Error::ZeroOperator)?,
    );
    let c = ops[0].commutator(&ops[1])?.prune(domain, cfg)?;
    let mains = main_symbols(&ops);
    let bracket = poisson_bracket(&mains[0], &mains[1])?;
    let top = match (k + l).checked_sub(1) {
        Some(d) => c.homogeneous_part(d).into_symbol(),
        None => Symbol::zero(domain.dim),
    };
    let commutator_order = c.order();
    Ok(BridgeReport {
        orders: (k, l),
        commutator_order,
        order_bound_holds: !matches!(commutator_order, Some(o) if o >= k + l),
        residual: symbol_verdict(&(&top - &bracket), domain, cfg)?,
    })
}
