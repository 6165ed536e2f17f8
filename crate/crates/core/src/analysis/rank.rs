use std::collections::BTreeMap;

use serde::Serialize;

use super::linalg::{numeric_rank, singular_values, Differentials};
use super::sample::collect_samples;
use super::PhaseSample;
use crate::config::Config;
use crate::diffop::{DiffOperator, Symbol};
use crate::error::{Error, Result};
use crate::expr::{rng_from_seed, DomainSpec};

/// Rank of the Jacobian of the main-part symbols at one point.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PointRank {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub singular_values: Vec<f64>,
    pub rank: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RankVerdict {
    GloballyQuasiIndependent,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RankReport {
    /// Number of operators `s`.
    pub size: usize,
    pub dim: usize,
    pub points: Vec<PointRank>,
    pub rank_histogram: BTreeMap<usize, usize>,
    pub full_rank_fraction: f64,
    pub verdict: RankVerdict,
    pub tolerance: f64,
    pub seed: u64,
}

impl RankReport {
    pub fn is_quasi_independent(&self) -> bool {
        self.verdict == RankVerdict::GloballyQuasiIndependent
    }
}

/// Lower and upper bound for `rank W` at a point: `r_W ≤ rank W ≤ s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankBracket {
    pub lower: usize,
    pub upper: usize,
}

pub(crate) fn check_dims(ops: &[DiffOperator], domain: &DomainSpec) -> Result<()> {
    if ops.is_empty() {
        return Err(Error::InvalidArgument("empty operator list".into()));
    }
    for op in ops {
        if op.dim() != domain.dim {
            return Err(Error::DimensionMismatch {
                left: domain.dim,
                right: op.dim(),
            });
        }
    }
    Ok(())
}

/// Operators with numerically vanishing coefficients removed, so that main
/// parts are not decided by coefficients that only fail to simplify.
pub(crate) fn pruned(ops: &[DiffOperator], domain: &DomainSpec, cfg: &Config) -> Result<Vec<DiffOperator>> {
    ops.iter().map(|op| op.prune(domain, cfg)).collect()
}

pub(crate) fn main_symbols(ops: &[DiffOperator]) -> Vec<Symbol> {
    ops.iter().map(|op| op.main_part().into_symbol()).collect()
}

/// Jacobian of `(MW_1..MW_s)` with respect to `(x, p)`.
pub(crate) struct MainJacobian {
    diffs: Differentials,
}

impl MainJacobian {
    pub fn new(ops: &[DiffOperator], domain: &DomainSpec, cfg: &Config) -> Result<Self> {
        check_dims(ops, domain)?;
        let ops = pruned(ops, domain, cfg)?;
        Ok(MainJacobian {
            diffs: Differentials::new(domain.dim, &main_symbols(&ops)),
        })
    }

    pub fn rank_at(&self, pt: &PhaseSample, domain: &DomainSpec, cfg: &Config) -> Result<PointRank> {
        point_rank(&self.diffs, pt, domain, cfg)
    }
}

fn point_rank(diffs: &Differentials, pt: &PhaseSample, domain: &DomainSpec, cfg: &Config) -> Result<PointRank> {
    let j = diffs.at(pt, &domain.params, cfg.singular_tol)?;
    let sv = singular_values(&j);
    Ok(PointRank {
        x: pt.x.clone(),
        p: pt.p.clone(),
        rank: numeric_rank(&sv, cfg.rank_tol),
        singular_values: sv,
    })
}

/// `r_W(pt)`: rank of the `s × 2n` Jacobian of the main-part symbols.
pub fn main_dimension(ops: &[DiffOperator], pt: &PhaseSample, domain: &DomainSpec, cfg: &Config) -> Result<PointRank> {
    MainJacobian::new(ops, domain, cfg)?.rank_at(pt, domain, cfg)
}

/// Main dimension at `cfg.samples` points; globally quasi-independent when
/// the rank equals `s` at a fraction of at least `cfg.global_fraction`.
pub fn quasi_independence(ops: &[DiffOperator], domain: &DomainSpec, cfg: &Config) -> Result<RankReport> {
    let jac = MainJacobian::new(ops, domain, cfg)?;
    sampled_ranks(&jac.diffs, ops.len(), domain, cfg)
}

/// Like [`quasi_independence`], but for the full symbols rather than their
/// main parts: functional independence of `(F_1..F_s)` at sampled points.
pub fn symbol_independence(ops: &[DiffOperator], domain: &DomainSpec, cfg: &Config) -> Result<RankReport> {
    check_dims(ops, domain)?;
    let symbols: Vec<Symbol> = pruned(ops, domain, cfg)?
        .into_iter()
        .map(DiffOperator::into_symbol)
        .collect();
    sampled_ranks(&Differentials::new(domain.dim, &symbols), ops.len(), domain, cfg)
}

fn sampled_ranks(diffs: &Differentials, s: usize, domain: &DomainSpec, cfg: &Config) -> Result<RankReport> {
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let points = collect_samples(domain, cfg.seed, cfg.samples, |pt| point_rank(diffs, pt, domain, cfg))?;
    let mut hist = BTreeMap::new();
    for pr in &points {
        *hist.entry(pr.rank).or_insert(0) += 1;
    }
    let full = points.iter().filter(|pr| pr.rank == s).count();
    let fraction = full as f64 / points.len() as f64;
    Ok(RankReport {
        size: s,
        dim: domain.dim,
        rank_histogram: hist,
        full_rank_fraction: fraction,
        verdict: if fraction >= cfg.global_fraction {
            RankVerdict::GloballyQuasiIndependent
        } else {
            RankVerdict::Degenerate
        },
        points,
        tolerance: cfg.rank_tol,
        seed: cfg.seed,
    })
}

/// Only the bracket `[r_W(pt), s]` is reported; the exact minimum over
/// witness sets is not computed.
pub fn rank_bracket(ops: &[DiffOperator], pt: &PhaseSample, domain: &DomainSpec, cfg: &Config) -> Result<RankBracket> {
    Ok(RankBracket {
        lower: main_dimension(ops, pt, domain, cfg)?.rank,
        upper: ops.len(),
    })
}

/// Main dimension at `count` points within `cfg.perturbation` of `pt`.
pub fn perturbed_ranks(
    ops: &[DiffOperator],
    pt: &PhaseSample,
    count: usize,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<Vec<PointRank>> {
    let jac = MainJacobian::new(ops, domain, cfg)?;
    let mut rng = rng_from_seed(cfg.seed);
    let mut out = Vec::with_capacity(count);
    let mut attempts = 0;
    while out.len() < count {
        attempts += 1;
        if attempts > crate::expr::MAX_ATTEMPTS * count.max(1) {
            return Err(Error::SamplingExhausted { attempts });
        }
        let q = pt.perturbed(&mut rng, cfg.perturbation, domain)?;
        match jac.rank_at(&q, domain, cfg) {
            Ok(r) => out.push(r),
            Err(Error::Singular(_)) | Err(Error::Domain(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
