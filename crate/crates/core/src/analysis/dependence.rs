use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::integrable::combine;
use super::linalg::{least_squares, numeric_rank, relative, singular_values, Differentials};
use super::rank::{check_dims, main_symbols, pruned};
use super::PhaseSample;
use crate::config::Config;
use crate::diffop::{DiffOperator, Symbol};
use crate::error::{Error, Result};
use crate::expr::{DomainSpec, ZeroVerdict};
use crate::ncpoly::{CommutativePoly, NCPolynomial};

/// Values of the abelianized main part and its gradient at `MW(pt)`.
struct MainImage {
    degree: Option<u32>,
    poly: CommutativePoly,
    g_vals: Vec<f64>,
    f_vals: Vec<f64>,
}

fn main_image(
    s: &NCPolynomial,
    g_ops: &[DiffOperator],
    f_ops: &[DiffOperator],
    pt: &PhaseSample,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<MainImage> {
    let g_ops = pruned(g_ops, domain, cfg)?;
    let f_ops = pruned(f_ops, domain, cfg)?;
    let weights: Vec<u32> = f_ops
        .iter()
        .map(|f| f.order().ok_or(Error::ZeroOperator))
        .collect::<Result<_>>()?;
    let parts = s.degree_and_main(&weights, &domain.params, cfg)?;
    let eval = |m: &Symbol| m.eval_with(&pt.x, &pt.p, &domain.params, cfg.singular_tol);
    let g_vals = main_symbols(&g_ops).iter().map(eval).collect::<Result<_>>()?;
    let f_vals = main_symbols(&f_ops).iter().map(eval).collect::<Result<_>>()?;
    Ok(MainImage {
        degree: parts.degree,
        poly: parts.main.abelianize(),
        g_vals,
        f_vals,
    })
}

/// Zero test of `S(G, F)` as an operator on a box around `pt.x`.
fn vanishes_near(
    s: &NCPolynomial,
    g_ops: &[DiffOperator],
    f_ops: &[DiffOperator],
    pt: &PhaseSample,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<ZeroVerdict> {
    let op = s.substitute(g_ops, f_ops)?;
    let local = domain.around(&pt.x, cfg.neighborhood);
    Ok(combine(
        op.coefficient_verdicts(&local, cfg)?.into_iter().map(|(_, v)| v),
    ))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CorrelationVerdict {
    RegularCorrelation,
    /// `S` is the zero polynomial.
    ZeroPolynomial,
    /// The abelianized main part has vanishing differential at `MW(pt)`.
    DegenerateGradient,
    /// `S(G, F)` is not the zero operator near `pt`.
    NonVanishing,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorrelationReport {
    pub verdict: CorrelationVerdict,
    pub degree: Option<u32>,
    /// Gradient with respect to `(G_1..G_l, F_1..F_r)`.
    pub gradient: Vec<f64>,
    pub gradient_nonzero: bool,
    pub operator: ZeroVerdict,
}

impl CorrelationReport {
    pub fn passes(&self) -> bool {
        self.verdict == CorrelationVerdict::RegularCorrelation
    }
}

/// Checks that `S` is a regular correlation of `(G, F)` at `pt`: the
/// abelianized main part has nonzero differential at the main-part values
/// and the substituted operator vanishes near `pt`.
pub fn check_regular_correlation(
    s: &NCPolynomial,
    g_ops: &[DiffOperator],
    f_ops: &[DiffOperator],
    pt: &PhaseSample,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<CorrelationReport> {
    let img = main_image(s, g_ops, f_ops, pt, domain, cfg)?;
    let gradient = img.poly.gradient(&img.g_vals, &img.f_vals, &domain.params)?;
    let norm = gradient.iter().map(|v| v * v).sum::<f64>().sqrt();
    let gradient_nonzero = norm > cfg.rank_tol;
    let operator = vanishes_near(s, g_ops, f_ops, pt, domain, cfg)?;
    let verdict = if img.degree.is_none() {
        CorrelationVerdict::ZeroPolynomial
    } else if !operator.is_zero() {
        CorrelationVerdict::NonVanishing
    } else if !gradient_nonzero {
        CorrelationVerdict::DegenerateGradient
    } else {
        CorrelationVerdict::RegularCorrelation
    };
    Ok(CorrelationReport {
        verdict,
        degree: img.degree,
        gradient,
        gradient_nonzero,
        operator,
    })
}

/// Which member of `W ++ Y` each commuting variable `G_j` and each letter
/// `F_i` of the witness polynomials stands for.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariableMap {
    pub g: Vec<usize>,
    pub f: Vec<usize>,
}

impl VariableMap {
    /// Order-0 operators become `G`s, the others `F`s, in list order.
    pub fn by_order(ops: &[DiffOperator]) -> VariableMap {
        let (mut g, mut f) = (Vec::new(), Vec::new());
        for (k, op) in ops.iter().enumerate() {
            if op.order().unwrap_or(0) == 0 {
                g.push(k);
            } else {
                f.push(k);
            }
        }
        VariableMap { g, f }
    }

    fn split(&self, ops: &[DiffOperator]) -> Result<(Vec<DiffOperator>, Vec<DiffOperator>)> {
        let pick = |ix: &[usize]| -> Result<Vec<DiffOperator>> {
            ix.iter()
                .map(|&k| {
                    ops.get(k).cloned().ok_or(Error::ArityMismatch {
                        expected: ops.len(),
                        found: k + 1,
                    })
                })
                .collect()
        };
        Ok((pick(&self.g)?, pick(&self.f)?))
    }

    /// Gradient slot of operator `k`, if it occurs.
    fn slot(&self, k: usize) -> Option<usize> {
        if let Some(j) = self.g.iter().position(|&v| v == k) {
            return Some(j);
        }
        self.f.iter().position(|&v| v == k).map(|i| self.g.len() + i)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpanReport {
    /// Relative residual of each `d(MW_i)` against `span{d(MY_h)}`.
    pub residuals: Vec<f64>,
    pub passes: bool,
    pub rank_w: usize,
    pub rank_y: usize,
    /// `r_W ≤ r_Y`, implied by containment.
    pub rank_bound_holds: bool,
}

/// Projects every `d(MW_i)(pt)` onto `span{d(MY_h)(pt)}`.
pub fn check_span_containment(
    w: &[DiffOperator],
    y: &[DiffOperator],
    pt: &PhaseSample,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<SpanReport> {
    check_dims(w, domain)?;
    check_dims(y, domain)?;
    let dw = Differentials::new(domain.dim, &main_symbols(&pruned(w, domain, cfg)?)).at(
        pt,
        &domain.params,
        cfg.singular_tol,
    )?;
    let dy = Differentials::new(domain.dim, &main_symbols(&pruned(y, domain, cfg)?)).at(
        pt,
        &domain.params,
        cfg.singular_tol,
    )?;
    let basis = dy.transpose();
    let residuals: Vec<f64> = (0..dw.nrows())
        .map(|i| {
            let v: DVector<f64> = dw.row(i).transpose();
            let (_, r) = least_squares(&basis, &v, cfg.rank_tol);
            relative(r, v.norm())
        })
        .collect();
    let rank_w = numeric_rank(&singular_values(&dw), cfg.rank_tol);
    let rank_y = numeric_rank(&singular_values(&dy), cfg.rank_tol);
    Ok(SpanReport {
        passes: residuals.iter().all(|&r| r < cfg.residual_tol),
        residuals,
        rank_w,
        rank_y,
        rank_bound_holds: rank_w <= rank_y,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum DependenceVerdict {
    Dependent,
    /// `det ∂(ℳS)_C/∂W` vanishes at `(W̄, Ȳ)`.
    SingularJacobian,
    /// Some `S_i(W, Y)` is not the zero operator.
    NonVanishing,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DependenceReport {
    pub verdict: DependenceVerdict,
    /// `∂(ℳS_i)_C/∂W_k` at the main-part values.
    pub jacobian: Vec<Vec<f64>>,
    pub determinant: f64,
    pub relations: Vec<ZeroVerdict>,
    /// Span containment `d(MW) ⊂ span d(MY)`, checked once the witness holds.
    pub containment: Option<SpanReport>,
}

impl DependenceReport {
    pub fn passes(&self) -> bool {
        self.verdict == DependenceVerdict::Dependent
    }
}

/// Verifies user-supplied witnesses `S_1..S_s` for the algebraic dependence
/// of `W` on `Y` at `pt`. The variables of every `S_i` refer to `W ++ Y`
/// through `map`.
pub fn check_algebraic_dependence(
    polys: &[NCPolynomial],
    map: &VariableMap,
    w: &[DiffOperator],
    y: &[DiffOperator],
    pt: &PhaseSample,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<DependenceReport> {
    check_dims(w, domain)?;
    if polys.len() != w.len() {
        return Err(Error::ArityMismatch {
            expected: w.len(),
            found: polys.len(),
        });
    }
    let all: Vec<DiffOperator> = w.iter().chain(y).cloned().collect();
    let (g_ops, f_ops) = map.split(&all)?;
    let s = w.len();
    let mut jac = DMatrix::zeros(s, s);
    let mut relations = Vec::with_capacity(s);
    for (i, poly) in polys.iter().enumerate() {
        let img = main_image(poly, &g_ops, &f_ops, pt, domain, cfg)?;
        let grad = img.poly.gradient(&img.g_vals, &img.f_vals, &domain.params)?;
        for k in 0..s {
            if let Some(slot) = map.slot(k) {
                jac[(i, k)] = grad[slot];
            }
        }
        relations.push(vanishes_near(poly, &g_ops, &f_ops, pt, domain, cfg)?);
    }
    let determinant = jac.determinant();
    let verdict = if relations.iter().any(|r| !r.is_zero()) {
        DependenceVerdict::NonVanishing
    } else if determinant.abs() <= cfg.rank_tol {
        DependenceVerdict::SingularJacobian
    } else {
        DependenceVerdict::Dependent
    };
    let containment = if verdict == DependenceVerdict::Dependent {
        Some(check_span_containment(w, y, pt, domain, cfg)?)
    } else {
        None
    };
    Ok(DependenceReport {
        verdict,
        jacobian: (0..s).map(|i| jac.row(i).iter().copied().collect()).collect(),
        determinant,
        relations,
        containment,
    })
}

/// One step `W ⊑ Y` of a containment chain.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainLink {
    pub polys: Vec<NCPolynomial>,
    pub map: VariableMap,
    pub w: Vec<DiffOperator>,
    pub y: Vec<DiffOperator>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainReport {
    pub links: Vec<DependenceReport>,
    /// Each link's `Y` is the next link's `W`.
    pub connected: bool,
    pub passes: bool,
}

/// Verifies a chain of dependence witnesses link by link.
pub fn check_containment_chain(
    chain: &[ChainLink],
    pt: &PhaseSample,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<ChainReport> {
    let links = chain
        .iter()
        .map(|l| check_algebraic_dependence(&l.polys, &l.map, &l.w, &l.y, pt, domain, cfg))
        .collect::<Result<Vec<_>>>()?;
    let connected = chain.windows(2).all(|p| p[0].y == p[1].w);
    let passes = connected && !links.is_empty() && links.iter().all(DependenceReport::passes);
    Ok(ChainReport {
        links,
        connected,
        passes,
    })
}
