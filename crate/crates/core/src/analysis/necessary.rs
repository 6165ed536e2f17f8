use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::Serialize;

use super::linalg::{
    columns, least_squares, numeric_rank, relative, residual_vector, rows_of, singular_values, Differentials,
};
use super::rank::{check_dims, main_symbols, pruned};
use super::{poisson_semibracket, PhaseSample};
use crate::config::Config;
use crate::diffop::{DiffOperator, Symbol};
use crate::error::{Error, Result};
use crate::expr::DomainSpec;

fn second_symbols(ops: &[DiffOperator]) -> Vec<Symbol> {
    ops.iter().map(|op| op.second_main_part().into_symbol()).collect()
}

/// `{MW_i, MW_j}⁺` for all ordered pairs, row-major.
fn semibrackets(mains: &[Symbol]) -> Result<Vec<Symbol>> {
    let mut out = Vec::with_capacity(mains.len() * mains.len());
    for a in mains {
        for b in mains {
            out.push(poisson_semibracket(a, b)?);
        }
    }
    Ok(out)
}

/// Differentials of `MW`, `M'W` and `W⁺` at a point.
struct Layers {
    main: DMatrix<f64>,
    second: DMatrix<f64>,
    semi: DMatrix<f64>,
}

fn layers(ops: &[DiffOperator], pt: &PhaseSample, domain: &DomainSpec, cfg: &Config) -> Result<Layers> {
    check_dims(ops, domain)?;
    let ops = pruned(ops, domain, cfg)?;
    let mains = main_symbols(&ops);
    let at = |fs: &[Symbol]| Differentials::new(domain.dim, fs).at(pt, &domain.params, cfg.singular_tol);
    Ok(Layers {
        main: at(&mains)?,
        second: at(&second_symbols(&ops))?,
        semi: at(&semibrackets(&mains)?)?,
    })
}

/// `Σ γ_i d(M'W_i)` at `pt`, ordered `(dx_1..dx_n, dp_1..dp_n)`.
pub fn second_main_covector(
    ops: &[DiffOperator],
    gamma: &[f64],
    pt: &PhaseSample,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<Vec<f64>> {
    if gamma.len() != ops.len() {
        return Err(Error::ArityMismatch {
            expected: ops.len(),
            found: gamma.len(),
        });
    }
    check_dims(ops, domain)?;
    let ops = pruned(ops, domain, cfg)?;
    let d = Differentials::new(domain.dim, &second_symbols(&ops)).at(pt, &domain.params, cfg.singular_tol)?;
    let g = DVector::from_column_slice(gamma);
    Ok((d.transpose() * g).iter().copied().collect())
}

/// Unit vector spanning the left kernel of `J` (eigenvector of `J Jᵀ` for the
/// smallest eigenvalue), sign fixed so the first nonzero entry is positive.
fn kernel_direction(j: &DMatrix<f64>) -> Vec<f64> {
    let jjt = j * j.transpose();
    let eig = SymmetricEigen::new(jjt);
    let k = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .unwrap_or(0);
    let mut g: Vec<f64> = eig.eigenvectors.column(k).iter().copied().collect();
    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        g.iter_mut().for_each(|v| *v /= norm);
    }
    let scale = g.iter().map(|v| v.abs()).fold(0.0, f64::max);
    if let Some(first) = g.iter().find(|v| v.abs() > 1e-12 * scale.max(f64::MIN_POSITIVE)) {
        if *first < 0.0 {
            g.iter_mut().for_each(|v| *v = -*v);
        }
    }
    g
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum NecessaryVerdict {
    PassesNecessaryCondition,
    /// `witness` is the component of `v` outside `L`.
    ViolatesNecessaryCondition {
        witness: Vec<f64>,
    },
    /// The main dimension is not `s − 1`.
    NotApplicable {
        rank: usize,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NecessaryReport {
    pub verdict: NecessaryVerdict,
    pub size: usize,
    pub rank: usize,
    pub gamma: Vec<f64>,
    /// `v = Σ γ_i d(M'W_i)`.
    pub covector: Vec<f64>,
    /// Distance from `v` to `L`, relative to `Σ |γ_i| |d(M'W_i)|`.
    pub residual: f64,
    pub subspace_dim: usize,
}

impl NecessaryReport {
    pub fn passes(&self) -> bool {
        self.verdict == NecessaryVerdict::PassesNecessaryCondition
    }
}

/// When `r_W(pt) = s − 1`: the covector `v = Σ γ_i d(M'W_i)`, with `γ`
/// spanning the relation `Σ γ_i d(MW_i) = 0`, must lie in
/// `L = span{d(MW_i), d{MW_i, MW_j}⁺}` for `W` to be regularly dependent.
pub fn check_necessary_dependence_condition(
    ops: &[DiffOperator],
    pt: &PhaseSample,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<NecessaryReport> {
    let s = ops.len();
    let l = layers(ops, pt, domain, cfg)?;
    let rank = numeric_rank(&singular_values(&l.main), cfg.rank_tol);
    if rank + 1 != s {
        return Ok(NecessaryReport {
            verdict: NecessaryVerdict::NotApplicable { rank },
            size: s,
            rank,
            gamma: Vec::new(),
            covector: Vec::new(),
            residual: 0.0,
            subspace_dim: 0,
        });
    }
    let gamma = kernel_direction(&l.main);
    let g = DVector::from_column_slice(&gamma);
    let v: DVector<f64> = l.second.transpose() * &g;
    let scale: f64 = gamma
        .iter()
        .zip(rows_of(&l.second))
        .map(|(c, row)| c.abs() * row.norm())
        .sum();
    let mut span = rows_of(&l.main);
    span.extend(rows_of(&l.semi));
    let basis = columns(&span, 2 * domain.dim);
    let subspace_dim = numeric_rank(&singular_values(&basis), cfg.rank_tol);
    let r = residual_vector(&basis, &v, cfg.rank_tol);
    let residual = relative(r.norm(), scale);
    let verdict = if residual < cfg.residual_tol {
        NecessaryVerdict::PassesNecessaryCondition
    } else {
        NecessaryVerdict::ViolatesNecessaryCondition {
            witness: r.iter().copied().collect(),
        }
    };
    Ok(NecessaryReport {
        verdict,
        size: s,
        rank,
        gamma,
        covector: v.iter().copied().collect(),
        residual,
        subspace_dim,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Preind2Report {
    pub passes: bool,
    /// `a_{ih}` from `d(MW_i) = Σ_h a_{ih} d(MY_h)`.
    pub a: Vec<Vec<f64>>,
    /// The `d(MY_h)` are independent, so `a` is unique.
    pub a_unique: bool,
    pub a1_residuals: Vec<f64>,
    pub a2_residuals: Vec<f64>,
    /// Row-major over pairs `(i, j)`.
    pub a3_residuals: Vec<f64>,
}

/// Necessary conditions for `W ⊑ Y` at `pt` relating the differentials of
/// `MW`, `M'W` and `W⁺` to those of `MY`, `M'Y` and `Y⁺` with one shared
/// coefficient matrix `a`:
///
/// - `d(MW_i) = Σ a_{ih} d(MY_h)`
/// - `d(M'W_i) − Σ a_{ih} d(M'Y_h) ∈ span{d(MY_h), dY⁺_{hk}}`
/// - `dW⁺_{ij} − Σ a_{ih} a_{jk} dY⁺_{hk} ∈ span{d(MY_h)}`
///
/// `a` is the least-squares (minimum-norm) solution of the first relation.
pub fn check_preind2_relations(
    w: &[DiffOperator],
    y: &[DiffOperator],
    pt: &PhaseSample,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<Preind2Report> {
    let lw = layers(w, pt, domain, cfg)?;
    let ly = layers(y, pt, domain, cfg)?;
    let (s, r, len) = (w.len(), y.len(), 2 * domain.dim);
    let tol = cfg.rank_tol;

    let dmy = rows_of(&ly.main);
    let dm2y = rows_of(&ly.second);
    let dyp = rows_of(&ly.semi);
    let basis_my = columns(&dmy, len);
    let a_unique = numeric_rank(&singular_values(&basis_my), tol) == r;

    let mut a = vec![vec![0.0; r]; s];
    let mut a1 = Vec::with_capacity(s);
    for (i, row) in rows_of(&lw.main).into_iter().enumerate() {
        let (sol, res) = least_squares(&basis_my, &row, tol);
        a[i] = sol.iter().copied().collect();
        a1.push(relative(res, row.norm()));
    }

    let mut span2 = dmy.clone();
    span2.extend(dyp.iter().cloned());
    let basis2 = columns(&span2, len);
    let mut a2 = Vec::with_capacity(s);
    for (i, row) in rows_of(&lw.second).into_iter().enumerate() {
        let mut target = row.clone();
        let mut scale = row.norm();
        for h in 0..r {
            target -= &dm2y[h] * a[i][h];
            scale += a[i][h].abs() * dm2y[h].norm();
        }
        let (_, res) = least_squares(&basis2, &target, tol);
        a2.push(relative(res, scale));
    }

    let wp = rows_of(&lw.semi);
    let mut a3 = Vec::with_capacity(s * s);
    for i in 0..s {
        for j in 0..s {
            let row = &wp[i * s + j];
            let mut target = row.clone();
            let mut scale = row.norm();
            for h in 0..r {
                for k in 0..r {
                    let c = a[i][h] * a[j][k];
                    if c != 0.0 {
                        target -= &dyp[h * r + k] * c;
                        scale += c.abs() * dyp[h * r + k].norm();
                    }
                }
            }
            let (_, res) = least_squares(&basis_my, &target, tol);
            a3.push(relative(res, scale));
        }
    }

    let ok = |v: &[f64]| v.iter().all(|&x| x < cfg.residual_tol);
    Ok(Preind2Report {
        passes: ok(&a1) && ok(&a2) && ok(&a3),
        a,
        a_unique,
        a1_residuals: a1,
        a2_residuals: a2,
        a3_residuals: a3,
    })
}
