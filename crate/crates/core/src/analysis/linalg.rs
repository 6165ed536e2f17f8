use nalgebra::{DMatrix, DVector};

use super::PhaseSample;
use crate::diffop::Symbol;
use crate::error::Result;
use crate::expr::Params;

/// `(∂/∂x_1..∂/∂x_n, ∂/∂p_1..∂/∂p_n)` of a symbol, as symbols.
pub(crate) fn gradient_symbols(s: &Symbol) -> Vec<Symbol> {
    let n = s.dim();
    (0..n).map(|i| s.d_x(i)).chain((0..n).map(|i| s.d_p(i))).collect()
}

/// Exact differentials of a list of phase functions, evaluated on demand.
#[derive(Clone, Debug)]
pub(crate) struct Differentials {
    dim: usize,
    rows: Vec<Vec<Symbol>>,
}

impl Differentials {
    pub fn new(dim: usize, functions: &[Symbol]) -> Self {
        Differentials {
            dim,
            rows: functions.iter().map(gradient_symbols).collect(),
        }
    }

    /// `len × 2n` matrix of differentials at `pt`.
    pub fn at(&self, pt: &PhaseSample, params: &Params, singular_tol: f64) -> Result<DMatrix<f64>> {
        let mut m = DMatrix::zeros(self.rows.len(), 2 * self.dim);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, s) in row.iter().enumerate() {
                if !s.is_zero() {
                    m[(i, j)] = s.eval_with(&pt.x, &pt.p, params, singular_tol)?;
                }
            }
        }
        Ok(m)
    }
}

/// Singular values in descending order.
pub(crate) fn singular_values(m: &DMatrix<f64>) -> Vec<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Vec::new();
    }
    let mut sv: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Count of singular values above `tol · σ_max`.
pub(crate) fn numeric_rank(sv: &[f64], tol: f64) -> usize {
    let max = sv.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > tol * max).count()
}

/// Least-squares coefficients of `v` in the columns of `basis` and the
/// Euclidean norm of the residual. Directions with singular values below
/// `tol · σ_max` are dropped (minimum-norm solution).
pub(crate) fn least_squares(basis: &DMatrix<f64>, v: &DVector<f64>, tol: f64) -> (DVector<f64>, f64) {
    if basis.ncols() == 0 {
        return (DVector::zeros(0), v.norm());
    }
    let svd = basis.clone().svd(true, true);
    let max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if max == 0.0 {
        return (DVector::zeros(basis.ncols()), v.norm());
    }
    let sol = svd
        .solve(v, tol * max)
        .unwrap_or_else(|_| DVector::zeros(basis.ncols()));
    let r = v - basis * &sol;
    (sol, r.norm())
}

/// Residual vector of the projection of `v` onto the column span of `basis`.
pub(crate) fn residual_vector(basis: &DMatrix<f64>, v: &DVector<f64>, tol: f64) -> DVector<f64> {
    let (sol, _) = least_squares(basis, v, tol);
    if basis.ncols() == 0 {
        return v.clone();
    }
    v - basis * sol
}

/// Matrix whose columns are the given rows.
pub(crate) fn columns(rows: &[DVector<f64>], len: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(len, rows.len());
    for (j, r) in rows.iter().enumerate() {
        m.set_column(j, r);
    }
    m
}

/// `r / scale`, or 0 when both vanish.
pub(crate) fn relative(r: f64, scale: f64) -> f64 {
    if scale > 0.0 {
        r / scale
    } else if r == 0.0 {
        0.0
    } else {
        f64::INFINITY
    }
}

pub(crate) fn rows_of(m: &DMatrix<f64>) -> Vec<DVector<f64>> {
    (0..m.nrows()).map(|i| m.row(i).transpose()).collect()
}
