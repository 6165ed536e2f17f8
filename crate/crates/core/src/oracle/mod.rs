//! Ground truth by application: operators acting on `e^{λ·x}` and on explicit
//! test functions, independent of the symbol calculus.

use std::collections::HashMap;

use rand::Rng;
use serde::Serialize;

use crate::config::Config;
use crate::diffop::{monomial_value, DiffOperator, MultiIndex};
use crate::error::{Error, Result};
use crate::expr::{rng_from_seed, DomainSpec, Expr, Params, Rational, MAX_ATTEMPTS};

/// `e^{-λ·x} A e^{λ·x} = Σ A_α(x) λ^α`, summed straight from the coefficients.
pub fn apply_to_exponential(a: &DiffOperator, lambda: &[f64], x: &[f64], params: &Params) -> Result<f64> {
    Ok(exponential_terms(a, lambda, x, params, crate::expr::DEFAULT_SINGULAR_TOL)?.0)
}

/// Value and sum of absolute term values.
fn exponential_terms(
    a: &DiffOperator,
    lambda: &[f64],
    x: &[f64],
    params: &Params,
    singular_tol: f64,
) -> Result<(f64, f64)> {
    if lambda.len() != a.dim() || x.len() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: lambda.len().max(x.len()),
        });
    }
    let mut acc = 0.0;
    let mut mag = 0.0;
    for (alpha, c) in a.terms() {
        let v = c.evaluate_with(x, params, singular_tol)? * monomial_value(alpha, lambda);
        acc += v;
        mag += v.abs();
    }
    Ok((acc, mag))
}

/// `∂^α ψ` with every intermediate derivative cached.
struct Derivatives {
    cache: HashMap<MultiIndex, Expr>,
}

impl Derivatives {
    fn new(psi: &Expr, dim: usize) -> Self {
        let mut cache = HashMap::new();
        cache.insert(MultiIndex::zero(dim), psi.simplify());
        Derivatives { cache }
    }

    fn get(&mut self, alpha: &MultiIndex) -> Expr {
        if let Some(e) = self.cache.get(alpha) {
            return e.clone();
        }
        let i = (0..alpha.dim()).find(|&i| alpha.get(i) > 0).expect("nonzero index");
        let lower = alpha.lower(i).expect("positive entry");
        let d = self.get(&lower).derivative(i);
        self.cache.insert(alpha.clone(), d.clone());
        d
    }
}

/// `Aψ = Σ A_α ∂^α ψ`, by exact differentiation.
pub fn apply_symbolic(a: &DiffOperator, psi: &Expr) -> Expr {
    let mut derivs = Derivatives::new(psi, a.dim());
    let terms: Vec<Expr> = a
        .terms()
        .iter()
        .map(|(alpha, c)| Expr::Mul(vec![c.clone(), derivs.get(alpha)]))
        .collect();
    Expr::sum(terms).simplify()
}

/// `e^{λ·x}` for exact rational `λ`.
pub fn exponential(lambda: &[Rational]) -> Expr {
    Expr::sum(
        lambda
            .iter()
            .enumerate()
            .filter(|(_, l)| !l.is_zero())
            .map(|(i, l)| Expr::Mul(vec![Expr::Const(l.clone()), Expr::var(i)])),
    )
    .exp()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Probe {
    Exponential { lambda: Vec<f64> },
    Monomial { beta: Vec<u32> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualityWitness {
    pub x: Vec<f64>,
    pub probe: Probe,
    pub left: f64,
    pub right: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EqualityReport {
    pub equal: bool,
    pub points: usize,
    pub probes: usize,
    /// Largest `|Aψ − Bψ|` relative to the term magnitudes.
    pub max_relative: f64,
    pub witness: Option<EqualityWitness>,
}

/// Tensor grid over `{1, −1, 2, −2, …}` with `ord + 1` values per axis, and its
/// mirror image, capped at 64 points.
pub fn lambda_grid(dim: usize, order: u32) -> Vec<Vec<f64>> {
    let per_axis: Vec<f64> = (0..=order as usize)
        .map(|j| {
            let v = (j / 2 + 1) as f64;
            if j % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect();
    let mut grid: Vec<Vec<f64>> = vec![Vec::new()];
    for _ in 0..dim {
        grid = grid
            .into_iter()
            .flat_map(|pt| {
                per_axis.iter().map(move |&v| {
                    let mut q = pt.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
        if grid.len() > 64 {
            grid.truncate(64);
        }
    }
    let mirrored: Vec<Vec<f64>> = grid.iter().map(|pt| pt.iter().map(|v| -v).collect()).collect();
    grid.extend(mirrored);
    grid.truncate(64);
    grid
}

/// Monomials `x^β` with `|β| ≤ max_order`.
pub fn monomial_probes(dim: usize, max_order: u32) -> Vec<(MultiIndex, Expr)> {
    (0..=max_order)
        .flat_map(|k| MultiIndex::of_order(dim, k))
        .map(|beta| {
            let e = Expr::product(
                beta.as_slice()
                    .iter()
                    .enumerate()
                    .filter(|(_, &k)| k > 0)
                    .map(|(i, &k)| Expr::var(i).pow(k as i64)),
            );
            (beta, e)
        })
        .collect()
}

fn close(l: (f64, f64), r: (f64, f64), tol: f64) -> (bool, f64) {
    let scale = l.1.max(r.1).max(1.0);
    let rel = (l.0 - r.0).abs() / scale;
    (rel <= tol, rel)
}

fn expr_terms(e: &Expr, x: &[f64], params: &Params, singular_tol: f64) -> Result<(f64, f64)> {
    match e {
        Expr::Add(ts) => {
            let mut acc = 0.0;
            let mut mag = 0.0;
            for t in ts {
                let v = t.evaluate_with(x, params, singular_tol)?;
                acc += v;
                mag += v.abs();
            }
            Ok((acc, mag))
        }
        _ => {
            let v = e.evaluate_with(x, params, singular_tol)?;
            Ok((v, v.abs()))
        }
    }
}

/// Compares `A` and `B` on exponentials over [`lambda_grid`] plus 16 random
/// `λ`, and on monomials up to order `ord + 1`, at `cfg.samples` points of the
/// domain. Values agree when the difference is at most `cfg.zero_tol` times
/// the magnitude of the summed terms.
pub fn operator_equal(a: &DiffOperator, b: &DiffOperator, domain: &DomainSpec, cfg: &Config) -> Result<EqualityReport> {
    if a.dim() != b.dim() || a.dim() != domain.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: if a.dim() != b.dim() { b.dim() } else { domain.dim },
        });
    }
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let dim = a.dim();
    let order = a.order().unwrap_or(0).max(b.order().unwrap_or(0));
    let mut rng = rng_from_seed(cfg.seed);
    let mut lambdas = lambda_grid(dim, order);
    for _ in 0..16 {
        lambdas.push((0..dim).map(|_| rng.gen_range(-3.0..3.0)).collect());
    }
    let monomials: Vec<(MultiIndex, Expr, Expr)> = monomial_probes(dim, order + 1)
        .into_iter()
        .map(|(beta, psi)| (beta, apply_symbolic(a, &psi), apply_symbolic(b, &psi)))
        .collect();

    let params = &domain.params;
    let tol = cfg.singular_tol;
    let mut points = 0;
    let mut attempts = 0;
    let mut worst: f64 = 0.0;
    while points < cfg.samples {
        attempts += 1;
        if attempts > MAX_ATTEMPTS * cfg.samples {
            return Err(Error::SamplingExhausted { attempts });
        }
        let x = domain.sample_point(&mut rng)?;
        let outcome = (|| -> Result<Option<EqualityWitness>> {
            let mut local_worst: f64 = 0.0;
            for lambda in &lambdas {
                let l = exponential_terms(a, lambda, &x, params, tol)?;
                let r = exponential_terms(b, lambda, &x, params, tol)?;
                let (ok, rel) = close(l, r, cfg.zero_tol);
                local_worst = local_worst.max(rel);
                if !ok {
                    return Ok(Some(EqualityWitness {
                        x: x.clone(),
                        probe: Probe::Exponential { lambda: lambda.clone() },
                        left: l.0,
                        right: r.0,
                    }));
                }
            }
            for (beta, la, lb) in &monomials {
                let l = expr_terms(la, &x, params, tol)?;
                let r = expr_terms(lb, &x, params, tol)?;
                let (ok, rel) = close(l, r, cfg.zero_tol);
                local_worst = local_worst.max(rel);
                if !ok {
                    return Ok(Some(EqualityWitness {
                        x: x.clone(),
                        probe: Probe::Monomial {
                            beta: beta.as_slice().to_vec(),
                        },
                        left: l.0,
                        right: r.0,
                    }));
                }
            }
            worst = worst.max(local_worst);
            Ok(None)
        })();
        match outcome {
            Ok(None) => points += 1,
            Ok(Some(w)) => {
                let rel = (w.left - w.right).abs();
                return Ok(EqualityReport {
                    equal: false,
                    points: points + 1,
                    probes: lambdas.len() + monomials.len(),
                    max_relative: worst.max(rel),
                    witness: Some(w),
                });
            }
            Err(Error::Singular(_)) | Err(Error::Domain(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(EqualityReport {
        equal: true,
        points,
        probes: lambdas.len() + monomials.len(),
        max_relative: worst,
        witness: None,
    })
}

/// Cross-check of one operator: symbolic application to `e^{λ·x}` divided by
/// `e^{λ·x}` against the symbol at `(x, λ)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExponentialCheck {
    pub samples: usize,
    pub max_relative: f64,
    pub passes: bool,
}

pub fn check_exponential_identity(a: &DiffOperator, domain: &DomainSpec, cfg: &Config) -> Result<ExponentialCheck> {
    if a.dim() != domain.dim {
        return Err(Error::DimensionMismatch {
            left: domain.dim,
            right: a.dim(),
        });
    }
    let mut rng = rng_from_seed(cfg.seed);
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    let mut attempts = 0;
    while taken < cfg.samples {
        attempts += 1;
        if attempts > MAX_ATTEMPTS * cfg.samples.max(1) {
            return Err(Error::SamplingExhausted { attempts });
        }
        // λ with quarter steps keeps the exponent exact
        let lambda: Vec<Rational> = (0..a.dim())
            .map(|_| Rational::from_ratio(rng.gen_range(-12..=12), 4))
            .collect();
        let lf: Vec<f64> = lambda.iter().map(Rational::to_f64).collect();
        let x = domain.sample_point(&mut rng)?;
        let psi = exponential(&lambda);
        let applied = apply_symbolic(a, &psi);
        let vals = (|| -> Result<(f64, f64, f64)> {
            let e = psi.evaluate_with(&x, &domain.params, cfg.singular_tol)?;
            let lhs = applied.evaluate_with(&x, &domain.params, cfg.singular_tol)? / e;
            let (_, mag) = exponential_terms(a, &lf, &x, &domain.params, cfg.singular_tol)?;
            let sym = a.symbol().eval_with(&x, &lf, &domain.params, cfg.singular_tol)?;
            Ok((lhs, sym, mag))
        })();
        let (lhs, rhs, mag) = match vals {
            Ok(v) => v,
            Err(Error::Singular(_)) | Err(Error::Domain(_)) => continue,
            Err(e) => return Err(e),
        };
        taken += 1;
        worst = worst.max((lhs - rhs).abs() / mag.max(1.0));
    }
    Ok(ExponentialCheck {
        samples: taken,
        max_relative: worst,
        passes: worst < cfg.zero_tol,
    })
}

#[cfg(test)]
mod tests;
