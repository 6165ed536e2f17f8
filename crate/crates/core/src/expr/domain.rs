use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Expr, Params};
use crate::config::Config;
use crate::error::{Error, Result};

/// Maximum redraws for a single sample point before giving up.
pub const MAX_ATTEMPTS: usize = 1000;

/// The configuration space `K`: a box per coordinate minus the zero sets of
/// the exclusion predicates, plus values for the named parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainSpec {
    pub dim: usize,
    pub bounds: Vec<(f64, f64)>,
    pub momentum_bounds: (f64, f64),
    /// Each expression must stay away from zero on `K`.
    pub exclusions: Vec<Expr>,
    pub params: Params,
    pub exclusion_tol: f64,
}

impl DomainSpec {
    pub fn new(dim: usize) -> Self {
        DomainSpec {
            dim,
            bounds: vec![(-2.0, 2.0); dim],
            momentum_bounds: (-2.0, 2.0),
            exclusions: Vec::new(),
            params: Params::new(),
            exclusion_tol: 1e-6,
        }
    }

    pub fn with_bounds(mut self, i: usize, lo: f64, hi: f64) -> Self {
        self.bounds[i] = (lo, hi);
        self
    }

    pub fn exclude(mut self, e: Expr) -> Self {
        self.exclusions.push(e);
        self
    }

    pub fn with_param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn admits(&self, x: &[f64]) -> bool {
        if x.len() != self.dim {
            return false;
        }
        self.exclusions.iter().all(|e| {
            e.evaluate(x, &self.params)
                .map(|v| v.abs() > self.exclusion_tol)
                .unwrap_or(false)
        })
    }

    pub fn sample_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Vec<f64>> {
        for _ in 0..MAX_ATTEMPTS {
            let x: Vec<f64> = self
                .bounds
                .iter()
                .map(|&(lo, hi)| if hi > lo { rng.gen_range(lo..hi) } else { lo })
                .collect();
            if self.admits(&x) {
                return Ok(x);
            }
        }
        Err(Error::SamplingExhausted { attempts: MAX_ATTEMPTS })
    }

    pub fn sample_momentum<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        let (lo, hi) = self.momentum_bounds;
        (0..self.dim).map(|_| rng.gen_range(lo..hi)).collect()
    }

    pub fn sample_phase<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<(Vec<f64>, Vec<f64>)> {
        let x = self.sample_point(rng)?;
        let p = self.sample_momentum(rng);
        Ok((x, p))
    }

    /// A box of half-width `radius` around `center`, keeping exclusions and parameters.
    pub fn around(&self, center: &[f64], radius: f64) -> DomainSpec {
        let mut d = self.clone();
        d.bounds = center.iter().map(|&c| (c - radius, c + radius)).collect();
        d
    }

    /// Prepends an auxiliary coordinate with the given box; exclusions are shifted.
    pub fn prepend_coordinate(&self, lo: f64, hi: f64) -> DomainSpec {
        let mut d = self.clone();
        d.dim += 1;
        d.bounds.insert(0, (lo, hi));
        d.exclusions = self.exclusions.iter().map(|e| e.relabel(&|i| i + 1)).collect();
        d
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ZeroVerdict {
    SymbolicZero,
    NumericZero { max_abs: f64 },
    NonZero { witness: Vec<f64>, value: f64 },
}

impl ZeroVerdict {
    pub fn is_zero(&self) -> bool {
        !matches!(self, ZeroVerdict::NonZero { .. })
    }
}

/// Zero test with the default tolerances.
pub fn is_zero(e: &Expr, domain: &DomainSpec, samples: usize, seed: u64) -> Result<ZeroVerdict> {
    let cfg = Config {
        samples,
        seed,
        ..Config::default()
    };
    is_zero_with(e, domain, &cfg)
}

/// Symbolic zero if the canonical form is the zero constant; otherwise samples
/// `cfg.samples` admissible points and accepts when every value is below
/// `zero_tol · max(1, S)`, where `S` is the largest sampled sum of absolute
/// values of the top-level terms.
pub fn is_zero_with(e: &Expr, domain: &DomainSpec, cfg: &Config) -> Result<ZeroVerdict> {
    if cfg.samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    let e = e.simplify();
    if e.is_zero_const() {
        return Ok(ZeroVerdict::SymbolicZero);
    }
    if e.var_bound() > domain.dim {
        return Err(Error::VariableOutOfRange {
            index: e.var_bound() - 1,
            dim: domain.dim,
        });
    }
    let mut rng = rng_from_seed(cfg.seed);
    let mut values = Vec::with_capacity(cfg.samples);
    let mut scale: f64 = 1.0;
    let mut attempts = 0;
    while values.len() < cfg.samples {
        attempts += 1;
        if attempts > MAX_ATTEMPTS * cfg.samples {
            return Err(Error::SamplingExhausted { attempts });
        }
        let x = domain.sample_point(&mut rng)?;
        let (v, s) = match eval_with_scale(&e, &x, domain, cfg) {
            Ok(r) => r,
            Err(Error::Singular(_)) | Err(Error::Domain(_)) => continue,
            Err(err) => return Err(err),
        };
        scale = scale.max(s);
        values.push((x, v));
    }
    let threshold = cfg.zero_tol * scale;
    let mut max_abs: f64 = 0.0;
    for (x, v) in values {
        if v.is_nan() || v.abs() > threshold {
            return Ok(ZeroVerdict::NonZero { witness: x, value: v });
        }
        max_abs = max_abs.max(v.abs());
    }
    Ok(ZeroVerdict::NumericZero { max_abs })
}

fn eval_with_scale(e: &Expr, x: &[f64], domain: &DomainSpec, cfg: &Config) -> Result<(f64, f64)> {
    match e {
        Expr::Add(ts) => {
            let mut total = 0.0;
            let mut mag = 0.0;
            for t in ts {
                let v = t.evaluate_with(x, &domain.params, cfg.singular_tol)?;
                total += v;
                mag += v.abs();
            }
            Ok((total, mag))
        }
        _ => Ok((e.evaluate_with(x, &domain.params, cfg.singular_tol)?, 0.0)),
    }
}
