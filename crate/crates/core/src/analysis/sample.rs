use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expr::{rng_from_seed, DomainSpec, MAX_ATTEMPTS};

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Provenance {
    Given,
    Sampled { seed: u64, index: usize },
    Perturbed { radius: f64 },
}

/// A phase-space point `(x, p)` with `x` in the domain.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhaseSample {
    pub x: Vec<f64>,
    pub p: Vec<f64>,
    pub provenance: Provenance,
}

impl PhaseSample {
    /// A user-given point; fails if `x` is outside the domain.
    pub fn new(x: Vec<f64>, p: Vec<f64>, domain: &DomainSpec) -> Result<Self> {
        if x.len() != domain.dim || p.len() != domain.dim {
            return Err(Error::DimensionMismatch {
                left: domain.dim,
                right: x.len().max(p.len()),
            });
        }
        if !domain.admits(&x) {
            return Err(Error::InvalidArgument(format!(
                "point {x:?} is excluded from the domain"
            )));
        }
        Ok(PhaseSample {
            x,
            p,
            provenance: Provenance::Given,
        })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    /// A uniformly perturbed copy, every coordinate moved by at most `radius`.
    pub fn perturbed<R: Rng + ?Sized>(&self, rng: &mut R, radius: f64, domain: &DomainSpec) -> Result<Self> {
        for _ in 0..MAX_ATTEMPTS {
            let x: Vec<f64> = self.x.iter().map(|v| v + rng.gen_range(-radius..=radius)).collect();
            let p: Vec<f64> = self.p.iter().map(|v| v + rng.gen_range(-radius..=radius)).collect();
            if domain.admits(&x) {
                return Ok(PhaseSample {
                    x,
                    p,
                    provenance: Provenance::Perturbed { radius },
                });
            }
        }
        Err(Error::SamplingExhausted { attempts: MAX_ATTEMPTS })
    }
}

/// Seeded stream of phase samples from a domain.
pub struct PhaseSampler<'a> {
    domain: &'a DomainSpec,
    rng: ChaCha8Rng,
    seed: u64,
    drawn: usize,
}

impl<'a> PhaseSampler<'a> {
    pub fn new(domain: &'a DomainSpec, seed: u64) -> Self {
        PhaseSampler {
            domain,
            rng: rng_from_seed(seed),
            seed,
            drawn: 0,
        }
    }

    pub fn draw(&mut self) -> Result<PhaseSample> {
        let (x, p) = self.domain.sample_phase(&mut self.rng)?;
        let index = self.drawn;
        self.drawn += 1;
        Ok(PhaseSample {
            x,
            p,
            provenance: Provenance::Sampled { seed: self.seed, index },
        })
    }

    pub fn drawn(&self) -> usize {
        self.drawn
    }
}

/// Collects `count` results of `f` on fresh samples, redrawing when the
/// evaluation hits a pole or leaves the domain of a function.
pub(crate) fn collect_samples<T>(
    domain: &DomainSpec,
    seed: u64,
    count: usize,
    mut f: impl FnMut(&PhaseSample) -> Result<T>,
) -> Result<Vec<T>> {
    let mut sampler = PhaseSampler::new(domain, seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        if sampler.drawn() >= MAX_ATTEMPTS * count.max(1) {
            return Err(Error::SamplingExhausted {
                attempts: sampler.drawn(),
            });
        }
        let pt = sampler.draw()?;
        match f(&pt) {
            Ok(v) => out.push(v),
            Err(Error::Singular(_)) | Err(Error::Domain(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}
