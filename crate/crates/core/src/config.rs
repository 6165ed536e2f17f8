use serde::Serialize;

/// Numeric tolerances and sampling settings shared by every numeric test.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Config {
    /// Zero test threshold, relative to the sampled magnitude of the terms.
    pub zero_tol: f64,
    /// Evaluations this close to a pole are rejected and redrawn.
    pub singular_tol: f64,
    /// Singular values below `rank_tol · σ_max` count as zero.
    pub rank_tol: f64,
    /// Relative least-squares residual accepted as membership in a span.
    pub residual_tol: f64,
    pub samples: usize,
    pub seed: u64,
    /// Radius of the perturbed points used for semicontinuity checks.
    pub perturbation: f64,
    /// Half-width of the box sampled around a point for local operator identities.
    pub neighborhood: f64,
    /// Fraction of full-rank samples required for a global verdict.
    pub global_fraction: f64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            zero_tol: 1e-9,
            singular_tol: 1e-6,
            rank_tol: 1e-8,
            residual_tol: 1e-7,
            samples: 20,
            seed: 0,
            perturbation: 1e-3,
            neighborhood: 0.1,
            global_fraction: 0.9,
        }
    }
}

impl Config {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_samples(mut self, samples: usize) -> Self {
        self.samples = samples;
        self
    }
}
