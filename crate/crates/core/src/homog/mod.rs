//! Homogenization by an auxiliary momentum: `Φ(Σ A_α p^α) = Σ A_α p_0^{m−|α|} p^α`
//! in `n + 1` variables, with the auxiliary coordinate `x_0` at index 0.

use serde::Serialize;

use crate::analysis::{
    check_commutation, check_integrable_set, quasi_independence, symbol_independence, CommutationMatrix,
    IntegrableReport, RankReport,
};
use crate::config::Config;
use crate::diffop::DiffOperator;
use crate::error::{Error, Result};
use crate::expr::{rng_from_seed, DomainSpec, Expr, ZeroVerdict, MAX_ATTEMPTS};
use crate::ncpoly::{residual_terms, ResidualTerm};
use crate::oracle::apply_symbolic;

/// Box used for the auxiliary coordinate when lifting a domain.
pub const AUX_BOUNDS: (f64, f64) = (-1.0, 1.0);

/// Pads every term to order `degree` with powers of `p_0`.
pub fn pad(a: &DiffOperator, degree: u32) -> Result<DiffOperator> {
    if let Some(m) = a.order() {
        if m > degree {
            return Err(Error::InvalidArgument(format!(
                "cannot pad order {m} to degree {degree}"
            )));
        }
    }
    Ok(DiffOperator::from_terms(
        a.dim() + 1,
        a.terms()
            .iter()
            .map(|(alpha, c)| (alpha.prepend(degree - alpha.order()), c.relabel(&|i| i + 1))),
    ))
}

/// `Φ_A`: `A` padded to its own order.
pub fn phi_embed(a: &DiffOperator) -> Result<DiffOperator> {
    let m = a.order().ok_or(Error::ZeroOperator)?;
    pad(a, m)
}

/// `p̂_0` in `n + 1` variables.
pub fn aux_momentum(dim: usize) -> DiffOperator {
    DiffOperator::momentum(dim + 1, 0)
}

/// Sets `p_0 = 1` and drops the auxiliary coordinate. Fails if a coefficient
/// depends on `x_0`.
pub fn dehomogenize(a: &DiffOperator) -> Result<DiffOperator> {
    if a.dim() == 0 {
        return Err(Error::InvalidArgument("no auxiliary variable".into()));
    }
    if a.terms().values().any(|c| c.depends_on(0)) {
        return Err(Error::InvalidArgument(
            "coefficient depends on the auxiliary coordinate".into(),
        ));
    }
    Ok(DiffOperator::from_terms(
        a.dim() - 1,
        a.terms().iter().map(|(alpha, c)| (alpha.tail(), c.relabel(&|i| i - 1))),
    ))
}

/// Every term of order `degree` and no coefficient depending on `x_0`.
pub fn is_homogeneous_lift(a: &DiffOperator, degree: u32) -> bool {
    a.terms()
        .iter()
        .all(|(alpha, c)| alpha.order() == degree && c.derivative(0).is_zero_const())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PhiLawReport {
    /// `[Φ_A, p̂_0] = 0` and `[Φ_B, p̂_0] = 0`, structurally.
    pub aux_commutes: bool,
    /// Both lifts are homogeneous and free of `x_0`.
    pub homogeneous: bool,
    /// `ord A + ord B − 1`, the degree `[A, B]` is padded to.
    pub padded_degree: Option<u32>,
    /// `[Φ_A, Φ_B]` equals `[A, B]` padded to `padded_degree`.
    pub law_holds: bool,
    pub law_residual: Vec<ResidualTerm>,
    /// `[Φ_A, Φ_B]` at `p_0 = 1` equals `[A, B]`.
    pub agrees_at_unit_aux_momentum: bool,
}

impl PhiLawReport {
    pub fn passes(&self) -> bool {
        self.aux_commutes && self.homogeneous && self.agrees_at_unit_aux_momentum
    }
}

fn vanishes(a: &DiffOperator, domain: &DomainSpec, cfg: &Config) -> Result<bool> {
    a.is_zero_on(domain, cfg)
}

/// Checks `[Φ_A, p̂_0] = 0` and `[Φ_A, Φ_B] = Φ_{[A,B]}`, reading the right-hand
/// side as `[A, B]` padded to `ord A + ord B − 1`. Terms of `[A, B]` coming
/// from second or higher derivatives of the coefficients land below that
/// degree, so the literal law can fail; the residual is reported, and the
/// padding-free comparison at `p_0 = 1` is checked separately.
pub fn verify_phi_laws(a: &DiffOperator, b: &DiffOperator, domain: &DomainSpec, cfg: &Config) -> Result<PhiLawReport> {
    if a.dim() != b.dim() || a.dim() != domain.dim {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: if a.dim() != b.dim() { b.dim() } else { domain.dim },
        });
    }
    let (ma, mb) = (
        a.order().ok_or(Error::ZeroOperator)?,
        b.order().ok_or(Error::ZeroOperator)?,
    );
    let (pa, pb) = (phi_embed(a)?, phi_embed(b)?);
    let p0 = aux_momentum(a.dim());
    let aux_commutes = pa.commutator(&p0)?.is_zero() && pb.commutator(&p0)?.is_zero();
    let homogeneous = is_homogeneous_lift(&pa, ma) && is_homogeneous_lift(&pb, mb);

    let lifted = domain.prepend_coordinate(AUX_BOUNDS.0, AUX_BOUNDS.1);
    let lhs = pa.commutator(&pb)?;
    let bracket = a.commutator(b)?;
    let padded_degree = (ma + mb).checked_sub(1);
    let (law_holds, law_residual) = match padded_degree {
        Some(d) => {
            let bracket = bracket.prune(domain, cfg)?;
            let res = lhs.try_sub(&pad(&bracket, d)?)?;
            (
                vanishes(&res, &lifted, cfg)?,
                residual_terms(&res.prune(&lifted, cfg)?.into_symbol()),
            )
        }
        // two coefficient operators: both sides vanish
        None => (lhs.is_zero() && bracket.is_zero(), Vec::new()),
    };
    let at_unit = dehomogenize(&lhs)?.try_sub(&bracket)?;
    Ok(PhiLawReport {
        aux_commutes,
        homogeneous,
        padded_degree,
        law_holds,
        law_residual,
        agrees_at_unit_aux_momentum: vanishes(&at_unit, domain, cfg)?,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EigenReport {
    pub lambda: f64,
    pub order: u32,
    /// Zero verdict of `(A − λ)u`.
    pub base: ZeroVerdict,
    /// Largest `|Au − λu| / (|Au| + |λu|)` over the samples.
    pub base_max_relative: f64,
    /// Largest relative residual of `(Φ_A − λ p̂_0^m) e^{x_0} u`.
    pub lifted_max_relative: f64,
    pub samples: usize,
    pub passes: bool,
}

fn relative(l: f64, r: f64) -> f64 {
    let scale = l.abs() + r.abs();
    if scale == 0.0 {
        0.0
    } else {
        (l - r).abs() / scale
    }
}

/// Checks `(A − λ)u = 0` and then `(Φ_A − λ p̂_0^m)U = 0` for `U = e^{x_0} u`,
/// both at `cfg.samples` points.
pub fn verify_eigen_correspondence(
    a: &DiffOperator,
    lambda: f64,
    u: &Expr,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<EigenReport> {
    if a.dim() != domain.dim {
        return Err(Error::DimensionMismatch {
            left: domain.dim,
            right: a.dim(),
        });
    }
    if u.var_bound() > a.dim() {
        return Err(Error::VariableOutOfRange {
            index: u.var_bound() - 1,
            dim: a.dim(),
        });
    }
    let m = a.order().ok_or(Error::ZeroOperator)?;
    let lam = crate::expr::Rational::from_f64(lambda)
        .ok_or_else(|| Error::InvalidArgument(format!("eigenvalue {lambda} is not finite")))?;
    let au = apply_symbolic(a, u);
    let base = crate::expr::is_zero_with(&(au.clone() - Expr::Const(lam) * u.clone()), domain, cfg)?;

    let phi = phi_embed(a)?;
    let big_u = Expr::var(0).exp() * u.relabel(&|i| i + 1);
    let phi_u = apply_symbolic(&phi, &big_u);
    let aux_u = apply_symbolic(&aux_momentum(a.dim()).pow(m), &big_u);
    let lifted = domain.prepend_coordinate(AUX_BOUNDS.0, AUX_BOUNDS.1);

    let mut rng = rng_from_seed(cfg.seed);
    let (mut base_worst, mut lifted_worst): (f64, f64) = (0.0, 0.0);
    let mut taken = 0;
    let mut attempts = 0;
    while taken < cfg.samples {
        attempts += 1;
        if attempts > MAX_ATTEMPTS * cfg.samples.max(1) {
            return Err(Error::SamplingExhausted { attempts });
        }
        let y = lifted.sample_point(&mut rng)?;
        let vals = (|| -> Result<[f64; 4]> {
            let ev = |e: &Expr, pt: &[f64]| e.evaluate_with(pt, &domain.params, cfg.singular_tol);
            Ok([ev(&au, &y[1..])?, ev(u, &y[1..])?, ev(&phi_u, &y)?, ev(&aux_u, &y)?])
        })();
        let [au_v, u_v, phi_v, aux_v] = match vals {
            Ok(v) => v,
            Err(Error::Singular(_)) | Err(Error::Domain(_)) => continue,
            Err(e) => return Err(e),
        };
        taken += 1;
        base_worst = base_worst.max(relative(au_v, lambda * u_v));
        lifted_worst = lifted_worst.max(relative(phi_v, lambda * aux_v));
    }
    Ok(EigenReport {
        lambda,
        order: m,
        passes: base.is_zero() && base_worst < cfg.zero_tol && lifted_worst < cfg.zero_tol,
        base,
        base_max_relative: base_worst,
        lifted_max_relative: lifted_worst,
        samples: taken,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind")]
pub enum LiftVerdict {
    Lifted,
    NotCommuting { pairs: Vec<(usize, usize)> },
    SymbolsDependent { full_rank_fraction: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LiftReport {
    pub verdict: LiftVerdict,
    pub commutation: CommutationMatrix,
    /// Functional independence of the full symbols of the input.
    pub symbol_rank: RankReport,
    /// Main-part rank of the input, for comparison with the lifted set.
    pub main_rank: RankReport,
    /// `(p̂_0, Φ_{F_1}, …)`.
    pub operators: Vec<DiffOperator>,
    pub lifted: Option<IntegrableReport>,
}

impl LiftReport {
    pub fn passes(&self) -> bool {
        self.verdict == LiftVerdict::Lifted && self.lifted.as_ref().is_some_and(IntegrableReport::passes)
    }
}

/// Lifts `(F_1..F_s)` with `k` central operators to `(p̂_0, Φ_{F_1}, …, Φ_{F_s})`
/// with `k + 1` central operators, after checking that the `F_i` commute and
/// that their full symbols are independent at sampled points.
pub fn build_quasi_integrable_lift(
    ops: &[DiffOperator],
    k: usize,
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<LiftReport> {
    let commutation = check_commutation(ops, k, domain, cfg)?;
    let symbol_rank = symbol_independence(ops, domain, cfg)?;
    let main_rank = quasi_independence(ops, domain, cfg)?;
    let verdict = if !commutation.all_zero {
        LiftVerdict::NotCommuting {
            pairs: commutation.failing(),
        }
    } else if !symbol_rank.is_quasi_independent() {
        LiftVerdict::SymbolsDependent {
            full_rank_fraction: symbol_rank.full_rank_fraction,
        }
    } else {
        LiftVerdict::Lifted
    };
    let mut operators = vec![aux_momentum(domain.dim)];
    for f in ops {
        operators.push(phi_embed(&f.prune(domain, cfg)?)?);
    }
    let lifted = if verdict == LiftVerdict::Lifted {
        let lifted_domain = domain.prepend_coordinate(AUX_BOUNDS.0, AUX_BOUNDS.1);
        Some(check_integrable_set(&operators, k + 1, &lifted_domain, cfg)?)
    } else {
        None
    };
    Ok(LiftReport {
        verdict,
        commutation,
        symbol_rank,
        main_rank,
        operators,
        lifted,
    })
}

/// Display names for lifted operators: `x0, x1, …` and `p0, p1, …`.
pub fn lifted_var_name(i: usize) -> String {
    format!("x{i}")
}

pub fn lifted_momentum_name(i: usize) -> String {
    format!("p{i}")
}
