//! Both sides of the top-order and next-to-top-order identities for `S(G, F)`.

use serde::Serialize;

use super::{check_substitution, g_exprs, substitute_g, NCPolynomial};
use crate::analysis::poisson_semibracket;
use crate::config::Config;
use crate::diffop::Symbol;
use crate::error::{Error, Result};
use crate::expr::{DomainSpec, Expr, MAX_ATTEMPTS};
use crate::DiffOperator;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ResidualTerm {
    pub alpha: Vec<u32>,
    pub coeff: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TopIdentityReport {
    /// `w_i = ord F_i`.
    pub weights: Vec<u32>,
    /// `deg_w S`, absent for the zero polynomial.
    pub degree: Option<u32>,
    /// Nonzero coefficients of `H_d(S(G,F))^smb − (ℳ S)_C(G, MF)` after simplification.
    pub top_residual: Vec<ResidualTerm>,
    pub top_exact: bool,
    /// Nonzero coefficients of the order `d−1` residual after simplification.
    pub second_residual: Vec<ResidualTerm>,
    pub second_exact: bool,
    /// Largest relative residual of the order `d−1` identity over the phase samples.
    pub second_max_relative: f64,
    pub samples: usize,
}

impl TopIdentityReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.top_exact && self.second_max_relative < tol
    }
}

pub(crate) fn residual_terms(s: &Symbol) -> Vec<ResidualTerm> {
    s.sorted_terms()
        .into_iter()
        .map(|(a, c)| ResidualTerm {
            alpha: a.as_slice().to_vec(),
            coeff: c.to_string(),
        })
        .collect()
}

/// Right-hand side of the order `d−1` identity:
/// `S̃'(G,MF) + Σ ∂S̃/∂F_i (G,MF) M'F_i + Σ A_ij {MF_i, MF_j}⁺ + Σ B_ih {MF_i, G_h}⁺`.
pub(crate) fn second_order_rhs(
    main: &NCPolynomial,
    second: &NCPolynomial,
    dim: usize,
    g: &[Expr],
    mf: &[Symbol],
    mf2: &[Symbol],
) -> Result<Symbol> {
    let main_c = main.abelianize();
    let mut acc = second.abelianize().to_symbol(dim, g, mf);
    for (i, m2) in mf2.iter().enumerate() {
        if m2.is_zero() {
            continue;
        }
        let d = main_c.d_f(i);
        if d.is_zero() {
            continue;
        }
        acc = &acc + &(&d.to_symbol(dim, g, mf) * m2);
    }
    let g_symbols: Vec<Symbol> = g.iter().map(|e| Symbol::coefficient(dim, e.clone())).collect();
    for m in main.terms() {
        let zs: Vec<Expr> = m.coeffs().iter().map(|z| substitute_g(z, g)).collect();
        let word = m.word();
        let q = word.len();
        // pairs of letters h < k
        for a in 0..q {
            for b in a + 1..q {
                let bracket = poisson_semibracket(&mf[word[a]], &mf[word[b]])?;
                if bracket.is_zero() {
                    continue;
                }
                let mut term = bracket.scale(&Expr::product(zs.clone()));
                for (t, &i) in word.iter().enumerate() {
                    if t != a && t != b {
                        term = &term * &mf[i];
                    }
                }
                acc = &acc + &term;
            }
        }
        // a letter and a coefficient to its right
        for a in 0..q {
            for k in a + 1..=q {
                let zk = &m.coeffs()[k];
                let mut inner = Symbol::zero(dim);
                for (j, gs) in g_symbols.iter().enumerate() {
                    let dz = zk.derivative(j);
                    if dz.is_zero_const() {
                        continue;
                    }
                    let bracket = poisson_semibracket(&mf[word[a]], gs)?;
                    inner = &inner + &bracket.scale(&substitute_g(&dz, g));
                }
                if inner.is_zero() {
                    continue;
                }
                let others = Expr::product(zs.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, z)| z.clone()));
                let mut term = inner.scale(&others);
                for (t, &i) in word.iter().enumerate() {
                    if t != a {
                        term = &term * &mf[i];
                    }
                }
                acc = &acc + &term;
            }
        }
    }
    Ok(acc)
}

/// Computes both sides of the top-order identity
/// `H_d(S(G,F))^smb = (ℳ_W S)_C(G, MF)` and of its order `d−1` refinement,
/// with weights `w_i = ord F_i`. The second identity is compared structurally
/// and at `cfg.samples` phase points drawn from `domain`.
pub fn verify_top_identity(
    s: &NCPolynomial,
    g_ops: &[DiffOperator],
    f_ops: &[DiffOperator],
    domain: &DomainSpec,
    cfg: &Config,
) -> Result<TopIdentityReport> {
    let dim = check_substitution(s, g_ops, f_ops)?;
    let weights: Vec<u32> = f_ops
        .iter()
        .map(|f| f.order().ok_or(Error::ZeroOperator))
        .collect::<Result<_>>()?;
    let parts = s.degree_and_main(&weights, &domain.params, cfg)?;
    let op = s.substitute(g_ops, f_ops)?;
    let g = g_exprs(g_ops);
    let mf: Vec<Symbol> = f_ops.iter().map(|f| f.main_part().into_symbol()).collect();
    let mf2: Vec<Symbol> = f_ops.iter().map(|f| f.second_main_part().into_symbol()).collect();

    let Some(d) = parts.degree else {
        // S = 0 as a polynomial: the substituted operator must vanish as well
        let residual = op.into_symbol();
        return Ok(TopIdentityReport {
            weights,
            degree: None,
            top_exact: residual.is_zero(),
            top_residual: residual_terms(&residual),
            second_residual: Vec::new(),
            second_exact: true,
            second_max_relative: 0.0,
            samples: 0,
        });
    };

    let top_lhs = op.homogeneous_part(d).into_symbol();
    let top_rhs = parts.main.abelianize().to_symbol(dim, &g, &mf);
    let top_res = &top_lhs - &top_rhs;

    let lhs2 = if d == 0 {
        Symbol::zero(dim)
    } else {
        op.homogeneous_part(d - 1).into_symbol()
    };
    let rhs2 = second_order_rhs(&parts.main, &parts.second, dim, &g, &mf, &mf2)?;
    let res2 = &lhs2 - &rhs2;

    let mut rng = crate::expr::rng_from_seed(cfg.seed);
    let mut worst: f64 = 0.0;
    let mut taken = 0;
    let mut attempts = 0;
    while taken < cfg.samples && !res2.is_zero() {
        attempts += 1;
        if attempts > MAX_ATTEMPTS * cfg.samples.max(1) {
            return Err(Error::SamplingExhausted { attempts });
        }
        let (x, p) = domain.sample_phase(&mut rng)?;
        let vals = (|| -> Result<(f64, f64)> {
            let l = lhs2.eval_with(&x, &p, &domain.params, cfg.singular_tol)?;
            let r = rhs2.eval_with(&x, &p, &domain.params, cfg.singular_tol)?;
            Ok((l, r))
        })();
        let (l, r) = match vals {
            Ok(v) => v,
            Err(Error::Singular(_)) | Err(Error::Domain(_)) => continue,
            Err(e) => return Err(e),
        };
        taken += 1;
        worst = worst.max((l - r).abs() / l.abs().max(r.abs()).max(1.0));
    }

    Ok(TopIdentityReport {
        weights,
        degree: Some(d),
        top_exact: top_res.is_zero(),
        top_residual: residual_terms(&top_res),
        second_exact: res2.is_zero(),
        second_residual: residual_terms(&res2),
        second_max_relative: worst,
        samples: taken,
    })
}
