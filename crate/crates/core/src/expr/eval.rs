use std::collections::BTreeMap;

use super::{Expr, Func};
use crate::error::{Error, Result};

/// Numeric values for named parameters.
pub type Params = BTreeMap<String, f64>;

/// Evaluations closer than this to a pole of a reciprocal, `tan` or `cot` are rejected.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-6;

impl Expr {
    pub fn evaluate(&self, x: &[f64], params: &Params) -> Result<f64> {
        self.evaluate_with(x, params, DEFAULT_SINGULAR_TOL)
    }

    pub fn evaluate_with(&self, x: &[f64], params: &Params, singular_tol: f64) -> Result<f64> {
        let ev = |e: &Expr| e.evaluate_with(x, params, singular_tol);
        Ok(match self {
            Expr::Const(c) => c.to_f64(),
            Expr::Var(i) => *x.get(*i).ok_or(Error::VariableOutOfRange {
                index: *i,
                dim: x.len(),
            })?,
            Expr::Param(p) => *params.get(&**p).ok_or_else(|| Error::UnboundParameter(p.to_string()))?,
            Expr::Add(ts) => {
                let mut acc = 0.0;
                for t in ts {
                    acc += ev(t)?;
                }
                acc
            }
            Expr::Mul(fs) => {
                let mut acc = 1.0;
                for f in fs {
                    acc *= ev(f)?;
                }
                acc
            }
            Expr::Pow(b, k) => {
                let b = ev(b)?;
                if *k < 0 && b.abs() < singular_tol {
                    return Err(Error::Singular("reciprocal near zero"));
                }
                powi(b, *k)
            }
            Expr::Func(f, a) => {
                let a = ev(a)?;
                match f {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Tan => {
                        let c = a.cos();
                        if c.abs() < singular_tol {
                            return Err(Error::Singular("tan near a pole"));
                        }
                        a.sin() / c
                    }
                    Func::Cot => {
                        let s = a.sin();
                        if s.abs() < singular_tol {
                            return Err(Error::Singular("cot near a pole"));
                        }
                        a.cos() / s
                    }
                    Func::Exp => a.exp(),
                    Func::Sqrt => {
                        if a < 0.0 {
                            if a > -1e-12 {
                                0.0
                            } else {
                                return Err(Error::Domain("sqrt of a negative number"));
                            }
                        } else {
                            a.sqrt()
                        }
                    }
                    Func::Neg => -a,
                    Func::Recip => {
                        if a.abs() < singular_tol {
                            return Err(Error::Singular("reciprocal near zero"));
                        }
                        1.0 / a
                    }
                }
            }
        })
    }
}

fn powi(b: f64, k: i64) -> f64 {
    if let Ok(k32) = i32::try_from(k) {
        b.powi(k32)
    } else {
        b.powf(k as f64)
    }
}
