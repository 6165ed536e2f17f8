//! Symbol calculus for linear differential operators `Σ A_α(x) ∂^α` with
//! smooth coefficients, plus the phase-space tests built on it.
//!
//! - [`expr`]: coefficient expressions, exact differentiation, numeric zero tests.
//! - [`diffop`]: standard representation, composition, commutators, main parts.
//! - [`ncpoly`]: weighted noncommutative polynomials and their substitution.
//! - [`analysis`]: Poisson brackets, Jacobian ranks, commutation and dependence checks.
//! - [`homog`]: homogenization by an auxiliary momentum.
//! - [`oracle`]: application of operators to explicit test functions.
//! - [`catalog`]: ready-made systems.
//! - [`parse`]: text syntax for expressions, operators and polynomials.

pub mod analysis;
pub mod catalog;
pub mod config;
pub mod diffop;
pub mod error;
pub mod expr;
pub mod homog;
pub mod ncpoly;
pub mod oracle;
pub mod parse;
pub mod random;

pub use config::Config;
pub use diffop::{DiffOperator, MultiIndex, Symbol};
pub use error::{Error, Result};
pub use expr::{DomainSpec, Expr, Func, Rational, ZeroVerdict};
