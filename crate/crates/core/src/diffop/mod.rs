//! Operators `Σ A_α(x) ∂^α` in standard representation and their symbols.

mod multi_index;
mod normalize;
mod operator;
mod symbol;

pub use multi_index::MultiIndex;
pub use normalize::{compose_by_normalization, normalize, term_factors, Factor};
pub use operator::DiffOperator;
pub use symbol::{default_momentum_name, monomial_value, Symbol, SymbolDisplay};

#[cfg(test)]
mod tests;
