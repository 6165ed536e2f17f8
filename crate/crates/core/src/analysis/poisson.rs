use crate::diffop::Symbol;
use crate::error::{Error, Result};

fn check(a: &Symbol, b: &Symbol) -> Result<()> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(())
}

/// `{A, B} = Σ_i (∂A/∂p_i ∂B/∂x_i − ∂B/∂p_i ∂A/∂x_i)`.
///
/// Note the orientation: `{p, x} = 1`, the transpose of the usual convention,
/// so that the top part of the commutator `[A, B]` is `{MA, MB}`.
pub fn poisson_bracket(a: &Symbol, b: &Symbol) -> Result<Symbol> {
    Ok(&poisson_semibracket(a, b)? - &poisson_semibracket(b, a)?)
}

/// `{A, B}⁺ = Σ_i ∂A/∂p_i ∂B/∂x_i`.
pub fn poisson_semibracket(a: &Symbol, b: &Symbol) -> Result<Symbol> {
    check(a, b)?;
    let mut acc = Symbol::zero(a.dim());
    for i in 0..a.dim() {
        let da = a.d_p(i);
        if da.is_zero() {
            continue;
        }
        let db = b.d_x(i);
        if db.is_zero() {
            continue;
        }
        acc = &acc + &(&da * &db);
    }
    Ok(acc)
}
