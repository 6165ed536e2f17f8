//! Seeded generators of random expressions, operators and polynomials for
//! property tests and benchmarks.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::diffop::{DiffOperator, Factor, MultiIndex};
use crate::expr::{Expr, Func};

pub use rand::SeedableRng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Polynomial in `x_1..x_dim` with small integer coefficients and total degree at most `max_degree`.
pub fn poly_expr<R: Rng>(rng: &mut R, dim: usize, max_degree: u32, max_terms: usize) -> Expr {
    let n_terms = rng.gen_range(1..=max_terms.max(1));
    let mut terms = Vec::with_capacity(n_terms);
    for _ in 0..n_terms {
        let c = loop {
            let c: i64 = rng.gen_range(-3..=3);
            if c != 0 {
                break c;
            }
        };
        let deg = rng.gen_range(0..=max_degree);
        let mut factors = vec![Expr::int(c)];
        for _ in 0..deg {
            if dim > 0 {
                factors.push(Expr::var(rng.gen_range(0..dim)));
            }
        }
        terms.push(Expr::product(factors));
    }
    Expr::sum(terms).simplify()
}

/// A random tree over every primitive, of bounded depth. Evaluation may hit poles.
pub fn general_expr<R: Rng>(rng: &mut R, dim: usize, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.3) {
        return match rng.gen_range(0..3) {
            0 => Expr::rat(rng.gen_range(-5..=5), rng.gen_range(1..=4)),
            _ => Expr::var(rng.gen_range(0..dim.max(1))),
        };
    }
    match rng.gen_range(0..5) {
        0 => Expr::Add(
            (0..rng.gen_range(2..=3))
                .map(|_| general_expr(rng, dim, depth - 1))
                .collect(),
        ),
        1 => Expr::Mul(
            (0..rng.gen_range(2..=3))
                .map(|_| general_expr(rng, dim, depth - 1))
                .collect(),
        ),
        2 => general_expr(rng, dim, depth - 1).pow(rng.gen_range(-2..=3)),
        _ => {
            let f = [
                Func::Sin,
                Func::Cos,
                Func::Exp,
                Func::Sqrt,
                Func::Tan,
                Func::Cot,
                Func::Neg,
            ][rng.gen_range(0..7)];
            let mut arg = general_expr(rng, dim, depth - 1);
            if f == Func::Sqrt {
                // keep the radicand positive
                arg = Expr::Add(vec![Expr::int(5), Expr::Mul(vec![arg.clone(), arg])]);
            }
            if f == Func::Exp {
                arg = Expr::func(Func::Sin, arg);
            }
            Expr::func(f, arg)
        }
    }
}

/// Operator of order at most `max_order` with polynomial coefficients.
pub fn operator<R: Rng>(rng: &mut R, dim: usize, max_order: u32, coeff_degree: u32) -> DiffOperator {
    let n_terms = rng.gen_range(1..=4);
    let terms: Vec<(MultiIndex, Expr)> = (0..n_terms)
        .map(|_| {
            let order = rng.gen_range(0..=max_order);
            let mut alpha = MultiIndex::zero(dim);
            for _ in 0..order {
                alpha = alpha.raise(rng.gen_range(0..dim));
            }
            (alpha, poly_expr(rng, dim, coeff_degree, 2))
        })
        .collect();
    DiffOperator::from_terms(dim, terms)
}

/// Like [`operator`], but guaranteed nonzero.
pub fn nonzero_operator<R: Rng>(rng: &mut R, dim: usize, max_order: u32, coeff_degree: u32) -> DiffOperator {
    loop {
        let op = operator(rng, dim, max_order, coeff_degree);
        if !op.is_zero() {
            return op;
        }
    }
}

/// A word of coefficient and derivative factors.
pub fn factor_word<R: Rng>(rng: &mut R, dim: usize, max_factors: usize, coeff_degree: u32) -> Vec<Factor> {
    let len = rng.gen_range(1..=max_factors);
    (0..len)
        .map(|_| {
            if rng.gen_bool(0.5) {
                Factor::P(rng.gen_range(0..dim))
            } else {
                Factor::Coeff(poly_expr(rng, dim, coeff_degree, 2))
            }
        })
        .collect()
}

/// Uniform point in `[lo, hi]^dim`.
pub fn point<R: Rng>(rng: &mut R, dim: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..dim).map(|_| rng.gen_range(lo..hi)).collect()
}

/// Polynomial in `G_1..G_l` used as a noncommutative coefficient; often just a constant.
pub fn g_coefficient<R: Rng>(rng: &mut R, g_count: usize) -> Expr {
    if g_count == 0 || rng.gen_bool(0.5) {
        Expr::int(rng.gen_range(1..=3) * if rng.gen_bool(0.3) { -1 } else { 1 })
    } else {
        poly_expr(rng, g_count, 2, 2)
    }
}

/// Random noncommutative polynomial with words of length at most `max_len`.
pub fn ncpoly<R: Rng>(
    rng: &mut R,
    g_count: usize,
    f_count: usize,
    max_len: usize,
    max_terms: usize,
) -> crate::ncpoly::NCPolynomial {
    use crate::ncpoly::{NCMonomial, NCPolynomial};
    let n = rng.gen_range(1..=max_terms.max(1));
    let terms = (0..n)
        .map(|_| {
            let q = rng.gen_range(0..=max_len);
            let word: Vec<usize> = (0..q).map(|_| rng.gen_range(0..f_count)).collect();
            let coeffs = (0..=q)
                .map(|j| {
                    if j == 0 || rng.gen_bool(0.4) {
                        g_coefficient(rng, g_count)
                    } else {
                        Expr::one()
                    }
                })
                .collect();
            NCMonomial::new(word, coeffs).expect("matching lengths")
        })
        .collect();
    NCPolynomial::from_monomials(g_count, f_count, terms)
}
