use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::random;

fn x(i: usize) -> Expr {
    Expr::var(i)
}

fn no_params() -> Params {
    Params::new()
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}

#[test]
fn power_rule() {
    let d = x(0).pow(2).differentiate(0, 1).unwrap();
    assert_eq!(d, (Expr::int(2) * x(0)).simplify());
}

#[test]
fn cosine_derivative() {
    let d = x(0).cos().differentiate(0, 1).unwrap();
    assert_eq!(d, (-x(0).sin()).simplify());
}

#[test]
fn cot_derivative_matches_central_difference() {
    let e = x(0).cot();
    let d = e.differentiate(0, 1).unwrap();
    let h = 1e-5;
    let fd =
        (e.evaluate(&[0.7 + h], &no_params()).unwrap() - e.evaluate(&[0.7 - h], &no_params()).unwrap()) / (2.0 * h);
    let exact = d.evaluate(&[0.7], &no_params()).unwrap();
    let closed = -1.0 / 0.7f64.sin().powi(2);
    assert!((exact - closed).abs() < 1e-12);
    assert!(rel_close(exact, fd, 1e-8), "{exact} vs {fd}");
}

#[test]
fn derivative_index_out_of_range() {
    assert_eq!(
        x(0).differentiate(2, 2),
        Err(Error::VariableOutOfRange { index: 2, dim: 2 })
    );
}

#[test]
fn evaluation_examples() {
    let e = x(0).pow(2) + x(1).pow(2);
    assert_eq!(e.evaluate(&[3.0, 4.0], &no_params()).unwrap(), 25.0);

    let r = (x(0).pow(2) + x(1).pow(2) + x(2).pow(2)).sqrt().recip();
    assert!((r.evaluate(&[0.0, 0.0, 2.0], &no_params()).unwrap() - 0.5).abs() < 1e-15);

    let t = x(0).sin() * x(0).cos() - (Expr::int(2) * x(0)).sin() / Expr::int(2);
    assert!(t.evaluate(&[0.93], &no_params()).unwrap().abs() < 1e-12);
}

#[test]
fn evaluation_errors() {
    assert_eq!(
        Expr::param("a").evaluate(&[], &no_params()),
        Err(Error::UnboundParameter("a".into()))
    );
    assert!(matches!(
        x(0).recip().evaluate(&[0.0], &no_params()),
        Err(Error::Singular(_))
    ));
    assert!(matches!(
        x(0).cot().evaluate(&[1e-9], &no_params()),
        Err(Error::Singular(_))
    ));
    assert!(matches!(
        x(0).tan().evaluate(&[std::f64::consts::FRAC_PI_2], &no_params()),
        Err(Error::Singular(_))
    ));
    assert!(matches!(
        x(3).evaluate(&[1.0], &no_params()),
        Err(Error::VariableOutOfRange { .. })
    ));
    let mut p = no_params();
    p.insert("a".into(), 2.5);
    assert_eq!(Expr::param("a").evaluate(&[], &p).unwrap(), 2.5);
}

#[test]
fn simplify_examples() {
    assert_eq!((x(0) * Expr::one() + Expr::zero()).simplify(), x(0));
    let e = Expr::int(2) * Expr::rat(1, 2) * Expr::int(3) - Expr::int(3);
    assert!(e.simplify().is_zero_const());
    assert_eq!(x(0).pow(0).simplify(), Expr::one());
    assert!((Expr::zero() * x(0).sin()).simplify().is_zero_const());
    assert_eq!((x(0) + x(0)).simplify(), (Expr::int(2) * x(0)).simplify());
    // expansion of positive powers of sums
    let lhs = (x(0) + x(1)).pow(2).simplify();
    let rhs = (x(0).pow(2) + Expr::int(2) * x(0) * x(1) + x(1).pow(2)).simplify();
    assert_eq!(lhs, rhs);
    // sqrt(a)^2 = a
    let s = (x(0).pow(2) + Expr::one()).sqrt();
    assert_eq!(s.clone().pow(2).simplify(), (x(0).pow(2) + Expr::one()).simplify());
    assert_eq!(Expr::int(4).sqrt().simplify(), Expr::int(2));
    // odd and even functions absorb the sign
    assert_eq!((-x(0)).sin().simplify(), (-x(0).sin()).simplify());
    assert_eq!((-x(0)).cos().simplify(), x(0).cos());
}

#[test]
fn zero_verdicts() {
    let d = DomainSpec::new(1);
    let pyth = x(0).sin().pow(2) + x(0).cos().pow(2) - Expr::one();
    assert!(matches!(
        is_zero(&pyth, &d, 20, 0).unwrap(),
        ZeroVerdict::NumericZero { .. } | ZeroVerdict::SymbolicZero
    ));
    assert_eq!(is_zero(&(x(0) - x(0)), &d, 20, 0).unwrap(), ZeroVerdict::SymbolicZero);
    match is_zero(&(x(0).pow(2) - Expr::one()), &d, 20, 0).unwrap() {
        ZeroVerdict::NonZero { witness, value } => {
            assert!((witness[0].abs() - 1.0).abs() > 1e-6);
            assert!(value.abs() > 0.0);
        }
        v => panic!("expected a witness, got {v:?}"),
    }
    assert!(matches!(is_zero(&x(0), &d, 0, 0), Err(Error::InvalidArgument(_))));
}

#[test]
fn sampling_respects_exclusions() {
    let d = DomainSpec::new(1).with_bounds(0, -1.0, 1.0).exclude(x(0));
    let mut rng = domain::rng_from_seed(3);
    for _ in 0..100 {
        let p = d.sample_point(&mut rng).unwrap();
        assert!(p[0].abs() > d.exclusion_tol);
    }
    // an exclusion that vanishes on the whole box exhausts the sampler
    let dead = DomainSpec::new(1).exclude(x(0) - x(0));
    assert!(matches!(
        dead.sample_point(&mut rng),
        Err(Error::SamplingExhausted { .. })
    ));
}

#[test]
fn zero_test_is_deterministic() {
    let d = DomainSpec::new(2);
    let e = x(0) * x(1) - Expr::rat(1, 3);
    assert_eq!(is_zero(&e, &d, 20, 9).unwrap(), is_zero(&e, &d, 20, 9).unwrap());
}

#[test]
fn display_forms() {
    assert_eq!((x(0).pow(2) - x(1)).simplify().to_string(), "x1^2 - x2");
    assert_eq!(x(0).pow(-2).simplify().to_string(), "x1^(-2)");
    assert_eq!((Expr::rat(1, 2) * x(0)).simplify().to_string(), "1/2*x1");
    assert_eq!((-x(0).sin()).simplify().to_string(), "-sin(x1)");
}

/// Sum of absolute values of the top-level terms, the scale of rounding error after expansion.
fn term_magnitude(e: &Expr, pt: &[f64]) -> f64 {
    match e {
        Expr::Add(ts) => ts
            .iter()
            .map(|t| t.evaluate(pt, &no_params()).map(f64::abs).unwrap_or(0.0))
            .sum(),
        _ => e.evaluate(pt, &no_params()).map(f64::abs).unwrap_or(0.0),
    }
}

/// First-order amplification of input rounding, `Σ |∂_i e| max(|x_i|, 1)`.
fn sensitivity(e: &Expr, pt: &[f64]) -> f64 {
    (0..pt.len())
        .map(|i| {
            let d = e.derivative(i).evaluate(pt, &no_params()).map(f64::abs).unwrap_or(0.0);
            d * pt[i].abs().max(1.0)
        })
        .sum()
}

fn eval_points(seed: u64, dim: usize, n: usize) -> Vec<Vec<f64>> {
    let mut rng = random::rng(seed);
    (0..n).map(|_| random::point(&mut rng, dim, -2.0, 2.0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn derivative_is_linear(seed in any::<u64>(), a in -5i64..5, b in 1i64..5) {
        let mut rng = random::rng(seed);
        let e1 = random::general_expr(&mut rng, 2, 3);
        let e2 = random::general_expr(&mut rng, 2, 3);
        let (ra, rb) = (Expr::int(a), Expr::rat(1, b));
        let lhs = (ra.clone() * e1.clone() + rb.clone() * e2.clone()).derivative(0);
        let rhs = (ra * e1.derivative(0) + rb * e2.derivative(0)).simplify();
        prop_assert_eq!(&lhs, &rhs);
        for pt in eval_points(seed, 2, 20) {
            if let (Ok(l), Ok(r)) = (lhs.evaluate(&pt, &no_params()), rhs.evaluate(&pt, &no_params())) {
                prop_assert!(rel_close(l, r, 1e-10));
            }
        }
    }

    #[test]
    fn product_rule(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let f = random::general_expr(&mut rng, 2, 3);
        let g = random::general_expr(&mut rng, 2, 3);
        let lhs = (f.clone() * g.clone()).derivative(1);
        let rhs = f.derivative(1) * g.clone() + f.clone() * g.derivative(1);
        for pt in eval_points(seed ^ 1, 2, 20) {
            if let (Ok(l), Ok(r)) = (lhs.evaluate(&pt, &no_params()), rhs.evaluate(&pt, &no_params())) {
                prop_assert!(rel_close(l, r, 1e-8), "{} vs {}", l, r);
            }
        }
    }

    #[test]
    fn simplify_preserves_values(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let e = random::general_expr(&mut rng, 3, 4);
        let s = e.simplify();
        for pt in eval_points(seed ^ 2, 3, 20) {
            if let (Ok(a), Ok(b)) = (e.evaluate(&pt, &no_params()), s.evaluate(&pt, &no_params())) {
                let scale = term_magnitude(&s, &pt).max(a.abs()).max(1.0) + sensitivity(&e, &pt);
                prop_assert!((a - b).abs() <= 1e-12 * scale, "{} vs {} for {}", a, b, e);
            }
        }
    }

    #[test]
    fn simplify_is_idempotent(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let e = random::general_expr(&mut rng, 3, 4).simplify();
        prop_assert_eq!(e.simplify(), e);
    }

    #[test]
    fn mixed_partials_commute(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let e = random::general_expr(&mut rng, 2, 3);
        let d01 = e.derivative(0).derivative(1);
        let d10 = e.derivative(1).derivative(0);
        for pt in eval_points(seed ^ 3, 2, 20) {
            if let (Ok(a), Ok(b)) = (d01.evaluate(&pt, &no_params()), d10.evaluate(&pt, &no_params())) {
                prop_assert!(rel_close(a, b, 1e-10), "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn difference_with_itself_vanishes(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let e = random::general_expr(&mut rng, 2, 4);
        prop_assert!((e.clone() - e).simplify().is_zero_const());
    }
}
