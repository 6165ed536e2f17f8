use proptest::prelude::*;

use super::*;
use crate::diffop::{normalize, Factor};
use crate::parse::{parse_expr, parse_operator};
use crate::random;

fn op(text: &str, dim: usize) -> DiffOperator {
    parse_operator(text, dim).unwrap()
}

#[test]
fn exponential_examples() {
    let none = Params::new();
    assert_eq!(
        apply_to_exponential(&op("p1^2", 1), &[3.0], &[0.4], &none).unwrap(),
        9.0
    );
    assert_eq!(
        apply_to_exponential(&op("x1*p1 + 1", 1), &[2.0], &[5.0], &none).unwrap(),
        11.0
    );

    let h = op("1/2*(p1^2 + p2^2 + p3^2) - a/sqrt(x1^2 + x2^2 + x3^2)", 3);
    let params: Params = [("a".to_string(), 1.0)].into();
    let l = [0.3, -1.2, 2.0];
    let v = apply_to_exponential(&h, &l, &[0.0, 0.0, 2.0], &params).unwrap();
    let expected = (l[0] * l[0] + l[1] * l[1] + l[2] * l[2]) / 2.0 - 0.5;
    assert!((v - expected).abs() < 1e-14);
}

#[test]
fn symbolic_application_examples() {
    assert_eq!(
        apply_symbolic(&op("p1^2", 1), &parse_expr("x1^3", 1).unwrap()),
        parse_expr("6*x1", 1).unwrap().simplify()
    );
    let got = apply_symbolic(&op("x1*p1 + 1", 1), &parse_expr("sin(x1)", 1).unwrap());
    assert_eq!(got, parse_expr("x1*cos(x1) + sin(x1)", 1).unwrap().simplify());
}

#[test]
fn equality_examples() {
    let d = DomainSpec::new(1);
    let cfg = Config::default();
    let px = normalize(1, &[Factor::P(0), Factor::Coeff(Expr::var(0))]).unwrap();
    let r = operator_equal(&px, &op("x1*p1 + 1", 1), &d, &cfg).unwrap();
    assert!(r.equal && r.witness.is_none());
    assert_eq!(r.points, 20);

    let r = operator_equal(&op("p1^2", 1), &op("p1^2 + 1", 1), &d, &cfg).unwrap();
    assert!(!r.equal);
    assert!(r.witness.is_some());

    // a coefficient that only vanishes numerically
    let r = operator_equal(&op("(sin(x1)^2 + cos(x1)^2)*p1", 1), &op("p1", 1), &d, &cfg).unwrap();
    assert!(r.equal);
}

#[test]
fn grid_shape() {
    assert_eq!(
        lambda_grid(1, 2),
        vec![vec![1.0], vec![-1.0], vec![2.0], vec![-1.0], vec![1.0], vec![-2.0]]
    );
    assert_eq!(lambda_grid(3, 3).len(), 64);
    assert_eq!(lambda_grid(2, 1).len(), 8);
    assert_eq!(monomial_probes(2, 2).len(), 6);
}

#[test]
fn exponential_identity_on_catalog_style_operator() {
    let d = DomainSpec::new(2).with_bounds(1, 0.1, 3.0);
    let a = op("sin(x2)*p1^2 - cot(x2)*p2 + x1^2", 2);
    let r = check_exponential_identity(&a, &d, &Config::default()).unwrap();
    assert!(r.passes, "{r:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(30))]

    #[test]
    fn composition_is_application(seed in any::<u64>(), dim in 1usize..=2) {
        let mut rng = random::rng(seed);
        let a = random::operator(&mut rng, dim, 2, 2);
        let b = random::operator(&mut rng, dim, 2, 2);
        let psi = random::general_expr(&mut rng, dim, 2);
        let ab = a.compose(&b).unwrap();
        let lhs = apply_symbolic(&ab, &psi);
        let rhs = apply_symbolic(&a, &apply_symbolic(&b, &psi));
        let d = DomainSpec::new(dim);
        let verdict = crate::expr::is_zero_with(&(lhs - rhs), &d, &Config::default()).unwrap();
        prop_assert!(verdict.is_zero(), "{:?}", verdict);
    }

    #[test]
    fn composition_matches_leibniz_chain(seed in any::<u64>(), dim in 1usize..=3) {
        let mut rng = random::rng(seed);
        let a = random::operator(&mut rng, dim, 2, 2);
        let b = random::operator(&mut rng, dim, 2, 2);
        let d = DomainSpec::new(dim);
        let cfg = Config::default().with_samples(3);
        let chain = crate::diffop::compose_by_normalization(&a, &b).unwrap();
        let r = operator_equal(&a.compose(&b).unwrap(), &chain, &d, &cfg).unwrap();
        prop_assert!(r.equal, "{:?}", r);
    }

    #[test]
    fn exponential_identity(seed in any::<u64>(), dim in 1usize..=3) {
        let mut rng = random::rng(seed);
        let a = random::operator(&mut rng, dim, 3, 3);
        let r = check_exponential_identity(&a, &DomainSpec::new(dim), &Config::default()).unwrap();
        prop_assert!(r.passes, "{:?}", r);
    }
}
