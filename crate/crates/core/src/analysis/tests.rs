use proptest::prelude::*;

use super::*;
use crate::config::Config;
use crate::diffop::{DiffOperator, MultiIndex, Symbol};
use crate::expr::{DomainSpec, Expr, ZeroVerdict};
use crate::ncpoly::NCPolynomial;
use crate::parse::{parse_ncpoly, parse_operator};
use crate::random;

fn op(text: &str, dim: usize) -> DiffOperator {
    parse_operator(text, dim).unwrap()
}

fn sym(text: &str, dim: usize) -> Symbol {
    op(text, dim).into_symbol()
}

fn cfg() -> Config {
    Config::default()
}

fn at(x: &[f64], p: &[f64], domain: &DomainSpec) -> PhaseSample {
    PhaseSample::new(x.to_vec(), p.to_vec(), domain).unwrap()
}

fn kepler_domain() -> DomainSpec {
    DomainSpec::new(3)
        .with_param("a", 1.0)
        .exclude(crate::parse::parse_expr("x1^2 + x2^2 + x3^2", 3).unwrap())
}

#[test]
fn bracket_examples() {
    assert_eq!(
        poisson_bracket(&sym("p1", 1), &sym("x1", 1)).unwrap(),
        Symbol::constant(1, 1)
    );
    let a = sym("x1*p1^2 + cos(x1)", 1);
    assert!(poisson_bracket(&a, &a).unwrap().is_zero());
    let b = poisson_bracket(&sym("x1*p1^2", 1), &sym("p1", 1)).unwrap();
    assert_eq!(b, sym("-p1^2", 1));
    let c = op("x1*p1^2", 1).commutator(&op("p1", 1)).unwrap();
    assert_eq!(c.homogeneous_part(2).into_symbol(), b);

    assert_eq!(
        poisson_semibracket(&sym("p1^2", 1), &sym("x1", 1)).unwrap(),
        sym("2*p1", 1)
    );
    assert!(poisson_semibracket(&sym("sin(x1)", 1), &sym("x1^2", 1))
        .unwrap()
        .is_zero());
    assert!(matches!(
        poisson_bracket(&sym("p1", 1), &sym("p1", 2)),
        Err(crate::Error::DimensionMismatch { .. })
    ));
}

#[test]
fn main_dimension_examples() {
    let d2 = DomainSpec::new(2);
    let standard = vec![op("x1", 2), op("x2", 2), op("p1", 2), op("p2", 2)];
    let r = main_dimension(&standard, &at(&[0.3, -1.0], &[0.5, 0.7], &d2), &d2, &cfg()).unwrap();
    assert_eq!(r.rank, 4);

    let osc = vec![op("(p1^2 + x1^2)/2", 2), op("(p2^2 + x2^2)/2", 2)];
    assert_eq!(
        main_dimension(&osc, &at(&[0.3, 1.0], &[0.5, -0.7], &d2), &d2, &cfg())
            .unwrap()
            .rank,
        2
    );
    assert_eq!(
        main_dimension(&osc, &at(&[0.3, 1.0], &[0.0, -0.7], &d2), &d2, &cfg())
            .unwrap()
            .rank,
        1
    );

    let d1 = DomainSpec::new(1);
    let pair = vec![op("p1 + x1^2", 1), op("p1 + sin(x1)", 1)];
    assert_eq!(
        main_dimension(&pair, &at(&[0.4], &[1.2], &d1), &d1, &cfg())
            .unwrap()
            .rank,
        1
    );
    let b = rank_bracket(&pair, &at(&[0.4], &[1.2], &d1), &d1, &cfg()).unwrap();
    assert_eq!(b, RankBracket { lower: 1, upper: 2 });
}

#[test]
fn quasi_independence_examples() {
    let d1 = DomainSpec::new(1);
    let r = quasi_independence(&[op("x1", 1), op("p1", 1)], &d1, &cfg()).unwrap();
    assert_eq!(r.verdict, RankVerdict::GloballyQuasiIndependent);
    assert_eq!(r.full_rank_fraction, 1.0);
    assert_eq!(r.points.len(), 20);

    let r = quasi_independence(&[op("p1 + x1^2", 1), op("p1 + x1^3", 1)], &d1, &cfg()).unwrap();
    assert_eq!(r.verdict, RankVerdict::Degenerate);
    assert_eq!(r.rank_histogram.get(&1), Some(&20));

    let again = quasi_independence(&[op("p1 + x1^2", 1), op("p1 + x1^3", 1)], &d1, &cfg()).unwrap();
    assert_eq!(r, again);
}

#[test]
fn commutation_examples() {
    let d2 = DomainSpec::new(2);
    let osc = vec![op("(p1^2 + x1^2)/2", 2), op("(p2^2 + x2^2)/2", 2)];
    let m = check_commutation(&osc, 2, &d2, &cfg()).unwrap();
    assert!(m.all_zero);
    assert_eq!(m.entries.len(), 1);

    let d = kepler_domain();
    let h = op("1/2*(p1^2 + p2^2 + p3^2) - a/sqrt(x1^2 + x2^2 + x3^2)", 3);
    let mz = op("x1*p2 - x2*p1", 3);
    let m = check_commutation(&[h, mz], 1, &d, &cfg()).unwrap();
    assert!(m.all_zero, "{m:?}");

    let d1 = DomainSpec::new(1);
    let m = check_commutation(&[op("p1", 1), op("x1", 1)], 1, &d1, &cfg()).unwrap();
    assert!(matches!(m.entries[0].verdict, ZeroVerdict::NonZero { .. }));
    assert_eq!(m.failing(), vec![(0, 1)]);
    assert!(check_commutation(&[op("p1", 1)], 2, &d1, &cfg()).is_err());
}

#[test]
fn integrable_set_examples() {
    let d2 = DomainSpec::new(2);
    let osc = vec![op("(p1^2 + x1^2)/2", 2), op("(p2^2 + x2^2)/2", 2)];
    let r = check_integrable_set(&osc, 2, &d2, &cfg()).unwrap();
    assert!(r.passes(), "{r:?}");
    assert!(r.classical.all_zero);
    assert!(r.warnings.is_empty());

    let dup = vec![op("(p1^2 + x1^2)/2", 2), op("(p1^2 + x1^2)/2", 2)];
    let r = check_integrable_set(&dup, 2, &d2, &cfg()).unwrap();
    assert!(matches!(r.verdict, IntegrableVerdict::NotQuasiIndependent { .. }));

    let d1 = DomainSpec::new(1);
    let r = check_integrable_set(&[op("p1", 1), op("x1", 1)], 1, &d1, &cfg()).unwrap();
    assert!(matches!(r.verdict, IntegrableVerdict::NotCommuting { .. }));
}

#[test]
fn family_bound() {
    let d1 = DomainSpec::new(1);
    let rep = check_family_bound(&[op("p1", 1)], &[op("p1^2 + 1", 1)], &d1, &cfg()).unwrap();
    assert!(rep.commute && !rep.violation);
}

#[test]
fn regular_correlation_examples() {
    let d1 = DomainSpec::new(1).with_param("c", 2.0);
    let pt = at(&[0.3], &[0.8], &d1);
    // W1 - W2 - c with W = (p + f, p + f - c)
    let s = parse_ncpoly("F1 - F2 - c", 0, 2).unwrap();
    let w = [op("p1 + sin(x1)", 1), op("p1 + sin(x1) - c", 1)];
    let r = check_regular_correlation(&s, &[], &w, &pt, &d1, &cfg()).unwrap();
    assert!(r.passes(), "{r:?}");

    // GF - FG + 1 on (x, p): vanishes, but its main part abelianizes to zero
    let s = parse_ncpoly("G1*F1 - F1*G1 + 1", 1, 1).unwrap();
    let r = check_regular_correlation(&s, &[op("x1", 1)], &[op("p1", 1)], &pt, &d1, &cfg()).unwrap();
    assert_eq!(r.verdict, CorrelationVerdict::DegenerateGradient);
    assert!(r.operator.is_zero());

    let s = parse_ncpoly("F1 - F1", 0, 1).unwrap();
    let r = check_regular_correlation(&s, &[], &[op("p1", 1)], &pt, &d1, &cfg()).unwrap();
    assert_eq!(r.verdict, CorrelationVerdict::ZeroPolynomial);

    let s = parse_ncpoly("F1 - F2", 0, 2).unwrap();
    let r = check_regular_correlation(&s, &[], &w, &pt, &d1, &cfg()).unwrap();
    assert_eq!(r.verdict, CorrelationVerdict::NonVanishing);
}

#[test]
fn span_containment_examples() {
    let d1 = DomainSpec::new(1);
    let pt = at(&[0.3], &[0.8], &d1);
    let y = [op("p1", 1), op("x1", 1)];
    let r = check_span_containment(&y[..1], &y, &pt, &d1, &cfg()).unwrap();
    assert!(r.passes && r.residuals[0] < 1e-12);
    let r = check_span_containment(&[op("p1^2", 1)], &[op("p1", 1)], &pt, &d1, &cfg()).unwrap();
    assert!(r.passes && r.rank_bound_holds);
    let r = check_span_containment(&[op("x1", 1)], &[op("p1", 1)], &pt, &d1, &cfg()).unwrap();
    assert!(!r.passes);
}

#[test]
fn algebraic_dependence_examples() {
    let d2 = DomainSpec::new(2);
    let pt = at(&[0.3, -0.4], &[0.8, 1.1], &d2);
    // W_i = S_i(Y): W = (Y1*Y2, Y1^2 + Y2), Y = (p1, x2*p2)
    let y = vec![op("p1", 2), op("x2*p2", 2)];
    let w = vec![op("p1*x2*p2", 2), op("p1^2 + x2*p2", 2)];
    let map = VariableMap {
        g: vec![],
        f: vec![0, 1, 2, 3],
    };
    let polys = vec![
        parse_ncpoly("F1 - F3*F4", 0, 4).unwrap(),
        parse_ncpoly("F2 - F3^2 - F4", 0, 4).unwrap(),
    ];
    let r = check_algebraic_dependence(&polys, &map, &w, &y, &pt, &d2, &cfg()).unwrap();
    assert!(r.passes(), "{r:?}");
    assert_eq!(r.jacobian, vec![vec![1.0, 0.0], vec![0.0, 1.0]]);
    assert!(r.containment.as_ref().unwrap().passes);

    // any W depends on the standard set through its own representation
    let d1 = DomainSpec::new(1);
    let pt1 = at(&[0.7], &[-0.5], &d1);
    let w = vec![op("x1^2*p1^2 + sin(x1)*p1 + 3", 1)];
    let y = vec![op("x1", 1), op("p1", 1)];
    let s = parse_ncpoly("F1 - G1^2*F2^2 - sin(G1)*F2 - 3", 1, 2).unwrap();
    let map = VariableMap {
        g: vec![1],
        f: vec![0, 2],
    };
    assert_eq!(map, VariableMap::by_order(&[w[0].clone(), y[0].clone(), y[1].clone()]));
    let r = check_algebraic_dependence(&[s], &map, &w, &y, &pt1, &d1, &cfg()).unwrap();
    assert!(r.passes(), "{r:?}");

    // a set depends on any superset of itself
    let w = vec![op("p1^2 + x1", 1)];
    let y = vec![op("p1^2 + x1", 1), op("p1", 1)];
    let s = parse_ncpoly("F1 - F2", 0, 3).unwrap();
    let r = check_algebraic_dependence(
        std::slice::from_ref(&s),
        &VariableMap {
            g: vec![],
            f: vec![0, 1, 2],
        },
        &w,
        &y,
        &pt1,
        &d1,
        &cfg(),
    )
    .unwrap();
    assert!(r.passes());

    // a wrong witness does not vanish
    let s = parse_ncpoly("F1 - F3", 0, 3).unwrap();
    let r = check_algebraic_dependence(
        &[s],
        &VariableMap {
            g: vec![],
            f: vec![0, 1, 2],
        },
        &w,
        &y,
        &pt1,
        &d1,
        &cfg(),
    )
    .unwrap();
    assert_eq!(r.verdict, DependenceVerdict::NonVanishing);
}

#[test]
fn containment_chain() {
    let d1 = DomainSpec::new(1);
    let pt = at(&[0.7], &[-0.5], &d1);
    let a = vec![op("p1^4", 1)];
    let b = vec![op("p1^2", 1)];
    let c = vec![op("p1", 1)];
    let map = VariableMap {
        g: vec![],
        f: vec![0, 1],
    };
    let chain = vec![
        ChainLink {
            polys: vec![parse_ncpoly("F1 - F2^2", 0, 2).unwrap()],
            map: map.clone(),
            w: a,
            y: b.clone(),
        },
        ChainLink {
            polys: vec![parse_ncpoly("F1 - F2^2", 0, 2).unwrap()],
            map,
            w: b,
            y: c,
        },
    ];
    let r = check_containment_chain(&chain, &pt, &d1, &cfg()).unwrap();
    assert!(r.passes && r.connected);
}

#[test]
fn necessary_condition_examples() {
    let d1 = DomainSpec::new(1);
    let pt = at(&[0.6], &[1.3], &d1);
    let pass = [op("p1 + x1^2", 1), op("p1 + x1^2 + 3", 1)];
    let r = check_necessary_dependence_condition(&pass, &pt, &d1, &cfg()).unwrap();
    assert!(r.passes(), "{r:?}");
    assert_eq!(r.rank, 1);

    let fail = [op("p1 + x1^2", 1), op("p1 + x1^3", 1)];
    let r = check_necessary_dependence_condition(&fail, &pt, &d1, &cfg()).unwrap();
    assert!(
        matches!(r.verdict, NecessaryVerdict::ViolatesNecessaryCondition { .. }),
        "{r:?}"
    );
    // γ ∝ (1, -1) and the dx-coefficient of v is (f' - g')/√2
    assert!((r.gamma[0] - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    let expected = (2.0 * 0.6 - 3.0 * 0.36) / 2f64.sqrt();
    assert!((r.covector[0] - expected).abs() < 1e-12);

    let r = check_necessary_dependence_condition(&[op("x1", 1), op("p1", 1)], &pt, &d1, &cfg()).unwrap();
    assert_eq!(r.verdict, NecessaryVerdict::NotApplicable { rank: 2 });
}

#[test]
fn second_main_covector_closed_form() {
    // W1 = p^2 + f1 p + f0, W2 = p^3 + g2 p^2: γ = (m p^m, -l p^l)
    let d1 = DomainSpec::new(1);
    let w = [op("p1^2 + x1^3*p1 + 1", 1), op("p1^3 + cos(x1)*p1^2 + x1", 1)];
    let (x, p) = (0.4, 1.7);
    let pt = at(&[x], &[p], &d1);
    let (l, m) = (2.0, 3.0);
    let gamma = [m * p.powf(m), -l * p.powf(l)];
    let v = second_main_covector(&w, &gamma, &pt, &d1, &cfg()).unwrap();
    let closed = p.powf(l + m - 1.0) * (m * 3.0 * x * x - l * -x.sin());
    assert!((v[0] - closed).abs() < 1e-10 * closed.abs().max(1.0));
}

#[test]
fn preind2_examples() {
    let d1 = DomainSpec::new(1);
    let pt = at(&[0.6], &[1.3], &d1);
    let y = [op("p1^2", 1), op("x1", 1)];
    let r = check_preind2_relations(&y[..1], &y, &pt, &d1, &cfg()).unwrap();
    assert!(r.passes, "{r:?}");
    assert!(r.a_unique);
    assert!((r.a[0][0] - 1.0).abs() < 1e-12 && r.a[0][1].abs() < 1e-12);

    let r = check_preind2_relations(&[op("p1^2 + x1", 1)], &y, &pt, &d1, &cfg()).unwrap();
    assert!(r.passes, "{r:?}");

    let fail = [op("p1 + x1^2", 1), op("p1 + x1^3", 1)];
    let r = check_preind2_relations(&fail, &[op("p1 + x1", 1)], &pt, &d1, &cfg()).unwrap();
    assert!(!r.passes, "{r:?}");
}

#[test]
fn rank_is_lower_semicontinuous() {
    let d2 = DomainSpec::new(2);
    let mut rng = random::rng(5);
    for _ in 0..10 {
        let ops: Vec<DiffOperator> = (0..3).map(|_| random::nonzero_operator(&mut rng, 2, 3, 2)).collect();
        let (x, p) = d2.sample_phase(&mut rng).unwrap();
        let pt = at(&x, &p, &d2);
        let r0 = main_dimension(&ops, &pt, &d2, &cfg()).unwrap().rank;
        for r in perturbed_ranks(&ops, &pt, 10, &d2, &cfg()).unwrap() {
            assert!(r.rank >= r0);
        }
    }
}

fn random_symbol(rng: &mut random::TestRng, dim: usize) -> Symbol {
    random::operator(rng, dim, 3, 2).into_symbol()
}

fn assert_numeric_zero(s: &Symbol, dim: usize) {
    let mut rng = random::rng(9);
    let d = DomainSpec::new(dim);
    for _ in 0..5 {
        let (x, p) = d.sample_phase(&mut rng).unwrap();
        let v = s.eval(&x, &p, &Default::default()).unwrap();
        let m = s.magnitude(&x, &p, &Default::default()).unwrap();
        assert!(v.abs() <= 1e-9 * m.max(1.0), "{v} vs {m}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn bracket_identities(seed in any::<u64>(), dim in 1usize..=2) {
        let mut rng = random::rng(seed);
        let a = random_symbol(&mut rng, dim);
        let b = random_symbol(&mut rng, dim);
        let c = random_symbol(&mut rng, dim);
        let ab = poisson_bracket(&a, &b).unwrap();
        prop_assert_eq!(&ab, &poisson_bracket(&b, &a).unwrap().neg());
        prop_assert_eq!(&ab, &(&poisson_semibracket(&a, &b).unwrap() - &poisson_semibracket(&b, &a).unwrap()));
        let jacobi = &(&poisson_bracket(&a, &poisson_bracket(&b, &c).unwrap()).unwrap()
            + &poisson_bracket(&b, &poisson_bracket(&c, &a).unwrap()).unwrap())
            + &poisson_bracket(&c, &ab).unwrap();
        assert_numeric_zero(&jacobi, dim);
        let leibniz = &poisson_bracket(&a, &(&b * &c)).unwrap()
            - &(&(&ab * &c) + &(&b * &poisson_bracket(&a, &c).unwrap()));
        prop_assert!(leibniz.is_zero());
    }

    #[test]
    fn commutator_top_is_the_bracket(seed in any::<u64>(), dim in 1usize..=3) {
        let mut rng = random::rng(seed);
        let a = random::nonzero_operator(&mut rng, dim, 3, 2);
        let b = random::nonzero_operator(&mut rng, dim, 3, 2);
        let (k, l) = (a.order().unwrap(), b.order().unwrap());
        let c = a.commutator(&b).unwrap();
        if let Some(o) = c.order() {
            prop_assert!(o < k + l);
        }
        if k + l >= 1 {
            let top = c.homogeneous_part(k + l - 1).into_symbol();
            let bracket = poisson_bracket(a.main_part().symbol(), b.main_part().symbol()).unwrap();
            prop_assert_eq!(top, bracket);
        }
    }
}

#[test]
fn multi_index_import_is_used() {
    let _ = MultiIndex::zero(1);
    let _ = NCPolynomial::zero(0, 0);
    let _ = Expr::one();
}
