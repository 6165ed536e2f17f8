use proptest::prelude::*;

use super::*;
use crate::analysis::poisson_bracket;
use crate::diffop::MultiIndex;
use crate::random;

fn g(j: usize) -> Expr {
    Expr::var(j)
}

fn cfg() -> Config {
    Config::default()
}

fn none() -> Params {
    Params::new()
}

fn mono(word: &[usize], coeffs: Vec<Expr>) -> NCMonomial {
    NCMonomial::new(word.to_vec(), coeffs).unwrap()
}

#[test]
fn abelianization_examples() {
    let f1 = NCPolynomial::f(0, 2, 0);
    let f2 = NCPolynomial::f(0, 2, 1);
    assert!((&(&f1 * &f2) - &(&f2 * &f1)).abelianize().is_zero());

    let s = NCPolynomial::from_monomials(
        1,
        2,
        vec![
            mono(&[0, 1], vec![g(0), g(0).pow(2), Expr::one()]),
            mono(&[0, 1], vec![Expr::int(2), g(0), Expr::one()]),
        ],
    );
    let t = s.abelianize();
    assert_eq!(t.terms().len(), 1);
    assert_eq!(t.terms()[&vec![1, 1]], (g(0).pow(3) + Expr::int(2) * g(0)).simplify());

    let gf = &NCPolynomial::g(1, 1, 0) * &NCPolynomial::f(1, 1, 0);
    let t = (&gf * &gf).abelianize();
    assert_eq!(t.terms()[&vec![2]], g(0).pow(2).simplify());
}

#[test]
fn quasi_homogeneous_parts() {
    let f1 = NCPolynomial::f(0, 2, 0);
    let f2 = NCPolynomial::f(0, 2, 1);
    let s = &f1 * &f2;
    assert_eq!(s.quasi_homogeneous_part(3, &[1, 2]), s);
    assert!(s.quasi_homogeneous_part(2, &[1, 2]).terms().is_empty());

    let s = &(&f1 * &f1) + &f2;
    let parts = s.degree_and_main(&[1, 3], &none(), &cfg()).unwrap();
    assert_eq!(parts.degree, Some(3));
    assert_eq!(parts.main, f2);
    assert_eq!(parts.second, &f1 * &f1);

    let zero = NCPolynomial::zero(0, 2);
    let parts = zero.degree_and_main(&[1, 3], &none(), &cfg()).unwrap();
    assert_eq!(parts.degree, None);
    assert!(parts.main.terms().is_empty() && parts.second.terms().is_empty());
}

#[test]
fn main_part_keeps_balanced_terms() {
    // W^j - S(Y) with deg_Y S = j ord W: both terms survive in the main part
    let w = NCPolynomial::f(0, 3, 0);
    let y1 = NCPolynomial::f(0, 3, 1);
    let y2 = NCPolynomial::f(0, 3, 2);
    let s = &(&w * &w) - &(&y1 * &y2);
    let parts = s.degree_and_main(&[2, 1, 3], &none(), &cfg()).unwrap();
    assert_eq!(parts.degree, Some(4));
    assert_eq!(parts.main.terms().len(), 2);
}

#[test]
fn canonical_zero_test() {
    let gf = &NCPolynomial::g(1, 1, 0) * &NCPolynomial::f(1, 1, 0);
    let fg = &NCPolynomial::f(1, 1, 0) * &NCPolynomial::g(1, 1, 0);
    assert!(!(&gf - &fg).is_zero(&none(), &cfg()).unwrap());
    assert!((&gf - &gf).is_zero(&none(), &cfg()).unwrap());
    let f = NCPolynomial::f(0, 1, 0);
    assert!((&f - &f).is_zero(&none(), &cfg()).unwrap());
    // sin^2 + cos^2 - 1 as a coefficient vanishes only numerically
    let z = g(0).sin().pow(2) + g(0).cos().pow(2) - Expr::one();
    let s = NCPolynomial::f(1, 1, 0).scale(&z);
    assert!(s.is_zero(&none(), &cfg()).unwrap());
}

#[test]
fn substitution_examples() {
    let x = DiffOperator::position(1, 0);
    let p = DiffOperator::momentum(1, 0);
    let f1 = NCPolynomial::f(0, 2, 0);
    let f2 = NCPolynomial::f(0, 2, 1);
    let s = &(&f1 * &f2) - &(&f2 * &f1);
    assert_eq!(
        s.substitute(&[], &[x.clone(), p.clone()]).unwrap(),
        DiffOperator::constant(1, -1)
    );
    let w = DiffOperator::from_terms(
        1,
        [
            (MultiIndex::new(vec![2]), Expr::var(0).cos()),
            (MultiIndex::new(vec![0]), Expr::one()),
        ],
    );
    assert_eq!(f1.substitute(&[], &[w.clone(), p.clone()]).unwrap(), w);

    assert!(matches!(
        f1.substitute(&[], std::slice::from_ref(&w)),
        Err(Error::ArityMismatch { .. })
    ));
    let with_g = NCPolynomial::g(1, 1, 0);
    assert_eq!(
        with_g.substitute(std::slice::from_ref(&p), std::slice::from_ref(&p)),
        Err(Error::NotOrderZero { index: 0 })
    );
}

#[test]
fn standard_set_reconstruction() {
    // W = Σ A_α(X) P^α rebuilt from (X, P) = (x, p)
    let mut rng = random::rng(11);
    for _ in 0..10 {
        let w = random::operator(&mut rng, 2, 3, 2);
        let mut terms = Vec::new();
        for (alpha, c) in w.terms() {
            let mut word = Vec::new();
            for i in 0..2 {
                word.extend((0..alpha.get(i)).map(|_| i));
            }
            let mut coeffs = vec![Expr::one(); word.len() + 1];
            coeffs[0] = c.clone();
            terms.push(mono(&word, coeffs));
        }
        let s = NCPolynomial::from_monomials(2, 2, terms);
        let xs = [DiffOperator::position(2, 0), DiffOperator::position(2, 1)];
        let ps = [DiffOperator::momentum(2, 0), DiffOperator::momentum(2, 1)];
        assert_eq!(s.substitute(&xs, &ps).unwrap(), w);
    }
}

#[test]
fn top_identity_examples() {
    let domain = DomainSpec::new(1);
    let p = DiffOperator::momentum(1, 0);
    let xp = DiffOperator::monomial(1, MultiIndex::new(vec![1]), Expr::var(0));
    let f1 = NCPolynomial::f(0, 2, 0);
    let f2 = NCPolynomial::f(0, 2, 1);

    let s = &f1 * &f2;
    let r = verify_top_identity(&s, &[], &[p.clone(), xp.clone()], &domain, &cfg()).unwrap();
    assert_eq!(r.degree, Some(2));
    assert!(r.top_exact && r.second_exact, "{r:?}");

    let single = NCPolynomial::f(0, 1, 0);
    let w = DiffOperator::from_terms(
        1,
        [
            (MultiIndex::new(vec![2]), Expr::var(0)),
            (MultiIndex::new(vec![1]), Expr::var(0).sin()),
        ],
    );
    let r = verify_top_identity(&single, &[], &[w], &domain, &cfg()).unwrap();
    assert!(r.passes(1e-8), "{r:?}");

    // a commutator: zero at the top degree, the Poisson bracket one below
    let comm = &(&f1 * &f2) - &(&f2 * &f1);
    let a = DiffOperator::from_terms(1, [(MultiIndex::new(vec![2]), Expr::var(0).pow(2))]);
    let b = DiffOperator::from_terms(1, [(MultiIndex::new(vec![1]), Expr::var(0).cos())]);
    let r = verify_top_identity(&comm, &[], &[a.clone(), b.clone()], &domain, &cfg()).unwrap();
    assert!(r.passes(1e-8), "{r:?}");
    let op = comm.substitute(&[], &[a.clone(), b.clone()]).unwrap();
    assert!(op.homogeneous_part(3).is_zero());
    let bracket = poisson_bracket(a.symbol(), b.symbol()).unwrap();
    assert_eq!(op.homogeneous_part(2).into_symbol(), bracket);
}

#[test]
fn display_forms() {
    let gf = &NCPolynomial::g(1, 2, 0) * &NCPolynomial::f(1, 2, 1);
    let s = &gf - &NCPolynomial::scalar(1, 2, Expr::int(3));
    assert_eq!(s.to_string(), "-3 + G1*F2");
    assert_eq!(NCPolynomial::zero(0, 1).to_string(), "0");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn abelianization_is_an_algebra_map(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let s = random::ncpoly(&mut rng, 1, 3, 3, 3);
        let t = random::ncpoly(&mut rng, 1, 3, 3, 3);
        prop_assert_eq!((&s * &t).abelianize(), s.abelianize().mul(&t.abelianize()));
        prop_assert_eq!((&s + &t).abelianize(), s.abelianize().add(&t.abelianize()));
    }

    #[test]
    fn nonzero_image_means_nonzero_polynomial(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let s = random::ncpoly(&mut rng, 1, 2, 3, 4);
        if !s.abelianize().is_zero() {
            prop_assert!(!s.is_zero(&none(), &cfg()).unwrap());
        }
        // a quasi-homogeneous part abelianizes to a quasi-homogeneous polynomial
        let w = [1u32, 2];
        let c = s.quasi_homogeneous_part(3, &w);
        prop_assert!(c.abelianize().weighted_degrees(&w).iter().all(|&d| d == 3));
    }

    #[test]
    fn quasi_homogeneous_parts_multiply(seed in any::<u64>(), d in 0u32..8) {
        let mut rng = random::rng(seed);
        let w = [1u32, 2, 3];
        let s = random::ncpoly(&mut rng, 1, 3, 3, 3);
        let t = random::ncpoly(&mut rng, 1, 3, 3, 3);
        let lhs = (&s * &t).quasi_homogeneous_part(d, &w);
        let mut rhs = NCPolynomial::zero(1, 3);
        for a in 0..=d {
            rhs = &rhs + &(&s.quasi_homogeneous_part(a, &w) * &t.quasi_homogeneous_part(d - a, &w));
        }
        prop_assert!((&lhs - &rhs).is_zero(&none(), &cfg()).unwrap());
    }

    #[test]
    fn degree_is_subadditive(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let w = [1u32, 2];
        let s = random::ncpoly(&mut rng, 1, 2, 3, 3);
        let t = random::ncpoly(&mut rng, 1, 2, 3, 3);
        let ps = s.degree_and_main(&w, &none(), &cfg()).unwrap();
        let pt = t.degree_and_main(&w, &none(), &cfg()).unwrap();
        let pst = (&s * &t).degree_and_main(&w, &none(), &cfg()).unwrap();
        if let (Some(a), Some(b)) = (ps.degree, pt.degree) {
            if let Some(c) = pst.degree {
                prop_assert!(c <= a + b);
            }
            if !ps.main.abelianize().mul(&pt.main.abelianize()).is_zero() {
                prop_assert_eq!(pst.degree, Some(a + b));
            }
        }
    }

    #[test]
    fn top_identities_hold(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let dim = 1 + (seed % 2) as usize;
        let r = 1 + (seed / 2 % 3) as usize;
        let s = random::ncpoly(&mut rng, 1, r, 3, 3);
        let g_ops = vec![DiffOperator::coefficient(dim, random::poly_expr(&mut rng, dim, 2, 2))];
        let f_ops: Vec<DiffOperator> = (0..r).map(|_| random::nonzero_operator(&mut rng, dim, 3, 2)).collect();
        let domain = DomainSpec::new(dim);
        let rep = verify_top_identity(&s, &g_ops, &f_ops, &domain, &cfg()).unwrap();
        prop_assert!(rep.top_exact, "{:?}", rep);
        prop_assert!(rep.second_max_relative < 1e-8, "{:?}", rep);
    }
}
