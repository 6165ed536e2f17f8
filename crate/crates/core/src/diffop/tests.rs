use proptest::prelude::*;

use super::*;
use crate::error::Error;
use crate::expr::Expr;
use crate::random;

fn x(i: usize) -> Expr {
    Expr::var(i)
}

fn p1(dim: usize, i: usize) -> DiffOperator {
    DiffOperator::momentum(dim, i)
}

fn op(dim: usize, terms: &[(&[u32], Expr)]) -> DiffOperator {
    DiffOperator::from_terms(dim, terms.iter().map(|(a, c)| (MultiIndex::new(a.to_vec()), c.clone())))
}

#[test]
fn multi_index_helpers() {
    let a = MultiIndex::new(vec![2, 0, 3]);
    assert_eq!(a.order(), 5);
    assert_eq!(a.factorial(), 12u32.into());
    assert_eq!(a.binomial(&MultiIndex::new(vec![1, 0, 2])), 6u32.into());
    assert_eq!(a.sub_indices().len(), 12);
    assert_eq!(MultiIndex::of_order(3, 2).len(), 6);
    assert_eq!(a.prepend(1).tail(), a);
}

#[test]
fn leibniz_normalization() {
    let got = normalize(1, &[Factor::P(0), Factor::Coeff(x(0))]).unwrap();
    assert_eq!(got, op(1, &[(&[1], x(0)), (&[0], Expr::one())]));

    let got = normalize(1, &[Factor::P(0), Factor::P(0), Factor::Coeff(x(0).pow(2))]).unwrap();
    let want = op(
        1,
        &[(&[2], x(0).pow(2)), (&[1], Expr::int(4) * x(0)), (&[0], Expr::int(2))],
    );
    assert_eq!(got, want);

    let f = x(0).sin();
    let got = normalize(1, &[Factor::Coeff(f.clone()), Factor::P(0)]).unwrap();
    assert_eq!(got, op(1, &[(&[1], f)]));

    assert!(matches!(
        normalize(1, &[Factor::P(1)]),
        Err(Error::VariableOutOfRange { .. })
    ));
}

#[test]
fn composition_examples() {
    let xop = DiffOperator::position(1, 0);
    assert_eq!(
        p1(1, 0).compose(&xop).unwrap(),
        op(1, &[(&[1], x(0)), (&[0], Expr::one())])
    );
    let a = op(1, &[(&[2], x(0)), (&[0], x(0).cos())]);
    assert_eq!(a.compose(&DiffOperator::identity(1)).unwrap(), a);
    assert_eq!(DiffOperator::identity(1).compose(&a).unwrap(), a);

    let got = p1(1, 0)
        .pow(2)
        .compose(&DiffOperator::coefficient(1, x(0).sin()))
        .unwrap();
    let want = op(
        1,
        &[
            (&[2], x(0).sin()),
            (&[1], Expr::int(2) * x(0).cos()),
            (&[0], -x(0).sin()),
        ],
    );
    assert_eq!(got, want);

    assert_eq!(
        p1(1, 0).compose(&p1(2, 0)),
        Err(Error::DimensionMismatch { left: 1, right: 2 })
    );
}

#[test]
fn commutator_examples() {
    let xop = DiffOperator::position(1, 0);
    assert_eq!(p1(1, 0).commutator(&xop).unwrap(), DiffOperator::constant(1, 1));
    let a = op(1, &[(&[3], x(0)), (&[0], x(0).cos())]);
    assert!(a.commutator(&a).unwrap().is_zero());
    let xp2 = op(1, &[(&[2], x(0))]);
    assert_eq!(xp2.commutator(&p1(1, 0)).unwrap(), op(1, &[(&[2], Expr::int(-1))]));
}

#[test]
fn homogeneous_parts() {
    let f = op(1, &[(&[3], x(0)), (&[1], Expr::one()), (&[0], x(0).cos())]);
    assert_eq!(f.order(), Some(3));
    assert_eq!(f.homogeneous_part(3), op(1, &[(&[3], x(0))]));
    assert!(f.homogeneous_part(5).is_zero());
    assert_eq!(f.main_part(), op(1, &[(&[3], x(0))]));
    assert!(f.second_main_part().is_zero());

    let u = x(0).pow(2);
    let h = op(1, &[(&[2], Expr::one()), (&[0], u.clone())]);
    assert_eq!(h.homogeneous_part(0), DiffOperator::coefficient(1, u));

    let zero = DiffOperator::zero(2);
    assert_eq!(zero.order(), None);
    assert!(zero.main_part().is_zero());
    assert!(zero.second_main_part().is_zero());

    // order-0 operators: main part is the operator, second-main part is zero
    let c = DiffOperator::coefficient(1, x(0).exp());
    assert_eq!(c.main_part(), c);
    assert!(c.second_main_part().is_zero());
}

#[test]
fn radial_second_main_part() {
    // radial Laplacian style: p^2 + (2/r) p + 1/r^2
    let r = x(0);
    let h = op(
        1,
        &[
            (&[2], Expr::one()),
            (&[1], Expr::int(2) * r.clone().recip()),
            (&[0], r.clone().pow(-2)),
        ],
    );
    let second = h.second_main_part();
    assert_eq!(second.terms().len(), 1);
    assert_eq!(
        second.coeff(&MultiIndex::new(vec![1])).unwrap(),
        &(Expr::int(2) * r.recip()).simplify()
    );
    assert_eq!(second, h.homogeneous_part(1));
}

#[test]
fn symbol_calculus() {
    let s = op(2, &[(&[2, 1], x(0)), (&[0, 0], x(1))]).into_symbol();
    assert_eq!(
        s.d_p(0),
        Symbol::monomial(2, MultiIndex::new(vec![1, 1]), Expr::int(2) * x(0))
    );
    assert_eq!(s.d_x(1), Symbol::constant(2, 1));
    let v = s.eval(&[2.0, 3.0], &[1.5, -1.0], &Default::default()).unwrap();
    assert!((v - (-(2.0 * 2.25) + 3.0)).abs() < 1e-14);
    let sq = &s * &s;
    assert_eq!(sq.degree(), Some(6));
}

#[test]
fn display_and_serialization() {
    let a = op(1, &[(&[1], x(0)), (&[0], Expr::one())]);
    assert_eq!(a.to_string(), "x1*p1 + 1");
    let b = op(2, &[(&[2, 0], Expr::rat(1, 2)), (&[0, 0], -x(1).recip())]);
    assert_eq!(b.to_string(), "1/2*p1^2 - x2^(-1)");
    let json = serde_json::to_string(&a).unwrap();
    assert_eq!(
        json,
        r#"{"dim":1,"terms":[{"alpha":[1],"coeff":"x1"},{"alpha":[0],"coeff":"1"}]}"#
    );
}

fn word_to_operator(dim: usize, word: &[Factor]) -> DiffOperator {
    word.iter().fold(DiffOperator::identity(dim), |acc, f| {
        let next = match f {
            Factor::Coeff(e) => DiffOperator::coefficient(dim, e.clone()),
            Factor::P(i) => DiffOperator::momentum(dim, *i),
        };
        acc.compose(&next).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn composition_is_associative(seed in any::<u64>(), dim in 1usize..=3) {
        let mut rng = random::rng(seed);
        let a = random::operator(&mut rng, dim, 3, 3);
        let b = random::operator(&mut rng, dim, 2, 3);
        let c = random::operator(&mut rng, dim, 2, 2);
        let left = a.compose(&b).unwrap().compose(&c).unwrap();
        let right = a.compose(&b.compose(&c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn order_bounds(seed in any::<u64>(), dim in 1usize..=3) {
        let mut rng = random::rng(seed);
        let a = random::nonzero_operator(&mut rng, dim, 3, 2);
        let b = random::nonzero_operator(&mut rng, dim, 3, 2);
        let (k, l) = (a.order().unwrap(), b.order().unwrap());
        if let Some(o) = a.compose(&b).unwrap().order() {
            prop_assert!(o <= k + l);
        }
        if let Some(o) = a.commutator(&b).unwrap().order() {
            prop_assert!(o < k + l, "order {} for k={} l={}", o, k, l);
        }
    }

    #[test]
    fn homogeneous_decomposition(seed in any::<u64>(), dim in 1usize..=3) {
        let mut rng = random::rng(seed);
        let a = random::operator(&mut rng, dim, 3, 2);
        let m = a.order().unwrap_or(0);
        let sum = (0..=m).fold(DiffOperator::zero(dim), |acc, g| &acc + &a.homogeneous_part(g));
        prop_assert_eq!(&sum, &a);
        for g in 0..=m {
            for h in 0..=m {
                let hh = a.homogeneous_part(h).homogeneous_part(g);
                if g == h {
                    prop_assert_eq!(&hh, &a.homogeneous_part(g));
                } else {
                    prop_assert!(hh.is_zero());
                }
            }
        }
    }

    #[test]
    fn normalize_agrees_with_compose(seed in any::<u64>(), dim in 1usize..=3) {
        let mut rng = random::rng(seed);
        let word = random::factor_word(&mut rng, dim, 6, 3);
        prop_assert_eq!(normalize(dim, &word).unwrap(), word_to_operator(dim, &word));
    }
}
