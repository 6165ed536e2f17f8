use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use quasint_core::analysis::{check_integrable_set, quasi_independence};
use quasint_core::catalog;
use quasint_core::diffop::normalize;
use quasint_core::ncpoly::verify_top_identity;
use quasint_core::random;
use quasint_core::{Config, DiffOperator, DomainSpec};

fn operators(c: &mut Criterion) {
    let mut rng = random::rng(1);
    let words: Vec<_> = (0..32).map(|_| random::factor_word(&mut rng, 3, 6, 3)).collect();
    c.bench_function("normalize 32 words", |b| {
        b.iter(|| {
            for w in &words {
                black_box(normalize(3, w).unwrap());
            }
        })
    });

    let pairs: Vec<(DiffOperator, DiffOperator)> = (0..32)
        .map(|_| {
            (
                random::nonzero_operator(&mut rng, 2, 3, 2),
                random::nonzero_operator(&mut rng, 2, 3, 2),
            )
        })
        .collect();
    c.bench_function("compose 32 pairs", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(x.compose(y).unwrap());
            }
        })
    });
    c.bench_function("commutator 32 pairs", |b| {
        b.iter(|| {
            for (x, y) in &pairs {
                black_box(x.commutator(y).unwrap());
            }
        })
    });
}

fn polynomials(c: &mut Criterion) {
    let mut rng = random::rng(2);
    let cfg = Config::default();
    let domain = DomainSpec::new(2);
    let s = random::ncpoly(&mut rng, 1, 2, 3, 3);
    let g = vec![DiffOperator::coefficient(2, random::poly_expr(&mut rng, 2, 2, 2))];
    let f: Vec<DiffOperator> = (0..2).map(|_| random::nonzero_operator(&mut rng, 2, 2, 2)).collect();
    c.bench_function("top identities", |b| {
        b.iter(|| black_box(verify_top_identity(&s, &g, &f, &domain, &cfg).unwrap()))
    });
}

fn catalog_checks(c: &mut Criterion) {
    let cfg = Config::default();
    let kepler = catalog::kepler(1.0);
    let (ops, _) = kepler.set_operators("integrals").unwrap();
    c.bench_function("kepler rank", |b| {
        b.iter(|| black_box(quasi_independence(&ops, &kepler.domain, &cfg).unwrap()))
    });
    let top = catalog::symmetric_top(1.0, 2.0, 1.0);
    let (ops, k) = top.set_operators("integrals").unwrap();
    c.bench_function("symmetric top integrability", |b| {
        b.iter(|| black_box(check_integrable_set(&ops, k, &top.domain, &cfg).unwrap()))
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = operators, polynomials, catalog_checks
}
criterion_main!(benches);
