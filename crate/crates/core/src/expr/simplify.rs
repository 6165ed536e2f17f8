//! Canonical form: a sum of monomials `c · Π bᵢ^kᵢ` with exact rational `c`,
//! bases ordered by the derived `Ord` on [`Expr`], positive powers of sums
//! expanded, and like terms collected.

use std::collections::BTreeMap;

use super::{Expr, Func, Rational};

impl Expr {
    /// Returns the canonical form of the tree. Idempotent.
    pub fn simplify(&self) -> Expr {
        match self {
            Expr::Const(_) | Expr::Var(_) | Expr::Param(_) => self.clone(),
            Expr::Add(ts) => {
                let mut sum = Sum::default();
                let one = Rational::one();
                for t in ts {
                    sum.add(&t.simplify(), &one);
                }
                sum.build()
            }
            Expr::Mul(fs) => {
                let mut p = Product::new();
                for f in fs {
                    p.push(f.simplify(), 1);
                }
                p.build()
            }
            Expr::Pow(b, k) => {
                let mut p = Product::new();
                p.push(b.simplify(), *k);
                p.build()
            }
            Expr::Func(f, a) => simplify_func(*f, a.simplify()),
        }
    }
}

#[derive(Default)]
struct Sum {
    terms: BTreeMap<Expr, Rational>,
}

impl Sum {
    fn add(&mut self, e: &Expr, scale: &Rational) {
        match e {
            Expr::Add(ts) => {
                for t in ts {
                    self.add(t, scale);
                }
            }
            _ => {
                let (c, key) = split_coeff(e);
                if c.is_zero() {
                    return;
                }
                let c = &c * scale;
                let entry = self.terms.entry(key).or_insert_with(Rational::zero);
                *entry = &*entry + &c;
            }
        }
    }

    fn build(self) -> Expr {
        let mut out: Vec<Expr> = self
            .terms
            .into_iter()
            .filter(|(_, c)| !c.is_zero())
            .map(|(key, c)| attach_coeff(c, key))
            .collect();
        match out.len() {
            0 => Expr::zero(),
            1 => out.pop().unwrap(),
            _ => Expr::Add(out),
        }
    }
}

fn split_coeff(e: &Expr) -> (Rational, Expr) {
    match e {
        Expr::Const(c) => (c.clone(), Expr::one()),
        Expr::Mul(fs) => match fs.first() {
            Some(Expr::Const(c)) => {
                let rest = &fs[1..];
                let key = if rest.len() == 1 {
                    rest[0].clone()
                } else {
                    Expr::Mul(rest.to_vec())
                };
                (c.clone(), key)
            }
            _ => (Rational::one(), e.clone()),
        },
        _ => (Rational::one(), e.clone()),
    }
}

fn attach_coeff(c: Rational, key: Expr) -> Expr {
    if key.is_one_const() {
        return Expr::Const(c);
    }
    if c.is_one() {
        return key;
    }
    match key {
        Expr::Mul(mut fs) => {
            fs.insert(0, Expr::Const(c));
            Expr::Mul(fs)
        }
        other => Expr::Mul(vec![Expr::Const(c), other]),
    }
}

struct Product {
    coeff: Rational,
    zero: bool,
    factors: BTreeMap<Expr, i64>,
}

impl Product {
    fn new() -> Self {
        Product {
            coeff: Rational::one(),
            zero: false,
            factors: BTreeMap::new(),
        }
    }

    /// Multiplies by `e^k`; `e` must already be canonical.
    fn push(&mut self, e: Expr, k: i64) {
        if k == 0 {
            return;
        }
        match e {
            Expr::Const(c) => match c.pow(k) {
                Some(v) => {
                    if v.is_zero() {
                        self.zero = true;
                    } else {
                        self.coeff = &self.coeff * &v;
                    }
                }
                // negative power of zero: keep it around so evaluation reports the pole
                None => *self.factors.entry(Expr::Const(c)).or_insert(0) += k,
            },
            Expr::Mul(fs) => {
                for f in fs {
                    self.push(f, k);
                }
            }
            Expr::Pow(b, j) => self.push(*b, j * k),
            other => *self.factors.entry(other).or_insert(0) += k,
        }
    }

    fn build(mut self) -> Expr {
        if self.zero {
            return Expr::zero();
        }
        // sqrt(a)^(2q+r) = a^q sqrt(a)^r
        loop {
            let reducible: Vec<(Expr, i64)> = self
                .factors
                .iter()
                .filter(|(b, e)| matches!(b, Expr::Func(Func::Sqrt, _)) && e.abs() >= 2)
                .map(|(b, e)| (b.clone(), *e))
                .collect();
            if reducible.is_empty() {
                break;
            }
            for (b, e) in reducible {
                self.factors.insert(b.clone(), e.rem_euclid(2));
                if let Expr::Func(_, a) = b {
                    self.push(*a, e.div_euclid(2));
                }
            }
            if self.zero {
                return Expr::zero();
            }
        }

        let mut expand = Vec::new();
        let mut atoms = Vec::new();
        for (b, e) in self.factors {
            if e == 0 {
                continue;
            }
            if matches!(b, Expr::Add(_)) && e > 0 {
                expand.push((b, e));
            } else if e == 1 {
                atoms.push(b);
            } else {
                atoms.push(Expr::Pow(Box::new(b), e));
            }
        }
        let mono = build_monomial(self.coeff, atoms);
        if expand.is_empty() {
            return mono;
        }
        let mut current = vec![mono];
        for (b, e) in expand {
            let Expr::Add(ts) = b else { unreachable!() };
            for _ in 0..e {
                current = multiply_terms(&current, &ts);
            }
        }
        let mut sum = Sum::default();
        let one = Rational::one();
        for t in &current {
            sum.add(t, &one);
        }
        sum.build()
    }
}

fn build_monomial(coeff: Rational, atoms: Vec<Expr>) -> Expr {
    if atoms.is_empty() {
        return Expr::Const(coeff);
    }
    if coeff.is_one() && atoms.len() == 1 {
        return atoms.into_iter().next().unwrap();
    }
    let mut v = Vec::with_capacity(atoms.len() + 1);
    if !coeff.is_one() {
        v.push(Expr::Const(coeff));
    }
    v.extend(atoms);
    Expr::Mul(v)
}

fn multiply_terms(a: &[Expr], b: &[Expr]) -> Vec<Expr> {
    let mut sum = Sum::default();
    let one = Rational::one();
    for x in a {
        for y in b {
            let mut p = Product::new();
            p.push(x.clone(), 1);
            p.push(y.clone(), 1);
            sum.add(&p.build(), &one);
        }
    }
    match sum.build() {
        Expr::Add(ts) => ts,
        z if z.is_zero_const() => Vec::new(),
        other => vec![other],
    }
}

/// Whether the canonical `a` carries a negative leading coefficient.
fn negative_leading(a: &Expr) -> bool {
    match a {
        Expr::Const(c) => c.is_negative(),
        Expr::Mul(fs) => matches!(fs.first(), Some(Expr::Const(c)) if c.is_negative()),
        Expr::Add(ts) => negative_leading(&ts[0]),
        _ => false,
    }
}

fn negate(a: &Expr) -> Expr {
    let mut p = Product::new();
    p.push(Expr::int(-1), 1);
    p.push(a.clone(), 1);
    p.build()
}

fn simplify_func(f: Func, a: Expr) -> Expr {
    match f {
        Func::Neg => negate(&a),
        Func::Recip => {
            let mut p = Product::new();
            p.push(a, -1);
            p.build()
        }
        Func::Sin | Func::Tan | Func::Cot => {
            if a.is_zero_const() && f != Func::Cot {
                return Expr::zero();
            }
            if negative_leading(&a) {
                negate(&Expr::Func(f, Box::new(negate(&a))))
            } else {
                Expr::Func(f, Box::new(a))
            }
        }
        Func::Cos => {
            if a.is_zero_const() {
                return Expr::one();
            }
            if negative_leading(&a) {
                Expr::Func(f, Box::new(negate(&a)))
            } else {
                Expr::Func(f, Box::new(a))
            }
        }
        Func::Exp => {
            if a.is_zero_const() {
                Expr::one()
            } else {
                Expr::Func(f, Box::new(a))
            }
        }
        Func::Sqrt => match a.as_const().and_then(Rational::sqrt_exact) {
            Some(r) => Expr::Const(r),
            None => Expr::Func(f, Box::new(a)),
        },
    }
}
