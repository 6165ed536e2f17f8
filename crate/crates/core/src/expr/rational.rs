use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Exact rational constant with a cached `f64` image for fast evaluation.
///
/// Equality, ordering and hashing only look at the exact value.
#[derive(Clone)]
pub struct Rational {
    value: BigRational,
    approx: f64,
}

impl Rational {
    pub fn new(value: BigRational) -> Self {
        let approx = value.to_f64().unwrap_or(f64::NAN);
        Rational { value, approx }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::new(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Self::new(BigRational::from_integer(n))
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// Exact binary value of a finite float.
    pub fn from_f64(x: f64) -> Option<Self> {
        BigRational::from_float(x).map(Self::new)
    }

    pub fn zero() -> Self {
        Self::new(BigRational::zero())
    }

    pub fn one() -> Self {
        Self::new(BigRational::one())
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn to_f64(&self) -> f64 {
        self.approx
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.value.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.value.is_integer()
    }

    pub fn to_i64(&self) -> Option<i64> {
        if self.value.is_integer() {
            self.value.numer().to_i64()
        } else {
            None
        }
    }

    pub fn abs(&self) -> Self {
        Self::new(self.value.abs())
    }

    /// Integer power; `None` for a negative power of zero.
    pub fn pow(&self, k: i64) -> Option<Self> {
        if k < 0 && self.is_zero() {
            return None;
        }
        let base = if k < 0 { self.value.recip() } else { self.value.clone() };
        let mut acc = BigRational::one();
        for _ in 0..k.unsigned_abs() {
            acc *= &base;
        }
        Some(Self::new(acc))
    }

    /// Exact square root when both numerator and denominator are perfect squares.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.value.is_negative() {
            return None;
        }
        let n = self.value.numer().sqrt();
        let d = self.value.denom().sqrt();
        if &(&n * &n) == self.value.numer() && &(&d * &d) == self.value.denom() {
            Some(Self::new(BigRational::new(n, d)))
        } else {
            None
        }
    }

    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }
}

impl From<BigRational> for Rational {
    fn from(v: BigRational) -> Self {
        Rational::new(v)
    }
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        self.value == other.value
    }
}

impl Eq for Rational {}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Self) -> Ordering {
        self.value.cmp(&other.value)
    }
}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.value.hash(state)
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! rational_binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl std::ops::$tr<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational::new(&self.value $op &rhs.value)
            }
        }
    };
}

rational_binop!(Add, add, +);
rational_binop!(Sub, sub, -);
rational_binop!(Mul, mul, *);
rational_binop!(Div, div, /);

impl std::ops::Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational::new(-&self.value)
    }
}
