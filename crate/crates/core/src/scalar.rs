//! Exact coefficient types.
//!
//! Everything in the crate is generic over [`Scalar`], which is implemented
//! for arbitrary-precision integers and rationals. Floating point types are
//! deliberately not supported: every identity is checked with zero tolerance.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Which exact arithmetic a coefficient type provides.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ScalarMode {
    Integer,
    Rational,
}

impl ScalarMode {
    pub fn name(self) -> &'static str {
        match self {
            ScalarMode::Integer => "integer",
            ScalarMode::Rational => "rational",
        }
    }
}

pub trait Scalar:
    num_traits::Num
    + Signed
    + Clone
    + Debug
    + Display
    + Ord
    + Hash
    + Send
    + Sync
    + 'static
{
    const MODE: ScalarMode;

    fn from_bigint(n: BigInt) -> Self;

    /// `num / den` if it is representable exactly.
    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self>;

    /// `self / d` if the quotient is representable exactly.
    fn div_exact(&self, d: &Self) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    fn is_integral(&self) -> bool;

    /// Numerator and denominator, denominator positive.
    fn to_ratio(&self) -> (BigInt, BigInt);
}

impl Scalar for BigInt {
    const MODE: ScalarMode = ScalarMode::Integer;

    fn from_bigint(n: BigInt) -> Self {
        n
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        if den.is_zero() {
            return None;
        }
        let (q, r) = num_integer::Integer::div_rem(num, den);
        r.is_zero().then_some(q)
    }

    fn div_exact(&self, d: &Self) -> Option<Self> {
        Self::from_ratio(self, d)
    }

    fn is_integral(&self) -> bool {
        true
    }

    fn to_ratio(&self) -> (BigInt, BigInt) {
        (self.clone(), BigInt::one())
    }
}

impl Scalar for BigRational {
    const MODE: ScalarMode = ScalarMode::Rational;

    fn from_bigint(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }

    fn from_ratio(num: &BigInt, den: &BigInt) -> Option<Self> {
        (!den.is_zero()).then(|| BigRational::new(num.clone(), den.clone()))
    }

    fn div_exact(&self, d: &Self) -> Option<Self> {
        (!d.is_zero()).then(|| self / d)
    }

    fn is_integral(&self) -> bool {
        self.is_integer()
    }

    fn to_ratio(&self) -> (BigInt, BigInt) {
        let r = self.reduced();
        let (n, d) = (r.numer().clone(), r.denom().clone());
        if d.is_negative() {
            (-n, -d)
        } else {
            (n, d)
        }
    }
}

/// `(-1)^e` as a scalar.
pub fn sign<S: Scalar>(negative: bool) -> S {
    if negative {
        -S::one()
    } else {
        S::one()
    }
}

pub fn is_zero<S: Scalar>(s: &S) -> bool {
    Zero::is_zero(s)
}
