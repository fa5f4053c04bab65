//! Exact rational arithmetic and the enumerable rational candidate grids.

mod domains;
mod grid;
mod numtheory;
mod properness;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

pub use domains::{lf_domain, tukey_domain, GridOverride, TukeyGridConfig};
pub use grid::{GridIter, RationalGrid, MAX_GRID_DENOMINATOR};
pub use numtheory::floor_sum;
pub use properness::{validate_properness, ProperReport};

/// Exact rational number stored in lowest terms with a positive denominator.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BoundedRational(BigRational);

impl BoundedRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        let d: BigInt = denom.into();
        assert!(!d.is_zero(), "zero denominator");
        Self(BigRational::new(numer.into(), d))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        Self(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        Self(BigRational::zero())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn inner(&self) -> &BigRational {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Self(self.0.abs())
    }

    /// Nearest `f64`; only for reporting and plotting.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// `(numerator, denominator)` as `i128`, if both fit.
    pub fn to_i128_pair(&self) -> Option<(i128, i128)> {
        Some((self.numer().to_i128()?, self.denom().to_i128()?))
    }

    /// `floor(self * q)`.
    pub fn floor_times(&self, q: i128) -> BigInt {
        (self.numer() * BigInt::from(q)).div_floor(self.denom())
    }

    /// `ceil(self * q)`.
    pub fn ceil_times(&self, q: i128) -> BigInt {
        (self.numer() * BigInt::from(q)).div_ceil(self.denom())
    }

    pub fn floor(&self) -> BigInt {
        self.numer().div_floor(self.denom())
    }

    /// Midpoint of two rationals.
    pub fn midpoint(a: &Self, b: &Self) -> Self {
        Self((&a.0 + &b.0) / BigRational::from_integer(BigInt::from(2)))
    }
}

impl From<i64> for BoundedRational {
    fn from(v: i64) -> Self {
        Self::from_integer(v)
    }
}

impl From<BigRational> for BoundedRational {
    fn from(v: BigRational) -> Self {
        Self(v)
    }
}

impl fmt::Display for BoundedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

impl fmt::Debug for BoundedRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for BoundedRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::param(format!("not a rational: {s:?}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad())?;
                let d: BigInt = d.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Self::new(n, d))
            }
            None => Ok(Self::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        }
    }
}

impl Serialize for BoundedRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BoundedRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr<&BoundedRational> for &BoundedRational {
            type Output = BoundedRational;
            fn $m(self, rhs: &BoundedRational) -> BoundedRational {
                BoundedRational((&self.0).$m(&rhs.0))
            }
        }
        impl $tr for BoundedRational {
            type Output = BoundedRational;
            fn $m(self, rhs: BoundedRational) -> BoundedRational {
                BoundedRational(self.0.$m(rhs.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for BoundedRational {
    type Output = BoundedRational;
    fn neg(self) -> BoundedRational {
        BoundedRational(-self.0)
    }
}

impl Neg for &BoundedRational {
    type Output = BoundedRational;
    fn neg(self) -> BoundedRational {
        BoundedRational(-self.0.clone())
    }
}

/// Compare `a/b` with `c/d` for positive denominators without overflow.
pub(crate) fn cmp_fractions(a: i128, b: i128, c: i128, d: i128) -> Ordering {
    debug_assert!(b > 0 && d > 0);
    match (a.checked_mul(d), c.checked_mul(b)) {
        (Some(l), Some(r)) => l.cmp(&r),
        _ => (BigInt::from(a) * BigInt::from(d)).cmp(&(BigInt::from(c) * BigInt::from(b))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> BoundedRational {
        BoundedRational::new(n, d)
    }

    #[test]
    fn lowest_terms_and_sign() {
        let x = r(6, -4);
        assert_eq!(x.numer(), &BigInt::from(-3));
        assert_eq!(x.denom(), &BigInt::from(2));
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!("-3/2".parse::<BoundedRational>().unwrap(), x);
        assert_eq!("7".parse::<BoundedRational>().unwrap(), BoundedRational::from(7));
        assert!("1/0".parse::<BoundedRational>().is_err());
        assert!("a/b".parse::<BoundedRational>().is_err());
    }

    #[test]
    fn serde_as_string() {
        let x = r(5, 3);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "\"5/3\"");
        let back: BoundedRational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    /// Slow reference: unreduced (num, den) pairs with den > 0.
    fn slow(op: u8, (a, b): (i64, i64), (c, d): (i64, i64)) -> (i128, i128) {
        let (a, b, c, d) = (a as i128, b as i128, c as i128, d as i128);
        match op {
            0 => (a * d + c * b, b * d),
            1 => (a * d - c * b, b * d),
            2 => (a * c, b * d),
            _ => {
                let (n, m) = (a * d, b * c);
                if m < 0 {
                    (-n, -m)
                } else {
                    (n, m)
                }
            }
        }
    }

    proptest! {
        #[test]
        fn arithmetic_matches_unreduced(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000, op in 0u8..4) {
            prop_assume!(op != 3 || c != 0);
            let x = r(a, b);
            let y = r(c, d);
            let got = match op { 0 => &x + &y, 1 => &x - &y, 2 => &x * &y, _ => &x / &y };
            let (n, m) = slow(op, (a, b), (c, d));
            // cross-multiplied equality with the unreduced result
            prop_assert_eq!(got.numer() * BigInt::from(m), got.denom() * BigInt::from(n));
            prop_assert!(got.denom() > &BigInt::zero());
            prop_assert_eq!(got.numer().gcd(got.denom()), BigInt::from(1));
            prop_assert_eq!(x.cmp(&y), cmp_fractions(a as i128, b as i128, c as i128, d as i128));
        }
    }
}
