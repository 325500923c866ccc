//! Coefficient fields: the rationals and prime fields `F_p` with `p < 2^16`.
//!
//! Scalars are stored as [`BigRational`] for both kinds of field. Over `F_p`
//! every scalar is kept reduced to an integer in `0..p`, so equality and
//! hashing of polynomials are canonical.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

/// Largest admissible prime characteristic (exclusive).
pub const MAX_CHARACTERISTIC: u32 = 1 << 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rationals,
    Prime(u32),
}

impl Field {
    pub fn prime(p: u32) -> Result<Self> {
        if p < 2 || p >= MAX_CHARACTERISTIC || !is_prime(p) {
            return Err(Error::InvalidField(format!(
                "characteristic {p} is not a prime below 2^16"
            )));
        }
        Ok(Field::Prime(p))
    }

    pub fn characteristic(&self) -> u32 {
        match self {
            Field::Rationals => 0,
            Field::Prime(p) => *p,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Field::Prime(_))
    }

    pub fn order(&self) -> Option<u64> {
        match self {
            Field::Rationals => None,
            Field::Prime(p) => Some(*p as u64),
        }
    }

    pub fn zero(&self) -> Scalar {
        Scalar::zero()
    }

    pub fn one(&self) -> Scalar {
        Scalar::one()
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        self.reduce(Scalar::from_integer(BigInt::from(v)))
    }

    pub fn from_u32(&self, v: u32) -> Scalar {
        self.from_i64(v as i64)
    }

    /// Brings an arbitrary rational into canonical form for this field.
    ///
    /// Panics over `F_p` if the denominator is divisible by `p`.
    pub fn reduce(&self, c: Scalar) -> Scalar {
        match self {
            Field::Rationals => c,
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                let num = c.numer().mod_floor(&p);
                let den = c.denom().mod_floor(&p);
                assert!(!den.is_zero(), "denominator vanishes modulo {p}");
                let inv = mod_inverse(&den, &p);
                Scalar::from_integer((num * inv).mod_floor(&p))
            }
        }
    }

    /// Like [`Field::reduce`] but reports a vanishing denominator.
    pub fn try_reduce(&self, c: Scalar) -> Result<Scalar> {
        if let Field::Prime(p) = self {
            if (c.denom() % BigInt::from(*p)).is_zero() {
                return Err(Error::InvalidField(format!(
                    "coefficient {c} is undefined modulo {p}"
                )));
            }
        }
        Ok(self.reduce(c))
    }

    pub fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a + b)
    }

    pub fn sub(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a - b)
    }

    pub fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        self.reduce(a * b)
    }

    pub fn neg(&self, a: &Scalar) -> Scalar {
        self.reduce(-a)
    }

    pub fn inv(&self, a: &Scalar) -> Scalar {
        assert!(!a.is_zero(), "inverse of zero");
        match self {
            Field::Rationals => a.recip(),
            Field::Prime(p) => {
                let p = BigInt::from(*p);
                Scalar::from_integer(mod_inverse(&a.to_integer(), &p))
            }
        }
    }

    /// Canonical small representative of a prime-field scalar.
    pub fn to_residue(&self, a: &Scalar) -> u32 {
        match self {
            Field::Rationals => panic!("no residue representation over Q"),
            Field::Prime(_) => a.to_integer().to_u32().expect("reduced scalar"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rationals => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F{p}"),
        }
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

fn mod_inverse(a: &BigInt, p: &BigInt) -> BigInt {
    let e = a.extended_gcd(p);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(p)
}

/// Exact ceiling of a rational.
pub fn ceil_rational(q: &BigRational) -> BigInt {
    let (d, r) = q.numer().div_mod_floor(q.denom());
    if r.is_zero() {
        d
    } else {
        d + 1
    }
}

/// Parses `a` or `a/b` into a rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("malformed rational `{s}`"));
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else if q.is_negative() {
        format!("-{}/{}", q.numer().abs(), q.denom())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_inverse_and_reduce() {
        let f = Field::prime(7).unwrap();
        let three = f.from_i64(3);
        assert_eq!(f.mul(&three, &f.inv(&three)), f.one());
        assert_eq!(f.from_i64(-1), f.from_i64(6));
        assert_eq!(f.reduce(BigRational::new(1.into(), 2.into())), f.from_i64(4));
    }

    #[test]
    fn rejects_composite_or_large() {
        assert!(Field::prime(4).is_err());
        assert!(Field::prime(1).is_err());
        assert!(Field::prime(65537).is_err());
        assert!(Field::prime(65521).is_ok());
    }

    #[test]
    fn ceiling() {
        let q = parse_rational("7/2").unwrap();
        assert_eq!(ceil_rational(&q), BigInt::from(4));
        assert_eq!(ceil_rational(&parse_rational("-7/2").unwrap()), BigInt::from(-3));
        assert_eq!(ceil_rational(&parse_rational("3").unwrap()), BigInt::from(3));
    }
}
