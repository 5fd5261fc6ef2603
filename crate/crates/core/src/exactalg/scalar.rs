use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default prime modulus: the largest prime below 2¹⁶.
pub const DEFAULT_PRIME: u64 = 65521;

/// A 61-bit Mersenne prime used internally for fast modular rank filters.
pub(crate) const FILTER_PRIME: u64 = (1 << 61) - 1;

/// Coefficient field descriptor.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Prime field F_p; rejects composite moduli and moduli ≥ 2⁶³.
    pub fn prime(p: u64) -> Result<Field> {
        if p >= 1 << 63 || !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(BigInt::from(v))),
            Field::Prime(p) => Scalar::Prime { residue: (v as i128).rem_euclid(p as i128) as u64, modulus: p },
        }
    }

    pub fn from_bigint(self, v: &BigInt) -> Scalar {
        match self {
            Field::Rational => Scalar::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => Scalar::Prime { residue: reduce_bigint(v, p), modulus: p },
        }
    }

    /// Maps a rational into this field. Fails when the denominator vanishes mod p.
    pub fn from_rational(self, v: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::Rational(v.clone())),
            Field::Prime(p) => {
                let num = reduce_bigint(v.numer(), p);
                let den = reduce_bigint(v.denom(), p);
                if den == 0 {
                    return Err(Error::invalid(format!("denominator of {v} vanishes mod {p}")));
                }
                Ok(Scalar::Prime { residue: mul_mod(num, inv_mod(den, p), p), modulus: p })
            }
        }
    }

    pub fn is_rational(self) -> bool {
        matches!(self, Field::Rational)
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { residue: u64, modulus: u64 },
}

impl Scalar {
    pub fn field(&self) -> Field {
        match self {
            Scalar::Rational(_) => Field::Rational,
            Scalar::Prime { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_zero(),
            Scalar::Prime { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(q) => q.is_one(),
            Scalar::Prime { residue, .. } => *residue == 1,
        }
    }

    fn check(&self, other: &Scalar) -> Result<()> {
        if self.field() != other.field() {
            return Err(Error::FieldMismatch(self.field().to_string(), other.field().to_string()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a + b),
            (Scalar::Prime { residue: a, modulus: p }, Scalar::Prime { residue: b, .. }) => {
                Scalar::Prime { residue: add_mod(*a, *b, *p), modulus: *p }
            }
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&other.neg_ref())
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check(other)?;
        Ok(match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(a * b),
            (Scalar::Prime { residue: a, modulus: p }, Scalar::Prime { residue: b, .. }) => {
                Scalar::Prime { residue: mul_mod(*a, *b, *p), modulus: *p }
            }
            _ => unreachable!(),
        })
    }

    /// Division; `Ok(None)` when dividing by zero.
    pub fn try_div(&self, other: &Scalar) -> Result<Option<Scalar>> {
        self.check(other)?;
        Ok(other.inv().map(|i| self * &i))
    }

    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match self {
            Scalar::Rational(q) => Scalar::Rational(q.recip()),
            Scalar::Prime { residue, modulus } => {
                Scalar::Prime { residue: inv_mod(*residue, *modulus), modulus: *modulus }
            }
        })
    }

    fn neg_ref(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(-q),
            Scalar::Prime { residue, modulus } => Scalar::Prime {
                residue: if *residue == 0 { 0 } else { modulus - residue },
                modulus: *modulus,
            },
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = self.field().one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// Multiplies by a small integer (used for derivative coefficients).
    pub fn mul_u64(&self, k: u64) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q * BigInt::from(k)),
            Scalar::Prime { residue, modulus } => {
                Scalar::Prime { residue: mul_mod(*residue, k % modulus, *modulus), modulus: *modulus }
            }
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Scalar::Rational(q) => Some(q),
            Scalar::Prime { .. } => None,
        }
    }

    /// Sign used when printing: rationals keep their sign, residues are non-negative.
    pub fn is_negative(&self) -> bool {
        matches!(self, Scalar::Rational(q) if q.is_negative())
    }

    pub fn abs(&self) -> Scalar {
        match self {
            Scalar::Rational(q) => Scalar::Rational(q.abs()),
            s => s.clone(),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(q) => write!(f, "{}", format_rational(q)),
            Scalar::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

/// "num/den", or just "num" for integers.
pub fn format_rational(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Inverse of [`format_rational`].
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            /// Panics on mixed fields.
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.$checked(rhs).expect("mixed-field scalar arithmetic")
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

// ---- modular helpers -------------------------------------------------------

pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + b as u128) % p as u128) as u64
}

pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 + p as u128 - b as u128) % p as u128) as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a, p);
        }
        a = mul_mod(a, a, p);
        e >>= 1;
    }
    acc
}

/// Inverse modulo a prime. `a` must be nonzero mod p.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub(crate) fn reduce_bigint(v: &BigInt, p: u64) -> u64 {
    let r = v.mod_floor(&BigInt::from(p));
    r.to_u64().expect("residue fits in u64")
}

/// Deterministic Miller–Rabin for all 64-bit inputs.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &q in &SMALL {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes() {
        assert!(is_prime(65521));
        assert!(!is_prime(65535));
        assert!(is_prime(FILTER_PRIME));
        assert!(!is_prime(1));
        assert!(Field::prime(12).is_err());
    }

    #[test]
    fn prime_field_reduces_negative_integers() {
        let f = Field::prime(7).unwrap();
        assert_eq!(f.from_i64(-1), Scalar::Prime { residue: 6, modulus: 7 });
        assert_eq!(f.from_i64(15), Scalar::Prime { residue: 1, modulus: 7 });
    }

    #[test]
    fn rationals_stay_reduced() {
        let q = Field::Rational.from_rational(&BigRational::new(4.into(), (-6).into())).unwrap();
        assert_eq!(q.to_string(), "-2/3");
        assert_eq!(parse_rational("-2/3").unwrap(), BigRational::new((-2).into(), 3.into()));
        assert_eq!(parse_rational("5").unwrap().to_string(), "5");
    }

    #[test]
    fn mixed_fields_are_rejected() {
        let a = Field::Rational.one();
        let b = Field::prime(5).unwrap().one();
        assert!(matches!(a.try_add(&b), Err(Error::FieldMismatch(..))));
    }

    #[test]
    fn modular_inverse() {
        let f = Field::prime(65521).unwrap();
        let x = f.from_i64(12345);
        assert!((&x * &x.inv().unwrap()).is_one());
        assert!(f.zero().inv().is_none());
    }
}
