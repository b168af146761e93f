//! Coefficient fields: arbitrary-precision rationals and prime fields GF(p).
//!
//! A field is a small context object (the prime lives in the context, not in
//! every element), so GF(p) elements are bare `u64` residues and the hot
//! reduction loops stay allocation-free.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use std::fmt;

/// Runtime description of the coefficient field, as chosen by input files.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum FieldKind {
    Rationals,
    /// GF(p), p an odd prime below 2^31.
    Prime(u64),
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rationals => write!(f, "QQ"),
            FieldKind::Prime(p) => write!(f, "GF({p})"),
        }
    }
}

pub const MAX_PRIME: u64 = (1 << 31) - 1;

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + PartialEq + fmt::Debug + Send + Sync;

    fn kind(&self) -> FieldKind;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn is_one(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, n: i64) -> Self::Elem;
    fn from_bigint(&self, n: &BigInt) -> Self::Elem;
    fn display(&self, a: &Self::Elem) -> String;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    /// Rescale a coefficient vector to a canonical primitive form.
    /// Identity for prime fields; over QQ clears denominators and divides by
    /// the integer content, keeping intermediate coefficients small.
    fn remove_content(&self, _coeffs: &mut [Self::Elem]) {}
}

/// The rational numbers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn kind(&self) -> FieldKind {
        FieldKind::Rationals
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn is_one(&self, a: &BigRational) -> bool {
        a.is_one()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        debug_assert!(!a.is_zero());
        a.recip()
    }
    fn from_i64(&self, n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }
    fn from_bigint(&self, n: &BigInt) -> BigRational {
        BigRational::from_integer(n.clone())
    }
    fn display(&self, a: &BigRational) -> String {
        a.to_string()
    }

    fn remove_content(&self, coeffs: &mut [BigRational]) {
        if coeffs.is_empty() {
            return;
        }
        let mut den = BigInt::one();
        for c in coeffs.iter() {
            den = den.lcm(c.denom());
        }
        let mut num = BigInt::zero();
        for c in coeffs.iter() {
            num = num.gcd(&(c.numer() * (&den / c.denom())));
        }
        if num.is_zero() {
            return;
        }
        // Sign convention: make the first coefficient positive.
        let lead = coeffs[0].numer();
        if lead.is_negative() {
            num = -num;
        }
        let scale = BigRational::new(den, num);
        for c in coeffs.iter_mut() {
            *c *= &scale;
        }
    }
}

/// GF(p) for an odd prime p < 2^31. Elements are residues in [0, p).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> crate::Result<Self> {
        if p < 2 || p > MAX_PRIME || !is_prime_u64(p) {
            return Err(crate::EngineError::Input(format!(
                "modulus {p} is not a prime below 2^31"
            )));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut b: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b % self.p;
            }
            b = b * b % self.p;
            e >>= 1;
        }
        acc
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn kind(&self) -> FieldKind {
        FieldKind::Prime(self.p)
    }
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn is_one(&self, a: &u64) -> bool {
        *a == 1
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        // p < 2^31, so the product fits in u64.
        a * b % self.p
    }
    fn inv(&self, a: &u64) -> u64 {
        debug_assert!(*a != 0);
        self.pow(*a, self.p - 2)
    }
    fn from_i64(&self, n: i64) -> u64 {
        let r = n.rem_euclid(self.p as i64);
        r as u64
    }
    fn from_bigint(&self, n: &BigInt) -> u64 {
        let m = n.mod_floor(&BigInt::from(self.p));
        let (_, digits) = m.to_u64_digits();
        *digits.first().unwrap_or(&0)
    }
    fn display(&self, a: &u64) -> String {
        // Symmetric representatives read better: 32002 mod 32003 is -1.
        if *a > self.p / 2 {
            format!("-{}", self.p - a)
        } else {
            a.to_string()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_arithmetic() {
        let f = PrimeField::new(101).unwrap();
        assert_eq!(f.add(&100, &5), 4);
        assert_eq!(f.sub(&3, &7), 97);
        assert_eq!(f.mul(&50, &51), 50 * 51 % 101);
        let a = 77u64;
        assert_eq!(f.mul(&a, &f.inv(&a)), 1);
        assert_eq!(f.from_i64(-1), 100);
    }

    #[test]
    fn prime_validation() {
        assert!(PrimeField::new(32003).is_ok());
        assert!(PrimeField::new(32004).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(is_prime_u64(2));
        assert!(!is_prime_u64(49));
    }

    #[test]
    fn rational_content_removal() {
        let f = Rationals;
        let mut v = vec![
            BigRational::new(BigInt::from(4), BigInt::from(6)),
            BigRational::new(BigInt::from(-2), BigInt::from(9)),
        ];
        f.remove_content(&mut v);
        // 4/6 = 2/3, content of (2/3, -2/9) is 2/9 -> (3, -1).
        assert_eq!(v[0], f.from_i64(3));
        assert_eq!(v[1], f.from_i64(-1));
    }
}
