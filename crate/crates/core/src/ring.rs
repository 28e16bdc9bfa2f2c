//! Rings with two-sided Euclidean division.
//!
//! The contract: a size function `f` into the non-negative integers such
//! that for all `a` and nonzero `b` there are quotient/remainder pairs on
//! both sides,
//!
//! ```text
//! a = q1 * b + r1   with r1 = 0 or f(r1) < f(b)
//! a = b * q2 + r2   with r2 = 0 or f(r2) < f(b)
//! ```
//!
//! Three instances live in this crate: the rational integers with the
//! symmetric (minimal absolute value) remainder, univariate polynomials over
//! a prime field, and the Hurwitz quaternions (see [`crate::hurwitz`]).

use num::traits::Euclid;
use num::{BigInt, BigUint, One, Signed, Zero};
use std::fmt::Debug;

use crate::error::{Error, Result};

/// Ring operations over an element type chosen by the instance. Methods take
/// `&self` so instances can carry runtime parameters (e.g. the modulus of a
/// prime field).
pub trait EuclideanRing {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn eq(&self, a: &Self::Elem, b: &Self::Elem) -> bool;

    /// The Euclidean size `f`; `None` exactly for the zero element.
    fn size(&self, a: &Self::Elem) -> Option<BigUint>;

    /// `a = q * b + r` with `r = 0` or `f(r) < f(b)`.
    fn left_divide(&self, a: &Self::Elem, b: &Self::Elem) -> Result<(Self::Elem, Self::Elem)>;

    /// `a = b * q + r` with `r = 0` or `f(r) < f(b)`.
    fn right_divide(&self, a: &Self::Elem, b: &Self::Elem) -> Result<(Self::Elem, Self::Elem)>;

    /// Returns the two-sided inverse if `a` is a unit.
    fn unit_test(&self, a: &Self::Elem) -> Option<Self::Elem>;

    /// Canonical text encoding, also used in matrix JSON.
    fn encode(&self, a: &Self::Elem) -> String;

    /// Parse the canonical text encoding.
    fn decode(&self, s: &str) -> Result<Self::Elem>;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn is_unit(&self, a: &Self::Elem) -> bool {
        self.unit_test(a).is_some()
    }
}

/// The rational integers with symmetric remainder: `|r| <= |b|/2`, so the
/// size `f(r) = |r|` drops strictly on every division step.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Integers;

impl Integers {
    /// Quotient and remainder with `r` in `(-|b|/2, |b|/2]`.
    pub fn symmetric_div(a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt)> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mut q = a.div_euclid(b);
        let mut r = a - &q * b;
        debug_assert!(!r.is_negative());
        // r in [0, |b|); fold into the symmetric window
        let babs = b.abs();
        if &r * 2 > babs {
            r -= &babs;
            q += babs.signum() * b.signum();
        }
        Ok((q, r))
    }
}

impl EuclideanRing for Integers {
    type Elem = BigInt;

    fn zero(&self) -> BigInt {
        BigInt::zero()
    }
    fn one(&self) -> BigInt {
        BigInt::one()
    }
    fn add(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a + b
    }
    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }
    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }
    fn is_zero(&self, a: &BigInt) -> bool {
        a.is_zero()
    }
    fn eq(&self, a: &BigInt, b: &BigInt) -> bool {
        a == b
    }

    fn size(&self, a: &BigInt) -> Option<BigUint> {
        if a.is_zero() {
            None
        } else {
            Some(a.magnitude().clone())
        }
    }

    fn left_divide(&self, a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt)> {
        Self::symmetric_div(a, b)
    }

    fn right_divide(&self, a: &BigInt, b: &BigInt) -> Result<(BigInt, BigInt)> {
        Self::symmetric_div(a, b)
    }

    fn unit_test(&self, a: &BigInt) -> Option<BigInt> {
        if a.magnitude().is_one() {
            Some(a.clone())
        } else {
            None
        }
    }

    fn encode(&self, a: &BigInt) -> String {
        a.to_string()
    }

    fn decode(&self, s: &str) -> Result<BigInt> {
        s.trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad integer: {s:?}")))
    }
}

/// Univariate polynomials over the prime field `F_p`, coefficients stored
/// lowest degree first with no trailing zeros. The Euclidean size is the
/// degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrimeFieldPolys {
    p: u64,
}

/// Dense coefficient vector, lowest degree first, normalized.
pub type Poly = Vec<u64>;

impl PrimeFieldPolys {
    pub fn new(p: u64) -> Result<Self> {
        if !is_small_prime(p) {
            return Err(Error::Invalid(format!("modulus {p} is not prime")));
        }
        Ok(PrimeFieldPolys { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    pub fn normalize(&self, mut coeffs: Vec<u64>) -> Poly {
        for c in &mut coeffs {
            *c %= self.p;
        }
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        coeffs
    }

    pub fn degree(&self, a: &Poly) -> Option<usize> {
        if a.is_empty() {
            None
        } else {
            Some(a.len() - 1)
        }
    }

    fn coeff_inv(&self, c: u64) -> u64 {
        // Fermat: c^(p-2) mod p
        let mut base = c % self.p;
        let mut exp = self.p - 2;
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base % self.p;
            }
            base = base * base % self.p;
            exp >>= 1;
        }
        acc
    }

    fn long_division(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        if b.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let p = self.p;
        let mut rem = a.clone();
        if rem.len() < b.len() {
            return Ok((vec![], rem));
        }
        let mut quot = vec![0u64; rem.len() - b.len() + 1];
        let lead_inv = self.coeff_inv(*b.last().unwrap());
        while rem.len() >= b.len() {
            let shift = rem.len() - b.len();
            let factor = rem.last().unwrap() * lead_inv % p;
            quot[shift] = factor;
            for (i, &bc) in b.iter().enumerate() {
                let sub = factor * bc % p;
                rem[shift + i] = (rem[shift + i] + p - sub) % p;
            }
            while rem.last() == Some(&0) {
                rem.pop();
            }
            if rem.is_empty() {
                break;
            }
        }
        Ok((self.normalize(quot), rem))
    }
}

impl EuclideanRing for PrimeFieldPolys {
    type Elem = Poly;

    fn zero(&self) -> Poly {
        vec![]
    }
    fn one(&self) -> Poly {
        vec![1]
    }

    fn add(&self, a: &Poly, b: &Poly) -> Poly {
        let mut out = vec![0u64; a.len().max(b.len())];
        for (i, &c) in a.iter().enumerate() {
            out[i] = c;
        }
        for (i, &c) in b.iter().enumerate() {
            out[i] = (out[i] + c) % self.p;
        }
        self.normalize(out)
    }

    fn neg(&self, a: &Poly) -> Poly {
        a.iter().map(|&c| (self.p - c) % self.p).collect()
    }

    fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &ca) in a.iter().enumerate() {
            for (j, &cb) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + ca * cb) % self.p;
            }
        }
        self.normalize(out)
    }

    fn is_zero(&self, a: &Poly) -> bool {
        a.is_empty()
    }
    fn eq(&self, a: &Poly, b: &Poly) -> bool {
        a == b
    }

    fn size(&self, a: &Poly) -> Option<BigUint> {
        self.degree(a).map(BigUint::from)
    }

    fn left_divide(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        self.long_division(a, b)
    }

    fn right_divide(&self, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
        self.long_division(a, b)
    }

    fn unit_test(&self, a: &Poly) -> Option<Poly> {
        if a.len() == 1 {
            Some(vec![self.coeff_inv(a[0])])
        } else {
            None
        }
    }

    fn encode(&self, a: &Poly) -> String {
        if a.is_empty() {
            return "0".to_string();
        }
        a.iter()
            .map(|c| c.to_string())
            .collect::<Vec<_>>()
            .join(",")
    }

    fn decode(&self, s: &str) -> Result<Poly> {
        let coeffs: Vec<u64> = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<u64>()
                    .map_err(|_| Error::Parse(format!("bad coefficient: {t:?}")))
            })
            .collect::<Result<_>>()?;
        Ok(self.normalize(coeffs))
    }
}

pub fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_remainder_window() {
        let z = Integers;
        for (a, b) in [(7, 3), (8, 3), (-7, 3), (7, -3), (100, 7), (-100, -7)] {
            let (q, r) = z
                .left_divide(&BigInt::from(a), &BigInt::from(b))
                .unwrap();
            assert_eq!(&q * BigInt::from(b) + &r, BigInt::from(a));
            assert!(r.magnitude() * 2u32 <= BigInt::from(b).magnitude().clone());
        }
    }

    #[test]
    fn symmetric_remainder_strictly_smaller() {
        let z = Integers;
        for a in -20i32..=20 {
            for b in -6i32..=6 {
                if b == 0 {
                    continue;
                }
                let (q, r) = z
                    .left_divide(&BigInt::from(a), &BigInt::from(b))
                    .unwrap();
                assert_eq!(&q * BigInt::from(b) + &r, BigInt::from(a));
                assert!(
                    r.is_zero() || z.size(&r).unwrap() < z.size(&BigInt::from(b)).unwrap(),
                    "a={a} b={b} q={q} r={r}"
                );
            }
        }
    }

    #[test]
    fn division_property_random_pairs() {
        use crate::rng::CounterRng;
        let z = Integers;
        let mut rng = CounterRng::new(0x21A6, 0);
        for _ in 0..1000 {
            let a = BigInt::from(rng.next_range_i64(-100_000, 100_000));
            let mut b = BigInt::from(rng.next_range_i64(-500, 500));
            if b.is_zero() {
                b = BigInt::one();
            }
            let (q, r) = z.left_divide(&a, &b).unwrap();
            assert_eq!(&q * &b + &r, a);
            assert!(r.magnitude() * 2u32 <= b.magnitude().clone());
        }

        let ring = PrimeFieldPolys::new(2).unwrap();
        for _ in 0..1000 {
            let a = ring.normalize((0..8).map(|_| rng.next_below(2)).collect());
            let mut b = ring.normalize((0..4).map(|_| rng.next_below(2)).collect());
            if ring.is_zero(&b) {
                b = ring.one();
            }
            let (q, r) = ring.left_divide(&a, &b).unwrap();
            assert_eq!(ring.add(&ring.mul(&q, &b), &r), a);
            assert!(ring.is_zero(&r) || ring.size(&r).unwrap() < ring.size(&b).unwrap());
        }
    }

    #[test]
    fn poly_division_over_f2() {
        let ring = PrimeFieldPolys::new(2).unwrap();
        // x^3 + x + 1 divided by x^2 + 1
        let a = vec![1, 1, 0, 1];
        let b = vec![1, 0, 1];
        let (q, r) = ring.left_divide(&a, &b).unwrap();
        let back = ring.add(&ring.mul(&q, &b), &r);
        assert_eq!(back, a);
        assert!(ring.degree(&r).unwrap() < ring.degree(&b).unwrap());
    }

    #[test]
    fn poly_units_are_nonzero_constants() {
        let ring = PrimeFieldPolys::new(5).unwrap();
        assert_eq!(ring.unit_test(&vec![3]), Some(vec![2]));
        assert_eq!(ring.unit_test(&vec![0, 1]), None);
        assert_eq!(ring.unit_test(&vec![]), None);
    }

    #[test]
    fn poly_encoding_roundtrip() {
        let ring = PrimeFieldPolys::new(2).unwrap();
        let a = vec![1, 0, 1, 1];
        assert_eq!(ring.encode(&a), "1,0,1,1");
        assert_eq!(ring.decode("1,0,1,1").unwrap(), a);
        assert_eq!(ring.decode("0").unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn prime_modulus_enforced() {
        assert!(PrimeFieldPolys::new(4).is_err());
        assert!(PrimeFieldPolys::new(2).is_ok());
        assert!(PrimeFieldPolys::new(7).is_ok());
    }
}
