//! Fixed-point real arithmetic with tracked error bounds.
//!
//! Values are stored as `m / 2^128` with a conservative bound `err` (in units
//! of `2^-128`) on the distance to the represented exact real. Every
//! operation propagates the bound, so a result can certify statements like
//! "this quantity is within 10^-30 of the integer 1". That is what the
//! lattice-index check needs: the determinant ratio must be pinned to an
//! integer with a provable gap.

use num::traits::Euclid;
use num::{BigInt, BigRational, BigUint, One, Signed, Zero};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Number of fractional bits. 128 bits gives ~38 decimal digits of headroom.
pub const FRAC_BITS: u32 = 128;

/// A real number known to lie in `[m - err, m + err] / 2^128`.
#[derive(Debug, Clone, PartialEq)]
pub struct Real {
    mantissa: BigInt,
    err: BigUint,
}

fn one_shifted() -> BigInt {
    BigInt::one() << FRAC_BITS
}

impl Real {
    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Real {
            mantissa: n.into() << FRAC_BITS,
            err: BigUint::zero(),
        }
    }

    /// Exact rational input; only the final truncation to 2^-128 is lossy.
    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self> {
        let num: BigInt = num.into();
        let den: BigInt = den.into();
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let mantissa = (num << FRAC_BITS).div_euclid(&den);
        Ok(Real {
            mantissa,
            err: BigUint::one(),
        })
    }

    pub fn from_rational(r: &BigRational) -> Result<Self> {
        Self::from_ratio(r.numer().clone(), r.denom().clone())
    }

    /// Parse a plain decimal string. The error bound is one unit in the last
    /// decimal place, so "3.8473" is treated as 3.8473 +- 1e-4.
    pub fn from_decimal_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (sign, body) = match s.strip_prefix('-') {
            Some(rest) => (-1, rest),
            None => (1, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int_part, frac_part) = match body.split_once('.') {
            Some((i, f)) => (i, f),
            None => (body, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(Error::Parse(format!("empty decimal: {s:?}")));
        }
        let digits: String = format!("{int_part}{frac_part}");
        if !digits.chars().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("bad decimal: {s:?}")));
        }
        let value: BigInt = digits.parse().map_err(|_| Error::Parse(s.to_string()))?;
        let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
        let mut real = Self::from_ratio(value * sign, scale.clone())?;
        // input uncertainty: one unit in the last place
        let ulp_err = (one_shifted() / scale).to_biguint().unwrap() + BigUint::one();
        real.err += ulp_err;
        Ok(real)
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn err_ulps(&self) -> &BigUint {
        &self.err
    }

    /// True if the whole certified interval is strictly positive.
    pub fn certainly_positive(&self) -> bool {
        self.mantissa > BigInt::from(self.err.clone())
    }

    pub fn abs(&self) -> Real {
        Real {
            mantissa: self.mantissa.abs(),
            err: self.err.clone(),
        }
    }

    pub fn neg(&self) -> Real {
        Real {
            mantissa: -&self.mantissa,
            err: self.err.clone(),
        }
    }

    pub fn add(&self, other: &Real) -> Real {
        Real {
            mantissa: &self.mantissa + &other.mantissa,
            err: &self.err + &other.err,
        }
    }

    pub fn sub(&self, other: &Real) -> Real {
        Real {
            mantissa: &self.mantissa - &other.mantissa,
            err: &self.err + &other.err,
        }
    }

    pub fn mul(&self, other: &Real) -> Real {
        let mantissa = (&self.mantissa * &other.mantissa) >> FRAC_BITS;
        // |xy - x'y'| <= |x| e_y + |y| e_x + e_x e_y, plus one ulp truncation
        let ax = self.mantissa.magnitude();
        let ay = other.mantissa.magnitude();
        let err = (ax * &other.err + ay * &self.err + &self.err * &other.err) >> FRAC_BITS;
        Real {
            mantissa,
            err: err + BigUint::from(2u32),
        }
    }

    pub fn mul_int(&self, k: impl Into<BigInt>) -> Real {
        let k: BigInt = k.into();
        Real {
            mantissa: &self.mantissa * &k,
            err: &self.err * k.magnitude(),
        }
    }

    pub fn div(&self, other: &Real) -> Result<Real> {
        let ay = other.mantissa.magnitude().clone();
        if BigInt::from(ay.clone()) <= BigInt::from(other.err.clone() * 2u32) {
            return Err(Error::Indeterminate(
                "divisor not certainly nonzero".into(),
            ));
        }
        let mantissa = (&self.mantissa << FRAC_BITS).div_euclid(&other.mantissa);
        // |x/y - x'/y'| <= (|x| e_y + |y| e_x) / (|y| (|y| - e_y))
        let ax = self.mantissa.magnitude().clone();
        let num = (ax * &other.err + &ay * &self.err) << FRAC_BITS;
        let den = &ay * (&ay - &other.err);
        let err = num / den + BigUint::from(2u32);
        Ok(Real { mantissa, err })
    }

    pub fn sqrt(&self) -> Result<Real> {
        if self.mantissa.is_negative() {
            return Err(Error::Invalid("sqrt of negative value".into()));
        }
        let shifted = (self.mantissa.magnitude().clone()) << FRAC_BITS;
        let root = shifted.sqrt();
        // d(sqrt x) = e / (2 sqrt x); if the value may be zero we cannot
        // certify a relative bound, fall back to sqrt(e) absolute.
        let err = if root > self.err.clone() {
            ((self.err.clone() << FRAC_BITS) / (&root * 2u32)) + BigUint::from(2u32)
        } else {
            (self.err.clone() << (FRAC_BITS / 2)).sqrt() + BigUint::from(2u32)
        };
        Ok(Real {
            mantissa: BigInt::from(root),
            err,
        })
    }

    /// Natural logarithm; the value must be certainly positive.
    pub fn ln(&self) -> Result<Real> {
        if !self.certainly_positive() {
            return Err(Error::Indeterminate("ln of non-positive value".into()));
        }
        let bits = self.mantissa.bits() as i64;
        // scale by 2^-k so the reduced value lies in [1, 2)
        let k = bits - (FRAC_BITS as i64 + 1);
        let reduced = Real {
            mantissa: shift_bigint(&self.mantissa, -k),
            err: shift_biguint(&self.err, -k) + BigUint::one(),
        };
        let ln_reduced = ln_near_one(&reduced)?;
        let result = ln_reduced.add(&ln2().mul_int(k));
        Ok(result)
    }

    pub fn to_f64(&self) -> f64 {
        let r = BigRational::new(self.mantissa.clone(), one_shifted());
        rational_to_f64(&r)
    }

    /// Decimal rendering with the given number of fractional digits
    /// (truncated toward zero).
    pub fn to_decimal(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = (&self.mantissa * &scale) >> FRAC_BITS;
        let neg = scaled.is_negative();
        let mag = scaled.magnitude().to_string();
        let mag = if mag.len() <= digits {
            format!("{}{}", "0".repeat(digits + 1 - mag.len()), mag)
        } else {
            mag
        };
        let (int_part, frac_part) = mag.split_at(mag.len() - digits);
        format!(
            "{}{}.{}",
            if neg { "-" } else { "" },
            int_part,
            frac_part
        )
    }

    /// Nearest integer together with the certified distance: returns
    /// `(m, delta, err)` where `delta = |value - m|` as a `Real` upper bound.
    pub fn nearest_integer(&self) -> (BigInt, Real) {
        let half = BigInt::one() << (FRAC_BITS - 1);
        let nearest = (&self.mantissa + half).div_euclid(&one_shifted());
        let delta = Real {
            mantissa: (&self.mantissa - (&nearest << FRAC_BITS)).abs(),
            err: self.err.clone(),
        };
        (nearest, delta)
    }

    /// Strictly-less comparison that holds for every pair of values in the
    /// two certified intervals.
    pub fn certainly_less(&self, other: &Real) -> bool {
        &self.mantissa + BigInt::from(self.err.clone())
            < &other.mantissa - BigInt::from(other.err.clone())
    }
}

fn shift_bigint(x: &BigInt, k: i64) -> BigInt {
    if k >= 0 {
        x << (k as u32)
    } else {
        x >> ((-k) as u32)
    }
}

fn shift_biguint(x: &BigUint, k: i64) -> BigUint {
    if k >= 0 {
        x << (k as u32)
    } else {
        x >> ((-k) as u32)
    }
}

/// 2 atanh(z) evaluated by series; converges fast for |z| <= 1/3.
fn two_atanh(z: &Real) -> Result<Real> {
    let z2 = z.mul(z);
    let mut term = z.clone();
    let mut sum = z.clone();
    let mut n = 1u32;
    loop {
        term = term.mul(&z2);
        n += 2;
        let contrib = Real {
            mantissa: term.mantissa.clone() / BigInt::from(n),
            err: term.err.clone() / BigUint::from(n) + BigUint::one(),
        };
        if contrib.mantissa.is_zero() && contrib.err <= BigUint::from(2u32) {
            break;
        }
        sum = sum.add(&contrib);
        if n > 4096 {
            return Err(Error::Indeterminate("ln series did not converge".into()));
        }
    }
    // truncation slack: the dropped tail is below one ulp, padded generously
    sum.err += BigUint::from(16u32);
    Ok(sum.mul_int(2))
}

/// ln(x) for x in [1, 2): ln x = 2 atanh((x-1)/(x+1)), z <= 1/3.
fn ln_near_one(x: &Real) -> Result<Real> {
    let one = Real::from_int(1);
    let z = x.sub(&one).div(&x.add(&one))?;
    two_atanh(&z)
}

fn ln2() -> &'static Real {
    static LN2: OnceLock<Real> = OnceLock::new();
    // ln 2 = 2 atanh(1/3)
    LN2.get_or_init(|| two_atanh(&Real::from_ratio(1, 3).unwrap()).unwrap())
}

/// Round a rational to f64. Good enough for reporting; all decisions are
/// made on the exact side.
pub fn rational_to_f64(r: &BigRational) -> f64 {
    use num::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

/// Floor square root of a `u128`.
pub fn isqrt_u128(n: u128) -> u128 {
    if n == 0 {
        return 0;
    }
    let mut x = (n as f64).sqrt() as u128 + 2;
    while x * x > n {
        x -= 1;
    }
    x
}

/// Floor cube root, sign-aware.
pub fn icbrt_i128(n: i128) -> i128 {
    let neg = n < 0;
    let m = n.unsigned_abs();
    if m == 0 {
        return 0;
    }
    let mut x = (m as f64).cbrt() as u128 + 2;
    while x.checked_pow(3).map_or(true, |c| c > m) {
        x -= 1;
    }
    let r = x as i128;
    if neg {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_roundtrip() {
        let x = Real::from_decimal_str("3.84732210186307").unwrap();
        assert!(x.to_decimal(10).starts_with("3.8473221018"));
        let y = Real::from_decimal_str("-0.25").unwrap();
        assert_eq!(y.to_f64(), -0.25);
    }

    #[test]
    fn sqrt_two() {
        let x = Real::from_int(2).sqrt().unwrap();
        // 1.41421356237309504880...
        assert!(x.to_decimal(18).starts_with("1.414213562373095048"));
        assert!(x.err_ulps() < &BigUint::from(1000u32));
    }

    #[test]
    fn ln_known_values() {
        let two = Real::from_int(2);
        let l = two.ln().unwrap();
        // ln 2 = 0.693147180559945309...
        assert!(l.to_decimal(15).starts_with("0.693147180559945"));

        // regulator of Q(sqrt 2): ln(1 + sqrt 2) = 0.881373587019543025...
        let eta = Real::from_int(1).add(&Real::from_int(2).sqrt().unwrap());
        let reg = eta.ln().unwrap();
        assert!(reg.to_decimal(15).starts_with("0.881373587019543"));

        let big = Real::from_int(1_000_000);
        assert!(big.ln().unwrap().to_decimal(10).starts_with("13.8155105579"));
    }

    #[test]
    fn nearest_integer_certifies() {
        let x = Real::from_ratio(299999999999i64, 100000000000i64).unwrap();
        let (n, delta) = x.nearest_integer();
        assert_eq!(n, BigInt::from(3));
        assert!(delta.to_f64() < 1e-10);
    }

    #[test]
    fn error_bounds_are_conservative() {
        // (sqrt 2)^2 should contain 2 in its certified interval
        let x = Real::from_int(2).sqrt().unwrap();
        let sq = x.mul(&x);
        let diff = sq.sub(&Real::from_int(2));
        assert!(diff.mantissa.magnitude() <= &(diff.err.clone() * 2u32));
    }

    #[test]
    fn integer_roots() {
        assert_eq!(isqrt_u128(15), 3);
        assert_eq!(isqrt_u128(16), 4);
        assert_eq!(icbrt_i128(26), 2);
        assert_eq!(icbrt_i128(27), 3);
        assert_eq!(icbrt_i128(-27), -3);
    }
}
