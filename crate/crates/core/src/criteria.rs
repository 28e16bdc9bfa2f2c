//! Decision procedures for unit sum numbers and power bases of units.
//!
//! Quadratic and purely cubic fields have complete criteria; complex cubic
//! fields get a one-sided discriminant/regulator test plus a certified
//! lattice-index check on embedding data. The `X^3 + NX + 1` family supplies
//! infinitely many fields where the one-sided test fires.

use num::{BigInt, BigRational, One, Signed};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::precision::{icbrt_i128, isqrt_u128, Real};
use crate::quadratic::is_squarefree;

/// Verdict domain with the convention Exact(k) < Omega < Infinite;
/// Inconclusive is incomparable (a one-sided test said nothing).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum UnitSumTag {
    Exact(u32),
    Omega,
    Infinite,
    Inconclusive,
}

impl UnitSumTag {
    fn rank(&self) -> Option<u64> {
        match self {
            UnitSumTag::Exact(k) => Some(*k as u64),
            UnitSumTag::Omega => Some(u64::MAX - 1),
            UnitSumTag::Infinite => Some(u64::MAX),
            UnitSumTag::Inconclusive => None,
        }
    }

    pub fn as_str(&self) -> String {
        match self {
            UnitSumTag::Exact(k) => format!("exact:{k}"),
            UnitSumTag::Omega => "omega".into(),
            UnitSumTag::Infinite => "infinite".into(),
            UnitSumTag::Inconclusive => "inconclusive".into(),
        }
    }
}

impl PartialOrd for UnitSumTag {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match (self.rank(), other.rank()) {
            (Some(a), Some(b)) => Some(a.cmp(&b)),
            _ if self == other => Some(std::cmp::Ordering::Equal),
            _ => None,
        }
    }
}

/// Whether a verdict rests on a proved theorem or on a stated conjecture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    Theorem,
    Conjecture,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UnitSumClass {
    pub tag: UnitSumTag,
    pub witness: Option<String>,
}

impl UnitSumClass {
    fn new(tag: UnitSumTag, witness: impl Into<String>) -> Self {
        UnitSumClass {
            tag,
            witness: Some(witness.into()),
        }
    }
}

fn is_perfect_square(n: i64) -> bool {
    if n < 0 {
        return false;
    }
    let r = isqrt_u128(n as u128);
    r * r == n as u128
}

fn is_perfect_cube(n: i64) -> bool {
    let r = icbrt_i128(n as i128);
    r * r * r == n as i128
}

/// Unit sum number of the ring of integers of Q(sqrt d): omega iff one of
/// the three theorem conditions holds, infinite otherwise, never a finite k.
pub fn quadratic_usn(d: i64) -> Result<UnitSumClass> {
    if d == 0 || d == 1 {
        return Err(Error::Invalid(format!("degenerate d = {d}")));
    }
    if !is_squarefree(d)? {
        return Err(Error::NotSquarefree(d));
    }
    if d == -1 || d == -3 {
        return Ok(UnitSumClass::new(
            UnitSumTag::Omega,
            format!("d = {d}: imaginary field with extra roots of unity"),
        ));
    }
    if d > 0 {
        if d.rem_euclid(4) != 1 {
            for (t, name) in [(d + 1, "d+1"), (d - 1, "d-1")] {
                if is_perfect_square(t) {
                    return Ok(UnitSumClass::new(
                        UnitSumTag::Omega,
                        format!("{name} = {t} is a perfect square"),
                    ));
                }
            }
        } else {
            for (t, name) in [(d + 4, "d+4"), (d - 4, "d-4")] {
                if is_perfect_square(t) {
                    return Ok(UnitSumClass::new(
                        UnitSumTag::Omega,
                        format!("d = 1 mod 4 and {name} = {t} is a perfect square"),
                    ));
                }
            }
        }
    }
    Ok(UnitSumClass::new(
        UnitSumTag::Infinite,
        "none of the three criterion conditions holds",
    ))
}

fn is_cubefree(d: i64) -> bool {
    let m = (d as i128).unsigned_abs();
    let mut p: u128 = 2;
    while p * p * p <= m {
        if m % (p * p * p) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Unit sum number of the ring of integers of the purely cubic field
/// Q(cbrt d): omega iff (d squarefree, d != +-1 mod 9, d+-1 a perfect cube)
/// or d = 28; infinite otherwise.
pub fn cubic_usn(d: i64) -> Result<UnitSumClass> {
    if d.abs() <= 1 {
        return Err(Error::Invalid(format!("degenerate d = {d}")));
    }
    if !is_cubefree(d) {
        return Err(Error::NotCubefree(d));
    }
    if d == 28 {
        return Ok(UnitSumClass::new(UnitSumTag::Omega, "d = 28 special case"));
    }
    let mod9 = d.rem_euclid(9);
    if is_squarefree(d)? && mod9 != 1 && mod9 != 8 {
        for (t, name) in [(d + 1, "d+1"), (d - 1, "d-1")] {
            if is_perfect_cube(t) {
                return Ok(UnitSumClass::new(
                    UnitSumTag::Omega,
                    format!("d != +-1 mod 9 and {name} = {t} is a perfect cube"),
                ));
            }
        }
    }
    Ok(UnitSumClass::new(
        UnitSumTag::Infinite,
        "criterion conditions fail",
    ))
}

/// Complex-embedding data of a complex cubic field, at fixed precision.
#[derive(Debug, Clone)]
pub struct CubicEmbedding {
    /// Fundamental (or candidate) unit eta > 1 in the real embedding.
    pub eta: Real,
    /// Real part of a complex conjugate of eta.
    pub x: Real,
    /// Imaginary part of the same conjugate.
    pub y: Real,
}

/// |Delta_K|, an upper bound on the regulator, optional embedding data.
#[derive(Debug, Clone)]
pub struct CubicFieldData {
    pub abs_disc: BigInt,
    pub regulator_upper: f64,
    pub embedding: Option<CubicEmbedding>,
}

impl CubicFieldData {
    pub fn new(abs_disc: impl Into<BigInt>, regulator_upper: f64) -> Result<Self> {
        let abs_disc = abs_disc.into();
        if !abs_disc.is_positive() || regulator_upper <= 0.0 || !regulator_upper.is_finite() {
            return Err(Error::Invalid(
                "discriminant and regulator bound must be positive".into(),
            ));
        }
        Ok(CubicFieldData {
            abs_disc,
            regulator_upper,
            embedding: None,
        })
    }
}

/// One-sided sufficient test: omega when
/// |Delta_K| > (e^{3R/4} + e^{-3R/4})^4 at R = regulator_upper. The right
/// side increases in R, so an upper bound for the regulator is enough.
pub fn widmer_sufficient(data: &CubicFieldData) -> Result<UnitSumClass> {
    if !data.abs_disc.is_positive() || data.regulator_upper <= 0.0 {
        return Err(Error::Invalid("nonpositive inputs".into()));
    }
    let r = data.regulator_upper;
    let e = (0.75 * r).exp();
    let rhs = (e + 1.0 / e).powi(4);
    use num::ToPrimitive;
    let lhs = data.abs_disc.to_f64().unwrap_or(f64::INFINITY);
    if lhs > rhs {
        Ok(UnitSumClass::new(
            UnitSumTag::Omega,
            format!("|disc| = {lhs} exceeds bound {rhs:.4}"),
        ))
    } else {
        Ok(UnitSumClass::new(
            UnitSumTag::Inconclusive,
            format!("|disc| = {lhs} does not exceed bound {rhs:.4}; test is one-sided"),
        ))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IndexCheck {
    /// Lattice index [O_K : Z[eta]] certified from the determinant ratio.
    pub index: u64,
    pub class: UnitSumClass,
}

/// Certified determinant test: the ring of integers is generated by units
/// iff sqrt(|Delta|)/2 equals |det| of the embedding matrix of
/// (1, eta, eta^2); the ratio is an integer m, and m = 1 decides omega for
/// the lattice generated by eta.
pub fn widmer_index_check(data: &CubicFieldData) -> Result<IndexCheck> {
    let emb = data
        .embedding
        .as_ref()
        .ok_or_else(|| Error::Invalid("embedding data required".into()))?;
    if !emb.y.abs().certainly_positive() {
        return Err(Error::Invalid(
            "degenerate embedding (y = 0): not a complex cubic field".into(),
        ));
    }
    let (eta, x, y) = (&emb.eta, &emb.x, &emb.y);
    // det [[1, eta, eta^2], [1, x, x^2 - y^2], [0, y, 2xy]]
    //   = (x^2 y + y^3) - 2xy*eta + y*eta^2
    let x2 = x.mul(x);
    let y2 = y.mul(y);
    let det = x2
        .mul(y)
        .add(&y2.mul(y))
        .sub(&x.mul(y).mul_int(2).mul(eta))
        .add(&eta.mul(eta).mul(y));
    let half_sqrt_disc = Real::from_int(data.abs_disc.clone())
        .sqrt()?
        .mul(&Real::from_ratio(1, 2)?);
    let ratio = det.abs().div(&half_sqrt_disc)?;
    let (m, delta) = ratio.nearest_integer();

    let scale = 2f64.powi(-(crate::precision::FRAC_BITS as i32));
    use num::ToPrimitive;
    let err = ratio.err_ulps().to_f64().unwrap_or(f64::INFINITY) * scale;
    let dist = delta.to_f64();
    if dist + 10.0 * err >= 0.5 {
        return Err(Error::Indeterminate(format!(
            "ratio {:.6} +- {err:.2e} does not pin an integer",
            ratio.to_f64()
        )));
    }
    if dist > 10.0 * err {
        return Err(Error::Indeterminate(format!(
            "ratio {:.8} is {dist:.2e} from the nearest integer, beyond 10x precision {err:.2e}",
            ratio.to_f64()
        )));
    }
    if !m.is_positive() {
        return Err(Error::Invalid("determinant ratio is not positive".into()));
    }
    let index = m.to_u64().unwrap();
    let class = if index == 1 {
        UnitSumClass::new(UnitSumTag::Omega, "lattice index 1: Z[eta] is the full ring")
    } else {
        UnitSumClass::new(
            UnitSumTag::Infinite,
            format!("lattice index {index} > 1 for the sublattice generated by eta"),
        )
    };
    Ok(IndexCheck { index, class })
}

/// Build certified embedding data for a complex cubic field from a monic
/// cubic `x^3 + a2 x^2 + a1 x + a0` with one real root `alpha` and a unit
/// `eta = c0 + c1 alpha + c2 alpha^2`.
pub fn cubic_embedding_data(
    poly: [i64; 3],
    eta_coeffs: [i64; 3],
    abs_disc: impl Into<BigInt>,
    regulator_upper: f64,
) -> Result<CubicFieldData> {
    let [a2, a1, a0] = poly;
    // one real root iff the discriminant of the cubic is negative
    let (b, c, dd) = (BigInt::from(a2), BigInt::from(a1), BigInt::from(a0));
    let disc = BigInt::from(18) * &b * &c * &dd - BigInt::from(4) * &b * &b * &b * &dd
        + &b * &b * &c * &c
        - BigInt::from(4) * &c * &c * &c
        - BigInt::from(27) * &dd * &dd;
    if !disc.is_negative() {
        return Err(Error::Invalid(
            "polynomial does not define a complex cubic field".into(),
        ));
    }

    let alpha = isolate_real_root(poly, 140)?;
    // the complex pair is x +- iy with 2x = -a2 - alpha and
    // x^2 + y^2 = -a0 / alpha (product of all three roots is -a0)
    let x = Real::from_int(-a2).sub(&alpha).mul(&Real::from_ratio(1, 2)?);
    let modulus2 = Real::from_int(-a0).div(&alpha)?;
    let y2 = modulus2.sub(&x.mul(&x));
    if !y2.certainly_positive() {
        return Err(Error::Indeterminate("complex pair not separated".into()));
    }
    let y = y2.sqrt()?;

    let [c0, c1, c2] = eta_coeffs;
    let alpha2 = alpha.mul(&alpha);
    let eta = Real::from_int(c0)
        .add(&alpha.mul_int(c1))
        .add(&alpha2.mul_int(c2));
    let xe = Real::from_int(c0)
        .add(&x.mul_int(c1))
        .add(&x.mul(&x).sub(&y.mul(&y)).mul_int(c2));
    let ye = y.mul_int(c1).add(&x.mul(&y).mul_int(2 * c2));

    // consistency: eta^{-1} = |eta'|^2 = xe^2 + ye^2
    let lhs = xe.mul(&xe).add(&ye.mul(&ye));
    let rhs = Real::from_int(1).div(&eta)?;
    let diff = lhs.sub(&rhs);
    let tol = Real::from_ratio(BigInt::one(), BigInt::one() << 64)?;
    if !diff.abs().certainly_less(&tol) {
        return Err(Error::Invalid(
            "embedding data inconsistent: |eta'|^2 != 1/eta".into(),
        ));
    }

    let mut data = CubicFieldData::new(abs_disc, regulator_upper)?;
    data.embedding = Some(CubicEmbedding { eta, x: xe, y: ye });
    Ok(data)
}

/// Bisect the single real root of x^3 + a2 x^2 + a1 x + a0 to 2^-bits,
/// entirely in exact rationals.
pub fn isolate_real_root(poly: [i64; 3], bits: u32) -> Result<Real> {
    let eval = |x: &BigRational| -> BigRational {
        let [a2, a1, a0] = poly;
        x * x * x
            + BigRational::from_integer(a2.into()) * x * x
            + BigRational::from_integer(a1.into()) * x
            + BigRational::from_integer(a0.into())
    };
    let bound = 1 + poly.iter().map(|c| c.abs()).max().unwrap();
    let mut lo = BigRational::from_integer(BigInt::from(-bound));
    let mut hi = BigRational::from_integer(BigInt::from(bound));
    if !eval(&lo).is_negative() || eval(&hi).is_negative() {
        return Err(Error::Invalid("root bracket failed".into()));
    }
    for _ in 0..(bits as usize + 2 + 64) {
        let mid = (&lo + &hi) / BigRational::from_integer(2.into());
        if eval(&mid).is_negative() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    // midpoint, with the interval width folded into the certified error
    let mid = Real::from_rational(&((&lo + &hi) / BigRational::from_integer(2.into())))?;
    let width = Real::from_rational(&(&hi - &lo))?;
    Ok(mid.add(&width).sub(&width))
}

/// The family f_N = X^3 + N X + 1: |Delta| = 4N^3 + 27, regulator bound
/// log(N + 1/N^2), and the real root alpha_N obeys
/// N^2/(N^3+1) < -alpha_N < 1/N.
#[derive(Debug, Clone)]
pub struct ErdosFamilyMember {
    pub n: u64,
    pub admissible: bool,
    pub data: CubicFieldData,
    /// Certified enclosure of the real root.
    pub root: Real,
}

pub fn erdos_family(n: u64) -> Result<ErdosFamilyMember> {
    if n == 0 {
        return Err(Error::Invalid("N must be positive".into()));
    }
    let n_i = n as i64;
    let abs_disc: i64 = 4 * n_i * n_i * n_i + 27;
    let admissible = is_squarefree(abs_disc)?;
    let nf = n as f64;
    let regulator_upper = (nf + 1.0 / (nf * nf)).ln();
    let data = CubicFieldData::new(abs_disc, regulator_upper)?;

    // exact-rational bisection of the single real root
    let root = isolate_real_root([0, n_i, 1], 64)?;

    // assert the two-sided bound N^2/(N^3+1) < -alpha < 1/N exactly:
    // f is increasing, f(-1/N) = -1/N^3 < 0 and f(-N^2/(N^3+1)) has
    // numerator 2N^3 + 1 > 0
    let f = |x: &BigRational| -> BigRational {
        x * x * x + BigRational::from_integer(n_i.into()) * x + BigRational::one()
    };
    let lo = -BigRational::new(BigInt::one(), BigInt::from(n_i));
    let hi = -BigRational::new(BigInt::from(n_i) * n_i, BigInt::from(n_i) * n_i * n_i + 1);
    assert!(f(&lo).is_negative(), "lower root bound violated");
    assert!(f(&hi).is_positive(), "upper root bound violated");
    let root_f = root.to_f64();
    use num::ToPrimitive;
    assert!(root_f > lo.to_f64().unwrap() && root_f < hi.to_f64().unwrap());

    Ok(ErdosFamilyMember {
        n,
        admissible,
        data,
        root,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct PowerBasisVerdict {
    pub has_power_basis: bool,
    pub basis: Basis,
    /// The integer a with m = a^d +- 1, when it exists.
    pub witness: Option<String>,
}

/// Does Z[d-th root of m] admit a power basis consisting of units?
/// True iff m = a^d +- 1 for some integer a. Theorem-backed for d <= 4
/// (with m > 1 non-square when d = 4), conjectural beyond.
pub fn power_basis_units(d: u32, m: i64) -> Result<PowerBasisVerdict> {
    if d < 2 {
        return Err(Error::Invalid("degree must be at least 2".into()));
    }
    if m == 0 {
        return Err(Error::Invalid("m must be nonzero".into()));
    }
    // degree precondition: m not a perfect p-th power for any prime p | d
    let mut dd = d;
    let mut p = 2u32;
    let mut primes = Vec::new();
    while dd > 1 {
        if dd % p == 0 {
            primes.push(p);
            while dd % p == 0 {
                dd /= p;
            }
        }
        p += 1;
    }
    for &p in &primes {
        if is_perfect_power(m, p) {
            return Err(Error::Invalid(format!(
                "m = {m} is a perfect {p}-th power: root of m has degree below {d}"
            )));
        }
    }
    if d == 4 && m <= 1 {
        return Err(Error::Invalid(
            "the quartic theorem requires m > 1".into(),
        ));
    }

    let basis = if d <= 4 {
        Basis::Theorem
    } else {
        Basis::Conjecture
    };
    for (sign, name) in [(-1i64, "+ 1"), (1, "- 1")] {
        // m = a^d + 1 means a^d = m - 1
        let target = m + sign;
        if let Some(a) = exact_root(target, d) {
            return Ok(PowerBasisVerdict {
                has_power_basis: true,
                basis,
                witness: Some(format!("m = {a}^{d} {name}")),
            });
        }
    }
    Ok(PowerBasisVerdict {
        has_power_basis: false,
        basis,
        witness: None,
    })
}

fn is_perfect_power(m: i64, p: u32) -> bool {
    exact_root(m, p).is_some()
}

/// The integer a with a^d = t, if any.
fn exact_root(t: i64, d: u32) -> Option<i64> {
    if t == 0 {
        return Some(0);
    }
    if t < 0 && d % 2 == 0 {
        return None;
    }
    let mag = (t.unsigned_abs()) as f64;
    let guess = mag.powf(1.0 / d as f64).round() as i64;
    for a in (guess - 2).max(0)..=guess + 2 {
        let mut pow: i128 = 1;
        for _ in 0..d {
            pow = pow.saturating_mul(a as i128);
        }
        if pow == t.unsigned_abs() as i128 {
            return Some(if t < 0 { -a } else { a });
        }
    }
    None
}
