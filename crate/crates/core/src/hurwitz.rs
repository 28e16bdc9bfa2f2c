//! Hurwitz quaternions: all-integer or all-half-integer coordinates.
//!
//! Elements are stored in doubled coordinates `(e0, e1, e2, e3)` for
//! `(e0 + e1 i + e2 j + e3 k) / 2`, with the invariant that all four are
//! congruent mod 2. This avoids rationals entirely and makes the parity
//! check one XOR.

use std::fmt;

use num::BigUint;

use crate::error::{Error, Result};
use crate::ring::EuclideanRing;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct HurwitzQuat {
    e: [i128; 4],
}

impl HurwitzQuat {
    /// From doubled coordinates; rejects mixed parity.
    pub fn from_doubled(e0: i128, e1: i128, e2: i128, e3: i128) -> Result<Self> {
        let p = e0 & 1;
        if (e1 & 1) != p || (e2 & 1) != p || (e3 & 1) != p {
            return Err(Error::Invalid(
                "doubled coordinates must share parity".into(),
            ));
        }
        Ok(HurwitzQuat { e: [e0, e1, e2, e3] })
    }

    /// A Lipschitz point (integer coordinates).
    pub fn from_ints(a: i128, b: i128, c: i128, d: i128) -> Self {
        HurwitzQuat {
            e: [2 * a, 2 * b, 2 * c, 2 * d],
        }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0, 0, 0)
    }

    pub fn doubled(&self) -> [i128; 4] {
        self.e
    }

    pub fn is_zero(&self) -> bool {
        self.e == [0, 0, 0, 0]
    }

    pub fn is_half_point(&self) -> bool {
        self.e[0] & 1 == 1
    }

    pub fn neg(&self) -> Self {
        HurwitzQuat {
            e: [-self.e[0], -self.e[1], -self.e[2], -self.e[3]],
        }
    }

    pub fn conj(&self) -> Self {
        HurwitzQuat {
            e: [self.e[0], -self.e[1], -self.e[2], -self.e[3]],
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        HurwitzQuat {
            e: [
                self.e[0] + other.e[0],
                self.e[1] + other.e[1],
                self.e[2] + other.e[2],
                self.e[3] + other.e[3],
            ],
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let [a, b, c, d] = self.e;
        let [e, f, g, h] = other.e;
        // integer quaternion product of the doubled coordinates, then halve;
        // each component is even because the parities match
        let z = [
            a * e - b * f - c * g - d * h,
            a * f + b * e + c * h - d * g,
            a * g + c * e + d * f - b * h,
            a * h + d * e + b * g - c * f,
        ];
        debug_assert!(z.iter().all(|v| v & 1 == 0));
        HurwitzQuat {
            e: [z[0] / 2, z[1] / 2, z[2] / 2, z[3] / 2],
        }
    }

    /// N(q) = (e0^2+e1^2+e2^2+e3^2)/4, a non-negative integer.
    pub fn norm(&self) -> i128 {
        let s: i128 = self.e.iter().map(|&v| v * v).sum();
        debug_assert_eq!(s % 4, 0);
        s / 4
    }

    /// The 24 units: +-1, +-i, +-j, +-k and (+-1 +-i +-j +-k)/2.
    pub fn units() -> Vec<HurwitzQuat> {
        let mut out = Vec::with_capacity(24);
        for axis in 0..4 {
            for sign in [2i128, -2] {
                let mut e = [0i128; 4];
                e[axis] = sign;
                out.push(HurwitzQuat { e });
            }
        }
        for s0 in [1i128, -1] {
            for s1 in [1i128, -1] {
                for s2 in [1i128, -1] {
                    for s3 in [1i128, -1] {
                        out.push(HurwitzQuat { e: [s0, s1, s2, s3] });
                    }
                }
            }
        }
        out
    }
}

impl fmt::Display for HurwitzQuat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn coeff(doubled: i128) -> String {
            if doubled % 2 == 0 {
                format!("{}", doubled / 2)
            } else {
                format!("{}/2", doubled)
            }
        }
        write!(f, "{}", coeff(self.e[0]))?;
        for (v, name) in self.e[1..].iter().zip(["i", "j", "k"]) {
            let mag = coeff(v.abs());
            write!(f, "{}{}{}", if *v < 0 { "-" } else { "+" }, mag, name)?;
        }
        Ok(())
    }
}

impl std::str::FromStr for HurwitzQuat {
    type Err = Error;

    /// Parses "a+bi+cj+dk" with halves as "p/2"; omitted terms default to 0.
    fn from_str(s: &str) -> Result<Self> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if s.is_empty() {
            return Err(Error::Parse("empty quaternion".into()));
        }
        let mut doubled = [None::<i128>; 4];
        let mut term = String::new();
        let mut terms: Vec<String> = Vec::new();
        for (idx, ch) in s.chars().enumerate() {
            if (ch == '+' || ch == '-') && idx > 0 && !term.ends_with('/') {
                terms.push(term.clone());
                term.clear();
            }
            term.push(ch);
        }
        terms.push(term);
        for t in terms {
            let (axis, body) = match t.chars().last() {
                Some('i') => (1, &t[..t.len() - 1]),
                Some('j') => (2, &t[..t.len() - 1]),
                Some('k') => (3, &t[..t.len() - 1]),
                _ => (0, t.as_str()),
            };
            let body = match body {
                "" | "+" => "1",
                "-" => "-1",
                other => other,
            };
            let value: i128 = if let Some(num) = body.strip_suffix("/2") {
                num.parse()
                    .map_err(|_| Error::Parse(format!("bad coefficient {body:?}")))?
            } else {
                2 * body
                    .parse::<i128>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {body:?}")))?
            };
            if doubled[axis].is_some() {
                return Err(Error::Parse(format!("duplicate term in {s:?}")));
            }
            doubled[axis] = Some(value);
        }
        let e: Vec<i128> = doubled.iter().map(|v| v.unwrap_or(0)).collect();
        HurwitzQuat::from_doubled(e[0], e[1], e[2], e[3])
    }
}

/// Round num/den (den > 0) to the nearest integer, ties toward zero.
fn round_nearest(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0);
    let q = num.div_euclid(den);
    let r = num.rem_euclid(den);
    match (2 * r).cmp(&den) {
        std::cmp::Ordering::Greater => q + 1,
        std::cmp::Ordering::Less => q,
        std::cmp::Ordering::Equal => {
            if num > 0 {
                q
            } else {
                q + 1
            }
        }
    }
}

/// The two odd integers bracketing num/den (den > 0).
fn odd_neighbors(num: i128, den: i128) -> [i128; 2] {
    let f = num.div_euclid(den);
    if f % 2 == 0 {
        [f - 1, f + 1]
    } else {
        [f, f + 2]
    }
}

/// Shared core of left/right division: given the exact quotient
/// `c / (2m)` in element coordinates (`c` doubled, `m = N(b) > 0`), return
/// the Hurwitz point chosen by "nearest Lipschitz first, then the
/// half-integer candidates, minimal remainder norm".
fn divide_rounded(
    a: &HurwitzQuat,
    b: &HurwitzQuat,
    c: &HurwitzQuat,
    m: i128,
    left: bool,
) -> (HurwitzQuat, HurwitzQuat) {
    let remainder = |q: &HurwitzQuat| {
        if left {
            a.sub(&q.mul(b))
        } else {
            a.sub(&b.mul(q))
        }
    };
    let lipschitz = HurwitzQuat {
        e: [
            2 * round_nearest(c.e[0], 2 * m),
            2 * round_nearest(c.e[1], 2 * m),
            2 * round_nearest(c.e[2], 2 * m),
            2 * round_nearest(c.e[3], 2 * m),
        ],
    };
    let r = remainder(&lipschitz);
    if r.norm() < b.norm() {
        return (lipschitz, r);
    }
    // exact quotient in doubled coordinates is c/m; try the odd lattice
    let cand: Vec<[i128; 2]> = c.e.iter().map(|&ci| odd_neighbors(ci, m)).collect();
    let mut best: Option<(HurwitzQuat, HurwitzQuat)> = None;
    for mask in 0..16u32 {
        let q = HurwitzQuat {
            e: [
                cand[0][(mask & 1) as usize],
                cand[1][((mask >> 1) & 1) as usize],
                cand[2][((mask >> 2) & 1) as usize],
                cand[3][((mask >> 3) & 1) as usize],
            ],
        };
        let r = remainder(&q);
        if best.as_ref().map_or(true, |(_, br)| r.norm() < br.norm()) {
            best = Some((q, r));
        }
    }
    let (q, r) = best.unwrap();
    debug_assert!(r.norm() < b.norm());
    (q, r)
}

/// a = q*b + r with N(r) < N(b).
pub fn left_divide(a: &HurwitzQuat, b: &HurwitzQuat) -> Result<(HurwitzQuat, HurwitzQuat)> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let c = a.mul(&b.conj());
    Ok(divide_rounded(a, b, &c, b.norm(), true))
}

/// a = b*q + r with N(r) < N(b).
pub fn right_divide(a: &HurwitzQuat, b: &HurwitzQuat) -> Result<(HurwitzQuat, HurwitzQuat)> {
    if b.is_zero() {
        return Err(Error::DivisionByZero);
    }
    let c = b.conj().mul(a);
    Ok(divide_rounded(a, b, &c, b.norm(), false))
}

/// The Hurwitz order as a ring-with-two-sided-division instance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct HurwitzRing;

impl EuclideanRing for HurwitzRing {
    type Elem = HurwitzQuat;

    fn zero(&self) -> HurwitzQuat {
        HurwitzQuat::zero()
    }
    fn one(&self) -> HurwitzQuat {
        HurwitzQuat::one()
    }
    fn add(&self, a: &HurwitzQuat, b: &HurwitzQuat) -> HurwitzQuat {
        a.add(b)
    }
    fn neg(&self, a: &HurwitzQuat) -> HurwitzQuat {
        a.neg()
    }
    fn mul(&self, a: &HurwitzQuat, b: &HurwitzQuat) -> HurwitzQuat {
        a.mul(b)
    }
    fn is_zero(&self, a: &HurwitzQuat) -> bool {
        a.is_zero()
    }
    fn eq(&self, a: &HurwitzQuat, b: &HurwitzQuat) -> bool {
        a == b
    }

    fn size(&self, a: &HurwitzQuat) -> Option<BigUint> {
        if a.is_zero() {
            None
        } else {
            Some(BigUint::from(a.norm() as u128))
        }
    }

    fn left_divide(&self, a: &HurwitzQuat, b: &HurwitzQuat) -> Result<(HurwitzQuat, HurwitzQuat)> {
        left_divide(a, b)
    }

    fn right_divide(&self, a: &HurwitzQuat, b: &HurwitzQuat) -> Result<(HurwitzQuat, HurwitzQuat)> {
        right_divide(a, b)
    }

    fn unit_test(&self, a: &HurwitzQuat) -> Option<HurwitzQuat> {
        if a.norm() == 1 {
            Some(a.conj())
        } else {
            None
        }
    }

    fn encode(&self, a: &HurwitzQuat) -> String {
        a.to_string()
    }

    fn decode(&self, s: &str) -> Result<HurwitzQuat> {
        s.parse()
    }
}
