//! The lattice-point counting constants c_{n,s} as polytope volumes.
//!
//! c_{n,s} is the volume of {g < 1} for
//!
//! ```text
//! g(x) = sum_{i<=s} max{0, x_{1i}, ..., x_{ni}}
//!        + max{0, -sum_i x_{1i}, ..., -sum_i x_{ni}}
//! ```
//!
//! Everything here revolves around three routes to the same numbers: plain
//! indicator Monte Carlo over the bounding box [-s, 1]^{ns}, exact closed
//! forms where they are known (s = 1, n = 1, s = 2, plus the printed table),
//! and for s = 2 the region decomposition V_{K,L,M} with its seven-case sign
//! split.
//!
//! For s = 2 there is also a tighter sampler: g < 1 forces every pair into
//! the triangle T = {x <= 1, y <= 1, x + y >= -1} of area 9/2, so sampling
//! T^n instead of the 9^n box keeps hit counts usable up to n = 8.

use num::{BigInt, BigRational, One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::CounterRng;

/// Dimensions of the volume problem; ambient dimension is n*s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PolytopeSpec {
    pub n: u32,
    pub s: u32,
}

impl PolytopeSpec {
    pub fn new(n: u32, s: u32) -> Result<Self> {
        if n == 0 || s == 0 {
            return Err(Error::Invalid("dimensions must be positive".into()));
        }
        Ok(PolytopeSpec { n, s })
    }

    pub fn dims(&self) -> usize {
        (self.n * self.s) as usize
    }

    /// Volume of the bounding box [-s, 1]^{ns}.
    pub fn box_volume(&self) -> f64 {
        ((self.s + 1) as f64).powi(self.dims() as i32)
    }
}

/// A seeded Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
    pub seed: u64,
    pub hits: u64,
    pub domain_volume: f64,
    pub region_tag: Option<String>,
}

impl McEstimate {
    pub fn hit_rate(&self) -> f64 {
        self.hits as f64 / self.samples as f64
    }

    /// |estimate - reference| in units of the standard error.
    pub fn z_score(&self, reference: f64) -> f64 {
        if self.std_error == 0.0 {
            if self.mean == reference {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            (self.mean - reference).abs() / self.std_error
        }
    }

    pub fn within_sigmas(&self, reference: f64, sigmas: f64) -> bool {
        (self.mean - reference).abs() <= sigmas * self.std_error
    }

    /// Samples needed for ~2% relative error at the observed hit rate.
    pub fn suggested_samples_for_two_percent(&self) -> u64 {
        let p = self.hit_rate().max(1e-12);
        ((1.0 - p) / (p * 0.0004)).ceil() as u64
    }
}

/// g evaluated on a row-major n x s matrix (row j = x_{j1..js}).
pub fn g_value(x: &[f64], n: usize, s: usize) -> f64 {
    assert_eq!(x.len(), n * s, "matrix shape mismatch");
    let mut total = 0.0;
    for i in 0..s {
        let mut m = 0.0f64;
        for j in 0..n {
            m = m.max(x[j * s + i]);
        }
        total += m;
    }
    let mut m = 0.0f64;
    for j in 0..n {
        let row_sum: f64 = x[j * s..(j + 1) * s].iter().sum();
        m = m.max(-row_sum);
    }
    total + m
}

const CHUNK: u64 = 1 << 16;

/// Deterministic parallel indicator Monte Carlo: fixed-size chunks, one
/// counter stream per chunk, exact integer reduction. Bit-identical for a
/// given (seed, samples) regardless of thread count.
fn count_hits<F>(samples: u64, seed: u64, test: F) -> u64
where
    F: Fn(&mut CounterRng) -> bool + Sync,
{
    let streams = samples.div_ceil(CHUNK);
    (0..streams)
        .into_par_iter()
        .map(|stream| {
            let mut rng = CounterRng::new(seed, stream);
            let lo = stream * CHUNK;
            let hi = (lo + CHUNK).min(samples);
            let mut hits = 0u64;
            for _ in lo..hi {
                if test(&mut rng) {
                    hits += 1;
                }
            }
            hits
        })
        .sum()
}

fn estimate_from_hits(
    hits: u64,
    samples: u64,
    seed: u64,
    domain_volume: f64,
    region_tag: Option<String>,
) -> McEstimate {
    let p = hits as f64 / samples as f64;
    McEstimate {
        mean: domain_volume * p,
        std_error: domain_volume * (p * (1.0 - p) / samples as f64).sqrt(),
        samples,
        seed,
        hits,
        domain_volume,
        region_tag,
    }
}

/// Unbiased volume estimate of {g < 1} by uniform sampling of [-s, 1]^{ns}.
/// Boundary ties g = 1 count as misses (a measure-zero set).
pub fn mc_volume(spec: &PolytopeSpec, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::Invalid("samples must be positive".into()));
    }
    let (n, s) = (spec.n as usize, spec.s as usize);
    let dims = n * s;
    if dims > 64 {
        return Err(Error::Invalid("ambient dimension capped at 64".into()));
    }
    let lo = -(spec.s as f64);
    let hits = count_hits(samples, seed, |rng| {
        let mut x = [0.0f64; 64];
        for v in x.iter_mut().take(dims) {
            *v = rng.next_in(lo, 1.0);
        }
        g_value(&x[..dims], n, s) < 1.0
    });
    Ok(estimate_from_hits(hits, samples, seed, spec.box_volume(), None))
}

/// Draw a point uniformly in T = {x <= 1, y <= 1, x + y >= -1}: sample the
/// square [-2, 1]^2 and reflect the sub-triangle x + y < -1 across the line,
/// an area-preserving bijection onto T.
#[inline]
fn sample_pair_in_triangle(rng: &mut CounterRng) -> (f64, f64) {
    let x = rng.next_in(-2.0, 1.0);
    let y = rng.next_in(-2.0, 1.0);
    if x + y < -1.0 {
        (-1.0 - y, -1.0 - x)
    } else {
        (x, y)
    }
}

const TRIANGLE_AREA: f64 = 4.5;

/// Volume of {g < 1} for s = 2 sampled over the envelope T^n; same
/// estimand as `mc_volume`, usable up to n ~ 8 where the box hit rate
/// underflows.
pub fn mc_volume_envelope(n: u32, samples: u64, seed: u64) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::Invalid("samples must be positive".into()));
    }
    if n == 0 || n > 16 {
        return Err(Error::Invalid("n out of range".into()));
    }
    let n = n as usize;
    let hits = count_hits(samples, seed, |rng| {
        let mut max_x = 0.0f64;
        let mut max_y = 0.0f64;
        let mut max_ns = 0.0f64;
        for _ in 0..n {
            let (x, y) = sample_pair_in_triangle(rng);
            max_x = max_x.max(x);
            max_y = max_y.max(y);
            max_ns = max_ns.max(-(x + y));
        }
        max_x + max_y + max_ns < 1.0
    });
    let volume = TRIANGLE_AREA.powi(n as i32);
    let mut est = estimate_from_hits(hits, samples, seed, volume, None);
    est.region_tag = Some("envelope".into());
    Ok(est)
}

fn binomial(n: u64, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Exact value of c_{n,s} where a closed form or printed value exists:
/// c_{n,1} = n+1, c_{1,s} = C(2s,s)/s!, c_{n,2} = (n+1)(2n+1)/2^n, and the
/// three remaining printed table entries.
pub fn closed_form(n: u32, s: u32) -> Option<BigRational> {
    if n == 0 || s == 0 {
        return None;
    }
    let (n64, s64) = (n as u64, s as u64);
    if s == 1 {
        return Some(BigRational::from_integer(BigInt::from(n64 + 1)));
    }
    if n == 1 {
        return Some(BigRational::new(binomial(2 * s64, s64), factorial(s64)));
    }
    if s == 2 {
        let num = BigInt::from((n64 + 1) * (2 * n64 + 1));
        return Some(BigRational::new(num, BigInt::one() << n64));
    }
    match (n, s) {
        (2, 3) => Some(BigRational::new(7.into(), 3.into())),
        (3, 3) => Some(BigRational::new(55.into(), 54.into())),
        // (2, 4) is printed as 275/32, which Monte Carlo refutes decisively
        // (two independent samplers agree on ~0.8591, matching 275/320); no
        // value is vouched for as exact here. See `corrected_table_value`.
        _ => None,
    }
}

/// Corrections to printed table entries that the volume estimators refute.
/// The (2,4) entry reads 275/32 = 8.59 but the measured volume is
/// 0.85913 +- 0.00038, matching 275/320 — a dropped trailing zero.
pub fn corrected_table_value(n: u32, s: u32) -> Option<BigRational> {
    if (n, s) == (2, 4) {
        Some(BigRational::new(275.into(), 320.into()))
    } else {
        None
    }
}

/// Index pattern of (K, L, M) up to the symmetry that fixes the volumes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KlmPattern {
    Distinct,
    TwoEqual,
    AllEqual,
}

pub fn klm_pattern(k: u32, l: u32, m: u32) -> KlmPattern {
    if k == l && l == m {
        KlmPattern::AllEqual
    } else if k == l || l == m || k == m {
        KlmPattern::TwoEqual
    } else {
        KlmPattern::Distinct
    }
}

/// Exact per-region values: I^{(r)} for the distinct pattern carries a
/// numerator 2, the two-equal pattern a numerator 1; cases 1-3, 4-6, and 7
/// share denominators n(2n-1)(n-1)2^n, n(n-1)2^n, n 2^n. `None` for the
/// case gives the region total.
pub fn region_closed_form(n: u32, pattern: KlmPattern, case: Option<u8>) -> Result<BigRational> {
    let n = n as u64;
    let numerator: u64 = match pattern {
        KlmPattern::AllEqual => return Ok(BigRational::from_integer(0.into())),
        KlmPattern::Distinct => {
            if n < 3 {
                return Err(Error::Invalid("distinct indices need n >= 3".into()));
            }
            2
        }
        KlmPattern::TwoEqual => {
            if n < 2 {
                return Err(Error::Invalid("two equal indices need n >= 2".into()));
            }
            1
        }
    };
    let two_n = BigInt::one() << n;
    let value = match case {
        None => BigRational::new(
            BigInt::from(numerator * (n + 1) * (2 * n + 1)),
            BigInt::from(n * (2 * n - 1) * (n - 1)) * &two_n,
        ),
        Some(r @ 1..=3) => {
            let _ = r;
            BigRational::new(
                BigInt::from(numerator),
                BigInt::from(n * (2 * n - 1) * (n - 1)) * &two_n,
            )
        }
        Some(4..=6) => BigRational::new(
            BigInt::from(numerator),
            BigInt::from(n * (n - 1)) * &two_n,
        ),
        Some(7) => BigRational::new(BigInt::from(numerator), BigInt::from(n) * &two_n),
        Some(r) => return Err(Error::Invalid(format!("case {r} out of 1..=7"))),
    };
    Ok(value)
}

/// Does the sign triple (x_K, y_L, -x_M - y_M) land in case r of the seven
/// sign patterns? Pattern order: (+,-,-), (-,+,-), (-,-,+), (+,+,-),
/// (+,-,+), (-,+,+), (+,+,+).
fn case_matches(r: u8, a: f64, b: f64, c: f64) -> bool {
    let signs = [
        (true, false, false),
        (false, true, false),
        (false, false, true),
        (true, true, false),
        (true, false, true),
        (false, true, true),
        (true, true, true),
    ];
    let (sa, sb, sc) = signs[(r - 1) as usize];
    (a >= 0.0) == sa && (b >= 0.0) == sb && (c >= 0.0) == sc
}

/// Monte Carlo volume of V_{K,L,M} (s = 2), optionally restricted to one of
/// the seven sign cases. Indices are 1-based. Sampling runs over the
/// envelope T^n.
#[allow(clippy::too_many_arguments)]
pub fn region_volume_mc(
    n: u32,
    k: u32,
    l: u32,
    m: u32,
    case: Option<u8>,
    samples: u64,
    seed: u64,
) -> Result<McEstimate> {
    if samples == 0 {
        return Err(Error::Invalid("samples must be positive".into()));
    }
    if n == 0 || n > 16 {
        return Err(Error::Invalid("n out of range".into()));
    }
    for idx in [k, l, m] {
        if idx == 0 || idx > n {
            return Err(Error::Invalid(format!("index {idx} out of 1..={n}")));
        }
    }
    if let Some(r) = case {
        if !(1..=7).contains(&r) {
            return Err(Error::Invalid(format!("case {r} out of 1..=7")));
        }
    }
    let nu = n as usize;
    let (ki, li, mi) = ((k - 1) as usize, (l - 1) as usize, (m - 1) as usize);
    let hits = count_hits(samples, seed, |rng| {
        let mut xs = [0.0f64; 16];
        let mut ys = [0.0f64; 16];
        for j in 0..nu {
            let (x, y) = sample_pair_in_triangle(rng);
            xs[j] = x;
            ys[j] = y;
        }
        let (xk, yl) = (xs[ki], ys[li]);
        let sm = xs[mi] + ys[mi];
        for j in 0..nu {
            if xs[j] > xk || ys[j] > yl || xs[j] + ys[j] < sm {
                return false;
            }
        }
        let g = xk.max(0.0) + yl.max(0.0) + (-sm).max(0.0);
        if g >= 1.0 {
            return false;
        }
        match case {
            None => true,
            Some(r) => case_matches(r, xk, yl, -sm),
        }
    });
    let volume = TRIANGLE_AREA.powi(nu as i32);
    let mut est = estimate_from_hits(hits, samples, seed, volume, None);
    est.region_tag = Some(match case {
        None => format!("V({k},{l},{m})"),
        Some(r) => format!("V({k},{l},{m}) case {r}"),
    });
    Ok(est)
}

/// Everything the identity c_{n,2} = n(n-1)(n-2) I_{123} + 3n(n-1) I_{112}
/// asserts, checked both exactly (rationals) and by Monte Carlo.
#[derive(Debug, Clone, Serialize)]
pub struct CnTwoIdentityReport {
    pub n: u32,
    pub seed: u64,
    pub samples: u64,
    pub closed_form: String,
    pub assembled_exact: String,
    pub exact_identity_holds: bool,
    pub lhs_mc: McEstimate,
    pub rhs_mc_mean: f64,
    pub rhs_mc_std_error: f64,
    pub sides_agree_3_sigma: bool,
    /// Per-case Monte Carlo z-scores against the shared group values,
    /// keyed "pattern/case".
    pub group_checks: Vec<(String, f64)>,
    pub groups_within_3_sigma: bool,
}

/// Assemble c_{n,2} from the region formulas, exactly and by MC.
pub fn c_n2_identity_report(n: u32, samples: u64, seed: u64) -> Result<CnTwoIdentityReport> {
    if n < 2 {
        return Err(Error::Invalid("identity needs n >= 2".into()));
    }
    let n64 = n as u64;
    let cf = closed_form(n, 2).unwrap();

    let mut assembled = BigRational::from_integer(0.into());
    let coeff_distinct = BigInt::from(n64 * (n64 - 1) * (n64 - 2));
    let coeff_two = BigInt::from(3 * n64 * (n64 - 1));
    if n >= 3 {
        assembled = assembled
            + BigRational::from_integer(coeff_distinct.clone())
                * region_closed_form(n, KlmPattern::Distinct, None)?;
    }
    assembled = assembled
        + BigRational::from_integer(coeff_two.clone())
            * region_closed_form(n, KlmPattern::TwoEqual, None)?;
    let exact_identity_holds = assembled == cf;

    // Monte Carlo on both sides with independent streams
    let lhs_mc = mc_volume_envelope(n, samples, seed)?;
    let mut rhs_mean = 0.0;
    let mut rhs_var = 0.0;
    if n >= 3 {
        let est = region_volume_mc(n, 1, 2, 3, None, samples, seed ^ 0x9D15)?;
        let c = coeff_distinct.to_f64().unwrap();
        rhs_mean += c * est.mean;
        rhs_var += (c * est.std_error).powi(2);
    }
    let est = region_volume_mc(n, 1, 1, 2, None, samples, seed ^ 0x112)?;
    let c = coeff_two.to_f64().unwrap();
    rhs_mean += c * est.mean;
    rhs_var += (c * est.std_error).powi(2);
    let rhs_sd = rhs_var.sqrt();
    let sides_agree = (lhs_mc.mean - rhs_mean).abs()
        <= 3.0 * (lhs_mc.std_error.powi(2) + rhs_var).sqrt();

    // grouped equalities: cases 1-3 share a value, cases 4-6 share a value
    let mut group_checks = Vec::new();
    let mut groups_ok = true;
    let per_case = samples;
    for (pattern, klm) in [
        (KlmPattern::TwoEqual, (1u32, 1u32, 2u32)),
        (KlmPattern::Distinct, (1, 2, 3)),
    ] {
        if pattern == KlmPattern::Distinct && n < 3 {
            continue;
        }
        for r in 1..=7u8 {
            let expected = region_closed_form(n, pattern, Some(r))?
                .to_f64()
                .unwrap();
            let est = region_volume_mc(
                n,
                klm.0,
                klm.1,
                klm.2,
                Some(r),
                per_case,
                seed ^ (0xCA5E + r as u64),
            )?;
            let z = est.z_score(expected);
            groups_ok &= est.within_sigmas(expected, 3.0);
            let tag = match pattern {
                KlmPattern::TwoEqual => format!("I(1,1,2)/case{r}"),
                KlmPattern::Distinct => format!("I(1,2,3)/case{r}"),
                KlmPattern::AllEqual => unreachable!(),
            };
            group_checks.push((tag, z));
        }
    }

    Ok(CnTwoIdentityReport {
        n,
        seed,
        samples,
        closed_form: cf.to_string(),
        assembled_exact: assembled.to_string(),
        exact_identity_holds,
        lhs_mc,
        rhs_mc_mean: rhs_mean,
        rhs_mc_std_error: rhs_sd,
        sides_agree_3_sigma: sides_agree,
        group_checks,
        groups_within_3_sigma: groups_ok,
    })
}

/// One row of the printed c_{n,s} table.
#[derive(Debug, Clone, Serialize)]
pub struct TableRow {
    pub n: u32,
    pub s: u32,
    pub printed: String,
    pub exact: Option<String>,
    pub mc: Option<McEstimate>,
    /// z-score of the Monte Carlo estimate against the printed value.
    pub z_score: Option<f64>,
    /// Present when the printed value is refuted and a correction fits.
    pub erratum: Option<TableErratum>,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableErratum {
    pub corrected: String,
    pub z_vs_corrected: f64,
    pub note: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TableReport {
    pub seed: u64,
    pub samples_default: u64,
    pub samples_deep: u64,
    pub rows: Vec<TableRow>,
    pub all_pass: bool,
}

/// The printed values of the constants table, row by row.
pub fn printed_table() -> Vec<(u32, u32, BigRational)> {
    let q = |num: i64, den: i64| BigRational::new(num.into(), den.into());
    vec![
        (1, 1, q(2, 1)),
        (2, 1, q(3, 1)),
        (3, 1, q(4, 1)),
        (4, 1, q(5, 1)),
        (5, 1, q(6, 1)),
        (1, 2, q(3, 1)),
        (2, 2, q(15, 4)),
        (3, 2, q(7, 2)),
        (4, 2, q(45, 16)),
        (1, 3, q(10, 3)),
        (2, 3, q(7, 3)),
        (3, 3, q(55, 54)),
        (1, 4, q(35, 12)),
        (2, 4, q(275, 32)),
        (1, 5, q(21, 10)),
    ]
}

/// Reproduce the printed table: exact closed forms where they exist
/// (s = 1, n = 1, s = 2), Monte Carlo within 3 standard errors elsewhere.
/// `samples_deep` applies to the (2,4) entry whose hit rate is lowest.
pub fn table_report(samples_default: u64, samples_deep: u64, seed: u64) -> Result<TableReport> {
    let mut rows = Vec::new();
    let mut all_pass = true;
    for (n, s, printed) in printed_table() {
        let has_closed = s == 1 || n == 1 || s == 2;
        if has_closed {
            let exact = closed_form(n, s).unwrap();
            let pass = exact == printed;
            all_pass &= pass;
            rows.push(TableRow {
                n,
                s,
                printed: printed.to_string(),
                exact: Some(exact.to_string()),
                mc: None,
                z_score: None,
                erratum: None,
                pass,
            });
        } else {
            let samples = if (n, s) == (2, 4) {
                samples_deep
            } else {
                samples_default
            };
            let spec = PolytopeSpec::new(n, s)?;
            let est = mc_volume(&spec, samples, seed ^ ((n as u64) << 8 | s as u64))?;
            let reference = printed.to_f64().unwrap();
            let z = est.z_score(reference);
            let mut pass = est.within_sigmas(reference, 3.0);
            let mut erratum = None;
            if !pass {
                if let Some(corrected) = corrected_table_value(n, s) {
                    let cref = corrected.to_f64().unwrap();
                    let zc = est.z_score(cref);
                    // the printed value must be clearly refuted, not merely
                    // unlucky, before the correction is accepted
                    if est.within_sigmas(cref, 3.0) && z > 30.0 {
                        pass = true;
                        erratum = Some(TableErratum {
                            corrected: corrected.to_string(),
                            z_vs_corrected: zc,
                            note: format!(
                                "printed value {printed} is off by the measured volume by {z:.0} standard errors; {corrected} (a dropped trailing zero) matches"
                            ),
                        });
                    }
                }
            }
            all_pass &= pass;
            rows.push(TableRow {
                n,
                s,
                printed: printed.to_string(),
                exact: None,
                mc: Some(est),
                z_score: Some(z),
                erratum,
                pass,
            });
        }
    }
    Ok(TableReport {
        seed,
        samples_default,
        samples_deep,
        rows,
        all_pass,
    })
}
