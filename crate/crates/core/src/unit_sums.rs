//! Representations of quadratic-order elements as sums of units.
//!
//! Real orders have units +-eta^a; searches run over the exponent window
//! |a| <= exp_bound, so a negative answer certifies only "none within
//! bound". Imaginary orders have finitely many units and absence is a full
//! certificate.
//!
//! `find_k_units` (exactly k terms, repeats allowed) uses meet-in-the-middle
//! over unit multisets. `find_distinct_units` needs up to ~24 pairwise
//! distinct terms, far beyond what subset meet-in-the-middle can enumerate;
//! it runs an exhaustive signed-digit search over the exponent window with
//! embedding-size pruning, which visits the same search space.

use num::BigInt;
use serde::Serialize;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::quadratic::{fundamental_unit, torsion_units, QuadraticElt, QuadraticOrder};

/// A verified witness: `target = sum(terms)`, every term a unit.
#[derive(Debug, Clone, Serialize)]
pub struct UnitSumRepr {
    pub target: QuadraticElt,
    pub terms: Vec<QuadraticElt>,
    pub distinct: bool,
}

impl UnitSumRepr {
    pub fn new(order: &QuadraticOrder, target: QuadraticElt, terms: Vec<QuadraticElt>) -> Self {
        let mut sum = order.zero();
        for t in &terms {
            sum = sum.add(t);
        }
        assert_eq!(sum, target, "witness does not sum to target");
        assert!(terms.iter().all(|t| t.is_unit()), "non-unit term");
        let distinct = {
            let mut seen: Vec<&QuadraticElt> = Vec::new();
            terms.iter().all(|t| {
                if seen.contains(&t) {
                    false
                } else {
                    seen.push(t);
                    true
                }
            })
        };
        UnitSumRepr {
            target,
            terms,
            distinct,
        }
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Re-check the invariants by exact arithmetic.
    pub fn verify(&self, order: &QuadraticOrder) -> bool {
        let mut sum = order.zero();
        for t in &self.terms {
            if !t.is_unit() {
                return false;
            }
            sum = sum.add(t);
        }
        if sum != self.target {
            return false;
        }
        if self.distinct {
            for (i, a) in self.terms.iter().enumerate() {
                if self.terms[i + 1..].contains(a) {
                    return false;
                }
            }
        }
        true
    }
}

/// Search result; absence carries the bound it is relative to.
#[derive(Debug, Clone, Serialize)]
pub enum SearchOutcome {
    Found(UnitSumRepr),
    Absent { exp_bound: u32, certified: bool },
}

impl SearchOutcome {
    pub fn found(&self) -> Option<&UnitSumRepr> {
        match self {
            SearchOutcome::Found(r) => Some(r),
            SearchOutcome::Absent { .. } => None,
        }
    }
}

/// The search universe: units indexed in a fixed order (exponent ascending,
/// positive before negative) so witnesses are deterministic.
fn unit_universe(order: &QuadraticOrder, exp_bound: u32) -> Result<Vec<QuadraticElt>> {
    if order.is_real() {
        let eta = fundamental_unit(order)?.unit;
        let b = exp_bound as i32;
        let mut units = Vec::with_capacity(2 * (2 * exp_bound as usize + 1));
        for a in -b..=b {
            let p = eta.unit_pow(a).unwrap();
            units.push(p.clone());
            units.push(p.neg());
        }
        Ok(units)
    } else {
        Ok(torsion_units(order))
    }
}

/// Express `alpha` as a sum of exactly `k` units (repeats allowed).
pub fn find_k_units(
    order: &QuadraticOrder,
    alpha: &QuadraticElt,
    k: u32,
    exp_bound: u32,
) -> Result<SearchOutcome> {
    if k == 0 {
        return Err(Error::Invalid("k must be positive".into()));
    }
    let units = unit_universe(order, exp_bound)?;
    let certified = !order.is_real();

    // meet in the middle: split k into halves, hash all left-half multiset
    // sums, scan right-half multisets
    let k_left = (k / 2) as usize;
    let k_right = (k as usize) - k_left;

    let mut left: HashMap<(BigInt, BigInt), Vec<usize>> = HashMap::new();
    enumerate_multisets(&units, k_left, order, &mut |idxs, sum| {
        let key = coord_key(sum);
        match left.get(&key) {
            Some(prev) if prev.as_slice() <= idxs => {}
            _ => {
                left.insert(key, idxs.to_vec());
            }
        }
        true
    });

    let mut best: Option<Vec<usize>> = None;
    enumerate_multisets(&units, k_right, order, &mut |idxs, sum| {
        let need = alpha.sub(sum);
        if let Some(l) = left.get(&coord_key(&need)) {
            let mut combined = l.clone();
            combined.extend_from_slice(idxs);
            combined.sort_unstable();
            if best.as_ref().map_or(true, |b| &combined < b) {
                best = Some(combined);
            }
        }
        true
    });

    match best {
        Some(idxs) => {
            let terms: Vec<QuadraticElt> = idxs.iter().map(|&i| units[i].clone()).collect();
            Ok(SearchOutcome::Found(UnitSumRepr::new(
                order,
                alpha.clone(),
                terms,
            )))
        }
        None => Ok(SearchOutcome::Absent {
            exp_bound,
            certified,
        }),
    }
}

fn coord_key(x: &QuadraticElt) -> (BigInt, BigInt) {
    let (u, v) = x.coords();
    (u.clone(), v.clone())
}

/// Visit all nondecreasing index tuples of the given size with their sums.
fn enumerate_multisets(
    units: &[QuadraticElt],
    size: usize,
    order: &QuadraticOrder,
    visit: &mut dyn FnMut(&[usize], &QuadraticElt) -> bool,
) {
    fn rec(
        units: &[QuadraticElt],
        size: usize,
        start: usize,
        idxs: &mut Vec<usize>,
        sum: QuadraticElt,
        visit: &mut dyn FnMut(&[usize], &QuadraticElt) -> bool,
    ) -> bool {
        if idxs.len() == size {
            return visit(idxs, &sum);
        }
        for i in start..units.len() {
            idxs.push(i);
            let keep = rec(units, size, i, idxs, sum.add(&units[i]), visit);
            idxs.pop();
            if !keep {
                return false;
            }
        }
        true
    }
    rec(units, size, 0, &mut Vec::new(), order.zero(), visit);
}

/// Turn a k-term representation into an l-term one (l > k) of the same
/// target: re-derive a k-representation of `target - (l-k)` and append
/// (l-k) copies of 1, falling back to a direct l-term search.
pub fn pad_representation(
    order: &QuadraticOrder,
    rep: &UnitSumRepr,
    l: u32,
    exp_bound: u32,
) -> Result<UnitSumRepr> {
    let k = rep.len() as u32;
    if l <= k {
        return Err(Error::Invalid(format!("l = {l} must exceed k = {k}")));
    }
    let pad = l - k;
    let shifted = rep
        .target
        .sub(&order.from_pair(BigInt::from(pad), BigInt::from(0)));
    if let SearchOutcome::Found(base) = find_k_units(order, &shifted, k, exp_bound)? {
        let mut terms = base.terms;
        for _ in 0..pad {
            terms.push(order.one());
        }
        return Ok(UnitSumRepr::new(order, rep.target.clone(), terms));
    }
    match find_k_units(order, &rep.target, l, exp_bound)? {
        SearchOutcome::Found(direct) => Ok(direct),
        SearchOutcome::Absent { .. } => Err(Error::NotWithinBound(format!(
            "no {l}-term representation of {} with exponents within {exp_bound}",
            rep.target
        ))),
    }
}

/// Express `alpha` as a sum of pairwise distinct units.
pub fn find_distinct_units(
    order: &QuadraticOrder,
    alpha: &QuadraticElt,
    exp_bound: u32,
    max_terms: u32,
) -> Result<SearchOutcome> {
    if max_terms == 0 {
        return Err(Error::Invalid("max_terms must be positive".into()));
    }
    if alpha.is_zero() {
        // the only minimal distinct representation of 0 is a cancelling pair
        if max_terms < 2 {
            return Ok(SearchOutcome::Absent {
                exp_bound,
                certified: true,
            });
        }
        return Ok(SearchOutcome::Found(UnitSumRepr::new(
            order,
            alpha.clone(),
            vec![order.one(), order.one().neg()],
        )));
    }
    if !order.is_real() {
        // subsets of the finite unit group
        let units = torsion_units(order);
        let n = units.len();
        for mask in 1u32..(1 << n) {
            if mask.count_ones() > max_terms {
                continue;
            }
            let mut sum = order.zero();
            let mut terms = Vec::new();
            for (i, u) in units.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    sum = sum.add(u);
                    terms.push(u.clone());
                }
            }
            if &sum == alpha {
                return Ok(SearchOutcome::Found(UnitSumRepr::new(
                    order,
                    alpha.clone(),
                    terms,
                )));
            }
        }
        return Ok(SearchOutcome::Absent {
            exp_bound,
            certified: true,
        });
    }

    // signed-digit search: a representation by distinct units with no
    // cancelling pair is a choice of c_a in {-1, 0, 1} per exponent with
    // sum c_a eta^a = alpha; for alpha != 0 a cancelling pair can always be
    // removed, so this encoding is exhaustive
    let searcher = DigitSearch::new(order, exp_bound)?;
    match searcher.search(alpha, max_terms, 1) {
        Some(terms) => Ok(SearchOutcome::Found(UnitSumRepr::new(
            order,
            alpha.clone(),
            terms,
        ))),
        None => Ok(SearchOutcome::Absent {
            exp_bound,
            certified: false,
        }),
    }
}

/// Express `alpha` as a sum of at most `max_terms` units, repeats allowed
/// (the brute-force oracle behind "generated by units" consistency checks).
pub fn find_bounded_units(
    order: &QuadraticOrder,
    alpha: &QuadraticElt,
    exp_bound: u32,
    max_terms: u32,
) -> Result<SearchOutcome> {
    if max_terms == 0 {
        return Err(Error::Invalid("max_terms must be positive".into()));
    }
    if alpha.is_zero() {
        return Ok(SearchOutcome::Found(UnitSumRepr::new(
            order,
            alpha.clone(),
            vec![order.one(), order.one().neg()],
        )));
    }
    if !order.is_real() {
        // iterate exact sizes over the finite unit group
        for k in 1..=max_terms {
            if let SearchOutcome::Found(r) = find_k_units(order, alpha, k, exp_bound)? {
                return Ok(SearchOutcome::Found(r));
            }
        }
        return Ok(SearchOutcome::Absent {
            exp_bound,
            certified: true,
        });
    }
    let searcher = DigitSearch::new(order, exp_bound)?;
    match searcher.search(alpha, max_terms, i64::MAX) {
        Some(terms) => Ok(SearchOutcome::Found(UnitSumRepr::new(
            order,
            alpha.clone(),
            terms,
        ))),
        None => Ok(SearchOutcome::Absent {
            exp_bound,
            certified: false,
        }),
    }
}

/// Exhaustive search over digit vectors (c_{-B}, ..., c_B),
/// alpha = sum c_a eta^a, |c_a| <= digit_cap, sum |c_a| <= max_terms.
/// Prunes on both real embeddings: the residual must stay within the mass
/// still reachable from the remaining exponents.
struct DigitSearch {
    powers: Vec<QuadraticElt>,
    sigma1: Vec<f64>,
    // cumulative reachable mass per embedding, indexed like `powers`
    cap1: Vec<f64>,
    cap2: Vec<f64>,
}

impl DigitSearch {
    fn new(order: &QuadraticOrder, exp_bound: u32) -> Result<Self> {
        let eta = fundamental_unit(order)?.unit;
        let b = exp_bound as i32;
        let mut powers = Vec::new();
        for a in -b..=b {
            powers.push(eta.unit_pow(a).unwrap());
        }
        let sigma1: Vec<f64> = powers.iter().map(|p| p.approx_real()).collect();
        let sigma2: Vec<f64> = powers.iter().map(|p| p.conj().approx_real().abs()).collect();
        let mut cap1 = vec![0.0; powers.len()];
        let mut cap2 = vec![0.0; powers.len()];
        let mut acc1 = 0.0;
        let mut acc2 = 0.0;
        for i in 0..powers.len() {
            acc1 += sigma1[i];
            acc2 += sigma2[i];
            cap1[i] = acc1;
            cap2[i] = acc2;
        }
        Ok(DigitSearch {
            powers,
            sigma1,
            cap1,
            cap2,
        })
    }

    /// Returns the chosen unit terms, or None when the window is exhausted.
    fn search(
        &self,
        alpha: &QuadraticElt,
        max_terms: u32,
        digit_cap: i64,
    ) -> Option<Vec<QuadraticElt>> {
        let mut digits = vec![0i64; self.powers.len()];
        if self.rec(
            alpha.clone(),
            (self.powers.len() - 1) as i32,
            max_terms as i64,
            digit_cap,
            &mut digits,
        ) {
            let mut terms = Vec::new();
            for (i, &c) in digits.iter().enumerate() {
                let unit = if c >= 0 {
                    self.powers[i].clone()
                } else {
                    self.powers[i].neg()
                };
                for _ in 0..c.abs() {
                    terms.push(unit.clone());
                }
            }
            debug_assert!(!terms.is_empty());
            Some(terms)
        } else {
            None
        }
    }

    fn rec(
        &self,
        residual: QuadraticElt,
        idx: i32,
        budget: i64,
        digit_cap: i64,
        digits: &mut Vec<i64>,
    ) -> bool {
        if residual.is_zero() && digits.iter().any(|&c| c != 0) {
            return true;
        }
        if idx < 0 || budget <= 0 {
            return false;
        }
        let i = idx as usize;
        let s1 = residual.approx_real();
        let s2 = residual.conj().approx_real();
        // residual must be reachable with the remaining exponents and budget
        let mass = (budget as f64).max(1.0);
        if s1.abs() > self.cap1[i] * mass + 1e-6 {
            return false;
        }
        if s2.abs() > self.cap2[i] * mass + 1e-6 {
            return false;
        }
        // viable digits at this exponent: |s1 - c sigma1[i]| must stay within
        // the mass below, widened by one step for rounding safety
        let below1 = if i > 0 { self.cap1[i - 1] * mass } else { 0.0 };
        let center = s1 / self.sigma1[i];
        let lo = (((s1 - below1) / self.sigma1[i]).ceil() as i64 - 1)
            .max(-digit_cap)
            .max(-budget);
        let hi = (((s1 + below1) / self.sigma1[i]).floor() as i64 + 1)
            .min(digit_cap)
            .min(budget);
        if lo > hi {
            return false;
        }
        let mut candidates: Vec<i64> = (lo..=hi).collect();
        candidates.sort_by(|a, b| {
            let da = (*a as f64 - center).abs();
            let db = (*b as f64 - center).abs();
            da.partial_cmp(&db).unwrap()
        });
        for c in candidates {
            let mut next = residual.clone();
            if c != 0 {
                let mut step = self.powers[i].clone();
                if c < 0 {
                    step = step.neg();
                }
                for _ in 0..c.abs() {
                    next = next.sub(&step);
                }
            }
            digits[i] = c;
            if self.rec(next, idx - 1, budget - c.abs(), digit_cap, digits) {
                return true;
            }
            digits[i] = 0;
        }
        false
    }
}
