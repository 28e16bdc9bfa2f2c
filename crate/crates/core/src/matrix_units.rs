//! Matrices over rings with two-sided Euclidean division: words in the
//! generators of E_n(R), diagonalization UAV = D, sums of two unit
//! matrices, and the bounded falsification search for the 2x2 witness over
//! imaginary quadratic non-principal orders.
//!
//! E_n(R) is generated by elementary matrices E_n(a, i, j), permutation
//! matrices, and -I. Working with generator words keeps membership in
//! E_n(R) true by construction; evaluation and inversion are exact.

use num::{BigInt, One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadratic::{QuadraticElt, QuadraticOrder};
use crate::ring::EuclideanRing;

/// Dense rectangular matrix over a pluggable ring instance.
#[derive(Debug, Clone, PartialEq)]
pub struct RingMatrix<E> {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<E>,
}

impl<E: Clone> RingMatrix<E> {
    pub fn from_rows(rows: Vec<Vec<E>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 {
            return Err(Error::Invalid("empty matrix".into()));
        }
        let c = rows[0].len();
        if c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::Invalid("ragged matrix".into()));
        }
        Ok(RingMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn at(&self, i: usize, j: usize) -> &E {
        &self.entries[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut E {
        &mut self.entries[i * self.cols + j]
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

pub fn mat_identity<R: EuclideanRing>(ring: &R, n: usize) -> RingMatrix<R::Elem> {
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(if i == j { ring.one() } else { ring.zero() });
        }
    }
    RingMatrix {
        rows: n,
        cols: n,
        entries,
    }
}

pub fn mat_add<R: EuclideanRing>(
    ring: &R,
    a: &RingMatrix<R::Elem>,
    b: &RingMatrix<R::Elem>,
) -> RingMatrix<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    RingMatrix {
        rows: a.rows,
        cols: a.cols,
        entries: a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| ring.add(x, y))
            .collect(),
    }
}

pub fn mat_sub<R: EuclideanRing>(
    ring: &R,
    a: &RingMatrix<R::Elem>,
    b: &RingMatrix<R::Elem>,
) -> RingMatrix<R::Elem> {
    assert_eq!((a.rows, a.cols), (b.rows, b.cols));
    RingMatrix {
        rows: a.rows,
        cols: a.cols,
        entries: a
            .entries
            .iter()
            .zip(&b.entries)
            .map(|(x, y)| ring.sub(x, y))
            .collect(),
    }
}

pub fn mat_mul<R: EuclideanRing>(
    ring: &R,
    a: &RingMatrix<R::Elem>,
    b: &RingMatrix<R::Elem>,
) -> RingMatrix<R::Elem> {
    assert_eq!(a.cols, b.rows);
    let mut entries = Vec::with_capacity(a.rows * b.cols);
    for i in 0..a.rows {
        for j in 0..b.cols {
            let mut acc = ring.zero();
            for t in 0..a.cols {
                acc = ring.add(&acc, &ring.mul(a.at(i, t), b.at(t, j)));
            }
            entries.push(acc);
        }
    }
    RingMatrix {
        rows: a.rows,
        cols: b.cols,
        entries,
    }
}

pub fn mat_eq<R: EuclideanRing>(
    ring: &R,
    a: &RingMatrix<R::Elem>,
    b: &RingMatrix<R::Elem>,
) -> bool {
    (a.rows, a.cols) == (b.rows, b.cols)
        && a.entries
            .iter()
            .zip(&b.entries)
            .all(|(x, y)| ring.eq(x, y))
}

pub fn is_diagonal<R: EuclideanRing>(ring: &R, a: &RingMatrix<R::Elem>) -> bool {
    a.is_square()
        && (0..a.rows)
            .all(|i| (0..a.cols).all(|j| i == j || ring.is_zero(a.at(i, j))))
}

/// One generator of E_n(R). Indices are 1-based as in E_n(a, i, j);
/// a permutation is its image list [sigma(1), ..., sigma(n)] and evaluates
/// to the matrix with 1 at (i, sigma(i)).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum EnGen<E> {
    Elem { a: E, row: usize, col: usize },
    Perm(Vec<usize>),
    NegId,
}

pub type EnWord<E> = Vec<EnGen<E>>;

fn perm_inverse(sigma: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; sigma.len()];
    for (i, &s) in sigma.iter().enumerate() {
        inv[s - 1] = i + 1;
    }
    inv
}

/// The reversed word of generator inverses.
pub fn en_inverse<R: EuclideanRing>(ring: &R, word: &EnWord<R::Elem>) -> EnWord<R::Elem> {
    word.iter()
        .rev()
        .map(|g| match g {
            EnGen::Elem { a, row, col } => EnGen::Elem {
                a: ring.neg(a),
                row: *row,
                col: *col,
            },
            EnGen::Perm(s) => EnGen::Perm(perm_inverse(s)),
            EnGen::NegId => EnGen::NegId,
        })
        .collect()
}

fn gen_matrix<R: EuclideanRing>(ring: &R, g: &EnGen<R::Elem>, n: usize) -> Result<RingMatrix<R::Elem>> {
    match g {
        EnGen::Elem { a, row, col } => {
            if *row == *col || *row == 0 || *col == 0 || *row > n || *col > n {
                return Err(Error::Invalid(format!(
                    "elementary generator indices ({row},{col}) invalid for n = {n}"
                )));
            }
            let mut m = mat_identity(ring, n);
            *m.at_mut(row - 1, col - 1) = a.clone();
            Ok(m)
        }
        EnGen::Perm(sigma) => {
            if sigma.len() != n {
                return Err(Error::Invalid("permutation length mismatch".into()));
            }
            let mut seen = vec![false; n];
            for &s in sigma {
                if s == 0 || s > n || seen[s - 1] {
                    return Err(Error::Invalid("not a permutation".into()));
                }
                seen[s - 1] = true;
            }
            let mut m = RingMatrix {
                rows: n,
                cols: n,
                entries: vec![ring.zero(); n * n],
            };
            for (i, &s) in sigma.iter().enumerate() {
                *m.at_mut(i, s - 1) = ring.one();
            }
            Ok(m)
        }
        EnGen::NegId => {
            let mut m = mat_identity(ring, n);
            for e in m.entries.iter_mut() {
                *e = ring.neg(e);
            }
            Ok(m)
        }
    }
}

/// Evaluate a word (left-to-right product of its generators).
pub fn en_eval<R: EuclideanRing>(
    ring: &R,
    word: &EnWord<R::Elem>,
    n: usize,
) -> Result<RingMatrix<R::Elem>> {
    let mut acc = mat_identity(ring, n);
    for g in word {
        let m = gen_matrix(ring, g, n)?;
        acc = mat_mul(ring, &acc, &m);
    }
    Ok(acc)
}

/// The signed cyclic shift S: S[i][i+1] = 1, S[n][1] = (-1)^(n-1), as a
/// word. Odd n is a plain n-cycle; even n needs a sign fix in the last
/// block first.
fn shift_word<R: EuclideanRing>(ring: &R, n: usize) -> EnWord<R::Elem> {
    let mut sigma: Vec<usize> = (1..=n).map(|i| if i == n { 1 } else { i + 1 }).collect();
    let cycle = EnGen::Perm(std::mem::take(&mut sigma));
    if n % 2 == 1 {
        vec![cycle]
    } else {
        // diag(1,...,1,-1) = J-block at (n-1, n) times the (n-1, n) swap
        let mut swap: Vec<usize> = (1..=n).collect();
        swap.swap(n - 2, n - 1);
        vec![
            EnGen::Elem {
                a: ring.one(),
                row: n - 1,
                col: n,
            },
            EnGen::Elem {
                a: ring.neg(&ring.one()),
                row: n,
                col: n - 1,
            },
            EnGen::Elem {
                a: ring.one(),
                row: n - 1,
                col: n,
            },
            EnGen::Perm(swap),
            cycle,
        ]
    }
}

/// A diagonal matrix is a sum of two members of E_n(R): the cyclic
/// staircase splits diag(a_1..a_n) into
///
/// ```text
/// P = S * prod_i E(a_i, i+1, i)        (diagonal a_1..a_{n-1}, superdiag 1)
/// Q = -S * E((-1)^n a_n, 1, n)         (superdiag -1, corner, a_n at (n,n))
/// ```
///
/// Both summands are emitted as words, so E_n-membership holds by
/// construction. Requires n >= 2.
pub fn diagonal_split<R: EuclideanRing>(
    ring: &R,
    diag: &[R::Elem],
) -> Result<(EnWord<R::Elem>, EnWord<R::Elem>)> {
    let n = diag.len();
    if n < 2 {
        return Err(Error::Invalid("diagonal split needs n >= 2".into()));
    }
    let s_word = shift_word(ring, n);

    let mut p_word = s_word.clone();
    for (i, a) in diag.iter().take(n - 1).enumerate() {
        p_word.push(EnGen::Elem {
            a: a.clone(),
            row: i + 2,
            col: i + 1,
        });
    }

    let corner = if n % 2 == 0 {
        diag[n - 1].clone()
    } else {
        ring.neg(&diag[n - 1])
    };
    let mut q_word = vec![EnGen::NegId];
    q_word.extend(s_word);
    q_word.push(EnGen::Elem {
        a: corner,
        row: 1,
        col: n,
    });
    Ok((p_word, q_word))
}

/// The sign-mirrored variant of `diagonal_split` (staircase with the +-1
/// pattern flipped). Distinct from the primary split whenever 1 != -1.
fn diagonal_split_mirror<R: EuclideanRing>(
    ring: &R,
    diag: &[R::Elem],
) -> Result<(EnWord<R::Elem>, EnWord<R::Elem>)> {
    let n = diag.len();
    if n < 2 {
        return Err(Error::Invalid("diagonal split needs n >= 2".into()));
    }
    let s_word = shift_word(ring, n);

    let mut p_word = vec![EnGen::NegId];
    p_word.extend(s_word.clone());
    for (i, a) in diag.iter().take(n - 1).enumerate() {
        p_word.push(EnGen::Elem {
            a: ring.neg(a),
            row: i + 2,
            col: i + 1,
        });
    }

    let corner = if n % 2 == 0 {
        ring.neg(&diag[n - 1])
    } else {
        diag[n - 1].clone()
    };
    let mut q_word = s_word;
    q_word.push(EnGen::Elem {
        a: corner,
        row: 1,
        col: n,
    });
    Ok((p_word, q_word))
}

/// Two different decompositions of the same diagonal matrix into sums of
/// two units, with distinct summands. Requires 1 != -1 in the ring.
pub fn distinct_split<R: EuclideanRing>(
    ring: &R,
    diag: &[R::Elem],
) -> Result<(
    (EnWord<R::Elem>, EnWord<R::Elem>),
    (EnWord<R::Elem>, EnWord<R::Elem>),
)> {
    if ring.is_zero(&ring.add(&ring.one(), &ring.one())) {
        return Err(Error::CharacteristicTwo);
    }
    Ok((
        diagonal_split(ring, diag)?,
        diagonal_split_mirror(ring, diag)?,
    ))
}

/// Gaussian-style reduction: returns words U, V and a diagonal D with
/// eval(U) * A * eval(V) = D. Rows are reduced with left division (quotient
/// on the left), columns with right division; permutations bring a
/// size-minimal pivot to the corner, and the pivot size strictly decreases
/// whenever a pass leaves a nonzero remainder.
pub fn diagonalize<R: EuclideanRing>(
    ring: &R,
    a: &RingMatrix<R::Elem>,
) -> Result<(EnWord<R::Elem>, EnWord<R::Elem>, RingMatrix<R::Elem>)> {
    if !a.is_square() {
        return Err(Error::Invalid("diagonalize needs a square matrix".into()));
    }
    let n = a.rows;
    let mut d = a.clone();
    let mut left_ops: Vec<EnGen<R::Elem>> = Vec::new(); // applied first-to-last
    let mut v_word: Vec<EnGen<R::Elem>> = Vec::new();

    let apply_left = |d: &mut RingMatrix<R::Elem>, ops: &mut Vec<EnGen<R::Elem>>, g: EnGen<R::Elem>, ring: &R| -> Result<()> {
        let m = gen_matrix(ring, &g, n)?;
        *d = mat_mul(ring, &m, d);
        ops.push(g);
        Ok(())
    };
    let apply_right = |d: &mut RingMatrix<R::Elem>, ops: &mut Vec<EnGen<R::Elem>>, g: EnGen<R::Elem>, ring: &R| -> Result<()> {
        let m = gen_matrix(ring, &g, n)?;
        *d = mat_mul(ring, d, &m);
        ops.push(g);
        Ok(())
    };

    for k in 0..n {
        loop {
            // size-minimal nonzero pivot in the trailing block
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..n {
                for j in k..n {
                    if ring.is_zero(d.at(i, j)) {
                        continue;
                    }
                    let better = match pivot {
                        None => true,
                        Some((pi, pj)) => ring.size(d.at(i, j)) < ring.size(d.at(pi, pj)),
                    };
                    if better {
                        pivot = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = pivot else { break };
            if pi != k {
                let mut sigma: Vec<usize> = (1..=n).collect();
                sigma.swap(k, pi);
                apply_left(&mut d, &mut left_ops, EnGen::Perm(sigma), ring)?;
            }
            if pj != k {
                let mut sigma: Vec<usize> = (1..=n).collect();
                sigma.swap(k, pj);
                apply_right(&mut d, &mut v_word, EnGen::Perm(sigma), ring)?;
            }

            // clear the column below the pivot
            for i in (k + 1)..n {
                if ring.is_zero(d.at(i, k)) {
                    continue;
                }
                let (q, _r) = ring.left_divide(d.at(i, k), d.at(k, k))?;
                apply_left(
                    &mut d,
                    &mut left_ops,
                    EnGen::Elem {
                        a: ring.neg(&q),
                        row: i + 1,
                        col: k + 1,
                    },
                    ring,
                )?;
            }
            if ((k + 1)..n).any(|i| !ring.is_zero(d.at(i, k))) {
                continue; // a remainder became the new, smaller pivot
            }
            // clear the row right of the pivot (leaves the column intact)
            for j in (k + 1)..n {
                if ring.is_zero(d.at(k, j)) {
                    continue;
                }
                let (q, _r) = ring.right_divide(d.at(k, j), d.at(k, k))?;
                apply_right(
                    &mut d,
                    &mut v_word,
                    EnGen::Elem {
                        a: ring.neg(&q),
                        row: k + 1,
                        col: j + 1,
                    },
                    ring,
                )?;
            }
            if ((k + 1)..n).all(|j| ring.is_zero(d.at(k, j))) {
                break;
            }
        }
    }

    // U = (last op) ... (first op) as a product-order word
    left_ops.reverse();
    Ok((left_ops, v_word, d))
}

/// A sum-of-two-units certificate; summands are either generator words or
/// explicit matrices with verified inverses.
#[derive(Debug, Clone, Serialize)]
pub enum UnitMatrixWitness<E> {
    Word(EnWord<E>),
    Explicit {
        matrix: Vec<Vec<String>>,
        #[serde(skip)]
        raw: RingMatrix<E>,
        #[serde(skip)]
        raw_inverse: RingMatrix<E>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct TwoUnitDecomp<E> {
    pub n: usize,
    pub summands: [UnitMatrixWitness<E>; 2],
    #[serde(skip)]
    pub target: RingMatrix<E>,
}

impl<E: Clone + PartialEq + std::fmt::Debug + Send + Sync> TwoUnitDecomp<E> {
    /// Summand matrices, evaluated.
    pub fn summand_matrices<R: EuclideanRing<Elem = E>>(
        &self,
        ring: &R,
    ) -> Result<[RingMatrix<E>; 2]> {
        let get = |w: &UnitMatrixWitness<E>| -> Result<RingMatrix<E>> {
            match w {
                UnitMatrixWitness::Word(word) => en_eval(ring, word, self.n),
                UnitMatrixWitness::Explicit { raw, .. } => Ok(raw.clone()),
            }
        };
        Ok([get(&self.summands[0])?, get(&self.summands[1])?])
    }

    /// Exact verification: the summands add to the target and each is
    /// invertible (word inverse or stored inverse multiplies to identity on
    /// both sides).
    pub fn verify<R: EuclideanRing<Elem = E>>(&self, ring: &R) -> Result<bool> {
        let [m1, m2] = self.summand_matrices(ring)?;
        if !mat_eq(ring, &mat_add(ring, &m1, &m2), &self.target) {
            return Ok(false);
        }
        let id = mat_identity(ring, self.n);
        for w in &self.summands {
            let (m, inv) = match w {
                UnitMatrixWitness::Word(word) => (
                    en_eval(ring, word, self.n)?,
                    en_eval(ring, &en_inverse(ring, word), self.n)?,
                ),
                UnitMatrixWitness::Explicit {
                    raw, raw_inverse, ..
                } => (raw.clone(), raw_inverse.clone()),
            };
            if !mat_eq(ring, &mat_mul(ring, &m, &inv), &id)
                || !mat_eq(ring, &mat_mul(ring, &inv, &m), &id)
            {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Decompose any square matrix (n >= 2) into a sum of two members of
/// E_n(R): diagonalize UAV = D, split D = P + Q, and conjugate back,
/// A = U^-1 P V^-1 + U^-1 Q V^-1.
pub fn two_units_decompose<R: EuclideanRing>(
    ring: &R,
    a: &RingMatrix<R::Elem>,
) -> Result<TwoUnitDecomp<R::Elem>> {
    if !a.is_square() || a.rows < 2 {
        return Err(Error::Invalid(
            "sum-of-two-units needs a square matrix with n >= 2".into(),
        ));
    }
    let n = a.rows;
    let (u_word, v_word, d) = diagonalize(ring, a)?;
    let diag: Vec<R::Elem> = (0..n).map(|i| d.at(i, i).clone()).collect();
    let (p_word, q_word) = diagonal_split(ring, &diag)?;

    let u_inv = en_inverse(ring, &u_word);
    let v_inv = en_inverse(ring, &v_word);
    let mut w1 = u_inv.clone();
    w1.extend(p_word);
    w1.extend(v_inv.clone());
    let mut w2 = u_inv;
    w2.extend(q_word);
    w2.extend(v_inv);

    let decomp = TwoUnitDecomp {
        n,
        summands: [UnitMatrixWitness::Word(w1), UnitMatrixWitness::Word(w2)],
        target: a.clone(),
    };
    debug_assert!(decomp.verify(ring)?);
    Ok(decomp)
}

/// Invert a unit matrix via diagonalization; errors when some diagonal
/// entry is not a unit.
pub fn mat_inverse<R: EuclideanRing>(
    ring: &R,
    m: &RingMatrix<R::Elem>,
) -> Result<RingMatrix<R::Elem>> {
    let (u_word, v_word, d) = diagonalize(ring, m)?;
    let n = m.rows;
    let mut d_inv = mat_identity(ring, n);
    for i in 0..n {
        let inv = ring
            .unit_test(d.at(i, i))
            .ok_or_else(|| Error::Invalid("matrix is not invertible".into()))?;
        *d_inv.at_mut(i, i) = inv;
    }
    // UMV = D  =>  M^-1 = V D^-1 U
    let u = en_eval(ring, &u_word, n)?;
    let v = en_eval(ring, &v_word, n)?;
    let inv = mat_mul(ring, &mat_mul(ring, &v, &d_inv), &u);
    let id = mat_identity(ring, n);
    if !mat_eq(ring, &mat_mul(ring, &inv, m), &id) || !mat_eq(ring, &mat_mul(ring, m, &inv), &id) {
        return Err(Error::Invalid("matrix is not invertible".into()));
    }
    Ok(inv)
}

/// Transport a decomposition of A to one of UAV (U, V invertible):
/// UAV = U M1 V + U M2 V.
pub fn equivalence_transfer<R: EuclideanRing>(
    ring: &R,
    decomp: &TwoUnitDecomp<R::Elem>,
    u: &RingMatrix<R::Elem>,
    v: &RingMatrix<R::Elem>,
) -> Result<TwoUnitDecomp<R::Elem>> {
    let u_inv = mat_inverse(ring, u)?;
    let v_inv = mat_inverse(ring, v)?;
    let [m1, m2] = decomp.summand_matrices(ring)?;
    let target = mat_mul(ring, &mat_mul(ring, u, &decomp.target), v);

    let make = |m: &RingMatrix<R::Elem>, m_inv_parts: (&RingMatrix<R::Elem>, &RingMatrix<R::Elem>)| {
        let conj = mat_mul(ring, &mat_mul(ring, u, m), v);
        let inv = mat_mul(ring, &mat_mul(ring, &v_inv, m_inv_parts.0), m_inv_parts.1);
        (conj, inv)
    };
    let inv_of = |w: &UnitMatrixWitness<R::Elem>| -> Result<RingMatrix<R::Elem>> {
        match w {
            UnitMatrixWitness::Word(word) => en_eval(ring, &en_inverse(ring, word), decomp.n),
            UnitMatrixWitness::Explicit { raw_inverse, .. } => Ok(raw_inverse.clone()),
        }
    };
    let m1_inv = inv_of(&decomp.summands[0])?;
    let m2_inv = inv_of(&decomp.summands[1])?;
    let (c1, c1i) = make(&m1, (&m1_inv, &u_inv));
    let (c2, c2i) = make(&m2, (&m2_inv, &u_inv));

    let encode = |m: &RingMatrix<R::Elem>| -> Vec<Vec<String>> {
        (0..m.rows)
            .map(|i| (0..m.cols).map(|j| ring.encode(m.at(i, j))).collect())
            .collect()
    };
    let out = TwoUnitDecomp {
        n: decomp.n,
        summands: [
            UnitMatrixWitness::Explicit {
                matrix: encode(&c1),
                raw: c1,
                raw_inverse: c1i,
            },
            UnitMatrixWitness::Explicit {
                matrix: encode(&c2),
                raw: c2,
                raw_inverse: c2i,
            },
        ],
        target,
    };
    if !out.verify(ring)? {
        return Err(Error::Invalid("transfer verification failed".into()));
    }
    Ok(out)
}

/// Imaginary quadratic fields Q(sqrt -d) with class number 1; complete by
/// the Baker-Heegner-Stark theorem, so membership decides h = 1 for every
/// positive squarefree d.
const CLASS_NUMBER_ONE: [i64; 9] = [1, 2, 3, 7, 11, 19, 43, 67, 163];

/// A 2x2 matrix over O_{Q(sqrt -d)} that is provably not a sum of two unit
/// matrices, plus the exhaustive bounded search transcript.
#[derive(Debug, Clone, Serialize)]
pub struct VamosWitness {
    pub d: i64,
    /// The odd rational prime under the non-principal ideal.
    pub ideal_norm: u64,
    pub generators: (QuadraticElt, QuadraticElt),
    pub non_principality: String,
    pub height_bound: i64,
    pub candidates_checked: u64,
    pub decompositions_found: u64,
}

fn exact_divide(x: &QuadraticElt, y: &QuadraticElt) -> Option<QuadraticElt> {
    let n = y.norm();
    if n.is_zero() {
        return None;
    }
    let z = x.mul(&y.conj());
    let (u, v) = z.coords();
    if (u % &n).is_zero() && (v % &n).is_zero() {
        QuadraticElt::new(x.d(), u / &n, v / &n).ok()
    } else {
        None
    }
}

/// Find an odd prime q and a second generator g so that (q, g) is a
/// non-principal ideal of norm q, verified by the norm-form argument
/// (no element of norm q exists).
fn non_principal_pair(order: &QuadraticOrder, d: i64) -> Result<(u64, QuadraticElt, String)> {
    let half = order.half_basis();
    'primes: for q in (3i64..=500).step_by(2) {
        if !crate::ring::is_small_prime(q as u64) {
            continue;
        }
        // need a degree-one prime over q: q | d (ramified) or -d a square
        // mod q (split)
        let g = if d % q == 0 {
            order.from_pair(0, 1) // sqrt(-d)
        } else {
            let target = (-d).rem_euclid(q);
            let mut root = None;
            for j in 0..q {
                if (j * j) % q == target {
                    root = Some(j);
                    break;
                }
            }
            match root {
                Some(j) => order.from_pair(j, 1),
                None => continue 'primes, // inert
            }
        };
        // norm form: is there an element of norm q? (units are +-1 here,
        // so principality of a norm-q ideal forces such an element)
        let mut representable = false;
        if half {
            // (u^2 + d v^2)/4 = q
            let vmax = ((4 * q) as f64 / d as f64).sqrt() as i64 + 1;
            for v in 0..=vmax {
                let rest = 4 * q - d * v * v;
                if rest < 0 {
                    break;
                }
                let u = (rest as f64).sqrt() as i64;
                for uu in [u - 1, u, u + 1] {
                    if uu >= 0 && uu * uu == rest && (uu - v).rem_euclid(2) == 0 {
                        representable = true;
                    }
                }
            }
        } else {
            let bmax = (q as f64 / d as f64).sqrt() as i64 + 1;
            for b in 0..=bmax {
                let rest = q - d * b * b;
                if rest < 0 {
                    break;
                }
                let a = (rest as f64).sqrt() as i64;
                for aa in [a - 1, a, a + 1] {
                    if aa >= 0 && aa * aa == rest {
                        representable = true;
                    }
                }
            }
        }
        if representable {
            continue; // the ideal may be principal; try the next prime
        }
        let why = format!(
            "no element of O_Q(sqrt(-{d})) has norm {q}, so the degree-one ideal over {q} is non-principal"
        );
        return Ok((q as u64, g, why));
    }
    Err(Error::Unverifiable(format!(
        "no verified non-principal prime below 500 for d = {d}"
    )))
}

/// Build the witness matrix A = [[a1, 0], [a2, 0]] over O_{Q(sqrt -d)} with
/// (a1, a2) a verified non-principal pair, and exhaustively search for
/// decompositions A = M1 + M2 into unit matrices of entry height <= bound.
///
/// The prime a1 = q is chosen odd: the only 2-good elements of the order
/// are 0 and +-2 (units are +-1), so 2 must avoid the ideal for the
/// non-2-good criterion to bite. With a1 = 2 the matrix is I plus a unit —
/// e.g. [[2,0],[1+sqrt(-5),0]] = I + [[1,0],[1+sqrt(-5),-1]] — so the
/// ramified prime over 2 can never give a witness.
pub fn vamos_witness(d: i64, height_bound: i64) -> Result<VamosWitness> {
    if d <= 0 {
        return Err(Error::Invalid("d must be positive (field Q(sqrt -d))".into()));
    }
    if height_bound < 1 {
        return Err(Error::Invalid("height bound must be positive".into()));
    }
    let order = QuadraticOrder::new(-d)?;
    if CLASS_NUMBER_ONE.contains(&d) {
        return Err(Error::ClassNumberOne);
    }
    let (q, g, why) = non_principal_pair(&order, d)?;
    let a1 = order.from_pair(q as i64, 0);
    let a2 = g;

    // elements of height <= H, in doubled coordinates
    let hb = 2 * height_bound;
    let mut box_elems: Vec<QuadraticElt> = Vec::new();
    for u in -hb..=hb {
        for v in -hb..=hb {
            if let Ok(e) = order.elt(u, v) {
                box_elems.push(e);
            }
        }
    }
    let in_box = |e: &QuadraticElt| {
        let (u, v) = e.coords();
        u.magnitude() <= &BigInt::from(hb).to_biguint().unwrap()
            && v.magnitude() <= &BigInt::from(hb).to_biguint().unwrap()
    };

    let one = BigInt::one();
    let minus_one = -BigInt::one();
    let mut candidates_checked = 0u64;
    let mut decompositions_found = 0u64;

    // A = M1 + M2 with det M1 = e1, det M2 = e2 forces
    // a1*e - a2*b = e1 - e2 for M1 = [[a, b], [c, e]]
    for (eps1, eps2) in [(1i64, 1i64), (1, -1), (-1, 1), (-1, -1)] {
        let t = order.from_pair(eps1 - eps2, 0);
        for b in &box_elems {
            let num = t.add(&a2.mul(b));
            let Some(e) = exact_divide(&num, &a1) else {
                continue;
            };
            if !in_box(&e) {
                continue;
            }
            if b.is_zero() {
                // det M1 = a*e with e = t/q; q odd makes e = 0, det 0
                continue;
            }
            for a in &box_elems {
                candidates_checked += 1;
                if !in_box(&a1.sub(a)) {
                    continue;
                }
                // c from det M1 = a e - b c = eps1
                let det_rest = a.mul(&e).sub(&order.from_pair(eps1, 0));
                let Some(c) = exact_divide(&det_rest, b) else {
                    continue;
                };
                if !in_box(&c) || !in_box(&a2.sub(&c)) {
                    continue;
                }
                // full verification of both determinants
                let det1 = a.mul(&e).sub(&b.mul(&c));
                let m2 = [
                    a1.sub(a),
                    b.neg(),
                    a2.sub(&c),
                    e.neg(),
                ];
                let det2 = m2[0].mul(&m2[3]).sub(&m2[1].mul(&m2[2]));
                let unit1 = det1.coords().1.is_zero()
                    && (det1.coords().0 == &(&one * 2) || det1.coords().0 == &(&minus_one * 2));
                let unit2 = det2.coords().1.is_zero()
                    && (det2.coords().0 == &(&one * 2) || det2.coords().0 == &(&minus_one * 2));
                if unit1 && unit2 {
                    decompositions_found += 1;
                }
            }
        }
    }

    Ok(VamosWitness {
        d,
        ideal_norm: q,
        generators: (a1, a2),
        non_principality: why,
        height_bound,
        candidates_checked,
        decompositions_found,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hurwitz::{HurwitzQuat, HurwitzRing};
    use num::Signed;
    use crate::ring::{Integers, PrimeFieldPolys};
    use crate::rng::CounterRng;

    fn zmat(rows: Vec<Vec<i64>>) -> RingMatrix<BigInt> {
        RingMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
        .unwrap()
    }

    /// Test-only determinant by Laplace expansion (n <= 4).
    fn det_z(m: &RingMatrix<BigInt>) -> BigInt {
        fn rec(entries: &[Vec<BigInt>]) -> BigInt {
            let n = entries.len();
            if n == 1 {
                return entries[0][0].clone();
            }
            let mut acc = BigInt::zero();
            for j in 0..n {
                let minor: Vec<Vec<BigInt>> = entries[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(c, _)| *c != j)
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect();
                let term = &entries[0][j] * rec(&minor);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
        let rows: Vec<Vec<BigInt>> = (0..m.rows)
            .map(|i| (0..m.cols).map(|j| m.at(i, j).clone()).collect())
            .collect();
        rec(&rows)
    }

    #[test]
    fn en_eval_examples() {
        let z = Integers;
        // E_2(5, 1, 2)
        let m = en_eval(
            &z,
            &vec![EnGen::Elem {
                a: BigInt::from(5),
                row: 1,
                col: 2,
            }],
            2,
        )
        .unwrap();
        assert!(mat_eq(&z, &m, &zmat(vec![vec![1, 5], vec![0, 1]])));

        // empty word is the identity
        let m = en_eval(&z, &vec![], 2).unwrap();
        assert!(mat_eq(&z, &m, &mat_identity(&z, 2)));

        // the rotation word
        let word = vec![
            EnGen::Elem {
                a: BigInt::from(1),
                row: 1,
                col: 2,
            },
            EnGen::Elem {
                a: BigInt::from(-1),
                row: 2,
                col: 1,
            },
            EnGen::Elem {
                a: BigInt::from(1),
                row: 1,
                col: 2,
            },
        ];
        let m = en_eval(&z, &word, 2).unwrap();
        assert!(mat_eq(&z, &m, &zmat(vec![vec![0, 1], vec![-1, 0]])));

        // malformed generator
        assert!(en_eval(
            &z,
            &vec![EnGen::Elem {
                a: BigInt::one(),
                row: 1,
                col: 1
            }],
            2
        )
        .is_err());
    }

    #[test]
    fn word_inverse_evaluates_to_inverse() {
        let z = Integers;
        let mut rng = CounterRng::new(0xE1, 0);
        for n in 2..=4usize {
            for _ in 0..40 {
                let mut word = Vec::new();
                for _ in 0..6 {
                    match rng.next_below(3) {
                        0 => {
                            let i = 1 + rng.next_below(n as u64) as usize;
                            let mut j = 1 + rng.next_below(n as u64) as usize;
                            if i == j {
                                j = if i == n { 1 } else { i + 1 };
                            }
                            word.push(EnGen::Elem {
                                a: BigInt::from(rng.next_range_i64(-4, 4)),
                                row: i,
                                col: j,
                            });
                        }
                        1 => {
                            let mut sigma: Vec<usize> = (1..=n).collect();
                            let x = rng.next_below(n as u64) as usize;
                            let y = rng.next_below(n as u64) as usize;
                            sigma.swap(x, y);
                            word.push(EnGen::Perm(sigma));
                        }
                        _ => word.push(EnGen::NegId),
                    }
                }
                let m = en_eval(&z, &word, n).unwrap();
                let mi = en_eval(&z, &en_inverse(&z, &word), n).unwrap();
                assert!(mat_eq(&z, &mat_mul(&z, &m, &mi), &mat_identity(&z, n)));
                assert!(mat_eq(&z, &mat_mul(&z, &mi, &m), &mat_identity(&z, n)));
            }
        }
    }

    #[test]
    fn diagonal_split_frozen_examples() {
        let z = Integers;
        // diag(3, 5): [[3,1],[-1,0]] + [[0,-1],[1,5]]
        let (p, q) = diagonal_split(&z, &[BigInt::from(3), BigInt::from(5)]).unwrap();
        let pm = en_eval(&z, &p, 2).unwrap();
        let qm = en_eval(&z, &q, 2).unwrap();
        assert!(mat_eq(&z, &pm, &zmat(vec![vec![3, 1], vec![-1, 0]])));
        assert!(mat_eq(&z, &qm, &zmat(vec![vec![0, -1], vec![1, 5]])));

        // zero matrix
        let (p, q) = diagonal_split(&z, &[BigInt::zero(), BigInt::zero()]).unwrap();
        let pm = en_eval(&z, &p, 2).unwrap();
        let qm = en_eval(&z, &q, 2).unwrap();
        assert!(mat_eq(&z, &pm, &zmat(vec![vec![0, 1], vec![-1, 0]])));
        assert!(mat_eq(&z, &qm, &zmat(vec![vec![0, -1], vec![1, 0]])));

        assert!(diagonal_split(&z, &[BigInt::from(7)]).is_err());
    }

    #[test]
    fn diagonal_split_over_poly_ring_3x3() {
        let ring = PrimeFieldPolys::new(2).unwrap();
        let diag = vec![vec![1, 1], vec![0, 0, 1], vec![1]];
        let (p, q) = diagonal_split(&ring, &diag).unwrap();
        let pm = en_eval(&ring, &p, 3).unwrap();
        let qm = en_eval(&ring, &q, 3).unwrap();
        let sum = mat_add(&ring, &pm, &qm);
        let mut expect = RingMatrix {
            rows: 3,
            cols: 3,
            entries: vec![ring.zero(); 9],
        };
        for (i, d) in diag.iter().enumerate() {
            *expect.at_mut(i, i) = d.clone();
        }
        assert!(mat_eq(&ring, &sum, &expect));
        // both summands invertible
        let pinv = en_eval(&ring, &en_inverse(&ring, &p), 3).unwrap();
        assert!(mat_eq(
            &ring,
            &mat_mul(&ring, &pm, &pinv),
            &mat_identity(&ring, 3)
        ));
    }

    #[test]
    fn diagonal_split_general_sizes() {
        let z = Integers;
        let mut rng = CounterRng::new(0xD1A6, 0);
        for n in 2..=5usize {
            for _ in 0..20 {
                let diag: Vec<BigInt> =
                    (0..n).map(|_| BigInt::from(rng.next_range_i64(-9, 9))).collect();
                let (p, q) = diagonal_split(&z, &diag).unwrap();
                let pm = en_eval(&z, &p, n).unwrap();
                let qm = en_eval(&z, &q, n).unwrap();
                let sum = mat_add(&z, &pm, &qm);
                let mut expect = mat_identity(&z, n);
                for e in expect.entries.iter_mut() {
                    *e = BigInt::zero();
                }
                for (i, d) in diag.iter().enumerate() {
                    *expect.at_mut(i, i) = d.clone();
                }
                assert!(mat_eq(&z, &sum, &expect), "n = {n} diag = {diag:?}");
                assert_eq!(det_z(&pm).magnitude(), BigInt::one().magnitude());
                assert_eq!(det_z(&qm).magnitude(), BigInt::one().magnitude());
            }
        }
    }

    #[test]
    fn distinct_split_examples() {
        let z = Integers;
        let ((p1, q1), (p2, q2)) =
            distinct_split(&z, &[BigInt::from(3), BigInt::from(5)]).unwrap();
        let pm1 = en_eval(&z, &p1, 2).unwrap();
        let qm1 = en_eval(&z, &q1, 2).unwrap();
        let pm2 = en_eval(&z, &p2, 2).unwrap();
        let qm2 = en_eval(&z, &q2, 2).unwrap();
        // mirrored variant per the construction
        assert!(mat_eq(&z, &pm2, &zmat(vec![vec![3, -1], vec![1, 0]])));
        assert!(mat_eq(&z, &qm2, &zmat(vec![vec![0, 1], vec![-1, 5]])));
        let target = zmat(vec![vec![3, 0], vec![0, 5]]);
        assert!(mat_eq(&z, &mat_add(&z, &pm1, &qm1), &target));
        assert!(mat_eq(&z, &mat_add(&z, &pm2, &qm2), &target));
        assert!(!mat_eq(&z, &pm1, &pm2));
        // at least one split has distinct summands
        assert!(!mat_eq(&z, &pm1, &qm1));

        // identity matrix also splits two ways
        let ((a1, b1), (a2, b2)) =
            distinct_split(&z, &[BigInt::one(), BigInt::one()]).unwrap();
        let id = mat_identity(&z, 2);
        assert!(mat_eq(
            &z,
            &mat_add(&z, &en_eval(&z, &a1, 2).unwrap(), &en_eval(&z, &b1, 2).unwrap()),
            &id
        ));
        assert!(mat_eq(
            &z,
            &mat_add(&z, &en_eval(&z, &a2, 2).unwrap(), &en_eval(&z, &b2, 2).unwrap()),
            &id
        ));

        // characteristic 2 rejected
        let f2 = PrimeFieldPolys::new(2).unwrap();
        assert!(matches!(
            distinct_split(&f2, &[vec![1], vec![1]]),
            Err(Error::CharacteristicTwo)
        ));
    }

    #[test]
    fn diagonalize_integer_example() {
        let z = Integers;
        let a = zmat(vec![vec![2, 4], vec![6, 8]]);
        let (u, v, d) = diagonalize(&z, &a).unwrap();
        assert!(is_diagonal(&z, &d));
        let um = en_eval(&z, &u, 2).unwrap();
        let vm = en_eval(&z, &v, 2).unwrap();
        assert!(mat_eq(&z, &mat_mul(&z, &mat_mul(&z, &um, &a), &vm), &d));
        // |det| preserved: det A = -8
        assert_eq!(det_z(&d).magnitude(), det_z(&a).magnitude());
        let mut diag: Vec<BigInt> = (0..2).map(|i| d.at(i, i).abs()).collect();
        diag.sort();
        assert_eq!(diag, vec![BigInt::from(2), BigInt::from(4)]);

        // already-diagonal input unchanged with empty words
        let a = zmat(vec![vec![3, 0], vec![0, 7]]);
        let (u, v, d) = diagonalize(&z, &a).unwrap();
        assert!(u.is_empty() && v.is_empty());
        assert!(mat_eq(&z, &d, &a));
    }

    #[test]
    fn diagonalize_hurwitz_example() {
        let ring = HurwitzRing;
        let i = HurwitzQuat::from_ints(0, 1, 0, 0);
        let j = HurwitzQuat::from_ints(0, 0, 1, 0);
        let k = HurwitzQuat::from_ints(0, 0, 0, 1);
        let a = RingMatrix::from_rows(vec![
            vec![i, j],
            vec![HurwitzQuat::zero(), k],
        ])
        .unwrap();
        let (u, v, d) = diagonalize(&ring, &a).unwrap();
        assert!(is_diagonal(&ring, &d));
        let um = en_eval(&ring, &u, 2).unwrap();
        let vm = en_eval(&ring, &v, 2).unwrap();
        assert!(mat_eq(
            &ring,
            &mat_mul(&ring, &mat_mul(&ring, &um, &a), &vm),
            &d
        ));
        // norm invariant: N(d1) N(d2) = 1 here (both pivots are units)
        assert_eq!(d.at(0, 0).norm() * d.at(1, 1).norm(), 1);
    }

    #[test]
    fn two_units_decompose_examples() {
        let z = Integers;
        let a = zmat(vec![vec![1, 2], vec![3, 4]]);
        let decomp = two_units_decompose(&z, &a).unwrap();
        assert!(decomp.verify(&z).unwrap());
        let [m1, m2] = decomp.summand_matrices(&z).unwrap();
        assert_eq!(det_z(&m1).magnitude(), BigInt::one().magnitude());
        assert_eq!(det_z(&m2).magnitude(), BigInt::one().magnitude());

        let id = mat_identity(&z, 2);
        let decomp = two_units_decompose(&z, &id).unwrap();
        assert!(decomp.verify(&z).unwrap());

        let one_by_one = zmat(vec![vec![5]]);
        assert!(two_units_decompose(&z, &one_by_one).is_err());
    }

    #[test]
    fn random_matrix_suites() {
        let mut rng = CounterRng::new(0x5217E, 0);
        let z = Integers;
        for n in 2..=4usize {
            for _ in 0..20 {
                let a = RingMatrix {
                    rows: n,
                    cols: n,
                    entries: (0..n * n)
                        .map(|_| BigInt::from(rng.next_range_i64(-9, 9)))
                        .collect(),
                };
                let decomp = two_units_decompose(&z, &a).unwrap();
                assert!(decomp.verify(&z).unwrap());
            }
        }

        let f2 = PrimeFieldPolys::new(2).unwrap();
        for n in 2..=3usize {
            for _ in 0..20 {
                let a = RingMatrix {
                    rows: n,
                    cols: n,
                    entries: (0..n * n)
                        .map(|_| {
                            f2.normalize(
                                (0..=3).map(|_| rng.next_below(2)).collect::<Vec<u64>>(),
                            )
                        })
                        .collect(),
                };
                let decomp = two_units_decompose(&f2, &a).unwrap();
                assert!(decomp.verify(&f2).unwrap());
            }
        }

        let h = HurwitzRing;
        for n in 2..=3usize {
            for _ in 0..20 {
                let a = RingMatrix {
                    rows: n,
                    cols: n,
                    entries: (0..n * n)
                        .map(|_| {
                            let half = rng.next_below(2) == 1;
                            let off = if half { 1 } else { 0 };
                            HurwitzQuat::from_doubled(
                                2 * rng.next_range_i64(-3, 3) as i128 + off,
                                2 * rng.next_range_i64(-3, 3) as i128 + off,
                                2 * rng.next_range_i64(-3, 3) as i128 + off,
                                2 * rng.next_range_i64(-3, 3) as i128 + off,
                            )
                            .unwrap()
                        })
                        .collect(),
                };
                let decomp = two_units_decompose(&h, &a).unwrap();
                assert!(decomp.verify(&h).unwrap());
            }
        }
    }

    #[test]
    fn equivalence_transfer_roundtrip() {
        let z = Integers;
        let a = zmat(vec![vec![3, 0], vec![0, 5]]);
        let decomp = two_units_decompose(&z, &a).unwrap();

        // U = E(1,1,2), V = I
        let u = en_eval(
            &z,
            &vec![EnGen::Elem {
                a: BigInt::one(),
                row: 1,
                col: 2,
            }],
            2,
        )
        .unwrap();
        let v = mat_identity(&z, 2);
        let moved = equivalence_transfer(&z, &decomp, &u, &v).unwrap();
        assert!(moved.verify(&z).unwrap());
        assert!(mat_eq(&z, &moved.target, &mat_mul(&z, &u, &a)));

        // transfer back with the inverses returns the original target
        let u_inv = mat_inverse(&z, &u).unwrap();
        let back = equivalence_transfer(&z, &moved, &u_inv, &v).unwrap();
        assert!(back.verify(&z).unwrap());
        assert!(mat_eq(&z, &back.target, &a));

        // identity transfer keeps everything
        let same = equivalence_transfer(&z, &decomp, &mat_identity(&z, 2), &mat_identity(&z, 2))
            .unwrap();
        assert!(mat_eq(&z, &same.target, &a));

        // -I negates the target
        let neg = en_eval(&z, &vec![EnGen::NegId], 2).unwrap();
        let flipped = equivalence_transfer(&z, &decomp, &neg, &mat_identity(&z, 2)).unwrap();
        let mut neg_a = a.clone();
        for e in neg_a.entries.iter_mut() {
            *e = -(e.clone());
        }
        assert!(mat_eq(&z, &flipped.target, &neg_a));

        // non-invertible transfer rejected
        let sing = zmat(vec![vec![2, 0], vec![0, 1]]);
        assert!(equivalence_transfer(&z, &decomp, &sing, &v).is_err());
    }

    #[test]
    fn vamos_witness_d5() {
        let w = vamos_witness(5, 4).unwrap();
        assert_eq!(w.ideal_norm, 3);
        assert_eq!(w.decompositions_found, 0);
        assert!(w.candidates_checked > 0);
    }

    #[test]
    fn vamos_witness_rejects_class_number_one() {
        assert!(matches!(vamos_witness(1, 5), Err(Error::ClassNumberOne)));
        assert!(matches!(vamos_witness(2, 5), Err(Error::ClassNumberOne)));
        assert!(matches!(vamos_witness(163, 5), Err(Error::ClassNumberOne)));
    }

    #[test]
    fn vamos_witness_d6() {
        let w = vamos_witness(6, 3).unwrap();
        assert_eq!(w.decompositions_found, 0);
        // d = 6: 3 ramifies and a^2 + 6 b^2 = 3 has no solution
        assert_eq!(w.ideal_norm, 3);
    }

    #[test]
    fn naive_first_column_matrix_with_even_prime_is_two_good() {
        // why the witness skips q = 2: [[2,0],[1+sqrt(-5),0]] = I + M with
        // M = [[1,0],[1+sqrt(-5),-1]] of determinant -1
        let o = QuadraticOrder::new(-5).unwrap();
        let g = o.from_pair(1, 1); // 1 + sqrt(-5)
        let m = [
            [o.one(), o.zero()],
            [g.clone(), o.one().neg()],
        ];
        let det = m[0][0].mul(&m[1][1]).sub(&m[0][1].mul(&m[1][0]));
        assert!(det.is_unit());
        let id = [[o.one(), o.zero()], [o.zero(), o.one()]];
        let sum = [
            [id[0][0].add(&m[0][0]), id[0][1].add(&m[0][1])],
            [id[1][0].add(&m[1][0]), id[1][1].add(&m[1][1])],
        ];
        assert_eq!(sum[0][0], o.from_pair(2, 0));
        assert_eq!(sum[0][1], o.zero());
        assert_eq!(sum[1][0], g);
        assert_eq!(sum[1][1], o.zero());
    }
}
