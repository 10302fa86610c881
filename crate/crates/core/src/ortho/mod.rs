//! Integer isometries of a quadratic lattice: pseudo-reflections, the
//! spinorial norm, reflection words, the prime-power criterion for
//! `Ref = O⁺`, brute-force enumeration, and the action on period points.
//!
//! Matrices act on column vectors, `x ↦ A x`; `A` is an isometry iff
//! `AᵀGA = G`.

use alloc::string::ToString;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::QuadLattice;
use crate::linalg::{det_bigint, rref};
use crate::period::{same_lattice, PeriodPoint};
use crate::scalars::{AlgebraicScalar, AlgebraicVector};

pub type IntMatrix = Vec<Vec<BigInt>>;

/// An integer isometry with its determinant and spinorial norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isometry {
    lattice: Arc<QuadLattice>,
    matrix: IntMatrix,
    det: i32,
    spin: i32,
}

fn check_square(l: &QuadLattice, a: &[Vec<BigInt>]) -> Result<()> {
    let n = l.rank();
    if a.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: a.len() });
    }
    if let Some(r) = a.iter().find(|r| r.len() != n) {
        return Err(Error::DimensionMismatch { expected: n, found: r.len() });
    }
    Ok(())
}

fn column(a: &[Vec<BigInt>], j: usize) -> Vec<BigInt> {
    a.iter().map(|r| r[j].clone()).collect()
}

fn mat_vec(a: &[Vec<BigInt>], x: &[BigInt]) -> Vec<BigInt> {
    a.iter().map(|r| r.iter().zip(x).filter(|(p, q)| !p.is_zero() && !q.is_zero()).map(|(p, q)| p * q).sum()).collect()
}

fn mat_mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> IntMatrix {
    let n = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|r| {
            (0..n)
                .map(|j| r.iter().zip(b).filter(|(p, _)| !p.is_zero()).map(|(p, row)| p * &row[j]).sum())
                .collect()
        })
        .collect()
}

fn identity_matrix(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect()
}

/// Exact test `AᵀGA = G`.
pub fn is_isometry(l: &QuadLattice, a: &[Vec<BigInt>]) -> Result<bool> {
    check_square(l, a)?;
    let n = l.rank();
    let cols: Vec<Vec<BigInt>> = (0..n).map(|j| column(a, j)).collect();
    for i in 0..n {
        for j in i..n {
            if l.eval_int(&cols[i], &cols[j]) != BigInt::from(l.gram()[i][j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Sign of `det [q(pᵢ, A pⱼ)]` over the stored positive basis `P₀`. The
/// Gram matrix of `P₀` is positive diagonal, so this is the sign of the
/// determinant of `A` followed by orthogonal projection onto `P₀`.
fn spin_sign(l: &QuadLattice, a: &[Vec<BigInt>]) -> i32 {
    let p = l.positive_basis();
    let images: Vec<Vec<BigInt>> = p.iter().map(|v| mat_vec(a, v)).collect();
    let m: IntMatrix = p.iter().map(|pi| images.iter().map(|apj| l.eval_int(pi, apj)).collect()).collect();
    let d = det_bigint(&m);
    assert!(!d.is_zero(), "projection of an isometry onto a maximal positive subspace is invertible");
    if d.is_positive() {
        1
    } else {
        -1
    }
}

impl Isometry {
    pub fn new(lattice: &Arc<QuadLattice>, matrix: IntMatrix) -> Result<Self> {
        if !is_isometry(lattice, &matrix)? {
            return Err(Error::NotIsometry);
        }
        Ok(Self::trusted(lattice, matrix))
    }

    fn trusted(lattice: &Arc<QuadLattice>, matrix: IntMatrix) -> Self {
        let d = det_bigint(&matrix);
        let det = if d.is_one() { 1 } else { -1 };
        let spin = spin_sign(lattice, &matrix);
        Isometry { lattice: lattice.clone(), matrix, det, spin }
    }

    pub fn identity(lattice: &Arc<QuadLattice>) -> Self {
        Self::trusted(lattice, identity_matrix(lattice.rank()))
    }

    pub fn minus_identity(lattice: &Arc<QuadLattice>) -> Self {
        let m = identity_matrix(lattice.rank()).into_iter().map(|r| r.into_iter().map(|x| -x).collect()).collect();
        Self::trusted(lattice, m)
    }

    pub fn lattice(&self) -> &Arc<QuadLattice> {
        &self.lattice
    }

    pub fn matrix(&self) -> &[Vec<BigInt>] {
        &self.matrix
    }

    pub fn det(&self) -> i32 {
        self.det
    }

    pub fn spinorial_norm(&self) -> i32 {
        self.spin
    }

    pub fn is_plus(&self) -> bool {
        self.spin == 1
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == identity_matrix(self.lattice.rank())
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &Isometry) -> Result<Isometry> {
        if !same_lattice(&self.lattice, &other.lattice) {
            return Err(Error::LatticeMismatch);
        }
        Ok(Self::trusted(&self.lattice, mat_mul(&self.matrix, &other.matrix)))
    }

    pub fn inverse(&self) -> Isometry {
        let n = self.lattice.rank();
        let rows: Vec<Vec<BigRational>> = (0..n)
            .map(|i| {
                let mut r: Vec<BigRational> = self.matrix[i].iter().map(|x| BigRational::from_integer(x.clone())).collect();
                r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
                r
            })
            .collect();
        let (red, _) = rref(rows, 2 * n);
        let inv = red.iter().map(|r| r[n..].iter().map(|x| x.to_integer()).collect()).collect();
        Self::trusted(&self.lattice, inv)
    }

    /// `A` on the first summand and `B` on the second of `L₁ ⊕ L₂`.
    pub fn block_diagonal(&self, other: &Isometry) -> Isometry {
        let sum = Arc::new(self.lattice.direct_sum(&other.lattice));
        let (n1, n2) = (self.lattice.rank(), other.lattice.rank());
        let mut m = vec![vec![BigInt::zero(); n1 + n2]; n1 + n2];
        for i in 0..n1 {
            m[i][..n1].clone_from_slice(&self.matrix[i]);
        }
        for i in 0..n2 {
            m[n1 + i][n1..].clone_from_slice(&other.matrix[i]);
        }
        Self::trusted(&sum, m)
    }

    /// `A x` for an algebraic vector.
    pub fn apply(&self, x: &AlgebraicVector) -> Result<AlgebraicVector> {
        let n = self.lattice.rank();
        if x.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: x.len() });
        }
        Ok(AlgebraicVector::new(
            self.matrix
                .iter()
                .map(|r| {
                    let mut acc = AlgebraicScalar::zero_in(x.field());
                    for (a, xj) in r.iter().zip(x.entries()) {
                        if !a.is_zero() && !xj.is_zero() {
                            acc += &xj.scale(&BigRational::from_integer(a.clone()));
                        }
                    }
                    acc
                })
                .collect(),
        ))
    }
}

/// `ρ_v(x) = (−2 / q(v, v))·x + q(x, v)·v` for `q(v, v) = ±2`, taken
/// verbatim: for norm `+2` it fixes `v` and negates `v⊥`, for norm `−2` it
/// is the reflection in `v⊥`.
pub fn pseudo_reflection(l: &Arc<QuadLattice>, v: &[BigInt]) -> Result<Isometry> {
    let n = l.rank();
    if v.len() != n {
        return Err(Error::DimensionMismatch { expected: n, found: v.len() });
    }
    let norm = l.eval_int(v, v);
    let scale = if norm == BigInt::from(2) {
        BigInt::from(-1)
    } else if norm == BigInt::from(-2) {
        BigInt::one()
    } else {
        return Err(Error::BadReflectionNorm(norm.to_string()));
    };
    let gv: Vec<BigInt> = l.gram().iter().map(|r| r.iter().zip(v).map(|(g, x)| x * g).sum()).collect();
    // column j is ρ(eⱼ) = scale·eⱼ + q(eⱼ, v)·v
    let m: IntMatrix = (0..n)
        .map(|i| (0..n).map(|j| (if i == j { scale.clone() } else { BigInt::zero() }) + &v[i] * &gv[j]).collect())
        .collect();
    assert!(is_isometry(l, &m)?, "pseudo-reflection must preserve q");
    assert!(mat_mul(&m, &m) == identity_matrix(n), "pseudo-reflection must be an involution");
    Ok(Isometry::trusted(l, m))
}

/// A product of pseudo-reflections `ρ_{v₁} ρ_{v₂} ⋯ ρ_{vₖ}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReflectionWord {
    factors: Vec<Vec<BigInt>>,
}

impl ReflectionWord {
    pub fn new(l: &QuadLattice, factors: Vec<Vec<BigInt>>) -> Result<Self> {
        for v in &factors {
            if v.len() != l.rank() {
                return Err(Error::DimensionMismatch { expected: l.rank(), found: v.len() });
            }
            let q = l.eval_int(v, v);
            if q != BigInt::from(2) && q != BigInt::from(-2) {
                return Err(Error::BadReflectionNorm(q.to_string()));
            }
        }
        Ok(ReflectionWord { factors })
    }

    pub fn factors(&self) -> &[Vec<BigInt>] {
        &self.factors
    }
}

/// Evaluates a word left to right; the empty word is the identity.
pub fn apply_word(l: &Arc<QuadLattice>, w: &ReflectionWord) -> Result<Isometry> {
    let mut m = identity_matrix(l.rank());
    for v in &w.factors {
        let r = pseudo_reflection(l, v)?;
        m = mat_mul(&m, &r.matrix);
    }
    Ok(Isometry::trusted(l, m))
}

fn is_prime_power(m: u64) -> bool {
    if m < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut r = m;
            while r % p == 0 {
                r /= p;
            }
            return r == 1;
        }
        p += 1;
    }
    true
}

/// Whether `Ref = O⁺` for `K3^[n]`-type lattices: `n − 1` a prime power.
/// `n = 2` returns `true` by convention (`1` is not `pᵏ` with `k ≥ 1`).
pub fn ref_equals_oplus(n: u64) -> Result<bool> {
    match n {
        0 | 1 => Err(Error::InvalidDimension),
        2 => Ok(true),
        _ => Ok(is_prime_power(n - 1)),
    }
}

/// Default rank bound of [`search_isometries`].
pub const SEARCH_RANK_BOUND: usize = 4;

/// Brute-force enumeration split by first column, so callers may process
/// the branches independently and concatenate results in index order.
#[derive(Debug, Clone)]
pub struct IsometrySearch {
    lattice: Arc<QuadLattice>,
    candidates: Vec<Vec<Vec<BigInt>>>,
}

impl IsometrySearch {
    pub fn new(l: &Arc<QuadLattice>, height: i64, rank_bound: usize) -> Result<Self> {
        let n = l.rank();
        if n > rank_bound {
            return Err(Error::RankBound { rank: n, bound: rank_bound });
        }
        if height < 1 {
            return Err(Error::InvalidParameter("height must be at least 1".into()));
        }
        let width = (2 * height + 1) as u64;
        let total = width.checked_pow(n as u32).ok_or(Error::InvalidParameter("height too large".into()))?;
        let mut by_norm: Vec<Vec<Vec<BigInt>>> = vec![Vec::new(); n];
        for idx in 0..total {
            let mut rest = idx;
            let mut x = vec![BigInt::zero(); n];
            for k in (0..n).rev() {
                x[k] = BigInt::from((rest % width) as i64 - height);
                rest /= width;
            }
            let q = l.eval_int(&x, &x);
            for (j, bucket) in by_norm.iter_mut().enumerate() {
                if q == BigInt::from(l.gram()[j][j]) {
                    bucket.push(x.clone());
                }
            }
        }
        Ok(IsometrySearch { lattice: l.clone(), candidates: by_norm })
    }

    /// Number of first-column branches.
    pub fn branches(&self) -> usize {
        self.candidates.first().map_or(0, Vec::len)
    }

    /// All isometries whose first column is branch `i`, in deterministic order.
    pub fn branch(&self, i: usize) -> Vec<Isometry> {
        let n = self.lattice.rank();
        let mut out = Vec::new();
        let mut cols: Vec<&Vec<BigInt>> = vec![&self.candidates[0][i]];
        self.extend(&mut cols, n, &mut out);
        out
    }

    fn extend<'a>(&'a self, cols: &mut Vec<&'a Vec<BigInt>>, n: usize, out: &mut Vec<Isometry>) {
        let j = cols.len();
        if j == n {
            let m: IntMatrix = (0..n).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect();
            if det_bigint(&m).abs().is_one() {
                out.push(Isometry::trusted(&self.lattice, m));
            }
            return;
        }
        let g = self.lattice.gram();
        for c in &self.candidates[j] {
            if cols.iter().enumerate().all(|(i, prev)| self.lattice.eval_int(prev, c) == BigInt::from(g[i][j])) {
                cols.push(c);
                self.extend(cols, n, out);
                cols.pop();
            }
        }
    }
}

/// All integer isometries with entries in `[−height, height]`, rank at most
/// [`SEARCH_RANK_BOUND`].
pub fn search_isometries(l: &Arc<QuadLattice>, height: i64) -> Result<Vec<Isometry>> {
    let s = IsometrySearch::new(l, height, SEARCH_RANK_BOUND)?;
    Ok((0..s.branches()).flat_map(|i| s.branch(i)).collect())
}

/// `⟨A v₁, A v₂⟩` with the transported orientation.
pub fn act_on_period(a: &Isometry, v: &PeriodPoint) -> Result<PeriodPoint> {
    if !same_lattice(a.lattice(), v.lattice()) {
        return Err(Error::LatticeMismatch);
    }
    PeriodPoint::new(v.lattice(), a.apply(&v.span()[0])?, a.apply(&v.span()[1])?)
}

/// Parity helper used by callers checking `ν(−Id) = (−1)^m`.
pub fn expected_minus_identity_norm(l: &QuadLattice) -> i32 {
    if l.signature().0.is_odd() {
        -1
    } else {
        1
    }
}
