//! Integer quadratic lattices carrying the Bogomolov–Beauville–Fujiki form.

mod catalog;

pub use catalog::{catalog_lookup, e8_negative, hyperbolic_plane, parse_catalog_ref, CATALOG_KEYS};

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::linalg::det_bigint;
use crate::scalars::{AlgebraicScalar, AlgebraicVector};

/// A non-degenerate symmetric integer Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadLattice {
    name: Option<String>,
    gram: Vec<Vec<i64>>,
    signature: (usize, usize),
    /// Rows `bᵢ` with `q(bᵢ, bⱼ) = 0` for `i ≠ j`, integer and primitive.
    diag_basis: Vec<Vec<BigInt>>,
    diag: Vec<BigInt>,
}

/// Constant and exponent in `∫ η^{2n} = c · q(η, η)^n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FujikiData {
    pub c: BigRational,
    pub n: u32,
}

impl FujikiData {
    pub fn new(c: BigRational, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("Fujiki exponent n must be >= 1".into()));
        }
        Ok(FujikiData { c, n })
    }
}

impl QuadLattice {
    pub fn new(name: Option<String>, gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::NotSquare);
        }
        for i in 0..n {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::NotSymmetric);
                }
            }
        }
        let (diag_basis, diag) = diagonalize(&gram)?;
        let p = diag.iter().filter(|d| d.is_positive()).count();
        Ok(QuadLattice { name, gram, signature: (p, n - p), diag_basis, diag })
    }

    pub fn diagonal(name: Option<String>, entries: &[i64]) -> Result<Self> {
        let n = entries.len();
        let gram = (0..n).map(|i| (0..n).map(|j| if i == j { entries[i] } else { 0 }).collect()).collect();
        Self::new(name, gram)
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// `(positive, negative)` inertia.
    pub fn signature(&self) -> (usize, usize) {
        self.signature
    }

    /// Even lattices have even diagonal entries.
    pub fn is_even(&self) -> bool {
        self.gram.iter().enumerate().all(|(i, r)| r[i] % 2 == 0)
    }

    pub fn determinant(&self) -> BigInt {
        let m: Vec<Vec<BigInt>> = self.gram.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        det_bigint(&m)
    }

    /// Integer basis of a maximal positive subspace, taken from the stored
    /// orthogonal basis in order. Pairwise `q`-orthogonal.
    pub fn positive_basis(&self) -> Vec<&[BigInt]> {
        self.diag_basis.iter().zip(&self.diag).filter(|(_, d)| d.is_positive()).map(|(b, _)| b.as_slice()).collect()
    }

    /// The stored `q`-orthogonal basis and its norms.
    pub fn orthogonal_basis(&self) -> (&[Vec<BigInt>], &[BigInt]) {
        (&self.diag_basis, &self.diag)
    }

    fn check_len(&self, v: &AlgebraicVector) -> Result<()> {
        if v.len() != self.rank() {
            return Err(Error::DimensionMismatch { expected: self.rank(), found: v.len() });
        }
        Ok(())
    }

    /// `G · y`.
    pub fn apply_gram(&self, y: &AlgebraicVector) -> Result<AlgebraicVector> {
        self.check_len(y)?;
        let out = self
            .gram
            .iter()
            .map(|row| {
                let mut acc = AlgebraicScalar::zero_in(y.field());
                for (g, yj) in row.iter().zip(y.entries()) {
                    if *g != 0 && !yj.is_zero() {
                        acc += &yj.scale_int(*g);
                    }
                }
                acc
            })
            .collect();
        Ok(AlgebraicVector::new(out))
    }

    /// `q(x, y) = xᵀ G y`, exact.
    pub fn gram_eval(&self, x: &AlgebraicVector, y: &AlgebraicVector) -> Result<AlgebraicScalar> {
        self.check_len(x)?;
        let gy = self.apply_gram(y)?;
        let mut acc = AlgebraicScalar::zero_in(&x.field().join(gy.field()));
        for (a, b) in x.entries().iter().zip(gy.entries()) {
            if !a.is_zero() && !b.is_zero() {
                acc += &(a * b);
            }
        }
        Ok(acc)
    }

    pub fn norm(&self, x: &AlgebraicVector) -> Result<AlgebraicScalar> {
        self.gram_eval(x, x)
    }

    pub fn eval_int(&self, x: &[BigInt], y: &[BigInt]) -> BigInt {
        let mut acc = BigInt::zero();
        for (i, row) in self.gram.iter().enumerate() {
            if x[i].is_zero() {
                continue;
            }
            let mut s = BigInt::zero();
            for (g, yj) in row.iter().zip(y) {
                if *g != 0 {
                    s += yj * g;
                }
            }
            acc += &x[i] * s;
        }
        acc
    }

    pub fn direct_sum(&self, other: &QuadLattice) -> QuadLattice {
        let (n1, n2) = (self.rank(), other.rank());
        let mut gram = vec![vec![0i64; n1 + n2]; n1 + n2];
        for i in 0..n1 {
            gram[i][..n1].copy_from_slice(&self.gram[i]);
        }
        for i in 0..n2 {
            gram[n1 + i][n1..].copy_from_slice(&other.gram[i]);
        }
        let name = match (&self.name, &other.name) {
            (Some(a), Some(b)) => Some(alloc::format!("{a}+{b}")),
            _ => None,
        };
        QuadLattice::new(name, gram).expect("direct sum of non-degenerate lattices is non-degenerate")
    }
}

/// Exact inertia of a symmetric integer matrix.
pub fn signature(gram: &[Vec<i64>]) -> Result<(usize, usize)> {
    let (_, d) = diagonalize(gram)?;
    let p = d.iter().filter(|x| x.is_positive()).count();
    Ok((p, d.len() - p))
}

pub fn direct_sum(a: &QuadLattice, b: &QuadLattice) -> QuadLattice {
    a.direct_sum(b)
}

pub fn gram_eval(l: &QuadLattice, x: &AlgebraicVector, y: &AlgebraicVector) -> Result<AlgebraicScalar> {
    l.gram_eval(x, y)
}

/// `c · q(η, η)^n`.
pub fn fujiki_value(l: &QuadLattice, eta: &AlgebraicVector, f: &FujikiData) -> Result<AlgebraicScalar> {
    let q = l.norm(eta)?;
    Ok(q.pow(f.n).scale(&f.c))
}

/// Fraction-free congruence diagonalization.
///
/// Returns integer primitive rows `bᵢ` and `dᵢ = q(bᵢ, bᵢ)` with
/// `q(bᵢ, bⱼ) = 0` for `i ≠ j`. Fails on a degenerate form.
pub fn diagonalize(gram: &[Vec<i64>]) -> Result<(Vec<Vec<BigInt>>, Vec<BigInt>)> {
    let n = gram.len();
    if gram.iter().any(|r| r.len() != n) {
        return Err(Error::NotSquare);
    }
    let form = |x: &[BigInt], y: &[BigInt]| -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if gram[i][j] != 0 && !y[j].is_zero() {
                    acc += &x[i] * &y[j] * gram[i][j];
                }
            }
        }
        acc
    };
    let mut rest: Vec<Vec<BigInt>> =
        (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    let mut basis = Vec::with_capacity(n);
    let mut diag = Vec::with_capacity(n);
    while !rest.is_empty() {
        let pick = match rest.iter().position(|v| !form(v, v).is_zero()) {
            Some(i) => i,
            None => {
                // all remaining vectors isotropic: use v + w with q(v, w) != 0
                let mut found = None;
                'outer: for i in 0..rest.len() {
                    for j in i + 1..rest.len() {
                        if !form(&rest[i], &rest[j]).is_zero() {
                            found = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                let (i, j) = found.ok_or(Error::Degenerate)?;
                let sum: Vec<BigInt> = rest[i].iter().zip(&rest[j]).map(|(a, b)| a + b).collect();
                rest[i] = sum;
                i
            }
        };
        let p = rest.remove(pick);
        let d = form(&p, &p);
        for w in rest.iter_mut() {
            let c = form(w, &p);
            if c.is_zero() {
                continue;
            }
            let next: Vec<BigInt> = w.iter().zip(&p).map(|(a, b)| &d * a - &c * b).collect();
            let g = next.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            *w = next.into_iter().map(|x| x / &g).collect();
        }
        basis.push(p);
        diag.push(d);
    }
    Ok((basis, diag))
}
