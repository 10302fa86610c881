//! Small exact helpers for subspaces spanned by a handful of field vectors.
//!
//! All positive-definite subspaces here have dimension at most 3, so minors
//! and adjugates are computed by cofactor expansion and stay division-free.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::lattice::QuadLattice;
use crate::linalg::det_scalar;
use crate::scalars::{AlgebraicScalar, AlgebraicVector};

pub fn gram_matrix(l: &QuadLattice, vs: &[&AlgebraicVector]) -> Result<Vec<Vec<AlgebraicScalar>>> {
    let n = vs.len();
    let mut g: Vec<Vec<AlgebraicScalar>> = (0..n).map(|_| (0..n).map(|_| AlgebraicScalar::zero()).collect()).collect();
    for i in 0..n {
        for j in i..n {
            let v = l.gram_eval(vs[i], vs[j])?;
            g[j][i] = v.clone();
            g[i][j] = v;
        }
    }
    Ok(g)
}

/// Sylvester's criterion with exact signs of the leading minors.
pub fn is_positive_definite(g: &[Vec<AlgebraicScalar>]) -> bool {
    (1..=g.len()).all(|k| {
        let minor: Vec<Vec<AlgebraicScalar>> = g[..k].iter().map(|r| r[..k].to_vec()).collect();
        det_scalar(&minor).signum() > 0
    })
}

pub fn check_positive(l: &QuadLattice, vs: &[&AlgebraicVector]) -> Result<Vec<Vec<AlgebraicScalar>>> {
    for v in vs {
        if v.len() != l.rank() {
            return Err(Error::DimensionMismatch { expected: l.rank(), found: v.len() });
        }
    }
    let g = gram_matrix(l, vs)?;
    if !is_positive_definite(&g) {
        return Err(Error::NotPositive);
    }
    Ok(g)
}

/// Adjugate of a square matrix of size ≤ 3.
pub fn adjugate(g: &[Vec<AlgebraicScalar>]) -> Vec<Vec<AlgebraicScalar>> {
    let n = g.len();
    if n == 1 {
        return alloc::vec![alloc::vec![AlgebraicScalar::one()]];
    }
    let mut adj: Vec<Vec<AlgebraicScalar>> = (0..n).map(|_| (0..n).map(|_| AlgebraicScalar::zero()).collect()).collect();
    for i in 0..n {
        for j in 0..n {
            let minor: Vec<Vec<AlgebraicScalar>> = g
                .iter()
                .enumerate()
                .filter(|(r, _)| *r != i)
                .map(|(_, row)| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, x)| x.clone()).collect())
                .collect();
            let d = det_scalar(&minor);
            // adj = cofactorᵀ
            adj[j][i] = if (i + j) % 2 == 0 { d } else { -d };
        }
    }
    adj
}

/// `det(G)·v − Σ adj(G)ᵢⱼ q(v, bⱼ) bᵢ`: a positive multiple of the
/// `q`-orthogonal projection of `v` onto `span(basis)⊥`.
pub fn reject_from(l: &QuadLattice, basis: &[&AlgebraicVector], gram: &[Vec<AlgebraicScalar>], v: &AlgebraicVector) -> Result<AlgebraicVector> {
    let det = det_scalar(gram);
    let adj = adjugate(gram);
    let qs: Vec<AlgebraicScalar> = basis.iter().map(|b| l.gram_eval(v, b)).collect::<Result<_>>()?;
    let mut coeffs = Vec::with_capacity(basis.len());
    for row in &adj {
        let mut c = AlgebraicScalar::zero();
        for (a, qv) in row.iter().zip(&qs) {
            if !a.is_zero() && !qv.is_zero() {
                c += &(a * qv);
            }
        }
        coeffs.push(-c);
    }
    let mut out = v.scale(&det);
    out = &out + &AlgebraicVector::combination(&coeffs, basis);
    Ok(out)
}

/// Exact membership of `v` in the span of a positive-definite basis.
pub fn in_span(l: &QuadLattice, basis: &[&AlgebraicVector], gram: &[Vec<AlgebraicScalar>], v: &AlgebraicVector) -> Result<bool> {
    Ok(reject_from(l, basis, gram, v)?.is_zero())
}

/// Sign of the change of basis between two bases of one positive-definite
/// subspace: `sign det [q(aᵢ, bⱼ)]`.
pub fn orientation_sign(l: &QuadLattice, a: &[&AlgebraicVector], b: &[&AlgebraicVector]) -> Result<i32> {
    let m: Vec<Vec<AlgebraicScalar>> =
        a.iter().map(|x| b.iter().map(|y| l.gram_eval(x, y)).collect::<Result<Vec<_>>>()).collect::<Result<_>>()?;
    Ok(det_scalar(&m).signum())
}

pub fn cross(r1: &[AlgebraicScalar; 3], r2: &[AlgebraicScalar; 3]) -> [AlgebraicScalar; 3] {
    [
        &r1[1] * &r2[2] - &r1[2] * &r2[1],
        &r1[2] * &r2[0] - &r1[0] * &r2[2],
        &r1[0] * &r2[1] - &r1[1] * &r2[0],
    ]
}

/// Rank of a list of field vectors via 2×2 / 3×3 minors (at most 3 vectors).
pub fn small_rank(vs: &[&AlgebraicVector]) -> usize {
    let n = vs.first().map_or(0, |v| v.len());
    let k = vs.len();
    if k == 0 {
        return 0;
    }
    let nonzero = vs.iter().filter(|v| !v.is_zero()).count();
    if nonzero == 0 {
        return 0;
    }
    let cols: Vec<usize> = (0..n).collect();
    let minor_nonzero = |size: usize| -> bool {
        for rows in subsets(k, size) {
            for cs in subsets(cols.len(), size) {
                let m: Vec<Vec<AlgebraicScalar>> =
                    rows.iter().map(|&r| cs.iter().map(|&c| vs[r][c].clone()).collect()).collect();
                if !det_scalar(&m).is_zero() {
                    return true;
                }
            }
        }
        false
    };
    let mut r = 1;
    for size in 2..=k.min(3) {
        if minor_nonzero(size) {
            r = size;
        } else {
            break;
        }
    }
    r
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
