//! Exact linear algebra over `Q` and `Z` used by the lattice and kernel code.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::scalars::AlgebraicScalar;

/// Reduced row echelon form. Returns the nonzero rows and their pivot columns.
pub fn rref(mut rows: Vec<Vec<BigRational>>, ncols: usize) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

pub fn rank(rows: Vec<Vec<BigRational>>, ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : rows · x = 0}` read off the reduced echelon form, one vector
/// per free column (unit coordinate there).
pub fn nullspace(rows: Vec<Vec<BigRational>>, ncols: usize) -> Vec<Vec<BigRational>> {
    let (red, pivots) = rref(rows, ncols);
    let mut out = Vec::new();
    for f in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![BigRational::zero(); ncols];
        v[f] = BigRational::one();
        for (row, &p) in red.iter().zip(&pivots) {
            v[p] = -row[f].clone();
        }
        out.push(v);
    }
    out
}

pub fn det_rational(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut det = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m[i][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= &m[c][c];
        let inv = m[c][c].recip();
        for i in c + 1..n {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for j in c..n {
                let t = &f * &m[c][j];
                m[i][j] -= t;
            }
        }
    }
    det
}

pub fn det_bigint(m: &[Vec<BigInt>]) -> BigInt {
    let q = m.iter().map(|r| r.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    det_rational(q).to_integer()
}

/// Determinant of a small square matrix over a multi-quadratic field by
/// cofactor expansion (sizes up to 3 in practice).
pub fn det_scalar(m: &[Vec<AlgebraicScalar>]) -> AlgebraicScalar {
    match m.len() {
        0 => AlgebraicScalar::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        n => {
            let mut acc = AlgebraicScalar::zero();
            for j in 0..n {
                if m[0][j].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<AlgebraicScalar>> = m[1..]
                    .iter()
                    .map(|row| row.iter().enumerate().filter(|(k, _)| *k != j).map(|(_, x)| x.clone()).collect())
                    .collect();
                let t = &m[0][j] * &det_scalar(&minor);
                if j % 2 == 0 {
                    acc += &t;
                } else {
                    acc -= &t;
                }
            }
            acc
        }
    }
}

/// Clears denominators and divides by the content, keeping the direction.
pub fn primitive_part(v: &[BigRational]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// A `Z`-basis of `{x ∈ Z^ncols : rows · x = 0}`.
///
/// Works on the transposed system with unimodular row operations, so the
/// returned basis spans the full (saturated) integer kernel.
pub fn integer_kernel(rows: &[Vec<BigInt>], ncols: usize) -> Vec<Vec<BigInt>> {
    let m = rows.len();
    // a[j] = [column j of rows | e_j]
    let mut a: Vec<Vec<BigInt>> = (0..ncols)
        .map(|j| {
            let mut r: Vec<BigInt> = rows.iter().map(|row| row[j].clone()).collect();
            r.extend((0..ncols).map(|k| if k == j { BigInt::one() } else { BigInt::zero() }));
            r
        })
        .collect();
    let mut pr = 0;
    for c in 0..m {
        if pr == ncols {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pr..ncols {
                if a[i][c].is_zero() {
                    continue;
                }
                if best.map_or(true, |b| a[i][c].abs() < a[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            a.swap(pr, b);
            let mut done = true;
            for i in pr + 1..ncols {
                if a[i][c].is_zero() {
                    continue;
                }
                let f = a[i][c].div_floor(&a[pr][c]);
                let (head, tail) = a.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[pr]) {
                    *x -= &f * y;
                }
                if !a[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                pr += 1;
                break;
            }
        }
    }
    a.into_iter().skip(pr).map(|r| r[m..].to_vec()).collect()
}

/// Row-style Hermite normal form of the lattice spanned by `basis`
/// (positive pivots, entries above each pivot reduced into `[0, pivot)`).
pub fn hermite_rows(mut basis: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let Some(ncols) = basis.first().map(Vec::len) else {
        return basis;
    };
    let mut pr = 0;
    for c in 0..ncols {
        if pr == basis.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for i in pr..basis.len() {
                if !basis[i][c].is_zero() && best.map_or(true, |b| basis[i][c].abs() < basis[b][c].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            basis.swap(pr, b);
            let mut done = true;
            for i in pr + 1..basis.len() {
                if basis[i][c].is_zero() {
                    continue;
                }
                let f = basis[i][c].div_floor(&basis[pr][c]);
                let (head, tail) = basis.split_at_mut(i);
                for (x, y) in tail[0].iter_mut().zip(&head[pr]) {
                    *x -= &f * y;
                }
                if !basis[i][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if pr < basis.len() && !basis[pr][c].is_zero() {
            if basis[pr][c].is_negative() {
                for x in basis[pr].iter_mut() {
                    *x = -&*x;
                }
            }
            for i in 0..pr {
                let f = basis[i][c].div_floor(&basis[pr][c]);
                if f.is_zero() {
                    continue;
                }
                let (head, tail) = basis.split_at_mut(pr);
                for (x, y) in head[i].iter_mut().zip(&tail[0]) {
                    *x -= &f * y;
                }
            }
            pr += 1;
        }
    }
    basis.truncate(pr);
    basis
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    fn zi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn nullspace_of_hyperplane() {
        let ns = nullspace(vec![vec![q(1), q(1)]], 2);
        assert_eq!(ns, vec![vec![q(-1), q(1)]]);
        assert_eq!(nullspace(Vec::new(), 2).len(), 2);
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // x + y + 2z = 0 has kernel basis of index 1 in Z^3 ∩ kernel
        let k = integer_kernel(&[zi(&[1, 1, 2])], 3);
        assert_eq!(k.len(), 2);
        let h = hermite_rows(k);
        assert_eq!(h, vec![zi(&[1, 1, -1]), zi(&[0, 2, -1])]);
        // (1,1,0) and (1,-1,0) span an index-2 sublattice; saturation recovers e1, e2
        let k2 = integer_kernel(&[zi(&[0, 0, 1])], 3);
        assert_eq!(hermite_rows(k2), vec![zi(&[1, 0, 0]), zi(&[0, 1, 0])]);
    }

    #[test]
    fn determinants() {
        assert_eq!(det_bigint(&[zi(&[0, 1]), zi(&[1, 0])]), BigInt::from(-1));
        assert_eq!(det_bigint(&[zi(&[2, 1, 0]), zi(&[1, 2, 1]), zi(&[0, 1, 2])]), BigInt::from(4));
    }
}
