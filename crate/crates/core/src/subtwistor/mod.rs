//! Numeric layer over the exact geometry: Fubini–Study distance on twistor
//! spheres, a Plücker lower bound for `d_g`, chain lengths, and the
//! subtwistor upper bound search.
//!
//! Distances are angles in `[0, π]` computed as `2·atan2(|x − y|, |x + y|)`
//! on unit vectors, which stays accurate near both ends of the range.

mod dtw;

pub use dtw::{dtw_restart, dtw_select, dtw_short_candidates, dtw_upper, dtw_upper_with, DtwOptions, DtwResult};

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::ghk::HKLine;
use crate::lattice::QuadLattice;
use crate::period::{same_lattice, PeriodPoint};
use crate::scalars::{AlgebraicScalar, AlgebraicVector};
use crate::subspace::check_positive;

/// An auxiliary Euclidean metric `g` on `H²(M, R)` in the lattice basis.
///
/// Entries are kept as floats and, for exact predicates, as the exact
/// rationals those floats denote.
#[derive(Debug, Clone)]
pub struct AuxMetric {
    gram: Vec<Vec<f64>>,
    exact: Option<Vec<Vec<BigRational>>>,
    /// Lower Cholesky factor `L` with `g = L Lᵀ`.
    chol: Vec<Vec<f64>>,
}

impl AuxMetric {
    pub fn identity(n: usize) -> Self {
        let gram: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        AuxMetric { chol: gram.clone(), gram, exact: None }
    }

    pub fn new(gram: Vec<Vec<f64>>) -> Result<Self> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidMetric);
        }
        for i in 0..n {
            for j in 0..n {
                if !gram[i][j].is_finite() || gram[i][j] != gram[j][i] {
                    return Err(Error::InvalidMetric);
                }
            }
        }
        let chol = cholesky(&gram).ok_or(Error::InvalidMetric)?;
        let exact = gram
            .iter()
            .map(|r| r.iter().map(|&x| BigRational::from_float(x).ok_or(Error::InvalidMetric)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(AuxMetric { gram, exact: Some(exact), chol })
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<f64>] {
        &self.gram
    }

    pub fn inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let mut s = 0.0;
        for (i, row) in self.gram.iter().enumerate() {
            for (j, gij) in row.iter().enumerate() {
                s += x[i] * gij * y[j];
            }
        }
        s
    }

    /// `g(x, y)` computed exactly from the rational values of the entries.
    pub fn inner_exact(&self, x: &AlgebraicVector, y: &AlgebraicVector) -> Result<AlgebraicScalar> {
        let n = self.dim();
        if x.len() != n || y.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: if x.len() != n { x.len() } else { y.len() } });
        }
        let mut s = AlgebraicScalar::zero();
        match &self.exact {
            None => {
                for i in 0..n {
                    if !x[i].is_zero() && !y[i].is_zero() {
                        s += &(&x[i] * &y[i]);
                    }
                }
            }
            Some(g) => {
                for i in 0..n {
                    if x[i].is_zero() {
                        continue;
                    }
                    let mut t = AlgebraicScalar::zero();
                    for j in 0..n {
                        if !g[i][j].is_zero() && !y[j].is_zero() {
                            t += &y[j].scale(&g[i][j]);
                        }
                    }
                    s += &(&x[i] * &t);
                }
            }
        }
        Ok(s)
    }

    /// `Lᵀx`, so that `g(x, y)` is the Euclidean product of the images.
    pub(crate) fn whiten(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n).map(|i| (i..n).map(|k| self.chol[k][i] * x[k]).sum()).collect()
    }
}

fn cholesky(a: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = a.len();
    let mut l = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..=i {
            let s: f64 = a[i][j] - (0..j).map(|k| l[i][k] * l[j][k]).sum::<f64>();
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i][i] = libm::sqrt(s);
            } else {
                l[i][j] = s / l[j][j];
            }
        }
    }
    Some(l)
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

fn norm(x: &[f64]) -> f64 {
    libm::sqrt(dot(x, x))
}

/// Angle between unit vectors, accurate near 0 and π.
fn unit_angle(x: &[f64], y: &[f64]) -> f64 {
    let d: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
    let s: Vec<f64> = x.iter().zip(y).map(|(a, b)| a + b).collect();
    2.0 * libm::atan2(norm(&d), norm(&s))
}

fn normalized(mut x: Vec<f64>) -> Vec<f64> {
    let n = norm(&x);
    for v in &mut x {
        *v /= n;
    }
    x
}

/// Fubini–Study angle between two oriented planes of the 3-space `w`
/// (float coordinates, no membership check).
pub(crate) fn fs_angle(g: &AuxMetric, w: [&[f64]; 3], v1: [&[f64]; 2], v2: [&[f64]; 2]) -> f64 {
    // g-orthonormal frame of W, same orientation as the given basis
    let mut e: Vec<Vec<f64>> = Vec::with_capacity(3);
    for x in w {
        let mut v = g.whiten(x);
        for f in &e {
            let c = dot(&v, f);
            for (vi, fi) in v.iter_mut().zip(f) {
                *vi -= c * fi;
            }
        }
        e.push(normalized(v));
    }
    let coords = |x: &[f64]| {
        let wx = g.whiten(x);
        [dot(&e[0], &wx), dot(&e[1], &wx), dot(&e[2], &wx)]
    };
    let normal = |v: [&[f64]; 2]| {
        let (p, q) = (coords(v[0]), coords(v[1]));
        normalized(vec![p[1] * q[2] - p[2] * q[1], p[2] * q[0] - p[0] * q[2], p[0] * q[1] - p[1] * q[0]])
    };
    unit_angle(&normal(v1), &normal(v2))
}

/// Unit oriented Plücker bivector of a plane after whitening.
fn bivector(g: &AuxMetric, v: [&[f64]; 2]) -> Vec<f64> {
    let (p, q) = (g.whiten(v[0]), g.whiten(v[1]));
    let n = p.len();
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            out.push(p[i] * q[j] - p[j] * q[i]);
        }
    }
    normalized(out)
}

fn plane_f64(v: &PeriodPoint) -> [Vec<f64>; 2] {
    [v.span()[0].to_f64(), v.span()[1].to_f64()]
}

fn check_metric(g: &AuxMetric, l: &QuadLattice) -> Result<()> {
    if g.dim() != l.rank() {
        return Err(Error::DimensionMismatch { expected: l.rank(), found: g.dim() });
    }
    Ok(())
}

/// Distance on the twistor sphere `S_W` between two of its points: the
/// angle between their oriented `g`-unit normals inside `W`.
pub fn fs_distance(w: &HKLine, v1: &PeriodPoint, v2: &PeriodPoint, g: &AuxMetric) -> Result<f64> {
    check_metric(g, w.lattice())?;
    if !w.contains_plane(v1)? || !w.contains_plane(v2)? {
        return Err(Error::NotInSubspace);
    }
    Ok(fs_between(w, v1, v2, g))
}

fn fs_between(w: &HKLine, v1: &PeriodPoint, v2: &PeriodPoint, g: &AuxMetric) -> f64 {
    let wf: Vec<Vec<f64>> = w.span().iter().map(AlgebraicVector::to_f64).collect();
    let (p, q) = (plane_f64(v1), plane_f64(v2));
    fs_angle(g, [&wf[0], &wf[1], &wf[2]], [&p[0], &p[1]], [&q[0], &q[1]])
}

/// Lower bound for `d_g(V1, V2)`: the angle between the unit oriented
/// Plücker bivectors. Equals [`fs_distance`] when both lie in one `S_W`.
pub fn dg_lower(v1: &PeriodPoint, v2: &PeriodPoint, g: &AuxMetric) -> Result<f64> {
    if !same_lattice(v1.lattice(), v2.lattice()) {
        return Err(Error::LatticeMismatch);
    }
    check_metric(g, v1.lattice())?;
    let (p, q) = (plane_f64(v1), plane_f64(v2));
    Ok(unit_angle(&bivector(g, [&p[0], &p[1]]), &bivector(g, [&q[0], &q[1]])))
}

/// Hyperkähler lines `S₁ … Sₙ` with junctions `sᵢ ∈ Sᵢ ∩ Sᵢ₊₁` and
/// endpoints `x ∈ S₁`, `y ∈ Sₙ`. The empty chain joins a point to itself.
#[derive(Debug, Clone)]
pub struct SubtwistorChain {
    lines: Vec<HKLine>,
    junctions: Vec<PeriodPoint>,
    endpoints: [PeriodPoint; 2],
}

impl SubtwistorChain {
    /// Unvalidated; see [`validate_chain`].
    pub fn new(lines: Vec<HKLine>, junctions: Vec<PeriodPoint>, endpoints: [PeriodPoint; 2]) -> Self {
        SubtwistorChain { lines, junctions, endpoints }
    }

    pub fn lines(&self) -> &[HKLine] {
        &self.lines
    }

    pub fn junctions(&self) -> &[PeriodPoint] {
        &self.junctions
    }

    pub fn endpoints(&self) -> &[PeriodPoint; 2] {
        &self.endpoints
    }

    pub fn len(&self) -> usize {
        self.lines.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lines.is_empty()
    }

    /// `x → m` followed by `m → y`; the shared endpoint becomes a junction.
    pub fn concat(&self, other: &SubtwistorChain) -> Result<SubtwistorChain> {
        if !self.endpoints[1].same_point(&other.endpoints[0])? {
            return Err(Error::InvalidChain("structure"));
        }
        let ends = [self.endpoints[0].clone(), other.endpoints[1].clone()];
        if self.is_empty() {
            return Ok(SubtwistorChain::new(other.lines.clone(), other.junctions.clone(), ends));
        }
        if other.is_empty() {
            return Ok(SubtwistorChain::new(self.lines.clone(), self.junctions.clone(), ends));
        }
        let mut lines = self.lines.clone();
        lines.extend(other.lines.iter().cloned());
        let mut junctions = self.junctions.clone();
        junctions.push(self.endpoints[1].clone());
        junctions.extend(other.junctions.iter().cloned());
        Ok(SubtwistorChain::new(lines, junctions, ends))
    }

    /// `x, s₁, …, sₙ₋₁, y`.
    pub fn points(&self) -> Vec<&PeriodPoint> {
        let mut p = Vec::with_capacity(self.junctions.len() + 2);
        p.push(&self.endpoints[0]);
        p.extend(self.junctions.iter());
        p.push(&self.endpoints[1]);
        p
    }
}

/// Result of [`validate_chain`]: the first violated clause, if any, and the
/// index of the offending line or point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ChainReport {
    pub clause: Option<&'static str>,
    pub position: Option<usize>,
}

impl ChainReport {
    pub fn is_valid(&self) -> bool {
        self.clause.is_none()
    }

    fn fail(clause: &'static str, position: usize) -> Self {
        ChainReport { clause: Some(clause), position: Some(position) }
    }

    pub fn into_result(self) -> Result<()> {
        match self.clause {
            None => Ok(()),
            Some(c) => Err(Error::InvalidChain(c)),
        }
    }
}

/// Exact check of every chain invariant. Clauses, in the order tested:
/// `structure`, `positivity`, `endpoint membership`, `junction membership`,
/// `genericity`.
pub fn validate_chain(c: &SubtwistorChain) -> ChainReport {
    let l = c.endpoints[0].lattice();
    let ok = ChainReport { clause: None, position: None };
    let lattices_agree = c.points().iter().all(|p| same_lattice(p.lattice(), l))
        && c.lines.iter().all(|w| same_lattice(w.lattice(), l));
    if !lattices_agree {
        return ChainReport::fail("structure", 0);
    }
    if c.lines.is_empty() {
        return match (c.junctions.is_empty(), c.endpoints[0].same_point(&c.endpoints[1])) {
            (true, Ok(true)) => ok,
            _ => ChainReport::fail("structure", 0),
        };
    }
    if c.junctions.len() + 1 != c.lines.len() {
        return ChainReport::fail("structure", c.junctions.len());
    }
    for (i, w) in c.lines.iter().enumerate() {
        if check_positive(l, &w.basis()).is_err() {
            return ChainReport::fail("positivity", i);
        }
    }
    for (i, p) in c.points().iter().enumerate() {
        if check_positive(l, &p.basis()).is_err() {
            return ChainReport::fail("positivity", i);
        }
    }
    let inside = |w: &HKLine, p: &PeriodPoint| w.contains_plane(p).unwrap_or(false);
    if !inside(&c.lines[0], &c.endpoints[0]) {
        return ChainReport::fail("endpoint membership", 0);
    }
    if !inside(&c.lines[c.lines.len() - 1], &c.endpoints[1]) {
        return ChainReport::fail("endpoint membership", 1);
    }
    for (i, s) in c.junctions.iter().enumerate() {
        if !inside(&c.lines[i], s) || !inside(&c.lines[i + 1], s) {
            return ChainReport::fail("junction membership", i);
        }
    }
    for (i, w) in c.lines.iter().enumerate() {
        if !w.is_generic() {
            return ChainReport::fail("genericity", i);
        }
    }
    ok
}

/// `Σ fs_distance(Sᵢ, sᵢ₋₁, sᵢ)` over a validated chain.
pub fn chain_length(c: &SubtwistorChain, g: &AuxMetric) -> Result<f64> {
    check_metric(g, c.endpoints[0].lattice())?;
    validate_chain(c).into_result()?;
    Ok(chain_length_unchecked(c, g))
}

pub(crate) fn chain_length_unchecked(c: &SubtwistorChain, g: &AuxMetric) -> f64 {
    let pts = c.points();
    c.lines.iter().enumerate().map(|(i, w)| fs_between(w, pts[i], pts[i + 1], g)).sum()
}

#[cfg(test)]
mod tests;
