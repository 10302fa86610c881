//! The 4-line connectivity construction.
//!
//! `W_x = ⟨Vx, ω_x⟩` and `W_y = ⟨Vy, ω_y⟩` are generic lines through the
//! endpoints; `a ∈ W_x` is a generic vector, `b ∈ W_y ∩ a⊥`, and
//! `z ∈ W_x`, `u′ ∈ W_y` are orthogonal to `⟨a, b⟩`. Both bridges contain the
//! shared plane `⟨a, b⟩`:
//!
//! ```text
//! Vx ─ W_x ─ ⟨a,z⟩ ─ ⟨z,a,b⟩ ─ ⟨a,b⟩ ─ ⟨a,b,u′⟩ ─ ⟨b,u′⟩ ─ W_y ─ Vy
//! ```
//!
//! A [`Blueprint`] holds the exact random data; rational offsets to it are
//! the free parameters explored by the subtwistor length search.

use alloc::vec;
use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{enlarge_field, generic_combination, incident, random_scalar, HKLine};
use crate::error::{Error, Result};
use crate::lattice::QuadLattice;
use crate::period::{same_lattice, PeriodPoint};
use crate::scalars::{AlgebraicScalar, AlgebraicVector, FieldSpec};
use crate::subspace::{cross, gram_matrix, reject_from};
use crate::subtwistor::{fs_angle, validate_chain, AuxMetric, SubtwistorChain};

/// Candidates tried for `ω` before giving up.
pub const OMEGA_RETRY_BUDGET: usize = 32;
/// Independent blueprints tried by [`connect_chain`].
pub const CONNECT_ATTEMPTS: usize = 8;

fn plane_field(v: &PeriodPoint) -> FieldSpec {
    v.span()[0].field().join(v.span()[1].field())
}

fn require_positive(l: &QuadLattice) -> Result<()> {
    let p = l.signature().0;
    if p < 3 {
        return Err(Error::InsufficientPositive(p));
    }
    Ok(())
}

/// Exact data for one endpoint: `ω = ω₀ + rej_V(y + d)` for offsets `d`.
#[derive(Debug, Clone)]
struct Side {
    omega0: AlgebraicVector,
    y: AlgebraicVector,
}

impl Side {
    fn line(&self, v: &PeriodPoint, offset: &[BigRational]) -> Result<HKLine> {
        let l = v.lattice();
        let y = if offset.iter().all(Zero::is_zero) { self.y.clone() } else { &self.y + &AlgebraicVector::from_rationals(offset) };
        let gv = gram_matrix(l, &v.basis())?;
        let omega = &self.omega0 + &reject_from(l, &v.basis(), &gv, &y)?;
        HKLine::new(l, [v.span()[0].clone(), v.span()[1].clone(), omega])
    }
}

fn generic_side(v: &PeriodPoint, rng: &mut ChaCha8Rng) -> Result<(Side, HKLine)> {
    let l = v.lattice();
    require_positive(l)?;
    let reference = v.plus_reference().ok_or(Error::InsufficientPositive(l.signature().0))?.clone();
    let gv = gram_matrix(l, &v.basis())?;
    let mut field = enlarge_field(&plane_field(v), l.rank().saturating_sub(2).max(2));
    for attempt in 0..OMEGA_RETRY_BUDGET {
        if attempt > 0 && attempt % 8 == 0 {
            field = enlarge_field(&field, 2 * field.degree());
        }
        let height = 1 + (attempt / 4) as i64;
        let y = AlgebraicVector::new((0..l.rank()).map(|_| random_scalar(rng, &field, height)).collect());
        let yp = reject_from(l, &v.basis(), &gv, &y)?;
        let mut n = BigRational::from_integer(1.into());
        let omega0 = loop {
            let candidate = reference.scale_rational(&n);
            if l.norm(&(&candidate + &yp))?.signum() > 0 {
                break candidate;
            }
            n = &n + &n;
        };
        let omega = &omega0 + &yp;
        let w = HKLine::new(l, [v.span()[0].clone(), v.span()[1].clone(), omega])?;
        if w.is_generic() {
            return Ok((Side { omega0, y }, w));
        }
    }
    Err(Error::RetryBudgetExhausted(OMEGA_RETRY_BUDGET))
}

/// A generic hyperkähler line through `V`, drawn deterministically from `seed`.
pub fn generic_line_through(v: &PeriodPoint, seed: u64) -> Result<HKLine> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generic_side(v, &mut rng).map(|(_, w)| w)
}

/// Exact random data for a 4-line chain between two period points.
#[derive(Debug, Clone)]
pub(crate) struct Blueprint {
    vx: PeriodPoint,
    vy: PeriodPoint,
    x: Side,
    y: Side,
    a_coeffs: [AlgebraicScalar; 3],
}

impl Blueprint {
    pub(crate) fn new(vx: &PeriodPoint, vy: &PeriodPoint, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (x, wx) = generic_side(vx, &mut rng)?;
        let (y, _) = generic_side(vy, &mut rng)?;
        let (a_coeffs, _) = generic_combination(&wx, &mut rng)?;
        Ok(Blueprint { vx: vx.clone(), vy: vy.clone(), x, y, a_coeffs })
    }

    /// Offsets: `b` entries for `ω_x`, `b` for `ω_y`, 3 for `a`, 1 for `b`.
    pub(crate) fn num_params(&self) -> usize {
        2 * self.vx.lattice().rank() + 4
    }

    /// Builds the exact chain for the given offsets and junction
    /// orientations (`true` reverses the default basis order).
    pub(crate) fn realize(&self, offsets: &[BigRational], flips: [bool; 3]) -> Result<SubtwistorChain> {
        let l = self.vx.lattice();
        let r = l.rank();
        let wx = self.x.line(&self.vx, &offsets[..r])?;
        let wy = self.y.line(&self.vy, &offsets[r..2 * r])?;
        let ca: Vec<AlgebraicScalar> =
            self.a_coeffs.iter().zip(&offsets[2 * r..2 * r + 3]).map(|(c, d)| c + &AlgebraicScalar::from_rational(d)).collect();
        let a = AlgebraicVector::combination(&ca, &wx.basis());
        let beta = AlgebraicScalar::from_rational(&offsets[2 * r + 3]);
        let ry: Vec<AlgebraicScalar> = wy.basis().iter().map(|w| l.gram_eval(&a, w)).collect::<Result<_>>()?;
        let cb = [&ry[1] + &(&beta * &ry[2]), -&ry[0], -(&beta * &ry[0])];
        let b = AlgebraicVector::combination(&cb, &wy.basis());
        let z = orthogonal_in(l, &wx, &a, &b)?;
        let u = orthogonal_in(l, &wy, &a, &b)?;
        let pair = |p: &AlgebraicVector, q: &AlgebraicVector, flip: bool| {
            if flip {
                PeriodPoint::new(l, q.clone(), p.clone())
            } else {
                PeriodPoint::new(l, p.clone(), q.clone())
            }
        };
        let s1 = pair(&a, &z, flips[0])?;
        let s2 = pair(&a, &b, flips[1])?;
        let s3 = pair(&b, &u, flips[2])?;
        let bridge1 = HKLine::new(l, [z, a.clone(), b.clone()])?;
        let bridge2 = HKLine::new(l, [a, b, u])?;
        Ok(SubtwistorChain::new(vec![wx, bridge1, bridge2, wy], vec![s1, s2, s3], [self.vx.clone(), self.vy.clone()]))
    }

    pub(crate) fn to_float(&self, g: &AuxMetric) -> FloatBlueprint {
        let l = self.vx.lattice();
        let plane = |v: &PeriodPoint| [v.span()[0].to_f64(), v.span()[1].to_f64()];
        FloatBlueprint {
            gram: l.gram().iter().map(|row| row.iter().map(|&x| x as f64).collect()).collect(),
            vx: plane(&self.vx),
            vy: plane(&self.vy),
            x: (self.x.omega0.to_f64(), self.x.y.to_f64()),
            y: (self.y.omega0.to_f64(), self.y.y.to_f64()),
            a: core::array::from_fn(|i| self.a_coeffs[i].to_f64()),
            metric: g.clone(),
        }
    }
}

/// The nonzero `c₁w₁ + c₂w₂ + c₃w₃ ∈ W` orthogonal to `a` and `b`.
fn orthogonal_in(l: &QuadLattice, w: &HKLine, a: &AlgebraicVector, b: &AlgebraicVector) -> Result<AlgebraicVector> {
    let row = |v: &AlgebraicVector| -> Result<[AlgebraicScalar; 3]> {
        Ok([l.gram_eval(v, &w.span()[0])?, l.gram_eval(v, &w.span()[1])?, l.gram_eval(v, &w.span()[2])?])
    };
    let c = cross(&row(a)?, &row(b)?);
    let v = AlgebraicVector::combination(&c, &w.basis());
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(v)
}

/// Floating-point mirror of [`Blueprint::realize`], used to rank neighbours
/// during the length search before any exact work.
#[derive(Debug, Clone)]
pub(crate) struct FloatBlueprint {
    gram: Vec<Vec<f64>>,
    vx: [Vec<f64>; 2],
    vy: [Vec<f64>; 2],
    x: (Vec<f64>, Vec<f64>),
    y: (Vec<f64>, Vec<f64>),
    a: [f64; 3],
    metric: AuxMetric,
}

fn fq(g: &[Vec<f64>], x: &[f64], y: &[f64]) -> f64 {
    let mut s = 0.0;
    for (i, row) in g.iter().enumerate() {
        if x[i] == 0.0 {
            continue;
        }
        let mut t = 0.0;
        for (j, gij) in row.iter().enumerate() {
            if *gij != 0.0 {
                t += gij * y[j];
            }
        }
        s += x[i] * t;
    }
    s
}

fn fcomb(c: &[f64], vs: &[&[f64]]) -> Vec<f64> {
    let mut out = vec![0.0; vs[0].len()];
    for (ci, v) in c.iter().zip(vs) {
        for (o, x) in out.iter_mut().zip(v.iter()) {
            *o += ci * x;
        }
    }
    out
}

fn fcross(r: [f64; 3], s: [f64; 3]) -> [f64; 3] {
    [r[1] * s[2] - r[2] * s[1], r[2] * s[0] - r[0] * s[2], r[0] * s[1] - r[1] * s[0]]
}

impl FloatBlueprint {
    fn omega(&self, v: &[Vec<f64>; 2], side: &(Vec<f64>, Vec<f64>), d: &[f64]) -> Vec<f64> {
        let g = &self.gram;
        let y: Vec<f64> = side.1.iter().zip(d).map(|(a, b)| a + b).collect();
        let (g00, g01, g11) = (fq(g, &v[0], &v[0]), fq(g, &v[0], &v[1]), fq(g, &v[1], &v[1]));
        let det = g00 * g11 - g01 * g01;
        let (q0, q1) = (fq(g, &y, &v[0]), fq(g, &y, &v[1]));
        let c0 = -(g11 * q0 - g01 * q1);
        let c1 = -(-g01 * q0 + g00 * q1);
        side.0.iter().zip(&y).zip(v[0].iter().zip(&v[1])).map(|((o, yi), (a, b))| o + det * yi + c0 * a + c1 * b).collect()
    }

    /// Chain length and best junction orientations for the given offsets,
    /// or `None` when the float construction degenerates.
    pub(crate) fn length(&self, offsets: &[f64]) -> Option<(f64, [bool; 3])> {
        let g = &self.gram;
        let r = self.vx[0].len();
        let ox = self.omega(&self.vx, &self.x, &offsets[..r]);
        let oy = self.omega(&self.vy, &self.y, &offsets[r..2 * r]);
        let wx: [&[f64]; 3] = [&self.vx[0], &self.vx[1], &ox];
        let wy: [&[f64]; 3] = [&self.vy[0], &self.vy[1], &oy];
        let ca: Vec<f64> = self.a.iter().zip(&offsets[2 * r..2 * r + 3]).map(|(c, d)| c + d).collect();
        let a = fcomb(&ca, &wx);
        let beta = offsets[2 * r + 3];
        let ry = [fq(g, &a, wy[0]), fq(g, &a, wy[1]), fq(g, &a, wy[2])];
        let b = fcomb(&[ry[1] + beta * ry[2], -ry[0], -beta * ry[0]], &wy);
        let row = |v: &[f64], w: &[&[f64]; 3]| [fq(g, v, w[0]), fq(g, v, w[1]), fq(g, v, w[2])];
        let z = fcomb(&fcross(row(&a, &wx), row(&b, &wx)), &wx);
        let u = fcomb(&fcross(row(&a, &wy), row(&b, &wy)), &wy);
        let finite = |v: &[f64]| v.iter().all(|x| x.is_finite()) && v.iter().any(|x| *x != 0.0);
        if ![&ox, &oy, &a, &b, &z, &u].iter().all(|v| finite(v)) {
            return None;
        }
        let m = &self.metric;
        let t1 = fs_angle(m, wx, [&self.vx[0], &self.vx[1]], [&a, &z]);
        let t2 = fs_angle(m, [&z, &a, &b], [&a, &z], [&a, &b]);
        let t3 = fs_angle(m, [&a, &b, &u], [&a, &b], [&b, &u]);
        let t4 = fs_angle(m, wy, [&b, &u], [&self.vy[0], &self.vy[1]]);
        let pi = core::f64::consts::PI;
        let pick = |t: f64, flip: bool| if flip { pi - t } else { t };
        let mut best: Option<(f64, [bool; 3])> = None;
        for mask in 0..8u8 {
            let f = [mask & 1 != 0, mask & 2 != 0, mask & 4 != 0];
            let len = pick(t1, f[0]) + pick(t2, f[0] ^ f[1]) + pick(t3, f[1] ^ f[2]) + pick(t4, f[2]);
            if !len.is_finite() {
                return None;
            }
            if best.map_or(true, |(b, _)| len < b) {
                best = Some((len, f));
            }
        }
        best
    }
}

pub(crate) fn rational_offsets_to_f64(offsets: &[BigRational]) -> Vec<f64> {
    offsets.iter().map(|x| x.to_f64().unwrap_or(0.0)).collect()
}

/// Connects two period points by at most 4 sequentially intersecting
/// generic hyperkähler lines; deterministic in `seed`.
///
/// Coinciding points give the empty chain; points with a common generic
/// line give a 1-line chain.
pub fn connect_chain(vx: &PeriodPoint, vy: &PeriodPoint, seed: u64) -> Result<SubtwistorChain> {
    if !same_lattice(vx.lattice(), vy.lattice()) {
        return Err(Error::LatticeMismatch);
    }
    require_positive(vx.lattice())?;
    if let Some(c) = short_chain(vx, vy, seed)? {
        return Ok(c);
    }
    for k in 0..CONNECT_ATTEMPTS as u64 {
        let bp = Blueprint::new(vx, vy, attempt_seed(seed, k))?;
        let zeros = vec![BigRational::zero(); bp.num_params()];
        if let Ok(c) = bp.realize(&zeros, [false; 3]) {
            if validate_chain(&c).is_valid() {
                return Ok(c);
            }
        }
    }
    Err(Error::RetryBudgetExhausted(CONNECT_ATTEMPTS))
}

pub(crate) fn attempt_seed(seed: u64, k: u64) -> u64 {
    seed.wrapping_add(k.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// The empty or 1-line chain, when one exists.
pub(crate) fn short_chain(vx: &PeriodPoint, vy: &PeriodPoint, seed: u64) -> Result<Option<SubtwistorChain>> {
    let ends = [vx.clone(), vy.clone()];
    if vx.same_plane(vy)? {
        if vx.same_point(vy)? {
            return Ok(Some(SubtwistorChain::new(Vec::new(), Vec::new(), ends)));
        }
        let w = generic_line_through(vx, seed)?;
        return Ok(Some(SubtwistorChain::new(vec![w], Vec::new(), ends)));
    }
    match incident(vx, vy)? {
        Some(w) if w.is_generic() => Ok(Some(SubtwistorChain::new(vec![w], Vec::new(), ends))),
        _ => Ok(None),
    }
}
