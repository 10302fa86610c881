//! Hyperkähler lines `S_W`: positive 3-planes `W` and the 2-sphere of oriented
//! planes inside them, with exact genericity certificates
//! (`W⊥ ∩ H²(M, Q) = 0`).

pub(crate) mod connect;

pub use connect::{connect_chain, generic_line_through};
pub(crate) use connect::Blueprint;

use alloc::boxed::Box;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use once_cell::race::OnceBox;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::lattice::QuadLattice;
use crate::period::{LineRep, PeriodPoint};
use crate::scalars::{rational_kernel, AlgebraicScalar, AlgebraicVector, FieldSpec};
use crate::subspace::{check_positive, cross, gram_matrix, in_span, orientation_sign, reject_from, small_rank};
use crate::subtwistor::AuxMetric;

/// Outcome of the exact genericity test, with its certificate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Genericity {
    /// `W⊥ ∩ Q^b = 0`: the expanded rational system has full rank.
    Generic,
    /// A rational basis of `W⊥ ∩ Q^b` (nonempty).
    NotGeneric(Vec<Vec<BigRational>>),
}

/// A positive-definite 3-plane `W`, i.e. the hyperkähler line `S_W`.
#[derive(Debug)]
pub struct HKLine {
    lattice: Arc<QuadLattice>,
    span: [AlgebraicVector; 3],
    generic: OnceBox<Genericity>,
}

impl Clone for HKLine {
    fn clone(&self) -> Self {
        let generic = OnceBox::new();
        if let Some(g) = self.generic.get() {
            let _ = generic.set(Box::new(g.clone()));
        }
        HKLine { lattice: self.lattice.clone(), span: self.span.clone(), generic }
    }
}

impl HKLine {
    pub fn new(lattice: &Arc<QuadLattice>, span: [AlgebraicVector; 3]) -> Result<Self> {
        check_positive(lattice, &[&span[0], &span[1], &span[2]])?;
        Ok(HKLine { lattice: lattice.clone(), span, generic: OnceBox::new() })
    }

    pub fn lattice(&self) -> &Arc<QuadLattice> {
        &self.lattice
    }

    pub fn span(&self) -> &[AlgebraicVector; 3] {
        &self.span
    }

    pub fn basis(&self) -> [&AlgebraicVector; 3] {
        [&self.span[0], &self.span[1], &self.span[2]]
    }

    pub fn field(&self) -> FieldSpec {
        self.span.iter().fold(FieldSpec::rational(), |f, v| f.join(v.field()))
    }

    /// Cached genericity verdict: `None` until [`HKLine::genericity`] ran.
    pub fn cached_genericity(&self) -> Option<bool> {
        self.generic.get().map(|g| matches!(g, Genericity::Generic))
    }

    /// Decides `W⊥ ∩ Q^b = 0` exactly and caches the certificate.
    pub fn genericity(&self) -> &Genericity {
        self.generic.get_or_init(|| {
            let k = rational_kernel(&self.span, &self.lattice).expect("span lengths validated at construction");
            Box::new(if k.is_empty() { Genericity::Generic } else { Genericity::NotGeneric(k) })
        })
    }

    pub fn is_generic(&self) -> bool {
        matches!(self.genericity(), Genericity::Generic)
    }

    pub fn contains(&self, v: &AlgebraicVector) -> Result<bool> {
        let g = gram_matrix(&self.lattice, &self.basis())?;
        in_span(&self.lattice, &self.basis(), &g, v)
    }

    /// Exact test `V ⊂ W`.
    pub fn contains_plane(&self, v: &PeriodPoint) -> Result<bool> {
        let g = gram_matrix(&self.lattice, &self.basis())?;
        for x in v.basis() {
            if !in_span(&self.lattice, &self.basis(), &g, x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as unoriented 3-planes.
    pub fn same_space(&self, other: &HKLine) -> Result<bool> {
        let g = gram_matrix(&self.lattice, &self.basis())?;
        for x in other.basis() {
            if !in_span(&self.lattice, &self.basis(), &g, x)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

pub fn is_generic(w: &HKLine) -> bool {
    w.is_generic()
}

/// The hyperkähler line through two period points, when one exists:
/// `dim(Vx ∩ Vy) = 1` and `⟨Vx, Vy⟩` positive definite.
pub fn incident(vx: &PeriodPoint, vy: &PeriodPoint) -> Result<Option<HKLine>> {
    if vx.same_plane(vy)? {
        return Err(Error::SamePoint);
    }
    let l = vx.lattice();
    let gx = gram_matrix(l, &vx.basis())?;
    let rejected: Vec<AlgebraicVector> =
        vy.basis().iter().map(|y| reject_from(l, &vx.basis(), &gx, y)).collect::<Result<_>>()?;
    if small_rank(&[&rejected[0], &rejected[1]]) != 1 {
        return Ok(None);
    }
    let extra = if rejected[0].is_zero() { &vy.span()[1] } else { &vy.span()[0] };
    match HKLine::new(l, [vx.span()[0].clone(), vx.span()[1].clone(), extra.clone()]) {
        Ok(w) => Ok(Some(w)),
        Err(Error::NotPositive) => Ok(None),
        Err(e) => Err(e),
    }
}

/// A nonzero `c` with `rows · c = 0`, division-free for the small shapes
/// that occur here (at most 3 unknowns).
pub(crate) fn kernel_vector(rows: &[Vec<AlgebraicScalar>], ncols: usize) -> Option<Vec<AlgebraicScalar>> {
    let z = || AlgebraicScalar::zero();
    let nonzero_rows: Vec<&Vec<AlgebraicScalar>> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).collect();
    match (nonzero_rows.len(), ncols) {
        (0, n) if n > 0 => {
            let mut v: Vec<AlgebraicScalar> = (0..n).map(|_| z()).collect();
            v[0] = AlgebraicScalar::one();
            Some(v)
        }
        (1, 2) => {
            let r = nonzero_rows[0];
            Some(alloc::vec![r[1].clone(), -&r[0]])
        }
        (1, 3) => {
            let r = nonzero_rows[0];
            if r[0].is_zero() {
                return Some(alloc::vec![AlgebraicScalar::one(), z(), z()]);
            }
            Some(alloc::vec![r[1].clone(), -&r[0], z()])
        }
        (2, 3) => {
            let c = cross(
                &[nonzero_rows[0][0].clone(), nonzero_rows[0][1].clone(), nonzero_rows[0][2].clone()],
                &[nonzero_rows[1][0].clone(), nonzero_rows[1][1].clone(), nonzero_rows[1][2].clone()],
            );
            if c.iter().any(|x| !x.is_zero()) {
                return Some(c.to_vec());
            }
            // dependent rows: the kernel of the first row alone
            kernel_vector(&nonzero_rows[..1].iter().map(|r| (*r).clone()).collect::<Vec<_>>(), 3)
        }
        _ => None,
    }
}

fn q_rows(l: &QuadLattice, wp: &[&AlgebraicVector], w: &[&AlgebraicVector]) -> Result<Vec<Vec<AlgebraicScalar>>> {
    wp.iter().map(|p| w.iter().map(|x| l.gram_eval(p, x)).collect::<Result<Vec<_>>>()).collect()
}

/// A nonzero `b ∈ W` with `⟨b⟩ + W′` positive definite.
///
/// Follows the linear-algebra lemma: a vector of `W ∩ W′` when that is
/// nonzero, otherwise a vector of `W ∩ W′⊥`.
pub fn extend_positive(l: &QuadLattice, w: &[&AlgebraicVector], wp: &[&AlgebraicVector]) -> Result<AlgebraicVector> {
    if wp.len() >= w.len() {
        return Err(Error::DimensionMismatch { expected: w.len().saturating_sub(1), found: wp.len() });
    }
    let gw = check_positive(l, w)?;
    check_positive(l, wp)?;
    // W ∩ W′ through the rejections of W′ from W
    let rej: Vec<AlgebraicVector> = wp.iter().map(|x| reject_from(l, w, &gw, x)).collect::<Result<_>>()?;
    if let Some(i) = rej.iter().position(AlgebraicVector::is_zero) {
        return Ok(wp[i].clone());
    }
    if rej.len() == 2 && small_rank(&[&rej[0], &rej[1]]) == 1 {
        let k = (0..rej[0].len()).find(|&k| !rej[0][k].is_zero()).expect("nonzero rejection");
        let lambda = &rej[1][k] / &rej[0][k];
        return Ok(wp[1] - &wp[0].scale(&lambda));
    }
    extend_positive_orthogonal(l, w, wp)
}

/// A nonzero `b ∈ W ∩ W′⊥`; `⟨b⟩ ⊕ W′` is then positive definite of
/// dimension `dim W′ + 1`.
pub fn extend_positive_orthogonal(l: &QuadLattice, w: &[&AlgebraicVector], wp: &[&AlgebraicVector]) -> Result<AlgebraicVector> {
    if wp.len() >= w.len() {
        return Err(Error::DimensionMismatch { expected: w.len().saturating_sub(1), found: wp.len() });
    }
    let rows = q_rows(l, wp, w)?;
    let c = kernel_vector(&rows, w.len()).ok_or(Error::NotPositive)?;
    let b = AlgebraicVector::combination(&c, w);
    if b.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(b)
}

/// The monomial-basis primes used for generic coefficients.
pub(crate) const PRIME_POOL: &[u64] = &[2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

/// `base` enlarged by the smallest pool primes until its degree reaches `min_degree`.
pub(crate) fn enlarge_field(base: &FieldSpec, min_degree: usize) -> FieldSpec {
    let mut f = base.clone();
    for &p in PRIME_POOL {
        if f.degree() >= min_degree {
            break;
        }
        if !f.contains_sqrt(p) {
            f = f.adjoin_sqrt(p).expect("pool prime is independent");
        }
    }
    f
}

pub(crate) fn random_scalar(rng: &mut ChaCha8Rng, field: &FieldSpec, height: i64) -> AlgebraicScalar {
    let coeffs: Vec<(usize, BigRational)> = (0..field.degree())
        .map(|m| (m, BigRational::from_integer(BigInt::from(rng.gen_range(-height..=height)))))
        .collect();
    AlgebraicScalar::from_coeffs(field, &coeffs)
}

/// Attempts made by [`generic_vector_in`] before giving up.
pub const GENERIC_RETRY_BUDGET: usize = 64;

/// A vector `a ∈ W` with `a⊥ ∩ Q^b = 0` and `q(a, a) > 0`, certified exactly.
///
/// Candidates are drawn deterministically from `seed` with coefficients over
/// a multi-quadratic field of degree at least `b`; the coefficient height
/// widens every 8 attempts.
pub fn generic_vector_in(w: &HKLine, seed: u64) -> Result<AlgebraicVector> {
    use rand::SeedableRng;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generic_combination(w, &mut rng).map(|(_, a)| a)
}

/// Coefficients `c` and the certified generic vector `a = Σ cᵢ wᵢ`.
pub(crate) fn generic_combination(w: &HKLine, rng: &mut ChaCha8Rng) -> Result<([AlgebraicScalar; 3], AlgebraicVector)> {
    if !w.is_generic() {
        return Err(Error::NotGeneric);
    }
    let l = w.lattice();
    let field = enlarge_field(&w.field(), l.rank());
    for attempt in 0..GENERIC_RETRY_BUDGET {
        let height = 1 + (attempt / 8) as i64;
        let coeffs: [AlgebraicScalar; 3] = core::array::from_fn(|_| random_scalar(rng, &field, height));
        let a = AlgebraicVector::combination(&coeffs, &w.basis());
        if a.is_zero() {
            continue;
        }
        if rational_kernel(core::slice::from_ref(&a), l)?.is_empty() && l.norm(&a)?.signum() > 0 {
            return Ok((coeffs, a));
        }
    }
    Err(Error::RetryBudgetExhausted(GENERIC_RETRY_BUDGET))
}

/// `W = ⟨V, ω⟩` for a positive `ω ⊥ V`.
pub fn hk_line_through(v: &PeriodPoint, omega: &AlgebraicVector) -> Result<HKLine> {
    let l = v.lattice();
    if omega.len() != l.rank() {
        return Err(Error::DimensionMismatch { expected: l.rank(), found: omega.len() });
    }
    for b in v.basis() {
        if !l.gram_eval(omega, b)?.is_zero() {
            return Err(Error::NotOrthogonal);
        }
    }
    if l.norm(omega)?.signum() <= 0 {
        return Err(Error::NotPositive);
    }
    HKLine::new(l, [v.span()[0].clone(), v.span()[1].clone(), omega.clone()])
}

/// The oriented plane `n^⊥g ∩ W`, oriented so that `(u, v, n)` is positive
/// with respect to the basis orientation of `W`. Scaling of `n` is irrelevant.
pub fn sphere_point(w: &HKLine, n: &AlgebraicVector, g: &AuxMetric) -> Result<PeriodPoint> {
    let l = w.lattice();
    if n.is_zero() {
        return Err(Error::ZeroVector);
    }
    if !w.contains(n)? {
        return Err(Error::NotInSubspace);
    }
    let b = w.basis();
    let r: Vec<AlgebraicScalar> = b.iter().map(|x| g.inner_exact(n, x)).collect::<Result<_>>()?;
    let (cu, cv) = if !r[0].is_zero() {
        ([r[1].clone(), -&r[0], AlgebraicScalar::zero()], [r[2].clone(), AlgebraicScalar::zero(), -&r[0]])
    } else {
        (
            [AlgebraicScalar::one(), AlgebraicScalar::zero(), AlgebraicScalar::zero()],
            [AlgebraicScalar::zero(), r[2].clone(), -&r[1]],
        )
    };
    let mut u = AlgebraicVector::combination(&cu, &b);
    let mut v = AlgebraicVector::combination(&cv, &b);
    if orientation_sign(l, &b, &[&u, &v, n])? < 0 {
        core::mem::swap(&mut u, &mut v);
    }
    PeriodPoint::new(l, u, v)
}

/// `(ℜΩ, ℑΩ, ω)` with pairwise `q`-orthogonal entries of equal norm.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistorTriple {
    pub re_omega: AlgebraicVector,
    pub im_omega: AlgebraicVector,
    pub kahler: AlgebraicVector,
}

/// Rescales `ω` so that `q(ω, ω) = q(ℜΩ, ℜΩ) = q(ℑΩ, ℑΩ)`.
///
/// The factor `t = √(q(re, re) / q(ω, ω))` must be the square root of a
/// rational number; the field is enlarged by its radicand when needed.
pub fn normalize_triple(line: &LineRep, omega: &AlgebraicVector) -> Result<TwistorTriple> {
    let l = line.lattice();
    if omega.len() != l.rank() {
        return Err(Error::DimensionMismatch { expected: l.rank(), found: omega.len() });
    }
    if !l.gram_eval(omega, line.re())?.is_zero() || !l.gram_eval(omega, line.im())?.is_zero() {
        return Err(Error::NotOrthogonal);
    }
    let qw = l.norm(omega)?;
    if qw.signum() <= 0 {
        return Err(Error::NotPositive);
    }
    let ratio = (&l.norm(line.re())? / &qw).to_rational().ok_or(Error::IrrationalRatio)?;
    // √(a/b) = √(a·b) / b
    let ab = (ratio.numer() * ratio.denom()).to_biguint().ok_or(Error::NotPositive)?;
    let ab: u64 = ab.try_into().map_err(|_| Error::IrrationalRatio)?;
    let t = AlgebraicScalar::sqrt_int(ab)?.scale(&BigRational::new(1.into(), ratio.denom().clone()));
    Ok(TwistorTriple { re_omega: line.re().clone(), im_omega: line.im().clone(), kahler: omega.scale(&t) })
}

#[cfg(test)]
mod tests;
