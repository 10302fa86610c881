//! Period points: oriented positive 2-planes `V ⊂ H²(M, R)` and, equivalently,
//! isotropic lines `l` with `q(l, l) = 0`, `q(l, l̄) > 0`.

use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use once_cell::race::OnceBox;

use crate::error::{Error, Result};
use crate::lattice::QuadLattice;
use crate::linalg::{hermite_rows, integer_kernel};
use crate::scalars::kernel_rows;
use crate::scalars::{AlgebraicScalar, AlgebraicVector};
use crate::subspace::{check_positive, cross, gram_matrix, in_span, orientation_sign};

/// A representative `l = re + i·im` of a point of the period domain.
#[derive(Debug, Clone)]
pub struct LineRep {
    lattice: Arc<QuadLattice>,
    re: AlgebraicVector,
    im: AlgebraicVector,
}

impl LineRep {
    pub fn lattice(&self) -> &Arc<QuadLattice> {
        &self.lattice
    }

    pub fn re(&self) -> &AlgebraicVector {
        &self.re
    }

    pub fn im(&self) -> &AlgebraicVector {
        &self.im
    }

    /// Complex-conjugate line `re − i·im`.
    pub fn conjugate(&self) -> LineRep {
        LineRep { lattice: self.lattice.clone(), re: self.re.clone(), im: -&self.im }
    }

    /// Equality as points of the projectivized quadric (up to a complex scalar).
    pub fn same_line(&self, other: &LineRep) -> Result<bool> {
        line_to_plane(self)?.same_point(&line_to_plane(other)?)
    }
}

/// Checks `q(l, l) = 0` and `q(l, l̄) > 0` exactly for `l = re + i·im`.
pub fn validate_line(l: &Arc<QuadLattice>, re: AlgebraicVector, im: AlgebraicVector) -> Result<LineRep> {
    for v in [&re, &im] {
        if v.len() != l.rank() {
            return Err(Error::DimensionMismatch { expected: l.rank(), found: v.len() });
        }
    }
    if re.is_zero() && im.is_zero() {
        return Err(Error::ZeroVector);
    }
    let rr = l.norm(&re)?;
    let ii = l.norm(&im)?;
    let ri = l.gram_eval(&re, &im)?;
    // q(l,l) = q(re,re) − q(im,im) + 2i·q(re,im)
    if rr != ii || !ri.is_zero() {
        return Err(Error::Isotropy);
    }
    // q(l, l̄) = q(re,re) + q(im,im)
    if rr.signum() <= 0 {
        return Err(Error::Positivity);
    }
    Ok(LineRep { lattice: l.clone(), re, im })
}

/// An oriented positive 2-plane, stored by an ordered basis.
#[derive(Debug)]
pub struct PeriodPoint {
    lattice: Arc<QuadLattice>,
    span: [AlgebraicVector; 2],
    plus_reference: OnceBox<Option<AlgebraicVector>>,
}

impl Clone for PeriodPoint {
    fn clone(&self) -> Self {
        PeriodPoint { lattice: self.lattice.clone(), span: self.span.clone(), plus_reference: OnceBox::new() }
    }
}

/// Component of the positive cone `{ν ∈ V⊥ : q(ν, ν) > 0}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConeComponent {
    Plus,
    Minus,
}

/// Labelling convention used for [`ConeComponent`]; reported with every
/// classification since no Kähler class is available to fix it.
pub const CONE_CONVENTION: &str =
    "PLUS contains the reference vector of V^perp compatible with the orientation of the lattice's reference positive subspace";

impl PeriodPoint {
    pub fn new(lattice: &Arc<QuadLattice>, v1: AlgebraicVector, v2: AlgebraicVector) -> Result<Self> {
        if v1.is_zero() || v2.is_zero() {
            if v1.len() == lattice.rank() && v2.len() == lattice.rank() {
                return Err(Error::ZeroVector);
            }
        }
        check_positive(lattice, &[&v1, &v2])?;
        Ok(PeriodPoint { lattice: lattice.clone(), span: [v1, v2], plus_reference: OnceBox::new() })
    }

    pub fn lattice(&self) -> &Arc<QuadLattice> {
        &self.lattice
    }

    pub fn span(&self) -> &[AlgebraicVector; 2] {
        &self.span
    }

    pub fn basis(&self) -> [&AlgebraicVector; 2] {
        [&self.span[0], &self.span[1]]
    }

    /// Same plane with the opposite orientation (the conjugate period point).
    pub fn reversed(&self) -> PeriodPoint {
        PeriodPoint {
            lattice: self.lattice.clone(),
            span: [self.span[1].clone(), self.span[0].clone()],
            plus_reference: OnceBox::new(),
        }
    }

    pub fn contains(&self, v: &AlgebraicVector) -> Result<bool> {
        let g = gram_matrix(&self.lattice, &self.basis())?;
        in_span(&self.lattice, &self.basis(), &g, v)
    }

    /// Equality as unoriented planes.
    pub fn same_plane(&self, other: &PeriodPoint) -> Result<bool> {
        if !same_lattice(&self.lattice, &other.lattice) {
            return Err(Error::LatticeMismatch);
        }
        let g = gram_matrix(&self.lattice, &self.basis())?;
        for w in other.basis() {
            if !in_span(&self.lattice, &self.basis(), &g, w)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Equality as oriented planes, i.e. as period points.
    pub fn same_point(&self, other: &PeriodPoint) -> Result<bool> {
        Ok(self.same_plane(other)? && orientation_sign(&self.lattice, &self.basis(), &other.basis())? > 0)
    }

    /// Integer vectors `x` with `q(x, v) = 0` for `v ∈ V`; these form the
    /// Néron–Severi lattice of the point.
    pub fn ns_lattice(&self) -> Result<Vec<Vec<BigInt>>> {
        let rows = kernel_rows(&self.span, &self.lattice)?;
        let int_rows: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| {
                let mut l = BigInt::one();
                for x in r {
                    l = l.lcm(x.denom());
                }
                r.iter().map(|x| x.numer() * (&l / x.denom())).collect()
            })
            .collect();
        let k = integer_kernel(&int_rows, self.lattice.rank());
        Ok(if k.is_empty() { k } else { hermite_rows(k) })
    }

    /// The reference vector defining [`ConeComponent::Plus`], if the
    /// lattice has at least 3 positive directions.
    ///
    /// Built from the lattice's stored positive basis `p₁, p₂, p₃`: with
    /// `rₖ = (q(vₖ, pᵢ))ᵢ` the vector `Σ (r₁ × r₂)ᵢ pᵢ` is orthogonal to `V`,
    /// positive, and `(v₁, v₂, ω)` projects to a positively oriented frame of
    /// `⟨p₁, p₂, p₃⟩`. Reversing the orientation of `V` flips it.
    pub fn plus_reference(&self) -> Option<&AlgebraicVector> {
        self.plus_reference
            .get_or_init(|| alloc::boxed::Box::new(compute_plus_reference(&self.lattice, &self.span)))
            .as_ref()
    }
}

fn compute_plus_reference(l: &QuadLattice, span: &[AlgebraicVector; 2]) -> Option<AlgebraicVector> {
    let pos = l.positive_basis();
    if pos.len() < 3 {
        return None;
    }
    let p: Vec<AlgebraicVector> = pos.iter().map(|b| AlgebraicVector::from_bigints(b)).collect();
    let row = |v: &AlgebraicVector, idx: [usize; 3]| -> [AlgebraicScalar; 3] {
        idx.map(|i| l.gram_eval(v, &p[i]).expect("lengths checked"))
    };
    // Σ (r₁ × r₂)ᵢ pᵢ over any triple is orthogonal to V; take the first nonzero one
    for a in 0..p.len() {
        for b in a + 1..p.len() {
            for c in b + 1..p.len() {
                let idx = [a, b, c];
                let w = cross(&row(&span[0], idx), &row(&span[1], idx));
                if w.iter().all(AlgebraicScalar::is_zero) {
                    continue;
                }
                return Some(AlgebraicVector::combination(&w, &[&p[a], &p[b], &p[c]]));
            }
        }
    }
    None
}

pub(crate) fn same_lattice(a: &Arc<QuadLattice>, b: &Arc<QuadLattice>) -> bool {
    Arc::ptr_eq(a, b) || a.gram() == b.gram()
}

pub fn line_to_plane(l: &LineRep) -> Result<PeriodPoint> {
    PeriodPoint::new(&l.lattice, l.re.clone(), l.im.clone())
}

/// Representative `v₁ + i·w` with `w ∈ V`, `q(w, v₁) = 0`, `q(w, w) = q(v₁, v₁)`
/// and `(v₁, w)` positively oriented.
///
/// Needs `√det` of the restricted Gram; the field is enlarged when that
/// determinant is rational, and [`Error::IrrationalRatio`] is returned otherwise.
pub fn plane_to_line(v: &PeriodPoint) -> Result<LineRep> {
    let l = &v.lattice;
    let [v1, v2] = v.basis();
    let g = gram_matrix(l, &[v1, v2])?;
    let det = &g[0][0] * &g[1][1] - &g[0][1] * &g[0][1];
    let det_q = det.to_rational().ok_or(Error::IrrationalRatio)?;
    // √(n/d) = √(n·d)/d
    let nd = (det_q.numer() * det_q.denom()).to_biguint().ok_or(Error::Positivity)?;
    let nd: u64 = nd.try_into().map_err(|_| Error::IrrationalRatio)?;
    let root = AlgebraicScalar::sqrt_int(nd)?.scale(&num_rational::BigRational::new(BigInt::one(), det_q.denom().clone()));
    // w = (q(v1,v1)/√det) · (v2 − q(v1,v2)/q(v1,v1) · v1) = (q(v1,v1) v2 − q(v1,v2) v1) / √det
    let numer = &v2.scale(&g[0][0]) - &v1.scale(&g[0][1]);
    let w = numer.scale(&root.inv().ok_or(Error::Degenerate)?);
    validate_line(l, v1.clone(), w)
}

/// Néron–Severi rank and a Hermite-reduced integer basis.
pub fn ns_rank(v: &PeriodPoint) -> Result<(usize, Vec<Vec<BigInt>>)> {
    let basis = v.ns_lattice()?;
    Ok((basis.len(), basis))
}

/// Classifies a positive `(1,1)`-vector into one of the two components of the
/// positive cone of `V⊥` (which has signature `(1, b₂ − 3)`).
pub fn cone_component(v: &PeriodPoint, nu: &AlgebraicVector) -> Result<ConeComponent> {
    let l = &v.lattice;
    if nu.len() != l.rank() {
        return Err(Error::DimensionMismatch { expected: l.rank(), found: nu.len() });
    }
    for b in v.basis() {
        if !l.gram_eval(nu, b)?.is_zero() {
            return Err(Error::NotOrthogonal);
        }
    }
    if l.norm(nu)?.signum() <= 0 {
        return Err(Error::NotPositive);
    }
    let r = v.plus_reference().ok_or(Error::InsufficientPositive(l.signature().0))?;
    match l.gram_eval(nu, r)?.signum() {
        1 => Ok(ConeComponent::Plus),
        -1 => Ok(ConeComponent::Minus),
        _ => Err(Error::NotPositive),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn l4() -> Arc<QuadLattice> {
        Arc::new(QuadLattice::diagonal(None, &[1, 1, 1, -1]).unwrap())
    }

    fn e(i: usize) -> AlgebraicVector {
        AlgebraicVector::unit(4, i)
    }

    fn bi(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn validate_examples() {
        let l = l4();
        assert!(validate_line(&l, e(0), e(1)).is_ok());
        assert_eq!(validate_line(&l, e(0), e(3)).unwrap_err(), Error::Isotropy);
        let iso = AlgebraicVector::from_ints(&[1, 0, 0, 1]);
        assert_eq!(validate_line(&l, iso, AlgebraicVector::zeros(4)).unwrap_err(), Error::Positivity);
        assert_eq!(validate_line(&l, AlgebraicVector::zeros(4), AlgebraicVector::zeros(4)).unwrap_err(), Error::ZeroVector);
    }

    #[test]
    fn line_plane_round_trip() {
        let l = l4();
        let line = validate_line(&l, e(0), e(1)).unwrap();
        let v = line_to_plane(&line).unwrap();
        let back = plane_to_line(&v).unwrap();
        assert_eq!((back.re(), back.im()), (&e(0), &e(1)));
        let rev = plane_to_line(&v.reversed()).unwrap();
        assert_eq!((rev.re(), rev.im()), (&e(1), &e(0)));
        assert!(rev.same_line(&line.conjugate()).unwrap());
        assert!(!rev.same_line(&line).unwrap());
    }

    #[test]
    fn plane_to_line_adjoins_root() {
        let l = l4();
        let v = PeriodPoint::new(&l, AlgebraicVector::from_ints(&[1, 0, 0, 0]), AlgebraicVector::from_ints(&[1, 1, 0, 0])).unwrap();
        let line = plane_to_line(&v).unwrap();
        assert!(line_to_plane(&line).unwrap().same_point(&v).unwrap());
        let v2 = PeriodPoint::new(&l, AlgebraicVector::from_ints(&[1, 0, 0, 0]), AlgebraicVector::from_ints(&[0, 2, 0, 0])).unwrap();
        assert!(plane_to_line(&v2).unwrap().same_line(&validate_line(&l, e(0), e(1)).unwrap()).unwrap());
    }

    #[test]
    fn ns_rank_examples() {
        let l = l4();
        let v = PeriodPoint::new(&l, e(0), e(1)).unwrap();
        let (r, b) = ns_rank(&v).unwrap();
        assert_eq!(r, 2);
        assert_eq!(b, vec![bi(&[0, 0, 1, 0]), bi(&[0, 0, 0, 1])]);
        let l5 = Arc::new(QuadLattice::diagonal(None, &[2, 2, 2, -2, -2]).unwrap());
        let r2 = AlgebraicScalar::sqrt_int(2).unwrap();
        let v2 = AlgebraicVector::new(vec![
            AlgebraicScalar::zero(),
            AlgebraicScalar::one(),
            r2,
            AlgebraicScalar::zero(),
            AlgebraicScalar::zero(),
        ]);
        let p = PeriodPoint::new(&l5, AlgebraicVector::unit(5, 0), v2).unwrap();
        let (r, b) = ns_rank(&p).unwrap();
        assert_eq!(r, 2);
        assert_eq!(b, vec![bi(&[0, 0, 0, 1, 0]), bi(&[0, 0, 0, 0, 1])]);
    }

    #[test]
    fn cone_examples() {
        let l = l4();
        let v = PeriodPoint::new(&l, e(0), e(1)).unwrap();
        assert_eq!(v.plus_reference().unwrap(), &e(2));
        assert_eq!(cone_component(&v, &e(2)).unwrap(), ConeComponent::Plus);
        assert_eq!(cone_component(&v, &(-&e(2))).unwrap(), ConeComponent::Minus);
        assert_eq!(cone_component(&v, &e(3)).unwrap_err(), Error::NotPositive);
        assert_eq!(cone_component(&v, &e(0)).unwrap_err(), Error::NotOrthogonal);
        // reversing V flips the labelling
        assert_eq!(cone_component(&v.reversed(), &e(2)).unwrap(), ConeComponent::Minus);
    }

    #[test]
    fn rejects_non_positive_planes() {
        let l = l4();
        assert_eq!(PeriodPoint::new(&l, e(0), e(3)).unwrap_err(), Error::NotPositive);
        assert_eq!(PeriodPoint::new(&l, e(0), e(0)).unwrap_err(), Error::NotPositive);
        assert_eq!(PeriodPoint::new(&l, e(0), AlgebraicVector::zeros(4)).unwrap_err(), Error::ZeroVector);
    }
}
