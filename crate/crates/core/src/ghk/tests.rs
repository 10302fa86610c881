use super::*;
use alloc::vec;

use crate::period::{ns_rank, validate_line};
use crate::subtwistor::validate_chain;

fn diag(d: &[i64]) -> Arc<QuadLattice> {
    Arc::new(QuadLattice::diagonal(None, d).unwrap())
}

fn e(n: usize, i: usize) -> AlgebraicVector {
    AlgebraicVector::unit(n, i)
}

fn sqrt(n: u64) -> AlgebraicScalar {
    AlgebraicScalar::sqrt_int(n).unwrap()
}

fn int(n: i64) -> AlgebraicScalar {
    AlgebraicScalar::from_int(n)
}

fn generic_w() -> HKLine {
    let l = diag(&[1, 1, 1, -1]);
    let w3 = AlgebraicVector::new(vec![int(0), int(0), sqrt(2), int(1)]);
    HKLine::new(&l, [e(4, 0), e(4, 1), w3]).unwrap()
}

#[test]
fn genericity_examples() {
    let w = generic_w();
    assert_eq!(w.cached_genericity(), None);
    assert!(w.is_generic());
    assert_eq!(w.cached_genericity(), Some(true));

    let l = diag(&[1, 1, 1, -1]);
    let rational = HKLine::new(&l, [e(4, 0), e(4, 1), e(4, 2)]).unwrap();
    assert!(!rational.is_generic());
    match rational.genericity() {
        Genericity::NotGeneric(k) => assert_eq!(k.len(), 1),
        Genericity::Generic => panic!("rational plane reported generic"),
    }
}

#[test]
fn incident_examples() {
    let l = diag(&[1, 1, 1, -1]);
    let vx = PeriodPoint::new(&l, e(4, 0), e(4, 1)).unwrap();
    let vy = PeriodPoint::new(&l, e(4, 1), e(4, 2)).unwrap();
    let w = incident(&vx, &vy).unwrap().unwrap();
    let expected = HKLine::new(&l, [e(4, 0), e(4, 1), e(4, 2)]).unwrap();
    assert!(w.same_space(&expected).unwrap());

    let l5 = diag(&[1, 1, 1, 1, -1]);
    let a = PeriodPoint::new(&l5, e(5, 0), e(5, 1)).unwrap();
    let b = PeriodPoint::new(&l5, e(5, 2), e(5, 3)).unwrap();
    assert!(incident(&a, &b).unwrap().is_none());
    assert_eq!(incident(&vx, &vx.reversed()).unwrap_err(), Error::SamePoint);
}

#[test]
fn extend_positive_examples() {
    let l = diag(&[1, 1, 1, 1, -1]);
    let w = [e(5, 0), e(5, 1), e(5, 2)];
    let wr: Vec<&AlgebraicVector> = w.iter().collect();
    assert_eq!(extend_positive(&l, &wr, &[&e(5, 3)]).unwrap(), e(5, 0));
    assert_eq!(extend_positive(&l, &wr, &[&e(5, 1)]).unwrap(), e(5, 1));
    assert_eq!(extend_positive(&l, &wr, &[&e(5, 4)]).unwrap_err(), Error::NotPositive);

    let wp = AlgebraicVector::from_ints(&[1, 1, 0, 1, 0]);
    let b = extend_positive(&l, &wr, &[&wp]).unwrap();
    check_positive(&l, &[&b, &wp]).unwrap();
}

#[test]
fn generic_vector_examples() {
    let w = generic_w();
    let l = w.lattice().clone();
    // the hand-built witness
    let a = AlgebraicVector::combination(&[int(1), sqrt(2), sqrt(3)], &w.basis());
    assert!(rational_kernel(core::slice::from_ref(&a), &l).unwrap().is_empty());

    let g1 = generic_vector_in(&w, 11).unwrap();
    let g2 = generic_vector_in(&w, 11).unwrap();
    assert_eq!(g1, g2);
    assert!(w.contains(&g1).unwrap());
    assert!(rational_kernel(core::slice::from_ref(&g1), &l).unwrap().is_empty());
    assert!(l.norm(&g1).unwrap().signum() > 0);

    let rational = HKLine::new(&l, [e(4, 0), e(4, 1), e(4, 2)]).unwrap();
    assert_eq!(generic_vector_in(&rational, 0).unwrap_err(), Error::NotGeneric);
}

#[test]
fn hk_line_through_examples() {
    let l = diag(&[1, 1, 1, -1]);
    let v = PeriodPoint::new(&l, e(4, 0), e(4, 1)).unwrap();
    let w = hk_line_through(&v, &e(4, 2)).unwrap();
    assert!(!w.is_generic());
    assert_eq!(hk_line_through(&v, &e(4, 3)).unwrap_err(), Error::NotPositive);
    assert_eq!(hk_line_through(&v, &AlgebraicVector::from_ints(&[1, 0, 1, 0])).unwrap_err(), Error::NotOrthogonal);
    let omega = AlgebraicVector::new(vec![int(0), int(0), sqrt(2), int(1)]);
    assert!(hk_line_through(&v, &omega).unwrap().is_generic());
}

#[test]
fn sphere_point_examples() {
    let l = diag(&[1, 1, 1, -1]);
    let w = HKLine::new(&l, [e(4, 0), e(4, 1), e(4, 2)]).unwrap();
    let g = AuxMetric::identity(4);
    let v12 = PeriodPoint::new(&l, e(4, 0), e(4, 1)).unwrap();
    let p = sphere_point(&w, &e(4, 2), &g).unwrap();
    assert!(p.same_point(&v12).unwrap());
    let m = sphere_point(&w, &-&e(4, 2), &g).unwrap();
    assert!(m.same_point(&v12.reversed()).unwrap());
    let v23 = PeriodPoint::new(&l, e(4, 1), e(4, 2)).unwrap();
    assert!(sphere_point(&w, &e(4, 0), &g).unwrap().same_point(&v23).unwrap());
    assert_eq!(sphere_point(&w, &e(4, 3), &g).unwrap_err(), Error::NotInSubspace);
}

#[test]
fn sphere_points_of_generic_line_have_trivial_ns() {
    let w = generic_w();
    let g = AuxMetric::identity(4);
    let n = AlgebraicVector::combination(&[int(1), sqrt(3), sqrt(5)], &w.basis());
    let p = sphere_point(&w, &n, &g).unwrap();
    assert!(w.contains_plane(&p).unwrap());
    assert_eq!(ns_rank(&p).unwrap().0, 0);
}

#[test]
fn normalize_triple_examples() {
    let l = diag(&[1, 1, 1, -1]);
    let line = validate_line(&l, e(4, 0), e(4, 1)).unwrap();
    let t = normalize_triple(&line, &e(4, 2).scale_rational(&BigRational::from_integer(2.into()))).unwrap();
    assert_eq!(t.kahler, e(4, 2));
    let t = normalize_triple(&line, &e(4, 2)).unwrap();
    assert_eq!(t.kahler, e(4, 2));

    let two = AlgebraicVector::from_ints(&[1, 1, 0, 0]);
    let line2 = validate_line(&l, two.clone(), AlgebraicVector::from_ints(&[1, -1, 0, 0])).unwrap();
    let t = normalize_triple(&line2, &e(4, 2)).unwrap();
    assert_eq!(t.kahler, AlgebraicVector::new(vec![int(0), int(0), sqrt(2), int(0)]));
    assert_eq!(l.norm(&t.kahler).unwrap(), l.norm(&two).unwrap());

    assert_eq!(normalize_triple(&line, &e(4, 3)).unwrap_err(), Error::NotPositive);
    assert_eq!(normalize_triple(&line, &e(4, 0)).unwrap_err(), Error::NotOrthogonal);
}

#[test]
fn connect_examples() {
    let l = diag(&[1, 1, 1, -1, -1, -1]);
    let vx = PeriodPoint::new(&l, e(6, 0), AlgebraicVector::from_ints(&[0, 1, 0, 1, 0, 0])).unwrap_err();
    assert_eq!(vx, Error::NotPositive);

    let vx = PeriodPoint::new(&l, AlgebraicVector::from_ints(&[2, 0, 0, 1, 0, 0]), AlgebraicVector::from_ints(&[0, 3, 1, 0, 1, 1])).unwrap();
    let vy = PeriodPoint::new(&l, AlgebraicVector::from_ints(&[0, 1, 2, 0, 0, 1]), AlgebraicVector::from_ints(&[3, 0, 1, 1, 1, 0])).unwrap();

    let empty = connect_chain(&vx, &vx, 1).unwrap();
    assert!(empty.is_empty());
    assert!(validate_chain(&empty).is_valid());

    let c = connect_chain(&vx, &vy, 7).unwrap();
    assert!(c.len() <= 4);
    assert!(validate_chain(&c).is_valid());
    let again = connect_chain(&vx, &vy, 7).unwrap();
    assert_eq!(c.lines()[1].span(), again.lines()[1].span());

    let rev = connect_chain(&vx, &vx.reversed(), 3).unwrap();
    assert_eq!(rev.len(), 1);
    assert!(validate_chain(&rev).is_valid());
}

#[test]
fn connect_needs_three_positive_directions() {
    let l = diag(&[1, 1, -1, -1]);
    let vx = PeriodPoint::new(&l, e(4, 0), e(4, 1)).unwrap();
    let vy = PeriodPoint::new(&l, AlgebraicVector::from_ints(&[1, 0, 0, 0]), AlgebraicVector::from_ints(&[0, 2, 1, 0])).unwrap();
    assert_eq!(connect_chain(&vx, &vy, 0).unwrap_err(), Error::InsufficientPositive(2));
}
