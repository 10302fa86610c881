use super::*;
use alloc::sync::Arc;

use crate::ghk::{connect_chain, generic_line_through, sphere_point};

const PI: f64 = core::f64::consts::PI;

fn diag(d: &[i64]) -> Arc<QuadLattice> {
    Arc::new(QuadLattice::diagonal(None, d).unwrap())
}

fn e(n: usize, i: usize) -> AlgebraicVector {
    AlgebraicVector::unit(n, i)
}

#[test]
fn fs_distance_examples() {
    let l = diag(&[1, 1, 1, -1]);
    let w = HKLine::new(&l, [e(4, 0), e(4, 1), e(4, 2)]).unwrap();
    let g = AuxMetric::identity(4);
    let v1 = PeriodPoint::new(&l, e(4, 0), e(4, 1)).unwrap();
    let v2 = PeriodPoint::new(&l, e(4, 0), e(4, 2)).unwrap();
    assert!((fs_distance(&w, &v1, &v2, &g).unwrap() - PI / 2.0).abs() < 1e-15);
    assert_eq!(fs_distance(&w, &v1, &v1, &g).unwrap(), 0.0);
    assert!((fs_distance(&w, &v1, &v1.reversed(), &g).unwrap() - PI).abs() < 1e-15);
    let out = PeriodPoint::new(&l, e(4, 0), AlgebraicVector::from_ints(&[0, 2, 0, 1])).unwrap();
    assert_eq!(fs_distance(&w, &v1, &out, &g).unwrap_err(), Error::NotInSubspace);
}

#[test]
fn dg_lower_examples() {
    let l = diag(&[1, 1, 1, -1]);
    let g = AuxMetric::identity(4);
    let v1 = PeriodPoint::new(&l, e(4, 0), e(4, 1)).unwrap();
    let v2 = PeriodPoint::new(&l, e(4, 0), e(4, 2)).unwrap();
    assert!((dg_lower(&v1, &v2, &g).unwrap() - PI / 2.0).abs() < 1e-15);
    assert_eq!(dg_lower(&v1, &v1, &g).unwrap(), 0.0);
    assert!((dg_lower(&v1, &v1.reversed(), &g).unwrap() - PI).abs() < 1e-15);
}

#[test]
fn metric_validation() {
    assert_eq!(AuxMetric::new(alloc::vec![alloc::vec![1.0, 2.0], alloc::vec![2.0, 1.0]]).unwrap_err(), Error::InvalidMetric);
    assert_eq!(AuxMetric::new(alloc::vec![alloc::vec![1.0, 0.5], alloc::vec![0.0, 1.0]]).unwrap_err(), Error::InvalidMetric);
    let g = AuxMetric::new(alloc::vec![alloc::vec![2.0, 0.5], alloc::vec![0.5, 1.0]]).unwrap();
    assert!((g.inner(&[1.0, 1.0], &[1.0, -1.0]) - 1.0).abs() < 1e-15);
    let x = AlgebraicVector::from_ints(&[1, 1]);
    let y = AlgebraicVector::from_ints(&[1, -1]);
    assert_eq!(g.inner_exact(&x, &y).unwrap(), AlgebraicScalar::from_int(1));
}

#[test]
fn same_sphere_bounds_agree() {
    let l = diag(&[1, 1, 1, -1, -1]);
    let v = PeriodPoint::new(&l, AlgebraicVector::from_ints(&[2, 0, 0, 1, 0]), AlgebraicVector::from_ints(&[0, 2, 0, 0, 1])).unwrap();
    let w = generic_line_through(&v, 5).unwrap();
    let g = AuxMetric::new(
        (0..5).map(|i| (0..5).map(|j| if i == j { 2.0 } else if i + 1 == j || j + 1 == i { 0.25 } else { 0.0 }).collect()).collect(),
    )
    .unwrap();
    let n1 = AlgebraicVector::combination(&[AlgebraicScalar::from_int(1), AlgebraicScalar::from_int(2), AlgebraicScalar::from_int(-1)], &w.basis());
    let n2 = AlgebraicVector::combination(&[AlgebraicScalar::from_int(-3), AlgebraicScalar::from_int(1), AlgebraicScalar::from_int(2)], &w.basis());
    let p = sphere_point(&w, &n1, &g).unwrap();
    let q = sphere_point(&w, &n2, &g).unwrap();
    let fs = fs_distance(&w, &p, &q, &g).unwrap();
    let dg = dg_lower(&p, &q, &g).unwrap();
    assert!((fs - dg).abs() < 1e-9, "{fs} vs {dg}");
    let r = dtw_upper(&p, &q, &g, &DtwOptions { seed: 1, restarts: 1, iters: 4 }).unwrap();
    assert!(r.upper <= fs + 1e-6);
    assert!(r.upper >= r.lower - 1e-9);
}

#[test]
fn chain_validation_clauses() {
    let l = diag(&[1, 1, 1, -1, -1, -1]);
    let vx = PeriodPoint::new(&l, AlgebraicVector::from_ints(&[2, 0, 0, 1, 0, 0]), AlgebraicVector::from_ints(&[0, 3, 1, 0, 1, 1])).unwrap();
    let vy = PeriodPoint::new(&l, AlgebraicVector::from_ints(&[0, 1, 2, 0, 0, 1]), AlgebraicVector::from_ints(&[3, 0, 1, 1, 1, 0])).unwrap();
    let c = connect_chain(&vx, &vy, 2).unwrap();
    assert!(validate_chain(&c).is_valid());
    let g = AuxMetric::identity(6);
    let len = chain_length(&c, &g).unwrap();
    assert!(len >= dg_lower(&vx, &vy, &g).unwrap() - 1e-9);

    // junction of the first line moved off the second line
    let mut j = c.junctions().to_vec();
    j[0] = c.endpoints()[0].clone();
    let bad = SubtwistorChain::new(c.lines().to_vec(), j, c.endpoints().clone());
    assert_eq!(validate_chain(&bad).clause, Some("junction membership"));

    let rational = HKLine::new(&l, [e(6, 0), e(6, 1), e(6, 2)]).unwrap();
    let p = PeriodPoint::new(&l, e(6, 0), e(6, 1)).unwrap();
    let q = PeriodPoint::new(&l, e(6, 1), e(6, 2)).unwrap();
    let nongeneric = SubtwistorChain::new(alloc::vec![rational], alloc::vec![], [p, q]);
    assert_eq!(validate_chain(&nongeneric).clause, Some("genericity"));
    assert_eq!(chain_length(&nongeneric, &g).unwrap_err(), Error::InvalidChain("genericity"));

    let short = SubtwistorChain::new(c.lines().to_vec(), alloc::vec![], c.endpoints().clone());
    assert_eq!(validate_chain(&short).clause, Some("structure"));
}

#[test]
fn concatenation_adds_lengths() {
    let l = diag(&[1, 1, 1, -1, -1, -1]);
    let x = PeriodPoint::new(&l, AlgebraicVector::from_ints(&[2, 0, 0, 1, 0, 0]), AlgebraicVector::from_ints(&[0, 3, 1, 0, 1, 1])).unwrap();
    let m = PeriodPoint::new(&l, AlgebraicVector::from_ints(&[1, 1, 0, 0, 1, 0]), AlgebraicVector::from_ints(&[0, 0, 2, 1, 0, 0])).unwrap();
    let y = PeriodPoint::new(&l, AlgebraicVector::from_ints(&[0, 1, 2, 0, 0, 1]), AlgebraicVector::from_ints(&[3, 0, 1, 1, 1, 0])).unwrap();
    let g = AuxMetric::identity(6);
    let c1 = connect_chain(&x, &m, 1).unwrap();
    let c2 = connect_chain(&m, &y, 2).unwrap();
    let c = c1.concat(&c2).unwrap();
    assert!(validate_chain(&c).is_valid());
    let total = chain_length(&c, &g).unwrap();
    assert!((total - chain_length(&c1, &g).unwrap() - chain_length(&c2, &g).unwrap()).abs() < 1e-12);

    let opts = DtwOptions { seed: 0, restarts: 1, iters: 3 };
    let r = dtw_upper_with(&x, &y, &g, &opts, &[c.clone()]).unwrap();
    assert!(r.upper <= total + 1e-12);
}

#[test]
fn dtw_equal_points_is_zero() {
    let l = diag(&[1, 1, 1, -1]);
    let v = PeriodPoint::new(&l, e(4, 0), e(4, 1)).unwrap();
    let r = dtw_upper(&v, &v, &AuxMetric::identity(4), &DtwOptions::default()).unwrap();
    assert_eq!(r.upper, 0.0);
    assert!(r.chain.is_empty());
}
