use std::sync::Arc;

use hk_core::ghk::generic_line_through;
use hk_core::period::{cone_component, line_to_plane, ns_rank, plane_to_line, validate_line, PeriodPoint};
use hk_core::{AlgebraicScalar, AlgebraicVector, QuadLattice};
use proptest::prelude::*;

fn l6() -> Arc<QuadLattice> {
    Arc::new(QuadLattice::diagonal(None, &[1, 1, 1, -1, -1, -1]).unwrap())
}

fn plane(l: &Arc<QuadLattice>, a: &[i64], b: &[i64]) -> Option<PeriodPoint> {
    PeriodPoint::new(l, AlgebraicVector::from_ints(a), AlgebraicVector::from_ints(b)).ok()
}

/// Positive coordinates larger than negative ones, so most pairs span a
/// positive plane.
fn ints6() -> impl Strategy<Value = Vec<i64>> {
    (prop::collection::vec(-3i64..=3, 3), prop::collection::vec(-1i64..=1, 3)).prop_map(|(mut p, n)| {
        p.extend(n);
        p
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn line_plane_round_trip(a in ints6(), b in ints6()) {
        let l = l6();
        let Some(v) = plane(&l, &a, &b) else { return Ok(()) };
        let Ok(line) = plane_to_line(&v) else { return Ok(()) };
        prop_assert!(validate_line(&l, line.re().clone(), line.im().clone()).is_ok());
        let back = line_to_plane(&line).unwrap();
        prop_assert!(back.same_point(&v).unwrap());
        let again = plane_to_line(&back).unwrap();
        prop_assert!(again.same_line(&line).unwrap());
        prop_assert!(plane_to_line(&v.reversed()).unwrap().same_line(&line.conjugate()).unwrap());
    }

    #[test]
    fn ns_rank_ignores_oriented_basis_change(a in ints6(), b in ints6(), s in 1i64..4, t in -3i64..4) {
        let l = l6();
        let Some(v) = plane(&l, &a, &b) else { return Ok(()) };
        // (a, b) ↦ (s·a, t·a + b) keeps the oriented plane
        let a2: Vec<i64> = a.iter().map(|x| s * x).collect();
        let b2: Vec<i64> = a.iter().zip(&b).map(|(x, y)| t * x + y).collect();
        let w = plane(&l, &a2, &b2).unwrap();
        prop_assert!(w.same_point(&v).unwrap());
        prop_assert_eq!(ns_rank(&v).unwrap(), ns_rank(&w).unwrap());
    }

    #[test]
    fn cone_components_follow_pairing(a in ints6(), b in ints6(), c in ints6(), d in ints6()) {
        let l = l6();
        let Some(v) = plane(&l, &a, &b) else { return Ok(()) };
        let (n1, n2) = (AlgebraicVector::from_ints(&c), AlgebraicVector::from_ints(&d));
        let proj = |n: &AlgebraicVector| -> Option<AlgebraicVector> {
            let g = hk_core::subspace::gram_matrix(&l, &v.basis()).unwrap();
            let p = hk_core::subspace::reject_from(&l, &v.basis(), &g, n).unwrap();
            (l.norm(&p).unwrap().signum() > 0).then_some(p)
        };
        let (Some(p1), Some(p2)) = (proj(&n1), proj(&n2)) else { return Ok(()) };
        let same = cone_component(&v, &p1).unwrap() == cone_component(&v, &p2).unwrap();
        prop_assert_eq!(same, l.gram_eval(&p1, &p2).unwrap().signum() > 0);
    }
}

#[test]
fn trivial_ns_gives_generic_lines() {
    let l = l6();
    let r2 = AlgebraicScalar::sqrt_int(2).unwrap();
    let r3 = AlgebraicScalar::sqrt_int(3).unwrap();
    let one = AlgebraicScalar::one;
    let zero = AlgebraicScalar::zero;
    let v1 = AlgebraicVector::new(vec![r2.clone() + one(), zero(), r3.clone(), one(), zero(), zero()]);
    let v2 = AlgebraicVector::new(vec![zero(), r3.clone() + r2.clone(), one(), zero(), r2.clone(), one()]);
    let v = PeriodPoint::new(&l, v1, v2).unwrap();
    assert_eq!(ns_rank(&v).unwrap().0, 0);
    for seed in 0..5 {
        assert!(generic_line_through(&v, seed).unwrap().is_generic());
    }
}
