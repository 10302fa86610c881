use std::sync::Arc;

use hk_core::ghk::{extend_positive, generic_line_through, generic_vector_in, sphere_point, HKLine};
use hk_core::period::PeriodPoint;
use hk_core::subspace::check_positive;
use hk_core::subtwistor::AuxMetric;
use hk_core::{AlgebraicScalar, AlgebraicVector, Error, QuadLattice};
use proptest::prelude::*;

fn l6() -> Arc<QuadLattice> {
    Arc::new(QuadLattice::diagonal(None, &[1, 1, 1, -1, -1, -1]).unwrap())
}

fn ints6() -> impl Strategy<Value = Vec<i64>> {
    (prop::collection::vec(-3i64..=3, 3), prop::collection::vec(-1i64..=1, 3)).prop_map(|(mut p, n)| {
        p.extend(n);
        p
    })
}

fn vecs(v: &[Vec<i64>]) -> Vec<AlgebraicVector> {
    v.iter().map(|x| AlgebraicVector::from_ints(x)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extension_stays_positive(w in prop::collection::vec(ints6(), 3), wp in prop::collection::vec(ints6(), 1..=2)) {
        let l = l6();
        let w = vecs(&w);
        let wp = vecs(&wp);
        let wr: Vec<&AlgebraicVector> = w.iter().collect();
        let wpr: Vec<&AlgebraicVector> = wp.iter().collect();
        prop_assume!(check_positive(&l, &wr).is_ok() && check_positive(&l, &wpr).is_ok());
        let b = extend_positive(&l, &wr, &wpr).unwrap();
        let mut ext = vec![&b];
        ext.extend(wpr.iter().copied());
        // b joins Wp positively unless it already lies in Wp
        if check_positive(&l, &ext).is_err() {
            let mut dep = wpr.clone();
            dep.push(&b);
            prop_assert!(hk_core::subspace::small_rank(&dep) == wpr.len());
        }
    }

    #[test]
    fn antipodal_sphere_points_are_conjugate(a in ints6(), b in ints6(), c in prop::collection::vec(-3i64..=3, 3), seed in 0u64..50) {
        let l = l6();
        let v = PeriodPoint::new(&l, AlgebraicVector::from_ints(&a), AlgebraicVector::from_ints(&b));
        prop_assume!(v.is_ok());
        prop_assume!(c.iter().any(|&x| x != 0));
        let w = generic_line_through(&v.unwrap(), seed).unwrap();
        let coeffs: Vec<AlgebraicScalar> = c.iter().map(|&x| AlgebraicScalar::from_int(x)).collect();
        let n = AlgebraicVector::combination(&coeffs, &w.basis());
        let g = AuxMetric::identity(6);
        let p = sphere_point(&w, &n, &g).unwrap();
        let q = sphere_point(&w, &-&n, &g).unwrap();
        prop_assert!(p.same_plane(&q).unwrap());
        prop_assert!(p.same_point(&q.reversed()).unwrap());
        prop_assert!(!p.same_point(&q).unwrap());
    }

    #[test]
    fn rational_planes_admit_no_generic_vector(w in prop::collection::vec(ints6(), 3), seed in 0u64..1000) {
        let l = l6();
        let w = vecs(&w);
        let line = HKLine::new(&l, [w[0].clone(), w[1].clone(), w[2].clone()]);
        prop_assume!(line.is_ok());
        let line = line.unwrap();
        prop_assert!(!line.is_generic());
        prop_assert_eq!(generic_vector_in(&line, seed).unwrap_err(), Error::NotGeneric);
    }
}
