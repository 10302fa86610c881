use hk_core::lattice::{catalog_lookup, direct_sum, fujiki_value, signature};
use hk_core::{AlgebraicVector, FujikiData, QuadLattice};
use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

/// Signature from floating eigenvalues, an independent oracle.
fn eigen_signature(g: &[Vec<i64>]) -> (usize, usize) {
    let n = g.len();
    let m = DMatrix::from_fn(n, n, |i, j| g[i][j] as f64);
    let ev = m.symmetric_eigen().eigenvalues;
    (ev.iter().filter(|x| **x > 0.0).count(), ev.iter().filter(|x| **x < 0.0).count())
}

fn symmetric(n: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(-4i64..=4, n * n).prop_map(move |v| {
        let mut g = vec![vec![0; n]; n];
        for i in 0..n {
            for j in i..n {
                g[i][j] = v[i * n + j];
                g[j][i] = v[i * n + j];
            }
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn signature_matches_eigenvalues(g in (1usize..=6).prop_flat_map(symmetric)) {
        match signature(&g) {
            Ok(s) => prop_assert_eq!(s, eigen_signature(&g)),
            Err(_) => {
                let n = g.len();
                let det = DMatrix::from_fn(n, n, |i, j| g[i][j] as f64).determinant();
                prop_assert!(det.abs() < 0.5);
            }
        }
    }

    #[test]
    fn signatures_add(a in (1usize..=4).prop_flat_map(symmetric), b in (1usize..=4).prop_flat_map(symmetric)) {
        if let (Ok(la), Ok(lb)) = (QuadLattice::new(None, a), QuadLattice::new(None, b)) {
            let s = direct_sum(&la, &lb).signature();
            prop_assert_eq!(s, (la.signature().0 + lb.signature().0, la.signature().1 + lb.signature().1));
        }
    }

    #[test]
    fn gram_eval_is_symmetric(x in prop::collection::vec(-5i64..=5, 4), y in prop::collection::vec(-5i64..=5, 4)) {
        let l = QuadLattice::new(None, vec![vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, -2, 1], vec![0, 0, 1, 2]]).unwrap();
        let (x, y) = (AlgebraicVector::from_ints(&x), AlgebraicVector::from_ints(&y));
        prop_assert_eq!(l.gram_eval(&x, &y).unwrap(), l.gram_eval(&y, &x).unwrap());
    }

    #[test]
    fn fujiki_signs(eta in prop::collection::vec(-3i64..=3, 3), c in -5i64..=5, n in 1u32..=4) {
        prop_assume!(c != 0);
        let l = QuadLattice::diagonal(None, &[2, -2, 2]).unwrap();
        let eta = AlgebraicVector::from_ints(&eta);
        let f = FujikiData::new(BigRational::from_integer(BigInt::from(c)), n).unwrap();
        let g = FujikiData::new(BigRational::from_integer(BigInt::from(-c)), n).unwrap();
        let v = fujiki_value(&l, &eta, &f).unwrap();
        prop_assert_eq!(fujiki_value(&l, &(-&eta), &f).unwrap(), v.clone());
        if n % 2 == 1 {
            prop_assert_eq!(fujiki_value(&l, &eta, &g).unwrap(), -v);
        }
    }
}

#[test]
fn catalog_against_oracle() {
    for (key, param, sig) in [
        ("K3", None, (3, 19)),
        ("K3n", Some(2), (3, 20)),
        ("K3n", Some(3), (3, 20)),
        ("K3n", Some(5), (3, 20)),
        ("Kummer", Some(2), (3, 4)),
        ("U", None, (1, 1)),
        ("E8neg", None, (0, 8)),
    ] {
        let l = catalog_lookup(key, param).unwrap();
        assert_eq!(l.signature(), sig, "{key}");
        assert_eq!(eigen_signature(l.gram()), sig, "{key}");
        assert!(l.is_even());
    }
}
