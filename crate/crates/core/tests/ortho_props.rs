use std::sync::Arc;

use hk_core::lattice::catalog_lookup;
use hk_core::ortho::{apply_word, search_isometries, Isometry, ReflectionWord};
use hk_core::period::{ns_rank, PeriodPoint};
use hk_core::ortho::act_on_period;
use hk_core::{AlgebraicVector, QuadLattice};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_root(l: &QuadLattice, rng: &mut ChaCha8Rng, norm: i64) -> Vec<BigInt> {
    // v = w + e + k·f with (e, f) the first hyperbolic plane and w in its complement
    let n = l.rank();
    loop {
        let mut v: Vec<BigInt> = vec![BigInt::from(0); n];
        for x in v.iter_mut().skip(2) {
            *x = BigInt::from(rng.gen_range(-2i64..=2));
        }
        let qw = l.eval_int(&v, &v);
        let diff = BigInt::from(norm) - qw;
        if &diff % 2 != BigInt::from(0) {
            continue;
        }
        v[0] = BigInt::from(1);
        v[1] = diff / 2;
        assert_eq!(l.eval_int(&v, &v), BigInt::from(norm));
        return v;
    }
}

#[test]
fn reflection_words_on_k3_3() {
    let l = Arc::new(catalog_lookup("K3n", Some(3)).unwrap());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..20 {
        let factors: Vec<Vec<BigInt>> = (0..10).map(|i| random_root(&l, &mut rng, if i % 2 == 0 { 2 } else { -2 })).collect();
        let w = ReflectionWord::new(&l, factors).unwrap();
        let a = apply_word(&l, &w).unwrap();
        assert!(hk_core::ortho::is_isometry(&l, a.matrix()).unwrap());
        assert!(a.is_plus());
    }
}

#[test]
fn spinorial_norm_is_multiplicative_on_small_groups() {
    let u = Arc::new(catalog_lookup("U", None).unwrap());
    let d = Arc::new(QuadLattice::diagonal(None, &[2, -2]).unwrap());
    let su = search_isometries(&u, 1).unwrap();
    let sd = search_isometries(&d, 1).unwrap();
    let all: Vec<Isometry> = su.iter().flat_map(|a| sd.iter().map(move |b| a.block_diagonal(b))).collect();
    assert_eq!(all.len(), 16);
    for a in &all {
        for b in &all {
            let ab = a.compose(b).unwrap();
            assert_eq!(ab.spinorial_norm(), a.spinorial_norm() * b.spinorial_norm());
        }
    }
    let spins: Vec<i32> = all.iter().map(Isometry::spinorial_norm).collect();
    assert!(spins.contains(&1) && spins.contains(&-1));
}

#[test]
fn search_output_is_a_group_slice() {
    let l = Arc::new(QuadLattice::new(None, vec![vec![2, 1], vec![1, -2]]).unwrap());
    let s = search_isometries(&l, 2).unwrap();
    assert!(s.iter().any(Isometry::is_identity));
    for a in &s {
        assert!(s.contains(&a.inverse()));
    }
}

#[test]
fn integer_isometries_preserve_ns_rank() {
    let l = Arc::new(QuadLattice::diagonal(None, &[1, 1, 1, -2, -2]).unwrap());
    let roots: Vec<Vec<BigInt>> =
        [[1, 1, 0, 0, 0], [0, 1, -1, 0, 0], [0, 0, 0, 1, 0], [0, 0, 0, 0, 1], [1, 0, 1, 0, 0], [1, 1, 0, 1, 1]]
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
    let planes = [
        ([1, 0, 0, 0, 0], [0, 2, 1, 1, 0]),
        ([2, 1, 0, 1, 0], [0, 0, 3, 0, 1]),
        ([1, 1, 1, 0, 0], [1, -1, 0, 0, 0]),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (a, b) in planes {
        let v = PeriodPoint::new(&l, AlgebraicVector::from_ints(&a), AlgebraicVector::from_ints(&b)).unwrap();
        for _ in 0..10 {
            let word: Vec<Vec<BigInt>> = (0..4).map(|_| roots[rng.gen_range(0..roots.len())].clone()).collect();
            let w = apply_word(&l, &ReflectionWord::new(&l, word).unwrap()).unwrap();
            let image = act_on_period(&w, &v).unwrap();
            assert_eq!(ns_rank(&image).unwrap().0, ns_rank(&v).unwrap().0);
        }
    }
}
