//! Standard lattices shipped as reference data.
//!
//! The K3^[n] and generalized Kummer lattices are transcriptions of the usual
//! shapes `U³ ⊕ E8(−1)² ⊕ ⟨−2(n−1)⟩` and `U³ ⊕ ⟨−2(n+1)⟩`. They are checked
//! for evenness, rank and signature, never trusted blindly.

use alloc::format;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use super::QuadLattice;
use crate::error::{Error, Result};

pub const CATALOG_KEYS: &[&str] = &["U", "E8neg", "K3", "K3n", "Kummer", "rank1"];

/// The hyperbolic plane `U`, Gram `[[0,1],[1,0]]`.
pub fn hyperbolic_plane() -> QuadLattice {
    QuadLattice::new(Some("U".to_string()), vec![vec![0, 1], vec![1, 0]]).expect("U is non-degenerate")
}

/// `E8(−1)`: the negated Cartan matrix of E8 (Bourbaki labelling, node 2
/// attached to node 4).
pub fn e8_negative() -> QuadLattice {
    let edges = [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)];
    let mut g = vec![vec![0i64; 8]; 8];
    for (i, row) in g.iter_mut().enumerate() {
        row[i] = -2;
    }
    for (a, b) in edges {
        g[a - 1][b - 1] = 1;
        g[b - 1][a - 1] = 1;
    }
    QuadLattice::new(Some("E8neg".to_string()), g).expect("E8 is non-degenerate")
}

fn k3() -> QuadLattice {
    let u = hyperbolic_plane();
    let e = e8_negative();
    u.direct_sum(&u).direct_sum(&u).direct_sum(&e).direct_sum(&e).with_name("K3")
}

fn rank_one(k: i64) -> QuadLattice {
    QuadLattice::new(Some(format!("<{k}>")), vec![vec![k]]).expect("nonzero rank one form")
}

/// Looks up a catalog lattice. `"K3n"` and `"Kummer"` take `n ≥ 2`,
/// `"rank1"` takes an even nonzero integer.
pub fn catalog_lookup(key: &str, param: Option<i64>) -> Result<QuadLattice> {
    let need_n = |p: Option<i64>| -> Result<i64> {
        match p {
            Some(n) if n >= 2 => Ok(n),
            Some(n) => Err(Error::InvalidParameter(format!("{key} needs n >= 2, got {n}"))),
            None => Err(Error::InvalidParameter(format!("{key} needs a parameter n >= 2"))),
        }
    };
    let lattice = match key {
        "U" => hyperbolic_plane(),
        "E8neg" => e8_negative(),
        "K3" => k3(),
        "K3n" => {
            let n = need_n(param)?;
            k3().direct_sum(&rank_one(-2 * (n - 1))).with_name(format!("K3n:{n}"))
        }
        "Kummer" => {
            let n = need_n(param)?;
            let u = hyperbolic_plane();
            u.direct_sum(&u).direct_sum(&u).direct_sum(&rank_one(-2 * (n + 1))).with_name(format!("Kummer:{n}"))
        }
        "rank1" => match param {
            Some(k) if k != 0 && k % 2 == 0 => rank_one(k),
            other => return Err(Error::InvalidParameter(format!("rank1 needs an even nonzero parameter, got {other:?}"))),
        },
        _ => return Err(Error::UnknownCatalogKey(key.to_string())),
    };
    Ok(lattice)
}

/// Keys addressable as `key` or `key:param` (e.g. `K3n:3`).
pub fn parse_catalog_ref(s: &str) -> Result<QuadLattice> {
    match s.split_once(':') {
        None => catalog_lookup(s, None),
        Some((k, p)) => {
            let p: i64 = p.trim().parse().map_err(|_| Error::InvalidParameter(format!("bad parameter `{p}`")))?;
            catalog_lookup(k, Some(p))
        }
    }
}

#[allow(dead_code)]
pub(crate) fn all_hyperkahler_examples() -> Vec<QuadLattice> {
    let mut v = vec![k3()];
    for n in [2, 3, 5] {
        v.push(catalog_lookup("K3n", Some(n)).unwrap());
    }
    v.push(catalog_lookup("Kummer", Some(2)).unwrap());
    v
}
