//! Multi-quadratic fields `Q(√p₁, …, √p_k)`.
//!
//! Elements are written in the multiplicative basis `{∏_{i∈S} √pᵢ}` indexed by
//! bitmasks `S`. The radicands must be square-free and independent modulo
//! squares, otherwise the basis is not linearly independent and the exact zero
//! test breaks.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::sync::Arc;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};

#[derive(Debug)]
struct FieldInner {
    radicands: Vec<u64>,
    /// `mask_products[m] = ∏_{i∈m} pᵢ`.
    mask_products: Vec<BigInt>,
}

/// A multi-quadratic extension of `Q`, identified by its sorted radicands.
#[derive(Debug, Clone)]
pub struct FieldSpec(Arc<FieldInner>);

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.radicands == other.0.radicands
    }
}

impl Eq for FieldSpec {}

impl Default for FieldSpec {
    fn default() -> Self {
        Self::rational()
    }
}

impl FieldSpec {
    pub fn rational() -> Self {
        Self::build(Vec::new())
    }

    /// Validates and sorts the radicands.
    pub fn new(mut radicands: Vec<u64>) -> Result<Self> {
        radicands.sort_unstable();
        for w in radicands.windows(2) {
            if w[0] == w[1] {
                return Err(Error::InvalidField(format!("duplicate radicand {}", w[0])));
            }
        }
        for &r in &radicands {
            if r < 2 || !is_square_free(r) {
                return Err(Error::InvalidField(format!("radicand {r} is not square-free > 1")));
            }
        }
        if radicands.len() > 16 {
            return Err(Error::InvalidField(format!("too many radicands ({})", radicands.len())));
        }
        let mut basis = SquareClassBasis::default();
        for &r in &radicands {
            if !basis.insert(r) {
                return Err(Error::InvalidField(format!(
                    "radicand {r} is a product of the others modulo squares"
                )));
            }
        }
        Ok(Self::build(radicands))
    }

    fn build(radicands: Vec<u64>) -> Self {
        let k = radicands.len();
        let mut mask_products = Vec::with_capacity(1 << k);
        mask_products.push(BigInt::one());
        for (i, &p) in radicands.iter().enumerate() {
            for m in 0..(1usize << i) {
                let v = &mask_products[m] * BigInt::from(p);
                mask_products.push(v);
            }
        }
        FieldSpec(Arc::new(FieldInner { radicands, mask_products }))
    }

    pub fn radicands(&self) -> &[u64] {
        &self.0.radicands
    }

    pub fn num_radicands(&self) -> usize {
        self.0.radicands.len()
    }

    pub fn degree(&self) -> usize {
        1 << self.0.radicands.len()
    }

    pub fn is_rational(&self) -> bool {
        self.0.radicands.is_empty()
    }

    /// `∏_{i∈mask} pᵢ`; the basis element for `mask` is its positive square root.
    pub fn mask_product(&self, mask: usize) -> &BigInt {
        &self.0.mask_products[mask]
    }

    pub(crate) fn same_as(&self, other: &Self) -> bool {
        self == other
    }

    /// Smallest field (in the greedy sense) containing both fields.
    ///
    /// Radicands of `other` that are already expressible in `self` are dropped.
    pub fn join(&self, other: &Self) -> Self {
        if self == other || other.is_rational() {
            return self.clone();
        }
        if self.is_rational() {
            return other.clone();
        }
        let mut basis = SquareClassBasis::default();
        let mut radicands = self.0.radicands.clone();
        for &r in &radicands {
            basis.insert(r);
        }
        for &r in other.radicands() {
            if basis.insert(r) {
                radicands.push(r);
            }
        }
        if radicands.len() == self.num_radicands() {
            return self.clone();
        }
        radicands.sort_unstable();
        Self::build(radicands)
    }

    /// If `√n` lies in this field, returns `(mask, m)` with `√n = basis(mask) · c`
    /// where `c = m / mask_product(mask)` times the square part; see
    /// [`FieldSpec::sqrt_in_field`].
    pub(crate) fn square_class_mask(&self, n: u64) -> Option<usize> {
        let target = square_class(n);
        let mut basis = SquareClassBasis::default();
        for &r in self.radicands() {
            basis.insert(r);
        }
        basis.express(&target)
    }

    /// Whether the square root of the positive integer `n` lies in the field.
    pub fn contains_sqrt(&self, n: u64) -> bool {
        n > 0 && self.square_class_mask(n).is_some()
    }

    /// Field obtained by adjoining `√n` (no-op if already present).
    pub fn adjoin_sqrt(&self, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidField("cannot adjoin sqrt(0)".into()));
        }
        let s = square_free_part(n);
        if s == 1 || self.contains_sqrt(s) {
            return Ok(self.clone());
        }
        let mut r = self.0.radicands.clone();
        r.push(s);
        Self::new(r)
    }
}

/// Odd-exponent primes of `n`.
pub(crate) fn square_class(n: u64) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e % 2 == 1 {
            out.insert(p);
        }
        p += 1;
    }
    if n > 1 {
        out.insert(n);
    }
    out
}

pub fn is_square_free(n: u64) -> bool {
    let mut n = n;
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            n /= p;
            if n % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// Writes `n = s · m²` with `s` square-free, returning `s`.
pub fn square_free_part(n: u64) -> u64 {
    square_class(n).into_iter().product()
}

/// GF(2) elimination over square classes, remembering which inserted
/// radicands combine into each reduced row.
#[derive(Default)]
struct SquareClassBasis {
    // (pivot prime, class, mask of inserted elements)
    rows: Vec<(u64, BTreeSet<u64>, usize)>,
    inserted: usize,
}

impl SquareClassBasis {
    fn reduce(&self, class: &BTreeSet<u64>) -> (BTreeSet<u64>, usize) {
        let mut c = class.clone();
        let mut mask = 0usize;
        for (pivot, row, m) in &self.rows {
            if c.contains(pivot) {
                c = c.symmetric_difference(row).copied().collect();
                mask ^= m;
            }
        }
        (c, mask)
    }

    /// Inserts `n`; returns `false` if it was already in the span.
    fn insert(&mut self, n: u64) -> bool {
        let (c, mask) = self.reduce(&square_class(n));
        let bit = 1usize << self.inserted;
        self.inserted += 1;
        match c.iter().next_back().copied() {
            None => false,
            Some(pivot) => {
                let full = mask ^ bit;
                for (_, row, m) in self.rows.iter_mut() {
                    if row.contains(&pivot) {
                        *row = row.symmetric_difference(&c).copied().collect();
                        *m ^= full;
                    }
                }
                self.rows.push((pivot, c, full));
                true
            }
        }
    }

    fn express(&self, class: &BTreeSet<u64>) -> Option<usize> {
        let (c, mask) = self.reduce(class);
        c.is_empty().then_some(mask)
    }
}
