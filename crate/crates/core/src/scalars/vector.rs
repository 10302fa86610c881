use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Index, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AlgebraicScalar, FieldSpec};
use crate::error::Result;

/// A vector of algebraic scalars over one shared field.
#[derive(Clone, PartialEq, Eq)]
pub struct AlgebraicVector {
    field: FieldSpec,
    entries: Vec<AlgebraicScalar>,
}

impl AlgebraicVector {
    /// Builds a vector, lifting every entry into the join of their fields.
    pub fn new(entries: Vec<AlgebraicScalar>) -> Self {
        let field = entries.iter().fold(FieldSpec::rational(), |f, x| f.join(x.field()));
        let entries = entries
            .into_iter()
            .map(|x| x.coerce_to(&field).expect("join contains every entry field"))
            .collect();
        AlgebraicVector { field, entries }
    }

    pub fn zeros(n: usize) -> Self {
        AlgebraicVector { field: FieldSpec::rational(), entries: (0..n).map(|_| AlgebraicScalar::zero()).collect() }
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.entries[i] = AlgebraicScalar::one();
        v
    }

    pub fn from_ints(v: &[i64]) -> Self {
        AlgebraicVector { field: FieldSpec::rational(), entries: v.iter().map(|&x| AlgebraicScalar::from_int(x)).collect() }
    }

    pub fn from_bigints(v: &[BigInt]) -> Self {
        AlgebraicVector {
            field: FieldSpec::rational(),
            entries: v.iter().map(|x| AlgebraicScalar::from_bigint(x.clone())).collect(),
        }
    }

    pub fn from_rationals(v: &[BigRational]) -> Self {
        AlgebraicVector { field: FieldSpec::rational(), entries: v.iter().map(AlgebraicScalar::from_rational).collect() }
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[AlgebraicScalar] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<AlgebraicScalar> {
        self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(AlgebraicScalar::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.entries.iter().all(AlgebraicScalar::is_rational)
    }

    pub fn to_rationals(&self) -> Option<Vec<BigRational>> {
        self.entries.iter().map(AlgebraicScalar::to_rational).collect()
    }

    pub fn coerce_to(&self, field: &FieldSpec) -> Result<Self> {
        let entries = self.entries.iter().map(|x| x.coerce_to(field)).collect::<Result<Vec<_>>>()?;
        Ok(AlgebraicVector { field: field.clone(), entries })
    }

    pub fn scale(&self, c: &AlgebraicScalar) -> Self {
        Self::new(self.entries.iter().map(|x| x * c).collect())
    }

    pub fn scale_rational(&self, c: &BigRational) -> Self {
        AlgebraicVector { field: self.field.clone(), entries: self.entries.iter().map(|x| x.scale(c)).collect() }
    }

    /// `Σ cᵢ vᵢ`; all vectors must have the same length.
    pub fn combination(coeffs: &[AlgebraicScalar], vectors: &[&AlgebraicVector]) -> Self {
        assert_eq!(coeffs.len(), vectors.len());
        let n = vectors.first().map_or(0, |v| v.len());
        let mut acc = Self::zeros(n);
        for (c, v) in coeffs.iter().zip(vectors) {
            if c.is_zero() {
                continue;
            }
            acc = &acc + &v.scale(c);
        }
        acc
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().map(AlgebraicScalar::to_f64).collect()
    }
}

impl Index<usize> for AlgebraicVector {
    type Output = AlgebraicScalar;
    fn index(&self, i: usize) -> &AlgebraicScalar {
        &self.entries[i]
    }
}

impl fmt::Debug for AlgebraicVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.entries.iter()).finish()
    }
}

impl<'a> Add<&'a AlgebraicVector> for &'a AlgebraicVector {
    type Output = AlgebraicVector;
    fn add(self, rhs: &AlgebraicVector) -> AlgebraicVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        AlgebraicVector::new(self.entries.iter().zip(&rhs.entries).map(|(a, b)| a + b).collect())
    }
}

impl<'a> Sub<&'a AlgebraicVector> for &'a AlgebraicVector {
    type Output = AlgebraicVector;
    fn sub(self, rhs: &AlgebraicVector) -> AlgebraicVector {
        assert_eq!(self.len(), rhs.len(), "vector length mismatch");
        AlgebraicVector::new(self.entries.iter().zip(&rhs.entries).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &AlgebraicVector {
    type Output = AlgebraicVector;
    fn neg(self) -> AlgebraicVector {
        AlgebraicVector { field: self.field.clone(), entries: self.entries.iter().map(|x| -x).collect() }
    }
}
