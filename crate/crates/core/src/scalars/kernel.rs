use alloc::vec::Vec;

use num_rational::BigRational;
use num_traits::Zero;

use super::{AlgebraicVector, FieldSpec};
use crate::error::{Error, Result};
use crate::lattice::QuadLattice;
use crate::linalg::nullspace;

/// Rational solutions of `q(x, cᵢ) = 0` for all constraints.
///
/// Each field-valued equation is expanded into its rational coordinate
/// equations in the monomial basis (restriction of scalars). The basis is
/// read off the reduced echelon form, so it does not depend on the order of
/// the constraints.
pub fn rational_kernel(constraints: &[AlgebraicVector], gram: &QuadLattice) -> Result<Vec<Vec<BigRational>>> {
    let rows = expanded_equations(constraints, gram)?;
    Ok(nullspace(rows, gram.rank()))
}

pub(crate) fn expanded_equations(constraints: &[AlgebraicVector], gram: &QuadLattice) -> Result<Vec<Vec<BigRational>>> {
    let b = gram.rank();
    let field = constraints.iter().fold(FieldSpec::rational(), |f, c| f.join(c.field()));
    let mut rows = Vec::new();
    for c in constraints {
        if c.len() != b {
            return Err(Error::DimensionMismatch { expected: b, found: c.len() });
        }
        let gc = gram.apply_gram(c)?.coerce_to(&field)?;
        for mask in 0..field.degree() {
            let row: Vec<BigRational> = gc.entries().iter().map(|x| x.coeff(mask)).collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::AlgebraicScalar;
    use alloc::vec;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn kernel_examples() {
        let l = QuadLattice::diagonal(None, &[1, 1]).unwrap();
        let c = AlgebraicVector::new(vec![AlgebraicScalar::sqrt_int(2).unwrap(), AlgebraicScalar::one()]);
        assert!(rational_kernel(&[c], &l).unwrap().is_empty());
        let c = AlgebraicVector::from_ints(&[1, 1]);
        assert_eq!(rational_kernel(&[c], &l).unwrap(), vec![vec![q(-1), q(1)]]);
        assert_eq!(rational_kernel(&[], &l).unwrap(), vec![vec![q(1), q(0)], vec![q(0), q(1)]]);
        let bad = AlgebraicVector::from_ints(&[1, 1, 1]);
        assert!(rational_kernel(&[bad], &l).is_err());
    }
}
