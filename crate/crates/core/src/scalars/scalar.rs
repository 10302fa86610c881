use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::{square_free_part, FieldSpec};
use crate::error::{Error, Result};

/// Exact element of a multi-quadratic field.
///
/// Stored as integer numerators over a common positive denominator, one
/// numerator per basis monomial `∏_{i∈S} √pᵢ`. The representation is kept
/// reduced: `gcd(den, nums…) = 1`, and zero is `nums = 0, den = 1`.
#[derive(Clone)]
pub struct AlgebraicScalar {
    field: FieldSpec,
    nums: Vec<BigInt>,
    den: BigInt,
}

impl AlgebraicScalar {
    pub fn zero_in(field: &FieldSpec) -> Self {
        AlgebraicScalar { field: field.clone(), nums: vec![BigInt::zero(); field.degree()], den: BigInt::one() }
    }

    pub fn zero() -> Self {
        Self::zero_in(&FieldSpec::rational())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        AlgebraicScalar { field: FieldSpec::rational(), nums: vec![n], den: BigInt::one() }
    }

    pub fn from_rational(q: &BigRational) -> Self {
        AlgebraicScalar { field: FieldSpec::rational(), nums: vec![q.numer().clone()], den: q.denom().clone() }
            .normalized()
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(&BigRational::new(n.into(), d.into()))
    }

    /// The basis monomial `∏_{i∈mask} √pᵢ` of `field`.
    pub fn basis(field: &FieldSpec, mask: usize) -> Self {
        let mut x = Self::zero_in(field);
        x.nums[mask] = BigInt::one();
        x
    }

    /// `√n` for a positive integer, in the smallest field containing it.
    pub fn sqrt_int(n: u64) -> Result<Self> {
        if n == 0 {
            return Ok(Self::zero());
        }
        let s = square_free_part(n);
        let m = (n / s).sqrt();
        debug_assert_eq!(m * m * s, n);
        if s == 1 {
            return Ok(Self::from_int(m as i64));
        }
        let f = FieldSpec::new(vec![s])?;
        let mut x = Self::zero_in(&f);
        x.nums[1] = BigInt::from(m);
        Ok(x)
    }

    /// Builds from per-mask rational coefficients.
    pub fn from_coeffs(field: &FieldSpec, coeffs: &[(usize, BigRational)]) -> Self {
        let mut den = BigInt::one();
        for (_, c) in coeffs {
            den = den.lcm(c.denom());
        }
        let mut nums = vec![BigInt::zero(); field.degree()];
        for (m, c) in coeffs {
            nums[*m] += c.numer() * (&den / c.denom());
        }
        AlgebraicScalar { field: field.clone(), nums, den }.normalized()
    }

    fn normalized(mut self) -> Self {
        let mut g = self.den.clone();
        for n in &self.nums {
            if g.is_one() {
                break;
            }
            g = g.gcd(n);
        }
        if self.nums.iter().all(Zero::is_zero) {
            self.den = BigInt::one();
            return self;
        }
        if !g.is_one() {
            for n in self.nums.iter_mut() {
                *n = &*n / &g;
            }
            self.den = &self.den / &g;
        }
        self
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.nums.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.nums.iter().skip(1).all(Zero::is_zero)
    }

    /// The rational coefficient of the monomial `mask`.
    pub fn coeff(&self, mask: usize) -> BigRational {
        BigRational::new(self.nums[mask].clone(), self.den.clone())
    }

    /// Nonzero coefficients in increasing mask order.
    pub fn coeffs(&self) -> impl Iterator<Item = (usize, BigRational)> + '_ {
        self.nums
            .iter()
            .enumerate()
            .filter(|(_, n)| !n.is_zero())
            .map(move |(m, n)| (m, BigRational::new(n.clone(), self.den.clone())))
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coeff(0))
    }

    /// Re-expresses `self` in `target`, which must contain every radicand of
    /// `self.field()` up to squares.
    pub fn coerce_to(&self, target: &FieldSpec) -> Result<Self> {
        if self.field.same_as(target) {
            return Ok(self.clone());
        }
        // image of √pᵢ as (numerator, denominator, mask) in the target field
        let mut images = Vec::with_capacity(self.field.num_radicands());
        for &p in self.field.radicands() {
            let mask = target
                .square_class_mask(p)
                .ok_or_else(|| Error::InvalidField(alloc::format!("sqrt({p}) not in target field")))?;
            let prod = target.mask_product(mask);
            let sq = (prod * BigInt::from(p)).sqrt();
            images.push((sq, prod.clone(), mask));
        }
        let mut out = vec![BigInt::zero(); target.degree()];
        let mut den = self.den.clone();
        // monomial images share a common denominator after scaling
        let mut mono: Vec<(BigInt, BigInt, usize)> = Vec::with_capacity(self.nums.len());
        for s in 0..self.nums.len() {
            let (mut num, mut d, mut mask) = (BigInt::one(), BigInt::one(), 0usize);
            for (i, (sq, prod, m)) in images.iter().enumerate() {
                if s >> i & 1 == 1 {
                    num *= sq * target.mask_product(mask & m);
                    d *= prod;
                    mask ^= m;
                }
            }
            mono.push((num, d, mask));
        }
        let mut common = BigInt::one();
        for (s, (_, d, _)) in mono.iter().enumerate() {
            if !self.nums[s].is_zero() {
                common = common.lcm(d);
            }
        }
        den *= &common;
        for (s, (num, d, mask)) in mono.into_iter().enumerate() {
            if self.nums[s].is_zero() {
                continue;
            }
            out[mask] += &self.nums[s] * num * (&common / d);
        }
        Ok(AlgebraicScalar { field: target.clone(), nums: out, den }.normalized())
    }

    /// Brings two scalars into a common field.
    pub(crate) fn unify(a: &Self, b: &Self) -> (Self, Self) {
        if a.field.same_as(&b.field) {
            return (a.clone(), b.clone());
        }
        let f = a.field.join(&b.field);
        (a.coerce_to(&f).expect("join contains both fields"), b.coerce_to(&f).expect("join contains both fields"))
    }

    fn add_same(&self, other: &Self, negate: bool) -> Self {
        let nums = if self.den == other.den {
            self.nums
                .iter()
                .zip(&other.nums)
                .map(|(a, b)| if negate { a - b } else { a + b })
                .collect::<Vec<_>>()
        } else {
            self.nums
                .iter()
                .zip(&other.nums)
                .map(|(a, b)| {
                    let (x, y) = (a * &other.den, b * &self.den);
                    if negate {
                        x - y
                    } else {
                        x + y
                    }
                })
                .collect()
        };
        let den = if self.den == other.den { self.den.clone() } else { &self.den * &other.den };
        AlgebraicScalar { field: self.field.clone(), nums, den }.normalized()
    }

    fn mul_same(&self, other: &Self) -> Self {
        let d = self.nums.len();
        let mut out = vec![BigInt::zero(); d];
        for (s, a) in self.nums.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (t, b) in other.nums.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let common = s & t;
                let term = a * b;
                if common == 0 {
                    out[s ^ t] += term;
                } else {
                    out[s ^ t] += term * self.field.mask_product(common);
                }
            }
        }
        AlgebraicScalar { field: self.field.clone(), nums: out, den: &self.den * &other.den }.normalized()
    }

    /// Conjugate under `√pᵢ ↦ −√pᵢ`.
    fn conj_bit(&self, i: usize) -> Self {
        let mut x = self.clone();
        for (m, n) in x.nums.iter_mut().enumerate() {
            if m >> i & 1 == 1 {
                *n = -&*n;
            }
        }
        x
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let mut y = self.clone();
        let mut acc = Self::one().coerce_to(&self.field).ok()?;
        for i in (0..self.field.num_radicands()).rev() {
            let c = y.conj_bit(i);
            acc = acc.mul_same(&c);
            y = y.mul_same(&c);
        }
        let r = y.to_rational()?;
        let rinv = BigRational::new(r.denom().clone(), r.numer().clone());
        Some(acc.scale(&rinv))
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        let nums = self.nums.iter().map(|n| n * q.numer()).collect();
        let mut den = &self.den * q.denom();
        let mut nums: Vec<BigInt> = nums;
        if den.is_negative() {
            den = -den;
            for n in nums.iter_mut() {
                *n = -&*n;
            }
        }
        AlgebraicScalar { field: self.field.clone(), nums, den }.normalized()
    }

    pub fn scale_int(&self, k: i64) -> Self {
        self.scale(&BigRational::from_integer(k.into()))
    }

    /// Integer-scaled interval for `den · x` at `bits` fractional bits:
    /// returns `(lo, hi)` with `lo ≤ 2^bits · den · x ≤ hi`.
    fn bracket(&self, bits: u64) -> (BigInt, BigInt) {
        let mut lo = &self.nums[0] << bits;
        let mut hi = lo.clone();
        for (m, n) in self.nums.iter().enumerate().skip(1) {
            if n.is_zero() {
                continue;
            }
            let r = (self.field.mask_product(m) << (2 * bits)).sqrt();
            let r1 = &r + 1u32;
            if n.is_positive() {
                lo += n * &r;
                hi += n * &r1;
            } else {
                lo += n * &r1;
                hi += n * &r;
            }
        }
        (lo, hi)
    }

    /// Exact sign. Zero is decided by the coefficient test; nonzero values are
    /// separated from 0 by refining the radicals with doubling precision.
    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            return 0;
        }
        if self.is_rational() {
            return if self.nums[0].is_positive() { 1 } else { -1 };
        }
        let mut bits = 32u64;
        loop {
            let (lo, hi) = self.bracket(bits);
            if lo.is_positive() {
                return 1;
            }
            if hi.is_negative() {
                return -1;
            }
            bits *= 2;
        }
    }

    /// A real approximation within `eps` of the embedding with all radicals positive.
    pub fn approx_value(&self, eps: &BigRational) -> f64 {
        assert!(eps.is_positive(), "eps must be positive");
        if self.is_rational() {
            return ratio_to_f64(&BigRational::new(self.nums[0].clone(), self.den.clone()));
        }
        let total: BigInt = self.nums.iter().skip(1).map(|n| n.abs()).sum();
        // width of the bracket is at most total / (2^bits · den)
        let mut bits = 16u64;
        loop {
            let width = BigRational::new(total.clone(), &self.den << bits);
            if &width < eps {
                break;
            }
            bits += 16;
        }
        let (lo, hi) = self.bracket(bits);
        let mid = BigRational::new(lo + hi, &self.den << (bits + 1));
        ratio_to_f64(&mid)
    }

    /// Nearest-double approximation (relative accuracy of roughly 2⁻⁶⁰ with
    /// respect to the coefficient size).
    pub fn to_f64(&self) -> f64 {
        if self.is_rational() {
            return ratio_to_f64(&BigRational::new(self.nums[0].clone(), self.den.clone()));
        }
        let top = self.nums.iter().map(|n| n.bits()).max().unwrap_or(0) as i64;
        let bits = (64 + self.field.num_radicands() as i64 * 4 + (self.den.bits() as i64 - top).max(0)) as u64;
        let (lo, hi) = self.bracket(bits);
        ratio_to_f64(&BigRational::new(lo + hi, &self.den << (bits + 1)))
    }

    pub fn cmp_exact(&self, other: &Self) -> Ordering {
        match (self - other).signum() {
            1 => Ordering::Greater,
            -1 => Ordering::Less,
            _ => Ordering::Equal,
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one().coerce_to(&self.field).expect("Q embeds");
        let mut base = self.clone();
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }
}

pub(crate) fn ratio_to_f64(q: &BigRational) -> f64 {
    if let Some(v) = q.to_f64() {
        return v;
    }
    // fall back to a scaled integer quotient for out-of-range parts
    let shift = q.numer().bits() as i64 - q.denom().bits() as i64 - 60;
    let (n, d) = if shift > 0 {
        (q.numer().clone(), q.denom() << shift as u64)
    } else {
        (q.numer() << (-shift) as u64, q.denom().clone())
    };
    let (qq, _) = n.div_rem(&d);
    qq.to_f64().unwrap_or(f64::NAN) * libm::exp2(shift as f64)
}

impl PartialEq for AlgebraicScalar {
    fn eq(&self, other: &Self) -> bool {
        if self.field.same_as(&other.field) {
            return self.den == other.den && self.nums == other.nums;
        }
        (self - other).is_zero()
    }
}

impl Eq for AlgebraicScalar {}

impl fmt::Debug for AlgebraicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for AlgebraicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.coeffs() {
            let mut term = String::new();
            if m == 0 {
                term.push_str(&alloc::format!("{c}"));
            } else {
                let rads: Vec<String> = self
                    .field
                    .radicands()
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| m >> i & 1 == 1)
                    .map(|(_, p)| alloc::format!("√{p}"))
                    .collect();
                if c.is_one() {
                    term.push_str(&rads.concat());
                } else {
                    term.push_str(&alloc::format!("{c}·{}", rads.concat()));
                }
            }
            if first {
                f.write_str(&term)?;
            } else if let Some(rest) = term.strip_prefix('-') {
                write!(f, " - {rest}")?;
            } else {
                write!(f, " + {term}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl From<i64> for AlgebraicScalar {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<BigInt> for AlgebraicScalar {
    fn from(n: BigInt) -> Self {
        Self::from_bigint(n)
    }
}

impl From<BigRational> for AlgebraicScalar {
    fn from(q: BigRational) -> Self {
        Self::from_rational(&q)
    }
}

impl<'a> Add<&'a AlgebraicScalar> for &'a AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn add(self, rhs: &AlgebraicScalar) -> AlgebraicScalar {
        if self.field.same_as(&rhs.field) {
            return self.add_same(rhs, false);
        }
        let (a, b) = AlgebraicScalar::unify(self, rhs);
        a.add_same(&b, false)
    }
}

impl<'a> Sub<&'a AlgebraicScalar> for &'a AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn sub(self, rhs: &AlgebraicScalar) -> AlgebraicScalar {
        if self.field.same_as(&rhs.field) {
            return self.add_same(rhs, true);
        }
        let (a, b) = AlgebraicScalar::unify(self, rhs);
        a.add_same(&b, true)
    }
}

impl<'a> Mul<&'a AlgebraicScalar> for &'a AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn mul(self, rhs: &AlgebraicScalar) -> AlgebraicScalar {
        if rhs.is_rational() {
            let q = rhs.coeff(0);
            return self.scale(&q);
        }
        if self.is_rational() {
            let q = self.coeff(0);
            return rhs.scale(&q);
        }
        if self.field.same_as(&rhs.field) {
            return self.mul_same(rhs);
        }
        let (a, b) = AlgebraicScalar::unify(self, rhs);
        a.mul_same(&b)
    }
}

impl<'a> Div<&'a AlgebraicScalar> for &'a AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn div(self, rhs: &AlgebraicScalar) -> AlgebraicScalar {
        self * &rhs.inv().expect("division by zero")
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<AlgebraicScalar> for AlgebraicScalar {
            type Output = AlgebraicScalar;
            fn $m(self, rhs: AlgebraicScalar) -> AlgebraicScalar {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a AlgebraicScalar> for AlgebraicScalar {
            type Output = AlgebraicScalar;
            fn $m(self, rhs: &AlgebraicScalar) -> AlgebraicScalar {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<AlgebraicScalar> for &'a AlgebraicScalar {
            type Output = AlgebraicScalar;
            fn $m(self, rhs: AlgebraicScalar) -> AlgebraicScalar {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl AddAssign<&AlgebraicScalar> for AlgebraicScalar {
    fn add_assign(&mut self, rhs: &AlgebraicScalar) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&AlgebraicScalar> for AlgebraicScalar {
    fn sub_assign(&mut self, rhs: &AlgebraicScalar) {
        *self = &*self - rhs;
    }
}

impl MulAssign<&AlgebraicScalar> for AlgebraicScalar {
    fn mul_assign(&mut self, rhs: &AlgebraicScalar) {
        *self = &*self * rhs;
    }
}

impl Neg for &AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn neg(self) -> AlgebraicScalar {
        AlgebraicScalar {
            field: self.field.clone(),
            nums: self.nums.iter().map(|n| -n).collect(),
            den: self.den.clone(),
        }
    }
}

impl Neg for AlgebraicScalar {
    type Output = AlgebraicScalar;
    fn neg(mut self) -> AlgebraicScalar {
        for n in self.nums.iter_mut() {
            if n.sign() != Sign::NoSign {
                *n = -&*n;
            }
        }
        self
    }
}

/// Exact sign of an algebraic scalar: `-1`, `0` or `+1`.
pub fn sign_of(x: &AlgebraicScalar) -> i32 {
    x.signum()
}

/// Approximation of `x` within `eps`.
pub fn approx_value(x: &AlgebraicScalar, eps: &BigRational) -> f64 {
    x.approx_value(eps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: u64) -> AlgebraicScalar {
        AlgebraicScalar::sqrt_int(n).unwrap()
    }

    fn q(n: i64, d: i64) -> AlgebraicScalar {
        AlgebraicScalar::from_ratio(n, d)
    }

    #[test]
    fn sign_examples() {
        assert_eq!(sign_of(&(q(3, 2) - s(2))), 1);
        assert_eq!(sign_of(&AlgebraicScalar::zero()), 0);
        assert_eq!(sign_of(&(s(2) + s(3) - s(10))), -1);
        // √10 ∈ Q(√2,√5) is coerced, not a new radicand
        let x = s(2) * s(5) - s(10);
        assert!(x.is_zero());
        assert_eq!(sign_of(&x), 0);
    }

    #[test]
    fn close_to_zero_sign() {
        // 1351/780 - √3 ≈ 3.9e-7
        let x = q(1351, 780) - s(3);
        assert_eq!(sign_of(&x), 1);
        let y = q(265_443_576_910, 153_253_090_529) - s(3);
        assert_eq!(sign_of(&y), if 265_443_576_910f64 / 153_253_090_529f64 > 3f64.sqrt() { 1 } else { -1 });
    }

    #[test]
    fn approx_examples() {
        let eps = BigRational::new(1.into(), 1_000_000.into());
        assert!((approx_value(&s(2), &eps) - core::f64::consts::SQRT_2).abs() < 1e-6);
        assert!((approx_value(&q(1, 3), &eps) - 1.0 / 3.0).abs() < 1e-6);
        assert_eq!(approx_value(&AlgebraicScalar::zero(), &eps), 0.0);
    }

    #[test]
    fn inverse_and_products() {
        let x = q(1, 2) + s(2) - s(3) * q(3, 4) + s(6);
        let inv = x.inv().unwrap();
        assert_eq!(&x * &inv, AlgebraicScalar::one());
        assert_eq!(s(2) * s(3), s(6));
        assert_eq!(s(8), s(2) * q(2, 1));
        assert!(AlgebraicScalar::zero().inv().is_none());
    }

    #[test]
    fn coercion_across_fields() {
        let f = FieldSpec::new(alloc::vec![2, 3]).unwrap();
        let x = s(6).coerce_to(&f).unwrap();
        assert_eq!(x.coeff(0b11), BigRational::from_integer(1.into()));
        let g = FieldSpec::new(alloc::vec![3, 6]).unwrap();
        let y = s(2).coerce_to(&g).unwrap();
        // √2 = √3·√6 / 3
        assert_eq!(y.coeff(0b11), BigRational::new(1.into(), 3.into()));
        assert_eq!(&y * &y, q(2, 1));
    }
}
