use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{AlgebraError, GaussianRational, Polynomial};

/// A rational function `numerator / denominator` over Q(i) in canonical
/// form: coprime parts, monic denominator. Zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalMap {
    num: Polynomial,
    den: Polynomial,
}

/// The four entries `[[a11, a12], [a21, a22]]` of a Möbius transformation.
pub type MobiusCoeffs = [[GaussianRational; 2]; 2];

impl RationalMap {
    /// Reduces `num / den` to canonical form.
    pub fn new(num: Polynomial, den: Polynomial) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = Polynomial::gcd(&num, &den);
        let (mut num, mut den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        let lc = den.leading().expect("nonzero").clone();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(Self { num, den })
    }

    pub fn from_poly(p: Polynomial) -> Self {
        Self {
            num: p,
            den: Polynomial::one(),
        }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(Polynomial::constant(c))
    }

    pub fn zero() -> Self {
        Self::from_poly(Polynomial::zero())
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    /// The identity map `z`.
    pub fn z() -> Self {
        Self::from_poly(Polynomial::z())
    }

    pub fn numerator(&self) -> &Polynomial {
        &self.num
    }

    pub fn denominator(&self) -> &Polynomial {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    /// `max(deg num, deg den)`; zero for constants.
    pub fn degree(&self) -> usize {
        self.num.degree().unwrap_or(0).max(self.den.degree().unwrap_or(0))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let num = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        Self::new(num, &self.den * &rhs.den).expect("nonzero denominators")
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let num = &(&self.num * &rhs.den) - &(&rhs.num * &self.den);
        Self::new(num, &self.den * &rhs.den).expect("nonzero denominators")
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::new(&self.num * &rhs.num, &self.den * &rhs.den).expect("nonzero denominators")
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, AlgebraError> {
        if rhs.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        Self::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }

    pub fn neg(&self) -> Self {
        Self {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, n: i32) -> Result<Self, AlgebraError> {
        let base = if n < 0 { Self::one().div(self)? } else { self.clone() };
        let e = n.unsigned_abs();
        Ok(Self {
            num: base.num.pow(e),
            den: base.den.pow(e),
        })
    }

    /// Exact quotient-rule derivative.
    pub fn derivative(&self) -> Self {
        let num = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        Self::new(num, &self.den * &self.den).expect("nonzero denominator")
    }

    /// Value at a finite point, `None` at a pole.
    pub fn eval(&self, z: &GaussianRational) -> Option<GaussianRational> {
        let d = self.den.eval(z);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(z) / &d)
    }

    /// Value at infinity, `None` when infinity is a pole.
    pub fn eval_at_infinity(&self) -> Option<GaussianRational> {
        let dn = self.num.degree();
        let dd = self.den.degree().expect("nonzero denominator");
        match dn {
            None => Some(GaussianRational::zero()),
            Some(n) if n > dd => None,
            Some(n) if n == dd => Some(self.num.leading().unwrap() / self.den.leading().unwrap()),
            Some(_) => Some(GaussianRational::zero()),
        }
    }

    /// Floating evaluation; returns an infinite value at exact poles.
    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let d = self.den.eval_complex(z);
        let n = self.num.eval_complex(z);
        if d == Complex64::new(0.0, 0.0) {
            return Complex64::new(f64::INFINITY, 0.0);
        }
        n / d
    }

    /// `self(inner(z))`.
    pub fn compose(&self, inner: &RationalMap) -> RationalMap {
        let n = self.degree();
        let (p, q) = (&inner.num, &inner.den);
        let homogenize = |poly: &Polynomial| {
            let mut acc = Polynomial::zero();
            for (k, c) in poly.coeffs().iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let term = &(&p.pow(k as u32) * &q.pow((n - k) as u32)) * &Polynomial::constant(c.clone());
                acc = &acc + &term;
            }
            acc
        };
        Self::new(homogenize(&self.num), homogenize(&self.den)).expect("composition of a valid map")
    }

    /// `R(1/w)` as a rational function of `w`.
    pub fn at_reciprocal(&self) -> RationalMap {
        let inv = Self::new(Polynomial::one(), Polynomial::z()).expect("z is nonzero");
        self.compose(&inv)
    }

    /// `(a11 R + a12) / (a21 R + a22)`.
    pub fn mobius(&self, a: &MobiusCoeffs) -> Result<RationalMap, AlgebraError> {
        let top = self.scale(&a[0][0]).add(&Self::constant(a[0][1].clone()));
        let bottom = self.scale(&a[1][0]).add(&Self::constant(a[1][1].clone()));
        top.div(&bottom)
    }
}

impl fmt::Display for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Polynomial::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RationalMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMap({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_integers(c)
    }

    fn r(n: &[i64], d: &[i64]) -> RationalMap {
        RationalMap::new(p(n), p(d)).unwrap()
    }

    #[test]
    fn normalize_cancels_common_factor() {
        assert_eq!(r(&[-1, 0, 1], &[-1, 1]), r(&[1, 1], &[1]));
        assert_eq!(r(&[2, 2], &[2]), r(&[1, 1], &[1]));
        assert_eq!(r(&[0, -1, 0, 1], &[0, 1, 1]), r(&[-1, 1], &[1]));
    }

    #[test]
    fn normalize_rejects_zero_denominator() {
        assert_eq!(
            RationalMap::new(p(&[1]), Polynomial::zero()),
            Err(AlgebraError::ZeroDenominator)
        );
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let m = r(&[0, 6, 1], &[5, 2]);
        assert!(m.denominator().is_monic());
        assert_eq!(m.denominator(), &Polynomial::new(vec![GaussianRational::from_ratio(5, 2), GaussianRational::one()]));
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(r(&[0, 0, 1], &[1]).derivative(), r(&[0, 2], &[1]));
        assert_eq!(r(&[5], &[1]).derivative(), RationalMap::zero());
        // (z^2+2z)/(2z+1) -> (2z^2+2z+2)/(2z+1)^2
        let d = r(&[0, 2, 1], &[1, 2]).derivative();
        assert_eq!(d, r(&[2, 2, 2], &[1, 4, 4]));
    }

    #[test]
    fn values_at_infinity() {
        assert_eq!(r(&[0, 0, 1], &[1]).eval_at_infinity(), None);
        assert_eq!(
            r(&[0, 6, 1], &[5, 2]).eval_at_infinity(),
            None
        );
        assert_eq!(
            r(&[1, 3], &[5, 2]).eval_at_infinity(),
            Some(GaussianRational::from_ratio(3, 2))
        );
    }

    #[test]
    fn reciprocal_substitution() {
        // z^2 at 1/w is 1/w^2
        assert_eq!(r(&[0, 0, 1], &[1]).at_reciprocal(), r(&[1], &[0, 0, 1]));
    }

    #[test]
    fn mobius_inversion() {
        let i = GaussianRational::i();
        let zero = GaussianRational::zero();
        let a = [[zero.clone(), i.clone()], [i, zero]];
        assert_eq!(r(&[0, 0, 1], &[1]).mobius(&a).unwrap(), r(&[1], &[0, 0, 1]));
    }
}
