use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::GaussianRational;

/// Dense univariate polynomial over Q(i), coefficients stored lowest degree
/// first. The leading coefficient is nonzero unless the polynomial is zero,
/// in which case the coefficient vector is empty and [`Polynomial::degree`]
/// is `None`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Polynomial {
    coeffs: Vec<GaussianRational>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_integers(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussianRational::from(c)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    /// The identity polynomial `z`.
    pub fn z() -> Self {
        Self::from_integers(&[0, 1])
    }

    /// `z - root`.
    pub fn linear(root: &GaussianRational) -> Self {
        Self::new(vec![-root, GaussianRational::one()])
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&GaussianRational> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            None => Self::zero(),
            Some(lc) => {
                let inv = lc.inv().expect("leading coefficient is nonzero");
                self.scale(&inv)
            }
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(One::is_one)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussianRational::from(k as i64))
                .collect(),
        )
    }

    /// Polynomial long division; `None` when `divisor` is zero.
    pub fn div_rem(&self, divisor: &Polynomial) -> Option<(Polynomial, Polynomial)> {
        let dd = divisor.degree()?;
        let lc_inv = divisor.leading()?.inv()?;
        let mut rem = self.coeffs.clone();
        let Some(nd) = self.degree() else {
            return Some((Self::zero(), Self::zero()));
        };
        if nd < dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![GaussianRational::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &rem[k + dd] * &lc_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let t = &c * dc;
                rem[k + j] -= &t;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Exact quotient if `divisor` divides `self`.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.div_rem(divisor)?;
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Polynomial, b: &Polynomial) -> Polynomial {
        let mut x = a.clone();
        let mut y = b.clone();
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y).expect("nonzero divisor");
            // keep coefficient growth in check
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    pub fn eval(&self, z: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * z) + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        eval_complex(&self.to_complex_coeffs(), z)
    }

    pub fn to_complex_coeffs(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(GaussianRational::to_complex).collect()
    }

    /// Coefficients of `h -> p(center + h)`.
    pub fn taylor_shift(&self, center: &GaussianRational) -> Polynomial {
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = center * &c[j + 1];
                c[j] += &t;
            }
        }
        Self::new(c)
    }

    /// Vanishing order of `self` at `root` (0 if `p(root) != 0`).
    pub fn root_multiplicity(&self, root: &GaussianRational) -> usize {
        if self.is_zero() {
            return usize::MAX;
        }
        let shifted = self.taylor_shift(root);
        shifted.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    /// Yun's square-free factorization: returns `(f_m, m)` with every `f_m`
    /// monic, square-free and nonconstant, and `self = lc * prod f_m^m`.
    pub fn squarefree_factors(&self) -> Vec<(Polynomial, usize)> {
        let mut out = Vec::new();
        if self.is_constant() {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = Self::gcd(&f, &df);
        let mut b = f.exact_div(&a).expect("gcd divides");
        let mut c = df.exact_div(&a).expect("gcd divides");
        let mut d = &c - &b.derivative();
        let mut m = 1;
        while !b.is_constant() {
            a = Self::gcd(&b, &d);
            if !a.is_constant() {
                out.push((a.clone(), m));
            }
            b = b.exact_div(&a).expect("gcd divides");
            c = d.exact_div(&a).expect("gcd divides");
            d = &c - &b.derivative();
            m += 1;
        }
        out
    }

    /// Scalar `s` such that `s * self` has Gaussian-integer coefficients.
    pub fn integer_scaling(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(&c.denominator_lcm()))
    }

    /// Bound on real/imaginary denominators of any root in Q(i): the norm of
    /// the leading coefficient after scaling to Gaussian integers.
    pub fn root_denominator_bound(&self) -> BigInt {
        let Some(lc) = self.leading() else {
            return BigInt::one();
        };
        let s = BigRational::from_integer(self.integer_scaling());
        let scaled = GaussianRational::new(lc.re() * &s, lc.im() * &s);
        scaled.norm_sqr().to_integer().abs()
    }

    /// `p(inner)` as a polynomial.
    pub fn compose(&self, inner: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * inner) + &Polynomial::constant(c.clone());
        }
        acc
    }
}

pub fn eval_complex(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let t = a * b;
                out[i + j] += &t;
            }
        }
        Polynomial::new(out)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl fmt::Display for Polynomial {
    /// Writes in the parser's input syntax, e.g. `2*z^2+(1/2-i)*z-3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (negative, mag) = if c.is_real() && c.re().is_negative() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if negative { "-" } else { "+" })?;
            }
            first = false;
            let coeff = if mag.is_real() {
                mag.to_string()
            } else {
                format!("({mag})")
            };
            match k {
                0 => write!(f, "{coeff}")?,
                _ => {
                    if !mag.is_one() {
                        write!(f, "{coeff}*")?;
                    }
                    if k == 1 {
                        write!(f, "z")?;
                    } else {
                        write!(f, "z^{k}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_integers(c)
    }

    #[test]
    fn zero_polynomial_has_no_degree() {
        assert_eq!(Polynomial::zero().degree(), None);
        assert_eq!(p(&[0, 0, 0]).degree(), None);
        assert_eq!(p(&[5]).degree(), Some(0));
    }

    #[test]
    fn division_with_remainder() {
        // z^3 - z = (z^2 + z)(z - 1) + 0
        let (q, r) = p(&[0, -1, 0, 1]).div_rem(&p(&[0, 1, 1])).unwrap();
        assert_eq!(q, p(&[-1, 1]));
        assert!(r.is_zero());
        assert!(p(&[1, 1]).div_rem(&Polynomial::zero()).is_none());
    }

    #[test]
    fn gcd_is_monic() {
        let g = Polynomial::gcd(&p(&[0, -2, 0, 2]), &p(&[0, 3, 3]));
        assert_eq!(g, p(&[0, 1, 1]));
    }

    #[test]
    fn yun_factors() {
        // (z-1)^2 (z+2)^3 z
        let f = &(&p(&[-1, 1]).pow(2) * &p(&[2, 1]).pow(3)) * &p(&[0, 1]);
        let mut fac = f.squarefree_factors();
        fac.sort_by_key(|(_, m)| *m);
        assert_eq!(fac.len(), 3);
        assert_eq!(fac[0], (p(&[0, 1]), 1));
        assert_eq!(fac[1], (p(&[-1, 1]), 2));
        assert_eq!(fac[2], (p(&[2, 1]), 3));
    }

    #[test]
    fn taylor_shift_and_multiplicity() {
        let f = &p(&[-1, 1]).pow(3) * &p(&[4, 1]);
        assert_eq!(f.root_multiplicity(&GaussianRational::from(1)), 3);
        assert_eq!(f.root_multiplicity(&GaussianRational::from(-4)), 1);
        assert_eq!(f.root_multiplicity(&GaussianRational::from(2)), 0);
        let shifted = p(&[1, 2, 3]).taylor_shift(&GaussianRational::from(2));
        // 3(h+2)^2 + 2(h+2) + 1 = 3h^2 + 14h + 17
        assert_eq!(shifted, p(&[17, 14, 3]));
    }

    #[test]
    fn display_round_trip_shape() {
        assert_eq!(p(&[-3, 0, 2]).to_string(), "2*z^2-3");
        assert_eq!(p(&[0, -1]).to_string(), "-z");
        let c = Polynomial::new(vec![GaussianRational::one(), GaussianRational::i()]);
        assert_eq!(c.to_string(), "(i)*z+1");
    }
}
