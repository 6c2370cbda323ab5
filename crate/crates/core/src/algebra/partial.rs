//! Partial-fraction decomposition and Laurent expansion of rational maps.

use num_complex::Complex64;
use num_traits::{One, Zero};

use super::roots::roots;
use super::{AlgebraError, GaussianRational, Polynomial, RationalMap, Value};

/// Principal part of a rational function at one pole: the coefficient of
/// `(z - pole)^-(j+1)` is `coefficients[j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrincipalPart {
    pub pole: Value,
    pub coefficients: Vec<Value>,
}

impl PrincipalPart {
    pub fn order(&self) -> usize {
        self.coefficients.len()
    }

    /// Coefficient of `(z - pole)^-1`.
    pub fn residue(&self) -> &Value {
        &self.coefficients[0]
    }

    pub fn is_exact(&self) -> bool {
        self.pole.is_exact() && self.coefficients.iter().all(Value::is_exact)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let h = z - self.pole.to_complex();
        let inv = h.inv();
        let mut power = inv;
        let mut acc = Complex64::zero();
        for c in &self.coefficients {
            acc += c.to_complex() * power;
            power *= inv;
        }
        acc
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartialFractions {
    pub polynomial_part: Polynomial,
    pub poles: Vec<PrincipalPart>,
}

impl PartialFractions {
    pub fn is_exact(&self) -> bool {
        self.poles.iter().all(PrincipalPart::is_exact)
    }

    /// Re-summation of all terms at `z`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.polynomial_part.eval_complex(z) + self.poles.iter().map(|p| p.eval(z)).sum::<Complex64>()
    }

    pub fn pole_at(&self, point: &Value, tol: f64) -> Option<&PrincipalPart> {
        self.poles.iter().find(|p| p.pole.approx_eq(point, tol))
    }
}

pub fn partial_fractions(r: &RationalMap, tol: f64) -> Result<PartialFractions, AlgebraError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(AlgebraError::InvalidTolerance(tol));
    }
    let (polynomial_part, _) = r
        .numerator()
        .div_rem(r.denominator())
        .expect("denominator is nonzero");
    let mut poles = Vec::new();
    if r.denominator().degree().unwrap_or(0) > 0 {
        for root in roots(r.denominator(), tol)? {
            let m = root.multiplicity;
            let coefficients = match &root.value {
                Value::Exact(c) => {
                    let (lowest, series) = laurent_exact(r.numerator(), r.denominator(), c, m);
                    debug_assert_eq!(lowest, -(m as i64));
                    series.into_iter().rev().map(Value::Exact).collect()
                }
                Value::Numeric(c) => {
                    let series = laurent_numeric(
                        &r.numerator().to_complex_coeffs(),
                        &r.denominator().to_complex_coeffs(),
                        *c,
                        m,
                        m,
                    );
                    series.into_iter().rev().map(Value::Numeric).collect()
                }
            };
            poles.push(PrincipalPart {
                pole: root.value,
                coefficients,
            });
        }
    }
    Ok(PartialFractions {
        polynomial_part,
        poles,
    })
}

/// Leading terms of the Laurent expansion of `num/den` about `center`.
///
/// Returns the order of the leading term and `count` coefficients starting
/// there. `num` must be nonzero.
pub fn laurent_exact(
    num: &Polynomial,
    den: &Polynomial,
    center: &GaussianRational,
    count: usize,
) -> (i64, Vec<GaussianRational>) {
    let n = num.taylor_shift(center);
    let d = den.taylor_shift(center);
    let zn = n.coeffs().iter().take_while(|c| c.is_zero()).count();
    let zd = d.coeffs().iter().take_while(|c| c.is_zero()).count();
    let a: Vec<GaussianRational> = n.coeffs()[zn..].to_vec();
    let b: Vec<GaussianRational> = d.coeffs()[zd..].to_vec();
    (zn as i64 - zd as i64, series_divide_exact(&a, &b, count))
}

fn series_divide_exact(a: &[GaussianRational], b: &[GaussianRational], count: usize) -> Vec<GaussianRational> {
    let b0_inv = b[0].inv().expect("leading series coefficient is nonzero");
    let mut out: Vec<GaussianRational> = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = a.get(k).cloned().unwrap_or_else(GaussianRational::zero);
        for j in 1..=k.min(b.len() - 1) {
            let t = &b[j] * &out[k - j];
            acc -= &t;
        }
        out.push(&acc * &b0_inv);
    }
    out
}

/// Laurent coefficients of `num/den` at a numerically known pole of order
/// `pole_order`, starting at `(z - center)^-pole_order`.
pub fn laurent_numeric(
    num: &[Complex64],
    den: &[Complex64],
    center: Complex64,
    pole_order: usize,
    count: usize,
) -> Vec<Complex64> {
    let n = taylor_shift_complex(num, center);
    let d = taylor_shift_complex(den, center);
    let b = &d[pole_order.min(d.len() - 1)..];
    let mut out = Vec::with_capacity(count);
    for k in 0..count {
        let mut acc = n.get(k).copied().unwrap_or_default();
        for j in 1..=k.min(b.len() - 1) {
            acc -= b[j] * out[k - j];
        }
        out.push(acc / b[0]);
    }
    out
}

pub fn taylor_shift_complex(coeffs: &[Complex64], center: Complex64) -> Vec<Complex64> {
    let mut c = coeffs.to_vec();
    let n = c.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = center * c[j + 1];
            c[j] += t;
        }
    }
    c
}

/// Residue of `num/den` at an exact point (zero when the point is regular).
pub fn residue_exact(num: &Polynomial, den: &Polynomial, center: &GaussianRational) -> GaussianRational {
    if num.is_zero() {
        return GaussianRational::zero();
    }
    let (lowest, series) = laurent_exact(num, den, center, 1);
    if lowest >= 0 {
        return GaussianRational::zero();
    }
    let (_, series) = if lowest == -1 {
        (lowest, series)
    } else {
        laurent_exact(num, den, center, (-lowest) as usize)
    };
    series.last().cloned().unwrap_or_else(GaussianRational::one)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::roots::DEFAULT_ROOT_TOL;

    fn p(c: &[i64]) -> Polynomial {
        Polynomial::from_integers(c)
    }

    fn exact_pole(pf: &PartialFractions, at: GaussianRational) -> &PrincipalPart {
        pf.pole_at(&Value::Exact(at), 1e-12).expect("pole present")
    }

    #[test]
    fn k1_form_at_a_equal_two() {
        // 2(2z+1) / (2(z+1)(z-1))
        let r = RationalMap::new(p(&[2, 4]), p(&[-2, 0, 2])).unwrap();
        let pf = partial_fractions(&r, DEFAULT_ROOT_TOL).unwrap();
        assert!(pf.polynomial_part.is_zero());
        assert_eq!(pf.poles.len(), 2);
        assert_eq!(
            exact_pole(&pf, 1.into()).residue(),
            &Value::Exact(GaussianRational::from_ratio(3, 2))
        );
        assert_eq!(
            exact_pole(&pf, (-1).into()).residue(),
            &Value::Exact(GaussianRational::from_ratio(1, 2))
        );
    }

    #[test]
    fn double_pole_at_origin() {
        let r = RationalMap::new(p(&[1]), p(&[0, 0, 1])).unwrap();
        let pf = partial_fractions(&r, DEFAULT_ROOT_TOL).unwrap();
        assert_eq!(pf.poles.len(), 1);
        let part = &pf.poles[0];
        assert_eq!(part.order(), 2);
        assert_eq!(part.coefficients[0], Value::Exact(GaussianRational::zero()));
        assert_eq!(part.coefficients[1], Value::Exact(GaussianRational::one()));
    }

    #[test]
    fn k2_form_exposes_residues() {
        // 3z(2z+5) / ((z-1)(z+2)(2z+3))
        let den = &(&p(&[-1, 1]) * &p(&[2, 1])) * &p(&[3, 2]);
        let r = RationalMap::new(p(&[0, 15, 6]), den).unwrap();
        let pf = partial_fractions(&r, DEFAULT_ROOT_TOL).unwrap();
        assert!(pf.is_exact());
        assert_eq!(
            exact_pole(&pf, 1.into()).residue(),
            &Value::Exact(GaussianRational::from_ratio(7, 5))
        );
        assert_eq!(
            exact_pole(&pf, (-2).into()).residue(),
            &Value::Exact(GaussianRational::from(-2))
        );
        assert_eq!(
            exact_pole(&pf, GaussianRational::from_ratio(-3, 2)).residue(),
            &Value::Exact(GaussianRational::from_ratio(18, 5))
        );
        assert!(pf.polynomial_part.is_zero());
    }

    #[test]
    fn numeric_poles_resum() {
        // (z^3 + 1) / (z^2 + z + 1)^2 has irrational double poles
        let r = RationalMap::new(p(&[1, 0, 0, 1]), p(&[1, 1, 1]).pow(2)).unwrap();
        let pf = partial_fractions(&r, DEFAULT_ROOT_TOL).unwrap();
        assert!(!pf.is_exact());
        for z in [Complex64::new(0.3, 0.7), Complex64::new(-2.0, 0.1), Complex64::new(4.0, -3.0)] {
            let want = r.eval_complex(z);
            assert!((pf.eval(z) - want).norm() < 1e-9 * want.norm().max(1.0));
        }
    }

    #[test]
    fn invalid_tolerance() {
        let r = RationalMap::z();
        assert!(matches!(partial_fractions(&r, 0.0), Err(AlgebraError::InvalidTolerance(_))));
    }
}
