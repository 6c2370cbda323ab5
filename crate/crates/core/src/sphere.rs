//! Rational maps on the Riemann sphere: evaluation at extended points, local
//! orders, degrees, residues of rational 1-forms and critical divisors.
//!
//! The point at infinity is always handled in the chart `w = 1/z`. Orders
//! returned by [`order_at`] are those of a function; differential weights
//! (`dz = -dw/w^2`, `dz^2 = dw^2/w^4`) are applied by callers.

use std::fmt;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{
    partial_fractions, residue_exact, roots, taylor_shift_complex, AlgebraError, GaussianRational,
    Polynomial, RationalMap, Value, DEFAULT_ROOT_TOL,
};

/// Relative threshold below which a numeric Taylor coefficient counts as zero.
pub const NUMERIC_ORDER_TOL: f64 = 1e-8;

/// Radius used to identify numerically located points.
pub const POINT_MATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SphereError {
    #[error("a constant map has no degree or critical divisor")]
    ConstantMap,
    #[error("order of the zero function is undefined")]
    ZeroFunction,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ExtendedPoint {
    Finite(Value),
    Infinity,
}

impl ExtendedPoint {
    pub fn exact(g: GaussianRational) -> Self {
        Self::Finite(Value::Exact(g))
    }

    pub fn numeric(z: Complex64) -> Self {
        Self::Finite(Value::Numeric(z))
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Self::Infinity)
    }

    pub fn is_exact(&self) -> bool {
        match self {
            Self::Finite(v) => v.is_exact(),
            Self::Infinity => true,
        }
    }

    pub fn finite(&self) -> Option<&Value> {
        match self {
            Self::Finite(v) => Some(v),
            Self::Infinity => None,
        }
    }

    pub fn to_complex(&self) -> Option<Complex64> {
        self.finite().map(Value::to_complex)
    }

    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        match (self, other) {
            (Self::Infinity, Self::Infinity) => true,
            (Self::Finite(a), Self::Finite(b)) => a.approx_eq(b, tol),
            _ => false,
        }
    }

    /// Chordal distance on the unit sphere, used for clustering values.
    pub fn chordal_distance(&self, other: &Self) -> f64 {
        let to_sphere = |p: &Self| match p.to_complex() {
            None => [0.0, 0.0, 1.0],
            Some(z) => {
                let n = z.norm_sqr();
                [2.0 * z.re / (1.0 + n), 2.0 * z.im / (1.0 + n), (n - 1.0) / (n + 1.0)]
            }
        };
        let (a, b) = (to_sphere(self), to_sphere(other));
        ((a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2) + (a[2] - b[2]).powi(2)).sqrt()
    }
}

impl fmt::Display for ExtendedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Infinity => write!(f, "inf"),
            Self::Finite(Value::Exact(g)) => write!(f, "{g}"),
            Self::Finite(Value::Numeric(z)) => write!(f, "{}", format_complex(*z)),
        }
    }
}

impl Serialize for ExtendedPoint {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Fixed 17-significant-digit rendering of a complex number.
pub fn format_complex(z: Complex64) -> String {
    let re = format_real(z.re);
    if z.im == 0.0 {
        return re;
    }
    let im = format_real(z.im.abs());
    let sign = if z.im < 0.0 { '-' } else { '+' };
    if z.re == 0.0 {
        format!("{}{im}*i", if z.im < 0.0 { "-" } else { "" })
    } else {
        format!("{re}{sign}{im}*i")
    }
}

pub fn format_real(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    format!("{x:.16e}")
}

/// A divisor on the sphere: nonzero integer orders at distinct points.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Divisor {
    entries: Vec<(ExtendedPoint, i64)>,
}

impl Divisor {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `order` at `point`, merging with a point within `tol`.
    pub fn add(&mut self, point: ExtendedPoint, order: i64, tol: f64) {
        if let Some(idx) = self.entries.iter().position(|(p, _)| p.approx_eq(&point, tol)) {
            self.entries[idx].1 += order;
            if self.entries[idx].1 == 0 {
                self.entries.remove(idx);
            }
        } else if order != 0 {
            self.entries.push((point, order));
        }
    }

    pub fn entries(&self) -> &[(ExtendedPoint, i64)] {
        &self.entries
    }

    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn order_at(&self, point: &ExtendedPoint, tol: f64) -> i64 {
        self.entries
            .iter()
            .find(|(p, _)| p.approx_eq(point, tol))
            .map_or(0, |(_, m)| *m)
    }

    pub fn support(&self) -> impl Iterator<Item = &ExtendedPoint> {
        self.entries.iter().map(|(p, _)| p)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// The 1-form `coefficient * dz`.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalOneForm {
    pub coefficient: RationalMap,
}

impl RationalOneForm {
    pub fn new(coefficient: RationalMap) -> Self {
        Self { coefficient }
    }

    /// `dG / (G - H)`.
    pub fn log_derivative_ratio(g: &RationalMap, h: &RationalMap) -> Result<Self, AlgebraError> {
        Ok(Self::new(g.derivative().div(&g.sub(h))?))
    }

    /// Coefficient of `dw` after the substitution `z = 1/w`.
    pub fn pulled_back_at_infinity(&self) -> RationalMap {
        let minus_w_sq = RationalMap::new(Polynomial::from_integers(&[-1]), Polynomial::from_integers(&[0, 0, 1]))
            .expect("nonzero denominator");
        self.coefficient.at_reciprocal().mul(&minus_w_sq)
    }

    /// Every pole (including infinity) with its residue.
    pub fn residues(&self, tol: f64) -> Result<Vec<(ExtendedPoint, usize, Value)>, AlgebraError> {
        let mut out = Vec::new();
        let pf = partial_fractions(&self.coefficient, tol)?;
        for part in pf.poles {
            out.push((ExtendedPoint::Finite(part.pole.clone()), part.order(), part.coefficients[0].clone()));
        }
        let at_inf = self.pulled_back_at_infinity();
        let order = pole_order_at_zero(&at_inf);
        if order > 0 {
            out.push((ExtendedPoint::Infinity, order, Value::Exact(residue_exact(at_inf.numerator(), at_inf.denominator(), &GaussianRational::zero()))));
        }
        Ok(out)
    }
}

fn pole_order_at_zero(r: &RationalMap) -> usize {
    if r.is_zero() {
        return 0;
    }
    let zero = GaussianRational::zero();
    r.denominator().root_multiplicity(&zero)
}

/// Value of `r` at an extended point.
pub fn evaluate(r: &RationalMap, p: &ExtendedPoint) -> ExtendedPoint {
    match p {
        ExtendedPoint::Infinity => match r.eval_at_infinity() {
            Some(v) => ExtendedPoint::exact(v),
            None => ExtendedPoint::Infinity,
        },
        ExtendedPoint::Finite(Value::Exact(z)) => match r.eval(z) {
            Some(v) => ExtendedPoint::exact(v),
            None => ExtendedPoint::Infinity,
        },
        ExtendedPoint::Finite(Value::Numeric(z)) => {
            if numeric_vanishing_order(r.denominator(), *z) > 0 {
                ExtendedPoint::Infinity
            } else {
                ExtendedPoint::numeric(r.eval_complex(*z))
            }
        }
    }
}

/// Vanishing order of a polynomial at a numerically known point.
pub fn numeric_vanishing_order(p: &Polynomial, z: Complex64) -> usize {
    let coeffs = p.to_complex_coeffs();
    let scale = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm() * z.norm().max(1.0).powi(k as i32))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let shifted = taylor_shift_complex(&coeffs, z);
    shifted
        .iter()
        .take_while(|c| c.norm() <= NUMERIC_ORDER_TOL * scale)
        .count()
        .min(p.degree().unwrap_or(0))
}

/// Vanishing order of `r` at `p` (negative at poles).
pub fn order_at(r: &RationalMap, p: &ExtendedPoint) -> Result<i64, SphereError> {
    if r.is_zero() {
        return Err(SphereError::ZeroFunction);
    }
    let (n, d) = (r.numerator(), r.denominator());
    Ok(match p {
        ExtendedPoint::Infinity => d.degree().unwrap_or(0) as i64 - n.degree().unwrap_or(0) as i64,
        ExtendedPoint::Finite(Value::Exact(z)) => n.root_multiplicity(z) as i64 - d.root_multiplicity(z) as i64,
        ExtendedPoint::Finite(Value::Numeric(z)) => {
            numeric_vanishing_order(n, *z) as i64 - numeric_vanishing_order(d, *z) as i64
        }
    })
}

pub fn degree(g: &RationalMap) -> Result<usize, SphereError> {
    if g.is_constant() {
        return Err(SphereError::ConstantMap);
    }
    Ok(g.degree())
}

/// Residue of `form` at `p`; at infinity this is the residue at `w = 0` of
/// the form written in the coordinate `w = 1/z`.
pub fn residue(form: &RationalOneForm, p: &ExtendedPoint) -> Result<Value, SphereError> {
    let c = &form.coefficient;
    if c.is_zero() {
        return Ok(Value::Exact(GaussianRational::zero()));
    }
    Ok(match p {
        ExtendedPoint::Infinity => {
            let pulled = form.pulled_back_at_infinity();
            Value::Exact(residue_exact(pulled.numerator(), pulled.denominator(), &GaussianRational::zero()))
        }
        ExtendedPoint::Finite(Value::Exact(z)) => Value::Exact(residue_exact(c.numerator(), c.denominator(), z)),
        ExtendedPoint::Finite(Value::Numeric(z)) => {
            let pf = partial_fractions(c, DEFAULT_ROOT_TOL)?;
            match pf.pole_at(&Value::Numeric(*z), POINT_MATCH_TOL * (1.0 + z.norm())) {
                Some(part) => Value::Numeric(part.residue().to_complex()),
                None => Value::Numeric(Complex64::zero()),
            }
        }
    })
}

/// Branching divisor of a nonconstant map: local multiplicity minus one at
/// every point of the sphere. Its degree is `2d - 2`.
pub fn critical_divisor(g: &RationalMap) -> Result<Divisor, SphereError> {
    critical_divisor_with_tol(g, DEFAULT_ROOT_TOL)
}

pub fn critical_divisor_with_tol(g: &RationalMap, tol: f64) -> Result<Divisor, SphereError> {
    if g.is_constant() {
        return Err(SphereError::ConstantMap);
    }
    let (n, d) = (g.numerator(), g.denominator());
    // N'D - ND' vanishes to order m-1 at a pole of order m and to the
    // branching order at every other finite point
    let wronskian = &(&n.derivative() * d) - &(n * &d.derivative());
    let mut div = Divisor::new();
    if wronskian.degree().unwrap_or(0) > 0 {
        for root in roots(&wronskian, tol)? {
            div.add(ExtendedPoint::Finite(root.value), root.multiplicity as i64, 10.0 * tol);
        }
    }
    let at_inf = local_multiplicity_at_infinity(g) - 1;
    if at_inf > 0 {
        div.add(ExtendedPoint::Infinity, at_inf as i64, 0.0);
    }
    Ok(div)
}

/// Local multiplicity of a nonconstant map at infinity.
pub fn local_multiplicity_at_infinity(g: &RationalMap) -> usize {
    let (n, d) = (g.numerator(), g.denominator());
    let dn = n.degree().unwrap_or(0);
    let dd = d.degree().unwrap_or(0);
    match g.eval_at_infinity() {
        None => dn - dd,
        Some(v) => {
            let shifted = n - &d.scale(&v);
            dd - shifted.degree().expect("nonconstant map")
        }
    }
}

/// Local multiplicity of `g` at a finite point (exact or numeric).
pub fn local_multiplicity(g: &RationalMap, p: &ExtendedPoint) -> usize {
    match p {
        ExtendedPoint::Infinity => local_multiplicity_at_infinity(g),
        ExtendedPoint::Finite(v) => match evaluate(g, p) {
            ExtendedPoint::Infinity => (-order_at(g, p).expect("nonzero")) as usize,
            ExtendedPoint::Finite(value) => {
                let shifted = match (&value, v) {
                    (Value::Exact(b), _) => g.sub(&RationalMap::constant(b.clone())),
                    (Value::Numeric(b), Value::Numeric(z)) => {
                        let num = g.numerator().to_complex_coeffs();
                        let den = g.denominator().to_complex_coeffs();
                        let len = num.len().max(den.len());
                        let diff: Vec<Complex64> = (0..len)
                            .map(|k| num.get(k).copied().unwrap_or_default() - b * den.get(k).copied().unwrap_or_default())
                            .collect();
                        return complex_vanishing_order(&diff, *z);
                    }
                    (Value::Numeric(_), Value::Exact(_)) => unreachable!("exact point has exact value"),
                };
                order_at(&shifted, p).expect("nonconstant map") as usize
            }
        },
    }
}

fn complex_vanishing_order(coeffs: &[Complex64], z: Complex64) -> usize {
    let scale = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| c.norm() * z.norm().max(1.0).powi(k as i32))
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let degree = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    taylor_shift_complex(coeffs, z)
        .iter()
        .take_while(|c| c.norm() <= NUMERIC_ORDER_TOL * scale)
        .count()
        .min(degree)
}
