use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::Serialize;

use super::hermitian::{det2, unimodular_inverse, HermitianPoint, Matrix2};
use super::spec::{FrontSpec, NUMERIC_RESIDUE_TOL};
use super::FrontError;
use crate::algebra::{
    eval_complex, partial_fractions, GaussianRational, MobiusCoeffs, RationalMap, Value, DEFAULT_ROOT_TOL,
};

/// Gauss-map data at one parameter point, expressed in a chart obtained by
/// applying the motion `chart` to the target. `log_u` is `log |xi|^2` of
/// the same chart.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalFrame {
    pub chart: Matrix2,
    pub g: Complex64,
    pub dg: Complex64,
    pub g_star: Complex64,
    pub dg_star: Complex64,
    pub log_u: f64,
}

impl LocalFrame {
    /// `log |rho|^2`, which does not depend on the chart.
    pub fn log_rho_sq(&self) -> f64 {
        let delta = self.g - self.g_star;
        2.0 * (2.0 * self.log_u + self.dg_star.norm().ln() - self.dg.norm().ln() - 2.0 * delta.norm().ln())
    }
}

/// Anything that can produce local frames; implemented by rational fronts
/// and by the torus example.
pub trait FrontGeometry: Sync {
    fn local_frame(&self, z: Complex64) -> Result<LocalFrame, FrontError>;

    /// Finite parameter points to stay away from when sampling.
    fn exclusion_points(&self) -> Vec<Complex64>;

    fn numeric_backend(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FrontPoint {
    pub f: HermitianPoint,
    pub nu: HermitianPoint,
    pub ball: [f64; 3],
}

/// `f = E E*` and `nu = E e3 E*` written through `u = |xi|^2` only, then
/// moved to the parallel front at distance `t`.
pub fn front_from_frame(frame: &LocalFrame, t: f64) -> Result<FrontPoint, FrontError> {
    let u = frame.log_u.exp();
    let delta = frame.g - frame.g_star;
    let w = u / delta.norm_sqr();
    let (g, gs) = (frame.g, frame.g_star);
    let first = HermitianPoint::new(g.norm_sqr() / u, g / u, 1.0 / u);
    let second = HermitianPoint::new(w * gs.norm_sqr(), gs * w, w);
    let f = first.add(&second);
    let nu = first.sub(&second);
    let back = unimodular_inverse(&frame.chart);
    let (f, nu) = (f.congruence(&back), nu.congruence(&back));
    let (ch, sh) = (t.cosh(), t.sinh());
    let ft = f.scale(ch).add(&nu.scale(sh));
    let nut = nu.scale(ch).add(&f.scale(sh));
    let ball = ft.ball_point();
    if !(ft.h11.is_finite() && ft.h22.is_finite() && ft.h12.re.is_finite() && ft.h12.im.is_finite()) {
        return Err(FrontError::NonFinite);
    }
    Ok(FrontPoint { f: ft, nu: nut, ball })
}

/// A rational function with floating coefficients.
#[derive(Clone, Debug)]
pub(crate) struct ComplexRational {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

impl ComplexRational {
    pub(crate) fn new(r: &RationalMap) -> Self {
        Self {
            num: r.numerator().to_complex_coeffs(),
            den: r.denominator().to_complex_coeffs(),
        }
    }

    pub(crate) fn eval(&self, z: Complex64) -> Complex64 {
        let d = eval_complex(&self.den, z);
        if d.is_zero() {
            return Complex64::new(f64::INFINITY, f64::INFINITY);
        }
        eval_complex(&self.num, z) / d
    }
}

/// Real part of the canonical primitive of a rational 1-form with real
/// residues: `log` terms of the simple-pole parts, rational terms of the
/// higher ones and the polynomial part with zero constant.
#[derive(Clone, Debug)]
pub(crate) struct Primitive {
    polynomial: Vec<Complex64>,
    logs: Vec<(Complex64, f64)>,
    higher: Vec<(Complex64, Vec<(i32, Complex64)>)>,
    poles: Vec<Complex64>,
}

impl Primitive {
    pub(crate) fn new(coefficient: &RationalMap) -> Result<Self, FrontError> {
        let pf = partial_fractions(coefficient, DEFAULT_ROOT_TOL)?;
        let mut polynomial = vec![Complex64::zero()];
        for (k, c) in pf.polynomial_part.coeffs().iter().enumerate() {
            polynomial.push(c.to_complex() / (k as f64 + 1.0));
        }
        let mut logs = Vec::new();
        let mut higher = Vec::new();
        let mut poles = Vec::new();
        for part in &pf.poles {
            let p = part.pole.to_complex();
            poles.push(p);
            let real = match part.residue() {
                Value::Exact(g) => g.is_real(),
                Value::Numeric(z) => z.im.abs() <= NUMERIC_RESIDUE_TOL,
            };
            if !real {
                return Err(FrontError::PeriodFailed);
            }
            let r = part.residue().to_complex().re;
            if r != 0.0 {
                logs.push((p, r));
            }
            let terms: Vec<(i32, Complex64)> = part
                .coefficients
                .iter()
                .enumerate()
                .skip(1)
                .map(|(j, c)| {
                    let e = -(j as i32);
                    (e, c.to_complex() / e as f64)
                })
                .filter(|(_, c)| !c.is_zero())
                .collect();
            if !terms.is_empty() {
                higher.push((p, terms));
            }
        }
        Ok(Self {
            polynomial,
            logs,
            higher,
            poles,
        })
    }

    pub(crate) fn re_eval(&self, z: Complex64) -> f64 {
        let mut acc = eval_complex(&self.polynomial, z).re;
        for (p, r) in &self.logs {
            acc += r * (z - p).norm().ln();
        }
        for (p, terms) in &self.higher {
            let h = z - p;
            for (e, c) in terms {
                acc += (c * h.powi(*e)).re;
            }
        }
        acc
    }

    pub(crate) fn poles(&self) -> &[Complex64] {
        &self.poles
    }
}

#[derive(Clone, Debug)]
struct Chart {
    motion: Matrix2,
    g: ComplexRational,
    g_star: ComplexRational,
    dg: ComplexRational,
    dg_star: ComplexRational,
    primitive: Primitive,
    log_c2: f64,
}

impl Chart {
    fn frame(&self, z: Complex64) -> Option<LocalFrame> {
        let frame = LocalFrame {
            chart: self.motion,
            g: self.g.eval(z),
            dg: self.dg.eval(z),
            g_star: self.g_star.eval(z),
            dg_star: self.dg_star.eval(z),
            log_u: self.log_c2 + 2.0 * self.primitive.re_eval(z),
        };
        let finite = [frame.g, frame.g_star, frame.dg, frame.dg_star]
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
            && frame.log_u.is_finite();
        finite.then_some(frame)
    }
}

pub(crate) fn complex_motion(a: &MobiusCoeffs) -> Matrix2 {
    [
        [a[0][0].to_complex(), a[0][1].to_complex()],
        [a[1][0].to_complex(), a[1][1].to_complex()],
    ]
}

fn exact_motion(entries: [[(i64, i64); 2]; 2]) -> MobiusCoeffs {
    let c = |(re, im): (i64, i64)| GaussianRational::from(re) + GaussianRational::i() * GaussianRational::from(im);
    [
        [c(entries[0][0]), c(entries[0][1])],
        [c(entries[1][0]), c(entries[1][1])],
    ]
}

/// The motion `[[0, i], [i, 0]]`, which sends `G` to `1/G`.
pub fn inversion_motion() -> MobiusCoeffs {
    exact_motion([[(0, 0), (0, 1)], [(0, 1), (0, 0)]])
}

fn fallback_motions() -> Vec<MobiusCoeffs> {
    vec![inversion_motion(), exact_motion([[(1, 0), (0, 0)], [(1, 0), (1, 0)]])]
}

/// A front prepared for repeated evaluation.
#[derive(Clone, Debug)]
pub struct PreparedFront {
    spec: FrontSpec,
    charts: Vec<Chart>,
    ends: Vec<Complex64>,
}

const CHART_SWITCH_MODULUS: f64 = 1e3;

impl PreparedFront {
    pub fn new(spec: &FrontSpec) -> Result<Self, FrontError> {
        let identity = Chart {
            motion: [[Complex64::one(), Complex64::zero()], [Complex64::zero(), Complex64::one()]],
            g: ComplexRational::new(&spec.g),
            g_star: ComplexRational::new(&spec.g_star),
            dg: ComplexRational::new(&spec.g.derivative()),
            dg_star: ComplexRational::new(&spec.g_star.derivative()),
            primitive: Primitive::new(&spec.eta().coefficient)?,
            log_c2: 2.0 * spec.scale.ln(),
        };
        let mut charts = vec![identity];
        for a in fallback_motions() {
            let (Ok(g), Ok(gs)) = (spec.g.mobius(&a), spec.g_star.mobius(&a)) else {
                continue;
            };
            let eta = RationalMap::div(&g.derivative(), &g.sub(&gs)).map_err(|_| FrontError::GaussMapsEqual)?;
            let primitive = Primitive::new(&eta)?;
            let motion = complex_motion(&a);
            let first = &charts[0];
            let Some(z_ref) = reference_point(&spec.finite_ends(), |z| {
                let gz = first.g.eval(z);
                let denom = motion[1][0] * gz + motion[1][1];
                first.frame(z).is_some() && denom.norm() > 1e-3 && primitive.poles().iter().all(|p| (z - p).norm() > 1e-3)
            }) else {
                continue;
            };
            let base = first.frame(z_ref).expect("reference point is regular");
            let denom = motion[1][0] * base.g + motion[1][1];
            let log_c2 = base.log_u - 2.0 * denom.norm().ln() - 2.0 * primitive.re_eval(z_ref);
            charts.push(Chart {
                motion,
                dg: ComplexRational::new(&g.derivative()),
                dg_star: ComplexRational::new(&gs.derivative()),
                g: ComplexRational::new(&g),
                g_star: ComplexRational::new(&gs),
                primitive,
                log_c2,
            });
        }
        Ok(Self {
            ends: spec.finite_ends(),
            spec: spec.clone(),
            charts,
        })
    }

    pub fn spec(&self) -> &FrontSpec {
        &self.spec
    }

    /// `log |xi|^2` in the original chart.
    pub fn xi_log_modulus(&self, z: Complex64) -> Result<f64, FrontError> {
        self.check_not_end(z)?;
        let l = self.charts[0].log_c2 + 2.0 * self.charts[0].primitive.re_eval(z);
        if l.is_finite() {
            Ok(l)
        } else {
            Err(FrontError::PoleOfPrimitive)
        }
    }

    pub fn evaluate(&self, z: Complex64, t: f64) -> Result<FrontPoint, FrontError> {
        front_from_frame(&self.local_frame(z)?, t)
    }

    fn check_not_end(&self, z: Complex64) -> Result<(), FrontError> {
        if self.spec.is_end(z) {
            return Err(FrontError::AtEnd);
        }
        Ok(())
    }
}

impl FrontGeometry for PreparedFront {
    fn local_frame(&self, z: Complex64) -> Result<LocalFrame, FrontError> {
        self.check_not_end(z)?;
        if let Some(frame) = self.charts[0].frame(z) {
            if frame.g.norm().max(frame.g_star.norm()) <= CHART_SWITCH_MODULUS {
                return Ok(frame);
            }
        }
        self.charts
            .iter()
            .filter_map(|c| c.frame(z))
            .min_by(|a, b| {
                let ma = a.g.norm().max(a.g_star.norm());
                let mb = b.g.norm().max(b.g_star.norm());
                ma.total_cmp(&mb)
            })
            .ok_or(FrontError::NonFinite)
    }

    fn exclusion_points(&self) -> Vec<Complex64> {
        self.ends.clone()
    }
}

/// A deterministic point away from `avoid` satisfying `accept`.
pub(crate) fn reference_point(avoid: &[Complex64], accept: impl Fn(Complex64) -> bool) -> Option<Complex64> {
    (0..200)
        .map(|k| {
            let k = k as f64;
            Complex64::from_polar(0.31 + 0.173 * k, 0.7 + 2.399963 * k)
        })
        .find(|&z| avoid.iter().all(|e| (z - e).norm() > 1e-2) && accept(z))
}

pub fn xi_log_modulus(spec: &FrontSpec, z: Complex64) -> Result<f64, FrontError> {
    PreparedFront::new(spec)?.xi_log_modulus(z)
}

pub fn evaluate_front(spec: &FrontSpec, z: Complex64, t: f64) -> Result<FrontPoint, FrontError> {
    PreparedFront::new(spec)?.evaluate(z, t)
}

/// `log |rho|^2` at a point; `-inf` where `rho = 0`.
pub fn log_rho_sq(front: &impl FrontGeometry, z: Complex64) -> Result<f64, FrontError> {
    Ok(front.local_frame(z)?.log_rho_sq())
}

/// A rational factor times a power of `xi`: the form `factor * xi^xi_power * dz`.
#[derive(Clone, Debug, PartialEq)]
pub struct GaugedForm {
    pub factor: RationalMap,
    pub xi_power: i32,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CanonicalData {
    pub omega: GaugedForm,
    pub theta: GaugedForm,
    /// Coefficient of `dz^2` in the Hopf differential.
    pub q: RationalMap,
}

impl CanonicalData {
    /// `omega * theta` computed from the stored pieces.
    pub fn product(&self) -> GaugedForm {
        GaugedForm {
            factor: self.omega.factor.mul(&self.theta.factor),
            xi_power: self.omega.xi_power + self.theta.xi_power,
        }
    }
}

/// `omega = -dG / xi^2`, `theta = xi^2 dG* / (G - G*)^2`, `Q = omega theta`.
pub fn canonical_data(spec: &FrontSpec) -> CanonicalData {
    canonical_data_of(&spec.g, &spec.g_star)
}

pub fn canonical_data_of(g: &RationalMap, g_star: &RationalMap) -> CanonicalData {
    let dg = g.derivative();
    let dgs = g_star.derivative();
    let delta_sq = g.sub(g_star).pow(2).expect("nonzero power");
    let theta = dgs.div(&delta_sq).expect("G and G* differ");
    let omega = dg.neg();
    CanonicalData {
        q: omega.mul(&theta),
        omega: GaugedForm {
            factor: omega,
            xi_power: -2,
        },
        theta: GaugedForm {
            factor: theta,
            xi_power: 2,
        },
    }
}

/// Applies an isometry: the Gauss maps transform by the Möbius action and
/// `|c|` is rescaled so that the new front is `a f a*`.
pub fn apply_motion(a: &MobiusCoeffs, spec: &FrontSpec) -> Result<FrontSpec, FrontError> {
    let det = &(&a[0][0] * &a[1][1]) - &(&a[0][1] * &a[1][0]);
    if !det.is_one() {
        return Err(FrontError::NonUnitDeterminant);
    }
    let g = spec.g.mobius(a).map_err(|_| FrontError::MotionDegenerates)?;
    let gs = spec.g_star.mobius(a).map_err(|_| FrontError::MotionDegenerates)?;
    let motion = complex_motion(a);
    let base = PreparedFront::new(spec)?;
    let eta = g.derivative().div(&g.sub(&gs)).map_err(|_| FrontError::GaussMapsEqual)?;
    let primitive = Primitive::new(&eta)?;
    let gz = ComplexRational::new(&spec.g);
    let z_ref = reference_point(&spec.finite_ends(), |z| {
        let denom = motion[1][0] * gz.eval(z) + motion[1][1];
        base.xi_log_modulus(z).is_ok_and(f64::is_finite)
            && denom.norm() > 1e-3
            && denom.re.is_finite()
            && primitive.poles().iter().all(|p| (z - p).norm() > 1e-3)
    })
    .ok_or(FrontError::NonFinite)?;
    let denom = motion[1][0] * gz.eval(z_ref) + motion[1][1];
    let log_c2 = base.xi_log_modulus(z_ref)? - 2.0 * denom.norm().ln() - 2.0 * primitive.re_eval(z_ref);
    Ok(FrontSpec {
        g,
        g_star: gs,
        scale: (0.5 * log_c2).exp(),
        genus: spec.genus,
        ends: spec.ends.clone(),
    })
}

/// Complex form of a motion, for acting on Hermitian points.
pub fn motion_matrix(a: &MobiusCoeffs) -> Matrix2 {
    complex_motion(a)
}

pub fn apply_motion_to_point(a: &Matrix2, x: &HermitianPoint) -> Result<HermitianPoint, FrontError> {
    if (det2(a) - Complex64::one()).norm() > 1e-12 {
        return Err(FrontError::NonUnitDeterminant);
    }
    Ok(x.congruence(a))
}

/// The dual front: `G` and `G*` exchanged, everything else kept.
pub fn dual(spec: &FrontSpec) -> FrontSpec {
    FrontSpec {
        g: spec.g_star.clone(),
        g_star: spec.g.clone(),
        ..spec.clone()
    }
}

/// The dual with `|c|` chosen so that `xi` of the dual is `(G - G*)/xi`; it
/// traces the same surface with the unit normal reversed.
pub fn dual_matching(spec: &FrontSpec) -> Result<FrontSpec, FrontError> {
    let mut out = dual(spec);
    let base = PreparedFront::new(spec)?;
    let eta = out.eta();
    let primitive = Primitive::new(&eta.coefficient)?;
    let delta = ComplexRational::new(&spec.g.sub(&spec.g_star));
    let z_ref = reference_point(&spec.finite_ends(), |z| {
        base.xi_log_modulus(z).is_ok_and(f64::is_finite)
            && delta.eval(z).norm().is_finite()
            && primitive.poles().iter().all(|p| (z - p).norm() > 1e-3)
    })
    .ok_or(FrontError::NonFinite)?;
    let log_c2 = 2.0 * delta.eval(z_ref).norm().ln() - base.xi_log_modulus(z_ref)? - 2.0 * primitive.re_eval(z_ref);
    out.scale = (0.5 * log_c2).exp();
    Ok(out)
}
