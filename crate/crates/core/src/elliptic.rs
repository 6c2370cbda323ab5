//! Genus-one fronts on the square torus `C/(Z + iZ)`.
//!
//! The Weierstrass function is evaluated from its row-summed lattice
//! series: summing `1/(z - m - n i)^2` over `m` in closed form leaves
//! `pi^2 / sin^2(pi (z + n i))`, whose rows decay like `exp(-2 pi |n|)`.
//! Gauss maps are elliptic expressions in `wp` and `wpp`; the front uses a
//! numeric primitive of `dG/(G - G*)` instead of the rational
//! partial-fraction backend.

use std::collections::BTreeMap;
use std::f64::consts::{PI, TAU};
use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::expr::{EllipticExpr, Jet, ParseError, WeierstrassJet};
use crate::front::{FrontError, FrontGeometry, LocalFrame, Matrix2, OssermanSummary};

/// Rows kept on each side of the real axis in the lattice series.
const ROWS: i32 = 12;
const CHART_SWITCH_MODULUS: f64 = 1e3;
const QUADRATURE_DEPTH: usize = 48;
/// Torus distance below which two points are identified.
pub const TORUS_POINT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EllipticError {
    #[error("the point is a lattice point, where wp has a pole")]
    LatticePoint,
    #[error("evaluation produced a non-finite value")]
    NonFinite,
    #[error("no integration path avoids the singularities of the integrand")]
    PathBlocked,
    #[error("degree count did not stabilise over the probe values")]
    UnstableDegree,
    #[error("Newton iteration did not converge")]
    NonConvergence,
    #[error("scale |c| must be positive and finite, got {0}")]
    InvalidScale(f64),
    #[error("the period condition fails: {0}")]
    PeriodFailed(String),
    #[error(transparent)]
    Expr(#[from] ParseError),
}

impl From<EllipticError> for FrontError {
    fn from(e: EllipticError) -> Self {
        match e {
            EllipticError::InvalidScale(s) => FrontError::InvalidScale(s),
            EllipticError::PeriodFailed(_) => FrontError::PeriodFailed,
            _ => FrontError::NonFinite,
        }
    }
}

fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(NonZeroUsize::new(10).expect("nonzero"))
            .as_node_weight_pairs()
            .to_vec()
    })
}

/// `(wp, wp')` for a point already reduced near the origin.
fn row_sum(w: Complex64) -> (Complex64, Complex64) {
    let pi2 = PI * PI;
    let mut p = Complex64::new(-pi2 / 3.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for n in -ROWS..=ROWS {
        let u = (w + Complex64::new(0.0, n as f64)) * PI;
        let (s, c) = (u.sin(), u.cos());
        let s2 = s * s;
        p += pi2 / s2;
        dp += -2.0 * pi2 * PI * c / (s2 * s);
        if n != 0 {
            p += pi2 / (PI * n.abs() as f64).sinh().powi(2);
        }
    }
    (p, dp)
}

/// The square torus with `(wp')^2 = 4 wp (wp^2 - a^2)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SquareTorus {
    /// `wp(1/2)`.
    pub a: f64,
}

impl Default for SquareTorus {
    fn default() -> Self {
        Self::new()
    }
}

impl SquareTorus {
    pub fn new() -> Self {
        Self {
            a: row_sum(Complex64::new(0.5, 0.0)).0.re,
        }
    }

    pub fn g2(&self) -> f64 {
        4.0 * self.a * self.a
    }

    pub fn g3(&self) -> f64 {
        0.0
    }

    /// Named constants available to elliptic expressions.
    pub fn constants(&self) -> BTreeMap<String, Complex64> {
        BTreeMap::from([("a".to_string(), Complex64::new(self.a, 0.0))])
    }

    /// Representative with real and imaginary parts in `[-1/2, 1/2]`.
    pub fn reduce(z: Complex64) -> Complex64 {
        Complex64::new(z.re - z.re.round(), z.im - z.im.round())
    }

    /// Representative in the cell `[0, 1)^2`.
    pub fn reduce_to_cell(z: Complex64) -> Complex64 {
        Complex64::new(z.re - z.re.floor(), z.im - z.im.floor())
    }

    pub fn distance(z: Complex64, w: Complex64) -> f64 {
        Self::reduce(z - w).norm()
    }

    pub fn wp(&self, z: Complex64) -> Result<(Complex64, Complex64), EllipticError> {
        let w = Self::reduce(z);
        if w.norm() == 0.0 {
            return Err(EllipticError::LatticePoint);
        }
        let (p, dp) = row_sum(w);
        if !(p.re.is_finite() && p.im.is_finite() && dp.re.is_finite() && dp.im.is_finite()) {
            return Err(EllipticError::NonFinite);
        }
        Ok((p, dp))
    }

    /// `wp`, `wp'` and `wp'' = 6 wp^2 - g2/2`.
    pub fn jet(&self, z: Complex64) -> Result<WeierstrassJet, EllipticError> {
        let (p, dp) = self.wp(z)?;
        Ok(WeierstrassJet {
            p,
            dp,
            ddp: 6.0 * p * p - 0.5 * self.g2(),
        })
    }

    /// `|wp'^2 - 4 wp (wp^2 - a^2)| / (1 + |wp|^3)`.
    pub fn ode_residual(&self, z: Complex64) -> Result<f64, EllipticError> {
        let (p, dp) = self.wp(z)?;
        let r = dp * dp - 4.0 * p * (p * p - self.a * self.a);
        Ok(r.norm() / (1.0 + p.norm().powi(3)))
    }

    /// Points of the cell where `wp = w`, with multiplicity; the two
    /// preimages are `z` and `-z`, merged at half-periods.
    pub fn wp_preimages(&self, w: Complex64) -> Result<Vec<(Complex64, usize)>, EllipticError> {
        const HALF_PERIODS: [Complex64; 3] =
            [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5), Complex64::new(0.5, 0.5)];
        for h in HALF_PERIODS {
            let (p, _) = self.wp(h)?;
            if (p - w).norm() <= 1e-10 * (1.0 + w.norm()) {
                return Ok(vec![(h, 2)]);
            }
        }
        let seeds = (0..6).flat_map(|i| (0..6).map(move |j| Complex64::new((i as f64 + 0.5) / 6.0, (j as f64 + 0.5) / 6.0)));
        for seed in seeds {
            let mut z = seed;
            for _ in 0..100 {
                let Ok((p, dp)) = self.wp(z) else { break };
                let step = (p - w) / dp;
                if !(step.re.is_finite() && step.im.is_finite()) {
                    break;
                }
                z -= step;
                if step.norm() < 1e-15 * (1.0 + z.norm()) {
                    break;
                }
            }
            let Ok((p, _)) = self.wp(z) else { continue };
            if (p - w).norm() <= 1e-10 * (1.0 + w.norm()) {
                let z = Self::reduce_to_cell(z);
                let other = Self::reduce_to_cell(-z);
                if Self::distance(z, other) < TORUS_POINT_TOL {
                    return Ok(vec![(z, 2)]);
                }
                let mut pair = vec![(z, 1), (other, 1)];
                pair.sort_by(|a, b| a.0.re.total_cmp(&b.0.re).then(a.0.im.total_cmp(&b.0.im)));
                return Ok(pair);
            }
        }
        Err(EllipticError::NonConvergence)
    }
}

/// Adaptive Gauss–Legendre integral of `f` along the segment `[a, b]`.
pub fn integrate_segment(
    f: &impl Fn(Complex64) -> Option<Complex64>,
    a: Complex64,
    b: Complex64,
    tol: f64,
) -> Result<Complex64, EllipticError> {
    fn panel(f: &impl Fn(Complex64) -> Option<Complex64>, a: Complex64, b: Complex64) -> Option<Complex64> {
        let mid = (a + b) * 0.5;
        let half = (b - a) * 0.5;
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in gauss_legendre() {
            let v = f(mid + half * *x)?;
            if !(v.re.is_finite() && v.im.is_finite()) {
                return None;
            }
            acc += v * *w;
        }
        Some(acc * half)
    }
    fn recurse(
        f: &impl Fn(Complex64) -> Option<Complex64>,
        a: Complex64,
        b: Complex64,
        whole: Complex64,
        tol: f64,
        depth: usize,
    ) -> Result<Complex64, EllipticError> {
        let mid = (a + b) * 0.5;
        let left = panel(f, a, mid).ok_or(EllipticError::PathBlocked)?;
        let right = panel(f, mid, b).ok_or(EllipticError::PathBlocked)?;
        let sum = left + right;
        if (sum - whole).norm() <= tol {
            return Ok(sum);
        }
        if depth == 0 {
            return Err(EllipticError::PathBlocked);
        }
        Ok(recurse(f, a, mid, left, 0.5 * tol, depth - 1)? + recurse(f, mid, b, right, 0.5 * tol, depth - 1)?)
    }
    let whole = panel(f, a, b).ok_or(EllipticError::PathBlocked)?;
    recurse(f, a, b, whole, tol, QUADRATURE_DEPTH)
}

/// Integral along a polyline.
pub fn integrate_path(
    f: &impl Fn(Complex64) -> Option<Complex64>,
    path: &[Complex64],
    tol: f64,
) -> Result<Complex64, EllipticError> {
    let mut acc = Complex64::new(0.0, 0.0);
    for w in path.windows(2) {
        acc += integrate_segment(f, w[0], w[1], tol)?;
    }
    Ok(acc)
}

/// Winding number of `f` around the circle `|z - c| = r`, sampled at
/// `samples` points; `None` when the sampling is too coarse or `f` is not
/// finite and nonzero on the circle.
pub fn winding_number(f: &impl Fn(Complex64) -> Option<Complex64>, c: Complex64, r: f64, samples: usize) -> Option<i64> {
    let mut total = 0.0;
    let mut prev = f(c + r)?;
    for k in 1..=samples {
        let z = c + Complex64::from_polar(r, TAU * k as f64 / samples as f64);
        let v = f(z)?;
        if v.norm() == 0.0 || !(v.re.is_finite() && v.im.is_finite()) {
            return None;
        }
        let step = (v / prev).arg();
        if step.abs() > PI / 3.0 {
            return None;
        }
        total += step;
        prev = v;
    }
    let w = total / TAU;
    ((w - w.round()).abs() < 0.1).then_some(w.round() as i64)
}

/// Spherical distance between two values of the Riemann sphere, robust when
/// both are large.
fn chordal(a: Complex64, b: Complex64) -> f64 {
    if a.norm() > 1.0 && b.norm() > 1.0 {
        let (a, b) = (a.inv(), b.inv());
        (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
    } else {
        (a - b).norm() / ((1.0 + a.norm_sqr()) * (1.0 + b.norm_sqr())).sqrt()
    }
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

fn sort_cell_points(points: &mut [Complex64]) {
    points.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

fn push_cell_point(points: &mut Vec<Complex64>, z: Complex64) {
    let z = SquareTorus::reduce_to_cell(z);
    let z = Complex64::new(if z.re > 1.0 - 1e-9 { 0.0 } else { z.re }, if z.im > 1.0 - 1e-9 { 0.0 } else { z.im });
    if !points.iter().any(|p| SquareTorus::distance(*p, z) < 1e-6) {
        points.push(z);
    }
}

/// Number of solutions of `F = w` on the torus for generic `w`, counted by
/// the argument principle on a grid of small squares; each square
/// contributes zeros minus poles of `F - w`.
pub fn elliptic_degree(
    torus: &SquareTorus,
    f: &EllipticExpr,
    constants: &BTreeMap<String, Complex64>,
    probes: usize,
) -> Result<usize, EllipticError> {
    const GRID: usize = 16;
    const EDGE_SAMPLES: usize = 24;
    let value = |z: Complex64| -> Option<Complex64> {
        let jet = torus.jet(z).ok()?;
        let v = f.eval(&jet, constants).ok()?.value;
        finite(v).then_some(v)
    };
    let count_for = |w: Complex64, offset: Complex64| -> Option<usize> {
        let h = 1.0 / GRID as f64;
        let (mut zeros, mut poles) = (0i64, 0i64);
        for i in 0..GRID {
            for j in 0..GRID {
                let corner = offset + Complex64::new(i as f64 * h, j as f64 * h);
                let path = [
                    corner,
                    corner + Complex64::new(h, 0.0),
                    corner + Complex64::new(h, h),
                    corner + Complex64::new(0.0, h),
                    corner,
                ];
                let mut total = 0.0;
                let mut prev = value(path[0])? - w;
                for edge in path.windows(2) {
                    for k in 1..=EDGE_SAMPLES {
                        let z = edge[0] + (edge[1] - edge[0]) * (k as f64 / EDGE_SAMPLES as f64);
                        let v = value(z)? - w;
                        if v.norm() < 1e-12 {
                            return None;
                        }
                        let step = (v / prev).arg();
                        if step.abs() > PI / 3.0 {
                            return None;
                        }
                        total += step;
                        prev = v;
                    }
                }
                let n = total / TAU;
                if (n - n.round()).abs() > 0.1 {
                    return None;
                }
                let n = n.round() as i64;
                if n > 0 {
                    zeros += n;
                } else {
                    poles -= n;
                }
            }
        }
        (zeros == poles && zeros > 0).then_some(zeros as usize)
    };
    let offsets = [
        Complex64::new(0.0371, 0.0529),
        Complex64::new(0.0113, 0.0217),
        Complex64::new(0.0457, 0.0091),
    ];
    let mut counts = Vec::new();
    let mut k = 0usize;
    while counts.len() < probes.max(1) && k < 8 * probes.max(1) + 8 {
        let w = Complex64::from_polar(0.37 + 0.29 * (k % 7) as f64, 1.1 + 2.399963 * k as f64);
        k += 1;
        if let Some(c) = offsets.iter().find_map(|o| count_for(w, *o)) {
            counts.push(c);
        }
    }
    match counts.first() {
        Some(&c) if counts.len() >= probes.max(1) && counts.iter().all(|&x| x == c) => Ok(c),
        _ => Err(EllipticError::UnstableDegree),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleIntegral {
    pub label: &'static str,
    pub base: [f64; 2],
    pub re: f64,
    pub im: f64,
    /// `im / 2 pi`.
    pub winding: f64,
    /// The integral lies in `2 pi i Z` within the tolerance.
    pub in_2pi_i_z: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusPeriodReport {
    pub cycles: Vec<CycleIntegral>,
    /// Residues of `dG/(G - G*)` at the coincidence points, as `[re, im]`.
    pub residues: Vec<([f64; 2], [f64; 2])>,
    /// Every cycle integral and residue has vanishing real part, resp.
    /// imaginary part, within the tolerance.
    pub holds: bool,
    pub tolerance: f64,
}

pub const PERIOD_TOL: f64 = 1e-6;

/// A front on the square torus with numerically integrated `log |xi|^2`.
#[derive(Clone, Debug)]
pub struct EllipticFront {
    torus: SquareTorus,
    g: EllipticExpr,
    g_star: EllipticExpr,
    constants: BTreeMap<String, Complex64>,
    scale: f64,
    ends: Vec<Complex64>,
    coincidences: Vec<Complex64>,
    base: Complex64,
    anchors: Vec<(Complex64, f64)>,
}

impl EllipticFront {
    /// Builds the front and checks the period condition on both cycles and
    /// at every coincidence point.
    pub fn new(
        torus: SquareTorus,
        g: EllipticExpr,
        g_star: EllipticExpr,
        scale: f64,
        ends: Vec<Complex64>,
    ) -> Result<Self, EllipticError> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(EllipticError::InvalidScale(scale));
        }
        let mut front = Self {
            constants: torus.constants(),
            torus,
            g,
            g_star,
            scale,
            ends: Vec::new(),
            coincidences: Vec::new(),
            base: Complex64::new(0.0, 0.0),
            anchors: Vec::new(),
        };
        for e in ends {
            push_cell_point(&mut front.ends, e);
        }
        sort_cell_points(&mut front.ends);
        front.coincidences = front.find_coincidences()?;
        let report = front.period_check(64)?;
        if !report.holds {
            return Err(EllipticError::PeriodFailed(format!("{:?}", report.cycles)));
        }
        front.base = front.choose_base()?;
        front.anchors = front.build_anchors();
        Ok(front)
    }

    pub fn torus(&self) -> &SquareTorus {
        &self.torus
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Declared ends, in the cell `[0, 1)^2`.
    pub fn ends(&self) -> &[Complex64] {
        &self.ends
    }

    /// Every point of the cell where `G = G*` on the sphere.
    pub fn coincidences(&self) -> &[Complex64] {
        &self.coincidences
    }

    /// Coincidence points that were not declared as ends.
    pub fn undeclared_coincidences(&self) -> Vec<Complex64> {
        self.coincidences
            .iter()
            .copied()
            .filter(|c| !self.ends.iter().any(|e| SquareTorus::distance(*c, *e) < 1e-6))
            .collect()
    }

    pub fn gauss_maps(&self, z: Complex64) -> Result<(Jet, Jet), EllipticError> {
        let jet = self.torus.jet(z)?;
        let g = self.g.eval(&jet, &self.constants)?;
        let gs = self.g_star.eval(&jet, &self.constants)?;
        Ok((g, gs))
    }

    /// Coefficient of `dG/(G - G*)`.
    pub fn eta(&self, z: Complex64) -> Result<Complex64, EllipticError> {
        let (g, gs) = self.gauss_maps(z)?;
        let v = g.derivative / (g.value - gs.value);
        if finite(v) {
            Ok(v)
        } else {
            Err(EllipticError::NonFinite)
        }
    }

    /// Hopf differential coefficient `-G' G*' / (G - G*)^2`, evaluated in the
    /// inverted chart when both maps are large.
    pub fn hopf(&self, z: Complex64) -> Result<Complex64, EllipticError> {
        let (g, gs) = self.gauss_maps(z)?;
        let q = if g.value.norm() > 1.0 && gs.value.norm() > 1.0 {
            let (a, b) = (g.value.inv(), gs.value.inv());
            let (da, db) = (-g.derivative * a * a, -gs.derivative * b * b);
            -da * db / ((a - b) * (a - b))
        } else {
            -g.derivative * gs.derivative / ((g.value - gs.value) * (g.value - gs.value))
        };
        if finite(q) {
            Ok(q)
        } else {
            Err(EllipticError::NonFinite)
        }
    }

    /// Order of `Q` at a point, from its winding number on a small circle.
    pub fn hopf_order(&self, z: Complex64) -> Option<i64> {
        let others: f64 = self
            .coincidences
            .iter()
            .chain(self.ends.iter())
            .map(|c| SquareTorus::distance(*c, z))
            .filter(|d| *d > 1e-6)
            .fold(0.5, f64::min);
        let r = (0.1 * others).min(1e-2);
        winding_number(&|w| self.hopf(w).ok(), z, r, 512)
    }

    fn find_coincidences(&self) -> Result<Vec<Complex64>, EllipticError> {
        const GRID: usize = 48;
        let offset = Complex64::new(0.0113, 0.0071);
        let h = 1.0 / GRID as f64;
        let point = |i: usize, j: usize| offset + Complex64::new(i as f64 * h, j as f64 * h);
        let dist: Vec<f64> = (0..GRID * GRID)
            .map(|k| {
                let z = point(k % GRID, k / GRID);
                match self.gauss_maps(z) {
                    Ok((g, gs)) => chordal(g.value, gs.value),
                    Err(_) => 0.0,
                }
            })
            .collect();
        let at = |i: isize, j: isize| dist[(j.rem_euclid(GRID as isize) as usize) * GRID + i.rem_euclid(GRID as isize) as usize];
        let mut found = Vec::new();
        for j in 0..GRID as isize {
            for i in 0..GRID as isize {
                let v = at(i, j);
                let minimum = (-1..=1)
                    .flat_map(|di| (-1..=1).map(move |dj| (di, dj)))
                    .filter(|&(di, dj)| (di, dj) != (0, 0))
                    .all(|(di, dj)| v <= at(i + di, j + dj));
                if minimum && v < 0.2 {
                    if let Some(z) = self.refine_coincidence(point(i as usize, j as usize)) {
                        push_cell_point(&mut found, z);
                    }
                }
            }
        }
        sort_cell_points(&mut found);
        Ok(found)
    }

    /// Newton iteration on `G - G*` or `1/G - 1/G*`.
    fn refine_coincidence(&self, seed: Complex64) -> Option<Complex64> {
        let mut z = seed;
        let mut last = f64::INFINITY;
        for _ in 0..80 {
            let Ok((g, gs)) = self.gauss_maps(z) else {
                return (SquareTorus::reduce(z).norm() < 1e-9 && last < 1e-6).then_some(Complex64::new(0.0, 0.0));
            };
            let (h, dh) = if g.value.norm() > 1.0 && gs.value.norm() > 1.0 {
                let (a, b) = (g.value.inv(), gs.value.inv());
                (a - b, -g.derivative * a * a + gs.derivative * b * b)
            } else {
                (g.value - gs.value, g.derivative - gs.derivative)
            };
            last = h.norm();
            let step = h / dh;
            if !finite(step) {
                return None;
            }
            z -= step;
            if step.norm() < 1e-14 {
                break;
            }
            if SquareTorus::reduce(z).norm() < 1e-12 {
                return (last < 1e-6).then_some(Complex64::new(0.0, 0.0));
            }
        }
        let (g, gs) = self.gauss_maps(z).ok()?;
        (chordal(g.value, gs.value) < 1e-9).then_some(z)
    }

    fn singularities(&self) -> Vec<Complex64> {
        let mut s = self.coincidences.clone();
        for e in &self.ends {
            push_cell_point(&mut s, *e);
        }
        s
    }

    fn choose_base(&self) -> Result<Complex64, EllipticError> {
        let singular = self.singularities();
        (0..200)
            .map(|k| {
                let k = k as f64;
                SquareTorus::reduce_to_cell(Complex64::from_polar(0.31 + 0.173 * k, 0.7 + 2.399963 * k))
            })
            .find(|&z| {
                singular.iter().all(|s| SquareTorus::distance(*s, z) > 0.05) && self.eta(z).is_ok_and(|v| v.norm() < 1e3)
            })
            .ok_or(EllipticError::PathBlocked)
    }

    fn integrate_eta(&self, path: &[Complex64]) -> Result<Complex64, EllipticError> {
        integrate_path(&|z| self.eta(z).ok(), path, 1e-12)
    }

    /// Integral of `eta` from `a` to `b`, trying detours through fixed
    /// waypoints when the straight segment is blocked.
    fn integrate_between(&self, a: Complex64, b: Complex64) -> Result<Complex64, EllipticError> {
        if let Ok(v) = self.integrate_eta(&[a, b]) {
            return Ok(v);
        }
        let normal = Complex64::i() * (b - a);
        for s in [0.17, -0.23, 0.41, -0.47] {
            let mid = (a + b) * 0.5 + normal * s;
            if let Ok(v) = self.integrate_eta(&[a, mid, b]) {
                return Ok(v);
            }
        }
        Err(EllipticError::PathBlocked)
    }

    fn build_anchors(&self) -> Vec<(Complex64, f64)> {
        const N: usize = 8;
        let singular = self.singularities();
        (0..N * N)
            .filter_map(|k| {
                let z = Complex64::new(((k % N) as f64 + 0.5) / N as f64, ((k / N) as f64 + 0.5) / N as f64);
                if singular.iter().any(|s| SquareTorus::distance(*s, z) < 0.02) {
                    return None;
                }
                let v = self.integrate_between(self.base, z).ok()?;
                Some((z, 2.0 * v.re))
            })
            .collect()
    }

    /// `2 Re` of the integral of `eta` from the base point, which is
    /// `log |xi|^2 - log |c|^2`.
    pub fn re_primitive(&self, z: Complex64) -> Result<f64, EllipticError> {
        let w = SquareTorus::reduce_to_cell(z);
        let mut order: Vec<&(Complex64, f64)> = self.anchors.iter().collect();
        order.sort_by(|a, b| (a.0 - w).norm().total_cmp(&(b.0 - w).norm()));
        for (anchor, value) in order.into_iter().take(6) {
            if let Ok(v) = self.integrate_eta(&[*anchor, w]) {
                return Ok(value + 2.0 * v.re);
            }
        }
        Ok(2.0 * self.integrate_between(self.base, w)?.re)
    }

    pub fn xi_log_modulus(&self, z: Complex64) -> Result<f64, EllipticError> {
        Ok(2.0 * self.scale.ln() + self.re_primitive(z)?)
    }

    /// Integrals of `eta` along the two generating cycles and residues at
    /// the coincidence points.
    pub fn period_check(&self, resolution: usize) -> Result<TorusPeriodReport, EllipticError> {
        let resolution = resolution.max(4);
        let singular = self.singularities();
        let mut cycles = Vec::new();
        for (label, dir) in [("real", Complex64::new(1.0, 0.0)), ("imaginary", Complex64::i())] {
            let normal = dir * Complex64::i();
            let mut done = None;
            for k in 0..32 {
                let base = Complex64::new(0.137, 0.291) + normal * (0.031 * k as f64);
                let path: Vec<Complex64> = (0..=resolution).map(|s| base + dir * (s as f64 / resolution as f64)).collect();
                let clear = path.iter().all(|z| singular.iter().all(|s| SquareTorus::distance(*s, *z) > 0.5 / resolution as f64));
                if !clear {
                    continue;
                }
                if let Ok(v) = self.integrate_eta(&path) {
                    done = Some((base, v));
                    break;
                }
            }
            let (base, v) = done.ok_or(EllipticError::PathBlocked)?;
            let winding = v.im / TAU;
            cycles.push(CycleIntegral {
                label,
                base: [base.re, base.im],
                re: v.re,
                im: v.im,
                winding,
                in_2pi_i_z: v.re.abs() < PERIOD_TOL && (winding - winding.round()).abs() * TAU < PERIOD_TOL,
            });
        }
        let mut residues = Vec::new();
        for c in &self.coincidences {
            let others = singular
                .iter()
                .map(|s| SquareTorus::distance(*s, *c))
                .filter(|d| *d > 1e-6)
                .fold(0.5, f64::min);
            let r = (0.25 * others).min(1e-2);
            let circle: Vec<Complex64> = (0..=16).map(|k| c + Complex64::from_polar(r, TAU * k as f64 / 16.0)).collect();
            let v = self.integrate_eta(&circle)? / Complex64::new(0.0, TAU);
            residues.push(([c.re, c.im], [v.re, v.im]));
        }
        let holds = cycles.iter().all(|c| c.re.abs() < PERIOD_TOL) && residues.iter().all(|(_, r)| r[1].abs() < PERIOD_TOL);
        Ok(TorusPeriodReport {
            cycles,
            residues,
            holds,
            tolerance: PERIOD_TOL,
        })
    }

    /// Largest relative deviation of `eta` from `R'/R` over `samples`
    /// deterministic points.
    pub fn eta_deviation(&self, reference: &EllipticExpr, samples: usize) -> Result<f64, EllipticError> {
        let singular = self.singularities();
        let mut worst: f64 = 0.0;
        let mut taken = 0;
        let mut k = 0usize;
        while taken < samples {
            let z = SquareTorus::reduce_to_cell(Complex64::new(0.1234 + 0.618034 * k as f64, 0.3771 + 0.414214 * k as f64));
            k += 1;
            if k > 20 * samples + 20 {
                break;
            }
            if singular.iter().any(|s| SquareTorus::distance(*s, z) < 1e-3) {
                continue;
            }
            let jet = self.torus.jet(z)?;
            let r = reference.eval(&jet, &self.constants)?;
            let want = r.derivative / r.value;
            let got = self.eta(z)?;
            worst = worst.max((got - want).norm() / (1.0 + want.norm()));
            taken += 1;
        }
        Ok(worst)
    }
}

const IDENTITY: Matrix2 = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
];
const INVERSION: Matrix2 = [
    [Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0)],
    [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
];
const SHEAR: Matrix2 = [
    [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
    [Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
];

/// Gauss-map data after the target motion `a`: `G -> (a11 G + a12)/(a21 G + a22)`
/// and `log |xi|^2 -> log |xi|^2 - 2 log |a21 G + a22|`.
fn moved_frame(a: &Matrix2, g: &Jet, gs: &Jet, log_u: f64) -> Option<LocalFrame> {
    let den = a[1][0] * g.value + a[1][1];
    let den_s = a[1][0] * gs.value + a[1][1];
    let frame = LocalFrame {
        chart: *a,
        g: (a[0][0] * g.value + a[0][1]) / den,
        dg: g.derivative / (den * den),
        g_star: (a[0][0] * gs.value + a[0][1]) / den_s,
        dg_star: gs.derivative / (den_s * den_s),
        log_u: log_u - 2.0 * den.norm().ln(),
    };
    let ok = [frame.g, frame.dg, frame.g_star, frame.dg_star].iter().all(|c| finite(*c)) && frame.log_u.is_finite();
    ok.then_some(frame)
}

impl FrontGeometry for EllipticFront {
    fn local_frame(&self, z: Complex64) -> Result<LocalFrame, FrontError> {
        if self.singularities().iter().any(|s| SquareTorus::distance(*s, z) < 1e-12) {
            return Err(FrontError::AtEnd);
        }
        let (g, gs) = self.gauss_maps(z)?;
        let log_u = self.xi_log_modulus(z)?;
        let modulus = |f: &LocalFrame| f.g.norm().max(f.g_star.norm());
        if let Some(frame) = moved_frame(&IDENTITY, &g, &gs, log_u) {
            if modulus(&frame) <= CHART_SWITCH_MODULUS {
                return Ok(frame);
            }
        }
        [IDENTITY, INVERSION, SHEAR]
            .iter()
            .filter_map(|a| moved_frame(a, &g, &gs, log_u))
            .min_by(|a, b| modulus(a).total_cmp(&modulus(b)))
            .ok_or(FrontError::NonFinite)
    }

    fn exclusion_points(&self) -> Vec<Complex64> {
        let singular = self.singularities();
        let mut out = Vec::new();
        for m in -2..=2 {
            for n in -2..=2 {
                out.extend(singular.iter().map(|s| s + Complex64::new(m as f64, n as f64)));
            }
        }
        out
    }

    fn numeric_backend(&self) -> bool {
        true
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusEnd {
    pub point: [f64; 2],
    pub ord_q: Option<i64>,
    pub regular: bool,
    pub complete_by_pole: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusAnalysis {
    pub a: f64,
    pub g2: f64,
    pub ends: Vec<TorusEnd>,
    pub coincidences: Vec<[f64; 2]>,
    pub undeclared_coincidences: Vec<TorusEnd>,
    pub period: TorusPeriodReport,
    pub d: usize,
    pub d_star: usize,
    pub osserman: OssermanSummary,
}

pub fn analyze_torus(front: &EllipticFront, probes: usize) -> Result<TorusAnalysis, EllipticError> {
    let end_record = |z: &Complex64| {
        let ord_q = front.hopf_order(*z);
        TorusEnd {
            point: [z.re, z.im],
            ord_q,
            regular: ord_q.is_some_and(|o| o >= -2),
            complete_by_pole: ord_q.is_some_and(|o| o <= -1),
        }
    };
    let ends: Vec<TorusEnd> = front.ends.iter().map(end_record).collect();
    let undeclared: Vec<TorusEnd> = front.undeclared_coincidences().iter().map(end_record).collect();
    let d = elliptic_degree(&front.torus, &front.g, &front.constants, probes)?;
    let d_star = elliptic_degree(&front.torus, &front.g_star, &front.constants, probes)?;
    let complete_regular = ends.iter().all(|e| e.regular && e.complete_by_pole);
    Ok(TorusAnalysis {
        a: front.torus.a,
        g2: front.torus.g2(),
        osserman: OssermanSummary::new(d, d_star, ends.len(), complete_regular),
        ends,
        coincidences: front.coincidences.iter().map(|c| [c.re, c.im]).collect(),
        undeclared_coincidences: undeclared,
        period: front.period_check(128)?,
        d,
        d_star,
    })
}
