use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::geometry::FrontGeometry;
use super::FrontError;

/// Values of `log |rho|^2` beyond this magnitude are clamped before
/// interpolation, so zeros and poles of `rho` do not produce NaNs.
const CLAMP: f64 = 1e6;
const DEGENERATE_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self, FrontError> {
        let w = Self { x0, x1, y0, y1 };
        w.validate()?;
        Ok(w)
    }

    pub fn square(half_width: f64) -> Self {
        Self {
            x0: -half_width,
            x1: half_width,
            y0: -half_width,
            y1: half_width,
        }
    }

    pub fn validate(&self) -> Result<(), FrontError> {
        let ok = [self.x0, self.x1, self.y0, self.y1].iter().all(|v| v.is_finite())
            && self.x1 > self.x0
            && self.y1 > self.y0;
        if ok {
            Ok(())
        } else {
            Err(FrontError::DegenerateWindow)
        }
    }

    pub fn diameter(&self) -> f64 {
        (self.x1 - self.x0).hypot(self.y1 - self.y0)
    }
}

/// Parameter-domain sampling: a rectangle or an annulus `r0 <= |z - c| <= r1`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum SamplingPlan {
    Window(Window),
    Annulus { center: [f64; 2], r0: f64, r1: f64 },
}

impl SamplingPlan {
    pub fn validate(&self) -> Result<(), FrontError> {
        match self {
            SamplingPlan::Window(w) => w.validate(),
            SamplingPlan::Annulus { center, r0, r1 } => {
                if center.iter().all(|c| c.is_finite()) && r0.is_finite() && r1.is_finite() && *r0 > 0.0 && r1 > r0 {
                    Ok(())
                } else {
                    Err(FrontError::DegenerateWindow)
                }
            }
        }
    }

    pub fn diameter(&self) -> f64 {
        match self {
            SamplingPlan::Window(w) => w.diameter(),
            SamplingPlan::Annulus { r1, .. } => 2.0 * r1,
        }
    }

    /// Parameter point at fractional grid position `(i, j)` on an `n x n` grid.
    pub fn point(&self, i: f64, j: f64, n: usize) -> Complex64 {
        let (s, t) = (i / n as f64, j / n as f64);
        match self {
            SamplingPlan::Window(w) => Complex64::new(w.x0 + s * (w.x1 - w.x0), w.y0 + t * (w.y1 - w.y0)),
            SamplingPlan::Annulus { center, r0, r1 } => {
                let r = r0 + s * (r1 - r0);
                Complex64::new(center[0], center[1]) + Complex64::from_polar(r, std::f64::consts::TAU * t)
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SingularLocus {
    /// Polylines in the parameter plane.
    pub polylines: Vec<Vec<[f64; 2]>>,
    /// `|rho| = 1` on the whole sampled region, so no curve is drawn.
    pub degenerate: bool,
}

/// Samples `log |rho|^2` on the grid; excluded or failed samples are NaN.
pub(crate) fn sample_log_rho(
    front: &impl FrontGeometry,
    plan: &SamplingPlan,
    n: usize,
    exclusion_radius: f64,
) -> Vec<f64> {
    let avoid = front.exclusion_points();
    (0..=n)
        .into_par_iter()
        .flat_map_iter(|j| {
            let avoid = &avoid;
            (0..=n).map(move |i| {
                let z = plan.point(i as f64, j as f64, n);
                if avoid.iter().any(|e| (z - e).norm() < exclusion_radius) {
                    return f64::NAN;
                }
                match front.local_frame(z) {
                    Ok(frame) => frame.log_rho_sq(),
                    Err(_) => f64::NAN,
                }
            })
        })
        .collect()
}

pub fn singular_locus(
    front: &impl FrontGeometry,
    plan: &SamplingPlan,
    resolution: usize,
    exclusion_radius: Option<f64>,
) -> Result<SingularLocus, FrontError> {
    plan.validate()?;
    if resolution < 2 {
        return Err(FrontError::InvalidResolution(resolution));
    }
    let radius = exclusion_radius.unwrap_or(super::mesh::DEFAULT_EXCLUSION_FRACTION * plan.diameter());
    let values = sample_log_rho(front, plan, resolution, radius);
    Ok(locus_from_samples(&values, plan, resolution))
}

pub(crate) fn locus_from_samples(values: &[f64], plan: &SamplingPlan, n: usize) -> SingularLocus {
    let finite: Vec<f64> = values.iter().copied().filter(|v| !v.is_nan()).collect();
    if !finite.is_empty() && finite.iter().all(|v| v.abs() <= DEGENERATE_TOL) {
        return SingularLocus {
            polylines: Vec::new(),
            degenerate: true,
        };
    }
    let grid: Vec<f64> = values.iter().map(|v| v.clamp(-CLAMP, CLAMP)).collect();
    let polylines = contour(&grid, n)
        .into_iter()
        .map(|line| {
            line.into_iter()
                .map(|(i, j)| {
                    let z = plan.point(i, j, n);
                    [z.re, z.im]
                })
                .collect()
        })
        .collect();
    SingularLocus {
        polylines,
        degenerate: false,
    }
}

/// Grid edge: `(i, j, horizontal)` joins `(i, j)` to `(i+1, j)` when
/// horizontal and to `(i, j+1)` otherwise.
type Edge = (usize, usize, bool);

/// Zero level set of a `(n+1) x (n+1)` row-major grid, as polylines in
/// fractional grid coordinates. Cells with a NaN corner are skipped.
pub(crate) fn contour(values: &[f64], n: usize) -> Vec<Vec<(f64, f64)>> {
    let at = |i: usize, j: usize| values[j * (n + 1) + i];
    let mut segments: Vec<(Edge, Edge)> = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let v = [at(i, j), at(i + 1, j), at(i + 1, j + 1), at(i, j + 1)];
            if v.iter().any(|x| x.is_nan()) {
                continue;
            }
            let case = v
                .iter()
                .enumerate()
                .fold(0usize, |acc, (k, x)| acc | (usize::from(*x > 0.0) << k));
            let bottom = (i, j, true);
            let right = (i + 1, j, false);
            let top = (i, j + 1, true);
            let left = (i, j, false);
            let centre_positive = v.iter().sum::<f64>() > 0.0;
            let pairs: &[(Edge, Edge)] = match case {
                0 | 15 => &[],
                1 | 14 => &[(left, bottom)],
                2 | 13 => &[(bottom, right)],
                3 | 12 => &[(left, right)],
                4 | 11 => &[(right, top)],
                6 | 9 => &[(bottom, top)],
                7 | 8 => &[(left, top)],
                5 => {
                    if centre_positive {
                        &[(left, top), (bottom, right)]
                    } else {
                        &[(left, bottom), (right, top)]
                    }
                }
                10 => {
                    if centre_positive {
                        &[(left, bottom), (right, top)]
                    } else {
                        &[(left, top), (bottom, right)]
                    }
                }
                _ => unreachable!(),
            };
            segments.extend_from_slice(pairs);
        }
    }
    let crossing = |e: Edge| -> (f64, f64) {
        let (i, j, horizontal) = e;
        let (a, b) = if horizontal { (at(i, j), at(i + 1, j)) } else { (at(i, j), at(i, j + 1)) };
        let s = if a == b { 0.5 } else { a / (a - b) };
        if horizontal {
            (i as f64 + s, j as f64)
        } else {
            (i as f64, j as f64 + s)
        }
    };
    stitch(&segments).into_iter().map(|line| line.into_iter().map(crossing).collect()).collect()
}

fn stitch(segments: &[(Edge, Edge)]) -> Vec<Vec<Edge>> {
    let mut incident: HashMap<Edge, Vec<usize>> = HashMap::new();
    for (k, (a, b)) in segments.iter().enumerate() {
        incident.entry(*a).or_default().push(k);
        incident.entry(*b).or_default().push(k);
    }
    let mut used = vec![false; segments.len()];
    let mut lines = Vec::new();
    let walk = |start: Edge, used: &mut Vec<bool>| -> Vec<Edge> {
        let mut line = vec![start];
        let mut current = start;
        while let Some(&k) = incident[&current].iter().find(|&&k| !used[k]) {
            used[k] = true;
            let (a, b) = segments[k];
            current = if a == current { b } else { a };
            line.push(current);
        }
        line
    };
    let mut starts: Vec<Edge> = incident
        .iter()
        .filter(|(_, segs)| segs.len() == 1)
        .map(|(e, _)| *e)
        .collect();
    starts.sort_unstable();
    for start in starts {
        if incident[&start].iter().all(|&k| used[k]) {
            continue;
        }
        lines.push(walk(start, &mut used));
    }
    for k in 0..segments.len() {
        if !used[k] {
            lines.push(walk(segments[k].0, &mut used));
        }
    }
    lines
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_from_grid() {
        let n = 64;
        let plan = SamplingPlan::Window(Window::square(2.0));
        let values: Vec<f64> = (0..=n)
            .flat_map(|j| (0..=n).map(move |i| (i, j)))
            .map(|(i, j)| plan.point(i as f64, j as f64, n).norm() - 1.0)
            .collect();
        let locus = locus_from_samples(&values, &plan, n);
        assert_eq!(locus.polylines.len(), 1);
        let line = &locus.polylines[0];
        assert_eq!(line.first(), line.last());
        for p in line {
            assert!((p[0].hypot(p[1]) - 1.0).abs() < 5e-3);
        }
    }

    #[test]
    fn open_curves_end_on_boundary() {
        let n = 10;
        let plan = SamplingPlan::Window(Window::square(1.0));
        let values: Vec<f64> = (0..=n)
            .flat_map(|j| (0..=n).map(move |i| (i, j)))
            .map(|(i, j)| plan.point(i as f64, j as f64, n).re - 0.05)
            .collect();
        let locus = locus_from_samples(&values, &plan, n);
        assert_eq!(locus.polylines.len(), 1);
        assert_eq!(locus.polylines[0].len(), n + 1);
        assert!(locus.polylines[0].iter().all(|p| (p[0] - 0.05).abs() < 1e-12));
    }

    #[test]
    fn constant_zero_is_degenerate() {
        let plan = SamplingPlan::Window(Window::square(1.0));
        let locus = locus_from_samples(&[0.0; 16], &plan, 3);
        assert!(locus.degenerate);
    }

    #[test]
    fn invalid_windows() {
        assert_eq!(Window::new(1.0, 0.0, 0.0, 1.0), Err(FrontError::DegenerateWindow));
        assert!(SamplingPlan::Annulus { center: [0.0, 0.0], r0: 2.0, r1: 1.0 }.validate().is_err());
    }
}
