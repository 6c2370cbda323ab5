use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use super::geometry::{front_from_frame, FrontGeometry};
use super::locus::{locus_from_samples, SamplingPlan, SingularLocus};
use super::FrontError;

pub const DEFAULT_RESOLUTION: usize = 256;
/// Exclusion radius around ends as a fraction of the sampled region's diameter.
pub const DEFAULT_EXCLUSION_FRACTION: f64 = 1e-2;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Mesh {
    /// Points of the Poincaré ball.
    pub vertices: Vec<[f64; 3]>,
    /// Parameter of each vertex.
    pub params: Vec<[f64; 2]>,
    pub faces: Vec<[usize; 3]>,
    /// `|rho|` at each vertex.
    pub rho: Vec<f64>,
    /// Parallel-front parameter of each vertex.
    pub t: Vec<f64>,
    /// Singular curves mapped into the ball.
    pub singular: Vec<Vec<[f64; 3]>>,
    pub singular_params: SingularLocus,
    pub numeric_backend: bool,
}

/// Ball point, parameter and `log |rho|^2` of one grid sample.
type Sample = ([f64; 3], [f64; 2], f64);

/// Samples the front on a regular grid, drops samples near ends or where
/// evaluation fails, and triangulates every cell whose corners all survive.
pub fn mesh(
    front: &impl FrontGeometry,
    plan: &SamplingPlan,
    resolution: usize,
    t: f64,
    exclusion_radius: Option<f64>,
) -> Result<Mesh, FrontError> {
    plan.validate()?;
    if resolution < 2 {
        return Err(FrontError::InvalidResolution(resolution));
    }
    let n = resolution;
    let radius = exclusion_radius.unwrap_or(DEFAULT_EXCLUSION_FRACTION * plan.diameter());
    let avoid = front.exclusion_points();
    let samples: Vec<Option<Sample>> = (0..=n)
        .into_par_iter()
        .flat_map_iter(|j| {
            let avoid = &avoid;
            (0..=n).map(move |i| {
                let z = plan.point(i as f64, j as f64, n);
                if avoid.iter().any(|e| (z - e).norm() < radius) {
                    return None;
                }
                let frame = front.local_frame(z).ok()?;
                let point = front_from_frame(&frame, t).ok()?;
                let b = point.ball;
                let r2 = b[0] * b[0] + b[1] * b[1] + b[2] * b[2];
                if r2.is_nan() || r2 >= 1.0 {
                    return None;
                }
                Some((b, [z.re, z.im], frame.log_rho_sq()))
            })
        })
        .collect();

    let mut index = vec![usize::MAX; samples.len()];
    let mut vertices = Vec::new();
    let mut params = Vec::new();
    let mut rho = Vec::new();
    let mut log_rho = Vec::with_capacity(samples.len());
    for (k, s) in samples.iter().enumerate() {
        match s {
            Some((b, p, lr)) => {
                index[k] = vertices.len();
                vertices.push(*b);
                params.push(*p);
                rho.push((0.5 * lr).exp());
                log_rho.push(*lr);
            }
            None => log_rho.push(f64::NAN),
        }
    }
    if vertices.is_empty() {
        return Err(FrontError::EmptyMesh);
    }
    let id = |i: usize, j: usize| index[j * (n + 1) + i];
    let mut faces = Vec::new();
    for j in 0..n {
        for i in 0..n {
            let c = [id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)];
            if c.iter().all(|&v| v != usize::MAX) {
                faces.push([c[0], c[1], c[2]]);
                faces.push([c[0], c[2], c[3]]);
            }
        }
    }

    let singular_params = locus_from_samples(&log_rho, plan, n);
    let singular = singular_params
        .polylines
        .iter()
        .map(|line| {
            line.iter()
                .filter_map(|p| {
                    let z = num_complex::Complex64::new(p[0], p[1]);
                    let frame = front.local_frame(z).ok()?;
                    front_from_frame(&frame, t).ok().map(|fp| fp.ball)
                })
                .collect::<Vec<_>>()
        })
        .filter(|l| l.len() >= 2)
        .collect();

    Ok(Mesh {
        t: vec![t; vertices.len()],
        vertices,
        params,
        faces,
        rho,
        singular,
        singular_params,
        numeric_backend: front.numeric_backend(),
    })
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

impl Mesh {
    /// ASCII OBJ: surface vertices and faces, then the singular curves as
    /// extra vertices joined by `l` elements. Indices are 1-based.
    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        out.push_str("# flat front mesh\n");
        for v in &self.vertices {
            let _ = writeln!(out, "v {} {} {}", num(v[0]), num(v[1]), num(v[2]));
        }
        let mut next = self.vertices.len() + 1;
        let mut lines = Vec::new();
        for curve in &self.singular {
            let start = next;
            for v in curve {
                let _ = writeln!(out, "v {} {} {}", num(v[0]), num(v[1]), num(v[2]));
                next += 1;
            }
            lines.push((start..next).map(|i| i.to_string()).collect::<Vec<_>>().join(" "));
        }
        for f in &self.faces {
            let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
        for l in lines {
            let _ = writeln!(out, "l {l}");
        }
        out
    }

    pub fn sidecar(&self, spec_echo: serde_json::Value) -> serde_json::Value {
        json!({
            "rho": self.rho.iter().map(|r| num(*r)).collect::<Vec<_>>(),
            "t": self.t.iter().map(|r| num(*r)).collect::<Vec<_>>(),
            "spec": spec_echo,
            "vertex_count": self.vertices.len(),
            "face_count": self.faces.len(),
            "singular_curves": self.singular.len(),
            "singular_params": self
                .singular_params
                .polylines
                .iter()
                .map(|l| l.iter().map(|p| [num(p[0]), num(p[1])]).collect::<Vec<_>>())
                .collect::<Vec<_>>(),
            "degenerate_singular_set": self.singular_params.degenerate,
            "numeric_backend": self.numeric_backend,
        })
    }

    /// Writes `<stem>.obj` and `<stem>.json`.
    pub fn write(&self, obj_path: &Path, spec_echo: serde_json::Value) -> io::Result<()> {
        let mut obj = std::fs::File::create(obj_path)?;
        obj.write_all(self.to_obj().as_bytes())?;
        let json_path = obj_path.with_extension("json");
        let text = serde_json::to_string_pretty(&self.sidecar(spec_echo)).map_err(io::Error::other)?;
        std::fs::write(json_path, text + "\n")
    }
}
