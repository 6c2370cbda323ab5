use serde::Serialize;

use super::geometry::canonical_data;
use super::spec::{values_agree, FrontSpec};
use super::FrontError;
use crate::algebra::{RationalMap, Value};
use crate::sphere::{evaluate, order_at, residue, ExtendedPoint};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EndRecord {
    pub point: ExtendedPoint,
    /// Order of the Hopf differential as a quadratic differential; `None`
    /// when `Q` vanishes identically.
    pub ord_q: Option<i64>,
    /// `ord Q >= -2`.
    pub regular: bool,
    /// `ord Q <= -1`.
    pub complete_by_pole: bool,
    /// Divergence of `|omega|^2 + |theta|^2` at the end, decided from its
    /// local exponent; `None` when `xi` has an essential singularity there.
    pub complete_by_metric: Option<bool>,
    pub g_value: ExtendedPoint,
    pub g_star_value: ExtendedPoint,
    pub values_agree: bool,
}

impl EndRecord {
    pub fn complete(&self) -> bool {
        self.complete_by_pole || self.complete_by_metric == Some(true)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OssermanSummary {
    pub d: usize,
    pub d_star: usize,
    pub k: usize,
    /// `d + d* >= k`.
    pub holds: bool,
    pub equality: bool,
    /// Every end is regular and complete, so the inequality applies.
    pub complete_regular: bool,
    /// Equality together with completeness and regularity.
    pub embedded: bool,
}

impl OssermanSummary {
    pub fn new(d: usize, d_star: usize, k: usize, complete_regular: bool) -> Self {
        let equality = d + d_star == k;
        Self {
            d,
            d_star,
            k,
            holds: d + d_star >= k,
            equality,
            complete_regular,
            embedded: equality && complete_regular,
        }
    }
}

/// Order of the quadratic differential `q dz^2` at `p`.
pub fn quadratic_order(q: &RationalMap, p: &ExtendedPoint) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let o = order_at(q, p).expect("nonzero");
    Some(if p.is_infinity() { o - 4 } else { o })
}

/// Order of the 1-form `c dz` at `p`; `None` for the zero form.
pub fn linear_order(c: &RationalMap, p: &ExtendedPoint) -> Option<i64> {
    if c.is_zero() {
        return None;
    }
    let o = order_at(c, p).expect("nonzero");
    Some(if p.is_infinity() { o - 2 } else { o })
}

fn metric_exponent(spec: &FrontSpec, p: &ExtendedPoint) -> Option<bool> {
    let eta = spec.eta();
    if linear_order(&eta.coefficient, p).is_some_and(|o| o < -1) {
        return None;
    }
    let r = match residue(&eta, p).ok()? {
        Value::Exact(g) => crate::algebra::ratio_to_f64(g.re()),
        Value::Numeric(z) => z.re,
    };
    let delta = spec.g.sub(&spec.g_star);
    let ord_delta = order_at(&delta, p).ok()? as f64;
    let e_omega = linear_order(&spec.g.derivative(), p).map(|o| o as f64 - 2.0 * r);
    let e_theta = linear_order(&spec.g_star.derivative(), p).map(|o| 2.0 * r + o as f64 - 2.0 * ord_delta);
    let min = match (e_omega, e_theta) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => return None,
    };
    Some(min <= -1.0 + 1e-9)
}

pub fn classify_ends(spec: &FrontSpec) -> Result<(Vec<EndRecord>, OssermanSummary), FrontError> {
    let q = canonical_data(spec).q;
    let records: Vec<EndRecord> = spec
        .ends
        .iter()
        .map(|p| {
            let ord_q = quadratic_order(&q, p);
            EndRecord {
                point: p.clone(),
                ord_q,
                regular: ord_q.is_none_or(|o| o >= -2),
                complete_by_pole: ord_q.is_some_and(|o| o <= -1),
                complete_by_metric: metric_exponent(spec, p),
                g_value: evaluate(&spec.g, p),
                g_star_value: evaluate(&spec.g_star, p),
                values_agree: values_agree(&spec.g, &spec.g_star, p),
            }
        })
        .collect();
    let complete_regular = records.iter().all(|r| r.regular && r.complete());
    let summary = OssermanSummary::new(spec.g.degree(), spec.g_star.degree(), spec.k(), complete_regular);
    Ok((records, summary))
}

/// `|omega|^2 + |theta|^2` as a density with respect to `|dz|^2`.
pub fn sasakian_density(spec: &FrontSpec, z: num_complex::Complex64, log_u: f64) -> f64 {
    let data = canonical_data(spec);
    let u = log_u.exp();
    let omega = data.omega.factor.eval_complex(z).norm_sqr() / (u * u);
    let theta = data.theta.factor.eval_complex(z).norm_sqr() * u * u;
    omega + theta
}
