//! End-to-end analysis of a front and its JSON report.
//!
//! Exact quantities are written as `p/q` strings, numeric ones with 17
//! significant digits, so identical inputs give byte-identical output.

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::Value;
use crate::elliptic::{analyze_torus, EllipticError, EllipticFront, TorusEnd};
use crate::expr::{parse_constant, parse_rational, Bindings, ParseError};
use crate::front::{
    canonical_data, classify_ends, front_condition, period_check, EndRecord, FrontCondition, FrontError, FrontSpec,
    OssermanSummary,
};
use crate::sphere::{format_complex, format_real, ExtendedPoint};
use crate::valuedist::{
    proof_bounds, ratio_string, totally_ramified, verify_main_theorem, TRVReport, TheoremVerdict, ValueDistError,
};

/// Number of probe values used when counting degrees on the torus.
pub const TORUS_DEGREE_PROBES: usize = 5;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Front(#[from] FrontError),
    #[error(transparent)]
    ValueDist(#[from] ValueDistError),
    #[error(transparent)]
    Elliptic(#[from] EllipticError),
    #[error("invalid end `{0}`")]
    InvalidEnd(String),
}

/// Parses a comma-separated list of points; `inf` denotes infinity.
pub fn parse_ends(text: &str) -> Result<Vec<ExtendedPoint>, AnalysisError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse_point)
        .collect()
}

pub fn parse_point(text: &str) -> Result<ExtendedPoint, AnalysisError> {
    let t = text.trim();
    if matches!(t, "inf" | "infinity" | "∞") {
        return Ok(ExtendedPoint::Infinity);
    }
    parse_constant(t)
        .map(ExtendedPoint::exact)
        .map_err(|_| AnalysisError::InvalidEnd(t.to_string()))
}

pub fn value_string(v: &Value) -> String {
    match v {
        Value::Exact(g) => g.to_string(),
        Value::Numeric(z) => format_complex(*z),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpecEcho {
    pub g: String,
    pub g_star: String,
    pub params: BTreeMap<String, String>,
    pub scale: String,
    pub genus: u8,
    pub ends: Vec<String>,
}

impl SpecEcho {
    pub fn new(g: &str, g_star: &str, params: &Bindings, scale: f64, genus: u8, ends: Vec<String>) -> Self {
        Self {
            g: g.to_string(),
            g_star: g_star.to_string(),
            params: params.iter().map(|(k, v)| (k.clone(), v.to_string())).collect(),
            scale: format_real(scale),
            genus,
            ends,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoleEntry {
    pub location: ExtendedPoint,
    pub order: usize,
    pub residue: String,
    pub residue_is_real: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodEntry {
    pub poles: Vec<PoleEntry>,
    pub verdict: bool,
    pub justification: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OrderEntry {
    pub point: ExtendedPoint,
    pub ord: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CanonicalEntry {
    #[serde(rename = "Q")]
    pub q: String,
    #[serde(rename = "ordQ")]
    pub ord_q: Vec<OrderEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Degrees {
    pub d: usize,
    pub dstar: usize,
    pub k: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OssermanEntry {
    pub holds: bool,
    pub equality: bool,
    pub embedded: bool,
    pub complete_regular: bool,
}

impl From<&OssermanSummary> for OssermanEntry {
    fn from(s: &OssermanSummary) -> Self {
        Self {
            holds: s.holds,
            equality: s.equality,
            embedded: s.embedded,
            complete_regular: s.complete_regular,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RamifiedEntry {
    pub value: ExtendedPoint,
    pub nu_i: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsEntry {
    pub rh: bool,
    pub trvn1: bool,
    pub ex_rami: bool,
    pub trvn1_rhs: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MapValueDist {
    pub exceptional: Vec<ExtendedPoint>,
    pub ramified: Vec<RamifiedEntry>,
    pub r0: usize,
    pub l0: usize,
    pub n0: usize,
    pub nr: usize,
    pub n_g: usize,
    pub nu: String,
    pub exact: bool,
    pub bounds: BoundsEntry,
}

impl MapValueDist {
    fn new(r: &TRVReport, genus: u32, k: usize) -> Self {
        let b = proof_bounds(r, genus, k);
        Self {
            exceptional: r.exceptional_values(),
            ramified: r
                .ramified
                .iter()
                .map(|v| RamifiedEntry {
                    value: v.value.clone(),
                    nu_i: v.nu_i,
                })
                .collect(),
            r0: r.r0,
            l0: r.l0,
            n0: r.n0,
            nr: r.nr,
            n_g: r.n_g,
            nu: ratio_string(&r.nu),
            exact: r.exact,
            bounds: BoundsEntry {
                rh: b.rh,
                trvn1: b.trvn1,
                ex_rami: b.ex_rami,
                trvn1_rhs: ratio_string(&b.trvn1_rhs),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ValueDistEntry {
    /// `None` for a constant map.
    #[serde(rename = "G")]
    pub g: Option<MapValueDist>,
    #[serde(rename = "G*")]
    pub g_star: Option<MapValueDist>,
    /// `None` when a map is constant or `k < 3`.
    pub theorem22: Option<TheoremVerdict>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub spec: SpecEcho,
    pub ends: Vec<EndRecord>,
    pub period: PeriodEntry,
    pub front_condition: FrontCondition,
    pub canonical: CanonicalEntry,
    pub degrees: Degrees,
    pub osserman: OssermanEntry,
    pub valuedist: ValueDistEntry,
    pub horosphere: bool,
}

/// Runs the whole genus-zero pipeline. A failed period condition is
/// recorded in the report, not returned as an error.
pub fn analyze_spec(spec: &FrontSpec, echo: SpecEcho) -> Result<AnalysisReport, AnalysisError> {
    let period = period_check(&spec.g, &spec.g_star)?;
    let condition = front_condition(&spec.g, &spec.g_star)?;
    let (ends, summary) = classify_ends(spec)?;
    let q = canonical_data(spec).q;
    let k = spec.k();
    let per_map = |g: &crate::algebra::RationalMap| -> Result<Option<(TRVReport, MapValueDist)>, AnalysisError> {
        if g.is_constant() {
            return Ok(None);
        }
        let r = totally_ramified(g, &spec.ends)?;
        let entry = MapValueDist::new(&r, 0, k);
        Ok(Some((r, entry)))
    };
    let vg = per_map(&spec.g)?;
    let vgs = per_map(&spec.g_star)?;
    let theorem22 = match (&vg, &vgs) {
        (Some((a, _)), Some((b, _))) => verify_main_theorem(&a.nu, &b.nu, 0, k, Some((a.d, b.d))).ok(),
        _ => None,
    };
    Ok(AnalysisReport {
        spec: echo,
        period: PeriodEntry {
            poles: period
                .poles
                .iter()
                .map(|p| PoleEntry {
                    location: p.location.clone(),
                    order: p.order,
                    residue: value_string(&p.residue),
                    residue_is_real: p.residue_is_real,
                    exact: p.exact,
                })
                .collect(),
            verdict: period.verdict,
            justification: period.justification.to_string(),
        },
        canonical: CanonicalEntry {
            q: q.to_string(),
            ord_q: ends
                .iter()
                .map(|e| OrderEntry {
                    point: e.point.clone(),
                    ord: e.ord_q,
                })
                .collect(),
        },
        degrees: Degrees {
            d: summary.d,
            dstar: summary.d_star,
            k: summary.k,
        },
        osserman: (&summary).into(),
        valuedist: ValueDistEntry {
            g: vg.map(|v| v.1),
            g_star: vgs.map(|v| v.1),
            theorem22,
        },
        horosphere: condition.horosphere,
        front_condition: condition,
        ends,
    })
}

/// Parses both maps, adds `extra_ends` to the coincidence points and runs
/// the pipeline.
pub fn analyze(
    g_text: &str,
    g_star_text: &str,
    params: &Bindings,
    extra_ends: &[ExtendedPoint],
    scale: f64,
) -> Result<AnalysisReport, AnalysisError> {
    let g = parse_rational(g_text, params)?;
    let g_star = parse_rational(g_star_text, params)?;
    let spec = FrontSpec::new(g, g_star, scale, extra_ends)?;
    let echo = SpecEcho::new(
        g_text,
        g_star_text,
        params,
        scale,
        0,
        spec.ends.iter().map(ToString::to_string).collect(),
    );
    analyze_spec(&spec, echo)
}

fn point_string(p: [f64; 2]) -> String {
    format_complex(Complex64::new(p[0], p[1]))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusEndEntry {
    pub point: String,
    pub ord_q: Option<i64>,
    pub regular: bool,
    pub complete_by_pole: bool,
}

impl From<&TorusEnd> for TorusEndEntry {
    fn from(e: &TorusEnd) -> Self {
        Self {
            point: point_string(e.point),
            ord_q: e.ord_q,
            regular: e.regular,
            complete_by_pole: e.complete_by_pole,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CycleEntry {
    pub label: String,
    pub base: String,
    pub integral: String,
    pub winding: String,
    pub in_2pi_i_z: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusResidueEntry {
    pub point: String,
    pub residue: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusPeriodEntry {
    pub cycles: Vec<CycleEntry>,
    pub poles: Vec<TorusResidueEntry>,
    pub verdict: bool,
    pub tolerance: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TorusReport {
    pub spec: SpecEcho,
    pub a: String,
    pub g2: String,
    pub ends: Vec<TorusEndEntry>,
    /// Points where `G = G*` that are not declared ends.
    pub undeclared_coincidences: Vec<TorusEndEntry>,
    pub period: TorusPeriodEntry,
    pub degrees: Degrees,
    pub osserman: OssermanEntry,
    pub numeric_backend: bool,
}

pub fn analyze_elliptic(front: &EllipticFront, echo: SpecEcho) -> Result<TorusReport, AnalysisError> {
    let t = analyze_torus(front, TORUS_DEGREE_PROBES)?;
    Ok(TorusReport {
        spec: echo,
        a: format_real(t.a),
        g2: format_real(t.g2),
        ends: t.ends.iter().map(Into::into).collect(),
        undeclared_coincidences: t.undeclared_coincidences.iter().map(Into::into).collect(),
        period: TorusPeriodEntry {
            cycles: t
                .period
                .cycles
                .iter()
                .map(|c| CycleEntry {
                    label: c.label.to_string(),
                    base: point_string(c.base),
                    integral: format_complex(Complex64::new(c.re, c.im)),
                    winding: format_real(c.winding),
                    in_2pi_i_z: c.in_2pi_i_z,
                })
                .collect(),
            poles: t
                .period
                .residues
                .iter()
                .map(|(p, r)| TorusResidueEntry {
                    point: point_string(*p),
                    residue: point_string(*r),
                })
                .collect(),
            verdict: t.period.holds,
            tolerance: format_real(t.period.tolerance),
        },
        degrees: Degrees {
            d: t.d,
            dstar: t.d_star,
            k: t.osserman.k,
        },
        osserman: (&t.osserman).into(),
        numeric_backend: true,
    })
}

/// Either kind of report, serialized without a wrapper.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Report {
    Rational(Box<AnalysisReport>),
    Torus(Box<TorusReport>),
}

impl Report {
    pub fn period_verdict(&self) -> bool {
        match self {
            Report::Rational(r) => r.period.verdict,
            Report::Torus(t) => t.period.verdict,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    /// Flat key/value view used by catalog fixtures, e.g. `residue@1`,
    /// `ord_q@inf`, `nu_G`, `D_G*`, `embedded`.
    pub fn summary(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        let mut put = |k: String, v: String| {
            m.insert(k, v);
        };
        let (degrees, osserman, verdict) = match self {
            Report::Rational(r) => (&r.degrees, &r.osserman, r.period.verdict),
            Report::Torus(t) => (&t.degrees, &t.osserman, t.period.verdict),
        };
        put("period".into(), verdict.to_string());
        put("d".into(), degrees.d.to_string());
        put("dstar".into(), degrees.dstar.to_string());
        put("k".into(), degrees.k.to_string());
        put("osserman_holds".into(), osserman.holds.to_string());
        put("equality".into(), osserman.equality.to_string());
        put("embedded".into(), osserman.embedded.to_string());
        put("complete_regular".into(), osserman.complete_regular.to_string());
        match self {
            Report::Rational(r) => {
                put("horosphere".into(), r.horosphere.to_string());
                put("front_condition".into(), r.front_condition.holds.to_string());
                for p in &r.period.poles {
                    put(format!("residue@{}", p.location), p.residue.clone());
                }
                for e in &r.ends {
                    put(format!("ord_q@{}", e.point), opt(e.ord_q));
                }
                for (name, v) in [("G", &r.valuedist.g), ("G*", &r.valuedist.g_star)] {
                    if let Some(v) = v {
                        put(format!("nu_{name}"), v.nu.clone());
                        put(format!("D_{name}"), v.r0.to_string());
                        put(format!("l0_{name}"), v.l0.to_string());
                        let nus: Vec<String> = v.ramified.iter().map(|x| x.nu_i.to_string()).collect();
                        put(format!("nu_i_{name}"), nus.join(","));
                    }
                }
                if let Some(t) = &r.valuedist.theorem22 {
                    put("theorem22_applicable".into(), t.applicable.to_string());
                }
            }
            Report::Torus(t) => {
                put("undeclared_coincidences".into(), t.undeclared_coincidences.len().to_string());
                for e in &t.undeclared_coincidences {
                    put(format!("ord_q@{}", e.point), opt(e.ord_q));
                }
            }
        }
        m
    }
}

fn opt(o: Option<i64>) -> String {
    o.map_or_else(|| "none".to_string(), |v| v.to_string())
}
