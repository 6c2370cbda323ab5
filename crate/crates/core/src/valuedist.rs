//! Value distribution of a Gauss map on a punctured sphere: exceptional
//! values, totally ramified values, the totally ramified value number `nu`,
//! and the inequalities that bound it.
//!
//! A value `b` is totally ramified when every preimage of `b` off the ends
//! has multiplicity at least two; it is exceptional when no preimage is left
//! at all. Only finitely many values qualify: any other value has a simple
//! preimage away from the ends. The candidates are therefore the critical
//! values of `G` together with the values of `G` at the ends.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::algebra::{
    aberth, roots, AlgebraError, GaussianRational, Polynomial, RationalMap, Value, DEFAULT_ROOT_TOL,
};
use crate::front::point_cmp;
use crate::sphere::{
    critical_divisor, evaluate, local_multiplicity, local_multiplicity_at_infinity, ExtendedPoint, SphereError,
};

/// Relative distance below which two numerically known values are merged.
pub const VALUE_MATCH_TOL: f64 = 1e-7;
const MAX_RECOGNIZED_DENOMINATOR: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValueDistError {
    #[error("a constant map has no value distribution")]
    ConstantMap,
    #[error("2*genus - 2 + k must be positive, got genus {genus} and k = {k}")]
    NonPositiveCharacteristic { genus: u32, k: usize },
    #[error("genus must be 0 or 1, got {0}")]
    GenusOutOfRange(u32),
    #[error("totally ramified value numbers must be nonnegative")]
    NegativeNu,
    #[error(transparent)]
    Sphere(#[from] SphereError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub(crate) fn serialize_ratio<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(r))
}

fn serialize_opt_ratio<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_str(&ratio_string(r)),
        None => s.serialize_none(),
    }
}

/// `p/q` in lowest terms, or `p` for integers.
pub fn ratio_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Preimage {
    pub point: ExtendedPoint,
    pub multiplicity: usize,
    pub at_end: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExceptionalValue {
    pub value: ExtendedPoint,
    /// Every preimage, all of them ends.
    pub preimages: Vec<Preimage>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RamifiedValue {
    pub value: ExtendedPoint,
    /// Minimum multiplicity over the preimages off the ends.
    pub nu_i: usize,
    pub preimages: Vec<Preimage>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TRVReport {
    pub d: usize,
    pub exceptional: Vec<ExceptionalValue>,
    pub ramified: Vec<RamifiedValue>,
    pub r0: usize,
    pub l0: usize,
    /// Branching over the preimages of the exceptional values.
    pub n0: usize,
    /// Branching over all preimages of the non-exceptional totally ramified values.
    pub nr: usize,
    /// Total branching of `G` on the sphere.
    pub n_g: usize,
    #[serde(serialize_with = "serialize_ratio")]
    pub nu: BigRational,
    /// Every candidate value was located exactly.
    pub exact: bool,
}

impl TRVReport {
    pub fn exceptional_values(&self) -> Vec<ExtendedPoint> {
        self.exceptional.iter().map(|e| e.value.clone()).collect()
    }
}

fn point_tol(p: &ExtendedPoint) -> f64 {
    VALUE_MATCH_TOL * (1.0 + p.to_complex().map_or(0.0, |z| z.norm()))
}

fn is_end(p: &ExtendedPoint, ends: &[ExtendedPoint]) -> bool {
    ends.iter().any(|e| e.approx_eq(p, point_tol(e).max(point_tol(p))))
}

fn push_value(values: &mut Vec<ExtendedPoint>, v: ExtendedPoint) {
    if let Some(existing) = values.iter_mut().find(|w| w.approx_eq(&v, point_tol(w).max(point_tol(&v)))) {
        if !existing.is_exact() && v.is_exact() {
            *existing = v;
        }
    } else {
        values.push(v);
    }
}

fn wronskian(g: &RationalMap) -> Polynomial {
    let (n, d) = (g.numerator(), g.denominator());
    &(&n.derivative() * d) - &(n * &d.derivative())
}

/// Replaces a numeric critical value by a Gaussian rational when the fiber
/// over that rational provably shares a root with the Wronskian.
fn recognize_critical_value(g: &RationalMap, v: Complex64) -> Option<GaussianRational> {
    let q = GaussianRational::approximate(v, MAX_RECOGNIZED_DENOMINATOR)?;
    if (q.to_complex() - v).norm() > VALUE_MATCH_TOL * (1.0 + v.norm()) {
        return None;
    }
    let p = g.numerator() - &g.denominator().scale(&q);
    let common = Polynomial::gcd(&p, &wronskian(g));
    (common.degree().unwrap_or(0) > 0).then_some(q)
}

fn candidate_values(g: &RationalMap, ends: &[ExtendedPoint]) -> Result<Vec<ExtendedPoint>, ValueDistError> {
    let mut values = Vec::new();
    for e in ends {
        push_value(&mut values, evaluate(g, e));
    }
    for (c, _) in critical_divisor(g)?.entries() {
        let v = match evaluate(g, c) {
            ExtendedPoint::Finite(Value::Numeric(z)) => match recognize_critical_value(g, z) {
                Some(q) => ExtendedPoint::exact(q),
                None => ExtendedPoint::numeric(z),
            },
            other => other,
        };
        push_value(&mut values, v);
    }
    values.sort_by(point_cmp);
    Ok(values)
}

/// Every preimage of `b` on the sphere with its multiplicity.
pub fn fiber(g: &RationalMap, b: &ExtendedPoint) -> Result<Vec<(ExtendedPoint, usize)>, ValueDistError> {
    if g.is_constant() {
        return Err(ValueDistError::ConstantMap);
    }
    let mut out: Vec<(ExtendedPoint, usize)> = Vec::new();
    let at_infinity = evaluate(g, &ExtendedPoint::Infinity);
    match b {
        ExtendedPoint::Infinity => {
            let den = g.denominator();
            if den.degree().unwrap_or(0) > 0 {
                out.extend(roots(den, DEFAULT_ROOT_TOL)?.into_iter().map(|r| (ExtendedPoint::Finite(r.value), r.multiplicity)));
            }
        }
        ExtendedPoint::Finite(Value::Exact(q)) => {
            let p = g.numerator() - &g.denominator().scale(q);
            if p.degree().unwrap_or(0) > 0 {
                out.extend(roots(&p, DEFAULT_ROOT_TOL)?.into_iter().map(|r| (ExtendedPoint::Finite(r.value), r.multiplicity)));
            }
        }
        ExtendedPoint::Finite(Value::Numeric(w)) => out.extend(numeric_finite_fiber(g, *w, &at_infinity)?),
    }
    if at_infinity.approx_eq(b, point_tol(b)) {
        out.push((ExtendedPoint::Infinity, local_multiplicity_at_infinity(g)));
    }
    out.sort_by(|a, b| point_cmp(&a.0, &b.0));
    Ok(out)
}

/// Finite fiber over a numerically known value: the critical points above
/// `w` carry their multiplicities, the cofactor left after dividing them out
/// has only simple roots.
fn numeric_finite_fiber(
    g: &RationalMap,
    w: Complex64,
    at_infinity: &ExtendedPoint,
) -> Result<Vec<(ExtendedPoint, usize)>, ValueDistError> {
    let num = g.numerator().to_complex_coeffs();
    let den = g.denominator().to_complex_coeffs();
    let len = num.len().max(den.len());
    let mut p: Vec<Complex64> = (0..len)
        .map(|k| num.get(k).copied().unwrap_or_default() - w * den.get(k).copied().unwrap_or_default())
        .collect();
    let target = ExtendedPoint::numeric(w);
    if at_infinity.approx_eq(&target, point_tol(&target)) {
        let drop = local_multiplicity_at_infinity(g);
        p.truncate(len.saturating_sub(drop));
    } else {
        while p.len() > 1 && p.last().is_some_and(|c| c.norm() == 0.0) {
            p.pop();
        }
    }
    let mut out = Vec::new();
    for (c, _) in critical_divisor(g)?.entries() {
        let Some(z) = c.to_complex() else { continue };
        let v = evaluate(g, c);
        if !v.approx_eq(&target, point_tol(&target)) {
            continue;
        }
        let m = local_multiplicity(g, c);
        for _ in 0..m {
            p = deflate(&p, z);
        }
        out.push((c.clone(), m));
    }
    if p.len() > 1 {
        out.extend(aberth(&p, DEFAULT_ROOT_TOL)?.into_iter().map(|z| (ExtendedPoint::numeric(z), 1)));
    }
    Ok(out)
}

/// Synthetic division by `z - root`, remainder discarded.
fn deflate(coeffs: &[Complex64], root: Complex64) -> Vec<Complex64> {
    let n = coeffs.len();
    if n <= 1 {
        return coeffs.to_vec();
    }
    let mut q = vec![Complex64::zero(); n - 1];
    let mut acc = coeffs[n - 1];
    for k in (0..n - 1).rev() {
        q[k] = acc;
        acc = coeffs[k] + acc * root;
    }
    q
}

/// Values of `G` whose every preimage on the sphere is an end.
pub fn exceptional_values(g: &RationalMap, ends: &[ExtendedPoint]) -> Result<Vec<ExtendedPoint>, ValueDistError> {
    if g.is_constant() {
        return Err(ValueDistError::ConstantMap);
    }
    let mut values = Vec::new();
    for e in ends {
        push_value(&mut values, evaluate(g, e));
    }
    values.sort_by(point_cmp);
    let mut out = Vec::new();
    for b in values {
        if fiber(g, &b)?.iter().all(|(p, _)| is_end(p, ends)) {
            out.push(b);
        }
    }
    Ok(out)
}

pub fn totally_ramified(g: &RationalMap, ends: &[ExtendedPoint]) -> Result<TRVReport, ValueDistError> {
    if g.is_constant() {
        return Err(ValueDistError::ConstantMap);
    }
    let d = g.degree();
    let n_g = critical_divisor(g)?.degree() as usize;
    let candidates = candidate_values(g, ends)?;
    let exact = candidates.iter().all(ExtendedPoint::is_exact);
    let mut exceptional = Vec::new();
    let mut ramified = Vec::new();
    for b in candidates {
        let preimages: Vec<Preimage> = fiber(g, &b)?
            .into_iter()
            .map(|(point, multiplicity)| Preimage {
                at_end: is_end(&point, ends),
                point,
                multiplicity,
            })
            .collect();
        let inner_min = preimages.iter().filter(|p| !p.at_end).map(|p| p.multiplicity).min();
        match inner_min {
            None => exceptional.push(ExceptionalValue { value: b, preimages }),
            Some(m) if m >= 2 => ramified.push(RamifiedValue {
                value: b,
                nu_i: m,
                preimages,
            }),
            Some(_) => {}
        }
    }
    let branching = |ps: &[Preimage]| ps.iter().map(|p| p.multiplicity - 1).sum::<usize>();
    let n0 = exceptional.iter().map(|e| branching(&e.preimages)).sum();
    let nr = ramified.iter().map(|r| branching(&r.preimages)).sum();
    let mut nu = BigRational::from_integer(BigInt::from(exceptional.len()));
    for r in &ramified {
        nu += BigRational::one() - ratio(1, r.nu_i as i64);
    }
    Ok(TRVReport {
        d,
        r0: exceptional.len(),
        l0: ramified.len(),
        exceptional,
        ramified,
        n0,
        nr,
        n_g,
        nu,
        exact,
    })
}

/// The three inequalities from the proof of the ramification estimate.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProofBounds {
    /// Riemann–Hurwitz: `n_G = 2(d + genus - 1)`.
    pub rh: bool,
    /// `k >= d r0 - n0`.
    pub ex_rami: bool,
    /// `nu <= 2 + (2 genus - 2 + k)/d`.
    pub trvn1: bool,
    #[serde(serialize_with = "serialize_ratio")]
    pub trvn1_rhs: BigRational,
}

pub fn per_map_bound(genus: u32, k: usize, d: usize) -> BigRational {
    ratio(2, 1) + ratio(2 * genus as i64 - 2 + k as i64, d as i64)
}

pub fn proof_bounds(report: &TRVReport, genus: u32, k: usize) -> ProofBounds {
    let rhs = per_map_bound(genus, k, report.d);
    ProofBounds {
        rh: report.n_g as i64 == 2 * (report.d as i64 + genus as i64 - 1),
        ex_rami: k as i64 >= (report.d * report.r0) as i64 - report.n0 as i64,
        trvn1: report.nu <= rhs,
        trvn1_rhs: rhs,
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoremVerdict {
    /// Both numbers exceed two.
    pub applicable: bool,
    #[serde(serialize_with = "serialize_opt_ratio")]
    pub lhs: Option<BigRational>,
    #[serde(serialize_with = "serialize_ratio")]
    pub rhs: BigRational,
    /// `None` when the theorem does not apply.
    pub holds: Option<bool>,
    /// `nu_G <= 2 + (2 genus - 2 + k)/d`, when `d` is known.
    pub bound_g: Option<bool>,
    pub bound_g_star: Option<bool>,
}

/// Checks `1/(nu_G - 2) + 1/(nu_G* - 2) >= k/(2 genus - 2 + k)`.
pub fn verify_main_theorem(
    nu_g: &BigRational,
    nu_g_star: &BigRational,
    genus: u32,
    k: usize,
    degrees: Option<(usize, usize)>,
) -> Result<TheoremVerdict, ValueDistError> {
    if nu_g.is_negative() || nu_g_star.is_negative() {
        return Err(ValueDistError::NegativeNu);
    }
    let chi = 2 * genus as i64 - 2 + k as i64;
    if k == 0 || chi <= 0 {
        return Err(ValueDistError::NonPositiveCharacteristic { genus, k });
    }
    let two = ratio(2, 1);
    let rhs = ratio(k as i64, chi);
    let applicable = *nu_g > two && *nu_g_star > two;
    let lhs = applicable.then(|| (nu_g - &two).recip() + (nu_g_star - &two).recip());
    let holds = lhs.as_ref().map(|l| *l >= rhs);
    let (bound_g, bound_g_star) = match degrees {
        Some((d, d_star)) => (
            (d > 0).then(|| *nu_g <= per_map_bound(genus, k, d)),
            (d_star > 0).then(|| *nu_g_star <= per_map_bound(genus, k, d_star)),
        ),
        None => (None, None),
    };
    Ok(TheoremVerdict {
        applicable,
        lhs,
        rhs,
        holds,
        bound_g,
        bound_g_star,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Feasibility {
    /// Some count of exceptional values is at most two, so the estimate is silent.
    Unconstrained,
    /// No complete flat front has these numbers.
    Infeasible,
    /// At least `k_min` ends are required.
    RequiresMinEnds { k_min: usize },
    /// `d + d* = k` is forced, so all ends are regular and embedded.
    RequiresEmbeddedEnds,
    /// The estimate holds for every admissible `k`.
    Feasible,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub genus: u32,
    pub d_g: usize,
    pub d_g_star: usize,
    pub k: Option<usize>,
    #[serde(serialize_with = "serialize_opt_ratio")]
    pub lhs: Option<BigRational>,
    pub verdict: Feasibility,
    /// Whether the supplied `k` is compatible with the verdict.
    pub k_admissible: Option<bool>,
}

/// Consequences of the ramification estimate for fronts whose Gauss maps
/// omit `d_g` and `d_g_star` values, using `nu >= D`.
pub fn corollary_feasibility(
    genus: u32,
    d_g: usize,
    d_g_star: usize,
    k: Option<usize>,
) -> Result<FeasibilityReport, ValueDistError> {
    if genus > 1 {
        return Err(ValueDistError::GenusOutOfRange(genus));
    }
    let lhs = (d_g > 2 && d_g_star > 2).then(|| ratio(1, d_g as i64 - 2) + ratio(1, d_g_star as i64 - 2));
    let one = BigRational::one();
    let verdict = match &lhs {
        None => Feasibility::Unconstrained,
        Some(l) if genus == 0 => {
            // k/(k-2) <= lhs  <=>  k >= 2 lhs/(lhs - 1), and k >= 3 for the estimate to apply
            if *l <= one {
                Feasibility::Infeasible
            } else {
                let bound = (ratio(2, 1) * l) / (l - &one);
                let k_min = bound.ceil().to_integer();
                Feasibility::RequiresMinEnds {
                    k_min: usize::try_from(k_min).unwrap_or(usize::MAX).max(3),
                }
            }
        }
        Some(l) => match l.cmp(&one) {
            Ordering::Less => Feasibility::Infeasible,
            Ordering::Equal => Feasibility::RequiresEmbeddedEnds,
            Ordering::Greater => Feasibility::Feasible,
        },
    };
    let k_admissible = k.map(|k| match &verdict {
        Feasibility::Infeasible => false,
        Feasibility::RequiresMinEnds { k_min } => k >= *k_min,
        Feasibility::RequiresEmbeddedEnds | Feasibility::Feasible => k >= 1,
        Feasibility::Unconstrained => true,
    });
    Ok(FeasibilityReport {
        genus,
        d_g,
        d_g_star,
        k,
        lhs,
        verdict,
        k_admissible,
    })
}
