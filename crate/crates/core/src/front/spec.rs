use std::cmp::Ordering;

use num_complex::Complex64;
use serde::Serialize;

use super::FrontError;
use crate::algebra::{roots, Polynomial, RationalMap, Value, DEFAULT_ROOT_TOL};
use crate::sphere::{critical_divisor, evaluate, ExtendedPoint, RationalOneForm, POINT_MATCH_TOL};

/// Imaginary-part threshold for numeric residues in the period check.
pub const NUMERIC_RESIDUE_TOL: f64 = 1e-10;

/// Input data of a genus-zero front: the two hyperbolic Gauss maps, the
/// modulus of the scale constant and the punctures.
#[derive(Clone, Debug, PartialEq)]
pub struct FrontSpec {
    pub g: RationalMap,
    pub g_star: RationalMap,
    pub scale: f64,
    pub genus: u8,
    pub ends: Vec<ExtendedPoint>,
}

impl FrontSpec {
    /// Builds a spec whose ends are the coincidence set of `g` and `g_star`
    /// together with `extra_ends`.
    pub fn new(
        g: RationalMap,
        g_star: RationalMap,
        scale: f64,
        extra_ends: &[ExtendedPoint],
    ) -> Result<Self, FrontError> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(FrontError::InvalidScale(scale));
        }
        if g.is_constant() && g_star.is_constant() {
            return Err(FrontError::BothConstant);
        }
        let mut ends = infer_ends(&g, &g_star)?;
        for extra in extra_ends {
            if !ends.iter().any(|e| same_point(e, extra)) {
                ends.push(extra.clone());
            }
        }
        sort_points(&mut ends);
        Ok(Self {
            g,
            g_star,
            scale,
            genus: 0,
            ends,
        })
    }

    /// Only the modulus of `c` is kept.
    pub fn with_complex_scale(
        g: RationalMap,
        g_star: RationalMap,
        c: Complex64,
        extra_ends: &[ExtendedPoint],
    ) -> Result<Self, FrontError> {
        Self::new(g, g_star, c.norm(), extra_ends)
    }

    pub fn k(&self) -> usize {
        self.ends.len()
    }

    /// `dG / (G - G*)`.
    pub fn eta(&self) -> RationalOneForm {
        RationalOneForm::log_derivative_ratio(&self.g, &self.g_star).expect("G and G* differ")
    }

    pub fn is_end(&self, z: Complex64) -> bool {
        self.ends
            .iter()
            .filter_map(ExtendedPoint::to_complex)
            .any(|e| (e - z).norm() <= 1e-12 * (1.0 + e.norm()))
    }

    pub fn finite_ends(&self) -> Vec<Complex64> {
        self.ends.iter().filter_map(ExtendedPoint::to_complex).collect()
    }
}

pub(crate) fn same_point(a: &ExtendedPoint, b: &ExtendedPoint) -> bool {
    let tol = POINT_MATCH_TOL * (1.0 + a.to_complex().map_or(0.0, |z| z.norm()));
    a.approx_eq(b, tol)
}

/// Finite points by real then imaginary part, infinity last.
pub fn sort_points(points: &mut [ExtendedPoint]) {
    points.sort_by(point_cmp);
}

pub fn point_cmp(a: &ExtendedPoint, b: &ExtendedPoint) -> Ordering {
    match (a.to_complex(), b.to_complex()) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(x), Some(y)) => x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im)),
    }
}

/// `N1 D2 - N2 D1` for `G = N1/D1`, `G* = N2/D2`; its roots (with
/// multiplicity) are the finite coincidence points of the two maps.
pub fn coincidence_polynomial(g: &RationalMap, g_star: &RationalMap) -> Polynomial {
    &(g.numerator() * g_star.denominator()) - &(g_star.numerator() * g.denominator())
}

/// Coincidence order of `G` and `G*` at infinity.
pub fn coincidence_order_at_infinity(g: &RationalMap, g_star: &RationalMap) -> usize {
    let p = coincidence_polynomial(g, g_star);
    (g.degree() + g_star.degree()).saturating_sub(p.degree().unwrap_or(0))
}

/// All points of the sphere where `G = G*`.
pub fn infer_ends(g: &RationalMap, g_star: &RationalMap) -> Result<Vec<ExtendedPoint>, FrontError> {
    let p = coincidence_polynomial(g, g_star);
    if p.is_zero() {
        return Err(FrontError::GaussMapsEqual);
    }
    let mut ends: Vec<ExtendedPoint> = if p.degree().unwrap_or(0) > 0 {
        roots(&p, DEFAULT_ROOT_TOL)?
            .into_iter()
            .map(|r| ExtendedPoint::Finite(r.value))
            .collect()
    } else {
        Vec::new()
    };
    if coincidence_order_at_infinity(g, g_star) > 0 {
        ends.push(ExtendedPoint::Infinity);
    }
    sort_points(&mut ends);
    Ok(ends)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FrontCondition {
    pub holds: bool,
    /// One of the maps is constant, so the front is a horosphere.
    pub horosphere: bool,
    pub witness: Option<ExtendedPoint>,
}

/// `G` and `G*` must not branch at a common point.
pub fn front_condition(g: &RationalMap, g_star: &RationalMap) -> Result<FrontCondition, FrontError> {
    if g.is_constant() || g_star.is_constant() {
        return Ok(FrontCondition {
            holds: true,
            horosphere: true,
            witness: None,
        });
    }
    let a = critical_divisor(g)?;
    let b = critical_divisor(g_star)?;
    let witness = a
        .support()
        .find(|p| b.support().any(|q| same_point(p, q)))
        .cloned();
    Ok(FrontCondition {
        holds: witness.is_none(),
        horosphere: false,
        witness,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PoleRecord {
    pub location: ExtendedPoint,
    pub order: usize,
    pub residue: Value,
    pub residue_is_real: bool,
    pub exact: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodReport {
    pub poles: Vec<PoleRecord>,
    pub verdict: bool,
    pub justification: &'static str,
}

impl PeriodReport {
    pub fn residue_at(&self, p: &ExtendedPoint) -> Option<&Value> {
        self.poles.iter().find(|r| same_point(&r.location, p)).map(|r| &r.residue)
    }

    pub fn offending(&self) -> impl Iterator<Item = &PoleRecord> {
        self.poles.iter().filter(|r| !r.residue_is_real)
    }
}

const PERIOD_JUSTIFICATION: &str = "on a punctured sphere every cycle integral of dG/(G-G*) is \
2*pi*i times a sum of enclosed residues, so the integrals are imaginary iff every residue is real";

/// Residues of `dG/(G - G*)` and the verdict that all of them are real.
pub fn period_check(g: &RationalMap, g_star: &RationalMap) -> Result<PeriodReport, FrontError> {
    let eta = RationalOneForm::log_derivative_ratio(g, g_star).map_err(|_| FrontError::GaussMapsEqual)?;
    if eta.coefficient.is_zero() && g.is_constant() && g_star.is_constant() {
        return Err(FrontError::BothConstant);
    }
    let mut poles: Vec<PoleRecord> = eta
        .residues(DEFAULT_ROOT_TOL)?
        .into_iter()
        .map(|(location, order, residue)| {
            let residue_is_real = residue.is_real(NUMERIC_RESIDUE_TOL);
            let exact = residue.is_exact() && location.is_exact();
            PoleRecord {
                location,
                order,
                residue,
                residue_is_real,
                exact,
            }
        })
        .collect();
    poles.sort_by(|a, b| point_cmp(&a.location, &b.location));
    let verdict = poles.iter().all(|r| r.residue_is_real);
    Ok(PeriodReport {
        poles,
        verdict,
        justification: PERIOD_JUSTIFICATION,
    })
}

/// Values of `G` and `G*` at a point agree (chordally, for numeric data).
pub fn values_agree(g: &RationalMap, g_star: &RationalMap, p: &ExtendedPoint) -> bool {
    let (a, b) = (evaluate(g, p), evaluate(g_star, p));
    match (&a, &b) {
        (ExtendedPoint::Finite(Value::Exact(x)), ExtendedPoint::Finite(Value::Exact(y))) => x == y,
        _ => a.chordal_distance(&b) <= 1e-7,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::GaussianRational;
    use crate::expr::{bindings, parse_rational, Bindings};

    fn gr(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    fn map(text: &str) -> RationalMap {
        parse_rational(text, &Bindings::new()).unwrap()
    }

    fn k1(a: GaussianRational) -> (RationalMap, RationalMap) {
        let b = bindings([("a", a)]);
        (map("z^2"), parse_rational("(z*(z+a))/(a*z+1)", &b).unwrap())
    }

    fn ex(n: i64, d: i64) -> ExtendedPoint {
        ExtendedPoint::exact(gr(n, d))
    }

    #[test]
    fn ends_of_catalog_pairs() {
        assert_eq!(
            infer_ends(&map("z"), &map("z^2")).unwrap(),
            vec![ex(0, 1), ex(1, 1), ExtendedPoint::Infinity]
        );
        let (g, gs) = k1(2.into());
        assert_eq!(
            infer_ends(&g, &gs).unwrap(),
            vec![ex(-1, 1), ex(0, 1), ex(1, 1), ExtendedPoint::Infinity]
        );
        assert_eq!(
            infer_ends(&map("z^3"), &map("z*(z+6)/(2*z+5)")).unwrap(),
            vec![ex(-2, 1), ex(-3, 2), ex(0, 1), ex(1, 1), ExtendedPoint::Infinity]
        );
        assert_eq!(infer_ends(&map("z"), &map("z")), Err(FrontError::GaussMapsEqual));
    }

    #[test]
    fn common_poles_are_ends() {
        // both maps have a pole at 0
        let ends = infer_ends(&map("1/z"), &map("2/z+1")).unwrap();
        assert!(ends.contains(&ex(0, 1)));
    }

    #[test]
    fn front_conditions() {
        let (g, gs) = k1(2.into());
        assert!(front_condition(&g, &gs).unwrap().holds);
        let bad = front_condition(&map("z^2"), &map("z^2+1")).unwrap();
        assert!(!bad.holds);
        assert!(bad.witness == Some(ex(0, 1)) || bad.witness == Some(ExtendedPoint::Infinity));
        assert!(front_condition(&map("z"), &map("1/3*z")).unwrap().holds);
        let horo = front_condition(&map("z"), &map("0")).unwrap();
        assert!(horo.holds && horo.horosphere);
    }

    #[test]
    fn period_prop_five() {
        let report = period_check(&map("z^3"), &map("z*(z+6)/(2*z+5)")).unwrap();
        assert!(report.verdict);
        assert_eq!(report.residue_at(&ex(1, 1)), Some(&Value::Exact(gr(7, 5))));
        assert_eq!(report.residue_at(&ex(-2, 1)), Some(&Value::Exact(gr(-2, 1))));
        assert_eq!(report.residue_at(&ex(-3, 2)), Some(&Value::Exact(gr(18, 5))));
        assert_eq!(report.residue_at(&ExtendedPoint::Infinity), Some(&Value::Exact(gr(-3, 1))));
    }

    #[test]
    fn period_fails_for_complex_parameter() {
        let a = GaussianRational::from(1) + GaussianRational::i();
        let (g, gs) = k1(a);
        let report = period_check(&g, &gs).unwrap();
        assert!(!report.verdict);
        let want = GaussianRational::from_ratio(3, 2) - GaussianRational::i() * gr(1, 2);
        assert_eq!(report.residue_at(&ex(1, 1)), Some(&Value::Exact(want)));
        assert!(report.offending().any(|r| r.location == ex(1, 1)));
    }

    #[test]
    fn horosphere_period() {
        let report = period_check(&map("z"), &map("0")).unwrap();
        assert!(report.verdict);
        assert_eq!(report.residue_at(&ex(0, 1)), Some(&Value::Exact(gr(1, 1))));
        assert_eq!(report.residue_at(&ExtendedPoint::Infinity), Some(&Value::Exact(gr(-1, 1))));
    }

    #[test]
    fn spec_validation() {
        assert_eq!(
            FrontSpec::new(map("1"), map("2"), 1.0, &[]),
            Err(FrontError::BothConstant)
        );
        assert!(matches!(
            FrontSpec::new(map("z"), map("0"), 0.0, &[]),
            Err(FrontError::InvalidScale(_))
        ));
        // G(inf) = inf differs from G* = 0, so infinity is only an end when declared
        let spec = FrontSpec::new(map("z"), map("0"), 1.0, &[ex(5, 1), ex(0, 1)]).unwrap();
        assert_eq!(spec.ends, vec![ex(0, 1), ex(5, 1)]);
        let spec = FrontSpec::new(map("z"), map("0"), 1.0, &[ExtendedPoint::Infinity]).unwrap();
        assert_eq!(spec.ends, vec![ex(0, 1), ExtendedPoint::Infinity]);
    }
}
