//! Built-in example fronts with their expected results.

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::algebra::GaussianRational;
use crate::elliptic::{EllipticFront, SquareTorus};
use crate::expr::{parse_elliptic, parse_rational, Bindings};
use crate::front::{FrontSpec, PreparedFront};
use crate::report::{analyze_elliptic, analyze_spec, parse_point, AnalysisError, Report, SpecEcho};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("entry `{entry}` has no parameter `{name}`")]
    UnknownParameter { entry: String, name: String },
    #[error("parameter {name} = {value} is outside its domain: {domain}")]
    OutOfDomain { name: String, value: String, domain: String },
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
}

/// Where an expected value comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Stated as a result in the source.
    Statement,
    /// Computed in the source's argument for that result.
    ProofComputation,
    /// Decided by an independent brute-force computation.
    Oracle,
    /// Direct arithmetic from the closed form of the example.
    Arithmetic,
}

/// Real values with a finite set of exclusions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamSlot {
    pub name: &'static str,
    pub default: &'static str,
    pub excluded: &'static [&'static str],
}

impl ParamSlot {
    fn domain(&self) -> String {
        if self.excluded.is_empty() {
            "real".into()
        } else {
            format!("real, not in {{{}}}", self.excluded.join(", "))
        }
    }

    fn check(&self, value: &GaussianRational) -> Result<(), CatalogError> {
        let excluded = self
            .excluded
            .iter()
            .any(|e| crate::expr::parse_constant(e).is_ok_and(|x| x == *value));
        if !value.is_real() || excluded {
            return Err(CatalogError::OutOfDomain {
                name: self.name.into(),
                value: value.to_string(),
                domain: self.domain(),
            });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Template {
    /// Rational Gauss maps on a punctured sphere; the ends are the
    /// coincidence points plus `extra_ends`.
    Rational {
        g: &'static str,
        g_star: &'static str,
        extra_ends: &'static [&'static str],
    },
    /// Elliptic Gauss maps on the square torus; the ends are the preimages
    /// under `wp` of `c * a` for each listed `c = (re, im)`.
    Torus {
        g: &'static str,
        g_star: &'static str,
        end_values: &'static [(f64, f64)],
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Expectation {
    pub key: &'static str,
    pub value: &'static str,
    pub provenance: Provenance,
    pub note: Option<&'static str>,
}

const fn expect(key: &'static str, value: &'static str, provenance: Provenance) -> Expectation {
    Expectation {
        key,
        value,
        provenance,
        note: None,
    }
}

const fn expect_noted(
    key: &'static str,
    value: &'static str,
    provenance: Provenance,
    note: &'static str,
) -> Expectation {
    Expectation {
        key,
        value,
        provenance,
        note: Some(note),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub description: &'static str,
    pub template: Template,
    pub params: &'static [ParamSlot],
    /// Expected report values at the default parameters.
    pub fixture: &'static [Expectation],
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureCheck {
    pub key: &'static str,
    pub expected: &'static str,
    pub actual: Option<String>,
    pub provenance: Provenance,
    pub pass: bool,
}

/// A ready-to-sample front built from a catalog entry.
pub enum CatalogFront {
    Rational(Box<PreparedFront>),
    Torus(Box<EllipticFront>),
}

use Provenance::{Arithmetic, Oracle, ProofComputation, Statement};

static ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        name: "revolution",
        description: "G = z, G* = alpha z on C \\ {0}; a horosphere when alpha = 0",
        template: Template::Rational {
            g: "z",
            g_star: "alpha*z",
            extra_ends: &["inf"],
        },
        params: &[ParamSlot {
            name: "alpha",
            default: "2",
            excluded: &["1"],
        }],
        fixture: &[
            expect("k", "2", Arithmetic),
            expect("residue@0", "-1", Arithmetic),
            expect("residue@inf", "1", Arithmetic),
            expect("ord_q@0", "-2", Arithmetic),
            expect("ord_q@inf", "-2", Arithmetic),
            expect("D_G", "2", Statement),
            expect("D_G*", "2", Statement),
            expect("horosphere", "false", Statement),
            expect("period", "true", Arithmetic),
        ],
    },
    CatalogEntry {
        name: "kuy-z-z2",
        description: "G = z, G* = z^2 on C \\ {0, 1}",
        template: Template::Rational {
            g: "z",
            g_star: "z^2",
            extra_ends: &[],
        },
        params: &[],
        fixture: &[
            expect("k", "3", Arithmetic),
            expect("d", "1", Arithmetic),
            expect("dstar", "2", Arithmetic),
            expect("D_G", "3", Statement),
            expect("D_G*", "2", Statement),
            expect("complete_regular", "true", Statement),
            expect("embedded", "true", Statement),
            expect("residue@0", "1", Arithmetic),
            expect("residue@1", "-1", Arithmetic),
            expect("period", "true", Arithmetic),
        ],
    },
    CatalogEntry {
        name: "k1-four-ends",
        description: "G = z^2, G* = z(z+a)/(az+1) on C \\ {0, 1, -1}",
        template: Template::Rational {
            g: "z^2",
            g_star: "z*(z+a)/(a*z+1)",
            extra_ends: &[],
        },
        params: &[ParamSlot {
            name: "a",
            default: "2",
            excluded: &["0", "1", "-1"],
        }],
        fixture: &[
            expect("period", "true", ProofComputation),
            expect("residue@1", "3/2", ProofComputation),
            expect("residue@-1", "1/2", ProofComputation),
            expect("residue@inf", "-2", ProofComputation),
            expect("ord_q@0", "-1", ProofComputation),
            expect("ord_q@1", "-2", ProofComputation),
            expect("ord_q@-1", "-2", ProofComputation),
            expect("ord_q@inf", "-1", ProofComputation),
            expect("d", "2", Statement),
            expect("dstar", "2", Statement),
            expect("k", "4", Statement),
            expect("complete_regular", "true", ProofComputation),
            expect("embedded", "true", Statement),
            expect("nu_G", "3", ProofComputation),
            expect_noted(
                "D_G*",
                "1",
                ProofComputation,
                "the count is asserted; the omitted value is 1, whose preimages are exactly the ends 1 and -1",
            ),
            expect("l0_G*", "2", ProofComputation),
            expect("nu_i_G*", "2,2", ProofComputation),
            expect("nu_G*", "2", ProofComputation),
        ],
    },
    CatalogEntry {
        name: "k2-five-ends",
        description: "G = z^3, G* = z(z+6)/(2z+5) on C \\ {0, 1, -2, -3/2}",
        template: Template::Rational {
            g: "z^3",
            g_star: "z*(z+6)/(2*z+5)",
            extra_ends: &[],
        },
        params: &[],
        fixture: &[
            expect("period", "true", ProofComputation),
            expect("residue@1", "7/5", ProofComputation),
            expect("residue@-2", "-2", ProofComputation),
            expect_noted(
                "residue@-3/2",
                "18/5",
                ProofComputation,
                "the partial-fraction coefficient of 1/(2z+3) is 9/5, so the residue at -3/2 is 18/5",
            ),
            expect("residue@inf", "-3", ProofComputation),
            expect("ord_q@1", "-2", ProofComputation),
            expect("ord_q@-2", "-2", ProofComputation),
            expect("ord_q@-3/2", "-2", ProofComputation),
            expect("d", "3", Statement),
            expect("dstar", "2", Statement),
            expect("k", "5", Statement),
            expect("embedded", "true", Statement),
            expect("D_G", "2", ProofComputation),
            expect_noted(
                "nu_G",
                "2",
                Oracle,
                "the statement gives 3 while the computation gives 2; the brute-force oracle agrees with 2",
            ),
            expect("D_G*", "0", ProofComputation),
            expect("l0_G*", "2", ProofComputation),
            expect("nu_i_G*", "2,2", ProofComputation),
            expect("nu_G*", "1", Statement),
        ],
    },
    CatalogEntry {
        name: "k3-torus",
        description: "G = wp'/wp, G* = 2(wp^2 - 3a^2)/wp' on the square torus, a = wp(1/2)",
        template: Template::Torus {
            g: "wpp/wp",
            g_star: "2*(wp^2-3*a^2)/wpp",
            end_values: &[(0.0, 0.0), (0.0, 1.0), (0.0, -1.0)],
        },
        params: &[],
        fixture: &[
            expect("period", "true", Statement),
            expect("d", "2", ProofComputation),
            expect("dstar", "4", ProofComputation),
            expect("k", "5", Statement),
            expect("osserman_holds", "true", Statement),
            expect("equality", "false", ProofComputation),
            expect("embedded", "false", ProofComputation),
            expect("complete_regular", "true", ProofComputation),
            expect_noted(
                "undeclared_coincidences",
                "1",
                Oracle,
                "G = G* also at the lattice point, which is not among the declared ends",
            ),
        ],
    },
];

pub fn entries() -> &'static [CatalogEntry] {
    ENTRIES
}

pub fn find(name: &str) -> Result<&'static CatalogEntry, CatalogError> {
    ENTRIES
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CatalogError::UnknownEntry(name.to_string()))
}

impl CatalogEntry {
    /// Default parameters overridden by `overrides`, checked against each
    /// parameter's domain.
    pub fn bindings(&self, overrides: &Bindings) -> Result<Bindings, CatalogError> {
        for name in overrides.keys() {
            if !self.params.iter().any(|p| p.name == name) {
                return Err(CatalogError::UnknownParameter {
                    entry: self.name.into(),
                    name: name.clone(),
                });
            }
        }
        let mut out = Bindings::new();
        for p in self.params {
            let value = match overrides.get(p.name) {
                Some(v) => v.clone(),
                None => crate::expr::parse_constant(p.default).expect("defaults parse"),
            };
            p.check(&value)?;
            out.insert(p.name.to_string(), value);
        }
        Ok(out)
    }

    /// True when `overrides` leaves every parameter at its default.
    pub fn is_default(&self, overrides: &Bindings) -> bool {
        self.bindings(&Bindings::new()).ok() == self.bindings(overrides).ok()
    }

    fn rational_spec(&self, params: &Bindings, scale: f64) -> Result<(FrontSpec, SpecEcho), CatalogError> {
        let Template::Rational { g, g_star, extra_ends } = self.template else {
            unreachable!("rational template")
        };
        let extra = extra_ends
            .iter()
            .map(|e| parse_point(e))
            .collect::<Result<Vec<_>, _>>()?;
        let gm = parse_rational(g, params).map_err(AnalysisError::from)?;
        let gs = parse_rational(g_star, params).map_err(AnalysisError::from)?;
        let spec = FrontSpec::new(gm, gs, scale, &extra).map_err(AnalysisError::from)?;
        let echo = SpecEcho::new(g, g_star, params, scale, 0, spec.ends.iter().map(ToString::to_string).collect());
        Ok((spec, echo))
    }

    fn torus_front(&self, scale: f64) -> Result<(EllipticFront, SpecEcho), CatalogError> {
        let Template::Torus { g, g_star, end_values } = self.template else {
            unreachable!("torus template")
        };
        let torus = SquareTorus::new();
        let none = Bindings::new();
        let gm = parse_elliptic(g, &none).map_err(AnalysisError::from)?;
        let gs = parse_elliptic(g_star, &none).map_err(AnalysisError::from)?;
        let mut ends = Vec::new();
        for &(re, im) in end_values {
            let w = Complex64::new(re, im) * torus.a;
            let pre = torus.wp_preimages(w).map_err(AnalysisError::from)?;
            ends.extend(pre.into_iter().map(|(z, _)| z));
        }
        let front = EllipticFront::new(torus, gm, gs, scale, ends).map_err(AnalysisError::from)?;
        let echo = SpecEcho::new(
            g,
            g_star,
            &none,
            scale,
            1,
            front
                .ends()
                .iter()
                .map(|z| crate::sphere::format_complex(*z))
                .collect(),
        );
        Ok((front, echo))
    }

    pub fn run(&self, overrides: &Bindings, scale: f64) -> Result<Report, CatalogError> {
        let params = self.bindings(overrides)?;
        Ok(match self.template {
            Template::Rational { .. } => {
                let (spec, echo) = self.rational_spec(&params, scale)?;
                Report::Rational(Box::new(analyze_spec(&spec, echo)?))
            }
            Template::Torus { .. } => {
                let (front, echo) = self.torus_front(scale)?;
                Report::Torus(Box::new(analyze_elliptic(&front, echo)?))
            }
        })
    }

    /// The front itself, for sampling, with the spec echo used in sidecars.
    pub fn front(&self, overrides: &Bindings, scale: f64) -> Result<(CatalogFront, SpecEcho), CatalogError> {
        let params = self.bindings(overrides)?;
        Ok(match self.template {
            Template::Rational { .. } => {
                let (spec, echo) = self.rational_spec(&params, scale)?;
                let prepared = PreparedFront::new(&spec).map_err(AnalysisError::from)?;
                (CatalogFront::Rational(Box::new(prepared)), echo)
            }
            Template::Torus { .. } => {
                let (front, echo) = self.torus_front(scale)?;
                (CatalogFront::Torus(Box::new(front)), echo)
            }
        })
    }

    /// Compares a report against the fixture.
    pub fn check(&self, report: &Report) -> Vec<FixtureCheck> {
        let summary = report.summary();
        self.fixture
            .iter()
            .map(|e| {
                let actual = summary.get(e.key).cloned();
                FixtureCheck {
                    key: e.key,
                    expected: e.value,
                    pass: actual.as_deref() == Some(e.value),
                    actual,
                    provenance: e.provenance,
                }
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::bindings;

    fn q(n: i64, d: i64) -> GaussianRational {
        GaussianRational::from_ratio(n, d)
    }

    fn assert_fixture(name: &str) {
        let entry = find(name).unwrap();
        let report = entry.run(&Bindings::new(), 1.0).unwrap();
        let failed: Vec<_> = entry.check(&report).into_iter().filter(|c| !c.pass).collect();
        assert!(failed.is_empty(), "{name}: {failed:#?}");
    }

    #[test]
    fn rational_fixtures_pass() {
        for name in ["revolution", "kuy-z-z2", "k1-four-ends", "k2-five-ends"] {
            assert_fixture(name);
        }
    }

    #[test]
    fn torus_fixture_passes() {
        assert_fixture("k3-torus");
    }

    #[test]
    fn horosphere_when_alpha_vanishes() {
        let r = find("revolution").unwrap().run(&bindings([("alpha", q(0, 1))]), 1.0).unwrap();
        assert_eq!(r.summary()["horosphere"], "true");
    }

    #[test]
    fn parameter_domains_are_enforced() {
        let k1 = find("k1-four-ends").unwrap();
        for bad in [q(1, 1), q(0, 1), q(-1, 1)] {
            assert!(matches!(k1.run(&bindings([("a", bad)]), 1.0), Err(CatalogError::OutOfDomain { .. })));
        }
        let complex = crate::expr::parse_constant("1+i").unwrap();
        assert!(k1.bindings(&bindings([("a", complex)])).is_err());
        assert!(matches!(
            k1.bindings(&bindings([("b", q(2, 1))])),
            Err(CatalogError::UnknownParameter { .. })
        ));
        assert!(matches!(find("nope"), Err(CatalogError::UnknownEntry(_))));
    }

    #[test]
    fn overrides_are_not_defaults() {
        let k1 = find("k1-four-ends").unwrap();
        assert!(k1.is_default(&Bindings::new()));
        assert!(k1.is_default(&bindings([("a", q(2, 1))])));
        assert!(!k1.is_default(&bindings([("a", q(3, 1))])));
    }
}
