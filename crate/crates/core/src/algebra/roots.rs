//! Hybrid exact/numeric polynomial root finding.
//!
//! A polynomial is split into square-free parts with Yun's algorithm, which
//! fixes every multiplicity exactly. Each part is solved numerically with the
//! Aberth–Ehrlich iteration; approximations that round to a Gaussian rational
//! are confirmed by exact evaluation and divided out, the remainder is
//! reported as numeric roots.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use super::poly::eval_complex;
use super::{AlgebraError, Polynomial, Value};

pub const DEFAULT_ROOT_TOL: f64 = 1e-12;
const MAX_ITERATIONS: usize = 2000;
const MAX_RECOGNIZED_DENOMINATOR: u64 = 1_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: Value,
    pub multiplicity: usize,
}

/// All roots of `p` with multiplicities summing to `deg p`.
///
/// Numeric roots closer than `10 * tol` are merged into one cluster.
pub fn roots(p: &Polynomial, tol: f64) -> Result<Vec<Root>, AlgebraError> {
    if p.is_zero() {
        return Err(AlgebraError::ZeroPolynomial);
    }
    let mut out: Vec<Root> = Vec::new();
    for (factor, m) in p.squarefree_factors() {
        let (exact, rest) = extract_exact_roots(&factor, tol)?;
        out.extend(exact.into_iter().map(|r| Root {
            value: Value::Exact(r),
            multiplicity: m,
        }));
        if rest.degree().unwrap_or(0) > 0 {
            for z in aberth(&rest.to_complex_coeffs(), tol)? {
                out.push(Root {
                    value: Value::Numeric(z),
                    multiplicity: m,
                });
            }
        }
    }
    Ok(merge_clusters(out, 10.0 * tol))
}

/// Exact Gaussian-rational roots of a square-free polynomial and the
/// deflated cofactor that has none left.
fn extract_exact_roots(
    factor: &Polynomial,
    tol: f64,
) -> Result<(Vec<super::GaussianRational>, Polynomial), AlgebraError> {
    let mut rest = factor.clone();
    let mut found = Vec::new();
    let bound = factor
        .root_denominator_bound()
        .min(BigInt::from(MAX_RECOGNIZED_DENOMINATOR))
        .to_u64()
        .unwrap_or(MAX_RECOGNIZED_DENOMINATOR)
        .max(1);
    let approximations = aberth(&factor.to_complex_coeffs(), tol)?;
    for z in approximations {
        if rest.degree().unwrap_or(0) == 0 {
            break;
        }
        for limit in [bound, 1000.min(bound), 12.min(bound)] {
            let Some(candidate) = super::GaussianRational::approximate(z, limit) else {
                continue;
            };
            if rest.eval(&candidate).is_zero() {
                rest = rest
                    .exact_div(&Polynomial::linear(&candidate))
                    .expect("exact root divides");
                found.push(candidate);
                break;
            }
        }
    }
    Ok((found, rest))
}

fn merge_clusters(roots: Vec<Root>, radius: f64) -> Vec<Root> {
    let mut merged: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        let target = match r.value {
            Value::Numeric(z) => merged.iter().position(|m| match m.value {
                Value::Numeric(w) => (w - z).norm() <= radius,
                Value::Exact(_) => false,
            }),
            Value::Exact(_) => None,
        };
        match target {
            Some(idx) => {
                let m = &mut merged[idx];
                if let (Value::Numeric(w), Value::Numeric(z)) = (&m.value, &r.value) {
                    let total = (m.multiplicity + r.multiplicity) as f64;
                    let centre = (w * m.multiplicity as f64 + z * r.multiplicity as f64) / total;
                    m.value = Value::Numeric(centre);
                }
                m.multiplicity += r.multiplicity;
            }
            None => merged.push(r),
        }
    }
    merged
}

/// Aberth–Ehrlich simultaneous iteration for all roots of a polynomial with
/// complex coefficients (lowest degree first), followed by Newton polishing.
/// Intended for square-free input; multiple roots converge only linearly.
pub fn aberth(coeffs: &[Complex64], tol: f64) -> Result<Vec<Complex64>, AlgebraError> {
    let coeffs = trim(coeffs);
    let n = coeffs.len().saturating_sub(1);
    match n {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-coeffs[0] / coeffs[1]]),
        _ => {}
    }
    let deriv: Vec<Complex64> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect();
    let lead = coeffs[n];
    let radius = (0..n)
        .map(|k| (coeffs[k] / lead).norm().powf(1.0 / (n - k) as f64))
        .fold(0.0_f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let angle = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::from_polar(radius, angle)
        })
        .collect();
    let mut converged = vec![false; n];
    for _ in 0..MAX_ITERATIONS {
        let mut all = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let p = eval_complex(&coeffs, z[i]);
            let dp = eval_complex(&deriv, z[i]);
            if p.norm() == 0.0 {
                converged[i] = true;
                continue;
            }
            let ratio = if dp.norm() == 0.0 {
                Complex64::new(tol.max(1e-8), tol.max(1e-8))
            } else {
                p / dp
            };
            let repulsion: Complex64 = (0..n)
                .filter(|&j| j != i)
                .map(|j| {
                    let d = z[i] - z[j];
                    if d.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        d.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * repulsion;
            let step = if denom.norm() == 0.0 { ratio } else { ratio / denom };
            z[i] -= step;
            if step.norm() <= tol * 1e-2 * (1.0 + z[i].norm()) {
                converged[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            return Ok(z.into_iter().map(|r| polish(&coeffs, &deriv, r)).collect());
        }
    }
    // accept if the residuals are at rounding level anyway
    let ok = z.iter().all(|&r| {
        let scale: f64 = coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| c.norm() * r.norm().powi(k as i32))
            .sum();
        eval_complex(&coeffs, r).norm() <= 1e3 * f64::EPSILON * scale.max(1.0)
    });
    if ok {
        Ok(z.into_iter().map(|r| polish(&coeffs, &deriv, r)).collect())
    } else {
        Err(AlgebraError::NonConvergence {
            iterations: MAX_ITERATIONS,
        })
    }
}

fn polish(coeffs: &[Complex64], deriv: &[Complex64], mut z: Complex64) -> Complex64 {
    for _ in 0..3 {
        let dp = eval_complex(deriv, z);
        if dp.norm() == 0.0 {
            break;
        }
        let step = eval_complex(coeffs, z) / dp;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        let next = z - step;
        if eval_complex(coeffs, next).norm() > eval_complex(coeffs, z).norm() {
            break;
        }
        z = next;
    }
    z
}

fn trim(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut v = coeffs.to_vec();
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}
