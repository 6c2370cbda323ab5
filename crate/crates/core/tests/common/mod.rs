//! Floating-point brute force for totally ramified values. It shares no code
//! with the library's exact pipeline.

#![allow(dead_code)]

use flatfront::algebra::RationalMap;
use flatfront::sphere::ExtendedPoint;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;

const CLUSTER: f64 = 1e-2;
const VALUE_TOL: f64 = 1e-5;
const END_TOL: f64 = 1e-3;

pub fn trim(mut c: Vec<Complex64>) -> Vec<Complex64> {
    while c.len() > 1 && c.last().unwrap().norm() < 1e-12 {
        c.pop();
    }
    c
}

pub fn horner(c: &[Complex64], z: Complex64) -> Complex64 {
    c.iter().rev().fold(Complex64::new(0.0, 0.0), |acc, a| acc * z + a)
}

pub fn mul(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let mut out = vec![Complex64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn deriv(a: &[Complex64]) -> Vec<Complex64> {
    if a.len() <= 1 {
        return vec![Complex64::new(0.0, 0.0)];
    }
    a.iter().enumerate().skip(1).map(|(k, c)| c * k as f64).collect()
}

pub fn sub(a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| a.get(k).copied().unwrap_or_default() - b.get(k).copied().unwrap_or_default())
        .collect()
}

/// Weierstrass–Durand–Kerner iteration.
pub fn durand_kerner(coeffs: &[Complex64]) -> Vec<Complex64> {
    let c = trim(coeffs.to_vec());
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let lead = c[n];
    let monic: Vec<Complex64> = c.iter().map(|x| x / lead).collect();
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..5000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    den *= z[i] - z[j];
                }
            }
            let step = horner(&monic, z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 {
            break;
        }
    }
    z
}

/// Roots grouped into clusters; the cluster size is the multiplicity.
pub fn clustered_roots(coeffs: &[Complex64]) -> Vec<(Complex64, usize)> {
    let mut out: Vec<(Complex64, usize, Complex64)> = Vec::new();
    for z in durand_kerner(coeffs) {
        match out.iter_mut().find(|(c, _, _)| (c - z).norm() < CLUSTER) {
            Some(entry) => {
                entry.1 += 1;
                entry.2 += z;
            }
            None => out.push((z, 1, z)),
        }
    }
    out.into_iter().map(|(_, m, s)| (s / m as f64, m)).collect()
}

#[derive(Clone, Copy, Debug)]
pub enum Pt {
    At(Complex64),
    Inf,
}

pub fn same(a: Pt, b: Pt) -> bool {
    match (a, b) {
        (Pt::Inf, Pt::Inf) => true,
        (Pt::At(x), Pt::At(y)) => (x - y).norm() < CLUSTER * (1.0 + x.norm()),
        _ => false,
    }
}

pub fn at_end(e: Pt, p: Pt) -> bool {
    match (e, p) {
        (Pt::Inf, Pt::Inf) => true,
        (Pt::At(x), Pt::At(y)) => (x - y).norm() < END_TOL * (1.0 + x.norm()),
        _ => false,
    }
}

pub fn same_value(a: Pt, b: Pt) -> bool {
    match (a, b) {
        (Pt::Inf, Pt::Inf) => true,
        (Pt::At(x), Pt::At(y)) => (x - y).norm() < VALUE_TOL * (1.0 + x.norm()),
        _ => false,
    }
}

pub struct Oracle {
    pub num: Vec<Complex64>,
    pub den: Vec<Complex64>,
    pub d: usize,
}

impl Oracle {
    pub fn eval(&self, p: Pt) -> Pt {
        let dn = self.num.len() - 1;
        let dd = self.den.len() - 1;
        match p {
            Pt::Inf => match dn.cmp(&dd) {
                std::cmp::Ordering::Greater => Pt::Inf,
                std::cmp::Ordering::Less => Pt::At(Complex64::new(0.0, 0.0)),
                std::cmp::Ordering::Equal => Pt::At(self.num[dn] / self.den[dd]),
            },
            Pt::At(z) => {
                let q = horner(&self.den, z);
                let n = horner(&self.num, z);
                if q.norm() < 1e-9 * (1.0 + n.norm()) {
                    Pt::Inf
                } else {
                    Pt::At(n / q)
                }
            }
        }
    }

    /// Finite critical points with branching order from the derivative's
    /// vanishing order, and the branching at infinity.
    pub fn critical_points(&self) -> Vec<(Pt, usize)> {
        let w = trim(sub(&mul(&deriv(&self.num), &self.den), &mul(&self.num, &deriv(&self.den))));
        let mut out: Vec<(Pt, usize)> = clustered_roots(&w).into_iter().map(|(z, m)| (Pt::At(z), m)).collect();
        out.push((Pt::Inf, self.multiplicity_at_infinity() - 1));
        out
    }

    pub fn multiplicity_at_infinity(&self) -> usize {
        let dn = self.num.len() - 1;
        let dd = self.den.len() - 1;
        match self.eval(Pt::Inf) {
            Pt::Inf => dn - dd,
            Pt::At(b) => {
                let p = trim(sub(&self.num, &self.den.iter().map(|c| c * b).collect::<Vec<_>>()));
                self.d - (p.len() - 1)
            }
        }
    }

    pub fn fiber(&self, b: Pt) -> Vec<(Pt, usize)> {
        let mut out: Vec<(Pt, usize)> = match b {
            Pt::Inf => clustered_roots(&self.den).into_iter().map(|(z, m)| (Pt::At(z), m)).collect(),
            Pt::At(w) => {
                let p = sub(&self.num, &self.den.iter().map(|c| c * w).collect::<Vec<_>>());
                let crit = self.critical_points();
                clustered_roots(&p)
                    .into_iter()
                    .map(|(z, _)| {
                        let branching = crit
                            .iter()
                            .filter(|(c, _)| same(*c, Pt::At(z)))
                            .map(|(_, m)| *m)
                            .sum::<usize>();
                        (Pt::At(z), branching + 1)
                    })
                    .collect()
            }
        };
        if same_value(self.eval(Pt::Inf), b) {
            out.push((Pt::Inf, self.multiplicity_at_infinity()));
        }
        out
    }

    pub fn nu(&self, ends: &[Pt]) -> (usize, usize, BigRational) {
        let mut candidates: Vec<Pt> = Vec::new();
        let values = ends
            .iter()
            .map(|e| self.eval(*e))
            .chain(self.critical_points().into_iter().filter(|(_, m)| *m > 0).map(|(c, _)| self.eval(c)));
        for v in values {
            if !candidates.iter().any(|c| same_value(*c, v)) {
                candidates.push(v);
            }
        }
        let (mut r0, mut l0) = (0, 0);
        let mut nu = BigRational::from_integer(BigInt::from(0));
        for b in candidates {
            let inner: Vec<usize> = self
                .fiber(b)
                .into_iter()
                .filter(|(p, _)| !ends.iter().any(|e| at_end(*e, *p)))
                .map(|(_, m)| m)
                .collect();
            match inner.iter().min() {
                None => {
                    r0 += 1;
                    nu += BigRational::one();
                }
                Some(&m) if m >= 2 => {
                    l0 += 1;
                    nu += BigRational::one() - BigRational::new(BigInt::from(1), BigInt::from(m));
                }
                Some(_) => {}
            }
        }
        (r0, l0, nu)
    }
}

pub fn oracle_of(g: &RationalMap) -> Oracle {
    Oracle {
        num: trim(g.numerator().to_complex_coeffs()),
        den: trim(g.denominator().to_complex_coeffs()),
        d: g.degree(),
    }
}

pub fn to_pt(p: &ExtendedPoint) -> Pt {
    p.to_complex().map_or(Pt::Inf, Pt::At)
}
