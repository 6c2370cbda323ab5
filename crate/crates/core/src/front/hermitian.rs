use num_complex::Complex64;
use serde::Serialize;

/// A 2x2 complex matrix, row major.
pub type Matrix2 = [[Complex64; 2]; 2];

/// A 2x2 Hermitian matrix, identified with a point of Minkowski space by
/// `h11 = x0 + x3`, `h12 = x1 + i x2`, `h22 = x0 - x3`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HermitianPoint {
    pub h11: f64,
    pub h12: Complex64,
    pub h22: f64,
}

impl HermitianPoint {
    pub fn new(h11: f64, h12: Complex64, h22: f64) -> Self {
        Self { h11, h12, h22 }
    }

    pub fn from_coords(x: [f64; 4]) -> Self {
        Self {
            h11: x[0] + x[3],
            h12: Complex64::new(x[1], x[2]),
            h22: x[0] - x[3],
        }
    }

    pub fn coords(&self) -> [f64; 4] {
        [
            0.5 * (self.h11 + self.h22),
            self.h12.re,
            self.h12.im,
            0.5 * (self.h11 - self.h22),
        ]
    }

    /// `x0^2 - x1^2 - x2^2 - x3^2`.
    pub fn det(&self) -> f64 {
        self.h11 * self.h22 - self.h12.norm_sqr()
    }

    /// Lorentzian inner product, `<X, X> = -det X`.
    pub fn inner(&self, other: &Self) -> f64 {
        0.5 * (self.h12 * other.h12.conj() + self.h12.conj() * other.h12).re
            - 0.5 * (self.h11 * other.h22 + self.h22 * other.h11)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.h11 * s, self.h12 * s, self.h22 * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(self.h11 + other.h11, self.h12 + other.h12, self.h22 + other.h22)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(self.h11 - other.h11, self.h12 - other.h12, self.h22 - other.h22)
    }

    /// Poincaré ball image `(x1, x2, x3) / (1 + x0)` of a hyperboloid point.
    pub fn ball_point(&self) -> [f64; 3] {
        let x = self.coords();
        let s = 1.0 + x[0];
        [x[1] / s, x[2] / s, x[3] / s]
    }

    /// `a X a*`.
    pub fn congruence(&self, a: &Matrix2) -> Self {
        let x = self.matrix();
        let ax = mat_mul(a, &x);
        let m = mat_mul(&ax, &adjoint(a));
        Self::new(m[0][0].re, m[0][1], m[1][1].re)
    }

    pub fn matrix(&self) -> Matrix2 {
        [
            [Complex64::new(self.h11, 0.0), self.h12],
            [self.h12.conj(), Complex64::new(self.h22, 0.0)],
        ]
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (self.h11 - other.h11)
            .abs()
            .max((self.h22 - other.h22).abs())
            .max((self.h12 - other.h12).norm())
    }
}

pub fn mat_mul(a: &Matrix2, b: &Matrix2) -> Matrix2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

pub fn adjoint(a: &Matrix2) -> Matrix2 {
    [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
}

pub fn det2(a: &Matrix2) -> Complex64 {
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Inverse of a unimodular matrix.
pub fn unimodular_inverse(a: &Matrix2) -> Matrix2 {
    [[a[1][1], -a[0][1]], [-a[1][0], a[0][0]]]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coordinates_round_trip() {
        let x = [1.5, 1.0, 0.0, -0.5];
        let h = HermitianPoint::from_coords(x);
        assert_eq!((h.h11, h.h12, h.h22), (1.0, Complex64::new(1.0, 0.0), 2.0));
        assert_eq!(h.coords(), x);
        assert_eq!(h.det(), 1.0);
        assert!((h.inner(&h) + h.det()).abs() < 1e-15);
    }

    #[test]
    fn congruence_preserves_inner_product() {
        let a = [
            [Complex64::new(1.0, 0.5), Complex64::new(0.3, -0.2)],
            [Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        ];
        let d = det2(&a).sqrt();
        let a = [[a[0][0] / d, a[0][1] / d], [a[1][0] / d, a[1][1] / d]];
        let x = HermitianPoint::new(2.0, Complex64::new(0.3, 0.4), 1.5);
        let y = HermitianPoint::new(-1.0, Complex64::new(1.1, -0.7), 0.25);
        let (ax, ay) = (x.congruence(&a), y.congruence(&a));
        assert!((ax.inner(&ay) - x.inner(&y)).abs() < 1e-12);
        let back = ax.congruence(&unimodular_inverse(&a));
        assert!(back.max_abs_diff(&x) < 1e-12);
    }
}
