//! Dense 2×2 complex matrices, the only linear algebra the weight-function
//! formulas need.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Row-major 2×2 complex matrix. `m[i][j]` is row `i`, column `j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub m: [[Complex64; 2]; 2],
}

impl Mat2 {
    pub const fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Self {
            m: [[a11, a12], [a21, a22]],
        }
    }

    pub const fn zero() -> Self {
        Self::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Self::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn diag(d1: Complex64, d2: Complex64) -> Self {
        Self::new(d1, ZERO, ZERO, d2)
    }

    /// The pattern shared by every weight-function matrix:
    /// `[[a, -b], [b, a]]`, i.e. entry (1,2) = −entry (2,1) and entry (2,2) = entry (1,1).
    pub fn rotation_like(a: Complex64, b: Complex64) -> Self {
        Self::new(a, -b, b, a)
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.m[row][col]
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Inverse, or `None` when the determinant vanishes.
    pub fn inverse(&self) -> Option<Self> {
        let det = self.det();
        if det.norm() == 0.0 || !det.is_finite() {
            return None;
        }
        let inv = 1.0 / det;
        Some(Self::new(
            self.m[1][1] * inv,
            -self.m[0][1] * inv,
            -self.m[1][0] * inv,
            self.m[0][0] * inv,
        ))
    }

    pub fn transpose(&self) -> Self {
        Self::new(self.m[0][0], self.m[1][0], self.m[0][1], self.m[1][1])
    }

    pub fn scale(&self, k: Complex64) -> Self {
        Self::new(
            self.m[0][0] * k,
            self.m[0][1] * k,
            self.m[1][0] * k,
            self.m[1][1] * k,
        )
    }

    pub fn apply(&self, v: [Complex64; 2]) -> [Complex64; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.m
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        let mut r = self;
        for i in 0..2 {
            for j in 0..2 {
                r.m[i][j] += o.m[i][j];
            }
        }
        r
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        self + (-o)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-ONE)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        let a = &self.m;
        let b = &o.m;
        Mat2::new(
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn inverse_round_trip() {
        let a = Mat2::new(c(1.0, 2.0), c(-0.5, 0.1), c(0.3, -1.0), c(2.0, 0.0));
        let prod = a * a.inverse().unwrap();
        assert!((prod - Mat2::identity()).max_abs() < 1e-15);
    }

    #[test]
    fn singular_has_no_inverse() {
        let a = Mat2::new(c(1.0, 0.0), c(2.0, 0.0), c(2.0, 0.0), c(4.0, 0.0));
        assert!(a.inverse().is_none());
    }

    #[test]
    fn rotation_like_pattern() {
        let a = Mat2::rotation_like(c(1.0, 1.0), c(0.0, 2.0));
        assert_eq!(a.get(0, 1), -a.get(1, 0));
        assert_eq!(a.get(1, 1), a.get(0, 0));
    }
}
