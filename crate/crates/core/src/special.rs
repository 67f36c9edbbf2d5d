//! Complex Gamma function, oscillatory power kernels and the constants c_j^±, M_j.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::materials::BimaterialParams;
use crate::matrix::Mat2;

const I: Complex64 = Complex64::new(0.0, 1.0);

// Lanczos approximation, g = 7, nine terms (the GSL / Numerical Recipes set).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Γ(z) for complex z.
///
/// Relative accuracy is about 1e-14 on |Im z| ≤ 5, 0.1 ≤ Re z ≤ 5. Arguments with
/// Re z < 1/2 go through the reflection formula.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    if !z.is_finite() {
        return Err(Error::Domain(format!("gamma of non-finite argument {z}")));
    }
    if z.im == 0.0 && z.re <= 0.0 && z.re == z.re.round() {
        return Err(Error::Pole {
            what: "the Gamma function",
            s: z,
        });
    }
    Ok(gamma_unchecked(z))
}

fn gamma_unchecked(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        return PI / ((PI * z).sin() * gamma_unchecked(1.0 - z));
    }
    let z = z - 1.0;
    let mut sum = Complex64::new(LANCZOS_COEF[0], 0.0);
    for (k, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        sum += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    (2.0 * PI).sqrt() * t.powc(z + 0.5) * (-t).exp() * sum
}

/// x^σ · e^{iε ln x} for x > 0.
pub fn power_kernel(x: f64, sigma: f64, eps: f64) -> Result<Complex64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("power kernel needs x > 0, got {x}")));
    }
    Ok(real_pow(x, Complex64::new(sigma, eps)))
}

/// x^z for real x > 0, principal logarithm. The caller guarantees x > 0.
pub(crate) fn real_pow(x: f64, z: Complex64) -> Complex64 {
    (z * x.ln()).exp()
}

/// The constants c_j^± (j = 1, 2, 3) and the matrices M_j built from them.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscConstants {
    /// `c_plus[j-1]` is c_j^+.
    pub c_plus: [Complex64; 3],
    /// `c_minus[j-1]` is c_j^−.
    pub c_minus: [Complex64; 3],
    /// `m[j-1]` is M_j.
    pub m: [Mat2; 3],
    pub d0: f64,
    pub e0: f64,
    pub epsilon: f64,
}

impl OscConstants {
    pub fn new(params: &BimaterialParams) -> Self {
        let eps = params.epsilon;
        let sqrt_pi = PI.sqrt();
        let one_plus_i = Complex64::new(1.0, 1.0);
        let one_minus_i = Complex64::new(1.0, -1.0);
        // (prefactor, Gamma argument offset) for j = 1, 2, 3.
        let shapes = [(one_plus_i, 0.5), (one_minus_i, 1.5), (-one_plus_i, 2.5)];

        let mut c_plus = [Complex64::default(); 3];
        let mut c_minus = [Complex64::default(); 3];
        let mut m = [Mat2::zero(); 3];
        for (j, &(pre, shift)) in shapes.iter().enumerate() {
            // Arguments have Re ≥ 1/2, far from the poles of Γ.
            let gp = gamma_unchecked(Complex64::new(shift, eps));
            let gm = gamma_unchecked(Complex64::new(shift, -eps));
            c_plus[j] = pre * sqrt_pi / (2.0 * gp);
            c_minus[j] = pre * sqrt_pi / (2.0 * gm);
            let k = params.d0 / (4.0 * c_plus[j] * c_minus[j]);
            m[j] = Mat2::new(-c_minus[j], c_plus[j], I * c_minus[j], I * c_plus[j]).scale(k);
        }
        Self {
            c_plus,
            c_minus,
            m,
            d0: params.d0,
            e0: params.e0,
            epsilon: eps,
        }
    }

    /// M_j^{-1}. Every M_j is invertible for admissible materials.
    pub fn m_inverse(&self, j: usize) -> Mat2 {
        self.m[j - 1]
            .inverse()
            .expect("M_j is invertible: det = -d0^2/(4 c_j^+ c_j^-) != 0")
    }
}

/// Convenience wrapper matching the other module entry points.
pub fn osc_constants(params: &BimaterialParams) -> OscConstants {
    OscConstants::new(params)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn gamma_at_simple_points() {
        assert!(rel(gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0)) < 1e-14);
        assert!(rel(gamma(c(0.5, 0.0)).unwrap(), c(PI.sqrt(), 0.0)) < 1e-14);
        assert!(rel(gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0)) < 1e-14);
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn gamma_matches_frozen_reference_values() {
        // Reference values from a 30-digit evaluation (mpmath.gamma).
        let cases = [
            (
                c(0.5, 0.073_134),
                c(1.731_680_724_850_418_6, -0.248_475_787_521_848_04),
            ),
            (
                c(2.5, -1.2),
                c(0.586_080_625_396_340_76, -0.747_896_383_847_702_71),
            ),
            (
                c(0.1, 5.0),
                c(-0.000_380_860_691_381_205_68, 0.000_341_117_012_449_265_32),
            ),
            (
                c(4.7, 3.3),
                c(1.478_762_623_661_404_7, -4.483_857_908_355_226_5),
            ),
        ];
        for (z, want) in cases {
            let got = gamma(z).unwrap();
            assert!(rel(got, want) < 1e-12, "gamma({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn gamma_poles_rejected() {
        assert!(gamma(c(0.0, 0.0)).is_err());
        assert!(gamma(c(-3.0, 0.0)).is_err());
        assert!(gamma(c(-3.0, 1e-3)).is_ok());
    }

    #[test]
    fn power_kernel_examples() {
        assert!((power_kernel(1.0, -0.5, 0.3).unwrap() - c(1.0, 0.0)).norm() < 1e-15);
        let e = power_kernel(std::f64::consts::E, 0.0, 0.5).unwrap();
        assert!((e - c(0.5f64.cos(), 0.5f64.sin())).norm() < 1e-15);
        let eps = 0.073_134;
        let phase = eps * 4f64.ln();
        let want = c(0.5 * phase.cos(), 0.5 * phase.sin());
        assert!((power_kernel(4.0, -0.5, eps).unwrap() - want).norm() < 1e-15);
        assert!(power_kernel(0.0, -0.5, eps).is_err());
        assert!(power_kernel(-1.0, -0.5, eps).is_err());
    }

    #[test]
    fn constants_at_zero_oscillation() {
        let p = BimaterialParams::from_constants(1.0, 0.3, 1.0, 0.3).unwrap();
        let k = OscConstants::new(&p);
        for j in 0..3 {
            assert!((k.c_plus[j] - k.c_minus[j]).norm() < 1e-15);
        }
        assert!((k.c_plus[0] - c(0.5, 0.5)).norm() < 1e-14);
        assert!((k.c_plus[1] - c(1.0, -1.0)).norm() < 1e-14);
        assert!((k.c_plus[2] - c(-2.0 / 3.0, -2.0 / 3.0)).norm() < 1e-14);
        assert!((k.m[0].det() - c(-0.25, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn m_inverses_are_inverses() {
        let p = BimaterialParams::from_eta(0.5, 0.2, 0.3).unwrap();
        let k = OscConstants::new(&p);
        for j in 1..=3 {
            let prod = k.m_inverse(j) * k.m[j - 1];
            assert!((prod - Mat2::identity()).max_abs() < 1e-12);
        }
    }
}
