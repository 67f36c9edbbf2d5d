//! Weight-function traces on the crack line, their Fourier transforms and the
//! antiplane full-plane fields.
//!
//! The weight crack occupies x₁ > 0 (the physical crack is x₁ < 0). Matrices are
//! indexed [component][basis vector] and all share the pattern [[a, −b], [b, a]].
//! The transform convention is F(β) = ∫ f(x) e^{iβx} dx.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::materials::BimaterialParams;
use crate::matrix::Mat2;
use crate::special::{real_pow, OscConstants};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// ⟦U⟧, ⟨U⟩ and Σ at one point of the crack line.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSample {
    pub at: f64,
    pub jump_u: Mat2,
    pub mean_u: Mat2,
    pub sigma: Mat2,
}

/// Which half-plane a transform is analytic in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// ⟦Ū⟧⁺, analytic for Im β > 0.
    Plus,
    /// Σ̄⁻, analytic for Im β < 0.
    Minus,
}

/// log β₊ = ln(−iβ) + iπ/2, continuous on the closed upper half-plane minus 0.
pub fn log_plus(beta: Complex64) -> Result<Complex64> {
    if beta == Complex64::new(0.0, 0.0) || beta.im < 0.0 || !beta.is_finite() {
        return Err(Error::Domain(format!(
            "plus branch needs beta != 0 with Im beta >= 0, got {beta}"
        )));
    }
    Ok((-I * beta).ln() + I * (PI / 2.0))
}

/// log β₋ = ln(iβ) − iπ/2, continuous on the closed lower half-plane minus 0.
pub fn log_minus(beta: Complex64) -> Result<Complex64> {
    if beta == Complex64::new(0.0, 0.0) || beta.im > 0.0 || !beta.is_finite() {
        return Err(Error::Domain(format!(
            "minus branch needs beta != 0 with Im beta <= 0, got {beta}"
        )));
    }
    Ok((I * beta).ln() - I * (PI / 2.0))
}

// n-th derivative of z^w at z > 0.
fn dpow(z: f64, w: Complex64, n: u8) -> Complex64 {
    let mut c = Complex64::new(1.0, 0.0);
    for k in 0..n {
        c *= w - f64::from(k);
    }
    c * real_pow(z, w - f64::from(n))
}

/// The plane-strain and antiplane weight functions for one bimaterial.
///
/// Construction evaluates the Gamma-function constants once; traces are then cheap.
#[derive(Debug, Clone, Copy)]
pub struct WeightFunctions {
    params: BimaterialParams,
    osc: OscConstants,
}

impl WeightFunctions {
    pub fn new(params: &BimaterialParams) -> Self {
        Self {
            params: *params,
            osc: OscConstants::new(params),
        }
    }

    pub fn params(&self) -> &BimaterialParams {
        &self.params
    }

    pub fn osc(&self) -> &OscConstants {
        &self.osc
    }

    pub fn trace(&self, x1: f64) -> Result<WeightSample> {
        self.trace_derivative(0, x1)
    }

    /// n-th derivative with respect to x₁ of every trace (n = 0 is the trace).
    pub fn trace_derivative(&self, n: u8, x1: f64) -> Result<WeightSample> {
        if x1 == 0.0 || !x1.is_finite() {
            return Err(Error::Domain(format!(
                "weight traces are not defined at x1 = {x1}"
            )));
        }
        let p = &self.params;
        let (cp, cm) = (self.osc.c_plus[0], self.osc.c_minus[0]);
        let eps = p.epsilon;
        let root = (2.0 * PI).sqrt();
        let lead_m = Complex64::new(-0.5, -eps);
        let lead_p = Complex64::new(-0.5, eps);

        if x1 > 0.0 {
            let c = 1.0 / (2.0 * p.d0 * root);
            let a = dpow(x1, lead_m, n) / cp;
            let b = dpow(x1, lead_p, n) / cm;
            let jump_u = Mat2::rotation_like(c * (a + b), I * c * (a - b));
            return Ok(WeightSample {
                at: x1,
                jump_u,
                mean_u: jump_u.scale((0.5 * p.alpha).into()),
                sigma: Mat2::zero(),
            });
        }

        let y = -x1;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let d03 = p.d0 * p.d0 * p.d0;
        // αd* − γ stays finite where γ* = γ/α does not.
        let kappa = p.skew_factor();
        let pre = sign / (4.0 * d03 * root);
        let a = dpow(y, lead_m, n) / cp;
        let b = dpow(y, lead_p, n) / cm;
        let mean_u = Mat2::rotation_like(-I * kappa * pre * (a - b), kappa * pre * (a + b));

        let ks = sign / (2.0 * p.b * d03 * root);
        let a = Complex64::new(0.5, eps) / cp * dpow(y, Complex64::new(-1.5, -eps), n);
        let b = Complex64::new(0.5, -eps) / cm * dpow(y, Complex64::new(-1.5, eps), n);
        let sigma = Mat2::rotation_like(ks * (a + b), I * ks * (a - b));
        Ok(WeightSample {
            at: x1,
            jump_u: Mat2::zero(),
            mean_u,
            sigma,
        })
    }

    /// n-th derivative of ⟦U⟧ at z > 0, without argument checks.
    pub(crate) fn jump_trace_positive(&self, n: u8, z: f64) -> Mat2 {
        let p = &self.params;
        let c = 1.0 / (2.0 * p.d0 * (2.0 * PI).sqrt());
        let a = dpow(z, Complex64::new(-0.5, -p.epsilon), n) / self.osc.c_plus[0];
        let b = dpow(z, Complex64::new(-0.5, p.epsilon), n) / self.osc.c_minus[0];
        Mat2::rotation_like(c * (a + b), I * c * (a - b))
    }

    /// ⟦Ū⟧⁺(β) for [`Side::Plus`], Σ̄⁻(β) for [`Side::Minus`].
    pub fn transform(&self, beta: Complex64, side: Side) -> Result<Mat2> {
        let p = &self.params;
        let (d0, e0, eps) = (p.d0, p.e0, p.epsilon);
        match side {
            Side::Plus => {
                let l = log_plus(beta)?;
                let half = (-0.5 * l).exp();
                let up = (I * eps * l).exp() * e0;
                let down = (-I * eps * l).exp() / e0;
                let u11 = 0.5 * d0 * half * (up + down);
                let u21 = 0.5 * I * d0 * half * (up - down);
                Ok(Mat2::rotation_like(u11, u21))
            }
            Side::Minus => {
                let l = log_minus(beta)?;
                let half = (0.5 * l).exp();
                let up = (I * eps * l).exp() / e0;
                let down = (-I * eps * l).exp() * e0;
                let k = 1.0 / (2.0 * p.b * d0);
                let s11 = -k * half * (up + down);
                let s21 = -I * k * half * (up - down);
                Ok(Mat2::rotation_like(s11, s21))
            }
        }
    }

    /// Transform of ⟨U⟩ restricted to x₁ < 0: (αd* − γ)·(ib/2β)·J·Σ̄⁻, J = [[0, −1], [1, 0]].
    pub fn skew_minus_transform(&self, beta: Complex64) -> Result<Mat2> {
        let p = &self.params;
        let sigma = self.transform(beta, Side::Minus)?;
        let j = Mat2::rotation_like(Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0));
        let k = p.skew_factor() * I * p.b / (2.0 * beta);
        Ok((j * sigma).scale(k))
    }

    /// Transform of the full ⟨U⟩: (α/2)⟦Ū⟧⁺ plus the minus part. Needs β off the real axis
    /// on neither side, so it is evaluated on the real line only.
    pub fn mean_transform_real(&self, beta: f64) -> Result<Mat2> {
        let b = Complex64::new(beta, 0.0);
        let plus = self
            .transform(b, Side::Plus)?
            .scale((0.5 * self.params.alpha).into());
        Ok(plus + self.skew_minus_transform(b)?)
    }

    /// Alternative normalisation of the plus solution, closed form.
    pub fn alternative_basis(&self, beta: Complex64) -> Result<Mat2> {
        let p = &self.params;
        let (cp, cm) = (self.osc.c_plus[0], self.osc.c_minus[0]);
        let l = log_plus(beta)?;
        let half = (-0.5 * l).exp();
        let up = (I * p.epsilon * l).exp() * p.e0 / cm;
        let down = (-I * p.epsilon * l).exp() / (p.e0 * cp);
        let k = 1.0 / (2.0 * p.d0 * p.d0);
        let v11 = k * half * (-up + down);
        let v21 = -I * k * half * (up + down);
        Ok(Mat2::rotation_like(v11, v21))
    }

    /// The same basis as a right-multiplied combination of ⟦Ū⟧⁺.
    pub fn alternative_basis_by_combination(&self, beta: Complex64) -> Result<Mat2> {
        let (cp, cm) = (self.osc.c_plus[0], self.osc.c_minus[0]);
        let d0 = self.params.d0;
        let mix = Mat2::new(-cp + cm, I * (cp + cm), -I * (cp + cm), -cp + cm);
        let k = 1.0 / (2.0 * cp * cm * d0 * d0 * d0);
        Ok((self.transform(beta, Side::Plus)? * mix).scale(k))
    }

    /// (⟦U₃⟧, ⟨U₃⟩, Σ₃₂) at x₁.
    pub fn mode3_trace(&self, x1: f64) -> Result<(Complex64, Complex64, Complex64)> {
        self.mode3_trace_derivative(0, x1)
    }

    /// n-th x₁-derivative of the antiplane traces.
    pub fn mode3_trace_derivative(
        &self,
        n: u8,
        x1: f64,
    ) -> Result<(Complex64, Complex64, Complex64)> {
        if x1 == 0.0 || !x1.is_finite() {
            return Err(Error::Domain(format!(
                "antiplane traces are not defined at x1 = {x1}"
            )));
        }
        let zero = Complex64::new(0.0, 0.0);
        let one_minus_i = Complex64::new(1.0, -1.0);
        let root = (2.0 * PI).sqrt();
        if x1 > 0.0 {
            let jump = one_minus_i * dpow(x1, Complex64::new(-0.5, 0.0), n) / root;
            Ok((jump, jump * (0.5 * self.params.eta), zero))
        } else {
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let be = self.params.b + self.params.e;
            let s =
                one_minus_i * sign * dpow(-x1, Complex64::new(-1.5, 0.0), n) / (2.0 * root * be);
            Ok((zero, zero, s))
        }
    }

    /// Antiplane weight field (u₃, σ₃₁, σ₃₂) at (x₁, x₂).
    ///
    /// The sign bit of x₂ picks the half-plane, so x₂ = −0.0 gives the lower face
    /// limit. Powers use the principal branch; their bases lie in Re ≥ 0.
    pub fn mode3_field(&self, x1: f64, x2: f64) -> Result<(Complex64, Complex64, Complex64)> {
        if (x1 == 0.0 && x2 == 0.0) || !x1.is_finite() || !x2.is_finite() {
            return Err(Error::Domain(format!(
                "antiplane field is singular at ({x1}, {x2})"
            )));
        }
        let (mp, mm) = (self.params.plus.mu, self.params.minus.mu);
        let root_pi = PI.sqrt();
        let h = Complex64::new(-0.5, 0.0);
        let h3 = Complex64::new(-1.5, 0.0);
        let c = mp * mm / (4.0 * root_pi * (mm + mp));
        if x2.is_sign_negative() {
            let z1 = Complex64::new(-x2, x1);
            let z2 = Complex64::new(-x2, -x1);
            let u = -mp / (2.0 * root_pi * (mm + mp)) * (z1.powc(h) - I * z2.powc(h));
            let s31 = c * (I * z1.powc(h3) - z2.powc(h3));
            let s32 = -c * (z1.powc(h3) - I * z2.powc(h3));
            Ok((u, s31, s32))
        } else {
            let z1 = Complex64::new(x2, x1);
            let z2 = Complex64::new(x2, -x1);
            let u = mm / (2.0 * root_pi * (mm + mp)) * (z1.powc(h) - I * z2.powc(h));
            let s31 = -c * (I * z1.powc(h3) - z2.powc(h3));
            let s32 = -c * (z1.powc(h3) - I * z2.powc(h3));
            Ok((u, s31, s32))
        }
    }
}

pub fn plane_strain_trace(x1: f64, params: &BimaterialParams) -> Result<WeightSample> {
    WeightFunctions::new(params).trace(x1)
}

pub fn plane_strain_transform(
    beta: Complex64,
    side: Side,
    params: &BimaterialParams,
) -> Result<Mat2> {
    WeightFunctions::new(params).transform(beta, side)
}

pub fn mode3_trace(
    x1: f64,
    params: &BimaterialParams,
) -> Result<(Complex64, Complex64, Complex64)> {
    WeightFunctions::new(params).mode3_trace(x1)
}

pub fn mode3_field(
    x1: f64,
    x2: f64,
    params: &BimaterialParams,
) -> Result<(Complex64, Complex64, Complex64)> {
    WeightFunctions::new(params).mode3_field(x1, x2)
}
