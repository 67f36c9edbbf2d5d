//! Bimaterial constants for two isotropic half-planes bonded along the crack line.
//!
//! The upper half-plane (x₂ > 0) carries the `+` constants, the lower one the `−`
//! constants. Plane strain throughout, so κ = 3 − 4ν.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Isotropic elastic constants of one half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElasticHalfPlane {
    /// Shear modulus, > 0.
    pub mu: f64,
    /// Poisson ratio, in (−1, 1/2).
    pub nu: f64,
}

impl ElasticHalfPlane {
    pub fn new(mu: f64, nu: f64) -> Result<Self> {
        let hp = Self { mu, nu };
        hp.validate()?;
        Ok(hp)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu.is_finite() && self.mu > 0.0) {
            return Err(Error::InvalidMaterial(format!(
                "shear modulus must be positive and finite, got {}",
                self.mu
            )));
        }
        if !(self.nu > -1.0 && self.nu < 0.5) {
            return Err(Error::InvalidMaterial(format!(
                "Poisson ratio must lie in (-1, 0.5), got {}",
                self.nu
            )));
        }
        Ok(())
    }
}

/// Every derived constant of the bimaterial pair.
///
/// `b`, `d`, `e`, `f` and `gamma` are compliances (inverse stress); the rest are
/// dimensionless. `gamma` is stored instead of γ* because γ* is singular at α = 0
/// while every formula only needs the product α·γ* = γ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BimaterialParams {
    pub plus: ElasticHalfPlane,
    pub minus: ElasticHalfPlane,
    /// Oscillation index ε = arctanh(d*)/π.
    pub epsilon: f64,
    pub alpha: f64,
    pub d_star: f64,
    pub gamma: f64,
    pub b: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    /// Antiplane mismatch (μ₋ − μ₊)/(μ₋ + μ₊).
    pub eta: f64,
    /// (1 − d*²)^{1/4}, so that cosh(πε) = 1/d₀².
    pub d0: f64,
    /// e^{πε/2}.
    pub e0: f64,
    /// Poisson ratio of the equivalent homogeneous material, 1 − b·d₀⁴/(b + e).
    pub nu_equiv: f64,
}

/// Residual of one closed-form identity between the stored constants.
#[derive(Debug, Clone, PartialEq)]
pub struct IdentityResidual {
    pub name: &'static str,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IdentityReport {
    pub residuals: Vec<IdentityResidual>,
    pub max_residual: f64,
}

impl BimaterialParams {
    /// Derive all constants from the two sets of elastic inputs.
    pub fn derive(plus: ElasticHalfPlane, minus: ElasticHalfPlane) -> Result<Self> {
        plus.validate()?;
        minus.validate()?;
        let (mp, np) = (plus.mu, plus.nu);
        let (mm, nm) = (minus.mu, minus.nu);

        let b = (1.0 - np) / mp + (1.0 - nm) / mm;
        let d = (1.0 - 2.0 * np) / (2.0 * mp) - (1.0 - 2.0 * nm) / (2.0 * mm);
        let e = np / mp + nm / mm;
        let f = np / mp - nm / mm;
        let gamma = ((1.0 - 2.0 * np) / (2.0 * mp) + (1.0 - 2.0 * nm) / (2.0 * mm)) / b;

        let stiff_sum = mm * (1.0 - np) + mp * (1.0 - nm);
        let alpha = (mm * (1.0 - np) - mp * (1.0 - nm)) / stiff_sum;
        let d_star = (mm * (1.0 - 2.0 * np) - mp * (1.0 - 2.0 * nm)) / (2.0 * stiff_sum);
        let eta = (mm - mp) / (mm + mp);

        let epsilon = d_star.atanh() / PI;
        let d0 = (1.0 - d_star * d_star).sqrt().sqrt();
        let e0 = (0.5 * PI * epsilon).exp();
        let nu_equiv = 1.0 - b * d0.powi(4) / (b + e);

        Ok(Self {
            plus,
            minus,
            epsilon,
            alpha,
            d_star,
            gamma,
            b,
            d,
            e,
            f,
            eta,
            d0,
            e0,
            nu_equiv,
        })
    }

    /// Convenience form used by parameter studies: μ₊ = 1 and μ₋ = (1 + η)/(1 − η).
    pub fn from_eta(eta: f64, nu_plus: f64, nu_minus: f64) -> Result<Self> {
        if !(eta > -1.0 && eta < 1.0) {
            return Err(Error::InvalidMaterial(format!(
                "eta must lie in (-1, 1), got {eta}"
            )));
        }
        Self::derive(
            ElasticHalfPlane::new(1.0, nu_plus)?,
            ElasticHalfPlane::new((1.0 + eta) / (1.0 - eta), nu_minus)?,
        )
    }

    pub fn from_constants(
        mu_plus: f64,
        nu_plus: f64,
        mu_minus: f64,
        nu_minus: f64,
    ) -> Result<Self> {
        Self::derive(
            ElasticHalfPlane::new(mu_plus, nu_plus)?,
            ElasticHalfPlane::new(mu_minus, nu_minus)?,
        )
    }

    /// The same interface with the two half-planes exchanged.
    pub fn swapped(&self) -> Result<Self> {
        Self::derive(self.minus, self.plus)
    }

    /// γ* = γ/α. Undefined for α = 0.
    pub fn gamma_star(&self) -> Result<f64> {
        if self.alpha == 0.0 {
            return Err(Error::Domain(
                "gamma_star is singular when alpha = 0".into(),
            ));
        }
        Ok(self.gamma / self.alpha)
    }

    /// α·d* − γ, the finite prefactor of the skew-symmetric weight function.
    pub fn skew_factor(&self) -> f64 {
        self.alpha * self.d_star - self.gamma
    }

    /// cosh(πε), equal to 1/d₀².
    pub fn cosh_pi_eps(&self) -> f64 {
        (PI * self.epsilon).cosh()
    }

    /// Shear modulus and Poisson ratio of the half-plane selected by `upper`.
    pub fn half_plane(&self, upper: bool) -> ElasticHalfPlane {
        if upper {
            self.plus
        } else {
            self.minus
        }
    }

    /// Recompute every identity of the constant table and report the residuals.
    ///
    /// Residuals are relative: compliance identities are scaled by 1/μ₊ + 1/μ₋.
    pub fn verify_identities(&self) -> IdentityReport {
        let (mp, np) = (self.plus.mu, self.plus.nu);
        let (mm, nm) = (self.minus.mu, self.minus.nu);
        let ds = self.d_star;
        let ch = self.cosh_pi_eps();
        let sh = (PI * self.epsilon).sinh();
        let compliance = 1.0 / mp + 1.0 / mm;
        let rel = |lhs: f64, rhs: f64, scale: f64| (lhs - rhs).abs() / scale.max(rhs.abs());

        let gamma_num = mm * (1.0 - 2.0 * np) + mp * (1.0 - 2.0 * nm);
        let gamma_den = 2.0 * mm * (1.0 - np) - 2.0 * mp * (1.0 - nm);
        let gamma_scale = (self.gamma * gamma_den)
            .abs()
            .max(gamma_num.abs())
            .max(1e-300);

        let residuals = vec![
            IdentityResidual {
                name: "epsilon = arctanh(d*)/pi",
                residual: rel(self.epsilon, ds.atanh() / PI, 1.0),
            },
            IdentityResidual {
                name: "exp(2 pi epsilon) = (1+d*)/(1-d*)",
                residual: rel(
                    (2.0 * PI * self.epsilon).exp(),
                    (1.0 + ds) / (1.0 - ds),
                    1.0,
                ),
            },
            IdentityResidual {
                name: "epsilon = log[(mu+ + k+ mu-)/(mu- + k- mu+)]/(2 pi)",
                residual: rel(
                    self.epsilon,
                    ((mp + (3.0 - 4.0 * np) * mm) / (mm + (3.0 - 4.0 * nm) * mp)).ln() / (2.0 * PI),
                    1.0,
                ),
            },
            IdentityResidual {
                name: "cosh(pi epsilon) d0^2 = 1",
                residual: rel(ch * self.d0 * self.d0, 1.0, 1.0),
            },
            IdentityResidual {
                name: "sinh(pi epsilon) d0^2 = d*",
                residual: rel(sh * self.d0 * self.d0, ds, 1.0),
            },
            IdentityResidual {
                name: "e0^2 = (1+d*)/d0^2",
                residual: rel(self.e0 * self.e0, (1.0 + ds) / (self.d0 * self.d0), 1.0),
            },
            IdentityResidual {
                name: "d* = d/b",
                residual: rel(ds * self.b, self.d, compliance),
            },
            IdentityResidual {
                name: "b alpha = (1-nu+)/mu+ - (1-nu-)/mu-",
                residual: rel(
                    self.alpha * self.b,
                    (1.0 - np) / mp - (1.0 - nm) / mm,
                    compliance,
                ),
            },
            IdentityResidual {
                name: "alpha gamma* = gamma",
                residual: (self.gamma * gamma_den - self.alpha * gamma_num).abs() / gamma_scale,
            },
            IdentityResidual {
                name: "b + e = 1/mu+ + 1/mu-",
                residual: rel(self.b + self.e, compliance, compliance),
            },
            IdentityResidual {
                name: "b alpha + f = 1/mu+ - 1/mu-",
                residual: rel(
                    self.b * self.alpha + self.f,
                    1.0 / mp - 1.0 / mm,
                    compliance,
                ),
            },
            IdentityResidual {
                name: "eta = (mu- - mu+)/(mu- + mu+)",
                residual: rel(self.eta, (mm - mp) / (mm + mp), 1.0),
            },
            IdentityResidual {
                name: "1 - nu = b/((b+e) cosh^2(pi epsilon))",
                residual: rel(
                    1.0 - self.nu_equiv,
                    self.b / ((self.b + self.e) * ch * ch),
                    1.0,
                ),
            },
        ];
        let max_residual = residuals.iter().map(|r| r.residual).fold(0.0, f64::max);
        IdentityReport {
            residuals,
            max_residual,
        }
    }
}
