//! Quasi-static advance of the tip along the interface, and the numerical probe
//! of the limit theorem behind the first-order formulas.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::loading::LoadCase;
use crate::materials::BimaterialParams;
use crate::quadrature::{integrate, QuadOptions};
use crate::sif::{advance_matrix, sif_closed_form, TipCoefficients};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Coefficients after the tip has advanced by `a`, next to the unperturbed ones.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdvanceResult {
    pub a: f64,
    pub k_star: Complex64,
    pub a_star: Complex64,
    pub k0: Complex64,
    pub a0: Complex64,
    pub b0: Complex64,
}

impl AdvanceResult {
    /// Linear prediction K₀ + a·(1/2 + iε)A₀.
    pub fn k_predicted(&self, params: &BimaterialParams) -> Complex64 {
        self.k0 + self.a * Complex64::new(0.5, params.epsilon) * self.a0
    }
}

/// Exact K⋆(a), A⋆(a): the load is re-expressed relative to the advanced tip.
/// Requires 0 ≤ a < gap so no load is overrun.
pub fn advance_sif(params: &BimaterialParams, lc: &LoadCase, a: f64) -> Result<AdvanceResult> {
    let moved = lc.shifted(a)?;
    let base = sif_closed_form(params, lc)?;
    let star = if a == 0.0 {
        base
    } else {
        sif_closed_form(params, &moved)?
    };
    Ok(AdvanceResult {
        a,
        k_star: star.k,
        a_star: star.a,
        k0: base.k,
        a0: base.a,
        b0: base.b.expect("closed form carries B"),
    })
}

/// First derivatives of K⋆ and A⋆ at a = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrder {
    /// (1/2 + iε)A₀.
    pub dk: Complex64,
    /// (3/2 + iε)B₀.
    pub da: Complex64,
    /// The same two values through −iM₁⁻¹M₂ and −iM₂⁻¹M₃ acting on [A₀, A₀*] and [B₀, B₀*].
    pub dk_matrix: Complex64,
    pub da_matrix: Complex64,
    pub base: TipCoefficients,
}

impl FirstOrder {
    /// max of |dk − dk_matrix| and |da − da_matrix|, relative.
    pub fn construction_gap(&self) -> f64 {
        let rel = |x: Complex64, y: Complex64| (x - y).norm() / x.norm().max(y.norm()).max(1e-300);
        rel(self.dk, self.dk_matrix).max(rel(self.da, self.da_matrix))
    }
}

pub fn first_order(params: &BimaterialParams, lc: &LoadCase) -> Result<FirstOrder> {
    let balance = lc.check_balance()?;
    if !balance.balanced {
        return Err(Error::Unbalanced {
            force: balance.force[0],
            force_normal: balance.force[1],
            moment: balance.moment,
        });
    }
    let base = sif_closed_form(params, lc)?;
    let b0 = base.b.expect("closed form carries B");
    let eps = params.epsilon;
    let via = |j: usize, v: Complex64| advance_matrix(params, j).apply([v, v.conj()])[0];
    Ok(FirstOrder {
        dk: Complex64::new(0.5, eps) * base.a,
        da: Complex64::new(1.5, eps) * b0,
        dk_matrix: via(1, base.a),
        da_matrix: via(2, b0),
        base,
    })
}

/// Outcome of inverting a plus-function ψ⁺ numerically.
#[derive(Debug, Clone, PartialEq)]
pub struct TauberianReport {
    /// (x, f(x)) on the requested grid.
    pub samples: Vec<(f64, Complex64)>,
    /// Limits from the inversion, and the values the theorem predicts.
    pub f_zero_plus: Complex64,
    pub f_prime_zero_plus: Complex64,
    pub expected_f: Complex64,
    pub expected_f_prime: Complex64,
    /// Largest |f(x)| over the grid points with x < 0.
    pub max_negative_side: f64,
    /// Truncation point of the remainder integral.
    pub cutoff: f64,
}

/// Scale of the subtracted model a₁/(t + iλ) + (a₂ + iλa₁)/(t + iλ)².
const MODEL_SCALE: f64 = 2.0;
const MAX_CUTOFF: f64 = 1.0e6;

/// f(x) = (1/2π)∫ψ(t)e^{−ixt}dt for ψ analytic in the upper half-plane with
/// ψ = a₁/t + a₂/t² + O(t⁻³).
///
/// A model with the same two leading terms and poles only at t = −iλ is
/// inverted exactly; the O(t⁻³) remainder is integrated on [−T, T] with T
/// doubled until the last panels are negligible, plus a t⁻³ tail fitted at ±T.
pub fn tauberian_probe(
    a1: Complex64,
    a2: Complex64,
    psi: impl Fn(f64) -> Complex64,
    x_grid: &[f64],
    tol: f64,
) -> Result<TauberianReport> {
    let lam = MODEL_SCALE;
    let c2 = a2 + I * lam * a1;
    let model = |t: f64| {
        let z = Complex64::new(t, lam);
        a1 / z + c2 / (z * z)
    };
    // Inverse of the model: −i·e^{−λx} for 1/(t + iλ), −x·e^{−λx} for its square.
    let model_inverse = |x: f64| {
        if x < 0.0 {
            Complex64::new(0.0, 0.0)
        } else {
            (-I * a1 - c2 * x) * (-lam * x).exp()
        }
    };
    let remainder = |t: f64| psi(t) - model(t);
    if !remainder(0.0).is_finite() {
        return Err(Error::Domain("ψ must be finite on the real axis".into()));
    }

    let samples = x_grid
        .iter()
        .map(|&x| {
            let (v, _) = remainder_transform(&remainder, x, 0, tol)?;
            Ok((x, model_inverse(x) + v))
        })
        .collect::<Result<Vec<_>>>()?;
    let (r0, cutoff) = remainder_transform(&remainder, 0.0, 0, tol)?;
    let (r1, _) = remainder_transform(&remainder, 0.0, 1, tol)?;
    let max_negative_side = samples
        .iter()
        .filter(|(x, _)| *x < 0.0)
        .map(|(_, f)| f.norm())
        .fold(0.0, f64::max);
    Ok(TauberianReport {
        samples,
        f_zero_plus: -I * a1 + r0,
        f_prime_zero_plus: -a2 + r1,
        expected_f: -I * a1,
        expected_f_prime: -a2,
        max_negative_side,
        cutoff,
    })
}

/// (1/2π)∫(−it)^n R(t)e^{−ixt}dt, n ∈ {0, 1}.
fn remainder_transform(
    remainder: &impl Fn(f64) -> Complex64,
    x: f64,
    n: i32,
    tol: f64,
) -> Result<(Complex64, f64)> {
    let weight = |t: f64| {
        if n == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            -I * t
        }
    };
    let kernel = |t: f64| {
        weight(t) * remainder(t) * Complex64::from_polar(1.0, -x * t)
            + weight(-t) * remainder(-t) * Complex64::from_polar(1.0, x * t)
    };
    let o = QuadOptions::new(1e-13)
        .with_abs_tol(tol)
        .with_max_panels(2000);
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut total = integrate(kernel, 0.0, 1.0, &o)?.value;
    let mut hi = 1.0;
    let mut previous: Option<Complex64> = None;
    let mut last_change = f64::INFINITY;
    while hi < MAX_CUTOFF {
        total += integrate(kernel, hi, 2.0 * hi, &o)?.value;
        hi *= 2.0;
        // Beyond ±T: R(t) ≈ c±·t⁻³ in closed form while x·T is small, otherwise one
        // integration by parts, ∫_T^∞ g e^{−ixt} ≈ g(T)e^{−ixT}/(ix).
        let correction = if x.abs() * hi < 1.0 {
            let cp = remainder(hi) * hi.powi(3);
            let cm = remainder(-hi) * (-hi).powi(3);
            if n == 0 {
                (cp - cm) / (2.0 * hi * hi)
            } else {
                -I * (cp + cm) / hi
            }
        } else {
            let g = |t: f64| weight(t) * remainder(t);
            let ix = I * x;
            (g(hi) * Complex64::from_polar(1.0, -x * hi)
                - g(-hi) * Complex64::from_polar(1.0, x * hi))
                / ix
        };
        let estimate = total + correction;
        let change = previous.map_or(f64::INFINITY, |p| (estimate - p).norm());
        if hi >= 64.0 && change < tol {
            return Ok((estimate / two_pi, hi));
        }
        // ψ − model cancels to O(t⁻³), so rounding noise grows with T; once the
        // changes grow again the previous estimate is the best available.
        if hi >= 1024.0 && change > last_change {
            if let Some(p) = previous {
                return Ok((p / two_pi, hi / 2.0));
            }
        }
        previous = Some(estimate);
        last_change = change;
    }
    Err(Error::NoConvergence {
        estimate: total / two_pi,
        achieved: previous.map_or(f64::INFINITY, |p| (p - total).norm()),
        requested: tol,
    })
}
