//! Complex stress intensity factor K and the higher coefficients A, B.
//!
//! Two independent routes: closed-form moments of the load against r^{−n/2−iε}
//! (r = −x₁), and convolution of the load with the weight-function traces.
//! K carries the dimension length^{−1/2−iε}; K_I = Re K, K_II = Im K.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::loading::{LoadCase, LoadDecomposition, Mode, Part};
use crate::materials::BimaterialParams;
use crate::matrix::Mat2;
use crate::quadrature::{QuadOptions, QuadValue};
use crate::special::real_pow;
use crate::weights::WeightFunctions;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Default relative tolerance for load-dependent integrals.
pub const LOAD_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    ClosedForm,
    /// Closed form with A and B from load derivatives (integrated by parts).
    ClosedFormByParts,
    Quadrature,
    FullFieldOracle,
}

/// Plane-strain tip coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TipCoefficients {
    pub k: Complex64,
    pub a: Complex64,
    /// Not available from the weight-function route.
    pub b: Option<Complex64>,
    pub provenance: Provenance,
    /// |second − conj(first)| over the K and A vectors; zero when built from scalars.
    pub conjugate_residual: f64,
}

impl TipCoefficients {
    pub fn k1(&self) -> f64 {
        self.k.re
    }

    pub fn k2(&self) -> f64 {
        self.k.im
    }

    /// [K, K*].
    pub fn k_vector(&self) -> [Complex64; 2] {
        [self.k, self.k.conj()]
    }

    /// [A, A*].
    pub fn a_vector(&self) -> [Complex64; 2] {
        [self.a, self.a.conj()]
    }
}

/// Antiplane tip coefficients.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntiplaneCoefficients {
    pub k3: f64,
    pub a3: f64,
    pub provenance: Provenance,
}

fn quad_opts(tol: f64) -> QuadOptions {
    QuadOptions::new(tol).with_abs_tol(1e-300)
}

fn require_mode(lc: &LoadCase, mode: Mode) -> Result<()> {
    if lc.mode != mode {
        return Err(Error::Domain(format!(
            "expected a {mode:?} load case, got {:?}",
            lc.mode
        )));
    }
    Ok(())
}

/// p + iq with p = normal (component 2) and q = shear (component 1).
fn complex_load(v: [f64; 2]) -> Complex64 {
    Complex64::new(v[1], v[0])
}

/// ∫ f(r)·part(r) dr over the given part, with r = −x₁ and the profile derivative
/// of the given order taken with respect to x₁.
fn radial<V: QuadValue>(
    part: &Part,
    order: u8,
    f: impl Fn(f64, [f64; 2]) -> V,
    opts: &QuadOptions,
) -> Result<V> {
    part.integrate_x1(order, |x1, v| f(-x1, v), opts)
}

/// ∫ L(r)·r^{w_k} dr for L = ⟨p⟩ + i⟨q⟩ + j·(⟦p⟧ + i⟦q⟧).
pub(crate) fn load_moments<const N: usize>(
    d: &LoadDecomposition,
    jump_weight: f64,
    exponents: [Complex64; N],
    tol: f64,
) -> Result<[Complex64; N]> {
    let opts = quad_opts(tol);
    let kernel = |r: f64, v: [f64; 2]| -> [Complex64; N] {
        let l = complex_load(v);
        exponents.map(|w| l * real_pow(r, w))
    };
    let mean = radial(&d.mean, 0, kernel, &opts)?;
    let jump = radial(&d.jump, 0, kernel, &opts)?;
    Ok(mean.add(jump.scale(jump_weight)))
}

fn kab_exponents(eps: f64) -> [Complex64; 3] {
    [
        Complex64::new(-0.5, -eps),
        Complex64::new(-1.5, -eps),
        Complex64::new(-2.5, -eps),
    ]
}

/// K, A, B from the closed-form load moments.
pub fn sif_closed_form(params: &BimaterialParams, lc: &LoadCase) -> Result<TipCoefficients> {
    sif_closed_form_tol(params, lc, LOAD_TOL)
}

pub fn sif_closed_form_tol(
    params: &BimaterialParams,
    lc: &LoadCase,
    tol: f64,
) -> Result<TipCoefficients> {
    require_mode(lc, Mode::PlaneStrain)?;
    let d = lc.decompose();
    let m = load_moments(&d, 0.5 * params.alpha, kab_exponents(params.epsilon), tol)?;
    let c = (2.0 / PI).sqrt() * params.cosh_pi_eps();
    Ok(TipCoefficients {
        k: -c * m[0],
        a: c * m[1],
        b: Some(-c * m[2]),
        provenance: Provenance::ClosedForm,
        conjugate_residual: 0.0,
    })
}

/// A and B with the smooth part of the load entering through its derivatives.
///
/// Point atoms keep the direct moments. Fails if a smooth traction lacks
/// derivative handles.
pub fn sif_closed_form_by_parts(
    params: &BimaterialParams,
    lc: &LoadCase,
    tol: f64,
) -> Result<TipCoefficients> {
    require_mode(lc, Mode::PlaneStrain)?;
    let d = lc.decompose();
    let atoms = LoadDecomposition {
        mean: d.mean.atoms_only(),
        jump: d.jump.atoms_only(),
    };
    let smooth = LoadDecomposition {
        mean: d.mean.smooth_only(),
        jump: d.jump.smooth_only(),
    };
    let eps = params.epsilon;
    let jw = 0.5 * params.alpha;
    let c = (2.0 / PI).sqrt() * params.cosh_pi_eps();
    let direct = load_moments(&atoms, jw, kab_exponents(eps), tol)?;
    let k_smooth = load_moments(&smooth, jw, [Complex64::new(-0.5, -eps)], tol)?[0];

    // d/dr = −d/dx₁, d²/dr² = d²/dx₁².
    let opts = quad_opts(tol);
    let w = Complex64::new(-0.5, -eps);
    let deriv = |order: u8| -> Result<Complex64> {
        let kernel = |r: f64, v: [f64; 2]| complex_load(v) * real_pow(r, w);
        let mean = radial(&smooth.mean, order, kernel, &opts)?;
        let jump = radial(&smooth.jump, order, kernel, &opts)?;
        Ok(mean + jump * jw)
    };
    let first = -deriv(1)?;
    let second = deriv(2)?;
    let h = Complex64::new(0.5, eps);
    let h3 = Complex64::new(1.5, eps);
    Ok(TipCoefficients {
        k: -c * (direct[0] + k_smooth),
        a: c * direct[1] + c / h * first,
        b: Some(-c * direct[2] - c / (h * h3) * second),
        provenance: Provenance::ClosedFormByParts,
        conjugate_residual: 0.0,
    })
}

/// Contributions of ⟨p⟩ and ⟦p⟧ separately.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SplitCoefficients {
    pub symmetric: TipCoefficients,
    pub skew: TipCoefficients,
    pub total: TipCoefficients,
}

/// Which form of the A convolution to use for smooth tractions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AForm {
    /// Load derivatives against the weight traces (needs derivative handles).
    LoadDerivative,
    /// Weight-trace derivatives against the load; always used for point atoms.
    WeightDerivative,
}

/// K and A from the weight-function convolution.
pub fn sif_quadrature(
    params: &BimaterialParams,
    lc: &LoadCase,
    tol: f64,
) -> Result<TipCoefficients> {
    Ok(sif_quadrature_split(params, lc, tol, None)?.total)
}

/// As [`sif_quadrature`], reporting the symmetric and skew contributions.
///
/// `a_form = None` picks the load-derivative form whenever every smooth traction
/// carries derivative handles.
pub fn sif_quadrature_split(
    params: &BimaterialParams,
    lc: &LoadCase,
    tol: f64,
    a_form: Option<AForm>,
) -> Result<SplitCoefficients> {
    require_mode(lc, Mode::PlaneStrain)?;
    let wf = WeightFunctions::new(params);
    let d = lc.decompose();
    let osc = wf.osc();
    let m1_inv = osc.m_inverse(1);
    let m2_inv = osc.m_inverse(2);
    let opts = quad_opts(tol);

    let use_load_derivative = match a_form {
        Some(AForm::LoadDerivative) => true,
        Some(AForm::WeightDerivative) => false,
        None => d.mean.smooth_has_derivatives() && d.jump.smooth_has_derivatives(),
    };

    // ∫ Wᵀ(−x₁)·R·p(x₁) dx₁ with R = diag(−1, 1); −x₁ ≥ δ > 0 on the support.
    let convolve =
        |part: &Part, weight_order: u8, load_order: u8, scale: f64| -> Result<[Complex64; 2]> {
            let v: [Complex64; 2] = part.integrate_x1(
                load_order,
                |x1, val| {
                    let w = wf.jump_trace_positive(weight_order, -x1).transpose();
                    w.apply([Complex64::new(-val[0], 0.0), Complex64::new(val[1], 0.0)])
                },
                &opts,
            )?;
            Ok(v.scale(scale))
        };

    let half_alpha = 0.5 * params.alpha;
    let coefficients = |part: &Part, scale: f64| -> Result<TipCoefficients> {
        let v = convolve(part, 0, 0, scale)?;
        let kv = m1_inv.apply(v).map(|z| -I * z);
        let av_raw = if use_load_derivative {
            convolve(&part.atoms_only(), 1, 0, scale)?.add(convolve(
                &part.smooth_only(),
                0,
                1,
                scale,
            )?)
        } else {
            convolve(part, 1, 0, scale)?
        };
        let av = m2_inv.apply(av_raw);
        check_finite(&kv, &av)?;
        Ok(TipCoefficients {
            k: kv[0],
            a: av[0],
            b: None,
            provenance: Provenance::Quadrature,
            conjugate_residual: (kv[1] - kv[0].conj())
                .norm()
                .max((av[1] - av[0].conj()).norm()),
        })
    };

    let symmetric = coefficients(&d.mean, 1.0)?;
    // ⟨U⟩(z) = (α/2)⟦U⟧(z) for z > 0.
    let skew = coefficients(&d.jump, half_alpha)?;
    let total = TipCoefficients {
        k: symmetric.k + skew.k,
        a: symmetric.a + skew.a,
        b: None,
        provenance: Provenance::Quadrature,
        conjugate_residual: symmetric.conjugate_residual + skew.conjugate_residual,
    };
    Ok(SplitCoefficients {
        symmetric,
        skew,
        total,
    })
}

fn check_finite(k: &[Complex64; 2], a: &[Complex64; 2]) -> Result<()> {
    if k.iter().chain(a).all(|z| z.is_finite()) {
        Ok(())
    } else {
        Err(Error::Domain(
            "weight convolution produced a non-finite value; load touches the tip".into(),
        ))
    }
}

/// The symmetric and skew contributions (K^S, K^A) for three-point loading.
pub fn three_point_reference(
    params: &BimaterialParams,
    force: f64,
    a: f64,
    b: f64,
) -> Result<(Complex64, Complex64)> {
    three_point_order(params, force, a, b, 0)
}

/// The A analogue (A^S, A^A) of [`three_point_reference`].
pub fn three_point_reference_a(
    params: &BimaterialParams,
    force: f64,
    a: f64,
    b: f64,
) -> Result<(Complex64, Complex64)> {
    three_point_order(params, force, a, b, 1)
}

fn three_point_order(
    params: &BimaterialParams,
    force: f64,
    a: f64,
    b: f64,
    order: u8,
) -> Result<(Complex64, Complex64)> {
    if !(a > 0.0 && b >= 0.0 && b < a) {
        return Err(Error::Domain(format!(
            "three-point loading needs a > 0 and 0 <= b < a, got a = {a}, b = {b}"
        )));
    }
    let w = Complex64::new(-0.5 - f64::from(order), -params.epsilon);
    let ratio = b / a;
    let x = 0.25 * (real_pow(1.0 + ratio, w) + real_pow(1.0 - ratio, w));
    // K carries a leading minus and A a plus in front of the load moment; the
    // moment of ⟨p⟩ is −F·a^w(1/2 + X).
    let sign = if order == 0 { 1.0 } else { -1.0 };
    let c = sign * force * (2.0 / PI).sqrt() * params.cosh_pi_eps() * real_pow(a, w);
    let half = Complex64::new(0.5, 0.0);
    Ok((c * (half + x), c * params.alpha * (half - x)))
}

/// K_III and A_III from the closed-form load moments.
///
/// Smooth tractions with derivative handles use the derivative form for A_III;
/// point atoms and handle-free tractions use the r^{−3/2} moment.
pub fn mode3_sif(params: &BimaterialParams, lc: &LoadCase) -> Result<AntiplaneCoefficients> {
    mode3_sif_tol(params, lc, LOAD_TOL)
}

pub fn mode3_sif_tol(
    params: &BimaterialParams,
    lc: &LoadCase,
    tol: f64,
) -> Result<AntiplaneCoefficients> {
    require_mode(lc, Mode::AntiPlane)?;
    let d = lc.decompose();
    let opts = quad_opts(tol);
    let jw = 0.5 * params.eta;
    let c = (2.0 / PI).sqrt();
    let moments = |part: &Part| -> Result<[f64; 2]> {
        radial(
            part,
            0,
            |r, v| [v[0] / r.sqrt(), v[0] / (r * r.sqrt())],
            &opts,
        )
    };
    let m = moments(&d.mean)?.add(moments(&d.jump)?.scale(jw));
    let k3 = -c * m[0];

    let smooth_has_handles = d.mean.smooth_has_derivatives() && d.jump.smooth_has_derivatives();
    let a3 = if smooth_has_handles && (!d.mean.smooth.is_empty() || !d.jump.smooth.is_empty()) {
        let atom_m = moments(&d.mean.atoms_only())?.add(moments(&d.jump.atoms_only())?.scale(jw));
        let deriv = |part: &Part| -> Result<f64> { radial(part, 1, |r, v| v[0] / r.sqrt(), &opts) };
        let dl = deriv(&d.mean.smooth_only())? + jw * deriv(&d.jump.smooth_only())?;
        c * atom_m[1] - 2.0 * c * dl
    } else {
        c * m[1]
    };
    Ok(AntiplaneCoefficients {
        k3,
        a3,
        provenance: Provenance::ClosedForm,
    })
}

/// K_III and A_III from the antiplane weight functions.
pub fn mode3_sif_weights(
    params: &BimaterialParams,
    lc: &LoadCase,
    tol: f64,
) -> Result<AntiplaneCoefficients> {
    require_mode(lc, Mode::AntiPlane)?;
    let wf = WeightFunctions::new(params);
    let d = lc.decompose();
    let opts = quad_opts(tol);
    let conv = |part: &Part, n: u8| -> Result<Complex64> {
        part.integrate_x1(
            0,
            |x1, v| {
                // −x₁ ≥ δ > 0, where the trace is always defined.
                let (jump, _, _) = wf.mode3_trace_derivative(n, -x1).unwrap_or_default();
                jump * v[0]
            },
            &opts,
        )
    };
    let half_eta = 0.5 * params.eta;
    let one_plus_i = Complex64::new(1.0, 1.0);
    let k = -one_plus_i * (conv(&d.mean, 0)? + half_eta * conv(&d.jump, 0)?);
    // ∫U(−x₁)p′(x₁)dx₁ = ∫U′(−x₁)p(x₁)dx₁ with U′ the derivative in its argument.
    let a = -2.0 * one_plus_i * (conv(&d.mean, 1)? + half_eta * conv(&d.jump, 1)?);
    Ok(AntiplaneCoefficients {
        k3: k.re,
        a3: a.re,
        provenance: Provenance::Quadrature,
    })
}

/// −i·M_j⁻¹·M_{j+1}; equals diag(j − 1/2 + iε, j − 1/2 − iε).
pub fn advance_matrix(params: &BimaterialParams, j: usize) -> Mat2 {
    let osc = WeightFunctions::new(params);
    let osc = osc.osc();
    (osc.m_inverse(j) * osc.m[j]).scale(-I)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loading::{Face, FaceTraction, SmoothTraction};

    fn reference() -> BimaterialParams {
        BimaterialParams::from_eta(0.5, 0.2, 0.3).unwrap()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn hutchinson_closed_form() {
        let p = reference();
        let (pn, qs, a) = (1.3, -0.4, 1.7);
        let lc = LoadCase::hutchinson_pair(pn, qs, a).unwrap();
        let t = sif_closed_form(&p, &lc).unwrap();
        let c = (2.0 / PI).sqrt() * p.cosh_pi_eps();
        let expected = c * Complex64::new(pn, qs) * real_pow(a, Complex64::new(-0.5, -p.epsilon));
        assert!(rel(t.k, expected) < 1e-14);
    }

    #[test]
    fn reference_value() {
        let p = reference();
        let lc = LoadCase::hutchinson_pair(1.0, 0.0, 1.0).unwrap();
        let t = sif_closed_form(&p, &lc).unwrap();
        assert!((t.k.re - 0.819_038_536_439_171).abs() < 1e-12 && t.k.im.abs() < 1e-15);
    }

    #[test]
    fn quadrature_matches_closed_form() {
        let p = reference();
        let lc = LoadCase::three_point_case(1.0, 1.0, 0.5).unwrap();
        let q = sif_quadrature(&p, &lc, 1e-10).unwrap();
        let c = sif_closed_form(&p, &lc).unwrap();
        assert!(rel(q.k, c.k) < 1e-12);
        assert!(rel(q.a, c.a) < 1e-12);
        assert!(q.conjugate_residual < 1e-12);
    }

    #[test]
    fn three_point_split_matches_reference() {
        let p = BimaterialParams::from_eta(-0.5, 0.2, 0.3).unwrap();
        let lc = LoadCase::three_point_case(2.0, 1.5, 0.6).unwrap();
        let s = sif_quadrature_split(&p, &lc, 1e-10, None).unwrap();
        let (ks, ka) = three_point_reference(&p, 2.0, 1.5, 0.6).unwrap();
        let (a_s, a_a) = three_point_reference_a(&p, 2.0, 1.5, 0.6).unwrap();
        assert!(rel(s.symmetric.k, ks) < 1e-12 && rel(s.skew.k, ka) < 1e-12);
        assert!(rel(s.symmetric.a, a_s) < 1e-12 && rel(s.skew.a, a_a) < 1e-12);
    }

    #[test]
    fn identical_materials_ignore_skew_loads() {
        let p = BimaterialParams::from_constants(1.0, 0.3, 1.0, 0.3).unwrap();
        let lc = LoadCase::three_point_case(1.0, 1.0, 0.4).unwrap();
        let s = sif_quadrature_split(&p, &lc, 1e-10, None).unwrap();
        assert_eq!(s.skew.k, Complex64::new(0.0, 0.0));
        // Same-direction forces on both faces: a purely skew load.
        let lc = LoadCase::unbalanced(
            Mode::PlaneStrain,
            vec![
                FaceTraction::point(Face::Upper, -1.0, [0.3, -1.0]),
                FaceTraction::point(Face::Lower, -1.0, [-0.3, 1.0]),
            ],
            1.0,
        )
        .unwrap();
        let t = sif_closed_form(&p, &lc).unwrap();
        assert_eq!(t.k, Complex64::new(0.0, 0.0));
        assert_eq!(t.a, Complex64::new(0.0, 0.0));
        assert_eq!(t.b, Some(Complex64::new(0.0, 0.0)));
    }

    fn smooth_case() -> LoadCase {
        // Different bumps on the two faces, so both ⟨p⟩ and ⟦p⟧ are present.
        let up = SmoothTraction::bump(-3.0, -1.0, [0.4, -1.0]).unwrap();
        let lo1 = SmoothTraction::bump(-2.5, -1.5, [-0.2, 0.9]).unwrap();
        let lo2 = SmoothTraction::bump(-3.5, -0.5, [0.1, -0.3]).unwrap();
        LoadCase::unbalanced(
            Mode::PlaneStrain,
            vec![
                FaceTraction::smooth(Face::Upper, up),
                FaceTraction::smooth(Face::Lower, lo1),
                FaceTraction::smooth(Face::Lower, lo2),
            ],
            0.5,
        )
        .unwrap()
    }

    #[test]
    fn smooth_paths_agree() {
        let p = reference();
        let lc = smooth_case();
        let c = sif_closed_form_tol(&p, &lc, 1e-12).unwrap();
        let ibp = sif_closed_form_by_parts(&p, &lc, 1e-12).unwrap();
        assert!(rel(ibp.k, c.k) < 1e-10);
        assert!(rel(ibp.a, c.a) < 1e-8);
        assert!(rel(ibp.b.unwrap(), c.b.unwrap()) < 1e-8);
        let q1 = sif_quadrature_split(&p, &lc, 1e-12, Some(AForm::LoadDerivative))
            .unwrap()
            .total;
        let q2 = sif_quadrature_split(&p, &lc, 1e-12, Some(AForm::WeightDerivative))
            .unwrap()
            .total;
        assert!(rel(q1.k, c.k) < 1e-9);
        assert!(rel(q1.a, q2.a) < 1e-9);
        assert!(rel(q2.a, c.a) < 1e-9);
    }

    #[test]
    fn mode3_point_loads() {
        let p = reference();
        let (f, a) = (1.7, 2.0);
        let mean = LoadCase::new(
            Mode::AntiPlane,
            vec![
                FaceTraction::point(Face::Upper, -a, [-f, 0.0]),
                FaceTraction::point(Face::Lower, -a, [-f, 0.0]),
            ],
            a,
        )
        .unwrap();
        let c = (2.0 / PI).sqrt();
        let t = mode3_sif(&p, &mean).unwrap();
        assert!((t.k3 - f * c / a.sqrt()).abs() < 1e-14);
        assert!((t.a3 + f * c * a.powf(-1.5)).abs() < 1e-14);
        let w = mode3_sif_weights(&p, &mean, 1e-12).unwrap();
        assert!((w.k3 - t.k3).abs() < 1e-14 && (w.a3 - t.a3).abs() < 1e-14);

        let skew = LoadCase::unbalanced(
            Mode::AntiPlane,
            vec![FaceTraction::point(Face::Upper, -a, [-f, 0.0])],
            a,
        )
        .unwrap();
        // Upper-face only: ⟨p₃⟩ = −F/2, ⟦p₃⟧ = −F.
        let t = mode3_sif(&p, &skew).unwrap();
        assert!((t.k3 - 0.5 * (1.0 + p.eta) * f * c / a.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn advance_matrices_are_diagonal() {
        let p = reference();
        let m = advance_matrix(&p, 1);
        let e = p.epsilon;
        assert!(
            (m - Mat2::diag(Complex64::new(0.5, e), Complex64::new(0.5, -e))).max_abs() < 1e-13
        );
        let m = advance_matrix(&p, 2);
        assert!(
            (m - Mat2::diag(Complex64::new(1.5, e), Complex64::new(1.5, -e))).max_abs() < 1e-13
        );
    }
}
