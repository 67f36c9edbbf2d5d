//! Mellin-transform solution of the loaded interfacial crack, used as an
//! independent oracle for the tip coefficients and near-tip fields.
//!
//! Polar coordinates centred at the tip: θ ∈ (0, π] is the upper material,
//! θ ∈ [−π, 0) the lower one, and θ = ±π are the crack faces. Loads enter through
//! p(r) = p₂(−r), q(r) = p₁(−r) and their transforms f̃(s) = ∫ f(r) r^s dr.
//! Stress tensors are polar [[σ_rr, σ_rθ], [σ_rθ, σ_θθ]]; displacements are
//! [u_r, u_θ].

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::loading::{LoadCase, LoadDecomposition, Mode, Part};
use crate::materials::BimaterialParams;
use crate::quadrature::{integrate, QuadOptions, QuadValue};
use crate::special::real_pow;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Below this |d*| the paired poles s = −1/2 − g ± iε nearly coincide and the
/// residue products lose accuracy; a circular contour is used instead.
const CONTOUR_SWITCH: f64 = 1e-4;
const CONTOUR_RADIUS: f64 = 0.25;
const CONTOUR_NODES: usize = 64;

/// Mellin transforms ⟨p̃⟩, ⟦p̃⟧, ⟨q̃⟩, ⟦q̃⟧ at one point s.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LoadTransforms {
    pub mean_p: Complex64,
    pub jump_p: Complex64,
    pub mean_q: Complex64,
    pub jump_q: Complex64,
}

impl LoadTransforms {
    fn from_array(v: [Complex64; 4]) -> Self {
        Self {
            mean_p: v[0],
            jump_p: v[1],
            mean_q: v[2],
            jump_q: v[3],
        }
    }
}

fn opts(tol: f64) -> QuadOptions {
    QuadOptions::new(tol).with_abs_tol(1e-300)
}

fn part_transform(part: &Part, s: Complex64, o: &QuadOptions) -> Result<[Complex64; 2]> {
    part.integrate_x1(
        0,
        |x1, v| {
            let k = real_pow(-x1, s);
            [k * v[1], k * v[0]]
        },
        o,
    )
}

/// Transforms of the decomposed load at s; point atoms by substitution.
pub fn load_transforms(d: &LoadDecomposition, s: Complex64, tol: f64) -> Result<LoadTransforms> {
    let o = opts(tol);
    let m = part_transform(&d.mean, s, &o)?;
    let j = part_transform(&d.jump, s, &o)?;
    Ok(LoadTransforms::from_array([m[0], j[0], m[1], j[1]]))
}

/// δ(s) = cos²πs + d*² sin²πs.
pub fn delta(s: Complex64, d_star: f64) -> Complex64 {
    let (c, sn) = ((PI * s).cos(), (PI * s).sin());
    c * c + d_star * d_star * sn * sn
}

/// δ′(s) = 2π(d*² − 1) sin πs cos πs.
pub fn delta_prime(s: Complex64, d_star: f64) -> Complex64 {
    2.0 * PI * (d_star * d_star - 1.0) * (PI * s).sin() * (PI * s).cos()
}

/// Zeros of δ: s_n^± = (1 − 2n)/2 ± iε.
pub fn delta_zero(n: i32, upper: bool, params: &BimaterialParams) -> Complex64 {
    let e = if upper {
        params.epsilon
    } else {
        -params.epsilon
    };
    Complex64::new(0.5 - f64::from(n), e)
}

/// (cos z, sin z)·e^{−|Im z|}; finite for any z.
fn scaled_cos_sin(z: Complex64) -> (Complex64, Complex64) {
    let y = z.im.abs();
    let e_pos = Complex64::from_polar((-z.im - y).exp(), z.re); // e^{iz}·e^{−|y|}
    let e_neg = Complex64::from_polar((z.im - y).exp(), -z.re); // e^{−iz}·e^{−|y|}
    (0.5 * (e_pos + e_neg), -0.5 * I * (e_pos - e_neg))
}

/// C₁..C₄ for one half-plane (`sign` = +1 upper, −1 lower). With `scaled` the
/// common factor 1/δ(s) is dropped, giving the numerators used at zeros of δ.
fn coefficients(
    s: Complex64,
    params: &BimaterialParams,
    sign: f64,
    lt: &LoadTransforms,
    scaled: bool,
) -> [Complex64; 4] {
    let (c, sn) = ((PI * s).cos(), (PI * s).sin());
    let dd = if scaled {
        Complex64::new(1.0, 0.0)
    } else {
        c * c + params.d_star * params.d_star * sn * sn
    };
    coefficients_from_trig(s, params, sign, lt, c, sn, dd)
}

/// C₁..C₄·e^{π|Im s|}, safe far up the contour.
fn coefficients_normalised(
    s: Complex64,
    params: &BimaterialParams,
    sign: f64,
    lt: &LoadTransforms,
) -> [Complex64; 4] {
    let (c, sn) = scaled_cos_sin(PI * s);
    let dd = c * c + params.d_star * params.d_star * sn * sn;
    coefficients_from_trig(s, params, sign, lt, c, sn, dd)
}

// Every term carries one trig factor over δ, so a common rescaling of (c, sn)
// rescales C by its inverse.
fn coefficients_from_trig(
    s: Complex64,
    params: &BimaterialParams,
    sign: f64,
    lt: &LoadTransforms,
    c: Complex64,
    sn: Complex64,
    dd: Complex64,
) -> [Complex64; 4] {
    let (ds, al) = (params.d_star, params.alpha);
    let cs = c * c / sn;
    let (mp, jp, mq, jq) = (lt.mean_p, 0.5 * lt.jump_p, lt.mean_q, 0.5 * lt.jump_q);
    let k = 1.0 - sign * ds;
    let h = 1.0 - sign * al;
    let up = (s - 1.0) / (2.0 * dd);
    let dn = -1.0 / (2.0 * dd);

    let c1 = up
        * (mp * k * c + jp * k * al * c - mq * k * ds * sn + jq * ((ds - al) * ds * sn + h * cs));
    let c3 = up
        * (-mp * k * ds * sn + jp * ((ds - al) * ds * sn + h * cs) - mq * k * c - jq * k * al * c);
    let e2 = 1.0 + s + sign * (1.0 - s) * ds;
    let c2 = dn
        * (mp * e2 * c
            + jp * e2 * al * c
            + mq * (-(1.0 + s) - sign * (1.0 - s) * ds) * ds * sn
            + jq * (-(al * (1.0 + s) + ds * (1.0 - s)) * ds * sn - h * (1.0 - s) * cs));
    let e4 = 1.0 - s + sign * (1.0 + s) * ds;
    let c4 = dn
        * (mp * e4 * ds * sn
            + jp * ((al * (1.0 - s) + ds * (1.0 + s)) * ds * sn + h * (1.0 + s) * cs)
            + mq * e4 * c
            + jq * e4 * al * c);
    [c1, c2, c3, c4]
}

/// Transformed fields [σ̃_θθ, σ̃_rr, σ̃_rθ, ũ_r, ũ_θ] at angle θ from C₁..C₄.
fn polar_transform(
    cf: &[Complex64; 4],
    s: Complex64,
    theta: f64,
    mu: f64,
    nu: f64,
) -> [Complex64; 5] {
    let a = (s + 1.0) * theta;
    let b = (s - 1.0) * theta;
    polar_from_trig(cf, s, mu, nu, (a.cos(), a.sin()), (b.cos(), b.sin()))
}

/// As [`polar_transform`] times e^{−|θ Im s|}.
fn polar_transform_normalised(
    cf: &[Complex64; 4],
    s: Complex64,
    theta: f64,
    mu: f64,
    nu: f64,
) -> [Complex64; 5] {
    let a = scaled_cos_sin((s + 1.0) * theta);
    let b = scaled_cos_sin((s - 1.0) * theta);
    polar_from_trig(cf, s, mu, nu, a, b)
}

fn polar_from_trig(
    cf: &[Complex64; 4],
    s: Complex64,
    mu: f64,
    nu: f64,
    (ca, sa): (Complex64, Complex64),
    (cb, sb): (Complex64, Complex64),
) -> [Complex64; 5] {
    let [c1, c2, c3, c4] = *cf;
    let r3 = (s + 3.0) / (s - 1.0);
    let r1 = (s + 1.0) / (s - 1.0);
    let stt = c1 * ca + c2 * cb + c3 * sa + c4 * sb;
    let srr = -r3 * (c1 * ca + c3 * sa) - c2 * cb - c4 * sb;
    let srt = -r1 * c1 * sa - c2 * sb + r1 * c3 * ca + c4 * cb;
    let m = 4.0 * (1.0 - nu) / (s - 1.0);
    let ur = (stt + m * (c1 * ca + c3 * sa)) / (2.0 * s * mu);
    let ut = -(-r1 * c1 * sa - c2 * sb + r1 * c3 * ca + c4 * cb + m * (c1 * sa - c3 * ca))
        / (2.0 * s * mu);
    [stt, srr, srt, ur, ut]
}

fn side(theta: f64) -> f64 {
    if theta.is_sign_negative() {
        -1.0
    } else {
        1.0
    }
}

fn material(params: &BimaterialParams, sign: f64) -> (f64, f64) {
    let h = params.half_plane(sign > 0.0);
    (h.mu, h.nu)
}

/// Mellin-side solution at one point s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MellinState {
    pub s: Complex64,
    pub delta: Complex64,
    /// C₁..C₄ in the upper material.
    pub c_upper: [Complex64; 4],
    /// C₁..C₄ in the lower material.
    pub c_lower: [Complex64; 4],
    pub loads: LoadTransforms,
}

impl MellinState {
    /// [σ̃_θθ, σ̃_rr, σ̃_rθ, ũ_r, ũ_θ] at θ.
    pub fn fields(&self, theta: f64, params: &BimaterialParams) -> [Complex64; 5] {
        let sign = side(theta);
        let (mu, nu) = material(params, sign);
        let c = if sign > 0.0 {
            &self.c_upper
        } else {
            &self.c_lower
        };
        polar_transform(c, self.s, theta, mu, nu)
    }
}

fn check_regular(s: Complex64, params: &BimaterialParams) -> Result<()> {
    if !s.is_finite() {
        return Err(Error::Domain(format!("non-finite Mellin variable {s}")));
    }
    if delta(s, params.d_star).norm() < 1e-14 {
        return Err(Error::Pole { what: "1/δ(s)", s });
    }
    if (PI * s).sin().norm() < 1e-14 {
        return Err(Error::Pole {
            what: "1/sin(πs)",
            s,
        });
    }
    if (s - 1.0).norm() < 1e-14 {
        return Err(Error::Pole {
            what: "1/(s − 1)",
            s,
        });
    }
    Ok(())
}

pub fn mellin_state(s: Complex64, params: &BimaterialParams, lc: &LoadCase) -> Result<MellinState> {
    mellin_state_tol(s, params, lc, 1e-10)
}

pub fn mellin_state_tol(
    s: Complex64,
    params: &BimaterialParams,
    lc: &LoadCase,
    tol: f64,
) -> Result<MellinState> {
    require_plane_strain(lc)?;
    check_regular(s, params)?;
    let loads = load_transforms(&lc.decompose(), s, tol)?;
    Ok(MellinState {
        s,
        delta: delta(s, params.d_star),
        c_upper: coefficients(s, params, 1.0, &loads, false),
        c_lower: coefficients(s, params, -1.0, &loads, false),
        loads,
    })
}

fn require_plane_strain(lc: &LoadCase) -> Result<()> {
    if lc.mode != Mode::PlaneStrain {
        return Err(Error::Domain(
            "the Mellin solution is plane strain only".into(),
        ));
    }
    Ok(())
}

/// Real load integrals entering the integer-order terms.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TipIntegrals {
    /// ∫⟨p⟩ dr and ∫⟨q⟩ dr.
    pub mean_p: f64,
    pub mean_q: f64,
    /// ∫⟦p⟧/r dr and ∫⟦q⟧/r dr.
    pub jump_p_r1: f64,
    pub jump_q_r1: f64,
    /// ∫⟦p⟧/r² dr and ∫⟦q⟧/r² dr.
    pub jump_p_r2: f64,
    pub jump_q_r2: f64,
    /// ∫⟦p⟧ log r dr and ∫⟦q⟧ log r dr, r in user length units.
    pub jump_p_log: f64,
    pub jump_q_log: f64,
}

#[derive(Debug, Clone)]
enum PoleGroup {
    /// Separate residues at s_g^+ and s_g^−.
    Residues([(Complex64, LoadTransforms); 2]),
    /// Trapezoidal rule on a circle around −1/2 − g enclosing both poles.
    Contour {
        center: Complex64,
        nodes: Vec<(Complex64, LoadTransforms)>,
    },
}

/// Near-tip expansion coefficients derived from the Mellin solution.
#[derive(Debug, Clone)]
pub struct TipExpansion {
    /// Residue-derived coefficients of σ_θθ + iσ_rθ on θ = 0.
    pub k: Complex64,
    pub a: Complex64,
    pub b: Complex64,
    /// T-stress on the upper and lower side of the interface.
    pub t_upper: f64,
    pub t_lower: f64,
    /// Tip translation evaluated with the upper and lower material constants.
    pub w0_upper: [f64; 2],
    pub w0_lower: [f64; 2],
    pub integrals: TipIntegrals,
    params: BimaterialParams,
    groups: Vec<PoleGroup>,
}

/// Values of a truncated or numerically inverted field at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    /// [[σ_rr, σ_rθ], [σ_rθ, σ_θθ]].
    pub stress: [[f64; 2]; 2],
    /// [u_r, u_θ].
    pub displacement: [f64; 2],
}

impl FieldSample {
    fn zero() -> Self {
        Self {
            stress: [[0.0; 2]; 2],
            displacement: [0.0; 2],
        }
    }

    fn from_parts(v: [Complex64; 5]) -> Self {
        Self {
            stress: [[v[1].re, v[2].re], [v[2].re, v[0].re]],
            displacement: [v[3].re, v[4].re],
        }
    }

    fn add(&mut self, o: &FieldSample) {
        for i in 0..2 {
            for j in 0..2 {
                self.stress[i][j] += o.stress[i][j];
            }
            self.displacement[i] += o.displacement[i];
        }
    }

    pub fn stress_norm(&self) -> f64 {
        self.stress
            .iter()
            .flatten()
            .map(|v| v * v)
            .sum::<f64>()
            .sqrt()
    }

    pub fn displacement_norm(&self) -> f64 {
        self.displacement.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn sigma_tt(&self) -> f64 {
        self.stress[1][1]
    }

    pub fn sigma_rt(&self) -> f64 {
        self.stress[0][1]
    }

    pub fn sigma_rr(&self) -> f64 {
        self.stress[0][0]
    }
}

// Q(θ)·M·Q(θ)ᵀ with Q = [[cos, sin], [−sin, cos]].
fn rotate_tensor(theta: f64, m: [[f64; 2]; 2]) -> [[f64; 2]; 2] {
    let (c, s) = (theta.cos(), theta.sin());
    let q = [[c, s], [-s, c]];
    let mut out = [[0.0; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[i][j] += q[i][k] * m[k][l] * q[j][l];
                }
            }
        }
    }
    out
}

fn rotate_vector(theta: f64, w: [f64; 2]) -> [f64; 2] {
    let (c, s) = (theta.cos(), theta.sin());
    [c * w[0] + s * w[1], -s * w[0] + c * w[1]]
}

impl TipExpansion {
    pub fn params(&self) -> &BimaterialParams {
        &self.params
    }

    /// T-stress on the side of θ.
    pub fn t_stress(&self, theta: f64) -> f64 {
        if side(theta) > 0.0 {
            self.t_upper
        } else {
            self.t_lower
        }
    }

    /// Residue of σ̃ at s = −1 (the constant term).
    pub fn t_tensor(&self, theta: f64) -> [[f64; 2]; 2] {
        rotate_tensor(theta, [[self.t_stress(theta), 0.0], [0.0, 0.0]])
    }

    /// Residue of σ̃ at s = −2; the field term is S(θ)·r.
    pub fn s_tensor(&self, theta: f64) -> [[f64; 2]; 2] {
        let g = self.integrals;
        let k = (1.0 - side(theta) * self.params.alpha) / PI;
        let (c, s) = (theta.cos(), theta.sin());
        rotate_tensor(
            theta,
            [
                [k * (s * g.jump_p_r2 - c * g.jump_q_r2), k * s * g.jump_q_r2],
                [k * s * g.jump_q_r2, 0.0],
            ],
        )
    }

    /// Cartesian tip translation w₀ on the side of θ.
    pub fn w0(&self, theta: f64) -> [f64; 2] {
        if side(theta) > 0.0 {
            self.w0_upper
        } else {
            self.w0_lower
        }
    }

    /// w₁(r, θ), homogeneous of degree 1 in r.
    pub fn w1(&self, r: f64, theta: f64) -> [f64; 2] {
        let sign = side(theta);
        let (mu, nu) = material(&self.params, sign);
        let g = self.integrals;
        let (x1, x2) = (r * theta.cos(), r * theta.sin());
        let k = (1.0 - sign * self.params.alpha) / (2.0 * PI * mu);
        [
            k * (1.0 - nu) * (x1 * g.jump_q_r1 - x2 * g.jump_p_r1),
            k * ((1.0 - nu) * x1 * g.jump_p_r1 - nu * x2 * g.jump_q_r1),
        ]
    }

    /// w₂(r, θ), homogeneous of degree 2 in r.
    pub fn w2(&self, r: f64, theta: f64) -> [f64; 2] {
        let sign = side(theta);
        let (mu, nu) = material(&self.params, sign);
        let g = self.integrals;
        let (x1, x2) = (r * theta.cos(), r * theta.sin());
        let rr = x1 * x1 + x2 * x2;
        let dd = x1 * x1 - x2 * x2;
        let k = (1.0 - sign * self.params.alpha) / (8.0 * PI * mu);
        [
            k * (4.0 * (1.0 - nu) * x1 * x2 * g.jump_p_r2
                + (rr - (3.0 - 2.0 * nu) * dd) * g.jump_q_r2),
            k * (-(rr + (1.0 - 2.0 * nu) * dd) * g.jump_p_r2 + 4.0 * nu * x1 * x2 * g.jump_q_r2),
        ]
    }

    /// Contribution of the oscillatory pole pair −1/2 − g ± iε, g = 0, 1, 2.
    fn group_field(&self, g: usize, r: f64, theta: f64) -> FieldSample {
        let sign = side(theta);
        let (mu, nu) = material(&self.params, sign);
        let p = &self.params;
        let weight = |s: Complex64, v: [Complex64; 5], factor: Complex64| -> [Complex64; 5] {
            let rs = real_pow(r, -s);
            let rs1 = rs / r;
            [
                v[0] * rs1 * factor,
                v[1] * rs1 * factor,
                v[2] * rs1 * factor,
                v[3] * rs * factor,
                v[4] * rs * factor,
            ]
        };
        let mut total = [Complex64::new(0.0, 0.0); 5];
        match &self.groups[g] {
            PoleGroup::Residues(poles) => {
                for (s, lt) in poles {
                    let c = coefficients(*s, p, sign, lt, true);
                    let v = polar_transform(&c, *s, theta, mu, nu);
                    total = total.add(weight(*s, v, 1.0 / delta_prime(*s, p.d_star)));
                }
            }
            PoleGroup::Contour { center, nodes } => {
                let n = nodes.len() as f64;
                for (s, lt) in nodes {
                    let c = coefficients(*s, p, sign, lt, false);
                    let v = polar_transform(&c, *s, theta, mu, nu);
                    total = total.add(weight(*s, v, (*s - center) / n));
                }
            }
        }
        FieldSample::from_parts(total)
    }

    /// Truncated near-tip expansion.
    ///
    /// `n_terms` counts stress terms in the order r^{−1/2}, r⁰, r^{1/2}, r¹, r^{3/2}.
    /// The displacement carries V₀ plus the terms from the same poles.
    pub fn field(&self, r: f64, theta: f64, n_terms: usize) -> Result<FieldSample> {
        if !(r > 0.0 && r.is_finite()) || !(-PI..=PI).contains(&theta) {
            return Err(Error::Domain(format!(
                "field point needs r > 0 and |θ| <= π, got ({r}, {theta})"
            )));
        }
        if !(1..=5).contains(&n_terms) {
            return Err(Error::Domain(format!(
                "n_terms must be in 1..=5, got {n_terms}"
            )));
        }
        let mut out = FieldSample::zero();
        out.displacement = rotate_vector(theta, self.w0(theta));
        for term in 0..n_terms {
            let piece = match term {
                0 => self.group_field(0, r, theta),
                1 => FieldSample {
                    stress: self.t_tensor(theta),
                    displacement: rotate_vector(theta, self.w1(r, theta)),
                },
                2 => self.group_field(1, r, theta),
                3 => {
                    let s = self.s_tensor(theta);
                    FieldSample {
                        stress: [[s[0][0] * r, s[0][1] * r], [s[1][0] * r, s[1][1] * r]],
                        displacement: rotate_vector(theta, self.w2(r, theta)),
                    }
                }
                _ => self.group_field(2, r, theta),
            };
            out.add(&piece);
        }
        Ok(out)
    }
}

pub fn field_asymptotics(
    r: f64,
    theta: f64,
    n_terms: usize,
    exp: &TipExpansion,
) -> Result<FieldSample> {
    exp.field(r, theta, n_terms)
}

pub fn tip_expansion(params: &BimaterialParams, lc: &LoadCase) -> Result<TipExpansion> {
    tip_expansion_tol(params, lc, 1e-10)
}

pub fn tip_expansion_tol(
    params: &BimaterialParams,
    lc: &LoadCase,
    tol: f64,
) -> Result<TipExpansion> {
    require_plane_strain(lc)?;
    let balance = lc.check_balance()?;
    if !balance.balanced {
        return Err(Error::Unbalanced {
            force: balance.force[0],
            force_normal: balance.force[1],
            moment: balance.moment,
        });
    }
    let d = lc.decompose();
    let o = opts(tol);

    let mean: [f64; 2] = d.mean.integrate_x1(0, |_, v| [v[1], v[0]], &o)?;
    let jump: [f64; 6] = d.jump.integrate_x1(
        0,
        |x1, v| {
            let r = -x1;
            let (p, q) = (v[1], v[0]);
            [
                p / r,
                q / r,
                p / (r * r),
                q / (r * r),
                p * r.ln(),
                q * r.ln(),
            ]
        },
        &o,
    )?;
    let integrals = TipIntegrals {
        mean_p: mean[0],
        mean_q: mean[1],
        jump_p_r1: jump[0],
        jump_q_r1: jump[1],
        jump_p_r2: jump[2],
        jump_q_r2: jump[3],
        jump_p_log: jump[4],
        jump_q_log: jump[5],
    };

    let t_of = |sign: f64| (1.0 - sign * params.alpha) / PI * integrals.jump_q_r1;
    let w0_of = |sign: f64| -> [f64; 2] {
        let (mu, nu) = material(params, sign);
        let k = 1.0 - 2.0 * nu + sign * 2.0 * params.d_star * (nu - 1.0);
        let l = (-1.0 + sign * params.alpha) * (nu - 1.0);
        let pre = 1.0 / (2.0 * PI * mu);
        [
            pre * (k * PI * integrals.mean_p + l * integrals.jump_q_log),
            pre * (-k * PI * integrals.mean_q + l * integrals.jump_p_log),
        ]
    };

    let use_contour = params.d_star.abs() < CONTOUR_SWITCH;
    let mut groups = Vec::with_capacity(3);
    for g in 0..3 {
        let center = Complex64::new(-0.5 - g as f64, 0.0);
        if use_contour {
            let nodes = (0..CONTOUR_NODES)
                .map(|j| {
                    let phi = 2.0 * PI * (j as f64 + 0.5) / CONTOUR_NODES as f64;
                    let s = center + Complex64::from_polar(CONTOUR_RADIUS, phi);
                    load_transforms(&d, s, tol).map(|lt| (s, lt))
                })
                .collect::<Result<Vec<_>>>()?;
            groups.push(PoleGroup::Contour { center, nodes });
        } else {
            let sp = center + I * params.epsilon;
            let sm = center - I * params.epsilon;
            groups.push(PoleGroup::Residues([
                (sp, load_transforms(&d, sp, tol)?),
                (sm, load_transforms(&d, sm, tol)?),
            ]));
        }
    }

    let mut exp = TipExpansion {
        k: Complex64::new(0.0, 0.0),
        a: Complex64::new(0.0, 0.0),
        b: Complex64::new(0.0, 0.0),
        t_upper: t_of(1.0),
        t_lower: t_of(-1.0),
        w0_upper: w0_of(1.0),
        w0_lower: w0_of(-1.0),
        integrals,
        params: *params,
        groups,
    };
    let [k, a, b] = exp.interface_coefficients();
    exp.k = k;
    exp.a = a;
    exp.b = b;
    Ok(exp)
}

impl TipExpansion {
    /// √(2π)·Res(σ̃_θθ + iσ̃_rθ)(s, 0) at s = −1/2 − g − iε. The pole at +iε is
    /// removable in this combination.
    fn interface_coefficients(&self) -> [Complex64; 3] {
        let p = &self.params;
        let (mu, nu) = material(p, 1.0);
        let root = (2.0 * PI).sqrt();
        let combo = |v: [Complex64; 5]| v[0] + I * v[2];
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (g, slot) in out.iter_mut().enumerate() {
            *slot = match &self.groups[g] {
                PoleGroup::Residues(poles) => {
                    let (s, lt) = &poles[1];
                    let c = coefficients(*s, p, 1.0, lt, true);
                    root * combo(polar_transform(&c, *s, 0.0, mu, nu)) / delta_prime(*s, p.d_star)
                }
                PoleGroup::Contour { center, nodes } => {
                    let n = nodes.len() as f64;
                    let sum: Complex64 = nodes
                        .iter()
                        .map(|(s, lt)| {
                            let c = coefficients(*s, p, 1.0, lt, false);
                            combo(polar_transform(&c, *s, 0.0, mu, nu)) * (*s - center)
                        })
                        .sum();
                    root * sum / n
                }
            };
        }
        out
    }
}

/// Numerically inverted stress and displacement at (r, θ).
///
/// Each load piece is integrated along its own contour through Re s = ω, bent
/// into the half-plane where that piece decays: to the left for loads farther from
/// the tip than r, to the right for nearer ones. No poles lie in the swept wedges,
/// so every bend leaves the integral unchanged. Pieces straddling r keep the
/// straight contour, which converges only algebraically on the crack faces.
pub fn mellin_inverse(
    r: f64,
    theta: f64,
    params: &BimaterialParams,
    lc: &LoadCase,
    omega: f64,
) -> Result<FieldSample> {
    mellin_inverse_tol(r, theta, params, lc, omega, 1e-8)
}

/// Contour abscissa valid for both stress and displacement.
pub const DEFAULT_OMEGA: f64 = 0.25;

pub fn mellin_inverse_tol(
    r: f64,
    theta: f64,
    params: &BimaterialParams,
    lc: &LoadCase,
    omega: f64,
    tol: f64,
) -> Result<FieldSample> {
    require_plane_strain(lc)?;
    if !(r > 0.0 && r.is_finite()) || !(-PI..=PI).contains(&theta) {
        return Err(Error::Domain(format!(
            "field point needs r > 0 and |θ| <= π, got ({r}, {theta})"
        )));
    }
    if omega <= 0.0 || omega >= 0.5 {
        return Err(Error::Pole {
            what: "the displacement transform (contour must satisfy 0 < ω < 1/2)",
            s: Complex64::new(omega, 0.0),
        });
    }
    let d = lc.decompose();
    if theta.abs() == PI && d.mean.atoms.iter().chain(&d.jump.atoms).any(|a| -a.x1 == r) {
        return Err(Error::Domain(format!(
            "the face traction at r = {r} is a point load; the field is singular there"
        )));
    }
    // Bend slope κ: keep κ|ε| well below the distance from ω to the nearest poles.
    let room = 0.5 * (0.5 - omega).min(omega + 0.5);
    let kappa = if params.epsilon.abs() > 0.0 {
        (room / params.epsilon.abs()).min(1.0)
    } else {
        1.0
    };

    let mut out = FieldSample::zero();
    for (piece, bend) in split_by_radius(&d, r) {
        let tau = match bend {
            Bend::Left => -kappa,
            Bend::Right => kappa,
            Bend::Straight => 0.0,
        };
        let v = contour_integral(&piece, r, theta, params, omega, tau, tol)?;
        out.add(&v);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Bend {
    Left,
    Right,
    Straight,
}

fn split_by_radius(d: &LoadDecomposition, r: f64) -> Vec<(LoadDecomposition, Bend)> {
    let empty = || LoadDecomposition {
        mean: Part::default(),
        jump: Part::default(),
    };
    let mut pieces = [empty(), empty(), empty()];
    let bend_of = |lo: f64, hi: f64| -> usize {
        if lo > r {
            0
        } else if hi < r {
            1
        } else {
            2
        }
    };
    for (src, is_jump) in [(&d.mean, false), (&d.jump, true)] {
        for a in &src.atoms {
            let rk = -a.x1;
            let idx = bend_of(rk, rk);
            let dst = if is_jump {
                &mut pieces[idx].jump
            } else {
                &mut pieces[idx].mean
            };
            dst.atoms.push(*a);
        }
        for (w, s) in &src.smooth {
            let (lo, hi) = s.support();
            let idx = bend_of(-hi, -lo);
            let dst = if is_jump {
                &mut pieces[idx].jump
            } else {
                &mut pieces[idx].mean
            };
            dst.smooth.push((*w, s.clone()));
        }
    }
    let bends = [Bend::Left, Bend::Right, Bend::Straight];
    pieces
        .into_iter()
        .zip(bends)
        .filter(|(p, _)| !(p.mean.is_empty() && p.jump.is_empty()))
        .collect()
}

/// (1/2πi)∫ along s(t) = ω + it + τ|t| of [σ̃ r^{−s−1}, ũ r^{−s}].
///
/// Conjugate symmetry of real loads reduces this to Im(∫₀^∞ f·(i + τ) dt)/π.
fn contour_integral(
    d: &LoadDecomposition,
    r: f64,
    theta: f64,
    params: &BimaterialParams,
    omega: f64,
    tau: f64,
    tol: f64,
) -> Result<FieldSample> {
    let sign = side(theta);
    let (mu, nu) = material(params, sign);
    let inner = (tol * 1e-2).max(1e-13);
    let slope = Complex64::new(tau, 1.0);
    let integrand = |t: f64| -> [Complex64; 5] {
        let s = Complex64::new(omega + tau * t, t);
        let Ok(lt) = load_transforms(d, s, inner) else {
            return [Complex64::new(f64::NAN, 0.0); 5];
        };
        let c = coefficients_normalised(s, params, sign, &lt);
        let v = polar_transform_normalised(&c, s, theta, mu, nu);
        // Undo both normalisations together with r^{−s}; the sum of exponents stays modest.
        let growth = (theta.abs() - PI) * t.abs();
        let rs = (Complex64::new(growth, 0.0) - s * r.ln()).exp() * slope;
        let rs1 = rs / r;
        [v[0] * rs1, v[1] * rs1, v[2] * rs1, v[3] * rs, v[4] * rs]
    };

    // Absolute floor from the integrand's own size near the real axis, so a piece
    // whose value nearly cancels does not demand unreachable relative accuracy.
    let size = [0.0, 0.125, 0.25, 0.5]
        .iter()
        .map(|&t| integrand(t).magnitude())
        .fold(0.0, f64::max);
    let o = QuadOptions::new(tol)
        .with_abs_tol((1e-2 * tol * size).max(1e-300))
        .with_max_depth(30);
    let mut total = [Complex64::new(0.0, 0.0); 5];
    let (mut lo, mut hi) = (0.0, 0.5);
    // Panels double in length; stop once two successive panels are negligible.
    let mut quiet = 0;
    while hi <= 2.0e4 {
        let q = integrate(integrand, lo, hi, &o)?;
        total = total.add(q.value);
        if q.value.magnitude() <= tol * total.magnitude().max(1e-2 * size) {
            quiet += 1;
            if quiet >= 2 {
                let v = total.map(|z| Complex64::new(z.im / PI, 0.0));
                return Ok(FieldSample::from_parts(v));
            }
        } else {
            quiet = 0;
        }
        lo = hi;
        hi *= 2.0;
    }
    Err(Error::NoConvergence {
        estimate: total[0] / PI,
        achieved: f64::INFINITY,
        requested: tol,
    })
}
