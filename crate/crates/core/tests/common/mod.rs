#![allow(dead_code)]

use rand::Rng;
use wfcrack::loading::{Face, FaceTraction, LoadCase, Mode};
use wfcrack::BimaterialParams;

pub fn reference() -> BimaterialParams {
    BimaterialParams::from_eta(0.5, 0.2, 0.3).unwrap()
}

/// ν₊ = ν₋ = 0 and μ₊ = 1 leave d* = (μ₋ − μ₊)/(2(μ₋ + μ₊)), reaching |ε| < 0.175.
pub fn params_with_epsilon(eps: f64) -> BimaterialParams {
    let d = (std::f64::consts::PI * eps).tanh();
    BimaterialParams::from_constants(1.0, 0.0, (1.0 + 2.0 * d) / (1.0 - 2.0 * d), 0.0).unwrap()
}

pub fn relative(a: num_complex::Complex64, b: num_complex::Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

/// Random point loads on x₁ ∈ [−3, −0.5], closed by three lower-face atoms that
/// cancel the net jump force and moment. Tip gap 0.5.
pub fn random_balanced_case(rng: &mut impl Rng) -> LoadCase {
    let n = rng.gen_range(2..6);
    let mut t = Vec::new();
    let (mut j1, mut j2, mut m) = (0.0, 0.0, 0.0);
    for _ in 0..n {
        let face = if rng.gen_bool(0.5) {
            Face::Upper
        } else {
            Face::Lower
        };
        let x1 = rng.gen_range(-3.0..-0.5);
        let v = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let sign = if face == Face::Upper { 1.0 } else { -1.0 };
        j1 += sign * v[0];
        j2 += sign * v[1];
        m += sign * x1 * v[1];
        t.push(FaceTraction::point(face, x1, v));
    }
    // A lower-face value v enters the jump as −v.
    let (xa, xb) = (-0.6, -2.8);
    let nb = (m - xa * j2) / (xb - xa);
    let na = j2 - nb;
    t.push(FaceTraction::point(Face::Lower, -1.7, [j1, 0.0]));
    t.push(FaceTraction::point(Face::Lower, xa, [0.0, na]));
    t.push(FaceTraction::point(Face::Lower, xb, [0.0, nb]));
    LoadCase::new(Mode::PlaneStrain, t, 0.5).unwrap()
}
