//! Randomised invariants of the material constants, special functions, quadrature,
//! loads and the three independent coefficient routes.

mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use wfcrack::fullfield::tip_expansion;
use wfcrack::loading::{Face, FaceTraction, LoadCase, Mode, SmoothTraction};
use wfcrack::matrix::Mat2;
use wfcrack::perturb::advance_sif;
use wfcrack::quadrature::{integrate_singular, QuadSpec};
use wfcrack::sif::{advance_matrix, sif_closed_form, sif_quadrature};
use wfcrack::special::{gamma, power_kernel, OscConstants};
use wfcrack::BimaterialParams;

use common::{params_with_epsilon, relative};

fn material() -> impl Strategy<Value = (f64, f64, f64, f64)> {
    (-2.0..2.0f64, -0.99..0.499f64, -2.0..2.0f64, -0.99..0.499f64)
        .prop_map(|(lp, np, lm, nm)| (10f64.powf(lp), np, 10f64.powf(lm), nm))
}

/// Point loads on x₁ ∈ [−10, −0.1] with three lower-face atoms added to cancel
/// the net jump force and moment.
fn balanced_case() -> impl Strategy<Value = LoadCase> {
    prop::collection::vec(
        (any::<bool>(), -10.0..-0.1f64, -1.0..1.0f64, -1.0..1.0f64),
        1..6,
    )
    .prop_map(|atoms| {
        let (mut j1, mut j2, mut m) = (0.0, 0.0, 0.0);
        let mut t = Vec::new();
        for (upper, x1, q, p) in atoms {
            let (face, sign) = if upper {
                (Face::Upper, 1.0)
            } else {
                (Face::Lower, -1.0)
            };
            j1 += sign * q;
            j2 += sign * p;
            m += sign * x1 * p;
            t.push(FaceTraction::point(face, x1, [q, p]));
        }
        let (xa, xb) = (-0.1, -10.0);
        let nb = (m - xa * j2) / (xb - xa);
        t.push(FaceTraction::point(Face::Lower, -5.0, [j1, 0.0]));
        t.push(FaceTraction::point(Face::Lower, xa, [0.0, j2 - nb]));
        t.push(FaceTraction::point(Face::Lower, xb, [0.0, nb]));
        LoadCase::new(Mode::PlaneStrain, t, 0.1).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn swapping_half_planes_flips_odd_constants((mp, np, mm, nm) in material()) {
        let p = BimaterialParams::from_constants(mp, np, mm, nm).unwrap();
        let s = p.swapped().unwrap();
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300);
        for (a, b) in [(p.epsilon, s.epsilon), (p.alpha, s.alpha), (p.d_star, s.d_star), (p.eta, s.eta), (p.f, s.f), (p.d, s.d)] {
            prop_assert!(close(a, -b), "{a} vs {b}");
        }
        for (a, b) in [(p.b, s.b), (p.e, s.e), (p.d0, s.d0)] {
            prop_assert!(close(a, b), "{a} vs {b}");
        }
    }

    #[test]
    fn oscillation_index_matches_mismatch((mp, np, mm, nm) in material()) {
        let p = BimaterialParams::from_constants(mp, np, mm, nm).unwrap();
        let lhs = (2.0 * PI * p.epsilon).exp();
        let rhs = (1.0 + p.d_star) / (1.0 - p.d_star);
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs);
        // Identical materials give ν_equiv = ν, so auxetic pairs go negative.
        prop_assert!(p.nu_equiv > -1.0 && p.nu_equiv < 0.5, "ν_equiv = {}", p.nu_equiv);
        if np >= 0.0 && nm >= 0.0 {
            prop_assert!(p.nu_equiv >= 0.0, "ν_equiv = {}", p.nu_equiv);
        }
        prop_assert!(p.verify_identities().max_residual <= 1e-12);
    }

    #[test]
    fn gamma_recurrence_and_reflection(x in 0.05..3.0f64, y in -2.0..2.0f64) {
        let z = Complex64::new(x, y);
        let g = gamma(z).unwrap();
        prop_assert!(relative(gamma(z + 1.0).unwrap(), z * g) < 1e-12);
        prop_assert!(relative(gamma(z.conj()).unwrap(), g.conj()) < 1e-13);
    }

    #[test]
    fn power_kernel_conjugates(x in 1e-6..1e3f64, sigma in -1.5..1.5f64, eps in -0.2..0.2f64) {
        let k = power_kernel(x, sigma, eps).unwrap();
        prop_assert!(relative(power_kernel(x, sigma, -eps).unwrap(), k.conj()) < 1e-14);
    }

    #[test]
    fn lower_constants_are_upper_with_reversed_index(eps in -0.15..0.15f64) {
        let plus = OscConstants::new(&params_with_epsilon(eps));
        let minus = OscConstants::new(&params_with_epsilon(-eps));
        for j in 0..3 {
            prop_assert!(relative(plus.c_minus[j], minus.c_plus[j]) < 1e-12);
        }
    }

    #[test]
    fn advance_matrices_are_diagonal(eps in -0.15..0.15f64) {
        let p = params_with_epsilon(eps);
        for (j, shift) in [(1usize, 0.5), (2, 1.5)] {
            let target = Mat2::diag(Complex64::new(shift, p.epsilon), Complex64::new(shift, -p.epsilon));
            prop_assert!((advance_matrix(&p, j) - target).max_abs() < 1e-12);
        }
    }

    #[test]
    fn singular_quadrature_is_linear_conjugate_and_additive(
        sigma in -0.9..1.0f64,
        eps in -0.15..0.15f64,
        w in 0.2..4.0f64,
        split in 0.05..0.95f64,
        alpha in -2.0..2.0f64,
        beta in -2.0..2.0f64,
    ) {
        let g1 = |t: f64| Complex64::new((w * t).cos(), 0.0);
        let g2 = |t: f64| Complex64::new((-t).exp(), 0.0);
        let spec = QuadSpec::new(sigma, eps, 0.0, 1.0).with_tol(1e-12);
        let i1 = integrate_singular(g1, &spec).unwrap();
        let i2 = integrate_singular(g2, &spec).unwrap();
        let combo = integrate_singular(|t| g1(t) * alpha + g2(t) * beta, &spec).unwrap();
        let bound = |e: f64| e + 1e-13;
        prop_assert!((combo.value - (i1.value * alpha + i2.value * beta)).norm()
            <= bound(combo.error + alpha.abs() * i1.error + beta.abs() * i2.error));

        let flipped = integrate_singular(g1, &QuadSpec::new(sigma, -eps, 0.0, 1.0).with_tol(1e-12)).unwrap();
        prop_assert!((flipped.value - i1.value.conj()).norm() <= bound(flipped.error + i1.error));

        let left = integrate_singular(g1, &QuadSpec::new(sigma, eps, 0.0, split).with_tol(1e-12)).unwrap();
        let right = integrate_singular(g1, &QuadSpec::new(sigma, eps, split, 1.0).with_tol(1e-12)).unwrap();
        prop_assert!((left.value + right.value - i1.value).norm() <= bound(left.error + right.error + i1.error));
    }

    #[test]
    fn decomposition_round_trips(lc in balanced_case(), lo in -6.0..-2.0f64, amp in -1.0..1.0f64) {
        let bump = SmoothTraction::bump(lo, lo + 1.0, [amp, 0.5]).unwrap();
        let mut t = lc.tractions.clone();
        t.push(FaceTraction::smooth(Face::Upper, bump.clone()));
        let lc = LoadCase::unbalanced(Mode::PlaneStrain, t, lc.gap).unwrap();
        let dec = lc.decompose();
        for face in [Face::Upper, Face::Lower] {
            let atoms = dec.reconstruct_atoms(face);
            for tr in lc.tractions.iter().filter(|t| t.face == face) {
                if let wfcrack::loading::TractionKind::Point { x1, value } = tr.kind {
                    // Atoms at the same position merge, so compare totals per position.
                    let want: [f64; 2] = lc.tractions.iter().filter(|u| u.face == face).fold([0.0, 0.0], |acc, u| match u.kind {
                        wfcrack::loading::TractionKind::Point { x1: y, value: v } if y == x1 => [acc[0] + v[0], acc[1] + v[1]],
                        _ => acc,
                    });
                    let got = atoms.iter().find(|a| a.x1 == x1).unwrap().value;
                    prop_assert!((got[0] - want[0]).abs() < 1e-15 && (got[1] - want[1]).abs() < 1e-15);
                    let _ = value;
                }
            }
            let x = lo + 0.37;
            let s = dec.reconstruct_smooth(face, x).unwrap();
            let want = if face == Face::Upper { bump.eval(x) } else { [0.0, 0.0] };
            prop_assert!((s[0] - want[0]).abs() < 1e-14 && (s[1] - want[1]).abs() < 1e-14);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn coefficient_routes_agree(lc in balanced_case(), eta in -0.95..0.95f64, np in 0.0..0.45f64, nm in 0.0..0.45f64) {
        let p = BimaterialParams::from_eta(eta, np, nm).unwrap();
        let closed = sif_closed_form(&p, &lc).unwrap();
        let quad = sif_quadrature(&p, &lc, 1e-10).unwrap();
        let residue = tip_expansion(&p, &lc).unwrap();
        let scale = |z: Complex64| z.norm().max(1.0);
        prop_assert!((quad.k - closed.k).norm() < 1e-6 * scale(closed.k));
        prop_assert!((quad.a - closed.a).norm() < 1e-6 * scale(closed.a));
        prop_assert!((residue.k - closed.k).norm() < 1e-10 * scale(closed.k));
        prop_assert!((residue.a - closed.a).norm() < 1e-10 * scale(closed.a));
        prop_assert!((residue.b - closed.b.unwrap()).norm() < 1e-10 * scale(residue.b));
        prop_assert_eq!(closed.conjugate_residual, 0.0);
    }

    #[test]
    fn higher_blocks_are_homogeneous(lc in balanced_case(), eta in -0.95..0.95f64, r in 0.01..0.09f64, theta in -PI..PI) {
        let p = BimaterialParams::from_eta(eta, 0.25, 0.3).unwrap();
        let e = tip_expansion(&p, &lc).unwrap();
        let (w1, w1d) = (e.w1(r, theta), e.w1(2.0 * r, theta));
        let (w2, w2d) = (e.w2(r, theta), e.w2(2.0 * r, theta));
        for k in 0..2 {
            prop_assert!((w1d[k] - 2.0 * w1[k]).abs() <= 1e-10 * w1[k].abs().max(1e-300));
            prop_assert!((w2d[k] - 4.0 * w2[k]).abs() <= 1e-10 * w2[k].abs().max(1e-300));
        }
    }

    #[test]
    fn zero_advance_is_continuous(lc in balanced_case(), eta in -0.95..0.95f64) {
        let p = BimaterialParams::from_eta(eta, 0.2, 0.3).unwrap();
        let r = advance_sif(&p, &lc, 0.0).unwrap();
        prop_assert_eq!(r.k_star, r.k0);
        prop_assert_eq!(r.a_star, r.a0);
    }
}
