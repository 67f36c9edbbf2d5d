//! Face tractions on the physical crack x₁ < 0 and their mean/jump split.
//!
//! Components are stored as `[p₁, p₂]` (shear, normal) for plane strain and as
//! `[p₃, 0]` for antiplane loading. Tractions are the boundary values σ₂ⱼ(x₁, 0±),
//! so equal values on both faces are a self-balanced pair.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadOptions, QuadValue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Face {
    Upper,
    Lower,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    PlaneStrain,
    AntiPlane,
}

/// Traction profile x₁ ↦ components.
pub type Profile = Arc<dyn Fn(f64) -> [f64; 2] + Send + Sync>;

/// A smooth traction supported on [lo, hi] ⊂ (−∞, 0).
///
/// The derivative handles (with respect to x₁) are optional; they are needed only
/// for the integrated-by-parts coefficient formulas.
#[derive(Clone)]
pub struct SmoothTraction {
    profile: Profile,
    first: Option<Profile>,
    second: Option<Profile>,
    lo: f64,
    hi: f64,
}

impl fmt::Debug for SmoothTraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SmoothTraction")
            .field("support", &(self.lo, self.hi))
            .field("has_derivatives", &self.has_derivatives())
            .finish()
    }
}

impl SmoothTraction {
    pub fn new(lo: f64, hi: f64, profile: Profile) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite() && lo < hi && hi < 0.0) {
            return Err(Error::Domain(format!(
                "smooth traction support [{lo}, {hi}] must be a bounded interval of x1 < 0"
            )));
        }
        Ok(Self {
            profile,
            first: None,
            second: None,
            lo,
            hi,
        })
    }

    pub fn with_derivatives(mut self, first: Profile, second: Profile) -> Self {
        self.first = Some(first);
        self.second = Some(second);
        self
    }

    /// amplitude·(1 − u²)³ with u mapping [lo, hi] onto [−1, 1]. C² with closed-form
    /// derivatives, so every coefficient path applies.
    pub fn bump(lo: f64, hi: f64, amplitude: [f64; 2]) -> Result<Self> {
        let mid = 0.5 * (lo + hi);
        let scale = 2.0 / (hi - lo);
        let shape = move |x: f64, order: u8| -> f64 {
            let u = (x - mid) * scale;
            if u.abs() >= 1.0 {
                return 0.0;
            }
            let w = 1.0 - u * u;
            match order {
                0 => w * w * w,
                1 => -6.0 * u * w * w * scale,
                _ => (-6.0 * w * w + 24.0 * u * u * w) * scale * scale,
            }
        };
        let by_order = move |order: u8| -> Profile {
            Arc::new(move |x| {
                let v = shape(x, order);
                [amplitude[0] * v, amplitude[1] * v]
            })
        };
        Ok(Self::new(lo, hi, by_order(0))?.with_derivatives(by_order(1), by_order(2)))
    }

    pub fn support(&self) -> (f64, f64) {
        (self.lo, self.hi)
    }

    pub fn has_derivatives(&self) -> bool {
        self.first.is_some() && self.second.is_some()
    }

    pub fn eval(&self, x1: f64) -> [f64; 2] {
        (self.profile)(x1)
    }

    /// Derivative of the given order (0, 1 or 2) with respect to x₁.
    pub fn eval_derivative(&self, order: u8, x1: f64) -> Result<[f64; 2]> {
        let handle = match order {
            0 => Some(&self.profile),
            1 => self.first.as_ref(),
            2 => self.second.as_ref(),
            _ => None,
        };
        handle
            .map(|h| h(x1))
            .ok_or_else(|| Error::Domain(format!("no derivative handle of order {order}")))
    }

    fn shifted(&self, shift: f64) -> Self {
        let wrap = |p: &Profile| -> Profile {
            let p = Arc::clone(p);
            Arc::new(move |x| p(x + shift))
        };
        Self {
            profile: wrap(&self.profile),
            first: self.first.as_ref().map(wrap),
            second: self.second.as_ref().map(wrap),
            lo: self.lo - shift,
            hi: self.hi - shift,
        }
    }
}

#[derive(Debug, Clone)]
pub enum TractionKind {
    Point { x1: f64, value: [f64; 2] },
    Smooth(SmoothTraction),
}

#[derive(Debug, Clone)]
pub struct FaceTraction {
    pub face: Face,
    pub kind: TractionKind,
}

impl FaceTraction {
    pub fn point(face: Face, x1: f64, value: [f64; 2]) -> Self {
        Self {
            face,
            kind: TractionKind::Point { x1, value },
        }
    }

    pub fn smooth(face: Face, traction: SmoothTraction) -> Self {
        Self {
            face,
            kind: TractionKind::Smooth(traction),
        }
    }
}

/// Residuals of the principal force and moment of the face loading.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BalanceReport {
    /// ∫⟦p₁⟧ and ∫⟦p₂⟧ (for antiplane: ∫⟦p₃⟧ and 0).
    pub force: [f64; 2],
    /// ∫x₁⟦p₂⟧ (for antiplane: ∫x₁⟦p₃⟧, reported but not required to vanish).
    pub moment: f64,
    /// Magnitude scales the residuals are compared against.
    pub force_scale: f64,
    pub moment_scale: f64,
    pub balanced: bool,
}

const BALANCE_TOL: f64 = 1e-12;

/// A set of face tractions with a declared tip gap δ > 0: no load lies in (−δ, 0).
#[derive(Debug, Clone)]
pub struct LoadCase {
    pub mode: Mode,
    pub tractions: Vec<FaceTraction>,
    pub gap: f64,
    pub allow_unbalanced: bool,
}

impl LoadCase {
    /// A self-balanced load case; unbalanced input is rejected.
    pub fn new(mode: Mode, tractions: Vec<FaceTraction>, gap: f64) -> Result<Self> {
        let lc = Self::unbalanced(mode, tractions, gap)?;
        let report = lc.check_balance()?;
        if !report.balanced {
            return Err(Error::Unbalanced {
                force: report.force[0],
                force_normal: report.force[1],
                moment: report.moment,
            });
        }
        Ok(Self {
            allow_unbalanced: false,
            ..lc
        })
    }

    /// Skips the balance requirement. Useful for single-atom checks.
    pub fn unbalanced(mode: Mode, tractions: Vec<FaceTraction>, gap: f64) -> Result<Self> {
        if !(gap > 0.0 && gap.is_finite()) {
            return Err(Error::Domain(format!(
                "tip gap must be positive, got {gap}"
            )));
        }
        // Positions exactly at −δ are allowed; a few ulps of slack absorb a − b.
        let limit = -gap * (1.0 - 4.0 * f64::EPSILON);
        for t in &tractions {
            match &t.kind {
                TractionKind::Point { x1, value } => {
                    if !(x1.is_finite() && *x1 <= limit) {
                        return Err(Error::Domain(format!(
                            "point load at x1 = {x1} lies inside the tip gap {gap}"
                        )));
                    }
                    if value.iter().any(|v| !v.is_finite()) {
                        return Err(Error::Domain("non-finite point load".into()));
                    }
                }
                TractionKind::Smooth(s) => {
                    if s.hi > limit {
                        return Err(Error::Domain(format!(
                            "smooth load support ends at x1 = {} inside the tip gap {gap}",
                            s.hi
                        )));
                    }
                }
            }
        }
        Ok(Self {
            mode,
            tractions,
            gap,
            allow_unbalanced: true,
        })
    }

    /// Upper face −F at −a; lower face −F/2 at −(a ± b). Gap a − b.
    pub fn three_point_case(force: f64, a: f64, b: f64) -> Result<Self> {
        if !(a > 0.0 && b >= 0.0 && b < a) {
            return Err(Error::Domain(format!(
                "three-point loading needs a > 0 and 0 <= b < a, got a = {a}, b = {b}"
            )));
        }
        Self::new(
            Mode::PlaneStrain,
            vec![
                FaceTraction::point(Face::Upper, -a, [0.0, -force]),
                FaceTraction::point(Face::Lower, -(a + b), [0.0, -0.5 * force]),
                FaceTraction::point(Face::Lower, -(a - b), [0.0, -0.5 * force]),
            ],
            a - b,
        )
    }

    /// Opposing normal P and shear Q forces on both faces at distance a.
    pub fn hutchinson_pair(normal: f64, shear: f64, a: f64) -> Result<Self> {
        if !(a > 0.0) {
            return Err(Error::Domain(format!(
                "load distance must be positive, got {a}"
            )));
        }
        let v = [-shear, -normal];
        Self::new(
            Mode::PlaneStrain,
            vec![
                FaceTraction::point(Face::Upper, -a, v),
                FaceTraction::point(Face::Lower, -a, v),
            ],
            a,
        )
    }

    /// The load seen from a tip advanced by `advance`: p⋆(x₁) = p(x₁ + advance).
    pub fn shifted(&self, advance: f64) -> Result<Self> {
        if !(advance >= 0.0 && advance < self.gap) {
            return Err(Error::Domain(format!(
                "advance {advance} must lie in [0, gap = {})",
                self.gap
            )));
        }
        let tractions = self
            .tractions
            .iter()
            .map(|t| FaceTraction {
                face: t.face,
                kind: match &t.kind {
                    TractionKind::Point { x1, value } => TractionKind::Point {
                        x1: x1 - advance,
                        value: *value,
                    },
                    TractionKind::Smooth(s) => TractionKind::Smooth(s.shifted(advance)),
                },
            })
            .collect();
        Ok(Self {
            tractions,
            gap: self.gap + advance,
            ..self.clone()
        })
    }

    pub fn decompose(&self) -> LoadDecomposition {
        let mut mean = Part::default();
        let mut jump = Part::default();
        for t in &self.tractions {
            let sign = match t.face {
                Face::Upper => 1.0,
                Face::Lower => -1.0,
            };
            match &t.kind {
                TractionKind::Point { x1, value } => {
                    mean.add_atom(*x1, [0.5 * value[0], 0.5 * value[1]]);
                    jump.add_atom(*x1, [sign * value[0], sign * value[1]]);
                }
                TractionKind::Smooth(s) => {
                    mean.smooth.push((0.5, s.clone()));
                    jump.smooth.push((sign, s.clone()));
                }
            }
        }
        LoadDecomposition { mean, jump }
    }

    pub fn check_balance(&self) -> Result<BalanceReport> {
        let jump = self.decompose().jump;
        let opts = QuadOptions::new(1e-13).with_abs_tol(1e-300);
        let totals: [f64; 4] =
            jump.integrate_x1(0, |x1, v| [v[0], v[1], x1 * v[1], x1 * v[0]], &opts)?;
        let abs: [f64; 4] = self.decompose_abs().integrate_x1(
            0,
            |x1, v| [v[0].abs(), v[1].abs(), (x1 * v[1]).abs(), (x1 * v[0]).abs()],
            &opts,
        )?;
        let (force, moment, moment_scale) = match self.mode {
            Mode::PlaneStrain => ([totals[0], totals[1]], totals[2], abs[2]),
            Mode::AntiPlane => ([totals[0], 0.0], totals[3], abs[3]),
        };
        let force_scale = abs[0] + abs[1];
        let force_ok = force
            .iter()
            .all(|f| f.abs() <= BALANCE_TOL * force_scale.max(f64::MIN_POSITIVE));
        let moment_ok = moment.abs() <= BALANCE_TOL * moment_scale.max(f64::MIN_POSITIVE);
        // Antiplane loading only needs force balance: the out-of-plane moment of a
        // face traction is not constrained by the crack problem.
        let balanced = force_ok && (self.mode == Mode::AntiPlane || moment_ok);
        Ok(BalanceReport {
            force,
            moment,
            force_scale,
            moment_scale,
            balanced,
        })
    }

    // All tractions with unit weight, for magnitude scales.
    fn decompose_abs(&self) -> Part {
        let mut all = Part::default();
        for t in &self.tractions {
            match &t.kind {
                TractionKind::Point { x1, value } => all.atoms.push(PointAtom {
                    x1: *x1,
                    value: *value,
                }),
                TractionKind::Smooth(s) => all.smooth.push((1.0, s.clone())),
            }
        }
        all
    }

    pub fn has_smooth(&self) -> bool {
        self.tractions
            .iter()
            .any(|t| matches!(t.kind, TractionKind::Smooth(_)))
    }
}

/// Radial coordinate r = −x₁ used by the Mellin formulation.
pub fn to_radial(x1: f64) -> f64 {
    -x1
}

pub fn from_radial(r: f64) -> f64 {
    -r
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointAtom {
    pub x1: f64,
    pub value: [f64; 2],
}

/// One of ⟨p⟩ or ⟦p⟧: merged point atoms plus weighted smooth tractions.
#[derive(Debug, Clone, Default)]
pub struct Part {
    pub atoms: Vec<PointAtom>,
    pub smooth: Vec<(f64, SmoothTraction)>,
}

impl Part {
    fn add_atom(&mut self, x1: f64, value: [f64; 2]) {
        if let Some(a) = self.atoms.iter_mut().find(|a| a.x1 == x1) {
            a.value[0] += value[0];
            a.value[1] += value[1];
        } else {
            self.atoms.push(PointAtom { x1, value });
        }
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.iter().all(|a| a.value == [0.0, 0.0]) && self.smooth.is_empty()
    }

    /// Smooth part of the profile (or its derivative) at x₁; point atoms excluded.
    pub fn smooth_value(&self, order: u8, x1: f64) -> Result<[f64; 2]> {
        let mut out = [0.0; 2];
        for (w, s) in &self.smooth {
            let v = s.eval_derivative(order, x1)?;
            out[0] += w * v[0];
            out[1] += w * v[1];
        }
        Ok(out)
    }

    pub fn smooth_has_derivatives(&self) -> bool {
        self.smooth.iter().all(|(_, s)| s.has_derivatives())
    }

    /// Σ_atoms f(x₀, c) + Σ_smooth ∫ f(x₁, w·p⁽ᵏ⁾(x₁)) dx₁.
    ///
    /// `order` selects the derivative of the smooth profiles. Point atoms always
    /// enter with their coefficient; derivative orders are the caller's business
    /// there, because δ′ atoms are never formed.
    pub fn integrate_x1<V: QuadValue>(
        &self,
        order: u8,
        f: impl Fn(f64, [f64; 2]) -> V,
        opts: &QuadOptions,
    ) -> Result<V> {
        let mut total = V::zero();
        for a in &self.atoms {
            total = total.add(f(a.x1, a.value));
        }
        for (w, s) in &self.smooth {
            if order > 0 && !s.has_derivatives() {
                return Err(Error::Domain(format!(
                    "smooth traction lacks the order-{order} derivative handle"
                )));
            }
            let q = integrate(
                |x1| {
                    let v = s.eval_derivative(order, x1).unwrap_or([0.0; 2]);
                    f(x1, [w * v[0], w * v[1]])
                },
                s.lo,
                s.hi,
                opts,
            )?;
            total = total.add(q.value);
        }
        Ok(total)
    }

    /// The same part without its point atoms.
    pub fn smooth_only(&self) -> Part {
        Part {
            atoms: Vec::new(),
            smooth: self.smooth.clone(),
        }
    }

    /// The same part without its smooth tractions.
    pub fn atoms_only(&self) -> Part {
        Part {
            atoms: self.atoms.clone(),
            smooth: Vec::new(),
        }
    }

    /// Point atoms only, as (r, value) pairs with r = −x₁.
    pub fn radial_atoms(&self) -> impl Iterator<Item = (f64, [f64; 2])> + '_ {
        self.atoms.iter().map(|a| (to_radial(a.x1), a.value))
    }
}

/// ⟨p⟩ = (p⁺ + p⁻)/2 and ⟦p⟧ = p⁺ − p⁻.
#[derive(Debug, Clone)]
pub struct LoadDecomposition {
    pub mean: Part,
    pub jump: Part,
}

impl LoadDecomposition {
    /// Point atoms of p^± = ⟨p⟩ ± ⟦p⟧/2.
    pub fn reconstruct_atoms(&self, face: Face) -> Vec<PointAtom> {
        let sign = match face {
            Face::Upper => 0.5,
            Face::Lower => -0.5,
        };
        let mut out = self.mean.atoms.clone();
        for j in &self.jump.atoms {
            if let Some(a) = out.iter_mut().find(|a| a.x1 == j.x1) {
                a.value[0] += sign * j.value[0];
                a.value[1] += sign * j.value[1];
            } else {
                out.push(PointAtom {
                    x1: j.x1,
                    value: [sign * j.value[0], sign * j.value[1]],
                });
            }
        }
        out
    }

    /// Smooth part of p^± at x₁.
    pub fn reconstruct_smooth(&self, face: Face, x1: f64) -> Result<[f64; 2]> {
        let sign = match face {
            Face::Upper => 0.5,
            Face::Lower => -0.5,
        };
        let m = self.mean.smooth_value(0, x1)?;
        let j = self.jump.smooth_value(0, x1)?;
        Ok([m[0] + sign * j[0], m[1] + sign * j[1]])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn atom_at(atoms: &[PointAtom], x1: f64) -> [f64; 2] {
        atoms
            .iter()
            .find(|a| a.x1 == x1)
            .map(|a| a.value)
            .unwrap_or([0.0; 2])
    }

    #[test]
    fn equal_faces_have_no_jump() {
        let lc = LoadCase::hutchinson_pair(2.0, 0.0, 1.0).unwrap();
        let d = lc.decompose();
        assert_eq!(atom_at(&d.mean.atoms, -1.0), [0.0, -2.0]);
        assert!(d.jump.is_empty());
    }

    #[test]
    fn three_point_split() {
        let (f, a, b) = (1.0, 1.0, 0.5);
        let d = LoadCase::three_point_case(f, a, b).unwrap().decompose();
        assert_eq!(atom_at(&d.mean.atoms, -a), [0.0, -f / 2.0]);
        assert_eq!(atom_at(&d.mean.atoms, -(a + b)), [0.0, -f / 4.0]);
        assert_eq!(atom_at(&d.mean.atoms, -(a - b)), [0.0, -f / 4.0]);
        assert_eq!(atom_at(&d.jump.atoms, -a), [0.0, -f]);
        assert_eq!(atom_at(&d.jump.atoms, -(a + b)), [0.0, f / 2.0]);
        assert_eq!(atom_at(&d.jump.atoms, -(a - b)), [0.0, f / 2.0]);
    }

    #[test]
    fn three_point_without_offset_is_symmetric() {
        let d = LoadCase::three_point_case(1.0, 1.0, 0.0)
            .unwrap()
            .decompose();
        assert_eq!(d.mean.atoms.len(), 1);
        assert_eq!(atom_at(&d.mean.atoms, -1.0), [0.0, -1.0]);
        assert!(d.jump.is_empty());
    }

    #[test]
    fn three_point_rejects_tip_contact() {
        assert!(LoadCase::three_point_case(1.0, 1.0, 1.0).is_err());
        assert!(LoadCase::three_point_case(1.0, 1.0, -0.1).is_err());
    }

    #[test]
    fn one_sided_smooth_load() {
        let s = SmoothTraction::bump(-3.0, -1.0, [0.0, 1.0]).unwrap();
        let lc = LoadCase::unbalanced(
            Mode::PlaneStrain,
            vec![FaceTraction::smooth(Face::Upper, s.clone())],
            1.0,
        )
        .unwrap();
        let d = lc.decompose();
        for x in [-2.9, -2.0, -1.3] {
            let f = s.eval(x);
            let m = d.mean.smooth_value(0, x).unwrap();
            let j = d.jump.smooth_value(0, x).unwrap();
            assert_eq!(m, [0.0, f[1] / 2.0]);
            assert_eq!(j, f);
            assert_eq!(d.reconstruct_smooth(Face::Upper, x).unwrap(), f);
            assert_eq!(d.reconstruct_smooth(Face::Lower, x).unwrap(), [0.0, 0.0]);
        }
    }

    #[test]
    fn balance_reports() {
        let r = LoadCase::three_point_case(1.0, 1.0, 0.5)
            .unwrap()
            .check_balance()
            .unwrap();
        assert!(r.balanced && r.force == [0.0, 0.0] && r.moment == 0.0);

        let single = LoadCase::unbalanced(
            Mode::PlaneStrain,
            vec![FaceTraction::point(Face::Upper, -1.0, [0.0, 2.5])],
            0.5,
        )
        .unwrap();
        let r = single.check_balance().unwrap();
        assert!(!r.balanced);
        assert_eq!(r.force, [0.0, 2.5]);

        let err = LoadCase::new(
            Mode::PlaneStrain,
            vec![FaceTraction::point(Face::Upper, -1.0, [0.0, 2.5])],
            0.5,
        )
        .unwrap_err();
        assert!(matches!(err, Error::Unbalanced { .. }));
    }

    #[test]
    fn gap_is_enforced() {
        let err = LoadCase::unbalanced(
            Mode::PlaneStrain,
            vec![FaceTraction::point(Face::Upper, -0.2, [0.0, 1.0])],
            0.5,
        );
        assert!(err.is_err());
        let s = SmoothTraction::bump(-1.0, -0.1, [1.0, 0.0]).unwrap();
        let err = LoadCase::unbalanced(
            Mode::PlaneStrain,
            vec![FaceTraction::smooth(Face::Upper, s)],
            0.5,
        );
        assert!(err.is_err());
    }

    #[test]
    fn bump_derivatives_match_finite_differences() {
        let s = SmoothTraction::bump(-4.0, -1.0, [0.7, -1.3]).unwrap();
        let h = 1e-5;
        for x in [-3.7, -2.5, -1.2] {
            for c in 0..2 {
                let fd1 = (s.eval(x + h)[c] - s.eval(x - h)[c]) / (2.0 * h);
                let fd2 = (s.eval(x + h)[c] - 2.0 * s.eval(x)[c] + s.eval(x - h)[c]) / (h * h);
                assert!((s.eval_derivative(1, x).unwrap()[c] - fd1).abs() < 1e-8);
                assert!((s.eval_derivative(2, x).unwrap()[c] - fd2).abs() < 1e-4);
            }
        }
    }

    #[test]
    fn shifting_moves_atoms_away_from_tip() {
        let lc = LoadCase::hutchinson_pair(1.0, 0.0, 2.0).unwrap();
        let moved = lc.shifted(0.5).unwrap();
        assert_eq!(moved.gap, 2.5);
        assert_eq!(atom_at(&moved.decompose().mean.atoms, -2.5), [0.0, -1.0]);
        assert!(lc.shifted(2.0).is_err());
    }

    #[test]
    fn radial_round_trip() {
        for x in [-0.3, -1.0, -17.25] {
            assert_eq!(from_radial(to_radial(x)), x);
        }
    }
}
