//! Globally adaptive Gauss–Kronrod (10/21) integration for real-, complex- and
//! vector-valued integrands, plus the weakly singular kernel t^σ·t^{iε}.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::special::real_pow;

/// Values that can be accumulated by the integrator.
pub trait QuadValue: Copy {
    fn zero() -> Self;
    fn add(self, other: Self) -> Self;
    fn scale(self, k: f64) -> Self;
    /// Max-norm, used for error control.
    fn magnitude(self) -> f64;
    /// Complex view used only for diagnostics in [`Error::NoConvergence`].
    fn summary(self) -> Complex64;
}

// Unlike f64::max, lets NaN through so non-finite integrands are caught.
fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
    fn summary(self) -> Complex64 {
        Complex64::new(self, 0.0)
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn add(self, other: Self) -> Self {
        self + other
    }
    fn scale(self, k: f64) -> Self {
        self * k
    }
    fn magnitude(self) -> f64 {
        nan_max(self.re.abs(), self.im.abs())
    }
    fn summary(self) -> Complex64 {
        self
    }
}

impl<T: QuadValue, const N: usize> QuadValue for [T; N] {
    fn zero() -> Self {
        [T::zero(); N]
    }
    fn add(mut self, other: Self) -> Self {
        for (a, b) in self.iter_mut().zip(other) {
            *a = a.add(b);
        }
        self
    }
    fn scale(mut self, k: f64) -> Self {
        for a in self.iter_mut() {
            *a = a.scale(k);
        }
        self
    }
    fn magnitude(self) -> f64 {
        self.iter().map(|z| z.magnitude()).fold(0.0, nan_max)
    }
    fn summary(self) -> Complex64 {
        self.first()
            .map_or(Complex64::new(0.0, 0.0), |z| z.summary())
    }
}

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature<V> {
    pub value: V,
    pub error: f64,
}

/// Stopping rule: stop once error ≤ max(rel_tol·|value|, abs_tol).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadOptions {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum number of bisections of any initial panel.
    pub max_depth: u32,
    /// Cap on live panels; bounds the work when the tolerance sits below rounding.
    pub max_panels: usize,
}

impl QuadOptions {
    pub fn new(rel_tol: f64) -> Self {
        Self {
            rel_tol,
            ..Self::default()
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_max_depth(mut self, max_depth: u32) -> Self {
        self.max_depth = max_depth;
        self
    }

    pub fn with_max_panels(mut self, max_panels: usize) -> Self {
        self.max_panels = max_panels;
        self
    }
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-300,
            max_depth: 50,
            max_panels: 5000,
        }
    }
}

// Kronrod abscissae on [0, 1]; odd indices are the 10-point Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_600_525_706_139,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// One Gauss–Kronrod 10/21 panel: (Kronrod estimate, |Kronrod − Gauss|).
pub fn gauss_kronrod_21<V: QuadValue>(f: &impl Fn(f64) -> V, a: f64, b: f64) -> (V, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc.scale(WGK[10]);
    let mut gauss = V::zero();
    for k in 0..10 {
        let dx = half * XGK[k];
        let pair = f(center - dx).add(f(center + dx));
        kronrod = kronrod.add(pair.scale(WGK[k]));
        if k % 2 == 1 {
            gauss = gauss.add(pair.scale(WG[k / 2]));
        }
    }
    let kronrod = kronrod.scale(half);
    let gauss = gauss.scale(half);
    let err = kronrod.add(gauss.scale(-1.0)).magnitude();
    (kronrod, err)
}

struct Panel<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
    depth: u32,
}

impl<V> PartialEq for Panel<V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<V> Eq for Panel<V> {}
impl<V> PartialOrd for Panel<V> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Panel<V> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn non_finite_check<V: QuadValue>(v: V, a: f64, b: f64) -> Result<()> {
    if v.magnitude().is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "integrand is not finite on [{a}, {b}]"
        )))
    }
}

/// ∫ f over [lo, hi].
pub fn integrate<V: QuadValue>(
    f: impl Fn(f64) -> V,
    lo: f64,
    hi: f64,
    opts: &QuadOptions,
) -> Result<Quadrature<V>> {
    integrate_partition(f, &[lo, hi], opts)
}

/// ∫ f over [points[0], points[last]], seeded with one panel per consecutive pair.
///
/// Breakpoints let callers place panel edges at known kinks or oscillation scales.
pub fn integrate_partition<V: QuadValue>(
    f: impl Fn(f64) -> V,
    points: &[f64],
    opts: &QuadOptions,
) -> Result<Quadrature<V>> {
    if points.len() < 2 || points.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain(
            "integration needs at least two finite breakpoints".into(),
        ));
    }
    let mut heap = BinaryHeap::with_capacity(4 * points.len());
    let mut total = V::zero();
    let mut total_err = 0.0;
    // Panels that may not be split further; their error is kept in the total.
    let mut frozen_err = 0.0;
    for w in points.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let (value, error) = gauss_kronrod_21(&f, w[0], w[1]);
        non_finite_check(value, w[0], w[1])?;
        total = total.add(value);
        total_err += error;
        heap.push(Panel {
            a: w[0],
            b: w[1],
            value,
            error,
            depth: 0,
        });
    }

    loop {
        let target = (opts.rel_tol * total.magnitude()).max(opts.abs_tol);
        if total_err <= target {
            return Ok(Quadrature {
                value: total,
                error: total_err,
            });
        }
        if heap.len() >= opts.max_panels {
            break;
        }
        let Some(worst) = heap.pop() else {
            break;
        };
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= opts.max_depth || mid <= worst.a || mid >= worst.b {
            frozen_err += worst.error;
            if heap.is_empty() {
                break;
            }
            continue;
        }
        let (v1, e1) = gauss_kronrod_21(&f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_21(&f, mid, worst.b);
        non_finite_check(v1, worst.a, mid)?;
        non_finite_check(v2, mid, worst.b)?;
        total = total.add(worst.value.scale(-1.0)).add(v1).add(v2);
        total_err += e1 + e2 - worst.error;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: v1,
            error: e1,
            depth: worst.depth + 1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: v2,
            error: e2,
            depth: worst.depth + 1,
        });
    }

    // Re-sum to shed accumulated cancellation in the running total.
    let value = heap
        .into_iter()
        .fold(total.scale(0.0), |acc, p| acc.add(p.value));
    let value = if value.magnitude() > 0.0 {
        value
    } else {
        total
    };
    let target = (opts.rel_tol * value.magnitude()).max(opts.abs_tol);
    if total_err <= target {
        return Ok(Quadrature {
            value: total,
            error: total_err,
        });
    }
    Err(Error::NoConvergence {
        estimate: total.summary(),
        achieved: total_err.max(frozen_err),
        requested: target,
    })
}

/// ∫_lo^hi g(t)·t^σ·t^{iε} dt with an algebraic endpoint singularity allowed at 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec {
    pub sigma: f64,
    pub eps: f64,
    pub lo: f64,
    pub hi: f64,
    /// Relative tolerance.
    pub tol: f64,
    /// Absolute floor under the relative tolerance.
    pub abs_tol: f64,
    pub max_depth: u32,
}

impl QuadSpec {
    pub fn new(sigma: f64, eps: f64, lo: f64, hi: f64) -> Self {
        Self {
            sigma,
            eps,
            lo,
            hi,
            tol: 1e-10,
            abs_tol: 1e-15,
            max_depth: 50,
        }
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

/// Integrate g(t)·t^{σ+iε} over [lo, hi].
///
/// For lo = 0 the substitution t = u^p with p = 1/(1+σ) turns t^σ dt into p du,
/// leaving only the bounded phase u^{ipε}. The phase |ε ln t| is small for
/// physical materials, so plain adaptive bisection handles it.
pub fn integrate_singular(
    g: impl Fn(f64) -> Complex64,
    spec: &QuadSpec,
) -> Result<Quadrature<Complex64>> {
    if !(spec.lo >= 0.0 && spec.hi > spec.lo && spec.hi.is_finite()) {
        return Err(Error::Domain(format!(
            "need 0 <= lo < hi < inf, got [{}, {}]",
            spec.lo, spec.hi
        )));
    }
    if !(spec.tol > 0.0) {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let opts = QuadOptions {
        rel_tol: spec.tol,
        abs_tol: spec.abs_tol,
        max_depth: spec.max_depth,
        ..QuadOptions::default()
    };
    let expo = Complex64::new(spec.sigma, spec.eps);
    if spec.lo > 0.0 {
        return integrate(|t| g(t) * real_pow(t, expo), spec.lo, spec.hi, &opts);
    }
    if !(spec.sigma > -1.0) {
        return Err(Error::Domain(format!(
            "t^{} is not integrable at 0",
            spec.sigma
        )));
    }
    let p = 1.0 / (1.0 + spec.sigma);
    let phase = Complex64::new(0.0, p * spec.eps);
    let upper = spec.hi.powf(1.0 / p);
    integrate(|u| g(u.powf(p)) * real_pow(u, phase) * p, 0.0, upper, &opts)
}
