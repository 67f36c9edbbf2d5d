//! The JSON run configuration and its translation into library types.

use std::path::Path;

use serde::Deserialize;
use wfcrack::loading::{Face, FaceTraction, LoadCase, Mode, SmoothTraction};
use wfcrack::BimaterialParams;

use crate::CliError;

/// Either the four elastic constants, or η with μ₊ = 1 and μ₋ = (1 + η)/(1 − η).
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Materials {
    Constants(Constants),
    Eta(EtaMaterials),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Constants {
    pub mu_plus: f64,
    pub nu_plus: f64,
    pub mu_minus: f64,
    pub nu_minus: f64,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EtaMaterials {
    pub eta: f64,
    pub nu_plus: f64,
    pub nu_minus: f64,
}

impl Materials {
    pub fn params(&self) -> Result<BimaterialParams, CliError> {
        let p = match self {
            Materials::Constants(c) => {
                BimaterialParams::from_constants(c.mu_plus, c.nu_plus, c.mu_minus, c.nu_minus)
            }
            Materials::Eta(e) => BimaterialParams::from_eta(e.eta, e.nu_plus, e.nu_minus),
        };
        p.map_err(CliError::config)
    }

    pub fn poisson(&self) -> (f64, f64) {
        match self {
            Materials::Constants(c) => (c.nu_plus, c.nu_minus),
            Materials::Eta(e) => (e.nu_plus, e.nu_minus),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum ModeName {
    #[default]
    PlaneStrain,
    Antiplane,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceName {
    Upper,
    Lower,
}

/// One traction on one face. Components are [shear p₁, normal p₂]; antiplane loads use the first.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LoadSpec {
    Point {
        face: FaceName,
        x1: f64,
        value: [f64; 2],
    },
    /// Smooth C² bump on [lo, hi] with peak `amplitude`.
    Bump {
        face: FaceName,
        lo: f64,
        hi: f64,
        amplitude: [f64; 2],
    },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    pub tol: f64,
    /// Real part of the Mellin inversion contour, in (0, 1/2).
    pub omega: f64,
    /// Number of asymptotic groups for field evaluation, 1 to 5.
    pub terms: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            omega: wfcrack::fullfield::DEFAULT_OMEGA,
            terms: 3,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSpec {
    pub eta: Vec<f64>,
    pub grid: usize,
    pub b_max: f64,
    pub force: f64,
    pub a: f64,
}

impl Default for SweepSpec {
    fn default() -> Self {
        Self {
            eta: vec![-0.99, -0.5, 0.0, 0.5, 0.99],
            grid: 20,
            b_max: 0.95,
            force: 1.0,
            a: 1.0,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PerturbSpec {
    /// Advances as fractions of the tip gap.
    pub ladder: Vec<f64>,
}

impl Default for PerturbSpec {
    fn default() -> Self {
        Self {
            ladder: vec![1e-1, 1e-2, 1e-3, 1e-4],
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
pub enum FieldMethod {
    #[default]
    Series,
    Mellin,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FieldSpec {
    pub radii: Vec<f64>,
    pub angles: usize,
    pub method: FieldMethod,
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self {
            radii: vec![1e-3, 1e-2, 1e-1],
            angles: 9,
            method: FieldMethod::Series,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub materials: Materials,
    #[serde(default)]
    pub mode: ModeName,
    #[serde(default)]
    pub loads: Vec<LoadSpec>,
    /// Distance from the tip to the nearest load; defaults to that distance.
    pub gap: Option<f64>,
    /// Accept loads that are not self-balanced (only K is then meaningful).
    #[serde(default)]
    pub allow_unbalanced: bool,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub sweep: SweepSpec,
    #[serde(default)]
    pub perturb: PerturbSpec,
    #[serde(default)]
    pub field: FieldSpec,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| CliError::Config(format!("bad config: {e}")))?;
        if !(cfg.numerics.tol > 0.0) {
            return Err(CliError::Config("numerics.tol must be positive".into()));
        }
        Ok(cfg)
    }

    pub fn mode(&self) -> Mode {
        match self.mode {
            ModeName::PlaneStrain => Mode::PlaneStrain,
            ModeName::Antiplane => Mode::AntiPlane,
        }
    }

    pub fn load_case(&self) -> Result<LoadCase, CliError> {
        if self.loads.is_empty() {
            return Err(CliError::Config("no loads configured".into()));
        }
        let mut nearest = f64::INFINITY;
        let mut tractions = Vec::with_capacity(self.loads.len());
        for spec in &self.loads {
            let t = match *spec {
                LoadSpec::Point { face, x1, value } => {
                    nearest = nearest.min(-x1);
                    FaceTraction::point(face.into(), x1, value)
                }
                LoadSpec::Bump {
                    face,
                    lo,
                    hi,
                    amplitude,
                } => {
                    nearest = nearest.min(-hi);
                    let bump = SmoothTraction::bump(lo, hi, amplitude).map_err(CliError::config)?;
                    FaceTraction::smooth(face.into(), bump)
                }
            };
            tractions.push(t);
        }
        let gap = self.gap.unwrap_or(nearest);
        let lc = if self.allow_unbalanced {
            LoadCase::unbalanced(self.mode(), tractions, gap)
        } else {
            LoadCase::new(self.mode(), tractions, gap)
        };
        lc.map_err(CliError::config)
    }
}

impl From<FaceName> for Face {
    fn from(f: FaceName) -> Self {
        match f {
            FaceName::Upper => Face::Upper,
            FaceName::Lower => Face::Lower,
        }
    }
}
