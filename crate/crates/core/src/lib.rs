//! Weight functions, complex stress intensity factors and higher-order tip
//! coefficients for a crack on the interface of two isotropic elastic half-planes.
//!
//! The crack occupies x₁ < 0 on x₂ = 0, material "+" is above. Loads are face
//! tractions given in `loading`; all coefficients follow the convention
//! σ₂₂ + iσ₁₂ ~ K(2πr)^{−1/2} r^{iε} ahead of the tip.
//!
//! Three independent routes to K, A, B are provided and cross-checked in the tests:
//! closed-form load moments (`sif`), reciprocity with the weight functions
//! (`weights` + `sif::sif_quadrature`), and residues of the Mellin solution
//! (`fullfield`).

// `!(x > 0.0)` is used on purpose throughout: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fullfield;
pub mod loading;
pub mod materials;
pub mod matrix;
pub mod perturb;
pub mod quadrature;
pub mod sif;
pub mod special;
pub mod weights;

pub use error::{Error, Result};
pub use fullfield::{field_asymptotics, mellin_inverse, tip_expansion, FieldSample, TipExpansion};
pub use loading::{Face, FaceTraction, LoadCase, Mode, SmoothTraction};
pub use materials::{BimaterialParams, ElasticHalfPlane};
pub use perturb::{advance_sif, first_order, tauberian_probe, AdvanceResult};
pub use sif::{mode3_sif, sif_closed_form, sif_quadrature, TipCoefficients};
pub use weights::WeightFunctions;
