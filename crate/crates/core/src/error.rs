use num_complex::Complex64;
use thiserror::Error;

/// Errors raised by the crack-mechanics routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid elastic constants: {0}")]
    InvalidMaterial(String),

    #[error("argument outside the domain of definition: {0}")]
    Domain(String),

    #[error("evaluation at a pole of {what} (s = {s})")]
    Pole { what: &'static str, s: Complex64 },

    #[error("load case is not self-balanced (force residual [{force:e}, {force_normal:e}], moment residual {moment:e})")]
    Unbalanced {
        force: f64,
        force_normal: f64,
        moment: f64,
    },

    #[error("numerical integration did not converge: estimate {estimate}, achieved error {achieved:e}, requested {requested:e}")]
    NoConvergence {
        estimate: Complex64,
        achieved: f64,
        requested: f64,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
