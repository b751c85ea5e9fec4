//! Shared numerical kernels: adaptive quadrature, discrete sine/cosine
//! projections, and bracketing root/extremum location.
//!
//! Everything here is pure: kernels take value/derivative closures (or a
//! compiled function) and immutable options, so calls are independent and
//! thread-safe.

mod modes;
mod quadrature;
mod roots;

pub use modes::{project_modes, ModeProjection};
pub use quadrature::integrate;
pub use roots::{find_extrema, find_roots, RootKind, RootList, RootPoint};

use thiserror::Error;

use crate::function::EvalError;

/// A nonempty closed interval `[b1, b2]`, `b1 < b2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    b1: f64,
    b2: f64,
}

impl Interval {
    pub fn new(b1: f64, b2: f64) -> Result<Self, NumericsError> {
        if b1.is_finite() && b2.is_finite() && b1 < b2 {
            Ok(Interval { b1, b2 })
        } else {
            Err(NumericsError::EmptyRange { b1, b2 })
        }
    }

    pub fn lower(&self) -> f64 {
        self.b1
    }

    pub fn upper(&self) -> f64 {
        self.b2
    }

    pub fn length(&self) -> f64 {
        self.b2 - self.b1
    }

    pub fn contains(&self, x: f64) -> bool {
        self.b1 <= x && x <= self.b2
    }

    /// Containment with a symmetric tolerance on both endpoints.
    pub fn contains_within(&self, other: &Interval, tol: f64) -> bool {
        self.b1 - tol <= other.b1 && other.b2 <= self.b2 + tol
    }
}

/// Which local Fourier family an operation targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    /// Modes `sin(pi k (x - b1) / L)`, `k >= 1`.
    Sine,
    /// Modes `cos(pi k (x - b1) / L)`, `k >= 0`.
    Cosine,
}

impl Parity {
    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Sine => "sine",
            Parity::Cosine => "cosine",
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq)]
pub enum NumericsError {
    #[error("empty or invalid range [{b1}, {b2}]")]
    EmptyRange { b1: f64, b2: f64 },
    #[error("scan step {step} exceeds the range length {length}")]
    StepTooLarge { step: f64, length: f64 },
    #[error(
        "adaptive quadrature did not reach tolerance {tol:e} after {subdivisions} subdivisions (error estimate {err_est:e})"
    )]
    MaxSubdivisions {
        tol: f64,
        err_est: f64,
        subdivisions: usize,
    },
    #[error(
        "discrete transform disagrees with adaptive quadrature on mode {k}: {transform} vs {quadrature}"
    )]
    CrossValidation {
        k: usize,
        transform: f64,
        quadrature: f64,
    },
    #[error(transparent)]
    Eval(#[from] EvalError),
}
