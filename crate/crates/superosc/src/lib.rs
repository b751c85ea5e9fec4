//! Detection and quantification of superoscillations in bandlimited functions.
//!
//! A real-valued function bandlimited to `[-B, B]` can locally oscillate faster
//! than its fastest Fourier component. This crate decides whether that happens
//! in a given interval and by how much, using local Fourier spectra:
//!
//! * the **sine criterion** tests intervals whose endpoints are zeros of
//!   `f - c`, measuring the energy fraction `Q_sin` of local sine modes above
//!   the band edge;
//! * the **cosine criterion** tests intervals whose endpoints are critical
//!   points of `f`, measuring the analogous `Q_cos` with the zero mode
//!   excluded;
//! * an interval is declared superoscillating when nested witness intervals
//!   `I1 ⊆ I ⊆ I2` both pass the applicable criterion (`criteria::classify_definition`);
//! * the rival local-wavenumber definition (`wavenumber`) is implemented
//!   exactly on trigonometric polynomials to exhibit the cases it misses.
//!
//! Functions are built from a small expression language (`expr::parse`) over
//! certifiably bandlimited constructs plus a registry of named waveforms
//! (`catalog`), compiled into evaluatable [`BandlimitedFunction`]s with a
//! certified band edge.

pub mod catalog;
pub mod criteria;
pub mod expr;
pub mod function;
pub mod numerics;
pub mod scanner;
pub mod special;
pub mod trigpoly;
pub mod wavenumber;

pub use catalog::{default_registry, CatalogFunction, CatalogRegistry};
pub use expr::{parse, parse_with, FunctionExpr, ParseError};
pub use function::{
    compile, compile_with, sequence_distance, BandlimitedFunction, CompileError, EvalError,
};
pub use numerics::{Interval, NumericsError, Parity};
pub use trigpoly::TrigPolynomial;
