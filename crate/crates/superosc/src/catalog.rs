//! Named waveform catalog.
//!
//! Each entry is one family of bandlimited functions behind the
//! [`CatalogFunction`] trait: it validates its parameters, declares its band
//! edge, evaluates itself (and its derivative), and optionally exposes an
//! exact trigonometric-polynomial form. Entries are registered by name in a
//! [`CatalogRegistry`] and selected at runtime from the expression language
//! (`g(2, 10)`, `hs(0.5, 1)`, ...).

use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use crate::function::CompileError;
use crate::special;
use crate::trigpoly::TrigPolynomial;

/// A named waveform family with validated parameters.
pub trait CatalogFunction: Send + Sync {
    fn name(&self) -> &'static str;

    /// Human-readable call shape, e.g. `g(a, N)`.
    fn signature(&self) -> &'static str;

    fn param_names(&self) -> &'static [&'static str];

    /// Band edge as a formula over the parameters, for listings.
    fn band_edge_formula(&self) -> &'static str;

    fn summary(&self) -> &'static str;

    fn validate(&self, params: &[f64]) -> Result<(), CompileError>;

    /// Upper bound on the Fourier support, `[-B, B]`. Only meaningful after
    /// `validate` accepted the parameters.
    fn band_edge(&self, params: &[f64]) -> f64;

    fn real_valued(&self, params: &[f64]) -> bool;

    /// Point evaluation. Failures surface as non-finite components and are
    /// converted to errors by the compiled-function layer.
    fn eval(&self, params: &[f64], x: f64) -> Complex64;

    fn derivative(&self, params: &[f64], x: f64) -> Complex64;

    /// Exact finite trigonometric-polynomial form, when one exists.
    fn trig_polynomial(&self, _params: &[f64]) -> Option<TrigPolynomial> {
        None
    }
}

/// Name-indexed collection of catalog entries.
pub struct CatalogRegistry {
    entries: Vec<Arc<dyn CatalogFunction>>,
}

impl CatalogRegistry {
    pub fn empty() -> Self {
        CatalogRegistry {
            entries: Vec::new(),
        }
    }

    /// The built-in catalog: `g`, `F`, `G`, `h`, `hs`.
    pub fn builtin() -> Self {
        let mut r = CatalogRegistry::empty();
        r.register(Arc::new(PowerWave));
        r.register(Arc::new(ErfWave));
        r.register(Arc::new(CubicSincWave));
        r.register(Arc::new(CosineProduct));
        r.register(Arc::new(ShiftedCosineSquared));
        r
    }

    /// Insert an entry, replacing any existing entry of the same name.
    pub fn register(&mut self, entry: Arc<dyn CatalogFunction>) {
        self.entries.retain(|e| e.name() != entry.name());
        self.entries.push(entry);
    }

    pub fn lookup(&self, name: &str) -> Option<&Arc<dyn CatalogFunction>> {
        self.entries.iter().find(|e| e.name() == name)
    }

    pub fn entries(&self) -> &[Arc<dyn CatalogFunction>] {
        &self.entries
    }
}

/// Shared registry used by [`crate::expr::parse`] and [`crate::function::compile`].
pub fn default_registry() -> &'static CatalogRegistry {
    static REGISTRY: OnceLock<CatalogRegistry> = OnceLock::new();
    REGISTRY.get_or_init(CatalogRegistry::builtin)
}

fn require_integer(name: &str, param: &str, v: f64) -> Result<i64, CompileError> {
    if (v - v.round()).abs() <= 1e-9 && v.abs() < 9e15 {
        Ok(v.round() as i64)
    } else {
        Err(CompileError::InvalidCatalogParams {
            name: name.into(),
            reason: format!("{param} must be an integer, got {v}"),
        })
    }
}

/// Five-point central difference with one Richardson refinement, for entries
/// without a closed-form derivative. Step per the shared numerics policy:
/// `h = max(1e-3, 1e-3 |x|)`.
fn numeric_derivative(f: impl Fn(f64) -> Complex64, x: f64) -> Complex64 {
    let h = 1e-3_f64.max(1e-3 * x.abs());
    let stencil = |h: f64| -> Complex64 {
        (f(x - 2.0 * h) - f(x - h) * 8.0 + f(x + h) * 8.0 - f(x + 2.0 * h)) / (12.0 * h)
    };
    let coarse = stencil(h);
    let fine = stencil(h / 2.0);
    (fine * 16.0 - coarse) / 15.0
}

/// `g(a, N) = [cos(x/N) + i a sin(x/N)]^N`: bandlimited to `[-1, 1]`, tracks
/// `e^{iax}` near the origin. Evaluated in polar form so large `N` neither
/// overflows nor loses the phase.
struct PowerWave;

impl PowerWave {
    fn base_power(a: f64, n: f64, x: f64, exponent: f64) -> Complex64 {
        let t = x / n;
        let (s, c) = t.sin_cos();
        let r2 = c * c + (a * s) * (a * s);
        let theta = (a * s).atan2(c);
        if r2 == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Complex64::from_polar((0.5 * exponent * r2.ln()).exp(), exponent * theta)
    }
}

impl CatalogFunction for PowerWave {
    fn name(&self) -> &'static str {
        "g"
    }
    fn signature(&self) -> &'static str {
        "g(a, N)"
    }
    fn param_names(&self) -> &'static [&'static str] {
        &["a", "N"]
    }
    fn band_edge_formula(&self) -> &'static str {
        "1"
    }
    fn summary(&self) -> &'static str {
        "near-monochromatic power wave [cos(x/N) + i*a*sin(x/N)]^N; oscillates like e^{iax} around x = 0"
    }
    fn validate(&self, params: &[f64]) -> Result<(), CompileError> {
        let n = require_integer("g", "N", params[1])?;
        if n < 1 {
            return Err(CompileError::InvalidCatalogParams {
                name: "g".into(),
                reason: format!("N must be >= 1, got {n}"),
            });
        }
        Ok(())
    }
    fn band_edge(&self, _params: &[f64]) -> f64 {
        1.0
    }
    fn real_valued(&self, _params: &[f64]) -> bool {
        false
    }
    fn eval(&self, params: &[f64], x: f64) -> Complex64 {
        let (a, n) = (params[0], params[1].round());
        Self::base_power(a, n, x, n)
    }
    fn derivative(&self, params: &[f64], x: f64) -> Complex64 {
        // d/dx base^N = base^{N-1} * (-sin(x/N) + i a cos(x/N))
        let (a, n) = (params[0], params[1].round());
        let t = x / n;
        let (s, c) = t.sin_cos();
        Self::base_power(a, n, x, n - 1.0) * Complex64::new(-s, a * c)
    }
}

/// `F(A, delta)`: erf-based wave packet, bandlimited to `[-1, 1]`.
struct ErfWave;

impl ErfWave {
    fn value(a: f64, delta: f64, x: f64) -> Complex64 {
        let i = Complex64::new(0.0, 1.0);
        let d2x = delta * delta * x;
        let den = delta * (Complex64::new(2.0, 2.0 * d2x)).sqrt();
        let zp = (i * a + Complex64::new(2.0, 2.0 * d2x)) / den;
        let zm = (-i * a + Complex64::new(2.0, 2.0 * d2x)) / den;
        let pre = (special::erf(zp) + special::erf(zm))
            / (Complex64::new(1.0, d2x).sqrt() * 2.0);
        let arg = i * x * Complex64::new(a * a + 2.0, 2.0 * d2x)
            / (Complex64::new(1.0, d2x) * 2.0);
        pre * arg.exp()
    }
}

impl CatalogFunction for ErfWave {
    fn name(&self) -> &'static str {
        "F"
    }
    fn signature(&self) -> &'static str {
        "F(A, delta)"
    }
    fn param_names(&self) -> &'static [&'static str] {
        &["A", "delta"]
    }
    fn band_edge_formula(&self) -> &'static str {
        "1"
    }
    fn summary(&self) -> &'static str {
        "error-function wave packet; oscillates faster than its band edge around x = 0"
    }
    fn validate(&self, params: &[f64]) -> Result<(), CompileError> {
        if !(params[1] > 0.0) {
            return Err(CompileError::InvalidCatalogParams {
                name: "F".into(),
                reason: format!("delta must be > 0, got {}", params[1]),
            });
        }
        Ok(())
    }
    fn band_edge(&self, _params: &[f64]) -> f64 {
        1.0
    }
    fn real_valued(&self, _params: &[f64]) -> bool {
        false
    }
    fn eval(&self, params: &[f64], x: f64) -> Complex64 {
        Self::value(params[0], params[1], x)
    }
    fn derivative(&self, params: &[f64], x: f64) -> Complex64 {
        let (a, delta) = (params[0], params[1]);
        numeric_derivative(|t| Self::value(a, delta, t), x)
    }
}

/// `G(s, D) = (3 sqrt 3 / 2) (x^3/s^3 - x/s) sinc(x/(4D))^4`: odd, real,
/// bandlimited to `[-1/D, 1/D]`; accepted only for `D >= 1` so the declared
/// band edge 1 is valid.
struct CubicSincWave;

impl CubicSincWave {
    fn value(s: f64, d: f64, x: f64) -> f64 {
        let poly = (x * x * x) / (s * s * s) - x / s;
        1.5 * 3.0_f64.sqrt() * poly * special::sinc(x / (4.0 * d)).powi(4)
    }
}

impl CatalogFunction for CubicSincWave {
    fn name(&self) -> &'static str {
        "G"
    }
    fn signature(&self) -> &'static str {
        "G(s, D)"
    }
    fn param_names(&self) -> &'static [&'static str] {
        &["s", "D"]
    }
    fn band_edge_formula(&self) -> &'static str {
        "1"
    }
    fn summary(&self) -> &'static str {
        "odd cubic under a sinc^4 envelope; oscillates like -sin(3x/s)/|...| near x = 0"
    }
    fn validate(&self, params: &[f64]) -> Result<(), CompileError> {
        if params[0] == 0.0 {
            return Err(CompileError::InvalidCatalogParams {
                name: "G".into(),
                reason: "s must be nonzero".into(),
            });
        }
        if !(params[1] >= 1.0) {
            return Err(CompileError::InvalidCatalogParams {
                name: "G".into(),
                reason: format!("D must be >= 1 (band edge 1 is only valid there), got {}", params[1]),
            });
        }
        Ok(())
    }
    fn band_edge(&self, _params: &[f64]) -> f64 {
        1.0
    }
    fn real_valued(&self, _params: &[f64]) -> bool {
        true
    }
    fn eval(&self, params: &[f64], x: f64) -> Complex64 {
        Complex64::new(Self::value(params[0], params[1], x), 0.0)
    }
    fn derivative(&self, params: &[f64], x: f64) -> Complex64 {
        let (s, d) = (params[0], params[1]);
        numeric_derivative(|t| Complex64::new(Self::value(s, d, t), 0.0), x)
    }
}

/// `h(m, n) = cos(m x) cos(n x)`, integers `m`, `n`; bandlimited to
/// `[-(|m|+|n|), |m|+|n|]`.
struct CosineProduct;

impl CatalogFunction for CosineProduct {
    fn name(&self) -> &'static str {
        "h"
    }
    fn signature(&self) -> &'static str {
        "h(m, n)"
    }
    fn param_names(&self) -> &'static [&'static str] {
        &["m", "n"]
    }
    fn band_edge_formula(&self) -> &'static str {
        "|m|+|n|"
    }
    fn summary(&self) -> &'static str {
        "product of cosines cos(m*x)*cos(n*x)"
    }
    fn validate(&self, params: &[f64]) -> Result<(), CompileError> {
        require_integer("h", "m", params[0])?;
        require_integer("h", "n", params[1])?;
        Ok(())
    }
    fn band_edge(&self, params: &[f64]) -> f64 {
        params[0].round().abs() + params[1].round().abs()
    }
    fn real_valued(&self, _params: &[f64]) -> bool {
        true
    }
    fn eval(&self, params: &[f64], x: f64) -> Complex64 {
        let (m, n) = (params[0].round(), params[1].round());
        Complex64::new((m * x).cos() * (n * x).cos(), 0.0)
    }
    fn derivative(&self, params: &[f64], x: f64) -> Complex64 {
        let (m, n) = (params[0].round(), params[1].round());
        Complex64::new(
            -m * (m * x).sin() * (n * x).cos() - n * (m * x).cos() * (n * x).sin(),
            0.0,
        )
    }
    fn trig_polynomial(&self, params: &[f64]) -> Option<TrigPolynomial> {
        let (m, n) = (params[0].round(), params[1].round());
        // cos(mx) cos(nx) = cos((m+n)x)/2 + cos((m-n)x)/2
        Some(TrigPolynomial::from_terms(
            0.0,
            [(m + n, 0.5, 0.0), (m - n, 0.5, 0.0)],
        ))
    }
}

/// `hs(s, m) = (cos(m x) - s)^2` for `0 < s < 1`, integer `m >= 1`;
/// bandlimited to `[-2m, 2m]`.
struct ShiftedCosineSquared;

impl CatalogFunction for ShiftedCosineSquared {
    fn name(&self) -> &'static str {
        "hs"
    }
    fn signature(&self) -> &'static str {
        "hs(s, m)"
    }
    fn param_names(&self) -> &'static [&'static str] {
        &["s", "m"]
    }
    fn band_edge_formula(&self) -> &'static str {
        "2m"
    }
    fn summary(&self) -> &'static str {
        "shifted cosine squared (cos(m*x) - s)^2"
    }
    fn validate(&self, params: &[f64]) -> Result<(), CompileError> {
        if !(params[0] > 0.0 && params[0] < 1.0) {
            return Err(CompileError::InvalidCatalogParams {
                name: "hs".into(),
                reason: format!("s must satisfy 0 < s < 1, got {}", params[0]),
            });
        }
        let m = require_integer("hs", "m", params[1])?;
        if m < 1 {
            return Err(CompileError::InvalidCatalogParams {
                name: "hs".into(),
                reason: format!("m must be >= 1, got {m}"),
            });
        }
        Ok(())
    }
    fn band_edge(&self, params: &[f64]) -> f64 {
        2.0 * params[1].round()
    }
    fn real_valued(&self, _params: &[f64]) -> bool {
        true
    }
    fn eval(&self, params: &[f64], x: f64) -> Complex64 {
        let (s, m) = (params[0], params[1].round());
        let v = (m * x).cos() - s;
        Complex64::new(v * v, 0.0)
    }
    fn derivative(&self, params: &[f64], x: f64) -> Complex64 {
        let (s, m) = (params[0], params[1].round());
        Complex64::new(-2.0 * m * (m * x).sin() * ((m * x).cos() - s), 0.0)
    }
    fn trig_polynomial(&self, params: &[f64]) -> Option<TrigPolynomial> {
        let (s, m) = (params[0], params[1].round());
        // (cos(mx) - s)^2 = (1/2 + s^2) - 2s cos(mx) + cos(2mx)/2
        Some(TrigPolynomial::from_terms(
            0.5 + s * s,
            [(m, -2.0 * s, 0.0), (2.0 * m, 0.5, 0.0)],
        ))
    }
}
