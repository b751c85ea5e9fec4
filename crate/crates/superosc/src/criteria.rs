//! The sine and cosine superoscillation criteria, the `Q` quantifiers, and
//! the interval-sandwich classification.
//!
//! For a real-valued `f` bandlimited to `[-B, B]` (so `W = B/pi`) and an
//! interval `I = [b1, b2]` of length `L`:
//!
//! * `k0` is the smallest integer strictly greater than `W L` — the first
//!   local mode whose frequency exceeds the band edge;
//! * the sine criterion applies when `f(b1) = f(b2) = c` and measures
//!   `Q = sqrt(sum_{k>=k0} a_k^2 / sum_{k>=1} a_k^2)` over the local sine
//!   coefficients around `y = c`;
//! * the cosine criterion applies when `f'(b1) = f'(b2) = 0` and measures the
//!   same ratio over the local cosine coefficients, with the vertical-offset
//!   mode `k = 0` stored but excluded;
//! * `f` superoscillates (around `y = c`) in a target interval `I` when
//!   nested admissible intervals `I1 ⊆ I ⊆ I2` both pass the criterion.
//!
//! `Q > 1/2` is the default pass threshold and the 2-norm the default weight;
//! both are configurable in [`QConfig`].

use std::f64::consts::PI;

use thiserror::Error;

use crate::function::{BandlimitedFunction, CompileError, EvalError};
use crate::numerics::{
    find_extrema, find_roots, project_modes, Interval, ModeProjection, NumericsError, Parity,
};

/// Trailing-block size for the mode-truncation rule.
const TRAILING_BLOCK: usize = 16;
/// The trailing block must hold less than this fraction of the total energy.
const TRAILING_LIMIT: f64 = 1e-10;

/// Tunable criterion parameters; defaults follow the artifact conventions.
#[derive(Debug, Clone)]
pub struct QConfig {
    /// Pass threshold for `Q` (strict inequality).
    pub threshold: f64,
    /// Norm exponent `p` in the mode-weight sums.
    pub norm_exponent: f64,
    /// Absolute tolerance of cross-validation and oracle quadrature.
    pub quad_tol: f64,
    /// Hard cap on the number of local modes.
    pub kmax_cap: usize,
    /// Endpoint admissibility: `|f(b) - c|` (sine) or `|f'(b)|` (cosine)
    /// must not exceed `endpoint_tol * max(1, max|f| on I)`.
    pub endpoint_tol: f64,
    /// Root-scan grid step; `None` selects `pi / (64 * band_edge)`.
    pub scan_step: Option<f64>,
}

impl Default for QConfig {
    fn default() -> Self {
        QConfig {
            threshold: 0.5,
            norm_exponent: 2.0,
            quad_tol: 1e-10,
            kmax_cap: 4096,
            endpoint_tol: 1e-9,
            scan_step: None,
        }
    }
}

impl QConfig {
    /// Default scan step for a band edge: superoscillations are locally
    /// faster than `B`, so the grid goes well below the band-edge period.
    pub fn step_for(&self, band_edge: f64) -> f64 {
        self.scan_step
            .unwrap_or_else(|| PI / (64.0 * band_edge.max(0.05)))
    }
}

#[derive(Debug, Clone, Error)]
pub enum CriteriaError {
    #[error("`{label}` is not real-valued; the criteria apply to real functions")]
    NotRealValued { label: String },
    #[error(
        "interval endpoints are not admissible for the {} criterion: residuals ({residual_lo:e}, {residual_hi:e}) exceed {tolerance:e}",
        parity.as_str()
    )]
    InvalidEndpoints {
        parity: Parity,
        residual_lo: f64,
        residual_hi: f64,
        tolerance: f64,
    },
    #[error("Q is undefined on this interval: the local spectrum is identically flat")]
    UndefinedQ,
    #[error("no admissible endpoints found in the search window [{lo}, {hi}]")]
    NoAdmissibleEndpoints { lo: f64, hi: f64 },
    #[error("anchor {anchor} is not admissible: residual {residual:e} exceeds {tolerance:e}")]
    AnchorNotAdmissible {
        anchor: f64,
        residual: f64,
        tolerance: f64,
    },
    #[error("search window [{wlo}, {whi}] does not contain the target [{tlo}, {thi}]")]
    WindowDoesNotCoverTarget {
        wlo: f64,
        whi: f64,
        tlo: f64,
        thi: f64,
    },
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Compile(#[from] CompileError),
}

/// Local sine or cosine spectrum of `f` over an interval.
#[derive(Debug, Clone)]
pub struct LocalSpectrum {
    pub parity: Parity,
    pub interval: Interval,
    /// Reference level `c`; zero in cosine mode.
    pub reference_level: f64,
    /// `coefficients[i]` is `a_{i+1}` (sine) or `a_i` (cosine).
    pub coefficients: Vec<f64>,
    pub k0: usize,
    pub k_max: usize,
    /// Energy fraction of the trailing 16-mode block.
    pub truncation_ratio: f64,
    /// Set when the mode cap was reached before the tail converged.
    pub truncated: bool,
    /// `(|f(b1) - c|, |f(b2) - c|)` for sine, `(|f'(b1)|, |f'(b2)|)` for cosine.
    pub endpoint_residuals: (f64, f64),
    /// `max |f|` over the sample grid.
    pub f_scale: f64,
}

impl LocalSpectrum {
    pub fn coeff(&self, k: usize) -> f64 {
        match self.parity {
            Parity::Sine => self.coefficients[k - 1],
            Parity::Cosine => self.coefficients[k],
        }
    }

    pub fn first_index(&self) -> usize {
        match self.parity {
            Parity::Sine => 1,
            Parity::Cosine => 0,
        }
    }
}

/// Verdict of one criterion application.
#[derive(Debug, Clone)]
pub struct QReport {
    pub parity: Parity,
    pub q: f64,
    pub k0: usize,
    pub passes: bool,
    pub valid_endpoints: bool,
    pub spectrum: LocalSpectrum,
}

/// Outcome of the interval-sandwich classification.
#[derive(Debug, Clone)]
pub struct DefinitionVerdict {
    pub target: Interval,
    pub parity: Parity,
    pub reference_level: f64,
    pub inner: Option<Interval>,
    pub outer: Option<Interval>,
    pub superoscillating: bool,
    pub search_window: Interval,
}

/// Smallest integer `k0` with `k0 > (B/pi) * L`, honoring the strict
/// inequality when `(B/pi) * L` sits within 1e-9 of an integer.
pub fn k0_index(band_edge: f64, interval: &Interval) -> usize {
    let t = (band_edge / PI) * interval.length();
    let nearest = t.round();
    let k0 = if (t - nearest).abs() <= 1e-9 {
        nearest + 1.0
    } else {
        t.floor() + 1.0
    };
    k0.max(1.0) as usize
}

fn spectrum(
    f: &BandlimitedFunction,
    c: f64,
    interval: Interval,
    parity: Parity,
    cfg: &QConfig,
) -> Result<LocalSpectrum, CriteriaError> {
    if !f.is_real_valued() {
        return Err(CriteriaError::NotRealValued {
            label: f.label().to_string(),
        });
    }
    let k0 = k0_index(f.band_edge(), &interval);
    let mut k_max = (4 * k0).max(64).min(cfg.kmax_cap);
    let mut checked_endpoints = false;
    loop {
        let projection = project_modes(
            |x| f.eval_real(x),
            interval,
            c,
            parity,
            k_max,
            cfg.quad_tol,
        )?;
        if !checked_endpoints {
            validate_endpoints(f, c, interval, parity, &projection, cfg)?;
            checked_endpoints = true;
        }
        let ratio = trailing_ratio(&projection);
        if ratio < TRAILING_LIMIT || k_max >= cfg.kmax_cap {
            let residuals = endpoint_residuals(f, c, parity, &projection, interval)?;
            return Ok(LocalSpectrum {
                parity,
                interval,
                reference_level: c,
                coefficients: projection.coefficients,
                k0,
                k_max,
                truncation_ratio: ratio,
                truncated: ratio >= TRAILING_LIMIT,
                endpoint_residuals: residuals,
                f_scale: projection.f_scale,
            });
        }
        k_max = (k_max * 2).min(cfg.kmax_cap);
    }
}

fn endpoint_residuals(
    f: &BandlimitedFunction,
    c: f64,
    parity: Parity,
    projection: &ModeProjection,
    interval: Interval,
) -> Result<(f64, f64), CriteriaError> {
    Ok(match parity {
        Parity::Sine => ((projection.f_b1 - c).abs(), (projection.f_b2 - c).abs()),
        Parity::Cosine => (
            f.derivative_real(interval.lower())?.abs(),
            f.derivative_real(interval.upper())?.abs(),
        ),
    })
}

fn validate_endpoints(
    f: &BandlimitedFunction,
    c: f64,
    interval: Interval,
    parity: Parity,
    projection: &ModeProjection,
    cfg: &QConfig,
) -> Result<(), CriteriaError> {
    let (residual_lo, residual_hi) = endpoint_residuals(f, c, parity, projection, interval)?;
    let tolerance = cfg.endpoint_tol * projection.f_scale.max(1.0);
    if residual_lo > tolerance || residual_hi > tolerance {
        return Err(CriteriaError::InvalidEndpoints {
            parity,
            residual_lo,
            residual_hi,
            tolerance,
        });
    }
    Ok(())
}

/// Energy fraction of the trailing block among modes `k >= 1`.
fn trailing_ratio(projection: &ModeProjection) -> f64 {
    let from_one: &[f64] = match projection.parity {
        Parity::Sine => &projection.coefficients,
        Parity::Cosine => &projection.coefficients[1..],
    };
    let total: f64 = from_one.iter().map(|a| a * a).sum();
    if total == 0.0 {
        return 0.0;
    }
    let tail_start = from_one.len().saturating_sub(TRAILING_BLOCK);
    let tail: f64 = from_one[tail_start..].iter().map(|a| a * a).sum();
    tail / total
}

/// Local sine coefficients of `f` around `y = c` over `interval`.
///
/// Errors with [`CriteriaError::InvalidEndpoints`] when `f - c` does not
/// vanish at both endpoints — the criterion is inapplicable there, which is
/// distinct from "not superoscillating".
pub fn sine_spectrum(
    f: &BandlimitedFunction,
    c: f64,
    interval: Interval,
    cfg: &QConfig,
) -> Result<LocalSpectrum, CriteriaError> {
    spectrum(f, c, interval, Parity::Sine, cfg)
}

/// Local cosine coefficients of `f` over `interval` (endpoints must be
/// critical points). The `k = 0` mode is stored but excluded from `Q`.
pub fn cosine_spectrum(
    f: &BandlimitedFunction,
    interval: Interval,
    cfg: &QConfig,
) -> Result<LocalSpectrum, CriteriaError> {
    spectrum(f, 0.0, interval, Parity::Cosine, cfg)
}

/// The `Q` quantifier of a computed spectrum.
///
/// A spectrum with no mode weight at all (an identically flat segment) has no
/// defined `Q` and reports [`CriteriaError::UndefinedQ`] rather than zero.
pub fn q_value(spectrum: LocalSpectrum, cfg: &QConfig) -> Result<QReport, CriteriaError> {
    let p = cfg.norm_exponent;
    let first = spectrum.first_index();
    let mut total = 0.0;
    let mut tail = 0.0;
    for k in 1.max(first)..=spectrum.k_max {
        let w = spectrum.coeff(k).abs().powf(p);
        total += w;
        if k >= spectrum.k0 {
            tail += w;
        }
    }
    let rms = total.powf(1.0 / p);
    let flat_floor = 1e-12 * (spectrum.f_scale * spectrum.interval.length()).max(1e-300);
    if rms <= flat_floor {
        return Err(CriteriaError::UndefinedQ);
    }
    let q = (tail / total).powf(1.0 / p).clamp(0.0, 1.0);
    Ok(QReport {
        parity: spectrum.parity,
        q,
        k0: spectrum.k0,
        passes: q > cfg.threshold,
        valid_endpoints: true,
        spectrum,
    })
}

/// Sine criterion: is `f` superoscillating around `y = c` on `interval`?
pub fn check_sine_criterion(
    f: &BandlimitedFunction,
    c: f64,
    interval: Interval,
    cfg: &QConfig,
) -> Result<QReport, CriteriaError> {
    q_value(sine_spectrum(f, c, interval, cfg)?, cfg)
}

/// Cosine criterion: is `f` superoscillating on `interval`?
pub fn check_cosine_criterion(
    f: &BandlimitedFunction,
    interval: Interval,
    cfg: &QConfig,
) -> Result<QReport, CriteriaError> {
    q_value(cosine_spectrum(f, interval, cfg)?, cfg)
}

/// Apply the criterion for `parity` (`c` is ignored in cosine mode).
pub fn check_criterion(
    f: &BandlimitedFunction,
    parity: Parity,
    c: f64,
    interval: Interval,
    cfg: &QConfig,
) -> Result<QReport, CriteriaError> {
    match parity {
        Parity::Sine => check_sine_criterion(f, c, interval, cfg),
        Parity::Cosine => check_cosine_criterion(f, interval, cfg),
    }
}

/// Subtract a polynomial reference `p` so both criteria can be applied around
/// it: returns `f - p`, carrying `f`'s band edge with the caveat flag set
/// when `p` is not constant.
pub fn polynomial_reference_transform(
    f: &BandlimitedFunction,
    coefficients: &[f64],
) -> Result<BandlimitedFunction, CriteriaError> {
    assert!(
        coefficients.len() <= 9,
        "polynomial reference degree is capped at 8"
    );
    Ok(f.subtract_polynomial(coefficients)?)
}

fn passes_or_false(result: Result<QReport, CriteriaError>) -> Result<bool, CriteriaError> {
    match result {
        Ok(report) => Ok(report.passes),
        // Inapplicable or degenerate candidate intervals simply don't pass.
        Err(CriteriaError::InvalidEndpoints { .. }) | Err(CriteriaError::UndefinedQ) => Ok(false),
        Err(e) => Err(e),
    }
}

/// Decide whether `f` superoscillates in `target` by the interval-sandwich
/// definition: search for admissible witness intervals `I1 ⊆ target ⊆ I2`
/// that both pass the criterion.
///
/// Inner candidates are tried largest-first and outer candidates
/// smallest-first, so a positive verdict reports the tightest sandwich. When
/// `target` itself is admissible and passes, it is its own witness pair (the
/// inclusions are not strict). `window` defaults to `target` widened by two
/// band-edge periods `2 pi / B` on each side.
pub fn classify_definition(
    f: &BandlimitedFunction,
    target: Interval,
    parity: Parity,
    c: f64,
    window: Option<Interval>,
    cfg: &QConfig,
) -> Result<DefinitionVerdict, CriteriaError> {
    let band = f.band_edge();
    let window = match window {
        Some(w) => w,
        None => {
            let pad = 2.0 * (2.0 * PI / band.max(0.05));
            Interval::new(target.lower() - pad, target.upper() + pad)?
        }
    };
    if !window.contains_within(&target, 1e-12) {
        return Err(CriteriaError::WindowDoesNotCoverTarget {
            wlo: window.lower(),
            whi: window.upper(),
            tlo: target.lower(),
            thi: target.upper(),
        });
    }

    let step = cfg.step_for(band).min(window.length() / 8.0);
    let admissible = match parity {
        Parity::Sine => find_roots(f, c, window, step)?,
        Parity::Cosine => find_extrema(f, window, step)?,
    };
    let points: Vec<f64> = admissible.xs().collect();
    if points.is_empty() {
        return Err(CriteriaError::NoAdmissibleEndpoints {
            lo: window.lower(),
            hi: window.upper(),
        });
    }

    let (t1, t2) = (target.lower(), target.upper());
    let near = |x: f64, t: f64| (x - t).abs() <= 1e-9 * (1.0 + t.abs());

    // Target passing on its own endpoints is its own sandwich.
    let target_admissible =
        points.iter().any(|&x| near(x, t1)) && points.iter().any(|&x| near(x, t2));
    if target_admissible && passes_or_false(check_criterion(f, parity, c, target, cfg))? {
        return Ok(DefinitionVerdict {
            target,
            parity,
            reference_level: c,
            inner: Some(target),
            outer: Some(target),
            superoscillating: true,
            search_window: window,
        });
    }

    let slack = |t: f64| 1e-9 * (1.0 + t.abs());

    // Inner: pairs inside the target, largest first.
    let inside: Vec<f64> = points
        .iter()
        .copied()
        .filter(|&x| x >= t1 - slack(t1) && x <= t2 + slack(t2))
        .collect();
    let mut inner_pairs: Vec<(f64, f64)> = Vec::new();
    for (i, &a) in inside.iter().enumerate() {
        for &b in &inside[i + 1..] {
            inner_pairs.push((a, b));
        }
    }
    inner_pairs.sort_by(|x, y| {
        let (lx, ly) = (x.1 - x.0, y.1 - y.0);
        ly.total_cmp(&lx).then(x.0.total_cmp(&y.0))
    });
    let mut inner = None;
    for (a, b) in inner_pairs {
        let candidate = Interval::new(a, b)?;
        if passes_or_false(check_criterion(f, parity, c, candidate, cfg))? {
            inner = Some(candidate);
            break;
        }
    }
    if inner.is_none() {
        return Ok(DefinitionVerdict {
            target,
            parity,
            reference_level: c,
            inner: None,
            outer: None,
            superoscillating: false,
            search_window: window,
        });
    }

    // Outer: pairs containing the target, smallest first.
    let lefts: Vec<f64> = points
        .iter()
        .copied()
        .filter(|&x| x <= t1 + slack(t1))
        .collect();
    let rights: Vec<f64> = points
        .iter()
        .copied()
        .filter(|&x| x >= t2 - slack(t2))
        .collect();
    let mut outer_pairs: Vec<(f64, f64)> = Vec::new();
    for &a in &lefts {
        for &b in &rights {
            if b > a {
                outer_pairs.push((a, b));
            }
        }
    }
    outer_pairs.sort_by(|x, y| {
        let (lx, ly) = (x.1 - x.0, y.1 - y.0);
        lx.total_cmp(&ly).then(y.0.total_cmp(&x.0))
    });
    let mut outer = None;
    for (a, b) in outer_pairs {
        let candidate = Interval::new(a, b)?;
        if passes_or_false(check_criterion(f, parity, c, candidate, cfg))? {
            outer = Some(candidate);
            break;
        }
    }

    let superoscillating = inner.is_some() && outer.is_some();
    Ok(DefinitionVerdict {
        target,
        parity,
        reference_level: c,
        inner,
        outer,
        superoscillating,
        search_window: window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function::BandlimitedFunction;
    use crate::numerics::find_roots;
    use std::f64::consts::PI;

    fn compiled(text: &str) -> BandlimitedFunction {
        crate::compile(&crate::parse(text).unwrap()).unwrap()
    }

    fn interval(a: f64, b: f64) -> Interval {
        Interval::new(a, b).unwrap()
    }

    #[test]
    fn k0_rule() {
        // B = 2, b = alpha pi/2: W L = alpha exactly, so k0 = alpha + 1.
        for alpha in 1..=100_usize {
            let i = interval(0.0, alpha as f64 * PI / 2.0);
            assert_eq!(k0_index(2.0, &i), alpha + 1, "alpha = {alpha}");
        }
        assert_eq!(k0_index(1.0, &interval(0.0, PI / 2.0)), 1);
        assert_eq!(k0_index(3.0, &interval(PI / 2.0, 3.0 * PI / 4.0)), 1);
        assert_eq!(k0_index(0.0, &interval(0.0, 10.0)), 1);
    }

    #[test]
    fn sine_spectrum_orthogonality() {
        let f = compiled("sin(x)");
        let cfg = QConfig::default();
        let s = sine_spectrum(&f, 0.0, interval(0.0, PI), &cfg).unwrap();
        assert!((s.coeff(1) - PI / 2.0).abs() < 1e-10);
        for k in 2..=s.k_max.min(40) {
            assert!(s.coeff(k).abs() < 1e-10);
        }
        assert_eq!(s.k0, 2); // W L = 1, integer guard bumps to 2
        assert!(!s.truncated);
    }

    #[test]
    fn cosine_spectrum_closed_form() {
        let f = compiled("cos(x)^2");
        let cfg = QConfig::default();
        let s = cosine_spectrum(&f, interval(0.0, PI), &cfg).unwrap();
        assert!((s.coeff(0) - PI / 2.0).abs() < 1e-9);
        assert!((s.coeff(2) - PI / 4.0).abs() < 1e-9);
        for k in [1usize, 3, 4, 5, 6, 7, 8] {
            assert!(s.coeff(k).abs() < 1e-9, "a_{k} = {}", s.coeff(k));
        }
        assert_eq!(s.k0, 3);

        let g = compiled("cos(x)");
        let s = cosine_spectrum(&g, interval(0.0, PI), &cfg).unwrap();
        assert!((s.coeff(1) - PI / 2.0).abs() < 1e-10);
        assert!(s.coeff(0).abs() < 1e-10);
    }

    #[test]
    fn q_values_for_the_three_regimes() {
        let cfg = QConfig::default();

        // all energy below k0: q = 0
        let f = compiled("cos(x)^2");
        let r = check_cosine_criterion(&f, interval(0.0, PI), &cfg).unwrap();
        assert!(r.q.abs() < 1e-8, "q = {}", r.q);
        assert!(!r.passes);

        // single tone, k0 = 2: q = 0
        let f = compiled("sin(2*x)");
        let r = check_sine_criterion(&f, 0.0, interval(0.0, PI / 2.0), &cfg).unwrap();
        assert!(r.q.abs() < 1e-8);

        // k0 = 1 forces q = 1
        let f = compiled("h(1,2)");
        let r = check_sine_criterion(&f, 0.0, interval(PI / 2.0, 3.0 * PI / 4.0), &cfg)
            .unwrap();
        assert_eq!(r.k0, 1);
        assert!((r.q - 1.0).abs() < 1e-12);
        assert!(r.passes);
    }

    #[test]
    fn invalid_endpoints_are_inapplicable_not_failing() {
        let cfg = QConfig::default();
        let f = compiled("sin(x)");
        let e = check_sine_criterion(&f, 0.0, interval(0.0, 3.0), &cfg);
        assert!(matches!(e, Err(CriteriaError::InvalidEndpoints { .. })));
        let e = check_cosine_criterion(&f, interval(0.0, PI), &cfg);
        assert!(matches!(e, Err(CriteriaError::InvalidEndpoints { .. })));
    }

    #[test]
    fn flat_segment_q_is_undefined() {
        let cfg = QConfig::default();
        let f = compiled("0*cos(x)");
        let e = check_sine_criterion(&f, 0.0, interval(0.0, 1.0), &cfg);
        assert!(matches!(e, Err(CriteriaError::UndefinedQ)));
    }

    #[test]
    fn complex_functions_are_rejected() {
        let cfg = QConfig::default();
        let f = compiled("g(2,10)");
        let e = check_sine_criterion(&f, 0.0, interval(0.0, 1.0), &cfg);
        assert!(matches!(e, Err(CriteriaError::NotRealValued { .. })));
    }

    #[test]
    fn shifted_cosine_cosine_criterion() {
        let cfg = QConfig::default();
        let f = compiled("hs(0.5,1)");
        // k0 = 1 on [0, pi/3]: passes with q = 1
        let r = check_cosine_criterion(&f, interval(0.0, PI / 3.0), &cfg).unwrap();
        assert!((r.q - 1.0).abs() < 1e-8);
        assert!(r.passes);
        // [0, pi]: local modes match the band, q = 0
        let r = check_cosine_criterion(&f, interval(0.0, PI), &cfg).unwrap();
        assert!(r.q < 0.5);
        assert!(!r.passes);
    }

    #[test]
    fn sinc_first_extremum_fails_cosine_criterion() {
        let cfg = QConfig::default();
        let f = compiled("sinc(x)");
        let r = check_cosine_criterion(&f, interval(0.0, 4.4934094579090642), &cfg).unwrap();
        assert!(r.q < 0.5, "q = {}", r.q);
    }

    #[test]
    fn classify_target_that_passes_is_its_own_witness() {
        let cfg = QConfig::default();
        let f = compiled("h(1,2)");
        let target = interval(PI / 2.0, 3.0 * PI / 4.0);
        let v = classify_definition(&f, target, Parity::Sine, 0.0, None, &cfg).unwrap();
        assert!(v.superoscillating);
        assert_eq!(v.inner, Some(target));
        assert_eq!(v.outer, Some(target));
    }

    #[test]
    fn classify_sinc_is_negative() {
        let cfg = QConfig::default();
        let f = compiled("sinc(x)");
        let v = classify_definition(
            &f,
            interval(0.0, 4.4934094579090642),
            Parity::Cosine,
            0.0,
            Some(interval(0.0, 15.0)),
            &cfg,
        )
        .unwrap();
        assert!(!v.superoscillating);
        assert!(v.inner.is_none());
    }

    #[test]
    fn classify_power_wave_second_zero() {
        let cfg = QConfig::default();
        let f = compiled("im(g(2,20))");
        let zeros = find_roots(&f, 0.0, interval(0.05, 8.0), 0.02).unwrap();
        let z2 = zeros.points[1].x;
        let v = classify_definition(&f, interval(0.0, z2), Parity::Sine, 0.0, None, &cfg)
            .unwrap();
        assert!(v.superoscillating);
        // target endpoints are themselves admissible and the target passes
        assert_eq!(v.inner, Some(interval(0.0, z2)));
    }

    #[test]
    fn classify_requires_covering_window() {
        let cfg = QConfig::default();
        let f = compiled("h(1,2)");
        let e = classify_definition(
            &f,
            interval(0.0, 4.0),
            Parity::Sine,
            0.0,
            Some(interval(1.0, 5.0)),
            &cfg,
        );
        assert!(matches!(
            e,
            Err(CriteriaError::WindowDoesNotCoverTarget { .. })
        ));
    }

    #[test]
    fn polynomial_reference_constant_matches_level_shift() {
        let cfg = QConfig::default();
        let f = compiled("sin(x) + 0.25");
        // sine criterion around c = 0.25 equals criterion on f - 0.25 around 0
        let direct = check_sine_criterion(&f, 0.25, interval(0.0, PI), &cfg).unwrap();
        let shifted = polynomial_reference_transform(&f, &[0.25]).unwrap();
        let via_poly = check_sine_criterion(&shifted, 0.0, interval(0.0, PI), &cfg).unwrap();
        assert!((direct.q - via_poly.q).abs() < 1e-10);

        // p = 0 is the identity
        let same = polynomial_reference_transform(&f, &[]).unwrap();
        assert_eq!(same.label(), f.label());
    }

    #[test]
    fn polynomial_reference_strips_a_tilt() {
        let cfg = QConfig::default();
        let tilted = compiled("sin(x) + 0.1*x");
        let detilted = polynomial_reference_transform(&tilted, &[0.0, 0.1]).unwrap();
        assert!(detilted.band_caveat());
        let plain = compiled("sin(x)");
        let a = check_sine_criterion(&detilted, 0.0, interval(0.0, PI), &cfg).unwrap();
        let b = check_sine_criterion(&plain, 0.0, interval(0.0, PI), &cfg).unwrap();
        assert!((a.q - b.q).abs() < 1e-8, "{} vs {}", a.q, b.q);
        assert_eq!(a.k0, b.k0);
    }

    #[test]
    fn q_is_scale_and_shift_invariant() {
        let cfg = QConfig::default();
        let i = interval(PI / 2.0, 3.0 * PI / 4.0);
        let base = check_sine_criterion(&compiled("h(1,2)"), 0.0, i, &cfg).unwrap();
        let scaled = check_sine_criterion(&compiled("3.7*h(1,2)"), 0.0, i, &cfg).unwrap();
        assert!((base.q - scaled.q).abs() < 1e-10);
        let lifted =
            check_sine_criterion(&compiled("h(1,2) + 0.6"), 0.6, i, &cfg).unwrap();
        assert!((base.q - lifted.q).abs() < 1e-10);
    }

    #[test]
    fn custom_threshold_changes_the_verdict_not_q() {
        let f = compiled("hs(0.5,1)");
        let i = interval(0.0, 5.0 * PI / 3.0);
        let standard = check_cosine_criterion(&f, i, &QConfig::default()).unwrap();
        assert!(!standard.passes);
        let permissive = QConfig {
            threshold: 0.05,
            ..QConfig::default()
        };
        let relaxed = check_cosine_criterion(&f, i, &permissive).unwrap();
        assert!((standard.q - relaxed.q).abs() < 1e-12);
        assert!(relaxed.passes);
    }
}
