//! The rival local-wavenumber definition, implemented exactly on
//! trigonometric polynomials.
//!
//! A real signal `v` is complexified as `u = v + i H[v]` through the Hilbert
//! transform (frequency multiplier `-i sgn w`: `cos wx -> sin wx`,
//! `sin wx -> -cos wx`, constants to zero). The local wavenumber is the phase
//! gradient `k(x) = Im(u'(x)/u(x))`; under this definition a signal counts as
//! superoscillating when `k` exceeds the band edge somewhere. The sampled
//! report exists to exhibit the false negatives of that test: catalog
//! counterexamples keep `k` at or below the band edge over entire intervals
//! where the local-spectrum criteria certify superoscillation.
//!
//! Waveforms without a finite trigonometric-polynomial form are out of scope
//! here; the comparisons this module supports are all trig polynomials.

use num_complex::Complex64;
use thiserror::Error;

use crate::numerics::Interval;
use crate::trigpoly::TrigPolynomial;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum WavenumberError {
    #[error("|u({x})| = {magnitude:e} is below the degeneracy floor {floor:e}")]
    DegenerateSample { x: f64, magnitude: f64, floor: f64 },
    #[error("every sample is degenerate: |u| vanishes identically on the range")]
    AllSamplesDegenerate,
    #[error("a wavenumber report needs at least 2 samples, got {got}")]
    TooFewSamples { got: usize },
}

/// Termwise Hilbert transform: `(w, cos_amp, sin_amp) -> (w, -sin_amp,
/// cos_amp)` for `w > 0`, constant term to zero.
pub fn hilbert_transform(v: &TrigPolynomial) -> TrigPolynomial {
    TrigPolynomial::from_terms(
        0.0,
        v.terms().iter().map(|t| (t.freq, -t.sin_amp, t.cos_amp)),
    )
}

/// A complex-valued trigonometric signal `re + i im`.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexSignal {
    re: TrigPolynomial,
    im: TrigPolynomial,
}

impl ComplexSignal {
    pub fn new(re: TrigPolynomial, im: TrigPolynomial) -> Self {
        ComplexSignal { re, im }
    }

    /// Build `sum_j c_j e^{i w_j x}` from `(w_j, c_j)` pairs; frequencies of
    /// either sign are allowed.
    pub fn from_exponentials(terms: &[(f64, Complex64)]) -> Self {
        // c e^{iwx} = (Re c cos wx - Im c sin wx) + i (Im c cos wx + Re c sin wx)
        let re = TrigPolynomial::from_terms(
            0.0,
            terms.iter().map(|&(w, c)| (w, c.re, -c.im)),
        );
        let im = TrigPolynomial::from_terms(
            0.0,
            terms.iter().map(|&(w, c)| (w, c.im, c.re)),
        );
        ComplexSignal { re, im }
    }

    pub fn real_part(&self) -> &TrigPolynomial {
        &self.re
    }

    pub fn imag_part(&self) -> &TrigPolynomial {
        &self.im
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        Complex64::new(self.re.eval(x), self.im.eval(x))
    }

    pub fn derivative(&self, x: f64) -> Complex64 {
        Complex64::new(self.re.derivative_at(x), self.im.derivative_at(x))
    }

    pub fn band_edge(&self) -> f64 {
        self.re.band_edge().max(self.im.band_edge())
    }
}

/// `u = v + i H[v]`: the canonical complexification of a real signal.
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyticSignal {
    signal: ComplexSignal,
    source: TrigPolynomial,
}

impl AnalyticSignal {
    /// Construct from a real trig polynomial; the Hilbert involution
    /// `H[H[v]] = -(v - mean v)` is verified termwise on construction.
    pub fn new(source: TrigPolynomial) -> Self {
        let h = hilbert_transform(&source);
        let hh = hilbert_transform(&h);
        let recentred = source
            .sub(&TrigPolynomial::constant(source.constant_term()))
            .scale(-1.0);
        assert_eq!(hh, recentred, "Hilbert involution violated");
        AnalyticSignal {
            signal: ComplexSignal::new(source.clone(), h),
            source,
        }
    }

    pub fn signal(&self) -> &ComplexSignal {
        &self.signal
    }

    pub fn source(&self) -> &TrigPolynomial {
        &self.source
    }
}

/// Phase gradient `k(x) = Im(u'(x)/u(x))`.
///
/// `floor` is the degeneracy floor on `|u(x)|`; samples at or below it have
/// no usable phase and are reported as errors, not skipped silently.
pub fn local_wavenumber(u: &ComplexSignal, x: f64, floor: f64) -> Result<f64, WavenumberError> {
    let value = u.eval(x);
    let magnitude = value.norm();
    if magnitude <= floor || magnitude == 0.0 {
        return Err(WavenumberError::DegenerateSample {
            x,
            magnitude,
            floor,
        });
    }
    Ok((u.derivative(x) / value).im)
}

/// Sampled wavenumber summary over a range.
#[derive(Debug, Clone)]
pub struct WavenumberReport {
    /// Retained `(x, k(x))` samples.
    pub samples: Vec<(f64, f64)>,
    /// Largest signed `k` over the retained samples.
    pub sup_k: f64,
    pub sup_abs_k: f64,
    pub band_edge: f64,
    /// Whether the local-wavenumber definition flags superoscillation:
    /// `sup k > band_edge` (strictly, with a 1e-9 guard). The bound is
    /// one-sided; backward-phase spikes (`k` very negative near small `|u|`)
    /// do not count as oscillating faster than the band.
    pub flags_superoscillation: bool,
    /// Samples dropped for sitting below the degeneracy floor
    /// `1e-9 * max|u|`; they are counted, never interpolated through.
    pub degenerate_count: usize,
}

/// Sample `k(x)` for the analytic signal of `v` at `n_samples` uniform points.
pub fn wavenumber_report(
    v: &TrigPolynomial,
    range: Interval,
    n_samples: usize,
) -> Result<WavenumberReport, WavenumberError> {
    if n_samples < 2 {
        return Err(WavenumberError::TooFewSamples { got: n_samples });
    }
    let u = AnalyticSignal::new(v.clone());
    let xs: Vec<f64> = (0..n_samples)
        .map(|i| {
            range.lower() + range.length() * i as f64 / (n_samples - 1) as f64
        })
        .collect();
    let mut peak: f64 = 0.0;
    for &x in &xs {
        peak = peak.max(u.signal().eval(x).norm());
    }
    if peak == 0.0 {
        return Err(WavenumberError::AllSamplesDegenerate);
    }
    let floor = 1e-9 * peak;

    let mut samples = Vec::with_capacity(n_samples);
    let mut degenerate_count = 0usize;
    let mut sup_k = f64::NEG_INFINITY;
    let mut sup_abs_k: f64 = 0.0;
    for &x in &xs {
        match local_wavenumber(u.signal(), x, floor) {
            Ok(k) => {
                sup_k = sup_k.max(k);
                sup_abs_k = sup_abs_k.max(k.abs());
                samples.push((x, k));
            }
            Err(WavenumberError::DegenerateSample { .. }) => degenerate_count += 1,
            Err(e) => return Err(e),
        }
    }
    if samples.is_empty() {
        return Err(WavenumberError::AllSamplesDegenerate);
    }
    let band_edge = v.band_edge();
    Ok(WavenumberReport {
        samples,
        sup_k,
        sup_abs_k,
        band_edge,
        flags_superoscillation: sup_k > band_edge + 1e-9 * band_edge.max(1.0),
        degenerate_count,
    })
}
