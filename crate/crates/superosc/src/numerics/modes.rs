//! Local Fourier mode projection.
//!
//! Coefficients over `[b1, b2]`, `L = b2 - b1`:
//!
//! * sine:   `a_k = int (f(x) - c) sin(pi k (x-b1)/L) dx`, `k = 1..=k_max`
//! * cosine: `a_k = int f(x) cos(pi k (x-b1)/L) dx`,      `k = 0..=k_max`
//!
//! computed from `M = 2^p >= 16 k_max` uniform samples as a trapezoid-
//! corrected discrete sine/cosine transform (odd/even extension through one
//! complex FFT of length `2M`). The lowest eight modes are cross-validated
//! against adaptive quadrature; a disagreement beyond `1e-8` relative to the
//! coefficient scale fails the run.

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::function::EvalError;

use super::{integrate, Interval, NumericsError, Parity};

/// Projection output plus the sampling facts the criteria need.
#[derive(Debug, Clone)]
pub struct ModeProjection {
    pub parity: Parity,
    /// `coefficients[i]` is `a_{i+1}` (sine) or `a_i` (cosine).
    pub coefficients: Vec<f64>,
    /// `max |f|` over the sample grid.
    pub f_scale: f64,
    /// Raw endpoint samples `f(b1)`, `f(b2)`.
    pub f_b1: f64,
    pub f_b2: f64,
    /// Number of sample panels `M`.
    pub samples: usize,
}

impl ModeProjection {
    /// Coefficient `a_k`; `k >= 1` for sine, `k >= 0` for cosine.
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

    pub fn max_index(&self) -> usize {
        match self.parity {
            Parity::Sine => self.coefficients.len(),
            Parity::Cosine => self.coefficients.len() - 1,
        }
    }
}

/// Project `f` onto the first `k_max` local modes (see module docs).
///
/// `quad_tol` is the absolute tolerance of the cross-validation quadrature.
pub fn project_modes<F>(
    mut f: F,
    interval: Interval,
    c: f64,
    parity: Parity,
    k_max: usize,
    quad_tol: f64,
) -> Result<ModeProjection, NumericsError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    assert!(k_max >= 1, "k_max must be >= 1");
    let (b1, l) = (interval.lower(), interval.length());
    let m = (16 * k_max).next_power_of_two().max(256);

    let mut ys = Vec::with_capacity(m + 1);
    let mut f_scale: f64 = 0.0;
    for j in 0..=m {
        let x = b1 + l * j as f64 / m as f64;
        let v = f(x)?;
        f_scale = f_scale.max(v.abs());
        ys.push(v);
    }

    let mut buf = vec![Complex64::new(0.0, 0.0); 2 * m];
    match parity {
        Parity::Sine => {
            // odd extension of f - c; the endpoint samples carry zero weight
            // in the sine quadrature, so they are pinned to zero here.
            for j in 1..m {
                let v = ys[j] - c;
                buf[j] = Complex64::new(v, 0.0);
                buf[2 * m - j] = Complex64::new(-v, 0.0);
            }
        }
        Parity::Cosine => {
            buf[0] = Complex64::new(ys[0], 0.0);
            buf[m] = Complex64::new(ys[m], 0.0);
            for j in 1..m {
                buf[j] = Complex64::new(ys[j], 0.0);
                buf[2 * m - j] = Complex64::new(ys[j], 0.0);
            }
        }
    }
    FftPlanner::new().plan_fft_forward(2 * m).process(&mut buf);

    // Euler-Maclaurin end correction -h^2/12 [g'(b2) - g'(b1)] for the
    // trapezoid sums; with it the per-mode error is O(h^4) on any smooth
    // integrand, admissible endpoints or not.
    let h = l / m as f64;
    let scale = h;
    let coefficients: Vec<f64> = match parity {
        // g = (f - c) sin(pi k (x-b1)/L): g'(ends) = (f - c)(b) * omega_k * (+-1)^k
        Parity::Sine => (1..=k_max)
            .map(|k| {
                let omega = std::f64::consts::PI * k as f64 / l;
                let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                let correction = -h * h / 12.0
                    * omega
                    * (sign * (ys[m] - c) - (ys[0] - c));
                // W_k = -2i sum_j y_j sin(pi j k / M) => trapezoid = -Im(W_k)/2
                -0.5 * scale * buf[k].im + correction
            })
            .collect(),
        // g = f cos(pi k (x-b1)/L): g'(ends) = f'(b) * (+-1)^k, with f'(b)
        // estimated from one-sided fourth-order stencils on the grid.
        Parity::Cosine => {
            let d_lo = (-25.0 * ys[0] + 48.0 * ys[1] - 36.0 * ys[2] + 16.0 * ys[3]
                - 3.0 * ys[4])
                / (12.0 * h);
            let d_hi = (25.0 * ys[m] - 48.0 * ys[m - 1] + 36.0 * ys[m - 2]
                - 16.0 * ys[m - 3]
                + 3.0 * ys[m - 4])
                / (12.0 * h);
            (0..=k_max)
                .map(|k| {
                    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
                    let correction = -h * h / 12.0 * (sign * d_hi - d_lo);
                    // Re W_k is twice the trapezoid sum
                    0.5 * scale * buf[k].re + correction
                })
                .collect()
        }
    };

    let projection = ModeProjection {
        parity,
        coefficients,
        f_scale,
        f_b1: ys[0],
        f_b2: ys[m],
        samples: m,
    };
    cross_validate(&mut f, interval, c, &projection, quad_tol)?;
    Ok(projection)
}

/// Check the lowest eight modes against adaptive quadrature.
fn cross_validate<F>(
    f: &mut F,
    interval: Interval,
    c: f64,
    projection: &ModeProjection,
    quad_tol: f64,
) -> Result<(), NumericsError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    let (b1, l) = (interval.lower(), interval.length());
    let lo = projection.first_index();
    let hi = projection.max_index().min(lo + 7);
    // Coefficients scale like f_scale * L; both the disagreement bound and
    // the quadrature tolerance are measured relative to that (with a floor
    // of 1) so exact-zero modes compare sanely and large-amplitude functions
    // do not demand sub-rounding absolute accuracy of the quadrature.
    let scale = (projection.f_scale * l).max(1.0);
    let tol_cmp = 1e-8 * scale;
    let quad_tol = quad_tol * scale;
    for k in lo..=hi {
        let omega = std::f64::consts::PI * k as f64 / l;
        let transform = projection.coeff(k);
        let (quadrature, _) = match projection.parity {
            Parity::Sine => integrate(
                |x| f(x).map(|v| (v - c) * (omega * (x - b1)).sin()),
                interval,
                quad_tol,
            )?,
            Parity::Cosine => integrate(
                |x| f(x).map(|v| v * (omega * (x - b1)).cos()),
                interval,
                quad_tol,
            )?,
        };
        if (transform - quadrature).abs() > tol_cmp {
            return Err(NumericsError::CrossValidation {
                k,
                transform,
                quadrature,
            });
        }
    }
    Ok(())
}
