//! Adaptive quadrature: 15-point Gauss-Kronrod pairs on a bisected segment
//! queue, worst segment first.

use std::collections::BinaryHeap;

use crate::function::EvalError;

use super::{Interval, NumericsError};

// 15-point Kronrod abscissae on [-1, 1] (positive half) with the embedded
// 7-point Gauss rule; QUADPACK values.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error && self.a == other.a
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // worst error first; ties resolved by position for determinism
        self.error
            .total_cmp(&other.error)
            .then(other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64), EvalError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = 0.0;
    let mut gauss = 0.0;
    let mut res_abs = 0.0;
    let mut samples = [0.0_f64; 15];
    for (j, &xi) in XGK.iter().enumerate() {
        if j == 7 {
            let fc = f(center)?;
            samples[7] = fc;
            kronrod += WGK[7] * fc;
            gauss += WG[3] * fc;
            res_abs += WGK[7] * fc.abs();
            continue;
        }
        let dx = half * xi;
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        samples[j] = f1;
        samples[14 - j] = f2;
        kronrod += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = kronrod * 0.5;
    let mut res_asc = 0.0;
    for (j, s) in samples.iter().enumerate() {
        let w = WGK[j.min(14 - j)];
        res_asc += w * (s - mean).abs();
    }
    let value = kronrod * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((kronrod - gauss) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * res_abs;
    if floor > err {
        err = floor;
    }
    Ok((value, err))
}

/// Integrate `f` over `interval` to absolute tolerance `tol`.
///
/// Returns `(value, error_estimate)` with `error_estimate <= tol`, or
/// [`NumericsError::MaxSubdivisions`] when the segment budget runs out.
pub fn integrate<F>(
    mut f: F,
    interval: Interval,
    tol: f64,
) -> Result<(f64, f64), NumericsError>
where
    F: FnMut(f64) -> Result<f64, EvalError>,
{
    assert!(tol > 0.0, "tolerance must be positive");
    const MAX_SEGMENTS: usize = 8192;

    let (value, error) = gauss_kronrod(&mut f, interval.lower(), interval.upper())?;
    let mut heap = BinaryHeap::new();
    heap.push(Segment {
        a: interval.lower(),
        b: interval.upper(),
        value,
        error,
    });
    let mut total_err: f64 = error;

    while total_err > tol && heap.len() < MAX_SEGMENTS {
        let worst = heap.pop().expect("heap nonempty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // interval exhausted at machine resolution
            heap.push(worst);
            break;
        }
        let (lv, le) = gauss_kronrod(&mut f, worst.a, mid)?;
        let (rv, re) = gauss_kronrod(&mut f, mid, worst.b)?;
        total_err += le + re - worst.error;
        heap.push(Segment {
            a: worst.a,
            b: mid,
            value: lv,
            error: le,
        });
        heap.push(Segment {
            a: mid,
            b: worst.b,
            value: rv,
            error: re,
        });
    }

    // Deterministic summation in position order.
    let mut segments: Vec<Segment> = heap.into_vec();
    segments.sort_by(|s, t| s.a.total_cmp(&t.a));
    let total_val: f64 = segments.iter().map(|s| s.value).sum();
    let total_err: f64 = segments.iter().map(|s| s.error).sum();

    if total_err <= tol {
        Ok((total_val, total_err))
    } else {
        Err(NumericsError::MaxSubdivisions {
            tol,
            err_est: total_err,
            subdivisions: segments.len(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn quad(f: impl FnMut(f64) -> f64 + Copy, a: f64, b: f64, tol: f64) -> f64 {
        let mut f = f;
        integrate(|x| Ok(f(x)), Interval::new(a, b).unwrap(), tol)
            .unwrap()
            .0
    }

    #[test]
    fn integrates_sine_over_half_period() {
        let v = quad(|x| x.sin(), 0.0, PI, 1e-12);
        assert!((v - 2.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_cosine_mode() {
        // f = cos^2 x against cos(2x) on [0, pi]: pi/4 (alpha = 2 closed form)
        let v = quad(|x| x.cos().powi(2) * (2.0 * x).cos(), 0.0, PI, 1e-12);
        assert!((v - PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn antisymmetric_sum_cancels() {
        let i = Interval::new(-1.3, 2.7).unwrap();
        let (a, _) = integrate(|x| Ok((3.0 * x).cos() * x), i, 1e-12).unwrap();
        let (b, _) = integrate(|x| Ok(-(3.0 * x).cos() * x), i, 1e-12).unwrap();
        assert_eq!(a + b, 0.0);
    }

    #[test]
    fn oscillatory_integrand_converges() {
        // int_0^pi sin(40 x) dx = (1 - cos(40 pi))/40 = 0
        let v = quad(|x| (40.0 * x).sin(), 0.0, PI, 1e-11);
        assert!(v.abs() < 1e-11);
    }

    #[test]
    fn matches_composite_simpson_on_power_wave() {
        // int_0^1 Im g(2,10) dx vs a 2^16-panel Simpson oracle
        let g = crate::compile(&crate::parse("im(g(2,10))").unwrap()).unwrap();
        let (v, _) = integrate(|x| g.eval_real(x), Interval::new(0.0, 1.0).unwrap(), 1e-12)
            .unwrap();
        let n = 1 << 16;
        let h = 1.0 / n as f64;
        let mut simpson = g.eval_real(0.0).unwrap() + g.eval_real(1.0).unwrap();
        for i in 1..n {
            let w = if i % 2 == 1 { 4.0 } else { 2.0 };
            simpson += w * g.eval_real(i as f64 * h).unwrap();
        }
        simpson *= h / 3.0;
        assert!((v - simpson).abs() < 1e-9, "{v} vs {simpson}");
    }

    #[test]
    fn reports_subdivision_exhaustion() {
        // A needle the adaptive rule cannot resolve to 1e-15 within budget.
        let r = integrate(
            |x| Ok(1.0 / ((x - 0.123456).powi(2) + 1e-18)),
            Interval::new(0.0, 1.0).unwrap(),
            1e-15,
        );
        assert!(matches!(r, Err(NumericsError::MaxSubdivisions { .. })));
    }

    #[test]
    fn propagates_eval_failures() {
        let r = integrate(
            |x| {
                if x > 0.5 {
                    Err(crate::EvalError::NonFinite {
                        label: "t".into(),
                        x,
                    })
                } else {
                    Ok(x)
                }
            },
            Interval::new(0.0, 1.0).unwrap(),
            1e-10,
        );
        assert!(matches!(r, Err(NumericsError::Eval(_))));
    }
}
