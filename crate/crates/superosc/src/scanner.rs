//! Q-vs-endpoint profiles over consecutive admissible endpoints.
//!
//! From an admissible anchor (a zero of `f - c` in sine mode, a critical
//! point in cosine mode) the scanner walks consecutive admissible endpoints
//! away from the anchor, recomputes `Q` on each nested interval from scratch,
//! and stops after a run of consecutive failing points (default two), a point
//! budget, or scan exhaustion.

use crate::criteria::{check_criterion, CriteriaError, QConfig};
use crate::function::BandlimitedFunction;
use crate::numerics::{find_extrema, find_roots, Interval, Parity};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Left,
    Right,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Left => "left",
            Direction::Right => "right",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    /// The scan ran out of admissible endpoints within its horizon.
    Exhausted,
    /// `stop_after_fails` consecutive points failed the criterion.
    ConsecutiveFails,
    /// The point budget was reached.
    MaxPoints,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Exhausted => "exhausted",
            StopReason::ConsecutiveFails => "consecutive-fails",
            StopReason::MaxPoints => "max-points",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScanPoint {
    pub endpoint: f64,
    pub q: f64,
    pub passes: bool,
}

#[derive(Debug, Clone)]
pub struct ScanProfile {
    pub anchor: f64,
    pub parity: Parity,
    pub reference_level: f64,
    pub direction: Direction,
    pub points: Vec<ScanPoint>,
    pub stop_reason: StopReason,
}

#[derive(Debug, Clone)]
pub struct ScanOptions {
    pub max_points: usize,
    /// Stop after this many consecutive failing points; `0` disables the rule.
    pub stop_after_fails: usize,
    /// Scan horizon (distance from the anchor); `None` picks one from the
    /// band edge and point budget.
    pub horizon: Option<f64>,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions {
            max_points: 64,
            stop_after_fails: 2,
            horizon: None,
        }
    }
}

/// Walk consecutive admissible endpoints from `anchor` in `direction`,
/// computing `Q` on `[anchor, b]` (or `[b, anchor]`) for each.
pub fn scan_profile(
    f: &BandlimitedFunction,
    anchor: f64,
    parity: Parity,
    c: f64,
    direction: Direction,
    opts: &ScanOptions,
    cfg: &QConfig,
) -> Result<ScanProfile, CriteriaError> {
    if !f.is_real_valued() {
        return Err(CriteriaError::NotRealValued {
            label: f.label().to_string(),
        });
    }
    let band = f.band_edge();
    let step = cfg.step_for(band);
    let chunk = 256.0 * step;
    let horizon = opts
        .horizon
        .unwrap_or_else(|| (opts.max_points as f64 + 8.0) * (4.0 * std::f64::consts::PI / band.max(0.25)));

    // Anchor admissibility, scaled by |f| over the first chunk.
    let mut scale: f64 = 1.0;
    for i in 0..=256 {
        let off = chunk * i as f64 / 256.0;
        let x = match direction {
            Direction::Right => anchor + off,
            Direction::Left => anchor - off,
        };
        scale = scale.max(f.eval_real(x)?.abs());
    }
    let residual = match parity {
        Parity::Sine => (f.eval_real(anchor)? - c).abs(),
        Parity::Cosine => f.derivative_real(anchor)?.abs(),
    };
    let tolerance = cfg.endpoint_tol * scale;
    if residual > tolerance {
        return Err(CriteriaError::AnchorNotAdmissible {
            anchor,
            residual,
            tolerance,
        });
    }

    let anchor_margin = (0.5 * step).max(1e-8 * (1.0 + anchor.abs()));
    let mut points: Vec<ScanPoint> = Vec::new();
    let mut consecutive_fails = 0usize;
    let mut last_endpoint: Option<f64> = None;
    let mut offset = 0.0;

    let stop_reason = 'walk: loop {
        if offset >= horizon {
            break StopReason::Exhausted;
        }
        // Chunks overlap by two grid steps so a zero or extremum sitting
        // exactly on a chunk seam is interior to the next chunk's grid;
        // tangential-contact detection needs interior neighbours.
        let overlap = 2.0 * step;
        let (lo, hi) = match direction {
            Direction::Right => (
                (anchor + offset - overlap).max(anchor),
                anchor + offset + chunk,
            ),
            Direction::Left => (
                anchor - offset - chunk,
                (anchor - offset + overlap).min(anchor),
            ),
        };
        let segment = Interval::new(lo, hi)?;
        let found = match parity {
            Parity::Sine => find_roots(f, c, segment, step)?,
            Parity::Cosine => find_extrema(f, segment, step)?,
        };
        let mut endpoints: Vec<f64> = found.xs().collect();
        if direction == Direction::Left {
            endpoints.reverse();
        }
        for b in endpoints {
            let beyond_anchor = match direction {
                Direction::Right => b > anchor + anchor_margin,
                Direction::Left => b < anchor - anchor_margin,
            };
            if !beyond_anchor {
                continue;
            }
            if let Some(prev) = last_endpoint {
                // chunk seams can re-detect the boundary root
                if (b - prev).abs() <= 1e-8 * (1.0 + b.abs()) {
                    continue;
                }
            }
            last_endpoint = Some(b);
            let interval = match direction {
                Direction::Right => Interval::new(anchor, b)?,
                Direction::Left => Interval::new(b, anchor)?,
            };
            let report = check_criterion(f, parity, c, interval, cfg)?;
            points.push(ScanPoint {
                endpoint: b,
                q: report.q,
                passes: report.passes,
            });
            if report.passes {
                consecutive_fails = 0;
            } else {
                consecutive_fails += 1;
                if opts.stop_after_fails > 0 && consecutive_fails >= opts.stop_after_fails {
                    break 'walk StopReason::ConsecutiveFails;
                }
            }
            if points.len() >= opts.max_points {
                break 'walk StopReason::MaxPoints;
            }
        }
        offset += chunk;
    };

    Ok(ScanProfile {
        anchor,
        parity,
        reference_level: c,
        direction,
        points,
        stop_reason,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn compiled(text: &str) -> BandlimitedFunction {
        crate::compile(&crate::parse(text).unwrap()).unwrap()
    }

    #[test]
    fn power_wave_profile_passes_then_dies() {
        let f = compiled("im(g(2,10))");
        let p = scan_profile(
            &f,
            0.0,
            Parity::Sine,
            0.0,
            Direction::Right,
            &ScanOptions::default(),
            &QConfig::default(),
        )
        .unwrap();
        assert_eq!(p.stop_reason, StopReason::ConsecutiveFails);
        assert!(p.points[0].passes);
        assert!((p.points[0].q - 1.0).abs() < 1e-8);
        let n = p.points.len();
        assert!(n >= 3);
        assert!(!p.points[n - 1].passes && !p.points[n - 2].passes);
        // consecutive zeros of Im g, strictly increasing
        for w in p.points.windows(2) {
            assert!(w[0].endpoint < w[1].endpoint);
        }
    }

    #[test]
    fn cosine_product_profile_from_its_center() {
        let f = compiled("h(1,2)");
        let p = scan_profile(
            &f,
            PI / 2.0,
            Parity::Sine,
            0.0,
            Direction::Right,
            &ScanOptions::default(),
            &QConfig::default(),
        )
        .unwrap();
        // first endpoint is the next zero 3 pi/4 with q = 1 (k0 = 1)
        assert!((p.points[0].endpoint - 3.0 * PI / 4.0).abs() < 1e-10);
        assert!((p.points[0].q - 1.0).abs() < 1e-10);
        // later points drop below the threshold and the stop rule fires
        assert_eq!(p.stop_reason, StopReason::ConsecutiveFails);
        assert!(p.points.len() >= 3);
    }

    #[test]
    fn shifted_cosine_onset_shows_in_the_profile() {
        let f = compiled("hs(0.5,1)");
        let opts = ScanOptions {
            max_points: 5,
            stop_after_fails: 0,
            horizon: None,
        };
        let p = scan_profile(
            &f,
            0.0,
            Parity::Cosine,
            0.0,
            Direction::Right,
            &opts,
            &QConfig::default(),
        )
        .unwrap();
        assert_eq!(p.stop_reason, StopReason::MaxPoints);
        assert_eq!(p.points.len(), 5);
        let want = [PI / 3.0, PI, 5.0 * PI / 3.0, 2.0 * PI, 7.0 * PI / 3.0];
        for (pt, w) in p.points.iter().zip(want) {
            assert!((pt.endpoint - w).abs() < 1e-9, "{} vs {w}", pt.endpoint);
        }
        // onset of the next superoscillation: rows 3 and 5 exceed rows 2 and 4
        assert!(p.points[2].q > p.points[1].q + 0.01);
        assert!(p.points[4].q > p.points[3].q + 0.01);
    }

    #[test]
    fn pure_tone_profile_is_identically_zero() {
        let f = compiled("sin(x)");
        let p = scan_profile(
            &f,
            0.0,
            Parity::Sine,
            0.0,
            Direction::Right,
            &ScanOptions::default(),
            &QConfig::default(),
        )
        .unwrap();
        assert_eq!(p.stop_reason, StopReason::ConsecutiveFails);
        for pt in &p.points {
            assert!(pt.q.abs() < 1e-10, "q({}) = {}", pt.endpoint, pt.q);
        }
    }

    #[test]
    fn even_function_scans_symmetrically() {
        let f = compiled("re(g(2,10))");
        let opts = ScanOptions {
            max_points: 3,
            stop_after_fails: 0,
            horizon: None,
        };
        let cfg = QConfig::default();
        let right = scan_profile(&f, 0.0, Parity::Cosine, 0.0, Direction::Right, &opts, &cfg)
            .unwrap();
        let left = scan_profile(&f, 0.0, Parity::Cosine, 0.0, Direction::Left, &opts, &cfg)
            .unwrap();
        assert_eq!(right.points.len(), left.points.len());
        for (r, l) in right.points.iter().zip(&left.points) {
            assert!((r.endpoint + l.endpoint).abs() < 1e-9);
            assert!((r.q - l.q).abs() < 1e-8);
        }
    }

    #[test]
    fn disabling_the_stop_rule_extends_the_profile() {
        let f = compiled("im(g(2,10))");
        let cfg = QConfig::default();
        let stopped = scan_profile(
            &f,
            0.0,
            Parity::Sine,
            0.0,
            Direction::Right,
            &ScanOptions::default(),
            &cfg,
        )
        .unwrap();
        let open = scan_profile(
            &f,
            0.0,
            Parity::Sine,
            0.0,
            Direction::Right,
            &ScanOptions {
                max_points: stopped.points.len() + 3,
                stop_after_fails: 0,
                horizon: None,
            },
            &cfg,
        )
        .unwrap();
        assert!(open.points.len() > stopped.points.len());
        for (a, b) in stopped.points.iter().zip(&open.points) {
            assert_eq!(a, b, "common prefix must match exactly");
        }
    }

    #[test]
    fn inadmissible_anchor_is_rejected() {
        let f = compiled("sin(x)");
        let e = scan_profile(
            &f,
            0.3,
            Parity::Sine,
            0.0,
            Direction::Right,
            &ScanOptions::default(),
            &QConfig::default(),
        );
        assert!(matches!(e, Err(CriteriaError::AnchorNotAdmissible { .. })));
    }
}
