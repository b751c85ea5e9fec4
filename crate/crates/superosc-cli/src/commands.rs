//! Subcommand implementations.

use superosc::criteria::{
    check_criterion, classify_definition, CriteriaError, QConfig, QReport,
};
use superosc::numerics::{find_extrema, find_roots};
use superosc::scanner::{scan_profile, Direction, ScanOptions};
use superosc::wavenumber::{wavenumber_report, WavenumberError};
use superosc::{
    compile, default_registry, parse, BandlimitedFunction, Interval, NumericsError, Parity,
};

use crate::output::{csv_line, fmt_sig, json_array, json_interval, JsonObj};
use crate::{Cli, Command, DirectionArg, Failure, FormatArg, ModeArg};

pub fn run(cli: Cli) -> Result<String, Failure> {
    let cfg = build_config(&cli)?;
    let format = cli.out;
    match cli.command {
        Command::Analyze {
            func,
            mode,
            interval,
            c,
        } => analyze(&func, mode, interval, c, &cfg, format),
        Command::Scan {
            func,
            mode,
            anchor,
            c,
            direction,
            max_points,
            stop_after_fails,
        } => scan(
            &func,
            mode,
            anchor,
            c,
            direction,
            max_points,
            stop_after_fails,
            &cfg,
            format,
        ),
        Command::Classify {
            func,
            mode,
            interval,
            c,
            window,
        } => classify(&func, mode, interval, c, window, &cfg, format),
        Command::Wavenumber {
            func,
            range,
            samples,
        } => wavenumber(&func, range, samples, format),
        Command::Catalog => Ok(catalog(format)),
    }
}

fn build_config(cli: &Cli) -> Result<QConfig, Failure> {
    if !(cli.tol > 0.0) {
        return Err(Failure::usage("--tol must be positive"));
    }
    if !(cli.threshold > 0.0 && cli.threshold < 1.0) {
        return Err(Failure::usage("--threshold must lie in (0, 1)"));
    }
    if cli.kmax < 16 {
        return Err(Failure::usage("--kmax must be at least 16"));
    }
    if let Some(step) = cli.step {
        if !(step > 0.0) {
            return Err(Failure::usage("--step must be positive"));
        }
    }
    Ok(QConfig {
        threshold: cli.threshold,
        quad_tol: cli.tol,
        kmax_cap: cli.kmax,
        scan_step: cli.step,
        ..QConfig::default()
    })
}

fn compile_func(text: &str) -> Result<BandlimitedFunction, Failure> {
    let expr = parse(text).map_err(|e| Failure::usage(format!("--func: {e}")))?;
    compile(&expr).map_err(|e| Failure::usage(format!("--func: {e}")))
}

fn parity_of(mode: ModeArg) -> Parity {
    match mode {
        ModeArg::Sine => Parity::Sine,
        ModeArg::Cosine => Parity::Cosine,
    }
}

fn reference_level(mode: ModeArg, c: Option<f64>) -> Result<f64, Failure> {
    match (mode, c) {
        (ModeArg::Sine, c) => Ok(c.unwrap_or(0.0)),
        (ModeArg::Cosine, None) => Ok(0.0),
        (ModeArg::Cosine, Some(_)) => Err(Failure::usage(
            "--c applies to the sine criterion only; the cosine criterion has no reference level",
        )),
    }
}

fn make_interval(pair: (f64, f64)) -> Result<Interval, Failure> {
    Interval::new(pair.0, pair.1)
        .map_err(|e| Failure::usage(format!("--interval/--range/--window: {e}")))
}

fn criteria_failure(e: CriteriaError) -> Failure {
    match e {
        CriteriaError::InvalidEndpoints { .. }
        | CriteriaError::UndefinedQ
        | CriteriaError::NoAdmissibleEndpoints { .. }
        | CriteriaError::AnchorNotAdmissible { .. }
        | CriteriaError::WindowDoesNotCoverTarget { .. }
        | CriteriaError::NotRealValued { .. } => Failure::precondition(e.to_string()),
        CriteriaError::Numerics(NumericsError::EmptyRange { .. })
        | CriteriaError::Numerics(NumericsError::StepTooLarge { .. }) => {
            Failure::usage(e.to_string())
        }
        CriteriaError::Numerics(_) | CriteriaError::Eval(_) => Failure::numeric(e.to_string()),
        CriteriaError::Compile(_) => Failure::usage(e.to_string()),
    }
}

/// Pull a command-line endpoint onto the nearest admissible point when it is
/// a rounded decimal of one. Typed endpoints like `1.5707963` carry ~1e-8 of
/// truncation, far beyond the 1e-9-scale admissibility tolerance; the intent
/// is clearly the nearby zero/extremum, so snap within a 1e-5 radius and let
/// the criterion's own validation settle anything further away.
fn snap_endpoint(
    f: &BandlimitedFunction,
    parity: Parity,
    c: f64,
    b: f64,
    cfg: &QConfig,
) -> f64 {
    let residual = match parity {
        Parity::Sine => f.eval_real(b).map(|v| (v - c).abs()),
        Parity::Cosine => f.derivative_real(b).map(f64::abs),
    };
    let Ok(residual) = residual else { return b };
    let radius = 1e-5 * (1.0 + b.abs());
    let mut scale: f64 = 1.0;
    for i in 0..=32 {
        let x = b - radius + 2.0 * radius * i as f64 / 32.0;
        if let Ok(v) = f.eval_real(x) {
            scale = scale.max(v.abs());
        }
    }
    if residual <= cfg.endpoint_tol * scale {
        return b;
    }
    let Ok(window) = Interval::new(b - radius, b + radius) else {
        return b;
    };
    let found = match parity {
        Parity::Sine => find_roots(f, c, window, radius / 64.0),
        Parity::Cosine => find_extrema(f, window, radius / 64.0),
    };
    match found {
        Ok(list) => list
            .xs()
            .min_by(|p, q| (p - b).abs().total_cmp(&(q - b).abs()))
            .unwrap_or(b),
        Err(_) => b,
    }
}

fn report_json(
    command: &str,
    func: &str,
    parity: Parity,
    c: f64,
    f: &BandlimitedFunction,
    report: &QReport,
    cfg: &QConfig,
) -> String {
    JsonObj::new()
        .str("command", command)
        .str("func", func)
        .str("mode", parity.as_str())
        .num("c", c)
        .raw("interval", json_interval(&report.spectrum.interval))
        .num("band_edge", f.band_edge())
        .int("k0", report.k0)
        .int("k_max", report.spectrum.k_max)
        .num("q", report.q)
        .num("threshold", cfg.threshold)
        .bool("passes", report.passes)
        .bool("valid_endpoints", report.valid_endpoints)
        .raw(
            "endpoint_residuals",
            json_array([
                fmt_sig(report.spectrum.endpoint_residuals.0),
                fmt_sig(report.spectrum.endpoint_residuals.1),
            ]),
        )
        .num("truncation_ratio", report.spectrum.truncation_ratio)
        .bool("truncated", report.spectrum.truncated)
        .finish()
}

fn report_csv(parity: Parity, c: f64, f: &BandlimitedFunction, report: &QReport, cfg: &QConfig) -> String {
    let header = "mode,b1,b2,c,band_edge,k0,k_max,q,threshold,passes,valid_endpoints,residual_b1,residual_b2,truncation_ratio,truncated";
    let row = csv_line(&[
        parity.as_str().to_string(),
        fmt_sig(report.spectrum.interval.lower()),
        fmt_sig(report.spectrum.interval.upper()),
        fmt_sig(c),
        fmt_sig(f.band_edge()),
        report.k0.to_string(),
        report.spectrum.k_max.to_string(),
        fmt_sig(report.q),
        fmt_sig(cfg.threshold),
        report.passes.to_string(),
        report.valid_endpoints.to_string(),
        fmt_sig(report.spectrum.endpoint_residuals.0),
        fmt_sig(report.spectrum.endpoint_residuals.1),
        fmt_sig(report.spectrum.truncation_ratio),
        report.spectrum.truncated.to_string(),
    ]);
    format!("{header}\n{row}")
}

fn analyze(
    func: &str,
    mode: ModeArg,
    interval: (f64, f64),
    c: Option<f64>,
    cfg: &QConfig,
    format: FormatArg,
) -> Result<String, Failure> {
    let f = compile_func(func)?;
    let parity = parity_of(mode);
    let c = reference_level(mode, c)?;
    make_interval(interval)?;
    let lo = snap_endpoint(&f, parity, c, interval.0, cfg);
    let hi = snap_endpoint(&f, parity, c, interval.1, cfg);
    let interval = make_interval((lo, hi))?;
    let report = check_criterion(&f, parity, c, interval, cfg).map_err(criteria_failure)?;
    Ok(match format {
        FormatArg::Json => report_json("analyze", func, parity, c, &f, &report, cfg),
        FormatArg::Csv => report_csv(parity, c, &f, &report, cfg),
    })
}

#[allow(clippy::too_many_arguments)]
fn scan(
    func: &str,
    mode: ModeArg,
    anchor: f64,
    c: Option<f64>,
    direction: DirectionArg,
    max_points: Option<usize>,
    stop_after_fails: Option<usize>,
    cfg: &QConfig,
    format: FormatArg,
) -> Result<String, Failure> {
    let f = compile_func(func)?;
    let parity = parity_of(mode);
    let c = reference_level(mode, c)?;
    let direction = match direction {
        DirectionArg::Left => Direction::Left,
        DirectionArg::Right => Direction::Right,
    };
    // An explicit point budget without an explicit fails rule means "show me
    // exactly this many points": the stop rule would cut the view short.
    let opts = ScanOptions {
        max_points: max_points.unwrap_or(64),
        stop_after_fails: stop_after_fails.unwrap_or(if max_points.is_some() { 0 } else { 2 }),
        horizon: None,
    };
    let anchor = snap_endpoint(&f, parity, c, anchor, cfg);
    let profile =
        scan_profile(&f, anchor, parity, c, direction, &opts, cfg).map_err(criteria_failure)?;
    Ok(match format {
        FormatArg::Json => JsonObj::new()
            .str("command", "scan")
            .str("func", func)
            .str("mode", parity.as_str())
            .num("c", c)
            .num("anchor", profile.anchor)
            .str("direction", profile.direction.as_str())
            .str("stop_reason", profile.stop_reason.as_str())
            .raw(
                "points",
                json_array(profile.points.iter().map(|p| {
                    JsonObj::new()
                        .num("b", p.endpoint)
                        .num("q", p.q)
                        .bool("passes", p.passes)
                        .finish()
                })),
            )
            .finish(),
        FormatArg::Csv => {
            let mut lines = vec!["b,Q,passes".to_string()];
            for p in &profile.points {
                lines.push(csv_line(&[
                    fmt_sig(p.endpoint),
                    fmt_sig(p.q),
                    p.passes.to_string(),
                ]));
            }
            lines.join("\n")
        }
    })
}

fn classify(
    func: &str,
    mode: ModeArg,
    interval: (f64, f64),
    c: Option<f64>,
    window: Option<(f64, f64)>,
    cfg: &QConfig,
    format: FormatArg,
) -> Result<String, Failure> {
    let f = compile_func(func)?;
    let parity = parity_of(mode);
    let c = reference_level(mode, c)?;
    make_interval(interval)?;
    let lo = snap_endpoint(&f, parity, c, interval.0, cfg);
    let hi = snap_endpoint(&f, parity, c, interval.1, cfg);
    let target = make_interval((lo, hi))?;
    let window = window.map(make_interval).transpose()?;
    let verdict = classify_definition(&f, target, parity, c, window, cfg)
        .map_err(criteria_failure)?;
    let opt_interval = |i: &Option<Interval>| match i {
        Some(i) => json_interval(i),
        None => "null".to_string(),
    };
    Ok(match format {
        FormatArg::Json => JsonObj::new()
            .str("command", "classify")
            .str("func", func)
            .str("mode", parity.as_str())
            .num("c", c)
            .raw("target", json_interval(&verdict.target))
            .raw("window", json_interval(&verdict.search_window))
            .bool("superoscillating", verdict.superoscillating)
            .raw("inner", opt_interval(&verdict.inner))
            .raw("outer", opt_interval(&verdict.outer))
            .finish(),
        FormatArg::Csv => {
            let header = "superoscillating,target_b1,target_b2,c,inner_b1,inner_b2,outer_b1,outer_b2,window_b1,window_b2";
            let empty_or = |i: &Option<Interval>, f: fn(&Interval) -> f64| match i {
                Some(i) => fmt_sig(f(i)),
                None => String::new(),
            };
            let row = csv_line(&[
                verdict.superoscillating.to_string(),
                fmt_sig(verdict.target.lower()),
                fmt_sig(verdict.target.upper()),
                fmt_sig(c),
                empty_or(&verdict.inner, Interval::lower),
                empty_or(&verdict.inner, Interval::upper),
                empty_or(&verdict.outer, Interval::lower),
                empty_or(&verdict.outer, Interval::upper),
                fmt_sig(verdict.search_window.lower()),
                fmt_sig(verdict.search_window.upper()),
            ]);
            format!("{header}\n{row}")
        }
    })
}

fn wavenumber(
    func: &str,
    range: (f64, f64),
    samples: usize,
    format: FormatArg,
) -> Result<String, Failure> {
    let f = compile_func(func)?;
    let Some(poly) = f.as_trig_polynomial() else {
        return Err(Failure::representation(format!(
            "`{func}` has no finite trigonometric-polynomial form; the local-wavenumber \
             definition is only evaluated exactly"
        )));
    };
    let range = make_interval(range)?;
    let report = wavenumber_report(&poly, range, samples).map_err(|e| match e {
        WavenumberError::TooFewSamples { .. } => Failure::usage(e.to_string()),
        _ => Failure::numeric(e.to_string()),
    })?;
    Ok(match format {
        FormatArg::Json => JsonObj::new()
            .str("command", "wavenumber")
            .str("func", func)
            .raw("range", json_interval(&range))
            .int("samples", samples)
            .num("band_edge", report.band_edge)
            .num("sup_k", report.sup_k)
            .num("sup_abs_k", report.sup_abs_k)
            .bool("superoscillation", report.flags_superoscillation)
            .int("degenerate_samples", report.degenerate_count)
            .raw(
                "points",
                json_array(report.samples.iter().map(|&(x, k)| {
                    JsonObj::new().num("x", x).num("k", k).finish()
                })),
            )
            .finish(),
        FormatArg::Csv => {
            let mut lines = vec!["x,k".to_string()];
            for &(x, k) in &report.samples {
                lines.push(csv_line(&[fmt_sig(x), fmt_sig(k)]));
            }
            lines.push(format!(
                "# sup_k={} sup_abs_k={} band_edge={} superoscillation={} degenerate_samples={}",
                fmt_sig(report.sup_k),
                fmt_sig(report.sup_abs_k),
                fmt_sig(report.band_edge),
                report.flags_superoscillation,
                report.degenerate_count
            ));
            lines.join("\n")
        }
    })
}

fn catalog(format: FormatArg) -> String {
    struct Row {
        name: String,
        signature: String,
        band_edge: String,
        description: String,
    }
    let mut rows: Vec<Row> = default_registry()
        .entries()
        .iter()
        .map(|e| Row {
            name: e.name().to_string(),
            signature: e.signature().to_string(),
            band_edge: e.band_edge_formula().to_string(),
            description: e.summary().to_string(),
        })
        .collect();
    rows.push(Row {
        name: "sinc".to_string(),
        signature: "sinc(x)".to_string(),
        band_edge: "1".to_string(),
        description: "builtin sin(x)/x; usable anywhere in expressions".to_string(),
    });
    match format {
        FormatArg::Json => JsonObj::new()
            .str("command", "catalog")
            .raw(
                "entries",
                json_array(rows.iter().map(|r| {
                    JsonObj::new()
                        .str("name", &r.name)
                        .str("signature", &r.signature)
                        .str("band_edge", &r.band_edge)
                        .str("description", &r.description)
                        .finish()
                })),
            )
            .finish(),
        FormatArg::Csv => {
            let mut lines = vec!["name,signature,band_edge,description".to_string()];
            for r in rows {
                lines.push(csv_line(&[r.name, r.signature, r.band_edge, r.description]));
            }
            lines.join("\n")
        }
    }
}
