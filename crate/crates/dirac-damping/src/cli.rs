//! Batch front end: spectra, identity reports and basis diagnostics as
//! machine-readable documents.
//!
//! All commands emit either JSON (one document, fixed key order, floats with
//! 17 significant digits so values round-trip exactly) or CSV with a fixed,
//! documented column order.  Identical configurations produce byte-identical
//! output; there is no randomness anywhere in the pipeline.

use crate::charfn::DampingParams;
use crate::contour::{self, SpectralWindow};
use crate::modes;
use crate::rational::{self, DampingRegime, EigenvalueRecord, WindowSpectrum};
use crate::stargraph::{self, StarConfig};
use crate::trace::{self, TraceModel, TraceReport};
use num_complex::Complex64;
use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::PathBuf;
use thiserror::Error;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("identity violation: {0}")]
    Identity(String),
    #[error("i/o failure: {0}")]
    Io(String),
}

impl CliError {
    /// Process exit status: 2 for config/solver/io problems, 3 for identity
    /// violations.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Identity(_) => 3,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    Interval,
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Placement {
    Rational { p: u32, q: u32 },
    Position(f64),
    Edges(u32),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

/// Everything a command run needs.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Model,
    pub placement: Placement,
    pub alpha: Complex64,
    /// Window half-height: `Im λ ∈ [-im_max, im_max]`.
    pub im_max: f64,
    /// Window half-width; `None` asks for the adaptive strip bound.
    pub re_max: Option<f64>,
    /// Truncation order (series branches, Gram ladder cap).
    pub trunc: u32,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    /// Spectral parameter for the Green kernel command.
    pub lambda: Complex64,
    /// Grid points per axis for the Green kernel command.
    pub grid: u32,
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        match (self.model, self.placement) {
            (Model::Interval, Placement::Edges(_)) => {
                return Err(CliError::Config("interval model takes --pq or --a, not --n".into()))
            }
            (Model::Star, Placement::Rational { .. } | Placement::Position(_)) => {
                return Err(CliError::Config("star model takes --n, not --pq/--a".into()))
            }
            _ => {}
        }
        if !(self.im_max > 0.0 && self.im_max.is_finite()) {
            return Err(CliError::Config("im-max must be positive and finite".into()));
        }
        if let Some(re) = self.re_max {
            if !(re > 0.0 && re.is_finite()) {
                return Err(CliError::Config("re-max must be positive and finite".into()));
            }
        }
        if self.trunc == 0 {
            return Err(CliError::Config("trunc must be at least 1".into()));
        }
        if self.grid < 2 {
            return Err(CliError::Config("grid needs at least 2 points per axis".into()));
        }
        Ok(())
    }

    fn interval_params(&self) -> Result<DampingParams, CliError> {
        match self.placement {
            Placement::Rational { p, q } => DampingParams::rational(p, q, self.alpha)
                .map_err(|e| CliError::Config(e.to_string())),
            Placement::Position(a) => {
                DampingParams::new(a, self.alpha).map_err(|e| CliError::Config(e.to_string()))
            }
            Placement::Edges(_) => Err(CliError::Config("interval placement required".into())),
        }
    }

    fn star_config(&self) -> Result<StarConfig, CliError> {
        match self.placement {
            Placement::Edges(n) => {
                StarConfig::new(n, self.alpha).map_err(|e| CliError::Config(e.to_string()))
            }
            _ => Err(CliError::Config("star model requires --n".into())),
        }
    }
}

/// Parse a complex literal `a+bi` with optional parts: `2`, `-1.5`, `3i`,
/// `1+2i`, `-0.5-3i`, `i`, `-i`.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err(CliError::Config("empty complex literal".into()));
    }
    let bad = || CliError::Config(format!("cannot parse complex literal '{text}'"));
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // split at the sign that separates real and imaginary parts
        let mut split = None;
        for (idx, ch) in body.char_indices().skip(1) {
            if (ch == '+' || ch == '-') && !matches!(&body[idx - 1..idx], "e" | "E") {
                split = Some(idx);
            }
        }
        match split {
            Some(idx) => {
                let re: f64 = body[..idx].parse().map_err(|_| bad())?;
                let im_text = &body[idx..];
                let im: f64 = match im_text {
                    "+" => 1.0,
                    "-" => -1.0,
                    _ => im_text.parse().map_err(|_| bad())?,
                };
                Ok(Complex64::new(re, im))
            }
            None => {
                let im: f64 = match body {
                    "" => 1.0,
                    "-" => -1.0,
                    "+" => 1.0,
                    _ => body.parse().map_err(|_| bad())?,
                };
                Ok(Complex64::new(0.0, im))
            }
        }
    } else {
        let re: f64 = s.parse().map_err(|_| bad())?;
        Ok(Complex64::new(re, 0.0))
    }
}

/// Parse a `P/Q` fraction.
pub fn parse_fraction(text: &str) -> Result<(u32, u32), CliError> {
    let (p, q) = text
        .split_once('/')
        .ok_or_else(|| CliError::Config(format!("expected P/Q, got '{text}'")))?;
    let parse = |s: &str| {
        s.trim()
            .parse::<u32>()
            .map_err(|_| CliError::Config(format!("bad fraction component '{s}'")))
    };
    Ok((parse(p)?, parse(q)?))
}

// ---------------------------------------------------------------------------
// Deterministic JSON
// ---------------------------------------------------------------------------

/// Minimal JSON document model with deterministic rendering: object keys
/// keep insertion order and floats print with 17 significant digits.
#[derive(Debug, Clone)]
pub enum Json {
    Null,
    Bool(bool),
    Int(i64),
    Num(f64),
    Str(String),
    Arr(Vec<Json>),
    Obj(Vec<(&'static str, Json)>),
}

fn fmt_f64(x: f64) -> String {
    if !x.is_finite() {
        return "null".into();
    }
    let x = if x == 0.0 { 0.0 } else { x }; // normalize -0.0
    format!("{x:.16e}")
}

fn escape_json(s: &str, out: &mut String) {
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04x}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
}

impl Json {
    fn render_into(&self, out: &mut String) {
        match self {
            Json::Null => out.push_str("null"),
            Json::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
            Json::Int(i) => {
                let _ = write!(out, "{i}");
            }
            Json::Num(x) => out.push_str(&fmt_f64(*x)),
            Json::Str(s) => escape_json(s, out),
            Json::Arr(items) => {
                out.push('[');
                for (i, item) in items.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    item.render_into(out);
                }
                out.push(']');
            }
            Json::Obj(fields) => {
                out.push('{');
                for (i, (key, value)) in fields.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    escape_json(key, out);
                    out.push(':');
                    value.render_into(out);
                }
                out.push('}');
            }
        }
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(&mut out);
        out.push('\n');
        out
    }
}

fn json_complex(z: Complex64) -> Json {
    Json::Obj(vec![("re", Json::Num(z.re)), ("im", Json::Num(z.im))])
}

fn json_opt_num(v: Option<f64>) -> Json {
    v.map_or(Json::Null, Json::Num)
}

fn regime_name(regime: DampingRegime) -> &'static str {
    match regime {
        DampingRegime::Subcritical => "subcritical",
        DampingRegime::CriticalPlus => "critical_plus",
        DampingRegime::CriticalMinus => "critical_minus",
    }
}

fn json_config(cfg: &RunConfig) -> Json {
    let placement = match cfg.placement {
        Placement::Rational { p, q } => Json::Obj(vec![
            ("p", Json::Int(p as i64)),
            ("q", Json::Int(q as i64)),
        ]),
        Placement::Position(a) => Json::Obj(vec![("a", Json::Num(a))]),
        Placement::Edges(n) => Json::Obj(vec![("n", Json::Int(n as i64))]),
    };
    Json::Obj(vec![
        (
            "model",
            Json::Str(match cfg.model {
                Model::Interval => "interval".into(),
                Model::Star => "star".into(),
            }),
        ),
        ("placement", placement),
        ("alpha", json_complex(cfg.alpha)),
        ("im_max", Json::Num(cfg.im_max)),
        ("re_max", json_opt_num(cfg.re_max)),
        ("trunc", Json::Int(cfg.trunc as i64)),
        ("tol", json_opt_num(cfg.tol)),
    ])
}

fn json_eigenvalues(records: &[EigenvalueRecord]) -> Json {
    Json::Arr(
        records
            .iter()
            .map(|r| {
                Json::Obj(vec![
                    ("re", Json::Num(r.lambda.re)),
                    ("im", Json::Num(r.lambda.im)),
                    ("family", Json::Int(r.family as i64)),
                    ("branch", Json::Int(r.branch as i64)),
                    ("multiplicity", Json::Int(r.alg_multiplicity as i64)),
                    ("residual", Json::Num(r.residual)),
                ])
            })
            .collect(),
    )
}

fn json_trace_report(report: &TraceReport) -> Json {
    Json::Obj(vec![
        (
            "model",
            Json::Str(match report.model {
                TraceModel::Interval => "interval".into(),
                TraceModel::StarGraph => "star".into(),
            }),
        ),
        ("regime", Json::Str(regime_name(report.regime).into())),
        ("trace_re_inverse", Json::Num(report.trace_re_inverse)),
        ("spectral_sum_closed", json_opt_num(report.spectral_sum_closed)),
        ("spectral_sum_truncated", Json::Num(report.spectral_sum_truncated)),
        ("tail_bound", Json::Num(report.tail_bound)),
        ("gap", json_opt_num(report.gap)),
        ("critical_correction", Json::Num(report.critical_correction)),
        ("riesz_verdict", Json::Bool(report.riesz_verdict)),
        ("r", report.r.map_or(Json::Null, |r| Json::Int(r as i64))),
        ("rule_based", Json::Bool(report.rule_based)),
        ("c1", Json::Num(report.c1)),
        ("c2", Json::Num(report.c2)),
        ("verdict_tol", Json::Num(report.verdict_tol)),
    ])
}

fn document(
    cfg: &RunConfig,
    eigenvalues: Json,
    trace_report: Json,
    diagnostics: Json,
) -> Json {
    Json::Obj(vec![
        ("schema_version", Json::Int(SCHEMA_VERSION as i64)),
        ("config", json_config(cfg)),
        ("eigenvalues", eigenvalues),
        ("trace_report", trace_report),
        ("diagnostics", diagnostics),
    ])
}

// ---------------------------------------------------------------------------
// Commands
// ---------------------------------------------------------------------------

fn compute_spectrum(
    cfg: &RunConfig,
) -> Result<(WindowSpectrum, SpectralWindow, Option<f64>, DampingRegime), CliError> {
    let solver = |e: &dyn std::fmt::Display| CliError::Solver(e.to_string());
    match cfg.model {
        Model::Star => {
            let star = cfg.star_config()?;
            let re = cfg.re_max.unwrap_or_else(|| {
                // family-2 real part plus margin
                let n = star.edges() as f64;
                let zeta = (star.alpha() + n) / (star.alpha() - n);
                let bound = if zeta.is_finite() && zeta.norm() > 0.0 {
                    (zeta.norm().ln() / (2.0 * PI)).abs() + 1.0
                } else {
                    1.0
                };
                bound.max(2.0)
            });
            let window = SpectralWindow::new(-re, re, -cfg.im_max, cfg.im_max)
                .map_err(|e| solver(&e))?;
            let spectrum = stargraph::graph_eigenvalues(&star, &window).map_err(|e| solver(&e))?;
            Ok((spectrum, window, None, star.regime()))
        }
        Model::Interval => {
            let params = cfg.interval_params()?;
            let regime = DampingRegime::classify(params.alpha(), 2.0);
            if params.rational_placement().is_some() {
                let re = cfg.re_max.unwrap_or_else(|| 4.0f64.max(2.0 * cfg.alpha.norm()));
                // rational ladders have fixed real parts; make sure the
                // default window spans them all
                let re = if cfg.re_max.is_none() {
                    let (p, q) = params.rational_placement().unwrap();
                    rational::build_polynomial(p, q, params.alpha())
                        .and_then(|poly| rational::find_roots(&poly))
                        .map(|roots| {
                            roots
                                .iter()
                                .filter(|r| !r.is_zero())
                                .map(|r| (q as f64 / (2.0 * PI) * r.modulus.ln()).abs() + 1.0)
                                .fold(re, f64::max)
                        })
                        .unwrap_or(re)
                } else {
                    re
                };
                let window = SpectralWindow::new(-re, re, -cfg.im_max, cfg.im_max)
                    .map_err(|e| solver(&e))?;
                let spectrum = rational::spectrum(&params, &window).map_err(|e| solver(&e))?;
                Ok((spectrum, window, None, regime))
            } else {
                let (window, c1) = match cfg.re_max {
                    Some(re) => (
                        SpectralWindow::new(-re, re, -cfg.im_max, cfg.im_max)
                            .map_err(|e| solver(&e))?,
                        re,
                    ),
                    None => contour::default_strip(&params, -cfg.im_max, cfg.im_max)
                        .map_err(|e| solver(&e))?,
                };
                let eigenvalues =
                    contour::locate_eigenvalues(&window, &params).map_err(|e| solver(&e))?;
                let spectrum = WindowSpectrum { eigenvalues, escaped_roots: Vec::new() };
                Ok((spectrum, window, Some(c1), regime))
            }
        }
    }
}

fn csv_spectrum(records: &[EigenvalueRecord]) -> String {
    let mut out = String::from("re,im,family,branch,multiplicity,residual\n");
    for r in records {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            fmt_f64(r.lambda.re),
            fmt_f64(r.lambda.im),
            r.family,
            r.branch,
            r.alg_multiplicity,
            fmt_f64(r.residual)
        );
    }
    out
}

/// `spectrum` / `graph-spectrum`: eigenvalue table sorted by Im λ.
pub fn cmd_spectrum(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let (spectrum, window, c1, regime) = compute_spectrum(cfg)?;
    if let Some(tol) = cfg.tol {
        if let Some(bad) = spectrum.eigenvalues.iter().find(|r| r.residual > tol) {
            return Err(CliError::Solver(format!(
                "eigenvalue at {} has residual {} above --tol {}",
                bad.lambda, bad.residual, tol
            )));
        }
    }
    match cfg.format {
        OutputFormat::Csv => Ok(csv_spectrum(&spectrum.eigenvalues)),
        OutputFormat::Json => {
            let diagnostics = Json::Obj(vec![
                (
                    "window",
                    Json::Obj(vec![
                        ("re_min", Json::Num(window.re_min)),
                        ("re_max", Json::Num(window.re_max)),
                        ("im_min", Json::Num(window.im_min)),
                        ("im_max", Json::Num(window.im_max)),
                    ]),
                ),
                ("c1", json_opt_num(c1)),
                ("count", Json::Int(spectrum.eigenvalues.len() as i64)),
                (
                    "total_multiplicity",
                    Json::Int(
                        spectrum
                            .eigenvalues
                            .iter()
                            .map(|r| r.alg_multiplicity as i64)
                            .sum(),
                    ),
                ),
                ("regime", Json::Str(regime_name(regime).into())),
                (
                    "escaped_roots",
                    Json::Arr(
                        spectrum
                            .escaped_roots
                            .iter()
                            .map(|r| {
                                Json::Obj(vec![
                                    ("re", Json::Num(r.zeta.re)),
                                    ("im", Json::Num(r.zeta.im)),
                                    ("multiplicity", Json::Int(r.multiplicity as i64)),
                                ])
                            })
                            .collect(),
                    ),
                ),
            ]);
            Ok(document(cfg, json_eigenvalues(&spectrum.eigenvalues), Json::Null, diagnostics)
                .render())
        }
    }
}

fn csv_trace_report(report: &TraceReport) -> String {
    let mut out = String::from("field,value\n");
    let mut push = |k: &str, v: String| {
        let _ = writeln!(out, "{k},{v}");
    };
    push(
        "model",
        match report.model {
            TraceModel::Interval => "interval".into(),
            TraceModel::StarGraph => "star".into(),
        },
    );
    push("regime", regime_name(report.regime).into());
    push("trace_re_inverse", fmt_f64(report.trace_re_inverse));
    push(
        "spectral_sum_closed",
        report.spectral_sum_closed.map_or("".into(), fmt_f64),
    );
    push("spectral_sum_truncated", fmt_f64(report.spectral_sum_truncated));
    push("tail_bound", fmt_f64(report.tail_bound));
    push("gap", report.gap.map_or("".into(), fmt_f64));
    push("critical_correction", fmt_f64(report.critical_correction));
    push("riesz_verdict", report.riesz_verdict.to_string());
    push("r", report.r.map_or("".into(), |r| r.to_string()));
    push("rule_based", report.rule_based.to_string());
    push("c1", fmt_f64(report.c1));
    push("c2", fmt_f64(report.c2));
    push("verdict_tol", fmt_f64(report.verdict_tol));
    out
}

/// `verify`: the Livšic trace report.  Exit code 3 (as [`CliError::Identity`])
/// when the internal consistency checks fail.
pub fn cmd_verify(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    let report = match cfg.model {
        Model::Interval => {
            let params = cfg.interval_params()?;
            trace::livsic_report(&params, cfg.trunc)
        }
        Model::Star => {
            let star = cfg.star_config()?;
            trace::livsic_report_graph(star.edges(), star.alpha(), cfg.trunc)
        }
    }
    .map_err(|e| CliError::Identity(e.to_string()))?;
    let slack_ok = match (report.spectral_sum_closed, cfg.tol) {
        (Some(closed), Some(tol)) => {
            (report.spectral_sum_truncated - closed).abs() <= report.tail_bound + tol
        }
        _ => true,
    };
    if !report.is_consistent() || !slack_ok {
        return Err(CliError::Identity(format!(
            "trace report inconsistent: truncated {} vs closed {:?} (tail bound {})",
            report.spectral_sum_truncated, report.spectral_sum_closed, report.tail_bound
        )));
    }
    match cfg.format {
        OutputFormat::Csv => Ok(csv_trace_report(&report)),
        OutputFormat::Json => {
            Ok(document(cfg, Json::Arr(Vec::new()), json_trace_report(&report), Json::Null)
                .render())
        }
    }
}

/// `basis`: Gram condition numbers over a geometric ladder of truncation
/// sizes plus the biorthogonality residual of the first pairs.
pub fn cmd_basis(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    if cfg.model != Model::Interval {
        return Err(CliError::Config(
            "basis diagnostics are defined for the interval model".into(),
        ));
    }
    let params = cfg.interval_params()?;
    let solver = |e: &dyn std::fmt::Display| CliError::Solver(e.to_string());

    let ladder: Vec<usize> = [8usize, 16, 32, 64]
        .into_iter()
        .filter(|&s| s <= cfg.trunc as usize)
        .collect();
    let ladder = if ladder.is_empty() { vec![cfg.trunc as usize] } else { ladder };
    let max_size = *ladder.last().unwrap();

    // enough eigenvalues, ordered by |Im λ|
    let mut records = if let Some((_, q)) = params.rational_placement() {
        let im = q as f64 * (max_size as f64 + 2.0);
        let re = 4.0f64.max(2.0 * cfg.alpha.norm()) + 4.0;
        let window =
            SpectralWindow::new(-re, re, -im, im).map_err(|e| solver(&e))?;
        rational::spectrum(&params, &window).map_err(|e| solver(&e))?.eigenvalues
    } else {
        let (window, _) = contour::default_strip(&params, -(max_size as f64 + 2.0), max_size as f64 + 2.0)
            .map_err(|e| solver(&e))?;
        contour::locate_eigenvalues(&window, &params).map_err(|e| solver(&e))?
    };
    modes::sort_for_gram(&mut records);
    if records.len() < max_size {
        return Err(CliError::Solver(format!(
            "only {} eigenvalues available for a ladder of {}",
            records.len(),
            max_size
        )));
    }

    let mut ladder_rows = Vec::new();
    for &size in &ladder {
        let system = modes::mode_system(&records[..size], &params).map_err(|e| solver(&e))?;
        let condition = modes::gram_condition_of(&system).map_err(|e| solver(&e))?;
        ladder_rows.push((size, condition));
    }

    // biorthogonality residual ‖B - I‖_F over the first pairs
    let pair_count = 10.min(records.len());
    let mut pairs = Vec::with_capacity(pair_count);
    for rec in records.iter().take(pair_count) {
        pairs.push(
            modes::biorthogonal_pair(rec.lambda, &params).map_err(|e| solver(&e))?,
        );
    }
    let mut frob = 0.0;
    for (i, (_, phi, _)) in pairs.iter().enumerate() {
        for (j, (psi, _, _)) in pairs.iter().enumerate() {
            let ip = modes::energy_inner_product(phi, psi).map_err(|e| solver(&e))?;
            let want = if i == j { 1.0 } else { 0.0 };
            frob += (ip - want).norm_sqr();
        }
    }
    let biorth_residual = frob.sqrt();

    match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::from("record,size,value\n");
            for (size, condition) in &ladder_rows {
                let _ = writeln!(out, "gram,{size},{}", fmt_f64(*condition));
            }
            let _ = writeln!(out, "biorthogonality,{pair_count},{}", fmt_f64(biorth_residual));
            Ok(out)
        }
        OutputFormat::Json => {
            let diagnostics = Json::Obj(vec![
                (
                    "gram_ladder",
                    Json::Arr(
                        ladder_rows
                            .iter()
                            .map(|(size, condition)| {
                                Json::Obj(vec![
                                    ("size", Json::Int(*size as i64)),
                                    ("condition", Json::Num(*condition)),
                                ])
                            })
                            .collect(),
                    ),
                ),
                ("biorthogonality_pairs", Json::Int(pair_count as i64)),
                ("biorthogonality_residual", Json::Num(biorth_residual)),
            ]);
            Ok(document(cfg, json_eigenvalues(&records[..max_size]), Json::Null, diagnostics)
                .render())
        }
    }
}

/// `green`: evaluate the resolvent kernel `𝒢_λ` on a uniform grid.
pub fn cmd_green(cfg: &RunConfig) -> Result<String, CliError> {
    cfg.validate()?;
    if cfg.model != Model::Interval {
        return Err(CliError::Config("the Green kernel command works on the interval".into()));
    }
    let params = cfg.interval_params()?;
    let kernel = modes::green_kernel(cfg.lambda, &params)
        .map_err(|e| CliError::Solver(e.to_string()))?;
    let m = cfg.grid as usize;
    let coord = |i: usize| PI * i as f64 / (m - 1) as f64;
    match cfg.format {
        OutputFormat::Csv => {
            let mut out = String::from("x,y,re,im\n");
            for i in 0..m {
                for j in 0..m {
                    let v = kernel.kernel(coord(i), coord(j));
                    let _ = writeln!(
                        out,
                        "{},{},{},{}",
                        fmt_f64(coord(i)),
                        fmt_f64(coord(j)),
                        fmt_f64(v.re),
                        fmt_f64(v.im)
                    );
                }
            }
            Ok(out)
        }
        OutputFormat::Json => {
            let mut rows = Vec::with_capacity(m * m);
            for i in 0..m {
                for j in 0..m {
                    let v = kernel.kernel(coord(i), coord(j));
                    rows.push(Json::Arr(vec![
                        Json::Num(coord(i)),
                        Json::Num(coord(j)),
                        Json::Num(v.re),
                        Json::Num(v.im),
                    ]));
                }
            }
            let diagnostics = Json::Obj(vec![
                ("lambda", json_complex(cfg.lambda)),
                ("s_value", json_complex(kernel.s_value)),
                ("grid", Json::Int(cfg.grid as i64)),
                ("values", Json::Arr(rows)),
            ]);
            Ok(document(cfg, Json::Arr(Vec::new()), Json::Null, diagnostics).render())
        }
    }
}

/// Write rendered output to the configured destination.
pub fn write_output(cfg: &RunConfig, content: &str) -> Result<(), CliError> {
    match &cfg.out {
        Some(path) => std::fs::write(path, content).map_err(|e| CliError::Io(e.to_string())),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn base_config() -> RunConfig {
        RunConfig {
            model: Model::Interval,
            placement: Placement::Rational { p: 1, q: 2 },
            alpha: c(2.0, 0.0),
            im_max: 7.0,
            re_max: None,
            trunc: 100,
            format: OutputFormat::Json,
            out: None,
            tol: None,
            lambda: c(0.0, 0.0),
            grid: 5,
        }
    }

    #[test]
    fn complex_literals() {
        assert_eq!(parse_complex("2").unwrap(), c(2.0, 0.0));
        assert_eq!(parse_complex("-1.5").unwrap(), c(-1.5, 0.0));
        assert_eq!(parse_complex("3i").unwrap(), c(0.0, 3.0));
        assert_eq!(parse_complex("1+2i").unwrap(), c(1.0, 2.0));
        assert_eq!(parse_complex("-0.5-3i").unwrap(), c(-0.5, -3.0));
        assert_eq!(parse_complex("i").unwrap(), c(0.0, 1.0));
        assert_eq!(parse_complex("-i").unwrap(), c(0.0, -1.0));
        assert_eq!(parse_complex("1e-3+2e2i").unwrap(), c(1e-3, 2e2));
        assert_eq!(parse_complex(" 1 + 2 i ").unwrap(), c(1.0, 2.0));
        assert!(parse_complex("").is_err());
        assert!(parse_complex("2+3j").is_err());
    }

    #[test]
    fn fractions() {
        assert_eq!(parse_fraction("1/3").unwrap(), (1, 3));
        assert!(parse_fraction("13").is_err());
        assert!(parse_fraction("a/b").is_err());
    }

    #[test]
    fn json_rendering_is_deterministic() {
        let doc = Json::Obj(vec![
            ("b", Json::Num(1.0 / 3.0)),
            ("a", Json::Arr(vec![Json::Int(1), Json::Null, Json::Bool(true)])),
            ("s", Json::Str("q\"uote".into())),
        ]);
        let one = doc.render();
        let two = doc.render();
        assert_eq!(one, two);
        assert!(one.contains("3.3333333333333331e-1"));
        assert!(one.contains("\\\""));
    }

    #[test]
    fn spectrum_document_structure() {
        let cfg = base_config();
        let out = cmd_spectrum(&cfg).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["schema_version"], 1);
        assert_eq!(doc["config"]["model"], "interval");
        let eigs = doc["eigenvalues"].as_array().unwrap();
        assert_eq!(eigs.len(), 6); // ±2i, ±4i, ±6i
        let first = &eigs[0];
        assert_eq!(first["im"].as_f64().unwrap(), -6.0);
        assert_eq!(doc["diagnostics"]["regime"], "critical_plus");
    }

    #[test]
    fn spectrum_examples_from_the_interface() {
        // interval, a = 1.0, α = 0, im-max 3.5 → ±i, ±2i, ±3i
        let cfg = RunConfig {
            placement: Placement::Position(1.0),
            alpha: c(0.0, 0.0),
            im_max: 3.5,
            ..base_config()
        };
        let out = cmd_spectrum(&cfg).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        let eigs = doc["eigenvalues"].as_array().unwrap();
        let ims: Vec<f64> = eigs.iter().map(|e| e["im"].as_f64().unwrap().round()).collect();
        assert_eq!(ims, vec![-3.0, -2.0, -1.0, 1.0, 2.0, 3.0]);

        // star n = 3, α = 3, im-max 2.5 → ±i, ±2i
        let cfg = RunConfig {
            model: Model::Star,
            placement: Placement::Edges(3),
            alpha: c(3.0, 0.0),
            im_max: 2.5,
            ..base_config()
        };
        let out = cmd_spectrum(&cfg).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        let eigs = doc["eigenvalues"].as_array().unwrap();
        assert_eq!(eigs.len(), 4);
        for e in eigs {
            assert!(e["re"].as_f64().unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn csv_has_documented_columns() {
        let cfg = RunConfig { format: OutputFormat::Csv, ..base_config() };
        let out = cmd_spectrum(&cfg).unwrap();
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), "re,im,family,branch,multiplicity,residual");
        assert_eq!(lines.count(), 6);
    }

    #[test]
    fn verify_documents() {
        let cfg = RunConfig {
            placement: Placement::Rational { p: 1, q: 3 },
            alpha: c(1.0, 0.0),
            trunc: 150,
            ..base_config()
        };
        let out = cmd_verify(&cfg).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        let report = &doc["trace_report"];
        assert_eq!(report["riesz_verdict"], true);
        assert!(report["gap"].as_f64().unwrap().abs() < 1e-8);
        // critical case: verdict false but exit is still success
        let cfg = RunConfig {
            placement: Placement::Rational { p: 1, q: 3 },
            alpha: c(2.0, 0.0),
            trunc: 150,
            ..base_config()
        };
        let out = cmd_verify(&cfg).unwrap();
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["trace_report"]["riesz_verdict"], false);
        let gap = doc["trace_report"]["gap"].as_f64().unwrap();
        assert!((gap - PI / 3.0).abs() < 1e-9);
    }

    #[test]
    fn green_values() {
        let cfg = RunConfig {
            placement: Placement::Position(1.0),
            alpha: c(3.0, -1.0),
            format: OutputFormat::Csv,
            grid: 3,
            ..base_config()
        };
        let out = cmd_green(&cfg).unwrap();
        let mut lines = out.lines();
        assert_eq!(lines.next().unwrap(), "x,y,re,im");
        // center point: 𝒢₀(π/2, π/2) = -π/4
        let center: Vec<&str> = out.lines().nth(1 + 4).unwrap().split(',').collect();
        let re: f64 = center[2].parse().unwrap();
        assert!((re + PI / 4.0).abs() < 1e-12);
    }

    #[test]
    fn byte_identical_reruns() {
        let cfg = base_config();
        assert_eq!(cmd_spectrum(&cfg).unwrap(), cmd_spectrum(&cfg).unwrap());
        let cfg = RunConfig {
            placement: Placement::Position(1.1),
            alpha: c(0.8, 0.3),
            im_max: 4.0,
            ..base_config()
        };
        assert_eq!(cmd_spectrum(&cfg).unwrap(), cmd_spectrum(&cfg).unwrap());
    }

    #[test]
    fn config_validation_errors() {
        let cfg = RunConfig { model: Model::Star, ..base_config() };
        assert!(matches!(cmd_spectrum(&cfg), Err(CliError::Config(_))));
        let cfg = RunConfig { im_max: -1.0, ..base_config() };
        assert!(matches!(cmd_spectrum(&cfg), Err(CliError::Config(_))));
        let cfg = RunConfig { model: Model::Star, placement: Placement::Edges(2), ..base_config() };
        assert!(matches!(cmd_basis(&cfg), Err(CliError::Config(_))));
        assert_eq!(CliError::Identity("x".into()).exit_code(), 3);
        assert_eq!(CliError::Config("x".into()).exit_code(), 2);
    }
}
