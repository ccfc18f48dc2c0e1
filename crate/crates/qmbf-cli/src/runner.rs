//! Command implementations.

use std::process::ExitCode;

use num_complex::Complex64;
use qmbf::qbessel::{bessel_j, eval_modified, Kind, OrderParam, Representation};
use qmbf::qcore::{
    eq_exp, eq_exp_big, q_gamma, q_psi, QContext, QError, Result, SeriesEval,
};
use qmbf::qhyper::phi_nu;
use qmbf::qmacdonald::{k1_closed, k2_closed, k_auto};
use qmbf::verify::{catalog, catalog_ids, run_identity_suite, GridSpec, ScalingMode};

use crate::output::Record;
use crate::{Cli, Command};

pub fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Eval {
            func,
            q,
            nu,
            z,
            rep,
            precision,
        } => {
            let precision = check_precision(precision)?;
            let ctx = context(q)?;
            let z = parse_complex(&z)?;
            let rep = parse_rep(&rep)?;
            let ev = evaluate(&func, nu, z, rep, &ctx)?;
            let rec = Record::new()
                .num("re_val", ev.value.re)
                .num("im_val", ev.value.im)
                .int("terms", ev.terms_used as u64)
                .flag("converged", ev.converged);
            println!("{}", rec.csv_row(precision));
            Ok(ExitCode::SUCCESS)
        }
        Command::Table {
            func,
            q,
            nu,
            z_range,
            rep,
            format,
            precision,
            skip_errors,
        } => {
            let precision = check_precision(precision)?;
            let format = parse_format(&format)?;
            let ctx = context(q)?;
            let rep = parse_rep(&rep)?;
            let zs = parse_z_range(&z_range)?;
            let mut emitted_header = false;
            for z in zs {
                let row = match evaluate(&func, nu, z, rep, &ctx) {
                    Ok(ev) => table_record(q, nu, z, ev),
                    Err(e @ (QError::InvalidParameter(_) | QError::UnknownIdentity(_))) => {
                        return Err(e); // usage problems always abort
                    }
                    Err(e) => {
                        if !skip_errors {
                            return Err(e);
                        }
                        table_record(
                            q,
                            nu,
                            z,
                            SeriesEval {
                                value: Complex64::new(f64::NAN, f64::NAN),
                                terms_used: 0,
                                converged: false,
                                tail_estimate: f64::NAN,
                            },
                        )
                    }
                };
                if format == Format::Csv && !emitted_header {
                    println!("{}", row.csv_header());
                    emitted_header = true;
                }
                match format {
                    Format::Csv => println!("{}", row.csv_row(precision)),
                    Format::JsonLines => println!("{}", row.json_line(precision)),
                }
            }
            if format == Format::Csv && !emitted_header {
                // empty range: header only
                println!("{}", empty_table_header());
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify {
            suite,
            grid,
            format,
            precision,
        } => {
            let precision = check_precision(precision)?;
            let format = parse_format(&format)?;
            let (gridspec, tol_scale) = match grid {
                Some(path) => parse_grid_file(&path)?,
                None => (GridSpec::default(), 1.0),
            };
            let ctx = QContext::new(0.5)?; // base overridden per grid point
            let ids: Vec<String> = if suite.iter().any(|s| s == "all") {
                catalog_ids().iter().map(|s| s.to_string()).collect()
            } else {
                suite
            };
            let id_refs: Vec<&str> = ids.iter().map(String::as_str).collect();
            let reports = run_identity_suite(&id_refs, &gridspec, &ctx)?;
            let mut failed = 0usize;
            let mut emitted_header = false;
            for r in &reports {
                let pass = if tol_scale == 1.0 {
                    r.pass
                } else {
                    rescaled_pass(r, tol_scale)
                };
                if !pass {
                    failed += 1;
                }
                let params = r
                    .params
                    .iter()
                    .map(|(k, v)| format!("{k}={}", crate::output::fmt_sig(*v, precision)))
                    .collect::<Vec<_>>()
                    .join(";");
                let rec = Record::new()
                    .text("identity", r.identity_id.clone())
                    .text("params", params)
                    .num("re_lhs", r.lhs.re)
                    .num("im_lhs", r.lhs.im)
                    .num("re_rhs", r.rhs.re)
                    .num("im_rhs", r.rhs.im)
                    .num("abs_err", r.abs_err)
                    .num("rel_err", r.rel_err)
                    .flag("pass", pass);
                if format == Format::Csv && !emitted_header {
                    println!("{}", rec.csv_header());
                    emitted_header = true;
                }
                match format {
                    Format::Csv => println!("{}", rec.csv_row(precision)),
                    Format::JsonLines => println!("{}", rec.json_line(precision)),
                }
            }
            println!("{},{},{}", reports.len(), reports.len() - failed, failed);
            if failed > 0 {
                Ok(ExitCode::from(4))
            } else {
                Ok(ExitCode::SUCCESS)
            }
        }
    }
}

#[derive(PartialEq, Clone, Copy)]
enum Format {
    Csv,
    JsonLines,
}

fn parse_format(s: &str) -> Result<Format> {
    match s {
        "csv" => Ok(Format::Csv),
        "jsonl" | "json-lines" => Ok(Format::JsonLines),
        other => Err(QError::InvalidParameter(format!(
            "format must be csv or jsonl, got `{other}`"
        ))),
    }
}

fn check_precision(p: usize) -> Result<usize> {
    if (1..=17).contains(&p) {
        Ok(p)
    } else {
        Err(QError::InvalidParameter(format!(
            "precision must lie in 1..=17, got {p}"
        )))
    }
}

/// Context with the optional Q_BESSEL_MAX_TERMS override.
fn context(q: f64) -> Result<QContext> {
    let ctx = QContext::new(q)?;
    match std::env::var("Q_BESSEL_MAX_TERMS") {
        Ok(v) => {
            let n: usize = v.parse().map_err(|_| {
                QError::InvalidParameter(format!("Q_BESSEL_MAX_TERMS must be a positive integer, got `{v}`"))
            })?;
            if n == 0 {
                return Err(QError::InvalidParameter(
                    "Q_BESSEL_MAX_TERMS must be >= 1".into(),
                ));
            }
            Ok(ctx.with_max_terms(n))
        }
        Err(_) => Ok(ctx),
    }
}

fn parse_rep(s: &str) -> Result<Representation> {
    match s {
        "series" => Ok(Representation::PowerSeries),
        "laurent" => Ok(Representation::Laurent),
        "auto" => Ok(Representation::Auto),
        other => Err(QError::InvalidParameter(format!(
            "representation must be series, laurent or auto, got `{other}`"
        ))),
    }
}

/// Parse `re[,im]`.
fn parse_complex(s: &str) -> Result<Complex64> {
    let bad = |s: &str| QError::InvalidParameter(format!("cannot parse complex value `{s}`; expected re[,im]"));
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(
            re.trim().parse().map_err(|_| bad(s))?,
            im.trim().parse().map_err(|_| bad(s))?,
        )),
        None => Ok(Complex64::new(s.trim().parse().map_err(|_| bad(s))?, 0.0)),
    }
}

/// `start:stop:count` on the real axis, or `ring:radius:count` with the
/// angles offset from the positive real axis.
fn parse_z_range(s: &str) -> Result<Vec<Complex64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let usage = || {
        QError::InvalidParameter(format!(
            "z-range `{s}` not understood; expected start:stop:count or ring:radius:count"
        ))
    };
    match parts.as_slice() {
        ["ring", radius, count] => {
            let r: f64 = radius.parse().map_err(|_| usage())?;
            let n: usize = count.parse().map_err(|_| usage())?;
            Ok((0..n)
                .map(|k| {
                    Complex64::from_polar(
                        r,
                        std::f64::consts::PI * (2.0 * k as f64 + 1.0) / n as f64,
                    )
                })
                .collect())
        }
        [start, stop, count] => {
            let a: f64 = start.parse().map_err(|_| usage())?;
            let b: f64 = stop.parse().map_err(|_| usage())?;
            let n: usize = count.parse().map_err(|_| usage())?;
            Ok(match n {
                0 => Vec::new(),
                1 => vec![Complex64::new(a, 0.0)],
                _ => (0..n)
                    .map(|k| Complex64::new(a + (b - a) * k as f64 / (n - 1) as f64, 0.0))
                    .collect(),
            })
        }
        _ => Err(usage()),
    }
}

fn require_nu(func: &str, nu: Option<f64>) -> Result<OrderParam> {
    nu.map(OrderParam::new).ok_or_else(|| {
        QError::InvalidParameter(format!("function `{func}` requires --nu"))
    })
}

fn wrap(value: Complex64) -> SeriesEval {
    SeriesEval {
        value,
        terms_used: 0,
        converged: true,
        tail_estimate: 0.0,
    }
}

fn require_real(func: &str, z: Complex64) -> Result<f64> {
    if z.im != 0.0 {
        return Err(QError::InvalidParameter(format!(
            "function `{func}` takes a real argument; got im = {}",
            z.im
        )));
    }
    Ok(z.re)
}

fn evaluate(
    func: &str,
    nu: Option<f64>,
    z: Complex64,
    rep: Representation,
    ctx: &QContext,
) -> Result<SeriesEval> {
    match func {
        "eq" => Ok(wrap(eq_exp(z, ctx)?)),
        "Eq" => Ok(wrap(eq_exp_big(z, ctx)?)),
        "qgamma" => Ok(wrap(Complex64::new(
            q_gamma(require_real(func, z)?, ctx)?,
            0.0,
        ))),
        "qpsi" => Ok(wrap(Complex64::new(
            q_psi(require_real(func, z)?, ctx)?,
            0.0,
        ))),
        "phi_nu" => {
            let ord = require_nu(func, nu)?;
            phi_nu(ord.nu(), z, ctx)
        }
        "J1" | "J2" => {
            let ord = require_nu(func, nu)?;
            let kind = if func == "J1" { Kind::One } else { Kind::Two };
            Ok(wrap(bessel_j(kind, &ord, z, ctx)?))
        }
        "I1" | "I2" => {
            let ord = require_nu(func, nu)?;
            let kind = if func == "I1" { Kind::One } else { Kind::Two };
            eval_modified(kind, &ord, z, rep, ctx)
        }
        "K1" | "K2" => {
            let ord = require_nu(func, nu)?;
            let kind = if func == "K1" { Kind::One } else { Kind::Two };
            match rep {
                // the series combination is valid everywhere the function
                // is defined; the closed form is its Laurent counterpart
                Representation::PowerSeries | Representation::Auto => {
                    Ok(wrap(k_auto(kind, &ord, z, ctx)?))
                }
                Representation::Laurent => Ok(wrap(match kind {
                    Kind::One => k1_closed(&ord, z, ctx)?,
                    Kind::Two => k2_closed(&ord, z, ctx)?,
                })),
            }
        }
        other => Err(QError::InvalidParameter(format!(
            "unknown function `{other}`; expected one of eq Eq qgamma qpsi phi_nu J1 J2 I1 I2 K1 K2"
        ))),
    }
}

fn table_record(q: f64, nu: Option<f64>, z: Complex64, ev: SeriesEval) -> Record {
    Record::new()
        .num("q", q)
        .num("nu", nu.unwrap_or(f64::NAN))
        .num("re_z", z.re)
        .num("im_z", z.im)
        .num("re_val", ev.value.re)
        .num("im_val", ev.value.im)
        .int("terms", ev.terms_used as u64)
        .flag("converged", ev.converged)
}

fn empty_table_header() -> String {
    "q,nu,re_z,im_z,re_val,im_val,terms,converged".to_string()
}

fn rescaled_pass(r: &qmbf::verify::IdentityReport, scale: f64) -> bool {
    match catalog().iter().find(|d| d.id == r.identity_id) {
        Some(def) => r.abs_err <= def.abs_bound * scale || r.rel_err <= def.rel_bound * scale,
        None => r.pass,
    }
}

/// Flat key=value grid file. Lists are whitespace-separated; complex
/// entries use re[,im]. Keys: q_values, nu_values, z_fractions,
/// scaling_mode (absolute | domain_scaled), tol_scale.
fn parse_grid_file(path: &std::path::Path) -> Result<(GridSpec, f64)> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        QError::InvalidParameter(format!("cannot read grid file {}: {e}", path.display()))
    })?;
    let mut q_values = None;
    let mut nu_values = None;
    let mut z_fractions = None;
    let mut scaling = ScalingMode::DomainScaled;
    let mut tol_scale = 1.0f64;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            QError::InvalidParameter(format!(
                "grid file line {}: expected key = value, got `{raw}`",
                lineno + 1
            ))
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "q_values" => q_values = Some(parse_real_list(value)?),
            "nu_values" => nu_values = Some(parse_real_list(value)?),
            "z_fractions" => {
                let items: Result<Vec<Complex64>> =
                    value.split_whitespace().map(parse_complex).collect();
                z_fractions = Some(items?);
            }
            "scaling_mode" => {
                scaling = match value {
                    "absolute" => ScalingMode::Absolute,
                    "domain_scaled" => ScalingMode::DomainScaled,
                    other => {
                        return Err(QError::InvalidParameter(format!(
                            "scaling_mode must be absolute or domain_scaled, got `{other}`"
                        )))
                    }
                };
            }
            "tol_scale" => {
                tol_scale = value.parse().map_err(|_| {
                    QError::InvalidParameter(format!("tol_scale must be a number, got `{value}`"))
                })?;
                if tol_scale.is_nan() || tol_scale <= 0.0 {
                    return Err(QError::InvalidParameter(
                        "tol_scale must be positive".into(),
                    ));
                }
            }
            other => {
                return Err(QError::InvalidParameter(format!(
                    "unknown grid key `{other}`"
                )))
            }
        }
    }
    let default = GridSpec::default();
    let spec = GridSpec::new(
        q_values.unwrap_or(default.q_values),
        nu_values.unwrap_or(default.nu_values),
        z_fractions.unwrap_or(default.z_fractions),
        scaling,
    )?;
    Ok((spec, tol_scale))
}

fn parse_real_list(s: &str) -> Result<Vec<f64>> {
    s.split_whitespace()
        .map(|tok| {
            tok.parse::<f64>().map_err(|_| {
                QError::InvalidParameter(format!("cannot parse list entry `{tok}` as a number"))
            })
        })
        .collect()
}
