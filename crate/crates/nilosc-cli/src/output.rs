//! File formats. Orbits stream as JSON lines (CSV mirror), oscillation
//! reports are a single JSON document (CSV mirror), Van der Corput tables are
//! CSV (JSONL mirror). Every format opens with a versioned schema field; CSV
//! variants carry the header as a leading `#` comment line.

use std::io::Write;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::json;

use nilosc_core::oscillation::{OscillationReport, VdcCheck};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::sequence::OrbitRecords;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutFormat {
    Jsonl,
    Json,
    Csv,
}

impl OutFormat {
    pub fn as_str(&self) -> &'static str {
        match self {
            OutFormat::Jsonl => "jsonl",
            OutFormat::Json => "json",
            OutFormat::Csv => "csv",
        }
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        match text {
            "jsonl" => Ok(OutFormat::Jsonl),
            "json" => Ok(OutFormat::Json),
            "csv" => Ok(OutFormat::Csv),
            other => Err(CliError::usage(format!(
                "unknown format `{other}` (expected jsonl | json | csv)"
            ))),
        }
    }

    fn from_extension(path: &Path) -> Option<Self> {
        match path.extension().and_then(|e| e.to_str()) {
            Some("jsonl") => Some(OutFormat::Jsonl),
            Some("json") => Some(OutFormat::Json),
            Some("csv") => Some(OutFormat::Csv),
            _ => None,
        }
    }

    /// Flag wins, then the output extension, then the command default.
    pub fn resolve(
        flag: Option<&str>,
        out: Option<&PathBuf>,
        default: OutFormat,
    ) -> Result<Self, CliError> {
        if let Some(text) = flag {
            return Self::parse(text);
        }
        Ok(out.and_then(|p| Self::from_extension(p)).unwrap_or(default))
    }
}

fn header(schema: &str, config: &RunConfig, dump_config: bool) -> serde_json::Value {
    let mut h = json!({
        "schema": schema,
        "sequence": config.sequence,
        "precision_bits": config.precision_bits,
    });
    if dump_config {
        h["config"] = serde_json::to_value(config).expect("config serializes");
    }
    h
}

pub fn write_out(out: Option<&PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

fn join_f64(values: &[f64], sep: char) -> String {
    values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(&sep.to_string())
}

pub fn render_orbit(
    records: &OrbitRecords,
    config: &RunConfig,
    dump_config: bool,
    format: OutFormat,
) -> Result<String, CliError> {
    let mut head = header("nilosc.orbit.v1", config, dump_config);
    if let OrbitRecords::Coords { convention, .. } = records {
        head["convention"] = json!(convention);
    }
    let mut out = String::new();
    match format {
        OutFormat::Jsonl | OutFormat::Json => {
            out.push_str(&head.to_string());
            out.push('\n');
            match records {
                OrbitRecords::Coords { rows, .. } => {
                    for (n, coords) in rows {
                        out.push_str(&json!({"n": n, "coords": coords}).to_string());
                        out.push('\n');
                    }
                }
                OrbitRecords::Extension { rows } => {
                    for (n, x, z) in rows {
                        out.push_str(&json!({"n": n, "x": x, "z": z}).to_string());
                        out.push('\n');
                    }
                }
                OrbitRecords::Scalar { rows } => {
                    for (n, re, im) in rows {
                        out.push_str(&json!({"n": n, "re": re, "im": im}).to_string());
                        out.push('\n');
                    }
                }
            }
        }
        OutFormat::Csv => {
            out.push_str(&format!("# {head}\n"));
            match records {
                OrbitRecords::Coords { rows, .. } => {
                    let width = rows.first().map(|(_, c)| c.len()).unwrap_or(0);
                    let cols: Vec<String> = (1..=width).map(|i| format!("c{i}")).collect();
                    out.push_str(&format!("n,{}\n", cols.join(",")));
                    for (n, coords) in rows {
                        out.push_str(&format!("{n},{}\n", join_f64(coords, ',')));
                    }
                }
                OrbitRecords::Extension { rows } => {
                    out.push_str("n,x,z\n");
                    for (n, x, z) in rows {
                        out.push_str(&format!(
                            "{n},{},{}\n",
                            join_f64(x, ';'),
                            join_f64(z, ';')
                        ));
                    }
                }
                OrbitRecords::Scalar { rows } => {
                    out.push_str("n,re,im\n");
                    for (n, re, im) in rows {
                        out.push_str(&format!("{n},{re},{im}\n"));
                    }
                }
            }
        }
    }
    Ok(out)
}

#[derive(Serialize)]
struct ReportPoint<'a> {
    n: usize,
    lower: f64,
    upper: f64,
    slack: f64,
    argmax_coeffs: &'a [f64],
    grid: ReportGrid,
}

#[derive(Serialize)]
struct ReportGrid {
    transform_size: usize,
    points_per_coeff: usize,
    injected: usize,
}

pub fn render_report(
    report: &OscillationReport,
    config: &RunConfig,
    dump_config: bool,
    format: OutFormat,
) -> Result<String, CliError> {
    let head = header("nilosc.report.v1", config, dump_config);
    let points: Vec<ReportPoint> = report
        .points
        .iter()
        .map(|p| ReportPoint {
            n: p.n,
            lower: p.lower,
            upper: p.upper,
            slack: p.slack,
            argmax_coeffs: &p.argmax,
            grid: ReportGrid {
                transform_size: p.grid.transform_size,
                points_per_coeff: p.grid.points_per_coeff,
                injected: p.grid.injected,
            },
        })
        .collect();
    match format {
        OutFormat::Json | OutFormat::Jsonl => {
            let mut doc = head;
            doc["points"] = serde_json::to_value(&points).expect("points serialize");
            doc["fit"] = match &report.fit {
                Some(f) => json!({"exponent": f.exponent, "residual": f.residual}),
                None => serde_json::Value::Null,
            };
            let mut text = serde_json::to_string_pretty(&doc).expect("report serializes");
            text.push('\n');
            Ok(text)
        }
        OutFormat::Csv => {
            let mut out = format!("# {head}\n");
            if let Some(f) = &report.fit {
                out.push_str(&format!("# fit exponent={} residual={}\n", f.exponent, f.residual));
            }
            out.push_str("n,lower,upper,slack,argmax_coeffs\n");
            for p in &points {
                out.push_str(&format!(
                    "{},{},{},{},{}\n",
                    p.n,
                    p.lower,
                    p.upper,
                    p.slack,
                    join_f64(p.argmax_coeffs, ';')
                ));
            }
            Ok(out)
        }
    }
}

pub fn render_vdc(
    rows: &[(usize, usize, VdcCheck)],
    config: &RunConfig,
    dump_config: bool,
    format: OutFormat,
) -> Result<String, CliError> {
    let head = header("nilosc.vdc.v1", config, dump_config);
    let mut out = String::new();
    match format {
        OutFormat::Csv => {
            out.push_str(&format!("# {head}\n"));
            out.push_str("n,h,lhs,rhs,holds\n");
            for (n, h, check) in rows {
                out.push_str(&format!(
                    "{n},{h},{},{},{}\n",
                    check.lhs, check.rhs, check.holds
                ));
            }
        }
        OutFormat::Jsonl | OutFormat::Json => {
            out.push_str(&head.to_string());
            out.push('\n');
            for (n, h, check) in rows {
                out.push_str(
                    &json!({"n": n, "h": h, "lhs": check.lhs, "rhs": check.rhs, "holds": check.holds})
                        .to_string(),
                );
                out.push('\n');
            }
        }
    }
    Ok(out)
}
