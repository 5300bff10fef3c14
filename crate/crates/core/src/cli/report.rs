//! Reports and their JSON and text renderings.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io;

use serde::{Deserialize, Serialize};
use serde_json::ser::{Formatter, PrettyFormatter};

use super::config::{RunConfig, Suite};
use crate::error::{QcError, Result};
use crate::symbols::DimensionLedger;

/// One evaluated item: a sample point, a covector or a deformation direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointRecord {
    pub label: String,
    pub point: Vec<f64>,
    /// The quantity compared with the tolerance.
    pub residual: Option<f64>,
    pub raw: Option<f64>,
    pub normalized: Option<f64>,
    pub gram_eigenvalues: Option<[f64; 3]>,
    pub extra: BTreeMap<String, f64>,
    pub pass: bool,
    pub error: Option<String>,
}

impl PointRecord {
    pub fn new(label: impl Into<String>, point: &[f64]) -> Self {
        PointRecord {
            label: label.into(),
            point: point.to_vec(),
            residual: None,
            raw: None,
            normalized: None,
            gram_eigenvalues: None,
            extra: BTreeMap::new(),
            pass: false,
            error: None,
        }
    }

    pub fn failed(label: impl Into<String>, point: &[f64], err: &QcError) -> Self {
        PointRecord {
            error: Some(err.to_string()),
            ..Self::new(label, point)
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.extra.insert(key.to_string(), value);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Aggregate {
    pub max: Option<f64>,
    pub mean: Option<f64>,
    pub pass: bool,
}

impl Aggregate {
    /// Max and mean over records that produced a residual; `pass` is supplied
    /// by the suite's rule.
    pub fn from_records(records: &[PointRecord], pass: bool) -> Self {
        let values: Vec<f64> = records.iter().filter_map(|r| r.residual).collect();
        if values.is_empty() {
            return Aggregate {
                max: None,
                mean: None,
                pass,
            };
        }
        Aggregate {
            max: Some(values.iter().cloned().fold(f64::NEG_INFINITY, f64::max)),
            mean: Some(values.iter().sum::<f64>() / values.len() as f64),
            pass,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub suite: Suite,
    pub version: String,
    pub config: RunConfig,
    pub points: Vec<PointRecord>,
    pub aggregate: Aggregate,
    pub constants: DimensionLedger,
    /// Seconds; shown in text output only so JSON stays reproducible.
    #[serde(skip)]
    pub wall_time: Option<f64>,
}

impl Report {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QcError::Config(format!("report: {e}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Text,
}

impl std::str::FromStr for Format {
    type Err = QcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(QcError::Config(format!("unknown format `{s}`; expected json or text"))),
        }
    }
}

/// Pretty JSON with every float written with 17 significant digits.
struct SeventeenDigits<'a>(PrettyFormatter<'a>);

impl Formatter for SeventeenDigits<'_> {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + io::Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

pub fn to_json<T: Serialize>(value: &T) -> Vec<u8> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, SeventeenDigits(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("serializing to memory cannot fail");
    out.push(b'\n');
    out
}

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| format!("{x:.3e}"))
}

pub fn to_text(report: &Report) -> String {
    let mut s = String::new();
    let c = &report.config;
    let _ = writeln!(s, "suite      {}", report.suite);
    let _ = writeln!(
        s,
        "config     seed={} points={} fd_step={:e} tol={:e} jacobians={:?}",
        c.seed, c.points, c.fd_step, c.tol, c.jacobians
    );
    let _ = writeln!(s, "{:<24} {:>11} {:>11} {:>5}  note", "label", "residual", "raw", "pass");
    for r in &report.points {
        let note = r.error.clone().unwrap_or_default();
        let _ = writeln!(
            s,
            "{:<24} {:>11} {:>11} {:>5}  {}",
            r.label,
            opt(r.residual),
            opt(r.raw),
            if r.pass { "ok" } else { "FAIL" },
            note
        );
    }
    let a = &report.aggregate;
    let _ = writeln!(
        s,
        "aggregate  max={} mean={} pass={}",
        opt(a.max),
        opt(a.mean),
        a.pass
    );
    let k = &report.constants;
    let _ = writeln!(
        s,
        "constants  H0={} H1={} H2={} H3={} index={} recompute={}",
        k.h0, k.h1, k.h2, k.h3, k.index, k.recompute
    );
    if let Some(t) = report.wall_time {
        let _ = writeln!(s, "wall time  {t:.3} s");
    }
    s
}

pub fn emit_report(report: &Report, format: Format) -> Vec<u8> {
    match format {
        Format::Json => to_json(report),
        Format::Text => to_text(report).into_bytes(),
    }
}
