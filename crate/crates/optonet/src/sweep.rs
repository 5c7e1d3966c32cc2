//! Parameter-sweep engine: stability -> Lyapunov -> negativity over 1-D and
//! 2-D grids, evaluated in parallel with deterministic, grid-ordered output.

use rayon::prelude::*;
use serde::Serialize;
use std::io::Write;

use crate::config;
use crate::darkmode::{dark_mode_conditions, DEFAULT_DARK_MODE_TOL};
use crate::entanglement::{pair_report, ModePair};
use crate::error::{Error, Result};
use crate::lyapunov::solve_lyapunov_with_margin;
use crate::model::{build_drift_diffusion, check_stability, Mode, NetworkParams};

/// Grid descriptions for one sweep axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GridSpec {
    Linear { start: f64, stop: f64, count: usize },
    Log10 { start: f64, stop: f64, count: usize },
    Explicit { values: Vec<f64> },
}

impl GridSpec {
    /// Materialize the grid points.
    pub fn values(&self) -> Result<Vec<f64>> {
        match self {
            GridSpec::Linear { start, stop, count } => {
                if *count < 2 {
                    return Err(Error::Sweep(format!(
                        "linear grid needs at least 2 points, got {count}"
                    )));
                }
                let step = (stop - start) / (*count as f64 - 1.0);
                Ok((0..*count).map(|i| start + step * i as f64).collect())
            }
            GridSpec::Log10 { start, stop, count } => {
                if *count < 2 {
                    return Err(Error::Sweep(format!(
                        "log10 grid needs at least 2 points, got {count}"
                    )));
                }
                if *start <= 0.0 || *stop <= 0.0 {
                    return Err(Error::Sweep(format!(
                        "log10 grid endpoints must be positive, got [{start}, {stop}]"
                    )));
                }
                let (a, b) = (start.log10(), stop.log10());
                let step = (b - a) / (*count as f64 - 1.0);
                Ok((0..*count)
                    .map(|i| 10f64.powf(a + step * i as f64))
                    .collect())
            }
            GridSpec::Explicit { values } => {
                if values.is_empty() {
                    return Err(Error::Sweep("explicit grid must not be empty".into()));
                }
                if values.iter().any(|v| !v.is_finite()) {
                    return Err(Error::Sweep(
                        "explicit grid contains non-finite values".into(),
                    ));
                }
                Ok(values.clone())
            }
        }
    }
}

/// One sweep axis: a grid of values written into one or more parameter
/// fields (several fields cover jointly-swept quantities like
/// nbar1 = nbar2 = nbar).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepAxis {
    /// Column label in the output (defaults to the field list joined by `+`).
    pub label: String,
    /// NetworkParams field names receiving the axis value.
    pub fields: Vec<String>,
    pub grid: GridSpec,
}

impl SweepAxis {
    pub fn new(field: &str, grid: GridSpec) -> Self {
        Self {
            label: field.to_string(),
            fields: vec![field.to_string()],
            grid,
        }
    }

    pub fn joint(label: &str, fields: &[&str], grid: GridSpec) -> Self {
        Self {
            label: label.to_string(),
            fields: fields.iter().map(|s| s.to_string()).collect(),
            grid,
        }
    }
}

/// Requested per-point quantities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputKind {
    EnAB1,
    EnAB2,
    EnB1B2,
    SigmaAB1,
    SigmaAB2,
    SigmaB1B2,
    MaxReEig,
    M1,
    M2,
}

impl OutputKind {
    pub fn column(self) -> &'static str {
        match self {
            OutputKind::EnAB1 => "en_a_b1",
            OutputKind::EnAB2 => "en_a_b2",
            OutputKind::EnB1B2 => "en_b1_b2",
            OutputKind::SigmaAB1 => "sigma_a_b1",
            OutputKind::SigmaAB2 => "sigma_a_b2",
            OutputKind::SigmaB1B2 => "sigma_b1_b2",
            OutputKind::MaxReEig => "max_re_eig",
            OutputKind::M1 => "m1",
            OutputKind::M2 => "m2",
        }
    }

    fn pair(self) -> Option<(Mode, Mode)> {
        match self {
            OutputKind::EnAB1 | OutputKind::SigmaAB1 => Some((Mode::A, Mode::B1)),
            OutputKind::EnAB2 | OutputKind::SigmaAB2 => Some((Mode::A, Mode::B2)),
            OutputKind::EnB1B2 | OutputKind::SigmaB1B2 => Some((Mode::B1, Mode::B2)),
            _ => None,
        }
    }

    fn is_sigma(self) -> bool {
        matches!(
            self,
            OutputKind::SigmaAB1 | OutputKind::SigmaAB2 | OutputKind::SigmaB1B2
        )
    }
}

/// A full sweep description: base point, one or two axes, requested outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepSpec {
    pub base: NetworkParams,
    pub axes: Vec<SweepAxis>,
    pub outputs: Vec<OutputKind>,
    /// Stability margin used for the per-point verdict.
    pub stability_margin: f64,
}

impl SweepSpec {
    pub fn new(base: NetworkParams, axes: Vec<SweepAxis>, outputs: Vec<OutputKind>) -> Self {
        Self {
            base,
            axes,
            outputs,
            stability_margin: crate::model::DEFAULT_STABILITY_MARGIN,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.axes.is_empty() || self.axes.len() > 2 {
            return Err(Error::Sweep(format!(
                "a sweep takes 1 or 2 axes, got {}",
                self.axes.len()
            )));
        }
        let mut seen: Vec<&str> = Vec::new();
        for axis in &self.axes {
            if axis.fields.is_empty() {
                return Err(Error::Sweep(format!(
                    "axis `{}` binds no parameter fields",
                    axis.label
                )));
            }
            for field in &axis.fields {
                if !config::is_field(field) || field == "aux_present" {
                    return Err(Error::Sweep(format!(
                        "axis `{}` names `{field}`, which is not a sweepable numeric \
                         parameter field",
                        axis.label
                    )));
                }
                if seen.contains(&field.as_str()) {
                    return Err(Error::Sweep(format!(
                        "parameter field `{field}` appears in more than one axis binding"
                    )));
                }
                seen.push(field);
            }
            axis.grid.values()?;
        }
        Ok(())
    }
}

/// Per-point outcome.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointStatus {
    Ok,
    Unstable,
    Error { message: String },
}

impl PointStatus {
    pub fn is_ok(&self) -> bool {
        matches!(self, PointStatus::Ok)
    }
}

/// One grid point: its coordinates, status, and the requested outputs
/// (entanglement fields are explicit nulls at unstable points, never 0).
#[derive(Debug, Clone, Serialize)]
pub struct PointRecord {
    pub coords: Vec<f64>,
    pub status: PointStatus,
    pub values: Vec<Option<f64>>,
}

/// Sweep output: the spec echo, the grid shape, and one record per point in
/// row-major grid order (first axis outermost).
#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub shape: Vec<usize>,
    pub records: Vec<PointRecord>,
}

impl SweepResult {
    pub fn n_points(&self) -> usize {
        self.records.len()
    }

    pub fn count_status(&self) -> (usize, usize, usize) {
        let mut ok = 0;
        let mut unstable = 0;
        let mut error = 0;
        for r in &self.records {
            match r.status {
                PointStatus::Ok => ok += 1,
                PointStatus::Unstable => unstable += 1,
                PointStatus::Error { .. } => error += 1,
            }
        }
        (ok, unstable, error)
    }

    /// Value column for one output kind, in grid order.
    pub fn column(&self, kind: OutputKind) -> Option<Vec<Option<f64>>> {
        let idx = self.spec.outputs.iter().position(|&k| k == kind)?;
        Some(self.records.iter().map(|r| r.values[idx]).collect())
    }
}

fn evaluate_point(spec: &SweepSpec, coords: &[f64]) -> PointRecord {
    let mut params = spec.base;
    for (axis, &value) in spec.axes.iter().zip(coords) {
        for field in &axis.fields {
            if let Err(err) = config::set_numeric_field(&mut params, field, value) {
                return PointRecord {
                    coords: coords.to_vec(),
                    status: PointStatus::Error {
                        message: err.to_string(),
                    },
                    values: vec![None; spec.outputs.len()],
                };
            }
        }
    }

    let error_record = |message: String| PointRecord {
        coords: coords.to_vec(),
        status: PointStatus::Error { message },
        values: vec![None; spec.outputs.len()],
    };

    let dd = match build_drift_diffusion(&params) {
        Ok(dd) => dd,
        Err(err) => return error_record(err.to_string()),
    };
    let verdict = match check_stability(&dd, spec.stability_margin) {
        Ok(v) => v,
        Err(err) => return error_record(err.to_string()),
    };

    // parameter-level diagnostics are available whether or not a steady
    // state exists
    let m_report = dark_mode_conditions(&params, DEFAULT_DARK_MODE_TOL).ok();
    let diagnostic = |kind: OutputKind| -> Option<f64> {
        match kind {
            OutputKind::MaxReEig => Some(verdict.max_re),
            OutputKind::M1 => m_report.as_ref().map(|r| r.m1),
            OutputKind::M2 => m_report.as_ref().map(|r| r.m2),
            _ => None,
        }
    };

    if !verdict.is_stable() {
        let values = spec.outputs.iter().map(|&k| diagnostic(k)).collect();
        return PointRecord {
            coords: coords.to_vec(),
            status: PointStatus::Unstable,
            values,
        };
    }

    let cov = match solve_lyapunov_with_margin(&dd, spec.stability_margin) {
        Ok(c) => c,
        Err(err) => return error_record(err.to_string()),
    };

    let mut values = Vec::with_capacity(spec.outputs.len());
    for &kind in &spec.outputs {
        if let Some((first, second)) = kind.pair() {
            let pair = match ModePair::new(first, second) {
                Ok(p) => p,
                Err(err) => return error_record(err.to_string()),
            };
            match pair_report(&cov, pair) {
                Ok(rep) => values.push(Some(if kind.is_sigma() {
                    rep.sigma_minus
                } else {
                    rep.log_neg
                })),
                Err(err) => return error_record(err.to_string()),
            }
        } else {
            values.push(diagnostic(kind));
        }
    }

    PointRecord {
        coords: coords.to_vec(),
        status: PointStatus::Ok,
        values,
    }
}

/// Run a sweep. Grid points are independent tasks; records come back in
/// row-major grid order no matter how the worker pool schedules them, so the
/// output is deterministic and independent of the worker count.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let grids: Vec<Vec<f64>> = spec
        .axes
        .iter()
        .map(|axis| axis.grid.values())
        .collect::<Result<_>>()?;
    let shape: Vec<usize> = grids.iter().map(|g| g.len()).collect();

    let coords: Vec<Vec<f64>> = match grids.len() {
        1 => grids[0].iter().map(|&x| vec![x]).collect(),
        2 => {
            let mut all = Vec::with_capacity(grids[0].len() * grids[1].len());
            for &x in &grids[0] {
                for &y in &grids[1] {
                    all.push(vec![x, y]);
                }
            }
            all
        }
        _ => unreachable!("validated above"),
    };

    let records: Vec<PointRecord> = coords.par_iter().map(|c| evaluate_point(spec, c)).collect();

    Ok(SweepResult {
        spec: spec.clone(),
        shape,
        records,
    })
}

/// Format a float with 17 significant digits (round-trip exact for f64).
pub fn fmt_g17(v: f64) -> String {
    format!("{v:.16e}")
}

fn csv_quote(field: &str) -> String {
    if field.contains(',') || field.contains('"') || field.contains('\n') {
        format!("\"{}\"", field.replace('"', "\"\""))
    } else {
        field.to_string()
    }
}

/// Write the long-form CSV: one row per grid point, columns = axis values,
/// requested outputs, status. Comma-separated, `.` decimal, header row, LF
/// line endings, 17 significant digits.
pub fn write_csv<W: Write>(result: &SweepResult, mut out: W) -> Result<()> {
    let mut header: Vec<String> = result
        .spec
        .axes
        .iter()
        .map(|a| csv_quote(&a.label))
        .collect();
    header.extend(result.spec.outputs.iter().map(|k| k.column().to_string()));
    header.push("status".into());
    out.write_all(header.join(",").as_bytes())?;
    out.write_all(b"\n")?;

    for record in &result.records {
        let mut fields: Vec<String> = record.coords.iter().map(|&c| fmt_g17(c)).collect();
        for value in &record.values {
            fields.push(match value {
                Some(v) => fmt_g17(*v),
                None => String::new(),
            });
        }
        fields.push(match &record.status {
            PointStatus::Ok => "ok".into(),
            PointStatus::Unstable => "unstable".into(),
            PointStatus::Error { message } => csv_quote(&format!("error: {message}")),
        });
        out.write_all(fields.join(",").as_bytes())?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// JSON manifest accompanying a CSV dataset: spec echo, grid shape, record
/// counts, artifact version. Deliberately free of wall-clock data so reruns
/// are bit-identical.
#[derive(Debug, Clone, Serialize)]
pub struct Manifest<'a> {
    pub artifact: &'static str,
    pub version: &'static str,
    pub format: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<&'a str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<&'a str>,
    pub spec: &'a SweepSpec,
    pub shape: &'a [usize],
    pub n_points: usize,
    pub n_ok: usize,
    pub n_unstable: usize,
    pub n_error: usize,
}

/// Stable manifest format version.
pub const MANIFEST_FORMAT: u32 = 1;

impl<'a> Manifest<'a> {
    pub fn new(result: &'a SweepResult, preset: Option<&'a str>, variant: Option<&'a str>) -> Self {
        let (n_ok, n_unstable, n_error) = result.count_status();
        Manifest {
            artifact: "optonet",
            version: env!("CARGO_PKG_VERSION"),
            format: MANIFEST_FORMAT,
            preset,
            variant,
            spec: &result.spec,
            shape: &result.shape,
            n_points: result.n_points(),
            n_ok,
            n_unstable,
            n_error,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serialization");
        s.push('\n');
        s
    }
}
