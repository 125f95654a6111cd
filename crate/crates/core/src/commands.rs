//! The operations behind the command-line subcommands. Each takes a parsed
//! configuration and returns a document; writing is left to the caller.

use std::io::Write;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result, ResultExt};
use crate::estimators::{
    bi_tsls_direction, iv_comparator, ols_comparator, BasisKind, BasisSpec, Direction,
    FirstStageDiagnostics, Method,
};
use crate::experiments::{run_study, write_study_outputs, StudyOutputs, StudyPlan};
use crate::inference::{
    bootstrap_pair, bootstrap_sensitivity, weak_basis_check, BootstrapConfig, InferenceResult,
    WeakBasisReport,
};
use crate::io::{load_dataset, write_atomic, ColumnMapping, LoadedData};
use crate::simulation::{generate, generate_violation, write_sample_csv, ScenarioConfig};

/// Largest |R| accepted in a sensitivity grid.
pub const MAX_SENSITIVITY_MAGNITUDE: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivityRange {
    pub r_w: Vec<f64>,
    pub r_z: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mapping: ColumnMapping,
    pub basis: BasisKind,
    pub bootstrap: BootstrapConfig,
    pub sensitivity: Option<SensitivityRange>,
    /// z-score the covariates before estimation.
    pub standardize_v: bool,
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.mapping.validate()?;
        self.bootstrap.validate()?;
        if let Some(s) = &self.sensitivity {
            for (field, grid) in [("sensitivity.r_w", &s.r_w), ("sensitivity.r_z", &s.r_z)] {
                if grid.is_empty() {
                    return Err(Error::config(field, "grid must not be empty"));
                }
                if let Some(bad) = grid
                    .iter()
                    .find(|r| !(r.is_finite() && r.abs() <= MAX_SENSITIVITY_MAGNITUDE))
                {
                    return Err(Error::config(
                        field,
                        format!("value {bad} outside [-{MAX_SENSITIVITY_MAGNITUDE}, {MAX_SENSITIVITY_MAGNITUDE}]"),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Parses a JSON document, reporting the field path on failure.
pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        let message = inner.to_string();
        match inner.classify() {
            serde_json::error::Category::Data => Error::config(path, message),
            _ => Error::Json(inner),
        }
    })
}

/// Reads and parses a JSON config file.
pub fn load_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_json(&text).map_err(|e| e.context(path.display().to_string()))
}

/// Runs `f` on a pool with `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        Some(0) => Err(Error::config("workers", "must be at least 1")),
        Some(k) => Ok(rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::config("workers", e.to_string()))?
            .install(f)),
        None => Ok(f()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataSummary {
    pub path: String,
    pub rows_read: usize,
    pub rows_dropped: usize,
    pub n: usize,
    pub p: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateRow {
    pub method: Method,
    pub direction: Direction,
    pub estimate: f64,
    pub se: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub n_failed_replicates: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub denominator_magnitude: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_stage: Option<FirstStageDiagnostics>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub software: String,
    pub version: String,
    pub config: RunConfig,
    pub data: DataSummary,
    pub results: Vec<EstimateRow>,
    pub weak_basis: Vec<WeakBasisReport>,
}

fn load(cfg: &RunConfig, data_path: &Path) -> Result<(LoadedData, DataSummary)> {
    cfg.validate()?;
    let mut loaded = load_dataset(data_path, &cfg.mapping)?;
    if cfg.standardize_v {
        loaded.data = loaded.data.standardized_v();
    }
    let summary = DataSummary {
        path: data_path.display().to_string(),
        rows_read: loaded.rows_read,
        rows_dropped: loaded.rows_dropped,
        n: loaded.data.n(),
        p: loaded.data.p(),
    };
    Ok((loaded, summary))
}

fn bi_tsls_advice(e: Error) -> Error {
    match e.root() {
        Error::WeakIdentification { .. } | Error::RankDeficient { .. } | Error::InvalidBasis(_) => {
            e.context(
                "Bi-TSLS failed on the full sample; inspect the first-stage basis \
                 (the weak_basis diagnostic, or try \"basis\": \"square\")",
            )
        }
        _ => e,
    }
}

fn row(
    method: Method,
    direction: Direction,
    inf: InferenceResult,
    denominator_magnitude: Option<f64>,
    first_stage: Option<FirstStageDiagnostics>,
) -> EstimateRow {
    EstimateRow {
        method,
        direction,
        estimate: inf.point,
        se: inf.se,
        ci_lower: inf.ci_lower,
        ci_upper: inf.ci_upper,
        n_failed_replicates: inf.n_failed_replicates,
        denominator_magnitude,
        first_stage,
    }
}

/// Bi-TSLS in both directions plus the OLS and IV comparators, each with
/// bootstrap inference, and a weak-basis check per direction.
pub fn cmd_estimate(cfg: &RunConfig, data_path: &Path) -> Result<EstimateReport> {
    let (loaded, summary) = load(cfg, data_path)?;
    let data = &loaded.data;
    let basis = BasisSpec::from(cfg.basis);
    let boot = &cfg.bootstrap;

    let full_xy = bi_tsls_direction(data, &basis, Direction::XToY).map_err(bi_tsls_advice)?;
    let full_yx = bi_tsls_direction(data, &basis, Direction::YToX).map_err(bi_tsls_advice)?;
    let (b_xy, b_yx) = bootstrap_pair(
        data,
        |d| {
            Ok((
                bi_tsls_direction(d, &basis, Direction::XToY)?.estimate,
                bi_tsls_direction(d, &basis, Direction::YToX)?.estimate,
            ))
        },
        boot,
    )
    .context(|| "Bi-TSLS bootstrap".into())?;
    let mut results = vec![
        row(Method::BiTsls, Direction::XToY, b_xy, full_xy.denominator_magnitude, full_xy.first_stage),
        row(Method::BiTsls, Direction::YToX, b_yx, full_yx.denominator_magnitude, full_yx.first_stage),
    ];

    let (ols_xy, ols_yx) = bootstrap_pair(
        data,
        |d| ols_comparator(d).map(|(a, b)| (a.estimate, b.estimate)),
        boot,
    )
    .context(|| "OLS comparator".into())?;
    results.push(row(Method::Ols, Direction::XToY, ols_xy, None, None));
    results.push(row(Method::Ols, Direction::YToX, ols_yx, None, None));

    let (iv_full_xy, iv_full_yx) = iv_comparator(data).context(|| "IV comparator".into())?;
    let (iv_xy, iv_yx) = bootstrap_pair(
        data,
        |d| iv_comparator(d).map(|(a, b)| (a.estimate, b.estimate)),
        boot,
    )
    .context(|| "IV comparator".into())?;
    results.push(row(Method::Iv, Direction::XToY, iv_xy, iv_full_xy.denominator_magnitude, None));
    results.push(row(Method::Iv, Direction::YToX, iv_yx, iv_full_yx.denominator_magnitude, None));

    let weak_basis = Direction::BOTH
        .iter()
        .map(|&d| weak_basis_check(data, &basis, d, boot))
        .collect::<Result<Vec<_>>>()
        .context(|| "weak-basis diagnostic".into())?;

    Ok(EstimateReport {
        software: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        data: summary,
        results,
        weak_basis,
    })
}

/// One grid point of a sensitivity analysis. Numeric fields are `None` when
/// the point failed; `message` then says why.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityRow {
    pub r_w: f64,
    pub r_z: f64,
    pub status: String,
    pub x_to_y: Option<InferenceSummary>,
    pub y_to_x: Option<InferenceSummary>,
    pub message: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceSummary {
    pub estimate: f64,
    pub se: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub n_failed_replicates: usize,
}

impl From<InferenceResult> for InferenceSummary {
    fn from(r: InferenceResult) -> Self {
        InferenceSummary {
            estimate: r.point,
            se: r.se,
            ci_lower: r.ci_lower,
            ci_upper: r.ci_upper,
            n_failed_replicates: r.n_failed_replicates,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityReport {
    pub software: String,
    pub version: String,
    pub config: RunConfig,
    pub data: DataSummary,
    pub rows: Vec<SensitivityRow>,
}

/// Sensitivity-adjusted Bi-TSLS with bootstrap intervals at every
/// `(r_w, r_z)` of the configured grid. Failing points are recorded and
/// the run continues.
pub fn cmd_sensitivity(cfg: &RunConfig, data_path: &Path) -> Result<SensitivityReport> {
    let grid = cfg
        .sensitivity
        .as_ref()
        .ok_or_else(|| Error::config("sensitivity", "a sensitivity grid is required"))?;
    let (loaded, summary) = load(cfg, data_path)?;
    let basis = BasisSpec::from(cfg.basis);
    let mut rows = Vec::with_capacity(grid.r_w.len() * grid.r_z.len());
    for &r_w in &grid.r_w {
        for &r_z in &grid.r_z {
            let outcome =
                bootstrap_sensitivity(&loaded.data, &basis, &basis, r_w, r_z, &cfg.bootstrap);
            rows.push(match outcome {
                Ok((xy, yx)) => SensitivityRow {
                    r_w,
                    r_z,
                    status: "ok".into(),
                    x_to_y: Some(xy.into()),
                    y_to_x: Some(yx.into()),
                    message: None,
                },
                Err(e) => SensitivityRow {
                    r_w,
                    r_z,
                    status: "failed".into(),
                    x_to_y: None,
                    y_to_x: None,
                    message: Some(e.to_string()),
                },
            });
        }
    }
    Ok(SensitivityReport {
        software: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        data: summary,
        rows,
    })
}

/// Long-format table: one row per grid point and direction.
pub fn write_sensitivity_csv<W: Write>(report: &SensitivityReport, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    wtr.write_record([
        "r_w",
        "r_z",
        "direction",
        "status",
        "estimate",
        "se",
        "ci_lower",
        "ci_upper",
        "n_failed_replicates",
        "message",
    ])?;
    for r in &report.rows {
        for (direction, inf) in [(Direction::XToY, &r.x_to_y), (Direction::YToX, &r.y_to_x)] {
            let mut rec = vec![r.r_w.to_string(), r.r_z.to_string(), direction.to_string(), r.status.clone()];
            match inf {
                Some(i) => rec.extend([
                    i.estimate.to_string(),
                    i.se.to_string(),
                    i.ci_lower.to_string(),
                    i.ci_upper.to_string(),
                    i.n_failed_replicates.to_string(),
                ]),
                None => rec.extend(std::iter::repeat_n(String::new(), 5)),
            }
            rec.push(r.message.clone().unwrap_or_default());
            wtr.write_record(&rec)?;
        }
    }
    wtr.flush().map_err(|e| Error::io("<sensitivity csv>", e))?;
    Ok(())
}

/// Generates the configured sample and returns it as CSV bytes. Samples with
/// nonzero sensitivity parameters use the violation generator.
pub fn cmd_simulate(cfg: &ScenarioConfig, debug_u: bool) -> Result<Vec<u8>> {
    cfg.validate()?;
    let sample = if cfg.structural.has_sensitivity() {
        generate_violation(cfg)?
    } else {
        generate(cfg)?
    };
    let mut buf = Vec::new();
    write_sample_csv(&sample, &mut buf, debug_u)?;
    Ok(buf)
}

/// Runs a study plan and writes its raw table, summary table and manifest into `out_dir`.
pub fn cmd_replicate(plan: &StudyPlan, out_dir: &Path) -> Result<StudyOutputs> {
    let cells = run_study(plan)?;
    write_study_outputs(out_dir, plan, &cells)
}

/// Serializes `value` as pretty JSON to `out`, or to stdout when `out` is `None`.
pub fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value)?;
    bytes.push(b'\n');
    emit_bytes(&bytes, out)
}

pub fn emit_bytes(bytes: &[u8], out: Option<&Path>) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, bytes),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Error::io("<stdout>", e)),
    }
}
