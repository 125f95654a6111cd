//! Monte Carlo studies: method comparison across scenarios and sample sizes,
//! confounding-strength sweeps and sensitivity-parameter grids.
//!
//! Every replicate draws one sample and applies all requested methods to it.
//! The sample seed depends only on the master seed, scenario, sample size and
//! replicate index, so sweep points share random numbers and any cell can be
//! recomputed on its own.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::estimators::{
    bi_tsls_direction, iv_comparator, ols_comparator, BasisKind, BasisSpec, Direction, Method,
};
use crate::io::write_atomic;
use crate::model::{sensitivity_adjust, ProxyParams, StructuralParams};
use crate::simulation::{generate_violation, NoiseScenario, ScenarioConfig};

/// Version tag of the raw and summary CSV layouts, recorded in the manifest.
pub const OUTPUT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sweep {
    None,
    /// Explicit `(alpha_u, gamma_u)` pairs.
    ConfoundingStrength { points: Vec<(f64, f64)> },
    /// Full cross product of the two lists.
    SensitivityGrid { r_w: Vec<f64>, r_z: Vec<f64> },
}

impl Sweep {
    /// `(alpha_u, gamma_u) = (c, -c)` for c in -1, -0.75, ..., 1.
    pub fn default_confounding() -> Self {
        Sweep::ConfoundingStrength {
            points: (-4..=4).map(|k| (0.25 * k as f64, -0.25 * k as f64)).collect(),
        }
    }

    /// -0.5, -0.4, ..., 0.5 in both parameters.
    pub fn default_sensitivity() -> Self {
        let grid: Vec<f64> = (-5..=5).map(|k| k as f64 / 10.0).collect();
        Sweep::SensitivityGrid {
            r_w: grid.clone(),
            r_z: grid,
        }
    }

    fn coords(&self) -> Vec<SweepCoord> {
        match self {
            Sweep::None => vec![SweepCoord::Base],
            Sweep::ConfoundingStrength { points } => points
                .iter()
                .map(|&(alpha_u, gamma_u)| SweepCoord::Confounding { alpha_u, gamma_u })
                .collect(),
            Sweep::SensitivityGrid { r_w, r_z } => r_w
                .iter()
                .flat_map(|&r_w| r_z.iter().map(move |&r_z| SweepCoord::Sensitivity { r_w, r_z }))
                .collect(),
        }
    }
}

/// Position of a cell along the study's sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepCoord {
    Base,
    Confounding { alpha_u: f64, gamma_u: f64 },
    Sensitivity { r_w: f64, r_z: f64 },
}

impl SweepCoord {
    fn apply(self, base: &StructuralParams) -> StructuralParams {
        match self {
            SweepCoord::Base => base.clone(),
            SweepCoord::Confounding { alpha_u, gamma_u } => {
                base.clone().with_confounding(alpha_u, gamma_u)
            }
            SweepCoord::Sensitivity { r_w, r_z } => base.clone().with_sensitivity(r_w, r_z),
        }
    }

    /// `(alpha_u, gamma_u, r_w, r_z)` of the generating model.
    pub fn values(self, base: &StructuralParams) -> (f64, f64, f64, f64) {
        let s = self.apply(base);
        (s.alpha_u, s.gamma_u, s.r_w, s.r_z)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StudyPlan {
    pub replications: usize,
    pub sample_sizes: Vec<usize>,
    pub scenarios: Vec<NoiseScenario>,
    pub methods: Vec<Method>,
    pub sweep: Sweep,
    pub master_seed: u64,
    /// Thread count; `None` uses the global pool.
    pub workers: Option<usize>,
    pub structural: StructuralParams,
    pub proxy: ProxyParams,
    pub basis: BasisKind,
    pub iterations: usize,
}

impl Default for StudyPlan {
    fn default() -> Self {
        StudyPlan {
            replications: 200,
            sample_sizes: vec![1000, 2000, 5000],
            scenarios: NoiseScenario::ALL.to_vec(),
            methods: Method::ALL.to_vec(),
            sweep: Sweep::None,
            master_seed: 0,
            workers: None,
            structural: StructuralParams::paper_defaults(),
            proxy: ProxyParams::paper_defaults(),
            basis: BasisKind::ProductInteraction,
            iterations: 5000,
        }
    }
}

impl StudyPlan {
    pub fn method_comparison(master_seed: u64) -> Self {
        StudyPlan {
            master_seed,
            ..Default::default()
        }
    }

    pub fn confounding_sweep(master_seed: u64) -> Self {
        StudyPlan {
            master_seed,
            sample_sizes: vec![5000],
            scenarios: vec![NoiseScenario::ANormal],
            sweep: Sweep::default_confounding(),
            ..Default::default()
        }
    }

    pub fn sensitivity_grid(master_seed: u64) -> Self {
        StudyPlan {
            master_seed,
            sample_sizes: vec![5000],
            scenarios: vec![NoiseScenario::ANormal],
            sweep: Sweep::default_sensitivity(),
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replications < 1 {
            return Err(Error::config("replications", "must be at least 1"));
        }
        if self.sample_sizes.is_empty() {
            return Err(Error::config("sample_sizes", "must not be empty"));
        }
        if self.scenarios.is_empty() {
            return Err(Error::config("scenarios", "must not be empty"));
        }
        if self.methods.is_empty() {
            return Err(Error::config("methods", "must not be empty"));
        }
        if self.workers == Some(0) {
            return Err(Error::config("workers", "must be at least 1"));
        }
        if self.iterations < 1 {
            return Err(Error::config("iterations", "must be at least 1"));
        }
        for (i, a) in self.methods.iter().enumerate() {
            if self.methods[..i].contains(a) {
                return Err(Error::config("methods", format!("duplicate method {a}")));
            }
        }
        match &self.sweep {
            Sweep::None => {}
            Sweep::ConfoundingStrength { points } => {
                if points.is_empty() {
                    return Err(Error::config("sweep.points", "must not be empty"));
                }
            }
            Sweep::SensitivityGrid { r_w, r_z } => {
                if r_w.is_empty() || r_z.is_empty() {
                    return Err(Error::config("sweep.r_w/r_z", "grids must not be empty"));
                }
            }
        }
        if self.structural.has_sensitivity() {
            return Err(Error::config(
                "structural.r_w/r_z",
                "set sensitivity parameters through a sensitivity_grid sweep",
            ));
        }
        for coord in self.sweep.coords() {
            let s = coord.apply(&self.structural);
            s.validate().map_err(|e| e.context(format!("sweep point {coord:?}")))?;
        }
        for &n in &self.sample_sizes {
            self.scenario(self.scenarios[0], n, &self.structural, 0)?;
        }
        Ok(())
    }

    fn scenario(
        &self,
        noise: NoiseScenario,
        n: usize,
        s: &StructuralParams,
        seed: u64,
    ) -> Result<ScenarioConfig> {
        let mut cfg = ScenarioConfig::new(n, noise, s.clone(), self.proxy.clone(), seed)
            .map_err(|e| e.context("scenario"))?;
        cfg.iterations = self.iterations;
        Ok(cfg)
    }
}

/// Seed of replicate `replicate` in the (scenario, n) block.
pub fn sample_seed(master_seed: u64, scenario: NoiseScenario, n: usize, replicate: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(format!("{master_seed}|{scenario}|{n}|{replicate}").as_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellKey {
    pub method: Method,
    pub direction: Direction,
    pub scenario: NoiseScenario,
    pub n: usize,
    pub coord: SweepCoord,
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}/{}/{}/n={}/{:?}",
            self.method, self.direction, self.scenario, self.n, self.coord
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub key: CellKey,
    pub truth: f64,
    pub mean: f64,
    pub sd: f64,
    pub bias: f64,
    pub rmse: f64,
    /// Successful estimates in replicate order.
    pub estimates: Vec<f64>,
    /// Replicate index of each entry of `estimates`.
    pub replicates: Vec<usize>,
    pub failure_count: usize,
}

impl CellSummary {
    fn from_estimates(
        key: CellKey,
        truth: f64,
        replicates: Vec<usize>,
        estimates: Vec<f64>,
        failure_count: usize,
    ) -> Self {
        let r = estimates.len() as f64;
        let mean = estimates.iter().sum::<f64>() / r;
        let ss = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>();
        let sd = if estimates.len() > 1 {
            (ss / (r - 1.0)).sqrt()
        } else {
            0.0
        };
        let rmse = (estimates.iter().map(|e| (e - truth).powi(2)).sum::<f64>() / r).sqrt();
        CellSummary {
            key,
            truth,
            mean,
            sd,
            bias: mean - truth,
            rmse,
            estimates,
            replicates,
            failure_count,
        }
    }

    /// Monte Carlo standard error of the mean.
    pub fn mcse(&self) -> f64 {
        self.sd / (self.estimates.len() as f64).sqrt()
    }
}

/// Per-replicate outcomes; failures keep only their message.
type Estimates = Vec<((Method, Direction), std::result::Result<f64, String>)>;

fn estimate_all(
    sample: &crate::dataset::Dataset,
    methods: &[Method],
    basis: &BasisSpec,
    coord: SweepCoord,
) -> Estimates {
    let mut out = Vec::with_capacity(2 * methods.len());
    let both = |out: &mut Estimates, m: Method, r: Result<(f64, f64)>| match r {
        Ok((xy, yx)) => {
            out.push(((m, Direction::XToY), Ok(xy)));
            out.push(((m, Direction::YToX), Ok(yx)));
        }
        Err(e) => {
            out.push(((m, Direction::XToY), Err(e.to_string())));
            out.push(((m, Direction::YToX), Err(e.to_string())));
        }
    };
    for &m in methods {
        match m {
            Method::BiTsls => {
                if let SweepCoord::Sensitivity { r_w, r_z } = coord {
                    let r = bi_tsls_direction(sample, basis, Direction::XToY).and_then(|xy| {
                        let yx = bi_tsls_direction(sample, basis, Direction::YToX)?;
                        sensitivity_adjust(xy.estimate, yx.estimate, r_w, r_z)
                    });
                    both(&mut out, m, r);
                } else {
                    for d in Direction::BOTH {
                        out.push((
                            (m, d),
                            bi_tsls_direction(sample, basis, d)
                                .map(|r| r.estimate)
                                .map_err(|e| e.to_string()),
                        ));
                    }
                }
            }
            Method::Ols => both(
                &mut out,
                m,
                ols_comparator(sample).map(|(a, b)| (a.estimate, b.estimate)),
            ),
            Method::Iv => both(
                &mut out,
                m,
                iv_comparator(sample).map(|(a, b)| (a.estimate, b.estimate)),
            ),
        }
    }
    out
}

/// Runs every cell of the plan, whatever its sweep kind.
pub fn run_study(plan: &StudyPlan) -> Result<Vec<CellSummary>> {
    plan.validate()?;
    match plan.workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::config("workers", e.to_string()))?
            .install(|| run_cells(plan)),
        None => run_cells(plan),
    }
}

fn run_cells(plan: &StudyPlan) -> Result<Vec<CellSummary>> {
    let coords = plan.sweep.coords();
    let basis = BasisSpec::from(plan.basis);

    // One task per (scenario, n, replicate); each task covers every sweep point.
    let blocks: Vec<(NoiseScenario, usize)> = plan
        .scenarios
        .iter()
        .flat_map(|&s| plan.sample_sizes.iter().map(move |&n| (s, n)))
        .collect();
    let tasks: Vec<(usize, usize)> = (0..blocks.len())
        .flat_map(|b| (0..plan.replications).map(move |r| (b, r)))
        .collect();

    let results: Vec<Vec<Estimates>> = tasks
        .par_iter()
        .map(|&(b, rep)| {
            let (scenario, n) = blocks[b];
            let seed = sample_seed(plan.master_seed, scenario, n, rep);
            coords
                .iter()
                .map(|&coord| {
                    let s = coord.apply(&plan.structural);
                    let generated = plan
                        .scenario(scenario, n, &s, seed)
                        .and_then(|cfg| generate_violation(&cfg));
                    match generated {
                        Ok(sample) => estimate_all(&sample.data, &plan.methods, &basis, coord),
                        Err(e) => plan
                            .methods
                            .iter()
                            .flat_map(|&m| Direction::BOTH.map(|d| ((m, d), Err(e.to_string()))))
                            .collect(),
                    }
                })
                .collect()
        })
        .collect();

    let mut cells = Vec::new();
    for (b, &(scenario, n)) in blocks.iter().enumerate() {
        let block = &results[b * plan.replications..(b + 1) * plan.replications];
        for (c, &coord) in coords.iter().enumerate() {
            for &method in &plan.methods {
                for direction in Direction::BOTH {
                    let truth = match direction {
                        Direction::XToY => plan.structural.beta_xy,
                        Direction::YToX => plan.structural.beta_yx,
                    };
                    let key = CellKey {
                        method,
                        direction,
                        scenario,
                        n,
                        coord,
                    };
                    let mut estimates = Vec::with_capacity(plan.replications);
                    let mut reps = Vec::with_capacity(plan.replications);
                    let mut failed = 0;
                    let mut last = None;
                    for (rep, per_coord) in block.iter().enumerate() {
                        let outcome = per_coord[c]
                            .iter()
                            .find(|(k, _)| *k == (method, direction))
                            .map(|(_, r)| r)
                            .expect("every method and direction is estimated");
                        match outcome {
                            Ok(v) if v.is_finite() => {
                                estimates.push(*v);
                                reps.push(rep);
                            }
                            Ok(_) => {
                                failed += 1;
                                last = Some("non-finite estimate".to_string());
                            }
                            Err(e) => {
                                failed += 1;
                                last = Some(e.clone());
                            }
                        }
                    }
                    if 2 * failed > plan.replications || estimates.is_empty() {
                        return Err(Error::TooManyFailures {
                            failed,
                            total: plan.replications,
                            last: last.unwrap_or_default(),
                        }
                        .context(format!("cell {key}")));
                    }
                    cells.push(CellSummary::from_estimates(key, truth, reps, estimates, failed));
                }
            }
        }
    }
    Ok(cells)
}

fn require(plan: &StudyPlan, ok: bool, kind: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::config("sweep", format!("expected sweep kind {kind}, got {:?}", plan.sweep)))
    }
}

/// Methods compared on shared samples across scenarios and sample sizes.
pub fn run_method_comparison(plan: &StudyPlan) -> Result<Vec<CellSummary>> {
    require(plan, plan.sweep == Sweep::None, "none")?;
    run_study(plan)
}

/// Methods compared across `(alpha_u, gamma_u)` pairs.
pub fn run_confounding_sweep(plan: &StudyPlan) -> Result<Vec<CellSummary>> {
    require(
        plan,
        matches!(plan.sweep, Sweep::ConfoundingStrength { .. }),
        "confounding_strength",
    )?;
    run_study(plan)
}

/// Samples generated with direct proxy effects at each `(r_w, r_z)`; Bi-TSLS
/// estimates are adjusted with the true parameters, the comparators are not.
pub fn run_sensitivity_grid(plan: &StudyPlan) -> Result<Vec<CellSummary>> {
    require(
        plan,
        matches!(plan.sweep, Sweep::SensitivityGrid { .. }),
        "sensitivity_grid",
    )?;
    run_study(plan)
}

const KEY_HEADER: [&str; 8] = [
    "method",
    "direction",
    "scenario",
    "n",
    "alpha_u",
    "gamma_u",
    "r_w",
    "r_z",
];

fn key_fields(cell: &CellSummary, base: &StructuralParams) -> Vec<String> {
    let k = &cell.key;
    let (au, gu, rw, rz) = k.coord.values(base);
    vec![
        k.method.to_string(),
        k.direction.to_string(),
        k.scenario.to_string(),
        k.n.to_string(),
        au.to_string(),
        gu.to_string(),
        rw.to_string(),
        rz.to_string(),
    ]
}

/// One row per successful replicate estimate.
pub fn write_raw_csv<W: Write>(cells: &[CellSummary], plan: &StudyPlan, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = KEY_HEADER.to_vec();
    header.extend(["replicate", "estimate"]);
    wtr.write_record(&header)?;
    for cell in cells {
        let key = key_fields(cell, &plan.structural);
        for (rep, est) in cell.replicates.iter().zip(&cell.estimates) {
            let mut row = key.clone();
            row.push(rep.to_string());
            row.push(est.to_string());
            wtr.write_record(&row)?;
        }
    }
    wtr.flush().map_err(|e| Error::io("<raw csv>", e))?;
    Ok(())
}

/// One row per cell.
pub fn write_summary_csv<W: Write>(cells: &[CellSummary], plan: &StudyPlan, out: W) -> Result<()> {
    let mut wtr = csv::Writer::from_writer(out);
    let mut header: Vec<&str> = KEY_HEADER.to_vec();
    header.extend([
        "truth",
        "successes",
        "failures",
        "mean",
        "sd",
        "bias",
        "rmse",
        "mcse",
    ]);
    wtr.write_record(&header)?;
    for cell in cells {
        let mut row = key_fields(cell, &plan.structural);
        row.extend([
            cell.truth.to_string(),
            cell.estimates.len().to_string(),
            cell.failure_count.to_string(),
            cell.mean.to_string(),
            cell.sd.to_string(),
            cell.bias.to_string(),
            cell.rmse.to_string(),
            cell.mcse().to_string(),
        ]);
        wtr.write_record(&row)?;
    }
    wtr.flush().map_err(|e| Error::io("<summary csv>", e))?;
    Ok(())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Manifest {
    pub software: String,
    pub version: String,
    pub output_schema_version: u32,
    pub seed_derivation: String,
    pub plan: StudyPlan,
    pub cells: usize,
    pub files: Vec<String>,
}

/// Paths written by [`write_study_outputs`].
#[derive(Debug, Clone, PartialEq)]
pub struct StudyOutputs {
    pub raw: PathBuf,
    pub summary: PathBuf,
    pub manifest: PathBuf,
}

/// Writes `raw.csv`, `summary.csv` and `manifest.json` into `dir`.
pub fn write_study_outputs(dir: &Path, plan: &StudyPlan, cells: &[CellSummary]) -> Result<StudyOutputs> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let outputs = StudyOutputs {
        raw: dir.join("raw.csv"),
        summary: dir.join("summary.csv"),
        manifest: dir.join("manifest.json"),
    };
    let mut raw = Vec::new();
    write_raw_csv(cells, plan, &mut raw)?;
    write_atomic(&outputs.raw, &raw)?;
    let mut summary = Vec::new();
    write_summary_csv(cells, plan, &mut summary)?;
    write_atomic(&outputs.summary, &summary)?;
    let manifest = Manifest {
        software: env!("CARGO_PKG_NAME").into(),
        version: env!("CARGO_PKG_VERSION").into(),
        output_schema_version: OUTPUT_SCHEMA_VERSION,
        seed_derivation: "first 8 bytes (little endian) of sha256(\"{master_seed}|{scenario}|{n}|{replicate}\")".into(),
        plan: plan.clone(),
        cells: cells.len(),
        files: vec!["raw.csv".into(), "summary.csv".into()],
    };
    let mut json = serde_json::to_vec_pretty(&manifest)?;
    json.push(b'\n');
    write_atomic(&outputs.manifest, &json)?;
    Ok(outputs)
}
