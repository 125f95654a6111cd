//! Seeded data generation for the bidirectional proxy model.
//!
//! Covariates V are standard normal and the confounder is
//! `U = sum_j exp(V_j) + eps_u` with Rademacher `eps_u`. The proxies follow
//! their linear equations with scenario-specific noise, and (X, Y) are the
//! limit of the simultaneous iteration
//!
//! ```text
//! X_t = alpha0 + beta_yx Y_{t-1} + alpha_v'V + alpha_z Z + gamma_w R_w W + alpha_u U + eps_x
//! Y_t = gamma0 + beta_xy X_{t-1} + gamma_v'V + gamma_w W + alpha_z R_z Z + gamma_u U + eps_y
//! ```
//!
//! with `eps_x`, `eps_y` drawn once per individual. Each variable has its own
//! random stream, so the first `n` rows do not depend on the total size.

use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::{reduced_form_from_structural, ProxyParams, StructuralParams};

/// Successive iterates of a row closer than this (relative to max(1, |value|))
/// stop that row's iteration early.
pub const EARLY_EXIT_TOL: f64 = 1e-14;

const STREAM_EPS_U: u64 = 1;
const STREAM_EPS_Z: u64 = 2;
const STREAM_EPS_W: u64 = 3;
const STREAM_EPS_X: u64 = 4;
const STREAM_EPS_Y: u64 = 5;
const STREAM_V_BASE: u64 = 100;

/// Distribution of the proxy noise terms `eps_z`, `eps_w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoiseScenario {
    /// Standard normal.
    ANormal,
    /// Uniform on [-1, 1].
    BUniform,
    /// +1 / -1 with probability 1/2.
    CRademacher,
}

impl NoiseScenario {
    pub const ALL: [NoiseScenario; 3] = [
        NoiseScenario::ANormal,
        NoiseScenario::BUniform,
        NoiseScenario::CRademacher,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NoiseScenario::ANormal => "a_normal",
            NoiseScenario::BUniform => "b_uniform",
            NoiseScenario::CRademacher => "c_rademacher",
        }
    }

    fn draw(self, rng: &mut ChaCha8Rng) -> f64 {
        match self {
            NoiseScenario::ANormal => rng.sample(StandardNormal),
            NoiseScenario::BUniform => rng.random_range(-1.0..=1.0),
            NoiseScenario::CRademacher => rademacher(rng),
        }
    }
}

impl std::fmt::Display for NoiseScenario {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

fn rademacher(rng: &mut ChaCha8Rng) -> f64 {
    if rng.random::<bool>() {
        1.0
    } else {
        -1.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawScenarioConfig")]
pub struct ScenarioConfig {
    pub n: usize,
    pub noise_scenario: NoiseScenario,
    pub structural: StructuralParams,
    pub proxy: ProxyParams,
    pub iterations: usize,
    pub init_xy: (f64, f64),
    pub convergence_tol: f64,
    pub seed: u64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenarioConfig {
    n: usize,
    #[serde(default = "default_scenario")]
    noise_scenario: NoiseScenario,
    #[serde(default = "StructuralParams::paper_defaults")]
    structural: StructuralParams,
    #[serde(default = "ProxyParams::paper_defaults")]
    proxy: ProxyParams,
    #[serde(default = "default_iterations")]
    iterations: usize,
    #[serde(default)]
    init_xy: (f64, f64),
    #[serde(default = "default_tol")]
    convergence_tol: f64,
    #[serde(default)]
    seed: u64,
}

fn default_scenario() -> NoiseScenario {
    NoiseScenario::ANormal
}

fn default_iterations() -> usize {
    5000
}

fn default_tol() -> f64 {
    1e-10
}

impl TryFrom<RawScenarioConfig> for ScenarioConfig {
    type Error = Error;

    fn try_from(raw: RawScenarioConfig) -> Result<Self> {
        let cfg = ScenarioConfig {
            n: raw.n,
            noise_scenario: raw.noise_scenario,
            structural: raw.structural,
            proxy: raw.proxy,
            iterations: raw.iterations,
            init_xy: raw.init_xy,
            convergence_tol: raw.convergence_tol,
            seed: raw.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl ScenarioConfig {
    /// Checked constructor with default iteration settings.
    pub fn new(
        n: usize,
        noise_scenario: NoiseScenario,
        structural: StructuralParams,
        proxy: ProxyParams,
        seed: u64,
    ) -> Result<Self> {
        let cfg = ScenarioConfig {
            n,
            noise_scenario,
            structural,
            proxy,
            iterations: default_iterations(),
            init_xy: (0.0, 0.0),
            convergence_tol: default_tol(),
            seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Scenario (a) with the default structural and proxy coefficients.
    pub fn paper_defaults(n: usize, seed: u64) -> Self {
        ScenarioConfig::new(
            n,
            NoiseScenario::ANormal,
            StructuralParams::paper_defaults(),
            ProxyParams::paper_defaults(),
            seed,
        )
        .expect("default scenario is valid")
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 1 {
            return Err(Error::config("n", "must be at least 1"));
        }
        if self.iterations < 1 {
            return Err(Error::config("iterations", "must be at least 1"));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::config("convergence_tol", "must be positive"));
        }
        if !(self.init_xy.0.is_finite() && self.init_xy.1.is_finite()) {
            return Err(Error::config("init_xy", "must be finite"));
        }
        self.structural
            .validate()
            .map_err(|e| e.context("structural"))?;
        self.proxy.validate(self.structural.p())?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GeneratedSample {
    pub data: Dataset,
    /// The unmeasured confounder, kept for oracle checks.
    pub u: Vec<f64>,
    /// Max absolute deviation of the final iterate from the closed-form equilibrium.
    pub equilibrium_gap: f64,
    pub iterations_used: usize,
}

/// Exogenous inputs of one sample, before the feedback iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Exogenous {
    pub v: Vec<Vec<f64>>,
    pub u: Vec<f64>,
    pub z: Vec<f64>,
    pub w: Vec<f64>,
    pub eps_x: Vec<f64>,
    pub eps_y: Vec<f64>,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Draws the exogenous variables for `cfg`.
pub fn draw_exogenous(cfg: &ScenarioConfig) -> Exogenous {
    let n = cfg.n;
    let p = cfg.structural.p();
    let v: Vec<Vec<f64>> = (0..p)
        .map(|j| {
            let mut rng = stream(cfg.seed, STREAM_V_BASE + j as u64);
            (0..n).map(|_| rng.sample(StandardNormal)).collect()
        })
        .collect();
    let mut rng_u = stream(cfg.seed, STREAM_EPS_U);
    let u: Vec<f64> = (0..n)
        .map(|i| v.iter().map(|c| c[i].exp()).sum::<f64>() + rademacher(&mut rng_u))
        .collect();

    let pp = &cfg.proxy;
    let mut rng_z = stream(cfg.seed, STREAM_EPS_Z);
    let mut rng_w = stream(cfg.seed, STREAM_EPS_W);
    let lin = |coefs: &[f64], i: usize| -> f64 { coefs.iter().zip(&v).map(|(c, col)| c * col[i]).sum() };
    let z = (0..n)
        .map(|i| pp.delta0 + pp.delta_u * u[i] + lin(&pp.delta_v, i) + cfg.noise_scenario.draw(&mut rng_z))
        .collect();
    let w = (0..n)
        .map(|i| pp.eta0 + pp.eta_u * u[i] + lin(&pp.eta_v, i) + cfg.noise_scenario.draw(&mut rng_w))
        .collect();

    let mut rng_x = stream(cfg.seed, STREAM_EPS_X);
    let mut rng_y = stream(cfg.seed, STREAM_EPS_Y);
    let eps_x = (0..n).map(|_| rademacher(&mut rng_x)).collect();
    let eps_y = (0..n).map(|_| rademacher(&mut rng_y)).collect();
    Exogenous {
        v,
        u,
        z,
        w,
        eps_x,
        eps_y,
    }
}

/// Result of iterating the feedback system.
#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub gap: f64,
    pub iterations_used: usize,
}

/// Runs the simultaneous iteration for at most `iterations` steps from
/// `init`, then measures the distance to the closed-form reduced form.
pub fn iterate_equilibrium(
    s: &StructuralParams,
    exo: &Exogenous,
    iterations: usize,
    init: (f64, f64),
) -> Result<Equilibrium> {
    let rf = reduced_form_from_structural(s)?;
    let n = exo.u.len();
    let row_v = |i: usize| -> Vec<f64> { exo.v.iter().map(|c| c[i]).collect() };
    let dot = |a: &[f64], i: usize| -> f64 { a.iter().zip(&exo.v).map(|(c, col)| c * col[i]).sum() };

    // Everything except the feedback term is fixed across iterations.
    let ax: Vec<f64> = (0..n)
        .map(|i| {
            s.alpha0
                + dot(&s.alpha_v, i)
                + s.alpha_z * exo.z[i]
                + s.gamma_w * s.r_w * exo.w[i]
                + s.alpha_u * exo.u[i]
                + exo.eps_x[i]
        })
        .collect();
    let by: Vec<f64> = (0..n)
        .map(|i| {
            s.gamma0
                + dot(&s.gamma_v, i)
                + s.gamma_w * exo.w[i]
                + s.alpha_z * s.r_z * exo.z[i]
                + s.gamma_u * exo.u[i]
                + exo.eps_y[i]
        })
        .collect();

    // Rows do not interact, so each one iterates until its own change is
    // negligible; a row's result does not depend on the rest of the sample.
    let mut x = vec![init.0; n];
    let mut y = vec![init.1; n];
    let mut iterations_used = 0;
    for i in 0..n {
        let (mut xi, mut yi) = (init.0, init.1);
        let mut steps = 0;
        while steps < iterations {
            steps += 1;
            let nx = ax[i] + s.beta_yx * yi;
            let ny = by[i] + s.beta_xy * xi;
            let scale = 1.0f64.max(nx.abs()).max(ny.abs());
            let delta = (nx - xi).abs().max((ny - yi).abs()) / scale;
            xi = nx;
            yi = ny;
            if delta <= EARLY_EXIT_TOL {
                break;
            }
        }
        x[i] = xi;
        y[i] = yi;
        iterations_used = iterations_used.max(steps);
    }

    let mut gap: f64 = 0.0;
    for i in 0..n {
        let (px, py) = rf.predict(exo.z[i], exo.w[i], &row_v(i), exo.u[i]);
        let (nx, ny) = s.reduced_errors(exo.eps_x[i], exo.eps_y[i]);
        gap = gap.max((x[i] - (px + nx)).abs()).max((y[i] - (py + ny)).abs());
    }
    Ok(Equilibrium {
        x,
        y,
        gap,
        iterations_used,
    })
}

fn simulate(cfg: &ScenarioConfig) -> Result<GeneratedSample> {
    cfg.validate()?;
    let exo = draw_exogenous(cfg);
    let eq = iterate_equilibrium(&cfg.structural, &exo, cfg.iterations, cfg.init_xy)?;
    if !(eq.gap <= cfg.convergence_tol) {
        return Err(Error::NonConvergence {
            gap: eq.gap,
            tol: cfg.convergence_tol,
        });
    }
    let data = Dataset::with_default_names(eq.x, eq.y, exo.z, exo.w, exo.v)?;
    Ok(GeneratedSample {
        data,
        u: exo.u,
        equilibrium_gap: eq.gap,
        iterations_used: eq.iterations_used,
    })
}

/// Generates a sample from the base model (no proxy violations).
pub fn generate(cfg: &ScenarioConfig) -> Result<GeneratedSample> {
    if cfg.structural.has_sensitivity() {
        return Err(Error::config(
            "structural.r_w/r_z",
            "nonzero sensitivity parameters need generate_violation",
        ));
    }
    simulate(cfg)
}

/// Generates a sample in which W enters the X equation through
/// `gamma_w * r_w` and Z enters the Y equation through `alpha_z * r_z`.
pub fn generate_violation(cfg: &ScenarioConfig) -> Result<GeneratedSample> {
    simulate(cfg)
}

/// Writes `X,Y,Z,W,V1..Vp` (plus `U` when `include_u`) with a header row.
pub fn write_sample_csv<W: Write>(
    sample: &GeneratedSample,
    out: W,
    include_u: bool,
) -> Result<()> {
    let d = &sample.data;
    let mut wtr = csv::Writer::from_writer(out);
    let mut header: Vec<String> = ["X", "Y", "Z", "W"].iter().map(|s| s.to_string()).collect();
    header.extend((1..=d.p()).map(|j| format!("V{j}")));
    if include_u {
        header.push("U".into());
    }
    wtr.write_record(&header)?;
    let mut record = Vec::with_capacity(header.len());
    for i in 0..d.n() {
        record.clear();
        record.extend([d.x()[i], d.y()[i], d.z()[i], d.w()[i]].iter().map(|v| v.to_string()));
        record.extend(d.v().iter().map(|c| c[i].to_string()));
        if include_u {
            record.push(sample.u[i].to_string());
        }
        wtr.write_record(&record)?;
    }
    wtr.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}
