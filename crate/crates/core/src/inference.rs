//! Nonparametric row bootstrap with percentile intervals.
//!
//! Replicate `b` draws its resample indices from a ChaCha stream selected by
//! `(seed, b)` alone, so replicates can run in any order or in parallel and
//! still produce identical output.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::estimators::{bi_tsls_direction, first_stage, BasisSpec, Direction};
use crate::model::sensitivity_adjust;

/// Smallest sample the bootstrap will resample.
pub const MIN_BOOTSTRAP_ROWS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CiMethod {
    #[default]
    Percentile,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct BootstrapConfig {
    pub replicates: usize,
    pub seed: u64,
    pub ci_level: f64,
    pub ci_method: CiMethod,
    /// Keep per-replicate estimates in the result.
    pub retain_replicates: bool,
}

impl Default for BootstrapConfig {
    fn default() -> Self {
        BootstrapConfig {
            replicates: 200,
            seed: 0,
            ci_level: 0.95,
            ci_method: CiMethod::Percentile,
            retain_replicates: false,
        }
    }
}

impl BootstrapConfig {
    pub fn with_seed(seed: u64) -> Self {
        BootstrapConfig {
            seed,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.replicates < 2 {
            return Err(Error::config("bootstrap.replicates", "must be at least 2"));
        }
        if !(self.ci_level > 0.0 && self.ci_level < 1.0) {
            return Err(Error::config("bootstrap.ci_level", "must lie strictly between 0 and 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InferenceResult {
    pub point: f64,
    pub se: f64,
    pub ci_lower: f64,
    pub ci_upper: f64,
    pub n_failed_replicates: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replicate_estimates: Option<Vec<f64>>,
}

/// Resample indices for replicate `replicate` of a bootstrap seeded with `seed`.
pub fn resample_indices(seed: u64, replicate: u64, n: usize) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

/// Runs `f` on every replicate, in replicate order.
fn run_replicates<T, F>(data: &Dataset, cfg: &BootstrapConfig, f: F) -> Vec<Result<T>>
where
    T: Send,
    F: Fn(&Dataset) -> Result<T> + Sync,
{
    let n = data.n();
    (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|b| f(&data.resample(&resample_indices(cfg.seed, b, n))))
        .collect()
}

fn check_inputs(data: &Dataset, cfg: &BootstrapConfig) -> Result<()> {
    cfg.validate()?;
    if data.n() < MIN_BOOTSTRAP_ROWS {
        return Err(Error::InvalidData(format!(
            "bootstrap needs at least {MIN_BOOTSTRAP_ROWS} rows, got {}",
            data.n()
        )));
    }
    Ok(())
}

/// Linear-interpolation quantile of sorted data.
pub(crate) fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let h = q * (sorted.len() - 1) as f64;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

/// Sample standard deviation (n - 1 denominator) of sorted data.
pub(crate) fn sd_sorted(sorted: &[f64]) -> f64 {
    let m = sorted.len() as f64;
    let mean = sorted.iter().sum::<f64>() / m;
    (sorted.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0)).sqrt()
}

fn summarize(
    point: f64,
    estimates: Vec<f64>,
    failed: usize,
    last_error: Option<String>,
    cfg: &BootstrapConfig,
) -> Result<InferenceResult> {
    if 2 * failed > cfg.replicates || estimates.len() < 2 {
        return Err(Error::TooManyFailures {
            failed,
            total: cfg.replicates,
            last: last_error.unwrap_or_else(|| "none".into()),
        });
    }
    let mut sorted = estimates.clone();
    sorted.sort_by(f64::total_cmp);
    let alpha = 1.0 - cfg.ci_level;
    Ok(InferenceResult {
        point,
        se: sd_sorted(&sorted),
        ci_lower: quantile_sorted(&sorted, alpha / 2.0),
        ci_upper: quantile_sorted(&sorted, 1.0 - alpha / 2.0),
        n_failed_replicates: failed,
        replicate_estimates: cfg.retain_replicates.then_some(estimates),
    })
}

/// Splits per-replicate outcomes into `K` series of successes, counting a
/// replicate as failed if it errored.
fn collect<const K: usize>(
    outcomes: Vec<Result<[f64; K]>>,
) -> ([Vec<f64>; K], usize, Option<String>) {
    let mut series: [Vec<f64>; K] = std::array::from_fn(|_| Vec::with_capacity(outcomes.len()));
    let mut failed = 0;
    let mut last = None;
    for outcome in outcomes {
        match outcome {
            Ok(values) if values.iter().all(|v| v.is_finite()) => {
                for (s, v) in series.iter_mut().zip(values) {
                    s.push(v);
                }
            }
            Ok(_) => {
                failed += 1;
                last = Some("non-finite estimate".to_string());
            }
            Err(e) => {
                failed += 1;
                last = Some(e.to_string());
            }
        }
    }
    (series, failed, last)
}

/// Bootstrap standard error and percentile interval for a scalar estimator.
///
/// Replicates where the estimator errors are dropped and counted; more than
/// half failing is an error.
pub fn bootstrap<F>(data: &Dataset, estimator: F, cfg: &BootstrapConfig) -> Result<InferenceResult>
where
    F: Fn(&Dataset) -> Result<f64> + Sync,
{
    check_inputs(data, cfg)?;
    let point = estimator(data)?;
    let outcomes = run_replicates(data, cfg, |d| estimator(d).map(|v| [v]));
    let ([estimates], failed, last) = collect(outcomes);
    summarize(point, estimates, failed, last, cfg)
}

/// Joint bootstrap of an estimator returning two values from each resample.
pub fn bootstrap_pair<F>(
    data: &Dataset,
    estimator: F,
    cfg: &BootstrapConfig,
) -> Result<(InferenceResult, InferenceResult)>
where
    F: Fn(&Dataset) -> Result<(f64, f64)> + Sync,
{
    check_inputs(data, cfg)?;
    let (p0, p1) = estimator(data)?;
    let outcomes = run_replicates(data, cfg, |d| estimator(d).map(|(a, b)| [a, b]));
    let ([e0, e1], failed, last) = collect(outcomes);
    Ok((
        summarize(p0, e0, failed, last.clone(), cfg)?,
        summarize(p1, e1, failed, last, cfg)?,
    ))
}

/// Sensitivity-adjusted Bi-TSLS pair `(beta^s_xy, beta^s_yx)`, with `m_basis`
/// for the x -> y first stage and `h_basis` for y -> x.
pub fn sensitivity_estimates(
    data: &Dataset,
    m_basis: &BasisSpec,
    h_basis: &BasisSpec,
    r_w: f64,
    r_z: f64,
) -> Result<(f64, f64)> {
    let s_xy = bi_tsls_direction(data, m_basis, Direction::XToY)?.estimate;
    let s_yx = bi_tsls_direction(data, h_basis, Direction::YToX)?.estimate;
    sensitivity_adjust(s_xy, s_yx, r_w, r_z)
}

/// Bootstrap of the sensitivity-adjusted estimates. The adjustment is applied
/// inside every replicate, to that replicate's pair of ratios.
pub fn bootstrap_sensitivity(
    data: &Dataset,
    m_basis: &BasisSpec,
    h_basis: &BasisSpec,
    r_w: f64,
    r_z: f64,
    cfg: &BootstrapConfig,
) -> Result<(InferenceResult, InferenceResult)> {
    bootstrap_pair(
        data,
        |d| sensitivity_estimates(d, m_basis, h_basis, r_w, r_z),
        cfg,
    )
}

/// Bootstrap check that at least one first-stage basis coefficient is
/// distinguishable from zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeakBasisReport {
    pub direction: Direction,
    pub coefficients: Vec<f64>,
    pub bootstrap_se: Vec<f64>,
    /// Largest |coefficient / se| over the basis columns.
    pub max_abs_z: f64,
    /// Bonferroni-adjusted two-sided normal critical value at the configured level.
    pub critical_value: f64,
    pub weak: bool,
    pub n_failed_replicates: usize,
}

pub fn weak_basis_check(
    data: &Dataset,
    basis: &BasisSpec,
    direction: Direction,
    cfg: &BootstrapConfig,
) -> Result<WeakBasisReport> {
    check_inputs(data, cfg)?;
    let full = first_stage(data, basis, direction)?;
    let q = full.basis_coefficients.len();
    let outcomes: Vec<Result<Vec<f64>>> = run_replicates(data, cfg, |d| {
        first_stage(d, basis, direction).map(|fs| fs.basis_coefficients)
    });
    let mut draws: Vec<Vec<f64>> = vec![Vec::new(); q];
    let mut failed = 0;
    for outcome in outcomes {
        match outcome {
            Ok(c) if c.iter().all(|v| v.is_finite()) => {
                for (d, v) in draws.iter_mut().zip(c) {
                    d.push(v);
                }
            }
            _ => failed += 1,
        }
    }
    if 2 * failed > cfg.replicates || draws.first().is_none_or(|d| d.len() < 2) {
        return Err(Error::TooManyFailures {
            failed,
            total: cfg.replicates,
            last: "first-stage fit failed".into(),
        });
    }
    let bootstrap_se: Vec<f64> = draws
        .into_iter()
        .map(|mut d| {
            d.sort_by(f64::total_cmp);
            sd_sorted(&d)
        })
        .collect();
    let max_abs_z = full
        .basis_coefficients
        .iter()
        .zip(&bootstrap_se)
        .map(|(c, se)| {
            if *se > 0.0 {
                (c / se).abs()
            } else if *c == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        })
        .fold(0.0, f64::max);
    let alpha = 1.0 - cfg.ci_level;
    let critical_value = Normal::standard().inverse_cdf(1.0 - alpha / (2.0 * q as f64));
    Ok(WeakBasisReport {
        direction,
        coefficients: full.basis_coefficients,
        bootstrap_se,
        max_abs_z,
        critical_value,
        weak: max_abs_z < critical_value,
        n_failed_replicates: failed,
    })
}
