//! Bidirectional two-stage least squares and the OLS / IV comparators.
//!
//! For the effect of X on Y, the first stage projects W onto
//! `{1, Z, V, m(Z, V)}`. The nonlinear basis `m` is what separates the fitted
//! `W_hat` from a linear combination of Z and V; without it the second stage
//! is collinear. The second stage regresses X and Y on `{1, Z, W_hat, V}`
//! and the effect is the ratio of the two Z coefficients. The reverse effect
//! is the same procedure with (X, Z) and (Y, W) exchanged.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::model::checked_ratio;
use crate::regression::{DesignMatrix, QrFactor, DEFAULT_RANK_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    XToY,
    YToX,
}

impl Direction {
    pub const BOTH: [Direction; 2] = [Direction::XToY, Direction::YToX];

    pub fn as_str(self) -> &'static str {
        match self {
            Direction::XToY => "x_to_y",
            Direction::YToX => "y_to_x",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    BiTsls,
    Ols,
    Iv,
}

impl Method {
    pub const ALL: [Method; 3] = [Method::BiTsls, Method::Ols, Method::Iv];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::BiTsls => "bi_tsls",
            Method::Ols => "ols",
            Method::Iv => "iv",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

type BasisFn = dyn Fn(f64, &[f64]) -> Vec<f64> + Send + Sync;

/// A user-supplied first-stage basis: maps (proxy value, covariate row) to a
/// fixed number of extra regressors.
#[derive(Clone)]
pub struct CustomBasis {
    name: String,
    width: usize,
    f: Arc<BasisFn>,
}

impl CustomBasis {
    pub fn new(
        name: impl Into<String>,
        width: usize,
        f: impl Fn(f64, &[f64]) -> Vec<f64> + Send + Sync + 'static,
    ) -> Self {
        CustomBasis {
            name: name.into(),
            width,
            f: Arc::new(f),
        }
    }
}

impl fmt::Debug for CustomBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomBasis")
            .field("name", &self.name)
            .field("width", &self.width)
            .finish()
    }
}

/// Nonlinear first-stage terms `m(Z, V)` (or `h(W, V)` in the reverse direction).
#[derive(Debug, Clone, Default)]
pub enum BasisSpec {
    /// One column `proxy * V_j` per covariate.
    #[default]
    ProductInteraction,
    /// The single column `proxy^2`; usable without covariates.
    Square,
    Custom(CustomBasis),
}

/// Serializable basis choice for configuration documents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BasisKind {
    #[default]
    ProductInteraction,
    Square,
}

impl From<BasisKind> for BasisSpec {
    fn from(kind: BasisKind) -> Self {
        match kind {
            BasisKind::ProductInteraction => BasisSpec::ProductInteraction,
            BasisKind::Square => BasisSpec::Square,
        }
    }
}

impl BasisSpec {
    /// Named basis columns for `proxy` given covariate columns.
    pub fn columns(
        &self,
        proxy: &[f64],
        proxy_name: &str,
        v: &[Vec<f64>],
        v_names: &[String],
    ) -> Result<Vec<(String, Vec<f64>)>> {
        match self {
            BasisSpec::ProductInteraction => {
                if v.is_empty() {
                    return Err(Error::InvalidBasis(
                        "product_interaction needs at least one covariate; with no covariates use \
                         the square basis or a custom nonlinear function of the proxy"
                            .into(),
                    ));
                }
                Ok(v.iter()
                    .zip(v_names)
                    .map(|(col, name)| {
                        let prod = proxy.iter().zip(col).map(|(a, b)| a * b).collect();
                        (format!("{proxy_name}*V[{name}]"), prod)
                    })
                    .collect())
            }
            BasisSpec::Square => Ok(vec![(
                format!("{proxy_name}^2"),
                proxy.iter().map(|a| a * a).collect(),
            )]),
            BasisSpec::Custom(custom) => {
                let n = proxy.len();
                let mut cols = vec![Vec::with_capacity(n); custom.width];
                let mut row = vec![0.0; v.len()];
                for i in 0..n {
                    for (r, c) in row.iter_mut().zip(v) {
                        *r = c[i];
                    }
                    let out = (custom.f)(proxy[i], &row);
                    if out.len() != custom.width {
                        return Err(Error::InvalidBasis(format!(
                            "custom basis `{}` returned {} values at row {i}, expected {}",
                            custom.name,
                            out.len(),
                            custom.width
                        )));
                    }
                    for (c, val) in cols.iter_mut().zip(out) {
                        c.push(val);
                    }
                }
                Ok(cols
                    .into_iter()
                    .enumerate()
                    .map(|(j, c)| (format!("{}[{j}]({proxy_name})", custom.name), c))
                    .collect())
            }
        }
    }
}

/// First-stage diagnostics for a Bi-TSLS estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstStageDiagnostics {
    pub full_rank: bool,
    pub condition_estimate: f64,
    /// Largest absolute coefficient among the basis columns.
    pub basis_coef_magnitude: f64,
    pub second_stage_condition: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateResult {
    pub direction: Direction,
    pub method: Method,
    pub estimate: f64,
    /// Present for Bi-TSLS only.
    pub first_stage: Option<FirstStageDiagnostics>,
    /// |denominator| of the ratio; absent for OLS, which is not a ratio.
    pub denominator_magnitude: Option<f64>,
}

/// Column references for one direction of the two-stage procedure.
struct Roles<'a> {
    direction: Direction,
    /// Equation whose proxy coefficient is the denominator (X for x -> y).
    cause: &'a [f64],
    effect: &'a [f64],
    /// Proxy entering the cause equation (Z for x -> y).
    own_proxy: &'a [f64],
    /// Proxy replaced by its first-stage fit (W for x -> y).
    other_proxy: &'a [f64],
    own_name: &'static str,
    other_name: &'static str,
}

fn roles(data: &Dataset, direction: Direction) -> Roles<'_> {
    match direction {
        Direction::XToY => Roles {
            direction,
            cause: data.x(),
            effect: data.y(),
            own_proxy: data.z(),
            other_proxy: data.w(),
            own_name: "Z",
            other_name: "W",
        },
        Direction::YToX => Roles {
            direction,
            cause: data.y(),
            effect: data.x(),
            own_proxy: data.w(),
            other_proxy: data.z(),
            own_name: "W",
            other_name: "Z",
        },
    }
}

fn push_covariates(design: &mut DesignMatrix, data: &Dataset) -> Result<()> {
    for (name, col) in data.v_names().iter().zip(data.v()) {
        design.push(format!("V[{name}]"), col.clone())?;
    }
    Ok(())
}

fn with_stage(err: Error, stage: String) -> Error {
    match err {
        Error::RankDeficient {
            rank,
            columns,
            condition,
            ..
        } => Error::RankDeficient {
            stage,
            rank,
            columns,
            condition,
        },
        other => other.context(stage),
    }
}

/// The first stage: the fitted other-proxy and its diagnostics.
pub(crate) struct FirstStage {
    pub fitted: Vec<f64>,
    pub basis_coefficients: Vec<f64>,
    pub condition_estimate: f64,
}

pub(crate) fn first_stage(
    data: &Dataset,
    basis: &BasisSpec,
    direction: Direction,
) -> Result<FirstStage> {
    let r = roles(data, direction);
    let n = data.n();
    let stage = || {
        format!(
            "Bi-TSLS {} stage 1 ({} on 1, {}, V, basis)",
            direction, r.other_name, r.own_name
        )
    };
    let basis_cols = basis
        .columns(r.own_proxy, r.own_name, data.v(), data.v_names())
        .map_err(|e| e.context(stage()))?;
    let mut design = DesignMatrix::with_intercept(n);
    design.push(r.own_name, r.own_proxy.to_vec())?;
    push_covariates(&mut design, data)?;
    let first_basis = design.ncols();
    for (name, col) in basis_cols {
        design.push(name, col).map_err(|e| with_stage(e, stage()))?;
    }
    let qr = QrFactor::new(&design, DEFAULT_RANK_TOL).map_err(|e| with_stage(e, stage()))?;
    let fit = qr.fit(r.other_proxy)?;
    Ok(FirstStage {
        basis_coefficients: fit.coefficients[first_basis..].to_vec(),
        fitted: fit.fitted,
        condition_estimate: fit.condition_estimate,
    })
}

fn bi_tsls(data: &Dataset, basis: &BasisSpec, direction: Direction) -> Result<EstimateResult> {
    let n = data.n();
    let p = data.p();
    if n <= p + 4 {
        return Err(Error::InvalidData(format!(
            "Bi-TSLS needs more than p + 4 = {} rows, got {n}",
            p + 4
        )));
    }
    let r = roles(data, direction);
    let stage1 = first_stage(data, basis, direction)?;

    let mut design = DesignMatrix::with_intercept(n);
    design.push(r.own_name, r.own_proxy.to_vec())?;
    design.push(format!("{}_hat", r.other_name), stage1.fitted)?;
    push_covariates(&mut design, data)?;
    let qr = QrFactor::new(&design, DEFAULT_RANK_TOL).map_err(|e| {
        with_stage(
            e,
            format!(
                "Bi-TSLS {} stage 2 (X, Y on 1, {}, {}_hat, V)",
                direction, r.own_name, r.other_name
            ),
        )
    })?;
    // Column 1 is the own proxy in both responses.
    let denominator = qr.coefficients(r.cause)?[1];
    let numerator = qr.coefficients(r.effect)?[1];
    let quantity = match direction {
        Direction::XToY => "theta_z",
        Direction::YToX => "mu_w",
    };
    let estimate = checked_ratio(numerator, denominator, quantity)?;

    Ok(EstimateResult {
        direction: r.direction,
        method: Method::BiTsls,
        estimate,
        first_stage: Some(FirstStageDiagnostics {
            full_rank: true,
            condition_estimate: stage1.condition_estimate,
            basis_coef_magnitude: stage1
                .basis_coefficients
                .iter()
                .fold(0.0, |m, c| f64::max(m, c.abs())),
            second_stage_condition: qr.condition_estimate(),
        }),
        denominator_magnitude: Some(denominator.abs()),
    })
}

/// Bi-TSLS estimate of the effect of X on Y, `mu_z_hat / theta_z_hat`.
pub fn bi_tsls_x_to_y(data: &Dataset, basis: &BasisSpec) -> Result<EstimateResult> {
    bi_tsls(data, basis, Direction::XToY)
}

/// Bi-TSLS estimate of the effect of Y on X, `theta_w_hat / mu_w_hat`, with
/// `basis` playing the role of `h(W, V)`.
pub fn bi_tsls_y_to_x(data: &Dataset, basis: &BasisSpec) -> Result<EstimateResult> {
    bi_tsls(data, basis, Direction::YToX)
}

pub fn bi_tsls_direction(
    data: &Dataset,
    basis: &BasisSpec,
    direction: Direction,
) -> Result<EstimateResult> {
    bi_tsls(data, basis, direction)
}

/// Naive regressions `X ~ 1 + Y + Z + W + V` and `Y ~ 1 + X + Z + W + V`.
/// Returns `(x_to_y, y_to_x)`.
pub fn ols_comparator(data: &Dataset) -> Result<(EstimateResult, EstimateResult)> {
    let one = |response: &[f64], regressor: &[f64], name: &str, direction: Direction| {
        let mut design = DesignMatrix::with_intercept(data.n());
        design.push(name, regressor.to_vec())?;
        design.push("Z", data.z().to_vec())?;
        design.push("W", data.w().to_vec())?;
        push_covariates(&mut design, data)?;
        let qr = QrFactor::new(&design, DEFAULT_RANK_TOL)
            .map_err(|e| with_stage(e, format!("OLS {direction}")))?;
        Ok::<_, Error>(EstimateResult {
            direction,
            method: Method::Ols,
            estimate: qr.coefficients(response)?[1],
            first_stage: None,
            denominator_magnitude: None,
        })
    };
    let xy = one(data.y(), data.x(), "X", Direction::XToY)?;
    let yx = one(data.x(), data.y(), "Y", Direction::YToX)?;
    Ok((xy, yx))
}

/// Ratio estimators from `X, Y ~ 1 + Z + W + V`, treating the proxies as
/// instruments. Returns `(x_to_y, y_to_x)`.
pub fn iv_comparator(data: &Dataset) -> Result<(EstimateResult, EstimateResult)> {
    let mut design = DesignMatrix::with_intercept(data.n());
    design.push("Z", data.z().to_vec())?;
    design.push("W", data.w().to_vec())?;
    push_covariates(&mut design, data)?;
    let qr = QrFactor::new(&design, DEFAULT_RANK_TOL)
        .map_err(|e| with_stage(e, "IV (X, Y on 1, Z, W, V)".into()))?;
    let bx = qr.coefficients(data.x())?;
    let by = qr.coefficients(data.y())?;
    let (theta_z, theta_w, mu_z, mu_w) = (bx[1], bx[2], by[1], by[2]);
    let xy = EstimateResult {
        direction: Direction::XToY,
        method: Method::Iv,
        estimate: checked_ratio(mu_z, theta_z, "theta_z")?,
        first_stage: None,
        denominator_magnitude: Some(theta_z.abs()),
    };
    let yx = EstimateResult {
        direction: Direction::YToX,
        method: Method::Iv,
        estimate: checked_ratio(theta_w, mu_w, "mu_w")?,
        first_stage: None,
        denominator_magnitude: Some(mu_w.abs()),
    };
    Ok((xy, yx))
}

/// One method in one direction; the comparators compute both directions and
/// the requested one is returned.
pub fn estimate(
    data: &Dataset,
    method: Method,
    direction: Direction,
    basis: &BasisSpec,
) -> Result<EstimateResult> {
    let pick = |(xy, yx): (EstimateResult, EstimateResult)| match direction {
        Direction::XToY => xy,
        Direction::YToX => yx,
    };
    match method {
        Method::BiTsls => bi_tsls(data, basis, direction),
        Method::Ols => ols_comparator(data).map(pick),
        Method::Iv => iv_comparator(data).map(pick),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{reduced_form_from_structural, ProxyParams, StructuralParams};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    /// Noiseless data from the reduced form, with U an exact nonlinear
    /// function of the exogenous proxy and V. In the x -> y case Z is drawn
    /// exogenously and U = exp(V) + Z^2; W follows its proxy equation without
    /// error, so X and Y are exact linear functions of (1, Z, W, V).
    fn noiseless(direction: Direction, n: usize, s: &StructuralParams) -> Dataset {
        let r = reduced_form_from_structural(s).unwrap();
        let pp = ProxyParams::paper_defaults();
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let (mut x, mut y, mut z, mut w, mut v) = (vec![], vec![], vec![], vec![], vec![]);
        for _ in 0..n {
            let vi: f64 = rng.sample(StandardNormal);
            let free: f64 = rng.sample::<f64, _>(StandardNormal) + 0.5;
            let u = vi.exp() + free * free;
            let (zi, wi) = match direction {
                Direction::XToY => (free, pp.eta0 + pp.eta_u * u + pp.eta_v[0] * vi),
                Direction::YToX => (pp.delta0 + pp.delta_u * u + pp.delta_v[0] * vi, free),
            };
            let (xi, yi) = r.predict(zi, wi, &[vi], u);
            x.push(xi);
            y.push(yi);
            z.push(zi);
            w.push(wi);
            v.push(vi);
        }
        Dataset::with_default_names(x, y, z, w, vec![v]).unwrap()
    }

    fn noisy_sample(n: usize, seed: u64) -> Dataset {
        let s = StructuralParams::paper_defaults();
        let r = reduced_form_from_structural(&s).unwrap();
        let pp = ProxyParams::paper_defaults();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rad = |rng: &mut ChaCha8Rng| if rng.random::<bool>() { 1.0 } else { -1.0 };
        let (mut x, mut y, mut z, mut w, mut v1, mut v2) =
            (vec![], vec![], vec![], vec![], vec![], vec![]);
        for _ in 0..n {
            let vi: f64 = rng.sample(StandardNormal);
            let v2i: f64 = rng.sample(StandardNormal);
            let u = vi.exp() + rad(&mut rng);
            let zi = pp.delta0 + pp.delta_u * u + pp.delta_v[0] * vi
                + rng.sample::<f64, _>(StandardNormal);
            let wi = pp.eta0 + pp.eta_u * u + pp.eta_v[0] * vi
                + rng.sample::<f64, _>(StandardNormal);
            let (px, py) = r.predict(zi, wi, &[vi], u);
            let (nx, ny) = s.reduced_errors(rad(&mut rng), rad(&mut rng));
            x.push(px + nx + 0.3 * v2i);
            y.push(py + ny - 0.2 * v2i);
            z.push(zi);
            w.push(wi);
            v1.push(vi);
            v2.push(v2i);
        }
        Dataset::with_default_names(x, y, z, w, vec![v1, v2]).unwrap()
    }

    #[test]
    fn noiseless_recovery_x_to_y() {
        let s = StructuralParams::paper_defaults();
        let data = noiseless(Direction::XToY, 400, &s);
        let est = bi_tsls_x_to_y(&data, &BasisSpec::ProductInteraction).unwrap();
        assert!((est.estimate - 0.5).abs() < 1e-8, "{}", est.estimate);
        let diag = est.first_stage.unwrap();
        assert!(diag.full_rank && diag.basis_coef_magnitude > 0.0);
        assert!(est.denominator_magnitude.unwrap() > 0.0);
    }

    #[test]
    fn noiseless_recovery_y_to_x() {
        let s = StructuralParams::paper_defaults().with_effects(0.7, -0.9);
        let data = noiseless(Direction::YToX, 400, &s);
        let est = bi_tsls_y_to_x(&data, &BasisSpec::ProductInteraction).unwrap();
        assert!((est.estimate + 0.9).abs() < 1e-8, "{}", est.estimate);
    }

    #[test]
    fn constant_proxies_are_rank_deficient() {
        let data = noisy_sample(300, 1);
        let n = data.n();
        let const_w = Dataset::new(
            data.x().to_vec(),
            data.y().to_vec(),
            data.z().to_vec(),
            vec![3.0; n],
            data.v().to_vec(),
            data.v_names().to_vec(),
        )
        .unwrap();
        match bi_tsls_x_to_y(&const_w, &BasisSpec::ProductInteraction) {
            Err(Error::RankDeficient { stage, .. }) => assert!(stage.contains("stage 2")),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
        let const_z = Dataset::new(
            data.x().to_vec(),
            data.y().to_vec(),
            vec![-1.0; n],
            data.w().to_vec(),
            data.v().to_vec(),
            data.v_names().to_vec(),
        )
        .unwrap();
        assert!(matches!(
            bi_tsls_y_to_x(&const_z, &BasisSpec::ProductInteraction),
            Err(Error::RankDeficient { .. })
        ));
        match bi_tsls_x_to_y(&const_z, &BasisSpec::ProductInteraction) {
            Err(Error::RankDeficient { stage, .. }) => assert!(stage.contains("stage 1")),
            other => panic!("expected rank deficiency, got {other:?}"),
        }
    }

    #[test]
    fn too_few_rows() {
        let data = noisy_sample(6, 2);
        assert!(matches!(
            bi_tsls_x_to_y(&data, &BasisSpec::ProductInteraction),
            Err(Error::InvalidData(_))
        ));
    }

    #[test]
    fn product_basis_without_covariates() {
        let d = noisy_sample(200, 3);
        let bare = Dataset::new(
            d.x().to_vec(),
            d.y().to_vec(),
            d.z().to_vec(),
            d.w().to_vec(),
            vec![],
            vec![],
        )
        .unwrap();
        let err = bi_tsls_x_to_y(&bare, &BasisSpec::ProductInteraction).unwrap_err();
        assert!(matches!(err.root(), Error::InvalidBasis(_)));
        assert!(bi_tsls_x_to_y(&bare, &BasisSpec::Square).is_ok());
    }

    #[test]
    fn custom_basis_width_checked() {
        let d = noisy_sample(100, 4);
        let good = BasisSpec::Custom(CustomBasis::new("cube", 1, |z, _| vec![z * z * z]));
        assert!(bi_tsls_x_to_y(&d, &good).is_ok());
        let bad = BasisSpec::Custom(CustomBasis::new("ragged", 2, |z, _| {
            if z > 1.0 {
                vec![z]
            } else {
                vec![z, z * z]
            }
        }));
        let err = bi_tsls_x_to_y(&d, &bad).unwrap_err();
        assert!(matches!(err.root(), Error::InvalidBasis(_)));
    }

    #[test]
    fn swap_symmetry_is_exact() {
        let d = noisy_sample(500, 5);
        for basis in [BasisSpec::ProductInteraction, BasisSpec::Square] {
            let a = bi_tsls_y_to_x(&d, &basis).unwrap();
            let b = bi_tsls_x_to_y(&d.swapped(), &basis).unwrap();
            assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        }
    }

    #[test]
    fn location_scale_equivariance() {
        let d = noisy_sample(800, 6);
        let basis = BasisSpec::ProductInteraction;
        let xy = bi_tsls_x_to_y(&d, &basis).unwrap().estimate;
        let yx = bi_tsls_y_to_x(&d, &basis).unwrap().estimate;
        let (a, b) = (3.5, -2.0);
        let dy = d.map_y(|y| a + b * y).unwrap();
        assert!((bi_tsls_x_to_y(&dy, &basis).unwrap().estimate - b * xy).abs() < 1e-8);
        assert!((bi_tsls_y_to_x(&dy, &basis).unwrap().estimate - yx / b).abs() < 1e-8);
        let dx = d.map_x(|x| a + b * x).unwrap();
        assert!((bi_tsls_x_to_y(&dx, &basis).unwrap().estimate - xy / b).abs() < 1e-8);
        assert!((bi_tsls_y_to_x(&dx, &basis).unwrap().estimate - b * yx).abs() < 1e-8);
    }

    #[test]
    fn covariate_shift_invariance() {
        let d = noisy_sample(800, 7);
        let basis = BasisSpec::ProductInteraction;
        let xy = bi_tsls_x_to_y(&d, &basis).unwrap().estimate;
        let yx = bi_tsls_y_to_x(&d, &basis).unwrap().estimate;
        for j in 0..d.p() {
            let shifted = d.map_v(j, |v| v + 4.0).unwrap();
            assert!((bi_tsls_x_to_y(&shifted, &basis).unwrap().estimate - xy).abs() < 1e-8);
            assert!((bi_tsls_y_to_x(&shifted, &basis).unwrap().estimate - yx).abs() < 1e-8);
        }
    }

    #[test]
    fn deterministic() {
        let d = noisy_sample(300, 8);
        let a = bi_tsls_x_to_y(&d, &BasisSpec::ProductInteraction).unwrap();
        let b = bi_tsls_x_to_y(&d, &BasisSpec::ProductInteraction).unwrap();
        assert_eq!(a.estimate.to_bits(), b.estimate.to_bits());
        assert_eq!(a, b);
    }

    #[test]
    fn comparators_run() {
        let d = noisy_sample(500, 9);
        let (oxy, oyx) = ols_comparator(&d).unwrap();
        let (ixy, iyx) = iv_comparator(&d).unwrap();
        for e in [&oxy, &oyx, &ixy, &iyx] {
            assert!(e.estimate.is_finite());
        }
        assert_eq!((oxy.direction, oyx.direction), (Direction::XToY, Direction::YToX));
        assert_eq!(ixy.method, Method::Iv);
        assert!(oxy.denominator_magnitude.is_none());
        assert_eq!(estimate(&d, Method::Iv, Direction::YToX, &BasisSpec::default()).unwrap(), iyx);
    }

    #[test]
    fn collinear_covariates_fail_ols() {
        let d = noisy_sample(200, 10);
        let v = d.v()[0].clone();
        let twice: Vec<f64> = v.iter().map(|x| 2.0 * x).collect();
        let bad = Dataset::with_default_names(
            d.x().to_vec(),
            d.y().to_vec(),
            d.z().to_vec(),
            d.w().to_vec(),
            vec![v, twice],
        )
        .unwrap();
        assert!(matches!(ols_comparator(&bad), Err(Error::RankDeficient { .. })));
    }

    #[test]
    fn iv_weak_denominator() {
        // X does not depend on Z at all and Z is orthogonal to everything else.
        let n = 64;
        let z: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let w: Vec<f64> = (0..n).map(|i| if (i / 2) % 2 == 0 { 1.0 } else { -1.0 }).collect();
        let x: Vec<f64> = w.iter().map(|wi| 2.0 * wi + 1.0).collect();
        let y: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
        let d = Dataset::with_default_names(x, y, z, w, vec![]).unwrap();
        assert!(matches!(
            iv_comparator(&d),
            Err(Error::WeakIdentification { quantity: "theta_z", .. })
        ));
    }
}
