//! Structural and reduced-form parameterizations of the bidirectional linear SEM.
//!
//! The structural system is
//!
//! ```text
//! X = alpha0 + beta_yx Y + alpha_v'V + alpha_z Z + gamma_w R_w W + alpha_u U + eps_x
//! Y = gamma0 + beta_xy X + gamma_v'V + gamma_w W + alpha_z R_z Z + gamma_u U + eps_y
//! ```
//!
//! with `R_w = R_z = 0` under the base model. Solving the pair for `(X, Y)` gives
//! the reduced form, whose `Z` and `W` coefficients identify the causal effects
//! through simple ratios. Everything here is closed-form algebra.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Magnitude below which a ratio denominator is treated as zero.
pub const WEAK_DENOMINATOR_TOL: f64 = 1e-8;

/// Coefficients of the bidirectional structural equations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralParams {
    pub alpha0: f64,
    pub gamma0: f64,
    /// Causal effect of X on Y.
    pub beta_xy: f64,
    /// Causal effect of Y on X.
    pub beta_yx: f64,
    pub alpha_z: f64,
    pub gamma_w: f64,
    #[serde(default)]
    pub alpha_v: Vec<f64>,
    #[serde(default)]
    pub gamma_v: Vec<f64>,
    pub alpha_u: f64,
    pub gamma_u: f64,
    /// Direct effect of W on X, in units of `gamma_w`.
    #[serde(default)]
    pub r_w: f64,
    /// Direct effect of Z on Y, in units of `alpha_z`.
    #[serde(default)]
    pub r_z: f64,
}

impl StructuralParams {
    /// The single-covariate setting used throughout the simulation study.
    pub fn paper_defaults() -> Self {
        StructuralParams {
            alpha0: 1.0,
            gamma0: -1.0,
            beta_xy: 0.5,
            beta_yx: -0.5,
            alpha_z: 1.0,
            gamma_w: 2.0,
            alpha_v: vec![1.0],
            gamma_v: vec![-1.0],
            alpha_u: 0.5,
            gamma_u: -0.5,
            r_w: 0.0,
            r_z: 0.0,
        }
    }

    pub fn with_effects(mut self, beta_xy: f64, beta_yx: f64) -> Self {
        self.beta_xy = beta_xy;
        self.beta_yx = beta_yx;
        self
    }

    pub fn with_confounding(mut self, alpha_u: f64, gamma_u: f64) -> Self {
        self.alpha_u = alpha_u;
        self.gamma_u = gamma_u;
        self
    }

    pub fn with_sensitivity(mut self, r_w: f64, r_z: f64) -> Self {
        self.r_w = r_w;
        self.r_z = r_z;
        self
    }

    /// Number of covariates.
    pub fn p(&self) -> usize {
        self.alpha_v.len()
    }

    pub fn has_sensitivity(&self) -> bool {
        self.r_w != 0.0 || self.r_z != 0.0
    }

    /// Determinant of the feedback system `[[1, -beta_yx], [-beta_xy, 1]]`.
    ///
    /// The sensitivity terms only add exogenous regressors to each equation, so
    /// they do not enter the system matrix.
    pub fn system_determinant(&self) -> f64 {
        1.0 - self.beta_xy * self.beta_yx
    }

    /// `1 / (1 - beta_xy beta_yx)`, the equilibrium feedback multiplier.
    pub fn iota(&self) -> f64 {
        1.0 / self.system_determinant()
    }

    pub fn validate(&self) -> Result<()> {
        let scalars = [
            ("alpha0", self.alpha0),
            ("gamma0", self.gamma0),
            ("beta_xy", self.beta_xy),
            ("beta_yx", self.beta_yx),
            ("alpha_z", self.alpha_z),
            ("gamma_w", self.gamma_w),
            ("alpha_u", self.alpha_u),
            ("gamma_u", self.gamma_u),
            ("r_w", self.r_w),
            ("r_z", self.r_z),
        ];
        for (name, value) in scalars {
            if !value.is_finite() {
                return Err(Error::config(name, "must be finite"));
            }
        }
        if self.alpha_v.len() != self.gamma_v.len() {
            return Err(Error::config(
                "gamma_v",
                format!(
                    "length {} differs from alpha_v length {}",
                    self.gamma_v.len(),
                    self.alpha_v.len()
                ),
            ));
        }
        if self.alpha_v.iter().chain(&self.gamma_v).any(|v| !v.is_finite()) {
            return Err(Error::config("alpha_v/gamma_v", "must be finite"));
        }
        if !stability_check(self.beta_xy, self.beta_yx) {
            return Err(Error::Stability(format!(
                "|beta_xy * beta_yx| = {} must be strictly below 1",
                (self.beta_xy * self.beta_yx).abs()
            )));
        }
        let det = self.system_determinant();
        if det.abs() <= WEAK_DENOMINATOR_TOL {
            return Err(Error::Stability(format!(
                "system determinant {det:e} is numerically singular"
            )));
        }
        Ok(())
    }

    /// Reduced-form disturbances `(nu_x, nu_y)` implied by structural errors.
    pub fn reduced_errors(&self, eps_x: f64, eps_y: f64) -> (f64, f64) {
        let iota = self.iota();
        (
            (eps_x + eps_y * self.beta_yx) * iota,
            (eps_y + eps_x * self.beta_xy) * iota,
        )
    }
}

/// Coefficients of the equilibrium (reduced-form) equations for X and Y.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedFormParams {
    pub theta0: f64,
    pub mu0: f64,
    pub theta_z: f64,
    pub mu_z: f64,
    pub theta_w: f64,
    pub mu_w: f64,
    pub theta_v: Vec<f64>,
    pub mu_v: Vec<f64>,
    pub theta_u: f64,
    pub mu_u: f64,
}

impl ReducedFormParams {
    /// Systematic part of `(X, Y)` at the given exogenous values.
    pub fn predict(&self, z: f64, w: f64, v: &[f64], u: f64) -> (f64, f64) {
        let x = self.theta0
            + self.theta_z * z
            + self.theta_w * w
            + dot(&self.theta_v, v)
            + self.theta_u * u;
        let y = self.mu0 + self.mu_z * z + self.mu_w * w + dot(&self.mu_v, v) + self.mu_u * u;
        (x, y)
    }
}

/// Coefficients of the linear proxy equations for Z and W.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProxyParams {
    pub delta0: f64,
    pub delta_u: f64,
    #[serde(default)]
    pub delta_v: Vec<f64>,
    pub eta0: f64,
    pub eta_u: f64,
    #[serde(default)]
    pub eta_v: Vec<f64>,
}

impl ProxyParams {
    pub fn paper_defaults() -> Self {
        ProxyParams {
            delta0: 1.0,
            delta_u: 1.0,
            delta_v: vec![-0.5],
            eta0: 1.0,
            eta_u: -1.0,
            eta_v: vec![0.5],
        }
    }

    pub fn validate(&self, p: usize) -> Result<()> {
        if self.delta_v.len() != p {
            return Err(Error::config(
                "delta_v",
                format!("length {} but the model has {p} covariates", self.delta_v.len()),
            ));
        }
        if self.eta_v.len() != p {
            return Err(Error::config(
                "eta_v",
                format!("length {} but the model has {p} covariates", self.eta_v.len()),
            ));
        }
        let finite = [self.delta0, self.delta_u, self.eta0, self.eta_u]
            .iter()
            .chain(&self.delta_v)
            .chain(&self.eta_v)
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::config("proxy", "coefficients must be finite"));
        }
        Ok(())
    }
}

/// True iff the feedback loop is stable, i.e. `|beta_xy * beta_yx| < 1`.
///
/// For the 2x2 effect matrix `[[0, beta_yx], [beta_xy, 0]]` the spectral radius
/// is `sqrt(|beta_xy * beta_yx|)`, so this is the spectral-radius condition.
pub fn stability_check(beta_xy: f64, beta_yx: f64) -> bool {
    (beta_xy * beta_yx).abs() < 1.0
}

/// Solves the structural system for its reduced form, including the
/// sensitivity-adjusted Z and W coefficients when `r_w` or `r_z` is nonzero.
pub fn reduced_form_from_structural(s: &StructuralParams) -> Result<ReducedFormParams> {
    s.validate()?;
    let iota = s.iota();
    let (bxy, byx) = (s.beta_xy, s.beta_yx);

    let theta_v = s
        .alpha_v
        .iter()
        .zip(&s.gamma_v)
        .map(|(av, gv)| (av + gv * byx) * iota)
        .collect();
    let mu_v = s
        .alpha_v
        .iter()
        .zip(&s.gamma_v)
        .map(|(av, gv)| (gv + av * bxy) * iota)
        .collect();

    Ok(ReducedFormParams {
        theta0: (s.alpha0 + s.gamma0 * byx) * iota,
        mu0: (s.gamma0 + s.alpha0 * bxy) * iota,
        theta_z: (s.alpha_z + s.alpha_z * s.r_z * byx) * iota,
        mu_z: (s.alpha_z * s.r_z + s.alpha_z * bxy) * iota,
        theta_w: (s.gamma_w * s.r_w + s.gamma_w * byx) * iota,
        mu_w: (s.gamma_w + s.gamma_w * s.r_w * bxy) * iota,
        theta_v,
        mu_v,
        theta_u: (s.alpha_u + s.gamma_u * byx) * iota,
        mu_u: (s.gamma_u + s.alpha_u * bxy) * iota,
    })
}

/// The coefficient ratios `(mu_z / theta_z, theta_w / mu_w)`.
///
/// Under the base model these are `(beta_xy, beta_yx)`; with sensitivity
/// parameters they are the unadjusted ratios `(S_xy, S_yx)`.
pub fn causal_ratios(r: &ReducedFormParams) -> Result<(f64, f64)> {
    checked_ratio(r.mu_z, r.theta_z, "theta_z")
        .and_then(|xy| checked_ratio(r.theta_w, r.mu_w, "mu_w").map(|yx| (xy, yx)))
}

pub(crate) fn checked_ratio(num: f64, den: f64, quantity: &'static str) -> Result<f64> {
    if !(den.abs() >= WEAK_DENOMINATOR_TOL) {
        return Err(Error::WeakIdentification {
            quantity,
            magnitude: den.abs(),
        });
    }
    Ok(num / den)
}

/// Maps the coefficient ratios `(S_xy, S_yx)` to the causal effects
/// `(beta^s_xy, beta^s_yx)` for given sensitivity parameters.
///
/// With `r_w = r_z = 0` this returns its inputs unchanged.
pub fn sensitivity_adjust(s_xy: f64, s_yx: f64, r_w: f64, r_z: f64) -> Result<(f64, f64)> {
    let den = 1.0 - s_xy * s_yx * r_w * r_z;
    if !(den.abs() >= WEAK_DENOMINATOR_TOL) {
        return Err(Error::DegenerateDenominator {
            magnitude: den.abs(),
        });
    }
    let rr = r_w * r_z;
    let beta_xy = (s_xy * (1.0 + s_yx * r_z - rr) - r_z) / den;
    let beta_yx = (s_yx * (1.0 + s_xy * r_w - rr) - r_w) / den;
    Ok((beta_xy, beta_yx))
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn base(beta_xy: f64, beta_yx: f64, alpha_z: f64, gamma_w: f64) -> StructuralParams {
        StructuralParams {
            alpha_z,
            gamma_w,
            ..StructuralParams::paper_defaults().with_effects(beta_xy, beta_yx)
        }
    }

    /// Independent route: solve the 2x2 structural system for the response of
    /// (X, Y) to a unit change in one exogenous input by Cramer's rule.
    fn solve_system(s: &StructuralParams, rhs_x: f64, rhs_y: f64) -> (f64, f64) {
        // [1, -byx; -bxy, 1] [x; y] = [rhs_x; rhs_y]
        let det = 1.0 - s.beta_xy * s.beta_yx;
        let x = (rhs_x + s.beta_yx * rhs_y) / det;
        let y = (rhs_y + s.beta_xy * rhs_x) / det;
        (x, y)
    }

    #[test]
    fn paper_setting_reduced_form() {
        let s = base(0.5, -0.5, 1.0, 2.0);
        let r = reduced_form_from_structural(&s).unwrap();
        assert!((s.iota() - 0.8).abs() < 1e-15);
        assert!((r.theta_z - 0.8).abs() < 1e-15);
        assert!((r.mu_z - 0.4).abs() < 1e-15);
        assert!((r.theta_w + 0.8).abs() < 1e-15);
        assert!((r.mu_w - 1.6).abs() < 1e-15);
        let (bxy, byx) = causal_ratios(&r).unwrap();
        assert!((bxy - 0.5).abs() < 1e-15);
        assert!((byx + 0.5).abs() < 1e-15);
    }

    #[test]
    fn acyclic_reduced_form() {
        for bxy in [-3.0, 0.0, 0.7, 12.0] {
            let s = base(bxy, 0.0, 1.7, -0.4);
            let r = reduced_form_from_structural(&s).unwrap();
            assert_eq!(s.iota(), 1.0);
            assert_eq!(r.theta_z, 1.7);
            assert_eq!(r.theta_w, 0.0);
            assert_eq!(r.mu_w, -0.4);
            assert!((r.mu_z - 1.7 * bxy).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_structure_gives_zero_reduced_form() {
        let s = StructuralParams {
            alpha0: 0.0,
            gamma0: 0.0,
            beta_xy: 0.0,
            beta_yx: 0.0,
            alpha_z: 0.0,
            gamma_w: 0.0,
            alpha_v: vec![0.0, 0.0],
            gamma_v: vec![0.0, 0.0],
            alpha_u: 0.0,
            gamma_u: 0.0,
            r_w: 0.0,
            r_z: 0.0,
        };
        let r = reduced_form_from_structural(&s).unwrap();
        let all = [r.theta0, r.mu0, r.theta_z, r.mu_z, r.theta_w, r.mu_w, r.theta_u, r.mu_u];
        assert!(all.iter().chain(&r.theta_v).chain(&r.mu_v).all(|c| *c == 0.0));
    }

    #[test]
    fn reverse_effect_absent() {
        let r = ReducedFormParams {
            theta0: 0.0,
            mu0: 0.0,
            theta_z: 1.0,
            mu_z: 0.3,
            theta_w: 0.0,
            mu_w: 2.5,
            theta_v: vec![],
            mu_v: vec![],
            theta_u: 0.0,
            mu_u: 0.0,
        };
        assert_eq!(causal_ratios(&r).unwrap().1, 0.0);
    }

    #[test]
    fn zero_theta_z_is_weak() {
        let mut r = reduced_form_from_structural(&base(0.5, -0.5, 1.0, 2.0)).unwrap();
        r.theta_z = 0.0;
        match causal_ratios(&r) {
            Err(Error::WeakIdentification { quantity, magnitude }) => {
                assert_eq!(quantity, "theta_z");
                assert_eq!(magnitude, 0.0);
            }
            other => panic!("expected weak identification, got {other:?}"),
        }
        r.theta_z = 0.8;
        r.mu_w = 5e-9;
        assert!(matches!(
            causal_ratios(&r),
            Err(Error::WeakIdentification { quantity: "mu_w", .. })
        ));
    }

    #[test]
    fn stability_examples() {
        assert!(stability_check(0.5, -0.5));
        assert!(stability_check(0.0, 1e6));
        assert!(!stability_check(2.0, 0.5));
        assert!(!stability_check(-1.2, 1.0));
        let unstable = StructuralParams::paper_defaults().with_effects(2.0, 0.5);
        assert!(matches!(
            reduced_form_from_structural(&unstable),
            Err(Error::Stability(_))
        ));
    }

    #[test]
    fn mismatched_covariate_lengths_rejected() {
        let mut s = StructuralParams::paper_defaults();
        s.gamma_v.push(1.0);
        assert!(matches!(s.validate(), Err(Error::Config { .. })));
    }

    #[test]
    fn sensitivity_hand_example() {
        let s = base(0.5, -0.5, 1.0, 2.0).with_sensitivity(0.3, 0.2);
        let r = reduced_form_from_structural(&s).unwrap();
        // Stage one, checked against the 2x2 solve.
        let (tz, mz) = solve_system(&s, s.alpha_z, s.alpha_z * s.r_z);
        let (tw, mw) = solve_system(&s, s.gamma_w * s.r_w, s.gamma_w);
        assert!((r.theta_z - 0.72).abs() < 1e-15 && (r.theta_z - tz).abs() < 1e-15);
        assert!((r.mu_z - 0.56).abs() < 1e-15 && (r.mu_z - mz).abs() < 1e-15);
        assert!((r.theta_w + 0.32).abs() < 1e-15 && (r.theta_w - tw).abs() < 1e-15);
        assert!((r.mu_w - 1.84).abs() < 1e-15 && (r.mu_w - mw).abs() < 1e-15);

        let (s_xy, s_yx) = causal_ratios(&r).unwrap();
        assert!((s_xy - 0.56 / 0.72).abs() < 1e-15);
        assert!((s_xy - 0.77778).abs() < 1e-5);
        assert!((s_yx + 0.32 / 1.84).abs() < 1e-15);
        assert!((s_yx + 0.17391).abs() < 1e-5);

        // Stage two.
        let (bxy, byx) = sensitivity_adjust(s_xy, s_yx, 0.3, 0.2).unwrap();
        assert!((bxy - 0.5).abs() < 1e-14, "{bxy}");
        assert!((byx + 0.5).abs() < 1e-14, "{byx}");
    }

    #[test]
    fn sensitivity_zero_is_identity_bitwise() {
        for (a, b) in [(0.77, -0.17), (-3.5, 12.25), (0.0, -0.0), (1e-300, 7.0)] {
            let (x, y) = sensitivity_adjust(a, b, 0.0, 0.0).unwrap();
            assert_eq!(x.to_bits(), a.to_bits());
            assert_eq!(y.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn sensitivity_degenerate_denominator() {
        // s_xy * s_yx * r_w * r_z = 1
        let r = sensitivity_adjust(2.0, 2.0, 0.5, 0.5);
        assert!(matches!(r, Err(Error::DegenerateDenominator { .. })));
        let r = sensitivity_adjust(4.0, 1.0, -0.5, -0.5);
        assert!(matches!(r, Err(Error::DegenerateDenominator { .. })));
    }

    #[test]
    fn reduced_form_reproduces_structural_solution() {
        // A full equilibrium row computed by the 2x2 solve must match predict + nu.
        let s = StructuralParams {
            alpha_v: vec![1.0, 0.3],
            gamma_v: vec![-1.0, 0.7],
            ..StructuralParams::paper_defaults().with_sensitivity(-0.2, 0.4)
        };
        let r = reduced_form_from_structural(&s).unwrap();
        let (z, w, v, u, ex, ey) = (0.3, -1.1, [0.4, -2.0], 1.9, 1.0, -1.0);
        let rhs_x = s.alpha0 + dot(&s.alpha_v, &v) + s.alpha_z * z + s.gamma_w * s.r_w * w
            + s.alpha_u * u
            + ex;
        let rhs_y = s.gamma0 + dot(&s.gamma_v, &v) + s.gamma_w * w + s.alpha_z * s.r_z * z
            + s.gamma_u * u
            + ey;
        let (x, y) = solve_system(&s, rhs_x, rhs_y);
        let (px, py) = r.predict(z, w, &v, u);
        let (nx, ny) = s.reduced_errors(ex, ey);
        assert!((px + nx - x).abs() < 1e-13);
        assert!((py + ny - y).abs() < 1e-13);
    }

    #[test]
    fn params_json_round_trip_uses_field_names() {
        let s = StructuralParams::paper_defaults().with_sensitivity(0.1, -0.2);
        let json = serde_json::to_value(&s).unwrap();
        for key in ["alpha0", "gamma0", "beta_xy", "beta_yx", "alpha_z", "gamma_w", "alpha_v",
            "gamma_v", "alpha_u", "gamma_u", "r_w", "r_z"]
        {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        let back: StructuralParams = serde_json::from_value(json).unwrap();
        assert_eq!(back, s);
        // Sensitivity parameters default to zero.
        let minimal = r#"{"alpha0":1,"gamma0":-1,"beta_xy":0.5,"beta_yx":-0.5,
            "alpha_z":1,"gamma_w":2,"alpha_u":0.5,"gamma_u":-0.5}"#;
        let m: StructuralParams = serde_json::from_str(minimal).unwrap();
        assert_eq!((m.r_w, m.r_z, m.p()), (0.0, 0.0, 0));
    }

    fn nonzero(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
        (lo..hi, any::<bool>()).prop_map(|(m, neg)| if neg { -m } else { m })
    }

    proptest! {
        #[test]
        fn base_round_trip(
            bxy in -3.0f64..3.0,
            byx in -3.0f64..3.0,
            az in nonzero(0.05, 5.0),
            gw in nonzero(0.05, 5.0),
            au in -2.0f64..2.0,
            gu in -2.0f64..2.0,
        ) {
            prop_assume!((bxy * byx).abs() < 0.95);
            let s = base(bxy, byx, az, gw).with_confounding(au, gu);
            let r = reduced_form_from_structural(&s).unwrap();
            let (hxy, hyx) = causal_ratios(&r).unwrap();
            prop_assert!((hxy - bxy).abs() < 1e-12);
            prop_assert!((hyx - byx).abs() < 1e-12);
        }

        #[test]
        fn sensitivity_round_trip(
            bxy in -2.0f64..2.0,
            byx in -2.0f64..2.0,
            az in nonzero(0.1, 4.0),
            gw in nonzero(0.1, 4.0),
            rw in -0.5f64..0.5,
            rz in -0.5f64..0.5,
        ) {
            prop_assume!((bxy * byx).abs() < 0.9);
            let s = base(bxy, byx, az, gw).with_sensitivity(rw, rz);
            let r = reduced_form_from_structural(&s).unwrap();
            prop_assume!(r.theta_z.abs() > 1e-3 && r.mu_w.abs() > 1e-3);
            let (sxy, syx) = causal_ratios(&r).unwrap();
            prop_assume!((1.0 - sxy * syx * rw * rz).abs() > 1e-3);
            let (hxy, hyx) = sensitivity_adjust(sxy, syx, rw, rz).unwrap();
            prop_assert!((hxy - bxy).abs() < 1e-10, "{} vs {}", hxy, bxy);
            prop_assert!((hyx - byx).abs() < 1e-10, "{} vs {}", hyx, byx);
        }

        #[test]
        fn sensitivity_zero_identity(a in -1e6f64..1e6, b in -1e6f64..1e6) {
            prop_assert_eq!(sensitivity_adjust(a, b, 0.0, 0.0).unwrap(), (a, b));
        }

        #[test]
        fn linear_in_proxy_loadings(
            bxy in -1.5f64..1.5,
            byx in -0.6f64..0.6,
            az in nonzero(0.1, 3.0),
            gw in nonzero(0.1, 3.0),
            c in nonzero(0.1, 10.0),
        ) {
            let s = base(bxy, byx, az, gw);
            let r = reduced_form_from_structural(&s).unwrap();
            let scaled_z = reduced_form_from_structural(&base(bxy, byx, c * az, gw)).unwrap();
            prop_assert!((scaled_z.theta_z - c * r.theta_z).abs() <= 1e-12 * (1.0 + r.theta_z.abs() * c.abs()));
            prop_assert!((scaled_z.mu_z - c * r.mu_z).abs() <= 1e-12 * (1.0 + r.mu_z.abs() * c.abs()));
            prop_assert!((scaled_z.mu_z / scaled_z.theta_z - r.mu_z / r.theta_z).abs() < 1e-12);
            // W-side untouched by alpha_z
            prop_assert_eq!(scaled_z.theta_w, r.theta_w);
            prop_assert_eq!(scaled_z.mu_w, r.mu_w);
            let scaled_w = reduced_form_from_structural(&base(bxy, byx, az, c * gw)).unwrap();
            prop_assert!((scaled_w.mu_w - c * r.mu_w).abs() <= 1e-12 * (1.0 + r.mu_w.abs() * c.abs()));
            prop_assert!((scaled_w.theta_w / scaled_w.mu_w - r.theta_w / r.mu_w).abs() < 1e-12);
        }
    }
}
