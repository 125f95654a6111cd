//! Dense ordinary least squares via Householder QR.
//!
//! Every estimator stage goes through [`QrFactor`]: the design is factorized
//! once, then any number of responses are solved against the same factor.
//! Numerical rank comes from the singular values of the small triangular
//! factor `R`, which are the singular values of the design itself.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default rank tolerance: smallest / largest singular value ratio.
pub const DEFAULT_RANK_TOL: f64 = 1e-10;

pub const INTERCEPT: &str = "(intercept)";

/// Named regressor columns of equal length.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
    n: usize,
    includes_intercept: bool,
}

impl DesignMatrix {
    pub fn new(n: usize) -> Self {
        DesignMatrix {
            names: Vec::new(),
            columns: Vec::new(),
            n,
            includes_intercept: false,
        }
    }

    /// A design whose first column is the constant 1.
    pub fn with_intercept(n: usize) -> Self {
        let mut d = DesignMatrix::new(n);
        d.names.push(INTERCEPT.to_string());
        d.columns.push(vec![1.0; n]);
        d.includes_intercept = true;
        d
    }

    pub fn push(&mut self, name: impl Into<String>, column: Vec<f64>) -> Result<()> {
        let name = name.into();
        if column.len() != self.n {
            return Err(Error::Dimension(format!(
                "column `{name}` has length {} but the design has {} rows",
                column.len(),
                self.n
            )));
        }
        if self.names.contains(&name) {
            return Err(Error::Dimension(format!("duplicate column name `{name}`")));
        }
        self.names.push(name);
        self.columns.push(column);
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ncols(&self) -> usize {
        self.columns.len()
    }

    pub fn includes_intercept(&self) -> bool {
        self.includes_intercept
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.index_of(name).map(|j| self.columns[j].as_slice())
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }
}

/// Result of a least squares fit.
#[derive(Debug, Clone, PartialEq)]
pub struct LsFit {
    pub names: Vec<String>,
    pub coefficients: Vec<f64>,
    pub fitted: Vec<f64>,
    pub residuals: Vec<f64>,
    pub rank: usize,
    pub condition_estimate: f64,
}

impl LsFit {
    pub fn coef(&self, name: &str) -> Option<f64> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|j| self.coefficients[j])
    }
}

/// Householder QR factorization of a full-rank design.
#[derive(Debug, Clone)]
pub struct QrFactor {
    n: usize,
    k: usize,
    names: Vec<String>,
    /// Column-major: Householder vectors on and below the diagonal, R above it.
    packed: Vec<f64>,
    tau: Vec<f64>,
    r_diag: Vec<f64>,
    columns: Vec<Vec<f64>>,
    rank: usize,
    condition_estimate: f64,
}

impl QrFactor {
    /// Factorizes `design`, failing when its numerical rank is below its
    /// column count at relative tolerance `tol`.
    pub fn new(design: &DesignMatrix, tol: f64) -> Result<Self> {
        let (n, k) = (design.n, design.ncols());
        if k == 0 {
            return Err(Error::Dimension("design has no columns".into()));
        }
        if n <= k {
            return Err(Error::Dimension(format!(
                "{n} rows is not enough for {k} columns"
            )));
        }
        let mut packed = Vec::with_capacity(n * k);
        for col in &design.columns {
            packed.extend_from_slice(col);
        }
        let mut tau = vec![0.0; k];
        let mut r_diag = vec![0.0; k];

        for j in 0..k {
            let (head, tail) = packed.split_at_mut((j + 1) * n);
            let v = &mut head[j * n + j..];
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            if norm == 0.0 {
                continue;
            }
            let alpha = if v[0] > 0.0 { -norm } else { norm };
            let v0 = v[0] - alpha;
            let vnorm2 = norm * norm - v[0] * v[0] + v0 * v0;
            v[0] = v0;
            r_diag[j] = alpha;
            if vnorm2 == 0.0 {
                continue;
            }
            tau[j] = 2.0 / vnorm2;
            let v = &*v;
            for c in 0..(k - j - 1) {
                let target = &mut tail[c * n + j..(c + 1) * n];
                let s: f64 = v.iter().zip(target.iter()).map(|(a, b)| a * b).sum();
                let scale = tau[j] * s;
                for (t, a) in target.iter_mut().zip(v) {
                    *t -= scale * a;
                }
            }
        }

        let mut r = DMatrix::<f64>::zeros(k, k);
        for j in 0..k {
            for i in 0..j {
                r[(i, j)] = packed[j * n + i];
            }
            r[(j, j)] = r_diag[j];
        }
        let sv = r.singular_values();
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        let rank = if smax > 0.0 {
            sv.iter().filter(|s| **s > tol * smax).count()
        } else {
            0
        };
        let condition_estimate = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if rank < k {
            return Err(Error::RankDeficient {
                stage: "least squares design".into(),
                rank,
                columns: k,
                condition: condition_estimate,
            });
        }

        Ok(QrFactor {
            n,
            k,
            names: design.names.clone(),
            packed,
            tau,
            r_diag,
            columns: design.columns.clone(),
            rank,
            condition_estimate,
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn condition_estimate(&self) -> f64 {
        self.condition_estimate
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Least squares coefficients for one response.
    pub fn coefficients(&self, response: &[f64]) -> Result<Vec<f64>> {
        let (n, k) = (self.n, self.k);
        if response.len() != n {
            return Err(Error::Dimension(format!(
                "response has length {} but the design has {n} rows",
                response.len()
            )));
        }
        let mut qty = response.to_vec();
        for j in 0..k {
            if self.tau[j] == 0.0 {
                continue;
            }
            let v = &self.packed[j * n + j..(j + 1) * n];
            let target = &mut qty[j..];
            let s: f64 = v.iter().zip(target.iter()).map(|(a, b)| a * b).sum();
            let scale = self.tau[j] * s;
            for (t, a) in target.iter_mut().zip(v) {
                *t -= scale * a;
            }
        }
        let mut beta = vec![0.0; k];
        for i in (0..k).rev() {
            let mut acc = qty[i];
            for j in (i + 1)..k {
                acc -= self.packed[j * n + i] * beta[j];
            }
            beta[i] = acc / self.r_diag[i];
        }
        Ok(beta)
    }

    /// Full fit with fitted values and residuals.
    pub fn fit(&self, response: &[f64]) -> Result<LsFit> {
        let coefficients = self.coefficients(response)?;
        let fitted = self.predict(&coefficients);
        let residuals = response.iter().zip(&fitted).map(|(y, f)| y - f).collect();
        Ok(LsFit {
            names: self.names.clone(),
            coefficients,
            fitted,
            residuals,
            rank: self.rank,
            condition_estimate: self.condition_estimate,
        })
    }

    fn predict(&self, coefficients: &[f64]) -> Vec<f64> {
        let mut fitted = vec![0.0; self.n];
        for (col, b) in self.columns.iter().zip(coefficients) {
            for (f, x) in fitted.iter_mut().zip(col) {
                *f += b * x;
            }
        }
        fitted
    }
}

/// Ordinary least squares of `response` on `design` at the default rank tolerance.
pub fn ols_fit(design: &DesignMatrix, response: &[f64]) -> Result<LsFit> {
    if response.len() != design.n() {
        return Err(Error::Dimension(format!(
            "response has length {} but the design has {} rows",
            response.len(),
            design.n()
        )));
    }
    QrFactor::new(design, DEFAULT_RANK_TOL)?.fit(response)
}

/// Full-rank test on the singular value ratio, with the condition estimate
/// `sigma_max / sigma_min` (infinite when singular).
pub fn rank_check(design: &DesignMatrix, tol: f64) -> (bool, f64) {
    let k = design.ncols();
    if k == 0 || design.n() == 0 {
        return (false, f64::INFINITY);
    }
    let mut m = DMatrix::<f64>::zeros(design.n(), k);
    for (j, col) in design.columns().iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            m[(i, j)] = *x;
        }
    }
    let sv = m.singular_values();
    let smax = sv.iter().cloned().fold(0.0, f64::max);
    let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
    if design.n() < k || smax == 0.0 {
        return (false, f64::INFINITY);
    }
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    (smin / smax > tol, cond)
}
