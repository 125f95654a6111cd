use crate::error::{Error, Result};

/// A rectangular sample: primary variables X and Y, proxies Z and W, and
/// `p >= 0` covariate columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    x: Vec<f64>,
    y: Vec<f64>,
    z: Vec<f64>,
    w: Vec<f64>,
    v: Vec<Vec<f64>>,
    v_names: Vec<String>,
}

impl Dataset {
    /// Builds a dataset; `v` holds one vector per covariate column.
    pub fn new(
        x: Vec<f64>,
        y: Vec<f64>,
        z: Vec<f64>,
        w: Vec<f64>,
        v: Vec<Vec<f64>>,
        v_names: Vec<String>,
    ) -> Result<Self> {
        let n = x.len();
        for (name, col) in [("y", &y), ("z", &z), ("w", &w)] {
            if col.len() != n {
                return Err(Error::InvalidData(format!(
                    "column {name} has length {} but x has length {n}",
                    col.len()
                )));
            }
        }
        if v.len() != v_names.len() {
            return Err(Error::InvalidData(format!(
                "{} covariate columns but {} covariate names",
                v.len(),
                v_names.len()
            )));
        }
        for (name, col) in v_names.iter().zip(&v) {
            if col.len() != n {
                return Err(Error::InvalidData(format!(
                    "covariate {name} has length {} but x has length {n}",
                    col.len()
                )));
            }
        }
        for (i, a) in v_names.iter().enumerate() {
            if v_names[..i].contains(a) {
                return Err(Error::InvalidData(format!("duplicate covariate name {a}")));
            }
        }
        let primary = [("x", &x), ("y", &y), ("z", &z), ("w", &w)];
        let all = primary
            .iter()
            .map(|(name, col)| (*name, col.as_slice()))
            .chain(v_names.iter().map(String::as_str).zip(v.iter().map(Vec::as_slice)));
        for (name, col) in all {
            if let Some(i) = col.iter().position(|x| !x.is_finite()) {
                return Err(Error::InvalidData(format!(
                    "non-finite value in {name} at row {i}"
                )));
            }
        }
        Ok(Dataset {
            x,
            y,
            z,
            w,
            v,
            v_names,
        })
    }

    /// Covariates named `V1..Vp`.
    pub fn with_default_names(
        x: Vec<f64>,
        y: Vec<f64>,
        z: Vec<f64>,
        w: Vec<f64>,
        v: Vec<Vec<f64>>,
    ) -> Result<Self> {
        let names = (1..=v.len()).map(|j| format!("V{j}")).collect();
        Dataset::new(x, y, z, w, v, names)
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    pub fn p(&self) -> usize {
        self.v.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn z(&self) -> &[f64] {
        &self.z
    }

    pub fn w(&self) -> &[f64] {
        &self.w
    }

    pub fn v(&self) -> &[Vec<f64>] {
        &self.v
    }

    pub fn v_names(&self) -> &[String] {
        &self.v_names
    }

    /// Covariate values of row `i`.
    pub fn v_row(&self, i: usize) -> Vec<f64> {
        self.v.iter().map(|c| c[i]).collect()
    }

    /// Rows `indices` in order; indices may repeat.
    pub fn resample(&self, indices: &[usize]) -> Dataset {
        let pick = |col: &[f64]| indices.iter().map(|&i| col[i]).collect::<Vec<f64>>();
        Dataset {
            x: pick(&self.x),
            y: pick(&self.y),
            z: pick(&self.z),
            w: pick(&self.w),
            v: self.v.iter().map(|c| pick(c)).collect(),
            v_names: self.v_names.clone(),
        }
    }

    /// The same sample with the roles of (X, Z) and (Y, W) exchanged.
    pub fn swapped(&self) -> Dataset {
        Dataset {
            x: self.y.clone(),
            y: self.x.clone(),
            z: self.w.clone(),
            w: self.z.clone(),
            v: self.v.clone(),
            v_names: self.v_names.clone(),
        }
    }

    /// Covariates z-scored column by column (population sd). Constant columns
    /// are only centered.
    pub fn standardized_v(&self) -> Dataset {
        let n = self.n() as f64;
        let v = self
            .v
            .iter()
            .map(|col| {
                let mean = col.iter().sum::<f64>() / n;
                let sd = (col.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt();
                let scale = if sd > 0.0 { sd } else { 1.0 };
                col.iter().map(|x| (x - mean) / scale).collect()
            })
            .collect();
        Dataset {
            v,
            ..self.clone()
        }
    }

    pub fn map_y(&self, f: impl Fn(f64) -> f64) -> Result<Dataset> {
        Dataset::new(
            self.x.clone(),
            self.y.iter().map(|y| f(*y)).collect(),
            self.z.clone(),
            self.w.clone(),
            self.v.clone(),
            self.v_names.clone(),
        )
    }

    pub fn map_x(&self, f: impl Fn(f64) -> f64) -> Result<Dataset> {
        Dataset::new(
            self.x.iter().map(|x| f(*x)).collect(),
            self.y.clone(),
            self.z.clone(),
            self.w.clone(),
            self.v.clone(),
            self.v_names.clone(),
        )
    }

    pub fn map_v(&self, j: usize, f: impl Fn(f64) -> f64) -> Result<Dataset> {
        let mut v = self.v.clone();
        if j >= v.len() {
            return Err(Error::InvalidData(format!("no covariate column {j}")));
        }
        v[j] = v[j].iter().map(|x| f(*x)).collect();
        Dataset::new(
            self.x.clone(),
            self.y.clone(),
            self.z.clone(),
            self.w.clone(),
            v,
            self.v_names.clone(),
        )
    }
}
