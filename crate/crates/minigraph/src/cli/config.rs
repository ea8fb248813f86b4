//! Run configuration: defaults, an optional TOML file, then flag overrides.
//!
//! Recognised keys (all optional):
//!
//! ```toml
//! grid = "64x256"          # main solver grid, NRxNA
//! sweep_grid = "128x1024"  # grid for k sweeps
//! tol = 1e-12              # fixed-point stopping tolerance
//! residual_tol = 1e-3      # accepted interior Beltrami residual
//! max_iter = 20000
//! match_tol = 1e-10        # step-construction residual
//! variant = "auto"         # printed | conjugated | auto
//! k_list = [0.5, 0.7, 0.8, 0.9, 0.95]
//! w_grid = [[0.0, 0.0], [0.1, 0.0]]   # [re, im] pairs
//! out = "out"
//! seed = 0                 # probe placement
//! ```

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::Common;
use crate::beltrami::{SolveOptions, VariantChoice};
use crate::diskfield::DiskGrid;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub grid: String,
    pub sweep_grid: String,
    pub tol: f64,
    pub residual_tol: f64,
    pub max_iter: usize,
    pub match_tol: f64,
    pub variant: String,
    pub k_list: Vec<f64>,
    pub w_grid: Vec<[f64; 2]>,
    pub out: PathBuf,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            grid: "64x256".into(),
            sweep_grid: "128x1024".into(),
            tol: 1e-12,
            residual_tol: 1e-3,
            max_iter: 20_000,
            match_tol: 1e-10,
            variant: "auto".into(),
            k_list: vec![0.5, 0.7, 0.8, 0.9, 0.95],
            w_grid: (0..10).map(|j| [j as f64 / 10.0, 0.0]).collect(),
            out: super::default_out().to_path_buf(),
            seed: 0,
        }
    }
}

/// `"re,im"` or a real number.
pub fn parse_w(s: &str) -> Result<Complex64> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let num = |p: &str| p.parse::<f64>().map_err(|_| Error::InvalidParameter(format!("cannot parse w = {s:?}")));
    let w = match parts.as_slice() {
        [re] => Complex64::new(num(re)?, 0.0),
        [re, im] => Complex64::new(num(re)?, num(im)?),
        _ => return Err(Error::InvalidParameter(format!("w must be \"re,im\" or a real, got {s:?}"))),
    };
    if !(w.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("|w| must be < 1, got {}", w.norm())));
    }
    Ok(w)
}

fn checked_dims(dims: &str) -> Result<(usize, usize)> {
    let d = DiskGrid::parse_dims(dims)?;
    DiskGrid::build(d.0, d.1).map(|_| d)
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let c: Self = toml::from_str(text).map_err(|e| Error::InvalidParameter(format!("config: {e}")))?;
        c.validate()?;
        Ok(c)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    /// Defaults, then the config file, then flags.
    pub fn resolve(common: &Common) -> Result<Self> {
        let mut c = match &common.config {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        if let Some(g) = &common.grid {
            c.grid = g.clone();
        }
        if let Some(t) = common.tol {
            c.tol = t;
        }
        if let Some(o) = &common.out {
            c.out = o.clone();
        }
        if let Some(v) = &common.variant {
            c.variant = v.clone();
        }
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        self.grid_dims()?;
        self.sweep_grid_dims()?;
        self.variant_choice()?;
        for (name, v) in [("tol", self.tol), ("residual_tol", self.residual_tol), ("match_tol", self.match_tol)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidParameter("max_iter must be positive".into()));
        }
        if let Some(k) = self.k_list.iter().find(|k| !(0.0..=0.97).contains(*k)) {
            return Err(Error::InvalidParameter(format!("k = {k} outside [0, 0.97]")));
        }
        if let Some(w) = self.w_values().iter().find(|w| !(w.norm() < 1.0)) {
            return Err(Error::InvalidParameter(format!("w = {w} outside the open disk")));
        }
        Ok(())
    }

    pub fn grid_dims(&self) -> Result<(usize, usize)> {
        checked_dims(&self.grid)
    }

    pub fn sweep_grid_dims(&self) -> Result<(usize, usize)> {
        checked_dims(&self.sweep_grid)
    }

    pub fn variant_choice(&self) -> Result<VariantChoice> {
        self.variant.parse()
    }

    pub fn w_values(&self) -> Vec<Complex64> {
        self.w_grid.iter().map(|p| Complex64::new(p[0], p[1])).collect()
    }

    pub fn solve_options(&self) -> Result<SolveOptions> {
        Ok(SolveOptions {
            tol: self.tol,
            max_iter: self.max_iter,
            variant: self.variant_choice()?,
            residual_tol: self.residual_tol,
            ..SolveOptions::default()
        })
    }

    /// SHA-256 of the config's canonical JSON, hex encoded. The output
    /// directory does not take part: where results go does not change them.
    pub fn hash(&self) -> String {
        let text = serde_json::to_string(&Self { out: PathBuf::new(), ..self.clone() }).expect("config serializes");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}
