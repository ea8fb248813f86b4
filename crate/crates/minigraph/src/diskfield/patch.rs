//! Scattered height samples `(u, v) ↦ x₃` and finite-difference derivatives of
//! the graph they describe.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};

use crate::{Error, Result};

/// Finite-difference step as a fraction of the patch scale.
pub const FD_STEP_FRACTION: f64 = 1e-3;

/// Height samples over the plane, bucketed for nearest-neighbour queries.
#[derive(Debug, Clone)]
pub struct GraphPatch {
    uv: Vec<[f64; 2]>,
    heights: Vec<f64>,
    scale: f64,
    step: f64,
    neighbors: usize,
    degree: usize,
    /// Smallest fitting radius, a few mean sample spacings.
    min_radius: f64,
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

/// First and second derivatives of a graph `x₃ = f(u, v)` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchDerivatives {
    pub f_u: f64,
    pub f_v: f64,
    pub f_uu: f64,
    pub f_uv: f64,
    pub f_vv: f64,
    pub step: f64,
}

impl PatchDerivatives {
    /// `(f_uu f_vv − f_uv²)/(1 + f_u² + f_v²)²`.
    pub fn gauss_curvature(&self) -> f64 {
        let w2 = 1.0 + self.f_u * self.f_u + self.f_v * self.f_v;
        (self.f_uu * self.f_vv - self.f_uv * self.f_uv) / (w2 * w2)
    }

    /// Left-hand side of the minimal surface equation,
    /// `(1+f_v²)f_uu − 2 f_u f_v f_uv + (1+f_u²)f_vv`.
    pub fn mean_curvature_residual(&self) -> f64 {
        (1.0 + self.f_v * self.f_v) * self.f_uu - 2.0 * self.f_u * self.f_v * self.f_uv
            + (1.0 + self.f_u * self.f_u) * self.f_vv
    }

    /// Upward unit normal `(−f_u, −f_v, 1)/W`.
    pub fn upward_normal(&self) -> [f64; 3] {
        let w = (1.0 + self.f_u * self.f_u + self.f_v * self.f_v).sqrt();
        [-self.f_u / w, -self.f_v / w, 1.0 / w]
    }
}

/// Least-squares polynomial in `((u−u₀)/s, (v−v₀)/s)` fitted to nearby samples.
#[derive(Debug, Clone)]
pub struct LocalFit {
    center: [f64; 2],
    scale: f64,
    degree: usize,
    coefficients: Vec<f64>,
}

fn monomials(degree: usize) -> impl Iterator<Item = (i32, i32)> {
    (0..=degree as i32).flat_map(move |t| (0..=t).map(move |b| (t - b, b)))
}

impl LocalFit {
    pub fn eval(&self, u: f64, v: f64) -> f64 {
        let x = (u - self.center[0]) / self.scale;
        let y = (v - self.center[1]) / self.scale;
        monomials(self.degree).zip(&self.coefficients).map(|((a, b), c)| c * x.powi(a) * y.powi(b)).sum()
    }
}

impl GraphPatch {
    pub const DEFAULT_NEIGHBORS: usize = 30;
    pub const DEFAULT_DEGREE: usize = 4;
    /// Fits never use a neighbourhood smaller than this many mean spacings,
    /// which keeps them well posed where samples cluster (e.g. on tiny rings).
    pub const MIN_RADIUS_SPACINGS: f64 = 3.0;

    /// Builds a patch; samples whose planar positions coincide (to `1e-10` of the
    /// patch scale) while their heights differ are reported as a fold-over.
    pub fn new(uv: Vec<[f64; 2]>, heights: Vec<f64>) -> Result<Self> {
        if uv.len() != heights.len() || uv.is_empty() {
            return Err(Error::InvalidParameter("patch needs one height per planar point".into()));
        }
        if uv.iter().any(|p| !p[0].is_finite() || !p[1].is_finite())
            || heights.iter().any(|h| !h.is_finite())
        {
            return Err(Error::InvalidParameter("patch samples must be finite".into()));
        }
        let n = uv.len();
        let scale = uv.iter().map(|p| p[0].hypot(p[1])).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let cell = scale / (uv.len() as f64).sqrt().max(1.0) * 2.0;
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (k, p) in uv.iter().enumerate() {
            buckets.entry(Self::key(cell, *p)).or_default().push(k);
        }
        let patch = Self {
            uv,
            heights,
            scale,
            step: FD_STEP_FRACTION * scale,
            neighbors: Self::DEFAULT_NEIGHBORS,
            degree: Self::DEFAULT_DEGREE,
            min_radius: Self::MIN_RADIUS_SPACINGS * scale * (std::f64::consts::PI / n as f64).sqrt(),
            cell,
            buckets,
        };
        patch.check_fold_over()?;
        Ok(patch)
    }

    /// Overrides the local fit: `neighbors` nearest samples, total polynomial `degree`.
    pub fn with_fit(mut self, neighbors: usize, degree: usize) -> Result<Self> {
        let terms = (degree + 1) * (degree + 2) / 2;
        if !(1..=6).contains(&degree) || neighbors < terms || neighbors > self.uv.len() {
            return Err(Error::InvalidParameter(format!(
                "local fit of degree {degree} needs between {terms} and {} neighbours, got {neighbors}",
                self.uv.len()
            )));
        }
        self.neighbors = neighbors;
        self.degree = degree;
        Ok(self)
    }

    pub fn uv_points(&self) -> &[[f64; 2]] {
        &self.uv
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    fn key(cell: f64, p: [f64; 2]) -> (i64, i64) {
        ((p[0] / cell).floor() as i64, (p[1] / cell).floor() as i64)
    }

    fn check_fold_over(&self) -> Result<()> {
        let tol = 1e-10 * self.scale;
        let height_tol = 1e-8 * (1.0 + self.heights.iter().map(|h| h.abs()).fold(0.0, f64::max));
        for (k, p) in self.uv.iter().enumerate() {
            let (cx, cy) = Self::key(self.cell, *p);
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for &j in self.buckets.get(&(cx + dx, cy + dy)).map(Vec::as_slice).unwrap_or(&[]) {
                        if j <= k {
                            continue;
                        }
                        let q = self.uv[j];
                        if (p[0] - q[0]).hypot(p[1] - q[1]) < tol
                            && (self.heights[k] - self.heights[j]).abs() > height_tol
                        {
                            return Err(Error::FoldOver { u: p[0], v: p[1] });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Indices of the `count` samples nearest to `at`, closest first.
    pub fn nearest(&self, at: [f64; 2], count: usize) -> Vec<usize> {
        let count = count.min(self.uv.len());
        let (cx, cy) = Self::key(self.cell, at);
        let mut found: Vec<(f64, usize)> = Vec::new();
        let mut ring = 0i64;
        loop {
            for dx in -ring..=ring {
                for dy in -ring..=ring {
                    if dx.abs() != ring && dy.abs() != ring {
                        continue;
                    }
                    if let Some(ids) = self.buckets.get(&(cx + dx, cy + dy)) {
                        for &j in ids {
                            let q = self.uv[j];
                            found.push(((q[0] - at[0]).hypot(q[1] - at[1]), j));
                        }
                    }
                }
            }
            // every unvisited cell is at least `ring·cell` away
            if found.len() >= count {
                found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                if found[count - 1].0 <= ring as f64 * self.cell || found.len() == self.uv.len() {
                    break;
                }
            }
            if found.len() == self.uv.len() {
                found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
                break;
            }
            ring += 1;
        }
        found.truncate(count);
        found.into_iter().map(|(_, j)| j).collect()
    }

    /// Indices of all samples within `radius` of `at`.
    pub fn within(&self, at: [f64; 2], radius: f64) -> Vec<usize> {
        let (lo, hi) = (Self::key(self.cell, [at[0] - radius, at[1] - radius]), Self::key(self.cell, [at[0] + radius, at[1] + radius]));
        let mut ids = Vec::new();
        for cx in lo.0..=hi.0 {
            for cy in lo.1..=hi.1 {
                for &j in self.buckets.get(&(cx, cy)).map(Vec::as_slice).unwrap_or(&[]) {
                    if (self.uv[j][0] - at[0]).hypot(self.uv[j][1] - at[1]) <= radius {
                        ids.push(j);
                    }
                }
            }
        }
        ids.sort_unstable();
        ids
    }

    /// Local least-squares polynomial around `at` over the nearest samples
    /// (at least all those within the minimum fitting radius).
    pub fn local_fit(&self, at: [f64; 2]) -> Result<LocalFit> {
        let dist = |j: usize| (self.uv[j][0] - at[0]).hypot(self.uv[j][1] - at[1]);
        let mut ids = self.nearest(at, self.neighbors);
        let mut radius = ids.iter().map(|&j| dist(j)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        if radius < self.min_radius {
            ids = self.within(at, self.min_radius);
            radius = ids.iter().map(|&j| dist(j)).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        }
        // the neighbourhood must surround the point, otherwise this is extrapolation
        let mut sides = [false; 4];
        for &j in &ids {
            let (du, dv) = (self.uv[j][0] - at[0], self.uv[j][1] - at[1]);
            sides[0] |= du > 0.0;
            sides[1] |= du < 0.0;
            sides[2] |= dv > 0.0;
            sides[3] |= dv < 0.0;
        }
        if sides.iter().any(|s| !s) || radius < 2.0 * self.step {
            return Err(Error::StencilOutOfDomain { u: at[0], v: at[1] });
        }
        let terms: Vec<(i32, i32)> = monomials(self.degree).collect();
        let a = DMatrix::from_fn(ids.len(), terms.len(), |r, c| {
            let x = (self.uv[ids[r]][0] - at[0]) / radius;
            let y = (self.uv[ids[r]][1] - at[1]) / radius;
            x.powi(terms[c].0) * y.powi(terms[c].1)
        });
        let b = DVector::from_iterator(ids.len(), ids.iter().map(|&j| self.heights[j]));
        let svd = a.svd(true, true);
        let coefficients = svd
            .solve(&b, 1e-13)
            .map_err(|e| Error::InvalidParameter(format!("local fit failed: {e}")))?;
        Ok(LocalFit { center: at, scale: radius, degree: self.degree, coefficients: coefficients.iter().copied().collect() })
    }
}

/// Central-difference derivatives of the locally fitted graph at `at`.
pub fn finite_difference_hessian(patch: &GraphPatch, at: [f64; 2]) -> Result<PatchDerivatives> {
    let fit = patch.local_fit(at)?;
    let h = patch.step;
    let f = |du: f64, dv: f64| fit.eval(at[0] + du, at[1] + dv);
    let f0 = f(0.0, 0.0);
    let (fp0, fm0, f0p, f0m) = (f(h, 0.0), f(-h, 0.0), f(0.0, h), f(0.0, -h));
    Ok(PatchDerivatives {
        f_u: (fp0 - fm0) / (2.0 * h),
        f_v: (f0p - f0m) / (2.0 * h),
        f_uu: (fp0 - 2.0 * f0 + fm0) / (h * h),
        f_vv: (f0p - 2.0 * f0 + f0m) / (h * h),
        f_uv: (f(h, h) - f(h, -h) - f(-h, h) + f(-h, -h)) / (4.0 * h * h),
        step: h,
    })
}
