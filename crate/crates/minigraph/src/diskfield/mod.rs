//! Polar discretization of the unit disk and complex fields sampled on it.
//!
//! Nodes sit on a tensor grid: Gauss–Legendre radii in (0, 1) times equally
//! spaced angles `θ_j = 2πj/N`. Node `(i, j)` is stored at index `i·N + j`, so
//! each ring is a contiguous slice, which is what the ring FFTs want.

mod patch;
mod spectral;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

pub use patch::{finite_difference_hessian, GraphPatch, LocalFit, PatchDerivatives, FD_STEP_FRACTION};
pub use spectral::{FieldInterpolant, SpectralDerivatives};

use crate::quadrature::{gauss_legendre_unit, Barycentric};
use crate::{Error, Result};

#[derive(Clone)]
pub struct DiskGrid {
    radial_nodes: Vec<f64>,
    radial_weights: Vec<f64>,
    angular_count: usize,
    nodes: Vec<Complex64>,
    weights: Vec<f64>,
    barycentric: Barycentric,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl fmt::Debug for DiskGrid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiskGrid")
            .field("n_radial", &self.n_radial())
            .field("n_angular", &self.angular_count)
            .finish()
    }
}

impl PartialEq for DiskGrid {
    fn eq(&self, other: &Self) -> bool {
        self.n_radial() == other.n_radial() && self.angular_count == other.angular_count
    }
}

impl DiskGrid {
    pub const MIN_RADIAL: usize = 4;
    pub const MIN_ANGULAR: usize = 8;

    pub fn build(n_radial: usize, n_angular: usize) -> Result<Self> {
        if n_radial < Self::MIN_RADIAL || n_angular < Self::MIN_ANGULAR || !n_angular.is_multiple_of(2) {
            return Err(Error::InvalidParameter(format!(
                "grid {n_radial}x{n_angular}: need n_radial >= {}, n_angular >= {} and even",
                Self::MIN_RADIAL,
                Self::MIN_ANGULAR
            )));
        }
        let (radial_nodes, radial_weights) = gauss_legendre_unit(n_radial);
        let dtheta = std::f64::consts::TAU / n_angular as f64;
        let mut nodes = Vec::with_capacity(n_radial * n_angular);
        let mut weights = Vec::with_capacity(n_radial * n_angular);
        for (&r, &w) in radial_nodes.iter().zip(&radial_weights) {
            for j in 0..n_angular {
                nodes.push(Complex64::from_polar(r, dtheta * j as f64));
                weights.push(r * w * dtheta);
            }
        }
        let barycentric = Barycentric::gauss_legendre(&radial_nodes, &radial_weights);
        let mut planner = FftPlanner::new();
        Ok(Self {
            forward: planner.plan_fft_forward(n_angular),
            inverse: planner.plan_fft_inverse(n_angular),
            radial_nodes,
            radial_weights,
            angular_count: n_angular,
            nodes,
            weights,
            barycentric,
        })
    }

    /// Parses `"NRxNA"`, e.g. `"64x256"`.
    pub fn parse_dims(dims: &str) -> Result<(usize, usize)> {
        let bad = || Error::InvalidParameter(format!("grid must look like 64x256, got {dims:?}"));
        let (a, b) = dims.trim().split_once(['x', 'X']).ok_or_else(bad)?;
        Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
    }

    pub fn n_radial(&self) -> usize {
        self.radial_nodes.len()
    }

    pub fn n_angular(&self) -> usize {
        self.angular_count
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn radial_nodes(&self) -> &[f64] {
        &self.radial_nodes
    }

    /// Gauss–Legendre weights of the radial rule on [0, 1] (without the `r` factor).
    pub fn radial_weights(&self) -> &[f64] {
        &self.radial_weights
    }

    pub fn nodes(&self) -> &[Complex64] {
        &self.nodes
    }

    /// Area weights `r_i W_i 2π/N`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn boundary_ring_index(&self) -> usize {
        self.n_radial() - 1
    }

    pub fn index(&self, ring: usize, angle: usize) -> usize {
        ring * self.angular_count + angle
    }

    pub fn ring_of(&self, index: usize) -> usize {
        index / self.angular_count
    }

    pub fn theta(&self, angle: usize) -> f64 {
        std::f64::consts::TAU * angle as f64 / self.angular_count as f64
    }

    pub fn barycentric(&self) -> &Barycentric {
        &self.barycentric
    }

    /// Fourier mode number stored at FFT slot `m`: `0, 1, …, N/2−1, −N/2, …, −1`.
    pub fn mode_of_slot(&self, m: usize) -> i64 {
        let n = self.angular_count as i64;
        let m = m as i64;
        if m < n / 2 { m } else { m - n }
    }

    /// FFT slot holding mode `l` (modes are aliased modulo N).
    pub fn slot_of_mode(&self, l: i64) -> usize {
        l.rem_euclid(self.angular_count as i64) as usize
    }

    /// Ring-wise Fourier coefficients `a_l(r_i)` so that `φ(r_i, θ) = Σ_l a_l(r_i) e^{ilθ}`.
    pub fn modes(&self, values: &[Complex64]) -> Vec<Complex64> {
        let mut out = values.to_vec();
        self.forward.process(&mut out);
        let scale = 1.0 / self.angular_count as f64;
        out.iter_mut().for_each(|v| *v *= scale);
        out
    }

    /// Inverse of [`DiskGrid::modes`].
    pub fn synthesize(&self, modes: &[Complex64]) -> Vec<Complex64> {
        let mut out = modes.to_vec();
        self.inverse.process(&mut out);
        out
    }

    /// Sum of `values · weights` in node order.
    pub fn integrate_values(&self, values: &[Complex64]) -> Complex64 {
        values.iter().zip(&self.weights).map(|(v, w)| v * w).sum()
    }

    /// Indices of nodes with `|z| ≤ radius`.
    pub fn interior_indices(&self, radius: f64) -> Vec<usize> {
        let rings = self.radial_nodes.iter().take_while(|&&r| r <= radius).count();
        (0..rings * self.angular_count).collect()
    }
}

/// Samples of a complex function at the nodes of a [`DiskGrid`].
#[derive(Debug, Clone)]
pub struct ComplexField {
    grid: Arc<DiskGrid>,
    values: Vec<Complex64>,
}

impl ComplexField {
    pub fn new(grid: Arc<DiskGrid>, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidParameter(format!(
                "field has {} values for a grid of {} nodes",
                values.len(),
                grid.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::InvalidParameter(format!("non-finite field value at node {k}")));
        }
        Ok(Self { grid, values })
    }

    pub(crate) fn from_parts_unchecked(grid: Arc<DiskGrid>, values: Vec<Complex64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn zeros(grid: Arc<DiskGrid>) -> Self {
        let n = grid.len();
        Self { grid, values: vec![Complex64::new(0.0, 0.0); n] }
    }

    pub fn from_fn(grid: Arc<DiskGrid>, f: impl Fn(Complex64) -> Complex64) -> Self {
        let values = grid.nodes().iter().map(|&z| f(z)).collect();
        Self { grid, values }
    }

    pub fn grid(&self) -> &Arc<DiskGrid> {
        &self.grid
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(Complex64, Complex64) -> Complex64) -> Self {
        let values = self.values.iter().zip(self.grid.nodes()).map(|(&v, &z)| f(z, v)).collect();
        Self { grid: self.grid.clone(), values }
    }

    pub fn integrate(&self) -> Complex64 {
        self.grid.integrate_values(&self.values)
    }

    /// Discrete `L^p` norm `(Σ w |v|^p)^{1/p}`.
    pub fn lp_norm(&self, p: f64) -> f64 {
        self.values
            .iter()
            .zip(self.grid.weights())
            .map(|(v, w)| w * v.norm().powf(p))
            .sum::<f64>()
            .powf(1.0 / p)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Maximum of `|v|` over nodes with `|z| ≤ radius`.
    pub fn max_abs_within(&self, radius: f64) -> f64 {
        let n = self.grid.interior_indices(radius).len();
        self.values[..n].iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn ring(&self, i: usize) -> &[Complex64] {
        let n = self.grid.n_angular();
        &self.values[i * n..(i + 1) * n]
    }

    pub fn modes(&self) -> Vec<Complex64> {
        let n = self.grid.n_angular();
        let mut out = Vec::with_capacity(self.values.len());
        for ring in self.values.chunks(n) {
            out.extend(self.grid.modes(ring));
        }
        out
    }

    pub(crate) fn from_modes(grid: Arc<DiskGrid>, modes: &[Complex64]) -> Self {
        let n = grid.n_angular();
        let mut values = Vec::with_capacity(modes.len());
        for ring in modes.chunks(n) {
            values.extend(grid.synthesize(ring));
        }
        Self { grid, values }
    }

    /// Spectral `∂_z` and `∂_z̄` at the nodes.
    pub fn derivatives(&self) -> SpectralDerivatives {
        spectral::derivatives(self)
    }

    pub fn interpolant(&self) -> FieldInterpolant {
        FieldInterpolant::new(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn build_rejects_small_or_odd_grids() {
        assert!(DiskGrid::build(3, 32).is_err());
        assert!(DiskGrid::build(8, 6).is_err());
        assert!(DiskGrid::build(8, 33).is_err());
    }

    #[test]
    fn small_grid_shape_and_area() {
        let g = DiskGrid::build(8, 32).unwrap();
        assert_eq!(g.len(), 256);
        let area: f64 = g.weights().iter().sum();
        assert!((area - PI).abs() < 1e-6 * PI);
        assert!(g.nodes().iter().all(|z| z.norm() > 0.0 && z.norm() < 1.0));
        assert_eq!(g.boundary_ring_index(), 7);
    }

    #[test]
    fn integrals_of_monomials() {
        let g = Arc::new(DiskGrid::build(16, 64).unwrap());
        let one = ComplexField::from_fn(g.clone(), |_| c(1.0, 0.0));
        assert!((one.integrate() - c(PI, 0.0)).norm() < 1e-12);
        let r2 = ComplexField::from_fn(g.clone(), |z| c(z.norm_sqr(), 0.0));
        assert!((r2.integrate() - c(PI / 2.0, 0.0)).norm() < 1e-12);
        let zeta = ComplexField::from_fn(g.clone(), |z| z);
        assert!(zeta.integrate().norm() < 1e-12);
        assert!(ComplexField::zeros(g).integrate().norm() == 0.0);
    }

    #[test]
    fn parse_dims_accepts_nrxna() {
        assert_eq!(DiskGrid::parse_dims("64x256").unwrap(), (64, 256));
        assert!(DiskGrid::parse_dims("64-256").is_err());
    }

    #[test]
    fn modes_round_trip() {
        let g = Arc::new(DiskGrid::build(6, 16).unwrap());
        let f = ComplexField::from_fn(g.clone(), |z| z * z.conj().powi(3) + c(0.5, 1.0));
        let back = ComplexField::from_modes(g.clone(), &f.modes());
        for (a, b) in f.values().iter().zip(back.values()) {
            assert!((a - b).norm() < 1e-14);
        }
        assert_eq!(g.mode_of_slot(8), -8);
        assert_eq!(g.slot_of_mode(-1), 15);
    }
}
