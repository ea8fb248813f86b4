//! Spectral calculus on the polar grid: Fourier in θ, polynomial interpolation
//! through the Gauss–Legendre radii in r.

use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use super::{ComplexField, DiskGrid};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `∂_z f` and `∂_z̄ f` at every node.
#[derive(Debug, Clone)]
pub struct SpectralDerivatives {
    pub f_z: ComplexField,
    pub f_zbar: ComplexField,
}

fn radial_apply(grid: &DiskGrid, matrix: &[Vec<f64>], values: &[Complex64]) -> Vec<Complex64> {
    let (nr, na) = (grid.n_radial(), grid.n_angular());
    let mut out = vec![Complex64::new(0.0, 0.0); values.len()];
    for i in 0..nr {
        let row = &matrix[i];
        let dst = &mut out[i * na..(i + 1) * na];
        for (k, &d) in row.iter().enumerate() {
            if d == 0.0 {
                continue;
            }
            for (o, v) in dst.iter_mut().zip(&values[k * na..(k + 1) * na]) {
                *o += d * v;
            }
        }
    }
    out
}

fn angular_derivative(grid: &DiskGrid, values: &[Complex64], order: u32) -> Vec<Complex64> {
    let na = grid.n_angular();
    let mut out = Vec::with_capacity(values.len());
    for ring in values.chunks(na) {
        let mut modes = grid.modes(ring);
        for (m, v) in modes.iter_mut().enumerate() {
            let l = grid.mode_of_slot(m);
            if l == -(na as i64) / 2 {
                *v = Complex64::new(0.0, 0.0);
            } else {
                *v *= (I * l as f64).powu(order);
            }
        }
        out.extend(grid.synthesize(&modes));
    }
    out
}

pub(super) fn derivatives(field: &ComplexField) -> SpectralDerivatives {
    let grid = field.grid();
    let d = grid.barycentric().differentiation_matrix();
    let f_r = radial_apply(grid, &d, field.values());
    let f_t = angular_derivative(grid, field.values(), 1);
    let mut f_z = Vec::with_capacity(f_r.len());
    let mut f_zbar = Vec::with_capacity(f_r.len());
    for ((z, fr), ft) in grid.nodes().iter().zip(&f_r).zip(&f_t) {
        let r = z.norm();
        let e = z / r;
        f_z.push(e.conj() * 0.5 * (fr - I / r * ft));
        f_zbar.push(e * 0.5 * (fr + I / r * ft));
    }
    SpectralDerivatives {
        f_z: ComplexField::from_parts_unchecked(grid.clone(), f_z),
        f_zbar: ComplexField::from_parts_unchecked(grid.clone(), f_zbar),
    }
}

impl ComplexField {
    /// Spectral Laplacian `f_rr + f_r/r + f_θθ/r²` at the nodes.
    pub fn laplacian(&self) -> ComplexField {
        let grid = self.grid();
        let d = grid.barycentric().differentiation_matrix();
        let f_r = radial_apply(grid, &d, self.values());
        let f_rr = radial_apply(grid, &d, &f_r);
        let f_tt = angular_derivative(grid, self.values(), 2);
        let values = grid
            .nodes()
            .iter()
            .zip(f_r.iter().zip(&f_rr).zip(&f_tt))
            .map(|(z, ((fr, frr), ftt))| {
                let r = z.norm();
                frr + fr / r + ftt / (r * r)
            })
            .collect();
        ComplexField::from_parts_unchecked(grid.clone(), values)
    }
}

/// Off-grid evaluation of a sampled field: trigonometric interpolation in θ
/// and polynomial interpolation of `r·a_l(r)` in r.
///
/// Interpolating `r·a_l` rather than `a_l` keeps fields that blow up like `1/z`
/// at the origin representable.
#[derive(Debug, Clone)]
pub struct FieldInterpolant {
    grid: Arc<DiskGrid>,
    /// `r_i · a_l(r_i)`, ring-major in FFT slot order.
    scaled_modes: Vec<Complex64>,
}

impl FieldInterpolant {
    pub fn new(field: &ComplexField) -> Self {
        let grid = field.grid().clone();
        let na = grid.n_angular();
        let mut scaled_modes = field.modes();
        for (i, &r) in grid.radial_nodes().iter().enumerate() {
            scaled_modes[i * na..(i + 1) * na].iter_mut().for_each(|v| *v *= r);
        }
        Self { grid, scaled_modes }
    }

    pub fn grid(&self) -> &Arc<DiskGrid> {
        &self.grid
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let grid = &self.grid;
        let (nr, na) = (grid.n_radial(), grid.n_angular());
        let r = z.norm();
        if r < 1e-14 {
            let dl = grid.barycentric().basis_derivative(0.0);
            return (0..nr).map(|i| dl[i] * self.scaled_modes[i * na]).sum();
        }
        let basis = grid.barycentric().basis(r);
        let theta = z.arg();
        let mut total = Complex64::new(0.0, 0.0);
        for m in 0..na {
            let a: Complex64 = (0..nr).map(|i| basis[i] * self.scaled_modes[i * na + m]).sum::<Complex64>() / r;
            let l = grid.mode_of_slot(m);
            if l == -(na as i64) / 2 {
                total += a * (l as f64 * theta).cos();
            } else {
                total += a * Complex64::from_polar(1.0, l as f64 * theta);
            }
        }
        total
    }

    pub fn eval_many(&self, points: &[Complex64]) -> Vec<Complex64> {
        points.par_iter().map(|&z| self.eval(z)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivatives_of_polynomials_are_exact() {
        let g = Arc::new(DiskGrid::build(12, 32).unwrap());
        let f = ComplexField::from_fn(g.clone(), |z| z.powi(3) * z.conj() + z.conj().powi(2));
        let d = f.derivatives();
        for (k, &z) in g.nodes().iter().enumerate() {
            let fz = 3.0 * z.powi(2) * z.conj();
            let fzb = z.powi(3) + 2.0 * z.conj();
            assert!((d.f_z.values()[k] - fz).norm() < 1e-10);
            assert!((d.f_zbar.values()[k] - fzb).norm() < 1e-10);
        }
        let lap = f.laplacian();
        for (k, &z) in g.nodes().iter().enumerate() {
            assert!((lap.values()[k] - 4.0 * 3.0 * z.powi(2)).norm() < 1e-8);
        }
    }

    #[test]
    fn interpolant_reproduces_smooth_and_singular_fields() {
        let g = Arc::new(DiskGrid::build(12, 32).unwrap());
        let f = ComplexField::from_fn(g.clone(), |z| z.powi(2) * z.conj() + Complex64::new(0.3, -1.0));
        let it = f.interpolant();
        for z in [Complex64::new(0.31, -0.2), Complex64::new(-0.7, 0.1), Complex64::new(0.0, 0.0)] {
            let exact = z.powi(2) * z.conj() + Complex64::new(0.3, -1.0);
            assert!((it.eval(z) - exact).norm() < 1e-12, "{z}");
        }
        let s = ComplexField::from_fn(g.clone(), |z| z.conj() / z);
        let z = Complex64::new(0.2, 0.45);
        assert!((s.interpolant().eval(z) - z.conj() / z).norm() < 1e-12);
    }
}
