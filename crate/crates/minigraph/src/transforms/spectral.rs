//! Fourier–radial evaluation of `P` and `H`.
//!
//! Writing `φ = Σ_l a_l(r) e^{ilθ}` and `p_l = r·a_l`, the angular integrals of
//! the Cauchy kernel are done exactly, leaving one radial integral per mode:
//!
//! * `l ≤ 0`: `T_l(r) = 2∫₀¹ p_l(rt) t^{|l|} dt`
//! * `l ≥ 1`: `T_l(r) = −2∫_r¹ p_l(ρ) r^{l−1} ρ^{−l} dρ`
//!
//! and `∬ φ(ζ)/(ζ−z) dA/(−π)` contributes `T_l(r) e^{i(l−1)θ}`; its `z`-derivative
//! gives `((l−1)T_l/r + a_l) e^{i(l−2)θ}`. The reflected kernel `z φ̄/(1−ζ̄z)` is
//! analytic in `z` and expands into `−2 Σ_j c_j z^{j+1}` with
//! `c_j = ∫₀¹ ρ^j conj(p_{−j}(ρ)) dρ`; the two origin terms add the constant
//! `i·Im(2∫₀¹ a_1)`. All radial integrals use Gauss–Legendre rules on the
//! polynomial interpolant of `p_l`, so polynomial fields are reproduced to
//! rounding.

use std::collections::HashMap;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::diskfield::{ComplexField, DiskGrid};
use crate::quadrature::gauss_legendre_unit;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const PANEL_ORDER: usize = 16;

/// Gauss–Legendre rules keyed by order, shared by all row computations.
struct Rules {
    rules: HashMap<usize, (Vec<f64>, Vec<f64>)>,
}

impl Rules {
    fn for_grid(grid: &DiskGrid) -> Self {
        let mut rules = HashMap::new();
        let n = grid.n_radial();
        for j in 0..=grid.n_angular() / 2 + 1 {
            let q = inner_order(n, j);
            rules.entry(q).or_insert_with(|| gauss_legendre_unit(q));
        }
        rules.insert(PANEL_ORDER, gauss_legendre_unit(PANEL_ORDER));
        Self { rules }
    }

    fn get(&self, q: usize) -> &(Vec<f64>, Vec<f64>) {
        &self.rules[&q]
    }
}

fn inner_order(n_radial: usize, power: usize) -> usize {
    (n_radial + power) / 2 + 2
}

/// Row mapping `p_l(r_k)` to `T_l(r)`.
fn kernel_row(grid: &DiskGrid, rules: &Rules, r: f64, l: i64) -> Vec<f64> {
    let n = grid.n_radial();
    let bary = grid.barycentric();
    let mut row = vec![0.0; n];
    let mut basis = vec![0.0; n];
    if l <= 0 {
        let j = (-l) as usize;
        let (t, w) = rules.get(inner_order(n, j));
        for (&tq, &wq) in t.iter().zip(w) {
            bary.basis_into(r * tq, &mut basis);
            let c = 2.0 * wq * tq.powi(j as i32);
            row.iter_mut().zip(&basis).for_each(|(o, b)| *o += c * b);
        }
        return row;
    }
    if r == 0.0 {
        // T_1(0) = −2∫₀¹ p/ρ dρ; higher modes vanish at the origin
        if l == 1 {
            for (k, (&rk, &wk)) in grid.radial_nodes().iter().zip(grid.radial_weights()).enumerate() {
                row[k] = -2.0 * wk / rk;
            }
        }
        return row;
    }
    // u = ln(ρ/r): the integrand becomes p(r e^u) e^{−(l−1)u} on [0, −ln r]
    let decay = (l - 1) as f64;
    let lam = decay.max(1.0);
    let mut upper = -r.ln();
    if l >= 2 {
        upper = upper.min(40.0 / decay);
    }
    let (t, w) = rules.get(PANEL_ORDER);
    let mut a = 0.0;
    let mut h = (0.5 / lam).min(0.05);
    while a < upper {
        let rho = r * a.exp();
        let mut width = h.min((0.05 / rho).ln_1p());
        if l >= 2 {
            width = width.min(4.0 / lam);
        }
        let b = (a + width).min(upper);
        for (&tq, &wq) in t.iter().zip(w) {
            let u = a + (b - a) * tq;
            bary.basis_into(r * u.exp(), &mut basis);
            let c = -2.0 * wq * (b - a) * (-decay * u).exp();
            row.iter_mut().zip(&basis).for_each(|(o, bk)| *o += c * bk);
        }
        a = b;
        h *= 2.0;
    }
    row
}

/// Row mapping `p_{−j}(r_k)` to `∫₀¹ ρ^j p_{−j}(ρ) dρ`.
fn analytic_row(grid: &DiskGrid, rules: &Rules, j: usize) -> Vec<f64> {
    let n = grid.n_radial();
    let (t, w) = rules.get(inner_order(n, j));
    let mut row = vec![0.0; n];
    let mut basis = vec![0.0; n];
    for (&tq, &wq) in t.iter().zip(w) {
        grid.barycentric().basis_into(tq, &mut basis);
        let c = wq * tq.powi(j as i32);
        row.iter_mut().zip(&basis).for_each(|(o, b)| *o += c * b);
    }
    row
}

fn mat_vec(matrix: &[f64], n: usize, v: &[Complex64]) -> Vec<Complex64> {
    matrix.chunks(n).map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}

/// Precomputed radial tables for one grid.
pub struct SpectralOperator {
    grid: Arc<DiskGrid>,
    rules: Rules,
    /// Per FFT slot: `n_r × n_r` row-major matrix `p_l(r_k) ↦ T_l(r_i)`.
    radial: Vec<Vec<f64>>,
    /// Per `j = 0..=N/2`: row producing `c_j`.
    analytic: Vec<Vec<f64>>,
}

impl std::fmt::Debug for SpectralOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SpectralOperator").field("grid", &self.grid).finish()
    }
}

/// Ring-wise Fourier data of a field: `a_l(r_i)` and `p_l = r_i a_l(r_i)`.
struct Decomposition {
    a: Vec<Complex64>,
    p: Vec<Complex64>,
}

impl SpectralOperator {
    pub fn new(grid: Arc<DiskGrid>) -> Self {
        let rules = Rules::for_grid(&grid);
        let na = grid.n_angular();
        let radial = (0..na)
            .into_par_iter()
            .map(|m| {
                let l = grid.mode_of_slot(m);
                grid.radial_nodes().iter().flat_map(|&r| kernel_row(&grid, &rules, r, l)).collect()
            })
            .collect();
        let analytic = (0..=na / 2).map(|j| analytic_row(&grid, &rules, j)).collect();
        Self { grid, rules, radial, analytic }
    }

    pub fn grid(&self) -> &Arc<DiskGrid> {
        &self.grid
    }

    fn decompose(&self, phi: &ComplexField) -> Decomposition {
        let a = phi.modes();
        let na = self.grid.n_angular();
        let mut p = a.clone();
        for (i, &r) in self.grid.radial_nodes().iter().enumerate() {
            p[i * na..(i + 1) * na].iter_mut().for_each(|v| *v *= r);
        }
        Decomposition { a, p }
    }

    fn column(&self, data: &[Complex64], m: usize) -> Vec<Complex64> {
        let na = self.grid.n_angular();
        (0..self.grid.n_radial()).map(|i| data[i * na + m]).collect()
    }

    /// `c_j` for `j = 0..=N/2`.
    fn analytic_coefficients(&self, d: &Decomposition) -> Vec<Complex64> {
        self.analytic
            .iter()
            .enumerate()
            .map(|(j, row)| {
                let col = self.column(&d.p, self.grid.slot_of_mode(-(j as i64)));
                row.iter().zip(&col).map(|(w, p)| w * p.conj()).sum()
            })
            .collect()
    }

    fn origin_constant(&self, d: &Decomposition) -> Complex64 {
        let a1 = self.column(&d.a, self.grid.slot_of_mode(1));
        let s: Complex64 = self.grid.radial_weights().iter().zip(&a1).map(|(w, a)| w * a).sum();
        Complex64::new(0.0, 2.0 * s.im)
    }

    /// `(Pφ, Hφ)` at every grid node.
    pub fn apply(&self, phi: &ComplexField) -> (ComplexField, ComplexField) {
        let grid = &self.grid;
        let (nr, na) = (grid.n_radial(), grid.n_angular());
        let d = self.decompose(phi);
        let t: Vec<Vec<Complex64>> = (0..na)
            .into_par_iter()
            .map(|m| mat_vec(&self.radial[m], nr, &self.column(&d.p, m)))
            .collect();
        let mut pm = vec![ZERO; nr * na];
        let mut hm = vec![ZERO; nr * na];
        for (m, tm) in t.iter().enumerate() {
            let l = grid.mode_of_slot(m);
            let sp = grid.slot_of_mode(l - 1);
            let sh = grid.slot_of_mode(l - 2);
            for (i, &r) in grid.radial_nodes().iter().enumerate() {
                pm[i * na + sp] += tm[i];
                hm[i * na + sh] += (l - 1) as f64 * tm[i] / r + d.a[i * na + m];
            }
        }
        let c = self.analytic_coefficients(&d);
        for (j, &cj) in c.iter().enumerate() {
            let sp = grid.slot_of_mode(j as i64 + 1);
            let sh = grid.slot_of_mode(j as i64);
            for (i, &r) in grid.radial_nodes().iter().enumerate() {
                let rj = r.powi(j as i32);
                pm[i * na + sp] += -2.0 * cj * rj * r;
                hm[i * na + sh] += -2.0 * (j as f64 + 1.0) * cj * rj;
            }
        }
        let constant = self.origin_constant(&d);
        let mut p = ComplexField::from_modes(grid.clone(), &pm);
        p = p.map(|_, v| v + constant);
        let h = ComplexField::from_modes(grid.clone(), &hm);
        (p, h)
    }

    /// `(Pφ)(z)` and `(Hφ)(z)` at arbitrary points of the closed disk.
    pub fn evaluate(&self, phi: &ComplexField, points: &[Complex64]) -> Vec<(Complex64, Complex64)> {
        let d = self.decompose(phi);
        let c = self.analytic_coefficients(&d);
        let constant = self.origin_constant(&d);
        points.par_iter().map(|&z| self.evaluate_one(&d, &c, constant, z)).collect()
    }

    fn evaluate_one(&self, d: &Decomposition, c: &[Complex64], constant: Complex64, z: Complex64) -> (Complex64, Complex64) {
        let grid = &self.grid;
        let na = grid.n_angular();
        let r = z.norm();
        if r == 0.0 {
            let a2 = self.column(&d.a, grid.slot_of_mode(2));
            let s: Complex64 = grid
                .radial_nodes()
                .iter()
                .zip(grid.radial_weights())
                .zip(&a2)
                .map(|((rk, wk), a)| wk * a / rk)
                .sum();
            let a1 = self.column(&d.a, grid.slot_of_mode(1));
            let s1: Complex64 = grid.radial_weights().iter().zip(&a1).map(|(w, a)| w * a).sum();
            return (Complex64::new(-2.0 * s1.re, 0.0), -2.0 * s - 2.0 * c[0]);
        }
        let theta = z.arg();
        let basis = grid.barycentric().basis(r);
        let mut p = constant;
        let mut h = ZERO;
        for m in 0..na {
            let l = grid.mode_of_slot(m);
            let col = self.column(&d.p, m);
            let row = kernel_row(grid, &self.rules, r, l);
            let t: Complex64 = row.iter().zip(&col).map(|(a, b)| a * b).sum();
            let a: Complex64 = basis.iter().zip(&col).map(|(a, b)| a * b).sum::<Complex64>() / r;
            p += t * Complex64::from_polar(1.0, (l - 1) as f64 * theta);
            h += ((l - 1) as f64 * t / r + a) * Complex64::from_polar(1.0, (l - 2) as f64 * theta);
        }
        for (j, &cj) in c.iter().enumerate() {
            p += -2.0 * cj * z.powi(j as i32 + 1);
            h += -2.0 * (j as f64 + 1.0) * cj * z.powi(j as i32);
        }
        (p, h)
    }
}
