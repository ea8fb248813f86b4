//! The modified Cauchy transform
//! `(Pφ)(z) = −(1/π)∬_𝔻 [φ(ζ)/(ζ−z) + zφ̄(ζ)/(1−ζ̄z) − φ(ζ)/(2ζ) + φ̄(ζ)/(2ζ̄)] dA(ζ)`,
//! its `z`-derivative `Hφ = (Pφ)_z` (principal value), and the real origin
//! value `(Pφ)(0) = −(1/π)∬ [φ/(2ζ) + φ̄/(2ζ̄)] dA`.
//!
//! At `z = 0` the full kernel collapses to exactly the origin kernel, so the
//! two ways of computing `(Pφ)(0)` must agree; the tests check this.

mod direct;
mod spectral;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;

pub use direct::{oracle_direct, DirectQuadrature, KernelId};
pub use spectral::SpectralOperator;

use crate::diskfield::{ComplexField, DiskGrid};
use crate::{Error, Result};

/// How `P` and `H` are evaluated.
#[derive(Debug, Clone)]
pub enum OperatorBackend {
    /// Precomputed Fourier–radial tables; fast, used by the solver.
    Spectral(Arc<SpectralOperator>),
    /// Point-centred polar quadrature of the interpolated field; slow oracle.
    Direct(DirectQuadrature),
}

impl OperatorBackend {
    /// Builds the spectral tables for `grid` and certifies them against the
    /// direct quadrature on low-degree monomials.
    pub fn spectral(grid: Arc<DiskGrid>) -> Result<Self> {
        let op = SpectralOperator::new(grid);
        certify(&op, 1e-5, 1e-4)?;
        Ok(Self::Spectral(Arc::new(op)))
    }

    pub fn direct(rule: DirectQuadrature) -> Self {
        Self::Direct(rule)
    }

    pub fn cauchy_p(&self, phi: &ComplexField, points: &[Complex64]) -> Vec<Complex64> {
        match self {
            Self::Spectral(op) => op.evaluate(phi, points).into_iter().map(|(p, _)| p).collect(),
            Self::Direct(rule) => direct_many(phi, KernelId::CauchyP, points, rule),
        }
    }

    pub fn hilbert_h(&self, phi: &ComplexField, points: &[Complex64]) -> Vec<Complex64> {
        match self {
            Self::Spectral(op) => op.evaluate(phi, points).into_iter().map(|(_, h)| h).collect(),
            Self::Direct(rule) => direct_many(phi, KernelId::HilbertH, points, rule),
        }
    }
}

fn direct_many(phi: &ComplexField, kernel: KernelId, points: &[Complex64], rule: &DirectQuadrature) -> Vec<Complex64> {
    use rayon::prelude::*;
    let interp = phi.interpolant();
    let f = |z: Complex64| interp.eval(z);
    points.par_iter().map(|&z| oracle_direct(&f, kernel, z, rule)).collect()
}

/// `(Pφ)(0)` from the grid quadrature of the origin kernel.
///
/// The two terms are complex conjugates of each other, so a visible imaginary
/// part means the data or the quadrature is broken.
pub fn p_at_origin(phi: &ComplexField) -> Result<f64> {
    let grid = phi.grid();
    let mut s = Complex64::new(0.0, 0.0);
    for ((v, z), w) in phi.values().iter().zip(grid.nodes()).zip(grid.weights()) {
        s += w * 0.5 * (v / z + v.conj() / z.conj());
    }
    let value = -s / PI;
    if value.im.abs() > 1e-6 * (1.0 + value.re.abs()) {
        return Err(Error::NotReal { re: value.re, im: value.im });
    }
    Ok(value.re)
}

/// Checks `op` against [`oracle_direct`] on `ζ^m ζ̄^n`, `m + n ≤ 2`.
fn certify(op: &SpectralOperator, tol_p: f64, tol_h: f64) -> Result<()> {
    let grid = op.grid().clone();
    let rule = DirectQuadrature::default();
    let points = [Complex64::new(0.3, 0.1), Complex64::new(-0.2, -0.45)];
    for (m, n) in [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)] {
        let mono = move |z: Complex64| z.powi(m) * z.conj().powi(n);
        let field = ComplexField::from_fn(grid.clone(), mono);
        for (&z, (p, h)) in points.iter().zip(op.evaluate(&field, &points)) {
            let dp = (p - oracle_direct(&mono, KernelId::CauchyP, z, &rule)).norm();
            let dh = (h - oracle_direct(&mono, KernelId::HilbertH, z, &rule)).norm();
            if dp > tol_p || dh > tol_h {
                return Err(Error::BackendMismatch { deviation: dp.max(dh) });
            }
        }
    }
    Ok(())
}
