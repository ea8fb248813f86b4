//! Brute-force quadrature of the transform kernels, used to certify the
//! spectral tables.
//!
//! The Cauchy-type terms are integrated in polar coordinates centred at the
//! evaluation point `z`, where the area element `ρ dρ dα` cancels the `1/(ζ−z)`
//! singularity; the principal value of the `1/(ζ−z)²` term becomes
//! `∫ e^{−2iα} [∫₀^R (φ(z+ρe^{iα}) − φ(z))/ρ dρ + φ(z) ln R(α)] dα` after
//! subtracting `φ(z)`. The `1/ζ` origin terms and the reflected kernels are
//! integrated in polar coordinates centred at 0. Nothing is precomputed and
//! no grid nodes are involved, so there is no node collision to guard against.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::quadrature::gauss_legendre_unit;

/// Which kernel [`oracle_direct`] integrates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelId {
    /// `(Pφ)(z)`, all four terms.
    CauchyP,
    /// `(Hφ)(z) = ∂_z(Pφ)(z)`, principal value.
    HilbertH,
    /// `(Pφ)(0)` through its reduced origin kernel (ignores `z`).
    POrigin,
}

/// Polar product rule: `n_rho` Gauss–Legendre points along each ray, `n_alpha`
/// equally spaced rays.
#[derive(Debug, Clone)]
pub struct DirectQuadrature {
    rho: (Vec<f64>, Vec<f64>),
    n_alpha: usize,
}

impl Default for DirectQuadrature {
    fn default() -> Self {
        Self::new(48, 192)
    }
}

impl DirectQuadrature {
    pub fn new(n_rho: usize, n_alpha: usize) -> Self {
        Self { rho: gauss_legendre_unit(n_rho.max(2)), n_alpha: n_alpha.max(8) }
    }

    fn rays(&self) -> impl Iterator<Item = (Complex64, f64)> + '_ {
        let da = 2.0 * PI / self.n_alpha as f64;
        (0..self.n_alpha).map(move |k| (Complex64::from_polar(1.0, da * k as f64), da))
    }

    /// `∬_𝔻 g(ζ) dA` for `g` with at most a `1/|ζ|` singularity at the origin,
    /// passed as `ρ·g(ρe^{iα})`.
    fn origin_polar(&self, g: impl Fn(Complex64, Complex64, f64) -> Complex64) -> Complex64 {
        let (t, w) = &self.rho;
        let mut total = Complex64::new(0.0, 0.0);
        for (e, da) in self.rays() {
            for (&rho, &wr) in t.iter().zip(w) {
                total += g(rho * e, e, rho) * wr * da;
            }
        }
        total
    }

    /// Distance from `z` to the unit circle along direction `e`.
    fn exit_length(z: Complex64, e: Complex64) -> f64 {
        let b = (z.conj() * e).re;
        -b + (b * b + 1.0 - z.norm_sqr()).max(0.0).sqrt()
    }
}

/// Direct evaluation of one transform kernel at `z` for a field given as a closure.
pub fn oracle_direct(phi: &dyn Fn(Complex64) -> Complex64, kernel: KernelId, z: Complex64, rule: &DirectQuadrature) -> Complex64 {
    let inv_pi = -1.0 / PI;
    let (t, w) = &rule.rho;
    match kernel {
        KernelId::POrigin => {
            let s = rule.origin_polar(|zeta, e, _| {
                let v = phi(zeta);
                0.5 * (v * e.conj() + v.conj() * e)
            });
            inv_pi * s
        }
        KernelId::CauchyP => {
            let mut near = Complex64::new(0.0, 0.0);
            for (e, da) in rule.rays() {
                let len = DirectQuadrature::exit_length(z, e);
                for (&tq, &wq) in t.iter().zip(w) {
                    near += phi(z + len * tq * e) * e.conj() * wq * len * da;
                }
            }
            let far = rule.origin_polar(|zeta, e, rho| {
                let v = phi(zeta);
                rho * z * v.conj() / (1.0 - zeta.conj() * z) - 0.5 * v * e.conj() + 0.5 * v.conj() * e
            });
            inv_pi * (near + far)
        }
        KernelId::HilbertH => {
            let centre = phi(z);
            let mut pv = Complex64::new(0.0, 0.0);
            for (e, da) in rule.rays() {
                let len = DirectQuadrature::exit_length(z, e);
                let mut inner = centre * len.ln();
                for (&tq, &wq) in t.iter().zip(w) {
                    inner += (phi(z + len * tq * e) - centre) / tq * wq;
                }
                pv += e.conj() * e.conj() * inner * da;
            }
            let far = rule.origin_polar(|zeta, _, rho| {
                let d = 1.0 - zeta.conj() * z;
                rho * phi(zeta).conj() / (d * d)
            });
            inv_pi * (pv + far)
        }
    }
}
