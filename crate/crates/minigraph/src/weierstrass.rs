//! The curvature family `μ_k(·; w)`, its Gauss map `q`, the Weierstrass
//! parameterization `(Re f, Im f, Im ∫₀^z 2pq dζ)` of the minimal graph, and
//! Gaussian curvature by the Enneper–Weierstrass formula.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::beltrami::SolvedMap;
use crate::diskfield::{finite_difference_hessian, DiskGrid, FieldInterpolant, GraphPatch};
use crate::quadrature::gauss_legendre_unit;
use crate::{Error, Result};

/// `(w, k)` with `|w| < 1` and `0 ≤ k < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FamilyParameter {
    w: Complex64,
    k: f64,
}

impl FamilyParameter {
    pub fn new(w: Complex64, k: f64) -> Result<Self> {
        if !(w.norm() < 1.0) {
            return Err(Error::InvalidParameter(format!("|w| must be < 1, got {}", w.norm())));
        }
        if !(0.0..1.0).contains(&k) {
            return Err(Error::InvalidParameter(format!("k must lie in [0, 1), got {k}")));
        }
        Ok(Self { w, k })
    }

    pub fn w(&self) -> Complex64 {
        self.w
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    /// Unit phase `i(1 − w⁴)/|1 − w⁴|`.
    pub fn phase(&self) -> Complex64 {
        let t = Complex64::new(1.0, 0.0) - self.w.powi(4);
        Complex64::i() * t / t.norm()
    }

    /// `((|w| + k)/(1 + |w|k))²`, the sup of `|μ_k|` over the disk.
    pub fn sup_bound(&self) -> f64 {
        let a = self.w.norm();
        ((a + self.k) / (1.0 + a * self.k)).powi(2)
    }
}

/// Gauss map `q(z) = (w + kηz)/(1 + k w̄ η z)` with `η` the unit phase.
pub fn gauss_map_q(z: Complex64, param: &FamilyParameter) -> Complex64 {
    let kez = param.k * param.phase() * z;
    (param.w + kez) / (1.0 + param.w.conj() * kez)
}

/// `q′(z) = kη(1 − |w|²)/(1 + k w̄ η z)²`.
pub fn gauss_map_q_prime(z: Complex64, param: &FamilyParameter) -> Complex64 {
    let eta = param.phase();
    let d = 1.0 + param.w.conj() * param.k * eta * z;
    param.k * eta * (1.0 - param.w.norm_sqr()) / (d * d)
}

/// `μ_k(z; w) = q(z)²`.
pub fn mu_k(z: Complex64, param: &FamilyParameter) -> Complex64 {
    gauss_map_q(z, param).powi(2)
}

/// Curvature of the family at the origin, `−4k²(1−|w|²)²/(f_z(0)²(1+|w|²)⁴)`.
pub fn curvature_at_origin_family(param: &FamilyParameter, f_z0: f64) -> Result<f64> {
    if !(f_z0 > 0.0) {
        return Err(Error::InvalidParameter(format!("f_z(0) must be positive, got {f_z0}")));
    }
    let a = param.w.norm_sqr();
    Ok(-4.0 * param.k * param.k * (1.0 - a).powi(2) / (f_z0 * f_z0 * (1.0 + a).powi(4)))
}

/// `𝐧 = −(2 Im q, 2 Re q, |q|² − 1)/(1 + |q|²)`.
pub fn normal_from_q(q: Complex64) -> [f64; 3] {
    let s = 1.0 + q.norm_sqr();
    [-2.0 * q.im / s, -2.0 * q.re / s, (1.0 - q.norm_sqr()) / s]
}

/// `−4|q′|²/(|p|²(1+|q|²)⁴)`.
pub fn curvature_from_pq(p: Complex64, q: Complex64, q_prime: Complex64) -> f64 {
    -4.0 * q_prime.norm_sqr() / (p.norm_sqr() * (1.0 + q.norm_sqr()).powi(4))
}

type GaussFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// The second Weierstrass datum.
#[derive(Clone)]
pub enum GaussMap {
    /// The Möbius quotient of the `μ_k` family, with analytic derivative.
    Family(FamilyParameter),
    /// Any analytic `q` with `q² = ω`; derivatives by complex differences.
    Custom(GaussFn),
}

impl std::fmt::Debug for GaussMap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Family(p) => f.debug_tuple("Family").field(p).finish(),
            Self::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

impl GaussMap {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Family(p) => gauss_map_q(z, p),
            Self::Custom(q) => q(z),
        }
    }

    pub fn derivative(&self, z: Complex64) -> Complex64 {
        match self {
            Self::Family(p) => gauss_map_q_prime(z, p),
            Self::Custom(q) => {
                // four-point stencil in the complex directions, O(h⁴)
                let h = 1e-3;
                let i = Complex64::i();
                (q(z + h) - q(z - h) - i * (q(z + i * h) - q(z - i * h))) / (4.0 * h)
            }
        }
    }
}

/// `(p, q)` with `p = f_z` of a solved map and `q² = ω`.
#[derive(Debug, Clone)]
pub struct WeierstrassData {
    source: Arc<SolvedMap>,
    q: GaussMap,
    p: FieldInterpolant,
}

/// Tolerance of the check `q² = ω` at the grid nodes.
pub const GAUSS_MAP_TOLERANCE: f64 = 1e-6;

impl WeierstrassData {
    /// Pairs a solved map with a Gauss map and checks `q² = ω` on every node.
    pub fn new(source: Arc<SolvedMap>, q: GaussMap) -> Result<Self> {
        let omega = &source.dilatation;
        let worst = source
            .grid()
            .nodes()
            .iter()
            .chain(std::iter::once(&Complex64::new(0.0, 0.0)))
            .map(|&z| (q.eval(z).powi(2) - omega.eval(z)).norm())
            .fold(0.0, f64::max);
        if !(worst <= GAUSS_MAP_TOLERANCE) {
            return Err(Error::InvalidParameter(format!("q² differs from the dilatation by {worst:.3e}")));
        }
        let p = source.f_z_values.interpolant();
        Ok(Self { source, q, p })
    }

    /// Uses the family's Gauss map when the map was solved for some `μ_k`.
    pub fn from_family(source: Arc<SolvedMap>) -> Result<Self> {
        let param = source
            .dilatation
            .family_tag()
            .ok_or_else(|| Error::InvalidParameter("the dilatation is not a μ_k family member".into()))?;
        Self::new(source, GaussMap::Family(param))
    }

    pub fn source(&self) -> &SolvedMap {
        &self.source
    }

    pub fn gauss_map(&self) -> &GaussMap {
        &self.q
    }

    /// `p(z) = f_z(z)`; exact solver value at the origin.
    pub fn p(&self, z: Complex64) -> Complex64 {
        if z.norm() < 1e-14 {
            Complex64::new(self.source.f_z_at_0, 0.0)
        } else {
            self.p.eval(z)
        }
    }

    pub fn q(&self, z: Complex64) -> Complex64 {
        self.q.eval(z)
    }
}

/// Gaussian curvature `−4|q′|²/(|p|²(1+|q|²)⁴)` of the minimal graph at `z`.
pub fn curvature(z: Complex64, data: &WeierstrassData) -> Result<f64> {
    let p = data.p(z);
    if p.norm() < 1e-12 {
        return Err(Error::CurvaturePole(z));
    }
    Ok(curvature_from_pq(p, data.q(z), data.q.derivative(z)))
}

pub fn unit_normal(z: Complex64, data: &WeierstrassData) -> [f64; 3] {
    normal_from_q(data.q(z))
}

/// One point of the surface `(Re f, Im f, Im ∫₀^z 2pq dζ)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SurfaceSample {
    pub z: Complex64,
    pub position: [f64; 3],
    pub normal: [f64; 3],
    pub gauss_curvature: f64,
}

/// Tolerance on `|∮ 2pq dζ|` over the test triangles.
pub const PATH_TOLERANCE: f64 = 1e-4;

/// `∫_a^b 2pq dζ` along the segment, Gauss–Legendre with `n` nodes.
fn segment_integral(data: &WeierstrassData, a: Complex64, b: Complex64, n: usize) -> Complex64 {
    let (t, w) = gauss_legendre_unit(n);
    let d = b - a;
    t.iter().zip(&w).map(|(&t, &w)| {
        let z = a + d * t;
        2.0 * w * data.p(z) * data.q(z)
    }).sum::<Complex64>() * d
}

/// Largest `|∮ 2pq dζ|` over eight triangles `0 → z₁ → z₂ → 0` with vertices
/// on the circle of radius `0.5`.
pub fn path_independence_defect(data: &WeierstrassData) -> f64 {
    let r = 0.5;
    (0..8)
        .map(|j| {
            let a = Complex64::from_polar(r, j as f64 * std::f64::consts::FRAC_PI_4 + 0.1);
            let b = Complex64::from_polar(r, (j + 1) as f64 * std::f64::consts::FRAC_PI_4 + 0.1);
            let o = Complex64::new(0.0, 0.0);
            (segment_integral(data, o, a, 32) + segment_integral(data, a, b, 32) + segment_integral(data, b, o, 32)).norm()
        })
        .fold(0.0, f64::max)
}

/// The surface above every grid node, heights integrated along rays from the
/// origin with the spectral cumulative-integration matrix of the radial nodes.
pub fn parameterize_surface(data: &WeierstrassData, grid: &DiskGrid) -> Result<Vec<SurfaceSample>> {
    let src = data.source();
    if src.grid().as_ref() != grid {
        return Err(Error::InvalidParameter("surface grid must match the solved map's grid".into()));
    }
    let defect = path_independence_defect(data);
    if defect > PATH_TOLERANCE {
        return Err(Error::PathDependence(defect));
    }
    let (nr, na) = (grid.n_radial(), grid.n_angular());
    let s = grid.barycentric().cumulative_integration_matrix();
    let nodes = grid.nodes();
    let f = src.f_values.values();
    let p = src.f_z_values.values();
    let mut samples = Vec::with_capacity(grid.len());
    let mut heights = vec![0.0; grid.len()];
    for j in 0..na {
        let e = Complex64::from_polar(1.0, grid.theta(j));
        // Im(2 p q e^{iθ}) along the ray, integrated from 0
        let integrand: Vec<f64> = (0..nr)
            .map(|i| {
                let k = grid.index(i, j);
                (2.0 * p[k] * data.q(nodes[k]) * e).im
            })
            .collect();
        for i in 0..nr {
            heights[grid.index(i, j)] = s[i].iter().zip(&integrand).map(|(a, b)| a * b).sum();
        }
    }
    for (k, &z) in nodes.iter().enumerate() {
        let pk = p[k];
        if pk.norm() < 1e-12 {
            return Err(Error::CurvaturePole(z));
        }
        samples.push(SurfaceSample {
            z,
            position: [f[k].re, f[k].im, heights[k]],
            normal: unit_normal(z, data),
            gauss_curvature: curvature_from_pq(pk, data.q(z), data.q.derivative(z)),
        });
    }
    Ok(samples)
}

/// The surface point above the disk centre.
pub fn sample_at_origin(data: &WeierstrassData) -> Result<SurfaceSample> {
    let o = Complex64::new(0.0, 0.0);
    let f0 = data.source().f_values.interpolant().eval(o);
    Ok(SurfaceSample { z: o, position: [f0.re, f0.im, 0.0], normal: unit_normal(o, data), gauss_curvature: curvature(o, data)? })
}

/// Height samples over the plane `(x₁, x₂)`.
pub fn reconstruct_graph(samples: &[SurfaceSample]) -> Result<GraphPatch> {
    GraphPatch::new(
        samples.iter().map(|s| [s.position[0], s.position[1]]).collect(),
        samples.iter().map(|s| s.position[2]).collect(),
    )
}

/// Worst discrepancies between the Weierstrass quantities and those of the
/// reconstructed graph over a set of probe points.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct CrossCheck {
    pub probes: usize,
    /// Max `|K_fd − K|/|K|`.
    pub max_relative_curvature_error: f64,
    /// Max `|(1+f_v²)f_uu − 2f_u f_v f_uv + (1+f_u²)f_vv|`.
    pub max_mean_curvature_residual: f64,
    /// Max angle (radians) between the two unit normals.
    pub max_normal_angle: f64,
}

/// Compares curvature and normal at each probe `z` with finite differences
/// of the graph reconstructed from `samples`, evaluated above `f(z)`.
pub fn cross_check(data: &WeierstrassData, samples: &[SurfaceSample], probes: &[Complex64]) -> Result<CrossCheck> {
    let patch = reconstruct_graph(samples)?;
    let f = data.source().f_values.interpolant();
    let mut out = CrossCheck { probes: probes.len(), max_relative_curvature_error: 0.0, max_mean_curvature_residual: 0.0, max_normal_angle: 0.0 };
    for &z in probes {
        let x = f.eval(z);
        let d = finite_difference_hessian(&patch, [x.re, x.im])?;
        let k = curvature(z, data)?;
        let n = unit_normal(z, data);
        let g = d.upward_normal();
        let dot = n.iter().zip(&g).map(|(a, b)| a * b).sum::<f64>().clamp(-1.0, 1.0);
        out.max_relative_curvature_error = out.max_relative_curvature_error.max(((d.gauss_curvature() - k) / k).abs());
        out.max_mean_curvature_residual = out.max_mean_curvature_residual.max(d.mean_curvature_residual().abs());
        out.max_normal_angle = out.max_normal_angle.max(dot.acos());
    }
    Ok(out)
}

/// Ten probes spiralling out from `|z| = 0.05` to `|z| = 0.455`.
pub fn default_probes() -> Vec<Complex64> {
    (0..10).map(|j| Complex64::from_polar(0.05 + 0.045 * j as f64, 0.7 * j as f64 + 0.3)).collect()
}
