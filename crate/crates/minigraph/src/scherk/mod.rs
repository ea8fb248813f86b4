//! Scherk-type harmonic maps: Poisson extensions of four-step boundary data
//! onto bicentric quadrilaterals, the extremal functionals `c₀(w)`, `c₁(w)`,
//! and the `k → 1` extrapolation of the `μ_k` curvature family.
//!
//! A step map taking the value `aⱼ` on the arc `(tⱼ, tⱼ₊₁)` is `f = h + ḡ` with
//!
//! `h′(z) = (1/2πi) Σ dⱼ/(e^{itⱼ} − z)`, `g′(z) = (1/2πi) Σ d̄ⱼ/(e^{itⱼ} − z)`,
//!
//! where `dⱼ = aⱼ − aⱼ₋₁` is the jump at `tⱼ`; its dilatation `g′/h′` is a
//! rational function of degree two.

mod levenberg;

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::beltrami::{solve_fixed_point, BeltramiCoefficient, SolveOptions};
use crate::bounds::combined_pointwise_bound;
use crate::diskfield::ComplexField;
use crate::transforms::SpectralOperator;
use crate::weierstrass::{curvature_at_origin_family, FamilyParameter};
use crate::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// A convex quadrilateral inscribed in the unit circle that also has an incircle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BicentricQuad {
    vertices: [Complex64; 4],
}

impl BicentricQuad {
    pub const MODULUS_TOLERANCE: f64 = 1e-12;
    pub const PITOT_TOLERANCE: f64 = 1e-8;

    /// Checks `|aⱼ| = 1`, counterclockwise convex order and the Pitot equality.
    pub fn new(vertices: [Complex64; 4]) -> Result<Self> {
        if let Some(v) = vertices.iter().find(|v| (v.norm() - 1.0).abs() > Self::MODULUS_TOLERANCE) {
            return Err(Error::InvalidParameter(format!("vertex {v} is not on the unit circle")));
        }
        let turns: f64 = (0..4).map(|j| (vertices[(j + 1) % 4].arg() - vertices[j].arg()).rem_euclid(TAU)).sum();
        let distinct = (0..4).all(|j| (vertices[(j + 1) % 4] - vertices[j]).norm() > 1e-12);
        if !distinct || (turns - TAU).abs() > 1e-9 {
            return Err(Error::InvalidParameter("vertices are not in counterclockwise convex order".into()));
        }
        let quad = Self { vertices };
        let pitot = quad.pitot_defect();
        if pitot.abs() > Self::PITOT_TOLERANCE {
            return Err(Error::InvalidParameter(format!("no incircle: Pitot defect {pitot:.3e}")));
        }
        Ok(quad)
    }

    /// Vertices `e^{iθⱼ}`.
    pub fn from_angles(angles: [f64; 4]) -> Result<Self> {
        Self::new(angles.map(|t| Complex64::from_polar(1.0, t)))
    }

    /// The square with vertices `e^{iπ/4}·iʲ`.
    pub fn square() -> Self {
        Self { vertices: std::array::from_fn(|j| Complex64::from_polar(1.0, PI / 4.0 + j as f64 * PI / 2.0)) }
    }

    pub fn vertices(&self) -> &[Complex64; 4] {
        &self.vertices
    }

    /// `|a₀a₁| + |a₂a₃| − |a₁a₂| − |a₃a₀|`.
    pub fn pitot_defect(&self) -> f64 {
        pitot(&self.vertices)
    }

    /// Membership in the closed quadrilateral, up to `tol`.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        (0..4).all(|j| {
            let (a, b) = (self.vertices[j], self.vertices[(j + 1) % 4]);
            let e = b - a;
            let d = z - a;
            e.re * d.im - e.im * d.re >= -tol * e.norm()
        })
    }
}

fn pitot(v: &[Complex64; 4]) -> f64 {
    let s = |i: usize, j: usize| (v[i] - v[j]).norm();
    s(0, 1) + s(2, 3) - s(1, 2) - s(3, 0)
}

/// Boundary data taking the value `aⱼ` on the arc `(tⱼ, tⱼ₊₁)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepBoundary {
    prevertices: [f64; 4],
    values: BicentricQuad,
}

impl StepBoundary {
    /// Requires `t₀ < t₁ < t₂ < t₃ < t₀ + 2π`.
    pub fn new(prevertices: [f64; 4], values: BicentricQuad) -> Result<Self> {
        let t = prevertices;
        let ordered = t.iter().all(|v| v.is_finite()) && t[0] < t[1] && t[1] < t[2] && t[2] < t[3] && t[3] < t[0] + TAU;
        if !ordered {
            return Err(Error::InvalidParameter(format!("prevertices {t:?} are not increasing within one turn")));
        }
        Ok(Self { prevertices, values })
    }

    /// Prevertices at `jπ/2`, values on the square.
    pub fn square() -> Self {
        Self { prevertices: [0.0, PI / 2.0, PI, 1.5 * PI], values: BicentricQuad::square() }
    }

    pub fn prevertices(&self) -> &[f64; 4] {
        &self.prevertices
    }

    pub fn values(&self) -> &BicentricQuad {
        &self.values
    }

    fn arc(&self, j: usize) -> (f64, f64) {
        let a = self.prevertices[j];
        let b = if j == 3 { self.prevertices[0] + TAU } else { self.prevertices[j + 1] };
        (a, b)
    }

    /// The Poisson extension at `|z| < 1`: `Σ aⱼ ωⱼ(z)` with the harmonic measure
    /// `ωⱼ(z) = θ/π − (β − α)/2π` of the arc `(α, β)`, where `θ ∈ (0, 2π)` is
    /// the angle `arg((e^{iβ} − z)/(e^{iα} − z))`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        (0..4)
            .map(|j| {
                let (a, b) = self.arc(j);
                let theta = ((Complex64::from_polar(1.0, b) - z) / (Complex64::from_polar(1.0, a) - z)).arg().rem_euclid(TAU);
                self.values.vertices[j] * (theta / PI - (b - a) / TAU)
            })
            .sum()
    }

    /// `f(0)`, the arc-length average of the values.
    pub fn value_at_origin(&self) -> Complex64 {
        (0..4).map(|j| {
            let (a, b) = self.arc(j);
            self.values.vertices[j] * (b - a)
        }).sum::<Complex64>() / TAU
    }

    fn sums(&self, z: Complex64) -> (Complex64, Complex64) {
        let v = &self.values.vertices;
        (0..4).fold((Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)), |(h, g), j| {
            let d = v[j] - v[(j + 3) % 4];
            let e = Complex64::from_polar(1.0, self.prevertices[j]) - z;
            (h + d / e, g + d.conj() / e)
        })
    }

    /// `h′ = f_z`.
    pub fn h_prime(&self, z: Complex64) -> Complex64 {
        self.sums(z).0 / (TAU * I)
    }

    /// `g′ = conj(f_z̄)`.
    pub fn g_prime(&self, z: Complex64) -> Complex64 {
        self.sums(z).1 / (TAU * I)
    }

    /// `g′/h′`.
    pub fn dilatation(&self, z: Complex64) -> Complex64 {
        let (h, g) = self.sums(z);
        g / h
    }

    /// `f_z(0) = (1/2π)∫ f*(e^{it}) e^{−it} dt`, summed arc by arc.
    pub fn f_z0(&self) -> Complex64 {
        (0..4).map(|j| {
            let (a, b) = self.arc(j);
            self.values.vertices[j] * (Complex64::from_polar(1.0, -a) - Complex64::from_polar(1.0, -b))
        }).sum::<Complex64>() / (TAU * I)
    }
}

/// The step map sampled on `points` inside the disk.
pub fn poisson_step_map(boundary: &StepBoundary, points: &[Complex64]) -> Vec<Complex64> {
    points.iter().map(|&z| boundary.eval(z)).collect()
}

/// The step map on every node of a grid.
pub fn poisson_step_field(boundary: &StepBoundary, grid: &std::sync::Arc<crate::diskfield::DiskGrid>) -> ComplexField {
    ComplexField::from_fn(grid.clone(), |z| boundary.eval(z))
}

/// `conj(f)_z / f_z` from spectral derivatives of sampled `f`.
#[derive(Debug, Clone)]
pub struct DilatationField {
    /// Zero at excluded nodes.
    pub omega: ComplexField,
    /// Nodes where `|f_z|` is below `1e-8·max|f_z|`.
    pub excluded: Vec<usize>,
}

pub fn dilatation_of(f: &ComplexField) -> DilatationField {
    let d = f.derivatives();
    let scale = d.f_z.max_abs();
    let mut excluded = Vec::new();
    let omega = d
        .f_z
        .values()
        .iter()
        .zip(d.f_zbar.values())
        .enumerate()
        .map(|(k, (fz, fzb))| {
            if fz.norm() <= 1e-8 * scale {
                excluded.push(k);
                Complex64::new(0.0, 0.0)
            } else {
                fzb.conj() / fz
            }
        })
        .collect();
    DilatationField { omega: ComplexField::new(f.grid().clone(), omega).expect("finite quotient"), excluded }
}

/// How an extremal value was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    StepConstruction,
    KExtrapolation,
}

/// `f_z(0)` of the extremal map for `w` and the functionals it determines.
#[derive(Debug, Clone, Serialize)]
pub struct ExtremalReport {
    pub w: Complex64,
    pub f_z0: f64,
    pub c0: f64,
    pub c1: f64,
    pub method: Method,
    pub error_estimate: f64,
}

/// `c₀ = 4(1−|w|²)²/((1+|w|²)⁴ f_z0²)`, `c₁ = 4/((1+|w|²)² f_z0²)`.
pub fn c0_c1(w: Complex64, f_z0: f64) -> Result<(f64, f64)> {
    if !(f_z0 > 0.0) || !(w.norm() < 1.0) {
        return Err(Error::InvalidParameter(format!("need f_z(0) > 0 and |w| < 1, got {f_z0}, {w}")));
    }
    let x = w.norm_sqr();
    let c1 = 4.0 / ((1.0 + x).powi(2) * f_z0 * f_z0);
    let c0 = 4.0 * (1.0 - x).powi(2) / ((1.0 + x).powi(4) * f_z0 * f_z0);
    debug_assert!((c0 - c1 * ((1.0 - x) / (1.0 + x)).powi(2)).abs() <= 1e-12 * c1);
    Ok((c0, c1))
}

/// `f_z(0)` consistent with a given `c₀(w)`.
fn f_z0_from_c0(w: Complex64, c0: f64) -> f64 {
    let x = w.norm_sqr();
    2.0 * (1.0 - x) / ((1.0 + x).powi(2) * c0.sqrt())
}

fn report_from_c0(w: Complex64, c0: f64, method: Method, error_estimate: f64) -> ExtremalReport {
    let x = w.norm_sqr();
    ExtremalReport { w, f_z0: f_z0_from_c0(w, c0), c0, c1: c0 * ((1.0 + x) / (1.0 - x)).powi(2), method, error_estimate }
}

/// Radii and angle count of the dilatation collocation rings.
pub const COLLOCATION_RADII: [f64; 2] = [0.3, 0.6];
pub const COLLOCATION_ANGLES: usize = 32;
/// Largest step in `|w|` along the continuation path from the square.
pub const CONTINUATION_STEP: f64 = 0.05;

fn collocation_points() -> Vec<Complex64> {
    COLLOCATION_RADII
        .iter()
        .flat_map(|&r| (0..COLLOCATION_ANGLES).map(move |j| Complex64::from_polar(r, TAU * j as f64 / COLLOCATION_ANGLES as f64)))
        .collect()
}

/// Unvalidated step data from `(t₀..t₃, θ₀..θ₃)`.
fn raw_boundary(x: &[f64]) -> StepBoundary {
    StepBoundary {
        prevertices: [x[0], x[1], x[2], x[3]],
        values: BicentricQuad { vertices: std::array::from_fn(|j| Complex64::from_polar(1.0, x[4 + j])) },
    }
}

/// `[Re f(0), Im f(0), Im h′(0), Re/Im(ω − q²) at the collocation nodes]`.
fn match_residuals(x: &[f64], points: &[Complex64], target: &[Complex64]) -> Vec<f64> {
    let b = raw_boundary(x);
    let f0 = b.value_at_origin();
    let mut r = vec![f0.re, f0.im, b.f_z0().im];
    for (&z, &t) in points.iter().zip(target) {
        let d = b.dilatation(z) - t;
        r.push(d.re);
        r.push(d.im);
    }
    r
}

fn canonical(x: &[f64]) -> StepBoundary {
    let shift = x[0].div_euclid(TAU) * TAU;
    let t = [x[0] - shift, x[1] - shift, x[2] - shift, x[3] - shift];
    raw_boundary(&[t[0], t[1], t[2], t[3], x[4], x[5], x[6], x[7]])
}

/// Finds the step map whose dilatation is `q(·; w)²` with `k = 1`, by
/// Levenberg–Marquardt continuation from the square along the segment `[0, w]`.
///
/// Both the incircle and `f(0) = 0` come out of the match rather than being
/// imposed; the first is checked on the result.
pub fn match_quadrilateral(w: Complex64, tol: f64) -> Result<(StepBoundary, ExtremalReport)> {
    if !(w.norm() < 1.0) || !(tol > 0.0) {
        return Err(Error::InvalidParameter(format!("need |w| < 1 and tol > 0, got {w}, {tol}")));
    }
    let points = collocation_points();
    let sq = StepBoundary::square();
    let mut x: Vec<f64> = sq.prevertices.iter().copied().chain(sq.values.vertices.iter().map(|v| v.arg().rem_euclid(TAU))).collect();
    let steps = (w.norm() / CONTINUATION_STEP).ceil().max(1.0) as usize;
    let mut residual = 0.0;
    for s in 1..=steps {
        let ws = w * (s as f64 / steps as f64);
        let target: Vec<Complex64> = points.iter().map(|&z| limit_dilatation(z, ws)).collect();
        let f = |p: &[f64]| match_residuals(p, &points, &target);
        let out = levenberg::minimize(&f, &x, &levenberg::Settings { max_iter: 200, tol: tol.min(1e-13), fd_step: 1e-7 });
        x = out.x;
        residual = out.residual;
    }
    let best = canonical(&x);
    let valid = StepBoundary::new(best.prevertices, best.values)
        .and_then(|b| BicentricQuad::new(b.values.vertices).map(|_| b))
        .ok()
        .filter(|b| b.f_z0().re > 0.0);
    let boundary = match valid {
        Some(b) if residual <= tol => b,
        _ => return Err(Error::NoMatch { residual, best: Box::new(best) }),
    };
    let f_z0 = boundary.f_z0().re;
    let (c0, c1) = c0_c1(w, f_z0)?;
    let error_estimate = 10.0 * c0 * residual.max(f64::EPSILON);
    Ok((boundary, ExtremalReport { w, f_z0, c0, c1, method: Method::StepConstruction, error_estimate }))
}

/// `μ_k(z; w)` continued to `k = 1`, the target of the match.
pub fn limit_dilatation(z: Complex64, w: Complex64) -> Complex64 {
    let eta = I * (1.0 - w.powi(4)) / (1.0 - w.powi(4)).norm();
    ((w + eta * z) / (1.0 + w.conj() * eta * z)).powi(2)
}

/// One solved member of a `k` sweep.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub k: f64,
    pub f_z0: f64,
    /// `|𝒦_k(0)|`.
    pub curvature: f64,
    pub residual: f64,
    pub iterations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct KSweep {
    pub rows: Vec<SweepRow>,
    /// Quadratic extrapolants to `k = 1` of consecutive triples (or the single
    /// linear one for two rows).
    pub extrapolants: Vec<f64>,
    pub report: ExtremalReport,
}

/// Solves the family at every `k`, then extrapolates `|𝒦_k(0)|` to `k = 1` by a
/// quadratic in `1 − k` through the last three rows; the error estimate is the
/// change from the previous triple.
pub fn k_sweep_extrapolate(w: Complex64, k_list: &[f64], op: &SpectralOperator, opts: &SolveOptions) -> Result<KSweep> {
    if k_list.is_empty() {
        return Err(Error::InvalidParameter("empty k list".into()));
    }
    if k_list.iter().any(|k| !(0.0..=opts.max_k).contains(k)) || k_list.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::InvalidParameter(format!("k values must increase within [0, {}]", opts.max_k)));
    }
    let rows: Vec<SweepRow> = k_list
        .par_iter()
        .map(|&k| {
            let param = FamilyParameter::new(w, k)?;
            let map = solve_fixed_point(&BeltramiCoefficient::family(param), op, opts)?;
            Ok(SweepRow {
                k,
                f_z0: map.f_z_at_0,
                curvature: -curvature_at_origin_family(&param, map.f_z_at_0)?,
                residual: map.residual_norm,
                iterations: map.iterations,
            })
        })
        .collect::<Result<_>>()?;
    let raw: Vec<[f64; 2]> = rows.iter().map(|r| [r.k, r.curvature]).collect();
    if rows.iter().any(|r| !r.curvature.is_finite()) || rows.windows(2).any(|p| p[1].curvature <= p[0].curvature) {
        return Err(Error::ExtrapolationUnreliable { reason: "|K_k(0)| is not strictly increasing in k".into(), rows: raw });
    }
    let last = rows.last().expect("nonempty");
    let (extrapolants, c0, error) = match rows.len() {
        1 => (Vec::new(), last.curvature, f64::INFINITY),
        2 => {
            let e = extrapolate_to_one(&rows);
            (vec![e], e, (e - last.curvature).abs())
        }
        n => {
            let ex: Vec<f64> = (0..=n - 3).map(|s| extrapolate_to_one(&rows[s..s + 3])).collect();
            let e = *ex.last().expect("one triple");
            let err = if ex.len() >= 2 { (e - ex[ex.len() - 2]).abs() } else { (e - last.curvature).abs() };
            (ex, e, err)
        }
    };
    if !(c0 >= last.curvature) || !c0.is_finite() {
        return Err(Error::ExtrapolationUnreliable { reason: format!("extrapolant {c0} falls below the last value"), rows: raw });
    }
    let mut report = report_from_c0(w, c0, Method::KExtrapolation, error);
    if c0 == 0.0 {
        report.f_z0 = last.f_z0;
    }
    Ok(KSweep { rows, extrapolants, report })
}

/// Lagrange polynomial through `(1 − kᵢ, |𝒦ᵢ|)` evaluated at `1 − k = 0`.
fn extrapolate_to_one(rows: &[SweepRow]) -> f64 {
    let d: Vec<f64> = rows.iter().map(|r| 1.0 - r.k).collect();
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let l: f64 = (0..rows.len()).filter(|&j| j != i).map(|j| d[j] / (d[j] - d[i])).product();
            r.curvature * l
        })
        .sum()
}

/// Extremal values over a set of `w`.
#[derive(Debug, Clone, Serialize)]
pub struct SupSweep {
    pub heinz_estimate: f64,
    pub hopf_estimate: f64,
    pub points: Vec<ExtremalReport>,
    /// `|w|²`-bound `min{f₁, f₂}` per point, in the order of `points`.
    pub pointwise_bounds: Vec<f64>,
    pub skipped: Vec<(Complex64, String)>,
}

/// `sup c₀(w)` and `sup c₁(w)` over `w_grid` by the step construction.
pub fn sup_sweep(w_grid: &[Complex64], tol: f64) -> Result<SupSweep> {
    let results: Vec<(Complex64, Result<ExtremalReport>)> =
        w_grid.par_iter().map(|&w| (w, match_quadrilateral(w, tol).map(|r| r.1))).collect();
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    for (w, r) in results {
        match r {
            Ok(p) => points.push(p),
            Err(Error::InvalidParameter(m)) => return Err(Error::InvalidParameter(m)),
            Err(e) => skipped.push((w, e.to_string())),
        }
    }
    let pointwise_bounds = points.iter().map(|p| combined_pointwise_bound(p.w.norm_sqr())).collect::<Result<_>>()?;
    Ok(SupSweep {
        heinz_estimate: points.iter().map(|p| p.c0).fold(f64::NAN, f64::max),
        hopf_estimate: points.iter().map(|p| p.c1).fold(f64::NAN, f64::max),
        points,
        pointwise_bounds,
        skipped,
    })
}

/// The real-radius grid `{0, 0.1, …, 0.9}`.
pub fn default_w_grid() -> Vec<Complex64> {
    (0..10).map(|j| Complex64::new(j as f64 / 10.0, 0.0)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_step_map() {
        let b = StepBoundary::square();
        assert!(b.value_at_origin().norm() < 1e-15);
        assert!(b.eval(Complex64::new(0.0, 0.0)).norm() < 1e-15);
        let exact = 2.0 * 2f64.sqrt() / PI;
        assert!((b.f_z0() - exact).norm() < 1e-15);
        assert!((b.h_prime(Complex64::new(0.0, 0.0)) - exact).norm() < 1e-15);
        let z = Complex64::new(0.3, -0.4);
        assert!((b.dilatation(z) + z * z).norm() < 1e-14);
        // boundary values are approached from inside
        let near = Complex64::from_polar(0.999999, 0.3);
        assert!((b.eval(near) - b.values().vertices()[0]).norm() < 1e-4);
    }

    #[test]
    fn quad_validation() {
        assert!(BicentricQuad::square().pitot_defect().abs() < 1e-15);
        assert!(BicentricQuad::from_angles([0.0, 1.0, 2.0, 4.0]).is_err());
        assert!(BicentricQuad::from_angles([0.0, 3.0, 2.0, 4.0]).is_err());
        assert!(StepBoundary::new([0.0, 1.0, 1.0, 2.0], BicentricQuad::square()).is_err());
        assert!(BicentricQuad::square().contains(Complex64::new(0.7, 0.0), 0.0));
        assert!(!BicentricQuad::square().contains(Complex64::new(0.72, 0.0), 0.0));
    }

    #[test]
    fn functionals() {
        let (c0, c1) = c0_c1(Complex64::new(0.0, 0.0), 1.0).unwrap();
        assert_eq!((c0, c1), (4.0, 4.0));
        let (c0, c1) = c0_c1(Complex64::new(0.0, 0.0), 2.0 * 2f64.sqrt() / PI).unwrap();
        assert!((c0 - PI * PI / 2.0).abs() < 1e-13 && (c1 - c0).abs() < 1e-15);
        let w = Complex64::new(0.3, 0.4);
        let (c0, c1) = c0_c1(w, 0.8).unwrap();
        assert!((c0 / c1 - (0.75f64 / 1.25).powi(2)).abs() < 1e-14);
        assert!(c0_c1(w, 0.0).is_err());
    }

    #[test]
    fn match_at_zero_is_the_square() {
        let (b, r) = match_quadrilateral(Complex64::new(0.0, 0.0), 1e-10).unwrap();
        assert!((r.f_z0 - 2.0 * 2f64.sqrt() / PI).abs() < 1e-12);
        assert!((r.c0 - PI * PI / 2.0).abs() < 1e-10);
        assert!(b.values().pitot_defect().abs() < 1e-12);
    }
}
