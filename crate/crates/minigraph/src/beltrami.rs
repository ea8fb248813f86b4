//! Harmonic self-maps of the disk with prescribed analytic dilatation `ω`.
//!
//! With `s = Pφ` we have `s_z̄ = φ` and `s_z = Hφ`, so `f = z·e^{s}` satisfies
//! `f_z = e^{s}(1 + zHφ)` and `f_z̄ = z e^{s} φ`. Imposing `conj(f_z̄) = ω f_z`
//! gives the fixed-point equation
//!
//! `φ = T_ω(φ) = (ω̄/z)·e^{−2i Im s}·(1 + z̄·conj(Hφ))`,
//!
//! which differs from the form with `Hφ` unconjugated; both are available as
//! [`Variant`]s and [`VariantChoice::Auto`] keeps whichever one actually
//! solves the Beltrami equation. `Re s → 0` on the circle, so `|f| = 1` there.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::diskfield::{ComplexField, DiskGrid};
use crate::transforms::{p_at_origin, SpectralOperator};
use crate::weierstrass::{mu_k, FamilyParameter};
use crate::{Error, Result};

type Evaluator = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// An analytic dilatation with a known bound `sup|ω| ≤ sup_bound < 1`.
#[derive(Clone)]
pub struct BeltramiCoefficient {
    evaluator: Evaluator,
    sup_bound: f64,
    value_at_0: Complex64,
    family: Option<FamilyParameter>,
}

impl std::fmt::Debug for BeltramiCoefficient {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BeltramiCoefficient")
            .field("sup_bound", &self.sup_bound)
            .field("value_at_0", &self.value_at_0)
            .field("family", &self.family)
            .finish()
    }
}

impl BeltramiCoefficient {
    pub fn new(evaluator: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static, sup_bound: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&sup_bound) {
            return Err(Error::InvalidParameter(format!("dilatation bound must lie in [0, 1), got {sup_bound}")));
        }
        let value_at_0 = evaluator(Complex64::new(0.0, 0.0));
        if value_at_0.norm() > sup_bound * (1.0 + 1e-12) {
            return Err(Error::InvalidParameter(format!("|ω(0)| = {} exceeds the bound {sup_bound}", value_at_0.norm())));
        }
        Ok(Self { evaluator: Arc::new(evaluator), sup_bound, value_at_0, family: None })
    }

    pub fn zero() -> Self {
        Self::new(|_| Complex64::new(0.0, 0.0), 0.0).expect("zero dilatation is valid")
    }

    pub fn constant(c: Complex64) -> Result<Self> {
        Self::new(move |_| c, c.norm())
    }

    /// `μ_k(·; w)`.
    pub fn family(param: FamilyParameter) -> Self {
        Self {
            evaluator: Arc::new(move |z| mu_k(z, &param)),
            sup_bound: param.sup_bound(),
            value_at_0: param.w() * param.w(),
            family: Some(param),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.evaluator)(z)
    }

    pub fn sup_bound(&self) -> f64 {
        self.sup_bound
    }

    pub fn value_at_0(&self) -> Complex64 {
        self.value_at_0
    }

    pub fn family_tag(&self) -> Option<FamilyParameter> {
        self.family
    }

    pub fn sample(&self, grid: &Arc<DiskGrid>) -> ComplexField {
        ComplexField::from_fn(grid.clone(), |z| self.eval(z))
    }

    /// Largest `|ω|` on the grid nodes; errors if it exceeds the declared bound.
    pub fn check_bound_on(&self, grid: &Arc<DiskGrid>) -> Result<f64> {
        let max = self.sample(grid).max_abs();
        if max > self.sup_bound * (1.0 + 1e-12) + 1e-15 {
            return Err(Error::InvalidParameter(format!("|ω| reaches {max} above its bound {}", self.sup_bound)));
        }
        Ok(max)
    }
}

/// Which form of `T_ω` is iterated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// `1 + z̄·Hφ`, the form as printed.
    AsPrinted,
    /// `1 + z̄·conj(Hφ)`, the form that follows from differentiating `z·e^{Pφ}`.
    Conjugated,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VariantChoice {
    Printed,
    Conjugated,
    /// Run both and keep the one with the smaller Beltrami residual.
    Auto,
}

impl std::str::FromStr for VariantChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "printed" => Ok(Self::Printed),
            "conjugated" => Ok(Self::Conjugated),
            "auto" => Ok(Self::Auto),
            _ => Err(Error::InvalidParameter(format!("variant must be printed, conjugated or auto, got {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveOptions {
    /// Stop when the discrete `L⁴` norm of the update falls below this.
    pub tol: f64,
    pub max_iter: usize,
    /// Picard damping `λ`; `None` picks 1 for `k ≤ 0.7` and 0.5 above.
    pub damping: Option<f64>,
    pub variant: VariantChoice,
    /// Zero Fourier modes above 2/3 of the Nyquist index in `|z|·T_ω(φ)`.
    pub dealias: bool,
    /// Accepted Beltrami residual on `|z| ≤ interior_radius`.
    pub residual_tol: f64,
    pub interior_radius: f64,
    /// Largest family parameter `k` the solver accepts.
    pub max_k: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-12,
            max_iter: 20_000,
            damping: None,
            variant: VariantChoice::Auto,
            dealias: true,
            residual_tol: 1e-3,
            interior_radius: 0.8,
            max_k: 0.97,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveDiagnostics {
    /// `L⁴` norms of successive updates.
    pub history: Vec<f64>,
    pub damping: f64,
    pub rejected_variant: Option<Variant>,
    /// Beltrami residual of the rejected variant (`inf` if it diverged).
    pub rejected_residual: Option<f64>,
    /// `‖T_ω(φ) − φ‖_{L⁴}` at the returned fixed point.
    pub fixed_point_residual: f64,
    /// Max `|Δf|` on the interior; a diagnostic, not asserted to vanish.
    pub harmonicity_residual: f64,
    pub boundary_min_modulus: f64,
    pub max_modulus: f64,
    /// Increases of the update norm over the second half of the iteration.
    pub non_monotone_steps: usize,
    pub interior_radius: f64,
}

/// A solved harmonic map `f` with `conj(f)_z = ω f_z`.
#[derive(Debug, Clone)]
pub struct SolvedMap {
    pub phi: ComplexField,
    pub f_values: ComplexField,
    /// `f_z` at the nodes, from the transform identities (not differentiated).
    pub f_z_values: ComplexField,
    /// `f_z̄` at the nodes, likewise.
    pub f_zbar_values: ComplexField,
    pub f_z_at_0: f64,
    pub dilatation: BeltramiCoefficient,
    /// Max `|conj(f)_z − ω f_z|` over `|z| ≤ interior_radius`, by spectral
    /// differentiation of `f_values`.
    pub residual_norm: f64,
    pub iterations: usize,
    pub variant: Variant,
    pub diagnostics: SolveDiagnostics,
}

impl SolvedMap {
    pub fn grid(&self) -> &Arc<DiskGrid> {
        self.f_values.grid()
    }

    /// `|f| ≤ 1 + 10⁻²` everywhere and `|f| ≥ 1 − 5·10⁻²` on the outer ring.
    pub fn is_self_map(&self) -> bool {
        self.diagnostics.max_modulus <= 1.0 + 1e-2 && self.diagnostics.boundary_min_modulus >= 1.0 - 5e-2
    }
}

/// `a₀ = f(0)`, `a₁ = f_z(0)`, `b₁ = (f̄)_z(0)`.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct MapCoefficients {
    pub a0: Complex64,
    pub a1: Complex64,
    pub b1: Complex64,
}

/// Beltrami residual `max |conj(f_z̄) − ω f_z|` over `|z| ≤ radius`, from the
/// samples of `f` alone.
pub fn beltrami_residual(f: &ComplexField, omega: &BeltramiCoefficient, radius: f64) -> f64 {
    let d = f.derivatives();
    let n = f.grid().interior_indices(radius).len();
    let nodes = f.grid().nodes();
    (0..n)
        .map(|k| (d.f_zbar.values()[k].conj() - omega.eval(nodes[k]) * d.f_z.values()[k]).norm())
        .fold(0.0, f64::max)
}

/// Precomputed pieces of `T_ω` on one grid.
struct Operator<'a> {
    op: &'a SpectralOperator,
    /// `ω̄(z)/z` at the nodes.
    prefactor: Vec<Complex64>,
    dealias: bool,
}

impl Operator<'_> {
    fn apply(&self, phi: &ComplexField, variant: Variant) -> ComplexField {
        let grid = phi.grid();
        let (s, h) = self.op.apply(phi);
        let mut values: Vec<Complex64> = grid
            .nodes()
            .iter()
            .zip(&self.prefactor)
            .zip(s.values().iter().zip(h.values()))
            .map(|((z, pre), (s, h))| {
                let rot = Complex64::from_polar(1.0, -2.0 * s.im);
                let hh = match variant {
                    Variant::AsPrinted => *h,
                    Variant::Conjugated => h.conj(),
                };
                pre * rot * (1.0 + z.conj() * hh)
            })
            .collect();
        if self.dealias {
            dealias(grid, &mut values);
        }
        ComplexField::from_parts_unchecked(grid.clone(), values)
    }
}

/// 2/3-rule filter applied to `|z|·v`, which stays bounded even when `v ~ 1/z`.
fn dealias(grid: &DiskGrid, values: &mut [Complex64]) {
    let na = grid.n_angular();
    let cutoff = (2.0 / 3.0) * (na as f64 / 2.0);
    for (i, ring) in values.chunks_mut(na).enumerate() {
        let r = grid.radial_nodes()[i];
        let scaled: Vec<Complex64> = ring.iter().map(|v| v * r).collect();
        let mut modes = grid.modes(&scaled);
        for (m, a) in modes.iter_mut().enumerate() {
            if (grid.mode_of_slot(m) as f64).abs() > cutoff {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        for (dst, v) in ring.iter_mut().zip(grid.synthesize(&modes)) {
            *dst = v / r;
        }
    }
}

/// One evaluation of `T_ω(φ)` (no dealiasing).
pub fn apply_t(omega: &BeltramiCoefficient, phi: &ComplexField, op: &SpectralOperator, variant: Variant) -> ComplexField {
    let prefactor = phi.grid().nodes().iter().map(|&z| omega.eval(z).conj() / z).collect();
    Operator { op, prefactor, dealias: false }.apply(phi, variant)
}

enum Outcome {
    Converged,
    Stalled,
    Diverged(usize),
}

struct Run {
    phi: ComplexField,
    history: Vec<f64>,
    outcome: Outcome,
}

fn iterate(t: &Operator<'_>, grid: &Arc<DiskGrid>, variant: Variant, damping: f64, opts: &SolveOptions) -> Run {
    let mut phi = ComplexField::zeros(grid.clone());
    let mut history = Vec::new();
    for it in 0..opts.max_iter {
        let next = t.apply(&phi, variant);
        let values: Vec<Complex64> =
            phi.values().iter().zip(next.values()).map(|(a, b)| (1.0 - damping) * a + damping * b).collect();
        let update = phi
            .values()
            .iter()
            .zip(&values)
            .zip(grid.weights())
            .map(|((a, b), w)| w * (b - a).norm_sqr().powi(2))
            .sum::<f64>()
            .powf(0.25);
        history.push(update);
        if !update.is_finite() || update > 1e6 {
            return Run { phi, history, outcome: Outcome::Diverged(it) };
        }
        phi = ComplexField::from_parts_unchecked(grid.clone(), values);
        if update < opts.tol {
            return Run { phi, history, outcome: Outcome::Converged };
        }
    }
    Run { phi, history, outcome: Outcome::Stalled }
}

struct Assembled {
    f: ComplexField,
    f_z: ComplexField,
    f_zbar: ComplexField,
    residual: f64,
}

fn assemble(phi: &ComplexField, t: &Operator<'_>, omega: &BeltramiCoefficient, radius: f64) -> Assembled {
    let grid = phi.grid();
    let (s, h) = t.op.apply(phi);
    let mut f = Vec::with_capacity(grid.len());
    let mut f_z = Vec::with_capacity(grid.len());
    let mut f_zbar = Vec::with_capacity(grid.len());
    for (((z, s), h), ph) in grid.nodes().iter().zip(s.values()).zip(h.values()).zip(phi.values()) {
        let e = s.exp();
        f.push(z * e);
        f_z.push(e * (1.0 + z * h));
        f_zbar.push(z * e * ph);
    }
    let f = ComplexField::from_parts_unchecked(grid.clone(), f);
    let residual = if f.values().iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        beltrami_residual(&f, omega, radius)
    } else {
        f64::INFINITY
    };
    Assembled {
        f,
        f_z: ComplexField::from_parts_unchecked(grid.clone(), f_z),
        f_zbar: ComplexField::from_parts_unchecked(grid.clone(), f_zbar),
        residual,
    }
}

fn l4(values: impl Iterator<Item = Complex64>, weights: &[f64]) -> f64 {
    values.zip(weights).map(|(v, w)| w * v.norm_sqr().powi(2)).sum::<f64>().powf(0.25)
}

/// Damped Picard iteration for `φ = T_ω(φ)` from `φ₀ = 0`, then `f = z·e^{Pφ}`
/// and `f_z(0) = e^{(Pφ)(0)}`.
///
/// `ω(0) ≠ 0` is accepted: `φ` then behaves like `ω̄(0)/z` near the origin,
/// which the radial representation `r·a_l(r)` carries without loss, and the
/// result is still a self-map of the disk.
pub fn solve_fixed_point(omega: &BeltramiCoefficient, op: &SpectralOperator, opts: &SolveOptions) -> Result<SolvedMap> {
    if !(opts.tol > 0.0 && opts.residual_tol > 0.0) || opts.max_iter == 0 {
        return Err(Error::InvalidParameter("tolerances must be positive and max_iter nonzero".into()));
    }
    if let Some(param) = omega.family_tag() {
        if param.k() > opts.max_k {
            return Err(Error::InvalidParameter(format!("k = {} exceeds the solver limit {}", param.k(), opts.max_k)));
        }
    }
    let grid = op.grid().clone();
    let damping = match opts.damping {
        Some(l) if l > 0.0 && l <= 1.0 => l,
        Some(l) => return Err(Error::InvalidParameter(format!("damping must lie in (0, 1], got {l}"))),
        None => {
            let k = omega.family_tag().map(|p| p.k()).unwrap_or_else(|| omega.sup_bound().sqrt());
            if k <= 0.7 { 1.0 } else { 0.5 }
        }
    };
    let t = Operator {
        op,
        prefactor: grid.nodes().iter().map(|&z| omega.eval(z).conj() / z).collect(),
        dealias: opts.dealias,
    };
    let variants: &[Variant] = match opts.variant {
        VariantChoice::Printed => &[Variant::AsPrinted],
        VariantChoice::Conjugated => &[Variant::Conjugated],
        VariantChoice::Auto => &[Variant::Conjugated, Variant::AsPrinted],
    };
    let runs: Vec<(Variant, Run, Assembled)> = variants
        .iter()
        .map(|&v| {
            let run = iterate(&t, &grid, v, damping, opts);
            let assembled = assemble(&run.phi, &t, omega, opts.interior_radius);
            (v, run, assembled)
        })
        .collect();
    let best = runs
        .iter()
        .enumerate()
        .filter(|(_, (_, run, _))| matches!(run.outcome, Outcome::Converged))
        .min_by(|a, b| a.1 .2.residual.total_cmp(&b.1 .2.residual))
        .map(|(i, _)| i);
    let Some(best) = best else {
        let (_, run, _) = runs.into_iter().next().expect("at least one variant");
        return Err(match run.outcome {
            Outcome::Diverged(iteration) => Error::Diverged { iteration, history: run.history },
            _ => Error::NotConverged { iterations: run.history.len(), last: *run.history.last().unwrap_or(&f64::NAN), history: run.history },
        });
    };
    let rejected = runs.iter().enumerate().find(|(i, _)| *i != best).map(|(_, (v, _, a))| (*v, a.residual));
    let (variant, run, assembled) = runs.into_iter().nth(best).expect("index in range");
    if assembled.residual > opts.residual_tol {
        return Err(Error::ResidualTooLarge { residual: assembled.residual, tolerance: opts.residual_tol });
    }
    let tphi = t.apply(&run.phi, variant);
    let fixed_point_residual = l4(tphi.values().iter().zip(run.phi.values()).map(|(a, b)| a - b), grid.weights());
    let interior = grid.interior_indices(opts.interior_radius).len();
    let harmonicity_residual =
        assembled.f.laplacian().values()[..interior].iter().map(|v| v.norm()).fold(0.0, f64::max);
    let outer = grid.boundary_ring_index();
    let boundary_min_modulus = assembled.f.ring(outer).iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    let half = run.history.len() / 2;
    let non_monotone_steps = run.history[half..].windows(2).filter(|w| w[1] > w[0]).count();
    let f_z_at_0 = p_at_origin(&run.phi)?.exp();
    Ok(SolvedMap {
        f_z_at_0,
        residual_norm: assembled.residual,
        iterations: run.history.len(),
        variant,
        diagnostics: SolveDiagnostics {
            damping,
            rejected_variant: rejected.map(|r| r.0),
            rejected_residual: rejected.map(|r| r.1),
            fixed_point_residual,
            harmonicity_residual,
            boundary_min_modulus,
            max_modulus: assembled.f.max_abs(),
            non_monotone_steps,
            interior_radius: opts.interior_radius,
            history: run.history,
        },
        phi: run.phi,
        f_values: assembled.f,
        f_z_values: assembled.f_z,
        f_zbar_values: assembled.f_zbar,
        dilatation: omega.clone(),
    })
}

/// `ω̃ = (ω − ω(0))/(1 − conj(ω(0))·ω)`, returned with `ω(0)`.
pub fn normalize_dilatation(omega: &BeltramiCoefficient) -> (BeltramiCoefficient, Complex64) {
    let c = omega.value_at_0();
    if c == Complex64::new(0.0, 0.0) {
        return (omega.clone(), c);
    }
    let inner = omega.clone();
    let s = omega.sup_bound();
    let bound = ((s + c.norm()) / (1.0 + s * c.norm())).min(1.0 - f64::EPSILON);
    let tilde = BeltramiCoefficient::new(
        move |z| {
            let w = inner.eval(z);
            (w - c) / (1.0 - c.conj() * w)
        },
        bound,
    )
    .expect("Möbius image of a bounded dilatation stays bounded");
    (tilde, c)
}

/// Undoes [`normalize_dilatation`] on a solved map:
/// `f = (f̃ + conj(c)·conj(f̃))/(1 − |c|²)` with `c = ω(0)`, which has
/// dilatation `ω` whenever `f̃` has dilatation `ω̃`. The image is an ellipse
/// rather than the disk when `c ≠ 0`.
pub fn denormalize_map(f_tilde: &SolvedMap, original: &BeltramiCoefficient) -> Result<SolvedMap> {
    let c = original.value_at_0();
    let scale = 1.0 - c.norm_sqr();
    let grid = f_tilde.grid().clone();
    let combine = |a: &ComplexField, b: &ComplexField| {
        let values = a.values().iter().zip(b.values()).map(|(x, y)| (x + c.conj() * y.conj()) / scale).collect();
        ComplexField::from_parts_unchecked(grid.clone(), values)
    };
    let f = combine(&f_tilde.f_values, &f_tilde.f_values);
    let f_z = combine(&f_tilde.f_z_values, &f_tilde.f_zbar_values);
    let f_zbar = combine(&f_tilde.f_zbar_values, &f_tilde.f_z_values);
    let radius = f_tilde.diagnostics.interior_radius;
    let residual = beltrami_residual(&f, original, radius);
    let before = f_tilde.residual_norm;
    if residual > 10.0 * before.max(1e-10) {
        return Err(Error::InconsistentDenormalization { before, after: residual });
    }
    let mut diagnostics = f_tilde.diagnostics.clone();
    diagnostics.boundary_min_modulus =
        f.ring(grid.boundary_ring_index()).iter().map(|v| v.norm()).fold(f64::INFINITY, f64::min);
    diagnostics.max_modulus = f.max_abs();
    Ok(SolvedMap {
        phi: f_tilde.phi.clone(),
        f_values: f,
        f_z_values: f_z,
        f_zbar_values: f_zbar,
        f_z_at_0: f_tilde.f_z_at_0 / scale,
        dilatation: original.clone(),
        residual_norm: residual,
        iterations: f_tilde.iterations,
        variant: f_tilde.variant,
        diagnostics,
    })
}

/// Normalize, solve, denormalize.
pub fn solve_normalized(omega: &BeltramiCoefficient, op: &SpectralOperator, opts: &SolveOptions) -> Result<SolvedMap> {
    let (tilde, _) = normalize_dilatation(omega);
    let mut opts = opts.clone();
    opts.max_k = 1.0;
    let solved = solve_fixed_point(&tilde, op, &opts)?;
    denormalize_map(&solved, omega)
}

/// Taylor coefficients at the origin from ring Fourier analysis.
///
/// For a harmonic `f = h + conj(g)` the `e^{−iθ}` coefficient on the ring of
/// radius `r` is exactly `conj(b₁)·r`, so every inner ring gives an estimate of
/// `b₁`; their spread measures how far the samples are from harmonic.
pub fn extract_coefficients(map: &SolvedMap) -> Result<MapCoefficients> {
    let grid = map.grid();
    let na = grid.n_angular();
    let modes = map.f_values.modes();
    let minus_one = grid.slot_of_mode(-1);
    let estimates: Vec<(f64, Complex64)> = grid
        .radial_nodes()
        .iter()
        .enumerate()
        .take_while(|(_, &r)| r <= 0.5)
        .map(|(i, &r)| (r, (modes[i * na + minus_one] / r).conj()))
        .collect();
    let reference = estimates
        .iter()
        .min_by(|a, b| (a.0 - 0.3).abs().total_cmp(&(b.0 - 0.3).abs()))
        .map(|e| e.1)
        .ok_or_else(|| Error::InvalidParameter("grid has no ring inside r = 0.5".into()))?;
    let spread = estimates.iter().map(|e| (e.1 - reference).norm()).fold(0.0, f64::max);
    let a1 = Complex64::new(map.f_z_at_0, 0.0);
    if spread > 1e-3 * (1.0 + a1.norm()) {
        return Err(Error::NoisyMap { spread });
    }
    Ok(MapCoefficients { a0: modes[0], a1, b1: reference })
}
