//! Closed-form curvature bounds: Hall's coefficient inequality, the two
//! bounding curves `f₁`, `f₂` in `x = |w|²`, their intersection and the
//! resulting bound `2π²(2+√31)/27` on the Hopf constant.
//!
//! The bounds are on the curvature magnitude `|𝒦|`; curvature itself is
//! nonpositive.

use std::f64::consts::PI;

use serde::Serialize;
use twofloat::TwoFloat;

use crate::{Error, Result};

const PI2: f64 = PI * PI;

/// Named curvature constants, in increasing order.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ConstantsRegistry {
    /// Heinz constant `π²/2`.
    pub heinz_c0: f64,
    /// `2π²(2+√31)/27`.
    pub new_hopf_bound: f64,
    /// Hall's bound `16π²/27`.
    pub hall_bound: f64,
    /// Nitsche's bound.
    pub nitsche_bound: f64,
    /// Right-hand side `27/(4π²)` of Hall's coefficient inequality.
    pub hall_rhs: f64,
}

impl Default for ConstantsRegistry {
    fn default() -> Self {
        Self {
            heinz_c0: PI2 / 2.0,
            new_hopf_bound: closed_form_bound(),
            hall_bound: 16.0 * PI2 / 27.0,
            nitsche_bound: 7.678447,
            hall_rhs: 27.0 / (4.0 * PI2),
        }
    }
}

impl ConstantsRegistry {
    /// `heinz_c0 < new_hopf_bound < hall_bound < nitsche_bound`.
    pub fn is_ordered(&self) -> bool {
        self.heinz_c0 < self.new_hopf_bound && self.new_hopf_bound < self.hall_bound && self.hall_bound < self.nitsche_bound
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct BoundCurvePoint {
    pub x: f64,
    pub f1: f64,
    pub f2: f64,
    pub min_val: f64,
}

impl BoundCurvePoint {
    pub fn at(x: f64) -> Result<Self> {
        let (a, b) = (f1(x)?, f2(x)?);
        Ok(Self { x, f1: a, f2: b, min_val: a.min(b) })
    }
}

/// `|a₁|² ≥ 27/(4π²(1 + |w|⁴))` for maps with `a₀ = 0`, `b₁ = w² a₁`.
pub fn hall_lower_bound_a1(w_modulus: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&w_modulus) {
        return Err(Error::Domain(format!("|w| must lie in [0, 1], got {w_modulus}")));
    }
    Ok(27.0 / (4.0 * PI2 * (1.0 + w_modulus.powi(4))))
}

/// `(π²/2)(1+x)²/(1−x)²` on `[0, 1)`.
pub fn f1(x: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&x) {
        return Err(Error::Domain(format!("f1 needs 0 <= x < 1, got {x}")));
    }
    Ok(PI2 / 2.0 * ((1.0 + x) / (1.0 - x)).powi(2))
}

/// `(16π²/27)(1+x²)/(1+x)²` on `[0, 1]`.
pub fn f2(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("f2 needs 0 <= x <= 1, got {x}")));
    }
    Ok(16.0 * PI2 / 27.0 * (1.0 + x * x) / ((1.0 + x) * (1.0 + x)))
}

/// `min{f₁(x), f₂(x)}`.
pub fn combined_pointwise_bound(x: f64) -> Result<f64> {
    Ok(f1(x)?.min(f2(x)?))
}

/// A root of the reduced or full equation that is not the intersection point.
#[derive(Debug, Clone, Serialize)]
pub struct RejectedRoot {
    pub description: String,
    pub value: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct QuarticSolution {
    pub x_star: f64,
    pub y_star: f64,
    /// `|5x⁴ − 172x³ − 98x² − 172x + 5|` at `x_star`, evaluated in double-double.
    pub quartic_residual: f64,
    /// `|5(x² + 1/x²) − 172(x + 1/x) − 98|` at `x_star`, in double-double.
    pub reduced_residual: f64,
    pub rejected: Vec<RejectedRoot>,
}

fn dd(v: f64) -> TwoFloat {
    TwoFloat::from(v)
}

fn quartic_dd(x: TwoFloat) -> TwoFloat {
    (((dd(5.0) * x - dd(172.0)) * x - dd(98.0)) * x - dd(172.0)) * x + dd(5.0)
}

/// The intersection of `f₁` and `f₂`: `y = x + 1/x` solves `5y² − 172y − 108 = 0`,
/// `y* = (86 + 16√31)/5`, and `x* = (y* − √(y*² − 4))/2 ∈ (0, 1)`.
pub fn intersection_quartic() -> QuarticSolution {
    let s31 = dd(31.0).sqrt();
    let y = (dd(86.0) + dd(16.0) * s31) / dd(5.0);
    let disc = (y * y - dd(4.0)).sqrt();
    let x = (y - disc) / dd(2.0);
    let x_other = (y + disc) / dd(2.0);
    let y_minus = (dd(86.0) - dd(16.0) * s31) / dd(5.0);
    let xf = f64::from(x);
    // residuals at the double-precision root, accumulated in double-double
    let xr = dd(xf);
    let quartic_residual = f64::from(quartic_dd(xr)).abs();
    let inv = dd(1.0) / xr;
    let reduced = dd(5.0) * (xr * xr + inv * inv) - dd(172.0) * (xr + inv) - dd(98.0);
    QuarticSolution {
        x_star: xf,
        y_star: f64::from(y),
        quartic_residual,
        reduced_residual: f64::from(reduced).abs(),
        rejected: vec![
            RejectedRoot {
                description: "y = (86 - 16√31)/5".into(),
                value: f64::from(y_minus),
                reason: "|y| < 2, so x + 1/x = y has no real solution x".into(),
            },
            RejectedRoot {
                description: "x = (y* + √(y*² - 4))/2".into(),
                value: f64::from(x_other),
                reason: "outside (0, 1)".into(),
            },
        ],
    }
}

/// `2π²(2+√31)/27 ≈ 5.53265`, checked against `(π²/2)(y*+2)/(y*−2)`.
pub fn closed_form_bound() -> f64 {
    let value = 2.0 * PI2 * (2.0 + 31f64.sqrt()) / 27.0;
    let y = (86.0 + 16.0 * 31f64.sqrt()) / 5.0;
    let via_y = PI2 / 2.0 * (y + 2.0) / (y - 2.0);
    assert!((value - via_y).abs() <= 1e-12 * value, "closed form {value} vs {via_y}");
    value
}

/// Maximum of `min{f₁, f₂}` over `[0, 1)`: a dense scan followed by golden-section
/// refinement around the best sample. Returns `(argmax, max)`.
pub fn max_of_min_numeric(samples: usize) -> (f64, f64) {
    let g = |x: f64| combined_pointwise_bound(x).expect("x in [0, 1)");
    let n = samples.max(10);
    let h = 0.999 / n as f64;
    let best = (0..=n).map(|i| i as f64 * h).max_by(|a, b| g(*a).total_cmp(&g(*b))).unwrap_or(0.0);
    let (mut a, mut b) = ((best - h).max(0.0), (best + h).min(0.999));
    let phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        let c = b - phi * (b - a);
        let d = a + phi * (b - a);
        if g(c) < g(d) { a = c } else { b = d }
    }
    let x = 0.5 * (a + b);
    (x, g(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn registry_is_ordered() {
        let r = ConstantsRegistry::default();
        assert!(r.is_ordered());
        assert!((r.hall_bound - 5.84865).abs() < 1e-5);
        assert!((r.hall_rhs - 0.68394).abs() < 5e-5);
        assert!((hall_lower_bound_a1(0.0).unwrap() - r.hall_rhs).abs() < 1e-15);
    }

    #[test]
    fn curve_endpoints() {
        assert!((f1(0.0).unwrap() - PI2 / 2.0).abs() < 1e-15);
        assert!((f2(0.0).unwrap() - 16.0 * PI2 / 27.0).abs() < 1e-15);
        assert!((f2(1.0).unwrap() - 8.0 * PI2 / 27.0).abs() < 1e-15);
        assert!(f1(1.0).is_err());
        assert!(combined_pointwise_bound(1.0).is_err());
        assert!((combined_pointwise_bound(0.5).unwrap() - 16.0 * PI2 / 27.0 * 1.25 / 2.25).abs() < 1e-14);
        assert!((hall_lower_bound_a1(1.0).unwrap() - 27.0 / (8.0 * PI2)).abs() < 1e-15);
    }

    #[test]
    fn intersection_and_bound() {
        let q = intersection_quartic();
        assert!((q.y_star - 35.016846).abs() < 1e-6);
        assert!((q.x_star - 0.028581).abs() < 1e-6);
        assert!(q.quartic_residual <= 1e-12);
        assert!(q.reduced_residual <= 1e-10);
        assert!((f1(q.x_star).unwrap() - f2(q.x_star).unwrap()).abs() < 1e-10);
        assert!((closed_form_bound() - 5.53265).abs() < 1e-5);
        assert!(q.rejected.iter().all(|r| !(0.0..1.0).contains(&r.value)));
    }
}
