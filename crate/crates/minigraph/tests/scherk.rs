use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::sync::Arc;

use minigraph::beltrami::SolveOptions;
use minigraph::bounds::combined_pointwise_bound;
use minigraph::diskfield::DiskGrid;
use minigraph::scherk::{
    c0_c1, dilatation_of, k_sweep_extrapolate, limit_dilatation, match_quadrilateral, poisson_step_field,
    poisson_step_map, sup_sweep, BicentricQuad, Method, StepBoundary,
};
use minigraph::transforms::SpectralOperator;
use minigraph::{Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn step_map_is_harmonic_and_lands_in_the_quadrilateral() {
    let (matched, _) = match_quadrilateral(c(0.45, 0.1), 1e-10).unwrap();
    let quad = *matched.values();
    assert!(quad.vertices().iter().zip(BicentricQuad::square().vertices()).any(|(a, b)| (a - b).norm() > 1e-2));
    let b = StepBoundary::new([0.1, 1.5, 3.0, 4.6], quad).unwrap();
    let h = 1e-3;
    for z in [c(0.1, 0.2), c(-0.5, 0.3), c(0.7, -0.4), c(0.0, -0.85)] {
        let v = poisson_step_map(&b, &[z + h, z - h, z + c(0.0, h), z - c(0.0, h), z]);
        let lap = (v[0] + v[1] + v[2] + v[3] - 4.0 * v[4]) / (h * h);
        assert!(lap.norm() <= 1e-3, "{z}: {lap}");
        assert!(quad.contains(v[4], 1e-12), "{z} ↦ {}", v[4]);
    }
}

#[test]
fn square_step_map_dilatation_is_minus_z_squared() {
    let grid = Arc::new(DiskGrid::build(64, 256).unwrap());
    let f = poisson_step_field(&StepBoundary::square(), &grid);
    let d = dilatation_of(&f);
    assert!(d.excluded.is_empty());
    for &k in &grid.interior_indices(0.6) {
        let z = grid.nodes()[k];
        assert!((d.omega.values()[k] - limit_dilatation(z, c(0.0, 0.0))).norm() <= 1e-3);
        assert!((limit_dilatation(z, c(0.0, 0.0)) + z * z).norm() < 1e-15);
    }
    // |ω| → 1 at the boundary
    let b = StepBoundary::square();
    for t in [0.3, 1.0, 2.2, 4.0, 5.5] {
        let z = Complex64::from_polar(1.0 - 1e-9, t);
        assert!((b.dilatation(z).norm() - 1.0).abs() < 1e-6);
    }
}

#[test]
fn square_functionals() {
    let b = StepBoundary::square();
    assert!((b.f_z0().re - 2.0 * SQRT_2 / PI).abs() < 1e-14);
    let (c0, c1) = c0_c1(c(0.0, 0.0), b.f_z0().re).unwrap();
    assert!((c0 - PI * PI / 2.0).abs() < 1e-12);
    assert_eq!(c0, c1);
    assert!(c0_c1(c(0.0, 0.0), 0.0).is_err());
    assert!(c0_c1(c(1.0, 0.0), 1.0).is_err());
}

#[test]
fn quadrilateral_validation() {
    assert!(BicentricQuad::new([c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)]).is_ok());
    assert!(BicentricQuad::new([c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.1)]).is_err(), "off the circle");
    assert!(BicentricQuad::new([c(1.0, 0.0), c(0.0, -1.0), c(-1.0, 0.0), c(0.0, 1.0)]).is_err(), "clockwise");
    // cyclic but without an incircle
    let lopsided = [0.0, 0.5, 2.0, 4.0].map(|t| Complex64::from_polar(1.0, t));
    assert!(BicentricQuad::new(lopsided).is_err());
    assert!(StepBoundary::new([0.0, 1.0, 0.5, 4.0], BicentricQuad::square()).is_err());
    assert!(StepBoundary::new([0.0, FRAC_PI_2, PI, 2.0 * PI + 0.1], BicentricQuad::square()).is_err());
}

#[test]
fn matching_reproduces_the_square_and_known_values() {
    let (b, r) = match_quadrilateral(c(0.0, 0.0), 1e-10).unwrap();
    assert!((r.c0 - PI * PI / 2.0).abs() <= 1e-6 * r.c0);
    assert!((b.f_z0().re - 2.0 * SQRT_2 / PI).abs() < 1e-8);
    assert_eq!(r.method, Method::StepConstruction);

    let (b, r) = match_quadrilateral(c(0.3, 0.0), 1e-10).unwrap();
    assert!(r.c0 < PI * PI / 2.0);
    assert!((r.c0 - 3.00698).abs() < 1e-4, "{}", r.c0);
    assert!(b.values().pitot_defect() < 1e-8);
    assert!(b.value_at_origin().norm() < 1e-8);
    assert!(b.f_z0().im.abs() < 1e-8);
    // matched dilatation agrees with the k → 1 limit off the collocation rings
    for z in [c(0.1, 0.35), c(-0.45, -0.2), c(0.0, 0.7)] {
        assert!((b.dilatation(z) - limit_dilatation(z, c(0.3, 0.0))).norm() < 1e-6);
    }
}

#[test]
fn extremal_value_depends_on_the_argument_of_w() {
    let real = match_quadrilateral(c(0.6, 0.0), 1e-10).unwrap().1.c0;
    let diag = match_quadrilateral(Complex64::from_polar(0.6, PI / 4.0), 1e-10).unwrap().1.c0;
    let turned = match_quadrilateral(c(0.0, 0.6), 1e-10).unwrap().1.c0;
    assert!((real - turned).abs() < 1e-8, "period π/2");
    assert!(diag > real + 1e-4, "{diag} vs {real}");
}

#[test]
fn k_sweep_edge_cases() {
    let op = SpectralOperator::new(Arc::new(DiskGrid::build(16, 64).unwrap()));
    let opts = SolveOptions::default();
    let s = k_sweep_extrapolate(c(0.0, 0.0), &[0.0], &op, &opts).unwrap();
    assert_eq!(s.rows.len(), 1);
    assert_eq!(s.rows[0].curvature, 0.0);
    assert_eq!(s.report.c0, 0.0);
    assert!(s.report.error_estimate.is_infinite());
    assert!(s.extrapolants.is_empty());
    for bad in [&[][..], &[0.5, 0.3][..], &[0.5, 0.5][..], &[0.5, 0.98][..], &[-0.1][..]] {
        assert!(matches!(k_sweep_extrapolate(c(0.0, 0.0), bad, &op, &opts), Err(Error::InvalidParameter(_))));
    }
    let s = k_sweep_extrapolate(c(0.0, 0.0), &[0.2, 0.4, 0.6], &op, &opts).unwrap();
    assert!(s.rows.windows(2).all(|p| p[1].curvature > p[0].curvature));
    assert_eq!(s.extrapolants.len(), 1);
    assert!(s.report.c0 >= s.rows[2].curvature);
    assert_eq!(s.report.method, Method::KExtrapolation);
}

#[test]
fn sup_sweep_respects_pointwise_bounds() {
    let grid: Vec<Complex64> = [0.0, 0.2, 0.4, 0.6].iter().map(|&r| c(r, 0.0)).chain([c(0.3, 0.3)]).collect();
    let s = sup_sweep(&grid, 1e-10).unwrap();
    assert!(s.skipped.is_empty());
    assert_eq!(s.points.len(), grid.len());
    for (p, bound) in s.points.iter().zip(&s.pointwise_bounds) {
        assert!(p.c1 <= bound * 1.01, "{}: {} > {bound}", p.w, p.c1);
        assert!((bound - combined_pointwise_bound(p.w.norm_sqr()).unwrap()).abs() < 1e-15);
        assert!(p.c0 <= p.c1 + 1e-12);
    }
    assert!((s.heinz_estimate - PI * PI / 2.0).abs() < 1e-6);
    assert!(s.hopf_estimate >= s.heinz_estimate);
}
