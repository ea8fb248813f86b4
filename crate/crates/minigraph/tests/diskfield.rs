use std::f64::consts::PI;
use std::sync::Arc;

use minigraph::diskfield::{finite_difference_hessian, ComplexField, DiskGrid, GraphPatch};
use minigraph::weierstrass::curvature_from_pq;
use minigraph::{Complex64, Error};
use proptest::prelude::*;

fn grid(nr: usize, na: usize) -> Arc<DiskGrid> {
    Arc::new(DiskGrid::build(nr, na).unwrap())
}

#[test]
fn small_grid_nodes_and_area() {
    let g = grid(8, 32);
    assert_eq!(g.len(), 256);
    let area: f64 = g.weights().iter().sum();
    assert!((area - PI).abs() <= 1e-6 * PI);
    assert!(g.weights().iter().all(|&w| w > 0.0));
    assert!(g.nodes().iter().all(|z| z.norm() > 0.0 && z.norm() < 1.0));
    let outer = g.boundary_ring_index();
    let r_outer = g.radial_nodes()[outer];
    assert!(g.radial_nodes().iter().all(|&r| r <= r_outer));
    let mut keys: Vec<(i64, i64)> = g.nodes().iter().map(|z| ((z.re * 1e12) as i64, (z.im * 1e12) as i64)).collect();
    keys.sort_unstable();
    keys.dedup();
    assert_eq!(keys.len(), g.len(), "nodes are unique");
}

#[test]
fn rejects_degenerate_grids() {
    for (nr, na) in [(3, 32), (8, 6), (8, 33)] {
        assert!(matches!(DiskGrid::build(nr, na), Err(Error::InvalidParameter(_))));
    }
}

#[test]
fn closed_form_integrals() {
    let g = grid(8, 32);
    let c = |re| Complex64::new(re, 0.0);
    assert_eq!(ComplexField::zeros(g.clone()).integrate(), c(0.0));
    assert!((ComplexField::from_fn(g.clone(), |_| c(1.0)).integrate() - PI).norm() < 1e-6);
    assert!((ComplexField::from_fn(g.clone(), |z| c(z.norm_sqr())).integrate() - PI / 2.0).norm() < 1e-6);
    assert!(ComplexField::from_fn(g.clone(), |z| z).integrate().norm() < 1e-6);
}

#[test]
fn fields_reject_wrong_length_and_non_finite_values() {
    let g = grid(4, 8);
    assert!(ComplexField::new(g.clone(), vec![Complex64::new(0.0, 0.0); 3]).is_err());
    let mut v = vec![Complex64::new(0.0, 0.0); g.len()];
    v[5] = Complex64::new(f64::NAN, 0.0);
    assert!(ComplexField::new(g, v).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn radial_moments_are_exact(nr in 4usize..20, m in 0usize..10) {
        prop_assume!(m <= nr / 2);
        let g = grid(nr, 16);
        let v = ComplexField::from_fn(g, |z| Complex64::new(z.norm_sqr().powi(m as i32), 0.0)).integrate();
        prop_assert!((v.re - PI / (m as f64 + 1.0)).abs() <= 1e-6 * PI / (m as f64 + 1.0));
        prop_assert!(v.im.abs() < 1e-12);
    }

    #[test]
    fn angular_orthogonality(m in 0i32..6, n in 0i32..6) {
        prop_assume!(m != n);
        let g = grid(12, 32);
        let v = ComplexField::from_fn(g, |z| z.powi(m) * z.conj().powi(n)).integrate();
        prop_assert!(v.norm() <= 1e-6);
    }

    #[test]
    fn hessian_of_quadratics_is_exact(a in -2.0f64..2.0, b in -2.0f64..2.0, c in -2.0f64..2.0,
                                      d in -1.0f64..1.0, e in -1.0f64..1.0,
                                      u0 in -0.3f64..0.3, v0 in -0.3f64..0.3) {
        let f = |u: f64, v: f64| a * u * u + b * u * v + c * v * v + d * u + e * v;
        let mut uv = Vec::new();
        let mut hs = Vec::new();
        for i in 0..30 {
            for j in 0..30 {
                let (u, v) = (-0.8 + 1.6 * i as f64 / 29.0, -0.8 + 1.6 * j as f64 / 29.0);
                uv.push([u, v]);
                hs.push(f(u, v));
            }
        }
        let patch = GraphPatch::new(uv, hs).unwrap();
        let h = finite_difference_hessian(&patch, [u0, v0]).unwrap();
        prop_assert!((h.f_uu - 2.0 * a).abs() < 1e-6);
        prop_assert!((h.f_uv - b).abs() < 1e-6);
        prop_assert!((h.f_vv - 2.0 * c).abs() < 1e-6);
        prop_assert!((h.f_u - (2.0 * a * u0 + b * v0 + d)).abs() < 1e-8);
        prop_assert!((h.f_v - (b * u0 + 2.0 * c * v0 + e)).abs() < 1e-8);
    }
}

/// Enneper's surface from `p ≡ 1`, `q = z`: `x₁ + ix₂ = z + conj(z³)/3`,
/// `x₃ = Im z²`, with curvature `−4/(1+|z|²)⁴`.
#[test]
fn enneper_patch_curvature() {
    let mut uv = Vec::new();
    let mut hs = Vec::new();
    for i in 1..=60 {
        let r = 0.9 * i as f64 / 60.0;
        for j in 0..180 {
            let z = Complex64::from_polar(r, 2.0 * PI * j as f64 / 180.0);
            let x = z + z.powi(3).conj() / 3.0;
            uv.push([x.re, x.im]);
            hs.push((z * z).im);
        }
    }
    uv.push([0.0, 0.0]);
    hs.push(0.0);
    let patch = GraphPatch::new(uv, hs).unwrap();
    for z in [Complex64::new(0.0, 0.0), Complex64::new(0.2, 0.1), Complex64::new(-0.3, 0.25), Complex64::new(0.1, -0.4)] {
        let x = z + z.powi(3).conj() / 3.0;
        let h = finite_difference_hessian(&patch, [x.re, x.im]).unwrap();
        let exact = curvature_from_pq(Complex64::new(1.0, 0.0), z, Complex64::new(1.0, 0.0));
        assert!(((h.gauss_curvature() - exact) / exact).abs() < 1e-2, "{z}: {} vs {exact}", h.gauss_curvature());
        assert!(h.mean_curvature_residual().abs() < 1e-3);
    }
    let far = finite_difference_hessian(&patch, [5.0, 5.0]);
    assert!(matches!(far, Err(Error::StencilOutOfDomain { .. })));
}
