use std::sync::Arc;

use minigraph::beltrami::{solve_fixed_point, BeltramiCoefficient, SolveOptions, SolvedMap};
use minigraph::diskfield::DiskGrid;
use minigraph::transforms::SpectralOperator;
use minigraph::weierstrass::{
    cross_check, curvature, curvature_at_origin_family, default_probes, parameterize_surface, path_independence_defect,
    reconstruct_graph, sample_at_origin, FamilyParameter, GaussMap, SurfaceSample, WeierstrassData,
};
use minigraph::{Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn solve(w: Complex64, k: f64, nr: usize, na: usize) -> Arc<SolvedMap> {
    let op = SpectralOperator::new(Arc::new(DiskGrid::build(nr, na).unwrap()));
    let omega = BeltramiCoefficient::family(FamilyParameter::new(w, k).unwrap());
    Arc::new(solve_fixed_point(&omega, &op, &SolveOptions::default()).unwrap())
}

#[test]
fn curvature_at_origin_two_ways() {
    for (w, k) in [(c(0.0, 0.0), 0.5), (c(0.3, 0.0), 0.5), (c(-0.2, 0.3), 0.4)] {
        let map = solve(w, k, 32, 128);
        let data = WeierstrassData::from_family(map.clone()).unwrap();
        let direct = curvature(c(0.0, 0.0), &data).unwrap();
        let param = FamilyParameter::new(w, k).unwrap();
        let closed = curvature_at_origin_family(&param, map.f_z_at_0).unwrap();
        assert!((direct - closed).abs() <= 1e-8 * closed.abs(), "{direct} vs {closed}");
        assert!(direct < 0.0);
    }
    let w0 = FamilyParameter::new(c(0.0, 0.0), 0.5).unwrap();
    assert_eq!(curvature_at_origin_family(&w0, 1.0).unwrap(), -1.0);
    assert!(curvature_at_origin_family(&w0, 0.0).is_err());
}

#[test]
fn k_zero_gives_a_flat_surface() {
    let map = solve(c(0.3, 0.1), 0.0, 16, 64);
    let data = WeierstrassData::from_family(map.clone()).unwrap();
    let samples = parameterize_surface(&data, map.grid()).unwrap();
    assert!(samples.iter().all(|s| s.gauss_curvature == 0.0));
    // q ≡ w: the surface is the plane through the origin with normal n(w)
    let n0 = samples[0].normal;
    for s in &samples {
        let off_plane: f64 = s.position.iter().zip(&n0).map(|(x, n)| x * n).sum();
        assert!(off_plane.abs() < 1e-6, "{off_plane}");
    }
    let level = solve(c(0.0, 0.0), 0.0, 16, 64);
    let level = parameterize_surface(&WeierstrassData::from_family(level.clone()).unwrap(), level.grid()).unwrap();
    assert!(level.iter().all(|s| s.position[2] == 0.0));
    assert!(samples.iter().all(|s| s.normal.iter().zip(&n0).all(|(a, b)| (a - b).abs() < 1e-14)));
}

#[test]
fn height_symmetry_at_w_zero() {
    let map = solve(c(0.0, 0.0), 0.5, 32, 128);
    let grid = map.grid().clone();
    let data = WeierstrassData::from_family(map).unwrap();
    let s = parameterize_surface(&data, &grid).unwrap();
    let (nr, na) = (grid.n_radial(), grid.n_angular());
    let quarter = na / 4;
    let scale = s.iter().map(|p| p.position[2].abs()).fold(0.0, f64::max);
    assert!(scale > 0.1);
    for i in 0..nr {
        for j in 0..na {
            let h = s[grid.index(i, j)].position[2];
            let h_quarter = s[grid.index(i, (j + quarter) % na)].position[2];
            let h_half = s[grid.index(i, (j + 2 * quarter) % na)].position[2];
            assert!((h + h_quarter).abs() <= 1e-12 * scale);
            assert!((h - h_half).abs() <= 1e-12 * scale);
        }
    }
}

#[test]
fn path_independence_and_origin_sample() {
    let map = solve(c(0.3, 0.0), 0.5, 32, 128);
    let data = WeierstrassData::from_family(map.clone()).unwrap();
    assert!(path_independence_defect(&data) < 1e-6);
    let o = sample_at_origin(&data).unwrap();
    assert!(o.position.iter().all(|x| x.abs() < 1e-6));
    // the normal at the origin is determined by q(0) = w
    let n = o.normal;
    assert!((n[2] - (1.0 - 0.09) / 1.09).abs() < 1e-12);
}

#[test]
fn weierstrass_agrees_with_the_reconstructed_graph() {
    let probes = default_probes();
    for w in [c(0.0, 0.0), c(0.3, 0.0)] {
        let mut residuals = Vec::new();
        for (nr, na) in [(32, 128), (64, 256)] {
            let map = solve(w, 0.5, nr, na);
            let data = WeierstrassData::from_family(map.clone()).unwrap();
            let samples = parameterize_surface(&data, map.grid()).unwrap();
            let check = cross_check(&data, &samples, &probes).unwrap();
            assert!(check.max_relative_curvature_error < 1e-2, "{w} {nr}: {check:?}");
            assert!(check.max_normal_angle < 1e-3, "{check:?}");
            residuals.push(check.max_mean_curvature_residual);
        }
        let order = (residuals[0] / residuals[1]).log2();
        assert!(order >= 1.5, "{w}: {residuals:?} order {order}");
    }
}

#[test]
fn bending_vanishes_at_the_centre_for_w_zero() {
    let map = solve(c(0.0, 0.0), 0.5, 32, 128);
    let data = WeierstrassData::from_family(map.clone()).unwrap();
    let samples = parameterize_surface(&data, map.grid()).unwrap();
    let patch = reconstruct_graph(&samples).unwrap();
    let d = minigraph::diskfield::finite_difference_hessian(&patch, [0.0, 0.0]).unwrap();
    let scale = d.f_uu.abs().max(d.f_vv.abs());
    assert!(scale > 0.1);
    assert!(d.f_uv.abs() <= 1e-6 * scale);
    assert!((d.f_uu + d.f_vv).abs() <= 1e-3 * scale, "saddle at the centre");
}

#[test]
fn rejects_inconsistent_inputs() {
    let map = solve(c(0.0, 0.0), 0.5, 16, 64);
    let wrong = GaussMap::Custom(Arc::new(|z| z));
    assert!(matches!(WeierstrassData::new(map.clone(), wrong), Err(Error::InvalidParameter(_))));
    let data = WeierstrassData::from_family(map).unwrap();
    let other = DiskGrid::build(16, 32).unwrap();
    assert!(matches!(parameterize_surface(&data, &other), Err(Error::InvalidParameter(_))));
    let fold = [[0.1, 0.2], [0.1, 0.2], [0.5, -0.3]]
        .iter()
        .zip([0.0, 0.4, 0.1])
        .map(|(uv, h)| SurfaceSample { z: c(0.0, 0.0), position: [uv[0], uv[1], h], normal: [0.0, 0.0, 1.0], gauss_curvature: 0.0 })
        .collect::<Vec<_>>();
    assert!(matches!(reconstruct_graph(&fold), Err(Error::FoldOver { .. })));
    let identity = Arc::new(
        solve_fixed_point(
            &BeltramiCoefficient::zero(),
            &SpectralOperator::new(Arc::new(DiskGrid::build(8, 32).unwrap())),
            &SolveOptions::default(),
        )
        .unwrap(),
    );
    assert!(WeierstrassData::from_family(identity).is_err());
}
