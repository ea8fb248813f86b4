//! Build the minimal graph for one family member, cross-check its curvature
//! against finite differences of the reconstructed graph, and write an OBJ mesh.
//!
//! `cargo run --release --example surface_export -- 0 0.6 out/enneper_like.obj`

use std::path::PathBuf;
use std::sync::Arc;

use minigraph::beltrami::{solve_fixed_point, BeltramiCoefficient, SolveOptions};
use minigraph::cli::{parse_w, write_obj};
use minigraph::diskfield::DiskGrid;
use minigraph::transforms::SpectralOperator;
use minigraph::weierstrass::{
    cross_check, default_probes, parameterize_surface, path_independence_defect, sample_at_origin, FamilyParameter,
    WeierstrassData,
};

fn main() -> minigraph::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let w = parse_w(args.first().map_or("0", String::as_str))?;
    let k: f64 = args.get(1).map_or(Ok(0.6), |s| s.parse()).expect("k is a number");
    let path = PathBuf::from(args.get(2).map_or("out/surface.obj", String::as_str));

    let op = SpectralOperator::new(Arc::new(DiskGrid::build(48, 192)?));
    let omega = BeltramiCoefficient::family(FamilyParameter::new(w, k)?);
    let map = Arc::new(solve_fixed_point(&omega, &op, &SolveOptions::default())?);
    let data = WeierstrassData::from_family(map)?;
    println!("closed-loop defect of ∫2pq: {:.1e}", path_independence_defect(&data));

    let mut samples = vec![sample_at_origin(&data)?];
    samples.extend(parameterize_surface(&data, op.grid())?);
    let check = cross_check(&data, &samples[1..], &default_probes())?;
    println!("K(0) = {:.8}", samples[0].gauss_curvature);
    println!("{check:#?}");
    write_obj(&path, &samples, op.grid())?;
    println!("wrote {} ({} vertices)", path.display(), samples.len());
    Ok(())
}
