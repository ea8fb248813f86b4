//! Solve the harmonic map for one member of the curvature family and report
//! `f_z(0)`, the curvature at the centre and the solver diagnostics.
//!
//! `cargo run --release --example solve_family -- 0.3,0.1 0.7 64x256`

use std::sync::Arc;

use minigraph::beltrami::{extract_coefficients, solve_fixed_point, BeltramiCoefficient, SolveOptions};
use minigraph::cli::parse_w;
use minigraph::diskfield::DiskGrid;
use minigraph::transforms::SpectralOperator;
use minigraph::weierstrass::{curvature_at_origin_family, FamilyParameter};

fn main() -> minigraph::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let w = parse_w(args.first().map_or("0.3", String::as_str))?;
    let k: f64 = args.get(1).map_or(Ok(0.5), |s| s.parse()).expect("k is a number");
    let (nr, na) = DiskGrid::parse_dims(args.get(2).map_or("64x256", String::as_str))?;

    let param = FamilyParameter::new(w, k)?;
    let op = SpectralOperator::new(Arc::new(DiskGrid::build(nr, na)?));
    let map = solve_fixed_point(&BeltramiCoefficient::family(param), &op, &SolveOptions::default())?;
    let coeffs = extract_coefficients(&map)?;

    println!("w = {w}, k = {k} on {nr}x{na}");
    println!("f_z(0)             {:.12}", map.f_z_at_0);
    println!("K(0)               {:.12}", curvature_at_origin_family(&param, map.f_z_at_0)?);
    println!("Beltrami residual  {:.2e} ({:?}; other variant {:.2e})", map.residual_norm, map.variant, map.diagnostics.rejected_residual.unwrap_or(f64::NAN));
    println!("iterations         {} (damping {})", map.iterations, map.diagnostics.damping);
    println!("|f| on boundary    ≥ {:.6}, max |f| {:.6}", map.diagnostics.boundary_min_modulus, map.diagnostics.max_modulus);
    println!("b₁/a₁ = {:.6}, ω(0) = {:.6}", coeffs.b1 / coeffs.a1, map.dilatation.value_at_0());
    Ok(())
}
