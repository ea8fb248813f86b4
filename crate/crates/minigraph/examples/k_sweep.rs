//! `|K_k(0)|` along `k → 1` at fixed `w`, its Richardson limit, and the step
//! construction value it approaches from below.
//!
//! `cargo run --release --example k_sweep -- 0.3 64x256`

use std::sync::Arc;

use minigraph::beltrami::{SolveOptions, VariantChoice};
use minigraph::cli::parse_w;
use minigraph::diskfield::DiskGrid;
use minigraph::scherk::{k_sweep_extrapolate, match_quadrilateral};
use minigraph::transforms::SpectralOperator;

fn main() -> minigraph::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let w = parse_w(args.first().map_or("0", String::as_str))?;
    // the accurate limit needs 128x1024; this default runs in seconds
    let (nr, na) = DiskGrid::parse_dims(args.get(1).map_or("64x256", String::as_str))?;
    let op = SpectralOperator::new(Arc::new(DiskGrid::build(nr, na)?));
    let opts = SolveOptions { variant: VariantChoice::Conjugated, ..SolveOptions::default() };
    let sweep = k_sweep_extrapolate(w, &[0.5, 0.7, 0.8, 0.9], &op, &opts)?;
    for r in &sweep.rows {
        println!("k = {:.2}  f_z(0) = {:.10}  |K(0)| = {:.8}  residual {:.1e}", r.k, r.f_z0, r.curvature, r.residual);
    }
    let (_, step) = match_quadrilateral(w, 1e-10)?;
    println!("limit {:.5} ± {:.5}; step construction c0 = {:.5}", sweep.report.c0, sweep.report.error_estimate, step.c0);
    Ok(())
}
