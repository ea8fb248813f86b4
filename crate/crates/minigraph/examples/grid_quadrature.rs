//! Polar Gauss–Legendre × uniform grid: node layout and exact moments.
//!
//! `cargo run --example grid_quadrature -- 16x64`

use std::f64::consts::PI;
use std::sync::Arc;

use minigraph::diskfield::{ComplexField, DiskGrid};
use minigraph::Complex64;

fn main() -> minigraph::Result<()> {
    let spec = std::env::args().nth(1).unwrap_or_else(|| "16x64".into());
    let (nr, na) = DiskGrid::parse_dims(&spec)?;
    let grid = Arc::new(DiskGrid::build(nr, na)?);
    println!("{nr}x{na}: {} nodes, radii {:.4} … {:.4}", grid.len(), grid.radial_nodes()[0], grid.radial_nodes()[nr - 1]);
    println!("Σ weights = {:.15} (π = {PI:.15})", grid.weights().iter().sum::<f64>());
    for m in 0..=nr / 2 {
        let v = ComplexField::from_fn(grid.clone(), |z| Complex64::new(z.norm_sqr().powi(m as i32), 0.0)).integrate();
        println!("∫ |z|^{:<2} = {:.15}  exact {:.15}", 2 * m, v.re, PI / (m as f64 + 1.0));
    }
    let odd = ComplexField::from_fn(grid, |z| z * z.conj() * z).integrate();
    println!("∫ z|z|² = {odd:.1e}");
    Ok(())
}
