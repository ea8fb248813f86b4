//! The two transforms `P` and `H` from the spectral tables and from direct
//! point-centred quadrature, side by side.
//!
//! `cargo run --example operator_oracle`

use std::sync::Arc;

use minigraph::diskfield::{ComplexField, DiskGrid};
use minigraph::transforms::{oracle_direct, DirectQuadrature, KernelId, OperatorBackend};
use minigraph::Complex64;

fn main() -> minigraph::Result<()> {
    let grid = Arc::new(DiskGrid::build(16, 64)?);
    // certified against the oracle at construction
    let spectral = OperatorBackend::spectral(grid.clone())?;
    let rule = DirectQuadrature::default();
    let phi = |z: Complex64| Complex64::new(0.5, -0.2) + z.conj() * z * 0.8 + z.powi(2) * Complex64::new(0.0, 0.3);
    let field = ComplexField::from_fn(grid, phi);
    let points = [Complex64::new(0.0, 0.0), Complex64::new(0.3, 0.4), Complex64::new(-0.7, 0.1)];
    let p = spectral.cauchy_p(&field, &points);
    let h = spectral.hilbert_h(&field, &points);
    for (k, &z) in points.iter().enumerate() {
        let pd = oracle_direct(&phi, KernelId::CauchyP, z, &rule);
        let hd = oracle_direct(&phi, KernelId::HilbertH, z, &rule);
        println!("z = {z:.2}: P {:.10} (|Δ| {:.1e})  H {:.10} (|Δ| {:.1e})", p[k], (p[k] - pd).norm(), h[k], (h[k] - hd).norm());
    }
    Ok(())
}
