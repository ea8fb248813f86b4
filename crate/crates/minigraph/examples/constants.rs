//! Known curvature constants and their estimates over a grid of `w`.

use minigraph::bounds::ConstantsRegistry;
use minigraph::scherk::{default_w_grid, sup_sweep};

fn main() -> minigraph::Result<()> {
    let r = ConstantsRegistry::default();
    println!("{r:#?}\nordered: {}", r.is_ordered());
    let sweep = sup_sweep(&default_w_grid(), 1e-10)?;
    for (p, b) in sweep.points.iter().zip(&sweep.pointwise_bounds) {
        println!("|w| = {:.1}: c0 = {:.6}  c1 = {:.6}  bound {:.6}", p.w.norm(), p.c0, p.c1, b);
    }
    println!("sup c0 = {:.8}, sup c1 = {:.8}", sweep.heinz_estimate, sweep.hopf_estimate);
    Ok(())
}
