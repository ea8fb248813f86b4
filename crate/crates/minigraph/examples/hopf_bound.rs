//! Where the two pointwise bounds cross: the quartic, its root, and the
//! resulting closed-form bound on the Hopf constant.

use minigraph::bounds::{closed_form_bound, f1, f2, intersection_quartic, max_of_min_numeric, BoundCurvePoint};

fn main() -> minigraph::Result<()> {
    let q = intersection_quartic();
    println!("x* = {:.17}  (quartic residual {:.1e})", q.x_star, q.quartic_residual);
    println!("y* = x* + 1/x* = {:.17}", q.y_star);
    for r in &q.rejected {
        println!("rejected {} = {:.6}: {}", r.description, r.value, r.reason);
    }
    println!("f1(x*) = {:.15}, f2(x*) = {:.15}", f1(q.x_star)?, f2(q.x_star)?);
    let (x, m) = max_of_min_numeric(100_000);
    println!("closed form {:.15}, numeric max {m:.15} at x = {x:.10}", closed_form_bound());
    for i in 0..=10 {
        let p = BoundCurvePoint::at(i as f64 * 0.09)?;
        println!("x = {:.2}: f1 = {:8.4}  f2 = {:8.4}  min = {:8.4}", p.x, p.f1, p.f2, p.min_val);
    }
    Ok(())
}
