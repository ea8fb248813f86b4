//! The extremal step maps: for each `w`, the bicentric quadrilateral and
//! prevertices whose harmonic step map has the `k → 1` dilatation, and the
//! resulting `c₀(w)`, `c₁(w)`.
//!
//! `cargo run --release --example scherk_match -- 0 0.3 0.6 0.6,0.6`

use minigraph::cli::parse_w;
use minigraph::scherk::match_quadrilateral;

fn main() -> minigraph::Result<()> {
    let mut ws: Vec<String> = std::env::args().skip(1).collect();
    if ws.is_empty() {
        ws = ["0", "0.3", "0.6", "0.3,0.3"].map(String::from).to_vec();
    }
    println!("{:>16} {:>12} {:>12} {:>12} {:>10}", "w", "f_z(0)", "c0", "c1", "pitot");
    for s in &ws {
        let w = parse_w(s)?;
        let (boundary, report) = match_quadrilateral(w, 1e-10)?;
        println!(
            "{:>16} {:>12.8} {:>12.8} {:>12.8} {:>10.1e}",
            format!("{w:.3}"),
            report.f_z0,
            report.c0,
            report.c1,
            boundary.values().pitot_defect()
        );
        let angles: Vec<String> = boundary.prevertices().iter().map(|t| format!("{t:.6}")).collect();
        let vertices: Vec<String> = boundary.values().vertices().iter().map(|v| format!("{:.6}", v.arg())).collect();
        println!("    prevertices [{}], vertex arguments [{}]", angles.join(", "), vertices.join(", "));
    }
    Ok(())
}
