//! File writers. CSV numbers carry 17 significant digits so that runs can be
//! diffed exactly; OBJ meshes are ASCII with `v`, `vn` and `f` records.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::diskfield::DiskGrid;
use crate::weierstrass::SurfaceSample;
use crate::Result;

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    Ok(BufWriter::new(fs::File::create(path)?))
}

pub fn write_json(path: &Path, value: &serde_json::Value) -> Result<()> {
    let mut f = create(path)?;
    serde_json::to_writer_pretty(&mut f, value).map_err(std::io::Error::other)?;
    writeln!(f)?;
    f.flush()?;
    Ok(())
}

/// `{:.16e}`: 17 significant digits, round-trip exact.
pub fn fmt_full(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_csv(path: &Path, header: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> Result<()> {
    let mut f = create(path)?;
    writeln!(f, "{}", header.join(","))?;
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_full).collect();
        writeln!(f, "{}", cells.join(","))?;
    }
    f.flush()?;
    Ok(())
}

/// `samples[0]` is the centre, followed by the grid nodes in ring-major order.
/// Faces fan from the centre to the first ring and split each annular cell
/// into two triangles.
pub fn write_obj(path: &Path, samples: &[SurfaceSample], grid: &DiskGrid) -> Result<()> {
    let (nr, na) = (grid.n_radial(), grid.n_angular());
    assert_eq!(samples.len(), nr * na + 1, "centre plus one sample per node");
    let mut f = create(path)?;
    writeln!(f, "# minimal graph: {} vertices", samples.len())?;
    for s in samples {
        let p = s.position;
        writeln!(f, "v {} {} {}", fmt_full(p[0]), fmt_full(p[1]), fmt_full(p[2]))?;
    }
    for s in samples {
        let n = s.normal;
        writeln!(f, "vn {} {} {}", fmt_full(n[0]), fmt_full(n[1]), fmt_full(n[2]))?;
    }
    let id = |i: usize, j: usize| 2 + grid.index(i, j % na);
    let mut face = |a: usize, b: usize, c: usize| writeln!(f, "f {a}//{a} {b}//{b} {c}//{c}");
    for j in 0..na {
        face(1, id(0, j), id(0, j + 1))?;
    }
    for i in 0..nr - 1 {
        for j in 0..na {
            face(id(i, j), id(i + 1, j), id(i + 1, j + 1))?;
            face(id(i, j), id(i + 1, j + 1), id(i, j + 1))?;
        }
    }
    f.flush()?;
    Ok(())
}
