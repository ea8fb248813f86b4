use std::fs;
use std::path::{Path, PathBuf};

use minigraph::cli::main_with_args;
use serde_json::Value;
use tempfile::TempDir;

/// Small grids so every command finishes in seconds.
const SMALL: &str = r#"
grid = "32x128"
sweep_grid = "32x128"
k_list = [0.3, 0.5, 0.7]
w_grid = [[0.0, 0.0], [0.3, 0.0], [0.0, 0.5]]
"#;

struct Run {
    dir: TempDir,
    config: PathBuf,
}

impl Run {
    fn new(config: &str) -> Self {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.toml");
        fs::write(&path, config).unwrap();
        Self { dir, config: path }
    }

    fn out(&self) -> PathBuf {
        self.dir.path().join("out")
    }

    fn exec(&self, args: &[&str]) -> i32 {
        let out = self.out();
        let mut argv = vec!["minigraph".to_string()];
        argv.extend(args.iter().map(|s| s.to_string()));
        argv.extend(["--config".into(), self.config.display().to_string(), "--out".into(), out.display().to_string()]);
        main_with_args(argv)
    }

    fn json(&self, name: &str) -> Value {
        read_json(&self.out().join(name))
    }
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn hopf_bound_report() {
    let run = Run::new(SMALL);
    assert_eq!(run.exec(&["theorem2"]), 0);
    let v = run.json("theorem2.json");
    assert_eq!(v["command"], "theorem2");
    assert_eq!(v["config_hash"].as_str().unwrap().len(), 64);
    assert!(v["version"].is_string());
    let r = &v["result"];
    assert!((r["bound"].as_f64().unwrap() - 5.53265).abs() < 1e-5);
    assert!(r["residuals"]["quartic"].as_f64().unwrap() <= 1e-12);
}

#[test]
fn solve_identity_and_family_member() {
    let run = Run::new(SMALL);
    assert_eq!(run.exec(&["solve", "--w", "0", "--k", "0"]), 0);
    let r = &run.json("solve.json")["result"];
    assert_eq!(r["f_z0"].as_f64().unwrap(), 1.0);
    assert_eq!(r["K_at_0"].as_f64().unwrap(), 0.0);

    assert_eq!(run.exec(&["solve", "--w", "0.3,-0.1", "--k", "0.5"]), 0);
    let r = &run.json("solve.json")["result"];
    assert!(r["residuals"]["beltrami"].as_f64().unwrap() <= 1e-4);
    assert!(r["K_at_0"].as_f64().unwrap() < 0.0);
    assert_eq!(r["variant"], "conjugated");
    assert_eq!(r["self_map"]["holds"], true);
    assert_eq!(r["hall"]["holds"], true);
    assert!(r["iterations"].as_u64().unwrap() > 0);
}

#[test]
fn validation_exit_codes() {
    let run = Run::new(SMALL);
    assert_eq!(run.exec(&["solve", "--w", "1.0", "--k", "0.5"]), 1);
    assert_eq!(run.exec(&["solve", "--w", "0.6,0.8", "--k", "0.5"]), 1);
    assert_eq!(run.exec(&["solve", "--w", "abc", "--k", "0.5"]), 1);
    assert_eq!(run.exec(&["solve", "--w", "0", "--k", "1.0"]), 1);
    assert_eq!(run.exec(&["solve", "--w", "0", "--k", "0.5", "--grid", "8by32"]), 1);
    assert_eq!(run.exec(&["solve", "--w", "0", "--k", "0.5", "--variant", "other"]), 1);
    assert_eq!(run.exec(&["sweep-k", "--w", "0", "--k", "0.5,0.3"]), 1);
    assert_eq!(run.exec(&["no-such-command"]), 1);
    assert_eq!(Run::new("grid = 5").exec(&["theorem2"]), 1);
    assert_eq!(Run::new("unknown_key = 1").exec(&["theorem2"]), 1);
    // close to the boundary is still a valid parameter
    assert!(minigraph::cli::parse_w("0.99").is_ok());
    assert!(minigraph::cli::parse_w("0.7,-0.7").is_ok());
}

#[test]
fn solver_failure_exit_code() {
    let run = Run::new(&format!("{SMALL}\nmax_iter = 2\nvariant = \"conjugated\"\n"));
    assert_eq!(run.exec(&["solve", "--w", "0.3", "--k", "0.7"]), 2);
}

#[test]
fn io_failure_exit_code() {
    let run = Run::new(SMALL);
    let blocker = run.dir.path().join("blocker");
    fs::write(&blocker, "").unwrap();
    let target = blocker.join("sub");
    let argv = ["minigraph", "theorem2", "--out", target.to_str().unwrap()];
    assert_eq!(main_with_args(argv), 3);
    let missing = run.dir.path().join("missing.toml");
    assert_eq!(main_with_args(["minigraph", "theorem2", "--config", missing.to_str().unwrap()]), 3);
}

#[test]
fn sweep_k_tables() {
    let run = Run::new(SMALL);
    assert_eq!(run.exec(&["sweep-k", "--w", "0", "--k", "0.5"]), 0);
    let csv = fs::read_to_string(run.out().join("sweep_k.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "k,f_z0,abs_K0,residual,iterations");
    assert_eq!(lines.len(), 2);
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cells[0], "5.0000000000000000e-1");
    // 17 significant digits round-trip
    let f: f64 = cells[1].parse().unwrap();
    assert_eq!(format!("{f:.16e}"), cells[1]);
    assert!(run.json("sweep_k.json")["result"]["extrapolation"].is_null());

    assert_eq!(run.exec(&["sweep-k", "--w", "0.3"]), 0);
    let v = run.json("sweep_k.json");
    let rows = v["result"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let curv: Vec<f64> = rows.iter().map(|r| r["curvature"].as_f64().unwrap()).collect();
    assert!(curv.windows(2).all(|p| p[1] > p[0]));
    let c0 = v["result"]["step_construction"]["report"]["c0"].as_f64().unwrap();
    assert!(curv.iter().all(|&k| k < c0));
    assert!(v["result"]["extrapolation"]["limit"].as_f64().unwrap() >= curv[2]);
}

#[test]
fn sweep_w_and_constants() {
    let run = Run::new(SMALL);
    assert_eq!(run.exec(&["sweep-w"]), 0);
    let csv = fs::read_to_string(run.out().join("sweep_w.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    assert_eq!(run.exec(&["constants"]), 0);
    let r = &run.json("constants.json")["result"];
    assert!((r["heinz_estimate"].as_f64().unwrap() - std::f64::consts::PI.powi(2) / 2.0).abs() < 1e-6);
    assert!(r["hopf_estimate"].as_f64().unwrap() >= r["heinz_estimate"].as_f64().unwrap());
    assert_eq!(r["per_w"].as_array().unwrap().len(), 3);
    assert_eq!(r["registry_ordered"], true);

    let empty = Run::new("w_grid = []");
    assert_eq!(empty.exec(&["constants"]), 0);
    let r = &empty.json("constants.json")["result"];
    assert!(r["heinz_estimate"].is_null());
    assert!((r["registry"]["hall_bound"].as_f64().unwrap() - 5.84865).abs() < 1e-5);
}

fn obj_counts(path: &Path) -> (usize, usize, usize, Vec<[f64; 3]>) {
    let text = fs::read_to_string(path).unwrap();
    let mut v = Vec::new();
    let (mut vn, mut f) = (0, 0);
    for line in text.lines() {
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let p: Vec<f64> = it.map(|x| x.parse().unwrap()).collect();
                v.push([p[0], p[1], p[2]]);
            }
            Some("vn") => vn += 1,
            Some("f") => {
                let idx: Vec<usize> = it.map(|t| t.split("//").next().unwrap().parse().unwrap()).collect();
                assert_eq!(idx.len(), 3);
                f += 1;
            }
            _ => {}
        }
    }
    (v.len(), vn, f, v)
}

#[test]
fn export_surface_meshes() {
    let run = Run::new(SMALL);
    assert_eq!(run.exec(&["export-surface", "--w", "0", "--k", "0"]), 0);
    let (nv, nvn, nf, v) = obj_counts(&run.out().join("surface.obj"));
    assert_eq!(nv, 32 * 128 + 1);
    assert_eq!(nvn, nv);
    assert_eq!(nf, 128 + 2 * 31 * 128);
    assert!(v.iter().all(|p| p[2] == 0.0));

    assert_eq!(run.exec(&["export-surface", "--w", "0.3", "--k", "0.5"]), 0);
    let r = &run.json("surface.json")["result"];
    let k0 = r["K_at_0"].as_f64().unwrap();
    let fd = r["finite_difference_K_at_0"].as_f64().unwrap();
    assert!(((fd - k0) / k0).abs() < 0.02, "{fd} vs {k0}");
    assert!(r["cross_check"]["max_relative_curvature_error"].as_f64().unwrap() < 0.01);
    assert_eq!(r["probes"].as_array().unwrap().len(), 10);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let a = Run::new(SMALL);
    let b = Run::new(SMALL);
    for run in [&a, &b] {
        assert_eq!(run.exec(&["sweep-k", "--w", "0.3"]), 0);
        assert_eq!(run.exec(&["export-surface", "--w", "0", "--k", "0.5"]), 0);
    }
    for name in ["sweep_k.csv", "sweep_k.json", "surface.obj", "surface.json"] {
        assert_eq!(fs::read(a.out().join(name)).unwrap(), fs::read(b.out().join(name)).unwrap(), "{name}");
    }
    // a different seed moves only the probes
    let c = Run::new(&format!("{SMALL}\nseed = 7\n"));
    assert_eq!(c.exec(&["export-surface", "--w", "0", "--k", "0.5"]), 0);
    assert_ne!(a.json("surface.json")["result"]["probes"], c.json("surface.json")["result"]["probes"]);
    assert_eq!(fs::read(a.out().join("surface.obj")).unwrap(), fs::read(c.out().join("surface.obj")).unwrap());
}
