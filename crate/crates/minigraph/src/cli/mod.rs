//! Command-line front end: run configuration, experiment drivers and writers
//! for JSON reports, CSV tables and OBJ meshes.
//!
//! Every command reads a [`RunConfig`] (defaults, optionally overlaid by a TOML
//! file, then by flags), runs to completion and writes its outputs under the
//! configured directory. Reports carry a SHA-256 of the effective config.

mod config;
mod output;

use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::json;

pub use config::{parse_w, RunConfig};
pub use output::{write_csv, write_json, write_obj};

use crate::beltrami::{extract_coefficients, solve_fixed_point, BeltramiCoefficient, SolvedMap};
use crate::bounds::{self, ConstantsRegistry};
use crate::diskfield::{finite_difference_hessian, DiskGrid};
use crate::scherk::{self, k_sweep_extrapolate, match_quadrilateral};
use crate::transforms::SpectralOperator;
use crate::weierstrass::{
    cross_check, curvature_at_origin_family, parameterize_surface, reconstruct_graph, sample_at_origin, FamilyParameter,
    WeierstrassData,
};
use crate::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Parser)]
#[command(name = "minigraph", version, about = "Minimal graphs over the disk and their curvature at the centre")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct Common {
    /// TOML run configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Solver grid as NRxNA.
    #[arg(long)]
    pub grid: Option<String>,
    /// Fixed-point tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// printed, conjugated or auto.
    #[arg(long)]
    pub variant: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve one family member and report f_z(0), K(0) and residuals.
    Solve {
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long)]
        k: f64,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep k at fixed w and extrapolate |K_k(0)| to k = 1.
    SweepK {
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        /// Comma-separated k values (defaults to the config's k_list).
        #[arg(long, value_delimiter = ',')]
        k: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Step construction over the config's w grid: f_z(0), c0, c1 per point.
    SweepW {
        #[command(flatten)]
        common: Common,
    },
    /// Heinz and Hopf estimates over the w grid, with the constants registry.
    Constants {
        #[command(flatten)]
        common: Common,
    },
    /// The closed-form Hopf bound and its quartic.
    Theorem2 {
        #[command(flatten)]
        common: Common,
    },
    /// Mesh of the minimal graph for one family member, as OBJ.
    ExportSurface {
        #[arg(long, allow_hyphen_values = true)]
        w: String,
        #[arg(long)]
        k: f64,
        #[command(flatten)]
        common: Common,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Self::Solve { common, .. }
            | Self::SweepK { common, .. }
            | Self::SweepW { common }
            | Self::Constants { common }
            | Self::Theorem2 { common }
            | Self::ExportSurface { common, .. } => common,
        }
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match run(&cli.command) {
        Ok(paths) => {
            for p in paths {
                println!("{}", p.display());
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command; returns the files written.
pub fn run(command: &Command) -> Result<Vec<PathBuf>> {
    let config = RunConfig::resolve(command.common())?;
    match command {
        Command::Solve { w, k, .. } => cmd_solve(&config, parse_w(w)?, *k).map(|r| r.files),
        Command::SweepK { w, k, .. } => {
            let mut config = config;
            if let Some(k) = k {
                config.k_list = k.clone();
                config.validate()?;
            }
            cmd_sweep_k(&config, parse_w(w)?).map(|r| r.files)
        }
        Command::SweepW { .. } => cmd_sweep_w(&config).map(|r| r.files),
        Command::Constants { .. } => cmd_constants(&config).map(|r| r.files),
        Command::Theorem2 { .. } => cmd_theorem2(&config).map(|r| r.files),
        Command::ExportSurface { w, k, .. } => cmd_export_surface(&config, parse_w(w)?, *k).map(|r| r.files),
    }
}

/// A command's JSON report and the files it wrote.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub report: serde_json::Value,
    pub files: Vec<PathBuf>,
}

fn envelope(config: &RunConfig, command: &str, body: serde_json::Value) -> serde_json::Value {
    json!({
        "command": command,
        "version": VERSION,
        "config_hash": config.hash(),
        "result": body,
    })
}

fn operator(grid: (usize, usize)) -> Result<SpectralOperator> {
    Ok(SpectralOperator::new(Arc::new(DiskGrid::build(grid.0, grid.1)?)))
}

fn solve_family(config: &RunConfig, op: &SpectralOperator, param: FamilyParameter) -> Result<SolvedMap> {
    solve_fixed_point(&BeltramiCoefficient::family(param), op, &config.solve_options()?)
}

#[derive(Debug, Clone, Serialize)]
struct HallCheck {
    a1_abs2: f64,
    lhs: f64,
    rhs: f64,
    holds: bool,
    b1_over_a1: Complex64,
    omega_at_0: Complex64,
}

fn hall_check(map: &SolvedMap, w: Complex64) -> Option<HallCheck> {
    let c = extract_coefficients(map).ok()?;
    let a1_abs2 = c.a1.norm_sqr();
    let lhs = a1_abs2 * (1.0 + w.norm().powi(4));
    let rhs = ConstantsRegistry::default().hall_rhs;
    Some(HallCheck { a1_abs2, lhs, rhs, holds: lhs >= rhs, b1_over_a1: c.b1 / c.a1, omega_at_0: map.dilatation.value_at_0() })
}

/// `solve`: one family member on the main grid.
pub fn cmd_solve(config: &RunConfig, w: Complex64, k: f64) -> Result<CommandOutput> {
    let param = FamilyParameter::new(w, k)?;
    let op = operator(config.grid_dims()?)?;
    let map = solve_family(config, &op, param)?;
    let body = json!({
        "w": w,
        "k": k,
        "grid": config.grid,
        "f_z0": map.f_z_at_0,
        "K_at_0": curvature_at_origin_family(&param, map.f_z_at_0)?,
        "residuals": {
            "beltrami": map.residual_norm,
            "fixed_point": map.diagnostics.fixed_point_residual,
            "harmonicity": map.diagnostics.harmonicity_residual,
            "interior_radius": map.diagnostics.interior_radius,
        },
        "iterations": map.iterations,
        "damping": map.diagnostics.damping,
        "variant": map.variant,
        "rejected_variant": map.diagnostics.rejected_variant,
        "rejected_residual": map.diagnostics.rejected_residual,
        "self_map": {
            "holds": map.is_self_map(),
            "boundary_min_modulus": map.diagnostics.boundary_min_modulus,
            "max_modulus": map.diagnostics.max_modulus,
        },
        "hall": hall_check(&map, w),
    });
    let report = envelope(config, "solve", body);
    let path = config.out.join("solve.json");
    write_json(&path, &report)?;
    Ok(CommandOutput { report, files: vec![path] })
}

/// `sweep-k`: CSV of `(k, f_z(0), |𝒦_k(0)|)` plus the extrapolation, compared
/// with the step construction's `c₀(w)`.
pub fn cmd_sweep_k(config: &RunConfig, w: Complex64) -> Result<CommandOutput> {
    FamilyParameter::new(w, 0.0)?;
    let op = operator(config.sweep_grid_dims()?)?;
    let opts = config.solve_options()?;
    let sweep = k_sweep_extrapolate(w, &config.k_list, &op, &opts)?;
    let csv_path = config.out.join("sweep_k.csv");
    write_csv(
        &csv_path,
        &["k", "f_z0", "abs_K0", "residual", "iterations"],
        sweep.rows.iter().map(|r| vec![r.k, r.f_z0, r.curvature, r.residual, r.iterations as f64]),
    )?;
    let step = match_quadrilateral(w, config.match_tol).ok().map(|(b, r)| json!({ "boundary": b, "report": r }));
    let extrapolation = (sweep.rows.len() > 1).then(|| json!({
        "limit": sweep.report.c0,
        "error_estimate": sweep.report.error_estimate,
        "extrapolants": sweep.extrapolants,
        "report": sweep.report,
    }));
    let body = json!({
        "w": w,
        "grid": config.sweep_grid,
        "rows": sweep.rows,
        "extrapolation": extrapolation,
        "step_construction": step,
    });
    let report = envelope(config, "sweep-k", body);
    let json_path = config.out.join("sweep_k.json");
    write_json(&json_path, &report)?;
    Ok(CommandOutput { report, files: vec![csv_path, json_path] })
}

/// `sweep-w`: the step construction at every `w` of the grid.
pub fn cmd_sweep_w(config: &RunConfig) -> Result<CommandOutput> {
    let sup = scherk::sup_sweep(&config.w_values(), config.match_tol)?;
    let csv_path = config.out.join("sweep_w.csv");
    write_csv(
        &csv_path,
        &["w_re", "w_im", "f_z0", "c0", "c1", "pointwise_bound"],
        sup.points.iter().zip(&sup.pointwise_bounds).map(|(p, b)| vec![p.w.re, p.w.im, p.f_z0, p.c0, p.c1, *b]),
    )?;
    let report = envelope(config, "sweep-w", serde_json::to_value(&sup).map_err(json_err)?);
    let json_path = config.out.join("sweep_w.json");
    write_json(&json_path, &report)?;
    Ok(CommandOutput { report, files: vec![csv_path, json_path] })
}

fn json_err(e: serde_json::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

/// `constants`: registry plus Heinz/Hopf estimates over the `w` grid.
pub fn cmd_constants(config: &RunConfig) -> Result<CommandOutput> {
    let registry = ConstantsRegistry::default();
    let body = if config.w_grid.is_empty() {
        json!({ "registry": registry, "registry_ordered": registry.is_ordered() })
    } else {
        let sup = scherk::sup_sweep(&config.w_values(), config.match_tol)?;
        let table: Vec<_> = sup
            .points
            .iter()
            .zip(&sup.pointwise_bounds)
            .map(|(p, b)| json!({ "w": p.w, "f_z0": p.f_z0, "c0": p.c0, "c1": p.c1, "method": p.method, "pointwise_bound": b }))
            .collect();
        json!({
            "heinz_estimate": sup.heinz_estimate,
            "hopf_estimate": sup.hopf_estimate,
            "registry": registry,
            "registry_ordered": registry.is_ordered(),
            "per_w": table,
            "skipped": sup.skipped,
        })
    };
    let report = envelope(config, "constants", body);
    let path = config.out.join("constants.json");
    write_json(&path, &report)?;
    Ok(CommandOutput { report, files: vec![path] })
}

/// `theorem2`: intersection of the two bounding curves and the closed form.
pub fn cmd_theorem2(config: &RunConfig) -> Result<CommandOutput> {
    let q = bounds::intersection_quartic();
    let bound = bounds::closed_form_bound();
    let (x_num, max_num) = bounds::max_of_min_numeric(100_000);
    let body = json!({
        "x_star": q.x_star,
        "y_star": q.y_star,
        "bound": bound,
        "residuals": {
            "quartic": q.quartic_residual,
            "reduced": q.reduced_residual,
            "f1_minus_f2": bounds::f1(q.x_star)? - bounds::f2(q.x_star)?,
        },
        "rejected_roots": q.rejected,
        "numeric_max": { "x": x_num, "value": max_num },
    });
    let report = envelope(config, "theorem2", body);
    let path = config.out.join("theorem2.json");
    write_json(&path, &report)?;
    Ok(CommandOutput { report, files: vec![path] })
}

/// `export-surface`: OBJ mesh with the centre vertex first, then the grid nodes
/// ring by ring; plus a JSON summary cross-checking the curvature at the centre.
pub fn cmd_export_surface(config: &RunConfig, w: Complex64, k: f64) -> Result<CommandOutput> {
    let param = FamilyParameter::new(w, k)?;
    let op = operator(config.grid_dims()?)?;
    let map = Arc::new(solve_family(config, &op, param)?);
    let data = WeierstrassData::from_family(map.clone())?;
    let mut samples = vec![sample_at_origin(&data)?];
    samples.extend(parameterize_surface(&data, op.grid())?);
    let patch = reconstruct_graph(&samples)?;
    let centre = samples[0].position;
    let fd = finite_difference_hessian(&patch, [centre[0], centre[1]])?;
    let obj_path = config.out.join("surface.obj");
    write_obj(&obj_path, &samples, op.grid())?;
    let k_at_0 = curvature_at_origin_family(&param, map.f_z_at_0)?;
    let probes = seeded_probes(config.seed, 10, 0.5);
    let check = if k > 0.0 { Some(cross_check(&data, &samples[1..], &probes)?) } else { None };
    let body = json!({
        "w": w,
        "k": k,
        "grid": config.grid,
        "vertices": samples.len(),
        "K_at_0": k_at_0,
        "finite_difference_K_at_0": fd.gauss_curvature(),
        "finite_difference_f_uv_at_0": fd.f_uv,
        "normal_at_0": samples[0].normal,
        "finite_difference_normal_at_0": fd.upward_normal(),
        "seed": config.seed,
        "probes": probes,
        "cross_check": check,
    });
    let report = envelope(config, "export-surface", body);
    let json_path = config.out.join("surface.json");
    write_json(&json_path, &report)?;
    Ok(CommandOutput { report, files: vec![obj_path, json_path] })
}

/// `count` points uniform in area on `|z| ≤ radius`, from a seeded stream.
pub fn seeded_probes(seed: u64, count: usize, radius: f64) -> Vec<Complex64> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt().max(0.05);
            Complex64::from_polar(r, std::f64::consts::TAU * rng.random::<f64>())
        })
        .collect()
}

/// Default output location relative to the working directory.
pub fn default_out() -> &'static Path {
    Path::new("out")
}
