//! Command-line front end: resolve a preset or config file, drive the
//! computation modules over scan grids, and emit deterministic CSV.
//!
//! Output discipline: every run produces one text document consisting of a
//! `#`-comment header with the fully resolved configuration (never
//! timestamps or thread counts), the data rows with 17-significant-digit
//! lowercase scientific floats, and optional trailing `# summary` comment
//! lines. A fixed configuration therefore yields byte-identical output
//! regardless of parallelism.
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 numerical
//! non-convergence.

use crate::am::{self, CavityError, CavitySpec, WallModel};
use crate::classical::{
    self, force_density, liquid_rise_height, surface_stress_jump, DiscreteFieldState,
    LiquidRiseSpec, TensorKind, UniformFieldRegion,
};
use crate::config::{geometric_grid, ConfigError, RunConfig, SectionReader};
use crate::engine::QuadratureSpec;
use crate::library::{describe_model, LibraryError, MaterialLibrary};
use crate::presets;
use crate::rw;
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("exactly one of --preset or --config must be given")]
    PresetOrConfig,
    #[error("unknown preset {0:?}; available: {1}")]
    UnknownPreset(String, String),
    #[error("preset {0:?} does not define a {1} run")]
    PresetWrongCommand(String, &'static str),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Library(#[from] LibraryError),
    #[error(transparent)]
    Cavity(#[from] CavityError),
    #[error(transparent)]
    Rw(#[from] rw::RwError),
    #[error(transparent)]
    Classical(#[from] classical::ClassicalError),
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Parser)]
#[command(
    name = "casimir",
    version,
    about = "Cavity stress calculations under two electromagnetic stress tensors"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Cavity pressure over a separation scan.
    Pressure(CommonArgs),
    /// Position-resolved gap stress profile.
    RwProfile(CommonArgs),
    /// Interface stress against a list of hard transverse cutoffs.
    CutoffScan(CommonArgs),
    /// Power law of the position-dependent stress share near a wall.
    NearInterface(CommonArgs),
    /// Classical condenser diagnostics: rise height, stress jumps and an
    /// optional force-density grid.
    Classical(CommonArgs),
    /// Dielectric liquid rise height only.
    LiquidRise(CommonArgs),
}

#[derive(Debug, Args, Clone)]
pub struct CommonArgs {
    /// Run configuration file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Built-in preset name.
    #[arg(long)]
    pub preset: Option<String>,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for scan grids (does not change results).
    #[arg(long, default_value_t = 1)]
    pub threads: usize,
    /// Relative tolerance override.
    #[arg(long)]
    pub tolerance: Option<f64>,
}

/// Rendered run: the output document plus convergence status.
#[derive(Debug)]
pub struct CommandOutput {
    pub text: String,
    pub all_converged: bool,
    pub warnings: Vec<String>,
}

pub fn run_from_env() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    run(cli)
}

pub fn run(cli: Cli) -> i32 {
    let args = common_args(&cli.command).clone();
    match execute(&cli.command) {
        Ok(output) => {
            for w in &output.warnings {
                eprintln!("warning: {w}");
            }
            let write_result = match &args.out {
                Some(path) => std::fs::write(path, output.text.as_bytes()),
                None => {
                    print!("{}", output.text);
                    Ok(())
                }
            };
            if let Err(e) = write_result {
                eprintln!("error: cannot write output: {e}");
                return 1;
            }
            if output.all_converged {
                0
            } else {
                eprintln!("warning: at least one grid point did not converge");
                2
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

fn common_args(cmd: &Command) -> &CommonArgs {
    match cmd {
        Command::Pressure(a)
        | Command::RwProfile(a)
        | Command::CutoffScan(a)
        | Command::NearInterface(a)
        | Command::Classical(a)
        | Command::LiquidRise(a) => a,
    }
}

/// Runs one subcommand to a rendered document. This is the testable core;
/// [`run`] only adds argument parsing and IO.
pub fn execute(cmd: &Command) -> Result<CommandOutput, CliError> {
    let args = common_args(cmd);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads.max(1))
        .build()
        .map_err(|e| CliError::Invalid(format!("cannot build thread pool: {e}")))?;
    pool.install(|| match cmd {
        Command::Pressure(a) => cmd_pressure(a),
        Command::RwProfile(a) => cmd_rw_profile(a),
        Command::CutoffScan(a) => cmd_cutoff_scan(a),
        Command::NearInterface(a) => cmd_near_interface(a),
        Command::Classical(a) => cmd_classical(a),
        Command::LiquidRise(a) => cmd_liquid_rise(a),
    })
}

fn fmt17(x: f64) -> String {
    format!("{x:.16e}")
}

fn header(lines: &mut String, command: &str, entries: &[(&str, String)]) {
    let _ = writeln!(
        lines,
        "# casimir-stress {} `{}` run",
        env!("CARGO_PKG_VERSION"),
        command
    );
    for (k, v) in entries {
        let _ = writeln!(lines, "# {k} = {v}");
    }
}

fn load_library(cfg: &RunConfig, config_path: &std::path::Path) -> Result<MaterialLibrary, CliError> {
    match cfg.materials_path() {
        None => Ok(MaterialLibrary::new()),
        Some(p) => {
            let path = if p.is_relative() {
                config_path.parent().unwrap_or(std::path::Path::new(".")).join(p)
            } else {
                p
            };
            Ok(MaterialLibrary::load(&path)?)
        }
    }
}

struct ResolvedCavity {
    wall: WallModel,
    wall_label: String,
    gap: crate::materials::PermittivityModel,
    gap_label: String,
    temperature: f64,
}

impl ResolvedCavity {
    fn from_preset(p: &presets::CavityPreset) -> Self {
        Self {
            wall: p.wall.clone(),
            wall_label: p.wall_label.to_string(),
            gap: p.gap.clone(),
            gap_label: p.gap_label.to_string(),
            temperature: p.temperature,
        }
    }

    fn from_section(s: &SectionReader, lib: &MaterialLibrary) -> Result<Self, CliError> {
        let wall_name = s.get_str("wall")?;
        let (wall, wall_label) = if wall_name == "ideal-metal" {
            (WallModel::IdealMetal, "ideal-metal".to_string())
        } else {
            let m = lib.get(&wall_name)?;
            let label = describe_model(&m);
            (WallModel::Material(m), label)
        };
        let gap = lib.get(&s.get_str("gap")?)?;
        let gap_label = describe_model(&gap);
        let temperature = s.get_f64("temperature")?;
        Ok(Self {
            wall,
            wall_label,
            gap,
            gap_label,
            temperature,
        })
    }

    fn cavity(&self, a: f64) -> Result<CavitySpec, CavityError> {
        CavitySpec::new(a, self.temperature, self.wall.clone(), self.gap.clone())
    }

    fn header_entries(&self, a_label: (&'static str, String)) -> Vec<(&'static str, String)> {
        vec![
            ("wall", self.wall_label.clone()),
            ("gap", self.gap_label.clone()),
            ("temperature_K", format!("{}", self.temperature)),
            (a_label.0, a_label.1),
        ]
    }
}

fn dilute_warnings(cavity: &CavitySpec) -> Vec<String> {
    let bad = cavity.dilute_gap_violations();
    if bad.is_empty() {
        Vec::new()
    } else {
        vec![format!(
            "gap is not more dilute than the walls at {} sampled frequencies (first at zeta = {:.3e} rad/s); the attraction sign is not guaranteed",
            bad.len(),
            bad[0]
        )]
    }
}

fn quadrature_spec(tolerance: Option<f64>, section_tol: Option<f64>) -> QuadratureSpec {
    let mut spec = QuadratureSpec::default();
    if let Some(t) = section_tol {
        spec.rel_tol = t;
    }
    if let Some(t) = tolerance {
        spec.rel_tol = t;
    }
    spec
}

/// Optional `max_evals` / `max_terms` budget keys of a cavity section.
fn apply_budget_overrides(s: &SectionReader, spec: &mut QuadratureSpec) -> Result<(), CliError> {
    if let Some(n) = s.opt_usize("max_evals")? {
        spec.max_quadrature_evals_per_term = n;
    }
    if let Some(n) = s.opt_usize("max_terms")? {
        spec.max_matsubara_terms = n;
    }
    Ok(())
}

enum Source {
    Preset(String),
    Config(PathBuf, RunConfig, MaterialLibrary),
}

fn source(args: &CommonArgs) -> Result<Source, CliError> {
    match (&args.preset, &args.config) {
        (Some(p), None) => Ok(Source::Preset(p.clone())),
        (None, Some(path)) => {
            let cfg = RunConfig::load(path)?;
            let lib = load_library(&cfg, path)?;
            Ok(Source::Config(path.clone(), cfg, lib))
        }
        _ => Err(CliError::PresetOrConfig),
    }
}

fn preset_names() -> String {
    presets::CAVITY_PRESET_NAMES.join(", ") + ", water-condenser"
}

fn need_cavity_preset(name: &str) -> Result<presets::CavityPreset, CliError> {
    presets::cavity_preset(name)
        .ok_or_else(|| CliError::UnknownPreset(name.to_string(), preset_names()))
}

// ---------------------------------------------------------------- pressure

fn cmd_pressure(args: &CommonArgs) -> Result<CommandOutput, CliError> {
    let (resolved, widths, spec) = match source(args)? {
        Source::Preset(name) => {
            let p = need_cavity_preset(&name)?;
            (
                ResolvedCavity::from_preset(&p),
                p.gap_widths.clone(),
                quadrature_spec(args.tolerance, None),
            )
        }
        Source::Config(_, cfg, lib) => {
            let s = cfg.section("pressure")?;
            let resolved = ResolvedCavity::from_section(&s, &lib)?;
            let widths = read_scan_grid(&s, "a", "a_min", "a_max", "a_points", "a_list")?;
            let tol = s.opt_f64("rel_tol")?;
            let mut spec = quadrature_spec(args.tolerance, tol);
            apply_budget_overrides(&s, &mut spec)?;
            s.finish()?;
            (resolved, widths, spec)
        }
    };
    if widths.is_empty() {
        return Err(CliError::Invalid("empty separation grid".into()));
    }

    let mut warnings = dilute_warnings(&resolved.cavity(widths[0])?);

    let results: Vec<Result<am::PressureResult, CavityError>> = widths
        .par_iter()
        .map(|&a| am::am_pressure(&resolved.cavity(a)?, &spec))
        .collect();

    let mut text = String::new();
    let mut entries = resolved.header_entries((
        "a_m",
        widths.iter().map(|a| fmt17(*a)).collect::<Vec<_>>().join(","),
    ));
    entries.push(("rel_tol", format!("{:e}", spec.rel_tol)));
    header(&mut text, "pressure", &entries);
    let _ = writeln!(text, "a_m,temperature_K,pressure_Pa,error_Pa,te_part_Pa,tm_part_Pa");

    let mut all_converged = true;
    for (a, r) in widths.iter().zip(results) {
        let r = r?;
        all_converged &= r.report.converged;
        let _ = writeln!(
            text,
            "{},{},{},{},{},{}",
            fmt17(*a),
            fmt17(resolved.temperature),
            fmt17(r.pressure),
            fmt17(r.error),
            fmt17(r.te_part),
            fmt17(r.tm_part)
        );
    }
    if !all_converged {
        warnings.push("pressure scan contains non-converged points".into());
    }
    Ok(CommandOutput {
        text,
        all_converged,
        warnings,
    })
}

fn read_scan_grid(
    s: &SectionReader,
    single: &str,
    lo: &str,
    hi: &str,
    points: &str,
    list: &str,
) -> Result<Vec<f64>, CliError> {
    if let Some(values) = s.opt_f64_list(list)? {
        return Ok(values);
    }
    if let Some(v) = s.opt_f64(single)? {
        return Ok(vec![v]);
    }
    match (s.opt_f64(lo)?, s.opt_f64(hi)?, s.opt_usize(points)?) {
        (Some(a), Some(b), Some(n)) => Ok(geometric_grid(a, b, n)),
        _ => Err(CliError::Invalid(format!(
            "give `{single}`, `{list}`, or all of `{lo}`/`{hi}`/`{points}`"
        ))),
    }
}

// -------------------------------------------------------------- rw-profile

fn default_profile_grid(a: f64, points: usize) -> Vec<f64> {
    (1..=points).map(|i| a * i as f64 / (points + 1) as f64).collect()
}

fn cmd_rw_profile(args: &CommonArgs) -> Result<CommandOutput, CliError> {
    let (resolved, a, grid, spec) = match source(args)? {
        Source::Preset(name) => {
            let p = need_cavity_preset(&name)?;
            let a = p.default_gap_width();
            (
                ResolvedCavity::from_preset(&p),
                a,
                default_profile_grid(a, 21),
                quadrature_spec(args.tolerance, None),
            )
        }
        Source::Config(_, cfg, lib) => {
            let s = cfg.section("rw-profile")?;
            let resolved = ResolvedCavity::from_section(&s, &lib)?;
            let a = s.get_f64("a")?;
            let grid = match s.opt_f64_list("z_list")? {
                Some(zs) => zs,
                None => default_profile_grid(a, s.opt_usize("z_points")?.unwrap_or(21)),
            };
            let tol = s.opt_f64("rel_tol")?;
            s.finish()?;
            (resolved, a, grid, quadrature_spec(args.tolerance, tol))
        }
    };

    let cavity = resolved.cavity(a)?;
    let warnings = dilute_warnings(&cavity);
    let profile = rw::rw_profile(&cavity, &grid, &spec)?;

    let mut text = String::new();
    let mut entries = resolved.header_entries(("a_m", fmt17(a)));
    entries.push(("rel_tol", format!("{:e}", spec.rel_tol)));
    entries.push(("z_points", format!("{}", grid.len())));
    header(&mut text, "rw-profile", &entries);
    let _ = writeln!(text, "z_m,t_zz_rw_Pa,error_Pa");
    for i in 0..grid.len() {
        let _ = writeln!(
            text,
            "{},{},{}",
            fmt17(profile.z_grid[i]),
            fmt17(profile.values[i]),
            fmt17(profile.per_point_error[i])
        );
    }

    // symmetry residual over mirror pairs of the grid
    let peak = profile.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut residual = 0.0f64;
    for (i, &z) in grid.iter().enumerate() {
        if let Some(j) = grid.iter().position(|&w| (w - (a - z)).abs() <= 1e-9 * a) {
            residual = residual.max((profile.values[i] - profile.values[j]).abs());
        }
    }
    let rel_residual = if peak > 0.0 { residual / peak } else { 0.0 };
    let spread = profile.values.iter().fold(f64::NEG_INFINITY, |m, v| m.max(*v))
        - profile.values.iter().fold(f64::INFINITY, |m, v| m.min(*v));
    let max_err = profile
        .per_point_error
        .iter()
        .fold(0.0f64, |m, e| m.max(*e));
    let flat = spread <= 10.0 * max_err;
    let _ = writeln!(text, "# summary symmetry_residual = {}", fmt17(rel_residual));
    let _ = writeln!(text, "# summary flat_profile = {flat}");
    let _ = writeln!(text, "# summary converged = {}", profile.report.converged);

    Ok(CommandOutput {
        text,
        all_converged: profile.report.converged,
        warnings,
    })
}

// ------------------------------------------------------------- cutoff-scan

fn cmd_cutoff_scan(args: &CommonArgs) -> Result<CommandOutput, CliError> {
    let (resolved, a, z, lambdas, spec) = match source(args)? {
        Source::Preset(name) => {
            let p = need_cavity_preset(&name)?;
            let a = p.default_gap_width();
            let lambdas = geometric_grid(100.0 / a, 1000.0 / a, 11);
            (
                ResolvedCavity::from_preset(&p),
                a,
                0.0,
                lambdas,
                quadrature_spec(args.tolerance, None),
            )
        }
        Source::Config(_, cfg, lib) => {
            let s = cfg.section("cutoff-scan")?;
            let resolved = ResolvedCavity::from_section(&s, &lib)?;
            let a = s.get_f64("a")?;
            let z = s.opt_f64("z")?.unwrap_or(0.0);
            let lambdas = read_scan_grid(
                &s,
                "lambda",
                "lambda_min",
                "lambda_max",
                "lambda_points",
                "lambda_list",
            )?;
            let tol = s.opt_f64("rel_tol")?;
            s.finish()?;
            (resolved, a, z, lambdas, quadrature_spec(args.tolerance, tol))
        }
    };

    let cavity = resolved.cavity(a)?;
    let warnings = dilute_warnings(&cavity);
    let scan = rw::cutoff_scan(&cavity, z, &lambdas, &spec)?;

    let mut text = String::new();
    let mut entries = resolved.header_entries(("a_m", fmt17(a)));
    entries.push(("z_m", fmt17(z)));
    entries.push(("rel_tol", format!("{:e}", spec.rel_tol)));
    entries.push(("cutoffs", format!("{}", lambdas.len())));
    header(&mut text, "cutoff-scan", &entries);
    let _ = writeln!(text, "lambda_per_m,t_zz_rw_Pa");
    for (l, v) in scan.cutoffs.iter().zip(scan.values.iter()) {
        let _ = writeln!(text, "{},{}", fmt17(*l), fmt17(*v));
    }
    let _ = writeln!(text, "# fit intercept_Pa = {}", fmt17(scan.intercept));
    let _ = writeln!(text, "# fit slope_Pa_m = {}", fmt17(scan.slope));
    let _ = writeln!(text, "# fit slope_stderr_Pa_m = {}", fmt17(scan.slope_stderr));
    let _ = writeln!(text, "# fit correlation = {}", fmt17(scan.correlation));
    let _ = writeln!(text, "# fit modes_used = {}", scan.modes_used);
    if let Some(analytic) = scan.analytic_slope {
        let _ = writeln!(text, "# fit analytic_slope_Pa_m = {}", fmt17(analytic));
        let deviation = if analytic != 0.0 {
            (scan.slope - analytic).abs() / analytic.abs()
        } else {
            scan.slope.abs()
        };
        let _ = writeln!(text, "# fit slope_rel_deviation = {}", fmt17(deviation));
    }
    let lambda_max = scan.cutoffs.last().copied().unwrap_or(0.0);
    let insensitive = scan.intercept != 0.0
        && (scan.slope * lambda_max / scan.intercept).abs() < 1e-4;
    let _ = writeln!(text, "# summary cutoff_insensitive = {insensitive}");

    Ok(CommandOutput {
        text,
        all_converged: true,
        warnings,
    })
}

// ---------------------------------------------------------- near-interface

fn cmd_near_interface(args: &CommonArgs) -> Result<CommandOutput, CliError> {
    let (resolved, a, zs, spec) = match source(args)? {
        Source::Preset(name) => {
            let p = need_cavity_preset(&name)?;
            let a = p.default_gap_width();
            let zs = geometric_grid(a * 1e-4, a * 1e-2, 9);
            (
                ResolvedCavity::from_preset(&p),
                a,
                zs,
                quadrature_spec(args.tolerance, None),
            )
        }
        Source::Config(_, cfg, lib) => {
            let s = cfg.section("near-interface")?;
            let resolved = ResolvedCavity::from_section(&s, &lib)?;
            let a = s.get_f64("a")?;
            let lo = s.opt_f64("z_min_frac")?.unwrap_or(1e-4);
            let hi = s.opt_f64("z_max_frac")?.unwrap_or(1e-2);
            let n = s.opt_usize("z_points")?.unwrap_or(9);
            let tol = s.opt_f64("rel_tol")?;
            s.finish()?;
            (
                resolved,
                a,
                geometric_grid(a * lo, a * hi, n),
                quadrature_spec(args.tolerance, tol),
            )
        }
    };

    let cavity = resolved.cavity(a)?;
    let warnings = dilute_warnings(&cavity);
    let growth = rw::near_interface_growth(&cavity, &zs, &spec)?;

    let mut text = String::new();
    let mut entries = resolved.header_entries(("a_m", fmt17(a)));
    entries.push(("rel_tol", format!("{:e}", spec.rel_tol)));
    header(&mut text, "near-interface", &entries);
    let _ = writeln!(text, "z_m,position_part_Pa");
    match growth {
        rw::GrowthDiagnostic::NoDivergentPart => {
            let _ = writeln!(text, "# summary divergent_part = none");
        }
        rw::GrowthDiagnostic::Fit(fit) => {
            for (z, v) in &fit.samples {
                let _ = writeln!(text, "{},{}", fmt17(*z), fmt17(*v));
            }
            let _ = writeln!(text, "# fit exponent = {}", fmt17(fit.exponent));
            let _ = writeln!(text, "# fit exponent_stderr = {}", fmt17(fit.exponent_stderr));
            let _ = writeln!(text, "# fit matsubara_mode = {}", fit.mode);
        }
    }
    Ok(CommandOutput {
        text,
        all_converged: true,
        warnings,
    })
}

// --------------------------------------------------------------- classical

struct ClassicalParams {
    rise: LiquidRiseSpec,
    /// Optional smooth-ramp force-density grid: cells along the ramp.
    ramp_cells: Option<usize>,
    /// Optional state file to load instead of the built ramp.
    state_in: Option<PathBuf>,
}

fn read_rise(s: &SectionReader) -> Result<LiquidRiseSpec, CliError> {
    Ok(LiquidRiseSpec::new(
        s.get_f64("eps")?,
        s.get_f64("e_field")?,
        s.get_f64("rho_mass")?,
        s.get_f64("g")?,
    )?)
}

fn cmd_classical(args: &CommonArgs) -> Result<CommandOutput, CliError> {
    let params = match source(args)? {
        Source::Preset(name) => {
            if name != "water-condenser" {
                return Err(CliError::PresetWrongCommand(name, "classical"));
            }
            ClassicalParams {
                rise: presets::water_condenser(),
                ramp_cells: None,
                state_in: None,
            }
        }
        Source::Config(path, cfg, _lib) => {
            let s = cfg.section("classical")?;
            let rise = read_rise(&s)?;
            let ramp_cells = s.opt_usize("ramp_cells")?;
            let state_in = s.opt_str("state_in")?.map(|p| {
                let p = PathBuf::from(p);
                if p.is_relative() {
                    path.parent().unwrap_or(std::path::Path::new(".")).join(p)
                } else {
                    p
                }
            });
            s.finish()?;
            ClassicalParams {
                rise,
                ramp_cells,
                state_in,
            }
        }
    };

    let rise = params.rise;
    let h = liquid_rise_height(&rise);
    let liquid = UniformFieldRegion::electrostatic([rise.e_field, 0.0, 0.0], rise.eps)?;
    let vacuum = UniformFieldRegion::electrostatic([rise.e_field, 0.0, 0.0], 1.0)?;
    let up = [0.0, 0.0, 1.0];
    let am_jump = surface_stress_jump(TensorKind::AbrahamMinkowski, &liquid, &vacuum, up)?;
    let rw_jump = surface_stress_jump(TensorKind::RaabeWelsch, &liquid, &vacuum, up)?;
    let mismatch = classical::tangential_mismatch(&liquid, &vacuum, up);

    let mut warnings = Vec::new();
    if mismatch > 0.0 {
        warnings.push(format!(
            "tangential E differs across the surface by {mismatch:e} V/m"
        ));
    }

    let mut text = String::new();
    header(
        &mut text,
        "classical",
        &[
            ("eps", format!("{}", rise.eps)),
            ("e_field_V_per_m", format!("{}", rise.e_field)),
            ("rho_mass_kg_per_m3", format!("{}", rise.rho_mass)),
            ("g_m_per_s2", format!("{}", rise.g)),
        ],
    );
    let _ = writeln!(text, "# summary rise_height_m = {}", fmt17(h));
    let _ = writeln!(text, "# summary am_surface_jump_Pa = {}", fmt17(am_jump));
    let _ = writeln!(text, "# summary rw_surface_jump_Pa = {}", fmt17(rw_jump));

    // optional force-density grid: either a loaded state or a built ramp
    let state = if let Some(path) = &params.state_in {
        let file = std::fs::File::open(path)?;
        Some(DiscreteFieldState::read_columns(std::io::BufReader::new(file))?)
    } else if let Some(cells) = params.ramp_cells {
        Some(build_ramp_state(&rise, cells)?)
    } else {
        None
    };
    if let Some(state) = state {
        let f_am = force_density(TensorKind::AbrahamMinkowski, &state)?;
        let f_rw = force_density(TensorKind::RaabeWelsch, &state)?;
        let _ = writeln!(
            text,
            "i,j,k,f_am_x,f_am_y,f_am_z,f_rw_x,f_rw_y,f_rw_z"
        );
        for i in 0..state.nx {
            for j in 0..state.ny {
                for k in 0..state.nz {
                    let c = state.idx(i, j, k);
                    let _ = writeln!(
                        text,
                        "{i},{j},{k},{},{},{},{},{},{}",
                        fmt17(f_am[c][0]),
                        fmt17(f_am[c][1]),
                        fmt17(f_am[c][2]),
                        fmt17(f_rw[c][0]),
                        fmt17(f_rw[c][1]),
                        fmt17(f_rw[c][2])
                    );
                }
            }
        }
    }

    Ok(CommandOutput {
        text,
        all_converged: true,
        warnings,
    })
}

/// A smooth ε ramp from vacuum up to the liquid value under a horizontal
/// field: the boundary-layer stand-in used for grid demonstrations.
fn build_ramp_state(rise: &LiquidRiseSpec, cells: usize) -> Result<DiscreteFieldState, CliError> {
    let n = cells.max(8);
    let spacing = 1e-3 / (n as f64);
    let mut st = DiscreteFieldState::new(3, 3, n, spacing)?;
    let span = (n - 1) as f64;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..n {
                let s = k as f64 / span;
                let smooth = s * s * (3.0 - 2.0 * s);
                let c = st.idx(i, j, k);
                st.e[c] = [rise.e_field, 0.0, 0.0];
                st.eps[c] = 1.0 + (rise.eps - 1.0) * smooth;
            }
        }
    }
    st.set_linear_polarisation();
    Ok(st)
}

// ------------------------------------------------------------- liquid-rise

fn cmd_liquid_rise(args: &CommonArgs) -> Result<CommandOutput, CliError> {
    let rise = match source(args)? {
        Source::Preset(name) => {
            if name != "water-condenser" {
                return Err(CliError::PresetWrongCommand(name, "liquid-rise"));
            }
            presets::water_condenser()
        }
        Source::Config(_, cfg, _lib) => {
            let s = cfg.section("liquid-rise")?;
            let rise = read_rise(&s)?;
            s.finish()?;
            rise
        }
    };
    let h = liquid_rise_height(&rise);
    let mut text = String::new();
    header(
        &mut text,
        "liquid-rise",
        &[
            ("eps", format!("{}", rise.eps)),
            ("e_field_V_per_m", format!("{}", rise.e_field)),
            ("rho_mass_kg_per_m3", format!("{}", rise.rho_mass)),
            ("g_m_per_s2", format!("{}", rise.g)),
        ],
    );
    let _ = writeln!(text, "eps,e_field_V_per_m,rho_mass_kg_per_m3,g_m_per_s2,height_m");
    let _ = writeln!(
        text,
        "{},{},{},{},{}",
        fmt17(rise.eps),
        fmt17(rise.e_field),
        fmt17(rise.rho_mass),
        fmt17(rise.g),
        fmt17(h)
    );
    Ok(CommandOutput {
        text,
        all_converged: true,
        warnings: Vec::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn preset_args(preset: &str, threads: usize) -> CommonArgs {
        CommonArgs {
            config: None,
            preset: Some(preset.to_string()),
            out: None,
            threads,
            tolerance: None,
        }
    }

    #[test]
    fn pressure_preset_runs_and_formats() {
        let out = execute(&Command::Pressure(preset_args("dilute-gap-demo", 1))).unwrap();
        assert!(out.all_converged);
        assert!(out.text.contains("a_m,temperature_K,pressure_Pa"));
        // 17 significant digits, lowercase scientific
        let data_line = out
            .text
            .lines()
            .find(|l| l.starts_with(|c: char| c.is_ascii_digit()) && l.contains(','))
            .unwrap();
        assert!(data_line.contains("e-"));
        assert!(!data_line.contains('E'));
    }

    #[test]
    fn ideal_metal_preset_reproduces_reference_row() {
        let out = execute(&Command::Pressure(preset_args("ideal-metal-vacuum", 1))).unwrap();
        // the a = 1 um row carries the familiar -1.3001e-3 Pa
        let row = out
            .text
            .lines()
            .filter(|l| l.starts_with(|c: char| c.is_ascii_digit()))
            .find(|l| {
                let a: f64 = l.split(',').next().unwrap().parse().unwrap();
                (a / 1e-6 - 1.0).abs() < 1e-12
            })
            .expect("1 um row");
        let p: f64 = row.split(',').nth(2).unwrap().parse().unwrap();
        assert!((p / -1.3001257732443655e-3 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn unknown_preset_is_usage_error() {
        let err = execute(&Command::Pressure(preset_args("bogus", 1))).unwrap_err();
        assert!(matches!(err, CliError::UnknownPreset(..)));
    }

    #[test]
    fn preset_and_config_are_mutually_exclusive() {
        let mut args = preset_args("dilute-gap-demo", 1);
        args.config = Some("/nonexistent".into());
        assert!(matches!(
            execute(&Command::Pressure(args)),
            Err(CliError::PresetOrConfig)
        ));
        let none = CommonArgs {
            config: None,
            preset: None,
            out: None,
            threads: 1,
            tolerance: None,
        };
        assert!(matches!(
            execute(&Command::Pressure(none)),
            Err(CliError::PresetOrConfig)
        ));
    }

    #[test]
    fn liquid_rise_preset_value() {
        let out = execute(&Command::LiquidRise(preset_args("water-condenser", 1))).unwrap();
        assert!(out.text.contains("3.5651418818103978e-2"));
    }

    #[test]
    fn classical_preset_prints_zero_rw_jump() {
        let out = execute(&Command::Classical(preset_args("water-condenser", 1))).unwrap();
        assert!(out.text.contains("rw_surface_jump_Pa = 0.0000000000000000e0"));
        assert!(out.text.contains("rise_height_m = 3.5651418818103978e-2"));
    }

    #[test]
    fn rw_profile_vacuum_gap_is_flat() {
        let out = execute(&Command::RwProfile(preset_args("gold-vacuum", 1))).unwrap();
        assert!(out.text.contains("# summary flat_profile = true"));
        assert!(out.text.contains("# summary symmetry_residual = 0.0000000000000000e0"));
    }

    #[test]
    fn thread_count_does_not_change_bytes() {
        for cmd in [
            Command::Pressure(preset_args("ideal-metal-vacuum", 1)),
            Command::RwProfile(preset_args("dilute-gap-demo", 1)),
            Command::CutoffScan(preset_args("dilute-gap-demo", 1)),
        ] {
            let one = execute(&cmd).unwrap().text;
            let eight = match cmd {
                Command::Pressure(a) => {
                    execute(&Command::Pressure(CommonArgs { threads: 8, ..a })).unwrap().text
                }
                Command::RwProfile(a) => {
                    execute(&Command::RwProfile(CommonArgs { threads: 8, ..a })).unwrap().text
                }
                Command::CutoffScan(a) => {
                    execute(&Command::CutoffScan(CommonArgs { threads: 8, ..a })).unwrap().text
                }
                _ => unreachable!(),
            };
            assert_eq!(one, eight);
        }
    }
}
