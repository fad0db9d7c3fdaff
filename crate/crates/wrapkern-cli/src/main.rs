//! `wrapkern`: heat kernels and wrapped central laws on compact Lie groups
//! from the command line.
//!
//! Subcommands:
//!
//! * `describe` — root-system and measure data for a group, as JSON;
//! * `heat` — heat-kernel values on a class-coordinate grid, computed
//!   spectrally, by lattice periodization, or both (with a relative
//!   difference column);
//! * `simulate` — a Brownian-motion ensemble on `SU(2)` plus a chi-square
//!   report comparing the terminal class angles against the spectral class
//!   density;
//! * `wrap` — wrap a Gaussian, a Levy symbol, or the convolution of two
//!   radial point masses, and print the resulting density;
//! * `selftest` — fast end-to-end invariant checks.
//!
//! Every output stream begins with a single JSON header line echoing the
//! fully resolved configuration and the crate version; the rows after the
//! header are plain CSV. Outputs are deterministic for a fixed
//! configuration, independently of the worker count (`WRAPKERN_THREADS`
//! caps the thread pool but never changes results).
//!
//! Exit codes: 0 success, 2 usage or parameter error, 3 numerical
//! non-convergence, 1 failed self-check.

use std::fmt;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;
use wrapkern::heat::{
    heat_grid, heat_group, heat_semigroup_check, rho_shift_factor, spectral_norm_bound,
    torus_ray_grid, HeatMethod, HeatQuery, Truncation,
};
use wrapkern::radial::{
    kingman_convolve, radial_char, wrapped_levy_law, write_radial_csv, LevySymbol,
    RadialDistribution,
};
use wrapkern::stochastic::{
    class_density_test, feynman_kac_expectation, simulate_bm_su2, write_ensemble_csv,
};
use wrapkern::torus::haar_class_rule;
use wrapkern::wrapping::{evaluate_central, laplacian_multiplier_check, wrap_fourier, RadialSymbol};
use wrapkern::{Error, GroupId, RootSystem};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(name = "wrapkern", version, about = "Heat kernels and wrapped laws on compact Lie groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print root-system data, measure normalization, and derived constants.
    Describe {
        /// Group identifier: `su2` or `sun:<n>`.
        #[arg(long, default_value = "su2")]
        group: String,
    },
    /// Evaluate the heat kernel on a class-coordinate grid.
    Heat {
        /// Group identifier: `su2` or `sun:<n>`.
        #[arg(long, default_value = "su2")]
        group: String,
        /// Diffusion time (must be positive).
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Evaluation route.
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// Number of grid points along the torus ray.
        #[arg(long, default_value_t = 50)]
        grid: usize,
        /// Evaluate the shifted kernel (spectral weights at the shifted
        /// eigenvalue, no equilibrium offset) instead of the plain one.
        #[arg(long)]
        shifted: bool,
        /// Spectral truncation: keep characters with |lambda+rho|^2 below
        /// this bound. Only valid with `--method spectral`; otherwise the
        /// bound is chosen automatically from a tail tolerance.
        #[arg(long)]
        bound: Option<f64>,
        /// Lattice truncation radius (number of lattice shells).
        #[arg(long, default_value_t = 8)]
        radius: u32,
        /// Output file (defaults to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate Brownian motion on SU(2) and test the terminal law.
    Simulate {
        /// Group identifier (only `su2` is supported).
        #[arg(long, default_value = "su2")]
        group: String,
        /// Final diffusion time (must be positive).
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
        /// Number of independent paths.
        #[arg(long, default_value_t = 10_000)]
        paths: usize,
        /// Number of Euler steps per path.
        #[arg(long, default_value_t = 200)]
        steps: usize,
        /// Base RNG seed; each path derives its own stream from it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Number of class-angle histogram bins for the chi-square report.
        #[arg(long, default_value_t = 32)]
        bins: usize,
        /// Compare the sample against the class density at this time instead
        /// of the simulated one (a deliberate mismatch demonstrates the
        /// test's power: the report should then reject).
        #[arg(long)]
        predict_t: Option<f64>,
        /// Ensemble CSV output file (defaults to stdout); the chi-square
        /// report always goes to stdout as a final JSON line.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Wrap a law on the Lie algebra onto SU(2) or convolve radial laws.
    Wrap {
        /// Wrap the Gaussian law with this diffusion time; the printed
        /// values are the shifted heat kernel on the class-angle grid.
        #[arg(long)]
        gaussian: Option<f64>,
        /// Wrap a Levy law given as JSON, e.g.
        /// `{"gaussian":1.0,"jumps":[{"rate":2.0,"radius":0.5}]}`;
        /// requires `--t`.
        #[arg(long)]
        levy: Option<String>,
        /// Elapsed time for `--levy`.
        #[arg(long)]
        t: Option<f64>,
        /// Convolve two radial point masses with these radii, e.g. `1.0,1.0`,
        /// and print the resulting radius density.
        #[arg(long)]
        kingman: Option<String>,
        /// Spectral truncation bound for the wrapped coefficients.
        #[arg(long, default_value_t = 60.0)]
        bound: f64,
        /// Number of class-angle grid points for wrapped-law evaluation.
        #[arg(long, default_value_t = 50)]
        grid: usize,
        /// Output file (defaults to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run fast cross-module invariant checks and exit 0 if all pass.
    Selftest,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Spectral,
    Lattice,
    Both,
}

impl MethodArg {
    fn label(self) -> &'static str {
        match self {
            MethodArg::Spectral => "spectral",
            MethodArg::Lattice => "lattice",
            MethodArg::Both => "both",
        }
    }
}

/// Errors surfaced at the command level, mapped onto process exit codes.
enum CliError {
    Lib(Error),
    Io(io::Error),
    Usage(String),
    Check(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Lib(Error::NotConverged(_)) => 3,
            CliError::Lib(_) | CliError::Io(_) | CliError::Usage(_) => 2,
            CliError::Check(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "io: {e}"),
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Check(m) => write!(f, "self-check failed: {m}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

fn main() {
    configure_thread_pool();
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        if let CliError::Io(ref io_err) = e {
            if io_err.kind() == io::ErrorKind::BrokenPipe {
                return;
            }
        }
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}

/// Cap the global worker pool from `WRAPKERN_THREADS` before any parallel
/// work starts. The cap only affects scheduling; results are identical for
/// every value.
fn configure_thread_pool() {
    if let Ok(raw) = std::env::var("WRAPKERN_THREADS") {
        if let Ok(n) = raw.trim().parse::<usize>() {
            if n > 0 {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Describe { group } => cmd_describe(&group),
        Command::Heat { group, t, method, grid, shifted, bound, radius, out } => {
            cmd_heat(&group, t, method, grid, shifted, bound, radius, out.as_deref())
        }
        Command::Simulate { group, t, paths, steps, seed, bins, predict_t, out } => {
            cmd_simulate(&group, t, paths, steps, seed, bins, predict_t, out.as_deref())
        }
        Command::Wrap { gaussian, levy, t, kingman, bound, grid, out } => {
            cmd_wrap(gaussian, levy.as_deref(), t, kingman.as_deref(), bound, grid, out.as_deref())
        }
        Command::Selftest => cmd_selftest(),
    }
}

fn parse_group(group: &str) -> Result<RootSystem, CliError> {
    let id: GroupId = group.parse()?;
    Ok(RootSystem::new(id)?)
}

fn open_output(out: Option<&std::path::Path>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn cmd_describe(group: &str) -> Result<(), CliError> {
    let rs = parse_group(group)?;
    let mut doc = serde_json::to_value(&rs).expect("root system serializes");
    let obj = doc.as_object_mut().expect("root system serializes to an object");
    obj.insert("version".into(), json!(VERSION));
    obj.insert("dim".into(), json!(rs.dim_g()));
    obj.insert("dim_over_24".into(), json!(rs.dim_g() as f64 / 24.0));
    obj.insert("rho_norm_sq".into(), json!(rs.rho_norm_sq()));
    obj.insert("weyl_order".into(), json!(rs.weyl_order()));
    obj.insert("measure_normalization".into(), json!(rs.measure_normalization()));
    println!("{}", serde_json::to_string_pretty(&doc).expect("json prints"));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_heat(
    group: &str,
    t: f64,
    method: MethodArg,
    grid: usize,
    shifted: bool,
    bound: Option<f64>,
    radius: u32,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let rs = parse_group(group)?;
    if !(t > 0.0 && t.is_finite()) {
        return Err(CliError::Usage(format!("--t must be a positive finite time, got {t}")));
    }
    if grid == 0 {
        return Err(CliError::Usage("--grid must be at least 1".into()));
    }
    if bound.is_some() && method != MethodArg::Spectral {
        return Err(CliError::Usage(
            "--bound only applies to --method spectral; other methods pick truncations \
             automatically"
                .into(),
        ));
    }

    let points = torus_ray_grid(&rs, grid);
    let spectral_tol = 1e-12;
    let resolved_bound = match (method, bound) {
        (MethodArg::Lattice, _) => None,
        (_, Some(b)) => Some(b),
        (_, None) => Some(spectral_norm_bound(&rs, t, spectral_tol)?),
    };

    let mut w = open_output(out)?;
    let header = json!({
        "command": "heat",
        "version": VERSION,
        "group": rs.group_id().label(),
        "t": t,
        "method": method.label(),
        "shifted": shifted,
        "grid": grid,
        "norm_bound": resolved_bound,
        "lattice_radius": radius,
    });
    writeln!(w, "{header}")?;

    let coord_cols: Vec<String> = (0..rs.rank()).map(|i| format!("h_{i}")).collect();
    match method {
        MethodArg::Both => {
            writeln!(
                w,
                "t,{},value_spectral,value_lattice,rel_diff,tail_diag",
                coord_cols.join(",")
            )?;
            let rows = heat_grid(&rs, &[t], &points, shifted, spectral_tol, radius)?;
            for row in rows {
                let coords: Vec<String> = row.h.iter().map(|x| format!("{x}")).collect();
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    row.t,
                    coords.join(","),
                    row.value_spectral,
                    row.value_lattice,
                    row.rel_diff,
                    row.tail_diag
                )?;
            }
        }
        MethodArg::Spectral => {
            writeln!(w, "t,{},value", coord_cols.join(","))?;
            let f = wrap_fourier(&rs, &RadialSymbol::gaussian(t), resolved_bound.unwrap())?;
            let factor = if shifted { 1.0 } else { rho_shift_factor(&rs, t) };
            for h in &points {
                let mut value = evaluate_central(&f, h)?.value.re;
                if !shifted {
                    value *= factor;
                }
                let coords: Vec<String> = h.iter().map(|x| format!("{x}")).collect();
                writeln!(w, "{},{},{}", t, coords.join(","), value)?;
            }
        }
        MethodArg::Lattice => {
            writeln!(w, "t,{},value", coord_cols.join(","))?;
            for h in &points {
                let q = HeatQuery {
                    t,
                    h: h.clone(),
                    shifted,
                    method: HeatMethod::WrappedLattice,
                    truncation: Truncation::LatticeRadius(radius),
                };
                let value = heat_group(&rs, &q)?;
                let coords: Vec<String> = h.iter().map(|x| format!("{x}")).collect();
                writeln!(w, "{},{},{}", t, coords.join(","), value)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    group: &str,
    t: f64,
    paths: usize,
    steps: usize,
    seed: u64,
    bins: usize,
    predict_t: Option<f64>,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let rs = parse_group(group)?;
    if rs.group_id() != GroupId::Su2 {
        return Err(CliError::Usage(format!(
            "simulate supports only su2, got {}",
            rs.group_id().label()
        )));
    }
    let report_t = predict_t.unwrap_or(t);

    let ens = simulate_bm_su2(t, steps, paths, seed)?;
    let report = class_density_test(&ens, report_t, bins)?;

    let mut w = open_output(out)?;
    let header = json!({
        "command": "simulate",
        "version": VERSION,
        "group": rs.group_id().label(),
        "t": t,
        "paths": paths,
        "steps": steps,
        "seed": seed,
        "bins": bins,
        "report_t": report_t,
        "scheme": ens.scheme_id,
        "fk_weight": ens.fk_weight,
    });
    writeln!(w, "{header}")?;
    write_ensemble_csv(&ens, &mut w)?;
    w.flush()?;
    drop(w);

    let report_line = serde_json::to_string(&report).expect("report serializes");
    println!("{report_line}");
    Ok(())
}

fn cmd_wrap(
    gaussian: Option<f64>,
    levy: Option<&str>,
    t: Option<f64>,
    kingman: Option<&str>,
    bound: f64,
    grid: usize,
    out: Option<&std::path::Path>,
) -> Result<(), CliError> {
    let modes = gaussian.is_some() as u8 + levy.is_some() as u8 + kingman.is_some() as u8;
    if modes != 1 {
        return Err(CliError::Usage(
            "choose exactly one of --gaussian <t>, --levy <json>, --kingman <a,b>".into(),
        ));
    }
    if grid == 0 {
        return Err(CliError::Usage("--grid must be at least 1".into()));
    }
    let rs = RootSystem::new(GroupId::Su2)?;

    if let Some(raw) = kingman {
        let (a, b) = parse_radius_pair(raw)?;
        let z = kingman_convolve(&RadialDistribution::point_mass(a)?, &RadialDistribution::point_mass(b)?)?;
        let mut w = open_output(out)?;
        let header = json!({
            "command": "wrap",
            "version": VERSION,
            "mode": "kingman",
            "radii": [a, b],
            "support_lo": (a - b).abs(),
            "support_hi": a + b,
            "mass": z.mass(),
        });
        writeln!(w, "{header}")?;
        write_radial_csv(&z, &mut w)?;
        w.flush()?;
        return Ok(());
    }

    // Remaining modes wrap a law onto the group and print the central
    // density on the class-angle grid.
    let (f, header) = if let Some(gt) = gaussian {
        if !(gt > 0.0 && gt.is_finite()) {
            return Err(CliError::Usage(format!(
                "--gaussian expects a positive finite time, got {gt}"
            )));
        }
        let f = wrap_fourier(&rs, &RadialSymbol::gaussian(gt), bound)?;
        let header = json!({
            "command": "wrap",
            "version": VERSION,
            "mode": "gaussian",
            "t": gt,
            "norm_bound": bound,
            "grid": grid,
        });
        (f, header)
    } else {
        let raw = levy.expect("mode counted above");
        let sym: LevySymbol = serde_json::from_str(raw)
            .map_err(|e| CliError::Usage(format!("invalid --levy JSON: {e}")))?;
        sym.validate()?;
        let lt = t.ok_or_else(|| CliError::Usage("--levy requires --t".into()))?;
        let f = wrapped_levy_law(&sym, lt, bound)?;
        let header = json!({
            "command": "wrap",
            "version": VERSION,
            "mode": "levy",
            "symbol": sym,
            "t": lt,
            "norm_bound": bound,
            "grid": grid,
        });
        (f, header)
    };

    let mut w = open_output(out)?;
    writeln!(w, "{header}")?;
    writeln!(w, "t,h_0,value")?;
    let t_col = gaussian.or(t).expect("both wrap modes carry a time");
    for h in torus_ray_grid(&rs, grid) {
        let value = evaluate_central(&f, &h)?.value.re;
        writeln!(w, "{},{},{}", t_col, h[0], value)?;
    }
    w.flush()?;
    Ok(())
}

fn parse_radius_pair(raw: &str) -> Result<(f64, f64), CliError> {
    let parts: Vec<&str> = raw.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::Usage(format!("--kingman expects `a,b`, got `{raw}`")));
    }
    let a: f64 = parts[0].trim().parse().map_err(|_| {
        CliError::Usage(format!("--kingman radius `{}` is not a number", parts[0]))
    })?;
    let b: f64 = parts[1].trim().parse().map_err(|_| {
        CliError::Usage(format!("--kingman radius `{}` is not a number", parts[1]))
    })?;
    Ok((a, b))
}

/// Fast invariant suite: one line per check, exit 0 only if all pass.
fn cmd_selftest() -> Result<(), CliError> {
    let checks: &[(&str, fn() -> Result<(), String>)] = &[
        ("dimension formula |rho|^2 = dim/24", check_dimension_formula),
        ("laplacian multiplier identity", check_laplacian_multiplier),
        ("spectral vs lattice heat kernel", check_heat_agreement),
        ("heat kernel unit mass", check_unit_mass),
        ("heat semigroup", check_semigroup),
        ("path-weight exactness", check_fk_exactness),
        ("levy gaussian reduces to heat", check_levy_reduction),
        ("kingman point-mass convolution", check_kingman),
        ("simulation determinism", check_determinism),
    ];
    for (name, check) in checks {
        check().map_err(|detail| CliError::Check(format!("{name}: {detail}")))?;
        println!("ok {name}");
    }
    println!("selftest: {} checks passed", checks.len());
    Ok(())
}

fn lib_err(e: Error) -> String {
    e.to_string()
}

fn check_dimension_formula() -> Result<(), String> {
    for n in 2..=4u32 {
        let rs = RootSystem::new(GroupId::Sun(n)).map_err(lib_err)?;
        let gap = (rs.rho_norm_sq() - rs.dim_g() as f64 / 24.0).abs();
        if gap >= 1e-12 {
            return Err(format!("su({n}): |rho|^2 - dim/24 = {gap:e}"));
        }
    }
    Ok(())
}

fn check_laplacian_multiplier() -> Result<(), String> {
    let su2 = RootSystem::new(GroupId::Su2).map_err(lib_err)?;
    let d2 = laplacian_multiplier_check(&su2, 60.0).map_err(lib_err)?;
    if d2 != 0.0 {
        return Err(format!("su2 multiplier discrepancy {d2:e}, expected exactly 0"));
    }
    let su3 = RootSystem::new(GroupId::Sun(3)).map_err(lib_err)?;
    let d3 = laplacian_multiplier_check(&su3, 60.0).map_err(lib_err)?;
    if d3 >= 1e-14 {
        return Err(format!("su3 multiplier discrepancy {d3:e}"));
    }
    Ok(())
}

fn check_heat_agreement() -> Result<(), String> {
    let rs = RootSystem::new(GroupId::Su2).map_err(lib_err)?;
    let t = 0.5;
    let h = [std::f64::consts::PI];
    let bound = spectral_norm_bound(&rs, t, 1e-13).map_err(lib_err)?;
    let spectral = heat_group(
        &rs,
        &HeatQuery {
            t,
            h: h.to_vec(),
            shifted: false,
            method: HeatMethod::Spectral,
            truncation: Truncation::NormBound(bound),
        },
    )
    .map_err(lib_err)?;
    let lattice = heat_group(
        &rs,
        &HeatQuery {
            t,
            h: h.to_vec(),
            shifted: false,
            method: HeatMethod::WrappedLattice,
            truncation: Truncation::LatticeRadius(8),
        },
    )
    .map_err(lib_err)?;
    let rel = (spectral - lattice).abs() / lattice.abs();
    if rel >= 1e-8 {
        return Err(format!("routes disagree: rel diff {rel:e}"));
    }
    Ok(())
}

fn check_unit_mass() -> Result<(), String> {
    let rs = RootSystem::new(GroupId::Su2).map_err(lib_err)?;
    let t = 1.0;
    let bound = spectral_norm_bound(&rs, t, 1e-12).map_err(lib_err)?;
    let f = wrap_fourier(&rs, &RadialSymbol::gaussian(t), bound).map_err(lib_err)?;
    let factor = rho_shift_factor(&rs, t);
    let (points, weights) = haar_class_rule(&rs);
    let mut mass = 0.0;
    for (p, w) in points.iter().zip(&weights) {
        mass += w * factor * evaluate_central(&f, p).map_err(lib_err)?.value.re;
    }
    if (mass - 1.0).abs() >= 1e-6 {
        return Err(format!("mass {mass} at t={t}"));
    }
    Ok(())
}

fn check_semigroup() -> Result<(), String> {
    let rs = RootSystem::new(GroupId::Su2).map_err(lib_err)?;
    let report = heat_semigroup_check(&rs, 0.3, 0.7).map_err(lib_err)?;
    if report.max_coeff_rel_diff >= 1e-13 {
        return Err(format!("coefficient gap {:e}", report.max_coeff_rel_diff));
    }
    match report.quadrature_abs_diff {
        Some(d) if d < 1e-6 => Ok(()),
        Some(d) => Err(format!("quadrature gap {d:e}")),
        None => Err("missing quadrature probe".into()),
    }
}

fn check_fk_exactness() -> Result<(), String> {
    let ens = simulate_bm_su2(0.9, 40, 256, 11).map_err(lib_err)?;
    let (est, se) = feynman_kac_expectation(&ens, |_| 1.0);
    if est != ens.fk_weight || se != 0.0 {
        return Err(format!(
            "constant estimate ({est}, {se}) != ({}, 0)",
            ens.fk_weight
        ));
    }
    Ok(())
}

fn check_levy_reduction() -> Result<(), String> {
    let rs = RootSystem::new(GroupId::Su2).map_err(lib_err)?;
    let sym = LevySymbol { gaussian: 1.0, jumps: vec![] };
    let t = 0.7;
    let bound = 40.0;
    let levy = wrapped_levy_law(&sym, t, bound).map_err(lib_err)?;
    let heat = wrap_fourier(&rs, &RadialSymbol::gaussian(t), bound).map_err(lib_err)?;
    if levy.entries().len() != heat.entries().len() {
        return Err("coefficient counts differ".into());
    }
    for (a, b) in levy.entries().iter().zip(heat.entries()) {
        if a.coeff != b.coeff {
            return Err(format!("coefficients differ: {} vs {}", a.coeff, b.coeff));
        }
    }
    Ok(())
}

fn check_kingman() -> Result<(), String> {
    let one = RadialDistribution::point_mass(1.0).map_err(lib_err)?;
    let z = kingman_convolve(&one, &one).map_err(lib_err)?;
    if (z.mass() - 1.0).abs() >= 1e-10 {
        return Err(format!("mass {}", z.mass()));
    }
    let xi = 1.3;
    let product = radial_char(&one, 3, xi).map_err(lib_err)?.powi(2);
    let direct = radial_char(&z, 3, xi).map_err(lib_err)?;
    if (product - direct).abs() >= 1e-8 {
        return Err(format!("characteristic mismatch {:e}", (product - direct).abs()));
    }
    Ok(())
}

fn check_determinism() -> Result<(), String> {
    let a = simulate_bm_su2(0.3, 25, 512, 7).map_err(lib_err)?;
    let b = simulate_bm_su2(0.3, 25, 512, 7).map_err(lib_err)?;
    if a.terminals != b.terminals {
        return Err("repeated runs differ".into());
    }
    Ok(())
}
