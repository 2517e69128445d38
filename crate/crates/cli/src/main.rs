//! Command-line front end: binds the config file, the analysis workflows,
//! and all file emission. Every run writes a manifest next to its outputs;
//! `rerun` replays a manifest bit for bit.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use bubble3_core::config::RunConfig;
use bubble3_core::harness::{LinearField, LorenzField};
use bubble3_core::integrator::TangentFrame;
use bubble3_core::lyapunov::{
    benettin, classify, conditional_spectra, spectrum_csv_header, spectrum_csv_row,
    BenettinSettings, LyapunovSpectrum, ZERO_TOL,
};
use bubble3_core::poincare::{cloud_csv_header, cloud_csv_row, sample_section};
use bubble3_core::sweep::{
    chart_csv, chart_raster, frame_for, path_csv, path_fractions_csv, run_chart, run_path,
    BubbleFamily, ChartSpec, FixedFamily, InitialStatePolicy, PathSpec,
};
use bubble3_core::{fmt, BubbleSystem, Error, RegimeClass, State};

mod manifest;

use manifest::Manifest;

#[derive(Parser, Debug)]
#[command(
    name = "bubble3",
    version,
    about = "Chaos diagnostics for three coupled encapsulated microbubbles"
)]
struct Cli {
    /// Physical and numerical constants (flat key = value file). Defaults to
    /// the built-in reference set when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,

    /// Seed for the random initial tangent frames.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Integrate one trajectory and emit its stroboscopic section.
    Simulate(SimulateArgs),
    /// Compute the Lyapunov spectrum and regime class at one point.
    Les(LesArgs),
    /// Two-parameter regime chart with attractor continuation.
    Chart(ChartArgs),
    /// One-parameter path scan (spectra, regimes, sync fractions).
    Path(PathArgs),
    /// Synchronization dwell fractions and phase-conditional spectra.
    Sync(SyncArgs),
    /// Replay a manifest written by a previous run.
    Rerun(RerunArgs),
}

#[derive(Args, Debug)]
struct ControlPoint {
    /// Interbubble distance over the rest radius.
    #[arg(long = "d-over-r0")]
    d_over_r0: f64,
    /// Acoustic drive amplitude, Pa.
    #[arg(long = "amp")]
    amp: f64,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    point: ControlPoint,
    /// Number of stroboscopic samples to record.
    #[arg(long, default_value_t = 4096)]
    periods: usize,
    /// Forcing periods to discard before recording.
    #[arg(long, default_value_t = 1000)]
    skip: usize,
    /// Initial state `r1,r2,r3,u1,u2,u3` (defaults to the perturbed rest state).
    #[arg(long, value_parser = parse_state6, allow_hyphen_values = true)]
    init_state: Option<[f64; 6]>,
}

#[derive(Args, Debug)]
struct LesArgs {
    /// Interbubble distance over the rest radius (bubble field only).
    #[arg(long = "d-over-r0", default_value_t = 36.5)]
    d_over_r0: f64,
    /// Acoustic drive amplitude, Pa (bubble field only).
    #[arg(long = "amp", default_value_t = 1.5e6)]
    amp: f64,
    /// Override the accumulation length (forcing periods).
    #[arg(long)]
    periods: Option<usize>,
    /// Override the discarded transient (forcing periods).
    #[arg(long)]
    transient: Option<usize>,
    /// Initial state `r1,r2,r3,u1,u2,u3`.
    #[arg(long, value_parser = parse_state6, allow_hyphen_values = true)]
    init_state: Option<[f64; 6]>,
    /// Swap the bubble field for a validation field: `linear` or `lorenz`.
    #[arg(long)]
    test_field: Option<String>,
}

#[derive(Args, Debug)]
struct ChartArgs {
    /// Grid resolution `NDxNA` (distance x amplitude pixels).
    #[arg(long, default_value = "200x200", value_parser = parse_grid)]
    grid: (usize, usize),
    /// Distance range `LO:HI` in units of the rest radius.
    #[arg(long, default_value = "20:47", value_parser = parse_range)]
    d_range: (f64, f64),
    /// Amplitude range `LO:HI`, Pa.
    #[arg(long, default_value = "1.3e6:1.7e6", value_parser = parse_range)]
    a_range: (f64, f64),
    /// Seed point `D,A` for the settle-and-continue order.
    #[arg(long, default_value = "47,1.48e6", value_parser = parse_pair)]
    seed_point: (f64, f64),
    /// Override the per-pixel accumulation length.
    #[arg(long)]
    periods: Option<usize>,
    /// Override the per-pixel transient.
    #[arg(long)]
    transient: Option<usize>,
    /// Override the seed settle length.
    #[arg(long)]
    settle: Option<usize>,
    /// Worker threads for the row sweeps (0 = all cores).
    #[arg(long, default_value_t = 0)]
    workers: usize,
    /// Swap the bubble field for the `linear` validation field.
    #[arg(long)]
    test_field: Option<String>,
}

#[derive(Args, Debug)]
struct PathArgs {
    /// Route preset: `ab`, `cd`, `ef`, or `gh`.
    #[arg(long, conflicts_with_all = ["from", "to"])]
    preset: Option<String>,
    /// Start point `D,A`.
    #[arg(long, value_parser = parse_pair, requires = "to")]
    from: Option<(f64, f64)>,
    /// End point `D,A`.
    #[arg(long, value_parser = parse_pair, requires = "from")]
    to: Option<(f64, f64)>,
    /// Number of parameter samples.
    #[arg(long, default_value_t = 200)]
    samples: usize,
    /// Traverse the segment end-to-start.
    #[arg(long, default_value_t = false)]
    reverse: bool,
    /// Re-seed every sample from this fixed state instead of continuing the
    /// attractor (`r1,r2,r3,u1,u2,u3`).
    #[arg(long, value_parser = parse_state6, allow_hyphen_values = true)]
    fixed_init: Option<[f64; 6]>,
    /// Override the per-sample accumulation length.
    #[arg(long)]
    periods: Option<usize>,
    /// Override the per-sample transient.
    #[arg(long)]
    transient: Option<usize>,
    /// Override the settle length at the first sample.
    #[arg(long)]
    settle: Option<usize>,
}

#[derive(Args, Debug)]
struct SyncArgs {
    #[command(flatten)]
    point: ControlPoint,
    /// Override the accumulation length.
    #[arg(long)]
    periods: Option<usize>,
    /// Override the transient.
    #[arg(long)]
    transient: Option<usize>,
    /// Initial state `r1,r2,r3,u1,u2,u3`.
    #[arg(long, value_parser = parse_state6, allow_hyphen_values = true)]
    init_state: Option<[f64; 6]>,
}

#[derive(Args, Debug)]
struct RerunArgs {
    /// Manifest written by a previous run.
    #[arg(long)]
    manifest: PathBuf,
}

fn parse_state6(text: &str) -> Result<[f64; 6], String> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 6 {
        return Err(format!(
            "expected 6 comma-separated numbers, got {}",
            parts.len()
        ));
    }
    let mut out = [0.0; 6];
    for (slot, part) in out.iter_mut().zip(&parts) {
        *slot = part
            .trim()
            .parse()
            .map_err(|e| format!("bad number {part:?}: {e}"))?;
    }
    Ok(out)
}

fn parse_grid(text: &str) -> Result<(usize, usize), String> {
    let (x, y) = text
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NDxNA, got {text:?}"))?;
    Ok((
        x.trim().parse().map_err(|e| format!("{e}"))?,
        y.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn parse_range(text: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = text
        .split_once(':')
        .ok_or_else(|| format!("expected LO:HI, got {text:?}"))?;
    Ok((
        lo.trim().parse().map_err(|e| format!("{e}"))?,
        hi.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

fn parse_pair(text: &str) -> Result<(f64, f64), String> {
    let (d, a) = text
        .split_once(',')
        .ok_or_else(|| format!("expected D,A, got {text:?}"))?;
    Ok((
        d.trim().parse().map_err(|e| format!("{e}"))?,
        a.trim().parse().map_err(|e| format!("{e}"))?,
    ))
}

/// Exit codes: 0 success, 2 config/usage error, 3 rupture-dominated run,
/// 4 step-budget exhaustion.
const EXIT_RUPTURE: u8 = 3;

fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Config { .. }
        | Error::ConfigIo { .. }
        | Error::InvalidParams(_)
        | Error::InvalidSpec(_)
        | Error::NonPositiveFrequency { .. } => 2,
        Error::RadiusUnderflow { .. }
        | Error::NonFiniteState { .. }
        | Error::SingularMassMatrix { .. } => EXIT_RUPTURE,
        Error::StepBudgetExceeded { .. } | Error::StepUnderflow { .. } => 4,
        Error::Io { .. } => 1,
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = Cli::parse();
    match run(cli, argv) {
        Ok(code) => ExitCode::from(code),
        Err(err) => {
            eprintln!("error: {err}");
            if let Some(tau) = err.rupture_tau() {
                eprintln!("trajectory left the model domain at tau = {tau:.6}");
            }
            ExitCode::from(exit_code_for(&err))
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Error> {
    std::fs::write(path, bytes).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn load_config(cli_config: &Option<PathBuf>) -> Result<(RunConfig, Option<String>), Error> {
    match cli_config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| Error::ConfigIo {
                path: path.display().to_string(),
                source,
            })?;
            let config = RunConfig::parse(&text, &path.display().to_string())?;
            Ok((config, Some(text)))
        }
        None => Ok((RunConfig::default(), None)),
    }
}

fn run(cli: Cli, argv: Vec<String>) -> Result<u8, Error> {
    if let Command::Rerun(args) = &cli.command {
        return rerun(args, &cli.out);
    }

    let (config, config_text) = load_config(&cli.config)?;
    std::fs::create_dir_all(&cli.out).map_err(|source| Error::Io {
        path: cli.out.display().to_string(),
        source,
    })?;

    let manifest = Manifest::new(
        subcommand_name(&cli.command),
        argv,
        cli.config.as_ref().map(|p| p.display().to_string()),
        config_text,
        cli.out.display().to_string(),
        cli.seed,
    );
    manifest.write(&cli.out.join("manifest.json"))?;

    match &cli.command {
        Command::Simulate(args) => cmd_simulate(&config, args, &cli.out),
        Command::Les(args) => cmd_les(&config, args, &cli.out, cli.seed),
        Command::Chart(args) => cmd_chart(&config, args, &cli.out, cli.seed),
        Command::Path(args) => cmd_path(&config, args, &cli.out, cli.seed),
        Command::Sync(args) => cmd_sync(&config, args, &cli.out),
        Command::Rerun(_) => unreachable!(),
    }
}

fn subcommand_name(command: &Command) -> &'static str {
    match command {
        Command::Simulate(_) => "simulate",
        Command::Les(_) => "les",
        Command::Chart(_) => "chart",
        Command::Path(_) => "path",
        Command::Sync(_) => "sync",
        Command::Rerun(_) => "rerun",
    }
}

/// Replays a stored run into a fresh output directory. The manifest pins the
/// config content, so edits to the original file cannot change the replay.
fn rerun(args: &RerunArgs, out: &Path) -> Result<u8, Error> {
    let manifest = Manifest::read(&args.manifest)?;
    let mut argv = manifest.argv.clone();
    strip_flag(&mut argv, "--out");
    argv.push("--out".into());
    argv.push(out.display().to_string());
    if let Some(text) = &manifest.config_content {
        std::fs::create_dir_all(out).map_err(|source| Error::Io {
            path: out.display().to_string(),
            source,
        })?;
        let snapshot = out.join("config.snapshot.cfg");
        write_file(&snapshot, text.as_bytes())?;
        strip_flag(&mut argv, "--config");
        argv.push("--config".into());
        argv.push(snapshot.display().to_string());
    }
    let argv_full: Vec<String> = std::iter::once("bubble3".to_string())
        .chain(argv.iter().cloned())
        .collect();
    let cli = Cli::parse_from(&argv_full);
    run(cli, argv)
}

fn strip_flag(argv: &mut Vec<String>, flag: &str) {
    let prefix = format!("{flag}=");
    let mut i = 0;
    while i < argv.len() {
        if argv[i] == flag && i + 1 < argv.len() {
            argv.drain(i..=i + 1);
        } else if argv[i].starts_with(&prefix) {
            argv.remove(i);
        } else {
            i += 1;
        }
    }
}

fn bubble_system(config: &RunConfig, d_over_r0: f64, a: f64) -> Result<BubbleSystem, Error> {
    BubbleSystem::new(&config.physical.with_controls(d_over_r0, a))
}

fn initial_state(explicit: &Option<[f64; 6]>) -> State {
    match explicit {
        Some(y) => State::from_y(y, 0.0),
        None => State::perturbed_equilibrium(),
    }
}

fn cmd_simulate(config: &RunConfig, args: &SimulateArgs, out: &Path) -> Result<u8, Error> {
    let sys = bubble_system(config, args.point.d_over_r0, args.point.amp)?;
    let cloud = sample_section(
        &sys,
        &config.integrator,
        &initial_state(&args.init_state),
        args.skip,
        args.periods,
    )?;
    let mut csv = String::from(cloud_csv_header());
    csv.push('\n');
    for i in 0..cloud.len() {
        csv.push_str(&cloud_csv_row(&cloud, i));
        csv.push('\n');
    }
    let path = out.join("trajectory.csv");
    write_file(&path, csv.as_bytes())?;
    println!(
        "wrote {} ({} stroboscopic samples at d/R0 = {}, a = {} Pa)",
        path.display(),
        cloud.len(),
        args.point.d_over_r0,
        args.point.amp
    );
    Ok(0)
}

fn cmd_les(config: &RunConfig, args: &LesArgs, out: &Path, seed: u64) -> Result<u8, Error> {
    let transient = args.transient.unwrap_or(config.lyapunov.transient_periods);
    let accumulate = args.periods.unwrap_or(config.lyapunov.accumulate_periods);

    let (spectrum, class, label) = match args.test_field.as_deref() {
        None => {
            let sys = bubble_system(config, args.d_over_r0, args.amp)?;
            let settings = BenettinSettings {
                transient_intervals: transient,
                accumulate_intervals: accumulate,
                interval: sys.period_tau(),
                renorm_every: 1,
            };
            let outcome = benettin(
                &sys,
                &config.integrator,
                initial_state(&args.init_state).to_y(),
                0.0,
                &settings,
                frame_for(seed, 0),
            )?;
            let spectrum = LyapunovSpectrum {
                lambda: outcome.lambda,
                n_periods: outcome.intervals,
                transient_periods: transient,
                converged: outcome.converged,
                avg_divergence: outcome.avg_divergence,
            };
            let class = classify(&spectrum, ZERO_TOL).class;
            (spectrum, class, "bubble")
        }
        Some("linear") => {
            let flow = LinearField::new([-1.0, -2.0, -3.0, -4.0, -5.0, -6.0]);
            let cfg = bubble3_core::IntegratorConfig {
                h_max: 0.01,
                ..config.integrator
            };
            let settings = BenettinSettings {
                transient_intervals: transient.min(100),
                accumulate_intervals: accumulate.min(5_000),
                interval: 1.0,
                renorm_every: 1,
            };
            let outcome = benettin(
                &flow,
                &cfg,
                [1.0; 6],
                0.0,
                &settings,
                TangentFrame::identity(),
            )?;
            let spectrum = LyapunovSpectrum {
                lambda: outcome.lambda,
                n_periods: outcome.intervals,
                transient_periods: settings.transient_intervals,
                converged: outcome.converged,
                avg_divergence: outcome.avg_divergence,
            };
            let class = classify(&spectrum, ZERO_TOL).class;
            (spectrum, class, "linear harness")
        }
        Some("lorenz") => {
            let flow = LorenzField::classic();
            let cfg = bubble3_core::IntegratorConfig {
                h_max: 0.05,
                ..config.integrator
            };
            let settings = BenettinSettings {
                transient_intervals: transient.min(200),
                accumulate_intervals: accumulate.min(40_000),
                interval: 0.5,
                renorm_every: 1,
            };
            let outcome = benettin(
                &flow,
                &cfg,
                [1.0, 1.0, 1.0],
                0.0,
                &settings,
                TangentFrame::identity(),
            )?;
            // classify over the three real exponents; pad the 6-column
            // schema with strongly negative fillers so they stay silent
            let mut padded = [-1.0; 6];
            padded[..3].copy_from_slice(&outcome.lambda);
            let spectrum = LyapunovSpectrum {
                lambda: padded,
                n_periods: outcome.intervals,
                transient_periods: settings.transient_intervals,
                converged: outcome.converged,
                avg_divergence: outcome.avg_divergence,
            };
            let class = classify(&spectrum, ZERO_TOL).class;
            let mut reported = spectrum.clone();
            reported.lambda[3] = f64::NAN;
            reported.lambda[4] = f64::NAN;
            reported.lambda[5] = f64::NAN;
            (reported, class, "lorenz harness")
        }
        Some(other) => {
            return Err(Error::InvalidSpec(format!(
                "unknown test field {other:?} (expected linear or lorenz)"
            )))
        }
    };

    let mut csv = String::from(spectrum_csv_header());
    csv.push('\n');
    csv.push_str(&spectrum_csv_row(
        args.d_over_r0,
        args.amp,
        &spectrum,
        class,
    ));
    csv.push('\n');
    let path = out.join("spectrum.csv");
    write_file(&path, csv.as_bytes())?;
    println!(
        "wrote {} ({label}: {class}, lambda1 = {:.6}, converged = {})",
        path.display(),
        spectrum.lambda[0],
        spectrum.converged
    );
    Ok(0)
}

fn cmd_chart(config: &RunConfig, args: &ChartArgs, out: &Path, seed: u64) -> Result<u8, Error> {
    let spec = ChartSpec {
        d_lo: args.d_range.0,
        d_hi: args.d_range.1,
        n_d: args.grid.0,
        a_lo: args.a_range.0,
        a_hi: args.a_range.1,
        n_a: args.grid.1,
        seed_point: args.seed_point,
        seed_settle_periods: args.settle.unwrap_or(config.chart.seed_settle_periods),
        transient_periods: args.transient.unwrap_or(config.chart.transient_periods),
        accumulate_periods: args.periods.unwrap_or(config.chart.accumulate_periods),
        frame_seed: seed,
    };
    let result = match args.test_field.as_deref() {
        None => {
            let family = BubbleFamily::new(config.physical)?;
            run_chart(&family, &config.integrator, &spec, args.workers)?
        }
        Some("linear") => {
            let family = FixedFamily {
                flow: LinearField::new([-1.0, -2.0, -3.0, -4.0, -5.0, -6.0]),
                interval: 1.0,
            };
            let cfg = bubble3_core::IntegratorConfig {
                h_max: 0.01,
                ..config.integrator
            };
            run_chart(&family, &cfg, &spec, args.workers)?
        }
        Some(other) => {
            return Err(Error::InvalidSpec(format!(
                "unknown test field {other:?} for chart (expected linear)"
            )))
        }
    };

    let csv_path = out.join("chart.csv");
    write_file(&csv_path, chart_csv(&result).as_bytes())?;
    let ppm_path = out.join("chart.ppm");
    write_file(&ppm_path, &chart_raster(&result))?;
    let rupture = result.rupture_fraction();
    println!(
        "wrote {} and {} ({}x{} pixels, rupture fraction {:.3})",
        csv_path.display(),
        ppm_path.display(),
        result.spec.n_d,
        result.spec.n_a,
        rupture
    );
    Ok(if rupture > 0.5 { EXIT_RUPTURE } else { 0 })
}

fn cmd_path(config: &RunConfig, args: &PathArgs, out: &Path, seed: u64) -> Result<u8, Error> {
    let mut spec = match (&args.preset, args.from, args.to) {
        (Some(name), None, None) => PathSpec::preset(name, args.samples, config)?,
        (None, Some(from), Some(to)) => PathSpec::new(from, to, args.samples, config),
        _ => {
            return Err(Error::InvalidSpec(
                "give either --preset or both --from and --to".into(),
            ))
        }
    };
    spec.samples = args.samples;
    spec.reverse = args.reverse;
    spec.frame_seed = seed;
    if let Some(y0) = args.fixed_init {
        spec.policy = InitialStatePolicy::Fixed(y0);
    }
    if let Some(v) = args.periods {
        spec.accumulate_periods = v;
    }
    if let Some(v) = args.transient {
        spec.transient_periods = v;
    }
    if let Some(v) = args.settle {
        spec.settle_periods = v;
    }

    let family = BubbleFamily::new(config.physical)?;
    let samples = run_path(&family, &config.integrator, &spec)?;

    let path_file = out.join("path.csv");
    write_file(&path_file, path_csv(&samples).as_bytes())?;
    let frac_file = out.join("fractions.csv");
    write_file(&frac_file, path_fractions_csv(&samples).as_bytes())?;
    let ruptured = samples
        .iter()
        .filter(|s| s.class == RegimeClass::EscapeRupture)
        .count();
    println!(
        "wrote {} and {} ({} samples, {} ruptured)",
        path_file.display(),
        frac_file.display(),
        samples.len(),
        ruptured
    );
    Ok(if 2 * ruptured > samples.len() {
        EXIT_RUPTURE
    } else {
        0
    })
}

fn cmd_sync(config: &RunConfig, args: &SyncArgs, out: &Path) -> Result<u8, Error> {
    let sys = bubble_system(config, args.point.d_over_r0, args.point.amp)?;
    let transient = args.transient.unwrap_or(config.lyapunov.transient_periods);
    let accumulate = args.periods.unwrap_or(config.lyapunov.accumulate_periods);
    let report = conditional_spectra(
        &sys,
        &config.integrator,
        &initial_state(&args.init_state),
        transient,
        accumulate,
        bubble3_core::sync::MEMBERSHIP_EPS,
    )?;

    let fr = &report.fractions;
    let mut csv =
        String::from("d_over_r0,a,frac_S,frac_partial,frac_async,frac_S12,frac_S13,frac_S23\n");
    csv.push_str(&format!(
        "{},{},{},{},{},{},{},{}\n",
        fmt::float(args.point.d_over_r0),
        fmt::float(args.point.amp),
        fmt::float(fr.frac_s),
        fmt::float(fr.frac_partial),
        fmt::float(fr.frac_async),
        fmt::float(fr.frac_s12),
        fmt::float(fr.frac_s13),
        fmt::float(fr.frac_s23)
    ));
    let sync_file = out.join("sync.csv");
    write_file(&sync_file, csv.as_bytes())?;

    let mut cond = String::from(
        "phase,dwell_fraction,renorms,sufficient,lambda1,lambda2,lambda3,lambda4,lambda5,lambda6\n",
    );
    for (name, phase) in [("sync", &report.sync), ("async", &report.asynchronous)] {
        cond.push_str(&format!(
            "{},{},{},{}",
            name,
            fmt::float(phase.dwell_fraction),
            phase.renorms,
            phase.sufficient
        ));
        for l in phase.lambda {
            cond.push(',');
            cond.push_str(&fmt::float(l));
        }
        cond.push('\n');
    }
    let cond_file = out.join("conditional.csv");
    write_file(&cond_file, cond.as_bytes())?;

    let class = classify(&report.full, ZERO_TOL).class;
    let mut spec_csv = String::from(spectrum_csv_header());
    spec_csv.push('\n');
    spec_csv.push_str(&spectrum_csv_row(
        args.point.d_over_r0,
        args.point.amp,
        &report.full,
        class,
    ));
    spec_csv.push('\n');
    write_file(&out.join("spectrum.csv"), spec_csv.as_bytes())?;

    println!(
        "wrote {}, {} and spectrum.csv (frac_S = {:.4}, {class})",
        sync_file.display(),
        cond_file.display(),
        fr.frac_s
    );
    Ok(0)
}
