// NaN must fail range checks, hence the negated comparisons.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

//! `dnp` — command-line driver for the nuclear spin polarization
//! simulator.
//!
//! Every command prints CSV to stdout (fixed column order, 9 significant
//! digits, newline-terminated) and optionally writes a JSON run report
//! to `--out`. Exit codes: 0 success, 1 usage or config error, 2
//! numerical warning state (marginal fixed point, non-converged
//! relaxation).

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dnp_core::config::{parse_config, Config};
use dnp_core::error::CoreError;
use dnp_core::model::Helicity;
use dnp_core::report::{
    fmt_g9, local_maxima, AtlasSummary, DirectedThreshold, PthrPoint, RunReport,
};
use dnp_core::steady::{find_fixed_points, Stability, DEFAULT_GRID_N, DEFAULT_TOL_B};
use dnp_core::sweep::{
    bistability_atlas, run_hysteresis, run_sweep, threshold_power, AxisSpec, SweepAxis, SweepSpec,
};

const EXIT_OK: u8 = 0;
const EXIT_USAGE: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;

#[derive(Parser)]
#[command(
    name = "dnp",
    about = "Nuclear spin polarization switch simulator for a quantum dot in a biased diode",
    version
)]
struct Cli {
    /// Config file (`key = value`, `#` comments); missing keys use the
    /// built-in calibrated reference values.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fixed points of the polarization rate equation at one drive point.
    Steady(SteadyArgs),
    /// Quasi-static sweep over power, bias or field, optionally both ways.
    Sweep(SweepArgs),
    /// Stable-root counts over a 2-D drive grid.
    Atlas(AtlasArgs),
    /// Switching threshold power as a function of bias.
    Pthr(PthrArgs),
}

#[derive(Args)]
struct SteadyArgs {
    /// External field B_z (T); defaults to the config drive value.
    #[arg(long)]
    bz: Option<f64>,
    /// Excitation power (mW).
    #[arg(long)]
    power: Option<f64>,
    /// Applied bias (V).
    #[arg(long)]
    bias: Option<f64>,
    /// Pump helicity: +1 or -1.
    #[arg(long, allow_hyphen_values = true)]
    helicity: Option<i32>,
    /// Write a JSON run report here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    Power,
    Bias,
    Field,
}

impl From<AxisArg> for SweepAxis {
    fn from(a: AxisArg) -> Self {
        match a {
            AxisArg::Power => SweepAxis::Power,
            AxisArg::Bias => SweepAxis::Bias,
            AxisArg::Field => SweepAxis::Field,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum DirectionArg {
    Both,
    Up,
    Down,
}

#[derive(Args)]
struct SweepArgs {
    /// Swept drive knob.
    #[arg(long, value_enum)]
    axis: AxisArg,
    /// First axis value.
    #[arg(long, allow_hyphen_values = true)]
    from: f64,
    /// Last axis value.
    #[arg(long, allow_hyphen_values = true)]
    to: f64,
    /// Number of grid points (>= 2), endpoints included.
    #[arg(long)]
    steps: usize,
    /// both: from->to then seeded return; up: from->to; down: to->from.
    #[arg(long, value_enum, default_value = "both")]
    direction: DirectionArg,
    /// Write a JSON run report here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AtlasArgs {
    /// X grid as `axis:start:stop:steps`, e.g. `power:0:0.6:25`.
    #[arg(long, allow_hyphen_values = true)]
    x: String,
    /// Y grid as `axis:start:stop:steps`, e.g. `field:1.5:3:16`.
    #[arg(long, allow_hyphen_values = true)]
    y: String,
    /// Write a JSON run report here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PthrArgs {
    #[arg(long, allow_hyphen_values = true)]
    bias_from: f64,
    #[arg(long, allow_hyphen_values = true)]
    bias_to: f64,
    /// Number of bias grid points (>= 2).
    #[arg(long)]
    bias_steps: usize,
    /// Power ceiling of each upward scan (mW).
    #[arg(long)]
    pmax: f64,
    /// Bisection resolution on the threshold power (mW).
    #[arg(long, default_value = "0.005")]
    resolution: f64,
    /// Write a JSON run report here.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are not errors.
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(EXIT_USAGE);
            }
            print!("{e}");
            return ExitCode::from(EXIT_OK);
        }
    };

    let config = match &cli.config {
        Some(path) => match parse_config(path) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("dnp: config error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        },
        None => Config::reference(),
    };

    let code = match &cli.command {
        Command::Steady(args) => cmd_steady(&config, args),
        Command::Sweep(args) => cmd_sweep(&config, args),
        Command::Atlas(args) => cmd_atlas(&config, args),
        Command::Pthr(args) => cmd_pthr(&config, args),
    };
    ExitCode::from(code)
}

fn exit_code_for(err: &CoreError) -> u8 {
    match err {
        CoreError::MarginalFixedPoint { .. }
        | CoreError::RelaxationNotConverged { .. }
        | CoreError::IntegrationDiverged { .. } => EXIT_NUMERICAL,
        CoreError::SweepFailed { source, .. } => exit_code_for(source),
        _ => EXIT_USAGE,
    }
}

fn finish(report: RunReport, out: &Option<PathBuf>, code: u8) -> u8 {
    if let Some(path) = out {
        let mut report = report;
        report.exit_status = i32::from(code);
        if let Err(e) = report.write(path) {
            eprintln!("dnp: cannot write report: {e}");
            return EXIT_USAGE;
        }
    }
    code
}

fn cmd_steady(config: &Config, args: &SteadyArgs) -> u8 {
    let params = config.params;
    let mut drive = config.drive;
    if let Some(bz) = args.bz {
        drive.b_z = bz;
    }
    if let Some(power) = args.power {
        drive.power = power;
    }
    if let Some(bias) = args.bias {
        drive.v_app = bias;
    }
    if let Some(h) = args.helicity {
        match Helicity::from_sign(h) {
            Some(h) => drive.helicity = h,
            None => {
                eprintln!("dnp: helicity must be +1 or -1, got {h}");
                return EXIT_USAGE;
            }
        }
    }
    if let Err(e) = drive.validate() {
        eprintln!("dnp: {e}");
        return EXIT_USAGE;
    }

    let command = format!(
        "dnp steady --bz {} --power {} --bias {} --helicity {}",
        drive.b_z,
        drive.power,
        drive.v_app,
        drive.helicity.sign() as i32
    );
    let mut report = RunReport::new(command, params, drive);

    match find_fixed_points(&params, &drive, DEFAULT_GRID_N, DEFAULT_TOL_B) {
        Ok(points) => {
            let mut csv = String::from("B_N_tesla,stability,slope_per_s\n");
            for p in &points {
                let label = match p.stability {
                    Stability::Stable => "stable",
                    Stability::Unstable => "unstable",
                };
                let _ = writeln!(csv, "{},{label},{}", fmt_g9(p.b_n), fmt_g9(p.slope));
            }
            print!("{csv}");
            report.fixed_points = Some(points);
            finish(report, &args.out, EXIT_OK)
        }
        Err(e) => {
            eprintln!("dnp: {e}");
            let code = exit_code_for(&e);
            report.error = Some(e.to_string());
            finish(report, &args.out, code)
        }
    }
}

fn cmd_sweep(config: &Config, args: &SweepArgs) -> u8 {
    let params = config.params;
    let axis: SweepAxis = args.axis.into();
    let direction = match args.direction {
        DirectionArg::Both => "both",
        DirectionArg::Up => "up",
        DirectionArg::Down => "down",
    };
    let command = format!(
        "dnp sweep --axis {} --from {} --to {} --steps {} --direction {}",
        axis.name(),
        args.from,
        args.to,
        args.steps,
        direction
    );
    let mut report = RunReport::new(command, params, config.drive);

    let spec = SweepSpec::new(axis, args.from, args.to, args.steps, config.drive);
    let header = "axis_value,B_N_tesla,E_e_ueV,E_X_ueV,threshold_flag,direction";

    let emit = |csv: &mut String, r: &dnp_core::sweep::SweepResult, tag: &str| {
        for i in 0..r.axis_values.len() {
            let flagged = r
                .thresholds
                .iter()
                .any(|t| t.axis_value == r.axis_values[i]);
            let _ = writeln!(
                csv,
                "{},{},{},{},{},{tag}",
                fmt_g9(r.axis_values[i]),
                fmt_g9(r.b_n[i]),
                fmt_g9(r.e_e[i]),
                fmt_g9(r.e_x[i]),
                u8::from(flagged)
            );
        }
    };

    let outcome = match args.direction {
        DirectionArg::Both => run_hysteresis(&params, &spec).map(|h| {
            let mut csv = format!("{header}\n");
            emit(&mut csv, &h.up, "up");
            emit(&mut csv, &h.down, "down");
            let mut thresholds: Vec<DirectedThreshold> = Vec::new();
            thresholds.extend(h.up.thresholds.iter().map(|t| DirectedThreshold::tag("up", t)));
            thresholds.extend(h.down.thresholds.iter().map(|t| DirectedThreshold::tag("down", t)));
            (csv, thresholds, Some(h.loop_area))
        }),
        DirectionArg::Up => run_sweep(&params, &spec).map(|r| {
            let mut csv = format!("{header}\n");
            emit(&mut csv, &r, "up");
            let t = r.thresholds.iter().map(|t| DirectedThreshold::tag("up", t)).collect();
            (csv, t, None)
        }),
        DirectionArg::Down => {
            let spec = SweepSpec::new(axis, args.to, args.from, args.steps, config.drive);
            run_sweep(&params, &spec).map(|r| {
                let mut csv = format!("{header}\n");
                emit(&mut csv, &r, "down");
                let t = r.thresholds.iter().map(|t| DirectedThreshold::tag("down", t)).collect();
                (csv, t, None)
            })
        }
    };

    match outcome {
        Ok((csv, thresholds, loop_area)) => {
            print!("{csv}");
            report.thresholds = Some(thresholds);
            report.loop_area = loop_area;
            finish(report, &args.out, EXIT_OK)
        }
        Err(e) => {
            eprintln!("dnp: {e}");
            let code = exit_code_for(&e);
            report.error = Some(e.to_string());
            finish(report, &args.out, code)
        }
    }
}

fn parse_axis_spec(text: &str) -> Result<AxisSpec, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 4 {
        return Err(format!(
            "grid spec must be axis:start:stop:steps, got `{text}`"
        ));
    }
    let axis = SweepAxis::parse(parts[0])
        .ok_or_else(|| format!("unknown axis `{}` (power|bias|field)", parts[0]))?;
    let start: f64 = parts[1].parse().map_err(|_| format!("bad start `{}`", parts[1]))?;
    let stop: f64 = parts[2].parse().map_err(|_| format!("bad stop `{}`", parts[2]))?;
    let steps: usize = parts[3].parse().map_err(|_| format!("bad steps `{}`", parts[3]))?;
    Ok(AxisSpec {
        axis,
        start,
        stop,
        steps,
    })
}

fn cmd_atlas(config: &Config, args: &AtlasArgs) -> u8 {
    let params = config.params;
    let (x, y) = match (parse_axis_spec(&args.x), parse_axis_spec(&args.y)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => {
            eprintln!("dnp: {e}");
            return EXIT_USAGE;
        }
    };
    let command = format!(
        "dnp atlas --x {}:{}:{}:{} --y {}:{}:{}:{}",
        x.axis.name(),
        x.start,
        x.stop,
        x.steps,
        y.axis.name(),
        y.start,
        y.stop,
        y.steps
    );
    let mut report = RunReport::new(command, params, config.drive);

    match bistability_atlas(&params, &config.drive, x, y) {
        Ok(atlas) => {
            // Header row carries the x grid; each body row starts with
            // its y value.
            let mut csv = String::from("y\\x");
            for &xv in &atlas.x_values {
                let _ = write!(csv, ",{}", fmt_g9(xv));
            }
            csv.push('\n');
            for (iy, &yv) in atlas.y_values.iter().enumerate() {
                let _ = write!(csv, "{}", fmt_g9(yv));
                for ix in 0..atlas.x_values.len() {
                    let _ = write!(csv, ",{}", atlas.count_at(ix, iy));
                }
                csv.push('\n');
            }
            print!("{csv}");
            let marginal = atlas.counts.iter().filter(|&&c| c < 0).count();
            report.atlas = Some(AtlasSummary {
                bistable_bounding_box: atlas.bistable_bounding_box(),
                marginal_cells: marginal,
            });
            finish(report, &args.out, EXIT_OK)
        }
        Err(e) => {
            eprintln!("dnp: {e}");
            let code = exit_code_for(&e);
            report.error = Some(e.to_string());
            finish(report, &args.out, code)
        }
    }
}

fn cmd_pthr(config: &Config, args: &PthrArgs) -> u8 {
    let params = config.params;
    if args.bias_steps < 2 {
        eprintln!("dnp: bias-steps must be >= 2, got {}", args.bias_steps);
        return EXIT_USAGE;
    }
    if args.bias_from == args.bias_to {
        eprintln!("dnp: bias range must not be degenerate");
        return EXIT_USAGE;
    }
    if !(args.pmax > 0.0) || !(args.resolution > 0.0) {
        eprintln!("dnp: pmax and resolution must be > 0");
        return EXIT_USAGE;
    }
    let command = format!(
        "dnp pthr --bias-from {} --bias-to {} --bias-steps {} --pmax {} --resolution {}",
        args.bias_from, args.bias_to, args.bias_steps, args.pmax, args.resolution
    );
    let mut report = RunReport::new(command, params, config.drive);

    let n = args.bias_steps;
    let mut rows: Vec<PthrPoint> = Vec::with_capacity(n);
    for i in 0..n {
        let bias = if i == n - 1 {
            args.bias_to
        } else {
            args.bias_from + (args.bias_to - args.bias_from) * i as f64 / (n - 1) as f64
        };
        match threshold_power(
            &params,
            config.drive.b_z,
            bias,
            config.drive.helicity,
            args.pmax,
            args.resolution,
        ) {
            Ok(p_thr) => rows.push(PthrPoint { bias, p_thr }),
            Err(e) => {
                eprintln!("dnp: {e}");
                let code = exit_code_for(&e);
                report.error = Some(e.to_string());
                return finish(report, &args.out, code);
            }
        }
    }

    let mut csv = String::from("bias_V,P_thr_mW\n");
    for row in &rows {
        match row.p_thr {
            Some(p) => {
                let _ = writeln!(csv, "{},{}", fmt_g9(row.bias), fmt_g9(p));
            }
            None => {
                let _ = writeln!(csv, "{},", fmt_g9(row.bias));
            }
        }
    }
    print!("{csv}");
    report.p_thr_local_maxima = Some(local_maxima(&rows));
    report.p_thr = Some(rows);
    finish(report, &args.out, EXIT_OK)
}
