use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use nilosc_cli::config::{resolve_precision, RunConfig, PRECISION_ENV};
use nilosc_cli::error::CliError;
use nilosc_cli::output::{render_orbit, render_report, render_vdc, write_out, OutFormat};
use nilosc_cli::sequence::{CoordConvention, Generator, SequenceParams};
use nilosc_core::numeric::{parse_constant, parse_constant_list, set_precision_bits, PreciseReal};
use nilosc_core::oscillation::{
    sup_over_degree, van_der_corput_check, GridSpec, OscillationReport,
};

/// High-precision nilsystem simulation and oscillation diagnostics.
#[derive(Parser)]
#[command(name = "nilosc", version, about)]
struct Cli {
    /// Working precision in bits (otherwise NILOSC_PRECISION_BITS, then 192).
    #[arg(long, global = true)]
    precision_bits: Option<u32>,
    /// Embed the fully resolved run configuration in the output header.
    #[arg(long, global = true)]
    dump_config: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stream orbit / sequence records as JSON lines or CSV.
    Orbit(OrbitArgs),
    /// Certified suprema of |A_N| over polynomial phase families per N.
    Oscillate(OscillateArgs),
    /// Evaluate both sides of the Van der Corput inequality over an (N,H) grid.
    Vdc(VdcArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CoordsFlag {
    FirstKind,
    Malcev2,
}

#[derive(Args)]
struct SeqArgs {
    /// Sequence kind: heisenberg | bracket | poly-phase | extension | affine | quasi-eigen.
    #[arg(long, visible_alias = "system")]
    sequence: String,
    /// Comma-separated constants (heisenberg α vector).
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<String>,
    /// Comma-separated constants (heisenberg β vector).
    #[arg(long, allow_hyphen_values = true)]
    beta: Option<String>,
    /// Central coordinate γ (heisenberg), defaults to 0.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    gamma: String,
    /// Observable frequency m for e^{2πim·ω_n} (heisenberg).
    #[arg(long, default_value_t = 1)]
    freq: i64,
    /// Bracket form, e.g. "phi=exp(m=1); a=[sqrt(2)]; b=[sqrt(3)]".
    #[arg(long)]
    expr: Option<String>,
    /// Polynomial coefficients c0,c1,... (poly-phase).
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Base rotation (extension).
    #[arg(long, allow_hyphen_values = true)]
    rho: Option<String>,
    /// Tower height p >= 1 (extension).
    #[arg(long, default_value_t = 1)]
    p: usize,
    /// Start point: base phase (extension) or 3 coordinates (heisenberg m=1).
    #[arg(long, allow_hyphen_values = true)]
    x0: Option<String>,
    /// Unipotent integer matrix rows "a,b;c,d" (affine).
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    /// Translation vector constants (affine).
    #[arg(long, allow_hyphen_values = true)]
    translation: Option<String>,
    /// Initial point constants (affine).
    #[arg(long, allow_hyphen_values = true)]
    y0: Option<String>,
    /// Phases θ0,θ1,... (quasi-eigen).
    #[arg(long, allow_hyphen_values = true)]
    thetas: Option<String>,
    /// Base phase of f(x) (quasi-eigen).
    #[arg(long, allow_hyphen_values = true)]
    fx: Option<String>,
    /// Seed for the extension twist parameter λ.
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Coordinate convention for heisenberg orbits.
    #[arg(long, value_enum, default_value_t = CoordsFlag::FirstKind)]
    coords: CoordsFlag,
}

impl SeqArgs {
    fn params(&self) -> SequenceParams {
        SequenceParams {
            kind: self.sequence.clone(),
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            gamma: self.gamma.clone(),
            freq: self.freq,
            expr: self.expr.clone(),
            coeffs: self.coeffs.clone(),
            rho: self.rho.clone(),
            p: self.p,
            x0: self.x0.clone(),
            matrix: self.matrix.clone(),
            translation: self.translation.clone(),
            y0: self.y0.clone(),
            thetas: self.thetas.clone(),
            fx: self.fx.clone(),
            seed: self.seed,
            coords: match self.coords {
                CoordsFlag::FirstKind => CoordConvention::FirstKind,
                CoordsFlag::Malcev2 => CoordConvention::Malcev2,
            },
        }
    }
}

#[derive(Args)]
struct OrbitArgs {
    #[command(flatten)]
    seq: SeqArgs,
    /// Number of records to stream.
    #[arg(long = "N")]
    n: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    /// jsonl | csv (default jsonl, or inferred from --out extension).
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct OscillateArgs {
    #[command(flatten)]
    seq: SeqArgs,
    /// Strictly increasing lengths, e.g. 1000,10000,100000.
    #[arg(long = "N-schedule", value_delimiter = ',')]
    n_schedule: Vec<usize>,
    /// Polynomial phase degree d.
    #[arg(long, default_value_t = 2)]
    degree: usize,
    /// Grid points per coefficient of degree >= 2 (default 256 for d <= 2, 64 beyond).
    #[arg(long)]
    grid_points: Option<usize>,
    /// DFT size for the linear sweep (default: next power of two >= 4N).
    #[arg(long)]
    transform_size: Option<usize>,
    /// Extra higher-coefficient tuples "c2[,c3..]"; repeatable.
    #[arg(long, allow_hyphen_values = true)]
    inject: Vec<String>,
    /// Fail (exit 4) if the certified slack exceeds this bound.
    #[arg(long)]
    max_slack: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// json | csv (default json, or inferred from --out extension).
    #[arg(long)]
    format: Option<String>,
}

#[derive(Args)]
struct VdcArgs {
    #[command(flatten)]
    seq: SeqArgs,
    /// Modulation α of the tested character e^{2πinα}.
    #[arg(long = "mod-alpha", default_value = "0", allow_hyphen_values = true)]
    mod_alpha: String,
    /// Lengths N, comma separated.
    #[arg(long = "N-list", value_delimiter = ',')]
    n_list: Vec<usize>,
    /// Windows H, comma separated.
    #[arg(long = "H-list", value_delimiter = ',')]
    h_list: Vec<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv | jsonl (default csv, or inferred from --out extension).
    #[arg(long)]
    format: Option<String>,
}

fn base_config(command: &str, precision: u32, seq: &SeqArgs, format: OutFormat) -> RunConfig {
    RunConfig {
        command: command.to_owned(),
        precision_bits: precision,
        seed: seq.seed,
        sequence: Generator::describe(&seq.params()),
        n_schedule: Vec::new(),
        h_list: Vec::new(),
        degree: None,
        grid_points: None,
        transform_size: None,
        injected: Vec::new(),
        max_slack: None,
        format: format.as_str().to_owned(),
        out: None,
    }
}

fn cmd_orbit(args: &OrbitArgs, precision: u32, dump_config: bool) -> Result<(), CliError> {
    let format = OutFormat::resolve(args.format.as_deref(), args.out.as_ref(), OutFormat::Jsonl)?;
    let generator = Generator::build(&args.seq.params())?;
    let records = generator.orbit_records(args.n)?;
    let mut config = base_config("orbit", precision, &args.seq, format);
    config.n_schedule = vec![args.n as usize];
    config.out = args.out.as_ref().map(|p| p.display().to_string());
    let content = render_orbit(&records, &config, dump_config, format)?;
    write_out(args.out.as_ref(), &content)
}

fn cmd_oscillate(args: &OscillateArgs, precision: u32, dump_config: bool) -> Result<(), CliError> {
    let format = OutFormat::resolve(args.format.as_deref(), args.out.as_ref(), OutFormat::Json)?;
    if args.n_schedule.is_empty() {
        return Err(CliError::usage("--N-schedule must list at least one length"));
    }
    if !args.n_schedule.windows(2).all(|w| w[0] < w[1]) {
        return Err(CliError::usage("--N-schedule must be strictly increasing"));
    }
    let generator = Generator::build(&args.seq.params())?;

    let injected = args
        .inject
        .iter()
        .map(|text| {
            let tuple = parse_constant_list(text)?
                .iter()
                .map(PreciseReal::frac_snapped)
                .collect::<Vec<_>>();
            if tuple.len() + 1 != args.degree {
                return Err(CliError::usage(format!(
                    "injected tuple `{text}` must list {} coefficients (degrees 2..={})",
                    args.degree.saturating_sub(1),
                    args.degree
                )));
            }
            Ok(tuple)
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let grid_points = args
        .grid_points
        .unwrap_or_else(|| GridSpec::default_for_degree(args.degree).points_per_coeff);

    let mut report = OscillationReport::new(Generator::describe(&args.seq.params()));
    for &n in &args.n_schedule {
        let w = generator.weyl_seq(n)?;
        let grid = GridSpec {
            points_per_coeff: grid_points,
            transform_size: args.transform_size,
            injected: injected.clone(),
            max_slack: args.max_slack,
        };
        let estimate = sup_over_degree(&w, n, args.degree, &grid)?;
        report.push(estimate)?;
    }
    if report.points.len() >= 3 {
        // a flat or degenerate schedule simply reports no fit
        let _ = report.fit_decay();
    }

    let mut config = base_config("oscillate", precision, &args.seq, format);
    config.n_schedule = args.n_schedule.clone();
    config.degree = Some(args.degree);
    config.grid_points = Some(grid_points);
    config.transform_size = args.transform_size;
    config.injected = args.inject.clone();
    config.max_slack = args.max_slack;
    config.out = args.out.as_ref().map(|p| p.display().to_string());
    let content = render_report(&report, &config, dump_config, format)?;
    write_out(args.out.as_ref(), &content)
}

fn cmd_vdc(args: &VdcArgs, precision: u32, dump_config: bool) -> Result<(), CliError> {
    let format = OutFormat::resolve(args.format.as_deref(), args.out.as_ref(), OutFormat::Csv)?;
    if args.n_list.is_empty() || args.h_list.is_empty() {
        return Err(CliError::usage("--N-list and --H-list must be non-empty"));
    }
    for &n in &args.n_list {
        for &h in &args.h_list {
            if h >= n {
                return Err(CliError::usage(format!(
                    "window H = {h} must be smaller than N = {n}"
                )));
            }
        }
    }
    let generator = Generator::build(&args.seq.params())?;
    let alpha = parse_constant(&args.mod_alpha)?.frac_snapped();
    let max_n = *args.n_list.iter().max().expect("non-empty");
    let w = generator.weyl_seq(max_n)?;

    let mut rows = Vec::new();
    for &n in &args.n_list {
        for &h in &args.h_list {
            rows.push((n, h, van_der_corput_check(&w, n, h, &alpha)?));
        }
    }

    let mut config = base_config("vdc", precision, &args.seq, format);
    config.n_schedule = args.n_list.clone();
    config.h_list = args.h_list.clone();
    config.out = args.out.as_ref().map(|p| p.display().to_string());
    let content = render_vdc(&rows, &config, dump_config, format)?;
    write_out(args.out.as_ref(), &content)
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    let precision = resolve_precision(cli.precision_bits)?;
    set_precision_bits(precision).map_err(|e| {
        CliError::usage(format!("--precision-bits / {PRECISION_ENV}: {e}"))
    })?;
    match &cli.command {
        Command::Orbit(args) => cmd_orbit(args, precision, cli.dump_config),
        Command::Oscillate(args) => cmd_oscillate(args, precision, cli.dump_config),
        Command::Vdc(args) => cmd_vdc(args, precision, cli.dump_config),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("nilosc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
