use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use semihilbert::suite::{CampaignConfig, RankRule};
use semihilbert::SweepConfig;
use semihilbert_cli::{self as cli, CliResult, Outcome, RangeFormat, UsageError, EXIT_USAGE};

/// Operators on semi-Hilbertian spaces: A-seminorms, A-numerical radii and
/// ranges, and a randomized verification suite of numerical radius
/// inequalities.
#[derive(Parser, Debug)]
#[command(name = "semihilbert", version)]
struct Cli {
    /// Angles in the coarse sweep of the radius optimizer.
    #[arg(long, global = true, default_value_t = 720)]
    grid_n: usize,
    /// Angle tolerance of the golden-section refinement.
    #[arg(long, global = true, default_value_t = 1e-10)]
    refine_tol: f64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug)]
struct Target {
    /// Instance JSON file.
    instance: PathBuf,
    /// Operator name inside the instance.
    operator: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Csv,
    Svg,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Seminorm, numerical radius, Crawford number, classes and membership.
    Compute(Target),
    /// The A-adjoint T^♯ = A†T*A.
    Adjoint(Target),
    /// Run a randomized verification campaign.
    Verify {
        #[arg(long, value_delimiter = ',', default_values_t = [2, 3, 4, 6, 8])]
        dims: Vec<usize>,
        /// Rank rules: full, n-1, half or a fixed integer.
        #[arg(long, value_delimiter = ',', default_value = "full,n-1,half")]
        ranks: Vec<String>,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 20_240_601)]
        seed: u64,
        /// Comma-separated check names (default: all).
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// JSON report path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Markdown report path.
        #[arg(long)]
        md: Option<PathBuf>,
        /// List the registry and exit.
        #[arg(long)]
        list: bool,
    },
    /// Support points of the A-numerical range.
    Range {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 360)]
        points: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Output file (default: standard output).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equality cases of the sharp inequalities.
    Sharpness,
    /// Compare engine values with a random-sampling oracle.
    Oracle {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 20_000)]
        samples: usize,
        /// Defaults to the instance seed, then 0.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 8)]
        ascent_iters: usize,
    },
}

fn init_threads() -> CliResult<()> {
    let Ok(v) = std::env::var("SEMIHILBERT_THREADS") else { return Ok(()) };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| UsageError(format!("SEMIHILBERT_THREADS must be a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| UsageError(e.to_string()))
}

fn run(cli: Cli) -> CliResult<Outcome> {
    init_threads()?;
    let sweep = SweepConfig { grid_n: cli.grid_n, refine_tol: cli.refine_tol };
    sweep.validate()?;
    match cli.cmd {
        Cmd::Compute(t) => cli::compute(&cli::load_instance(&t.instance)?, &t.operator, sweep),
        Cmd::Adjoint(t) => cli::adjoint(&cli::load_instance(&t.instance)?, &t.operator),
        Cmd::Verify { list: true, .. } => {
            let mut s = String::new();
            for d in semihilbert::suite::registry() {
                s.push_str(&format!("{:<18} {}\n", d.name, d.statement));
            }
            Ok(Outcome { stdout: s, code: 0 })
        }
        Cmd::Verify { dims, ranks, trials, seed, checks, out, md, .. } => {
            let ranks = ranks.iter().map(|r| r.parse::<RankRule>()).collect::<Result<Vec<_>, _>>()?;
            let checks = checks.map(|v| v.into_iter().filter(|s| !s.trim().is_empty()).collect());
            let cfg = CampaignConfig { dims, ranks, trials_per_check: trials, seed, checks, sweep, ..Default::default() };
            cli::verify(&cfg, out.as_deref(), md.as_deref())
        }
        Cmd::Range { target, points, format, out } => {
            let format = match format {
                Format::Csv => RangeFormat::Csv,
                Format::Svg => RangeFormat::Svg,
            };
            let o = cli::range(&cli::load_instance(&target.instance)?, &target.operator, points, format, sweep)?;
            match out {
                Some(p) => {
                    cli::write_atomic(&p, &o.stdout)?;
                    Ok(Outcome { stdout: String::new(), code: o.code })
                }
                None => Ok(o),
            }
        }
        Cmd::Sharpness => cli::sharpness(sweep),
        Cmd::Oracle { target, samples, seed, ascent_iters } => {
            let inst = cli::load_instance(&target.instance)?;
            let seed = seed.or(inst.seed).unwrap_or(0);
            cli::oracle(&inst, &target.operator, samples, seed, ascent_iters, sweep)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE as u8 } else { 0 });
        }
    };
    match run(cli) {
        Ok(o) => {
            let mut out = std::io::stdout().lock();
            let _ = out.write_all(o.stdout.as_bytes());
            let _ = out.flush();
            ExitCode::from(o.code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}
