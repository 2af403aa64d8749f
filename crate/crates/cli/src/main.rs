use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use diskgrowth::commands::{CommandOutput, Session};
use diskgrowth::config::CACHE_DIR_ENV;
use diskgrowth::gallery::DEFAULT_MARGIN;
use diskgrowth::growth::DEFAULT_N_MAX;
use diskgrowth::verify::run_suite;
use diskgrowth::{BoundaryCondition, Error, EvalRegime, OutputFormat, RunConfig};

const EXIT_NUMERICAL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "diskgrowth",
    version,
    about = "Unit-disk Laplace eigenfunctions and sup-norm growth exponents"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Zero tolerance (>= 1e-13)
    #[arg(long, global = true, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, global = true, default_value_t = diskgrowth::bessel::MAX_ORDER)]
    n_cap: u32,
    #[arg(long, global = true, default_value_t = diskgrowth::bessel::MAX_ARGUMENT)]
    x_cap: f64,
    /// Zero cache directory [default: $DISKGROWTH_CACHE_DIR, then the user cache dir]
    #[arg(long, global = true)]
    cache_dir: Option<PathBuf>,
    /// Disable the on-disk zero cache
    #[arg(long, global = true, conflicts_with = "cache_dir")]
    no_cache: bool,
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write data here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the JSON summary here instead of stderr
    #[arg(long, global = true)]
    summary: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Bc {
    Dirichlet,
    Neumann,
}

impl From<Bc> for BoundaryCondition {
    fn from(b: Bc) -> Self {
        match b {
            Bc::Dirichlet => BoundaryCondition::Dirichlet,
            Bc::Neumann => BoundaryCondition::Neumann,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum Regime {
    Auto,
    Reference,
    PowerSeries,
    MeisselOne,
    MeisselTwo,
    JacobiLarge,
}

impl From<Regime> for EvalRegime {
    fn from(r: Regime) -> Self {
        match r {
            Regime::Auto => EvalRegime::Auto,
            Regime::Reference => EvalRegime::Reference,
            Regime::PowerSeries => EvalRegime::PowerSeries,
            Regime::MeisselOne => EvalRegime::MeisselOne,
            Regime::MeisselTwo => EvalRegime::MeisselTwo,
            Regime::JacobiLarge => EvalRegime::JacobiLarge,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Zeros k_{n,1..m_max} as m,k,lambda rows
    Zeros {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m_max: u32,
        #[arg(long, value_enum)]
        bc: Bc,
    },
    /// Evaluate J_n(x) or J_n'(x)
    Eval {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        x: f64,
        #[arg(long, value_enum, default_value_t = Regime::Auto)]
        regime: Regime,
        #[arg(long)]
        derivative: bool,
    },
    /// Sup norm of the normalised mode (n, m)
    Supnorm {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        m: u32,
        #[arg(long, value_enum)]
        bc: Bc,
    },
    /// Growth ratios along m = floor(n^gamma)
    Exponents {
        /// Decimal or fraction, e.g. 0.75 or 3/4
        #[arg(long, value_parser = parse_gamma)]
        gamma: f64,
        #[arg(long, value_enum)]
        bc: Bc,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: u32,
    },
    /// Full exponent table for one boundary condition
    Table {
        #[arg(long, value_enum)]
        bc: Bc,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: u32,
    },
    /// Whispering-gallery profiles along a gamma < 1 path
    Gallery {
        #[arg(long, value_parser = parse_gamma)]
        gamma: f64,
        #[arg(long, value_enum)]
        bc: Bc,
        #[arg(long, value_delimiter = ',', default_value = "25,50,100,200,400")]
        n_list: Vec<u32>,
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
    },
    /// Run the invariant suite
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn parse_gamma(s: &str) -> Result<f64, String> {
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
            let b: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
            a / b
        }
        None => s.trim().parse().map_err(|e| format!("{e}"))?,
    };
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(format!("gamma must be a finite value >= 0, got {s}"))
    }
}

fn default_cache_dir() -> Option<PathBuf> {
    if let Some(d) = std::env::var_os(CACHE_DIR_ENV).filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d));
    }
    if let Some(d) = std::env::var_os("XDG_CACHE_HOME").filter(|d| !d.is_empty()) {
        return Some(PathBuf::from(d).join("diskgrowth"));
    }
    std::env::var_os("HOME").map(|h| PathBuf::from(h).join(".cache").join("diskgrowth"))
}

fn config(g: &Global) -> RunConfig {
    RunConfig {
        tol: g.tol,
        n_cap: g.n_cap,
        x_cap: g.x_cap,
        cache_dir: if g.no_cache {
            None
        } else {
            g.cache_dir.clone().or_else(default_cache_dir)
        },
        workers: g.workers,
        output_format: match g.format {
            Format::Csv => OutputFormat::Csv,
            Format::Json => OutputFormat::Json,
        },
    }
}

fn write_to(path: Option<&Path>, text: &str, fallback: &mut dyn Write) -> diskgrowth::Result<()> {
    match path {
        Some(p) => Ok(fs::write(p, text)?),
        None => Ok(fallback.write_all(text.as_bytes())?),
    }
}

fn emit(g: &Global, out: CommandOutput) -> diskgrowth::Result<()> {
    write_to(g.out.as_deref(), &out.data, &mut io::stdout().lock())?;
    if let Some(s) = out.summary {
        write_to(g.summary.as_deref(), &s, &mut io::stderr().lock())?;
    }
    Ok(())
}

fn run(cli: Cli) -> diskgrowth::Result<u8> {
    let cfg = config(&cli.global);
    cfg.validate()?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build_global()
        .map_err(|e| Error::Numerical(format!("worker pool: {e}")))?;
    let session = Session::new(cfg)?;
    let g = &cli.global;
    let out = match cli.command {
        Command::Zeros { n, m_max, bc } => session.zeros(n, m_max, bc.into())?,
        Command::Eval {
            n,
            x,
            regime,
            derivative,
        } => session.eval(n, x, regime.into(), derivative)?,
        Command::Supnorm { n, m, bc } => session.supnorm(n, m, bc.into())?,
        Command::Exponents { gamma, bc, n_max } => session.exponents(gamma, bc.into(), n_max)?,
        Command::Table { bc, n_max } => session.table(bc.into(), n_max)?,
        Command::Gallery {
            gamma,
            bc,
            n_list,
            margin,
        } => session.gallery(gamma, bc.into(), &n_list, margin)?,
        Command::Verify { seed } => {
            let report = run_suite(&session.zeros, seed)?;
            session.zeros.flush()?;
            write_to(
                g.out.as_deref(),
                &report.to_text(),
                &mut io::stdout().lock(),
            )?;
            return Ok(if report.all_passed() {
                0
            } else {
                EXIT_NUMERICAL
            });
        }
    };
    session.zeros.flush()?;
    emit(g, out)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() {
                EXIT_USAGE
            } else {
                EXIT_NUMERICAL
            })
        }
    }
}
