//! `iunorm`: integral-uniform norm computations and reproducible experiment
//! reports. Every stochastic command requires a seed; reruns with the same
//! seed produce byte-identical output regardless of `--threads`.
//!
//! Exit codes: 0 all report rows pass, 1 some contract row failed,
//! 2 usage or parse error.

mod commands;
mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use commands::CommandOutput;
use iunorm_core::ensemble::XiKind;
use output::{emit, Format};

#[derive(Parser)]
#[command(name = "iunorm", version, about = "Integral-uniform norm toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output path (stdout when absent); files are written atomically.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = FormatChoice::Csv)]
    format: FormatChoice,
    /// Worker threads (defaults to IUNORM_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FormatChoice {
    Csv,
    Json,
}

impl From<FormatChoice> for Format {
    fn from(choice: FormatChoice) -> Self {
        match choice {
            FormatChoice::Csv => Format::Csv,
            FormatChoice::Json => Format::Json,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KernelChoice {
    Fejer,
    Dirichlet,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DistChoice {
    Rademacher,
    Gaussian,
}

impl From<DistChoice> for XiKind {
    fn from(choice: DistChoice) -> Self {
        match choice {
            DistChoice::Rademacher => XiKind::Rademacher,
            DistChoice::Gaussian => XiKind::Gaussian,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Compute the integral-uniform norms of a discrete function from CSV.
    Norm(NormArgs),
    /// Sweep kernel m-norms against their growth rates.
    KernelSweep(KernelSweepArgs),
    /// Expected random-polynomial norms against the lower and upper scales.
    Sandwich(SandwichArgs),
    /// Derivative m-norm inequality on sampled polynomials.
    Bernstein(BernsteinArgs),
    /// Coarse 8n-net m-norm against a fine-net reference.
    Discretize(DiscretizeArgs),
    /// Sup-norm growth ratio of random ±1 trigonometric polynomials.
    SalemZygmund(SalemZygmundArgs),
    /// Search signs maximizing the worst dyadic tail average.
    SignSearch(SignSearchArgs),
    /// Dyadic grouping bound: soundness trials and the sharpness witness.
    Lemma(LemmaArgs),
}

#[derive(Args)]
pub struct NormArgs {
    /// Input CSV with header `value,mass` (`mass` optional; uniform then).
    #[arg(long)]
    pub input: PathBuf,
    /// Comma-separated m values.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub m: Vec<u64>,
    /// Estimate by Monte Carlo with this many trials instead of exactly.
    #[arg(long)]
    pub mc: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct KernelSweepArgs {
    #[arg(long, value_enum, default_value_t = KernelChoice::Both)]
    pub kind: KernelChoice,
    /// Kernel order.
    #[arg(long)]
    pub n: usize,
    /// Comma-separated m values (each must satisfy m <= n).
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<u64>,
    /// Net size as a multiple of n.
    #[arg(long, default_value_t = 8)]
    pub net_factor: usize,
}

#[derive(Args)]
pub struct SandwichArgs {
    /// JSON grid config {system, n_list, m_list, dist, trials, seed,
    /// net_factor}; overrides the individual flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated polynomial sizes.
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    /// Comma-separated m values.
    #[arg(long, value_delimiter = ',')]
    pub m: Vec<u64>,
    #[arg(long, value_enum, default_value_t = DistChoice::Rademacher)]
    pub dist: DistChoice,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = 8)]
    pub net_factor: usize,
}

#[derive(Args)]
pub struct BernsteinArgs {
    /// Polynomial order for random polynomials.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,4,16")]
    pub m: Vec<u64>,
    /// Number of random polynomials.
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Net size as a multiple of n.
    #[arg(long, default_value_t = 64)]
    pub net_factor: usize,
    /// Check one polynomial from a `j,re,im` CSV instead of random ones.
    #[arg(long)]
    pub poly: Option<PathBuf>,
}

#[derive(Args)]
pub struct DiscretizeArgs {
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, value_delimiter = ',', default_value = "1,4,16")]
    pub m: Vec<u64>,
    /// Number of random polynomials.
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fine net factor relative to the 8n net (at least 8).
    #[arg(long, default_value_t = 64)]
    pub net_factor: usize,
    #[arg(long)]
    pub poly: Option<PathBuf>,
}

#[derive(Args)]
pub struct SalemZygmundArgs {
    /// Comma-separated polynomial orders (each at least 2).
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<usize>,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Args)]
pub struct SignSearchArgs {
    /// Number of basis functions.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 2000)]
    pub attempts: u64,
    /// Certificate floor: level k passes iff lhs_k >= c0·sqrt(nk).
    #[arg(long, default_value_t = 0.05)]
    pub c0: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Exponent of the reported heavy-L1 threshold n^(1/2+delta).
    #[arg(long, default_value_t = 0.25)]
    pub delta: f64,
    /// Greedy bit-flip refinement pass after the random search.
    #[arg(long)]
    pub refine: bool,
    /// Net size as a multiple of n.
    #[arg(long, default_value_t = 8)]
    pub net_factor: usize,
}

#[derive(Args)]
pub struct LemmaArgs {
    /// Coefficient dimension.
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    /// Number of random soundness trials.
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(err) => {
            eprintln!("error: {err:#}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> anyhow::Result<bool> {
    let threads = cli.threads.or_else(|| {
        std::env::var("IUNORM_THREADS")
            .ok()
            .and_then(|value| value.parse().ok())
    });
    let format: Format = cli.format.into();
    let output = match threads {
        Some(threads) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()?;
            pool.install(|| dispatch(&cli.command, format))?
        }
        None => dispatch(&cli.command, format)?,
    };
    let (text, all_pass) = match output {
        CommandOutput::Table(report) => {
            let text = match format {
                Format::Csv => report.to_csv(),
                Format::Json => report.to_json()?,
            };
            (text, report.all_pass())
        }
        CommandOutput::Raw { text, all_pass } => (text, all_pass),
    };
    emit(&text, cli.out.as_deref())?;
    Ok(all_pass)
}

fn dispatch(command: &Command, format: Format) -> anyhow::Result<CommandOutput> {
    match command {
        Command::Norm(args) => commands::cmd_norm(args),
        Command::KernelSweep(args) => commands::cmd_kernel_sweep(args),
        Command::Sandwich(args) => commands::cmd_sandwich(args),
        Command::Bernstein(args) => commands::cmd_bernstein(args),
        Command::Discretize(args) => commands::cmd_discretize(args),
        Command::SalemZygmund(args) => commands::cmd_salem_zygmund(args),
        Command::SignSearch(args) => commands::cmd_sign_search(args, format),
        Command::Lemma(args) => commands::cmd_lemma(args),
    }
}
