use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use sr2fista::BetaMode;
use sr2fista_bench::{
    parse_backtracking, run_benchmark, AlgorithmChoice, BenchConfig, InstanceParams, ProblemKind,
    RegularizerKind,
};

const AFTER_HELP: &str = "\
Output: one CSV per algorithm, <problem>_<algorithm>.csv, with columns
  k                  iteration index
  f_gap              f(x_k) - f*
  lyapunov           E_k of the accelerated method (NaN for ISTA)
  schedule_residual  equality residual of the A_k recurrence, scaled by max(1, (alpha-beta)A_{k+1}^2) (NaN for ISTA and k = 0)
  eta                prox step of the last iteration (NaN at k = 0)
  bound_sublinear    2L|x0-x*|^2/k^2
  bound_linear       exp(-sqrt(2q)k)(f(x0)-f*), q = mu/(L+mu_h)
Reals use 17 significant digits; NaN marks unavailable fields.

Exit status: 0 when every certificate passes, 1 when any fails, 2 on errors.";

#[derive(Debug, Parser)]
#[command(name = "sr2bench", version, about = "Run the accelerated proximal method and ISTA on benchmark problems", after_help = AFTER_HELP)]
struct Cli {
    /// two_block | quadratic_l1 | quadratic_mcp | custom
    #[arg(long, default_value = "two_block")]
    problem: ProblemKind,
    /// sr2fista | ista | both
    #[arg(long, default_value = "both")]
    algorithm: AlgorithmChoice,
    /// compromised | plain
    #[arg(long, default_value = "compromised")]
    beta_mode: BetaMode,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    /// Seeds random instances and wDG sampling.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory (must exist).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Also write an SVG convergence plot per run.
    #[arg(long)]
    plot: bool,
    #[arg(long, default_value_t = 1)]
    trace_every: usize,
    /// Backtracking on the Lipschitz constant: L0,FACTOR
    #[arg(long, value_parser = parse_backtracking)]
    backtracking: Option<sr2fista::Backtracking>,
    /// Dimension of random instances.
    #[arg(long, default_value_t = 100)]
    dim: usize,
    /// Smallest curvature of random instances.
    #[arg(long, default_value_t = 1.0)]
    mu_g: f64,
    /// Largest curvature of random instances.
    #[arg(long, default_value_t = 1000.0)]
    lipschitz: f64,
    /// Penalty level.
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// MCP concavity parameter.
    #[arg(long, default_value_t = 3.0)]
    gamma: f64,
    /// SCAD shape parameter.
    #[arg(long, default_value_t = 3.7)]
    scad_a: f64,
    /// Penalty of custom problems: zero | l1 | mcp | scad
    #[arg(long, default_value = "l1")]
    regularizer: RegularizerKind,
    /// Headered CSV with weight and center columns (custom problems).
    #[arg(long)]
    coeffs: Option<PathBuf>,
    /// Random triples for the wDG certificate.
    #[arg(long, default_value_t = 200)]
    wdg_samples: usize,
}

impl From<Cli> for BenchConfig {
    fn from(c: Cli) -> Self {
        BenchConfig {
            problem: c.problem,
            algorithm: c.algorithm,
            beta_mode: c.beta_mode,
            max_iters: c.max_iters,
            seed: c.seed,
            output_dir: c.out,
            plot: c.plot,
            trace_every: c.trace_every,
            backtracking: c.backtracking,
            instance: InstanceParams {
                dim: c.dim,
                mu_g: c.mu_g,
                lipschitz: c.lipschitz,
                lambda: c.lambda,
                gamma: c.gamma,
                scad_a: c.scad_a,
                regularizer: c.regularizer,
                coeffs: c.coeffs,
            },
            wdg_samples: c.wdg_samples,
        }
    }
}

fn main() -> ExitCode {
    let cfg = BenchConfig::from(Cli::parse());
    match run_benchmark(&cfg) {
        Ok(report) => {
            eprintln!("{}", report.summary());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
