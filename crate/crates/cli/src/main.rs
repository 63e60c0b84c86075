//! `spectral-gamma`: spectral radii, functional calculus, spectral K-counts and
//! stable-rank tables from the command line.
//!
//! Exit codes: 0 success, 2 malformed input or failed precondition, 3 resource
//! cap exceeded, 4 inconclusive verdict under `--strict`.

mod commands;
mod config;
mod envelope;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use spectral_gamma::groups::DEFAULT_BALL_CAP;
use spectral_gamma::ktheory::DEFAULT_RESOLUTION;
use spectral_gamma::spectra::DEFAULT_SUPPORT_CAP;
use spectral_gamma::Error;

use commands::Status;
use config::{Caps, Command, Format, RunConfig};

const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;
const EXIT_INCONCLUSIVE: u8 = 4;

#[derive(Parser)]
#[command(name = "spectral-gamma", version, about = "Certified spectral computations for group algebras and matrices")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Largest power reached by repeated squaring (power of two).
    #[arg(long, global = true)]
    n_max: Option<u64>,
    /// Agreement tolerance for verdicts, or quadrature tolerance for `calc`.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Initial quadrature nodes per circle.
    #[arg(long, global = true)]
    nodes: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Exit with 4 when a verdict is inconclusive.
    #[arg(long, global = true)]
    strict: bool,
    /// Largest ball or product set enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_BALL_CAP)]
    cap_ball: usize,
    /// Largest support of an intermediate element.
    #[arg(long, global = true, default_value_t = DEFAULT_SUPPORT_CAP)]
    cap_support: usize,
    /// Largest quadrature node count per circle.
    #[arg(long, global = true, default_value_t = 4096)]
    cap_nodes: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// l1 spectral radius and reduced spectral radius of an element.
    Radius {
        #[arg(long)]
        element: PathBuf,
        #[arg(long)]
        group: Option<String>,
    },
    /// l1, l2 and reduced operator norms of an element.
    Norm {
        #[arg(long)]
        element: PathBuf,
        #[arg(long)]
        group: Option<String>,
    },
    /// Compare the l1 spectral radius with the reduced norm.
    Sigma1 {
        #[arg(long)]
        element: PathBuf,
        #[arg(long)]
        group: Option<String>,
    },
    /// Reduced norm of a symmetric set's indicator against its size.
    Kesten {
        #[arg(long)]
        group: String,
        /// Element whose support is the set; the standard generators otherwise.
        #[arg(long)]
        element: Option<PathBuf>,
    },
    /// Holomorphic functional calculus f(m) by contour quadrature.
    Calc {
        #[arg(long)]
        matrix: PathBuf,
        /// `id`, `exp`, `log`, `chi`, `z^k`, or a JSON function (inline or file).
        #[arg(long = "fn", default_value = "id")]
        func: String,
        /// Region the contour must stay in, besides the function's domain.
        #[arg(long)]
        region: Option<String>,
        /// Use the initial node count only.
        #[arg(long)]
        fixed: bool,
    },
    /// Eigenvalue counts per component of a region.
    Kcount {
        /// Region file, or `omega0`, `omega1`, `full-plane`.
        #[arg(long)]
        region: String,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = DEFAULT_RESOLUTION)]
        resolution: usize,
    },
    /// Connected and higher stable ranks of C(X).
    Ranks {
        /// `point`, `torus:d`, `sphere:d`, `cube:k` or `cw:dim:top:codim1`.
        #[arg(long)]
        space: String,
        /// `k`, `a..b` (inclusive) or `a..=b`.
        #[arg(long, default_value = "0..4")]
        k: String,
    },
    /// Subexponentiality probe of a weight, with an optional random control check.
    Weights {
        #[arg(long)]
        group: String,
        /// `growth-sqrt`, `polynomial:s`, `constant:c` or JSON.
        #[arg(long, default_value = "growth-sqrt")]
        weight: String,
        #[arg(long)]
        element: Option<PathBuf>,
        /// Random samples for the l1 <= w(supp) l2 check.
        #[arg(long, default_value_t = 0)]
        control: usize,
    },
    /// Aggregate earlier outputs into one document.
    Report { files: Vec<PathBuf> },
}

impl Cli {
    fn into_config(self) -> RunConfig {
        let g = self.global;
        let command = match self.command {
            Cmd::Radius { element, group } => Command::Radius { element, group },
            Cmd::Norm { element, group } => Command::Norm { element, group },
            Cmd::Sigma1 { element, group } => Command::Sigma1 { element, group },
            Cmd::Kesten { group, element } => Command::Kesten { group, element },
            Cmd::Calc { matrix, func, region, fixed } => Command::Calc { matrix, func, region, fixed },
            Cmd::Kcount { region, matrix, resolution } => Command::Kcount { region, matrix, resolution },
            Cmd::Ranks { space, k } => Command::Ranks { space, k },
            Cmd::Weights { group, weight, element, control } => Command::Weights { group, weight, element, control },
            Cmd::Report { files } => Command::Report { files },
        };
        RunConfig {
            command,
            n_max: g.n_max,
            tol: g.tol,
            nodes: g.nodes,
            seed: g.seed,
            format: g.format,
            strict: g.strict,
            caps: Caps { ball: g.cap_ball, support: g.cap_support, nodes: g.cap_nodes },
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    if e.is_resource() {
        EXIT_RESOURCE
    } else {
        EXIT_INPUT
    }
}

fn configure_threads() -> Result<(), Error> {
    let Ok(v) = std::env::var("SPECTRAL_GAMMA_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| Error::Domain(format!("SPECTRAL_GAMMA_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Error::Domain(format!("thread pool: {e}")))
}

fn run(cfg: &RunConfig) -> Result<(String, Status), Error> {
    if let Command::Report { files } = &cfg.command {
        cfg.validate()?;
        return Ok((report::report(files, cfg.seed)?, Status::Done));
    }
    let out = commands::run(cfg)?;
    Ok((out.output, out.status))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_INPUT } else { 0 });
        }
    };
    let cfg = cli.into_config();
    let result = configure_threads().and_then(|_| run(&cfg));
    match result {
        Ok((output, status)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(output.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(EXIT_INPUT);
            }
            match status {
                Status::Done => ExitCode::SUCCESS,
                Status::Inconclusive if cfg.strict => {
                    eprintln!("verdict is inconclusive");
                    ExitCode::from(EXIT_INCONCLUSIVE)
                }
                Status::Inconclusive => ExitCode::SUCCESS,
                Status::CapReached(msg) => {
                    eprintln!("error: {msg}");
                    ExitCode::from(EXIT_RESOURCE)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
