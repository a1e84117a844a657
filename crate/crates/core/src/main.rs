use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use coupling_lab::lab::{emit, run_suite, ExperimentConfig, Format};
use coupling_lab::{LabError, Result};

#[derive(Parser)]
#[command(name = "coupling-lab", version, about = "Verification suites for commuting actions and their coupling constants")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args)]
struct Global {
    /// Experiment config (TOML); flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Report path; standard output when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true)]
    format: Option<Format>,
    /// Monte Carlo samples per estimate.
    #[arg(long, global = true)]
    samples: Option<u64>,
    #[arg(long, global = true)]
    max_dim: Option<usize>,
    /// List every check on standard error, not only failures.
    #[arg(short, long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Axioms and couplings of systems given as description files.
    Verify {
        #[arg(long, required = true, num_args = 1..)]
        system: Vec<String>,
    },
    /// Dynamical and operator couplings of product models.
    Coupling {
        /// Comma-separated `MxN` list, e.g. `2x3,3x4`.
        #[arg(long)]
        models: Option<String>,
    },
    /// Torus models, lattice commutation, clock/shift and Weyl checks.
    Torus {
        #[arg(long, requires = "q")]
        p: Option<u64>,
        #[arg(long, requires = "p")]
        q: Option<u64>,
        /// Comma-separated `P:Q` list.
        #[arg(long)]
        pairs: Option<String>,
        /// Clock/shift dimension.
        #[arg(long, requires = "p_step")]
        n: Option<usize>,
        /// Clock/shift phase numerator.
        #[arg(long, requires = "n")]
        p_step: Option<usize>,
        /// Decimal target for a convergent sweep.
        #[arg(long)]
        gamma: Option<String>,
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Bernoulli couplings, characters and window checks.
    Symmetric {
        /// Comma-separated rational weights, e.g. `1/2,3/10,1/5`.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long)]
        r: Option<u32>,
        /// Window radius for the pseudogroupoid checks.
        #[arg(long)]
        n: Option<usize>,
    },
    /// Regular models and crossed-product traces.
    Regular {
        /// Comma-separated orders.
        #[arg(long)]
        orders: Option<String>,
    },
    /// Every suite.
    All,
}

fn parse_list<T: std::str::FromStr>(s: &str, sep: char, what: &str) -> Result<Vec<[T; 2]>> {
    s.split(',')
        .map(|item| {
            let parts: Vec<&str> = item.trim().split(sep).collect();
            match parts.as_slice() {
                [a, b] => match (a.trim().parse(), b.trim().parse()) {
                    (Ok(a), Ok(b)) => Ok([a, b]),
                    _ => Err(LabError::Config(format!("bad {what} entry `{item}`"))),
                },
                _ => Err(LabError::Config(format!("bad {what} entry `{item}`"))),
            }
        })
        .collect()
}

fn build_config(cli: Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.global.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    let g = cli.global;
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    if let Some(out) = g.out {
        cfg.out = Some(out.display().to_string());
    }
    if let Some(format) = g.format {
        cfg.format = format;
    }
    if let Some(samples) = g.samples {
        cfg.samples = samples;
    }
    if let Some(max_dim) = g.max_dim {
        cfg.max_dim = max_dim;
    }
    let Some(command) = cli.command else {
        return Ok(cfg);
    };
    cfg.suites = match command {
        Command::Verify { system } => {
            cfg.coupling.models.clear();
            cfg.coupling.systems = system;
            vec!["axioms".into(), "coupling".into()]
        }
        Command::Coupling { models } => {
            if let Some(m) = models {
                cfg.coupling.models = parse_list(&m, 'x', "model")?;
            }
            vec!["coupling".into()]
        }
        Command::Torus { p, q, pairs, n, p_step, gamma, terms } => {
            if let Some(list) = pairs {
                cfg.torus.pairs = parse_list(&list, ':', "pair")?;
            }
            if let (Some(p), Some(q)) = (p, q) {
                cfg.torus.pairs = vec![[p, q]];
            }
            if let (Some(n), Some(step)) = (n, p_step) {
                cfg.torus.clock_shift = vec![[n, step]];
            }
            if gamma.is_some() {
                cfg.torus.gamma = gamma;
            }
            if let Some(t) = terms {
                cfg.torus.terms = t;
            }
            vec!["torus".into()]
        }
        Command::Symmetric { weights, r, n } => {
            if let Some(w) = weights {
                cfg.symmetric.specs = vec![w.split(',').map(|s| s.trim().to_string()).collect()];
            }
            if let Some(r) = r {
                cfg.symmetric.r = vec![r];
            }
            if let Some(n) = n {
                let r = cfg.symmetric.r.first().copied().unwrap_or(0) as usize;
                cfg.symmetric.windows = vec![[r, n]];
            }
            vec!["symmetric".into()]
        }
        Command::Regular { orders } => {
            if let Some(o) = orders {
                cfg.regular.orders = o
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| LabError::Config(format!("bad order `{s}`"))))
                    .collect::<Result<_>>()?;
            }
            vec!["regular".into()]
        }
        Command::All => vec!["all".into()],
    };
    Ok(cfg)
}

fn run(cli: Cli) -> Result<i32> {
    let verbose = cli.global.verbose;
    let cfg = build_config(cli)?;
    let start = Instant::now();
    let report = run_suite(&cfg)?;
    let out = cfg.out.as_ref().map(PathBuf::from);
    emit(&report, cfg.format, out.as_deref())?;
    eprint!("{}", report.human_summary(verbose));
    eprintln!("wall time {:.2}s", start.elapsed().as_secs_f64());
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
