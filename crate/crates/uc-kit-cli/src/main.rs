//! `uc-kit`: config-driven experiments on uniformly convex bodies.
//!
//! Exit codes: 0 on success (including a check that finds violations),
//! 1 on invalid input, 2 on a numerical abort.

mod config;
mod error;
mod output;
mod plot;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use uc_kit::solvers::StepRule;

use config::{Algorithm, AlphaArg, BodyArg, Command, CurveKind, ExperimentConfig};
use error::CliError;
use output::OutDir;

#[derive(Parser, Debug)]
#[command(name = "uc-kit", version, about = "Experiments on uniformly convex sets")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// JSON experiment config; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Root seed; falls back to the config, then to UC_KIT_SEED, then to 0.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory (default `uc-kit-out/<command>`).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; results do not depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Skip SVG plots.
    #[arg(long, global = true)]
    no_plots: bool,
    /// Body shorthand `lp:<p|inf>:<r>:<dim>` or `ell:<path>`.
    #[arg(long, global = true)]
    body: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Scan one characterization for violations.
    Certify {
        /// a, b, d, e, f, lmo or 2b.
        #[arg(long)]
        item: Option<String>,
        /// A number or `auto` (fit the δ curve and chain the transfers).
        #[arg(long)]
        alpha: Option<AlphaArg>,
        #[arg(long)]
        exponent: Option<f64>,
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Estimate a modulus curve.
    Moduli {
        /// delta, rho, local_rho or nu.
        #[arg(long)]
        kind: Option<CurveKind>,
    },
    /// Run Frank-Wolfe or PAFW and fit the convergence rate.
    Solve {
        /// fw or pafw.
        #[arg(long)]
        algorithm: Option<Algorithm>,
        /// agnostic, short_step or line_search.
        #[arg(long)]
        rule: Option<StepRule>,
        #[arg(long)]
        max_iter: Option<usize>,
    },
    /// Estimate Rademacher complexities over an n grid.
    Rademacher {
        #[arg(long)]
        trials: Option<usize>,
    },
    /// Time the oracles.
    Bench {
        #[arg(long)]
        reps: Option<usize>,
    },
}

impl Sub {
    fn command(&self) -> Command {
        match self {
            Sub::Certify { .. } => Command::Certify,
            Sub::Moduli { .. } => Command::Moduli,
            Sub::Solve { .. } => Command::Solve,
            Sub::Rademacher { .. } => Command::Rademacher,
            Sub::Bench { .. } => Command::Bench,
        }
    }
}

fn resolve_seed(flag: Option<u64>, config: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag.or(config) {
        return Ok(s);
    }
    match std::env::var("UC_KIT_SEED") {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Validation(format!("UC_KIT_SEED must be a u64, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

/// Merge the config file and the flags into a filled config.
fn resolve(cli: &Cli) -> Result<ExperimentConfig, CliError> {
    let file = match &cli.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    let command = cli.command.command();
    if let Some(c) = file.command {
        if c != command {
            return Err(CliError::Validation(format!(
                "config is for `{}` but the subcommand is `{}`",
                c.as_str(),
                command.as_str()
            )));
        }
    }
    let body = match &cli.body {
        Some(s) => Some(BodyArg::Shorthand(s.clone())),
        None => file.body.clone(),
    };
    if body.is_none() {
        return Err(CliError::Validation("missing field `body`: pass --body or set \"body\" in the config".into()));
    }
    let mut cfg = ExperimentConfig {
        command: Some(command),
        body,
        seed: Some(resolve_seed(cli.seed, file.seed)?),
        out: Some(
            cli.out.clone().or(file.out.clone()).unwrap_or_else(|| PathBuf::from("uc-kit-out").join(command.as_str())),
        ),
        plots: Some(!cli.no_plots && file.plots.unwrap_or(true)),
        ..ExperimentConfig::default()
    };
    match &cli.command {
        Sub::Certify { item, alpha, exponent, samples } => {
            let mut p = file.certify.unwrap_or_default();
            if let Some(i) = item {
                p.item = i.clone();
            }
            if let Some(a) = alpha {
                p.alpha = *a;
            }
            if exponent.is_some() {
                p.exponent = *exponent;
            }
            if let Some(n) = samples {
                p.samples = *n;
            }
            cfg.certify = Some(p);
        }
        Sub::Moduli { kind } => {
            let mut p = file.moduli.unwrap_or_default();
            if let Some(k) = kind {
                p.kind = *k;
            }
            cfg.moduli = Some(p);
        }
        Sub::Solve { algorithm, rule, max_iter } => {
            let mut p = file.solve.unwrap_or_default();
            if let Some(a) = algorithm {
                p.algorithm = *a;
            }
            if let Some(r) = rule {
                p.rule = *r;
            }
            if let Some(m) = max_iter {
                p.max_iter = *m;
            }
            cfg.solve = Some(p);
        }
        Sub::Rademacher { trials } => {
            let mut p = file.rademacher.unwrap_or_default();
            if let Some(t) = trials {
                p.trials = *t;
            }
            cfg.rademacher = Some(p);
        }
        Sub::Bench { reps } => {
            let mut p = file.bench.unwrap_or_default();
            if let Some(r) = reps {
                p.reps = *r;
            }
            cfg.bench = Some(p);
        }
    }
    Ok(cfg)
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(CliError::Validation("--threads must be positive".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Validation(format!("thread pool: {e}")))?;
    }
    let cfg = resolve(cli)?;
    let body = cfg.body.as_ref().expect("resolved").build()?;
    let seed = cfg.seed.expect("resolved");
    let command = cfg.command.expect("resolved");
    let mut out = OutDir::create(cfg.out.as_ref().expect("resolved"), cfg.plots.unwrap_or(true))?;
    println!("{} on {body}, seed {seed}", command.as_str());
    match command {
        Command::Certify => run::certify(&body, cfg.certify.as_ref().expect("resolved"), seed, &mut out)?,
        Command::Moduli => run::moduli(&body, cfg.moduli.as_ref().expect("resolved"), seed, &mut out)?,
        Command::Solve => run::solve(&body, cfg.solve.as_ref().expect("resolved"), seed, &mut out)?,
        Command::Rademacher => run::rademacher(&body, cfg.rademacher.as_ref().expect("resolved"), seed, &mut out)?,
        Command::Bench => run::bench(&body, cfg.bench.as_ref().expect("resolved"), seed, &mut out)?,
    }
    let root = out.root().to_path_buf();
    for f in out.finish(&cfg, command.as_str(), seed)? {
        println!("wrote {}", root.join(f).display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}
