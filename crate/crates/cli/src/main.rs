use anyhow::{Context, Result};
use axdse_cli::config::RunConfig;
use axdse_cli::pipeline::{self, RunDir};
use axdse::circgen::LibrarySpec;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "axdse", version, about = "Design space exploration of approximate accelerators")]
struct Cli {
    /// Run directory holding every artifact of one experiment.
    #[arg(long, global = true, default_value = "run")]
    run: PathBuf,
    /// Run configuration (TOML); defaults to <run>/config.toml when present.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate and characterize the approximate circuit library.
    Genlib {
        /// Library grid specification (TOML); default grids otherwise.
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Profile operand distributions of every operation node.
    Profile {
        /// Directory of PGM images; synthetic images otherwise.
        #[arg(long)]
        images: Option<PathBuf>,
    },
    /// Reduce the library to per-node Pareto fronts.
    Reduce {
        #[arg(long)]
        max_per_node: Option<usize>,
    },
    /// Sample and label training and test configurations.
    Sample {
        #[arg(long)]
        train: Option<usize>,
        #[arg(long)]
        test: Option<usize>,
    },
    /// Fit the candidate engines and keep the best per objective.
    Train {
        /// Comma-separated learned engines.
        #[arg(long, value_delimiter = ',')]
        engines: Option<Vec<String>>,
    },
    /// Construct the pseudo-Pareto set from model estimates.
    Explore {
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        stagnation: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Re-evaluate the pseudo-Pareto set and extract the final front.
    Verify,
    /// Summarize the run and measure the estimation speedup.
    Report,
    /// Every stage in order.
    RunAll,
}

fn load_config(cli: &Cli) -> Result<RunConfig> {
    let implicit = cli.run.join("config.toml");
    match &cli.config {
        Some(p) => RunConfig::load(p),
        None if implicit.exists() => RunConfig::load(&implicit),
        None => Ok(RunConfig::default()),
    }
}

fn run(cli: Cli) -> Result<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .context("configuring the worker pool")?;
    }
    let mut cfg = load_config(&cli)?;
    match &cli.command {
        Command::Genlib { spec: Some(p) } => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            cfg.library = Some(toml::from_str::<LibrarySpec>(&text).with_context(|| format!("parsing {}", p.display()))?);
        }
        Command::Profile { images: Some(d) } => cfg.images.dir = Some(d.clone()),
        Command::Reduce { max_per_node: Some(m) } => cfg.max_per_node = Some(*m),
        Command::Sample { train, test } => {
            cfg.sampling.train = train.unwrap_or(cfg.sampling.train);
            cfg.sampling.test = test.unwrap_or(cfg.sampling.test);
        }
        Command::Train { engines: Some(e) } => cfg.engines = e.clone(),
        Command::Explore { budget, stagnation, seed } => {
            cfg.explore.budget = budget.unwrap_or(cfg.explore.budget);
            cfg.explore.stagnation = stagnation.unwrap_or(cfg.explore.stagnation);
            cfg.seed = seed.unwrap_or(cfg.seed);
        }
        _ => {}
    }
    cfg.validate()?;
    let dir = RunDir::create(&cli.run)?;
    if !matches!(cli.command, Command::Explore { .. }) {
        std::fs::write(dir.config(), cfg.to_toml())?;
    }
    match cli.command {
        Command::Genlib { .. } => {
            let c = pipeline::genlib(&cfg, &dir)?;
            println!("{} circuits written to {}", c.len(), dir.library().display());
        }
        Command::Profile { .. } => {
            let p = pipeline::profile(&cfg, &dir)?;
            println!("{} operand distributions written to {}", p.len(), dir.pmfs().display());
        }
        Command::Reduce { .. } => {
            let rl = pipeline::reduce(&cfg, &dir)?;
            println!("reduced library sizes {:?} ({:e} configurations)", rl.sizes(), rl.space_size());
        }
        Command::Sample { .. } => {
            pipeline::sample(&cfg, &dir)?;
            println!("{} training and {} test configurations labelled", cfg.sampling.train, cfg.sampling.test);
        }
        Command::Train { .. } => {
            let (q, h) = pipeline::train(&cfg, &dir)?;
            for m in [q, h] {
                println!("{}: {} (test fidelity {:.4})", m.target.name(), m.engine.name(), m.test_fidelity.unwrap_or(f64::NAN));
            }
        }
        Command::Explore { .. } => {
            let p = pipeline::explore(&cfg, &dir)?;
            println!("pseudo-Pareto set of {} configurations", p.len());
        }
        Command::Verify => {
            let v = pipeline::verify(&cfg, &dir)?;
            for (stage, count) in v.funnel.stages() {
                println!("{stage:>8}: {count:e}");
            }
        }
        Command::Report => {
            let t = pipeline::report(&cfg, &dir)?;
            println!("estimation speedup {:.0}x", t.speedup);
        }
        Command::RunAll => {
            pipeline::run_all(&cfg, &dir)?;
            println!("run complete in {}", dir.root().display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(axdse_cli::exit_code(&e) as u8)
        }
    }
}
