use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use selfrep::{EngineMode, ExtinctionPolicy, RuleKind};
use selfrep_cli::output::{write_run_files, write_sweep_files, ChartColumn};
use selfrep_cli::sweep::run_sweep;
use selfrep_cli::{parse_config, SimConfig};

#[derive(Parser)]
#[command(
    name = "selfrep",
    version,
    about = "Self-replicating agent population simulator"
)]
struct Cli {
    /// Generation backend, overriding the config file.
    #[arg(long, global = true, value_parser = parse_engine)]
    engine: Option<EngineMode>,

    /// Column to chart against generation (implies chart output).
    #[arg(long, global = true, value_enum)]
    chart: Option<ChartColumn>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a single seed.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run seeds seed_base .. seed_base + runs and aggregate them.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        runs: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Discover the primes up to 100 with periodic extinction.
    PrimesDemo {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Grow an all-ones genome of length 20 with periodic extinction.
    OnemaxDemo {
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_engine(s: &str) -> Result<EngineMode, String> {
    s.parse()
}

fn load_config(path: &Path) -> Result<SimConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_config(&text).with_context(|| format!("in {}", path.display()))
}

fn demo_config(
    problem: RuleKind,
    g_max: u64,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> SimConfig {
    let mut config = SimConfig::for_problem(problem);
    config.params.seed = seed.unwrap_or(0);
    config.out_dir = out.unwrap_or_else(|| PathBuf::from("out"));
    config.params.extinction = ExtinctionPolicy::purge(1_000_000, 1);
    config.params.stop_at_target = true;
    config.params.g_max = g_max;
    config.params.population_cap = 100_000_000;
    config
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    let (mut config, single) = match cli.command {
        Command::Run { config, seed, out } => {
            let mut c = load_config(&config)?;
            if let Some(seed) = seed {
                c.params.seed = seed;
            }
            if let Some(out) = out {
                c.out_dir = out;
            }
            (c, true)
        }
        Command::Sweep { config, runs, out } => {
            let mut c = load_config(&config)?;
            anyhow::ensure!(runs >= 1, "--runs must be at least 1");
            c.runs = runs;
            if let Some(out) = out {
                c.out_dir = out;
            }
            (c, false)
        }
        Command::PrimesDemo { seed, out } => (
            demo_config(RuleKind::Primes { limit: 100 }, 50_000, seed, out),
            true,
        ),
        Command::OnemaxDemo { seed, out } => (
            demo_config(
                RuleKind::OneMax {
                    target_len: Some(20),
                },
                20_000,
                seed,
                out,
            ),
            true,
        ),
    };
    if let Some(mode) = cli.engine {
        config.params.engine_mode = mode;
    }
    let chart = cli
        .chart
        .or(config.emit_chart.then_some(ChartColumn::MaxComplexity));

    fs::create_dir_all(&config.out_dir)
        .with_context(|| format!("creating {}", config.out_dir.display()))?;
    fs::write(
        config.out_dir.join("effective.conf"),
        config.to_config_string(),
    )
    .context("writing effective.conf")?;

    if single {
        run_single(&config, chart)
    } else {
        run_many(&config, chart)
    }
}

fn run_single(config: &SimConfig, chart: Option<ChartColumn>) -> Result<()> {
    let rule = config.problem.build();
    let seed = config.params.seed;
    let result = selfrep::run(config.params.clone(), rule.as_ref())?;
    let last = result.final_stats();
    println!(
        "seed {seed}: {} after {} generations in {:.3}s; population {}, max complexity {}, \
         distinct genomes {}, {} purges, {} reseeds",
        result.termination.as_str(),
        result.generations_executed,
        result.wall_time.as_secs_f64(),
        last.population_total,
        last.max_complexity,
        last.distinct_genomes,
        result.purges.len(),
        result.reseeds,
    );
    write_run_files(&config.out_dir, config.problem.name(), seed, result, chart)?;
    println!("wrote {}", config.out_dir.display());
    Ok(())
}

fn run_many(config: &SimConfig, chart: Option<ChartColumn>) -> Result<()> {
    let outcome = run_sweep(config);
    for r in &outcome.runs {
        match &r.result {
            Ok(result) => println!(
                "seed {}: {} after {} generations in {:.3}s, max complexity {}",
                r.seed,
                result.termination.as_str(),
                result.generations_executed,
                result.wall_time.as_secs_f64(),
                result.final_stats().max_complexity
            ),
            Err(e) => eprintln!("seed {}: error: {e}", r.seed),
        }
    }
    write_sweep_files(&config.out_dir, &outcome, chart)?;
    println!("terminations: {:?}", outcome.summary.terminations);
    println!("wrote {}", config.out_dir.display());
    Ok(())
}
