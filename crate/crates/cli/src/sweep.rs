//! Multi-seed sweeps and their aggregate statistics.

use std::collections::BTreeMap;

use rayon::prelude::*;
use selfrep::{run, RunResult, SimError, SimParams};
use serde::Serialize;

use crate::config::SimConfig;

/// Outcome of one seed.
#[derive(Debug)]
pub struct SeedRun {
    pub seed: u64,
    pub result: Result<RunResult, SimError>,
}

#[derive(Debug)]
pub struct SweepOutcome {
    /// One entry per seed, in seed order.
    pub runs: Vec<SeedRun>,
    pub summary: Summary,
}

/// Cross-seed statistics at one generation, over the runs that reached it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GenerationAggregate {
    pub generation: u64,
    pub runs: usize,
    pub max_complexity_mean: f64,
    pub max_complexity_std: f64,
    pub distinct_genomes_mean: f64,
    pub distinct_genomes_std: f64,
    pub population_total_mean: f64,
    pub mean_complexity_mean: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeedSummary {
    pub seed: u64,
    pub termination: String,
    pub generations_executed: u64,
    pub final_population: u64,
    pub final_max_complexity: usize,
    pub purges: usize,
    pub reseeds: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FailedSeed {
    pub seed: u64,
    pub error: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Summary {
    pub problem: String,
    pub runs: usize,
    pub terminations: BTreeMap<String, usize>,
    pub failed_seeds: Vec<FailedSeed>,
    /// Last generation every successful run executed.
    pub final_common_generation: Option<u64>,
    pub seeds: Vec<SeedSummary>,
    pub per_generation: Vec<GenerationAggregate>,
}

/// Runs seeds `seed_base .. seed_base + runs` in parallel. Results are
/// merged in seed order, so the outcome does not depend on scheduling.
pub fn run_sweep(config: &SimConfig) -> SweepOutcome {
    let rule = config.problem.build();
    let seeds: Vec<u64> = (0..config.runs as u64)
        .map(|i| config.seed_base.wrapping_add(i))
        .collect();
    let runs: Vec<SeedRun> = seeds
        .par_iter()
        .map(|&seed| {
            let params = SimParams {
                seed,
                ..config.params.clone()
            };
            SeedRun {
                seed,
                result: run(params, rule.as_ref()),
            }
        })
        .collect();
    let summary = summarize(config.problem.name(), &runs);
    SweepOutcome { runs, summary }
}

pub fn summarize(problem: &str, runs: &[SeedRun]) -> Summary {
    let mut terminations = BTreeMap::new();
    let mut failed_seeds = Vec::new();
    let mut seeds = Vec::new();
    let mut ok = Vec::new();
    for r in runs {
        match &r.result {
            Ok(result) => {
                *terminations
                    .entry(result.termination.as_str().to_string())
                    .or_insert(0) += 1;
                let last = result.final_stats();
                seeds.push(SeedSummary {
                    seed: r.seed,
                    termination: result.termination.as_str().to_string(),
                    generations_executed: result.generations_executed,
                    final_population: last.population_total,
                    final_max_complexity: last.max_complexity,
                    purges: result.purges.len(),
                    reseeds: result.reseeds,
                });
                ok.push(result);
            }
            Err(e) => {
                *terminations.entry("error".to_string()).or_insert(0) += 1;
                failed_seeds.push(FailedSeed {
                    seed: r.seed,
                    error: e.to_string(),
                });
            }
        }
    }

    let longest = ok.iter().map(|r| r.series.len()).max().unwrap_or(0);
    let per_generation = (0..longest)
        .map(|g| {
            let alive: Vec<_> = ok.iter().filter_map(|r| r.series.get(g)).collect();
            let (mc_mean, mc_std) = mean_std(alive.iter().map(|s| s.max_complexity as f64));
            let (dg_mean, dg_std) = mean_std(alive.iter().map(|s| s.distinct_genomes as f64));
            let (pt_mean, _) = mean_std(alive.iter().map(|s| s.population_total as f64));
            let (cx_mean, _) = mean_std(alive.iter().map(|s| s.mean_complexity_f64()));
            GenerationAggregate {
                generation: g as u64,
                runs: alive.len(),
                max_complexity_mean: mc_mean,
                max_complexity_std: mc_std,
                distinct_genomes_mean: dg_mean,
                distinct_genomes_std: dg_std,
                population_total_mean: pt_mean,
                mean_complexity_mean: cx_mean,
            }
        })
        .collect();

    Summary {
        problem: problem.to_string(),
        runs: runs.len(),
        terminations,
        failed_seeds,
        final_common_generation: ok.iter().map(|r| r.generations_executed).min(),
        seeds,
        per_generation,
    }
}

/// Mean and sample standard deviation (zero for fewer than two values).
pub fn mean_std(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let v: Vec<f64> = values.collect();
    if v.is_empty() {
        return (0.0, 0.0);
    }
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, 0.0);
    }
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}
