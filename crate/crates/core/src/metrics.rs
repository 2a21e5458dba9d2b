//! Per-generation observables: population size, complexity, diversity.

use std::collections::BTreeMap;

use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

use crate::population::Population;

/// Event counts accumulated while executing one generation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepCounters {
    /// Agents whose genome satisfied the rule this generation.
    pub satisfying: u64,
    /// Newborn agents, including any reseeded initial population.
    pub births: u64,
    pub rule_deaths: u64,
    pub lifetime_deaths: u64,
    pub purged: u64,
    pub extinction_triggered: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenerationStats {
    pub generation: u64,
    pub population_total: u64,
    pub satisfying_total: u64,
    /// Number of distinct genome values (diversity).
    pub distinct_genomes: u64,
    pub max_complexity: usize,
    /// Exact average genome length over all agents; zero when empty.
    pub mean_complexity: Ratio<u128>,
    /// Complexity level → number of agents.
    pub complexity_histogram: BTreeMap<usize, u64>,
    pub births: u64,
    pub rule_deaths: u64,
    pub lifetime_deaths: u64,
    pub purged: u64,
    pub extinction_triggered: bool,
}

impl GenerationStats {
    pub fn mean_complexity_f64(&self) -> f64 {
        self.mean_complexity.to_f64().unwrap_or(0.0)
    }
}

pub fn collect_stats(
    pop: &Population,
    generation: u64,
    counters: &StepCounters,
) -> GenerationStats {
    let mut histogram = BTreeMap::new();
    let mut distinct = 0u64;
    let mut weighted: u128 = 0;
    let mut previous = None;
    // cohorts sharing a genome are adjacent in key order
    for (genome, _, count) in pop.iter() {
        if previous != Some(genome) {
            distinct += 1;
            previous = Some(genome);
        }
        *histogram.entry(genome.complexity()).or_insert(0) += count;
        weighted += genome.complexity() as u128 * count as u128;
    }
    let total = pop.total();
    let mean = if total == 0 {
        Ratio::zero()
    } else {
        Ratio::new(weighted, total as u128)
    };
    GenerationStats {
        generation,
        population_total: total,
        satisfying_total: counters.satisfying,
        distinct_genomes: distinct,
        max_complexity: histogram.keys().next_back().copied().unwrap_or(0),
        mean_complexity: mean,
        complexity_histogram: histogram,
        births: counters.births,
        rule_deaths: counters.rule_deaths,
        lifetime_deaths: counters.lifetime_deaths,
        purged: counters.purged,
        extinction_triggered: counters.extinction_triggered,
    }
}

/// True when no complexity level holds more agents than a lower one.
/// Empty genomes (level 0) are ignored.
pub fn lower_complexity_dominates(stats: &GenerationStats) -> bool {
    let counts: Vec<u64> = stats
        .complexity_histogram
        .range(1..)
        .map(|(_, &c)| c)
        .collect();
    counts.windows(2).all(|w| w[0] >= w[1])
}
