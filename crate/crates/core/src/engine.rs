//! The generation loop.
//!
//! Each generation every agent present at its start is evaluated once
//! against the replication rule. Failing agents are removed. Satisfying
//! agents emit exactly one offspring (a mutant with probability `p_m`, an
//! identical copy otherwise) with a fresh lifetime of `L`, and their own
//! lifetime drops by one. Agents whose lifetime reaches zero are removed.
//! Offspring born in a generation are first evaluated in the next one.
//!
//! Two interchangeable backends implement a generation:
//! [`step_generation`] works on whole cohorts with exact binomial and
//! multinomial draws; [`naive_step_generation`] walks individual agents and
//! serves as its distributional oracle.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::SimError;
use crate::extinction::apply_extinction;
use crate::genome::Genome;
use crate::metrics::{collect_stats, GenerationStats, StepCounters};
use crate::mutation::mutate;
use crate::params::{EngineMode, SimParams};
use crate::population::{Cohort, Lifetime, Population};
use crate::rules::ReplicationRule;
use crate::sampling::{binomial, uniform_multinomial};

/// Called for every rule-satisfying agent (or cohort of `count` identical
/// agents) between the rule check and replication. Nothing in this crate
/// installs a non-trivial hook.
pub trait AgentHook {
    fn before_replication(&mut self, _genome: &Genome, _lifetime: Lifetime, _count: u64) {}
}

/// The hook that does nothing.
#[derive(Clone, Copy, Debug, Default)]
pub struct NoHook;

impl AgentHook for NoHook {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Termination {
    CompletedGMax,
    TargetReached,
    PopulationExtinct,
    PopulationCapExceeded,
    CountOverflow,
}

impl Termination {
    pub fn as_str(self) -> &'static str {
        match self {
            Termination::CompletedGMax => "completed_g_max",
            Termination::TargetReached => "target_reached",
            Termination::PopulationExtinct => "population_extinct",
            Termination::PopulationCapExceeded => "population_cap_exceeded",
            Termination::CountOverflow => "count_overflow",
        }
    }
}

/// One extinction event.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PurgeEvent {
    pub generation: u64,
    pub max_complexity_before: usize,
    pub max_complexity_after: usize,
    pub purged: u64,
}

#[derive(Clone, Debug)]
pub struct RunResult {
    /// `series[0]` describes the initial population; `series[g]` the
    /// population after generation `g`.
    pub series: Vec<GenerationStats>,
    pub termination: Termination,
    pub generations_executed: u64,
    pub wall_time: Duration,
    pub purges: Vec<PurgeEvent>,
    /// How many times an extinct population was replaced by a fresh one.
    pub reseeds: u64,
}

impl RunResult {
    pub fn final_stats(&self) -> &GenerationStats {
        self.series
            .last()
            .expect("series always holds the initial population")
    }
}

/// Equality ignores wall time.
impl PartialEq for RunResult {
    fn eq(&self, other: &Self) -> bool {
        self.series == other.series
            && self.termination == other.termination
            && self.generations_executed == other.generations_executed
            && self.purges == other.purges
            && self.reseeds == other.reseeds
    }
}

/// Draws the initial population: `n_a` length-1 genomes, each element
/// uniform over the element set, all with lifetime `L`.
pub fn init_population<R: Rng + ?Sized>(params: &SimParams, rng: &mut R) -> Population {
    let elements = &params.element_set;
    let mut tally = vec![0u64; elements.len()];
    for _ in 0..params.n_a {
        tally[rng.random_range(0..elements.len())] += 1;
    }
    let mut pop = Population::new();
    for (&e, &c) in elements.iter().zip(&tally) {
        pop.add(Genome::single(e), params.lifetime, c)
            .expect("n_a fits in a population");
    }
    pop
}

/// Samples the offspring of `count` identical rule-satisfying agents.
///
/// The number of mutants is Binomial(count, p_m); mutants split
/// Binomial(m, 1/2) additive, the rest subtractive (all additive for an
/// empty genome). Additive mutants spread uniformly over the appended
/// element, subtractive ones over the removed position. Every returned
/// cohort has lifetime `L`; genomes may repeat across returned cohorts.
pub fn sample_offspring<R: Rng + ?Sized>(
    genome: &Genome,
    count: u64,
    params: &SimParams,
    rng: &mut R,
) -> Result<Vec<Cohort>, SimError> {
    let l = params.lifetime;
    let mutants = binomial(count, params.p_m, rng);
    let mut out = Vec::new();
    if count > mutants {
        out.push(Cohort::new(genome.clone(), l, count - mutants));
    }
    if mutants == 0 {
        return Ok(out);
    }
    let additive = if genome.is_empty() {
        mutants
    } else {
        binomial(mutants, 0.5, rng)
    };
    let subtractive = mutants - additive;

    if additive > 0 {
        check_length(genome.complexity() + 1, params)?;
        let per_element = uniform_multinomial(additive, params.element_set.len(), rng);
        for (&e, &k) in params.element_set.iter().zip(&per_element) {
            if k > 0 {
                out.push(Cohort::new(genome.appended(e), l, k));
            }
        }
    }
    if subtractive > 0 {
        let per_position = uniform_multinomial(subtractive, genome.complexity(), rng);
        for (i, &k) in per_position.iter().enumerate() {
            if k > 0 {
                out.push(Cohort::new(genome.removed(i), l, k));
            }
        }
    }
    Ok(out)
}

fn check_length(len: usize, params: &SimParams) -> Result<(), SimError> {
    if len > params.max_genome_len {
        Err(SimError::GenomeTooLong {
            len,
            max: params.max_genome_len,
        })
    } else {
        Ok(())
    }
}

/// Executes one generation on whole cohorts.
pub fn step_generation<R: Rng + ?Sized>(
    pop: &Population,
    rule: &dyn ReplicationRule,
    params: &SimParams,
    rng: &mut R,
) -> Result<(Population, StepCounters), SimError> {
    step_generation_with_hook(pop, rule, params, rng, &mut NoHook)
}

pub fn step_generation_with_hook<R: Rng + ?Sized>(
    pop: &Population,
    rule: &dyn ReplicationRule,
    params: &SimParams,
    rng: &mut R,
    hook: &mut dyn AgentHook,
) -> Result<(Population, StepCounters), SimError> {
    let mut next = Population::new();
    let mut counters = StepCounters::default();
    for (genome, lifetime, count) in pop.iter() {
        if !rule.satisfies(genome) {
            counters.rule_deaths += count;
            continue;
        }
        hook.before_replication(genome, lifetime, count);
        counters.satisfying += count;
        counters.births += count;
        for child in sample_offspring(genome, count, params, rng)? {
            next.add(child.genome, child.lifetime, child.count)?;
        }
        if lifetime <= 1 {
            counters.lifetime_deaths += count;
        } else {
            next.add(genome.clone(), lifetime - 1, count)?;
        }
    }
    Ok((next, counters))
}

/// Executes one generation agent by agent, one independent draw per agent.
///
/// Refuses to expand a population larger than `params.population_cap`.
pub fn naive_step_generation<R: Rng + ?Sized>(
    pop: &Population,
    rule: &dyn ReplicationRule,
    params: &SimParams,
    rng: &mut R,
) -> Result<(Population, StepCounters), SimError> {
    naive_step_generation_with_hook(pop, rule, params, rng, &mut NoHook)
}

pub fn naive_step_generation_with_hook<R: Rng + ?Sized>(
    pop: &Population,
    rule: &dyn ReplicationRule,
    params: &SimParams,
    rng: &mut R,
    hook: &mut dyn AgentHook,
) -> Result<(Population, StepCounters), SimError> {
    if pop.total() > params.population_cap {
        return Err(SimError::PopulationCapExceeded {
            total: pop.total(),
            cap: params.population_cap,
        });
    }
    let mut next = Population::new();
    let mut counters = StepCounters::default();
    for (genome, lifetime) in pop.individuals() {
        if !rule.satisfies(&genome) {
            counters.rule_deaths += 1;
            continue;
        }
        hook.before_replication(&genome, lifetime, 1);
        counters.satisfying += 1;
        counters.births += 1;
        let child = if rng.random_bool(params.p_m) {
            let mutant = mutate(&genome, &params.element_set, rng);
            check_length(mutant.complexity(), params)?;
            mutant
        } else {
            genome.clone()
        };
        next.add(child, params.lifetime, 1)?;
        if lifetime <= 1 {
            counters.lifetime_deaths += 1;
        } else {
            next.add(genome, lifetime - 1, 1)?;
        }
    }
    Ok((next, counters))
}

/// A run in progress.
pub struct Simulation<'r> {
    params: SimParams,
    rule: &'r dyn ReplicationRule,
    rng: ChaCha8Rng,
    population: Population,
    generation: u64,
    target: Option<usize>,
    reseeds: u64,
    last_purge: Option<PurgeEvent>,
}

impl<'r> Simulation<'r> {
    /// Seeds the random stream from `params.seed` and draws the initial
    /// population.
    pub fn new(params: SimParams, rule: &'r dyn ReplicationRule) -> Result<Self, SimError> {
        params.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
        let population = init_population(&params, &mut rng);
        Ok(Self::assemble(params, rule, rng, population))
    }

    /// Starts from a caller-supplied population instead of a random one.
    pub fn with_population(
        params: SimParams,
        rule: &'r dyn ReplicationRule,
        population: Population,
    ) -> Result<Self, SimError> {
        params.validate()?;
        let rng = ChaCha8Rng::seed_from_u64(params.seed);
        Ok(Self::assemble(params, rule, rng, population))
    }

    fn assemble(
        params: SimParams,
        rule: &'r dyn ReplicationRule,
        rng: ChaCha8Rng,
        population: Population,
    ) -> Self {
        let target = params
            .target_complexity
            .or_else(|| rule.max_complexity_hint());
        Simulation {
            params,
            rule,
            rng,
            population,
            generation: 0,
            target,
            reseeds: 0,
            last_purge: None,
        }
    }

    pub fn params(&self) -> &SimParams {
        &self.params
    }

    pub fn population(&self) -> &Population {
        &self.population
    }

    pub fn generation(&self) -> u64 {
        self.generation
    }

    pub fn target(&self) -> Option<usize> {
        self.target
    }

    pub fn reseeds(&self) -> u64 {
        self.reseeds
    }

    /// The extinction event of the most recent generation, if one fired.
    pub fn last_purge(&self) -> Option<PurgeEvent> {
        self.last_purge
    }

    pub fn stats(&self, counters: &StepCounters) -> GenerationStats {
        collect_stats(&self.population, self.generation, counters)
    }

    /// True when some rule-satisfying agent has reached the target complexity.
    pub fn target_reached(&self) -> bool {
        let Some(target) = self.target else {
            return false;
        };
        self.population
            .iter()
            .any(|(g, _, _)| g.complexity() >= target && self.rule.satisfies(g))
    }

    /// Runs one generation: replication, then the extinction policy, then
    /// reseeding if the population died out and reseeding is enabled.
    /// Reseeded agents are counted as births.
    pub fn step(&mut self) -> Result<GenerationStats, SimError> {
        self.step_with_hook(&mut NoHook)
    }

    pub fn step_with_hook(
        &mut self,
        hook: &mut dyn AgentHook,
    ) -> Result<GenerationStats, SimError> {
        let (next, mut counters) = match self.params.engine_mode {
            EngineMode::Cohort => step_generation_with_hook(
                &self.population,
                self.rule,
                &self.params,
                &mut self.rng,
                hook,
            )?,
            EngineMode::Naive => naive_step_generation_with_hook(
                &self.population,
                self.rule,
                &self.params,
                &mut self.rng,
                hook,
            )?,
        };
        self.generation += 1;

        let before_total = next.total();
        let before_max = max_complexity(&next);
        let (mut next, triggered) = apply_extinction(next, &self.params.extinction, self.rule);
        counters.extinction_triggered = triggered;
        counters.purged = before_total - next.total();
        self.last_purge = triggered.then(|| PurgeEvent {
            generation: self.generation,
            max_complexity_before: before_max,
            max_complexity_after: max_complexity(&next),
            purged: counters.purged,
        });

        if next.is_empty() && self.params.reseed_on_extinction {
            next = init_population(&self.params, &mut self.rng);
            counters.births += next.total();
            self.reseeds += 1;
        }
        self.population = next;
        Ok(self.stats(&counters))
    }

    /// Runs until a termination condition holds.
    pub fn run(mut self) -> Result<RunResult, SimError> {
        let started = Instant::now();
        let mut series = vec![self.stats(&StepCounters::default())];
        let mut purges = Vec::new();

        let termination = loop {
            if self.params.stop_at_target && self.target_reached() {
                break Termination::TargetReached;
            }
            if self.population.is_empty() {
                break Termination::PopulationExtinct;
            }
            if self.population.total() > self.params.population_cap {
                break Termination::PopulationCapExceeded;
            }
            if self.generation >= self.params.g_max {
                break Termination::CompletedGMax;
            }
            match self.step() {
                Ok(stats) => series.push(stats),
                Err(SimError::CountOverflow) => break Termination::CountOverflow,
                Err(SimError::PopulationCapExceeded { .. }) => {
                    break Termination::PopulationCapExceeded
                }
                Err(e) => return Err(e),
            }
            purges.extend(self.last_purge);
        };

        Ok(RunResult {
            series,
            termination,
            generations_executed: self.generation,
            wall_time: started.elapsed(),
            purges,
            reseeds: self.reseeds,
        })
    }
}

fn max_complexity(pop: &Population) -> usize {
    pop.iter()
        .map(|(g, _, _)| g.complexity())
        .max()
        .unwrap_or(0)
}

/// Runs a full simulation from a random initial population.
pub fn run(params: SimParams, rule: &dyn ReplicationRule) -> Result<RunResult, SimError> {
    Simulation::new(params, rule)?.run()
}

/// Runs a full simulation from the given initial population.
pub fn run_from(
    params: SimParams,
    rule: &dyn ReplicationRule,
    initial: Population,
) -> Result<RunResult, SimError> {
    Simulation::with_population(params, rule, initial)?.run()
}
