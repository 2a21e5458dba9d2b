//! Populations of self-replicating agents.
//!
//! Agents are variable-length genomes over a finite element set. In every
//! generation an agent survives and copies itself only if its genome
//! satisfies a binary replication rule; copies are occasionally imperfect
//! (one element appended or removed), which lets complexity drift upward
//! without any fitness-proportional selection. A periodic purge of
//! low-complexity agents keeps the population tractable, turning the
//! process into a stochastic optimizer.
//!
//! ```
//! use selfrep::{run, PrimeSequence, SimParams, Termination};
//!
//! let params = SimParams { population_cap: 10_000, ..SimParams::default() };
//! let result = run(params, &PrimeSequence::new(100)).unwrap();
//! assert_eq!(result.termination, Termination::PopulationCapExceeded);
//! ```

pub mod engine;
pub mod error;
pub mod extinction;
pub mod genome;
pub mod metrics;
pub mod mutation;
pub mod params;
pub mod population;
pub mod rules;
pub mod sampling;

pub use engine::{
    init_population, naive_step_generation, run, run_from, sample_offspring, step_generation,
    AgentHook, NoHook, PurgeEvent, RunResult, Simulation, Termination,
};
pub use error::{SimError, MAX_COUNT};
pub use extinction::{apply_extinction, ExtinctionKind, ExtinctionPolicy};
pub use genome::{Element, Genome};
pub use metrics::{collect_stats, GenerationStats, StepCounters};
pub use mutation::{mutate, MutationKind};
pub use params::{EngineMode, SimParams};
pub use population::{Cohort, Lifetime, Population};
pub use rules::{
    all_ones_satisfies, prime_sequence_satisfies, prime_sieve, AllOnes, PrimeSequence,
    ReplicationRule, RuleKind, SequencePrefix,
};
