use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::extinction::ExtinctionPolicy;
use crate::genome::Element;
use crate::population::Lifetime;

/// How a generation is executed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineMode {
    /// Identical agents are processed together with exact binomial and
    /// multinomial draws.
    #[default]
    Cohort,
    /// Every agent is processed individually with its own random draws.
    Naive,
}

impl EngineMode {
    pub fn as_str(self) -> &'static str {
        match self {
            EngineMode::Cohort => "cohort",
            EngineMode::Naive => "naive",
        }
    }
}

impl std::str::FromStr for EngineMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cohort" => Ok(EngineMode::Cohort),
            "naive" => Ok(EngineMode::Naive),
            other => Err(format!(
                "unknown engine mode `{other}` (expected cohort or naive)"
            )),
        }
    }
}

/// All inputs of a single simulation run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimParams {
    /// Maximum number of generations.
    pub g_max: u64,
    /// Generation lifetime given to every newborn agent.
    pub lifetime: Lifetime,
    /// Probability that an offspring is a mutant.
    pub p_m: f64,
    /// Initial population size.
    pub n_a: u64,
    /// The fundamental element set.
    pub element_set: Vec<Element>,
    pub seed: u64,
    pub engine_mode: EngineMode,
    /// The run stops once the population total exceeds this.
    pub population_cap: u64,
    /// Replace an extinct population with a fresh initial one.
    pub reseed_on_extinction: bool,
    pub stop_at_target: bool,
    /// Complexity at which `stop_at_target` ends the run. Falls back to the
    /// rule's own hint when unset.
    pub target_complexity: Option<usize>,
    pub max_genome_len: usize,
    pub extinction: ExtinctionPolicy,
}

impl Default for SimParams {
    /// Prime-sequence setup: N = 100, G_max = 500, P_m = 0.2, N_a = 100, L = 4.
    fn default() -> Self {
        SimParams {
            g_max: 500,
            lifetime: 4,
            p_m: 0.2,
            n_a: 100,
            element_set: (1..=100).collect(),
            seed: 0,
            engine_mode: EngineMode::Cohort,
            population_cap: 1_000_000,
            reseed_on_extinction: true,
            stop_at_target: false,
            target_complexity: None,
            max_genome_len: 10_000,
            extinction: ExtinctionPolicy::default(),
        }
    }
}

impl SimParams {
    pub fn validate(&self) -> Result<(), SimError> {
        if !(0.0..=1.0).contains(&self.p_m) {
            return Err(SimError::param(
                "p_m",
                format!("{} is outside [0, 1]", self.p_m),
            ));
        }
        if self.lifetime < 1 {
            return Err(SimError::param("lifetime", "must be at least 1"));
        }
        if self.n_a < 1 {
            return Err(SimError::param("n_a", "must be at least 1"));
        }
        if self.g_max < 1 {
            return Err(SimError::param("g_max", "must be at least 1"));
        }
        if self.element_set.is_empty() {
            return Err(SimError::param("elements", "element set is empty"));
        }
        if self.population_cap < 1 {
            return Err(SimError::param("population_cap", "must be at least 1"));
        }
        if self.max_genome_len < 1 {
            return Err(SimError::param("max_genome_len", "must be at least 1"));
        }
        self.extinction.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let p = SimParams::default();
        p.validate().unwrap();
        assert_eq!((p.g_max, p.lifetime, p.n_a), (500, 4, 100));
        assert_eq!(p.p_m, 0.2);
        assert_eq!(p.element_set.len(), 100);
    }

    #[test]
    fn rejects_out_of_range() {
        let bad = |f: fn(&mut SimParams)| {
            let mut p = SimParams::default();
            f(&mut p);
            p.validate().unwrap_err()
        };
        assert!(matches!(
            bad(|p| p.p_m = 1.5),
            SimError::InvalidParam { key: "p_m", .. }
        ));
        assert!(matches!(
            bad(|p| p.p_m = f64::NAN),
            SimError::InvalidParam { key: "p_m", .. }
        ));
        assert!(matches!(
            bad(|p| p.lifetime = 0),
            SimError::InvalidParam {
                key: "lifetime",
                ..
            }
        ));
        assert!(matches!(
            bad(|p| p.n_a = 0),
            SimError::InvalidParam { key: "n_a", .. }
        ));
        assert!(matches!(
            bad(|p| p.g_max = 0),
            SimError::InvalidParam { key: "g_max", .. }
        ));
        assert!(matches!(
            bad(|p| p.element_set.clear()),
            SimError::InvalidParam {
                key: "elements",
                ..
            }
        ));
    }
}
