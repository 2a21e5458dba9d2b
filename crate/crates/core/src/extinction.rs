//! Periodic selective extinction.
//!
//! Once the population grows past a threshold, agents below the
//! `keep_top_k` highest distinct complexity levels are removed. Levels are
//! measured over viable agents (those whose genome satisfies the
//! replication rule): right after replication the longest genomes are
//! usually fresh, not yet evaluated mutants, and keeping only those would
//! wipe the population out. Agents longer than the highest viable level are
//! kept, so a purge never lowers the maximum complexity. When no agent is
//! viable, levels are taken over the whole population.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::population::Population;
use crate::rules::ReplicationRule;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtinctionKind {
    #[default]
    None,
    LowComplexityPurge,
}

impl ExtinctionKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ExtinctionKind::None => "none",
            ExtinctionKind::LowComplexityPurge => "low_complexity_purge",
        }
    }
}

impl std::str::FromStr for ExtinctionKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "none" => Ok(ExtinctionKind::None),
            "low_complexity_purge" => Ok(ExtinctionKind::LowComplexityPurge),
            other => Err(format!(
                "unknown extinction policy `{other}` (expected none or low_complexity_purge)"
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtinctionPolicy {
    pub kind: ExtinctionKind,
    /// A purge fires when the population total is strictly greater than this.
    pub trigger_threshold: u64,
    /// Number of highest distinct complexity levels that survive a purge.
    pub keep_top_k: usize,
}

impl Default for ExtinctionPolicy {
    fn default() -> Self {
        ExtinctionPolicy {
            kind: ExtinctionKind::None,
            trigger_threshold: 1_000_000,
            keep_top_k: 1,
        }
    }
}

impl ExtinctionPolicy {
    pub fn purge(trigger_threshold: u64, keep_top_k: usize) -> Self {
        ExtinctionPolicy {
            kind: ExtinctionKind::LowComplexityPurge,
            trigger_threshold,
            keep_top_k,
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.trigger_threshold < 1 {
            return Err(SimError::param(
                "extinction.threshold",
                "must be at least 1",
            ));
        }
        if self.keep_top_k < 1 {
            return Err(SimError::param(
                "extinction.keep_top_k",
                "must be at least 1",
            ));
        }
        Ok(())
    }
}

/// Applies `policy` and reports whether a purge happened.
pub fn apply_extinction(
    mut pop: Population,
    policy: &ExtinctionPolicy,
    rule: &dyn ReplicationRule,
) -> (Population, bool) {
    match policy.kind {
        ExtinctionKind::None => (pop, false),
        ExtinctionKind::LowComplexityPurge => {
            if pop.total() <= policy.trigger_threshold {
                return (pop, false);
            }
            let mut levels: BTreeSet<usize> = pop
                .iter()
                .filter(|(g, _, _)| rule.satisfies(g))
                .map(|(g, _, _)| g.complexity())
                .collect();
            if levels.is_empty() {
                levels = pop.iter().map(|(g, _, _)| g.complexity()).collect();
            }
            let cutoff = levels
                .iter()
                .rev()
                .nth(policy.keep_top_k - 1)
                .or_else(|| levels.first())
                .copied()
                .unwrap_or(0);
            pop.retain(|g, _, _| g.complexity() >= cutoff);
            (pop, true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genome::Genome;
    use crate::population::Cohort;
    use crate::rules::{AllOnes, PrimeSequence};
    use proptest::prelude::*;

    struct AnyGenome;

    impl ReplicationRule for AnyGenome {
        fn name(&self) -> &str {
            "any"
        }

        fn satisfies(&self, _: &Genome) -> bool {
            true
        }
    }

    fn levels(pop: &Population) -> BTreeSet<usize> {
        pop.iter().map(|(g, _, _)| g.complexity()).collect()
    }

    #[test]
    fn none_is_identity() {
        let pop = Population::from_cohorts([Cohort::new(Genome::single(2), 4, 5_000_000)]).unwrap();
        let (out, triggered) =
            apply_extinction(pop.clone(), &ExtinctionPolicy::default(), &AnyGenome);
        assert_eq!(out, pop);
        assert!(!triggered);
    }

    #[test]
    fn keeps_only_top_level() {
        let pop = Population::from_cohorts([
            Cohort::new(Genome::single(2), 4, 1_000_000),
            Cohort::new(Genome::from([2, 3, 5]), 4, 5),
        ])
        .unwrap();
        let policy = ExtinctionPolicy::purge(1_000_000, 1);
        for rule in [&AnyGenome as &dyn ReplicationRule, &PrimeSequence::new(100)] {
            let (out, triggered) = apply_extinction(pop.clone(), &policy, rule);
            assert!(triggered);
            assert_eq!(out.total(), 5);
            assert_eq!(levels(&out), BTreeSet::from([3]));
        }
    }

    #[test]
    fn threshold_is_strict() {
        let pop = Population::from_cohorts([
            Cohort::new(Genome::single(2), 4, 999_999),
            Cohort::new(Genome::from([2, 3]), 4, 1),
        ])
        .unwrap();
        let (out, triggered) = apply_extinction(
            pop.clone(),
            &ExtinctionPolicy::purge(1_000_000, 1),
            &AnyGenome,
        );
        assert!(!triggered);
        assert_eq!(out, pop);
    }

    #[test]
    fn unevaluated_mutants_do_not_set_the_level() {
        // [2,3,5,9] is a fresh mutant that will fail the rule; the viable
        // top level is [2,3,5].
        let pop = Population::from_cohorts([
            Cohort::new(Genome::single(2), 3, 900),
            Cohort::new(Genome::from([2, 3]), 3, 90),
            Cohort::new(Genome::from([2, 3, 5]), 3, 9),
            Cohort::new(Genome::from([2, 3, 5, 9]), 4, 2),
        ])
        .unwrap();
        let (out, triggered) = apply_extinction(
            pop,
            &ExtinctionPolicy::purge(100, 1),
            &PrimeSequence::new(100),
        );
        assert!(triggered);
        assert_eq!(levels(&out), BTreeSet::from([3, 4]));
        assert_eq!(out.total(), 11);
    }

    #[test]
    fn no_viable_agent_falls_back_to_all_levels() {
        let pop = Population::from_cohorts([
            Cohort::new(Genome::from([0]), 4, 50),
            Cohort::new(Genome::from([0, 0]), 4, 60),
        ])
        .unwrap();
        let (out, _) = apply_extinction(pop, &ExtinctionPolicy::purge(10, 1), &AllOnes::default());
        assert_eq!(levels(&out), BTreeSet::from([2]));
    }

    proptest! {
        #[test]
        fn purge_keeps_top_k_levels(
            entries in prop::collection::vec((0usize..8, 1u32..5, 1u64..50), 1..30),
            threshold in 1u64..200,
            k in 1usize..4,
        ) {
            let pop = Population::from_cohorts(entries.into_iter().map(|(len, l, c)| {
                Cohort::new(Genome::new(vec![1; len]), l, c)
            })).unwrap();
            let before = levels(&pop);
            let policy = ExtinctionPolicy::purge(threshold, k);
            let (out, triggered) = apply_extinction(pop.clone(), &policy, &AnyGenome);
            prop_assert_eq!(triggered, pop.total() > threshold);
            if triggered {
                let expected: BTreeSet<usize> = before.iter().rev().take(k).copied().collect();
                prop_assert_eq!(levels(&out), expected);
                prop_assert!(!out.is_empty());
                prop_assert_eq!(levels(&out).last().copied(), before.last().copied());
                if out.total() <= threshold {
                    let (again, t2) = apply_extinction(out.clone(), &policy, &AnyGenome);
                    prop_assert!(!t2);
                    prop_assert_eq!(again, out);
                }
            } else {
                prop_assert_eq!(out, pop);
            }
        }

        #[test]
        fn purge_preserves_viable_top_levels(
            entries in prop::collection::vec((prop::collection::vec(0u32..2, 0..7), 1u32..5, 1u64..50), 1..30),
            k in 1usize..3,
        ) {
            let rule = AllOnes::default();
            let pop = Population::from_cohorts(entries.into_iter().map(|(g, l, c)| {
                Cohort::new(Genome::new(g), l, c)
            })).unwrap();
            let viable = |p: &Population| -> BTreeSet<usize> {
                p.iter().filter(|(g, _, _)| rule.satisfies(g)).map(|(g, _, _)| g.complexity()).collect()
            };
            let (out, triggered) = apply_extinction(pop.clone(), &ExtinctionPolicy::purge(1, k), &rule);
            prop_assert!(triggered || pop.total() <= 1);
            prop_assert!(!out.is_empty());
            prop_assert_eq!(levels(&out).last().copied(), levels(&pop).last().copied());
            let top: BTreeSet<usize> = viable(&pop).into_iter().rev().take(k).collect();
            prop_assert_eq!(viable(&out).into_iter().rev().take(k).collect::<BTreeSet<_>>(), top.clone());
            if let Some(&cut) = top.iter().next() {
                prop_assert!(levels(&out).iter().all(|&l| l >= cut));
            }
        }
    }
}
