//! Cohort-compressed populations.
//!
//! Identical agents (same genome, same remaining lifetime) are stored once
//! with a multiplicity. The same structure backs both engine modes: the
//! per-agent engine simply expands every cohort into `count` individuals.

use std::collections::btree_map::{self, BTreeMap};

use crate::error::{SimError, MAX_COUNT};
use crate::genome::Genome;

/// Remaining generation lifetime of an agent.
pub type Lifetime = u32;

/// A group of identical agents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohort {
    pub genome: Genome,
    pub lifetime: Lifetime,
    pub count: u64,
}

impl Cohort {
    pub fn new(genome: Genome, lifetime: Lifetime, count: u64) -> Self {
        Cohort {
            genome,
            lifetime,
            count,
        }
    }
}

/// Multiset of agents keyed by `(genome, lifetime)`.
///
/// Iteration order is the key order, so every traversal is deterministic.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Population {
    cohorts: BTreeMap<(Genome, Lifetime), u64>,
    total: u64,
}

impl Population {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds a population from cohorts, merging duplicate keys.
    pub fn from_cohorts<I>(cohorts: I) -> Result<Self, SimError>
    where
        I: IntoIterator<Item = Cohort>,
    {
        let mut pop = Population::new();
        for c in cohorts {
            pop.add(c.genome, c.lifetime, c.count)?;
        }
        Ok(pop)
    }

    /// Adds `count` agents. Zero counts are ignored so no empty cohort is
    /// ever stored.
    pub fn add(&mut self, genome: Genome, lifetime: Lifetime, count: u64) -> Result<(), SimError> {
        if count == 0 {
            return Ok(());
        }
        let total = checked_sum(self.total, count)?;
        match self.cohorts.entry((genome, lifetime)) {
            btree_map::Entry::Vacant(e) => {
                if count > MAX_COUNT {
                    return Err(SimError::CountOverflow);
                }
                e.insert(count);
            }
            btree_map::Entry::Occupied(mut e) => {
                let merged = checked_sum(*e.get(), count)?;
                *e.get_mut() = merged;
            }
        }
        self.total = total;
        Ok(())
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Number of stored cohorts.
    pub fn cohort_count(&self) -> usize {
        self.cohorts.len()
    }

    pub fn count_of(&self, genome: &Genome, lifetime: Lifetime) -> u64 {
        self.cohorts
            .get(&(genome.clone(), lifetime))
            .copied()
            .unwrap_or(0)
    }

    /// Iterates `(genome, lifetime, count)` in key order.
    pub fn iter(&self) -> impl Iterator<Item = (&Genome, Lifetime, u64)> + '_ {
        self.cohorts.iter().map(|((g, l), &c)| (g, *l, c))
    }

    pub fn cohorts(&self) -> impl Iterator<Item = Cohort> + '_ {
        self.iter().map(|(g, l, c)| Cohort::new(g.clone(), l, c))
    }

    /// Keeps only the cohorts for which `keep` returns true.
    pub fn retain<F>(&mut self, mut keep: F)
    where
        F: FnMut(&Genome, Lifetime, u64) -> bool,
    {
        let mut removed = 0u64;
        self.cohorts.retain(|(g, l), c| {
            let k = keep(g, *l, *c);
            if !k {
                removed += *c;
            }
            k
        });
        self.total -= removed;
    }

    /// Expands the population into one `(genome, lifetime)` entry per agent,
    /// in key order.
    pub fn individuals(&self) -> Vec<(Genome, Lifetime)> {
        let mut out = Vec::with_capacity(self.total as usize);
        for (g, l, c) in self.iter() {
            for _ in 0..c {
                out.push((g.clone(), l));
            }
        }
        out
    }
}

fn checked_sum(a: u64, b: u64) -> Result<u64, SimError> {
    match a.checked_add(b) {
        Some(s) if s <= MAX_COUNT => Ok(s),
        _ => Err(SimError::CountOverflow),
    }
}
