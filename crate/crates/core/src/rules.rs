//! Replication rules.
//!
//! A rule is a binary predicate on genomes: agents whose genome satisfies it
//! survive and self-replicate, all others are removed. Two rules come from
//! the original experiments (prime-sequence prefix and all-ones); the third,
//! [`SequencePrefix`], is an experimentation aid that generalises the prime
//! rule to an arbitrary user-supplied integer sequence.

use std::fmt;
use std::str::FromStr;

use crate::genome::{Element, Genome};

pub trait ReplicationRule: Send + Sync {
    fn name(&self) -> &str;

    /// Must be pure and deterministic.
    fn satisfies(&self, genome: &Genome) -> bool;

    /// Largest complexity a satisfying genome can reach, if bounded or targeted.
    fn max_complexity_hint(&self) -> Option<usize> {
        None
    }
}

/// Ascending list of all primes `<= limit` (sieve of Eratosthenes).
pub fn prime_sieve(limit: u32) -> Vec<u32> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            for j in (i * i..=n).step_by(i) {
                composite[j] = true;
            }
        }
        i += 1;
    }
    (2..=n)
        .filter(|&k| !composite[k])
        .map(|k| k as u32)
        .collect()
}

/// True iff `genome` is non-empty and equals the first `|genome|` primes
/// `<= limit`.
pub fn prime_sequence_satisfies(genome: &Genome, limit: u32) -> bool {
    is_nonempty_prefix(genome.elements(), &prime_sieve(limit))
}

/// True iff `genome` is non-empty and every element equals 1.
pub fn all_ones_satisfies(genome: &Genome) -> bool {
    !genome.is_empty() && genome.elements().iter().all(|&e| e == 1)
}

fn is_nonempty_prefix(elements: &[Element], sequence: &[Element]) -> bool {
    !elements.is_empty() && sequence.starts_with(elements)
}

/// Continuous sequence of primes starting from 2, without repetition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimeSequence {
    limit: u32,
    primes: Vec<u32>,
}

impl PrimeSequence {
    pub fn new(limit: u32) -> Self {
        PrimeSequence {
            limit,
            primes: prime_sieve(limit),
        }
    }

    pub fn limit(&self) -> u32 {
        self.limit
    }

    pub fn primes(&self) -> &[u32] {
        &self.primes
    }
}

impl ReplicationRule for PrimeSequence {
    fn name(&self) -> &str {
        "primes"
    }

    fn satisfies(&self, genome: &Genome) -> bool {
        is_nonempty_prefix(genome.elements(), &self.primes)
    }

    fn max_complexity_hint(&self) -> Option<usize> {
        Some(self.primes.len())
    }
}

/// OneMax as a replication rule: replicate only if every element is 1.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AllOnes {
    /// Desired genome length. Used only as a stopping condition.
    pub target_len: Option<usize>,
}

impl ReplicationRule for AllOnes {
    fn name(&self) -> &str {
        "onemax"
    }

    fn satisfies(&self, genome: &Genome) -> bool {
        all_ones_satisfies(genome)
    }

    fn max_complexity_hint(&self) -> Option<usize> {
        self.target_len
    }
}

/// Non-empty prefix of an arbitrary integer sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SequencePrefix {
    sequence: Vec<Element>,
}

impl SequencePrefix {
    pub fn new(sequence: Vec<Element>) -> Self {
        SequencePrefix { sequence }
    }

    pub fn sequence(&self) -> &[Element] {
        &self.sequence
    }
}

impl ReplicationRule for SequencePrefix {
    fn name(&self) -> &str {
        "sequence"
    }

    fn satisfies(&self, genome: &Genome) -> bool {
        is_nonempty_prefix(genome.elements(), &self.sequence)
    }

    fn max_complexity_hint(&self) -> Option<usize> {
        Some(self.sequence.len())
    }
}

/// Name-addressable rule selection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleKind {
    Primes { limit: u32 },
    OneMax { target_len: Option<usize> },
    Sequence { values: Vec<Element> },
}

impl RuleKind {
    pub fn name(&self) -> &'static str {
        match self {
            RuleKind::Primes { .. } => "primes",
            RuleKind::OneMax { .. } => "onemax",
            RuleKind::Sequence { .. } => "sequence",
        }
    }

    pub fn build(&self) -> Box<dyn ReplicationRule> {
        match self {
            RuleKind::Primes { limit } => Box::new(PrimeSequence::new(*limit)),
            RuleKind::OneMax { target_len } => Box::new(AllOnes {
                target_len: *target_len,
            }),
            RuleKind::Sequence { values } => Box::new(SequencePrefix::new(values.clone())),
        }
    }

    /// Fundamental element set the problem draws from: `1..=N` for primes,
    /// `{0, 1}` for OneMax, `1..=max(values)` for a user sequence.
    pub fn default_elements(&self) -> Vec<Element> {
        match self {
            RuleKind::Primes { limit } => (1..=*limit).collect(),
            RuleKind::OneMax { .. } => vec![0, 1],
            RuleKind::Sequence { values } => {
                let hi = values.iter().copied().max().unwrap_or(1).max(1);
                (1..=hi).collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownRule(pub String);

impl fmt::Display for UnknownRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "unknown rule `{}` (expected primes, onemax or sequence)",
            self.0
        )
    }
}

impl std::error::Error for UnknownRule {}

/// Parses a bare rule name into its default parameterisation.
impl FromStr for RuleKind {
    type Err = UnknownRule;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "primes" => Ok(RuleKind::Primes { limit: 100 }),
            "onemax" => Ok(RuleKind::OneMax { target_len: None }),
            "sequence" => Ok(RuleKind::Sequence { values: Vec::new() }),
            other => Err(UnknownRule(other.to_string())),
        }
    }
}
