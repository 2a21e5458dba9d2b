//! The imperfect-copy operator.
//!
//! A mutation is additive or subtractive with equal probability. Additive
//! mutations append one element drawn uniformly from the element set;
//! subtractive mutations delete one uniformly chosen position.

use rand::Rng;

use crate::genome::{Element, Genome};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MutationKind {
    Additive,
    Subtractive,
}

/// Applies one random mutation. An empty genome can only grow, so its
/// mutation is always additive.
pub fn mutate<R: Rng + ?Sized>(genome: &Genome, elements: &[Element], rng: &mut R) -> Genome {
    let kind = if genome.is_empty() || rng.random_bool(0.5) {
        MutationKind::Additive
    } else {
        MutationKind::Subtractive
    };
    mutate_with(genome, kind, elements, rng)
}

/// Applies a mutation of the given kind.
///
/// Panics if `elements` is empty for an additive mutation or `genome` is
/// empty for a subtractive one.
pub fn mutate_with<R: Rng + ?Sized>(
    genome: &Genome,
    kind: MutationKind,
    elements: &[Element],
    rng: &mut R,
) -> Genome {
    match kind {
        MutationKind::Additive => {
            assert!(!elements.is_empty(), "element set is empty");
            genome.appended(elements[rng.random_range(0..elements.len())])
        }
        MutationKind::Subtractive => {
            assert!(!genome.is_empty(), "cannot remove from an empty genome");
            genome.removed(rng.random_range(0..genome.complexity()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use statrs::distribution::{ChiSquared, ContinuousCDF};

    #[test]
    fn singleton_element_set_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let g = mutate_with(
            &Genome::from([2, 3]),
            MutationKind::Additive,
            &[5],
            &mut rng,
        );
        assert_eq!(g, Genome::from([2, 3, 5]));
    }

    #[test]
    fn subtract_only_element() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let g = mutate_with(
            &Genome::single(7),
            MutationKind::Subtractive,
            &[1, 2],
            &mut rng,
        );
        assert_eq!(g, Genome::empty());
    }

    #[test]
    fn empty_genome_grows() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            assert_eq!(mutate(&Genome::empty(), &[4], &mut rng), Genome::single(4));
        }
    }

    #[test]
    fn additive_fraction_and_uniform_elements() {
        let elements: Vec<u32> = (1..=100).collect();
        let parent = Genome::from([2, 3]);
        let mut rng = ChaCha8Rng::seed_from_u64(12345);
        let calls = 100_000u32;
        let mut additive = 0u32;
        let mut freq = vec![0u32; 100];
        for _ in 0..calls {
            let child = mutate(&parent, &elements, &mut rng);
            if child.complexity() == 3 {
                additive += 1;
                freq[(child.elements()[2] - 1) as usize] += 1;
            }
        }
        let frac = additive as f64 / calls as f64;
        let se = (0.25 / calls as f64).sqrt();
        assert!((frac - 0.5).abs() < 4.0 * se, "additive fraction {frac}");

        let expected = additive as f64 / 100.0;
        let stat: f64 = freq
            .iter()
            .map(|&o| (o as f64 - expected).powi(2) / expected)
            .sum();
        let p = 1.0 - ChiSquared::new(99.0).unwrap().cdf(stat);
        assert!(p > 0.01, "chi-square p = {p}");
    }

    proptest! {
        #[test]
        fn length_changes_by_one(
            g in prop::collection::vec(1u32..20, 0..12),
            elements in prop::collection::vec(1u32..20, 1..10),
            seed in any::<u64>(),
        ) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let parent = Genome::new(g);
            let child = mutate(&parent, &elements, &mut rng);
            let (p, c) = (parent.elements(), child.elements());
            prop_assert!(c.iter().all(|e| elements.contains(e) || p.contains(e)));
            if c.len() == p.len() + 1 {
                prop_assert_eq!(&c[..p.len()], p);
            } else {
                prop_assert_eq!(c.len() + 1, p.len());
                // exactly one index deleted
                let found = (0..p.len()).any(|i| parent.removed(i) == child);
                prop_assert!(found);
            }
        }
    }
}
