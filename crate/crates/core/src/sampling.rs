//! Exact discrete samplers used by the cohort engine.

use rand::Rng;
use rand_distr::{Binomial, Distribution};

/// Draws from Binomial(`n`, `p`). `p` must lie in `[0, 1]`.
pub fn binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p)
        .expect("probability checked to lie in (0, 1)")
        .sample(rng)
}

/// Distributes `n` trials uniformly over `categories` cells.
///
/// Sampled as a chain of conditional binomials: cell `i` receives
/// Binomial(remaining, 1 / (categories - i)).
pub fn uniform_multinomial<R: Rng + ?Sized>(n: u64, categories: usize, rng: &mut R) -> Vec<u64> {
    assert!(
        categories > 0 || n == 0,
        "cannot place trials into zero cells"
    );
    let mut out = vec![0u64; categories];
    let mut remaining = n;
    for (i, cell) in out.iter_mut().enumerate() {
        if remaining == 0 {
            break;
        }
        let left = categories - i;
        let k = if left == 1 {
            remaining
        } else {
            binomial(remaining, 1.0 / left as f64, rng)
        };
        *cell = k;
        remaining -= k;
    }
    out
}
