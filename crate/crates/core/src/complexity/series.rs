//! Seeded generators for test and demonstration series.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// `len` integers drawn uniformly from `0..alphabet`.
pub fn uniform_symbols(seed: u64, len: usize, alphabet: u32) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.gen_range(0..alphabet) as f64).collect()
}

/// Random walk from 0 with steps uniform in `[-step, step]`.
pub fn random_walk(seed: u64, len: usize, step: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = 0.0;
    (0..len)
        .map(|_| {
            let here = x;
            x += rng.gen_range(-step..=step);
            here
        })
        .collect()
}

/// `cos(omega k)` for `k = 0..len`.
pub fn cosine(len: usize, omega: f64) -> Vec<f64> {
    (0..len).map(|k| (omega * k as f64).cos()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_generators_are_repeatable() {
        assert_eq!(uniform_symbols(42, 64, 256), uniform_symbols(42, 64, 256));
        assert_ne!(uniform_symbols(42, 64, 256), uniform_symbols(43, 64, 256));
        assert!(uniform_symbols(1, 500, 4).iter().all(|&v| (0.0..4.0).contains(&v)));
        let w = random_walk(7, 100, 1.0);
        assert_eq!(w[0], 0.0);
        assert!(w.windows(2).all(|p| (p[1] - p[0]).abs() <= 1.0));
        assert_eq!(cosine(3, 0.0), vec![1.0; 3]);
    }
}
