//! Seeded random streams. All randomness flows from `ChaCha8Rng::seed_from_u64`
//! and Gaussian variates come from the Box-Muller transform, so outputs are
//! reproducible across platforms for a given seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Seed of trial `trial` within a run seeded by `seed`.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    seed ^ trial
}

/// SplitMix64 finalizer; spreads nearby seeds across the seed space.
pub fn mix(seed: u64, stream: u64) -> u64 {
    let mut z = seed.wrapping_add(stream.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Standard normal variates by Box-Muller, consuming two uniforms per pair.
pub struct Gaussian<R: Rng> {
    rng: R,
    spare: Option<f64>,
}

impl<R: Rng> Gaussian<R> {
    pub fn new(rng: R) -> Self {
        Self { rng, spare: None }
    }

    pub fn sample(&mut self) -> f64 {
        if let Some(z) = self.spare.take() {
            return z;
        }
        // u1 in (0, 1] keeps the logarithm finite
        let u1 = 1.0 - self.rng.random::<f64>();
        let u2 = self.rng.random::<f64>();
        let r = (-2.0 * u1.ln()).sqrt();
        let t = std::f64::consts::TAU * u2;
        self.spare = Some(r * t.sin());
        r * t.cos()
    }

    pub fn rng_mut(&mut self) -> &mut R {
        self.spare = None;
        &mut self.rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_moments() {
        let mut g = Gaussian::new(seeded(11));
        let n = 200_000;
        let xs: Vec<f64> = (0..n).map(|_| g.sample()).collect();
        let mean = xs.iter().sum::<f64>() / n as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n as f64;
        let fourth = xs.iter().map(|x| x.powi(4)).sum::<f64>() / n as f64;
        assert!(mean.abs() < 0.01);
        assert!((var - 1.0).abs() < 0.01);
        assert!((fourth - 3.0).abs() < 0.1);
    }

    #[test]
    fn streams_are_reproducible() {
        let a: Vec<f64> = (0..5)
            .map({
                let mut g = Gaussian::new(seeded(3));
                move |_| g.sample()
            })
            .collect();
        let b: Vec<f64> = (0..5)
            .map({
                let mut g = Gaussian::new(seeded(3));
                move |_| g.sample()
            })
            .collect();
        assert_eq!(a, b);
    }

    #[test]
    fn mix_separates_neighbours() {
        assert_ne!(mix(1, 0), mix(1, 1));
        assert_ne!(mix(1, 0), mix(2, 0));
        assert_eq!(trial_seed(8, 3), 11);
    }
}
