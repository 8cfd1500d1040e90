use rand::Rng;
use rand_distr::{Binomial, Distribution, Open01};

use super::{BetaMeanDisp, TiltedBetaBinomialParams, TiltedBetaParams, TiltedParams};

/// Inverse-CDF draw from the tilted distribution.
///
/// `F(y) = k y² + (1 − k) y` with `k = 3(2μ_t − 1)`; the root is taken in the
/// cancellation-free form `2u / ((1 − k) + √((1 − k)² + 4ku))`, which is `u`
/// itself when `k = 0`.
pub fn sample_tilted<R: Rng + ?Sized>(p: &TiltedParams, rng: &mut R) -> f64 {
    let u: f64 = rng.sample(Open01);
    let k = p.slope();
    let lin = 1.0 - k;
    2.0 * u / (lin + (lin * lin + 4.0 * k * u).sqrt())
}

pub fn sample_beta<R: Rng + ?Sized>(p: &BetaMeanDisp, rng: &mut R) -> f64 {
    let (a, b) = p.shapes();
    // Shapes are validated positive and finite, so construction cannot fail.
    rand_distr::Beta::new(a, b)
        .expect("validated beta shapes")
        .sample(rng)
}

pub fn sample_tilted_beta<R: Rng + ?Sized>(p: &TiltedBetaParams, rng: &mut R) -> f64 {
    if rng.random::<f64>() < p.theta() {
        sample_tilted(&p.tilted, rng)
    } else {
        sample_beta(&p.beta, rng)
    }
}

/// Composition draw: mixture component, then success probability, then count.
pub fn sample_tbb<R: Rng + ?Sized>(p: &TiltedBetaBinomialParams, rng: &mut R) -> u32 {
    let prob = sample_tilted_beta(&p.mix, rng).clamp(0.0, 1.0);
    Binomial::new(u64::from(p.m()), prob)
        .expect("probability clamped to [0, 1]")
        .sample(rng) as u32
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tilted_draws_inside_open_interval() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for mu_t in [1.0 / 3.0, 0.4, 0.5, 0.6, 2.0 / 3.0] {
            let p = TiltedParams::new(mu_t).unwrap();
            for _ in 0..20_000 {
                let y = sample_tilted(&p, &mut rng);
                assert!(y > 0.0 && y < 1.0, "mu_t={mu_t} y={y}");
            }
        }
    }

    #[test]
    fn tilted_uniform_case_returns_u() {
        let p = TiltedParams::uniform();
        let mut a = ChaCha8Rng::seed_from_u64(9);
        let mut b = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let u: f64 = b.sample(Open01);
            assert_eq!(sample_tilted(&p, &mut a), u);
        }
    }

    #[test]
    fn single_trial_counts_are_binary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = TiltedBetaBinomialParams::from_values(0.45, 0.3, 4.0, 0.2, 1).unwrap();
        for _ in 0..1000 {
            assert!(sample_tbb(&p, &mut rng) <= 1);
        }
    }
}
