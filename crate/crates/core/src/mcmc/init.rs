use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::regression::{Model, ParameterVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InitStrategy {
    /// All coefficients zero, `μ_t = 0.5`.
    Zeros,
    /// Coefficients `N(0, 0.5²)`, `μ_t ~ U(0.35, 0.65)`.
    Jittered(u64),
}

pub fn initial_values(model: &Model, strategy: InitStrategy) -> ParameterVector {
    let l = model.layout();
    match strategy {
        InitStrategy::Zeros => ParameterVector {
            beta: vec![0.0; l.n_beta],
            gamma: vec![0.0; l.n_gamma],
            delta: vec![0.0; l.n_delta],
            mu_t: l.has_mu_t.then_some(0.5),
        },
        InitStrategy::Jittered(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let normal = Normal::new(0.0, 0.5).expect("valid normal");
            let mut draw = |n: usize| (0..n).map(|_| normal.sample(&mut rng)).collect::<Vec<f64>>();
            let beta = draw(l.n_beta);
            let gamma = draw(l.n_gamma);
            let delta = draw(l.n_delta);
            let mu_t = l.has_mu_t.then(|| rng.random_range(0.35..0.65));
            ParameterVector {
                beta,
                gamma,
                delta,
                mu_t,
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regression::{Dataset, Family, ModelSpec};

    fn model() -> Model {
        let d = Dataset::new(vec![1, 2], vec![3, 4], vec![("x".into(), vec![0.0, 1.0])]).unwrap();
        let s = ModelSpec::parse(Family::TiltedBetaBinomial, &["1", "x"], &["1"], &["1"]).unwrap();
        Model::new(&s, &d).unwrap()
    }

    #[test]
    fn zeros_give_half_mean() {
        let m = model();
        let p = initial_values(&m, InitStrategy::Zeros);
        assert_eq!(p.mu_t, Some(0.5));
        for o in m.linear_predictors(&p).unwrap() {
            assert_eq!(o.mu_b, 0.5);
        }
    }

    #[test]
    fn jitter_is_reproducible_and_distinct() {
        let m = model();
        let a = initial_values(&m, InitStrategy::Jittered(7));
        assert_eq!(a, initial_values(&m, InitStrategy::Jittered(7)));
        let b = initial_values(&m, InitStrategy::Jittered(8));
        let c = initial_values(&m, InitStrategy::Jittered(9));
        assert_ne!(a, b);
        assert_ne!(b, c);
        assert_ne!(a, c);
        for p in [a, b, c] {
            let mt = p.mu_t.unwrap();
            assert!((0.35..0.65).contains(&mt));
        }
    }
}
