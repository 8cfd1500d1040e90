use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use tbbreg::diagnostics::{gelman_rubin_r, geweke_z, mc_error, pearson_residuals};
use tbbreg::distributions::{
    beta_binomial_log_pmf, brb_log_pmf, tbb_log_pmf, tbb_mean, tbb_variance, BetaMeanDisp,
    TiltedBetaBinomialParams, MU_T_MAX, MU_T_MIN,
};
use tbbreg::mcmc::{run_chains, PriorSpec, SamplerConfig};
use tbbreg::oracle::pmf_moment_by_summation;
use tbbreg::regression::{Dataset, Family, Model, ParameterVector};
use tbbreg::seeds;

fn mix_params() -> impl Strategy<Value = (f64, f64, f64, f64, u32)> {
    (MU_T_MIN..=MU_T_MAX, 0.02f64..0.98, 0.05f64..200.0, 0.0f64..=1.0, 1u32..60)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tbb_mass_sums_to_one((t, b, f, w, m) in mix_params()) {
        let p = TiltedBetaBinomialParams::from_values(t, b, f, w, m).unwrap();
        let s = pmf_moment_by_summation(|y| tbb_log_pmf(y, &p).unwrap(), m, 1).unwrap();
        prop_assert!((s.mass - 1.0).abs() < 1e-10, "mass {}", s.mass);
    }

    #[test]
    fn tbb_moments_match_summation((t, b, f, w, m) in mix_params()) {
        let p = TiltedBetaBinomialParams::from_values(t, b, f, w, m).unwrap();
        let lp = |y| tbb_log_pmf(y, &p).unwrap();
        let s1 = pmf_moment_by_summation(lp, m, 1).unwrap().value;
        let s2 = pmf_moment_by_summation(lp, m, 2).unwrap().value;
        prop_assert!((tbb_mean(&p) - s1).abs() < 1e-9);
        prop_assert!((tbb_variance(&p) - (s2 - s1 * s1)).abs() < 1e-9);
    }

    #[test]
    fn reductions_are_exact((t, b, f, w, m) in mix_params()) {
        let beta = BetaMeanDisp::new(b, f).unwrap();
        for y in 0..=m {
            let bb = beta_binomial_log_pmf(y, m, &beta).unwrap().exp();
            let tbb0 = tbb_log_pmf(y, &TiltedBetaBinomialParams::from_values(t, b, f, 0.0, m).unwrap()).unwrap().exp();
            let tbb_half = tbb_log_pmf(y, &TiltedBetaBinomialParams::from_values(0.5, b, f, w, m).unwrap()).unwrap().exp();
            let brb = brb_log_pmf(y, m, &beta, w).unwrap().exp();
            let brb0 = brb_log_pmf(y, m, &beta, 0.0).unwrap().exp();
            prop_assert!((tbb0 - bb).abs() <= 1e-13);
            prop_assert!((tbb_half - brb).abs() <= 1e-13);
            prop_assert!((brb0 - bb).abs() <= 1e-13);
        }
    }

    #[test]
    fn overdispersed_relative_to_binomial((t, b, f, w, m) in mix_params()) {
        let p = TiltedBetaBinomialParams::from_values(t, b, f, w, m).unwrap();
        let mf = f64::from(m);
        let pbar = tbb_mean(&p) / mf;
        let binomial = mf * pbar * (1.0 - pbar);
        if m >= 2 {
            prop_assert!(tbb_variance(&p) > binomial);
        } else {
            prop_assert!((tbb_variance(&p) - binomial).abs() < 1e-12);
        }
    }

    #[test]
    fn loglik_invariant_under_row_permutation(seed in any::<u64>(), x in proptest::collection::vec(-2.0f64..2.0, 7)) {
        let data = seeds::dataset();
        let mut order: Vec<usize> = (0..data.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
        let shuffled = data.permuted(&order).unwrap();
        let spec = seeds::model_spec(Family::TiltedBetaBinomial).unwrap();
        let mut params = x.clone();
        params[6] = 0.35 + 0.3 * (x[6] + 2.0) / 4.0;
        let a = Model::new(&spec, &data).unwrap().log_likelihood_stacked(&params);
        let b = Model::new(&spec, &shuffled).unwrap().log_likelihood_stacked(&params);
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn geweke_antisymmetric_under_reversal(seed in any::<u64>(), frac in 0.1f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chain: Vec<f64> = (0..400).map(|i| Distribution::<f64>::sample(&StandardNormal, &mut rng) + 0.002 * f64::from(i)).collect();
        let reversed: Vec<f64> = chain.iter().rev().copied().collect();
        let z = geweke_z(&chain, frac, frac).unwrap();
        let zr = geweke_z(&reversed, frac, frac).unwrap();
        prop_assert!((z + zr).abs() < 1e-9 * z.abs().max(1.0), "{z} {zr}");
    }

    #[test]
    fn gelman_rubin_affine_invariant(seed in any::<u64>(), a in 0.01f64..100.0, b in -1e3f64..1e3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chains: Vec<Vec<f64>> = (0..3)
            .map(|c| (0..200).map(|_| Distribution::<f64>::sample(&StandardNormal, &mut rng) + 0.2 * f64::from(c)).collect::<Vec<f64>>())
            .collect();
        let moved: Vec<Vec<f64>> = chains.iter().map(|c| c.iter().map(|v| a * v + b).collect()).collect();
        let r = gelman_rubin_r(&chains).unwrap();
        let rm = gelman_rubin_r(&moved).unwrap();
        prop_assert!((r - rm).abs() < 1e-8, "{r} {rm}");
        prop_assert!(r >= 1.0);
    }
}

#[test]
fn naive_mc_error_scales_as_inverse_root_n() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let long: Vec<f64> = (0..80_000).map(|_| StandardNormal.sample(&mut rng)).collect();
    let half = mc_error(&long[..40_000]).unwrap().naive;
    let full = mc_error(&long).unwrap().naive;
    let ratio = half / full;
    assert!((ratio / 2f64.sqrt() - 1.0).abs() < 0.05, "ratio {ratio}");
}

#[test]
fn residuals_follow_rows_under_permutation() {
    let data = seeds::dataset();
    let spec = seeds::model_spec(Family::BetaBinomial).unwrap();
    let cfg = SamplerConfig { iterations: 3_000, burn_in: 1_000, thin: 5, chains: 2, ..SamplerConfig::default() };
    let model = Model::new(&spec, &data).unwrap();
    let post = run_chains(&model, &PriorSpec::default(), &cfg).unwrap();
    let order: Vec<usize> = (0..data.len()).rev().collect();
    let shuffled = Model::new(&spec, &data.permuted(&order).unwrap()).unwrap();
    let a = pearson_residuals(&model, &post).unwrap();
    let b = pearson_residuals(&shuffled, &post).unwrap();
    for (k, &i) in order.iter().enumerate() {
        assert!((b[k].value - a[i].value).abs() < 1e-10);
        assert_eq!(b[k].observed, a[i].observed);
    }
}

#[test]
fn residuals_balance_on_symmetric_data() {
    // Constant-mean model on data symmetric about m/2: residuals cancel.
    let data = Dataset::new(vec![2, 8, 4, 6, 5, 5], vec![10; 6], vec![]).unwrap();
    let spec = tbbreg::regression::ModelSpec::parse(Family::BetaBinomial, &["1"], &["1"], &[]).unwrap();
    let model = Model::new(&spec, &data).unwrap();
    let draws = vec![vec![0.0, 1.5], vec![0.0, 2.5]];
    let post = tbbreg::mcmc::PosteriorSample::new(
        model.layout().names(),
        vec![tbbreg::mcmc::ChainDraws {
            chain: 0,
            initial: vec![0.0, 2.0],
            deviance: draws.iter().map(|d| model.deviance_stacked(d).unwrap()).collect(),
            draws,
            block_names: vec![],
            acceptance: vec![],
            scales: vec![],
            adaptation_log: vec![],
        }],
    )
    .unwrap();
    let r = pearson_residuals(&model, &post).unwrap();
    let sum: f64 = r.iter().map(|r| r.value).sum();
    assert!(sum.abs() < 1e-12, "{sum}");
    assert!(r[4].value.abs() < 1e-12);
}

#[test]
fn parameter_vector_roundtrip() {
    let spec = seeds::model_spec(Family::TiltedBetaBinomial).unwrap();
    let model = Model::new(&spec, &seeds::dataset()).unwrap();
    let p = ParameterVector { beta: vec![0.1, 0.2, 0.3], gamma: vec![1.0, 2.0], delta: vec![-1.0], mu_t: Some(0.5) };
    assert_eq!(model.layout().unstack(&p.stacked()).unwrap(), p);
}
