// Closed-form pmfs, moments and samplers of the TBB family.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tbbreg::distributions::{
    beta_binomial_log_pmf, brb_log_pmf, sample_tbb, tbb_log_pmf, tbb_mean, tbb_variance, tilted_beta_mean,
    tilted_beta_variance, tilted_pdf, BetaMeanDisp, TiltedBetaBinomialParams, TiltedParams,
};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let tilted = TiltedParams::new(0.6)?;
    println!("tilted density at mu_t = 0.6: c(0.1) = {:.3}, c(0.9) = {:.3}", tilted_pdf(0.1, &tilted)?, tilted_pdf(0.9, &tilted)?);

    let p = TiltedBetaBinomialParams::from_values(0.4, 0.6, 5.0, 0.3, 20)?;
    println!("TBB(mu_t=0.4, mu_b=0.6, phi=5, theta=0.3, m=20)");
    println!("  probability mean {:.4}, variance {:.5}", tilted_beta_mean(&p.mix), tilted_beta_variance(&p.mix));
    println!("  count mean {:.4}, variance {:.4}", tbb_mean(&p), tbb_variance(&p));

    let beta = BetaMeanDisp::new(0.6, 5.0)?;
    println!("  y   TBB pmf    BRB pmf    BB pmf");
    for y in (0..=20).step_by(4) {
        println!(
            "  {y:>2}  {:.6}   {:.6}   {:.6}",
            tbb_log_pmf(y, &p)?.exp(),
            brb_log_pmf(y, 20, &beta, 0.3)?.exp(),
            beta_binomial_log_pmf(y, 20, &beta)?.exp()
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let draws: Vec<u32> = (0..20_000).map(|_| sample_tbb(&p, &mut rng)).collect();
    let mean = draws.iter().map(|&y| f64::from(y)).sum::<f64>() / draws.len() as f64;
    println!("  mean of 20000 draws {mean:.3} (exact {:.3})", tbb_mean(&p));
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
