// Verify every closed form against quadrature and summation oracles.

use tbbreg::check::run_checks;
use tbbreg::oracle::{beta_density, mixed_binomial_pmf_by_quadrature};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    // A beta-binomial probability obtained by integrating the binomial
    // against a beta mixing density.
    let r = mixed_binomial_pmf_by_quadrature(3, 10, |p| beta_density(p, 0.4, 3.0), 1e-12)?;
    println!("P(Y = 3) for BB(m=10, mu=0.4, phi=3) by quadrature: {:.12} ({} panels)", r.value, r.panels_used);

    let report = run_checks();
    print!("{}", report.to_text());
    if !report.passed() {
        return Err("closed-form check failed".into());
    }
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
