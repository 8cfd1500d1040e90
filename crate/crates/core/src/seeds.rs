//! The bundled seeds germination data and the regression structures fitted to it.

use crate::error::Result;
use crate::regression::{Dataset, Family, ModelSpec};

/// Raw CSV text of the bundled data (columns `y,n,x1,x2`).
pub const SEEDS_CSV: &str = include_str!("../data/seeds.csv");

/// Number of plates.
pub const N_PLATES: usize = 21;

/// The 21-plate seeds dataset.
pub fn dataset() -> Dataset {
    crate::cli::parse_dataset(SEEDS_CSV.as_bytes(), "seeds.csv").expect("bundled seeds data is valid")
}

/// Regression structure for each family.
///
/// * binomial: `logit μ = β1 + β2 (x1+1)`;
/// * beta-binomial: `logit μ_b = β1 + β2 (x1+1) + β3 (x2+1)`, `log φ = γ1 + γ2 (x2+1)`;
/// * BRB and TBB: the beta-binomial structure plus a constant `logit θ = δ1`,
///   with `μ_t` free for TBB and fixed at ½ for BRB.
pub fn model_spec(family: Family) -> Result<ModelSpec> {
    const MU: [&str; 3] = ["1", "x1+1", "x2+1"];
    const PHI: [&str; 2] = ["1", "x2+1"];
    match family {
        Family::Binomial => ModelSpec::parse(family, &MU[..2], &[], &[]),
        Family::BetaBinomial => ModelSpec::parse(family, &MU, &PHI, &[]),
        Family::BetaRectangularBinomial | Family::TiltedBetaBinomial => {
            ModelSpec::parse(family, &MU, &PHI, &["1"])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_one_plates() {
        let d = dataset();
        assert_eq!(d.len(), N_PLATES);
        assert_eq!(d.y().iter().sum::<u32>(), 424);
        assert_eq!(d.m().iter().sum::<u32>(), 831);
    }

    #[test]
    fn specs_validate() {
        let d = dataset();
        for f in Family::ALL {
            model_spec(f).unwrap().validate_against(&d).unwrap();
        }
    }
}
