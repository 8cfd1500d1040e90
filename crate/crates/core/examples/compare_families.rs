// Rank the binomial, beta-binomial, BRB and TBB regressions of the seeds
// data by DIC.

use tbbreg::cli::{fit_model, ModelEntry};
use tbbreg::mcmc::{PriorSpec, SamplerConfig};
use tbbreg::model_selection::{ComparisonRow, ComparisonTable};
use tbbreg::regression::Family;
use tbbreg::seeds;

pub fn compare(sampler: &SamplerConfig) -> Result<ComparisonTable, Box<dyn std::error::Error>> {
    let data = seeds::dataset();
    let mut rows = Vec::new();
    for family in Family::ALL {
        let entry = ModelEntry::new(seeds::model_spec(family)?);
        let row = match fit_model(&entry, &data, &PriorSpec::default(), sampler) {
            Ok((report, _)) => ComparisonRow::ok(entry.label(), report.dic, report.deviance),
            Err(e) => ComparisonRow::failed(entry.label(), e.to_string()),
        };
        rows.push(row);
    }
    Ok(ComparisonTable::new(rows))
}

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let table = compare(&SamplerConfig { iterations: 12_000, burn_in: 2_000, thin: 5, ..SamplerConfig::default() })?;
    print!("{}", table.to_text());
    Ok(())
}

#[allow(dead_code)]
fn main() -> Result<(), Box<dyn std::error::Error>> {
    run_example()
}
