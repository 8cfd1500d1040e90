use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::regression::Dataset;

/// Read a dataset from a CSV file with a header row.
///
/// Columns `y` (successes) and `n` (trials) are required; every other column
/// is a numeric covariate named by its header.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    parse_dataset(file, &path.display().to_string())
}

/// [`load_dataset`] over any reader; `source` names the input in messages.
pub fn parse_dataset<R: Read>(reader: R, source: &str) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let headers = rdr.headers()?.clone();
    if headers.is_empty() || headers.iter().all(str::is_empty) {
        return Err(Error::Data { line: 1, message: format!("{source}: missing header row") });
    }
    let find = |name: &str| {
        headers.iter().position(|h| h == name).ok_or_else(|| Error::Data {
            line: 1,
            message: format!("{source}: required column `{name}` is missing"),
        })
    };
    let (iy, in_) = (find("y")?, find("n")?);
    let cov_idx: Vec<usize> = (0..headers.len()).filter(|&i| i != iy && i != in_).collect();
    let mut y = Vec::new();
    let mut m = Vec::new();
    let mut cols: Vec<Vec<f64>> = vec![Vec::new(); cov_idx.len()];
    for rec in rdr.records() {
        let rec = rec?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let data_err = |message: String| Error::Data { line, message: format!("{source}: {message}") };
        let count = |i: usize, what: &str| -> Result<u32> {
            let s = &rec[i];
            s.parse::<u32>()
                .map_err(|_| data_err(format!("`{what}` must be a non-negative integer, got `{s}`")))
        };
        let (yi, ni) = (count(iy, "y")?, count(in_, "n")?);
        if ni == 0 {
            return Err(data_err("`n` must be at least 1".into()));
        }
        if yi > ni {
            return Err(data_err(format!("y = {yi} exceeds n = {ni}")));
        }
        y.push(yi);
        m.push(ni);
        for (col, &i) in cols.iter_mut().zip(&cov_idx) {
            let s = &rec[i];
            let v: f64 = s
                .parse()
                .ok()
                .filter(|v: &f64| v.is_finite())
                .ok_or_else(|| data_err(format!("covariate `{}` is not a finite number: `{s}`", &headers[i])))?;
            col.push(v);
        }
    }
    if y.is_empty() {
        return Err(Error::Data { line: 2, message: format!("{source}: no data rows") });
    }
    let covs = cov_idx.iter().map(|&i| headers[i].to_string()).zip(cols).collect();
    Dataset::new(y, m, covs)
}

/// Write a dataset in the format read by [`load_dataset`], at full precision.
pub fn write_dataset<W: Write>(data: &Dataset, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header = vec!["y".to_string(), "n".to_string()];
    header.extend(data.covariate_names().iter().cloned());
    w.write_record(&header)?;
    for i in 0..data.len() {
        let (yi, mi, covs) = data.row(i);
        let mut rec = vec![yi.to_string(), mi.to_string()];
        rec.extend(covs.iter().map(|(_, v)| v.to_string()));
        w.write_record(&rec)?;
    }
    w.flush().map_err(|e| Error::io("<csv output>", e))?;
    Ok(())
}
