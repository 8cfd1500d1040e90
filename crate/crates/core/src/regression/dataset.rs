use crate::error::{Error, Result};

/// Binomial observations `(y_i, m_i)` with named real-valued covariates,
/// stored column-wise.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    y: Vec<u32>,
    m: Vec<u32>,
    names: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl Dataset {
    pub fn new(y: Vec<u32>, m: Vec<u32>, covariates: Vec<(String, Vec<f64>)>) -> Result<Self> {
        if y.len() != m.len() {
            return Err(Error::DimensionMismatch {
                what: "trial counts",
                expected: y.len(),
                got: m.len(),
            });
        }
        for (i, (&yi, &mi)) in y.iter().zip(&m).enumerate() {
            if mi == 0 {
                return Err(Error::Dataset(format!("row {}: trial count must be at least 1", i + 1)));
            }
            if yi > mi {
                return Err(Error::Dataset(format!("row {}: y = {yi} exceeds n = {mi}", i + 1)));
            }
        }
        let mut names = Vec::with_capacity(covariates.len());
        let mut columns = Vec::with_capacity(covariates.len());
        for (name, col) in covariates {
            if col.len() != y.len() {
                return Err(Error::DimensionMismatch {
                    what: "covariate column",
                    expected: y.len(),
                    got: col.len(),
                });
            }
            if names.contains(&name) {
                return Err(Error::Dataset(format!("duplicate covariate `{name}`")));
            }
            if let Some(i) = col.iter().position(|v| !v.is_finite()) {
                return Err(Error::Dataset(format!("row {}: covariate `{name}` is not finite", i + 1)));
            }
            names.push(name);
            columns.push(col);
        }
        Ok(Self { y, m, names, columns })
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn y(&self) -> &[u32] {
        &self.y
    }

    pub fn m(&self) -> &[u32] {
        &self.m
    }

    pub fn covariate_names(&self) -> &[String] {
        &self.names
    }

    pub fn covariate(&self, name: &str) -> Option<&[f64]> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn max_trials(&self) -> u32 {
        self.m.iter().copied().max().unwrap_or(0)
    }

    /// Rows reordered so that new row `k` is old row `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.len();
        let mut seen = vec![false; n];
        if order.len() != n || order.iter().any(|&i| i >= n || std::mem::replace(&mut seen[i], true)) {
            return Err(Error::Dataset("row order is not a permutation".into()));
        }
        let pick_u = |v: &[u32]| order.iter().map(|&i| v[i]).collect();
        let pick_f = |v: &[f64]| order.iter().map(|&i| v[i]).collect();
        Ok(Self {
            y: pick_u(&self.y),
            m: pick_u(&self.m),
            names: self.names.clone(),
            columns: self.columns.iter().map(|c| pick_f(c)).collect(),
        })
    }

    /// Rows of `self` followed by rows of `other`; covariate names must match.
    pub fn concat(&self, other: &Dataset) -> Result<Self> {
        if self.names != other.names {
            return Err(Error::Dataset("covariate columns differ".into()));
        }
        let join_u = |a: &[u32], b: &[u32]| a.iter().chain(b).copied().collect();
        Ok(Self {
            y: join_u(&self.y, &other.y),
            m: join_u(&self.m, &other.m),
            names: self.names.clone(),
            columns: self
                .columns
                .iter()
                .zip(&other.columns)
                .map(|(a, b)| a.iter().chain(b).copied().collect())
                .collect(),
        })
    }

    /// A single row as `(y, m, covariates)`.
    pub fn row(&self, i: usize) -> (u32, u32, Vec<(&str, f64)>) {
        (
            self.y[i],
            self.m[i],
            self.names
                .iter()
                .zip(&self.columns)
                .map(|(n, c)| (n.as_str(), c[i]))
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Dataset {
        Dataset::new(vec![1, 2, 3], vec![4, 5, 6], vec![("x".into(), vec![0.0, 1.0, 2.0])]).unwrap()
    }

    #[test]
    fn rejects_invalid_rows() {
        assert!(Dataset::new(vec![5], vec![4], vec![]).is_err());
        assert!(Dataset::new(vec![0], vec![0], vec![]).is_err());
        assert!(Dataset::new(vec![0, 1], vec![1], vec![]).is_err());
        assert!(Dataset::new(vec![0], vec![1], vec![("x".into(), vec![])]).is_err());
        assert!(Dataset::new(vec![0], vec![1], vec![("x".into(), vec![f64::NAN])]).is_err());
    }

    #[test]
    fn permute_and_concat() {
        let d = small();
        let p = d.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(p.y(), &[3, 1, 2]);
        assert_eq!(p.covariate("x").unwrap(), &[2.0, 0.0, 1.0]);
        assert!(d.permuted(&[0, 0, 1]).is_err());
        let c = d.concat(&d).unwrap();
        assert_eq!(c.len(), 6);
        assert_eq!(c.max_trials(), 6);
        assert_eq!(c.row(4).2, vec![("x", 1.0)]);
    }
}
