//! Sparse exact probability mass functions over integer values.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};

use thiserror::Error;

/// Tolerance for "sums to one" checks throughout the crate.
pub const MASS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error)]
pub enum DistributionError {
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("malformed distribution file at line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("distribution is empty")]
    Empty,
}

/// A sparse pmf over integer values. Keys iterate in ascending order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Distribution {
    pmf: BTreeMap<i64, f64>,
}

/// Summary statistics of a [`Distribution`].
#[derive(Debug, Clone, PartialEq)]
pub struct DistStats {
    pub mean: f64,
    pub variance: f64,
    pub min: i64,
    pub max: i64,
    /// `(q, value)` pairs for the requested quantiles.
    pub quantiles: Vec<(f64, i64)>,
}

impl Distribution {
    pub fn new() -> Self {
        Distribution::default()
    }

    /// Point mass 1.0 at `value`.
    pub fn dirac(value: i64) -> Self {
        let mut pmf = BTreeMap::new();
        pmf.insert(value, 1.0);
        Distribution { pmf }
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (i64, f64)>) -> Self {
        let mut d = Distribution::new();
        for (v, p) in pairs {
            d.add(v, p);
        }
        d
    }

    /// Adds probability mass to a value.
    pub fn add(&mut self, value: i64, prob: f64) {
        *self.pmf.entry(value).or_insert(0.0) += prob;
    }

    pub fn prob(&self, value: i64) -> f64 {
        self.pmf.get(&value).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.pmf.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pmf.is_empty()
    }

    /// Values and probabilities in ascending value order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.pmf.iter().map(|(&v, &p)| (v, p))
    }

    /// Smallest value carrying mass.
    pub fn min_value(&self) -> Option<i64> {
        self.pmf.keys().next().copied()
    }

    /// Largest value carrying mass.
    pub fn max_value(&self) -> Option<i64> {
        self.pmf.keys().next_back().copied()
    }

    pub fn total_mass(&self) -> f64 {
        self.pmf.values().sum()
    }

    pub fn is_normalized(&self, tol: f64) -> bool {
        self.pmf.values().all(|&p| (-tol..=1.0 + tol).contains(&p))
            && (self.total_mass() - 1.0).abs() <= tol
    }

    pub fn mean(&self) -> f64 {
        self.iter().map(|(v, p)| v as f64 * p).sum()
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.iter()
            .map(|(v, p)| (v as f64 - mean).powi(2) * p)
            .sum()
    }

    /// Smallest value whose cumulative mass reaches `q`.
    pub fn quantile(&self, q: f64) -> Option<i64> {
        let mut acc = 0.0;
        for (v, p) in self.iter() {
            acc += p;
            if acc >= q {
                return Some(v);
            }
        }
        self.max_value()
    }

    pub fn stats(&self, quantiles: &[f64]) -> Result<DistStats, DistributionError> {
        if self.is_empty() {
            return Err(DistributionError::Empty);
        }
        Ok(DistStats {
            mean: self.mean(),
            variance: self.variance(),
            min: self.min_value().unwrap(),
            max: self.max_value().unwrap(),
            quantiles: quantiles
                .iter()
                .map(|&q| (q, self.quantile(q).unwrap()))
                .collect(),
        })
    }

    pub fn mass_below(&self, value: i64) -> f64 {
        self.pmf.range(..value).map(|(_, &p)| p).sum()
    }

    pub fn mass_above(&self, value: i64) -> f64 {
        self.pmf.range(value + 1..).map(|(_, &p)| p).sum()
    }

    /// Reflects the pmf through zero: `P(-V = v)`.
    pub fn negated(&self) -> Distribution {
        Distribution::from_pairs(self.iter().map(|(v, p)| (-v, p)))
    }

    /// Writes the `value,probability` CSV form: header line, rows sorted by
    /// value, probabilities with 17 significant digits.
    pub fn write_csv(&self, mut out: impl Write) -> io::Result<()> {
        writeln!(out, "value,probability")?;
        for (v, p) in self.iter() {
            writeln!(out, "{v},{}", format_prob(p))?;
        }
        Ok(())
    }

    /// Reads the CSV form back; extra columns after the second are ignored.
    pub fn read_csv(input: impl BufRead) -> Result<Self, DistributionError> {
        let mut d = Distribution::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || (i == 0 && line.starts_with("value")) {
                continue;
            }
            let mut fields = line.split(',');
            let (value, prob) = match (fields.next(), fields.next()) {
                (Some(v), Some(p)) => (v, p),
                _ => {
                    return Err(DistributionError::Parse {
                        line: i + 1,
                        reason: "expected `value,probability`".into(),
                    })
                }
            };
            let value: i64 = value.parse().map_err(|e| DistributionError::Parse {
                line: i + 1,
                reason: format!("bad value: {e}"),
            })?;
            let prob: f64 = prob.parse().map_err(|e| DistributionError::Parse {
                line: i + 1,
                reason: format!("bad probability: {e}"),
            })?;
            d.add(value, prob);
        }
        Ok(d)
    }
}

/// Fixed formatting with 17 significant digits; round-trips every f64.
pub fn format_prob(p: f64) -> String {
    format!("{p:.16e}")
}
