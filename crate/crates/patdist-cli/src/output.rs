//! Output plumbing: distribution files as CSV or JSON, written to standard
//! output or a path. Data never mixes with diagnostics, which go to
//! standard error.

use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use patdist::distribution::{Distribution, MASS_TOLERANCE};

#[derive(clap::ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Job description fields repeated in every JSON payload.
pub struct Meta<'a> {
    pub algorithm: &'a str,
    pub algorithm_b: Option<&'a str>,
    pub pattern: &'a str,
    pub alphabet: &'a str,
    pub model: &'a str,
    pub n: usize,
}

/// Renders the pmf in the requested format. Every emitted pmf must sum
/// to 1; callers computing non-normalized data must not reach this point.
pub fn render(
    distribution: &Distribution,
    meta: &Meta<'_>,
    format: Format,
    extra: &[(&str, serde_json::Value)],
) -> anyhow::Result<String> {
    anyhow::ensure!(
        distribution.is_normalized(MASS_TOLERANCE),
        "refusing to write a pmf with total mass {}",
        distribution.total_mass()
    );
    match format {
        Format::Csv => {
            let mut buf = Vec::new();
            distribution.write_csv(&mut buf)?;
            Ok(String::from_utf8(buf).expect("csv output is ascii"))
        }
        Format::Json => {
            let mut doc = serde_json::Map::new();
            doc.insert("algorithm".into(), meta.algorithm.into());
            if let Some(b) = meta.algorithm_b {
                doc.insert("algorithm_b".into(), b.into());
            }
            doc.insert("pattern".into(), meta.pattern.into());
            doc.insert("alphabet".into(), meta.alphabet.into());
            doc.insert("model".into(), meta.model.into());
            doc.insert("n".into(), meta.n.into());
            doc.insert("mean".into(), distribution.mean().into());
            doc.insert("variance".into(), distribution.variance().into());
            for (key, value) in extra {
                doc.insert((*key).into(), value.clone());
            }
            let pmf: Vec<serde_json::Value> = distribution
                .iter()
                .map(|(v, p)| serde_json::json!([v, p]))
                .collect();
            doc.insert("pmf".into(), pmf.into());
            let mut text = serde_json::to_string_pretty(&doc)?;
            text.push('\n');
            Ok(text)
        }
    }
}

/// Writes `payload` to the path, or to standard output when none is given.
pub fn write_data(out: Option<&PathBuf>, payload: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, payload).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(payload.as_bytes())?;
            lock.flush()?;
            Ok(())
        }
    }
}

/// Reads a distribution back from a CSV file (`-` or no path: stdin).
pub fn read_distribution(path: Option<&Path>) -> anyhow::Result<Distribution> {
    let read_stdin = path.is_none_or(|p| p == Path::new("-"));
    if read_stdin {
        let stdin = std::io::stdin();
        Ok(Distribution::read_csv(stdin.lock())?)
    } else {
        let path = path.expect("checked above");
        let file =
            std::fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
        Ok(Distribution::read_csv(std::io::BufReader::new(file))?)
    }
}
