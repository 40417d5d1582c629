//! Model-source flags: inline i.i.d. shortcuts, order-r Markov files, and
//! fully general model files. Exactly one source may be given.

use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{bail, Context};
use patdist::alphabet::Alphabet;
use patdist::textmodel::TextModel;
use serde::Deserialize;

#[derive(clap::Args, Debug, Default)]
pub struct ModelArgs {
    /// i.i.d. model: "uniform" or per-symbol probabilities "A=0.25,C=0.25,..."
    #[arg(long, value_name = "SPEC")]
    pub iid: Option<String>,
    /// Order-r Markov model file: {"alphabet", "order", "dists": {context: [probs]}}
    #[arg(long, value_name = "FILE")]
    pub markov: Option<PathBuf>,
    /// General finite-memory model file: named contexts and explicit transitions
    #[arg(long, value_name = "FILE")]
    pub model: Option<PathBuf>,
}

#[derive(Deserialize)]
struct MarkovFile {
    alphabet: String,
    order: usize,
    dists: BTreeMap<String, Vec<f64>>,
}

impl ModelArgs {
    /// True when any model source flag was given.
    pub fn is_given(&self) -> bool {
        self.source_count() > 0
    }

    fn source_count(&self) -> usize {
        [
            self.iid.is_some(),
            self.markov.is_some(),
            self.model.is_some(),
        ]
        .iter()
        .filter(|&&given| given)
        .count()
    }

    /// Builds the model and a short identifier for output metadata.
    /// `cli_alphabet` is the --alphabet flag; inline i.i.d. specs need it,
    /// file-based models must agree with it when both are given.
    pub fn resolve(&self, cli_alphabet: Option<&Alphabet>) -> anyhow::Result<(TextModel, String)> {
        if self.source_count() != 1 {
            bail!("exactly one model source (--iid, --markov, or --model) is required");
        }
        let (model, id) = if let Some(spec) = &self.iid {
            let alphabet = cli_alphabet.ok_or_else(|| anyhow::anyhow!("--iid needs --alphabet"))?;
            (parse_iid(spec, alphabet)?, format!("iid:{spec}"))
        } else if let Some(path) = &self.markov {
            let raw = std::fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            let file: MarkovFile = serde_json::from_str(&raw)
                .with_context(|| format!("parsing {}", path.display()))?;
            let alphabet = Alphabet::new(&file.alphabet)?;
            (
                TextModel::markov(&alphabet, file.order, &file.dists)?,
                format!("markov:{}", path.display()),
            )
        } else {
            let path = self.model.as_ref().expect("source count is one");
            (
                TextModel::load(path).with_context(|| format!("loading {}", path.display()))?,
                format!("model:{}", path.display()),
            )
        };
        if let Some(alphabet) = cli_alphabet {
            if model.alphabet() != alphabet {
                bail!(
                    "--alphabet {} does not match the model alphabet {}",
                    alphabet,
                    model.alphabet()
                );
            }
        }
        for diagnostic in model.validate() {
            eprintln!("model warning: {diagnostic}");
        }
        Ok((model, id))
    }
}

fn parse_iid(spec: &str, alphabet: &Alphabet) -> anyhow::Result<TextModel> {
    if spec == "uniform" {
        return Ok(TextModel::uniform(alphabet));
    }
    let mut probs = vec![None; alphabet.len()];
    for part in spec.split(',') {
        let (sym, value) = part
            .split_once('=')
            .with_context(|| format!("expected SYMBOL=PROB, got '{part}'"))?;
        let mut chars = sym.chars();
        let (symbol, rest) = (chars.next(), chars.next());
        let symbol = match (symbol, rest) {
            (Some(c), None) => c,
            _ => bail!("'{sym}' is not a single symbol"),
        };
        let index = alphabet.index_of(symbol)? as usize;
        if probs[index].is_some() {
            bail!("symbol '{symbol}' given twice");
        }
        probs[index] = Some(value.parse::<f64>().with_context(|| format!("'{value}'"))?);
    }
    let missing: Vec<char> = probs
        .iter()
        .enumerate()
        .filter(|(_, p)| p.is_none())
        .map(|(i, _)| alphabet.symbol(i as u8))
        .collect();
    if !missing.is_empty() {
        bail!("missing probabilities for {missing:?}");
    }
    let probs: Vec<f64> = probs.into_iter().map(Option::unwrap).collect();
    Ok(TextModel::iid(alphabet, &probs)?)
}
