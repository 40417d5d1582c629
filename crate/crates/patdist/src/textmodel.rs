//! Finite-memory random text models.
//!
//! A model is a tuple (C, c0, Σ, φ): a finite context space, a start
//! context, an alphabet, and a transition function where φ(c, σ, c') is the
//! probability of emitting σ and moving from context c to c'. Every row
//! φ(c, ·, ·) sums to one. String probabilities follow from a forward
//! recurrence over per-context mass vectors.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::alphabet::{Alphabet, AlphabetError};
use crate::distribution::MASS_TOLERANCE;

#[derive(Debug, thiserror::Error)]
pub enum ModelError {
    #[error("context '{context}': outgoing probabilities sum to {sum}, expected 1")]
    SumNotOne { context: String, sum: f64 },
    #[error("context '{context}': transition probability {prob} outside [0, 1]")]
    ProbOutOfRange { context: String, prob: f64 },
    #[error("context '{context}': duplicate transition on symbol '{symbol}' to '{to}'")]
    DuplicateTransition {
        context: String,
        symbol: char,
        to: String,
    },
    #[error("duplicate context name '{0}'")]
    DuplicateContext(String),
    #[error("unknown context name '{0}'")]
    UnknownContext(String),
    #[error("order-{order} model needs a distribution for context '{context}'")]
    MissingContext { order: usize, context: String },
    #[error("context '{context}': expected {expected} symbol probabilities, got {got}")]
    WrongWidth {
        context: String,
        expected: usize,
        got: usize,
    },
    #[error(transparent)]
    Alphabet(#[from] AlphabetError),
    #[error("model file: {0}")]
    Io(#[from] std::io::Error),
    #[error("model JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Validation findings. Normalization and range problems are fatal;
/// unreachable contexts are inert (they never acquire probability mass) and
/// only warned about.
#[derive(Debug, Clone, PartialEq)]
pub enum Diagnostic {
    SumNotOne { context: String, sum: f64 },
    ProbOutOfRange { context: String, prob: f64 },
    Unreachable { context: String },
}

impl Diagnostic {
    pub fn is_fatal(&self) -> bool {
        !matches!(self, Diagnostic::Unreachable { .. })
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Diagnostic::SumNotOne { context, sum } => write!(
                f,
                "context '{context}': probabilities sum to {sum} (residual {:+e})",
                sum - 1.0
            ),
            Diagnostic::ProbOutOfRange { context, prob } => {
                write!(f, "context '{context}': probability {prob} outside [0, 1]")
            }
            Diagnostic::Unreachable { context } => {
                write!(
                    f,
                    "context '{context}' is unreachable from the start context"
                )
            }
        }
    }
}

/// Finite-memory text model with dense context indices. Immutable once
/// built; construction fails on any fatal validation finding.
#[derive(Debug, Clone, PartialEq)]
pub struct TextModel {
    alphabet: Alphabet,
    context_names: Vec<String>,
    start: u32,
    /// Per context, sorted by (symbol, target): (symbol, target, probability).
    /// Zero-probability transitions are not stored.
    transitions: Vec<Vec<(u8, u32, f64)>>,
    deterministic_context: bool,
}

/// Per-context probability mass for a fixed string prefix s:
/// entry c holds P(prefix = s and the model sits in context c afterwards).
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardState {
    mass: Vec<f64>,
}

impl ForwardState {
    pub fn total(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }
}

impl TextModel {
    fn finish(
        alphabet: Alphabet,
        context_names: Vec<String>,
        start: u32,
        transitions: Vec<Vec<(u8, u32, f64)>>,
    ) -> Result<TextModel, ModelError> {
        let mut transitions = transitions;
        for row in &mut transitions {
            row.sort_by_key(|&(symbol, target, _)| (symbol, target));
            row.retain(|&(_, _, p)| p != 0.0);
        }
        let deterministic_context = transitions
            .iter()
            .all(|row| row.windows(2).all(|w| w[0].0 != w[1].0));
        let model = TextModel {
            alphabet,
            context_names,
            start,
            transitions,
            deterministic_context,
        };
        if let Some(fatal) = model.validate().into_iter().find(Diagnostic::is_fatal) {
            return Err(match fatal {
                Diagnostic::SumNotOne { context, sum } => ModelError::SumNotOne { context, sum },
                Diagnostic::ProbOutOfRange { context, prob } => {
                    ModelError::ProbOutOfRange { context, prob }
                }
                Diagnostic::Unreachable { .. } => unreachable!("not fatal"),
            });
        }
        Ok(model)
    }

    /// Single-context model emitting independent symbols with the given
    /// probabilities (one per alphabet symbol).
    pub fn iid(alphabet: &Alphabet, probs: &[f64]) -> Result<TextModel, ModelError> {
        if probs.len() != alphabet.len() {
            return Err(ModelError::WrongWidth {
                context: String::new(),
                expected: alphabet.len(),
                got: probs.len(),
            });
        }
        let row = probs
            .iter()
            .enumerate()
            .map(|(i, &p)| (i as u8, 0u32, p))
            .collect();
        TextModel::finish(alphabet.clone(), vec![String::new()], 0, vec![row])
    }

    /// Uniform i.i.d. model over the alphabet.
    pub fn uniform(alphabet: &Alphabet) -> TextModel {
        let p = 1.0 / alphabet.len() as f64;
        TextModel::iid(alphabet, &vec![p; alphabet.len()])
            .expect("uniform distribution always validates")
    }

    /// Order-r Markov model. Contexts are all strings of length at most r;
    /// `dists` maps each context (as written in the alphabet) to its
    /// per-symbol emission probabilities. Contexts shorter than r grow by
    /// the emitted symbol; length-r contexts drop their oldest symbol.
    pub fn markov(
        alphabet: &Alphabet,
        order: usize,
        dists: &BTreeMap<String, Vec<f64>>,
    ) -> Result<TextModel, ModelError> {
        // Contexts in breadth-first order: "", then length 1, 2, ..., r.
        let mut contexts: Vec<Vec<u8>> = vec![vec![]];
        let mut layer: Vec<Vec<u8>> = vec![vec![]];
        for _ in 0..order {
            let mut next = Vec::new();
            for c in &layer {
                for sym in 0..alphabet.len() as u8 {
                    let mut t = c.clone();
                    t.push(sym);
                    next.push(t);
                }
            }
            contexts.extend(next.iter().cloned());
            layer = next;
        }
        let index: BTreeMap<&[u8], u32> = contexts
            .iter()
            .enumerate()
            .map(|(i, c)| (c.as_slice(), i as u32))
            .collect();

        let mut transitions = Vec::with_capacity(contexts.len());
        for c in &contexts {
            let name = alphabet.decode(c);
            let probs = dists.get(&name).ok_or(ModelError::MissingContext {
                order,
                context: name.clone(),
            })?;
            if probs.len() != alphabet.len() {
                return Err(ModelError::WrongWidth {
                    context: name,
                    expected: alphabet.len(),
                    got: probs.len(),
                });
            }
            let mut row = Vec::with_capacity(alphabet.len());
            for (sym, &p) in probs.iter().enumerate() {
                let mut succ = c.clone();
                succ.push(sym as u8);
                if succ.len() > order {
                    succ.remove(0);
                }
                row.push((sym as u8, index[succ.as_slice()], p));
            }
            transitions.push(row);
        }
        let names = contexts.iter().map(|c| alphabet.decode(c)).collect();
        TextModel::finish(alphabet.clone(), names, 0, transitions)
    }

    /// Fully general model from named contexts and explicit transitions.
    /// Transitions not listed have probability zero.
    pub fn general(
        alphabet: &Alphabet,
        context_names: &[String],
        start: &str,
        entries: &[(String, char, String, f64)],
    ) -> Result<TextModel, ModelError> {
        let mut index: BTreeMap<&str, u32> = BTreeMap::new();
        for (i, name) in context_names.iter().enumerate() {
            if index.insert(name, i as u32).is_some() {
                return Err(ModelError::DuplicateContext(name.clone()));
            }
        }
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| ModelError::UnknownContext(name.to_string()))
        };
        let start = lookup(start)?;
        let mut transitions = vec![Vec::new(); context_names.len()];
        let mut seen: BTreeMap<(u32, u8, u32), ()> = BTreeMap::new();
        for (from, symbol, to, prob) in entries {
            let f = lookup(from)?;
            let sym = alphabet.index_of(*symbol)?;
            let t = lookup(to)?;
            if seen.insert((f, sym, t), ()).is_some() {
                return Err(ModelError::DuplicateTransition {
                    context: from.clone(),
                    symbol: *symbol,
                    to: to.clone(),
                });
            }
            transitions[f as usize].push((sym, t, *prob));
        }
        TextModel::finish(alphabet.clone(), context_names.to_vec(), start, transitions)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn context_count(&self) -> usize {
        self.context_names.len()
    }

    pub fn context_name(&self, c: u32) -> &str {
        &self.context_names[c as usize]
    }

    pub fn start_context(&self) -> u32 {
        self.start
    }

    /// Sorted (symbol, target, probability) triples leaving context `c`.
    pub fn transitions_from(&self, c: u32) -> &[(u8, u32, f64)] {
        &self.transitions[c as usize]
    }

    /// True when every (context, symbol) pair has at most one successor;
    /// i.i.d. and Markov models always qualify. The distribution push over
    /// such models skips a factor |C| of work.
    pub fn deterministic_context(&self) -> bool {
        self.deterministic_context
    }

    /// Checks row normalization, probability ranges, and reachability.
    /// Construction already rejects the fatal findings, so on a built model
    /// only unreachable-context warnings can appear.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for (c, row) in self.transitions.iter().enumerate() {
            let context = self.context_names[c].clone();
            for &(_, _, p) in row {
                if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                    out.push(Diagnostic::ProbOutOfRange {
                        context: context.clone(),
                        prob: p,
                    });
                }
            }
            let sum: f64 = row.iter().map(|&(_, _, p)| p).sum();
            if (sum - 1.0).abs() > MASS_TOLERANCE {
                out.push(Diagnostic::SumNotOne { context, sum });
            }
        }
        // Reachability over positive-probability transitions.
        let mut reach = vec![false; self.context_count()];
        let mut stack = vec![self.start];
        reach[self.start as usize] = true;
        while let Some(c) = stack.pop() {
            for &(_, to, _) in &self.transitions[c as usize] {
                if !reach[to as usize] {
                    reach[to as usize] = true;
                    stack.push(to);
                }
            }
        }
        for (c, ok) in reach.iter().enumerate() {
            if !ok {
                out.push(Diagnostic::Unreachable {
                    context: self.context_names[c].clone(),
                });
            }
        }
        out
    }

    /// Forward mass before any symbol: all mass on the start context.
    pub fn forward_start(&self) -> ForwardState {
        let mut mass = vec![0.0; self.context_count()];
        mass[self.start as usize] = 1.0;
        ForwardState { mass }
    }

    /// One step of the forward recurrence:
    /// new(c) = Σ_{c'} mass(c') · φ(c', σ, c).
    pub fn forward_step(&self, state: &ForwardState, symbol: u8) -> ForwardState {
        let mut mass = vec![0.0; self.context_count()];
        for (c, &m) in state.mass.iter().enumerate() {
            if m == 0.0 {
                continue;
            }
            for &(sym, to, p) in &self.transitions[c] {
                if sym == symbol {
                    mass[to as usize] += m * p;
                }
            }
        }
        ForwardState { mass }
    }

    /// Probability that the model emits exactly `s` as its first symbols.
    pub fn string_probability(&self, s: &[u8]) -> f64 {
        let mut state = self.forward_start();
        for &sym in s {
            state = self.forward_step(&state, sym);
        }
        state.total()
    }

    /// Samples a length-n text by walking the transition function.
    pub fn sample_text(&self, rng: &mut impl Rng, n: usize) -> Vec<u8> {
        let mut text = Vec::with_capacity(n);
        let mut c = self.start;
        for _ in 0..n {
            let row = &self.transitions[c as usize];
            let mut u: f64 = rng.random();
            let mut chosen = row.len() - 1;
            for (i, &(_, _, p)) in row.iter().enumerate() {
                if u < p {
                    chosen = i;
                    break;
                }
                u -= p;
            }
            let (sym, to, _) = row[chosen];
            text.push(sym);
            c = to;
        }
        text
    }

    /// Serializes to the JSON interchange form.
    pub fn to_json(&self) -> String {
        let transitions = self
            .transitions
            .iter()
            .enumerate()
            .flat_map(|(c, row)| {
                row.iter().map(move |&(sym, to, prob)| TransitionJson {
                    from: self.context_names[c].clone(),
                    symbol: self.alphabet.symbol(sym),
                    to: self.context_names[to as usize].clone(),
                    prob,
                })
            })
            .collect();
        let doc = ModelJson {
            alphabet: self.alphabet.to_string(),
            contexts: self.context_names.clone(),
            start: self.context_names[self.start as usize].clone(),
            transitions,
        };
        serde_json::to_string_pretty(&doc).expect("model serialization cannot fail")
    }

    /// Parses the JSON interchange form, validating on load.
    pub fn from_json(json: &str) -> Result<TextModel, ModelError> {
        let doc: ModelJson = serde_json::from_str(json)?;
        let alphabet = Alphabet::new(&doc.alphabet)?;
        let entries: Vec<(String, char, String, f64)> = doc
            .transitions
            .into_iter()
            .map(|t| (t.from, t.symbol, t.to, t.prob))
            .collect();
        TextModel::general(&alphabet, &doc.contexts, &doc.start, &entries)
    }

    pub fn load(path: &Path) -> Result<TextModel, ModelError> {
        TextModel::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        Ok(std::fs::write(path, self.to_json())?)
    }
}

#[derive(Serialize, Deserialize)]
struct ModelJson {
    alphabet: String,
    contexts: Vec<String>,
    start: String,
    transitions: Vec<TransitionJson>,
}

#[derive(Serialize, Deserialize)]
struct TransitionJson {
    from: String,
    symbol: char,
    to: String,
    prob: f64,
}
