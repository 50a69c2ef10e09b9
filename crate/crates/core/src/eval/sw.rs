use std::collections::{BTreeSet, HashMap};

use crate::pipeline::McqaSample;
use crate::text::tokenize_lower;

/// Context tokens with their occurrence counts, shared across a sample's options.
#[derive(Debug, Clone)]
pub struct SwContext {
    tokens: Vec<String>,
    counts: HashMap<String, usize>,
}

impl SwContext {
    pub fn new(tokens: Vec<String>) -> Self {
        let mut counts = HashMap::new();
        for t in &tokens {
            *counts.entry(t.clone()).or_insert(0) += 1;
        }
        Self { tokens, counts }
    }

    pub fn from_text(text: &str) -> Self {
        Self::new(tokenize_lower(text))
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Best window score for the target set built from `question` and `option`.
    pub fn score(&self, question: &str, option: &str) -> f64 {
        let n = self.tokens.len();
        let target: BTreeSet<String> = tokenize_lower(question).into_iter().chain(tokenize_lower(option)).collect();
        let width = target.len().min(n);
        if width == 0 {
            return 0.0;
        }
        let weights: Vec<f64> = self
            .tokens
            .iter()
            .map(|t| {
                if target.contains(t) {
                    (1.0 + n as f64 / self.counts[t] as f64).ln()
                } else {
                    0.0
                }
            })
            .collect();
        weights
            .windows(width)
            .map(|w| w.iter().sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// Index of the best-scoring option; the lowest index wins ties.
    pub fn predict<S: AsRef<str>>(&self, question: &str, options: &[S]) -> usize {
        let mut best = (0, f64::NEG_INFINITY);
        for (i, o) in options.iter().enumerate() {
            let s = self.score(question, o.as_ref());
            if s > best.1 {
                best = (i, s);
            }
        }
        best.0
    }
}

/// Sliding-window overlap score over pre-tokenized context.
pub fn sw_score(context_tokens: &[String], question: &str, option: &str) -> f64 {
    SwContext::new(context_tokens.to_vec()).score(question, option)
}

pub fn sw_predict(sample: &McqaSample) -> usize {
    SwContext::from_text(&sample.context).predict(&sample.question, &sample.choices)
}
