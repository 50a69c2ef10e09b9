//! Training-free baselines over a dataset file: sliding-window overlap and
//! seeded random choice.

mod sw;

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::pipeline::{McqaSample, PipelineError};
use crate::qgen::QuestionType;
use crate::seed::SeedKey;

pub use sw::{sw_predict, sw_score, SwContext};

/// A baseline that picks one choice per sample.
pub trait EvalMethod: Send + Sync {
    fn name(&self) -> &'static str;

    /// `index` is the record's position among parsed records.
    fn predict(&self, sample: &McqaSample, index: usize, seed: u64) -> usize;
}

pub struct SlidingWindow;

impl EvalMethod for SlidingWindow {
    fn name(&self) -> &'static str {
        "sw"
    }

    fn predict(&self, sample: &McqaSample, _index: usize, _seed: u64) -> usize {
        sw_predict(sample)
    }
}

pub struct RandomChoice;

impl EvalMethod for RandomChoice {
    fn name(&self) -> &'static str {
        "random"
    }

    fn predict(&self, sample: &McqaSample, index: usize, seed: u64) -> usize {
        let mut rng = SeedKey::new(seed).str("eval-random").int(index as u64).rng();
        rng.gen_range(0..sample.choices.len())
    }
}

/// Methods by name.
#[derive(Clone)]
pub struct MethodRegistry {
    methods: BTreeMap<&'static str, Arc<dyn EvalMethod>>,
}

impl MethodRegistry {
    pub fn empty() -> Self {
        Self { methods: BTreeMap::new() }
    }

    pub fn register(&mut self, method: impl EvalMethod + 'static) {
        self.methods.insert(method.name(), Arc::new(method));
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn EvalMethod>> {
        self.methods.get(name).cloned()
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.methods.keys().copied()
    }
}

impl Default for MethodRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(SlidingWindow);
        r.register(RandomChoice);
        r
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Tally {
    pub total: usize,
    pub correct: usize,
    pub accuracy: f64,
}

impl Tally {
    fn finish(&mut self) {
        self.accuracy = if self.total == 0 { 0.0 } else { self.correct as f64 / self.total as f64 };
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub method: String,
    pub seed: u64,
    pub total: usize,
    pub correct: usize,
    pub accuracy: f64,
    pub per_qtype: BTreeMap<QuestionType, Tally>,
    /// Lines that did not parse into a valid record.
    pub skipped: usize,
}

/// Scores already-parsed samples.
pub fn evaluate_samples(samples: &[McqaSample], method: &dyn EvalMethod, seed: u64) -> EvalResult {
    let hits: Vec<bool> = samples
        .par_iter()
        .enumerate()
        .map(|(i, s)| method.predict(s, i, seed) == s.answer_index)
        .collect();
    let mut per_qtype: BTreeMap<QuestionType, Tally> =
        QuestionType::ALL.into_iter().map(|q| (q, Tally::default())).collect();
    for (s, &hit) in samples.iter().zip(&hits) {
        let t = per_qtype.get_mut(&s.qtype).expect("all types present");
        t.total += 1;
        t.correct += hit as usize;
    }
    per_qtype.values_mut().for_each(Tally::finish);
    let mut all = Tally { total: samples.len(), correct: hits.iter().filter(|&&h| h).count(), accuracy: 0.0 };
    all.finish();
    EvalResult {
        method: method.name().to_owned(),
        seed,
        total: all.total,
        correct: all.correct,
        accuracy: all.accuracy,
        per_qtype,
        skipped: 0,
    }
}

/// Reads a JSONL dataset and scores it with `method`.
pub fn evaluate(path: &Path, method: &dyn EvalMethod, seed: u64) -> Result<EvalResult, PipelineError> {
    let file = File::open(path).map_err(|e| PipelineError::io(path, e))?;
    let mut samples = Vec::new();
    let mut skipped = 0;
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| PipelineError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<McqaSample>(&line) {
            Ok(s) if s.check().is_ok() => samples.push(s),
            _ => skipped += 1,
        }
    }
    let mut result = evaluate_samples(&samples, method, seed);
    result.skipped = skipped;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distractor::Provenance;

    fn sample(context: &str, choices: &[&str], answer: usize, qtype: QuestionType) -> McqaSample {
        McqaSample {
            id: "s".into(),
            passage_id: "p".into(),
            context: context.into(),
            question: "what?".into(),
            qtype,
            choices: choices.iter().map(|c| c.to_string()).collect(),
            answer_index: answer,
            strategy: "ne".into(),
            provenance: vec![Provenance::Ne; choices.len() - 1],
            drop_reason: None,
        }
    }

    #[test]
    fn sw_is_perfect_on_separable_data() {
        let samples: Vec<_> = (0..20)
            .map(|i| {
                let gold = format!("gold{i}");
                let ctx = format!("filler words here {gold} and more filler");
                let mut choices = vec!["zz1", "zz2", "zz3"];
                choices.insert(i % 4, &gold);
                let owned: Vec<&str> = choices.clone();
                sample(&ctx, &owned, i % 4, QuestionType::What)
            })
            .collect();
        let r = evaluate_samples(&samples, &SlidingWindow, 0);
        assert_eq!(r.correct, 20);
        assert_eq!(r.accuracy, 1.0);
        assert_eq!(r.per_qtype[&QuestionType::What].total, 20);
        assert_eq!(r.per_qtype[&QuestionType::Who].total, 0);
    }

    #[test]
    fn random_is_deterministic_per_seed() {
        let samples: Vec<_> = (0..200).map(|_| sample("c", &["a", "b", "c", "d"], 0, QuestionType::Who)).collect();
        let a = evaluate_samples(&samples, &RandomChoice, 7);
        let b = evaluate_samples(&samples, &RandomChoice, 7);
        assert_eq!(a, b);
        let c = evaluate_samples(&samples, &RandomChoice, 8);
        assert_eq!(c.total, 200);
    }

    #[test]
    fn unreadable_lines_are_skipped_and_counted() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.jsonl");
        let good = sample("the dog ran", &["dog", "xyz"], 0, QuestionType::Who).to_json_line();
        std::fs::write(&path, format!("{good}\nnot json\n\n{good}\n")).unwrap();
        let r = evaluate(&path, &SlidingWindow, 0).unwrap();
        assert_eq!((r.total, r.correct, r.skipped), (2, 2, 1));
    }

    #[test]
    fn registry_knows_both_methods() {
        let r = MethodRegistry::default();
        assert_eq!(r.names().collect::<Vec<_>>(), ["random", "sw"]);
        assert!(r.get("krl").is_none());
    }
}
