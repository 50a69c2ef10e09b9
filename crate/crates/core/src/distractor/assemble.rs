use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use super::{Distractor, Provenance};
use crate::text::fold;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssembleError {
    #[error("expected {expected} distractors, got {got}")]
    WrongCount { expected: usize, got: usize },
    #[error("candidate `{0}` duplicates another after case folding")]
    Duplicate(String),
    #[error("candidate-set size must be at least 2")]
    TooSmall,
}

/// Shuffled choices with the gold position recorded.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateSet {
    pub choices: Vec<String>,
    pub answer_index: usize,
    /// One entry per non-gold choice, in choice order.
    pub provenance: Vec<Provenance>,
    #[serde(skip)]
    pub distractors: Vec<Distractor>,
}

/// Places the gold answer among `distractors` by a seeded shuffle.
pub fn assemble_candidates(
    gold_surface: &str,
    distractors: Vec<Distractor>,
    size: usize,
    rng: &mut ChaCha8Rng,
) -> Result<CandidateSet, AssembleError> {
    if size < 2 {
        return Err(AssembleError::TooSmall);
    }
    if distractors.len() != size - 1 {
        return Err(AssembleError::WrongCount { expected: size - 1, got: distractors.len() });
    }
    let mut seen = HashSet::with_capacity(size);
    seen.insert(fold(gold_surface));
    for d in &distractors {
        if !seen.insert(fold(&d.surface)) {
            return Err(AssembleError::Duplicate(d.surface.clone()));
        }
    }
    // slot 0 is gold, 1.. are distractors
    let mut order: Vec<usize> = (0..size).collect();
    order.shuffle(rng);
    let mut choices = Vec::with_capacity(size);
    let mut provenance = Vec::with_capacity(size - 1);
    let mut placed = Vec::with_capacity(size - 1);
    let mut answer_index = 0;
    for (pos, &slot) in order.iter().enumerate() {
        if slot == 0 {
            answer_index = pos;
            choices.push(gold_surface.to_owned());
        } else {
            let d = &distractors[slot - 1];
            choices.push(d.surface.clone());
            provenance.push(d.provenance);
            placed.push(d.clone());
        }
    }
    Ok(CandidateSet { choices, answer_index, provenance, distractors: placed })
}
