use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::distractor::{DropReason, Provenance};
use crate::qgen::QuestionType;
use crate::text::fold;

/// One dataset line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct McqaSample {
    pub id: String,
    pub passage_id: String,
    pub context: String,
    pub question: String,
    pub qtype: QuestionType,
    pub choices: Vec<String>,
    pub answer_index: usize,
    pub strategy: String,
    pub provenance: Vec<Provenance>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drop_reason: Option<DropReason>,
}

impl McqaSample {
    pub fn gold(&self) -> &str {
        &self.choices[self.answer_index]
    }

    /// Checks the record-level invariants, returning the first violation.
    pub fn check(&self) -> Result<(), String> {
        if self.context.is_empty() {
            return Err("empty context".into());
        }
        if self.question.is_empty() {
            return Err("empty question".into());
        }
        if self.choices.len() < 2 {
            return Err(format!("{} choices", self.choices.len()));
        }
        if self.answer_index >= self.choices.len() {
            return Err(format!("answer_index {} out of range", self.answer_index));
        }
        let mut seen = HashSet::new();
        if !self.choices.iter().all(|c| seen.insert(fold(c))) {
            return Err("choices not distinct after case folding".into());
        }
        if self.provenance.len() != self.choices.len() - 1 {
            return Err(format!("{} provenance entries for {} choices", self.provenance.len(), self.choices.len()));
        }
        Ok(())
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }
}
