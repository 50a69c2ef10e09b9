use std::collections::BTreeMap;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{McqaSample, PipelineConfig, PipelineError};
use crate::corpus::SkipTally;
use crate::distractor::DropReason;
use crate::qgen::QuestionType;

/// Counts keyed by question type, always listing all five.
pub type QtypeCounts = BTreeMap<QuestionType, usize>;

pub fn zero_qtype_counts() -> QtypeCounts {
    QuestionType::ALL.into_iter().map(|q| (q, 0)).collect()
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SplitCounts {
    pub dev_fraction: f64,
    pub train_passages: usize,
    pub dev_passages: usize,
    pub train_samples: usize,
    pub dev_samples: usize,
}

/// Summary of one `generate` run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub strategy: String,
    pub passages: usize,
    pub corpus_skips: SkipTally,
    pub annotation_errors: usize,
    pub attempted: usize,
    pub emitted: usize,
    pub dropped: usize,
    pub per_qtype: QtypeCounts,
    pub drops: BTreeMap<DropReason, usize>,
    /// Per question type, how many questions each reason dropped.
    pub drops_per_qtype: BTreeMap<QuestionType, BTreeMap<DropReason, usize>>,
    /// Distractor counts by provenance across emitted samples.
    pub provenance: BTreeMap<String, usize>,
    /// HOW questions whose graph attempt failed and fell back.
    pub kg_fallbacks: usize,
    pub split: SplitCounts,
    pub config: PipelineConfig,
    pub wall_time_secs: f64,
}

impl RunReport {
    /// Emitted plus dropped equals attempted, per type and in total.
    pub fn is_balanced(&self) -> bool {
        let emitted: usize = self.per_qtype.values().sum();
        let dropped: usize = self.drops.values().sum();
        emitted == self.emitted && dropped == self.dropped && emitted + dropped == self.attempted
    }
}

/// Per-type and per-provenance counts over a dataset file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub records: usize,
    pub malformed: usize,
    pub per_qtype: QtypeCounts,
    pub per_strategy: BTreeMap<String, usize>,
    pub provenance: BTreeMap<String, usize>,
    pub answer_positions: Vec<usize>,
}

impl DatasetStats {
    pub fn new() -> Self {
        Self {
            records: 0,
            malformed: 0,
            per_qtype: zero_qtype_counts(),
            per_strategy: BTreeMap::new(),
            provenance: BTreeMap::new(),
            answer_positions: Vec::new(),
        }
    }

    pub fn add(&mut self, s: &McqaSample) {
        self.records += 1;
        *self.per_qtype.entry(s.qtype).or_default() += 1;
        *self.per_strategy.entry(s.strategy.clone()).or_default() += 1;
        for p in &s.provenance {
            *self.provenance.entry(p.as_str().to_owned()).or_default() += 1;
        }
        if self.answer_positions.len() < s.choices.len() {
            self.answer_positions.resize(s.choices.len(), 0);
        }
        self.answer_positions[s.answer_index] += 1;
    }
}

impl Default for DatasetStats {
    fn default() -> Self {
        Self::new()
    }
}

impl fmt::Display for DatasetStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:<10}{:>10}", "Ques-Type", "Count")?;
        for (q, n) in &self.per_qtype {
            let mut name = q.as_str().to_lowercase();
            name[..1].make_ascii_uppercase();
            writeln!(f, "{name:<10}{n:>10}")?;
        }
        writeln!(f, "{:<10}{:>10}", "Total", self.records)?;
        if self.malformed > 0 {
            writeln!(f, "{:<10}{:>10}", "Malformed", self.malformed)?;
        }
        Ok(())
    }
}

/// Tallies a dataset file; unparseable or invalid lines count as malformed.
pub fn stats(path: &Path) -> Result<DatasetStats, PipelineError> {
    let file = File::open(path).map_err(|e| PipelineError::io(path, e))?;
    let mut out = DatasetStats::new();
    for line in BufReader::new(file).lines() {
        let line = line.map_err(|e| PipelineError::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<McqaSample>(&line) {
            Ok(s) if s.check().is_ok() => out.add(&s),
            _ => out.malformed += 1,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distractor::Provenance;

    fn rec(qtype: QuestionType) -> McqaSample {
        McqaSample {
            id: "x".into(),
            passage_id: "p".into(),
            context: "c".into(),
            question: "q?".into(),
            qtype,
            choices: vec!["a".into(), "b".into()],
            answer_index: 0,
            strategy: "kg-ne".into(),
            provenance: vec![if qtype == QuestionType::How { Provenance::Kg } else { Provenance::Ne }],
            drop_reason: None,
        }
    }

    #[test]
    fn counts_types_and_malformed_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.jsonl");
        let mut body = String::new();
        for q in [QuestionType::Who, QuestionType::Who, QuestionType::How] {
            body.push_str(&rec(q).to_json_line());
            body.push('\n');
        }
        body.push_str("{broken\n");
        std::fs::write(&path, body).unwrap();
        let s = stats(&path).unwrap();
        assert_eq!(s.records, 3);
        assert_eq!(s.malformed, 1);
        assert_eq!(s.per_qtype[&QuestionType::Who], 2);
        assert_eq!(s.per_qtype[&QuestionType::How], 1);
        assert_eq!(s.per_qtype[&QuestionType::Where], 0);
        assert_eq!(s.provenance["kg"], 1);
        assert_eq!(s.provenance["ne"], 2);
    }

    #[test]
    fn empty_dataset_is_all_zero() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("d.jsonl");
        std::fs::write(&path, "").unwrap();
        let s = stats(&path).unwrap();
        assert_eq!(s.records, 0);
        assert!(s.per_qtype.values().all(|&n| n == 0));
        assert_eq!(s.per_qtype.len(), 5);
    }

    #[test]
    fn table_layout() {
        // full-scale NE-based reference shape
        let mut s = DatasetStats::new();
        for (q, n) in QuestionType::ALL.into_iter().zip([47975, 19366, 4512, 15736, 13911]) {
            s.per_qtype.insert(q, n);
        }
        s.records = s.per_qtype.values().sum();
        assert_eq!(s.records, 101_500);
        let table = s.to_string();
        assert!(table.contains("Who            47975"));
        assert!(table.contains("Total         101500"));
    }
}
