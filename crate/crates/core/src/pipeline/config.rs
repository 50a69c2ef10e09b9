use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::PipelineError;
use crate::corpus::CorpusFormat;
use crate::distractor::{KgParams, StrategyRegistry};
use crate::qgen::Realization;

pub const MIN_CANDIDATES: usize = 2;
pub const MAX_CANDIDATES: usize = 8;

/// Flat run configuration, read from JSON with the same field names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub strategy: String,
    pub candidate_size: usize,
    pub max_questions_per_passage: usize,
    pub hops: usize,
    pub topk_pool: usize,
    pub max_ngram: usize,
    pub realization: Realization,
    pub master_seed: u64,
    pub dev_fraction: f64,

    pub corpus: PathBuf,
    pub corpus_format: CorpusFormat,
    pub gazetteers: Option<PathBuf>,
    pub annotations: Option<PathBuf>,
    /// QUANTITY unit lexicon; the built-in list when absent.
    pub units: Option<Vec<String>>,
    /// Prebuilt binary index; takes precedence over `kg_assertions`.
    pub kg_index: Option<PathBuf>,
    pub kg_assertions: Option<PathBuf>,
    pub kg_language: String,
    pub embeddings: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        let kg = KgParams::default();
        Self {
            strategy: "kg-ne".to_owned(),
            candidate_size: 4,
            max_questions_per_passage: 1,
            hops: kg.hops,
            topk_pool: kg.topk_pool,
            max_ngram: kg.max_ngram,
            realization: Realization::Front,
            master_seed: 0,
            dev_fraction: 0.0,
            corpus: PathBuf::new(),
            corpus_format: CorpusFormat::PlainLines,
            gazetteers: None,
            annotations: None,
            units: None,
            kg_index: None,
            kg_assertions: None,
            kg_language: "en".to_owned(),
            embeddings: None,
        }
    }
}

impl PipelineConfig {
    /// Reads a config file; relative paths resolve against its directory.
    pub fn load(path: &Path) -> Result<Self, PipelineError> {
        let body = fs::read_to_string(path).map_err(|e| PipelineError::io(path, e))?;
        let mut cfg: Self = serde_json::from_str(&body)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        cfg.resolve_paths(base);
        cfg.validate(&StrategyRegistry::default())?;
        Ok(cfg)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() && !p.as_os_str().is_empty() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.corpus);
        for p in [
            &mut self.gazetteers,
            &mut self.annotations,
            &mut self.kg_index,
            &mut self.kg_assertions,
            &mut self.embeddings,
        ]
        .into_iter()
        .flatten()
        {
            fix(p);
        }
    }

    pub fn kg_params(&self) -> KgParams {
        KgParams { hops: self.hops, topk_pool: self.topk_pool, max_ngram: self.max_ngram }
    }

    pub fn validate(&self, registry: &StrategyRegistry) -> Result<(), PipelineError> {
        let bad = |m: String| Err(PipelineError::Config(m));
        let Some(strategy) = registry.get(&self.strategy) else {
            let known: Vec<_> = registry.names().collect();
            return bad(format!("unknown strategy `{}` (known: {})", self.strategy, known.join(", ")));
        };
        if !(MIN_CANDIDATES..=MAX_CANDIDATES).contains(&self.candidate_size) {
            return bad(format!(
                "candidate_size must be in {MIN_CANDIDATES}..={MAX_CANDIDATES}, got {}",
                self.candidate_size
            ));
        }
        if !(0.0..1.0).contains(&self.dev_fraction) {
            return bad(format!("dev_fraction must be in [0, 1), got {}", self.dev_fraction));
        }
        if self.max_questions_per_passage == 0 {
            return bad("max_questions_per_passage must be at least 1".into());
        }
        if self.hops == 0 || self.max_ngram == 0 || self.topk_pool == 0 {
            return bad("hops, max_ngram and topk_pool must be at least 1".into());
        }
        if self.corpus.as_os_str().is_empty() {
            return bad("corpus path is required".into());
        }
        if strategy.needs_kg() {
            if self.kg_index.is_none() && self.kg_assertions.is_none() {
                return bad(format!("strategy `{}` needs kg_index or kg_assertions", self.strategy));
            }
            if self.embeddings.is_none() {
                return bad(format!("strategy `{}` needs embeddings", self.strategy));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base() -> PipelineConfig {
        PipelineConfig { strategy: "ne".into(), corpus: "c.txt".into(), ..Default::default() }
    }

    #[test]
    fn defaults_validate() {
        base().validate(&StrategyRegistry::default()).unwrap();
    }

    #[test]
    fn rejects_out_of_range_fields() {
        let r = StrategyRegistry::default();
        for cfg in [
            PipelineConfig { candidate_size: 1, ..base() },
            PipelineConfig { candidate_size: 9, ..base() },
            PipelineConfig { dev_fraction: 1.0, ..base() },
            PipelineConfig { dev_fraction: -0.1, ..base() },
            PipelineConfig { strategy: "bert".into(), ..base() },
            PipelineConfig { strategy: "kg".into(), ..base() },
            PipelineConfig { max_questions_per_passage: 0, ..base() },
            PipelineConfig { corpus: PathBuf::new(), ..base() },
        ] {
            assert!(matches!(cfg.validate(&r), Err(PipelineError::Config(_))), "{cfg:?}");
        }
    }

    #[test]
    fn loads_flat_json_and_resolves_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        fs::write(
            &path,
            r#"{"strategy":"random","candidate_size":5,"corpus":"data/c.txt","corpus_format":"jsonl","realization":"replace","dev_fraction":0.1}"#,
        )
        .unwrap();
        let cfg = PipelineConfig::load(&path).unwrap();
        assert_eq!(cfg.candidate_size, 5);
        assert_eq!(cfg.corpus, dir.path().join("data/c.txt"));
        assert_eq!(cfg.corpus_format, CorpusFormat::Jsonl);
        assert_eq!(cfg.realization, Realization::Replace);
        assert_eq!(cfg.hops, 2);

        fs::write(&path, r#"{"strategy":"random","corpus":"c","colour":"red"}"#).unwrap();
        assert!(matches!(PipelineConfig::load(&path), Err(PipelineError::Config(_))));
    }
}
