//! Distractor generation.
//!
//! Each strategy implements [`DistractorStrategy`] and is looked up by name in
//! a [`StrategyRegistry`]. The built-in registry holds:
//!
//! | name     | source                                                      |
//! |----------|-------------------------------------------------------------|
//! | `random` | answers of other questions, any type                        |
//! | `ne`     | answers of other questions sharing the gold entity type     |
//! | `kg`     | knowledge-graph neighbourhood ranked by embedding cosine    |
//! | `kg-ne`  | `kg` for HOW questions, `ne` otherwise and on KG failure    |

mod assemble;
mod pool;
mod strategies;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use assemble::{assemble_candidates, AssembleError, CandidateSet};
pub use pool::{AnswerPool, PoolEntry};
pub use strategies::{
    hybrid_distractors, kg_distractors, ne_distractors, random_distractors, HybridStrategy, KgStrategy, NeStrategy,
    RandomStrategy,
};

use crate::entity::EntityMention;
use crate::kg::{EmbeddingTable, KnowledgeIndex, NodeId};
use crate::qgen::QuestionType;

/// Which method produced a distractor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Random,
    Ne,
    Kg,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Random => "random",
            Provenance::Ne => "ne",
            Provenance::Kg => "kg",
        }
    }
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Why a question did not become a sample.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DropReason {
    PoolExhausted,
    GroundingFailed,
    SubgraphExhausted,
    ClozeInvalid,
    InvalidCandidates,
}

impl DropReason {
    pub const ALL: [DropReason; 5] = [
        DropReason::PoolExhausted,
        DropReason::GroundingFailed,
        DropReason::SubgraphExhausted,
        DropReason::ClozeInvalid,
        DropReason::InvalidCandidates,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            DropReason::PoolExhausted => "pool-exhausted",
            DropReason::GroundingFailed => "grounding-failed",
            DropReason::SubgraphExhausted => "subgraph-exhausted",
            DropReason::ClozeInvalid => "cloze-invalid",
            DropReason::InvalidCandidates => "invalid-candidates",
        }
    }
}

impl fmt::Display for DropReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Where a distractor came from, for audits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Origin {
    /// Index into the [`AnswerPool`].
    Pool(usize),
    /// Graph node and its relevance score.
    Kg { node: NodeId, score: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Distractor {
    pub surface: String,
    pub provenance: Provenance,
    pub origin: Origin,
}

/// One strategy tried for a question, with its failure if it failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Attempt {
    pub strategy: Provenance,
    pub failure: Option<DropReason>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DistractorOutcome {
    pub distractors: Vec<Distractor>,
    pub attempts: Vec<Attempt>,
}

/// Failure of every attempt; the last reason is the drop reason.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistractorFailure {
    pub reason: DropReason,
    pub attempts: Vec<Attempt>,
}

impl DistractorFailure {
    fn single(strategy: Provenance, reason: DropReason) -> Self {
        Self { reason, attempts: vec![Attempt { strategy, failure: Some(reason) }] }
    }
}

/// Graph-retrieval parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct KgParams {
    pub hops: usize,
    pub topk_pool: usize,
    pub max_ngram: usize,
}

impl Default for KgParams {
    fn default() -> Self {
        Self { hops: 2, topk_pool: 50, max_ngram: 3 }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct KgResources<'a> {
    pub index: &'a KnowledgeIndex,
    pub embeddings: &'a EmbeddingTable,
}

/// Shared, read-only inputs to every strategy.
#[derive(Debug, Clone, Copy)]
pub struct StrategyContext<'a> {
    pub pool: &'a AnswerPool,
    pub kg: Option<KgResources<'a>>,
    pub params: KgParams,
}

/// The question for which distractors are needed.
#[derive(Debug, Clone, Copy)]
pub struct DistractorRequest<'a> {
    pub question: &'a str,
    pub qtype: QuestionType,
    pub gold: &'a EntityMention,
    /// Number of distractors, i.e. candidate-set size minus one.
    pub count: usize,
}

pub trait DistractorStrategy: Send + Sync {
    /// Registry key, also written to each record's `strategy` field.
    fn name(&self) -> &'static str;

    /// Whether [`StrategyContext::kg`] must be present.
    fn needs_kg(&self) -> bool {
        false
    }

    fn generate(
        &self,
        request: &DistractorRequest<'_>,
        ctx: &StrategyContext<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<DistractorOutcome, DistractorFailure>;
}

/// Strategies by name.
#[derive(Clone)]
pub struct StrategyRegistry {
    strategies: BTreeMap<&'static str, Arc<dyn DistractorStrategy>>,
}

impl StrategyRegistry {
    pub fn empty() -> Self {
        Self { strategies: BTreeMap::new() }
    }

    /// Adds or replaces a strategy under its own name.
    pub fn register(&mut self, strategy: impl DistractorStrategy + 'static) {
        self.strategies.insert(strategy.name(), Arc::new(strategy));
    }

    pub fn get(&self, name: &str) -> Option<Arc<dyn DistractorStrategy>> {
        self.strategies.get(name).cloned()
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.strategies.keys().copied()
    }
}

impl Default for StrategyRegistry {
    fn default() -> Self {
        let mut r = Self::empty();
        r.register(RandomStrategy);
        r.register(NeStrategy);
        r.register(KgStrategy);
        r.register(HybridStrategy);
        r
    }
}

impl fmt::Debug for StrategyRegistry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.strategies.keys()).finish()
    }
}
