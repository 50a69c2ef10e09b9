//! Synthesize multiple-choice question answering datasets from unannotated text.
//!
//! The pipeline runs in two stages. Named entities are extracted from each
//! passage and treated as gold answers; the containing sentence is masked into
//! a cloze and realized as a wh-question. A distractor strategy then fills the
//! rest of the candidate set, either from the global answer pool (optionally
//! restricted to the gold entity type) or from a knowledge-graph neighbourhood
//! of the question ranked by embedding similarity.
//!
//! Module map:
//!
//! - [`corpus`]: passage ingestion and sentence segmentation
//! - [`entity`]: the entity taxonomy, pattern + gazetteer extraction, stand-off annotations
//! - [`qgen`]: cloze construction and template question realization
//! - [`kg`]: assertion-dump indexing, grounding, subgraph retrieval, relevance scoring
//! - [`distractor`]: the strategy registry and candidate-set assembly
//! - [`pipeline`]: configuration, dataset generation, reports and statistics
//! - [`eval`]: training-free baselines (sliding window, random)

pub mod corpus;
pub mod distractor;
pub mod entity;
pub mod eval;
pub mod kg;
pub mod pipeline;
pub mod qgen;
pub mod seed;
pub mod text;

pub use corpus::{CorpusFormat, Passage};
pub use distractor::{CandidateSet, DistractorStrategy, DropReason, Provenance, StrategyRegistry};
pub use entity::{EntityMention, EntityType};
pub use pipeline::{McqaSample, PipelineConfig, RunReport};
pub use qgen::{GeneratedQuestion, QuestionType, Realization};
