//! Answer extraction.
//!
//! Numeric types (DATE, TIME, PERCENT, MONEY, QUANTITY) come from regular
//! patterns; the other eleven from gazetteer lookup. All candidate spans are
//! pooled and resolved greedily: longest span first, then leftmost, then by
//! [`EntityType::PRIORITY`].

mod annotations;
mod gazetteer;
mod patterns;
mod types;

use std::collections::BTreeMap;

pub use annotations::{AnnotationIoError, Annotations, RowError};
pub use gazetteer::{GazetteerError, GazetteerMatcher, GazetteerSet};
pub use patterns::{PatternSet, DEFAULT_UNITS};
pub use types::{EntityMention, EntityType, UnknownEntityType};

use crate::corpus::Passage;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub(crate) struct Candidate {
    pub start: usize,
    pub end: usize,
    pub etype: EntityType,
}

/// Pattern and gazetteer extractors bundled for repeated use.
#[derive(Debug, Clone)]
pub struct EntityExtractor {
    patterns: PatternSet,
    gazetteer: GazetteerMatcher,
}

impl EntityExtractor {
    pub fn new(gazetteers: &GazetteerSet, patterns: PatternSet) -> Result<Self, GazetteerError> {
        Ok(Self { patterns, gazetteer: gazetteers.compile()? })
    }

    pub fn extract(&self, passage: &Passage) -> Vec<EntityMention> {
        let text = passage.text.as_str();
        let mut candidates = Vec::new();
        self.patterns.candidates(text, &mut candidates);
        self.gazetteer.candidates(text, &mut candidates);
        resolve_overlaps(candidates)
            .into_iter()
            .map(|c| EntityMention {
                passage_id: passage.id.clone(),
                span: (c.start, c.end),
                surface: text[c.start..c.end].to_owned(),
                etype: c.etype,
            })
            .collect()
    }
}

/// Extracts with default patterns; compiles the gazetteer on every call, so
/// prefer [`EntityExtractor`] in loops.
pub fn extract_entities(passage: &Passage, gazetteers: &GazetteerSet) -> Result<Vec<EntityMention>, GazetteerError> {
    Ok(EntityExtractor::new(gazetteers, PatternSet::default())?.extract(passage))
}

fn resolve_overlaps(mut candidates: Vec<Candidate>) -> Vec<Candidate> {
    candidates.retain(|c| c.start < c.end);
    candidates.sort_by(|a, b| {
        (b.end - b.start)
            .cmp(&(a.end - a.start))
            .then(a.start.cmp(&b.start))
            .then(a.etype.priority().cmp(&b.etype.priority()))
    });
    candidates.dedup();
    // accepted spans keyed by start
    let mut accepted: BTreeMap<usize, Candidate> = BTreeMap::new();
    for c in candidates {
        let left_clear = accepted.range(..c.end).next_back().is_none_or(|(_, p)| p.end <= c.start);
        if left_clear {
            accepted.insert(c.start, c);
        }
    }
    accepted.into_values().collect()
}
