//! Knowledge-graph side of distractor generation.
//!
//! [`build_index`] turns an assertion dump into a [`KnowledgeIndex`]; [`ground`]
//! maps question text onto graph nodes; [`retrieve_subgraph`] collects the
//! k-hop neighbourhood; [`score_candidates`] ranks it against the query by
//! cosine similarity of static embeddings.

mod embedding;
mod index;
mod persist;

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::io;
use std::path::{Path, PathBuf};

use serde::Serialize;
use thiserror::Error;

pub use embedding::EmbeddingTable;
pub use index::{build_index, normalize_term, parse_concept, BuildReport, Edge, IndexBuilder, KnowledgeIndex, NodeId};
pub use persist::MAGIC;

use crate::text::tokenize_lower;

#[derive(Debug, Error)]
pub enum KgError {
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("{path}: no usable assertions ({} rows, {} malformed, {} other language)", report.rows, report.malformed, report.other_language)]
    NoUsableRows { path: PathBuf, report: BuildReport },
    #[error("corrupt index file: {0}")]
    Corrupt(String),
    #[error("embedding line {line}: {message}")]
    Embedding { line: usize, message: String },
    #[error("subgraph retrieval needs at least one seed")]
    EmptySeeds,
    #[error("hop count must be at least 1")]
    ZeroHops,
    #[error("no query term has an embedding")]
    QueryNotEmbeddable,
}

impl KgError {
    pub(crate) fn io(path: &Path, source: io::Error) -> Self {
        KgError::Io { path: path.to_owned(), source }
    }
}

/// Longest-match-first n-gram grounding.
///
/// Tokens are lowercase alphanumeric runs. At each position the longest
/// n-gram (up to `max_ngram`, at least 1) naming a node is taken and its tokens
/// consumed. Returns distinct nodes in match order; an empty result means the
/// text could not be grounded.
pub fn ground(text: &str, index: &KnowledgeIndex, max_ngram: usize) -> Vec<NodeId> {
    let tokens = tokenize_lower(text);
    let max_ngram = max_ngram.max(1);
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    let mut i = 0;
    let mut key = String::new();
    while i < tokens.len() {
        let longest = max_ngram.min(tokens.len() - i);
        let hit = (1..=longest).rev().find_map(|n| {
            key.clear();
            for (j, t) in tokens[i..i + n].iter().enumerate() {
                if j > 0 {
                    key.push('_');
                }
                key.push_str(t);
            }
            index.node(&key).map(|id| (id, n))
        });
        match hit {
            Some((id, n)) => {
                if seen.insert(id) {
                    out.push(id);
                }
                i += n;
            }
            None => i += 1,
        }
    }
    out
}

/// All nodes within `hops` edges of any seed, seeds excluded.
pub fn retrieve_subgraph(seeds: &[NodeId], index: &KnowledgeIndex, hops: usize) -> Result<BTreeSet<NodeId>, KgError> {
    if seeds.is_empty() {
        return Err(KgError::EmptySeeds);
    }
    if hops == 0 {
        return Err(KgError::ZeroHops);
    }
    let mut visited: HashSet<NodeId> = seeds.iter().copied().collect();
    let mut queue: VecDeque<(NodeId, usize)> = seeds.iter().map(|&s| (s, 0)).collect();
    let mut found = BTreeSet::new();
    while let Some((node, depth)) = queue.pop_front() {
        if depth == hops {
            continue;
        }
        for e in index.neighbors(node) {
            if visited.insert(e.neighbor) {
                found.insert(e.neighbor);
                queue.push_back((e.neighbor, depth + 1));
            }
        }
    }
    Ok(found)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoredCandidate {
    pub node: NodeId,
    pub term: String,
    pub score: f64,
}

/// Ranks `candidates` by cosine similarity to the mean embedding of
/// `query_terms`.
///
/// Candidates without an embedding are dropped. Output is sorted by score
/// descending, ties by ascending term.
pub fn score_candidates<S: AsRef<str>>(
    candidates: impl IntoIterator<Item = NodeId>,
    index: &KnowledgeIndex,
    query_terms: &[S],
    emb: &EmbeddingTable,
) -> Result<Vec<ScoredCandidate>, KgError> {
    let query = query_vector(query_terms, emb).ok_or(KgError::QueryNotEmbeddable)?;
    let mut scored: Vec<ScoredCandidate> = candidates
        .into_iter()
        .filter_map(|node| {
            let term = index.term(node);
            emb.get(term).map(|v| ScoredCandidate { node, term: term.to_owned(), score: cosine(&query, v) })
        })
        .collect();
    scored.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.term.cmp(&b.term)));
    Ok(scored)
}

/// Arithmetic mean of the embeddable query terms.
pub fn query_vector<S: AsRef<str>>(terms: &[S], emb: &EmbeddingTable) -> Option<Vec<f64>> {
    let mut sum = vec![0.0f64; emb.dim()];
    let mut n = 0usize;
    for t in terms {
        if let Some(v) = emb.get(t.as_ref()) {
            for (s, x) in sum.iter_mut().zip(v) {
                *s += f64::from(*x);
            }
            n += 1;
        }
    }
    if n == 0 {
        return None;
    }
    sum.iter_mut().for_each(|s| *s /= n as f64);
    Some(sum)
}

/// Cosine similarity clamped to [-1, 1]; zero vectors score 0.
pub fn cosine(query: &[f64], v: &[f32]) -> f64 {
    let mut dot = 0.0;
    let mut qq = 0.0;
    let mut vv = 0.0;
    for (q, x) in query.iter().zip(v) {
        let x = f64::from(*x);
        dot += q * x;
        qq += q * q;
        vv += x * x;
    }
    if qq == 0.0 || vv == 0.0 {
        return 0.0;
    }
    (dot / (qq.sqrt() * vv.sqrt())).clamp(-1.0, 1.0)
}
