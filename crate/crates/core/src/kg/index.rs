use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::KgError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeId(pub u32);

impl NodeId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub neighbor: NodeId,
    pub relation: u32,
    pub weight: f32,
}

/// Immutable concept graph in compressed adjacency form.
///
/// Every assertion appears in the adjacency of both endpoints. Neighbour lists
/// are sorted by (neighbour, relation).
#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeIndex {
    pub(super) language: String,
    pub(super) terms: Vec<String>,
    pub(super) term_map: HashMap<String, NodeId>,
    pub(super) relations: Vec<String>,
    pub(super) offsets: Vec<u64>,
    pub(super) edges: Vec<Edge>,
}

impl KnowledgeIndex {
    pub fn language(&self) -> &str {
        &self.language
    }

    pub fn node_count(&self) -> usize {
        self.terms.len()
    }

    /// Number of undirected assertions.
    pub fn edge_count(&self) -> usize {
        self.edges.len() / 2
    }

    pub fn relation_count(&self) -> usize {
        self.relations.len()
    }

    pub fn term(&self, node: NodeId) -> &str {
        &self.terms[node.index()]
    }

    pub fn node(&self, term: &str) -> Option<NodeId> {
        self.term_map.get(term).copied()
    }

    pub fn relation_name(&self, relation: u32) -> &str {
        &self.relations[relation as usize]
    }

    pub fn neighbors(&self, node: NodeId) -> &[Edge] {
        let i = node.index();
        &self.edges[self.offsets[i] as usize..self.offsets[i + 1] as usize]
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.terms.len() as u32).map(NodeId)
    }
}

/// Tallies from building an index out of an assertion dump.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BuildReport {
    pub rows: u64,
    pub malformed: u64,
    pub other_language: u64,
    pub self_loops: u64,
    pub merged_duplicates: u64,
    pub nodes: u64,
    pub edges: u64,
}

/// Accumulates assertions; [`IndexBuilder::build`] freezes them.
#[derive(Debug)]
pub struct IndexBuilder {
    language: String,
    terms: Vec<String>,
    term_map: HashMap<String, NodeId>,
    relations: Vec<String>,
    relation_map: HashMap<String, u32>,
    edges: HashMap<(u32, u32, u32), f32>,
    report: BuildReport,
}

impl IndexBuilder {
    pub fn new(language: &str) -> Self {
        Self {
            language: language.to_owned(),
            terms: Vec::new(),
            term_map: HashMap::new(),
            relations: Vec::new(),
            relation_map: HashMap::new(),
            edges: HashMap::new(),
            report: BuildReport::default(),
        }
    }

    fn intern_term(&mut self, term: &str) -> NodeId {
        if let Some(&id) = self.term_map.get(term) {
            return id;
        }
        let id = NodeId(self.terms.len() as u32);
        self.terms.push(term.to_owned());
        self.term_map.insert(term.to_owned(), id);
        id
    }

    fn intern_relation(&mut self, relation: &str) -> u32 {
        if let Some(&id) = self.relation_map.get(relation) {
            return id;
        }
        let id = self.relations.len() as u32;
        self.relations.push(relation.to_owned());
        self.relation_map.insert(relation.to_owned(), id);
        id
    }

    /// Adds an undirected assertion between two normalized terms. A repeat of
    /// the same (endpoints, relation) keeps the larger weight.
    pub fn add(&mut self, start: &str, relation: &str, end: &str, weight: f32) {
        if start == end {
            self.report.self_loops += 1;
            return;
        }
        let a = self.intern_term(start).0;
        let b = self.intern_term(end).0;
        let r = self.intern_relation(relation);
        let key = (a.min(b), a.max(b), r);
        match self.edges.get_mut(&key) {
            Some(w) => {
                self.report.merged_duplicates += 1;
                if weight > *w {
                    *w = weight;
                }
            }
            None => {
                self.edges.insert(key, weight);
            }
        }
    }

    /// Parses one dump row and adds it if it passes the language filter.
    pub fn add_row(&mut self, line: &str) {
        self.report.rows += 1;
        match parse_row(line, &self.language) {
            Row::Malformed => self.report.malformed += 1,
            Row::OtherLanguage => self.report.other_language += 1,
            Row::Ok { relation, start, end, weight } => self.add(&start, relation, &end, weight),
        }
    }

    pub fn report(&self) -> &BuildReport {
        &self.report
    }

    pub fn build(self) -> (KnowledgeIndex, BuildReport) {
        let n = self.terms.len();
        let mut degree = vec![0u64; n + 1];
        for &(a, b, _) in self.edges.keys() {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        let mut offsets = vec![0u64; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + degree[i];
        }
        let mut cursor = offsets.clone();
        let placeholder = Edge { neighbor: NodeId(0), relation: 0, weight: 0.0 };
        let mut edges = vec![placeholder; offsets[n] as usize];
        for (&(a, b, r), &w) in &self.edges {
            edges[cursor[a as usize] as usize] = Edge { neighbor: NodeId(b), relation: r, weight: w };
            cursor[a as usize] += 1;
            edges[cursor[b as usize] as usize] = Edge { neighbor: NodeId(a), relation: r, weight: w };
            cursor[b as usize] += 1;
        }
        for i in 0..n {
            edges[offsets[i] as usize..offsets[i + 1] as usize].sort_by_key(|e| (e.neighbor, e.relation));
        }
        let mut report = self.report;
        report.nodes = n as u64;
        report.edges = self.edges.len() as u64;
        let index = KnowledgeIndex {
            language: self.language,
            terms: self.terms,
            term_map: self.term_map,
            relations: self.relations,
            offsets,
            edges,
        };
        (index, report)
    }
}

enum Row<'a> {
    Ok { relation: &'a str, start: String, end: String, weight: f32 },
    OtherLanguage,
    Malformed,
}

#[derive(Deserialize)]
struct Metadata {
    weight: Option<f64>,
}

fn parse_row<'a>(line: &'a str, language: &str) -> Row<'a> {
    let mut fields = line.splitn(5, '\t');
    let (Some(_uri), Some(rel), Some(start), Some(end), Some(meta)) =
        (fields.next(), fields.next(), fields.next(), fields.next(), fields.next())
    else {
        return Row::Malformed;
    };
    let Some(relation) = rel.strip_prefix("/r/").filter(|r| !r.is_empty()) else {
        return Row::Malformed;
    };
    let (Some((start_lang, start_term)), Some((end_lang, end_term))) = (parse_concept(start), parse_concept(end)) else {
        return Row::Malformed;
    };
    let weight = match serde_json::from_str::<Metadata>(meta.trim()) {
        Ok(m) => m.weight.unwrap_or(1.0),
        Err(_) => return Row::Malformed,
    };
    if !weight.is_finite() || weight <= 0.0 || !(weight as f32).is_finite() {
        return Row::Malformed;
    }
    if start_lang != language || end_lang != language {
        return Row::OtherLanguage;
    }
    Row::Ok { relation, start: start_term, end: end_term, weight: weight as f32 }
}

/// Splits `/c/<lang>/<term>[/...]` into language and normalized term.
pub fn parse_concept(uri: &str) -> Option<(&str, String)> {
    let rest = uri.strip_prefix("/c/")?;
    let mut parts = rest.split('/');
    let lang = parts.next().filter(|l| !l.is_empty())?;
    let term = parts.next().filter(|t| !t.is_empty())?;
    Some((lang, normalize_term(term)))
}

/// Lowercase with spaces as underscores.
pub fn normalize_term(term: &str) -> String {
    term.split_whitespace()
        .collect::<Vec<_>>()
        .join("_")
        .to_lowercase()
}

/// Builds an index from an assertion dump, keeping only `language` edges.
pub fn build_index(assertions: &Path, language: &str) -> Result<(KnowledgeIndex, BuildReport), KgError> {
    let file = File::open(assertions).map_err(|e| KgError::io(assertions, e))?;
    let mut reader = BufReader::with_capacity(1 << 20, file);
    let mut builder = IndexBuilder::new(language);
    let mut buf = Vec::new();
    loop {
        buf.clear();
        let n = reader.read_until(b'\n', &mut buf).map_err(|e| KgError::io(assertions, e))?;
        if n == 0 {
            break;
        }
        let bytes = buf.strip_suffix(b"\n").unwrap_or(&buf);
        let bytes = bytes.strip_suffix(b"\r").unwrap_or(bytes);
        if bytes.is_empty() {
            continue;
        }
        match std::str::from_utf8(bytes) {
            Ok(line) => builder.add_row(line),
            Err(_) => {
                builder.report.rows += 1;
                builder.report.malformed += 1;
            }
        }
    }
    if builder.edges.is_empty() {
        return Err(KgError::NoUsableRows { path: assertions.to_owned(), report: builder.report });
    }
    Ok(builder.build())
}
