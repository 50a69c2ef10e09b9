//! Per-type entry lists and the compiled longest-match automaton over them.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use aho_corasick::{AhoCorasick, AhoCorasickBuilder, MatchKind};
use thiserror::Error;

use super::{Candidate, EntityType};

#[derive(Debug, Error)]
pub enum GazetteerError {
    #[error("cannot read gazetteer {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("gazetteer file {path}: `{stem}` is not a gazetteer entity type")]
    BadFileName { path: PathBuf, stem: String },
    #[error("failed to compile gazetteer automaton: {0}")]
    Build(#[from] aho_corasick::BuildError),
}

/// Surface entries keyed by type. Ordered containers keep compilation
/// independent of insertion and file order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GazetteerSet {
    entries: BTreeMap<EntityType, BTreeSet<String>>,
}

impl GazetteerSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, etype: EntityType, entry: &str) {
        let entry = entry.trim();
        if !entry.is_empty() {
            self.entries.entry(etype).or_default().insert(entry.to_owned());
        }
    }

    pub fn with(mut self, etype: EntityType, entries: &[&str]) -> Self {
        for e in entries {
            self.insert(etype, e);
        }
        self
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, etype: EntityType, entry: &str) -> bool {
        self.entries.get(&etype).is_some_and(|s| s.contains(entry))
    }

    /// Loads every `<TYPE>.<ext>` file in `dir`; one entry per line.
    ///
    /// Files whose stem is not an entity type name are an error, as are files
    /// for the pattern-extracted types.
    pub fn load_dir(dir: &Path) -> Result<Self, GazetteerError> {
        let io_err = |path: &Path| {
            let path = path.to_owned();
            move |source| GazetteerError::Io { path, source }
        };
        let mut set = Self::new();
        let mut files: Vec<PathBuf> = fs::read_dir(dir)
            .map_err(io_err(dir))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        files.sort();
        for path in files {
            let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or_default().to_owned();
            if stem.starts_with('.') {
                continue;
            }
            let etype: EntityType = match stem.parse() {
                Ok(t) if !EntityType::is_pattern_type(t) => t,
                _ => return Err(GazetteerError::BadFileName { path, stem }),
            };
            let body = fs::read_to_string(&path).map_err(io_err(&path))?;
            for line in body.lines() {
                set.insert(etype, line);
            }
        }
        Ok(set)
    }

    pub fn compile(&self) -> Result<GazetteerMatcher, GazetteerError> {
        let mut by_surface: BTreeMap<&str, Vec<EntityType>> = BTreeMap::new();
        for (etype, entries) in &self.entries {
            for e in entries {
                by_surface.entry(e.as_str()).or_default().push(*etype);
            }
        }
        if by_surface.is_empty() {
            return Ok(GazetteerMatcher { automaton: None, types: Vec::new() });
        }
        let patterns: Vec<&str> = by_surface.keys().copied().collect();
        let types = by_surface.into_values().collect();
        let automaton = AhoCorasickBuilder::new().match_kind(MatchKind::Standard).build(patterns)?;
        Ok(GazetteerMatcher { automaton: Some(automaton), types })
    }
}

/// Finds every word-bounded occurrence of every entry.
#[derive(Debug, Clone)]
pub struct GazetteerMatcher {
    automaton: Option<AhoCorasick>,
    types: Vec<Vec<EntityType>>,
}

impl GazetteerMatcher {
    pub(super) fn candidates(&self, text: &str, out: &mut Vec<Candidate>) {
        let Some(ac) = &self.automaton else { return };
        for m in ac.find_overlapping_iter(text) {
            if !text.is_char_boundary(m.start()) || !text.is_char_boundary(m.end()) {
                continue;
            }
            if !word_bounded(text, m.start(), m.end()) {
                continue;
            }
            for &etype in &self.types[m.pattern().as_usize()] {
                out.push(Candidate { start: m.start(), end: m.end(), etype });
            }
        }
    }
}

fn word_bounded(text: &str, start: usize, end: usize) -> bool {
    let inner = &text[start..end];
    let first = inner.chars().next();
    let last = inner.chars().next_back();
    let before = text[..start].chars().next_back();
    let after = text[end..].chars().next();
    let clash = |edge: Option<char>, outside: Option<char>| {
        edge.is_some_and(char::is_alphanumeric) && outside.is_some_and(char::is_alphanumeric)
    };
    !clash(first, before) && !clash(last, after)
}
