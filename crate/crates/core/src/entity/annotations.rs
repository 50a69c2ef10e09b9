//! Stand-off annotation ingestion.
//!
//! Rows are `passage_id \t start_byte \t end_byte \t TYPE \t surface`. Type and
//! integer errors are caught while reading; span/surface agreement can only be
//! checked once the passage text is known, see [`Annotations::mentions_for`].

use std::collections::HashMap;
use std::fmt;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use super::{EntityMention, EntityType};
use crate::corpus::Passage;

#[derive(Debug, Error)]
#[error("cannot read annotations {path}: {source}")]
pub struct AnnotationIoError {
    pub path: PathBuf,
    #[source]
    pub source: io::Error,
}

/// A rejected row, numbered from 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RowError {
    pub row: usize,
    pub message: String,
}

impl fmt::Display for RowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "row {}: {}", self.row, self.message)
    }
}

#[derive(Debug, Clone, Default)]
pub struct Annotations {
    by_passage: HashMap<String, Vec<(usize, EntityMention)>>,
    rejected: Vec<RowError>,
}

impl Annotations {
    pub fn parse(body: &str) -> Self {
        let mut out = Self::default();
        for (i, line) in body.lines().enumerate() {
            let row = i + 1;
            if line.trim().is_empty() {
                continue;
            }
            match parse_row(line) {
                Ok(m) => out.by_passage.entry(m.passage_id.clone()).or_default().push((row, m)),
                Err(message) => out.rejected.push(RowError { row, message }),
            }
        }
        out
    }

    pub fn load(path: &Path) -> Result<Self, AnnotationIoError> {
        let body = fs::read_to_string(path).map_err(|source| AnnotationIoError { path: path.to_owned(), source })?;
        Ok(Self::parse(&body))
    }

    /// Rows rejected while parsing.
    pub fn rejected(&self) -> &[RowError] {
        &self.rejected
    }

    pub fn passage_count(&self) -> usize {
        self.by_passage.len()
    }

    pub fn is_empty(&self) -> bool {
        self.by_passage.is_empty()
    }

    /// Raw rows for a passage, unvalidated.
    pub fn raw(&self, passage_id: &str) -> impl Iterator<Item = &EntityMention> {
        self.by_passage.get(passage_id).into_iter().flatten().map(|(_, m)| m)
    }

    /// Validated mentions for `passage`, sorted by start, plus rejected rows.
    ///
    /// A row is rejected when its span is out of bounds or off a character
    /// boundary, when the slice differs from the recorded surface, or when it
    /// overlaps an earlier accepted row.
    pub fn mentions_for(&self, passage: &Passage) -> (Vec<EntityMention>, Vec<RowError>) {
        let mut accepted: Vec<EntityMention> = Vec::new();
        let mut errors = Vec::new();
        let rows = self.by_passage.get(&passage.id).map(Vec::as_slice).unwrap_or_default();
        for (row, m) in rows {
            let reject = |message: String| RowError { row: *row, message };
            match passage.slice(m.span) {
                None => errors.push(reject(format!(
                    "span {}..{} outside passage `{}` ({} bytes)",
                    m.span.0,
                    m.span.1,
                    passage.id,
                    passage.text.len()
                ))),
                Some(s) if s != m.surface => {
                    errors.push(reject(format!("surface `{}` does not match text `{s}`", m.surface)))
                }
                Some(_) if accepted.iter().any(|a| a.span.0 < m.span.1 && m.span.0 < a.span.1) => {
                    errors.push(reject("overlaps an earlier mention".to_owned()))
                }
                Some(_) => accepted.push(m.clone()),
            }
        }
        accepted.sort_by_key(|m| m.span);
        (accepted, errors)
    }
}

fn parse_row(line: &str) -> Result<EntityMention, String> {
    let fields: Vec<&str> = line.splitn(5, '\t').collect();
    if fields.len() != 5 {
        return Err(format!("expected 5 tab-separated fields, found {}", fields.len()));
    }
    let start: usize = fields[1].parse().map_err(|_| format!("bad start offset `{}`", fields[1]))?;
    let end: usize = fields[2].parse().map_err(|_| format!("bad end offset `{}`", fields[2]))?;
    if start >= end {
        return Err(format!("empty or inverted span {start}..{end}"));
    }
    let etype: EntityType = fields[3].parse().map_err(|e: super::types::UnknownEntityType| e.to_string())?;
    if fields[0].is_empty() {
        return Err("empty passage id".to_owned());
    }
    Ok(EntityMention {
        passage_id: fields[0].to_owned(),
        span: (start, end),
        surface: fields[4].to_owned(),
        etype,
    })
}
