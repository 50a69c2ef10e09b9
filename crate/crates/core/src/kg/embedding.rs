//! Static word vectors in the common text format.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::index::normalize_term;
use super::KgError;

/// Term → fixed-length vector. Terms are stored normalized like graph terms.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingTable {
    dim: usize,
    rows: HashMap<String, usize>,
    data: Vec<f32>,
}

impl EmbeddingTable {
    pub fn new(dim: usize) -> Self {
        assert!(dim > 0, "embedding dimension must be positive");
        Self { dim, rows: HashMap::new(), data: Vec::new() }
    }

    /// Builds a table from in-memory pairs; later duplicates are ignored.
    pub fn from_pairs<S: AsRef<str>>(dim: usize, pairs: &[(S, Vec<f32>)]) -> Result<Self, KgError> {
        let mut t = Self::new(dim);
        for (i, (term, v)) in pairs.iter().enumerate() {
            t.insert(term.as_ref(), v, i + 1)?;
        }
        Ok(t)
    }

    fn insert(&mut self, term: &str, v: &[f32], line: usize) -> Result<(), KgError> {
        if v.len() != self.dim {
            return Err(KgError::Embedding { line, message: format!("expected {} values, found {}", self.dim, v.len()) });
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(KgError::Embedding { line, message: "non-finite value".into() });
        }
        let term = normalize_term(term);
        if term.is_empty() || self.rows.contains_key(&term) {
            return Ok(());
        }
        self.rows.insert(term, self.data.len() / self.dim);
        self.data.extend_from_slice(v);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn get(&self, term: &str) -> Option<&[f32]> {
        self.rows.get(term).map(|&r| &self.data[r * self.dim..(r + 1) * self.dim])
    }

    /// Parses the text format: an optional `<count> <dim>` header, then one
    /// `term v1 ... vdim` line per term.
    pub fn parse<R: BufRead>(reader: R) -> Result<Self, KgError> {
        let mut table: Option<Self> = None;
        let mut declared_dim = None;
        let mut values = Vec::new();
        for (i, line) in reader.lines().enumerate() {
            let lineno = i + 1;
            let line = line.map_err(|e| KgError::Embedding { line: lineno, message: e.to_string() })?;
            let mut fields = line.split_whitespace();
            let Some(term) = fields.next() else { continue };
            values.clear();
            let mut bad = None;
            for f in fields {
                match f.parse::<f32>() {
                    Ok(v) => values.push(v),
                    Err(_) => bad = Some(f.to_owned()),
                }
            }
            if let Some(f) = bad {
                return Err(KgError::Embedding { line: lineno, message: format!("bad number `{f}`") });
            }
            if lineno == 1 && values.len() == 1 && term.parse::<u64>().is_ok() && line.split_whitespace().nth(1).is_some_and(|d| d.parse::<u64>().is_ok()) {
                let dim = values[0] as usize;
                if dim == 0 {
                    return Err(KgError::Embedding { line: 1, message: "zero dimension".into() });
                }
                declared_dim = Some(dim);
                continue;
            }
            let t = table.get_or_insert_with(|| Self::new(declared_dim.unwrap_or(values.len().max(1))));
            t.insert(term, &values, lineno)?;
        }
        Ok(table.unwrap_or_else(|| Self::new(declared_dim.unwrap_or(1))))
    }

    pub fn load(path: &Path) -> Result<Self, KgError> {
        let file = File::open(path).map_err(|e| KgError::io(path, e))?;
        Self::parse(BufReader::new(file))
    }
}
