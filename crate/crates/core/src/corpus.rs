//! Corpus ingestion and sentence segmentation.
//!
//! Passages carry byte-offset sentence spans so that every later annotation
//! (entity spans, clozes) indexes the original text directly.

use std::fs::File;
use std::io::{self, BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qgen::MASK_TOKEN;

/// Half-open byte range into a passage's text.
pub type Span = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Passage {
    pub id: String,
    pub text: String,
    pub sentence_spans: Vec<Span>,
}

impl Passage {
    /// Builds a passage and segments it.
    pub fn new(id: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        let sentence_spans = split_sentences(&text);
        Self { id: id.into(), text, sentence_spans }
    }

    pub fn slice(&self, span: Span) -> Option<&str> {
        self.text.get(span.0..span.1)
    }

    /// Index of the sentence fully containing `span`, if there is exactly one.
    pub fn sentence_containing(&self, span: Span) -> Option<usize> {
        self.sentence_spans
            .iter()
            .position(|&(s, e)| s <= span.0 && span.1 <= e)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum CorpusFormat {
    #[default]
    PlainLines,
    Jsonl,
}

impl FromStr for CorpusFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "plain-lines" | "plain" | "txt" => Ok(Self::PlainLines),
            "jsonl" => Ok(Self::Jsonl),
            other => Err(format!("unknown corpus format `{other}`")),
        }
    }
}

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read corpus {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("corpus is not valid UTF-8 at byte offset {offset}")]
    InvalidUtf8 { offset: u64 },
}

/// Records skipped during loading, by cause.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkipTally {
    pub missing_text: usize,
    pub malformed_json: usize,
    pub contains_mask: usize,
}

impl SkipTally {
    pub fn total(&self) -> usize {
        self.missing_text + self.malformed_json + self.contains_mask
    }
}

/// Streaming passage reader over a line-oriented source.
pub struct CorpusReader<R> {
    reader: R,
    format: CorpusFormat,
    line_no: usize,
    offset: u64,
    buf: Vec<u8>,
    skips: SkipTally,
    failed: bool,
}

impl<R: BufRead> CorpusReader<R> {
    pub fn new(reader: R, format: CorpusFormat) -> Self {
        Self {
            reader,
            format,
            line_no: 0,
            offset: 0,
            buf: Vec::new(),
            skips: SkipTally::default(),
            failed: false,
        }
    }

    pub fn skips(&self) -> &SkipTally {
        &self.skips
    }

    fn next_line(&mut self) -> Option<Result<(usize, String), CorpusError>> {
        self.buf.clear();
        let read = match self.reader.read_until(b'\n', &mut self.buf) {
            Ok(n) => n,
            Err(source) => {
                return Some(Err(CorpusError::Io { path: PathBuf::new(), source }));
            }
        };
        if read == 0 {
            return None;
        }
        let start = self.offset;
        self.offset += read as u64;
        let line_no = self.line_no;
        self.line_no += 1;

        let mut bytes = &self.buf[..];
        if bytes.last() == Some(&b'\n') {
            bytes = &bytes[..bytes.len() - 1];
        }
        if bytes.last() == Some(&b'\r') {
            bytes = &bytes[..bytes.len() - 1];
        }
        match std::str::from_utf8(bytes) {
            Ok(s) => Some(Ok((line_no, s.to_owned()))),
            Err(e) => Some(Err(CorpusError::InvalidUtf8 {
                offset: start + e.valid_up_to() as u64,
            })),
        }
    }

    fn parse_line(&mut self, line_no: usize, line: String) -> Option<Passage> {
        if line.trim().is_empty() {
            return None;
        }
        let (id, text) = match self.format {
            CorpusFormat::PlainLines => (line_no.to_string(), line),
            CorpusFormat::Jsonl => {
                let value: serde_json::Value = match serde_json::from_str(&line) {
                    Ok(v) => v,
                    Err(_) => {
                        self.skips.malformed_json += 1;
                        return None;
                    }
                };
                let Some(text) = value.get("text").and_then(|t| t.as_str()) else {
                    self.skips.missing_text += 1;
                    return None;
                };
                let id = match value.get("id") {
                    Some(serde_json::Value::String(s)) => s.clone(),
                    Some(serde_json::Value::Number(n)) => n.to_string(),
                    _ => line_no.to_string(),
                };
                (id, text.to_owned())
            }
        };
        if text.contains(MASK_TOKEN) {
            self.skips.contains_mask += 1;
            return None;
        }
        Some(Passage::new(id, text))
    }
}

impl<R: BufRead> Iterator for CorpusReader<R> {
    type Item = Result<Passage, CorpusError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.failed {
            return None;
        }
        loop {
            match self.next_line()? {
                Ok((line_no, line)) => {
                    if let Some(p) = self.parse_line(line_no, line) {
                        return Some(Ok(p));
                    }
                }
                Err(e) => {
                    self.failed = true;
                    return Some(Err(e));
                }
            }
        }
    }
}

/// Opens `path` as a passage stream.
pub fn load_corpus(path: &Path, format: CorpusFormat) -> Result<CorpusReader<BufReader<File>>, CorpusError> {
    let file = File::open(path).map_err(|source| CorpusError::Io { path: path.to_owned(), source })?;
    Ok(CorpusReader::new(BufReader::new(file), format))
}

/// Reads an entire corpus into memory, returning passages and skip counts.
pub fn read_all(path: &Path, format: CorpusFormat) -> Result<(Vec<Passage>, SkipTally), CorpusError> {
    let mut reader = load_corpus(path, format)?;
    let mut passages = Vec::new();
    for p in reader.by_ref() {
        passages.push(p.map_err(|e| match e {
            CorpusError::Io { source, .. } => CorpusError::Io { path: path.to_owned(), source },
            other => other,
        })?);
    }
    Ok((passages, reader.skips().clone()))
}

/// Rule-based sentence segmentation.
///
/// A sentence ends at `.`, `!` or `?` followed by whitespace or end of text.
/// A period directly after a lone uppercase letter ("J. Smith") never ends a
/// sentence. Spans exclude surrounding whitespace.
pub fn split_sentences(text: &str) -> Vec<Span> {
    let mut spans = Vec::new();
    let mut start: Option<usize> = None;
    let mut last_non_ws_end = 0;
    let mut chars = text.char_indices().peekable();
    // (previous char, char before that)
    let mut prev: Option<char> = None;
    let mut prev2: Option<char> = None;

    while let Some((i, c)) = chars.next() {
        if c.is_whitespace() {
            prev2 = prev;
            prev = Some(c);
            continue;
        }
        if start.is_none() {
            start = Some(i);
        }
        last_non_ws_end = i + c.len_utf8();

        if matches!(c, '.' | '!' | '?') {
            let boundary = chars.peek().is_none_or(|&(_, n)| n.is_whitespace());
            let initial = c == '.'
                && prev.is_some_and(|p| p.is_uppercase())
                && prev2.is_none_or(|p| !p.is_alphanumeric());
            if boundary && !initial {
                spans.push((start.take().unwrap(), last_non_ws_end));
            }
        }
        prev2 = prev;
        prev = Some(c);
    }
    if let Some(s) = start {
        spans.push((s, last_non_ws_end));
    }
    spans
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn texts(text: &str) -> Vec<&str> {
        split_sentences(text).iter().map(|&(s, e)| &text[s..e]).collect()
    }

    #[test]
    fn splits_on_terminators() {
        assert_eq!(texts("A b. C d."), vec!["A b.", "C d."]);
        assert_eq!(texts("Hello"), vec!["Hello"]);
        assert_eq!(texts("Really?! Yes."), vec!["Really?!", "Yes."]);
        assert!(split_sentences("   ").is_empty());
    }

    #[test]
    fn initials_do_not_split() {
        assert_eq!(texts("J. Smith ran. He won."), vec!["J. Smith ran.", "He won."]);
        // a capitalised word is not an initial
        assert_eq!(texts("He met US. Then left."), vec!["He met US.", "Then left."]);
    }

    #[test]
    fn decimal_points_do_not_split() {
        assert_eq!(texts("It costs 3.5 dollars. Fine."), vec!["It costs 3.5 dollars.", "Fine."]);
    }

    #[test]
    fn plain_lines_ids_track_line_numbers() {
        let r = CorpusReader::new("a.\n\nb.\n".as_bytes(), CorpusFormat::PlainLines);
        let ps: Vec<_> = r.map(|p| p.unwrap()).collect();
        assert_eq!(ps.len(), 2);
        assert_eq!(ps[0].id, "0");
        assert_eq!(ps[1].id, "2");
        assert_eq!(ps[1].text, "b.");
    }

    #[test]
    fn jsonl_maps_fields_and_tallies_skips() {
        let src = concat!(
            "{\"id\":\"p1\",\"text\":\"Alan Turing was born in London in 1912.\"}\n",
            "{\"id\":\"p2\"}\n",
            "not json\n",
            "{\"id\":\"p3\",\"text\":\"has [MASK] inside\"}\n",
        );
        let mut r = CorpusReader::new(src.as_bytes(), CorpusFormat::Jsonl);
        let ps: Vec<_> = r.by_ref().map(|p| p.unwrap()).collect();
        assert_eq!(ps.len(), 1);
        assert_eq!(ps[0].id, "p1");
        assert_eq!(ps[0].text, "Alan Turing was born in London in 1912.");
        assert_eq!(ps[0].sentence_spans, vec![(0, 39)]);
        assert_eq!(r.skips(), &SkipTally { missing_text: 1, malformed_json: 1, contains_mask: 1 });
    }

    #[test]
    fn invalid_utf8_reports_byte_offset() {
        let mut bytes = b"ok line\nab".to_vec();
        bytes.push(0xff);
        bytes.extend_from_slice(b"cd\n");
        let mut r = CorpusReader::new(&bytes[..], CorpusFormat::PlainLines);
        assert!(r.next().unwrap().is_ok());
        match r.next().unwrap() {
            Err(CorpusError::InvalidUtf8 { offset }) => assert_eq!(offset, 10),
            other => panic!("unexpected {other:?}"),
        }
        assert!(r.next().is_none());
    }

    #[test]
    fn loads_many_lines() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.txt");
        let body: String = (0..2000).map(|i| format!("Line {i}.\n")).collect();
        std::fs::write(&path, body).unwrap();
        let (ps, skips) = read_all(&path, CorpusFormat::PlainLines).unwrap();
        assert_eq!(ps.len(), 2000);
        assert_eq!(skips.total(), 0);
        assert_eq!(ps[1999].id, "1999");
    }

    proptest! {
        #[test]
        fn spans_partition_non_whitespace(text in "[A-Za-z .!?\n\t,é]{0,80}") {
            let spans = split_sentences(&text);
            let mut cursor = 0;
            for &(s, e) in &spans {
                prop_assert!(s < e && e <= text.len());
                prop_assert!(text.is_char_boundary(s) && text.is_char_boundary(e));
                prop_assert!(text[cursor..s].chars().all(char::is_whitespace));
                let sent = &text[s..e];
                prop_assert!(!sent.starts_with(char::is_whitespace));
                prop_assert!(!sent.ends_with(char::is_whitespace));
                cursor = e;
            }
            prop_assert!(text[cursor..].chars().all(char::is_whitespace));
        }

        #[test]
        fn loading_is_deterministic(lines in proptest::collection::vec("[a-z .]{0,20}", 0..20)) {
            let body = lines.join("\n");
            let a: Vec<_> = CorpusReader::new(body.as_bytes(), CorpusFormat::PlainLines).map(|p| p.unwrap()).collect();
            let b: Vec<_> = CorpusReader::new(body.as_bytes(), CorpusFormat::PlainLines).map(|p| p.unwrap()).collect();
            prop_assert_eq!(a, b);
        }
    }
}
