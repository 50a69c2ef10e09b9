//! Cloze construction and template question realization.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Passage;
use crate::entity::{EntityMention, EntityType};

/// Literal placeholder for the masked answer.
pub const MASK_TOKEN: &str = "[MASK]";

/// Words dropped together with the mask when fronting, so that
/// "born in [MASK] in 1912" becomes "Where ... born in 1912?".
const FRONTED_PREPOSITIONS: &[&str] = &[
    "in", "at", "on", "from", "to", "by", "during", "since", "near", "into", "of", "for", "about", "around",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum QuestionType {
    Who,
    Where,
    What,
    When,
    How,
}

impl QuestionType {
    pub const ALL: [QuestionType; 5] =
        [QuestionType::Who, QuestionType::Where, QuestionType::What, QuestionType::When, QuestionType::How];

    pub fn as_str(self) -> &'static str {
        match self {
            QuestionType::Who => "WHO",
            QuestionType::Where => "WHERE",
            QuestionType::What => "WHAT",
            QuestionType::When => "WHEN",
            QuestionType::How => "HOW",
        }
    }

    pub fn wh_word(self) -> &'static str {
        match self {
            QuestionType::Who => "who",
            QuestionType::Where => "where",
            QuestionType::What => "what",
            QuestionType::When => "when",
            QuestionType::How => "how",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for QuestionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for QuestionType {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|q| q.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown question type `{s}`"))
    }
}

/// Total mapping from answer type to wh-type.
pub fn question_type_of(etype: EntityType) -> QuestionType {
    use EntityType::*;
    match etype {
        Person | Norp => QuestionType::Who,
        Gpe | Loc | Fac => QuestionType::Where,
        Date | Time => QuestionType::When,
        Percent | Money | Quantity => QuestionType::How,
        Org | Product | Event | WorkOfArt | Law | Language => QuestionType::What,
    }
}

/// How a cloze becomes a question.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Realization {
    /// Wh-word in place of the mask.
    Replace,
    /// Wh-word moved to the front of the sentence.
    #[default]
    Front,
}

impl FromStr for Realization {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "replace" => Ok(Self::Replace),
            "front" => Ok(Self::Front),
            other => Err(format!("unknown realization mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QgenError {
    #[error("mention {start}..{end} is not inside a single sentence of passage `{passage_id}`")]
    CrossesSentence { passage_id: String, start: usize, end: usize },
    #[error("cloze must contain exactly one {MASK_TOKEN}, found {0}")]
    MaskCount(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratedQuestion {
    pub passage_id: String,
    pub answer: EntityMention,
    pub cloze: String,
    pub question: String,
    pub qtype: QuestionType,
}

/// The sentence containing `mention`, with the mention replaced by [`MASK_TOKEN`].
pub fn make_cloze(passage: &Passage, mention: &EntityMention) -> Result<String, QgenError> {
    let crosses = || QgenError::CrossesSentence {
        passage_id: passage.id.clone(),
        start: mention.span.0,
        end: mention.span.1,
    };
    let idx = passage.sentence_containing(mention.span).ok_or_else(crosses)?;
    let (s, e) = passage.sentence_spans[idx];
    let text = &passage.text;
    let (a, b) = mention.span;
    if !text.is_char_boundary(a) || !text.is_char_boundary(b) {
        return Err(crosses());
    }
    let mut cloze = String::with_capacity(e - s + MASK_TOKEN.len());
    cloze.push_str(&text[s..a]);
    cloze.push_str(MASK_TOKEN);
    cloze.push_str(&text[b..e]);
    Ok(cloze)
}

/// Turns a cloze into a question ending in exactly one `?`.
///
/// `keep_initial_case` preserves the capital of the cloze's first word in
/// front mode; callers set it when the sentence opens with a proper noun.
pub fn realize_question(
    cloze: &str,
    qtype: QuestionType,
    mode: Realization,
    keep_initial_case: bool,
) -> Result<String, QgenError> {
    let count = cloze.matches(MASK_TOKEN).count();
    if count != 1 {
        return Err(QgenError::MaskCount(count));
    }
    let at = cloze.find(MASK_TOKEN).unwrap();
    let before = &cloze[..at];
    let after = &cloze[at + MASK_TOKEN.len()..];

    let body = match mode {
        Realization::Replace => format!("{before}{}{after}", qtype.wh_word()),
        Realization::Front => {
            let before = strip_trailing_preposition(before);
            let joined = collapse_spaces(&format!("{before} {after}"));
            let rest = joined.trim();
            let rest = if keep_initial_case { rest.to_owned() } else { lowercase_first(rest) };
            let wh = capitalize(qtype.wh_word());
            if rest.is_empty() || rest.starts_with(|c: char| c.is_ascii_punctuation()) {
                format!("{wh}{rest}")
            } else {
                format!("{wh} {rest}")
            }
        }
    };
    let body = body.trim_end_matches(|c: char| c.is_whitespace() || matches!(c, '.' | '!' | '?'));
    Ok(format!("{body}?"))
}

/// Builds the full question record for `mention`.
pub fn generate_question(
    passage: &Passage,
    mention: &EntityMention,
    mode: Realization,
    others: &[EntityMention],
) -> Result<GeneratedQuestion, QgenError> {
    let cloze = make_cloze(passage, mention)?;
    let qtype = question_type_of(mention.etype);
    let sentence_start = passage.sentence_spans[passage.sentence_containing(mention.span).unwrap()].0;
    let keep = others.iter().any(|m| {
        m.span != mention.span && m.span.0 == sentence_start && !m.etype.is_pattern_type()
    });
    let question = realize_question(&cloze, qtype, mode, keep)?;
    Ok(GeneratedQuestion {
        passage_id: passage.id.clone(),
        answer: mention.clone(),
        cloze,
        question,
        qtype,
    })
}

fn strip_trailing_preposition(before: &str) -> &str {
    let trimmed = before.trim_end();
    let word_start = trimmed
        .char_indices()
        .rfind(|(_, c)| c.is_whitespace())
        .map_or(0, |(i, c)| i + c.len_utf8());
    let last = &trimmed[word_start..];
    if FRONTED_PREPOSITIONS.iter().any(|p| p.eq_ignore_ascii_case(last)) {
        &trimmed[..word_start]
    } else {
        before
    }
}

fn collapse_spaces(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    let mut prev_space = false;
    for c in s.chars() {
        if c == ' ' {
            if !prev_space {
                out.push(c);
            }
            prev_space = true;
        } else {
            out.push(c);
            prev_space = false;
        }
    }
    // "born ," -> "born,"
    out.replace(" ,", ",").replace(" .", ".")
}

fn lowercase_first(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_lowercase().chain(chars).collect(),
        None => String::new(),
    }
}

fn capitalize(s: &str) -> String {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}
