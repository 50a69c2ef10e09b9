//! Lowercase alphanumeric tokenization shared by grounding and the overlap baseline.

/// Splits on every non-alphanumeric character and lowercases the pieces.
pub fn tokenize_lower(text: &str) -> Vec<String> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(|t| t.to_lowercase())
        .collect()
}

/// Case-folded form used for every distinctness comparison between surfaces.
pub fn fold(s: &str) -> String {
    s.trim().to_lowercase()
}
