//! Regular patterns for the numeric entity types.

use regex::Regex;

use super::EntityType;
use super::Candidate;

const NUMBER: &str = r"(?:\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+(?:\.\d+)?)";
const MONTH: &str = concat!(
    r"(?:(?:January|February|March|April|May|June|July|August|September|October|November|December)\b",
    r"|Jan\.|Feb\.|Mar\.|Apr\.|Jun\.|Jul\.|Aug\.|Sept\.|Sep\.|Oct\.|Nov\.|Dec\.)"
);

/// Unit words recognised after a number when no lexicon is configured.
pub const DEFAULT_UNITS: &[&str] = &[
    "kilometres", "kilometers", "kilometre", "kilometer", "km",
    "metres", "meters", "metre", "meter", "m",
    "centimetres", "centimeters", "cm", "millimetres", "millimeters", "mm",
    "miles", "mile", "feet", "foot", "ft", "inches", "inch", "yards", "yard",
    "kilograms", "kilogram", "kg", "grams", "gram", "g", "tonnes", "tonne", "tons", "ton",
    "lb", "lbs", "ounces", "ounce", "oz",
    "litres", "liters", "litre", "liter", "gallons", "gallon",
    "acres", "acre", "hectares", "hectare",
    "square kilometres", "square kilometers", "square miles", "square metres", "square meters",
];

/// Compiled extractors, each tagged with its type.
#[derive(Debug, Clone)]
pub struct PatternSet {
    rules: Vec<(EntityType, Regex)>,
}

impl PatternSet {
    /// Builds the extractors with the given QUANTITY unit lexicon.
    pub fn new<S: AsRef<str>>(units: &[S]) -> Self {
        let mut rules = Vec::new();
        let mut add = |t: EntityType, re: String| rules.push((t, Regex::new(&re).expect("static pattern")));

        add(
            EntityType::Date,
            format!(r"\b(?:\d{{1,2}}(?:st|nd|rd|th)?\s+)?{MONTH}(?:\s+\d{{1,2}}(?:st|nd|rd|th)?\b)?(?:,?\s+\d{{4}}\b)?"),
        );
        add(EntityType::Date, r"\b\d{4}-\d{2}-\d{2}\b".to_owned());
        add(EntityType::Date, r"\b1[0-9]{3}s?\b|\b20[0-9]{2}s?\b".to_owned());

        add(
            EntityType::Time,
            r"\b\d{1,2}:\d{2}(?::\d{2})?(?:\s?(?:[ap]\.m\.|[AaPp][Mm]\b))?".to_owned(),
        );
        add(EntityType::Time, r"\b\d{1,2}\s?(?:[ap]\.m\.|[AaPp][Mm]\b)".to_owned());
        add(EntityType::Time, r"\b(?:noon|midnight)\b".to_owned());

        add(EntityType::Percent, format!(r"\b{NUMBER}\s?(?:%|percent\b|per cent\b)"));

        add(
            EntityType::Money,
            format!(r"[$€£¥]\s?{NUMBER}(?:\s?(?:million|billion|trillion|thousand)\b)?"),
        );
        add(
            EntityType::Money,
            format!(r"\b{NUMBER}\s?(?:(?:million|billion|trillion|thousand)\s)?(?:dollars|euros|pounds|yen|USD|EUR|GBP)\b"),
        );

        let mut units: Vec<String> = units
            .iter()
            .map(|u| u.as_ref().trim())
            .filter(|u| !u.is_empty())
            .map(|u| regex::escape(u).replace(' ', r"\s+"))
            .collect();
        // longest alternative first so "km" does not shadow "kilometres"
        units.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        units.dedup();
        if !units.is_empty() {
            add(EntityType::Quantity, format!(r"\b{NUMBER}\s?(?:{})\b", units.join("|")));
        }

        Self { rules }
    }

    pub(super) fn candidates(&self, text: &str, out: &mut Vec<Candidate>) {
        for (etype, re) in &self.rules {
            for m in re.find_iter(text) {
                out.push(Candidate { start: m.start(), end: m.end(), etype: *etype });
            }
        }
    }
}

impl Default for PatternSet {
    fn default() -> Self {
        Self::new(DEFAULT_UNITS)
    }
}
