//! Synthetic fixtures shared by the integration suites.

#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FIRST: &[&str] = &[
    "Alan", "Ada", "Grace", "Alonzo", "Kurt", "John", "Emmy", "Marie", "Niels", "Lise", "Paul", "Rosalind", "Srinivasa",
    "Sofia", "Carl", "Hedy", "Edsger", "Barbara", "Donald", "Frances",
];
pub const LAST: &[&str] = &[
    "Turing", "Lovelace", "Hopper", "Church", "Godel", "Neumann", "Noether", "Curie", "Bohr", "Meitner", "Dirac",
    "Franklin", "Ramanujan", "Kovalevskaya", "Gauss", "Lamarr", "Dijkstra", "Liskov", "Knuth", "Allen",
];
pub const PLACES: &[&str] = &[
    "London", "Paris", "Vienna", "Berlin", "Princeton", "Rome", "Madrid", "Lisbon", "Oslo", "Warsaw", "Prague",
    "Dublin", "Zurich", "Athens", "Cairo", "Kyoto", "Lima", "Quito", "Nairobi", "Toronto",
];
pub const ORGS: &[&str] = &[
    "Bell Labs", "Acme Corporation", "Royal Society", "Institute for Advanced Study", "Hooli", "Initech",
    "Globex", "Umbrella Research", "Stark Industries", "Wayne Foundation",
];
pub const LOCS: &[&str] = &["the Alps", "the Nile", "Lake Geneva", "the Sahara", "the Andes", "Mount Kenya"];
pub const NORPS: &[&str] = &["Danish", "Polish", "Peruvian", "Kenyan", "Greek", "Swiss"];
pub const MONTHS: &[&str] = &["January", "March", "May", "July", "September", "November"];
pub const UNITS: &[&str] = &["km", "kg", "miles", "tonnes", "litres", "acres"];
/// Units deliberately left out of the toy graph.
pub const UNGROUNDED_UNITS: &[&str] = &["inches", "ounces"];

pub fn person(rng: &mut ChaCha8Rng) -> String {
    format!("{} {}", FIRST.choose(rng).unwrap(), LAST.choose(rng).unwrap())
}

fn pick<'a>(rng: &mut ChaCha8Rng, xs: &[&'a str]) -> &'a str {
    xs.choose(rng).unwrap()
}

/// One synthetic sentence; `how_ratio` biases toward quantity sentences.
pub fn sentence(rng: &mut ChaCha8Rng, how_ratio: f64) -> String {
    if rng.gen_bool(how_ratio) {
        let unit = if rng.gen_bool(0.25) { pick(rng, UNGROUNDED_UNITS) } else { pick(rng, UNITS) };
        let n = rng.gen_range(2..900);
        return match rng.gen_range(0..3) {
            0 => format!("The {} expedition covered {n} {unit} near {}.", pick(rng, NORPS), pick(rng, LOCS)),
            1 => format!("{} shipped {n} {unit} to {}.", pick(rng, ORGS), pick(rng, PLACES)),
            _ => format!("Records show {n} {unit} were measured."),
        };
    }
    let year = rng.gen_range(1850..2020);
    match rng.gen_range(0..6) {
        0 => format!("{} was born in {} in {year}.", person(rng), pick(rng, PLACES)),
        1 => format!("{} joined {} on {} {}, {year}.", person(rng), pick(rng, ORGS), pick(rng, MONTHS), rng.gen_range(1..29)),
        2 => format!("{} lectured in {} during {year}.", person(rng), pick(rng, PLACES)),
        3 => format!("{} raised ${} million for {}.", pick(rng, ORGS), rng.gen_range(2..500), pick(rng, PLACES)),
        4 => format!("About {}% of {} residents live near {}.", rng.gen_range(2..99), pick(rng, NORPS), pick(rng, LOCS)),
        _ => format!("{} met {} at {}.", person(rng), person(rng), pick(rng, ORGS)),
    }
}

/// `n` passages of one to three sentences, one per line.
pub fn corpus_lines(n: usize, seed: u64, how_ratio: f64) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let k = rng.gen_range(1..=3);
            (0..k).map(|_| sentence(&mut rng, how_ratio)).collect::<Vec<_>>().join(" ")
        })
        .collect()
}

pub fn write_lines(path: &Path, lines: &[String]) {
    let mut w = BufWriter::new(File::create(path).unwrap());
    for l in lines {
        writeln!(w, "{l}").unwrap();
    }
    w.flush().unwrap();
}

pub fn write_gazetteers(dir: &Path) -> PathBuf {
    let g = dir.join("gazetteers");
    fs::create_dir_all(&g).unwrap();
    let people: Vec<String> = FIRST.iter().flat_map(|f| LAST.iter().map(move |l| format!("{f} {l}"))).collect();
    fs::write(g.join("PERSON.txt"), people.join("\n")).unwrap();
    fs::write(g.join("GPE.txt"), PLACES.join("\n")).unwrap();
    fs::write(g.join("ORG.txt"), ORGS.join("\n")).unwrap();
    fs::write(g.join("LOC.txt"), LOCS.join("\n")).unwrap();
    fs::write(g.join("NORP.txt"), NORPS.join("\n")).unwrap();
    g
}

/// Unit graph: each unit linked to related measurement concepts.
pub const UNIT_EDGES: &[(&str, &str, &str)] = &[
    ("km", "RelatedTo", "mile"),
    ("km", "RelatedTo", "meter"),
    ("km", "IsA", "unit_of_length"),
    ("mile", "IsA", "unit_of_length"),
    ("meter", "IsA", "unit_of_length"),
    ("unit_of_length", "RelatedTo", "yard"),
    ("unit_of_length", "RelatedTo", "furlong"),
    ("miles", "RelatedTo", "mile"),
    ("kg", "RelatedTo", "gram"),
    ("kg", "RelatedTo", "pound"),
    ("kg", "IsA", "unit_of_mass"),
    ("gram", "IsA", "unit_of_mass"),
    ("pound", "IsA", "unit_of_mass"),
    ("unit_of_mass", "RelatedTo", "stone"),
    ("tonnes", "RelatedTo", "tonne"),
    ("tonne", "IsA", "unit_of_mass"),
    ("litres", "RelatedTo", "litre"),
    ("litre", "IsA", "unit_of_volume"),
    ("unit_of_volume", "RelatedTo", "gallon"),
    ("unit_of_volume", "RelatedTo", "pint"),
    ("unit_of_volume", "RelatedTo", "cup"),
    ("acres", "RelatedTo", "acre"),
    ("acre", "IsA", "unit_of_area"),
    ("unit_of_area", "RelatedTo", "hectare"),
    ("unit_of_area", "RelatedTo", "square_mile"),
    ("hectare", "RelatedTo", "centiare"),
];

pub fn assertion_line(i: usize, rel: &str, start: &str, end: &str, weight: f64) -> String {
    format!("/a/{i}\t/r/{rel}\t/c/en/{start}\t/c/en/{end}\t{{\"weight\": {weight}}}")
}

pub fn write_assertions(path: &Path, edges: &[(&str, &str, &str)]) {
    let lines: Vec<String> = edges.iter().enumerate().map(|(i, (a, r, b))| assertion_line(i, r, a, b, 1.0)).collect();
    write_lines(path, &lines);
}

/// Seeded random vectors for every term named in `edges`.
pub fn write_embeddings(path: &Path, edges: &[(&str, &str, &str)], dim: usize, seed: u64) {
    let mut terms: Vec<&str> = edges.iter().flat_map(|(a, _, b)| [*a, *b]).collect();
    terms.sort_unstable();
    terms.dedup();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut body = format!("{} {dim}\n", terms.len());
    for t in terms {
        body.push_str(t);
        for _ in 0..dim {
            write!(body, " {:.6}", rng.gen_range(-1.0f32..1.0)).unwrap();
        }
        body.push('\n');
    }
    fs::write(path, body).unwrap();
}

/// Writes a corpus, gazetteers, unit graph, embeddings and a run config; returns the config path.
pub fn write_fixture(dir: &Path, passages: usize, seed: u64, how_ratio: f64, strategy: &str) -> PathBuf {
    write_lines(&dir.join("corpus.txt"), &corpus_lines(passages, seed, how_ratio));
    write_gazetteers(dir);
    write_assertions(&dir.join("assertions.csv"), UNIT_EDGES);
    write_embeddings(&dir.join("embeddings.txt"), UNIT_EDGES, 16, seed ^ 0x5eed);
    let config = dir.join("run.json");
    let body = serde_json::json!({
        "strategy": strategy,
        "corpus": "corpus.txt",
        "gazetteers": "gazetteers",
        "kg_assertions": "assertions.csv",
        "embeddings": "embeddings.txt",
        "master_seed": seed,
        "dev_fraction": 0.1,
    });
    fs::write(&config, body.to_string()).unwrap();
    config
}
