use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

use rand::seq::index::sample as sample_indices;
use rayon::prelude::*;

use super::report::{zero_qtype_counts, RunReport, SplitCounts};
use super::{McqaSample, PipelineConfig, PipelineError};
use crate::corpus::{read_all, Passage, SkipTally};
use crate::distractor::{
    assemble_candidates, AnswerPool, Attempt, CandidateSet, DistractorRequest, DistractorStrategy, DropReason,
    KgResources, Provenance, StrategyContext, StrategyRegistry,
};
use crate::entity::{Annotations, EntityExtractor, EntityMention, GazetteerSet, PatternSet};
use crate::kg::{build_index, EmbeddingTable, KnowledgeIndex};
use crate::qgen::{generate_question, question_type_of, QuestionType};
use crate::seed::{sample_seed, unit_hash, SeedKey};

pub const TRAIN_FILE: &str = "train.jsonl";
pub const DEV_FILE: &str = "dev.jsonl";
pub const REPORT_FILE: &str = "report.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Split {
    Train,
    Dev,
}

/// Where a passage's answers come from.
#[derive(Debug, Clone)]
pub enum MentionSource {
    Extractor(EntityExtractor),
    Annotations(Annotations),
}

/// Everything loaded before the corpus pass.
#[derive(Debug, Clone)]
pub struct Resources {
    pub mentions: MentionSource,
    pub kg: Option<(KnowledgeIndex, EmbeddingTable)>,
}

impl Resources {
    /// Loads gazetteers or annotations, and the graph when the strategy needs it.
    pub fn load(config: &PipelineConfig, strategy: &dyn DistractorStrategy) -> Result<Self, PipelineError> {
        let mentions = match &config.annotations {
            Some(path) => MentionSource::Annotations(Annotations::load(path).map_err(PipelineError::resource)?),
            None => {
                let gazetteers = match &config.gazetteers {
                    Some(dir) => GazetteerSet::load_dir(dir).map_err(PipelineError::resource)?,
                    None => GazetteerSet::new(),
                };
                let patterns = match &config.units {
                    Some(units) => PatternSet::new(units),
                    None => PatternSet::default(),
                };
                MentionSource::Extractor(EntityExtractor::new(&gazetteers, patterns).map_err(PipelineError::resource)?)
            }
        };
        let kg = if strategy.needs_kg() {
            let index = match (&config.kg_index, &config.kg_assertions) {
                (Some(path), _) => KnowledgeIndex::load(path).map_err(PipelineError::resource)?,
                (None, Some(path)) => build_index(path, &config.kg_language).map_err(PipelineError::resource)?.0,
                (None, None) => return Err(PipelineError::Config("strategy needs a knowledge graph".into())),
            };
            let emb_path = config
                .embeddings
                .as_ref()
                .ok_or_else(|| PipelineError::Config("strategy needs embeddings".into()))?;
            let emb = EmbeddingTable::load(emb_path).map_err(PipelineError::resource)?;
            Some((index, emb))
        } else {
            None
        };
        Ok(Self { mentions, kg })
    }
}

/// One attempted question and what became of it.
#[derive(Debug, Clone)]
pub struct SampleOutcome {
    pub gold: EntityMention,
    pub qtype: QuestionType,
    pub attempts: Vec<Attempt>,
    pub result: Result<(McqaSample, CandidateSet), DropReason>,
}

#[derive(Debug, Clone)]
pub struct PassageOutcome {
    pub passage_id: String,
    pub split: Split,
    pub samples: Vec<SampleOutcome>,
}

/// In-memory result of a run.
#[derive(Debug, Clone)]
pub struct Generation {
    pub passages: Vec<PassageOutcome>,
    pub pool: AnswerPool,
    pub report: RunReport,
}

impl Generation {
    pub fn emitted(&self) -> impl Iterator<Item = (&SampleOutcome, &McqaSample, &CandidateSet)> {
        self.passages
            .iter()
            .flat_map(|p| &p.samples)
            .filter_map(|s| s.result.as_ref().ok().map(|(m, c)| (s, m, c)))
    }

    /// Writes `train.jsonl`, `dev.jsonl` and `report.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<(), PipelineError> {
        fs::create_dir_all(dir).map_err(|e| PipelineError::io(dir, e))?;
        let open = |name: &str| {
            let path = dir.join(name);
            File::create(&path).map(BufWriter::new).map_err(|e| PipelineError::io(&path, e))
        };
        let mut train = open(TRAIN_FILE)?;
        let mut dev = open(DEV_FILE)?;
        for p in &self.passages {
            let w = match p.split {
                Split::Train => &mut train,
                Split::Dev => &mut dev,
            };
            for s in &p.samples {
                if let Ok((rec, _)) = &s.result {
                    writeln!(w, "{}", rec.to_json_line()).map_err(|e| PipelineError::io(dir, e))?;
                }
            }
        }
        train.flush().map_err(|e| PipelineError::io(dir, e))?;
        dev.flush().map_err(|e| PipelineError::io(dir, e))?;
        let report = serde_json::to_string_pretty(&self.report).expect("report serializes");
        let path = dir.join(REPORT_FILE);
        fs::write(&path, report + "\n").map_err(|e| PipelineError::io(&path, e))
    }
}

/// Loads the corpus and resources named by `config`, then runs [`generate`].
pub fn generate_dataset(config: &PipelineConfig, registry: &StrategyRegistry) -> Result<Generation, PipelineError> {
    config.validate(registry)?;
    let strategy = registry.get(&config.strategy).expect("validated");
    let resources = Resources::load(config, strategy.as_ref())?;
    let (passages, skips) = read_all(&config.corpus, config.corpus_format).map_err(PipelineError::corpus)?;
    generate(config, strategy, &resources, &passages, skips)
}

/// Runs both stages over in-memory passages.
pub fn generate(
    config: &PipelineConfig,
    strategy: Arc<dyn DistractorStrategy>,
    resources: &Resources,
    passages: &[Passage],
    corpus_skips: SkipTally,
) -> Result<Generation, PipelineError> {
    let started = Instant::now();
    if strategy.needs_kg() && resources.kg.is_none() {
        return Err(PipelineError::Config(format!("strategy `{}` needs a knowledge graph", strategy.name())));
    }

    // stage 1: answers, capped per passage by a seeded sample
    let extracted: Vec<(Vec<EntityMention>, Vec<EntityMention>, usize)> = passages
        .par_iter()
        .map(|p| {
            let (all, errors) = match &resources.mentions {
                MentionSource::Extractor(x) => (x.extract(p), 0),
                MentionSource::Annotations(a) => {
                    let (ok, errs) = a.mentions_for(p);
                    (ok, errs.len())
                }
            };
            let selected = select_mentions(&all, config.max_questions_per_passage, config.master_seed, &p.id);
            (all, selected, errors)
        })
        .collect();
    let annotation_errors = match &resources.mentions {
        MentionSource::Annotations(a) => a.rejected().len() + extracted.iter().map(|e| e.2).sum::<usize>(),
        MentionSource::Extractor(_) => 0,
    };
    let pool = AnswerPool::new(extracted.iter().flat_map(|(_, sel, _)| sel));

    let dev = dev_membership(passages, config.dev_fraction);
    let ctx = StrategyContext {
        pool: &pool,
        kg: resources.kg.as_ref().map(|(index, embeddings)| KgResources { index, embeddings }),
        params: config.kg_params(),
    };

    // stage 2: questions and candidate sets
    let outcomes: Vec<PassageOutcome> = passages
        .par_iter()
        .zip(extracted.par_iter())
        .zip(dev.par_iter())
        .map(|((p, (all, selected, _)), &is_dev)| PassageOutcome {
            passage_id: p.id.clone(),
            split: if is_dev { Split::Dev } else { Split::Train },
            samples: selected
                .iter()
                .map(|m| make_sample(config, strategy.as_ref(), &ctx, p, m, all))
                .collect(),
        })
        .collect();

    let report = build_report(config, strategy.name(), passages.len(), corpus_skips, annotation_errors, &outcomes, started);
    Ok(Generation { passages: outcomes, pool, report })
}

fn select_mentions(all: &[EntityMention], cap: usize, master: u64, passage_id: &str) -> Vec<EntityMention> {
    if all.len() <= cap {
        return all.to_vec();
    }
    let mut rng = SeedKey::new(master).str("select").str(passage_id).rng();
    let mut picked: Vec<usize> = sample_indices(&mut rng, all.len(), cap).into_vec();
    picked.sort_unstable();
    picked.into_iter().map(|i| all[i].clone()).collect()
}

/// Dev passages are the `round(fraction * n)` passages with the smallest id
/// hash. Membership depends only on ids, never on corpus order.
pub fn dev_membership(passages: &[Passage], fraction: f64) -> Vec<bool> {
    let n = passages.len();
    let want = ((fraction * n as f64).round() as usize).min(n);
    let mut order: Vec<(f64, &str, usize)> =
        passages.iter().enumerate().map(|(i, p)| (unit_hash(&p.id), p.id.as_str(), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.cmp(b.1)));
    let mut dev = vec![false; n];
    for &(_, _, i) in &order[..want] {
        dev[i] = true;
    }
    dev
}

fn make_sample(
    config: &PipelineConfig,
    strategy: &dyn DistractorStrategy,
    ctx: &StrategyContext<'_>,
    passage: &Passage,
    gold: &EntityMention,
    all: &[EntityMention],
) -> SampleOutcome {
    let qtype = question_type_of(gold.etype);
    let drop = |reason, attempts| SampleOutcome { gold: gold.clone(), qtype, attempts, result: Err(reason) };

    let question = match generate_question(passage, gold, config.realization, all) {
        Ok(q) => q,
        Err(_) => return drop(DropReason::ClozeInvalid, Vec::new()),
    };
    let seed = sample_seed(config.master_seed, &passage.id, gold.span);
    let mut rng = SeedKey::new(seed).str("distractors").rng();
    let request = DistractorRequest {
        question: &question.question,
        qtype,
        gold,
        count: config.candidate_size - 1,
    };
    let outcome = match strategy.generate(&request, ctx, &mut rng) {
        Ok(o) => o,
        Err(f) => return drop(f.reason, f.attempts),
    };
    let mut rng = SeedKey::new(seed).str("shuffle").rng();
    let set = match assemble_candidates(&gold.surface, outcome.distractors, config.candidate_size, &mut rng) {
        Ok(s) => s,
        Err(_) => return drop(DropReason::InvalidCandidates, outcome.attempts),
    };
    let record = McqaSample {
        id: format!("{}:{}-{}", passage.id, gold.span.0, gold.span.1),
        passage_id: passage.id.clone(),
        context: passage.text.clone(),
        question: question.question,
        qtype,
        choices: set.choices.clone(),
        answer_index: set.answer_index,
        strategy: strategy.name().to_owned(),
        provenance: set.provenance.clone(),
        drop_reason: None,
    };
    SampleOutcome { gold: gold.clone(), qtype, attempts: outcome.attempts, result: Ok((record, set)) }
}

fn build_report(
    config: &PipelineConfig,
    strategy: &str,
    passages: usize,
    corpus_skips: SkipTally,
    annotation_errors: usize,
    outcomes: &[PassageOutcome],
    started: Instant,
) -> RunReport {
    let mut per_qtype = zero_qtype_counts();
    let mut drops: BTreeMap<DropReason, usize> = BTreeMap::new();
    let mut drops_per_qtype: BTreeMap<QuestionType, BTreeMap<DropReason, usize>> = BTreeMap::new();
    let mut provenance: BTreeMap<String, usize> = BTreeMap::new();
    let mut split = SplitCounts { dev_fraction: config.dev_fraction, ..Default::default() };
    let mut attempted = 0;
    let mut kg_fallbacks = 0;
    for p in outcomes {
        match p.split {
            Split::Train => split.train_passages += 1,
            Split::Dev => split.dev_passages += 1,
        }
        for s in &p.samples {
            attempted += 1;
            let fell_back = s
                .attempts
                .iter()
                .any(|a| a.strategy == Provenance::Kg && a.failure.is_some())
                && s.attempts.iter().any(|a| a.strategy == Provenance::Ne);
            if fell_back {
                kg_fallbacks += 1;
            }
            match &s.result {
                Ok((rec, _)) => {
                    *per_qtype.entry(s.qtype).or_default() += 1;
                    for prov in &rec.provenance {
                        *provenance.entry(prov.as_str().to_owned()).or_default() += 1;
                    }
                    match p.split {
                        Split::Train => split.train_samples += 1,
                        Split::Dev => split.dev_samples += 1,
                    }
                }
                Err(reason) => {
                    *drops.entry(*reason).or_default() += 1;
                    *drops_per_qtype.entry(s.qtype).or_default().entry(*reason).or_default() += 1;
                }
            }
        }
    }
    let emitted = per_qtype.values().sum();
    let dropped = drops.values().sum();
    RunReport {
        strategy: strategy.to_owned(),
        passages,
        corpus_skips,
        annotation_errors,
        attempted,
        emitted,
        dropped,
        per_qtype,
        drops,
        drops_per_qtype,
        provenance,
        kg_fallbacks,
        split,
        config: config.clone(),
        wall_time_secs: started.elapsed().as_secs_f64(),
    }
}
