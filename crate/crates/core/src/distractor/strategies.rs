use rand_chacha::ChaCha8Rng;

use super::{
    Attempt, AnswerPool, Distractor, DistractorFailure, DistractorOutcome, DistractorRequest, DistractorStrategy,
    DropReason, KgParams, KgResources, Origin, Provenance, StrategyContext,
};
use crate::entity::EntityMention;
use crate::kg::{ground, retrieve_subgraph, score_candidates};
use crate::qgen::QuestionType;
use crate::text::fold;

fn from_pool(pool: &AnswerPool, picked: Vec<usize>, provenance: Provenance) -> Vec<Distractor> {
    picked
        .into_iter()
        .map(|i| Distractor { surface: pool.entry(i).surface.clone(), provenance, origin: Origin::Pool(i) })
        .collect()
}

/// `n` answers of other passages, any entity type.
pub fn random_distractors(
    pool: &AnswerPool,
    gold: &EntityMention,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Distractor>, DropReason> {
    pool.sample(pool.all(), gold, n, rng)
        .map(|p| from_pool(pool, p, Provenance::Random))
        .ok_or(DropReason::PoolExhausted)
}

/// `n` answers of other passages with the gold entity type.
pub fn ne_distractors(
    pool: &AnswerPool,
    gold: &EntityMention,
    n: usize,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<Distractor>, DropReason> {
    pool.sample(pool.of_type(gold.etype), gold, n, rng)
        .map(|p| from_pool(pool, p, Provenance::Ne))
        .ok_or(DropReason::PoolExhausted)
}

/// Top-`n` graph neighbours of the grounded question and answer.
///
/// Seeds are the nodes grounded in `question + " " + gold`; candidates are
/// every node within `params.hops` of a seed whose term differs from the gold
/// answer. Candidates are ranked by cosine to the mean seed embedding and the
/// best `n` of the first `params.topk_pool` are returned, underscores shown as
/// spaces.
pub fn kg_distractors(
    question: &str,
    gold: &EntityMention,
    kg: KgResources<'_>,
    n: usize,
    params: KgParams,
) -> Result<Vec<Distractor>, DropReason> {
    let query = format!("{question} {}", gold.surface);
    let seeds = ground(&query, kg.index, params.max_ngram);
    if seeds.is_empty() {
        return Err(DropReason::GroundingFailed);
    }
    let gold_folded = fold(&gold.surface);
    let candidates = retrieve_subgraph(&seeds, kg.index, params.hops.max(1))
        .map_err(|_| DropReason::GroundingFailed)?
        .into_iter()
        .filter(|&node| fold(&kg.index.term(node).replace('_', " ")) != gold_folded);
    let query_terms: Vec<&str> = seeds.iter().map(|&s| kg.index.term(s)).collect();
    let scored = score_candidates(candidates, kg.index, &query_terms, kg.embeddings)
        .map_err(|_| DropReason::GroundingFailed)?;
    let ranked = &scored[..scored.len().min(params.topk_pool)];
    if ranked.len() < n {
        return Err(DropReason::SubgraphExhausted);
    }
    Ok(ranked[..n]
        .iter()
        .map(|c| Distractor {
            surface: c.term.replace('_', " "),
            provenance: Provenance::Kg,
            origin: Origin::Kg { node: c.node, score: c.score },
        })
        .collect())
}

/// HOW questions go to the graph, everything else to the typed pool. A graph
/// failure (or a missing graph) falls back to the typed pool.
pub fn hybrid_distractors(
    request: &DistractorRequest<'_>,
    ctx: &StrategyContext<'_>,
    rng: &mut ChaCha8Rng,
) -> Result<DistractorOutcome, DistractorFailure> {
    let mut attempts = Vec::with_capacity(2);
    if request.qtype == QuestionType::How {
        let kg_result = match ctx.kg {
            Some(kg) => kg_distractors(request.question, request.gold, kg, request.count, ctx.params),
            None => Err(DropReason::GroundingFailed),
        };
        match kg_result {
            Ok(distractors) => {
                attempts.push(Attempt { strategy: Provenance::Kg, failure: None });
                return Ok(DistractorOutcome { distractors, attempts });
            }
            Err(reason) => attempts.push(Attempt { strategy: Provenance::Kg, failure: Some(reason) }),
        }
    }
    match ne_distractors(ctx.pool, request.gold, request.count, rng) {
        Ok(distractors) => {
            attempts.push(Attempt { strategy: Provenance::Ne, failure: None });
            Ok(DistractorOutcome { distractors, attempts })
        }
        Err(reason) => {
            attempts.push(Attempt { strategy: Provenance::Ne, failure: Some(reason) });
            Err(DistractorFailure { reason, attempts })
        }
    }
}

fn single(strategy: Provenance, result: Result<Vec<Distractor>, DropReason>) -> Result<DistractorOutcome, DistractorFailure> {
    match result {
        Ok(distractors) => Ok(DistractorOutcome { distractors, attempts: vec![Attempt { strategy, failure: None }] }),
        Err(reason) => Err(DistractorFailure::single(strategy, reason)),
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RandomStrategy;

impl DistractorStrategy for RandomStrategy {
    fn name(&self) -> &'static str {
        "random"
    }

    fn generate(
        &self,
        request: &DistractorRequest<'_>,
        ctx: &StrategyContext<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<DistractorOutcome, DistractorFailure> {
        single(Provenance::Random, random_distractors(ctx.pool, request.gold, request.count, rng))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct NeStrategy;

impl DistractorStrategy for NeStrategy {
    fn name(&self) -> &'static str {
        "ne"
    }

    fn generate(
        &self,
        request: &DistractorRequest<'_>,
        ctx: &StrategyContext<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<DistractorOutcome, DistractorFailure> {
        single(Provenance::Ne, ne_distractors(ctx.pool, request.gold, request.count, rng))
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct KgStrategy;

impl DistractorStrategy for KgStrategy {
    fn name(&self) -> &'static str {
        "kg"
    }

    fn needs_kg(&self) -> bool {
        true
    }

    fn generate(
        &self,
        request: &DistractorRequest<'_>,
        ctx: &StrategyContext<'_>,
        _rng: &mut ChaCha8Rng,
    ) -> Result<DistractorOutcome, DistractorFailure> {
        let result = match ctx.kg {
            Some(kg) => kg_distractors(request.question, request.gold, kg, request.count, ctx.params),
            None => Err(DropReason::GroundingFailed),
        };
        single(Provenance::Kg, result)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct HybridStrategy;

impl DistractorStrategy for HybridStrategy {
    fn name(&self) -> &'static str {
        "kg-ne"
    }

    fn needs_kg(&self) -> bool {
        true
    }

    fn generate(
        &self,
        request: &DistractorRequest<'_>,
        ctx: &StrategyContext<'_>,
        rng: &mut ChaCha8Rng,
    ) -> Result<DistractorOutcome, DistractorFailure> {
        hybrid_distractors(request, ctx, rng)
    }
}
