use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::entity::{EntityMention, EntityType};
use crate::text::fold;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PoolEntry {
    pub surface: String,
    pub etype: EntityType,
    pub passage_id: String,
    folded: String,
}

/// Every answer of the corpus pass, with a per-type index.
#[derive(Debug, Clone, Default)]
pub struct AnswerPool {
    entries: Vec<PoolEntry>,
    all: Vec<usize>,
    by_type: [Vec<usize>; 16],
}

impl AnswerPool {
    pub fn new<'a>(mentions: impl IntoIterator<Item = &'a EntityMention>) -> Self {
        let mut pool = Self::default();
        for m in mentions {
            pool.push(&m.surface, m.etype, &m.passage_id);
        }
        pool
    }

    pub fn push(&mut self, surface: &str, etype: EntityType, passage_id: &str) {
        let i = self.entries.len();
        self.entries.push(PoolEntry {
            surface: surface.to_owned(),
            etype,
            passage_id: passage_id.to_owned(),
            folded: fold(surface),
        });
        self.all.push(i);
        self.by_type[etype.index()].push(i);
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entry(&self, i: usize) -> &PoolEntry {
        &self.entries[i]
    }

    pub fn entries(&self) -> &[PoolEntry] {
        &self.entries
    }

    pub fn of_type(&self, etype: EntityType) -> &[usize] {
        &self.by_type[etype.index()]
    }

    /// Indices of every entry.
    pub fn all(&self) -> &[usize] {
        &self.all
    }

    /// Draws `n` entries from `candidates` with pairwise distinct surfaces, none
    /// from the gold passage and none equal to the gold surface.
    ///
    /// Entries are drawn uniformly without replacement, skipping surfaces
    /// already taken. Returns `None` when fewer than `n` eligible surfaces exist.
    pub fn sample(&self, candidates: &[usize], gold: &EntityMention, n: usize, rng: &mut ChaCha8Rng) -> Option<Vec<usize>> {
        if n == 0 {
            return Some(Vec::new());
        }
        if candidates.is_empty() {
            return None;
        }
        let gold_folded = fold(&gold.surface);
        let eligible = |i: usize| {
            let e = &self.entries[i];
            e.passage_id != gold.passage_id && e.folded != gold_folded
        };
        let mut chosen = Vec::with_capacity(n);
        let mut taken: HashSet<&str> = HashSet::with_capacity(n);

        // cheap rejection phase for large pools
        let budget = 16 * n + 64;
        for _ in 0..budget {
            if chosen.len() == n {
                return Some(chosen);
            }
            let i = candidates[rng.gen_range(0..candidates.len())];
            if eligible(i) && taken.insert(self.entries[i].folded.as_str()) {
                chosen.push(i);
            }
        }
        if chosen.len() == n {
            return Some(chosen);
        }

        let mut rest: Vec<usize> = candidates
            .iter()
            .copied()
            .filter(|&i| eligible(i) && !taken.contains(self.entries[i].folded.as_str()))
            .collect();
        rest.shuffle(rng);
        for i in rest {
            if chosen.len() == n {
                break;
            }
            if taken.insert(self.entries[i].folded.as_str()) {
                chosen.push(i);
            }
        }
        (chosen.len() == n).then_some(chosen)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn gold(surface: &str, etype: EntityType) -> EntityMention {
        EntityMention { passage_id: "g".into(), span: (0, surface.len()), surface: surface.into(), etype }
    }

    #[test]
    fn by_type_partitions_entries() {
        let mut p = AnswerPool::default();
        p.push("Paris", EntityType::Gpe, "a");
        p.push("1912", EntityType::Date, "b");
        p.push("Berlin", EntityType::Gpe, "c");
        let total: usize = EntityType::ALL.iter().map(|&t| p.of_type(t).len()).sum();
        assert_eq!(total, p.len());
        assert_eq!(p.of_type(EntityType::Gpe), &[0, 2]);
    }

    #[test]
    fn excludes_gold_passage_and_surface() {
        let mut p = AnswerPool::default();
        p.push("london", EntityType::Gpe, "x");
        p.push("Paris", EntityType::Gpe, "g");
        p.push("Rome", EntityType::Gpe, "y");
        p.push("ROME", EntityType::Gpe, "z");
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let got = p.sample(p.all(), &gold("London", EntityType::Gpe), 1, &mut rng).unwrap();
        assert_eq!(p.entry(got[0]).surface.to_lowercase(), "rome");
        assert!(p.sample(p.all(), &gold("London", EntityType::Gpe), 2, &mut rng).is_none());
    }

    #[test]
    fn large_pool_sampling_is_distinct() {
        let mut p = AnswerPool::default();
        for i in 0..10_000 {
            p.push(&format!("e{}", i % 500), EntityType::Person, &format!("p{i}"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let got = p.sample(p.all(), &gold("e1", EntityType::Person), 7, &mut rng).unwrap();
            let surfaces: HashSet<_> = got.iter().map(|&i| p.entry(i).surface.clone()).collect();
            assert_eq!(surfaces.len(), 7);
            assert!(!surfaces.contains("e1"));
        }
    }
}
