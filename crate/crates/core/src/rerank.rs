//! Greedy diversity reranking of reported stories.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::Vertex;

pub const DEFAULT_PENALTY: f64 = 0.8;

#[derive(Debug, Clone, PartialEq)]
pub struct Story {
    pub vertices: Vec<Vertex>,
    pub density: f64,
}

impl Story {
    pub fn new(mut vertices: Vec<Vertex>, density: f64) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Story { vertices, density }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ranked {
    pub story: Story,
    /// Fraction of the story's vertices covered by earlier picks.
    pub coverage: f64,
    /// `1 - penalty * coverage`.
    pub multiplier: f64,
    pub score: f64,
}

/// Coverage of `story` by `picked`.
pub fn coverage(story: &[Vertex], picked: &BTreeSet<Vertex>) -> f64 {
    if story.is_empty() {
        return 0.0;
    }
    story.iter().filter(|v| picked.contains(v)).count() as f64 / story.len() as f64
}

/// Repeatedly picks the story maximizing `density * (1 - penalty * coverage)`.
/// Ties go to the lexicographically smaller vertex set.
pub fn rerank_diverse(stories: &[Story], penalty: f64) -> Result<Vec<Ranked>> {
    if !(0.0..=1.0).contains(&penalty) {
        return Err(Error::InvalidPenalty(penalty));
    }
    let mut pool: Vec<&Story> = stories.iter().collect();
    pool.sort_by(|a, b| a.vertices.cmp(&b.vertices));
    let mut picked = BTreeSet::new();
    let mut out = Vec::with_capacity(pool.len());
    while !pool.is_empty() {
        let mut best: Option<(usize, f64, f64)> = None;
        for (i, s) in pool.iter().enumerate() {
            let c = coverage(&s.vertices, &picked);
            let score = s.density * (1.0 - penalty * c);
            if best.is_none_or(|(_, b, _)| score > b) {
                best = Some((i, score, c));
            }
        }
        let (i, score, c) = best.expect("pool is non-empty");
        let story = pool.remove(i).clone();
        picked.extend(story.vertices.iter().copied());
        out.push(Ranked { story, coverage: c, multiplier: 1.0 - penalty * c, score });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disjoint_stories_keep_density_order() {
        let s = [Story::new(vec![1, 2], 0.5), Story::new(vec![3, 4], 0.9), Story::new(vec![5, 6], 0.7)];
        let r = rerank_diverse(&s, 0.8).unwrap();
        let order: Vec<f64> = r.iter().map(|x| x.story.density).collect();
        assert_eq!(order, vec![0.9, 0.7, 0.5]);
        assert!(r.iter().all(|x| x.multiplier == 1.0));
    }

    #[test]
    fn duplicate_and_half_covered_multipliers() {
        let s =
            [Story::new(vec![1, 2, 3, 4], 2.0), Story::new(vec![4, 3, 2, 1], 1.9), Story::new(vec![3, 4, 5, 6], 1.0)];
        let r = rerank_diverse(&s, 0.8).unwrap();
        assert_eq!(r[0].story.vertices, vec![1, 2, 3, 4]);
        assert_eq!(r[0].multiplier, 1.0);
        // Half-covered: 0.6 * 1.0 beats the duplicate's 0.2 * 1.9.
        assert_eq!(r[1].story.vertices, vec![3, 4, 5, 6]);
        assert_eq!(r[1].multiplier, 1.0 - 0.8 * 0.5);
        assert_eq!(r[2].coverage, 1.0);
        assert_eq!(r[2].multiplier, 1.0 - 0.8);
    }

    #[test]
    fn ties_break_on_vertex_set() {
        let s = [Story::new(vec![5, 6], 1.0), Story::new(vec![1, 9], 1.0)];
        let r = rerank_diverse(&s, 0.8).unwrap();
        assert_eq!(r[0].story.vertices, vec![1, 9]);
    }

    #[test]
    fn penalty_range() {
        assert_eq!(rerank_diverse(&[], 1.2), Err(Error::InvalidPenalty(1.2)));
        assert!(rerank_diverse(&[], -0.1).is_err());
        assert!(rerank_diverse(&[], 0.0).unwrap().is_empty());
    }
}
