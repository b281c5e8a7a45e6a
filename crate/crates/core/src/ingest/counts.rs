//! Lazily decayed occurrence counters.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Tolerated timestamp regression in seconds. Smaller regressions are
/// treated as happening at the current time.
pub const TIME_SLACK: f64 = 1.0;
/// Default mean life in seconds (two hours).
pub const DEFAULT_MEAN_LIFE: f64 = 7200.0;

/// A value valid at `stamp`; reading it later multiplies by `e^{-dt/tau}`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Decayed {
    pub value: f64,
    pub stamp: f64,
}

impl Decayed {
    pub fn at(&self, t: f64, mean_life: f64) -> f64 {
        if t <= self.stamp {
            self.value
        } else {
            self.value * (-(t - self.stamp) / mean_life).exp()
        }
    }

    fn bump(&mut self, t: f64, mean_life: f64) {
        self.value = self.at(t, mean_life) + 1.0;
        self.stamp = t;
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntityState {
    pub count: Decayed,
    /// Time of the last document mentioning the entity.
    pub last_touch: f64,
    /// Document index of that touch, ordering touches within one instant.
    pub touch_order: u64,
    /// Decayed total document count just after that touch.
    pub total_at_touch: f64,
}

/// Counts a pair weight is computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairCounts {
    pub n1: f64,
    pub n2: f64,
    pub n12: f64,
    pub total: f64,
}

#[derive(Debug, Clone)]
pub struct DecayedCounts {
    mean_life: f64,
    now: f64,
    documents: u64,
    total: Decayed,
    entities: HashMap<u32, EntityState>,
    pairs: HashMap<(u32, u32), Decayed>,
}

fn key(a: u32, b: u32) -> (u32, u32) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

impl DecayedCounts {
    pub fn new(mean_life: f64) -> Self {
        assert!(mean_life > 0.0 && mean_life.is_finite(), "mean life must be positive");
        DecayedCounts {
            mean_life,
            now: f64::NEG_INFINITY,
            documents: 0,
            total: Decayed::default(),
            entities: HashMap::new(),
            pairs: HashMap::new(),
        }
    }

    pub fn mean_life(&self) -> f64 {
        self.mean_life
    }

    pub fn now(&self) -> f64 {
        self.now
    }

    pub fn documents(&self) -> u64 {
        self.documents
    }

    /// Records a document at time `t`. `entities` must be duplicate-free.
    pub fn observe(&mut self, t: f64, entities: &[u32]) -> Result<()> {
        let t = self.advance(t)?;
        let tau = self.mean_life;
        self.documents += 1;
        self.total.bump(t, tau);
        let total = self.total.value;
        for &e in entities {
            let state = self.entities.entry(e).or_insert(EntityState {
                count: Decayed::default(),
                last_touch: t,
                touch_order: 0,
                total_at_touch: 0.0,
            });
            state.count.bump(t, tau);
            state.last_touch = t;
            state.touch_order = self.documents;
            state.total_at_touch = total;
        }
        for (i, &a) in entities.iter().enumerate() {
            for &b in &entities[i + 1..] {
                self.pairs.entry(key(a, b)).or_default().bump(t, tau);
            }
        }
        Ok(())
    }

    fn advance(&mut self, t: f64) -> Result<f64> {
        if !t.is_finite() {
            return Err(Error::TimeRegression { now: t, last: self.now });
        }
        if t < self.now - TIME_SLACK {
            return Err(Error::TimeRegression { now: t, last: self.now });
        }
        self.now = self.now.max(t);
        Ok(self.now)
    }

    pub fn entity(&self, e: u32) -> Option<&EntityState> {
        self.entities.get(&e)
    }

    pub fn entity_count(&self, e: u32, t: f64) -> f64 {
        self.entities.get(&e).map_or(0.0, |s| s.count.at(t, self.mean_life))
    }

    pub fn pair_count(&self, a: u32, b: u32, t: f64) -> f64 {
        self.pairs.get(&key(a, b)).map_or(0.0, |p| p.at(t, self.mean_life))
    }

    pub fn total_count(&self, t: f64) -> f64 {
        self.total.at(t, self.mean_life)
    }

    /// Counts as of the later of the two entities' last touches, ignoring
    /// every document after it.
    pub fn stale_counts(&self, a: u32, b: u32) -> Option<PairCounts> {
        let (sa, sb) = (self.entities.get(&a)?, self.entities.get(&b)?);
        let latest = if (sa.last_touch, sa.touch_order) >= (sb.last_touch, sb.touch_order) { sa } else { sb };
        let cut = latest.last_touch;
        Some(PairCounts {
            n1: sa.count.at(cut, self.mean_life),
            n2: sb.count.at(cut, self.mean_life),
            n12: self.pair_count(a, b, cut),
            total: latest.total_at_touch,
        })
    }

    /// Counts with every document up to `t` taken into account.
    pub fn exact_counts(&self, a: u32, b: u32, t: f64) -> PairCounts {
        PairCounts {
            n1: self.entity_count(a, t),
            n2: self.entity_count(b, t),
            n12: self.pair_count(a, b, t),
            total: self.total_count(t),
        }
    }

    /// Pairs with a recorded co-occurrence, sorted.
    pub fn pairs(&self) -> Vec<(u32, u32)> {
        let mut out: Vec<_> = self.pairs.keys().copied().collect();
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_instant_accumulates() {
        let mut c = DecayedCounts::new(DEFAULT_MEAN_LIFE);
        c.observe(100.0, &[1, 2]).unwrap();
        c.observe(100.0, &[1, 2]).unwrap();
        assert_eq!(c.pair_count(1, 2, 100.0), 2.0);
        assert_eq!(c.entity_count(2, 100.0), 2.0);
    }

    #[test]
    fn one_mean_life_decays_to_inverse_e() {
        let mut c = DecayedCounts::new(7200.0);
        c.observe(0.0, &[1, 2]).unwrap();
        let v = c.pair_count(2, 1, 7200.0);
        assert!((v - (-1.0f64).exp()).abs() < 1e-12);
        assert!((v - 0.367879).abs() < 1e-6);
    }

    #[test]
    fn decay_commutes_with_batching() {
        let mut stepped = DecayedCounts::new(600.0);
        let mut direct = DecayedCounts::new(600.0);
        stepped.observe(0.0, &[1]).unwrap();
        direct.observe(0.0, &[1]).unwrap();
        stepped.observe(250.0, &[]).unwrap();
        stepped.observe(1000.0, &[1]).unwrap();
        direct.observe(1000.0, &[1]).unwrap();
        assert!((stepped.entity_count(1, 1000.0) - direct.entity_count(1, 1000.0)).abs() < 1e-12);
        assert!((stepped.entity_count(1, 4000.0) - (1.0 + (-1000.0f64 / 600.0).exp()) * (-5.0f64).exp()).abs() < 1e-12);
    }

    #[test]
    fn empty_document_only_counts_total() {
        let mut c = DecayedCounts::new(7200.0);
        c.observe(5.0, &[]).unwrap();
        assert_eq!(c.total_count(5.0), 1.0);
        assert!(c.entity(1).is_none());
        assert!(c.pairs().is_empty());
    }

    #[test]
    fn time_regression() {
        let mut c = DecayedCounts::new(7200.0);
        c.observe(100.0, &[1]).unwrap();
        c.observe(99.5, &[1]).unwrap();
        assert_eq!(c.now(), 100.0);
        assert!(matches!(c.observe(50.0, &[1]), Err(Error::TimeRegression { .. })));
    }

    #[test]
    fn staleness_cut_ignores_later_documents() {
        let mut c = DecayedCounts::new(1e12);
        c.observe(0.0, &[1, 2]).unwrap();
        c.observe(1.0, &[1]).unwrap();
        c.observe(2.0, &[3]).unwrap();
        c.observe(3.0, &[]).unwrap();
        let s = c.stale_counts(1, 2).unwrap();
        for (got, want) in [(s.n1, 2.0), (s.n2, 1.0), (s.n12, 1.0)] {
            assert!((got - want).abs() < 1e-9);
        }
        assert!((s.total - 2.0).abs() < 1e-9);
        let e = c.exact_counts(1, 2, 3.0);
        assert!((e.total - 4.0).abs() < 1e-9);
    }
}
