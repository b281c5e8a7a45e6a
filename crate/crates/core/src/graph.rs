//! Undirected weighted graph over vertex ids `1..=N` holding only strictly
//! positive weights.

use std::collections::{BTreeMap, BTreeSet};

use crate::density::EPSILON;
use crate::error::{Error, Result};
use crate::Vertex;

/// One edge-weight change `(a, b, delta)` tagged with its stream position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EdgeUpdate {
    pub seq: u64,
    pub a: Vertex,
    pub b: Vertex,
    pub delta: f64,
}

impl EdgeUpdate {
    pub fn new(seq: u64, a: Vertex, b: Vertex, delta: f64) -> Self {
        EdgeUpdate { seq, a, b, delta }
    }

    pub fn negated(&self) -> Self {
        EdgeUpdate { delta: -self.delta, ..*self }
    }
}

/// Weight before and after an applied update.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AppliedUpdate {
    pub before: f64,
    pub after: f64,
}

impl AppliedUpdate {
    /// Effective change, which differs from the requested delta when the
    /// new weight was clamped to zero.
    pub fn delta(&self) -> f64 {
        self.after - self.before
    }
}

#[derive(Debug, Clone, Default)]
pub struct WeightedGraph {
    universe: Vertex,
    adjacency: BTreeMap<Vertex, BTreeMap<Vertex, f64>>,
    // (weight bits, u, v) with u < v; positive f64 bit patterns sort numerically.
    by_weight: BTreeSet<(u64, Vertex, Vertex)>,
    edges: usize,
}

impl WeightedGraph {
    /// Graph over vertices `1..=universe`; adjacency is allocated lazily.
    pub fn new(universe: Vertex) -> Self {
        WeightedGraph { universe, adjacency: BTreeMap::new(), by_weight: BTreeSet::new(), edges: 0 }
    }

    pub fn universe(&self) -> Vertex {
        self.universe
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn is_empty(&self) -> bool {
        self.edges == 0
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        v >= 1 && v <= self.universe
    }

    fn check_vertex(&self, v: Vertex) -> Result<()> {
        if self.contains_vertex(v) {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, universe: self.universe })
        }
    }

    pub fn weight(&self, u: Vertex, v: Vertex) -> f64 {
        self.adjacency.get(&u).and_then(|row| row.get(&v)).copied().unwrap_or(0.0)
    }

    /// Neighborhood vector of `u` (sorted by vertex).
    pub fn neighbors(&self, u: Vertex) -> impl Iterator<Item = (Vertex, f64)> + '_ {
        self.adjacency.get(&u).into_iter().flat_map(|row| row.iter().map(|(&v, &w)| (v, w)))
    }

    pub fn degree(&self, u: Vertex) -> usize {
        self.adjacency.get(&u).map_or(0, BTreeMap::len)
    }

    /// Vertices with at least one incident edge, ascending.
    pub fn active_vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.adjacency.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex, f64)> + '_ {
        self.adjacency.iter().flat_map(|(&u, row)| row.range(u + 1..).map(move |(&v, &w)| (u, v, w)))
    }

    /// Edges with weight at least `min`, as `(u, v, w)` with `u < v`.
    pub fn edges_at_least(&self, min: f64) -> impl Iterator<Item = (Vertex, Vertex, f64)> + '_ {
        let lo = if min > 0.0 { min.to_bits() } else { 0 };
        self.by_weight.range((lo, 0, 0)..).map(|&(bits, u, v)| (u, v, f64::from_bits(bits)))
    }

    pub fn max_weight(&self) -> f64 {
        self.by_weight.last().map_or(0.0, |&(bits, _, _)| f64::from_bits(bits))
    }

    /// Applies `w(a,b) <- max(w(a,b) + delta, 0)`. A result within
    /// `EPSILON` of zero removes the edge; anything below `-EPSILON` is an
    /// inconsistent stream.
    pub fn apply_update(&mut self, update: &EdgeUpdate) -> Result<AppliedUpdate> {
        let EdgeUpdate { a, b, delta, .. } = *update;
        if a == b {
            return Err(Error::SelfLoop(a));
        }
        self.check_vertex(a)?;
        self.check_vertex(b)?;
        if !delta.is_finite() {
            return Err(Error::NonFiniteDelta(delta));
        }
        let before = self.weight(a, b);
        let raw = before + delta;
        if raw < -EPSILON {
            return Err(Error::NegativeWeight { a, b, weight: raw });
        }
        let after = if raw <= EPSILON { 0.0 } else { raw };
        self.set_weight(a, b, before, after);
        Ok(AppliedUpdate { before, after })
    }

    fn set_weight(&mut self, a: Vertex, b: Vertex, before: f64, after: f64) {
        let (u, v) = if a < b { (a, b) } else { (b, a) };
        if before > 0.0 {
            self.by_weight.remove(&(before.to_bits(), u, v));
        }
        if after > 0.0 {
            self.by_weight.insert((after.to_bits(), u, v));
        }
        if after > 0.0 {
            self.adjacency.entry(a).or_default().insert(b, after);
            self.adjacency.entry(b).or_default().insert(a, after);
            if before == 0.0 {
                self.edges += 1;
            }
        } else if before > 0.0 {
            for (x, y) in [(a, b), (b, a)] {
                if let Some(row) = self.adjacency.get_mut(&x) {
                    row.remove(&y);
                    if row.is_empty() {
                        self.adjacency.remove(&x);
                    }
                }
            }
            self.edges -= 1;
        }
    }

    /// `Gamma_C = sum_{v in C} Gamma_v` restricted to vertices outside `C`,
    /// sorted by vertex. Its support is the set of neighbors of `C`.
    pub fn merged_neighborhood(&self, set: &[Vertex]) -> Vec<(Vertex, f64)> {
        let mut merged: BTreeMap<Vertex, f64> = BTreeMap::new();
        for &v in set {
            for (y, w) in self.neighbors(v) {
                if set.binary_search(&y).is_err() {
                    *merged.entry(y).or_insert(0.0) += w;
                }
            }
        }
        merged.into_iter().collect()
    }

    /// `sum_{v in C} w(v, y)` for a single `y`.
    pub fn weight_into(&self, set: &[Vertex], y: Vertex) -> f64 {
        set.iter().map(|&v| self.weight(v, y)).sum()
    }

    /// Sum of internal pair weights of `set`.
    pub fn subgraph_score(&self, set: &[Vertex]) -> f64 {
        let mut score = 0.0;
        for (i, &u) in set.iter().enumerate() {
            for &v in &set[i + 1..] {
                score += self.weight(u, v);
            }
        }
        score
    }

    /// Checks symmetry, positivity and the absence of self-loops.
    pub fn audit(&self) -> std::result::Result<(), String> {
        let mut directed = 0usize;
        for (&u, row) in &self.adjacency {
            if row.is_empty() {
                return Err(format!("empty adjacency row for {u}"));
            }
            for (&v, &w) in row {
                if u == v {
                    return Err(format!("self-loop on {u}"));
                }
                if w <= 0.0 || w.is_nan() {
                    return Err(format!("non-positive weight {w} on ({u},{v})"));
                }
                if self.weight(v, u) != w {
                    return Err(format!("asymmetric weight on ({u},{v})"));
                }
                directed += 1;
            }
        }
        if self.by_weight.len() != self.edges {
            return Err("weight index out of step with adjacency".into());
        }
        if directed != 2 * self.edges {
            return Err(format!("edge count {} does not match adjacency {}", self.edges, directed / 2));
        }
        Ok(())
    }
}
