//! Seeded update-stream generators: the planted-set synthetic workload
//! with an optional too-dense rejection gate, and a small-graph fuzz stream
//! used for oracle comparisons.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::density::DensityConfig;
use crate::engine::{Engine, EngineOptions};
use crate::error::{Error, Result};
use crate::graph::{EdgeUpdate, WeightedGraph};
use crate::Vertex;

/// Candidate draws per emitted update before giving up.
const MAX_ATTEMPTS: usize = 10_000;
/// Region redraws when a negative update finds no live edge.
const NEGATIVE_REDRAWS: usize = 16;

#[derive(Debug, Clone)]
pub struct SyntheticSpec {
    pub vertices: Vertex,
    pub updates: usize,
    /// Magnitudes are uniform in `(0, max_magnitude]`.
    pub max_magnitude: f64,
    pub negative_prob: f64,
    pub planted_prob: f64,
    pub planted_sets: usize,
    pub planted_size: usize,
    /// Rejects candidates that would create a too-dense subgraph under this
    /// configuration.
    pub gate: Option<DensityConfig>,
    pub seed: u64,
}

impl SyntheticSpec {
    /// The large recipe: 100K vertices, 250K updates, 100 planted sets of 10.
    pub fn full_scale(seed: u64) -> Self {
        SyntheticSpec {
            vertices: 100_000,
            updates: 250_000,
            max_magnitude: 0.1,
            negative_prob: 0.3,
            planted_prob: 0.9,
            planted_sets: 100,
            planted_size: 10,
            gate: None,
            seed,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidWorkload(m.to_string()));
        for p in [self.negative_prob, self.planted_prob] {
            if !(0.0..=1.0).contains(&p) {
                return bad("probabilities must lie in [0, 1]");
            }
        }
        if !(self.max_magnitude > 0.0 && self.max_magnitude.is_finite()) {
            return bad("max magnitude must be positive");
        }
        let planted = self.planted_sets * self.planted_size;
        if planted > self.vertices as usize {
            return bad("planted sets exceed the vertex count");
        }
        if self.planted_sets > 0 && self.planted_size < 2 {
            return bad("planted sets need at least two vertices");
        }
        if self.planted_prob > 0.0 && self.planted_sets == 0 {
            return bad("planted probability set but no planted sets");
        }
        if self.planted_prob < 1.0 && (self.vertices as usize) < planted + 2 {
            return bad("fewer than two vertices outside the planted sets");
        }
        Ok(())
    }

    /// Vertex range of planted set `k` (ids are the first disjoint blocks).
    pub fn planted_range(&self, k: usize) -> std::ops::RangeInclusive<Vertex> {
        let lo = (k * self.planted_size) as Vertex + 1;
        lo..=lo + self.planted_size as Vertex - 1
    }

    fn outside_range(&self) -> std::ops::RangeInclusive<Vertex> {
        (self.planted_sets * self.planted_size) as Vertex + 1..=self.vertices
    }

    fn region_of(&self, v: Vertex) -> usize {
        let planted = (self.planted_sets * self.planted_size) as Vertex;
        if v <= planted {
            ((v - 1) as usize) / self.planted_size
        } else {
            self.planted_sets
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GenReport {
    /// Candidates discarded by the gate.
    pub rejected: u64,
    /// Negative draws that fell back to a positive update for lack of a
    /// live edge.
    pub negative_fallbacks: u64,
    pub negatives: u64,
    pub planted: u64,
}

/// Live edges per region with O(1) removal.
#[derive(Debug, Default)]
struct LiveEdges {
    lists: Vec<Vec<(Vertex, Vertex)>>,
    pos: HashMap<(Vertex, Vertex), usize>,
}

impl LiveEdges {
    fn new(regions: usize) -> Self {
        LiveEdges { lists: vec![Vec::new(); regions], pos: HashMap::new() }
    }

    fn insert(&mut self, region: usize, e: (Vertex, Vertex)) {
        if !self.pos.contains_key(&e) {
            self.pos.insert(e, self.lists[region].len());
            self.lists[region].push(e);
        }
    }

    fn remove(&mut self, region: usize, e: (Vertex, Vertex)) {
        if let Some(i) = self.pos.remove(&e) {
            let list = &mut self.lists[region];
            list.swap_remove(i);
            if let Some(&moved) = list.get(i) {
                self.pos.insert(moved, i);
            }
        }
    }
}

enum Sink {
    Plain(WeightedGraph),
    Gated(Box<Engine>),
}

impl Sink {
    fn graph(&self) -> &WeightedGraph {
        match self {
            Sink::Plain(g) => g,
            Sink::Gated(e) => e.graph(),
        }
    }

    /// Applies the update, or returns false and leaves the state unchanged
    /// if the gate rejects it.
    fn offer(&mut self, u: &EdgeUpdate) -> Result<bool> {
        match self {
            Sink::Plain(g) => {
                g.apply_update(u)?;
                Ok(true)
            }
            Sink::Gated(e) => {
                let before = e.graph().weight(u.a, u.b);
                e.process(u)?;
                if e.too_dense_count() == 0 {
                    return Ok(true);
                }
                let after = e.graph().weight(u.a, u.b);
                e.process(&EdgeUpdate::new(u.seq, u.a, u.b, before - after))?;
                Ok(false)
            }
        }
    }
}

fn pair_in(rng: &mut ChaCha8Rng, range: std::ops::RangeInclusive<Vertex>) -> (Vertex, Vertex) {
    let a = rng.gen_range(range.clone());
    loop {
        let b = rng.gen_range(range.clone());
        if b != a {
            return if a < b { (a, b) } else { (b, a) };
        }
    }
}

/// Generates the stream. Deterministic for a given spec.
pub fn generate(spec: &SyntheticSpec) -> Result<(Vec<EdgeUpdate>, GenReport)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let regions = spec.planted_sets + 1;
    let mut live = LiveEdges::new(regions);
    let mut sink = match &spec.gate {
        None => Sink::Plain(WeightedGraph::new(spec.vertices)),
        Some(cfg) => Sink::Gated(Box::new(Engine::new(cfg.clone(), spec.vertices, EngineOptions::default()))),
    };
    let mut report = GenReport::default();
    let mut out = Vec::with_capacity(spec.updates);
    while out.len() < spec.updates {
        let seq = out.len() as u64;
        let mut placed = false;
        for _ in 0..MAX_ATTEMPTS {
            let negative = rng.gen_bool(spec.negative_prob);
            let magnitude = spec.max_magnitude * (1.0 - rng.gen::<f64>());
            let mut chosen = None;
            let tries = if negative { NEGATIVE_REDRAWS } else { 1 };
            for _ in 0..tries {
                let planted = spec.planted_sets > 0 && rng.gen_bool(spec.planted_prob);
                let region = if planted { rng.gen_range(0..spec.planted_sets) } else { spec.planted_sets };
                if negative {
                    let list = &live.lists[region];
                    if list.is_empty() {
                        continue;
                    }
                    let (a, b) = list[rng.gen_range(0..list.len())];
                    let w = sink.graph().weight(a, b);
                    chosen = Some((a, b, -magnitude.min(w), planted));
                } else {
                    let range = if planted { spec.planted_range(region) } else { spec.outside_range() };
                    let (a, b) = pair_in(&mut rng, range);
                    chosen = Some((a, b, magnitude, planted));
                }
                break;
            }
            let (a, b, delta, planted) = match chosen {
                Some(c) => c,
                None => {
                    report.negative_fallbacks += 1;
                    let planted = spec.planted_sets > 0 && rng.gen_bool(spec.planted_prob);
                    let region = if planted { rng.gen_range(0..spec.planted_sets) } else { spec.planted_sets };
                    let range = if planted { spec.planted_range(region) } else { spec.outside_range() };
                    let (a, b) = pair_in(&mut rng, range);
                    (a, b, magnitude, planted)
                }
            };
            let update = EdgeUpdate::new(seq, a, b, delta);
            if !sink.offer(&update)? {
                report.rejected += 1;
                continue;
            }
            let region = spec.region_of(a);
            if sink.graph().weight(a, b) > 0.0 {
                live.insert(region, (a, b));
            } else {
                live.remove(region, (a, b));
            }
            report.negatives += u64::from(delta < 0.0);
            report.planted += u64::from(planted);
            out.push(update);
            placed = true;
            break;
        }
        if !placed {
            return Err(Error::InvalidWorkload(format!("no admissible update found for seq {seq}")));
        }
    }
    Ok((out, report))
}

/// Random stream over a small vertex set for oracle comparisons.
#[derive(Debug, Clone)]
pub struct FuzzSpec {
    pub vertices: Vertex,
    pub updates: usize,
    /// Magnitudes are log-uniform in `[min_magnitude, max_magnitude]`.
    pub min_magnitude: f64,
    pub max_magnitude: f64,
    pub negative_prob: f64,
    /// Probability that a negative update deletes the edge outright.
    pub delete_prob: f64,
    /// Probability that both endpoints come from the first `hot` vertices.
    pub hot_prob: f64,
    pub hot: Vertex,
    pub seed: u64,
}

impl FuzzSpec {
    pub fn new(vertices: Vertex, updates: usize, min_magnitude: f64, max_magnitude: f64, seed: u64) -> Self {
        FuzzSpec {
            vertices,
            updates,
            min_magnitude,
            max_magnitude,
            negative_prob: 0.4,
            delete_prob: 0.1,
            hot_prob: 0.5,
            hot: vertices.min(5),
            seed,
        }
    }
}

pub fn fuzz_stream(spec: &FuzzSpec) -> Result<Vec<EdgeUpdate>> {
    if spec.vertices < 2 || !(spec.min_magnitude > 0.0 && spec.min_magnitude <= spec.max_magnitude) {
        return Err(Error::InvalidWorkload("fuzz spec needs two vertices and 0 < min <= max".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut g = WeightedGraph::new(spec.vertices);
    let mut out = Vec::with_capacity(spec.updates);
    let (lo, hi) = (spec.min_magnitude.ln(), spec.max_magnitude.ln());
    while out.len() < spec.updates {
        let seq = out.len() as u64;
        let magnitude = if hi > lo { rng.gen_range(lo..=hi).exp() } else { spec.min_magnitude };
        let update = if rng.gen_bool(spec.negative_prob) && !g.is_empty() {
            let edges: Vec<_> = g.edges().collect();
            let (a, b, w) = edges[rng.gen_range(0..edges.len())];
            let delta = if rng.gen_bool(spec.delete_prob) { -w } else { -magnitude.min(w) };
            EdgeUpdate::new(seq, a, b, delta)
        } else {
            let top = if spec.hot >= 2 && rng.gen_bool(spec.hot_prob) { spec.hot } else { spec.vertices };
            let (a, b) = pair_in(&mut rng, 1..=top);
            EdgeUpdate::new(seq, a, b, magnitude)
        };
        g.apply_update(&update)?;
        out.push(update);
    }
    Ok(out)
}

/// Stream planting heavy cliques whose weights are held inside a band,
/// over background noise. Used to produce stable too-dense subgraphs.
#[derive(Debug, Clone)]
pub struct TooDenseSpec {
    pub vertices: Vertex,
    pub cliques: usize,
    pub clique_size: usize,
    pub base_weight: f64,
    /// Planted edge weights stay within `base_weight ± band`.
    pub band: f64,
    /// Updates after the cliques are built.
    pub updates: usize,
    pub planted_prob: f64,
    /// Probability that a background update has one endpoint in a clique.
    pub anchored_prob: f64,
    pub max_magnitude: f64,
    pub negative_prob: f64,
    pub seed: u64,
}

impl TooDenseSpec {
    pub fn new(
        vertices: Vertex,
        cliques: usize,
        clique_size: usize,
        base_weight: f64,
        updates: usize,
        seed: u64,
    ) -> Self {
        TooDenseSpec {
            vertices,
            cliques,
            clique_size,
            base_weight,
            band: 0.1 * base_weight,
            updates,
            planted_prob: 0.3,
            anchored_prob: 0.5,
            max_magnitude: 0.1,
            negative_prob: 0.3,
            seed,
        }
    }
}

pub fn planted_too_dense(spec: &TooDenseSpec) -> Result<Vec<EdgeUpdate>> {
    let planted = (spec.cliques * spec.clique_size) as Vertex;
    if spec.clique_size < 2 || planted + 2 > spec.vertices || !(spec.band >= 0.0 && spec.band < spec.base_weight) {
        return Err(Error::InvalidWorkload("too-dense spec is infeasible".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut g = WeightedGraph::new(spec.vertices);
    let mut out = Vec::with_capacity(spec.updates + spec.cliques * spec.clique_size * spec.clique_size);
    let mut push = |g: &mut WeightedGraph, a: Vertex, b: Vertex, delta: f64| -> Result<()> {
        let u = EdgeUpdate::new(out.len() as u64, a, b, delta);
        g.apply_update(&u)?;
        out.push(u);
        Ok(())
    };
    let block = |k: usize| (k * spec.clique_size) as Vertex + 1..=((k + 1) * spec.clique_size) as Vertex;
    for k in 0..spec.cliques {
        let r = block(k);
        for a in r.clone() {
            for b in a + 1..=*r.end() {
                push(&mut g, a, b, spec.base_weight)?;
            }
        }
    }
    let mut background: Vec<(Vertex, Vertex)> = Vec::new();
    for _ in 0..spec.updates {
        let magnitude = spec.max_magnitude * (1.0 - rng.gen::<f64>());
        if rng.gen_bool(spec.planted_prob) {
            let k = rng.gen_range(0..spec.cliques);
            let (a, b) = pair_in(&mut rng, block(k));
            let w = g.weight(a, b);
            let (lo, hi) = (spec.base_weight - spec.band, spec.base_weight + spec.band);
            let delta = if rng.gen_bool(0.5) { magnitude.min(hi - w) } else { -magnitude.min(w - lo) };
            if delta != 0.0 {
                push(&mut g, a, b, delta)?;
                continue;
            }
        }
        if rng.gen_bool(spec.negative_prob) && !background.is_empty() {
            let i = rng.gen_range(0..background.len());
            let (a, b) = background[i];
            let w = g.weight(a, b);
            push(&mut g, a, b, -magnitude.min(w))?;
            if g.weight(a, b) == 0.0 {
                background.swap_remove(i);
            }
            continue;
        }
        let (a, b) = if rng.gen_bool(spec.anchored_prob) {
            let a = rng.gen_range(1..=planted);
            let b = rng.gen_range(planted + 1..=spec.vertices);
            (a, b)
        } else {
            pair_in(&mut rng, planted + 1..=spec.vertices)
        };
        if g.weight(a, b) == 0.0 {
            background.push((a, b));
        }
        push(&mut g, a, b, magnitude)?;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> SyntheticSpec {
        SyntheticSpec { vertices: 1000, updates: 2500, planted_sets: 10, ..SyntheticSpec::full_scale(seed) }
    }

    #[test]
    fn deterministic_and_distributed() {
        let (a, ra) = generate(&small(42)).unwrap();
        let (b, _) = generate(&small(42)).unwrap();
        assert_eq!(a, b);
        let (c, _) = generate(&small(43)).unwrap();
        assert_ne!(a, c);
        let neg = a.iter().filter(|u| u.delta < 0.0).count() as f64 / a.len() as f64;
        let planted = a.iter().filter(|u| u.a <= 100 && u.b <= 100).count() as f64 / a.len() as f64;
        assert!((neg - 0.30).abs() <= 0.03, "negative fraction {neg}");
        assert!((planted - 0.90).abs() <= 0.02, "planted fraction {planted}");
        assert_eq!(ra.negatives as usize, a.iter().filter(|u| u.delta < 0.0).count());
        let mut g = WeightedGraph::new(1000);
        for u in &a {
            assert!(u.delta.abs() <= 0.1 && u.delta != 0.0);
            g.apply_update(u).unwrap();
        }
    }

    #[test]
    fn single_planted_set() {
        let spec = SyntheticSpec {
            vertices: 50,
            updates: 300,
            planted_prob: 1.0,
            planted_sets: 1,
            ..SyntheticSpec::full_scale(7)
        };
        let (s, _) = generate(&spec).unwrap();
        assert!(s.iter().all(|u| u.a <= 10 && u.b <= 10));
    }

    #[test]
    fn infeasible_spec() {
        let spec = SyntheticSpec { vertices: 50, ..SyntheticSpec::full_scale(1) };
        assert!(matches!(generate(&spec), Err(Error::InvalidWorkload(_))));
    }

    #[test]
    fn too_dense_band_holds() {
        let spec = TooDenseSpec::new(200, 3, 4, 2.5, 2000, 9);
        let s = planted_too_dense(&spec).unwrap();
        let mut g = WeightedGraph::new(200);
        for u in &s {
            g.apply_update(u).unwrap();
            if u.a <= 12 && u.b <= 12 && (u.a - 1) / 4 == (u.b - 1) / 4 {
                let w = g.weight(u.a, u.b);
                assert!((2.25 - 1e-12..=2.75 + 1e-12).contains(&w));
            }
        }
        assert_eq!(s, planted_too_dense(&spec).unwrap());
    }

    #[test]
    fn fuzz_stream_never_goes_negative() {
        let s = fuzz_stream(&FuzzSpec::new(10, 500, 0.01, 0.5, 3)).unwrap();
        assert_eq!(s.len(), 500);
        let mut g = WeightedGraph::new(10);
        for u in &s {
            g.apply_update(u).unwrap();
        }
        assert_eq!(s, fuzz_stream(&FuzzSpec::new(10, 500, 0.01, 0.5, 3)).unwrap());
    }
}
