//! Incremental maintenance of every dense subgraph under edge-weight
//! updates.
//!
//! Negative updates only lower scores, so they are a scan over the indexed
//! subgraphs containing both endpoints. Positive updates seed a work queue
//! of `(subgraph, iteration)` pairs from the pre-existing entries
//! containing either endpoint and grow newly-dense subgraphs one vertex at
//! a time, for at most `ceil(delta / delta_it)` iterations.
//!
//! In star mode a too-dense `C` is not expanded into `C ∪ {y}` for every
//! vertex `y`; its disconnected extensions are represented by a star entry.
//! Growth that would have started from those implicit extensions is
//! performed directly from the star (see `explore_star`), and a star whose
//! implicit members are themselves too-dense is materialized.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use crate::density::{DensityConfig, EPSILON};
use crate::error::Result;
use crate::graph::{AppliedUpdate, EdgeUpdate, WeightedGraph};
use crate::index::{NodeId, SubgraphIndex, SubgraphMeta, Visit};
use crate::oracle::DenseMap;
use crate::Vertex;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EngineOptions {
    /// Represent disconnected extensions of too-dense subgraphs with star
    /// entries instead of materializing them.
    pub star_mode: bool,
    /// Explore up to `N_max` iterations regardless of the update magnitude.
    pub lift_budget: bool,
    /// Record every probed candidate; see [`Engine::take_probe_trace`].
    pub trace_probes: bool,
    #[doc(hidden)]
    pub budget_adjust: i32,
}

impl Default for EngineOptions {
    fn default() -> Self {
        EngineOptions { star_mode: true, lift_budget: false, trace_probes: false, budget_adjust: 0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EventKind {
    Gain,
    Lose,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Gain => "GAIN",
            EventKind::Lose => "LOSE",
        })
    }
}

/// An explicitly indexed subgraph crossing the output threshold `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityEvent {
    pub seq: u64,
    pub kind: EventKind,
    pub vertices: Vec<Vertex>,
    pub density: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProbeOutcome {
    Inserted,
    Rejected,
    /// Dense before the update; already represented.
    Stable,
    /// Already inserted earlier in the same update.
    Known,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRecord {
    pub seq: u64,
    pub vertices: Vec<Vertex>,
    pub score: f64,
    pub iteration: u32,
    pub outcome: ProbeOutcome,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EngineStats {
    pub updates: u64,
    pub positive: u64,
    pub negative: u64,
    pub noop: u64,
    pub insertions: u64,
    pub removals: u64,
    pub probes: u64,
    pub explores: u64,
    pub star_explores: u64,
    pub events: u64,
    pub peak_entries: usize,
}

/// Per-update scratch state.
#[derive(Debug, Default)]
struct Pass {
    seq: u64,
    a: Vertex,
    b: Vertex,
    delta: f64,
    budget: u32,
    queue: BTreeMap<u32, VecDeque<NodeId>>,
    explored: HashMap<NodeId, u32>,
    star_explored: HashMap<NodeId, u32>,
    events: Vec<DensityEvent>,
}

#[derive(Debug)]
pub struct Engine {
    cfg: DensityConfig,
    opts: EngineOptions,
    graph: WeightedGraph,
    index: SubgraphIndex,
    epoch: u64,
    stats: EngineStats,
    too_dense: usize,
    trace: Vec<ProbeRecord>,
    pass: Pass,
}

fn with_vertex(set: &[Vertex], y: Vertex) -> Vec<Vertex> {
    let mut out = Vec::with_capacity(set.len() + 1);
    let pos = set.partition_point(|&v| v < y);
    out.extend_from_slice(&set[..pos]);
    out.push(y);
    out.extend_from_slice(&set[pos..]);
    out
}

fn with_two(set: &[Vertex], y: Vertex, z: Vertex) -> Vec<Vertex> {
    let (lo, hi) = if y < z { (y, z) } else { (z, y) };
    with_vertex(&with_vertex(set, lo), hi)
}

fn gamma_at(gamma: &[(Vertex, f64)], y: Vertex) -> f64 {
    gamma.binary_search_by_key(&y, |&(v, _)| v).map_or(0.0, |i| gamma[i].1)
}

impl Engine {
    pub fn new(cfg: DensityConfig, universe: Vertex, opts: EngineOptions) -> Self {
        Engine {
            index: SubgraphIndex::new(cfg.clone()),
            cfg,
            opts,
            graph: WeightedGraph::new(universe),
            epoch: 0,
            stats: EngineStats::default(),
            too_dense: 0,
            trace: Vec::new(),
            pass: Pass::default(),
        }
    }

    pub fn config(&self) -> &DensityConfig {
        &self.cfg
    }

    pub fn options(&self) -> EngineOptions {
        self.opts
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn index(&self) -> &SubgraphIndex {
        &self.index
    }

    pub fn stats(&self) -> EngineStats {
        self.stats
    }

    pub fn epoch(&self) -> u64 {
        self.epoch
    }

    /// Explicit entries currently too-dense.
    pub fn too_dense_count(&self) -> usize {
        self.too_dense
    }

    pub fn take_probe_trace(&mut self) -> Vec<ProbeRecord> {
        std::mem::take(&mut self.trace)
    }

    /// Applies one update and returns the events it caused.
    pub fn process(&mut self, update: &EdgeUpdate) -> Result<Vec<DensityEvent>> {
        let applied = self.graph.apply_update(update)?;
        self.stats.updates += 1;
        let delta = applied.delta();
        if delta == 0.0 {
            self.stats.noop += 1;
            return Ok(Vec::new());
        }
        self.epoch += 1;
        let (a, b) = if update.a < update.b { (update.a, update.b) } else { (update.b, update.a) };
        self.pass = Pass { seq: update.seq, a, b, delta, ..Pass::default() };
        if delta < 0.0 {
            self.stats.negative += 1;
            self.negative();
        } else {
            self.stats.positive += 1;
            self.positive(applied)?;
        }
        self.stats.peak_entries = self.stats.peak_entries.max(self.index.len());
        let events = std::mem::take(&mut self.pass.events);
        self.stats.events += events.len() as u64;
        Ok(events)
    }

    fn emit(&mut self, kind: EventKind, vertices: Vec<Vertex>, score: f64) {
        let density = self.cfg.density(vertices.len(), score);
        self.pass.events.push(DensityEvent { seq: self.pass.seq, kind, vertices, density });
    }

    fn set_too_dense(&mut self, h: NodeId, flag: bool) {
        let was = self.index.meta(h).is_some_and(|m| m.too_dense);
        if was == flag {
            return;
        }
        if flag {
            self.too_dense += 1;
            if self.opts.star_mode {
                self.index.mark_too_dense(h).expect("too-dense entries are below N_max");
            } else {
                self.index.set_too_dense_flag(h, true);
            }
        } else {
            self.too_dense -= 1;
            if self.index.has_star(h) {
                self.index.unmark_too_dense(h).expect("star present");
            } else {
                self.index.set_too_dense_flag(h, false);
            }
        }
    }

    fn negative(&mut self) {
        let (a, b, delta) = (self.pass.a, self.pass.b, self.pass.delta);
        let hits: Vec<NodeId> = self
            .index
            .visit_containing(a, b)
            .into_iter()
            .filter_map(|v| match v {
                Visit::Subgraph(h) => Some(h),
                Visit::Star(_) => None,
            })
            .filter(|&h| {
                let set = self.index.vertices(h);
                set.binary_search(&a).is_ok() && set.binary_search(&b).is_ok()
            })
            .collect();
        let mut events = Vec::new();
        for h in hits {
            let meta = *self.index.meta(h).expect("visited entries carry meta");
            let n = meta.cardinality;
            let new = meta.score + delta;
            if self.cfg.is_output_dense(n, meta.score) && !self.cfg.is_output_dense(n, new) {
                events.push(DensityEvent {
                    seq: self.pass.seq,
                    kind: EventKind::Lose,
                    vertices: self.index.vertices(h),
                    density: self.cfg.density(n, new),
                });
            }
            if !self.cfg.is_dense(n, new) {
                if meta.too_dense {
                    self.too_dense -= 1;
                }
                self.index.remove_handle(h);
                self.stats.removals += 1;
            } else {
                self.index.set_score(h, new);
                if meta.too_dense && !self.cfg.is_too_dense(n, new) {
                    self.set_too_dense(h, false);
                }
            }
        }
        events.sort_by(|x, y| x.vertices.cmp(&y.vertices));
        self.pass.events = events;
    }

    fn budget(&self, delta: f64) -> u32 {
        if self.opts.lift_budget {
            return self.cfg.max_cardinality() as u32;
        }
        let base = self.cfg.iteration_budget(delta) as i64 + self.opts.budget_adjust as i64;
        base.max(0) as u32
    }

    fn positive(&mut self, applied: AppliedUpdate) -> Result<()> {
        let (a, b, delta) = (self.pass.a, self.pass.b, self.pass.delta);
        self.pass.budget = self.budget(delta);
        let nmax = self.cfg.max_cardinality();
        let visits = self.index.visit_containing(a, b);

        let wab = applied.after;
        let base = [a, b];
        if self.index.lookup(&base).is_none() && self.cfg.is_dense(2, wab) && !self.cfg.is_dense(2, wab - delta) {
            let h = self.insert_new(&base, wab, Some(0))?;
            self.explore(h, 1);
        }

        let mut stars = Vec::new();
        for visit in visits {
            let h = match visit {
                Visit::Subgraph(h) => h,
                Visit::Star(h) => {
                    stars.push(h);
                    continue;
                }
            };
            let meta = *self.index.meta(h).expect("visited entries carry meta");
            let set = self.index.vertices(h);
            let has_a = set.binary_search(&a).is_ok();
            let has_b = set.binary_search(&b).is_ok();
            let n = meta.cardinality;
            if has_a && has_b {
                let old = meta.score;
                let new = old + delta;
                self.index.set_score(h, new);
                if !self.cfg.is_output_dense(n, old) && self.cfg.is_output_dense(n, new) {
                    self.emit(EventKind::Gain, set.clone(), new);
                }
                if self.cfg.is_too_dense(n, new) {
                    self.set_too_dense(h, true);
                    if self.opts.star_mode
                        && self.cfg.is_doubly_too_dense(n, new)
                        && !self.cfg.is_doubly_too_dense(n, old)
                    {
                        self.materialize(h, &set, new, 0)?;
                    }
                }
                self.explore(h, 1);
            } else {
                if n + 1 > nmax || meta.too_dense {
                    continue;
                }
                let other = if has_a { b } else { a };
                let score = meta.score + self.graph.weight_into(&set, other);
                self.probe(&set, &[other], score, 1)?;
            }
        }

        if self.opts.star_mode {
            for h in stars {
                self.react_star(h, applied)?;
            }
        }
        self.drain()
    }

    /// Star-side counterpart of the per-entry step for a star that existed
    /// before the update.
    fn react_star(&mut self, h: NodeId, applied: AppliedUpdate) -> Result<()> {
        let (a, b, delta) = (self.pass.a, self.pass.b, self.pass.delta);
        let nmax = self.cfg.max_cardinality();
        let meta = match self.index.meta(h) {
            Some(m) if self.index.has_star(h) => *m,
            _ => return Ok(()),
        };
        let set = self.index.vertices(h);
        let n = meta.cardinality;
        let has_a = set.binary_search(&a).is_ok();
        let has_b = set.binary_search(&b).is_ok();
        match (has_a, has_b) {
            (true, true) => {
                if !self.cfg.is_doubly_too_dense(n, meta.score - delta) {
                    self.explore_star(h, 1);
                }
            }
            (true, false) | (false, true) => {
                if self.cfg.is_doubly_too_dense(n, meta.score) {
                    return Ok(());
                }
                let (inside, other) = if has_a { (a, b) } else { (b, a) };
                let gamma_other = self.graph.weight_into(&set, other);
                let isolated_before =
                    applied.before == 0.0 && set.iter().all(|&v| v == inside || self.graph.weight(v, other) == 0.0);
                if isolated_before {
                    let ext = with_vertex(&set, other);
                    if self.index.lookup(&ext).is_none() {
                        let x = self.insert_new(&ext, meta.score + gamma_other, Some(0))?;
                        self.push(x, 1);
                    }
                }
                if n + 2 <= nmax && self.pass.budget >= 1 {
                    let partners: Vec<(Vertex, f64)> = self.graph.neighbors(other).collect();
                    for (y, w) in partners {
                        if set.binary_search(&y).is_ok() || self.graph.weight_into(&set, y) != 0.0 {
                            continue;
                        }
                        self.probe(&set, &[y, other], meta.score + gamma_other + w, 1)?;
                    }
                }
            }
            (false, false) => {
                if n + 2 > nmax || self.pass.budget < 1 || self.cfg.is_doubly_too_dense(n, meta.score) {
                    return Ok(());
                }
                let ga = self.graph.weight_into(&set, a);
                let gb = self.graph.weight_into(&set, b);
                if ga == 0.0 || gb == 0.0 {
                    self.probe(&set, &[a, b], meta.score + ga + gb + applied.after, 1)?;
                }
            }
        }
        Ok(())
    }

    fn push(&mut self, h: NodeId, level: u32) {
        self.pass.queue.entry(level).or_default().push_back(h);
    }

    fn drain(&mut self) -> Result<()> {
        loop {
            let next = match self.pass.queue.first_entry() {
                None => return Ok(()),
                Some(mut entry) => {
                    let level = *entry.key();
                    let h = entry.get_mut().pop_front();
                    if entry.get().is_empty() {
                        entry.remove();
                    }
                    h.map(|h| (h, level))
                }
            };
            if let Some((h, level)) = next {
                self.explore(h, level);
            }
        }
    }

    fn insert_new(&mut self, set: &[Vertex], score: f64, iteration: Option<u32>) -> Result<NodeId> {
        let n = set.len();
        let mut meta = SubgraphMeta::new(score, n, self.epoch);
        meta.iteration = iteration;
        let h = self.index.insert(set, meta)?;
        self.stats.insertions += 1;
        if self.cfg.is_output_dense(n, score) {
            self.emit(EventKind::Gain, set.to_vec(), score);
        }
        if self.cfg.is_too_dense(n, score) {
            self.set_too_dense(h, true);
            if self.opts.star_mode && self.cfg.is_doubly_too_dense(n, score) {
                self.materialize(h, set, score, iteration.unwrap_or(0))?;
            }
        }
        Ok(h)
    }

    /// Inserts every missing `C ∪ {y}` of a doubly too-dense `C`.
    fn materialize(&mut self, h: NodeId, set: &[Vertex], score: f64, tag: u32) -> Result<()> {
        let delta = self.pass.delta;
        let gamma = self.graph.merged_neighborhood(set);
        let n = set.len() + 1;
        for y in 1..=self.graph.universe() {
            if set.binary_search(&y).is_ok() || self.index.extend_lookup(h, y).is_some() {
                continue;
            }
            let ext = with_vertex(set, y);
            let ext_score = score + gamma_at(&gamma, y);
            if self.cfg.is_dense(n, ext_score - delta) {
                let x = self.insert_new(&ext, ext_score, Some(0))?;
                self.push(x, 1);
            } else {
                let x = self.insert_new(&ext, ext_score, Some(tag + 1))?;
                self.push(x, tag + 2);
            }
        }
        Ok(())
    }

    fn explore(&mut self, h: NodeId, i: u32) {
        if i > self.pass.budget {
            return;
        }
        let meta = match self.index.meta(h) {
            Some(m) => *m,
            None => return,
        };
        let n = meta.cardinality;
        if n >= self.cfg.max_cardinality() {
            return;
        }
        if self.pass.explored.get(&h).is_some_and(|&done| done <= i) {
            return;
        }
        self.pass.explored.insert(h, i);
        if self.cfg.is_too_dense(n, meta.score - self.pass.delta) {
            return;
        }
        self.stats.explores += 1;
        let set = self.index.vertices(h);
        debug_assert!(set.binary_search(&self.pass.a).is_ok() && set.binary_search(&self.pass.b).is_ok());
        let gamma = self.graph.merged_neighborhood(&set);
        let too_dense = self.cfg.is_too_dense(n, meta.score);
        if too_dense && !self.opts.star_mode {
            let mut g = gamma.iter().peekable();
            for y in 1..=self.graph.universe() {
                if set.binary_search(&y).is_ok() {
                    continue;
                }
                let mut add = 0.0;
                while let Some(&&(v, w)) = g.peek() {
                    if v < y {
                        g.next();
                    } else {
                        if v == y {
                            add = w;
                        }
                        break;
                    }
                }
                self.probe(&set, &[y], meta.score + add, i).expect("probed sets are valid");
            }
            return;
        }
        for &(y, w) in &gamma {
            self.probe(&set, &[y], meta.score + w, i).expect("probed sets are valid");
        }
        if too_dense {
            self.explore_star(h, i + 1);
        }
    }

    /// Explores the implicit members `C ∪ {y}` of the star under `h` by
    /// probing their connected extensions `C ∪ {y, z}` with `w(y,z) > 0`.
    /// When `z` is adjacent to `C` but `w(y,z) = 0`, the set is an implicit
    /// member of the star of `C ∪ {z}` instead.
    fn explore_star(&mut self, h: NodeId, i: u32) {
        if i > self.pass.budget {
            return;
        }
        let meta = match self.index.meta(h) {
            Some(m) => *m,
            None => return,
        };
        let n = meta.cardinality;
        if n + 2 > self.cfg.max_cardinality() || self.cfg.is_doubly_too_dense(n, meta.score) {
            return;
        }
        if self.pass.star_explored.get(&h).is_some_and(|&done| done <= i) {
            return;
        }
        self.pass.star_explored.insert(h, i);
        self.stats.star_explores += 1;
        let set = self.index.vertices(h);
        let gamma = self.graph.merged_neighborhood(&set);
        let need = (self.cfg.threshold_for(n + 2) - 2.0 * EPSILON) * self.cfg.size_weight(n + 2) - meta.score;
        let isolated = |y: Vertex| set.binary_search(&y).is_err() && gamma_at(&gamma, y) == 0.0;
        let mut pairs = Vec::new();
        // z adjacent to C, y isolated from C.
        for &(z, gz) in &gamma {
            for (y, w) in self.graph.neighbors(z) {
                if isolated(y) && (self.opts.trace_probes || self.cfg.is_dense(n + 2, meta.score + w + gz)) {
                    pairs.push((y, z, meta.score + w + gz));
                }
            }
        }
        // Both isolated from C: only edges heavy enough on their own.
        let floor = if self.opts.trace_probes { 0.0 } else { need };
        for (y, z, w) in self.graph.edges_at_least(floor) {
            if isolated(y) && isolated(z) && (self.opts.trace_probes || self.cfg.is_dense(n + 2, meta.score + w)) {
                pairs.push((y, z, meta.score + w));
            }
        }
        for (y, z, score) in pairs {
            self.probe(&set, &[y, z], score, i).expect("probed sets are valid");
        }
    }

    /// Considers `base ∪ extra` with the given post-update score, inserting
    /// it and scheduling its exploration if it is newly dense.
    fn probe(&mut self, base: &[Vertex], extra: &[Vertex], score: f64, i: u32) -> Result<()> {
        self.stats.probes += 1;
        let n = base.len() + extra.len();
        let dense = self.cfg.is_dense(n, score);
        if !dense && !self.opts.trace_probes {
            return Ok(());
        }
        let set = match extra {
            [y] => with_vertex(base, *y),
            [y, z] => with_two(base, *y, *z),
            _ => unreachable!("probes extend by one or two vertices"),
        };
        let outcome = if !dense {
            ProbeOutcome::Rejected
        } else if self.cfg.is_dense(n, score - self.pass.delta) {
            ProbeOutcome::Stable
        } else if let Some(h) = self.index.lookup(&set) {
            let meta = *self.index.meta(h).expect("lookup returns entries");
            if meta.epoch == self.epoch && meta.iteration.is_some_and(|t| t > i) {
                self.index.set_iteration(h, Some(i), self.epoch);
                self.push(h, i + 1);
            }
            ProbeOutcome::Known
        } else {
            let h = self.insert_new(&set, score, Some(i))?;
            self.push(h, i + 1);
            ProbeOutcome::Inserted
        };
        if self.opts.trace_probes {
            self.trace.push(ProbeRecord { seq: self.pass.seq, vertices: set, score, iteration: i, outcome });
        }
        Ok(())
    }

    /// Output-dense subgraphs. The materialized view lists explicit entries
    /// only; the expanded view adds the implicit members of every star.
    pub fn snapshot(&self, expand: bool) -> DenseMap {
        self.collect(expand, true)
    }

    /// Dense subgraphs, under the same two views as [`Self::snapshot`].
    pub fn dense_snapshot(&self, expand: bool) -> DenseMap {
        self.collect(expand, false)
    }

    fn collect(&self, expand: bool, output_only: bool) -> DenseMap {
        let keep = |n: usize, score: f64| !output_only || self.cfg.is_output_dense(n, score);
        let mut out = DenseMap::new();
        for (set, meta) in self.index.entries() {
            if keep(set.len(), meta.score) {
                out.insert(set, self.cfg.density(meta.cardinality, meta.score));
            }
        }
        if expand {
            for h in self.index.stars() {
                let meta = self.index.meta(h).expect("stars hang under entries");
                let n = meta.cardinality + 1;
                if !keep(n, meta.score) {
                    continue;
                }
                let density = self.cfg.density(n, meta.score);
                for set in self.index.expand_implicit(h, &self.graph) {
                    out.entry(set).or_insert(density);
                }
            }
        }
        out
    }

    /// Checks index structure, stored scores against the graph, and the
    /// too-dense flags and stars against the configuration.
    pub fn audit(&self) -> std::result::Result<(), String> {
        self.graph.audit()?;
        self.index.audit()?;
        let mut flagged = 0;
        for h in self.index.handles() {
            let meta = self.index.meta(h).expect("handles carry meta");
            let set = self.index.vertices(h);
            let actual = self.graph.subgraph_score(&set);
            if (actual - meta.score).abs() > 1e-9 {
                return Err(format!("{set:?}: stored score {} but graph has {actual}", meta.score));
            }
            let td = self.cfg.is_too_dense(meta.cardinality, meta.score);
            if td != meta.too_dense {
                return Err(format!("{set:?}: too-dense flag {} expected {td}", meta.too_dense));
            }
            flagged += usize::from(td);
            if self.index.has_star(h) != (td && self.opts.star_mode) {
                return Err(format!("{set:?}: star presence does not match too-dense status"));
            }
            if self.opts.star_mode
                && self.cfg.is_doubly_too_dense(meta.cardinality, meta.score)
                && self.graph.universe() <= 4096
            {
                for y in 1..=self.graph.universe() {
                    if set.binary_search(&y).is_err() && self.index.extend_lookup(h, y).is_none() {
                        return Err(format!("{set:?} is doubly too-dense but {y} is not materialized"));
                    }
                }
            }
        }
        if flagged != self.too_dense {
            return Err(format!("too-dense counter {} but {flagged} flagged", self.too_dense));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::DensityFamily;
    use crate::oracle::{brute_force_dense, diff, DEFAULT_LIMIT};

    fn fixture_cfg() -> DensityConfig {
        DensityConfig::with_thresholds(DensityFamily::AvgWeight, 1.0, 4, 0.15, &[0.9, 0.975, 1.0]).unwrap()
    }

    fn fixture_engine(opts: EngineOptions) -> Engine {
        let mut e = Engine::new(fixture_cfg(), 5, opts);
        let edges = [
            (1, 3, 1.06),
            (2, 3, 1.06),
            (1, 4, 1.0225),
            (2, 4, 1.0225),
            (3, 4, 0.899),
            (1, 5, 0.1),
            (2, 5, 0.1),
            (3, 5, 0.1),
            (4, 5, 0.1),
            (1, 2, 0.8),
        ];
        for (seq, &(a, b, w)) in edges.iter().enumerate() {
            e.process(&EdgeUpdate::new(seq as u64, a, b, w)).unwrap();
        }
        e
    }

    fn keys(m: &DenseMap) -> Vec<Vec<Vertex>> {
        m.keys().cloned().collect()
    }

    #[test]
    fn fixture_pre_state_matches_oracle() {
        let e = fixture_engine(EngineOptions::default());
        let oracle = brute_force_dense(e.graph(), e.config(), DEFAULT_LIMIT).unwrap();
        assert_eq!(diff(&e.dense_snapshot(true), &oracle.dense), vec![]);
        e.audit().unwrap();
    }

    #[test]
    fn fixture_update_and_negation() {
        let mut e = fixture_engine(EngineOptions { trace_probes: true, ..EngineOptions::default() });
        let before = keys(&e.dense_snapshot(false));
        e.take_probe_trace();
        let events = e.process(&EdgeUpdate::new(100, 1, 2, 0.15)).unwrap();
        let got: Vec<_> = events.iter().map(|ev| (ev.kind, ev.vertices.clone())).collect();
        assert_eq!(got, vec![(EventKind::Gain, vec![1, 2, 3]), (EventKind::Gain, vec![1, 2, 3, 4])]);
        let after = keys(&e.dense_snapshot(false));
        let added: Vec<_> = after.iter().filter(|s| !before.contains(s)).cloned().collect();
        assert_eq!(added, vec![vec![1, 2], vec![1, 2, 3], vec![1, 2, 3, 4], vec![1, 2, 4]]);
        let trace = e.take_probe_trace();
        assert!(trace.iter().any(|p| p.vertices == vec![1, 2, 5] && p.outcome == ProbeOutcome::Rejected));
        e.audit().unwrap();

        let events = e.process(&EdgeUpdate::new(101, 1, 2, -0.15)).unwrap();
        let got: Vec<_> = events.iter().map(|ev| (ev.kind, ev.vertices.clone())).collect();
        assert_eq!(got, vec![(EventKind::Lose, vec![1, 2, 3]), (EventKind::Lose, vec![1, 2, 3, 4])]);
        assert_eq!(keys(&e.dense_snapshot(false)), before);
        e.audit().unwrap();
    }

    #[test]
    fn isolated_small_update_is_quiet() {
        let mut e = fixture_engine(EngineOptions::default());
        let n = e.index().len();
        assert!(e.process(&EdgeUpdate::new(0, 1, 5, 0.2)).unwrap().is_empty());
        assert_eq!(e.index().len(), n);
        let mut fresh = Engine::new(fixture_cfg(), 5, EngineOptions::default());
        assert!(fresh.process(&EdgeUpdate::new(0, 1, 2, 0.5)).unwrap().is_empty());
        assert!(fresh.index().is_empty());
    }

    #[test]
    fn planted_triangle_star_vs_explicit() {
        let cfg = DensityConfig::new(DensityFamily::AvgWeight, 1.0, 4, 0.15).unwrap();
        let mut star = Engine::new(cfg.clone(), 12, EngineOptions::default());
        let mut explicit = Engine::new(cfg, 12, EngineOptions { star_mode: false, ..EngineOptions::default() });
        for (seq, (a, b)) in [(1, 2), (1, 3), (2, 3), (3, 4), (5, 6)].into_iter().enumerate() {
            for e in [&mut star, &mut explicit] {
                e.process(&EdgeUpdate::new(seq as u64, a, b, if b == 4 || a == 5 { 0.5 } else { 10.0 })).unwrap();
            }
        }
        assert!(star.index().star_count() > 0);
        assert!(star.index().len() < explicit.index().len());
        assert_eq!(star.dense_snapshot(true), explicit.dense_snapshot(true));
        let oracle = brute_force_dense(star.graph(), star.config(), DEFAULT_LIMIT).unwrap();
        assert_eq!(diff(&star.dense_snapshot(true), &oracle.dense), vec![]);
        star.audit().unwrap();
        explicit.audit().unwrap();
    }

    #[test]
    fn zero_delta_is_noop() {
        let mut e = fixture_engine(EngineOptions::default());
        let epoch = e.epoch();
        assert!(e.process(&EdgeUpdate::new(0, 1, 2, 0.0)).unwrap().is_empty());
        assert_eq!(e.epoch(), epoch);
    }
}
