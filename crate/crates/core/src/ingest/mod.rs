//! Turns a timestamped stream of entity-annotated documents into edge-weight
//! updates on the entity co-occurrence graph.
//!
//! Counts decay exponentially with a configurable mean life. A pair's weight
//! is recomputed only when one of its entities appears, from counts frozen at
//! the later of the two entities' last appearances.

pub mod counts;
pub mod measure;

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, Write};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::density::EPSILON;
use crate::error::{Error, Result};
use crate::graph::EdgeUpdate;
use crate::Vertex;

pub use counts::{DecayedCounts, PairCounts, DEFAULT_MEAN_LIFE};
pub use measure::{AssociationMeasure, Contingency};

/// One input document.
#[derive(Debug, Clone, PartialEq)]
pub struct Document {
    pub timestamp: u64,
    pub entities: Vec<String>,
}

/// Entity names to dense vertex ids, starting at 1.
#[derive(Debug, Clone, Default)]
pub struct EntityDictionary {
    ids: HashMap<String, Vertex>,
    names: Vec<String>,
}

impl EntityDictionary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn intern(&mut self, name: &str) -> Vertex {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        self.names.push(name.to_string());
        let id = self.names.len() as Vertex;
        self.ids.insert(name.to_string(), id);
        id
    }

    pub fn id(&self, name: &str) -> Option<Vertex> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: Vertex) -> Option<&str> {
        self.names.get((id as usize).checked_sub(1)?).map(String::as_str)
    }

    /// One name per line; line `i` holds vertex `i`.
    pub fn write_to<W: Write>(&self, mut out: W) -> Result<()> {
        for name in &self.names {
            writeln!(out, "{name}")?;
        }
        Ok(())
    }

    pub fn read_from<R: BufRead>(input: R) -> Result<Self> {
        let mut dict = EntityDictionary::new();
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            if dict.ids.contains_key(&line) || line.is_empty() {
                return Err(Error::Parse { line: i + 1, message: format!("duplicate or empty entity {line:?}") });
            }
            dict.intern(&line);
        }
        Ok(dict)
    }
}

#[derive(Debug, Clone)]
pub struct Ingestor {
    counts: DecayedCounts,
    measure: AssociationMeasure,
    dictionary: EntityDictionary,
    weights: HashMap<(Vertex, Vertex), f64>,
    partners: HashMap<Vertex, BTreeSet<Vertex>>,
    next_seq: u64,
}

impl Ingestor {
    pub fn new(measure: AssociationMeasure, mean_life: f64) -> Self {
        Ingestor {
            counts: DecayedCounts::new(mean_life),
            measure,
            dictionary: EntityDictionary::new(),
            weights: HashMap::new(),
            partners: HashMap::new(),
            next_seq: 0,
        }
    }

    pub fn with_dictionary(mut self, dictionary: EntityDictionary) -> Self {
        self.dictionary = dictionary;
        self
    }

    pub fn counts(&self) -> &DecayedCounts {
        &self.counts
    }

    pub fn dictionary(&self) -> &EntityDictionary {
        &self.dictionary
    }

    pub fn measure(&self) -> AssociationMeasure {
        self.measure
    }

    /// Current weight of the edge as emitted so far.
    pub fn weight(&self, a: Vertex, b: Vertex) -> f64 {
        self.weights.get(&(a.min(b), a.max(b))).copied().unwrap_or(0.0)
    }

    /// Emitted edges with positive weight, sorted.
    pub fn edges(&self) -> Vec<(Vertex, Vertex, f64)> {
        let mut out: Vec<_> = self.weights.iter().map(|(&(a, b), &w)| (a, b, w)).collect();
        out.sort_by_key(|&(a, b, _)| (a, b));
        out
    }

    /// Observes one document and returns the resulting updates.
    pub fn observe(&mut self, doc: &Document) -> Result<Vec<EdgeUpdate>> {
        let ids: BTreeSet<Vertex> = doc.entities.iter().map(|e| self.dictionary.intern(e)).collect();
        let ids: Vec<Vertex> = ids.into_iter().collect();
        self.observe_ids(doc.timestamp as f64, &ids)
    }

    /// As `observe`, with entities already mapped to sorted distinct ids.
    pub fn observe_ids(&mut self, t: f64, ids: &[Vertex]) -> Result<Vec<EdgeUpdate>> {
        self.counts.observe(t, ids)?;
        for (i, &a) in ids.iter().enumerate() {
            for &b in &ids[i + 1..] {
                self.partners.entry(a).or_default().insert(b);
                self.partners.entry(b).or_default().insert(a);
            }
        }
        Ok(self.flush(ids))
    }

    /// Recomputes every edge incident to `ids`.
    fn flush(&mut self, ids: &[Vertex]) -> Vec<EdgeUpdate> {
        let mut pairs = BTreeSet::new();
        for &e in ids {
            for &x in self.partners.get(&e).into_iter().flatten() {
                pairs.insert((e.min(x), e.max(x)));
            }
        }
        let mut out = Vec::new();
        for (a, b) in pairs {
            let new = self.stale_weight(a, b);
            let old = self.weight(a, b);
            let delta = new - old;
            if delta.abs() <= EPSILON {
                continue;
            }
            if new > 0.0 {
                self.weights.insert((a, b), new);
            } else {
                self.weights.remove(&(a, b));
            }
            out.push(EdgeUpdate::new(self.next_seq, a, b, delta));
            self.next_seq += 1;
        }
        out
    }

    fn stale_weight(&self, a: Vertex, b: Vertex) -> f64 {
        self.counts.stale_counts(a, b).map_or(0.0, |c| self.measure.weight(c.n1, c.n2, c.n12, c.total))
    }

    /// Weight recomputed from all documents up to `t`.
    pub fn exact_weight(&self, a: Vertex, b: Vertex, t: f64) -> f64 {
        let c = self.counts.exact_counts(a, b, t);
        self.measure.weight(c.n1, c.n2, c.n12, c.total)
    }
}

/// Knobs for a synthetic document stream with recurring topics.
#[derive(Debug, Clone)]
pub struct DocumentSpec {
    pub entities: usize,
    pub documents: usize,
    pub topics: usize,
    pub topic_size: usize,
    /// Probability that a document is drawn from a topic.
    pub topic_prob: f64,
    /// Mean gap between documents in seconds.
    pub mean_gap: f64,
    pub seed: u64,
}

impl DocumentSpec {
    pub fn new(entities: usize, documents: usize, seed: u64) -> Self {
        DocumentSpec { entities, documents, topics: 8, topic_size: 4, topic_prob: 0.6, mean_gap: 30.0, seed }
    }
}

pub fn synthetic_documents(spec: &DocumentSpec) -> Result<Vec<Document>> {
    if spec.entities < spec.topics * spec.topic_size || spec.entities < 3 {
        return Err(Error::InvalidWorkload("topics exceed the entity count".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut t = 0.0f64;
    let mut docs = Vec::with_capacity(spec.documents);
    for _ in 0..spec.documents {
        t += -spec.mean_gap * (1.0 - rng.gen::<f64>()).ln();
        let mut picked = BTreeSet::new();
        if spec.topics > 0 && rng.gen_bool(spec.topic_prob) {
            let base = rng.gen_range(0..spec.topics) * spec.topic_size;
            let k = rng.gen_range(2..=spec.topic_size.max(2));
            while picked.len() < k.min(spec.topic_size) {
                picked.insert(base + rng.gen_range(0..spec.topic_size));
            }
        }
        for _ in 0..rng.gen_range(0..=2) {
            picked.insert(rng.gen_range(0..spec.entities));
        }
        docs.push(Document { timestamp: t as u64, entities: picked.into_iter().map(|i| format!("e{i}")).collect() });
    }
    Ok(docs)
}

/// Absolute error between maintained and fully recomputed weights.
#[derive(Debug, Clone, PartialEq)]
pub struct StalenessReport {
    pub checkpoints: usize,
    pub samples: usize,
    pub median: f64,
    pub mean: f64,
    pub max: f64,
}

/// Replays `docs`, and every `every` documents compares each co-occurring
/// pair's maintained weight with its full recomputation.
pub fn staleness_error(
    docs: &[Document],
    measure: AssociationMeasure,
    mean_life: f64,
    every: usize,
) -> Result<StalenessReport> {
    assert!(every > 0, "checkpoint cadence must be positive");
    let mut ing = Ingestor::new(measure, mean_life);
    let mut errors = Vec::new();
    let mut checkpoints = 0;
    for (i, doc) in docs.iter().enumerate() {
        ing.observe(doc)?;
        if (i + 1) % every == 0 {
            checkpoints += 1;
            let t = ing.counts.now();
            for (a, b) in ing.counts.pairs() {
                errors.push((ing.weight(a, b) - ing.exact_weight(a, b, t)).abs());
            }
        }
    }
    errors.sort_by(f64::total_cmp);
    let n = errors.len();
    let median = match n {
        0 => 0.0,
        _ if n % 2 == 1 => errors[n / 2],
        _ => 0.5 * (errors[n / 2 - 1] + errors[n / 2]),
    };
    Ok(StalenessReport {
        checkpoints,
        samples: n,
        median,
        mean: if n == 0 { 0.0 } else { errors.iter().sum::<f64>() / n as f64 },
        max: errors.last().copied().unwrap_or(0.0),
    })
}
