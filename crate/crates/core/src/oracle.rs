//! Ground truth by recomputation from a graph snapshot.
//!
//! Two independent strategies are provided and must agree: exhaustive
//! enumeration of every candidate subset, and level-wise growth from dense
//! pairs. Neither shares code with the incremental engine beyond the
//! density configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::density::{DensityConfig, EPSILON};
use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::Vertex;

pub type DenseMap = BTreeMap<Vec<Vertex>, f64>;

/// Default bound on subsets examined per call.
pub const DEFAULT_LIMIT: u64 = 5_000_000;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct OracleResult {
    /// Every `C` with `dens(C) >= T_|C|`, keyed by sorted vertex set.
    pub dense: DenseMap,
    /// The members of `dense` with `dens(C) >= T`.
    pub output: DenseMap,
}

impl OracleResult {
    fn from_dense(cfg: &DensityConfig, dense: DenseMap) -> Self {
        let output = dense
            .iter()
            .filter(|(s, &d)| d >= cfg.threshold() - EPSILON && s.len() >= 2)
            .map(|(s, &d)| (s.clone(), d))
            .collect();
        OracleResult { dense, output }
    }
}

/// Symmetric weight matrix over a vertex pool.
struct Matrix {
    n: usize,
    w: Vec<f64>,
}

impl Matrix {
    fn new(graph: &WeightedGraph, pool: &[Vertex]) -> Self {
        let n = pool.len();
        let mut w = vec![0.0; n * n];
        for (i, &u) in pool.iter().enumerate() {
            for (j, &v) in pool.iter().enumerate() {
                if i != j {
                    w[i * n + j] = graph.weight(u, v);
                }
            }
        }
        Matrix { n, w }
    }

    fn at(&self, i: usize, j: usize) -> f64 {
        self.w[i * self.n + j]
    }
}

fn binomial_sum(n: u64, kmax: u64) -> u64 {
    let mut total: u64 = 0;
    let mut c: u64 = 1;
    for k in 0..=kmax.min(n) {
        total = total.saturating_add(c);
        c = c.saturating_mul(n - k) / (k + 1);
    }
    total
}

/// Exhaustive enumeration. Subsets of the active vertices are enumerated
/// directly; inactive vertices contribute no weight, so every dense set is a
/// dense active core padded with inactive vertices while it stays dense.
pub fn exhaustive(graph: &WeightedGraph, cfg: &DensityConfig, limit: u64) -> Result<OracleResult> {
    let nmax = cfg.max_cardinality();
    let active: Vec<Vertex> = graph.active_vertices().collect();
    let cost = binomial_sum(active.len() as u64, nmax as u64);
    if cost > limit {
        return Err(Error::OracleLimit(format!("{} active vertices need {cost} subsets, limit {limit}", active.len())));
    }
    let m = Matrix::new(graph, &active);
    let mut cores: Vec<(Vec<Vertex>, f64)> = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(nmax);
    enumerate(&m, cfg, 0, 0.0, &mut chosen, &active, &mut cores);

    let inactive: Vec<Vertex> = (1..=graph.universe()).filter(|&v| graph.degree(v) == 0).collect();
    let mut dense = DenseMap::new();
    for (core, score) in cores {
        let mut k = 0;
        while core.len() + k <= nmax && cfg.is_dense(core.len() + k, score) {
            let padded_cost = binomial_sum(inactive.len() as u64, k as u64);
            if padded_cost > limit {
                return Err(Error::OracleLimit(format!("padding {core:?} needs {padded_cost} sets")));
            }
            let n = core.len() + k;
            let density = cfg.density(n, score);
            for_each_combination(&inactive, k, &mut |pad| {
                let mut set: Vec<Vertex> = core.iter().chain(pad.iter()).copied().collect();
                set.sort_unstable();
                dense.insert(set, density);
            });
            k += 1;
        }
    }
    Ok(OracleResult::from_dense(cfg, dense))
}

fn enumerate(
    m: &Matrix,
    cfg: &DensityConfig,
    start: usize,
    score: f64,
    chosen: &mut Vec<usize>,
    pool: &[Vertex],
    out: &mut Vec<(Vec<Vertex>, f64)>,
) {
    if chosen.len() >= 2 && cfg.is_dense(chosen.len(), score) {
        out.push((chosen.iter().map(|&i| pool[i]).collect(), score));
    }
    if chosen.len() == cfg.max_cardinality() {
        return;
    }
    for next in start..m.n {
        let gain: f64 = chosen.iter().map(|&i| m.at(i, next)).sum();
        chosen.push(next);
        enumerate(m, cfg, next + 1, score + gain, chosen, pool, out);
        chosen.pop();
    }
}

fn for_each_combination(items: &[Vertex], k: usize, f: &mut dyn FnMut(&[Vertex])) {
    fn rec(items: &[Vertex], k: usize, start: usize, acc: &mut Vec<Vertex>, f: &mut dyn FnMut(&[Vertex])) {
        if acc.len() == k {
            f(acc);
            return;
        }
        let need = k - acc.len();
        for i in start..items.len() {
            if items.len() - i < need {
                break;
            }
            acc.push(items[i]);
            rec(items, k, i + 1, acc, f);
            acc.pop();
        }
    }
    rec(items, k, 0, &mut Vec::with_capacity(k), f);
}

/// Level-wise growth over the full universe: dense pairs, then every
/// single-vertex extension of each dense set at the previous level.
pub fn growth(graph: &WeightedGraph, cfg: &DensityConfig, limit: u64) -> Result<OracleResult> {
    let universe = graph.universe();
    let mut level: BTreeSet<Vec<Vertex>> =
        graph.edges().filter(|&(_, _, w)| cfg.is_dense(2, w)).map(|(u, v, _)| vec![u, v]).collect();
    let mut dense = DenseMap::new();
    let mut examined: u64 = 0;
    let mut n = 2;
    while !level.is_empty() {
        let mut next = BTreeSet::new();
        for set in &level {
            let score = graph.subgraph_score(set);
            dense.insert(set.clone(), cfg.density(n, score));
            if n == cfg.max_cardinality() {
                continue;
            }
            for y in 1..=universe {
                if set.binary_search(&y).is_ok() {
                    continue;
                }
                examined += 1;
                if examined > limit {
                    return Err(Error::OracleLimit(format!("growth examined more than {limit} sets")));
                }
                let ext_score = score + graph.weight_into(set, y);
                if cfg.is_dense(n + 1, ext_score) {
                    let mut ext = set.clone();
                    let pos = ext.binary_search(&y).unwrap_err();
                    ext.insert(pos, y);
                    next.insert(ext);
                }
            }
        }
        level = next;
        n += 1;
    }
    Ok(OracleResult::from_dense(cfg, dense))
}

/// Runs both strategies and errors if they disagree.
pub fn brute_force_dense(graph: &WeightedGraph, cfg: &DensityConfig, limit: u64) -> Result<OracleResult> {
    let a = exhaustive(graph, cfg, limit)?;
    let b = growth(graph, cfg, limit)?;
    if let Some(d) = diff(&a.dense, &b.dense).into_iter().next() {
        return Err(Error::OracleDisagreement(d.to_string()));
    }
    Ok(a)
}

#[derive(Debug, Clone, PartialEq)]
pub enum Discrepancy {
    /// In the oracle view but not the engine view.
    Missing {
        set: Vec<Vertex>,
        density: f64,
    },
    /// In the engine view but not the oracle view.
    Extra {
        set: Vec<Vertex>,
        density: f64,
    },
    DensityMismatch {
        set: Vec<Vertex>,
        engine: f64,
        oracle: f64,
    },
}

fn join(set: &[Vertex]) -> String {
    set.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

impl fmt::Display for Discrepancy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Discrepancy::Missing { set, density } => write!(f, "MISSING {} density {density:.9}", join(set)),
            Discrepancy::Extra { set, density } => write!(f, "EXTRA {} density {density:.9}", join(set)),
            Discrepancy::DensityMismatch { set, engine, oracle } => {
                write!(f, "MISMATCH {} engine {engine:.12} oracle {oracle:.12}", join(set))
            }
        }
    }
}

/// Set difference in both directions plus density mismatches beyond
/// `EPSILON`, in vertex-set order.
pub fn diff(engine: &DenseMap, oracle: &DenseMap) -> Vec<Discrepancy> {
    let mut out = Vec::new();
    for (set, &o) in oracle {
        match engine.get(set) {
            None => out.push(Discrepancy::Missing { set: set.clone(), density: o }),
            Some(&e) if (e - o).abs() > EPSILON => {
                out.push(Discrepancy::DensityMismatch { set: set.clone(), engine: e, oracle: o })
            }
            Some(_) => {}
        }
    }
    for (set, &e) in engine {
        if !oracle.contains_key(set) {
            out.push(Discrepancy::Extra { set: set.clone(), density: e });
        }
    }
    out.sort_by(|x, y| key(x).cmp(key(y)));
    out
}

fn key(d: &Discrepancy) -> &Vec<Vertex> {
    match d {
        Discrepancy::Missing { set, .. }
        | Discrepancy::Extra { set, .. }
        | Discrepancy::DensityMismatch { set, .. } => set,
    }
}
