//! Drivers behind the command-line tool: stream runs, oracle verification
//! and star-versus-explicit benchmarking.

use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;
use std::sync::mpsc;
use std::thread;
use std::time::{Duration, Instant};

use crate::density::{delta_it_upper, DensityConfig, DensityFamily};
use crate::engine::{Engine, EngineOptions};
use crate::error::{Error, Result};
use crate::format::{format_event, join_vertices, UpdateReader};
use crate::graph::EdgeUpdate;
use crate::oracle::{brute_force_dense, diff, DenseMap};
use crate::Vertex;

/// Updates per message on the reader channel.
const BATCH: usize = 512;
/// Batches the reader may run ahead of the engine.
const QUEUE_DEPTH: usize = 64;

/// `delta_it` as an absolute value or a fraction of its upper bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaIt {
    Absolute(f64),
    Fraction(f64),
}

impl Default for DeltaIt {
    fn default() -> Self {
        DeltaIt::Fraction(0.01)
    }
}

impl FromStr for DeltaIt {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        let s = s.trim();
        let bad = || format!("invalid delta-it {s:?} (expected a number or N%)");
        match s.strip_suffix('%') {
            Some(pct) => pct.trim().parse::<f64>().map(|p| DeltaIt::Fraction(p / 100.0)).map_err(|_| bad()),
            None => s.parse().map(DeltaIt::Absolute).map_err(|_| bad()),
        }
    }
}

impl fmt::Display for DeltaIt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DeltaIt::Absolute(v) => write!(f, "{v}"),
            DeltaIt::Fraction(p) => write!(f, "{}%", p * 100.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub family: DensityFamily,
    pub threshold: f64,
    pub max_cardinality: usize,
    pub delta_it: DeltaIt,
    /// Explicit `T_2..=T_{N_max}`.
    pub thresholds: Option<Vec<f64>>,
    pub star_mode: bool,
    /// Include implicit star members in reports.
    pub expand: bool,
    /// Vertex universe; scanned from the input when absent.
    pub vertices: Option<Vertex>,
    /// Report or verify every this many updates.
    pub checkpoint_every: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            family: DensityFamily::AvgWeight,
            threshold: 1.0,
            max_cardinality: 5,
            delta_it: DeltaIt::default(),
            thresholds: None,
            star_mode: true,
            expand: false,
            vertices: None,
            checkpoint_every: None,
        }
    }
}

impl RunConfig {
    pub fn density_config(&self) -> Result<DensityConfig> {
        let dit = match self.delta_it {
            DeltaIt::Absolute(v) => v,
            DeltaIt::Fraction(p) => p * delta_it_upper(self.family, self.threshold, self.max_cardinality)?,
        };
        match &self.thresholds {
            None => DensityConfig::new(self.family, self.threshold, self.max_cardinality, dit),
            Some(ts) => DensityConfig::with_thresholds(self.family, self.threshold, self.max_cardinality, dit, ts),
        }
    }

    pub fn engine_options(&self) -> EngineOptions {
        EngineOptions { star_mode: self.star_mode, ..EngineOptions::default() }
    }

    pub fn label(&self) -> String {
        format!("{} T={} N={} dit={}", self.family, self.threshold, self.max_cardinality, self.delta_it)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub updates: u64,
    pub events: u64,
    pub peak_entries: usize,
    pub final_entries: usize,
    pub stars: usize,
    pub wall: Duration,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "updates {} events {} peak_entries {} final_entries {} stars {} wall {:.3}s",
            self.updates,
            self.events,
            self.peak_entries,
            self.final_entries,
            self.stars,
            self.wall.as_secs_f64()
        )
    }
}

/// Largest vertex id in an update file, at least 1.
pub fn scan_universe(path: &Path) -> Result<Vertex> {
    let mut max = 1;
    for item in UpdateReader::new(BufReader::new(File::open(path)?)) {
        let (_, u) = item?;
        max = max.max(u.a).max(u.b);
    }
    Ok(max)
}

fn at_line(line: usize, err: Error) -> Error {
    match err {
        Error::Parse { .. } => err,
        other => Error::Parse { line, message: other.to_string() },
    }
}

/// Writes output-dense subgraphs as `<density> <v1,v2,...>` lines.
pub fn write_snapshot<W: Write + ?Sized>(out: &mut W, snapshot: &DenseMap) -> Result<()> {
    for (set, density) in snapshot {
        writeln!(out, "{density:.9} {}", join_vertices(set))?;
    }
    Ok(())
}

/// Feeds `input` through an engine, writing one line per event. A reader
/// thread parses ahead through a bounded channel. With a report sink, the
/// output-dense snapshot is written at each checkpoint and at the end.
pub fn run_stream<R, W>(
    cfg: &RunConfig,
    universe: Vertex,
    input: R,
    mut events: W,
    mut report: Option<&mut dyn Write>,
) -> Result<RunSummary>
where
    R: BufRead + Send + 'static,
    W: Write,
{
    let dcfg = cfg.density_config()?;
    let mut engine = Engine::new(dcfg, universe, cfg.engine_options());
    let start = Instant::now();
    let (tx, rx) = mpsc::sync_channel::<Vec<Result<(usize, EdgeUpdate)>>>(QUEUE_DEPTH);
    let reader = thread::spawn(move || {
        let mut batch = Vec::with_capacity(BATCH);
        for item in UpdateReader::new(input) {
            let stop = item.is_err();
            batch.push(item);
            if (batch.len() == BATCH || stop) && (tx.send(std::mem::take(&mut batch)).is_err() || stop) {
                return;
            }
        }
        if !batch.is_empty() {
            let _ = tx.send(batch);
        }
    });
    let mut n = 0u64;
    let mut emitted = 0u64;
    let result = (|| -> Result<()> {
        for batch in rx.iter() {
            for item in batch {
                let (line, u) = item?;
                let evs = engine.process(&u).map_err(|e| at_line(line, e))?;
                for e in &evs {
                    writeln!(events, "{}", format_event(e))?;
                }
                emitted += evs.len() as u64;
                n += 1;
                if let (Some(k), Some(r)) = (cfg.checkpoint_every, report.as_deref_mut()) {
                    if k > 0 && n.is_multiple_of(k as u64) {
                        writeln!(r, "# after {}", u.seq)?;
                        write_snapshot(r, &engine.snapshot(cfg.expand))?;
                    }
                }
            }
        }
        Ok(())
    })();
    drop(rx);
    reader.join().expect("reader thread panicked");
    result?;
    if let Some(r) = report {
        writeln!(r, "# final")?;
        write_snapshot(r, &engine.snapshot(cfg.expand))?;
    }
    events.flush()?;
    Ok(RunSummary {
        updates: n,
        events: emitted,
        peak_entries: engine.stats().peak_entries,
        final_entries: engine.index().len(),
        stars: engine.index().star_count(),
        wall: start.elapsed(),
    })
}

/// Opens `input`, scanning the universe if the config leaves it open.
pub fn run_file<W: Write>(
    cfg: &RunConfig,
    input: &Path,
    events: W,
    report: Option<&mut dyn Write>,
) -> Result<RunSummary> {
    let universe = match cfg.vertices {
        Some(v) => v,
        None => scan_universe(input)?,
    };
    let reader = BufReader::new(File::open(input)?);
    run_stream(cfg, universe, reader, events, report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyFailure {
    pub seq: u64,
    /// Which view disagreed: `dense`, `output` or `audit`.
    pub view: &'static str,
    pub detail: String,
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "after update {} ({} view): {}", self.seq, self.view, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub updates: usize,
    pub checkpoints: usize,
    pub failure: Option<VerifyFailure>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }
}

/// Replays `updates` and compares the engine's expanded dense and
/// output-dense views with the oracle every `every` updates and at the end.
/// Stops at the first discrepancy.
pub fn verify(
    dcfg: &DensityConfig,
    opts: EngineOptions,
    updates: &[EdgeUpdate],
    universe: Vertex,
    every: usize,
    limit: u64,
) -> Result<VerifyReport> {
    let every = every.max(1);
    let mut engine = Engine::new(dcfg.clone(), universe, opts);
    let mut checkpoints = 0;
    let check = |engine: &Engine, seq: u64| -> Result<Option<VerifyFailure>> {
        if let Err(detail) = engine.audit() {
            return Ok(Some(VerifyFailure { seq, view: "audit", detail }));
        }
        let oracle = brute_force_dense(engine.graph(), dcfg, limit)?;
        for (view, mine, theirs) in
            [("dense", engine.dense_snapshot(true), &oracle.dense), ("output", engine.snapshot(true), &oracle.output)]
        {
            if let Some(d) = diff(&mine, theirs).first() {
                return Ok(Some(VerifyFailure { seq, view, detail: d.to_string() }));
            }
        }
        Ok(None)
    };
    for (i, u) in updates.iter().enumerate() {
        engine.process(u)?;
        if (i + 1) % every == 0 || i + 1 == updates.len() {
            checkpoints += 1;
            if let Some(failure) = check(&engine, u.seq)? {
                return Ok(VerifyReport { updates: i + 1, checkpoints, failure: Some(failure) });
            }
        }
    }
    Ok(VerifyReport { updates: updates.len(), checkpoints, failure: None })
}

/// Middle sample after sorting (lower middle for an even count).
pub fn median(samples: &[Duration]) -> Duration {
    let mut s = samples.to_vec();
    s.sort();
    s.get((s.len().max(1) - 1) / 2).copied().unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub label: String,
    pub star: Duration,
    pub explicit: Option<Duration>,
    pub events: u64,
    pub peak_entries: usize,
    /// Expanded dense views of the two modes agree.
    pub identical: Option<bool>,
}

impl BenchRow {
    pub const HEADER: &'static str = "config\tstar_ms\texplicit_ms\tspeedup\tevents\tpeak_entries\tidentical";

    pub fn speedup(&self) -> Option<f64> {
        self.explicit.map(|e| e.as_secs_f64() / self.star.as_secs_f64().max(1e-9))
    }
}

impl fmt::Display for BenchRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ms = |d: Duration| format!("{:.3}", d.as_secs_f64() * 1e3);
        let dash = || "-".to_string();
        write!(
            f,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.label,
            ms(self.star),
            self.explicit.map_or_else(dash, ms),
            self.speedup().map_or_else(dash, |s| format!("{s:.2}")),
            self.events,
            self.peak_entries,
            self.identical.map_or_else(dash, |b| b.to_string()),
        )
    }
}

struct Timed {
    elapsed: Duration,
    events: u64,
    peak: usize,
    view: DenseMap,
}

fn timed_run(dcfg: &DensityConfig, opts: EngineOptions, updates: &[EdgeUpdate], universe: Vertex) -> Result<Timed> {
    let mut engine = Engine::new(dcfg.clone(), universe, opts);
    let start = Instant::now();
    let mut events = 0u64;
    for u in updates {
        events += engine.process(u)?.len() as u64;
    }
    let elapsed = start.elapsed();
    Ok(Timed { elapsed, events, peak: engine.stats().peak_entries, view: engine.dense_snapshot(true) })
}

/// Median-of-`runs` timing of star mode and, with `compare`, of explicit
/// mode on the same stream.
pub fn bench(
    cfg: &RunConfig,
    updates: &[EdgeUpdate],
    universe: Vertex,
    runs: usize,
    compare: bool,
) -> Result<BenchRow> {
    let dcfg = cfg.density_config()?;
    let runs = runs.max(1);
    let mut star_times = Vec::with_capacity(runs);
    let mut last = None;
    for _ in 0..runs {
        let t = timed_run(&dcfg, EngineOptions::default(), updates, universe)?;
        star_times.push(t.elapsed);
        last = Some(t);
    }
    let star = last.expect("at least one run");
    let (explicit, identical) = if compare {
        let opts = EngineOptions { star_mode: false, ..EngineOptions::default() };
        let mut times = Vec::with_capacity(runs);
        let mut same = true;
        for _ in 0..runs {
            let t = timed_run(&dcfg, opts, updates, universe)?;
            times.push(t.elapsed);
            same &= t.view == star.view;
        }
        (Some(median(&times)), Some(same))
    } else {
        (None, None)
    };
    Ok(BenchRow {
        label: cfg.label(),
        star: median(&star_times),
        explicit,
        events: star.events,
        peak_entries: star.peak,
        identical,
    })
}
