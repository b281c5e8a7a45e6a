use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use dyndens::density::DensityFamily;
use dyndens::engine::EventKind;
use dyndens::format::{read_documents, read_events, read_updates, write_updates};
use dyndens::ingest::{staleness_error, AssociationMeasure, Ingestor, DEFAULT_MEAN_LIFE};
use dyndens::oracle::DEFAULT_LIMIT;
use dyndens::rerank::{rerank_diverse, Story, DEFAULT_PENALTY};
use dyndens::runner::{bench, run_file, scan_universe, verify, BenchRow, DeltaIt, RunConfig};
use dyndens::workload::{fuzz_stream, generate, planted_too_dense, FuzzSpec, SyntheticSpec, TooDenseSpec};
use dyndens::{Error, Result};

#[derive(Parser)]
#[command(name = "dyndens", version, about = "Dense subgraph maintenance over edge-weight update streams")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Process an update stream and write density events.
    Run(RunArgs),
    /// Check the engine against the brute-force oracle.
    Verify(VerifyArgs),
    /// Time star mode against explicit mode.
    Bench(BenchArgs),
    /// Generate a synthetic update stream.
    Gen(GenArgs),
    /// Rerank the stories alive at the end of an events file.
    Top(TopArgs),
    /// Convert a document stream into an update stream.
    Ingest(IngestArgs),
}

#[derive(Args, Clone)]
struct DensityArgs {
    #[arg(long, default_value = "avgweight")]
    density: DensityFamily,
    /// Output threshold T. Defaults to the last explicit threshold, else 1.
    #[arg(long)]
    threshold: Option<f64>,
    #[arg(long, default_value_t = 5)]
    nmax: usize,
    /// Absolute value or a percentage of the admissible maximum.
    #[arg(long = "delta-it", default_value = "1%")]
    delta_it: DeltaIt,
    /// Explicit T_2,...,T_nmax.
    #[arg(long, value_delimiter = ',')]
    thresholds: Option<Vec<f64>>,
    /// Materialize every too-dense extension instead of using star entries.
    #[arg(long)]
    no_star: bool,
    /// Vertex universe size; defaults to the largest id in the input, or
    /// 10000 for `gen`.
    #[arg(long)]
    vertices: Option<u32>,
}

impl DensityArgs {
    fn config(&self) -> RunConfig {
        let threshold =
            self.threshold.or_else(|| self.thresholds.as_ref().and_then(|t| t.last().copied())).unwrap_or(1.0);
        RunConfig {
            family: self.density,
            threshold,
            max_cardinality: self.nmax,
            delta_it: self.delta_it,
            thresholds: self.thresholds.clone(),
            star_mode: !self.no_star,
            vertices: self.vertices,
            ..RunConfig::default()
        }
    }
}

#[derive(Args)]
struct RunArgs {
    input: PathBuf,
    #[command(flatten)]
    density: DensityArgs,
    /// Events file; stdout when absent.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Write output-dense snapshots to this file.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Expand star entries in reports.
    #[arg(long)]
    expand: bool,
    /// Write a report snapshot every this many updates.
    #[arg(long)]
    checkpoint_every: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    input: PathBuf,
    #[command(flatten)]
    density: DensityArgs,
    #[arg(long, default_value_t = 1)]
    checkpoint_every: usize,
    /// Oracle work cap in candidate subsets per checkpoint.
    #[arg(long, default_value_t = DEFAULT_LIMIT)]
    limit: u64,
}

#[derive(Args)]
struct BenchArgs {
    input: PathBuf,
    #[command(flatten)]
    density: DensityArgs,
    #[arg(long, default_value_t = 3)]
    runs: usize,
    /// Skip the explicit-mode comparison.
    #[arg(long)]
    star_only: bool,
    /// Grid over thresholds T.
    #[arg(long, value_delimiter = ',')]
    sweep_threshold: Vec<f64>,
    /// Grid over N_max.
    #[arg(long, value_delimiter = ',')]
    sweep_nmax: Vec<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Recipe {
    /// Planted sets over a uniform background.
    Planted,
    /// Heavy cliques kept too-dense over background noise.
    TooDense,
    /// Small-graph stream for oracle comparisons.
    Fuzz,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value = "planted")]
    recipe: Recipe,
    #[arg(long, default_value_t = 25_000)]
    updates: usize,
    #[arg(long, default_value_t = 10)]
    sets: usize,
    #[arg(long, default_value_t = 10)]
    set_size: usize,
    #[arg(long, default_value_t = 0.9)]
    planted_prob: f64,
    #[arg(long, default_value_t = 0.3)]
    negative_prob: f64,
    #[arg(long, default_value_t = 0.1)]
    max_magnitude: f64,
    /// Clique edge weight for the too-dense recipe.
    #[arg(long, default_value_t = 2.5)]
    clique_weight: f64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Resample updates that would create a too-dense subgraph under the
    /// density flags.
    #[arg(long)]
    reject_too_dense: bool,
    #[command(flatten)]
    density: DensityArgs,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TopArgs {
    /// Events file.
    input: PathBuf,
    #[arg(long, default_value_t = DEFAULT_PENALTY)]
    penalty: f64,
    #[arg(long, short, default_value_t = 10)]
    k: usize,
    /// Entity dictionary written by `ingest`, one name per line.
    #[arg(long)]
    dictionary: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Measure {
    Llr,
    Chi2,
}

#[derive(Args)]
struct IngestArgs {
    /// Document stream: `<timestamp>\t<entity>,<entity>...` per line.
    input: PathBuf,
    #[arg(long, value_enum, default_value = "chi2")]
    measure: Measure,
    #[arg(long, conflicts_with = "half_life_secs")]
    mean_life_secs: Option<f64>,
    /// Converted to a mean life by dividing by ln 2.
    #[arg(long)]
    half_life_secs: Option<f64>,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Where to write the entity dictionary.
    #[arg(long)]
    dictionary: Option<PathBuf>,
    /// Also report staleness error, sampling every this many documents.
    #[arg(long)]
    staleness_every: Option<usize>,
}

const DEFAULT_GEN_VERTICES: u32 = 10_000;

fn open_out(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn read_update_file(path: &Path) -> Result<Vec<dyndens::EdgeUpdate>> {
    read_updates(BufReader::new(File::open(path)?))
}

fn universe(cfg: &RunConfig, path: &Path) -> Result<u32> {
    cfg.vertices.map_or_else(|| scan_universe(path), Ok)
}

fn cmd_run(a: RunArgs) -> Result<ExitCode> {
    let cfg = RunConfig { expand: a.expand, checkpoint_every: a.checkpoint_every, ..a.density.config() };
    cfg.density_config()?;
    let events = open_out(a.output.as_deref())?;
    let mut report = a.report.as_deref().map(File::create).transpose()?.map(BufWriter::new);
    let summary = run_file(&cfg, &a.input, events, report.as_mut().map(|r| r as &mut dyn Write))?;
    if let Some(r) = report.as_mut() {
        r.flush()?;
    }
    eprintln!("{summary}");
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let cfg = a.density.config();
    let dcfg = cfg.density_config()?;
    let updates = read_update_file(&a.input)?;
    let universe = universe(&cfg, &a.input)?;
    let report = verify(&dcfg, cfg.engine_options(), &updates, universe, a.checkpoint_every, a.limit)?;
    match &report.failure {
        None => {
            println!("PASS {} updates, {} checkpoints", report.updates, report.checkpoints);
            Ok(ExitCode::SUCCESS)
        }
        Some(f) => {
            println!("FAIL {f}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_bench(a: BenchArgs) -> Result<ExitCode> {
    let base = a.density.config();
    let updates = read_update_file(&a.input)?;
    let universe = universe(&base, &a.input)?;
    let thresholds = if a.sweep_threshold.is_empty() { vec![base.threshold] } else { a.sweep_threshold.clone() };
    let nmaxes = if a.sweep_nmax.is_empty() { vec![base.max_cardinality] } else { a.sweep_nmax.clone() };
    println!("{}", BenchRow::HEADER);
    for &threshold in &thresholds {
        for &max_cardinality in &nmaxes {
            let cfg = RunConfig { threshold, max_cardinality, ..base.clone() };
            let row = bench(&cfg, &updates, universe, a.runs, !a.star_only)?;
            println!("{row}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_gen(a: GenArgs) -> Result<ExitCode> {
    let vertices = a.density.vertices.unwrap_or(DEFAULT_GEN_VERTICES);
    let stream = match a.recipe {
        Recipe::Planted => {
            let gate = if a.reject_too_dense { Some(a.density.config().density_config()?) } else { None };
            let spec = SyntheticSpec {
                vertices,
                updates: a.updates,
                max_magnitude: a.max_magnitude,
                negative_prob: a.negative_prob,
                planted_prob: a.planted_prob,
                planted_sets: a.sets,
                planted_size: a.set_size,
                gate,
                seed: a.seed,
            };
            let (stream, report) = generate(&spec)?;
            eprintln!(
                "generated {} updates: {} negative, {} planted, {} rejected, {} negative fallbacks",
                stream.len(),
                report.negatives,
                report.planted,
                report.rejected,
                report.negative_fallbacks
            );
            stream
        }
        Recipe::TooDense => {
            let mut spec = TooDenseSpec::new(vertices, a.sets, a.set_size, a.clique_weight, a.updates, a.seed);
            spec.max_magnitude = a.max_magnitude;
            spec.negative_prob = a.negative_prob;
            planted_too_dense(&spec)?
        }
        Recipe::Fuzz => {
            let mut spec = FuzzSpec::new(vertices, a.updates, 0.01 * a.max_magnitude, a.max_magnitude, a.seed);
            spec.negative_prob = a.negative_prob;
            fuzz_stream(&spec)?
        }
    };
    let mut out = open_out(a.output.as_deref())?;
    write_updates(&mut out, &stream)?;
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_top(a: TopArgs) -> Result<ExitCode> {
    let events = read_events(BufReader::new(File::open(&a.input)?))?;
    let mut alive: BTreeMap<Vec<u32>, f64> = BTreeMap::new();
    for e in events {
        match e.kind {
            EventKind::Gain => alive.insert(e.vertices, e.density),
            EventKind::Lose => alive.remove(&e.vertices),
        };
    }
    let dictionary = match &a.dictionary {
        Some(p) => Some(dyndens::ingest::EntityDictionary::read_from(BufReader::new(File::open(p)?))?),
        None => None,
    };
    let stories: Vec<Story> = alive.into_iter().map(|(v, d)| Story::new(v, d)).collect();
    let mut out = io::stdout().lock();
    for r in rerank_diverse(&stories, a.penalty)?.into_iter().take(a.k) {
        let names: Vec<String> = r
            .story
            .vertices
            .iter()
            .map(|&v| match &dictionary {
                Some(d) => d.name(v).map_or_else(|| v.to_string(), str::to_string),
                None => v.to_string(),
            })
            .collect();
        writeln!(out, "{:.9} {:.9} {:.3} {}", r.score, r.story.density, r.multiplier, names.join(","))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ingest(a: IngestArgs) -> Result<ExitCode> {
    let mean_life = match (a.mean_life_secs, a.half_life_secs) {
        (Some(m), _) => m,
        (None, Some(h)) => h / std::f64::consts::LN_2,
        (None, None) => DEFAULT_MEAN_LIFE,
    };
    if !(mean_life > 0.0 && mean_life.is_finite()) {
        return Err(Error::InvalidWorkload(format!("mean life must be positive, got {mean_life}")));
    }
    let measure = match a.measure {
        Measure::Llr => AssociationMeasure::llr(),
        Measure::Chi2 => AssociationMeasure::chi2(),
    };
    let docs = read_documents(BufReader::new(File::open(&a.input)?))?;
    let mut ing = Ingestor::new(measure, mean_life);
    let mut updates = Vec::new();
    for d in &docs {
        updates.extend(ing.observe(d)?);
    }
    let mut out = open_out(a.output.as_deref())?;
    write_updates(&mut out, &updates)?;
    out.flush()?;
    if let Some(p) = &a.dictionary {
        let mut w = BufWriter::new(File::create(p)?);
        ing.dictionary().write_to(&mut w)?;
        w.flush()?;
    }
    eprintln!("{} documents, {} entities, {} updates", docs.len(), ing.dictionary().len(), updates.len());
    if let Some(every) = a.staleness_every {
        let r = staleness_error(&docs, measure, mean_life, every.max(1))?;
        eprintln!("staleness: {} samples, median {:.6}, mean {:.6}, max {:.6}", r.samples, r.median, r.mean, r.max);
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Top(a) => cmd_top(a),
        Command::Ingest(a) => cmd_ingest(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        super::Cli::command().debug_assert();
    }
}
