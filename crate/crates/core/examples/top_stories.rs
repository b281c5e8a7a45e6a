//! End to end: documents to entity graph updates, dense subgraph
//! maintenance, and a diversity-reranked list of current stories.
//!
//! cargo run --example top_stories

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use dyndens::density::{DensityConfig, DensityFamily};
use dyndens::engine::{Engine, EngineOptions};
use dyndens::format::read_documents;
use dyndens::ingest::{AssociationMeasure, EntityDictionary, Ingestor};
use dyndens::rerank::{rerank_diverse, Story};

fn main() -> dyndens::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/news.docs");
    let docs = read_documents(BufReader::new(File::open(path)?))?;

    // The engine needs a fixed universe, so intern every entity up front.
    let mut dict = EntityDictionary::new();
    for d in &docs {
        for e in &d.entities {
            dict.intern(e);
        }
    }
    let universe = dict.len() as u32;
    let mut ing = Ingestor::new(AssociationMeasure::chi2(), 7200.0).with_dictionary(dict);
    let cfg = DensityConfig::new(DensityFamily::AvgWeight, 0.3, 4, 0.01)?;
    let mut engine = Engine::new(cfg, universe, EngineOptions::default());

    for d in &docs {
        for u in ing.observe(d)? {
            for e in engine.process(&u)? {
                let names: Vec<_> = e.vertices.iter().map(|&v| ing.dictionary().name(v).unwrap_or("?")).collect();
                println!("t={:<5} {} {:.3} {}", d.timestamp, e.kind, e.density, names.join(", "));
            }
        }
    }

    let stories: Vec<Story> = engine.snapshot(true).into_iter().map(|(v, d)| Story::new(v, d)).collect();
    println!("\ntop stories:");
    for r in rerank_diverse(&stories, 0.8)?.into_iter().take(5) {
        let names: Vec<_> = r.story.vertices.iter().map(|&v| ing.dictionary().name(v).unwrap_or("?")).collect();
        println!("  {:.3} (density {:.3} x {:.2})  {}", r.score, r.story.density, r.multiplier, names.join(", "));
    }
    Ok(())
}
