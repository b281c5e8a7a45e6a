//! Turns a small document stream into edge-weight updates under both
//! association measures, then reports the staleness error on a larger
//! synthetic stream.
//!
//! cargo run --example document_ingest

use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use dyndens::format::{format_update, read_documents};
use dyndens::ingest::{staleness_error, synthetic_documents, AssociationMeasure, DocumentSpec, Ingestor};

fn main() -> dyndens::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data/news.docs");
    let docs = read_documents(BufReader::new(File::open(path)?))?;

    for measure in [AssociationMeasure::chi2(), AssociationMeasure::llr()] {
        let mut ing = Ingestor::new(measure, 7200.0);
        let mut updates = Vec::new();
        for d in &docs {
            updates.extend(ing.observe(d)?);
        }
        println!("{}: {} updates from {} documents", measure.name(), updates.len(), docs.len());
        for u in updates.iter().take(8) {
            let name = |v| ing.dictionary().name(v).unwrap_or("?");
            println!("  {:<28} {} -- {}", format_update(u), name(u.a), name(u.b));
        }
        println!("  final edges:");
        for (a, b, w) in ing.edges() {
            let name = |v| ing.dictionary().name(v).unwrap_or("?");
            println!("    {:<12} {:<12} {w:.4}", name(a), name(b));
        }
    }

    let synthetic = synthetic_documents(&DocumentSpec::new(200, 20_000, 1))?;
    for measure in [AssociationMeasure::chi2(), AssociationMeasure::llr()] {
        let r = staleness_error(&synthetic, measure, 7200.0, 1000)?;
        println!(
            "staleness ({}): {} samples over {} checkpoints, median {:.5}, mean {:.5}, max {:.5}",
            measure.name(),
            r.samples,
            r.checkpoints,
            r.median,
            r.mean,
            r.max
        );
    }
    Ok(())
}
