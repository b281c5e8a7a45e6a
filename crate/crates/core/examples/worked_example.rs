//! The five-vertex worked example: builds the graph, checks the dense set
//! against the oracle, then applies `w(1,2) += 0.15` and prints every probe
//! and event.
//!
//! cargo run --example worked_example

use dyndens::density::{DensityConfig, DensityFamily};
use dyndens::engine::{Engine, EngineOptions};
use dyndens::format::{format_event, join_vertices};
use dyndens::graph::EdgeUpdate;
use dyndens::oracle::{brute_force_dense, DEFAULT_LIMIT};

fn main() -> dyndens::Result<()> {
    let cfg = DensityConfig::with_thresholds(DensityFamily::AvgWeight, 1.0, 4, 0.15, &[0.9, 0.975, 1.0])?;
    let mut engine = Engine::new(cfg.clone(), 5, EngineOptions { trace_probes: true, ..Default::default() });

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
        engine.process(&EdgeUpdate::new(seq as u64, a, b, w))?;
    }
    engine.take_probe_trace();

    println!("dense before the update (oracle):");
    for (set, density) in brute_force_dense(engine.graph(), &cfg, DEFAULT_LIMIT)?.dense {
        println!("  {:<8} {density:.4}", join_vertices(&set));
    }

    let events = engine.process(&EdgeUpdate::new(10, 1, 2, 0.15))?;
    println!("\nprobes for (1,2,+0.15):");
    for p in engine.take_probe_trace() {
        let n = p.vertices.len();
        println!(
            "  iter {} {:<8} density {:.4} vs T_{n} = {:.4} -> {:?}",
            p.iteration,
            join_vertices(&p.vertices),
            cfg.density(n, p.score),
            cfg.threshold_for(n),
            p.outcome
        );
    }
    println!("\nevents:");
    for e in &events {
        println!("  {}", format_event(e));
    }
    Ok(())
}
