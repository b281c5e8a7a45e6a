//! Star entries versus explicit materialization on a workload whose planted
//! cliques stay too-dense: every too-dense set forces one extension per
//! vertex of the universe in explicit mode.
//!
//! cargo run --release --example star_ablation -- [vertices] [updates]

use dyndens::density::DensityFamily;
use dyndens::runner::{bench, BenchRow, DeltaIt, RunConfig};
use dyndens::workload::{planted_too_dense, TooDenseSpec};

fn main() -> dyndens::Result<()> {
    let mut args = std::env::args().skip(1);
    let vertices: u32 = args.next().map_or(10_000, |s| s.parse().expect("vertex count"));
    let updates: usize = args.next().map_or(400, |s| s.parse().expect("update count"));

    let spec = TooDenseSpec::new(vertices, 2, 4, 2.5, updates, 5);
    let stream = planted_too_dense(&spec)?;
    let cfg = RunConfig {
        family: DensityFamily::AvgWeight,
        threshold: 1.0,
        max_cardinality: 5,
        delta_it: DeltaIt::Fraction(0.01),
        ..RunConfig::default()
    };
    println!("{} updates over {vertices} vertices, median of 3 runs", stream.len());
    println!("{}", BenchRow::HEADER);
    println!("{}", bench(&cfg, &stream, vertices, 3, true)?);
    Ok(())
}
