//! Generates the planted-set workload with the too-dense gate and runs it
//! through the engine.
//!
//! cargo run --release --example synthetic_workload -- [vertices] [updates] [sets]

use std::io::Cursor;

use dyndens::density::{delta_it_upper, DensityConfig, DensityFamily};
use dyndens::format::write_updates;
use dyndens::runner::{run_stream, DeltaIt, RunConfig};
use dyndens::workload::{generate, SyntheticSpec};

fn main() -> dyndens::Result<()> {
    let mut args = std::env::args().skip(1);
    let vertices: u32 = args.next().map_or(10_000, |s| s.parse().expect("vertex count"));
    let updates: usize = args.next().map_or(25_000, |s| s.parse().expect("update count"));
    let sets: usize = args.next().map_or(10, |s| s.parse().expect("planted set count"));

    let (t, nmax) = (0.7, 8);
    let gate = DensityConfig::new(
        DensityFamily::AvgWeight,
        t,
        nmax,
        0.4 * delta_it_upper(DensityFamily::AvgWeight, t, nmax)?,
    )?;
    let spec =
        SyntheticSpec { vertices, updates, planted_sets: sets, gate: Some(gate), ..SyntheticSpec::full_scale(1) };
    let (stream, report) = generate(&spec)?;
    println!(
        "generated {} updates: {} negative, {} planted, {} rejected by the gate",
        stream.len(),
        report.negatives,
        report.planted,
        report.rejected
    );

    let mut text = Vec::new();
    write_updates(&mut text, &stream)?;
    let cfg = RunConfig {
        family: DensityFamily::AvgWeight,
        threshold: t,
        max_cardinality: nmax,
        delta_it: DeltaIt::Fraction(0.4),
        ..RunConfig::default()
    };
    let mut events = Vec::new();
    let summary = run_stream(&cfg, vertices, Cursor::new(text), &mut events, None)?;
    println!("{summary}");
    let text = String::from_utf8(events).expect("events are ASCII");
    println!("last events:");
    for line in text.lines().rev().take(5).collect::<Vec<_>>().into_iter().rev() {
        println!("  {line}");
    }
    Ok(())
}
