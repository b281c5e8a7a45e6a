//! Replays random streams on a 10-vertex graph and compares the engine with
//! the brute-force oracle after every update. A deliberately short
//! iteration budget is run alongside to show what a failure looks like.
//!
//! cargo run --release --example oracle_fuzz -- [seed] [updates]

use dyndens::density::{delta_it_upper, DensityConfig, DensityFamily};
use dyndens::engine::EngineOptions;
use dyndens::oracle::DEFAULT_LIMIT;
use dyndens::runner::verify;
use dyndens::workload::{fuzz_stream, FuzzSpec};

fn main() -> dyndens::Result<()> {
    let mut args = std::env::args().skip(1);
    let seed: u64 = args.next().map_or(1, |s| s.parse().expect("seed"));
    let updates: usize = args.next().map_or(1000, |s| s.parse().expect("update count"));
    let mutant = EngineOptions { budget_adjust: -1, ..EngineOptions::default() };

    for family in DensityFamily::ALL {
        for nmax in [3, 4, 5] {
            let t = 1.0;
            let cfg = DensityConfig::new(family, t, nmax, 0.05 * delta_it_upper(family, t, nmax)?)?;
            let stream = fuzz_stream(&FuzzSpec::new(10, updates, 0.01 * t, 1.2 * t, seed))?;
            let good = verify(&cfg, EngineOptions::default(), &stream, 10, 1, DEFAULT_LIMIT)?;
            let bad = verify(&cfg, mutant, &stream, 10, 1, DEFAULT_LIMIT)?;
            println!(
                "{family:<9} N_max={nmax}: engine {}, short-budget mutant {}",
                if good.passed() { "PASS".to_string() } else { format!("FAIL {}", good.failure.unwrap()) },
                bad.failure.map_or("survived".to_string(), |f| format!("caught {f}")),
            );
        }
    }
    Ok(())
}
