//! Prints the per-cardinality thresholds for each density family and checks
//! that consecutive normalized thresholds are `delta_it` apart after scaling.
//!
//! cargo run --example threshold_schedule -- [T] [N_max] [fraction]

use dyndens::density::{delta_it_upper, DensityConfig, DensityFamily};

fn main() -> dyndens::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let t = args.first().copied().unwrap_or(1.0);
    let nmax = args.get(1).copied().unwrap_or(6.0) as usize;
    let frac = args.get(2).copied().unwrap_or(0.01);

    for family in DensityFamily::ALL {
        let upper = delta_it_upper(family, t, nmax)?;
        let cfg = DensityConfig::new(family, t, nmax, frac * upper)?;
        println!("{family}: delta_it = {:.6} ({}% of {upper:.6})", cfg.delta_it(), frac * 100.0);
        println!("   n        S_n        T_n   T_n*S_n   identity error");
        for n in 2..=nmax {
            let g = |k: usize| family.normalized(k) * cfg.threshold_for(k);
            let err = if n >= 3 {
                let lhs = (n as f64 - 2.0) * (n as f64 - 1.0) * (g(n) - g(n - 1));
                format!("{:.1e}", (lhs - cfg.delta_it()).abs())
            } else {
                "-".into()
            };
            println!(
                "  {n:>2} {:>10.4} {:>10.6} {:>9.4}   {err}",
                cfg.size_weight(n),
                cfg.threshold_for(n),
                cfg.threshold_for(n) * cfg.size_weight(n)
            );
        }
        println!("  budget for delta = 3.5 * delta_it: {} iterations\n", cfg.iteration_budget(3.5 * cfg.delta_it()));
    }
    Ok(())
}
