use dyndens::density::{delta_it_upper, DensityConfig, DensityFamily};
use dyndens::engine::EngineOptions;
use dyndens::oracle::DEFAULT_LIMIT;
use dyndens::runner::verify;
use dyndens::workload::{fuzz_stream, FuzzSpec};

fn config(family: DensityFamily, t: f64, nmax: usize, frac: f64) -> DensityConfig {
    DensityConfig::new(family, t, nmax, frac * delta_it_upper(family, t, nmax).unwrap()).unwrap()
}

#[test]
fn empty_stream_passes() {
    let cfg = config(DensityFamily::AvgWeight, 1.0, 4, 0.1);
    let r = verify(&cfg, EngineOptions::default(), &[], 10, 1, DEFAULT_LIMIT).unwrap();
    assert!(r.passed());
    assert_eq!((r.updates, r.checkpoints), (0, 0));
}

#[test]
fn sparse_checkpoints_still_check_the_end() {
    let cfg = config(DensityFamily::SqrtDens, 0.8, 4, 0.5);
    let stream = fuzz_stream(&FuzzSpec::new(10, 250, 0.01, 1.0, 2)).unwrap();
    let r = verify(&cfg, EngineOptions::default(), &stream, 10, 100, DEFAULT_LIMIT).unwrap();
    assert!(r.passed(), "{:?}", r.failure);
    assert_eq!(r.checkpoints, 3);
}

#[test]
fn explicit_mode_passes() {
    for family in DensityFamily::ALL {
        let cfg = config(family, 1.0, 5, 0.3);
        let stream = fuzz_stream(&FuzzSpec::new(10, 400, 0.01, 1.2, 9)).unwrap();
        let opts = EngineOptions { star_mode: false, ..EngineOptions::default() };
        let r = verify(&cfg, opts, &stream, 10, 1, DEFAULT_LIMIT).unwrap();
        assert!(r.passed(), "{family}: {:?}", r.failure);
    }
}

#[test]
fn short_budget_mutant_misses_a_dense_set() {
    let mutant = EngineOptions { budget_adjust: -1, ..EngineOptions::default() };
    let mut first = None;
    'search: for family in DensityFamily::ALL {
        for seed in 0..8 {
            let cfg = config(family, 1.0, 5, 0.05);
            let stream = fuzz_stream(&FuzzSpec::new(10, 1000, 0.01, 1.2, seed)).unwrap();
            let r = verify(&cfg, mutant, &stream, 10, 1, DEFAULT_LIMIT).unwrap();
            if let Some(f) = r.failure {
                first = Some(f);
                break 'search;
            }
        }
    }
    let f = first.expect("mutant survived every stream");
    assert_eq!(f.view, "dense");
    assert!(f.detail.starts_with("MISSING "), "{f}");
}

#[test]
fn oracle_cap_is_reported() {
    let cfg = config(DensityFamily::AvgWeight, 1.0, 4, 0.2);
    let stream = fuzz_stream(&FuzzSpec::new(10, 50, 0.01, 1.2, 4)).unwrap();
    assert!(verify(&cfg, EngineOptions::default(), &stream, 10, 1, 10).is_err());
}
