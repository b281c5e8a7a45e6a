//! Density families, the cardinality-dependent threshold schedule and the
//! static classification of subgraphs (sparse / dense / too-dense /
//! output-dense).
//!
//! A subgraph `C` with internal weight `score(C)` has density
//! `score(C) / S(|C|)`. It is *dense* when that density reaches `T_|C|`,
//! *output-dense* when it reaches `T`, and *too-dense* when it would still be
//! dense after adding any vertex, even one with no edge into `C`. The
//! thresholds satisfy `T_n * g(n)` strictly increasing and `T_{N_max} = T`,
//! which is what makes level-wise growth of dense subgraphs complete.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Absolute tolerance used for every density/threshold comparison.
pub const EPSILON: f64 = 1e-9;

/// Smallest cardinality that is ever classified or indexed.
pub const MIN_CARDINALITY: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DensityFamily {
    /// `S(n) = n(n-1)/2`: average edge weight.
    AvgWeight,
    /// `S(n) = n`: generalized average degree.
    AvgDegree,
    /// `S(n) = sqrt(n(n-1))`.
    SqrtDens,
}

impl DensityFamily {
    pub const ALL: [DensityFamily; 3] = [DensityFamily::AvgWeight, DensityFamily::AvgDegree, DensityFamily::SqrtDens];

    /// Cardinality weight `S(n)`, defined for `n >= 2`.
    pub fn size_weight(self, n: usize) -> f64 {
        let n = n as f64;
        match self {
            DensityFamily::AvgWeight => n * (n - 1.0) / 2.0,
            DensityFamily::AvgDegree => n,
            DensityFamily::SqrtDens => (n * (n - 1.0)).sqrt(),
        }
    }

    /// Normalized weight `g(n) = S(n) / (n(n-1))`.
    pub fn normalized(self, n: usize) -> f64 {
        let m = n as f64;
        self.size_weight(n) / (m * (m - 1.0))
    }

    pub fn name(self) -> &'static str {
        match self {
            DensityFamily::AvgWeight => "avgweight",
            DensityFamily::AvgDegree => "avgdegree",
            DensityFamily::SqrtDens => "sqrtdens",
        }
    }
}

impl fmt::Display for DensityFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DensityFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "avgweight" => Ok(DensityFamily::AvgWeight),
            "avgdegree" => Ok(DensityFamily::AvgDegree),
            "sqrtdens" => Ok(DensityFamily::SqrtDens),
            other => Err(format!("unknown density family `{other}`")),
        }
    }
}

/// Upper end of the open interval `(0, upper)` of admissible `delta_it`
/// values: `S(N_max) * T / (N_max * (N_max - 2))`.
pub fn delta_it_upper(family: DensityFamily, threshold: f64, max_cardinality: usize) -> Result<f64> {
    if max_cardinality < 3 {
        return Err(Error::MaxCardinalityTooSmall(max_cardinality));
    }
    if !(threshold > 0.0 && threshold.is_finite()) {
        return Err(Error::InvalidThreshold(threshold));
    }
    let n = max_cardinality as f64;
    Ok(family.size_weight(max_cardinality) * threshold / (n * (n - 2.0)))
}

/// `(S_n, g_n, T_n)` for one cardinality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule {
    pub size_weight: f64,
    pub normalized: f64,
    pub threshold: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StaticClass {
    Sparse,
    Dense,
    TooDense,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SubgraphStatus {
    pub class: StaticClass,
    pub output_dense: bool,
}

impl SubgraphStatus {
    pub fn is_dense(&self) -> bool {
        self.class != StaticClass::Sparse
    }
}

/// Validated density configuration with the per-cardinality thresholds
/// precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityConfig {
    family: DensityFamily,
    threshold: f64,
    max_cardinality: usize,
    delta_it: f64,
    explicit: bool,
    // Indexed by cardinality; slots 0 and 1 are unused.
    thresholds: Vec<f64>,
    size_weights: Vec<f64>,
}

impl DensityConfig {
    /// Thresholds derived from the `delta_it` schedule:
    /// `T_n = (g(N) T + delta_it ((n-2)/(n-1) - (N-2)/(N-1))) / g(n)`.
    pub fn new(family: DensityFamily, threshold: f64, max_cardinality: usize, delta_it: f64) -> Result<Self> {
        let upper = delta_it_upper(family, threshold, max_cardinality)?;
        if !(delta_it > 0.0 && delta_it < upper) {
            return Err(Error::DeltaItOutOfRange { value: delta_it, upper });
        }
        let big_n = max_cardinality;
        let tail = (big_n as f64 - 2.0) / (big_n as f64 - 1.0);
        let base = family.normalized(big_n) * threshold;
        let mut thresholds = vec![0.0; big_n + 1];
        for (n, slot) in thresholds.iter_mut().enumerate().skip(MIN_CARDINALITY) {
            *slot = if n == big_n {
                threshold
            } else {
                let head = (n as f64 - 2.0) / (n as f64 - 1.0);
                (base + delta_it * (head - tail)) / family.normalized(n)
            };
        }
        Self::assemble(family, threshold, max_cardinality, delta_it, thresholds, false)
    }

    /// Explicit `T_2..=T_{N_max}` overriding the derived schedule. The last
    /// entry must equal `threshold`.
    pub fn with_thresholds(
        family: DensityFamily,
        threshold: f64,
        max_cardinality: usize,
        delta_it: f64,
        explicit: &[f64],
    ) -> Result<Self> {
        if max_cardinality < 3 {
            return Err(Error::MaxCardinalityTooSmall(max_cardinality));
        }
        if !(threshold > 0.0 && threshold.is_finite()) {
            return Err(Error::InvalidThreshold(threshold));
        }
        if !(delta_it > 0.0 && delta_it.is_finite()) {
            return Err(Error::DeltaItOutOfRange { value: delta_it, upper: f64::INFINITY });
        }
        let expected = max_cardinality - 1;
        if explicit.len() != expected {
            return Err(Error::ThresholdCount { expected, got: explicit.len() });
        }
        let last = explicit[expected - 1];
        if (last - threshold).abs() > EPSILON {
            return Err(Error::ThresholdEndpoint { threshold, last });
        }
        let mut thresholds = vec![0.0; max_cardinality + 1];
        thresholds[MIN_CARDINALITY..].copy_from_slice(explicit);
        thresholds[max_cardinality] = threshold;
        Self::assemble(family, threshold, max_cardinality, delta_it, thresholds, true)
    }

    fn assemble(
        family: DensityFamily,
        threshold: f64,
        max_cardinality: usize,
        delta_it: f64,
        thresholds: Vec<f64>,
        explicit: bool,
    ) -> Result<Self> {
        for n in MIN_CARDINALITY..=max_cardinality {
            if !(thresholds[n] > 0.0 && thresholds[n].is_finite()) {
                return Err(Error::InvalidThreshold(thresholds[n]));
            }
            if n > MIN_CARDINALITY
                && thresholds[n] * family.normalized(n) <= thresholds[n - 1] * family.normalized(n - 1)
            {
                return Err(Error::ThresholdsNotIncreasing(n));
            }
        }
        let size_weights =
            (0..=max_cardinality).map(|n| if n < MIN_CARDINALITY { 0.0 } else { family.size_weight(n) }).collect();
        Ok(DensityConfig { family, threshold, max_cardinality, delta_it, explicit, thresholds, size_weights })
    }

    pub fn family(&self) -> DensityFamily {
        self.family
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn max_cardinality(&self) -> usize {
        self.max_cardinality
    }

    pub fn delta_it(&self) -> f64 {
        self.delta_it
    }

    pub fn has_explicit_thresholds(&self) -> bool {
        self.explicit
    }

    fn check_range(&self, n: usize) -> Result<()> {
        if n < MIN_CARDINALITY || n > self.max_cardinality {
            return Err(Error::CardinalityOutOfRange { n, min: MIN_CARDINALITY, max: self.max_cardinality });
        }
        Ok(())
    }

    pub fn schedule(&self, n: usize) -> Result<Schedule> {
        self.check_range(n)?;
        Ok(Schedule {
            size_weight: self.size_weights[n],
            normalized: self.family.normalized(n),
            threshold: self.thresholds[n],
        })
    }

    /// `T_n`. Panics outside `[2, N_max]`.
    pub fn threshold_for(&self, n: usize) -> f64 {
        self.thresholds[n]
    }

    /// `S_n`. Panics outside `[2, N_max]`.
    pub fn size_weight(&self, n: usize) -> f64 {
        self.size_weights[n]
    }

    pub fn density(&self, n: usize, score: f64) -> f64 {
        score / self.size_weights[n]
    }

    /// `dens >= T_n - eps`; false for cardinalities outside `[2, N_max]`.
    pub fn is_dense(&self, n: usize, score: f64) -> bool {
        (MIN_CARDINALITY..=self.max_cardinality).contains(&n)
            && score / self.size_weights[n] >= self.thresholds[n] - EPSILON
    }

    pub fn is_output_dense(&self, n: usize, score: f64) -> bool {
        (MIN_CARDINALITY..=self.max_cardinality).contains(&n)
            && score / self.size_weights[n] >= self.threshold - EPSILON
    }

    /// Still dense after adding one vertex that contributes no weight.
    pub fn is_too_dense(&self, n: usize, score: f64) -> bool {
        n < self.max_cardinality && self.is_dense(n + 1, score)
    }

    /// Still dense after adding two vertices that contribute no weight.
    pub fn is_doubly_too_dense(&self, n: usize, score: f64) -> bool {
        n + 1 < self.max_cardinality && self.is_dense(n + 2, score)
    }

    pub fn classify(&self, n: usize, score: f64) -> Result<SubgraphStatus> {
        self.check_range(n)?;
        if score < 0.0 {
            return Err(Error::NegativeScore(score));
        }
        let class = if !self.is_dense(n, score) {
            StaticClass::Sparse
        } else if self.is_too_dense(n, score) {
            StaticClass::TooDense
        } else {
            StaticClass::Dense
        };
        Ok(SubgraphStatus { class, output_dense: self.is_output_dense(n, score) })
    }

    /// Number of exploration iterations needed after an update of
    /// magnitude `delta`: `ceil(|delta| / delta_it)`, 0 for a no-op.
    pub fn iteration_budget(&self, delta: f64) -> u32 {
        let ratio = delta.abs() / self.delta_it;
        if ratio == 0.0 {
            return 0;
        }
        // Absorb representation error such as 0.15000000000000002 / 0.15.
        ((ratio - EPSILON).ceil().max(1.0)) as u32
    }

    /// Largest `delta` for which a single exploration iteration provably
    /// suffices under the configured thresholds:
    /// `min_n (n-2)(n-1)(g_n T_n - g_{n-1} T_{n-1})`. Equals `delta_it` for
    /// derived schedules.
    pub fn single_iteration_bound(&self) -> f64 {
        (3..=self.max_cardinality)
            .map(|n| {
                let g = |k: usize| self.family.normalized(k) * self.thresholds[k];
                (n as f64 - 2.0) * (n as f64 - 1.0) * (g(n) - g(n - 1))
            })
            .fold(f64::INFINITY, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-12
    }

    #[test]
    fn avgweight_schedule_by_hand() {
        let cfg = DensityConfig::new(DensityFamily::AvgWeight, 1.0, 4, 0.15).unwrap();
        // T_2 = 2 * (0.5 + 0.15 * (0 - 2/3)), T_3 = 2 * (0.5 + 0.15 * (1/2 - 2/3))
        assert!(close(cfg.schedule(2).unwrap().threshold, 0.8));
        assert!(close(cfg.schedule(3).unwrap().threshold, 0.95));
        assert_eq!(cfg.schedule(4).unwrap().threshold, 1.0);
    }

    #[test]
    fn avgdegree_matches_closed_form() {
        let (t, big_n, d) = (1.0, 4usize, 0.1);
        let cfg = DensityConfig::new(DensityFamily::AvgDegree, t, big_n, d).unwrap();
        for n in 2..=big_n {
            let closed = (n as f64 - 1.0) / (big_n as f64 - 1.0) * (t + d) - d;
            assert!(close(cfg.threshold_for(n), closed), "n={n}");
        }
        assert!(close(cfg.threshold_for(2), 4.0 / 15.0));
    }

    #[test]
    fn schedule_rejects_out_of_range() {
        let cfg = DensityConfig::new(DensityFamily::AvgWeight, 1.0, 4, 0.15).unwrap();
        assert!(cfg.schedule(1).is_err());
        assert!(cfg.schedule(5).is_err());
    }

    #[test]
    fn delta_it_upper_by_hand() {
        assert!(close(delta_it_upper(DensityFamily::AvgWeight, 1.0, 4).unwrap(), 0.75));
        assert!(close(delta_it_upper(DensityFamily::AvgDegree, 2.0, 5).unwrap(), 2.0 / 3.0));
        assert_eq!(delta_it_upper(DensityFamily::SqrtDens, 1.0, 2), Err(Error::MaxCardinalityTooSmall(2)));
    }

    #[test]
    fn delta_it_outside_range_rejected() {
        assert!(DensityConfig::new(DensityFamily::AvgWeight, 1.0, 4, 0.75).is_err());
        assert!(DensityConfig::new(DensityFamily::AvgWeight, 1.0, 4, 0.0).is_err());
        assert!(DensityConfig::new(DensityFamily::AvgWeight, 1.0, 4, 0.7499).is_ok());
    }

    #[test]
    fn explicit_thresholds_validated() {
        let ok = DensityConfig::with_thresholds(DensityFamily::AvgWeight, 1.0, 4, 0.15, &[0.9, 0.975, 1.0]);
        assert!(ok.is_ok());
        let not_increasing = DensityConfig::with_thresholds(DensityFamily::AvgWeight, 1.0, 4, 0.15, &[0.9, 0.85, 1.0]);
        assert_eq!(not_increasing, Err(Error::ThresholdsNotIncreasing(3)));
        let bad_end = DensityConfig::with_thresholds(DensityFamily::AvgWeight, 1.0, 4, 0.15, &[0.9, 0.95, 0.99]);
        assert!(matches!(bad_end, Err(Error::ThresholdEndpoint { .. })));
        let short = DensityConfig::with_thresholds(DensityFamily::AvgWeight, 1.0, 4, 0.15, &[0.9, 1.0]);
        assert!(matches!(short, Err(Error::ThresholdCount { expected: 3, got: 2 })));
    }

    #[test]
    fn classify_examples() {
        let fixture =
            DensityConfig::with_thresholds(DensityFamily::AvgWeight, 1.0, 4, 0.15, &[0.9, 0.975, 1.0]).unwrap();
        let s = fixture.classify(2, 0.95).unwrap();
        assert_eq!(s.class, StaticClass::Dense);
        assert!(!s.output_dense);
        assert_eq!(fixture.classify(3, 1.15).unwrap().class, StaticClass::Sparse);

        let derived = DensityConfig::new(DensityFamily::AvgWeight, 1.0, 4, 0.15).unwrap();
        let s = derived.classify(3, 30.0).unwrap();
        assert_eq!(s.class, StaticClass::TooDense);
        assert!(s.output_dense);
        // Full cardinality is never too-dense.
        assert_eq!(derived.classify(4, 1000.0).unwrap().class, StaticClass::Dense);
        assert!(derived.classify(1, 1.0).is_err());
        assert!(derived.classify(5, 1.0).is_err());
    }

    #[test]
    fn iteration_budget_examples() {
        let cfg = DensityConfig::new(DensityFamily::AvgWeight, 1.0, 4, 0.15).unwrap();
        assert_eq!(cfg.iteration_budget(0.15), 1);
        assert_eq!(cfg.iteration_budget(0.0), 0);
        let cfg = DensityConfig::new(DensityFamily::AvgWeight, 1.0, 4, 0.1).unwrap();
        assert_eq!(cfg.iteration_budget(0.31), 4);
        assert_eq!(cfg.iteration_budget(0.15), 2);
        let cfg = DensityConfig::new(DensityFamily::AvgWeight, 1.0, 4, 0.15).unwrap();
        assert_eq!(cfg.iteration_budget((0.8 + 0.15) - 0.8), 1);
    }

    #[test]
    fn family_monotonicity() {
        for family in DensityFamily::ALL {
            for n in 3..=50 {
                let ratio = family.size_weight(n) / family.size_weight(n - 1);
                let n = n as f64;
                assert!(ratio >= n / (n - 1.0) - 1e-12, "{family} n={n}");
                assert!(ratio <= n / (n - 2.0) + 1e-12, "{family} n={n}");
            }
            for n in 3..=50 {
                assert!(family.normalized(n) <= family.normalized(n - 1) + 1e-15);
            }
        }
    }

    #[test]
    fn single_iteration_bound_equals_delta_it_for_derived() {
        let cfg = DensityConfig::new(DensityFamily::SqrtDens, 1.3, 7, 0.2).unwrap();
        assert!((cfg.single_iteration_bound() - 0.2).abs() < 1e-12);
        let fixture =
            DensityConfig::with_thresholds(DensityFamily::AvgWeight, 1.0, 4, 0.15, &[0.9, 0.975, 1.0]).unwrap();
        assert!((fixture.single_iteration_bound() - 0.075).abs() < 1e-12);
    }
}
