//! 2x2 contingency statistics and the two association weights.

/// Chi-square critical value, one degree of freedom, p = 0.01.
pub const CRITICAL_1PCT: f64 = 6.635;
/// Chi-square critical value, one degree of freedom, p = 0.05.
pub const CRITICAL_5PCT: f64 = 3.841;

/// Document counts for a pair of entities. Fractional under decay.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contingency {
    /// Both entities present.
    pub n11: f64,
    /// First present, second absent.
    pub n10: f64,
    pub n01: f64,
    pub n00: f64,
}

impl Contingency {
    /// Table from marginal supports `n1`, `n2`, co-occurrence `n12` and
    /// total `n`. Cells are clamped at zero to absorb rounding residue.
    pub fn from_counts(n1: f64, n2: f64, n12: f64, n: f64) -> Self {
        Contingency {
            n11: n12.max(0.0),
            n10: (n1 - n12).max(0.0),
            n01: (n2 - n12).max(0.0),
            n00: (n - n1 - n2 + n12).max(0.0),
        }
    }

    pub fn total(&self) -> f64 {
        self.n11 + self.n10 + self.n01 + self.n00
    }

    fn margins(&self) -> [f64; 4] {
        [self.n11 + self.n10, self.n01 + self.n00, self.n11 + self.n01, self.n10 + self.n00]
    }

    /// True when some row or column sums to zero.
    pub fn is_degenerate(&self) -> bool {
        self.margins().iter().any(|&m| m <= 0.0)
    }

    /// Expected `n11` under independence.
    pub fn expected11(&self) -> f64 {
        let [r1, _, c1, _] = self.margins();
        r1 * c1 / self.total()
    }

    /// Likelihood-ratio statistic `G^2 = 2 sum O ln(O / E)`.
    pub fn g_squared(&self) -> f64 {
        if self.is_degenerate() {
            return 0.0;
        }
        let n = self.total();
        let [r1, r0, c1, c0] = self.margins();
        let cells =
            [(self.n11, r1 * c1 / n), (self.n10, r1 * c0 / n), (self.n01, r0 * c1 / n), (self.n00, r0 * c0 / n)];
        let sum: f64 = cells.iter().filter(|(o, _)| *o > 0.0).map(|&(o, e)| o * (o / e).ln()).sum();
        (2.0 * sum).max(0.0)
    }

    /// Pearson chi-square.
    pub fn chi_squared(&self) -> f64 {
        if self.is_degenerate() {
            return 0.0;
        }
        self.total() * self.phi().powi(2)
    }

    /// Phi coefficient in `[-1, 1]`.
    pub fn phi(&self) -> f64 {
        if self.is_degenerate() {
            return 0.0;
        }
        let [r1, r0, c1, c0] = self.margins();
        let cross = self.n11 * self.n00 - self.n10 * self.n01;
        (cross / (r1 * r0 * c1 * c0).sqrt()).clamp(-1.0, 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AssociationMeasure {
    /// Weight 1 iff both supports reach `min_support`, `G^2` exceeds
    /// `critical` and the association is positive; 0 otherwise.
    Llr { min_support: f64, critical: f64 },
    /// `max(phi, 0)` when chi-square exceeds `critical`; 0 otherwise.
    Chi2 { critical: f64 },
}

impl AssociationMeasure {
    pub fn llr() -> Self {
        AssociationMeasure::Llr { min_support: 5.0, critical: CRITICAL_1PCT }
    }

    pub fn chi2() -> Self {
        AssociationMeasure::Chi2 { critical: CRITICAL_5PCT }
    }

    pub fn name(&self) -> &'static str {
        match self {
            AssociationMeasure::Llr { .. } => "llr",
            AssociationMeasure::Chi2 { .. } => "chi2",
        }
    }

    /// Edge weight for supports `n1`, `n2`, co-occurrence `n12`, total `n`.
    pub fn weight(&self, n1: f64, n2: f64, n12: f64, n: f64) -> f64 {
        let table = Contingency::from_counts(n1, n2, n12, n);
        if table.is_degenerate() {
            return 0.0;
        }
        match *self {
            AssociationMeasure::Llr { min_support, critical } => {
                let positive = table.n11 > table.expected11();
                if n1 >= min_support && n2 >= min_support && positive && table.g_squared() > critical {
                    1.0
                } else {
                    0.0
                }
            }
            AssociationMeasure::Chi2 { critical } => {
                if table.chi_squared() > critical {
                    table.phi().max(0.0)
                } else {
                    0.0
                }
            }
        }
    }
}

impl std::str::FromStr for AssociationMeasure {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "llr" => Ok(AssociationMeasure::llr()),
            "chi2" => Ok(AssociationMeasure::chi2()),
            other => Err(format!("unknown measure {other:?} (expected llr or chi2)")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_association_table() {
        // n11=10, n10=n01=0, n00=90: E11 = 1, E00 = 81, E10 = E01 = 9.
        let t = Contingency::from_counts(10.0, 10.0, 10.0, 100.0);
        assert_eq!(t, Contingency { n11: 10.0, n10: 0.0, n01: 0.0, n00: 90.0 });
        let g2 = 2.0 * (10.0 * 10f64.ln() + 90.0 * (90.0f64 / 81.0).ln());
        assert!((t.g_squared() - g2).abs() < 1e-12);
        assert!((t.phi() - 1.0).abs() < 1e-12);
        assert!((t.chi_squared() - 100.0).abs() < 1e-9);
    }

    #[test]
    fn chi_square_matches_cell_sum() {
        let t = Contingency { n11: 7.0, n10: 3.0, n01: 5.0, n00: 25.0 };
        let n = t.total();
        let [r1, r0, c1, c0] = t.margins();
        let cells = [(t.n11, r1 * c1), (t.n10, r1 * c0), (t.n01, r0 * c1), (t.n00, r0 * c0)];
        let pearson: f64 = cells.iter().map(|&(o, rc)| (o - rc / n).powi(2) / (rc / n)).sum();
        assert!((t.chi_squared() - pearson).abs() < 1e-12);
    }

    #[test]
    fn llr_support_gate() {
        let m = AssociationMeasure::llr();
        // Supports (4, 9): strongly associated but under-supported.
        assert_eq!(m.weight(4.0, 9.0, 4.0, 1000.0), 0.0);
        assert!(Contingency::from_counts(4.0, 9.0, 4.0, 1000.0).g_squared() > CRITICAL_1PCT);
        assert_eq!(m.weight(5.0, 9.0, 5.0, 1000.0), 1.0);
        // Negative association is never an edge.
        assert_eq!(m.weight(50.0, 50.0, 0.0, 100.0), 0.0);
    }

    #[test]
    fn chi2_significance_gate() {
        let m = AssociationMeasure::chi2();
        let weak = Contingency::from_counts(10.0, 10.0, 2.0, 100.0);
        assert!(weak.chi_squared() < CRITICAL_5PCT);
        assert_eq!(m.weight(10.0, 10.0, 2.0, 100.0), 0.0);
        let strong = Contingency::from_counts(10.0, 10.0, 6.0, 100.0);
        assert!(strong.chi_squared() > CRITICAL_5PCT);
        assert!((m.weight(10.0, 10.0, 6.0, 100.0) - strong.phi()).abs() < 1e-15);
    }

    #[test]
    fn degenerate_tables_weigh_zero() {
        for m in [AssociationMeasure::llr(), AssociationMeasure::chi2()] {
            assert_eq!(m.weight(0.0, 5.0, 0.0, 10.0), 0.0);
            assert_eq!(m.weight(10.0, 10.0, 10.0, 10.0), 0.0);
            assert_eq!(m.weight(0.0, 0.0, 0.0, 0.0), 0.0);
        }
    }
}
