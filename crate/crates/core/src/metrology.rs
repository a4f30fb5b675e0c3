//! Combination of random and systematic measurement errors at a confidence
//! level β.
//!
//! Systematic constituents combine as `min(Σ Δᵢ, k·√(Σ Δᵢ²))`. The total
//! error then depends on `r = Δ_s / s`, the systematic error over the
//! variance of the mean:
//!
//! | r            | Δ_t              |
//! |--------------|------------------|
//! | r < 0.8      | Δ_r              |
//! | r > 8        | Δ_s              |
//! | 0.8 ≤ r ≤ 8  | q_β(r)·(Δ_r + Δ_s) |
//!
//! Coefficient tables only ship the values that are actually attested; the
//! rest must be supplied by the caller.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

/// Below this ratio the random error dominates.
pub const RANDOM_DOMINATES_BELOW: f64 = 0.8;

/// Above this ratio the systematic error dominates.
pub const SYSTEMATIC_DOMINATES_ABOVE: f64 = 8.0;

/// Range of q_β(r) at β = 0.95.
pub const Q_RANGE_BETA_095: (f64, f64) = (0.71, 0.81);

const BETA_EPS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetrologyError {
    #[error("no systematic error components given")]
    EmptyComponents,
    #[error("{name} must be a finite non-negative magnitude, got {value}")]
    InvalidMagnitude { name: &'static str, value: f64 },
    #[error("coefficient {name} must be positive and finite, got {value}")]
    InvalidCoefficient { name: &'static str, value: f64 },
    #[error("confidence level must lie in (0, 1), got {0}")]
    InvalidConfidence(f64),
    #[error("variance of the mean must be positive, got {0}")]
    DegenerateBudget(f64),
    #[error("no k coefficient configured for J = {count}, beta = {beta}")]
    MissingK { count: usize, beta: f64 },
    #[error(
        "no q coefficient configured for r = {ratio}, beta = {beta}; \
         supply a q table covering this ratio or an explicit q"
    )]
    MissingQ { ratio: f64, beta: f64 },
    #[error("q = {q} outside [{lo}, {hi}] required at beta = 0.95")]
    QOutOfRange { q: f64, lo: f64, hi: f64 },
    #[error("measured value must be non-zero to form a relative error")]
    ZeroMeasuredValue,
    #[error("unknown interpolation mode `{0}` (expected `exact` or `linear`)")]
    UnknownInterpolation(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rule {
    RandomDominates,
    SystematicDominates,
    Blend,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::RandomDominates => "RandomDominates",
            Rule::SystematicDominates => "SystematicDominates",
            Rule::Blend => "Blend",
        })
    }
}

fn magnitude(name: &'static str, value: f64) -> Result<f64, MetrologyError> {
    if value >= 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(MetrologyError::InvalidMagnitude { name, value })
    }
}

fn check_beta(beta: f64) -> Result<f64, MetrologyError> {
    if beta > 0.0 && beta < 1.0 {
        Ok(beta)
    } else {
        Err(MetrologyError::InvalidConfidence(beta))
    }
}

fn same_beta(a: f64, b: f64) -> bool {
    (a - b).abs() <= BETA_EPS
}

/// Tabulated k_β^(J).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct KTable {
    entries: Vec<(usize, f64, f64)>,
}

impl KTable {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The attested entry k_{0.95}^{(3)} = 1.1.
    pub fn attested() -> Self {
        KTable {
            entries: vec![(3, 0.95, 1.1)],
        }
    }

    pub fn insert(&mut self, count: usize, beta: f64, k: f64) -> Result<(), MetrologyError> {
        check_beta(beta)?;
        if !(k > 0.0 && k.is_finite()) {
            return Err(MetrologyError::InvalidCoefficient {
                name: "k",
                value: k,
            });
        }
        self.entries
            .retain(|&(j, b, _)| !(j == count && same_beta(b, beta)));
        self.entries.push((count, beta, k));
        Ok(())
    }

    pub fn get(&self, count: usize, beta: f64) -> Option<f64> {
        self.entries
            .iter()
            .find(|&&(j, b, _)| j == count && same_beta(b, beta))
            .map(|&(_, _, k)| k)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// How [`QTable`] answers for a ratio that is not tabulated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interpolation {
    /// Only tabulated ratios are answered.
    #[default]
    Exact,
    /// Piecewise linear between tabulated ratios, no extrapolation.
    Linear,
}

impl FromStr for Interpolation {
    type Err = MetrologyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "exact" | "none" => Ok(Interpolation::Exact),
            "linear" => Ok(Interpolation::Linear),
            other => Err(MetrologyError::UnknownInterpolation(other.to_string())),
        }
    }
}

/// Tabulated q_β(r). Ships empty: only the range of q at β = 0.95 is
/// attested, and that range is enforced on insertion.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QTable {
    entries: Vec<(f64, f64, f64)>,
    pub interpolation: Interpolation,
}

impl QTable {
    pub fn new(interpolation: Interpolation) -> Self {
        QTable {
            entries: Vec::new(),
            interpolation,
        }
    }

    pub fn insert(&mut self, beta: f64, ratio: f64, q: f64) -> Result<(), MetrologyError> {
        check_beta(beta)?;
        magnitude("ratio r", ratio)?;
        validate_q(q, beta)?;
        self.entries
            .retain(|&(b, r, _)| !(same_beta(b, beta) && r == ratio));
        self.entries.push((beta, ratio, q));
        self.entries
            .sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        Ok(())
    }

    pub fn get(&self, beta: f64, ratio: f64) -> Option<f64> {
        let row: Vec<(f64, f64)> = self
            .entries
            .iter()
            .filter(|e| same_beta(e.0, beta))
            .map(|e| (e.1, e.2))
            .collect();
        let tol = 1e-12 * ratio.abs().max(1.0);
        if let Some(&(_, q)) = row.iter().find(|(r, _)| (r - ratio).abs() <= tol) {
            return Some(q);
        }
        match self.interpolation {
            Interpolation::Exact => None,
            Interpolation::Linear => row.windows(2).find_map(|w| {
                let ((r0, q0), (r1, q1)) = (w[0], w[1]);
                (r0 <= ratio && ratio <= r1).then(|| q0 + (q1 - q0) * (ratio - r0) / (r1 - r0))
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn validate_q(q: f64, beta: f64) -> Result<f64, MetrologyError> {
    if !(q > 0.0 && q <= 1.0) {
        return Err(MetrologyError::InvalidCoefficient {
            name: "q",
            value: q,
        });
    }
    let (lo, hi) = Q_RANGE_BETA_095;
    if same_beta(beta, 0.95) && !(lo..=hi).contains(&q) {
        return Err(MetrologyError::QOutOfRange { q, lo, hi });
    }
    Ok(q)
}

/// Resulting systematic error `min(Σ Δᵢ, k·√(Σ Δᵢ²))`; J is the number of
/// components.
pub fn combine_systematic(components: &[f64], k: f64) -> Result<f64, MetrologyError> {
    if components.is_empty() {
        return Err(MetrologyError::EmptyComponents);
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(MetrologyError::InvalidCoefficient {
            name: "k",
            value: k,
        });
    }
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for &c in components {
        magnitude("systematic component", c)?;
        sum += c;
        sum_sq += c * c;
    }
    Ok(sum.min(k * sum_sq.sqrt()))
}

/// Ratio `r = Δ_s / s` and the rule it selects. Both boundaries belong to
/// [`Rule::Blend`].
pub fn select_rule(systematic: f64, mean_variance: f64) -> Result<(f64, Rule), MetrologyError> {
    magnitude("systematic error", systematic)?;
    if !(mean_variance > 0.0 && mean_variance.is_finite()) {
        return Err(MetrologyError::DegenerateBudget(mean_variance));
    }
    let r = systematic / mean_variance;
    let rule = if r < RANDOM_DOMINATES_BELOW {
        Rule::RandomDominates
    } else if r > SYSTEMATIC_DOMINATES_ABOVE {
        Rule::SystematicDominates
    } else {
        Rule::Blend
    };
    Ok((r, rule))
}

/// Systematic error given either as constituents or already combined.
#[derive(Debug, Clone, PartialEq)]
pub enum Systematic {
    Components(Vec<f64>),
    Combined(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorBudget {
    /// Δ_r.
    pub random_error: f64,
    pub systematic: Systematic,
    /// s, the variance of the mean.
    pub mean_variance: f64,
    /// Confidence level β.
    pub beta: f64,
    pub k_table: KTable,
    pub q_table: QTable,
    /// Takes precedence over `k_table`.
    pub k: Option<f64>,
    /// Takes precedence over `q_table`.
    pub q: Option<f64>,
    /// |Π|, when a relative error is wanted.
    pub measured_value: Option<f64>,
}

impl ErrorBudget {
    /// A budget at β = 0.95 with the attested coefficient tables.
    pub fn new(random_error: f64, systematic: Systematic, mean_variance: f64) -> Self {
        ErrorBudget {
            random_error,
            systematic,
            mean_variance,
            beta: 0.95,
            k_table: KTable::attested(),
            q_table: QTable::default(),
            k: None,
            q: None,
            measured_value: None,
        }
    }

    /// Resulting systematic error Δ_s.
    pub fn systematic_error(&self) -> Result<f64, MetrologyError> {
        match &self.systematic {
            Systematic::Combined(s) => magnitude("systematic error", *s),
            Systematic::Components(c) => {
                if c.is_empty() {
                    return Err(MetrologyError::EmptyComponents);
                }
                let k =
                    match self.k {
                        Some(k) => k,
                        None => self.k_table.get(c.len(), self.beta).ok_or(
                            MetrologyError::MissingK {
                                count: c.len(),
                                beta: self.beta,
                            },
                        )?,
                    };
                combine_systematic(c, k)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinedError {
    /// Δ_t.
    pub total: f64,
    /// δ_t = Δ_t / |Π| when Π was supplied.
    pub relative: Option<f64>,
    pub rule: Rule,
    /// r = Δ_s / s.
    pub ratio: f64,
    /// Δ_s used for the combination.
    pub systematic: f64,
}

pub fn total_error(budget: &ErrorBudget) -> Result<CombinedError, MetrologyError> {
    check_beta(budget.beta)?;
    let random = magnitude("random error", budget.random_error)?;
    let systematic = budget.systematic_error()?;
    let (ratio, rule) = select_rule(systematic, budget.mean_variance)?;
    let total = match rule {
        Rule::RandomDominates => random,
        Rule::SystematicDominates => systematic,
        Rule::Blend => {
            let q = match budget.q {
                Some(q) => validate_q(q, budget.beta)?,
                None => budget
                    .q_table
                    .get(budget.beta, ratio)
                    .ok_or(MetrologyError::MissingQ {
                        ratio,
                        beta: budget.beta,
                    })?,
            };
            q * (random + systematic)
        }
    };
    let relative = match budget.measured_value {
        Some(v) if v == 0.0 || !v.is_finite() => return Err(MetrologyError::ZeroMeasuredValue),
        Some(v) => Some(total / v.abs()),
        None => None,
    };
    Ok(CombinedError {
        total,
        relative,
        rule,
        ratio,
        systematic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combine_examples() {
        assert!((combine_systematic(&[3.0, 4.0], 1.1).unwrap() - 5.5).abs() < 1e-12);
        assert_eq!(combine_systematic(&[2.5], 1.0).unwrap(), 2.5);
        assert_eq!(combine_systematic(&[2.5], 1.3).unwrap(), 2.5);
    }

    #[test]
    fn combine_rejects_bad_input() {
        assert_eq!(
            combine_systematic(&[], 1.1),
            Err(MetrologyError::EmptyComponents)
        );
        assert!(combine_systematic(&[1.0, -1.0], 1.1).is_err());
        assert!(combine_systematic(&[1.0], 0.0).is_err());
    }

    #[test]
    fn attested_k() {
        assert_eq!(KTable::attested().get(3, 0.95), Some(1.1));
        assert_eq!(KTable::attested().get(2, 0.95), None);
        assert_eq!(KTable::attested().get(3, 0.99), None);
    }

    #[test]
    fn rule_selection() {
        assert_eq!(select_rule(0.5, 1.0).unwrap().1, Rule::RandomDominates);
        assert_eq!(select_rule(10.0, 1.0).unwrap().1, Rule::SystematicDominates);
        assert_eq!(select_rule(1.0, 1.0).unwrap().1, Rule::Blend);
        assert_eq!(select_rule(0.8, 1.0).unwrap().1, Rule::Blend);
        assert_eq!(select_rule(8.0, 1.0).unwrap().1, Rule::Blend);
        assert_eq!(
            select_rule(1.0, 0.0),
            Err(MetrologyError::DegenerateBudget(0.0))
        );
    }

    #[test]
    fn systematic_dominated_relative_error() {
        // δ_s = 0.19 % of |Π| = 1, random 0.04 %, s small enough for r > 8
        let mut budget = ErrorBudget::new(0.0004, Systematic::Combined(0.0019), 0.0002);
        budget.measured_value = Some(1.0);
        let out = total_error(&budget).unwrap();
        assert_eq!(out.rule, Rule::SystematicDominates);
        assert!((out.relative.unwrap() - 0.0019).abs() < 1e-15);
    }

    #[test]
    fn random_dominated() {
        let budget = ErrorBudget::new(0.0004, Systematic::Combined(0.0001), 0.001);
        let out = total_error(&budget).unwrap();
        assert_eq!(out.rule, Rule::RandomDominates);
        assert_eq!(out.total, 0.0004);
    }

    #[test]
    fn blend_needs_q() {
        let budget = ErrorBudget::new(1.0, Systematic::Combined(1.0), 1.0);
        assert!(matches!(
            total_error(&budget),
            Err(MetrologyError::MissingQ { .. })
        ));
        let mut with_q = budget.clone();
        with_q.q = Some(0.71);
        assert!((total_error(&with_q).unwrap().total - 1.42).abs() < 1e-12);
    }

    #[test]
    fn q_table_lookup_and_interpolation() {
        let mut table = QTable::new(Interpolation::Exact);
        table.insert(0.95, 1.0, 0.71).unwrap();
        table.insert(0.95, 5.0, 0.81).unwrap();
        assert_eq!(table.get(0.95, 1.0), Some(0.71));
        assert_eq!(table.get(0.95, 3.0), None);
        table.interpolation = Interpolation::Linear;
        assert!((table.get(0.95, 3.0).unwrap() - 0.76).abs() < 1e-12);
        assert_eq!(table.get(0.95, 6.0), None);
        assert_eq!(table.get(0.99, 3.0), None);
    }

    #[test]
    fn q_range_enforced_at_095() {
        let mut table = QTable::default();
        assert!(matches!(
            table.insert(0.95, 2.0, 0.9),
            Err(MetrologyError::QOutOfRange { .. })
        ));
        assert!(table.insert(0.99, 2.0, 0.9).is_ok());
        assert!(table.insert(0.99, 2.0, 1.5).is_err());
    }

    #[test]
    fn k_from_table_by_component_count() {
        let budget = ErrorBudget::new(0.0, Systematic::Components(vec![3.0, 4.0, 0.0]), 0.1);
        assert!((budget.systematic_error().unwrap() - 5.5).abs() < 1e-12);
        let two = ErrorBudget::new(0.0, Systematic::Components(vec![3.0, 4.0]), 0.1);
        assert!(matches!(
            two.systematic_error(),
            Err(MetrologyError::MissingK { count: 2, .. })
        ));
    }

    #[test]
    fn zero_measured_value_rejected() {
        let mut budget = ErrorBudget::new(1.0, Systematic::Combined(0.1), 1.0);
        budget.measured_value = Some(0.0);
        assert_eq!(total_error(&budget), Err(MetrologyError::ZeroMeasuredValue));
    }

    #[test]
    fn interpolation_parsing() {
        assert_eq!(
            "linear".parse::<Interpolation>().unwrap(),
            Interpolation::Linear
        );
        assert_eq!(
            "none".parse::<Interpolation>().unwrap(),
            Interpolation::Exact
        );
        assert!("cubic".parse::<Interpolation>().is_err());
    }
}
