//! Proper scoring rules for categorical forecasts.
//!
//! Scores are rewards: larger is better, and a forecast that put zero
//! probability on what happened scores `-∞`. The total log score adds to the
//! usual log score the log-probabilities of every outcome that did *not*
//! occur; its expectation under the forecast is `-(H + J)`.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::simplex::ProbabilityVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScoringRule {
    /// `ln p_o`
    Log,
    /// `ln p_o + Σ_{i≠o} ln(1 - p_i)`
    TotalLog,
    /// `2 p_o - Σ p_i²`
    Quadratic,
}

impl ScoringRule {
    pub const ALL: [ScoringRule; 3] = [
        ScoringRule::Log,
        ScoringRule::TotalLog,
        ScoringRule::Quadratic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ScoringRule::Log => "log",
            ScoringRule::TotalLog => "totallog",
            ScoringRule::Quadratic => "quadratic",
        }
    }

    pub fn score(self, pv: &ProbabilityVector, outcome: usize) -> Result<f64> {
        match self {
            ScoringRule::Log => log_score(pv, outcome),
            ScoringRule::TotalLog => total_log_score(pv, outcome),
            ScoringRule::Quadratic => quadratic_score(pv, outcome),
        }
    }

    fn is_log_family(self) -> bool {
        matches!(self, ScoringRule::Log | ScoringRule::TotalLog)
    }
}

impl fmt::Display for ScoringRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ScoringRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "log" => Ok(ScoringRule::Log),
            "totallog" | "total-log" | "total_log" => Ok(ScoringRule::TotalLog),
            "quadratic" | "brier" => Ok(ScoringRule::Quadratic),
            other => Err(Error::UnknownRule(other.to_string())),
        }
    }
}

/// Parses a comma-separated rule list, dropping duplicates but keeping order.
pub fn parse_rules(list: &str) -> Result<Vec<ScoringRule>> {
    let mut rules = Vec::new();
    for part in list.split(',').filter(|s| !s.trim().is_empty()) {
        let rule: ScoringRule = part.parse()?;
        if !rules.contains(&rule) {
            rules.push(rule);
        }
    }
    if rules.is_empty() {
        return Err(Error::UnknownRule(list.to_string()));
    }
    Ok(rules)
}

fn check_outcome(pv: &ProbabilityVector, outcome: usize) -> Result<()> {
    if outcome < pv.len() {
        Ok(())
    } else {
        Err(Error::IndexOutOfRange {
            index: outcome,
            n: pv.len(),
        })
    }
}

/// `ln p_o`; `-∞` when the outcome had zero probability.
pub fn log_score(pv: &ProbabilityVector, outcome: usize) -> Result<f64> {
    check_outcome(pv, outcome)?;
    let p = pv.masses()[outcome];
    Ok(if p == 0.0 { f64::NEG_INFINITY } else { p.ln() })
}

/// `ln p_o + Σ_{i≠o} ln(1 - p_i)`.
///
/// `-∞` when `p_o = 0` or some outcome that did not occur had probability 1.
pub fn total_log_score(pv: &ProbabilityVector, outcome: usize) -> Result<f64> {
    let mut score = log_score(pv, outcome)?;
    for (i, p) in pv.iter().enumerate() {
        if i == outcome {
            continue;
        }
        score += if p >= 1.0 {
            f64::NEG_INFINITY
        } else {
            (-p).ln_1p()
        };
    }
    Ok(score)
}

/// `2 p_o - Σ p_i²`, in `[-1, 1]`.
pub fn quadratic_score(pv: &ProbabilityVector, outcome: usize) -> Result<f64> {
    check_outcome(pv, outcome)?;
    let repeat: f64 = pv.iter().map(|p| p * p).sum();
    Ok(2.0 * pv.masses()[outcome] - repeat)
}

/// Expected score of `candidate` when outcomes follow `truth`, by exact
/// summation over outcomes. Outcomes with zero true probability are skipped.
pub fn expected_score(
    truth: &ProbabilityVector,
    rule: ScoringRule,
    candidate: &ProbabilityVector,
) -> Result<f64> {
    if truth.len() != candidate.len() {
        return Err(Error::DimensionMismatch {
            left: truth.len(),
            right: candidate.len(),
        });
    }
    let mut total = 0.0;
    for (o, w) in truth.iter().enumerate() {
        if w > 0.0 {
            total += w * rule.score(candidate, o)?;
        }
    }
    Ok(total)
}

/// Expected total log score of a forecast under itself.
pub fn expected_total_log(pv: &ProbabilityVector) -> f64 {
    expected_score(pv, ScoringRule::TotalLog, pv).expect("dimensions match")
}

/// A forecast distribution and the index of the outcome that occurred.
#[derive(Debug, Clone, PartialEq)]
pub struct ForecastRecord {
    pub id: String,
    /// Who issued the forecast, when a file compares several forecasters.
    pub forecaster: Option<String>,
    pub forecast: ProbabilityVector,
    pub outcome: usize,
}

impl ForecastRecord {
    pub fn new(id: impl Into<String>, forecast: ProbabilityVector, outcome: usize) -> Result<Self> {
        check_outcome(&forecast, outcome)?;
        Ok(Self {
            id: id.into(),
            forecaster: None,
            forecast,
            outcome,
        })
    }

    pub fn with_forecaster(mut self, name: impl Into<String>) -> Self {
        self.forecaster = Some(name.into());
        self
    }

    /// Forecast probability of the outcome that occurred.
    pub fn realized_probability(&self) -> f64 {
        self.forecast.masses()[self.outcome]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecordScore {
    pub id: String,
    pub rule: ScoringRule,
    pub score: f64,
    pub finite: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleTotal {
    pub rule: ScoringRule,
    pub total: f64,
    pub finite: bool,
}

/// Per-record scores in input order, followed by per-rule totals.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreReport {
    pub per_record: Vec<RecordScore>,
    pub totals: Vec<RuleTotal>,
    pub record_count: usize,
}

impl ScoreReport {
    pub fn total(&self, rule: ScoringRule) -> Option<&RuleTotal> {
        self.totals.iter().find(|t| t.rule == rule)
    }
}

/// Scores every record under every rule.
///
/// Records are scored in parallel but rows come back in input order, and
/// totals accumulate in input order so they do not depend on scheduling. An
/// infinite score makes that rule's total `-∞` with `finite = false`.
pub fn score_sequence(records: &[ForecastRecord], rules: &[ScoringRule]) -> Result<ScoreReport> {
    if records.is_empty() {
        return Err(Error::NoRecords);
    }
    let mut unique: Vec<ScoringRule> = Vec::with_capacity(rules.len());
    for &r in rules {
        if !unique.contains(&r) {
            unique.push(r);
        }
    }
    let rows: Vec<Vec<RecordScore>> = records
        .par_iter()
        .map(|rec| {
            unique
                .iter()
                .map(|&rule| {
                    let score = rule.score(&rec.forecast, rec.outcome)?;
                    Ok(RecordScore {
                        id: rec.id.clone(),
                        rule,
                        score,
                        finite: score.is_finite(),
                    })
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;

    let totals = unique
        .iter()
        .enumerate()
        .map(|(k, &rule)| {
            let mut total = 0.0;
            let mut finite = true;
            for row in &rows {
                let s = &row[k];
                if s.finite {
                    total += s.score;
                } else {
                    finite = false;
                }
            }
            RuleTotal {
                rule,
                total: if finite { total } else { f64::NEG_INFINITY },
                finite,
            }
        })
        .collect();

    Ok(ScoreReport {
        per_record: rows.into_iter().flatten().collect(),
        totals,
        record_count: records.len(),
    })
}

/// Expected scores of each grid candidate under the truth, and the best one.
#[derive(Debug, Clone, PartialEq)]
pub struct ProprietyProbe {
    /// Index into the candidate grid of the highest expected score; the first
    /// one wins ties.
    pub argmax: usize,
    pub expected: Vec<f64>,
}

/// Checks propriety of `rule` on a finite grid of candidate reports: when
/// the rule is proper, the best candidate is the truth itself.
pub fn propriety_probe(
    truth: &ProbabilityVector,
    rule: ScoringRule,
    grid: &[ProbabilityVector],
) -> Result<ProprietyProbe> {
    if rule.is_log_family() {
        if let Some((index, value)) = truth.iter().enumerate().find(|&(_, p)| p <= 0.0) {
            return Err(Error::BoundaryPoint { index, value });
        }
    }
    let contains_truth = grid
        .iter()
        .any(|c| c.sup_distance(truth).map(|d| d <= 1e-12).unwrap_or(false));
    if !contains_truth {
        return Err(Error::TruthNotInGrid);
    }
    let expected = grid
        .iter()
        .map(|c| expected_score(truth, rule, c))
        .collect::<Result<Vec<_>>>()?;
    let mut argmax = 0;
    for (i, &e) in expected.iter().enumerate() {
        if e > expected[argmax] {
            argmax = i;
        }
    }
    Ok(ProprietyProbe { argmax, expected })
}
