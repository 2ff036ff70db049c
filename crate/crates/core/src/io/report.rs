//! Machine-readable reports for each `extropy` subcommand.

use std::fmt::Write as _;
use std::str::FromStr;

use serde::Serialize;

use super::number::{format_number, num, num_opt, num_vec};
use super::{forecast::ForecastFile, IoError};
use crate::continuum::{
    convergence_probe, differential_entropy, differential_extropy, relative_entropy_density,
    relative_extropy_density, DensityGrid, ProbeRow, ProbeTargets, ProbeValue,
};
use crate::divergence::{
    complementary_divergence, half_euclidean, kl_divergence, ExtendedNonNegative,
};
use crate::scoring::{score_sequence, ScoreReport, ScoringRule};
use crate::simplex::{
    complement, entropy, extropy, gap, iterate_complement, max_entropy_value, max_extropy_value,
    partition_sum, ProbabilityVector,
};

/// Relative gap below which half the squared Euclidean distance is reported
/// as a good stand-in for relative extropy.
pub const EUCLID_AGREEMENT: f64 = 0.02;

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

/// Parses a pmf written as comma or whitespace separated masses. Each mass
/// may be a decimal or a fraction such as `1/4`.
pub fn parse_pmf(text: &str) -> Result<ProbabilityVector, IoError> {
    let masses = text
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|tok| {
            let value = match tok.split_once('/') {
                Some((a, b)) => match (a.parse::<f64>(), b.parse::<f64>()) {
                    (Ok(a), Ok(b)) if b != 0.0 => Ok(a / b),
                    _ => Err(()),
                },
                None => tok.parse::<f64>().map_err(|_| ()),
            };
            value.map_err(|_| IoError::Format(format!("`{tok}` is not a probability")))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ProbabilityVector::new(masses)?)
}

/// `{"value": x, "finite": bool, "clamped": bool}` with `x = "inf"` when
/// infinite.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ExtValue {
    #[serde(serialize_with = "num")]
    pub value: f64,
    pub finite: bool,
    pub clamped: bool,
}

impl From<ExtendedNonNegative> for ExtValue {
    fn from(v: ExtendedNonNegative) -> Self {
        Self {
            value: v.value(),
            finite: v.is_finite(),
            clamped: v.was_clamped(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct MeasureReport {
    pub n: usize,
    #[serde(serialize_with = "num_vec")]
    pub pmf: Vec<f64>,
    #[serde(serialize_with = "num")]
    pub entropy: f64,
    #[serde(serialize_with = "num")]
    pub extropy: f64,
    /// `H + J`
    #[serde(serialize_with = "num")]
    pub sum: f64,
    /// `H - J`
    #[serde(serialize_with = "num")]
    pub gap: f64,
    /// `Σ H(p_i, 1 - p_i)`, which should equal `sum`.
    #[serde(serialize_with = "num")]
    pub partition_sum: f64,
    #[serde(serialize_with = "num_vec")]
    pub complement: Vec<f64>,
    #[serde(serialize_with = "num_opt")]
    pub complement_entropy: Option<f64>,
    /// `(n - 1) [H(q) - ln(n - 1)]`, which should equal `extropy`.
    #[serde(serialize_with = "num_opt")]
    pub extropy_from_complement: Option<f64>,
    #[serde(serialize_with = "num")]
    pub max_entropy: f64,
    #[serde(serialize_with = "num")]
    pub max_extropy: f64,
}

pub fn measure_report(pv: &ProbabilityVector) -> MeasureReport {
    let n = pv.len();
    let q = complement(pv).ok();
    let complement_entropy = q.as_ref().map(entropy);
    MeasureReport {
        n,
        pmf: pv.masses().to_vec(),
        entropy: entropy(pv),
        extropy: extropy(pv),
        sum: entropy(pv) + extropy(pv),
        gap: gap(pv),
        partition_sum: partition_sum(pv),
        complement: q.map(ProbabilityVector::into_vec).unwrap_or_default(),
        complement_entropy,
        extropy_from_complement: complement_entropy
            .map(|h| (n - 1) as f64 * (h - ((n - 1) as f64).ln())),
        max_entropy: max_entropy_value(n),
        max_extropy: max_extropy_value(n),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DivergeMode {
    Kl,
    Ckl,
    Euclid,
    All,
}

impl FromStr for DivergeMode {
    type Err = IoError;

    fn from_str(s: &str) -> Result<Self, IoError> {
        match s.to_ascii_lowercase().as_str() {
            "kl" => Ok(DivergeMode::Kl),
            "ckl" => Ok(DivergeMode::Ckl),
            "euclid" => Ok(DivergeMode::Euclid),
            "all" => Ok(DivergeMode::All),
            other => Err(IoError::Format(format!(
                "unknown divergence mode `{other}`"
            ))),
        }
    }
}

/// Signed residuals of the exact identities linking the divergences; each
/// should be zero up to rounding. `None` where a side is infinite.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct IdentityResiduals {
    /// `Dᶜ(p‖s) - (n - 1) D(q‖t)` for the complements `q`, `t`.
    #[serde(serialize_with = "num_opt")]
    pub complement_kl: Option<f64>,
    /// `Dᶜ(p‖s) - [J(s) - J(p) + E_p ln t - E_s ln t]`.
    #[serde(serialize_with = "num_opt")]
    pub ckl_expectation: Option<f64>,
    /// `D(p‖s) - [H(s) - H(p) - E_p ln s + E_s ln s]`.
    #[serde(serialize_with = "num_opt")]
    pub kl_expectation: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DivergeReport {
    pub mode: DivergeMode,
    pub n: usize,
    pub kl: Option<ExtValue>,
    pub ckl: Option<ExtValue>,
    #[serde(serialize_with = "num_opt")]
    pub euclid: Option<f64>,
    /// Whether `euclid` is within 2% of `ckl` (the small-mass regime).
    pub euclid_approximates_ckl: Option<bool>,
    pub residuals: Option<IdentityResiduals>,
}

/// `Σ w_i ln x_i`, skipping zero weights; `None` if a weighted `x_i` is 0.
fn expected_log(weights: &ProbabilityVector, xs: &ProbabilityVector) -> Option<f64> {
    let mut sum = 0.0;
    for (w, x) in weights.iter().zip(xs.iter()) {
        if w > 0.0 {
            if x <= 0.0 {
                return None;
            }
            sum += w * x.ln();
        }
    }
    Some(sum)
}

pub fn identity_residuals(
    p: &ProbabilityVector,
    s: &ProbabilityVector,
) -> crate::Result<IdentityResiduals> {
    let n = p.len();
    let kl = kl_divergence(p, s)?;
    let ckl = complementary_divergence(p, s)?;

    let complement_kl = if n >= 2 {
        let via = kl_divergence(&complement(p)?, &complement(s)?)?;
        match (ckl.finite(), via.finite()) {
            (Some(a), Some(b)) => Some(a - (n - 1) as f64 * b),
            _ => None,
        }
    } else {
        None
    };

    let ckl_expectation = match (ckl.finite(), n >= 2) {
        (Some(d), true) => {
            let t = complement(s)?;
            match (expected_log(p, &t), expected_log(s, &t)) {
                (Some(ep), Some(es)) => Some(d - (extropy(s) - extropy(p) + ep - es)),
                _ => None,
            }
        }
        _ => None,
    };

    let kl_expectation = kl.finite().and_then(|d| {
        let ep = expected_log(p, s)?;
        let es = expected_log(s, s)?;
        Some(d - (entropy(s) - entropy(p) - ep + es))
    });

    Ok(IdentityResiduals {
        complement_kl,
        ckl_expectation,
        kl_expectation,
    })
}

pub fn diverge_report(
    p: &ProbabilityVector,
    s: &ProbabilityVector,
    mode: DivergeMode,
) -> crate::Result<DivergeReport> {
    let want = |m: DivergeMode| mode == m || mode == DivergeMode::All;
    let kl = kl_divergence(p, s)?;
    let ckl = complementary_divergence(p, s)?;
    let euclid = half_euclidean(p, s)?;
    let agree = match ckl.finite() {
        Some(c) if euclid > 0.0 => (euclid - c).abs() / euclid < EUCLID_AGREEMENT,
        Some(c) => c == 0.0,
        None => false,
    };
    Ok(DivergeReport {
        mode,
        n: p.len(),
        kl: want(DivergeMode::Kl).then(|| kl.into()),
        ckl: want(DivergeMode::Ckl).then(|| ckl.into()),
        euclid: want(DivergeMode::Euclid).then_some(euclid),
        euclid_approximates_ckl: want(DivergeMode::Euclid).then_some(agree),
        residuals: if mode == DivergeMode::All {
            Some(identity_residuals(p, s)?)
        } else {
            None
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct TrajectoryStep {
    pub step: usize,
    #[serde(serialize_with = "num_vec")]
    pub pmf: Vec<f64>,
    #[serde(serialize_with = "num")]
    pub sup_distance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContractReport {
    pub n: usize,
    pub steps: usize,
    pub contracting: bool,
    pub trajectory: Vec<TrajectoryStep>,
}

pub fn contract_report(pv: &ProbabilityVector, k: usize) -> crate::Result<ContractReport> {
    let traj = iterate_complement(pv, k)?;
    let distances = traj.distances();
    Ok(ContractReport {
        n: pv.len(),
        steps: k,
        contracting: traj.contracting,
        trajectory: traj
            .points
            .into_iter()
            .zip(distances)
            .enumerate()
            .map(|(step, (p, d))| TrajectoryStep {
                step,
                pmf: p.into_vec(),
                sup_distance: d,
            })
            .collect(),
    })
}

impl ContractReport {
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("step\tsup_distance");
        for i in 1..=self.n {
            write!(out, "\tp_{i}").unwrap();
        }
        out.push('\n');
        for s in &self.trajectory {
            write!(out, "{}\t{}", s.step, format_number(s.sup_distance)).unwrap();
            for p in &s.pmf {
                write!(out, "\t{}", format_number(*p)).unwrap();
            }
            out.push('\n');
        }
        out
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ProbeCell {
    #[serde(serialize_with = "num")]
    pub discrete: f64,
    #[serde(serialize_with = "num")]
    pub target: f64,
    #[serde(serialize_with = "num")]
    pub error: f64,
}

impl From<ProbeValue> for ProbeCell {
    fn from(v: ProbeValue) -> Self {
        Self {
            discrete: v.discrete,
            target: v.target,
            error: v.error,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeLine {
    pub nodes: usize,
    #[serde(serialize_with = "num")]
    pub step: f64,
    pub entropy: ProbeCell,
    pub extropy: ProbeCell,
    pub relative_extropy: Option<ProbeCell>,
}

impl From<ProbeRow> for ProbeLine {
    fn from(r: ProbeRow) -> Self {
        Self {
            nodes: r.nodes,
            step: r.step,
            entropy: r.entropy.into(),
            extropy: r.extropy.into(),
            relative_extropy: r.relative_extropy.map(Into::into),
        }
    }
}

/// Gaps between the relative measures against the uniform density and the
/// corresponding differences of differential measures. Both vanish exactly
/// in real arithmetic.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct UniformResiduals {
    /// `d(f‖u) - [h(u) - h(f)]`
    #[serde(serialize_with = "num")]
    pub entropy: f64,
    /// `dᶜ(f‖u) - [j(u) - j(f)]`
    #[serde(serialize_with = "num")]
    pub extropy: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContinuumReport {
    #[serde(serialize_with = "num")]
    pub lower: f64,
    #[serde(serialize_with = "num")]
    pub upper: f64,
    pub nodes: usize,
    /// `file` when a reference density was supplied, otherwise `uniform`.
    pub reference: &'static str,
    #[serde(serialize_with = "num")]
    pub entropy: f64,
    #[serde(serialize_with = "num")]
    pub extropy: f64,
    pub relative_entropy: ExtValue,
    #[serde(serialize_with = "num")]
    pub relative_extropy: f64,
    pub uniform_residuals: UniformResiduals,
    pub probe: Vec<ProbeLine>,
}

/// Differential and relative measures of `f` against `g` (uniform on the
/// same nodes when absent), plus discretization probes at each grid size.
/// Probe grids are piecewise-linear resamplings of the inputs, and the probe
/// targets are the measures computed on the input grids.
pub fn continuum_report(
    f: &DensityGrid,
    g: Option<&DensityGrid>,
    sizes: &[usize],
) -> crate::Result<ContinuumReport> {
    let uniform = f.uniform_reference();
    let (g, reference) = match g {
        Some(g) => (g, "file"),
        None => (&uniform, "uniform"),
    };
    let h = differential_entropy(f);
    let j = differential_extropy(f);
    let d = relative_entropy_density(f, g)?;
    let dc = relative_extropy_density(f, g)?;

    let d_u = relative_entropy_density(f, &uniform)?.value();
    let dc_u = relative_extropy_density(f, &uniform)?;
    let residuals = UniformResiduals {
        entropy: d_u - (differential_entropy(&uniform) - h),
        extropy: dc_u - (differential_extropy(&uniform) - j),
    };

    let targets = ProbeTargets {
        entropy: h,
        extropy: j,
        relative_extropy: Some(dc),
    };
    let probe = convergence_probe(sizes, &targets, |n| {
        Ok((f.resample(n)?, Some(g.resample(n)?)))
    })?;

    Ok(ContinuumReport {
        lower: f.lower(),
        upper: f.upper(),
        nodes: f.len(),
        reference,
        entropy: h,
        extropy: j,
        relative_entropy: d.into(),
        relative_extropy: dc,
        uniform_residuals: residuals,
        probe: probe.into_iter().map(Into::into).collect(),
    })
}

impl ContinuumReport {
    /// The probe table alone, one row per grid size.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from(
            "nodes\tstep\tentropy_probe\tentropy_error\textropy_probe\textropy_error\trelative_extropy_probe\trelative_extropy_error\n",
        );
        for r in &self.probe {
            let (dc, dc_err) = match r.relative_extropy {
                Some(c) => (format_number(c.discrete), format_number(c.error)),
                None => (String::new(), String::new()),
            };
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                r.nodes,
                format_number(r.step),
                format_number(r.entropy.discrete),
                format_number(r.entropy.error),
                format_number(r.extropy.discrete),
                format_number(r.extropy.error),
                dc,
                dc_err
            )
            .unwrap();
        }
        out
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ScoreRow {
    pub id: String,
    pub rule: ScoringRule,
    #[serde(serialize_with = "num")]
    pub score: f64,
    pub finite: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TotalRow {
    pub rule: ScoringRule,
    #[serde(serialize_with = "num")]
    pub total: f64,
    pub finite: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ForecasterScores {
    pub forecaster: String,
    pub record_count: usize,
    pub totals: Vec<TotalRow>,
    pub per_record: Vec<ScoreRow>,
}

/// Scores for every forecaster in a file, side by side.
#[derive(Debug, Clone, Serialize)]
pub struct ScoreOutput {
    pub rules: Vec<ScoringRule>,
    pub forecasters: Vec<ForecasterScores>,
}

/// Name used for records without an explicit forecaster.
pub const DEFAULT_FORECASTER: &str = "forecast";

fn forecaster_scores(name: String, report: ScoreReport) -> ForecasterScores {
    ForecasterScores {
        forecaster: name,
        record_count: report.record_count,
        totals: report
            .totals
            .into_iter()
            .map(|t| TotalRow {
                rule: t.rule,
                total: t.total,
                finite: t.finite,
            })
            .collect(),
        per_record: report
            .per_record
            .into_iter()
            .map(|r| ScoreRow {
                id: r.id,
                rule: r.rule,
                score: r.score,
                finite: r.finite,
            })
            .collect(),
    }
}

pub fn score_report(file: &ForecastFile, rules: &[ScoringRule]) -> crate::Result<ScoreOutput> {
    let mut forecasters = Vec::new();
    for name in file.forecasters() {
        let records = file.records_of(&name);
        let report = score_sequence(&records, rules)?;
        let label = name.unwrap_or_else(|| DEFAULT_FORECASTER.to_string());
        forecasters.push(forecaster_scores(label, report));
    }
    if forecasters.is_empty() {
        return Err(crate::Error::NoRecords);
    }
    let mut unique = Vec::new();
    for &r in rules {
        if !unique.contains(&r) {
            unique.push(r);
        }
    }
    Ok(ScoreOutput {
        rules: unique,
        forecasters,
    })
}

impl ScoreOutput {
    /// `kind,forecaster,id,rule,score,finite` rows: every record score, then
    /// one `total` row per forecaster and rule.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("kind,forecaster,id,rule,score,finite\n");
        for f in &self.forecasters {
            for r in &f.per_record {
                writeln!(
                    out,
                    "record,{},{},{},{},{}",
                    f.forecaster,
                    r.id,
                    r.rule,
                    format_number(r.score),
                    r.finite
                )
                .unwrap();
            }
        }
        for f in &self.forecasters {
            for t in &f.totals {
                writeln!(
                    out,
                    "total,{},,{},{},{}",
                    f.forecaster,
                    t.rule,
                    format_number(t.total),
                    t.finite
                )
                .unwrap();
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::forecast::{parse_forecasts_str, ForecastFormat};

    #[test]
    fn pmf_parsing() {
        assert_eq!(
            parse_pmf("1/4, 1/2 ,1/4").unwrap().masses(),
            &[0.25, 0.5, 0.25]
        );
        assert_eq!(parse_pmf("0.3 0.7").unwrap().masses(), &[0.3, 0.7]);
        assert!(parse_pmf("1/0,1").is_err());
        assert!(parse_pmf("a,b").is_err());
        assert!(matches!(parse_pmf("0.3,0.3"), Err(IoError::Invalid(_))));
    }

    #[test]
    fn measure_of_worked_example() {
        let r = measure_report(&parse_pmf("1/4,1/2,1/4").unwrap());
        assert!((r.entropy - 1.0397).abs() < 5e-4);
        assert!((r.extropy - 0.7781).abs() < 5e-4);
        assert!((r.complement_entropy.unwrap() - 1.0822).abs() < 5e-4);
        assert!((r.extropy_from_complement.unwrap() - r.extropy).abs() < 1e-12);
        assert_eq!(r.complement, vec![0.375, 0.25, 0.375]);
    }

    #[test]
    fn measure_of_certainty_and_singleton() {
        let r = measure_report(&parse_pmf("1,0,0").unwrap());
        assert_eq!((r.entropy, r.extropy, r.sum, r.gap), (0.0, 0.0, 0.0, 0.0));
        assert_eq!(r.complement, vec![0.0, 0.5, 0.5]);
        let r = measure_report(&parse_pmf("1").unwrap());
        assert!(r.complement.is_empty());
        assert!(r.extropy_from_complement.is_none());
    }

    #[test]
    fn measure_of_uniform_five() {
        let r = measure_report(&ProbabilityVector::uniform(5).unwrap());
        assert!((r.entropy - 5f64.ln()).abs() < 1e-15);
        assert!((r.extropy - 4.0 * 1.25f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn diverge_modes() {
        let p = parse_pmf("1/4,1/2,1/4").unwrap();
        let u = ProbabilityVector::uniform(3).unwrap();
        let r = diverge_report(&p, &u, DivergeMode::All).unwrap();
        assert!((r.kl.unwrap().value - 0.0589).abs() < 5e-4);
        assert!((r.ckl.unwrap().value - 0.0328).abs() < 5e-4);
        let res = r.residuals.unwrap();
        for v in [res.complement_kl, res.ckl_expectation, res.kl_expectation] {
            assert!(v.unwrap().abs() < 1e-12);
        }

        let same = diverge_report(&p, &p, DivergeMode::All).unwrap();
        assert_eq!(same.kl.unwrap().value, 0.0);
        assert_eq!(same.ckl.unwrap().value, 0.0);
        assert_eq!(same.euclid, Some(0.0));

        let kl_only = diverge_report(&p, &u, DivergeMode::Kl).unwrap();
        assert!(kl_only.ckl.is_none() && kl_only.euclid.is_none() && kl_only.residuals.is_none());

        let edge = parse_pmf("1,0,0").unwrap();
        let r = diverge_report(&p, &edge, DivergeMode::All).unwrap();
        assert!(!r.kl.unwrap().finite);
        assert!(r.residuals.unwrap().kl_expectation.is_none());
        assert!(to_json(&r).contains("\"inf\""));

        assert!(diverge_report(&p, &parse_pmf("0.5,0.5").unwrap(), DivergeMode::Kl).is_err());
    }

    #[test]
    fn contract_tsv() {
        let r = contract_report(&parse_pmf("1/4,1/2,1/4").unwrap(), 2).unwrap();
        assert_eq!(r.trajectory.len(), 3);
        assert_eq!(r.trajectory[1].pmf, vec![0.375, 0.25, 0.375]);
        let tsv = r.to_tsv();
        assert_eq!(
            tsv.lines().next().unwrap(),
            "step\tsup_distance\tp_1\tp_2\tp_3"
        );
        assert_eq!(
            tsv.lines().nth(2).unwrap(),
            "1\t0.08333333333\t0.375\t0.25\t0.375"
        );
    }

    #[test]
    fn score_csv_layout() {
        let file = parse_forecasts_str(
            "id,p_1,p_2,p_3,outcome\nr1,0.2,0.5,0.3,1\n",
            ForecastFormat::Csv,
        )
        .unwrap();
        let out = score_report(&file, &[ScoringRule::Log, ScoringRule::TotalLog]).unwrap();
        assert_eq!(
            out.to_csv(),
            "kind,forecaster,id,rule,score,finite\n\
             record,forecast,r1,log,-0.6931471806,true\n\
             record,forecast,r1,totallog,-1.272965676,true\n\
             total,forecast,,log,-0.6931471806,true\n\
             total,forecast,,totallog,-1.272965676,true\n"
        );
    }
}
