// reference values are the rounded four-decimal figures
#![allow(clippy::approx_constant)]

mod common;

use common::pv;
use extropy::scoring::{
    expected_score, expected_total_log, log_score, propriety_probe, quadratic_score,
    score_sequence, total_log_score, ForecastRecord, ScoringRule,
};
use extropy::simplex::{entropy, extropy, repeat_rate, simplex_lattice, ProbabilityVector};
use proptest::prelude::*;

fn forecast_and_outcome() -> impl Strategy<Value = (ProbabilityVector, usize)> {
    (2usize..20).prop_flat_map(|n| {
        (
            prop::collection::vec(1e-4f64..1.0, n)
                .prop_map(|w| ProbabilityVector::normalized(&w).unwrap()),
            0..n,
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn total_log_decomposes((p, o) in forecast_and_outcome()) {
        let rest: f64 = p
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != o)
            .map(|(_, x)| (1.0 - x).ln())
            .sum();
        let total = total_log_score(&p, o).unwrap();
        prop_assert!((total - (log_score(&p, o).unwrap() + rest)).abs() < 1e-12);
    }

    #[test]
    fn expected_total_log_is_minus_partition_sum((p, _) in forecast_and_outcome()) {
        prop_assert!((expected_total_log(&p) + entropy(&p) + extropy(&p)).abs() < 1e-12);
    }

    #[test]
    fn expected_quadratic_is_repeat_rate((p, _) in forecast_and_outcome()) {
        let e = expected_score(&p, ScoringRule::Quadratic, &p).unwrap();
        prop_assert!((e - repeat_rate(&p)).abs() < 1e-12);
    }

    #[test]
    fn log_score_ignores_non_occurring_mass((p, o) in forecast_and_outcome(), seed in any::<u64>()) {
        prop_assume!(p.len() >= 3);
        let mut r = common::rng(seed);
        let rest = common::random_pmf(&mut r, p.len() - 1);
        let po = p.masses()[o];
        let mut moved: Vec<f64> = rest.iter().map(|x| x * (1.0 - po)).collect();
        moved.insert(o, po);
        let q = ProbabilityVector::normalized(&moved).unwrap();
        prop_assert!((log_score(&p, o).unwrap() - log_score(&q, o).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn sequence_totals_are_sums(recs in prop::collection::vec(forecast_and_outcome(), 1..30)) {
        let records: Vec<ForecastRecord> = recs
            .into_iter()
            .enumerate()
            .map(|(i, (p, o))| ForecastRecord::new(format!("r{i}"), p, o).unwrap())
            .collect();
        let report = score_sequence(&records, &ScoringRule::ALL).unwrap();
        prop_assert_eq!(report.per_record.len(), records.len() * 3);
        for rule in ScoringRule::ALL {
            let direct: f64 = records.iter().map(|r| rule.score(&r.forecast, r.outcome).unwrap()).sum();
            let total = report.total(rule).unwrap();
            prop_assert!((total.total - direct).abs() < 1e-9);
            prop_assert!(total.finite);
        }
    }
}

#[test]
fn total_log_is_not_local() {
    let a = pv(&[0.5, 0.25, 0.25]);
    let b = pv(&[0.5, 0.5, 0.0]);
    assert_eq!(log_score(&a, 0).unwrap(), log_score(&b, 0).unwrap());
    assert!((total_log_score(&a, 0).unwrap() - total_log_score(&b, 0).unwrap()).abs() > 0.1);
}

#[test]
fn worked_record() {
    let p = pv(&[0.2, 0.5, 0.3]);
    assert!((log_score(&p, 1).unwrap() + 0.6931).abs() < 5e-5);
    assert!((total_log_score(&p, 1).unwrap() + 1.2730).abs() < 5e-5);
    assert!((quadratic_score(&p, 1).unwrap() - 0.62).abs() < 1e-12);
}

fn assert_proper(truth: &ProbabilityVector, grid: &[ProbabilityVector]) {
    for rule in ScoringRule::ALL {
        let probe = propriety_probe(truth, rule, grid).unwrap();
        let best = &grid[probe.argmax];
        assert!(
            best.sup_distance(truth).unwrap() < 1e-12,
            "{rule}: best was {best}"
        );
        let at_truth = expected_score(truth, rule, truth).unwrap();
        for (c, e) in grid.iter().zip(&probe.expected) {
            if c.sup_distance(truth).unwrap() >= 0.01 {
                assert!(*e < at_truth, "{rule}: {c} scores {e} >= {at_truth}");
            }
        }
    }
}

#[test]
fn rules_are_proper_on_grids() {
    let truth = pv(&[0.6, 0.4]);
    assert_proper(&truth, &simplex_lattice(2, 100).unwrap());

    let u = ProbabilityVector::uniform(3).unwrap();
    let mut grid = simplex_lattice(3, 10).unwrap();
    grid.push(u.clone());
    assert_proper(&u, &grid);

    let truth = pv(&[0.2, 0.3, 0.5]);
    assert_proper(&truth, &simplex_lattice(3, 20).unwrap());
}

#[test]
fn impossible_outcome_is_flagged_not_fatal() {
    let records = vec![
        ForecastRecord::new("a", pv(&[0.5, 0.5]), 0).unwrap(),
        ForecastRecord::new("b", pv(&[0.0, 1.0]), 0).unwrap(),
    ];
    let report =
        score_sequence(&records, &[ScoringRule::TotalLog, ScoringRule::Quadratic]).unwrap();
    let t = report.total(ScoringRule::TotalLog).unwrap();
    assert!(!t.finite && t.total == f64::NEG_INFINITY);
    assert!(report.total(ScoringRule::Quadratic).unwrap().finite);
}
