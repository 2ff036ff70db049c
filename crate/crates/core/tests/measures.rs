mod common;

use common::{oracle, pv};
use extropy::simplex::{
    binary_measure, complement, entropy, entropy_refinement_delta, extropy,
    extropy_quadratic_approx, extropy_refinement_delta, gap, iterate_complement, joint_entropy,
    max_entropy_value, max_extropy_value, partition_sum, pointwise_kernels, refine,
    ProbabilityVector,
};
use proptest::prelude::*;

fn weights(min_len: usize, max_len: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(
        prop_oneof![4 => 1e-6f64..1.0, 1 => Just(0.0)],
        min_len..max_len,
    )
    .prop_filter("some mass", |w| w.iter().any(|&x| x > 0.0))
}

fn pmf(min_len: usize, max_len: usize) -> impl Strategy<Value = ProbabilityVector> {
    weights(min_len, max_len).prop_map(|w| ProbabilityVector::normalized(&w).unwrap())
}

fn interior_pmf(min_len: usize, max_len: usize) -> impl Strategy<Value = ProbabilityVector> {
    prop::collection::vec(1e-3f64..1.0, min_len..max_len)
        .prop_map(|w| ProbabilityVector::normalized(&w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn measures_match_direct_sums(p in pmf(1, 50)) {
        prop_assert!((entropy(&p) - oracle::entropy(p.masses())).abs() < 1e-12);
        prop_assert!((extropy(&p) - oracle::extropy(p.masses())).abs() < 1e-12);
    }

    #[test]
    fn partition_sum_is_entropy_plus_extropy(p in pmf(2, 50)) {
        prop_assert!((entropy(&p) + extropy(&p) - partition_sum(&p)).abs() < 1e-12);
    }

    #[test]
    fn extropy_is_rescaled_complement_entropy(p in pmf(2, 50)) {
        let m = (p.len() - 1) as f64;
        let q = complement(&p).unwrap();
        prop_assert!((extropy(&p) - m * (entropy(&q) - m.ln())).abs() < 1e-12);
        let direct = oracle::complement(p.masses());
        for (a, b) in q.iter().zip(direct) {
            prop_assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn gap_is_kernel_sum_and_nonnegative(p in pmf(2, 20)) {
        let kernel_sum: f64 = p.iter().map(|x| pointwise_kernels(x).unwrap().u).sum();
        prop_assert!((gap(&p) - kernel_sum).abs() < 1e-12);
        prop_assert!(gap(&p) >= -1e-12);
        if p.positive_count() <= 2 {
            prop_assert!(gap(&p).abs() < 1e-12);
        }
    }

    #[test]
    fn gap_strict_with_three_substantial_masses(p in interior_pmf(3, 20)) {
        prop_assert!(gap(&p) > 1e-12);
    }

    #[test]
    fn permutation_invariance(p in pmf(1, 30), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut m = p.masses().to_vec();
        m.shuffle(&mut common::rng(seed));
        let shuffled = ProbabilityVector::new(m).unwrap();
        prop_assert!((entropy(&p) - entropy(&shuffled)).abs() < 1e-12);
        prop_assert!((extropy(&p) - extropy(&shuffled)).abs() < 1e-12);
    }

    #[test]
    fn refinement_deltas(p in pmf(1, 20), idx in any::<prop::sample::Index>(), t in 0.0f64..=1.0) {
        let i = idx.index(p.len());
        let r = refine(&p, i, t).unwrap();
        let pi = p.masses()[i];
        prop_assert!((extropy(&r) - extropy(&p) - extropy_refinement_delta(pi, t).unwrap()).abs() < 1e-12);
        prop_assert!((entropy(&r) - entropy(&p) - entropy_refinement_delta(pi, t).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn complement_contracts_by_n_minus_one(p in pmf(3, 20), k in 1usize..8) {
        let traj = iterate_complement(&p, k).unwrap();
        let d = traj.distances();
        let rate = 1.0 / (p.len() - 1) as f64;
        for w in d.windows(2) {
            prop_assert!((w[1] - w[0] * rate).abs() < 1e-14);
        }
    }

    #[test]
    fn quadratic_approx_remainder_bounds(p in interior_pmf(20, 60)) {
        // J = Σ [p - p²/2 - Σ_{k≥3} p^k / (k(k-1))], so the remainder is
        // at least Σ p³/6 and at most Σ p³ / (6 (1 - p)²)
        let err = extropy_quadratic_approx(&p) - extropy(&p);
        let lower: f64 = p.iter().map(|x| x.powi(3) / 6.0).sum();
        let upper: f64 = p.iter().map(|x| x.powi(3) / (6.0 * (1.0 - x).powi(2))).sum();
        prop_assert!(err >= lower - 1e-15, "{err} < {lower}");
        prop_assert!(err <= upper + 1e-15, "{err} > {upper}");
    }

    #[test]
    fn joint_entropy_chain_rule(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
        let mut r = common::rng(seed);
        let flat = common::random_pmf(&mut r, rows * cols);
        let joint: Vec<Vec<f64>> = flat.masses().chunks(cols).map(<[f64]>::to_vec).collect();
        // H(X, Y) = H(X) + Σ_x p(x) H(Y | X = x)
        let marginal: Vec<f64> = joint.iter().map(|row| row.iter().sum()).collect();
        let conditional: f64 = joint
            .iter()
            .zip(&marginal)
            .filter(|(_, &m)| m > 0.0)
            .map(|(row, &m)| m * oracle::entropy(&row.iter().map(|x| x / m).collect::<Vec<_>>()))
            .sum();
        let chain = oracle::entropy(&marginal) + conditional;
        prop_assert!((joint_entropy(&joint).unwrap() - chain).abs() < 1e-12);
    }
}

#[test]
fn uniform_is_a_strict_local_maximum() {
    let mut r = common::rng(7);
    for n in [3usize, 5, 10, 25] {
        let u = ProbabilityVector::uniform(n).unwrap();
        for _ in 0..500 {
            let raw: Vec<f64> = (0..n)
                .map(|_| rand::Rng::gen_range(&mut r, -1.0..1.0))
                .collect();
            let mean = raw.iter().sum::<f64>() / n as f64;
            let tangent: Vec<f64> = raw.iter().map(|x| x - mean).collect();
            let norm = tangent.iter().map(|x| x * x).sum::<f64>().sqrt();
            let scale = rand::Rng::gen_range(&mut r, 1e-4..1e-2) / norm;
            let moved: Vec<f64> = u.iter().zip(&tangent).map(|(a, d)| a + scale * d).collect();
            let p = ProbabilityVector::normalized(&moved).unwrap();
            assert!(extropy(&p) < extropy(&u));
            assert!(entropy(&p) < entropy(&u));
        }
    }
}

#[test]
fn vertices_have_zero_measures() {
    for n in 1..12 {
        for i in 0..n {
            let e = ProbabilityVector::vertex(n, i).unwrap();
            assert_eq!(extropy(&e), 0.0);
            assert_eq!(entropy(&e), 0.0);
        }
    }
}

#[test]
fn extremes_increase_with_dimension() {
    for n in 1..500 {
        assert!(max_extropy_value(n + 1) > max_extropy_value(n));
        assert!(max_entropy_value(n + 1) > max_entropy_value(n));
        let u = ProbabilityVector::uniform(n).unwrap();
        assert!((extropy(&u) - max_extropy_value(n)).abs() < 1e-12);
    }
}

#[test]
fn kernel_shape() {
    let grid: Vec<f64> = (1..1000).map(|i| i as f64 / 1000.0).collect();
    for &p in &grid {
        let k = pointwise_kernels(p).unwrap();
        let mirrored = pointwise_kernels(1.0 - p).unwrap();
        assert!((k.u + mirrored.u).abs() < 1e-15);
        match p.partial_cmp(&0.5).unwrap() {
            std::cmp::Ordering::Less => assert!(k.u > 0.0, "u({p}) = {}", k.u),
            std::cmp::Ordering::Greater => assert!(k.u < 0.0),
            std::cmp::Ordering::Equal => assert!(k.u.abs() < 1e-15),
        }
        assert!((k.s + k.t - binary_measure(p).unwrap()).abs() < 1e-15);
    }
    let half: Vec<f64> = grid.iter().copied().filter(|&p| p <= 0.5).collect();
    let u = |p: f64| pointwise_kernels(p).unwrap().u;
    for (i, &a) in half.iter().enumerate().step_by(7) {
        for &b in half[i + 1..].iter().step_by(11) {
            assert!(u((a + b) / 2.0) > (u(a) + u(b)) / 2.0);
        }
    }
}

#[test]
fn worked_example_chain() {
    let p = pv(&[0.25, 0.5, 0.25]);
    let q = complement(&p).unwrap();
    assert_eq!(q.masses(), &[0.375, 0.25, 0.375]);
    assert!((entropy(&q) - 1.0822).abs() < 5e-4);
    assert!((extropy(&q) - 0.8033).abs() < 5e-4);
    assert!((extropy(&p) - 2.0 * (entropy(&q) - 2f64.ln())).abs() < 1e-12);
}
