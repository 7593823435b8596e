//! Acceptance gate: one test per criterion, numbered 01 through 10.
//!
//! Each test is self-contained and uses only the public API; tolerances
//! follow the stated reproduction targets rather than exact plot values,
//! since RNG streams differ between implementations.

use icsel::ar1d::{autocovariance, fit_order, simulate, ArFitCache, ArIcEvaluator, ArModel1D};
use icsel::ar2d::{
    load_pgm, qp_support, select_classical_2d, select_nishii_2d, simulate_2d, ArModel2D, Image,
    QpOrientation, Support2D,
};
use icsel::criteria::{beta_bounds, beta_equivalent, penalty, BetaTarget, Criterion};
use icsel::error::Result;
use icsel::experiments::{
    ascii_map, run_beta_sweep, run_kullback_report, run_texture, write_texture_csv, BetaGrid,
    SweepConfig, SweepReport,
};
use icsel::metrics::kullback;
use icsel::selection::{select_classical, select_exhaustive, select_nishii, IcEvaluator};
use icsel::support::Support;

use nalgebra::{DMatrix, DVector};
use std::io::Write as _;

/// The sparse AR(15) benchmark model: a_1 = 0.5, a_2 = 0.4, a_15 = 0.45.
fn ar15_model() -> ArModel1D {
    let mut dense = vec![0.0; 15];
    dense[0] = 0.5;
    dense[1] = 0.4;
    dense[14] = 0.45;
    ArModel1D::from_dense(&dense, 1.0).unwrap()
}

fn ar15_config(runs: usize, beta_grid: BetaGrid, success_support: Support) -> SweepConfig {
    SweepConfig {
        n: 1000,
        runs,
        true_model: ar15_model(),
        max_order: 20,
        beta_grid,
        base_seed: 20_240_101,
        success_support,
    }
}

fn single_beta_sweep(beta: f64, success_support: Support) -> SweepReport {
    let grid = BetaGrid::new(beta, beta, 1.0).unwrap();
    run_beta_sweep(&ar15_config(100, grid, success_support)).unwrap()
}

#[test]
fn criterion_01_beta_aic_sign_threshold() {
    assert!(beta_equivalent(BetaTarget::Aic, 1618).unwrap() > 0.0);
    assert!(beta_equivalent(BetaTarget::Aic, 1619).unwrap() < 0.0);
}

#[test]
fn criterion_02_penalty_identities() {
    for n in [16usize, 100, 1000, 100_000] {
        let beta_aic = beta_equivalent(BetaTarget::Aic, n).unwrap();
        let alpha = penalty(Criterion::phi_beta(beta_aic), n).unwrap();
        assert!((alpha - 2.0).abs() < 1e-9, "n = {n}: {alpha} != 2");

        let beta_bic = beta_equivalent(BetaTarget::Bic, n).unwrap();
        let alpha = penalty(Criterion::phi_beta(beta_bic), n).unwrap();
        let expected = (n as f64).ln();
        assert!(
            (alpha - expected).abs() < 1e-9,
            "n = {n}: {alpha} != {expected}"
        );
    }
}

#[test]
fn criterion_03_success_plateau_at_beta_min() {
    let beta_min = beta_bounds(1000).unwrap().0;
    let report = single_beta_sweep(beta_min, Support::new([1, 2, 15]));
    let row = &report.rows[0];
    assert!(
        row.classical_success_pct >= 95.0,
        "classical success {}% at beta_min",
        row.classical_success_pct
    );
    assert!(
        row.nishii_success_pct >= 95.0,
        "nishii success {}% at beta_min",
        row.nishii_success_pct
    );
}

#[test]
fn criterion_04_success_curve_shape() {
    let truth = Support::new([1, 2, 15]);

    // The AIC-equivalent beta sits far below the admissible zone and
    // overfits relative to beta_min.
    let beta_aic = beta_equivalent(BetaTarget::Aic, 1000).unwrap();
    let beta_min = beta_bounds(1000).unwrap().0;
    let at_aic = single_beta_sweep(beta_aic, truth.clone()).rows[0].nishii_success_pct;
    let at_min = single_beta_sweep(beta_min, truth).rows[0].nishii_success_pct;
    assert!(
        at_aic < at_min,
        "nishii success at beta_aic ({at_aic}%) should be below beta_min ({at_min}%)"
    );

    // Around beta in [0.5, 0.6] the classical method settles on order 2.
    let grid = BetaGrid::new(0.5, 0.6, 0.05).unwrap();
    let report = run_beta_sweep(&ar15_config(100, grid, Support::new([1, 2]))).unwrap();
    for row in &report.rows {
        assert!(
            row.classical_success_pct > 50.0,
            "k_hat = 2 not modal at beta = {}: {}%",
            row.beta,
            row.classical_success_pct
        );
    }

    // By beta >= 0.95 the penalty erases everything.
    let grid = BetaGrid::new(0.95, 1.0, 0.05).unwrap();
    let report = run_beta_sweep(&ar15_config(100, grid, Support::empty())).unwrap();
    for row in &report.rows {
        assert!(
            row.classical_success_pct > 50.0 && row.nishii_success_pct > 50.0,
            "empty model not modal at beta = {}",
            row.beta
        );
    }
}

#[test]
fn criterion_05_pev_and_kullback_orderings() {
    let grid = BetaGrid::new(0.0, 0.35, 0.01).unwrap();
    let cfg = ar15_config(100, grid, Support::new([1, 2, 15]));
    let report = run_kullback_report(&cfg).unwrap();

    let zone: Vec<_> = report
        .rows
        .iter()
        .filter(|r| r.classical_success_pct == 100.0 && r.nishii_success_pct == 100.0)
        .collect();
    assert!(!zone.is_empty(), "no beta reached 100% success");

    for row in zone {
        assert!(
            row.mean_pev_classical <= row.mean_pev_nishii,
            "beta {}: classical pev {} > nishii pev {}",
            row.beta,
            row.mean_pev_classical,
            row.mean_pev_nishii
        );
        assert!(
            (row.mean_pev_nishii - 1.0).abs() <= (row.mean_pev_classical - 1.0).abs(),
            "beta {}: nishii pev {} further from 1 than classical {}",
            row.beta,
            row.mean_pev_nishii,
            row.mean_pev_classical
        );
        let ku_c = row.mean_kullback_classical.unwrap();
        let ku_n = row.mean_kullback_nishii.unwrap();
        assert!(
            ku_n <= ku_c,
            "beta {}: nishii kullback {ku_n} > classical {ku_c}",
            row.beta
        );
    }
}

#[test]
fn criterion_06_operation_counts() {
    struct Flat(usize);
    impl IcEvaluator for Flat {
        fn universe_size(&self) -> usize {
            self.0
        }
        fn ic_order(&self, _k: usize) -> Result<f64> {
            Ok(0.0)
        }
        fn ic_support(&self, _s: &Support) -> Result<f64> {
            Ok(0.0)
        }
    }
    for m in 1..=10usize {
        let eval = Flat(m);
        assert_eq!(
            select_exhaustive(&eval).unwrap().weighted_ops,
            (m as u64) * (1 << (m - 1))
        );
        assert_eq!(
            select_classical(&eval).unwrap().weighted_ops,
            (m * (m + 1) / 2) as u64
        );
        assert_eq!(select_nishii(&eval).unwrap().weighted_ops, (m * m) as u64);
    }
}

/// A deterministic family of sparse stable models: the coefficient mass
/// stays below 1, which keeps every characteristic root outside the unit
/// circle.
fn random_sparse_model(idx: u64) -> ArModel1D {
    let sign = |bit: u64| if idx >> bit & 1 == 0 { 1.0 } else { -1.0 };
    let mut dense = vec![0.0; 8];
    dense[0] = 0.35 * sign(0);
    if !idx.is_multiple_of(3) {
        dense[2] = 0.25 * sign(1);
    }
    if !idx.is_multiple_of(4) {
        dense[4 + (idx % 2) as usize] = 0.15 * sign(2);
    }
    ArModel1D::from_dense(&dense, 0.5 + 0.1 * (idx % 5) as f64).unwrap()
}

#[test]
fn criterion_07_oracle_equivalences() {
    // Exhaustive search is at least as good as both shortcuts.
    for idx in 0..50u64 {
        let model = random_sparse_model(idx);
        let xs = simulate(&model, 300, 1000 + idx, 200).unwrap();
        let acov = autocovariance(&xs, 8).unwrap();
        let cache = ArFitCache::new(acov, 8).unwrap();
        let eval = ArIcEvaluator::new(&cache, Criterion::Bic);
        let best = select_exhaustive(&eval).unwrap().ic_value;
        let classical = select_classical(&eval).unwrap().ic_value;
        let nishii = select_nishii(&eval).unwrap().ic_value;
        assert!(best <= classical + 1e-12, "instance {idx}");
        assert!(best <= nishii + 1e-12, "instance {idx}");
    }

    // Levinson-Durbin against dense Toeplitz solves.
    let xs = simulate(&ar15_model(), 3000, 99, 500).unwrap();
    let acov = autocovariance(&xs, 20).unwrap();
    for k in 1..=20usize {
        let lev = fit_order(&acov, k).unwrap();
        let m = DMatrix::from_fn(k, k, |u, v| acov.r(u.abs_diff(v)));
        let rhs = DVector::from_fn(k, |u, _| -acov.r(u + 1));
        let dense = m.lu().solve(&rhs).unwrap();
        for (a, b) in lev.coeffs.iter().zip(dense.iter()) {
            assert!((a - b).abs() < 1e-10, "order {k}");
        }
        let sigma2 = acov.r(0)
            + dense
                .iter()
                .enumerate()
                .map(|(i, a)| a * acov.r(i + 1))
                .sum::<f64>();
        assert!((lev.sigma2 - sigma2).abs() < 1e-10, "order {k}");
    }

    // Banded Kullback against the dense matrix formula.
    let whitening = |model: &ArModel1D, n: usize| {
        let mut a = DMatrix::<f64>::identity(n, n);
        for (lag, c) in model.terms() {
            for t in lag..n {
                a[(t, t - lag)] = c;
            }
        }
        a
    };
    let pairs = [
        (ar15_model(), random_sparse_model(3)),
        (random_sparse_model(7), random_sparse_model(11)),
        (ArModel1D::white_noise(1.0).unwrap(), random_sparse_model(1)),
    ];
    for (p, q) in &pairs {
        for n in [1usize, 10, 60, 100] {
            let banded = kullback(p, q, n).unwrap();
            let prod = whitening(q, n) * whitening(p, n).try_inverse().unwrap();
            let frob2 = prod.iter().map(|x| x * x).sum::<f64>();
            let dense = -(n as f64) / 2.0
                + n as f64 * (q.sigma2() / p.sigma2()).ln() / 2.0
                + p.sigma2() / (2.0 * q.sigma2()) * frob2;
            assert!(
                (banded - dense).abs() < 1e-8 * dense.abs().max(1.0),
                "n = {n}: banded {banded} vs dense {dense}"
            );
        }
    }
}

#[test]
fn criterion_08_nishii_monotone_in_penalty() {
    for idx in 0..20u64 {
        let model = random_sparse_model(idx);
        let xs = simulate(&model, 400, 5000 + idx, 200).unwrap();
        let acov = autocovariance(&xs, 10).unwrap();
        let cache = ArFitCache::new(acov, 10).unwrap();
        let mut previous: Option<Support> = None;
        for step in 0..10 {
            let beta = 0.09 * step as f64;
            let eval = ArIcEvaluator::new(&cache, Criterion::phi_beta(beta));
            let chosen = select_nishii(&eval).unwrap().chosen;
            if let Some(larger) = &previous {
                assert!(
                    chosen.is_subset_of(larger),
                    "instance {idx}: {chosen} not within {larger} as the penalty grew"
                );
            }
            previous = Some(chosen);
        }
    }
}

#[test]
fn criterion_09_2d_round_trip() {
    let truth = Support2D::new(QpOrientation::Qp1, [(0, 1), (1, 0), (2, 3)]);
    let model = ArModel2D::from_terms(
        QpOrientation::Qp1,
        [((0, 1), -0.3), ((1, 0), -0.4), ((2, 3), 0.2)],
        1.0,
    )
    .unwrap();
    let n = 256 * 256;
    let c = Criterion::phi_beta(beta_bounds(n).unwrap().0);

    let mut nishii_exact = 0;
    let mut classical_bound = 0;
    for seed in 0..100u64 {
        let img = simulate_2d(&model, 256, 256, seed, 64).unwrap();
        if select_nishii_2d(&img, 4, 4, c, QpOrientation::Qp1).unwrap() == truth {
            nishii_exact += 1;
        }
        if select_classical_2d(&img, 4, 4, c, QpOrientation::Qp1).unwrap() == (2, 3) {
            classical_bound += 1;
        }
    }
    assert!(
        nishii_exact >= 90,
        "nishii recovered the support on {nishii_exact}/100 seeds"
    );
    assert!(
        classical_bound >= 80,
        "classical recovered order (2,3) on {classical_bound}/100 seeds"
    );
}

#[test]
fn criterion_10_desk_scale_stand_ins() {
    // The texture pipeline on an arbitrary PGM: identical bytes across
    // repeated runs of the same input.
    let field = simulate_2d(
        &ArModel2D::from_terms(QpOrientation::Qp1, [((0, 1), -0.35), ((1, 0), -0.35)], 1.0)
            .unwrap(),
        64,
        64,
        9,
        32,
    )
    .unwrap();
    let lo = field.pixels().iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = field
        .pixels()
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let mut pgm = b"P5\n64 64\n255\n".to_vec();
    pgm.extend(
        field
            .pixels()
            .iter()
            .map(|&p| ((p - lo) / (hi - lo) * 255.0).round() as u8),
    );
    let mut file = tempfile::NamedTempFile::new().unwrap();
    file.write_all(&pgm).unwrap();

    let img: Image = load_pgm(file.path()).unwrap();
    let c = Criterion::phi_beta(beta_bounds(64 * 64).unwrap().0);
    let render = |img: &Image| {
        let results = run_texture(img, 4, 4, c).unwrap();
        let mut csv = Vec::new();
        write_texture_csv(&results, &mut csv).unwrap();
        let maps: Vec<String> = results.iter().map(ascii_map).collect();
        (csv, maps)
    };
    let (csv_a, maps_a) = render(&img);
    let (csv_b, maps_b) = render(&load_pgm(file.path()).unwrap());
    assert_eq!(csv_a, csv_b, "texture CSV must be byte-stable");
    assert_eq!(maps_a, maps_b, "ASCII maps must be byte-stable");
    assert!(maps_a.iter().all(|m| m.lines().count() == 5));

    // The map marks the whole universe: header row plus 4 x 24 sites.
    let text = String::from_utf8(csv_a).unwrap();
    assert_eq!(
        text.lines().count(),
        1 + 4 * qp_support(QpOrientation::Qp1, 4, 4).len()
    );
}

/// Large-sample spot check at n = 100000, opt-in because of its runtime:
/// `cargo test -- --ignored criterion_10_n100k`.
#[test]
#[ignore]
fn criterion_10_n100k_spot_check() {
    let beta_min = beta_bounds(100_000).unwrap().0;
    let grid = BetaGrid::new(beta_min, beta_min, 1.0).unwrap();
    let cfg = SweepConfig {
        n: 100_000,
        runs: 20,
        true_model: ar15_model(),
        max_order: 20,
        beta_grid: grid,
        base_seed: 77,
        success_support: Support::new([1, 2, 15]),
    };
    let report = run_beta_sweep(&cfg).unwrap();
    let row = &report.rows[0];
    assert!(row.classical_success_pct >= 95.0);
    assert!(row.nishii_success_pct >= 95.0);
    // The AIC-equivalent beta has gone negative at this sample size.
    assert!(report.markers.beta_aic.unwrap() < 0.0);
}
