use proptest::prelude::*;

use jrc_core::baselines::{beamspace_masks, evaluate_baseline, BaselineKind};
use jrc_core::channel::{place_angles, synthesize_channel, AngleSet, ChannelSet, CovarianceSet, Scenario};
use jrc_core::harness::emit::format_float;
use jrc_core::metrics::{interference_covariance, masked_energy, mui_joint, mui_separate};
use jrc_core::numerics::{dft_matrix, nullspace_basis, ComplexMatrix, HermitianMatrix};
use jrc_core::rfselect::{beam_scores, dinkelbach_select, solve_relaxed, threshold_rho, ScoreSource, SelectOptions};
use jrc_core::Complex64;

fn complex() -> impl Strategy<Value = Complex64> {
    (-2.0..2.0f64, -2.0..2.0f64).prop_map(|(re, im)| Complex64::new(re, im))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ComplexMatrix> {
    prop::collection::vec(complex(), rows * cols).prop_map(move |v| ComplexMatrix::from_vec(rows, cols, v))
}

fn square_pair(max_n: usize) -> impl Strategy<Value = (ComplexMatrix, ComplexMatrix)> {
    (1..=max_n).prop_flat_map(|n| (matrix(n, n), matrix(n, n)))
}

/// User and target angles, at least one of each.
fn geometry() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1..=3usize, 1..=3usize).prop_flat_map(|(k, t)| {
        prop::collection::vec(-60.0..60.0f64, k + t).prop_map(move |mut a| {
            let r = a.split_off(k);
            (a, r)
        })
    })
}

fn channel_set(n: usize, comms: &[f64], radar: &[f64], gains: &[Complex64]) -> ChannelSet {
    let (gc, gr) = gains.split_at(comms.len());
    ChannelSet::new(
        synthesize_channel(comms, gc, n, 0.5).unwrap(),
        synthesize_channel(radar, gr, n, 0.5).unwrap(),
    )
    .unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn gram_matrices_are_psd_and_have_exact_roots(y in (1..=6usize, 1..=6usize).prop_flat_map(|(r, c)| matrix(r, c))) {
        let s = HermitianMatrix::outer_gram(&y);
        prop_assert!(s.is_psd());
        let root = s.sqrt_psd().unwrap();
        let back = &root * root.adjoint();
        prop_assert!((back - s.as_matrix()).norm() <= 1e-9 * s.as_matrix().norm().max(1.0));
    }

    #[test]
    fn joint_never_exceeds_separate(
        (h_c, h_r) in square_pair(6),
        (y_c, y_r) in square_pair(6),
        noise in 0.01..10.0f64,
    ) {
        let n = h_c.nrows().min(y_c.nrows());
        let cut = |m: &ComplexMatrix| m.view((0, 0), (n, n)).into_owned();
        let (h_c, h_r) = (cut(&h_c), cut(&h_r));
        let s_c = HermitianMatrix::outer_gram(&cut(&y_c));
        let s_r = HermitianMatrix::outer_gram(&cut(&y_r));
        let joint = mui_joint(&h_c, &h_r, &s_c, &s_r, noise).unwrap();
        let sep = mui_separate(&h_c, &h_r, &s_c, &s_r, noise).unwrap();
        prop_assert!(joint.mui_bits <= sep.mui_bits + 1e-9);
        prop_assert!(joint.sigma_r_sq >= 0.0 && joint.sigma_c_sq >= 0.0);
    }

    #[test]
    fn nullspace_basis_is_orthonormal_and_annihilating(
        (rank, a) in (1..=7usize).prop_flat_map(|n| (1..=n).prop_flat_map(move |r| (Just(r), (matrix(n, r), matrix(r, n))))),
    ) {
        let m = &a.0 * &a.1;
        let null = nullspace_basis(&m, 1e-8).unwrap();
        prop_assert!(null.ncols() >= m.ncols() - rank);
        if null.ncols() > 0 {
            let gram = null.adjoint() * &null;
            prop_assert!((gram - ComplexMatrix::identity(null.ncols(), null.ncols())).norm() < 1e-9);
            prop_assert!((&m * &null).norm() <= 1e-7 * m.norm().max(1.0));
        }
    }

    #[test]
    fn beam_scores_decompose_frobenius_energy(h in (1..=8usize).prop_flat_map(|n| matrix(n, n))) {
        let f = dft_matrix(h.nrows()).unwrap();
        let s = beam_scores(&f, &h).unwrap();
        let total = (f.adjoint() * &h).norm_squared();
        prop_assert!((s.iter().sum::<f64>() - total).abs() <= 1e-9 * total.max(1.0));
        prop_assert!(s.iter().all(|&v| v >= 0.0));
    }

    #[test]
    fn relaxed_solution_beats_any_box_point(
        scores in prop::collection::vec((0.0..5.0f64, 0.0..5.0f64, 0.0..1.0f64), 1..12),
        kappa in 0.0..3.0f64,
    ) {
        let a: Vec<f64> = scores.iter().map(|s| s.0).collect();
        let b: Vec<f64> = scores.iter().map(|s| s.1).collect();
        let d: Vec<f64> = scores.iter().map(|s| s.2).collect();
        let sol = solve_relaxed(&a, &b, kappa, 0.5);
        let value = |d: &[f64]| d.iter().zip(&a).zip(&b).map(|((d, a), b)| d * d * (a - kappa * b)).sum::<f64>() - kappa * 0.5;
        prop_assert!((sol.objective - value(&sol.d)).abs() < 1e-9);
        prop_assert!(sol.objective >= value(&d) - 1e-12);
        prop_assert!(sol.d.iter().all(|&x| x == 0.0 || x == 1.0));
    }

    #[test]
    fn thresholding_keeps_the_best_k(
        values in prop::collection::vec((0u8..3, -5.0..5.0f64), 1..16),
        k_frac in 0.0..=1.0f64,
    ) {
        let relaxed: Vec<f64> = values.iter().map(|v| v.0 as f64 / 2.0).collect();
        let ranking: Vec<f64> = values.iter().map(|v| v.1).collect();
        let k = (k_frac * relaxed.len() as f64).floor() as usize;
        let t = threshold_rho(&relaxed, &ranking, k);
        prop_assert_eq!(t.d.iter().filter(|&&b| b).count(), k);
        prop_assert!(!t.shortfall);
        let key = |i: usize| (relaxed[i], ranking[i]);
        for i in 0..relaxed.len() {
            for j in 0..relaxed.len() {
                if t.d[i] && !t.d[j] {
                    let (ki, kj) = (key(i), key(j));
                    prop_assert!(ki.0 > kj.0 || (ki.0 == kj.0 && (ki.1 > kj.1 || (ki.1 == kj.1 && i < j))));
                }
            }
        }
    }

    #[test]
    fn dinkelbach_respects_cardinality_disjointness_and_monotonicity(
        (comms, radar) in geometry(),
        n in prop::sample::select(vec![8usize, 16, 32]),
        rho in 0.0..=1.0f64,
        snr_db in -10.0..20.0f64,
    ) {
        prop_assume!(AngleSet::new(comms.clone(), radar.clone()).is_ok());
        let angles = AngleSet::new(comms, radar).unwrap();
        let scenario = Scenario { n_antennas: n, rho, snr_db, ..Scenario::default() };
        let cov = CovarianceSet::analytic(&angles, n, 0.5);
        let (sel, state) = dinkelbach_select(ScoreSource::Covariance(&cov), &scenario, &SelectOptions::default()).unwrap();
        prop_assert_eq!(sel.radar_count(), scenario.radar_chains());
        prop_assert_eq!(sel.comms_count(), n - scenario.radar_chains());
        prop_assert!(sel.is_disjoint());
        prop_assert!(state.objective_trace.windows(2).all(|w| w[1] >= w[0] - 1e-9));
        prop_assert!(state.kappa_c.is_finite() && state.kappa_r.is_finite());
    }

    #[test]
    fn masks_capture_the_fraction_minimally(
        (comms, radar) in geometry(),
        gains in prop::collection::vec(complex(), 6),
        fraction in 0.5..=1.0f64,
    ) {
        prop_assume!(AngleSet::new(comms.clone(), radar.clone()).is_ok());
        let n = 16;
        let ch = channel_set(n, &comms, &radar, &gains[..comms.len() + radar.len()]);
        let f = dft_matrix(n).unwrap();
        let (omega_c, _) = beamspace_masks(&ch.h_c, &ch.h_r, &f, fraction).unwrap();
        let beam = f.adjoint() * &ch.h_c * &f;
        let total = beam.norm_squared();
        let captured = masked_energy(&omega_c, &beam);
        prop_assert!(captured >= fraction * total * (1.0 - 1e-9));
        let smallest = omega_c.iter().zip(beam.iter()).filter(|(&m, _)| m).map(|(_, z)| z.norm_sqr()).fold(f64::INFINITY, f64::min);
        prop_assert!(captured - smallest < fraction * total * (1.0 + 1e-9) || smallest == 0.0);
    }

    #[test]
    fn no_interference_bounds_every_baseline(
        (comms, radar) in geometry(),
        gains in prop::collection::vec(complex(), 6),
        rho in 0.0..=1.0f64,
        snr_db in -10.0..20.0f64,
    ) {
        prop_assume!(AngleSet::new(comms.clone(), radar.clone()).is_ok());
        let n = 16;
        let ch = channel_set(n, &comms, &radar, &gains[..comms.len() + radar.len()]);
        let scenario = Scenario { n_antennas: n, rho, snr_db, ..Scenario::default() };
        let top = evaluate_baseline(BaselineKind::NoInterference, &ch, &scenario).unwrap().mui_bits;
        for kind in BaselineKind::ALL {
            let v = evaluate_baseline(kind, &ch, &scenario).unwrap().mui_bits;
            prop_assert!(v <= top + 1e-9 * top.max(1.0), "{} = {} above {}", kind, v, top);
        }
    }

    #[test]
    fn interference_trace_is_nonnegative(
        (comms, radar) in geometry(),
        d in prop::collection::vec(0.0..=1.0f64, 16),
    ) {
        let mut all = comms;
        all.extend(radar);
        let r = jrc_core::channel::analytic_covariance(&all, 16, 0.5);
        let f = dft_matrix(16).unwrap();
        prop_assert!(interference_covariance(&r, &f, &d).unwrap() >= 0.0);
    }

    #[test]
    fn placement_respects_counts_and_range(k in 0..=5usize, t in 0..=5usize, lo in -80.0..-10.0f64, hi in 10.0..80.0f64) {
        prop_assume!(k + t > 0);
        let scenario = Scenario { n_users: k, n_targets: t, angle_range_deg: (lo, hi), ..Scenario::default() };
        let angles = place_angles(&scenario).unwrap();
        prop_assert_eq!(angles.comms_angles_deg.len(), k);
        prop_assert_eq!(angles.radar_angles_deg.len(), t);
        prop_assert!(angles.within((lo, hi)));
    }

    #[test]
    fn printed_floats_round_trip(x in prop::num::f64::NORMAL) {
        let back: f64 = format_float(x).parse().unwrap();
        prop_assert!((back - x).abs() <= 5e-9 * x.abs());
    }
}

#[test]
fn doubling_trials_keeps_means_within_sampling_error() {
    use jrc_core::harness::{run_sweep, Axis, Method, SweepSpec};
    let spec = |trials| SweepSpec {
        axis: Axis::SnrDb,
        values: vec![-5.0, 5.0],
        methods: Method::ALL.to_vec(),
        scenario: Scenario {
            n_antennas: 16,
            n_users: 2,
            n_targets: 2,
            trials,
            seed: 41,
            ..Scenario::default()
        },
        output_path: None,
        energy_fraction: 0.95,
        max_iter: 50,
    };
    let small = run_sweep(&spec(100), 1).unwrap();
    let large = run_sweep(&spec(200), 1).unwrap();
    for (a, b) in small.rows.iter().zip(&large.rows) {
        let bound = 3.0 * a.std_mui / (a.trials as f64).sqrt();
        assert!(
            (a.mean_mui - b.mean_mui).abs() <= bound + 1e-12,
            "{} at {}: {} vs {}",
            a.method,
            a.axis_value,
            a.mean_mui,
            b.mean_mui
        );
    }
}
