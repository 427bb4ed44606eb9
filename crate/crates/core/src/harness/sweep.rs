//! Seeded Monte-Carlo sweeps and beampattern runs.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::baselines::baseline_precoders;
use crate::channel::{
    channel_set_with_gains, draw_channel_set, place_angles, trial_rng, AngleSet, ChannelSet, CovarianceSet, Scenario,
};
use crate::error::{Error, Result};
use crate::metrics::{angle_grid, jrc_mui, nrp_beampattern, Beampattern, MuiReport, PrecoderPair};
use crate::numerics::{dft_matrix, ComplexMatrix};
use crate::rfselect::{dinkelbach_select, ScoreSource, SelectOptions, Selection};
use crate::Complex64;

use super::config::{Axis, BeampatternSpec, Method, SweepSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub method: String,
    pub axis_value: f64,
    pub mean_mui: f64,
    /// Population standard deviation over the trials.
    pub std_mui: f64,
    pub mean_sigma_r_sq: f64,
    pub mean_sigma_c_sq: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub axis: Axis,
    /// Ordered by method (as listed in the spec), then axis value.
    pub rows: Vec<SweepRow>,
}

impl SweepResult {
    /// `(axis_value, mean_mui)` pairs of one method.
    pub fn series(&self, method: Method) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter(|r| r.method == method.tag())
            .map(|r| (r.axis_value, r.mean_mui))
            .collect()
    }

    pub fn row(&self, method: Method, axis_value: f64) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.method == method.tag() && r.axis_value == axis_value)
    }
}

/// Per-axis-value state shared by all trials.
struct Point {
    scenario: Scenario,
    angles: AngleSet,
    proposed: Option<PrecoderPair>,
}

/// Selection from the analytic covariances of the scenario's geometry.
pub fn proposed_selection(scenario: &Scenario, angles: &AngleSet, max_iter: usize) -> Result<Selection> {
    let cov = CovarianceSet::analytic(angles, scenario.n_antennas, scenario.antenna_spacing_over_wavelength);
    let opts = SelectOptions {
        max_iter,
        ..SelectOptions::default()
    };
    Ok(dinkelbach_select(ScoreSource::Covariance(&cov), scenario, &opts)?.0)
}

/// Runs the sweep on `jobs` worker threads. Trial `t` always uses random
/// stream `t` of the seed, and users' gains are drawn before targets', so
/// every axis value sees the same gain realizations. Results are reduced
/// in trial order, which makes the output independent of `jobs`.
pub fn run_sweep(spec: &SweepSpec, jobs: usize) -> Result<SweepResult> {
    spec.validate()?;
    let points: Vec<Point> = spec
        .values
        .iter()
        .map(|&v| {
            let scenario = spec.axis.apply(&spec.scenario, v);
            let angles = place_angles(&scenario)?;
            let proposed = if spec.methods.contains(&Method::Proposed) {
                let f = dft_matrix(scenario.n_antennas)?;
                Some(proposed_selection(&scenario, &angles, spec.max_iter)?.precoders(&f))
            } else {
                None
            };
            Ok(Point {
                scenario,
                angles,
                proposed,
            })
        })
        .collect::<Result<_>>()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start worker pool: {e}")))?;
    let trials = spec.scenario.trials;
    let per_trial: Vec<Vec<Vec<MuiReport>>> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .map(|t| run_trial(spec, &points, t as u64))
            .collect::<Result<_>>()
    })?;

    let mut rows = Vec::with_capacity(spec.methods.len() * points.len());
    for (m, method) in spec.methods.iter().enumerate() {
        for (p, &value) in spec.values.iter().enumerate() {
            let reports: Vec<&MuiReport> = per_trial.iter().map(|trial| &trial[p][m]).collect();
            rows.push(summarize(method.tag(), value, &reports));
        }
    }
    Ok(SweepResult { axis: spec.axis, rows })
}

/// Baseline precoders and their fallback flag.
type Prepared = (PrecoderPair, bool);

/// Reports indexed `[point][method]` for one trial.
fn run_trial(spec: &SweepSpec, points: &[Point], trial: u64) -> Result<Vec<Vec<MuiReport>>> {
    // Baseline precoders depend on the channel, N and rho but not the SNR,
    // so consecutive points that share those reuse them.
    let mut cache: Option<(usize, f64, Vec<Option<Prepared>>)> = None;
    let mut out = Vec::with_capacity(points.len());
    for point in points {
        let sc = &point.scenario;
        let mut rng = trial_rng(sc.seed, trial);
        let channels = draw_channel_set(sc, &point.angles, &mut rng)?;
        let fresh = !matches!(&cache, Some((n, rho, _)) if *n == sc.n_antennas && *rho == sc.rho);
        if fresh {
            let precoders = spec
                .methods
                .iter()
                .map(|m| match m {
                    Method::Proposed => Ok(None),
                    Method::Baseline(kind) => baseline_precoders(*kind, &channels, sc, spec.energy_fraction).map(Some),
                })
                .collect::<Result<_>>()?;
            cache = Some((sc.n_antennas, sc.rho, precoders));
        }
        let baseline = &cache.as_ref().expect("cache filled above").2;
        let reports = spec
            .methods
            .iter()
            .zip(baseline)
            .map(|(method, pre)| evaluate(*method, &channels, sc, point.proposed.as_ref(), pre.as_ref()))
            .collect::<Result<_>>()?;
        out.push(reports);
    }
    Ok(out)
}

fn evaluate(
    method: Method,
    channels: &ChannelSet,
    scenario: &Scenario,
    proposed: Option<&PrecoderPair>,
    baseline: Option<&(PrecoderPair, bool)>,
) -> Result<MuiReport> {
    let (precoders, degenerate, interference) = match (method, proposed, baseline) {
        (Method::Proposed, Some(p), _) => (p, false, true),
        (Method::Baseline(kind), _, Some((p, flag))) => (p, *flag, kind.counts_interference()),
        _ => unreachable!("precoders are prepared for every listed method"),
    };
    let mut report = jrc_mui(
        &channels.h_c,
        &channels.h_r,
        precoders,
        scenario.noise_power(),
        scenario.rho,
        interference,
    )?;
    report.degenerate = degenerate;
    Ok(report)
}

fn summarize(method: &str, axis_value: f64, reports: &[&MuiReport]) -> SweepRow {
    let count = reports.len();
    let denom = count.max(1) as f64;
    let mean = |f: fn(&MuiReport) -> f64| reports.iter().map(|r| f(r)).sum::<f64>() / denom;
    let mean_mui = mean(|r| r.mui_bits);
    let var = reports.iter().map(|r| (r.mui_bits - mean_mui).powi(2)).sum::<f64>() / denom;
    SweepRow {
        method: method.to_string(),
        axis_value,
        mean_mui,
        std_mui: var.sqrt(),
        mean_sigma_r_sq: mean(|r| r.sigma_r_sq),
        mean_sigma_c_sq: mean(|r| r.sigma_c_sq),
        trials: count,
    }
}

/// Radar beampattern of `method` for unit-gain targets at the given angles
/// and the scenario's users, probed over `[-90, 90]` degrees.
pub fn run_beampattern(
    scenario: &Scenario,
    target_angles_deg: &[f64],
    method: Method,
    grid_step_deg: f64,
) -> Result<Beampattern> {
    let mut scenario = scenario.clone();
    scenario.n_targets = target_angles_deg.len();
    let spec = BeampatternSpec {
        scenario,
        target_angles_deg: target_angles_deg.to_vec(),
        method,
        grid_step_deg,
        output_path: None,
        energy_fraction: crate::baselines::DEFAULT_ENERGY_FRACTION,
        max_iter: SelectOptions::default().max_iter,
    };
    run_beampattern_spec(&spec)
}

pub fn run_beampattern_spec(spec: &BeampatternSpec) -> Result<Beampattern> {
    spec.validate()?;
    let sc = &spec.scenario;
    let (n, d) = (sc.n_antennas, sc.antenna_spacing_over_wavelength);
    let users = if sc.n_users > 0 {
        place_angles(sc)?.comms_angles_deg
    } else {
        Vec::new()
    };
    let angles = AngleSet::new(users, spec.target_angles_deg.clone())?;
    let unit = |count: usize| vec![Complex64::new(1.0, 0.0); count];
    let channels = channel_set_with_gains(
        sc,
        &angles,
        &unit(angles.comms_angles_deg.len()),
        &unit(angles.radar_angles_deg.len()),
    )?;
    let f_r: ComplexMatrix = match spec.method {
        Method::Proposed => {
            let f = dft_matrix(n)?;
            proposed_selection(sc, &angles, spec.max_iter)?.radar_beams(&f)
        }
        Method::Baseline(kind) => baseline_precoders(kind, &channels, sc, spec.energy_fraction)?.0.radar,
    };
    nrp_beampattern(&channels.h_r, &f_r, &angle_grid(-90.0, 90.0, spec.grid_step_deg), n, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::baselines::BaselineKind;

    fn small_spec(methods: Vec<Method>, values: Vec<f64>, trials: usize) -> SweepSpec {
        SweepSpec {
            axis: Axis::SnrDb,
            values,
            methods,
            scenario: Scenario {
                n_antennas: 8,
                n_users: 1,
                n_targets: 1,
                trials,
                seed: 7,
                ..Scenario::default()
            },
            output_path: None,
            energy_fraction: 0.95,
            max_iter: 50,
        }
    }

    #[test]
    fn single_trial_has_zero_spread() {
        let spec = small_spec(vec![Method::Baseline(BaselineKind::NoInterference)], vec![0.0], 1);
        let res = run_sweep(&spec, 1).unwrap();
        assert_eq!(res.rows.len(), 1);
        assert_eq!(res.rows[0].std_mui, 0.0);
        assert_eq!(res.rows[0].trials, 1);
    }

    #[test]
    fn rows_are_ordered_by_method_then_value() {
        let methods = vec![Method::Proposed, Method::Baseline(BaselineKind::SvdNulling)];
        let res = run_sweep(&small_spec(methods, vec![-5.0, 0.0, 5.0], 3), 1).unwrap();
        let keys: Vec<(String, f64)> = res.rows.iter().map(|r| (r.method.clone(), r.axis_value)).collect();
        assert_eq!(keys.len(), 6);
        assert_eq!(keys[0], ("proposed".to_string(), -5.0));
        assert_eq!(keys[2], ("proposed".to_string(), 5.0));
        assert_eq!(keys[3], ("svd_nulling".to_string(), -5.0));
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let spec = small_spec(Method::ALL.to_vec(), vec![0.0, 10.0], 8);
        assert_eq!(run_sweep(&spec, 1).unwrap(), run_sweep(&spec, 3).unwrap());
    }

    #[test]
    fn single_target_pattern_is_symmetric() {
        let sc = Scenario {
            n_antennas: 16,
            n_users: 0,
            rho: 0.0,
            ..Scenario::default()
        };
        let bp = run_beampattern(&sc, &[0.0], Method::Proposed, 0.5).unwrap();
        let p = &bp.nrp;
        for i in 0..p.len() {
            assert!((p[i] - p[p.len() - 1 - i]).abs() < 1e-9);
        }
    }

    #[test]
    fn empty_targets_are_rejected() {
        let err = run_beampattern(&Scenario::default(), &[], Method::Proposed, 0.5).unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }
}
