//! Dinkelbach RF-chain selection over the DFT codebook.
//!
//! Every quantity the selection needs separates across codebook beams: for
//! a binary selection `d`, `||(F D)^H H||_F^2 = sum_n d_n s_n` with
//! `s_n = ||f_n^H H||^2`, and in expectation `s_n = f_n^H R f_n`. The loop
//! therefore works on three score vectors:
//!
//! - `signal`: beam energy through the combined channel,
//! - `leak_c`: energy a comms beam spills onto the radar channel,
//! - `leak_r`: energy a radar beam spills onto the comms channel.
//!
//! Each Dinkelbach step maximizes `sum_n d_n (signal_n - kappa leak_n)` over
//! the box, which is solved by inspection, then keeps the required number of
//! beams for each operation.

use std::cmp::Ordering;

use num_complex::Complex64;

use crate::channel::{ChannelSet, CovarianceSet, Scenario};
use crate::error::{Error, Result};
use crate::metrics::{quadratic_form, PrecoderPair};
use crate::numerics::{dft_matrix, ComplexMatrix, HermitianMatrix};

/// Largest array the exhaustive oracle accepts.
pub const ORACLE_MAX_ANTENNAS: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub d_c: Vec<bool>,
    pub d_r: Vec<bool>,
    /// Relaxed solutions of the last accepted iteration.
    pub relaxed_c: Vec<f64>,
    pub relaxed_r: Vec<f64>,
}

impl Selection {
    pub fn len(&self) -> usize {
        self.d_c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d_c.is_empty()
    }

    pub fn comms_count(&self) -> usize {
        self.d_c.iter().filter(|&&b| b).count()
    }

    pub fn radar_count(&self) -> usize {
        self.d_r.iter().filter(|&&b| b).count()
    }

    pub fn is_disjoint(&self) -> bool {
        self.d_c.iter().zip(&self.d_r).all(|(&c, &r)| !(c && r))
    }

    /// `F diag(d)` restricted to the selected columns, unnormalized.
    pub fn radar_beams(&self, f: &ComplexMatrix) -> ComplexMatrix {
        columns(f, &self.d_r, 1.0)
    }

    pub fn comms_beams(&self, f: &ComplexMatrix) -> ComplexMatrix {
        columns(f, &self.d_c, 1.0)
    }

    /// Hybrid precoders with identity baseband: each selected DFT beam
    /// carries power `1/N`.
    pub fn precoders(&self, f: &ComplexMatrix) -> PrecoderPair {
        let n = f.nrows();
        let unit = 1.0 / (n as f64).sqrt();
        PrecoderPair::per_direction_power(columns(f, &self.d_c, unit), columns(f, &self.d_r, unit), n)
    }
}

fn columns(f: &ComplexMatrix, keep: &[bool], scale: f64) -> ComplexMatrix {
    let idx: Vec<usize> = keep.iter().enumerate().filter(|(_, &k)| k).map(|(i, _)| i).collect();
    let s = Complex64::new(scale, 0.0);
    ComplexMatrix::from_fn(f.nrows(), idx.len(), |r, c| f[(r, idx[c])] * s)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DinkelbachState {
    pub kappa_c: f64,
    pub kappa_r: f64,
    /// Iterations whose selection was accepted.
    pub iteration: usize,
    /// Fractional objective `c_C / eta_C + c_R / eta_R` after each accepted iteration.
    pub objective_trace: Vec<f64>,
    pub c_c: f64,
    pub c_r: f64,
    pub eta_c: f64,
    pub eta_r: f64,
    /// Both ratios stopped moving before the iteration cap.
    pub converged: bool,
    /// Fewer candidate beams than required chains were available.
    pub shortfall: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SelectOptions {
    pub max_iter: usize,
    pub kappa_tol: f64,
    /// An index may serve only one operation.
    pub disjoint: bool,
}

impl Default for SelectOptions {
    fn default() -> Self {
        SelectOptions {
            max_iter: 50,
            kappa_tol: 1e-6,
            disjoint: true,
        }
    }
}

/// Where the per-beam scores come from.
#[derive(Debug, Clone, Copy)]
pub enum ScoreSource<'a> {
    /// Quadratic forms `f_n^H R f_n` of the second-order statistics.
    Covariance(&'a CovarianceSet),
    /// Row energies of `F^H H` for one channel draw.
    Instantaneous(&'a ChannelSet),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BeamScores {
    pub signal: Vec<f64>,
    pub leak_c: Vec<f64>,
    pub leak_r: Vec<f64>,
}

impl BeamScores {
    pub fn from_source(source: ScoreSource<'_>, f: &ComplexMatrix) -> Result<Self> {
        match source {
            ScoreSource::Covariance(cov) => Ok(BeamScores {
                signal: covariance_scores(f, &cov.total)?,
                leak_c: covariance_scores(f, &cov.radar)?,
                leak_r: covariance_scores(f, &cov.comms)?,
            }),
            ScoreSource::Instantaneous(ch) => Ok(BeamScores {
                signal: beam_scores(f, &ch.h)?,
                leak_c: beam_scores(f, &ch.h_r)?,
                leak_r: beam_scores(f, &ch.h_c)?,
            }),
        }
    }

    pub fn len(&self) -> usize {
        self.signal.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signal.is_empty()
    }

    /// `(c_C, eta_C, c_R, eta_R)` for a binary selection.
    pub fn terms(&self, d_c: &[bool], d_r: &[bool], noise_power: f64) -> (f64, f64, f64, f64) {
        let pick = |d: &[bool], s: &[f64]| -> f64 { d.iter().zip(s).filter(|(&b, _)| b).map(|(_, &v)| v).sum() };
        (
            pick(d_c, &self.signal),
            noise_power + pick(d_c, &self.leak_c),
            pick(d_r, &self.signal),
            noise_power + pick(d_r, &self.leak_r),
        )
    }

    /// `c_C / eta_C + c_R / eta_R`.
    pub fn ratio_sum(&self, d_c: &[bool], d_r: &[bool], noise_power: f64) -> f64 {
        let (c_c, eta_c, c_r, eta_r) = self.terms(d_c, d_r, noise_power);
        c_c / eta_c + c_r / eta_r
    }

    /// `log2(1 + c_C / eta_C + c_R / eta_R)`.
    pub fn capacity(&self, d_c: &[bool], d_r: &[bool], noise_power: f64) -> f64 {
        self.ratio_sum(d_c, d_r, noise_power).log2_1p()
    }
}

trait Log2OnePlus {
    fn log2_1p(self) -> f64;
}

impl Log2OnePlus for f64 {
    fn log2_1p(self) -> f64 {
        self.ln_1p() / std::f64::consts::LN_2
    }
}

/// `s_n = ||row_n(F^H h)||^2`.
pub fn beam_scores(f: &ComplexMatrix, h: &ComplexMatrix) -> Result<Vec<f64>> {
    if f.nrows() != h.nrows() {
        return Err(Error::InvalidDimension(format!(
            "codebook has {} rows, channel has {}",
            f.nrows(),
            h.nrows()
        )));
    }
    let projected = f.adjoint() * h;
    Ok(projected.row_iter().map(|row| row.norm_squared()).collect())
}

/// `s_n = f_n^H R f_n`.
pub fn covariance_scores(f: &ComplexMatrix, r: &HermitianMatrix) -> Result<Vec<f64>> {
    if f.nrows() != r.dim() {
        return Err(Error::InvalidDimension(format!(
            "codebook has {} rows, covariance is {}x{}",
            f.nrows(),
            r.dim(),
            r.dim()
        )));
    }
    Ok((0..f.ncols()).map(|k| quadratic_form(r, f, k)).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedSolution {
    pub d: Vec<f64>,
    /// `sum_n d_n^2 (signal_n - kappa interf_n) - kappa noise_power`.
    pub objective: f64,
    /// Per-index coefficients `signal_n - kappa interf_n`.
    pub coefficients: Vec<f64>,
}

/// Maximizes `sum_n d_n^2 (signal_n - kappa interf_n) - kappa noise` over
/// `d in [0, 1]^N`. Each coordinate is independent, so `d_n = 1` exactly
/// where the coefficient is positive.
pub fn solve_relaxed(signal: &[f64], interf: &[f64], kappa: f64, noise_power: f64) -> RelaxedSolution {
    let coefficients: Vec<f64> = signal.iter().zip(interf).map(|(&a, &b)| a - kappa * b).collect();
    let d: Vec<f64> = coefficients.iter().map(|&c| if c > 0.0 { 1.0 } else { 0.0 }).collect();
    let objective = coefficients.iter().filter(|&&c| c > 0.0).sum::<f64>() - kappa * noise_power;
    RelaxedSolution {
        d,
        objective,
        coefficients,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Thresholded {
    pub d: Vec<bool>,
    /// Fewer candidates than the requested cardinality.
    pub shortfall: bool,
}

/// Keeps exactly `cardinality` indices: largest relaxed value first, then
/// largest ranking score, then lowest index.
pub fn threshold_rho(relaxed: &[f64], ranking: &[f64], cardinality: usize) -> Thresholded {
    threshold_rho_among(relaxed, ranking, cardinality, &vec![true; relaxed.len()])
}

/// [`threshold_rho`] restricted to indices with `allowed[n]` set.
pub fn threshold_rho_among(relaxed: &[f64], ranking: &[f64], cardinality: usize, allowed: &[bool]) -> Thresholded {
    let mut order: Vec<usize> = (0..relaxed.len()).filter(|&i| allowed[i]).collect();
    order.sort_by(|&a, &b| {
        relaxed[b]
            .total_cmp(&relaxed[a])
            .then_with(|| ranking[b].total_cmp(&ranking[a]))
            .then(a.cmp(&b))
    });
    let mut d = vec![false; relaxed.len()];
    for &i in order.iter().take(cardinality) {
        d[i] = true;
    }
    Thresholded {
        d,
        shortfall: order.len() < cardinality,
    }
}

/// Runs the Dinkelbach loop from `kappa = 1` for both operations.
///
/// Each iteration solves both relaxed problems with the current ratios,
/// thresholds them (comms first; with `disjoint` the radar chains are
/// picked from the remaining beams), and replaces each `kappa` with the
/// achieved `c / eta`. An iteration that would lower the ratio sum is
/// rejected and ends the loop, so the returned trace never decreases.
pub fn dinkelbach_select(
    source: ScoreSource<'_>,
    scenario: &Scenario,
    opts: &SelectOptions,
) -> Result<(Selection, DinkelbachState)> {
    if !(0.0..=1.0).contains(&scenario.rho) {
        return Err(Error::config(
            "rho",
            format!("must lie in [0, 1], got {}", scenario.rho),
        ));
    }
    let n = scenario.n_antennas;
    let f = dft_matrix(n)?;
    let scores = BeamScores::from_source(source, &f)?;
    if scores.len() != n {
        return Err(Error::InvalidDimension(format!(
            "scenario has {n} antennas but inputs are {}-dimensional",
            scores.len()
        )));
    }
    dinkelbach_on_scores(
        &scores,
        scenario.comms_chains(),
        scenario.radar_chains(),
        scenario.noise_power(),
        opts,
    )
}

/// The selection loop on precomputed beam scores.
pub fn dinkelbach_on_scores(
    scores: &BeamScores,
    comms_chains: usize,
    radar_chains: usize,
    noise_power: f64,
    opts: &SelectOptions,
) -> Result<(Selection, DinkelbachState)> {
    if noise_power.is_nan() || noise_power <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "noise power must be positive, got {noise_power}"
        )));
    }
    let n = scores.len();
    if comms_chains + radar_chains > n && opts.disjoint {
        return Err(Error::InvalidArgument(format!(
            "{comms_chains} + {radar_chains} chains exceed {n} beams"
        )));
    }
    let mut selection = Selection {
        d_c: vec![false; n],
        d_r: vec![false; n],
        relaxed_c: vec![0.5; n],
        relaxed_r: vec![0.5; n],
    };
    let mut state = DinkelbachState {
        kappa_c: 1.0,
        kappa_r: 1.0,
        iteration: 0,
        objective_trace: Vec::new(),
        c_c: 0.0,
        c_r: 0.0,
        eta_c: noise_power,
        eta_r: noise_power,
        converged: false,
        shortfall: false,
    };

    for _ in 0..opts.max_iter {
        let relaxed_c = solve_relaxed(&scores.signal, &scores.leak_c, state.kappa_c, noise_power);
        let comms = threshold_rho(&relaxed_c.d, &relaxed_c.coefficients, comms_chains);
        let relaxed_r = solve_relaxed(&scores.signal, &scores.leak_r, state.kappa_r, noise_power);
        let radar = if opts.disjoint {
            let free: Vec<bool> = comms.d.iter().map(|&b| !b).collect();
            threshold_rho_among(&relaxed_r.d, &relaxed_r.coefficients, radar_chains, &free)
        } else {
            threshold_rho(&relaxed_r.d, &relaxed_r.coefficients, radar_chains)
        };

        let (c_c, eta_c, c_r, eta_r) = scores.terms(&comms.d, &radar.d, noise_power);
        // eta >= noise_power > 0 for nonnegative scores; the floor guards
        // against rounding in nearly singular covariances.
        let (eta_c, eta_r) = (eta_c.max(noise_power), eta_r.max(noise_power));
        let objective = c_c / eta_c + c_r / eta_r;
        if let Some(&last) = state.objective_trace.last() {
            if objective < last - 1e-12 * last.abs().max(1.0) {
                break;
            }
        }

        selection = Selection {
            d_c: comms.d,
            d_r: radar.d,
            relaxed_c: relaxed_c.d,
            relaxed_r: relaxed_r.d,
        };
        state.shortfall |= comms.shortfall || radar.shortfall;
        state.iteration += 1;
        state.objective_trace.push(objective);
        state.c_c = c_c;
        state.c_r = c_r;
        state.eta_c = eta_c;
        state.eta_r = eta_r;

        let (next_c, next_r) = (c_c / eta_c, c_r / eta_r);
        let still =
            (next_c - state.kappa_c).abs() <= opts.kappa_tol && (next_r - state.kappa_r).abs() <= opts.kappa_tol;
        state.kappa_c = next_c;
        state.kappa_r = next_r;
        if still {
            state.converged = true;
            break;
        }
    }
    Ok((selection, state))
}

/// Exhaustive search for the selection maximizing
/// `log2(1 + c_C / eta_C + c_R / eta_R)` on one channel draw, over disjoint
/// selections with the scenario's chain counts. Among equal values the
/// lexicographically first comms index set wins.
pub fn brute_force_oracle(channels: &ChannelSet, scenario: &Scenario) -> Result<(Selection, f64)> {
    let n = scenario.n_antennas;
    if n > ORACLE_MAX_ANTENNAS {
        return Err(Error::SearchTooLarge(n, ORACLE_MAX_ANTENNAS));
    }
    if channels.dim() != n {
        return Err(Error::InvalidDimension(format!(
            "scenario has {n} antennas but channels are {}x{}",
            channels.dim(),
            channels.dim()
        )));
    }
    let f = dft_matrix(n)?;
    let scores = BeamScores::from_source(ScoreSource::Instantaneous(channels), &f)?;
    let noise = scenario.noise_power();
    let (kc, kr) = (scenario.comms_chains(), scenario.radar_chains());

    let mut best: Option<(Vec<bool>, Vec<bool>, f64)> = None;
    for comms in Combinations::new(n, kc) {
        let mut d_c = vec![false; n];
        for &i in &comms {
            d_c[i] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&i| !d_c[i]).collect();
        for radar in Combinations::new(free.len(), kr) {
            let mut d_r = vec![false; n];
            for &j in &radar {
                d_r[free[j]] = true;
            }
            let value = scores.capacity(&d_c, &d_r, noise);
            if best
                .as_ref()
                .is_none_or(|b| value.partial_cmp(&b.2) == Some(Ordering::Greater))
            {
                best = Some((d_c.clone(), d_r, value));
            }
        }
    }
    let (d_c, d_r, value) = best.expect("at least one assignment exists");
    let as_real = |d: &[bool]| d.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect();
    Ok((
        Selection {
            relaxed_c: as_real(&d_c),
            relaxed_r: as_real(&d_r),
            d_c,
            d_r,
        },
        value,
    ))
}

/// k-subsets of `0..n` in lexicographic order.
struct Combinations {
    n: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, k: usize) -> Self {
        Combinations {
            n,
            current: (k <= n).then(|| (0..k).collect()),
        }
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let k = out.len();
        let mut next = out.clone();
        let mut i = k;
        loop {
            if i == 0 {
                self.current = None;
                break;
            }
            i -= 1;
            if next[i] < self.n - k + i {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                self.current = Some(next);
                break;
            }
        }
        Some(out)
    }
}

/// Exact capacity `log2(1 + x)` and its first-order approximation
/// `x / ln 2` for one draw and a fixed selection.
pub fn capacity_and_approximation(
    channels: &ChannelSet,
    d_c: &[bool],
    d_r: &[bool],
    noise_power: f64,
) -> Result<(f64, f64)> {
    let f = dft_matrix(channels.dim())?;
    let scores = BeamScores::from_source(ScoreSource::Instantaneous(channels), &f)?;
    let x = scores.ratio_sum(d_c, d_r, noise_power);
    Ok((x.log2_1p(), x / std::f64::consts::LN_2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{draw_channel_set, place_angles, trial_rng, AngleSet};
    use rand::Rng;

    fn scenario(n: usize, rho: f64) -> Scenario {
        Scenario {
            n_antennas: n,
            n_users: 1,
            n_targets: 1,
            rho,
            ..Scenario::default()
        }
    }

    #[test]
    fn zero_channel_scores_are_zero() {
        let f = dft_matrix(8).unwrap();
        let s = beam_scores(&f, &ComplexMatrix::zeros(8, 8)).unwrap();
        assert!(s.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn scores_sum_to_frobenius_energy() {
        let sc = Scenario {
            n_antennas: 16,
            ..scenario(16, 0.5)
        };
        let angles = place_angles(&sc).unwrap();
        let ch = draw_channel_set(&sc, &angles, &mut trial_rng(3, 0)).unwrap();
        let f = dft_matrix(16).unwrap();
        let s = beam_scores(&f, &ch.h).unwrap();
        let total = (f.adjoint() * &ch.h).norm_squared();
        assert!((s.iter().sum::<f64>() - total).abs() < 1e-9 * total);
    }

    #[test]
    fn grid_aligned_path_dominates_one_beam() {
        let n = 16;
        let phi = (2.0 * 5.0 / n as f64).asin().to_degrees();
        let h = crate::channel::synthesize_channel(&[phi], &[Complex64::new(1.0, 0.0)], n, 0.5).unwrap();
        let f = dft_matrix(n).unwrap();
        let s = beam_scores(&f, &h).unwrap();
        let total: f64 = s.iter().sum();
        let top = s.iter().copied().fold(0.0, f64::max);
        assert!(top >= 0.5 * total);
    }

    #[test]
    fn relaxed_solution_cases() {
        let all = solve_relaxed(&[3.0, 2.0, 1.0], &[0.0, 0.5, 0.1], 1.0, 0.1);
        assert_eq!(all.d, vec![1.0, 1.0, 1.0]);
        let free = solve_relaxed(&[0.0, 2.0, 1.0], &[9.0, 9.0, 9.0], 0.0, 0.1);
        assert_eq!(free.d, vec![0.0, 1.0, 1.0]);
        let tie = solve_relaxed(&[1.0], &[1.0], 1.0, 0.1);
        assert_eq!(tie.d, vec![0.0]);
    }

    #[test]
    fn relaxed_solution_matches_projected_gradient() {
        let mut rng = trial_rng(21, 0);
        for _ in 0..20 {
            let a: Vec<f64> = (0..8).map(|_| rng.random::<f64>()).collect();
            let b: Vec<f64> = (0..8).map(|_| rng.random::<f64>()).collect();
            let kappa = 2.0 * rng.random::<f64>();
            let noise = 0.3;
            let closed = solve_relaxed(&a, &b, kappa, noise);
            // Projected gradient ascent on sum d^2 c - kappa noise, from the box center.
            let mut d = [0.5; 8];
            for _ in 0..20_000 {
                for i in 0..8 {
                    let c = a[i] - kappa * b[i];
                    d[i] = (d[i] + 0.5 * 2.0 * d[i] * c).clamp(0.0, 1.0);
                }
            }
            let value: f64 = (0..8).map(|i| d[i] * d[i] * (a[i] - kappa * b[i])).sum::<f64>() - kappa * noise;
            assert!(
                (closed.objective - value).abs() < 1e-6,
                "{} vs {}",
                closed.objective,
                value
            );
        }
    }

    #[test]
    fn threshold_cases() {
        let t = threshold_rho(&[1.0; 4], &[0.1, 0.4, 0.3, 0.2], 2);
        assert_eq!(t.d, vec![false, true, true, false]);
        let t = threshold_rho(&[0.0, 1.0, 0.0, 1.0], &[0.0; 4], 2);
        assert_eq!(t.d, vec![false, true, false, true]);
        let t = threshold_rho(&[1.0; 4], &[0.0; 4], 0);
        assert!(t.d.iter().all(|&b| !b));
        let t = threshold_rho_among(&[1.0; 4], &[0.0; 4], 3, &[true, false, true, false]);
        assert!(t.shortfall);
        assert_eq!(t.d, vec![true, false, true, false]);
    }

    #[test]
    fn rho_one_gives_everything_to_comms() {
        let sc = Scenario {
            rho: 1.0,
            ..scenario(16, 1.0)
        };
        let angles = place_angles(&sc).unwrap();
        let cov = CovarianceSet::analytic(&angles, 16, 0.5);
        let (sel, _) = dinkelbach_select(ScoreSource::Covariance(&cov), &sc, &SelectOptions::default()).unwrap();
        assert!(sel.d_c.iter().all(|&b| b));
        assert!(sel.d_r.iter().all(|&b| !b));
    }

    #[test]
    fn separated_on_grid_paths_are_split() {
        let n = 16;
        let on_grid = |k: f64| (2.0 * k / n as f64).asin().to_degrees();
        let angles = AngleSet::new(vec![on_grid(-4.0)], vec![on_grid(4.0)]).unwrap();
        let sc = scenario(n, 0.5);
        let cov = CovarianceSet::analytic(&angles, n, 0.5);
        let (sel, _) = dinkelbach_select(ScoreSource::Covariance(&cov), &sc, &SelectOptions::default()).unwrap();
        let f = dft_matrix(n).unwrap();
        let ec = covariance_scores(&f, &cov.comms).unwrap();
        let er = covariance_scores(&f, &cov.radar).unwrap();
        let share = |d: &[bool], e: &[f64]| {
            d.iter().zip(e).filter(|(&b, _)| b).map(|(_, &v)| v).sum::<f64>() / e.iter().sum::<f64>()
        };
        assert!(share(&sel.d_c, &ec) >= 0.99);
        assert!(share(&sel.d_c, &er) <= 0.01);
        assert!(share(&sel.d_r, &er) >= 0.99);
        assert!(share(&sel.d_r, &ec) <= 0.01);
    }

    #[test]
    fn cardinality_and_disjointness() {
        let sc = Scenario {
            n_users: 2,
            n_targets: 2,
            ..scenario(32, 0.5)
        };
        let angles = place_angles(&sc).unwrap();
        let cov = CovarianceSet::analytic(&angles, 32, 0.5);
        let (sel, state) = dinkelbach_select(ScoreSource::Covariance(&cov), &sc, &SelectOptions::default()).unwrap();
        assert_eq!(sel.comms_count(), 16);
        assert_eq!(sel.radar_count(), 16);
        assert!(sel.is_disjoint());
        assert!(state.objective_trace.windows(2).all(|w| w[1] >= w[0] - 1e-9));
        assert!((state.c_c - state.kappa_c * state.eta_c).abs() <= 1e-6 * state.c_c.max(1.0));
    }

    #[test]
    fn oracle_small_cases() {
        let sc = scenario(2, 0.5);
        let (sel, value) = brute_force_oracle(&ChannelSet::zeros(2), &sc).unwrap();
        assert_eq!(value, 0.0);
        assert_eq!(sel.d_c, vec![true, false]);
        assert_eq!(sel.d_r, vec![false, true]);
        assert!(matches!(
            brute_force_oracle(&ChannelSet::zeros(12), &scenario(12, 0.5)),
            Err(Error::SearchTooLarge(12, _))
        ));
    }

    #[test]
    fn combinations_enumerate_binomial_count() {
        assert_eq!(Combinations::new(6, 3).count(), 20);
        assert_eq!(Combinations::new(4, 0).count(), 1);
        assert_eq!(Combinations::new(3, 4).count(), 0);
        let first: Vec<Vec<usize>> = Combinations::new(4, 2).take(3).collect();
        assert_eq!(first, vec![vec![0, 1], vec![0, 2], vec![0, 3]]);
    }
}
