//! Scenario description, ULA steering vectors and clustered-multipath
//! channel synthesis.
//!
//! Each user and each target contributes one path whose departure and
//! arrival angles coincide. The communication channel collects the user
//! paths, the radar channel the target paths, and the transmitter sees
//! their sum.

use std::f64::consts::PI;

use nalgebra::DVector;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::numerics::{ComplexMatrix, HermitianMatrix};

pub type ComplexVector = DVector<Complex64>;

/// Full configuration of one experiment point.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub n_antennas: usize,
    pub n_users: usize,
    pub n_targets: usize,
    /// Communications weight in `[0, 1]`; `1` gives every RF chain to comms.
    pub rho: f64,
    pub snr_db: f64,
    pub antenna_spacing_over_wavelength: f64,
    pub angle_range_deg: (f64, f64),
    pub seed: u64,
    pub trials: usize,
}

impl Default for Scenario {
    fn default() -> Self {
        Scenario {
            n_antennas: 32,
            n_users: 3,
            n_targets: 3,
            rho: 0.5,
            snr_db: 0.0,
            antenna_spacing_over_wavelength: 0.5,
            angle_range_deg: (-60.0, 60.0),
            seed: 0,
            trials: 500,
        }
    }
}

impl Scenario {
    pub fn validate(&self) -> Result<()> {
        if self.n_antennas < 2 {
            return Err(Error::config(
                "n_antennas",
                format!("need at least 2 antennas, got {}", self.n_antennas),
            ));
        }
        if !(0.0..=1.0).contains(&self.rho) {
            return Err(Error::config("rho", format!("must lie in [0, 1], got {}", self.rho)));
        }
        if !self.snr_db.is_finite() {
            return Err(Error::config("snr_db", "must be finite"));
        }
        if !(self.antenna_spacing_over_wavelength > 0.0 && self.antenna_spacing_over_wavelength.is_finite()) {
            return Err(Error::config("spacing", "must be positive and finite"));
        }
        let (lo, hi) = self.angle_range_deg;
        if !(lo.is_finite() && hi.is_finite() && lo < hi && lo >= -90.0 && hi <= 90.0) {
            return Err(Error::config(
                "angle_range",
                format!("need -90 <= lo < hi <= 90, got ({lo}, {hi})"),
            ));
        }
        if self.trials == 0 {
            return Err(Error::config("trials", "must be at least 1"));
        }
        Ok(())
    }

    /// Noise variance `sigma_n^2 = 10^(-snr_db / 10)`, since SNR is `1 / sigma_n^2`.
    pub fn noise_power(&self) -> f64 {
        10f64.powf(-self.snr_db / 10.0)
    }

    /// RF chains assigned to radar: `ceil((1 - rho) N)`.
    pub fn radar_chains(&self) -> usize {
        radar_chains(self.rho, self.n_antennas)
    }

    /// RF chains assigned to communications: the remainder `N - ceil((1 - rho) N)`.
    pub fn comms_chains(&self) -> usize {
        self.n_antennas - self.radar_chains()
    }
}

/// `ceil((1 - rho) n)`, ignoring the rounding noise of `1 - rho`.
pub fn radar_chains(rho: f64, n: usize) -> usize {
    let raw = (1.0 - rho) * n as f64;
    ((raw - 1e-9).ceil().max(0.0) as usize).min(n)
}

/// Path angles of the communication users and the radar targets, in degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleSet {
    pub comms_angles_deg: Vec<f64>,
    pub radar_angles_deg: Vec<f64>,
}

impl AngleSet {
    /// Builds an angle set, rejecting angles shared between users and targets.
    pub fn new(comms_angles_deg: Vec<f64>, radar_angles_deg: Vec<f64>) -> Result<Self> {
        for &c in &comms_angles_deg {
            for &r in &radar_angles_deg {
                if (c - r).abs() <= 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "user and target share the angle {c} deg"
                    )));
                }
            }
        }
        if comms_angles_deg.iter().chain(&radar_angles_deg).any(|a| !a.is_finite()) {
            return Err(Error::InvalidArgument("angles must be finite".into()));
        }
        Ok(AngleSet {
            comms_angles_deg,
            radar_angles_deg,
        })
    }

    pub fn within(&self, range: (f64, f64)) -> bool {
        self.comms_angles_deg
            .iter()
            .chain(&self.radar_angles_deg)
            .all(|&a| a >= range.0 && a <= range.1)
    }
}

/// Which part of a [`ChannelSet`] to read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Component {
    Comms,
    Radar,
    Total,
}

/// One channel realization: `h = h_c + h_r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSet {
    pub h_c: ComplexMatrix,
    pub h_r: ComplexMatrix,
    pub h: ComplexMatrix,
}

impl ChannelSet {
    pub fn new(h_c: ComplexMatrix, h_r: ComplexMatrix) -> Result<Self> {
        if h_c.shape() != h_r.shape() || !h_c.is_square() {
            return Err(Error::InvalidDimension(format!(
                "component channels must be equal square matrices, got {:?} and {:?}",
                h_c.shape(),
                h_r.shape()
            )));
        }
        let h = &h_c + &h_r;
        Ok(ChannelSet { h_c, h_r, h })
    }

    pub fn zeros(n: usize) -> Self {
        let z = ComplexMatrix::zeros(n, n);
        ChannelSet {
            h_c: z.clone(),
            h_r: z.clone(),
            h: z,
        }
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn component(&self, which: Component) -> &ComplexMatrix {
        match which {
            Component::Comms => &self.h_c,
            Component::Radar => &self.h_r,
            Component::Total => &self.h,
        }
    }
}

/// Second-order statistics `R = E{H^H H}`, `R_C`, `R_R` of a channel family.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceSet {
    pub total: HermitianMatrix,
    pub comms: HermitianMatrix,
    pub radar: HermitianMatrix,
}

impl CovarianceSet {
    /// Closed-form expectation for unit-variance independent path gains:
    /// `R_C = (N^2 / K) sum_l a(phi_l) a(phi_l)^H`, likewise for radar, and
    /// `R = R_C + R_R` because the two gain sets are independent.
    pub fn analytic(angles: &AngleSet, n: usize, spacing: f64) -> Self {
        let comms = analytic_covariance(&angles.comms_angles_deg, n, spacing);
        let radar = analytic_covariance(&angles.radar_angles_deg, n, spacing);
        CovarianceSet {
            total: &comms + &radar,
            comms,
            radar,
        }
    }

    /// Monte-Carlo estimate from channel draws.
    pub fn from_samples(draws: &[ChannelSet]) -> Result<Self> {
        use crate::numerics::sample_covariance;
        Ok(CovarianceSet {
            total: sample_covariance(draws, Component::Total)?,
            comms: sample_covariance(draws, Component::Comms)?,
            radar: sample_covariance(draws, Component::Radar)?,
        })
    }

    pub fn dim(&self) -> usize {
        self.total.dim()
    }
}

/// `(N^2 / N_c) sum_l a(phi_l) a(phi_l)^H`; zero for an empty path list.
pub fn analytic_covariance(angles_deg: &[f64], n: usize, spacing: f64) -> HermitianMatrix {
    if angles_deg.is_empty() {
        return HermitianMatrix::zeros(n);
    }
    let mut acc = ComplexMatrix::zeros(n, n);
    for &phi in angles_deg {
        let a = steering_vector(phi, n, spacing);
        acc += &a * a.adjoint();
    }
    let scale = (n * n) as f64 / angles_deg.len() as f64;
    HermitianMatrix::symmetrize(acc * Complex64::new(scale, 0.0))
}

/// ULA response `(1/sqrt n) [1, e^{j 2 pi d sin(phi)}, ..., e^{j (n-1) 2 pi d sin(phi)}]^T`
/// with `d` in wavelengths.
pub fn steering_vector(angle_deg: f64, n: usize, spacing_over_wavelength: f64) -> ComplexVector {
    let step = 2.0 * PI * spacing_over_wavelength * angle_deg.to_radians().sin();
    let amp = 1.0 / (n as f64).sqrt();
    ComplexVector::from_fn(n, |k, _| Complex64::from_polar(amp, k as f64 * step))
}

/// Equispaced interior grid over the angle range with users and targets
/// alternating (user first) until one list runs out.
pub fn place_angles(scenario: &Scenario) -> Result<AngleSet> {
    let (k, t) = (scenario.n_users, scenario.n_targets);
    let total = k + t;
    if total == 0 {
        return Err(Error::config("n_users", "need at least one user or target"));
    }
    let (lo, hi) = scenario.angle_range_deg;
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(Error::config("angle_range", format!("degenerate range ({lo}, {hi})")));
    }
    if total > scenario.n_antennas {
        return Err(Error::InsufficientResolution {
            paths: total,
            antennas: scenario.n_antennas,
        });
    }
    let step = (hi - lo) / (total + 1) as f64;
    let mut comms = Vec::with_capacity(k);
    let mut radar = Vec::with_capacity(t);
    for i in 0..total {
        let angle = lo + (i + 1) as f64 * step;
        let user_turn = i % 2 == 0;
        if (user_turn && comms.len() < k) || radar.len() == t {
            comms.push(angle);
        } else {
            radar.push(angle);
        }
    }
    AngleSet::new(comms, radar)
}

/// `H = (N / sqrt(N_c)) sum_l g_l a(phi_l) a(phi_l)^H`.
pub fn synthesize_channel(angles_deg: &[f64], gains: &[Complex64], n: usize, spacing: f64) -> Result<ComplexMatrix> {
    if angles_deg.len() != gains.len() {
        return Err(Error::InvalidArgument(format!(
            "{} angles but {} gains",
            angles_deg.len(),
            gains.len()
        )));
    }
    if angles_deg.is_empty() {
        return Err(Error::InvalidArgument("a channel needs at least one path".into()));
    }
    if n == 0 {
        return Err(Error::InvalidDimension("channel needs at least one antenna".into()));
    }
    let mut h = ComplexMatrix::zeros(n, n);
    for (&phi, &g) in angles_deg.iter().zip(gains) {
        let a = steering_vector(phi, n, spacing);
        h += (&a * a.adjoint()) * g;
    }
    let scale = n as f64 / (angles_deg.len() as f64).sqrt();
    Ok(h * Complex64::new(scale, 0.0))
}

/// Circularly-symmetric complex Gaussian sample with unit variance.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Independent random stream for one Monte-Carlo trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Draws i.i.d. `CN(0, 1)` gains (users first, then targets) and builds the
/// channel pair. An empty angle list yields a zero component.
pub fn draw_channel_set<R: Rng + ?Sized>(scenario: &Scenario, angles: &AngleSet, rng: &mut R) -> Result<ChannelSet> {
    let comms_gains: Vec<Complex64> = angles.comms_angles_deg.iter().map(|_| complex_gaussian(rng)).collect();
    let radar_gains: Vec<Complex64> = angles.radar_angles_deg.iter().map(|_| complex_gaussian(rng)).collect();
    channel_set_with_gains(scenario, angles, &comms_gains, &radar_gains)
}

/// Deterministic counterpart of [`draw_channel_set`].
pub fn channel_set_with_gains(
    scenario: &Scenario,
    angles: &AngleSet,
    comms_gains: &[Complex64],
    radar_gains: &[Complex64],
) -> Result<ChannelSet> {
    let n = scenario.n_antennas;
    let d = scenario.antenna_spacing_over_wavelength;
    let part = |angles: &[f64], gains: &[Complex64]| {
        if angles.is_empty() && gains.is_empty() {
            Ok(ComplexMatrix::zeros(n, n))
        } else {
            synthesize_channel(angles, gains, n, d)
        }
    };
    ChannelSet::new(
        part(&angles.comms_angles_deg, comms_gains)?,
        part(&angles.radar_angles_deg, radar_gains)?,
    )
}
