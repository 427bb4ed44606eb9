//! Mutual-information figures of merit and the radar beampattern.
//!
//! Two interference conventions coexist here:
//!
//! - [`mui_joint`] and [`mui_weighted`] charge each operation with the
//!   energy its *own* precoder leaks through the *other* channel:
//!   `sigma_r^2 = ||H_R Sigma_C^{1/2}||^2` penalizes the comms term.
//! - [`jrc_mui`] charges each operation with the energy the *other*
//!   operation's precoder delivers through *its* channel, scaled by the
//!   other operation's power share: comms sees `2(1-rho) ||H_C F_R||^2`.
//!   This is the covariance form `tr(R_C F_RF D_R F_RF^H)` evaluated on an
//!   instantaneous channel, and it is what sweeps report.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::steering_vector;
use crate::error::{Error, Result};
use crate::numerics::{logdet_cap, logdet_cap_root, ComplexMatrix, HermitianMatrix};

/// Binary beamspace mask.
pub type Mask = DMatrix<bool>;

/// Floor applied to `nrp_db` where the normalized power is exactly zero.
pub const NRP_DB_FLOOR: f64 = -300.0;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MuiReport {
    /// Total, `comms_term + radar_term`, in bits/s/Hz.
    pub mui_bits: f64,
    pub comms_term: f64,
    pub radar_term: f64,
    /// Interference power charged to the communication term.
    pub sigma_r_sq: f64,
    /// Interference power charged to the radar term.
    pub sigma_c_sq: f64,
    /// Set when a precoder could not be formed as requested (for example an
    /// empty nullspace) and a fallback was used.
    pub degenerate: bool,
}

impl MuiReport {
    fn from_terms(comms_term: f64, radar_term: f64, sigma_r_sq: f64, sigma_c_sq: f64) -> Self {
        MuiReport {
            mui_bits: comms_term + radar_term,
            comms_term,
            radar_term,
            sigma_r_sq,
            sigma_c_sq,
            degenerate: false,
        }
    }
}

/// Precoder square roots for the two operations: `Sigma = root root^H`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrecoderPair {
    pub comms: ComplexMatrix,
    pub radar: ComplexMatrix,
}

impl PrecoderPair {
    /// Scales orthonormal-column roots by `1/sqrt(n)`, so a full-space root
    /// carries unit transmit power and every retained direction keeps the
    /// same per-direction power `1/n`.
    pub fn per_direction_power(comms: ComplexMatrix, radar: ComplexMatrix, n: usize) -> Self {
        let s = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        PrecoderPair {
            comms: comms * s,
            radar: radar * s,
        }
    }

    /// Unit-power identity precoders for both operations.
    pub fn full_space(n: usize) -> Self {
        Self::per_direction_power(ComplexMatrix::identity(n, n), ComplexMatrix::identity(n, n), n)
    }
}

/// Separate-hardware mutual information: two interference-free log-dets.
pub fn mui_separate(
    h_c: &ComplexMatrix,
    h_r: &ComplexMatrix,
    sigma_c: &HermitianMatrix,
    sigma_r: &HermitianMatrix,
    noise_power: f64,
) -> Result<MuiReport> {
    let comms = logdet_cap(h_c, sigma_c, noise_power)?;
    let radar = logdet_cap(h_r, sigma_r, noise_power)?;
    Ok(MuiReport::from_terms(comms, radar, 0.0, 0.0))
}

/// Shared-hardware mutual information with `sigma_r^2 = ||H_R Sigma_C^{1/2}||_F^2`
/// added to the comms noise and `sigma_c^2 = ||H_C Sigma_R^{1/2}||_F^2` to the
/// radar noise. Never exceeds [`mui_separate`] on the same inputs.
pub fn mui_joint(
    h_c: &ComplexMatrix,
    h_r: &ComplexMatrix,
    sigma_c: &HermitianMatrix,
    sigma_r: &HermitianMatrix,
    noise_power: f64,
) -> Result<MuiReport> {
    let (sigma_r_sq, sigma_c_sq) = leakage_powers(h_c, h_r, sigma_c, sigma_r)?;
    let comms = logdet_cap(h_c, sigma_c, noise_power + sigma_r_sq)?;
    let radar = logdet_cap(h_r, sigma_r, noise_power + sigma_c_sq)?;
    Ok(MuiReport::from_terms(comms, radar, sigma_r_sq, sigma_c_sq))
}

fn leakage_powers(
    h_c: &ComplexMatrix,
    h_r: &ComplexMatrix,
    sigma_c: &HermitianMatrix,
    sigma_r: &HermitianMatrix,
) -> Result<(f64, f64)> {
    if h_r.ncols() != sigma_c.dim() || h_c.ncols() != sigma_r.dim() {
        return Err(Error::InvalidDimension(
            "channels and covariances are not conformal".into(),
        ));
    }
    let root_c = sigma_c.sqrt_psd()?;
    let root_r = sigma_r.sqrt_psd()?;
    Ok(((h_r * root_c).norm_squared(), (h_c * root_r).norm_squared()))
}

/// `2 rho T_C + 2 (1 - rho) T_R`, where the log-det terms optionally carry the
/// [`mui_joint`] interference powers.
#[allow(clippy::too_many_arguments)]
pub fn mui_weighted(
    h_c: &ComplexMatrix,
    h_r: &ComplexMatrix,
    sigma_c: &HermitianMatrix,
    sigma_r: &HermitianMatrix,
    noise_power: f64,
    rho: f64,
    with_interference: bool,
) -> Result<MuiReport> {
    check_rho(rho)?;
    let base = if with_interference {
        mui_joint(h_c, h_r, sigma_c, sigma_r, noise_power)?
    } else {
        mui_separate(h_c, h_r, sigma_c, sigma_r, noise_power)?
    };
    Ok(MuiReport::from_terms(
        2.0 * rho * base.comms_term,
        2.0 * (1.0 - rho) * base.radar_term,
        base.sigma_r_sq,
        base.sigma_c_sq,
    ))
}

/// Weighted JRC mutual information of a precoder pair, used to score every
/// method in a sweep.
///
/// With interference on, the comms term sees `2(1-rho) ||H_C F_R||_F^2` extra
/// noise and the radar term `2 rho ||H_R F_C||_F^2`.
pub fn jrc_mui(
    h_c: &ComplexMatrix,
    h_r: &ComplexMatrix,
    precoders: &PrecoderPair,
    noise_power: f64,
    rho: f64,
    with_interference: bool,
) -> Result<MuiReport> {
    check_rho(rho)?;
    let (sigma_r_sq, sigma_c_sq) = if with_interference {
        (
            2.0 * (1.0 - rho) * (h_c * &precoders.radar).norm_squared(),
            2.0 * rho * (h_r * &precoders.comms).norm_squared(),
        )
    } else {
        (0.0, 0.0)
    };
    // A zero weight removes the term entirely; skip the eigen-decomposition.
    let comms = if rho > 0.0 {
        2.0 * rho * logdet_cap_root(h_c, &precoders.comms, noise_power + sigma_r_sq)?
    } else {
        0.0
    };
    let radar = if rho < 1.0 {
        2.0 * (1.0 - rho) * logdet_cap_root(h_r, &precoders.radar, noise_power + sigma_c_sq)?
    } else {
        0.0
    };
    Ok(MuiReport::from_terms(comms, radar, sigma_r_sq, sigma_c_sq))
}

fn check_rho(rho: f64) -> Result<()> {
    if (0.0..=1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("rho must lie in [0, 1], got {rho}")))
    }
}

/// Sum of `|m_ij|^2` over entries selected by `mask`.
pub fn masked_energy(mask: &Mask, m: &ComplexMatrix) -> f64 {
    mask.iter()
        .zip(m.iter())
        .filter(|(&on, _)| on)
        .map(|(_, z)| z.norm_sqr())
        .sum()
}

/// Beamspace-nulling mutual information: a single
/// `log2(1 + S_C / (noise + I_C) + S_R / (noise + I_R))` over masked
/// beamspace energies of `F^H H F`.
///
/// With component channels the interference terms are
/// `||Omega_C o F^H H_R F||^2` and `||Omega_R o F^H H_C F||^2`. Without them
/// both fall back to the energy of `F^H H F` on entries claimed by both
/// masks, the only entries where the other operation can be attributed.
///
/// The report splits the total between the two terms in proportion to their
/// ratios inside the logarithm.
pub fn mui_beamspace(
    h: &ComplexMatrix,
    omega_c: &Mask,
    omega_r: &Mask,
    f: &ComplexMatrix,
    noise_power: f64,
    components: Option<(&ComplexMatrix, &ComplexMatrix)>,
) -> Result<MuiReport> {
    if noise_power.is_nan() || noise_power <= 0.0 {
        return Err(Error::InvalidArgument(format!(
            "noise power must be positive, got {noise_power}"
        )));
    }
    let n = h.nrows();
    if !h.is_square() || f.shape() != (n, n) || omega_c.shape() != (n, n) || omega_r.shape() != (n, n) {
        return Err(Error::InvalidDimension("beamspace inputs must all be NxN".into()));
    }
    let beamspace = |m: &ComplexMatrix| f.adjoint() * m * f;
    let total = beamspace(h);
    let signal_c = masked_energy(omega_c, &total);
    let signal_r = masked_energy(omega_r, &total);
    let (sigma_r_sq, sigma_c_sq) = match components {
        Some((h_c, h_r)) => {
            if h_c.shape() != (n, n) || h_r.shape() != (n, n) {
                return Err(Error::InvalidDimension("component channels must be NxN".into()));
            }
            (
                masked_energy(omega_c, &beamspace(h_r)),
                masked_energy(omega_r, &beamspace(h_c)),
            )
        }
        None => {
            let overlap = omega_c.zip_map(omega_r, |a, b| a && b);
            let e = masked_energy(&overlap, &total);
            (e, e)
        }
    };
    let ratio_c = signal_c / (noise_power + sigma_r_sq);
    let ratio_r = signal_r / (noise_power + sigma_c_sq);
    let x = ratio_c + ratio_r;
    let total_bits = x.ln_1p() / std::f64::consts::LN_2;
    let (comms, radar) = if x > 0.0 {
        (total_bits * ratio_c / x, total_bits * ratio_r / x)
    } else {
        (0.0, 0.0)
    };
    Ok(MuiReport {
        mui_bits: total_bits,
        comms_term: comms,
        radar_term: radar,
        sigma_r_sq,
        sigma_c_sq,
        degenerate: false,
    })
}

/// `tr(R F_RF diag(d) F_RF^H) = sum_n d_n f_n^H R f_n`.
pub fn interference_covariance(r: &HermitianMatrix, f_rf: &ComplexMatrix, d: &[f64]) -> Result<f64> {
    let n = r.dim();
    if f_rf.nrows() != n || f_rf.ncols() != d.len() {
        return Err(Error::InvalidDimension(format!(
            "covariance {n}x{n}, codebook {:?}, selection of length {}",
            f_rf.shape(),
            d.len()
        )));
    }
    let value: f64 = d
        .iter()
        .enumerate()
        .filter(|(_, &w)| w != 0.0)
        .map(|(k, &w)| w * quadratic_form(r, f_rf, k))
        .sum();
    if value < -1e-9 * r.trace().abs() {
        return Err(Error::NumericalConsistency(format!(
            "interference trace is negative: {value:e}"
        )));
    }
    Ok(value.max(0.0))
}

/// `f_k^H R f_k` for column `k` of `f`.
pub fn quadratic_form(r: &HermitianMatrix, f: &ComplexMatrix, k: usize) -> f64 {
    let col = f.column(k);
    let rf = r.as_matrix() * col;
    col.iter().zip(rf.iter()).map(|(a, b)| (a.conj() * b).re).sum()
}

/// Radar beampattern probed by receive steering vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct Beampattern {
    pub angles_deg: Vec<f64>,
    /// Power normalized to a unit peak (raw power when `all_zero`).
    pub nrp: Vec<f64>,
    pub nrp_db: Vec<f64>,
    /// Every probed power was zero, so no normalization took place.
    pub all_zero: bool,
}

impl Beampattern {
    /// Interior strict local maxima as `(angle_deg, nrp)`, strongest first.
    pub fn local_maxima(&self) -> Vec<(f64, f64)> {
        let p = &self.nrp;
        let mut peaks: Vec<(f64, f64)> = (1..p.len().saturating_sub(1))
            .filter(|&i| p[i] > p[i - 1] && p[i] >= p[i + 1])
            .map(|i| (self.angles_deg[i], p[i]))
            .collect();
        peaks.sort_by(|a, b| b.1.total_cmp(&a.1));
        peaks
    }
}

/// Uniform angle grid from `lo` to `hi` inclusive.
pub fn angle_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    (0..count).map(|i| lo + i as f64 * step).collect()
}

/// Normalized received power `p(theta) = ||a(theta)^H H_R F_R||^2 / max p`.
pub fn nrp_beampattern(
    h_r: &ComplexMatrix,
    f_r: &ComplexMatrix,
    grid_deg: &[f64],
    n: usize,
    spacing: f64,
) -> Result<Beampattern> {
    if grid_deg.is_empty() {
        return Err(Error::InvalidArgument("beampattern grid is empty".into()));
    }
    if h_r.shape() != (n, n) || f_r.nrows() != n {
        return Err(Error::InvalidDimension(
            "radar channel and precoder must have N rows".into(),
        ));
    }
    let effective = h_r * f_r;
    let power: Vec<f64> = grid_deg
        .iter()
        .map(|&theta| {
            let b = steering_vector(theta, n, spacing);
            (b.adjoint() * &effective).norm_squared()
        })
        .collect();
    let peak = power.iter().copied().fold(0.0, f64::max);
    let all_zero = peak == 0.0;
    let nrp: Vec<f64> = if all_zero {
        power
    } else {
        power.iter().map(|p| p / peak).collect()
    };
    let nrp_db = nrp
        .iter()
        .map(|&p| {
            if p > 0.0 {
                (10.0 * p.log10()).max(NRP_DB_FLOOR)
            } else {
                NRP_DB_FLOOR
            }
        })
        .collect();
    Ok(Beampattern {
        angles_deg: grid_deg.to_vec(),
        nrp,
        nrp_db,
        all_zero,
    })
}
