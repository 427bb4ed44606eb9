//! Reference precoding schemes the proposed selection is compared against.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::channel::{ChannelSet, Scenario};
use crate::error::{Error, Result};
use crate::metrics::{jrc_mui, Mask, MuiReport, PrecoderPair};
use crate::numerics::{dft_matrix, nullspace_basis, ComplexMatrix, RANK_TOLERANCE};

/// Default share of beamspace energy a mask must capture.
pub const DEFAULT_ENERGY_FRACTION: f64 = 0.95;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BaselineKind {
    /// Full-space precoders scored as if the operations did not interfere.
    NoInterference,
    /// Full-space precoders with interference counted.
    WithInterference,
    /// Digital precoders confined to the other operation's nullspace.
    SvdNulling,
    /// DFT beams picked from the beamspace support of each channel.
    BeamspaceNulling,
}

impl BaselineKind {
    pub const ALL: [BaselineKind; 4] = [
        BaselineKind::NoInterference,
        BaselineKind::WithInterference,
        BaselineKind::SvdNulling,
        BaselineKind::BeamspaceNulling,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            BaselineKind::NoInterference => "no_interference",
            BaselineKind::WithInterference => "with_interference",
            BaselineKind::SvdNulling => "svd_nulling",
            BaselineKind::BeamspaceNulling => "beamspace_nulling",
        }
    }

    /// Whether the evaluation charges cross-operation interference.
    pub fn counts_interference(self) -> bool {
        self != BaselineKind::NoInterference
    }
}

impl fmt::Display for BaselineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for BaselineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        BaselineKind::ALL
            .into_iter()
            .find(|k| k.tag() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown baseline `{s}`")))
    }
}

/// Orthonormal nullspace precoders. An empty root (zero columns) means the
/// other channel has full column rank and no interference-free direction
/// exists; `degenerate` is then set.
#[derive(Debug, Clone, PartialEq)]
pub struct NullingPrecoders {
    pub comms_root: ComplexMatrix,
    pub radar_root: ComplexMatrix,
    pub degenerate: bool,
}

/// Comms precoder spans `null(H_R)`, radar precoder spans `null(H_C)`.
pub fn svd_nulling_precoders(h_c: &ComplexMatrix, h_r: &ComplexMatrix) -> Result<NullingPrecoders> {
    if h_c.shape() != h_r.shape() {
        return Err(Error::InvalidDimension(format!(
            "channel shapes differ: {:?} vs {:?}",
            h_c.shape(),
            h_r.shape()
        )));
    }
    let comms_root = nullspace_basis(h_r, RANK_TOLERANCE)?;
    let radar_root = nullspace_basis(h_c, RANK_TOLERANCE)?;
    let degenerate = comms_root.ncols() == 0 || radar_root.ncols() == 0;
    Ok(NullingPrecoders {
        comms_root,
        radar_root,
        degenerate,
    })
}

/// Smallest set of beamspace entries of `F^H H F` holding at least
/// `energy_fraction` of the energy, for each channel. Ties in magnitude are
/// broken by column-major position.
pub fn beamspace_masks(
    h_c: &ComplexMatrix,
    h_r: &ComplexMatrix,
    f: &ComplexMatrix,
    energy_fraction: f64,
) -> Result<(Mask, Mask)> {
    if !(energy_fraction > 0.0 && energy_fraction <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "energy fraction must lie in (0, 1], got {energy_fraction}"
        )));
    }
    let n = f.nrows();
    if !f.is_square() || h_c.shape() != (n, n) || h_r.shape() != (n, n) {
        return Err(Error::InvalidDimension(
            "beamspace masks need NxN channels and codebook".into(),
        ));
    }
    Ok((
        energy_mask(h_c, f, energy_fraction),
        energy_mask(h_r, f, energy_fraction),
    ))
}

fn energy_mask(h: &ComplexMatrix, f: &ComplexMatrix, energy_fraction: f64) -> Mask {
    let n = f.nrows();
    let energy: Vec<f64> = (f.adjoint() * h * f).iter().map(|z| z.norm_sqr()).collect();
    let total: f64 = energy.iter().sum();
    let mut mask = Mask::from_element(n, n, false);
    if total <= 0.0 {
        return mask;
    }
    let mut order: Vec<usize> = (0..energy.len()).collect();
    order.sort_by(|&a, &b| energy[b].total_cmp(&energy[a]).then(a.cmp(&b)));
    // Summation noise must not push a fraction of 1 past the last entry.
    let goal = energy_fraction * total * (1.0 - 1e-12);
    let mut captured = 0.0;
    for idx in order {
        if captured >= goal || energy[idx] == 0.0 {
            break;
        }
        mask[idx] = true;
        captured += energy[idx];
    }
    mask
}

/// Columns of `F` touched by a mask.
pub fn mask_columns(mask: &Mask) -> Vec<bool> {
    (0..mask.ncols()).map(|j| mask.column(j).iter().any(|&b| b)).collect()
}

/// DFT beams (unit-norm columns) for each operation from the beamspace
/// masks. A beam claimed by both masks is dropped from both when both
/// operations are active; when `rho` is 0 or 1 the idle operation needs no
/// protection and the active one keeps its full support.
pub fn beamspace_precoders(
    omega_c: &Mask,
    omega_r: &Mask,
    f: &ComplexMatrix,
    rho: f64,
) -> (ComplexMatrix, ComplexMatrix) {
    let cols_c = mask_columns(omega_c);
    let cols_r = mask_columns(omega_r);
    let both_active = rho > 0.0 && rho < 1.0;
    let keep_c: Vec<bool> = cols_c
        .iter()
        .zip(&cols_r)
        .map(|(&c, &r)| c && !(both_active && r))
        .collect();
    let keep_r: Vec<bool> = cols_r
        .iter()
        .zip(&cols_c)
        .map(|(&r, &c)| r && !(both_active && c))
        .collect();
    (select_columns(f, &keep_c), select_columns(f, &keep_r))
}

/// Chosen columns of the DFT codebook scaled to unit norm.
pub fn select_columns(f: &ComplexMatrix, keep: &[bool]) -> ComplexMatrix {
    let idx: Vec<usize> = keep.iter().enumerate().filter(|(_, &k)| k).map(|(i, _)| i).collect();
    let scale = Complex64::new(1.0 / (f.nrows() as f64).sqrt(), 0.0);
    ComplexMatrix::from_fn(f.nrows(), idx.len(), |r, c| f[(r, idx[c])] * scale)
}

/// Precoders of a baseline and whether a fallback was needed.
pub fn baseline_precoders(
    kind: BaselineKind,
    channels: &ChannelSet,
    scenario: &Scenario,
    energy_fraction: f64,
) -> Result<(PrecoderPair, bool)> {
    let n = channels.dim();
    match kind {
        BaselineKind::NoInterference | BaselineKind::WithInterference => Ok((PrecoderPair::full_space(n), false)),
        BaselineKind::SvdNulling => {
            let nulling = svd_nulling_precoders(&channels.h_c, &channels.h_r)?;
            let identity = || ComplexMatrix::identity(n, n);
            let comms = if nulling.comms_root.ncols() == 0 {
                identity()
            } else {
                nulling.comms_root
            };
            let radar = if nulling.radar_root.ncols() == 0 {
                identity()
            } else {
                nulling.radar_root
            };
            Ok((PrecoderPair::per_direction_power(comms, radar, n), nulling.degenerate))
        }
        BaselineKind::BeamspaceNulling => {
            let f = dft_matrix(n)?;
            let (omega_c, omega_r) = beamspace_masks(&channels.h_c, &channels.h_r, &f, energy_fraction)?;
            let (comms, radar) = beamspace_precoders(&omega_c, &omega_r, &f, scenario.rho);
            let starved = (scenario.rho > 0.0 && comms.ncols() == 0 && channels.h_c.norm_squared() > 0.0)
                || (scenario.rho < 1.0 && radar.ncols() == 0 && channels.h_r.norm_squared() > 0.0);
            Ok((PrecoderPair::per_direction_power(comms, radar, n), starved))
        }
    }
}

/// Scores one baseline on one channel draw with the sweep metric.
pub fn evaluate_baseline(kind: BaselineKind, channels: &ChannelSet, scenario: &Scenario) -> Result<MuiReport> {
    evaluate_baseline_with(kind, channels, scenario, DEFAULT_ENERGY_FRACTION)
}

pub fn evaluate_baseline_with(
    kind: BaselineKind,
    channels: &ChannelSet,
    scenario: &Scenario,
    energy_fraction: f64,
) -> Result<MuiReport> {
    let (precoders, degenerate) = baseline_precoders(kind, channels, scenario, energy_fraction)?;
    let mut report = jrc_mui(
        &channels.h_c,
        &channels.h_r,
        &precoders,
        scenario.noise_power(),
        scenario.rho,
        kind.counts_interference(),
    )?;
    report.degenerate = degenerate;
    Ok(report)
}
