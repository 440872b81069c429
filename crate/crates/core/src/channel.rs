//! Channel synthesis, free-space path loss, coherence budget and
//! channel-inversion power control.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{ensure_positive, Error, Result};
use crate::geometry::{ArrayGeometry, DroneState};

/// Speed of light used throughout, in m/s.
///
/// The rounded value reproduces the published sample counts exactly
/// (6250 at 2.4 GHz and 30 m/s); 2.998e8 would give 6245.
pub const SPEED_OF_LIGHT: f64 = 3.0e8;

pub fn wavelength(carrier_hz: f64) -> Result<f64> {
    ensure_positive("carrier_hz", carrier_hz)?;
    Ok(SPEED_OF_LIGHT / carrier_hz)
}

/// Free-space path gain `(λ/(4πd))²`.
pub fn free_space_beta(distance: f64, wavelength: f64) -> Result<f64> {
    ensure_positive("distance", distance)?;
    ensure_positive("wavelength", wavelength)?;
    Ok((wavelength / (4.0 * PI * distance)).powi(2))
}

/// How element phases are computed in [`los_channel`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhaseModel {
    /// Far-field plane wave: path length `d_k + p_l·û_k`. For a ULA along x
    /// this is `d_k + (l−1)δ sin θ cos φ`.
    #[default]
    PlaneWave,
    /// Exact element-to-drone distance `‖d_k û_k − p_l‖`.
    Spherical,
}

/// M×K channel with the path gains and per-link factors it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelMatrix {
    coefficients: DMatrix<Complex64>,
    betas: Vec<f64>,
    chi: DMatrix<f64>,
}

impl ChannelMatrix {
    pub fn coefficients(&self) -> &DMatrix<Complex64> {
        &self.coefficients
    }

    pub fn betas(&self) -> &[f64] {
        &self.betas
    }

    /// Per-link gain/mismatch factors, M×K.
    pub fn chi(&self) -> &DMatrix<f64> {
        &self.chi
    }

    pub fn antennas(&self) -> usize {
        self.coefficients.nrows()
    }

    pub fn drones(&self) -> usize {
        self.coefficients.ncols()
    }

    /// Mean of `χ_kl` over the elements for drone `k`.
    pub fn mean_chi(&self, k: usize) -> f64 {
        self.chi.column(k).mean()
    }

    pub fn column_norm_sqr(&self, k: usize) -> f64 {
        self.coefficients.column(k).norm_squared()
    }
}

/// Line-of-sight channel; `chi` is M×K and `β_k` uses the distance to the
/// first element.
pub fn los_channel(
    array: &ArrayGeometry,
    drones: &[DroneState],
    wavelength: f64,
    chi: &DMatrix<f64>,
    phase: PhaseModel,
) -> Result<ChannelMatrix> {
    ensure_positive("wavelength", wavelength)?;
    let (m, k) = (array.len(), drones.len());
    if chi.shape() != (m, k) {
        return Err(Error::invalid("chi", format!("shape {:?}, expected ({m}, {k})", chi.shape())));
    }
    if chi.iter().any(|&c| !(c >= 0.0 && c.is_finite())) {
        return Err(Error::invalid("chi", "entries must be finite and non-negative"));
    }
    let betas = drones
        .iter()
        .map(|d| free_space_beta(d.distance(), wavelength))
        .collect::<Result<Vec<_>>>()?;
    let wavenumber = 2.0 * PI / wavelength;
    let coefficients = DMatrix::from_fn(m, k, |l, j| {
        let drone = &drones[j];
        let p = &array.positions()[l];
        let path = match phase {
            PhaseModel::PlaneWave => drone.distance() + p.dot(&drone.direction()),
            PhaseModel::Spherical => (drone.position.to_cartesian() - p).norm(),
        };
        // reduce before scaling so large distances keep phase precision
        let phase = -wavenumber * (path % wavelength);
        Complex64::from_polar((betas[j] * chi[(l, j)]).sqrt(), phase)
    });
    Ok(ChannelMatrix {
        coefficients,
        betas,
        chi: chi.clone(),
    })
}

/// I.i.d. `CN(0, β_k)` entries, `χ ≡ 1`.
pub fn rayleigh_channel<R: Rng + ?Sized>(rng: &mut R, antennas: usize, betas: &[f64]) -> Result<ChannelMatrix> {
    if antennas == 0 {
        return Err(Error::invalid("antennas", "must be at least 1"));
    }
    for &b in betas {
        ensure_positive("beta", b)?;
    }
    let k = betas.len();
    let mut coefficients = DMatrix::zeros(antennas, k);
    for (j, &beta) in betas.iter().enumerate() {
        let sd = (beta / 2.0).sqrt();
        for l in 0..antennas {
            let re: f64 = StandardNormal.sample(rng);
            let im: f64 = StandardNormal.sample(rng);
            coefficients[(l, j)] = Complex64::new(re * sd, im * sd);
        }
    }
    Ok(ChannelMatrix {
        coefficients,
        betas: betas.to_vec(),
        chi: DMatrix::from_element(antennas, k, 1.0),
    })
}

/// [`rayleigh_channel`] from a fresh generator seeded with `seed`.
pub fn rayleigh_channel_seeded(seed: u64, antennas: usize, betas: &[f64]) -> Result<ChannelMatrix> {
    rayleigh_channel(&mut ChaCha8Rng::seed_from_u64(seed), antennas, betas)
}

/// Coherence time and the number of samples per coherence interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceBudget {
    /// `T_c` in seconds; infinite for a static drone.
    pub coherence_time_s: f64,
    pub coherence_bandwidth_hz: f64,
    /// `τ = ⌊B_c T_c⌋`, saturating at `u64::MAX`.
    pub tau: u64,
}

/// `T_c = c/(2 v f_c)` and `τ = ⌊B_c T_c⌋`.
///
/// `v = 0` gives an unbounded interval; callers that need a finite frame
/// must cap `tau` themselves.
pub fn coherence(speed_mps: f64, carrier_hz: f64, coherence_bw_hz: f64) -> Result<CoherenceBudget> {
    ensure_positive("carrier_hz", carrier_hz)?;
    ensure_positive("coherence_bw_hz", coherence_bw_hz)?;
    if !(speed_mps >= 0.0 && speed_mps.is_finite()) {
        return Err(Error::invalid("speed_mps", format!("{speed_mps} must be finite and non-negative")));
    }
    let coherence_time_s = SPEED_OF_LIGHT / (2.0 * speed_mps * carrier_hz);
    let samples = coherence_bw_hz * coherence_time_s;
    // guard against products like 374.99999999999994 that are exact in decimal
    let tau = (samples * (1.0 + 1e-12)).floor() as u64;
    Ok(CoherenceBudget {
        coherence_time_s,
        coherence_bandwidth_hz: coherence_bw_hz,
        tau,
    })
}

/// Transmit power (W) giving an element-averaged received SNR of `target_snr`:
/// `p = ρ N₀ B / (β χ̄)`.
pub fn inversion_power(beta: f64, mean_chi: f64, target_snr: f64, noise_psd: f64, bandwidth_hz: f64) -> Result<f64> {
    ensure_positive("beta", beta)?;
    ensure_positive("target_snr", target_snr)?;
    ensure_positive("noise_psd", noise_psd)?;
    ensure_positive("bandwidth_hz", bandwidth_hz)?;
    if !(mean_chi >= 0.0 && mean_chi.is_finite()) {
        return Err(Error::invalid("mean_chi", format!("{mean_chi} must be finite and non-negative")));
    }
    if mean_chi == 0.0 {
        return Err(Error::OutOfCoverage);
    }
    Ok(target_snr * noise_psd * bandwidth_hz / (beta * mean_chi))
}
