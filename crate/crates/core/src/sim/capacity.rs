use nalgebra::DMatrix;

use super::{run_trials, EmpiricalDistribution};
use crate::channel::{free_space_beta, los_channel, rayleigh_channel, wavelength, PhaseModel};
use crate::error::{Error, Result};
use crate::geometry::{ArrayGeometry, DroneState, ShellSpec};
use crate::mimo::mrc_capacity;

/// Instantaneous-capacity experiment: isotropic elements, ULA along x,
/// drones uniform in a shell, channel inversion to a common SNR.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityConfig {
    pub antennas: usize,
    pub drones: usize,
    pub spacing_over_lambda: f64,
    pub carrier_hz: f64,
    pub shell: ShellSpec,
    /// Target per-antenna SNR (linear).
    pub target_snr: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Per-drone spectral efficiencies pooled over all trials.
#[derive(Debug, Clone, PartialEq)]
pub struct CapacityCdfs {
    pub los: EmpiricalDistribution,
    pub rayleigh: EmpiricalDistribution,
}

pub fn capacity_cdf(config: &CapacityConfig) -> Result<CapacityCdfs> {
    if config.trials == 0 || config.drones == 0 {
        return Err(Error::invalid("trials", "trials and drones must be at least 1"));
    }
    let lambda = wavelength(config.carrier_hz)?;
    let array = ArrayGeometry::linear(config.antennas, config.spacing_over_lambda * lambda)?;
    let chi = DMatrix::from_element(config.antennas, config.drones, 1.0);
    let per_trial = run_trials(config.seed, config.trials, |rng, _| -> Result<(Vec<f64>, Vec<f64>)> {
        let drones: Vec<DroneState> = (0..config.drones).map(|_| DroneState::new(config.shell.sample(rng))).collect();
        let los = los_channel(&array, &drones, lambda, &chi, PhaseModel::PlaneWave)?;
        let rayleigh = rayleigh_channel(rng, config.antennas, los.betas())?;
        // noise-normalized inversion powers: p β χ̄ = ρ with χ̄ = 1
        let powers: Vec<f64> = drones
            .iter()
            .map(|d| free_space_beta(d.distance(), lambda).map(|b| config.target_snr / b))
            .collect::<Result<_>>()?;
        let se = |g| -> Result<Vec<f64>> { Ok(mrc_capacity(g, &powers)?.into_iter().map(|c| c.spectral_efficiency).collect()) };
        Ok((se(los.coefficients())?, se(rayleigh.coefficients())?))
    });
    let mut los = Vec::with_capacity(per_trial.len() * config.drones);
    let mut rayleigh = Vec::with_capacity(per_trial.len() * config.drones);
    for t in per_trial {
        let (a, b) = t?;
        los.extend(a);
        rayleigh.extend(b);
    }
    Ok(CapacityCdfs {
        los: EmpiricalDistribution::from_samples(los)?,
        rayleigh: EmpiricalDistribution::from_samples(rayleigh)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(drones: usize, trials: u64) -> CapacityConfig {
        CapacityConfig {
            antennas: 100,
            drones,
            spacing_over_lambda: 0.5,
            carrier_hz: 2.4e9,
            shell: ShellSpec::new(20.0, 500.0).unwrap(),
            target_snr: 1.0,
            trials,
            seed: 2024,
        }
    }

    #[test]
    fn short_run_is_a_prefix_of_long_run() {
        let one = capacity_cdf(&config(4, 1)).unwrap();
        let many = capacity_cdf(&config(4, 40)).unwrap();
        for x in one.los.samples() {
            assert!(many.los.samples().contains(x));
        }
        for x in one.rayleigh.samples() {
            assert!(many.rayleigh.samples().contains(x));
        }
    }

    #[test]
    fn los_never_beats_single_user_bound() {
        let c = config(6, 200);
        let cdfs = capacity_cdf(&c).unwrap();
        let bound = (1.0 + c.antennas as f64 * c.target_snr).log2();
        assert!(cdfs.los.mean() <= bound + 1e-9);
        assert!(cdfs.los.samples().last().unwrap() <= &(bound + 1e-9));
    }

    #[test]
    fn single_drone_medians_agree() {
        let cdfs = capacity_cdf(&config(1, 2000)).unwrap();
        let (a, b) = (cdfs.los.median(), cdfs.rayleigh.median());
        assert!((a / b - 1.0).abs() < 0.05, "{a} vs {b}");
    }
}
