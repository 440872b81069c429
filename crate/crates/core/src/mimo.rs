//! Maximum-ratio-combining analytics: instantaneous capacity, angular
//! interference, the ergodic-rate lower bound and its inversions, range and
//! frequency scaling.

use std::f64::consts::{LN_2, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::channel::SPEED_OF_LIGHT;
use crate::error::{ensure_positive, Error, Result};

/// Link parameters entering the ergodic-rate lower bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    /// Noise power spectral density `N₀` in W/Hz.
    pub noise_psd: f64,
    /// Uplink data SNR `ρ_u` (linear).
    pub data_snr: f64,
    /// Uplink pilot SNR `ρ_p` (linear).
    pub pilot_snr: f64,
    /// Mean gain/mismatch factor `κ`.
    pub kappa: f64,
    /// Worst-case gain/mismatch factor `χ_wc`.
    pub chi_wc: f64,
    pub speed_mps: f64,
    pub coherence_bw_hz: f64,
    pub drones: usize,
    /// Downlink symbols per frame (pilots and data).
    pub tau_dl: f64,
    /// Control symbols per frame.
    pub tau_ctrl: f64,
}

impl LinkBudget {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("carrier_hz", self.carrier_hz),
            ("bandwidth_hz", self.bandwidth_hz),
            ("noise_psd", self.noise_psd),
            ("data_snr", self.data_snr),
            ("pilot_snr", self.pilot_snr),
            ("kappa", self.kappa),
            ("chi_wc", self.chi_wc),
            ("coherence_bw_hz", self.coherence_bw_hz),
        ] {
            ensure_positive(name, v)?;
        }
        for (name, v) in [("speed_mps", self.speed_mps), ("tau_dl", self.tau_dl), ("tau_ctrl", self.tau_ctrl)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("{v} must be finite and non-negative")));
            }
        }
        if self.drones == 0 {
            return Err(Error::invalid("drones", "must be at least 1"));
        }
        if self.kappa * self.chi_wc >= 1.0 {
            return Err(Error::invalid("kappa", format!("κ·χ_wc = {} must be below 1", self.kappa * self.chi_wc)));
        }
        Ok(())
    }

    /// Fraction of the coherence interval left for uplink data,
    /// `1 − 2 v f_c (K + τ_dl + τ_ctrl)/(B_c c)`. May be non-positive.
    pub fn prelog(&self) -> f64 {
        let overhead = self.drones as f64 + self.tau_dl + self.tau_ctrl;
        1.0 - 2.0 * self.speed_mps * self.carrier_hz * overhead / (self.coherence_bw_hz * SPEED_OF_LIGHT)
    }

    fn checked_prelog(&self) -> Result<f64> {
        self.validate()?;
        let prelog = self.prelog();
        if prelog > 0.0 {
            Ok(prelog)
        } else {
            Err(Error::InfeasibleOverhead { prelog })
        }
    }

    /// Channel-estimation penalty `κχ_wc/(ρ_u ρ_p)·(1 + Kρ_u)`.
    fn pilot_term(&self) -> f64 {
        self.kappa * self.chi_wc / (self.data_snr * self.pilot_snr) * (1.0 + self.drones as f64 * self.data_snr)
    }

    /// Effective SINR inside the lower bound for a (possibly fractional) `M`.
    fn sinr(&self, antennas: f64, omega: f64) -> f64 {
        let rho = self.data_snr;
        let k = self.drones as f64;
        antennas * rho / (rho * (k - 1.0) * (1.0 + omega / antennas) + 1.0 + self.pilot_term())
    }
}

/// Per-drone outcome of [`mrc_capacity`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroneCapacity {
    /// Bits/s/Hz.
    pub spectral_efficiency: f64,
    /// Set when the drone's channel column is identically zero.
    pub out_of_coverage: bool,
}

/// Instantaneous MRC uplink spectral efficiency of every drone.
///
/// `powers` are transmit powers normalized by the receiver noise power.
pub fn mrc_capacity(channel: &DMatrix<Complex64>, powers: &[f64]) -> Result<Vec<DroneCapacity>> {
    let k = channel.ncols();
    if k == 0 {
        return Err(Error::invalid("channel", "needs at least one column"));
    }
    if powers.len() != k {
        return Err(Error::invalid("powers", format!("{} entries for {k} drones", powers.len())));
    }
    if powers.iter().any(|&p| !(p >= 0.0 && p.is_finite())) {
        return Err(Error::invalid("powers", "must be finite and non-negative"));
    }
    let gram = channel.ad_mul(channel);
    Ok((0..k)
        .map(|i| {
            let norm2 = gram[(i, i)].re;
            if norm2 <= 0.0 {
                return DroneCapacity {
                    spectral_efficiency: 0.0,
                    out_of_coverage: true,
                };
            }
            let interference: f64 = (0..k).filter(|&j| j != i).map(|j| powers[j] * gram[(i, j)].norm_sqr()).sum();
            let sinr = powers[i] * norm2 * norm2 / (interference + norm2);
            DroneCapacity {
                spectral_efficiency: sinr.ln_1p() / LN_2,
                out_of_coverage: false,
            }
        })
        .collect())
}

/// `sinc(x) = sin(πx)/(πx)`, exactly zero at nonzero integers.
pub fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else if x.fract() == 0.0 {
        0.0
    } else {
        (PI * x).sin() / (PI * x)
    }
}

/// `sinc²(Mx)/sinc²(x)`, the normalized array factor of an M-element ULA.
pub fn array_factor(antennas: usize, x: f64) -> f64 {
    // periodic in x with period 1; reduce to keep the ratio well conditioned
    let r = x - x.round();
    if r == 0.0 {
        return 1.0;
    }
    let m = antennas as f64;
    ((m * PI * r).sin() / (m * (PI * r).sin())).powi(2)
}

/// Normalized interference power between drones `k` and `j` seen by a ULA
/// along x: `sinc²(M(δ/λ)Δ)/sinc²((δ/λ)Δ)` with
/// `Δ = sin θ_k cos φ_k − sin θ_j cos φ_j`.
///
/// This equals `|g_kᴴ g_j|² / (M² β_k β_j χ_k χ_j)`; the `M²` makes it 1 at
/// `Δ = 0`.
pub fn pairwise_interference(antennas: usize, spacing_over_lambda: f64, k: (f64, f64), j: (f64, f64)) -> f64 {
    let delta = k.0.sin() * k.1.cos() - j.0.sin() * j.1.cos();
    array_factor(antennas, spacing_over_lambda * delta)
}

/// Spatial-signature correlation `Ω = Σ_l Σ_{l'≠l} sinc²(2(l−l')δ/λ)`.
pub fn omega(antennas: usize, spacing_over_lambda: f64) -> f64 {
    let m = antennas as f64;
    2.0 * (1..antennas)
        .map(|n| (m - n as f64) * sinc(2.0 * n as f64 * spacing_over_lambda).powi(2))
        .sum::<f64>()
}

/// Lower bound on the per-drone uplink ergodic rate in bits/s.
pub fn ergodic_rate_lb(budget: &LinkBudget, antennas: usize, omega: f64) -> Result<f64> {
    if antennas == 0 {
        return Err(Error::invalid("antennas", "must be at least 1"));
    }
    rate_at(budget, antennas as f64, omega)
}

fn rate_at(budget: &LinkBudget, antennas: f64, omega: f64) -> Result<f64> {
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::invalid("omega", format!("{omega} must be finite and non-negative")));
    }
    let prelog = budget.checked_prelog()?;
    Ok(budget.bandwidth_hz * prelog * budget.sinr(antennas, omega).ln_1p() / LN_2)
}

/// Relative throughput loss `1 − S(v₂)/S(v₁)` from mobility overhead.
pub fn mobility_throughput_loss(budget: &LinkBudget, antennas: usize, omega: f64, v1: f64, v2: f64) -> Result<f64> {
    let at = |v: f64| ergodic_rate_lb(&LinkBudget { speed_mps: v, ..*budget }, antennas, omega);
    Ok(1.0 - at(v2)? / at(v1)?)
}

/// Antenna count meeting a per-drone rate target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaRequirement {
    /// Real-valued root of `S(M) = Q_tar`.
    pub real: f64,
    /// Smallest integer count (at least 1) meeting the target.
    pub count: usize,
}

/// Upper end of the bisection search.
pub const MAX_SEARCH_ANTENNAS: usize = 1 << 20;

/// Closed-form inversion of the lower bound for a fixed `Ω`.
///
/// With `γ = 2^{Q/(prelog·B)} − 1` the condition `SINR(M) = γ` is the
/// quadratic `ρM² − γ(ρ(K−1) + 1 + P)M − γρ(K−1)Ω = 0`; for `Ω = 0` it reduces to
/// `M = γ((K−1) + 1/ρ + P/ρ)`.
pub fn antennas_required(budget: &LinkBudget, target_rate: f64, omega: f64) -> Result<AntennaRequirement> {
    ensure_positive("target_rate", target_rate)?;
    if !(omega >= 0.0 && omega.is_finite()) {
        return Err(Error::invalid("omega", format!("{omega} must be finite and non-negative")));
    }
    let prelog = budget.checked_prelog()?;
    let gamma = (target_rate / (prelog * budget.bandwidth_hz)).exp2() - 1.0;
    let rho = budget.data_snr;
    let km1 = budget.drones as f64 - 1.0;
    let b = gamma * (rho * km1 + 1.0 + budget.pilot_term());
    let c = gamma * rho * km1 * omega;
    let real = (b + (b * b + 4.0 * rho * c).sqrt()) / (2.0 * rho);
    if !real.is_finite() || real > MAX_SEARCH_ANTENNAS as f64 {
        return Err(Error::invalid("target_rate", format!("needs {real:e} antennas")));
    }
    let mut count = (real.ceil() as usize).max(1);
    // absorb rounding in the root so the round trip always meets the target
    while rate_at(budget, count as f64, omega)? < target_rate {
        count += 1;
    }
    Ok(AntennaRequirement { real, count })
}

/// Smallest `M` in `[1, 2^20]` with `rate(M) ≥ target_rate`, for any rate
/// model non-decreasing in `M`.
pub fn antennas_required_bisect(target_rate: f64, mut rate: impl FnMut(usize) -> Result<f64>) -> Result<usize> {
    ensure_positive("target_rate", target_rate)?;
    if rate(MAX_SEARCH_ANTENNAS)? < target_rate {
        return Err(Error::invalid("target_rate", format!("not reachable with {MAX_SEARCH_ANTENNAS} antennas")));
    }
    let (mut lo, mut hi) = (1usize, MAX_SEARCH_ANTENNAS);
    if rate(lo)? >= target_rate {
        return Ok(lo);
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if rate(mid)? >= target_rate {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Antenna count for a ULA of fixed spacing, where `Ω` grows with `M`.
pub fn antennas_required_for_spacing(budget: &LinkBudget, target_rate: f64, spacing_over_lambda: f64) -> Result<usize> {
    ensure_positive("spacing_over_lambda", spacing_over_lambda)?;
    budget.checked_prelog()?;
    antennas_required_bisect(target_rate, |m| ergodic_rate_lb(budget, m, omega(m, spacing_over_lambda)))
}

/// Range at which free-space loss leaves exactly `ρ_u`:
/// `R = c/(4π f_c)·sqrt(P/(N₀ B ρ_u))`.
pub fn coverage_range(power_w: f64, carrier_hz: f64, bandwidth_hz: f64, snr: f64, noise_psd: f64) -> Result<f64> {
    for (name, v) in [
        ("power_w", power_w),
        ("carrier_hz", carrier_hz),
        ("bandwidth_hz", bandwidth_hz),
        ("snr", snr),
        ("noise_psd", noise_psd),
    ] {
        ensure_positive(name, v)?;
    }
    Ok(SPEED_OF_LIGHT / (4.0 * PI * carrier_hz) * (power_w / (noise_psd * bandwidth_hz * snr)).sqrt())
}

/// Power at `f₂` giving the same range as `P₁` at `f₁`: `P₁ (f₂/f₁)²`.
pub fn power_frequency_scaling(p1: f64, f1: f64, f2: f64) -> Result<f64> {
    for (name, v) in [("p1", p1), ("f1", f1), ("f2", f2)] {
        ensure_positive(name, v)?;
    }
    Ok(p1 * (f2 / f1).powi(2))
}

/// Range extension from coherent combining over `M` antennas.
pub fn beamforming_range_gain(antennas: usize) -> Result<f64> {
    if antennas == 0 {
        return Err(Error::invalid("antennas", "must be at least 1"));
    }
    Ok((antennas as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{los_channel, PhaseModel};
    use crate::geometry::{ArrayGeometry, DroneState, Spherical};
    use crate::units::noise_psd_from_dbm_per_hz;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::TAU;

    fn budget() -> LinkBudget {
        LinkBudget {
            carrier_hz: 2.4e9,
            bandwidth_hz: 20e6,
            noise_psd: noise_psd_from_dbm_per_hz(-167.0),
            data_snr: 1.0,
            pilot_snr: 1.0,
            kappa: 1.0,
            chi_wc: 0.1,
            speed_mps: 20.0,
            coherence_bw_hz: 3e6,
            drones: 23,
            tau_dl: 1.0,
            tau_ctrl: 0.0,
        }
    }

    /// Literal per-drone transcription with explicit loops.
    #[allow(clippy::needless_range_loop)]
    fn mrc_oracle(g: &DMatrix<Complex64>, p: &[f64]) -> Vec<f64> {
        let (m, k) = g.shape();
        let inner = |a: usize, b: usize| (0..m).map(|l| g[(l, a)].conj() * g[(l, b)]).sum::<Complex64>();
        (0..k)
            .map(|i| {
                let n2: f64 = (0..m).map(|l| g[(l, i)].norm_sqr()).sum();
                let mut den = n2;
                for j in 0..k {
                    if j != i {
                        den += p[j] * inner(i, j).norm_sqr();
                    }
                }
                (1.0 + p[i] * n2 * n2 / den).log2()
            })
            .collect()
    }

    #[test]
    fn capacity_trivial_cases() {
        let g = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        let s = mrc_capacity(&g, &[1.0]).unwrap();
        assert_relative_eq!(s[0].spectral_efficiency, 1.0, epsilon = 1e-15);

        let g = DMatrix::from_row_slice(2, 2, &[Complex64::new(2.0, 0.0), Complex64::default(), Complex64::default(), Complex64::new(0.0, 3.0)]);
        let s = mrc_capacity(&g, &[0.5, 2.0]).unwrap();
        assert_relative_eq!(s[0].spectral_efficiency, (1.0f64 + 0.5 * 4.0).log2(), max_relative = 1e-15);
        assert_relative_eq!(s[1].spectral_efficiency, (1.0f64 + 2.0 * 9.0).log2(), max_relative = 1e-15);
    }

    #[test]
    fn capacity_flags_zero_column() {
        let mut g = DMatrix::from_element(3, 2, Complex64::new(1.0, 1.0));
        g.column_mut(1).fill(Complex64::default());
        let s = mrc_capacity(&g, &[1.0, 1.0]).unwrap();
        assert!(s[1].out_of_coverage && s[1].spectral_efficiency == 0.0);
        assert!(!s[0].out_of_coverage);
        assert!(mrc_capacity(&g, &[1.0]).is_err());
    }

    #[test]
    fn capacity_matches_oracle_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let g = DMatrix::from_fn(8, 3, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
        let p = [0.3, 1.7, 4.0];
        let got = mrc_capacity(&g, &p).unwrap();
        for (a, b) in got.iter().zip(mrc_oracle(&g, &p)) {
            assert!((a.spectral_efficiency - b).abs() <= 1e-12 * b.max(1.0));
        }
    }

    #[test]
    fn interference_examples() {
        assert_eq!(pairwise_interference(100, 0.5, (1.0, 2.0), (1.0, 2.0)), 1.0);
        // (δ/λ)Δ = 1/M puts the second drone on the first null
        let m = 100;
        let null = array_factor(m, 1.0 / m as f64);
        assert!(null < 1e-28, "{null}");
        // first nulls in Δ at 2.4 GHz (δ = λ/2) and 60 GHz (δ = 12.5λ), same aperture
        let null_24 = 1.0 / (m as f64 * 0.5);
        let null_60 = 1.0 / (m as f64 * 12.5);
        assert_relative_eq!(null_24, 0.02, max_relative = 1e-15);
        assert_relative_eq!(null_60, 8e-4, max_relative = 1e-15);
        assert_relative_eq!(null_24 / null_60, 25.0, max_relative = 1e-12);
        assert!(array_factor(m, 0.5 * null_24) < 1e-28);
        assert!(array_factor(m, 12.5 * null_60) < 1e-28);
    }

    #[test]
    fn omega_examples() {
        for m in [2, 10, 100] {
            for s in [0.5, 1.0, 1.5] {
                assert!(omega(m, s).abs() < 1e-12);
            }
        }
        assert_eq!(omega(1, 0.3), 0.0);
        assert_relative_eq!(omega(2, 0.25), 8.0 / (PI * PI), epsilon = 1e-12);
    }

    #[test]
    fn omega_matches_double_sum_either_direction() {
        for (m, s) in [(7, 0.3), (16, 0.17), (40, 1.25)] {
            let term = |l: usize, lp: usize| sinc(2.0 * (l as f64 - lp as f64) * s).powi(2);
            let fwd: f64 = (0..m).flat_map(|l| (0..m).filter(move |&lp| lp != l).map(move |lp| (l, lp))).map(|(l, lp)| term(l, lp)).sum();
            let rev: f64 = (0..m)
                .flat_map(|l| (0..m).filter(move |&lp| lp != l).map(move |lp| (m - 1 - l, m - 1 - lp)))
                .map(|(l, lp)| term(l, lp))
                .sum();
            assert_relative_eq!(omega(m, s), fwd, max_relative = 1e-12);
            assert_relative_eq!(fwd, rev, max_relative = 1e-12);
        }
    }

    #[test]
    fn rate_limits() {
        let mut b = budget();
        let mut last = 0.0;
        for m in [1, 10, 100, 1000, 10_000, 100_000] {
            let s = ergodic_rate_lb(&b, m, 0.0).unwrap();
            assert!(s > last);
            last = s;
        }
        b.speed_mps = 0.0;
        assert_eq!(b.prelog(), 1.0);
        b.speed_mps = 1e6;
        assert!(matches!(ergodic_rate_lb(&b, 10, 0.0), Err(Error::InfeasibleOverhead { .. })));
    }

    #[test]
    fn rate_is_monotone_on_grids() {
        for m in [8usize, 64, 256] {
            for k in 1..60usize {
                let lo = LinkBudget { drones: k, ..budget() };
                let hi = LinkBudget { drones: k + 1, ..budget() };
                assert!(ergodic_rate_lb(&hi, m, 3.0).unwrap() <= ergodic_rate_lb(&lo, m, 3.0).unwrap());
                assert!(ergodic_rate_lb(&lo, m + 1, 3.0).unwrap() >= ergodic_rate_lb(&lo, m, 3.0).unwrap());
            }
        }
    }

    #[test]
    fn kappa_chi_must_stay_below_one() {
        let b = LinkBudget { kappa: 10.0, chi_wc: 0.1, ..budget() };
        assert!(ergodic_rate_lb(&b, 10, 0.0).is_err());
    }

    #[test]
    fn mobility_loss_examples() {
        let b = LinkBudget { drones: 100, speed_mps: 0.0, ..budget() };
        assert_eq!(mobility_throughput_loss(&b, 100, 0.0, 10.0, 10.0).unwrap(), 0.0);
        let loss = mobility_throughput_loss(&b, 100, 0.0, 0.0, 30.0).unwrap();
        assert!(loss > 0.0 && loss < 0.02, "{loss}");
        let mut last = -1.0;
        for v in [0.0, 5.0, 10.0, 20.0, 30.0, 60.0] {
            let l = mobility_throughput_loss(&b, 100, 0.0, 0.0, v).unwrap();
            assert!(l >= last);
            last = l;
        }
    }

    #[test]
    fn antennas_required_closed_form() {
        let b = budget();
        let q = 1.39e9 / 23.0;
        let req = antennas_required(&b, q, 0.0).unwrap();
        let gamma = (q / (b.prelog() * b.bandwidth_hz)).exp2() - 1.0;
        let pilot = 0.1 / 1.0 * (1.0 + 23.0);
        assert_relative_eq!(req.real, gamma * (22.0 + 1.0 + pilot), max_relative = 1e-12);
        assert!(ergodic_rate_lb(&b, req.count, 0.0).unwrap() >= q);
        assert!(ergodic_rate_lb(&b, req.count - 1, 0.0).unwrap() < q);
        assert_eq!(antennas_required(&b, 1e-9, 0.0).unwrap().count, 1);
        assert!(antennas_required(&b, 1e-9, 0.0).unwrap().real < 1e-6);
    }

    #[test]
    fn quadratic_root_agrees_with_bisection() {
        let b = budget();
        for omega_val in [0.0, 0.8, 25.0] {
            let q = 50e6;
            let closed = antennas_required(&b, q, omega_val).unwrap().count;
            let bis = antennas_required_bisect(q, |m| ergodic_rate_lb(&b, m, omega_val)).unwrap();
            assert_eq!(closed, bis);
        }
        // half-wave spacing has Ω = 0, so the spacing-aware search agrees too
        assert_eq!(
            antennas_required_for_spacing(&b, 50e6, 0.5).unwrap(),
            antennas_required(&b, 50e6, 0.0).unwrap().count
        );
    }

    #[test]
    fn range_examples() {
        let n0 = noise_psd_from_dbm_per_hz(-167.0);
        let r = coverage_range(0.1, 2.4e9, 20e6, 1.0, n0).unwrap();
        assert!((r / 4980.0 - 1.0).abs() < 0.01, "{r}");
        let r = coverage_range(1.0, 60e9, 300e6, 1.0, n0).unwrap();
        assert!((r / 162.6 - 1.0).abs() < 0.01, "{r}");
        let r = coverage_range(0.1, 5.8e9, 20e6, 1.0, n0).unwrap();
        assert!((r / 2060.0 - 1.0).abs() < 0.01, "{r}");
    }

    #[test]
    fn scaling_examples() {
        assert_eq!(power_frequency_scaling(0.3, 2.4e9, 2.4e9).unwrap(), 0.3);
        assert_relative_eq!(power_frequency_scaling(1.0, 2.4e9, 60e9).unwrap(), 625.0, max_relative = 1e-12);
        assert_relative_eq!(power_frequency_scaling(1.0, 1e9, 2e9).unwrap(), 4.0, max_relative = 1e-15);
        assert_eq!(beamforming_range_gain(1).unwrap(), 1.0);
        assert_eq!(beamforming_range_gain(100).unwrap(), 10.0);
        assert_eq!(beamforming_range_gain(400).unwrap(), 20.0);
        assert!(beamforming_range_gain(0).is_err());
    }

    #[test]
    fn interference_matches_los_columns() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let lambda = 0.125;
        for s in [0.5, 12.5, 0.3] {
            let m = 100;
            let array = ArrayGeometry::linear(m, s * lambda).unwrap();
            let chi = DMatrix::from_element(m, 2, 1.0);
            for _ in 0..50 {
                let mut pose = || (rng.random_range(0.0..PI), rng.random_range(0.0..TAU), rng.random_range(20.0..500.0));
                let (a, b) = (pose(), pose());
                let drones = [
                    DroneState::new(Spherical::new(a.2, a.0, a.1).unwrap()),
                    DroneState::new(Spherical::new(b.2, b.0, b.1).unwrap()),
                ];
                let g = los_channel(&array, &drones, lambda, &chi, PhaseModel::PlaneWave).unwrap();
                let c = g.coefficients();
                let brute = c.column(0).dotc(&c.column(1)).norm_sqr() / (g.betas()[0] * g.betas()[1]);
                let formula = pairwise_interference(m, s, (a.0, a.1), (b.0, b.1)) * (m * m) as f64;
                assert!((brute - formula).abs() < 1e-9 * (m * m) as f64, "{brute} vs {formula}");
            }
        }
    }

    proptest! {
        #[test]
        fn capacity_matches_oracle(seed in any::<u64>(), m in 1usize..=16, k in 1usize..=8) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = DMatrix::from_fn(m, k, |_, _| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5));
            let p: Vec<f64> = (0..k).map(|_| rng.random_range(0.01..10.0)).collect();
            let got = mrc_capacity(&g, &p).unwrap();
            for (a, b) in got.iter().zip(mrc_oracle(&g, &p)) {
                prop_assert!((a.spectral_efficiency - b).abs() <= 1e-12 * b.max(1.0));
            }
        }

        #[test]
        fn interference_bounded(m in 1usize..200, s in 0.01f64..20.0, x in -1.0f64..1.0, y in -1.0f64..1.0) {
            let v = array_factor(m, s * (x - y));
            prop_assert!((0.0..=1.0 + 1e-12).contains(&v));
        }

        #[test]
        fn omega_nonnegative(m in 1usize..120, s in 0.01f64..5.0) {
            prop_assert!(omega(m, s) >= 0.0);
        }

        #[test]
        fn required_antennas_round_trip(q in 1e5f64..3e8, k in 1usize..60, rho_db in -10.0f64..20.0, omega_val in 0.0f64..50.0) {
            let b = LinkBudget { drones: k, data_snr: 10f64.powf(rho_db / 10.0), ..budget() };
            if let Ok(req) = antennas_required(&b, q, omega_val) {
                prop_assert!(ergodic_rate_lb(&b, req.count, omega_val).unwrap() >= q);
                prop_assert!(req.count as f64 >= req.real);
            }
        }

        #[test]
        fn range_frequency_identity(p in 1e-3f64..10.0, f1 in 1e8f64..1e11, f2 in 1e8f64..1e11) {
            let n0 = noise_psd_from_dbm_per_hz(-167.0);
            let r1 = coverage_range(p, f1, 20e6, 1.0, n0).unwrap();
            let r2 = coverage_range(power_frequency_scaling(p, f1, f2).unwrap(), f2, 20e6, 1.0, n0).unwrap();
            prop_assert!((r2 / r1 - 1.0).abs() < 1e-12);
        }
    }
}
