use crate::error::{ensure_positive, Error, Result};
use crate::mimo::{coverage_range, ergodic_rate_lb, LinkBudget};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub drones: usize,
    /// Per-drone lower-bound rate (bits/s); `None` when overhead fills the interval.
    pub per_drone: Option<f64>,
    pub sum: Option<f64>,
}

/// `K·S(K)` for each `K`; `budget_for(K)` supplies the link budget, so the
/// frame overhead may depend on `K`. Infeasible overhead yields an empty point.
pub fn sum_throughput_sweep(
    budget_for: impl Fn(usize) -> Result<LinkBudget>,
    antennas: usize,
    omega: f64,
    drones: impl IntoIterator<Item = usize>,
) -> Result<Vec<SweepPoint>> {
    drones
        .into_iter()
        .map(|k| {
            let rate = budget_for(k).and_then(|b| ergodic_rate_lb(&LinkBudget { drones: k, ..b }, antennas, omega));
            match rate {
                Ok(s) => Ok(SweepPoint {
                    drones: k,
                    per_drone: Some(s),
                    sum: Some(s * k as f64),
                }),
                Err(Error::InfeasibleOverhead { .. } | Error::InfeasibleFrame { .. }) => Ok(SweepPoint {
                    drones: k,
                    per_drone: None,
                    sum: None,
                }),
                Err(e) => Err(e),
            }
        })
        .collect()
}

/// Feasible point with the largest sum throughput.
pub fn peak(points: &[SweepPoint]) -> Option<SweepPoint> {
    points
        .iter()
        .filter(|p| p.sum.is_some())
        .copied()
        .max_by(|a, b| a.sum.unwrap().total_cmp(&b.sum.unwrap()))
}

/// SNR at which a full-band Shannon rate equals `rate_bps`: `2^{Q/B} − 1`.
pub fn snr_for_rate(rate_bps: f64, bandwidth_hz: f64) -> Result<f64> {
    ensure_positive("rate_bps", rate_bps)?;
    ensure_positive("bandwidth_hz", bandwidth_hz)?;
    Ok((rate_bps / bandwidth_hz).exp2() - 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangePoint {
    pub carrier_hz: f64,
    pub rate_bps: f64,
    pub snr: f64,
    pub range_m: f64,
}

/// Range versus per-drone rate for each carrier, polarization loss ignored.
pub fn range_throughput_curve(
    rates_bps: &[f64],
    carriers_hz: &[f64],
    power_w: f64,
    bandwidth_hz: f64,
    noise_psd: f64,
) -> Result<Vec<RangePoint>> {
    let mut out = Vec::with_capacity(rates_bps.len() * carriers_hz.len());
    for &carrier_hz in carriers_hz {
        for &rate_bps in rates_bps {
            let snr = snr_for_rate(rate_bps, bandwidth_hz)?;
            out.push(RangePoint {
                carrier_hz,
                rate_bps,
                snr,
                range_m: coverage_range(power_w, carrier_hz, bandwidth_hz, snr, noise_psd)?,
            });
        }
    }
    Ok(out)
}
