//! Seeded Monte Carlo engine and the experiments built on it.
//!
//! Trial `i` of a run seeded with `s` always draws from ChaCha8 stream `i` of
//! key `s`, so results do not depend on thread count or scheduling, and a
//! longer run extends a shorter one instead of reshuffling it.

mod analytic;
mod capacity;
mod coverage;
mod distribution;
mod gain_map;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

pub use analytic::{peak, range_throughput_curve, snr_for_rate, sum_throughput_sweep, RangePoint, SweepPoint};
pub use capacity::{capacity_cdf, CapacityCdfs, CapacityConfig};
pub use coverage::{gs_array, power_coverage_cdf, DroneAntenna, GsOrientation, PowerCoverage, PowerCoverageConfig};
pub use distribution::EmpiricalDistribution;
pub use gain_map::{effective_gain_map, GainMap};

/// Stream reserved for per-run configuration draws (never a trial index).
pub const CONFIG_STREAM: u64 = u64::MAX;

/// Generator for trial `trial` of a run seeded with `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Runs `trials` independent trials in parallel, returned in trial order.
pub fn run_trials<T, F>(seed: u64, trials: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng, u64) -> T + Sync,
{
    (0..trials)
        .into_par_iter()
        .map(|i| f(&mut trial_rng(seed, i), i))
        .collect()
}
