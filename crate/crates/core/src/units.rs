//! Decibel helpers.

/// Smallest value reported by [`to_db`]; exact zeros map here instead of `-inf`.
pub const DB_FLOOR: f64 = -300.0;

pub fn to_db(linear: f64) -> f64 {
    if linear <= 0.0 {
        DB_FLOOR
    } else {
        (10.0 * linear.log10()).max(DB_FLOOR)
    }
}

pub fn from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    from_db(dbm) * 1e-3
}

pub fn watts_to_dbm(watts: f64) -> f64 {
    to_db(watts * 1e3)
}

/// Noise power spectral density in W/Hz from dBm/Hz.
pub fn noise_psd_from_dbm_per_hz(dbm_per_hz: f64) -> f64 {
    dbm_to_watts(dbm_per_hz)
}
