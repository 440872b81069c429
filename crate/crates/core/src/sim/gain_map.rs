use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::antenna::{boresight_attitude, effective_gain, ElementSpec};
use crate::geometry::{theta_hat, unit_direction, ArrayGeometry};
use crate::units::to_db;

/// Effective gain in dB, rows indexed by elevation and columns by azimuth.
#[derive(Debug, Clone, PartialEq)]
pub struct GainMap {
    pub elevations: Vec<f64>,
    pub azimuths: Vec<f64>,
    pub gain_db: DMatrix<f64>,
}

impl GainMap {
    pub fn min_db(&self) -> f64 {
        self.gain_db.min()
    }

    pub fn max_db(&self) -> f64 {
        self.gain_db.max()
    }
}

/// Evaluates `Σ_l χ_kl` over an angle grid. At each point the drone antenna
/// faces the GS with its first arm along `θ̂`.
pub fn effective_gain_map(array: &ArrayGeometry, element: ElementSpec, drone_antenna: ElementSpec, elevations: &[f64], azimuths: &[f64]) -> GainMap {
    let rows: Vec<Vec<f64>> = elevations
        .par_iter()
        .map(|&theta| {
            azimuths
                .iter()
                .map(|&phi| {
                    let direction = unit_direction(theta, phi);
                    let attitude = boresight_attitude(&direction, &theta_hat(theta, phi));
                    to_db(effective_gain(array, element, &direction, &drone_antenna.oriented(attitude)))
                })
                .collect()
        })
        .collect();
    GainMap {
        elevations: elevations.to_vec(),
        azimuths: azimuths.to_vec(),
        gain_db: DMatrix::from_fn(elevations.len(), azimuths.len(), |i, j| rows[i][j]),
    }
}
