//! Ground-station array layouts, drone placement and random sampling.
//!
//! Coordinates are meters in a right-handed frame with the first array
//! element at the origin. Elevation `θ` is the polar angle from the +z axis
//! and azimuth `φ` is measured from +x in the xy-plane.

use std::f64::consts::{PI, TAU};

use nalgebra::{Rotation3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ensure_positive, Error, Result};

pub type Vec3 = Vector3<f64>;

/// Below this `sin θ` the azimuth is pinned to zero.
const POLE_EPS: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spherical {
    pub distance: f64,
    /// Polar angle from +z, in `[0, π]`.
    pub elevation: f64,
    /// Angle from +x in the xy-plane, in `[0, 2π)`.
    pub azimuth: f64,
}

impl Spherical {
    pub fn new(distance: f64, elevation: f64, azimuth: f64) -> Result<Self> {
        ensure_positive("distance", distance)?;
        if !(0.0..=PI).contains(&elevation) {
            return Err(Error::invalid("elevation", format!("{elevation} not in [0, π]")));
        }
        if !(0.0..TAU).contains(&azimuth) {
            return Err(Error::invalid("azimuth", format!("{azimuth} not in [0, 2π)")));
        }
        Ok(Self {
            distance,
            elevation,
            azimuth,
        })
    }

    /// Unit vector from the origin toward this point.
    pub fn direction(&self) -> Vec3 {
        unit_direction(self.elevation, self.azimuth)
    }

    pub fn to_cartesian(&self) -> Vec3 {
        self.direction() * self.distance
    }

    /// Projection of the direction onto the array (x) axis, `sin θ cos φ`.
    pub fn array_axis_cosine(&self) -> f64 {
        self.elevation.sin() * self.azimuth.cos()
    }
}

pub fn unit_direction(elevation: f64, azimuth: f64) -> Vec3 {
    let (st, ct) = elevation.sin_cos();
    let (sp, cp) = azimuth.sin_cos();
    Vec3::new(st * cp, st * sp, ct)
}

/// Local `θ̂` unit vector at the given angles (direction of increasing θ).
pub fn theta_hat(elevation: f64, azimuth: f64) -> Vec3 {
    let (st, ct) = elevation.sin_cos();
    let (sp, cp) = azimuth.sin_cos();
    Vec3::new(ct * cp, ct * sp, -st)
}

/// Local `φ̂` unit vector at the given azimuth.
pub fn phi_hat(azimuth: f64) -> Vec3 {
    let (sp, cp) = azimuth.sin_cos();
    Vec3::new(-sp, cp, 0.0)
}

pub fn to_spherical(position: &Vec3) -> Result<Spherical> {
    let distance = position.norm();
    if distance == 0.0 || !distance.is_finite() {
        return Err(Error::ZeroVector);
    }
    let rho = position.x.hypot(position.y);
    let elevation = rho.atan2(position.z);
    let azimuth = if rho <= POLE_EPS * distance {
        0.0
    } else {
        let a = position.y.atan2(position.x);
        let a = if a < 0.0 { a + TAU } else { a };
        // atan2 can return exactly -0.0 + TAU rounding to TAU
        if a >= TAU {
            0.0
        } else {
            a
        }
    };
    Ok(Spherical {
        distance,
        elevation,
        azimuth,
    })
}

pub fn from_spherical(s: &Spherical) -> Vec3 {
    s.to_cartesian()
}

/// Element `l` (zero-based) at `(l·δ, 0, 0)`.
pub fn ula_positions(count: usize, spacing: f64) -> Result<Vec<Vec3>> {
    if count == 0 {
        return Err(Error::invalid("count", "array needs at least one element"));
    }
    ensure_positive("spacing", spacing)?;
    Ok((0..count)
        .map(|l| Vec3::new(l as f64 * spacing, 0.0, 0.0))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArrayLayout {
    /// Uniform linear array along +x.
    Linear,
    /// Uniform rectangular array in the xy-plane, row-major along x.
    Rectangular { rows: usize, cols: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ArrayGeometry {
    positions: Vec<Vec3>,
    spacing: f64,
    layout: ArrayLayout,
    orientations: Vec<Rotation3<f64>>,
}

impl ArrayGeometry {
    pub fn linear(count: usize, spacing: f64) -> Result<Self> {
        let positions = ula_positions(count, spacing)?;
        Ok(Self {
            orientations: vec![Rotation3::identity(); count],
            positions,
            spacing,
            layout: ArrayLayout::Linear,
        })
    }

    pub fn rectangular(rows: usize, cols: usize, spacing: f64) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::invalid("rows/cols", "array needs at least one element"));
        }
        ensure_positive("spacing", spacing)?;
        let positions = (0..rows)
            .flat_map(|r| (0..cols).map(move |c| Vec3::new(c as f64 * spacing, r as f64 * spacing, 0.0)))
            .collect::<Vec<_>>();
        Ok(Self {
            orientations: vec![Rotation3::identity(); positions.len()],
            positions,
            spacing,
            layout: ArrayLayout::Rectangular { rows, cols },
        })
    }

    /// Replaces the per-element orientations; one rotation per element.
    pub fn with_orientations(mut self, orientations: Vec<Rotation3<f64>>) -> Result<Self> {
        if orientations.len() != self.positions.len() {
            return Err(Error::invalid(
                "orientations",
                format!("{} rotations for {} elements", orientations.len(), self.positions.len()),
            ));
        }
        self.orientations = orientations;
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn orientations(&self) -> &[Rotation3<f64>] {
        &self.orientations
    }

    pub fn spacing(&self) -> f64 {
        self.spacing
    }

    pub fn layout(&self) -> ArrayLayout {
        self.layout
    }

    /// Largest extent along x, `(M−1)·δ` for the linear layout.
    pub fn aperture(&self) -> f64 {
        match self.layout {
            ArrayLayout::Linear => (self.len() - 1) as f64 * self.spacing,
            ArrayLayout::Rectangular { cols, .. } => (cols - 1) as f64 * self.spacing,
        }
    }
}

/// Body attitude as aerospace Z-Y-X Euler angles (radians).
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Orientation {
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
}

impl Orientation {
    /// `R = Rz(yaw)·Ry(pitch)·Rx(roll)`, body to world.
    pub fn rotation(&self) -> Rotation3<f64> {
        Rotation3::from_euler_angles(self.roll, self.pitch, self.yaw)
    }

    /// Roll, pitch and yaw independently uniform over `[0, 2π)`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self {
            roll: rng.random_range(0.0..TAU),
            pitch: rng.random_range(0.0..TAU),
            yaw: rng.random_range(0.0..TAU),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DroneState {
    pub position: Spherical,
    pub orientation: Orientation,
    /// Transmit power in watts.
    pub power_w: f64,
}

impl DroneState {
    pub fn new(position: Spherical) -> Self {
        Self {
            position,
            orientation: Orientation::default(),
            power_w: 0.0,
        }
    }

    pub fn direction(&self) -> Vec3 {
        self.position.direction()
    }

    pub fn distance(&self) -> f64 {
        self.position.distance
    }
}

/// Spherical shell around the first array element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShellSpec {
    inner: f64,
    outer: f64,
    /// Minimum angle above the xy-plane; `None` samples the full shell.
    min_elevation_above_horizon: Option<f64>,
}

impl ShellSpec {
    pub fn new(inner: f64, outer: f64) -> Result<Self> {
        ensure_positive("shell.inner", inner)?;
        ensure_positive("shell.outer", outer)?;
        if inner > outer {
            return Err(Error::invalid("shell", format!("inner radius {inner} > outer radius {outer}")));
        }
        Ok(Self {
            inner,
            outer,
            min_elevation_above_horizon: None,
        })
    }

    /// Restricts sampling to directions at least `angle` radians above the horizon.
    pub fn above_horizon(mut self, angle: f64) -> Result<Self> {
        if !(-PI / 2.0..PI / 2.0).contains(&angle) {
            return Err(Error::invalid("min_elevation", format!("{angle} not in [-π/2, π/2)")));
        }
        self.min_elevation_above_horizon = Some(angle);
        Ok(self)
    }

    pub fn inner(&self) -> f64 {
        self.inner
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    pub fn min_elevation_above_horizon(&self) -> Option<f64> {
        self.min_elevation_above_horizon
    }

    /// Closed-form CDF of the radius under uniform-in-volume sampling.
    pub fn radius_cdf(&self, r: f64) -> f64 {
        let (a3, b3) = (self.inner.powi(3), self.outer.powi(3));
        if r <= self.inner {
            return if a3 == b3 && r >= self.inner { 1.0 } else { 0.0 };
        }
        if r >= self.outer {
            return 1.0;
        }
        (r.powi(3) - a3) / (b3 - a3)
    }

    /// Draws one position uniformly by volume.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Spherical {
        let u: f64 = rng.random();
        let (a3, b3) = (self.inner.powi(3), self.outer.powi(3));
        let distance = (a3 + u * (b3 - a3)).cbrt().clamp(self.inner, self.outer);
        let cos_lo = match self.min_elevation_above_horizon {
            Some(el) => el.sin(),
            None => -1.0,
        };
        let cos_theta: f64 = rng.random_range(cos_lo..=1.0);
        let azimuth = rng.random_range(0.0..TAU);
        Spherical {
            distance,
            elevation: cos_theta.clamp(-1.0, 1.0).acos(),
            azimuth,
        }
    }
}

/// `count` i.i.d. positions uniform by volume over `shell`, reproducible from `seed`.
pub fn sample_shell(seed: u64, count: usize, shell: &ShellSpec) -> Result<Vec<Spherical>> {
    if count == 0 {
        return Err(Error::invalid("count", "need at least one drone"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count).map(|_| shell.sample(&mut rng)).collect())
}
