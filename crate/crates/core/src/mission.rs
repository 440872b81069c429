//! Camera-driven mission planning: survey geometry, image and video data
//! rates, swarm sizing, TDD frame split and an additive latency budget.

use crate::error::{ensure_positive, Error, Result};

/// Codec latency assumed when a stage is marked as a codec without a measurement.
pub const CODEC_LATENCY_S: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraSpec {
    pub r_px: u32,
    /// Pixels along the flight direction.
    pub r_py: u32,
    pub pixel_size_m: f64,
    pub focal_length_m: f64,
    /// Diagonal angle of view in radians.
    pub aov_rad: f64,
    pub bits_per_pixel: f64,
    pub compression_ratio: f64,
    pub fps: f64,
}

impl CameraSpec {
    pub fn validate(&self) -> Result<()> {
        if self.r_px == 0 || self.r_py == 0 {
            return Err(Error::invalid("resolution", "pixel counts must be positive"));
        }
        for (name, v) in [
            ("pixel_size_m", self.pixel_size_m),
            ("focal_length_m", self.focal_length_m),
            ("aov_rad", self.aov_rad),
            ("fps", self.fps),
        ] {
            ensure_positive(name, v)?;
        }
        if !(self.bits_per_pixel >= 0.0 && self.bits_per_pixel.is_finite()) {
            return Err(Error::invalid("bits_per_pixel", format!("{} must be non-negative", self.bits_per_pixel)));
        }
        if !(self.compression_ratio >= 1.0 && self.compression_ratio.is_finite()) {
            return Err(Error::invalid("compression_ratio", format!("{} must be at least 1", self.compression_ratio)));
        }
        Ok(())
    }

    pub fn pixels(&self) -> f64 {
        self.r_px as f64 * self.r_py as f64
    }

    /// Diagonal angle of view implied by the sensor size and focal length.
    pub fn sensor_diagonal_aov(&self) -> f64 {
        let diag = self.pixel_size_m * (self.r_px as f64).hypot(self.r_py as f64);
        2.0 * (diag / (2.0 * self.focal_length_m)).atan()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MissionSpec {
    pub area_m2: f64,
    pub gsd_m: f64,
    pub speed_mps: f64,
    /// Front overlap `OL_y` in `[0, 1)`.
    pub front_overlap: f64,
    /// Side overlap `OL_x` in `[0, 1)`.
    pub side_overlap: f64,
    pub deadline_s: f64,
}

impl MissionSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("area_m2", self.area_m2),
            ("gsd_m", self.gsd_m),
            ("speed_mps", self.speed_mps),
            ("deadline_s", self.deadline_s),
        ] {
            ensure_positive(name, v)?;
        }
        check_overlap("front_overlap", self.front_overlap)?;
        check_overlap("side_overlap", self.side_overlap)
    }
}

fn check_overlap(name: &'static str, v: f64) -> Result<()> {
    if (0.0..1.0).contains(&v) {
        Ok(())
    } else {
        Err(Error::invalid(name, format!("{v} not in [0, 1)")))
    }
}

/// `H = GSD·FL/PS`.
pub fn altitude_for_gsd(gsd_m: f64, focal_length_m: f64, pixel_size_m: f64) -> Result<f64> {
    ensure_positive("gsd_m", gsd_m)?;
    ensure_positive("focal_length_m", focal_length_m)?;
    ensure_positive("pixel_size_m", pixel_size_m)?;
    Ok(gsd_m * focal_length_m / pixel_size_m)
}

/// Diagonal ground footprint `GSD·sqrt(r_px² + r_py²)`.
pub fn fov_from_gsd(gsd_m: f64, r_px: f64, r_py: f64) -> Result<f64> {
    ensure_positive("gsd_m", gsd_m)?;
    if !(r_px >= 0.0 && r_py >= 0.0) {
        return Err(Error::invalid("resolution", "pixel counts must be non-negative"));
    }
    Ok(gsd_m * r_px.hypot(r_py))
}

/// Diagonal ground footprint `2H·tan(AOV/2)`.
pub fn fov_from_altitude(altitude_m: f64, aov_rad: f64) -> Result<f64> {
    ensure_positive("altitude_m", altitude_m)?;
    ensure_positive("aov_rad", aov_rad)?;
    Ok(2.0 * altitude_m * (aov_rad / 2.0).tan())
}

/// `r_px·r_py·GSD²`.
pub fn image_area(gsd_m: f64, r_px: f64, r_py: f64) -> Result<f64> {
    ensure_positive("gsd_m", gsd_m)?;
    Ok(r_px * r_py * gsd_m * gsd_m)
}

/// Compressed bits per image, `r_px·r_py·b/CR`.
pub fn image_bits(camera: &CameraSpec) -> Result<f64> {
    camera.validate()?;
    Ok(camera.pixels() * camera.bits_per_pixel / camera.compression_ratio)
}

/// Seconds between captures, `r_py·GSD·(1−OL_y)/v`.
pub fn capture_interval(gsd_m: f64, r_py: f64, front_overlap: f64, speed_mps: f64) -> Result<f64> {
    ensure_positive("gsd_m", gsd_m)?;
    ensure_positive("speed_mps", speed_mps)?;
    check_overlap("front_overlap", front_overlap)?;
    Ok(r_py * gsd_m * (1.0 - front_overlap) / speed_mps)
}

/// Survey data rate `r_px·b·v/(GSD·CR·(1−OL_y))`, side overlap ignored.
pub fn image_rate(camera: &CameraSpec, gsd_m: f64, front_overlap: f64, speed_mps: f64) -> Result<f64> {
    camera.validate()?;
    ensure_positive("gsd_m", gsd_m)?;
    ensure_positive("speed_mps", speed_mps)?;
    check_overlap("front_overlap", front_overlap)?;
    Ok(camera.r_px as f64 * camera.bits_per_pixel * speed_mps / (gsd_m * camera.compression_ratio * (1.0 - front_overlap)))
}

/// Streaming rate `r_px·r_py·b·FPS/CR`.
pub fn video_rate(camera: &CameraSpec) -> Result<f64> {
    camera.validate()?;
    Ok(camera.pixels() * camera.bits_per_pixel * camera.fps / camera.compression_ratio)
}

/// Which sensor edge lies across the flight track.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SwathEdge {
    /// `r_px` across-track, `r_py` along-track (the capture-interval convention).
    #[default]
    Px,
    Py,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SwarmPlan {
    pub swath_m: f64,
    pub single_drone_time_s: f64,
    pub drones: u64,
}

/// Drones needed to cover the mission area before the deadline.
pub fn swarm_size(mission: &MissionSpec, camera: &CameraSpec, edge: SwathEdge) -> Result<SwarmPlan> {
    mission.validate()?;
    camera.validate()?;
    let pixels = match edge {
        SwathEdge::Px => camera.r_px,
        SwathEdge::Py => camera.r_py,
    } as f64;
    let swath_m = pixels * mission.gsd_m * (1.0 - mission.side_overlap);
    let single_drone_time_s = mission.area_m2 / (swath_m * mission.speed_mps);
    let drones = ((single_drone_time_s / mission.deadline_s).ceil() as u64).max(1);
    Ok(SwarmPlan {
        swath_m,
        single_drone_time_s,
        drones,
    })
}

/// How the coherence interval is split beyond the mandatory pilots.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameFractions {
    /// Target share of `τ` for uplink data.
    pub ul_data: f64,
    /// Share of `τ` for control symbols.
    pub ctrl: f64,
    /// Downlink pilot symbols, at least 1.
    pub dl_pilots: u64,
}

impl Default for FrameFractions {
    fn default() -> Self {
        Self {
            ul_data: 0.9,
            ctrl: 0.0,
            dl_pilots: 1,
        }
    }
}

/// Symbol allocation of one TDD coherence interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TddFrame {
    pub tau: u64,
    pub ctrl: u64,
    pub ul_pilots: u64,
    pub ul_data: u64,
    pub dl_pilots: u64,
    pub dl_data: u64,
}

impl TddFrame {
    /// Downlink symbols, pilots included.
    pub fn downlink(&self) -> u64 {
        self.dl_pilots + self.dl_data
    }

    pub fn total(&self) -> u64 {
        self.ctrl + self.ul_pilots + self.ul_data + self.dl_pilots + self.dl_data
    }

    /// Share of the interval carrying uplink data.
    pub fn uplink_data_share(&self) -> f64 {
        self.ul_data as f64 / self.tau as f64
    }
}

/// Splits `τ` into `K` uplink pilots, downlink pilots, control, uplink data
/// (`⌊f_ul·τ⌋`, capped by what remains) and downlink data (the rest).
pub fn frame_budget(tau: u64, drones: usize, fractions: &FrameFractions) -> Result<TddFrame> {
    for (name, v) in [("ul_data", fractions.ul_data), ("ctrl", fractions.ctrl)] {
        if !(0.0..=1.0).contains(&v) {
            return Err(Error::invalid(name, format!("{v} not in [0, 1]")));
        }
    }
    if drones == 0 {
        return Err(Error::invalid("drones", "must be at least 1"));
    }
    if fractions.dl_pilots == 0 {
        return Err(Error::invalid("dl_pilots", "at least one downlink pilot is required"));
    }
    let ctrl = (fractions.ctrl * tau as f64).floor() as u64;
    let fixed = ctrl as u128 + drones as u128 + fractions.dl_pilots as u128;
    if fixed >= tau as u128 {
        return Err(Error::InfeasibleFrame {
            tau,
            reason: format!("{fixed} pilot and control symbols leave no room for uplink data"),
        });
    }
    let room = tau - fixed as u64;
    let ul_data = ((fractions.ul_data * tau as f64).floor() as u64).min(room);
    if ul_data == 0 {
        return Err(Error::InfeasibleFrame {
            tau,
            reason: "uplink data share rounds to zero symbols".into(),
        });
    }
    Ok(TddFrame {
        tau,
        ctrl,
        ul_pilots: drones as u64,
        ul_data,
        dl_pilots: fractions.dl_pilots,
        dl_data: room - ul_data,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatencyStage {
    pub name: String,
    pub duration_s: f64,
    pub codec: bool,
}

impl LatencyStage {
    pub fn new(name: impl Into<String>, duration_s: f64, codec: bool) -> Self {
        Self {
            name: name.into(),
            duration_s,
            codec,
        }
    }

    pub fn codec(name: impl Into<String>) -> Self {
        Self::new(name, CODEC_LATENCY_S, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatencyReport {
    pub total_s: f64,
    pub codec_s: f64,
    /// The deadline is missed, but would be met without the codec stages.
    pub codec_dominated: bool,
}

pub fn latency_budget(stages: &[LatencyStage], deadline_s: Option<f64>) -> Result<LatencyReport> {
    if let Some(s) = stages.iter().find(|s| !(s.duration_s >= 0.0 && s.duration_s.is_finite())) {
        return Err(Error::invalid("duration_s", format!("stage {:?} has duration {}", s.name, s.duration_s)));
    }
    let total_s: f64 = stages.iter().map(|s| s.duration_s).sum();
    let codec_s: f64 = stages.iter().filter(|s| s.codec).map(|s| s.duration_s).sum();
    let codec_dominated = deadline_s.is_some_and(|d| total_s > d && total_s - codec_s <= d);
    Ok(LatencyReport {
        total_s,
        codec_s,
        codec_dominated,
    })
}
