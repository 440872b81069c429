//! Scenario files: TOML with one table per concern and units in every key.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use dronelink_core::antenna::{DipoleModel, GainNormalization};
use dronelink_core::channel::{coherence, CoherenceBudget};
use dronelink_core::geometry::ShellSpec;
use dronelink_core::mimo::LinkBudget;
use dronelink_core::mission::{frame_budget, CameraSpec, FrameFractions, MissionSpec, SwathEdge, TddFrame};
use dronelink_core::sim::DroneAntenna;
use dronelink_core::units::{from_db, noise_psd_from_dbm_per_hz};
use dronelink_core::Result as CoreResult;

use crate::error::CliError;

/// Scenarios shipped with the binary, by name.
pub const BUNDLED: &[(&str, &str)] = &[
    ("figures", include_str!("../scenarios/figures.toml")),
    ("disaster", include_str!("../scenarios/disaster.toml")),
    ("disaster-gsd20cm", include_str!("../scenarios/disaster-gsd20cm.toml")),
    ("sports", include_str!("../scenarios/sports.toml")),
    ("sports-text", include_str!("../scenarios/sports-text.toml")),
    ("racing", include_str!("../scenarios/racing.toml")),
];

pub const DEFAULT_SCENARIO: &str = "figures";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub note: String,
    #[serde(default)]
    pub link: LinkSection,
    #[serde(default)]
    pub frame: FrameSection,
    #[serde(default)]
    pub camera: CameraSection,
    #[serde(default)]
    pub mission: MissionSection,
    #[serde(default)]
    pub sim: SimSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LinkSection {
    pub carrier_hz: f64,
    pub bandwidth_hz: f64,
    pub noise_dbm_per_hz: f64,
    pub data_snr_db: f64,
    /// Defaults to the data SNR.
    pub pilot_snr_db: Option<f64>,
    pub kappa: f64,
    pub chi_wc: f64,
    pub speed_mps: f64,
    pub coherence_bw_hz: f64,
    pub drones: usize,
    pub power_w: f64,
    pub antennas: usize,
    pub spacing_wavelengths: f64,
    /// Required uplink sum throughput over all drones.
    pub target_sum_rate_bps: Option<f64>,
}

impl Default for LinkSection {
    fn default() -> Self {
        Self {
            carrier_hz: 2.4e9,
            bandwidth_hz: 20e6,
            noise_dbm_per_hz: -167.0,
            data_snr_db: 0.0,
            pilot_snr_db: None,
            kappa: 1.0,
            chi_wc: 0.1,
            speed_mps: 30.0,
            coherence_bw_hz: 3e6,
            drones: 20,
            power_w: 0.1,
            antennas: 100,
            spacing_wavelengths: 0.5,
            target_sum_rate_bps: None,
        }
    }
}

/// How downlink and control overhead enter the rate bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OverheadModel {
    /// Only the downlink pilots (and control) are overhead; every other symbol carries uplink data.
    #[default]
    Pilots,
    /// The interval is split per `ul_data_fraction`; all downlink symbols count as overhead.
    Split,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FrameSection {
    pub overhead: OverheadModel,
    pub ul_data_fraction: f64,
    pub ctrl_fraction: f64,
    pub dl_pilots: u64,
}

impl Default for FrameSection {
    fn default() -> Self {
        let f = FrameFractions::default();
        Self {
            overhead: OverheadModel::default(),
            ul_data_fraction: f.ul_data,
            ctrl_fraction: f.ctrl,
            dl_pilots: f.dl_pilots,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CameraSection {
    pub r_px: u32,
    pub r_py: u32,
    pub pixel_size_m: f64,
    pub focal_length_m: f64,
    pub aov_deg: f64,
    pub bits_per_pixel: f64,
    pub compression_ratio: f64,
    pub fps: f64,
}

impl Default for CameraSection {
    fn default() -> Self {
        Self {
            r_px: 2664,
            r_py: 1496,
            pixel_size_m: 2.3e-6,
            focal_length_m: 5e-3,
            aov_deg: 60.0,
            bits_per_pixel: 24.0,
            compression_ratio: 2.0,
            fps: 30.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum EdgeName {
    #[default]
    Px,
    Py,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MissionSection {
    pub area_m2: f64,
    pub gsd_m: f64,
    pub speed_mps: f64,
    pub front_overlap: f64,
    pub side_overlap: f64,
    pub deadline_s: f64,
    pub swath_edge: EdgeName,
}

impl Default for MissionSection {
    fn default() -> Self {
        Self {
            area_m2: 16e6,
            gsd_m: 0.02,
            speed_mps: 20.0,
            front_overlap: 0.0,
            side_overlap: 0.0,
            deadline_s: 1200.0,
            swath_edge: EdgeName::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DipoleName {
    #[default]
    HalfWave,
    Hertzian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum NormalizationName {
    #[default]
    Directivity,
    PeakUnity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum DroneAntennaName {
    #[default]
    Dipole,
    Circular,
    Matched,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimSection {
    pub trials: u64,
    pub seed: u64,
    pub shell_inner_m: f64,
    pub shell_outer_m: f64,
    /// Minimum elevation above the horizon; absent for the full shell.
    pub min_elevation_deg: Option<f64>,
    pub max_drones: usize,
    pub power_cap_w: f64,
    pub dipole_model: DipoleName,
    pub gain_normalization: NormalizationName,
    pub drone_antenna: DroneAntennaName,
}

impl Default for SimSection {
    fn default() -> Self {
        Self {
            trials: 10_000,
            seed: 1,
            shell_inner_m: 20.0,
            shell_outer_m: 500.0,
            min_elevation_deg: None,
            max_drones: 200,
            power_cap_w: 0.1,
            dipole_model: DipoleName::default(),
            gain_normalization: NormalizationName::default(),
            drone_antenna: DroneAntennaName::default(),
        }
    }
}

/// A parsed scenario together with the canonical text it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedScenario {
    pub scenario: Scenario,
    /// Effective scenario re-serialized after overrides.
    pub canonical: String,
}

impl LoadedScenario {
    /// Hex SHA-256 of the canonical text.
    pub fn hash(&self) -> String {
        Sha256::digest(self.canonical.as_bytes())
            .iter()
            .fold(String::with_capacity(64), |mut s, b| {
                s.push_str(&format!("{b:02x}"));
                s
            })
    }
}

pub fn bundled(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, text)| *text)
}

/// Loads `source` (an existing path, else a bundled name) and applies
/// `key=value` overrides with dotted keys such as `link.drones=30`.
pub fn load(source: Option<&str>, overrides: &[String]) -> Result<LoadedScenario, CliError> {
    let source = source.unwrap_or(DEFAULT_SCENARIO);
    let text = if Path::new(source).is_file() {
        std::fs::read_to_string(source).map_err(|e| CliError::Config(format!("reading {source}: {e}")))?
    } else {
        bundled(source)
            .ok_or_else(|| CliError::Config(format!("no scenario file or bundled scenario named {source:?}")))?
            .to_owned()
    };
    parse(&text, overrides)
}

pub fn parse(text: &str, overrides: &[String]) -> Result<LoadedScenario, CliError> {
    let mut table: toml::Table = text.parse().map_err(|e| CliError::Config(format!("scenario: {e}")))?;
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    let scenario: Scenario = toml::Value::Table(table)
        .try_into()
        .map_err(|e| CliError::Config(format!("scenario: {e}")))?;
    let canonical = toml::to_string(&scenario).map_err(|e| CliError::Config(format!("serializing scenario: {e}")))?;
    Ok(LoadedScenario { scenario, canonical })
}

fn apply_override(table: &mut toml::Table, spec: &str) -> Result<(), CliError> {
    let (key, raw) = spec
        .split_once('=')
        .ok_or_else(|| CliError::Config(format!("override {spec:?} is not key=value")))?;
    let path: Vec<&str> = key.trim().split('.').collect();
    if path.iter().any(|p| p.is_empty()) {
        return Err(CliError::Config(format!("override key {key:?} is malformed")));
    }
    // TOML literal if it parses as one, else a bare string
    let value = format!("v = {}", raw.trim())
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_owned()));
    let (last, parents) = path.split_last().expect("split yields at least one part");
    let mut node = table;
    for p in parents {
        node = node
            .entry(p.to_string())
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("override {key:?}: {p} is not a table")))?;
    }
    node.insert(last.to_string(), value);
    Ok(())
}

impl Scenario {
    pub fn noise_psd(&self) -> f64 {
        noise_psd_from_dbm_per_hz(self.link.noise_dbm_per_hz)
    }

    pub fn data_snr(&self) -> f64 {
        from_db(self.link.data_snr_db)
    }

    pub fn coherence(&self) -> CoreResult<CoherenceBudget> {
        coherence(self.link.speed_mps, self.link.carrier_hz, self.link.coherence_bw_hz)
    }

    pub fn fractions(&self) -> FrameFractions {
        FrameFractions {
            ul_data: self.frame.ul_data_fraction,
            ctrl: self.frame.ctrl_fraction,
            dl_pilots: self.frame.dl_pilots,
        }
    }

    /// Symbol allocation for `drones` drones.
    pub fn frame(&self, drones: usize) -> CoreResult<TddFrame> {
        frame_budget(self.coherence()?.tau, drones, &self.fractions())
    }

    /// Link budget for `drones` drones at the given data SNR (dB).
    pub fn link_budget_at(&self, drones: usize, data_snr_db: f64) -> CoreResult<LinkBudget> {
        let frame = self.frame(drones)?;
        let tau_dl = match self.frame.overhead {
            OverheadModel::Pilots => frame.dl_pilots,
            OverheadModel::Split => frame.downlink(),
        };
        let pilot_db = self.link.pilot_snr_db.unwrap_or(data_snr_db);
        let budget = LinkBudget {
            carrier_hz: self.link.carrier_hz,
            bandwidth_hz: self.link.bandwidth_hz,
            noise_psd: self.noise_psd(),
            data_snr: from_db(data_snr_db),
            pilot_snr: from_db(pilot_db),
            kappa: self.link.kappa,
            chi_wc: self.link.chi_wc,
            speed_mps: self.link.speed_mps,
            coherence_bw_hz: self.link.coherence_bw_hz,
            drones,
            tau_dl: tau_dl as f64,
            tau_ctrl: frame.ctrl as f64,
        };
        budget.validate()?;
        Ok(budget)
    }

    pub fn link_budget(&self) -> CoreResult<LinkBudget> {
        self.link_budget_at(self.link.drones, self.link.data_snr_db)
    }

    /// Per-drone rate target derived from the sum target.
    pub fn per_drone_target(&self) -> Option<f64> {
        self.link.target_sum_rate_bps.map(|s| s / self.link.drones as f64)
    }

    pub fn camera(&self) -> CameraSpec {
        let c = &self.camera;
        CameraSpec {
            r_px: c.r_px,
            r_py: c.r_py,
            pixel_size_m: c.pixel_size_m,
            focal_length_m: c.focal_length_m,
            aov_rad: c.aov_deg.to_radians(),
            bits_per_pixel: c.bits_per_pixel,
            compression_ratio: c.compression_ratio,
            fps: c.fps,
        }
    }

    pub fn mission(&self) -> MissionSpec {
        let m = &self.mission;
        MissionSpec {
            area_m2: m.area_m2,
            gsd_m: m.gsd_m,
            speed_mps: m.speed_mps,
            front_overlap: m.front_overlap,
            side_overlap: m.side_overlap,
            deadline_s: m.deadline_s,
        }
    }

    pub fn swath_edge(&self) -> SwathEdge {
        match self.mission.swath_edge {
            EdgeName::Px => SwathEdge::Px,
            EdgeName::Py => SwathEdge::Py,
        }
    }

    pub fn shell(&self) -> CoreResult<ShellSpec> {
        let shell = ShellSpec::new(self.sim.shell_inner_m, self.sim.shell_outer_m)?;
        Ok(match self.sim.min_elevation_deg {
            Some(deg) => shell.above_horizon(deg.to_radians())?,
            None => shell,
        })
    }

    pub fn dipole_model(&self) -> DipoleModel {
        match self.sim.dipole_model {
            DipoleName::HalfWave => DipoleModel::HalfWave,
            DipoleName::Hertzian => DipoleModel::Hertzian,
        }
    }

    pub fn gain_normalization(&self) -> GainNormalization {
        match self.sim.gain_normalization {
            NormalizationName::Directivity => GainNormalization::Directivity,
            NormalizationName::PeakUnity => GainNormalization::PeakUnity,
        }
    }

    pub fn drone_antenna(&self) -> DroneAntenna {
        match self.sim.drone_antenna {
            DroneAntennaName::Dipole => DroneAntenna::Dipole,
            DroneAntennaName::Circular => DroneAntenna::Circular,
            DroneAntennaName::Matched => DroneAntenna::Matched,
        }
    }

    /// Element spacing in meters.
    pub fn spacing_m(&self) -> CoreResult<f64> {
        Ok(self.link.spacing_wavelengths * dronelink_core::channel::wavelength(self.link.carrier_hz)?)
    }
}
