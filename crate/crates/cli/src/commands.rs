//! Subcommand bodies. Each returns summary lines for stdout and one table.

use dronelink_core::antenna::{Arm, ElementKind, ElementSpec};
use dronelink_core::channel::{coherence, wavelength};
use dronelink_core::mimo::{
    antennas_required, antennas_required_for_spacing, array_factor, beamforming_range_gain, coverage_range, ergodic_rate_lb, omega,
};
use dronelink_core::mission::{
    altitude_for_gsd, capture_interval, fov_from_altitude, fov_from_gsd, frame_budget, image_area, image_bits, image_rate, swarm_size,
    video_rate,
};
use dronelink_core::sim::{
    capacity_cdf, effective_gain_map, gs_array, peak, power_coverage_cdf, range_throughput_curve, sum_throughput_sweep, CapacityConfig,
    GainMap, GsOrientation, PowerCoverageConfig, SweepPoint,
};
use dronelink_core::units::to_db;

use crate::error::CliError;
use crate::output::{Cell, Table};
use crate::scenario::Scenario;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub summary: Vec<String>,
    pub table: Table,
}

/// Figures reproducible by `fig`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Figure {
    Fig3,
    Fig6,
    Fig7,
    Fig8a,
    Fig8b,
    Fig10,
    Fig11,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig3 => "fig3",
            Figure::Fig6 => "fig6",
            Figure::Fig7 => "fig7",
            Figure::Fig8a => "fig8a",
            Figure::Fig8b => "fig8b",
            Figure::Fig10 => "fig10",
            Figure::Fig11 => "fig11",
        }
    }
}

/// Design cases with a bundled scenario each.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Case {
    Disaster,
    Sports,
    Racing,
}

impl Case {
    pub fn scenario(self) -> &'static str {
        match self {
            Case::Disaster => "disaster",
            Case::Sports => "sports",
            Case::Racing => "racing",
        }
    }
}

fn tau_text(tau: u64) -> String {
    if tau == u64::MAX {
        "unbounded".into()
    } else {
        tau.to_string()
    }
}

pub fn coherence_cmd(s: &Scenario, speed_mps: Option<f64>, carrier_hz: Option<f64>, coherence_bw_hz: Option<f64>) -> Result<Report> {
    let v = speed_mps.unwrap_or(s.link.speed_mps);
    let fc = carrier_hz.unwrap_or(s.link.carrier_hz);
    let bc = coherence_bw_hz.unwrap_or(s.link.coherence_bw_hz);
    let cb = coherence(v, fc, bc)?;
    let frame = frame_budget(cb.tau, s.link.drones, &s.fractions())?;
    let summary = vec![
        format!("v = {v} m/s, f_c = {fc:e} Hz, B_c = {bc:e} Hz"),
        format!("T_c = {:e} s, tau = {}", cb.coherence_time_s, tau_text(cb.tau)),
        format!(
            "frame for K = {}: ctrl {}, ul pilots {}, ul data {}, dl pilots {}, dl data {}",
            s.link.drones, frame.ctrl, frame.ul_pilots, frame.ul_data, frame.dl_pilots, frame.dl_data
        ),
    ];
    let table = Table::quantities(
        &s.name,
        vec![
            ("speed", v.into(), "m/s"),
            ("carrier", fc.into(), "Hz"),
            ("coherence_bandwidth", bc.into(), "Hz"),
            ("coherence_time", cb.coherence_time_s.into(), "s"),
            ("tau", cb.tau.into(), "symbols"),
            ("ctrl", frame.ctrl.into(), "symbols"),
            ("ul_pilots", frame.ul_pilots.into(), "symbols"),
            ("ul_data", frame.ul_data.into(), "symbols"),
            ("dl_pilots", frame.dl_pilots.into(), "symbols"),
            ("dl_data", frame.dl_data.into(), "symbols"),
        ],
    );
    Ok(Report { summary, table })
}

pub fn range_cmd(s: &Scenario) -> Result<Report> {
    let l = &s.link;
    let range = coverage_range(l.power_w, l.carrier_hz, l.bandwidth_hz, s.data_snr(), s.noise_psd())?;
    let gain = beamforming_range_gain(l.antennas)?;
    let summary = vec![
        format!("R = {range:.1} m at {} W, {:e} Hz, {:e} Hz, {} dB", l.power_w, l.carrier_hz, l.bandwidth_hz, l.data_snr_db),
        format!("with {} antennas combined coherently: {:.1} m", l.antennas, range * gain),
    ];
    let table = Table::quantities(
        &s.name,
        vec![
            ("range", range.into(), "m"),
            ("beamforming_range_gain", gain.into(), "1"),
            ("beamformed_range", (range * gain).into(), "m"),
        ],
    );
    Ok(Report { summary, table })
}

pub fn rate_cmd(s: &Scenario) -> Result<Report> {
    let budget = s.link_budget()?;
    let om = omega(s.link.antennas, s.link.spacing_wavelengths);
    let per_drone = ergodic_rate_lb(&budget, s.link.antennas, om)?;
    let sum = per_drone * s.link.drones as f64;
    let mut summary = vec![
        format!("M = {}, K = {}, prelog = {:.6}, Omega = {om:.6}", s.link.antennas, s.link.drones, budget.prelog()),
        format!("per-drone rate {:.4e} bit/s, sum {:.4e} bit/s", per_drone, sum),
    ];
    let mut items = vec![
        ("tau", s.coherence()?.tau.into(), "symbols"),
        ("prelog", budget.prelog().into(), "1"),
        ("omega", om.into(), "1"),
        ("per_drone_rate", per_drone.into(), "bit/s"),
        ("sum_rate", sum.into(), "bit/s"),
    ];
    if let Some(target) = s.link.target_sum_rate_bps {
        summary.push(format!("target sum {target:.4e} bit/s: {}", if sum >= target { "met" } else { "not met" }));
        items.push(("target_sum_rate", target.into(), "bit/s"));
    }
    Ok(Report {
        summary,
        table: Table::quantities(&s.name, items),
    })
}

/// Antenna requirement for a per-drone target.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaSizing {
    pub per_drone_target_bps: f64,
    /// Smallest ULA size at the scenario spacing, `Ω` tracking `M`.
    pub count: usize,
    /// Real root of the closed form with `Ω` of the scenario's array.
    pub real: f64,
    pub rate_at_count_bps: f64,
}

pub fn antenna_sizing(s: &Scenario, per_drone_target_bps: Option<f64>) -> Result<AntennaSizing> {
    let target = per_drone_target_bps
        .or_else(|| s.per_drone_target())
        .ok_or_else(|| CliError::Config("no rate target: set link.target_sum_rate_bps or pass --target-bps".into()))?;
    let budget = s.link_budget()?;
    let spacing = s.link.spacing_wavelengths;
    let count = antennas_required_for_spacing(&budget, target, spacing)?;
    let real = antennas_required(&budget, target, omega(s.link.antennas, spacing))?.real;
    Ok(AntennaSizing {
        per_drone_target_bps: target,
        count,
        real,
        rate_at_count_bps: ergodic_rate_lb(&budget, count, omega(count, spacing))?,
    })
}

pub fn antennas_cmd(s: &Scenario, per_drone_target_bps: Option<f64>) -> Result<Report> {
    let a = antenna_sizing(s, per_drone_target_bps)?;
    let summary = vec![
        format!("per-drone target {:.4e} bit/s for K = {}", a.per_drone_target_bps, s.link.drones),
        format!("M = {} (closed form {:.2}), rate at M {:.4e} bit/s", a.count, a.real, a.rate_at_count_bps),
    ];
    let table = Table::quantities(
        &s.name,
        vec![
            ("per_drone_target", a.per_drone_target_bps.into(), "bit/s"),
            ("antennas_required", a.count.into(), "antennas"),
            ("antennas_required_real", a.real.into(), "antennas"),
            ("rate_at_required", a.rate_at_count_bps.into(), "bit/s"),
        ],
    );
    Ok(Report { summary, table })
}

pub fn mission_cmd(s: &Scenario) -> Result<Report> {
    let cam = s.camera();
    let m = s.mission();
    let (rpx, rpy) = (cam.r_px as f64, cam.r_py as f64);
    let altitude = altitude_for_gsd(m.gsd_m, cam.focal_length_m, cam.pixel_size_m)?;
    let fov_gsd = fov_from_gsd(m.gsd_m, rpx, rpy)?;
    let fov_alt = fov_from_altitude(altitude, cam.aov_rad)?;
    let area = image_area(m.gsd_m, rpx, rpy)?;
    let bits = image_bits(&cam)?;
    let interval = capture_interval(m.gsd_m, rpy, m.front_overlap, m.speed_mps)?;
    let img_rate = image_rate(&cam, m.gsd_m, m.front_overlap, m.speed_mps)?;
    let vid_rate = video_rate(&cam)?;
    let plan = swarm_size(&m, &cam, s.swath_edge())?;
    let summary = vec![
        format!("altitude {altitude:.2} m for GSD {} m; image footprint {area:.1} m2", m.gsd_m),
        format!("image rate {img_rate:.4e} bit/s, video rate {vid_rate:.4e} bit/s per drone"),
        format!(
            "single drone needs {:.0} s ({:.2} h); {} drones meet the {} s deadline",
            plan.single_drone_time_s,
            plan.single_drone_time_s / 3600.0,
            plan.drones,
            m.deadline_s
        ),
    ];
    let table = Table::quantities(
        &s.name,
        vec![
            ("altitude", altitude.into(), "m"),
            ("fov_diagonal_from_gsd", fov_gsd.into(), "m"),
            ("fov_from_altitude", fov_alt.into(), "m"),
            ("image_area", area.into(), "m2"),
            ("image_bits", bits.into(), "bit"),
            ("capture_interval", interval.into(), "s"),
            ("image_rate", img_rate.into(), "bit/s"),
            ("video_rate", vid_rate.into(), "bit/s"),
            ("video_sum_rate", (vid_rate * s.link.drones as f64).into(), "bit/s"),
            ("swath", plan.swath_m.into(), "m"),
            ("single_drone_time", plan.single_drone_time_s.into(), "s"),
            ("drones_required", plan.drones.into(), "drones"),
        ],
    );
    Ok(Report { summary, table })
}

/// Design-case summary: antenna count, range and interval length.
pub fn table2_cmd(s: &Scenario) -> Result<Report> {
    let sizing = antenna_sizing(s, None)?;
    let l = &s.link;
    let range = coverage_range(l.power_w, l.carrier_hz, l.bandwidth_hz, s.data_snr(), s.noise_psd())?;
    let cb = s.coherence()?;
    let summary = vec![
        format!("case {}: K = {}, f_c = {:e} Hz, B = {:e} Hz", s.name, l.drones, l.carrier_hz, l.bandwidth_hz),
        format!(
            "M = {} (listed {}), R = {:.2} km, tau = {}",
            sizing.count,
            l.antennas,
            range / 1e3,
            tau_text(cb.tau)
        ),
    ];
    let table = Table::quantities(
        &s.name,
        vec![
            ("drones", l.drones.into(), "drones"),
            ("carrier", l.carrier_hz.into(), "Hz"),
            ("bandwidth", l.bandwidth_hz.into(), "Hz"),
            ("power", l.power_w.into(), "W"),
            ("target_sum_rate", Cell::from(l.target_sum_rate_bps), "bit/s"),
            ("antennas_required", sizing.count.into(), "antennas"),
            ("antennas_required_real", sizing.real.into(), "antennas"),
            ("antennas_listed", l.antennas.into(), "antennas"),
            ("range", range.into(), "m"),
            ("coherence_time", cb.coherence_time_s.into(), "s"),
            ("tau", cb.tau.into(), "symbols"),
        ],
    );
    Ok(Report { summary, table })
}

pub fn figure(s: &Scenario, fig: Figure) -> Result<Report> {
    match fig {
        Figure::Fig3 => fig3(s),
        Figure::Fig6 => fig6(s),
        Figure::Fig7 => fig7(s),
        Figure::Fig8a => fig8a(s),
        Figure::Fig8b => fig8b(s),
        Figure::Fig10 => fig10(s),
        Figure::Fig11 => fig11(s),
    }
}

/// Image-stream rate versus GSD at two front overlaps.
const FIG3_OVERLAPS: [f64; 2] = [0.0, 0.5];

fn fig3(s: &Scenario) -> Result<Report> {
    let cam = s.camera();
    let v = s.mission.speed_mps;
    let mut table = Table::new(&["series", "gsd_m", "altitude_m", "capture_interval_s", "rate_bps"]);
    for ol in FIG3_OVERLAPS {
        let series = format!("overlap={ol}");
        // 1 cm to 10 cm in 0.5 mm steps
        for i in 0..=180 {
            let gsd = 0.01 + i as f64 * 5e-4;
            table.push(vec![
                series.clone().into(),
                gsd.into(),
                altitude_for_gsd(gsd, cam.focal_length_m, cam.pixel_size_m)?.into(),
                capture_interval(gsd, cam.r_py as f64, ol, v)?.into(),
                image_rate(&cam, gsd, ol, v)?.into(),
            ]);
        }
    }
    let at = image_rate(&cam, s.mission.gsd_m, 0.0, v)?;
    Ok(Report {
        summary: vec![format!("rate at GSD {} m without overlap: {at:.4e} bit/s", s.mission.gsd_m)],
        table,
    })
}

pub fn fig6_config(s: &Scenario) -> Result<CapacityConfig> {
    Ok(CapacityConfig {
        antennas: s.link.antennas,
        drones: s.link.drones,
        spacing_over_lambda: s.link.spacing_wavelengths,
        carrier_hz: s.link.carrier_hz,
        shell: s.shell()?,
        target_snr: s.data_snr(),
        trials: s.sim.trials,
        seed: s.sim.seed,
    })
}

fn fig6(s: &Scenario) -> Result<Report> {
    let cdfs = capacity_cdf(&fig6_config(s)?)?;
    let mut table = Table::new(&["series", "spectral_efficiency_bps_per_hz", "cdf"]);
    let mut summary = vec![format!("{} trials, M = {}, K = {}", s.sim.trials, s.link.antennas, s.link.drones)];
    for (name, dist) in [("los", &cdfs.los), ("rayleigh", &cdfs.rayleigh)] {
        for (x, p) in dist.table(&dist.finite_grid(401)) {
            table.push(vec![name.into(), x.into(), p.into()]);
        }
        let deciles: Vec<String> = (1..10).map(|i| format!("{:.3}", dist.quantile(i as f64 / 10.0))).collect();
        summary.push(format!("{name} deciles: {}", deciles.join(" ")));
    }
    Ok(Report { summary, table })
}

/// `(δ/λ)` pairs compared in the interference-lobe figure: half-wavelength
/// spacing at the scenario carrier, and the same aperture at 60 GHz.
pub fn fig7_spacings(s: &Scenario) -> Result<[(String, f64); 2]> {
    let spacing_m = s.spacing_m()?;
    let high = 60e9;
    Ok([
        (format!("fc={:e}", s.link.carrier_hz), s.link.spacing_wavelengths),
        (format!("fc={high:e}"), spacing_m / wavelength(high)?),
    ])
}

fn fig7(s: &Scenario) -> Result<Report> {
    let m = s.link.antennas;
    let mut table = Table::new(&["series", "delta", "interference_linear", "interference_db"]);
    let mut summary = Vec::new();
    for (name, sl) in fig7_spacings(s)? {
        for i in -1000..=1000 {
            let delta = i as f64 * 1e-4;
            let af = array_factor(m, sl * delta);
            table.push(vec![name.clone().into(), delta.into(), af.into(), to_db(af).into()]);
        }
        summary.push(format!("{name}: spacing {sl} wavelengths, first null at delta = {:e}", 1.0 / (m as f64 * sl)));
    }
    Ok(Report { summary, table })
}

/// Sum-throughput sweeps at 0 and 10 dB data SNR.
pub fn fig8a_sweeps(s: &Scenario) -> Result<Vec<(f64, Vec<SweepPoint>)>> {
    let om = omega(s.link.antennas, s.link.spacing_wavelengths);
    [0.0, 10.0]
        .into_iter()
        .map(|snr_db| {
            let points = sum_throughput_sweep(|k| s.link_budget_at(k, snr_db), s.link.antennas, om, 1..=s.sim.max_drones)?;
            Ok((snr_db, points))
        })
        .collect()
}

fn fig8a(s: &Scenario) -> Result<Report> {
    let mut table = Table::new(&["series", "drones", "per_drone_rate_bps", "sum_rate_bps"]);
    let mut summary = Vec::new();
    for (snr_db, points) in fig8a_sweeps(s)? {
        let series = format!("snr_db={snr_db}");
        for p in &points {
            table.push(vec![series.clone().into(), p.drones.into(), p.per_drone.into(), p.sum.into()]);
        }
        match peak(&points) {
            Some(best) => summary.push(format!("{series}: peak {:.4e} bit/s at K = {}", best.sum.unwrap_or(0.0), best.drones)),
            None => summary.push(format!("{series}: no feasible K")),
        }
    }
    Ok(Report { summary, table })
}

fn gs_element(s: &Scenario, kind: ElementKind) -> ElementSpec {
    ElementSpec::new(kind).with_model(s.dipole_model()).with_normalization(s.gain_normalization())
}

/// Identically oriented linear cross-dipoles versus pseudo-randomly oriented
/// circular cross-dipoles.
pub fn fig8b_configs(s: &Scenario) -> Result<Vec<(&'static str, PowerCoverageConfig)>> {
    let spacing = s.spacing_m()?;
    [
        ("identical-linear", ElementKind::CrossDipoleLinear { arm: Arm::X }, GsOrientation::Identical),
        ("pseudo-random-circular", ElementKind::CrossDipoleCircular, GsOrientation::PseudoRandom),
    ]
    .into_iter()
    .map(|(name, kind, policy)| {
        let element = gs_element(s, kind);
        Ok((
            name,
            PowerCoverageConfig {
                array: gs_array(s.link.antennas, spacing, policy, s.sim.seed)?,
                element,
                drone_antenna: s.drone_antenna().spec(element),
                shell: s.shell()?,
                carrier_hz: s.link.carrier_hz,
                bandwidth_hz: s.link.bandwidth_hz,
                noise_psd: s.noise_psd(),
                target_snr: s.data_snr(),
                trials: s.sim.trials,
                seed: s.sim.seed,
            },
        ))
    })
    .collect()
}

fn fig8b(s: &Scenario) -> Result<Report> {
    let mut table = Table::new(&["series", "power_w", "cdf"]);
    let mut summary = Vec::new();
    for (name, cfg) in fig8b_configs(s)? {
        let cov = power_coverage_cdf(&cfg)?;
        // 1 µW to 10 W, 20 points per decade
        for i in 0..=140 {
            let p = 10f64.powf(-6.0 + i as f64 / 20.0);
            table.push(vec![name.into(), p.into(), cov.coverage(p).into()]);
        }
        summary.push(format!("{name}: coverage {:.4} at {} W", cov.coverage(s.sim.power_cap_w), s.sim.power_cap_w));
    }
    Ok(Report { summary, table })
}

/// Effective-gain maps of circular cross-dipole arrays, identical and
/// pseudo-random orientations, seen by a single dipole facing the GS.
pub fn fig10_maps(s: &Scenario) -> Result<Vec<(&'static str, GainMap)>> {
    let spacing = s.spacing_m()?;
    let element = gs_element(s, ElementKind::CrossDipoleCircular);
    let drone = gs_element(s, ElementKind::Dipole);
    // 2° steps: 91 elevations over [0, 180], 181 azimuths over [0, 360]
    let el: Vec<f64> = (0..91).map(|i| (2.0 * i as f64).to_radians()).collect();
    let az: Vec<f64> = (0..181).map(|i| (2.0 * i as f64).to_radians()).collect();
    [("identical", GsOrientation::Identical), ("pseudo-random", GsOrientation::PseudoRandom)]
        .into_iter()
        .map(|(name, policy)| {
            let array = gs_array(s.link.antennas, spacing, policy, s.sim.seed)?;
            Ok((name, effective_gain_map(&array, element, drone, &el, &az)))
        })
        .collect()
}

fn fig10(s: &Scenario) -> Result<Report> {
    let mut table = Table::new(&["series", "elevation_deg", "azimuth_deg", "gain_db"]);
    let mut summary = Vec::new();
    for (name, map) in fig10_maps(s)? {
        for (i, el) in map.elevations.iter().enumerate() {
            for (j, az) in map.azimuths.iter().enumerate() {
                table.push(vec![name.into(), el.to_degrees().into(), az.to_degrees().into(), map.gain_db[(i, j)].into()]);
            }
        }
        summary.push(format!("{name}: gain {:.2} dB to {:.2} dB", map.min_db(), map.max_db()));
    }
    Ok(Report { summary, table })
}

/// Range versus per-drone rate at 2.4 and 60 GHz.
fn fig11(s: &Scenario) -> Result<Report> {
    let rates: Vec<f64> = (1..=100).map(|i| i as f64 * 1e6).collect();
    let carriers = [2.4e9, 60e9];
    let curve = range_throughput_curve(&rates, &carriers, s.link.power_w, s.link.bandwidth_hz, s.noise_psd())?;
    let mut table = Table::new(&["series", "rate_bps", "snr_linear", "range_m"]);
    for p in &curve {
        table.push(vec![format!("fc={:e}", p.carrier_hz).into(), p.rate_bps.into(), p.snr.into(), p.range_m.into()]);
    }
    let summary = carriers
        .iter()
        .map(|&fc| {
            let at = |q: f64| curve.iter().find(|p| p.carrier_hz == fc && p.rate_bps == q).map_or(f64::NAN, |p| p.range_m);
            format!("fc={fc:e}: {:.1} m at 10 Mbit/s, {:.1} m at 40 Mbit/s", at(10e6), at(40e6))
        })
        .collect();
    Ok(Report { summary, table })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::load;

    fn scenario(name: &str) -> Scenario {
        load(Some(name), &[]).unwrap().scenario
    }

    #[test]
    fn coherence_flags_override_scenario() {
        let r = coherence_cmd(&scenario("figures"), Some(30.0), Some(2.4e9), Some(3e6)).unwrap();
        assert!(r.summary[1].contains("tau = 6250"), "{:?}", r.summary);
        let r = coherence_cmd(&scenario("figures"), Some(0.0), None, None).unwrap();
        assert!(r.summary[1].contains("unbounded"));
    }

    #[test]
    fn fig7_spacing_ratio() {
        let [(_, a), (_, b)] = fig7_spacings(&scenario("figures")).unwrap();
        assert!((b / a - 25.0).abs() < 1e-12);
    }

    #[test]
    fn missing_target_is_config_error() {
        let e = antennas_cmd(&scenario("figures"), None).unwrap_err();
        assert_eq!(e.exit_code(), crate::error::EXIT_CONFIG);
        assert!(antennas_cmd(&scenario("figures"), Some(10e6)).is_ok());
    }

    #[test]
    fn quantity_tables_have_units() {
        let r = range_cmd(&scenario("racing")).unwrap();
        assert_eq!(r.table.columns, ["series", "quantity", "value", "unit"]);
        assert!(r.table.rows.iter().all(|row| row.len() == 4));
    }
}
