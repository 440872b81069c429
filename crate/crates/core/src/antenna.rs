//! Element radiation patterns, polarization states and per-link gain factors.
//!
//! Every element has a local frame given by its orientation. Dipole arms lie
//! along local x (and local y for the crossed pair); local z is the boresight
//! of a crossed pair. Far-field polarization is carried as a complex unit
//! 3-vector transverse to the propagation direction, so states of the two link
//! ends compare directly in world coordinates without choosing a basis.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

use nalgebra::{Rotation3, UnitQuaternion, Quaternion, Vector3};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::geometry::{ArrayGeometry, DroneState, Vec3};

/// Peak directivity of a thin half-wave dipole, `2 / ∫₀^π cos²(π/2·cos θ)/sin θ dθ`.
pub const HALF_WAVE_DIRECTIVITY: f64 = 1.640_922_376_984_585_3;
/// Peak directivity of an infinitesimal (Hertzian) dipole.
pub const HERTZIAN_DIRECTIVITY: f64 = 1.5;

/// Below this projected length the direction is treated as on-axis.
const AXIS_EPS: f64 = 1e-12;

pub type CVec3 = Vector3<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DipoleModel {
    #[default]
    HalfWave,
    Hertzian,
}

impl DipoleModel {
    /// Power pattern normalized to 1 at broadside, given `cos ψ` to the dipole axis.
    pub fn normalized_pattern(self, cos_psi: f64) -> f64 {
        let sin2 = (1.0 - cos_psi * cos_psi).max(0.0);
        match self {
            DipoleModel::Hertzian => sin2,
            DipoleModel::HalfWave => {
                if sin2 < AXIS_EPS * AXIS_EPS {
                    0.0
                } else {
                    let c = (FRAC_PI_2 * cos_psi).cos();
                    c * c / sin2
                }
            }
        }
    }

    pub fn directivity(self) -> f64 {
        match self {
            DipoleModel::HalfWave => HALF_WAVE_DIRECTIVITY,
            DipoleModel::Hertzian => HERTZIAN_DIRECTIVITY,
        }
    }
}

/// How the power pattern is scaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GainNormalization {
    /// Gain relative to an isotropic radiator (half-wave peak 1.64).
    #[default]
    Directivity,
    /// Pattern peak scaled to 1, so a link factor never exceeds 1.
    PeakUnity,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementKind {
    Isotropic,
    /// Single dipole along local x.
    Dipole,
    /// Crossed pair along local x and y, only `arm` fed.
    CrossDipoleLinear { arm: Arm },
    /// Crossed pair fed in phase quadrature (x leads y by 90°).
    CrossDipoleCircular,
}

/// Element type and pattern conventions, without an orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ElementSpec {
    pub kind: ElementKind,
    pub model: DipoleModel,
    pub normalization: GainNormalization,
}

impl ElementSpec {
    pub fn new(kind: ElementKind) -> Self {
        Self {
            kind,
            model: DipoleModel::default(),
            normalization: GainNormalization::default(),
        }
    }

    pub fn isotropic() -> Self {
        Self::new(ElementKind::Isotropic)
    }

    pub fn with_model(mut self, model: DipoleModel) -> Self {
        self.model = model;
        self
    }

    pub fn with_normalization(mut self, normalization: GainNormalization) -> Self {
        self.normalization = normalization;
        self
    }

    pub fn oriented(self, orientation: Rotation3<f64>) -> ElementPattern {
        ElementPattern {
            spec: self,
            orientation,
        }
    }

    fn peak(&self) -> f64 {
        match self.normalization {
            GainNormalization::Directivity => self.model.directivity(),
            GainNormalization::PeakUnity => 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementPattern {
    pub spec: ElementSpec,
    /// Local-to-world rotation.
    pub orientation: Rotation3<f64>,
}

/// Unit-norm complex transverse field direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarizationState(CVec3);

impl PolarizationState {
    /// Normalizes `field`; `None` for a zero vector.
    pub fn from_field(field: CVec3) -> Option<Self> {
        let n = field.norm();
        (n > 0.0 && n.is_finite()).then(|| Self(field / Complex64::new(n, 0.0)))
    }

    pub fn linear(direction: Vec3) -> Option<Self> {
        Self::from_field(direction.map(|x| Complex64::new(x, 0.0)))
    }

    /// `(a + i·b)/√2` for orthonormal transverse vectors `a`, `b`.
    pub fn circular(a: Vec3, b: Vec3) -> Option<Self> {
        Self::from_field(a.map(|x| Complex64::new(x, 0.0)) + b.map(|x| Complex64::new(0.0, x)))
    }

    pub fn vector(&self) -> &CVec3 {
        &self.0
    }

    /// Jones vector in the given transverse basis.
    pub fn jones(&self, basis: (&Vec3, &Vec3)) -> [Complex64; 2] {
        let project = |e: &Vec3| self.0.iter().zip(e.iter()).map(|(c, x)| c * x).sum();
        [project(basis.0), project(basis.1)]
    }

    /// Applies a common phase to the state.
    pub fn rotate_phase(&self, phase: f64) -> Self {
        Self(self.0 * Complex64::from_polar(1.0, phase))
    }
}

/// Gain and polarization of an element toward one direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementResponse {
    /// Linear power gain.
    pub gain: f64,
    /// `None` for the isotropic element, which matches any incoming state.
    pub polarization: Option<PolarizationState>,
}

/// Far-field of a dipole with world-frame `axis` toward unit `direction`,
/// scaled so that its squared norm is the normalized power pattern.
fn dipole_field(axis: &Vec3, direction: &Vec3, model: DipoleModel) -> Vec3 {
    let cos_psi = axis.dot(direction);
    let transverse = axis - direction * cos_psi;
    let len = transverse.norm();
    if len < AXIS_EPS {
        return Vec3::zeros();
    }
    transverse * (model.normalized_pattern(cos_psi).sqrt() / len)
}

/// Fixed transverse unit vector used when an element radiates nothing.
fn fallback_polarization(direction: &Vec3) -> PolarizationState {
    let helper = if direction.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let t = helper - direction * helper.dot(direction);
    PolarizationState::linear(t).expect("helper is never parallel to direction")
}

pub fn element_response(pattern: &ElementPattern, direction: &Vec3) -> ElementResponse {
    let spec = &pattern.spec;
    let arm_x = pattern.orientation * Vec3::x();
    let arm_y = pattern.orientation * Vec3::y();
    let real = |v: Vec3| v.map(|x| Complex64::new(x, 0.0));
    let field: CVec3 = match spec.kind {
        ElementKind::Isotropic => {
            return ElementResponse {
                gain: 1.0,
                polarization: None,
            }
        }
        ElementKind::Dipole | ElementKind::CrossDipoleLinear { arm: Arm::X } => {
            real(dipole_field(&arm_x, direction, spec.model))
        }
        ElementKind::CrossDipoleLinear { arm: Arm::Y } => real(dipole_field(&arm_y, direction, spec.model)),
        ElementKind::CrossDipoleCircular => {
            let ex = dipole_field(&arm_x, direction, spec.model);
            let ey = dipole_field(&arm_y, direction, spec.model);
            // power splits evenly between the arms
            (real(ex) + ey.map(|y| Complex64::new(0.0, y))) * Complex64::new(FRAC_1_SQRT_2, 0.0)
        }
    };
    let power = field.norm_squared();
    ElementResponse {
        gain: spec.peak() * power,
        polarization: Some(PolarizationState::from_field(field).unwrap_or_else(|| fallback_polarization(direction))),
    }
}

/// Polarization loss factor `|⟨tx, conj(rx)⟩|²` between the transmit state
/// toward the receiver and the receive antenna's own state toward the transmitter.
///
/// Both states must be expressed in the same (world) frame; this is not checked.
pub fn mismatch_factor(tx: &PolarizationState, rx: &PolarizationState) -> f64 {
    tx.0.dot(&rx.0).norm_sqr().min(1.0)
}

/// Combined gain and polarization factor of one GS element and one drone antenna.
///
/// `direction` points from the GS element toward the drone.
pub fn link_chi(gs: &ElementPattern, drone: &ElementPattern, direction: &Vec3) -> f64 {
    combine(&element_response(gs, direction), &element_response(drone, &-direction))
}

fn combine(at_gs: &ElementResponse, at_drone: &ElementResponse) -> f64 {
    let pol = match (&at_gs.polarization, &at_drone.polarization) {
        (Some(a), Some(b)) => mismatch_factor(a, b),
        _ => 1.0,
    };
    at_gs.gain * at_drone.gain * pol
}

/// Per-element `χ_kl` toward a drone antenna; far-field, so `direction`
/// (GS toward drone) is shared by all elements.
pub fn element_chis(array: &ArrayGeometry, element: ElementSpec, direction: &Vec3, drone_antenna: &ElementPattern) -> Vec<f64> {
    let at_drone = element_response(drone_antenna, &-direction);
    array
        .orientations()
        .iter()
        .map(|r| combine(&element_response(&element.oriented(*r), direction), &at_drone))
        .collect()
}

/// Effective gain `χ_k = Σ_l χ_kl` (linear).
pub fn effective_gain(array: &ArrayGeometry, element: ElementSpec, direction: &Vec3, drone_antenna: &ElementPattern) -> f64 {
    element_chis(array, element, direction, drone_antenna).iter().sum()
}

/// [`effective_gain`] for a drone whose antenna is fixed to its body frame.
pub fn drone_effective_gain(array: &ArrayGeometry, element: ElementSpec, drone: &DroneState, drone_antenna: ElementSpec) -> f64 {
    let pattern = drone_antenna.oriented(drone.orientation.rotation());
    effective_gain(array, element, &drone.direction(), &pattern)
}

/// Attitude pointing an antenna's boresight (local z) back along `-direction`
/// with its first arm (local x) along `arm_axis`, which must be transverse.
pub fn boresight_attitude(direction: &Vec3, arm_axis: &Vec3) -> Rotation3<f64> {
    let z = -direction.normalize();
    let x = (arm_axis - z * arm_axis.dot(&z)).normalize();
    let y = z.cross(&x);
    Rotation3::from_basis_unchecked(&[x, y, z])
}

/// `count` independent rotations, uniform over SO(3), reproducible from `seed`.
pub fn pseudo_random_orientations(seed: u64, count: usize) -> Vec<Rotation3<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            // a normalized 4D Gaussian is uniform on S³, hence a Haar rotation
            let mut q = [0.0f64; 4];
            for c in &mut q {
                *c = StandardNormal.sample(&mut rng);
            }
            UnitQuaternion::from_quaternion(Quaternion::new(q[0], q[1], q[2], q[3])).to_rotation_matrix()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{unit_direction, Spherical};
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn dipole() -> ElementSpec {
        ElementSpec::new(ElementKind::Dipole)
    }

    /// Midpoint-rule average of a pattern over the sphere.
    fn sphere_average(pattern: impl Fn(&Vec3) -> f64, n: usize) -> f64 {
        let mut acc = 0.0;
        for i in 0..n {
            let theta = (i as f64 + 0.5) * PI / n as f64;
            for j in 0..2 * n {
                let phi = (j as f64 + 0.5) * PI / n as f64;
                acc += pattern(&unit_direction(theta, phi)) * theta.sin();
            }
        }
        acc * (PI / n as f64) * (PI / n as f64) / (4.0 * PI)
    }

    #[test]
    fn isotropic_is_unity_everywhere() {
        let p = ElementSpec::isotropic().oriented(Rotation3::identity());
        for d in [Vec3::x(), Vec3::z(), Vec3::new(1.0, 2.0, 3.0).normalize()] {
            let r = element_response(&p, &d);
            assert_eq!(r.gain, 1.0);
            assert!(r.polarization.is_none());
        }
    }

    #[test]
    fn dipole_axial_null_and_fixed_pol() {
        let p = dipole().oriented(Rotation3::identity());
        let a = element_response(&p, &Vec3::x());
        let b = element_response(&p, &Vec3::x());
        assert_eq!(a.gain, 0.0);
        assert_eq!(a.polarization, b.polarization);
        assert_eq!(element_response(&p, &-Vec3::x()).gain, 0.0);
    }

    #[test]
    fn half_wave_broadside_directivity_by_quadrature() {
        let model = DipoleModel::HalfWave;
        let avg = sphere_average(|d| model.normalized_pattern(d.x), 400);
        let directivity = 1.0 / avg;
        assert!((directivity / 1.64 - 1.0).abs() < 0.005, "{directivity}");
        assert!((directivity / HALF_WAVE_DIRECTIVITY - 1.0).abs() < 1e-4);

        let p = dipole().oriented(Rotation3::identity());
        let g = element_response(&p, &Vec3::y()).gain;
        assert!((g / 1.64 - 1.0).abs() < 0.005);
    }

    #[test]
    fn hertzian_directivity_by_quadrature() {
        let avg = sphere_average(|d| DipoleModel::Hertzian.normalized_pattern(d.z), 400);
        assert!((1.0 / avg - HERTZIAN_DIRECTIVITY).abs() < 1e-4);
    }

    #[test]
    fn crossed_pair_pattern_averages_to_unity() {
        for kind in [ElementKind::CrossDipoleCircular, ElementKind::CrossDipoleLinear { arm: Arm::Y }] {
            let p = ElementSpec::new(kind).oriented(Rotation3::identity());
            let avg = sphere_average(|d| element_response(&p, d).gain, 300);
            assert!((avg - 1.0).abs() < 1e-4, "{kind:?}: {avg}");
        }
    }

    #[test]
    fn peak_unity_scales_gain() {
        let p = dipole().with_normalization(GainNormalization::PeakUnity).oriented(Rotation3::identity());
        assert!((element_response(&p, &Vec3::z()).gain - 1.0).abs() < 1e-15);
    }

    #[test]
    fn mismatch_examples() {
        let h = PolarizationState::linear(Vec3::x()).unwrap();
        let v = PolarizationState::linear(Vec3::y()).unwrap();
        let c = PolarizationState::circular(Vec3::x(), -Vec3::y()).unwrap();
        assert!((mismatch_factor(&h, &h) - 1.0).abs() < 1e-15);
        assert_eq!(mismatch_factor(&h, &v), 0.0);
        assert!((mismatch_factor(&h, &c) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn circular_turnstile_is_circular_on_boresight() {
        let p = ElementSpec::new(ElementKind::CrossDipoleCircular).oriented(Rotation3::identity());
        let r = element_response(&p, &Vec3::z());
        let pol = r.polarization.unwrap();
        let j = pol.jones((&Vec3::x(), &Vec3::y()));
        assert!((j[0].norm() - j[1].norm()).abs() < 1e-12);
        assert!((r.gain - HALF_WAVE_DIRECTIVITY).abs() < 1e-12);
        // in the plane of the arms only one arm radiates: linear, half power
        let r = element_response(&p, &Vec3::x());
        assert!((r.gain - HALF_WAVE_DIRECTIVITY / 2.0).abs() < 1e-12);
        let v = r.polarization.unwrap();
        assert!((v.vector()[1].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn facing_turnstiles_of_same_hand_match() {
        let gs = ElementSpec::new(ElementKind::CrossDipoleCircular).oriented(Rotation3::identity());
        let up = Vec3::z();
        // drone above, boresight pointing down, same handedness
        let drone = ElementSpec::new(ElementKind::CrossDipoleCircular).oriented(boresight_attitude(&up, &Vec3::x()));
        let chi = link_chi(&gs, &drone, &up);
        assert!((chi - HALF_WAVE_DIRECTIVITY.powi(2)).abs() < 1e-9, "{chi}");
        // unrotated twin radiates the opposite hand toward the GS
        let twin = ElementSpec::new(ElementKind::CrossDipoleCircular).oriented(Rotation3::identity());
        assert!(link_chi(&gs, &twin, &up) < 1e-20);
    }

    #[test]
    fn link_chi_examples() {
        let iso = ElementSpec::isotropic().oriented(Rotation3::identity());
        assert_eq!(link_chi(&iso, &iso, &Vec3::z()), 1.0);

        // GS dipole along x, link along x: null whatever the drone does
        let gs = dipole().oriented(Rotation3::identity());
        for seed in 0..5 {
            let r = pseudo_random_orientations(seed, 1)[0];
            assert_eq!(link_chi(&gs, &dipole().oriented(r), &Vec3::x()), 0.0);
        }

        // parallel broadside dipoles
        let chi = link_chi(&gs, &dipole().oriented(Rotation3::identity()), &Vec3::z());
        assert!((chi / 1.64f64.powi(2) - 1.0).abs() < 0.01);
    }

    #[test]
    fn isotropic_array_gain_equals_count() {
        let array = ArrayGeometry::linear(17, 0.0625).unwrap();
        let drone = DroneState::new(Spherical::new(100.0, 1.0, 2.0).unwrap());
        let g = drone_effective_gain(&array, ElementSpec::isotropic(), &drone, ElementSpec::isotropic());
        assert_eq!(g, 17.0);
    }

    #[test]
    fn random_rotations_are_proper() {
        let r = pseudo_random_orientations(5, 1)[0];
        let m = r.matrix();
        assert!((m.transpose() * m - nalgebra::Matrix3::identity()).norm() < 1e-12);
        assert!((m.determinant() - 1.0).abs() < 1e-12);
        assert_eq!(pseudo_random_orientations(5, 10), pseudo_random_orientations(5, 10));
    }

    /// KS distance of samples against U(-1, 1).
    fn ks_uniform(mut z: Vec<f64>) -> f64 {
        z.sort_by(f64::total_cmp);
        let n = z.len() as f64;
        z.iter()
            .enumerate()
            .map(|(i, &x)| {
                let f = (x + 1.0) / 2.0;
                (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
            })
            .fold(0.0, f64::max)
    }

    #[test]
    fn random_rotation_axes_are_uniform_on_sphere() {
        let rots = pseudo_random_orientations(17, 10_000);
        for axis in [Vec3::x(), Vec3::z()] {
            let z: Vec<f64> = rots.iter().map(|r| (r * axis).z).collect();
            assert!(ks_uniform(z) < 0.02);
        }
        // left-composing with a fixed rotation keeps the law
        let fixed = Rotation3::from_euler_angles(0.3, -1.1, 2.0);
        let z: Vec<f64> = rots.iter().map(|r| ((fixed * r) * Vec3::y()).z).collect();
        assert!(ks_uniform(z) < 0.02);
    }

    fn arb_kind() -> impl Strategy<Value = ElementKind> {
        prop_oneof![
            Just(ElementKind::Isotropic),
            Just(ElementKind::Dipole),
            Just(ElementKind::CrossDipoleLinear { arm: Arm::X }),
            Just(ElementKind::CrossDipoleLinear { arm: Arm::Y }),
            Just(ElementKind::CrossDipoleCircular),
        ]
    }

    proptest! {
        #[test]
        fn mismatch_bounded_and_phase_invariant(
            a in proptest::array::uniform6(-1.0f64..1.0),
            b in proptest::array::uniform6(-1.0f64..1.0),
            phase in 0.0f64..6.3,
        ) {
            let mk = |v: [f64; 6]| CVec3::new(
                Complex64::new(v[0], v[1]), Complex64::new(v[2], v[3]), Complex64::new(v[4], v[5]));
            let (Some(tx), Some(rx)) = (PolarizationState::from_field(mk(a)), PolarizationState::from_field(mk(b))) else {
                return Ok(());
            };
            let m = mismatch_factor(&tx, &rx);
            prop_assert!((0.0..=1.0).contains(&m));
            prop_assert!((mismatch_factor(&tx.rotate_phase(phase), &rx) - m).abs() < 1e-12);
            prop_assert!((tx.vector().norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn link_chi_is_reciprocal(
            ka in arb_kind(), kb in arb_kind(), seed in 0u64..1000,
            theta in 0.0f64..PI, phi in 0.0f64..std::f64::consts::TAU,
        ) {
            let rots = pseudo_random_orientations(seed, 2);
            let a = ElementSpec::new(ka).oriented(rots[0]);
            let b = ElementSpec::new(kb).oriented(rots[1]);
            let d = unit_direction(theta, phi);
            let ab = link_chi(&a, &b, &d);
            let ba = link_chi(&b, &a, &-d);
            prop_assert!(ab >= 0.0);
            prop_assert!((ab - ba).abs() <= 1e-12 * ab.max(1.0));
        }
    }
}
