//! Interferometer phase from grating motion.
//!
//! The detected phase samples the three grating positions at the atom
//! passage times,
//!
//!   Phi_p = p k_G [2 x_2(t) - x_1(t - T) - x_3(t + T)],
//!
//! which expands for short flight times T into a bending term, a rotation
//! (Sagnac) term and an acceleration term,
//!
//!   Phi = p k_G [delta(t) - (v_3x - v_1x) T - (a_1x + a_3x) T^2 / 2].
//!
//! In the frequency domain, with the gratings on the neutral line at
//! z = 0, +-L12, the same decomposition becomes a closed-form transfer from
//! the modal amplitudes (a, b):
//!
//!   Phi_p(omega)/p = 2 k_G [ b (1 - cos(k L12) + (1 - cosh(k L12)) cos(kL)/cosh(kL))
//!                          + i a (sin(k L12) + sinh(k L12) sin(kL)/sinh(kL)) sin(omega T)
//!                          + b (cos(k L12) + cosh(k L12) cos(kL)/cosh(kL)) (1 - cos(omega T)) ]
//!
//! (bending, Sagnac, acceleration lines in this order). A compact
//! approximation valid for omega well below both 1/T and the first bending
//! resonance, and with L12 = L, is
//!
//!   Phi_p(omega)/p ~ k_G [ (x_+ - x_-) 3i (omega T) / (3 - R)
//!                        + (x_+ + x_-) (13.0 (omega/omega_0)^2 + (omega T)^2) / (2 (1 - R)) ]
//!
//! where R = omega^2 / (omega_osc^2 - i omega_osc omega / Q_osc) carries the
//! whole suspension sensitivity.

use num_complex::Complex64;

use crate::beam::{omega0, BeamSpec, SupportSpec};
use crate::error::{positive, Error, Result};
use crate::response::{cos_over_cosh, cosh_ratio, sinh_ratio, ModalAmplitudes};

/// Grating constant, diffraction order and flight time of the atom
/// interferometer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InterferometerSpec {
    /// Grating wavevector k_G = 2 pi / a (rad/m).
    pub grating_wavevector: f64,
    /// Diffraction order p >= 1.
    pub order: u32,
    /// Time of flight T between adjacent gratings (s).
    pub time_of_flight: f64,
}

impl InterferometerSpec {
    pub fn new(grating_wavevector: f64, order: u32, time_of_flight: f64) -> Result<Self> {
        if !positive(grating_wavevector) {
            return Err(Error::invalid(
                "interferometer.grating_wavevector",
                "must be > 0",
            ));
        }
        if order < 1 {
            return Err(Error::invalid("interferometer.order", "must be >= 1"));
        }
        if !positive(time_of_flight) {
            return Err(Error::invalid(
                "interferometer.time_of_flight",
                "must be > 0",
            ));
        }
        Ok(Self {
            grating_wavevector,
            order,
            time_of_flight,
        })
    }

    /// Derives the flight time from the grating span and the atom speed,
    /// T = L12 / u.
    pub fn from_flight_path(
        grating_wavevector: f64,
        order: u32,
        grating_half_span: f64,
        atom_speed: f64,
    ) -> Result<Self> {
        if !positive(atom_speed) {
            return Err(Error::invalid("interferometer.atom_speed", "must be > 0"));
        }
        if !positive(grating_half_span) {
            return Err(Error::invalid(
                "interferometer.grating_half_span",
                "must be > 0",
            ));
        }
        Self::new(grating_wavevector, order, grating_half_span / atom_speed)
    }
}

/// One frequency sample of the phase transfer, per unit diffraction order,
/// split into its three physical contributions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTransferValue {
    /// bending + sagnac + acceleration, exactly.
    pub total: Complex64,
    /// Instantaneous rail bending, independent of T.
    pub bending: Complex64,
    /// Rotation of the rail sampled across the flight time.
    pub sagnac: Complex64,
    /// Common acceleration sampled across the flight time.
    pub acceleration: Complex64,
}

impl PhaseTransferValue {
    fn from_parts(bending: Complex64, sagnac: Complex64, acceleration: Complex64) -> Self {
        Self {
            total: bending + sagnac + acceleration,
            bending,
            sagnac,
            acceleration,
        }
    }
}

/// Suspension transmissibility factor
/// R = omega^2 / (omega_osc^2 - i omega_osc omega / Q_osc).
///
/// |R| -> 0 at low frequency (the rail follows the ground) and R ~ 1 on the
/// pendular resonance, where the suspension amplifies instead of isolating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuspensionResponse {
    pub value: Complex64,
}

impl SuspensionResponse {
    /// Evaluates R at `omega` for a support with pendular resonance
    /// `omega_osc` and quality factor `q_osc` (may be infinite).
    pub fn at(omega: f64, omega_osc: f64, q_osc: f64) -> Self {
        let loss = if q_osc.is_infinite() {
            0.0
        } else {
            omega_osc * omega / q_osc
        };
        Self {
            value: omega * omega / Complex64::new(omega_osc * omega_osc, -loss),
        }
    }

    pub fn for_support(omega: f64, beam: &BeamSpec, support: &SupportSpec) -> Self {
        Self::at(omega, support.omega_osc(beam), support.q_osc(beam))
    }
}

/// Exact three-grating phase from sampled positions:
/// Phi = p k_G (2 x2 - x1 - x3). The caller samples x1, x2, x3 at the
/// respective passage times t - T, t, t + T.
///
/// The order multiplies last so that Phi_p = p Phi_1 holds bit-exactly.
pub fn phase_time_domain(x1: f64, x2: f64, x3: f64, spec: &InterferometerSpec) -> f64 {
    spec.order as f64 * (spec.grating_wavevector * (2.0 * x2 - x1 - x3))
}

/// Second-order expansion of the sampled phase in the flight time:
/// Phi = p k_G [delta - (v3x - v1x) T - (a1x + a3x) T^2 / 2].
pub fn phase_second_order(
    delta: f64,
    v1x: f64,
    v3x: f64,
    a1x: f64,
    a3x: f64,
    spec: &InterferometerSpec,
) -> f64 {
    let t = spec.time_of_flight;
    spec.order as f64
        * (spec.grating_wavevector * (delta - (v3x - v1x) * t - (a1x + a3x) * t * t / 2.0))
}

/// Full frequency-domain phase transfer per unit order, from solved modal
/// amplitudes. Gratings sit on the neutral line at z = 0, +-L12.
pub fn phase_transfer_full(
    omega: f64,
    amps: &ModalAmplitudes,
    beam: &BeamSpec,
    spec: &InterferometerSpec,
) -> PhaseTransferValue {
    let kappa = amps.wavenumber;
    let u = kappa * beam.half_length;
    let u12 = kappa * beam.grating_half_span;
    let two_kg = 2.0 * spec.grating_wavevector;
    let phase_angle = omega * spec.time_of_flight;

    // bounded pieces; cosh(u12)/cosh(u) etc. never overflow for L12 <= L
    let cc = cosh_ratio(u12, u);
    let ss = if u == 0.0 { 0.0 } else { sinh_ratio(u12, u) };
    let bending = amps.b * two_kg * ((1.0 - u12.cos()) + cos_over_cosh(u) - cc * u.cos());
    let sagnac = amps.a * Complex64::i() * two_kg * (u12.sin() + ss * u.sin()) * phase_angle.sin();
    let acceleration = amps.b * two_kg * (u12.cos() + cc * u.cos()) * (1.0 - phase_angle.cos());
    PhaseTransferValue::from_parts(bending, sagnac, acceleration)
}

/// Compact suspension-aware approximation of the transfer per unit order.
/// Assumes omega well below min(omega_0, 1/T) and L12 = L; callers may
/// evaluate it anywhere to probe where it breaks down.
pub fn phase_transfer_approx(
    omega: f64,
    x_plus: Complex64,
    x_minus: Complex64,
    beam: &BeamSpec,
    support: &SupportSpec,
    spec: &InterferometerSpec,
) -> PhaseTransferValue {
    let k_g = spec.grating_wavevector;
    let omega_t = omega * spec.time_of_flight;
    let ratio0 = omega / omega0(beam);
    let r = SuspensionResponse::for_support(omega, beam, support).value;

    let sagnac = (x_plus - x_minus) * Complex64::i() * (3.0 * k_g * omega_t) / (3.0 - r);
    let even_gain = (x_plus + x_minus) * k_g / (2.0 * (1.0 - r));
    let bending = even_gain * 13.0 * ratio0 * ratio0;
    let acceleration = even_gain * omega_t * omega_t;
    PhaseTransferValue::from_parts(bending, sagnac, acceleration)
}

/// Phase of the co-mounted optical monitor interferometer; the flight time
/// of light is negligible, leaving only the bending term
/// Phi_opt = p k_g_opt delta.
pub fn optical_phase(delta: f64, order: u32, optical_wavevector: f64) -> f64 {
    order as f64 * (optical_wavevector * delta)
}
