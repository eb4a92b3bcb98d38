//! Static properties of the grating rail: geometry and material specs, the
//! flexural dispersion relation, and resonance frequencies.
//!
//! The rail is a uniform beam of length 2L that bends only in the x
//! direction and rests on a damped elastic support at each end. Transverse
//! motion of the neutral line obeys
//!
//!   rho A d2X/dt2 = -E I_y d4X/dz4
//!
//! so time-harmonic solutions at angular frequency omega carry the
//! wavenumber kappa = (rho A omega^2 / (E I_y))^(1/4). Free bending modes
//! of the full beam satisfy cos(2 kappa L) cosh(2 kappa L) = 1; the two
//! support-dominated modes are the in-phase bounce at
//! omega_osc = sqrt(K / (rho A L)) and the rotation about the center at
//! sqrt(3) omega_osc.

use crate::error::{positive, Error, Result};

/// Coefficient of sqrt(E I_y / (rho A L^4)) giving the first bending
/// resonance. Equals (x1/2)^2 for the first positive root x1 of
/// cos(x) cosh(x) = 1, quoted to four significant figures.
pub const FIRST_BENDING_COEFFICIENT: f64 = 5.593;

/// Geometry and material of the rail.
///
/// All quantities in SI units. `half_length` is L (the rail spans
/// [-L, +L]); `grating_half_span` is the distance L12 from the central
/// grating to each outer one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BeamSpec {
    /// Young's modulus E (Pa).
    pub young_modulus: f64,
    /// Material density rho (kg/m^3).
    pub density: f64,
    /// Cross-section area A (m^2).
    pub cross_section: f64,
    /// Second moment of the cross-section about y, I_y (m^4).
    pub second_moment: f64,
    /// Half length L of the rail (m).
    pub half_length: f64,
    /// Half span L12 between outer gratings (m), 0 < L12 <= L.
    pub grating_half_span: f64,
}

impl BeamSpec {
    pub fn new(
        young_modulus: f64,
        density: f64,
        cross_section: f64,
        second_moment: f64,
        half_length: f64,
        grating_half_span: f64,
    ) -> Result<Self> {
        let spec = Self {
            young_modulus,
            density,
            cross_section,
            second_moment,
            half_length,
            grating_half_span,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Builds a beam from its first bending resonance instead of raw section
    /// properties. Only the products E I_y and rho A enter the dynamics, so
    /// the synthesized spec carries E = E I_y, I_y = 1, rho = mass per
    /// length, A = 1.
    pub fn from_bending_resonance(
        omega0: f64,
        mass_per_length: f64,
        half_length: f64,
        grating_half_span: f64,
    ) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::invalid("beam.omega0", "must be > 0"));
        }
        if !(mass_per_length.is_finite() && mass_per_length > 0.0) {
            return Err(Error::invalid("beam.mass_per_length", "must be > 0"));
        }
        let flexural_rigidity =
            (omega0 / FIRST_BENDING_COEFFICIENT).powi(2) * mass_per_length * half_length.powi(4);
        Self::new(
            flexural_rigidity,
            mass_per_length,
            1.0,
            1.0,
            half_length,
            grating_half_span,
        )
    }

    fn validate(&self) -> Result<()> {
        if !positive(self.young_modulus) {
            return Err(Error::invalid("beam.young_modulus", "must be > 0"));
        }
        if !positive(self.density) {
            return Err(Error::invalid("beam.density", "must be > 0"));
        }
        if !positive(self.cross_section) {
            return Err(Error::invalid("beam.cross_section", "must be > 0"));
        }
        if !positive(self.second_moment) {
            return Err(Error::invalid("beam.second_moment", "must be > 0"));
        }
        if !positive(self.half_length) {
            return Err(Error::invalid("beam.half_length", "must be > 0"));
        }
        if !positive(self.grating_half_span) || self.grating_half_span > self.half_length {
            return Err(Error::invalid(
                "beam.grating_half_span",
                format!("must satisfy 0 < L12 <= L = {}", self.half_length),
            ));
        }
        Ok(())
    }

    /// Flexural rigidity E I_y (N m^2).
    pub fn flexural_rigidity(&self) -> f64 {
        self.young_modulus * self.second_moment
    }

    /// Mass per unit length rho A (kg/m).
    pub fn mass_per_length(&self) -> f64 {
        self.density * self.cross_section
    }
}

/// Damped elastic support under each end of the rail.
///
/// The support at z = +-L pulls the rail toward the ground position with
/// force -K (X - x) - mu d(X - x)/dt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportSpec {
    /// Spring constant K (N/m).
    pub stiffness: f64,
    /// Viscous coefficient mu (N s/m), >= 0.
    pub damping: f64,
}

impl SupportSpec {
    pub fn new(stiffness: f64, damping: f64) -> Result<Self> {
        if !positive(stiffness) {
            return Err(Error::invalid("support.stiffness", "must be > 0"));
        }
        if !(damping.is_finite() && damping >= 0.0) {
            return Err(Error::invalid("support.damping", "must be >= 0"));
        }
        Ok(Self { stiffness, damping })
    }

    /// Builds a support from the in-phase resonance omega_osc (rad/s) and
    /// its quality factor. The effective mass per support is rho A L, half
    /// the rail, so K = rho A L omega_osc^2 and mu = rho A L omega_osc / Q.
    /// An infinite Q maps to zero damping.
    pub fn from_resonance(omega_osc: f64, q_osc: f64, beam: &BeamSpec) -> Result<Self> {
        if !positive(omega_osc) {
            return Err(Error::invalid("support.omega_osc", "must be > 0"));
        }
        if q_osc.is_nan() || q_osc <= 0.0 {
            return Err(Error::invalid("support.q_osc", "must be > 0"));
        }
        let half_mass = beam.mass_per_length() * beam.half_length;
        let damping = if q_osc.is_infinite() {
            0.0
        } else {
            half_mass * omega_osc / q_osc
        };
        Self::new(half_mass * omega_osc * omega_osc, damping)
    }

    /// In-phase (pendular) resonance omega_osc = sqrt(K / (rho A L)).
    pub fn omega_osc(&self, beam: &BeamSpec) -> f64 {
        (self.stiffness / (beam.mass_per_length() * beam.half_length)).sqrt()
    }

    /// Quality factor of the pendular resonance; infinite when undamped.
    pub fn q_osc(&self, beam: &BeamSpec) -> f64 {
        if self.damping == 0.0 {
            f64::INFINITY
        } else {
            beam.mass_per_length() * beam.half_length * self.omega_osc(beam) / self.damping
        }
    }
}

/// Wavenumber kappa(omega) = (rho A omega^2 / (E I_y))^(1/4).
pub fn dispersion(omega: f64, beam: &BeamSpec) -> f64 {
    assert!(omega >= 0.0, "dispersion requires omega >= 0");
    (beam.mass_per_length() * omega * omega / beam.flexural_rigidity()).powf(0.25)
}

/// First bending resonance of the free rail (rad/s).
pub fn omega0(beam: &BeamSpec) -> f64 {
    FIRST_BENDING_COEFFICIENT
        * (beam.flexural_rigidity() / (beam.mass_per_length() * beam.half_length.powi(4))).sqrt()
}

/// The n smallest bending resonances, in rad/s, strictly increasing.
///
/// These are the roots kappa_n of cos(2 kappa L) cosh(2 kappa L) = 1 with
/// kappa > 0 (the kappa = 0 root is rigid-body motion, not bending),
/// converted through the dispersion relation,
/// omega_n = sqrt(E I_y / (rho A)) kappa_n^2.
pub fn bending_resonances(beam: &BeamSpec, n: usize) -> Result<Vec<f64>> {
    assert!(n >= 1, "bending_resonances requires n >= 1");
    let scale = (beam.flexural_rigidity() / beam.mass_per_length()).sqrt();
    let two_l = 2.0 * beam.half_length;
    Ok(bending_mode_roots(n)?
        .into_iter()
        .map(|x| {
            let kappa = x / two_l;
            scale * kappa * kappa
        })
        .collect())
}

/// Pendular and rotational support resonances (omega_osc, sqrt(3) omega_osc).
pub fn support_resonances(beam: &BeamSpec, support: &SupportSpec) -> (f64, f64) {
    let osc = support.omega_osc(beam);
    (osc, osc * 3.0_f64.sqrt())
}

/// The n smallest positive roots of cos(x) cosh(x) = 1.
///
/// Roots approach (2n+1) pi/2 from alternating sides, so each one past the
/// first is bracketed in [(2n+1) pi/2 - 0.6, (2n+1) pi/2 + 0.6]; the first
/// sits in [3, 5]. Bisection runs to an absolute tolerance of 1e-10.
pub(crate) fn bending_mode_roots(n: usize) -> Result<Vec<f64>> {
    // cosh overflows near x = 710; work with the bounded equivalent
    // cos(x) - 1/cosh(x), which has the same sign pattern for x > 0.
    let f = |x: f64| x.cos() - 1.0 / x.cosh();
    let mut roots = Vec::with_capacity(n);
    for k in 1..=n {
        let center = (2.0 * k as f64 + 1.0) * std::f64::consts::FRAC_PI_2;
        let (lo, hi) = if k == 1 {
            (3.0, 5.0)
        } else {
            (center - 0.6, center + 0.6)
        };
        let root = bisect(f, lo, hi, 1e-10).ok_or(Error::RootBracketing { index: k, lo, hi })?;
        roots.push(root);
    }
    Ok(roots)
}

/// Bisection to absolute tolerance `tol`; `None` when [lo, hi] does not
/// bracket a sign change.
fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Option<f64> {
    let mut flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Some(lo);
    }
    if fhi == 0.0 {
        return Some(hi);
    }
    if flo.signum() == fhi.signum() {
        return None;
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let fmid = f(mid);
        if fmid == 0.0 {
            return Some(mid);
        }
        if fmid.signum() == flo.signum() {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}
