//! Vibration-induced phase noise in three-grating Mach-Zehnder atom
//! interferometers.
//!
//! The three diffraction gratings ride on a stiff rail whose supports shake
//! with the laboratory floor; the rail translates, rotates and bends in
//! response, and the interferometer converts that motion into phase noise
//! that eats fringe visibility at high diffraction order. This crate models
//! the chain end to end:
//!
//! - [`beam`]: rail geometry/material specs, the flexural dispersion
//!   relation and all resonances (pendular, rotational, bending);
//! - [`response`]: the frequency-domain boundary-value problem for the
//!   rail shape on damped elastic supports;
//! - [`phase`]: interferometer phase from grating motion, exact sampling,
//!   short-flight-time expansion, full and compact frequency-domain
//!   transfer functions, optical-monitor phase;
//! - [`spectrum`]: seismic PSD ingestion, envelope smoothing, constant
//!   band extension, log-log interpolation;
//! - [`pipeline`]: phase-noise PSD on a resonance-aware grid, band
//!   integration to phase variance, rms rail bending;
//! - [`visibility`]: Gaussian visibility loss and the visibility-versus-
//!   order fit.
//!
//! All operations are pure functions of their inputs and safe to call
//! concurrently.

pub mod beam;
pub mod error;
pub mod phase;
pub mod pipeline;
pub mod response;
pub mod spectrum;
pub mod visibility;

pub use beam::{
    bending_resonances, dispersion, omega0, support_resonances, BeamSpec, SupportSpec,
    FIRST_BENDING_COEFFICIENT,
};
pub use error::{Error, Result};
pub use phase::{
    optical_phase, phase_second_order, phase_time_domain, phase_transfer_approx,
    phase_transfer_full, InterferometerSpec, PhaseTransferValue, SuspensionResponse,
};
pub use pipeline::{
    integrate_phase_variance, phase_noise_psd, rms_bending, FrequencyGrid, PhaseNoisePsd,
    PhaseNoiseSample, PhaseVariance, DEFAULT_F_MAX, DEFAULT_F_MIN, DEFAULT_GRID_POINTS,
};
pub use response::{modal_amplitudes, rail_shape, FrequencyResponse, ModalAmplitudes};
pub use spectrum::{extend_constant, smooth_envelope, NoiseSpectrum};
pub use visibility::{
    fit_visibility, variance_to_visibility_report, visibility_curve, visibility_from_variance,
    VisibilityFit, VisibilityPoint,
};
