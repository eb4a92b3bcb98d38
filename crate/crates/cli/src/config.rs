//! Line-oriented model configuration: `section.key = value`, one per line,
//! `#` comments. Diff-friendly and free of any schema machinery.
//!
//! The beam may be given either by its raw section properties or by the
//! first bending resonance plus a mass-per-length scale; the support either
//! by (stiffness, damping) or by (pendular frequency, Q); the flight time
//! either directly or through the atom speed. Exactly one alternative of
//! each pair must be present.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use railnoise_core::{BeamSpec, InterferometerSpec, SupportSpec};

use crate::CliError;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Parsed configuration, still in the user's chosen parameterization.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ModelConfig {
    // beam, raw parameterization
    pub young_modulus: Option<f64>,
    pub density: Option<f64>,
    pub cross_section_area: Option<f64>,
    pub bending_moment: Option<f64>,
    // beam, resonance parameterization
    pub f0_hz: Option<f64>,
    pub mass_per_length: Option<f64>,
    // beam, shared geometry
    pub half_length: Option<f64>,
    pub grating_half_span: Option<f64>,
    // support
    pub stiffness: Option<f64>,
    pub damping: Option<f64>,
    pub f_osc_hz: Option<f64>,
    pub q_osc: Option<f64>,
    // interferometer
    pub grating_wavevector: Option<f64>,
    pub order: Option<u32>,
    pub time_of_flight: Option<f64>,
    pub atom_speed: Option<f64>,
    // pipeline
    pub f_min: Option<f64>,
    pub f_max: Option<f64>,
    pub grid_points: Option<usize>,
    pub smoothing_octaves: Option<f64>,
    pub extend_to_hz: Option<f64>,
}

/// Pipeline stage settings with defaults applied.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineSettings {
    pub f_min: f64,
    pub f_max: f64,
    pub grid_points: usize,
    /// 0 disables envelope smoothing.
    pub smoothing_octaves: f64,
    /// Extend the spectrum at constant PSD up to here when it ends short.
    pub extend_to_hz: f64,
}

/// Fully resolved model: core specs plus pipeline settings.
#[derive(Debug, Clone)]
pub struct ResolvedModel {
    pub beam: BeamSpec,
    pub support: SupportSpec,
    pub interferometer: InterferometerSpec,
    pub pipeline: PipelineSettings,
}

impl ModelConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self, CliError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let mut seen = BTreeMap::new();
        let mut config = ModelConfig::default();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or_else(|| {
                CliError::validation(format!(
                    "config line {line}: expected `section.key = value`"
                ))
            })?;
            let key = key.trim();
            let value = value.trim();
            if value.is_empty() {
                return Err(CliError::validation(format!(
                    "config line {line}: empty value for {key}"
                )));
            }
            if let Some(first) = seen.insert(key.to_string(), line) {
                return Err(CliError::validation(format!(
                    "config line {line}: {key} already set on line {first}"
                )));
            }
            config.assign(key, value, line)?;
        }
        Ok(config)
    }

    fn assign(&mut self, key: &str, value: &str, line: usize) -> Result<(), CliError> {
        let float = || -> Result<f64, CliError> {
            let normalized = value.to_ascii_lowercase();
            if normalized == "inf" || normalized == "infinity" {
                return Ok(f64::INFINITY);
            }
            value.parse().map_err(|_| {
                CliError::validation(format!(
                    "config line {line}: {key}: cannot parse {value:?} as a number"
                ))
            })
        };
        match key {
            "beam.young_modulus" => self.young_modulus = Some(float()?),
            "beam.density" => self.density = Some(float()?),
            "beam.cross_section_area" => self.cross_section_area = Some(float()?),
            "beam.bending_moment" => self.bending_moment = Some(float()?),
            "beam.f0_hz" => self.f0_hz = Some(float()?),
            "beam.mass_per_length" => self.mass_per_length = Some(float()?),
            "beam.half_length" => self.half_length = Some(float()?),
            "beam.grating_half_span" => self.grating_half_span = Some(float()?),
            "support.stiffness" => self.stiffness = Some(float()?),
            "support.damping" => self.damping = Some(float()?),
            "support.f_osc_hz" => self.f_osc_hz = Some(float()?),
            "support.q_osc" => self.q_osc = Some(float()?),
            "interferometer.grating_wavevector" => self.grating_wavevector = Some(float()?),
            "interferometer.order" => self.order = Some(value.parse().map_err(|_| {
                CliError::validation(format!(
                    "config line {line}: interferometer.order: {value:?} is not a positive integer"
                ))
            })?),
            "interferometer.time_of_flight" => self.time_of_flight = Some(float()?),
            "interferometer.atom_speed" => self.atom_speed = Some(float()?),
            "pipeline.f_min" => self.f_min = Some(float()?),
            "pipeline.f_max" => self.f_max = Some(float()?),
            "pipeline.grid_points" => self.grid_points = Some(value.parse().map_err(|_| {
                CliError::validation(format!(
                    "config line {line}: pipeline.grid_points: {value:?} is not a positive integer"
                ))
            })?),
            "pipeline.smoothing_octaves" => self.smoothing_octaves = Some(float()?),
            "pipeline.extend_to_hz" => self.extend_to_hz = Some(float()?),
            _ => {
                return Err(CliError::validation(format!(
                    "config line {line}: unknown key {key:?}"
                )))
            }
        }
        Ok(())
    }

    /// Canonical serialization; `parse(to_text(c)) == c` for any parsed `c`.
    #[allow(dead_code)] // exercised by the round-trip tests
    pub fn to_text(&self) -> String {
        fn put(out: &mut String, key: &str, value: Option<f64>) {
            if let Some(v) = value {
                if v.is_infinite() {
                    let _ = writeln!(out, "{key} = inf");
                } else {
                    let _ = writeln!(out, "{key} = {v:e}");
                }
            }
        }
        let mut out = String::new();
        put(&mut out, "beam.young_modulus", self.young_modulus);
        put(&mut out, "beam.density", self.density);
        put(&mut out, "beam.cross_section_area", self.cross_section_area);
        put(&mut out, "beam.bending_moment", self.bending_moment);
        put(&mut out, "beam.f0_hz", self.f0_hz);
        put(&mut out, "beam.mass_per_length", self.mass_per_length);
        put(&mut out, "beam.half_length", self.half_length);
        put(&mut out, "beam.grating_half_span", self.grating_half_span);
        put(&mut out, "support.stiffness", self.stiffness);
        put(&mut out, "support.damping", self.damping);
        put(&mut out, "support.f_osc_hz", self.f_osc_hz);
        put(&mut out, "support.q_osc", self.q_osc);
        put(
            &mut out,
            "interferometer.grating_wavevector",
            self.grating_wavevector,
        );
        if let Some(p) = self.order {
            let _ = writeln!(out, "interferometer.order = {p}");
        }
        put(
            &mut out,
            "interferometer.time_of_flight",
            self.time_of_flight,
        );
        put(&mut out, "interferometer.atom_speed", self.atom_speed);
        put(&mut out, "pipeline.f_min", self.f_min);
        put(&mut out, "pipeline.f_max", self.f_max);
        if let Some(n) = self.grid_points {
            let _ = writeln!(out, "pipeline.grid_points = {n}");
        }
        put(
            &mut out,
            "pipeline.smoothing_octaves",
            self.smoothing_octaves,
        );
        put(&mut out, "pipeline.extend_to_hz", self.extend_to_hz);
        out
    }

    /// Validates the parameterization choices and builds the core specs.
    pub fn resolve(&self) -> Result<ResolvedModel, CliError> {
        let beam = self.resolve_beam()?;
        let support = self.resolve_support(&beam)?;
        let interferometer = self.resolve_interferometer(&beam)?;
        let pipeline = self.resolve_pipeline()?;
        Ok(ResolvedModel {
            beam,
            support,
            interferometer,
            pipeline,
        })
    }

    fn resolve_beam(&self) -> Result<BeamSpec, CliError> {
        let half_length = self
            .half_length
            .ok_or_else(|| CliError::validation("beam.half_length is required"))?;
        let span = self
            .grating_half_span
            .ok_or_else(|| CliError::validation("beam.grating_half_span is required"))?;
        let raw = [
            self.young_modulus,
            self.density,
            self.cross_section_area,
            self.bending_moment,
        ];
        let raw_count = raw.iter().flatten().count();
        let reso_count = [self.f0_hz, self.mass_per_length].iter().flatten().count();
        match (raw_count, reso_count) {
            (4, 0) => BeamSpec::new(
                self.young_modulus.unwrap(),
                self.density.unwrap(),
                self.cross_section_area.unwrap(),
                self.bending_moment.unwrap(),
                half_length,
                span,
            )
            .map_err(CliError::from),
            (0, 2) => BeamSpec::from_bending_resonance(
                TWO_PI * self.f0_hz.unwrap(),
                self.mass_per_length.unwrap(),
                half_length,
                span,
            )
            .map_err(CliError::from),
            (0, 0) => Err(CliError::validation(
                "beam: provide either beam.{young_modulus,density,cross_section_area,bending_moment} or beam.{f0_hz,mass_per_length}",
            )),
            _ => Err(CliError::validation(
                "beam: the raw-section and resonance parameterizations are mutually exclusive and must each be complete",
            )),
        }
    }

    fn resolve_support(&self, beam: &BeamSpec) -> Result<SupportSpec, CliError> {
        let raw_count = [self.stiffness, self.damping].iter().flatten().count();
        let reso_count = [self.f_osc_hz, self.q_osc].iter().flatten().count();
        match (raw_count, reso_count) {
            (2, 0) => SupportSpec::new(self.stiffness.unwrap(), self.damping.unwrap())
                .map_err(CliError::from),
            (0, 2) => SupportSpec::from_resonance(
                TWO_PI * self.f_osc_hz.unwrap(),
                self.q_osc.unwrap(),
                beam,
            )
            .map_err(CliError::from),
            (0, 0) => Err(CliError::validation(
                "support: provide either support.{stiffness,damping} or support.{f_osc_hz,q_osc}",
            )),
            _ => Err(CliError::validation(
                "support: the (stiffness, damping) and (f_osc_hz, q_osc) parameterizations are mutually exclusive and must each be complete",
            )),
        }
    }

    fn resolve_interferometer(&self, beam: &BeamSpec) -> Result<InterferometerSpec, CliError> {
        let k_g = self
            .grating_wavevector
            .ok_or_else(|| CliError::validation("interferometer.grating_wavevector is required"))?;
        let order = self.order.unwrap_or(1);
        match (self.time_of_flight, self.atom_speed) {
            (Some(t), None) => InterferometerSpec::new(k_g, order, t).map_err(CliError::from),
            (None, Some(u)) => {
                InterferometerSpec::from_flight_path(k_g, order, beam.grating_half_span, u)
                    .map_err(CliError::from)
            }
            (Some(_), Some(_)) => Err(CliError::validation(
                "interferometer: time_of_flight and atom_speed are mutually exclusive",
            )),
            (None, None) => Err(CliError::validation(
                "interferometer: provide time_of_flight or atom_speed",
            )),
        }
    }

    fn resolve_pipeline(&self) -> Result<PipelineSettings, CliError> {
        let f_min = self.f_min.unwrap_or(railnoise_core::DEFAULT_F_MIN);
        let f_max = self.f_max.unwrap_or(railnoise_core::DEFAULT_F_MAX);
        if !(f_min > 0.0 && f_max > f_min) {
            return Err(CliError::validation(format!(
                "pipeline: need 0 < f_min < f_max, got [{f_min}, {f_max}]"
            )));
        }
        let smoothing = self.smoothing_octaves.unwrap_or(0.0);
        if smoothing < 0.0 {
            return Err(CliError::validation(
                "pipeline.smoothing_octaves must be >= 0 (0 disables smoothing)",
            ));
        }
        Ok(PipelineSettings {
            f_min,
            f_max,
            grid_points: self
                .grid_points
                .unwrap_or(railnoise_core::DEFAULT_GRID_POINTS),
            smoothing_octaves: smoothing,
            extend_to_hz: self.extend_to_hz.unwrap_or(f_max),
        })
    }
}
