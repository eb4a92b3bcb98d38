//! Human-readable reports for the subcommands, plus the visibility data
//! file parser. All formatting is fixed-width scientific notation so
//! repeated runs on identical inputs emit identical bytes.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use railnoise_core::{
    bending_resonances, extend_constant, integrate_phase_variance, phase_noise_psd, rms_bending,
    smooth_envelope, support_resonances, variance_to_visibility_report, visibility_curve,
    FrequencyGrid, NoiseSpectrum, PhaseNoisePsd, PhaseVariance, VisibilityFit, VisibilityPoint,
};

use crate::config::ResolvedModel;
use crate::CliError;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Reference constants measured on the apparatus this model was built
/// around, echoed in reports for scale comparison.
pub const REFERENCE_TOTAL_VARIANCE: f64 = 0.16;
pub const REFERENCE_SAGNAC_VARIANCE: f64 = 0.13;
pub const BENDING_BOUND_M: f64 = 3.0e-9;

pub fn resonances_report(model: &ResolvedModel, modes: usize) -> Result<String, CliError> {
    let (osc, rot) = support_resonances(&model.beam, &model.support);
    let bending = bending_resonances(&model.beam, modes.max(1))?;
    let mut out = String::new();
    let _ = writeln!(out, "railnoise resonances");
    let _ = writeln!(out, "pendular_hz   = {:.4}", osc / TWO_PI);
    let _ = writeln!(
        out,
        "rotational_hz = {:.4}  (sqrt(3) x pendular)",
        rot / TWO_PI
    );
    for (i, omega) in bending.iter().enumerate() {
        let _ = writeln!(
            out,
            "bending_{}_hz  = {:.4}  (ratio {:.4})",
            i + 1,
            omega / TWO_PI,
            omega / bending[0]
        );
    }
    Ok(out)
}

/// Loads the seismic spectrum and applies the configured envelope smoothing
/// and constant band extension.
pub fn prepare_spectrum(model: &ResolvedModel, psd_path: &Path) -> Result<NoiseSpectrum, CliError> {
    let mut spectrum = NoiseSpectrum::load(psd_path)?;
    if model.pipeline.smoothing_octaves > 0.0 {
        spectrum = smooth_envelope(&spectrum, model.pipeline.smoothing_octaves);
    }
    if model.pipeline.extend_to_hz > spectrum.max_frequency() {
        spectrum = extend_constant(&spectrum, model.pipeline.extend_to_hz)?;
    }
    Ok(spectrum)
}

pub fn build_grid(model: &ResolvedModel) -> Result<FrequencyGrid, CliError> {
    FrequencyGrid::for_rail(
        model.pipeline.f_min,
        model.pipeline.f_max,
        model.pipeline.grid_points,
        &model.beam,
        &model.support,
    )
    .map_err(CliError::from)
}

pub fn compute_psd(
    model: &ResolvedModel,
    spectrum: &NoiseSpectrum,
    grid: &FrequencyGrid,
) -> Result<PhaseNoisePsd, CliError> {
    phase_noise_psd(
        spectrum,
        &model.beam,
        &model.support,
        &model.interferometer,
        grid,
    )
    .map_err(CliError::from)
}

pub struct IntegrateInputs<'a> {
    pub config_path: &'a Path,
    pub psd_path: &'a Path,
    pub max_order: u32,
    pub v_max: f64,
}

pub fn integrate_report(
    model: &ResolvedModel,
    inputs: &IntegrateInputs,
) -> Result<String, CliError> {
    let spectrum = prepare_spectrum(model, inputs.psd_path)?;
    let grid = build_grid(model)?;
    let psd = compute_psd(model, &spectrum, &grid)?;
    let (f_min, f_max) = (model.pipeline.f_min, model.pipeline.f_max);
    let variance = integrate_phase_variance(&psd, f_min, f_max)?;
    let rms = rms_bending(&spectrum, &model.beam, &model.support, f_min, f_max)?;

    let mut out = String::new();
    let _ = writeln!(out, "railnoise integrate");
    let _ = writeln!(out, "config = {}", inputs.config_path.display());
    let _ = writeln!(
        out,
        "psd = {} ({} samples, {:.6} .. {:.6} Hz)",
        inputs.psd_path.display(),
        spectrum.len(),
        spectrum.min_frequency(),
        spectrum.max_frequency()
    );
    let _ = writeln!(out, "band_hz = {f_min:.6} .. {f_max:.6}");
    let _ = writeln!(out, "grid_points = {}", grid.len());
    write_variance(&mut out, &variance);
    let _ = writeln!(
        out,
        "reference_total = {REFERENCE_TOTAL_VARIANCE:.6e} rad^2, reference_sagnac = {REFERENCE_SAGNAC_VARIANCE:.6e} rad^2 (apparatus values, for scale)"
    );
    let verdict = if rms < BENDING_BOUND_M {
        "PASS"
    } else {
        "FAIL"
    };
    let _ = writeln!(out, "rms_bending = {rms:.6e} m");
    let _ = writeln!(out, "bending_bound = {BENDING_BOUND_M:.6e} m -> {verdict}");
    write_visibility_table(&mut out, variance.total, inputs.v_max, inputs.max_order);
    Ok(out)
}

fn write_variance(out: &mut String, variance: &PhaseVariance) {
    let _ = writeln!(out, "phase_variance_per_p2 = {:.6e} rad^2", variance.total);
    let percent = |part: f64| 100.0 * part / variance.total;
    let _ = writeln!(
        out,
        "  bending      = {:.6e} rad^2 ({:.2}%)",
        variance.bending,
        percent(variance.bending)
    );
    let _ = writeln!(
        out,
        "  sagnac       = {:.6e} rad^2 ({:.2}%)",
        variance.sagnac,
        percent(variance.sagnac)
    );
    let _ = writeln!(
        out,
        "  acceleration = {:.6e} rad^2 ({:.2}%)",
        variance.acceleration,
        percent(variance.acceleration)
    );
}

fn write_visibility_table(out: &mut String, variance_per_p2: f64, v_max: f64, max_order: u32) {
    let _ = writeln!(out, "predicted_visibility (v_max = {v_max:.4}):");
    for (p, v) in variance_to_visibility_report(variance_per_p2, v_max, max_order) {
        let _ = writeln!(
            out,
            "  p = {p}  phase_variance = {:.6e} rad^2  V = {v:.6}",
            (p * p) as f64 * variance_per_p2
        );
    }
}

pub fn predict_visibility_report(
    model: &ResolvedModel,
    inputs: &IntegrateInputs,
) -> Result<String, CliError> {
    let spectrum = prepare_spectrum(model, inputs.psd_path)?;
    let grid = build_grid(model)?;
    let psd = compute_psd(model, &spectrum, &grid)?;
    let variance = integrate_phase_variance(&psd, model.pipeline.f_min, model.pipeline.f_max)?;
    let mut out = String::new();
    let _ = writeln!(out, "railnoise predict-visibility");
    write_variance(&mut out, &variance);
    write_visibility_table(&mut out, variance.total, inputs.v_max, inputs.max_order);
    Ok(out)
}

/// Parses visibility data: lines `p V [sigma_V]`, `#` comments.
pub fn parse_visibility_file(path: &Path) -> Result<Vec<VisibilityPoint>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
    let mut points = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        if !(2..=3).contains(&fields.len()) {
            return Err(CliError::validation(format!(
                "{}:{line}: expected `p V [sigma_V]`",
                path.display()
            )));
        }
        let order: u32 = fields[0].parse().map_err(|_| {
            CliError::validation(format!(
                "{}:{line}: order {:?} is not a positive integer",
                path.display(),
                fields[0]
            ))
        })?;
        let parse = |s: &str, what: &str| -> Result<f64, CliError> {
            s.parse().map_err(|_| {
                CliError::validation(format!(
                    "{}:{line}: cannot parse {what} {s:?}",
                    path.display()
                ))
            })
        };
        let visibility = parse(fields[1], "visibility")?;
        let sigma = fields.get(2).map(|s| parse(s, "sigma")).transpose()?;
        points.push(
            VisibilityPoint::new(order, visibility, sigma)
                .map_err(|e| CliError::validation(format!("{}:{line}: {e}", path.display())))?,
        );
    }
    if points.is_empty() {
        return Err(CliError::validation(format!(
            "{}: no data lines found",
            path.display()
        )));
    }
    Ok(points)
}

pub fn fit_report(points: &[VisibilityPoint], fit: &VisibilityFit) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "railnoise fit-visibility");
    let _ = writeln!(out, "points = {}", points.len());
    let _ = writeln!(out, "V_max = {:.6} +- {:.6}", fit.v_max, fit.sigma_v_max());
    let _ = writeln!(
        out,
        "phi1_sq = {:.6} +- {:.6}",
        fit.phi1_sq,
        fit.sigma_phi1_sq()
    );
    let _ = writeln!(out, "clamped = {}", fit.clamped);
    let _ = writeln!(out, "residuals:");
    for point in points {
        let predicted = visibility_curve(fit, &[point.order])[0];
        let _ = writeln!(
            out,
            "  p = {}  V = {:.6}  fit = {:.6}  resid = {:+.6}",
            point.order,
            point.visibility,
            predicted,
            point.visibility - predicted
        );
    }
    out
}
