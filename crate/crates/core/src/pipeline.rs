//! Phase-noise pipeline: drive the rail model with a measured seismic
//! spectrum and produce the frequency-resolved phase-noise PSD, its
//! band-integrated variance, and the rms rail bending.
//!
//! The two supports are taken to carry the same displacement spectrum with
//! no phase relation, so the response to each support is accumulated in
//! quadrature: every stored value is |Phi_+(nu)|^2 + |Phi_-(nu)|^2 per unit
//! p^2, where Phi_eps is the response to unit-spectrum excitation of one
//! support alone, and the cross term is dropped. Near and below the lowest
//! resonance of the supporting structure the two supports actually move
//! together, which would cancel most of the rotation term; results below a
//! few hertz therefore overstate the noise, and the default band starts at
//! 2 Hz.

use std::io::Write;

use num_complex::Complex64;

const UNIT: Complex64 = Complex64::new(1.0, 0.0);
const NULL: Complex64 = Complex64::new(0.0, 0.0);

use crate::beam::{bending_resonances, support_resonances, BeamSpec, SupportSpec};
use crate::error::{positive, Error, Result};
use crate::phase::{phase_transfer_full, InterferometerSpec};
use crate::response::{rail_shape, FrequencyResponse};
use crate::spectrum::NoiseSpectrum;

/// Default lower edge of the integration band (Hz); below this the
/// uncorrelated-supports assumption breaks down.
pub const DEFAULT_F_MIN: f64 = 2.0;
/// Default upper edge of the integration band (Hz).
pub const DEFAULT_F_MAX: f64 = 1000.0;
/// Default number of base grid points.
pub const DEFAULT_GRID_POINTS: usize = 2000;

/// Logarithmic evaluation grid, densified around resonances so the
/// trapezoid rule resolves narrow peaks.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyGrid {
    points: Vec<f64>,
}

impl FrequencyGrid {
    /// Plain log-spaced grid of `n >= 2` points over [f_min, f_max] Hz.
    pub fn log_spaced(f_min: f64, f_max: f64, n: usize) -> Result<Self> {
        if !positive(f_min) || f_max.is_nan() || f_max <= f_min {
            return Err(Error::invalid(
                "grid",
                format!("need 0 < f_min < f_max, got [{f_min}, {f_max}]"),
            ));
        }
        if n < 2 {
            return Err(Error::invalid("grid", "need at least 2 points"));
        }
        let ratio = f_max / f_min;
        let points = (0..n)
            .map(|i| f_min * ratio.powf(i as f64 / (n - 1) as f64))
            .collect();
        Ok(Self { points })
    }

    /// Log grid densified tenfold within +-10% of each frequency in
    /// `resonances_hz` (pendular, rotational and bending peaks).
    pub fn for_model(f_min: f64, f_max: f64, n: usize, resonances_hz: &[f64]) -> Result<Self> {
        let base = Self::log_spaced(f_min, f_max, n)?;
        let mut points = base.points;
        for &center in resonances_hz {
            let lo = (center * 0.9).max(f_min);
            let hi = (center * 1.1).min(f_max);
            if lo >= hi {
                continue;
            }
            let local = points.iter().filter(|&&f| f >= lo && f <= hi).count();
            let dense = (local * 10).max(20);
            for i in 0..=dense {
                points.push(lo * (hi / lo).powf(i as f64 / dense as f64));
            }
        }
        points.sort_by(|a, b| a.partial_cmp(b).unwrap());
        points.dedup();
        Ok(Self { points })
    }

    /// Grid for a given beam and support: densified at omega_osc,
    /// sqrt(3) omega_osc and the first bending resonance.
    pub fn for_rail(
        f_min: f64,
        f_max: f64,
        n: usize,
        beam: &BeamSpec,
        support: &SupportSpec,
    ) -> Result<Self> {
        let (osc, rot) = support_resonances(beam, support);
        let bend = bending_resonances(beam, 1)?[0];
        let two_pi = 2.0 * std::f64::consts::PI;
        Self::for_model(
            f_min,
            f_max,
            n,
            &[osc / two_pi, rot / two_pi, bend / two_pi],
        )
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// One grid point of the phase-noise PSD, everything in rad^2/Hz per unit
/// p^2. `total` is |Phi_+|^2 + |Phi_-|^2 of the full transfer; the three
/// component columns hold the same quadrature sum of their term alone, so
/// they need not add up to `total` exactly (the terms interfere within each
/// single-support response).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseNoiseSample {
    pub frequency: f64,
    pub total: f64,
    pub bending: f64,
    pub sagnac: f64,
    pub acceleration: f64,
}

/// Frequency-resolved phase-noise PSD per unit p^2.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseNoisePsd {
    samples: Vec<PhaseNoiseSample>,
}

impl PhaseNoisePsd {
    /// Wraps precomputed samples (assumed ordered by frequency).
    pub fn from_samples(samples: Vec<PhaseNoiseSample>) -> Self {
        Self { samples }
    }

    pub fn samples(&self) -> &[PhaseNoiseSample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Writes the CSV interchange format: header
    /// `nu_hz,total,bending,sagnac,acceleration`, one row per grid point.
    pub fn write_csv(&self, mut out: impl Write) -> std::io::Result<()> {
        writeln!(out, "nu_hz,total,bending,sagnac,acceleration")?;
        for s in &self.samples {
            writeln!(
                out,
                "{:.9e},{:.9e},{:.9e},{:.9e},{:.9e}",
                s.frequency, s.total, s.bending, s.sagnac, s.acceleration
            )?;
        }
        Ok(())
    }
}

/// Band-integrated phase variance per unit p^2 (rad^2), total and per term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseVariance {
    pub total: f64,
    pub bending: f64,
    pub sagnac: f64,
    pub acceleration: f64,
}

/// Computes the phase-noise PSD on `grid`, which must lie inside the
/// tabulated band of `spectrum`.
///
/// Each grid frequency drives the solved boundary problem twice, once per
/// support, with the interpolated spectral amplitude; squared magnitudes of
/// the two runs are summed (uncorrelated supports). The Sagnac column keeps
/// only the odd-amplitude term of the transfer.
pub fn phase_noise_psd(
    spectrum: &NoiseSpectrum,
    beam: &BeamSpec,
    support: &SupportSpec,
    ifm: &InterferometerSpec,
    grid: &FrequencyGrid,
) -> Result<PhaseNoisePsd> {
    // unit-excitation responses scaled afterwards by the interpolated input
    // PSD keep the whole pipeline manifestly linear in |x(nu)|^2
    let samples = grid
        .points()
        .iter()
        .map(|&nu| {
            let psd_in = spectrum.interpolate(nu)?;
            let omega = 2.0 * std::f64::consts::PI * nu;
            let response = FrequencyResponse::new(omega, beam, support)?;
            let t_plus = phase_transfer_full(omega, &response.amplitudes(UNIT, NULL), beam, ifm);
            let t_minus = phase_transfer_full(omega, &response.amplitudes(NULL, UNIT), beam, ifm);
            Ok(PhaseNoiseSample {
                frequency: nu,
                total: (t_plus.total.norm_sqr() + t_minus.total.norm_sqr()) * psd_in,
                bending: (t_plus.bending.norm_sqr() + t_minus.bending.norm_sqr()) * psd_in,
                sagnac: (t_plus.sagnac.norm_sqr() + t_minus.sagnac.norm_sqr()) * psd_in,
                acceleration: (t_plus.acceleration.norm_sqr() + t_minus.acceleration.norm_sqr())
                    * psd_in,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PhaseNoisePsd { samples })
}

/// Trapezoidal integral of every PSD column over [f_min, f_max] Hz, with
/// linear end-segment interpolation when the bounds fall between grid
/// points. Returns the variance per unit p^2; the caller scales by p^2.
pub fn integrate_phase_variance(
    psd: &PhaseNoisePsd,
    f_min: f64,
    f_max: f64,
) -> Result<PhaseVariance> {
    let columns = integrate_columns(
        psd.samples
            .iter()
            .map(|s| (s.frequency, [s.total, s.bending, s.sagnac, s.acceleration])),
        f_min,
        f_max,
    )?;
    Ok(PhaseVariance {
        total: columns[0],
        bending: columns[1],
        sagnac: columns[2],
        acceleration: columns[3],
    })
}

/// Root-mean-square rail bending sqrt(integral of |delta(nu)|^2 dnu) over
/// [f_min, f_max], with delta = 2 X(0) - X(L12) - X(-L12) and the same
/// uncorrelated-supports convention as the phase PSD. The evaluation grid
/// is built internally with the default density.
pub fn rms_bending(
    spectrum: &NoiseSpectrum,
    beam: &BeamSpec,
    support: &SupportSpec,
    f_min: f64,
    f_max: f64,
) -> Result<f64> {
    let grid = FrequencyGrid::for_rail(f_min, f_max, DEFAULT_GRID_POINTS, beam, support)?;
    let psd = bending_psd(spectrum, beam, support, &grid)?;
    let integral = integrate_columns(psd.into_iter().map(|(nu, v)| (nu, [v])), f_min, f_max)?;
    Ok(integral[0].sqrt())
}

/// |delta(nu)|^2 in m^2/Hz on the grid, summed over the two unit-support
/// excitations and scaled by the input spectrum.
pub fn bending_psd(
    spectrum: &NoiseSpectrum,
    beam: &BeamSpec,
    support: &SupportSpec,
    grid: &FrequencyGrid,
) -> Result<Vec<(f64, f64)>> {
    let l12 = beam.grating_half_span;
    grid.points()
        .iter()
        .map(|&nu| {
            let psd_in = spectrum.interpolate(nu)?;
            let omega = 2.0 * std::f64::consts::PI * nu;
            let response = FrequencyResponse::new(omega, beam, support)?;
            let mut sum = 0.0;
            for (xp, xm) in [(UNIT, NULL), (NULL, UNIT)] {
                let amps = response.amplitudes(xp, xm);
                let delta =
                    2.0 * rail_shape(0.0, &amps) - rail_shape(l12, &amps) - rail_shape(-l12, &amps);
                sum += delta.norm_sqr();
            }
            Ok((nu, sum * psd_in))
        })
        .collect()
}

fn integrate_columns<const N: usize>(
    rows: impl Iterator<Item = (f64, [f64; N])>,
    f_min: f64,
    f_max: f64,
) -> Result<[f64; N]> {
    let rows: Vec<_> = rows.collect();
    if f_min.is_nan() || f_max.is_nan() || f_min >= f_max {
        return Err(Error::EmptyRange { f_min, f_max });
    }
    let grid_lo = rows.first().map(|r| r.0).unwrap_or(f64::NAN);
    let grid_hi = rows.last().map(|r| r.0).unwrap_or(f64::NAN);
    if rows.len() < 2 || f_min < grid_lo || f_max > grid_hi {
        return Err(Error::invalid(
            "integration bounds",
            format!("[{f_min}, {f_max}] not inside the PSD grid [{grid_lo}, {grid_hi}]"),
        ));
    }
    let value_at = |nu: f64| -> [f64; N] {
        let idx = rows.partition_point(|r| r.0 < nu);
        if idx < rows.len() && rows[idx].0 == nu {
            return rows[idx].1;
        }
        let (f0, v0) = rows[idx - 1];
        let (f1, v1) = rows[idx];
        let t = (nu - f0) / (f1 - f0);
        std::array::from_fn(|k| v0[k] + t * (v1[k] - v0[k]))
    };

    let mut acc = [0.0; N];
    let mut prev: (f64, [f64; N]) = (f_min, value_at(f_min));
    for &(nu, values) in rows.iter().filter(|r| r.0 > f_min && r.0 < f_max) {
        let h = nu - prev.0;
        for (slot, (lo, hi)) in acc.iter_mut().zip(prev.1.iter().zip(&values)) {
            *slot += 0.5 * h * (lo + hi);
        }
        prev = (nu, values);
    }
    let end = (f_max, value_at(f_max));
    let h = end.0 - prev.0;
    for (slot, (lo, hi)) in acc.iter_mut().zip(prev.1.iter().zip(&end.1)) {
        *slot += 0.5 * h * (lo + hi);
    }
    Ok(acc)
}
