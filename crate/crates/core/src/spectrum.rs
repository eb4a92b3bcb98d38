//! Seismic-noise spectra: file ingestion, envelope smoothing, band
//! extension and in-band interpolation.
//!
//! Spectra are one-sided power spectral densities |x(nu)|^2 in m^2/Hz on a
//! strictly increasing frequency grid; integrating over frequency gives the
//! displacement variance. The file format is plain text: `#` starts a
//! comment, blank lines are skipped, data lines hold `nu psd` in Hz and
//! m^2/Hz (scientific notation accepted).

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// One-sided displacement PSD on a strictly increasing frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct NoiseSpectrum {
    samples: Vec<(f64, f64)>,
    /// Free-form provenance note carried into reports.
    pub source: String,
}

impl NoiseSpectrum {
    /// Validates and wraps `(frequency Hz, psd m^2/Hz)` samples.
    pub fn new(samples: Vec<(f64, f64)>, source: impl Into<String>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::SpectrumInvalid {
                line: 0,
                reason: "spectrum holds no samples".into(),
            });
        }
        let mut prev = 0.0;
        for (i, &(nu, psd)) in samples.iter().enumerate() {
            let line = i + 1;
            if !nu.is_finite() || nu <= 0.0 {
                return Err(Error::SpectrumInvalid {
                    line,
                    reason: format!("frequency {nu} must be finite and > 0"),
                });
            }
            if nu <= prev {
                return Err(Error::SpectrumInvalid {
                    line,
                    reason: format!("frequency {nu} not strictly increasing (previous {prev})"),
                });
            }
            if !psd.is_finite() || psd < 0.0 {
                return Err(Error::SpectrumInvalid {
                    line,
                    reason: format!("psd {psd} must be finite and >= 0"),
                });
            }
            prev = nu;
        }
        Ok(Self {
            samples,
            source: source.into(),
        })
    }

    pub fn samples(&self) -> &[(f64, f64)] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Lowest tabulated frequency (Hz).
    pub fn min_frequency(&self) -> f64 {
        self.samples[0].0
    }

    /// Highest tabulated frequency (Hz).
    pub fn max_frequency(&self) -> f64 {
        self.samples[self.samples.len() - 1].0
    }

    /// Interpolates the PSD at `nu`, linearly in (log nu, log psd); a
    /// bracket touching a zero sample falls back to linear-linear so that
    /// zeros stay exact. Outside the tabulated band this is an error.
    pub fn interpolate(&self, nu: f64) -> Result<f64> {
        let (lo, hi) = (self.min_frequency(), self.max_frequency());
        if !(nu >= lo && nu <= hi) {
            return Err(Error::OutsideSpectrum { nu, lo, hi });
        }
        let idx = self.samples.partition_point(|&(f, _)| f < nu);
        if idx == 0 {
            return Ok(self.samples[0].1);
        }
        if let Some(&(f, p)) = self.samples.get(idx) {
            if f == nu {
                return Ok(p);
            }
        }
        let (f0, p0) = self.samples[idx - 1];
        let (f1, p1) = self.samples[idx];
        if p0 > 0.0 && p1 > 0.0 {
            let t = (nu.ln() - f0.ln()) / (f1.ln() - f0.ln());
            Ok((p0.ln() + t * (p1.ln() - p0.ln())).exp())
        } else {
            let t = (nu - f0) / (f1 - f0);
            Ok(p0 + t * (p1 - p0))
        }
    }

    /// Loads a spectrum from the two-column text format.
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        Self::parse(&text, path.display().to_string())
    }

    /// Parses the two-column text format; `source` is recorded verbatim.
    pub fn parse(text: &str, source: impl Into<String>) -> Result<Self> {
        let mut samples = Vec::new();
        let mut prev: Option<f64> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let mut fields = content.split_whitespace();
            let nu: f64 = parse_field(fields.next(), line, "frequency")?;
            let psd: f64 = parse_field(fields.next(), line, "psd")?;
            if let Some(extra) = fields.next() {
                return Err(Error::SpectrumParse {
                    line,
                    reason: format!("unexpected trailing field {extra:?}"),
                });
            }
            if !nu.is_finite() || nu <= 0.0 {
                return Err(Error::SpectrumInvalid {
                    line,
                    reason: format!("frequency {nu} must be finite and > 0"),
                });
            }
            if let Some(p) = prev {
                if nu <= p {
                    return Err(Error::SpectrumInvalid {
                        line,
                        reason: format!("frequency {nu} not strictly increasing (previous {p})"),
                    });
                }
            }
            if !psd.is_finite() || psd < 0.0 {
                return Err(Error::SpectrumInvalid {
                    line,
                    reason: format!("psd {psd} must be finite and >= 0"),
                });
            }
            prev = Some(nu);
            samples.push((nu, psd));
        }
        if samples.is_empty() {
            return Err(Error::SpectrumInvalid {
                line: 0,
                reason: "no data lines found".into(),
            });
        }
        Ok(Self {
            samples,
            source: source.into(),
        })
    }

    /// Every sample scaled by `factor`; used for linearity checks and unit
    /// conversions.
    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            samples: self
                .samples
                .iter()
                .map(|&(nu, psd)| (nu, psd * factor))
                .collect(),
            source: self.source.clone(),
        }
    }
}

fn parse_field(field: Option<&str>, line: usize, name: &str) -> Result<f64> {
    let text = field.ok_or_else(|| Error::SpectrumParse {
        line,
        reason: format!("missing {name} column"),
    })?;
    text.parse().map_err(|_| Error::SpectrumParse {
        line,
        reason: format!("cannot parse {name} {text:?} as a number"),
    })
}

/// Replaces the spectrum by its running maximum over a log-frequency window
/// `window_octaves` wide (half the window on each side), so that narrow
/// peaks become plateaus and the output lies at or above the input
/// everywhere.
pub fn smooth_envelope(spectrum: &NoiseSpectrum, window_octaves: f64) -> NoiseSpectrum {
    assert!(window_octaves > 0.0, "smoothing window must be > 0 octaves");
    let half = window_octaves / 2.0;
    let samples = spectrum.samples();
    let smoothed = samples
        .iter()
        .map(|&(nu, _)| {
            let lo = nu * 0.5_f64.powf(half);
            let hi = nu * 2.0_f64.powf(half);
            let peak = samples
                .iter()
                .filter(|&&(f, _)| f >= lo && f <= hi)
                .map(|&(_, p)| p)
                .fold(0.0, f64::max);
            (nu, peak)
        })
        .collect();
    NoiseSpectrum {
        samples: smoothed,
        source: spectrum.source.clone(),
    }
}

/// Extends the spectrum at a constant PSD (the last in-band value) up to
/// `f_hi`, appending log-spaced samples; in-band samples are untouched.
pub fn extend_constant(spectrum: &NoiseSpectrum, f_hi: f64) -> Result<NoiseSpectrum> {
    let f_max = spectrum.max_frequency();
    if f_hi.is_nan() || f_hi <= f_max {
        return Err(Error::invalid(
            "extend_constant.f_hi",
            format!("must exceed the current band edge {f_max} Hz"),
        ));
    }
    let tail_value = spectrum.samples[spectrum.samples.len() - 1].1;
    let mut samples = spectrum.samples.clone();
    // ~16 points per decade keeps plots smooth; interpolation is exact on
    // a constant stretch regardless of the count
    let decades = (f_hi / f_max).log10();
    let count = ((decades * 16.0).ceil() as usize).max(1);
    for i in 1..=count {
        let nu = f_max * (f_hi / f_max).powf(i as f64 / count as f64);
        samples.push((nu, tail_value));
    }
    NoiseSpectrum::new(samples, spectrum.source.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn parses_two_columns() {
        let s = NoiseSpectrum::parse("1.0 1e-12\n10.0 1e-14", "test").unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.samples()[1], (10.0, 1e-14));
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let text = "# header\n\n1.0 1e-12  # trailing comment\n  \n2.0 2e-12\n";
        let s = NoiseSpectrum::parse(text, "test").unwrap();
        assert_eq!(s.len(), 2);
    }

    #[test]
    fn monotonicity_violation_reports_line() {
        let err = NoiseSpectrum::parse("10.0 1e-12\n1.0 1e-12", "test").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 2"), "{msg}");
        assert!(msg.contains("increasing"), "{msg}");
    }

    #[test]
    fn malformed_line_reports_line() {
        let err = NoiseSpectrum::parse("1.0 1e-12\nbogus 2e-12", "test").unwrap_err();
        assert!(err.to_string().contains("line 2"));
        let err = NoiseSpectrum::parse("1.0", "test").unwrap_err();
        assert!(err.to_string().contains("missing psd"));
        let err = NoiseSpectrum::parse("1.0 1e-12 7", "test").unwrap_err();
        assert!(err.to_string().contains("trailing"));
    }

    #[test]
    fn negative_psd_rejected() {
        let err = NoiseSpectrum::parse("1.0 -1e-12", "test").unwrap_err();
        assert!(err.to_string().contains("psd"));
    }

    #[test]
    fn interpolation_is_loglog_linear() {
        let s = NoiseSpectrum::new(vec![(1.0, 1e-10), (100.0, 1e-14)], "t").unwrap();
        // power law nu^-2 through both points
        assert_relative_eq!(s.interpolate(10.0).unwrap(), 1e-12, max_relative = 1e-12);
        assert_relative_eq!(s.interpolate(1.0).unwrap(), 1e-10, max_relative = 1e-15);
        assert_relative_eq!(s.interpolate(100.0).unwrap(), 1e-14, max_relative = 1e-15);
        assert!(s.interpolate(0.5).is_err());
        assert!(s.interpolate(101.0).is_err());
    }

    #[test]
    fn zero_samples_interpolate_linearly() {
        let s = NoiseSpectrum::new(vec![(1.0, 0.0), (2.0, 4.0)], "t").unwrap();
        assert_relative_eq!(s.interpolate(1.5).unwrap(), 2.0, max_relative = 1e-14);
        assert_eq!(s.interpolate(1.0).unwrap(), 0.0);
    }

    #[test]
    fn envelope_of_flat_spectrum_is_identity() {
        let flat: Vec<_> = (1..20).map(|i| (i as f64, 3.0e-13)).collect();
        let s = NoiseSpectrum::new(flat, "t").unwrap();
        assert_eq!(smooth_envelope(&s, 0.5).samples(), s.samples());
    }

    #[test]
    fn envelope_spreads_spikes_and_dominates_input() {
        let mut samples: Vec<_> = (0..60)
            .map(|i| (10.0_f64.powf(i as f64 / 20.0), 1e-14))
            .collect();
        samples[30].1 = 5e-12; // narrow spike
        let s = NoiseSpectrum::new(samples, "t").unwrap();
        let smoothed = smooth_envelope(&s, 0.5);
        let mut plateau = 0;
        for (&(_, raw), &(_, out)) in s.samples().iter().zip(smoothed.samples()) {
            assert!(out >= raw);
            if out == 5e-12 {
                plateau += 1;
            }
        }
        // 0.5 octave window over a 3-decade/60-point grid spans ~3 samples
        assert!(plateau >= 3, "plateau width {plateau}");
    }

    #[test]
    fn extension_is_constant_and_preserves_band() {
        let s = NoiseSpectrum::new(vec![(1.0, 1e-12), (100.0, 7e-15)], "t").unwrap();
        let extended = extend_constant(&s, 1000.0).unwrap();
        assert_eq!(&extended.samples()[..2], s.samples());
        assert!(extended.max_frequency() >= 999.9);
        for &(nu, psd) in &extended.samples()[2..] {
            assert!(nu > 100.0);
            assert_eq!(psd, 7e-15);
        }
        assert_relative_eq!(
            extended.interpolate(550.0).unwrap(),
            7e-15,
            max_relative = 1e-12
        );
    }

    #[test]
    fn extension_below_band_edge_is_rejected() {
        let s = NoiseSpectrum::new(vec![(1.0, 1e-12), (100.0, 7e-15)], "t").unwrap();
        assert!(extend_constant(&s, 50.0).is_err());
        assert!(extend_constant(&s, 100.0).is_err());
    }

    #[test]
    fn scaling_scales_samples() {
        let s = NoiseSpectrum::new(vec![(1.0, 2.0), (2.0, 4.0)], "t").unwrap();
        let scaled = s.scaled(10.0);
        assert_eq!(scaled.samples()[0].1, 20.0);
        assert_eq!(scaled.samples()[1].1, 40.0);
    }
}
