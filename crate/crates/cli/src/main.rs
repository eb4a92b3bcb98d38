//! Command-line front end for the rail vibration phase-noise model.
//!
//! Subcommands cover each pipeline stage: `resonances` for the mode map of
//! a configured rail, `phase-spectrum` for the frequency-resolved
//! phase-noise PSD (CSV and optional SVG), `integrate` for band-integrated
//! phase variance, rms bending and the predicted visibility table,
//! `fit-visibility` for the Gaussian visibility-versus-order fit, and
//! `predict-visibility` for the end-to-end forecast.
//!
//! Exit codes: 0 on success, 1 on validation errors (command line, config,
//! data content), 2 on I/O errors.

mod config;
mod plot;
mod report;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use railnoise_core::fit_visibility;

use config::ModelConfig;
use report::IntegrateInputs;

#[derive(Debug)]
pub enum CliError {
    Validation(String),
    Io(String),
}

impl CliError {
    fn validation(message: impl Into<String>) -> Self {
        CliError::Validation(message.into())
    }

    fn io(message: impl Into<String>) -> Self {
        CliError::Io(message.into())
    }

    fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<railnoise_core::Error> for CliError {
    fn from(err: railnoise_core::Error) -> Self {
        match err {
            railnoise_core::Error::Io(_) => CliError::Io(err.to_string()),
            _ => CliError::Validation(err.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "railnoise",
    version,
    about = "Vibration-induced phase noise of a grating-rail Mach-Zehnder interferometer"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the support and bending resonances of the configured rail
    Resonances {
        /// Model configuration file (section.key = value lines)
        #[arg(long)]
        config: PathBuf,
        /// Number of bending modes to list
        #[arg(long, default_value_t = 3)]
        modes: usize,
    },
    /// Compute the phase-noise PSD and write it as CSV (optionally SVG)
    PhaseSpectrum {
        #[arg(long)]
        config: PathBuf,
        /// Seismic displacement PSD file (nu psd lines)
        #[arg(long)]
        psd: PathBuf,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Optional log-log plot of the result
        #[arg(long)]
        svg: Option<PathBuf>,
        /// Override pipeline.f_min (Hz)
        #[arg(long)]
        fmin: Option<f64>,
        /// Override pipeline.f_max (Hz)
        #[arg(long)]
        fmax: Option<f64>,
        /// Override pipeline.grid_points
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Integrate the phase-noise PSD: variance, rms bending, visibility
    Integrate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        psd: PathBuf,
        #[arg(long)]
        fmin: Option<f64>,
        #[arg(long)]
        fmax: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
        /// Highest diffraction order in the visibility table
        #[arg(long, default_value_t = 3)]
        order: u32,
        /// Zero-noise visibility used for the table
        #[arg(long, default_value_t = 1.0)]
        vmax: f64,
    },
    /// Fit visibility-versus-order data with the Gaussian decay model
    FitVisibility {
        /// Data file: `p V [sigma_V]` lines
        data: PathBuf,
        /// Optional plot of the data and the fitted curve
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Predict the visibility-versus-order table from config and spectrum
    PredictVisibility {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        psd: PathBuf,
        #[arg(long)]
        fmin: Option<f64>,
        #[arg(long)]
        fmax: Option<f64>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, default_value_t = 5)]
        order: u32,
        #[arg(long, default_value_t = 1.0)]
        vmax: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                ErrorKind::DisplayHelp
                    | ErrorKind::DisplayVersion
                    | ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand
            ) =>
        {
            print!("{err}");
            return ExitCode::SUCCESS;
        }
        Err(err) => {
            eprint!("{err}");
            return ExitCode::from(1);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Resonances { config, modes } => {
            let model = ModelConfig::load(&config)?.resolve()?;
            print!("{}", report::resonances_report(&model, modes)?);
            Ok(())
        }
        Command::PhaseSpectrum {
            config,
            psd,
            out,
            svg,
            fmin,
            fmax,
            grid,
        } => {
            let model = load_model(&config, fmin, fmax, grid)?;
            let spectrum = report::prepare_spectrum(&model, &psd)?;
            let eval_grid = report::build_grid(&model)?;
            let noise = report::compute_psd(&model, &spectrum, &eval_grid)?;

            let mut csv = Vec::new();
            noise
                .write_csv(&mut csv)
                .map_err(|e| CliError::io(format!("cannot format CSV: {e}")))?;
            write_output(&out, &csv)?;
            println!("wrote {} rows to {}", noise.len(), out.display());

            if let Some(svg_path) = svg {
                let curves = spectrum_curves(&noise, &spectrum);
                let body = plot::log_log_svg(
                    "phase noise spectrum per unit order",
                    "frequency (Hz)",
                    "PSD",
                    &curves,
                );
                write_output(&svg_path, body.as_bytes())?;
                println!("wrote plot to {}", svg_path.display());
            }
            Ok(())
        }
        Command::Integrate {
            config,
            psd,
            fmin,
            fmax,
            grid,
            order,
            vmax,
        } => {
            let model = load_model(&config, fmin, fmax, grid)?;
            let inputs = IntegrateInputs {
                config_path: &config,
                psd_path: &psd,
                max_order: order,
                v_max: validated_vmax(vmax)?,
            };
            print!("{}", report::integrate_report(&model, &inputs)?);
            Ok(())
        }
        Command::FitVisibility { data, svg } => {
            let points = report::parse_visibility_file(&data)?;
            let fit = fit_visibility(&points)?;
            print!("{}", report::fit_report(&points, &fit));
            if let Some(svg_path) = svg {
                let dots: Vec<(f64, f64, Option<f64>)> = points
                    .iter()
                    .map(|p| (p.order as f64, p.visibility, p.sigma))
                    .collect();
                let max_order = points.iter().map(|p| p.order).max().unwrap_or(1);
                let curve: Vec<(f64, f64)> = (0..=40)
                    .map(|i| {
                        let p = i as f64 * (max_order as f64 + 0.5) / 40.0;
                        (p, fit.v_max * (-p * p * fit.phi1_sq / 2.0).exp())
                    })
                    .collect();
                let body =
                    plot::visibility_svg("fringe visibility vs diffraction order", &dots, &curve);
                write_output(&svg_path, body.as_bytes())?;
                println!("wrote plot to {}", svg_path.display());
            }
            Ok(())
        }
        Command::PredictVisibility {
            config,
            psd,
            fmin,
            fmax,
            grid,
            order,
            vmax,
        } => {
            let model = load_model(&config, fmin, fmax, grid)?;
            let inputs = IntegrateInputs {
                config_path: &config,
                psd_path: &psd,
                max_order: order,
                v_max: validated_vmax(vmax)?,
            };
            print!("{}", report::predict_visibility_report(&model, &inputs)?);
            Ok(())
        }
    }
}

fn load_model(
    config: &Path,
    fmin: Option<f64>,
    fmax: Option<f64>,
    grid: Option<usize>,
) -> Result<config::ResolvedModel, CliError> {
    let mut parsed = ModelConfig::load(config)?;
    if fmin.is_some() {
        parsed.f_min = fmin;
    }
    if fmax.is_some() {
        parsed.f_max = fmax;
    }
    if grid.is_some() {
        parsed.grid_points = grid;
    }
    parsed.resolve()
}

fn validated_vmax(vmax: f64) -> Result<f64, CliError> {
    if (0.0..=1.0).contains(&vmax) && vmax > 0.0 {
        Ok(vmax)
    } else {
        Err(CliError::validation(format!(
            "--vmax must lie in (0, 1], got {vmax}"
        )))
    }
}

fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    fs::write(path, bytes)
        .map_err(|e| CliError::io(format!("cannot write {}: {e}", path.display())))
}

/// Overlay of the computed total and Sagnac phase PSDs with the input
/// spectrum scaled by 1e10 so all three fit one panel.
fn spectrum_curves(
    noise: &railnoise_core::PhaseNoisePsd,
    input: &railnoise_core::NoiseSpectrum,
) -> Vec<plot::Curve> {
    vec![
        plot::Curve {
            label: "|Phi(nu)/p|^2 (rad^2/Hz)".into(),
            points: noise
                .samples()
                .iter()
                .map(|s| (s.frequency, s.total))
                .collect(),
            color: "#000000",
            dash: "",
        },
        plot::Curve {
            label: "Sagnac term (rad^2/Hz)".into(),
            points: noise
                .samples()
                .iter()
                .map(|s| (s.frequency, s.sagnac))
                .collect(),
            color: "#1f77b4",
            dash: "2,3",
        },
        plot::Curve {
            label: "input |x(nu)|^2 x 1e10 (m^2/Hz)".into(),
            points: input
                .samples()
                .iter()
                .map(|&(nu, psd)| (nu, psd * 1e10))
                .collect(),
            color: "#d62728",
            dash: "7,4",
        },
    ]
}
