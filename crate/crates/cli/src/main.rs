//! Command-line front end: synthesis, forward NFT, closed-form truncated
//! spectra, eigenvalue recovery from the continuous spectrum, and ensembles.
//!
//! Exit status: 0 on success, 2 on invalid input, 3 on numerical failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use soliton_nft::experiment::{run_experiment, ExperimentConfig};
use soliton_nft::inversion::{allpass_with_edge_tol, count_eigenvalues, fit_eigenvalues};
use soliton_nft::io::{self, ScatteringSection};
use soliton_nft::scattering::{continuous_spectrum, discrete_amplitudes, find_eigenvalues, DEFAULT_SAMPLES};
use soliton_nft::soliton::synthesize;
use soliton_nft::spectra::{DiscreteSpectrum, FrequencyGrid, SpectralEntry, TimeGrid};
use soliton_nft::truncation::{analytic_b_values, analytic_eigenvalues_default, truncated_spectrum};
use soliton_nft::{Complex64, NftError, Result};

#[derive(Parser)]
#[command(name = "soliton-nft", version, about = "Nonlinear Fourier analysis of truncated soliton pulses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GridArgs {
    /// Half-width of the frequency grid.
    #[arg(long, default_value_t = 20.0)]
    omega_max: f64,
    /// Number of frequency samples.
    #[arg(long, default_value_t = 4096)]
    count: usize,
}

impl GridArgs {
    fn grid(&self) -> Result<FrequencyGrid<f64>> {
        FrequencyGrid::new(self.omega_max, self.count)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Discrete spectrum JSON to pulse CSV.
    Synthesize {
        spectrum: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Samples on [-span, span].
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
        #[arg(long, default_value_t = 12.0)]
        span: f64,
    },
    /// Pulse CSV to discrete spectrum JSON and continuous spectrum CSV.
    Nft {
        signal: PathBuf,
        /// Output directory; receives spectrum.json and continuous.csv.
        #[arg(long)]
        out: PathBuf,
        /// TOML file with a [scattering] table.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Newton seeds, comma separated, each `im` or `re:im`. Defaults to a
        /// scan of the imaginary axis up to half the peak amplitude.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<String>,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Closed-form spectrum of a truncated pulse from a model JSON.
    TruncateAnalytic {
        model: PathBuf,
        /// Output directory; receives spectrum.json and continuous.csv.
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        grid: GridArgs,
    },
    /// Eigenvalues from a continuous spectrum CSV via the all-pass factor.
    EigsFromContinuous {
        continuous: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Fit seeds (`im` or `re:im`); default `0.5j, 1j, ...`.
        #[arg(long, value_delimiter = ',')]
        seeds: Vec<String>,
        /// Allowed `|ln(1 - |b|^2)|` at the grid edges.
        #[arg(long, default_value_t = 1e-4)]
        edge_tol: f64,
    },
    /// Random-phase truncation ensemble from a TOML configuration.
    Experiment {
        config: PathBuf,
        /// Overrides `rng_seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides `n_trials`.
        #[arg(long)]
        trials: Option<usize>,
        /// Overrides `output_dir`.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_seeds(raw: &[String]) -> Result<Vec<Complex64>> {
    raw.iter()
        .map(|s| {
            let bad = || NftError::InvalidInput(format!("cannot parse seed '{s}'"));
            let parts: Vec<&str> = s.trim().split(':').collect();
            let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad());
            match parts.as_slice() {
                [im] => Ok(Complex64::new(0.0, num(im)?)),
                [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
                _ => Err(bad()),
            }
        })
        .collect()
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text)?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Synthesize {
            spectrum,
            out,
            samples,
            span,
        } => {
            let ds = io::read_spectrum(&spectrum)?;
            let sig = synthesize(&ds, TimeGrid::cell_centered(-span, span, samples)?)?;
            io::write_signal(&out, &sig)
        }
        Command::Nft {
            signal,
            out,
            config,
            seeds,
            grid,
        } => {
            let sig = io::read_signal(&signal)?;
            let section = match config {
                Some(p) => io::scattering_from_toml(&std::fs::read_to_string(p)?)?,
                None => ScatteringSection::default(),
            };
            let cfg = section.to_config()?;
            let mut seeds = parse_seeds(&seeds)?;
            if seeds.is_empty() {
                let top = sig.peak() / 2.0 + 0.5;
                let n = (top / 0.1).ceil() as usize;
                seeds = (1..=n).map(|k| Complex64::new(0.0, 0.1 * k as f64)).collect();
            }
            let cs = continuous_spectrum(&sig, grid.grid()?, &cfg)?;
            let search = find_eigenvalues(&sig, &seeds, &cfg)?;
            let entries = discrete_amplitudes(&sig, &search.roots, &cfg)?
                .into_iter()
                .map(|d| SpectralEntry { lambda: d.lambda, b: d.b })
                .collect();
            std::fs::create_dir_all(&out)?;
            io::write_spectrum(&out.join("spectrum.json"), &DiscreteSpectrum::new(entries)?)?;
            io::write_continuous(&out.join("continuous.csv"), &cs)
        }
        Command::TruncateAnalytic { model, out, grid } => {
            let m = io::parse_model_json(&std::fs::read_to_string(model)?)?;
            if !m.in_contract() {
                return Err(NftError::InvalidInput(format!(
                    "T = {} does not exceed t0 = {}",
                    m.truncation(),
                    m.t0()
                )));
            }
            let cs = truncated_spectrum(&m, grid.grid()?)?;
            let eigs = analytic_eigenvalues_default(&m)?;
            let b = analytic_b_values(&eigs, &m)?;
            let ds = DiscreteSpectrum::new(
                eigs.into_iter()
                    .zip(b)
                    .map(|(lambda, b)| SpectralEntry { lambda, b })
                    .collect(),
            )?;
            std::fs::create_dir_all(&out)?;
            io::write_spectrum(&out.join("spectrum.json"), &ds)?;
            io::write_continuous(&out.join("continuous.csv"), &cs)
        }
        Command::EigsFromContinuous {
            continuous,
            out,
            seeds,
            edge_tol,
        } => {
            let cs = io::read_continuous(&continuous)?;
            let g = allpass_with_edge_tol(&cs, edge_tol)?;
            let n = count_eigenvalues(&g)?;
            let mut seeds = parse_seeds(&seeds)?;
            if seeds.is_empty() {
                seeds = (1..=n).map(|k| Complex64::new(0.0, 0.5 * k as f64)).collect();
            }
            let report = fit_eigenvalues(&cs.omegas(), &g, n, &seeds)?;
            write_text(&out, &io::fit_report_to_json(&report)?)
        }
        Command::Experiment {
            config,
            seed,
            trials,
            out,
        } => {
            let mut cfg = ExperimentConfig::from_toml(&std::fs::read_to_string(config)?)?;
            if let Some(s) = seed {
                cfg.rng_seed = s;
            }
            if let Some(t) = trials {
                cfg.n_trials = t;
            }
            if let Some(o) = out {
                cfg.output_dir = o;
            }
            let report = run_experiment(&cfg)?;
            report.write(&cfg.output_dir)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_validation() { 2 } else { 3 })
        }
    }
}
