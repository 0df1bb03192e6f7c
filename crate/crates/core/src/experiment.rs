//! Random-phase truncation ensembles: numerical NFT of truncated
//! multi-soliton pulses against the closed-form truncation model.

use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{NftError, Result};
use crate::io::ScatteringSection;
use crate::scalar::Cplx;
use crate::scattering::{
    continuous_spectrum, discrete_amplitudes, energy_continuous_with_edge_tol, find_eigenvalues, trapezoid,
    ScatterConfig, Scheme,
};
use crate::soliton::synthesize;
use crate::spectra::{ComplexPoint, ContinuousSpectrum, DiscreteSpectrum, FrequencyGrid, TimeGrid, TimeSignal};
use crate::truncation::{analytic_b_values, analytic_eigenvalues_default, truncated_spectrum, TruncationModel};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OmegaGridSpec {
    pub max: f64,
    pub count: usize,
}

impl Default for OmegaGridSpec {
    fn default() -> Self {
        Self { max: 20.0, count: 4096 }
    }
}

fn default_samples() -> usize {
    10_000
}

fn default_time_span() -> f64 {
    12.0
}

fn default_edge_tol() -> f64 {
    1e-4
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("report")
}

fn experiment_scattering() -> ScatteringSection {
    ScatteringSection {
        scheme: Scheme::ForwardBackwardSplit.to_string(),
        ..ScatteringSection::default()
    }
}

/// Ensemble configuration, read from TOML.
///
/// Each pulse is sampled with `samples_per_pulse` points over
/// `[-time_span, time_span]`; a truncation at `T` keeps the cells of that
/// spacing that tile `[-T, T]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub sigmas: Vec<f64>,
    #[serde(rename = "T_values")]
    pub t_values: Vec<f64>,
    pub n_trials: usize,
    pub rng_seed: u64,
    #[serde(default = "default_samples")]
    pub samples_per_pulse: usize,
    #[serde(default = "default_time_span")]
    pub time_span: f64,
    #[serde(default)]
    pub omega_grid_spec: OmegaGridSpec,
    /// Where the report goes; not part of the report itself.
    #[serde(default = "default_output_dir", skip_serializing)]
    pub output_dir: PathBuf,
    /// Edge tolerance on `|ln |a|^2|` for the energy integral.
    #[serde(default = "default_edge_tol")]
    pub edge_tol: f64,
    #[serde(default = "experiment_scattering")]
    pub scattering: ScatteringSection,
}

impl ExperimentConfig {
    /// The standard four-soliton study.
    pub fn standard(t_values: Vec<f64>, n_trials: usize, rng_seed: u64) -> Self {
        Self {
            sigmas: vec![0.5, 1.0, 1.5, 2.0],
            t_values,
            n_trials,
            rng_seed,
            samples_per_pulse: default_samples(),
            time_span: default_time_span(),
            omega_grid_spec: OmegaGridSpec::default(),
            output_dir: default_output_dir(),
            edge_tol: default_edge_tol(),
            scattering: experiment_scattering(),
        }
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_trials < 1 {
            return Err(NftError::InvalidInput("n_trials must be at least 1".into()));
        }
        if self.t_values.is_empty() {
            return Err(NftError::InvalidInput("T_values is empty".into()));
        }
        if self.samples_per_pulse < 2 {
            return Err(NftError::InvalidInput("samples_per_pulse must be at least 2".into()));
        }
        if !(self.time_span > 0.0 && self.edge_tol > 0.0) {
            return Err(NftError::InvalidInput("time_span and edge_tol must be positive".into()));
        }
        FrequencyGrid::new(self.omega_grid_spec.max, self.omega_grid_spec.count)?;
        self.scattering.to_config()?;
        for &t in &self.t_values {
            let m = TruncationModel::new(&self.sigmas, 0.0, t)?;
            if !m.in_contract() {
                return Err(NftError::InvalidInput(format!(
                    "T = {t} does not exceed t0 = {:.6}",
                    m.t0()
                )));
            }
            if t > self.time_span {
                return Err(NftError::InvalidInput(format!(
                    "T = {t} exceeds the sampled span {}",
                    self.time_span
                )));
            }
        }
        Ok(())
    }

    fn dt(&self) -> f64 {
        2.0 * self.time_span / self.samples_per_pulse as f64
    }
}

/// Phases of trial `trial`: stream `trial` of a ChaCha8 generator keyed by
/// `seed`, so each trial is reproducible on its own.
pub fn trial_phases(seed: u64, trial: usize, n: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    (0..n).map(|_| rng.random::<f64>() * TAU).collect()
}

/// Outcome of one trial at one truncation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationRecord {
    #[serde(rename = "T")]
    pub truncation: f64,
    /// Newton roots, ascending imaginary part.
    pub eig_num: Vec<ComplexPoint<f64>>,
    pub eig_anal: Vec<ComplexPoint<f64>>,
    /// `b` at each entry of `eig_num`.
    pub b_num: Vec<Cplx<f64>>,
    /// `b` at each entry of `eig_anal`; `None` where the branch choice is
    /// ambiguous.
    pub b_anal: Vec<Option<Cplx<f64>>>,
    /// `pairing[k]` indexes `eig_num` for `eig_anal[k]`; `None` flags a lost
    /// or spurious eigenvalue.
    pub pairing: Option<Vec<usize>>,
    pub eg_num: f64,
    pub eg_anal: f64,
    pub l2_a: f64,
    pub l2_b: f64,
    pub energy_balance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial_id: usize,
    pub phases: Vec<f64>,
    /// One entry per truncation; `Err` carries the failure message.
    pub per_t: Vec<std::result::Result<TruncationRecord, String>>,
}

/// Ensemble statistics at one truncation. Per-eigenvalue vectors are indexed
/// by ascending `sigma`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruncationSummary {
    #[serde(rename = "T")]
    pub truncation: f64,
    pub n_ok: usize,
    pub n_failed: usize,
    /// Trials whose numerical roots could not be paired one-to-one.
    pub n_lost: usize,
    pub mean_lambda_num: Vec<f64>,
    pub mean_lambda_anal: Vec<f64>,
    pub eg_num: f64,
    pub eg_anal: f64,
    pub nmse_lambda: Vec<f64>,
    pub nmse_b: Vec<f64>,
    pub nmse_arg_b1: f64,
    pub l2_a: f64,
    pub l2_b: f64,
    pub energy_balance_mean: f64,
    pub energy_balance_max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleReport {
    pub config: ExperimentConfig,
    pub summaries: Vec<TruncationSummary>,
    pub trials: Vec<TrialRecord>,
}

/// `(1/|lambda_ref|^2) mean |analytic - numerical_i|^2`.
pub fn nmse_eigenvalue(analytic: ComplexPoint<f64>, numerical: &[ComplexPoint<f64>], lambda_ref: ComplexPoint<f64>) -> f64 {
    if numerical.is_empty() {
        return f64::NAN;
    }
    let mse = numerical.iter().map(|z| (analytic - z).norm_sqr()).sum::<f64>() / numerical.len() as f64;
    mse / lambda_ref.norm_sqr()
}

/// `mean |analytic_i / numerical_i - 1|^2` over paired samples.
pub fn nmse_b(analytic: &[Cplx<f64>], numerical: &[Cplx<f64>]) -> Result<f64> {
    if analytic.len() != numerical.len() {
        return Err(NftError::GridMismatch(format!(
            "{} analytic against {} numerical values",
            analytic.len(),
            numerical.len()
        )));
    }
    if numerical.is_empty() {
        return Ok(f64::NAN);
    }
    let mut sum = 0.0;
    for (a, n) in analytic.iter().zip(numerical) {
        if n.norm() == 0.0 {
            return Err(NftError::Division("numerical b is zero".into()));
        }
        sum += (a / n - 1.0).norm_sqr();
    }
    Ok(sum / numerical.len() as f64)
}

/// `mean |arg(analytic_i / numerical_i)|^2`.
pub fn nmse_arg(analytic: &[Cplx<f64>], numerical: &[Cplx<f64>]) -> Result<f64> {
    if analytic.len() != numerical.len() {
        return Err(NftError::GridMismatch("length mismatch".into()));
    }
    if numerical.is_empty() {
        return Ok(f64::NAN);
    }
    let mut sum = 0.0;
    for (a, n) in analytic.iter().zip(numerical) {
        if n.norm() == 0.0 {
            return Err(NftError::Division("numerical b is zero".into()));
        }
        sum += (a / n).arg().powi(2);
    }
    Ok(sum / numerical.len() as f64)
}

/// `sqrt(int |x - y|^2 d omega)` by the trapezoidal rule.
pub fn l2_spectrum_error(x: &[Cplx<f64>], y: &[Cplx<f64>], grid: &FrequencyGrid<f64>) -> Result<f64> {
    if x.len() != grid.len || y.len() != grid.len {
        return Err(NftError::GridMismatch(format!(
            "{} and {} samples on a grid of {}",
            x.len(),
            y.len(),
            grid.len
        )));
    }
    let d: Vec<f64> = x.iter().zip(y).map(|(p, q)| (p - q).norm_sqr()).collect();
    Ok(trapezoid(&d, grid.step()).sqrt())
}

/// Relative Parseval mismatch `|E_t - (E_g + 4 sum Im lambda_k)| / E_t`.
/// Zero for a zero-energy signal.
pub fn energy_balance_check(
    sig: &TimeSignal<f64>,
    cs: &ContinuousSpectrum<f64>,
    eigs: &[ComplexPoint<f64>],
) -> Result<f64> {
    energy_balance_check_with_edge_tol(sig, cs, eigs, crate::scattering::ENERGY_EDGE_TOL)
}

pub fn energy_balance_check_with_edge_tol(
    sig: &TimeSignal<f64>,
    cs: &ContinuousSpectrum<f64>,
    eigs: &[ComplexPoint<f64>],
    edge_tol: f64,
) -> Result<f64> {
    let et = sig.energy();
    if et == 0.0 {
        return Ok(0.0);
    }
    let eg = energy_continuous_with_edge_tol(cs, edge_tol)?;
    let ed: f64 = eigs.iter().map(|z| 4.0 * z.im).sum();
    Ok((et - (eg + ed)).abs() / et)
}

/// Nearest-neighbour pairing: repeatedly matches the closest remaining
/// (analytic, numerical) pair. Returns `None` unless the lists have equal
/// length, in which case the result is a bijection.
pub fn pair_nearest(analytic: &[ComplexPoint<f64>], numerical: &[ComplexPoint<f64>]) -> Option<Vec<usize>> {
    if analytic.len() != numerical.len() {
        return None;
    }
    let mut cand: Vec<(f64, usize, usize)> = Vec::with_capacity(analytic.len() * numerical.len());
    for (i, a) in analytic.iter().enumerate() {
        for (j, n) in numerical.iter().enumerate() {
            cand.push(((a - n).norm(), i, j));
        }
    }
    cand.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut out = vec![usize::MAX; analytic.len()];
    let mut used = vec![false; numerical.len()];
    for (_, i, j) in cand {
        if out[i] == usize::MAX && !used[j] {
            out[i] = j;
            used[j] = true;
        }
    }
    Some(out)
}

struct Setup {
    sigmas: Vec<f64>,
    grid: FrequencyGrid<f64>,
    scatter: ScatterConfig<f64>,
}

fn truncation_point(
    cfg: &ExperimentConfig,
    setup: &Setup,
    ds: &DiscreteSpectrum<f64>,
    phases: &[f64],
    t: f64,
) -> Result<TruncationRecord> {
    let cells = ((2.0 * t / cfg.dt()).round() as usize).max(1);
    let sig = synthesize(ds, TimeGrid::cell_centered(-t, t, cells)?)?;
    let cs = continuous_spectrum(&sig, setup.grid, &setup.scatter)?;
    let search = find_eigenvalues(&sig, &ds.eigenvalues(), &setup.scatter)?;
    let eig_num = search.roots;
    let b_num = discrete_amplitudes(&sig, &eig_num, &setup.scatter)?
        .into_iter()
        .map(|d| d.b)
        .collect();

    let model = TruncationModel::with_phases(&setup.sigmas, phases, t)?;
    let anal = truncated_spectrum(&model, setup.grid)?;
    let eig_anal = analytic_eigenvalues_default(&model)?;
    let b_anal = eig_anal
        .iter()
        .map(|&z| analytic_b_values(&[z], &model).ok().map(|v| v[0]))
        .collect();

    let eg_num = energy_continuous_with_edge_tol(&cs, cfg.edge_tol)?;
    let eg_anal = energy_continuous_with_edge_tol(&anal, cfg.edge_tol)?;
    Ok(TruncationRecord {
        truncation: t,
        pairing: pair_nearest(&eig_anal, &eig_num),
        l2_a: l2_spectrum_error(cs.a(), anal.a(), &setup.grid)?,
        l2_b: l2_spectrum_error(cs.b(), anal.b(), &setup.grid)?,
        energy_balance: energy_balance_check_with_edge_tol(&sig, &cs, &eig_num, cfg.edge_tol)?,
        eig_num,
        eig_anal,
        b_num,
        b_anal,
        eg_num,
        eg_anal,
    })
}

/// Runs one trial at every truncation of `cfg`.
pub fn run_trial(cfg: &ExperimentConfig, trial_id: usize) -> Result<TrialRecord> {
    let setup = setup(cfg)?;
    Ok(trial(cfg, &setup, trial_id))
}

fn setup(cfg: &ExperimentConfig) -> Result<Setup> {
    cfg.validate()?;
    let mut sigmas = cfg.sigmas.clone();
    sigmas.sort_by(f64::total_cmp);
    Ok(Setup {
        sigmas,
        grid: FrequencyGrid::new(cfg.omega_grid_spec.max, cfg.omega_grid_spec.count)?,
        scatter: cfg.scattering.to_config()?,
    })
}

fn trial(cfg: &ExperimentConfig, setup: &Setup, trial_id: usize) -> TrialRecord {
    let phases = trial_phases(cfg.rng_seed, trial_id, setup.sigmas.len());
    let per_t = match DiscreteSpectrum::symmetric(&setup.sigmas, &phases) {
        Err(e) => vec![Err(e.to_string()); cfg.t_values.len()],
        Ok(ds) => cfg
            .t_values
            .iter()
            .map(|&t| truncation_point(cfg, setup, &ds, &phases, t).map_err(|e| e.to_string()))
            .collect(),
    };
    TrialRecord { trial_id, phases, per_t }
}

fn mean(xs: impl IntoIterator<Item = f64>) -> f64 {
    let (s, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        s / n as f64
    }
}

fn summarize(setup: &Setup, trials: &[TrialRecord], idx: usize, t: f64) -> Result<TruncationSummary> {
    let ok: Vec<&TruncationRecord> = trials.iter().filter_map(|r| r.per_t[idx].as_ref().ok()).collect();
    let n_failed = trials.len() - ok.len();
    if 2 * n_failed > trials.len() {
        let first = trials
            .iter()
            .find_map(|r| r.per_t[idx].as_ref().err())
            .cloned()
            .unwrap_or_default();
        return Err(NftError::NoConvergence(format!(
            "{n_failed} of {} trials failed at T = {t}; first failure: {first}",
            trials.len()
        )));
    }
    let paired: Vec<(&TruncationRecord, &Vec<usize>)> = ok
        .iter()
        .filter_map(|r| r.pairing.as_ref().map(|p| (*r, p)))
        .filter(|(r, _)| r.eig_anal.len() == setup.sigmas.len())
        .collect();
    let n_eig = setup.sigmas.len();
    let mut mean_lambda_num = Vec::with_capacity(n_eig);
    let mut mean_lambda_anal = Vec::with_capacity(n_eig);
    let mut nmse_lambda = Vec::with_capacity(n_eig);
    let mut nmse_b_k = Vec::with_capacity(n_eig);
    for k in 0..n_eig {
        let num: Vec<ComplexPoint<f64>> = paired.iter().map(|(r, p)| r.eig_num[p[k]]).collect();
        mean_lambda_num.push(mean(num.iter().map(|z| z.norm())));
        mean_lambda_anal.push(mean(
            ok.iter().filter_map(|r| r.eig_anal.get(k)).map(|z| z.norm()),
        ));
        nmse_lambda.push(match paired.first() {
            Some((r, _)) => nmse_eigenvalue(r.eig_anal[k], &num, Cplx::new(0.0, setup.sigmas[k])),
            None => f64::NAN,
        });
        let (ba, bn): (Vec<_>, Vec<_>) = paired
            .iter()
            .filter_map(|(r, p)| r.b_anal[k].map(|a| (a, r.b_num[p[k]])))
            .unzip();
        nmse_b_k.push(nmse_b(&ba, &bn)?);
    }
    let (ba1, bn1): (Vec<_>, Vec<_>) = paired
        .iter()
        .filter_map(|(r, p)| r.b_anal.first().copied().flatten().map(|a| (a, r.b_num[p[0]])))
        .unzip();
    Ok(TruncationSummary {
        truncation: t,
        n_ok: ok.len(),
        n_failed,
        n_lost: ok.len() - paired.len(),
        mean_lambda_num,
        mean_lambda_anal,
        eg_num: mean(ok.iter().map(|r| r.eg_num)),
        eg_anal: mean(ok.iter().map(|r| r.eg_anal)),
        nmse_lambda,
        nmse_b: nmse_b_k,
        nmse_arg_b1: nmse_arg(&ba1, &bn1)?,
        l2_a: mean(ok.iter().map(|r| r.l2_a)),
        l2_b: mean(ok.iter().map(|r| r.l2_b)),
        energy_balance_mean: mean(ok.iter().map(|r| r.energy_balance)),
        energy_balance_max: ok.iter().map(|r| r.energy_balance).fold(0.0, f64::max),
    })
}

/// Runs the ensemble. Trials run in parallel; aggregation is sequential, so
/// the report is a pure function of the configuration.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<EnsembleReport> {
    let setup = setup(cfg)?;
    let trials: Vec<TrialRecord> = (0..cfg.n_trials)
        .into_par_iter()
        .map(|i| trial(cfg, &setup, i))
        .collect();
    let summaries = cfg
        .t_values
        .iter()
        .enumerate()
        .map(|(i, &t)| summarize(&setup, &trials, i, t))
        .collect::<Result<_>>()?;
    Ok(EnsembleReport {
        config: cfg.clone(),
        summaries,
        trials,
    })
}

fn csv_line(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(|v| format!("{v:e}")).collect::<Vec<_>>().join(",")
}

fn indexed(prefix: &str, n: usize) -> String {
    (1..=n).map(|k| format!("{prefix}{k}")).collect::<Vec<_>>().join(",")
}

impl EnsembleReport {
    /// Writes `summary.json` and the tables `fig2.csv` (eigenvalues
    /// and continuous energy), `fig3.csv` (eigenvalue NMSE), `fig4.csv`
    /// (`b` NMSE) and `fig5.csv` (L2 spectrum errors).
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("summary.json"), self.summary_json()?)?;
        let n = self.summaries.first().map_or(0, |s| s.mean_lambda_num.len());
        let fig = |name: &str, header: String, row: &dyn Fn(&TruncationSummary) -> Vec<f64>| {
            let mut text = header + "\n";
            for s in &self.summaries {
                text += &csv_line(row(s));
                text.push('\n');
            }
            std::fs::write(dir.join(name), text)
        };
        fig(
            "fig2.csv",
            format!("T,{},{},eg_num,eg_anal", indexed("lambda_num_", n), indexed("lambda_anal_", n)),
            &|s| {
                let mut v = vec![s.truncation];
                v.extend(&s.mean_lambda_num);
                v.extend(&s.mean_lambda_anal);
                v.extend([s.eg_num, s.eg_anal]);
                v
            },
        )?;
        fig("fig3.csv", format!("T,{}", indexed("nmse_lambda_", n)), &|s| {
            std::iter::once(s.truncation).chain(s.nmse_lambda.iter().copied()).collect()
        })?;
        fig("fig4.csv", format!("T,{},nmse_arg_b1", indexed("nmse_b_", n)), &|s| {
            let mut v = vec![s.truncation];
            v.extend(&s.nmse_b);
            v.push(s.nmse_arg_b1);
            v
        })?;
        fig("fig5.csv", "T,l2_a,l2_b".into(), &|s| vec![s.truncation, s.l2_a, s.l2_b])?;
        Ok(())
    }

    /// Configuration and per-truncation statistics as JSON. Non-finite
    /// statistics (no usable samples) serialize as `null`.
    pub fn summary_json(&self) -> Result<String> {
        #[derive(Serialize)]
        struct Summary<'a> {
            config: &'a ExperimentConfig,
            summaries: &'a [TruncationSummary],
        }
        Ok(serde_json::to_string_pretty(&Summary {
            config: &self.config,
            summaries: &self.summaries,
        })?)
    }
}
