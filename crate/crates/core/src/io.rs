//! File formats. All I/O is in `f64`.
//!
//! * discrete spectrum JSON: `{"eigenvalues":[{"re":..,"im":..,"b_re":..,"b_im":..}]}`
//! * time signal CSV: header `t,re,im`, one row per sample
//! * continuous spectrum CSV: header `omega,a_re,a_im,b_re,b_im`
//! * truncation model JSON: `{"sigmas":[..],"phi":..,"T":..}`, optionally `"phases":[..]`
//! * fit report JSON: `{"eigenvalues":[{"re":..,"im":..}],"residual":..,"iterations":..}`
//! * scattering settings: a `[scattering]` TOML table or `"scattering"` JSON object
//!   with keys `scheme`, `newton_tol`, `newton_max_iter`, `fd_step`, `samples`

use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{NftError, Result};
use crate::inversion::FitReport;
use crate::scalar::Cplx;
use crate::scattering::{ScatterConfig, Scheme, DEFAULT_SAMPLES};
use crate::spectra::{ContinuousSpectrum, DiscreteSpectrum, SpectralEntry, TimeSignal};
use crate::truncation::TruncationModel;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EigenRecord {
    pub re: f64,
    pub im: f64,
    pub b_re: f64,
    pub b_im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumFile {
    pub eigenvalues: Vec<EigenRecord>,
}

impl From<&DiscreteSpectrum<f64>> for SpectrumFile {
    fn from(ds: &DiscreteSpectrum<f64>) -> Self {
        Self {
            eigenvalues: ds
                .entries()
                .iter()
                .map(|e| EigenRecord {
                    re: e.lambda.re,
                    im: e.lambda.im,
                    b_re: e.b.re,
                    b_im: e.b.im,
                })
                .collect(),
        }
    }
}

impl TryFrom<SpectrumFile> for DiscreteSpectrum<f64> {
    type Error = NftError;

    fn try_from(f: SpectrumFile) -> Result<Self> {
        DiscreteSpectrum::new(
            f.eigenvalues
                .into_iter()
                .map(|r| SpectralEntry {
                    lambda: Cplx::new(r.re, r.im),
                    b: Cplx::new(r.b_re, r.b_im),
                })
                .collect(),
        )
    }
}

pub fn parse_spectrum_json(text: &str) -> Result<DiscreteSpectrum<f64>> {
    let f: SpectrumFile = serde_json::from_str(text)?;
    f.try_into()
}

pub fn spectrum_to_json(ds: &DiscreteSpectrum<f64>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&SpectrumFile::from(ds))?)
}

pub fn read_spectrum(path: &Path) -> Result<DiscreteSpectrum<f64>> {
    parse_spectrum_json(&std::fs::read_to_string(path)?)
}

pub fn write_spectrum(path: &Path, ds: &DiscreteSpectrum<f64>) -> Result<()> {
    std::fs::write(path, spectrum_to_json(ds)?)?;
    Ok(())
}

#[derive(Debug, Serialize, Deserialize)]
struct SignalRow {
    t: f64,
    re: f64,
    im: f64,
}

pub fn write_signal_to<W: Write>(w: W, sig: &TimeSignal<f64>) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for (t, q) in sig.iter() {
        wr.serialize(SignalRow { t, re: q.re, im: q.im })?;
    }
    wr.flush()?;
    Ok(())
}

/// Reads a `t,re,im` CSV. The time column must be uniform to `1e-9` relative
/// to the step.
pub fn read_signal_from<R: Read>(r: R) -> Result<TimeSignal<f64>> {
    let mut rd = csv::Reader::from_reader(r);
    let rows: Vec<SignalRow> = rd.deserialize().collect::<std::result::Result<_, _>>()?;
    if rows.is_empty() {
        return Err(NftError::InvalidInput("signal file has no samples".into()));
    }
    let t_start = rows[0].t;
    let dt = if rows.len() > 1 {
        (rows[rows.len() - 1].t - t_start) / (rows.len() - 1) as f64
    } else {
        1.0
    };
    for (i, row) in rows.iter().enumerate() {
        if (row.t - (t_start + i as f64 * dt)).abs() > 1e-9 * dt.abs().max(f64::MIN_POSITIVE) {
            return Err(NftError::GridMismatch(format!("time column is not uniform at row {i}")));
        }
    }
    TimeSignal::new(t_start, dt, rows.iter().map(|r| Cplx::new(r.re, r.im)).collect())
}

pub fn write_signal(path: &Path, sig: &TimeSignal<f64>) -> Result<()> {
    write_signal_to(BufWriter::new(File::create(path)?), sig)
}

pub fn read_signal(path: &Path) -> Result<TimeSignal<f64>> {
    read_signal_from(BufReader::new(File::open(path)?))
}

#[derive(Debug, Serialize, Deserialize)]
struct SpectrumRow {
    omega: f64,
    a_re: f64,
    a_im: f64,
    b_re: f64,
    b_im: f64,
}

pub fn write_continuous_to<W: Write>(w: W, cs: &ContinuousSpectrum<f64>) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for (i, omega) in cs.omegas().into_iter().enumerate() {
        let p = cs.pair(i);
        wr.serialize(SpectrumRow {
            omega,
            a_re: p.a.re,
            a_im: p.a.im,
            b_re: p.b.re,
            b_im: p.b.im,
        })?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_continuous_from<R: Read>(r: R) -> Result<ContinuousSpectrum<f64>> {
    let mut rd = csv::Reader::from_reader(r);
    let rows: Vec<SpectrumRow> = rd.deserialize().collect::<std::result::Result<_, _>>()?;
    let omegas: Vec<f64> = rows.iter().map(|r| r.omega).collect();
    let a = rows.iter().map(|r| Cplx::new(r.a_re, r.a_im)).collect();
    let b = rows.iter().map(|r| Cplx::new(r.b_re, r.b_im)).collect();
    ContinuousSpectrum::from_samples(&omegas, a, b)
}

pub fn write_continuous(path: &Path, cs: &ContinuousSpectrum<f64>) -> Result<()> {
    write_continuous_to(BufWriter::new(File::create(path)?), cs)
}

pub fn read_continuous(path: &Path) -> Result<ContinuousSpectrum<f64>> {
    read_continuous_from(BufReader::new(File::open(path)?))
}

/// Serialized form of [`TruncationModel`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub sigmas: Vec<f64>,
    pub phi: f64,
    #[serde(rename = "T")]
    pub truncation: f64,
    /// Phases of all `b(lambda_k)`, aligned with `sigmas`; the first (after
    /// sorting) must equal `phi` when given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub phases: Option<Vec<f64>>,
}

impl ModelFile {
    pub fn into_model(self) -> Result<TruncationModel<f64>> {
        match self.phases {
            None => TruncationModel::new(&self.sigmas, self.phi, self.truncation),
            Some(p) => {
                let m = TruncationModel::with_phases(&self.sigmas, &p, self.truncation)?;
                if (m.phi() - self.phi).abs() > 1e-12 {
                    return Err(NftError::InvalidInput(format!(
                        "phi = {} disagrees with the phase of the smallest sigma ({})",
                        self.phi,
                        m.phi()
                    )));
                }
                Ok(m)
            }
        }
    }
}

impl From<&TruncationModel<f64>> for ModelFile {
    fn from(m: &TruncationModel<f64>) -> Self {
        let uniform = m.phases().iter().all(|&p| p == m.phi());
        Self {
            sigmas: m.sigmas().to_vec(),
            phi: m.phi(),
            truncation: m.truncation(),
            phases: (!uniform).then(|| m.phases().to_vec()),
        }
    }
}

pub fn parse_model_json(text: &str) -> Result<TruncationModel<f64>> {
    serde_json::from_str::<ModelFile>(text)?.into_model()
}

pub fn model_to_json(m: &TruncationModel<f64>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&ModelFile::from(m))?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitReportFile {
    pub eigenvalues: Vec<PointRecord>,
    pub residual: f64,
    pub iterations: usize,
}

impl From<&FitReport<f64>> for FitReportFile {
    fn from(r: &FitReport<f64>) -> Self {
        Self {
            eigenvalues: r.eigenvalues.iter().map(|z| PointRecord { re: z.re, im: z.im }).collect(),
            residual: r.residual,
            iterations: r.iterations,
        }
    }
}

pub fn fit_report_to_json(r: &FitReport<f64>) -> Result<String> {
    Ok(serde_json::to_string_pretty(&FitReportFile::from(r))?)
}

/// The `[scattering]` settings. Missing keys take the defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScatteringSection {
    pub scheme: String,
    pub newton_tol: f64,
    pub newton_max_iter: usize,
    pub fd_step: f64,
    /// Samples per pulse.
    pub samples: usize,
}

impl Default for ScatteringSection {
    fn default() -> Self {
        let c = ScatterConfig::<f64>::default();
        Self {
            scheme: c.scheme.to_string(),
            newton_tol: c.newton_tol,
            newton_max_iter: c.newton_max_iter,
            fd_step: c.fd_step,
            samples: DEFAULT_SAMPLES,
        }
    }
}

impl ScatteringSection {
    pub fn to_config(&self) -> Result<ScatterConfig<f64>> {
        let cfg = ScatterConfig {
            scheme: self.scheme.parse::<Scheme>()?,
            newton_tol: self.newton_tol,
            newton_max_iter: self.newton_max_iter,
            fd_step: self.fd_step,
            ..ScatterConfig::default()
        };
        cfg.validate()?;
        if self.samples < 2 {
            return Err(NftError::InvalidInput("samples must be at least 2".into()));
        }
        Ok(cfg)
    }
}

#[derive(Deserialize)]
struct SectionHolder {
    #[serde(default)]
    scattering: ScatteringSection,
}

/// Reads the `[scattering]` table of a TOML document; absent means defaults.
pub fn scattering_from_toml(text: &str) -> Result<ScatteringSection> {
    let holder: toml::Table = toml::from_str(text)?;
    match holder.get("scattering") {
        None => Ok(ScatteringSection::default()),
        Some(v) => Ok(v.clone().try_into()?),
    }
}

/// Reads the `"scattering"` object of a JSON document; absent means defaults.
pub fn scattering_from_json(text: &str) -> Result<ScatteringSection> {
    Ok(serde_json::from_str::<SectionHolder>(text)?.scattering)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_round_trip() {
        let ds = DiscreteSpectrum::symmetric(&[1.0, 0.5], &[0.3, -2.0]).unwrap();
        let back = parse_spectrum_json(&spectrum_to_json(&ds).unwrap()).unwrap();
        assert_eq!(back, ds);
    }

    #[test]
    fn spectrum_rejects_lower_half_plane() {
        let text = r#"{"eigenvalues":[{"re":0,"im":-1,"b_re":1,"b_im":0}]}"#;
        assert!(matches!(parse_spectrum_json(text), Err(NftError::HalfPlane { .. })));
    }

    #[test]
    fn signal_round_trip() {
        let sig = TimeSignal::new(-1.0, 0.25, vec![Cplx::new(0.5, -1.0); 9]).unwrap();
        let mut buf = Vec::new();
        write_signal_to(&mut buf, &sig).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,re,im\n"));
        let back = read_signal_from(buf.as_slice()).unwrap();
        assert_eq!(back.samples(), sig.samples());
        assert!((back.dt() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn signal_rejects_nonuniform_time() {
        let text = "t,re,im\n0,1,0\n1,1,0\n3,1,0\n";
        assert!(matches!(read_signal_from(text.as_bytes()), Err(NftError::GridMismatch(_))));
    }

    #[test]
    fn model_json() {
        let m = parse_model_json(r#"{"sigmas":[1.0,0.5,1.5,2.0],"phi":0.4,"T":4}"#).unwrap();
        assert_eq!(m.sigmas(), &[0.5, 1.0, 1.5, 2.0]);
        assert!((m.t0() - 10f64.ln()).abs() < 1e-14);
        assert_eq!(m.n(), 4);
        let again = parse_model_json(&model_to_json(&m).unwrap()).unwrap();
        assert_eq!(again, m);
        assert!(parse_model_json(r#"{"sigmas":[0.5,1.0],"phi":0.4,"T":4,"phases":[0.4,1.0]}"#).is_ok());
        assert!(parse_model_json(r#"{"sigmas":[0.5,1.0],"phi":0.0,"T":4,"phases":[0.4,1.0]}"#).is_err());
    }

    #[test]
    fn scattering_section() {
        let s = scattering_from_toml("[scattering]\nscheme = \"forward_backward\"\nnewton_tol = 1e-8\n").unwrap();
        let cfg = s.to_config().unwrap();
        assert_eq!(cfg.scheme, Scheme::ForwardBackwardSplit);
        assert_eq!(cfg.newton_tol, 1e-8);
        assert_eq!(s.samples, DEFAULT_SAMPLES);
        assert_eq!(scattering_from_toml("x = 1").unwrap(), ScatteringSection::default());
        let j = scattering_from_json(r#"{"scattering":{"fd_step":1e-5,"samples":4096}}"#).unwrap();
        assert_eq!((j.fd_step, j.samples), (1e-5, 4096));
        assert!(scattering_from_toml("[scattering]\nbogus = 1\n").is_err());
        let bad = ScatteringSection {
            newton_tol: 0.0,
            ..Default::default()
        };
        assert!(matches!(bad.to_config(), Err(NftError::InvalidInput(_))));
    }
}
