//! Nonlinear Fourier analysis of truncated multi-soliton pulses.
//!
//! * [`soliton`] builds N-soliton pulses by Darboux dressing.
//! * [`scattering`] integrates the Zakharov–Shabat system numerically.
//! * [`truncation`] evaluates the closed-form spectrum of a symmetrically
//!   truncated pulse.
//! * [`inversion`] recovers eigenvalues from the continuous spectrum alone.
//! * [`experiment`] runs the random-phase truncation ensembles.
//!
//! Numerics are generic over [`scalar::Real`]; the aliases below fix `f64`.

// `!(x > 0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod scalar;
pub mod soliton;
pub mod spectra;
pub mod scattering;
pub mod truncation;
pub mod inversion;
pub mod io;
pub mod experiment;

pub use error::{NftError, Result};

pub type Complex64 = scalar::Cplx<f64>;
pub type TimeGrid64 = spectra::TimeGrid<f64>;
pub type TimeSignal64 = spectra::TimeSignal<f64>;
pub type DiscreteSpectrum64 = spectra::DiscreteSpectrum<f64>;
pub type JostPair64 = spectra::JostPair<f64>;
pub type FrequencyGrid64 = spectra::FrequencyGrid<f64>;
pub type ContinuousSpectrum64 = spectra::ContinuousSpectrum<f64>;
pub type ScatterConfig64 = scattering::ScatterConfig<f64>;
pub type TruncationModel64 = truncation::TruncationModel<f64>;
