//! Shared spectral data types and the propagation law of the b-coefficient.
//!
//! All quantities are in normalized (dimensionless) units. The time-domain
//! convention is the Zakharov-Shabat system
//!
//! ```text
//! d/dt v1 =  q(t) e^{+2j lambda t} v2
//! d/dt v2 = -q*(t) e^{-2j lambda t} v1,     v(-inf) = (1, 0),  (a, b) = v(+inf)
//! ```

use crate::error::{NftError, Result};
use crate::scalar::{cplx, is_finite_c, j, Cplx, Real};

/// A point of the spectral plane. Real frequencies are points with zero
/// imaginary part.
pub type ComplexPoint<T> = Cplx<T>;

/// Coefficient `c` of the time-shift rule `b -> b e^{c j lambda tau}`.
///
/// Delaying a pulse by `tau` (`q(t) -> q(t - tau)`) leaves `a` unchanged and
/// multiplies `b` by `e^{-2j lambda tau}`.
pub const TIME_SHIFT_EXPONENT: f64 = -2.0;

/// Uniform time grid `t_i = t_start + i dt`, `i < len`.
///
/// Each sample is treated as the midpoint of a cell of width `dt`, so the
/// grid covers `[t_start - dt/2, t_start + (len - 1/2) dt]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid<T> {
    pub t_start: T,
    pub dt: T,
    pub len: usize,
}

impl<T: Real> TimeGrid<T> {
    pub fn new(t_start: T, dt: T, len: usize) -> Result<Self> {
        if !t_start.is_finite() || !dt.is_finite() || dt <= T::zero() {
            return Err(NftError::InvalidInput(format!(
                "time grid needs finite t_start and dt > 0 (got t_start={t_start}, dt={dt})"
            )));
        }
        if len == 0 {
            return Err(NftError::InvalidInput("time grid must be non-empty".into()));
        }
        Ok(Self { t_start, dt, len })
    }

    /// `len` cells exactly tiling `[t_min, t_max]`, samples at the cell midpoints.
    pub fn cell_centered(t_min: T, t_max: T, len: usize) -> Result<Self> {
        if !(t_max > t_min) || len == 0 {
            return Err(NftError::InvalidInput(format!(
                "cell-centered grid needs t_max > t_min and len > 0 (got [{t_min}, {t_max}], {len})"
            )));
        }
        let dt = (t_max - t_min) / T::from_usize_lossy(len);
        Self::new(t_min + dt / T::lit(2.0), dt, len)
    }

    #[inline]
    pub fn time(&self, i: usize) -> T {
        self.t_start + T::from_usize_lossy(i) * self.dt
    }

    pub fn times(&self) -> impl Iterator<Item = T> + '_ {
        (0..self.len).map(|i| self.time(i))
    }

    /// Left edge of the first cell.
    pub fn t_min(&self) -> T {
        self.t_start - self.dt / T::lit(2.0)
    }

    /// Right edge of the last cell.
    pub fn t_max(&self) -> T {
        self.time(self.len - 1) + self.dt / T::lit(2.0)
    }
}

/// Complex pulse samples on a uniform time grid.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeSignal<T> {
    grid: TimeGrid<T>,
    samples: Vec<Cplx<T>>,
}

impl<T: Real> TimeSignal<T> {
    pub fn new(t_start: T, dt: T, samples: Vec<Cplx<T>>) -> Result<Self> {
        let grid = TimeGrid::new(t_start, dt, samples.len())?;
        Self::on_grid(grid, samples)
    }

    pub fn on_grid(grid: TimeGrid<T>, samples: Vec<Cplx<T>>) -> Result<Self> {
        if samples.len() != grid.len {
            return Err(NftError::InvalidInput(format!(
                "grid has {} points but {} samples were given",
                grid.len,
                samples.len()
            )));
        }
        if let Some(i) = samples.iter().position(|z| !is_finite_c(*z)) {
            return Err(NftError::InvalidInput(format!("sample {i} is not finite")));
        }
        Ok(Self { grid, samples })
    }

    pub fn zeros(grid: TimeGrid<T>) -> Self {
        Self {
            grid,
            samples: vec![Cplx::new(T::zero(), T::zero()); grid.len],
        }
    }

    /// Samples `f` at every grid point.
    pub fn from_fn(grid: TimeGrid<T>, f: impl Fn(T) -> Cplx<T>) -> Result<Self> {
        let samples = grid.times().map(f).collect();
        Self::on_grid(grid, samples)
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    pub fn samples(&self) -> &[Cplx<T>] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn dt(&self) -> T {
        self.grid.dt
    }

    pub fn time(&self, i: usize) -> T {
        self.grid.time(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = (T, Cplx<T>)> + '_ {
        self.samples
            .iter()
            .enumerate()
            .map(|(i, q)| (self.grid.time(i), *q))
    }

    pub fn is_zero(&self) -> bool {
        self.samples.iter().all(|z| z.re == T::zero() && z.im == T::zero())
    }

    /// `max |q(t_i)|`.
    pub fn peak(&self) -> T {
        self.samples
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), T::max)
    }

    /// Rectangle-rule energy `sum |q_i|^2 dt` (exact for the piecewise-constant pulse).
    pub fn energy(&self) -> T {
        self.samples
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |s, x| s + x)
            * self.grid.dt
    }

    /// Zeroes every sample with `|t| > window`.
    pub fn truncated(&self, window: T) -> Self {
        let samples = self
            .iter()
            .map(|(t, q)| if t.abs() <= window { q } else { Cplx::new(T::zero(), T::zero()) })
            .collect();
        Self { grid: self.grid, samples }
    }

    /// Restricts to the samples `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> Result<Self> {
        if range.start >= range.end || range.end > self.len() {
            return Err(NftError::InvalidInput(format!(
                "slice {range:?} out of bounds for {} samples",
                self.len()
            )));
        }
        let grid = TimeGrid::new(self.grid.time(range.start), self.grid.dt, range.len())?;
        Ok(Self {
            grid,
            samples: self.samples[range].to_vec(),
        })
    }

    /// Same grid, samples multiplied by `mask(t)`.
    pub fn masked(&self, mask: impl Fn(T) -> bool) -> Self {
        let samples = self
            .iter()
            .map(|(t, q)| if mask(t) { q } else { Cplx::new(T::zero(), T::zero()) })
            .collect();
        Self { grid: self.grid, samples }
    }
}

/// One discrete eigenvalue with its b-coefficient.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralEntry<T> {
    pub lambda: ComplexPoint<T>,
    pub b: Cplx<T>,
}

/// Discrete spectrum `{(lambda_k, b(lambda_k))}`: eigenvalues in the open
/// upper half-plane, pairwise distinct, sorted by ascending imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteSpectrum<T> {
    entries: Vec<SpectralEntry<T>>,
}

impl<T: Real> DiscreteSpectrum<T> {
    pub fn new(mut entries: Vec<SpectralEntry<T>>) -> Result<Self> {
        for (k, e) in entries.iter().enumerate() {
            if !is_finite_c(e.lambda) || !is_finite_c(e.b) {
                return Err(NftError::InvalidInput(format!("entry {k} is not finite")));
            }
            if e.lambda.im <= T::zero() {
                return Err(NftError::HalfPlane {
                    re: e.lambda.re.as_f64(),
                    im: e.lambda.im.as_f64(),
                });
            }
            if e.b.norm() == T::zero() {
                return Err(NftError::InvalidInput(format!("entry {k} has b = 0")));
            }
        }
        let tol = T::lit(1e-10);
        for k in 0..entries.len() {
            for m in k + 1..entries.len() {
                let scale = T::one().max(entries[k].lambda.norm());
                if (entries[k].lambda - entries[m].lambda).norm() <= tol * scale {
                    return Err(NftError::DegenerateSpectrum(k, m));
                }
            }
        }
        entries.sort_by(|x, y| {
            x.lambda
                .im
                .partial_cmp(&y.lambda.im)
                .unwrap()
                .then(x.lambda.re.partial_cmp(&y.lambda.re).unwrap())
        });
        Ok(Self { entries })
    }

    pub fn empty() -> Self {
        Self { entries: Vec::new() }
    }

    /// Pure-imaginary eigenvalues `j sigma_k` with `b_k = e^{j phase_k}`.
    pub fn symmetric(sigmas: &[T], phases: &[T]) -> Result<Self> {
        if sigmas.len() != phases.len() {
            return Err(NftError::InvalidInput(format!(
                "{} sigmas but {} phases",
                sigmas.len(),
                phases.len()
            )));
        }
        Self::new(
            sigmas
                .iter()
                .zip(phases)
                .map(|(&s, &p)| SpectralEntry {
                    lambda: cplx(T::zero(), s),
                    b: Cplx::from_polar(T::one(), p),
                })
                .collect(),
        )
    }

    pub fn entries(&self) -> &[SpectralEntry<T>] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn eigenvalues(&self) -> Vec<ComplexPoint<T>> {
        self.entries.iter().map(|e| e.lambda).collect()
    }

    pub fn b_values(&self) -> Vec<Cplx<T>> {
        self.entries.iter().map(|e| e.b).collect()
    }

    /// Spectrum of the pulse delayed by `tau`.
    pub fn shifted(&self, tau: T) -> Self {
        let entries = self
            .entries
            .iter()
            .map(|e| SpectralEntry {
                lambda: e.lambda,
                b: shift_b(e.b, e.lambda, tau),
            })
            .collect();
        Self { entries }
    }
}

/// Jost coefficients `(a(lambda), b(lambda))` at one spectral point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JostPair<T> {
    pub a: Cplx<T>,
    pub b: Cplx<T>,
}

impl<T: Real> JostPair<T> {
    pub fn new(a: Cplx<T>, b: Cplx<T>) -> Self {
        Self { a, b }
    }

    /// Jost pair of the zero potential.
    pub fn identity() -> Self {
        Self {
            a: Cplx::new(T::one(), T::zero()),
            b: Cplx::new(T::zero(), T::zero()),
        }
    }

    /// `(a*(lambda*), b*(lambda*))` when `lambda` is real.
    pub fn conj_point_real(&self) -> Self {
        Self {
            a: self.a.conj(),
            b: self.b.conj(),
        }
    }

    /// `|a|^2 + |b|^2`, equal to one on the real axis.
    pub fn unitarity(&self) -> T {
        self.a.norm_sqr() + self.b.norm_sqr()
    }
}

/// Uniform frequency grid symmetric about zero: `omega_i = -max + i * 2 max / (len - 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrequencyGrid<T> {
    pub omega_max: T,
    pub len: usize,
}

impl<T: Real> FrequencyGrid<T> {
    pub fn new(omega_max: T, len: usize) -> Result<Self> {
        if !omega_max.is_finite() || omega_max <= T::zero() || len < 2 {
            return Err(NftError::InvalidInput(format!(
                "frequency grid needs omega_max > 0 and at least two points (got {omega_max}, {len})"
            )));
        }
        Ok(Self { omega_max, len })
    }

    pub fn step(&self) -> T {
        T::lit(2.0) * self.omega_max / T::from_usize_lossy(self.len - 1)
    }

    #[inline]
    pub fn omega(&self, i: usize) -> T {
        if i + 1 == self.len {
            self.omega_max
        } else {
            -self.omega_max + T::from_usize_lossy(i) * self.step()
        }
    }

    pub fn omegas(&self) -> Vec<T> {
        (0..self.len).map(|i| self.omega(i)).collect()
    }

    /// Same spacing, `factor` times the half-width (rounded to whole steps).
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(self.omega_max, (self.len - 1) * factor + 1)
    }
}

/// Scattering data on a real frequency grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousSpectrum<T> {
    grid: FrequencyGrid<T>,
    a: Vec<Cplx<T>>,
    b: Vec<Cplx<T>>,
}

impl<T: Real> ContinuousSpectrum<T> {
    pub fn new(grid: FrequencyGrid<T>, a: Vec<Cplx<T>>, b: Vec<Cplx<T>>) -> Result<Self> {
        if a.len() != grid.len || b.len() != grid.len {
            return Err(NftError::GridMismatch(format!(
                "grid has {} points, a has {}, b has {}",
                grid.len,
                a.len(),
                b.len()
            )));
        }
        if let Some(i) = a
            .iter()
            .zip(&b)
            .position(|(x, y)| !is_finite_c(*x) || !is_finite_c(*y))
        {
            return Err(NftError::InvalidInput(format!(
                "spectrum sample {i} is not finite"
            )));
        }
        Ok(Self { grid, a, b })
    }

    /// Builds a spectrum from explicit frequencies, which must form a uniform
    /// grid symmetric about zero (relative tolerance `1e-9` on the spacing).
    pub fn from_samples(omegas: &[T], a: Vec<Cplx<T>>, b: Vec<Cplx<T>>) -> Result<Self> {
        if omegas.len() < 2 {
            return Err(NftError::InvalidInput("need at least two frequencies".into()));
        }
        let grid = FrequencyGrid::new(omegas[omegas.len() - 1], omegas.len())?;
        let tol = T::lit(1e-9) * grid.omega_max.max(T::one());
        for (i, &w) in omegas.iter().enumerate() {
            if (w - grid.omega(i)).abs() > tol {
                return Err(NftError::InvalidInput(format!(
                    "frequency {i} = {w} is off the uniform symmetric grid (expected {})",
                    grid.omega(i)
                )));
            }
        }
        Self::new(grid, a, b)
    }

    /// Spectrum built by evaluating `f` at each grid frequency.
    pub fn from_fn(grid: FrequencyGrid<T>, f: impl Fn(T) -> JostPair<T>) -> Result<Self> {
        let (a, b) = grid.omegas().into_iter().map(|w| {
            let p = f(w);
            (p.a, p.b)
        }).unzip();
        Self::new(grid, a, b)
    }

    pub fn grid(&self) -> &FrequencyGrid<T> {
        &self.grid
    }

    pub fn omegas(&self) -> Vec<T> {
        self.grid.omegas()
    }

    pub fn a(&self) -> &[Cplx<T>] {
        &self.a
    }

    pub fn b(&self) -> &[Cplx<T>] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn pair(&self, i: usize) -> JostPair<T> {
        JostPair::new(self.a[i], self.b[i])
    }

    /// Continuous spectral amplitude `Q_c = b / a`.
    pub fn q_c(&self) -> Vec<Cplx<T>> {
        self.a.iter().zip(&self.b).map(|(a, b)| b / a).collect()
    }
}

/// Evolution of the b-coefficient along the fiber: `b e^{-4j lambda^2 z}`.
/// The a-coefficient does not evolve.
pub fn propagate_b<T: Real>(b: Cplx<T>, lambda: ComplexPoint<T>, z: T) -> Cplx<T> {
    b * (-j::<T>() * T::lit(4.0) * lambda * lambda * z).exp()
}

/// b-coefficient of the pulse delayed by `tau`; see [`TIME_SHIFT_EXPONENT`].
pub fn shift_b<T: Real>(b: Cplx<T>, lambda: ComplexPoint<T>, tau: T) -> Cplx<T> {
    b * (j::<T>() * T::lit(TIME_SHIFT_EXPONENT) * lambda * tau).exp()
}

/// `max_i | |a_i|^2 + |b_i|^2 - 1 |` over the grid.
pub fn validate_unitarity<T: Real>(cs: &ContinuousSpectrum<T>) -> T {
    cs.a
        .iter()
        .zip(&cs.b)
        .map(|(a, b)| (a.norm_sqr() + b.norm_sqr() - T::one()).abs())
        .fold(T::zero(), T::max)
}
