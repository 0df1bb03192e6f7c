//! Numerical forward nonlinear Fourier transform.
//!
//! The signal is treated as piecewise constant: sample `q_i` holds on the cell
//! `[t_i - dt/2, t_i + dt/2]`. Inside a cell the Zakharov-Shabat system has
//! constant coefficients in the frame `psi = diag(e^{-j lambda t}, e^{j lambda t}) v`,
//! so each cell is integrated exactly with the matrix exponential
//!
//! ```text
//! E = cosh(k h) I + sinh(k h)/k [[-j lambda, q], [-q*, j lambda]],   k^2 = -lambda^2 - |q|^2
//! ```
//!
//! and mapped back to the `v` frame, which puts `e^{+-2j lambda t_mid}` on the
//! off-diagonal entries. Cells with `q = 0` are the identity in that frame, so
//! zero padding costs nothing and is skipped.

use rayon::prelude::*;

use crate::error::{NftError, Result};
use crate::scalar::{cplx, is_finite_c, j, re, Cplx, Real};
use crate::spectra::{ComplexPoint, ContinuousSpectrum, FrequencyGrid, JostPair, TimeSignal};

/// Default number of samples per pulse.
type Vector<T> = [Cplx<T>; 2];

pub const DEFAULT_SAMPLES: usize = 10_000;

/// Integration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Scheme {
    /// Product of per-cell transfer matrices from the left edge to the right edge.
    #[default]
    PiecewiseConstant2x2,
    /// Same cells, integrated from both edges towards `t = 0` and matched there
    /// through Wronskians. At an eigenvalue `b` is taken as the ratio of the
    /// left and right Jost solutions, which stays accurate deep in the upper
    /// half-plane where the forward product loses `b` to cancellation.
    ForwardBackwardSplit,
}

impl std::str::FromStr for Scheme {
    type Err = NftError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "piecewise_constant" | "PiecewiseConstant2x2" | "forward" => Ok(Scheme::PiecewiseConstant2x2),
            "forward_backward" | "ForwardBackwardSplit" | "split" => Ok(Scheme::ForwardBackwardSplit),
            other => Err(NftError::InvalidInput(format!("unknown scheme '{other}'"))),
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::PiecewiseConstant2x2 => "piecewise_constant",
            Scheme::ForwardBackwardSplit => "forward_backward",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterConfig<T> {
    pub scheme: Scheme,
    /// Newton stops once `|a(lambda)|` is below this.
    pub newton_tol: T,
    pub newton_max_iter: usize,
    /// Step of the central differences used for `da/dlambda`.
    pub fd_step: T,
    /// Largest admissible magnitude of the propagated solution.
    pub overflow_bound: T,
}

impl<T: Real> Default for ScatterConfig<T> {
    fn default() -> Self {
        Self {
            scheme: Scheme::PiecewiseConstant2x2,
            newton_tol: T::lit(1e-6),
            newton_max_iter: 50,
            fd_step: T::lit(1e-6),
            overflow_bound: T::max_value().sqrt().sqrt(),
        }
    }
}

impl<T: Real> ScatterConfig<T> {
    pub fn with_scheme(mut self, scheme: Scheme) -> Self {
        self.scheme = scheme;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.newton_tol > T::zero()) || !(self.fd_step > T::zero()) {
            return Err(NftError::InvalidInput(
                "newton_tol and fd_step must be positive".into(),
            ));
        }
        if self.newton_max_iter == 0 {
            return Err(NftError::InvalidInput("newton_max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

type Mat<T> = [Cplx<T>; 4];

/// Index range of the non-zero samples, `None` for the zero signal.
fn support<T: Real>(sig: &TimeSignal<T>) -> Option<(usize, usize)> {
    let s = sig.samples();
    let nz = |z: &Cplx<T>| z.re != T::zero() || z.im != T::zero();
    let first = s.iter().position(nz)?;
    let last = s.iter().rposition(nz)?;
    Some((first, last + 1))
}

/// Per-cell transfer matrices in the `v` frame, evaluated lazily.
struct Cells<'a, T> {
    sig: &'a TimeSignal<T>,
    lambda: Cplx<T>,
    h: T,
    real: bool,
    /// `e^{j lambda h}` and its inverse.
    diag: (Cplx<T>, Cplx<T>),
}

impl<'a, T: Real> Cells<'a, T> {
    fn new(sig: &'a TimeSignal<T>, lambda: Cplx<T>) -> Self {
        let h = sig.dt();
        let e = (j::<T>() * lambda * h).exp();
        Self {
            sig,
            lambda,
            h,
            real: lambda.im == T::zero(),
            diag: (e, (-j::<T>() * lambda * h).exp()),
        }
    }

    /// `e^{2j lambda t_i}` for cell `i`.
    #[inline]
    fn phase(&self, i: usize) -> Cplx<T> {
        let arg = j::<T>() * self.lambda * (T::lit(2.0) * self.sig.time(i));
        if self.real {
            Cplx::from_polar(T::one(), arg.im)
        } else {
            arg.exp()
        }
    }

    /// `(cosh(k h), sinh(k h) / k)`.
    #[inline]
    fn hyperbolic(&self, q2: T) -> (Cplx<T>, Cplx<T>) {
        let h = self.h;
        if self.real {
            let s = (self.lambda.re * self.lambda.re + q2).sqrt();
            let x = s * h;
            if x < T::lit(1e-4) {
                let x2 = x * x;
                (
                    re(T::one() - x2 / T::lit(2.0)),
                    re(h * (T::one() - x2 / T::lit(6.0))),
                )
            } else {
                let (sn, cs) = x.sin_cos();
                (re(cs), re(sn / s))
            }
        } else {
            let k2 = -(self.lambda * self.lambda) - re(q2);
            let kh2 = k2 * (h * h);
            if kh2.norm() < T::lit(1e-8) {
                (
                    re(T::one()) + kh2 / T::lit(2.0),
                    (re(T::one()) + kh2 / T::lit(6.0)) * h,
                )
            } else {
                let k = k2.sqrt();
                let kh = k * h;
                (kh.cosh(), kh.sinh() / k)
            }
        }
    }

    /// Cell matrix given `e^{2j lambda t_i}`.
    #[inline]
    fn matrix_with_phase(&self, i: usize, phase: Cplx<T>) -> Mat<T> {
        let q = self.sig.samples()[i];
        let (ch, shk) = self.hyperbolic(q.norm_sqr());
        let jl = j::<T>() * self.lambda * shk;
        [
            self.diag.0 * (ch - jl),
            phase * q * shk,
            -(q.conj() * shk) / phase,
            self.diag.1 * (ch + jl),
        ]
    }

    #[inline]
    fn matrix(&self, i: usize) -> Mat<T> {
        self.matrix_with_phase(i, self.phase(i))
    }
}

#[inline]
fn apply<T: Real>(m: &Mat<T>, v: [Cplx<T>; 2]) -> [Cplx<T>; 2] {
    [m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1]]
}

/// Inverse of a unimodular 2x2 matrix applied to `v`.
#[inline]
fn apply_inverse<T: Real>(m: &Mat<T>, v: [Cplx<T>; 2]) -> [Cplx<T>; 2] {
    [m[3] * v[0] - m[1] * v[1], -m[2] * v[0] + m[0] * v[1]]
}

fn check_bound<T: Real>(v: &[Cplx<T>; 2], lambda: Cplx<T>, bound: T) -> Result<()> {
    let m = v[0].norm().max(v[1].norm());
    if !(m <= bound) {
        return Err(NftError::Overflow {
            re: lambda.re.as_f64(),
            im: lambda.im.as_f64(),
            bound: bound.as_f64(),
        });
    }
    Ok(())
}

const BOUND_CHECK_EVERY: usize = 64;

fn propagate_forward<T: Real>(
    cells: &Cells<'_, T>,
    range: std::ops::Range<usize>,
    mut v: [Cplx<T>; 2],
    bound: T,
) -> Result<[Cplx<T>; 2]> {
    for (count, i) in range.enumerate() {
        v = apply(&cells.matrix(i), v);
        if count % BOUND_CHECK_EVERY == 0 {
            check_bound(&v, cells.lambda, bound)?;
        }
    }
    check_bound(&v, cells.lambda, bound)?;
    Ok(v)
}

/// Applies the inverse cells from the right end of `range` down to its start,
/// for two vectors at once.
fn propagate_backward<T: Real>(
    cells: &Cells<'_, T>,
    range: std::ops::Range<usize>,
    mut u: [Cplx<T>; 2],
    mut w: [Cplx<T>; 2],
    bound: T,
) -> Result<(Vector<T>, Vector<T>)> {
    for (count, i) in range.rev().enumerate() {
        let m = cells.matrix(i);
        u = apply_inverse(&m, u);
        w = apply_inverse(&m, w);
        if count % BOUND_CHECK_EVERY == 0 {
            check_bound(&u, cells.lambda, bound)?;
            check_bound(&w, cells.lambda, bound)?;
        }
    }
    check_bound(&u, cells.lambda, bound)?;
    check_bound(&w, cells.lambda, bound)?;
    Ok((u, w))
}

/// Left and right Jost solutions matched at the cell boundary nearest `t = 0`.
struct Split<T> {
    /// Left Jost solution, `(1, 0)` at the left edge.
    phi: [Cplx<T>; 2],
    /// Right Jost solution, `(0, 1)` at the right edge.
    psi: [Cplx<T>; 2],
    /// Companion right solution, `(1, 0)` at the right edge.
    psi_bar: [Cplx<T>; 2],
}

impl<T: Real> Split<T> {
    fn jost(&self) -> JostPair<T> {
        let (phi, psi, pb) = (self.phi, self.psi, self.psi_bar);
        JostPair::new(
            phi[0] * psi[1] - phi[1] * psi[0],
            pb[0] * phi[1] - pb[1] * phi[0],
        )
    }

    /// `b` from `phi = b psi`, using the better conditioned component.
    fn bound_state_b(&self) -> Cplx<T> {
        if self.psi[0].norm() >= self.psi[1].norm() {
            self.phi[0] / self.psi[0]
        } else {
            self.phi[1] / self.psi[1]
        }
    }
}

fn split<T: Real>(sig: &TimeSignal<T>, lambda: Cplx<T>, cfg: &ScatterConfig<T>) -> Result<Split<T>> {
    let one = re(T::one());
    let zero = re(T::zero());
    let Some((first, end)) = support(sig) else {
        return Ok(Split {
            phi: [one, zero],
            psi: [zero, one],
            psi_bar: [one, zero],
        });
    };
    // first cell whose midpoint is at or after t = 0
    let mid = (0..sig.len())
        .find(|&i| sig.time(i) >= T::zero())
        .unwrap_or(sig.len())
        .clamp(first, end);
    let cells = Cells::new(sig, lambda);
    let phi = propagate_forward(&cells, first..mid, [one, zero], cfg.overflow_bound)?;
    let (psi, psi_bar) =
        propagate_backward(&cells, mid..end, [zero, one], [one, zero], cfg.overflow_bound)?;
    Ok(Split { phi, psi, psi_bar })
}

/// Jost pair `(a(lambda), b(lambda))` of the sampled signal.
///
/// The signal is taken to vanish outside the grid.
pub fn scatter<T: Real>(
    sig: &TimeSignal<T>,
    lambda: ComplexPoint<T>,
    cfg: &ScatterConfig<T>,
) -> Result<JostPair<T>> {
    if !is_finite_c(lambda) {
        return Err(NftError::InvalidInput("lambda must be finite".into()));
    }
    match cfg.scheme {
        Scheme::PiecewiseConstant2x2 => {
            let Some((first, end)) = support(sig) else {
                return Ok(JostPair::identity());
            };
            let cells = Cells::new(sig, lambda);
            let v = if cells.real {
                forward_real(&cells, first..end, cfg.overflow_bound)?
            } else {
                propagate_forward(&cells, first..end, [re(T::one()), re(T::zero())], cfg.overflow_bound)?
            };
            Ok(JostPair::new(v[0], v[1]))
        }
        Scheme::ForwardBackwardSplit => Ok(split(sig, lambda, cfg)?.jost()),
    }
}

/// Forward product on the real axis with the `e^{2j omega t}` factor advanced
/// by rotation and resynchronised every few hundred cells.
fn forward_real<T: Real>(
    cells: &Cells<'_, T>,
    range: std::ops::Range<usize>,
    bound: T,
) -> Result<[Cplx<T>; 2]> {
    const RESYNC: usize = 256;
    let step = Cplx::from_polar(T::one(), T::lit(2.0) * cells.lambda.re * cells.h);
    let mut v = [re(T::one()), re(T::zero())];
    let mut phase = re(T::one());
    for (count, i) in range.enumerate() {
        if count % RESYNC == 0 {
            phase = cells.phase(i);
        } else {
            phase = phase * step;
        }
        v = apply(&cells.matrix_with_phase(i, phase), v);
    }
    check_bound(&v, cells.lambda, bound)?;
    Ok(v)
}

/// Jost pairs on a real frequency grid. Frequencies are processed in parallel.
pub fn continuous_spectrum<T: Real>(
    sig: &TimeSignal<T>,
    grid: FrequencyGrid<T>,
    cfg: &ScatterConfig<T>,
) -> Result<ContinuousSpectrum<T>> {
    let pairs: Vec<JostPair<T>> = grid
        .omegas()
        .into_par_iter()
        .map(|w| scatter(sig, cplx(w, T::zero()), cfg))
        .collect::<Result<_>>()?;
    let floor = T::lit(1e-12);
    if let Some(i) = pairs.iter().position(|p| p.a.norm() < floor) {
        return Err(NftError::Division(format!(
            "|a(omega)| < 1e-12 at omega = {}",
            grid.omega(i)
        )));
    }
    let (a, b) = pairs.into_iter().map(|p| (p.a, p.b)).unzip();
    ContinuousSpectrum::new(grid, a, b)
}

/// Why a Newton seed did not produce a root.
#[derive(Debug, Clone, PartialEq)]
pub enum SeedFailure {
    /// `a` is locally constant; there is nothing to converge to.
    FlatObjective,
    /// An iterate left the open upper half-plane.
    LeftHalfPlane,
    /// Iteration budget exhausted.
    MaxIterations,
    /// The scattering of an iterate failed (typically overflow).
    Scattering(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeedReport<T> {
    pub seed: ComplexPoint<T>,
    pub failure: SeedFailure,
}

/// Result of a Newton eigenvalue search.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenSearch<T> {
    /// Distinct roots sorted by ascending imaginary part.
    pub roots: Vec<ComplexPoint<T>>,
    /// `|a|` at each root.
    pub residuals: Vec<T>,
    pub failed: Vec<SeedReport<T>>,
}

/// `da/dlambda` by central differences of [`scatter`].
pub fn a_derivative_fd<T: Real>(
    sig: &TimeSignal<T>,
    lambda: ComplexPoint<T>,
    cfg: &ScatterConfig<T>,
) -> Result<Cplx<T>> {
    let h = cfg.fd_step;
    let plus = scatter(sig, lambda + re(h), cfg)?.a;
    let minus = scatter(sig, lambda - re(h), cfg)?.a;
    Ok((plus - minus) / (T::lit(2.0) * h))
}

fn newton_root<T: Real>(
    sig: &TimeSignal<T>,
    seed: ComplexPoint<T>,
    cfg: &ScatterConfig<T>,
) -> std::result::Result<(ComplexPoint<T>, T), SeedFailure> {
    let scat = |z| scatter(sig, z, cfg).map_err(|e| SeedFailure::Scattering(e.to_string()));
    let mut z = seed;
    let mut best: Option<(ComplexPoint<T>, T)> = None;
    let mut polish = 0;
    for _ in 0..cfg.newton_max_iter {
        let a = scat(z)?.a;
        let res = a.norm();
        if res < cfg.newton_tol {
            if best.is_none_or(|(_, r)| res < r) {
                best = Some((z, res));
            }
            // a few extra steps while they still help; quadratic convergence
            // normally lands far below the tolerance
            polish += 1;
            if polish > 3 || res == T::zero() {
                break;
            }
        } else if best.is_some() {
            break;
        }
        let d = a_derivative_fd(sig, z, cfg).map_err(|e| SeedFailure::Scattering(e.to_string()))?;
        if !(d.norm() > T::zero()) || !is_finite_c(d) {
            return match best {
                Some(b) => Ok(b),
                None => Err(SeedFailure::FlatObjective),
            };
        }
        let step = a / d;
        if best.is_some() && step.norm() <= T::epsilon() * T::lit(64.0) * T::one().max(z.norm()) {
            break;
        }
        z = z - step;
        if !(z.im > T::zero()) {
            return match best {
                Some(b) => Ok(b),
                None => Err(SeedFailure::LeftHalfPlane),
            };
        }
    }
    best.ok_or(SeedFailure::MaxIterations)
}

/// Roots of `a(lambda)` reached by Newton from each seed.
///
/// Roots closer than `1e-4` are merged. Seeds that fail are reported in
/// [`EigenSearch::failed`]; the call errors only if every seed diverged. The
/// zero signal has no eigenvalues and returns an empty search.
pub fn find_eigenvalues<T: Real>(
    sig: &TimeSignal<T>,
    seeds: &[ComplexPoint<T>],
    cfg: &ScatterConfig<T>,
) -> Result<EigenSearch<T>> {
    cfg.validate()?;
    if let Some(s) = seeds.iter().find(|s| !(s.im > T::zero())) {
        return Err(NftError::HalfPlane {
            re: s.re.as_f64(),
            im: s.im.as_f64(),
        });
    }
    let mut search = EigenSearch {
        roots: Vec::new(),
        residuals: Vec::new(),
        failed: Vec::new(),
    };
    if sig.is_zero() {
        return Ok(search);
    }
    let outcomes: Vec<_> = seeds
        .par_iter()
        .map(|&s| (s, newton_root(sig, s, cfg)))
        .collect();
    let mut found: Vec<(ComplexPoint<T>, T)> = Vec::new();
    for (seed, outcome) in outcomes {
        match outcome {
            Ok(root) => found.push(root),
            Err(failure) => search.failed.push(SeedReport { seed, failure }),
        }
    }
    let diverged = search
        .failed
        .iter()
        .filter(|f| f.failure != SeedFailure::FlatObjective)
        .count();
    if !seeds.is_empty() && found.is_empty() && diverged == seeds.len() {
        return Err(NftError::NoConvergence(format!(
            "none of the {} seeds converged",
            seeds.len()
        )));
    }
    let merged = merge_roots(found, T::lit(1e-4));
    for (z, r) in merged {
        search.roots.push(z);
        search.residuals.push(r);
    }
    Ok(search)
}

/// Merges roots closer than `tol` (keeping the smaller residual) and sorts by
/// ascending imaginary part, then real part.
pub(crate) fn merge_roots<T: Real>(mut roots: Vec<(ComplexPoint<T>, T)>, tol: T) -> Vec<(ComplexPoint<T>, T)> {
    roots.sort_by(|x, y| x.1.partial_cmp(&y.1).unwrap());
    let mut kept: Vec<(ComplexPoint<T>, T)> = Vec::new();
    for r in roots {
        if kept.iter().all(|k| (k.0 - r.0).norm() >= tol) {
            kept.push(r);
        }
    }
    kept.sort_by(|x, y| {
        x.0.im
            .partial_cmp(&y.0.im)
            .unwrap()
            .then(x.0.re.partial_cmp(&y.0.re).unwrap())
    });
    kept
}

/// Scattering data at one discrete eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteAmplitude<T> {
    pub lambda: ComplexPoint<T>,
    pub b: Cplx<T>,
    pub a_prime: Cplx<T>,
    /// Norming constant `b / a'`.
    pub q_d: Cplx<T>,
}

/// `b`, `a'` and `Q_d` at verified eigenvalues.
///
/// With [`Scheme::ForwardBackwardSplit`] `b` is the ratio of the left and right
/// Jost solutions at the matching point; otherwise it is the forward `b`.
pub fn discrete_amplitudes<T: Real>(
    sig: &TimeSignal<T>,
    eigs: &[ComplexPoint<T>],
    cfg: &ScatterConfig<T>,
) -> Result<Vec<DiscreteAmplitude<T>>> {
    eigs.iter()
        .map(|&lambda| {
            let b = match cfg.scheme {
                Scheme::PiecewiseConstant2x2 => scatter(sig, lambda, cfg)?.b,
                Scheme::ForwardBackwardSplit => split(sig, lambda, cfg)?.bound_state_b(),
            };
            if !is_finite_c(b) {
                return Err(NftError::Overflow {
                    re: lambda.re.as_f64(),
                    im: lambda.im.as_f64(),
                    bound: cfg.overflow_bound.as_f64(),
                });
            }
            let a_prime = a_derivative_fd(sig, lambda, cfg)?;
            if a_prime.norm() == T::zero() {
                return Err(NftError::Division(format!("a'(lambda) = 0 at {lambda}")));
            }
            Ok(DiscreteAmplitude {
                lambda,
                b,
                a_prime,
                q_d: b / a_prime,
            })
        })
        .collect()
}

/// Edge threshold of [`energy_continuous`].
pub const ENERGY_EDGE_TOL: f64 = 1e-6;

/// Continuous-spectrum energy `-(1/pi) int ln |a(omega)|^2 d omega` by the
/// trapezoidal rule. Requires `|ln |a|^2| < 1e-6` at both grid edges.
pub fn energy_continuous<T: Real>(cs: &ContinuousSpectrum<T>) -> Result<T> {
    energy_continuous_with_edge_tol(cs, T::lit(ENERGY_EDGE_TOL))
}

/// [`energy_continuous`] with an explicit edge threshold.
pub fn energy_continuous_with_edge_tol<T: Real>(cs: &ContinuousSpectrum<T>, edge_tol: T) -> Result<T> {
    let log_a2: Vec<T> = cs.a().iter().map(|a| a.norm_sqr().ln()).collect();
    let edge = log_a2[0].abs().max(log_a2[log_a2.len() - 1].abs());
    if !(edge < edge_tol) {
        return Err(NftError::GridTooNarrow {
            edge: edge.as_f64(),
            tol: edge_tol.as_f64(),
        });
    }
    Ok(-trapezoid(&log_a2, cs.grid().step()) / T::PI())
}

pub(crate) fn trapezoid<T: Real>(values: &[T], step: T) -> T {
    let n = values.len();
    if n < 2 {
        return T::zero();
    }
    let inner = values[1..n - 1].iter().fold(T::zero(), |s, &v| s + v);
    (inner + (values[0] + values[n - 1]) / T::lit(2.0)) * step
}

/// Jost data of a segment at `lambda` together with the conjugate-point values
/// `(a*(lambda*), b*(lambda*))`. On the real axis the latter are plain
/// conjugates, see [`SegmentJost::real`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SegmentJost<T> {
    pub at: JostPair<T>,
    pub conj: JostPair<T>,
}

impl<T: Real> SegmentJost<T> {
    pub fn new(at: JostPair<T>, conj: JostPair<T>) -> Self {
        Self { at, conj }
    }

    pub fn real(at: JostPair<T>) -> Self {
        Self {
            at,
            conj: at.conj_point_real(),
        }
    }

    pub fn identity() -> Self {
        Self::real(JostPair::identity())
    }

    /// Data of `self` followed (in time) by `right`.
    pub fn then(&self, right: &SegmentJost<T>) -> SegmentJost<T> {
        let (l, lb, r, rb) = (self.at, self.conj, right.at, right.conj);
        SegmentJost {
            at: JostPair::new(r.a * l.a - rb.b * l.b, r.b * l.a + rb.a * l.b),
            conj: JostPair::new(rb.a * lb.a - r.b * lb.b, r.a * lb.b + rb.b * lb.a),
        }
    }
}

/// Jost pair of the concatenation left | mid | right of three signals with
/// disjoint, ordered supports (layer peeling).
pub fn compose_segments<T: Real>(
    left: &SegmentJost<T>,
    mid: &SegmentJost<T>,
    right: &SegmentJost<T>,
) -> JostPair<T> {
    let (al, bl) = (left.at.a, left.at.b);
    let (at, bt, at_c, bt_c) = (mid.at.a, mid.at.b, mid.conj.a, mid.conj.b);
    let (ar, br, ar_c, br_c) = (right.at.a, right.at.b, right.conj.a, right.conj.b);
    JostPair::new(
        al * at * ar - bl * bt_c * ar - al * bt * br_c - bl * at_c * br_c,
        al * at * br - bl * bt_c * br + al * bt * ar_c + bl * at_c * ar_c,
    )
}
