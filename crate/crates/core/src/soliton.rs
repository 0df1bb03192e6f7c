//! Multi-soliton synthesis and closed-form soliton scattering data.
//!
//! Pulses are built with the Darboux transformation starting from the zero
//! potential. For the seed of eigenvalue `lambda_k` we use the zero-potential
//! solution `(e^{-j lambda_k t}, -b_k e^{j lambda_k t})`; with that choice the
//! synthesized pulse has `b(lambda_k) = b_k` exactly, independently of the
//! order in which eigenvalues are added.

use crate::error::{NftError, Result};
use crate::scalar::{cplx, j, re, sech, Cplx, Real};
use crate::spectra::{ComplexPoint, DiscreteSpectrum, TimeGrid, TimeSignal};

/// Product of Moebius factors `prod_k (lambda - zero_k) / (lambda - pole_k)`.
pub(crate) fn mobius_product<T: Real>(lambda: Cplx<T>, factors: &[(Cplx<T>, Cplx<T>)]) -> Result<Cplx<T>> {
    let mut acc = re(T::one());
    for &(zero, pole) in factors {
        let den = lambda - pole;
        if den.norm() <= pole_guard(pole) {
            return Err(NftError::Pole {
                re: lambda.re.as_f64(),
                im: lambda.im.as_f64(),
            });
        }
        acc = acc * (lambda - zero) / den;
    }
    Ok(acc)
}

/// Derivative of [`mobius_product`] by the product rule; well defined at the zeros.
pub(crate) fn mobius_product_derivative<T: Real>(
    lambda: Cplx<T>,
    factors: &[(Cplx<T>, Cplx<T>)],
) -> Result<Cplx<T>> {
    let mut values = Vec::with_capacity(factors.len());
    for &(zero, pole) in factors {
        let den = lambda - pole;
        if den.norm() <= pole_guard(pole) {
            return Err(NftError::Pole {
                re: lambda.re.as_f64(),
                im: lambda.im.as_f64(),
            });
        }
        values.push(((lambda - zero) / den, (zero - pole) / (den * den)));
    }
    let mut total = re(T::zero());
    for k in 0..values.len() {
        let mut term = values[k].1;
        for (i, v) in values.iter().enumerate() {
            if i != k {
                term = term * v.0;
            }
        }
        total = total + term;
    }
    Ok(total)
}

fn pole_guard<T: Real>(pole: Cplx<T>) -> T {
    T::epsilon() * T::lit(16.0) * T::one().max(pole.norm())
}

fn blaschke_factors<T: Real>(ds: &DiscreteSpectrum<T>) -> Vec<(Cplx<T>, Cplx<T>)> {
    ds.entries().iter().map(|e| (e.lambda, e.lambda.conj())).collect()
}

/// `a(lambda) = prod_k (lambda - lambda_k) / (lambda - lambda_k^*)`.
pub fn a_closed_form<T: Real>(ds: &DiscreteSpectrum<T>, lambda: ComplexPoint<T>) -> Result<Cplx<T>> {
    mobius_product(lambda, &blaschke_factors(ds))
}

/// `da/dlambda` of [`a_closed_form`].
pub fn a_derivative_closed_form<T: Real>(
    ds: &DiscreteSpectrum<T>,
    lambda: ComplexPoint<T>,
) -> Result<Cplx<T>> {
    mobius_product_derivative(lambda, &blaschke_factors(ds))
}

/// Norming constants `Q_d(lambda_k) = b(lambda_k) / a'(lambda_k)`.
pub fn norming_constants<T: Real>(ds: &DiscreteSpectrum<T>) -> Result<Vec<Cplx<T>>> {
    ds.entries()
        .iter()
        .map(|e| Ok(e.b / a_derivative_closed_form(ds, e.lambda)?))
        .collect()
}

/// Direction of the zero-potential seed `(1, -b e^{2j lambda t})`, scaled so the
/// larger component has unit modulus.
fn seed<T: Real>(lambda: Cplx<T>, b: Cplx<T>, t: T) -> [Cplx<T>; 2] {
    let two = T::lit(2.0);
    let log_mag = b.norm().ln() - two * lambda.im * t;
    let phase = b.arg() + two * lambda.re * t + T::PI();
    if log_mag > T::zero() {
        [Cplx::from_polar((-log_mag).exp(), -phase), re(T::one())]
    } else {
        [re(T::one()), Cplx::from_polar(log_mag.exp(), phase)]
    }
}

fn normalize<T: Real>(v: &mut [Cplx<T>; 2]) {
    let n = v[0].norm().max(v[1].norm());
    if n > T::zero() {
        v[0] = v[0] / n;
        v[1] = v[1] / n;
    }
}

/// Darboux-dressed potential at a single time.
fn dressed_sample<T: Real>(ds: &DiscreteSpectrum<T>, t: T) -> Cplx<T> {
    let entries = ds.entries();
    let mut phis: Vec<[Cplx<T>; 2]> = entries.iter().map(|e| seed(e.lambda, e.b, t)).collect();
    let mut q = re(T::zero());
    let four = T::lit(4.0);
    for n in 0..entries.len() {
        let lam_n = entries[n].lambda;
        let sigma = lam_n.im;
        let phi = phis[n];
        let norm2 = phi[0].norm_sqr() + phi[1].norm_sqr();
        q = q + phi[0] * phi[1].conj() * (four * sigma / norm2);
        // (lambda_m - S) phi_m with S = lambda_n^* I + 2j sigma_n phi phi^dagger / |phi|^2
        let coef = j::<T>() * (T::lit(2.0) * sigma / norm2);
        for m in n + 1..entries.len() {
            let v = phis[m];
            let proj = phi[0].conj() * v[0] + phi[1].conj() * v[1];
            let shift = entries[m].lambda - lam_n.conj();
            let mut w = [shift * v[0] - coef * proj * phi[0], shift * v[1] - coef * proj * phi[1]];
            normalize(&mut w);
            phis[m] = w;
        }
    }
    q
}

/// N-soliton pulse with discrete spectrum `ds`, sampled on `grid`.
///
/// Eigenvalues are added in ascending order of imaginary part.
pub fn synthesize<T: Real>(ds: &DiscreteSpectrum<T>, grid: TimeGrid<T>) -> Result<TimeSignal<T>> {
    TimeSignal::from_fn(grid, |t| dressed_sample(ds, t))
}

/// True when every eigenvalue is pure imaginary and every `|b_k| = 1`, both up to `tol`.
pub fn is_symmetric<T: Real>(ds: &DiscreteSpectrum<T>, tol: T) -> bool {
    ds.entries()
        .iter()
        .all(|e| e.lambda.re.abs() <= tol && (e.b.norm() - T::one()).abs() <= tol)
}

/// Parameters of the sech approximation of the pulse tails, driven by the
/// eigenvalue `lambda_1 = omega1 + j sigma1` with the smallest imaginary part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailParams<T> {
    pub sigma1: T,
    pub omega1: T,
    pub t0: T,
    pub phi0: T,
    pub phi_left: T,
    pub phi_right: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

fn wrap_pi<T: Real>(x: T) -> T {
    let two_pi = T::lit(2.0) * T::PI();
    let mut y = x;
    while y > T::PI() {
        y = y - two_pi;
    }
    while y <= -T::PI() {
        y = y + two_pi;
    }
    y
}

/// Offset `t0` and phases of the tail approximation.
///
/// `phi0` is the plain sum of the principal arguments (each in `(-pi, pi]`),
/// not reduced modulo `2 pi`.
pub fn tail_parameters<T: Real>(ds: &DiscreteSpectrum<T>) -> Result<TailParams<T>> {
    let entries = ds.entries();
    let first = entries
        .first()
        .ok_or_else(|| NftError::InvalidInput("tail parameters need at least one eigenvalue".into()))?;
    let lam1 = first.lambda;
    let tie = T::lit(1e-9) * T::one().max(lam1.im);
    if let Some(second) = entries.get(1) {
        if (second.lambda.im - lam1.im).abs() <= tie {
            return Err(NftError::DegenerateSigma(lam1.im.as_f64()));
        }
    }
    let mut phi0 = T::zero();
    let mut log_sum = T::zero();
    for e in &entries[1..] {
        let num = lam1 - e.lambda.conj();
        let den = lam1 - e.lambda;
        phi0 = phi0 + wrap_pi(num.arg() - den.arg());
        log_sum = log_sum + (num.norm() / den.norm()).ln();
    }
    let sigma1 = lam1.im;
    let t0 = log_sum / (T::lit(2.0) * sigma1);
    let arg_b = first.b.arg();
    Ok(TailParams {
        sigma1,
        omega1: lam1.re,
        t0,
        phi0,
        phi_left: arg_b - phi0,
        phi_right: arg_b + phi0,
    })
}

/// `-2 sigma1 e^{-j phi_side - 2j omega1 t} sech(2 sigma1 (t -+ t0))`.
///
/// Accurate for `t < -t0` (left) and `t > t0` (right), best when `|t| >> t0`.
pub fn tail_approximation<T: Real>(tp: &TailParams<T>, side: Side, t: T) -> Cplx<T> {
    let two = T::lit(2.0);
    let (phi, center) = match side {
        Side::Left => (tp.phi_left, -tp.t0),
        Side::Right => (tp.phi_right, tp.t0),
    };
    let mag = -two * tp.sigma1 * sech(two * tp.sigma1 * (t - center));
    Cplx::from_polar(T::one(), -phi - two * tp.omega1 * t) * mag
}

/// Convenience: eigenvalue `j sigma`.
pub fn imaginary<T: Real>(sigma: T) -> ComplexPoint<T> {
    cplx(T::zero(), sigma)
}
