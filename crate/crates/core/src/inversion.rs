//! Eigenvalues from continuous-spectrum data.
//!
//! On the real axis `a(omega) = ra[b](omega) G(omega)` where the radiation factor
//! `ra[b] = sqrt(1 - |b|^2) exp((j/2) H[ln(1 - |b|^2)])` carries the continuous
//! part and the all-pass `G(omega) = prod_k (omega - lambda_k) / (omega - lambda_k^*)`
//! carries the eigenvalues.
//!
//! `H` is the Hilbert transform `H[f](x) = (1/pi) p.v. int f(s) / (x - s) ds`,
//! so `H[cos] = sin` and `H[1/(1+x^2)] = x/(1+x^2)`. On a DFT grid this is the
//! multiplier `-j sgn(k)`. With this sign `ra[b]` is the boundary value of a
//! function analytic in the upper half-plane, as `a` must be.

use nalgebra::{DMatrix, DVector};
use rustfft::FftPlanner;

use crate::error::{NftError, Result};
use crate::scalar::{cplx, is_finite_c, j, re, Cplx, Real};
use crate::scattering::trapezoid;
use crate::soliton::mobius_product;
use crate::spectra::{ComplexPoint, ContinuousSpectrum};

/// Sign of the Hilbert multiplier `-j sgn(k)`; flips the kernel as well.
pub const HILBERT_SIGN: f64 = -1.0;

/// Default edge threshold for inputs of [`hilbert`].
pub const HILBERT_EDGE_TOL: f64 = 1e-6;

/// Discrete Hilbert transform of samples on a uniform grid.
///
/// Requires `|f| < 1e-6` at both ends, since the samples are zero-extended.
pub fn hilbert<T: Real>(f: &[T]) -> Result<Vec<T>> {
    hilbert_with_edge_tol(f, T::lit(HILBERT_EDGE_TOL))
}

/// [`hilbert`] with an explicit edge threshold.
pub fn hilbert_with_edge_tol<T: Real>(f: &[T], edge_tol: T) -> Result<Vec<T>> {
    let n = f.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    if f.iter().any(|v| !v.is_finite()) {
        return Err(NftError::InvalidInput("hilbert input must be finite".into()));
    }
    let edge = f[0].abs().max(f[n - 1].abs());
    if !(edge < edge_tol) {
        return Err(NftError::EdgeDecay {
            edge: edge.as_f64(),
            tol: edge_tol.as_f64(),
        });
    }
    // Aperiodic discrete convolution with the kernel of the multiplier,
    // 2 / (pi m) on odd offsets m, done by FFT on a buffer long enough that
    // nothing wraps around.
    let len = (2 * n).next_power_of_two();
    let mut data: Vec<Cplx<T>> = f.iter().map(|&v| re(v)).collect();
    data.resize(len, re(T::zero()));
    let mut kernel = vec![re(T::zero()); len];
    let c = T::lit(-2.0 * HILBERT_SIGN) / T::PI();
    for m in (1..n).step_by(2) {
        let v = c / T::from_usize_lossy(m);
        kernel[m] = re(v);
        kernel[len - m] = re(-v);
    }
    let mut planner = FftPlanner::<T>::new();
    let fwd = planner.plan_fft_forward(len);
    fwd.process(&mut data);
    fwd.process(&mut kernel);
    let mut buf: Vec<Cplx<T>> = data.iter().zip(&kernel).map(|(a, b)| a * b).collect();
    planner.plan_fft_inverse(len).process(&mut buf);
    let scale = T::one() / T::from_usize_lossy(len);
    Ok(buf[..n].iter().map(|z| z.re * scale).collect())
}

fn log_one_minus_b2<T: Real>(cs: &ContinuousSpectrum<T>) -> Result<Vec<T>> {
    cs.omegas()
        .iter()
        .zip(cs.b())
        .map(|(&w, b)| {
            let m = b.norm_sqr();
            if !(m < T::one()) {
                return Err(NftError::Supercritical { omega: w.as_f64() });
            }
            Ok((T::one() - m).ln())
        })
        .collect()
}

/// Radiation factor `sqrt(1 - |b|^2) exp((j/2) H[ln(1 - |b|^2)])` on the grid.
pub fn radiation_a<T: Real>(cs: &ContinuousSpectrum<T>) -> Result<Vec<Cplx<T>>> {
    radiation_a_with_edge_tol(cs, T::lit(HILBERT_EDGE_TOL))
}

/// [`radiation_a`] with an explicit edge threshold for the Hilbert transform.
pub fn radiation_a_with_edge_tol<T: Real>(cs: &ContinuousSpectrum<T>, edge_tol: T) -> Result<Vec<Cplx<T>>> {
    let l = log_one_minus_b2(cs)?;
    let h = hilbert_with_edge_tol(&l, edge_tol)?;
    let half = T::lit(0.5);
    Ok(l.iter().zip(&h).map(|(&lv, &hv)| cplx(lv * half, hv * half).exp()).collect())
}

/// All-pass factor `G = a / ra[b]`.
pub fn allpass<T: Real>(cs: &ContinuousSpectrum<T>) -> Result<Vec<Cplx<T>>> {
    allpass_with_edge_tol(cs, T::lit(HILBERT_EDGE_TOL))
}

pub fn allpass_with_edge_tol<T: Real>(cs: &ContinuousSpectrum<T>, edge_tol: T) -> Result<Vec<Cplx<T>>> {
    let ra = radiation_a_with_edge_tol(cs, edge_tol)?;
    Ok(cs.a().iter().zip(&ra).map(|(a, r)| a / r).collect())
}

/// Largest phase step between neighbouring samples that is still trusted.
///
/// Steps are taken as the principal argument of the ratio of neighbours, so
/// they never exceed `pi` in magnitude; anything near `pi` could belong to
/// either branch. Requiring less than `pi / 2` leaves a margin of a factor two.
pub const PHASE_STEP_LIMIT: f64 = std::f64::consts::FRAC_PI_2;

/// Unwrapped phase of `G`; errors if a step between neighbours reaches
/// [`PHASE_STEP_LIMIT`].
pub fn unwrapped_phase<T: Real>(g: &[Cplx<T>]) -> Result<Vec<T>> {
    let mut out = Vec::with_capacity(g.len());
    let mut acc = T::zero();
    for (i, z) in g.iter().enumerate() {
        if !is_finite_c(*z) || z.norm() == T::zero() {
            return Err(NftError::InvalidInput(format!("G[{i}] has no phase")));
        }
        if i == 0 {
            acc = z.arg();
        } else {
            // principal argument of the ratio is the nearest-branch step
            let step = (z / g[i - 1]).arg();
            if step.abs() >= T::lit(PHASE_STEP_LIMIT) {
                return Err(NftError::PhaseJump {
                    index: i,
                    step: step.as_f64(),
                });
            }
            acc = acc + step;
        }
        out.push(acc);
    }
    Ok(out)
}

/// Winding number of `G` over the grid: `round((theta(end) - theta(start)) / 2 pi)`.
///
/// Errors with [`NftError::PhaseJump`] when the grid is too coarse to unwrap.
pub fn count_eigenvalues<T: Real>(g: &[Cplx<T>]) -> Result<usize> {
    if g.len() < 2 {
        return Ok(0);
    }
    let theta = unwrapped_phase(g)?;
    let turns = (theta[theta.len() - 1] - theta[0]) / (T::lit(2.0) * T::PI());
    let n = turns.round();
    if n < T::zero() {
        return Err(NftError::IllPosed(format!("negative winding number {n}")));
    }
    Ok(n.to_usize().unwrap_or(0))
}

/// Result of [`fit_eigenvalues`].
#[derive(Debug, Clone, PartialEq)]
pub struct FitReport<T> {
    /// Ascending imaginary part.
    pub eigenvalues: Vec<ComplexPoint<T>>,
    /// `sum_i |G_model(omega_i) - G(omega_i)|^2` at the returned eigenvalues.
    pub residual: T,
    /// Same sum at the seeds.
    pub seed_residual: T,
    pub iterations: usize,
}

/// Blaschke product `prod_k (omega - lambda_k) / (omega - lambda_k^*)`.
pub fn blaschke<T: Real>(omega: T, eigs: &[ComplexPoint<T>]) -> Result<Cplx<T>> {
    let factors: Vec<_> = eigs.iter().map(|&l| (l, l.conj())).collect();
    mobius_product(re(omega), &factors)
}

fn params_to_eigs(p: &DVector<f64>) -> Vec<Cplx<f64>> {
    (0..p.len() / 2).map(|k| Cplx::new(p[2 * k], p[2 * k + 1].exp())).collect()
}

fn fit_residuals(p: &DVector<f64>, omegas: &[f64], g: &[Cplx<f64>]) -> DVector<f64> {
    let eigs = params_to_eigs(p);
    let mut r = DVector::zeros(2 * omegas.len());
    for (i, (&w, gi)) in omegas.iter().zip(g).enumerate() {
        let m = eigs
            .iter()
            .fold(Cplx::new(1.0, 0.0), |acc, l| acc * (w - l) / (w - l.conj()));
        let d = m - gi;
        r[2 * i] = d.re;
        r[2 * i + 1] = d.im;
    }
    r
}

fn fit_jacobian(p: &DVector<f64>, omegas: &[f64]) -> DMatrix<f64> {
    let eigs = params_to_eigs(p);
    let n = eigs.len();
    let mut jac = DMatrix::zeros(2 * omegas.len(), 2 * n);
    let jj = Cplx::new(0.0, 1.0);
    for (i, &w) in omegas.iter().enumerate() {
        let m = eigs
            .iter()
            .fold(Cplx::new(1.0, 0.0), |acc, l| acc * (w - l) / (w - l.conj()));
        for (k, l) in eigs.iter().enumerate() {
            let (u, v) = (1.0 / (w - l), 1.0 / (w - l.conj()));
            // d/d Re(lambda) and d/d s with Im(lambda) = e^s
            let d_re = m * (v - u);
            let d_s = m * (-jj * (u + v)) * l.im;
            jac[(2 * i, 2 * k)] = d_re.re;
            jac[(2 * i + 1, 2 * k)] = d_re.im;
            jac[(2 * i, 2 * k + 1)] = d_s.re;
            jac[(2 * i + 1, 2 * k + 1)] = d_s.im;
        }
    }
    jac
}

/// Least-squares all-pass fit of `n` eigenvalues to samples `g` at `omegas`.
///
/// Levenberg-Marquardt over `lambda_k = omega_k + j e^{s_k}`, which keeps the
/// iterates in the upper half-plane. The fit runs in `f64`.
pub fn fit_eigenvalues<T: Real>(
    omegas: &[T],
    g: &[Cplx<T>],
    n: usize,
    seeds: &[ComplexPoint<T>],
) -> Result<FitReport<T>> {
    if omegas.len() != g.len() {
        return Err(NftError::GridMismatch(format!(
            "{} frequencies but {} samples",
            omegas.len(),
            g.len()
        )));
    }
    let omegas: Vec<f64> = omegas.iter().map(|w| w.as_f64()).collect();
    let g: Vec<Cplx<f64>> = g.iter().map(|z| Cplx::new(z.re.as_f64(), z.im.as_f64())).collect();
    let back = |v: f64| T::lit(v);
    if n == 0 {
        let r = fit_residuals(&DVector::zeros(0), &omegas, &g).norm_squared();
        return Ok(FitReport {
            eigenvalues: Vec::new(),
            residual: back(r),
            seed_residual: back(r),
            iterations: 0,
        });
    }
    if seeds.len() != n {
        return Err(NftError::InvalidInput(format!("{} seeds for {n} eigenvalues", seeds.len())));
    }
    if let Some(s) = seeds.iter().find(|s| !(s.im > T::zero())) {
        return Err(NftError::HalfPlane {
            re: s.re.as_f64(),
            im: s.im.as_f64(),
        });
    }
    let winding = count_eigenvalues(&g)?;
    if n > winding {
        return Err(NftError::IllPosed(format!(
            "{n} eigenvalues requested but the winding number is {winding}"
        )));
    }
    let mut p = DVector::from_iterator(
        2 * n,
        seeds.iter().flat_map(|s| [s.re.as_f64(), s.im.as_f64().ln()]),
    );
    let mut r = fit_residuals(&p, &omegas, &g);
    let mut cost = r.norm_squared();
    let seed_cost = cost;
    let mut mu = -1.0;
    let mut converged = false;
    let mut iterations = 0;
    const MAX_ITER: usize = 500;
    while iterations < MAX_ITER {
        iterations += 1;
        let jac = fit_jacobian(&p, &omegas);
        let jt = jac.transpose();
        let jtj = &jt * &jac;
        let grad = &jt * &r;
        if mu < 0.0 {
            mu = 1e-3 * jtj.diagonal().max();
        }
        if grad.amax() <= 1e-15 * (1.0 + cost) {
            converged = true;
            break;
        }
        let mut improved = false;
        for _ in 0..60 {
            let mut a = jtj.clone();
            for d in 0..a.nrows() {
                a[(d, d)] += mu * (1.0 + jtj[(d, d)]);
            }
            let Some(step) = a.cholesky().map(|c| c.solve(&(-&grad))) else {
                mu *= 4.0;
                continue;
            };
            let trial = &p + &step;
            let tr = fit_residuals(&trial, &omegas, &g);
            let tc = tr.norm_squared();
            if tc.is_finite() && tc <= cost {
                let small = step.amax() <= 1e-13 * (1.0 + p.amax());
                let stalled = cost - tc <= 1e-15 * cost;
                p = trial;
                r = tr;
                cost = tc;
                mu = (mu / 3.0).max(1e-20);
                improved = true;
                if small || stalled {
                    converged = true;
                }
                break;
            }
            mu *= 4.0;
        }
        if !improved {
            // no descent direction left at any damping: a local minimum
            converged = true;
        }
        if converged {
            break;
        }
    }
    if !converged || !cost.is_finite() {
        return Err(NftError::NoConvergence(format!(
            "all-pass fit did not converge in {MAX_ITER} iterations (residual {cost:e})"
        )));
    }
    let mut eigs: Vec<ComplexPoint<T>> = params_to_eigs(&p)
        .into_iter()
        .map(|z| cplx(back(z.re), back(z.im)))
        .collect();
    eigs.sort_by(|x, y| x.im.partial_cmp(&y.im).unwrap());
    Ok(FitReport {
        eigenvalues: eigs,
        residual: back(cost),
        seed_residual: back(seed_cost),
        iterations,
    })
}

/// `a(lambda)` in the upper half-plane from `b` on the real grid and the eigenvalues:
///
/// ```text
/// a(lambda) = exp( (1/2 pi j) int ln(1 - |b(w)|^2) / (w - lambda) dw ) prod_k (lambda - lambda_k)/(lambda - lambda_k^*)
/// ```
///
/// The integral is a trapezoidal sum over the grid, which should reach far
/// enough for `ln(1 - |b|^2)` to be negligible at the ends. Near the real axis
/// the kernel is sharper than the grid, so the value of the log at `Re lambda`
/// (linearly interpolated) is subtracted first and its kernel integral added
/// back in closed form.
pub fn a_from_b_trace<T: Real>(
    lambda: ComplexPoint<T>,
    cs: &ContinuousSpectrum<T>,
    eigs: &[ComplexPoint<T>],
) -> Result<Cplx<T>> {
    if !(lambda.im > T::zero()) {
        return Err(NftError::HalfPlane {
            re: lambda.re.as_f64(),
            im: lambda.im.as_f64(),
        });
    }
    let l = log_one_minus_b2(cs)?;
    let omegas = cs.omegas();
    let h = cs.grid().step();
    let (lo, hi) = (omegas[0], omegas[omegas.len() - 1]);
    let anchor = if lambda.re >= lo && lambda.re <= hi && omegas.len() > 1 {
        let pos = ((lambda.re - lo) / h).to_usize().unwrap_or(0).min(omegas.len() - 2);
        let frac = (lambda.re - omegas[pos]) / h;
        l[pos] + (l[pos + 1] - l[pos]) * frac
    } else {
        T::zero()
    };
    let integrand: Vec<Cplx<T>> = l
        .iter()
        .zip(&omegas)
        .map(|(&v, &w)| re(v - anchor) / (re(w) - lambda))
        .collect();
    let re_part: Vec<T> = integrand.iter().map(|z| z.re).collect();
    let im_part: Vec<T> = integrand.iter().map(|z| z.im).collect();
    // both logs have arguments in (-pi, 0), so the principal branch is continuous
    let kernel = (re(hi) - lambda).ln() - (re(lo) - lambda).ln();
    let integral = cplx(trapezoid(&re_part, h), trapezoid(&im_part, h)) + kernel * anchor;
    let radiation = (integral / (j::<T>() * (T::lit(2.0) * T::PI()))).exp();
    let factors: Vec<_> = eigs.iter().map(|&e| (e, e.conj())).collect();
    Ok(radiation * mobius_product(lambda, &factors)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectra::{FrequencyGrid, JostPair};
    use proptest::prelude::*;

    type C = Cplx<f64>;

    fn grid(max: f64, n: usize) -> (FrequencyGrid<f64>, Vec<f64>) {
        let g = FrequencyGrid::new(max, n).unwrap();
        let w = g.omegas();
        (g, w)
    }

    #[test]
    fn hilbert_of_zero() {
        assert_eq!(hilbert(&[0.0f64; 64]).unwrap(), vec![0.0; 64]);
    }

    #[test]
    fn hilbert_of_lorentzian() {
        let (_, w) = grid(50.0, 1 << 12);
        let f: Vec<f64> = w.iter().map(|x| 1.0 / (1.0 + x * x)).collect();
        // f(50) = 4e-4, so the default edge guard rejects this input
        assert!(matches!(hilbert(&f), Err(NftError::EdgeDecay { .. })));
        let h = hilbert_with_edge_tol(&f, 1e-3).unwrap();
        let err = w
            .iter()
            .zip(&h)
            .map(|(x, hv)| (hv - x / (1.0 + x * x)).abs())
            .fold(0.0, f64::max);
        assert!(err < 1e-3, "{err}");
    }

    #[test]
    fn hilbert_of_gaussian_derivative_pair() {
        // H[e^{-x^2}] is the Dawson function 2/sqrt(pi) D(x); check the odd symmetry
        // and the value at 0 instead of tabulating D
        let (_, w) = grid(10.0, 2001);
        let f: Vec<f64> = w.iter().map(|x| (-x * x).exp()).collect();
        let h = hilbert(&f).unwrap();
        assert!(h[1000].abs() < 1e-12);
        for i in 0..1000 {
            assert!((h[i] + h[2000 - i]).abs() < 1e-12);
        }
        // D(1) = 0.5380795069127684
        let expect = 2.0 / std::f64::consts::PI.sqrt() * 0.538_079_506_912_768_4;
        assert!((h[1100] - expect).abs() < 1e-4, "{} vs {expect}", h[1100]);
    }

    #[test]
    fn radiation_of_zero_b_is_one() {
        let (g, _) = grid(10.0, 101);
        let cs = ContinuousSpectrum::from_fn(g, |_| JostPair::identity()).unwrap();
        assert!(radiation_a(&cs).unwrap().iter().all(|z| (z - C::new(1.0, 0.0)).norm() < 1e-15));
    }

    #[test]
    fn supercritical_b_rejected() {
        let (g, _) = grid(1.0, 11);
        let cs = ContinuousSpectrum::from_fn(g, |_| JostPair::new(C::new(0.0, 0.0), C::new(1.0, 0.0))).unwrap();
        assert!(matches!(radiation_a(&cs), Err(NftError::Supercritical { .. })));
    }

    #[test]
    fn allpass_of_pure_soliton_is_blaschke() {
        let eigs = [C::new(0.0, 1.0)];
        let (g, w) = grid(20.0, 401);
        let cs = ContinuousSpectrum::from_fn(g, |x| JostPair::new(blaschke(x, &eigs).unwrap(), C::new(0.0, 0.0))).unwrap();
        let gp = allpass(&cs).unwrap();
        assert!((gp[200] - C::new(-1.0, 0.0)).norm() < 1e-15);
        for (x, v) in w.iter().zip(&gp) {
            assert!((v - blaschke(*x, &eigs).unwrap()).norm() < 1e-15);
        }
    }

    #[test]
    fn winding_counts() {
        let (_, w) = grid(20.0, 801);
        let one: Vec<C> = w.iter().map(|&x| blaschke(x, &[C::new(0.0, 1.0)]).unwrap()).collect();
        assert_eq!(count_eigenvalues(&one).unwrap(), 1);
        assert_eq!(count_eigenvalues(&[C::new(1.0, 0.0); 10]).unwrap(), 0);
        let four = [0.5, 1.0, 1.5, 2.0].map(|s| C::new(0.0, s));
        let g4: Vec<C> = w.iter().map(|&x| blaschke(x, &four).unwrap()).collect();
        assert_eq!(count_eigenvalues(&g4).unwrap(), 4);
    }

    #[test]
    fn coarse_grid_phase_jump() {
        let g: Vec<C> = [-1.0, 0.0, 1.0]
            .iter()
            .map(|&x| blaschke(x, &[C::new(0.0, 0.01)]).unwrap())
            .collect();
        assert!(matches!(count_eigenvalues(&g), Err(NftError::PhaseJump { .. })));
    }

    #[test]
    fn fit_recovers_exact_blaschke() {
        let truth = [0.5, 1.0, 1.5, 2.0].map(|s| C::new(0.0, s));
        let (_, w) = grid(20.0, 1024);
        let g: Vec<C> = w.iter().map(|&x| blaschke(x, &truth).unwrap()).collect();
        let seeds: Vec<C> = truth.iter().map(|l| l + C::new(0.1, -0.1)).collect();
        let rep = fit_eigenvalues(&w, &g, 4, &seeds).unwrap();
        for (got, want) in rep.eigenvalues.iter().zip(&truth) {
            assert!((got - want).norm() < 1e-6, "{got} vs {want}");
        }
        assert!(rep.residual <= rep.seed_residual);
    }

    #[test]
    fn fit_with_no_eigenvalues() {
        let (_, w) = grid(5.0, 11);
        let g = vec![C::new(1.0, 0.0); 11];
        let rep = fit_eigenvalues(&w, &g, 0, &[]).unwrap();
        assert!(rep.eigenvalues.is_empty() && rep.residual == 0.0);
    }

    #[test]
    fn fit_rejects_excess_eigenvalues() {
        let (_, w) = grid(20.0, 401);
        let g: Vec<C> = w.iter().map(|&x| blaschke(x, &[C::new(0.0, 1.0)]).unwrap()).collect();
        let r = fit_eigenvalues(&w, &g, 2, &[C::new(0.0, 0.5), C::new(0.0, 1.0)]);
        assert!(matches!(r, Err(NftError::IllPosed(_))));
    }

    #[test]
    fn trace_formula_without_radiation_is_blaschke() {
        let eigs = [C::new(0.0, 0.5), C::new(0.3, 1.2)];
        let (g, _) = grid(10.0, 201);
        let cs = ContinuousSpectrum::from_fn(g, |_| JostPair::identity()).unwrap();
        let lam = C::new(0.2, 0.7);
        let got = a_from_b_trace(lam, &cs, &eigs).unwrap();
        let want = mobius_product(lam, &[(eigs[0], eigs[0].conj()), (eigs[1], eigs[1].conj())]).unwrap();
        assert!((got - want).norm() < 1e-15);
        assert!((a_from_b_trace(C::new(0.0, 1e6), &cs, &eigs).unwrap() - C::new(1.0, 0.0)).norm() < 1e-5);
        assert!(matches!(a_from_b_trace(C::new(0.0, -1.0), &cs, &eigs), Err(NftError::HalfPlane { .. })));
    }

    proptest! {
        #[test]
        fn hilbert_is_linear(a in -3.0f64..3.0, b in -3.0f64..3.0, s in 0.5f64..2.0) {
            let (_, w) = grid(15.0, 512);
            let f: Vec<f64> = w.iter().map(|x| (-x * x).exp()).collect();
            let g: Vec<f64> = w.iter().map(|x| x * (-(x * s).powi(2)).exp()).collect();
            let mix: Vec<f64> = f.iter().zip(&g).map(|(u, v)| a * u + b * v).collect();
            let (hf, hg, hm) = (hilbert(&f).unwrap(), hilbert(&g).unwrap(), hilbert(&mix).unwrap());
            for i in 0..w.len() {
                prop_assert!((hm[i] - a * hf[i] - b * hg[i]).abs() < 1e-13);
            }
        }

        #[test]
        fn radiation_modulus(amp in 0.0f64..0.9, width in 0.5f64..3.0) {
            let (g, _) = grid(20.0, 256);
            let cs = ContinuousSpectrum::from_fn(g, |x| {
                let b = C::new(amp * (-(x / width).powi(2)).exp(), 0.0);
                JostPair::new(C::new((1.0 - b.norm_sqr()).sqrt(), 0.0), b)
            }).unwrap();
            let ra = radiation_a(&cs).unwrap();
            for (r, b) in ra.iter().zip(cs.b()) {
                prop_assert!((r.norm_sqr() + b.norm_sqr() - 1.0).abs() < 1e-14);
            }
        }

        #[test]
        fn winding_is_stable_under_refinement(s1 in 0.5f64..2.0, s2 in 0.5f64..2.0, w2 in -3.0f64..3.0) {
            prop_assume!((s1 - s2).abs() > 1e-3 || w2.abs() > 1e-3);
            let eigs = [C::new(0.0, s1), C::new(w2, s2)];
            let (g, _) = grid(40.0, 801);
            let count = |grid: FrequencyGrid<f64>| {
                let v: Vec<C> = grid.omegas().iter().map(|&x| blaschke(x, &eigs).unwrap()).collect();
                count_eigenvalues(&v).unwrap()
            };
            let n = count(g);
            prop_assert_eq!(n, 2);
            prop_assert_eq!(count(g.refined(2).unwrap()), n);
        }
    }
}
