//! Closed-form scattering data of a symmetric multi-soliton truncated to `|t| <= T`.
//!
//! The pulse outside the window is modelled by two sech tails driven by the
//! eigenvalue with the smallest imaginary part `j sigma1`. Their Jost pairs are
//! `(alpha, beta)` on the left and `(alpha, e^{2j phi} beta*(lambda*))` on the
//! right, and peeling them off the full soliton gives the truncated pulse's
//! data in closed form.
//!
//! Throughout, a trailing `_c` (or "conjugate point") denotes `f*(lambda*)`.

use crate::error::{NftError, Result};
use crate::scalar::{cplx, half_sech, is_finite_c, j, logistic_weight, re, Cplx, Real};
use crate::scattering::merge_roots;
use crate::soliton::{mobius_product, mobius_product_derivative};
use crate::spectra::{ComplexPoint, ContinuousSpectrum, DiscreteSpectrum, FrequencyGrid, JostPair};

/// Symmetric `N`-soliton `lambda_k = j sigma_k`, `b(lambda_k) = e^{j phase_k}`,
/// truncated to `|t| <= T`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationModel<T> {
    sigmas: Vec<T>,
    phases: Vec<T>,
    truncation: T,
    t0: T,
}

impl<T: Real> TruncationModel<T> {
    /// Model where only `phi = arg b(lambda_1)` is known; the remaining phases
    /// are set to `phi` as well. They only matter for [`analytic_b_values`]
    /// above `sigma1`.
    pub fn new(sigmas: &[T], phi: T, truncation: T) -> Result<Self> {
        let phases = vec![phi; sigmas.len()];
        Self::with_phases(sigmas, &phases, truncation)
    }

    /// `phases[k]` belongs to `sigmas[k]`; input order is arbitrary.
    pub fn with_phases(sigmas: &[T], phases: &[T], truncation: T) -> Result<Self> {
        if sigmas.is_empty() {
            return Err(NftError::InvalidInput("at least one sigma is required".into()));
        }
        if sigmas.len() != phases.len() {
            return Err(NftError::InvalidInput(format!(
                "{} sigmas but {} phases",
                sigmas.len(),
                phases.len()
            )));
        }
        if sigmas.iter().any(|s| !(s.is_finite() && *s > T::zero())) {
            return Err(NftError::InvalidInput("sigmas must be finite and positive".into()));
        }
        if phases.iter().any(|p| !p.is_finite()) || !(truncation.is_finite() && truncation > T::zero()) {
            return Err(NftError::InvalidInput("phases and T must be finite, T positive".into()));
        }
        let mut pairs: Vec<(T, T)> = sigmas.iter().copied().zip(phases.iter().copied()).collect();
        pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
        for w in pairs.windows(2) {
            if (w[1].0 - w[0].0).abs() <= T::lit(1e-10) * T::one().max(w[1].0) {
                if w[0].0 == pairs[0].0 {
                    return Err(NftError::DegenerateSigma(w[0].0.as_f64()));
                }
                return Err(NftError::DegenerateSpectrum(0, 1));
            }
        }
        let (sigmas, phases): (Vec<T>, Vec<T>) = pairs.into_iter().unzip();
        let s1 = sigmas[0];
        let log_sum = sigmas[1..]
            .iter()
            .fold(T::zero(), |acc, &s| acc + ((s + s1) / (s - s1)).ln());
        let t0 = log_sum / (T::lit(2.0) * s1);
        Ok(Self {
            sigmas,
            phases,
            truncation,
            t0,
        })
    }

    /// Same pulse with another truncation window.
    pub fn with_truncation(&self, truncation: T) -> Result<Self> {
        Self::with_phases(&self.sigmas, &self.phases, truncation)
    }

    /// Ascending.
    pub fn sigmas(&self) -> &[T] {
        &self.sigmas
    }

    pub fn phases(&self) -> &[T] {
        &self.phases
    }

    pub fn sigma1(&self) -> T {
        self.sigmas[0]
    }

    /// `arg b(lambda_1)`.
    pub fn phi(&self) -> T {
        self.phases[0]
    }

    pub fn b1_phase(&self) -> Cplx<T> {
        Cplx::from_polar(T::one(), self.phi())
    }

    /// Half-width `T` of the window.
    pub fn truncation(&self) -> T {
        self.truncation
    }

    pub fn t0(&self) -> T {
        self.t0
    }

    pub fn n(&self) -> usize {
        self.sigmas.len()
    }

    /// The tail model is only meaningful for `T > t0`; outside that regime
    /// the formulas still evaluate but results should be flagged.
    pub fn in_contract(&self) -> bool {
        self.truncation > self.t0
    }

    pub fn eigenvalues(&self) -> Vec<ComplexPoint<T>> {
        self.sigmas.iter().map(|&s| cplx(T::zero(), s)).collect()
    }

    pub fn b_values(&self) -> Vec<Cplx<T>> {
        self.phases.iter().map(|&p| Cplx::from_polar(T::one(), p)).collect()
    }

    pub fn discrete_spectrum(&self) -> Result<DiscreteSpectrum<T>> {
        DiscreteSpectrum::symmetric(&self.sigmas, &self.phases)
    }

    /// `x = 2 sigma1 (T - t0)`.
    fn x(&self) -> T {
        T::lit(2.0) * self.sigma1() * (self.truncation - self.t0)
    }

    /// `(-1)^N`.
    fn parity(&self) -> T {
        if self.n().is_multiple_of(2) {
            T::one()
        } else {
            -T::one()
        }
    }

    fn blaschke_factors(&self) -> Vec<(Cplx<T>, Cplx<T>)> {
        self.sigmas
            .iter()
            .map(|&s| (cplx(T::zero(), s), cplx(T::zero(), -s)))
            .collect()
    }

    /// Soliton `a(lambda)`.
    pub fn a(&self, lambda: ComplexPoint<T>) -> Result<Cplx<T>> {
        mobius_product(lambda, &self.blaschke_factors())
    }

    fn check_pole(&self, lambda: ComplexPoint<T>, pole: Cplx<T>) -> Result<()> {
        if (lambda - pole).norm() <= T::epsilon() * T::lit(16.0) * T::one().max(pole.norm()) {
            return Err(NftError::Pole {
                re: lambda.re.as_f64(),
                im: lambda.im.as_f64(),
            });
        }
        Ok(())
    }

    fn lower_pole(&self) -> Cplx<T> {
        cplx(T::zero(), -self.sigma1())
    }

    fn upper_pole(&self) -> Cplx<T> {
        cplx(T::zero(), self.sigma1())
    }

    /// `beta(lambda) e^{-j phi}`, which does not depend on the phases.
    fn beta_unphased(&self, lambda: ComplexPoint<T>) -> Result<Cplx<T>> {
        self.check_pole(lambda, self.lower_pole())?;
        let s1 = self.sigma1();
        let two = T::lit(2.0);
        let frac = -(j::<T>() * (two * s1)) / (lambda + j::<T>() * s1);
        let osc = (j::<T>() * lambda * (two * self.truncation)).exp();
        Ok(frac * osc * (self.parity() * half_sech(self.x())))
    }
}

/// `alpha(lambda) = 1 - K 2j sigma1 / (lambda + j sigma1)`, `K = 1/(1 + e^{4 sigma1 (T - t0)})`.
pub fn alpha<T: Real>(lambda: ComplexPoint<T>, m: &TruncationModel<T>) -> Result<Cplx<T>> {
    m.check_pole(lambda, m.lower_pole())?;
    let s1 = m.sigma1();
    let k = logistic_weight(m.x());
    Ok(re(T::one()) - j::<T>() * (T::lit(2.0) * s1 * k) / (lambda + j::<T>() * s1))
}

/// `alpha*(lambda*) = 1 + K 2j sigma1 / (lambda - j sigma1)`.
pub fn alpha_conj<T: Real>(lambda: ComplexPoint<T>, m: &TruncationModel<T>) -> Result<Cplx<T>> {
    m.check_pole(lambda, m.upper_pole())?;
    let s1 = m.sigma1();
    let k = logistic_weight(m.x());
    Ok(re(T::one()) + j::<T>() * (T::lit(2.0) * s1 * k) / (lambda - j::<T>() * s1))
}

/// `beta(lambda) = e^{j phi + j N pi} (-2j sigma1 / (lambda + j sigma1)) e^{2j lambda T} / (e^{-x} + e^{x})`
/// with `x = 2 sigma1 (T - t0)`.
pub fn beta<T: Real>(lambda: ComplexPoint<T>, m: &TruncationModel<T>) -> Result<Cplx<T>> {
    Ok(m.b1_phase() * m.beta_unphased(lambda)?)
}

/// `beta*(lambda*)`.
pub fn beta_conj<T: Real>(lambda: ComplexPoint<T>, m: &TruncationModel<T>) -> Result<Cplx<T>> {
    Ok(beta(lambda.conj(), m)?.conj())
}

/// Jost pair of the left tail (support `t < -T`): `(alpha, beta)`.
pub fn tail_jost_left<T: Real>(lambda: ComplexPoint<T>, m: &TruncationModel<T>) -> Result<JostPair<T>> {
    if !(lambda.im > -m.sigma1()) {
        return Err(strip_error(lambda, m));
    }
    Ok(JostPair::new(alpha(lambda, m)?, beta(lambda, m)?))
}

/// Jost pair of the right tail (support `t > T`): `(alpha, e^{2j phi} beta*(lambda*))`.
pub fn tail_jost_right<T: Real>(lambda: ComplexPoint<T>, m: &TruncationModel<T>) -> Result<JostPair<T>> {
    check_strip(lambda, m)?;
    let e2 = m.b1_phase() * m.b1_phase();
    Ok(JostPair::new(alpha(lambda, m)?, e2 * beta_conj(lambda, m)?))
}

fn strip_error<T: Real>(lambda: ComplexPoint<T>, m: &TruncationModel<T>) -> NftError {
    NftError::Strip {
        re: lambda.re.as_f64(),
        im: lambda.im.as_f64(),
        sigma1: m.sigma1().as_f64(),
    }
}

fn check_strip<T: Real>(lambda: ComplexPoint<T>, m: &TruncationModel<T>) -> Result<()> {
    if lambda.im.abs() < m.sigma1() {
        Ok(())
    } else {
        Err(strip_error(lambda, m))
    }
}

/// Truncated-pulse Jost pair on the real axis.
pub fn truncated_jost_real<T: Real>(omega: T, m: &TruncationModel<T>) -> Result<JostPair<T>> {
    if !omega.is_finite() {
        return Err(NftError::InvalidInput("omega must be finite".into()));
    }
    let w = re(omega);
    let a = m.a(w)?;
    let a_c = a.conj();
    let al = alpha(w, m)?;
    let al_c = al.conj();
    let be = beta(w, m)?;
    let be_c = be.conj();
    let e2 = m.b1_phase() * m.b1_phase();
    Ok(JostPair::new(
        a * al_c * al_c - a_c * be * be / e2,
        -(a_c * al * be + a * al_c * be_c * e2),
    ))
}

/// Truncated-pulse Jost pair on the real grid.
pub fn truncated_spectrum<T: Real>(m: &TruncationModel<T>, grid: FrequencyGrid<T>) -> Result<ContinuousSpectrum<T>> {
    let pairs = grid
        .omegas()
        .into_iter()
        .map(|w| truncated_jost_real(w, m))
        .collect::<Result<Vec<_>>>()?;
    let (a, b) = pairs.into_iter().map(|p| (p.a, p.b)).unzip();
    ContinuousSpectrum::new(grid, a, b)
}

/// Truncated-pulse Jost pair in the strip `|Im lambda| < sigma1`.
///
/// `b_fn` returns `(b(lambda), b*(lambda*))` of the untruncated pulse; for an
/// exact multi-soliton both vanish inside the strip, which is what
/// [`truncated_jost_strip_soliton`] uses.
pub fn truncated_jost_strip<T: Real>(
    lambda: ComplexPoint<T>,
    m: &TruncationModel<T>,
    b_fn: impl Fn(ComplexPoint<T>) -> (Cplx<T>, Cplx<T>),
) -> Result<JostPair<T>> {
    check_strip(lambda, m)?;
    let a = m.a(lambda)?;
    let a_c = re(T::one()) / a;
    let (b, b_c) = b_fn(lambda);
    let al = alpha(lambda, m)?;
    let al_c = alpha_conj(lambda, m)?;
    let be = beta(lambda, m)?;
    let be_c = beta_conj(lambda, m)?;
    let e2 = m.b1_phase() * m.b1_phase();
    let a_t = a * al_c * al_c - a_c * be * be / e2 + al_c * be * (b_c + b / e2);
    let b_t = -(a_c * al * be + a * al_c * be_c * e2) + al * al_c * b - be * be_c * b_c * e2;
    Ok(JostPair::new(a_t, b_t))
}

pub fn truncated_jost_strip_soliton<T: Real>(lambda: ComplexPoint<T>, m: &TruncationModel<T>) -> Result<JostPair<T>> {
    truncated_jost_strip(lambda, m, |_| (re(T::zero()), re(T::zero())))
}

/// Which square root of the zero-search equation a seed follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Branch {
    /// `a alpha*(lambda*) = -beta e^{-j phi}`: the eigenvalue born from `lambda_1`.
    Minus,
    /// `a alpha*(lambda*) = +beta e^{-j phi}`: the others. This branch also
    /// vanishes identically at `j sigma1`, which is not an eigenvalue.
    Plus,
}

/// Factors of `a(lambda) alpha*(lambda*)` with the cancelling pair at `j sigma1` removed.
fn reduced_factors<T: Real>(m: &TruncationModel<T>) -> Vec<(Cplx<T>, Cplx<T>)> {
    let s1 = m.sigma1();
    let k = logistic_weight(m.x());
    let mut f: Vec<_> = m.sigmas[1..]
        .iter()
        .map(|&s| (cplx(T::zero(), s), cplx(T::zero(), -s)))
        .collect();
    f.push((
        cplx(T::zero(), s1 * (T::one() - T::lit(2.0) * k)),
        cplx(T::zero(), -s1),
    ));
    f
}

fn branch_value<T: Real>(
    lambda: ComplexPoint<T>,
    m: &TruncationModel<T>,
    factors: &[(Cplx<T>, Cplx<T>)],
    branch: Branch,
) -> Result<(Cplx<T>, Cplx<T>)> {
    let h = mobius_product(lambda, factors)?;
    let dh = mobius_product_derivative(lambda, factors)?;
    let b = m.beta_unphased(lambda)?;
    let two = T::lit(2.0);
    let db = b * (j::<T>() * (two * m.truncation) - re(T::one()) / (lambda + j::<T>() * m.sigma1()));
    Ok(match branch {
        Branch::Minus => (h + b, dh + db),
        Branch::Plus => (h - b, dh - db),
    })
}

fn nearest_index<T: Real>(z: ComplexPoint<T>, m: &TruncationModel<T>) -> usize {
    m.eigenvalues()
        .iter()
        .enumerate()
        .min_by(|x, y| (*x.1 - z).norm().partial_cmp(&(*y.1 - z).norm()).unwrap())
        .map(|(i, _)| i)
        .unwrap()
}

fn is_spurious<T: Real>(z: ComplexPoint<T>, m: &TruncationModel<T>, branch: Branch) -> bool {
    branch == Branch::Plus && (z - cplx(T::zero(), m.sigma1())).norm() <= T::lit(1e-8) * (T::one() + m.sigma1())
}

fn accept<T: Real>(z: ComplexPoint<T>, m: &TruncationModel<T>, branch: Branch, k: usize) -> bool {
    is_finite_c(z) && z.im > T::zero() && !is_spurious(z, m, branch) && nearest_index(z, m) == k
}

fn newton_branch<T: Real>(
    seed: ComplexPoint<T>,
    m: &TruncationModel<T>,
    factors: &[(Cplx<T>, Cplx<T>)],
    branch: Branch,
) -> Option<ComplexPoint<T>> {
    let mut z = seed;
    for _ in 0..100 {
        let (g, dg) = branch_value(z, m, factors, branch).ok()?;
        if g.norm() == T::zero() {
            return Some(z);
        }
        if !(dg.norm() > T::zero()) {
            return None;
        }
        let step = g / dg;
        z = z - step;
        if !is_finite_c(z) {
            return None;
        }
        if step.norm() <= T::epsilon() * T::lit(16.0) * T::one().max(z.norm()) {
            return Some(z);
        }
    }
    let (g, _) = branch_value(z, m, factors, branch).ok()?;
    (g.norm() <= T::lit(1e-10)).then_some(z)
}

/// Roots of the branch function on the positive imaginary axis, where it is real.
fn scan_imaginary_axis<T: Real>(
    m: &TruncationModel<T>,
    factors: &[(Cplx<T>, Cplx<T>)],
    branch: Branch,
) -> Vec<ComplexPoint<T>> {
    let step = T::lit(0.05);
    let top = m.sigmas[m.n() - 1] + T::one();
    let g = |y: T| {
        branch_value(cplx(T::zero(), y), m, factors, branch)
            .map(|v| v.0.re)
            .unwrap_or_else(|_| T::nan())
    };
    let mut roots = Vec::new();
    let mut y0 = step / T::lit(4.0);
    let mut g0 = g(y0);
    while y0 < top {
        let y1 = y0 + step;
        let g1 = g(y1);
        if g0 == T::zero() {
            roots.push(cplx(T::zero(), y0));
        } else if g0.is_finite() && g1.is_finite() && g0 * g1 < T::zero() {
            let (mut lo, mut hi, mut glo) = (y0, y1, g0);
            for _ in 0..200 {
                let mid = (lo + hi) / T::lit(2.0);
                if mid <= lo || mid >= hi {
                    break;
                }
                let gm = g(mid);
                if gm == T::zero() {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (gm < T::zero()) == (glo < T::zero()) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push(cplx(T::zero(), (lo + hi) / T::lit(2.0)));
        }
        y0 = y1;
        g0 = g1;
    }
    roots
}

/// Eigenvalues of the truncated pulse from the closed-form `a_T`.
///
/// Zeros of `a_T` solve `a^2 - (beta e^{-j phi} / alpha*(lambda*))^2 = 0`. Written as
/// `h = +-beta e^{-j phi}` with `h = a alpha*(lambda*)` in cancelled form, both
/// branches are entire in the upper half-plane. The branch `h = +beta e^{-j phi}`
/// vanishes at `j sigma1` for every `T`; that root of the squared equation is
/// not an eigenvalue and is discarded. The eigenvalue that descends from
/// `lambda_1` lies on the other branch.
///
/// Each seed is paired with the nearest original eigenvalue, which fixes its
/// branch. Seeds whose Newton iteration fails or wanders to another
/// eigenvalue fall back to a scan of the imaginary axis with step 0.05. Roots
/// are merged within `1e-4` and sorted by ascending imaginary part.
pub fn analytic_eigenvalues<T: Real>(m: &TruncationModel<T>, seeds: &[ComplexPoint<T>]) -> Result<Vec<ComplexPoint<T>>> {
    if let Some(s) = seeds.iter().find(|s| !(s.im > T::zero()) || !is_finite_c(**s)) {
        return Err(NftError::HalfPlane {
            re: s.re.as_f64(),
            im: s.im.as_f64(),
        });
    }
    let factors = reduced_factors(m);
    let mut scans: [Option<Vec<ComplexPoint<T>>>; 2] = [None, None];
    let mut found = Vec::new();
    for &seed in seeds {
        let k = nearest_index(seed, m);
        let branch = if k == 0 { Branch::Minus } else { Branch::Plus };
        let root = newton_branch(seed, m, &factors, branch)
            .filter(|&z| accept(z, m, branch, k))
            .or_else(|| {
                let slot = &mut scans[(branch == Branch::Plus) as usize];
                let candidates = slot.get_or_insert_with(|| scan_imaginary_axis(m, &factors, branch));
                candidates
                    .iter()
                    .copied()
                    .filter(|&z| accept(z, m, branch, k))
                    .min_by(|x, y| (*x - seed).norm().partial_cmp(&(*y - seed).norm()).unwrap())
                    .and_then(|z| newton_branch(z, m, &factors, branch).filter(|&p| accept(p, m, branch, k)).or(Some(z)))
            });
        if let Some(z) = root {
            found.push((z, T::zero()));
        }
    }
    if !seeds.is_empty() && found.is_empty() {
        return Err(NftError::NoConvergence(format!(
            "no analytic eigenvalue found from {} seeds",
            seeds.len()
        )));
    }
    Ok(merge_roots(found, T::lit(1e-4)).into_iter().map(|r| r.0).collect())
}

/// [`analytic_eigenvalues`] seeded at the original eigenvalues.
pub fn analytic_eigenvalues_default<T: Real>(m: &TruncationModel<T>) -> Result<Vec<ComplexPoint<T>>> {
    analytic_eigenvalues(m, &m.eigenvalues())
}

/// `b_T` at the analytic eigenvalues.
///
/// Below `sigma1` the untruncated `b` vanishes and the strip formula applies.
/// Above it, `b(lambda~_k)` is replaced by `b(lambda_k)` of the nearest original
/// eigenvalue and `b*(lambda~_k*)` by `1 / b(lambda_k)`.
pub fn analytic_b_values<T: Real>(eigs: &[ComplexPoint<T>], m: &TruncationModel<T>) -> Result<Vec<Cplx<T>>> {
    let guard = T::lit(1e-6);
    let e2 = m.b1_phase() * m.b1_phase();
    let originals = m.b_values();
    eigs.iter()
        .map(|&z| {
            if (z.im - m.sigma1()).abs() < guard {
                return Err(NftError::BranchAmbiguity {
                    im: z.im.as_f64(),
                    sigma1: m.sigma1().as_f64(),
                });
            }
            let al = alpha(z, m)?;
            let al_c = alpha_conj(z, m)?;
            let be = beta(z, m)?;
            let be_c = beta_conj(z, m)?;
            if z.im < m.sigma1() {
                let a = m.a(z)?;
                Ok(-(al * be / a + a * al_c * be_c * e2))
            } else {
                let b = originals[nearest_index(z, m)];
                Ok(al * al_c * b - be * be_c * e2 / b)
            }
        })
        .collect()
}
