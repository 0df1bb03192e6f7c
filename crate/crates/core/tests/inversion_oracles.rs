//! Eigenvalue recovery from the continuous spectrum, on scattered and on
//! closed-form truncated-pulse data.

use num_complex::Complex64 as C;
use soliton_nft::inversion::*;
use soliton_nft::scattering::*;
use soliton_nft::soliton::synthesize;
use soliton_nft::spectra::*;
use soliton_nft::truncation::*;

const SIGMAS: [f64; 4] = [0.5, 1.0, 1.5, 2.0];
const PHASES: [f64; 4] = [0.3, 1.0, 2.0, 4.0];
// |ln(1 - |b|^2)| at |omega| = 20 is about 1.5e-5 for T >= 4
const EDGE: f64 = 1e-4;

fn cfg() -> ScatterConfig<f64> {
    ScatterConfig::default()
}

fn grid() -> FrequencyGrid<f64> {
    FrequencyGrid::new(20.0, 4096).unwrap()
}

fn truncated(t: f64) -> (TimeSignal<f64>, ContinuousSpectrum<f64>, TruncationModel<f64>) {
    let ds = DiscreteSpectrum::symmetric(&SIGMAS, &PHASES).unwrap();
    let cells = (2.0 * t / 0.0024).round() as usize;
    let sig = synthesize(&ds, TimeGrid::cell_centered(-t, t, cells).unwrap()).unwrap();
    let cs = continuous_spectrum(&sig, grid(), &cfg()).unwrap();
    (sig, cs, TruncationModel::with_phases(&SIGMAS, &PHASES, t).unwrap())
}

#[test]
fn radiation_a_of_a_solitonless_gaussian() {
    let g = TimeGrid::cell_centered(-10.0, 10.0, 4000).unwrap();
    let sig = TimeSignal::from_fn(g, |t: f64| C::new(0.3 * (-t * t).exp(), 0.0)).unwrap();
    let cs = continuous_spectrum(&sig, grid(), &cfg()).unwrap();
    let ra = radiation_a(&cs).unwrap();
    let err = cs.a().iter().zip(&ra).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
    assert!(err < 1e-3, "{err:e}");
    // convention constant
    assert_eq!(HILBERT_SIGN, -1.0);
}

#[test]
fn allpass_and_winding_on_truncated_spectra() {
    for t in [4.0, 5.0] {
        let (_, num, m) = truncated(t);
        let anal = truncated_spectrum(&m, grid()).unwrap();
        for cs in [&num, &anal] {
            let g = allpass_with_edge_tol(cs, EDGE).unwrap();
            let dev = g.iter().map(|z| (z.norm() - 1.0).abs()).fold(0.0, f64::max);
            assert!(dev < 1e-3, "T={t}: {dev:e}");
            assert_eq!(count_eigenvalues(&g).unwrap(), 4, "T={t}");
        }
    }
}

#[test]
fn allpass_fit_agrees_with_analytic_eigenvalues() {
    let (_, cs, m) = truncated(5.0);
    let g = allpass_with_edge_tol(&cs, EDGE).unwrap();
    let seeds: Vec<C> = SIGMAS.iter().map(|&s| C::new(0.0, s)).collect();
    let fit = fit_eigenvalues(&cs.omegas(), &g, 4, &seeds).unwrap();
    assert!(fit.residual <= fit.seed_residual);
    let anal = analytic_eigenvalues_default(&m).unwrap();
    for (x, y) in fit.eigenvalues.iter().zip(&anal) {
        assert!((x - y).norm() < 1e-2, "{x} against {y}");
    }
}

#[test]
fn trace_formula_matches_strip_formula() {
    let (sig, cs, m) = truncated(5.0);
    let seeds: Vec<C> = SIGMAS.iter().map(|&s| C::new(0.0, s)).collect();
    let eigs = find_eigenvalues(&sig, &seeds, &cfg()).unwrap().roots;
    let lam = C::new(0.0, 0.3);
    let a = a_from_b_trace(lam, &cs, &eigs).unwrap();
    let th = truncated_jost_strip_soliton(lam, &m).unwrap().a;
    assert!((a - th).norm() < 1e-3, "{a} against {th}");
    let direct = scatter(&sig, lam, &cfg()).unwrap().a;
    assert!((a - direct).norm() < 1e-6);
}

#[test]
fn trace_formula_near_the_real_axis() {
    let (sig, cs, _) = truncated(4.0);
    let seeds: Vec<C> = SIGMAS.iter().map(|&s| C::new(0.0, s)).collect();
    let eigs = find_eigenvalues(&sig, &seeds, &cfg()).unwrap().roots;
    let ra = radiation_a_with_edge_tol(&cs, EDGE).unwrap();
    let omegas = cs.omegas();
    for i in (0..cs.len()).step_by(97).filter(|&i| omegas[i].abs() < 15.0) {
        let w = omegas[i];
        let limit = a_from_b_trace(C::new(w, 1e-3), &cs, &eigs).unwrap();
        let product = ra[i] * blaschke(w, &eigs).unwrap();
        assert!((limit - product).norm() < 1e-2, "omega {w}: {limit} against {product}");
    }
}

#[test]
fn trace_formula_far_away() {
    let (_, cs, m) = truncated(5.0);
    let eigs = analytic_eigenvalues_default(&m).unwrap();
    let a = a_from_b_trace(C::new(0.0, 1e6), &cs, &eigs).unwrap();
    assert!((a - 1.0).norm() < 1e-5);
}
