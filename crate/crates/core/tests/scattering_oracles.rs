//! Numerical scattering checked against Darboux-synthesized pulses, whose
//! scattering data are known in closed form.

use num_complex::Complex64 as C;
use proptest::prelude::*;
use soliton_nft::scattering::*;
use soliton_nft::soliton::{a_closed_form, synthesize};
use soliton_nft::spectra::*;

fn cfg() -> ScatterConfig<f64> {
    ScatterConfig::default()
}

fn four_soliton() -> DiscreteSpectrum<f64> {
    DiscreteSpectrum::symmetric(&[0.5, 1.0, 1.5, 2.0], &[0.3, 1.0, 2.0, 4.0]).unwrap()
}

fn pulse(ds: &DiscreteSpectrum<f64>, half_width: f64, n: usize) -> TimeSignal<f64> {
    synthesize(ds, TimeGrid::cell_centered(-half_width, half_width, n).unwrap()).unwrap()
}

#[test]
fn four_soliton_a_is_unimodular_on_the_real_axis() {
    let ds = four_soliton();
    let sig = pulse(&ds, 16.0, 1 << 14);
    let grid = FrequencyGrid::new(6.0, 121).unwrap();
    let cs = continuous_spectrum(&sig, grid, &cfg()).unwrap();
    for (w, (a, b)) in grid.omegas().into_iter().zip(cs.a().iter().zip(cs.b())) {
        let exact = a_closed_form(&ds, C::new(w, 0.0)).unwrap();
        assert!((a - exact).norm() < 1e-5, "omega {w}: {a} against {exact}");
        assert!(b.norm() < 1e-5);
    }
    assert!(validate_unitarity(&cs) < 1e-8);
}

#[test]
fn unitarity_for_a_smooth_non_soliton_pulse() {
    let grid = TimeGrid::cell_centered(-10.0, 10.0, 1 << 13).unwrap();
    let sig = TimeSignal::from_fn(grid, |t: f64| C::new(1.2 * (-t * t).exp(), 0.4 * t * (-t * t / 2.0).exp())).unwrap();
    let cs = continuous_spectrum(&sig, FrequencyGrid::new(20.0, 513).unwrap(), &cfg()).unwrap();
    assert!(validate_unitarity(&cs) < 1e-8);
}

#[test]
fn layer_peeling_matches_whole_pulse() {
    let ds = DiscreteSpectrum::symmetric(&[0.6, 1.1], &[0.5, -1.2]).unwrap();
    let sig = pulse(&ds, 14.0, 7000);
    let n = sig.len();
    let cut1 = sig.iter().position(|(t, _)| t > -1.0).unwrap();
    let cut2 = sig.iter().position(|(t, _)| t > 1.0).unwrap();
    let parts = [
        sig.slice(0..cut1).unwrap(),
        sig.slice(cut1..cut2).unwrap(),
        sig.slice(cut2..n).unwrap(),
    ];
    for w in [-3.0, -0.7, 0.0, 0.25, 1.9] {
        let lam = C::new(w, 0.0);
        let seg = |s: &TimeSignal<f64>| SegmentJost::real(scatter(s, lam, &cfg()).unwrap());
        let composed = compose_segments(&seg(&parts[0]), &seg(&parts[1]), &seg(&parts[2]));
        let whole = scatter(&sig, lam, &cfg()).unwrap();
        assert!((composed.a - whole.a).norm() < 1e-8, "a at {w}");
        assert!((composed.b - whole.b).norm() < 1e-8, "b at {w}");
    }
}

#[test]
fn two_soliton_eigenvalues_from_offset_seeds() {
    let ds = DiscreteSpectrum::symmetric(&[0.5, 1.0], &[0.0, 0.0]).unwrap();
    // the integrator is second order; 1e-6 needs dt near 1e-3
    let sig = pulse(&ds, 16.0, 1 << 15);
    let seeds = [C::new(0.0, 0.4), C::new(0.0, 1.1)];
    let found = find_eigenvalues(&sig, &seeds, &cfg()).unwrap();
    assert_eq!(found.roots.len(), 2);
    assert!((found.roots[0] - C::new(0.0, 0.5)).norm() < 1e-6, "{:?}", found.roots);
    assert!((found.roots[1] - C::new(0.0, 1.0)).norm() < 1e-6);
    assert!(found.residuals.iter().all(|&r| r < 1e-6));

    let reversed: Vec<C> = seeds.iter().rev().copied().collect();
    let again = find_eigenvalues(&sig, &reversed, &cfg()).unwrap();
    for (x, y) in found.roots.iter().zip(&again.roots) {
        assert!((x - y).norm() < 1e-6);
    }
}

#[test]
fn seed_order_does_not_matter_for_four_solitons() {
    let ds = four_soliton();
    let sig = pulse(&ds, 12.0, 10_000);
    let seeds = [C::new(0.01, 0.45), C::new(0.0, 0.9), C::new(-0.02, 1.6), C::new(0.0, 2.1)];
    let a = find_eigenvalues(&sig, &seeds, &cfg()).unwrap();
    let b = find_eigenvalues(&sig, &[seeds[2], seeds[0], seeds[3], seeds[1]], &cfg()).unwrap();
    assert_eq!(a.roots.len(), 4);
    assert_eq!(b.roots.len(), 4);
    for (x, y) in a.roots.iter().zip(&b.roots) {
        assert!((x - y).norm() < 1e-6);
    }
}

#[test]
fn discrete_amplitudes_match_requested_b_and_closed_form_derivative() {
    let ds = four_soliton();
    let sig = pulse(&ds, 12.0, 10_000);
    for scheme in [Scheme::PiecewiseConstant2x2, Scheme::ForwardBackwardSplit] {
        let c = cfg().with_scheme(scheme);
        let amps = discrete_amplitudes(&sig, &ds.eigenvalues(), &c).unwrap();
        for (d, e) in amps.iter().zip(ds.entries()) {
            // Forward-only b at Im lambda > 0 amplifies the edge residue of
            // the pulse by e^{2 Im(lambda) T}; only the split scheme is exact.
            if scheme == Scheme::ForwardBackwardSplit {
                assert!((d.b / e.b - 1.0).norm() < 1e-3, "b at {} is {}", e.lambda, d.b);
            }
            let exact = soliton_nft::soliton::a_derivative_closed_form(&ds, e.lambda).unwrap();
            assert!((d.a_prime / exact - 1.0).norm() < 1e-4);
            assert!((d.q_d - d.b / d.a_prime).norm() < 1e-12 * d.q_d.norm().max(1.0));
        }
    }
}

#[test]
fn time_shift_rule_for_b() {
    // A soliton centred at tau has b = b0 e^{-2j lambda tau}.
    let lam = C::new(0.0, 0.8);
    let b0 = C::from_polar(1.0, 0.7);
    let ds = DiscreteSpectrum::new(vec![SpectralEntry { lambda: lam, b: b0 }]).unwrap();
    let tau = -2.0;
    let shifted = ds.shifted(tau);
    let sig = pulse(&shifted, 20.0, 1 << 13);
    let centre = sig.iter().max_by(|x, y| x.1.norm().total_cmp(&y.1.norm())).unwrap().0;
    assert!((centre - tau).abs() < 0.01);
    let b = discrete_amplitudes(&sig, &[lam], &cfg().with_scheme(Scheme::ForwardBackwardSplit)).unwrap()[0].b;
    let expected = shift_b(b0, lam, tau);
    assert!((b / expected - 1.0).norm() < 1e-3);
    assert!((expected - b0 * (C::new(0.0, TIME_SHIFT_EXPONENT) * lam * tau).exp()).norm() < 1e-14);
}

#[test]
fn energy_of_a_single_sech_is_four_sigma() {
    let ds = DiscreteSpectrum::symmetric(&[0.7], &[0.0]).unwrap();
    let sig = pulse(&ds, 20.0, 1 << 13);
    assert!((sig.energy() - 2.8).abs() < 1e-6);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn darboux_scattering_round_trip(
        n in 1usize..=4,
        raw in prop::collection::vec(0.3f64..2.5, 4),
        phases in prop::collection::vec(0.0f64..std::f64::consts::TAU, 4),
    ) {
        // keep eigenvalues apart so Newton seeds at +-0.02 stay in their basins
        let mut sigmas: Vec<f64> = raw[..n].to_vec();
        sigmas.sort_by(f64::total_cmp);
        for i in 1..n {
            if sigmas[i] - sigmas[i - 1] < 0.15 {
                sigmas[i] = sigmas[i - 1] + 0.15;
            }
        }
        let ds = DiscreteSpectrum::symmetric(&sigmas, &phases[..n]).unwrap();
        let tp = soliton_nft::soliton::tail_parameters(&ds).unwrap();
        let half = (tp.t0 + 8.0 / (2.0 * sigmas[0])).max(8.0);
        let cells = ((2.0 * half / 0.002) as usize).max(1 << 12);
        let sig = pulse(&ds, half, cells);
        let seeds: Vec<C> = ds.eigenvalues().iter().map(|z| z + C::new(0.0, 0.02)).collect();
        let c = cfg().with_scheme(Scheme::ForwardBackwardSplit);
        let found = find_eigenvalues(&sig, &seeds, &c).unwrap();
        prop_assert_eq!(found.roots.len(), n);
        for (r, e) in found.roots.iter().zip(ds.entries()) {
            prop_assert!((r - e.lambda).norm() < 1e-4, "{} against {}", r, e.lambda);
        }
        let amps = discrete_amplitudes(&sig, &found.roots, &c).unwrap();
        for (d, e) in amps.iter().zip(ds.entries()) {
            prop_assert!((d.b / e.b - 1.0).norm() < 1e-3, "b {} against {}", d.b, e.b);
        }
    }
}
