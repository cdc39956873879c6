use std::f64::consts::TAU;

use num_complex::Complex64;
use proptest::prelude::*;

use winding::seminorms::vmo_modulus;
use winding::spectrum::synthesize;
use winding::zoo::{self, phase_scramble, Scramble, WeierstrassParams};
use winding::{
    analyze, degree_fourier_default, energy_sequence, gagliardo, h_half_coefficient, riemann_sin_form,
    sum_abel, sum_cesaro, sum_partial, winding_geometric, CircleSignal, FourierSpectrum, SummationMethod,
};

const N: usize = 256;
const M: usize = 64;

/// `d t + Σ c_k cos(k t + φ_k)` with `k ≤ 6`; steps stay well inside the oracle margin.
fn phase_signal() -> impl Strategy<Value = (i64, CircleSignal)> {
    (-5i64..=5, prop::collection::vec((1u32..=6, -1.0f64..1.0, 0.0f64..TAU), 0..4)).prop_map(|(d, terms)| {
        let signal = CircleSignal::from_phase(N, |t| {
            d as f64 * t + terms.iter().map(|&(k, c, p)| c * (k as f64 * t + p).cos()).sum::<f64>()
        })
        .unwrap();
        (d, signal)
    })
}

fn spectrum(max_band: usize) -> impl Strategy<Value = FourierSpectrum> {
    (1..=max_band).prop_flat_map(|m| {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2 * m + 1).prop_map(|v| {
            FourierSpectrum::new(v.into_iter().map(|(re, im)| Complex64::new(re, im)).collect()).unwrap()
        })
    })
}

fn sequence() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-10.0f64..10.0, 1..64)
}

fn method() -> impl Strategy<Value = SummationMethod> {
    prop_oneof![
        Just(SummationMethod::Partial),
        (0.0f64..4.0).prop_map(|order| SummationMethod::Cesaro { order }),
        (1u32..=4).prop_map(|order| SummationMethod::Riemann { order }),
        Just(SummationMethod::Abel),
    ]
}

fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn coefficient_laws((_, f) in phase_signal(), theta in 0.0f64..TAU, k in 0usize..N) {
        let a = analyze(&f, M).unwrap();
        let rotated = analyze(&f.rotated(theta), M).unwrap();
        let shifted = analyze(&f.shifted(k), M).unwrap();
        let conj = analyze(&f.conj(), M).unwrap();
        let tau = TAU * k as f64 / N as f64;
        for (n, an) in a.iter() {
            prop_assert!(close(rotated.get(n), Complex64::cis(theta) * an, 1e-13));
            prop_assert!(close(shifted.get(n), an * Complex64::cis(n as f64 * tau), 1e-13));
            prop_assert!(close(conj.get(n), a.get(-n).conj(), 1e-13));
        }
    }

    #[test]
    fn synthesis_round_trip(s in spectrum(16)) {
        let m = s.bandwidth();
        let size = (4 * m).next_power_of_two().max(4);
        let back = analyze(&synthesize(&s, size).unwrap(), m).unwrap();
        for (n, a) in s.iter() {
            prop_assert!(close(back.get(n), a, 1e-13));
        }
    }

    #[test]
    fn symmetric_sum_identity(s in spectrum(24)) {
        let u = energy_sequence(&s);
        for cutoff in 0..=s.bandwidth() as i64 {
            let direct: f64 = (-cutoff..=cutoff).map(|n| n as f64 * s.power(n)).sum();
            let partial = sum_partial(u.values(), cutoff as usize).unwrap();
            prop_assert!((direct - partial).abs() <= 1e-12 * (1.0 + s.total_power() * cutoff as f64));
        }
        let lhs = h_half_coefficient(&s);
        let signed: f64 = s.iter().map(|(n, a)| n as f64 * a.norm_sqr()).sum();
        let negative: f64 = (1..=s.bandwidth() as i64).map(|n| n as f64 * s.power(-n)).sum();
        prop_assert!((lhs - signed - 2.0 * negative).abs() <= 1e-12 * (1.0 + lhs));
    }

    #[test]
    fn sin_form_identity(s in spectrum(24), t in 1e-6f64..3.0) {
        let u = energy_sequence(&s);
        let via_u = SummationMethod::Riemann { order: 1 }.evaluate(u.values(), t).unwrap();
        let via_a = riemann_sin_form(&s, t).unwrap();
        prop_assert!((via_u - via_a).abs() <= 1e-12 * (1.0 + h_half_coefficient(&s)));
    }

    #[test]
    fn methods_are_linear(m in method(), u in sequence(), v in sequence(), a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let len = u.len().max(v.len());
        let pad = |x: &[f64]| { let mut y = x.to_vec(); y.resize(len, 0.0); y };
        let (u, v) = (pad(&u), pad(&v));
        let w: Vec<f64> = u.iter().zip(&v).map(|(x, y)| a * x + b * y).collect();
        let scale = 1.0 + u.iter().chain(&v).map(|x| x.abs()).sum::<f64>() * (a.abs() + b.abs());
        for &p in m.default_protocol(len).schedule() {
            let lhs = m.evaluate(&w, p).unwrap();
            let rhs = a * m.evaluate(&u, p).unwrap() + b * m.evaluate(&v, p).unwrap();
            prop_assert!((lhs - rhs).abs() <= 1e-12 * scale, "{m} at {p}");
        }
    }

    #[test]
    fn methods_are_regular_on_finite_sequences(m in method(), u in sequence()) {
        let total: f64 = u.iter().sum();
        let out = winding::extract_limit(|p| m.evaluate(&u, p), &m.default_protocol(u.len())).unwrap();
        let scale = 1.0 + u.iter().map(|x| x.abs()).sum::<f64>();
        prop_assert!((out.estimate - total).abs() <= 1e-6 * scale, "{m}: {} vs {total}", out.estimate);
    }

    #[test]
    fn cesaro_one_agrees_with_abel_on_periodic_means(period in prop::collection::vec(-1.0f64..1.0, 2..6)) {
        // Zero-mean periodic terms: both means converge to the same value.
        let mean = period.iter().sum::<f64>() / period.len() as f64;
        let block: Vec<f64> = period.iter().map(|x| x - mean).collect();
        let u: Vec<f64> = block.iter().cycle().take(400_000).copied().collect();
        let c1 = sum_cesaro(&u, 1.0, 200_000).unwrap();
        let abel = sum_abel(&u, 1.0 - 1.0 / 8192.0).unwrap();
        prop_assert!((c1 - abel).abs() < 1e-3, "{c1} vs {abel}");
    }

    #[test]
    fn gauges_are_invariant((_, f) in phase_signal(), theta in 0.0f64..TAU, k in 0usize..N) {
        for g in [&f.rotated(theta), &f.shifted(k), &f.conj()] {
            let base = gagliardo(&f, 0.5, 2.0).unwrap();
            prop_assert!((gagliardo(g, 0.5, 2.0).unwrap() - base).abs() <= 1e-12 * (1.0 + base));
            let base = gagliardo(&f, 0.3, 3.0).unwrap();
            prop_assert!((gagliardo(g, 0.3, 3.0).unwrap() - base).abs() <= 1e-12 * (1.0 + base));
            let base = vmo_modulus(&f, 0.5).unwrap();
            prop_assert!((vmo_modulus(g, 0.5).unwrap() - base).abs() <= 1e-12);
            let base = h_half_coefficient(&analyze(&f, M).unwrap());
            prop_assert!((h_half_coefficient(&analyze(g, M).unwrap()) - base).abs() <= 1e-12 * (1.0 + base));
        }
    }

    #[test]
    fn vmo_is_monotone_in_arc_length((_, f) in phase_signal(), l1 in 0.05f64..TAU, l2 in 0.05f64..TAU) {
        let (short, long) = if l1 <= l2 { (l1, l2) } else { (l2, l1) };
        prop_assert!(vmo_modulus(&f, short).unwrap() <= vmo_modulus(&f, long).unwrap());
    }

    #[test]
    fn oracle_laws((d, f) in phase_signal(), (e, g) in phase_signal(), theta in 0.0f64..TAU, k in 0usize..N) {
        prop_assert_eq!(winding_geometric(&f).unwrap(), d);
        prop_assert_eq!(winding_geometric(&f.conj()).unwrap(), -d);
        prop_assert_eq!(winding_geometric(&f.rotated(theta)).unwrap(), d);
        prop_assert_eq!(winding_geometric(&f.shifted(k)).unwrap(), d);
        prop_assert_eq!(winding_geometric(&f.product(&g).unwrap()).unwrap(), d + e);
    }

    #[test]
    fn abel_agrees_with_oracle_on_smooth_phases((d, f) in phase_signal()) {
        let report = degree_fourier_default(&analyze(&f, M).unwrap(), SummationMethod::Abel).unwrap();
        prop_assert!((report.estimate - d as f64).abs() <= 0.05, "{} vs {d}", report.estimate);
    }

    #[test]
    fn blaschke_oracle_counts_zeros(zeros in prop::collection::vec((0.0f64..0.8, 0.0f64..TAU), 0..6)) {
        let zeros: Vec<Complex64> = zeros.iter().map(|&(r, p)| Complex64::from_polar(r, p)).collect();
        let b = zoo::blaschke(&zeros, 2048).unwrap();
        prop_assert_eq!(winding_geometric(&b).unwrap(), zeros.len() as i64);
        let abel = degree_fourier_default(&analyze(&b, 512).unwrap(), SummationMethod::Abel).unwrap();
        prop_assert!((abel.estimate - zeros.len() as f64).abs() <= 0.05);
    }

    #[test]
    fn generators_are_deterministic(seed in any::<u64>(), alpha in 0.2f64..0.9) {
        let p = WeierstrassParams { alpha, scales: 6, amplitude: 1.0, degree: 1, seed };
        prop_assert_eq!(zoo::weierstrass_phase(p, 512).unwrap(), zoo::weierstrass_phase(p, 512).unwrap());
        let s = analyze(&zoo::weierstrass_phase(p, 512).unwrap(), 64).unwrap();
        prop_assert_eq!(phase_scramble(&s, Scramble::Seeded(seed)), phase_scramble(&s, Scramble::Seeded(seed)));
    }
}

#[test]
fn blaschke_zero_at_origin_is_the_circle() {
    for n in [16, 256, 4096] {
        let b = zoo::blaschke(&[Complex64::new(0.0, 0.0)], n).unwrap();
        let m = zoo::monomial(1, n).unwrap();
        for (x, y) in b.samples().iter().zip(m.samples()) {
            assert!((x - y).norm() < 1e-15);
        }
    }
}
