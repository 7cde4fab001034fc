//! Cross-module invariants, checked on randomized instances with fixed
//! seeds and against independent closed-form oracles.

use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use superdense::coding::{encode_family, weyl, MessageIndex};
use superdense::discrimination::{
    average_bound, born_probabilities, duan_guo_feasible, gram, max_uniform_gamma,
    pairwise_bound_check, usd_povm, GramMatrix, SuccessProfile,
};
use superdense::protocol::{simulate, ProtocolConfig};
use superdense::qmath::{Operator, Scalar, StateVector, PSD_TOL};
use superdense::states::{schmidt_decompose, schmidt_form, SchmidtState};

fn random_spectrum(rng: &mut impl Rng, len: usize, floor: f64) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| floor + rng.random::<f64>()).collect();
    let sum: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / sum).collect()
}

/// Subspace-0 members of the encoded family as coordinate vectors.
fn within_subspace_states(spectrum: &[f64], d: usize) -> Vec<StateVector> {
    let shared = SchmidtState::new(spectrum.to_vec()).unwrap();
    let dim = shared.dim();
    let family = encode_family(&shared, d).unwrap();
    let head: f64 = spectrum[..d].iter().sum();
    (0..d)
        .map(|n| {
            let s = family.state(MessageIndex { m: 0, n });
            let coords: Vec<Scalar> = (0..d).map(|k| s.amp((k % d) * dim + k)).collect();
            StateVector::new(coords)
                .unwrap()
                .scaled(Scalar::new(1.0 / head.sqrt(), 0.0))
        })
        .collect()
}

#[test]
fn gram_matches_the_closed_form_overlaps() {
    // Oracle: ⟨Ψ_mn|Ψ_m'n'⟩ = δ_mm' Σ_{k<d} p_k e^{-2πik(n-n')/d} + Σ_{μ≥d} p_μ.
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for &(d, dim) in &[
        (2usize, 2usize),
        (3, 3),
        (4, 4),
        (2, 5),
        (3, 7),
        (2, 12),
        (8, 8),
        (8, 12),
    ] {
        let spectrum = random_spectrum(&mut rng, dim, 0.02);
        let family = encode_family(&SchmidtState::new(spectrum.clone()).unwrap(), d).unwrap();
        let g = gram(&family);
        let tail: f64 = spectrum[d..].iter().sum();
        for m in 0..d {
            for n in 0..d {
                for mp in 0..d {
                    for np in 0..d {
                        let mut expect = Scalar::new(tail, 0.0);
                        if m == mp {
                            for (k, p) in spectrum[..d].iter().enumerate() {
                                let angle = -2.0
                                    * std::f64::consts::PI
                                    * (k as f64)
                                    * (n as f64 - np as f64)
                                    / d as f64;
                                expect += Scalar::from_polar(*p, angle);
                            }
                        }
                        let got = g.entry(m * d + n, mp * d + np);
                        assert!(
                            (got - expect).norm() < 1e-12,
                            "d={d} D={dim} ({m},{n})x({mp},{np}): {got} vs {expect}"
                        );
                    }
                }
            }
        }
    }
}

#[test]
fn uniform_gamma_agrees_with_feasibility_bisection() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for _ in 0..20 {
        let d = rng.random_range(2..=4);
        let spectrum = random_spectrum(&mut rng, d, 0.01);
        let states = within_subspace_states(&spectrum, d);
        let g = GramMatrix::from_states(&states).unwrap();
        let direct = max_uniform_gamma(&g);

        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        if duan_guo_feasible(&g, &vec![hi; d], PSD_TOL).unwrap() {
            lo = hi;
        } else {
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                if duan_guo_feasible(&g, &vec![mid; d], PSD_TOL).unwrap() {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
        }
        assert!(
            (direct - lo).abs() < 1e-9,
            "bisection {lo} vs eigenvalue {direct}"
        );
    }
}

#[test]
fn uniform_profile_always_passes_the_pairwise_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(43);
    for _ in 0..30 {
        let d = rng.random_range(2..=5);
        let spectrum = random_spectrum(&mut rng, d, 0.0);
        let states = within_subspace_states(&spectrum, d);
        let g = GramMatrix::from_states(&states).unwrap();
        let profile = SuccessProfile::uniform(max_uniform_gamma(&g).min(1.0), d).unwrap();
        assert!(pairwise_bound_check(&profile, &g).unwrap());
    }
}

#[test]
fn average_bound_forms_agree() {
    // The two printed forms of the pairwise-sum bound must coincide:
    // N/(N-1) - (1/(N(N-1))) Σ_{i,j} |g_ij| (full sum, unit diagonal)
    // vs 1 - (1/(N(N-1))) Σ_{i≠j} |g_ij|.
    let mut rng = ChaCha8Rng::seed_from_u64(44);
    for _ in 0..20 {
        let d = rng.random_range(2..=5);
        let dim = d + rng.random_range(0..=3);
        let spectrum = random_spectrum(&mut rng, dim, 0.01);
        let family = encode_family(&SchmidtState::new(spectrum).unwrap(), d).unwrap();
        let g = gram(&family);
        let n = g.n();
        let mut full = 0.0;
        for i in 0..n {
            for j in 0..n {
                full += g.entry(i, j).norm();
            }
        }
        let alt = n as f64 / (n - 1) as f64 - full / (n * (n - 1)) as f64;
        let direct = average_bound(&g).unwrap();
        assert!((alt - direct).abs() < 1e-12, "{alt} vs {direct}");
    }
}

#[test]
fn usd_is_unambiguous_on_random_feasible_instances() {
    let mut rng = ChaCha8Rng::seed_from_u64(45);
    for _ in 0..25 {
        let d = rng.random_range(2..=5);
        let spectrum = random_spectrum(&mut rng, d, 0.02);
        let states = within_subspace_states(&spectrum, d);
        let g = GramMatrix::from_states(&states).unwrap();
        // A random feasible profile: scale the uniform optimum down unevenly.
        let base = max_uniform_gamma(&g);
        let gammas: Vec<f64> = (0..d).map(|_| base * rng.random::<f64>()).collect();
        let povm = usd_povm(&states, &gammas).unwrap();
        for (j, s) in states.iter().enumerate() {
            let probs = born_probabilities(&povm, s).unwrap();
            for i in 0..d {
                let want = if i == j { gammas[i] } else { 0.0 };
                assert!(
                    (probs[i] - want).abs() < 1e-10,
                    "confusion ({i},{j}) = {} want {want}",
                    probs[i]
                );
            }
            assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-10);
        }
    }
}

#[test]
fn encoded_family_members_stay_unitary_and_normalized() {
    let mut rng = ChaCha8Rng::seed_from_u64(46);
    for _ in 0..10 {
        let d = rng.random_range(2..=5);
        let dim = d + rng.random_range(0..=2);
        for m in 0..d {
            for n in 0..d {
                let w = weyl(m, n, d).unwrap();
                assert!(w.matrix.is_unitary(1e-10));
            }
        }
        let spectrum = random_spectrum(&mut rng, dim, 0.0);
        let family = encode_family(&SchmidtState::new(spectrum).unwrap(), d).unwrap();
        for s in family.states() {
            assert!(s.is_normalized(1e-12));
        }
    }
}

#[test]
fn simulation_grid_tracks_analytics_and_stage1_frequencies() {
    // d ∈ {2,3}, D ∈ {d..6}: the empirical rate must sit within 4σ of the
    // achievable value, subspace hits split evenly, and the residual rate
    // must match the tail weight.
    let trials = 20_000u64;
    let mut seed = 7000u64;
    for d in [2usize, 3] {
        for dim in d..=6 {
            seed += 1;
            let spectrum: Vec<f64> = {
                // A mildly skewed deterministic spectrum.
                let raw: Vec<f64> = (0..dim).map(|k| 1.0 + 0.3 * k as f64).collect();
                let sum: f64 = raw.iter().sum();
                raw.into_iter().map(|x| x / sum).collect()
            };
            let head: f64 = spectrum[..d].iter().sum();
            let head_min = spectrum[..d].iter().cloned().fold(f64::INFINITY, f64::min);
            let analytic = d as f64 * head_min;

            let config = ProtocolConfig::new(d, dim, spectrum, trials, seed).unwrap();
            let stats = simulate(&config).unwrap();
            assert_eq!(stats.decode_errors, 0, "d={d} D={dim}");
            let slack = 4.0 * stats.stderr.max(1e-4);
            assert!(
                (stats.success_rate - analytic).abs() <= slack,
                "d={d} D={dim}: rate {} vs analytic {analytic}",
                stats.success_rate
            );

            // Stage-1 frequencies: head/d per subspace, tail for residual.
            let per_subspace = head / d as f64;
            for m in 0..d {
                let freq = stats.stage1_counts[m] as f64 / trials as f64;
                let sigma = (per_subspace * (1.0 - per_subspace) / trials as f64).sqrt();
                assert!(
                    (freq - per_subspace).abs() <= 4.0 * sigma.max(1e-4),
                    "d={d} D={dim} subspace {m}: {freq} vs {per_subspace}"
                );
            }
            if dim > d {
                let tail = 1.0 - head;
                let freq = *stats.stage1_counts.last().unwrap() as f64 / trials as f64;
                let sigma = (tail * (1.0 - tail) / trials as f64).sqrt();
                assert!(
                    (freq - tail).abs() <= 4.0 * sigma.max(1e-4),
                    "d={d} D={dim} residual: {freq} vs {tail}"
                );
            }
        }
    }
}

#[test]
fn simulation_batching_is_invisible() {
    // Trial counts straddling the stream size must still be reproducible.
    let config = ProtocolConfig::new(2, 2, vec![0.7, 0.3], 2 * 4096 + 17, 5).unwrap();
    let a = simulate(&config).unwrap();
    let b = simulate(&config).unwrap();
    assert_eq!(a.conclusive, b.conclusive);
    assert_eq!(a.stage1_counts, b.stage1_counts);
}

fn small_complex_matrix() -> impl Strategy<Value = Operator> {
    // 2x2 complex matrices with entries in [-1, 1]².
    proptest::collection::vec(
        (proptest::num::f64::NORMAL, proptest::num::f64::NORMAL)
            .prop_map(|(a, b)| (a % 1.0, b % 1.0)),
        4,
    )
    .prop_map(|vals| {
        Operator::from_rows(&[
            vec![
                Scalar::new(vals[0].0, vals[0].1),
                Scalar::new(vals[1].0, vals[1].1),
            ],
            vec![
                Scalar::new(vals[2].0, vals[2].1),
                Scalar::new(vals[3].0, vals[3].1),
            ],
        ])
        .unwrap()
    })
}

fn probability_vector(len: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.01f64..1.0, len).prop_map(|raw| {
        let sum: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / sum).collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_associativity(a in small_complex_matrix(), b in small_complex_matrix(), c in small_complex_matrix()) {
        let left = a.kron(&b).kron(&c);
        let right = a.kron(&b.kron(&c));
        prop_assert!(left.sub(&right).unwrap().max_abs_entry() < 1e-12);
    }

    #[test]
    fn schmidt_roundtrip_on_spectra(spectrum in (2usize..=5).prop_flat_map(probability_vector)) {
        let v = schmidt_form(&spectrum).unwrap();
        let d = spectrum.len();
        let dec = schmidt_decompose(&v, d, d).unwrap();
        let mut expect = spectrum.clone();
        expect.sort_by(|a, b| b.total_cmp(a));
        for (got, want) in dec.spectrum.iter().zip(&expect) {
            prop_assert!((got - want).abs() < 1e-10);
        }
        prop_assert!(dec.reconstruction_error(&v) < 1e-9);
    }

    #[test]
    fn entropy_bounds(spectrum in (2usize..=6).prop_flat_map(probability_vector)) {
        let s = SchmidtState::new(spectrum).unwrap();
        let e = s.entanglement_entropy();
        prop_assert!(e >= 0.0);
        prop_assert!(e <= (s.dim() as f64).log2() + 1e-12);
    }

    #[test]
    fn weyl_family_is_unitary(d in 2usize..=6, m in 0usize..6, n in 0usize..6) {
        let (m, n) = (m % d, n % d);
        let w = weyl(m, n, d).unwrap();
        prop_assert!(w.matrix.is_unitary(1e-10));
    }
}
