mod common;

use common::rng;
use dsm::metrics::{norm_const_samples, qfi_total_closed_form};
use dsm::noise::sample_real_deltas;
use dsm::state::random_real_state;
use dsm::{qfi_noisy, qfi_pure, PureState};

/// `ψ′(ψ) = (ψ + δ)/‖ψ + δ‖` with every `ψ_m` treated as a free real parameter.
fn perturbed(psi: &[f64], deltas: &[f64]) -> Vec<f64> {
    let v: Vec<f64> = psi.iter().zip(deltas).map(|(a, b)| a + b).collect();
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / n).collect()
}

/// `4[⟨∂ψ′|∂ψ′⟩ − ⟨∂ψ′|ψ′⟩²]` with a central-difference derivative.
fn finite_difference_qfi(psi: &[f64], deltas: &[f64], n: usize, h: f64) -> f64 {
    let shifted = |s: f64| {
        let mut p = psi.to_vec();
        p[n] += s;
        perturbed(&p, deltas)
    };
    let (plus, minus) = (shifted(h), shifted(-h));
    let dpsi: Vec<f64> = plus.iter().zip(&minus).map(|(a, b)| (a - b) / (2.0 * h)).collect();
    let base = perturbed(psi, deltas);
    let dd: f64 = dpsi.iter().map(|x| x * x).sum();
    let dp: f64 = dpsi.iter().zip(&base).map(|(a, b)| a * b).sum();
    4.0 * (dd - dp * dp)
}

#[test]
fn noisy_qfi_matches_finite_differences() {
    let mut r = rng(31);
    for d in [2usize, 4, 8, 16] {
        for _ in 0..5 {
            let psi = random_real_state::<f64, _>(d, &mut r).unwrap();
            let deltas = sample_real_deltas(d, 0.1, &mut r);
            let re: Vec<f64> = psi.amps().iter().map(|a| a.re).collect();
            let report = qfi_noisy(&psi, &deltas).unwrap();
            for n in 0..d {
                let fd = finite_difference_qfi(&re, &deltas, n, 1e-6);
                let rel = (fd - report.per_component[n]).abs() / report.per_component[n].abs();
                assert!(rel < 1e-5, "d={d} n={n} fd={fd} closed={}", report.per_component[n]);
            }
        }
    }
}

#[test]
fn noiseless_examples() {
    let q = qfi_pure(&PureState::<f64>::basis(2, 0).unwrap());
    assert_eq!(q.per_component, vec![0.0, 4.0]);
    assert_eq!(q.total, 4.0);
    let u = qfi_pure(&PureState::<f64>::uniform(8).unwrap());
    assert!((u.total - 28.0).abs() < 1e-12);
    assert!((u.variance - 1.0 / 28.0).abs() < 1e-15);
    for q in &u.per_component {
        assert!((q - 4.0 * (1.0 - 1.0 / 8.0)).abs() < 1e-12);
    }
}

#[test]
fn zero_perturbation_matches_noiseless() {
    let psi = random_real_state::<f64, _>(8, &mut rng(32)).unwrap();
    let a = qfi_noisy(&psi, &[0.0; 8]).unwrap();
    let b = qfi_pure(&psi);
    assert!((a.total - b.total).abs() < 1e-12);
    for (x, y) in a.per_component.iter().zip(&b.per_component) {
        assert!((x - y).abs() < 1e-12);
    }
    assert!((a.norm_const - 1.0).abs() < 1e-12);
}

#[test]
fn norm_squared_two_halves_the_information() {
    assert!((qfi_total_closed_form(8, 2f64.sqrt()) - 14.0).abs() < 1e-12);
    let mut psi = vec![0.0; 8];
    psi[0] = 1.0;
    let mut deltas = vec![0.0; 8];
    deltas[1] = 1.0;
    let q = qfi_noisy(&PureState::<f64>::from_real(&psi).unwrap(), &deltas).unwrap();
    assert!((q.total - 14.0).abs() < 1e-12);
}

#[test]
fn degenerate_and_complex_inputs_rejected() {
    let psi = PureState::<f64>::from_real(&[1.0, 0.0]).unwrap();
    assert!(qfi_noisy(&psi, &[-1.0, 0.0]).is_err());
    assert!(qfi_noisy(&psi, &[0.0]).is_err());
    let complex = dsm::PureStateF64::uniform(2).unwrap().into_amps();
    let complex = PureState::normalized(vec![complex[0], complex[1] * num_complex::Complex64::i()]).unwrap();
    assert!(qfi_noisy(&complex, &[0.0, 0.0]).is_err());
}

#[test]
fn norm_constant_samples() {
    let psi = random_real_state::<f64, _>(8, &mut rng(33)).unwrap();
    assert!(norm_const_samples(&psi, 0.0, 100, &mut rng(1))
        .iter()
        .all(|&n| n == 1.0));
    let a = norm_const_samples(&psi, 0.1, 1000, &mut rng(2));
    let b = norm_const_samples(&psi, 0.1, 1000, &mut rng(2));
    assert_eq!(a, b);

    let values = norm_const_samples(&psi, 0.1, 100_000, &mut rng(3));
    let mut counts = [0usize; 15];
    for v in values {
        if (0.5..2.0).contains(&v) {
            counts[((v - 0.5) / 0.1) as usize] += 1;
        }
    }
    let mode = (0..15).max_by_key(|&i| counts[i]).unwrap();
    // Bin 5 is [1.0, 1.1).
    assert_eq!(mode, 5);
}
