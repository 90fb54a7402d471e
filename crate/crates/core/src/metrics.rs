//! Figures of merit: trace distances and quantum Fisher information for
//! amplitude estimation.

use rand::Rng;

use crate::error::{Error, Result};
use crate::noise::sample_real_deltas;
use crate::scalar::Real;
use crate::state::{norm_sqr, DensityMatrix, PureState};

/// `sqrt(1 − |⟨φ|ψ⟩|²)`, evaluated as the norm of the part of `ψ`
/// orthogonal to `φ` so that nearly equal states do not lose half their
/// digits to cancellation.
pub fn trace_distance_pure<T: Real>(psi: &PureState<T>, phi: &PureState<T>) -> Result<T> {
    if psi.dim() != phi.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            got: phi.dim(),
        });
    }
    let phi_sq = norm_sqr(phi.amps());
    let psi_sq = norm_sqr(psi.amps());
    let proj = phi.inner(psi) / phi_sq;
    let residual = psi
        .amps()
        .iter()
        .zip(phi.amps())
        .fold(T::zero(), |acc, (&a, &b)| acc + (a - proj * b).norm_sqr());
    Ok((residual / psi_sq).sqrt().min(T::one()))
}

/// `½ Tr|σ − ρ|`
pub fn trace_distance_mixed<T: Real>(rho: &DensityMatrix<T>, sigma: &DensityMatrix<T>) -> Result<T> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: sigma.dim(),
        });
    }
    let diff = sigma.matrix() - rho.matrix();
    let half_sum = diff
        .hermitian_eigenvalues()
        .into_iter()
        .fold(T::zero(), |acc, ev| acc + ev.abs())
        * T::lit(0.5);
    Ok(half_sum.min(T::one()))
}

/// Per-component and total Fisher information with the matching
/// Cramér–Rao variance `1/total`.
#[derive(Debug, Clone, PartialEq)]
pub struct QfiReport<T> {
    pub per_component: Vec<T>,
    pub total: T,
    pub norm_const: T,
    pub variance: T,
}

/// `Q_n = 4(1 − |ψ_n|²)`; the total is `4(d−1)` for any unit vector.
pub fn qfi_pure<T: Real>(psi: &PureState<T>) -> QfiReport<T> {
    let four = T::lit(4.0);
    let per_component: Vec<T> = psi.amps().iter().map(|a| four * (T::one() - a.norm_sqr())).collect();
    let total = per_component.iter().fold(T::zero(), |acc, &q| acc + q);
    QfiReport {
        per_component,
        total,
        norm_const: T::one(),
        variance: total.recip(),
    }
}

/// Fisher information of `ψ′ = (ψ + δ)/𝒩` with respect to each `ψ_n`, for
/// real `ψ` and real `δ`:
/// `Q′_n = (4/𝒩²)[1 − (ψ_n+δ_n)²/𝒩²]`, total `4(d−1)/𝒩²`.
pub fn qfi_noisy<T: Real>(psi: &PureState<T>, deltas: &[T]) -> Result<QfiReport<T>> {
    if deltas.len() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            got: deltas.len(),
        });
    }
    if !psi.is_real() {
        return Err(Error::Parameter("noisy QFI needs real amplitudes".into()));
    }
    let shifted: Vec<T> = psi.amps().iter().zip(deltas).map(|(a, &dl)| a.re + dl).collect();
    let norm_sq = shifted.iter().fold(T::zero(), |acc, &x| acc + x * x);
    if !(norm_sq > T::zero()) {
        return Err(Error::DegenerateData("perturbed state has zero norm".into()));
    }
    let four = T::lit(4.0);
    let per_component: Vec<T> = shifted
        .iter()
        .map(|&x| four / norm_sq * (T::one() - x * x / norm_sq))
        .collect();
    let total = per_component.iter().fold(T::zero(), |acc, &q| acc + q);
    Ok(QfiReport {
        per_component,
        total,
        norm_const: norm_sq.sqrt(),
        variance: total.recip(),
    })
}

/// Closed-form total `4(d−1)/𝒩²`.
pub fn qfi_total_closed_form<T: Real>(dim: usize, norm_const: T) -> T {
    T::lit(4.0) * T::from_usize_lossy(dim - 1) / (norm_const * norm_const)
}

/// Realized `𝒩 = ‖ψ + δ‖` over `reps` real Gaussian perturbations.
pub fn norm_const_samples<T: Real, R: Rng + ?Sized>(psi: &PureState<T>, sigma: T, reps: usize, rng: &mut R) -> Vec<T> {
    if sigma.is_zero() {
        // Unperturbed: `𝒩 = 1` by definition, not up to rounding.
        return vec![T::one(); reps];
    }
    (0..reps)
        .map(|_| {
            let deltas = sample_real_deltas(psi.dim(), sigma, rng);
            psi.amps()
                .iter()
                .zip(&deltas)
                .fold(T::zero(), |acc, (a, &dl)| {
                    let z = *a + crate::scalar::creal(dl);
                    acc + z.norm_sqr()
                })
                .sqrt()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::creal;
    use crate::state::{make_standard_state, random_real_state, StandardState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn pure_distance_examples() {
        let zero = PureState::<f64>::basis(2, 0).unwrap();
        let one = PureState::<f64>::basis(2, 1).unwrap();
        let plus = PureState::<f64>::uniform(2).unwrap();
        assert_eq!(trace_distance_pure(&zero, &zero).unwrap(), 0.0);
        assert!((trace_distance_pure(&zero, &one).unwrap() - 1.0).abs() < 1e-15);
        assert!((trace_distance_pure(&zero, &plus).unwrap() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn ghz_vs_maximally_mixed() {
        let ghz = make_standard_state::<f64>(StandardState::Ghz, 3, None)
            .unwrap()
            .projector();
        let mixed = DensityMatrix::maximally_mixed(8).unwrap();
        assert!((trace_distance_mixed(&ghz, &mixed).unwrap() - 0.875).abs() < 1e-12);
        assert!(trace_distance_mixed(&ghz, &ghz).unwrap() < 1e-12);
    }

    #[test]
    fn qfi_pure_examples() {
        let e0 = PureState::<f64>::basis(2, 0).unwrap();
        let r = qfi_pure(&e0);
        assert_eq!(r.per_component, vec![0.0, 4.0]);
        assert_eq!(r.total, 4.0);
        let u = qfi_pure(&PureState::<f64>::uniform(8).unwrap());
        assert!(u.per_component.iter().all(|&q| (q - 3.5).abs() < 1e-14));
        assert!((u.total - 28.0).abs() < 1e-12);
        assert!((u.variance - 1.0 / 28.0).abs() < 1e-14);
    }

    #[test]
    fn qfi_noisy_reduces_to_pure_without_noise() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let psi = random_real_state::<f64, _>(8, &mut rng).unwrap();
        let noisy = qfi_noisy(&psi, &[0.0; 8]).unwrap();
        let clean = qfi_pure(&psi);
        for (a, b) in noisy.per_component.iter().zip(&clean.per_component) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!((noisy.norm_const - 1.0).abs() < 1e-14);
    }

    #[test]
    fn qfi_noisy_with_norm_sq_two() {
        // ψ + δ = e₀ + e₁, so 𝒩² = 2
        let psi = PureState::<f64>::basis(8, 0).unwrap();
        let mut deltas = [0.0; 8];
        deltas[1] = 1.0;
        let r = qfi_noisy(&psi, &deltas).unwrap();
        assert!((r.norm_const.powi(2) - 2.0).abs() < 1e-14);
        assert!((r.total - 14.0).abs() < 1e-12);
    }

    #[test]
    fn qfi_noisy_rejects_complex_and_zero() {
        let c = PureState::<f64>::normalized(vec![creal(1.0), crate::scalar::cplx(0.0, 1.0)]).unwrap();
        assert!(qfi_noisy(&c, &[0.0, 0.0]).is_err());
        let e0 = PureState::<f64>::basis(2, 0).unwrap();
        assert!(matches!(qfi_noisy(&e0, &[-1.0, 0.0]), Err(Error::DegenerateData(_))));
    }

    #[test]
    fn zero_sigma_norm_constants_are_one() {
        let psi = PureState::<f64>::uniform(8).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = norm_const_samples(&psi, 0.0, 50, &mut rng);
        assert!(v.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn norm_constants_reproducible() {
        let psi = PureState::<f64>::uniform(8).unwrap();
        let a = norm_const_samples(&psi, 0.1, 20, &mut ChaCha8Rng::seed_from_u64(8));
        let b = norm_const_samples(&psi, 0.1, 20, &mut ChaCha8Rng::seed_from_u64(8));
        assert_eq!(a, b);
    }

    #[test]
    fn variance_crossover() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let psi = random_real_state::<f64, _>(8, &mut rng).unwrap();
        let q = qfi_pure(&psi).total;
        for _ in 0..500 {
            let deltas = sample_real_deltas(8, 0.2, &mut rng);
            let r = qfi_noisy(&psi, &deltas).unwrap();
            if (r.norm_const - 1.0).abs() > 1e-9 {
                assert_eq!(r.total > q, r.norm_const < 1.0);
            }
        }
    }
}
