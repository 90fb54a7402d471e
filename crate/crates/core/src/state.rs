//! State representations: pure amplitude vectors, density matrices and the
//! (possibly noisy) discrete-Fourier conjugate basis states.
//!
//! Basis index `n` of an `N`-qubit register reads the qubits most significant
//! first, so `|q₀q₁q₂⟩ = |011⟩` is index 3.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{cplx, creal, root_of_unity, Real, C};

/// Unit-norm amplitude vector of dimension `d ≥ 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    amps: Vec<C<T>>,
}

impl<T: Real> PureState<T> {
    /// Validates dimension and normalization.
    pub fn new(amps: Vec<C<T>>) -> Result<Self> {
        if amps.len() < 2 {
            return Err(Error::InvalidState(format!("dimension {} < 2", amps.len())));
        }
        let norm = norm_sqr(&amps);
        if (norm - T::one()).abs() > T::tol() {
            return Err(Error::InvalidState(format!("squared norm {norm} differs from 1")));
        }
        Ok(Self { amps })
    }

    /// Rescales an arbitrary nonzero vector to unit norm.
    pub fn normalized(amps: Vec<C<T>>) -> Result<Self> {
        Ok(Self::normalized_with_norm(amps)?.0)
    }

    /// As [`PureState::normalized`], also returning the norm divided out.
    pub fn normalized_with_norm(mut amps: Vec<C<T>>) -> Result<(Self, T)> {
        if amps.len() < 2 {
            return Err(Error::InvalidState(format!("dimension {} < 2", amps.len())));
        }
        let norm = norm_sqr(&amps).sqrt();
        if !(norm > T::zero()) || !norm.is_finite() {
            return Err(Error::DegenerateData("cannot normalize a zero vector".into()));
        }
        let inv = norm.recip();
        amps.iter_mut().for_each(|a| *a = *a * inv);
        Ok((Self { amps }, norm))
    }

    pub fn from_real(amps: &[T]) -> Result<Self> {
        Self::new(amps.iter().map(|&x| creal(x)).collect())
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, dim });
        }
        let mut amps = vec![C::zero(); dim];
        amps[index] = C::one();
        Self::new(amps)
    }

    /// Equal superposition `Σ_n |n⟩/√d`.
    pub fn uniform(dim: usize) -> Result<Self> {
        let a = creal(T::from_usize_lossy(dim).sqrt().recip());
        Self::new(vec![a; dim])
    }

    pub(crate) fn from_amps_unchecked(amps: Vec<C<T>>) -> Self {
        Self { amps }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[inline]
    pub fn amps(&self) -> &[C<T>] {
        &self.amps
    }

    pub fn into_amps(self) -> Vec<C<T>> {
        self.amps
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Self) -> C<T> {
        inner(&self.amps, &other.amps)
    }

    pub fn fidelity(&self, other: &Self) -> T {
        self.inner(other).norm_sqr()
    }

    pub fn projector(&self) -> DensityMatrix<T> {
        DensityMatrix {
            elems: CMatrix::outer(&self.amps, &self.amps),
        }
    }

    /// Rotates the global phase so the largest-magnitude amplitude is real
    /// and positive. Ties resolve to the lowest index.
    pub fn with_canonical_phase(mut self) -> Self {
        let mut best = 0;
        for (i, a) in self.amps.iter().enumerate() {
            if a.norm_sqr() > self.amps[best].norm_sqr() * (T::one() + T::tol()) {
                best = i;
            }
        }
        let lead = self.amps[best];
        let norm = lead.norm();
        if norm > T::zero() {
            let phase = lead.conj() / norm;
            self.amps.iter_mut().for_each(|a| *a = *a * phase);
            self.amps[best] = creal(norm);
        }
        self
    }

    pub fn is_real(&self) -> bool {
        self.amps.iter().all(|a| a.im.abs() <= T::tol())
    }
}

pub(crate) fn norm_sqr<T: Real>(v: &[C<T>]) -> T {
    v.iter().fold(T::zero(), |acc, a| acc + a.norm_sqr())
}

pub(crate) fn inner<T: Real>(u: &[C<T>], v: &[C<T>]) -> C<T> {
    u.iter().zip(v).fold(C::zero(), |acc, (a, b)| acc + a.conj() * b)
}

/// Hermitian, positive-semidefinite, unit-trace matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    elems: CMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    pub fn new(elems: CMatrix<T>) -> Result<Self> {
        if elems.dim() < 2 {
            return Err(Error::InvalidState(format!("dimension {} < 2", elems.dim())));
        }
        let herm = elems.hermiticity_defect();
        if herm > T::tol() {
            return Err(Error::InvalidState(format!("not Hermitian (defect {herm})")));
        }
        let tr = elems.trace();
        if (tr.re - T::one()).abs() > T::tol() || tr.im.abs() > T::tol() {
            return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
        }
        let min_ev = elems.hermitian_eigenvalues()[0];
        if min_ev < -T::psd_tol() {
            return Err(Error::InvalidState(format!("negative eigenvalue {min_ev}")));
        }
        Ok(Self { elems })
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(CMatrix::identity(dim).scale_real(T::from_usize_lossy(dim).recip()))
    }

    pub(crate) fn from_matrix_unchecked(elems: CMatrix<T>) -> Self {
        Self { elems }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.elems.dim()
    }

    #[inline]
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.elems
    }

    #[inline]
    pub fn get(&self, n: usize, m: usize) -> C<T> {
        self.elems[(n, m)]
    }

    pub fn purity(&self) -> T {
        (&self.elems * &self.elems).trace().re
    }
}

/// Conjugate-basis state `Σ_m 𝔠_m e^{i2πmk/d} |m⟩` with
/// `𝔠_m = (1 + κ_m)/𝓜`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateState<T> {
    k: usize,
    coeffs: Vec<C<T>>,
    weights: Vec<T>,
    kappas: Vec<T>,
    norm_const: T,
}

impl<T: Real> ConjugateState<T> {
    pub fn new(dim: usize, k: usize, kappas: &[T]) -> Result<Self> {
        if dim < 2 {
            return Err(Error::Parameter(format!("dimension {dim} < 2")));
        }
        if k >= dim {
            return Err(Error::IndexOutOfRange { index: k, dim });
        }
        if kappas.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: kappas.len(),
            });
        }
        let mut raw = Vec::with_capacity(dim);
        for (index, &kappa) in kappas.iter().enumerate() {
            let w = T::one() + kappa;
            if !(w > T::zero()) {
                return Err(Error::DegenerateNoise {
                    index,
                    value: w.to_f64().unwrap_or(f64::NAN),
                });
            }
            raw.push(w);
        }
        let norm_const = raw.iter().fold(T::zero(), |acc, &w| acc + w * w).sqrt();
        let weights: Vec<T> = raw.iter().map(|&w| w / norm_const).collect();
        let coeffs = weights
            .iter()
            .enumerate()
            .map(|(m, &w)| root_of_unity::<T>((m * k) as i64, dim) * w)
            .collect();
        Ok(Self {
            k,
            coeffs,
            weights,
            kappas: kappas.to_vec(),
            norm_const,
        })
    }

    /// Noiseless conjugate state `Σ_m e^{i2πmk/d}|m⟩/√d`.
    pub fn ideal(dim: usize, k: usize) -> Result<Self> {
        Self::new(dim, k, &vec![T::zero(); dim])
    }

    /// The same detector noise at another Fourier index.
    pub fn with_index(&self, k: usize) -> Result<Self> {
        Self::new(self.dim(), k, &self.kappas)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    #[inline]
    pub fn index(&self) -> usize {
        self.k
    }

    /// Complex amplitudes `⟨m|𝔠′_k⟩`.
    #[inline]
    pub fn coeffs(&self) -> &[C<T>] {
        &self.coeffs
    }

    /// Real magnitudes `𝔠_m = (1+κ_m)/𝓜`, independent of `k`.
    #[inline]
    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    #[inline]
    pub fn kappas(&self) -> &[T] {
        &self.kappas
    }

    #[inline]
    pub fn norm_const(&self) -> T {
        self.norm_const
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardState {
    Ghz,
    W,
    Dicke { excitations: u32 },
    Haar,
}

/// Builds a named state on `num_qubits` qubits.
///
/// `Haar` draws from a ChaCha stream seeded with `seed` (entropy when `None`).
pub fn make_standard_state<T: Real>(kind: StandardState, num_qubits: u32, seed: Option<u64>) -> Result<PureState<T>> {
    if num_qubits == 0 || num_qubits > 20 {
        return Err(Error::Parameter(format!("num_qubits {num_qubits} outside 1..=20")));
    }
    let dim = 1usize << num_qubits;
    match kind {
        StandardState::Ghz => {
            let a = creal(T::SQRT_2().recip());
            let mut amps = vec![C::zero(); dim];
            amps[0] = a;
            amps[dim - 1] = a;
            PureState::new(amps)
        }
        StandardState::W => weight_superposition(num_qubits, 1),
        StandardState::Dicke { excitations } => {
            if excitations == 0 || excitations >= num_qubits {
                return Err(Error::Parameter(format!(
                    "Dicke excitations {excitations} must lie in 1..{num_qubits}"
                )));
            }
            weight_superposition(num_qubits, excitations)
        }
        StandardState::Haar => {
            let mut rng = match seed {
                Some(s) => ChaCha8Rng::seed_from_u64(s),
                None => ChaCha8Rng::from_os_rng(),
            };
            haar_state(dim, &mut rng)
        }
    }
}

fn weight_superposition<T: Real>(num_qubits: u32, weight: u32) -> Result<PureState<T>> {
    let dim = 1usize << num_qubits;
    let support: Vec<usize> = (0..dim).filter(|n| n.count_ones() == weight).collect();
    let a = creal(T::from_usize_lossy(support.len()).sqrt().recip());
    let mut amps = vec![C::zero(); dim];
    for n in support {
        amps[n] = a;
    }
    PureState::new(amps)
}

/// Normalized vector of i.i.d. standard complex Gaussians.
pub fn haar_state<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<PureState<T>> {
    let amps = (0..dim)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            cplx(T::lit(re), T::lit(im))
        })
        .collect();
    PureState::normalized(amps)
}

/// Real unit vector with i.i.d. Gaussian direction.
pub fn random_real_state<T: Real, R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Result<PureState<T>> {
    let amps = (0..dim)
        .map(|_| {
            let x: f64 = rng.sample(StandardNormal);
            creal(T::lit(x))
        })
        .collect();
    PureState::normalized(amps)
}

/// Hilbert–Schmidt random density matrix of the given rank (`G G†/Tr`).
pub fn random_density_matrix<T: Real, R: Rng + ?Sized>(
    dim: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix<T>> {
    if rank == 0 || rank > dim {
        return Err(Error::Parameter(format!("rank {rank} outside 1..={dim}")));
    }
    let mut acc = CMatrix::zeros(dim);
    for _ in 0..rank {
        let v: Vec<C<T>> = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                cplx(T::lit(re), T::lit(im))
            })
            .collect();
        acc = &acc + &CMatrix::outer(&v, &v);
    }
    let tr = acc.trace().re;
    DensityMatrix::new(acc.scale_real(tr.recip()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const FRAC_1_SQRT_3: f64 = 0.577_350_269_189_625_8;

    #[test]
    fn ghz3_amplitudes() {
        let s = make_standard_state::<f64>(StandardState::Ghz, 3, None).unwrap();
        for (n, a) in s.amps().iter().enumerate() {
            let want = if n == 0 || n == 7 {
                std::f64::consts::FRAC_1_SQRT_2
            } else {
                0.0
            };
            assert!((a.re - want).abs() < 1e-15 && a.im == 0.0, "n={n}");
        }
    }

    #[test]
    fn w3_and_dicke3_supports() {
        let w = make_standard_state::<f64>(StandardState::W, 3, None).unwrap();
        let d = make_standard_state::<f64>(StandardState::Dicke { excitations: 2 }, 3, None).unwrap();
        for n in 0..8 {
            let w_want = if [0b001, 0b010, 0b100].contains(&n) {
                FRAC_1_SQRT_3
            } else {
                0.0
            };
            let d_want = if [0b011, 0b101, 0b110].contains(&n) {
                FRAC_1_SQRT_3
            } else {
                0.0
            };
            assert!((w.amps()[n].re - w_want).abs() < 1e-15);
            assert!((d.amps()[n].re - d_want).abs() < 1e-15);
        }
    }

    #[test]
    fn dicke_excitation_bounds() {
        for e in [0, 3, 4] {
            let r = make_standard_state::<f64>(StandardState::Dicke { excitations: e }, 3, None);
            assert!(matches!(r, Err(Error::Parameter(_))));
        }
        assert!(make_standard_state::<f64>(StandardState::Ghz, 0, None).is_err());
    }

    #[test]
    fn haar_is_seeded_and_normalized() {
        let a = make_standard_state::<f64>(StandardState::Haar, 3, Some(11)).unwrap();
        let b = make_standard_state::<f64>(StandardState::Haar, 3, Some(11)).unwrap();
        let c = make_standard_state::<f64>(StandardState::Haar, 3, Some(12)).unwrap();
        assert_eq!(a, b);
        assert!((norm_sqr(a.amps()) - 1.0).abs() < 1e-12);
        assert!(a.fidelity(&c) < 1.0 - 1e-6);
    }

    #[test]
    fn conjugate_uniform_d4() {
        let c = ConjugateState::<f64>::ideal(4, 0).unwrap();
        for z in c.coeffs() {
            assert!((z.re - 0.5).abs() < 1e-15 && z.im.abs() < 1e-15);
        }
    }

    #[test]
    fn conjugate_d2_k1() {
        let c = ConjugateState::<f64>::ideal(2, 1).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((c.coeffs()[0] - cplx(h, 0.0)).norm() < 1e-15);
        assert!((c.coeffs()[1] - cplx(-h, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn conjugate_noisy_d2() {
        let c = ConjugateState::<f64>::new(2, 0, &[0.1, -0.1]).unwrap();
        let m = (1.1f64 * 1.1 + 0.9 * 0.9).sqrt();
        assert!((c.norm_const() - m).abs() < 1e-15);
        assert!((c.coeffs()[0].re - 1.1 / m).abs() < 1e-15);
        assert!((c.coeffs()[1].re - 0.9 / m).abs() < 1e-15);
    }

    #[test]
    fn conjugate_rejects_degenerate_noise() {
        let r = ConjugateState::<f64>::new(2, 0, &[0.0, -1.0]);
        assert!(matches!(r, Err(Error::DegenerateNoise { index: 1, .. })));
        assert!(ConjugateState::<f64>::new(2, 2, &[0.0, 0.0]).is_err());
        assert!(ConjugateState::<f64>::new(3, 0, &[0.0, 0.0]).is_err());
    }

    #[test]
    fn ideal_conjugate_basis_is_orthonormal() {
        for d in [2, 3, 4, 8, 16] {
            let basis: Vec<_> = (0..d).map(|k| ConjugateState::<f64>::ideal(d, k).unwrap()).collect();
            for j in 0..d {
                for k in 0..d {
                    let ip = inner(basis[j].coeffs(), basis[k].coeffs());
                    let want = if j == k { 1.0 } else { 0.0 };
                    assert!((ip - cplx(want, 0.0)).norm() < 1e-12, "d={d} j={j} k={k}");
                }
            }
        }
    }

    #[test]
    fn density_matrix_validation() {
        let bad_trace = CMatrix::<f64>::identity(2);
        assert!(DensityMatrix::new(bad_trace).is_err());
        let negative = CMatrix::diagonal(&[creal(1.5), creal(-0.5)]);
        assert!(DensityMatrix::new(negative).is_err());
        let mut non_herm = CMatrix::<f64>::identity(2).scale_real(0.5);
        non_herm[(0, 1)] = cplx(0.1, 0.0);
        assert!(DensityMatrix::new(non_herm).is_err());
        assert!(DensityMatrix::<f64>::maximally_mixed(4).is_ok());
    }

    #[test]
    fn canonical_phase_makes_leading_amplitude_positive() {
        let s = PureState::<f64>::normalized(vec![cplx(0.1, 0.2), cplx(0.0, -0.9)]).unwrap();
        let c = s.clone().with_canonical_phase();
        assert!(c.amps()[1].im.abs() < 1e-15 && c.amps()[1].re > 0.0);
        assert!((s.fidelity(&c) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn f32_states_work() {
        let s = make_standard_state::<f32>(StandardState::Ghz, 2, None).unwrap();
        assert_eq!(s.dim(), 4);
        let c = ConjugateState::<f32>::ideal(4, 1).unwrap();
        assert!((norm_sqr(c.coeffs()) - 1.0).abs() < 1e-6);
    }
}
