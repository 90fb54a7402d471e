//! Pure-state controlled measurement: probe amplitudes after postselection,
//! Pauli readout probabilities, and amplitude reconstruction.
//!
//! The probe starts in `|+⟩`. In C1 the interaction flips on `|n⟩⟨n|` and the
//! target is postselected on the conjugate state `|𝔠′₀⟩`; C2 swaps those two
//! roles and keeps every computational-basis postselection outcome.

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cplx, Real, C};
use crate::state::{inner, ConjugateState, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, PartialOrd, Ord)]
pub enum Configuration {
    C1,
    C2,
}

impl std::fmt::Display for Configuration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Configuration::C1 => "C1",
            Configuration::C2 => "C2",
        })
    }
}

/// One of the three two-outcome probe measurements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PauliBasis {
    /// `{|0⟩, |1⟩}`
    Z,
    /// `{|+⟩, |−⟩}`
    X,
    /// `{|L⟩, |R⟩}`
    Y,
}

impl PauliBasis {
    pub const ALL: [PauliBasis; 3] = [PauliBasis::Z, PauliBasis::X, PauliBasis::Y];

    /// Bra components of the two eigenstates: `⟨j| = (u₀⟨0| + u₁⟨1|)`,
    /// first the `+1` eigenstate then the `−1` one.
    pub fn bras<T: Real>(self) -> [[C<T>; 2]; 2] {
        let h = T::SQRT_2().recip();
        let (o, z) = (T::one(), T::zero());
        match self {
            PauliBasis::Z => [[cplx(o, z), cplx(z, z)], [cplx(z, z), cplx(o, z)]],
            PauliBasis::X => [[cplx(h, z), cplx(h, z)], [cplx(h, z), cplx(-h, z)]],
            PauliBasis::Y => [[cplx(h, z), cplx(z, -h)], [cplx(h, z), cplx(z, h)]],
        }
    }
}

/// Unnormalized probe amplitude left after a postselection.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeState<T> {
    pub a0: C<T>,
    pub a1: C<T>,
}

impl<T: Real> ProbeState<T> {
    /// `⟨η|η⟩`, the postselection success probability.
    pub fn norm_sqr(&self) -> T {
        self.a0.norm_sqr() + self.a1.norm_sqr()
    }

    /// `|⟨j|η⟩|²` for the two eigenstates of `basis`.
    pub fn outcome_probabilities(&self, basis: PauliBasis) -> [T; 2] {
        basis
            .bras::<T>()
            .map(|[u0, u1]| (u0 * self.a0 + u1 * self.a1).norm_sqr())
    }
}

/// `Γ = ⟨𝔠′|ψ′⟩ = Σ_m 𝔠_m* ψ′_m`.
pub fn overlap_gamma<T: Real>(psi: &PureState<T>, post: &ConjugateState<T>) -> C<T> {
    inner(post.coeffs(), psi.amps())
}

fn check_dims<T: Real>(psi: &PureState<T>, c: &ConjugateState<T>, n: usize) -> Result<()> {
    if c.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: psi.dim(),
            got: c.dim(),
        });
    }
    if n >= psi.dim() {
        return Err(Error::IndexOutOfRange {
            index: n,
            dim: psi.dim(),
        });
    }
    Ok(())
}

/// C1: `η = [(Γ − 𝔠_nψ′_n)|0⟩ + 𝔠_nψ′_n|1⟩]/√2`.
pub fn probe_state_c1<T: Real>(psi: &PureState<T>, post: &ConjugateState<T>, n: usize) -> Result<ProbeState<T>> {
    check_dims(psi, post, n)?;
    let h = T::SQRT_2().recip();
    let gamma = overlap_gamma(psi, post);
    let x = post.coeffs()[n].conj() * psi.amps()[n];
    Ok(ProbeState {
        a0: (gamma - x) * h,
        a1: x * h,
    })
}

/// C2: `η = [(ψ′_n − 𝔠_nΓ)|0⟩ + 𝔠_nΓ|1⟩]/√2`.
pub fn probe_state_c2<T: Real>(psi: &PureState<T>, inter: &ConjugateState<T>, n: usize) -> Result<ProbeState<T>> {
    check_dims(psi, inter, n)?;
    let h = T::SQRT_2().recip();
    let y = inter.coeffs()[n] * overlap_gamma(psi, inter);
    Ok(ProbeState {
        a0: (psi.amps()[n] - y) * h,
        a1: y * h,
    })
}

pub fn probe_state<T: Real>(
    config: Configuration,
    psi: &PureState<T>,
    conj: &ConjugateState<T>,
    n: usize,
) -> Result<ProbeState<T>> {
    match config {
        Configuration::C1 => probe_state_c1(psi, conj, n),
        Configuration::C2 => probe_state_c2(psi, conj, n),
    }
}

/// Readout probabilities in the six Pauli eigenstates.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PauliProbabilities<T> {
    pub p0: T,
    pub p1: T,
    pub p_plus: T,
    pub p_minus: T,
    pub p_l: T,
    pub p_r: T,
}

impl<T: Real> PauliProbabilities<T> {
    pub fn from_probe(eta: &ProbeState<T>) -> Self {
        let [p0, p1] = eta.outcome_probabilities(PauliBasis::Z);
        let [p_plus, p_minus] = eta.outcome_probabilities(PauliBasis::X);
        let [p_l, p_r] = eta.outcome_probabilities(PauliBasis::Y);
        Self {
            p0,
            p1,
            p_plus,
            p_minus,
            p_l,
            p_r,
        }
    }

    pub fn pair(&self, basis: PauliBasis) -> [T; 2] {
        match basis {
            PauliBasis::Z => [self.p0, self.p1],
            PauliBasis::X => [self.p_plus, self.p_minus],
            PauliBasis::Y => [self.p_l, self.p_r],
        }
    }

    pub fn set_pair(&mut self, basis: PauliBasis, [a, b]: [T; 2]) {
        match basis {
            PauliBasis::Z => (self.p0, self.p1) = (a, b),
            PauliBasis::X => (self.p_plus, self.p_minus) = (a, b),
            PauliBasis::Y => (self.p_l, self.p_r) = (a, b),
        }
    }

    /// `2(Λ₁₀ + Λ₁₁) = (P₊ − P₋ + 2P₁) + i(P_L − P_R)`; carries `Γ*𝔠_nψ′_n` in C1.
    pub fn lower_row_signal(&self) -> C<T> {
        cplx(self.p_plus - self.p_minus + self.p1 + self.p1, self.p_l - self.p_r)
    }
}

pub fn pauli_probabilities<T: Real>(eta: &ProbeState<T>) -> PauliProbabilities<T> {
    PauliProbabilities::from_probe(eta)
}

/// The experimenter's intended conjugate-state magnitudes, `1/√d` each.
pub fn nominal_coefficients<T: Real>(dim: usize) -> Vec<T> {
    vec![T::from_usize_lossy(dim).sqrt().recip(); dim]
}

/// Estimates `ψ′` from one row of Pauli probabilities per basis index.
///
/// C1 reads `(P₊−P₋+2P₁) + i(P_L−P_R) ∝ 𝔠_nψ′_n`. In C2 the target amplitude
/// sits on the `|0⟩` branch, so the same combination carries `ψ′_n*` and the
/// imaginary part enters with the opposite sign. The unknown global factor
/// `Γ` is removed by normalization.
pub fn reconstruct_pure<T: Real>(
    table: &[PauliProbabilities<T>],
    nominal: &[T],
    config: Configuration,
) -> Result<PureState<T>> {
    if table.len() != nominal.len() {
        return Err(Error::DimensionMismatch {
            expected: nominal.len(),
            got: table.len(),
        });
    }
    let amps: Vec<C<T>> = table
        .iter()
        .zip(nominal)
        .map(|(p, &c)| {
            let v = p.lower_row_signal();
            let v = match config {
                Configuration::C1 => v,
                Configuration::C2 => v.conj(),
            };
            v / c
        })
        .collect();
    if amps.iter().all(|a| a.is_zero()) {
        return Err(Error::DegenerateData("all reconstructed amplitudes vanish".into()));
    }
    Ok(PureState::normalized(amps)?.with_canonical_phase())
}

/// Noiseless-estimator helper: exact probabilities for every `n`.
pub fn exact_probability_table<T: Real>(
    config: Configuration,
    psi: &PureState<T>,
    conj: &ConjugateState<T>,
) -> Result<Vec<PauliProbabilities<T>>> {
    (0..psi.dim())
        .map(|n| probe_state(config, psi, conj, n).map(|eta| pauli_probabilities(&eta)))
        .collect()
}
