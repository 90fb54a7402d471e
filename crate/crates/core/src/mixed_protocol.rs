//! Mixed-state controlled measurement: the 2×2 probe state conditional on a
//! postselection outcome, its extraction from Pauli readout, Fourier
//! reconstruction of `ρ′`, and mapping the raw estimate to a physical state.
//!
//! Both configurations are scan-free: C1 applies `U_n` and keeps every
//! conjugate-basis outcome `k`; C2 applies `U_k` built from `|𝔠′_k⟩` and keeps
//! every computational outcome `n`. Tables are indexed `(n, k)` either way.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pure_protocol::{Configuration, PauliBasis, PauliProbabilities};
use crate::scalar::{cplx, creal, root_of_unity, Real, C};
use crate::state::{ConjugateState, DensityMatrix};

/// Unnormalized probe state `Λ″(n,k)` left after one postselection outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbeConditionalMatrix<T> {
    pub m00: C<T>,
    pub m01: C<T>,
    pub m10: C<T>,
    pub m11: C<T>,
}

impl<T: Real> ProbeConditionalMatrix<T> {
    pub fn trace(&self) -> T {
        (self.m00 + self.m11).re
    }

    pub fn hermiticity_defect(&self) -> T {
        (self.m01 - self.m10.conj())
            .norm()
            .max(self.m00.im.abs())
            .max(self.m11.im.abs())
    }

    /// `⟨j|Λ″|j⟩` for the two eigenstates of `basis`.
    pub fn outcome_probabilities(&self, basis: PauliBasis) -> [T; 2] {
        basis.bras::<T>().map(|[b0, b1]| {
            let (k0, k1) = (b0.conj(), b1.conj());
            (b0 * (self.m00 * k0 + self.m01 * k1) + b1 * (self.m10 * k0 + self.m11 * k1)).re
        })
    }

    pub fn pauli_probabilities(&self) -> PauliProbabilities<T> {
        let mut p = PauliProbabilities::default();
        for basis in PauliBasis::ALL {
            p.set_pair(basis, self.outcome_probabilities(basis));
        }
        p
    }
}

fn check_indices<T: Real>(rho: &DensityMatrix<T>, c: &ConjugateState<T>, n: usize) -> Result<()> {
    if c.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: c.dim(),
        });
    }
    if n >= rho.dim() {
        return Err(Error::IndexOutOfRange {
            index: n,
            dim: rho.dim(),
        });
    }
    Ok(())
}

/// C1: `Λ″(n,k) = ⟨𝔠′_k| U_n (ρ ⊗ |+⟩⟨+|) U_n† |𝔠′_k⟩`.
pub fn probe_conditional_c1<T: Real>(
    rho: &DensityMatrix<T>,
    n: usize,
    post: &ConjugateState<T>,
) -> Result<ProbeConditionalMatrix<T>> {
    check_indices(rho, post, n)?;
    let c = post.coeffs();
    let half = creal(T::lit(0.5));
    let full = rho.matrix().sandwich(c, c);
    // ⟨𝔠|n⟩⟨n|ρ|𝔠⟩ and ⟨𝔠|ρ|n⟩⟨n|𝔠⟩
    let row_n: C<T> = (0..rho.dim()).fold(C::zero(), |acc, m| acc + rho.get(n, m) * c[m]);
    let col_n: C<T> = (0..rho.dim()).fold(C::zero(), |acc, m| acc + c[m].conj() * rho.get(m, n));
    let cn = c[n];
    let nn = rho.get(n, n) * cn.norm_sqr();
    let lower = cn.conj() * row_n;
    let upper = col_n * cn;
    Ok(ProbeConditionalMatrix {
        m00: (full - lower - upper + nn) * half,
        m01: (upper - nn) * half,
        m10: (lower - nn) * half,
        m11: nn * half,
    })
}

/// C2: `Λ″(n,k) = ⟨n| U_k (ρ ⊗ |+⟩⟨+|) U_k† |n⟩` with `U_k` built on `|𝔠′_k⟩`.
pub fn probe_conditional_c2<T: Real>(
    rho: &DensityMatrix<T>,
    inter: &ConjugateState<T>,
    n: usize,
) -> Result<ProbeConditionalMatrix<T>> {
    check_indices(rho, inter, n)?;
    let c = inter.coeffs();
    let half = creal(T::lit(0.5));
    let g = rho.matrix().sandwich(c, c);
    let cn = c[n];
    // ⟨n|ρ|𝔠⟩ and ⟨𝔠|ρ|n⟩
    let r: C<T> = (0..rho.dim()).fold(C::zero(), |acc, m| acc + rho.get(n, m) * c[m]);
    let s: C<T> = (0..rho.dim()).fold(C::zero(), |acc, m| acc + c[m].conj() * rho.get(m, n));
    let qq = g * cn.norm_sqr();
    let right = r * cn.conj();
    let left = cn * s;
    Ok(ProbeConditionalMatrix {
        m00: (rho.get(n, n) - right - left + qq) * half,
        m01: (right - qq) * half,
        m10: (left - qq) * half,
        m11: qq * half,
    })
}

/// `Λ″(n,k)` for either configuration; `conj` is `|𝔠′_k⟩` (postselection
/// in C1, interaction in C2).
pub fn probe_conditional<T: Real>(
    config: Configuration,
    rho: &DensityMatrix<T>,
    n: usize,
    conj: &ConjugateState<T>,
) -> Result<ProbeConditionalMatrix<T>> {
    match config {
        Configuration::C1 => probe_conditional_c1(rho, n, conj),
        Configuration::C2 => probe_conditional_c2(rho, conj, n),
    }
}

/// The part of `Λ″(n,k)` a reconstruction consumes: `Λ″₁₀` (C1) or `Λ″₀₁`
/// (C2), plus `Λ″₁₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaEntry<T> {
    pub off_diag: C<T>,
    pub m11: T,
}

/// C1: `Λ″₁₀ = ½[(P₊−P₋) + i(P_L−P_R)]`; C2: `Λ″₀₁ = ½[(P₊−P₋) − i(P_L−P_R)]`.
/// `Λ″₁₁ = P₁` in both.
pub fn lambda_from_pauli<T: Real>(probs: &PauliProbabilities<T>, config: Configuration) -> LambdaEntry<T> {
    let half = T::lit(0.5);
    let re = (probs.p_plus - probs.p_minus) * half;
    let im = (probs.p_l - probs.p_r) * half;
    let off_diag = match config {
        Configuration::C1 => cplx(re, im),
        Configuration::C2 => cplx(re, -im),
    };
    LambdaEntry {
        off_diag,
        m11: probs.p1,
    }
}

/// `d × d` table of [`LambdaEntry`] indexed by `(n, k)`.
#[derive(Debug, Clone)]
pub struct LambdaTable<T> {
    dim: usize,
    entries: Vec<Option<LambdaEntry<T>>>,
}

impl<T: Real> LambdaTable<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![None; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn set(&mut self, n: usize, k: usize, entry: LambdaEntry<T>) {
        self.entries[n * self.dim + k] = Some(entry);
    }

    pub fn get(&self, n: usize, k: usize) -> Option<&LambdaEntry<T>> {
        self.entries[n * self.dim + k].as_ref()
    }

    pub fn is_complete(&self) -> bool {
        self.entries.iter().all(Option::is_some)
    }

    fn entry(&self, n: usize, k: usize) -> Result<&LambdaEntry<T>> {
        self.get(n, k)
            .ok_or_else(|| Error::DegenerateData(format!("lambda table missing entry (n={n}, k={k})")))
    }
}

/// Reconstructed matrix before physicalization; arbitrary scale, not
/// necessarily Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct RawReconstruction<T> {
    pub elems: CMatrix<T>,
}

impl<T: Real> RawReconstruction<T> {
    pub fn dim(&self) -> usize {
        self.elems.dim()
    }

    /// Rescales to unit trace without squaring; diagnostic only.
    pub fn trace_normalized(&self) -> Result<CMatrix<T>> {
        let tr = self.elems.trace();
        if tr.norm() == T::zero() {
            return Err(Error::DegenerateData("raw reconstruction has zero trace".into()));
        }
        Ok(self.elems.scale(tr.inv()))
    }
}

fn check_table<T: Real>(table: &LambdaTable<T>, nominal: &[T]) -> Result<()> {
    if nominal.len() != table.dim {
        return Err(Error::DimensionMismatch {
            expected: table.dim,
            got: nominal.len(),
        });
    }
    if !table.is_complete() {
        return Err(Error::DegenerateData("lambda table incomplete".into()));
    }
    Ok(())
}

/// `ρ′_{nm} ∝ [d δ_{nm} ⟨Λ″₁₁(n,·)⟩_k + Σ_k e^{i2π(n−m)k/d} Λ″₁₀(n,k)] / (c̄_n c̄_m)`.
///
/// `Λ″₁₁(n,k)` does not depend on `k` in exact arithmetic; the diagonal term
/// uses its average over `k`.
pub fn reconstruct_mixed_c1<T: Real>(table: &LambdaTable<T>, nominal: &[T]) -> Result<RawReconstruction<T>> {
    check_table(table, nominal)?;
    let d = table.dim;
    let dt = T::from_usize_lossy(d);
    let mut out = CMatrix::zeros(d);
    for n in 0..d {
        let mut diag_avg = T::zero();
        for k in 0..d {
            diag_avg = diag_avg + table.entry(n, k)?.m11;
        }
        diag_avg = diag_avg / dt;
        for m in 0..d {
            let mut acc = C::zero();
            for k in 0..d {
                let phase = root_of_unity::<T>(((n as i64) - (m as i64)) * k as i64, d);
                acc = acc + phase * table.entry(n, k)?.off_diag;
            }
            if n == m {
                acc = acc + creal(dt * diag_avg);
            }
            out[(n, m)] = acc / (nominal[n] * nominal[m]);
        }
    }
    Ok(RawReconstruction { elems: out })
}

/// `ρ′_{nm} ∝ Σ_k e^{i2πk(n−m)/d} [Λ″₀₁(n,k) + Λ″₁₁(n,k)] / (c̄_n c̄_m)`.
pub fn reconstruct_mixed_c2<T: Real>(table: &LambdaTable<T>, nominal: &[T]) -> Result<RawReconstruction<T>> {
    check_table(table, nominal)?;
    let d = table.dim;
    let mut out = CMatrix::zeros(d);
    for n in 0..d {
        for m in 0..d {
            let mut acc = C::zero();
            for k in 0..d {
                let e = table.entry(n, k)?;
                let phase = root_of_unity::<T>(((n as i64) - (m as i64)) * k as i64, d);
                acc = acc + phase * (e.off_diag + creal(e.m11));
            }
            out[(n, m)] = acc / (nominal[n] * nominal[m]);
        }
    }
    Ok(RawReconstruction { elems: out })
}

pub fn reconstruct_mixed<T: Real>(
    config: Configuration,
    table: &LambdaTable<T>,
    nominal: &[T],
) -> Result<RawReconstruction<T>> {
    match config {
        Configuration::C1 => reconstruct_mixed_c1(table, nominal),
        Configuration::C2 => reconstruct_mixed_c2(table, nominal),
    }
}

/// `ρ̃ = ρ′†ρ′ / Tr(ρ′†ρ′)`.
///
/// Note this squares the spectrum of a Hermitian input: a valid mixed `ρ`
/// comes back as `ρ²/Tr ρ²`. Pure projectors are fixed points.
pub fn physicalize<T: Real>(raw: &RawReconstruction<T>) -> Result<DensityMatrix<T>> {
    let gram = &raw.elems.adjoint() * &raw.elems;
    let tr = gram.trace().re;
    if !(tr > T::zero()) || !tr.is_finite() {
        return Err(Error::DegenerateData("cannot physicalize a zero matrix".into()));
    }
    let mut out = gram.scale_real(tr.recip());
    // Exact Hermiticity; the Gram product is only Hermitian up to rounding.
    let d = out.dim();
    for i in 0..d {
        out[(i, i)] = creal(out[(i, i)].re);
        for j in i + 1..d {
            let avg = (out[(i, j)] + out[(j, i)].conj()) * creal(T::lit(0.5));
            out[(i, j)] = avg;
            out[(j, i)] = avg.conj();
        }
    }
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// Noiseless-estimator helper: the exact `(n, k)` table for a state.
pub fn exact_lambda_table<T: Real>(
    config: Configuration,
    rho: &DensityMatrix<T>,
    conj_states: &[ConjugateState<T>],
) -> Result<LambdaTable<T>> {
    let d = rho.dim();
    let mut table = LambdaTable::new(d);
    for n in 0..d {
        for (k, c) in conj_states.iter().enumerate() {
            let lam = probe_conditional(config, rho, n, c)?;
            table.set(n, k, lambda_from_pauli(&lam.pauli_probabilities(), config));
        }
    }
    Ok(table)
}

/// `|𝔠′_k⟩` for every `k` sharing one set of detector biases.
pub fn conjugate_family<T: Real>(dim: usize, kappas: &[T]) -> Result<Vec<ConjugateState<T>>> {
    (0..dim).map(|k| ConjugateState::new(dim, k, kappas)).collect()
}

/// Sum of `⟨𝔠′_k|·|𝔠′_k⟩` over `k`: `diag(d 𝔠_m²)`, identity only when noiseless.
pub fn conjugate_family_gram_diagonal<T: Real>(family: &[ConjugateState<T>]) -> Vec<T> {
    let d = family.first().map_or(0, ConjugateState::dim);
    (0..d)
        .map(|m| family.iter().fold(T::zero(), |acc, c| acc + c.coeffs()[m].norm_sqr()))
        .collect()
}
