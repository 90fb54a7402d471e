//! SPAM noise: Gaussian amplitude perturbation of the prepared state, real
//! detector bias on the postselection, quantum channels on density matrices,
//! and an imperfect-Hadamard GHZ preparation circuit.

use num_traits::{One, Zero};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{cplx, creal, root_of_unity, Real, C};
use crate::state::{DensityMatrix, PureState};

/// Standard deviation of each real and imaginary perturbation component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrepNoiseParams<T> {
    sigma: T,
}

impl<T: Real> PrepNoiseParams<T> {
    pub fn new(sigma: T) -> Result<Self> {
        if !(sigma >= T::zero()) || !sigma.is_finite() {
            return Err(Error::Parameter(format!(
                "sigma must be finite and nonnegative, got {sigma}"
            )));
        }
        Ok(Self { sigma })
    }

    #[inline]
    pub fn sigma(&self) -> T {
        self.sigma
    }
}

/// A perturbed preparation together with the normalization `𝒩` it required.
#[derive(Debug, Clone, PartialEq)]
pub struct Perturbed<T> {
    pub state: PureState<T>,
    pub norm_const: T,
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R, sigma: T) -> T {
    let z: f64 = rng.sample(StandardNormal);
    T::lit(z) * sigma
}

/// `ψ′ = (ψ + δ)/𝒩` with `δ_n = x₁ + i x₂`, `x₁, x₂ ~ Normal(0, σ²)` i.i.d.
///
/// At `σ = 0` no random numbers are drawn and `ψ` is returned bit-for-bit.
pub fn perturb_pure_state<T: Real, R: Rng + ?Sized>(
    psi: &PureState<T>,
    params: PrepNoiseParams<T>,
    rng: &mut R,
) -> Result<Perturbed<T>> {
    if params.sigma == T::zero() {
        return Ok(Perturbed {
            state: psi.clone(),
            norm_const: T::one(),
        });
    }
    for _attempt in 0..2 {
        let amps: Vec<C<T>> = psi
            .amps()
            .iter()
            .map(|&a| a + cplx(gaussian(rng, params.sigma), gaussian(rng, params.sigma)))
            .collect();
        match PureState::normalized_with_norm(amps) {
            Ok((state, norm_const)) => return Ok(Perturbed { state, norm_const }),
            Err(Error::DegenerateData(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::DegenerateData("perturbed state vanished twice".into()))
}

/// Real-valued variant used for the Fisher-information analysis: returns the
/// realized `δ_n ~ Normal(0, σ²)`.
pub fn sample_real_deltas<T: Real, R: Rng + ?Sized>(dim: usize, sigma: T, rng: &mut R) -> Vec<T> {
    sample_kappas(dim, sigma, rng)
}

/// Detector bias `κ_m ~ Normal(0, σ²)`, real, i.i.d.
pub fn sample_kappas<T: Real, R: Rng + ?Sized>(dim: usize, sigma: T, rng: &mut R) -> Vec<T> {
    if sigma == T::zero() {
        return vec![T::zero(); dim];
    }
    (0..dim).map(|_| gaussian(rng, sigma)).collect()
}

/// `(1−ε)ρ + ε I/d`
pub fn white_noise_channel<T: Real>(rho: &DensityMatrix<T>, epsilon: T) -> Result<DensityMatrix<T>> {
    if !(epsilon >= T::zero() && epsilon <= T::one()) {
        return Err(Error::Parameter(format!("epsilon {epsilon} outside [0, 1]")));
    }
    let d = rho.dim();
    let mixed = CMatrix::identity(d).scale_real(epsilon / T::from_usize_lossy(d));
    let out = &rho.matrix().scale_real(T::one() - epsilon) + &mixed;
    Ok(DensityMatrix::from_matrix_unchecked(out))
}

/// Operation elements `E_k` of a trace-preserving channel.
#[derive(Debug, Clone)]
pub struct KrausChannel<T> {
    ops: Vec<CMatrix<T>>,
}

impl<T: Real> KrausChannel<T> {
    /// Checks `Σ_k E_k†E_k = I` within `PSD_TOL`.
    pub fn new(ops: Vec<CMatrix<T>>) -> Result<Self> {
        let Some(first) = ops.first() else {
            return Err(Error::Parameter("empty Kraus set".into()));
        };
        let d = first.dim();
        let mut sum = CMatrix::zeros(d);
        for op in &ops {
            if op.dim() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: op.dim(),
                });
            }
            sum = &sum + &(&op.adjoint() * op);
        }
        let defect = sum.max_abs_diff(&CMatrix::identity(d));
        if defect > T::psd_tol() {
            return Err(Error::Channel(defect.to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { ops })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            ops: vec![CMatrix::identity(dim)],
        }
    }

    /// Kraus decomposition of the white-noise channel over the Weyl
    /// (clock-and-shift) operators: `I/d = d⁻² Σ_{a,b} W_ab ρ W_ab†`.
    pub fn depolarizing(dim: usize, epsilon: T) -> Result<Self> {
        if !(epsilon >= T::zero() && epsilon <= T::one()) {
            return Err(Error::Parameter(format!("epsilon {epsilon} outside [0, 1]")));
        }
        let d = T::from_usize_lossy(dim);
        let mut ops = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                let weight = if a == 0 && b == 0 {
                    (T::one() - epsilon + epsilon / (d * d)).sqrt()
                } else {
                    epsilon.sqrt() / d
                };
                // W_ab |j⟩ = ω^{bj} |j + a⟩
                let w = CMatrix::from_fn(dim, |row, col| {
                    if row == (col + a) % dim {
                        root_of_unity::<T>((b * col) as i64, dim) * weight
                    } else {
                        C::zero()
                    }
                });
                ops.push(w);
            }
        }
        Self::new(ops)
    }

    pub fn ops(&self) -> &[CMatrix<T>] {
        &self.ops
    }

    pub fn dim(&self) -> usize {
        self.ops[0].dim()
    }
}

/// `Σ_k E_k ρ E_k†`
pub fn apply_kraus_channel<T: Real>(rho: &DensityMatrix<T>, ch: &KrausChannel<T>) -> Result<DensityMatrix<T>> {
    if ch.dim() != rho.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            got: ch.dim(),
        });
    }
    let mut out = CMatrix::zeros(rho.dim());
    for e in &ch.ops {
        out = &out + &(&(e * rho.matrix()) * &e.adjoint());
    }
    DensityMatrix::new(out)
}

/// Rotation-angle deviations of an imperfect Hadamard.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateAngles<T> {
    pub alpha: T,
    pub beta: T,
}

impl<T: Real> GateAngles<T> {
    pub fn new(alpha: T) -> Self {
        Self { alpha, beta: T::zero() }
    }

    /// `a = cos(α/2) − sin(α/2)`
    pub fn a(&self) -> T {
        let h = self.alpha / T::lit(2.0);
        h.cos() - h.sin()
    }

    /// `b = cos(α/2) + sin(α/2)`
    pub fn b(&self) -> T {
        let h = self.alpha / T::lit(2.0);
        h.cos() + h.sin()
    }
}

type Gate2<T> = [[C<T>; 2]; 2];

fn ry<T: Real>(theta: T) -> Gate2<T> {
    let (s, c) = (theta / T::lit(2.0)).sin_cos();
    [[creal(c), creal(-s)], [creal(s), creal(c)]]
}

fn rz<T: Real>(theta: T) -> Gate2<T> {
    let h = theta / T::lit(2.0);
    [
        [C::from_polar(T::one(), -h), C::zero()],
        [C::zero(), C::from_polar(T::one(), h)],
    ]
}

fn matmul2<T: Real>(x: &Gate2<T>, y: &Gate2<T>) -> Gate2<T> {
    let mut out = [[C::zero(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    out
}

/// `H′ = i · R_y(π/2 + α) · R_z(π + β)`; exactly `H` at zero deviation.
pub fn imperfect_hadamard<T: Real>(angles: GateAngles<T>) -> [[C<T>; 2]; 2] {
    let g = matmul2(&ry(T::FRAC_PI_2() + angles.alpha), &rz(T::PI() + angles.beta));
    let i = C::<T>::i();
    [[i * g[0][0], i * g[0][1]], [i * g[1][0], i * g[1][1]]]
}

fn bit_mask(num_qubits: u32, qubit: u32) -> usize {
    1 << (num_qubits - 1 - qubit)
}

fn apply_single_qubit<T: Real>(amps: &mut [C<T>], num_qubits: u32, qubit: u32, gate: &Gate2<T>) {
    let mask = bit_mask(num_qubits, qubit);
    for i in 0..amps.len() {
        if i & mask == 0 {
            let j = i | mask;
            let (a0, a1) = (amps[i], amps[j]);
            amps[i] = gate[0][0] * a0 + gate[0][1] * a1;
            amps[j] = gate[1][0] * a0 + gate[1][1] * a1;
        }
    }
}

fn apply_cnot<T>(amps: &mut [C<T>], num_qubits: u32, control: u32, target: u32) {
    let cm = bit_mask(num_qubits, control);
    let tm = bit_mask(num_qubits, target);
    for i in 0..amps.len() {
        if i & cm != 0 && i & tm == 0 {
            amps.swap(i, i | tm);
        }
    }
}

/// Runs `|000⟩ → H′(q₀) → CNOT(q₀,q₁) → CNOT(q₀,q₂)` on a three-qubit register.
pub fn noisy_ghz_circuit_with<T: Real>(angles: GateAngles<T>) -> PureState<T> {
    let mut amps = vec![C::zero(); 8];
    amps[0] = C::one();
    apply_single_qubit(&mut amps, 3, 0, &imperfect_hadamard(angles));
    apply_cnot(&mut amps, 3, 0, 1);
    apply_cnot(&mut amps, 3, 0, 2);
    PureState::from_amps_unchecked(amps)
}

/// GHZ₃ preparation with a Y-rotation error `α` in the Hadamard.
pub fn noisy_ghz_circuit<T: Real>(alpha: T) -> PureState<T> {
    noisy_ghz_circuit_with(GateAngles::new(alpha))
}
