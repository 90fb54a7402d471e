//! Brute-force reference implementations: explicit (2d)-dimensional
//! system⊗probe evolution and projection with dense nalgebra matrices.

#![allow(dead_code)]

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as Cx;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use dsm::{Configuration, ConjugateState, DensityMatrix, PauliBasis, PureState};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ket(amps: &[Cx]) -> DVector<Cx> {
    DVector::from_column_slice(amps)
}

pub fn basis_ket(dim: usize, n: usize) -> DVector<Cx> {
    let mut v = DVector::zeros(dim);
    v[n] = Cx::new(1.0, 0.0);
    v
}

pub fn density(rho: &DensityMatrix<f64>) -> DMatrix<Cx> {
    let d = rho.dim();
    DMatrix::from_fn(d, d, |i, j| rho.get(i, j))
}

fn probe_proj(p: usize) -> DMatrix<Cx> {
    let mut m = DMatrix::zeros(2, 2);
    m[(p, p)] = Cx::new(1.0, 0.0);
    m
}

/// Projector that the interaction conditions on: `|n⟩⟨n|` (C1) or
/// `|𝔠⟩⟨𝔠|` (C2).
pub fn interaction_projector(config: Configuration, conj: &ConjugateState<f64>, n: usize) -> DMatrix<Cx> {
    let d = conj.dim();
    let v = match config {
        Configuration::C1 => basis_ket(d, n),
        Configuration::C2 => ket(conj.coeffs()),
    };
    &v * v.adjoint()
}

/// `(I−P)⊗|0⟩⟨0| + P⊗|1⟩⟨1|`, system index major.
pub fn controlled_operator(p: &DMatrix<Cx>) -> DMatrix<Cx> {
    let id = DMatrix::<Cx>::identity(p.nrows(), p.nrows());
    (&id - p).kronecker(&probe_proj(0)) + p.kronecker(&probe_proj(1))
}

/// `exp(−iπ/2 P⊗σ_y) = (I−P)⊗I + P⊗(−iσ_y)`, unitary.
pub fn strong_unitary(p: &DMatrix<Cx>) -> DMatrix<Cx> {
    let d = p.nrows();
    let id = DMatrix::<Cx>::identity(d, d);
    let minus_i_sy = DMatrix::from_row_slice(
        2,
        2,
        &[
            Cx::new(0.0, 0.0),
            Cx::new(-1.0, 0.0),
            Cx::new(1.0, 0.0),
            Cx::new(0.0, 0.0),
        ],
    );
    (&id - p).kronecker(&DMatrix::identity(2, 2)) + p.kronecker(&minus_i_sy)
}

/// Postselection bra: `⟨𝔠′|` (C1) or `⟨n|` (C2).
pub fn postselection_ket(config: Configuration, conj: &ConjugateState<f64>, n: usize) -> DVector<Cx> {
    match config {
        Configuration::C1 => ket(conj.coeffs()),
        Configuration::C2 => basis_ket(conj.dim(), n),
    }
}

pub fn plus() -> DVector<Cx> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    DVector::from_column_slice(&[Cx::new(h, 0.0), Cx::new(h, 0.0)])
}

pub fn zero() -> DVector<Cx> {
    DVector::from_column_slice(&[Cx::new(1.0, 0.0), Cx::new(0.0, 0.0)])
}

/// Probe eigenkets of a Pauli basis, `+1` first.
pub fn eigenkets(basis: PauliBasis) -> [DVector<Cx>; 2] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = |a: Cx, b: Cx| DVector::from_column_slice(&[a, b]);
    let (o, i) = (Cx::new(h, 0.0), Cx::new(0.0, h));
    match basis {
        PauliBasis::Z => [
            v(Cx::new(1.0, 0.0), Cx::new(0.0, 0.0)),
            v(Cx::new(0.0, 0.0), Cx::new(1.0, 0.0)),
        ],
        PauliBasis::X => [v(o, o), v(o, -o)],
        PauliBasis::Y => [v(o, i), v(o, -i)],
    }
}

/// `(⟨post|⊗I) U |ψ⟩⊗|probe⟩`.
pub fn project_system(joint: &DVector<Cx>, post: &DVector<Cx>) -> DVector<Cx> {
    let d = post.len();
    let mut out = DVector::zeros(2);
    for m in 0..d {
        for p in 0..2 {
            out[p] += post[m].conj() * joint[2 * m + p];
        }
    }
    out
}

/// `(⟨post|⊗I) Λ (|post⟩⊗I)` for a joint operator `Λ`.
pub fn project_operator(joint: &DMatrix<Cx>, post: &DVector<Cx>) -> DMatrix<Cx> {
    let d = post.len();
    let mut out = DMatrix::zeros(2, 2);
    for m in 0..d {
        for mm in 0..d {
            let w = post[m].conj() * post[mm];
            for p in 0..2 {
                for q in 0..2 {
                    out[(p, q)] += w * joint[(2 * m + p, 2 * mm + q)];
                }
            }
        }
    }
    out
}

/// Probe state after interaction and postselection, `|+⟩` probe.
pub fn oracle_probe(config: Configuration, psi: &PureState<f64>, conj: &ConjugateState<f64>, n: usize) -> DVector<Cx> {
    let u = controlled_operator(&interaction_projector(config, conj, n));
    let joint = &u * ket(psi.amps()).kronecker(&plus());
    project_system(&joint, &postselection_ket(config, conj, n))
}

/// Probe operator after interaction and postselection, `|+⟩` probe.
pub fn oracle_probe_operator(
    config: Configuration,
    rho: &DensityMatrix<f64>,
    conj: &ConjugateState<f64>,
    n: usize,
) -> DMatrix<Cx> {
    let u = controlled_operator(&interaction_projector(config, conj, n));
    let xi = plus();
    let joint = &u * density(rho).kronecker(&(&xi * xi.adjoint())) * u.adjoint();
    project_operator(&joint, &postselection_ket(config, conj, n))
}

/// Physical outcome probabilities for the strong unitary with a `|0⟩` probe.
pub fn oracle_physical_probabilities(
    config: Configuration,
    rho: &DensityMatrix<f64>,
    inter: &ConjugateState<f64>,
    post: &ConjugateState<f64>,
    n: usize,
    basis: PauliBasis,
) -> [f64; 2] {
    let u = strong_unitary(&interaction_projector(config, inter, n));
    let z = zero();
    let joint = &u * density(rho).kronecker(&(&z * z.adjoint())) * u.adjoint();
    let op = project_operator(&joint, &postselection_ket(config, post, n));
    eigenkets(basis).map(|j| (j.adjoint() * &op * &j)[(0, 0)].re)
}

pub fn expectation(op: &DMatrix<Cx>, v: &DVector<Cx>) -> f64 {
    (v.adjoint() * op * v)[(0, 0)].re
}

/// `½ Σ|λ|` of `σ − ρ` using nalgebra's Hermitian eigensolver.
pub fn oracle_trace_distance(rho: &DMatrix<Cx>, sigma: &DMatrix<Cx>) -> f64 {
    let diff = sigma - rho;
    let herm = (&diff + diff.adjoint()) * Cx::new(0.5, 0.0);
    herm.symmetric_eigen().eigenvalues.iter().map(|e| e.abs()).sum::<f64>() * 0.5
}
