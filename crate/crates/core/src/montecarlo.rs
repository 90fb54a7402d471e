//! Finite-copy simulation of the measurement protocols.
//!
//! Each repetition draws fresh SPAM noise, turns the exact physics into one
//! outcome distribution per measurement setting, samples the allotted copies
//! by inverse CDF, and feeds the observed frequencies through the same
//! reconstruction used analytically. Every prepared copy counts against the
//! budget whether or not its postselection succeeds.
//!
//! Random streams are derived from `(seed, repetition, purpose)`, so results
//! do not depend on how repetitions are scheduled across threads.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::metrics::{trace_distance_mixed, trace_distance_pure};
use crate::mixed_protocol::{
    conjugate_family, conjugate_family_gram_diagonal, lambda_from_pauli, physicalize, probe_conditional,
    reconstruct_mixed, LambdaTable,
};
use crate::noise::{perturb_pure_state, sample_kappas, white_noise_channel, PrepNoiseParams};
use crate::pure_protocol::{
    nominal_coefficients, probe_state, reconstruct_pure, Configuration, PauliBasis, PauliProbabilities,
};
use crate::scalar::Real;
use crate::state::{ConjugateState, DensityMatrix, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StateMode {
    Pure,
    Mixed,
}

/// One physical measurement setting: the controlled interaction (when it is
/// scanned) and the probe readout basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Setting {
    /// `n` for C1, `k` for mixed C2, `None` for pure C2 (single interaction).
    pub index: Option<usize>,
    pub basis: PauliBasis,
}

/// Pure C1 scans `n`; pure C2 needs only the three probe bases; mixed C1
/// scans `n` and mixed C2 scans `k`.
pub fn enumerate_settings(config: Configuration, mode: StateMode, dim: usize) -> Vec<Setting> {
    let scanned = !(config == Configuration::C2 && mode == StateMode::Pure);
    if scanned {
        (0..dim)
            .flat_map(|i| PauliBasis::ALL.map(|basis| Setting { index: Some(i), basis }))
            .collect()
    } else {
        PauliBasis::ALL.map(|basis| Setting { index: None, basis }).to_vec()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CopyBudget {
    pub total: u64,
    pub per_setting: Vec<u64>,
}

/// Equal split; the remainder goes one copy each to the lowest-indexed settings.
pub fn allocate_copies(total: u64, num_settings: usize) -> Result<CopyBudget> {
    if total == 0 {
        return Err(Error::Parameter("copy budget must be positive".into()));
    }
    if num_settings == 0 {
        return Err(Error::Parameter("no settings to allocate copies to".into()));
    }
    let s = num_settings as u64;
    let (base, rem) = (total / s, total % s);
    let per_setting = (0..s).map(|i| base + u64::from(i < rem)).collect();
    Ok(CopyBudget { total, per_setting })
}

/// A single-copy measurement result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    /// Postselection onto the kept outcome(s) failed.
    Fail,
    /// Postselection branch `branch` with the probe in eigenstate `eigen`
    /// (0 for `|0⟩, |+⟩, |L⟩`; 1 for `|1⟩, |−⟩, |R⟩`).
    Hit { branch: usize, eigen: u8 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SettingOutcomeDistribution<T> {
    outcomes: Vec<Outcome>,
    probs: Vec<T>,
}

impl<T: Real> SettingOutcomeDistribution<T> {
    /// Clamps tiny negative rounding residue to zero and checks completeness.
    pub fn new(outcomes: Vec<Outcome>, probs: Vec<T>) -> Result<Self> {
        assert_eq!(outcomes.len(), probs.len());
        let tol = T::tol();
        let mut clean = Vec::with_capacity(probs.len());
        for p in probs {
            if p < -tol || !p.is_finite() {
                return Err(Error::PhysicsBug(p.to_f64().unwrap_or(f64::NAN)));
            }
            clean.push(p.max(T::zero()));
        }
        let total = clean.iter().fold(T::zero(), |acc, &p| acc + p);
        if (total - T::one()).abs() > tol * T::from_usize_lossy(clean.len().max(1)) {
            return Err(Error::PhysicsBug((total - T::one()).to_f64().unwrap_or(f64::NAN)));
        }
        Ok(Self { outcomes, probs: clean })
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn prob_of(&self, outcome: Outcome) -> T {
        self.outcomes
            .iter()
            .position(|&o| o == outcome)
            .map_or(T::zero(), |i| self.probs[i])
    }
}

/// Exact physics of one repetition after its noise has been drawn.
#[derive(Debug, Clone)]
pub enum Physics<T> {
    Pure {
        /// Perturbed preparation `ψ′`.
        psi: PureState<T>,
        /// Noisy `|𝔠′₀⟩` (postselection in C1, interaction in C2).
        conj: ConjugateState<T>,
    },
    Mixed {
        /// `ρ′₀` after the preparation channel.
        rho: DensityMatrix<T>,
        /// Noisy `|𝔠′_k⟩` for every `k`, sharing one set of biases.
        family: Vec<ConjugateState<T>>,
    },
}

impl<T: Real> Physics<T> {
    pub fn mode(&self) -> StateMode {
        match self {
            Physics::Pure { .. } => StateMode::Pure,
            Physics::Mixed { .. } => StateMode::Mixed,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Physics::Pure { psi, .. } => psi.dim(),
            Physics::Mixed { rho, .. } => rho.dim(),
        }
    }
}

/// Scale applied to the mixed C1 conjugate-basis detector.
///
/// Biased conjugate states are not orthonormal: `Σ_k |𝔠′_k⟩⟨𝔠′_k| =
/// diag(d𝔠_m²)`. Scaling every element by `1/max_m(d𝔠_m²)` leaves a valid
/// measurement whose shortfall is reported as a failed detection. The factor
/// is common to all `(n, k)` and cancels in the normalized reconstruction.
pub fn detector_efficiency<T: Real>(family: &[ConjugateState<T>]) -> T {
    if family.iter().all(|c| c.kappas().iter().all(|k| k.is_zero())) {
        return T::one();
    }
    let peak = conjugate_family_gram_diagonal(family)
        .into_iter()
        .fold(T::zero(), T::max);
    peak.recip()
}

/// Ratio between physical outcome probabilities and the readout
/// probabilities `P_j` of the `|+⟩`-probe description.
///
/// The controlled operator `(I−|n⟩⟨n|)⊗|0⟩⟨0| + |n⟩⟨n|⊗|1⟩⟨1|` acting on a
/// `|+⟩` probe leaves a joint state of norm ½. The same branch structure is
/// produced unitarily by `exp(−iπ/2 |n⟩⟨n|⊗σ_y)` on a probe prepared in
/// `|0⟩`, which is `√2` times larger, so every physical probability is `2P_j`.
pub const PROBE_PROBABILITY_SCALE: f64 = 2.0;

fn hit_outcomes<T: Real>(branch: usize, pair: [T; 2], outcomes: &mut Vec<Outcome>, probs: &mut Vec<T>) {
    let scale = T::lit(PROBE_PROBABILITY_SCALE);
    for (eigen, p) in pair.into_iter().enumerate() {
        outcomes.push(Outcome::Hit {
            branch,
            eigen: eigen as u8,
        });
        probs.push(p * scale);
    }
}

fn with_fail<T: Real>(mut outcomes: Vec<Outcome>, mut probs: Vec<T>) -> Result<SettingOutcomeDistribution<T>> {
    let kept = probs.iter().fold(T::zero(), |acc, &p| acc + p);
    outcomes.insert(0, Outcome::Fail);
    probs.insert(0, T::one() - kept);
    SettingOutcomeDistribution::new(outcomes, probs)
}

/// Joint distribution of (postselection result, probe eigenvalue) for one setting.
pub fn build_outcome_distribution<T: Real>(
    config: Configuration,
    setting: Setting,
    physics: &Physics<T>,
) -> Result<SettingOutcomeDistribution<T>> {
    let d = physics.dim();
    let basis = setting.basis;
    let mut outcomes = Vec::with_capacity(2 * d + 1);
    let mut probs = Vec::with_capacity(2 * d + 1);
    let scanned_index = || {
        setting.index.filter(|&i| i < d).ok_or(Error::IndexOutOfRange {
            index: setting.index.unwrap_or(usize::MAX),
            dim: d,
        })
    };
    match (physics, config) {
        (Physics::Pure { psi, conj }, Configuration::C1) => {
            let n = scanned_index()?;
            let eta = probe_state(config, psi, conj, n)?;
            hit_outcomes(0, eta.outcome_probabilities(basis), &mut outcomes, &mut probs);
            with_fail(outcomes, probs)
        }
        (Physics::Pure { psi, conj }, Configuration::C2) => {
            for n in 0..d {
                let eta = probe_state(config, psi, conj, n)?;
                hit_outcomes(n, eta.outcome_probabilities(basis), &mut outcomes, &mut probs);
            }
            SettingOutcomeDistribution::new(outcomes, probs)
        }
        (Physics::Mixed { rho, family }, Configuration::C1) => {
            let n = scanned_index()?;
            let w = detector_efficiency(family);
            for (k, c) in family.iter().enumerate() {
                let lam = probe_conditional(config, rho, n, c)?;
                let [p0, p1] = lam.outcome_probabilities(basis);
                hit_outcomes(k, [p0 * w, p1 * w], &mut outcomes, &mut probs);
            }
            with_fail(outcomes, probs)
        }
        (Physics::Mixed { rho, family }, Configuration::C2) => {
            let k = scanned_index()?;
            for n in 0..d {
                let lam = probe_conditional(config, rho, n, &family[k])?;
                hit_outcomes(n, lam.outcome_probabilities(basis), &mut outcomes, &mut probs);
            }
            SettingOutcomeDistribution::new(outcomes, probs)
        }
    }
}

/// Multinomial draw of `count` copies by inverse CDF, one uniform per copy.
pub fn sample_counts<T: Real, R: Rng + ?Sized>(
    dist: &SettingOutcomeDistribution<T>,
    count: u64,
    rng: &mut R,
) -> Vec<u64> {
    let mut counts = vec![0u64; dist.probs.len()];
    if count == 0 {
        return counts;
    }
    let mut cdf = Vec::with_capacity(dist.probs.len());
    let mut acc = 0.0f64;
    for p in &dist.probs {
        acc += p.to_f64().expect("finite probability");
        cdf.push(acc);
    }
    let last_nonzero = dist.probs.iter().rposition(|p| *p > T::zero()).unwrap_or(0);
    for _ in 0..count {
        let u: f64 = rng.random();
        let i = cdf.partition_point(|&c| c <= u).min(last_nonzero);
        counts[i] += 1;
    }
    counts
}

/// Maps a setting and postselection branch to its `(n, k)` table cell.
fn table_cell(config: Configuration, mode: StateMode, setting: Setting, branch: usize) -> (usize, usize) {
    match (mode, config) {
        (StateMode::Pure, Configuration::C1) => (setting.index.unwrap_or(0), 0),
        (StateMode::Pure, Configuration::C2) => (branch, 0),
        (StateMode::Mixed, Configuration::C1) => (setting.index.unwrap_or(0), branch),
        (StateMode::Mixed, Configuration::C2) => (branch, setting.index.unwrap_or(0)),
    }
}

/// Observed relative frequencies for each setting, in outcome order.
#[derive(Debug, Clone)]
pub struct SettingFrequencies<'a, T> {
    pub setting: Setting,
    pub outcomes: &'a [Outcome],
    pub freqs: Vec<T>,
}

/// `P̂ = count / copies assigned to the setting`.
pub fn counts_to_frequencies<T: Real>(counts: &[u64], copies: u64) -> Vec<T> {
    if copies == 0 {
        return vec![T::zero(); counts.len()];
    }
    let denom = T::lit(copies as f64);
    counts.iter().map(|&c| T::lit(c as f64) / denom).collect()
}

/// Per-cell estimates of `P_j`, `grid[n][k]` (`k` is 0 for pure states).
/// Frequencies are divided by [`PROBE_PROBABILITY_SCALE`].
pub fn estimate_probabilities<T: Real>(
    config: Configuration,
    mode: StateMode,
    dim: usize,
    observed: &[SettingFrequencies<'_, T>],
) -> Vec<Vec<PauliProbabilities<T>>> {
    let width = if mode == StateMode::Pure { 1 } else { dim };
    let mut grid = vec![vec![PauliProbabilities::default(); width]; dim];
    let unscale = T::lit(PROBE_PROBABILITY_SCALE).recip();
    for obs in observed {
        for (&outcome, &f) in obs.outcomes.iter().zip(&obs.freqs) {
            if let Outcome::Hit { branch, eigen } = outcome {
                let (n, k) = table_cell(config, mode, obs.setting, branch);
                let mut pair = grid[n][k].pair(obs.setting.basis);
                pair[eigen as usize] = f * unscale;
                grid[n][k].set_pair(obs.setting.basis, pair);
            }
        }
    }
    grid
}

pub fn lambda_table_from_grid<T: Real>(config: Configuration, grid: &[Vec<PauliProbabilities<T>>]) -> LambdaTable<T> {
    let d = grid.len();
    let mut table = LambdaTable::new(d);
    for (n, row) in grid.iter().enumerate() {
        for (k, p) in row.iter().enumerate() {
            table.set(n, k, lambda_from_pauli(p, config));
        }
    }
    table
}

#[derive(Debug, Clone, PartialEq)]
pub enum Reconstruction<T> {
    Pure(PureState<T>),
    Mixed(DensityMatrix<T>),
}

/// Reconstruction from observed frequencies with the nominal `1/√d` coefficients.
pub fn reconstruct_from_frequencies<T: Real>(
    config: Configuration,
    mode: StateMode,
    dim: usize,
    observed: &[SettingFrequencies<'_, T>],
) -> Result<Reconstruction<T>> {
    let grid = estimate_probabilities(config, mode, dim, observed);
    let nominal = nominal_coefficients::<T>(dim);
    match mode {
        StateMode::Pure => {
            let table: Vec<_> = grid.into_iter().map(|row| row[0]).collect();
            reconstruct_pure(&table, &nominal, config).map(Reconstruction::Pure)
        }
        StateMode::Mixed => {
            let raw = reconstruct_mixed(config, &lambda_table_from_grid(config, &grid), &nominal)?;
            physicalize(&raw).map(Reconstruction::Mixed)
        }
    }
}

/// The state being characterized.
#[derive(Debug, Clone)]
pub enum Target<T> {
    Pure(PureState<T>),
    /// Ideal state `ρ₀`; the preparation applies white noise of strength `epsilon`.
    Mixed(DensityMatrix<T>),
}

impl<T: Real> Target<T> {
    pub fn dim(&self) -> usize {
        match self {
            Target::Pure(p) => p.dim(),
            Target::Mixed(r) => r.dim(),
        }
    }

    pub fn mode(&self) -> StateMode {
        match self {
            Target::Pure(_) => StateMode::Pure,
            Target::Mixed(_) => StateMode::Mixed,
        }
    }
}

/// One Monte Carlo grid point.
#[derive(Debug, Clone)]
pub struct RunSpec<T> {
    pub target: Target<T>,
    pub config: Configuration,
    /// Preparation perturbation σ (pure targets only).
    pub sigma_prep: T,
    /// Postselection bias σ.
    pub sigma_post: T,
    /// White-noise strength (mixed targets only).
    pub epsilon: T,
    pub copies: u64,
    pub repetitions: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct RepetitionResult<T> {
    pub reconstruction: Reconstruction<T>,
    pub distance: T,
}

#[derive(Debug, Clone)]
pub struct RunResult<T> {
    pub repetitions: Vec<RepetitionResult<T>>,
    pub mean_distance: T,
    /// Sample standard deviation over `sqrt(repetitions)`; zero for one repetition.
    pub std_error: T,
}

const STREAM_PREP: u64 = 0;
const STREAM_POST: u64 = 1;
const STREAM_SAMPLING: u64 = 2;

/// Deterministic per-repetition stream.
pub fn repetition_rng(seed: u64, repetition: u64, purpose: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(repetition.wrapping_mul(4).wrapping_add(purpose));
    rng
}

/// Draws the SPAM noise for one repetition.
pub fn draw_physics<T: Real>(spec: &RunSpec<T>, repetition: u64) -> Result<Physics<T>> {
    let d = spec.target.dim();
    let kappas = sample_kappas(
        d,
        spec.sigma_post,
        &mut repetition_rng(spec.seed, repetition, STREAM_POST),
    );
    match &spec.target {
        Target::Pure(psi) => {
            let params = PrepNoiseParams::new(spec.sigma_prep)?;
            let prep = perturb_pure_state(psi, params, &mut repetition_rng(spec.seed, repetition, STREAM_PREP))?;
            Ok(Physics::Pure {
                psi: prep.state,
                conj: ConjugateState::new(d, 0, &kappas)?,
            })
        }
        Target::Mixed(rho0) => Ok(Physics::Mixed {
            rho: white_noise_channel(rho0, spec.epsilon)?,
            family: conjugate_family(d, &kappas)?,
        }),
    }
}

/// Samples every setting of one repetition and reconstructs.
pub fn simulate_repetition<T: Real>(spec: &RunSpec<T>, repetition: u64) -> Result<RepetitionResult<T>> {
    let physics = draw_physics(spec, repetition)?;
    let mode = physics.mode();
    let d = physics.dim();
    let settings = enumerate_settings(spec.config, mode, d);
    let budget = allocate_copies(spec.copies, settings.len())?;
    let mut rng = repetition_rng(spec.seed, repetition, STREAM_SAMPLING);
    let dists = settings
        .iter()
        .map(|&s| build_outcome_distribution(spec.config, s, &physics))
        .collect::<Result<Vec<_>>>()?;
    let observed: Vec<SettingFrequencies<'_, T>> = settings
        .iter()
        .zip(&dists)
        .zip(&budget.per_setting)
        .map(|((&setting, dist), &copies)| SettingFrequencies {
            setting,
            outcomes: dist.outcomes(),
            freqs: counts_to_frequencies(&sample_counts(dist, copies, &mut rng), copies),
        })
        .collect();
    let reconstruction = reconstruct_from_frequencies(spec.config, mode, d, &observed)?;
    let distance = match (&spec.target, &reconstruction) {
        (Target::Pure(psi), Reconstruction::Pure(est)) => trace_distance_pure(psi, est)?,
        (Target::Mixed(rho), Reconstruction::Mixed(est)) => trace_distance_mixed(rho, est)?,
        _ => unreachable!("reconstruction mode follows target mode"),
    };
    Ok(RepetitionResult {
        reconstruction,
        distance,
    })
}

fn validate_spec<T: Real>(spec: &RunSpec<T>) -> Result<()> {
    if spec.repetitions == 0 {
        return Err(Error::Parameter("repetitions must be at least 1".into()));
    }
    if spec.copies == 0 {
        return Err(Error::Parameter("copy budget must be positive".into()));
    }
    match spec.target {
        Target::Pure(_) if spec.epsilon != T::zero() => {
            Err(Error::Parameter("white noise applies to mixed targets only".into()))
        }
        Target::Mixed(_) if spec.sigma_prep != T::zero() => Err(Error::Parameter(
            "amplitude perturbation applies to pure targets only".into(),
        )),
        _ => Ok(()),
    }
}

/// Runs all repetitions on the current rayon pool; output order and values
/// are independent of the pool size.
pub fn run_repetitions<T: Real>(spec: &RunSpec<T>) -> Result<RunResult<T>> {
    validate_spec(spec)?;
    let repetitions = (0..spec.repetitions as u64)
        .into_par_iter()
        .map(|r| simulate_repetition(spec, r))
        .collect::<Result<Vec<_>>>()?;
    let (mean_distance, std_error) = mean_and_std_error(repetitions.iter().map(|r| r.distance));
    Ok(RunResult {
        repetitions,
        mean_distance,
        std_error,
    })
}

pub fn mean_and_std_error<T: Real>(values: impl IntoIterator<Item = T>) -> (T, T) {
    let values: Vec<T> = values.into_iter().collect();
    let n = T::from_usize_lossy(values.len());
    let mean = values.iter().fold(T::zero(), |acc, &v| acc + v) / n;
    if values.len() < 2 {
        return (mean, T::zero());
    }
    let ss = values.iter().fold(T::zero(), |acc, &v| acc + (v - mean) * (v - mean));
    let sd = (ss / (n - T::one())).sqrt();
    (mean, sd / n.sqrt())
}
