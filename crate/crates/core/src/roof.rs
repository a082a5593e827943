//! Convex-roof extensions of concurrence and negativity to mixed states.
//!
//! The roof value min Σ p_i·M(ψ_i) is searched over ensemble decompositions
//! of ρ. Decompositions are parametrized by isometries: if ρ = Σ λ_i|e_i⟩⟨e_i|
//! with rank r, every size-L decomposition arises from an L×r isometry U via
//! the unnormalized members |φ_j⟩ = Σ_i conj(U_ji)·√λ_i·|e_i⟩. The search
//! perturbs a base matrix by a real parameter vector, orthonormalizes, and
//! refines the parameters by derivative-free coordinate descent with
//! quadratic fits, restarted from independent seeded starting points.

use crate::error::{Error, Result};
use crate::linalg::{self, jacobi_eigenvalues_in_place, Complex64, ComplexMatrix};
use crate::measures::{concurrence_pure, negativity_schmidt};
use crate::rng::{derive_seed, SplitMix64};
use crate::states::{schmidt_decompose, BipartiteDims, DensityMatrix, PureState, STATE_TOL};

/// Eigenvalues above this count toward the rank of ρ.
const RANK_TOL: f64 = 1e-10;

/// Ensemble members below this weight are dropped (they cannot be
/// normalized and contribute nothing to the average).
const WEIGHT_FLOOR: f64 = 1e-14;

/// Pure-state measure to extend by the convex roof.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RoofMeasure {
    Concurrence,
    Negativity,
}

/// A probabilistic decomposition ρ = Σ p_i |ψ_i⟩⟨ψ_i|.
#[derive(Debug, Clone, PartialEq)]
pub struct Ensemble {
    members: Vec<(f64, PureState)>,
}

impl Ensemble {
    pub fn members(&self) -> &[(f64, PureState)] {
        &self.members
    }

    /// Max-norm distance between Σ p_i|ψ_i⟩⟨ψ_i| and the given matrix.
    pub fn reconstruction_error(&self, rho: &DensityMatrix) -> f64 {
        let total = rho.dims().total();
        let mut acc = ComplexMatrix::zeros(total, total);
        for (p, psi) in &self.members {
            let amps = psi.amplitudes();
            for a in 0..total {
                for b in 0..total {
                    let v = acc.get(a, b) + (amps[a] * amps[b].conj()).scale(*p);
                    acc.set(a, b, v);
                }
            }
        }
        acc.max_abs_diff(rho.matrix()).expect("same shape")
    }

    /// Average Σ p_i·M(ψ_i) of a pure-state measure over the ensemble.
    pub fn average(&self, measure: RoofMeasure) -> Result<f64> {
        let mut value = 0.0;
        for (p, psi) in &self.members {
            value += p * pure_measure(psi, measure)?;
        }
        Ok(value)
    }
}

/// Result of a convex-roof minimization.
#[derive(Debug, Clone)]
pub struct RoofResult {
    /// Minimum found: Σ p_i·M(ψ_i) for `ensemble`.
    pub value: f64,
    pub ensemble: Ensemble,
    pub restarts_used: usize,
    /// True when the best restart's step size shrank below the configured
    /// tolerance (or the value hit the zero floor) before the iteration cap.
    pub converged: bool,
}

/// Search configuration for [`convex_roof`].
#[derive(Debug, Clone)]
pub struct OptimizerConfig {
    /// Decomposition size L; None means the 2·rank default.
    pub ensemble_size: Option<usize>,
    /// Independent seeded starting points.
    pub restarts: usize,
    /// Cap on coordinate-descent sweeps per restart.
    pub max_iterations: usize,
    /// Search terminates when the probe step shrinks below this.
    pub step_tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            restarts: 16,
            max_iterations: 500,
            step_tolerance: 1e-8,
            seed: 0,
        }
    }
}

fn pure_measure(psi: &PureState, measure: RoofMeasure) -> Result<f64> {
    match measure {
        RoofMeasure::Concurrence => Ok(concurrence_pure(psi)),
        RoofMeasure::Negativity => negativity_schmidt(&schmidt_decompose(psi)?),
    }
}

/// Spectral data of ρ restricted to its numerical range: scaled eigenvectors
/// w_i = √λ_i·e_i for λ_i > RANK_TOL.
fn scaled_eigenvectors(rho: &DensityMatrix) -> Result<Vec<Vec<Complex64>>> {
    let (evals, vecs) = linalg::hermitian_eigensystem(rho.matrix(), STATE_TOL)?;
    let mut w = Vec::new();
    for (i, &l) in evals.iter().enumerate() {
        if l > RANK_TOL {
            let s = l.sqrt();
            w.push(vecs.column(i).iter().map(|z| z.scale(s)).collect());
        }
    }
    Ok(w)
}

/// Expand an L×r isometry into the ensemble it induces on ρ.
///
/// Member j has unnormalized vector Σ_i conj(U_ji)·√λ_i·|e_i⟩ and weight
/// equal to its squared norm. The isometry's column count must match the
/// numerical rank of ρ and its columns must be orthonormal within 1e−9.
pub fn ensemble_from_isometry(rho: &DensityMatrix, isometry: &ComplexMatrix) -> Result<Ensemble> {
    let w = scaled_eigenvectors(rho)?;
    let rank = w.len();
    if isometry.cols() != rank || isometry.rows() < rank {
        return Err(Error::Argument(format!(
            "isometry must be L×{rank} with L ≥ {rank} for this state, got {}x{}",
            isometry.rows(),
            isometry.cols()
        )));
    }
    let gram = isometry.adjoint().matmul(isometry)?;
    let dev = gram
        .max_abs_diff(&ComplexMatrix::identity(rank))
        .expect("same shape");
    if dev > 1e-9 {
        return Err(Error::Argument(format!(
            "matrix is not an isometry: ‖U†U − I‖_max = {dev:.3e}"
        )));
    }
    let total = rho.dims().total();
    let mut members = Vec::with_capacity(isometry.rows());
    for j in 0..isometry.rows() {
        let mut phi = vec![Complex64::new(0.0, 0.0); total];
        for (i, wi) in w.iter().enumerate() {
            let coeff = isometry.get(j, i).conj();
            for t in 0..total {
                phi[t] += coeff * wi[t];
            }
        }
        let weight: f64 = phi.iter().map(|z| z.norm_sqr()).sum();
        if weight < WEIGHT_FLOOR {
            continue;
        }
        let inv = 1.0 / weight.sqrt();
        let psi = PureState::new(rho.dims(), phi.iter().map(|z| z.scale(inv)).collect())?;
        members.push((weight, psi));
    }
    Ok(Ensemble { members })
}

/// Exact two-qubit concurrence of a mixed state (Wootters closed form):
/// max(0, λ₁−λ₂−λ₃−λ₄) with λ_i the decreasing square roots of the
/// eigenvalues of ρ·(σ_y⊗σ_y)·ρ*·(σ_y⊗σ_y), computed here through the
/// Hermitian matrix √ρ·ρ̃·√ρ.
pub fn wootters_concurrence_mixed(rho: &DensityMatrix) -> Result<f64> {
    let dims = rho.dims();
    if dims.m() != 2 || dims.n() != 2 {
        return Err(Error::Dimension(format!(
            "Wootters concurrence is defined on 2x2 only, got {}x{}",
            dims.m(),
            dims.n()
        )));
    }
    let sigma_y = ComplexMatrix::new(
        2,
        2,
        vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0),
            Complex64::new(0.0, 0.0),
        ],
    )
    .expect("static shape");
    let flip = sigma_y.kron(&sigma_y);
    let rho_tilde = flip.matmul(&rho.matrix().conjugate())?.matmul(&flip)?;

    let (evals, vecs) = linalg::hermitian_eigensystem(rho.matrix(), STATE_TOL)?;
    let roots: Vec<f64> = evals.iter().map(|&l| l.max(0.0).sqrt()).collect();
    let sqrt_rho = vecs
        .matmul(&ComplexMatrix::from_real_diagonal(&roots))?
        .matmul(&vecs.adjoint())?;

    let z = sqrt_rho.matmul(&rho_tilde)?.matmul(&sqrt_rho)?;
    // z is Hermitian PSD up to rounding; pass a loose tolerance and let the
    // eigensolver symmetrize.
    let mu = linalg::hermitian_eigenvalues(&z, 1e-8)?;
    let lambda: Vec<f64> = mu.iter().map(|&m| m.max(0.0).sqrt()).collect();
    Ok((lambda[0] - lambda[1] - lambda[2] - lambda[3]).max(0.0))
}

/// Convex-roof extension of the chosen measure by derivative-free search
/// over decompositions. See the module docs for the parametrization.
pub fn convex_roof(
    rho: &DensityMatrix,
    measure: RoofMeasure,
    config: &OptimizerConfig,
) -> Result<RoofResult> {
    if rho.dims().d() < 2 {
        return Err(Error::UndefinedMeasure(
            "convex roof requires min(m, n) ≥ 2".into(),
        ));
    }
    let w = scaled_eigenvectors(rho)?;
    let rank = w.len();

    if rank == 1 {
        // Pure state: the only decomposition is the state itself.
        let norm: f64 = w[0].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let inv = 1.0 / norm;
        let psi = PureState::new(rho.dims(), w[0].iter().map(|z| z.scale(inv)).collect())?;
        let value = pure_measure(&psi, measure)?;
        return Ok(RoofResult {
            value,
            ensemble: Ensemble {
                members: vec![(1.0, psi)],
            },
            restarts_used: 0,
            converged: true,
        });
    }

    let ensemble_size = config.ensemble_size.unwrap_or(2 * rank);
    if ensemble_size < rank {
        return Err(Error::Argument(format!(
            "ensemble size {ensemble_size} is below the state rank {rank}"
        )));
    }
    if config.restarts == 0 {
        return Err(Error::Argument("restarts must be at least 1".into()));
    }

    let mut problem = RoofProblem::new(rho.dims(), w, ensemble_size, measure);
    let mut best: Option<(f64, Vec<Vec<Complex64>>, bool)> = None;
    let mut restarts_used = 0;

    for restart in 0..config.restarts {
        restarts_used = restart + 1;
        let base = if restart == 0 {
            identity_base(ensemble_size, rank)
        } else {
            random_base(
                ensemble_size,
                rank,
                derive_seed(config.seed, restart as u64),
            )
        };
        let outcome = staged_search(&mut problem, base, config);
        let better = best.as_ref().is_none_or(|(bv, _, _)| outcome.value < *bv);
        if better {
            best = Some((outcome.value, outcome.isometry_cols, outcome.converged));
        }
        if best.as_ref().is_some_and(|(bv, _, _)| *bv < 1e-12) {
            break; // the roof cannot go below zero
        }
    }

    let (_, cols, converged) = best.expect("at least one restart ran");
    let isometry = ComplexMatrix::from_fn(ensemble_size, rank, |j, i| cols[i][j]);
    let ensemble = ensemble_from_isometry(rho, &isometry)?;
    let value = ensemble.average(measure)?;
    Ok(RoofResult {
        value,
        ensemble,
        restarts_used,
        converged,
    })
}

/// [I_r; 0] column set: reproduces the eigendecomposition ensemble at θ = 0,
/// which guarantees the search result never exceeds that ensemble's average.
fn identity_base(rows: usize, cols: usize) -> Vec<Vec<Complex64>> {
    (0..cols)
        .map(|i| {
            let mut col = vec![Complex64::new(0.0, 0.0); rows];
            col[i] = Complex64::new(1.0, 0.0);
            col
        })
        .collect()
}

fn random_base(rows: usize, cols: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = SplitMix64::new(seed);
    (0..cols)
        .map(|_| (0..rows).map(|_| rng.complex_normal()).collect())
        .collect()
}

/// Shared evaluation state: the scaled eigenvectors of ρ plus scratch
/// buffers, so one objective evaluation allocates nothing.
struct RoofProblem {
    m: usize,
    n: usize,
    /// Smaller subsystem dimension (Schmidt bound).
    g: usize,
    total: usize,
    rank: usize,
    ensemble_size: usize,
    measure: RoofMeasure,
    w: Vec<Vec<Complex64>>,
    member: Vec<Complex64>,
    gram: Vec<Complex64>,
    gram_scratch: Vec<Complex64>,
    evals: Vec<f64>,
    cand: Vec<Vec<Complex64>>,
}

struct SearchOutcome {
    value: f64,
    isometry_cols: Vec<Vec<Complex64>>,
    converged: bool,
}

impl RoofProblem {
    fn new(
        dims: BipartiteDims,
        w: Vec<Vec<Complex64>>,
        ensemble_size: usize,
        measure: RoofMeasure,
    ) -> Self {
        let (m, n) = (dims.m(), dims.n());
        let g = m.min(n);
        let rank = w.len();
        Self {
            m,
            n,
            g,
            total: m * n,
            rank,
            ensemble_size,
            measure,
            w,
            member: vec![Complex64::new(0.0, 0.0); m * n],
            gram: vec![Complex64::new(0.0, 0.0); g * g],
            gram_scratch: vec![Complex64::new(0.0, 0.0); g * g],
            evals: vec![0.0; g],
            cand: vec![vec![Complex64::new(0.0, 0.0); ensemble_size]; rank],
        }
    }

    fn param_count(&self) -> usize {
        2 * self.ensemble_size * self.rank
    }

    /// Σ_j p_j·M(ψ_j) for the decomposition induced by orthonormalizing
    /// base + θ. Returns +∞ when the perturbed columns lose rank.
    fn objective(&mut self, base: &[Vec<Complex64>], theta: &[f64]) -> f64 {
        let (rank, size) = (self.rank, self.ensemble_size);
        for (i, base_col) in base.iter().enumerate().take(rank) {
            for (j, base_entry) in base_col.iter().enumerate().take(size) {
                let idx = 2 * (j * rank + i);
                self.cand[i][j] = base_entry + Complex64::new(theta[idx], theta[idx + 1]);
            }
        }
        if linalg::mgs_columns(&mut self.cand).is_err() {
            return f64::INFINITY;
        }
        let mut value = 0.0;
        for j in 0..size {
            value += self.member_contribution(j);
        }
        value
    }

    /// Weight-times-measure of member j of the current candidate isometry.
    fn member_contribution(&mut self, j: usize) -> f64 {
        let total = self.total;
        for t in 0..total {
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..self.rank {
                acc += self.cand[i][j].conj() * self.w[i][t];
            }
            self.member[t] = acc;
        }
        // Gram matrix of the coefficient matrix over the smaller side.
        let (m, n, g) = (self.m, self.n, self.g);
        let rows_are_small = m <= n;
        for a in 0..g {
            for b in 0..=a {
                let mut acc = Complex64::new(0.0, 0.0);
                if rows_are_small {
                    for col in 0..n {
                        acc += self.member[a * n + col] * self.member[b * n + col].conj();
                    }
                } else {
                    for row in 0..m {
                        acc += self.member[row * n + a] * self.member[row * n + b].conj();
                    }
                }
                self.gram[a * g + b] = acc;
                self.gram[b * g + a] = acc.conj();
            }
        }
        let weight: f64 = (0..g).map(|a| self.gram[a * g + a].re).sum();
        if weight < WEIGHT_FLOOR {
            return 0.0;
        }
        match self.measure {
            RoofMeasure::Concurrence => {
                // p·C(ψ) = √(2(p² − ‖G‖_F²)) with G the unnormalized Gram.
                let frob_sq: f64 = self.gram.iter().map(|z| z.norm_sqr()).sum();
                (2.0 * (weight * weight - frob_sq)).max(0.0).sqrt()
            }
            RoofMeasure::Negativity => {
                // Unnormalized Schmidt weights: eigenvalues of G are p·k².
                self.gram_scratch.copy_from_slice(&self.gram);
                if jacobi_eigenvalues_in_place(&mut self.gram_scratch, g, &mut self.evals).is_err()
                {
                    return f64::INFINITY;
                }
                let mut sum_k = 0.0;
                let mut sum_k_sq = 0.0;
                for &l in &self.evals[..g] {
                    let l = l.max(0.0);
                    sum_k += l.sqrt();
                    sum_k_sq += l;
                }
                // p·N(ψ) = (Σk)² − Σk² over the unnormalized k, ÷ (d−1).
                ((sum_k * sum_k - sum_k_sq) / (g as f64 - 1.0)).max(0.0)
            }
        }
    }
}

/// Run coordinate-descent stages, re-centering the parametrization on the
/// best isometry found after each stage. Re-centering matters: once ‖θ‖
/// grows, the map θ ↦ orthonormalize(base + θ) is poorly conditioned and
/// coordinate steps stop translating into useful moves on the isometry.
fn staged_search(
    problem: &mut RoofProblem,
    base: Vec<Vec<Complex64>>,
    config: &OptimizerConfig,
) -> SearchOutcome {
    let mut base = base;
    let mut budget = config.max_iterations;
    let mut value = f64::INFINITY;
    let mut initial_step = 0.25f64;
    let converged = loop {
        let stage = coordinate_stage(problem, &base, config, budget, initial_step);
        budget = budget.saturating_sub(stage.sweeps_used);
        let improved = stage.value < value - 1e-13 * (1.0 + stage.value.abs());
        value = stage.value;
        base = problem.cand.clone();
        if value < 1e-12 || budget == 0 || !improved {
            break stage.converged;
        }
        // Later stages keep working at the scale the search has reached
        // instead of re-annealing from scratch.
        initial_step = (initial_step * 0.25).max(1e-3);
    };
    SearchOutcome {
        value,
        isometry_cols: base,
        converged,
    }
}

struct StageResult {
    value: f64,
    sweeps_used: usize,
    converged: bool,
}

/// Coordinate descent with a three-point quadratic fit per coordinate,
/// Hooke-Jeeves pattern moves after each sweep, and step shrinking on
/// insufficient decrease. Leaves the winning orthonormalized isometry in
/// `problem.cand`.
fn coordinate_stage(
    problem: &mut RoofProblem,
    base: &[Vec<Complex64>],
    config: &OptimizerConfig,
    max_sweeps: usize,
    initial_step: f64,
) -> StageResult {
    let dim = problem.param_count();
    let mut theta = vec![0.0f64; dim];
    let mut trial = theta.clone();
    let mut value = problem.objective(base, &theta);
    let mut step = initial_step;
    let mut converged = false;
    let mut sweeps_used = 0;

    for _sweep in 0..max_sweeps {
        if step < config.step_tolerance || value < 1e-12 {
            converged = true;
            break;
        }
        sweeps_used += 1;
        let sweep_start_value = value;
        let sweep_start = theta.clone();

        for c in 0..dim {
            trial.copy_from_slice(&theta);
            let center = theta[c];
            trial[c] = center + step;
            let f_plus = problem.objective(base, &trial);
            trial[c] = center - step;
            let f_minus = problem.objective(base, &trial);

            // Quadratic fit through (−h, f₋), (0, f₀), (+h, f₊).
            let curvature = f_plus + f_minus - 2.0 * value;
            let mut best_delta = 0.0;
            let mut best_value = value;
            if f_plus < best_value {
                best_value = f_plus;
                best_delta = step;
            }
            if f_minus < best_value {
                best_value = f_minus;
                best_delta = -step;
            }
            if curvature > f64::EPSILON && f_plus.is_finite() && f_minus.is_finite() {
                let vertex = 0.5 * step * (f_minus - f_plus) / curvature;
                let vertex = vertex.clamp(-2.0 * step, 2.0 * step);
                trial[c] = center + vertex;
                let f_vertex = problem.objective(base, &trial);
                if f_vertex < best_value {
                    best_value = f_vertex;
                    best_delta = vertex;
                }
            }
            if best_value < value {
                theta[c] = center + best_delta;
                value = best_value;
            }
        }

        if value < sweep_start_value {
            // Pattern moves along the sweep's aggregate direction, doubling
            // while they keep paying off; this is what gets the search down
            // long narrow valleys.
            let direction: Vec<f64> = theta
                .iter()
                .zip(&sweep_start)
                .map(|(now, was)| now - was)
                .collect();
            let mut stride = 1.0;
            for _ in 0..10 {
                for c in 0..dim {
                    trial[c] = theta[c] + stride * direction[c];
                }
                let f_pattern = problem.objective(base, &trial);
                if f_pattern < value {
                    theta.copy_from_slice(&trial);
                    value = f_pattern;
                    stride *= 2.0;
                } else {
                    break;
                }
            }
        }
        // Shrink once progress stalls relative to the probe scale; a pure
        // "no coordinate moved" test lets microscopic improvements pin the
        // step size forever.
        if sweep_start_value - value <= 0.1 * step * step {
            step *= 0.25;
        }
    }
    if value < 1e-12 {
        converged = true;
    }

    // Rebuild the orthonormalized columns for the winning parameters.
    let value_check = problem.objective(base, &theta);
    debug_assert!((value_check - value).abs() <= 1e-9 * (1.0 + value.abs()));
    StageResult {
        value: value_check,
        sweeps_used,
        converged,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{from_schmidt, random_mixed_state, random_pure_state, SchmidtForm};

    fn dims(m: usize, n: usize) -> BipartiteDims {
        BipartiteDims::new(m, n).unwrap()
    }

    fn bell_projector() -> DensityMatrix {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        let k = SchmidtForm::new(vec![r, r]).unwrap();
        from_schmidt(&k, dims(2, 2)).unwrap().projector()
    }

    /// Werner state p·|Φ⁺⟩⟨Φ⁺| + (1−p)·I/4.
    fn werner(p: f64) -> DensityMatrix {
        let bell = bell_projector();
        let total = 4;
        let matrix = ComplexMatrix::from_fn(total, total, |a, b| {
            let mixed = if a == b { (1.0 - p) / 4.0 } else { 0.0 };
            bell.matrix().get(a, b).scale(p) + Complex64::new(mixed, 0.0)
        });
        DensityMatrix::new(dims(2, 2), matrix).unwrap()
    }

    fn quick_config(seed: u64) -> OptimizerConfig {
        OptimizerConfig {
            restarts: 4,
            max_iterations: 200,
            seed,
            ..OptimizerConfig::default()
        }
    }

    #[test]
    fn identity_isometry_reproduces_eigendecomposition() {
        let rho = random_mixed_state(dims(2, 2), 2, 3).unwrap();
        let iso = ComplexMatrix::identity(2);
        let ensemble = ensemble_from_isometry(&rho, &iso).unwrap();
        assert_eq!(ensemble.members().len(), 2);
        let evals = rho.eigenvalues().unwrap();
        for ((p, _), l) in ensemble.members().iter().zip(evals) {
            assert!((p - l).abs() < 1e-10);
        }
        assert!(ensemble.reconstruction_error(&rho) < 1e-10);
    }

    #[test]
    fn pure_state_members_all_parallel() {
        let rho = bell_projector();
        // Rank 1: any isometry is a 2x1 column with unit norm.
        let iso = ComplexMatrix::new(
            2,
            1,
            vec![Complex64::new(0.6, 0.0), Complex64::new(0.0, 0.8)],
        )
        .unwrap();
        let ensemble = ensemble_from_isometry(&rho, &iso).unwrap();
        for (_, psi) in ensemble.members() {
            let overlap: Complex64 = psi
                .amplitudes()
                .iter()
                .zip(ensemble.members()[0].1.amplitudes())
                .map(|(a, b)| a.conj() * b)
                .sum();
            assert!((overlap.norm() - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn random_isometry_reconstructs_rank2_state() {
        let rho = random_mixed_state(dims(2, 2), 2, 21).unwrap();
        let raw = ComplexMatrix::from_fn(5, 2, |i, j| {
            let mut rng = SplitMix64::new(900 + (i * 2 + j) as u64);
            rng.complex_normal()
        });
        let iso = linalg::orthonormalize_columns(&raw).unwrap();
        let ensemble = ensemble_from_isometry(&rho, &iso).unwrap();
        assert!(ensemble.reconstruction_error(&rho) < 1e-9);
        let total: f64 = ensemble.members().iter().map(|(p, _)| p).sum();
        assert!((total - 1.0).abs() < 1e-9);
    }

    #[test]
    fn non_isometry_rejected() {
        let rho = random_mixed_state(dims(2, 2), 2, 4).unwrap();
        let bad = ComplexMatrix::from_fn(4, 2, |i, j| Complex64::new((i + j) as f64, 0.0));
        assert!(matches!(
            ensemble_from_isometry(&rho, &bad),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn roof_of_pure_state_is_pure_measure() {
        let rho = bell_projector();
        let result = convex_roof(&rho, RoofMeasure::Concurrence, &quick_config(1)).unwrap();
        assert!((result.value - 1.0).abs() < 1e-9);
        assert!(result.converged);
        assert_eq!(result.ensemble.members().len(), 1);
    }

    #[test]
    fn roof_on_werner_half_matches_oracle() {
        let rho = werner(0.5);
        let result = convex_roof(&rho, RoofMeasure::Concurrence, &quick_config(2)).unwrap();
        assert!(
            (result.value - 0.25).abs() < 1e-3,
            "value {} vs oracle 0.25",
            result.value
        );
    }

    #[test]
    fn roof_on_separable_werner_is_zero() {
        // The separability boundary is the slowest case: the optimum needs
        // every member exactly product, so give the search a real budget.
        let rho = werner(1.0 / 3.0);
        let config = OptimizerConfig {
            restarts: 6,
            max_iterations: 1500,
            seed: 3,
            ..OptimizerConfig::default()
        };
        let result = convex_roof(&rho, RoofMeasure::Concurrence, &config).unwrap();
        assert!(result.value < 1e-3, "value {}", result.value);
    }

    #[test]
    fn roof_never_exceeds_eigendecomposition_average() {
        for seed in 0..5 {
            let rho = random_mixed_state(dims(2, 2), 3, 100 + seed).unwrap();
            let eigen_iso = ComplexMatrix::identity(3);
            let eigen_avg = ensemble_from_isometry(&rho, &eigen_iso)
                .unwrap()
                .average(RoofMeasure::Concurrence)
                .unwrap();
            let result = convex_roof(&rho, RoofMeasure::Concurrence, &quick_config(seed)).unwrap();
            assert!(result.value <= eigen_avg + 1e-9);
            assert!(result.value >= 0.0);
        }
    }

    #[test]
    fn roof_result_value_matches_ensemble_average() {
        let rho = random_mixed_state(dims(2, 2), 2, 55).unwrap();
        let result = convex_roof(&rho, RoofMeasure::Concurrence, &quick_config(7)).unwrap();
        let recomputed = result.ensemble.average(RoofMeasure::Concurrence).unwrap();
        assert!((result.value - recomputed).abs() < 1e-9);
        assert!(result.ensemble.reconstruction_error(&rho) < 1e-8);
    }

    #[test]
    fn roof_is_deterministic_for_fixed_seed() {
        let rho = random_mixed_state(dims(2, 2), 2, 60).unwrap();
        let a = convex_roof(&rho, RoofMeasure::Concurrence, &quick_config(9)).unwrap();
        let b = convex_roof(&rho, RoofMeasure::Concurrence, &quick_config(9)).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn wootters_anchors() {
        assert!((wootters_concurrence_mixed(&bell_projector()).unwrap() - 1.0).abs() < 1e-10);
        let iden = DensityMatrix::maximally_mixed(dims(2, 2));
        assert!(wootters_concurrence_mixed(&iden).unwrap().abs() < 1e-10);
        for p in [0.0, 0.2, 1.0 / 3.0, 0.5, 0.8, 1.0] {
            let expected = (0.0f64).max((3.0 * p - 1.0) / 2.0);
            let got = wootters_concurrence_mixed(&werner(p)).unwrap();
            assert!((got - expected).abs() < 1e-10, "p={p}: {got} vs {expected}");
        }
        let psi = random_pure_state(dims(2, 3), 1);
        assert!(matches!(
            wootters_concurrence_mixed(&psi.projector()),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn wootters_matches_pure_concurrence_on_projectors() {
        // The closed form subtracts square roots of eigenvalues that are
        // exactly zero for projectors; rounding turns those into √(ε) ≈ 1e-8
        // terms, which bounds the achievable agreement.
        for seed in 0..10 {
            let psi = random_pure_state(dims(2, 2), 500 + seed);
            let exact = wootters_concurrence_mixed(&psi.projector()).unwrap();
            let pure = concurrence_pure(&psi);
            assert!((exact - pure).abs() < 1e-7, "{exact} vs {pure}");
        }
    }

    #[test]
    fn undersized_ensemble_rejected() {
        let rho = random_mixed_state(dims(2, 2), 3, 70).unwrap();
        let config = OptimizerConfig {
            ensemble_size: Some(2),
            ..quick_config(1)
        };
        assert!(matches!(
            convex_roof(&rho, RoofMeasure::Concurrence, &config),
            Err(Error::Argument(_))
        ));
    }

    #[test]
    fn roof_on_d1_rejected() {
        let rho = DensityMatrix::maximally_mixed(dims(1, 2));
        assert!(matches!(
            convex_roof(&rho, RoofMeasure::Concurrence, &quick_config(1)),
            Err(Error::UndefinedMeasure(_))
        ));
    }
}
