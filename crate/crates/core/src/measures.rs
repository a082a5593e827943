//! Entanglement measures and invariants for bipartite qudit states:
//! concurrence, trace-norm and rescaled negativity, the shift-operator
//! expectation form of the negativity, elementary symmetric invariants of
//! the Schmidt coefficients, and residual evaluators for the identities and
//! inequalities relating them.

use crate::error::{Error, Result};
use crate::linalg::{self, trace_norm, Complex64, ComplexMatrix, DEFAULT_HERMITICITY_TOL};
use crate::states::{
    coefficient_matrix, partial_transpose, schmidt_decompose, BipartiteDims, DensityMatrix,
    PureState, SchmidtForm, State,
};

/// Eigenvalues of ρ^{T_A} below this threshold count as negative for the
/// Peres classification; matches the density-matrix PSD tolerance so there
/// is a single noise floor.
pub const NPT_TOL: f64 = 1e-9;

/// Positive or non-positive partial transpose.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PptClass {
    Ppt,
    Npt,
}

/// Elementary symmetric polynomials e_1…e_d of the Schmidt coefficients.
/// For d = 4 these are the invariants s₁…s₄.
#[derive(Debug, Clone, PartialEq)]
pub struct InvariantSet {
    e: Vec<f64>,
}

impl InvariantSet {
    pub fn d(&self) -> usize {
        self.e.len()
    }

    /// e_1…e_d in order (index 0 holds e_1).
    pub fn values(&self) -> &[f64] {
        &self.e
    }

    /// The degree-j elementary symmetric polynomial, 1 ≤ j ≤ d.
    pub fn esp(&self, j: usize) -> f64 {
        self.e[j - 1]
    }
}

/// Outcome of the Peres partial-transpose test.
#[derive(Debug, Clone, PartialEq)]
pub struct PeresClassification {
    pub class: PptClass,
    /// Eigenvalues of ρ^{T_A} below −NPT_TOL, most negative first.
    pub negative_eigenvalues: Vec<f64>,
}

/// Residuals of the quadrit concurrence identity, in both the corrected and
/// the literature-coefficient form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadritResiduals {
    /// C² − 4s₂² − 8(s₄ − s₁s₃); zero by the identity
    /// e₂(k²) = e₂² − 2e₁e₃ + 2e₄.
    pub corrected: f64,
    /// C² − 4s₂² − 2(s₄ − s₁s₃), with the coefficient 2 as printed in the
    /// literature. Not an identity: it evaluates to −45/8 at the uniform
    /// quadrit. Reported alongside the corrected form for auditability.
    pub paper_printed: f64,
}

/// Everything this crate can say about one state.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureReport {
    pub dims: BipartiteDims,
    /// Pure-state-only fields are None for density-matrix input.
    pub schmidt: Option<SchmidtForm>,
    pub concurrence: Option<f64>,
    pub negativity_trace_norm: f64,
    pub negativity_rescaled: Option<f64>,
    /// ⟨(X⊗X)^power⟩ for power = 1…d−1.
    pub x_expectations: Option<Vec<f64>>,
    pub invariants: Option<InvariantSet>,
    pub chen_gap: Option<f64>,
    /// Present exactly when d = 3.
    pub qutrit_residual: Option<f64>,
    /// Present exactly when d = 4.
    pub quadrit_residual_corrected: Option<f64>,
    pub quadrit_residual_paper: Option<f64>,
    pub ppt_class: PptClass,
}

/// Concurrence of a pure state, C = √(2(1 − Tr ρ_A²)).
pub fn concurrence_pure(psi: &PureState) -> f64 {
    let coeff = coefficient_matrix(psi);
    let gram = coeff
        .matmul(&coeff.adjoint())
        .expect("shape by construction");
    // Tr ρ_A² = Σ|(MM†)_ij|² for the Hermitian reduced state.
    let purity: f64 = gram.entries().iter().map(|z| z.norm_sqr()).sum();
    (2.0 * (1.0 - purity)).max(0.0).sqrt()
}

/// Concurrence from Schmidt coefficients, C = √(2(1 − Σk⁴)).
pub fn concurrence_schmidt(k: &SchmidtForm) -> f64 {
    let quartic: f64 = k.coefficients().iter().map(|x| x.powi(4)).sum();
    (2.0 * (1.0 - quartic)).max(0.0).sqrt()
}

/// Two-qubit spin-flip concurrence, |⟨ψ|σ_y⊗σ_y|ψ*⟩|.
pub fn concurrence_spin_flip_2q(psi: &PureState) -> Result<f64> {
    let dims = psi.dims();
    if dims.m() != 2 || dims.n() != 2 {
        return Err(Error::Dimension(format!(
            "spin-flip concurrence is defined on 2x2 only, got {}x{}",
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
    let conj: Vec<Complex64> = psi.amplitudes().iter().map(|z| z.conj()).collect();
    let flipped = flip.matvec(&conj)?;
    let overlap: Complex64 = psi
        .amplitudes()
        .iter()
        .zip(&flipped)
        .map(|(a, f)| a.conj() * f)
        .sum();
    Ok(overlap.norm())
}

/// Trace-norm negativity N(ρ) = (‖ρ^{T_A}‖₁ − 1)/(d − 1), rescaled so its
/// maximum is 1 in every dimension.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let d = rho.dims().d();
    if d < 2 {
        return Err(Error::UndefinedMeasure(
            "negativity requires min(m, n) ≥ 2".into(),
        ));
    }
    let pt = partial_transpose(rho);
    let tn = trace_norm(&pt, DEFAULT_HERMITICITY_TOL)?;
    Ok((tn - 1.0) / (d as f64 - 1.0))
}

/// Rescaled negativity from Schmidt coefficients,
/// N = (2/(d−1))·Σ_{i<j} k_i k_j.
pub fn negativity_schmidt(k: &SchmidtForm) -> Result<f64> {
    let d = k.d();
    if d < 2 {
        return Err(Error::UndefinedMeasure(
            "negativity requires a Schmidt vector of length ≥ 2".into(),
        ));
    }
    let ks = k.coefficients();
    let mut pair_sum = 0.0;
    for i in 0..d {
        for j in (i + 1)..d {
            pair_sum += ks[i] * ks[j];
        }
    }
    Ok(2.0 * pair_sum / (d as f64 - 1.0))
}

/// The cyclic shift X with X|i⟩ = |i+1 mod d⟩; unitary, X^d = I, not
/// Hermitian.
pub fn build_shift_operator(d: usize) -> Result<ComplexMatrix> {
    if d < 2 {
        return Err(Error::Dimension(format!(
            "shift operator needs dimension ≥ 2, got {d}"
        )));
    }
    let mut x = ComplexMatrix::zeros(d, d);
    for i in 0..d {
        x.set((i + 1) % d, i, Complex64::new(1.0, 0.0));
    }
    Ok(x)
}

/// ⟨ψ|(X⊗X)^power|ψ⟩ for the Schmidt-form state: Σ_i k_i·k_{(i+power) mod d}.
pub fn x_shift_expectation(k: &SchmidtForm, power: usize) -> Result<f64> {
    let d = k.d();
    if power == 0 || power >= d {
        return Err(Error::Argument(format!(
            "shift power must lie in 1..={}, got {power}",
            d.saturating_sub(1)
        )));
    }
    let ks = k.coefficients();
    Ok((0..d).map(|i| ks[i] * ks[(i + power) % d]).sum())
}

/// Negativity as an averaged shift-operator expectation:
/// (1/(d−1))·Σ_{power=1}^{d−1} ⟨(X⊗X)^power⟩. The powers together visit
/// every ordered pair of levels, so this equals the rescaled negativity.
pub fn negativity_operator(k: &SchmidtForm) -> Result<f64> {
    let d = k.d();
    if d < 2 {
        return Err(Error::UndefinedMeasure(
            "negativity requires a Schmidt vector of length ≥ 2".into(),
        ));
    }
    let mut sum = 0.0;
    for power in 1..d {
        sum += x_shift_expectation(k, power)?;
    }
    Ok(sum / (d as f64 - 1.0))
}

/// Elementary symmetric polynomials of the Schmidt coefficients, evaluated
/// by the stable recurrence that expands Π(1 + k_i·t).
pub fn symmetric_invariants(k: &SchmidtForm) -> InvariantSet {
    let ks = k.coefficients();
    let d = ks.len();
    let mut e = vec![0.0f64; d + 1];
    e[0] = 1.0;
    for (count, &ki) in ks.iter().enumerate() {
        for j in (1..=count + 1).rev() {
            e[j] += ki * e[j - 1];
        }
    }
    InvariantSet { e: e[1..].to_vec() }
}

/// Chen gap C² − ((d−1)/(2d))·N²; non-negative by the Chen inequality.
pub fn chen_gap(k: &SchmidtForm) -> Result<f64> {
    let d = k.d() as f64;
    let c = concurrence_schmidt(k);
    let n = negativity_schmidt(k)?;
    Ok(c * c - (d - 1.0) / (2.0 * d) * n * n)
}

/// Qutrit identity residual N² − C²/4 − 2k₁k₂k₃√(1+2N) (the + branch);
/// identically zero for valid d = 3 Schmidt vectors.
pub fn qutrit_residual(k: &SchmidtForm) -> Result<f64> {
    if k.d() != 3 {
        return Err(Error::Dimension(format!(
            "qutrit residual needs d = 3, got {}",
            k.d()
        )));
    }
    let ks = k.coefficients();
    let n = negativity_schmidt(k)?;
    let c = concurrence_schmidt(k);
    let triple = ks[0] * ks[1] * ks[2];
    Ok(n * n - c * c / 4.0 - 2.0 * triple * (1.0 + 2.0 * n).sqrt())
}

/// Quadrit identity residuals in corrected and printed-coefficient form.
/// Both use the unrescaled pair sum s₂ (so "4N²" is read as 4s₂²).
pub fn quadrit_residuals(k: &SchmidtForm) -> Result<QuadritResiduals> {
    if k.d() != 4 {
        return Err(Error::Dimension(format!(
            "quadrit residuals need d = 4, got {}",
            k.d()
        )));
    }
    let ks = k.coefficients();
    let inv = symmetric_invariants(k);
    let (s1, s2, s3, s4) = (inv.esp(1), inv.esp(2), inv.esp(3), inv.esp(4));
    let mut c_sq = 0.0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            c_sq += ks[i] * ks[i] * ks[j] * ks[j];
        }
    }
    c_sq *= 4.0;
    let base = c_sq - 4.0 * s2 * s2;
    Ok(QuadritResiduals {
        corrected: base - 8.0 * (s4 - s1 * s3),
        paper_printed: base - 2.0 * (s4 - s1 * s3),
    })
}

/// Peres partial-transpose test: NPT iff ρ^{T_A} has an eigenvalue below
/// −NPT_TOL. The negativity equals 2/(d−1) times the absolute sum of the
/// returned negative eigenvalues.
pub fn peres_classify(rho: &DensityMatrix) -> Result<PeresClassification> {
    let pt = partial_transpose(rho);
    let evals = linalg::hermitian_eigenvalues(&pt, DEFAULT_HERMITICITY_TOL)?;
    let mut negative: Vec<f64> = evals.into_iter().filter(|&l| l < -NPT_TOL).collect();
    negative.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let class = if negative.is_empty() {
        PptClass::Ppt
    } else {
        PptClass::Npt
    };
    Ok(PeresClassification {
        class,
        negative_eigenvalues: negative,
    })
}

/// Compute every applicable measure, invariant, and residual for one state.
/// Density-matrix input populates only the negativity and PPT fields.
pub fn measure_report(state: &State) -> Result<MeasureReport> {
    match state {
        State::Pure(psi) => {
            let dims = psi.dims();
            let d = dims.d();
            let k = schmidt_decompose(psi)?;
            let projector = psi.projector();
            let n_trace = negativity(&projector)?;
            let n_rescaled = negativity_schmidt(&k)?;
            let x_expectations: Vec<f64> = (1..d)
                .map(|p| x_shift_expectation(&k, p))
                .collect::<Result<_>>()?;
            let peres = peres_classify(&projector)?;
            Ok(MeasureReport {
                dims,
                concurrence: Some(concurrence_pure(psi)),
                negativity_trace_norm: n_trace,
                negativity_rescaled: Some(n_rescaled),
                x_expectations: Some(x_expectations),
                invariants: Some(symmetric_invariants(&k)),
                chen_gap: Some(chen_gap(&k)?),
                qutrit_residual: (d == 3).then(|| qutrit_residual(&k)).transpose()?,
                quadrit_residual_corrected: (d == 4)
                    .then(|| quadrit_residuals(&k).map(|r| r.corrected))
                    .transpose()?,
                quadrit_residual_paper: (d == 4)
                    .then(|| quadrit_residuals(&k).map(|r| r.paper_printed))
                    .transpose()?,
                schmidt: Some(k),
                ppt_class: peres.class,
            })
        }
        State::Mixed(rho) => {
            let peres = peres_classify(rho)?;
            Ok(MeasureReport {
                dims: rho.dims(),
                schmidt: None,
                concurrence: None,
                negativity_trace_norm: negativity(rho)?,
                negativity_rescaled: None,
                x_expectations: None,
                invariants: None,
                chen_gap: None,
                qutrit_residual: None,
                quadrit_residual_corrected: None,
                quadrit_residual_paper: None,
                ppt_class: peres.class,
            })
        }
    }
}
