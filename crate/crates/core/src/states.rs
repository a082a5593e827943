//! Bipartite state representations: pure states, density matrices, Schmidt
//! decomposition, partial transpose, and seeded random state generation.
//!
//! Basis ordering is fixed globally: the product basis |i, j⟩ is enumerated
//! with the A-index major, so amplitude index = i·n + j.

use crate::error::{Error, Result};
use crate::linalg::{
    self, singular_value_decomposition, Complex64, ComplexMatrix, DEFAULT_HERMITICITY_TOL,
};
use crate::rng::SplitMix64;

/// Norm / trace tolerance for accepting states.
pub const STATE_TOL: f64 = 1e-10;

/// Eigenvalues of an incoming density matrix may dip this far below zero
/// before the state is rejected; smaller negatives are clamped to zero and
/// the matrix renormalized.
pub const PSD_TOL: f64 = 1e-9;

/// Dimensions of a bipartite system: subsystem A has dimension m, subsystem
/// B has dimension n, and d = min(m, n) bounds the Schmidt rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BipartiteDims {
    m: usize,
    n: usize,
}

impl BipartiteDims {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Dimension(format!(
                "subsystem dimensions must be positive, got {m}x{n}"
            )));
        }
        Ok(Self { m, n })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// d = min(m, n), the maximum Schmidt rank.
    pub fn d(&self) -> usize {
        self.m.min(self.n)
    }

    /// Total Hilbert-space dimension m·n.
    pub fn total(&self) -> usize {
        self.m * self.n
    }
}

/// Which subsystem to keep when tracing out the other.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Unit-norm amplitude vector over an m⊗n bipartite space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: BipartiteDims,
    amplitudes: Vec<Complex64>,
}

impl PureState {
    pub fn new(dims: BipartiteDims, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != dims.total() {
            return Err(Error::Dimension(format!(
                "expected {} amplitudes for {}x{}, got {}",
                dims.total(),
                dims.m,
                dims.n,
                amplitudes.len()
            )));
        }
        if !amplitudes
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
        {
            return Err(Error::InvalidState("amplitudes must be finite".into()));
        }
        let norm_sq: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "state is not normalized: Σ|amplitude|² = {norm_sq}"
            )));
        }
        Ok(Self { dims, amplitudes })
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Amplitude of the basis state |i, j⟩ (zero-based indices).
    pub fn amplitude(&self, i: usize, j: usize) -> Complex64 {
        self.amplitudes[i * self.dims.n + j]
    }

    /// The projector |ψ⟩⟨ψ| as a density matrix.
    pub fn projector(&self) -> DensityMatrix {
        let total = self.dims.total();
        let matrix = ComplexMatrix::from_fn(total, total, |a, b| {
            self.amplitudes[a] * self.amplitudes[b].conj()
        });
        DensityMatrix {
            dims: self.dims,
            matrix,
        }
    }
}

/// Hermitian, positive semidefinite, unit-trace operator with bipartite
/// dimension metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: BipartiteDims,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    /// Validate and accept a density matrix. Eigenvalues in (−PSD_TOL, 0)
    /// are tolerated as I/O rounding: the matrix is projected back onto the
    /// PSD cone and renormalized. Anything more negative is rejected.
    pub fn new(dims: BipartiteDims, matrix: ComplexMatrix) -> Result<Self> {
        let total = dims.total();
        if matrix.rows() != total || matrix.cols() != total {
            return Err(Error::Dimension(format!(
                "expected a {total}x{total} matrix for {}x{} dims, got {}x{}",
                dims.m,
                dims.n,
                matrix.rows(),
                matrix.cols()
            )));
        }
        if !matrix.all_finite() {
            return Err(Error::InvalidState("matrix entries must be finite".into()));
        }
        let dev = matrix.hermiticity_deviation().unwrap();
        if dev > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix deviates from Hermitian by {dev:.3e}"
            )));
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix trace is {trace}, expected 1"
            )));
        }
        let (evals, vecs) = linalg::hermitian_eigensystem(&matrix, STATE_TOL)?;
        let min_eval = *evals.last().expect("non-empty spectrum");
        if min_eval < -PSD_TOL {
            return Err(Error::InvalidState(format!(
                "density matrix has negative eigenvalue {min_eval:.3e}"
            )));
        }
        if min_eval < 0.0 {
            // Clamp rounding-level negatives and renormalize.
            let clamped: Vec<f64> = evals.iter().map(|&l| l.max(0.0)).collect();
            let total_weight: f64 = clamped.iter().sum();
            let renorm: Vec<f64> = clamped.iter().map(|&l| l / total_weight).collect();
            let lambda = ComplexMatrix::from_real_diagonal(&renorm);
            let rebuilt = vecs.matmul(&lambda)?.matmul(&vecs.adjoint())?;
            return Ok(Self {
                dims,
                matrix: rebuilt,
            });
        }
        Ok(Self { dims, matrix })
    }

    pub fn dims(&self) -> BipartiteDims {
        self.dims
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Spectrum, descending.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        linalg::hermitian_eigenvalues(&self.matrix, DEFAULT_HERMITICITY_TOL)
    }

    /// Tr ρ².
    pub fn purity(&self) -> f64 {
        self.matrix
            .entries()
            .iter()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
    }

    /// Maximally mixed state I/(m·n).
    pub fn maximally_mixed(dims: BipartiteDims) -> Self {
        let total = dims.total();
        let matrix = ComplexMatrix::identity(total).scale(Complex64::new(1.0 / total as f64, 0.0));
        Self { dims, matrix }
    }
}

/// Either kind of state, for operations that accept both.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl State {
    pub fn dims(&self) -> BipartiteDims {
        match self {
            State::Pure(psi) => psi.dims(),
            State::Mixed(rho) => rho.dims(),
        }
    }
}

/// Non-negative descending Schmidt coefficients with Σk² = 1.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtForm {
    k: Vec<f64>,
}

impl SchmidtForm {
    /// Canonicalize a coefficient vector: validates non-negativity and
    /// normalization, sorts descending.
    pub fn new(mut k: Vec<f64>) -> Result<Self> {
        if k.is_empty() {
            return Err(Error::Dimension("Schmidt vector must be non-empty".into()));
        }
        if !k.iter().all(|x| x.is_finite() && *x >= 0.0) {
            return Err(Error::InvalidState(
                "Schmidt coefficients must be finite and non-negative".into(),
            ));
        }
        let norm_sq: f64 = k.iter().map(|x| x * x).sum();
        if (norm_sq - 1.0).abs() > STATE_TOL {
            return Err(Error::InvalidState(format!(
                "Schmidt coefficients are not normalized: Σk² = {norm_sq}"
            )));
        }
        k.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(Self { k })
    }

    pub fn d(&self) -> usize {
        self.k.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.k
    }
}

/// The m×n coefficient matrix of a pure state: entry (i, j) is the amplitude
/// of |i, j⟩. Reshaping is lossless.
pub fn coefficient_matrix(psi: &PureState) -> ComplexMatrix {
    let (m, n) = (psi.dims().m(), psi.dims().n());
    ComplexMatrix::from_fn(m, n, |i, j| psi.amplitude(i, j))
}

/// Schmidt coefficients of a pure state: the singular values of its
/// coefficient matrix, renormalized against rounding drift.
pub fn schmidt_decompose(psi: &PureState) -> Result<SchmidtForm> {
    let coeff = coefficient_matrix(psi);
    let (_, sigma, _) = singular_value_decomposition(&coeff)?;
    let norm_sq: f64 = sigma.iter().map(|s| s * s).sum();
    if (norm_sq - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidState(format!(
            "Schmidt spectrum lost normalization: Σk² = {norm_sq}"
        )));
    }
    let inv = 1.0 / norm_sq.sqrt();
    SchmidtForm::new(sigma.iter().map(|s| s * inv).collect())
}

/// Build the canonical state Σ k_i |i, i⟩ in the given dimensions.
pub fn from_schmidt(k: &SchmidtForm, dims: BipartiteDims) -> Result<PureState> {
    if k.d() > dims.d() {
        return Err(Error::Dimension(format!(
            "Schmidt vector of length {} does not fit in {}x{} (d = {})",
            k.d(),
            dims.m(),
            dims.n(),
            dims.d()
        )));
    }
    let mut amplitudes = vec![Complex64::new(0.0, 0.0); dims.total()];
    for (i, &ki) in k.coefficients().iter().enumerate() {
        amplitudes[i * dims.n() + i] = Complex64::new(ki, 0.0);
    }
    PureState::new(dims, amplitudes)
}

/// Reduced density matrix on the chosen subsystem. For A this is M·M† with
/// M the coefficient matrix; the result carries collapsed dims (m⊗1 or 1⊗n).
pub fn reduced_density(psi: &PureState, which: Subsystem) -> Result<DensityMatrix> {
    let coeff = coefficient_matrix(psi);
    let (matrix, dims) = match which {
        Subsystem::A => (
            coeff.matmul(&coeff.adjoint())?,
            BipartiteDims::new(psi.dims().m(), 1)?,
        ),
        Subsystem::B => (
            coeff.adjoint().matmul(&coeff)?.conjugate(),
            BipartiteDims::new(1, psi.dims().n())?,
        ),
    };
    DensityMatrix::new(dims, matrix)
}

/// Partial transpose with respect to subsystem A:
/// ⟨i,j|ρ^{T_A}|k,l⟩ = ⟨k,j|ρ|i,l⟩. Hermitian and trace-preserving, but in
/// general not positive semidefinite, so it is returned as a bare matrix.
pub fn partial_transpose(rho: &DensityMatrix) -> ComplexMatrix {
    let (m, n) = (rho.dims().m(), rho.dims().n());
    let total = m * n;
    let src = rho.matrix();
    ComplexMatrix::from_fn(total, total, |row, col| {
        let (i, j) = (row / n, row % n);
        let (k, l) = (col / n, col % n);
        src.get(k * n + j, i * n + l)
    })
}

/// Random Schmidt vector: absolute values of d standard normals, normalized
/// and sorted descending. Deterministic for a fixed seed.
pub fn random_schmidt_vector(d: usize, seed: u64) -> Result<SchmidtForm> {
    if d == 0 {
        return Err(Error::Dimension(
            "Schmidt dimension must be positive".into(),
        ));
    }
    let mut rng = SplitMix64::new(seed);
    loop {
        let g: Vec<f64> = (0..d).map(|_| rng.normal().abs()).collect();
        let norm: f64 = g.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return SchmidtForm::new(g.iter().map(|x| x / norm).collect());
        }
    }
}

/// Haar-uniform random pure state: independent complex standard normal
/// amplitudes, normalized. Deterministic for a fixed seed.
pub fn random_pure_state(dims: BipartiteDims, seed: u64) -> PureState {
    let mut rng = SplitMix64::new(seed);
    loop {
        let amps: Vec<Complex64> = (0..dims.total()).map(|_| rng.complex_normal()).collect();
        let norm: f64 = amps.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-12 {
            let inv = 1.0 / norm;
            let amplitudes = amps.iter().map(|z| z.scale(inv)).collect();
            return PureState { dims, amplitudes };
        }
    }
}

/// Random mixed state of the given rank: ρ = G·G†/Tr(G·G†) with G an
/// (mn)×rank matrix of independent complex normals. Deterministic per seed.
pub fn random_mixed_state(dims: BipartiteDims, rank: usize, seed: u64) -> Result<DensityMatrix> {
    let total = dims.total();
    if rank == 0 || rank > total {
        return Err(Error::Dimension(format!(
            "rank must be in 1..={total}, got {rank}"
        )));
    }
    let mut rng = SplitMix64::new(seed);
    let g = ComplexMatrix::from_fn(total, rank, |_, _| rng.complex_normal());
    let gram = g.matmul(&g.adjoint()).expect("shape by construction");
    let trace = gram.trace().re;
    let matrix = gram.scale(Complex64::new(1.0 / trace, 0.0));
    // Force exact Hermiticity against rounding in the product.
    let matrix = ComplexMatrix::from_fn(total, total, |i, j| {
        if i == j {
            Complex64::new(matrix.get(i, i).re, 0.0)
        } else {
            (matrix.get(i, j) + matrix.get(j, i).conj()).scale(0.5)
        }
    });
    DensityMatrix::new(dims, matrix)
}

/// Haar-distributed random unitary: QR-like orthonormalization of a matrix
/// of independent complex normals.
pub fn random_unitary(dim: usize, seed: u64) -> Result<ComplexMatrix> {
    if dim == 0 {
        return Err(Error::Dimension(
            "unitary dimension must be positive".into(),
        ));
    }
    let mut rng = SplitMix64::new(seed);
    loop {
        let g = ComplexMatrix::from_fn(dim, dim, |_, _| rng.complex_normal());
        if let Ok(q) = linalg::orthonormalize_columns(&g) {
            return Ok(q);
        }
    }
}

/// Apply U ⊗ V to a pure state (U acts on subsystem A, V on B).
pub fn apply_local_unitaries(
    psi: &PureState,
    u: &ComplexMatrix,
    v: &ComplexMatrix,
) -> Result<PureState> {
    let (m, n) = (psi.dims().m(), psi.dims().n());
    if u.rows() != m || u.cols() != m {
        return Err(Error::Dimension(format!(
            "U must be {m}x{m}, got {}x{}",
            u.rows(),
            u.cols()
        )));
    }
    if v.rows() != n || v.cols() != n {
        return Err(Error::Dimension(format!(
            "V must be {n}x{n}, got {}x{}",
            v.rows(),
            v.cols()
        )));
    }
    // (U ⊗ V)·a without forming the Kronecker product: new M = U·M·Vᵀ.
    let coeff = coefficient_matrix(psi);
    let rotated = u.matmul(&coeff)?.matmul(&v.transpose())?;
    let amplitudes: Vec<Complex64> = (0..m * n)
        .map(|idx| rotated.get(idx / n, idx % n))
        .collect();
    // Renormalize rounding drift; unitaries preserve the norm to ~1e-15.
    let norm: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let inv = 1.0 / norm;
    PureState::new(
        psi.dims(),
        amplitudes.iter().map(|z| z.scale(inv)).collect(),
    )
}
