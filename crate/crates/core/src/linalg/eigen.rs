use crate::error::{Error, Result};

use super::{Complex64, ComplexMatrix, ZERO};

/// Default tolerance for accepting a matrix as Hermitian: far above
/// double-precision noise, far below physical signal.
pub const DEFAULT_HERMITICITY_TOL: f64 = 1e-10;

/// Off-diagonal reduction target relative to ‖H‖_F.
const OFF_DIAGONAL_REDUCTION: f64 = 1e-12;

/// Hard cap on cyclic Jacobi sweeps.
const MAX_SWEEPS: usize = 100;

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
///
/// Returns eigenvalues sorted descending and the matching eigenvectors as
/// columns, so that `H = V · diag(λ) · V†`. Within a degenerate eigenvalue
/// cluster the eigenvector basis is arbitrary; callers must rely only on
/// invariant quantities.
///
/// `tol` bounds the accepted entry-wise deviation `max |H − H†|`.
pub fn hermitian_eigensystem(h: &ComplexMatrix, tol: f64) -> Result<(Vec<f64>, ComplexMatrix)> {
    let n = check_hermitian_input(h, tol)?;
    let mut a = symmetrized(h);
    let mut v = ComplexMatrix::identity(n);
    jacobi_sweep_loop(a.entries_mut(), n, Some(v.entries_mut()))?;
    let mut evals: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    let order = descending_order(&evals);
    evals = order.iter().map(|&i| evals[i]).collect();
    let vecs = ComplexMatrix::from_fn(n, n, |i, j| v.get(i, order[j]));
    Ok((evals, vecs))
}

/// Eigenvalues only, sorted descending. Skips eigenvector accumulation.
pub fn hermitian_eigenvalues(h: &ComplexMatrix, tol: f64) -> Result<Vec<f64>> {
    let n = check_hermitian_input(h, tol)?;
    let mut a = symmetrized(h);
    jacobi_sweep_loop(a.entries_mut(), n, None)?;
    let mut evals: Vec<f64> = (0..n).map(|i| a.get(i, i).re).collect();
    evals.sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(evals)
}

/// Low-level kernel for hot loops: diagonalize the Hermitian matrix stored
/// row-major in `a` (length n·n, assumed Hermitian, no validation) and write
/// its eigenvalues, sorted descending, into `evals`. No heap allocation.
pub(crate) fn jacobi_eigenvalues_in_place(
    a: &mut [Complex64],
    n: usize,
    evals: &mut [f64],
) -> Result<()> {
    debug_assert_eq!(a.len(), n * n);
    debug_assert!(evals.len() >= n);
    jacobi_sweep_loop(a, n, None)?;
    for i in 0..n {
        evals[i] = a[i * n + i].re;
    }
    evals[..n].sort_by(|x, y| y.partial_cmp(x).unwrap());
    Ok(())
}

fn check_hermitian_input(h: &ComplexMatrix, tol: f64) -> Result<usize> {
    if !h.is_square() {
        return Err(Error::Dimension(format!(
            "hermitian eigensystem needs a square matrix, got {}x{}",
            h.rows(),
            h.cols()
        )));
    }
    if !h.all_finite() {
        return Err(Error::InvalidState("matrix entries must be finite".into()));
    }
    let dev = h.hermiticity_deviation().unwrap();
    if dev > tol {
        return Err(Error::Symmetry(format!(
            "matrix deviates from Hermitian by {dev:.3e} (tolerance {tol:.3e})"
        )));
    }
    Ok(h.rows())
}

/// (H + H†)/2, forcing exact Hermiticity before the sweeps.
fn symmetrized(h: &ComplexMatrix) -> ComplexMatrix {
    let n = h.rows();
    ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(h.get(i, i).re, 0.0)
        } else {
            (h.get(i, j) + h.get(j, i).conj()).scale(0.5)
        }
    })
}

fn off_diagonal_sq(a: &[Complex64], n: usize) -> f64 {
    let mut sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            sum += 2.0 * a[i * n + j].norm_sqr();
        }
    }
    sum
}

fn frobenius_sq(a: &[Complex64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// Cyclic Jacobi sweeps until the off-diagonal Frobenius norm drops below
/// `OFF_DIAGONAL_REDUCTION · ‖H‖_F`. Optionally accumulates the product of
/// rotations into `v` (row-major n×n, must start as identity or any basis to
/// be rotated).
fn jacobi_sweep_loop(a: &mut [Complex64], n: usize, mut v: Option<&mut [Complex64]>) -> Result<()> {
    if n <= 1 {
        return Ok(());
    }
    let threshold_sq = frobenius_sq(a) * OFF_DIAGONAL_REDUCTION * OFF_DIAGONAL_REDUCTION;
    for _sweep in 0..MAX_SWEEPS {
        if off_diagonal_sq(a, n) <= threshold_sq {
            return Ok(());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(a, n, p, q, v.as_deref_mut());
            }
        }
    }
    if off_diagonal_sq(a, n) <= threshold_sq {
        return Ok(());
    }
    Err(Error::Convergence(format!(
        "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps (dim {n})"
    )))
}

/// One complex Jacobi rotation annihilating the (p, q) entry.
///
/// The rotation is the unitary that diagonalizes the 2x2 Hermitian block
/// [[a_pp, a_pq], [conj(a_pq), a_qq]]: a phase transform making a_pq real
/// followed by the classic real rotation with tan 2θ = 2|a_pq| / (a_qq − a_pp).
#[inline]
fn rotate(a: &mut [Complex64], n: usize, p: usize, q: usize, v: Option<&mut [Complex64]>) {
    let apq = a[p * n + q];
    let g = apq.norm();
    if g <= f64::MIN_POSITIVE {
        return;
    }
    let app = a[p * n + p].re;
    let aqq = a[q * n + q].re;
    let phase = apq.scale(1.0 / g);
    let tau = (aqq - app) / (2.0 * g);
    // Stable root of t² + 2τt − 1 = 0 with |t| ≤ 1.
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        1.0 / (tau - (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let s_phase = phase.conj().scale(s); // right-multiplication coefficient
    let s_phase_conj = phase.scale(s); // left-multiplication coefficient

    // Columns: A ← A · J.
    for k in 0..n {
        let akp = a[k * n + p];
        let akq = a[k * n + q];
        a[k * n + p] = akp.scale(c) - s_phase * akq;
        a[k * n + q] = akp.scale(s) + akq.scale(c) * phase.conj();
    }
    // Rows: A ← J† · A.
    for k in 0..n {
        let apk = a[p * n + k];
        let aqk = a[q * n + k];
        a[p * n + k] = apk.scale(c) - s_phase_conj * aqk;
        a[q * n + k] = apk.scale(s) + aqk.scale(c) * phase;
    }
    // The transformed 2x2 block is known in closed form; writing it directly
    // keeps the off-diagonal exactly zero and the diagonal exactly real.
    a[p * n + p] = Complex64::new(app - t * g, 0.0);
    a[q * n + q] = Complex64::new(aqq + t * g, 0.0);
    a[p * n + q] = ZERO;
    a[q * n + p] = ZERO;

    if let Some(v) = v {
        for k in 0..n {
            let vkp = v[k * n + p];
            let vkq = v[k * n + q];
            v[k * n + p] = vkp.scale(c) - s_phase * vkq;
            v[k * n + q] = vkp.scale(s) + vkq.scale(c) * phase.conj();
        }
    }
}

fn descending_order(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&i, &j| values[j].partial_cmp(&values[i]).unwrap());
    order
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruction_error(h: &ComplexMatrix, evals: &[f64], vecs: &ComplexMatrix) -> f64 {
        let lambda = ComplexMatrix::from_real_diagonal(evals);
        let rebuilt = vecs
            .matmul(&lambda)
            .unwrap()
            .matmul(&vecs.adjoint())
            .unwrap();
        h.max_abs_diff(&rebuilt).unwrap()
    }

    #[test]
    fn identity_eigenvalues() {
        let (evals, _) =
            hermitian_eigensystem(&ComplexMatrix::identity(2), DEFAULT_HERMITICITY_TOL).unwrap();
        assert!((evals[0] - 1.0).abs() < 1e-14);
        assert!((evals[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn already_diagonal() {
        let h = ComplexMatrix::from_real_diagonal(&[3.0, -1.0]);
        let (evals, _) = hermitian_eigensystem(&h, DEFAULT_HERMITICITY_TOL).unwrap();
        assert_eq!(evals, vec![3.0, -1.0]);
    }

    #[test]
    fn pauli_x_spectrum() {
        let h = ComplexMatrix::new(2, 2, vec![ZERO, ONE, ONE, ZERO]).unwrap();
        let (evals, vecs) = hermitian_eigensystem(&h, DEFAULT_HERMITICITY_TOL).unwrap();
        assert!((evals[0] - 1.0).abs() < 1e-14);
        assert!((evals[1] + 1.0).abs() < 1e-14);
        assert!(reconstruction_error(&h, &evals, &vecs) < 1e-14);
    }

    #[test]
    fn complex_hermitian_3x3() {
        // Hand-built Hermitian matrix with complex off-diagonals.
        let h = ComplexMatrix::new(
            3,
            3,
            vec![
                c(2.0, 0.0),
                c(0.5, 0.7),
                c(-0.3, 0.2),
                c(0.5, -0.7),
                c(-1.0, 0.0),
                c(0.1, -0.4),
                c(-0.3, -0.2),
                c(0.1, 0.4),
                c(0.5, 0.0),
            ],
        )
        .unwrap();
        let (evals, vecs) = hermitian_eigensystem(&h, DEFAULT_HERMITICITY_TOL).unwrap();
        assert!(reconstruction_error(&h, &evals, &vecs) < 1e-12);
        // Trace preserved.
        let trace: f64 = evals.iter().sum();
        assert!((trace - 1.5).abs() < 1e-12);
        // Orthonormal columns.
        let gram = vecs.adjoint().matmul(&vecs).unwrap();
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(3)).unwrap() < 1e-12);
        // Descending.
        assert!(evals[0] >= evals[1] && evals[1] >= evals[2]);
    }

    #[test]
    fn rejects_non_square() {
        let m = ComplexMatrix::zeros(2, 3);
        assert!(matches!(
            hermitian_eigensystem(&m, DEFAULT_HERMITICITY_TOL),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::new(2, 2, vec![ONE, ONE, ZERO, ONE]).unwrap();
        assert!(matches!(
            hermitian_eigensystem(&m, DEFAULT_HERMITICITY_TOL),
            Err(Error::Symmetry(_))
        ));
    }

    #[test]
    fn eigenvalues_only_matches_full_solve() {
        let h = ComplexMatrix::new(
            2,
            2,
            vec![c(1.0, 0.0), c(0.2, 0.9), c(0.2, -0.9), c(-2.0, 0.0)],
        )
        .unwrap();
        let (full, _) = hermitian_eigensystem(&h, DEFAULT_HERMITICITY_TOL).unwrap();
        let only = hermitian_eigenvalues(&h, DEFAULT_HERMITICITY_TOL).unwrap();
        for (a, b) in full.iter().zip(&only) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn zero_matrix_is_fine() {
        let (evals, _) =
            hermitian_eigensystem(&ComplexMatrix::zeros(3, 3), DEFAULT_HERMITICITY_TOL).unwrap();
        assert_eq!(evals, vec![0.0, 0.0, 0.0]);
    }
}
