use crate::error::{Error, Result};

use super::DEFAULT_HERMITICITY_TOL;
use super::{hermitian_eigensystem, hermitian_eigenvalues, Complex64, ComplexMatrix, ZERO};

/// Singular values below this are clamped to exactly zero.
const SINGULAR_VALUE_FLOOR: f64 = 1e-12;

/// Thin singular value decomposition `A = U · diag(σ) · V†`.
///
/// Computed through the Hermitian eigensystem of the smaller Gram matrix
/// (A†A, or AA† when there are fewer rows than columns), with the remaining
/// singular vectors recovered by applying A. Returns `(U, σ, V)` with
/// orthonormal columns and σ sorted descending; σ has length min(rows, cols).
pub fn singular_value_decomposition(
    a: &ComplexMatrix,
) -> Result<(ComplexMatrix, Vec<f64>, ComplexMatrix)> {
    if !a.all_finite() {
        return Err(Error::InvalidState("matrix entries must be finite".into()));
    }
    let (rows, cols) = (a.rows(), a.cols());
    if rows >= cols {
        let gram = symmetrized_product(&a.adjoint(), a)?;
        let (evals, v) = hermitian_eigensystem(&gram, DEFAULT_HERMITICITY_TOL)?;
        let sigma = clamped_roots(&evals);
        let u = recover_left_vectors(a, &v, &sigma)?;
        Ok((u, sigma, v))
    } else {
        let gram = symmetrized_product(a, &a.adjoint())?;
        let (evals, u) = hermitian_eigensystem(&gram, DEFAULT_HERMITICITY_TOL)?;
        let sigma = clamped_roots(&evals);
        let v = recover_left_vectors(&a.adjoint(), &u, &sigma)?;
        Ok((u, sigma, v))
    }
}

/// Trace norm Σ|λ_i| of a Hermitian matrix.
pub fn trace_norm(h: &ComplexMatrix, tol: f64) -> Result<f64> {
    let evals = hermitian_eigenvalues(h, tol)?;
    Ok(evals.iter().map(|l| l.abs()).sum())
}

/// Orthonormalize the columns of `a` by modified Gram-Schmidt (two passes).
/// Errors if the columns are numerically rank deficient.
pub fn orthonormalize_columns(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let mut cols: Vec<Vec<Complex64>> = (0..a.cols()).map(|j| a.column(j)).collect();
    mgs_columns(&mut cols)?;
    Ok(from_columns(a.rows(), &cols))
}

/// In-place modified Gram-Schmidt over a set of column vectors.
pub(crate) fn mgs_columns(cols: &mut [Vec<Complex64>]) -> Result<()> {
    let ncols = cols.len();
    for j in 0..ncols {
        for _pass in 0..2 {
            for i in 0..j {
                let proj = dot_conj(&cols[i], &cols[j]);
                for k in 0..cols[j].len() {
                    let corr = proj * cols[i][k];
                    cols[j][k] -= corr;
                }
            }
        }
        let norm = norm(&cols[j]);
        if norm < 1e-12 {
            return Err(Error::Argument(
                "columns are numerically rank deficient; cannot orthonormalize".into(),
            ));
        }
        let inv = 1.0 / norm;
        for z in cols[j].iter_mut() {
            *z = z.scale(inv);
        }
    }
    Ok(())
}

pub(crate) fn dot_conj(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// (X·Y + (X·Y)†)/2 — the Gram product made exactly Hermitian.
fn symmetrized_product(x: &ComplexMatrix, y: &ComplexMatrix) -> Result<ComplexMatrix> {
    let p = x.matmul(y)?;
    let n = p.rows();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(p.get(i, i).re, 0.0)
        } else {
            (p.get(i, j) + p.get(j, i).conj()).scale(0.5)
        }
    }))
}

fn clamped_roots(evals: &[f64]) -> Vec<f64> {
    evals
        .iter()
        .map(|&l| {
            let s = l.max(0.0).sqrt();
            if s < SINGULAR_VALUE_FLOOR {
                0.0
            } else {
                s
            }
        })
        .collect()
}

/// Left singular vectors u_i = A·v_i/σ_i for σ_i > 0; zero singular values
/// get columns completed to an orthonormal set from the standard basis.
fn recover_left_vectors(
    a: &ComplexMatrix,
    right: &ComplexMatrix,
    sigma: &[f64],
) -> Result<ComplexMatrix> {
    let rows = a.rows();
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(sigma.len());
    for (i, &s) in sigma.iter().enumerate() {
        if s > 0.0 {
            let av = a.matvec(&right.column(i))?;
            cols.push(av.iter().map(|z| z.scale(1.0 / s)).collect());
        } else {
            cols.push(vec![ZERO; rows]); // placeholder, filled below
        }
    }
    // Re-orthonormalize the nonzero columns (guards tight singular-value
    // clusters), then complete the zero ones.
    let nonzero = sigma.iter().filter(|&&s| s > 0.0).count();
    mgs_columns(&mut cols[..nonzero])?;
    for idx in nonzero..sigma.len() {
        let col = best_basis_completion(rows, &cols[..idx]);
        cols[idx] = col;
    }
    Ok(from_columns(rows, &cols))
}

/// Deterministically pick the standard basis vector with the largest residual
/// after orthogonalization against `existing`, and return it normalized.
fn best_basis_completion(rows: usize, existing: &[Vec<Complex64>]) -> Vec<Complex64> {
    let mut best: Option<(f64, Vec<Complex64>)> = None;
    for j in 0..rows {
        let mut cand = vec![ZERO; rows];
        cand[j] = Complex64::new(1.0, 0.0);
        for _pass in 0..2 {
            for col in existing {
                let proj = dot_conj(col, &cand);
                for k in 0..rows {
                    let corr = proj * col[k];
                    cand[k] -= corr;
                }
            }
        }
        let r = norm(&cand);
        if best.as_ref().is_none_or(|(b, _)| r > *b) {
            best = Some((r, cand));
        }
    }
    let (r, mut col) = best.expect("rows >= 1");
    let inv = 1.0 / r;
    for z in col.iter_mut() {
        *z = z.scale(inv);
    }
    col
}

fn from_columns(rows: usize, cols: &[Vec<Complex64>]) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols.len(), |i, j| cols[j][i])
}
