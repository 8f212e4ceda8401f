//! Dense kernels with an explicit tolerance contract: SVD-based nullspaces,
//! orthogonal projection, and a symmetric spectrum.

use nalgebra::{DMatrix, DVector, SymmetricEigen, SVD};

use crate::error::{Error, Result};

pub const DEFAULT_REL_TOL: f64 = 1e-9;

/// Orthonormal basis of a subspace of `R^n`, stored as the columns of an
/// `n x k` matrix, together with the absolute singular-value cutoff that
/// produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct TolerancedBasis {
    pub columns: DMatrix<f64>,
    pub rank_tol: f64,
}

impl TolerancedBasis {
    pub fn dim(&self) -> usize {
        self.columns.ncols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.columns.nrows()
    }

    pub fn full(n: usize) -> Self {
        TolerancedBasis {
            columns: DMatrix::identity(n, n),
            rank_tol: 0.0,
        }
    }

    pub fn column(&self, i: usize) -> DVector<f64> {
        self.columns.column(i).into_owned()
    }
}

/// Orthonormal basis of `{x : |Ax| <= s_max * rel_tol * |x|}`.
///
/// The returned basis is canonical for the subspace (up to round-off): it is
/// a pivoted Gram-Schmidt of the projector's columns, so it does not depend
/// on which orthonormal basis the SVD happened to return.
pub fn nullspace_basis(a: &DMatrix<f64>, rel_tol: f64) -> Result<TolerancedBasis> {
    if a.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteEntry);
    }
    let n = a.ncols();
    if a.nrows() == 0 || a.iter().all(|&x| x == 0.0) {
        return Ok(TolerancedBasis::full(n));
    }

    // Zero rows leave the kernel unchanged and make the thin SVD return a
    // full n x n right factor.
    let padded = if a.nrows() < n {
        let mut p = DMatrix::zeros(n, n);
        p.view_mut((0, 0), a.shape()).copy_from(a);
        p
    } else {
        a.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sigma_max = svd.singular_values.max();
    let cutoff = sigma_max * rel_tol;

    let kernel_rows: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|&(_, &s)| s <= cutoff)
        .map(|(i, _)| i)
        .collect();
    let mut raw = DMatrix::zeros(n, kernel_rows.len());
    for (j, &i) in kernel_rows.iter().enumerate() {
        raw.set_column(j, &v_t.row(i).transpose());
    }
    Ok(TolerancedBasis {
        columns: canonical_basis(&raw),
        rank_tol: cutoff,
    })
}

/// Re-expresses the span of orthonormal `basis` columns in a form that only
/// depends on the subspace.
fn canonical_basis(basis: &DMatrix<f64>) -> DMatrix<f64> {
    let (n, k) = basis.shape();
    if k == 0 {
        return basis.clone();
    }
    if k == n {
        return DMatrix::identity(n, n);
    }
    let projector = basis * basis.transpose();
    let mut out: Vec<DVector<f64>> = Vec::with_capacity(k);
    let mut used = vec![false; n];
    for _ in 0..k {
        let residuals: Vec<Option<DVector<f64>>> = (0..n)
            .map(|j| (!used[j]).then(|| orthogonalize(projector.column(j).into_owned(), &out)))
            .collect();
        let best = residuals
            .iter()
            .flatten()
            .map(|r| r.norm())
            .fold(0.0_f64, f64::max);
        // First column within round-off of the largest residual.
        let pick = (0..n)
            .find(|&j| matches!(&residuals[j], Some(r) if r.norm() >= best * (1.0 - 1e-9)))
            .expect("projector of rank k has k independent columns");
        used[pick] = true;
        let r = residuals[pick].clone().expect("picked column is unused");
        out.push(&r / r.norm());
    }
    DMatrix::from_columns(&out)
}

fn orthogonalize(mut v: DVector<f64>, against: &[DVector<f64>]) -> DVector<f64> {
    for _ in 0..2 {
        for q in against {
            let c = q.dot(&v);
            v.axpy(-c, q, 1.0);
        }
    }
    v
}

/// Orthogonal projection `B (B^T x)`.
pub fn project_onto(basis: &TolerancedBasis, x: &DVector<f64>) -> Result<DVector<f64>> {
    if x.len() != basis.ambient_dim() {
        return Err(Error::DimensionMismatch {
            context: "projection".into(),
            expected: basis.ambient_dim(),
            actual: x.len(),
        });
    }
    let coeffs = basis.columns.tr_mul(x);
    Ok(&basis.columns * coeffs)
}

/// Eigenvalues of a symmetric matrix, ascending.
pub fn symmetric_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    if m.is_empty() {
        return Vec::new();
    }
    let mut values: Vec<f64> = SymmetricEigen::new(m.clone())
        .eigenvalues
        .iter()
        .copied()
        .collect();
    values.sort_by(f64::total_cmp);
    values
}
