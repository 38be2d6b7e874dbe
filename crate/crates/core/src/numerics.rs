//! Tolerance-aware dense linear algebra shared by every certifier.
//!
//! Rank is decided from singular values against the scale-relative threshold
//! `τ(B) = max(rel_rank_tol · σ_max(B), abs_floor)`, so every verdict built on
//! top of it is unchanged when the ensemble is multiplied by a nonzero scalar.

use nalgebra::{ComplexField, DMatrix, DVector};

use crate::{Error, Result};

/// Threshold policy for numerical rank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceConfig {
    pub rel_rank_tol: f64,
    pub abs_floor: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            rel_rank_tol: 1e-10,
            abs_floor: 1e-14,
        }
    }
}

impl ToleranceConfig {
    pub fn new(rel_rank_tol: f64, abs_floor: f64) -> Result<Self> {
        if !(rel_rank_tol > 0.0 && rel_rank_tol.is_finite()) {
            return Err(Error::BadParam(format!(
                "rel_rank_tol must be positive, got {rel_rank_tol}"
            )));
        }
        if !(abs_floor > 0.0 && abs_floor.is_finite()) {
            return Err(Error::BadParam(format!(
                "abs_floor must be positive, got {abs_floor}"
            )));
        }
        Ok(Self {
            rel_rank_tol,
            abs_floor,
        })
    }

    /// `τ = max(rel · σ_max, floor)`.
    pub fn threshold(&self, sigma_max: f64) -> f64 {
        (self.rel_rank_tol * sigma_max).max(self.abs_floor)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankResult {
    pub rank: usize,
    /// Nonincreasing.
    pub singular_values: Vec<f64>,
    pub threshold_used: f64,
}

/// Orthonormal basis of a real null space.
#[derive(Debug, Clone)]
pub struct NullSpaceBasis {
    pub dimension: usize,
    pub basis_vectors: Vec<DVector<f64>>,
}

impl NullSpaceBasis {
    /// Basis vectors as the columns of a matrix (`cols × dimension`).
    pub fn as_matrix(&self, ambient: usize) -> DMatrix<f64> {
        if self.basis_vectors.is_empty() {
            return DMatrix::zeros(ambient, 0);
        }
        DMatrix::from_columns(&self.basis_vectors)
    }
}

fn check_finite<T: ComplexField<RealField = f64>>(matrix: &DMatrix<T>) -> Result<()> {
    if matrix.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

fn check_nonempty<T>(matrix: &DMatrix<T>) -> Result<()> {
    if matrix.nrows() == 0 || matrix.ncols() == 0 {
        return Err(Error::Shape(format!(
            "matrix must be nonempty, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    Ok(())
}

/// Singular values in nonincreasing order.
pub fn singular_values<T: ComplexField<RealField = f64>>(matrix: &DMatrix<T>) -> Vec<f64> {
    let mut sv: Vec<f64> = matrix.singular_values().iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    sv
}

/// Numerical rank of a real or complex matrix.
pub fn rank_of<T: ComplexField<RealField = f64>>(
    matrix: &DMatrix<T>,
    tol: &ToleranceConfig,
) -> Result<RankResult> {
    check_nonempty(matrix)?;
    check_finite(matrix)?;
    let singular_values = singular_values(matrix);
    let threshold_used = tol.threshold(singular_values.first().copied().unwrap_or(0.0));
    let rank = singular_values
        .iter()
        .take_while(|&&s| s >= threshold_used)
        .count();
    Ok(RankResult {
        rank,
        singular_values,
        threshold_used,
    })
}

/// Orthonormal basis for the null space of a real matrix.
pub fn null_space_of(matrix: &DMatrix<f64>, tol: &ToleranceConfig) -> Result<NullSpaceBasis> {
    check_nonempty(matrix)?;
    check_finite(matrix)?;
    let (rows, cols) = matrix.shape();
    // The thin SVD only yields min(rows, cols) right singular vectors; zero
    // rows leave the row space untouched and make V square.
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(matrix);
        p
    } else {
        matrix.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors were requested");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let threshold = tol.threshold(sigma_max);

    let basis_vectors: Vec<DVector<f64>> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s < threshold)
        .map(|(i, _)| {
            let v = v_t.row(i).transpose();
            let n = v.norm();
            v / n
        })
        .collect();
    Ok(NullSpaceBasis {
        dimension: basis_vectors.len(),
        basis_vectors,
    })
}

/// True iff the vectors span `F^dim`.
pub fn spans_space<T: ComplexField<RealField = f64>>(
    columns: &[DVector<T>],
    dim: usize,
    tol: &ToleranceConfig,
) -> Result<bool> {
    if let Some(bad) = columns.iter().find(|c| c.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.len(),
        });
    }
    if columns.len() < dim || dim == 0 {
        return Ok(dim == 0);
    }
    let matrix = DMatrix::from_columns(columns);
    Ok(rank_of(&matrix, tol)?.rank == dim)
}

/// Whether the columns of `matrix` span its column space `F^rows`.
pub(crate) fn columns_span<T: ComplexField<RealField = f64>>(
    matrix: &DMatrix<T>,
    tol: &ToleranceConfig,
) -> Result<bool> {
    if matrix.ncols() < matrix.nrows() {
        return Ok(false);
    }
    Ok(rank_of(matrix, tol)?.rank == matrix.nrows())
}

/// Rank that treats a matrix with no columns as rank 0.
pub(crate) fn rank_or_zero<T: ComplexField<RealField = f64>>(
    matrix: &DMatrix<T>,
    tol: &ToleranceConfig,
) -> Result<usize> {
    if matrix.ncols() == 0 || matrix.nrows() == 0 {
        return Ok(0);
    }
    Ok(rank_of(matrix, tol)?.rank)
}

/// Orthonormal basis (as columns) of the orthogonal complement of the span
/// of the columns of a real `dim × k` matrix.
pub fn orthogonal_complement(columns: &DMatrix<f64>, tol: &ToleranceConfig) -> Result<DMatrix<f64>> {
    let dim = columns.nrows();
    if columns.ncols() == 0 {
        return Ok(DMatrix::identity(dim, dim));
    }
    let basis = null_space_of(&columns.transpose(), tol)?;
    Ok(basis.as_matrix(dim))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    #[test]
    fn identity_has_full_rank() {
        let r = rank_of(&DMatrix::<f64>::identity(2, 2), &tol()).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.singular_values, vec![1.0, 1.0]);
    }

    #[test]
    fn three_columns_span_the_plane() {
        let m = DMatrix::from_column_slice(2, 3, &[1.0, 0.0, 0.0, 1.0, 1.0, 1.0]);
        assert_eq!(rank_of(&m, &tol()).unwrap().rank, 2);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let r = rank_of(&DMatrix::<f64>::zeros(3, 5), &tol()).unwrap();
        assert_eq!(r.rank, 0);
        assert_eq!(r.threshold_used, 1e-14);
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let mut m = DMatrix::<f64>::identity(2, 2);
        m[(0, 1)] = f64::NAN;
        assert_eq!(rank_of(&m, &tol()), Err(Error::NonFinite));
        m[(0, 1)] = f64::INFINITY;
        assert!(matches!(null_space_of(&m, &tol()), Err(Error::NonFinite)));
    }

    #[test]
    fn empty_matrix_is_a_shape_error() {
        assert!(matches!(
            rank_of(&DMatrix::<f64>::zeros(0, 3), &tol()),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn complex_rank() {
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        // second column is i times the first
        let m = DMatrix::from_column_slice(2, 2, &[one, i, i, -one]);
        assert_eq!(rank_of(&m, &tol()).unwrap().rank, 1);
    }

    #[test]
    fn null_space_of_identity_is_trivial() {
        let n = null_space_of(&DMatrix::identity(2, 2), &tol()).unwrap();
        assert_eq!(n.dimension, 0);
    }

    #[test]
    fn null_space_of_difference_row() {
        let m = DMatrix::from_row_slice(1, 2, &[1.0, -1.0]);
        let n = null_space_of(&m, &tol()).unwrap();
        assert_eq!(n.dimension, 1);
        let v = &n.basis_vectors[0];
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((v[0].abs() - s).abs() < 1e-12 && (v[1].abs() - s).abs() < 1e-12);
        assert!((v[0] - v[1]).abs() < 1e-12);
    }

    #[test]
    fn null_space_of_nonsingular_four_by_four() {
        // Elimination: rows 3 and 4 reduce to (0,0,2,0) and (0,0,0,-2), so the
        // matrix is triangular after two steps with det = 1*1*2*(-2) = -4.
        let m = DMatrix::from_row_slice(
            4,
            4,
            &[
                1.0, 0.0, 0.0, 0.0, //
                0.0, 1.0, 0.0, 0.0, //
                1.0, 1.0, 2.0, 0.0, //
                1.0, 1.0, 0.0, -2.0,
            ],
        );
        let mut reduced = m.clone();
        for r in 2..4 {
            let (a, b) = (reduced[(r, 0)], reduced[(r, 1)]);
            for c in 0..4 {
                reduced[(r, c)] -= a * m[(0, c)] + b * m[(1, c)];
            }
        }
        let det_by_elimination: f64 = (0..4).map(|k| reduced[(k, k)]).product();
        assert_eq!(det_by_elimination, -4.0);
        assert_eq!(null_space_of(&m, &tol()).unwrap().dimension, 0);
    }

    #[test]
    fn spans_space_examples() {
        let v = |a: f64, b: f64| DVector::from_vec(vec![a, b]);
        assert!(spans_space(&[v(1.0, 0.0), v(0.0, 1.0)], 2, &tol()).unwrap());
        assert!(!spans_space(&[v(1.0, 0.0)], 2, &tol()).unwrap());
        assert!(!spans_space(&[v(1.0, 1.0), v(2.0, 2.0), v(3.0, 3.0)], 2, &tol()).unwrap());
        assert!(matches!(
            spans_space(&[v(1.0, 0.0), DVector::from_vec(vec![1.0])], 2, &tol()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn orthogonal_complement_of_nothing_is_everything() {
        let c = orthogonal_complement(&DMatrix::zeros(3, 0), &tol()).unwrap();
        assert_eq!(c, DMatrix::identity(3, 3));
        let e1 = DMatrix::from_column_slice(2, 1, &[1.0, 0.0]);
        let c = orthogonal_complement(&e1, &tol()).unwrap();
        assert_eq!(c.ncols(), 1);
        assert!(c[(0, 0)].abs() < 1e-15 && (c[(1, 0)].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn tolerance_rejects_nonpositive_values() {
        assert!(ToleranceConfig::new(0.0, 1e-14).is_err());
        assert!(ToleranceConfig::new(1e-10, -1.0).is_err());
        assert!(ToleranceConfig::new(1e-9, 1e-12).is_ok());
    }
}
