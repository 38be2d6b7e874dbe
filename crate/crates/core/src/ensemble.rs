//! Measurement ensembles, signals, the intensity map and its linearization.
//!
//! The intensity map `A(x)(n) = |⟨x, φ_n⟩|²` becomes linear after lifting
//! `x ↦ xx*`: `A(x) = 𝐀(xx*)` where `(𝐀H)(n) = ⟨H, φ_nφ_n*⟩_HS` is the super
//! analysis operator on the real `M²`-dimensional space of self-adjoint
//! matrices. Self-adjoint matrices are stored as [`HermitianCoords`] in the
//! orthonormal basis
//!
//! ```text
//! E_mm                    m = 0..M           (diagonal, first)
//! (E_jk + E_kj)/√2        j < k, lex order   (symmetric)
//! i(E_jk − E_kj)/√2       j < k, lex order   (antisymmetric, imaginary)
//! ```

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const SQRT_2: f64 = std::f64::consts::SQRT_2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Real => "real",
            Field::Complex => "complex",
        })
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(Field::Real),
            "complex" | "c" => Ok(Field::Complex),
            other => Err(Error::Parse(format!("unknown field '{other}'"))),
        }
    }
}

/// The `M × N` matrix whose columns are the measurement vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementEnsemble {
    field: Field,
    matrix: DMatrix<Complex64>,
}

impl MeasurementEnsemble {
    pub fn new(field: Field, matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.ncols() == 0 {
            return Err(Error::Shape(format!(
                "ensemble needs M >= 1 and N >= 1, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if !matrix.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if field == Field::Real && matrix.iter().any(|z| z.im != 0.0) {
            return Err(Error::FieldMismatch(
                "real ensemble has a nonzero imaginary part".into(),
            ));
        }
        Ok(Self { field, matrix })
    }

    pub fn real(matrix: &DMatrix<f64>) -> Result<Self> {
        Self::new(Field::Real, matrix.map(|x| Complex64::new(x, 0.0)))
    }

    pub fn complex(matrix: DMatrix<Complex64>) -> Result<Self> {
        Self::new(Field::Complex, matrix)
    }

    /// Builds a real ensemble from column vectors given as slices.
    pub fn from_real_columns(columns: &[&[f64]]) -> Result<Self> {
        let m = columns.first().map_or(0, |c| c.len());
        if let Some(bad) = columns.iter().find(|c| c.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: bad.len(),
            });
        }
        let data: Vec<f64> = columns.iter().flat_map(|c| c.iter().copied()).collect();
        Self::real(&DMatrix::from_column_slice(m, columns.len(), &data))
    }

    pub fn from_complex_columns(columns: &[Vec<Complex64>]) -> Result<Self> {
        let m = columns.first().map_or(0, |c| c.len());
        if let Some(bad) = columns.iter().find(|c| c.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: bad.len(),
            });
        }
        let data: Vec<Complex64> = columns.iter().flat_map(|c| c.iter().copied()).collect();
        Self::complex(DMatrix::from_column_slice(m, columns.len(), &data))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Ambient dimension.
    pub fn m(&self) -> usize {
        self.matrix.nrows()
    }

    /// Number of measurement vectors.
    pub fn n(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn column(&self, n: usize) -> DVector<Complex64> {
        self.matrix.column(n).into_owned()
    }

    /// Real parts; exact for real ensembles.
    pub fn real_matrix(&self) -> DMatrix<f64> {
        self.matrix.map(|z| z.re)
    }

    /// The same vectors regarded as elements of `C^M`.
    pub fn to_complex(&self) -> Self {
        Self {
            field: Field::Complex,
            matrix: self.matrix.clone(),
        }
    }

    pub fn scaled(&self, c: f64) -> Result<Self> {
        Self::new(self.field, self.matrix.map(|z| z * c))
    }

    /// Divides by the largest column norm (no-op for the zero ensemble).
    /// Rank decisions use this so that they see the same matrix up to
    /// rounding for every rescaling of the ensemble.
    pub fn normalized(&self) -> Self {
        let max = (0..self.n())
            .map(|c| self.matrix.column(c).norm())
            .fold(0.0, f64::max);
        if max == 0.0 {
            return self.clone();
        }
        Self {
            field: self.field,
            matrix: self.matrix.map(|z| z / max),
        }
    }

    pub fn select_columns(&self, indices: &[usize]) -> Result<Self> {
        Self::new(self.field, self.matrix.select_columns(indices))
    }

    pub fn column_norm_sq(&self, n: usize) -> f64 {
        self.matrix.column(n).norm_squared()
    }

    pub fn require_field(&self, field: Field, context: &str) -> Result<()> {
        if self.field != field {
            return Err(Error::FieldMismatch(format!(
                "{context} requires a {field} ensemble, got {}",
                self.field
            )));
        }
        Ok(())
    }

    /// Serializes to the JSON matrix format.
    pub fn to_json(&self) -> String {
        let file = MatrixFile {
            field: self.field,
            m: self.m(),
            n: self.n(),
            columns: (0..self.n())
                .map(|c| self.matrix.column(c).iter().map(|z| [z.re, z.im]).collect())
                .collect(),
        };
        serde_json::to_string(&file).expect("matrix file serialization cannot fail")
    }

    /// Parses the JSON matrix format and validates every invariant.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: MatrixFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        if file.columns.len() != file.n {
            return Err(Error::Parse(format!(
                "N = {} but {} columns given",
                file.n,
                file.columns.len()
            )));
        }
        if let Some((i, c)) = file.columns.iter().enumerate().find(|(_, c)| c.len() != file.m) {
            return Err(Error::Parse(format!(
                "column {i} has {} entries, expected M = {}",
                c.len(),
                file.m
            )));
        }
        if file.field == Field::Real && file.columns.iter().flatten().any(|e| e[1] != 0.0) {
            return Err(Error::Parse(
                "real ensemble has a nonzero imaginary part".into(),
            ));
        }
        let data: Vec<Complex64> = file
            .columns
            .iter()
            .flatten()
            .map(|e| Complex64::new(e[0], e[1]))
            .collect();
        Self::new(file.field, DMatrix::from_column_slice(file.m, file.n, &data))
            .map_err(|e| Error::Parse(e.to_string()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixFile {
    field: Field,
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    columns: Vec<Vec<[f64; 2]>>,
}

/// A vector in `F^M`, compared modulo a unimodular scalar.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal {
    field: Field,
    entries: DVector<Complex64>,
}

impl Signal {
    pub fn new(field: Field, entries: DVector<Complex64>) -> Result<Self> {
        if !entries.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        if field == Field::Real && entries.iter().any(|z| z.im != 0.0) {
            return Err(Error::FieldMismatch(
                "real signal has a nonzero imaginary part".into(),
            ));
        }
        Ok(Self { field, entries })
    }

    pub fn real(entries: &[f64]) -> Result<Self> {
        Self::new(
            Field::Real,
            DVector::from_iterator(entries.len(), entries.iter().map(|&x| Complex64::new(x, 0.0))),
        )
    }

    pub fn complex(entries: &[Complex64]) -> Result<Self> {
        Self::new(Field::Complex, DVector::from_column_slice(entries))
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &DVector<Complex64> {
        &self.entries
    }

    pub fn real_entries(&self) -> DVector<f64> {
        self.entries.map(|z| z.re)
    }

    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| *z == Complex64::new(0.0, 0.0))
    }

    pub fn to_complex(&self) -> Self {
        Self {
            field: Field::Complex,
            entries: self.entries.clone(),
        }
    }

    pub fn scaled(&self, c: Complex64) -> Result<Self> {
        let field = if c.im == 0.0 { self.field } else { Field::Complex };
        Self::new(field, self.entries.map(|z| z * c))
    }

    /// `x ≡ y` iff `y = c·x` with `|c| = 1` (`c = ±1` over the reals), to a
    /// relative tolerance of `1e-8·‖x‖`.
    pub fn equivalent(&self, other: &Signal) -> bool {
        if self.len() != other.len() {
            return false;
        }
        let (nx, ny) = (self.norm(), other.norm());
        let tol = 1e-8 * nx.max(ny);
        if nx == 0.0 || ny == 0.0 {
            return nx <= tol && ny <= tol;
        }
        let x = &self.entries;
        let y = &other.entries;
        if self.field == Field::Real && other.field == Field::Real {
            return (x - y).norm() <= tol || (x + y).norm() <= tol;
        }
        // ⟨y, x⟩ = x* y
        let overlap = x.dotc(y);
        if overlap.norm() == 0.0 {
            return false;
        }
        let phase = overlap / overlap.norm();
        (x * phase - y).norm() <= tol
    }
}

/// Self-adjoint `M × M` matrix in the fixed orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianCoords {
    m: usize,
    coords: DVector<f64>,
}

fn pair_count(m: usize) -> usize {
    m * m.saturating_sub(1) / 2
}

fn upper_pairs(m: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..m).flat_map(move |j| (j + 1..m).map(move |k| (j, k)))
}

impl HermitianCoords {
    pub fn new(m: usize, coords: DVector<f64>) -> Result<Self> {
        if coords.len() != m * m {
            return Err(Error::DimensionMismatch {
                expected: m * m,
                found: coords.len(),
            });
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { m, coords })
    }

    /// Coordinates of a self-adjoint matrix; rejects matrices whose
    /// anti-self-adjoint part exceeds `1e-12·max(1, ‖H‖_F)`.
    pub fn from_matrix(h: &DMatrix<Complex64>) -> Result<Self> {
        if !h.is_square() {
            return Err(Error::Shape(format!(
                "self-adjoint matrix must be square, got {}x{}",
                h.nrows(),
                h.ncols()
            )));
        }
        if !h.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let skew = (h - h.adjoint()).norm();
        if skew > 1e-12 * h.norm().max(1.0) {
            return Err(Error::BadParam(format!(
                "matrix is not self-adjoint (‖H − H*‖ = {skew:e})"
            )));
        }
        Ok(Self::from_matrix_unchecked(h))
    }

    fn from_matrix_unchecked(h: &DMatrix<Complex64>) -> Self {
        let m = h.nrows();
        let p = pair_count(m);
        let mut coords = DVector::zeros(m * m);
        for i in 0..m {
            coords[i] = h[(i, i)].re;
        }
        for (idx, (j, k)) in upper_pairs(m).enumerate() {
            // average the two triangles so tiny asymmetry is projected away
            let z = (h[(j, k)] + h[(k, j)].conj()) * 0.5;
            coords[m + idx] = SQRT_2 * z.re;
            coords[m + p + idx] = SQRT_2 * z.im;
        }
        Self { m, coords }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn coords(&self) -> &DVector<f64> {
        &self.coords
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let m = self.m;
        let p = pair_count(m);
        let mut h = DMatrix::zeros(m, m);
        for i in 0..m {
            h[(i, i)] = Complex64::new(self.coords[i], 0.0);
        }
        for (idx, (j, k)) in upper_pairs(m).enumerate() {
            let z = Complex64::new(self.coords[m + idx], self.coords[m + p + idx]) / SQRT_2;
            h[(j, k)] = z;
            h[(k, j)] = z.conj();
        }
        h
    }

    /// Equals the Frobenius norm of the matrix.
    pub fn norm(&self) -> f64 {
        self.coords.norm()
    }
}

/// `N × M²` real matrix of `H ↦ (⟨H, φ_nφ_n*⟩)_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperAnalysisMatrix {
    m: usize,
    entries: DMatrix<f64>,
}

impl SuperAnalysisMatrix {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.entries.nrows()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn apply(&self, h: &HermitianCoords) -> Result<DVector<f64>> {
        if h.m != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: h.m,
            });
        }
        Ok(&self.entries * &h.coords)
    }
}

fn check_signal(phi: &MeasurementEnsemble, x: &Signal) -> Result<()> {
    if x.len() != phi.m() {
        return Err(Error::DimensionMismatch {
            expected: phi.m(),
            found: x.len(),
        });
    }
    if x.field() != phi.field() {
        return Err(Error::FieldMismatch(format!(
            "{} signal against a {} ensemble",
            x.field(),
            phi.field()
        )));
    }
    Ok(())
}

/// `A(x)(n) = |⟨x, φ_n⟩|²`.
pub fn intensity_map(phi: &MeasurementEnsemble, x: &Signal) -> Result<DVector<f64>> {
    check_signal(phi, x)?;
    // φ_n* x for every n at once
    let coeffs = phi.matrix().adjoint() * x.entries();
    Ok(coeffs.map(|z| z.norm_sqr()))
}

/// `x ↦ xx*`.
pub fn lift_rank_one(x: &Signal) -> Result<HermitianCoords> {
    let v = x.entries();
    Ok(HermitianCoords::from_matrix_unchecked(&(v * v.adjoint())))
}

/// The super analysis operator of the ensemble: row `n` holds the coordinates
/// of `φ_nφ_n*`, so that row · coords(H) = `⟨H, φ_nφ_n*⟩_HS`.
pub fn super_analysis_operator(phi: &MeasurementEnsemble) -> SuperAnalysisMatrix {
    let m = phi.m();
    let mut entries = DMatrix::zeros(phi.n(), m * m);
    for n in 0..phi.n() {
        let col = phi.column(n);
        let lifted = HermitianCoords::from_matrix_unchecked(&(&col * col.adjoint()));
        entries.row_mut(n).copy_from(&lifted.coords.transpose());
    }
    SuperAnalysisMatrix { m, entries }
}

/// The operator restricted to real symmetric matrices: the diagonal and
/// symmetric coordinates only (`N × M(M+1)/2`).
pub fn super_analysis_operator_symmetric(phi: &MeasurementEnsemble) -> DMatrix<f64> {
    let full = super_analysis_operator(phi);
    let m = phi.m();
    let keep = m + pair_count(m);
    full.entries.columns(0, keep).into_owned()
}

/// The vectors `φ_nφ_n*u` written in `R^{2M}` as `(Re, Im)`.
pub fn real_lift_vectors(phi: &MeasurementEnsemble, u: &Signal) -> Result<Vec<DVector<f64>>> {
    if u.len() != phi.m() {
        return Err(Error::DimensionMismatch {
            expected: phi.m(),
            found: u.len(),
        });
    }
    if u.is_zero() {
        return Err(Error::ZeroVector);
    }
    let m = phi.m();
    Ok((0..phi.n())
        .map(|n| {
            let col = phi.column(n);
            let w = &col * col.dotc(u.entries());
            DVector::from_iterator(2 * m, w.iter().map(|z| z.re).chain(w.iter().map(|z| z.im)))
        })
        .collect())
}

/// The lifted vectors stacked as rows of an `N × 2M` real matrix.
pub fn real_lift_matrix(phi: &MeasurementEnsemble, u: &Signal) -> Result<DMatrix<f64>> {
    let rows = real_lift_vectors(phi, u)?;
    let mut out = DMatrix::zeros(rows.len(), 2 * phi.m());
    for (i, r) in rows.iter().enumerate() {
        out.row_mut(i).copy_from(&r.transpose());
    }
    Ok(out)
}

/// Real embedding `(Re v, Im v)` of a complex vector.
pub fn realify(v: &DVector<Complex64>) -> DVector<f64> {
    DVector::from_iterator(2 * v.len(), v.iter().map(|z| z.re).chain(v.iter().map(|z| z.im)))
}

/// Inverse of [`realify`].
pub fn complexify(v: &DVector<f64>) -> DVector<Complex64> {
    let m = v.len() / 2;
    DVector::from_iterator(m, (0..m).map(|k| Complex64::new(v[k], v[m + k])))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn triple_complex() -> MeasurementEnsemble {
        MeasurementEnsemble::from_real_columns(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]])
            .unwrap()
            .to_complex()
    }

    #[test]
    fn conjugate_signals_collide_on_real_vectors() {
        let phi = triple_complex();
        let x = Signal::complex(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let y = Signal::complex(&[c(1.0, 0.0), c(0.0, -1.0)]).unwrap();
        let ax = intensity_map(&phi, &x).unwrap();
        assert_eq!(ax.as_slice(), &[1.0, 1.0, 2.0]);
        assert_eq!(ax, intensity_map(&phi, &y).unwrap());
        assert!(!x.equivalent(&y));
    }

    #[test]
    fn zero_signal_has_zero_intensities() {
        let phi = triple_complex();
        let x = Signal::complex(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(intensity_map(&phi, &x).unwrap().as_slice(), &[0.0; 3]);
    }

    #[test]
    fn coordinate_squares() {
        let phi = MeasurementEnsemble::real(&DMatrix::identity(2, 2)).unwrap();
        let x = Signal::real(&[3.0, -4.0]).unwrap();
        assert_eq!(intensity_map(&phi, &x).unwrap().as_slice(), &[9.0, 16.0]);
    }

    #[test]
    fn intensity_map_checks_field_and_length() {
        let phi = MeasurementEnsemble::real(&DMatrix::identity(2, 2)).unwrap();
        let x = Signal::complex(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert!(matches!(intensity_map(&phi, &x), Err(Error::FieldMismatch(_))));
        let short = Signal::real(&[1.0]).unwrap();
        assert!(matches!(
            intensity_map(&phi, &short),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn lift_examples() {
        let e1 = Signal::complex(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(lift_rank_one(&e1).unwrap().coords().as_slice(), &[1.0, 0.0, 0.0, 0.0]);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let x = Signal::real(&[s, s]).unwrap();
        let h = lift_rank_one(&x).unwrap().to_matrix();
        for z in h.iter() {
            assert!((z - c(0.5, 0.0)).norm() < 1e-15);
        }

        let x = Signal::complex(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        let h = lift_rank_one(&x).unwrap().to_matrix();
        let expected = DMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, -1.0), c(0.0, 1.0), c(1.0, 0.0)]);
        assert!((h - expected).norm() < 1e-15);
    }

    #[test]
    fn super_analysis_of_single_basis_vector() {
        let phi = MeasurementEnsemble::from_real_columns(&[&[1.0, 0.0]]).unwrap().to_complex();
        let a = super_analysis_operator(&phi);
        assert_eq!(a.entries().as_slice(), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn super_analysis_of_four_vectors_in_c2_is_nonsingular() {
        let phi = MeasurementEnsemble::from_complex_columns(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 1.0)],
        ])
        .unwrap();
        let a = super_analysis_operator(&phi);
        // In coordinates (h11, h22, √2 Re h12, √2 Im h12), φφ* rows are
        // (1,0,0,0), (0,1,0,0), (1,1,√2,0), (1,1,0,−√2): det = −2.
        assert!((a.entries().determinant() + 2.0).abs() < 1e-12);
        let zero = HermitianCoords::new(2, DVector::zeros(4)).unwrap();
        assert_eq!(a.apply(&zero).unwrap().as_slice(), &[0.0; 4]);
    }

    #[test]
    fn real_lift_examples() {
        let phi = MeasurementEnsemble::from_complex_columns(&[vec![c(1.0, 0.0)]]).unwrap();
        let u = Signal::complex(&[c(1.0, 0.0)]).unwrap();
        assert_eq!(real_lift_vectors(&phi, &u).unwrap()[0].as_slice(), &[1.0, 0.0]);

        let phi = MeasurementEnsemble::from_complex_columns(&[vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let u = Signal::complex(&[c(1.0, 0.0), c(0.0, 1.0)]).unwrap();
        assert_eq!(
            real_lift_vectors(&phi, &u).unwrap()[0].as_slice(),
            &[1.0, 0.0, 0.0, 0.0]
        );

        let zero = Signal::complex(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(real_lift_vectors(&phi, &zero), Err(Error::ZeroVector));
    }

    #[test]
    fn equivalence_modulo_sign_and_phase() {
        let x = Signal::real(&[1.0, -2.0]).unwrap();
        let y = Signal::real(&[-1.0, 2.0]).unwrap();
        assert!(x.equivalent(&y));
        assert!(!x.equivalent(&Signal::real(&[1.0, 2.0]).unwrap()));

        let z = Signal::complex(&[c(1.0, 1.0), c(0.0, 2.0)]).unwrap();
        let rotated = z.scaled(Complex64::from_polar(1.0, 0.7)).unwrap();
        assert!(z.equivalent(&rotated));
        assert!(!z.equivalent(&z.scaled(c(2.0, 0.0)).unwrap()));

        let zero = Signal::real(&[0.0, 0.0]).unwrap();
        assert!(zero.equivalent(&zero));
        assert!(!zero.equivalent(&x));
    }

    #[test]
    fn json_format_round_trip_and_validation() {
        let phi = triple_complex();
        let text = phi.to_json();
        assert!(text.starts_with(r#"{"field":"complex","M":2,"N":3,"columns":[[[1.0,0.0],"#));
        assert_eq!(MeasurementEnsemble::from_json(&text).unwrap(), phi);

        let bad_im = r#"{"field":"real","M":1,"N":1,"columns":[[[1.0,0.5]]]}"#;
        assert!(matches!(MeasurementEnsemble::from_json(bad_im), Err(Error::Parse(_))));
        let bad_n = r#"{"field":"real","M":1,"N":2,"columns":[[[1.0,0.0]]]}"#;
        assert!(matches!(MeasurementEnsemble::from_json(bad_n), Err(Error::Parse(_))));
        let bad_m = r#"{"field":"complex","M":2,"N":1,"columns":[[[1.0,0.0]]]}"#;
        assert!(matches!(MeasurementEnsemble::from_json(bad_m), Err(Error::Parse(_))));
        assert!(matches!(MeasurementEnsemble::from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn hermitian_coords_reject_non_self_adjoint() {
        let mut h = DMatrix::from_element(2, 2, c(0.0, 0.0));
        h[(0, 1)] = c(1.0, 0.0);
        assert!(HermitianCoords::from_matrix(&h).is_err());
    }
}
