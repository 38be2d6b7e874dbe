//! Explicit and random measurement ensembles.

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::ensemble::{Field, MeasurementEnsemble};
use crate::{Error, Result};

/// Golden ratio; the default offset of the second circle.
pub const GOLDEN_RATIO: f64 = 1.618_033_988_749_895;

#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Vandermonde { bases: Vec<f64> },
    HarmonicDft,
    BodmannHammen { circle_param: f64 },
    Eq1Fixture,
    GaussianRandom { field: Field, seed: u64 },
}

/// A named construction together with its size.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilySpec {
    pub family: Family,
    pub m: usize,
    pub n: usize,
}

impl FamilySpec {
    pub fn validate(&self) -> Result<()> {
        let (m, n) = (self.m, self.n);
        let expect_n = |want: usize, what: &str| {
            if n == want {
                Ok(())
            } else {
                Err(Error::Shape(format!("{what} forces N = {want}, got N = {n}")))
            }
        };
        match &self.family {
            Family::Vandermonde { bases } => {
                if bases.len() != n {
                    return Err(Error::Shape(format!(
                        "{} bases given for N = {n}",
                        bases.len()
                    )));
                }
                check_distinct(bases)
            }
            Family::HarmonicDft => expect_n(2 * m - 1, "the harmonic DFT frame"),
            Family::BodmannHammen { .. } => expect_n(4 * m - 2, "the two-circle ensemble"),
            Family::Eq1Fixture => {
                if (m, n) == (3, 8) {
                    Ok(())
                } else {
                    Err(Error::Shape(format!("the fixture is 3x8, got {m}x{n}")))
                }
            }
            Family::GaussianRandom { .. } => {
                if m >= 1 && n >= 1 {
                    Ok(())
                } else {
                    Err(Error::Shape("gaussian ensembles need M, N >= 1".into()))
                }
            }
        }
    }

    pub fn build(&self) -> Result<MeasurementEnsemble> {
        self.validate()?;
        match &self.family {
            Family::Vandermonde { bases } => vandermonde(self.m, bases),
            Family::HarmonicDft => harmonic_dft(self.m),
            Family::BodmannHammen { circle_param } => bodmann_hammen(self.m, *circle_param),
            Family::Eq1Fixture => Ok(eq1_fixture()),
            Family::GaussianRandom { field, seed } => Ok(gaussian_random(*field, self.m, self.n, *seed)),
        }
    }
}

fn check_distinct(bases: &[f64]) -> Result<()> {
    if let Some(b) = bases.iter().find(|b| !b.is_finite()) {
        return Err(Error::BadParam(format!("base {b} is not finite")));
    }
    for (i, a) in bases.iter().enumerate() {
        if bases[..i].contains(a) {
            return Err(Error::DuplicateBases(*a));
        }
    }
    Ok(())
}

fn complex_vandermonde(m: usize, nodes: &[Complex64]) -> DMatrix<Complex64> {
    DMatrix::from_fn(m, nodes.len(), |row, col| nodes[col].powu(row as u32))
}

/// Column `n` is `(1, b_n, b_n², …, b_n^{M−1})`; full spark for distinct bases.
pub fn vandermonde(m: usize, bases: &[f64]) -> Result<MeasurementEnsemble> {
    if m == 0 || bases.len() < m {
        return Err(Error::Shape(format!(
            "vandermonde needs N >= M >= 1, got M = {m}, N = {}",
            bases.len()
        )));
    }
    check_distinct(bases)?;
    MeasurementEnsemble::real(&DMatrix::from_fn(m, bases.len(), |row, col| {
        bases[col].powi(row as i32)
    }))
}

/// First `M` rows of the `(2M−1)`-point DFT, unnormalized, with
/// `ω = exp(2πi/(2M−1))`.
pub fn harmonic_dft(m: usize) -> Result<MeasurementEnsemble> {
    if m < 2 {
        return Err(Error::Shape(format!("harmonic DFT frame needs M >= 2, got {m}")));
    }
    MeasurementEnsemble::complex(complex_vandermonde(m, &roots_of_unity(2 * m - 1)))
}

fn roots_of_unity(k: usize) -> Vec<Complex64> {
    (0..k)
        .map(|j| Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / k as f64))
        .collect()
}

/// `4M − 2` vectors: the harmonic DFT frame followed by Vandermonde columns
/// at `2M − 1` equally spaced points of a second circle.
///
/// The second circle is the image of the real line under the Cayley-type map
/// `t ↦ p + (t − i)/(t + i)`, i.e. the unit-radius circle centred at
/// `p = circle_param`. It meets the unit circle in two points when
/// `0 < |p| < 2`; `p = 0` reproduces the unit circle and is rejected.
pub fn bodmann_hammen(m: usize, circle_param: f64) -> Result<MeasurementEnsemble> {
    if !circle_param.is_finite() || circle_param == 0.0 {
        return Err(Error::BadParam(format!(
            "circle parameter must be finite and nonzero, got {circle_param}"
        )));
    }
    let first = harmonic_dft(m)?;
    let nodes: Vec<Complex64> = roots_of_unity(2 * m - 1)
        .into_iter()
        .map(|z| z + circle_param)
        .collect();
    let second = complex_vandermonde(m, &nodes);
    let mut all = DMatrix::zeros(m, 4 * m - 2);
    all.columns_mut(0, 2 * m - 1).copy_from(first.matrix());
    all.columns_mut(2 * m - 1, 2 * m - 1).copy_from(&second);
    MeasurementEnsemble::complex(all)
}

/// The 3 × 8 complex ensemble whose super analysis operator has a
/// one-dimensional null space spanned by a nonsingular matrix.
pub fn eq1_fixture() -> MeasurementEnsemble {
    let r = |x: f64| Complex64::new(x, 0.0);
    let i = |x: f64| Complex64::new(0.0, x);
    #[rustfmt::skip]
    let rows = [
        [r(2.0),  r(1.0), r(1.0),  r(0.0), r(0.0),  r(0.0),  r(1.0),  i(1.0)],
        [r(-1.0), r(0.0), r(0.0),  r(1.0), r(1.0),  r(-1.0), r(-2.0), r(2.0)],
        [r(0.0),  r(1.0), r(-1.0), r(1.0), r(-1.0), i(2.0),  i(1.0),  r(-1.0)],
    ];
    let matrix = DMatrix::from_fn(3, 8, |row, col| rows[row][col]);
    MeasurementEnsemble::complex(matrix).expect("fixture is a valid ensemble")
}

/// I.i.d. standard normal entries (independent real and imaginary parts
/// for complex ensembles), filled column by column from a ChaCha8 stream.
pub fn gaussian_random(field: Field, m: usize, n: usize, seed: u64) -> MeasurementEnsemble {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gaussian_from_rng(field, m, n, &mut rng)
}

pub(crate) fn gaussian_from_rng(field: Field, m: usize, n: usize, rng: &mut ChaCha8Rng) -> MeasurementEnsemble {
    let mut data = Vec::with_capacity(m * n);
    for _ in 0..m * n {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = match field {
            Field::Real => 0.0,
            Field::Complex => StandardNormal.sample(rng),
        };
        data.push(Complex64::new(re, im));
    }
    MeasurementEnsemble::new(field, DMatrix::from_column_slice(m, n, &data))
        .expect("gaussian entries are finite")
}
