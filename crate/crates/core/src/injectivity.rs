//! Certifiers for injectivity of the intensity map modulo global phase.
//!
//! * Real case: exact, via the complement property (every bipartition has a
//!   spanning side), and the full spark sufficient condition.
//! * Complex `M = 2`: injective iff the super analysis operator has rank 4.
//! * Complex `M = 3`: the HMW test on the null space of the super analysis
//!   operator.
//! * Complex `M ≥ 4`: only necessary conditions are available, so the general
//!   dispatcher may answer [`Verdict::Inconclusive`].

use std::fmt;

use itertools::Itertools;
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use crate::ensemble::{
    intensity_map, real_lift_matrix, realify, super_analysis_operator, Field, HermitianCoords,
    MeasurementEnsemble, Signal,
};
use crate::numerics::{
    columns_span, null_space_of, orthogonal_complement, rank_of, RankResult, ToleranceConfig,
};
use crate::subsets::{self, complement, first_failing_partition, mask_to_indices};
use crate::{Error, Result};

/// Enumeration limits; exceeding one is an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest N for bipartition enumeration (`2^(N-1)` representatives).
    pub max_subset_columns: usize,
    /// Largest number of `M × M` minors for the full spark test.
    pub max_minors: u128,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_subset_columns: subsets::DEFAULT_MAX_SUBSET_COLUMNS,
            max_minors: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Injective,
    NotInjective,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// The criterion that decided a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    ComplementProperty,
    OneDimensional,
    LiftedRank,
    HmwTrivialNullSpace,
    HmwNonsingularNullSpace,
    HmwSingularNullMatrix,
    HmwIntermediateValue,
    NecessaryCount,
    LocalInjectivitySample,
    NoDecisionProcedure,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::ComplementProperty => "complement-property",
            Rule::OneDimensional => "one-dimensional",
            Rule::LiftedRank => "lifted-rank",
            Rule::HmwTrivialNullSpace => "hmw-trivial-null-space",
            Rule::HmwNonsingularNullSpace => "hmw-nonsingular-null-space",
            Rule::HmwSingularNullMatrix => "hmw-singular-null-matrix",
            Rule::HmwIntermediateValue => "hmw-intermediate-value",
            Rule::NecessaryCount => "necessary-count",
            Rule::LocalInjectivitySample => "local-injectivity-sample",
            Rule::NoDecisionProcedure => "no-decision-procedure",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InjectivityWitness {
    /// A bipartition where neither side spans (zero-based indices of `S`).
    Subset(Vec<usize>),
    /// Two inequivalent signals with equal intensities.
    SignalPair {
        x: Signal,
        y: Signal,
        subset: Option<Vec<usize>>,
    },
    /// A null-space matrix of the super analysis operator. For a
    /// `NotInjective` verdict it has rank at most 2 and `pair` holds the
    /// colliding signals read off its spectral decomposition (when they pass
    /// the numeric check). For the HMW one-dimensional `Injective` case it is
    /// the nonsingular spanning matrix.
    NullMatrix {
        h: HermitianCoords,
        pair: Option<(Signal, Signal)>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct InjectivityVerdict {
    pub verdict: Verdict,
    pub rule: Rule,
    pub witness: Option<InjectivityWitness>,
    /// Dimension of the null space of the super analysis operator, when the
    /// deciding rule computed it.
    pub null_space_dimension: Option<usize>,
}

impl InjectivityVerdict {
    fn new(verdict: Verdict, rule: Rule) -> Self {
        Self {
            verdict,
            rule,
            witness: None,
            null_space_dimension: None,
        }
    }

    fn with_witness(mut self, witness: InjectivityWitness) -> Self {
        self.witness = Some(witness);
        self
    }

    fn with_null_dim(mut self, dim: usize) -> Self {
        self.null_space_dimension = Some(dim);
        self
    }

    pub fn is_injective(&self) -> bool {
        self.verdict == Verdict::Injective
    }

    /// The colliding signal pair carried by the witness, if any.
    pub fn signal_pair(&self) -> Option<(&Signal, &Signal)> {
        match &self.witness {
            Some(InjectivityWitness::SignalPair { x, y, .. }) => Some((x, y)),
            Some(InjectivityWitness::NullMatrix {
                pair: Some((x, y)), ..
            }) => Some((x, y)),
            _ => None,
        }
    }

    /// The failing bipartition carried by the witness, if any.
    pub fn subset(&self) -> Option<&[usize]> {
        match &self.witness {
            Some(InjectivityWitness::Subset(s)) => Some(s),
            Some(InjectivityWitness::SignalPair {
                subset: Some(s), ..
            }) => Some(s),
            _ => None,
        }
    }
}

/// Proven and conjectured thresholds on the number of measurements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub field: Field,
    #[serde(rename = "M")]
    pub m: usize,
    /// No ensemble with fewer vectors has the property.
    pub necessary_n: usize,
    /// From this N on, an open dense set of ensembles has the property.
    pub generic_sufficient_n: Option<usize>,
    pub conjectured_n: Option<usize>,
    pub notes: Vec<String>,
}

/// Outcome of the complement-property enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplementProperty {
    /// Lexicographically least `S` such that neither `Φ_S` nor `Φ_{S^c}`
    /// spans; `None` when the property holds.
    pub failing_subset: Option<Vec<usize>>,
    pub subsets_examined: u64,
}

impl ComplementProperty {
    pub fn holds(&self) -> bool {
        self.failing_subset.is_none()
    }
}

/// Whether `A(x) = A(y)` numerically while `x ≢ y`.
///
/// The tolerance is `1e-8·(‖A(x)‖ + s)` with `s = max_n ‖φ_n‖² · max(‖x‖², ‖y‖²)`,
/// the natural magnitude of an intensity, so the check is scale invariant.
pub fn pair_witness_is_sound(phi: &MeasurementEnsemble, x: &Signal, y: &Signal) -> bool {
    if x.equivalent(y) {
        return false;
    }
    let (Ok(ax), Ok(ay)) = (intensity_map(phi, x), intensity_map(phi, y)) else {
        return false;
    };
    let col_max = (0..phi.n()).map(|n| phi.column_norm_sq(n)).fold(0.0, f64::max);
    let scale = col_max * x.norm().powi(2).max(y.norm().powi(2));
    (&ax - &ay).norm() <= 1e-8 * (ax.norm() + scale)
}

/// Whether neither `Φ_S` nor `Φ_{S^c}` spans `F^M`.
pub fn subset_witness_is_sound(
    phi: &MeasurementEnsemble,
    subset: &[usize],
    tol: &ToleranceConfig,
) -> Result<bool> {
    let rest: Vec<usize> = (0..phi.n()).filter(|i| !subset.contains(i)).collect();
    let m = phi.normalized();
    let a = m.matrix().select_columns(subset);
    let b = m.matrix().select_columns(&rest);
    Ok(!columns_span(&a, tol)? && !columns_span(&b, tol)?)
}

fn spans_masked(matrix: &DMatrix<f64>, mask: u64, tol: &ToleranceConfig) -> Result<bool> {
    let idx = mask_to_indices(mask, matrix.ncols());
    if idx.len() < matrix.nrows() {
        return Ok(false);
    }
    columns_span(&matrix.select_columns(&idx), tol)
}

/// Complement property of a real ensemble.
pub fn complement_property(
    phi: &MeasurementEnsemble,
    tol: &ToleranceConfig,
) -> Result<ComplementProperty> {
    complement_property_with(phi, tol, &Limits::default())
}

pub fn complement_property_with(
    phi: &MeasurementEnsemble,
    tol: &ToleranceConfig,
    limits: &Limits,
) -> Result<ComplementProperty> {
    phi.require_field(
        Field::Real,
        "the complement property as an injectivity certificate",
    )?;
    let n = phi.n();
    subsets::check_guard(n, limits.max_subset_columns, "complement-property subsets")?;
    let matrix = phi.normalized().real_matrix();

    // S = ∅ is the least subset of all; it fails exactly when Φ does not span.
    if !columns_span(&matrix, tol)? {
        return Ok(ComplementProperty {
            failing_subset: Some(Vec::new()),
            subsets_examined: 1,
        });
    }
    let walk = first_failing_partition(n, true, |mask| {
        Ok(spans_masked(&matrix, mask, tol)? || spans_masked(&matrix, complement(mask, n), tol)?)
    })?;
    Ok(ComplementProperty {
        failing_subset: walk.first_failure.map(|m| mask_to_indices(m, n)),
        subsets_examined: walk.examined + 1,
    })
}

/// Injectivity over the reals: holds iff the complement property holds. On
/// failure returns `(u + v, u − v)` with `u ⊥ span(Φ_S)`, `v ⊥ span(Φ_{S^c})`.
pub fn real_injectivity(phi: &MeasurementEnsemble, tol: &ToleranceConfig) -> Result<InjectivityVerdict> {
    real_injectivity_with(phi, tol, &Limits::default())
}

pub fn real_injectivity_with(
    phi: &MeasurementEnsemble,
    tol: &ToleranceConfig,
    limits: &Limits,
) -> Result<InjectivityVerdict> {
    let cp = complement_property_with(phi, tol, limits)?;
    let Some(subset) = cp.failing_subset else {
        return Ok(InjectivityVerdict::new(Verdict::Injective, Rule::ComplementProperty));
    };
    let verdict = InjectivityVerdict::new(Verdict::NotInjective, Rule::ComplementProperty);

    let matrix = phi.normalized().real_matrix();
    let rest: Vec<usize> = (0..phi.n()).filter(|i| !subset.contains(i)).collect();
    let u_basis = orthogonal_complement(&matrix.select_columns(&subset), tol)?;
    let v_basis = orthogonal_complement(&matrix.select_columns(&rest), tol)?;
    if u_basis.ncols() == 0 || v_basis.ncols() == 0 {
        return Ok(verdict.with_witness(InjectivityWitness::Subset(subset)));
    }
    let u = u_basis.column(0);
    let v = v_basis.column(0);
    let sum: Vec<f64> = (u + v).iter().copied().collect();
    let diff: Vec<f64> = (u - v).iter().copied().collect();
    let (x, y) = (Signal::real(&sum)?, Signal::real(&diff)?);
    if pair_witness_is_sound(phi, &x, &y) {
        Ok(verdict.with_witness(InjectivityWitness::SignalPair {
            x,
            y,
            subset: Some(subset),
        }))
    } else {
        Ok(verdict.with_witness(InjectivityWitness::Subset(subset)))
    }
}

fn binomial(n: usize, k: usize) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| {
        acc.saturating_mul((n - i) as u128) / (i as u128 + 1)
    })
}

/// Lexicographically first `M`-subset of columns whose submatrix is
/// numerically singular, or `None` when the ensemble is full spark.
pub fn find_singular_minor(
    phi: &MeasurementEnsemble,
    tol: &ToleranceConfig,
    limits: &Limits,
) -> Result<Option<Vec<usize>>> {
    let (m, n) = (phi.m(), phi.n());
    if n < m {
        return Err(Error::Shape(format!(
            "full spark needs N >= M, got M = {m}, N = {n}"
        )));
    }
    let count = binomial(n, m);
    if count > limits.max_minors {
        return Err(Error::GuardExceeded {
            what: "full-spark minors",
            required: count,
            limit: limits.max_minors,
        });
    }
    let matrix = phi.normalized();
    for idx in (0..n).combinations(m) {
        let minor = matrix.matrix().select_columns(&idx);
        if rank_of(&minor, tol)?.rank < m {
            return Ok(Some(idx));
        }
    }
    Ok(None)
}

/// Every `M × M` submatrix is invertible.
pub fn full_spark(phi: &MeasurementEnsemble, tol: &ToleranceConfig) -> Result<bool> {
    Ok(find_singular_minor(phi, tol, &Limits::default())?.is_none())
}

fn det3_or_general(h: &DMatrix<Complex64>) -> f64 {
    // determinant of a self-adjoint matrix is real
    h.clone().determinant().re
}

/// Splits a self-adjoint matrix of rank ≤ 2 as `λ₁u₁u₁* + λ₂u₂u₂*` and
/// returns the colliding pair: `(√λ₊ u₊, √|λ₋| u₋)` for opposite signs,
/// otherwise `(√|λ₁| u₁, 0)`.
fn pair_from_low_rank(h: &DMatrix<Complex64>) -> Result<(Signal, Signal)> {
    let m = h.nrows();
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].abs().total_cmp(&eig.eigenvalues[a].abs()));
    let top = order[0];
    let lam_top = eig.eigenvalues[top];
    let vec_of = |i: usize, lam: f64| -> DVector<Complex64> {
        eig.eigenvectors.column(i).map(|z| z * lam.abs().sqrt())
    };
    let zero = DVector::from_element(m, Complex64::new(0.0, 0.0));
    let (x, y) = match order.get(1) {
        Some(&second)
            if eig.eigenvalues[second] * lam_top < 0.0
                && eig.eigenvalues[second].abs() > 1e-12 * lam_top.abs() =>
        {
            let lam2 = eig.eigenvalues[second];
            let (pos, neg) = if lam_top > 0.0 {
                ((top, lam_top), (second, lam2))
            } else {
                ((second, lam2), (top, lam_top))
            };
            (vec_of(pos.0, pos.1), vec_of(neg.0, neg.1))
        }
        _ => (vec_of(top, lam_top), zero),
    };
    Ok((
        Signal::new(Field::Complex, x)?,
        Signal::new(Field::Complex, y)?,
    ))
}

fn null_matrix_witness(phi: &MeasurementEnsemble, h: HermitianCoords) -> Result<InjectivityWitness> {
    let (x, y) = pair_from_low_rank(&h.to_matrix())?;
    let pair = pair_witness_is_sound(phi, &x, &y).then_some((x, y));
    Ok(InjectivityWitness::NullMatrix { h, pair })
}

fn require_complex_dim(phi: &MeasurementEnsemble, m: usize, what: &str) -> Result<()> {
    phi.require_field(Field::Complex, what)?;
    if phi.m() != m {
        return Err(Error::Shape(format!("{what} needs M = {m}, got M = {}", phi.m())));
    }
    Ok(())
}

/// Complex `M = 2`: injective iff the super analysis operator has rank 4.
/// Every nonzero `2 × 2` null matrix has rank ≤ 2, so any null vector is a
/// non-injectivity witness.
pub fn complex_injectivity_m2(phi: &MeasurementEnsemble, tol: &ToleranceConfig) -> Result<InjectivityVerdict> {
    require_complex_dim(phi, 2, "the M = 2 lifted-rank test")?;
    let phi = phi.normalized();
    let a = super_analysis_operator(&phi);
    let null = null_space_of(a.entries(), tol)?;
    if null.dimension == 0 {
        return Ok(InjectivityVerdict::new(Verdict::Injective, Rule::LiftedRank).with_null_dim(0));
    }
    let h = HermitianCoords::new(2, null.basis_vectors[0].clone())?;
    Ok(InjectivityVerdict::new(Verdict::NotInjective, Rule::LiftedRank)
        .with_null_dim(null.dimension)
        .with_witness(null_matrix_witness(&phi, h)?))
}

const HMW_SCAN_STEPS: usize = 10_000;
const HMW_BISECT_TOL: f64 = 1e-12;

/// Nonsingularity test for null matrices: `|det H| > 1e-8 · ‖H‖_F³`.
fn is_nonsingular(h: &HermitianCoords) -> bool {
    det3_or_general(&h.to_matrix()).abs() > 1e-8 * h.norm().powi(3)
}

/// Finds `t₀ ∈ [0, π]` with `det(A cos t₀ + B sin t₀) = 0`, which exists
/// because the determinant is odd in the sign of a `3 × 3` matrix.
fn intermediate_value_root(a: &DVector<f64>, b: &DVector<f64>, m: usize) -> Result<HermitianCoords> {
    let combo = |t: f64| -> Result<HermitianCoords> {
        HermitianCoords::new(m, a * t.cos() + b * t.sin())
    };
    let f = |t: f64| -> Result<f64> { Ok(det3_or_general(&combo(t)?.to_matrix())) };

    let step = std::f64::consts::PI / HMW_SCAN_STEPS as f64;
    let mut lo = 0.0;
    let mut f_lo = f(lo)?;
    let mut bracket = None;
    for k in 1..=HMW_SCAN_STEPS {
        let t = k as f64 * step;
        let f_t = f(t)?;
        if f_t == 0.0 {
            return combo(t);
        }
        if f_lo * f_t < 0.0 {
            bracket = Some((lo, t, f_lo));
            break;
        }
        lo = t;
        f_lo = f_t;
    }
    let (mut lo, mut hi, mut f_lo) =
        bracket.ok_or_else(|| Error::BadParam("determinant has no sign change on [0, π]".into()))?;
    while hi - lo > HMW_BISECT_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return combo(mid);
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    combo(0.5 * (lo + hi))
}

/// The HMW test (complex `M = 3`).
///
/// ```text
/// dim null(𝐀) = 0                      → injective
/// dim null(𝐀) = 1, spanned by det ≠ 0  → injective
/// otherwise                            → not injective
/// ```
///
/// For a null space of dimension ≥ 2 the witness is a singular combination
/// `A cos t₀ + B sin t₀` of two basis matrices.
pub fn hmw_test(phi: &MeasurementEnsemble, tol: &ToleranceConfig) -> Result<InjectivityVerdict> {
    require_complex_dim(phi, 3, "the HMW test")?;
    let phi = phi.normalized();
    let a = super_analysis_operator(&phi);
    let null = null_space_of(a.entries(), tol)?;
    let dim = null.dimension;
    if dim == 0 {
        return Ok(InjectivityVerdict::new(Verdict::Injective, Rule::HmwTrivialNullSpace).with_null_dim(0));
    }
    let first = HermitianCoords::new(3, null.basis_vectors[0].clone())?;
    if dim == 1 {
        if is_nonsingular(&first) {
            return Ok(
                InjectivityVerdict::new(Verdict::Injective, Rule::HmwNonsingularNullSpace)
                    .with_null_dim(1)
                    .with_witness(InjectivityWitness::NullMatrix {
                        h: first,
                        pair: None,
                    }),
            );
        }
        return Ok(
            InjectivityVerdict::new(Verdict::NotInjective, Rule::HmwSingularNullMatrix)
                .with_null_dim(1)
                .with_witness(null_matrix_witness(&phi, first)?),
        );
    }
    if !is_nonsingular(&first) {
        return Ok(
            InjectivityVerdict::new(Verdict::NotInjective, Rule::HmwSingularNullMatrix)
                .with_null_dim(dim)
                .with_witness(null_matrix_witness(&phi, first)?),
        );
    }
    let h = intermediate_value_root(&null.basis_vectors[0], &null.basis_vectors[1], 3)?;
    Ok(
        InjectivityVerdict::new(Verdict::NotInjective, Rule::HmwIntermediateValue)
            .with_null_dim(dim)
            .with_witness(null_matrix_witness(&phi, h)?),
    )
}

fn check_sample_point(phi: &MeasurementEnsemble, u: &Signal) -> Result<()> {
    phi.require_field(Field::Complex, "the local injectivity sample")?;
    if u.len() != phi.m() {
        return Err(Error::DimensionMismatch {
            expected: phi.m(),
            found: u.len(),
        });
    }
    if u.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// Rank of `{φ_nφ_n*u}` viewed in `R^{2M}`. Injectivity needs rank `2M − 1`
/// at every `u ≠ 0`; the rank never exceeds `2M − 1` because `iu` is
/// orthogonal to every lifted vector.
pub fn local_injectivity_sample(
    phi: &MeasurementEnsemble,
    u: &Signal,
    tol: &ToleranceConfig,
) -> Result<RankResult> {
    check_sample_point(phi, u)?;
    let u = u.to_complex();
    rank_of(&real_lift_matrix(&phi.normalized(), &u)?, tol)
}

/// When the lifted vectors at `u` miss a direction `v` other than `iu`,
/// `u + v` and `u − v` have equal intensities.
pub fn local_injectivity_witness(
    phi: &MeasurementEnsemble,
    u: &Signal,
    tol: &ToleranceConfig,
) -> Result<Option<(Signal, Signal)>> {
    check_sample_point(phi, u)?;
    let u = u.to_complex();
    let lifted = real_lift_matrix(&phi.normalized(), &u)?;
    let null = null_space_of(&lifted, tol)?;
    let iu = realify(&u.entries().map(|z| z * Complex64::i()));
    let iu = &iu / iu.norm();
    let best = null
        .basis_vectors
        .iter()
        .map(|b| b - &iu * b.dot(&iu))
        .max_by(|a, b| a.norm().total_cmp(&b.norm()));
    let Some(v) = best.filter(|v| v.norm() > 1e-6) else {
        return Ok(None);
    };
    let v = crate::ensemble::complexify(&(&v / v.norm() * u.norm()));
    let x = Signal::new(Field::Complex, u.entries() + &v)?;
    let y = Signal::new(Field::Complex, u.entries() - &v)?;
    Ok(pair_witness_is_sound(phi, &x, &y).then_some((x, y)))
}

/// Complex injectivity for any `M`: the exact tests for `M ≤ 3`; for larger
/// `M` the necessary measurement count and `samples` random local-rank
/// probes, falling back to `Inconclusive`.
pub fn complex_injectivity(
    phi: &MeasurementEnsemble,
    tol: &ToleranceConfig,
    samples: usize,
    seed: u64,
) -> Result<InjectivityVerdict> {
    phi.require_field(Field::Complex, "complex injectivity")?;
    match phi.m() {
        1 => {
            let any_nonzero = (0..phi.n()).any(|n| phi.column_norm_sq(n) > 0.0);
            let v = if any_nonzero {
                Verdict::Injective
            } else {
                Verdict::NotInjective
            };
            return Ok(InjectivityVerdict::new(v, Rule::OneDimensional));
        }
        2 => return complex_injectivity_m2(phi, tol),
        3 => return hmw_test(phi, tol),
        _ => {}
    }
    let bounds = injectivity_bounds(Field::Complex, phi.m())?;
    if phi.n() < bounds.necessary_n {
        return Ok(InjectivityVerdict::new(Verdict::NotInjective, Rule::NecessaryCount));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let entries: Vec<Complex64> = (0..phi.m())
            .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
            .collect();
        let u = Signal::complex(&entries)?;
        if let Some((x, y)) = local_injectivity_witness(phi, &u, tol)? {
            return Ok(
                InjectivityVerdict::new(Verdict::NotInjective, Rule::LocalInjectivitySample)
                    .with_witness(InjectivityWitness::SignalPair { x, y, subset: None }),
            );
        }
    }
    Ok(InjectivityVerdict::new(Verdict::Inconclusive, Rule::NoDecisionProcedure))
}

/// Number of ones in the binary representation.
pub fn binary_weight(n: usize) -> usize {
    n.count_ones() as usize
}

/// Lower bound `4M − 2α(M−1) − 3`, raised by one or two for odd `M` when
/// `α(M−1) ≡ 2` or `3 (mod 4)`. Returns the bound and the branch taken.
pub fn embedding_lower_bound(m: usize) -> (usize, &'static str) {
    let alpha = binary_weight(m - 1);
    let base = 4 * m - 2 * alpha;
    match (m % 2 == 1, alpha % 4) {
        (true, 2) => (base - 2, "odd M with alpha(M-1) = 2 mod 4"),
        (true, 3) => (base - 1, "odd M with alpha(M-1) = 3 mod 4"),
        _ => (base - 3, "general"),
    }
}

/// Known thresholds for injectivity over `field` in dimension `m`.
pub fn injectivity_bounds(field: Field, m: usize) -> Result<BoundsReport> {
    if m < 2 {
        return Err(Error::Shape(format!("bounds need M >= 2, got {m}")));
    }
    Ok(match field {
        Field::Real => BoundsReport {
            field,
            m,
            necessary_n: 2 * m - 1,
            generic_sufficient_n: Some(2 * m - 1),
            conjectured_n: None,
            notes: vec![
                "complement property fails whenever N < 2M-1".into(),
                "full spark with N >= 2M-1 is injective".into(),
            ],
        },
        Field::Complex => {
            let (eq_bound, branch) = embedding_lower_bound(m);
            let alpha = binary_weight(m - 1);
            let mut notes = vec![format!(
                "embedding lower bound 4M-2a(M-1)-c = {eq_bound} (a(M-1) = {alpha}, branch: {branch})"
            )];
            let mut necessary = eq_bound;
            if (m - 1).is_power_of_two() {
                necessary = necessary.max(4 * m - 4);
                notes.push(format!(
                    "4M-4 necessity proven for M = 2^k+1 (M = {m}): N >= {}",
                    4 * m - 4
                ));
            }
            notes.push("4M-4 generic sufficiency proven for all M".into());
            notes.push(format!("explicit injective constructions of size 4M-2 = {}", 4 * m - 2));
            if !(m - 1).is_power_of_two() {
                notes.push("4M-4 necessity is conjectured for this M".into());
            }
            BoundsReport {
                field,
                m,
                necessary_n: necessary,
                generic_sufficient_n: Some(4 * m - 4),
                conjectured_n: Some(4 * m - 4),
                notes,
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{eq1_fixture, vandermonde};

    fn tol() -> ToleranceConfig {
        ToleranceConfig::default()
    }

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn real(cols: &[&[f64]]) -> MeasurementEnsemble {
        MeasurementEnsemble::from_real_columns(cols).unwrap()
    }

    #[test]
    fn triple_in_the_plane_satisfies_complement_property() {
        let phi = real(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        assert!(complement_property(&phi, &tol()).unwrap().holds());
        assert!(real_injectivity(&phi, &tol()).unwrap().is_injective());
    }

    #[test]
    fn orthonormal_basis_fails_with_first_singleton() {
        let phi = real(&[&[1.0, 0.0], &[0.0, 1.0]]);
        let cp = complement_property(&phi, &tol()).unwrap();
        assert_eq!(cp.failing_subset, Some(vec![0]));

        let v = real_injectivity(&phi, &tol()).unwrap();
        assert_eq!(v.verdict, Verdict::NotInjective);
        let (x, y) = v.signal_pair().unwrap();
        // u = ±e2, v = ±e1: the pair is (±1, ±1) and (∓1, ±1)
        let ax = intensity_map(&phi, x).unwrap();
        assert!((ax - DVector::from_vec(vec![1.0, 1.0])).norm() < 1e-12);
        assert!(pair_witness_is_sound(&phi, x, y));
        assert_eq!(v.subset(), Some(&[0usize][..]));
    }

    #[test]
    fn fewer_than_2m_minus_1_vectors_never_satisfy_cp() {
        let phi = real(&[&[1.0, 2.0, 3.0], &[0.5, -1.0, 2.0], &[3.0, 1.0, -1.0], &[1.0, 1.0, 1.0]]);
        let cp = complement_property(&phi, &tol()).unwrap();
        assert!(!cp.holds());
        assert!(subset_witness_is_sound(&phi, cp.failing_subset.as_ref().unwrap(), &tol()).unwrap());
    }

    #[test]
    fn non_spanning_ensemble_fails_at_the_empty_set() {
        let phi = real(&[&[1.0, 0.0], &[2.0, 0.0], &[3.0, 0.0]]);
        let cp = complement_property(&phi, &tol()).unwrap();
        assert_eq!(cp.failing_subset, Some(vec![]));
        let v = real_injectivity(&phi, &tol()).unwrap();
        assert!(pair_witness_is_sound(&phi, v.signal_pair().unwrap().0, v.signal_pair().unwrap().1));
    }

    #[test]
    fn complex_input_is_refused_by_cp() {
        let phi = real(&[&[1.0, 0.0]]).to_complex();
        assert!(matches!(complement_property(&phi, &tol()), Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn cp_guard() {
        let cols: Vec<Vec<f64>> = (0..25).map(|k| vec![1.0, k as f64]).collect();
        let refs: Vec<&[f64]> = cols.iter().map(|c| c.as_slice()).collect();
        let phi = real(&refs);
        assert!(matches!(complement_property(&phi, &tol()), Err(Error::GuardExceeded { .. })));
    }

    #[test]
    fn vandermonde_three_by_five_is_injective() {
        let phi = vandermonde(3, &[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap();
        assert!(real_injectivity(&phi, &tol()).unwrap().is_injective());
    }

    #[test]
    fn full_spark_examples() {
        let phi = real(&[&[1.0, 1.0], &[1.0, 2.0], &[1.0, 3.0]]);
        assert!(full_spark(&phi, &tol()).unwrap());
        let phi = real(&[&[1.0, 1.0], &[0.0, 0.0], &[1.0, 3.0]]);
        assert!(!full_spark(&phi, &tol()).unwrap());
        assert_eq!(
            find_singular_minor(&phi, &tol(), &Limits::default()).unwrap(),
            Some(vec![0, 1])
        );
        let short = real(&[&[1.0, 1.0]]);
        assert!(matches!(full_spark(&short, &tol()), Err(Error::Shape(_))));
        let tight = Limits {
            max_minors: 2,
            ..Limits::default()
        };
        let phi = real(&[&[1.0, 1.0], &[1.0, 2.0], &[1.0, 3.0]]);
        assert!(matches!(
            find_singular_minor(&phi, &tol(), &tight),
            Err(Error::GuardExceeded { .. })
        ));
    }

    fn m2_basis_plus() -> MeasurementEnsemble {
        MeasurementEnsemble::from_complex_columns(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 1.0)],
        ])
        .unwrap()
    }

    #[test]
    fn m2_examples() {
        assert!(complex_injectivity_m2(&m2_basis_plus(), &tol()).unwrap().is_injective());

        let three = real(&[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]).to_complex();
        let v = complex_injectivity_m2(&three, &tol()).unwrap();
        assert_eq!(v.verdict, Verdict::NotInjective);
        let (x, y) = v.signal_pair().expect("sound pair");
        assert!(pair_witness_is_sound(&three, x, y));

        let repeated = real(&[&[1.0, 0.0], &[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]).to_complex();
        assert_eq!(complex_injectivity_m2(&repeated, &tol()).unwrap().verdict, Verdict::NotInjective);

        let wrong = vandermonde(3, &[1.0, 2.0, 3.0, 4.0]).unwrap().to_complex();
        assert!(matches!(complex_injectivity_m2(&wrong, &tol()), Err(Error::Shape(_))));
    }

    #[test]
    fn fixture_passes_hmw_with_one_dimensional_null_space() {
        let v = hmw_test(&eq1_fixture(), &tol()).unwrap();
        assert_eq!(v.verdict, Verdict::Injective);
        assert_eq!(v.rule, Rule::HmwNonsingularNullSpace);
        assert_eq!(v.null_space_dimension, Some(1));
    }

    #[test]
    fn real_entried_three_by_eight_is_not_injective_over_c() {
        let phi = real(&[
            &[1.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0],
            &[0.0, 0.0, 1.0],
            &[1.0, 1.0, 0.0],
            &[1.0, 0.0, 1.0],
            &[0.0, 1.0, 1.0],
            &[1.0, 2.0, 3.0],
            &[3.0, -1.0, 2.0],
        ])
        .to_complex();
        let v = hmw_test(&phi, &tol()).unwrap();
        assert_eq!(v.verdict, Verdict::NotInjective);
        assert!(v.null_space_dimension.unwrap() >= 3);
        let (x, y) = v.signal_pair().expect("sound pair");
        assert!(pair_witness_is_sound(&phi, x, y));
    }

    #[test]
    fn hmw_rejects_wrong_dimension() {
        assert!(matches!(hmw_test(&m2_basis_plus(), &tol()), Err(Error::Shape(_))));
    }

    #[test]
    fn single_vector_has_local_rank_one() {
        let phi = MeasurementEnsemble::from_complex_columns(&[vec![c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let u = Signal::complex(&[c(0.3, -1.0), c(2.0, 0.5)]).unwrap();
        assert!(local_injectivity_sample(&phi, &u, &tol()).unwrap().rank <= 1);
        let (x, y) = local_injectivity_witness(&phi, &u, &tol()).unwrap().unwrap();
        assert!(pair_witness_is_sound(&phi, &x, &y));
    }

    #[test]
    fn embedding_bound_branches() {
        // α(6) = 2 and M = 7 is odd → 28 − 4 − 2
        assert_eq!(embedding_lower_bound(7), (22, "odd M with alpha(M-1) = 2 mod 4"));
        // α(14) = 3 and M = 15 is odd → 60 − 6 − 1
        assert_eq!(embedding_lower_bound(15), (53, "odd M with alpha(M-1) = 3 mod 4"));
        // α(3) = 2 but M = 4 is even → 16 − 4 − 3
        assert_eq!(embedding_lower_bound(4), (9, "general"));
    }

    #[test]
    fn bounds_examples() {
        let b = injectivity_bounds(Field::Complex, 4).unwrap();
        assert_eq!((b.necessary_n, b.generic_sufficient_n), (9, Some(12)));
        assert_eq!(injectivity_bounds(Field::Complex, 5).unwrap().necessary_n, 16);
        let r = injectivity_bounds(Field::Real, 3).unwrap();
        assert_eq!((r.necessary_n, r.generic_sufficient_n), (5, Some(5)));
        assert!(matches!(injectivity_bounds(Field::Real, 1), Err(Error::Shape(_))));
    }
}
