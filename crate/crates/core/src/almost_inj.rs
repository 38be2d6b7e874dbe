//! Almost injectivity over the reals.
//!
//! After dropping zero vectors, `A` is almost injective iff `Φ` spans `R^M`
//! and `rank Φ_S + rank Φ_{S^c} > M` for every nonempty proper `S`. For unit
//! norm tight frames this reduces to the absence of an orthogonal partition,
//! which never exists when `gcd(M, N) = 1`.

use std::fmt;

use nalgebra::DMatrix;
use serde::Serialize;

use crate::ensemble::{Field, MeasurementEnsemble, Signal};
use crate::injectivity::{BoundsReport, Limits};
use crate::numerics::{columns_span, orthogonal_complement, rank_of, rank_or_zero, ToleranceConfig};
use crate::subsets::{self, complement, first_failing_partition, mask_to_indices};
use crate::{Error, Result};

/// Normalized inner products at or below this count as orthogonal.
pub const ORTHOGONALITY_THRESHOLD: f64 = 1e-10;

/// All three deviations of a UNTF must stay below this.
pub const UNTF_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AlmostInjectivity {
    AlmostInjective,
    NotAlmostInjective,
    Inconclusive,
}

impl fmt::Display for AlmostInjectivity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlmostInjRule {
    NotSpanning,
    RankCondition,
    RelativelyPrimeUntf,
    OrthogonalPartition,
}

impl AlmostInjRule {
    pub fn name(&self) -> &'static str {
        match self {
            AlmostInjRule::NotSpanning => "not-spanning",
            AlmostInjRule::RankCondition => "rank-condition",
            AlmostInjRule::RelativelyPrimeUntf => "relatively-prime-untf",
            AlmostInjRule::OrthogonalPartition => "orthogonal-partition",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlmostInjWitness {
    /// Zero-based indices of `S` in the original ensemble.
    Subset(Vec<usize>),
    /// The nonzero vectors span only a `rank`-dimensional subspace.
    NotSpanning { rank: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlmostInjVerdict {
    pub verdict: AlmostInjectivity,
    pub rule: AlmostInjRule,
    pub witness: Option<AlmostInjWitness>,
    pub dropped_zero_columns: usize,
    pub subsets_examined: u64,
}

impl AlmostInjVerdict {
    pub fn is_almost_injective(&self) -> bool {
        self.verdict == AlmostInjectivity::AlmostInjective
    }

    pub fn subset(&self) -> Option<&[usize]> {
        match &self.witness {
            Some(AlmostInjWitness::Subset(s)) => Some(s),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UntfReport {
    pub is_untf: bool,
    /// `max_i | ‖row_i‖ − √(N/M) |`
    pub row_norm_deviation: f64,
    /// `max_{i≠j} |⟨row_i, row_j⟩|`
    pub row_orthogonality_deviation: f64,
    /// `max_n | ‖φ_n‖ − 1 |`
    pub column_norm_deviation: f64,
}

fn nonzero_columns(phi: &MeasurementEnsemble) -> Vec<usize> {
    (0..phi.n()).filter(|&n| phi.column_norm_sq(n) > 0.0).collect()
}

/// Exact rank characterization of real almost injectivity.
pub fn real_almost_injectivity(phi: &MeasurementEnsemble, tol: &ToleranceConfig) -> Result<AlmostInjVerdict> {
    real_almost_injectivity_with(phi, tol, &Limits::default())
}

pub fn real_almost_injectivity_with(
    phi: &MeasurementEnsemble,
    tol: &ToleranceConfig,
    limits: &Limits,
) -> Result<AlmostInjVerdict> {
    phi.require_field(Field::Real, "real almost injectivity")?;
    let kept = nonzero_columns(phi);
    let dropped = phi.n() - kept.len();
    let m = phi.m();
    let not_spanning = |rank: usize, examined: u64| AlmostInjVerdict {
        verdict: AlmostInjectivity::NotAlmostInjective,
        rule: AlmostInjRule::NotSpanning,
        witness: Some(AlmostInjWitness::NotSpanning { rank }),
        dropped_zero_columns: dropped,
        subsets_examined: examined,
    };
    if kept.is_empty() {
        return Ok(not_spanning(0, 0));
    }
    let n = kept.len();
    subsets::check_guard(n, limits.max_subset_columns, "almost-injectivity subsets")?;
    let reduced = phi.normalized().real_matrix().select_columns(&kept);
    let full_rank = rank_of(&reduced, tol)?.rank;
    if full_rank < m {
        return Ok(not_spanning(full_rank, 0));
    }

    let rank_of_mask = |mask: u64| -> Result<usize> {
        rank_or_zero(&reduced.select_columns(&mask_to_indices(mask, n)), tol)
    };
    let walk = first_failing_partition(n, false, |mask| {
        Ok(rank_of_mask(mask)? + rank_of_mask(complement(mask, n))? > m)
    })?;
    let witness = walk
        .first_failure
        .map(|mask| AlmostInjWitness::Subset(mask_to_indices(mask, n).into_iter().map(|i| kept[i]).collect()));
    Ok(AlmostInjVerdict {
        verdict: if witness.is_some() {
            AlmostInjectivity::NotAlmostInjective
        } else {
            AlmostInjectivity::AlmostInjective
        },
        rule: AlmostInjRule::RankCondition,
        witness,
        dropped_zero_columns: dropped,
        subsets_examined: walk.examined,
    })
}

/// `rank Φ_S + rank Φ_{S^c} ≤ M`, or `Φ` fails to span.
pub fn almost_inj_witness_is_sound(
    phi: &MeasurementEnsemble,
    witness: &AlmostInjWitness,
    tol: &ToleranceConfig,
) -> Result<bool> {
    let matrix = phi.normalized().real_matrix();
    match witness {
        AlmostInjWitness::NotSpanning { .. } => Ok(!columns_span(&matrix, tol)?),
        AlmostInjWitness::Subset(s) => {
            let rest: Vec<usize> = (0..phi.n()).filter(|i| !s.contains(i)).collect();
            let r = rank_or_zero(&matrix.select_columns(s), tol)?
                + rank_or_zero(&matrix.select_columns(&rest), tol)?;
            Ok(r <= phi.m())
        }
    }
}

/// Whether `A⁻¹(A(x)) = {±x}`: false iff for some `S`, `x = u + v` with
/// nonzero `u ⊥ span(Φ_S)` and nonzero `v ⊥ span(Φ_{S^c})`.
pub fn pointwise_recoverable(phi: &MeasurementEnsemble, x: &Signal, tol: &ToleranceConfig) -> Result<bool> {
    pointwise_recoverable_with(phi, x, tol, &Limits::default())
}

pub fn pointwise_recoverable_with(
    phi: &MeasurementEnsemble,
    x: &Signal,
    tol: &ToleranceConfig,
    limits: &Limits,
) -> Result<bool> {
    phi.require_field(Field::Real, "pointwise recoverability")?;
    if x.field() != Field::Real {
        return Err(Error::FieldMismatch("pointwise recoverability needs a real signal".into()));
    }
    if x.len() != phi.m() {
        return Err(Error::DimensionMismatch {
            expected: phi.m(),
            found: x.len(),
        });
    }
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    let n = phi.n();
    subsets::check_guard(n, limits.max_subset_columns, "pointwise-recoverability subsets")?;
    let matrix = phi.normalized().real_matrix();
    if !columns_span(&matrix, tol)? {
        return Err(Error::NotSpanning);
    }
    let xv = x.real_entries();
    let small = 1e-8 * xv.norm();

    // S = ∅ pairs with S^c = everything, whose complement is {0}; only
    // nonempty proper S can produce two nonzero parts.
    let walk = first_failing_partition(n, false, |mask| {
        let s = mask_to_indices(mask, n);
        let rest = mask_to_indices(complement(mask, n), n);
        let u_basis = orthogonal_complement(&matrix.select_columns(&s), tol)?;
        let v_basis = orthogonal_complement(&matrix.select_columns(&rest), tol)?;
        if u_basis.ncols() == 0 || v_basis.ncols() == 0 {
            return Ok(true);
        }
        // The two complements meet only in 0 because Φ spans, so the
        // decomposition x = u + v is unique when it exists.
        let mut joint = DMatrix::zeros(phi.m(), u_basis.ncols() + v_basis.ncols());
        joint.columns_mut(0, u_basis.ncols()).copy_from(&u_basis);
        joint.columns_mut(u_basis.ncols(), v_basis.ncols()).copy_from(&v_basis);
        let coeffs = joint
            .clone()
            .svd(true, true)
            .solve(&xv, 1e-12)
            .map_err(|e| Error::BadParam(e.to_string()))?;
        if (&joint * &coeffs - &xv).norm() > small {
            return Ok(true);
        }
        let u = &u_basis * coeffs.rows(0, u_basis.ncols());
        let v = &v_basis * coeffs.rows(u_basis.ncols(), v_basis.ncols());
        Ok(u.norm() <= small || v.norm() <= small)
    })?;
    Ok(walk.first_failure.is_none())
}

/// Deviations from the three UNTF conditions (conjugate inner products for
/// complex ensembles).
pub fn untf_check(phi: &MeasurementEnsemble) -> UntfReport {
    let mat = phi.matrix();
    let (m, n) = (phi.m(), phi.n());
    let target = (n as f64 / m as f64).sqrt();
    let row_norm_deviation = (0..m)
        .map(|i| (mat.row(i).norm() - target).abs())
        .fold(0.0, f64::max);
    let gram = mat * mat.adjoint();
    let mut row_orthogonality_deviation: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                row_orthogonality_deviation = row_orthogonality_deviation.max(gram[(i, j)].norm());
            }
        }
    }
    let column_norm_deviation = (0..n)
        .map(|c| (mat.column(c).norm() - 1.0).abs())
        .fold(0.0, f64::max);
    UntfReport {
        is_untf: row_norm_deviation <= UNTF_TOLERANCE
            && row_orthogonality_deviation <= UNTF_TOLERANCE
            && column_norm_deviation <= UNTF_TOLERANCE,
        row_norm_deviation,
        row_orthogonality_deviation,
        column_norm_deviation,
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Almost injectivity of a real UNTF: immediate when `gcd(M, N) = 1`,
/// otherwise iff the frame is not orthogonally partitionable.
pub fn untf_almost_injectivity(phi: &MeasurementEnsemble, _tol: &ToleranceConfig) -> Result<AlmostInjVerdict> {
    phi.require_field(Field::Real, "UNTF almost injectivity")?;
    if !untf_check(phi).is_untf {
        return Err(Error::NotUntf);
    }
    if gcd(phi.m(), phi.n()) == 1 {
        return Ok(AlmostInjVerdict {
            verdict: AlmostInjectivity::AlmostInjective,
            rule: AlmostInjRule::RelativelyPrimeUntf,
            witness: None,
            dropped_zero_columns: 0,
            subsets_examined: 0,
        });
    }
    let partition = orthogonal_partitionable(phi);
    Ok(AlmostInjVerdict {
        verdict: if partition.is_some() {
            AlmostInjectivity::NotAlmostInjective
        } else {
            AlmostInjectivity::AlmostInjective
        },
        rule: AlmostInjRule::OrthogonalPartition,
        witness: partition.map(AlmostInjWitness::Subset),
        dropped_zero_columns: 0,
        subsets_examined: 0,
    })
}

/// Lexicographically least nonempty proper `S` with `span(Φ_S) ⊥ span(Φ_{S^c})`.
///
/// Such `S` are exactly the unions of connected components of the graph
/// joining `m` and `n` whenever `|⟨φ_m, φ_n⟩| / (‖φ_m‖‖φ_n‖)` exceeds
/// [`ORTHOGONALITY_THRESHOLD`].
pub fn orthogonal_partitionable(phi: &MeasurementEnsemble) -> Option<Vec<usize>> {
    let n = phi.n();
    if n < 2 {
        return None;
    }
    let mat = phi.matrix();
    let norms: Vec<f64> = (0..n).map(|c| mat.column(c).norm()).collect();
    let gram = mat.adjoint() * mat;
    let linked = |a: usize, b: usize| {
        let denom = norms[a] * norms[b];
        denom > 0.0 && gram[(a, b)].norm() / denom > ORTHOGONALITY_THRESHOLD
    };

    let mut component = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if component[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        component[start] = count;
        while let Some(a) = stack.pop() {
            let fresh: Vec<usize> = (0..n).filter(|&b| component[b] == usize::MAX && linked(a, b)).collect();
            for b in fresh {
                component[b] = count;
                stack.push(b);
            }
        }
        count += 1;
    }
    if count == 1 {
        return None;
    }

    // Greedy over positions: emitting a smaller index beats both a larger one
    // and stopping, and stopping beats continuing once nothing smaller is left.
    let mut chosen = vec![false; count];
    chosen[component[0]] = true;
    let size_of = |chosen: &[bool]| (0..n).filter(|&i| chosen[component[i]]).count();
    let max_of = |chosen: &[bool]| (0..n).rev().find(|&i| chosen[component[i]]).unwrap_or(0);
    for i in 1..n {
        if chosen[component[i]] {
            continue;
        }
        if max_of(&chosen) < i {
            break;
        }
        let mut trial = chosen.clone();
        trial[component[i]] = true;
        if size_of(&trial) < n {
            chosen = trial;
        }
    }
    Some((0..n).filter(|&i| chosen[component[i]]).collect())
}

/// Known thresholds for almost injectivity.
pub fn almost_inj_bounds(field: Field, m: usize) -> Result<BoundsReport> {
    if m < 2 {
        return Err(Error::Shape(format!("bounds need M >= 2, got {m}")));
    }
    Ok(match field {
        Field::Real => BoundsReport {
            field,
            m,
            necessary_n: m + 1,
            generic_sufficient_n: Some(m + 1),
            conjectured_n: None,
            notes: vec![
                "rank condition fails whenever N < M+1".into(),
                "full spark with N >= M+1 is almost injective".into(),
            ],
        },
        Field::Complex => BoundsReport {
            field,
            m,
            necessary_n: 2 * m - 1,
            generic_sufficient_n: Some(2 * m),
            conjectured_n: Some(2 * m),
            notes: vec![
                format!("2M-1 = {} necessary via the Jacobian rank bound (proven)", 2 * m - 1),
                format!("2M = {} generically sufficient (proven)", 2 * m),
                "necessity of 2M rests on a proof sketch; treated as conjectured".into(),
                "no almost-injectivity certifier exists over C".into(),
            ],
        },
    })
}
