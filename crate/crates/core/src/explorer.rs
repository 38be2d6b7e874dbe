//! Monte Carlo sweeps over `(M, N)` grids of Gaussian ensembles.
//!
//! Each trial draws its ensemble from a ChaCha8 stream seeded by
//! [`trial_seed`], so a grid's tallies do not depend on how trials are
//! scheduled across threads.

use std::fmt;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::almost_inj::real_almost_injectivity;
use crate::constructions::gaussian_from_rng;
use crate::ensemble::{Field, Signal};
use crate::injectivity::{
    complex_injectivity_m2, full_spark, hmw_test, local_injectivity_sample, real_injectivity, Verdict,
};
use crate::numerics::ToleranceConfig;
use crate::{Complex64, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GridProperty {
    RealInjective,
    RealAlmostInjective,
    ComplexInjectiveM2,
    ComplexInjectiveM3,
    FullSpark,
    LocalInjSample,
}

impl GridProperty {
    pub const ALL: [GridProperty; 6] = [
        GridProperty::RealInjective,
        GridProperty::RealAlmostInjective,
        GridProperty::ComplexInjectiveM2,
        GridProperty::ComplexInjectiveM3,
        GridProperty::FullSpark,
        GridProperty::LocalInjSample,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            GridProperty::RealInjective => "RealInjective",
            GridProperty::RealAlmostInjective => "RealAlmostInjective",
            GridProperty::ComplexInjectiveM2 => "ComplexInjectiveM2",
            GridProperty::ComplexInjectiveM3 => "ComplexInjectiveM3",
            GridProperty::FullSpark => "FullSpark",
            GridProperty::LocalInjSample => "LocalInjSample",
        }
    }

    pub fn kebab_name(&self) -> &'static str {
        match self {
            GridProperty::RealInjective => "real-injective",
            GridProperty::RealAlmostInjective => "real-almost-injective",
            GridProperty::ComplexInjectiveM2 => "complex-injective-m2",
            GridProperty::ComplexInjectiveM3 => "complex-injective-m3",
            GridProperty::FullSpark => "full-spark",
            GridProperty::LocalInjSample => "local-inj-sample",
        }
    }

    /// Cells of this property only test a necessary condition.
    pub fn necessity_only(&self) -> bool {
        matches!(self, GridProperty::LocalInjSample)
    }
}

impl fmt::Display for GridProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GridProperty {
    type Err = Error;

    /// Accepts both `RealInjective` and `real-injective` spellings.
    fn from_str(s: &str) -> Result<Self> {
        GridProperty::ALL
            .into_iter()
            .find(|p| p.name() == s || p.kebab_name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown grid property `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GridSpec {
    pub field: Field,
    pub property: GridProperty,
    pub m_range: RangeInclusive<usize>,
    pub n_range: RangeInclusive<usize>,
    pub trials: usize,
    pub seed: u64,
}

impl GridSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::IncompatibleSpec(msg));
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if self.m_range.is_empty() || self.n_range.is_empty() {
            return bad("M and N ranges must be nonempty".into());
        }
        if *self.m_range.start() == 0 || *self.n_range.start() == 0 {
            return bad("M and N must be at least 1".into());
        }
        let p = self.property;
        let needs = |field: Field| -> Result<()> {
            if self.field == field {
                Ok(())
            } else {
                Err(Error::IncompatibleSpec(format!("{p} needs field {field}")))
            }
        };
        let fixed_m = |m: usize| -> Result<()> {
            if self.m_range == (m..=m) {
                Ok(())
            } else {
                Err(Error::IncompatibleSpec(format!("{p} forces M = {m}")))
            }
        };
        match p {
            GridProperty::RealInjective | GridProperty::RealAlmostInjective => needs(Field::Real),
            GridProperty::ComplexInjectiveM2 => needs(Field::Complex).and(fixed_m(2)),
            GridProperty::ComplexInjectiveM3 => needs(Field::Complex).and(fixed_m(3)),
            GridProperty::FullSpark => Ok(()),
            GridProperty::LocalInjSample => needs(Field::Complex),
        }
    }

    pub fn cells(&self) -> Vec<(usize, usize)> {
        self.m_range
            .clone()
            .flat_map(|m| self.n_range.clone().map(move |n| (m, n)))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub field: Field,
    pub property: GridProperty,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "N")]
    pub n: usize,
    pub trials: usize,
    pub successes: usize,
    pub failures: usize,
    pub inconclusive: usize,
    pub seed: u64,
    /// Wall-clock time of the cell; not part of the CSV and zero after parsing.
    pub elapsed_ms: u64,
    pub necessity_only: bool,
}

impl CellResult {
    pub fn success_fraction(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    /// Equality ignoring `elapsed_ms`.
    pub fn same_tally(&self, other: &CellResult) -> bool {
        CellResult { elapsed_ms: 0, ..self.clone() } == CellResult { elapsed_ms: 0, ..other.clone() }
    }
}

fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `t` in cell `(m, n)`:
///
/// ```text
/// h = splitmix64(seed)
/// h = splitmix64(h ^ m)
/// h = splitmix64(h ^ n)
/// h = splitmix64(h ^ t)
/// ```
///
/// where `splitmix64(x)` adds `0x9E3779B97F4A7C15` and applies the standard
/// SplitMix64 finalizer. The value seeds a ChaCha8 generator.
pub fn trial_seed(seed: u64, m: usize, n: usize, t: usize) -> u64 {
    let mut h = splitmix64(seed);
    h = splitmix64(h ^ m as u64);
    h = splitmix64(h ^ n as u64);
    splitmix64(h ^ t as u64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Outcome {
    Success,
    Failure,
    Inconclusive,
}

fn from_verdict(v: Verdict) -> Outcome {
    match v {
        Verdict::Injective => Outcome::Success,
        Verdict::NotInjective => Outcome::Failure,
        Verdict::Inconclusive => Outcome::Inconclusive,
    }
}

fn run_trial(spec: &GridSpec, m: usize, n: usize, t: usize) -> Result<Outcome> {
    let tol = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(spec.seed, m, n, t));
    let phi = gaussian_from_rng(spec.field, m, n, &mut rng);
    Ok(match spec.property {
        GridProperty::RealInjective => from_verdict(real_injectivity(&phi, &tol)?.verdict),
        GridProperty::RealAlmostInjective => {
            if real_almost_injectivity(&phi, &tol)?.is_almost_injective() {
                Outcome::Success
            } else {
                Outcome::Failure
            }
        }
        GridProperty::ComplexInjectiveM2 => from_verdict(complex_injectivity_m2(&phi, &tol)?.verdict),
        GridProperty::ComplexInjectiveM3 => from_verdict(hmw_test(&phi, &tol)?.verdict),
        GridProperty::FullSpark => {
            if n >= m && full_spark(&phi, &tol)? {
                Outcome::Success
            } else {
                Outcome::Failure
            }
        }
        GridProperty::LocalInjSample => {
            let u: Vec<Complex64> = (0..m)
                .map(|_| Complex64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)))
                .collect();
            let rank = local_injectivity_sample(&phi, &Signal::complex(&u)?, &tol)?.rank;
            if rank == 2 * m - 1 {
                Outcome::Success
            } else {
                Outcome::Failure
            }
        }
    })
}

#[cfg(feature = "parallel")]
fn run_trials(spec: &GridSpec, m: usize, n: usize) -> Vec<Result<Outcome>> {
    use rayon::prelude::*;
    (0..spec.trials)
        .into_par_iter()
        .map(|t| run_trial(spec, m, n, t))
        .collect()
}

#[cfg(not(feature = "parallel"))]
fn run_trials(spec: &GridSpec, m: usize, n: usize) -> Vec<Result<Outcome>> {
    (0..spec.trials).map(|t| run_trial(spec, m, n, t)).collect()
}

#[cfg(not(target_arch = "wasm32"))]
fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    let start = std::time::Instant::now();
    let out = f();
    (out, start.elapsed().as_millis() as u64)
}

#[cfg(target_arch = "wasm32")]
fn timed<T>(f: impl FnOnce() -> T) -> (T, u64) {
    (f(), 0)
}

fn run_cells(spec: &GridSpec) -> Result<Vec<CellResult>> {
    let mut results = Vec::new();
    for (m, n) in spec.cells() {
        let (outcomes, elapsed_ms) = timed(|| run_trials(spec, m, n));
        let mut cell = CellResult {
            field: spec.field,
            property: spec.property,
            m,
            n,
            trials: spec.trials,
            successes: 0,
            failures: 0,
            inconclusive: 0,
            seed: spec.seed,
            elapsed_ms,
            necessity_only: spec.property.necessity_only(),
        };
        for outcome in outcomes {
            match outcome? {
                Outcome::Success => cell.successes += 1,
                Outcome::Failure => cell.failures += 1,
                Outcome::Inconclusive => cell.inconclusive += 1,
            }
        }
        results.push(cell);
    }
    Ok(results)
}

/// Runs every cell of the grid on the default thread pool.
pub fn run_grid(spec: &GridSpec) -> Result<Vec<CellResult>> {
    run_grid_with_workers(spec, None)
}

/// Runs the grid with a dedicated pool of `workers` threads (`None` for the
/// global pool). Results are identical for any worker count.
pub fn run_grid_with_workers(spec: &GridSpec, workers: Option<usize>) -> Result<Vec<CellResult>> {
    spec.validate()?;
    #[cfg(feature = "parallel")]
    if let Some(w) = workers {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .map_err(|e| Error::BadParam(e.to_string()))?;
        return pool.install(|| run_cells(spec));
    }
    #[cfg(not(feature = "parallel"))]
    let _ = workers;
    run_cells(spec)
}

const CSV_HEADER: [&str; 8] = ["field", "property", "M", "N", "trials", "successes", "inconclusive", "seed"];

/// Writes the CSV table, sorted by `(M, N)`, to any writer.
pub fn write_csv<W: Write>(results: &[CellResult], out: W) -> Result<()> {
    let mut sorted: Vec<&CellResult> = results.iter().collect();
    sorted.sort_by_key(|c| (c.m, c.n));
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(CSV_HEADER).map_err(io)?;
    for c in sorted {
        w.write_record([
            c.field.to_string(),
            c.property.name().to_string(),
            c.m.to_string(),
            c.n.to_string(),
            c.trials.to_string(),
            c.successes.to_string(),
            c.inconclusive.to_string(),
            c.seed.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Writes the CSV table to `path`. An empty result list is rejected before
/// any file is created.
pub fn emit_csv(results: &[CellResult], path: &Path) -> Result<()> {
    if results.is_empty() {
        return Err(Error::BadParam("no cells to write".into()));
    }
    let mut buf = Vec::new();
    write_csv(results, &mut buf)?;
    std::fs::write(path, buf)?;
    Ok(())
}

/// Parses a table written by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<CellResult>> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let header = r.headers().map_err(|e| Error::Parse(e.to_string()))?;
    if header.iter().ne(CSV_HEADER) {
        return Err(Error::Parse(format!("unexpected header {header:?}")));
    }
    let mut out = Vec::new();
    for record in r.records() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let num = |i: usize| -> Result<u64> {
            record[i]
                .parse()
                .map_err(|_| Error::Parse(format!("bad integer `{}` in column {}", &record[i], CSV_HEADER[i])))
        };
        let property: GridProperty = record[1].parse()?;
        let trials = num(4)? as usize;
        let successes = num(5)? as usize;
        let inconclusive = num(6)? as usize;
        if successes + inconclusive > trials {
            return Err(Error::Parse("tallies exceed trials".into()));
        }
        out.push(CellResult {
            field: record[0].parse()?,
            property,
            m: num(2)? as usize,
            n: num(3)? as usize,
            trials,
            successes,
            failures: trials - successes - inconclusive,
            inconclusive,
            seed: num(7)?,
            elapsed_ms: 0,
            necessity_only: property.necessity_only(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(field: Field, property: GridProperty, m: RangeInclusive<usize>, n: RangeInclusive<usize>) -> GridSpec {
        GridSpec {
            field,
            property,
            m_range: m,
            n_range: n,
            trials: 20,
            seed: 42,
        }
    }

    fn cell(m: usize, n: usize) -> CellResult {
        CellResult {
            field: Field::Real,
            property: GridProperty::RealInjective,
            m,
            n,
            trials: 100,
            successes: 100,
            failures: 0,
            inconclusive: 0,
            seed: 42,
            elapsed_ms: 0,
            necessity_only: false,
        }
    }

    #[test]
    fn trial_seed_is_a_fixed_function() {
        assert_eq!(splitmix64(0), 0xE220_A839_7B1D_CDAF);
        assert_eq!(trial_seed(1, 2, 3, 4), trial_seed(1, 2, 3, 4));
        assert_ne!(trial_seed(1, 2, 3, 4), trial_seed(1, 2, 3, 5));
        assert_ne!(trial_seed(1, 2, 3, 4), trial_seed(1, 3, 2, 4));
    }

    #[test]
    fn compatibility_is_enforced() {
        let bad = spec(Field::Real, GridProperty::ComplexInjectiveM3, 3..=3, 7..=8);
        assert!(matches!(bad.validate(), Err(Error::IncompatibleSpec(_))));
        let bad = spec(Field::Complex, GridProperty::ComplexInjectiveM3, 3..=4, 7..=8);
        assert!(matches!(run_grid(&bad), Err(Error::IncompatibleSpec(_))));
        let bad = spec(Field::Complex, GridProperty::RealInjective, 2..=2, 3..=3);
        assert!(bad.validate().is_err());
        let bad = GridSpec { trials: 0, ..spec(Field::Real, GridProperty::FullSpark, 2..=2, 2..=2) };
        assert!(bad.validate().is_err());
        assert!(spec(Field::Complex, GridProperty::FullSpark, 2..=3, 1..=4).validate().is_ok());
    }

    #[test]
    fn small_real_grid() {
        let results = run_grid(&spec(Field::Real, GridProperty::RealInjective, 2..=2, 2..=3)).unwrap();
        assert_eq!(results.len(), 2);
        assert_eq!(results[0].successes, 0);
        assert_eq!(results[1].successes, 20);
        for c in &results {
            assert_eq!(c.successes + c.failures + c.inconclusive, c.trials);
        }
    }

    #[test]
    fn full_spark_below_m_counts_as_failure() {
        let results = run_grid(&spec(Field::Real, GridProperty::FullSpark, 3..=3, 2..=3)).unwrap();
        assert_eq!((results[0].successes, results[1].successes), (0, 20));
    }

    #[test]
    fn local_sample_cells_are_labelled() {
        let results = run_grid(&spec(Field::Complex, GridProperty::LocalInjSample, 2..=2, 2..=3)).unwrap();
        assert!(results.iter().all(|c| c.necessity_only));
        assert_eq!((results[0].successes, results[1].successes), (0, 20));
    }

    #[test]
    fn csv_format() {
        let mut buf = Vec::new();
        write_csv(&[cell(3, 5)], &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "field,property,M,N,trials,successes,inconclusive,seed\nreal,RealInjective,3,5,100,100,0,42\n"
        );
    }

    #[test]
    fn csv_sorts_and_round_trips() {
        let cells = [cell(3, 6), cell(2, 9), cell(3, 5)];
        let mut buf = Vec::new();
        write_csv(&cells, &mut buf).unwrap();
        let parsed = parse_csv(std::str::from_utf8(&buf).unwrap()).unwrap();
        assert_eq!(parsed, vec![cell(2, 9), cell(3, 5), cell(3, 6)]);
    }

    #[test]
    fn empty_results_create_no_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        assert!(emit_csv(&[], &path).is_err());
        assert!(!path.exists());
        emit_csv(&[cell(3, 5)], &path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 2);
    }
}
