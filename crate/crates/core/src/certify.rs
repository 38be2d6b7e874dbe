//! One-shot certification of a stored ensemble by property name.
//!
//! Index sets in rendered output are one-based, matching the usual
//! `S ⊆ {1, …, N}` notation; the library API itself is zero-based.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use serde_json::{json, Value};

use crate::almost_inj::{
    almost_inj_witness_is_sound, orthogonal_partitionable, real_almost_injectivity, untf_almost_injectivity,
    untf_check, AlmostInjVerdict, AlmostInjWitness,
};
use crate::ensemble::{Field, MeasurementEnsemble, Signal};
use crate::injectivity::{
    complement_property, complex_injectivity, complex_injectivity_m2, find_singular_minor, hmw_test,
    local_injectivity_sample, real_injectivity, InjectivityVerdict, InjectivityWitness, Limits, Verdict,
};
use crate::numerics::ToleranceConfig;
use crate::{Complex64, Error, Result};

/// Random probes used by `complex-injectivity` for `M ≥ 4`.
pub const DEFAULT_SAMPLES: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    RealInjectivity,
    ComplementProperty,
    FullSpark,
    ComplexM2,
    Hmw,
    ComplexInjectivity,
    RealAlmostInjectivity,
    Untf,
    UntfAlmostInjectivity,
    OrthogonalPartition,
    LocalInjSample,
}

impl Property {
    pub const ALL: [Property; 11] = [
        Property::RealInjectivity,
        Property::ComplementProperty,
        Property::FullSpark,
        Property::ComplexM2,
        Property::Hmw,
        Property::ComplexInjectivity,
        Property::RealAlmostInjectivity,
        Property::Untf,
        Property::UntfAlmostInjectivity,
        Property::OrthogonalPartition,
        Property::LocalInjSample,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Property::RealInjectivity => "real-injectivity",
            Property::ComplementProperty => "complement-property",
            Property::FullSpark => "full-spark",
            Property::ComplexM2 => "complex-m2",
            Property::Hmw => "hmw",
            Property::ComplexInjectivity => "complex-injectivity",
            Property::RealAlmostInjectivity => "real-almost-injectivity",
            Property::Untf => "untf",
            Property::UntfAlmostInjectivity => "untf-almost-injectivity",
            Property::OrthogonalPartition => "orthogonal-partition",
            Property::LocalInjSample => "local-inj-sample",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Property::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Property::ALL.iter().map(|p| p.name()).collect();
                Error::Parse(format!("unknown property `{s}` (known: {})", known.join(", ")))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Status {
    Holds,
    Fails,
    Inconclusive,
}

impl Status {
    /// Process exit code for this outcome.
    pub fn exit_code(&self) -> i32 {
        match self {
            Status::Holds => 0,
            Status::Fails => 1,
            Status::Inconclusive => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certification {
    pub property: Property,
    pub status: Status,
    /// Short verdict label, e.g. `Injective` or `NotAlmostInjective`.
    pub verdict: String,
    pub rule: String,
    /// Human-readable witness summary.
    pub witness: Option<String>,
    pub record: Value,
}

impl Certification {
    pub fn render_text(&self) -> String {
        let mut s = format!("{}\nrule: {}", self.verdict, self.rule);
        if let Some(w) = &self.witness {
            s.push_str(&format!("\nwitness: {w}"));
        }
        s
    }
}

fn one_based(s: &[usize]) -> Vec<usize> {
    s.iter().map(|i| i + 1).collect()
}

fn set_text(s: &[usize]) -> String {
    let items: Vec<String> = one_based(s).iter().map(|i| i.to_string()).collect();
    format!("S = {{{}}}", items.join(", "))
}

fn complex_text(z: &Complex64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn signal_text(x: &Signal) -> String {
    let parts: Vec<String> = x.entries().iter().map(complex_text).collect();
    format!("({})", parts.join(", "))
}

fn signal_json(x: &Signal) -> Value {
    Value::Array(x.entries().iter().map(|z| json!([z.re, z.im])).collect())
}

fn injectivity_cert(property: Property, v: &InjectivityVerdict) -> Certification {
    let status = match v.verdict {
        Verdict::Injective => Status::Holds,
        Verdict::NotInjective => Status::Fails,
        Verdict::Inconclusive => Status::Inconclusive,
    };
    let mut record = json!({
        "property": property.name(),
        "verdict": v.verdict,
        "rule": v.rule.name(),
    });
    if let Some(d) = v.null_space_dimension {
        record["null_space_dimension"] = json!(d);
    }
    let mut texts = Vec::new();
    if let Some(s) = v.subset() {
        texts.push(set_text(s));
        record["subset"] = json!(one_based(s));
    }
    if let Some((x, y)) = v.signal_pair() {
        texts.push(format!("x = {}, y = {}", signal_text(x), signal_text(y)));
        record["pair"] = json!([signal_json(x), signal_json(y)]);
    }
    if let Some(InjectivityWitness::NullMatrix { h, .. }) = &v.witness {
        record["null_matrix"] = json!(h.coords().iter().collect::<Vec<_>>());
        if texts.is_empty() {
            texts.push(format!("null matrix with Frobenius norm {:.3e}", h.norm()));
        }
    }
    Certification {
        property,
        status,
        verdict: v.verdict.to_string(),
        rule: v.rule.name().to_string(),
        witness: (!texts.is_empty()).then(|| texts.join("; ")),
        record,
    }
}

fn almost_cert(property: Property, v: &AlmostInjVerdict) -> Certification {
    let status = if v.is_almost_injective() {
        Status::Holds
    } else {
        Status::Fails
    };
    let mut record = json!({
        "property": property.name(),
        "verdict": v.verdict,
        "rule": v.rule.name(),
        "dropped_zero_columns": v.dropped_zero_columns,
        "subsets_examined": v.subsets_examined,
    });
    let witness = match &v.witness {
        Some(AlmostInjWitness::Subset(s)) => {
            record["subset"] = json!(one_based(s));
            Some(set_text(s))
        }
        Some(AlmostInjWitness::NotSpanning { rank }) => {
            record["span_rank"] = json!(rank);
            Some(format!("vectors span only a {rank}-dimensional subspace"))
        }
        None => None,
    };
    Certification {
        property,
        status,
        verdict: v.verdict.to_string(),
        rule: v.rule.name().to_string(),
        witness,
        record,
    }
}

fn simple(property: Property, holds: bool, yes: &str, no: &str, rule: &str, witness: Option<String>, mut record: Value) -> Certification {
    record["property"] = json!(property.name());
    record["verdict"] = json!(if holds { yes } else { no });
    record["rule"] = json!(rule);
    Certification {
        property,
        status: if holds { Status::Holds } else { Status::Fails },
        verdict: (if holds { yes } else { no }).to_string(),
        rule: rule.to_string(),
        witness,
        record,
    }
}

fn incompatible(e: Error) -> Error {
    match e {
        Error::Shape(s) | Error::FieldMismatch(s) => Error::IncompatibleSpec(s),
        Error::NotUntf => Error::IncompatibleSpec("the ensemble is not a unit norm tight frame".into()),
        other => other,
    }
}

/// Complex certifiers accept real ensembles, which are complex ones too.
fn as_complex(phi: &MeasurementEnsemble) -> MeasurementEnsemble {
    phi.to_complex()
}

/// Runs the named certifier. Shape and field mismatches become
/// [`Error::IncompatibleSpec`].
pub fn certify(phi: &MeasurementEnsemble, property: Property, tol: &ToleranceConfig, seed: u64) -> Result<Certification> {
    certify_inner(phi, property, tol, seed).map_err(incompatible)
}

fn certify_inner(phi: &MeasurementEnsemble, property: Property, tol: &ToleranceConfig, seed: u64) -> Result<Certification> {
    Ok(match property {
        Property::RealInjectivity => injectivity_cert(property, &real_injectivity(phi, tol)?),
        Property::ComplementProperty => {
            let cp = complement_property(phi, tol)?;
            let rec = json!({ "subsets_examined": cp.subsets_examined });
            let mut c = simple(
                property,
                cp.holds(),
                "Holds",
                "Fails",
                "complement-property",
                cp.failing_subset.as_deref().map(set_text),
                rec,
            );
            if let Some(s) = &cp.failing_subset {
                c.record["subset"] = json!(one_based(s));
            }
            c
        }
        Property::FullSpark => {
            let minor = find_singular_minor(phi, tol, &Limits::default())?;
            let mut c = simple(
                property,
                minor.is_none(),
                "FullSpark",
                "NotFullSpark",
                "minor-enumeration",
                minor.as_deref().map(|s| format!("singular minor on columns {}", set_text(s))),
                json!({}),
            );
            if let Some(s) = &minor {
                c.record["singular_minor"] = json!(one_based(s));
            }
            c
        }
        Property::ComplexM2 => injectivity_cert(property, &complex_injectivity_m2(&as_complex(phi), tol)?),
        Property::Hmw => injectivity_cert(property, &hmw_test(&as_complex(phi), tol)?),
        Property::ComplexInjectivity => injectivity_cert(
            property,
            &complex_injectivity(&as_complex(phi), tol, DEFAULT_SAMPLES, seed)?,
        ),
        Property::RealAlmostInjectivity => {
            let v = real_almost_injectivity(phi, tol)?;
            if let Some(w) = &v.witness {
                debug_assert!(almost_inj_witness_is_sound(phi, w, tol)?);
            }
            almost_cert(property, &v)
        }
        Property::Untf => {
            let r = untf_check(phi);
            simple(
                property,
                r.is_untf,
                "Untf",
                "NotUntf",
                "untf-deviations",
                Some(format!(
                    "deviations: row norm {:.2e}, row orthogonality {:.2e}, column norm {:.2e}",
                    r.row_norm_deviation, r.row_orthogonality_deviation, r.column_norm_deviation
                )),
                serde_json::to_value(r).expect("report serializes"),
            )
        }
        Property::UntfAlmostInjectivity => almost_cert(property, &untf_almost_injectivity(phi, tol)?),
        Property::OrthogonalPartition => {
            let part = orthogonal_partitionable(phi);
            let mut c = simple(
                property,
                part.is_some(),
                "OrthogonallyPartitionable",
                "NotOrthogonallyPartitionable",
                "gram-components",
                part.as_deref().map(set_text),
                json!({}),
            );
            if let Some(s) = &part {
                c.record["subset"] = json!(one_based(s));
            }
            c
        }
        Property::LocalInjSample => {
            let phi = as_complex(phi);
            let m = phi.m();
            let u = crate::constructions::gaussian_random(Field::Complex, m, 1, seed);
            let u = Signal::new(Field::Complex, u.column(0))?;
            let r = local_injectivity_sample(&phi, &u, tol)?;
            simple(
                property,
                r.rank == 2 * m - 1,
                "FullLocalRank",
                "DeficientLocalRank",
                "local-injectivity-sample",
                Some(format!(
                    "rank {} of at most {} at a random point (necessary condition only)",
                    r.rank,
                    2 * m - 1
                )),
                json!({ "rank": r.rank, "max_rank": 2 * m - 1, "necessity_only": true }),
            )
        }
    })
}
