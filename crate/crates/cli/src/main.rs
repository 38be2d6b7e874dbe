//! `phasecert`: certify phase-retrieval measurement ensembles, build the
//! standard constructions and sweep Monte Carlo phase-transition grids.
//!
//! Exit codes: 0 property holds, 1 fails, 2 inconclusive, 3 parse or I/O
//! error, 4 incompatible request (wrong shape or field), 5 any other error.

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use phasecert::almost_inj::almost_inj_bounds;
use phasecert::certify::{certify, Property};
use phasecert::constructions::{Family, FamilySpec, GOLDEN_RATIO};
use phasecert::ensemble::{Field, MeasurementEnsemble};
use phasecert::explorer::{emit_csv, run_grid_with_workers, GridProperty, GridSpec};
use phasecert::injectivity::{injectivity_bounds, BoundsReport};
use phasecert::numerics::ToleranceConfig;
use phasecert::Error;

#[derive(Parser)]
#[command(name = "phasecert", version, about = "Injectivity certificates for phase retrieval")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Certify a property of the ensemble stored in a JSON matrix file.
    Certify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        property: String,
        /// Seed for the randomized probes of sampling-based properties.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Relative rank tolerance.
        #[arg(long)]
        rel_tol: Option<f64>,
        /// Print the machine-readable record instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Write a named construction as a JSON matrix file.
    Construct {
        /// vandermonde, harmonic-dft, bodmann-hammen, eq1-fixture or gaussian.
        #[arg(long)]
        family: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Circle parameter of the two-circle family.
        #[arg(long)]
        param: Option<f64>,
        /// Comma-separated Vandermonde bases; defaults to 1, 2, …, N.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        bases: Option<Vec<f64>>,
        /// Field of a gaussian ensemble.
        #[arg(long, default_value = "real")]
        field: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep an (M, N) grid of Gaussian ensembles and write a CSV table.
    Explore {
        #[arg(long)]
        field: String,
        #[arg(long)]
        property: String,
        /// Inclusive range `a..b` (or a single value).
        #[arg(long)]
        m_range: String,
        #[arg(long)]
        n_range: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads; defaults to one per core.
        #[arg(long)]
        workers: Option<usize>,
    },
    /// Print known thresholds on the number of measurements.
    Bounds {
        #[arg(long)]
        field: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        json: bool,
    },
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parse(_) | Error::Io(_) => 3,
        Error::IncompatibleSpec(_) | Error::Shape(_) | Error::FieldMismatch(_) => 4,
        _ => 5,
    }
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, Error> {
    let num = |t: &str| {
        t.trim()
            .parse::<usize>()
            .map_err(|_| Error::Parse(format!("bad range `{s}`; expected a..b")))
    };
    match s.split_once("..") {
        Some((a, b)) => Ok(num(a)?..=num(b.trim_start_matches('='))?),
        None => {
            let v = num(s)?;
            Ok(v..=v)
        }
    }
}

fn family_spec(
    family: &str,
    m: usize,
    n: Option<usize>,
    seed: u64,
    param: Option<f64>,
    bases: Option<Vec<f64>>,
    field: Field,
) -> Result<FamilySpec, Error> {
    if m == 0 {
        return Err(Error::Shape("M must be at least 1".into()));
    }
    let need_m2 = |what: &str| {
        if m >= 2 {
            Ok(())
        } else {
            Err(Error::Shape(format!("{what} needs M >= 2")))
        }
    };
    let (family, n) = match family {
        "vandermonde" => {
            let bases = match bases {
                Some(b) => b,
                None => (1..=n.unwrap_or(2 * m - 1)).map(|k| k as f64).collect(),
            };
            let n = n.unwrap_or(bases.len());
            (Family::Vandermonde { bases }, n)
        }
        "harmonic-dft" => {
            need_m2("harmonic-dft")?;
            (Family::HarmonicDft, n.unwrap_or(2 * m - 1))
        }
        "bodmann-hammen" => {
            need_m2("bodmann-hammen")?;
            (
                Family::BodmannHammen {
                    circle_param: param.unwrap_or(GOLDEN_RATIO),
                },
                n.unwrap_or(4 * m - 2),
            )
        }
        "eq1-fixture" => (Family::Eq1Fixture, n.unwrap_or(8)),
        "gaussian" => {
            let n = n.ok_or_else(|| Error::Parse("gaussian needs --n".into()))?;
            (Family::GaussianRandom { field, seed }, n)
        }
        other => return Err(Error::Parse(format!("unknown family `{other}`"))),
    };
    Ok(FamilySpec { family, m, n })
}

fn bounds_text(title: &str, b: &BoundsReport) -> String {
    let opt = |v: Option<usize>| v.map_or("-".to_string(), |v| v.to_string());
    let mut s = format!(
        "{title} ({}, M = {}):\n  necessary N >= {}\n  generically sufficient N = {}\n  conjectured N = {}\n",
        b.field,
        b.m,
        b.necessary_n,
        opt(b.generic_sufficient_n),
        opt(b.conjectured_n)
    );
    for note in &b.notes {
        s.push_str(&format!("  - {note}\n"));
    }
    s
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Certify {
            input,
            property,
            seed,
            rel_tol,
            json,
        } => {
            let property: Property = property.parse()?;
            let tol = match rel_tol {
                Some(r) => ToleranceConfig::new(r, ToleranceConfig::default().abs_floor)?,
                None => ToleranceConfig::default(),
            };
            let text = std::fs::read_to_string(&input)
                .map_err(|e| Error::Io(format!("{}: {e}", input.display())))?;
            let phi = MeasurementEnsemble::from_json(&text)?;
            let cert = certify(&phi, property, &tol, seed)?;
            if json {
                println!("{}", cert.record);
            } else {
                println!("{}", cert.render_text());
            }
            Ok(cert.status.exit_code() as u8)
        }
        Command::Construct {
            family,
            m,
            n,
            seed,
            param,
            bases,
            field,
            out,
        } => {
            let spec = family_spec(&family, m, n, seed, param, bases, field.parse()?)?;
            let phi = spec.build()?;
            std::fs::write(&out, phi.to_json() + "\n")?;
            println!("wrote {} ensemble {}x{} to {}", phi.field(), phi.m(), phi.n(), out.display());
            Ok(0)
        }
        Command::Explore {
            field,
            property,
            m_range,
            n_range,
            trials,
            seed,
            out,
            workers,
        } => {
            let spec = GridSpec {
                field: field.parse()?,
                property: property.parse::<GridProperty>()?,
                m_range: parse_range(&m_range)?,
                n_range: parse_range(&n_range)?,
                trials,
                seed,
            };
            let results = run_grid_with_workers(&spec, workers)?;
            emit_csv(&results, &out)?;
            println!("M\tN\tsuccesses/trials\tinconclusive");
            for c in &results {
                println!("{}\t{}\t{}/{}\t{}", c.m, c.n, c.successes, c.trials, c.inconclusive);
            }
            if spec.property.necessity_only() {
                println!("note: necessity-only cells (local rank test, not a certificate)");
            }
            Ok(0)
        }
        Command::Bounds { field, m, json } => {
            let field: Field = field.parse()?;
            let inj = injectivity_bounds(field, m)?;
            let almost = almost_inj_bounds(field, m)?;
            if json {
                let record = serde_json::json!({ "injectivity": inj, "almost_injectivity": almost });
                println!("{record}");
            } else {
                print!("{}", bounds_text("injectivity", &inj));
                print!("{}", bounds_text("almost injectivity", &almost));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 3 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
