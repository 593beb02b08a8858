//! Command-line front end: validate configurations, certify them, print weight
//! sequences, plan Kähler inflations and re-check emitted documents.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use sympdiv::checks::Checklist;
use sympdiv::cusp::{certify_affine_ruled, hypothesis_checks, verify_certificate, weight_sequence, AffineRuledCertificate};
use sympdiv::document::{from_json, to_json, ConfigDocument, CERTIFICATE_SCHEMA, CONFIG_SCHEMA, PLAN_SCHEMA};
use sympdiv::dot::{certificate_dots, config_dot};
use sympdiv::exceptional::Bounds;
use sympdiv::inflation::{plan_kahler, verify_plan, InflationPlan, NormalizedVector};
use sympdiv::lattice::parse_rational;
use sympdiv::Error;

#[derive(Parser)]
#[command(name = "sympdiv", version, about = "Exact lattice calculus for symplectic divisors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration document: graph consistency, area hypothesis, tree shape.
    Validate {
        path: PathBuf,
        /// Write the dual graph to this file in DOT format.
        #[arg(long, value_name = "FILE")]
        dot: Option<PathBuf>,
    },
    /// Run the reduction and cusp pipeline and print the certificate as JSON.
    Certify {
        path: PathBuf,
        /// Write the dual graph of every pipeline stage into this directory.
        #[arg(long, value_name = "DIR")]
        dot: Option<PathBuf>,
        /// Largest absolute coefficient searched when enumerating exceptional classes.
        #[arg(long)]
        coeff_bound: Option<i64>,
        /// Area bound used when enumerating exceptional classes, as "p/q".
        #[arg(long)]
        area_bound: Option<String>,
    },
    /// Print the weight sequence W(p,q) with its sum identities.
    Cusp { p: i64, q: i64 },
    /// Plan a Kähler realization of a normalized reduced vector, or replay a plan.
    Inflate {
        /// Number of exceptional classes; must match the target length minus one.
        #[arg(long)]
        n: Option<usize>,
        /// Base genus.
        #[arg(long, default_value_t = 1)]
        g: u32,
        /// Comma-separated δ_B,δ_1,…,δ_n as rationals.
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
        /// Replay the plan in this file instead of planning.
        #[arg(long, value_name = "PLAN")]
        verify_only: Option<PathBuf>,
    },
    /// Re-verify a certificate, plan or configuration document.
    Check { path: PathBuf },
}

/// Exit status 1 for failed checks, 2 for unusable input.
enum Failure {
    Check(String),
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(_) => Failure::Input(e.to_string()),
            e => Failure::Check(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<(), Failure>;

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn input_err(e: Error) -> Failure {
    Failure::Input(e.to_string())
}

fn report(checks: &Checklist) {
    for c in &checks.0 {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        if c.detail.is_empty() {
            println!("{verdict} {}", c.name);
        } else {
            println!("{verdict} {}: {}", c.name, c.detail);
        }
    }
}

fn verdict(checks: &Checklist, what: &str) -> Outcome {
    if checks.all_passed() {
        Ok(())
    } else {
        let names: Vec<_> = checks.failures().iter().map(|c| c.name.clone()).collect();
        Err(Failure::Check(format!("{what}: {}", names.join("; "))))
    }
}

fn write_file(path: &Path, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn validate(path: &Path, dot: Option<&Path>) -> Outcome {
    let doc = ConfigDocument::parse(&read(path)?).map_err(input_err)?;
    let (cfg, areas) = doc.build().map_err(input_err)?;
    let mut checks = Checklist::new();
    let problems = cfg.validate();
    checks.push("graph", problems.is_empty(), if problems.is_empty() { "consistent".into() } else { problems.join("; ") });
    if problems.is_empty() {
        match &areas {
            Some(w) => checks.extend("", &hypothesis_checks(&cfg, w).map_err(input_err)?),
            None => println!("note: no areas given, hypothesis not checked"),
        }
    }
    report(&checks);
    if let Some(p) = dot {
        write_file(p, &config_dot(&cfg, "input"))?;
    }
    verdict(&checks, "validation failed")
}

fn certify(path: &Path, dot: Option<&Path>, coeff: Option<i64>, area: Option<&str>) -> Outcome {
    let doc = ConfigDocument::parse(&read(path)?).map_err(input_err)?;
    let (cfg, areas) = doc.build().map_err(input_err)?;
    let w = areas.ok_or_else(|| Failure::Input("areas: required for certify".into()))?;
    let mut bounds = Bounds::default();
    if let Some(c) = coeff {
        bounds.coeff = c;
    }
    if let Some(a) = area {
        bounds.area = Some(parse_rational(a).map_err(|e| Failure::Input(format!("--area-bound: {e}")))?);
    }
    let cert = certify_affine_ruled(&cfg, &w, &bounds).map_err(|e| Failure::Check(e.to_string()))?;
    println!("{}", to_json(&cert));
    if let Some(dir) = dot {
        fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
        for (i, (stage, text)) in certificate_dots(&cert)?.iter().enumerate() {
            write_file(&dir.join(format!("{i:02}-{stage}.dot")), text)?;
        }
    }
    if cert.all_green() {
        Ok(())
    } else {
        Err(Failure::Check("certificate has failing checks".into()))
    }
}

fn cusp(p: i64, q: i64) -> Outcome {
    let w = weight_sequence(p, q).map_err(input_err)?;
    let text: Vec<String> = w.weights.iter().map(|m| m.to_string()).collect();
    println!("{}", text.join(" "));
    println!("sum m^2 = {} (pq = {})", w.sum_squares(), p * q);
    println!("sum m = {} (p+q-1 = {})", w.sum(), p + q - 1);
    verdict(&w.checks(), "weight identities")
}

fn inflate(n: Option<usize>, g: u32, target: Option<&str>, verify_only: Option<&Path>) -> Outcome {
    if let Some(path) = verify_only {
        let plan: InflationPlan = from_json(&read(path)?).map_err(input_err)?;
        let checks = verify_plan(&plan);
        report(&checks);
        return verdict(&checks, "plan rejected");
    }
    let text = target.ok_or_else(|| Failure::Input("--target is required unless --verify-only is given".into()))?;
    let target = NormalizedVector::parse(g, text).map_err(input_err)?;
    if let Some(n) = n {
        if n != target.n() {
            return Err(Failure::Input(format!("--n {n} but the target has {} entries", target.entries.len())));
        }
    }
    let plan = plan_kahler(&target)?;
    println!("{}", to_json(&plan));
    Ok(())
}

fn check(path: &Path) -> Outcome {
    let text = read(path)?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let schema = value.get("schema").and_then(|s| s.as_str()).unwrap_or(CONFIG_SCHEMA);
    match schema {
        CERTIFICATE_SCHEMA => {
            let cert: AffineRuledCertificate = from_json(&text).map_err(input_err)?;
            let checks = verify_certificate(&cert)?;
            report(&checks);
            verdict(&checks, "certificate rejected")
        }
        PLAN_SCHEMA => {
            let plan: InflationPlan = from_json(&text).map_err(input_err)?;
            let checks = verify_plan(&plan);
            report(&checks);
            verdict(&checks, "plan rejected")
        }
        CONFIG_SCHEMA => validate(path, None),
        other => Err(Failure::Input(format!("schema: unknown document type {other}"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Validate { path, dot } => validate(path, dot.as_deref()),
        Command::Certify { path, dot, coeff_bound, area_bound } => certify(path, dot.as_deref(), *coeff_bound, area_bound.as_deref()),
        Command::Cusp { p, q } => cusp(*p, *q),
        Command::Inflate { n, g, target, verify_only } => inflate(*n, *g, target.as_deref(), verify_only.as_deref()),
        Command::Check { path } => check(path),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Check(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
