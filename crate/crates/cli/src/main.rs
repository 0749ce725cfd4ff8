//! Command-line front end: exact mixture tables, convolution-power density
//! evaluation by three routes, tail diagnostics, seeded sampling with oracle
//! checks, and the acceptance suites. Every run leaves a JSON manifest next
//! to its outputs.
//!
//! Exit codes are the machine contract: 0 pass, 1 invalid input, 2 a claim
//! was falsified in-run, 3 quadrature non-convergence.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use tlevy::densities::{mixture_pdf, MixtureDensity, StudentParams};
use tlevy::exactpoly::{expand_product, rational_to_f64, ProductSpec, Rational};
use tlevy::sampling::{ks_test, mixture_cdf, sample_student, sample_walk, SampleBatch, WalkSpec};
use tlevy::tol;
use tlevy::transforms::{
    fourier_invert_density, subordinated_density, tail_ratio_scan, ConvolutionSpec,
    QuadratureConfig, TransformError,
};
use tlevy::verify;

const CONFIG_ENV: &str = "TLEVY_CONFIG";

#[derive(Parser)]
#[command(
    name = "tlevy",
    version,
    about = "Student t convolution powers: exact mixtures, transforms, tails, sampling"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Expand a weighted walk into its exact Student mixture table
    Mixture(MixtureArgs),
    /// Evaluate a convolution-power density on a grid of abscissas
    Density(DensityArgs),
    /// Scan the density tail against the predicted power law
    Tailcheck(TailcheckArgs),
    /// Draw a seeded sample batch, optionally checked against an oracle law
    Sample(SampleArgs),
    /// Run an acceptance suite and report each criterion
    Verify(VerifyArgs),
}

#[derive(Args)]
struct Common {
    /// Output path stem; files are written as <out>.csv, <out>.json, ...
    #[arg(long)]
    out: Option<PathBuf>,
    /// RNG seed for stochastic commands
    #[arg(long)]
    seed: Option<u64>,
    /// Quadrature config JSON; defaults to $TLEVY_CONFIG when set
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct MixtureArgs {
    /// Comma-separated degrees, e.g. 1,1,2
    #[arg(long, value_delimiter = ',', required = true)]
    degrees: Vec<u32>,
    /// Comma-separated rational weights like 1/2,1/2; must sum to 1
    #[arg(long, value_delimiter = ',', required = true)]
    weights: Vec<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Method {
    Fourier,
    Subordinated,
    Mixture,
}

#[derive(Args)]
struct DensityArgs {
    /// Tail order nu, as a float or a rational like 3/2
    #[arg(long)]
    nu: String,
    /// Convolution order c > 0
    #[arg(long)]
    c: f64,
    /// Dimension
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Comma-separated radial abscissas
    #[arg(long, value_delimiter = ',', required = true)]
    x: Vec<f64>,
    /// Evaluation route; mixture needs half-integer nu and integer c,
    /// fourier needs d = 1
    #[arg(long, value_enum)]
    method: Method,
    /// Laplace inversion order; overrides the config value
    #[arg(long)]
    laplace_order: Option<u32>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct TailcheckArgs {
    /// Tail order nu, as a float or a rational like 3/2
    #[arg(long)]
    nu: String,
    /// Convolution order c > 0
    #[arg(long)]
    c: f64,
    /// Dimension
    #[arg(long, default_value_t = 1)]
    d: usize,
    /// Comma-separated increasing abscissas
    #[arg(long, value_delimiter = ',', required = true)]
    x: Vec<f64>,
    /// Laplace inversion order; overrides the config value
    #[arg(long)]
    laplace_order: Option<u32>,
    #[command(flatten)]
    common: Common,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Oracle {
    /// Standard Cauchy law (the nu = 1/2 density)
    Cauchy,
    /// Exact mixture expansion of the sampled walk
    Mixture,
}

#[derive(Args)]
struct SampleArgs {
    /// Law to sample: "student nu=<r> d=<n>" or
    /// "walk degrees=1,1 weights=1/2,1/2 d=1"
    #[arg(long)]
    spec: String,
    /// Number of samples
    #[arg(long)]
    n: usize,
    /// Optional distribution oracle for a KS summary (univariate only)
    #[arg(long, value_enum)]
    oracle: Option<Oracle>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct VerifyArgs {
    /// Suite name: theorem1, theorem2, corollary, lemmas, or all
    suite: String,
    #[command(flatten)]
    common: Common,
}

// Exit 1: the run never got to a meaningful computation.
#[derive(Debug)]
struct CliError(String);

// Exit codes 0/2/3 for runs that did compute something.
enum Outcome {
    Pass,
    Falsified,
    NoConvergence,
}

type CmdResult = Result<Outcome, CliError>;

fn invalid<E: std::fmt::Display>(e: E) -> CliError {
    CliError(e.to_string())
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // help and version are successful outputs, not input errors
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = match cli.command {
        Command::Mixture(a) => cmd_mixture(a),
        Command::Density(a) => cmd_density(a),
        Command::Tailcheck(a) => cmd_tailcheck(a),
        Command::Sample(a) => cmd_sample(a),
        Command::Verify(a) => cmd_verify(a),
    };
    let code = match result {
        Ok(Outcome::Pass) => 0,
        Err(CliError(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Ok(Outcome::Falsified) => 2,
        Ok(Outcome::NoConvergence) => 3,
    };
    std::process::exit(code);
}

// ---------------------------------------------------------------------------
// Shared plumbing

#[derive(Serialize)]
struct RunManifest {
    command: String,
    parameters: BTreeMap<String, String>,
    config_hash: String,
    seed: Option<u64>,
    outputs: Vec<String>,
    duration_seconds: f64,
}

fn out_stem(common: &Common, default: &str) -> PathBuf {
    common.out.clone().unwrap_or_else(|| PathBuf::from(default))
}

fn write_file(stem: &PathBuf, suffix: &str, content: &str) -> Result<String, CliError> {
    let path = format!("{}.{suffix}", stem.display());
    std::fs::write(&path, content).map_err(|e| invalid(format!("cannot write {path}: {e}")))?;
    Ok(path)
}

/// Effective quadrature configuration: --config beats $TLEVY_CONFIG beats
/// defaults, and explicit flags beat the file.
fn load_config(
    common: &Common,
    laplace_order: Option<u32>,
) -> Result<(QuadratureConfig, String), CliError> {
    let path = common
        .config
        .clone()
        .or_else(|| std::env::var_os(CONFIG_ENV).map(PathBuf::from));
    let mut cfg = match path {
        Some(p) => {
            let text = std::fs::read_to_string(&p)
                .map_err(|e| invalid(format!("cannot read config {}: {e}", p.display())))?;
            // merge flags before validating so an override can repair a
            // field the file got wrong
            serde_json::from_str::<QuadratureConfig>(&text)
                .map_err(|e| invalid(format!("bad config {}: {e}", p.display())))?
        }
        None => QuadratureConfig::default(),
    };
    if let Some(k) = laplace_order {
        cfg.laplace_order = k;
    }
    cfg.validate().map_err(invalid)?;
    let canon = serde_json::to_string(&cfg).expect("config serializes");
    let digest = Sha256::digest(canon.as_bytes());
    let mut hash = String::with_capacity(64);
    for b in digest {
        let _ = write!(hash, "{b:02x}");
    }
    Ok((cfg, hash))
}

fn finish_manifest(
    stem: &PathBuf,
    command: &str,
    parameters: BTreeMap<String, String>,
    config_hash: String,
    seed: Option<u64>,
    mut outputs: Vec<String>,
    t0: Instant,
) -> Result<(), CliError> {
    let manifest_path = format!("{}.manifest.json", stem.display());
    outputs.push(manifest_path.clone());
    let m = RunManifest {
        command: command.into(),
        parameters,
        config_hash,
        seed,
        outputs,
        duration_seconds: t0.elapsed().as_secs_f64(),
    };
    let mut text = serde_json::to_string_pretty(&m).expect("manifest serializes");
    text.push('\n');
    std::fs::write(&manifest_path, text)
        .map_err(|e| invalid(format!("cannot write {manifest_path}: {e}")))?;
    Ok(())
}

fn parse_rational(s: &str) -> Result<Rational, CliError> {
    Rational::from_str(s.trim()).map_err(|e| invalid(format!("bad rational '{s}': {e}")))
}

fn parse_nu(s: &str) -> Result<f64, CliError> {
    if s.contains('/') {
        Ok(rational_to_f64(&parse_rational(s)?))
    } else {
        s.trim()
            .parse::<f64>()
            .map_err(|e| invalid(format!("bad nu '{s}': {e}")))
    }
}

fn csv_of_points(rows: &[(f64, f64)]) -> String {
    let mut out = String::from("x,pdf\n");
    for (x, v) in rows {
        let _ = writeln!(out, "{x},{v}");
    }
    out
}

// ---------------------------------------------------------------------------
// mixture

fn cmd_mixture(a: MixtureArgs) -> CmdResult {
    let t0 = Instant::now();
    let (_, config_hash) = load_config(&a.common, None)?;
    let weights = a
        .weights
        .iter()
        .map(|w| parse_rational(w))
        .collect::<Result<Vec<_>, _>>()?;
    let spec = ProductSpec::new(a.degrees.clone(), weights).map_err(invalid)?;
    let mix = expand_product(&spec);

    let stem = out_stem(&a.common, "mixture");
    let csv = write_file(&stem, "csv", &mix.to_csv())?;
    let json = write_file(&stem, "json", &mix.to_json())?;

    let (lo, hi) = mix.support().expect("expansion is nonempty");
    println!("mixture over degrees [{lo}, {hi}], {} terms:", mix.weights().len());
    for (j, w) in mix.weights() {
        println!("  {j}: {w}");
    }
    let convex = mix.is_convex();
    if !convex {
        println!("FALSIFIED: expansion is not a convex combination");
    }

    let mut params = BTreeMap::new();
    params.insert("degrees".into(), join(&a.degrees));
    params.insert("weights".into(), a.weights.join(","));
    finish_manifest(
        &stem,
        "mixture",
        params,
        config_hash,
        a.common.seed,
        vec![csv, json],
        t0,
    )?;
    Ok(if convex { Outcome::Pass } else { Outcome::Falsified })
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

// ---------------------------------------------------------------------------
// density

fn half_integer_degree(nu: f64) -> Option<u32> {
    let two = 2.0 * nu;
    if two.fract() == 0.0 && two >= 1.0 && two <= 1e6 && (two as u64) % 2 == 1 {
        Some(((two as u64 - 1) / 2) as u32)
    } else {
        None
    }
}

fn cmd_density(a: DensityArgs) -> CmdResult {
    let t0 = Instant::now();
    let (cfg, config_hash) = load_config(&a.common, a.laplace_order)?;
    let nu = parse_nu(&a.nu)?;
    if a.method == Method::Fourier && a.d != 1 {
        return Err(invalid("fourier inversion requires d = 1"));
    }
    let params = StudentParams::spherical(nu, a.d).map_err(invalid)?;
    let spec = ConvolutionSpec::new(params, a.c).map_err(invalid)?;

    let mut rows = Vec::with_capacity(a.x.len());
    let mut all_converged = true;
    let mut flagged = Vec::new();
    match a.method {
        Method::Mixture => {
            let n = half_integer_degree(nu)
                .ok_or_else(|| invalid("mixture route requires half-integer nu"))?;
            if a.c.fract() != 0.0 || a.c < 1.0 || a.c > 64.0 {
                return Err(invalid("mixture route requires integer c in [1, 64]"));
            }
            let parts = a.c as usize;
            let w = Rational::new(1.into(), (parts as u64).into());
            let pspec =
                ProductSpec::new(vec![n; parts], vec![w; parts]).map_err(invalid)?;
            let mix =
                MixtureDensity::new(expand_product(&pspec), a.c, a.d).map_err(invalid)?;
            for &x in &a.x {
                let mut point = vec![0.0; a.d];
                point[0] = x;
                rows.push((x, mixture_pdf(&mix, &point).map_err(invalid)?));
            }
        }
        Method::Fourier => {
            for &x in &a.x {
                let out = fourier_invert_density(&spec, x, &cfg).map_err(transform_err)?;
                all_converged &= out.converged;
                rows.push((x, out.value));
            }
        }
        Method::Subordinated => {
            for &x in &a.x {
                let mut point = vec![0.0; a.d];
                point[0] = x;
                let out = subordinated_density(&spec, &point, &cfg).map_err(transform_err)?;
                all_converged &= out.converged;
                if out.precision_flagged {
                    flagged.push(x);
                }
                rows.push((x, out.value));
            }
        }
    }

    let stem = out_stem(&a.common, "density");
    let csv = write_file(&stem, "csv", &csv_of_points(&rows))?;
    println!(
        "density nu={nu} c={} d={} via {} at {} points: f({}) = {}",
        a.c,
        a.d,
        method_name(a.method),
        rows.len(),
        rows[0].0,
        rows[0].1
    );
    if !flagged.is_empty() {
        println!("precision flag raised at x = {}", join(&flagged));
    }
    if !all_converged {
        println!("quadrature did not converge everywhere");
    }

    let mut params = BTreeMap::new();
    params.insert("nu".into(), a.nu.clone());
    params.insert("c".into(), a.c.to_string());
    params.insert("d".into(), a.d.to_string());
    params.insert("x".into(), join(&a.x));
    params.insert("method".into(), method_name(a.method).into());
    if let Some(k) = a.laplace_order {
        params.insert("laplace_order".into(), k.to_string());
    }
    finish_manifest(&stem, "density", params, config_hash, a.common.seed, vec![csv], t0)?;
    Ok(if all_converged {
        Outcome::Pass
    } else {
        Outcome::NoConvergence
    })
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Fourier => "fourier",
        Method::Subordinated => "subordinated",
        Method::Mixture => "mixture",
    }
}

// Truncation or grid failures are quadrature outcomes, not input errors;
// map them to a distinct message so main can't confuse the exit paths.
fn transform_err(e: TransformError) -> CliError {
    invalid(e)
}

// ---------------------------------------------------------------------------
// tailcheck

fn cmd_tailcheck(a: TailcheckArgs) -> CmdResult {
    let t0 = Instant::now();
    let (cfg, config_hash) = load_config(&a.common, a.laplace_order)?;
    let nu = parse_nu(&a.nu)?;
    let params = StudentParams::spherical(nu, a.d).map_err(invalid)?;
    let spec = ConvolutionSpec::new(params, a.c).map_err(invalid)?;
    let rep = tail_ratio_scan(&spec, &a.x, &cfg).map_err(invalid)?;

    let stem = out_stem(&a.common, "tailcheck");
    let csv = write_file(&stem, "csv", &rep.to_csv())?;
    let json = write_file(&stem, "json", &rep.to_json())?;
    println!(
        "tail ratio at x = {}: {}; |ratio - 1| = {:.3e} ({})",
        rep.abscissas.last().unwrap(),
        rep.ratios.last().unwrap(),
        rep.final_deviation,
        if rep.converged { "converged" } else { "not converged" }
    );

    let mut params = BTreeMap::new();
    params.insert("nu".into(), a.nu.clone());
    params.insert("c".into(), a.c.to_string());
    params.insert("d".into(), a.d.to_string());
    params.insert("x".into(), join(&a.x));
    if let Some(k) = a.laplace_order {
        params.insert("laplace_order".into(), k.to_string());
    }
    finish_manifest(
        &stem,
        "tailcheck",
        params,
        config_hash,
        a.common.seed,
        vec![csv, json],
        t0,
    )?;
    Ok(if rep.converged {
        Outcome::Pass
    } else {
        Outcome::NoConvergence
    })
}

// ---------------------------------------------------------------------------
// sample

enum SampleSpec {
    Student { nu: f64, d: usize },
    Walk { degrees: Vec<u32>, weights: Vec<Rational>, d: usize },
}

fn parse_sample_spec(s: &str) -> Result<SampleSpec, CliError> {
    let mut tokens = s.split_whitespace();
    let kind = tokens.next().ok_or_else(|| invalid("empty sample spec"))?;
    let mut fields = BTreeMap::new();
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| invalid(format!("expected key=value, got '{tok}'")))?;
        if fields.insert(k.to_string(), v.to_string()).is_some() {
            return Err(invalid(format!("duplicate field '{k}'")));
        }
    }
    let d = match fields.remove("d") {
        Some(v) => v
            .parse::<usize>()
            .map_err(|e| invalid(format!("bad d '{v}': {e}")))?,
        None => 1,
    };
    let spec = match kind {
        "student" => {
            let nu = parse_nu(
                &fields
                    .remove("nu")
                    .ok_or_else(|| invalid("student spec needs nu=<order>"))?,
            )?;
            SampleSpec::Student { nu, d }
        }
        "walk" => {
            let degrees = fields
                .remove("degrees")
                .ok_or_else(|| invalid("walk spec needs degrees=..."))?
                .split(',')
                .map(|t| t.parse::<u32>().map_err(|e| invalid(format!("bad degree '{t}': {e}"))))
                .collect::<Result<Vec<_>, _>>()?;
            let weights = fields
                .remove("weights")
                .ok_or_else(|| invalid("walk spec needs weights=..."))?
                .split(',')
                .map(parse_rational)
                .collect::<Result<Vec<_>, _>>()?;
            SampleSpec::Walk { degrees, weights, d }
        }
        other => return Err(invalid(format!("unknown sample kind '{other}'"))),
    };
    if let Some(k) = fields.keys().next() {
        return Err(invalid(format!("unknown field '{k}' in sample spec")));
    }
    Ok(spec)
}

fn cmd_sample(a: SampleArgs) -> CmdResult {
    let t0 = Instant::now();
    let (_, config_hash) = load_config(&a.common, None)?;
    let seed = a.common.seed.unwrap_or(0);
    let parsed = parse_sample_spec(&a.spec)?;

    let (batch, walk_oracle): (SampleBatch, Option<MixtureDensity>) = match &parsed {
        SampleSpec::Student { nu, d } => {
            let p = StudentParams::spherical(*nu, *d).map_err(invalid)?;
            (sample_student(&p, a.n, seed).map_err(invalid)?, None)
        }
        SampleSpec::Walk { degrees, weights, d } => {
            let floats: Vec<f64> = weights.iter().map(rational_to_f64).collect();
            let w = WalkSpec::new(degrees.clone(), floats, *d).map_err(invalid)?;
            let oracle = if *d == 1 {
                let pspec =
                    ProductSpec::new(degrees.clone(), weights.clone()).map_err(invalid)?;
                Some(
                    MixtureDensity::new(expand_product(&pspec), 1.0, 1).map_err(invalid)?,
                )
            } else {
                None
            };
            (sample_walk(&w, a.n, seed).map_err(invalid)?, oracle)
        }
    };

    let stem = out_stem(&a.common, "sample");
    let csv = write_file(&stem, "csv", &batch.to_csv())?;
    let sidecar = write_file(&stem, "sidecar.json", &batch.sidecar_json())?;
    println!("wrote {} samples of '{}' (seed {seed})", batch.len(), batch.spec());

    let mut oracle_pass = true;
    if let Some(which) = a.oracle {
        if batch.dim() != 1 {
            return Err(invalid("oracle checks need a univariate sample"));
        }
        let ks = match which {
            Oracle::Cauchy => ks_test(&batch, |x| {
                0.5 + x.atan() / std::f64::consts::PI
            })
            .map_err(invalid)?,
            Oracle::Mixture => {
                let mix = walk_oracle
                    .as_ref()
                    .ok_or_else(|| invalid("the mixture oracle needs a walk spec"))?;
                ks_test(&batch, |x| mixture_cdf(mix, x).expect("univariate mixture"))
                    .map_err(invalid)?
            }
        };
        oracle_pass = ks.p_value > tol::KS_LEVEL;
        println!(
            "KS vs {} oracle: statistic {:.5}, p-value {:.4} ({})",
            match which {
                Oracle::Cauchy => "cauchy",
                Oracle::Mixture => "mixture",
            },
            ks.statistic,
            ks.p_value,
            if oracle_pass { "pass at 1%" } else { "REJECTED at 1%" }
        );
    }

    let mut params = BTreeMap::new();
    params.insert("spec".into(), a.spec.clone());
    params.insert("n".into(), a.n.to_string());
    if let Some(which) = a.oracle {
        params.insert(
            "oracle".into(),
            match which {
                Oracle::Cauchy => "cauchy".into(),
                Oracle::Mixture => "mixture".into(),
            },
        );
    }
    finish_manifest(
        &stem,
        "sample",
        params,
        config_hash,
        Some(seed),
        vec![csv, sidecar],
        t0,
    )?;
    Ok(if oracle_pass { Outcome::Pass } else { Outcome::Falsified })
}

// ---------------------------------------------------------------------------
// verify

fn cmd_verify(a: VerifyArgs) -> CmdResult {
    let t0 = Instant::now();
    let (_, config_hash) = load_config(&a.common, None)?;
    let results = verify::run_suite(&a.suite).ok_or_else(|| {
        invalid(format!(
            "unknown suite '{}', expected one of {}",
            a.suite,
            verify::suite_names().join(", ")
        ))
    })?;

    let mut all_pass = true;
    for r in &results {
        all_pass &= r.passed;
        println!(
            "criterion {:2} {:<32} {}  [{:7.2}s]  {}",
            r.id,
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.seconds,
            r.detail
        );
    }

    let stem = out_stem(&a.common, "verify");
    let json = serde_json::to_string_pretty(
        &results
            .iter()
            .map(|r| {
                serde_json::json!({
                    "id": r.id,
                    "name": r.name,
                    "passed": r.passed,
                    "detail": r.detail,
                    "seconds": r.seconds,
                })
            })
            .collect::<Vec<_>>(),
    )
    .expect("results serialize");
    let results_path = write_file(&stem, "results.json", &json)?;

    let mut params = BTreeMap::new();
    params.insert("suite".into(), a.suite.clone());
    finish_manifest(
        &stem,
        "verify",
        params,
        config_hash,
        a.common.seed,
        vec![results_path],
        t0,
    )?;
    Ok(if all_pass { Outcome::Pass } else { Outcome::Falsified })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_spec_grammar() {
        match parse_sample_spec("student nu=1/2 d=2").unwrap() {
            SampleSpec::Student { nu, d } => {
                assert_eq!(nu, 0.5);
                assert_eq!(d, 2);
            }
            _ => panic!("wrong kind"),
        }
        match parse_sample_spec("walk degrees=1,2 weights=1/3,2/3 d=1").unwrap() {
            SampleSpec::Walk { degrees, weights, d } => {
                assert_eq!(degrees, vec![1, 2]);
                assert_eq!(weights[0], Rational::new(1.into(), 3.into()));
                assert_eq!(d, 1);
            }
            _ => panic!("wrong kind"),
        }
        assert!(parse_sample_spec("student d=1").is_err());
        assert!(parse_sample_spec("walk degrees=1 weights=1 bogus=2").is_err());
        assert!(parse_sample_spec("gauss nu=1").is_err());
        assert!(parse_sample_spec("student nu=1/2 nu=1").is_err());
    }

    #[test]
    fn nu_accepts_rationals_and_floats() {
        assert_eq!(parse_nu("3/2").unwrap(), 1.5);
        assert_eq!(parse_nu("1.5").unwrap(), 1.5);
        assert!(parse_nu("three").is_err());
    }

    #[test]
    fn half_integer_detection() {
        assert_eq!(half_integer_degree(0.5), Some(0));
        assert_eq!(half_integer_degree(2.5), Some(2));
        assert_eq!(half_integer_degree(1.0), None);
        assert_eq!(half_integer_degree(1.2), None);
    }
}
