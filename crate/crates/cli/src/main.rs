//! Command-line surface for the projection-sum toolkit.
//!
//! Exit codes: 0 — success / verdict produced; 2 — infeasible, failed
//! verification or unknown outcome; 1 — usage or internal error.

use anyhow::{anyhow, Context, Result};
use clap::{Args, Parser, Subcommand};
use projsum_core::classify::{
    classify, exactness_window, uhf_sigma_contains, uhf_sigma_enumerate, Answer, SupernaturalNumber,
};
use projsum_core::exactnum::{QuadraticReal, Rational};
use projsum_core::flatten::build_flattener;
use projsum_core::relations::{seminorm_lower_bound, NcPoly};
use projsum_core::spectra::{self, SigmaTag};
use projsum_core::synth::{
    self, synth_delta_representation, synth_solve, verify_tuple, ProjectionTuple, SynthError,
};
use serde::Serialize;
use serde_json::json;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "projsum",
    about = "Exact spectra, classification dossiers and explicit matrix constructions \
             for scalar sums of projections",
    version
)]
struct Cli {
    /// Emit machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment endpoints for n projections, and membership of an optional scalar.
    Spectrum {
        n: u32,
        /// Scalar to test: `p/q`, a decimal, or `alpha:N` / `beta:N`.
        lambda: Option<String>,
        #[arg(long, default_value_t = 40)]
        depth: u32,
    },
    /// Two-sided orbit of a scalar under the interval self-map.
    Orbit {
        n: u32,
        lambda: String,
        /// Stop once the backward orbit passes below this value (default alpha_n).
        #[arg(long)]
        stop_below: Option<String>,
        /// Stop once the forward orbit passes above this value (default beta_n).
        #[arg(long)]
        stop_above: Option<String>,
        #[arg(long, default_value_t = 16)]
        max_steps: usize,
    },
    /// Classification dossier for the universal algebra at (n, lambda).
    Classify {
        n: u32,
        lambda: String,
        #[arg(long, default_value_t = 40)]
        depth: u32,
    },
    /// Synthesize an explicit projection tuple and write it as JSON.
    Synth {
        n: u32,
        lambda: String,
        /// Fix the matrix dimension (runs the solver directly).
        #[arg(long)]
        dim: Option<usize>,
        /// Comma-separated rank vector, e.g. `1,1,1,0`.
        #[arg(long)]
        ranks: Option<String>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[command(flatten)]
        out: TupleOutput,
    },
    /// Verify a tuple JSON file against the projection relations.
    Verify {
        file: PathBuf,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Synthesize a delta-approximate representation of a segment scalar.
    Delta {
        n: u32,
        /// Target scalar (may be irrational: `alpha:N`, `beta:N`).
        target: String,
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: TupleOutput,
    },
    /// Build a flattening polynomial and report its grid deviation.
    Flatten {
        /// Comma-separated roots, e.g. `0.1,-0.05`.
        #[arg(long, allow_hyphen_values = true)]
        roots: String,
        #[arg(long)]
        eps: f64,
        #[arg(long)]
        bound: f64,
    },
    /// Scalars realizable inside a UHF algebra.
    Uhf {
        n: u32,
        /// Supernatural number, e.g. `2:inf,3:2` (`1` for the trivial one).
        #[arg(long)]
        supernatural: String,
        /// Test a single scalar instead of enumerating.
        #[arg(long)]
        lambda: Option<String>,
        #[arg(long, default_value_t = 24)]
        qmax: u32,
        #[arg(long, default_value_t = 40)]
        depth: u32,
    },
    /// Sampled lower bound for the seminorm of a relation polynomial.
    Seminorm {
        /// Polynomial in the text syntax, e.g. `(1+0i)*x1*x2^ + (-1+0i)*1`.
        #[arg(long)]
        poly: String,
        /// Operator-norm radius of the sampled ball.
        #[arg(long, visible_alias = "K")]
        radius: f64,
        /// Comma-separated matrix dimensions, e.g. `2,4`.
        #[arg(long, default_value = "2,4")]
        dims: String,
        #[arg(long, default_value_t = 32)]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct TupleOutput {
    /// Output path for the tuple JSON (defaults to `tuple.json`).
    #[arg(long, default_value = "tuple.json")]
    output: PathBuf,
    /// Omit the generation timestamp for byte-reproducible output.
    #[arg(long)]
    no_timestamp: bool,
}

/// Scalar syntax: rationals (`7/3`, `2`, `1.25`), explicit quadratic forms
/// (`(5 - 1*sqrt(5))/2`), and the endpoint tokens `alpha:N` / `beta:N`.
fn parse_scalar(text: &str) -> Result<QuadraticReal> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("alpha:") {
        let n: u32 = rest.parse().context("bad endpoint index")?;
        return Ok(spectra::segment_endpoints(n)?.alpha().clone());
    }
    if let Some(rest) = text.strip_prefix("beta:") {
        let n: u32 = rest.parse().context("bad endpoint index")?;
        return Ok(spectra::segment_endpoints(n)?.beta().clone());
    }
    QuadraticReal::from_str(text).map_err(|e| anyhow!("cannot parse scalar {text:?}: {e}"))
}

fn parse_rational(text: &str) -> Result<Rational> {
    let scalar = parse_scalar(text)?;
    scalar
        .as_rational()
        .cloned()
        .ok_or_else(|| anyhow!("expected a rational scalar, got {scalar}"))
}

fn parse_list<T: FromStr>(text: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|e| anyhow!("bad {what} entry {part:?}: {e}"))
        })
        .collect()
}

#[derive(Serialize)]
struct ScalarOut {
    exact: String,
    decimal: String,
}

impl ScalarOut {
    fn new(v: &QuadraticReal) -> Self {
        ScalarOut {
            exact: v.to_string(),
            decimal: v.to_decimal(12),
        }
    }
}

/// Outcome of a subcommand: the JSON payload, the human-readable text, and
/// whether the result is a definite verdict (exit 0) or an unknown/failed
/// outcome (exit 2).
struct Outcome {
    payload: serde_json::Value,
    text: String,
    definite: bool,
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Spectrum { n, lambda, depth } => cmd_spectrum(*n, lambda.as_deref(), *depth),
        Command::Orbit {
            n,
            lambda,
            stop_below,
            stop_above,
            max_steps,
        } => cmd_orbit(
            *n,
            lambda,
            stop_below.as_deref(),
            stop_above.as_deref(),
            *max_steps,
        ),
        Command::Classify { n, lambda, depth } => cmd_classify(*n, lambda, *depth),
        Command::Synth {
            n,
            lambda,
            dim,
            ranks,
            seed,
            tol,
            out,
        } => cmd_synth(*n, lambda, *dim, ranks.as_deref(), *seed, *tol, out),
        Command::Verify { file, tol } => cmd_verify(file, *tol),
        Command::Delta {
            n,
            target,
            delta,
            seed,
            out,
        } => cmd_delta(*n, target, *delta, *seed, out),
        Command::Flatten { roots, eps, bound } => cmd_flatten(roots, *eps, *bound),
        Command::Uhf {
            n,
            supernatural,
            lambda,
            qmax,
            depth,
        } => cmd_uhf(*n, supernatural, lambda.as_deref(), *qmax, *depth),
        Command::Seminorm {
            poly,
            radius,
            dims,
            samples,
            seed,
        } => cmd_seminorm(poly, *radius, dims, *samples, *seed),
    }
}

fn cmd_spectrum(n: u32, lambda: Option<&str>, depth: u32) -> Result<Outcome> {
    let mut text = String::new();
    let mut payload = json!({ "command": "spectrum", "n": n, "depth": depth });
    if n >= 4 {
        let seg = spectra::segment_endpoints(n)?;
        text.push_str(&format!(
            "alpha_{n} = {} ~ {}\nbeta_{n}  = {} ~ {}\n",
            seg.alpha(),
            seg.alpha().to_decimal(12),
            seg.beta(),
            seg.beta().to_decimal(12)
        ));
        payload["alpha"] = serde_json::to_value(ScalarOut::new(seg.alpha()))?;
        payload["beta"] = serde_json::to_value(ScalarOut::new(seg.beta()))?;
    } else {
        text.push_str(&format!(
            "the spectrum for n = {n} is a finite rational list; no segment\n"
        ));
    }
    let mut definite = true;
    if let Some(lambda_text) = lambda {
        let lambda = parse_scalar(lambda_text)?;
        let status = spectra::sigma_membership(n, &lambda, depth)?;
        text.push_str(&format!("membership of {lambda}: {status}\n"));
        payload["lambda"] = serde_json::to_value(ScalarOut::new(&lambda))?;
        payload["membership"] = serde_json::to_value(&status)?;
        definite = status.tag != SigmaTag::UnknownBeyondDepth;
    }
    Ok(Outcome {
        payload,
        text,
        definite,
    })
}

fn cmd_orbit(
    n: u32,
    lambda: &str,
    stop_below: Option<&str>,
    stop_above: Option<&str>,
    max_steps: usize,
) -> Result<Outcome> {
    let seed = parse_scalar(lambda)?;
    let seg = spectra::segment_endpoints(n)?;
    let below = match stop_below {
        Some(s) => parse_scalar(s)?,
        None => seg.alpha().clone(),
    };
    let above = match stop_above {
        Some(s) => parse_scalar(s)?,
        None => seg.beta().clone(),
    };
    let orbit = spectra::orbit(n, &seed, &below, &above, max_steps)?;
    let mut text = format!(
        "orbit of {seed} under f(x) = {} - 1/(x-1), seed at position {}\n",
        n - 1,
        orbit.seed_index
    );
    for (i, p) in orbit.points.iter().enumerate() {
        let marker = if i == orbit.seed_index {
            " <- seed"
        } else {
            ""
        };
        text.push_str(&format!("  {} ~ {}{}\n", p, p.to_decimal(10), marker));
    }
    text.push_str(&format!(
        "backward truncation: {:?}, forward truncation: {:?}\n",
        orbit.backward_truncation, orbit.forward_truncation
    ));
    let payload = json!({
        "command": "orbit",
        "n": n,
        "seed_index": orbit.seed_index,
        "points": orbit.points.iter().map(ScalarOut::new).collect::<Vec<_>>(),
        "backward_truncation": orbit.backward_truncation,
        "forward_truncation": orbit.forward_truncation,
    });
    Ok(Outcome {
        payload,
        text,
        definite: true,
    })
}

fn cmd_classify(n: u32, lambda: &str, depth: u32) -> Result<Outcome> {
    let lambda = parse_scalar(lambda)?;
    let dossier = classify(n, &lambda, depth)?;
    let definite = dossier.sigma_status.tag != SigmaTag::UnknownBeyondDepth;
    let mut payload = serde_json::to_value(&dossier)?;
    payload["command"] = json!("classify");
    payload["depth"] = json!(depth);
    Ok(Outcome {
        payload,
        text: dossier.to_string(),
        definite,
    })
}

fn write_tuple(tuple: &ProjectionTuple, out: &TupleOutput) -> Result<serde_json::Value> {
    let mut value = serde_json::to_value(tuple)?;
    if !out.no_timestamp {
        let secs = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        value["generated_unix_secs"] = json!(secs);
    }
    let body = serde_json::to_string_pretty(&value)?;
    std::fs::write(&out.output, body.as_bytes())
        .with_context(|| format!("writing {}", out.output.display()))?;
    Ok(value)
}

fn tuple_summary(tuple: &ProjectionTuple, path: &Path) -> String {
    format!(
        "n = {}, lambda = {}, dim = {}, ranks {:?}\nmethod: {}\nresiduals: hermitian {:.3e}, \
         idempotent {:.3e}, sum {:.3e}\nwrote {}\n",
        tuple.n(),
        tuple.lambda(),
        tuple.dim(),
        tuple.ranks(),
        tuple.provenance().method,
        tuple.residuals().hermitian,
        tuple.residuals().idempotent,
        tuple.residuals().sum,
        path.display()
    )
}

fn cmd_synth(
    n: u32,
    lambda: &str,
    dim: Option<usize>,
    ranks: Option<&str>,
    seed: u64,
    tol: f64,
    out: &TupleOutput,
) -> Result<Outcome> {
    let lambda = parse_rational(lambda)?;
    let ranks_vec: Option<Vec<usize>> = match ranks {
        Some(text) => Some(parse_list(text, "rank")?),
        None => None,
    };
    let result = match dim {
        Some(dim) => synth_solve(
            n,
            &lambda,
            dim,
            ranks_vec.as_deref(),
            seed,
            tol,
            synth::DEFAULT_MAX_ITER.max(150 * dim as u64),
            synth::DEFAULT_RESTARTS,
        ),
        None => synth::synth_auto_with(n, &lambda, seed, tol),
    };
    match result {
        Ok(tuple) => {
            let file_value = write_tuple(&tuple, out)?;
            Ok(Outcome {
                payload: json!({ "command": "synth", "outcome": "ok", "tuple": file_value }),
                text: tuple_summary(&tuple, &out.output),
                definite: true,
            })
        }
        Err(e @ (SynthError::Infeasible { .. } | SynthError::SynthesisFailed { .. })) => {
            Ok(Outcome {
                payload: json!({ "command": "synth", "outcome": "infeasible", "detail": e.to_string() }),
                text: format!("{e}\n"),
                definite: false,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_verify(file: &Path, tol: f64) -> Result<Outcome> {
    let body =
        std::fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let tuple: ProjectionTuple = serde_json::from_str(&body).context("parsing tuple JSON")?;
    let report = verify_tuple(&tuple, tol);
    let text = format!(
        "hermitian defect  {:.3e}\nidempotent defect {:.3e}\nsum defect        {:.3e}\nmeasured ranks    \
         {:?}\ntrace identity    {}\nverdict: {}\n",
        report.hermitian_defect,
        report.idempotent_defect,
        report.sum_defect,
        report.measured_ranks,
        report.trace_identity,
        if report.pass { "PASS" } else { "FAIL" }
    );
    let definite = report.pass;
    Ok(Outcome {
        payload: json!({ "command": "verify", "report": serde_json::to_value(&report)? }),
        text,
        definite,
    })
}

fn cmd_delta(n: u32, target: &str, delta: f64, seed: u64, out: &TupleOutput) -> Result<Outcome> {
    let target = parse_scalar(target)?;
    match synth_delta_representation(n, &target, delta, seed) {
        Ok(tuple) => {
            let file_value = write_tuple(&tuple, out)?;
            let mut text = tuple_summary(&tuple, &out.output);
            if let Some(detail) = &tuple.provenance().detail {
                text.push_str(&format!("{detail}\n"));
            }
            Ok(Outcome {
                payload: json!({ "command": "delta", "outcome": "ok", "tuple": file_value }),
                text,
                definite: true,
            })
        }
        Err(e @ (SynthError::Infeasible { .. } | SynthError::SynthesisFailed { .. })) => {
            Ok(Outcome {
                payload: json!({ "command": "delta", "outcome": "failed", "detail": e.to_string() }),
                text: format!("{e}\n"),
                definite: false,
            })
        }
        Err(e) => Err(e.into()),
    }
}

fn cmd_flatten(roots: &str, eps: f64, bound: f64) -> Result<Outcome> {
    let roots: Vec<f64> = if roots.trim().is_empty() {
        Vec::new()
    } else {
        parse_list(roots, "root")?
    };
    match build_flattener(&roots, eps, bound) {
        Ok(h) => {
            let (sup, argmax) = h.grid_deviation();
            let root_values: Vec<f64> = h.roots().iter().map(|&r| h.eval(r)).collect();
            let payload = json!({
                "command": "flatten",
                "outcome": "ok",
                "roots": h.roots(),
                "eps": h.eps(),
                "eps1": h.eps1(),
                "bound": h.bound(),
                "factor_degree": h.smooth_factor().len().saturating_sub(1),
                "total_degree": h.degree(),
                "chebyshev_coefficients": h.smooth_factor(),
                "monomial_coefficients": h.monomial_coefficients(),
                "grid": {
                    "points": projsum_core::flatten::GRID_POINTS,
                    "sup_deviation": sup,
                    "argmax": argmax,
                },
                "values_at_roots": root_values,
            });
            let text = format!(
                "flattener built: factor degree {}, total degree {}, grid sup |h(t)-t| = {:.3e} \
                 (< eps = {eps})\n",
                h.smooth_factor().len().saturating_sub(1),
                h.degree(),
                sup
            );
            Ok(Outcome {
                payload,
                text,
                definite: true,
            })
        }
        Err(e @ projsum_core::flatten::FlattenError::ApproximationFailure { .. }) => Ok(Outcome {
            payload: json!({ "command": "flatten", "outcome": "failed", "detail": e.to_string() }),
            text: format!("{e}\n"),
            definite: false,
        }),
        Err(e) => Err(e.into()),
    }
}

fn cmd_uhf(
    n: u32,
    supernatural: &str,
    lambda: Option<&str>,
    qmax: u32,
    depth: u32,
) -> Result<Outcome> {
    let nu: SupernaturalNumber = supernatural
        .parse()
        .map_err(|e| anyhow!("bad supernatural number: {e}"))?;
    if let Some(lambda_text) = lambda {
        let lambda = parse_rational(lambda_text)?;
        let verdict = uhf_sigma_contains(n, &lambda, &nu, depth)?;
        let text = format!(
            "lambda = {lambda} in the UHF algebra with invariant {nu}: {:?}\n  membership: {}\n  \
             denominator divides: {}{}\n",
            verdict.answer,
            verdict.membership,
            verdict.denominator_divides,
            if verdict.candidate_basis {
                "\n  note: membership rests on an uncertified candidate point"
            } else {
                ""
            }
        );
        let definite = verdict.answer != Answer::Unknown;
        Ok(Outcome {
            payload: json!({ "command": "uhf", "n": n, "supernatural": nu.to_string(),
                             "lambda": lambda.to_string(), "verdict": serde_json::to_value(&verdict)? }),
            text,
            definite,
        })
    } else {
        let points = uhf_sigma_enumerate(n, &nu, qmax, depth)?;
        let mut text = format!(
            "scalars realizable with {n} projections in the UHF algebra with invariant {nu} \
             (denominators up to {qmax}):\n"
        );
        for p in &points {
            text.push_str(&format!("  {p}\n"));
        }
        if n >= 5 {
            text.push_str(
                "note: the set is not closed; it accumulates at the irrational segment \
                 endpoints, which are never members\n",
            );
        }
        let window = exactness_window(n, depth).ok();
        let _ = window; // windows are reported by `classify`; enumeration stays spectral
        Ok(Outcome {
            payload: json!({ "command": "uhf", "n": n, "supernatural": nu.to_string(),
                             "qmax": qmax,
                             "points": points.iter().map(|p| p.to_string()).collect::<Vec<_>>() }),
            text,
            definite: true,
        })
    }
}

fn cmd_seminorm(poly: &str, radius: f64, dims: &str, samples: u32, seed: u64) -> Result<Outcome> {
    let p: NcPoly = poly.parse().map_err(|e| anyhow!("bad polynomial: {e}"))?;
    let dims: Vec<usize> = parse_list(dims, "dimension")?;
    if !radius.is_finite() || radius <= 0.0 {
        return Err(anyhow!("the radius must be positive"));
    }
    let bound = seminorm_lower_bound(&p, radius, &dims, samples, seed);
    let text = format!(
        "seminorm lower bound at radius {radius} over dims {dims:?} with {samples} samples: \
         {bound:.12}\n"
    );
    Ok(Outcome {
        payload: json!({ "command": "seminorm", "poly": p.to_string(), "radius": radius,
                         "dims": dims, "samples": samples, "seed": seed, "lower_bound": bound }),
        text,
        definite: true,
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; everything else is a
            // usage error (exit 1 by this tool's convention).
            use clap::error::ErrorKind;
            let kind = e.kind();
            let _ = e.print();
            return if matches!(kind, ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    match run(&cli) {
        Ok(outcome) => {
            if cli.json {
                println!(
                    "{}",
                    serde_json::to_string_pretty(&outcome.payload).expect("serializable")
                );
            } else {
                print!("{}", outcome.text);
            }
            if outcome.definite {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
