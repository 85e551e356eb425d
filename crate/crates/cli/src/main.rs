use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use copo_core::apps::{
    brute_alpha_weighted, chromatic_bound, sqp_bound, sqp_reciprocal_bound, stability_bound,
    AppBound, MAX_ALPHA_VERTICES, MAX_CHI_VERTICES,
};
use copo_core::cones::{
    build_membership, decide_membership, screen_copositive, validate_certificate, ConeKind, Verdict,
};
use copo_core::formats::{
    certificate_from_json, certificate_to_json, format_rational, graph_from_str, matrix_from_json,
    program_from_json, program_to_json, weights_from_str,
};
use copo_core::pathology::{
    c5_padded_cp, c5_padded_matrix, ex1_growth_bound, ex1_pattern, ex3_cp, ex3_min_y1, ex3_pattern,
    khachiyan_cp, verify_ex1_necessary, verify_ex3_cop, verify_ex3_necessary, PathologyInstance,
    PathologyKind,
};
use copo_core::poly::{from_f64, rat, ratio};
use copo_core::relax::solve_relaxation;
use copo_core::sdp::SdpStatus;
use copo_core::Error;

#[derive(Parser)]
#[command(
    name = "copo",
    version,
    about = "Inner SDP approximations of copositive programs"
)]
struct Cli {
    /// Also write the JSON report to this file.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Seed for randomized screening.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct ConeOpts {
    #[arg(long, default_value = "K")]
    cone: ConeKind,
    #[arg(long, default_value_t = 0)]
    level: u32,
    #[arg(long, default_value_t = 1e-6)]
    eps: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a matrix lies in K^(r) or Q^(r).
    Membership {
        matrix: PathBuf,
        #[command(flatten)]
        opts: ConeOpts,
        /// Write the certificate here when the verdict is MEMBER.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Solve the relaxation of a copositive program.
    Relax {
        program: PathBuf,
        #[command(flatten)]
        opts: ConeOpts,
        /// Box bound R; y is confined to [-2R, 2R].
        #[arg(long = "box", default_value_t = 1e4)]
        box_bound: f64,
        /// Write the per-constraint certificates here.
        #[arg(long)]
        certificates: Option<PathBuf>,
    },
    /// Upper bound on the (weighted) stability number.
    Alpha {
        graph: PathBuf,
        #[arg(long)]
        weights: Option<PathBuf>,
        /// Matrix B of the bound; defaults to the canonical one.
        #[arg(long = "b-matrix")]
        b_matrix: Option<PathBuf>,
        #[command(flatten)]
        opts: ConeOpts,
    },
    /// Lower bound on the chromatic number.
    Chroma {
        graph: PathBuf,
        #[command(flatten)]
        opts: ConeOpts,
    },
    /// Bound for min x^T M x over the simplex, or its reciprocal.
    Sqp {
        matrix: PathBuf,
        #[command(flatten)]
        opts: ConeOpts,
        #[arg(long)]
        reciprocal: bool,
    },
    /// Emit one of the pathological programs with its analytic facts.
    Pathology {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
        example: u8,
        #[arg(long, default_value_t = 3)]
        n: usize,
        /// Write the program file here.
        #[arg(long)]
        program: Option<PathBuf>,
    },
    /// Re-check a certificate against a matrix in exact arithmetic.
    Certify {
        matrix: PathBuf,
        certificate: PathBuf,
        #[arg(long, default_value_t = 1e-6)]
        eps: f64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {}", path.display(), e),
    })
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {}", path.display(), e),
    })
}

fn show(v: Option<f64>) -> String {
    v.map_or_else(|| "none".to_string(), |x| x.to_string())
}

fn status_code(status: SdpStatus) -> u8 {
    match status {
        SdpStatus::Optimal => 0,
        SdpStatus::PrimalInfeasible | SdpStatus::DualInfeasibleOrUnbounded => 1,
        SdpStatus::Inconclusive => 3,
    }
}

fn bound_report(b: &AppBound) -> Value {
    let rel = &b.relaxation;
    json!({
        "status": rel.status,
        "value": b.value,
        "sdp_value": rel.value,
        "y_star": rel.y_star,
        "box_bound": b.box_bound,
        "kind": rel.kind,
        "level": rel.level,
        "certified": rel.certified,
        "validations": rel.validations,
        "solver": rel.solver,
        "sandwich": rel.sandwich,
        "size": rel.size,
    })
}

fn pathology_report(inst: &PathologyInstance, seed: u64) -> Value {
    let n = inst.n;
    let checks = match inst.kind {
        PathologyKind::Ex2 => {
            let screen = screen_copositive(&c5_padded_matrix(), 100_000, seed);
            json!({ "m1_screen": screen })
        }
        PathologyKind::Ex3 => {
            let tol = ratio(1, 1_000_000_000);
            let y = ex3_pattern(n);
            json!({
                "level0_pattern": y.iter().map(format_rational).collect::<Vec<_>>(),
                "level0_pattern_check": verify_ex3_necessary(&rat(2), &y, &from_f64(5f64.sqrt()), &tol),
                "level0_z2_check": verify_ex3_necessary(&rat(2), &y, &rat(2), &tol),
                "level0_min_y1": ex3_min_y1(n).to_string(),
                "optimum_check": verify_ex3_cop(&rat(2), &vec![rat(0); n], &rat(2)),
            })
        }
        PathologyKind::Ex1 => {
            let y = ex1_pattern(n);
            json!({
                "pattern": y.iter().map(format_rational).collect::<Vec<_>>(),
                "pattern_check": verify_ex1_necessary(&y),
                "y1_lower_bound": ex1_growth_bound(n).to_string(),
            })
        }
    };
    json!({
        "example": inst.kind,
        "n": n,
        "variables": inst.variables,
        "optimal_value": format_rational(&inst.optimal_value),
        "facts": inst.facts,
        "checks": checks,
        "program": serde_json::from_str::<Value>(&program_to_json(&inst.program)).expect("valid json"),
    })
}

fn run(cli: &Cli) -> Result<(Value, u8, String), Failure> {
    match &cli.command {
        Command::Membership {
            matrix,
            opts,
            certificate,
        } => {
            let m = matrix_from_json(&read(matrix)?)?;
            let problem = build_membership(opts.cone, &m, opts.level)?;
            let out = decide_membership(&problem, opts.eps);
            if let (Some(path), Some(cert)) = (certificate, &out.certificate) {
                write(path, &certificate_to_json(cert))?;
            }
            let code = if out.verdict == Verdict::Inconclusive {
                3
            } else {
                0
            };
            let summary = serde_json::to_value(out.verdict)
                .unwrap()
                .as_str()
                .unwrap()
                .to_string();
            let report = json!({
                "verdict": out.verdict,
                "kind": opts.cone,
                "level": opts.level,
                "n": m.n(),
                "validation": out.validation,
                "solver": out.solver,
            });
            Ok((report, code, summary))
        }
        Command::Relax {
            program,
            opts,
            box_bound,
            certificates,
        } => {
            let prog = program_from_json(&read(program)?)?;
            let res = solve_relaxation(&prog, opts.level, opts.cone, *box_bound, opts.eps, None)?;
            if let Some(path) = certificates {
                write(
                    path,
                    &serde_json::to_string_pretty(&res.certificates).unwrap(),
                )?;
            }
            let summary = format!("{:?} value={}", res.status, show(res.value));
            let report = json!({
                "status": res.status,
                "value": res.value,
                "y_star": res.y_star,
                "kind": res.kind,
                "level": res.level,
                "box_bound": box_bound,
                "certified": res.certified,
                "validations": res.validations,
                "solver": res.solver,
                "size": res.size,
            });
            Ok((report, status_code(res.status), summary))
        }
        Command::Alpha {
            graph,
            weights,
            b_matrix,
            opts,
        } => {
            let mut g = graph_from_str(&read(graph)?)?;
            if let Some(w) = weights {
                g = g.with_weights(weights_from_str(&read(w)?)?)?;
            }
            let b = match b_matrix {
                Some(p) => Some(matrix_from_json(&read(p)?)?),
                None => None,
            };
            let bound = stability_bound(&g, b.as_ref(), opts.level, opts.cone, opts.eps)?;
            let mut report = bound_report(&bound);
            if g.n() <= MAX_ALPHA_VERTICES {
                let a = brute_alpha_weighted(&g)?;
                report["brute_alpha"] = json!(format_rational(&a));
            }
            report["weighted"] = json!(g.is_weighted());
            let summary = format!(
                "{} = {}",
                if opts.cone == ConeKind::K {
                    "theta"
                } else {
                    "nu"
                },
                show(bound.value)
            );
            Ok((report, status_code(bound.relaxation.status), summary))
        }
        Command::Chroma { graph, opts } => {
            let g = graph_from_str(&read(graph)?)?;
            let res = chromatic_bound(&g, opts.level, opts.cone, opts.eps)?;
            let mut report = bound_report(&res.bound);
            report["formulation"] = json!(res.formulation);
            if g.n() <= MAX_CHI_VERTICES {
                report["brute_chi"] = json!(copo_core::apps::brute_chi(&g)?);
            }
            let summary = format!("chromatic bound = {}", show(res.bound.value));
            Ok((report, status_code(res.bound.relaxation.status), summary))
        }
        Command::Sqp {
            matrix,
            opts,
            reciprocal,
        } => {
            let m = matrix_from_json(&read(matrix)?)?;
            let bound = if *reciprocal {
                sqp_reciprocal_bound(&m, opts.level, opts.cone, opts.eps, None)?
            } else {
                sqp_bound(&m, opts.level, opts.cone, opts.eps)?
            };
            let mut report = bound_report(&bound);
            report["reciprocal"] = json!(reciprocal);
            let summary = format!(
                "{} = {}",
                if *reciprocal { "q" } else { "p" },
                show(bound.value)
            );
            Ok((report, status_code(bound.relaxation.status), summary))
        }
        Command::Pathology {
            example,
            n,
            program,
        } => {
            let inst = match example {
                1 => khachiyan_cp(*n)?,
                2 => c5_padded_cp(),
                _ => ex3_cp(*n)?,
            };
            if let Some(path) = program {
                write(path, &program_to_json(&inst.program))?;
            }
            let summary = format!("example {} with {} variables", example, inst.program.m);
            Ok((pathology_report(&inst, cli.seed), 0, summary))
        }
        Command::Certify {
            matrix,
            certificate,
            eps,
        } => {
            let m = matrix_from_json(&read(matrix)?)?;
            let cert = certificate_from_json(&read(certificate)?)?;
            let rep = validate_certificate(&m, &cert, *eps)?;
            let code = if rep.passed { 0 } else { 1 };
            let summary = format!(
                "certificate {} (residual {:e})",
                if rep.passed { "valid" } else { "invalid" },
                rep.residual
            );
            Ok((
                json!({ "kind": cert.kind, "level": cert.level, "report": rep }),
                code,
                summary,
            ))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok((report, code, summary)) => {
            let text = serde_json::to_string_pretty(&report).expect("serialisable");
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{}", text);
            eprintln!("{}", summary);
            if let Some(path) = &cli.output {
                if let Err(f) = write(path, &text) {
                    eprintln!("error: {}", f.message);
                    return ExitCode::from(2);
                }
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
