use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use ffk_core::document::{
    emit_example_named, load_frame, load_matrix, load_vector, to_json_string, write_file,
    FrameDocument, ReportDocument, ReportOptions,
};
use ffk_core::duality::{
    alternate_dual_bounds, canonical_dual_fusion, canonical_ratio_bounds, verify_alternate_dual,
    DEFAULT_RATIO_SAMPLES,
};
use ffk_core::fusion::{
    frame_bounds, max_robust_erasures, projection_energy, redundancy_at, transform_report,
    ErasureSearch, FrameBounds,
};
use ffk_core::sampling::unit_vectors;
use ffk_core::systems::{check_local_additivity, parseval_equivalences, redundancy_one_equivalence};
use ffk_core::{Execution, FrameError, FusionFrame, Tolerance};

#[derive(Parser)]
#[command(name = "ffk", version, about = "Analyze finite frames and fusion frames")]
struct Cli {
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolArgs {
    /// Relative singular-value cutoff for rank decisions
    #[arg(long, global = true, default_value_t = 1e-10)]
    tol_rank: f64,
    /// Relative cutoff for eigenvalue and bound equality
    #[arg(long, global = true, default_value_t = 1e-9)]
    tol_eig: f64,
    /// Absolute cutoff for reconstruction residuals
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol_recon: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Bounds, redundancy, excess, structural flags and erasure robustness
    Analyze {
        frame: PathBuf,
        /// Also write the report to this file
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Haar samples for the sampled redundancy cross-check
        #[arg(long, default_value_t = 4096)]
        samples: usize,
        /// Largest erasure count to certify (default: members − 1)
        #[arg(long)]
        erasure_budget: Option<usize>,
        /// Use the greedy erasure search
        #[arg(long)]
        greedy: bool,
    },
    /// Evaluate the redundancy function at a unit vector
    Redundancy {
        frame: PathBuf,
        #[arg(long)]
        at: PathBuf,
    },
    /// Canonical dual fusion frame with its redundancy-ratio check
    Dual {
        frame: PathBuf,
        #[arg(long, required = true)]
        canonical: bool,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RATIO_SAMPLES)]
        samples: usize,
        /// Fail when a ratio bound is violated
        #[arg(long)]
        strict: bool,
    },
    /// Check whether a candidate is an alternate dual fusion frame
    VerifyDual {
        frame: PathBuf,
        candidate: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_RATIO_SAMPLES)]
        samples: usize,
        #[arg(long)]
        strict: bool,
    },
    /// Certify robustness against erasures of members
    Erasure {
        frame: PathBuf,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, conflicts_with = "greedy")]
        exhaustive: bool,
        #[arg(long)]
        greedy: bool,
    },
    /// Image of a frame under an invertible operator
    Transform {
        frame: PathBuf,
        #[arg(long)]
        operator: PathBuf,
        /// Write the image frame here instead of embedding it in the output
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Checks on a frame document that carries local frames
    System {
        frame: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Write a built-in example document
    Example {
        #[arg(long)]
        name: String,
        #[arg(short = 'n')]
        n: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

type Outcome = Result<ExitCode, FrameError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            let mut error = json!({ "kind": e.kind(), "message": e.to_string() });
            if let Some(member) = e.member_index() {
                error["member"] = member.into();
            }
            eprintln!("{}", json!({ "error": error }));
            ExitCode::from(1)
        }
    }
}

fn print(value: &Value) -> Result<(), FrameError> {
    print!("{}", to_json_string(value)?);
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("core types serialize")
}

fn run(cli: Cli) -> Outcome {
    let tol = Tolerance::new(cli.tol.tol_rank, cli.tol.tol_eig, cli.tol.tol_recon)?;
    match cli.command {
        Command::Analyze {
            frame,
            report,
            seed,
            samples,
            erasure_budget,
            greedy,
        } => {
            let f = load_frame(&frame, tol)?.frame;
            let options = ReportOptions {
                seed,
                samples,
                erasure_budget,
                erasure_search: if greedy { ErasureSearch::Greedy } else { ErasureSearch::Auto },
                exec: Execution::default(),
            };
            let doc = ReportDocument::new(&f, &options)?;
            let text = doc.to_json();
            if let Some(path) = report {
                write_file(&path, &text)?;
            }
            print!("{text}");
            Ok(ExitCode::from(if doc.flags.bessel_only { 2 } else { 0 }))
        }
        Command::Redundancy { frame, at } => {
            let f = load_frame(&frame, tol)?.frame;
            let x = load_vector(&at)?;
            let value = redundancy_at(&f, &x)?;
            print(&json!({
                "redundancy": value,
                "projection_sum": projection_energy(&f, &x),
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Dual {
            frame,
            canonical: _,
            out,
            seed,
            samples,
            strict,
        } => {
            let f = load_frame(&frame, tol)?.frame;
            let dual = canonical_dual_fusion(&f)?;
            write_file(&out, &FrameDocument::from_frame(&dual).to_json())?;
            let bounds = frame_bounds(&f)?;
            // S⁻¹ has condition number B / A
            let k = bounds.ratio();
            let predicted = FrameBounds {
                lower: bounds.lower / (k * k),
                upper: bounds.upper * k * k,
            };
            let ratio = if f.has_unit_weights() {
                let r = canonical_ratio_bounds(&f, samples, seed, Execution::default())?;
                let r = if strict { r.require()? } else { r };
                to_value(&r)
            } else {
                json!({ "skipped": "ratio bounds apply to unit weights only" })
            };
            print(&json!({
                "out": out.display().to_string(),
                "frame_bounds": to_value(&bounds),
                "dual_bounds": to_value(&frame_bounds(&dual)?),
                "predicted_dual_bounds": to_value(&predicted),
                "ratio_bounds": ratio,
            }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::VerifyDual {
            frame,
            candidate,
            seed,
            samples,
            strict,
        } => {
            let f = load_frame(&frame, tol)?.frame;
            let c = load_frame(&candidate, tol)?.frame;
            let cert = verify_alternate_dual(&f, &c)?;
            let bounds = if cert.is_dual {
                let b = alternate_dual_bounds(&f, &c, samples, seed, Execution::default())?;
                let b = if strict { b.require()? } else { b };
                to_value(&b)
            } else {
                Value::Null
            };
            print(&json!({ "certificate": to_value(&cert), "bounds": bounds }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Erasure {
            frame,
            budget,
            exhaustive,
            greedy,
        } => {
            let f = load_frame(&frame, tol)?.frame;
            let search = match (exhaustive, greedy) {
                (true, _) => ErasureSearch::Exhaustive,
                (_, true) => ErasureSearch::Greedy,
                _ => ErasureSearch::Auto,
            };
            let budget = budget.unwrap_or(f.len().saturating_sub(1));
            print(&to_value(&max_robust_erasures(&f, budget, search)?))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Transform {
            frame,
            operator,
            out,
        } => {
            let f = load_frame(&frame, tol)?.frame;
            let u = load_matrix(&operator)?;
            let (image, report) = transform_report(&f, &u)?;
            let doc = FrameDocument::from_frame(&image);
            let image_value = match out {
                Some(path) => {
                    write_file(&path, &doc.to_json())?;
                    Value::String(path.display().to_string())
                }
                None => doc.to_value(),
            };
            print(&json!({ "report": to_value(&report), "image": image_value }))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::System {
            frame,
            seed,
            samples,
        } => {
            let loaded = load_frame(&frame, tol)?;
            let system = loaded.system.ok_or_else(|| FrameError::Schema {
                path: "$.local_frames".into(),
                message: "the system command needs local frames".into(),
            })?;
            print(&system_summary(&loaded.frame, &system, seed, samples)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Example { name, n, out } => {
            let text = emit_example_named(&name, n)?.to_json();
            match out {
                Some(path) => write_file(&path, &text)?,
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn skipped(e: FrameError) -> Value {
    json!({ "skipped": { "kind": e.kind(), "message": e.to_string() } })
}

fn system_summary(
    frame: &FusionFrame,
    system: &ffk_core::systems::FusionFrameSystem,
    seed: u64,
    samples: usize,
) -> Result<Value, FrameError> {
    let mut largest_gap: f64 = 0.0;
    let mut all_equal = true;
    let mut orthogonal = true;
    for x in unit_vectors(frame.ambient_dim(), frame.field(), samples, seed) {
        let a = check_local_additivity(system, &x)?;
        largest_gap = largest_gap.max((a.fusion_value - a.local_sum).abs());
        all_equal &= a.equal;
        orthogonal = a.orthogonal_locals;
    }
    let parseval = match parseval_equivalences(system) {
        Ok(p) => to_value(&p),
        Err(e @ FrameError::LocalNotParseval { .. }) => skipped(e),
        Err(e) => return Err(e),
    };
    let redundancy_one = match redundancy_one_equivalence(system) {
        Ok(r) => to_value(&r),
        Err(e @ (FrameError::LocalNotParseval { .. } | FrameError::NotUniformWeights)) => skipped(e),
        Err(e) => return Err(e),
    };
    Ok(json!({
        "additivity": {
            "samples": samples,
            "seed": seed,
            "orthogonal_locals": orthogonal,
            "largest_gap": largest_gap,
            "equal": all_equal,
        },
        "parseval_equivalences": parseval,
        "redundancy_one_equivalence": redundancy_one,
    }))
}
