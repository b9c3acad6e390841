//! Command-line surface for the atom factorization pipeline: JSON I/O, one
//! subcommand per pipeline stage, a seeded instance generator, and
//! machine-readable verification reports.
//!
//! Exit codes: 0 success, 1 parse/dimension error, 2 singular input,
//! 3 unit input. `verify` exits 0 iff every report clause passes.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use atomfact::higman::linearize;
use atomfact::pencilfactor::factor_pencil;
use atomfact::trivialize::{trivialize_general, trivialize_linear};
use atomfact::{
    factor_matrix, generate, verify_factorization, AtomCertificate, AtomFactorization, Error,
    GenLimits, PMat, Pencil, UPoly,
};

#[derive(Parser)]
#[command(
    name = "atomfact",
    about = "Exact factorization of square matrices over Q[x] into atoms",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Factor a polynomial matrix into atoms
    Factor(FactorArgs),
    /// Verify a factorization document produced by `factor`
    Verify {
        /// Factorization document to check
        #[arg(long)]
        input: PathBuf,
        /// Where to write the verification report (stdout when omitted)
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Higman-linearize a polynomial matrix into P, L, Q
    Linearize {
        /// Input matrix document
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Trivialize a matrix relation C·U = 0
    Trivialize {
        /// JSON document holding the two matrices: {"c": ..., "u": ...}
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Factor a full non-unit linear pencil into linear atoms
    FactorPencil {
        /// Input matrix document with entries of degree at most 1
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Generate a random full non-unit instance, deterministic per seed
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        max_dim: usize,
        #[arg(long, default_value_t = 4)]
        max_deg: usize,
        #[arg(long, default_value_t = 8)]
        max_coeff_bits: u32,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct FactorArgs {
    /// Input matrix document; repeat the flag to factor a batch of files
    #[arg(long, required = true)]
    input: Vec<PathBuf>,
    /// Output file (single input) or output directory (batch mode)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Number of files factored in parallel in batch mode
    #[arg(long, default_value_t = 1)]
    jobs: usize,
}

/// Factorization document: the contract between `factor` and `verify`.
#[derive(Serialize, Deserialize)]
struct FactorDoc {
    input: PMat,
    atoms: Vec<PMat>,
    determinants: Vec<UPoly>,
    telemetry: Vec<TelemetryDoc>,
}

#[derive(Serialize, Deserialize)]
struct TelemetryDoc {
    stage: String,
    encoding_size: u64,
}

#[derive(Serialize, Deserialize)]
struct VerifyDoc {
    pass: bool,
    clauses: Vec<ClauseDoc>,
}

#[derive(Serialize, Deserialize)]
struct ClauseDoc {
    name: String,
    pass: bool,
    detail: String,
}

#[derive(Serialize, Deserialize)]
struct RelationDoc {
    c: PMat,
    u: PMat,
}

#[derive(Serialize, Deserialize)]
struct TrivDoc {
    n: PMat,
    n_inv: PMat,
    zero_cols: Vec<usize>,
    zero_rows: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct LinearizeDoc {
    p: PMat,
    l: Pencil,
    q: PMat,
    original_dim: usize,
    padding: usize,
}

#[derive(Serialize, Deserialize)]
struct PencilFactorDoc {
    atoms: Vec<PMat>,
    trailing_unit: PMat,
}

/// A failure routed to a process exit code per the CLI contract.
struct CliFailure {
    code: u8,
    message: String,
}

type CliResult<T> = std::result::Result<T, CliFailure>;

fn fail(code: u8, message: impl Into<String>) -> CliFailure {
    CliFailure {
        code,
        message: message.into(),
    }
}

fn from_core(err: Error) -> CliFailure {
    let code = match err {
        Error::Singular => 2,
        Error::UnitInput => 3,
        Error::Parse(_)
        | Error::NonSquare { .. }
        | Error::DimensionMismatch(_)
        | Error::NotLinear => 1,
        _ => 1,
    };
    fail(code, err.to_string())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let raw = fs::read_to_string(path)
        .map_err(|e| fail(1, format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| fail(1, format!("cannot parse {}: {e}", path.display())))
}

fn write_json<T: Serialize>(doc: &T, output: Option<&Path>) -> CliResult<()> {
    let mut text = serde_json::to_string_pretty(doc)
        .map_err(|e| fail(1, format!("cannot serialize output: {e}")))?;
    text.push('\n');
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| fail(1, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn factor_doc(m: &PMat) -> CliResult<FactorDoc> {
    let fact = factor_matrix(m).map_err(from_core)?;
    for st in &fact.telemetry {
        log::info!("stage {}: encoding size {}", st.stage, st.encoding_size);
    }
    Ok(FactorDoc {
        input: m.clone(),
        determinants: fact.certificates.iter().map(|c| c.det.clone()).collect(),
        telemetry: fact
            .telemetry
            .iter()
            .map(|t| TelemetryDoc {
                stage: t.stage.clone(),
                encoding_size: t.encoding_size,
            })
            .collect(),
        atoms: fact.atoms,
    })
}

fn cmd_factor(args: &FactorArgs) -> CliResult<()> {
    if args.input.len() == 1 {
        let m: PMat = read_json(&args.input[0])?;
        let doc = factor_doc(&m)?;
        return write_json(&doc, args.output.as_deref());
    }
    // Batch mode: each input file becomes <output dir>/<stem>.factored.json.
    let out_dir = args
        .output
        .as_deref()
        .ok_or_else(|| fail(1, "batch mode requires --output directory"))?;
    if !out_dir.is_dir() {
        return Err(fail(1, "batch mode --output must be an existing directory"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.max(1))
        .build()
        .map_err(|e| fail(1, format!("cannot build thread pool: {e}")))?;
    let results: Vec<CliResult<()>> = pool.install(|| {
        use rayon::prelude::*;
        args.input
            .par_iter()
            .map(|path| {
                let m: PMat = read_json(path)?;
                let doc = factor_doc(&m)?;
                let stem = path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .unwrap_or("matrix");
                let out = out_dir.join(format!("{stem}.factored.json"));
                write_json(&doc, Some(&out))
            })
            .collect()
    });
    for r in results {
        r?;
    }
    Ok(())
}

fn cmd_verify(input: &Path, output: Option<&Path>) -> CliResult<()> {
    let doc: FactorDoc = read_json(input)?;
    if doc.atoms.is_empty() {
        return Err(fail(1, "factorization document has no atoms"));
    }
    let certificates: Vec<AtomCertificate> = doc
        .determinants
        .iter()
        .map(|det| AtomCertificate {
            det: det.clone(),
            irreducible: false,
        })
        .collect();
    let fact = AtomFactorization {
        atoms: doc.atoms.clone(),
        certificates,
        telemetry: Vec::new(),
    };
    let report = verify_factorization(&doc.input, &fact);
    let out = VerifyDoc {
        pass: report.pass(),
        clauses: report
            .clauses
            .iter()
            .map(|c| ClauseDoc {
                name: c.name.clone(),
                pass: c.pass,
                detail: c.detail.clone(),
            })
            .collect(),
    };
    write_json(&out, output)?;
    if out.pass {
        Ok(())
    } else {
        let first = out
            .clauses
            .iter()
            .find(|c| !c.pass)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .unwrap_or_default();
        Err(fail(1, format!("verification failed ({first})")))
    }
}

fn cmd_linearize(input: &Path, output: Option<&Path>) -> CliResult<()> {
    let m: PMat = read_json(input)?;
    let out = linearize(&m).map_err(from_core)?;
    write_json(
        &LinearizeDoc {
            p: out.p,
            l: out.l,
            q: out.q,
            original_dim: out.original_dim,
            padding: out.padding,
        },
        output,
    )
}

fn cmd_trivialize(input: &Path, output: Option<&Path>) -> CliResult<()> {
    let rel: RelationDoc = read_json(input)?;
    let triv = if rel.c.is_linear() {
        trivialize_linear(&rel.c, &rel.u).map_err(from_core)?
    } else {
        trivialize_general(&rel.c, &rel.u).map_err(from_core)?
    };
    write_json(
        &TrivDoc {
            n: triv.n,
            n_inv: triv.n_inv,
            zero_cols: triv.zero_cols,
            zero_rows: triv.zero_rows,
        },
        output,
    )
}

fn cmd_factor_pencil(input: &Path, output: Option<&Path>) -> CliResult<()> {
    let m: PMat = read_json(input)?;
    let pencil = Pencil::from_pmat(&m).map_err(from_core)?;
    let pf = factor_pencil(&pencil).map_err(from_core)?;
    write_json(
        &PencilFactorDoc {
            atoms: pf.atoms,
            trailing_unit: pf.trailing_unit,
        },
        output,
    )
}

fn cmd_gen(
    seed: u64,
    limits: GenLimits,
    output: Option<&Path>,
) -> CliResult<()> {
    if limits.max_dim == 0 || limits.max_deg == 0 || limits.max_coeff_bits == 0 {
        return Err(fail(1, "generator limits must be positive"));
    }
    let inst = generate(seed, &limits).map_err(from_core)?;
    // Compact, field-order-stable serialization keeps the output
    // byte-identical for a fixed seed.
    let mut text = serde_json::to_string(&inst.m)
        .map_err(|e| fail(1, format!("cannot serialize output: {e}")))?;
    text.push('\n');
    match output {
        Some(path) => fs::write(path, text)
            .map_err(|e| fail(1, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> CliResult<()> {
    match &cli.cmd {
        Cmd::Factor(args) => cmd_factor(args),
        Cmd::Verify { input, output } => cmd_verify(input, output.as_deref()),
        Cmd::Linearize { input, output } => cmd_linearize(input, output.as_deref()),
        Cmd::Trivialize { input, output } => cmd_trivialize(input, output.as_deref()),
        Cmd::FactorPencil { input, output } => cmd_factor_pencil(input, output.as_deref()),
        Cmd::Gen {
            seed,
            max_dim,
            max_deg,
            max_coeff_bits,
            output,
        } => cmd_gen(
            *seed,
            GenLimits {
                max_dim: *max_dim,
                max_deg: *max_deg,
                max_coeff_bits: *max_coeff_bits,
            },
            output.as_deref(),
        ),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter("ATOMFACT_LOG")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
