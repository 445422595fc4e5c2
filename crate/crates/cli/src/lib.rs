//! Command-line front end for `hmuni-core`.
//!
//! Exit codes: 0 success or unimodular, 1 not unimodular, 2 input error,
//! 3 size guard exceeded, 4 internal inconsistency.

pub mod model;

use std::io::{self, Read, Write};
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use hmuni_core::graver::{graver_for_unimodular_pair, graver_oracle_with, sample_graver, OracleConfig};
use hmuni_core::nuclear::NuclearCertificate;
use hmuni_core::sweep::classification_sweep;
use hmuni_core::unimodular::{certify_nonunimodular_by_submatrix, MinorWitness, SubmatrixBudget};
use hmuni_core::{classify, DesignMatrix, Error, HMPair, SignedVector, Verdict};
use serde::Serialize;

pub use model::{parse_model, ModelSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_UNIMODULAR: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "hmuni", version, about = "Unimodularity and Graver bases of hierarchical models")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MatrixFormat {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum VerdictFormat {
    Json,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the design matrix.
    Matrix {
        /// Model JSON file, `-` for stdin.
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = MatrixFormat::Csv)]
        format: MatrixFormat,
    },
    /// Decide unimodularity and print a certificate or forbidden minor.
    Classify {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = VerdictFormat::Json)]
        format: VerdictFormat,
    },
    /// Graver basis of a unimodular model from its construction, one JSON
    /// line per element.
    Graver { model: PathBuf },
    /// Graver basis by completion, one JSON line per element.
    GraverOracle {
        model: PathBuf,
        #[arg(long, default_value_t = OracleConfig::default().max_columns)]
        max_columns: usize,
    },
    /// One random Graver element of a unimodular model.
    Sample {
        model: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Compare the classification with the Graver-entry test on every small
    /// model.
    Verify {
        #[arg(long, default_value_t = 3)]
        sweep_vertices: usize,
        #[arg(long, default_value_t = 3)]
        sweep_max_weight: u64,
        /// Largest design matrix (columns) included in the sweep.
        #[arg(long, default_value_t = 64)]
        max_columns: u64,
        /// Processed critical pairs allowed per oracle call.
        #[arg(long)]
        max_work: Option<usize>,
    },
    /// Alexander dual, keeping the weights.
    Dual { model: PathBuf },
    /// Link of a vertex.
    Link { model: PathBuf, vertex: String },
    /// Deletion of a vertex.
    Delete { model: PathBuf, vertex: String },
    /// Look for a non-unit Graver element among random column subsets.
    CertifyNonuni {
        model: PathBuf,
        #[arg(long, default_value_t = SubmatrixBudget::default().samples)]
        budget: usize,
        #[arg(long, default_value_t = SubmatrixBudget::default().columns)]
        columns: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::GuardExceeded { .. } => EXIT_GUARD,
        Error::NotUnimodular => EXIT_NOT_UNIMODULAR,
        Error::Internal(_) | Error::Overflow | Error::NonUnimodularBasis => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

#[derive(Serialize)]
struct Entry<'a> {
    col: &'a [u64],
    val: i64,
}

/// One Graver element as a JSON array of `{"col": state, "val": value}`.
pub fn vector_json(v: &SignedVector, labels: &[Vec<u64>]) -> String {
    let entries: Vec<Entry> = v
        .entries()
        .iter()
        .map(|&(c, val)| Entry { col: &labels[c], val })
        .collect();
    serde_json::to_string(&entries).expect("entries serialize")
}

fn read_model(path: &PathBuf, err: &mut dyn Write) -> Result<HMPair, Error> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("{}: {e}", path.display())))?
    };
    let loaded = parse_model(&text)?;
    for w in &loaded.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    Ok(loaded.pair)
}

fn certificate_text(c: &NuclearCertificate) -> String {
    let mut s = format!("nucleus: {:?} on [{}]", c.nucleus, c.left.join(","));
    if !c.right.is_empty() {
        s += &format!(" | [{}]", c.right.join(","));
    }
    s.push('\n');
    for step in &c.steps {
        s += &format!("add {:?} vertex {}\n", step.op, step.vertex).to_lowercase();
    }
    if let Some(case) = c.weight_case {
        s += &format!("weights: {case:?}\n");
    }
    s
}

fn witness_text(w: &MinorWitness) -> String {
    let mut s = format!("forbidden minor #{} ({})\n", w.forbidden_id, w.name);
    for step in &w.embedding.steps {
        s += &format!("{}\n", serde_json::to_string(step).expect("steps serialize"));
    }
    let iso: Vec<String> = w.embedding.isomorphism.iter().map(|(a, b)| format!("{a}->{b}")).collect();
    let wts: Vec<String> = w.embedding.weights.iter().map(|(a, b)| format!("{a}:{b}")).collect();
    s += &format!("weights {}\nrelabel {}\n", wts.join(" "), iso.join(" "));
    s
}

fn run_command(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    let io_err = |e: io::Error| Error::Internal(e.to_string());
    match cmd {
        Command::Matrix { model, format } => {
            let pair = read_model(&model, err)?;
            let m = DesignMatrix::build(&pair);
            match format {
                MatrixFormat::Csv => write!(out, "{}", m.to_csv()),
                MatrixFormat::Json => writeln!(out, "{}", m.to_json()),
            }
            .map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Classify { model, format } => {
            let pair = read_model(&model, err)?;
            let v = classify(&pair)?;
            match (format, &v) {
                (VerdictFormat::Json, _) => writeln!(out, "{}", v.to_json()),
                (VerdictFormat::Text, Verdict::Unimodular { certificate }) => {
                    write!(out, "unimodular\n{}", certificate_text(certificate))
                }
                (VerdictFormat::Text, Verdict::NotUnimodular { witness }) => {
                    write!(out, "not unimodular\n{}", witness_text(witness))
                }
            }
            .map_err(io_err)?;
            Ok(if v.is_unimodular() { EXIT_OK } else { EXIT_NOT_UNIMODULAR })
        }
        Command::Graver { model } => {
            let pair = read_model(&model, err)?;
            let labels = pair.column_labels();
            for v in graver_for_unimodular_pair(&pair)?.iter() {
                writeln!(out, "{}", vector_json(v, &labels)).map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::GraverOracle { model, max_columns } => {
            let pair = read_model(&model, err)?;
            let cfg = OracleConfig {
                max_columns,
                ..OracleConfig::default()
            };
            let labels = pair.column_labels();
            for v in graver_oracle_with(&DesignMatrix::build(&pair).matrix, &cfg)?.iter() {
                writeln!(out, "{}", vector_json(v, &labels)).map_err(io_err)?;
            }
            Ok(EXIT_OK)
        }
        Command::Sample { model, seed } => {
            let pair = read_model(&model, err)?;
            let v = sample_graver(&pair, seed)?;
            writeln!(out, "{}", vector_json(&v, &pair.column_labels())).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            sweep_vertices,
            sweep_max_weight,
            max_columns,
            max_work,
        } => {
            if sweep_max_weight < 2 {
                return Err(Error::InvalidArgument("--sweep-max-weight must be at least 2".into()));
            }
            let weights: Vec<u64> = (2..=sweep_max_weight).collect();
            let mut cfg = OracleConfig::default();
            if let Some(w) = max_work {
                cfg.max_work = w;
            }
            let report = classification_sweep(sweep_vertices, &weights, max_columns, &cfg, |case| {
                match case.agrees() {
                    Some(true) => {}
                    Some(false) => {
                        let _ = writeln!(err, "disagreement: {}", case.pair);
                    }
                    None => {
                        let _ = writeln!(err, "undecided: {}", case.pair);
                    }
                }
            })?;
            let summary = serde_json::json!({
                "cases": report.cases.len(),
                "agreed": report.agreed(),
                "disagreed": report.disagreed().len(),
                "undecided": report.exceeded().len(),
            });
            writeln!(out, "{summary}").map_err(io_err)?;
            Ok(if !report.disagreed().is_empty() {
                EXIT_INTERNAL
            } else if !report.exceeded().is_empty() {
                EXIT_GUARD
            } else {
                EXIT_OK
            })
        }
        Command::Dual { model } => {
            let pair = read_model(&model, err)?;
            let dual = HMPair::with_weight_map(pair.complex().alexander_dual()?, &pair.weight_map())?;
            writeln!(out, "{}", ModelSpec::from_pair(&dual).to_json()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Link { model, vertex } => {
            let pair = read_model(&model, err)?;
            writeln!(out, "{}", ModelSpec::from_pair(&pair.link_vertex(&vertex)?).to_json()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::Delete { model, vertex } => {
            let pair = read_model(&model, err)?;
            writeln!(out, "{}", ModelSpec::from_pair(&pair.delete_vertex(&vertex)?).to_json()).map_err(io_err)?;
            Ok(EXIT_OK)
        }
        Command::CertifyNonuni {
            model,
            budget,
            columns,
            seed,
        } => {
            let pair = read_model(&model, err)?;
            let b = SubmatrixBudget { samples: budget, columns };
            match certify_nonunimodular_by_submatrix(&pair, seed, &b)? {
                Some(v) => {
                    writeln!(out, "{}", vector_json(&v, &pair.column_labels())).map_err(io_err)?;
                    Ok(EXIT_NOT_UNIMODULAR)
                }
                None => {
                    let _ = writeln!(err, "no certificate found within the budget");
                    writeln!(out, "null").map_err(io_err)?;
                    Ok(EXIT_OK)
                }
            }
        }
    }
}

/// Parses `args` (program name first) and runs the command. Returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match run_command(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}
