//! The `paley-covers` command line.
//!
//! Exit codes: 0 for a definite verdict, 1 for errors and failed checks, 2
//! when an isomorphism question is left open, 3 when a budget cut the work
//! short.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cospectral::certify;
use crate::cover::{build_cover, check_ell, VoltageAssignment};
use crate::dot::{cover_to_dot, paley_to_dot, DEFAULT_DOT_CAP};
use crate::error::{Error, Result};
use crate::example25;
use crate::field::FiniteField;
use crate::io::{read_json, read_voltage, spectrum_from_json, spectrum_to_json, to_pretty, voltage_to_json};
use crate::iso::{cover_isomorphic, graph_isomorphic, IsoStatus};
use crate::paley::build_paley;
use crate::refine::{brute_force_isomorphic, BruteForceOutcome, SearchLimits, DEFAULT_NODE_BUDGET, DEFAULT_VERTEX_CAP};
use crate::search::{
    pair_census, search_counterexamples, SearchBudget, SearchMode, DEFAULT_ENUM_CAP, DEFAULT_PAIR_CAP,
};
use crate::spectrum::{cospectral, full_spectrum, numeric_spectrum, reconstruct_voltage, DEFAULT_DENSE_CAP};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ERROR: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Agreement tolerance between exact and numeric eigenvalues.
const ORACLE_TOLERANCE: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(name = "paley-covers", version, about = "Cyclic covers of Paley graphs")]
pub struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true, value_parser = clap::value_parser!(u32).range(1..))]
    pub workers: Option<u32>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generator, squares in generator order, their traces and prime-field orbits.
    FieldInfo {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact labeled spectrum of a cover.
    Spectrum {
        #[command(flatten)]
        input: AlphaArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Exact cospectrality of two covers, with a certificate when requested.
    Cospectral {
        #[command(flatten)]
        input: PairArgs,
        /// Derive a permutation polynomial certificate for cospectral pairs.
        #[arg(long)]
        certify: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Cover and graph isomorphism of two covers.
    Isomorphic {
        #[command(flatten)]
        input: PairArgs,
        /// Largest cover handed to the brute-force search when the rigid scan is inconclusive.
        #[arg(long, default_value_t = DEFAULT_VERTEX_CAP, value_parser = positive_usize)]
        gi_cap: usize,
        #[arg(long, default_value_t = DEFAULT_NODE_BUDGET, value_parser = clap::value_parser!(u64).range(1..))]
        node_budget: u64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Recover a voltage from a spectrum file.
    Reconstruct {
        /// A file written by `spectrum`.
        #[arg(long)]
        spectrum: PathBuf,
        /// The character index whose slice is inverted.
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search for cospectral covers that are not isomorphic.
    Search {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        ell: u32,
        #[arg(long, value_enum, default_value_t = ModeArg::Exhaustive)]
        mode: ModeArg,
        #[arg(long, default_value_t = DEFAULT_ENUM_CAP, value_parser = clap::value_parser!(u64).range(1..))]
        enum_cap: u64,
        #[arg(long, default_value_t = DEFAULT_PAIR_CAP, value_parser = clap::value_parser!(u64).range(1..))]
        pair_cap: u64,
        /// Also test every unordered pair of voltages without orbit reduction.
        #[arg(long)]
        census: bool,
        /// Record wall-clock time in the report, which makes it non-reproducible.
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Re-run every check of the shipped cospectral pair over F_25.
    #[command(name = "verify-example25")]
    VerifyExample25 {
        #[arg(long, default_value_t = 3)]
        ell: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Graphviz export of a Paley graph or, given a voltage file, of its cover.
    ExportDot {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        alpha: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_DOT_CAP, value_parser = positive_usize)]
        max_vertices: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the exact spectrum with a dense numeric eigensolver.
    OracleSpectrum {
        #[command(flatten)]
        input: AlphaArgs,
        #[arg(long, default_value_t = DEFAULT_DENSE_CAP, value_parser = positive_usize)]
        dense_cap: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct FieldArgs {
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long, default_value_t = 1)]
    pub r: u32,
    /// Monic modulus as comma separated coefficients, constant term first.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
}

#[derive(Args, Debug, Clone)]
pub struct AlphaArgs {
    #[arg(long)]
    pub alpha: PathBuf,
    /// Expected ℓ; checked against the file.
    #[arg(long)]
    pub ell: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct PairArgs {
    #[arg(long)]
    pub alpha: PathBuf,
    #[arg(long)]
    pub beta: PathBuf,
    #[arg(long)]
    pub ell: Option<u32>,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    /// Write here instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Dot,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum ModeArg {
    Exhaustive,
    #[value(name = "tau_guided", alias = "tau-guided")]
    TauGuided,
}

impl From<ModeArg> for SearchMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exhaustive => SearchMode::Exhaustive,
            ModeArg::TauGuided => SearchMode::TauGuided,
        }
    }
}

fn positive_usize(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

/// A rendered artifact and the exit code it carries.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, code: EXIT_OK }
    }
}

impl FieldArgs {
    fn build(&self) -> Result<Arc<FiniteField>> {
        let p = self.p.ok_or_else(|| Error::Parse("--p is required".into()))?;
        Ok(Arc::new(FiniteField::new(p, self.r, self.modulus.clone())?))
    }
}

fn check_expected_ell(voltage: &VoltageAssignment, ell: Option<u32>) -> Result<()> {
    match ell {
        Some(e) if e != voltage.ell() => Err(Error::ParameterMismatch(format!(
            "--ell {e} but the voltage file uses {}",
            voltage.ell()
        ))),
        _ => Ok(()),
    }
}

fn load_pair(input: &PairArgs) -> Result<(VoltageAssignment, VoltageAssignment)> {
    let alpha = read_voltage(&input.alpha)?;
    let beta = read_voltage(&input.beta)?;
    check_expected_ell(&alpha, input.ell)?;
    alpha.ensure_same_parameters(&beta)?;
    if alpha.field().modulus() != beta.field().modulus() {
        return Err(Error::ParameterMismatch("voltage files use different moduli".into()));
    }
    Ok((alpha, beta))
}

fn only_json(output: &OutputArgs) -> Result<()> {
    match output.format {
        None | Some(Format::Json) => Ok(()),
        Some(other) => Err(Error::Precondition(format!("{other:?} output is not available here"))),
    }
}

fn json_text(value: &Value) -> String {
    to_pretty(value)
}

pub fn field_info(field: &FiniteField) -> Result<Value> {
    field.ensure_one_mod_four()?;
    let g = field.multiplicative_generator();
    let squares: Vec<Value> = field
        .squares()
        .into_iter()
        .enumerate()
        .map(|(j, s)| {
            json!({
                "exponent": 2 * j,
                "key": field.key(s),
                "element": field.pretty(s),
                "trace": field.trace(s),
            })
        })
        .collect();
    // orbits under multiplication by the nonzero prime-field squares
    let scalars: Vec<_> = (1..field.p() as i64)
        .map(|c| field.from_int(c))
        .filter(|&c| field.square_index(c).is_some())
        .collect();
    let mut seen = vec![false; field.q() as usize];
    let mut orbits = Vec::new();
    for s in field.squares() {
        if seen[s.index()] {
            continue;
        }
        let mut members: Vec<_> = scalars.iter().map(|&c| field.mul(c, s)).collect();
        members.sort();
        members.dedup();
        for m in &members {
            seen[m.index()] = true;
        }
        orbits.push(json!({
            "representative": field.pretty(s),
            "trace": field.trace(s),
            "members": members.iter().map(|&m| field.pretty(m)).collect::<Vec<_>>(),
        }));
    }
    Ok(json!({
        "field": field.descriptor(),
        "q": field.q(),
        "generator": {"key": field.key(g), "element": field.pretty(g)},
        "squares": squares,
        "orbits": orbits,
    }))
}

fn squares_csv(field: &FiniteField) -> Result<String> {
    field.ensure_one_mod_four()?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["exponent", "key", "element", "trace"])
        .map_err(csv_error)?;
    for (j, s) in field.squares().into_iter().enumerate() {
        w.write_record([
            (2 * j).to_string(),
            field.key(s),
            field.pretty(s),
            field.trace(s).to_string(),
        ])
        .map_err(csv_error)?;
    }
    csv_finish(w)
}

fn csv_error(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

fn csv_finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))?;
    Ok(String::from_utf8(bytes).expect("CSV of UTF-8 fields"))
}

fn spectrum_csv(voltage: &VoltageAssignment) -> Result<String> {
    let spec = full_spectrum(voltage);
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["a", "k", "exact", "float"]).map_err(csv_error)?;
    for entry in spec.to_json().as_array().expect("spectrum list") {
        let a = entry["a"].as_str().expect("key");
        w.write_record([
            a.to_string(),
            entry["k"].to_string(),
            serde_json::to_string(&entry["exact"])?,
            entry["float"].to_string(),
        ])
        .map_err(csv_error)?;
    }
    csv_finish(w)
}

fn isomorphic_report(
    alpha: &VoltageAssignment,
    beta: &VoltageAssignment,
    gi_cap: usize,
    node_budget: u64,
) -> Result<(Value, i32)> {
    let f = alpha.field();
    let verdict = graph_isomorphic(alpha, beta)?;
    let cover_iso = cover_isomorphic(alpha, beta)?;
    let mut out = verdict.to_json(f);
    out["cover_isomorphic"] = json!(cover_iso.is_some());
    if let Some((t, sigma)) = cover_iso {
        out["cover_witness"] = json!({"t": f.key(t), "sigma": sigma});
    }
    out["method"] = json!("rigidity");
    let mut code = EXIT_OK;
    if verdict.status == IsoStatus::Unknown {
        code = EXIT_UNKNOWN;
        let n = f.q() as usize * alpha.ell() as usize;
        if n <= gi_cap {
            let limits = SearchLimits {
                vertex_cap: gi_cap,
                node_budget,
            };
            let outcome = brute_force_isomorphic(build_cover(alpha).graph(), build_cover(beta).graph(), limits)?;
            out["method"] = json!("brute_force");
            match outcome {
                BruteForceOutcome::Isomorphic(_) => {
                    out["status"] = json!("Isomorphic");
                    code = EXIT_OK;
                }
                BruteForceOutcome::NotIsomorphic => {
                    out["status"] = json!("NotIsomorphic");
                    code = EXIT_OK;
                }
                BruteForceOutcome::BudgetExceeded => code = EXIT_BUDGET,
            }
        }
    }
    Ok((out, code))
}

/// Runs one command and renders its artifact.
pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::FieldInfo { field, output } => {
            let f = field.build()?;
            match output.format {
                Some(Format::Csv) => Ok(Outcome::ok(squares_csv(&f)?)),
                Some(Format::Dot) => Err(Error::Precondition("use export-dot for graphs".into())),
                _ => Ok(Outcome::ok(json_text(&field_info(&f)?))),
            }
        }
        Command::Spectrum { input, output } => {
            let alpha = read_voltage(&input.alpha)?;
            check_expected_ell(&alpha, input.ell)?;
            match output.format {
                Some(Format::Csv) => Ok(Outcome::ok(spectrum_csv(&alpha)?)),
                Some(Format::Dot) => Err(Error::Precondition("use export-dot for graphs".into())),
                _ => Ok(Outcome::ok(json_text(&spectrum_to_json(&full_spectrum(&alpha))))),
            }
        }
        Command::Cospectral {
            input,
            certify: want,
            output,
        } => {
            only_json(output)?;
            let (alpha, beta) = load_pair(input)?;
            let sa = full_spectrum(&alpha);
            let sb = full_spectrum(&beta);
            let is_cospectral = cospectral(&sa, &sb)?;
            let mut out = json!({
                "cospectral": is_cospectral,
                "digest_alpha": sa.digest(),
                "digest_beta": sb.digest(),
            });
            if *want && is_cospectral {
                out["certificate"] = certify(&alpha, &beta)?.map_or(Value::Null, |c| c.to_json());
            }
            Ok(Outcome::ok(json_text(&out)))
        }
        Command::Isomorphic {
            input,
            gi_cap,
            node_budget,
            output,
        } => {
            only_json(output)?;
            let (alpha, beta) = load_pair(input)?;
            let (out, code) = isomorphic_report(&alpha, &beta, *gi_cap, *node_budget)?;
            Ok(Outcome {
                text: json_text(&out),
                code,
            })
        }
        Command::Reconstruct { spectrum, k, output } => {
            only_json(output)?;
            let spec = spectrum_from_json(&read_json(spectrum)?)?;
            let voltage = reconstruct_voltage(&spec, *k)?;
            Ok(Outcome::ok(json_text(&voltage_to_json(&voltage))))
        }
        Command::Search {
            field,
            ell,
            mode,
            enum_cap,
            pair_cap,
            census,
            timing,
            output,
        } => {
            only_json(output)?;
            let f = field.build()?;
            f.ensure_one_mod_four()?;
            check_ell(&f, *ell)?;
            let start = Instant::now();
            let budget = SearchBudget {
                enum_cap: *enum_cap,
                pair_cap: *pair_cap,
            };
            let report = search_counterexamples(f.clone(), *ell, (*mode).into(), budget)?;
            let mut out = report.to_json();
            let mut complete = report.complete;
            if *census {
                match pair_census(f, *ell, *enum_cap) {
                    Ok(c) => out["census"] = c.to_json(),
                    Err(Error::BudgetExceeded(msg)) => {
                        out["census"] = json!({"error": msg});
                        complete = false;
                    }
                    Err(e) => return Err(e),
                }
            }
            if *timing {
                out["timing"] = json!({"elapsed_ms": start.elapsed().as_secs_f64() * 1e3});
            }
            let code = if !complete {
                EXIT_BUDGET
            } else if report.unresolved().next().is_some() {
                EXIT_UNKNOWN
            } else {
                EXIT_OK
            };
            Ok(Outcome {
                text: json_text(&out),
                code,
            })
        }
        Command::VerifyExample25 { ell, output } => {
            only_json(output)?;
            let report = example25::verify(*ell)?;
            let code = if report.all_passed() { EXIT_OK } else { EXIT_ERROR };
            Ok(Outcome {
                text: json_text(&report.to_json()),
                code,
            })
        }
        Command::ExportDot {
            field,
            alpha,
            max_vertices,
            output,
        } => {
            if !matches!(output.format, None | Some(Format::Dot)) {
                return Err(Error::Precondition("export-dot writes DOT only".into()));
            }
            let text = match alpha {
                Some(path) => {
                    let voltage = read_voltage(path)?;
                    if field.p.is_some() && *field.build()? != **voltage.field() {
                        return Err(Error::ParameterMismatch(
                            "field flags disagree with the voltage file".into(),
                        ));
                    }
                    cover_to_dot(&build_cover(&voltage), *max_vertices)?
                }
                None => paley_to_dot(&build_paley(field.build()?)?, *max_vertices)?,
            };
            Ok(Outcome::ok(text))
        }
        Command::OracleSpectrum {
            input,
            dense_cap,
            output,
        } => {
            only_json(output)?;
            let alpha = read_voltage(&input.alpha)?;
            check_expected_ell(&alpha, input.ell)?;
            let cover = build_cover(&alpha);
            let numeric = match numeric_spectrum(&cover, *dense_cap) {
                Ok(v) => v,
                Err(Error::BudgetExceeded(msg)) => {
                    return Ok(Outcome {
                        text: json_text(&json!({"error": msg})),
                        code: EXIT_BUDGET,
                    })
                }
                Err(e) => return Err(e),
            };
            let exact = full_spectrum(&alpha).sorted_floats();
            let deviation = exact
                .iter()
                .zip(&numeric)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            let agree = exact.len() == numeric.len() && deviation <= ORACLE_TOLERANCE;
            let out = json!({
                "vertices": cover.graph().n(),
                "max_deviation": deviation,
                "tolerance": ORACLE_TOLERANCE,
                "agree": agree,
            });
            Ok(Outcome {
                text: json_text(&out),
                code: if agree { EXIT_OK } else { EXIT_ERROR },
            })
        }
    }
}

fn output_path(command: &Command) -> Option<&Path> {
    let output = match command {
        Command::FieldInfo { output, .. }
        | Command::Spectrum { output, .. }
        | Command::Cospectral { output, .. }
        | Command::Isomorphic { output, .. }
        | Command::Reconstruct { output, .. }
        | Command::Search { output, .. }
        | Command::VerifyExample25 { output, .. }
        | Command::ExportDot { output, .. }
        | Command::OracleSpectrum { output, .. } => output,
    };
    output.out.as_deref()
}

/// Parses arguments, runs, writes the artifact and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.workers {
        pool = pool.num_threads(n as usize);
    }
    let result = pool
        .build()
        .map_err(|e| Error::Precondition(e.to_string()))
        .and_then(|pool| pool.install(|| execute(&cli.command)));
    match result {
        Ok(outcome) => {
            let written = match output_path(&cli.command) {
                Some(path) => std::fs::write(path, &outcome.text),
                None => std::io::stdout().write_all(outcome.text.as_bytes()),
            };
            if let Err(e) = written {
                eprintln!("error: {e}");
                return EXIT_ERROR;
            }
            outcome.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::BudgetExceeded(_) => EXIT_BUDGET,
                _ => EXIT_ERROR,
            }
        }
    }
}

pub fn main() -> i32 {
    main_with_args(std::env::args_os())
}
