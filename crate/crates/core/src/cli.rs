//! Command-line front end.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::array::{rational_string, IntersectionArray};
use crate::checks::{check_array, CheckOptions, ConditionSet};
use crate::corpus::{builtin_corpus, load_corpus, verify_corpus, CorpusEntry};
use crate::enumerate::{
    accepted_line, enumerate_with, parse_endpoint, reproduce_table1, SearchError, SearchSpec, Theta1Window,
    SMALL_VALENCY_MAX_DIAMETER,
};
use crate::exact::ExactValue;
use crate::spectral::{spectrum, standard_sequence, SequenceValue};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const CORPUS_ENV: &str = "DRGKIT_CORPUS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "drgkit", version, about = "Intersection arrays of distance-regular graphs: spectra, feasibility, search")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Spectrum, multiplicities and standard sequences.
    Analyze(InputArgs),
    /// Feasibility report.
    Check {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        conditions: ConditionArgs,
    },
    /// Exhaustive search; one JSON line per accepted array in json mode.
    Enumerate(EnumerateArgs),
    /// Rerun the three searches behind the θ_1 ∈ (1, 2] table and diff.
    #[command(name = "reproduce-table1")]
    ReproduceTable1 {
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        /// Diameter cap for valency 3 and 4.
        #[arg(long, default_value_t = SMALL_VALENCY_MAX_DIAMETER)]
        small_d_max: usize,
    },
    /// Compare stored spectra against computed ones.
    #[command(name = "corpus-verify")]
    CorpusVerify {
        /// Corpus JSON; defaults to $DRGKIT_CORPUS, then the builtin corpus.
        #[arg(long)]
        file: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// Array such as "{3,2,2;1,1,3}" or {"b":[..],"c":[..]}.
    pub array: Option<String>,
    /// Corpus JSON file; every entry is processed.
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Builtin entry name (e.g. "row 7", "petersen") or "all".
    #[arg(long)]
    pub builtin: Option<String>,
}

#[derive(Debug, Args)]
pub struct ConditionArgs {
    #[arg(long, default_value = "paper")]
    pub conditions: ConditionSet,
    /// Disable conditions not stated in the classification argument.
    #[arg(long)]
    pub strict_paper: bool,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long, default_value_t = 3)]
    pub k_min: i64,
    #[arg(long, default_value_t = 25)]
    pub k_max: i64,
    #[arg(long, default_value_t = 3)]
    pub d_min: usize,
    #[arg(long, default_value_t = 3)]
    pub d_max: usize,
    /// Open lower end of the θ_1 window; "-inf" for none.
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub theta1_lo: String,
    /// Closed upper end of the θ_1 window; "inf" for none.
    #[arg(long, default_value = "2", allow_hyphen_values = true)]
    pub theta1_hi: String,
    #[command(flatten)]
    pub conditions: ConditionArgs,
    #[arg(long, default_value_t = 1)]
    pub parallelism: usize,
    #[arg(long)]
    pub node_budget: Option<u64>,
    #[arg(long, conflicts_with = "non_bipartite")]
    pub bipartite: bool,
    #[arg(long)]
    pub non_bipartite: bool,
    /// Evaluate every array fully instead of applying the pruning rules.
    #[arg(long)]
    pub no_pruning: bool,
}

struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

/// 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (11 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.starts_with("-0") && s.trim_start_matches(['-', '0', '.']).is_empty() {
        s[1..].to_string()
    } else {
        s
    }
}

fn value(x: &ExactValue) -> String {
    match x.as_surd() {
        Some(s) => format!("{s} ({})", sig12(x.approx())),
        None => sig12(x.approx()),
    }
}

fn sequence_value(u: &SequenceValue) -> String {
    match &u.exact {
        Some(q) => rational_string(q),
        None => sig12(u.float),
    }
}

fn join<T: ToString>(xs: impl IntoIterator<Item = T>) -> String {
    xs.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn resolve_input(input: &InputArgs) -> Result<Vec<(String, IntersectionArray)>, Usage> {
    if let Some(s) = &input.array {
        let arr: IntersectionArray = s.parse()?;
        return Ok(vec![(arr.to_string(), arr)]);
    }
    let entries: Vec<CorpusEntry> = if let Some(path) = &input.file {
        load_corpus(path)?
    } else {
        let name = input.builtin.as_deref().unwrap_or("all");
        let all = builtin_corpus();
        if name == "all" {
            all
        } else {
            let found: Vec<_> = all.into_iter().filter(|e| e.name == name).collect();
            if found.is_empty() {
                return Err(Usage(format!("no builtin entry named {name:?}")));
            }
            found
        }
    };
    Ok(entries.into_iter().map(|e| (e.name, e.array)).collect())
}

fn analyze_one(name: &str, arr: &IntersectionArray, format: Format, out: &mut dyn Write) -> std::io::Result<bool> {
    let derived = arr.derive();
    let kseq: Vec<String> = derived.kseq.iter().map(rational_string).collect();
    let spec = spectrum(arr);
    match format {
        Format::Json => {
            let mut obj = json!({
                "name": name,
                "array": arr.to_string(),
                "b": arr.b_list(),
                "c": arr.c_list(),
                "diameter": arr.diameter(),
                "k": arr.valency(),
                "a": derived.a,
                "kseq": kseq,
                "v": rational_string(&derived.v),
            });
            match &spec {
                Ok(s) => {
                    let seqs: Vec<_> = s.eigenvalues.iter().map(|t| standard_sequence(arr, t)).collect();
                    obj["spectrum"] = serde_json::to_value(s).expect("spectrum serializes");
                    obj["standard_sequences"] = serde_json::to_value(seqs).expect("sequences serialize");
                }
                Err(e) => obj["error"] = json!(e.to_string()),
            }
            writeln!(out, "{obj}")?;
        }
        Format::Text => {
            writeln!(out, "array {arr}")?;
            if name != arr.to_string() {
                writeln!(out, "name {name}")?;
            }
            writeln!(out, "D = {}, k = {}, v = {}", arr.diameter(), arr.valency(), rational_string(&derived.v))?;
            writeln!(out, "a = {}", join(&derived.a))?;
            writeln!(out, "k_i = {}", kseq.join(","))?;
            match &spec {
                Ok(s) => {
                    writeln!(out, "charpoly = {}", s.charpoly)?;
                    writeln!(out, "eigenvalues:")?;
                    for (i, (t, m)) in s.eigenvalues.iter().zip(&s.multiplicities).enumerate() {
                        let integral = if m.is_integral() { "" } else { " (not integral)" };
                        writeln!(out, "  theta{i} = {}, m{i} = {}{integral}", value(t), m.display())?;
                    }
                    writeln!(out, "standard sequences:")?;
                    for (i, t) in s.eigenvalues.iter().enumerate() {
                        let seq = standard_sequence(arr, t);
                        writeln!(
                            out,
                            "  theta{i}: u = {}; sign changes {}",
                            seq.u.iter().map(sequence_value).collect::<Vec<_>>().join(", "),
                            seq.sign_changes
                        )?;
                    }
                }
                Err(e) => writeln!(out, "spectrum unavailable: {e}")?,
            }
        }
    }
    Ok(spec.is_ok())
}

fn search_spec(args: &EnumerateArgs) -> Result<SearchSpec, Usage> {
    let window = Theta1Window::new(parse_endpoint(&args.theta1_lo)?, parse_endpoint(&args.theta1_hi)?);
    let mut spec = SearchSpec::new(args.k_min, args.k_max, args.d_min, args.d_max, window)
        .with_conditions(args.conditions.conditions)
        .with_parallelism(args.parallelism);
    spec.strict_paper = args.conditions.strict_paper;
    spec.node_budget = args.node_budget;
    spec.pruning = !args.no_pruning;
    spec.bipartite = match (args.bipartite, args.non_bipartite) {
        (true, _) => Some(true),
        (_, true) => Some(false),
        _ => None,
    };
    spec.validate()?;
    Ok(spec)
}

fn run_enumerate(args: &EnumerateArgs, format: Format, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Usage> {
    let spec = search_spec(args)?;
    let mut io_error = None;
    let result = enumerate_with(&spec, &mut |report| {
        let line = match format {
            Format::Json => accepted_line(report).to_string(),
            Format::Text => format!("accepted {}", report.array),
        };
        if let Err(e) = writeln!(out, "{line}") {
            io_error.get_or_insert(e);
        }
    });
    if let Some(e) = io_error {
        return Err(e.into());
    }
    match result {
        Ok(r) => {
            match format {
                Format::Json => writeln!(out, "{}", r.summary_json())?,
                Format::Text => {
                    writeln!(
                        out,
                        "window {}  conditions {}  accepted {}  nodes {}  pruned {}  elapsed {:.1} ms",
                        spec.theta1_window,
                        spec.conditions.name(),
                        r.accepted.len(),
                        r.stats.nodes,
                        r.stats.pruned_total(),
                        r.elapsed.as_secs_f64() * 1000.0
                    )?;
                    for (rule, n) in &r.stats.pruned {
                        writeln!(out, "  pruned {rule}: {n}")?;
                    }
                }
            }
            Ok(EXIT_OK)
        }
        Err(e @ SearchError::NodeBudgetExceeded { .. }) => {
            writeln!(err, "drgkit: {e}")?;
            Ok(EXIT_FAILURE)
        }
        Err(e) => Err(e.into()),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Usage> {
    let format = cli.format;
    match &cli.command {
        Command::Analyze(input) => {
            let mut ok = true;
            for (name, arr) in resolve_input(input)? {
                ok &= analyze_one(&name, &arr, format, out)?;
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Check { input, conditions } => {
            let opts = CheckOptions { conditions: conditions.conditions, strict_paper: conditions.strict_paper };
            let mut ok = true;
            for (_, arr) in resolve_input(input)? {
                let report = check_array(&arr, opts);
                ok &= report.feasible;
                match format {
                    Format::Json => writeln!(out, "{}", report.to_json())?,
                    Format::Text => write!(out, "{}", report.to_text())?,
                }
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Enumerate(args) => run_enumerate(args, format, out, err),
        Command::ReproduceTable1 { parallelism, small_d_max } => {
            let rep = match reproduce_table1(*parallelism, *small_d_max) {
                Ok(r) => r,
                Err(e @ SearchError::NodeBudgetExceeded { .. }) => {
                    writeln!(err, "drgkit: {e}")?;
                    return Ok(EXIT_FAILURE);
                }
                Err(e) => return Err(e.into()),
            };
            match format {
                Format::Json => writeln!(out, "{}", rep.to_json())?,
                Format::Text => write!(out, "{}", rep.to_text())?,
            }
            Ok(if rep.success() { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::CorpusVerify { file } => {
            let path = file.clone().or_else(|| std::env::var_os(CORPUS_ENV).map(PathBuf::from));
            let (source, entries) = match &path {
                Some(p) => (p.display().to_string(), load_corpus(p)?),
                None => ("builtin".to_string(), builtin_corpus()),
            };
            let results = verify_corpus(&entries);
            let ok = results.iter().all(|r| r.ok);
            match format {
                Format::Json => {
                    writeln!(out, "{}", json!({ "source": source, "ok": ok, "entries": results }))?
                }
                Format::Text => {
                    for r in &results {
                        if r.ok {
                            writeln!(out, "ok   {} {}", r.name, r.array)?;
                        } else {
                            writeln!(out, "FAIL {} {}: {}", r.name, r.array, r.mismatches.join("; "))?;
                        }
                    }
                    let passed = results.iter().filter(|r| r.ok).count();
                    writeln!(out, "{passed}/{} entries verified ({source})", results.len())?;
                }
            }
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(Usage(msg)) => {
            let _ = writeln!(err, "drgkit: {msg}");
            EXIT_USAGE
        }
    }
}
