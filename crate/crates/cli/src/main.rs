use std::fs;
use std::io::Write;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use shellfill::chain::boundary;
use shellfill::circle::ModelParams;
use shellfill::error::Error;
use shellfill::rewriting::{classify, is_minimal, to_standard_rn, ChainKind, TraceEntry, DEFAULT_BUDGET};
use shellfill::shell_lab::{
    build_shell, construct_min_fill, fill_shell_lascar, n_s_of, table_rows, FillReport, Shell1, ShellSpec,
};
use shellfill::simplex::SimplexChain;

#[derive(Parser)]
#[command(name = "shellfill", version, about = "Fill and classify 1-shells in the rotation structures M_n")]
struct Cli {
    /// Recorded in every JSON report. No subcommand currently draws random numbers.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare n_s against both oracles and the Lascar fill for every spec.
    Table {
        /// Inclusive range such as `2..6`, or a single value.
        #[arg(long, default_value = "2..6")]
        n: String,
        /// Longest fill the oracles search for; must be odd. Defaults to `2·max(n) + 1`.
        #[arg(long)]
        oracle_max: Option<u64>,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fill a built shell given by `--spec`, or a shell read from a JSON 1-chain.
    Fill {
        #[arg(long)]
        n: i64,
        /// `k1,k2,k3`.
        #[arg(long, conflicts_with = "shell", required_unless_present = "shell")]
        spec: Option<String>,
        #[arg(long)]
        shell: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classify a JSON 2-chain as RN or NR and reduce RN chains to standard form.
    Classify {
        chain: PathBuf,
        #[arg(long)]
        n: i64,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Construction,
    Lascar,
    Both,
}

enum Failure {
    Mismatch(String),
    Config(String),
    Precondition(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Mismatch(_) => 1,
            Failure::Config(_) => 2,
            Failure::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Mismatch(m) | Failure::Config(m) | Failure::Precondition(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParams(_) | Error::Parse(_) | Error::OutOfRange { .. } => Failure::Config(e.to_string()),
            _ => Failure::Precondition(e.to_string()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn parse_range(s: &str) -> Result<RangeInclusive<i64>, Failure> {
    let bad = || config(format!("bad --n range `{s}`, expected A..B"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => {
            (a.trim().parse().map_err(|_| bad())?, b.trim().trim_start_matches('=').parse().map_err(|_| bad())?)
        }
        None => {
            let v = s.trim().parse().map_err(|_| bad())?;
            (v, v)
        }
    };
    if lo < 2 || hi < lo {
        return Err(config(format!("--n range `{s}` must satisfy 2 ≤ A ≤ B")));
    }
    Ok(lo..=hi)
}

fn model(n: i64) -> Result<ModelParams, Failure> {
    ModelParams::new(n).map_err(|e| config(e.to_string()))
}

fn write_output(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| config(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(|e| config(e.to_string()))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

fn read_chain(path: &Path, params: ModelParams) -> Result<SimplexChain, Failure> {
    let text = fs::read_to_string(path).map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
    let raw: SimplexChain =
        serde_json::from_str(&text).map_err(|e| config(format!("{}: malformed chain: {e}", path.display())))?;
    let mut chain = SimplexChain::zero();
    for (f, k) in raw.terms() {
        let f = f.clone().validated(params).map_err(|e| config(format!("{}: {e}", path.display())))?;
        chain.add_term(k, f);
    }
    Ok(chain)
}

fn cmd_table(n: &str, oracle_max: Option<u64>, format: Format, out: Option<&Path>) -> Outcome {
    let ns = parse_range(n)?;
    let oracle_max = oracle_max.unwrap_or(2 * *ns.end() as u64 + 1);
    if oracle_max.is_multiple_of(2) {
        return Err(config(format!("--oracle-max must be odd, got {oracle_max}")));
    }
    let rows = table_rows(ns, oracle_max)?;
    let text = match format {
        Format::Json => to_json(&rows),
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for row in &rows {
                w.serialize(row).map_err(|e| config(e.to_string()))?;
            }
            String::from_utf8(w.into_inner().map_err(|e| config(e.to_string()))?).expect("csv is utf-8")
        }
    };
    write_output(out, &text)?;
    let bad = rows.iter().filter(|r| !r.matches).count();
    if bad > 0 {
        return Err(Failure::Mismatch(format!("{bad} of {} rows do not match", rows.len())));
    }
    Ok(())
}

#[derive(Serialize)]
struct FillOutput {
    seed: u64,
    n: i64,
    k1: i64,
    k2: i64,
    k3: i64,
    k4: i64,
    n_s: u64,
    fills: Vec<FillReport>,
}

fn parse_spec(s: &str, params: ModelParams) -> Result<ShellSpec, Failure> {
    let parts: Vec<i64> = s
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|_| config(format!("bad --spec `{s}`, expected k1,k2,k3")))?;
    let [k1, k2, k3] = parts[..] else {
        return Err(config(format!("bad --spec `{s}`, expected k1,k2,k3")));
    };
    ShellSpec::new(params, k1, k2, k3).map_err(|e| config(e.to_string()))
}

fn cmd_fill(
    seed: u64,
    n: i64,
    spec: Option<&str>,
    shell: Option<&Path>,
    method: Method,
    out: Option<&Path>,
) -> Outcome {
    let params = model(n)?;
    let (spec, shell) = match (spec, shell) {
        (Some(s), _) => {
            let spec = parse_spec(s, params)?;
            (spec, build_shell(&spec))
        }
        (None, Some(path)) => {
            let shell = Shell1::from_chain(&read_chain(path, params)?).map_err(Failure::from)?;
            (shell.spec(params)?, shell)
        }
        (None, None) => return Err(config("one of --spec or --shell is required")),
    };
    let mut fills = Vec::new();
    if method != Method::Lascar {
        fills.push(construct_min_fill(&spec, &shell)?);
    }
    if method != Method::Construction {
        fills.push(fill_shell_lascar(&shell, params)?);
    }
    let report =
        FillOutput { seed, n, k1: spec.k1, k2: spec.k2, k3: spec.k3, k4: spec.k4(), n_s: n_s_of(&spec), fills };
    write_output(out, &to_json(&report))?;
    if report.fills.iter().any(|f| !f.verified) {
        return Err(Failure::Mismatch("a fill's boundary differs from the shell".into()));
    }
    Ok(())
}

#[derive(Serialize)]
struct StandardOutput {
    walk: Vec<u32>,
    chain: SimplexChain,
    trace: Vec<TraceEntry>,
}

#[derive(Serialize)]
struct ClassifyOutput {
    seed: u64,
    n: i64,
    length: u64,
    kind: ChainKind,
    /// `yes`, `no`, or `unknown` when the budget runs out.
    minimal: &'static str,
    standard_form: Option<StandardOutput>,
    #[serde(skip_serializing_if = "Option::is_none")]
    note: Option<String>,
}

fn cmd_classify(seed: u64, path: &Path, n: i64, budget: usize, out: Option<&Path>) -> Outcome {
    let params = model(n)?;
    let chain = read_chain(path, params)?;
    let kind = classify(&chain)?;
    let minimal = match is_minimal(&chain, budget, params) {
        Ok(true) => "yes",
        Ok(false) => "no",
        Err(Error::BudgetExhausted(_)) => "unknown",
        Err(e) => return Err(e.into()),
    };
    let (standard_form, note) = if kind == ChainKind::RN {
        match to_standard_rn(&chain, budget, params) {
            Ok(sf) => {
                (Some(StandardOutput { walk: sf.walk.sequence.clone(), chain: sf.chain(), trace: sf.trace }), None)
            }
            Err(e @ (Error::NotMinimal | Error::Reduction(_) | Error::WalkNotFound)) => (None, Some(e.to_string())),
            Err(e) => return Err(e.into()),
        }
    } else {
        (None, None)
    };
    if let Some(sf) = &standard_form {
        if boundary(&sf.chain)? != boundary(&chain)? {
            return Err(Failure::Mismatch("standard form changed the boundary".into()));
        }
    }
    let report = ClassifyOutput { seed, n, length: chain.length(), kind, minimal, standard_form, note };
    write_output(out, &to_json(&report))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match &cli.command {
        Command::Table { n, oracle_max, format, out } => cmd_table(n, *oracle_max, *format, out.as_deref()),
        Command::Fill { n, spec, shell, method, out } => {
            cmd_fill(cli.seed, *n, spec.as_deref(), shell.as_deref(), *method, out.as_deref())
        }
        Command::Classify { chain, n, budget, out } => cmd_classify(cli.seed, chain, *n, *budget, out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("shellfill: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
