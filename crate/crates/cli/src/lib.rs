//! Command-line front end for `goeritz-core`.
//!
//! Every subcommand produces a [`Output`]; `--json` serializes it inside a
//! [`Document`], otherwise a human-readable rendering is printed. The JSON
//! shape is published in `schema/report.schema.json`.

use std::fmt::Write as _;
use std::io::{Read, Write};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand};
use goeritz_core::equivalence::{
    decide_extended, decide_homological, zero_slope_screen, ExtendedVerdict, Outcome, ScreenReport, Verdict,
};
use goeritz_core::factorization::{elementary_factors, factor_block, ElementaryMove};
use goeritz_core::ttk::{admissible_pairs, ttk_homology, verify_case, CaseReport, TtkParams};
use goeritz_core::words::RelatorReport;
use goeritz_core::{
    evaluate, named_word, split_product, verify_relators, Block2Matrix, GoeritzWord, HomologyVector, Matrix4,
    Parity,
};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA: &str = include_str!("../schema/report.schema.json");
pub const THREADS_ENV: &str = "GOERITZ_THREADS";
pub const FORMAT_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_ARITHMETIC: i32 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    #[serde(skip)]
    pub code: i32,
    pub kind: FailureKind,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    Usage,
    Parse,
    Domain,
    Arithmetic,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            kind: FailureKind::Usage,
            message: message.into(),
            position: None,
        }
    }

    fn parse(position: usize, message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            kind: FailureKind::Parse,
            message: message.into(),
            position: Some(position),
        }
    }
}

impl From<goeritz_core::Error> for Failure {
    fn from(e: goeritz_core::Error) -> Self {
        let (code, kind, position) = match &e {
            goeritz_core::Error::Overflow(_) => (EXIT_ARITHMETIC, FailureKind::Arithmetic, None),
            goeritz_core::Error::Parse { position, .. } => (EXIT_USAGE, FailureKind::Parse, Some(*position)),
            _ => (EXIT_USAGE, FailureKind::Domain, None),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
            position,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.position {
            Some(p) => write!(f, "{} (position {p})", self.message),
            None => f.write_str(&self.message),
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Parses `n` comma-separated signed integers. Positions are byte offsets.
pub fn parse_ints<const N: usize>(s: &str, what: &str) -> CliResult<[i64; N]> {
    let mut out = [0i64; N];
    let mut offset = 0;
    let mut count = 0;
    for part in s.split(',') {
        if count == N {
            return Err(Failure::parse(offset, format!("{what}: expected {N} comma-separated integers")));
        }
        out[count] = part
            .parse()
            .map_err(|_| Failure::parse(offset, format!("{what}: `{part}` is not an integer")))?;
        count += 1;
        offset += part.len() + 1;
    }
    if count != N {
        return Err(Failure::parse(s.len(), format!("{what}: expected {N} comma-separated integers, got {count}")));
    }
    Ok(out)
}

pub fn parse_vector(s: &str) -> CliResult<HomologyVector> {
    let [a, x, b, y] = parse_ints::<4>(s, "vector")?;
    Ok(HomologyVector::new(a, x, b, y))
}

pub fn parse_block(s: &str) -> CliResult<Block2Matrix> {
    let [a, b, c, d] = parse_ints::<4>(s, "block")?;
    Ok(Block2Matrix::new(a, b, c, d))
}

/// One unit of work, as accepted by `batch`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "kebab-case", deny_unknown_fields)]
pub enum Request {
    Sp { vector: HomologyVector },
    Decide { k: HomologyVector, kp: HomologyVector },
    DecideExtended { k: HomologyVector, kp: HomologyVector },
    Screen { k: HomologyVector, kp: HomologyVector },
    Factor { block: Block2Matrix },
    WordEval {
        word: String,
        #[serde(default)]
        vector: Option<HomologyVector>,
    },
    Ttk { p: i64, q: i64, r: i64, n: i64 },
    Case { q: i64, m: i64 },
    Sweep { q_max: i64 },
    VerifyRelators {},
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpOutput {
    pub vector: HomologyVector,
    pub split_product: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FactorOutput {
    pub block: Block2Matrix,
    pub moves: Vec<ElementaryMove>,
    pub word: GoeritzWord,
    pub ascii: String,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WordEvalOutput {
    pub word: GoeritzWord,
    pub ascii: String,
    pub matrix: Matrix4,
    pub epsilon_parity: Parity,
    pub block: Option<Block2Matrix>,
    pub image: Option<HomologyVector>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TtkOutput {
    pub params: TtkParams,
    pub vector: HomologyVector,
    pub split_product: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepEntry {
    pub q: i64,
    pub m: i64,
    pub passed: bool,
    pub failed_checks: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SweepOutput {
    pub q_max: i64,
    pub total: usize,
    pub passed: usize,
    pub entries: Vec<SweepEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelatorsOutput {
    pub plain: RelatorReport,
    pub extended: RelatorReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Output {
    Sp(SpOutput),
    Decide(Verdict),
    DecideExtended(ExtendedVerdict),
    Screen(ScreenReport),
    Factor(FactorOutput),
    WordEval(WordEvalOutput),
    Ttk(TtkOutput),
    Case(Box<CaseReport>),
    Sweep(SweepOutput),
    VerifyRelators(RelatorsOutput),
    Batch(BatchReport),
}

impl Output {
    fn outcome(&self) -> Option<Outcome> {
        match self {
            Output::Decide(v) => Some(v.outcome),
            Output::DecideExtended(v) => Some(if v.is_equivalent() {
                Outcome::Equivalent
            } else if v.plain.outcome == Outcome::Undecidable || v.epsilon.outcome == Outcome::Undecidable {
                Outcome::Undecidable
            } else {
                Outcome::NotEquivalent
            }),
            Output::Screen(r) => Some(r.verdict.outcome),
            _ => None,
        }
    }
}

pub fn execute(req: &Request) -> CliResult<Output> {
    Ok(match req {
        Request::Sp { vector } => Output::Sp(SpOutput {
            vector: *vector,
            split_product: split_product(vector)?,
        }),
        Request::Decide { k, kp } => Output::Decide(decide_homological(k, kp)?),
        Request::DecideExtended { k, kp } => Output::DecideExtended(decide_extended(k, kp)?),
        Request::Screen { k, kp } => Output::Screen(zero_slope_screen(k, kp)?),
        Request::Factor { block } => {
            let moves = elementary_factors(block)?;
            let f = factor_block(block)?;
            Output::Factor(FactorOutput {
                block: f.block,
                moves,
                ascii: f.word.to_string(),
                word: f.word,
                certified: f.certified,
            })
        }
        Request::WordEval { word, vector } => {
            let w: GoeritzWord = match named_word(word) {
                Ok(w) => w,
                Err(_) => word.parse()?,
            };
            let matrix = evaluate(&w)?;
            let image = vector.as_ref().map(|k| matrix.apply(k)).transpose()?;
            Output::WordEval(WordEvalOutput {
                ascii: w.to_string(),
                epsilon_parity: w.epsilon_parity(),
                block: matrix.is_goeritz_form().then(|| matrix.block(0, 0)),
                word: w,
                matrix,
                image,
            })
        }
        Request::Ttk { p, q, r, n } => {
            let params = TtkParams {
                p: *p,
                q: *q,
                r: *r,
                n: *n,
            };
            let vector = ttk_homology(&params)?;
            Output::Ttk(TtkOutput {
                params,
                vector,
                split_product: split_product(&vector)?,
            })
        }
        Request::Case { q, m } => Output::Case(Box::new(verify_case(*q, *m)?)),
        Request::Sweep { q_max } => Output::Sweep(sweep(*q_max)?),
        Request::VerifyRelators {} => {
            let (plain, extended) = verify_relators();
            Output::VerifyRelators(RelatorsOutput { plain, extended })
        }
    })
}

fn sweep(q_max: i64) -> CliResult<SweepOutput> {
    let reports: Vec<_> = admissible_pairs(q_max)
        .into_par_iter()
        .map(|(q, m)| verify_case(q, m))
        .collect::<Result<_, _>>()?;
    let entries: Vec<SweepEntry> = reports
        .iter()
        .map(|r| SweepEntry {
            q: r.q,
            m: r.m,
            passed: r.passed(),
            failed_checks: r.failures().map(|c| c.tag).collect(),
        })
        .collect();
    Ok(SweepOutput {
        q_max,
        total: entries.len(),
        passed: entries.iter().filter(|e| e.passed).count(),
        entries,
    })
}

/// Batch input: a list of request objects, each validated on its own.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BatchRequest {
    pub items: Vec<Value>,
}

impl BatchRequest {
    /// Accepts either `{"items": [...]}` or a bare array.
    pub fn from_json(text: &str) -> CliResult<Self> {
        let value: Value = serde_json::from_str(text)
            .map_err(|e| Failure::parse(e.column(), format!("batch input line {}: {e}", e.line())))?;
        match value {
            Value::Array(items) => Ok(BatchRequest { items }),
            Value::Object(mut map) => match map.remove("items") {
                Some(Value::Array(items)) if map.is_empty() => Ok(BatchRequest { items }),
                _ => Err(Failure::usage("batch input must be an array or an object with only an `items` array")),
            },
            _ => Err(Failure::usage("batch input must be an array or an object with only an `items` array")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchItem {
    pub index: usize,
    pub input: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<Output>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<Failure>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BatchSummary {
    pub total: usize,
    pub equivalent: usize,
    pub not_equivalent: usize,
    pub undecidable: usize,
    pub other: usize,
    pub errors: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BatchReport {
    pub items: Vec<BatchItem>,
    pub summary: BatchSummary,
}

fn run_item(index: usize, input: &Value) -> BatchItem {
    let outcome = serde_json::from_value::<Request>(input.clone())
        .map_err(|e| Failure {
            code: EXIT_USAGE,
            kind: FailureKind::Parse,
            message: format!("invalid request: {e}"),
            position: None,
        })
        .and_then(|req| match req {
            Request::Sweep { .. } => Err(Failure::usage("sweep is not available inside a batch")),
            req => execute(&req),
        });
    let (result, error) = match outcome {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(e)),
    };
    BatchItem {
        index,
        input: input.clone(),
        result,
        error,
    }
}

/// Runs every item independently. Items may execute concurrently; the report
/// keeps input order.
pub fn run_batch(request: &BatchRequest) -> BatchReport {
    let items: Vec<BatchItem> = request
        .items
        .par_iter()
        .enumerate()
        .map(|(i, v)| run_item(i, v))
        .collect();
    let mut summary = BatchSummary {
        total: items.len(),
        ..BatchSummary::default()
    };
    for item in &items {
        match (&item.result, &item.error) {
            (_, Some(_)) => summary.errors += 1,
            (Some(r), None) => match r.outcome() {
                Some(Outcome::Equivalent) => summary.equivalent += 1,
                Some(Outcome::NotEquivalent) => summary.not_equivalent += 1,
                Some(Outcome::Undecidable) => summary.undecidable += 1,
                None => summary.other += 1,
            },
            (None, None) => unreachable!("batch item without result or error"),
        }
    }
    BatchReport { items, summary }
}

#[derive(Debug, Clone, Serialize)]
pub struct Metadata {
    pub tool: &'static str,
    pub tool_version: &'static str,
    pub generated_at_unix: u64,
}

impl Metadata {
    fn now() -> Self {
        Metadata {
            tool: env!("CARGO_PKG_NAME"),
            tool_version: env!("CARGO_PKG_VERSION"),
            generated_at_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
        }
    }
}

/// Top-level JSON document: exactly one of `report` or `error`.
#[derive(Debug, Clone, Serialize)]
pub struct Document<'a> {
    pub format_version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<&'a Output>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<&'a Failure>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Parser)]
#[command(name = "goeritz", version, about = "Goeritz equivalence of curves on the genus-2 Heegaard surface")]
struct Cli {
    /// Emit a JSON document instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Add tool name, version and a timestamp to JSON output.
    #[arg(long, global = true)]
    metadata: bool,

    /// Print the JSON schema of the report document and exit.
    #[arg(long)]
    schema: bool,

    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Debug, Args)]
struct PairArgs {
    /// Source vector a,x,b,y.
    #[arg(long, allow_hyphen_values = true)]
    k: String,
    /// Target vector a,x,b,y.
    #[arg(long, allow_hyphen_values = true)]
    kp: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Split product a*b + x*y.
    Sp {
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
    },
    /// Decide homological Goeritz equivalence.
    Decide {
        #[command(flatten)]
        pair: PairArgs,
        /// Also try the handlebody-swapping route.
        #[arg(long)]
        extended: bool,
        /// Run the zero-slope screen instead.
        #[arg(long, conflicts_with = "extended")]
        zero_slope_screen: bool,
    },
    /// Zero-slope screen.
    Screen {
        #[command(flatten)]
        pair: PairArgs,
    },
    /// Factor a unimodular block s,t,u,v into generators.
    Factor {
        #[arg(long, allow_hyphen_values = true)]
        block: String,
    },
    /// Evaluate a generator word, ASCII or named.
    WordEval {
        #[arg(long, allow_hyphen_values = true)]
        word: String,
        #[arg(long, allow_hyphen_values = true)]
        vector: Option<String>,
    },
    /// Check the presentation relators.
    VerifyRelators,
    /// Homology vector of a twisted torus knot.
    Ttk {
        #[arg(long, allow_hyphen_values = true)]
        p: i64,
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long, allow_hyphen_values = true)]
        r: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Full report for one (q, m) knot pair.
    Case {
        #[arg(long, allow_hyphen_values = true)]
        q: i64,
        #[arg(long, allow_hyphen_values = true)]
        m: i64,
    },
    /// Run `case` for every admissible (q, m) with q <= qmax.
    Sweep {
        #[arg(long, allow_hyphen_values = true)]
        qmax: i64,
    },
    /// Run a JSON batch from FILE, or stdin when FILE is `-` or absent.
    Batch { file: Option<String> },
}

fn request_of(cmd: Command, stdin: &mut dyn Read) -> CliResult<Either> {
    Ok(Either::Single(match cmd {
        Command::Sp { vector } => Request::Sp {
            vector: parse_vector(&vector)?,
        },
        Command::Decide {
            pair,
            extended,
            zero_slope_screen,
        } => {
            let (k, kp) = (parse_vector(&pair.k)?, parse_vector(&pair.kp)?);
            if zero_slope_screen {
                Request::Screen { k, kp }
            } else if extended {
                Request::DecideExtended { k, kp }
            } else {
                Request::Decide { k, kp }
            }
        }
        Command::Screen { pair } => Request::Screen {
            k: parse_vector(&pair.k)?,
            kp: parse_vector(&pair.kp)?,
        },
        Command::Factor { block } => Request::Factor {
            block: parse_block(&block)?,
        },
        Command::WordEval { word, vector } => Request::WordEval {
            word,
            vector: vector.as_deref().map(parse_vector).transpose()?,
        },
        Command::VerifyRelators => Request::VerifyRelators {},
        Command::Ttk { p, q, r, n } => Request::Ttk { p, q, r, n },
        Command::Case { q, m } => Request::Case { q, m },
        Command::Sweep { qmax } => Request::Sweep { q_max: qmax },
        Command::Batch { file } => {
            let text = match file.as_deref() {
                None | Some("-") => {
                    let mut s = String::new();
                    stdin
                        .read_to_string(&mut s)
                        .map_err(|e| Failure::usage(format!("reading stdin: {e}")))?;
                    s
                }
                Some(path) => {
                    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("reading {path}: {e}")))?
                }
            };
            return Ok(Either::Batch(BatchRequest::from_json(&text)?));
        }
    }))
}

enum Either {
    Single(Request),
    Batch(BatchRequest),
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::usage(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    // the global pool can only be set once per process
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let target: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    if cli.schema {
        let _ = stdout.write_all(SCHEMA.as_bytes());
        return EXIT_OK;
    }
    let Some(cmd) = cli.command else {
        let _ = writeln!(stderr, "no subcommand given; see `goeritz --help`");
        return EXIT_USAGE;
    };
    let result = configure_threads().and_then(|()| {
        request_of(cmd, stdin).and_then(|req| match req {
            Either::Single(r) => execute(&r),
            Either::Batch(b) => Ok(Output::Batch(run_batch(&b))),
        })
    });
    let metadata = cli.metadata.then(Metadata::now);
    match result {
        Ok(out) => {
            let text = if cli.json {
                to_json(&Document {
                    format_version: FORMAT_VERSION,
                    report: Some(&out),
                    error: None,
                    metadata,
                })
            } else {
                render(&out)
            };
            let _ = writeln!(stdout, "{text}");
            EXIT_OK
        }
        Err(f) => {
            if cli.json {
                let _ = writeln!(
                    stdout,
                    "{}",
                    to_json(&Document {
                        format_version: FORMAT_VERSION,
                        report: None,
                        error: Some(&f),
                        metadata,
                    })
                );
            }
            let _ = writeln!(stderr, "error: {f}");
            f.code
        }
    }
}

fn to_json(doc: &Document<'_>) -> String {
    serde_json::to_string_pretty(doc).expect("report serialization is infallible")
}

fn join<T: std::fmt::Debug>(xs: &[T]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

fn render_verdict(out: &mut String, label: &str, v: &Verdict) {
    let _ = write!(out, "{label}{:?}", v.outcome);
    if !v.failed_conditions.is_empty() {
        let tags: Vec<_> = v
            .failed_conditions
            .iter()
            .map(|c| serde_json::to_value(c).unwrap().as_str().unwrap_or_default().to_owned())
            .collect();
        let _ = write!(out, " (failed: {})", tags.join(", "));
    }
    out.push('\n');
    for w in &v.witnesses {
        let _ = writeln!(
            out,
            "  witness d={:+} block {:?} word {}{}",
            w.d,
            <[[i64; 2]; 2]>::from(w.block),
            w.word,
            if w.certified { "" } else { " (uncertified)" }
        );
    }
}

/// Human-readable rendering.
pub fn render(out: &Output) -> String {
    let mut s = String::new();
    match out {
        Output::Sp(o) => {
            let _ = write!(s, "{}", o.split_product);
        }
        Output::Decide(v) => render_verdict(&mut s, "", v),
        Output::DecideExtended(v) => {
            render_verdict(&mut s, "plain: ", &v.plain);
            render_verdict(&mut s, "epsilon: ", &v.epsilon);
        }
        Output::Screen(r) => {
            render_verdict(&mut s, "", &r.verdict);
            for route in &r.routes {
                let _ = writeln!(
                    s,
                    "  route {}: target {:?}, {} systems",
                    if route.swaps_handlebodies { "epsilon" } else { "plain" },
                    route.target.to_array(),
                    route.systems.len()
                );
            }
        }
        Output::Factor(f) => {
            let _ = write!(s, "{}\ncertified: {}", f.ascii, f.certified);
        }
        Output::WordEval(w) => {
            let _ = write!(s, "{}\n{}", w.ascii, w.matrix);
            if let Some(k) = w.image {
                let _ = write!(s, "\nimage: {:?}", k.to_array());
            }
        }
        Output::Ttk(t) => {
            let _ = write!(s, "{:?} (split product {})", t.vector.to_array(), t.split_product);
        }
        Output::Case(c) => {
            let _ = writeln!(s, "q={} m={}: {}", c.q, c.m, if c.passed() { "all checks pass" } else { "FAILED" });
            for check in &c.checks {
                let _ = writeln!(s, "  [{}] {}", if check.passed { "ok" } else { "FAIL" }, check.tag);
            }
        }
        Output::Sweep(sw) => {
            let _ = write!(s, "{}/{} pairs pass every check", sw.passed, sw.total);
            for e in sw.entries.iter().filter(|e| !e.passed) {
                let _ = write!(s, "\n  q={} m={}: {}", e.q, e.m, join(&e.failed_checks));
            }
        }
        Output::VerifyRelators(r) => {
            let _ = write!(s, "{}\n{}", r.plain, r.extended);
        }
        Output::Batch(b) => {
            for item in &b.items {
                match (&item.result, &item.error) {
                    (_, Some(e)) => {
                        let _ = writeln!(s, "#{} error: {e}", item.index);
                    }
                    (Some(r), None) => {
                        let body = render(r);
                        let first = body.lines().next().unwrap_or_default();
                        let _ = writeln!(s, "#{} {}", item.index, first);
                    }
                    (None, None) => {}
                }
            }
            let m = &b.summary;
            let _ = write!(
                s,
                "{} items: {} equivalent, {} not equivalent, {} undecidable, {} other, {} errors",
                m.total, m.equivalent, m.not_equivalent, m.undecidable, m.other, m.errors
            );
        }
    }
    s.trim_end().to_owned()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_parse_reports_positions() {
        assert_eq!(parse_vector("12,-5,17,5").unwrap(), HomologyVector::new(12, -5, 17, 5));
        assert_eq!(parse_vector("1,2,x,4").unwrap_err().position, Some(4));
        assert_eq!(parse_vector("1,2,3").unwrap_err().position, Some(5));
        assert_eq!(parse_vector("1,2,3,4,5").unwrap_err().position, Some(8));
        assert!(parse_vector("1, 2,3,4").is_err());
    }

    #[test]
    fn overflow_maps_to_arithmetic_exit() {
        let f = execute(&Request::Sp {
            vector: HomologyVector::new(i64::MAX, 0, 2, 0),
        })
        .unwrap_err();
        assert_eq!((f.code, f.kind), (EXIT_ARITHMETIC, FailureKind::Arithmetic));
    }

    #[test]
    fn batch_accepts_both_shapes() {
        assert_eq!(BatchRequest::from_json("[]").unwrap().items.len(), 0);
        assert_eq!(BatchRequest::from_json(r#"{"items":[{"op":"verify-relators"}]}"#).unwrap().items.len(), 1);
        assert!(BatchRequest::from_json(r#"{"things":[]}"#).is_err());
        assert!(BatchRequest::from_json("[").is_err());
    }

    #[test]
    fn empty_batch_has_zero_summary() {
        let r = run_batch(&BatchRequest::default());
        assert!(r.items.is_empty());
        assert_eq!(r.summary, BatchSummary::default());
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let item = run_item(0, &serde_json::json!({"op": "sp", "vector": [1, 0, 0, 0], "extra": 1}));
        assert!(item.error.is_some());
    }
}
