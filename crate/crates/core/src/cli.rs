//! Command-line interface.
//!
//! Exit codes: 0 yes / ok, 1 no / failed check, 2 unknown, 3 input or
//! validation error.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::acyclic::{AcyclicPresentation, Mode};
use crate::decide::{decide_dual, decide_in_mode, Answer, DecideLimits, Query, QueryKind, Verdict};
use crate::engine::{check_head_layout, compute_spans, run_orbit, HeadLayout, Limits, Terminal};
use crate::fuzz::{orbit_search, run_fuzz, Fixture, FuzzConfig, OrbitSearch};
use crate::graph::{check_cycle_free, GraphSide, SideGraph};
use crate::oracle::{
    closure, exhaustive_samples, oracle_cancellation_check, oracle_divides_left, oracle_divides_right, oracle_equal,
    Bounds,
};
use crate::presentation::Presentation;
use crate::report::{
    describe_reason, format_representation, graph_dot, write_trace_jsonl, GraphRecord, RepresentationRecord,
    SpanRecord, VerdictRecord, WitnessRecord,
};
use crate::represent::{represent, GuideLetter};
use crate::word::{Letter, Word};

pub const EXIT_YES: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNKNOWN: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

/// Environment variable holding the log filter.
pub const LOG_ENV: &str = "ACYCLIC_REWRITER_LOG";

#[derive(Debug, Parser)]
#[command(
    name = "acyclic-rewriter",
    version,
    about = "Word equality and divisibility for semigroup presentations with cycle-free left and right graphs",
    after_help = "Exit codes: 0 yes/ok, 1 no, 2 unknown, 3 input error.\n\
                  Words are whitespace-separated generator tokens; a chunk that is not a \
                  declared token is split into single-character tokens, so `aab` means `a a b`.\n\
                  Log verbosity: ACYCLIC_REWRITER_LOG=debug|info|warn|error."
)]
pub struct Cli {
    /// Presentation file.
    #[arg(long, short = 'p', global = true)]
    pub presentation: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that the left and right graphs are cycle-free.
    Validate(ValidateArgs),
    /// Export a side graph.
    Graph(GraphArgs),
    /// Show the prefix or suffix representation of a word.
    Represent(RepresentArgs),
    /// Run the transformation orbit of a word towards a guide letter.
    Orbit(OrbitArgs),
    /// Compare the prefix and suffix heads of a word.
    Layout(LayoutArgs),
    /// Decide equality or divisibility.
    Decide(DecideArgs),
    /// Bounded brute-force answers.
    Oracle(OracleArgs),
    /// Compare decisions with the oracle on random instances.
    Fuzz(FuzzArgs),
    /// Rerun a fuzz fixture.
    Replay(ReplayArgs),
    /// Run many orbits and report those the period detector cannot settle.
    Search(SearchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SideArg {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Prefix,
    Suffix,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Prefix => Mode::Prefix,
            ModeArg::Suffix => Mode::Suffix,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub side: SideArg,
    #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
    pub format: GraphFormat,
}

#[derive(Debug, Args)]
pub struct RepresentArgs {
    #[arg(long)]
    pub guide: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Prefix)]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    pub word: String,
}

#[derive(Debug, Args)]
pub struct EngineLimits {
    /// Steps per orbit.
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_steps: u64,
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_word_length: u64,
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long)]
    pub guide: String,
    #[arg(long, value_enum, default_value_t = ModeArg::Prefix)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub limits: EngineLimits,
    /// Disable period detection.
    #[arg(long)]
    pub no_detect: bool,
    /// Write the steps as JSON Lines.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Print span/kernel splits of every term.
    #[arg(long)]
    pub spans: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    pub word: String,
}

#[derive(Debug, Args)]
pub struct LayoutArgs {
    #[arg(long)]
    pub prefix_guide: String,
    #[arg(long)]
    pub suffix_guide: String,
    pub word: String,
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    #[command(subcommand)]
    pub query: DecideQuery,
}

#[derive(Debug, Subcommand)]
pub enum DecideQuery {
    /// U = V?
    Equal(DecideCommon),
    /// U = V·W (left) or U = W·V (right) for some W?
    Divides(DecideDivides),
}

#[derive(Debug, Args)]
pub struct DecideCommon {
    pub u: String,
    pub v: String,
    #[command(flatten)]
    pub limits: EngineLimits,
    /// Steps across all orbits of the query.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub total_steps: u64,
    /// Consume the target from this end (equality only).
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Also decide from the other end and compare.
    #[arg(long)]
    pub dual: bool,
    /// Write every orbit as JSON Lines.
    #[arg(long)]
    pub trace: Option<PathBuf>,
    /// Write the verdict and its witness as JSON.
    #[arg(long)]
    pub witness: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct DecideDivides {
    #[arg(long, value_enum, default_value_t = SideArg::Left)]
    pub side: SideArg,
    #[command(flatten)]
    pub common: DecideCommon,
}

#[derive(Debug, Args)]
pub struct OracleBounds {
    #[arg(long = "max-length", visible_alias = "oracle-max-length", default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_length: u64,
    #[arg(long = "max-states", visible_alias = "oracle-max-states", default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_states: u64,
}

impl OracleBounds {
    fn bounds(&self) -> Bounds {
        Bounds {
            max_word_length: self.max_length as usize,
            max_states: self.max_states as usize,
        }
    }
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(subcommand)]
    pub query: OracleQuery,
}

#[derive(Debug, Subcommand)]
pub enum OracleQuery {
    Equal {
        u: String,
        v: String,
        #[command(flatten)]
        bounds: OracleBounds,
    },
    Divides {
        #[arg(long, value_enum, default_value_t = SideArg::Left)]
        side: SideArg,
        u: String,
        v: String,
        #[command(flatten)]
        bounds: OracleBounds,
    },
    /// Print the bounded congruence class, shortest words first.
    Closure {
        u: String,
        #[command(flatten)]
        bounds: OracleBounds,
    },
    /// Check aX = aY ⇔ X = Y and Xa = Ya ⇔ X = Y for all short X, Y.
    Cancellation {
        /// Longest X and Y.
        #[arg(long, default_value_t = 3)]
        words: usize,
        #[command(flatten)]
        bounds: OracleBounds,
    },
}

#[derive(Debug, Args)]
pub struct FuzzArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub cases: usize,
    #[arg(long, default_value_t = 10_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_steps: u64,
    #[arg(long, default_value_t = 4096, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_word_length: u64,
    #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u64).range(1..))]
    pub oracle_max_length: u64,
    #[arg(long, default_value_t = 200_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub oracle_max_states: u64,
    /// Directory for failing instances.
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
    /// Flip every definitive decision (harness self-test).
    #[arg(long, hide = true)]
    pub inject_fault: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ReplayArgs {
    pub fixture: PathBuf,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 20)]
    pub presentations: usize,
    /// Longest starting word.
    #[arg(long, default_value_t = 6)]
    pub words: usize,
    #[arg(long, default_value_t = 2000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_steps: u64,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

/// Failure that maps to exit code 3.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct CliError(String);

impl CliError {
    fn new(msg: impl Into<String>) -> Self {
        CliError(msg.into())
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError(e.to_string())
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// Initializes logging from [`LOG_ENV`]; warnings by default.
pub fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Parses `args` and runs the command, returning the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_YES };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_ERROR
        }
    }
}

fn load_presentation(cli: &Cli) -> Result<Presentation> {
    let path = cli
        .presentation
        .as_ref()
        .ok_or_else(|| CliError::new("--presentation <path> is required for this command"))?;
    let text = fs::read_to_string(path).map_err(|e| CliError::new(format!("{}: {e}", path.display())))?;
    Presentation::parse(&text).map_err(|e| CliError::new(format!("{}: {e}", path.display())))
}

fn load_acyclic(cli: &Cli) -> Result<AcyclicPresentation> {
    let p = load_presentation(cli)?;
    let described = p.clone();
    AcyclicPresentation::new(p).map_err(|w| CliError::new(format!("not cycle-free: {}", w.describe(&described))))
}

fn word(p: &Presentation, text: &str) -> Result<Word> {
    p.parse_word_lenient(text)
        .map_err(|e| CliError::new(format!("word `{text}`: {e}")))
}

fn nonempty_word(p: &Presentation, text: &str) -> Result<Word> {
    let w = word(p, text)?;
    if w.is_empty() {
        return Err(CliError::new(format!("word `{text}` is empty")));
    }
    Ok(w)
}

fn letter(p: &Presentation, token: &str) -> Result<Letter> {
    p.alphabet()
        .get(token)
        .ok_or_else(|| CliError::new(format!("guide `{token}` is not a generator")))
}

fn answer_code(a: Answer) -> i32 {
    match a {
        Answer::Yes => EXIT_YES,
        Answer::No => EXIT_NO,
        Answer::Unknown => EXIT_UNKNOWN,
    }
}

fn json_line(out: &mut dyn Write, value: &impl Serialize) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    writeln!(out)?;
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::new(format!("{}: {e}", path.display())))
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Validate(a) => validate(cli, a, out),
        Command::Graph(a) => graph(cli, a, out),
        Command::Represent(a) => represent_cmd(cli, a, out),
        Command::Orbit(a) => orbit(cli, a, out),
        Command::Layout(a) => layout(cli, a, out),
        Command::Decide(a) => decide_cmd(cli, a, out),
        Command::Oracle(a) => oracle(cli, a, out),
        Command::Fuzz(a) => fuzz(a, out),
        Command::Replay(a) => replay(a, out),
        Command::Search(a) => search(a, out),
    }
}

fn validate(cli: &Cli, a: &ValidateArgs, out: &mut dyn Write) -> Result<i32> {
    let p = load_presentation(cli)?;
    let result = check_cycle_free(&p);
    match a.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Report {
                cycle_free: bool,
                witness: Option<WitnessRecord>,
            }
            json_line(
                out,
                &Report {
                    cycle_free: result.is_ok(),
                    witness: result.as_ref().err().map(|w| WitnessRecord::new(&p, w)),
                },
            )?;
        }
        Format::Text => match &result {
            Ok(()) => writeln!(out, "cycle-free")?,
            Err(w) => writeln!(out, "not cycle-free: {}", w.describe(&p))?,
        },
    }
    Ok(if result.is_ok() { EXIT_YES } else { EXIT_NO })
}

fn graph(cli: &Cli, a: &GraphArgs, out: &mut dyn Write) -> Result<i32> {
    let p = load_presentation(cli)?;
    let side = match a.side {
        SideArg::Left => GraphSide::Left,
        SideArg::Right => GraphSide::Right,
    };
    let g = SideGraph::build(&p, side);
    match a.format {
        GraphFormat::Dot => write!(out, "{}", graph_dot(&p, &g))?,
        GraphFormat::Json => {
            serde_json::to_writer(&mut *out, &GraphRecord::new(&p, &g))?;
            writeln!(out)?;
        }
    }
    Ok(EXIT_YES)
}

fn represent_cmd(cli: &Cli, a: &RepresentArgs, out: &mut dyn Write) -> Result<i32> {
    let ap = load_acyclic(cli)?;
    let u = word(&ap, &a.word)?;
    let g = GuideLetter {
        letter: letter(&ap, &a.guide)?,
        mode: a.mode.into(),
    };
    let r = represent(&ap, &u, g);
    match a.format {
        Format::Json => json_line(out, &RepresentationRecord::new(&ap, &r))?,
        Format::Text => {
            writeln!(out, "{}", format_representation(&ap, &r))?;
            writeln!(out, "status: {}", r.status.as_str())?;
        }
    }
    Ok(EXIT_YES)
}

fn orbit(cli: &Cli, a: &OrbitArgs, out: &mut dyn Write) -> Result<i32> {
    let ap = load_acyclic(cli)?;
    let u = nonempty_word(&ap, &a.word)?;
    let g = GuideLetter {
        letter: letter(&ap, &a.guide)?,
        mode: a.mode.into(),
    };
    let limits = Limits {
        max_steps: a.limits.max_steps as usize,
        max_word_length: a.limits.max_word_length as usize,
        detect_periods: !a.no_detect,
    };
    let t = run_orbit(&ap, &u, g, limits);
    if let Some(path) = &a.trace {
        let mut f = create(path)?;
        write_trace_jsonl(&mut f, &ap, &t)?;
        f.flush()?;
    }
    match a.format {
        Format::Json => write_trace_jsonl(out, &ap, &t)?,
        Format::Text => {
            for (i, w) in t.terms().enumerate() {
                writeln!(out, "{:>4}  {}", i + 1, ap.render(w))?;
            }
            let detail = match &t.terminal {
                Terminal::Stuck(s) => format!(" ({})", s.as_str()),
                Terminal::Periodic(c) => format!(
                    " (terms {} and {}, boundary {}, shift {}, lead {})",
                    c.m, c.n, c.boundary, c.shift, c.lead
                ),
                Terminal::BudgetExhausted(b) => format!(" ({})", b.as_str()),
                Terminal::MatchesGuide => String::new(),
            };
            writeln!(out, "terminal: {}{detail}", t.terminal.as_str())?;
        }
    }
    if a.spans {
        for s in compute_spans(&t) {
            let r = SpanRecord::new(&ap, &s);
            writeln!(
                out,
                "{:>4}  [{}] {} [{}]",
                r.term, r.frozen_left, r.kernel, r.frozen_right
            )?;
        }
    }
    Ok(match t.terminal {
        Terminal::MatchesGuide => EXIT_YES,
        Terminal::Stuck(_) | Terminal::Periodic(_) => EXIT_NO,
        Terminal::BudgetExhausted(_) => EXIT_UNKNOWN,
    })
}

fn layout(cli: &Cli, a: &LayoutArgs, out: &mut dyn Write) -> Result<i32> {
    let ap = load_acyclic(cli)?;
    let u = nonempty_word(&ap, &a.word)?;
    let l = check_head_layout(&ap, &u, letter(&ap, &a.prefix_guide)?, letter(&ap, &a.suffix_guide)?);
    match &l {
        HeadLayout::Vacuous => writeln!(out, "vacuous: one of the representations has no head")?,
        HeadLayout::SharedHead => writeln!(out, "shared head")?,
        HeadLayout::Separated { gap } => writeln!(out, "separated, gap: {}", ap.render(gap))?,
        HeadLayout::Violation(v) => writeln!(out, "violation: {v:?}")?,
    }
    Ok(if matches!(l, HeadLayout::Violation(_)) {
        EXIT_NO
    } else {
        EXIT_YES
    })
}

fn write_verdict(ap: &AcyclicPresentation, v: &Verdict, out: &mut dyn Write) -> Result<()> {
    writeln!(out, "{} ({} mode): {}", v.kind.as_str(), v.mode, v.answer)?;
    for seg in &v.segments {
        let terms: Vec<String> = seg.orbit.terms().map(|w| ap.render(w)).collect();
        writeln!(
            out,
            "  guide {}: {} [{}]",
            ap.alphabet().token(seg.guide().letter),
            terms.join(" -> "),
            seg.orbit.terminal.as_str()
        )?;
    }
    writeln!(out, "  reason: {}", describe_reason(ap, v))?;
    if let Some(w) = &v.residual {
        writeln!(out, "  residual: {}", ap.render(w))?;
    }
    writeln!(out, "  steps: {}", v.steps_used)?;
    Ok(())
}

fn decide_cmd(cli: &Cli, a: &DecideArgs, out: &mut dyn Write) -> Result<i32> {
    let ap = load_acyclic(cli)?;
    let (kind, c) = match &a.query {
        DecideQuery::Equal(c) => (QueryKind::Equal, c),
        DecideQuery::Divides(d) => (
            match d.side {
                SideArg::Left => QueryKind::DividesLeft,
                SideArg::Right => QueryKind::DividesRight,
            },
            &d.common,
        ),
    };
    if kind != QueryKind::Equal && (c.dual || c.mode.is_some()) {
        return Err(CliError::new("--mode and --dual apply to equality only"));
    }
    let q = Query {
        kind,
        u: nonempty_word(&ap, &c.u)?,
        v: nonempty_word(&ap, &c.v)?,
        limits: DecideLimits {
            max_steps: c.limits.max_steps as usize,
            total_steps: c.total_steps as usize,
            max_word_length: c.limits.max_word_length as usize,
        },
    };
    let mode = c.mode.map_or(kind.default_mode(), Mode::from);
    let mut verdicts = vec![];
    if c.dual {
        let (p, s) = decide_dual(&ap, &q).map_err(|e| CliError::new(e.to_string()))?;
        verdicts.push(p);
        verdicts.push(s);
    } else {
        verdicts.push(decide_in_mode(&ap, &q, mode).map_err(|e| CliError::new(e.to_string()))?);
    }
    for v in &verdicts {
        v.replay(&ap, &q)
            .map_err(|e| CliError::new(format!("internal error: witness does not replay: {e}")))?;
    }

    if let Some(path) = &c.trace {
        let mut f = create(path)?;
        for v in &verdicts {
            for seg in &v.segments {
                write_trace_jsonl(&mut f, &ap, &seg.orbit)?;
            }
        }
        f.flush()?;
    }
    let records: Vec<VerdictRecord> = verdicts.iter().map(|v| VerdictRecord::new(&ap, v)).collect();
    if let Some(path) = &c.witness {
        let mut f = create(path)?;
        if records.len() == 1 {
            serde_json::to_writer_pretty(&mut f, &records[0])?;
        } else {
            serde_json::to_writer_pretty(&mut f, &records)?;
        }
        writeln!(f)?;
        f.flush()?;
    }
    match c.format {
        Format::Json if records.len() == 1 => json_line(out, &records[0])?,
        Format::Json => json_line(out, &records)?,
        Format::Text => {
            for v in &verdicts {
                write_verdict(&ap, v, out)?;
            }
        }
    }

    let answers: Vec<Answer> = verdicts.iter().map(|v| v.answer).collect();
    if let [x, y] = answers[..] {
        if x.is_definitive() && y.is_definitive() && x != y {
            writeln!(out, "prefix and suffix verdicts disagree")?;
            return Err(CliError::new("prefix and suffix verdicts disagree"));
        }
        return Ok(answer_code(if x.is_definitive() { x } else { y }));
    }
    Ok(answer_code(answers[0]))
}

fn oracle(cli: &Cli, a: &OracleArgs, out: &mut dyn Write) -> Result<i32> {
    let p = load_presentation(cli)?;
    match &a.query {
        OracleQuery::Equal { u, v, bounds } => {
            let ans = oracle_equal(&p, &nonempty_word(&p, u)?, &nonempty_word(&p, v)?, bounds.bounds());
            writeln!(out, "equal: {ans}")?;
            Ok(answer_code(ans))
        }
        OracleQuery::Divides { side, u, v, bounds } => {
            let (u, v) = (nonempty_word(&p, u)?, nonempty_word(&p, v)?);
            let (ans, w) = match side {
                SideArg::Left => oracle_divides_left(&p, &u, &v, bounds.bounds()),
                SideArg::Right => oracle_divides_right(&p, &u, &v, bounds.bounds()),
            };
            writeln!(
                out,
                "divides-{}: {ans}",
                if *side == SideArg::Left { "left" } else { "right" }
            )?;
            if let Some(w) = w {
                writeln!(out, "residual: {}", p.render(&w))?;
            }
            Ok(answer_code(ans))
        }
        OracleQuery::Closure { u, bounds } => {
            let c = closure(&p, &nonempty_word(&p, u)?, bounds.bounds());
            for w in c.sorted_members() {
                writeln!(out, "{}", p.render(w))?;
            }
            writeln!(
                out,
                "# {} words, {}",
                c.members.len(),
                if c.complete { "complete" } else { "incomplete" }
            )?;
            Ok(if c.complete { EXIT_YES } else { EXIT_UNKNOWN })
        }
        OracleQuery::Cancellation { words, bounds } => {
            let r = oracle_cancellation_check(&p, bounds.bounds(), exhaustive_samples(&p, *words));
            writeln!(
                out,
                "checked {}, indefinite {}, violations {}",
                r.checked,
                r.indefinite,
                r.violations.len()
            )?;
            for v in &r.violations {
                writeln!(
                    out,
                    "  {} / {} with {} on the {:?}: extended {}, base {}",
                    p.render(&v.sample.x),
                    p.render(&v.sample.y),
                    p.alphabet().token(v.sample.letter),
                    v.side,
                    v.extended_equal,
                    v.base_equal
                )?;
            }
            Ok(if r.violations.is_empty() { EXIT_YES } else { EXIT_NO })
        }
    }
}

fn fuzz(a: &FuzzArgs, out: &mut dyn Write) -> Result<i32> {
    let cfg = FuzzConfig {
        seed: a.seed,
        cases: a.cases,
        oracle: Bounds {
            max_word_length: a.oracle_max_length as usize,
            max_states: a.oracle_max_states as usize,
        },
        limits: DecideLimits {
            max_steps: a.max_steps as usize,
            max_word_length: a.max_word_length as usize,
            ..DecideLimits::default()
        },
        inject_fault: a.inject_fault,
        ..FuzzConfig::default()
    };
    let report = run_fuzz(&cfg);
    let mut saved = Vec::new();
    if let Some(dir) = &a.fixtures {
        for f in &report.failures {
            saved.push(f.save(dir).map_err(|e| CliError::new(e.to_string()))?);
        }
    }
    match a.format {
        Format::Json => json_line(out, &report)?,
        Format::Text => {
            writeln!(
                out,
                "seed {} cases {}: agree {}, disagree {}, unknown {} (decide {}, oracle {}), dual checks {}, certificates {}",
                report.seed,
                report.cases,
                report.agree,
                report.disagree,
                report.unknown,
                report.decide_unknown,
                report.oracle_unknown,
                report.dual_checked,
                report.certificates
            )?;
            for f in &report.failures {
                writeln!(out, "  case {}: {:?}", f.case, f.outcome.problems)?;
            }
            for path in &saved {
                writeln!(out, "  saved {}", path.display())?;
            }
        }
    }
    Ok(if report.is_clean() { EXIT_YES } else { EXIT_NO })
}

fn replay(a: &ReplayArgs, out: &mut dyn Write) -> Result<i32> {
    let f = Fixture::load(&a.fixture).map_err(|e| CliError::new(format!("{}: {e}", a.fixture.display())))?;
    let now = f.rerun().map_err(|e| CliError::new(e.to_string()))?;
    let same = now == f.outcome;
    writeln!(
        out,
        "{} {} {}: decide {}, oracle {}, problems {:?}",
        f.kind.as_str(),
        f.u,
        f.v,
        now.decide,
        now.oracle,
        now.problems
    )?;
    writeln!(out, "{}", if same { "reproduced" } else { "outcome changed" })?;
    Ok(if same { EXIT_YES } else { EXIT_NO })
}

fn search(a: &SearchArgs, out: &mut dyn Write) -> Result<i32> {
    let mut cfg = OrbitSearch {
        seed: a.seed,
        presentations: a.presentations,
        ..OrbitSearch::default()
    };
    cfg.shape.max_word_length = a.words;
    cfg.limits.max_steps = a.max_steps as usize;
    let r = orbit_search(&cfg);
    match a.format {
        Format::Json => json_line(out, &r)?,
        Format::Text => {
            writeln!(
                out,
                "{} presentations, {} orbits: {} terminated, {} certified, {} incomplete",
                r.presentations,
                r.orbits,
                r.terminated,
                r.certified,
                r.incomplete.len()
            )?;
            for o in &r.incomplete {
                writeln!(
                    out,
                    "  incomplete: [{}] {} towards {} ({})",
                    o.presentation.trim_end().replace('\n', "; "),
                    o.word,
                    o.guide,
                    o.mode
                )?;
            }
        }
    }
    Ok(if r.incomplete.is_empty() {
        EXIT_YES
    } else {
        EXIT_UNKNOWN
    })
}
