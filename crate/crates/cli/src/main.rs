use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sra_core::algebra::{Event, PredicateLibrary};
use sra_core::automaton::{to_dot, AutomatonError, Sra};
use sra_core::compiler::{sra_to_srem, stages, CompileError};
use sra_core::forecast::{ForecastError, PstParams};
use sra_core::pattern::{accepts, parse_pattern, Pattern, Srem};
use sra_core::shell::{
    learn, parse_csv, parse_jsonl, windowed, ForecastSession, Ingested, LearnedArtifact, Recognizer, RunConfig,
    ShellError,
};

/// Pattern recognition and forecasting over event streams with symbolic
/// register automata.
#[derive(Parser, Debug)]
#[command(name = "sra", version)]
struct Cli {
    /// JSON run configuration; flags given on the command line win
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compile a pattern and print the automaton of the requested stage
    Compile(CompileArgs),
    /// Report the stream indices at which the pattern matches
    Recognize(RecognizeArgs),
    /// Same as `compile --stage dsra`
    Determinize(PipelineArgs),
    /// Same as `compile --stage complement`
    Complement(PipelineArgs),
    /// Translate an automaton document back to a pattern
    ToSrem(ToSremArgs),
    /// Learn a forecasting artifact from a training stream
    Learn(LearnArgs),
    /// Emit a forecast after every event of a stream
    Forecast(ForecastArgs),
    /// Membership by derivation, and engine cross-checks on random streams
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Stage {
    Sra,
    NsraUnrolled,
    Dsra,
    Complement,
}

impl Stage {
    fn name(self) -> &'static str {
        match self {
            Stage::Sra => "sra",
            Stage::NsraUnrolled => "nsra-unrolled",
            Stage::Dsra => "dsra",
            Stage::Complement => "complement",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Jsonl,
    Csv,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    /// Pattern file
    pattern: PathBuf,
    /// Window length, replacing any `within` in the pattern
    #[arg(long)]
    window: Option<usize>,
    /// Also write the automaton as Graphviz DOT to this file
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Write every intermediate stage (JSON and DOT) into this directory
    #[arg(long)]
    stages_dir: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct CompileArgs {
    #[command(flatten)]
    common: PipelineArgs,
    /// Last pipeline stage to run
    #[arg(long, value_enum, default_value = "sra")]
    stage: Stage,
}

#[derive(Args, Debug)]
struct StreamArgs {
    /// Event stream; `-` or absent reads standard input
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Stream format [default: from the file extension, else jsonl]
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Fail on the first malformed record instead of skipping it
    #[arg(long)]
    strict: bool,
}

#[derive(Args, Debug)]
struct RecognizeArgs {
    pattern: PathBuf,
    #[command(flatten)]
    stream: StreamArgs,
    #[arg(long)]
    window: Option<usize>,
    /// Maximum live configurations [default: 100000]
    #[arg(long)]
    cap: Option<usize>,
}

#[derive(Args, Debug)]
struct ToSremArgs {
    /// Automaton document (JSON)
    automaton: PathBuf,
}

#[derive(Args, Debug)]
struct PstArgs {
    /// Maximum context length [default: 5]
    #[arg(long)]
    order: Option<usize>,
    /// Minimum empirical frequency of a context [default: 0.001]
    #[arg(long)]
    p_min: Option<f64>,
    /// Prediction ratio that makes a context significant [default: 1.05]
    #[arg(long)]
    ratio: Option<f64>,
    /// Smoothing weight [default: 0.01]
    #[arg(long)]
    gamma: Option<f64>,
    /// Slack on the minimum prediction [default: 0]
    #[arg(long)]
    alpha: Option<f64>,
}

#[derive(Args, Debug)]
struct LearnArgs {
    pattern: PathBuf,
    #[command(flatten)]
    stream: StreamArgs,
    #[arg(long)]
    window: Option<usize>,
    #[command(flatten)]
    pst: PstArgs,
    /// Where to write the artifact [default: standard output]
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ForecastArgs {
    /// Artifact written by `learn`
    artifact: PathBuf,
    #[command(flatten)]
    stream: StreamArgs,
    /// Steps ahead to forecast [default: 32]
    #[arg(long)]
    horizon: Option<usize>,
    /// Steps summed for the classification [default: 1]
    #[arg(long)]
    classify_window: Option<usize>,
    /// Classification threshold [default: 0.5]
    #[arg(long)]
    threshold: Option<f64>,
    /// Include the waiting-time masses in each record
    #[arg(long)]
    dist: bool,
}

#[derive(Args, Debug)]
struct OracleArgs {
    pattern: PathBuf,
    #[command(flatten)]
    stream: StreamArgs,
    /// Print the indices at which some suffix matches instead of whole-stream membership
    #[arg(long)]
    suffixes: bool,
    /// Cross-check the engine against derivation on this many random
    /// streams drawn from the input events
    #[arg(long)]
    random: Option<usize>,
    /// Longest random stream
    #[arg(long, default_value_t = 8)]
    max_length: usize,
    /// Seed for random streams
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

/// An error with the process exit code it maps to.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

impl Failure {
    fn new(code: u8, error: impl Into<anyhow::Error>) -> Self {
        Failure { code, error: error.into() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(error: anyhow::Error) -> Self {
        Failure { code: 1, error }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::new(1, e)
    }
}

fn automaton_code(e: &AutomatonError) -> u8 {
    match e {
        AutomatonError::ConfigurationCapExceeded(_) => 4,
        AutomatonError::Format(_) => 2,
        _ => 3,
    }
}

impl From<ShellError> for Failure {
    fn from(e: ShellError) -> Self {
        let code = match &e {
            ShellError::Pattern(_) | ShellError::Format(_) | ShellError::Config(_) => 2,
            ShellError::Compile(CompileError::Automaton(a)) | ShellError::Automaton(a) => automaton_code(a),
            ShellError::Compile(_) => 3,
            ShellError::Forecast(ForecastError::InsufficientData { .. }) => 5,
            ShellError::Forecast(ForecastError::Automaton(a)) => automaton_code(a),
            ShellError::Forecast(ForecastError::Format(_) | ForecastError::InvalidPst(_)) => 2,
            ShellError::Forecast(_) => 3,
        };
        Failure::new(code, e)
    }
}

impl From<CompileError> for Failure {
    fn from(e: CompileError) -> Self {
        ShellError::from(e).into()
    }
}

impl From<AutomatonError> for Failure {
    fn from(e: AutomatonError) -> Self {
        ShellError::from(e).into()
    }
}

type Outcome<T> = Result<T, Failure>;

fn emit(text: &str) -> Outcome<()> {
    let mut out = io::stdout().lock();
    out.write_all(text.as_bytes())?;
    out.flush()?;
    Ok(())
}

fn read_text(path: &Path) -> Outcome<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display())).map_err(Failure::from)
}

fn load_pattern(path: &Path) -> Outcome<Pattern> {
    let text = read_text(path)?;
    parse_pattern(&text).map_err(|e| Failure::new(2, anyhow!("{}: {e}", path.display())))
}

fn load_config(cli: &Cli) -> Outcome<RunConfig> {
    match &cli.config {
        None => Ok(RunConfig::default()),
        Some(p) => RunConfig::from_json(&read_text(p)?).map_err(|e| Failure::new(2, anyhow!("{}: {e}", p.display()))),
    }
}

fn read_stream(args: &StreamArgs) -> Outcome<Vec<Event>> {
    let (text, name) = match &args.input {
        Some(p) if p.as_os_str() != "-" => (read_text(p)?, p.display().to_string()),
        _ => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            (s, "<stdin>".to_string())
        }
    };
    let csv = match args.format {
        Some(f) => f == Format::Csv,
        None => args.input.as_ref().and_then(|p| p.extension()).is_some_and(|x| x.eq_ignore_ascii_case("csv")),
    };
    let Ingested { events, diagnostics, .. } = if csv { parse_csv(&text) } else { parse_jsonl(&text) };
    if let Some(d) = diagnostics.first() {
        if args.strict {
            return Err(Failure::new(2, anyhow!("{name}: {d}")));
        }
    }
    for d in &diagnostics {
        eprintln!("{name}: {d} (skipped)");
    }
    Ok(events.into_iter().map(|(_, e)| e).collect())
}

fn print_stats(name: &str, a: &Sra) {
    let s = a.stats();
    eprintln!(
        "stage {name}: states={} transitions={} registers={} finals={}",
        s.states, s.transitions, s.registers, s.finals
    );
}

fn run_pipeline(args: &PipelineArgs, stage: Stage, config: &RunConfig) -> Outcome<()> {
    let pattern = load_pattern(&args.pattern)?;
    if args.window == Some(0) {
        return Err(Failure::new(2, anyhow!("window must be at least 1")));
    }
    let e = windowed(&pattern.expr, args.window.or(config.window));
    let all = stages(&e, stage.name())?;
    if let Some(dir) = &args.stages_dir {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        for (i, s) in all.iter().enumerate() {
            let base = dir.join(format!("{i:02}-{}", s.name));
            fs::write(base.with_extension("json"), s.automaton.to_json() + "\n")?;
            fs::write(base.with_extension("dot"), to_dot(&s.automaton))?;
        }
    }
    for s in &all {
        print_stats(s.name, &s.automaton);
    }
    let last = &all.last().expect("at least one stage").automaton;
    if let Some(path) = &args.dot {
        fs::write(path, to_dot(last)).with_context(|| format!("cannot write {}", path.display()))?;
    }
    emit(&(last.to_json() + "\n"))?;
    Ok(())
}

fn recognize_cmd(args: &RecognizeArgs, config: &RunConfig) -> Outcome<()> {
    let pattern = load_pattern(&args.pattern)?;
    let e = windowed(&pattern.expr, args.window.or(config.window));
    let events = read_stream(&args.stream)?;
    let mut r = Recognizer::new(&e, args.cap.unwrap_or(config.configuration_cap))?;
    let mut out = BufWriter::new(io::stdout().lock());
    for t in events {
        if let Some(k) = r.step(t)? {
            writeln!(out, "{}", serde_json::json!({ "index": k }))?;
        }
    }
    out.flush()?;
    Ok(())
}

fn to_srem_cmd(args: &ToSremArgs) -> Outcome<()> {
    let a = Sra::from_json(&read_text(&args.automaton)?)?;
    let mut library = PredicateLibrary::new();
    for p in a.predicates().into_values() {
        library.merge(p).map_err(|e| Failure::new(2, e))?;
    }
    emit(&Pattern { library, expr: sra_to_srem(&a) }.to_string())?;
    Ok(())
}

fn pst_params(args: &PstArgs, config: &RunConfig) -> PstParams {
    let d = config.pst;
    PstParams {
        max_order: args.order.unwrap_or(d.max_order),
        p_min: args.p_min.unwrap_or(d.p_min),
        r: args.ratio.unwrap_or(d.r),
        gamma: args.gamma.unwrap_or(d.gamma),
        alpha: args.alpha.unwrap_or(d.alpha),
    }
}

fn learn_cmd(args: &LearnArgs, config: &RunConfig) -> Outcome<()> {
    let pattern = load_pattern(&args.pattern)?;
    let e = windowed(&pattern.expr, args.window.or(config.window));
    let params = pst_params(&args.pst, config);
    params.validate().map_err(|e| Failure::new(2, e))?;
    let events = read_stream(&args.stream)?;
    let artifact = learn(&e, &events, &params)?;
    print_stats("dsra-streaming", &artifact.automaton);
    eprintln!("symbols={} pst-nodes={}", artifact.symbols.len(), artifact.pst.nodes().len());
    let json = artifact.to_json() + "\n";
    match &args.output {
        Some(p) => fs::write(p, json).with_context(|| format!("cannot write {}", p.display()))?,
        None => emit(&json)?,
    }
    Ok(())
}

fn forecast_cmd(args: &ForecastArgs, config: &RunConfig) -> Outcome<()> {
    let artifact = LearnedArtifact::from_json(&read_text(&args.artifact)?)
        .map_err(|e| Failure::new(2, anyhow!("{}: {e}", args.artifact.display())))?;
    let horizon = args.horizon.unwrap_or(config.horizon);
    let window = args.classify_window.unwrap_or(config.classification_window);
    let threshold = args.threshold.unwrap_or(config.threshold);
    let mut session =
        ForecastSession::new(&artifact, horizon, window, threshold, args.dist).map_err(|e| Failure::new(2, e))?;
    let events = read_stream(&args.stream)?;
    let mut out = BufWriter::new(io::stdout().lock());
    for t in events {
        let record = session.step(t)?;
        writeln!(out, "{}", serde_json::to_string(&record).expect("records serialize"))?;
    }
    out.flush()?;
    Ok(())
}

/// Indices `k` such that some suffix of the first `k` events is accepted.
fn suffix_matches(e: &Srem, events: &[Event]) -> Vec<usize> {
    (1..=events.len()).filter(|k| (0..=*k).any(|m| accepts(e, &events[m..*k]))).collect()
}

fn oracle_cmd(args: &OracleArgs, config: &RunConfig) -> Outcome<()> {
    let pattern = load_pattern(&args.pattern)?;
    let events = read_stream(&args.stream)?;
    let e = &pattern.expr;
    let Some(n) = args.random else {
        let value = if args.suffixes {
            serde_json::json!({ "indices": suffix_matches(e, &events) })
        } else {
            serde_json::json!({ "accepts": accepts(e, &events) })
        };
        return emit(&format!("{value}\n"));
    };
    if events.is_empty() {
        return Err(Failure::new(2, anyhow!("random streams are drawn from the input events; none given")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut mismatches = 0usize;
    for i in 0..n {
        let len = rng.gen_range(0..=args.max_length);
        let stream: Vec<Event> = (0..len).map(|_| events[rng.gen_range(0..events.len())].clone()).collect();
        let want = suffix_matches(e, &stream);
        let mut r = Recognizer::new(e, config.configuration_cap)?;
        let mut got = Vec::new();
        for t in stream.iter().cloned() {
            got.extend(r.step(t)?);
        }
        if got != want {
            mismatches += 1;
            eprintln!("stream {i}: engine {got:?}, derivation {want:?}");
        }
    }
    emit(&format!("{}\n", serde_json::json!({ "streams": n, "mismatches": mismatches, "seed": args.seed })))?;
    if mismatches > 0 {
        return Err(Failure::new(3, anyhow!("{mismatches} of {n} streams disagree")));
    }
    Ok(())
}

fn run(cli: &Cli) -> Outcome<()> {
    let config = load_config(cli)?;
    match &cli.command {
        Command::Compile(a) => run_pipeline(&a.common, a.stage, &config),
        Command::Determinize(a) => run_pipeline(a, Stage::Dsra, &config),
        Command::Complement(a) => run_pipeline(a, Stage::Complement, &config),
        Command::Recognize(a) => recognize_cmd(a, &config),
        Command::ToSrem(a) => to_srem_cmd(a),
        Command::Learn(a) => learn_cmd(a, &config),
        Command::Forecast(a) => forecast_cmd(a, &config),
        Command::Oracle(a) => oracle_cmd(a, &config),
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|c| c.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) if is_broken_pipe(&f.error) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
