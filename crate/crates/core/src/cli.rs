//! The `sadic` command line. Exit codes: 0 success or pass, 1 a property
//! check failed, 2 invalid input.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};

use crate::analysis::{
    complexity_table, language, pair_frame, right_special_report, signal_audit, AuditMode,
    PairFrame,
};
use crate::bratteli::{
    check_intertwining, BratteliDiagram, IntertwiningCertificate, OrderedBratteliDiagram,
};
use crate::constructions::{
    amplify_diagram, assign_pinf_ordering, assign_pk_ordering, build_subexp_family, check_pinf,
    check_pk, check_toeplitz, toeplitz_ordering, GFunction,
};
use crate::demos;
use crate::directive::DirectiveSequence;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Parser)]
#[command(
    name = "sadic",
    version,
    about = "S-adic subshifts from ordered Bratteli diagrams"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    /// Where the primary output goes; standard output when absent.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a directive sequence.
    #[command(subcommand)]
    Construct(Construct),
    /// Amplify a diagram; `--out` receives the derived diagram.
    Amplify {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        src: DiagramSource,
        /// Also write the intertwining certificate here.
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Verify a property; exit code 1 when it fails.
    #[command(subcommand)]
    Check(Check),
    /// Languages, complexity, right-special words and signal audits.
    #[command(subcommand)]
    Analyze(Analyze),
    /// Asymptotic-pair windows for components `i ≤ k` at levels `1..=n`.
    Pairs {
        #[command(flatten)]
        src: SeqSource,
        #[arg(long)]
        k: usize,
        /// Only this component.
        #[arg(long)]
        i: Option<usize>,
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Enumerate depth-`depth` paths by the Vershik successor.
    Vershik {
        #[command(flatten)]
        src: OrderedSource,
        #[arg(long)]
        depth: usize,
        /// Only paths into this vertex of `V_depth`.
        #[arg(long)]
        vertex: Option<usize>,
    },
    /// Telescope a diagram along the given levels.
    Telescope {
        #[command(flatten)]
        src: DiagramSource,
        #[arg(long, value_delimiter = ',', required = true)]
        keep: Vec<usize>,
    },
}

#[derive(Debug, Subcommand)]
enum Construct {
    Pk {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        build: BuildArgs,
    },
    Pinf {
        #[command(flatten)]
        build: BuildArgs,
    },
    Toeplitz {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        build: BuildArgs,
    },
    Subexp {
        /// Built-in growth function (`pow2_sqrt`, `poly:<d>`).
        #[arg(long, default_value = "pow2_sqrt", conflicts_with = "g_csv")]
        g: String,
        /// CSV with columns `n,g_n`.
        #[arg(long)]
        g_csv: Option<PathBuf>,
        #[arg(long, default_value_t = 1)]
        levels: usize,
        #[arg(long, default_value_t = 64)]
        alpha_cap: u32,
        #[arg(long, default_value_t = 2)]
        tail: usize,
        /// Also write the level parameters here.
        #[arg(long)]
        spec_out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    src: DiagramSource,
    /// Use only the first `levels` matrices.
    #[arg(long)]
    levels: Option<usize>,
    /// Amplify the diagram first.
    #[arg(long)]
    amplify: bool,
    /// Also write the ordered diagram here.
    #[arg(long)]
    ordered_out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Check {
    Pk {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        src: SeqSource,
    },
    Pinf {
        #[command(flatten)]
        src: SeqSource,
    },
    Toeplitz {
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        src: OrderedSource,
    },
    Proper {
        #[command(flatten)]
        src: OrderedSource,
        #[arg(long)]
        depth: Option<usize>,
    },
    Intertwine {
        #[arg(long)]
        original: PathBuf,
        #[arg(long)]
        derived: PathBuf,
        #[arg(long)]
        certificate: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Analyze {
    Language {
        #[command(flatten)]
        src: SeqSource,
        #[arg(long)]
        m: usize,
        #[arg(long, default_value_t = 0)]
        level: usize,
    },
    Complexity {
        #[command(flatten)]
        src: SeqSource,
        #[arg(long)]
        m_max: usize,
        #[arg(long, default_value_t = 0)]
        level: usize,
        /// Also write `m,p,h` rows here.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Right-special words and the branches that persist.
    Asymptotic {
        #[command(flatten)]
        src: SeqSource,
        #[arg(long)]
        m_max: usize,
        #[arg(long)]
        delta: Option<usize>,
        #[arg(long, default_value_t = 0)]
        level: usize,
        /// Omit the per-length word lists.
        #[arg(long)]
        summary: bool,
    },
    Signals {
        #[command(flatten)]
        src: SeqSource,
        #[arg(long, conflicts_with = "pinf", required_unless_present = "pinf")]
        k: Option<usize>,
        #[arg(long)]
        pinf: bool,
        #[arg(long)]
        m_max: usize,
    },
}

#[derive(Debug, Args)]
struct SeqSource {
    /// Directive sequence JSON.
    input: Option<PathBuf>,
    #[arg(long, conflicts_with = "input")]
    seed_demo: Option<String>,
}

#[derive(Debug, Args)]
struct DiagramSource {
    #[arg(long)]
    diagram: Option<PathBuf>,
    #[arg(long, conflicts_with = "diagram")]
    seed_demo: Option<String>,
}

#[derive(Debug, Args)]
struct OrderedSource {
    /// Ordered diagram JSON.
    input: Option<PathBuf>,
    #[arg(long, conflicts_with = "input")]
    seed_demo: Option<String>,
}

/// Input or precondition problem; always exit code 2.
#[derive(Debug)]
struct Invalid(String);

impl<E: std::fmt::Display> From<E> for Invalid {
    fn from(e: E) -> Self {
        Invalid(e.to_string())
    }
}

struct Outcome {
    value: Value,
    text: Option<String>,
    csv: Option<String>,
    passed: bool,
}

impl Outcome {
    fn ok(value: Value) -> Self {
        Outcome {
            value,
            text: None,
            csv: None,
            passed: true,
        }
    }
}

fn to_value<T: Serialize>(v: &T) -> Result<Value, Invalid> {
    Ok(serde_json::to_value(v)?)
}

fn load<T: DeserializeOwned>(path: &Path) -> Result<T, Invalid> {
    let raw = fs::read_to_string(path).map_err(|e| Invalid(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&raw).map_err(|e| Invalid(format!("{}: {e}", path.display())))
}

fn save<T: Serialize>(path: &Path, v: &T) -> Result<(), Invalid> {
    let text = serde_json::to_string_pretty(&to_value(v)?)?;
    fs::write(path, text + "\n").map_err(|e| Invalid(format!("{}: {e}", path.display())))
}

fn demo(name: &str) -> Result<demos::Demo, Invalid> {
    demos::by_name(name).ok_or_else(|| {
        Invalid(format!(
            "unknown demo {name:?}; available: {}",
            demos::NAMES.join(", ")
        ))
    })
}

fn missing(what: &str) -> Invalid {
    Invalid(format!("no {what} given: pass a file or --seed-demo"))
}

impl SeqSource {
    fn resolve(&self) -> Result<DirectiveSequence, Invalid> {
        match (&self.input, &self.seed_demo) {
            (Some(p), _) => load(p),
            (None, Some(name)) => Ok(demo(name)?.sequence),
            (None, None) => Err(missing("directive sequence")),
        }
    }
}

impl DiagramSource {
    /// Demos provide their seed diagram.
    fn resolve(&self) -> Result<BratteliDiagram, Invalid> {
        match (&self.diagram, &self.seed_demo) {
            (Some(p), _) => load(p),
            (None, Some(name)) => demo(name)?
                .seed
                .ok_or_else(|| Invalid(format!("demo {name:?} has no diagram"))),
            (None, None) => Err(missing("diagram")),
        }
    }
}

impl OrderedSource {
    fn resolve(&self) -> Result<OrderedBratteliDiagram, Invalid> {
        match (&self.input, &self.seed_demo) {
            (Some(p), _) => load(p),
            (None, Some(name)) => demo(name)?
                .ordered
                .ok_or_else(|| Invalid(format!("demo {name:?} has no ordered diagram"))),
            (None, None) => Err(missing("ordered diagram")),
        }
    }
}

fn truncate(d: BratteliDiagram, levels: Option<usize>) -> Result<BratteliDiagram, Invalid> {
    match levels {
        None => Ok(d),
        Some(l) if l == 0 || l > d.depth() => {
            Err(Invalid(format!("--levels {l} outside 1..={}", d.depth())))
        }
        Some(l) => Ok(BratteliDiagram::from_matrices(d.matrices()[..l].to_vec())?),
    }
}

fn construct(cmd: &Construct) -> Result<Outcome, Invalid> {
    let (build, ordered) = match cmd {
        Construct::Subexp {
            g,
            g_csv,
            levels,
            alpha_cap,
            tail,
            spec_out,
        } => {
            let g = match g_csv {
                Some(p) => GFunction::from_csv(
                    fs::File::open(p).map_err(|e| Invalid(format!("{}: {e}", p.display())))?,
                )?,
                None => GFunction::builtin(g)?,
            };
            let (seq, spec) = build_subexp_family(&g, *levels, *alpha_cap, *tail)?;
            if let Some(p) = spec_out {
                save(p, &spec)?;
            }
            return Ok(Outcome::ok(to_value(&seq)?));
        }
        Construct::Pk { k, build } => {
            let d = prepare(build, *k)?;
            (build, assign_pk_ordering(&d, *k)?)
        }
        Construct::Pinf { build } => {
            let raw = truncate(build.src.resolve()?, build.levels)?;
            let k = raw.depth() + 1;
            let d = if build.amplify {
                amplify_diagram(&raw, k)?.0
            } else {
                raw
            };
            (build, assign_pinf_ordering(&d)?)
        }
        Construct::Toeplitz { k, build } => {
            if build.amplify {
                return Err(Invalid("--amplify does not keep row sums equal".into()));
            }
            let d = truncate(build.src.resolve()?, build.levels)?;
            (build, toeplitz_ordering(&d, *k)?)
        }
    };
    if let Some(p) = &build.ordered_out {
        save(p, &ordered)?;
    }
    Ok(Outcome::ok(to_value(&ordered.read_morphisms()?)?))
}

fn prepare(build: &BuildArgs, k: usize) -> Result<BratteliDiagram, Invalid> {
    let d = truncate(build.src.resolve()?, build.levels)?;
    Ok(if build.amplify {
        amplify_diagram(&d, k)?.0
    } else {
        d
    })
}

fn verdict(property: &str, passed: bool, body: Value) -> Outcome {
    let mut value = json!({ "property": property, "passed": passed });
    if let (Value::Object(map), Value::Object(extra)) = (&mut value, body) {
        map.extend(extra);
    }
    Outcome {
        text: Some(format!(
            "{property}: {}\n",
            if passed { "PASS" } else { "FAIL" }
        )),
        value,
        csv: None,
        passed,
    }
}

fn check(cmd: &Check) -> Result<Outcome, Invalid> {
    Ok(match cmd {
        Check::Pk { k, src } => match check_pk(&src.resolve()?, *k) {
            Ok(w) => verdict("pk", true, json!({ "witness": to_value(&w)? })),
            Err(f) => verdict(
                "pk",
                false,
                json!({ "failure": to_value(&f)?, "message": f.to_string() }),
            ),
        },
        Check::Pinf { src } => match check_pinf(&src.resolve()?) {
            Ok(w) => verdict("pinf", true, json!({ "witness": to_value(&w)? })),
            Err(f) => verdict(
                "pinf",
                false,
                json!({ "failure": to_value(&f)?, "message": f.to_string() }),
            ),
        },
        Check::Toeplitz { k, src } => {
            let ordered = src.resolve()?;
            let seq = ordered.read_morphisms()?;
            let report = check_toeplitz(&seq, ordered.diagram(), *k);
            let equal_sums = ordered.diagram().has_equal_row_sums();
            verdict(
                "toeplitz",
                report.passed() && equal_sums,
                json!({ "report": to_value(&report)?, "equal_row_sums": equal_sums }),
            )
        }
        Check::Proper { src, depth } => {
            let ordered = src.resolve()?;
            let depth = depth.unwrap_or(ordered.diagram().depth());
            verdict(
                "proper",
                ordered.check_proper_ordering(depth),
                json!({ "depth": depth }),
            )
        }
        Check::Intertwine {
            original,
            derived,
            certificate,
        } => {
            let original: BratteliDiagram = load(original)?;
            let derived: BratteliDiagram = load(derived)?;
            let cert: IntertwiningCertificate = load(certificate)?;
            let ok = check_intertwining(&original, &derived, &cert)?;
            verdict("intertwine", ok, json!({}))
        }
    })
}

fn analyze(cmd: &Analyze) -> Result<Outcome, Invalid> {
    Ok(match cmd {
        Analyze::Language { src, m, level } => {
            let set = language(&src.resolve()?, *m, *level)?;
            let mut text = String::new();
            for w in &set.words {
                writeln!(text, "{w}").expect("string write");
            }
            Outcome {
                text: Some(text),
                ..Outcome::ok(to_value(&set)?)
            }
        }
        Analyze::Complexity {
            src,
            m_max,
            level,
            csv,
        } => {
            let rows = complexity_table(&src.resolve()?, *m_max, *level)?;
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r)?;
            }
            let table = String::from_utf8(w.into_inner().map_err(|e| Invalid(e.to_string()))?)?;
            if let Some(p) = csv {
                fs::write(p, &table).map_err(|e| Invalid(format!("{}: {e}", p.display())))?;
            }
            let mut text = String::new();
            for r in &rows {
                writeln!(text, "{:>6} {:>10} {:.6}", r.m, r.p, r.h).expect("string write");
            }
            Outcome {
                text: Some(text),
                csv: Some(table),
                ..Outcome::ok(to_value(&rows)?)
            }
        }
        Analyze::Asymptotic {
            src,
            m_max,
            delta,
            level,
            summary,
        } => {
            let report = right_special_report(&src.resolve()?, *level, *m_max, *delta)?;
            let mut value = to_value(&report)?;
            if *summary {
                value.as_object_mut().expect("object").remove("lengths");
            }
            let mut text = format!(
                "stabilized branches: {} (lengths {}..={})\n",
                report.stabilized_branches,
                report.m_max - report.delta,
                report.m_max
            );
            for b in &report.stabilized {
                writeln!(text, "  {} -> {:?}", b.word, b.followers).expect("string write");
            }
            Outcome {
                text: Some(text),
                ..Outcome::ok(value)
            }
        }
        Analyze::Signals {
            src,
            k,
            pinf,
            m_max,
        } => {
            let mode = match (k, pinf) {
                (_, true) => AuditMode::Pinf,
                (Some(k), false) => AuditMode::Pk(*k),
                (None, false) => return Err(Invalid("pass --k or --pinf".into())),
            };
            let audit = signal_audit(&src.resolve()?, mode, *m_max)?;
            let mut text = format!(
                "audited {} words, {} counterexamples\n",
                audit.audited,
                audit.counterexamples.len()
            );
            for c in &audit.counterexamples {
                writeln!(text, "  level {} {}: {}", c.level, c.clause, c.detail)
                    .expect("string write");
            }
            Outcome {
                text: Some(text),
                passed: audit.passed(),
                ..Outcome::ok(to_value(&audit)?)
            }
        }
    })
}

/// Windows longer than this (both sides together) are reported by length only.
const WRITE_OUT_LIMIT: u128 = 1 << 16;

fn pairs(src: &SeqSource, k: usize, only: Option<usize>, n: usize) -> Result<Outcome, Invalid> {
    let t = src.resolve()?;
    let mut windows = Vec::new();
    let mut text = String::new();
    let mut passed = true;
    for i in only.map_or(1..=k, |i| i..=i) {
        let mut prev: Option<PairFrame> = None;
        for level in 1..=n {
            let f = pair_frame(&t, k, i, level)?;
            let (x_len, y_len) = (f.x_len(&t)?, f.y_len(&t)?);
            let splits = f.splits_at_zero(&t)?;
            let allowed = f.allowed(&t)?;
            let nests = match &prev {
                Some(p) => Some(p.nests_in(&f, &t)?),
                None => None,
            };
            passed &= splits && allowed && nests != Some(false);
            let mut v = json!({
                "i": i,
                "level": level,
                "alpha": f.alpha,
                "x_len": x_len.to_string(),
                "y_len": y_len.to_string(),
                "splits_at_zero": splits,
                "allowed": allowed,
                "nests_in_previous": nests,
            });
            if x_len + y_len <= WRITE_OUT_LIMIT {
                let w = f.materialize(&t)?;
                text.push_str(&w.render());
                let obj = v.as_object_mut().expect("object");
                obj.insert("x_window".into(), to_value(&w.x_window)?);
                obj.insert("y_window".into(), to_value(&w.y_window)?);
            } else {
                let _ = writeln!(
                    text,
                    "component {i} level {level} offset {}: |x| = {x_len}, |y| = {y_len}, not printed",
                    f.alpha
                );
            }
            let _ = writeln!(
                text,
                "  splits at 0: {splits}, allowed: {allowed}, nests: {}",
                nests.map_or("-".to_string(), |b| b.to_string())
            );
            windows.push(v);
            prev = Some(f);
        }
    }
    let mut out = verdict("pairs", passed, json!({ "windows": windows }));
    out.text = out.text.map(|head| head + &text);
    Ok(out)
}

fn vershik(src: &OrderedSource, depth: usize, vertex: Option<usize>) -> Result<Outcome, Invalid> {
    let ordered = src.resolve()?;
    let d = ordered.diagram();
    if depth == 0 || depth > d.depth() {
        return Err(Invalid(format!(
            "--depth {depth} outside 1..={}",
            d.depth()
        )));
    }
    let counts = d.path_counts(depth)?;
    let vertices: Vec<usize> = match vertex {
        Some(u) if u == 0 || u > d.level_size(depth) => {
            return Err(Invalid(format!("vertex {u} not in V_{depth}")))
        }
        Some(u) => vec![u],
        None => (1..=d.level_size(depth)).collect(),
    };
    let mut orbits = Vec::new();
    let mut complete = true;
    for u in vertices {
        let orbit = ordered.vershik_orbit(u, depth)?;
        let distinct: std::collections::BTreeSet<_> = orbit.iter().collect();
        let full = distinct.len() == orbit.len() && orbit.len() as u64 == counts[u - 1];
        complete &= full;
        orbits.push(json!({ "vertex": u, "paths": orbit.len(), "complete": full, "orbit": to_value(&orbit)? }));
    }
    Ok(Outcome {
        passed: complete,
        ..Outcome::ok(json!({ "depth": depth, "complete": complete, "vertices": orbits }))
    })
}

fn dispatch(cli: &Cli) -> Result<Outcome, Invalid> {
    match &cli.command {
        Command::Construct(c) => construct(c),
        Command::Amplify {
            k,
            src,
            certificate,
        } => {
            let (derived, cert) = amplify_diagram(&src.resolve()?, *k)?;
            if let Some(p) = certificate {
                save(p, &cert)?;
            }
            Ok(Outcome::ok(to_value(&derived)?))
        }
        Command::Check(c) => check(c),
        Command::Analyze(a) => analyze(a),
        Command::Pairs { src, k, i, n } => pairs(src, *k, *i, *n),
        Command::Vershik { src, depth, vertex } => vershik(src, *depth, *vertex),
        Command::Telescope { src, keep } => {
            Ok(Outcome::ok(to_value(&src.resolve()?.telescope(keep)?)?))
        }
    }
}

fn inputs<'a>(cli: &'a Cli) -> Vec<&'a Path> {
    let mut v: Vec<&'a Path> = Vec::new();
    let mut push = |p: &'a Option<PathBuf>| v.extend(p.as_deref());
    match &cli.command {
        Command::Construct(Construct::Pk { build, .. })
        | Command::Construct(Construct::Pinf { build })
        | Command::Construct(Construct::Toeplitz { build, .. }) => push(&build.src.diagram),
        Command::Construct(Construct::Subexp { g_csv, .. }) => push(g_csv),
        Command::Amplify { src, .. } | Command::Telescope { src, .. } => push(&src.diagram),
        Command::Check(Check::Pk { src, .. }) | Command::Check(Check::Pinf { src }) => {
            push(&src.input)
        }
        Command::Check(Check::Toeplitz { src, .. }) | Command::Check(Check::Proper { src, .. }) => {
            push(&src.input)
        }
        Command::Check(Check::Intertwine {
            original,
            derived,
            certificate,
        }) => {
            return vec![original.as_path(), derived.as_path(), certificate.as_path()];
        }
        Command::Analyze(
            Analyze::Language { src, .. }
            | Analyze::Complexity { src, .. }
            | Analyze::Asymptotic { src, .. }
            | Analyze::Signals { src, .. },
        )
        | Command::Pairs { src, .. } => push(&src.input),
        Command::Vershik { src, .. } => push(&src.input),
    }
    v
}

fn render(cli: &Cli, outcome: &Outcome) -> Result<String, Invalid> {
    Ok(match cli.format {
        Format::Json => serde_json::to_string_pretty(&outcome.value)? + "\n",
        Format::Text => match &outcome.text {
            Some(t) => t.clone(),
            None => serde_json::to_string_pretty(&outcome.value)? + "\n",
        },
        Format::Csv => outcome
            .csv
            .clone()
            .ok_or_else(|| Invalid("CSV output is only available for analyze complexity".into()))?,
    })
}

/// Runs the command line and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    if let Some(out) = &cli.out {
        if inputs(&cli).contains(&out.as_path()) {
            let _ = writeln!(stderr, "error: --out {} is also an input", out.display());
            return 2;
        }
    }
    let result = dispatch(&cli).and_then(|o| Ok((render(&cli, &o)?, o.passed)));
    match result {
        Ok((report, passed)) => {
            let written = match &cli.out {
                Some(p) => fs::write(p, &report).map_err(|e| format!("{}: {e}", p.display())),
                None => stdout
                    .write_all(report.as_bytes())
                    .map_err(|e| e.to_string()),
            };
            if let Err(e) = written {
                let _ = writeln!(stderr, "error: {e}");
                return 2;
            }
            if passed {
                0
            } else {
                1
            }
        }
        Err(Invalid(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            2
        }
    }
}
