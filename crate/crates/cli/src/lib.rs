//! The `frieze` command line. [`run`] parses arguments, executes one verb and
//! returns the process exit code:
//!
//! * 0: the checked property holds
//! * 1: it fails (a witness is printed)
//! * 2: usage or parse error
//! * 3: budget exhausted, result inconclusive

use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use slk_frieze::arith::format_rational;
use slk_frieze::classify::{dual, dual_band_has_zero, has_period, locate_dual_offset, PeriodInfo};
use slk_frieze::document::{
    to_canonical_string, xi_from_str, xi_to_value, DocumentError, FriezeDocument, GraphDocument,
};
use slk_frieze::enumerate::{enumerate_tame_positive, Algorithm, Convention, EnumerateError, EnumerationConfig};
use slk_frieze::unbounded;
use slk_frieze::wild::{
    analyze, build_subgraph, continue_row, fibonacci_word, induced_subgraph, loop_walk, prune_dead_ends, walk_frieze,
    AnalysisCaps, Constraint, Continuation, GammaSubgraph, GammaVertex, Limits,
};
use slk_frieze::xi::{extract_xi, reconstruct, XiError};
use slk_frieze::{classify, fixtures, verify_slk, Array, FriezePattern, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "frieze", version, about = "Exact computations with SL_k frieze patterns")]
struct Cli {
    /// Print the report as canonical JSON.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check every adjacent k×k determinant.
    Verify { file: PathBuf },
    /// Report SL_k validity, integrality, positivity, period, genericity and tameness.
    Classify { file: PathBuf },
    /// Extract the ξ-sequence of a tame frieze, or rebuild a frieze from a ξ document.
    Xi {
        file: PathBuf,
        /// Also rebuild the frieze and compare it with the input.
        #[arg(long)]
        reconstruct: bool,
    },
    /// Locate the dual frieze as a transposed translate.
    Dual { file: PathBuf },
    /// Continue the last k−1 rows downward with integer entries in 0..=bound.
    Extend {
        file: PathBuf,
        #[arg(long)]
        steps: usize,
        #[arg(long)]
        bound: u64,
        /// List every continuation instead of the first.
        #[arg(long)]
        all: bool,
        #[arg(long, default_value_t = 10_000)]
        max_results: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build part of the successor graph from seed vertices.
    Graph {
        /// A graph or frieze document, or `builtin:A12`.
        #[arg(long)]
        seed: String,
        #[arg(long)]
        bound: u64,
        #[arg(long, default_value_t = 10_000)]
        max_vertices: usize,
        #[arg(long)]
        max_depth: Option<usize>,
        /// Only test edges among the seeds.
        #[arg(long)]
        induced: bool,
        #[arg(long)]
        prune: bool,
        #[arg(long)]
        analyze: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Stack the vertices of a walk driven by a binary word over two loops.
    Walk {
        #[arg(long)]
        graph: PathBuf,
        /// `fibonacci:LEN`, `repeat:BITS:LEN` or a literal word of 0s and 1s.
        #[arg(long)]
        word: String,
        /// Two loops as vertex indices of the graph document, `a,b,c;a,d,e`.
        #[arg(long)]
        loops: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate and check segments of the unbounded SL_3 frieze.
    Unbounded {
        /// `LO..HI`, both inclusive.
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
    /// Count tame integral positive friezes.
    Enumerate {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, value_delimiter = ',', default_value = "8,16,32")]
        bound_schedule: Vec<u64>,
        /// Seconds.
        #[arg(long, default_value_t = 60)]
        budget: u64,
        #[arg(long, default_value = "pattern-equality")]
        convention: Convention,
        #[arg(long, default_value = "xi-search")]
        algorithm: Algorithm,
    },
}

/// Errors that end a command with exit code 2.
#[derive(Debug)]
struct UsageError(String);

impl<E: std::fmt::Display> From<E> for UsageError
where
    E: std::error::Error,
{
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> UsageError {
    UsageError(msg.into())
}

struct Report {
    code: i32,
    text: String,
    json: Value,
}

impl Report {
    fn new(code: i32, text: String, json: Value) -> Self {
        Report { code, text, json }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(r) => {
            let body = if cli.json { to_canonical_string(&r.json) } else { r.text };
            let _ = out.write_all(body.as_bytes());
            r.code
        }
        Err(UsageError(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
    }
}

fn dispatch(cmd: Command) -> Result<Report, UsageError> {
    match cmd {
        Command::Verify { file } => cmd_verify(&file),
        Command::Classify { file } => cmd_classify(&file),
        Command::Xi { file, reconstruct } => cmd_xi(&file, reconstruct),
        Command::Dual { file } => cmd_dual(&file),
        Command::Extend { file, steps, bound, all, max_results, out } => {
            cmd_extend(&file, steps, bound, all, max_results, out.as_deref())
        }
        Command::Graph { seed, bound, max_vertices, max_depth, induced, prune, analyze, out } => {
            let limits = Limits { max_vertices, max_depth: max_depth.unwrap_or(usize::MAX) };
            cmd_graph(&seed, bound, limits, induced, prune, analyze, out.as_deref())
        }
        Command::Walk { graph, word, loops, out } => cmd_walk(&graph, &word, loops.as_deref(), &out),
        Command::Unbounded { range, emit } => cmd_unbounded(&range, emit.as_deref()),
        Command::Enumerate { k, n, bound_schedule, budget, convention, algorithm } => {
            let cfg = EnumerationConfig {
                convention,
                algorithm,
                bound_schedule,
                budget: Duration::from_secs(budget),
                ..EnumerationConfig::new(k, n)
            };
            cmd_enumerate(&cfg)
        }
    }
}

fn read(path: &Path) -> Result<String, UsageError> {
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn doc_error(path: &Path, e: DocumentError) -> UsageError {
    usage(format!("{}: {e}", path.display()))
}

fn load_frieze(path: &Path) -> Result<FriezePattern, UsageError> {
    FriezeDocument::parse(&read(path)?).map(|d| d.pattern).map_err(|e| doc_error(path, e))
}

fn write_file(path: &Path, text: &str) -> Result<(), UsageError> {
    std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn cmd_verify(path: &Path) -> Result<Report, UsageError> {
    let f = load_frieze(path)?;
    let r = verify_slk(&f, None)?;
    let mut text = format!(
        "SL_{} frieze, height {}, rows {}..{}: {} windows checked\n",
        f.k(),
        f.n(),
        r.rows.0,
        r.rows.1,
        r.windows_checked
    );
    for (p, v) in r.failures.iter().take(10) {
        let _ = writeln!(text, "determinant at {p} is {}", format_rational(v));
    }
    text.push_str(if r.passed() { "ok\n" } else { "FAILED\n" });
    let failures: Vec<Value> =
        r.failures.iter().map(|(p, v)| json!({"i": p.i, "j": p.j, "determinant": format_rational(v)})).collect();
    let json = json!({
        "command": "verify",
        "passed": r.passed(),
        "windows_checked": r.windows_checked,
        "failures": failures,
    });
    Ok(Report::new(if r.passed() { EXIT_OK } else { EXIT_FAIL }, text, json))
}

fn cmd_classify(path: &Path) -> Result<Report, UsageError> {
    let f = load_frieze(path)?;
    let r = classify(&f)?;
    let period = match r.period {
        PeriodInfo::Found(m) => json!(m),
        PeriodInfo::NoneUpTo(_) => Value::Null,
    };
    let witnesses: Vec<Value> = r
        .witnesses
        .iter()
        .map(|w| {
            json!({
                "property": w.property.name(),
                "i": w.position.i,
                "j": w.position.j,
                "size": w.size,
                "value": format_rational(&w.value),
            })
        })
        .collect();
    let json = json!({
        "command": "classify",
        "slk": r.is_slk,
        "integral": r.integral,
        "nonzero": r.nonzero,
        "positive": r.positive,
        "period": period,
        "generic": r.generic,
        "tame": r.tame,
        "wild": r.wild,
        "witnesses": witnesses,
    });
    Ok(Report::new(if r.is_slk { EXIT_OK } else { EXIT_FAIL }, r.to_string(), json))
}

fn same_array(a: &FriezePattern, b: &FriezePattern) -> bool {
    let rows = a.stored_rows().len().max(b.stored_rows().len()) as i64;
    let p = a.glide_period();
    a.k() == b.k()
        && a.n() == b.n()
        && (1..=rows).all(|i| (i - 1..i - 1 + p).all(|j| a.at(i, j).ok() == b.at(i, j).ok()))
}

fn cmd_xi(path: &Path, rebuild: bool) -> Result<Report, UsageError> {
    let text = read(path)?;
    let is_xi = serde_json::from_str::<Value>(&text).ok().is_some_and(|v| v.get("tuples").is_some());
    if is_xi {
        let s = xi_from_str(&text).map_err(|e| doc_error(path, e))?;
        return Ok(match reconstruct(&s) {
            Ok(f) => {
                let doc = FriezeDocument::new(f);
                let json = json!({"command": "xi", "closes": true, "frieze": doc.to_value()});
                Report::new(EXIT_OK, format!("{}", doc.pattern), json)
            }
            Err(XiError::NonClosing { i, j, value }) => {
                let msg = format!("sequence does not close: entry ({i},{j}) is {}\n", format_rational(&value));
                let json = json!({"command": "xi", "closes": false, "i": i, "j": j, "value": format_rational(&value)});
                Report::new(EXIT_FAIL, msg, json)
            }
            Err(e) => return Err(e.into()),
        });
    }
    let f = FriezeDocument::parse(&text).map_err(|e| doc_error(path, e))?.pattern;
    let s = match extract_xi(&f) {
        Ok(s) => s,
        Err(XiError::WildInput { j, i, other }) => {
            let msg = format!("transfer matrix B_{j} differs between rows {i} and {other}: the frieze is wild\n");
            let json = json!({"command": "xi", "tame": false, "j": j, "i": i, "other": other});
            return Ok(Report::new(EXIT_FAIL, msg, json));
        }
        Err(e) => return Err(e.into()),
    };
    let mut text = String::new();
    for (j, t) in s.tuples().iter().enumerate() {
        let cells: Vec<String> = t.iter().map(format_rational).collect();
        let _ = writeln!(text, "c({}) = ({})", j + 1, cells.join(", "));
    }
    let mut json = json!({"command": "xi", "tame": true, "sequence": xi_to_value(&s)});
    let mut code = EXIT_OK;
    if rebuild {
        let back = reconstruct(&s)?;
        let same = same_array(&back, &f);
        let _ = writeln!(text, "reconstruction {}", if same { "matches" } else { "DIFFERS" });
        json["round_trip"] = json!(same);
        if !same {
            code = EXIT_FAIL;
        }
    }
    Ok(Report::new(code, text, json))
}

fn cmd_dual(path: &Path) -> Result<Report, UsageError> {
    let f = load_frieze(path)?;
    let d = dual(&f)?;
    let offset = locate_dual_offset(&f)?;
    let zero = dual_band_has_zero(&f)?;
    let mut text = String::new();
    for (i, j0, vals) in &d.rows {
        let cells: Vec<String> = vals.iter().map(format_rational).collect();
        let _ = writeln!(text, "row {i} from column {j0}: {}", cells.join(" "));
    }
    match offset {
        Some((s, t)) => {
            let _ = writeln!(text, "dual entry (i,j) equals a(j{t:+}, i{s:+})");
        }
        None => text.push_str("no transposed translate found\n"),
    }
    let _ = writeln!(text, "dual band has a zero: {zero}");
    let json = json!({
        "command": "dual",
        "offset": offset.map(|(s, t)| json!([s, t])),
        "band_has_zero": zero,
    });
    Ok(Report::new(if offset.is_some() { EXIT_OK } else { EXIT_FAIL }, text, json))
}

fn in_range(row: &[Rational], bound: u64) -> bool {
    let hi = Rational::from_integer(bound.into());
    row.iter().all(|v| v.is_integer() && *v >= Rational::from_integer(0.into()) && *v <= hi)
}

enum Step {
    Rows(Vec<Vec<Rational>>),
    Stuck(String),
}

fn next_rows(k: usize, n: usize, tail: &[Vec<Rational>], bound: u64) -> Result<Step, UsageError> {
    let hi = i64::try_from(bound).map_err(|_| usage("bound too large"))?;
    Ok(match continue_row(k, n, tail, Constraint::IntegerRange { lo: 0, hi })? {
        Continuation::Unique(r) if in_range(&r, bound) => Step::Rows(vec![r]),
        Continuation::Unique(r) => {
            let cells: Vec<String> = r.iter().map(format_rational).collect();
            Step::Stuck(format!("forced row ({}) leaves 0..={bound}", cells.join(", ")))
        }
        Continuation::Free { solutions, .. } if !solutions.is_empty() => Step::Rows(solutions),
        Continuation::Free { free_positions, .. } => {
            Step::Stuck(format!("no continuation in 0..={bound} (free positions {free_positions:?})"))
        }
        Continuation::Inconsistent(p) => Step::Stuck(format!("window at {p} cannot have determinant 1")),
    })
}

fn cmd_extend(
    path: &Path,
    steps: usize,
    bound: u64,
    all: bool,
    max_results: usize,
    out: Option<&Path>,
) -> Result<Report, UsageError> {
    let f = load_frieze(path)?;
    let (k, n) = (f.k(), f.n());
    let (lo, hi) = f.row_span();
    let base: Vec<Vec<Rational>> = (lo..=hi).map(|i| f.band(i).map(<[Rational]>::to_vec)).collect::<Result<_, _>>()?;
    if base.len() < k - 1 {
        return Err(usage(format!("need at least {} rows to continue", k - 1)));
    }
    let mut done: Vec<Vec<Vec<Rational>>> = Vec::new();
    let mut stuck: Option<String> = None;
    let mut stack = vec![base.clone()];
    let mut truncated = false;
    while let Some(rows) = stack.pop() {
        if rows.len() == base.len() + steps {
            done.push(rows);
            if !all || done.len() >= max_results {
                truncated = all && !stack.is_empty();
                break;
            }
            continue;
        }
        match next_rows(k, n, &rows[rows.len() + 1 - k..], bound)? {
            Step::Rows(next) => {
                let take = if all { next.len() } else { 1 };
                for r in next.into_iter().take(take).rev() {
                    let mut grown = rows.clone();
                    grown.push(r);
                    stack.push(grown);
                }
            }
            Step::Stuck(msg) => {
                if stuck.is_none() {
                    stuck = Some(format!("after {} new rows: {msg}", rows.len() - base.len()));
                }
            }
        }
    }
    let docs: Vec<FriezeDocument> = done
        .iter()
        .map(|rows| FriezePattern::window_mode(k, n, lo, rows.clone()).map(FriezeDocument::new))
        .collect::<Result<_, _>>()?;
    let mut text = String::new();
    for d in &docs {
        let _ = writeln!(text, "{}", d.pattern);
    }
    let _ = writeln!(text, "{} continuation(s) of {steps} rows", docs.len());
    if let Some(msg) = &stuck {
        let _ = writeln!(text, "{msg}");
    }
    if truncated {
        let _ = writeln!(text, "stopped after {max_results} continuations");
    }
    if let Some(path) = out {
        let body: String = docs.iter().map(FriezeDocument::serialize).collect();
        write_file(path, &body)?;
    }
    let json = json!({
        "command": "extend",
        "continuations": docs.iter().map(FriezeDocument::to_value).collect::<Vec<_>>(),
        "stuck": stuck,
        "truncated": truncated,
    });
    let code = if truncated {
        EXIT_INCONCLUSIVE
    } else if docs.is_empty() {
        EXIT_FAIL
    } else {
        EXIT_OK
    };
    Ok(Report::new(code, text, json))
}

fn seeds(spec: &str) -> Result<(usize, usize, Vec<GammaVertex>), UsageError> {
    if spec == "builtin:A12" {
        return Ok((3, 5, fixtures::a_pieces()));
    }
    let path = Path::new(spec);
    let text = read(path)?;
    if let Ok(g) = GraphDocument::parse(&text) {
        return Ok((g.k, g.n, g.graph.vertices.into_iter().collect()));
    }
    let f = FriezeDocument::parse(&text).map_err(|e| doc_error(path, e))?.pattern;
    let (k, n) = (f.k(), f.n());
    let (lo, hi) = f.row_span();
    let mut out = Vec::new();
    for i in lo..=hi + 2 - k as i64 {
        let rows = (i..i + k as i64 - 1)
            .map(|r| {
                f.band(r)?
                    .iter()
                    .map(|v| {
                        v.is_integer()
                            .then(|| v.to_integer().try_into().ok())
                            .flatten()
                            .ok_or_else(|| usage("seed rows must be nonnegative integers"))
                    })
                    .collect::<Result<Vec<u64>, _>>()
            })
            .collect::<Result<Vec<_>, UsageError>>()?;
        out.push(GammaVertex::new(k, n, rows)?);
    }
    Ok((k, n, out))
}

fn cmd_graph(
    seed: &str,
    bound: u64,
    limits: Limits,
    induced: bool,
    prune: bool,
    do_analyze: bool,
    out: Option<&Path>,
) -> Result<Report, UsageError> {
    let (k, n, seeds) = seeds(seed)?;
    let mut g = if induced { induced_subgraph(&seeds, bound) } else { build_subgraph(&seeds, bound, limits) };
    if prune {
        g = prune_dead_ends(&g);
    }
    let doc = GraphDocument { k, n, bound, graph: g };
    let g = &doc.graph;
    let mut text = format!(
        "{} vertices, {} edges, {} unexpanded{}\n",
        g.vertices.len(),
        g.edge_count(),
        g.frontier.len(),
        if g.budget_exhausted { ", vertex or depth limit reached" } else { "" }
    );
    let mut json = json!({"command": "graph", "graph": doc.to_value()});
    let mut complete = !g.budget_exhausted;
    if do_analyze {
        let a = analyze(g, AnalysisCaps::default());
        complete &= a.complete;
        let idx = |c: &[GammaVertex]| -> Vec<usize> { c.iter().filter_map(|v| g.index_of(v)).collect() };
        let cycles: Vec<Vec<usize>> = a.cycles.iter().map(|c| idx(c)).collect();
        let _ = writeln!(text, "{} simple cycles", cycles.len());
        for c in cycles.iter().take(20) {
            let _ = writeln!(text, "  cycle {c:?}");
        }
        let _ = writeln!(text, "longest simple path: {} vertices", a.longest_path.len());
        json["cycles"] = json!(cycles);
        json["longest_path"] = json!(idx(&a.longest_path));
        json["analysis_complete"] = json!(a.complete);
    }
    if let Some(path) = out {
        write_file(path, &doc.serialize())?;
    }
    Ok(Report::new(if complete { EXIT_OK } else { EXIT_INCONCLUSIVE }, text, json))
}

fn parse_word(spec: &str) -> Result<Vec<bool>, UsageError> {
    let bits = |s: &str| -> Result<Vec<bool>, UsageError> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(usage(format!("word letters must be 0 or 1, got {c:?}"))),
            })
            .collect()
    };
    let len = |s: &str| s.parse::<usize>().map_err(|_| usage(format!("bad word length {s:?}")));
    let parts: Vec<&str> = spec.split(':').collect();
    let w = match parts.as_slice() {
        ["fibonacci", l] => fibonacci_word(len(l)?),
        ["repeat", b, l] => {
            let b = bits(b)?;
            if b.is_empty() {
                return Err(usage("empty repeat pattern"));
            }
            b.iter().copied().cycle().take(len(l)?).collect()
        }
        [literal] => bits(literal)?,
        _ => return Err(usage(format!("unrecognized word {spec:?}"))),
    };
    if w.is_empty() {
        return Err(usage("empty word"));
    }
    Ok(w)
}

/// Two cycles through a common vertex, both rotated to start there.
fn default_loops(g: &GammaSubgraph) -> Option<[Vec<GammaVertex>; 2]> {
    let cycles = analyze(g, AnalysisCaps::default()).cycles;
    let mut best: Option<(usize, [Vec<GammaVertex>; 2])> = None;
    for (a, ca) in cycles.iter().enumerate() {
        for cb in &cycles[a + 1..] {
            let Some(v) = ca.iter().find(|v| cb.contains(v)) else { continue };
            let rot = |c: &Vec<GammaVertex>| {
                let at = c.iter().position(|u| u == v).expect("shared");
                let mut r = c.clone();
                r.rotate_left(at);
                r
            };
            let size = ca.len() + cb.len();
            if best.as_ref().is_none_or(|(s, _)| size < *s) {
                best = Some((size, [rot(ca), rot(cb)]));
            }
        }
    }
    best.map(|(_, l)| l)
}

fn parse_loops(g: &GammaSubgraph, spec: &str) -> Result<[Vec<GammaVertex>; 2], UsageError> {
    let loops: Vec<Vec<GammaVertex>> = spec
        .split(';')
        .map(|part| {
            part.split(',')
                .map(|x| {
                    x.trim()
                        .parse::<usize>()
                        .ok()
                        .and_then(|i| g.vertex(i).cloned())
                        .ok_or_else(|| usage(format!("bad vertex index {x:?}")))
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    <[Vec<GammaVertex>; 2]>::try_from(loops).map_err(|_| usage("--loops needs exactly two loops"))
}

fn cmd_walk(graph: &Path, word: &str, loops: Option<&str>, out: &Path) -> Result<Report, UsageError> {
    let doc = GraphDocument::parse(&read(graph)?).map_err(|e| doc_error(graph, e))?;
    let g = &doc.graph;
    let word = parse_word(word)?;
    let loops = match loops {
        Some(spec) => parse_loops(g, spec)?,
        None => default_loops(g).ok_or_else(|| usage("the graph has no two cycles through a common vertex"))?,
    };
    let walk = loop_walk([&loops[0], &loops[1]], &word)?;
    let f = walk_frieze(g, &walk)?;
    let r = verify_slk(&f, None)?;
    let rows = f.stored_rows().len();
    let horizon = 1000.min(rows / 2);
    let period = (1..=horizon).find(|&d| has_period(&f, d));
    write_file(out, &FriezeDocument::new(f).serialize())?;
    let text = format!(
        "{rows} rows written to {}\n{} windows checked, {}\n{}\n",
        out.display(),
        r.windows_checked,
        if r.passed() { "all determinants 1" } else { "SL_k FAILED" },
        match period {
            Some(d) => format!("vertical period {d}"),
            None => format!("no vertical period <= {horizon}"),
        }
    );
    let json = json!({
        "command": "walk",
        "rows": rows,
        "slk": r.passed(),
        "windows_checked": r.windows_checked,
        "period": period,
        "period_horizon": horizon,
    });
    Ok(Report::new(if r.passed() { EXIT_OK } else { EXIT_FAIL }, text, json))
}

fn parse_range(spec: &str) -> Result<(i64, i64), UsageError> {
    let (a, b) = spec.split_once("..").ok_or_else(|| usage(format!("range {spec:?} is not LO..HI")))?;
    let parse = |s: &str| s.trim().parse::<i64>().map_err(|_| usage(format!("bad range bound {s:?}")));
    let (lo, hi) = (parse(a)?, parse(b)?);
    if lo > hi {
        return Err(usage("empty range"));
    }
    Ok((lo, hi))
}

fn cmd_unbounded(range: &str, emit: Option<&Path>) -> Result<Report, UsageError> {
    let (lo, hi) = parse_range(range)?;
    let rep = unbounded::verify_concatenation(lo, hi)?;
    let mut text = String::new();
    let mut printed = Vec::new();
    for ell in lo..=hi {
        let seg = unbounded::segment(ell)?;
        if let Some(p) = unbounded::printed_segment(ell) {
            printed.push(json!({"l": ell, "matches": seg == p}));
            let _ = writeln!(
                text,
                "segment {ell} {} the printed segment",
                if seg == p { "matches" } else { "DIFFERS from" }
            );
        }
        if let Some(dir) = emit {
            let rows = seg.into_iter().map(|r| r.into_iter().map(Rational::from_integer).collect()).collect();
            let f = FriezePattern::window_mode(unbounded::K, unbounded::N, 12 * ell + 1, rows)?;
            std::fs::create_dir_all(dir).map_err(|e| usage(format!("{}: {e}", dir.display())))?;
            write_file(&dir.join(format!("segment_{ell}.frieze")), &FriezeDocument::new(f).serialize())?;
        }
    }
    for (ell, m) in &rep.max_entries {
        let _ = writeln!(text, "segment {ell}: largest entry {m}");
    }
    let _ = writeln!(
        text,
        "rows {}..{}: {} windows checked, {} failing; integral {}, positive {}",
        12 * lo + 1,
        12 * hi + 12,
        rep.slk.windows_checked,
        rep.slk.failures.len(),
        rep.integral,
        rep.positive
    );
    let printed_ok = printed.iter().all(|p| p["matches"] == json!(true));
    let json = json!({
        "command": "unbounded",
        "lo": lo,
        "hi": hi,
        "slk": rep.slk.passed(),
        "windows_checked": rep.slk.windows_checked,
        "integral": rep.integral,
        "positive": rep.positive,
        "max_entries": rep.max_entries.iter().map(|(l, m)| json!({"l": l, "max": m.to_string()})).collect::<Vec<_>>(),
        "printed": printed,
    });
    Ok(Report::new(if rep.passed() && printed_ok { EXIT_OK } else { EXIT_FAIL }, text, json))
}

fn cmd_enumerate(cfg: &EnumerationConfig) -> Result<Report, UsageError> {
    let (r, exhausted) = match enumerate_tame_positive(cfg) {
        Ok(r) => (r, false),
        Err(EnumerateError::BudgetExhausted(r)) => (*r, true),
        Err(e) => return Err(e.into()),
    };
    let json = json!({
        "command": "enumerate",
        "k": r.k,
        "n": r.n,
        "convention": r.convention.name(),
        "algorithm": r.algorithm.name(),
        "bound_schedule": r.bound_schedule,
        "count_per_bound": r.count_per_bound,
        "stabilized": r.stabilized,
        "count": r.count(),
        "budget_exhausted": exhausted || r.budget_exhausted,
        "nodes": r.nodes,
    });
    let code = if r.stabilized && !exhausted && !r.budget_exhausted { EXIT_OK } else { EXIT_INCONCLUSIVE };
    Ok(Report::new(code, r.to_string(), json))
}
