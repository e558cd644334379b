//! `trophil`: tropical Hilbert functions, entropy and recurrence graphs from
//! the command line.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tropical_hilbert::analysis::{
    audit_bounds, default_s_max, entropy_graph, profile_both, profile_oracle, quasilinearity, HilbertProfile,
};
use tropical_hilbert::graph::{build_with_limit, to_dot, to_json, EdgeKind, RecurrenceGraph, DEFAULT_MAX_VERTICES};
use tropical_hilbert::oracle::{enumerate_cells, fekete_entropy_estimate, is_experimental, DEFAULT_BUDGET};
use tropical_hilbert::verify::{run_all, VerifyConfig};
use tropical_hilbert::{is_regular, newton_polygon, single_bounded_edge, CoefficientVector, Error, Rat};

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_MISMATCH: u8 = 4;
const EXIT_OTHER: u8 = 5;

#[derive(Parser, Debug)]
#[command(name = "trophil", version, about = "Tropical Hilbert functions and entropy")]
struct Cli {
    /// Node budget for the oracle search and vertex limit for the graph.
    /// TROP_BUDGET overrides it.
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Seed for the sampling checks of `verify`.
    #[arg(long, global = true, default_value_t = 0x7a0c)]
    seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of d(s) with entropy, period and audits.
    Hilbert {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        s_max: Option<usize>,
        #[arg(long, value_enum, default_value_t = MethodArg::Graph)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Exact entropy H.
    Entropy {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = MethodArg::Graph)]
        method: MethodArg,
        /// Table length for the oracle bracket.
        #[arg(long, default_value_t = 10)]
        s_max: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The graph of recurrent sequences.
    Graph {
        #[arg(long)]
        vector: String,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
    },
    /// Newton polygon, regularity and the single-edge flag.
    Newton {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Every non-empty cell of D(s) found by the oracle.
    Cells {
        #[arg(long)]
        vector: String,
        #[arg(long)]
        s: usize,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Runs the acceptance corpus and prints the pass/fail matrix.
    Verify {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct Input {
    /// Comma-separated coefficients, `inf` for an absent monomial.
    #[arg(long)]
    vector: Option<String>,
    /// File with one vector per line; blank lines and `#` comments skipped.
    #[arg(long)]
    vectors: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum MethodArg {
    Oracle,
    Graph,
    Both,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Debug)]
enum Failure {
    Lib(Error),
    Usage(String),
    Io(String),
    /// Output was produced but a check failed.
    Check,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Parse(_) | Error::TooFewFinite(_)) | Failure::Usage(_) => EXIT_PARSE,
            Failure::Lib(Error::BudgetExceeded { .. }) => EXIT_BUDGET,
            Failure::Lib(Error::Unsupported(_)) => EXIT_MISMATCH,
            Failure::Lib(Error::Disagreement(_)) | Failure::Check => EXIT_CHECK_FAILED,
            Failure::Lib(_) | Failure::Io(_) => EXIT_OTHER,
        }
    }
}

type Out = std::result::Result<String, (String, Failure)>;

struct Budget {
    oracle: u64,
    vertices: usize,
}

impl Budget {
    fn resolve(flag: Option<u64>) -> std::result::Result<Self, Failure> {
        let env = match std::env::var("TROP_BUDGET") {
            Ok(v) => Some(
                v.trim()
                    .parse::<u64>()
                    .map_err(|_| Failure::Usage(format!("TROP_BUDGET is not a number: `{v}`")))?,
            ),
            Err(_) => None,
        };
        Ok(match env.or(flag) {
            Some(b) => Budget {
                oracle: b,
                vertices: usize::try_from(b).unwrap_or(usize::MAX),
            },
            None => Budget {
                oracle: DEFAULT_BUDGET,
                vertices: DEFAULT_MAX_VERTICES,
            },
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_OTHER);
        }
    }
    match run(&cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err((text, failure)) => {
            print!("{text}");
            match &failure {
                Failure::Lib(e) => eprintln!("error: {e}"),
                Failure::Usage(m) | Failure::Io(m) => eprintln!("error: {m}"),
                Failure::Check => eprintln!("error: a check failed"),
            }
            ExitCode::from(failure.code())
        }
    }
}

fn run(cli: &Cli) -> Out {
    let budget = Budget::resolve(cli.budget).map_err(|f| (String::new(), f))?;
    match &cli.command {
        Command::Hilbert {
            input,
            s_max,
            method,
            format,
        } => per_vector(input, *format, |a| hilbert(a, *s_max, *method, *format, &budget)),
        Command::Entropy {
            input,
            method,
            s_max,
            format,
        } => per_vector(input, *format, |a| entropy(a, *method, *s_max, *format, &budget)),
        Command::Newton { input, format } => per_vector(input, *format, |a| newton(a, *format)),
        Command::Graph { vector, format } => {
            let a = parse_vector(vector).map_err(|f| (String::new(), f))?;
            graph(&a, *format, &budget).map_err(|f| (String::new(), f))
        }
        Command::Cells { vector, s, format } => {
            let a = parse_vector(vector).map_err(|f| (String::new(), f))?;
            cells(&a, *s, *format, &budget).map_err(|f| (String::new(), f))
        }
        Command::Verify { format } => verify(cli.seed, *format, &budget),
    }
}

fn parse_vector(text: &str) -> std::result::Result<CoefficientVector, Failure> {
    Ok(CoefficientVector::parse(text.trim())?)
}

fn read_vectors(input: &Input) -> std::result::Result<Vec<CoefficientVector>, Failure> {
    if let Some(v) = &input.vector {
        return Ok(vec![parse_vector(v)?]);
    }
    let path = input.vectors.as_ref().expect("clap enforces one input");
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    let vectors = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .map(parse_vector)
        .collect::<std::result::Result<Vec<_>, _>>()?;
    if vectors.is_empty() {
        return Err(Failure::Usage(format!("{} holds no vectors", path.display())));
    }
    Ok(vectors)
}

/// Result of one command on one vector: its JSON value, its rendering in a
/// line-based format and whether every check passed.
struct Item {
    json: Value,
    lines: String,
    ok: bool,
}

/// Runs `f` on every input vector. JSON output is a single object for one
/// vector and an array for a file; CSV gains a leading `vector` column for
/// files.
fn per_vector(input: &Input, format: Format, f: impl Fn(&CoefficientVector) -> std::result::Result<Item, Failure>) -> Out {
    let vectors = read_vectors(input).map_err(|e| (String::new(), e))?;
    let from_file = input.vectors.is_some();
    let mut items = Vec::new();
    let mut error = None;
    for a in &vectors {
        match f(a) {
            Ok(item) => items.push((a, item)),
            Err(e) => {
                error = Some(e);
                break;
            }
        }
    }
    let ok = items.iter().all(|(_, i)| i.ok);
    let text = match format {
        Format::Json => {
            let v = if from_file {
                Value::Array(items.iter().map(|(_, i)| i.json.clone()).collect())
            } else {
                items.first().map_or(Value::Null, |(_, i)| i.json.clone())
            };
            if items.is_empty() {
                String::new()
            } else {
                render_json(&v)
            }
        }
        Format::Csv if from_file => {
            let mut out = String::new();
            for (k, (a, item)) in items.iter().enumerate() {
                let mut lines = item.lines.lines();
                let header = lines.next().unwrap_or("");
                if k == 0 {
                    writeln!(out, "vector,{header}").unwrap();
                }
                for l in lines {
                    writeln!(out, "\"{a}\",{l}").unwrap();
                }
            }
            out
        }
        _ => items.iter().map(|(_, i)| i.lines.as_str()).collect::<Vec<_>>().join("\n"),
    };
    match error {
        Some(e) => Err((text, e)),
        None if !ok => Err((text, Failure::Check)),
        None => Ok(text),
    }
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn unsupported_format(cmd: &str, format: Format, allowed: &str) -> Failure {
    Failure::Usage(format!("{cmd} does not support --format {format:?}; use {allowed}").to_lowercase())
}

fn graph_for(a: &CoefficientVector, budget: &Budget) -> std::result::Result<RecurrenceGraph, Failure> {
    build_with_limit(a, budget.vertices).map_err(|e| match e {
        Error::Unsupported(m) => Failure::Lib(Error::Unsupported(format!("{m}; try --method oracle"))),
        e => Failure::Lib(e),
    })
}

fn hilbert(a: &CoefficientVector, s_max: Option<usize>, method: MethodArg, format: Format, budget: &Budget) -> std::result::Result<Item, Failure> {
    if format == Format::Dot {
        return Err(unsupported_format("hilbert", format, "json, csv or text"));
    }
    let n = a.degree();
    let check_s = |s: usize| {
        if s < n + 1 {
            Err(Failure::Usage(format!("--s-max must be at least n+1 = {}", n + 1)))
        } else {
            Ok(s)
        }
    };
    let mut profile: HilbertProfile = match method {
        MethodArg::Oracle => profile_oracle(a, check_s(s_max.unwrap_or(10))?, budget.oracle)?,
        MethodArg::Graph | MethodArg::Both => {
            let g = graph_for(a, budget)?;
            let s = check_s(s_max.unwrap_or_else(|| default_s_max(&g)))?;
            let mut p = if method == MethodArg::Both {
                profile_both(&g, s, s, budget.oracle)?
            } else {
                quasilinearity(&g, s)
            };
            p.audits = Some(audit_bounds(&p, &g));
            p
        }
    };
    if is_experimental(a) {
        profile.audits = None;
    }
    let ok = profile.audits.as_ref().is_none_or(|r| r.passed());
    let json = profile.to_json();
    let lines = match format {
        Format::Csv => hilbert_csv(&profile, method),
        _ => hilbert_text(&profile),
    };
    Ok(Item { json, lines, ok })
}

fn residual(p: &HilbertProfile, s: usize) -> Option<Rat> {
    let h = p.entropy?;
    Some(Rat::from_integer(p.d(s)? as i64) - h * Rat::from_integer(s as i64))
}

fn hilbert_csv(p: &HilbertProfile, method: MethodArg) -> String {
    let mut out = String::from("s,d_oracle,d_graph,r(s)\n");
    let opt = |v: Option<String>| v.unwrap_or_default();
    for s in 1..=p.s_max() {
        let (oracle, graph) = match method {
            MethodArg::Oracle => (p.d(s), None),
            MethodArg::Graph => (None, p.d(s)),
            MethodArg::Both => (p.oracle_samples.get(s - 1).copied(), p.d(s)),
        };
        writeln!(
            out,
            "{s},{},{},{}",
            opt(oracle.map(|d| d.to_string())),
            opt(graph.map(|d| d.to_string())),
            opt(residual(p, s).map(|r| r.to_string()))
        )
        .unwrap();
    }
    out
}

fn hilbert_text(p: &HilbertProfile) -> String {
    let mut out = format!("vector ({})\n", p.vector);
    if let (Some(v), Some(e)) = (p.vertex_count, p.edge_count) {
        writeln!(out, "graph V={v} E={e}").unwrap();
    }
    if let Some(h) = p.entropy {
        writeln!(out, "H = {h}").unwrap();
    }
    match (p.period, p.regularity_index) {
        (Some(r), Some(s0)) => writeln!(out, "period {r} from s = {s0}").unwrap(),
        _ if p.entropy.is_some() => writeln!(out, "no period found within the table").unwrap(),
        _ => {}
    }
    writeln!(out, "s\td(s)\tprojective").unwrap();
    for (i, d) in p.samples.iter().enumerate() {
        writeln!(out, "{}\t{d}\t{}", i + 1, d.saturating_sub(1)).unwrap();
    }
    if let Some(audits) = &p.audits {
        for c in &audits.checks {
            let status = if c.passed { "ok" } else { "FAILED" };
            write!(out, "audit {} {status}", c.name).unwrap();
            if let Some(d) = &c.detail {
                write!(out, ": {d}").unwrap();
            }
            out.push('\n');
        }
    }
    out
}

fn entropy(a: &CoefficientVector, method: MethodArg, s_max: usize, format: Format, budget: &Budget) -> std::result::Result<Item, Failure> {
    if !matches!(format, Format::Json | Format::Text) {
        return Err(unsupported_format("entropy", format, "json or text"));
    }
    let mut json = json!({ "vector": a.to_string(), "method": method_name(method) });
    let mut text = String::new();
    let mut ok = true;
    let mut exact = None;
    if method != MethodArg::Oracle {
        let g = graph_for(a, budget)?;
        let h = entropy_graph(&g);
        exact = Some(h);
        json["H"] = json!(h.to_string());
        json["V"] = json!(g.vertex_count());
        json["E"] = json!(g.edge_count());
        writeln!(text, "{h}").unwrap();
    }
    if method != MethodArg::Graph {
        if s_max < a.degree() + 1 {
            return Err(Failure::Usage(format!("--s-max must be at least n+1 = {}", a.degree() + 1)));
        }
        let b = fekete_entropy_estimate(a, s_max, budget.oracle)?;
        json["sMax"] = json!(s_max);
        json["oracleBracket"] = json!([b.lower.to_string(), b.upper.to_string()]);
        match exact {
            // the upper end is a proven bound, the lower end is only empirical
            Some(h) => {
                ok = h <= b.upper;
                json["withinUpperBound"] = json!(ok);
                json["inBracket"] = json!(b.contains(h));
            }
            None if b.lower == b.upper => {
                json["H"] = json!(b.upper.to_string());
                writeln!(text, "{}", b.upper).unwrap();
            }
            None => {}
        }
        writeln!(text, "oracle bracket [{}, {}] from s <= {s_max}", b.lower, b.upper).unwrap();
    }
    Ok(Item {
        json,
        lines: text,
        ok,
    })
}

fn method_name(m: MethodArg) -> &'static str {
    match m {
        MethodArg::Oracle => "ORACLE",
        MethodArg::Graph => "GRAPH",
        MethodArg::Both => "BOTH",
    }
}

fn newton(a: &CoefficientVector, format: Format) -> std::result::Result<Item, Failure> {
    if !matches!(format, Format::Json | Format::Text) {
        return Err(unsupported_format("newton", format, "json or text"));
    }
    let poly = newton_polygon(a);
    let regular = is_regular(a);
    let single = single_bounded_edge(a);
    let vertices: Vec<String> = poly.vertices().iter().map(|(i, v)| format!("({i},{v})")).collect();
    Ok(Item {
        json: json!({
            "vector": a.to_string(),
            "vertices": poly.vertices(),
            "regular": regular,
            "singleBoundedEdge": single,
        }),
        lines: format!(
            "vector ({a})\nvertices {}\nregular {regular}\nsingle bounded edge {single}\n",
            vertices.join(" ")
        ),
        ok: true,
    })
}

fn graph(a: &CoefficientVector, format: Format, budget: &Budget) -> std::result::Result<String, Failure> {
    let g = graph_for(a, budget)?;
    Ok(match format {
        Format::Dot => to_dot(&g),
        Format::Json => render_json(&to_json(&g)),
        Format::Text => format!(
            "vector ({a})\nV={} E={} rigid={} augmenting={}\n",
            g.vertex_count(),
            g.edge_count(),
            g.count_by_kind(EdgeKind::Rigid),
            g.count_by_kind(EdgeKind::Augmenting)
        ),
        Format::Csv => return Err(unsupported_format("graph", format, "dot, json or text")),
    })
}

fn cells(a: &CoefficientVector, s: usize, format: Format, budget: &Budget) -> std::result::Result<String, Failure> {
    let cells = enumerate_cells(a, s, budget.oracle)?;
    Ok(match format {
        Format::Json => {
            let list: Vec<Value> = cells
                .iter()
                .map(|c| {
                    json!({
                        "pattern": c.pattern.windows,
                        "dimension": c.dimension,
                        "witness": c.witness,
                    })
                })
                .collect();
            render_json(&Value::Array(list))
        }
        Format::Text => {
            let mut out = String::new();
            for c in &cells {
                writeln!(out, "{:?}\tdim {}\twitness {}", c.pattern.windows, c.dimension, c.witness).unwrap();
            }
            out
        }
        _ => return Err(unsupported_format("cells", format, "json or text")),
    })
}

fn verify(seed: u64, format: Format, budget: &Budget) -> Out {
    let cfg = VerifyConfig {
        seed,
        budget: budget.oracle,
        ..VerifyConfig::default()
    };
    let reports = run_all(&cfg);
    let ok = reports.iter().all(|r| r.passed);
    let text = match format {
        Format::Json => render_json(&serde_json::to_value(&reports).expect("reports serialize")),
        Format::Text => {
            let mut out = String::new();
            for r in &reports {
                writeln!(out, "{r}").unwrap();
                for d in r.details.iter().skip(1) {
                    writeln!(out, "    {d}").unwrap();
                }
            }
            let passed = reports.iter().filter(|r| r.passed).count();
            writeln!(out, "{passed}/{} criteria passed", reports.len()).unwrap();
            out
        }
        _ => return Err((String::new(), unsupported_format("verify", format, "json or text"))),
    };
    if ok {
        Ok(text)
    } else {
        Err((text, Failure::Check))
    }
}
