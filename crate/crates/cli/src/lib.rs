//! The `domino` command: builds domino 2-graphs, reproduces necklace tables
//! and blue cycle counts, runs verification suites and reports K-theory.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 resource
//! limit exceeded.

pub mod config;

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use domino_core::crossed::{self, IsoStatus};
use domino_core::domino::{self, BasicData, DominoGraph};
use domino_core::graphalg::{self, DirectedGraph, Exponent};
use domino_core::twograph::{self, PathOrder};
use domino_core::{cstar, words, Error, Limits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Limit(String),
    #[error("{0}")]
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Limit(_) => EXIT_LIMIT,
            CliError::Failure(_) => EXIT_FAILURE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::LimitExceeded { .. } | Error::DegreeOutOfRange(..) => CliError::Limit(e.to_string()),
            Error::Internal(_) => CliError::Failure(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "domino", version, about = "Build and verify domino 2-graphs Λ(n,q,t)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Stamp output with the generation time (text on stdout, otherwise stderr).
    #[arg(long, global = true)]
    pub timestamps: bool,
    /// Limits file with `key = value` lines.
    #[arg(long, global = true, env = "DOMINO_CONFIG")]
    pub config: Option<PathBuf>,
    /// Largest vertex count q^(n-1) to materialize.
    #[arg(long, global = true, env = "DOMINO_MAX_VERTICES")]
    pub max_vertices: Option<u64>,
    /// Largest number of items an exhaustive scan may visit.
    #[arg(long, global = true, env = "DOMINO_WORK_LIMIT")]
    pub work_limit: Option<u64>,
    /// Largest degree "m1,m2" for exhaustive path enumeration.
    #[arg(long, global = true, env = "DOMINO_MAX_PATH_DEGREE", value_parser = config::parse_degree)]
    pub max_path_degree: Option<(u32, u32)>,
    /// Largest degree "m1,m2" for path counting.
    #[arg(long, global = true, env = "DOMINO_MAX_COUNT_DEGREE", value_parser = config::parse_degree)]
    pub max_count_degree: Option<(u32, u32)>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct DataArgs {
    /// Domino length.
    #[arg(short = 'n', long)]
    pub n: usize,
    /// Alphabet size.
    #[arg(short = 'q', long)]
    pub q: u32,
    /// Trace.
    #[arg(short = 't', long)]
    pub t: u32,
}

impl DataArgs {
    fn data(&self) -> Result<BasicData, CliError> {
        Ok(BasicData::new(self.n, self.q, self.t)?)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Axioms,
    Iso,
    Paths,
    All,
}

/// Fault injection for the axioms suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Tamper {
    /// Drop the first commuting square.
    Delete,
    /// Exchange the red-blue sides of the first two squares.
    Swap,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Export the skeleton: blue and red edges, and commuting squares.
    Build {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// List necklaces with period and Lyndon subword, per trace.
    Table {
        #[arg(short = 'n', long)]
        n: usize,
        #[arg(short = 'q', long)]
        q: u32,
        /// "all" or a comma-separated list of traces.
        #[arg(long, default_value = "all")]
        traces: String,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Blue cycle counts by length, from the formula and from walking σ.
    Cycles {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run verification suites.
    Verify {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Largest degree "m1,m2" for the paths suite.
        #[arg(long, default_value = "2,2", value_parser = config::parse_degree)]
        max_degree: (u32, u32),
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        #[arg(long, value_enum, hide = true)]
        tamper_square: Option<Tamper>,
    },
    /// K-theory and structure of the graph algebra.
    Ktheory {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Connectivity analytics for a directed graph given as "src dst" lines.
    Graph {
        file: PathBuf,
        /// strongly-connected, period, diameter, exponent or n-connected=N.
        /// Repeatable; defaults to all but n-connected.
        #[arg(long = "check")]
        checks: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
}

/// Rendered command output.
struct Output {
    format: Format,
    body: String,
    code: i32,
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli) {
        Ok(output) => {
            if cli.timestamps {
                let secs = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                let stamp = format!("# generated at unix time {secs}\n");
                let _ = if output.format == Format::Text { out.write_all(stamp.as_bytes()) } else { err.write_all(stamp.as_bytes()) };
            }
            let _ = out.write_all(output.body.as_bytes());
            output.code
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: &Cli) -> Result<Output, CliError> {
    let overrides = config::LimitOverrides {
        max_vertices: cli.max_vertices,
        work_limit: cli.work_limit,
        max_path_degree: cli.max_path_degree,
        max_count_degree: cli.max_count_degree,
    };
    let limits = config::resolve(cli.config.as_deref(), &overrides)?;
    match &cli.command {
        Command::Build { data, format } => cmd_build(&data.data()?, *format, &limits),
        Command::Table { n, q, traces, format } => cmd_table(*n, *q, traces, *format, &limits),
        Command::Cycles { data, format } => cmd_cycles(&data.data()?, *format, &limits),
        Command::Verify { data, suite, max_degree, format, tamper_square } => {
            cmd_verify(&data.data()?, *suite, *max_degree, *format, *tamper_square, &limits)
        }
        Command::Ktheory { data, format } => cmd_ktheory(&data.data()?, *format),
        Command::Graph { file, checks, format } => cmd_graph(file, checks, *format),
    }
}

fn allow(format: Format, allowed: &[Format], command: &str) -> Result<(), CliError> {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(CliError::Usage(format!("{command} does not support --format {format:?}").to_lowercase()))
    }
}

fn ok(format: Format, body: String) -> Result<Output, CliError> {
    Ok(Output { format, body, code: EXIT_OK })
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output serializes");
    s.push('\n');
    s
}

/// Left-aligned columns separated by two spaces, without trailing blanks.
fn columns(rows: &[Vec<String>], indent: &str) -> String {
    let cols = rows.iter().map(Vec::len).max().unwrap_or(0);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().filter_map(|r| r.get(c)).map(|s| s.chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in rows {
        let mut line = String::from(indent);
        for (c, cell) in row.iter().enumerate() {
            if c + 1 < row.len() {
                let _ = write!(line, "{cell:<w$}  ", w = widths[c]);
            } else {
                line.push_str(cell);
            }
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Failure(format!("csv: {e}"));
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Failure(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Failure(e.to_string()))
}

fn cmd_build(data: &BasicData, format: Format, limits: &Limits) -> Result<Output, CliError> {
    allow(format, &[Format::Text, Format::Json, Format::Dot], "build")?;
    let graph = DominoGraph::build(*data, limits)?;
    let sk = graph.skeleton();
    let body = match format {
        Format::Dot => twograph::to_dot(sk, &format!("domino_{}_{}_{}", data.n, data.q, data.t)),
        Format::Json => {
            let mut s = twograph::to_json(sk);
            s.push('\n');
            s
        }
        _ => format!(
            "Λ{data}\nvertices: {}\nblue edges: {}\nred edges: {}\nsquares: {}\n",
            sk.vertex_count(),
            sk.blue_edges().len(),
            sk.red_edges().len(),
            sk.squares().len()
        ),
    };
    ok(format, body)
}

fn parse_traces(list: &str, q: u32) -> Result<Vec<u32>, CliError> {
    if list == "all" {
        return Ok((0..q).collect());
    }
    list.split(',')
        .map(|s| {
            let t = s.trim().parse::<u32>().map_err(|e| CliError::Usage(format!("trace {s:?}: {e}")))?;
            if t >= q {
                return Err(CliError::Usage(format!("trace {t} is not a residue mod {q}")));
            }
            Ok(t)
        })
        .collect()
}

fn cmd_table(n: usize, q: u32, traces: &str, format: Format, limits: &Limits) -> Result<Output, CliError> {
    allow(format, &[Format::Text, Format::Json, Format::Csv], "table")?;
    BasicData::new(n, q, 0)?;
    let traces = parse_traces(traces, q)?;
    words::trace_class_size(n, q).filter(|&s| s <= limits.work_limit).ok_or_else(|| {
        CliError::Limit(format!("{q}^{} words per trace exceeds the work limit {}", n - 1, limits.work_limit))
    })?;
    let mut sections = Vec::new();
    for &t in &traces {
        sections.push((t, words::enumerate_necklaces(n, q, t)?));
    }
    let body = match format {
        Format::Json => to_json(&json!({
            "n": n,
            "q": q,
            "traces": sections.iter().map(|(t, ns)| json!({"trace": t, "necklaces": ns})).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let rows: Vec<Vec<String>> = sections
                .iter()
                .flat_map(|(t, ns)| {
                    ns.iter().map(move |nk| {
                        vec![t.to_string(), nk.to_string(), nk.period.to_string(), nk.lyndon_subword.to_string()]
                    })
                })
                .collect();
            csv_string(&["trace", "necklace", "period", "lyndon_subword"], &rows)?
        }
        _ => {
            let mut s = format!("necklaces of length {n} over Z/{q}\n");
            for (t, ns) in &sections {
                let _ = writeln!(s, "\ntrace {t}: {} necklaces", ns.len());
                let mut rows = vec![vec!["necklace".to_string(), "period".into(), "lyndon subword".into()]];
                rows.extend(
                    ns.iter()
                        .map(|nk| vec![nk.to_string(), nk.period.to_string(), nk.lyndon_subword.to_string()]),
                );
                s.push_str(&columns(&rows, "  "));
            }
            s
        }
    };
    ok(format, body)
}

fn cmd_cycles(data: &BasicData, format: Format, limits: &Limits) -> Result<Output, CliError> {
    allow(format, &[Format::Text, Format::Json, Format::Csv], "cycles")?;
    let formula = domino::blue_cycle_counts(data);
    let walked = domino::blue_cycle_counts_by_orbits(data, limits.work_limit)?;
    let rows: Vec<(usize, String, u64)> = formula
        .iter()
        .map(|(&d, h)| (d, h.to_string(), walked.get(&d).copied().unwrap_or(0)))
        .collect();
    let matched = rows.iter().all(|(_, f, w)| *f == w.to_string()) && walked.keys().all(|d| formula.contains_key(d));
    let verdict = if matched { "MATCH" } else { "MISMATCH" };
    let body = match format {
        Format::Json => to_json(&json!({
            "data": data,
            "cycles": rows.iter().map(|(d, f, w)| json!({"d": d, "formula": f, "orbit_walk": w})).collect::<Vec<_>>(),
            "match": matched,
        })),
        Format::Csv => csv_string(
            &["d", "formula", "orbit_walk"],
            &rows.iter().map(|(d, f, w)| vec![d.to_string(), f.clone(), w.to_string()]).collect::<Vec<_>>(),
        )?,
        _ => {
            let mut table = vec![vec!["d".to_string(), "formula".into(), "orbit walk".into()]];
            table.extend(rows.iter().map(|(d, f, w)| vec![d.to_string(), f.clone(), w.to_string()]));
            format!("blue cycles of Λ{data}\n{}{verdict}\n", columns(&table, ""))
        }
    };
    Ok(Output { format, body, code: if matched { EXIT_OK } else { EXIT_FAILURE } })
}

#[derive(Debug, Serialize)]
struct PathSuite {
    max_degree: (u32, u32),
    factorisation: domino::FactorisationReport,
    /// `(degree, vertex)` where the two counting orders disagree.
    count_mismatches: Vec<((u32, u32), u32)>,
}

impl PathSuite {
    fn is_ok(&self) -> bool {
        self.factorisation.is_ok() && self.count_mismatches.is_empty()
    }
}

fn path_suite(data: &BasicData, graph: &DominoGraph, max_degree: (u32, u32), limits: &Limits) -> Result<PathSuite, CliError> {
    let factorisation = domino::check_unique_factorisation(data, max_degree, limits)?;
    let sk = graph.skeleton();
    let mut count_mismatches = Vec::new();
    for m1 in 0..=max_degree.0 {
        for m2 in 0..=max_degree.1 {
            for v in 0..sk.vertex_count() as u32 {
                let a = twograph::count_paths(sk, (m1, m2), v, PathOrder::BlueFirst, limits.max_count_degree)?;
                let b = twograph::count_paths(sk, (m1, m2), v, PathOrder::RedFirst, limits.max_count_degree)?;
                if a != b {
                    count_mismatches.push(((m1, m2), v));
                }
            }
        }
    }
    Ok(PathSuite { max_degree, factorisation, count_mismatches })
}

fn cmd_verify(
    data: &BasicData,
    suite: Suite,
    max_degree: (u32, u32),
    format: Format,
    tamper: Option<Tamper>,
    limits: &Limits,
) -> Result<Output, CliError> {
    allow(format, &[Format::Text, Format::Json], "verify")?;
    let graph = DominoGraph::build(*data, limits)?;
    let run = |s: Suite| suite == s || suite == Suite::All;
    let mut text = format!("verify Λ{data}\n");
    let mut json = serde_json::Map::new();
    json.insert("data".into(), json!(data));
    let mut all_ok = true;

    if run(Suite::Axioms) {
        let report = match tamper {
            None => twograph::check_axioms(graph.skeleton()),
            Some(mode) => {
                let mut sk = graph.skeleton().clone();
                let squares = sk.squares_mut();
                match mode {
                    Tamper::Delete => {
                        if !squares.is_empty() {
                            squares.remove(0);
                        }
                    }
                    Tamper::Swap => {
                        if squares.len() >= 2 {
                            let first = squares[0].red_blue;
                            squares[0].red_blue = squares[1].red_blue;
                            squares[1].red_blue = first;
                        }
                    }
                }
                sk.resort();
                twograph::check_axioms(&sk)
            }
        };
        all_ok &= report.is_ok();
        if report.is_ok() {
            let _ = writeln!(
                text,
                "axioms: PASS ({} vertices, {} blue edges, {} red edges, {} squares)",
                report.vertices, report.blue_edges, report.red_edges, report.squares
            );
        } else {
            let _ = writeln!(text, "axioms: FAIL ({} violations)", report.violation_count);
            for v in &report.violations {
                let _ = writeln!(text, "  - {v}");
            }
        }
        json.insert("axioms".into(), json!(report));
    }

    if run(Suite::Iso) {
        if data.is_degenerate() {
            let note = format!("degenerate case, iso suite skipped: Λ{data} is a product graph and σ is trivial");
            let _ = writeln!(text, "iso: NOTE: {note}");
            json.insert("iso".into(), json!({"status": IsoStatus::Skipped, "note": note}));
        } else {
            let report = crossed::verify_iso_graph(&graph)?;
            all_ok &= report.is_ok();
            let verdict = if report.is_ok() { "PASS" } else { "FAIL" };
            let _ = writeln!(
                text,
                "iso: {verdict} (automorphism valid: {}, order {}; crossed product axioms: {}; isomorphism: {})",
                report.automorphism_valid, report.automorphism_order, report.crossed_axioms_ok, report.isomorphism
            );
            json.insert("iso".into(), json!(report));
        }
    }

    if run(Suite::Paths) {
        let report = path_suite(data, &graph, max_degree, limits)?;
        all_ok &= report.is_ok();
        if report.is_ok() {
            let _ = writeln!(
                text,
                "paths: PASS ({} paths, {} factorisations up to degree {:?}; path counts agree in both orders)",
                report.factorisation.paths, report.factorisation.factorisations, max_degree
            );
        } else {
            let _ = writeln!(
                text,
                "paths: FAIL ({} factorisation failures, {} count mismatches)",
                report.factorisation.failure_count,
                report.count_mismatches.len()
            );
            for f in &report.factorisation.failures {
                let _ = writeln!(text, "  - {}", f.replace('\n', " "));
            }
        }
        json.insert("paths".into(), json!(report));
    }

    json.insert("ok".into(), json!(all_ok));
    let body = match format {
        Format::Json => to_json(&json),
        _ => text,
    };
    Ok(Output { format, body, code: if all_ok { EXIT_OK } else { EXIT_FAILURE } })
}

fn cmd_ktheory(data: &BasicData, format: Format) -> Result<Output, CliError> {
    allow(format, &[Format::Text, Format::Json], "ktheory")?;
    let report = cstar::structure_report(data);
    let body = match format {
        Format::Json => {
            let mut s = report.to_json();
            s.push('\n');
            s
        }
        _ => report.to_string(),
    };
    ok(format, body)
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Check {
    StronglyConnected,
    Period,
    Diameter,
    Exponent,
    NConnected(u64),
}

fn parse_check(s: &str) -> Result<Check, CliError> {
    Ok(match s {
        "strongly-connected" => Check::StronglyConnected,
        "period" => Check::Period,
        "diameter" => Check::Diameter,
        "exponent" => Check::Exponent,
        other => match other.strip_prefix("n-connected=") {
            Some(n) => Check::NConnected(n.parse().map_err(|e| CliError::Usage(format!("n-connected={n}: {e}")))?),
            None => return Err(CliError::Usage(format!("unknown check {other:?}"))),
        },
    })
}

fn cmd_graph(file: &std::path::Path, checks: &[String], format: Format) -> Result<Output, CliError> {
    allow(format, &[Format::Text, Format::Json], "graph")?;
    let text = std::fs::read_to_string(file).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", file.display())))?;
    let g = DirectedGraph::parse_edge_list(&text)?;
    let checks = if checks.is_empty() {
        vec![Check::StronglyConnected, Check::Period, Check::Diameter, Check::Exponent]
    } else {
        checks.iter().map(|c| parse_check(c)).collect::<Result<Vec<_>, _>>()?
    };
    let edges: u64 = g.multiplicity().map_or(0, |m| m.iter().flatten().sum());
    let mut lines = vec![format!("vertices: {}", g.vertex_count()), format!("edges: {edges}")];
    let mut json = serde_json::Map::new();
    json.insert("vertices".into(), json!(g.vertex_count()));
    json.insert("edges".into(), json!(edges));
    for check in checks {
        match check {
            Check::StronglyConnected => {
                let v = graphalg::is_strongly_connected(&g);
                lines.push(format!("strongly connected: {v}"));
                json.insert("strongly_connected".into(), json!(v));
            }
            Check::Period => {
                let v = graphalg::graph_period(&g).ok();
                lines.push(format!("period: {}", v.map_or("undefined".to_string(), |p| p.to_string())));
                json.insert("period".into(), json!(v));
            }
            Check::Diameter => {
                let v = graphalg::diameter(&g);
                lines.push(format!("diameter: {}", v.map_or("undefined".to_string(), |d| d.to_string())));
                json.insert("diameter".into(), json!(v));
            }
            Check::Exponent => {
                let e = graphalg::min_connectivity_exponent(&g, graphalg::default_exponent_cap(&g))?;
                lines.push(match e {
                    Exponent::Found { n, bound } => format!("exponent: {n} (search bound {bound})"),
                    Exponent::NotConnectable => "exponent: none".to_string(),
                    Exponent::CapExceeded { bound, cap } => format!("exponent: not found below cap {cap} (bound {bound})"),
                });
                json.insert("exponent".into(), json!(e));
            }
            Check::NConnected(n) => {
                let v = graphalg::is_n_connected(&g, n);
                lines.push(format!("{n}-connected: {v}"));
                json.insert(format!("{n}_connected"), json!(v));
            }
        }
    }
    let body = match format {
        Format::Json => to_json(&json),
        _ => lines.join("\n") + "\n",
    };
    ok(format, body)
}
