//! `locdim`: construct, compute and verify local resolving sets from the command line.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success (certificate clean, set resolves, batch clean) |
//! | 1 | `verify`: the set does not resolve the graph |
//! | 2 | bad input: parse error, unknown name, contract violation, bad vertex list |
//! | 3 | certificate needed repair or broke the bound; construction invariant failed |
//! | 4 | a resource cap was exceeded (exact search cap, packing node budget) |

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use locdim::batch::{run_batch, BatchConfig};
use locdim::generators::labeled_graphs;
use locdim::oracle::{bounds_for, is_local_resolving, local_metric_dimension_with, Verdict};
use locdim::par::with_jobs;
use locdim::{
    construct, friendship_graph, named_graph, random_k4_free, random_triangle_free, ConstructOptions, Error, Execution,
    Graph, VertexSet,
};

#[derive(Parser)]
#[command(name = "locdim", version, about = "Certified local resolving sets for K4-free graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a certificate W with |W| <= floor(n/2) and print it as JSON
    Construct {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        construct: ConstructFlags,
        /// Include the division layers and the step-by-step trace
        #[arg(long, env = "LOCDIM_TRACE")]
        trace: bool,
    },
    /// Exact local metric dimension with a minimum witness and the known bounds
    Exact {
        #[command(flatten)]
        input: Input,
        #[arg(long, env = "LOCDIM_EXACT_CAP", default_value_t = 16)]
        exact_cap: usize,
        #[arg(long, env = "LOCDIM_JOBS")]
        jobs: Option<usize>,
    },
    /// Check whether a vertex set is local resolving
    Verify {
        #[command(flatten)]
        input: Input,
        /// Comma-separated vertex list, e.g. `0,2`
        #[arg(long = "set", short = 'w', value_name = "VERTICES", allow_hyphen_values = true)]
        set: String,
    },
    /// Scan a graph6 stream, one JSON line per graph plus a summary line
    Batch {
        /// graph6 file, one graph per line (`-` for stdin)
        #[arg(long)]
        file: PathBuf,
        /// Write the JSON lines here and print only the summary
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, env = "LOCDIM_EXACT_CAP", default_value_t = 16)]
        exact_cap: usize,
        #[arg(long, env = "LOCDIM_JOBS")]
        jobs: Option<usize>,
        #[command(flatten)]
        construct: ConstructFlags,
    },
    /// Emit graph6 lines for named, friendship, random or enumerated graphs
    Gen {
        /// `friendship:k`, `random:n:p`, `random-tf:n:p`, `labeled:n` (all connected K4-free), or any named graph
        #[arg(long)]
        name: String,
        #[arg(long, env = "LOCDIM_SEED", default_value_t = 0)]
        seed: u64,
        /// Number of random graphs (seeds `seed`, `seed+1`, ...)
        #[arg(long, default_value_t = 1)]
        count: u64,
    },
}

#[derive(Args)]
struct Input {
    #[command(flatten)]
    source: Source,
    /// Seed for `random:` names
    #[arg(long, env = "LOCDIM_SEED", default_value_t = 0)]
    seed: u64,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// Named graph: C5, K3,3, petersen, friendship:3, random:10:0.4, ...
    #[arg(long)]
    name: Option<String>,
    /// graph6 string
    #[arg(long, allow_hyphen_values = true)]
    g6: Option<String>,
    /// File whose first non-empty line is a graph6 string
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructFlags {
    /// Literal reading of the twelfth process and no fallbacks
    #[arg(long, env = "LOCDIM_STRICT")]
    strict: bool,
    #[arg(long, env = "LOCDIM_NODE_CAP", default_value_t = 10_000_000)]
    node_cap: u64,
}

impl ConstructFlags {
    fn options(&self) -> ConstructOptions {
        ConstructOptions { strict: self.strict, node_budget: self.node_cap }
    }
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OracleCap { .. } | Error::PackingBudget { .. } => 4,
            Error::ConstructionInvariant { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn input_failure(message: String) -> Failure {
    Failure { code: 2, message }
}

fn random_graph(spec: &str, seed: u64, triangle_free: bool) -> Result<Graph, Error> {
    let bad = || Error::InvalidParameter(format!("expected n:p, got `{spec}`"));
    let (n, p) = spec.split_once(':').ok_or_else(bad)?;
    let n = n.parse().map_err(|_| bad())?;
    let p = p.parse().map_err(|_| bad())?;
    if triangle_free {
        random_triangle_free(n, p, seed)
    } else {
        random_k4_free(n, p, seed)
    }
}

fn graph_by_name(name: &str, seed: u64) -> Result<Graph, Error> {
    if let Some(spec) = name.strip_prefix("random-tf:") {
        random_graph(spec, seed, true)
    } else if let Some(spec) = name.strip_prefix("random:") {
        random_graph(spec, seed, false)
    } else {
        named_graph(name)
    }
}

impl Input {
    fn load(&self) -> Result<Graph, Failure> {
        let src = &self.source;
        if let Some(name) = &src.name {
            return Ok(graph_by_name(name, self.seed)?);
        }
        if let Some(text) = &src.g6 {
            return Ok(Graph::from_graph6(text)?);
        }
        let path = src.file.as_ref().expect("clap enforces one input");
        let text = fs::read_to_string(path).map_err(|e| input_failure(format!("{}: {e}", path.display())))?;
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty())
            .ok_or_else(|| input_failure(format!("{}: no graph6 line", path.display())))?;
        Ok(Graph::from_graph6(line)?)
    }
}

fn jobs_or_default(jobs: Option<usize>) -> usize {
    jobs.unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn cmd_construct(input: &Input, flags: &ConstructFlags, trace: bool) -> Result<u8, Failure> {
    let g = input.load()?;
    let built = construct(&g, &flags.options())?;
    let cert = &built.certificate;
    let mut out = serde_json::to_value(cert).expect("certificate serialises");
    if trace {
        out["division"] = serde_json::to_value(&built.division.layers).expect("division serialises");
        out["facts"] = serde_json::to_value(&built.facts).expect("facts serialise");
    } else if let Some(obj) = out.as_object_mut() {
        obj.remove("trace");
    }
    println!("{out}");
    Ok(if cert.is_clean() { 0 } else { 3 })
}

fn cmd_exact(input: &Input, exact_cap: usize, jobs: Option<usize>) -> Result<u8, Failure> {
    let g = input.load()?;
    let (dim, witness) =
        with_jobs(jobs_or_default(jobs), || local_metric_dimension_with(&g, exact_cap, Execution::Parallel))?;
    let report = bounds_for(&g, dim, witness);
    println!("{}", serde_json::to_string(&report).expect("report serialises"));
    Ok(0)
}

fn parse_vertex_list(text: &str, n: usize) -> Result<VertexSet, Failure> {
    let mut set = VertexSet::EMPTY;
    for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let v: usize = part.parse().map_err(|_| input_failure(format!("`{part}` is not a vertex index")))?;
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n }.into());
        }
        if set.contains(v) {
            return Err(Error::DuplicateVertex(v).into());
        }
        set.insert(v);
    }
    Ok(set)
}

fn cmd_verify(input: &Input, set: &str) -> Result<u8, Failure> {
    let g = input.load()?;
    let w = parse_vertex_list(set, g.n())?;
    match is_local_resolving(&g, w)? {
        Verdict::Ok => {
            println!("ok");
            Ok(0)
        }
        Verdict::Fails { u, v } => {
            println!("fails {u},{v}");
            Ok(1)
        }
    }
}

fn cmd_batch(
    file: &PathBuf,
    report: Option<&PathBuf>,
    exact_cap: usize,
    jobs: Option<usize>,
    flags: &ConstructFlags,
) -> Result<u8, Failure> {
    let text = if file.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| input_failure(format!("stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(file).map_err(|e| input_failure(format!("{}: {e}", file.display())))?
    };
    let cfg = BatchConfig { exact_cap, jobs: jobs_or_default(jobs), options: flags.options() };
    let result = run_batch(&text, &cfg);
    for r in result.records.iter().filter(|r| r.reason.is_some()) {
        eprintln!("line {}: {}", r.line, r.reason.as_deref().unwrap_or_default());
    }
    match report {
        Some(path) => {
            fs::write(path, result.to_jsonl()).map_err(|e| input_failure(format!("{}: {e}", path.display())))?;
            println!("{}", serde_json::to_string(&result.summary).expect("summary serialises"));
        }
        None => print!("{}", result.to_jsonl()),
    }
    Ok(if result.summary.clean() { 0 } else { 3 })
}

fn cmd_gen(name: &str, seed: u64, count: u64) -> Result<u8, Failure> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let mut emit = |g: &Graph| -> Result<(), Failure> {
        writeln!(out, "{}", g.to_graph6()?).map_err(|e| input_failure(format!("stdout: {e}")))
    };
    if let Some(n) = name.strip_prefix("labeled:") {
        let n: usize = n.parse().map_err(|_| input_failure(format!("bad order in `{name}`")))?;
        if !(1..=7).contains(&n) {
            return Err(input_failure("labeled enumeration supports 1 <= n <= 7".into()));
        }
        for g in labeled_graphs(n).filter(|g| g.is_connected() && !g.has_k4()) {
            emit(&g)?;
        }
    } else if name.starts_with("random") {
        for s in seed..seed.saturating_add(count) {
            emit(&graph_by_name(name, s)?)?;
        }
    } else if let Some(k) = name.strip_prefix("friendship:") {
        let k = k.parse().map_err(|_| input_failure(format!("bad k in `{name}`")))?;
        emit(&friendship_graph(k)?)?;
    } else {
        emit(&named_graph(name)?)?;
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Construct { input, construct, trace } => cmd_construct(input, construct, *trace),
        Command::Exact { input, exact_cap, jobs } => cmd_exact(input, *exact_cap, *jobs),
        Command::Verify { input, set } => cmd_verify(input, set),
        Command::Batch { file, report, exact_cap, jobs, construct } => {
            cmd_batch(file, report.as_ref(), *exact_cap, *jobs, construct)
        }
        Command::Gen { name, seed, count } => cmd_gen(name, *seed, *count),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
