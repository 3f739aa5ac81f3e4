use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use toughgraph::blocks::{block, BlockKind};
use toughgraph::graph::{decode_graph6, encode_graph6, from_edge_text, from_json, to_dot, to_edge_text, to_json};
use toughgraph::oracles::{
    has_hamilton_path, independence_number, is_hamiltonian, toughness_exact, toughness_upper_search,
    HamiltonLimits, Toughness, Verdict,
};
use toughgraph::synth::{synthesize, Certificate};
use toughgraph::verify::{check_certificate, VerifyLimits};
use toughgraph::{Graph, Rational, VertexSet};

/// Builds and checks nonhamiltonian graphs of prescribed toughness.
#[derive(Debug, Parser)]
#[command(name = "toughgraph", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Graph file format. Input files default to their extension.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Largest order handed to the exact toughness oracle.
    #[arg(long, global = true, default_value_t = 24)]
    max_oracle_n: usize,

    /// Search budget: backtracking nodes for Hamiltonicity, component
    /// counts for the heuristic toughness search.
    #[arg(long, global = true)]
    budget: Option<u64>,

    /// Worker threads for the oracles (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a witness graph and certificate for a target toughness a/b.
    Synth {
        t: Rational,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        cert: Option<PathBuf>,
    },
    /// Check a graph against a certificate; prints the report as JSON.
    Verify { graph: PathBuf, cert: PathBuf },
    /// Exact toughness (or a heuristic upper bound with --budget on large graphs).
    Tau {
        graph: PathBuf,
        #[arg(long)]
        witness: bool,
    },
    /// Hamilton cycle, or Hamilton path between two vertices with --path.
    Hamilton {
        graph: PathBuf,
        #[arg(long, num_args = 2, value_names = ["X", "Y"])]
        path: Option<Vec<usize>>,
        #[arg(long)]
        witness: bool,
    },
    /// Independence number.
    Alpha { graph: PathBuf },
    /// Write one of the building blocks.
    Block {
        kind: BlockKind,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    G6,
    Dot,
    Edges,
    Json,
}

impl Format {
    fn from_path(path: &Path) -> Format {
        match path.extension().and_then(|e| e.to_str()) {
            Some("dot" | "gv") => Format::Dot,
            Some("json") => Format::Json,
            Some("edges" | "txt") => Format::Edges,
            _ => Format::G6,
        }
    }
}

/// Results that map to exit codes 0 and 1; errors map to 2.
enum Outcome {
    Accepted,
    Rejected,
}

fn render(g: &Graph, format: Format, highlight: &VertexSet) -> String {
    match format {
        Format::G6 => {
            let mut s = String::from_utf8(encode_graph6(g)).expect("graph6 is ASCII");
            s.push('\n');
            s
        }
        Format::Dot => to_dot(g, highlight),
        Format::Edges => to_edge_text(g),
        Format::Json => {
            let mut s = to_json(g);
            s.push('\n');
            s
        }
    }
}

fn read_graph(path: &Path, format: Option<Format>) -> Result<Graph> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let format = format.unwrap_or_else(|| Format::from_path(path));
    let text = || String::from_utf8(bytes.clone()).with_context(|| format!("{} is not UTF-8", path.display()));
    let g = match format {
        Format::G6 => decode_graph6(&bytes)?,
        Format::Json => from_json(&text()?)?,
        Format::Edges => from_edge_text(&text()?)?,
        Format::Dot => bail!("DOT is an output-only format"),
    };
    Ok(g)
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

fn hamilton_limits(cli: &Cli) -> HamiltonLimits {
    let mut limits = HamiltonLimits::default();
    if let Some(b) = cli.budget {
        limits.node_budget = b;
    }
    limits
}

fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Synth { t, out, cert } => {
            let (g, c) = synthesize(*t)?;
            if let Some(path) = out {
                let format = cli.format.unwrap_or_else(|| Format::from_path(path));
                let cut = VertexSet::from_vertices(g.n(), c.cutset.iter().copied())?;
                write(path, &render(&g, format, &cut))?;
            }
            if let Some(path) = cert {
                write(path, &(c.to_json() + "\n"))?;
            }
            println!(
                "case {} n={} predicted_tau={} q={} cutset={}/{}",
                c.case,
                g.n(),
                c.predicted_tau,
                c.q,
                c.cutset.len(),
                c.components
            );
            Ok(Outcome::Accepted)
        }
        Command::Verify { graph, cert } => {
            let g = read_graph(graph, cli.format)?;
            let text = fs::read_to_string(cert).with_context(|| format!("reading {}", cert.display()))?;
            let c = Certificate::from_json(&text).with_context(|| format!("parsing {}", cert.display()))?;
            if let Some(&bad) = c.cutset.iter().find(|&&v| v >= g.n()) {
                bail!("certificate cutset names vertex {bad} but the graph has {} vertices", g.n());
            }
            let limits = VerifyLimits {
                toughness_max_n: cli.max_oracle_n,
                hamilton_cross_check_n: cli.max_oracle_n,
                hamilton: hamilton_limits(cli),
                ..VerifyLimits::default()
            };
            let report = check_certificate(&g, &c, &limits);
            println!("{}", report.to_json());
            Ok(if report.accepted {
                Outcome::Accepted
            } else {
                Outcome::Rejected
            })
        }
        Command::Tau { graph, witness } => {
            let g = read_graph(graph, cli.format)?;
            if g.n() <= cli.max_oracle_n {
                let r = toughness_exact(&g, cli.max_oracle_n)?;
                println!("{}", r.value);
                if *witness {
                    println!("{}", serde_json::to_string(&r.witness)?);
                }
            } else if let Some(budget) = cli.budget {
                match toughness_upper_search(&g, budget) {
                    Some(w) => {
                        println!("<= {} (upper bound)", w.ratio);
                        if *witness {
                            println!("{}", serde_json::to_string(&w)?);
                        }
                    }
                    None => println!("{}", Toughness::Infinite),
                }
            } else {
                bail!(
                    "{} vertices exceeds --max-oracle-n {}; pass --budget for an upper bound",
                    g.n(),
                    cli.max_oracle_n
                );
            }
            Ok(Outcome::Accepted)
        }
        Command::Hamilton { graph, path, witness } => {
            let g = read_graph(graph, cli.format)?;
            let limits = hamilton_limits(cli);
            let (verdict, method, yes, no) = match path.as_deref() {
                Some(&[x, y]) => {
                    let r = has_hamilton_path(&g, x, y, &limits)?;
                    (r.verdict, r.method, "Hamilton path found", "no Hamilton path")
                }
                Some(_) => unreachable!("clap enforces two values"),
                None => {
                    let r = is_hamiltonian(&g, &limits);
                    (r.verdict, r.method, "hamiltonian", "nonhamiltonian (exhaustive)")
                }
            };
            match verdict {
                Verdict::Found(order) => {
                    println!("{yes}");
                    if *witness {
                        println!("{}", serde_json::to_string(&order)?);
                    }
                }
                Verdict::Refuted => println!("{no}"),
                Verdict::Unknown => println!("unknown (search limit reached, {method:?})"),
            }
            Ok(Outcome::Accepted)
        }
        Command::Alpha { graph } => {
            let g = read_graph(graph, cli.format)?;
            println!("{}", independence_number(&g, 64)?);
            Ok(Outcome::Accepted)
        }
        Command::Block { kind, out } => {
            let b = block(*kind);
            let terminals = VertexSet::from_vertices(b.graph.n(), [b.x, b.y])?;
            match out {
                Some(path) => {
                    let format = cli.format.unwrap_or_else(|| Format::from_path(path));
                    write(path, &render(&b.graph, format, &terminals))?;
                    println!("{kind} n={} x={} y={}", b.graph.n(), b.x, b.y);
                }
                None => print!("{}", render(&b.graph, cli.format.unwrap_or(Format::G6), &terminals)),
            }
            Ok(Outcome::Accepted)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(Outcome::Accepted) => ExitCode::SUCCESS,
        Ok(Outcome::Rejected) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
