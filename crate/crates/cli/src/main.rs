//! Command-line front end: check, reduce, replay, enumerate, verify, catalog.
//!
//! Exit codes: 0 success, 1 negative verdict, 2 malformed input, 3 theorem
//! violation.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use sparse21::catalog::{all_entries, flagged_ten_vertex_drawing, in_class_m, Family};
use sparse21::certificate::Certificate;
use sparse21::connectivity::is_k_connected;
use sparse21::engine::{decompose_with, Mode};
use sparse21::enumerate::{enumerate_exhaustive, enumerate_generative, Census};
use sparse21::io::{parse_graph, to_edge_list};
use sparse21::sparsity::{deficiency, is_circuit, pebble_independent};
use sparse21::sweep::{full_sweep, SweepPlan};
use sparse21::{canonical_form, Error, Graph};

#[derive(Parser)]
#[command(name = "sparse21", version, about = "(2,1)-sparsity circuits: recognition, decomposition certificates, censuses")]
struct Cli {
    /// Emit key=value lines instead of the plain report.
    #[arg(long, global = true)]
    kv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sparsity, circuit and connectivity verdicts for a graph.
    Check {
        input: PathBuf,
        /// Accept loops and parallel edges.
        #[arg(long)]
        multigraph: bool,
    },
    /// Decompose a circuit into a certificate.
    Reduce {
        input: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        multigraph: bool,
        /// Also write the replay tree as Graphviz.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Replay a certificate and compare it with its root (and optionally a graph).
    Replay {
        certificate: PathBuf,
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Census of simple circuits on exactly n vertices.
    Enumerate {
        #[arg(short = 'n', long = "order")]
        n: usize,
        #[arg(long)]
        count_only: bool,
        /// Use the generative closure instead of exhaustive search.
        #[arg(long)]
        generative: bool,
        /// Allow the heavy n = 8 census.
        #[arg(long)]
        n8: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run every property sweep and report violations.
    Verify {
        #[arg(long, default_value_t = 2024)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        random: usize,
        #[arg(long, default_value_t = 12)]
        max_order: usize,
    },
    /// Export the base-graph fixtures.
    Catalog {
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Include the ten-vertex drawing that fails the counts.
        #[arg(long = "flagged-figure14")]
        flagged_drawing: bool,
    },
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn read_graph(path: &Path, multigraph: bool) -> Result<Graph> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let g = parse_graph(&text)?;
    if !multigraph && !g.is_simple() {
        bail!(Error::NotSimple);
    }
    Ok(g)
}

fn emit(text: &str, output: Option<&Path>) -> Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Report lines, plain (`circuit: yes; f=0`) or key=value. In plain form
/// a one-letter quantity is written as an equation.
fn report(kv: bool, fields: &[(&str, String)]) -> String {
    if kv {
        fields.iter().map(|(k, v)| format!("{}={v}\n", k.replace([' ', '-'], "_"))).collect()
    } else {
        let parts: Vec<String> = fields
            .iter()
            .map(|(k, v)| if k.len() == 1 { format!("{k}={v}") } else { format!("{k}: {v}") })
            .collect();
        parts.join("; ") + "\n"
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check { input, multigraph } => {
            let g = read_graph(&input, multigraph)?;
            let circuit = is_circuit(&g);
            let mut fields = vec![
                ("circuit", yes(circuit).to_string()),
                ("f", deficiency(&g).to_string()),
                ("3-connected", yes(is_k_connected(&g, 3)).to_string()),
            ];
            if cli.kv {
                fields.push(("sparse", yes(pebble_independent(&g)).to_string()));
                fields.push(("class-M", yes(in_class_m(&g)).to_string()));
            }
            print!("{}", report(cli.kv, &fields));
            Ok(if circuit { 0 } else { 1 })
        }
        Command::Reduce { input, output, multigraph, dot } => {
            let g = read_graph(&input, multigraph)?;
            let mode = if multigraph { Mode::Multigraph } else { Mode::Simple };
            let cert = decompose_with(&g, mode)?;
            emit(&cert.to_text()?, output.as_deref())?;
            if let Some(p) = dot {
                fs::write(&p, cert.to_dot()?).with_context(|| format!("writing {}", p.display()))?;
            }
            Ok(0)
        }
        Command::Replay { certificate, graph, dot } => {
            let text = fs::read_to_string(&certificate).with_context(|| format!("reading {}", certificate.display()))?;
            let cert = Certificate::parse(&text)?;
            let replayed = cert.replay()?;
            let iso = match graph {
                Some(p) => canonical_form(&read_graph(&p, true)?)? == canonical_form(&replayed)?,
                None => canonical_form(&replayed)? == cert.root,
            };
            if let Some(p) = dot {
                fs::write(&p, cert.to_dot()?).with_context(|| format!("writing {}", p.display()))?;
            }
            if cli.kv {
                print!("{}", report(true, &[("order", replayed.order().to_string()), ("isomorphic", yes(iso).into())]));
            } else {
                print!("{}", to_edge_list(&replayed));
                println!("isomorphic: {}", yes(iso));
            }
            Ok(if iso { 0 } else { 1 })
        }
        Command::Enumerate { n, count_only, generative, n8, output } => {
            if n >= 8 && !n8 {
                bail!(Error::InvalidArgument("the n = 8 census needs --n8".into()));
            }
            let census: Census = if generative { enumerate_generative(n)? } else { enumerate_exhaustive(n)? };
            if count_only {
                emit(&format!("{}\n", census.len()), output.as_deref())?;
            } else {
                emit(&census.export(), output.as_deref())?;
            }
            Ok(0)
        }
        Command::Verify { seed, random, max_order } => {
            let plan = SweepPlan { seed, random_circuits: random, max_order, ..SweepPlan::default() };
            let rep = full_sweep(&plan)?;
            print!("{}", rep.render());
            Ok(if rep.violations() == 0 { 0 } else { 3 })
        }
        Command::Catalog { output, flagged_drawing } => {
            let mut out = String::new();
            for e in all_entries() {
                let family = match e.family {
                    Family::Simple => "simple",
                    Family::MultiExtra => "multigraph",
                };
                writeln!(out, "# {} {family} {}", e.name, canonical_form(&e.graph)?.to_hex())?;
                out.push_str(&to_edge_list(&e.graph));
                out.push('\n');
            }
            if flagged_drawing {
                let g = flagged_ten_vertex_drawing();
                writeln!(out, "# flagged ten-vertex drawing: circuit {}; f={}", yes(is_circuit(&g)), deficiency(&g))?;
                out.push_str(&to_edge_list(&g));
            }
            emit(&out, output.as_deref())?;
            Ok(0)
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::TheoremViolation(_)) => 3,
        Some(Error::NotCircuit | Error::NotSimple | Error::Replay(_) | Error::MovePrecondition(_) | Error::PartNotCircuit(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
