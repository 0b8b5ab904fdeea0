use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use plumbhf::report::{
    family_report, graph_json, render_contact, render_family, render_graph, render_hf, Analyzer,
    DEFAULT_DEPTH_CAP,
};
use plumbhf::{Error, PlumbingGraph};

/// Heegaard Floer HF+ of negative-definite plumbing trees, contact
/// invariants, and the sigma invariant.
#[derive(Parser)]
#[command(name = "plumbhf", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a graph file and report tree/definiteness/bad-vertex checks.
    Validate { file: PathBuf },
    /// Compute HF+ for every spin-c class: good vectors, correction
    /// terms, relations, and the tower/reduced decomposition.
    Hf {
        file: PathBuf,
        /// Depth cap for the iterative deepening (default 16, or
        /// PLUMBHF_MAX_DEPTH).
        #[arg(long)]
        depth: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Locate the contact invariant of the Stein structure with the
    /// given rotation numbers; report d3, the planar open book
    /// obstruction, and sigma.
    Contact {
        file: PathBuf,
        /// Comma-separated rotation numbers, one per vertex.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        rot: Vec<i32>,
        #[arg(long)]
        json: bool,
    },
    /// Run the contact pipeline on the n-th member of the built-in
    /// Brieskorn family of homology spheres.
    Family {
        n: u32,
        #[arg(long)]
        json: bool,
    },
}

/// 0 success, 2 validation failure, 3 non-stabilization, 4 input error.
fn exit_code_for(err: &Error) -> u8 {
    match err {
        Error::Parse { .. }
        | Error::InvalidGraph(_)
        | Error::NotCharacteristic { .. }
        | Error::NotRealizable(_)
        | Error::InvalidInput(_)
        | Error::Io(_) => 4,
        Error::SingularForm | Error::Unsupported(_) => 2,
        Error::StepBudget { .. } | Error::NotStabilized { .. } | Error::ResourceLimit(_) => 3,
    }
}

fn depth_cap(flag: Option<u32>) -> u32 {
    flag.or_else(|| {
        std::env::var("PLUMBHF_MAX_DEPTH")
            .ok()
            .and_then(|s| s.parse().ok())
    })
    .unwrap_or(DEFAULT_DEPTH_CAP)
}

fn load(path: &PathBuf) -> Result<PlumbingGraph, Error> {
    PlumbingGraph::parse(&std::fs::read_to_string(path)?)
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Validate { file } => {
            let graph = load(&file)?;
            let json = graph_json(&graph);
            print!("{}", render_graph(&json));
            Ok(if json.support == "UNSUPPORTED" { 2 } else { 0 })
        }
        Command::Hf { file, depth, json } => {
            let analyzer = Analyzer::new(load(&file)?)?;
            let r = analyzer.hf_report(depth_cap(depth))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("serializable"));
            } else {
                print!("{}", render_hf(&r));
            }
            Ok(if r.stabilized { 0 } else { 3 })
        }
        Command::Contact { file, rot, json } => {
            let analyzer = Analyzer::new(load(&file)?)?;
            let r = analyzer.contact_report(&rot, depth_cap(None))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("serializable"));
            } else {
                print!("{}", render_contact(&r));
            }
            Ok(0)
        }
        Command::Family { n, json } => {
            let r = family_report(n, depth_cap(None))?;
            if json {
                println!("{}", serde_json::to_string_pretty(&r).expect("serializable"));
            } else {
                print!("{}", render_family(&r));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
