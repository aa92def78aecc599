use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crdyn::corpus::corpus_verify;
use crdyn::doc::parse_system;
use crdyn::error::Error;
use crdyn::report::{export_dot, run_classify, RunParams};
use crdyn::suite::random_suite;

#[derive(Parser)]
#[command(name = "crdyn", version, about = "Classify transitive points of closed-relation dynamical systems")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify every point of a system and check its expectations.
    Classify {
        file: PathBuf,
        #[arg(long)]
        depth: Option<usize>,
        #[arg(long)]
        net: Option<u64>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Write the truncated transitivity tree of a point as DOT.
    Tree {
        file: PathBuf,
        #[arg(long)]
        root: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        dot: PathBuf,
    },
    /// Run the pinned examples, or only the named ones.
    Corpus { names: Vec<String> },
    /// Check random finite systems against the oracle and the properties.
    Suite {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        size: usize,
    },
}

enum Outcome {
    Pass,
    Fail,
}

fn read(path: &PathBuf) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn write(path: &PathBuf, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|e| Error::Invalid(format!("{}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Result<Outcome, Error> {
    let verdict = |pass: bool| if pass { Outcome::Pass } else { Outcome::Fail };
    match cmd {
        Cmd::Classify { file, depth, net, json } => {
            let doc = parse_system(&read(&file)?).map_err(|e| match e {
                Error::Parse { .. } => Error::Invalid(format!("{}:{e}", file.display())),
                e => e,
            })?;
            let report = run_classify(&doc, RunParams { depth, net })?;
            match json {
                Some(out) => write(&out, &report.to_json())?,
                None => println!("{}", report.to_json()),
            }
            for f in report.failures() {
                eprintln!("FAIL {f}");
            }
            Ok(verdict(report.pass))
        }
        Cmd::Tree { file, root, depth, dot } => {
            let doc = parse_system(&read(&file)?)?;
            write(&dot, &export_dot(&doc, &root, depth)?)?;
            Ok(Outcome::Pass)
        }
        Cmd::Corpus { names } => {
            let report = corpus_verify(&names, RunParams::default())?;
            for e in &report.entries {
                let status = if e.pass { "ok  " } else { "FAIL" };
                match &e.summary {
                    Some(s) => println!("{status} {} ({s})", e.name),
                    None => println!("{status} {}", e.name),
                }
                for f in &e.failures {
                    println!("     {f}");
                }
            }
            Ok(verdict(report.pass))
        }
        Cmd::Suite { seed, count, size } => {
            let report = random_suite(seed, count, size)?;
            println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize"));
            Ok(verdict(report.pass))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Fail) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
