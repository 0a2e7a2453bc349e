use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use toric_qdm::cli::{
    emit_human, emit_machine, emit_problem, parse_problem, run, CliError, Command, RunOptions,
};
use toric_qdm::corpus;

/// Exact engine for Batyrev algebras, GKZ systems and quantum D-module
/// presentations of toric complete intersections.
#[derive(Parser)]
#[command(name = "toric-qdm", version)]
struct TopLevel {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct RunArgs {
    /// Problem file (JSON)
    file: PathBuf,
    /// I-series truncation order (defaults to the problem's, then 3)
    #[arg(long)]
    order: Option<u32>,
    /// q-support search level for colon certificates
    #[arg(long = "q-support-level", default_value_t = 2)]
    q_support_level: u32,
    /// Seed for the randomized property suites
    #[arg(long, default_value_t = 17)]
    seed: u64,
    /// Output format
    #[arg(long, default_value = "human", value_parser = ["human", "machine"])]
    format: String,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the fan invariants
    Validate(RunArgs),
    /// Primitive collections, classes and the curve-class basis
    Primitive(RunArgs),
    /// Batyrev algebra ranks and initial-ideal certificates
    Batyrev(RunArgs),
    /// Residual algebra rank against the cohomology kernel
    Residual(RunArgs),
    /// Box operators, Euler operator and symbols
    Gkz(RunArgs),
    /// Candidate generators of the left quotient ideal with certificates
    Colon(RunArgs),
    /// I-series layers, annihilation identities and the mirror map
    Ifunction(RunArgs),
    /// Everything, including the randomized property suites
    All(RunArgs),
    /// Write the shipped problem corpus into a directory
    Corpus { dir: PathBuf },
}

fn execute(command: Command, args: &RunArgs) -> Result<i32, CliError> {
    let text = std::fs::read_to_string(&args.file)?;
    let problem = parse_problem(&text)?;
    let opts = RunOptions {
        order: args.order,
        q_support_level: args.q_support_level,
        seed: args.seed,
        ..RunOptions::default()
    };
    let report = run(&problem, command, &opts);
    let rendered = if args.format == "machine" {
        emit_machine(&report)
    } else {
        emit_human(&report)
    };
    print!("{rendered}");
    Ok(report.exit_code())
}

fn main() -> ExitCode {
    let top = TopLevel::parse();
    let result = match &top.cmd {
        Cmd::Validate(a) => execute(Command::Validate, a),
        Cmd::Primitive(a) => execute(Command::Primitive, a),
        Cmd::Batyrev(a) => execute(Command::Batyrev, a),
        Cmd::Residual(a) => execute(Command::Residual, a),
        Cmd::Gkz(a) => execute(Command::Gkz, a),
        Cmd::Colon(a) => execute(Command::Colon, a),
        Cmd::Ifunction(a) => execute(Command::IFunction, a),
        Cmd::All(a) => execute(Command::All, a),
        Cmd::Corpus { dir } => (|| {
            std::fs::create_dir_all(dir)?;
            for p in corpus::all() {
                let path = dir.join(format!("{}.json", p.name));
                std::fs::write(path, emit_problem(&p))?;
            }
            Ok(0)
        })(),
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
