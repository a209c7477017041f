//! `hetg2`: runs the exact verification suites and prints or writes reports.
//!
//! Exit codes: 0 when no check fails (flagged records allowed), 1 when some
//! check fails, 2 on a usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hetg2::report::{list_checks, run_suite, Params, Report, Suite};
use hetg2::structures::{named_form, FORM_NAMES};

#[derive(Parser)]
#[command(name = "hetg2", version, about = "Exact verification of heterotic G2 constructions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite.
    Verify {
        /// One of 3ad, su3, spinor, heisenberg, bianchi, all.
        #[arg(long)]
        suite: String,
        /// Rational overrides, e.g. alpha=1,delta=0,alphap=1/12,lambda=3/2.
        #[arg(long, default_value = "")]
        params: String,
        /// Write the JSON report to this path.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Print the check ids without running them.
        #[arg(long)]
        list: bool,
    },
    /// Print a named form in coframe components and in generators.
    Form {
        /// Form name; `list` prints the available names.
        name: String,
    },
}

const USAGE: u8 = 2;

fn usage(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(USAGE)
}

fn print_human(report: &Report) {
    for r in &report.records {
        println!("{:<8} {}  ({})", r.status.to_string().to_uppercase(), r.check_id, r.paper_ref);
        if !r.notes.is_empty() && r.status != hetg2::report::Status::Pass {
            println!("         {}", r.notes);
        }
    }
    let s = &report.summary;
    println!("suite {}: {} pass, {} fail, {} flagged", report.suite, s.pass, s.fail, s.flagged);
}

fn verify(suite: &str, params: &str, json: Option<PathBuf>, list: bool) -> ExitCode {
    let suite: Suite = match suite.parse() {
        Ok(s) => s,
        Err(err) => return usage(err),
    };
    let params = match Params::parse(params) {
        Ok(p) => p,
        Err(err) => return usage(err),
    };
    if list {
        for id in list_checks(suite) {
            println!("{id}");
        }
        return ExitCode::SUCCESS;
    }
    let report = run_suite(suite, &params);
    print_human(&report);
    if let Some(path) = json {
        if let Err(err) = std::fs::write(&path, report.to_json() + "\n") {
            eprintln!("error: cannot write {}: {err}", path.display());
            return ExitCode::FAILURE;
        }
    }
    if report.has_failures() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn form(name: &str) -> ExitCode {
    if name == "list" {
        for n in FORM_NAMES {
            println!("{n}");
        }
        return ExitCode::SUCCESS;
    }
    match named_form(name) {
        Ok(Some((coframe, generators))) => {
            println!("{generators}");
            println!("{coframe}");
            ExitCode::SUCCESS
        }
        Ok(None) => usage(format!("unknown form {name:?}; try `hetg2 form list`")),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::Verify { suite, params, json, list } => verify(&suite, &params, json, list),
        Command::Form { name } => form(&name),
    }
}
