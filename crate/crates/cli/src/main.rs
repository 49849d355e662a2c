//! `ldkep`: Laver tables, law checks, key establishment over TCP, attacks
//! on finite platforms and timing runs.
//!
//! Exit codes: 0 success, 1 mismatch or counterexample, 2 usage or parse error.

mod attack;
mod bench;
mod config;
mod kep;
mod laws;

use std::fmt;
use std::fs;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ldkep_core::Error;

use config::{Common, Settings};

#[derive(Parser, Debug)]
#[command(name = "ldkep", version, about = "Key establishment over left-distributive systems")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the Laver table L_n.
    Laver(laws::LaverArgs),
    /// Check the distributive laws a context declares.
    Laws,
    /// Run the key establishment protocol.
    Kep {
        #[command(subcommand)]
        cmd: kep::KepCommand,
    },
    /// Recover the shared key of a seeded honest run from public data.
    Attack(attack::AttackArgs),
    /// Subgroup-restricted conjugacy: planted finite instances or the braid transform.
    Sccp(attack::SccpArgs),
    /// Time normal forms, handshakes and attack pipelines.
    Bench(bench::BenchArgs),
}

/// A bad flag, config line or argument combination.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

/// What a command found, as opposed to failing to run.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Ok,
    Mismatch,
}

/// Report text collected by a command and written once at the end.
#[derive(Default)]
pub struct Report {
    text: String,
}

impl Report {
    pub fn line(&mut self, s: impl fmt::Display) {
        self.text.push_str(&s.to_string());
        self.text.push('\n');
    }

    /// Appends text that already ends in a newline (wire frames).
    pub fn raw(&mut self, s: &str) {
        self.text.push_str(s);
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Usage>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Parse { .. } | Error::InvalidArgument(_) | Error::Precondition(_)) => 2,
        _ => 1,
    }
}

fn run(cli: Cli) -> anyhow::Result<Verdict> {
    let settings = Settings::resolve(&cli.common)?;
    let mut report = Report::default();
    let verdict = match cli.cmd {
        Command::Laver(a) => laws::laver(&a, &mut report),
        Command::Laws => laws::laws(&settings, &mut report),
        Command::Kep { cmd } => kep::run(&settings, &cmd, &mut report),
        Command::Attack(a) => attack::attack(&settings, &a, &mut report),
        Command::Sccp(a) => attack::sccp(&settings, &a, &mut report),
        Command::Bench(a) => bench::bench(&settings, &a, &mut report),
    };
    // partial reports are still written when a command fails midway
    match &settings.out {
        Some(path) => fs::write(path, &report.text)?,
        None => print!("{}", report.text),
    }
    verdict
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Verdict::Ok) => ExitCode::SUCCESS,
        Ok(Verdict::Mismatch) => ExitCode::from(1),
        Err(e) => {
            eprintln!("ldkep: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
