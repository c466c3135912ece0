mod args;
mod commands;
mod report;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command};
use fdrlab::Error;

const EXIT_VALIDATION: u8 = 2;
const EXIT_DOMAIN: u8 = 3;
const EXIT_IO: u8 = 4;

pub(crate) enum Failure {
    Lib(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Config(_)) => EXIT_VALIDATION,
            Failure::Lib(_) => EXIT_DOMAIN,
            Failure::Io(_) => EXIT_IO,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Lib(e) => e.to_string(),
            Failure::Io(m) => m.clone(),
        }
    }
}

pub fn run() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            e.exit()
        }
        Err(e) => {
            let text = e.render().to_string();
            eprintln!(
                "{}",
                text.lines().next().unwrap_or("error: invalid arguments")
            );
            return ExitCode::from(EXIT_VALIDATION);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    let (report, format) = match command {
        Command::Screen(a) => (commands::screen(&a)?, a.out.format),
        Command::Fdr(a) => (commands::fdr(&a)?, a.out.format),
        Command::Berger(a) => (commands::berger(&a)?, a.out.format),
        Command::Power(a) => (commands::power(&a)?, a.out.format),
        Command::Simulate(a) => (commands::simulate(&a)?, a.out.format),
        Command::Inflation(a) => (commands::inflation(&a)?, a.out.format),
    };
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    report
        .write(format, &mut lock)
        .and_then(|_| lock.flush())
        .map_err(|e| Failure::Io(format!("cannot write output: {e}")))
}
