mod args;
mod commands;
mod error;
mod formats;
mod output;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use gqt_core::Error as CoreError;
use serde_json::json;

use crate::args::Cli;
use crate::error::CliError;

fn fail(err: &CliError) -> ExitCode {
    let mut body = json!({ "error": err.to_string(), "exit_code": err.exit_code() });
    if let CliError::Core(CoreError::InvalidSpec(report)) = err {
        body["report"] = formats::report_json(report);
    }
    eprintln!("{}", serde_json::to_string_pretty(&body).expect("serializable"));
    ExitCode::from(err.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    let report = match commands::run(&cli) {
        Ok(r) => r,
        Err(e) => return fail(&e),
    };
    let text = report.render(cli.format);
    let written = match &cli.out {
        Some(path) => formats::write_text(path, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    };
    if let Err(e) = written {
        return fail(&e);
    }
    ExitCode::from(report.exit_code as u8)
}
