use std::process::ExitCode;

use clap::Parser;
use formal_rings_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report = run(&cli);
    println!("{}", report.render(cli.json));
    ExitCode::from(report.verdict.exit_code())
}
