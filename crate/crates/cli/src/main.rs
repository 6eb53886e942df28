use clap::Parser;
use std::process::ExitCode;
use veto_manip_cli::{run, Cli};

fn main() -> ExitCode {
    run(Cli::parse())
}
