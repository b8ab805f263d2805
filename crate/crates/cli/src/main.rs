mod args;
mod commands;
mod envelope;
mod error;
mod files;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Test(a) => commands::test::run(a, &cli.global),
        Command::Power(a) => commands::power::run(a, &cli.global),
        Command::Bench(a) => commands::bench::run(a, &cli.global),
        Command::Causal(a) => commands::causal::run(a, &cli.global),
        Command::Interpret(a) => commands::interpret::run(a, &cli.global),
    };
    if let Err(e) = result {
        eprintln!("c2st: error: {e}");
        std::process::exit(e.exit_code());
    }
}
