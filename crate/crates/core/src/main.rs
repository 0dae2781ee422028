use clap::Parser;

use triwalk::cli::{run, Cli};

fn main() {
    let cli = Cli::parse();
    std::process::exit(run(&cli.command));
}
