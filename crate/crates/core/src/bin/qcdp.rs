use clap::Parser;
use qcdp::cli::{run, Cli};

fn main() {
    std::process::exit(run(Cli::parse()));
}
