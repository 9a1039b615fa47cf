mod args;
mod data;
mod output;
mod reproduce;
mod run;

use clap::Parser;

use args::{Cli, Command};
use output::OutDir;

fn dispatch(cli: &Cli) -> garrote::Result<i32> {
    let out = OutDir::new(&cli.out);
    match &cli.command {
        Command::Fit(a) => run::cmd_fit(a, &out, cli.format),
        Command::Cv(a) => run::cmd_cv(a, &out, cli.format),
        Command::Tune(a) => run::cmd_tune(a, &out, cli.format),
        Command::Bootstrap(a) => run::cmd_bootstrap(a, &out, cli.format),
        Command::Compare(a) => run::cmd_compare(a, &out, cli.format),
        Command::Reproduce(a) => reproduce::cmd_reproduce(a, &out, cli.no_timestamp, cli.format),
    }
}

fn main() {
    let cli = Cli::parse();
    if let Some(t) = cli.threads {
        if t == 0 {
            eprintln!("error: --threads must be at least 1");
            std::process::exit(2);
        }
        // build_global fails only if a pool already exists; the first
        // call wins, which is fine for a single-shot binary
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global();
    }
    let code = match dispatch(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                2
            } else {
                1
            }
        }
    };
    std::process::exit(code);
}
