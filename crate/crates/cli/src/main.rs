mod args;
mod commands;
mod error;
mod plot;

use clap::Parser;

use args::{Cli, Command};

fn main() {
    let cli = Cli::parse();
    let result = netstab::par::with_jobs(cli.jobs, |exec| match &cli.command {
        Command::Generate(a) => commands::generate(a),
        Command::Centrality(a) => commands::centrality(a, exec),
        Command::Perturb(a) => commands::perturb(a),
        Command::Stability(a) => commands::stability(a, exec),
        Command::Sweep(a) => commands::sweep(a, exec),
        Command::Plot(a) => commands::plot(a),
    });
    if let Err(e) = result {
        eprintln!("netstab: {e}");
        std::process::exit(e.exit_code());
    }
}
