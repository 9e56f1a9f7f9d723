use clap::Parser;

use qcnoise::cli::Cli;
use qcnoise::run;

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help/--version land on stdout with exit 0; real parse
            // errors are usage errors, exit 1.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run::execute(cli.command) {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
