use clap::Parser;

use quasiortho_cli::args::Cli;

fn main() {
    let cli = Cli::parse();
    let code = match quasiortho_cli::run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("quasiortho: {e}");
            e.exit_code()
        }
    };
    std::process::exit(code);
}
