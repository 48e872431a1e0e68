use clap::Parser;

fn main() {
    let cli = cpulse::Cli::parse();
    if let Err(e) = cpulse::run(cli) {
        eprintln!("cpulse: {e}");
        std::process::exit(e.exit_code());
    }
}
