use clap::Parser;

fn main() {
    let cli = qsd_cli::Cli::parse();
    if let Err(e) = qsd_cli::run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.exit_code());
    }
}
