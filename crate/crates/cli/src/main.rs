use clap::Parser;

fn main() {
    let cli = asaf_cli::Cli::parse();
    if let Err(e) = asaf_cli::run(cli) {
        eprintln!("error: {}: {}", e.code(), e);
        std::process::exit(e.exit_code());
    }
}
