use clap::Parser;

fn main() {
    let cli = wimp_cli::Cli::parse();
    if let Err(err) = wimp_cli::run(cli) {
        eprintln!("wimp: {err}");
        std::process::exit(err.exit_code());
    }
}
