use clap::Parser;

fn main() {
    let cli = infharm::cli::Cli::parse();
    std::process::exit(infharm::cli::run(&cli));
}
