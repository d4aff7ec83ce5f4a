use clap::Parser;

fn main() {
    let cli = hfgas::Cli::parse();
    std::process::exit(hfgas::run(cli));
}
