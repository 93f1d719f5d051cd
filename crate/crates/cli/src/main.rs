use clap::Parser;

fn main() {
    let cli = theta_cli::Cli::parse();
    match theta_cli::run(cli) {
        Ok(out) => print!("{out}"),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(1);
        }
    }
}
