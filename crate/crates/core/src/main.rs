use clap::error::ErrorKind;
use clap::Parser;

fn main() {
    let cli = match foresight::cli::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            std::process::exit(1);
        }
    };
    std::process::exit(foresight::cli::run(&cli));
}
