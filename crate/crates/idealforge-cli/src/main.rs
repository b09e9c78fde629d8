use clap::error::ErrorKind;
use clap::Parser;

use idealforge_cli::{run, RunConfig};

fn main() {
    let cfg = match RunConfig::try_parse() {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => i32::from(idealforge_cli::EXIT_USAGE),
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(i32::from(run(cfg)));
}
