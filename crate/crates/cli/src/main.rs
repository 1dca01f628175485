use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;
use seczeta_cli::{run, Cli, CliError};

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global() {
            eprintln!("seczeta: {e}");
        }
    }
    let result = match &cli.output {
        Some(path) => File::create(path).map_err(CliError::from).and_then(|f| {
            let mut w = BufWriter::new(f);
            let code = run(&cli, &mut w)?;
            w.flush()?;
            Ok(code)
        }),
        None => {
            let stdout = io::stdout();
            let mut w = stdout.lock();
            run(&cli, &mut w)
        }
    };
    match result {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("seczeta: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
