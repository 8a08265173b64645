use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use islab::cli::{self, RunOptions, EXIT_CONFIG, EXIT_PASS};

#[derive(Parser)]
#[command(name = "islab", version, about = "Numerical laboratory for area-preserving surface maps")]
struct Args {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suite named in a config file and write its artifacts.
    Run {
        config: PathBuf,
        /// Output directory (overrides `output.dir`).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed of the random generator (overrides `seed`).
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        threads: Option<u64>,
    },
    /// Check a config file and list every violation.
    Validate { config: PathBuf },
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    let code = match args.command {
        Command::Validate { config } => match cli::load(&config) {
            Ok(c) => {
                println!("{}: valid {} config", config.display(), c.suite.name());
                EXIT_PASS
            }
            Err(v) => {
                for x in &v {
                    eprintln!("{x}");
                }
                EXIT_CONFIG
            }
        },
        Command::Run { config, out, seed, threads } => {
            let opts = RunOptions { out, seed, threads: threads.map(|t| t as usize) };
            match cli::run_file(&config, &opts) {
                Ok(o) => {
                    print!("{}", cli::summary(&o));
                    o.exit_code()
                }
                Err(e) => {
                    eprintln!("error: {e}");
                    e.exit_code()
                }
            }
        }
    };
    ExitCode::from(code as u8)
}
