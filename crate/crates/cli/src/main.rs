//! `outage-bounds`: extremal ε-outage and zero-outage capacities of
//! dependent diversity links, as CSV/JSON tables.
//!
//! Exit codes: 0 ok, 1 usage, 2 numeric failure, 3 verification tolerance
//! exceeded.

use clap::{Parser, Subcommand};

use outage_bounds_cli::options::{resolve, CommonArgs, Resolved};
use outage_bounds_cli::output::Table;
use outage_bounds_cli::{commands, CliError};

#[derive(Parser)]
#[command(
    name = "outage-bounds",
    version,
    about = "Extremal outage-capacity bounds for dependent fading links"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Worst/iid/comonotonic/best ε-outage rates over an ε sweep.
    Bounds(CommonArgs),
    /// The tail-split parameter c_n(a) over an `a` sweep.
    Cmin(CommonArgs),
    /// Zero-outage rates with transmitter CSI over an n sweep.
    Csit(CommonArgs),
    /// Cross-check analytic values against the independent oracles.
    Verify(CommonArgs),
}

fn emit(table: &Table, opts: &Resolved) -> Result<(), CliError> {
    match &opts.out {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(CliError::Io)?;
            table.write(opts.format, file).map_err(CliError::Io)
        }
        None => table
            .write(opts.format, std::io::stdout().lock())
            .map_err(CliError::Io),
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Bounds(args) => {
            let opts = resolve(args, 0.1)?;
            emit(&commands::cmd_bounds(&opts)?, &opts)?;
            Ok(0)
        }
        Command::Cmin(args) => {
            let opts = resolve(args, 0.0)?;
            emit(&commands::cmd_cmin(&opts)?, &opts)?;
            Ok(0)
        }
        Command::Csit(args) => {
            let opts = resolve(args, 0.0)?;
            emit(&commands::cmd_csit(&opts)?, &opts)?;
            Ok(0)
        }
        Command::Verify(args) => {
            let opts = resolve(args, 0.1)?;
            let (table, code) = commands::cmd_verify(&opts)?;
            emit(&table, &opts)?;
            Ok(code)
        }
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match run(cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
