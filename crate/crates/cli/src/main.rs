use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use toric3d_cli::{
    error_report, parse_checks, parse_config, parse_region, parse_surface, run, CliError, Command, Flags,
};

#[derive(Parser)]
#[command(name = "toric3d", version, about = "Ground-state sectors of infinite flux strings in the 3d toric code")]
struct Cli {
    /// Only require the direction sets of all strings to have empty common intersection.
    #[arg(long, global = true)]
    strict_gss: bool,
    /// Exit with status 1 when `classify` finds no ground sector.
    #[arg(long, global = true)]
    expect_ground: bool,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Parse and validate a configuration.
    Validate { config: PathBuf },
    /// Ground-sector verdict, witness and sector label.
    Classify { config: PathBuf },
    /// Energy inside an inclusive box `x0,y0,z0:x1,y1,z1`.
    Energy {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        region: String,
    },
    /// Straighten strings inside a box.
    Straighten {
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        region: String,
        /// Only this string; failures become errors.
        #[arg(long)]
        string: Option<usize>,
    },
    /// Splice strings along the boundary of a dual surface.
    Surgery {
        config: PathBuf,
        #[arg(long)]
        surface: PathBuf,
    },
    /// Enumerate admissible direction assignments for 1 to 3 strings.
    Enumerate {
        #[arg(long)]
        strings: usize,
    },
    /// Finite-size checks against the stabilizer model on an n³ block.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value = "all")]
        checks: String,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| CliError::Io(e.to_string()))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn build(sub: Sub) -> Result<(Command, Option<PathBuf>), CliError> {
    Ok(match sub {
        Sub::Validate { config } => (Command::Validate, Some(config)),
        Sub::Classify { config } => (Command::Classify, Some(config)),
        Sub::Energy { config, region } => (Command::Energy { region: parse_region(&region)? }, Some(config)),
        Sub::Straighten { config, region, string } => {
            (Command::Straighten { region: parse_region(&region)?, string }, Some(config))
        }
        Sub::Surgery { config, surface } => {
            (Command::Surgery { surface: parse_surface(&read(&surface)?)? }, Some(config))
        }
        Sub::Enumerate { strings } => (Command::Enumerate { strings }, None),
        Sub::Verify { n, checks } => (Command::Verify { n, checks: parse_checks(&checks)? }, None),
    })
}

fn name(sub: &Sub) -> &'static str {
    match sub {
        Sub::Validate { .. } => "validate",
        Sub::Classify { .. } => "classify",
        Sub::Energy { .. } => "energy",
        Sub::Straighten { .. } => "straighten",
        Sub::Surgery { .. } => "surgery",
        Sub::Enumerate { .. } => "enumerate",
        Sub::Verify { .. } => "verify",
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(2);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    let flags = Flags { strict_gss: cli.strict_gss, expect_ground: cli.expect_ground };
    let command_name = name(&cli.command);
    let outcome = build(cli.command).and_then(|(command, config)| {
        let cfg = config.map(|p| read(&p).and_then(|t| parse_config(&t).map_err(CliError::from))).transpose()?;
        run(&command, cfg.as_ref(), &flags)
    });
    let report = outcome.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        error_report(command_name, &e)
    });
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{}", report.render());
    ExitCode::from(report.exit_code)
}
