mod args;
mod commands;
mod failure;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::{Map, Value};

use args::{merge_config, Cli, Command, Format};
use failure::Failure;

fn load_config(cli: &Cli) -> Result<Map<String, Value>, Failure> {
    let Some(path) = &cli.config else {
        return Ok(Map::new());
    };
    let text = std::fs::read_to_string(path).map_err(|e| Failure::io(path.display(), e))?;
    match serde_json::from_str(&text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(Failure::config(format!("{}: expected a JSON object", path.display()))),
        Err(e) => Err(Failure::config(format!("{}: {e}", path.display()))),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut config = load_config(&cli)?;
    if let Some(cmd) = config.remove("command") {
        if cmd.as_str() != Some(cli.command.name()) {
            return Err(Failure::config(format!("config is for command {cmd}, not '{}'", cli.command.name())));
        }
    }
    let out = match (cli.out, config.remove("out")) {
        (Some(p), _) => Some(p),
        (None, Some(Value::String(s))) => Some(PathBuf::from(s)),
        (None, None) => None,
        (None, Some(other)) => return Err(Failure::config(format!("config key 'out': expected a path, got {other}"))),
    };
    let format = match (cli.format, config.remove("format")) {
        (Some(f), _) => Some(f),
        (None, Some(v)) => Some(
            serde_json::from_value::<Format>(v).map_err(|e| Failure::config(format!("config key 'format': {e}")))?,
        ),
        (None, None) => None,
    };
    let mut verdict = Ok(());
    let rendered = match &cli.command {
        Command::Compute(a) => commands::compute(&merge_config(a, &config)?, format)?,
        Command::Wavefunction(a) => commands::wavefunction(&merge_config(a, &config)?, format)?,
        Command::Tune(a) => commands::tune(&merge_config(a, &config)?)?,
        Command::Scan(a) => commands::scan(&merge_config(a, &config)?, format)?,
        Command::Phaseshift(a) => commands::phaseshift(&merge_config(a, &config)?, format)?,
        Command::Bound(a) => commands::bound(&merge_config(a, &config)?, format)?,
        Command::Table(a) => {
            let (rendered, passed) = commands::table(&merge_config(a, &config)?, format)?;
            if !passed {
                verdict = Err(Failure::numerical("some rows are outside tolerance"));
            }
            rendered
        }
    };
    rendered.emit(out.as_deref())?;
    verdict
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", Failure::config(e.to_string().trim_end()).to_json());
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{}", f.to_json());
            ExitCode::from(f.kind.exit_code())
        }
    }
}
