use std::fs;
use std::process::ExitCode;

use qif_mzi::cli::{run, ConfigDoc, RunConfig, RunError};
use qif_mzi::Error;

const USAGE: &str = "\
usage: qif-mzi <mode> [--config FILE] [--key value ...] [--out PATH] [--format csv|json]

modes: distributions, decompose, sweep, ports, design, verify

Values are read from the config file (flat `key = value` lines, `#` comments),
then overridden by `--key value` (or `--key=value`) flags, e.g.
`--delta-over-w 0.3 --phi 0.75pi`. With --out the table is written to PATH
and the summary to stdout; otherwise the table goes to stdout and the
summary to stderr.

exit codes: 0 success, 1 verification failure, 2 bad arguments or config,
3 model error (e.g. dark post-selection port), 4 output not writable";

enum Cli {
    Help,
    Run(RunConfig),
}

/// Splits the command line into flags and applies them over the config file.
fn parse_args(args: &[String]) -> Result<Cli, String> {
    let mut mode = None;
    let mut config_path = None;
    let mut overrides = Vec::new();
    let mut iter = args.iter();
    while let Some(arg) = iter.next() {
        if arg == "-h" || arg == "--help" {
            return Ok(Cli::Help);
        }
        let Some(flag) = arg.strip_prefix("--") else {
            if mode.replace(arg.clone()).is_some() {
                return Err(format!("unexpected argument `{arg}`"));
            }
            continue;
        };
        let (key, value) = match flag.split_once('=') {
            Some((k, v)) => (k.to_string(), v.to_string()),
            None => {
                let value = iter
                    .next()
                    .ok_or_else(|| format!("flag --{flag} needs a value"))?;
                (flag.to_string(), value.clone())
            }
        };
        if key == "config" {
            config_path = Some(value);
        } else {
            overrides.push((key, value));
        }
    }

    let mut doc = match &config_path {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))?;
            ConfigDoc::parse(&text).map_err(|e| format!("{path}: {e}"))?
        }
        None => ConfigDoc::default(),
    };
    if let Some(mode) = &mode {
        doc.set("mode", mode).map_err(|e| e.to_string())?;
    }
    for (key, value) in &overrides {
        doc.set(key, value).map_err(|e| e.to_string())?;
    }
    RunConfig::from_doc(&doc)
        .map(Cli::Run)
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let config = match parse_args(&args) {
        Ok(Cli::Help) => {
            println!("{USAGE}");
            return ExitCode::SUCCESS;
        }
        Ok(Cli::Run(config)) => config,
        Err(message) => {
            eprintln!("error: {message}\n\n{USAGE}");
            return ExitCode::from(2);
        }
    };
    match run(&config) {
        Ok(outcome) => {
            let summary = outcome.summary.join("\n");
            if config.out.is_some() {
                println!("{summary}");
            } else {
                print!("{}", outcome.table.render(config.format));
                eprintln!("{summary}");
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err) => {
            eprintln!("error: {err}");
            if let RunError::Model(Error::ZeroProbability { .. }) = err {
                eprintln!(
                    "no post-selected events: the (D1, C2) port pair is dark for these parameters"
                );
            }
            ExitCode::from(err.exit_code() as u8)
        }
    }
}
