//! `multibrot`: batch frontend. Reports go to stdout as JSON, the run
//! manifest to stderr; exit codes are 0 ok, 1 domain error, 2 usage
//! error, 3 inconclusive.

mod args;
mod commands;
mod manifest;

use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;
use multibrot_core::Config;

use args::Cli;
use commands::Failure;
use manifest::RunManifest;

fn main() -> ExitCode {
    let start = Instant::now();
    let argv: Vec<String> = std::env::args().collect();
    let mut manifest = RunManifest::new(&argv);
    let code = match Cli::try_parse_from(&argv) {
        Ok(cli) => execute(&cli, &mut manifest),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                2
            } else {
                0
            }
        }
    };
    manifest.finish(code, start.elapsed());
    eprintln!("{}", manifest.to_json());
    ExitCode::from(code)
}

fn execute(cli: &Cli, manifest: &mut RunManifest) -> u8 {
    let cfg = match load_config(cli) {
        Ok(cfg) => cfg,
        Err(msg) => {
            eprintln!("error: {msg}");
            return 2;
        }
    };
    manifest.config = Some(cfg.clone());
    match commands::run(cli, &cfg, &mut manifest.outputs) {
        Ok(report) => {
            println!("{}", serde_json::to_string_pretty(&report.value).expect("reports serialize"));
            if report.inconclusive {
                3
            } else {
                0
            }
        }
        Err(f) => {
            eprintln!("error: {f}");
            f.code()
        }
    }
}

fn load_config(cli: &Cli) -> Result<Config, String> {
    let mut cfg = match &cli.common.config {
        Some(path) => Config::from_file(path).map_err(|e| e.to_string())?,
        None => Config::default(),
    };
    if let Some(tol) = cli.common.tol {
        cfg.set("pair_tol", &tol.to_string()).map_err(|e| e.to_string())?;
    }
    Ok(cfg)
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(msg) => write!(f, "{msg}"),
            Failure::Core(e) => write!(f, "{e}"),
        }
    }
}
