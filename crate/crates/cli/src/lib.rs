//! Front end for the spin-qubit toolkit: every subcommand resolves its parameters into a
//! [`RunConfig`], writes its datasets into the output directory and leaves a manifest
//! that is enough to regenerate them byte for byte.

pub mod analysis;
pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Arg, ArgAction};
use thiserror::Error;

pub use config::{linspace, Format, ParamKind, ParamSpec, ParamValue, RunConfig, OUT_DIR_ENV};
pub use output::{FileRecord, Manifest, Run};

pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_CONVERGED: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("not converged: {0}")]
    NotConverged(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::NotConverged(_) => EXIT_NOT_CONVERGED,
            _ => EXIT_FAILURE,
        }
    }
}

macro_rules! domain_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        }
    )*};
}

domain_error!(spin_core::SpinError, plaquette::PlaquetteError, pert_gate::PertError, geo_phase::GeoError);

impl From<optctrl::ControlError> for CliError {
    fn from(e: optctrl::ControlError) -> Self {
        match e {
            optctrl::ControlError::NotConverged { .. } => CliError::NotConverged(e.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

/// A subcommand: its parameters and what it does with them.
pub trait Command: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    fn params(&self) -> Vec<ParamSpec>;
    fn execute(&self, run: &mut Run) -> Result<(), CliError>;

    /// Name of the manifest file, without extension.
    fn manifest_stem(&self, config: &RunConfig) -> String {
        config.command.clone()
    }
}

pub struct Registry {
    commands: Vec<Box<dyn Command>>,
}

impl Default for Registry {
    fn default() -> Self {
        let mut r = Self::empty();
        commands::register_all(&mut r);
        r
    }
}

impl Registry {
    pub fn empty() -> Self {
        Self { commands: Vec::new() }
    }

    pub fn register(&mut self, command: Box<dyn Command>) {
        assert!(self.get(command.name()).is_none(), "duplicate command {}", command.name());
        self.commands.push(command);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Command> {
        self.commands.iter().find(|c| c.name() == name).map(|c| c.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.commands.iter().map(|c| c.name()).collect()
    }

    fn clap_command(&self) -> clap::Command {
        let mut root = clap::Command::new("dfsq")
            .about("Decoherence-free plaquette qubits: spectra, gate sweeps, optimal control and tunneling phases")
            .version(env!("CARGO_PKG_VERSION"))
            .subcommand_required(true)
            .arg_required_else_help(true)
            .arg(
                Arg::new("out-dir")
                    .long("out-dir")
                    .global(true)
                    .env(OUT_DIR_ENV)
                    .default_value("out")
                    .help("Directory receiving datasets and manifests"),
            )
            .arg(
                Arg::new("seed")
                    .long("seed")
                    .global(true)
                    .value_parser(clap::value_parser!(u64))
                    .default_value("0")
                    .help("Seed for every random draw"),
            )
            .arg(
                Arg::new("format")
                    .long("format")
                    .global(true)
                    .value_parser(["csv", "json"])
                    .default_value("csv")
                    .help("Dataset format"),
            )
            .arg(
                Arg::new("threads")
                    .long("threads")
                    .global(true)
                    .value_parser(clap::value_parser!(usize))
                    .default_value("0")
                    .help("Worker threads (0 = all cores); output does not depend on it"),
            )
            .arg(
                Arg::new("resume")
                    .long("resume")
                    .global(true)
                    .action(ArgAction::SetTrue)
                    .help("Skip the run when its manifest and artifacts are already current"),
            );
        for c in &self.commands {
            let sub = c.params().into_iter().fold(clap::Command::new(c.name()).about(c.about()), |s, p| s.arg(p.to_arg()));
            root = root.subcommand(sub);
        }
        root
    }

    /// Parse `argv` (program name first) into a resolved configuration.
    pub fn parse<I, T>(&self, argv: I) -> Result<(RunConfig, Options), clap::Error>
    where
        I: IntoIterator<Item = T>,
        T: Into<OsString> + Clone,
    {
        let matches = self.clap_command().try_get_matches_from(argv)?;
        let (name, sub) = matches.subcommand().expect("subcommand required");
        let command = self.get(name).expect("registered");
        let params = command.params().into_iter().filter_map(|p| Some((p.name.to_string(), p.resolve(sub)?))).collect();
        let format = match sub.get_one::<String>("format").map(String::as_str) {
            Some("json") => Format::Json,
            _ => Format::Csv,
        };
        let config = RunConfig {
            command: name.to_string(),
            params,
            seed: *sub.get_one::<u64>("seed").expect("defaulted"),
            output_dir: PathBuf::from(sub.get_one::<String>("out-dir").expect("defaulted")),
            format,
        };
        let options = Options {
            threads: *sub.get_one::<usize>("threads").expect("defaulted"),
            resume: sub.get_flag("resume"),
        };
        Ok((config, options))
    }

    /// Execute a resolved run and write its manifest.
    pub fn execute(&self, config: RunConfig, options: &Options) -> Result<Outcome, CliError> {
        let command = self.get(&config.command).ok_or_else(|| CliError::Usage(format!("unknown command {}", config.command)))?;
        let stem = command.manifest_stem(&config);
        if options.resume {
            if let Some(m) = Manifest::load(&Manifest::path_for(&config, &stem)) {
                if m.is_current(&config) {
                    return Ok(Outcome { manifest: m, summary: vec!["up to date".into()], skipped: true });
                }
            }
        }
        let mut run = Run::new(config, stem);
        let result = if options.threads > 0 {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(options.threads)
                .build()
                .map_err(|e| CliError::Domain(e.to_string()))?;
            pool.install(|| command.execute(&mut run))
        } else {
            command.execute(&mut run)
        };
        match result {
            Ok(()) => {
                let summary = run.summary().to_vec();
                Ok(Outcome { manifest: run.finish()?, summary, skipped: false })
            }
            // artifacts of a non-converged run are still worth keeping
            Err(CliError::NotConverged(msg)) => {
                print_lines(run.summary());
                run.finish()?;
                Err(CliError::NotConverged(msg))
            }
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub threads: usize,
    pub resume: bool,
}

#[derive(Debug)]
pub struct Outcome {
    pub manifest: Manifest,
    pub summary: Vec<String>,
    pub skipped: bool,
}

// a closed pipe (e.g. `| head`) is not an error worth a panic
fn print_lines(lines: &[String]) {
    let mut out = std::io::stdout().lock();
    for line in lines {
        if writeln!(out, "{line}").is_err() {
            return;
        }
    }
}

/// Full command-line entry point; returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let registry = Registry::default();
    let (config, options) = match registry.parse(argv) {
        Ok(x) => x,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match registry.execute(config, &options) {
        Ok(outcome) => {
            print_lines(&outcome.summary);
            if !outcome.skipped {
                let dir = &outcome.manifest.config.output_dir;
                let wrote: Vec<String> =
                    outcome.manifest.files.iter().map(|f| format!("wrote {}", dir.join(&f.path).display())).collect();
                print_lines(&wrote);
            }
            0
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
