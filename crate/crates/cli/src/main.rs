mod commands;
mod manifest;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use parity_core::Error;

use commands::Report;
use manifest::{strip_manifest_flag, RunManifest};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    #[error("input {0} changed since the manifest was written")]
    DigestMismatch(PathBuf),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// 2 for bad input, 3 for resource guards, 4 for protocol misuse.
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(Error::GuardExceeded(_)) => 3,
            CliError::Core(Error::ProtocolViolation(_)) => 4,
            CliError::Core(Error::InconsistentSeeds { .. }) => 1,
            _ => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "parity", version, about = "Parity-encoded qubits: layouts, logical gates and fault checks")]
struct Cli {
    /// Write the run manifest here instead of to stderr.
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// LHZ layout for k logical qubits.
    Layout(commands::LayoutArgs),
    /// Derive and check labels of a code.
    Labels(commands::LabelsArgs),
    /// Labels produced by an encoding circuit.
    EncodeLabels(commands::EncodeLabelsArgs),
    /// Build and check a parity-controlled CNOT between two blocks.
    Pcnot(commands::PcnotArgs),
    /// Logical ZZ..Z rotation by code deformation.
    Rotate(commands::RotateArgs),
    /// Gate teleportation of S or T onto a physical qubit.
    Teleport(commands::TeleportArgs),
    /// Fault injection, exhaustive or Monte Carlo.
    Inject(commands::InjectArgs),
    /// Run a circuit and print its measurement record.
    Run(commands::RunArgs),
    /// Rerun a command from its manifest.
    Replay { manifest: PathBuf },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Layout(_) => "layout",
            Command::Labels(_) => "labels",
            Command::EncodeLabels(_) => "encode-labels",
            Command::Pcnot(_) => "pcnot",
            Command::Rotate(_) => "rotate",
            Command::Teleport(_) => "teleport",
            Command::Inject(_) => "inject",
            Command::Run(_) => "run",
            Command::Replay { .. } => "replay",
        }
    }

    fn inputs(&self) -> Vec<PathBuf> {
        match self {
            Command::Layout(_) => vec![],
            Command::Labels(a) => vec![a.code.clone()],
            Command::EncodeLabels(a) => vec![a.circuit.clone()],
            Command::Pcnot(a) => vec![a.blocks.clone()],
            Command::Rotate(a) => vec![a.code.clone()],
            Command::Teleport(a) => vec![a.code.clone()],
            Command::Inject(a) => vec![a.spec.clone()],
            Command::Run(a) => vec![a.circuit.clone()],
            Command::Replay { manifest } => vec![manifest.clone()],
        }
    }

    /// The seed slot of commands that sample, if any.
    fn seed_mut(&mut self) -> Option<&mut Option<u64>> {
        match self {
            Command::Rotate(a) => Some(&mut a.seed),
            Command::Teleport(a) => Some(&mut a.seed),
            Command::Inject(a) if a.mode == commands::InjectMode::Mc => Some(&mut a.seed),
            Command::Run(a) => Some(&mut a.seed),
            _ => None,
        }
    }

    fn execute(&self) -> Result<Report, CliError> {
        match self {
            Command::Layout(a) => commands::layout(a),
            Command::Labels(a) => commands::labels(a),
            Command::EncodeLabels(a) => commands::encode_labels(a),
            Command::Pcnot(a) => commands::pcnot(a),
            Command::Rotate(a) => commands::rotate(a),
            Command::Teleport(a) => commands::teleport(a),
            Command::Inject(a) => commands::inject(a),
            Command::Run(a) => commands::run(a),
            Command::Replay { manifest } => replay(manifest),
        }
    }
}

fn replay(path: &Path) -> Result<Report, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let m: RunManifest = serde_json::from_str(&text).map_err(Error::from)?;
    m.verify_inputs()?;
    let argv = std::iter::once("parity".to_string()).chain(m.arguments.iter().cloned());
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Usage(e.to_string()))?;
    if matches!(cli.command, Command::Replay { .. }) {
        return Err(CliError::Usage("a manifest cannot replay another replay".into()));
    }
    cli.command.execute()
}

fn run(argv: Vec<String>) -> Result<Report, CliError> {
    let mut cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            std::process::exit(0);
        }
        Err(e) => return Err(CliError::Usage(e.to_string())),
    };
    let mut arguments = strip_manifest_flag(&argv[1..]);
    let seed = cli.command.seed_mut().map(|slot| {
        *slot.get_or_insert_with(|| {
            let s = rand::random::<u64>();
            arguments.extend(["--seed".to_string(), s.to_string()]);
            s
        })
    });
    let report = cli.command.execute()?;
    if !matches!(cli.command, Command::Replay { .. }) {
        let m = RunManifest::new(cli.command.name(), arguments, seed, &cli.command.inputs())?;
        let json = serde_json::to_string_pretty(&m).map_err(Error::from)?;
        match &cli.manifest {
            Some(path) => std::fs::write(path, format!("{json}\n")).map_err(|e| CliError::io(path, e))?,
            None => eprintln!("{json}"),
        }
    }
    Ok(report)
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = writeln!(out, "{}", report.body);
            eprintln!("{}", report.summary);
            ExitCode::from(if report.verified { 0 } else { 1 })
        }
        Err(e) => {
            match &e {
                CliError::Usage(msg) if msg.starts_with("error:") => eprintln!("{}", msg.trim_end()),
                e => eprintln!("error: {e}"),
            }
            ExitCode::from(e.exit_code())
        }
    }
}
