//! The `tracelens` command line and its HTTP API.

pub mod api;
pub mod server;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::{BufReader, Write};
use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use tracelens::ingest::{generate, load_recording, split_sessions, Recording};
use tracelens::render::{render_score_svg, render_track_svg, RenderOptions};
use tracelens::report::{analyze, track_view, AnalysisReport, Config};
use tracelens::scoring::{compare, CompareInput};
use tracelens::track::FilterSpec;

pub const CONFIG_ENV: &str = "TRACELENS_CONFIG";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Io(_) => 3,
        }
    }

    pub fn io(path: &Path, e: std::io::Error) -> Self {
        CliError::Io(format!("{}: {e}", path.display()))
    }
}

#[derive(Debug, Parser)]
#[command(name = "tracelens", version, about = "Analyse recorded IDE interactions")]
struct Cli {
    /// Config file (TOML, or JSON by extension). Defaults to $TRACELENS_CONFIG.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Validate a recording and print a short summary.
    Ingest { file: PathBuf },
    /// Run the full analysis and write `<id>.report.json`.
    Analyze {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Re-run even when an up-to-date report exists.
        #[arg(long)]
        force: bool,
    },
    /// Write `<id>.track.svg` and `<id>.score.svg`.
    Render {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        lod: u32,
        #[arg(long)]
        filter: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare two or more recordings.
    Compare {
        #[arg(required = true, num_args = 2..)]
        files: Vec<PathBuf>,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a synthetic recording and its `<stem>.truth.json`.
    Generate {
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
        /// Scenario parameter override, `key=value`; repeatable.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        set: Vec<String>,
    },
    /// Serve the read-only JSON API over a directory of recordings.
    Serve {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
    },
}

pub fn load_recording_file(path: &Path) -> Result<Recording, CliError> {
    let file = fs::File::open(path).map_err(|e| CliError::io(path, e))?;
    load_recording(BufReader::new(file)).map_err(|e| match e {
        tracelens::ingest::LoadError::Io(io) => CliError::io(path, io),
        other => CliError::Validation(format!("{}: {other}", path.display())),
    })
}

/// `--config` wins over the environment; neither means defaults.
pub fn resolve_config(flag: Option<&Path>, env: Option<OsString>) -> Result<Config, CliError> {
    let path = flag.map(Path::to_path_buf).or_else(|| env.filter(|v| !v.is_empty()).map(PathBuf::from));
    match path {
        None => Ok(Config::default()),
        Some(p) => Config::load(&p).map_err(|e| match e {
            tracelens::report::ConfigError::Io { .. } => CliError::Io(e.to_string()),
            other => CliError::Validation(format!("{}: {other}", p.display())),
        }),
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

fn out_dir(out: Option<PathBuf>, file: &Path) -> PathBuf {
    out.unwrap_or_else(|| file.parent().map(Path::to_path_buf).unwrap_or_default())
}

fn analysis_failed(e: impl std::fmt::Display) -> CliError {
    CliError::Validation(e.to_string())
}

/// Run the CLI; returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    0
                }
                _ => 1,
            };
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    let config = || resolve_config(cli.config.as_deref(), std::env::var_os(CONFIG_ENV));
    let say = |stdout: &mut dyn Write, text: String| writeln!(stdout, "{text}").map_err(|e| CliError::Io(e.to_string()));
    match cli.command {
        Command::Ingest { ref file } => {
            let config = config()?;
            let rec = load_recording_file(file)?;
            let sessions = split_sessions(&rec, config.ingest.long_idle_ms).len();
            say(
                stdout,
                format!(
                    "{}: {} events, {} files, {} sessions, {} ms",
                    rec.recording_id,
                    rec.events.len(),
                    rec.files.len(),
                    sessions,
                    rec.duration_ms()
                ),
            )
        }
        Command::Analyze { ref file, ref out, force } => {
            let config = config()?;
            let rec = load_recording_file(file)?;
            let path = out_dir(out.clone(), file).join(format!("{}.report.json", rec.recording_id));
            let cached = fs::read_to_string(&path).ok().and_then(|t| AnalysisReport::from_json(&t).ok());
            if !force && cached.is_some_and(|r| r.is_current(&rec, &config)) {
                return say(stdout, format!("{} is up to date", path.display()));
            }
            let analysis = analyze(&rec, &config).map_err(analysis_failed)?;
            write_file(&path, &analysis.report.to_json())?;
            say(stdout, format!("wrote {}", path.display()))
        }
        Command::Render {
            ref file,
            lod,
            ref filter,
            ref out,
        } => {
            let config = config()?;
            let rec = load_recording_file(file)?;
            let filter = FilterSpec::parse(filter.as_deref().unwrap_or("")).map_err(|e| CliError::Usage(e.to_string()))?;
            let analysis = analyze(&rec, &config).map_err(analysis_failed)?;
            let anchors = analysis.report.anchors();
            let track = track_view(&rec, &analysis.index, &filter, 0, &anchors).map_err(analysis_failed)?;
            let options = RenderOptions {
                lod,
                anchors,
                show_edges: tracelens::Category::ALL
                    .iter()
                    .map(|c| (*c, !filter.edges_disabled.contains(c)))
                    .collect(),
                ..RenderOptions::default()
            };
            let dir = out_dir(out.clone(), file);
            let track_path = dir.join(format!("{}.track.svg", rec.recording_id));
            let score_path = dir.join(format!("{}.score.svg", rec.recording_id));
            write_file(&track_path, &render_track_svg(&track, &analysis.index, &options))?;
            write_file(&score_path, &render_score_svg(&analysis.report.trajectory, &options))?;
            say(stdout, format!("wrote {} and {}", track_path.display(), score_path.display()))
        }
        Command::Compare { ref files, ref out } => {
            let config = config()?;
            let recs = files.iter().map(|f| load_recording_file(f)).collect::<Result<Vec<_>, _>>()?;
            let reports = recs
                .iter()
                .map(|r| analyze(r, &config).map(|a| a.report).map_err(analysis_failed))
                .collect::<Result<Vec<_>, _>>()?;
            let inputs: Vec<CompareInput<'_>> = recs
                .iter()
                .zip(&reports)
                .map(|(recording, r)| CompareInput {
                    recording,
                    summary: &r.summary,
                    trajectory: &r.trajectory,
                })
                .collect();
            let report = compare(&inputs, &config.track.ordering).map_err(|e| CliError::Usage(e.to_string()))?;
            let mut text = serde_json::to_string_pretty(&report).expect("comparison serializes");
            text.push('\n');
            match out {
                Some(p) => {
                    write_file(p, &text)?;
                    say(stdout, format!("wrote {}", p.display()))
                }
                None => stdout.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string())),
            }
        }
        Command::Generate {
            ref scenario,
            seed,
            ref out,
            ref set,
        } => {
            let mut overrides = BTreeMap::new();
            for kv in set {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got {kv:?}")))?;
                overrides.insert(k.to_string(), v.to_string());
            }
            let (rec, truth) = generate(scenario, seed, &overrides).map_err(|e| CliError::Usage(e.to_string()))?;
            write_file(out, &rec.to_ndjson())?;
            let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            let truth_path = out.with_file_name(format!("{stem}.truth.json"));
            let mut text = serde_json::to_string_pretty(&truth).expect("truth serializes");
            text.push('\n');
            write_file(&truth_path, &text)?;
            say(
                stdout,
                format!("wrote {} ({} events) and {}", out.display(), rec.events.len(), truth_path.display()),
            )
        }
        Command::Serve { ref dir, port, ref host } => {
            let config = config()?;
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .map_err(|e| CliError::Usage(format!("bad address {host}:{port}: {e}")))?;
            let state = api::ApiState::load_dir(dir, config)?;
            let n = state.entries.len();
            let runtime = tokio::runtime::Runtime::new().map_err(|e| CliError::Io(e.to_string()))?;
            runtime
                .block_on(server::serve(state, addr, |bound| {
                    eprintln!("serving {n} recordings from {} on http://{bound}", dir.display());
                }))
                .map_err(|e| CliError::Io(e.to_string()))
        }
    }
}
