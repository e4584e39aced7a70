use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use formbench::agent::{FixtureClient, ModelClient};
use formbench::render::Viewport;
use formbench::scoring::Protocol;
use formbench_server::batch::{self, AgentChoice, EvalPlan};
use formbench_server::clients::{ChatEndpoint, HttpModelClient, HttpTextGenerator};
use formbench_server::{http, Config, ConfigError, Resources, Service, ServiceOptions};
use tracing::{error, info};

const EXIT_PARTIAL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(
    name = "formbench",
    version,
    about = "Form-filling benchmark environment, evaluator and session server"
)]
struct Cli {
    /// TOML configuration file; FORMBENCH_* variables override it.
    #[arg(long, global = true, env = "FORMBENCH_CONFIG")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum AgentArg {
    /// The model configured under [model].
    Model,
    Oracle,
    Noisy,
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP session service.
    Serve,
    /// Generate the gold dataset and its manifest.
    GenerateDataset {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        per_form: usize,
        /// Write context documents with the configured text generator.
        #[arg(long)]
        use_generator: bool,
        /// FORM_ID=PATH: ingest metadata records (JSONL) for a form.
        #[arg(long, value_parser = parse_ingest)]
        ingest: Vec<(String, PathBuf)>,
    },
    /// Run episodes over a slice of the dataset and write field verdicts as CSV.
    RunEval {
        #[arg(long, value_enum, default_value = "model")]
        agent: AgentArg,
        #[arg(long)]
        out: PathBuf,
        /// Comma-separated form ids; all forms when omitted.
        #[arg(long, value_delimiter = ',')]
        forms: Vec<String>,
        #[arg(long)]
        samples_per_form: Option<usize>,
        /// Comma-separated theme ids; the configured themes when omitted.
        #[arg(long, value_delimiter = ',')]
        themes: Vec<String>,
        #[arg(long, default_value_t = Viewport::DEFAULT)]
        viewport: Viewport,
        #[arg(long)]
        ruler: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Overrides the configured transport retry count.
        #[arg(long)]
        max_retries: Option<u32>,
        /// Answer from recorded (prompt digest, response) pairs instead of the network.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Where to write episode logs; the configured log_dir when omitted.
        #[arg(long)]
        log_dir: Option<PathBuf>,
    },
    /// Re-score episode logs and write field verdicts as CSV.
    Score {
        #[arg(required = true)]
        logs: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-render an episode log to one PNG per step.
    Replay {
        log: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
}

fn parse_ingest(s: &str) -> Result<(String, PathBuf), String> {
    let (form, path) = s.split_once('=').ok_or("expected FORM_ID=PATH")?;
    Ok((form.to_string(), PathBuf::from(path)))
}

enum Failure {
    Config(String),
    Partial(String),
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn resources(config: &Config) -> Result<Resources, Failure> {
    Resources::load(config).map_err(|e| Failure::Config(e.to_string()))
}

fn create_file(path: &PathBuf) -> Result<std::fs::File, Failure> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::Partial(format!("{}: {e}", dir.display())))?;
    }
    std::fs::File::create(path).map_err(|e| Failure::Partial(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), Failure> {
    let config = Config::load(cli.config.as_deref())?;
    match cli.command {
        Command::Serve => {
            let resources = resources(&config)?;
            let service = Arc::new(Service::new(
                resources,
                ServiceOptions::from_config(&config),
            ));
            let runtime =
                tokio::runtime::Runtime::new().map_err(|e| Failure::Partial(e.to_string()))?;
            runtime.block_on(async {
                let listener = tokio::net::TcpListener::bind(&config.listen)
                    .await
                    .map_err(|e| {
                        Failure::Config(format!("cannot listen on {}: {e}", config.listen))
                    })?;
                info!(address = %config.listen, "serving");
                axum::serve(listener, http::router(service))
                    .with_graceful_shutdown(async {
                        let _ = tokio::signal::ctrl_c().await;
                    })
                    .await
                    .map_err(|e| Failure::Partial(e.to_string()))
            })
        }
        Command::GenerateDataset {
            out,
            seed,
            per_form,
            use_generator,
            ingest,
        } => {
            let catalog =
                Resources::load_catalog(&config).map_err(|e| Failure::Config(e.to_string()))?;
            let generator = if use_generator {
                Some(HttpTextGenerator(ChatEndpoint::from_config(
                    &config.generator,
                )?))
            } else {
                None
            };
            let dataset = batch::generate_dataset(
                &catalog,
                per_form,
                seed,
                generator.as_ref().map(|g| g as _),
                &ingest,
                &out,
            )
            .map_err(|e| Failure::Partial(e.to_string()))?;
            let m = dataset.manifest();
            println!(
                "wrote {} records ({} field-value pairs) for {} forms to {}",
                m.record_count,
                m.pair_count,
                m.form_count,
                out.display()
            );
            Ok(())
        }
        Command::RunEval {
            agent,
            out,
            forms,
            samples_per_form,
            themes,
            viewport,
            ruler,
            seed,
            max_retries,
            fixtures,
            log_dir,
        } => {
            let resources = resources(&config)?;
            let choice = match agent {
                AgentArg::Oracle => AgentChoice::Oracle,
                AgentArg::Noisy => AgentChoice::Noisy { seed },
                AgentArg::Model => {
                    let client: Arc<dyn ModelClient> = match &fixtures {
                        Some(path) => {
                            let text = std::fs::read_to_string(path)
                                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
                            Arc::new(
                                FixtureClient::from_jsonl(config.model.model.clone(), &text)
                                    .map_err(|e| {
                                        Failure::Config(format!("{}: {e}", path.display()))
                                    })?,
                            )
                        }
                        None => {
                            Arc::new(HttpModelClient(ChatEndpoint::from_config(&config.model)?))
                        }
                    };
                    AgentChoice::Model {
                        client,
                        max_retries: max_retries.unwrap_or(config.model.max_retries),
                    }
                }
            };
            let plan = EvalPlan {
                forms,
                samples_per_form,
                themes: if themes.is_empty() {
                    config.themes.clone()
                } else {
                    themes
                },
                viewport,
                ruler_on: ruler,
                seed,
                step_cap: config.step_cap,
                max_in_flight: config.max_in_flight,
                log_dir: Some(log_dir.unwrap_or(config.log_dir.clone())),
            };
            let summary = batch::run_eval(&resources, &plan, &choice).map_err(|e| match e {
                batch::BatchError::Unknown { .. } => Failure::Config(e.to_string()),
                other => Failure::Partial(other.to_string()),
            })?;
            batch::write_rows(create_file(&out)?, &summary.rows)
                .map_err(|e| Failure::Partial(e.to_string()))?;
            println!(
                "{} episodes, {} failed; field value accuracy {:.4} (state-strict), {:.4} (output-scan)",
                summary.episodes,
                summary.failures.len(),
                summary.value_accuracy(Protocol::StateStrict),
                summary.value_accuracy(Protocol::OutputScan)
            );
            if summary.failures.is_empty() {
                Ok(())
            } else {
                Err(Failure::Partial(format!(
                    "{} episode(s) failed",
                    summary.failures.len()
                )))
            }
        }
        Command::Score { logs, out } => {
            let resources = resources(&config)?;
            let mut rows = Vec::new();
            let mut failed = 0;
            for path in &logs {
                let scored = batch::read_log(path).and_then(|log| {
                    let report = batch::score_log(&resources, &log)?;
                    let cfg = &log.header.session;
                    Ok(batch::eval_rows(
                        &log.header.agent,
                        &cfg.theme_id,
                        cfg.ruler_on,
                        log.aborted.is_some(),
                        &report,
                    ))
                });
                match scored {
                    Ok(r) => rows.extend(r),
                    Err(e) => {
                        failed += 1;
                        error!(log = %path.display(), error = %e, "cannot score");
                    }
                }
            }
            batch::write_rows(create_file(&out)?, &rows)
                .map_err(|e| Failure::Partial(e.to_string()))?;
            println!("scored {} of {} logs", logs.len() - failed, logs.len());
            if failed == 0 {
                Ok(())
            } else {
                Err(Failure::Partial(format!(
                    "{failed} log(s) could not be scored"
                )))
            }
        }
        Command::Replay { log, out_dir } => {
            let resources = resources(&config)?;
            let log = batch::read_log(&log).map_err(|e| Failure::Partial(e.to_string()))?;
            let (frames, mismatches) = batch::export_frames(&resources, &log, &out_dir)
                .map_err(|e| Failure::Partial(e.to_string()))?;
            println!("wrote {frames} frames to {}", out_dir.display());
            if mismatches.is_empty() {
                Ok(())
            } else {
                for m in &mismatches {
                    error!("replay mismatch: {m}");
                }
                Err(Failure::Partial(format!(
                    "{} replay mismatch(es)",
                    mismatches.len()
                )))
            }
        }
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(message)) => {
            error!("configuration error: {message}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Partial(message)) => {
            error!("{message}");
            ExitCode::from(EXIT_PARTIAL)
        }
    }
}
