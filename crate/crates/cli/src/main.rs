//! `elmkit` — build, reshape, and characterize exact energy landscapes of
//! binary equation systems from the command line.
//!
//! The binary is a client of the elmkit HTTP service. By default each run
//! spawns the service in-process on an ephemeral port and talks to it over
//! loopback; `--server` points it at a running instance instead, and
//! `serve` runs one in the foreground.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure (a ground
//! state moved, or a reference table cell mismatched), 3 resource cap.

mod output;
mod reproduce;

use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{ArgGroup, Parser, Subcommand, ValueEnum};
use elmkit_api::{
    BoundRequest, CompareRequest, ElmRequest, ElmResponse, ErrorKind, GenerateRequest,
    HamiltonianSource, InitChoice, SpectrumRequest, TransformSpec,
};
use elmkit_client::{ClientError, ElmkitClient};
use elmkit_core::{datasets, EnergyMode, EnumerateOptions, HamiltonianArtifact, SchemeKind};
use elmkit_service::{serve, spawn_ephemeral, ServiceState};
use serde_json::Value;

use output::{emit, Format, Rendered, RunConfig};
use reproduce::{check_tables, reproduction_csv, reproduction_text, LandscapeInput, TableInputs};

#[derive(Parser)]
#[command(name = "elmkit", version, about, max_term_width = 100)]
struct Cli {
    /// Talk to a running elmkit service instead of spawning one in-process.
    #[arg(long, global = true, value_name = "URL")]
    server: Option<String>,
    /// Worker threads for exhaustive enumeration.
    #[arg(long, global = true, env = "ELMKIT_WORKERS", value_name = "N")]
    workers: Option<usize>,
    /// Refuse exhaustive enumeration above this many variables.
    #[arg(long, global = true, value_name = "N")]
    max_vars: Option<u32>,
    /// Report format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build the binary equation system for factoring N into two odd factors.
    Generate {
        /// The odd number to factor.
        n: u64,
        /// Bit width of the first factor.
        #[arg(long, value_name = "BITS")]
        p_bits: u32,
        /// Bit width of the second factor.
        #[arg(long, value_name = "BITS")]
        q_bits: u32,
        /// Skip the elementary deduction pass over the raw equations.
        #[arg(long)]
        raw: bool,
        /// Write the equation file here instead of inlining it in the report.
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Reshape a system's energy landscape without moving its ground states.
    #[command(group(ArgGroup::new("transform").required(true).args(["deductions", "scheme"])))]
    Elm {
        /// Equation file to transform.
        system: PathBuf,
        /// Add penalty terms from this deduction file.
        #[arg(long, value_name = "FILE")]
        deductions: Option<PathBuf>,
        /// Reweight the equations from their maximum energies.
        #[arg(long, value_enum)]
        scheme: Option<SchemeArg>,
        /// How per-equation maximum energies are estimated.
        #[arg(long, value_enum, default_value = "side", requires = "scheme")]
        mode: ModeArg,
        /// Write the Hamiltonian artifact here.
        #[arg(short, long, value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Exhaustively characterize a Hamiltonian's energy landscape.
    Spectrum {
        /// A Hamiltonian artifact (JSON) or an equation file.
        input: PathBuf,
        /// Keep at most this many ground states in the listing.
        #[arg(long, value_name = "N", default_value_t = 64)]
        ground_state_cap: usize,
    },
    /// Characterize two Hamiltonians and compare their landscapes.
    Compare {
        /// A Hamiltonian artifact (JSON) or an equation file.
        a: PathBuf,
        /// The landscape to compare it against.
        b: PathBuf,
    },
    /// Adiabatic runtime-bound quantities for the interpolation to H_final.
    Bound {
        /// A Hamiltonian artifact (JSON) or an equation file.
        input: PathBuf,
        /// Error budget as a decimal literal, e.g. 0.1; kept exact.
        #[arg(long, value_name = "EPS")]
        epsilon: String,
        /// Interpolation points scanned for the minimum gap.
        #[arg(long, default_value_t = 64, value_name = "N")]
        grid: usize,
        /// Driver Hamiltonian the interpolation starts from.
        #[arg(long, value_enum, default_value = "transverse")]
        hinit: HinitArg,
        /// Transverse-field strength.
        #[arg(long, default_value_t = 1.0, value_name = "C")]
        tf_scale: f64,
    },
    /// Recompute the reference landscape tables from the shipped data files.
    ReproduceTables {
        /// Directory holding 551.eqs, 841.eqs and 841.deductions.
        #[arg(long, default_value = "data", value_name = "DIR")]
        data_dir: PathBuf,
    },
    /// Run the HTTP service in the foreground until interrupted.
    Serve {
        /// Address to listen on.
        #[arg(long, default_value = "127.0.0.1:8080")]
        addr: SocketAddr,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SchemeArg {
    /// λ_i = ⌈E_max / E_i⌉.
    Ceil,
    /// λ_i = 1 at E_max, 2 elsewhere.
    Indicator,
    /// λ_i = 1.
    Uniform,
}

impl From<SchemeArg> for SchemeKind {
    fn from(arg: SchemeArg) -> Self {
        match arg {
            SchemeArg::Ceil => SchemeKind::CeilRatio,
            SchemeArg::Indicator => SchemeKind::Indicator,
            SchemeArg::Uniform => SchemeKind::Uniform,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModeArg {
    /// max(S_L, S_R)² — total, works for any equation.
    Side,
    /// max(S_L − c_R, S_R − c_L)² — tighter, refuses cross-side variables.
    Diff,
}

impl From<ModeArg> for EnergyMode {
    fn from(arg: ModeArg) -> Self {
        match arg {
            ModeArg::Side => EnergyMode::SideMax,
            ModeArg::Diff => EnergyMode::DiffMax,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum HinitArg {
    /// Transverse field; gap behavior depends on `--tf-scale`.
    Transverse,
    /// No driver: H(s) = s·H_final, gap closes at s = 0.
    None,
}

impl HinitArg {
    fn label(self) -> &'static str {
        match self {
            HinitArg::Transverse => "transverse",
            HinitArg::None => "none",
        }
    }
}

impl From<HinitArg> for InitChoice {
    fn from(arg: HinitArg) -> Self {
        match arg {
            HinitArg::Transverse => InitChoice::Transverse,
            HinitArg::None => InitChoice::None,
        }
    }
}

struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: 1,
            message: message.into(),
        }
    }

    fn verification(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<ClientError> for CliError {
    fn from(err: ClientError) -> Self {
        let code = match err.kind() {
            Some(ErrorKind::Verification) => 2,
            Some(ErrorKind::Cap) => 3,
            _ => 1,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // --help and --version land here too; they keep exit code 0.
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let runtime = tokio::runtime::Runtime::new()
        .map_err(|e| CliError::usage(format!("failed to start the async runtime: {e}")))?;
    runtime.block_on(dispatch(cli))
}

async fn dispatch(cli: Cli) -> Result<(), CliError> {
    if let Command::Serve { addr } = cli.command {
        let state = ServiceState {
            default_workers: cli.workers,
        };
        output::print_out(&format!("serving on http://{addr}\n"));
        return serve(addr, state)
            .await
            .map_err(|e| CliError::usage(format!("serve: {e}")));
    }

    let (client, server_label) = connect(&cli.server, cli.workers).await?;
    match &cli.command {
        Command::Generate {
            n,
            p_bits,
            q_bits,
            raw,
            output,
        } => {
            let mut config = RunConfig::new("generate");
            config.push("n", *n);
            config.push("p-bits", *p_bits);
            config.push("q-bits", *q_bits);
            config.push("simplify", !*raw);
            push_output(&mut config, output);
            finish_config(&mut config, cli.format, &server_label);

            let resp = client
                .generate(&GenerateRequest {
                    n: *n,
                    p_bits: *p_bits,
                    q_bits: *q_bits,
                    simplify: !*raw,
                })
                .await?;
            if let Some(path) = output {
                write_file(path, &resp.system)?;
            }
            let written = output.as_ref().map(|p| p.display().to_string());
            let rendered = Rendered {
                json: to_json(&resp)?,
                text: output::generate_text(&resp, written.as_deref()),
                csv: output::generate_csv(&resp),
            };
            emit(cli.format, &config, &rendered);
            Ok(())
        }

        Command::Elm {
            system,
            deductions,
            scheme,
            mode,
            output,
        } => {
            let mut config = RunConfig::new("elm");
            config.push("system", path_string(system));
            let transform = match (deductions, scheme) {
                (Some(path), None) => {
                    config.push("deductions", path_string(path));
                    TransformSpec::Deductions {
                        text: read_file(path)?,
                    }
                }
                (None, Some(scheme)) => {
                    let kind = SchemeKind::from(*scheme);
                    let mode = EnergyMode::from(*mode);
                    config.push("scheme", kind.label());
                    config.push("mode", mode.label());
                    TransformSpec::Weights { scheme: kind, mode }
                }
                // clap's argument group guarantees exactly one is present.
                _ => unreachable!("transform group admits exactly one choice"),
            };
            push_output(&mut config, output);
            finish_config(&mut config, cli.format, &server_label);

            let resp = client
                .elm(&ElmRequest {
                    system: read_file(system)?,
                    transform,
                    verify: true,
                })
                .await?;
            if let Some(path) = output {
                write_file(path, &format!("{}\n", resp.artifact.to_json()))?;
            }
            let written = output.as_ref().map(|p| p.display().to_string());
            let rendered = Rendered {
                json: to_json(&resp)?,
                text: output::elm_text(&resp, written.as_deref()),
                csv: output::elm_csv(&resp),
            };
            emit(cli.format, &config, &rendered);
            if resp.preservation.checked && !resp.preservation.preserved {
                return Err(CliError::verification(format!(
                    "the transform changed the ground-state set; witness {}",
                    resp.preservation.witness.as_deref().unwrap_or("?")
                )));
            }
            Ok(())
        }

        Command::Spectrum {
            input,
            ground_state_cap,
        } => {
            let mut config = RunConfig::new("spectrum");
            config.push("input", path_string(input));
            config.push("ground-state-cap", *ground_state_cap as u64);
            push_enumeration(&mut config, &cli);
            finish_config(&mut config, cli.format, &server_label);

            let resp = client
                .spectrum(&SpectrumRequest {
                    source: read_source(input)?,
                    workers: cli.workers,
                    max_vars: cli.max_vars,
                    ground_state_cap: Some(*ground_state_cap),
                })
                .await?;
            let rendered = Rendered {
                json: to_json(&resp)?,
                text: output::spectrum_text(&resp),
                csv: output::spectrum_csv(&resp),
            };
            emit(cli.format, &config, &rendered);
            Ok(())
        }

        Command::Compare { a, b } => {
            let mut config = RunConfig::new("compare");
            config.push("input-a", path_string(a));
            config.push("input-b", path_string(b));
            push_enumeration(&mut config, &cli);
            finish_config(&mut config, cli.format, &server_label);

            let resp = client
                .compare(&CompareRequest {
                    a: read_source(a)?,
                    b: read_source(b)?,
                    workers: cli.workers,
                })
                .await?;
            let rendered = Rendered {
                json: to_json(&resp)?,
                text: output::compare_text(&resp),
                csv: output::compare_csv(&resp),
            };
            emit(cli.format, &config, &rendered);
            Ok(())
        }

        Command::Bound {
            input,
            epsilon,
            grid,
            hinit,
            tf_scale,
        } => {
            let mut config = RunConfig::new("bound");
            config.push("input", path_string(input));
            config.push("epsilon", epsilon.as_str());
            config.push("grid", *grid as u64);
            config.push("hinit", hinit.label());
            config.push("tf-scale", *tf_scale);
            finish_config(&mut config, cli.format, &server_label);

            let resp = client
                .bound(&BoundRequest {
                    source: read_source(input)?,
                    epsilon: epsilon.clone(),
                    grid: *grid,
                    hinit: (*hinit).into(),
                    tf_scale: *tf_scale,
                })
                .await?;
            let rendered = Rendered {
                json: to_json(&resp)?,
                text: output::bound_text(&resp),
                csv: output::bound_csv(&resp),
            };
            emit(cli.format, &config, &rendered);
            Ok(())
        }

        Command::ReproduceTables { data_dir } => {
            let mut config = RunConfig::new("reproduce-tables");
            config.push("data-dir", path_string(data_dir));
            push_enumeration(&mut config, &cli);
            finish_config(&mut config, cli.format, &server_label);

            let rep = reproduce_run(&client, data_dir, cli.workers).await?;
            let rendered = Rendered {
                json: to_json(&rep)?,
                text: reproduction_text(&rep),
                csv: reproduction_csv(&rep),
            };
            emit(cli.format, &config, &rendered);
            if rep.mismatches > 0 {
                return Err(CliError::verification(format!(
                    "{} of {} asserted cells differ from the reference",
                    rep.mismatches, rep.cells_checked
                )));
            }
            Ok(())
        }

        Command::Serve { .. } => unreachable!("handled before connecting"),
    }
}

async fn connect(
    server: &Option<String>,
    workers: Option<usize>,
) -> Result<(ElmkitClient, String), CliError> {
    match server {
        Some(url) => Ok((ElmkitClient::new(url.clone()), url.clone())),
        None => {
            let state = ServiceState {
                default_workers: workers,
            };
            let (addr, _task) = spawn_ephemeral(state)
                .await
                .map_err(|e| CliError::usage(format!("failed to start the in-process service: {e}")))?;
            Ok((
                ElmkitClient::new(format!("http://{addr}")),
                // Recorded instead of the URL: the ephemeral port would
                // break byte-identical reruns.
                "in-process".to_string(),
            ))
        }
    }
}

/// Exercise the full pipeline over the shipped data files and diff the
/// resulting landscapes against the reference tables.
async fn reproduce_run(
    client: &ElmkitClient,
    data_dir: &Path,
    workers: Option<usize>,
) -> Result<reproduce::Reproduction, CliError> {
    let text_551 = read_file(&data_dir.join("551.eqs"))?;
    let text_841 = read_file(&data_dir.join("841.eqs"))?;
    let deductions_841 = read_file(&data_dir.join("841.deductions"))?;

    let spectrum = |source: HamiltonianSource| async {
        client
            .spectrum(&SpectrumRequest {
                source,
                workers,
                max_vars: None,
                ground_state_cap: None,
            })
            .await
    };
    let weights = |text: &str, scheme: SchemeKind| {
        let request = ElmRequest {
            system: text.to_string(),
            transform: TransformSpec::Weights {
                scheme,
                mode: EnergyMode::SideMax,
            },
            verify: true,
        };
        async move { client.elm(&request).await }
    };
    let artifact_spectrum = |resp: &ElmResponse| {
        spectrum(HamiltonianSource::Artifact(resp.artifact.clone()))
    };
    let uniform = |text: &str| {
        spectrum(HamiltonianSource::System {
            text: text.to_string(),
            weights: None,
        })
    };

    let toy_h0 = uniform(datasets::SYSTEM_TOY_TEXT).await?;
    let toy_elm = weights(datasets::SYSTEM_TOY_TEXT, SchemeKind::CeilRatio).await?;
    let toy_h1 = artifact_spectrum(&toy_elm).await?;

    let h0_551 = uniform(&text_551).await?;
    let elm_ceil = weights(&text_551, SchemeKind::CeilRatio).await?;
    let plan = elm_ceil
        .scheme
        .clone()
        .ok_or_else(|| CliError::usage("the service returned no weight plan"))?;
    let h1_551 = artifact_spectrum(&elm_ceil).await?;
    let elm_indicator = weights(&text_551, SchemeKind::Indicator).await?;
    let h2_551 = artifact_spectrum(&elm_indicator).await?;

    let h0_841 = uniform(&text_841).await?;
    let lines: Vec<&str> = deductions_841
        .lines()
        .filter(|line| {
            let body = line.split('#').next().unwrap_or("").trim();
            !body.is_empty()
        })
        .collect();
    if lines.len() != 2 {
        return Err(CliError::usage(format!(
            "{}: expected 2 deductions, found {}",
            data_dir.join("841.deductions").display(),
            lines.len()
        )));
    }
    let penalties = |text: String| {
        let request = ElmRequest {
            system: text_841.clone(),
            transform: TransformSpec::Deductions { text },
            verify: true,
        };
        async move { client.elm(&request).await }
    };
    let elm_one = penalties(format!("{}\n", lines[0])).await?;
    let h1_841 = artifact_spectrum(&elm_one).await?;
    let elm_two = penalties(deductions_841.clone()).await?;
    let h2_841 = artifact_spectrum(&elm_two).await?;

    let verdict = |resp: &ElmResponse| {
        Some(resp.preservation.checked && resp.preservation.preserved)
    };
    let inputs = TableInputs {
        toy: [
            LandscapeInput {
                report: &toy_h0,
                preserved: None,
            },
            LandscapeInput {
                report: &toy_h1,
                preserved: verdict(&toy_elm),
            },
        ],
        plan_551: &plan,
        sys_551: [
            LandscapeInput {
                report: &h0_551,
                preserved: None,
            },
            LandscapeInput {
                report: &h1_551,
                preserved: verdict(&elm_ceil),
            },
            LandscapeInput {
                report: &h2_551,
                preserved: verdict(&elm_indicator),
            },
        ],
        sys_841: [
            LandscapeInput {
                report: &h0_841,
                preserved: None,
            },
            LandscapeInput {
                report: &h1_841,
                preserved: verdict(&elm_one),
            },
            LandscapeInput {
                report: &h2_841,
                preserved: verdict(&elm_two),
            },
        ],
    };
    Ok(check_tables(&inputs, &data_dir.display().to_string()))
}

fn push_output(config: &mut RunConfig, output: &Option<PathBuf>) {
    if let Some(path) = output {
        config.push("output", path_string(path));
    }
}

fn push_enumeration(config: &mut RunConfig, cli: &Cli) {
    match cli.workers {
        Some(n) => config.push("workers", n as u64),
        None => config.push("workers", "auto"),
    }
    config.push(
        "max-vars",
        cli.max_vars.unwrap_or(EnumerateOptions::default().max_vars),
    );
}

fn finish_config(config: &mut RunConfig, format: Format, server_label: &str) {
    config.push("format", format.label());
    config.push("server", server_label);
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<Value, CliError> {
    serde_json::to_value(value)
        .map_err(|e| CliError::usage(format!("failed to serialize the report: {e}")))
}

fn path_string(path: &Path) -> String {
    path.display().to_string()
}

fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))
}

/// A Hamiltonian input file: artifact JSON if it looks like JSON, an
/// equation file otherwise.
fn read_source(path: &Path) -> Result<HamiltonianSource, CliError> {
    let text = read_file(path)?;
    if text.trim_start().starts_with('{') {
        let artifact = HamiltonianArtifact::from_json(&text)
            .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
        Ok(HamiltonianSource::Artifact(artifact))
    } else {
        Ok(HamiltonianSource::System {
            text,
            weights: None,
        })
    }
}
