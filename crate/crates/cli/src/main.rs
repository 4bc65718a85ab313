//! `ttdl` — design and simulation toolkit for multicore-fiber true
//! time delay lines and the microwave-photonic FIR filters built on
//! them.
//!
//! Exit codes: 0 success, 1 computation/constraint failure, 2
//! configuration or usage error.

mod commands;
mod config;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{DesignConfig, DiversityConfig, RunConfig, TapSourceConfig};
use error::{config_error, CliError};

#[derive(Parser)]
#[command(
    name = "ttdl",
    version,
    about = "Multicore-fiber true-time-delay and microwave-photonic filter toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandKind,
}

#[derive(Subcommand)]
enum CommandKind {
    /// Analyze refractive-index profiles: n_eff, group delay,
    /// dispersion, slope
    Analyze(CommonArgs),
    /// Design a heterogeneous multicore fiber to a dispersion ladder
    Design(CommonArgs),
    /// Compute an FIR filter response and its figures of merit
    Filter(FilterArgs),
    /// Sweep one parameter and tabulate the FSR
    Sweep(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// JSON run configuration
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output file (default: standard output)
    #[arg(long)]
    output: Option<PathBuf>,
    /// Curve output format; parsing is its validation — `csv` is the
    /// only format today.
    #[arg(long, value_enum, default_value_t = CurveFormat::Csv)]
    #[allow(dead_code)]
    format: CurveFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum CurveFormat {
    Csv,
}

#[derive(Args)]
struct FilterArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Use the built-in devices: the canonical multicavity FBG layout
    /// and the default seven-core fiber design
    #[arg(long)]
    paper_layout: bool,
    /// Operating wavelength of a fiber-link tap source, nm
    #[arg(long)]
    lambda_nm: Option<f64>,
    /// Link length of a fiber-link tap source, km (default 10)
    #[arg(long)]
    length_km: Option<f64>,
    /// FBG readout dimension
    #[arg(long, value_enum)]
    diversity: Option<DiversityKind>,
    /// Core selector for wavelength diversity
    #[arg(long)]
    core: Option<usize>,
    /// Channel wavelength for spatial diversity, nm
    #[arg(long)]
    channel: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum DiversityKind {
    Spatial,
    Wavelength,
}

impl FilterArgs {
    fn has_hetero_flags(&self) -> bool {
        self.lambda_nm.is_some() || self.length_km.is_some()
    }

    fn has_fbg_flags(&self) -> bool {
        self.diversity.is_some() || self.core.is_some() || self.channel.is_some()
    }
}

/// Builds the effective tap source from the config section (if any)
/// plus command-line overrides.
fn resolve_filter_source(
    args: &FilterArgs,
    from_config: Option<TapSourceConfig>,
) -> Result<TapSourceConfig, CliError> {
    let Some(src) = from_config else {
        // Flag-only operation rests on the built-in devices.
        if !args.paper_layout {
            return Err(config_error(
                "filter needs --config or --paper-layout to provide a tap source",
            ));
        }
        return match (args.has_hetero_flags(), args.has_fbg_flags()) {
            (true, true) => Err(config_error(
                "--lambda-nm/--length-km (fiber link) and --diversity/--core/--channel \
                 (FBG device) are mutually exclusive",
            )),
            (false, false) => Err(config_error(
                "choose a tap source: --lambda-nm [--length-km] for the fiber link, or \
                 --diversity with --core/--channel for the FBG device",
            )),
            (true, false) => Ok(TapSourceConfig::HeteroLink {
                design: None,
                lambda_nm: args
                    .lambda_nm
                    .ok_or_else(|| config_error("a fiber-link source needs --lambda-nm"))?,
                length_km: args.length_km.unwrap_or(10.0),
            }),
            (false, true) => Ok(TapSourceConfig::FbgLayout {
                layout: None,
                diversity: diversity_from_flags(args, None)?,
            }),
        };
    };

    match src {
        TapSourceConfig::Explicit { .. } => {
            if args.paper_layout || args.has_hetero_flags() || args.has_fbg_flags() {
                return Err(config_error(
                    "tap-source flags do not apply to an explicit tap source",
                ));
            }
            Ok(src)
        }
        TapSourceConfig::HeteroLink {
            design,
            lambda_nm,
            length_km,
        } => {
            if args.has_fbg_flags() {
                return Err(config_error(
                    "--diversity/--core/--channel do not apply to a fiber-link source",
                ));
            }
            Ok(TapSourceConfig::HeteroLink {
                design: if args.paper_layout { None } else { design },
                lambda_nm: args.lambda_nm.unwrap_or(lambda_nm),
                length_km: args.length_km.unwrap_or(length_km),
            })
        }
        TapSourceConfig::FbgLayout { layout, diversity } => {
            if args.has_hetero_flags() {
                return Err(config_error(
                    "--lambda-nm/--length-km do not apply to an FBG source",
                ));
            }
            Ok(TapSourceConfig::FbgLayout {
                layout: if args.paper_layout { None } else { layout },
                diversity: diversity_from_flags(args, Some(diversity))?,
            })
        }
    }
}

/// Resolves the diversity selection: an explicit --diversity flag
/// rebuilds it (reusing the config selector when the dimension
/// matches); bare --core/--channel adjust a config selection.
fn diversity_from_flags(
    args: &FilterArgs,
    base: Option<DiversityConfig>,
) -> Result<DiversityConfig, CliError> {
    let base_core = match base {
        Some(DiversityConfig::Wavelength { core }) => Some(core),
        _ => None,
    };
    let base_channel = match base {
        Some(DiversityConfig::Spatial { channel_nm }) => Some(channel_nm),
        _ => None,
    };
    match args.diversity {
        Some(DiversityKind::Wavelength) => {
            if args.channel.is_some() {
                return Err(config_error("--channel applies to spatial diversity"));
            }
            Ok(DiversityConfig::Wavelength {
                core: args
                    .core
                    .or(base_core)
                    .ok_or_else(|| config_error("--diversity wavelength needs --core <id>"))?,
            })
        }
        Some(DiversityKind::Spatial) => {
            if args.core.is_some() {
                return Err(config_error("--core applies to wavelength diversity"));
            }
            Ok(DiversityConfig::Spatial {
                channel_nm: args
                    .channel
                    .or(base_channel)
                    .ok_or_else(|| config_error("--diversity spatial needs --channel <nm>"))?,
            })
        }
        None => match base {
            None => Err(config_error(
                "an FBG source needs --diversity spatial|wavelength",
            )),
            Some(DiversityConfig::Wavelength { core }) => {
                if args.channel.is_some() {
                    return Err(config_error("--channel applies to spatial diversity"));
                }
                Ok(DiversityConfig::Wavelength {
                    core: args.core.unwrap_or(core),
                })
            }
            Some(DiversityConfig::Spatial { channel_nm }) => {
                if args.core.is_some() {
                    return Err(config_error("--core applies to wavelength diversity"));
                }
                Ok(DiversityConfig::Spatial {
                    channel_nm: args.channel.unwrap_or(channel_nm),
                })
            }
        },
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        CommandKind::Analyze(a) => {
            let path = a
                .config
                .as_deref()
                .ok_or_else(|| config_error("analyze needs --config with an `analyze` section"))?;
            let cfg = RunConfig::load(path)?
                .analyze
                .ok_or_else(|| config_error("config has no `analyze` section"))?;
            commands::cmd_analyze(&cfg, a.output.as_deref())
        }
        CommandKind::Design(a) => {
            let cfg = match a.config.as_deref() {
                None => DesignConfig::default(),
                Some(p) => RunConfig::load(p)?
                    .design
                    .ok_or_else(|| config_error("config has no `design` section"))?,
            };
            commands::cmd_design(&cfg, a.output.as_deref())
        }
        CommandKind::Filter(f) => {
            let (cfg_source, grid) = match f.common.config.as_deref() {
                None => (None, None),
                Some(p) => {
                    let fc = RunConfig::load(p)?
                        .filter
                        .ok_or_else(|| config_error("config has no `filter` section"))?;
                    (Some(fc.source), fc.grid)
                }
            };
            let source = resolve_filter_source(&f, cfg_source)?;
            commands::cmd_filter(&source, grid, f.common.output.as_deref())
        }
        CommandKind::Sweep(a) => {
            let path = a
                .config
                .as_deref()
                .ok_or_else(|| config_error("sweep needs --config with a `sweep` section"))?;
            let cfg = RunConfig::load(path)?
                .sweep
                .ok_or_else(|| config_error("config has no `sweep` section"))?;
            commands::cmd_sweep(&cfg, a.output.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
