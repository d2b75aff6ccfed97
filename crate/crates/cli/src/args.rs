//! Argument definitions and config resolution.
//!
//! Every config key is accepted as a `--key value` override on every
//! subcommand. Precedence: override flag, then `--config` file, then the
//! built-in defaults. The output directory is `--out-dir`, else
//! `BUBBLEWAVE_OUT`, else the config's `out_dir` (default `out`).

use std::path::PathBuf;

use clap::{Arg, ArgAction, ArgMatches, Command};

use bubblewave::config::KEYS;
use bubblewave::{load_config, SimulationConfig};

use crate::{CliError, CliResult};

/// Environment fallback for the output directory.
pub const OUT_ENV: &str = "BUBBLEWAVE_OUT";

/// Short command-line aliases of config keys.
const ALIASES: &[(&str, &str)] = &[
    ("r0", "R0"),
    ("amplitude", "A"),
    ("frequency", "f"),
    ("t_final", "T"),
    ("a_p", "A_p"),
    ("kappa", "kappa0"),
];

pub const FIGURES: &[&str] = &[
    "fig-overview",
    "fig-high-frequency",
    "fig-model-comparison",
    "fig-noncoated",
    "fig-wave-focusing",
    "fig-wave-probes",
    "fig-oneway-coated",
    "fig-oneway-noncoated",
    "fig-west-comp",
];

fn with_common(cmd: Command) -> Command {
    let mut cmd = cmd
        .args_override_self(true)
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("PATH")
                .value_parser(clap::value_parser!(PathBuf))
                .help("key = value config file"),
        )
        .arg(
            Arg::new("out-dir")
                .long("out-dir")
                .value_name("DIR")
                .value_parser(clap::value_parser!(PathBuf))
                .help("output directory [default: $BUBBLEWAVE_OUT, else ./out]"),
        )
        .arg(
            Arg::new("seed")
                .long("seed")
                .value_name("N")
                .value_parser(clap::value_parser!(u64))
                .help("reserved; recorded in the manifest"),
        );
    for &key in KEYS.iter().filter(|k| **k != "out_dir") {
        let mut arg = Arg::new(key)
            .long(key)
            .value_name("VALUE")
            .allow_hyphen_values(true)
            .help_heading("Config overrides");
        if let Some((_, alias)) = ALIASES.iter().find(|(k, _)| *k == key) {
            arg = arg.visible_alias(*alias);
        }
        cmd = cmd.arg(arg);
    }
    cmd
}

/// The full command tree.
pub fn command() -> Command {
    Command::new("bubblewave")
        .about("Microbubble dynamics and nonlinear ultrasound wave simulations")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(with_common(Command::new("bubble").about("Single bubble under a sinusoidal or recorded drive")))
        .subcommand(with_common(
            Command::new("wave").about("Westervelt wave run with probe traces and snapshots"),
        ))
        .subcommand(with_common(
            Command::new("oneway").about("Wave run, then a bubble per probe driven by its trace"),
        ))
        .subcommand(with_common(
            Command::new("coupled").about("Wave and per-node bubbles coupled through the bubble source"),
        ))
        .subcommand(with_common(
            Command::new("spectrum")
                .about("FFT spectrum and harmonic metrics of a bubble run or a CSV series")
                .arg(
                    Arg::new("input")
                        .long("input")
                        .value_name("CSV")
                        .value_parser(clap::value_parser!(PathBuf))
                        .help("two-or-more column CSV with a header; time in the first column"),
                )
                .arg(
                    Arg::new("column")
                        .long("column")
                        .value_name("N")
                        .default_value("1")
                        .value_parser(clap::value_parser!(usize))
                        .help("zero-based column of the analysed series"),
                )
                .arg(
                    Arg::new("periods")
                        .long("periods")
                        .value_name("N")
                        .default_value("10")
                        .value_parser(clap::value_parser!(f64))
                        .help("analysed window in drive periods, counted back from the end"),
                )
                .arg(
                    Arg::new("points")
                        .long("points")
                        .value_name("N")
                        .default_value("16384")
                        .value_parser(clap::value_parser!(usize)),
                )
                .arg(
                    Arg::new("window")
                        .long("window")
                        .value_name("WINDOW")
                        .default_value("hann")
                        .value_parser(["hann", "none"]),
                ),
        ))
        .subcommand(with_common(
            Command::new("convergence")
                .about("Observed orders of RK4, Newmark and the L1 Caputo scheme")
                .arg(
                    Arg::new("study")
                        .long("study")
                        .value_name("STUDY")
                        .default_value("all")
                        .value_parser(["rk4", "newmark", "l1", "all"]),
                ),
        ))
        .subcommand(with_common(
            Command::new("reproduce")
                .about("Figure presets at desk scale or full scale")
                .arg(
                    Arg::new("figure")
                        .value_name("FIGURE")
                        .required(true)
                        .value_parser(clap::builder::PossibleValuesParser::new(FIGURES)),
                )
                .arg(
                    Arg::new("paper-scale")
                        .long("paper-scale")
                        .action(ArgAction::SetTrue)
                        .help("full parameters and run lengths (minutes of runtime)"),
                ),
        ))
}

/// Builds the config of a subcommand: file, then overrides in key order.
pub fn resolve_config(m: &ArgMatches) -> CliResult<SimulationConfig> {
    let mut cfg = match m.get_one::<PathBuf>("config") {
        Some(path) => load_config(path).map_err(|e| match e {
            bubblewave::Error::Io(io) => CliError::io(path, io),
            other => CliError::Usage(format!("{}: {other}", path.display())),
        })?,
        None => SimulationConfig::default(),
    };
    for &key in KEYS.iter().filter(|k| **k != "out_dir") {
        if let Some(value) = m.get_one::<String>(key) {
            cfg.set(key, value)
                .map_err(|msg| CliError::Usage(format!("--{key}: {msg}")))?;
        }
    }
    cfg.out_dir = resolve_out_dir(m.get_one::<PathBuf>("out-dir").cloned(), &cfg);
    cfg.check().map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(cfg)
}

fn resolve_out_dir(flag: Option<PathBuf>, cfg: &SimulationConfig) -> PathBuf {
    flag.or_else(|| std::env::var_os(OUT_ENV).filter(|v| !v.is_empty()).map(PathBuf::from))
        .unwrap_or_else(|| cfg.out_dir.clone())
}
