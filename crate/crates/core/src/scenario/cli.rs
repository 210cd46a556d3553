use std::ffi::OsString;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{Arg, ArgAction, ArgMatches, Command};

use super::{emit_golden, run_scenario, OutputFormat, ParamValue, ScenarioConfig, ScenarioKind};
use crate::error::{Error, Result};

/// The `rqte` command, with one subcommand per scenario whose flags are
/// generated from the scenario's parameter table.
pub fn command() -> Command {
    let mut cmd = Command::new("rqte")
        .version(env!("CARGO_PKG_VERSION"))
        .about("Reproducible numerical experiments for the relativistic transfer equation")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(
            Arg::new("config")
                .long("config")
                .value_name("FILE")
                .global(true)
                .value_parser(clap::value_parser!(PathBuf))
                .help("JSON config or a manifest from an earlier run; flags override it"),
        )
        .arg(
            Arg::new("out")
                .long("out")
                .value_name("DIR")
                .global(true)
                .value_parser(clap::value_parser!(PathBuf))
                .help("output directory [default: .]"),
        )
        .arg(
            Arg::new("format")
                .long("format")
                .value_name("FORMAT")
                .global(true)
                .value_parser(["csv", "json"])
                .help("results table format [default: csv]"),
        )
        .arg(
            Arg::new("golden")
                .long("golden")
                .global(true)
                .action(ArgAction::SetTrue)
                .help("write <scenario>.golden.csv to the output directory instead of a normal run"),
        );
    for kind in ScenarioKind::ALL {
        let mut sub = Command::new(kind.name()).about(kind.about());
        for spec in kind.params() {
            sub = sub.arg(
                Arg::new(spec.key)
                    .long(spec.key)
                    .value_name("VALUE")
                    .allow_negative_numbers(true)
                    .help(format!("{} [default: {}]", spec.help, spec.default)),
            );
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

struct Invocation {
    config: ScenarioConfig,
    golden: bool,
}

fn clap_error(e: clap::Error) -> Error {
    let text = e.to_string();
    let first = text.lines().find(|l| !l.trim().is_empty()).unwrap_or("invalid arguments");
    Error::validation(first.trim_start_matches("error: ").trim().to_owned())
}

fn from_matches(m: &ArgMatches) -> Result<Invocation> {
    let (name, sub) = m.subcommand().ok_or_else(|| Error::validation("no scenario given"))?;
    let kind: ScenarioKind = name.parse()?;
    let mut config = match sub.get_one::<PathBuf>("config") {
        Some(path) => ScenarioConfig::from_json_file(path, Some(kind))?,
        None => ScenarioConfig::new(kind),
    };
    for spec in kind.params() {
        if let Some(raw) = sub.get_one::<String>(spec.key) {
            let value = ParamValue::parse_like(&spec.default, spec.key, raw)?;
            config.params.insert(spec.key.to_owned(), value);
        }
    }
    if let Some(out) = sub.get_one::<PathBuf>("out") {
        config.output_path = out.clone();
    }
    if let Some(fmt) = sub.get_one::<String>("format") {
        config.format = fmt.parse::<OutputFormat>()?;
    }
    config.resolved_params()?;
    Ok(Invocation { config, golden: sub.get_flag("golden") })
}

/// Parses command-line arguments (including the program name) into a config.
pub fn config_from_args<I, T>(args: I) -> Result<ScenarioConfig>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let m = command().try_get_matches_from(args).map_err(clap_error)?;
    Ok(from_matches(&m)?.config)
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Full command-line entry point; returns the process exit status.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let m = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    0
                }
                _ => {
                    eprintln!("error: {}", one_line(&clap_error(e).to_string()));
                    2
                }
            };
        }
    };
    let outcome = from_matches(&m).and_then(|inv| {
        if inv.golden {
            let path = emit_golden(&inv.config, &inv.config.output_path)?;
            println!("{}", path.display());
        } else {
            let run = run_scenario(&inv.config)?;
            println!("{}", run.results.display());
            println!("{}", run.manifest.display());
        }
        Ok(())
    });
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", one_line(&e.to_string()));
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn command_is_well_formed() {
        command().debug_assert();
    }

    #[test]
    fn flags_become_params() {
        let cfg = config_from_args(["rqte", "harmonic", "--omega", "2", "--n-max", "5", "--format", "json"]).unwrap();
        assert_eq!(cfg.scenario, ScenarioKind::Harmonic);
        assert_eq!(cfg.params["omega"], ParamValue::Float(2.0));
        assert_eq!(cfg.params["n-max"], ParamValue::Int(5));
        assert_eq!(cfg.format, OutputFormat::Json);
        let neg = config_from_args(["rqte", "dirac", "--vz", "-0.6"]).unwrap();
        assert_eq!(neg.params["vz"], ParamValue::Float(-0.6));
    }

    #[test]
    fn bad_flags_are_validation_errors() {
        for args in [
            vec!["rqte", "harmonic", "--sigma", "1"],
            vec!["rqte", "nonsense"],
            vec!["rqte", "box", "--n-max", "two"],
            vec!["rqte", "box", "--format", "xml"],
        ] {
            let e = config_from_args(args.clone()).unwrap_err();
            assert_eq!(e.exit_code(), 2, "{args:?}");
            assert!(!e.to_string().contains('\n'));
        }
    }

    #[test]
    fn flags_override_config_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, r#"{"scenario":"box","params":{"l":2,"n-max":3},"format":"json"}"#).unwrap();
        let p = path.to_str().unwrap();
        let cfg = config_from_args(["rqte", "box", "--config", p, "--l", "3", "--format", "csv"]).unwrap();
        assert_eq!(cfg.params["l"], ParamValue::Float(3.0));
        assert_eq!(cfg.params["n-max"], ParamValue::Int(3));
        assert_eq!(cfg.format, OutputFormat::Csv);
    }
}
