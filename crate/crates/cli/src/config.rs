//! Run configuration: command-line flags, `key = value` config files, and
//! the effective configuration echoed into every output header.

use std::collections::BTreeSet;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use squeeze_hpm::flow::MAX_ORDER;
use squeeze_hpm::oracle::DEFAULT_STEPS;
use squeeze_hpm::sweep::{
    UncertainParam, DEFAULT_ALPHA_SAMPLES, DEFAULT_ETA_POINTS, DEFAULT_SPREAD,
};
use squeeze_hpm::{Field, FlowParams, HpmOptions, Interval};

use crate::error::CliError;
use crate::format::num;

#[derive(Debug, Parser)]
#[command(
    name = "ihpm",
    version,
    about = "Interval homotopy-perturbation solver for MHD squeezing nanofluid flow"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandLine,
}

#[derive(Debug, Subcommand)]
pub enum CommandLine {
    /// Crisp series solve: profiles and Nusselt number.
    Solve(Opts),
    /// Envelope bands over an uncertain parameter box.
    Sweep(Opts),
    /// Series-vs-shooting error report per order.
    Validate(Opts),
    /// Pairwise sensitivity ranking of S, A and M.
    Report(Opts),
}

impl CommandLine {
    pub fn split(self) -> (Command, Opts) {
        match self {
            CommandLine::Solve(o) => (Command::Solve, o),
            CommandLine::Sweep(o) => (Command::Sweep, o),
            CommandLine::Validate(o) => (Command::Validate, o),
            CommandLine::Report(o) => (Command::Report, o),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Solve,
    Sweep,
    Validate,
    Report,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Validate => "validate",
            Command::Report => "report",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    fn name(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Raw flag values; every field is optional so that config files can fill
/// the gaps.
#[derive(Debug, Clone, Default, Args)]
pub struct Opts {
    /// Flat `key = value` file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,

    /// Squeeze number.
    #[arg(long = "S", alias = "base-S", allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Suction/injection parameter.
    #[arg(long = "A", alias = "base-A", allow_negative_numbers = true)]
    pub a: Option<f64>,
    /// Hartmann number.
    #[arg(long = "M", alias = "base-M", allow_negative_numbers = true)]
    pub m: Option<f64>,
    #[arg(long = "Pr", allow_negative_numbers = true)]
    pub pr: Option<f64>,
    #[arg(long = "Nb", allow_negative_numbers = true)]
    pub nb: Option<f64>,
    #[arg(long = "Nt", allow_negative_numbers = true)]
    pub nt: Option<f64>,
    #[arg(long = "Le", allow_negative_numbers = true)]
    pub le: Option<f64>,

    /// Maximum perturbation order.
    #[arg(long)]
    pub order: Option<usize>,
    /// Auto-stop tolerance on the newest term, or `none`.
    #[arg(long = "auto-tol", value_parser = parse_auto_tol)]
    pub auto_tol: Option<AutoTol>,

    /// Uncertain parameters, e.g. `S,M`.
    #[arg(long, value_delimiter = ',', value_parser = parse_param)]
    pub uncertain: Vec<UncertainParam>,
    /// Relative spread applied to each `--uncertain` parameter.
    #[arg(long)]
    pub spread: Option<f64>,
    /// Explicit interval, e.g. `S=0.95:1.05` or `M=1±5%`.
    #[arg(long, value_delimiter = ',', value_parser = parse_interval_entry)]
    pub interval: Vec<(UncertainParam, Interval)>,
    #[arg(long = "alpha-samples")]
    pub alpha_samples: Option<usize>,
    #[arg(long = "eta-points")]
    pub eta_points: Option<usize>,
    #[arg(long = "oracle-steps")]
    pub oracle_steps: Option<usize>,

    /// Output path; stdout when omitted or `-`.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write the per-order polynomial coefficients as JSON to this path.
    #[arg(long = "dump-terms")]
    pub dump_terms: Option<PathBuf>,
    /// Profile fields written by `sweep`, e.g. `f,fprime`.
    #[arg(long, value_delimiter = ',', value_parser = parse_field)]
    pub fields: Vec<Field>,
}

/// Wrapper so that `none` can disable the auto-stop from a flag or file.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AutoTol(pub Option<f64>);

fn parse_auto_tol(s: &str) -> Result<AutoTol, String> {
    match s.trim() {
        "none" | "off" => Ok(AutoTol(None)),
        other => {
            let tol: f64 = other.parse().map_err(|_| format!("{other:?} is not a tolerance"))?;
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(format!("auto-tol must be positive, got {other}"));
            }
            Ok(AutoTol(Some(tol)))
        }
    }
}

fn parse_param(s: &str) -> Result<UncertainParam, String> {
    UncertainParam::parse(s).ok_or_else(|| format!("unknown uncertain parameter {s:?} (expected S, A or M)"))
}

fn parse_field(s: &str) -> Result<Field, String> {
    Field::parse(s).ok_or_else(|| format!("unknown field {s:?} (expected f, fprime, theta or phi)"))
}

fn parse_interval_entry(s: &str) -> Result<(UncertainParam, Interval), String> {
    let (name, range) = s
        .split_once('=')
        .ok_or_else(|| format!("expected <param>=<interval>, got {s:?}"))?;
    let param = parse_param(name)?;
    let iv = Interval::from_str(range).map_err(|e| e.to_string())?;
    Ok((param, iv))
}

fn parse_value<T: FromStr>(key: &str, value: &str) -> Result<T, CliError> {
    value
        .trim()
        .parse()
        .map_err(|_| CliError::Usage(format!("config key {key}: cannot parse {value:?}")))
}

fn parse_list<T>(
    key: &str,
    value: &str,
    item: impl Fn(&str) -> Result<T, String>,
) -> Result<Vec<T>, CliError> {
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| item(s).map_err(|e| CliError::Usage(format!("config key {key}: {e}"))))
        .collect()
}

impl Opts {
    /// Parses a flat `key = value` file. Blank lines and `#` comments are
    /// skipped; a `command` key, if present, must match `command`.
    pub fn from_config_text(text: &str, command: Command) -> Result<Opts, CliError> {
        let mut opts = Opts::default();
        let mut seen = BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: expected key = value", lineno + 1))
            })?;
            let (key, value) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(CliError::Usage(format!("config key {key} given twice")));
            }
            let text_path = |v: &str| (v != "-").then(|| PathBuf::from(v));
            match key {
                "command" => {
                    if value != command.name() {
                        return Err(CliError::Usage(format!(
                            "config is for command {value:?}, not {:?}",
                            command.name()
                        )));
                    }
                }
                "S" | "base-S" => opts.s = Some(parse_value(key, value)?),
                "A" | "base-A" => opts.a = Some(parse_value(key, value)?),
                "M" | "base-M" => opts.m = Some(parse_value(key, value)?),
                "Pr" => opts.pr = Some(parse_value(key, value)?),
                "Nb" => opts.nb = Some(parse_value(key, value)?),
                "Nt" => opts.nt = Some(parse_value(key, value)?),
                "Le" => opts.le = Some(parse_value(key, value)?),
                "order" => opts.order = Some(parse_value(key, value)?),
                "auto-tol" => {
                    opts.auto_tol = Some(
                        parse_auto_tol(value)
                            .map_err(|e| CliError::Usage(format!("config key {key}: {e}")))?,
                    )
                }
                "uncertain" => opts.uncertain = parse_list(key, value, parse_param)?,
                "spread" => opts.spread = Some(parse_value(key, value)?),
                "interval" => opts.interval = parse_list(key, value, parse_interval_entry)?,
                "alpha-samples" => opts.alpha_samples = Some(parse_value(key, value)?),
                "eta-points" => opts.eta_points = Some(parse_value(key, value)?),
                "oracle-steps" => opts.oracle_steps = Some(parse_value(key, value)?),
                "out" => opts.out = text_path(value),
                "format" => {
                    opts.format = Some(match value {
                        "csv" => Format::Csv,
                        "json" => Format::Json,
                        _ => return Err(CliError::Usage(format!("config key format: {value:?}"))),
                    })
                }
                "dump-terms" => opts.dump_terms = text_path(value),
                "fields" => opts.fields = parse_list(key, value, parse_field)?,
                _ => return Err(CliError::Usage(format!("unknown config key {key:?}"))),
            }
        }
        Ok(opts)
    }

    /// Values set in `flags` win over values in `self`.
    pub fn overlay(self, flags: Opts) -> Opts {
        fn pick<T>(flag: Vec<T>, file: Vec<T>) -> Vec<T> {
            if flag.is_empty() {
                file
            } else {
                flag
            }
        }
        Opts {
            config: flags.config.or(self.config),
            s: flags.s.or(self.s),
            a: flags.a.or(self.a),
            m: flags.m.or(self.m),
            pr: flags.pr.or(self.pr),
            nb: flags.nb.or(self.nb),
            nt: flags.nt.or(self.nt),
            le: flags.le.or(self.le),
            order: flags.order.or(self.order),
            auto_tol: flags.auto_tol.or(self.auto_tol),
            uncertain: pick(flags.uncertain, self.uncertain),
            spread: flags.spread.or(self.spread),
            interval: pick(flags.interval, self.interval),
            alpha_samples: flags.alpha_samples.or(self.alpha_samples),
            eta_points: flags.eta_points.or(self.eta_points),
            oracle_steps: flags.oracle_steps.or(self.oracle_steps),
            out: flags.out.or(self.out),
            format: flags.format.or(self.format),
            dump_terms: flags.dump_terms.or(self.dump_terms),
            fields: pick(flags.fields, self.fields),
        }
    }
}

/// Fully resolved configuration of one run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: FlowParams,
    pub hpm: HpmOptions,
    pub uncertain: Vec<UncertainParam>,
    pub spread: f64,
    pub intervals: Vec<(UncertainParam, Interval)>,
    pub alpha_samples: usize,
    pub eta_points: usize,
    pub oracle_steps: usize,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub dump_terms: Option<PathBuf>,
    pub fields: Vec<Field>,
}

impl RunConfig {
    /// Fills defaults and checks ranges.
    pub fn resolve(command: Command, opts: Opts) -> Result<RunConfig, CliError> {
        let d = FlowParams::default();
        let params = FlowParams {
            s: opts.s.unwrap_or(d.s),
            a: opts.a.unwrap_or(d.a),
            m: opts.m.unwrap_or(d.m),
            pr: opts.pr.unwrap_or(d.pr),
            nb: opts.nb.unwrap_or(d.nb),
            nt: opts.nt.unwrap_or(d.nt),
            le: opts.le.unwrap_or(d.le),
        };
        params.validate().map_err(|e| CliError::Usage(e.to_string()))?;

        let defaults = HpmOptions::default();
        let hpm = HpmOptions {
            max_order: opts.order.unwrap_or(defaults.max_order),
            auto_tol: opts.auto_tol.map_or(defaults.auto_tol, |t| t.0),
        };
        if hpm.max_order > MAX_ORDER {
            return Err(CliError::Usage(format!(
                "--order {} exceeds the maximum of {MAX_ORDER}",
                hpm.max_order
            )));
        }

        let spread = opts.spread.unwrap_or(DEFAULT_SPREAD);
        if !spread.is_finite() || spread < 0.0 {
            return Err(CliError::Usage(format!("--spread must be >= 0, got {spread}")));
        }

        let mut uncertain = Vec::new();
        for p in opts.uncertain {
            if !uncertain.contains(&p) {
                uncertain.push(p);
            }
        }
        let mut intervals: Vec<(UncertainParam, Interval)> = Vec::new();
        for (p, iv) in opts.interval {
            if intervals.iter().any(|(q, _)| *q == p) {
                return Err(CliError::Usage(format!("--interval given twice for {p}")));
            }
            intervals.push((p, iv));
        }

        let format = opts.format.unwrap_or(match command {
            Command::Solve | Command::Sweep => Format::Csv,
            Command::Validate | Command::Report => Format::Json,
        });
        let fields = if opts.fields.is_empty() {
            Field::RANKED.to_vec()
        } else {
            let mut fields = opts.fields;
            fields.dedup();
            fields
        };

        let cfg = RunConfig {
            command,
            params,
            hpm,
            uncertain,
            spread,
            intervals,
            alpha_samples: opts.alpha_samples.unwrap_or(DEFAULT_ALPHA_SAMPLES),
            eta_points: opts.eta_points.unwrap_or(DEFAULT_ETA_POINTS),
            oracle_steps: opts.oracle_steps.unwrap_or(DEFAULT_STEPS),
            out: opts.out.filter(|p| p.as_os_str() != "-"),
            format,
            dump_terms: opts.dump_terms,
            fields,
        };
        if cfg.alpha_samples < 2 {
            return Err(CliError::Usage("--alpha-samples must be >= 2".into()));
        }
        if cfg.eta_points < 2 {
            return Err(CliError::Usage("--eta-points must be >= 2".into()));
        }
        Ok(cfg)
    }

    /// Effective configuration as `(key, value)` pairs in config-file syntax.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let p = &self.params;
        let join = |items: Vec<String>| items.join(",");
        let mut out = vec![
            ("command", self.command.name().to_string()),
            ("S", num(p.s)),
            ("A", num(p.a)),
            ("M", num(p.m)),
            ("Pr", num(p.pr)),
            ("Nb", num(p.nb)),
            ("Nt", num(p.nt)),
            ("Le", num(p.le)),
            ("order", self.hpm.max_order.to_string()),
            (
                "auto-tol",
                self.hpm.auto_tol.map_or_else(|| "none".to_string(), num),
            ),
        ];
        match self.command {
            Command::Sweep => {
                out.push((
                    "uncertain",
                    join(self.uncertain.iter().map(|p| p.name().to_string()).collect()),
                ));
                out.push(("spread", num(self.spread)));
                out.push((
                    "interval",
                    join(
                        self.intervals
                            .iter()
                            .map(|(p, iv)| format!("{}={}:{}", p, num(iv.lo()), num(iv.hi())))
                            .collect(),
                    ),
                ));
                out.push(("alpha-samples", self.alpha_samples.to_string()));
                out.push(("fields", join(self.fields.iter().map(|f| f.name().to_string()).collect())));
            }
            Command::Report => {
                out.push(("spread", num(self.spread)));
                out.push(("alpha-samples", self.alpha_samples.to_string()));
            }
            Command::Validate => out.push(("oracle-steps", self.oracle_steps.to_string())),
            Command::Solve => {}
        }
        if self.command != Command::Validate {
            out.push(("eta-points", self.eta_points.to_string()));
        }
        out.push(("format", self.format.name().to_string()));
        if let Some(path) = &self.dump_terms {
            out.push(("dump-terms", path.display().to_string()));
        }
        out
    }

    /// `# key = value` header lines, one per effective setting.
    pub fn header(&self) -> String {
        self.entries()
            .iter()
            .filter(|(_, v)| !v.is_empty())
            .map(|(k, v)| format!("# {k} = {v}\n"))
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let map = self
            .entries()
            .into_iter()
            .map(|(k, v)| (k.to_string(), serde_json::Value::String(v)))
            .collect();
        serde_json::Value::Object(map)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_text_parses_known_keys() {
        let text = "# comment\nS = 0.5\nbase-A = 2\nPr=0\nuncertain = S, M\ninterval = A=0.9:1.1\nauto-tol = none\nfields = f\n";
        let o = Opts::from_config_text(text, Command::Sweep).unwrap();
        assert_eq!(o.s, Some(0.5));
        assert_eq!(o.a, Some(2.0));
        assert_eq!(o.pr, Some(0.0));
        assert_eq!(o.uncertain, vec![UncertainParam::S, UncertainParam::M]);
        assert_eq!(o.interval.len(), 1);
        assert_eq!(o.auto_tol, Some(AutoTol(None)));
        assert_eq!(o.fields, vec![Field::F]);
    }

    #[test]
    fn config_text_rejects_unknown_and_duplicate_keys() {
        assert!(matches!(
            Opts::from_config_text("gamma = 1", Command::Solve),
            Err(CliError::Usage(_))
        ));
        assert!(Opts::from_config_text("S = 1\nS = 2", Command::Solve).is_err());
        assert!(Opts::from_config_text("S 1", Command::Solve).is_err());
        assert!(Opts::from_config_text("command = sweep", Command::Solve).is_err());
        assert!(Opts::from_config_text("command = solve", Command::Solve).is_ok());
    }

    #[test]
    fn flags_override_file() {
        let file = Opts::from_config_text("S = 0.5\nM = 2", Command::Solve).unwrap();
        let flags = Opts {
            s: Some(0.25),
            ..Opts::default()
        };
        let merged = file.overlay(flags);
        assert_eq!((merged.s, merged.m), (Some(0.25), Some(2.0)));
    }

    #[test]
    fn header_round_trips_through_the_config_parser() {
        let opts = Opts {
            s: Some(0.3),
            uncertain: vec![UncertainParam::A],
            interval: vec![(UncertainParam::S, Interval::new(0.2, 0.4).unwrap())],
            auto_tol: Some(AutoTol(None)),
            ..Opts::default()
        };
        let cfg = RunConfig::resolve(Command::Sweep, opts).unwrap();
        let text: String = cfg
            .header()
            .lines()
            .map(|l| l.trim_start_matches("# ").to_string() + "\n")
            .collect();
        let again = RunConfig::resolve(Command::Sweep, Opts::from_config_text(&text, Command::Sweep).unwrap()).unwrap();
        assert_eq!(again, cfg);
    }

    #[test]
    fn resolve_rejects_bad_ranges() {
        let bad = |o: Opts| RunConfig::resolve(Command::Solve, o).is_err();
        assert!(bad(Opts { order: Some(11), ..Opts::default() }));
        assert!(bad(Opts { spread: Some(-0.1), ..Opts::default() }));
        assert!(bad(Opts { alpha_samples: Some(1), ..Opts::default() }));
        assert!(bad(Opts { eta_points: Some(1), ..Opts::default() }));
        assert!(bad(Opts { s: Some(f64::NAN), ..Opts::default() }));
    }

    #[test]
    fn auto_tol_values() {
        assert_eq!(parse_auto_tol("1e-6").unwrap(), AutoTol(Some(1e-6)));
        assert_eq!(parse_auto_tol("off").unwrap(), AutoTol(None));
        assert!(parse_auto_tol("0").is_err());
        assert!(parse_auto_tol("x").is_err());
    }
}
