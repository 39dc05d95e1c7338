use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use serde_json::json;

use squeeze_hpm::flow::{evaluate, expand_with, nusselt, uniform_grid};
use squeeze_hpm::oracle::{compare, guess_from_hpm, shoot, ShootOptions};
use squeeze_hpm::sweep::{band_width, envelope, sensitivity_report, SensitivityReport};
use squeeze_hpm::{Field, UncertainSpec};

use crate::config::{Cli, Command, Format, Opts, RunConfig};
use crate::error::CliError;
use crate::format::{num, row};

/// Everything a run produces, before anything touches the filesystem.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    /// Written to `--out`, or stdout.
    pub main: String,
    /// Extra files such as `--dump-terms`.
    pub side_files: Vec<(PathBuf, String)>,
    /// Human-readable summary: stdout when `main` goes to a file, stderr
    /// otherwise.
    pub console: Option<String>,
}

impl Rendered {
    fn main_only(main: String) -> Self {
        Self {
            main,
            side_files: Vec::new(),
            console: None,
        }
    }
}

fn read_config(path: &Path, command: Command) -> Result<Opts, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Opts::from_config_text(&text, command)
}

/// Resolves the effective configuration: defaults, then config file, then
/// flags.
pub fn resolve(cli: Cli) -> Result<RunConfig, CliError> {
    let (command, flags) = cli.command.split();
    let base = match &flags.config {
        Some(path) => read_config(path, command)?,
        None => Opts::default(),
    };
    RunConfig::resolve(command, base.overlay(flags))
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = resolve(cli)?;
    let rendered = execute(&cfg)?;
    write_outputs(&cfg, &rendered)
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write_outputs(cfg: &RunConfig, rendered: &Rendered) -> Result<(), CliError> {
    let stdio = |source| CliError::Io {
        path: "<stdout>".into(),
        source,
    };
    for (path, text) in &rendered.side_files {
        write_file(path, text)?;
    }
    match &cfg.out {
        Some(path) => {
            write_file(path, &rendered.main)?;
            if let Some(console) = &rendered.console {
                std::io::stdout().write_all(console.as_bytes()).map_err(stdio)?;
            }
        }
        None => {
            if let Some(console) = &rendered.console {
                eprint!("{console}");
            }
            std::io::stdout()
                .write_all(rendered.main.as_bytes())
                .map_err(stdio)?;
        }
    }
    Ok(())
}

pub fn execute(cfg: &RunConfig) -> Result<Rendered, CliError> {
    match cfg.command {
        Command::Solve => run_solve(cfg),
        Command::Sweep => run_sweep(cfg),
        Command::Validate => run_validate(cfg),
        Command::Report => run_report(cfg),
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn run_solve(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let sol = expand_with(&cfg.params, &cfg.hpm)?;
    let grid = uniform_grid(cfg.eta_points)?;
    let table = evaluate(&sol, &grid)?;
    let nu = nusselt(&sol);

    let main = match cfg.format {
        Format::Csv => {
            let mut out = cfg.header();
            let _ = writeln!(out, "# hpm_order: {}", sol.order());
            let _ = writeln!(out, "# Nu={}", num(nu));
            out.push_str("eta,f,fprime,theta,phi\n");
            for i in 0..grid.len() {
                out.push_str(&row(&[
                    table.eta[i],
                    table.f[i],
                    table.fprime[i],
                    table.theta[i],
                    table.phi[i],
                ]));
                out.push('\n');
            }
            out
        }
        Format::Json => pretty(&json!({
            "config": cfg.to_json(),
            "hpm_order": sol.order(),
            "auto_stopped": sol.auto_stopped(),
            "nusselt": nu,
            "profile": table,
        })),
    };

    let mut rendered = Rendered::main_only(main);
    if let Some(path) = &cfg.dump_terms {
        let terms = json!({
            "config": cfg.to_json(),
            "order": sol.order(),
            "f": sol.f_terms(),
            "theta": sol.theta_terms(),
            "phi": sol.phi_terms(),
        });
        rendered.side_files.push((path.clone(), pretty(&terms)));
    }
    Ok(rendered)
}

fn sweep_spec(cfg: &RunConfig) -> Result<UncertainSpec, CliError> {
    if cfg.uncertain.is_empty() && cfg.intervals.is_empty() {
        return Err(CliError::Usage(
            "sweep needs at least one uncertain parameter (--uncertain or --interval)".into(),
        ));
    }
    let mut spec = UncertainSpec {
        alpha_samples: cfg.alpha_samples,
        eta_points: cfg.eta_points,
        ..UncertainSpec::crisp(cfg.params)
    }
    .with_relative_spread(&cfg.uncertain, cfg.spread)?;
    for &(param, iv) in &cfg.intervals {
        spec = spec.with_interval(param, iv);
    }
    Ok(spec)
}

pub fn run_sweep(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let spec = sweep_spec(cfg)?;
    let band = envelope(&spec, &cfg.hpm)?;

    let main = match cfg.format {
        Format::Csv => {
            let mut out = cfg.header();
            let _ = writeln!(out, "# draws: {}", band.draws);
            for (param, iv) in spec.uncertain() {
                let _ = writeln!(out, "# interval[{param}]: {}:{}", num(iv.lo()), num(iv.hi()));
            }
            for &field in &cfg.fields {
                let w = band_width(&band, field);
                let _ = writeln!(
                    out,
                    "# width[{field}]: max={} integral={}",
                    num(w.max_width),
                    num(w.integral_width)
                );
            }
            let mut columns = vec!["eta".to_string()];
            for field in &cfg.fields {
                columns.push(format!("{field}_lo"));
                columns.push(format!("{field}_hi"));
            }
            out.push_str(&columns.join(","));
            out.push('\n');
            for (i, &eta) in band.eta.iter().enumerate() {
                let mut values = vec![eta];
                for &field in &cfg.fields {
                    let b = band.band(field);
                    values.push(b.lower[i]);
                    values.push(b.upper[i]);
                }
                out.push_str(&row(&values));
                out.push('\n');
            }
            out
        }
        Format::Json => {
            let intervals: serde_json::Map<_, _> = spec
                .uncertain()
                .into_iter()
                .map(|(p, iv)| (p.name().to_string(), json!([iv.lo(), iv.hi()])))
                .collect();
            let widths: serde_json::Map<_, _> = cfg
                .fields
                .iter()
                .map(|&f| (f.name().to_string(), json!(band_width(&band, f))))
                .collect();
            let bands: serde_json::Map<_, _> = cfg
                .fields
                .iter()
                .map(|&f| (f.name().to_string(), json!(band.band(f))))
                .collect();
            pretty(&json!({
                "config": cfg.to_json(),
                "draws": band.draws,
                "intervals": intervals,
                "widths": widths,
                "eta": band.eta,
                "bands": bands,
            }))
        }
    };
    Ok(Rendered::main_only(main))
}

pub fn run_validate(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let sol = expand_with(&cfg.params, &cfg.hpm)?;
    let opts = ShootOptions {
        steps: cfg.oracle_steps,
        ..ShootOptions::default()
    };
    let oracle = shoot(&cfg.params, guess_from_hpm(&sol), &opts)?;
    let orders: Vec<usize> = if sol.order() == 0 {
        vec![0]
    } else {
        (1..=sol.order()).collect()
    };
    let errors = orders
        .iter()
        .map(|&k| compare(&sol.truncated(k), &oracle))
        .collect::<Result<Vec<_>, _>>()?;

    let main = match cfg.format {
        Format::Json => pretty(&json!({
            "config": cfg.to_json(),
            "hpm": {
                "order": sol.order(),
                "auto_stopped": sol.auto_stopped(),
                "nusselt": nusselt(&sol),
            },
            "oracle": {
                "steps": cfg.oracle_steps,
                "iterations": oracle.iterations,
                "shoot_unknowns": oracle.unknowns,
                "terminal_residuals": oracle.terminal_residuals,
                "nusselt": oracle.nusselt(),
            },
            "errors": errors,
        })),
        Format::Csv => {
            let mut out = cfg.header();
            let _ = writeln!(out, "# hpm_order: {}", sol.order());
            let _ = writeln!(out, "# oracle_iterations: {}", oracle.iterations);
            let _ = writeln!(out, "# shoot_unknowns: {}", row(&oracle.unknowns));
            let _ = writeln!(out, "# terminal_residuals: {}", row(&oracle.terminal_residuals));
            out.push_str("order,f_max,f_rms,fprime_max,fprime_rms,theta_max,theta_rms,phi_max,phi_rms,nusselt_diff\n");
            for e in &errors {
                let _ = writeln!(
                    out,
                    "{},{}",
                    e.order,
                    row(&[
                        e.f.max_abs,
                        e.f.rms,
                        e.fprime.max_abs,
                        e.fprime.rms,
                        e.theta.max_abs,
                        e.theta.rms,
                        e.phi.max_abs,
                        e.phi.rms,
                        e.nusselt_diff,
                    ])
                );
            }
            out
        }
    };
    Ok(Rendered::main_only(main))
}

fn agreement_word(agrees: Option<bool>) -> &'static str {
    match agrees {
        Some(true) => "agrees",
        Some(false) => "disagrees",
        None => "degenerate",
    }
}

/// Three pairings × three fields plus the per-field ranking.
pub fn report_table(rep: &SensitivityReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "sensitivity at S={} A={} M={} Pr={} Nb={} Nt={} Le={}, spread ±{}%",
        num(rep.base.s),
        num(rep.base.a),
        num(rep.base.m),
        num(rep.base.pr),
        num(rep.base.nb),
        num(rep.base.nt),
        num(rep.base.le),
        num(rep.spread * 100.0)
    );
    let _ = writeln!(out, "{:<8}{:<8}{:>20}{:>20}", "pairing", "field", "max_width", "integral_width");
    for pw in &rep.pairings {
        for field in Field::RANKED {
            let w = pw.get(field);
            let _ = writeln!(
                out,
                "{:<8}{:<8}{:>20}{:>20}",
                pw.pairing.label(),
                field.name(),
                num(w.max_width),
                num(w.integral_width)
            );
        }
    }
    for r in &rep.rankings {
        let order: Vec<&str> = r.order.iter().map(|p| p.label()).collect();
        let _ = writeln!(
            out,
            "ranking {:<7} {}  (published widest: {}) -> {}",
            r.field.name(),
            order.join(" > "),
            r.published_widest.label(),
            agreement_word(r.agrees)
        );
    }
    if rep.degenerate {
        out.push_str("all widths are zero: ranking is degenerate\n");
    }
    out
}

pub fn run_report(cfg: &RunConfig) -> Result<Rendered, CliError> {
    let rep = sensitivity_report(
        &cfg.params,
        cfg.spread,
        cfg.alpha_samples,
        cfg.eta_points,
        &cfg.hpm,
    )?;
    let table = report_table(&rep);

    let main = match cfg.format {
        Format::Json => {
            let agreement: serde_json::Map<_, _> = rep
                .rankings
                .iter()
                .map(|r| (r.field.name().to_string(), json!(agreement_word(r.agrees))))
                .collect();
            pretty(&json!({
                "config": cfg.to_json(),
                "report": rep,
                "agreement": agreement,
            }))
        }
        Format::Csv => {
            let mut out = cfg.header();
            let _ = writeln!(out, "# degenerate: {}", rep.degenerate);
            for r in &rep.rankings {
                let order: Vec<&str> = r.order.iter().map(|p| p.label()).collect();
                let _ = writeln!(
                    out,
                    "# ranking[{}]: {} published_widest={} {}",
                    r.field.name(),
                    order.join(" > "),
                    r.published_widest.label(),
                    agreement_word(r.agrees)
                );
            }
            out.push_str("pairing,field,max_width,integral_width,rank\n");
            for pw in &rep.pairings {
                for field in Field::RANKED {
                    let w = pw.get(field);
                    let rank = rep
                        .rankings
                        .iter()
                        .find(|r| r.field == field)
                        .and_then(|r| r.order.iter().position(|&p| p == pw.pairing))
                        .map_or(0, |i| i + 1);
                    let _ = writeln!(
                        out,
                        "\"{}\",{},{},{},{}",
                        pw.pairing.label(),
                        field.name(),
                        num(w.max_width),
                        num(w.integral_width),
                        rank
                    );
                }
            }
            out
        }
    };
    Ok(Rendered {
        main,
        side_files: Vec::new(),
        console: Some(table),
    })
}
