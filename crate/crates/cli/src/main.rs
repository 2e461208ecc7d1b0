//! `gspec`: closure orders of Gabriel spectra from the command line.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use gspec_core::mutation::{Chain, MutationStep, ThetaMap};
use gspec_core::render::{bounded_to_dot, bounded_to_text, BoundedJson};
use gspec_core::verify::{format_reports, run_suite};
use gspec_core::{
    chain_order, preset, Error, FiltrationDocument, LevelFunction, PrimePoset, SpFiltration,
    StepAnnotations, Subset, UndeterminedPolicy, PRESET_NAMES,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "gspec", version, about = "Closure orders of Gabriel spectra over finite prime posets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the poset axioms and, if given, the filtration.
    Validate(Config),
    /// Normalize a filtration and report its level function and class.
    Filtration(Config),
    /// Compute the closure order of the heart of a filtration.
    Closure(Config),
    /// Cantor-Bendixson filtration of the standard or computed order.
    Cb(Config),
    /// Per-step mutation log with the Θ neighbourhoods.
    Mutate(Config),
    /// Run the property suite.
    Check(Config),
    /// List the built-in presets, or print one as a document.
    Presets(PresetArgs),
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Format {
    Json,
    Dot,
    #[default]
    Text,
}

#[derive(Clone, Copy, Default, ValueEnum)]
enum Policy {
    #[default]
    Error,
    AssumeCoherent,
    AssumeNoncoherent,
}

impl From<Policy> for UndeterminedPolicy {
    fn from(p: Policy) -> Self {
        match p {
            Policy::Error => Self::Error,
            Policy::AssumeCoherent => Self::AssumeCoherent,
            Policy::AssumeNoncoherent => Self::AssumeNoncoherent,
        }
    }
}

#[derive(Args)]
struct Config {
    /// Built-in prime poset.
    #[arg(long, conflicts_with = "file", required_unless_present = "file")]
    preset: Option<String>,
    /// Prime poset JSON document.
    #[arg(long)]
    file: Option<PathBuf>,

    /// Filtration levels as inline JSON, e.g. '[["m"],["m"]]'.
    #[arg(long, group = "filt")]
    levels: Option<String>,
    /// Level function as inline JSON, e.g. '{"o":-1,"m":0}'.
    #[arg(long, group = "filt")]
    f: Option<String>,
    /// Use the height filtration.
    #[arg(long, group = "filt")]
    height_filtration: bool,
    /// Codimension function JSON file.
    #[arg(long, group = "filt")]
    codim: Option<PathBuf>,
    /// Filtration JSON file, `{"levels": [...]}` or `{"f": {...}}`.
    #[arg(long, group = "filt")]
    filtration: Option<PathBuf>,

    /// Step annotations JSON file.
    #[arg(long)]
    annotations: Option<PathBuf>,
    /// Treatment of undetermined coherence queries.
    #[arg(long, value_enum, default_value_t)]
    policy: Policy,
    /// Also emit the order after every step.
    #[arg(long)]
    steps: bool,
    /// Exit with status 3 when the final order is only bounded.
    #[arg(long)]
    require_exact: bool,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
    /// Write output here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PresetArgs {
    /// Print this preset as a JSON document.
    #[arg(long)]
    preset: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Result of a command: text to emit and the exit status.
struct Output {
    text: String,
    status: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, status: 0 }
    }
}

struct Filtration {
    filt: SpFiltration,
    /// Every supplied level was trivial and got stripped.
    degenerate: bool,
    warnings: Vec<String>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_poset(cfg: &Config) -> anyhow::Result<PrimePoset> {
    match (&cfg.preset, &cfg.file) {
        (Some(name), None) => Ok(preset(name)?),
        (None, Some(path)) => Ok(PrimePoset::from_json(&read(path)?)?),
        _ => bail!("exactly one of --preset and --file is required"),
    }
}

fn parse_json<T: serde::de::DeserializeOwned>(text: &str, what: &str) -> anyhow::Result<T> {
    serde_json::from_str(text).map_err(|e| anyhow!(Error::Schema(format!("{what}: {e}"))))
}

fn from_levels(poset: &PrimePoset, levels: &[Vec<String>]) -> anyhow::Result<Filtration> {
    let sets: Vec<Subset> = levels.iter().map(|l| l.iter().cloned().collect()).collect();
    let (filt, warnings) = SpFiltration::validate_with_warnings(poset, &sets)?;
    Ok(Filtration {
        degenerate: filt.is_empty() && !warnings.is_empty(),
        warnings: warnings.iter().map(ToString::to_string).collect(),
        filt,
    })
}

fn exact(filt: SpFiltration) -> Filtration {
    Filtration {
        filt,
        degenerate: false,
        warnings: Vec::new(),
    }
}

fn load_filtration(cfg: &Config, poset: &PrimePoset) -> anyhow::Result<Option<Filtration>> {
    if let Some(text) = &cfg.levels {
        let levels: Vec<Vec<String>> = parse_json(text, "--levels")?;
        return from_levels(poset, &levels).map(Some);
    }
    if let Some(text) = &cfg.f {
        let f: BTreeMap<String, i64> = parse_json(text, "--f")?;
        return Ok(Some(exact(SpFiltration::from_level_function(poset, &LevelFunction(f))?)));
    }
    if cfg.height_filtration {
        return Ok(Some(exact(SpFiltration::height_filtration(poset))));
    }
    if let Some(path) = &cfg.codim {
        let d: BTreeMap<String, i64> = parse_json(&read(path)?, "codimension function")?;
        return Ok(Some(exact(SpFiltration::codim_filtration(poset, &d)?)));
    }
    if let Some(path) = &cfg.filtration {
        return match parse_json(&read(path)?, "filtration")? {
            FiltrationDocument::Levels { levels } => from_levels(poset, &levels).map(Some),
            FiltrationDocument::Function { f } => Ok(Some(exact(SpFiltration::from_level_function(
                poset,
                &LevelFunction(f),
            )?))),
        };
    }
    Ok(None)
}

fn require_filtration(cfg: &Config, poset: &PrimePoset) -> anyhow::Result<Filtration> {
    load_filtration(cfg, poset)?.ok_or_else(|| {
        anyhow!("a filtration is required: --levels, --f, --height-filtration, --codim or --filtration")
    })
}

fn load_annotations(cfg: &Config) -> anyhow::Result<StepAnnotations> {
    match &cfg.annotations {
        Some(path) => parse_json(&read(path)?, "step annotations"),
        None => Ok(StepAnnotations::default()),
    }
}

fn levels_json(filt: &SpFiltration) -> serde_json::Value {
    json!(filt.levels())
}

fn pretty(v: &serde_json::Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn no_dot(cmd: &str) -> anyhow::Result<Output> {
    Err(anyhow!(Error::Schema(format!("`{cmd}` has no DOT output"))))
}

fn cmd_validate(cfg: &Config) -> anyhow::Result<Output> {
    let poset = load_poset(cfg)?;
    let report = poset.order().check_axioms(gspec_core::DEFAULT_ENUMERATION_BOUND);
    let filt = load_filtration(cfg, &poset)?;
    let ok = report.passed() && !filt.as_ref().is_some_and(|f| f.degenerate);
    let text = match cfg.format {
        Format::Json => pretty(&json!({
            "elements": poset.elements(),
            "axioms": report,
            "filtration": filt.as_ref().map(|f| json!({
                "levels": levels_json(&f.filt),
                "classification": f.filt.classify(&poset),
                "warnings": f.warnings,
            })),
        })),
        Format::Dot => return no_dot("validate"),
        Format::Text => {
            let mut s = format!(
                "{} primes; T0 {}; sober {}; {} irreducible closed sets\n",
                poset.elements().len(),
                report.t0,
                report.sober,
                report.irreducible_closed_sets.len()
            );
            for f in &report.failures {
                writeln!(s, "failure: {f}").unwrap();
            }
            if let Some(f) = &filt {
                writeln!(s, "filtration of length {} is valid", f.filt.len()).unwrap();
            }
            s
        }
    };
    Ok(Output {
        text,
        status: if ok { 0 } else { 1 },
    })
}

fn cmd_filtration(cfg: &Config) -> anyhow::Result<Output> {
    let poset = load_poset(cfg)?;
    let f = require_filtration(cfg, &poset)?;
    let class = f.filt.classify(&poset);
    let lf = f.filt.to_level_function(&poset);
    let text = match cfg.format {
        Format::Json => pretty(&json!({
            "levels": levels_json(&f.filt),
            "f": lf,
            "classification": class,
            "warnings": f.warnings,
        })),
        Format::Dot => return no_dot("filtration"),
        Format::Text => {
            let mut s = format!("length {}\n", f.filt.len());
            for (i, v) in f.filt.levels().iter().enumerate() {
                writeln!(s, "V{i} = {v:?}").unwrap();
            }
            for (p, v) in &lf.0 {
                writeln!(s, "f({p}) = {v}").unwrap();
            }
            writeln!(
                s,
                "slice: {}; truncated slice: {}",
                class.slice, class.truncated_slice
            )
            .unwrap();
            s
        }
    };
    Ok(Output {
        text,
        status: if f.degenerate { 1 } else { 0 },
    })
}

fn run_chain(cfg: &Config, poset: &PrimePoset, f: &Filtration) -> anyhow::Result<Chain> {
    Ok(chain_order(poset, &f.filt, &load_annotations(cfg)?, cfg.policy.into())?)
}

fn step_label(step: &MutationStep) -> String {
    let cert = step.perfect.map(|c| format!(", perfect by {c:?}")).unwrap_or_default();
    format!(
        "step {}: {:?} at E={:?}{cert}",
        step.index,
        step.rule,
        step.mutation_class
    )
}

fn cmd_closure(cfg: &Config) -> anyhow::Result<Output> {
    let poset = load_poset(cfg)?;
    let f = require_filtration(cfg, &poset)?;
    let chain = run_chain(cfg, &poset, &f)?;
    let last = chain.final_order();
    let text = match cfg.format {
        Format::Json => {
            let steps: Vec<_> = chain
                .steps
                .iter()
                .map(|(s, o)| json!({ "step": s, "order": BoundedJson::new(o) }))
                .collect();
            let mut v = json!({
                "levels": levels_json(&f.filt),
                "exact": last.is_exact(),
                "order": BoundedJson::new(last),
            });
            if cfg.steps {
                v["steps"] = json!(steps);
            }
            pretty(&v)
        }
        Format::Dot => {
            let mut s = String::new();
            if cfg.steps {
                for (step, o) in &chain.steps {
                    writeln!(s, "// {}", step_label(step)).unwrap();
                    s.push_str(&bounded_to_dot(o, poset.heights()));
                }
            } else {
                s = bounded_to_dot(last, poset.heights());
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            if cfg.steps {
                for (step, o) in &chain.steps {
                    writeln!(s, "{}", step_label(step)).unwrap();
                    s.push_str(&bounded_to_text(o));
                }
            } else {
                s = bounded_to_text(last);
            }
            s
        }
    };
    let status = if f.degenerate {
        1
    } else if cfg.require_exact && !last.is_exact() {
        3
    } else {
        0
    };
    Ok(Output { text, status })
}

fn cmd_cb(cfg: &Config) -> anyhow::Result<Output> {
    let poset = load_poset(cfg)?;
    let filt = load_filtration(cfg, &poset)?;
    let mut status = 0;
    let order = match &filt {
        None => poset.order().clone(),
        Some(f) => {
            let chain = run_chain(cfg, &poset, f)?;
            let last = chain.final_order();
            if !last.is_exact() {
                log::warn!("final order is inexact; using its upper bound");
                if cfg.require_exact {
                    status = 3;
                }
            }
            if f.degenerate {
                status = 1;
            }
            last.upper.order.clone()
        }
    };
    let cb = order.cb_filtration();
    let text = match cfg.format {
        Format::Json => pretty(&json!({ "rank": cb.rank, "layers": cb.layers })),
        Format::Dot => return no_dot("cb"),
        Format::Text => {
            let mut s = format!("rank {}\n", cb.rank);
            for (i, layer) in cb.layers.iter().enumerate() {
                writeln!(s, "X{i} = {layer:?}").unwrap();
            }
            s
        }
    };
    Ok(Output { text, status })
}

fn theta_lines(theta: &ThetaMap, s: &mut String) {
    for e in &theta.entries {
        if e.closure_before != e.closure_after {
            writeln!(
                s,
                "  Θ({}) = {}: closure {:?} -> {:?}",
                e.point, e.image, e.closure_before.upper, e.closure_after.upper
            )
            .unwrap();
        }
    }
}

fn cmd_mutate(cfg: &Config) -> anyhow::Result<Output> {
    let poset = load_poset(cfg)?;
    let f = require_filtration(cfg, &poset)?;
    let chain = run_chain(cfg, &poset, &f)?;
    let text = match cfg.format {
        Format::Json => {
            let steps: Vec<_> = chain
                .steps
                .iter()
                .map(|(s, o)| {
                    json!({
                        "step": s,
                        "exact": o.is_exact(),
                        "theta": chain.theta(s.index),
                    })
                })
                .collect();
            pretty(&json!({ "truncated_slice": chain.truncated_slice, "steps": steps }))
        }
        Format::Dot => return no_dot("mutate"),
        Format::Text => {
            let mut s = String::new();
            for (step, o) in &chain.steps {
                let exact = if o.is_exact() { "exact" } else { "bounded" };
                writeln!(s, "{} ({exact})", step_label(step)).unwrap();
                theta_lines(&chain.theta(step.index), &mut s);
            }
            s
        }
    };
    let last = chain.final_order();
    let status = if f.degenerate {
        1
    } else if cfg.require_exact && !last.is_exact() {
        3
    } else {
        0
    };
    Ok(Output { text, status })
}

fn cmd_check(cfg: &Config) -> anyhow::Result<Output> {
    let poset = load_poset(cfg)?;
    let f = require_filtration(cfg, &poset)?;
    let reports = run_suite(&poset, &f.filt, &load_annotations(cfg)?, cfg.policy.into())?;
    let failed = reports.iter().find(|r| !r.passed);
    if let Some(r) = failed {
        eprintln!(
            "property `{}` failed: {}",
            r.property,
            r.counterexample.as_deref().unwrap_or("")
        );
    }
    let text = match cfg.format {
        Format::Json => pretty(&json!(reports)),
        Format::Dot => return no_dot("check"),
        Format::Text => format_reports(&reports),
    };
    Ok(Output {
        text,
        status: if failed.is_some() || f.degenerate { 1 } else { 0 },
    })
}

fn cmd_presets(args: &PresetArgs) -> anyhow::Result<Output> {
    Ok(Output::ok(match &args.preset {
        Some(name) => pretty(&json!(preset(name)?.to_document())),
        None => PRESET_NAMES.iter().map(|n| format!("{n}\n")).collect(),
    }))
}

fn emit(out: Option<&Path>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<u8> {
    let (result, out) = match &cli.command {
        Command::Validate(c) => (cmd_validate(c), c.out.as_deref()),
        Command::Filtration(c) => (cmd_filtration(c), c.out.as_deref()),
        Command::Closure(c) => (cmd_closure(c), c.out.as_deref()),
        Command::Cb(c) => (cmd_cb(c), c.out.as_deref()),
        Command::Mutate(c) => (cmd_mutate(c), c.out.as_deref()),
        Command::Check(c) => (cmd_check(c), c.out.as_deref()),
        Command::Presets(p) => (cmd_presets(p), p.out.as_deref()),
    };
    let output = result?;
    emit(out, &output.text)?;
    Ok(output.status)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(status) => ExitCode::from(status),
        Err(err) => {
            eprintln!("error: {err:#}");
            let undetermined = matches!(err.downcast_ref(), Some(Error::UndeterminedCoherence(..)));
            ExitCode::from(if undetermined { 2 } else { 1 })
        }
    }
}
