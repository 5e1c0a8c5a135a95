//! `seifert`: command-line access to the spherical Seifert orbifold engine.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use seifert_core::atlas::{self, AtlasClass};
use seifert_core::classifier::{self, ClassifyError};
use seifert_core::duval::{self, GroupError};
use seifert_core::{lens, Engine, FiberedOrbifold, GroupSpec, Quotient, Surface, TwoOrbifold};

#[derive(Parser)]
#[command(name = "seifert", version, about = "Seifert fibered spherical 3-orbifolds")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Largest b tried when matching exceptional bridge patterns.
    #[arg(long, global = true, env = "SEIFERT_ATLAS_MAX_B", default_value_t = 10_000)]
    max_bridge_b: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Euler relation and label consistency.
    Validate { expr: String },
    /// Print the canonical form.
    Normalize { expr: String },
    /// Euler characteristic of a base 2-orbifold, e.g. `D2(3;2)`.
    Chi { base: String },
    /// Geometry and number of fibrations.
    Classify { expr: String },
    /// All fibrations, or the lens key of an infinite class.
    Fibrations { expr: String },
    /// Exit 0 if the two orbifolds are diffeomorphic, 3 if not.
    Diffeo { first: String, second: String },
    /// Quotient fibration of a group, e.g. `F2(m=3,n=2)`.
    Quotient {
        group: String,
        #[arg(long)]
        anti_hopf: bool,
    },
    /// Lens space data of an orbifold with infinitely many fibrations.
    Lens { expr: String },
    /// Catalog of tabulated quotients grouped into diffeomorphism classes.
    Atlas {
        #[arg(long)]
        max_order: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("parse error {0}")]
    Parse(#[from] seifert_core::ParseError),
    #[error(transparent)]
    Classify(#[from] ClassifyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Atlas(#[from] atlas::AtlasError),
    #[error(transparent)]
    Lens(#[from] lens::LensError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Group(GroupError::NotImplemented(_) | GroupError::Unsupported(_)) => 2,
            _ => 1,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Parse(_) => "parse",
            CliError::Classify(_) => "classify",
            CliError::Group(_) => "group",
            CliError::Atlas(_) => "atlas",
            CliError::Lens(_) => "lens",
            CliError::Io(_) => "io",
        }
    }
}

/// What a command produced: text, JSON, and the exit code.
struct Output {
    text: String,
    json: Value,
    code: u8,
}

impl Output {
    fn ok(text: String, json: Value) -> Self {
        Output { text, json, code: 0 }
    }
}

fn parse(expr: &str) -> Result<FiberedOrbifold, CliError> {
    Ok(expr.parse::<FiberedOrbifold>()?)
}

fn strings(fs: &[FiberedOrbifold]) -> Vec<String> {
    fs.iter().map(ToString::to_string).collect()
}

/// Common report for single-fibration commands.
fn report(engine: &Engine, expr: &str, f: &FiberedOrbifold) -> Value {
    let n = f.normalize();
    let spherical = n.validate().is_ok() && n.is_spherical();
    let mut v = json!({
        "input": expr,
        "normalized": n.to_string(),
        "chi": n.base().euler_characteristic().to_string(),
        "valid": n.validate().is_ok(),
        "spherical": spherical,
        "count": Value::Null,
        "fibrations": [],
    });
    if let Err(seifert_core::OrbifoldError::Residue(r)) = n.validate() {
        v["residue"] = json!(r.to_string());
    }
    if spherical {
        if let Ok(c) = engine.fibration_count(&n) {
            v["count"] = json!(c.to_string());
        }
        match engine.enumerate_fibrations(&n) {
            Ok(all) => v["fibrations"] = json!(strings(&all)),
            Err(_) => {
                if let Ok(k) = engine.diffeo_key(&n) {
                    v["diffeo_key"] = json!(k.to_string());
                    v["lens"] = json!(k.lens.to_string());
                }
            }
        }
    }
    v
}

fn with_command(mut v: Value, command: &str) -> Value {
    v["command"] = json!(command);
    v
}

fn run(cli: &Cli) -> Result<Output, CliError> {
    let engine = Engine { max_bridge_b: cli.max_bridge_b, ..Engine::default() };
    match &cli.command {
        Command::Validate { expr } => {
            let f = parse(expr)?;
            let v = with_command(report(&engine, expr, &f), "validate");
            Ok(match f.validate() {
                Ok(()) => Output::ok("ok".into(), v),
                Err(e) => Output { text: format!("violation: {e}"), json: v, code: 1 },
            })
        }
        Command::Normalize { expr } => {
            let f = parse(expr)?;
            f.validate().map_err(ClassifyError::from)?;
            let v = with_command(report(&engine, expr, &f), "normalize");
            Ok(Output::ok(f.normalize().to_string(), v))
        }
        Command::Chi { base } => {
            let b: TwoOrbifold = base.parse()?;
            let chi = b.euler_characteristic();
            let bad = b.is_bad().ok();
            let text = match bad {
                Some(true) => format!("chi = {chi}; bad"),
                Some(false) => format!("chi = {chi}; good"),
                None => format!("chi = {chi}"),
            };
            let v = json!({"command": "chi", "input": base, "base": b.to_string(), "chi": chi.to_string(), "bad": bad});
            Ok(Output::ok(text, v))
        }
        Command::Classify { expr } => {
            let f = parse(expr)?.normalize();
            f.validate().map_err(ClassifyError::from)?;
            let v = with_command(report(&engine, expr, &f), "classify");
            if !f.is_spherical() {
                let text = format!("not spherical (chi = {}, e = {})", f.base().euler_characteristic(), f.euler());
                return Ok(Output::ok(text, v));
            }
            let count = engine.fibration_count(&f)?;
            Ok(Output::ok(format!("spherical; fibrations: {count}"), v))
        }
        Command::Fibrations { expr } => {
            let f = parse(expr)?.normalize();
            let v = with_command(report(&engine, expr, &f), "fibrations");
            let text = match engine.enumerate_fibrations(&f) {
                Ok(all) => strings(&all).join("\n"),
                Err(ClassifyError::InfiniteClass) => format!("infinite: {}", engine.diffeo_key(&f)?),
                Err(e) => return Err(e.into()),
            };
            Ok(Output::ok(text, v))
        }
        Command::Diffeo { first, second } => {
            let (f, g) = (parse(first)?, parse(second)?);
            let same = engine.are_diffeomorphic(&f, &g)?;
            let v = json!({
                "command": "diffeo",
                "input": [first, second],
                "normalized": [f.normalize().to_string(), g.normalize().to_string()],
                "diffeomorphic": same,
            });
            let text = if same { "diffeomorphic" } else { "not diffeomorphic" };
            Ok(Output { text: text.into(), json: v, code: if same { 0 } else { 3 } })
        }
        Command::Quotient { group, anti_hopf } => {
            let g: GroupSpec = group.parse()?;
            let order = duval::group_order(&g)?;
            let q = if *anti_hopf { duval::quotient_antihopf(&g)? } else { duval::quotient_hopf(&g)? };
            let fib = match &q {
                Quotient::Fibration(f) => Some(f.to_string()),
                Quotient::NoInvariantFibration => None,
            };
            let v = json!({
                "command": "quotient",
                "input": group,
                "group": g.to_string(),
                "order": order,
                "anti_hopf": anti_hopf,
                "fibration": fib,
            });
            let text = fib.unwrap_or_else(|| "no invariant fibration".into());
            Ok(Output::ok(text, v))
        }
        Command::Lens { expr } => {
            let f = parse(expr)?.normalize();
            let direct = match f.surface() {
                Surface::Sphere if f.base().is_sphere_class() => Some(f.clone()),
                Surface::Disk if f.base().is_disk_class() => Some(classifier::double_cover(&f)?),
                _ => None,
            };
            let mut v = with_command(report(&engine, expr, &f), "lens");
            let text = match direct {
                Some(s) => {
                    f.validate().map_err(ClassifyError::from)?;
                    f.require_spherical().map_err(ClassifyError::from)?;
                    let (c, i1, i2) = lens::classical_from_fibration(&s)?;
                    let l = lens::lens_from_classical(&c)?;
                    v["lens"] = json!(l.to_string());
                    format!("{l} iota=({i1},{i2}) classical {c}")
                }
                None => {
                    let k = engine.diffeo_key(&f)?;
                    format!("{} iota=({},{}) via {}", k.lens, k.iota.0, k.iota.1, k)
                }
            };
            Ok(Output::ok(text, v))
        }
        Command::Atlas { max_order, out } => {
            let classes = atlas::atlas(&engine, *max_order)?;
            let lines: Vec<String> = classes
                .iter()
                .map(|c| if cli.json { atlas_json(c).to_string() } else { atlas_text(c) })
                .collect();
            let mut body = lines.join("\n");
            body.push('\n');
            let summary = format!("{} classes from {} tabulated groups", classes.len(), source_count(&classes));
            match out {
                Some(path) => {
                    std::fs::write(path, &body)?;
                    let v = json!({"command": "atlas", "classes": classes.len(), "out": path.display().to_string()});
                    Ok(Output::ok(summary, v))
                }
                None => Ok(Output { text: body.trim_end().to_string(), json: Value::Null, code: 0 }),
            }
        }
    }
}

fn source_count(classes: &[AtlasClass]) -> usize {
    let mut groups: Vec<_> = classes.iter().flat_map(|c| c.sources.iter().map(|s| s.group)).collect();
    groups.sort();
    groups.dedup();
    groups.len()
}

fn atlas_json(c: &AtlasClass) -> Value {
    json!({
        "class": c.index,
        "count": c.count.to_string(),
        "fibrations": strings(&c.fibrations),
        "key": c.key.as_ref().map(ToString::to_string),
        "sources": c.sources.iter().map(ToString::to_string).collect::<Vec<_>>(),
    })
}

fn atlas_text(c: &AtlasClass) -> String {
    let key = c.key.as_ref().map_or("-".to_string(), ToString::to_string);
    let sources: Vec<String> = c.sources.iter().map(ToString::to_string).collect();
    format!(
        "class {}: fibrations {} | key {} | {} | from {}",
        c.index,
        c.count,
        key,
        strings(&c.fibrations).join(" "),
        sources.join(", ")
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli);
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match result {
        Ok(o) => {
            let printed = if cli.json && !o.json.is_null() { o.json.to_string() } else { o.text };
            if matches!(cli.command, Command::Atlas { out: None, .. }) || !printed.is_empty() {
                let _ = writeln!(out, "{printed}");
            }
            ExitCode::from(o.code)
        }
        Err(e) => {
            if cli.json {
                let _ = writeln!(out, "{}", json!({"error": e.to_string(), "kind": e.kind()}));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn group_exit_codes() {
        assert_eq!(CliError::Group(GroupError::NotImplemented(seifert_core::Family::F1)).exit_code(), 2);
        assert_eq!(CliError::Classify(ClassifyError::FiniteClass).exit_code(), 1);
    }
}
