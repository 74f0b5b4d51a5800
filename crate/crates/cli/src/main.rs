use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use obembed::embedder::{
    build_openbook_embedding, build_s5_plan, validate_json, Certificate, ValidateError,
};
use obembed::mcg::{relation_report, McgError};
use obembed::openbook::{parse_openbook_text, OpenBookError};
use obembed::surface::{lickorish_system, ConfigFile, CurveSystem, Surface};
use obembed::{identify_known, reduce_to_one_boundary, stabilize_positive, AbstractOpenBook, Attachment};
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Parser, Debug)]
#[command(name = "obembed", version, about = "Open book decompositions: homology, stabilization and embedding certificates")]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,

    /// Curve system override (JSON). Defaults to `<file>.curves.json` when present.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Run the command over every path listed in this file; prints one JSON line per entry.
    #[arg(long, global = true, value_name = "PATH")]
    manifest: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// First homology of the closed manifold.
    H1(Input),
    /// First homology of the mapping torus of the monodromy.
    MtH1(Input),
    /// Name the manifold if it is in the small catalog, else `unknown`.
    Identify(Input),
    /// Positive stabilization along a 1-handle.
    Stabilize {
        #[command(flatten)]
        input: Input,
        /// Feet on two distinct boundary components.
        #[arg(long, num_args = 2, value_names = ["J", "K"], conflicts_with = "same", required_unless_present = "same")]
        join: Option<Vec<usize>>,
        /// Both feet on one boundary component.
        #[arg(long, value_name = "J")]
        same: Option<usize>,
        #[arg(long, required_unless_present = "manifest")]
        out: Option<PathBuf>,
    },
    /// Stabilize until the page has one boundary component.
    Reduce {
        #[command(flatten)]
        input: Input,
        #[arg(long, required_unless_present = "manifest")]
        out: Option<PathBuf>,
    },
    /// Open book embedding certificate into Aob(DE(m), Id).
    Embed {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_negative_numbers = true)]
        framing: i64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Embedding plan into S^3 x R^2 inside S^5.
    EmbedS5 {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Re-check a certificate file.
    Validate(Input),
    /// Check braid, commutation and order-six relations of the default curve system.
    Relations {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        boundary: usize,
    },
}

#[derive(Args, Debug)]
struct Input {
    #[arg(required_unless_present = "manifest")]
    file: Option<PathBuf>,
}

#[derive(Debug, Error)]
enum Failure {
    /// Exit 2: unreadable or malformed input, or bad usage.
    #[error("{0}")]
    Input(String),
    /// Exit 1: a well-formed object violates an invariant.
    #[error("{}", .0.join("\n"))]
    Invalid(Vec<String>, Value),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Invalid(..) => 1,
            Failure::Input(_) => 2,
        }
    }
}

/// Text for the terminal plus the same result as JSON.
struct Output {
    text: String,
    json: Value,
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn sibling_config(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".curves.json");
    PathBuf::from(name)
}

fn load_openbook(path: &Path, config: Option<&Path>) -> Result<AbstractOpenBook, Failure> {
    let text = read(path)?;
    let (page, word) =
        parse_openbook_text(&text).map_err(|e| Failure::Input(format!("{}:{}: {}", path.display(), e.line, e.message)))?;

    let sibling = sibling_config(path);
    let config = config.map(Path::to_path_buf).or_else(|| sibling.exists().then_some(sibling));
    let system = match &config {
        None => CurveSystem::standard(page).map_err(|e| Failure::Input(format!("{}:3: {e}", path.display())))?,
        Some(cfg) => {
            let file: ConfigFile = serde_json::from_str(&read(cfg)?).map_err(|e| {
                Failure::Input(format!("{}:{}: {e}", cfg.display(), e.line()))
            })?;
            CurveSystem::from_file(page, file)
        }
    };
    AbstractOpenBook::with_system(system, word).map_err(|e| match e {
        OpenBookError::Word(McgError::UnknownCurve(c)) => {
            Failure::Input(format!("{}:4: unknown curve `{c}`", path.display()))
        }
        OpenBookError::InvalidConfig(v) => Failure::Input(format!(
            "{}: {}",
            config.as_deref().unwrap_or(path).display(),
            v.iter().map(|x| x.0.as_str()).collect::<Vec<_>>().join("; ")
        )),
        other => Failure::Input(format!("{}: {other}", path.display())),
    })
}

fn group_output(label: &str, g: &obembed::AbelianGroup) -> Output {
    Output {
        text: format!("{label} = {g}"),
        json: json!({
            "free_rank": g.free_rank,
            "torsion": serde_json::to_value(g).expect("serializable")["torsion"],
            "group": g.to_string(),
        }),
    }
}

/// Writes the open book and, when its curve system is not the default one,
/// the `<out>.curves.json` sibling.
fn save_openbook(ob: &AbstractOpenBook, out: Option<&Path>) -> Result<Output, Failure> {
    let system = (!ob.has_standard_system()).then(|| ob.system().to_file());
    let mut written = Vec::new();
    if let Some(out) = out {
        write(out, &ob.to_text())?;
        written.push(out.display().to_string());
        let sibling = sibling_config(out);
        match &system {
            Some(cfg) => {
                write(&sibling, &serde_json::to_string_pretty(cfg).expect("serializable"))?;
                written.push(sibling.display().to_string());
            }
            None if sibling.exists() => {
                fs::remove_file(&sibling).map_err(|e| Failure::Input(format!("{}: {e}", sibling.display())))?
            }
            None => {}
        }
    }
    let h1 = ob.closed_h1();
    Ok(Output {
        text: if written.is_empty() {
            ob.to_text()
        } else {
            format!("wrote {}: {ob}, H1 = {h1}", written.join(", "))
        },
        json: json!({
            "page": ob.page(),
            "word": ob.monodromy.to_string(),
            "openbook": ob.to_text(),
            "curves": system,
            "h1": h1.to_string(),
            "written": written,
        }),
    })
}

fn emit_certificate(cert: Certificate, out: Option<&Path>, summary: String) -> Result<Output, Failure> {
    let text = cert.to_json();
    match out {
        Some(path) => {
            write(path, &format!("{text}\n"))?;
            Ok(Output {
                text: format!("wrote {}: {summary}", path.display()),
                json: json!({ "kind": cert.kind(), "written": path.display().to_string(), "summary": summary }),
            })
        }
        None => Ok(Output {
            text,
            json: cert.to_value(),
        }),
    }
}

fn validate_file(path: &Path) -> Result<Output, Failure> {
    let text = read(path)?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{}:{}: {e}", path.display(), e.line())))?;
    let report = validate_json(&value).map_err(|e: ValidateError| Failure::Input(format!("{}: {e}", path.display())))?;
    let json = json!({ "kind": report.kind, "valid": report.is_clean(), "violations": report.violations });
    if report.is_clean() {
        Ok(Output {
            text: format!("valid {} certificate", report.kind),
            json,
        })
    } else {
        let lines = report.violations.iter().map(|v| format!("violation: {v}")).collect();
        Err(Failure::Invalid(lines, json))
    }
}

fn relations(genus: usize, boundary: usize) -> Result<Output, Failure> {
    let (cfg, _) = lickorish_system(&Surface::new(genus, boundary)).map_err(|e| Failure::Input(e.to_string()))?;
    let report = relation_report(&cfg);
    let json = serde_json::to_value(&report).expect("serializable");
    let lines: Vec<String> = report.checks.iter().map(ToString::to_string).collect();
    if report.all_passed() {
        let mut text = lines.join("\n");
        if !text.is_empty() {
            text.push('\n');
        }
        text.push_str(&format!("all {} relations hold", report.checks.len()));
        Ok(Output { text, json })
    } else {
        Err(Failure::Invalid(lines, json))
    }
}

/// Runs one subcommand on one input path.
fn run_one(cli: &Cli, file: Option<&Path>, batch: bool) -> Result<Output, Failure> {
    let file = || file.ok_or_else(|| Failure::Input("missing input file".into()));
    let config = cli.config.as_deref();
    let out = |o: &Option<PathBuf>| -> Result<Option<PathBuf>, Failure> {
        if batch && o.is_some() {
            return Err(Failure::Input("--out cannot be combined with --manifest".into()));
        }
        Ok(o.clone())
    };
    match &cli.command {
        Command::H1(_) => Ok(group_output("H1", &load_openbook(file()?, config)?.closed_h1())),
        Command::MtH1(_) => Ok(group_output("H1(mapping torus)", &load_openbook(file()?, config)?.mapping_torus_h1())),
        Command::Identify(_) => {
            let name = identify_known(&load_openbook(file()?, config)?);
            Ok(Output {
                text: name.clone().unwrap_or_else(|| "unknown".into()),
                json: json!({ "name": name }),
            })
        }
        Command::Stabilize { join, same, out: o, .. } => {
            let ob = load_openbook(file()?, config)?;
            let attachment = match (join.as_deref(), same) {
                (Some([j, k]), None) => Attachment::JoinBoundaries(*j, *k),
                (None, Some(j)) => Attachment::SameBoundary(*j),
                _ => return Err(Failure::Input("give exactly one of --join J K or --same J".into())),
            };
            let st = stabilize_positive(&ob, attachment).map_err(|e| Failure::Input(e.to_string()))?;
            save_openbook(&st, out(o)?.as_deref())
        }
        Command::Reduce { out: o, .. } => {
            let ob = load_openbook(file()?, config)?;
            let red = reduce_to_one_boundary(&ob).map_err(|e| Failure::Input(e.to_string()))?;
            save_openbook(&red, out(o)?.as_deref())
        }
        Command::Embed { framing, out: o, .. } => {
            let ob = load_openbook(file()?, config)?;
            let w = build_openbook_embedding(&ob, *framing).map_err(|e| Failure::Input(e.to_string()))?;
            let summary = format!(
                "{ob} into {} (m = {framing}), {} letters realized",
                w.scene.target_manifold,
                w.schedule.len()
            );
            emit_certificate(w.into(), out(o)?.as_deref(), summary)
        }
        Command::EmbedS5 { out: o, .. } => {
            let ob = load_openbook(file()?, config)?;
            let p = build_s5_plan(&ob).map_err(|e| Failure::Input(e.to_string()))?;
            let summary = format!(
                "{ob} via {} into {}, H1 = {}",
                p.input.normalized.page, p.scene.assembly.target, p.checks.h1_after
            );
            emit_certificate(p.into(), out(o)?.as_deref(), summary)
        }
        Command::Validate(_) => validate_file(file()?),
        Command::Relations { genus, boundary } => relations(*genus, *boundary),
    }
}

fn manifest_entries(path: &Path) -> Result<Vec<PathBuf>, Failure> {
    let base = path.parent().unwrap_or(Path::new("."));
    Ok(read(path)?
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| base.join(l))
        .collect())
}

fn run_batch(cli: &Cli, manifest: &Path) -> Result<u8, Failure> {
    if matches!(cli.command, Command::Relations { .. }) {
        return Err(Failure::Input("relations takes no input files".into()));
    }
    let entries = manifest_entries(manifest)?;
    let results: Vec<(Value, u8)> = entries
        .par_iter()
        .map(|p| {
            let input = p.display().to_string();
            match run_one(cli, Some(p), true) {
                Ok(o) => (json!({ "input": input, "status": "ok", "result": o.json }), 0),
                Err(Failure::Invalid(lines, v)) => {
                    (json!({ "input": input, "status": "invalid", "violations": lines, "result": v }), 1)
                }
                Err(e @ Failure::Input(_)) => (json!({ "input": input, "status": "error", "error": e.to_string() }), 2),
            }
        })
        .collect();
    for (line, _) in &results {
        println!("{line}");
    }
    Ok(results.iter().map(|(_, c)| *c).max().unwrap_or(0))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(manifest) = &cli.manifest {
        return match run_batch(&cli, manifest) {
            Ok(code) => ExitCode::from(code),
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(e.code())
            }
        };
    }
    let file = match &cli.command {
        Command::H1(i) | Command::MtH1(i) | Command::Identify(i) | Command::Validate(i) => i.file.clone(),
        Command::Stabilize { input, .. }
        | Command::Reduce { input, .. }
        | Command::Embed { input, .. }
        | Command::EmbedS5 { input, .. } => input.file.clone(),
        Command::Relations { .. } => None,
    };
    match run_one(&cli, file.as_deref(), false) {
        Ok(out) => {
            if cli.json {
                println!("{}", out.json);
            } else {
                println!("{}", out.text);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            match &e {
                Failure::Invalid(_, v) if cli.json => println!("{v}"),
                Failure::Invalid(lines, _) => lines.iter().for_each(|l| println!("{l}")),
                Failure::Input(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(e.code())
        }
    }
}
