mod scene;

use clap::{Parser, Subcommand, ValueEnum};
use logsod::invariants::{
    decompose_finite, decompose_kfl, decompose_nc, decompose_simplicial_complexified, etale_filter,
    DecompositionReport,
};
use logsod::monoid::{FaceLattice, KummerExtension, LatticeVector, ToricMonoid};
use logsod::oracles::{run_all, Fault, OracleResult};
use logsod::psod::{psod_infinite, psod_nc, psod_simplicial, psod_snc, OrderKind, PsodDescriptor};
use logsod::strata::{strictification, BlowupLog, Crossing, SncComplex};
use scene::{Input, LevelArg, Scene};
use serde::Serialize;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use thiserror::Error;

#[derive(Parser)]
#[command(
    name = "logsod",
    version,
    about = "Root stacks of log pairs: orders, decompositions, invariants"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Json)]
    format: Format,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Forbid nondeterministic iteration order (always honoured).
    #[arg(
        long,
        env = "LOGSOD_SEEDLESS",
        default_value = "1",
        hide = true,
        global = true
    )]
    seedless: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Rays, simpliciality, indecomposables and faces of a monoid.
    Monoid { file: Option<PathBuf> },
    /// The canonical Kummer extension of a simplicial monoid.
    Kummer { file: Option<PathBuf> },
    /// Ordered factor labels of a decomposition.
    Psod {
        file: Option<PathBuf>,
        /// Truncation n for the factorial order; root orders r for the standard order.
        #[arg(long)]
        level: Option<LevelArg>,
        /// `standard` or `factorial`
        #[arg(long)]
        order: Option<OrderKind>,
    },
    /// Split an additive invariant along strata.
    Decompose {
        file: Option<PathBuf>,
        /// Root orders r (standard order) or truncation n (factorial order, NC pairs).
        #[arg(long)]
        level: Option<LevelArg>,
        /// `standard` or `factorial`
        #[arg(long)]
        order: Option<OrderKind>,
        /// Count only characters of order prime to p.
        #[arg(long)]
        prime_to: Option<u64>,
    },
    /// Blow up a normal crossings pair until it is simple.
    Strictify { file: Option<PathBuf> },
    /// Run every brute-force oracle.
    Selfcheck {
        /// Largest factorial level checked exhaustively
        #[arg(long, default_value_t = 4)]
        exhaustive_level: u64,
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0}")]
    Domain(#[from] logsod::Error),
    #[error("self-check failed: {0}")]
    Check(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Check(_) => 4,
        }
    }
}

fn domain<E: Into<logsod::Error>>(e: E) -> CliError {
    CliError::Domain(e.into())
}

fn read_scene(file: &Option<PathBuf>) -> Result<Scene, CliError> {
    let mut text = String::new();
    match file {
        Some(p) if p.as_os_str() != "-" => {
            text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Parse(format!("{}: {e}", p.display())))?
        }
        _ => {
            std::io::stdin().read_to_string(&mut text)?;
        }
    }
    scene::parse(&text).map_err(CliError::Parse)
}

/// Rendered output: the JSON document and its text form.
struct Output {
    json: serde_json::Value,
    text: String,
    failed: Option<String>,
}

fn output<T: Serialize>(value: &T, text: String) -> Result<Output, CliError> {
    let json = serde_json::to_value(value).map_err(|e| CliError::Parse(e.to_string()))?;
    Ok(Output {
        json,
        text,
        failed: None,
    })
}

#[derive(Serialize)]
struct MonoidReport {
    rank: usize,
    generators: Vec<LatticeVector>,
    saturated: bool,
    rays: Vec<LatticeVector>,
    simplicial: bool,
    indecomposables: Vec<LatticeVector>,
    faces: FaceLattice,
    /// Whether the canonical Kummer extension is trivial, for simplicial monoids.
    #[serde(skip_serializing_if = "Option::is_none")]
    free: Option<bool>,
}

fn vectors(v: &[LatticeVector]) -> String {
    v.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_monoid(m: &ToricMonoid) -> Result<Output, CliError> {
    let simplicial = m.is_simplicial().map_err(domain)?;
    let free = if simplicial {
        Some(
            m.canonical_kummer_extension()
                .map_err(domain)?
                .is_identity(),
        )
    } else {
        None
    };
    let r = MonoidReport {
        rank: m.rank(),
        generators: m.generators().to_vec(),
        saturated: m.is_saturated().map_err(domain)?,
        rays: m.extremal_rays().map_err(domain)?,
        simplicial,
        indecomposables: m.indecomposables().map_err(domain)?,
        faces: m.face_strata().map_err(domain)?,
        free,
    };
    let mut text = format!(
        "rank {}\nrays {}\nsimplicial {}\nsaturated {}\n",
        r.rank,
        vectors(&r.rays),
        r.simplicial,
        r.saturated
    );
    text += &format!("indecomposables {}\n", vectors(&r.indecomposables));
    for f in &r.faces.faces {
        text += &format!("face dim {} rays {:?}\n", f.dim, f.rays);
    }
    if let Some(free) = r.free {
        text += &format!("free {free}\n");
    }
    output(&r, text)
}

fn kummer_text(ext: &KummerExtension) -> String {
    let mut text = String::new();
    for (ray, c) in ext.rays.iter().zip(&ext.root_orders) {
        text += &format!("ray {ray} root order {c}\n");
    }
    let factors: Vec<String> = ext
        .quotient_invariant_factors
        .iter()
        .map(ToString::to_string)
        .collect();
    text += &format!("quotient [{}]\n", factors.join(", "));
    for (j, w) in ext.coordinate_weights.iter().enumerate() {
        text += &format!("weights of coordinate {} {:?}\n", j + 1, w);
    }
    text
}

fn factorial_default(order: Option<OrderKind>) -> OrderKind {
    order.unwrap_or(OrderKind::Factorial)
}

fn psod_text(d: &PsodDescriptor) -> String {
    let mut rows = vec![[
        "#".to_string(),
        "char".into(),
        "stratum".into(),
        "provenance".into(),
        "first level".into(),
        String::new(),
    ]];
    for (i, l) in d.labels.iter().enumerate() {
        rows.push([
            (i + 1).to_string(),
            l.character.to_string(),
            if l.stratum.is_empty() {
                "X".into()
            } else {
                format!("{{{}}}", l.stratum.join(","))
            },
            format!("{:?}", l.provenance),
            l.first_level.to_string(),
            if l.zero { "zero".into() } else { String::new() },
        ]);
    }
    align(&rows)
}

fn align<const N: usize>(rows: &[[String; N]]) -> String {
    let widths: Vec<usize> = (0..N)
        .map(|k| rows.iter().map(|r| r[k].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:<w$}"))
            .collect();
        out += cells.join("  ").trim_end();
        out.push('\n');
    }
    out
}

fn snc_psod(
    c: &SncComplex,
    level: Option<LevelArg>,
    order: OrderKind,
) -> Result<PsodDescriptor, CliError> {
    match order {
        OrderKind::Factorial => match level {
            None => psod_infinite(c, 2).map_err(domain),
            Some(l) => match l.single() {
                Some(n) => psod_infinite(c, n).map_err(domain),
                None => psod_snc(c, &l.per_component(c.len()), order).map_err(domain),
            },
        },
        OrderKind::Standard => {
            let r = level.unwrap_or(LevelArg::One(2)).per_component(c.len());
            psod_snc(c, &r, order).map_err(domain)
        }
    }
}

fn single_level(level: Option<LevelArg>, default: u64) -> Result<u64, CliError> {
    match level {
        None => Ok(default),
        Some(l) => l
            .single()
            .ok_or_else(|| CliError::Parse("this input takes a single level".into())),
    }
}

fn cmd_psod(
    s: Scene,
    level: Option<LevelArg>,
    order: Option<OrderKind>,
) -> Result<Output, CliError> {
    let level = level.or(s.options.level);
    let order = order.or(s.options.order);
    match &s.input {
        Input::Snc(c) => {
            let d = snc_psod(c, level, factorial_default(order))?;
            let text = psod_text(&d);
            output(&d, text)
        }
        Input::Nc(nc) => {
            let d = psod_nc(nc, single_level(level, 2)?).map_err(domain)?;
            let mut text = psod_text(&d.descriptor());
            for (l, n) in &d.totals {
                text += &format!("{l}: {n}\n");
            }
            output(&d, text)
        }
        Input::Simplicial(chart) => {
            let d = psod_simplicial(chart, single_level(level, 2)?).map_err(domain)?;
            let text = psod_text(&d.descriptor);
            output(&d, text)
        }
        Input::Monoid(_) => Err(CliError::Parse(
            "psod needs an \"snc\", \"nc\" or \"simplicial\" input".into(),
        )),
    }
}

fn cmd_decompose(
    s: Scene,
    level: Option<LevelArg>,
    order: Option<OrderKind>,
    prime_to: Option<u64>,
) -> Result<Output, CliError> {
    let level = level.or(s.options.level);
    let order = order.or(s.options.order).unwrap_or(OrderKind::Standard);
    let prime_to = prime_to.or(s.options.prime_to);
    let v = s
        .assignment
        .ok_or_else(|| CliError::Parse("decompose needs an \"assignment\"".into()))?;
    let report: DecompositionReport = match &s.input {
        Input::Snc(c) => match order {
            OrderKind::Standard => {
                let r = level.unwrap_or(LevelArg::One(1)).per_component(c.len());
                decompose_finite(c, &r, &v)
            }
            OrderKind::Factorial => decompose_kfl(c, &v, single_level(level, 1)?),
        },
        Input::Nc(nc) => decompose_nc(nc, &v, single_level(level, 1)?),
        Input::Simplicial(chart) => {
            decompose_simplicial_complexified(chart, &v, single_level(level, 1)?)
        }
        Input::Monoid(_) => {
            return Err(CliError::Parse(
                "decompose needs an \"snc\", \"nc\" or \"simplicial\" input".into(),
            ))
        }
    }
    .map_err(domain)?;
    let report = match prime_to {
        Some(p) => etale_filter(&report, p).map_err(domain)?,
        None => report,
    };
    let text = report.to_text();
    output(&report, text)
}

#[derive(Serialize)]
struct StrictifyReport<'a> {
    complex: &'a SncComplex,
    log: &'a BlowupLog,
    crossings: &'a [Crossing],
    simple: bool,
}

fn cmd_strictify(s: Scene) -> Result<Output, CliError> {
    let Input::Nc(nc) = &s.input else {
        return Err(CliError::Parse("strictify needs an \"nc\" input".into()));
    };
    let st = strictification(nc).map_err(domain)?;
    let simple = st.crossings.iter().all(|x| x.is_simple());
    let mut text = format!("{} blow-up(s)\n", st.log.len());
    for step in &st.log.0 {
        text += &format!(
            "blow up {} (codim {}) -> {}\n",
            step.center, step.codim, step.exceptional
        );
    }
    text += &format!("components {}\n", st.complex.components().join(" "));
    for j in st.complex.strata().iter().filter(|j| j.len() >= 2) {
        text += &format!(
            "stratum {} pieces {}\n",
            st.complex.display(j),
            st.complex.pieces(j)
        );
    }
    text += &format!("{} crossing(s), simple {simple}\n", st.crossings.len());
    output(
        &StrictifyReport {
            complex: &st.complex,
            log: &st.log,
            crossings: &st.crossings,
            simple,
        },
        text,
    )
}

fn cmd_selfcheck(level: u64, fault: Option<Fault>) -> Result<Output, CliError> {
    let results: Vec<OracleResult> = run_all(level, fault);
    let mut text = String::new();
    for r in &results {
        text += &format!(
            "{} {} ({} checks)\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.name,
            r.checked
        );
        if let Some(c) = &r.counterexample {
            text += &format!("  counterexample: {c}\n");
        }
    }
    let failed: Vec<&str> = results
        .iter()
        .filter(|r| !r.passed)
        .map(|r| r.name.as_str())
        .collect();
    let mut out = output(&results, text)?;
    if !failed.is_empty() {
        out.failed = Some(failed.join(", "));
    }
    Ok(out)
}

fn run(cli: Cli) -> Result<(), CliError> {
    if cli.seedless != "1" {
        log::info!(
            "LOGSOD_SEEDLESS={}: iteration order is deterministic regardless",
            cli.seedless
        );
    }
    let out = match cli.command {
        Command::Monoid { file } => match read_scene(&file)?.input {
            Input::Monoid(m) => cmd_monoid(&m)?,
            other => {
                return Err(CliError::Parse(format!(
                    "monoid needs a \"monoid\" input, got {:?}",
                    other.kind()
                )))
            }
        },
        Command::Kummer { file } => {
            let s = read_scene(&file)?;
            let m = match &s.input {
                Input::Monoid(m) => m.clone(),
                Input::Simplicial(c) => c.monoid.clone(),
                other => {
                    return Err(CliError::Parse(format!(
                        "kummer needs a monoid, got {:?}",
                        other.kind()
                    )))
                }
            };
            let ext = m.canonical_kummer_extension().map_err(domain)?;
            let text = kummer_text(&ext);
            output(&ext, text)?
        }
        Command::Psod { file, level, order } => cmd_psod(read_scene(&file)?, level, order)?,
        Command::Decompose {
            file,
            level,
            order,
            prime_to,
        } => cmd_decompose(read_scene(&file)?, level, order, prime_to)?,
        Command::Strictify { file } => cmd_strictify(read_scene(&file)?)?,
        Command::Selfcheck {
            exhaustive_level,
            inject_fault,
        } => cmd_selfcheck(exhaustive_level, inject_fault)?,
    };
    let rendered = match cli.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&out.json)
                .map_err(|e| CliError::Parse(e.to_string()))?;
            s.push('\n');
            s
        }
        Format::Text => out.text,
    };
    match &cli.output {
        Some(p) => std::fs::write(p, rendered)?,
        None => std::io::stdout().write_all(rendered.as_bytes())?,
    }
    match out.failed {
        Some(f) => Err(CliError::Check(f)),
        None => Ok(()),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("logsod: {e}");
            ExitCode::from(e.code())
        }
    }
}
