//! `shiftrecon`: command-line front end for the reconstruction pipeline.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input. Errors are written to
//! stderr as a single JSON object.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::json;

use shiftrecon_core::io::{canonicalize, from_json, parse_sequence, to_json, Document};
use shiftrecon_core::random::random_systems;
use shiftrecon_core::{
    compose_sbc, compose_tsd_morphisms, consistency_check, data_functor, reconstruct, tsd_from_sequence, word_functor,
    DynDiagram, Error, FiniteDynSys, ObsMorphism, ObservedSystem, SlidingBlockCode, SubshiftPresentation, TsdMorphism,
};

#[derive(Parser, Debug)]
#[command(name = "shiftrecon", version, about = "Observe, encode and reconstruct finite dynamical systems")]
struct Cli {
    /// Bound for language checks and word enumeration.
    #[arg(long, global = true, default_value_t = 8)]
    depth: usize,
    /// Top level of generated timeseries data.
    #[arg(long, global = true)]
    horizon: Option<usize>,
    /// Reconstruction order (default: top nonempty level).
    #[arg(long, global = true)]
    order: Option<usize>,
    /// Sampling stride, at least 1.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    dt: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the primary output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Timeseries data from an observed system (data), a presentation (words,
    /// --dt ignored) or a raw symbol stream. Horizon defaults to 4.
    Generate { input: PathBuf },
    /// Word sets of a presentation up to --depth.
    Words { presentation: PathBuf },
    /// Timeseries data to a reconstructed system.
    Reconstruct { tsd: PathBuf },
    /// Check that MORPHISM is a valid morphism X -> Y.
    CheckMorphism {
        #[arg(long, value_enum)]
        kind: MorphismKind,
        morphism: PathBuf,
        x: PathBuf,
        y: PathBuf,
    },
    /// OUTER after INNER.
    Compose {
        #[arg(long, value_enum)]
        kind: ComposeKind,
        outer: PathBuf,
        inner: PathBuf,
    },
    /// Colimit of a diagram of systems.
    Colimit { diagram: PathBuf },
    /// Reconstruct fully observed systems and compare up to conjugacy.
    Consistency {
        /// A system file; omit when using --random.
        system: Option<PathBuf>,
        #[arg(long, conflicts_with = "system")]
        random: Option<usize>,
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u64).range(1..))]
        max_states: u64,
    },
    /// Delay embedding with a window of K samples.
    DelayEmbed {
        observed: PathBuf,
        #[arg(short, long, value_parser = clap::value_parser!(u64).range(1..))]
        k: u64,
    },
    /// Subsample a system, or an observed system along its orbits, by --dt.
    Subsample { input: PathBuf },
    /// Parse, re-serialize and re-parse any document; prints the canonical form.
    Roundtrip { path: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MorphismKind {
    Obs,
    Sbc,
    Tsd,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum ComposeKind {
    Sbc,
    Tsd,
}

/// Reasons a command stops early.
enum Failure {
    Input { kind: String, message: String },
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input { kind: e.kind().to_string(), message: e.to_string() }
    }
}

type Outcome = Result<String, Failure>;

fn io_error(path: &Path, e: std::io::Error) -> Failure {
    Failure::Input { kind: "Io".into(), message: format!("{}: {e}", path.display()) }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn load<T: Document>(path: &Path) -> Result<T, Failure> {
    from_json(&read(path)?).map_err(|e| match e {
        Error::Format(m) => Failure::Input { kind: "Format".into(), message: format!("{}: {m}", path.display()) },
        other => other.into(),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let message = e.render().to_string();
            let message = message.lines().next().unwrap_or_default().trim_start_matches("error: ");
            emit_error("Usage", message);
            return ExitCode::from(2);
        }
    };
    match run(&cli) {
        Ok(text) => match write_output(cli.out.as_deref(), &text) {
            Ok(()) => ExitCode::SUCCESS,
            Err(f) => finish(f),
        },
        Err(f) => finish(f),
    }
}

fn finish(f: Failure) -> ExitCode {
    match f {
        Failure::Input { kind, message } => {
            emit_error(&kind, &message);
            ExitCode::from(2)
        }
        Failure::Check(report) => {
            print!("{report}");
            ExitCode::from(1)
        }
    }
}

fn emit_error(kind: &str, message: &str) {
    eprintln!("{}", json!({ "error": kind, "message": message }));
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| io_error(p, e)),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    let dt = cli.dt.unwrap_or(1);
    match &cli.command {
        Command::Generate { input } => generate(input, dt, cli.horizon.unwrap_or(4)),
        Command::Words { presentation } => words(&load(presentation)?, cli.depth),
        Command::Reconstruct { tsd } => {
            let r = reconstruct(&load(tsd)?, cli.order)?;
            if let Some(reason) = r.empty {
                eprintln!("{}", json!({ "warning": "empty reconstruction", "reason": format!("{reason:?}") }));
            }
            Ok(to_json(&r))
        }
        Command::CheckMorphism { kind, morphism, x, y } => check_morphism(*kind, morphism, x, y, cli.depth),
        Command::Compose { kind, outer, inner } => match kind {
            ComposeKind::Sbc => Ok(to_json(&compose_sbc(&load(outer)?, &load(inner)?)?)),
            ComposeKind::Tsd => Ok(to_json(&compose_tsd_morphisms(&load(outer)?, &load(inner)?)?)),
        },
        Command::Colimit { diagram } => {
            let d: DynDiagram = load(diagram)?;
            Ok(to_json(&d.colimit()?.system))
        }
        Command::Consistency { system, random, max_states } => {
            consistency(system.as_deref(), *random, *max_states as usize, cli.seed)
        }
        Command::DelayEmbed { observed, k } => {
            let x: ObservedSystem = load(observed)?;
            Ok(to_json(&x.delay_embed(*k as usize, dt)?))
        }
        Command::Subsample { input } => subsample(input, dt),
        Command::Roundtrip { path } => roundtrip(path),
    }
}

fn generate(input: &Path, dt: u64, horizon: usize) -> Outcome {
    let text = read(input)?;
    if text.trim_start().starts_with('{') {
        if let Ok(p) = from_json::<SubshiftPresentation>(&text) {
            return Ok(to_json(&word_functor(&p, horizon)));
        }
        let x: ObservedSystem = load(input)?;
        return Ok(to_json(&data_functor(&x, dt, horizon)?));
    }
    let seq = parse_sequence(&text)?;
    let sampled: Vec<_> = seq.into_iter().step_by(dt as usize).collect();
    Ok(to_json(&tsd_from_sequence(&sampled, horizon)))
}

fn words(p: &SubshiftPresentation, depth: usize) -> Outcome {
    let levels = p.words_up_to(depth);
    let mut out = String::new();
    for (i, l) in levels.iter().enumerate() {
        let ws: Vec<String> = l.iter().map(ToString::to_string).collect();
        writeln!(out, "level {i}: {} [{}]", l.len(), ws.join(" ")).unwrap();
    }
    let sizes: Vec<String> = levels.iter().map(|l| l.len().to_string()).collect();
    writeln!(out, "sizes: {}", sizes.join(",")).unwrap();
    Ok(out)
}

fn check_morphism(kind: MorphismKind, morphism: &Path, x: &Path, y: &Path, depth: usize) -> Outcome {
    let violations = match kind {
        MorphismKind::Obs => load::<ObsMorphism>(morphism)?.violations(&load(x)?, &load(y)?)?,
        MorphismKind::Tsd => load::<TsdMorphism>(morphism)?.violations(&load(x)?, &load(y)?)?,
        MorphismKind::Sbc => sbc_violations(&load(morphism)?, &load(x)?, &load(y)?, depth)?,
    };
    if violations.is_empty() {
        return Ok("PASS\n".into());
    }
    let mut report = String::from("FAIL\n");
    for v in &violations {
        writeln!(report, "  {v}").unwrap();
    }
    Err(Failure::Check(report))
}

/// Words of `src` (lengths `window+1 ..= depth+1`) whose image leaves `tgt`.
fn sbc_violations(
    code: &SlidingBlockCode,
    src: &SubshiftPresentation,
    tgt: &SubshiftPresentation,
    depth: usize,
) -> Result<Vec<String>, Error> {
    let mut out = Vec::new();
    let levels = src.words_up_to(depth);
    for (n, level) in levels.iter().enumerate().skip(code.window()) {
        let m = n - code.window();
        for w in level {
            let img = code.induced_word_map(m, w)?;
            if !tgt.contains_word(&img) {
                out.push(format!("level {m}: image {img} of {w} is not a word of the target"));
            }
        }
        if !out.is_empty() {
            break;
        }
    }
    Ok(out)
}

fn consistency(system: Option<&Path>, random: Option<usize>, max_states: usize, seed: Option<u64>) -> Outcome {
    let systems: Vec<FiniteDynSys> = match (system, random) {
        (Some(p), _) => vec![load(p)?],
        (None, Some(n)) => {
            let seed =
                seed.ok_or_else(|| Failure::Input { kind: "Usage".into(), message: "--random needs --seed".into() })?;
            random_systems(seed, n, max_states)
        }
        (None, None) => {
            return Err(Failure::Input { kind: "Usage".into(), message: "give a system file or --random N".into() })
        }
    };
    // par_iter keeps instance order in the collected results
    let reports = systems.par_iter().map(consistency_check).collect::<Result<Vec<_>, Error>>()?;
    let mut out = String::new();
    for (i, (sys, r)) in systems.iter().zip(&reports).enumerate() {
        writeln!(out, "instance {i}: {} states: {r}", sys.len()).unwrap();
    }
    let passed = reports.iter().filter(|r| r.consistent).count();
    let verdict = if passed == reports.len() { "PASS" } else { "FAIL" };
    writeln!(out, "{passed}/{} {verdict}", reports.len()).unwrap();
    if passed == reports.len() {
        Ok(out)
    } else {
        Err(Failure::Check(out))
    }
}

fn subsample(input: &Path, dt: u64) -> Outcome {
    let text = read(input)?;
    if let Ok(sys) = from_json::<FiniteDynSys>(&text) {
        return Ok(to_json(&sys.subsample(dt)?));
    }
    let x: ObservedSystem = load(input)?;
    Ok(to_json(&x.orbit_system(dt)?))
}

fn roundtrip(path: &Path) -> Outcome {
    let (kind, canonical) = canonicalize(&read(path)?)?;
    let (kind2, again) = canonicalize(&canonical)?;
    if kind != kind2 || canonical != again {
        return Err(Failure::Check(format!("FAIL: {kind} document is not stable under re-serialization\n")));
    }
    eprintln!("{}", json!({ "kind": kind.to_string(), "stable": true }));
    Ok(canonical)
}
