use std::fs;
use std::io::{self, BufWriter, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use dsign::format::{parse_instances, Instance, InstanceRecord, Metadata};
use dsign::report::{census_report, construct_report, spectrum_report, ConstructReport};
use dsign::runner::{verify, with_jobs, VerifyOptions};
use dsign::instance_from_spec;
use dsign_core::gen::{gen_exhaustive_normalized, gen_random, gen_random_indexed, named_instance, NAMED_INSTANCES};
use dsign_core::lemma_lab::{LemmaId, Scope};
use dsign_core::oracle::DEFAULT_ENUMERATION_BOUND;
use dsign_core::switching::normalized;
use dsign_core::Vertex;
use rayon::prelude::*;

/// Double signs of Hamiltonian circles in F2^2-labeled complete graphs.
#[derive(Parser)]
#[command(name = "dsign", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate instances.
    Gen(GenArgs),
    /// Triangle-sign counts, diversity, K4 classification and predicted spectrum.
    Census(AnalysisArgs),
    /// Enumerate Hamiltonian circles and their sign spectrum.
    Spectrum {
        #[command(flatten)]
        analysis: AnalysisArgs,
        /// Print one canonical circle per realized sign.
        #[arg(long)]
        witness: bool,
        /// Largest n to enumerate.
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_BOUND)]
        bound: usize,
    },
    /// Construct four circles with distinct signs and re-verify them.
    Construct {
        #[command(flatten)]
        analysis: AnalysisArgs,
        /// Print the case-analysis path taken.
        #[arg(long)]
        trace: bool,
        /// Worker threads for multi-instance input.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Check a claim over a finite domain.
    Verify(VerifyArgs),
    /// List claim ids and what they assert.
    Lemmas,
}

#[derive(Args)]
#[group(required = true, multiple = false, id = "generator")]
struct GenSource {
    /// Every labeling of K_N with the star at vertex 1 pinned to e (4 <= N <= 7).
    #[arg(long, value_name = "N")]
    exhaustive_normalized: Option<usize>,
    /// Uniform random labeling of K_N (needs --seed).
    #[arg(long, value_name = "N", requires = "seed")]
    random: Option<usize>,
    /// A named instance: share_vertex_k4, triangle_k4 or identity(N).
    #[arg(long, value_name = "NAME")]
    named: Option<String>,
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    source: GenSource,
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random instances; instance i uses stream i of the seed.
    #[arg(long, requires = "random")]
    count: Option<u64>,
    /// Write to FILE instead of standard output.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Emit JSON records, one per line.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct AnalysisArgs {
    /// Instance file (line or JSON format); `-` reads standard input.
    #[arg(long = "in", value_name = "FILE", conflicts_with = "instance", required_unless_present = "instance")]
    input: Option<PathBuf>,
    /// Inline instance: share_vertex_k4, triangle_k4, identity(N), random(N,SEED) or normalized(N,INDEX).
    #[arg(long, value_name = "SPEC")]
    instance: Option<String>,
    /// Switch so that every edge at vertex V carries e before analysis.
    #[arg(long, value_name = "V")]
    normalize: Option<Vertex>,
    /// Emit JSON reports, one per line.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Claim id, or `all` to run every claim over its default scope.
    #[arg(long)]
    lemma: String,
    /// exhaustive_k4, exhaustive_group, exhaustive_normalized(N) or random(N,COUNT[,SEED]).
    #[arg(long)]
    scope: Option<String>,
    /// Seed for random scopes that do not name one.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Worker threads; defaults to every core.
    #[arg(long)]
    jobs: Option<usize>,
    /// Run exhaustive scopes above the size cap.
    #[arg(long)]
    allow_large: bool,
    #[arg(long)]
    json: bool,
}

/// Exit status for a run that found a violation.
const VIOLATION: u8 = 1;
/// Exit status for bad arguments or unreadable input.
const USAGE: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(VIOLATION),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(USAGE)
        }
    }
}

/// Returns whether the run found no violation.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Gen(args) => gen(args).map(|()| true),
        Command::Census(args) => {
            for inst in load(&args)? {
                let report = census_report(&inst)?;
                emit(args.json, &report, || report.to_string())?;
            }
            Ok(true)
        }
        Command::Spectrum { analysis, witness, bound } => {
            let mut ok = true;
            for inst in load(&analysis)? {
                let report = spectrum_report(&inst, bound, witness)?;
                emit(analysis.json, &report, || report.to_string())?;
                ok &= report.consistent;
            }
            Ok(ok)
        }
        Command::Construct { analysis, trace, jobs } => {
            let instances = load(&analysis)?;
            let reports: Vec<ConstructReport> =
                with_jobs(jobs, || instances.par_iter().map(construct_report).collect::<Result<_, _>>())?;
            let mut ok = true;
            for report in &reports {
                emit(analysis.json, report, || report.render(trace))?;
                ok &= !report.status.is_violation();
            }
            Ok(ok)
        }
        Command::Verify(args) => verify_command(args),
        Command::Lemmas => {
            for id in LemmaId::ALL {
                println!("{:<18} [{}] {}", id.as_str(), id.default_scope(), id.claim());
            }
            Ok(true)
        }
    }
}

fn emit<T: serde::Serialize>(json: bool, value: &T, text: impl FnOnce() -> String) -> Result<()> {
    if json {
        println!("{}", serde_json::to_string(value)?);
    } else {
        println!("{}", text());
    }
    Ok(())
}

fn load(args: &AnalysisArgs) -> Result<Vec<Instance>> {
    let mut instances = match (&args.input, &args.instance) {
        (Some(path), _) => {
            let text = if path.as_os_str() == "-" {
                let mut s = String::new();
                io::stdin().read_to_string(&mut s).context("reading standard input")?;
                s
            } else {
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
            };
            parse_instances(&text).with_context(|| format!("parsing {}", path.display()))?
        }
        (None, Some(spec)) => vec![instance_from_spec(spec)?],
        (None, None) => bail!("pass --in FILE or --instance SPEC"),
    };
    if let Some(v) = args.normalize {
        for inst in &mut instances {
            inst.graph = normalized(&inst.graph, v).with_context(|| format!("normalizing at vertex {v}"))?;
        }
    }
    Ok(instances)
}

fn gen(args: GenArgs) -> Result<()> {
    let sink: Box<dyn Write> = match &args.out {
        Some(path) => Box::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?),
        None => Box::new(io::stdout().lock()),
    };
    let mut out = BufWriter::new(sink);
    let mut write = |record: InstanceRecord| -> Result<()> {
        if args.json {
            writeln!(out, "{}", record.to_json())?;
        } else {
            write!(out, "{}", record.to_text())?;
        }
        Ok(())
    };
    let src = &args.source;
    if let Some(n) = src.exhaustive_normalized {
        let generator = format!("exhaustive_normalized({n})");
        for (i, g) in gen_exhaustive_normalized(n)?.enumerate() {
            let metadata =
                Metadata { name: Some(format!("normalized({n},{i})")), seed: None, generator: Some(generator.clone()) };
            write(InstanceRecord::from_graph(&g, metadata))?;
        }
    } else if let Some(n) = src.random {
        if !(3..=dsign_core::graph::MAX_VERTICES).contains(&n) {
            bail!("--random needs 3 <= N <= {}", dsign_core::graph::MAX_VERTICES);
        }
        let seed = args.seed.expect("clap requires --seed");
        match args.count {
            None => {
                let metadata = Metadata { name: None, seed: Some(seed), generator: Some(format!("random({n},{seed})")) };
                write(InstanceRecord::from_graph(&gen_random(n, seed), metadata))?;
            }
            Some(count) => {
                for i in 0..count {
                    let metadata = Metadata {
                        name: Some(format!("random({n},{seed})[{i}]")),
                        seed: Some(seed),
                        generator: Some(format!("random({n},{count},{seed})")),
                    };
                    write(InstanceRecord::from_graph(&gen_random_indexed(n, seed, i), metadata))?;
                }
            }
        }
    } else if let Some(name) = &src.named {
        let g = named_instance(name).with_context(|| format!("known names: {}", NAMED_INSTANCES.join(", ")))?;
        let metadata = Metadata { name: Some(name.clone()), seed: None, generator: Some("named".into()) };
        write(InstanceRecord::from_graph(&g, metadata))?;
    }
    out.flush()?;
    Ok(())
}

fn verify_command(args: VerifyArgs) -> Result<bool> {
    let ids: Vec<LemmaId> = if args.lemma == "all" {
        if args.scope.is_some() {
            bail!("--lemma all runs each claim over its default scope; drop --scope");
        }
        LemmaId::ALL.to_vec()
    } else {
        vec![args.lemma.parse::<LemmaId>()?]
    };
    let opts = VerifyOptions { jobs: args.jobs, allow_large: args.allow_large };
    let mut ok = true;
    for id in ids {
        let scope = match &args.scope {
            Some(s) => Scope::parse(s, args.seed)?,
            None => id.default_scope(),
        };
        let report = verify(id, &scope, opts)?;
        if args.json {
            println!("{}", serde_json::to_string(&report)?);
        } else {
            println!("{report}");
        }
        ok &= report.passed;
    }
    Ok(ok)
}
