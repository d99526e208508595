//! `reconf`: generation, reduction, solving, verification and experiments for maxmin
//! binary CSP reconfiguration.
//!
//! Every flag marked `[env: ...]` in `--help` can be set through the environment with
//! the `RECONF_` prefix. Output files are written atomically. Exit status is 0 iff every
//! verification performed by the command passes.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use reconf_core::compose::{arity_reduce, compose_system, ReferenceTester, DEFAULT_CODE_LIMIT};
use reconf_core::experiments::{self, NAMES};
use reconf_core::format::{
    parse_instance, parse_sequence, parse_sigma_sequence, parse_system_descriptor, write_blocks,
    write_instance, write_sequence, write_system_descriptor, write_trace,
};
use reconf_core::generate::{generate, GenerateParams, Shape};
use reconf_core::hadamard::{
    distance_profile, generate_codeword_path, generate_verified_path, verify_codeword_path,
};
use reconf_core::pipeline::{report_csv, run_micro, run_n9, MicroOptions};
use reconf_core::robustize::{
    robustize, BlockAssignment, CircuitKind, CircuitSystem, SigmaSequence,
};
use reconf_core::seeds::DEFAULT_SEED;
use reconf_core::solver::{maxmin_value, reachable_at_threshold, DEFAULT_BUDGET};
use reconf_core::{sequence_value, ReconfInstance};

const SYSTEM_FILE: &str = "system.txt";
const SIGMA_INI_FILE: &str = "sigma_ini.txt";
const SIGMA_TAR_FILE: &str = "sigma_tar.txt";
const INSTANCE_FILE: &str = "instance.txt";
const TRACE_FILE: &str = "trace.txt";

#[derive(Parser, Debug)]
#[command(
    name = "reconf",
    version,
    about = "Maxmin binary CSP reconfiguration toolkit"
)]
struct Cli {
    /// Root seed; every random stream is derived from it.
    #[arg(long, global = true, env = "RECONF_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Cap on configurations explored by the exact solver.
    #[arg(long, global = true, env = "RECONF_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a random binary instance.
    Generate(GenerateArgs),
    /// Compute the exact maxmin value of an instance.
    Solve(SolveArgs),
    /// Hadamard codeword paths and the partial-sum experiment.
    #[command(subcommand)]
    Hadamard(HadamardCommand),
    /// Build the circuit system of a binary instance.
    Robustize(RobustizeArgs),
    /// Report per-step circuit satisfaction of a single-bit-flip sequence.
    VerifySequence(VerifyArgs),
    /// Compose every circuit of a system with the reference tester.
    Compose(ComposeArgs),
    /// Reduce a 4-ary instance to a binary one.
    ArityReduce(ArityArgs),
    /// Run every stage on one instance and report per-stage values.
    Pipeline(PipelineArgs),
    /// Run a scripted experiment and write its CSV.
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Path,
    Cycle,
    Random,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(long, value_enum, default_value_t = Kind::Path)]
    kind: Kind,
    #[arg(long, default_value_t = 3)]
    vertices: usize,
    #[arg(long, default_value_t = 4)]
    alphabet: u32,
    /// Extra random pairs per constraint as a fraction of all pairs.
    #[arg(long, default_value_t = 0.2)]
    density: f64,
    /// Edge count for `--kind random`.
    #[arg(long, default_value_t = 3)]
    edges: usize,
    /// Plant a satisfying path between the endpoints.
    #[arg(long)]
    satisfiable: bool,
    #[arg(long, env = "RECONF_OUT")]
    out: Option<PathBuf>,
    /// Also write the planted path.
    #[arg(long)]
    walk: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Only decide reachability through assignments satisfying at least K edges.
    #[arg(long, value_name = "K")]
    threshold: Option<u64>,
    /// Write the optimal sequence here.
    #[arg(long, env = "RECONF_OUT")]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum HadamardCommand {
    /// Per-step distance profile of a random codeword path.
    Path {
        #[arg(long, env = "RECONF_N", default_value_t = 9)]
        n: u32,
        #[arg(long)]
        alpha: u64,
        #[arg(long)]
        beta: u64,
        /// Resample until both path conditions hold at every step.
        #[arg(long)]
        verify: bool,
        #[arg(long, default_value_t = 20)]
        retries: u32,
        #[arg(long, env = "RECONF_OUT")]
        out: Option<PathBuf>,
    },
    /// Frequency of deep dips in random balanced ±1 sequences.
    PartialSum {
        /// Half length of the sequences.
        #[arg(long, env = "RECONF_N", default_value_t = 128)]
        n: usize,
        #[arg(long, env = "RECONF_TRIALS", default_value_t = 100_000)]
        trials: u64,
        #[arg(long, env = "RECONF_OUT")]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Mode {
    Robust,
    Weakened,
}

#[derive(Args, Debug)]
struct RobustizeArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Output directory.
    #[arg(long, env = "RECONF_OUT")]
    out: PathBuf,
    #[arg(long, value_enum, env = "RECONF_MODE", default_value_t = Mode::Robust)]
    mode: Mode,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Directory written by `robustize`.
    #[arg(long)]
    system: PathBuf,
    #[arg(long)]
    sigma: PathBuf,
    /// Per-step counts as CSV.
    #[arg(long, env = "RECONF_OUT")]
    out: Option<PathBuf>,
    /// Also fail unless every circuit holds at every step.
    #[arg(long)]
    require_all: bool,
}

#[derive(Args, Debug)]
struct ComposeArgs {
    #[arg(long)]
    system: PathBuf,
    /// Output directory.
    #[arg(long, env = "RECONF_OUT")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct ArityArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, env = "RECONF_OUT")]
    out: PathBuf,
    /// Trace output; defaults to the output path with a `.trace` suffix.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CODE_LIMIT)]
    code_limit: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PipelineMode {
    Micro,
    N9,
}

#[derive(Args, Debug)]
struct PipelineArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long, value_enum, env = "RECONF_MODE", default_value_t = PipelineMode::Micro)]
    mode: PipelineMode,
    #[arg(long, env = "RECONF_OUT")]
    report: Option<PathBuf>,
    /// Source path for `n9` mode; searched for when absent.
    #[arg(long)]
    path: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ExperimentArgs {
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(NAMES))]
    name: String,
    #[arg(long, env = "RECONF_N")]
    n: Option<u32>,
    #[arg(long, env = "RECONF_TRIALS")]
    trials: Option<u64>,
    #[arg(long, env = "RECONF_OUT")]
    out: Option<PathBuf>,
}

/// Writes through a sibling temporary file and a rename.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let name = path.file_name().context("output path has no file name")?;
    let tmp = dir.join(format!(
        ".{}.tmp-{}",
        name.to_string_lossy(),
        std::process::id()
    ));
    let mut f = fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?;
    f.write_all(text.as_bytes())?;
    f.sync_all()?;
    fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write_atomic(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(path: &Path) -> Result<ReconfInstance> {
    parse_instance(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn load_system(dir: &Path) -> Result<CircuitSystem> {
    let path = dir.join(SYSTEM_FILE);
    let desc = parse_system_descriptor(&read(&path)?)
        .with_context(|| format!("parsing {}", path.display()))?;
    let kind = if desc.weakened {
        CircuitKind::Weakened
    } else {
        CircuitKind::Robust
    };
    let system = robustize(&desc.instance, kind)?;
    if system.n != desc.n {
        bail!(
            "{}: n = {} does not match the instance (n = {})",
            path.display(),
            desc.n,
            system.n
        );
    }
    Ok(system)
}

fn announce_seed(seed: u64) {
    eprintln!("seed {seed}");
}

fn verdict(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn cmd_generate(a: GenerateArgs, seed: u64) -> Result<ExitCode> {
    announce_seed(seed);
    let shape = match a.kind {
        Kind::Path => Shape::Path,
        Kind::Cycle => Shape::Cycle,
        Kind::Random => Shape::Random { edges: a.edges },
    };
    let (inst, walk) = generate(&GenerateParams {
        shape,
        vertices: a.vertices,
        alphabet: a.alphabet,
        density: a.density,
        satisfiable: a.satisfiable,
        seed,
    })?;
    emit(a.out.as_deref(), &write_instance(&inst))?;
    match (a.walk, walk) {
        (Some(p), Some(w)) => write_atomic(&p, &write_sequence(&inst.graph, &w))?,
        (Some(_), None) => bail!("--walk needs --satisfiable"),
        _ => {}
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_solve(a: SolveArgs, budget: u64) -> Result<ExitCode> {
    let inst = load_instance(&a.instance)?;
    if let Some(k) = a.threshold {
        let seq = reachable_at_threshold(&inst, k, budget)?;
        println!(
            "threshold {k}: {}",
            if seq.is_some() {
                "reachable"
            } else {
                "unreachable"
            }
        );
        if let (Some(p), Some(s)) = (a.out.as_deref(), &seq) {
            write_atomic(p, &write_sequence(&inst.graph, s))?;
        }
        return Ok(ExitCode::SUCCESS);
    }
    let r = maxmin_value(&inst, budget)?;
    println!("{}", r.optimum);
    if let (Some(p), Some(w)) = (a.out.as_deref(), &r.witness) {
        write_atomic(p, &write_sequence(&inst.graph, w))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_hadamard(c: HadamardCommand, seed: u64) -> Result<ExitCode> {
    announce_seed(seed);
    match c {
        HadamardCommand::Path {
            n,
            alpha,
            beta,
            verify,
            retries,
            out,
        } => {
            let path = if verify {
                generate_verified_path(alpha, beta, n, seed, retries)?
            } else {
                generate_codeword_path(alpha, beta, n, seed, retries)?
            };
            let mut csv =
                String::from("step,flip,dist-alpha,dist-beta,min-dist-other,argmin-other\n");
            for r in distance_profile(&path)? {
                let flip = if r.step == 0 {
                    String::new()
                } else {
                    path.flips[r.step - 1].to_string()
                };
                csv.push_str(&format!(
                    "{},{flip},{},{},{},{}\n",
                    r.step, r.dist_alpha, r.dist_beta, r.min_dist_other, r.argmin_other
                ));
            }
            emit(out.as_deref(), &csv)?;
            let v = verify_codeword_path(&path)?;
            eprintln!("verdict {v:?}");
            Ok(verdict(!verify || v.is_pass()))
        }
        HadamardCommand::PartialSum { n, trials, out } => {
            let r = experiments::partial_sum(n, trials, seed);
            emit(out.as_deref(), &r.csv)?;
            eprintln!("{}", r.summary);
            Ok(verdict(r.pass))
        }
    }
}

fn cmd_robustize(a: RobustizeArgs) -> Result<ExitCode> {
    let inst = load_instance(&a.instance)?;
    let kind = match a.mode {
        Mode::Robust => CircuitKind::Robust,
        Mode::Weakened => CircuitKind::Weakened,
    };
    let system = robustize(&inst, kind)?;
    let g = system.graph();
    let blocks = |b: &BlockAssignment| {
        let named: Vec<_> = g
            .vertex_ids()
            .iter()
            .map(String::as_str)
            .zip(&b.blocks)
            .collect();
        write_blocks(system.n, &named)
    };
    write_atomic(
        &a.out.join(SYSTEM_FILE),
        &write_system_descriptor(
            system.n,
            matches!(kind, CircuitKind::Weakened),
            &system.source,
        ),
    )?;
    write_atomic(&a.out.join(SIGMA_INI_FILE), &blocks(&system.sigma_ini))?;
    write_atomic(&a.out.join(SIGMA_TAR_FILE), &blocks(&system.sigma_tar))?;
    write_atomic(&a.out.join(TRACE_FILE), &write_trace(&system.block_trace()))?;
    println!("n {} circuits {}", system.n, system.circuits.len());
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(a: VerifyArgs) -> Result<ExitCode> {
    let system = load_system(&a.system)?;
    let raw = parse_sigma_sequence(&read(&a.sigma)?)
        .with_context(|| format!("parsing {}", a.sigma.display()))?;
    let seq: SigmaSequence = raw.resolve(system.graph())?;
    if seq.start.n != system.n {
        bail!(
            "sequence has n = {}, system has n = {}",
            seq.start.n,
            system.n
        );
    }
    let counts = system.check_sequence(&seq)?;
    let total = system.circuits.len() as u64;
    let mut csv = String::from("step,satisfied,total\n");
    for (t, c) in counts.iter().enumerate() {
        csv.push_str(&format!("{t},{c},{total}\n"));
    }
    emit(a.out.as_deref(), &csv)?;
    let starts = seq.start == system.sigma_ini;
    let ends = seq.last() == system.sigma_tar;
    let worst = counts.iter().copied().min().unwrap_or(total);
    eprintln!(
        "steps {} worst {worst}/{total} start {starts} end {ends}",
        counts.len()
    );
    Ok(verdict(
        starts && ends && (!a.require_all || worst == total),
    ))
}

fn cmd_compose(a: ComposeArgs) -> Result<ExitCode> {
    let system = load_system(&a.system)?;
    let composed = compose_system(&system, &ReferenceTester)?;
    write_atomic(
        &a.out.join(INSTANCE_FILE),
        &write_instance(&composed.instance),
    )?;
    write_atomic(&a.out.join(TRACE_FILE), &write_trace(&composed.trace))?;
    let g = &composed.instance.graph;
    println!(
        "vertices {} edges {} arity {}",
        g.vertex_count(),
        g.edge_count(),
        g.arity()
    );
    Ok(verdict(composed.instance.endpoints_satisfy()))
}

fn cmd_arity(a: ArityArgs) -> Result<ExitCode> {
    let inst = load_instance(&a.instance)?;
    let red = arity_reduce(&inst, a.code_limit)?;
    write_atomic(&a.out, &write_instance(&red.instance))?;
    let trace = a.trace.unwrap_or_else(|| {
        let mut p = a.out.clone().into_os_string();
        p.push(".trace");
        p.into()
    });
    write_atomic(&trace, &write_trace(&red.trace))?;
    let g = &red.instance.graph;
    println!(
        "vertices {} edges {} max-alphabet {}",
        g.vertex_count(),
        g.edge_count(),
        g.max_alphabet()
    );
    Ok(verdict(
        inst.endpoints_satisfy() == red.instance.endpoints_satisfy(),
    ))
}

fn cmd_pipeline(a: PipelineArgs, seed: u64, budget: u64) -> Result<ExitCode> {
    announce_seed(seed);
    let inst = load_instance(&a.instance)?;
    let (reports, failures) = match a.mode {
        PipelineMode::Micro => {
            let opts = MicroOptions {
                budget,
                ..MicroOptions::default()
            };
            let run = run_micro(&inst, &opts)?;
            let failures = run.failures();
            (run.reports, failures)
        }
        PipelineMode::N9 => {
            let path = match &a.path {
                Some(p) => {
                    let raw = parse_sequence(&read(p)?)
                        .with_context(|| format!("parsing {}", p.display()))?;
                    let seq = raw.resolve(&inst.graph)?;
                    if !sequence_value(&inst.graph, &seq)?.is_one() {
                        bail!("{}: path leaves the satisfying assignments", p.display());
                    }
                    Some(seq)
                }
                None => None,
            };
            let run = run_n9(&inst, path, seed, 20, 1 << 20)?;
            let mut failures = Vec::new();
            if !run.all_satisfied() {
                failures.push("a circuit fails along the block sequence".to_string());
            }
            if !run.round_trips() {
                failures.push("decoding does not recover the source path".to_string());
            }
            (run.reports, failures)
        }
    };
    emit(a.report.as_deref(), &report_csv(&reports))?;
    for f in &failures {
        eprintln!("check failed: {f}");
    }
    Ok(verdict(failures.is_empty()))
}

fn cmd_experiment(a: ExperimentArgs, seed: u64, budget: u64) -> Result<ExitCode> {
    announce_seed(seed);
    let out = match a.name.as_str() {
        "fig2-profile" => experiments::fig2_profile(a.n.unwrap_or(9), seed, 20)?,
        "partial-sum" => experiments::partial_sum(
            a.n.map_or(128, |n| n as usize),
            a.trials.unwrap_or(100_000),
            seed,
        ),
        "obs-n3" => experiments::obs_n3()?,
        "claim-partition" => experiments::claim_partition(a.n.unwrap_or(4))?,
        "micro-pipeline" => {
            let opts = MicroOptions {
                budget,
                ..MicroOptions::default()
            };
            experiments::micro_pipeline(seed, a.trials.unwrap_or(10), &opts)?
        }
        other => bail!("unknown experiment `{other}`"),
    };
    emit(a.out.as_deref(), &out.csv)?;
    eprintln!(
        "{}: {} ({})",
        a.name,
        if out.pass { "pass" } else { "fail" },
        out.summary
    );
    Ok(verdict(out.pass))
}

fn run(cli: Cli) -> Result<ExitCode> {
    let Cli {
        seed,
        budget,
        command,
    } = cli;
    match command {
        Command::Generate(a) => cmd_generate(a, seed),
        Command::Solve(a) => cmd_solve(a, budget),
        Command::Hadamard(c) => cmd_hadamard(c, seed),
        Command::Robustize(a) => cmd_robustize(a),
        Command::VerifySequence(a) => cmd_verify(a),
        Command::Compose(a) => cmd_compose(a),
        Command::ArityReduce(a) => cmd_arity(a),
        Command::Pipeline(a) => cmd_pipeline(a, seed, budget),
        Command::Experiment(a) => cmd_experiment(a, seed, budget),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
