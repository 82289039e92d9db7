//! The `acqlab` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};

use acqlab_core::acquisition::{Algorithm, AcquisitionConfig, FindScopeVariant};
use acqlab_core::benchmarks::{self, Params};
use acqlab_core::model::{Instance, InstanceFile};
use acqlab_core::solver::{QGenMode, SearchConfig, ValHeuristic, VarHeuristic};

use crate::experiment::{run_experiment, ExperimentPlan, Report, Source};
use crate::{names, output, verify, HarnessError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NOT_EQUIVALENT: i32 = 1;
pub const EXIT_COLLAPSE: i32 = 2;
pub const EXIT_CONFIG: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "acqlab", version, about = "Constraint acquisition experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run seeded acquisition experiments against a simulated user.
    Run(RunArgs),
    /// Check a learned network against the target of an instance file.
    Verify(VerifyArgs),
    /// Write a benchmark instance as JSON.
    Export(ExportArgs),
    /// List the built-in benchmarks.
    List,
}

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// Built-in benchmark name.
    #[arg(long, conflicts_with = "instance", required_unless_present = "instance")]
    pub benchmark: Option<String>,
    /// Instance JSON file with a target network.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long)]
    pub size: Option<usize>,
    /// Extra relation groups added to the language.
    #[arg(long, default_value_t = 0)]
    pub extra_relations: usize,
    /// Seed of generated benchmarks (rlfap).
    #[arg(long, default_value_t = 0)]
    pub instance_seed: u64,
}

impl InstanceArgs {
    fn params(&self) -> Params {
        Params { size: self.size, seed: self.instance_seed, extra_relations: self.extra_relations }
    }

    fn source(&self) -> Result<Source, HarnessError> {
        match (&self.benchmark, &self.instance) {
            (Some(name), _) => Ok(Source::benchmark(name, self.params())),
            (None, Some(path)) => Ok(Source::Instance(Box::new(Instance::load(path)?))),
            (None, None) => Err(HarnessError::Config("give --benchmark or --instance".into())),
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub instance: InstanceArgs,
    #[arg(long, default_value = "mquacq", value_parser = names::parse_algorithm)]
    pub algo: Algorithm,
    #[arg(long, default_value = "2", value_parser = names::parse_findscope)]
    pub findscope: FindScopeVariant,
    #[arg(long, default_value = "max", value_parser = names::parse_qgen)]
    pub qgen: QGenMode,
    #[arg(long, default_value = "domwdeg", value_parser = names::parse_var_heuristic)]
    pub var: VarHeuristic,
    #[arg(long, default_value = "random", value_parser = names::parse_val_heuristic)]
    pub val: ValHeuristic,
    /// Seconds after which query generation returns any improving example.
    #[arg(long, default_value_t = 1.0)]
    pub cutmin: f64,
    /// Seconds after which query generation gives up.
    #[arg(long, default_value_t = 5.0)]
    pub cutmax: f64,
    /// Seconds FindAllScopes may spend on one example (MultiAcq).
    #[arg(long, default_value_t = 5.0)]
    pub restart_cutoff: f64,
    #[arg(long, default_value_t = 10)]
    pub runs: usize,
    /// Master seed; per-run seeds are derived from it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Output path; `.csv` and `.json` files are written next to it.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include learning curves in the output.
    #[arg(long)]
    pub curves: bool,
    /// Include each run's learned network in the JSON output.
    #[arg(long)]
    pub learned: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Instance JSON carrying `target` and `learned`.
    #[arg(long)]
    pub instance: PathBuf,
    /// Seconds per entailment check.
    #[arg(long, default_value_t = 10.0)]
    pub budget: f64,
}

#[derive(Debug, Args)]
pub struct ExportArgs {
    #[arg(long)]
    pub benchmark: String,
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub extra_relations: usize,
    #[arg(long, default_value_t = 0)]
    pub instance_seed: u64,
    /// Destination file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn seconds(name: &str, s: f64) -> Result<Duration, HarnessError> {
    if !s.is_finite() || s < 0.0 {
        return Err(HarnessError::Config(format!("--{name} must be a non-negative number of seconds, got {s}")));
    }
    Ok(Duration::from_secs_f64(s))
}

impl RunArgs {
    pub fn plan(&self) -> Result<ExperimentPlan, HarnessError> {
        let config = AcquisitionConfig {
            algorithm: self.algo,
            findscope: self.findscope,
            search: SearchConfig {
                var_heuristic: self.var,
                val_heuristic: self.val,
                cut_min: seconds("cutmin", self.cutmin)?,
                cut_max: seconds("cutmax", self.cutmax)?,
                rng_seed: 0,
                mode: self.qgen,
            },
            restart_cutoff: seconds("restart-cutoff", self.restart_cutoff)?,
            ..AcquisitionConfig::default()
        };
        let plan = ExperimentPlan {
            source: self.instance.source()?,
            config,
            runs: self.runs,
            seed: self.seed,
            curves: self.curves,
            keep_learned: self.learned,
            jobs: self.jobs,
        };
        plan.validate()?;
        Ok(plan)
    }
}

fn print_report<W: Write>(r: &Report, out: &mut W) -> std::io::Result<()> {
    writeln!(
        out,
        "{} ({} vars, |C_T| = {}, |B| = {})  {}",
        r.instance.name, r.instance.variables, r.instance.target, r.instance.bias, r.settings.fingerprint
    )?;
    writeln!(out, "{:>4} {:>20} {:>22} {:>7} {:>8} {:>7} {:>9} {:>5}", "run", "seed", "status", "|C_L|", "queries", "size", "time", "fb")?;
    for run in &r.runs {
        let m = &run.metrics;
        writeln!(
            out,
            "{:>4} {:>20} {:>22} {:>7} {:>8} {:>7.2} {:>8.2}s {:>5}",
            run.run,
            run.seed,
            format!("{:?}", run.status),
            m.learned_size,
            m.total_queries,
            m.avg_query_size,
            m.total_time,
            m.fallback_uses
        )?;
    }
    let stat = |name: &str| r.summary.metrics.iter().find(|m| m.metric == name).map_or((0.0, 0.0), |m| (m.mean, m.stddev));
    let (q, qs) = stat("total_queries");
    let (t, ts) = stat("total_time");
    writeln!(
        out,
        "queries {q:.1} ± {qs:.1}, time {t:.2}s ± {ts:.2}s; converged {}, premature {}, collapsed {}",
        r.summary.converged, r.summary.premature, r.summary.collapsed
    )
}

fn cmd_run<W: Write>(args: &RunArgs, out: &mut W) -> Result<i32, HarnessError> {
    let plan = args.plan()?;
    let report = run_experiment(&plan)?;
    print_report(&report, out)?;
    if let Some(path) = &args.out {
        let paths = output::write_all(&report, path)?;
        writeln!(out, "wrote {} and {}", paths.csv.display(), paths.json.display())?;
    }
    Ok(run_exit_code(&report))
}

/// Exit code of a finished `run`: a collapse in any run is reported, not fatal.
pub fn run_exit_code(report: &Report) -> i32 {
    if report.any_collapse() {
        EXIT_COLLAPSE
    } else {
        EXIT_OK
    }
}

fn cmd_verify<W: Write>(args: &VerifyArgs, out: &mut W) -> Result<i32, HarnessError> {
    let text = std::fs::read_to_string(&args.instance)?;
    let file: InstanceFile = serde_json::from_str(&text)?;
    let v = verify::verify_file(&file, seconds("budget", args.budget)?)?;
    writeln!(out, "{}", verify::describe(&v))?;
    let verdict = if v.equivalent() {
        "equivalent"
    } else if v.undecided() {
        "undecided"
    } else {
        "not equivalent"
    };
    writeln!(out, "{verdict}")?;
    Ok(if v.equivalent() { EXIT_OK } else { EXIT_NOT_EQUIVALENT })
}

fn cmd_export<W: Write>(args: &ExportArgs, out: &mut W) -> Result<i32, HarnessError> {
    let params = Params { size: args.size, seed: args.instance_seed, extra_relations: args.extra_relations };
    let inst = benchmarks::build(&args.benchmark, &params)?;
    let json = inst.to_json();
    match &args.out {
        Some(path) => {
            std::fs::write(path, json)?;
            writeln!(out, "wrote {} ({} vars, |C_T| = {}, |B| = {})", path.display(), inst.n_vars(), inst.target().len(), inst.bias.len())?;
        }
        None => writeln!(out, "{json}")?,
    }
    Ok(EXIT_OK)
}

fn cmd_list<W: Write>(out: &mut W) -> Result<i32, HarnessError> {
    for name in benchmarks::NAMES {
        let inst = benchmarks::build(name, &Params::default())?;
        writeln!(out, "{name:<10} {:>4} vars  |C_T| = {:<5} |B| = {}", inst.n_vars(), inst.target().len(), inst.bias.len())?;
    }
    Ok(EXIT_OK)
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn main_with<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Export(a) => cmd_export(a, out),
        Command::List => cmd_list(out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "acqlab: {e}");
            e.exit_code()
        }
    }
}
