use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use acqlab_core::acquisition::{self, AcquisitionConfig, CurvePoint, Metrics, Status};
use acqlab_core::benchmarks::{self, Params};
use acqlab_core::model::{ConstraintSpec, Instance};
use acqlab_core::oracle::SimulatedOracle;

use crate::names;
use crate::HarnessError;

/// Where the instance of an experiment comes from.
#[derive(Debug, Clone)]
pub enum Source {
    Benchmark { name: String, params: Params },
    Instance(Box<Instance>),
}

impl Source {
    pub fn benchmark(name: &str, params: Params) -> Self {
        Source::Benchmark { name: name.to_string(), params }
    }

    fn label(&self) -> String {
        match self {
            Source::Benchmark { name, .. } => name.clone(),
            Source::Instance(inst) => inst.name.clone(),
        }
    }

    pub fn build(&self) -> Result<Instance, HarnessError> {
        match self {
            Source::Benchmark { name, params } => Ok(benchmarks::build(name, params)?),
            Source::Instance(inst) => Ok((**inst).clone()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentPlan {
    pub source: Source,
    /// `search.rng_seed` is overwritten with each run's derived seed.
    pub config: AcquisitionConfig,
    pub runs: usize,
    pub seed: u64,
    pub curves: bool,
    /// Keep each run's learned network in the report.
    pub keep_learned: bool,
    /// Worker threads. Runs are timed individually, so more than one job
    /// perturbs the wall-clock cutoffs.
    pub jobs: usize,
}

impl ExperimentPlan {
    pub fn new(source: Source, config: AcquisitionConfig) -> Self {
        ExperimentPlan { source, config, runs: 10, seed: 0, curves: false, keep_learned: false, jobs: 1 }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.runs == 0 {
            return Err(HarnessError::Config("runs must be at least 1".into()));
        }
        if self.jobs == 0 {
            return Err(HarnessError::Config("jobs must be at least 1".into()));
        }
        self.config.search.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
        if self.config.restart_cutoff.is_zero() {
            return Err(HarnessError::Config("restart cutoff must be positive".into()));
        }
        Ok(())
    }

    pub fn run_seeds(&self) -> Vec<u64> {
        run_seeds(self.seed, self.runs)
    }

    pub fn settings(&self) -> Settings {
        let c = &self.config;
        let (size, extra_relations) = match &self.source {
            Source::Benchmark { params, .. } => (params.size, params.extra_relations),
            Source::Instance(_) => (None, 0),
        };
        let mut s = Settings {
            benchmark: self.source.label(),
            size,
            extra_relations,
            algorithm: names::algorithm(c.algorithm).into(),
            findscope: names::findscope(c.findscope),
            qgen: names::qgen(c.search.mode).into(),
            var: names::var_heuristic(c.search.var_heuristic).into(),
            val: names::val_heuristic(c.search.val_heuristic).into(),
            cut_min: c.search.cut_min.as_secs_f64(),
            cut_max: c.search.cut_max.as_secs_f64(),
            restart_cutoff: c.restart_cutoff.as_secs_f64(),
            runs: self.runs,
            seed: self.seed,
            fingerprint: String::new(),
        };
        s.fingerprint = s.fingerprint();
        s
    }
}

/// Per-run seeds drawn from a generator seeded with `master`.
pub fn run_seeds(master: u64, runs: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..runs).map(|_| rng.gen()).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Settings {
    pub benchmark: String,
    pub size: Option<usize>,
    pub extra_relations: usize,
    pub algorithm: String,
    pub findscope: u8,
    pub qgen: String,
    pub var: String,
    pub val: String,
    pub cut_min: f64,
    pub cut_max: f64,
    pub restart_cutoff: f64,
    pub runs: usize,
    pub seed: u64,
    pub fingerprint: String,
}

impl Settings {
    /// Compact identifier of everything that shapes a run.
    fn fingerprint(&self) -> String {
        let size = self.size.map_or(String::new(), |s| s.to_string());
        format!(
            "{}{}+{}/{}/fs{}/{}/{}/{}/{}-{}s/r{}s",
            self.benchmark,
            size,
            self.extra_relations,
            self.algorithm,
            self.findscope,
            self.qgen,
            self.var,
            self.val,
            self.cut_min,
            self.cut_max,
            self.restart_cutoff
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceSummary {
    pub name: String,
    pub variables: usize,
    pub target: usize,
    pub bias: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run: usize,
    pub seed: u64,
    pub status: Status,
    pub metrics: Metrics,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub curve: Option<Vec<CurvePoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub learned: Option<Vec<ConstraintSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSummary {
    pub metric: String,
    pub mean: f64,
    pub stddev: f64,
    pub min: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub converged: usize,
    pub premature: usize,
    pub collapsed: usize,
    pub metrics: Vec<MetricSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub settings: Settings,
    pub instance: InstanceSummary,
    pub runs: Vec<RunResult>,
    pub summary: Summary,
}

/// Metric columns in output order.
pub const METRIC_COLUMNS: [&str; 12] = [
    "learned_size",
    "total_queries",
    "avg_query_size",
    "complete_queries",
    "avg_wait",
    "max_wait",
    "time_to_last_query",
    "total_time",
    "cut_min_hits",
    "cut_max_hits",
    "fallback_uses",
    "bias_remaining",
];

/// Columns measured in wall-clock seconds.
pub const TIMING_COLUMNS: [&str; 4] = ["avg_wait", "max_wait", "time_to_last_query", "total_time"];

pub fn metric_values(m: &Metrics) -> [f64; 12] {
    [
        m.learned_size as f64,
        m.total_queries as f64,
        m.avg_query_size,
        m.complete_queries as f64,
        m.avg_wait,
        m.max_wait,
        m.time_to_last_query,
        m.total_time,
        m.cut_min_hits as f64,
        m.cut_max_hits as f64,
        m.fallback_uses as f64,
        m.bias_remaining as f64,
    ]
}

/// Mean and sample standard deviation.
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (0.0, 0.0);
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

pub fn summarize(runs: &[RunResult]) -> Summary {
    let count = |s: Status| runs.iter().filter(|r| r.status == s).count();
    let rows: Vec<[f64; 12]> = runs.iter().map(|r| metric_values(&r.metrics)).collect();
    let metrics = METRIC_COLUMNS
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let col: Vec<f64> = rows.iter().map(|r| r[i]).collect();
            let (mean, stddev) = mean_std(&col);
            MetricSummary {
                metric: name.to_string(),
                mean,
                stddev,
                min: col.iter().copied().fold(f64::INFINITY, f64::min),
                max: col.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            }
        })
        .collect();
    Summary {
        converged: count(Status::Converged),
        premature: count(Status::PrematureConvergence),
        collapsed: count(Status::Collapse),
        metrics,
    }
}

impl Report {
    pub fn any_collapse(&self) -> bool {
        self.summary.collapsed > 0
    }

    /// Zeroes every wall-clock field, leaving what a seed determines.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for run in &mut r.runs {
            let m = &mut run.metrics;
            (m.avg_wait, m.max_wait, m.time_to_last_query, m.total_time) = (0.0, 0.0, 0.0, 0.0);
            if let Some(curve) = &mut run.curve {
                curve.iter_mut().for_each(|p| p.elapsed_secs = 0.0);
            }
        }
        r.summary = summarize(&r.runs);
        r
    }
}

/// Runs every seed of the plan against a simulated oracle for the target.
pub fn run_experiment(plan: &ExperimentPlan) -> Result<Report, HarnessError> {
    plan.validate()?;
    let instance = plan.source.build()?;
    let target = instance.target.clone().ok_or(HarnessError::NoTarget)?;
    let seeds = plan.run_seeds();

    let one = |run: usize| -> Result<RunResult, HarnessError> {
        let mut config = plan.config.clone();
        config.search.rng_seed = seeds[run];
        let out = acquisition::run(&instance, SimulatedOracle::new(target.clone()), config)?;
        Ok(RunResult {
            run,
            seed: seeds[run],
            status: out.status,
            metrics: out.metrics,
            curve: plan.curves.then_some(out.curve),
            learned: plan.keep_learned.then(|| out.learned.iter().map(ConstraintSpec::from_constraint).collect()),
        })
    };

    let mut results: Vec<RunResult> = if plan.jobs <= 1 {
        (0..plan.runs).map(one).collect::<Result<_, _>>()?
    } else {
        let next = AtomicUsize::new(0);
        let done = Mutex::new(Vec::with_capacity(plan.runs));
        std::thread::scope(|s| {
            for _ in 0..plan.jobs.min(plan.runs) {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= plan.runs {
                        break;
                    }
                    let r = one(i);
                    done.lock().unwrap().push(r);
                });
            }
        });
        done.into_inner().unwrap().into_iter().collect::<Result<_, _>>()?
    };
    results.sort_by_key(|r| r.run);

    Ok(Report {
        settings: plan.settings(),
        instance: InstanceSummary {
            name: instance.name.clone(),
            variables: instance.n_vars(),
            target: target.len(),
            bias: instance.bias.len(),
        },
        summary: summarize(&results),
        runs: results,
    })
}
