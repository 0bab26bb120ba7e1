//! Experiment orchestration behind the `ltlrl` binary.
//!
//! A training config names an environment, an automaton and a learner; every
//! (variant, seed) cell runs on its own learner in a worker pool. Results are
//! gathered in cell order, so the CSV and SVG outputs depend only on the
//! config.

mod config;
pub mod plot;
pub mod verify;

pub use config::{load_automaton, Algorithm, ConfigError, ExperimentConfig, Variant};

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::exact::{satisfaction_probability, InducedChain};
use crate::learn::{episodes_to_threshold, greedy_policy, train_pg, train_q, DeterministicPolicy, LearnError};
use crate::lcer::{dump_tuples, min_horizon};
use crate::ldba::Ldba;
use crate::ltl::parse_ltl;
use crate::product::Product;

/// Induced chains larger than this skip the exact evaluation.
pub const EXACT_STATE_LIMIT: usize = 5000;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Learn(#[from] LearnError),
    #[error("{path}: {msg}")]
    Io { path: String, msg: String },
    #[error("formula: {0}")]
    Formula(String),
    #[error("unknown suite `{0}`; expected one of lemma1, theorem1, lcer-equiv, oracle, all")]
    UnknownSuite(String),
    #[error("worker pool: {0}")]
    Pool(String),
}

fn io_err(path: &Path, e: impl ToString) -> HarnessError {
    HarnessError::Io {
        path: path.display().to_string(),
        msg: e.to_string(),
    }
}

#[derive(Debug, Clone, Default)]
pub struct TrainOptions {
    pub out: Option<PathBuf>,
    /// Worker threads; `None` uses every core.
    pub jobs: Option<usize>,
    pub dump_replay: bool,
}

/// One (variant, seed) cell.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub config_hash: String,
    pub variant: Variant,
    pub seed: u64,
    pub curve: Vec<f64>,
    pub wall_time: Duration,
    pub episodes_to_threshold: usize,
    /// Exact satisfaction probability of the final greedy (or mode) policy.
    pub final_p_sat: Option<f64>,
    replay_dump: Option<String>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub out_dir: PathBuf,
    pub records: Vec<RunRecord>,
    pub warnings: Vec<String>,
}

impl TrainOutcome {
    /// Median episodes-to-threshold per variant (upper median for even counts).
    pub fn medians(&self) -> Vec<(Variant, usize)> {
        let mut variants: Vec<Variant> = self.records.iter().map(|r| r.variant).collect();
        variants.dedup();
        variants
            .into_iter()
            .map(|v| {
                let mut e: Vec<usize> = self
                    .records
                    .iter()
                    .filter(|r| r.variant == v)
                    .map(|r| r.episodes_to_threshold)
                    .collect();
                e.sort_unstable();
                (v, e[e.len() / 2])
            })
            .collect()
    }
}

/// Exact evaluation of `policy`, skipped when its chain is too large.
pub fn exact_p_sat(product: &Product, policy: &DeterministicPolicy) -> Option<f64> {
    let chain = InducedChain::from_deterministic(product, |z| policy.action(product, z)).ok()?;
    if chain.len() > EXACT_STATE_LIMIT {
        return None;
    }
    satisfaction_probability(&chain).ok()
}

fn run_cell(cfg: &ExperimentConfig, variant: Variant, seed: u64, dump: bool) -> Result<RunRecord, LearnError> {
    let start = Instant::now();
    let env = cfg.environment();
    let learner = crate::learn::LearnerConfig {
        lcer: variant == Variant::Lcer,
        seed,
        ..cfg.learner.clone()
    };
    let product = Product::new(env.as_ref(), &cfg.ldba);
    let (curve, policy, replay_dump) = match cfg.algorithm {
        Algorithm::QLearn => {
            let run = train_q(env.as_ref(), &cfg.ldba, &learner)?;
            let dump = dump.then(|| dump_tuples(run.replay.iter()));
            (run.curve, greedy_policy(&run.table), dump)
        }
        Algorithm::Pg => {
            let run = train_pg(env.as_ref(), &cfg.ldba, &learner)?;
            let dump = dump.then(|| run.store.dump(&learner.discount().expect("validated")));
            (run.curve, run.policy.mode(), dump)
        }
    };
    Ok(RunRecord {
        config_hash: cfg.hash.clone(),
        variant,
        seed,
        episodes_to_threshold: episodes_to_threshold(&curve, cfg.threshold),
        final_p_sat: exact_p_sat(&product, &policy),
        curve,
        wall_time: start.elapsed(),
        replay_dump,
    })
}

/// Runs every cell of `cfg` and writes `curves.csv`, `summary.csv` and
/// `curves.svg` (plus replay dumps on request) to the output directory.
pub fn cmd_train(cfg: &ExperimentConfig, opts: &TrainOptions) -> Result<TrainOutcome, HarnessError> {
    let mut warnings = Vec::new();
    let need = min_horizon(&cfg.ldba);
    if cfg.learner.horizon < need {
        warnings.push(format!(
            "learner.horizon = {} is below the automaton's min_horizon {need}; some jumps cannot all be exercised",
            cfg.learner.horizon
        ));
    }
    let out_dir = opts
        .out
        .clone()
        .or_else(|| cfg.out.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(&cfg.name));
    std::fs::create_dir_all(&out_dir).map_err(|e| io_err(&out_dir, e))?;

    let cells: Vec<(Variant, u64)> = cfg
        .variants
        .iter()
        .flat_map(|&v| cfg.seeds.iter().map(move |&s| (v, s)))
        .collect();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(j) = opts.jobs {
        pool = pool.num_threads(j.max(1));
    }
    let pool = pool.build().map_err(|e| HarnessError::Pool(e.to_string()))?;
    let records: Vec<RunRecord> = pool.install(|| {
        cells
            .par_iter()
            .map(|&(v, s)| run_cell(cfg, v, s, opts.dump_replay))
            .collect::<Result<_, _>>()
    })?;

    write_outputs(cfg, &out_dir, &records)?;
    Ok(TrainOutcome {
        out_dir,
        records,
        warnings,
    })
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> HarnessError + '_ {
    move |e| io_err(path, e)
}

fn write_outputs(cfg: &ExperimentConfig, dir: &Path, records: &[RunRecord]) -> Result<(), HarnessError> {
    let path = dir.join("curves.csv");
    let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
    w.write_record(["episode", "seed", "variant", "metric"]).map_err(csv_err(&path))?;
    for r in records {
        for (i, m) in r.curve.iter().enumerate() {
            w.write_record([(i + 1).to_string(), r.seed.to_string(), r.variant.name().to_string(), m.to_string()])
                .map_err(csv_err(&path))?;
        }
    }
    w.flush().map_err(|e| io_err(&path, e))?;

    let path = dir.join("summary.csv");
    let mut w = csv::Writer::from_path(&path).map_err(csv_err(&path))?;
    w.write_record(["variant", "seed", "episodes_to_threshold", "final_p_sat"]).map_err(csv_err(&path))?;
    for r in records {
        let p = r.final_p_sat.map_or_else(|| "NA".to_string(), |p| p.to_string());
        w.write_record([r.variant.name().to_string(), r.seed.to_string(), r.episodes_to_threshold.to_string(), p])
            .map_err(csv_err(&path))?;
    }
    w.flush().map_err(|e| io_err(&path, e))?;

    let series: Vec<(String, Vec<Vec<f64>>)> = cfg
        .variants
        .iter()
        .map(|&v| {
            let curves = records.iter().filter(|r| r.variant == v).map(|r| r.curve.clone()).collect();
            (v.name().to_string(), curves)
        })
        .collect();
    let title = format!("{}: success rate, median and IQR over {} seeds", cfg.name, cfg.seeds.len());
    let path = dir.join("curves.svg");
    std::fs::write(&path, plot::curves_svg(&title, &series)).map_err(|e| io_err(&path, e))?;

    for r in records {
        if let Some(d) = &r.replay_dump {
            let path = dir.join(format!("replay_{}_seed{}.txt", r.variant.name(), r.seed));
            std::fs::write(&path, d).map_err(|e| io_err(&path, e))?;
        }
    }
    Ok(())
}

/// Runs the named suite(s); the bool is overall success.
pub fn cmd_verify(suite: &str) -> Result<(String, bool), HarnessError> {
    let reports = verify::run_suite(suite).ok_or_else(|| HarnessError::UnknownSuite(suite.to_string()))?;
    let text: String = reports.iter().map(verify::SuiteReport::render).collect();
    Ok((text, reports.iter().all(verify::SuiteReport::ok)))
}

/// Words checked by [`cmd_inspect`].
pub const INSPECT_WORDS: usize = 200;

#[derive(Debug, Clone)]
pub struct InspectReport {
    pub text: String,
    pub agree: usize,
    pub total: usize,
}

impl InspectReport {
    pub fn ok(&self) -> bool {
        self.agree == self.total
    }
}

pub fn describe(aut: &Ldba) -> String {
    let set = |v: Vec<usize>| format!("{{{}}}", v.iter().map(usize::to_string).collect::<Vec<_>>().join(", "));
    let all = 0..aut.num_states();
    let mut out = String::new();
    writeln!(out, "ap: {}", aut.ap().atoms().iter().map(|a| a.as_str()).collect::<Vec<_>>().join(" ")).unwrap();
    writeln!(out, "states: {} (initial {})", aut.num_states(), aut.initial()).unwrap();
    writeln!(out, "accepting: {}", set(aut.accepting_states())).unwrap();
    let jump_states: Vec<usize> = all.clone().filter(|&b| !aut.jumps(b).is_empty()).collect();
    writeln!(out, "jump states: {}", set(jump_states.clone())).unwrap();
    for b in jump_states {
        for (i, t) in aut.jumps(b).iter().enumerate() {
            writeln!(out, "  {b} --e{i}--> {t}").unwrap();
        }
    }
    writeln!(out, "S_N: {}", set(all.clone().filter(|&b| !aut.in_deterministic_part(b)).collect())).unwrap();
    writeln!(out, "S_D: {}", set(all.filter(|&b| aut.in_deterministic_part(b)).collect())).unwrap();
    writeln!(out, "min_horizon: {}", min_horizon(aut)).unwrap();
    out
}

/// Summarizes the automaton at `ldba` (a path or `builtin:<name>`) and
/// compares it with `formula` on random lasso words.
pub fn cmd_inspect(ldba: &str, formula: &str) -> Result<InspectReport, HarnessError> {
    let aut = load_automaton(ldba, Path::new("."))?;
    let phi = parse_ltl(formula).map_err(|e| HarnessError::Formula(e.to_string()))?;
    let mut text = describe(&aut);
    let (agree, bad) = verify::oracle_agreement(&aut, &phi, INSPECT_WORDS, 0);
    writeln!(text, "oracle agreement with {formula}: {agree}/{INSPECT_WORDS}").unwrap();
    for b in bad {
        writeln!(text, "  mismatch: {b}").unwrap();
    }
    Ok(InspectReport {
        text,
        agree,
        total: INSPECT_WORDS,
    })
}
