//! The `neuromem` command line.
//!
//! Each subcommand loads its inputs, runs one pipeline and writes a report
//! (see [`crate::report`]) to `--out` or stdout. Neuron and memory indices
//! in reports are 1-based. Exit codes: 0 success, 2 usage, 3 parse,
//! 4 dimension, 5 parameter, 6 I/O.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::analysis::{
    capacity_experiment, classify, complement_asymmetry_probe, enumerate_fixed_points,
    AttractorLabel, CapacityConfig, CapacityReport, DEFAULT_ENUMERATION_LIMIT,
};
use crate::bipolar::{Bipolar, BipolarVector};
use crate::error::{check_dim, Error, Result};
use crate::format::{
    parse_f64_list, parse_memories, parse_proximity, parse_start, parse_state, parse_usize_list,
};
use crate::generator::{retrieve_report, OrderSource};
use crate::hebbian::{
    default_max_passes, energy, iterate_sync, recall_async, recall_sync, train, Schedule,
    SyncOutcome,
};
use crate::quantum::{
    collapse_as_selection, collapse_sample, enumerate_reorganizations, histogram, reorg_count,
    AmplitudeVector, ReorgCase, Selection, MAX_ENUMERATED_LEVELS,
};
use crate::report::{parse_weights, Report, TrainResult};

#[derive(Debug, Clone, Parser)]
#[command(
    name = "neuromem",
    version,
    about = "Feedback neural memory laboratory"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Command {
    /// Build a weight file from a memory file
    Train {
        #[arg(long)]
        memories: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Threshold recall from a state
    Recall {
        #[arg(long)]
        weights: PathBuf,
        /// Comma-separated 1/-1 values
        #[arg(long, allow_hyphen_values = true)]
        state: String,
        /// Update one neuron at a time instead of synchronously
        #[arg(long = "async")]
        #[serde(rename = "async")]
        asynchronous: bool,
        /// Pass budget (default 10·n)
        #[arg(long)]
        passes: Option<usize>,
        /// Random visiting order per pass (asynchronous only)
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generator-model retrieval spreading from a fragment
    Spread {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        proximity: Option<PathBuf>,
        /// Start fragment, e.g. 1:+1,4:-1 (1-based)
        #[arg(long)]
        start: String,
        /// Memories to score the result against
        #[arg(long)]
        memories: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Enumerate every fixed point of a network
    FixedPoints {
        #[arg(long)]
        weights: PathBuf,
        #[arg(long)]
        memories: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        limit: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo storage capacity sweep
    Capacity {
        #[arg(long)]
        n: usize,
        /// Comma-separated memory counts, increasing
        #[arg(long)]
        m_list: String,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Worker threads; results do not depend on it
        #[arg(long)]
        #[serde(skip)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Born-rule collapse sampling, or the reorganization count
    Collapse {
        /// Comma-separated real amplitudes
        #[arg(long, allow_hyphen_values = true, conflicts_with = "count_levels")]
        amps: Option<String>,
        /// Rescale the amplitudes to unit norm first
        #[arg(long, requires = "amps")]
        normalize: bool,
        #[arg(long, requires = "amps")]
        samples: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Count reorganizations for this grid resolution
        #[arg(long, required_unless_present = "amps")]
        count_levels: Option<u64>,
        /// Include the distinct cases in the report
        #[arg(long, requires = "count_levels")]
        list_cases: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

impl Command {
    pub fn seed(&self) -> Option<u64> {
        match self {
            Command::Recall { seed, .. } | Command::Collapse { seed, .. } => *seed,
            Command::Capacity { seed, .. } => Some(*seed),
            _ => None,
        }
    }

    pub fn out(&self) -> Option<&Path> {
        match self {
            Command::Train { out, .. } => Some(out),
            Command::Recall { out, .. }
            | Command::Spread { out, .. }
            | Command::FixedPoints { out, .. }
            | Command::Capacity { out, .. }
            | Command::Collapse { out, .. } => out.as_deref(),
        }
    }
}

/// Parses `args` (including the program name), runs the command and
/// returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let config = match RunConfig::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run_config(&config) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Executes `config` and writes the report to its destination.
pub fn run_config(config: &RunConfig) -> Result<()> {
    let text = execute(&config.command)?;
    match config.command.out() {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| Error::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

/// Runs a command and returns the report text without writing it.
pub fn execute(cmd: &Command) -> Result<String> {
    let seed = cmd.seed();
    let text = match cmd {
        Command::Train { memories, .. } => Report::new(cmd, seed, run_train(memories)?).to_text(),
        Command::Recall {
            weights,
            state,
            asynchronous,
            passes,
            seed,
            ..
        } => Report::new(
            cmd,
            *seed,
            run_recall(weights, state, *asynchronous, *passes, *seed)?,
        )
        .to_text(),
        Command::Spread {
            weights,
            proximity,
            start,
            memories,
            ..
        } => Report::new(
            cmd,
            seed,
            run_spread(weights, proximity.as_deref(), start, memories.as_deref())?,
        )
        .to_text(),
        Command::FixedPoints {
            weights,
            memories,
            limit,
            ..
        } => Report::new(
            cmd,
            seed,
            run_fixed_points(weights, memories.as_deref(), *limit)?,
        )
        .to_text(),
        Command::Capacity {
            n,
            m_list,
            trials,
            seed,
            threads,
            ..
        } => Report::new(
            cmd,
            Some(*seed),
            run_capacity(*n, m_list, *trials, *seed, *threads)?,
        )
        .to_text(),
        Command::Collapse {
            amps: Some(amps),
            normalize,
            samples,
            seed,
            ..
        } => {
            let samples = samples.ok_or_else(|| Error::Usage("--amps needs --samples".into()))?;
            let seed =
                seed.ok_or_else(|| Error::Usage("sampling requires an explicit --seed".into()))?;
            Report::new(
                cmd,
                Some(seed),
                run_collapse(amps, *normalize, samples, seed)?,
            )
            .to_text()
        }
        Command::Collapse {
            count_levels: Some(levels),
            list_cases,
            ..
        } => Report::new(cmd, seed, run_count(*levels, *list_cases)?).to_text(),
        Command::Collapse { .. } => {
            return Err(Error::Usage(
                "collapse needs --amps or --count-levels".into(),
            ))
        }
    };
    Ok(text)
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

fn run_train(memories: &Path) -> Result<TrainResult> {
    let set = parse_memories(memories)?;
    let weights = train(set.memories())?;
    Ok(TrainResult {
        n: set.n(),
        memory_count: set.m(),
        duplicates: set
            .duplicates()
            .iter()
            .map(|&(a, b)| (a + 1, b + 1))
            .collect(),
        weights,
    })
}

#[derive(Debug, Serialize)]
struct RecallReport {
    input: BipolarVector,
    field: Vec<i64>,
    energy: f64,
    single_pass: BipolarVector,
    stored: bool,
    mode: &'static str,
    schedule: Option<Schedule>,
    final_state: BipolarVector,
    final_energy: f64,
    passes: usize,
    converged: bool,
    sync_outcome: Option<SyncOutcome>,
    energy_trace: Option<Vec<f64>>,
}

fn run_recall(
    weights: &Path,
    state: &str,
    asynchronous: bool,
    passes: Option<usize>,
    seed: Option<u64>,
) -> Result<RecallReport> {
    let t = parse_weights(weights)?.weights;
    let x = parse_state(state)?;
    check_dim("--state length vs weight matrix", t.n(), x.len())?;
    if seed.is_some() && !asynchronous {
        return Err(Error::Usage("--seed only applies with --async".into()));
    }
    let max_passes = passes.unwrap_or_else(|| default_max_passes(t.n()));
    let single_pass = recall_sync(&t, &x)?;
    let stored = single_pass == x;
    let field = t.field(&x)?;
    let e0 = energy(&t, &x)?;
    let report = if asynchronous {
        let schedule = match seed {
            Some(seed) => Schedule::RandomPermutation { seed },
            None => Schedule::Cyclic,
        };
        let r = recall_async(&t, &x, schedule, max_passes)?;
        RecallReport {
            input: x,
            field,
            energy: e0,
            single_pass,
            stored,
            mode: "async",
            schedule: Some(schedule),
            final_energy: energy(&t, &r.state)?,
            final_state: r.state,
            passes: r.iterations,
            converged: r.converged,
            sync_outcome: None,
            energy_trace: Some(r.energy_trace),
        }
    } else {
        let r = iterate_sync(&t, &x, max_passes)?;
        RecallReport {
            input: x,
            field,
            energy: e0,
            single_pass,
            stored,
            mode: "sync",
            schedule: None,
            final_energy: energy(&t, &r.state)?,
            final_state: r.state,
            passes: r.passes,
            converged: r.converged,
            sync_outcome: Some(r.outcome),
            energy_trace: None,
        }
    };
    Ok(report)
}

#[derive(Debug, Serialize)]
struct NeuronValue {
    neuron: usize,
    value: Bipolar,
}

#[derive(Debug, Serialize)]
struct StepEntry {
    neuron: usize,
    field: i64,
    value: Bipolar,
}

#[derive(Debug, Serialize)]
struct SpreadReport {
    n: usize,
    start: Vec<NeuronValue>,
    order: Vec<usize>,
    steps: Vec<StepEntry>,
    final_state: BipolarVector,
    consistency_flags: Vec<usize>,
    fixed_point: bool,
    matched_memory: Option<usize>,
    complement_of: Option<usize>,
    nearest_memory: Option<usize>,
    hamming_to_nearest: Option<usize>,
}

fn run_spread(
    weights: &Path,
    proximity: Option<&Path>,
    start: &str,
    memories: Option<&Path>,
) -> Result<SpreadReport> {
    let t = parse_weights(weights)?.weights;
    let start = parse_start(start)?;
    let proximity = proximity.map(parse_proximity).transpose()?;
    let memories = match memories {
        Some(path) => parse_memories(path)?.into_memories(),
        None => Vec::new(),
    };
    if let Some(p) = &proximity {
        check_dim("proximity matrix size vs weight matrix", t.n(), p.n())?;
    }
    let order = match &proximity {
        Some(p) => OrderSource::Proximity(p),
        None => OrderSource::ByIndex,
    };
    let r = retrieve_report(&t, order, &start, &memories)?;
    let plus_one = |o: Option<usize>| o.map(|k| k + 1);
    Ok(SpreadReport {
        n: t.n(),
        start: start
            .iter()
            .map(|&(neuron, value)| NeuronValue {
                neuron: neuron + 1,
                value,
            })
            .collect(),
        order: one_based(r.trace.order.permutation()),
        steps: r
            .trace
            .steps
            .iter()
            .map(|s| StepEntry {
                neuron: s.neuron + 1,
                field: s.field,
                value: s.value,
            })
            .collect(),
        consistency_flags: one_based(&r.trace.consistency_flags),
        final_state: r.trace.final_state,
        fixed_point: r.fixed_point,
        matched_memory: plus_one(r.matched_memory),
        complement_of: plus_one(r.complement_of),
        nearest_memory: plus_one(r.nearest_memory),
        hamming_to_nearest: r.hamming_to_nearest,
    })
}

#[derive(Debug, Serialize)]
struct FixedPointEntry {
    state: BipolarVector,
    label: Option<&'static str>,
    memory: Option<usize>,
}

#[derive(Debug, Serialize)]
struct CensusCounts {
    stored: usize,
    complement: usize,
    spurious: usize,
}

#[derive(Debug, Serialize)]
struct ProbeFailure {
    memory: usize,
    zero_field_components: Vec<usize>,
}

#[derive(Debug, Serialize)]
struct ProbeSummary {
    probed: Vec<usize>,
    failures: Vec<ProbeFailure>,
}

#[derive(Debug, Serialize)]
struct FixedPointReport {
    n: usize,
    limit: usize,
    count: usize,
    fixed_points: Vec<FixedPointEntry>,
    census: Option<CensusCounts>,
    complement_probe: Option<ProbeSummary>,
}

fn run_fixed_points(
    weights: &Path,
    memories: Option<&Path>,
    limit: usize,
) -> Result<FixedPointReport> {
    let t = parse_weights(weights)?.weights;
    let memories = memories
        .map(|p| parse_memories(p).map(|s| s.into_memories()))
        .transpose()?;
    if let Some(mems) = &memories {
        check_dim("memory width vs weight matrix", t.n(), mems[0].len())?;
    }
    let fps = enumerate_fixed_points(&t, limit)?;
    let (entries, census, complement_probe) = match &memories {
        Some(mems) => {
            let c = classify(&fps, mems)?;
            let entries = c
                .fixed_points
                .iter()
                .zip(&c.labels)
                .map(|(x, l)| {
                    let (label, memory) = match *l {
                        AttractorLabel::Stored(k) => ("stored", Some(k + 1)),
                        AttractorLabel::Complement(k) => ("complement", Some(k + 1)),
                        AttractorLabel::Spurious => ("spurious", None),
                    };
                    FixedPointEntry {
                        state: x.clone(),
                        label: Some(label),
                        memory,
                    }
                })
                .collect();
            let probe = complement_asymmetry_probe(&t, mems)?;
            (
                entries,
                Some(CensusCounts {
                    stored: c.stored_count,
                    complement: c.complement_count,
                    spurious: c.spurious_count,
                }),
                Some(ProbeSummary {
                    probed: one_based(&probe.probed),
                    failures: probe
                        .failures
                        .iter()
                        .map(|f| ProbeFailure {
                            memory: f.memory + 1,
                            zero_field_components: one_based(&f.zero_field_components),
                        })
                        .collect(),
                }),
            )
        }
        None => (
            fps.iter()
                .map(|x| FixedPointEntry {
                    state: x.clone(),
                    label: None,
                    memory: None,
                })
                .collect(),
            None,
            None,
        ),
    };
    Ok(FixedPointReport {
        n: t.n(),
        limit,
        count: fps.len(),
        fixed_points: entries,
        census,
        complement_probe,
    })
}

#[derive(Debug, Serialize)]
struct CapacityOutput {
    definitions: CapacityDefinitions,
    #[serde(flatten)]
    report: CapacityReport,
}

#[derive(Debug, Serialize)]
struct CapacityDefinitions {
    per_bit_instability: &'static str,
    all_stable_fraction: &'static str,
    threshold_capacity_ratio: &'static str,
    exact_capacity_ratio: &'static str,
}

const DEFINITIONS: CapacityDefinitions = CapacityDefinitions {
    per_bit_instability: "fraction of stored bits i with sgn((T x)_i) != x_i",
    all_stable_fraction: "fraction of trials in which every memory is an exact fixed point",
    threshold_capacity_ratio: "largest m/n with per-bit stability >= 0.99",
    exact_capacity_ratio: "largest m/n with all_stable_fraction >= 0.99",
};

fn run_capacity(
    n: usize,
    m_list: &str,
    trials: usize,
    seed: u64,
    threads: Option<usize>,
) -> Result<CapacityOutput> {
    let config = CapacityConfig {
        n,
        m_values: parse_usize_list(m_list, "--m-list")?,
        trials,
        seed,
        parallel: true,
    };
    let report = match threads {
        Some(0) => return Err(Error::param("--threads must be at least 1")),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::param(format!("thread pool: {e}")))?
            .install(|| capacity_experiment(&config))?,
        None => capacity_experiment(&config)?,
    };
    Ok(CapacityOutput {
        definitions: DEFINITIONS,
        report,
    })
}

#[derive(Debug, Serialize)]
struct CollapseReport {
    amplitudes: Vec<f64>,
    probabilities: Vec<f64>,
    samples: usize,
    counts: Vec<u64>,
    frequencies: Vec<f64>,
    standard_errors: Vec<f64>,
    selection: Selection,
}

fn run_collapse(amps: &str, normalize: bool, samples: usize, seed: u64) -> Result<CollapseReport> {
    let raw = parse_f64_list(amps, "--amps")?;
    let amps = if normalize {
        AmplitudeVector::normalized(raw)?
    } else {
        AmplitudeVector::new(raw)?
    };
    let draws = collapse_sample(&amps, seed, samples)?;
    let counts = histogram(&draws, amps.len());
    let probabilities = amps.probabilities();
    let total = samples as f64;
    Ok(CollapseReport {
        amplitudes: amps.amplitudes().to_vec(),
        standard_errors: probabilities
            .iter()
            .map(|p| (p * (1.0 - p) / total).sqrt())
            .collect(),
        frequencies: counts.iter().map(|&c| c as f64 / total).collect(),
        probabilities,
        samples,
        counts,
        selection: collapse_as_selection(&amps, seed)?,
    })
}

#[derive(Debug, Serialize)]
struct CountReport {
    n_levels: u64,
    reorganizations: u64,
    raw_count: u64,
    distinct_count: u64,
    enumerated: bool,
    cases: Option<Vec<ReorgCase>>,
}

fn run_count(levels: u64, list_cases: bool) -> Result<CountReport> {
    let reorganizations = reorg_count(levels)?;
    if levels <= MAX_ENUMERATED_LEVELS {
        let table = enumerate_reorganizations(levels)?;
        Ok(CountReport {
            n_levels: levels,
            reorganizations,
            raw_count: table.raw_count,
            distinct_count: table.distinct_count,
            enumerated: true,
            cases: list_cases.then_some(table.cases),
        })
    } else {
        if list_cases {
            return Err(Error::param(format!(
                "--list-cases supports at most {MAX_ENUMERATED_LEVELS} levels"
            )));
        }
        Ok(CountReport {
            n_levels: levels,
            reorganizations,
            raw_count: reorganizations
                .checked_mul(2)
                .ok_or_else(|| Error::param("resolution overflows the raw count"))?,
            distinct_count: reorganizations,
            enumerated: false,
            cases: None,
        })
    }
}
