//! Brute-force attractor census and Monte Carlo capacity estimates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bipolar::{Bipolar, BipolarVector};
use crate::error::{check_dim, Error, Result};
use crate::hebbian::{is_stored, train, InterconnectionMatrix};

pub const DEFAULT_ENUMERATION_LIMIT: usize = 20;

/// Largest width the bit-encoded enumeration can walk.
const MAX_ENUMERATION_WIDTH: usize = 40;

/// Every `x ∈ {±1}ⁿ` with `sgn(Tx) = x`, in lexicographic order (−1 < +1).
///
/// Walks all `2ⁿ` states in Gray-code order so each step updates the field
/// incrementally in `O(n)`.
pub fn enumerate_fixed_points(
    t: &InterconnectionMatrix,
    limit_n: usize,
) -> Result<Vec<BipolarVector>> {
    let n = t.n();
    if n > limit_n {
        return Err(Error::param(format!(
            "enumeration over {n} neurons exceeds the limit of {limit_n}"
        )));
    }
    if n > MAX_ENUMERATION_WIDTH {
        return Err(Error::param(format!(
            "enumeration over {n} neurons is not supported (max {MAX_ENUMERATION_WIDTH})"
        )));
    }
    // Bit b of a code is neuron n−1−b; set means +1.
    let neuron_of_bit = |b: u32| n - 1 - b as usize;
    let mut x = vec![-1i64; n];
    let mut field: Vec<i64> = (0..n).map(|i| -t.row(i).iter().sum::<i64>()).collect();
    let is_fixed =
        |x: &[i64], field: &[i64]| x.iter().zip(field).all(|(&xi, &h)| (h >= 0) == (xi > 0));

    let mut found = Vec::new();
    let mut code: u64 = 0;
    if is_fixed(&x, &field) {
        found.push(code);
    }
    for step in 1u64..(1u64 << n) {
        let b = step.trailing_zeros();
        code ^= 1 << b;
        let j = neuron_of_bit(b);
        let delta = -2 * x[j];
        x[j] = -x[j];
        for (i, h) in field.iter_mut().enumerate() {
            *h += t.get(i, j) * delta;
        }
        if is_fixed(&x, &field) {
            found.push(code);
        }
    }
    found.sort_unstable();
    found
        .into_iter()
        .map(|c| BipolarVector::from_bits(c, n))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind", content = "memory")]
pub enum AttractorLabel {
    Stored(usize),
    Complement(usize),
    Spurious,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AttractorCensus {
    pub fixed_points: Vec<BipolarVector>,
    pub labels: Vec<AttractorLabel>,
    pub stored_count: usize,
    pub complement_count: usize,
    pub spurious_count: usize,
}

/// Labels each fixed point as a stored memory, the complement of one, or
/// spurious. A stored match wins over a complement match.
pub fn classify(
    fixed_points: &[BipolarVector],
    memories: &[BipolarVector],
) -> Result<AttractorCensus> {
    if let Some(first) = fixed_points.first().or(memories.first()) {
        let n = first.len();
        for x in fixed_points.iter().chain(memories) {
            check_dim("state length", n, x.len())?;
        }
    }
    let labels: Vec<AttractorLabel> = fixed_points
        .iter()
        .map(|x| {
            if let Some(k) = memories.iter().position(|m| m == x) {
                AttractorLabel::Stored(k)
            } else {
                let neg = x.negated();
                match memories.iter().position(|m| *m == neg) {
                    Some(k) => AttractorLabel::Complement(k),
                    None => AttractorLabel::Spurious,
                }
            }
        })
        .collect();
    let count = |f: fn(&AttractorLabel) -> bool| labels.iter().filter(|l| f(l)).count();
    Ok(AttractorCensus {
        stored_count: count(|l| matches!(l, AttractorLabel::Stored(_))),
        complement_count: count(|l| matches!(l, AttractorLabel::Complement(_))),
        spurious_count: count(|l| matches!(l, AttractorLabel::Spurious)),
        fixed_points: fixed_points.to_vec(),
        labels,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementFailure {
    pub memory: usize,
    /// Components with `(Tx)_i = 0`, where `sgn(0) = +1` pins both `x` and
    /// `−x` to `+1`.
    pub zero_field_components: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComplementProbe {
    /// Memories that are fixed points, and so were probed.
    pub probed: Vec<usize>,
    pub failures: Vec<ComplementFailure>,
}

/// For every memory `x` that is a fixed point, checks whether `−x` is one
/// too, and when it is not, names the zero-field components responsible.
pub fn complement_asymmetry_probe(
    t: &InterconnectionMatrix,
    memories: &[BipolarVector],
) -> Result<ComplementProbe> {
    let mut probed = Vec::new();
    let mut failures = Vec::new();
    for (k, x) in memories.iter().enumerate() {
        if !is_stored(t, x)? {
            continue;
        }
        probed.push(k);
        if is_stored(t, &x.negated())? {
            continue;
        }
        let zero_field_components = t
            .field(x)?
            .iter()
            .enumerate()
            .filter(|(_, &h)| h == 0)
            .map(|(i, _)| i)
            .collect();
        failures.push(ComplementFailure {
            memory: k,
            zero_field_components,
        });
    }
    Ok(ComplementProbe { probed, failures })
}

/// Per-bit stability required for a load to count toward capacity.
pub const STABILITY_THRESHOLD: f64 = 0.99;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CapacityConfig {
    pub n: usize,
    /// Memory counts to test, strictly increasing.
    pub m_values: Vec<usize>,
    pub trials: usize,
    pub seed: u64,
    pub parallel: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityRow {
    pub m: usize,
    pub load: f64,
    pub trials: usize,
    pub unstable_bits: u64,
    pub total_bits: u64,
    pub per_bit_instability: f64,
    /// Binomial standard error of `per_bit_instability`.
    pub per_bit_stderr: f64,
    pub all_stable_trials: u64,
    pub all_stable_fraction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CapacityReport {
    pub n: usize,
    pub seed: u64,
    pub rows: Vec<CapacityRow>,
    /// Largest `m/n` whose per-bit stability is at least 99%.
    pub threshold_capacity_ratio: Option<f64>,
    /// Largest `m/n` at which every memory was an exact fixed point in at
    /// least 99% of trials. Much smaller than the per-bit figure.
    pub exact_capacity_ratio: Option<f64>,
    /// Instability non-decreasing in `m`, up to two standard errors.
    pub monotone_within_2se: bool,
}

/// Independent random stream for one trial: ChaCha8 keyed by `seed`, with the
/// stream id built from `(m, trial)`. Results do not depend on scheduling.
pub fn trial_rng(seed: u64, m: usize, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((m as u64) << 32) | trial as u64);
    rng
}

/// `m` i.i.d. uniform bipolar memories of width `n`.
pub fn random_memories<R: Rng>(rng: &mut R, n: usize, m: usize) -> Vec<BipolarVector> {
    (0..m)
        .map(|_| {
            let v = (0..n)
                .map(|_| {
                    if rng.random::<bool>() {
                        Bipolar::Pos
                    } else {
                        Bipolar::Neg
                    }
                })
                .collect();
            BipolarVector::new(v).expect("n >= 1")
        })
        .collect()
}

#[derive(Debug, Default, Clone, Copy)]
struct TrialTally {
    unstable_bits: u64,
    all_stable: u64,
}

impl std::ops::Add for TrialTally {
    type Output = TrialTally;

    fn add(self, o: TrialTally) -> TrialTally {
        TrialTally {
            unstable_bits: self.unstable_bits + o.unstable_bits,
            all_stable: self.all_stable + o.all_stable,
        }
    }
}

fn run_trial(n: usize, m: usize, seed: u64, trial: usize) -> TrialTally {
    let mut rng = trial_rng(seed, m, trial);
    let memories = random_memories(&mut rng, n, m);
    let t = train(&memories).expect("memories are well formed");
    let mut unstable = 0u64;
    for x in &memories {
        for i in 0..n {
            if Bipolar::from_field(t.field_at(x, i)) != x.get(i) {
                unstable += 1;
            }
        }
    }
    if m == 1 {
        assert_eq!(unstable, 0, "a single memory must always be stable");
    }
    TrialTally {
        unstable_bits: unstable,
        all_stable: u64::from(unstable == 0),
    }
}

/// Trains on random memory sets and measures how many stored bits survive
/// one recall pass.
///
/// Two readings of capacity are reported: per-bit stability, and the
/// fraction of trials in which every memory is an exact fixed point.
pub fn capacity_experiment(config: &CapacityConfig) -> Result<CapacityReport> {
    let CapacityConfig {
        n,
        ref m_values,
        trials,
        seed,
        parallel,
    } = *config;
    if n < 10 {
        return Err(Error::param(format!(
            "capacity experiment needs n >= 10, got {n}"
        )));
    }
    if trials < 50 {
        return Err(Error::param(format!(
            "capacity experiment needs at least 50 trials, got {trials}"
        )));
    }
    if m_values.is_empty() {
        return Err(Error::param("memory-count list is empty"));
    }
    if m_values.contains(&0) {
        return Err(Error::param("memory counts must be at least 1"));
    }
    if m_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::param("memory counts must be strictly increasing"));
    }
    if m_values.iter().any(|&m| m > u32::MAX as usize) || trials > u32::MAX as usize {
        return Err(Error::param("memory count or trial count too large"));
    }

    let rows: Vec<CapacityRow> = m_values
        .iter()
        .map(|&m| {
            let tally = if parallel {
                (0..trials)
                    .into_par_iter()
                    .map(|k| run_trial(n, m, seed, k))
                    .reduce(TrialTally::default, |a, b| a + b)
            } else {
                (0..trials)
                    .map(|k| run_trial(n, m, seed, k))
                    .fold(TrialTally::default(), |a, b| a + b)
            };
            let total_bits = (trials * m * n) as u64;
            let p = tally.unstable_bits as f64 / total_bits as f64;
            CapacityRow {
                m,
                load: m as f64 / n as f64,
                trials,
                unstable_bits: tally.unstable_bits,
                total_bits,
                per_bit_instability: p,
                per_bit_stderr: (p * (1.0 - p) / total_bits as f64).sqrt(),
                all_stable_trials: tally.all_stable,
                all_stable_fraction: tally.all_stable as f64 / trials as f64,
            }
        })
        .collect();

    // Integer comparisons keep the thresholds exact.
    let threshold_capacity_ratio = rows
        .iter()
        .rev()
        .find(|r| r.unstable_bits * 100 <= r.total_bits)
        .map(|r| r.load);
    let exact_capacity_ratio = rows
        .iter()
        .rev()
        .find(|r| r.all_stable_trials * 100 >= 99 * r.trials as u64)
        .map(|r| r.load);
    let monotone_within_2se = instability_monotone(&rows, 2.0);
    Ok(CapacityReport {
        n,
        seed,
        rows,
        threshold_capacity_ratio,
        exact_capacity_ratio,
        monotone_within_2se,
    })
}

/// True when no row's instability falls below its predecessor's by more
/// than `k` combined standard errors.
pub fn instability_monotone(rows: &[CapacityRow], k: f64) -> bool {
    rows.windows(2).all(|w| {
        let slack = k * (w[0].per_bit_stderr.powi(2) + w[1].per_bit_stderr.powi(2)).sqrt();
        w[1].per_bit_instability >= w[0].per_bit_instability - slack
    })
}
