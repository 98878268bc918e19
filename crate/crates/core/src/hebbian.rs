//! Outer-product training and threshold recall over the full network.
//!
//! Weights are the unnormalized integer sum `T = Σ x xᵗ` with the diagonal
//! forced to zero. A state is *stored* when one synchronous pass leaves it
//! unchanged, `x = sgn(Tx)`.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bipolar::{common_dimension, Bipolar, BipolarVector};
use crate::error::{check_dim, Error, Result};

/// Symmetric, zero-diagonal integer weight matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InterconnectionMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl InterconnectionMatrix {
    pub fn zeros(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("weight matrix needs at least one neuron"));
        }
        Ok(InterconnectionMatrix {
            n,
            entries: vec![0; n * n],
        })
    }

    /// Validates squareness, symmetry and the zero diagonal.
    pub fn from_rows(rows: Vec<Vec<i64>>) -> Result<Self> {
        let n = rows.len();
        let mut t = InterconnectionMatrix::zeros(n)?;
        for (i, row) in rows.iter().enumerate() {
            check_dim(&format!("weight row {} length", i + 1), n, row.len())?;
        }
        for i in 0..n {
            if rows[i][i] != 0 {
                return Err(Error::param(format!(
                    "weight diagonal ({0}, {0}) is {1}, expected 0",
                    i + 1,
                    rows[i][i]
                )));
            }
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::param(format!(
                        "weight matrix is asymmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        for (i, row) in rows.into_iter().enumerate() {
            t.entries[i * n..(i + 1) * n].copy_from_slice(&row);
        }
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    /// `cT` for a positive integer `c`.
    pub fn scaled(&self, c: i64) -> Result<Self> {
        if c <= 0 {
            return Err(Error::param(format!(
                "scale factor must be positive, got {c}"
            )));
        }
        Ok(InterconnectionMatrix {
            n: self.n,
            entries: self.entries.iter().map(|&w| w * c).collect(),
        })
    }

    /// `ΠTΠᵗ`, i.e. entry `(a, b)` of the result is `T[perm[a]][perm[b]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_dim("permutation length", self.n, perm.len())?;
        let mut entries = Vec::with_capacity(self.n * self.n);
        for &pa in perm {
            for &pb in perm {
                entries.push(self.get(pa, pb));
            }
        }
        Ok(InterconnectionMatrix { n: self.n, entries })
    }

    /// The field `(Tx)_i` at a single neuron.
    #[inline]
    pub fn field_at(&self, x: &BipolarVector, i: usize) -> i64 {
        self.row(i)
            .iter()
            .zip(x.as_slice())
            .map(|(&w, b)| w * b.value() as i64)
            .sum()
    }

    /// The full field `Tx`.
    pub fn field(&self, x: &BipolarVector) -> Result<Vec<i64>> {
        check_dim("state length", self.n, x.len())?;
        Ok((0..self.n).map(|i| self.field_at(x, i)).collect())
    }
}

impl Serialize for InterconnectionMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for InterconnectionMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<i64>>::deserialize(d)?;
        InterconnectionMatrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Builds `T[i][j] = Σ_k x^k[i]·x^k[j]` for `i ≠ j`, zero on the diagonal.
pub fn train(memories: &[BipolarVector]) -> Result<InterconnectionMatrix> {
    let n = common_dimension(memories)?;
    let mut t = InterconnectionMatrix::zeros(n)?;
    for x in memories {
        let xs = x.to_ints();
        for i in 0..n {
            let row = &mut t.entries[i * n..(i + 1) * n];
            for j in 0..n {
                if i != j {
                    row[j] += (xs[i] * xs[j]) as i64;
                }
            }
        }
    }
    Ok(t)
}

/// One synchronous pass: `sgn(Tx)` componentwise.
pub fn recall_sync(t: &InterconnectionMatrix, x: &BipolarVector) -> Result<BipolarVector> {
    let field = t.field(x)?;
    BipolarVector::new(field.into_iter().map(Bipolar::from_field).collect())
}

/// True exactly when `x` is a fixed point of one synchronous pass.
pub fn is_stored(t: &InterconnectionMatrix, x: &BipolarVector) -> Result<bool> {
    check_dim("state length", t.n(), x.len())?;
    Ok((0..t.n()).all(|i| Bipolar::from_field(t.field_at(x, i)) == x.get(i)))
}

/// `E(x) = −½ xᵗTx`.
pub fn energy(t: &InterconnectionMatrix, x: &BipolarVector) -> Result<f64> {
    Ok(energy_exact(t, x)? as f64)
}

/// Energy as an exact integer. `xᵗTx` is even because `T` is symmetric with
/// a zero diagonal.
pub(crate) fn energy_exact(t: &InterconnectionMatrix, x: &BipolarVector) -> Result<i64> {
    let quad: i64 = t
        .field(x)?
        .iter()
        .zip(x.as_slice())
        .map(|(&h, b)| h * b.value() as i64)
        .sum();
    Ok(-quad / 2)
}

/// Default pass budget for iterated recall.
pub fn default_max_passes(n: usize) -> usize {
    10 * n
}

/// Neuron visiting order for asynchronous recall.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Schedule {
    /// Neurons `0, 1, …, n−1` every pass.
    Cyclic,
    /// A fresh permutation each pass, drawn from a generator seeded with `seed`.
    RandomPermutation { seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RecallResult {
    pub state: BipolarVector,
    /// Passes performed, including the final pass that changed nothing.
    pub iterations: usize,
    pub converged: bool,
    /// Energy before the first update, then after every single-neuron update.
    pub energy_trace: Vec<f64>,
}

/// Asynchronous recall: `x[i] ← sgn((Tx)_i)` one neuron at a time until a
/// full pass changes nothing or `max_passes` is reached.
///
/// With a zero diagonal each update either lowers the energy or leaves it
/// unchanged; a zero field sets the neuron to `+1` at constant energy.
pub fn recall_async(
    t: &InterconnectionMatrix,
    x: &BipolarVector,
    schedule: Schedule,
    max_passes: usize,
) -> Result<RecallResult> {
    check_dim("state length", t.n(), x.len())?;
    if max_passes == 0 {
        return Err(Error::param("max_passes must be at least 1"));
    }
    let n = t.n();
    let mut state = x.clone();
    let mut e = energy_exact(t, &state)?;
    let mut energy_trace = Vec::with_capacity(1 + n);
    energy_trace.push(e as f64);

    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = match schedule {
        Schedule::Cyclic => None,
        Schedule::RandomPermutation { seed } => Some(ChaCha8Rng::seed_from_u64(seed)),
    };

    let mut iterations = 0;
    let mut converged = false;
    while iterations < max_passes {
        iterations += 1;
        if let Some(rng) = rng.as_mut() {
            order.shuffle(rng);
        }
        let mut changed = false;
        for &i in &order {
            let h = t.field_at(&state, i);
            let old = state.get(i);
            let new = Bipolar::from_field(h);
            if new != old {
                e -= (new.value() - old.value()) as i64 * h;
                state.set(i, new);
                changed = true;
            }
            energy_trace.push(e as f64);
        }
        if !changed {
            converged = true;
            break;
        }
    }
    Ok(RecallResult {
        state,
        iterations,
        converged,
        energy_trace,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum SyncOutcome {
    FixedPoint,
    /// The trajectory revisited a state; `states` is one full period.
    Cycle {
        period: usize,
        states: Vec<BipolarVector>,
    },
    /// Budget exhausted without a repeat.
    Exhausted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SyncTrajectory {
    pub state: BipolarVector,
    pub passes: usize,
    pub converged: bool,
    pub outcome: SyncOutcome,
}

/// Repeated synchronous passes, stopping at the first repeated state.
///
/// A repeat one pass back is a fixed point. Symmetric weights can also
/// settle into a 2-cycle, reported as non-converged with the cycle attached.
pub fn iterate_sync(
    t: &InterconnectionMatrix,
    x: &BipolarVector,
    max_passes: usize,
) -> Result<SyncTrajectory> {
    check_dim("state length", t.n(), x.len())?;
    if max_passes == 0 {
        return Err(Error::param("max_passes must be at least 1"));
    }
    let mut history = vec![x.clone()];
    for pass in 1..=max_passes {
        let next = recall_sync(t, history.last().expect("nonempty"))?;
        if let Some(pos) = history.iter().position(|s| *s == next) {
            let period = history.len() - pos;
            let outcome = if period == 1 {
                SyncOutcome::FixedPoint
            } else {
                SyncOutcome::Cycle {
                    period,
                    states: history[pos..].to_vec(),
                }
            };
            return Ok(SyncTrajectory {
                state: next,
                passes: pass,
                converged: period == 1,
                outcome,
            });
        }
        history.push(next);
    }
    Ok(SyncTrajectory {
        state: history.pop().expect("nonempty"),
        passes: max_passes,
        converged: false,
        outcome: SyncOutcome::Exhausted,
    })
}
