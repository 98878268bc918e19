//! Measurement collapse viewed as a choice among network outputs.
//!
//! Two pieces: a count of the internal configurations needed to account for
//! every outcome of a discretized qubit, and a Born-rule sampler that picks
//! outcome `i` with probability `a_i²`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Allowed deviation of `Σ a_i²` from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Real amplitudes over `k >= 2` basis states with `Σ a_i² = 1`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AmplitudeVector {
    amplitudes: Vec<f64>,
}

impl AmplitudeVector {
    pub fn new(amplitudes: Vec<f64>) -> Result<Self> {
        if amplitudes.len() < 2 {
            return Err(Error::param(format!(
                "need at least 2 amplitudes, got {}",
                amplitudes.len()
            )));
        }
        if let Some(bad) = amplitudes.iter().find(|a| !a.is_finite()) {
            return Err(Error::param(format!("amplitude {bad} is not finite")));
        }
        let v = AmplitudeVector { amplitudes };
        v.check_normalized()?;
        Ok(v)
    }

    /// Scales arbitrary nonzero amplitudes onto the unit sphere.
    pub fn normalized(amplitudes: Vec<f64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::param("amplitudes cannot be normalized"));
        }
        AmplitudeVector::new(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a * a).collect()
    }

    fn check_normalized(&self) -> Result<()> {
        let total: f64 = self.amplitudes.iter().map(|a| a * a).sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::param(format!(
                "amplitudes are not normalized: sum of squares is {total}"
            )));
        }
        Ok(())
    }
}

/// Internal reorganizations for a qubit whose amplitudes each take
/// `n_levels` values: `2·n²` raw cases halved by the pairing of `a` and `b`,
/// i.e. `n²`.
pub fn reorg_count(n_levels: u64) -> Result<u64> {
    if n_levels == 0 {
        return Err(Error::param("resolution must be at least 1"));
    }
    n_levels
        .checked_mul(n_levels)
        .ok_or_else(|| Error::param(format!("resolution {n_levels} overflows the count")))
}

/// One raw case: `a` on grid level `a_index`, `b` on `b_index`, and the
/// collapse outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ReorgCase {
    pub a_index: u64,
    pub b_index: u64,
    pub outcome: u8,
}

impl ReorgCase {
    /// The case with the roles of `a` and `b` exchanged: `(i, j, o) ↦ (j, i, 1−o)`.
    /// An involution with no fixed points, so it pairs up all raw cases.
    pub fn partner(self) -> ReorgCase {
        ReorgCase {
            a_index: self.b_index,
            b_index: self.a_index,
            outcome: 1 - self.outcome,
        }
    }

    /// The member of the pair with outcome 0.
    pub fn canonical(self) -> ReorgCase {
        if self.outcome == 0 {
            self
        } else {
            self.partner()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReorganizationTable {
    pub n_levels: u64,
    /// Amplitude value at each grid level: midpoints of `n_levels` equal
    /// bins of `[0, 1]`.
    pub grid: Vec<f64>,
    pub raw_count: u64,
    /// One representative per partner pair.
    pub cases: Vec<ReorgCase>,
    pub distinct_count: u64,
}

/// Largest resolution [`enumerate_reorganizations`] will materialize.
pub const MAX_ENUMERATED_LEVELS: u64 = 2048;

/// Lists the `2·n²` raw `(a, b, outcome)` cases and quotients them by
/// [`ReorgCase::partner`], leaving `n²` distinct cases.
pub fn enumerate_reorganizations(n_levels: u64) -> Result<ReorganizationTable> {
    reorg_count(n_levels)?;
    if n_levels > MAX_ENUMERATED_LEVELS {
        return Err(Error::param(format!(
            "resolution {n_levels} too large to enumerate (max {MAX_ENUMERATED_LEVELS})"
        )));
    }
    let raw: Vec<ReorgCase> = (0..n_levels)
        .flat_map(|a| {
            (0..n_levels).flat_map(move |b| {
                (0..2u8).map(move |outcome| ReorgCase {
                    a_index: a,
                    b_index: b,
                    outcome,
                })
            })
        })
        .collect();
    let raw_count = raw.len() as u64;
    let mut cases: Vec<ReorgCase> = raw.into_iter().map(ReorgCase::canonical).collect();
    cases.sort_unstable();
    cases.dedup();
    let grid = (0..n_levels)
        .map(|i| (i as f64 + 0.5) / n_levels as f64)
        .collect();
    Ok(ReorganizationTable {
        n_levels,
        grid,
        raw_count,
        distinct_count: cases.len() as u64,
        cases,
    })
}

/// Cumulative probabilities, rescaled so the last entry is exactly 1.
fn cumulative(amps: &AmplitudeVector) -> Vec<f64> {
    let probs = amps.probabilities();
    let total: f64 = probs.iter().sum();
    let mut acc = 0.0;
    let mut cdf: Vec<f64> = probs
        .iter()
        .map(|p| {
            acc += p;
            acc / total
        })
        .collect();
    *cdf.last_mut().expect("k >= 2") = 1.0;
    cdf
}

/// Inverse-CDF draw: the lowest index `i` with `u <= cdf[i]` and a nonzero
/// probability, so boundary ties go to the lower index.
fn invert(cdf: &[f64], u: f64) -> usize {
    let mut prev = 0.0;
    for (i, &c) in cdf.iter().enumerate() {
        if c > prev && u <= c {
            return i;
        }
        prev = c;
    }
    cdf.iter()
        .rposition(|&c| c > 0.0)
        .expect("some probability is nonzero")
}

/// `count` independent outcomes, index `i` with probability `a_i²`.
/// Deterministic for a given `seed`.
pub fn collapse_sample(amps: &AmplitudeVector, seed: u64, count: usize) -> Result<Vec<usize>> {
    amps.check_normalized()?;
    if count == 0 {
        return Err(Error::param("sample count must be at least 1"));
    }
    let cdf = cumulative(amps);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..count)
        .map(|_| invert(&cdf, rng.random::<f64>()))
        .collect())
}

/// Occurrences of each outcome index.
pub fn histogram(samples: &[usize], k: usize) -> Vec<u64> {
    let mut counts = vec![0u64; k];
    for &s in samples {
        counts[s] += 1;
    }
    counts
}

/// A collapse outcome read as one of `k` network outputs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selection {
    pub index: usize,
    pub label: String,
    pub probability: f64,
    pub note: String,
}

/// Draws one outcome and presents it as the output the network settled on.
pub fn collapse_as_selection(amps: &AmplitudeVector, seed: u64) -> Result<Selection> {
    let index = collapse_sample(amps, seed, 1)?[0];
    let probability = amps.probabilities()[index];
    Ok(Selection {
        index,
        label: format!("output {}", index + 1),
        probability,
        note: format!(
            "collapse onto basis state {index} selected output {} of {} with probability {probability}",
            index + 1,
            amps.len()
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amps(a: &[f64]) -> AmplitudeVector {
        AmplitudeVector::new(a.to_vec()).unwrap()
    }

    #[test]
    fn construction_checks() {
        assert!(AmplitudeVector::new(vec![1.0]).is_err());
        assert!(AmplitudeVector::new(vec![0.6, 0.6]).is_err());
        assert!(AmplitudeVector::new(vec![f64::NAN, 1.0]).is_err());
        assert!(AmplitudeVector::new(vec![0.6, -0.8]).is_ok());
        let v = AmplitudeVector::normalized(vec![3.0, 4.0]).unwrap();
        assert!((v.amplitudes()[0] - 0.6).abs() < 1e-15);
        assert!(AmplitudeVector::normalized(vec![0.0, 0.0]).is_err());
    }

    #[test]
    fn reorg_count_examples() {
        assert_eq!(reorg_count(10).unwrap(), 100);
        assert_eq!(reorg_count(1).unwrap(), 1);
        assert_eq!(reorg_count(37).unwrap(), 1369);
        assert!(reorg_count(0).is_err());
        assert!(reorg_count(u64::MAX).is_err());
    }

    #[test]
    fn reorganization_table_counts() {
        let t = enumerate_reorganizations(1).unwrap();
        assert_eq!((t.raw_count, t.distinct_count), (2, 1));
        let t = enumerate_reorganizations(10).unwrap();
        assert_eq!((t.raw_count, t.distinct_count), (200, 100));
        assert_eq!(t.cases.len(), 100);
        assert!(t.cases.iter().all(|c| c.outcome == 0));
        assert!(enumerate_reorganizations(0).is_err());
    }

    #[test]
    fn partner_is_fixed_point_free_involution() {
        for a in 0..5 {
            for b in 0..5 {
                for outcome in 0..2 {
                    let c = ReorgCase {
                        a_index: a,
                        b_index: b,
                        outcome,
                    };
                    assert_eq!(c.partner().partner(), c);
                    assert_ne!(c.partner(), c);
                }
            }
        }
    }

    #[test]
    fn certain_outcomes() {
        assert!(collapse_sample(&amps(&[1.0, 0.0]), 5, 1000)
            .unwrap()
            .iter()
            .all(|&i| i == 0));
        assert!(collapse_sample(&amps(&[0.0, 1.0]), 5, 1000)
            .unwrap()
            .iter()
            .all(|&i| i == 1));
        assert_eq!(
            collapse_as_selection(&amps(&[0.0, 1.0]), 3).unwrap().index,
            1
        );
    }

    #[test]
    fn boundary_ties_go_low() {
        let cdf = [0.25, 0.5, 0.5, 1.0];
        assert_eq!(invert(&cdf, 0.25), 0);
        assert_eq!(invert(&cdf, 0.5), 1);
        assert_eq!(invert(&cdf, 0.50001), 3);
        assert_eq!(invert(&[0.0, 1.0], 0.0), 1);
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let a = amps(&[0.6, 0.8]);
        assert_eq!(
            collapse_sample(&a, 42, 500).unwrap(),
            collapse_sample(&a, 42, 500).unwrap()
        );
        assert_ne!(
            collapse_sample(&a, 42, 500).unwrap(),
            collapse_sample(&a, 43, 500).unwrap()
        );
        assert_eq!(
            collapse_as_selection(&a, 9).unwrap(),
            collapse_as_selection(&a, 9).unwrap()
        );
        assert!(collapse_sample(&a, 1, 0).is_err());
    }

    #[test]
    fn born_frequencies_qubit() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let s = collapse_sample(&amps(&[h, h]), 1, 100_000).unwrap();
        let f0 = histogram(&s, 2)[0] as f64 / 1e5;
        assert!((f0 - 0.5).abs() <= 0.005, "{f0}");

        let s = collapse_sample(&amps(&[0.6, 0.8]), 2, 100_000).unwrap();
        let counts = histogram(&s, 2);
        for (c, p) in counts.iter().zip([0.36, 0.64]) {
            let se = (p * (1.0 - p) / 1e5_f64).sqrt();
            assert!((*c as f64 / 1e5 - p).abs() <= 3.0 * se);
        }
    }

    #[test]
    fn uniform_four_way_selection() {
        let a = amps(&[0.5, 0.5, 0.5, 0.5]);
        let mut counts = [0u32; 4];
        for seed in 0..100_000 {
            counts[collapse_as_selection(&a, seed).unwrap().index] += 1;
        }
        for c in counts {
            assert!((c as f64 / 1e5 - 0.25).abs() <= 0.013, "{counts:?}");
        }
    }
}
