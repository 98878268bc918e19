//! Generator-model retrieval.
//!
//! The weight matrix splits as `T = B + Bᵗ` with `B` strictly lower
//! triangular. Activity starts on a clamped fragment and spreads one neuron
//! at a time: in spread coordinates the next neuron `k` takes
//! `sgn((Bf)_k)`, which only reads neurons `0..k`, all of them already
//! assigned. Spread coordinates come from a proximity ordering so that any
//! start set can be moved to the front.

use serde::Serialize;

use crate::bipolar::{Bipolar, BipolarVector};
use crate::error::{check_dim, Error, Result};
use crate::fragment::Fragment;
use crate::hebbian::{is_stored, InterconnectionMatrix};
use crate::proximity::ProximityMatrix;

/// Strictly lower-triangular half of a weight matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorMatrix {
    n: usize,
    entries: Vec<i64>,
}

impl GeneratorMatrix {
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.entries.chunks(self.n).map(<[i64]>::to_vec).collect()
    }

    /// `B + Bᵗ`, entrywise.
    pub fn reconstruct(&self) -> Vec<Vec<i64>> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| self.get(i, j) + self.get(j, i))
                    .collect()
            })
            .collect()
    }
}

/// `B[i][j] = T[i][j]` for `j < i`, zero elsewhere.
///
/// [`InterconnectionMatrix`] cannot hold an asymmetric or nonzero-diagonal
/// matrix, so the split is always exact: `B + Bᵗ = T`. Raw rows are checked
/// by [`InterconnectionMatrix::from_rows`].
pub fn decompose(t: &InterconnectionMatrix) -> GeneratorMatrix {
    let n = t.n();
    let mut entries = vec![0; n * n];
    for i in 0..n {
        for j in 0..i {
            entries[i * n + j] = t.get(i, j);
        }
    }
    GeneratorMatrix { n, entries }
}

/// The order in which neurons receive activity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpreadOrder {
    /// `permutation[k]` is the neuron activated at position `k`.
    permutation: Vec<usize>,
    /// Start neurons, ascending. They occupy the first positions.
    start_set: Vec<usize>,
}

impl SpreadOrder {
    /// Validates that `permutation` is a bijection on `0..n` listing every
    /// member of `start_set` before any other neuron.
    pub fn new(permutation: Vec<usize>, start_set: &[usize]) -> Result<Self> {
        let n = permutation.len();
        let mut seen = vec![false; n];
        for &p in &permutation {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::param(format!(
                    "spread order is not a permutation of 1..={n}"
                )));
            }
        }
        let start_set = normalize_start_set(n, start_set)?;
        let mut head: Vec<usize> = permutation[..start_set.len()].to_vec();
        head.sort_unstable();
        if head != start_set {
            return Err(Error::param(
                "spread order must place every start neuron before the others",
            ));
        }
        Ok(SpreadOrder {
            permutation,
            start_set,
        })
    }

    /// Start neurons by index, then the rest by index.
    pub fn by_index(n: usize, start_set: &[usize]) -> Result<Self> {
        let start_set = normalize_start_set(n, start_set)?;
        let mut in_start = vec![false; n];
        for &s in &start_set {
            in_start[s] = true;
        }
        let permutation = start_set
            .iter()
            .copied()
            .chain((0..n).filter(|&i| !in_start[i]))
            .collect();
        Ok(SpreadOrder {
            permutation,
            start_set,
        })
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn start_set(&self) -> &[usize] {
        &self.start_set
    }

    pub fn n(&self) -> usize {
        self.permutation.len()
    }

    /// `inverse()[neuron]` is that neuron's position in the spread.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.n()];
        for (k, &p) in self.permutation.iter().enumerate() {
            inv[p] = k;
        }
        inv
    }
}

fn normalize_start_set(n: usize, start_set: &[usize]) -> Result<Vec<usize>> {
    if start_set.is_empty() {
        return Err(Error::param("start set is empty"));
    }
    let mut s = start_set.to_vec();
    s.sort_unstable();
    if let Some(w) = s.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::param(format!(
            "neuron {} listed twice in start set",
            w[0] + 1
        )));
    }
    if let Some(&bad) = s.iter().find(|&&i| i >= n) {
        return Err(Error::param(format!(
            "start neuron {} out of range 1..={n}",
            bad + 1
        )));
    }
    Ok(s)
}

/// Orders non-start neurons by increasing distance to the nearest start
/// neuron, ties to the lower index. Start neurons come first, by index.
pub fn order_from_proximity(p: &ProximityMatrix, start_set: &[usize]) -> Result<SpreadOrder> {
    let n = p.n();
    let start = normalize_start_set(n, start_set)?;
    let mut in_start = vec![false; n];
    for &s in &start {
        in_start[s] = true;
    }
    let mut rest: Vec<(f64, usize)> = (0..n)
        .filter(|&i| !in_start[i])
        .map(|i| {
            let d = start
                .iter()
                .map(|&s| p.distance(s, i))
                .fold(f64::INFINITY, f64::min);
            (d, i)
        })
        .collect();
    rest.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let permutation = start
        .iter()
        .copied()
        .chain(rest.into_iter().map(|(_, i)| i))
        .collect();
    Ok(SpreadOrder {
        permutation,
        start_set: start,
    })
}

/// Result of one spreading step, in spread coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepOutcome {
    pub fragment: Fragment,
    pub neuron: usize,
    /// `(Bf)_k` before thresholding.
    pub field: i64,
    pub value: Bipolar,
    /// Assigned neurons whose held value disagrees with the threshold of the
    /// feedback field `B + Bᵗ` restricted to the assigned prefix.
    pub disagreements: Vec<usize>,
}

/// Assigns the next neuron of a prefix-shaped fragment.
///
/// `f` must assign exactly neurons `0..k` with `1 <= k < n`. Neuron `k`
/// receives `sgn(Σ_{l<k} B[k][l]·f_l)`; no earlier value is touched.
pub fn spread_step(b: &GeneratorMatrix, f: &Fragment) -> Result<StepOutcome> {
    check_dim("fragment length", b.n(), f.len())?;
    let k = f
        .prefix_len()
        .ok_or_else(|| Error::param("fragment is not a prefix in spread coordinates"))?;
    if k == 0 {
        return Err(Error::param("fragment has no assigned neurons"));
    }
    if k == b.n() {
        return Err(Error::param("fragment is already complete"));
    }
    let held = |l: usize| f.value(l).expect("prefix is assigned").value() as i64;
    let field: i64 = (0..k).map(|l| b.get(k, l) * held(l)).sum();
    let value = Bipolar::from_field(field);

    let mut fragment = f.clone();
    fragment.assign(k, value)?;
    let disagreements = prefix_disagreements(b, &fragment, k + 1);
    Ok(StepOutcome {
        fragment,
        neuron: k,
        field,
        value,
        disagreements,
    })
}

/// Neurons `j < len` whose value differs from `sgn(Σ_{l<len, l≠j} T[j][l] f_l)`.
fn prefix_disagreements(b: &GeneratorMatrix, f: &Fragment, len: usize) -> Vec<usize> {
    let val = |l: usize| f.value(l).expect("prefix is assigned");
    (0..len)
        .filter(|&j| {
            let h: i64 = (0..len)
                .filter(|&l| l != j)
                .map(|l| (b.get(j, l) + b.get(l, j)) * val(l).value() as i64)
                .sum();
            Bipolar::from_field(h) != val(j)
        })
        .collect()
}

/// How to derive the spread order.
#[derive(Debug, Clone)]
pub enum OrderSource<'a> {
    /// Start neurons, then everything else by index.
    ByIndex,
    Proximity(&'a ProximityMatrix),
    Explicit(SpreadOrder),
}

/// One spreading step, in original neuron indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpreadStep {
    pub neuron: usize,
    pub field: i64,
    pub value: Bipolar,
    pub disagreements: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpreadTrace {
    pub order: SpreadOrder,
    pub steps: Vec<SpreadStep>,
    pub final_state: BipolarVector,
    /// Neurons where the completed state disagrees with `sgn(Tx)`: feeding
    /// the finished fragment back would try to overwrite these values.
    pub consistency_flags: Vec<usize>,
}

/// Spreads activity from clamped `start` values until every neuron is set.
///
/// Relabels `T` into spread coordinates, splits it into `B`, applies
/// [`spread_step`] `n − |start|` times and maps the result back.
pub fn spread_full(
    t: &InterconnectionMatrix,
    order: OrderSource<'_>,
    start: &[(usize, Bipolar)],
) -> Result<SpreadTrace> {
    let n = t.n();
    let start_fragment = Fragment::clamped(n, start)?;
    let start_set: Vec<usize> = start.iter().map(|&(i, _)| i).collect();
    let order = match order {
        OrderSource::ByIndex => SpreadOrder::by_index(n, &start_set)?,
        OrderSource::Proximity(p) => {
            check_dim("proximity matrix size", n, p.n())?;
            order_from_proximity(p, &start_set)?
        }
        OrderSource::Explicit(o) => {
            check_dim("spread order length", n, o.n())?;
            let mut s = start_set.clone();
            s.sort_unstable();
            if o.start_set() != s.as_slice() {
                return Err(Error::param(
                    "explicit spread order has a different start set than the start values",
                ));
            }
            o
        }
    };
    let perm = order.permutation().to_vec();
    let b = decompose(&t.permuted(&perm)?);
    let mut fragment = start_fragment.permuted(&perm)?;

    let mut steps = Vec::with_capacity(n - start.len());
    while !fragment.is_complete() {
        let out = spread_step(&b, &fragment)?;
        for j in 0..out.neuron {
            assert_eq!(
                out.fragment.value(j),
                fragment.value(j),
                "spread step overwrote an assigned neuron"
            );
        }
        steps.push(SpreadStep {
            neuron: perm[out.neuron],
            field: out.field,
            value: out.value,
            disagreements: out.disagreements.iter().map(|&j| perm[j]).collect(),
        });
        fragment = out.fragment;
    }

    let spread_state = fragment.to_vector().expect("complete");
    let inv = order.inverse();
    let final_state = spread_state.permuted(&inv)?;
    let consistency_flags = {
        let mut flags: Vec<usize> = prefix_disagreements(&b, &fragment, n)
            .into_iter()
            .map(|j| perm[j])
            .collect();
        flags.sort_unstable();
        flags
    };
    Ok(SpreadTrace {
        order,
        steps,
        final_state,
        consistency_flags,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RetrievalReport {
    pub trace: SpreadTrace,
    /// Index of the memory equal to the final state.
    pub matched_memory: Option<usize>,
    /// Index of the memory whose negation equals the final state.
    pub complement_of: Option<usize>,
    /// Closest memory by Hamming distance, lower index on ties.
    pub nearest_memory: Option<usize>,
    pub hamming_to_nearest: Option<usize>,
    /// Whether the final state satisfies `x = sgn(Tx)`.
    pub fixed_point: bool,
}

/// Runs [`spread_full`] and scores the outcome against known memories.
pub fn retrieve_report(
    t: &InterconnectionMatrix,
    order: OrderSource<'_>,
    start: &[(usize, Bipolar)],
    memories: &[BipolarVector],
) -> Result<RetrievalReport> {
    for m in memories {
        check_dim("memory length", t.n(), m.len())?;
    }
    let trace = spread_full(t, order, start)?;
    let x = &trace.final_state;
    let matched_memory = memories.iter().position(|m| m == x);
    let negated = x.negated();
    let complement_of = memories.iter().position(|m| *m == negated);
    let mut nearest: Option<(usize, usize)> = None;
    for (k, m) in memories.iter().enumerate() {
        let d = m.hamming(x)?;
        if nearest.is_none_or(|(_, best)| d < best) {
            nearest = Some((k, d));
        }
    }
    let fixed_point = is_stored(t, x)?;
    Ok(RetrievalReport {
        matched_memory,
        complement_of,
        nearest_memory: nearest.map(|(k, _)| k),
        hamming_to_nearest: nearest.map(|(_, d)| d),
        fixed_point,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hebbian::train;
    use Bipolar::{Neg, Pos};

    fn v(x: &[i32]) -> BipolarVector {
        BipolarVector::from_ints(x).unwrap()
    }

    fn memories() -> Vec<BipolarVector> {
        vec![v(&[1, 1, 1, 1]), v(&[1, -1, 1, -1])]
    }

    fn two_memory() -> InterconnectionMatrix {
        train(&memories()).unwrap()
    }

    #[test]
    fn decompose_two_memory() {
        let b = decompose(&two_memory());
        assert_eq!(
            b.rows(),
            vec![
                vec![0, 0, 0, 0],
                vec![0, 0, 0, 0],
                vec![2, 0, 0, 0],
                vec![0, 2, 0, 0],
            ]
        );
        assert_eq!(b.reconstruct(), two_memory().rows());
        let zero = InterconnectionMatrix::zeros(3).unwrap();
        assert!(decompose(&zero).rows().iter().flatten().all(|&w| w == 0));
    }

    #[test]
    fn proximity_order_sorts_by_distance() {
        let p = ProximityMatrix::new(vec![
            vec![0.0, 4.0, 1.0, 2.0],
            vec![4.0, 0.0, 2.0, 5.0],
            vec![1.0, 2.0, 0.0, 3.0],
            vec![2.0, 5.0, 3.0, 0.0],
        ])
        .unwrap();
        let o = order_from_proximity(&p, &[2]).unwrap();
        assert_eq!(o.permutation(), &[2, 0, 1, 3]);
        assert_eq!(o.start_set(), &[2]);
    }

    #[test]
    fn proximity_order_all_start_and_ties() {
        let p = ProximityMatrix::uniform(4).unwrap();
        let o = order_from_proximity(&p, &[3, 1, 0, 2]).unwrap();
        assert_eq!(o.permutation(), &[0, 1, 2, 3]);
        let o = order_from_proximity(&p, &[2]).unwrap();
        assert_eq!(o.permutation(), &[2, 0, 1, 3]);
    }

    #[test]
    fn proximity_order_uses_nearest_start_member() {
        let p = ProximityMatrix::new(vec![
            vec![0.0, 9.0, 9.0, 1.0],
            vec![9.0, 0.0, 1.5, 9.0],
            vec![9.0, 1.5, 0.0, 9.0],
            vec![1.0, 9.0, 9.0, 0.0],
        ])
        .unwrap();
        // from {0, 1}: neuron 3 at 1.0 (via 0), neuron 2 at 1.5 (via 1)
        let o = order_from_proximity(&p, &[1, 0]).unwrap();
        assert_eq!(o.permutation(), &[0, 1, 3, 2]);
    }

    #[test]
    fn order_errors() {
        let p = ProximityMatrix::uniform(3).unwrap();
        assert!(order_from_proximity(&p, &[]).is_err());
        assert!(order_from_proximity(&p, &[3]).is_err());
        assert!(SpreadOrder::new(vec![0, 0, 1], &[0]).is_err());
        assert!(SpreadOrder::new(vec![1, 0, 2], &[0]).is_err());
        assert!(SpreadOrder::new(vec![1, 0, 2], &[0, 1]).is_ok());
    }

    #[test]
    fn spread_step_examples() {
        let b = decompose(&two_memory());
        let f = Fragment::clamped(4, &[(0, Pos)]).unwrap();
        let s = spread_step(&b, &f).unwrap();
        assert_eq!((s.neuron, s.field, s.value), (1, 0, Pos));

        let f = Fragment::clamped(4, &[(0, Pos), (1, Pos)]).unwrap();
        let s = spread_step(&b, &f).unwrap();
        assert_eq!((s.neuron, s.field, s.value), (2, 2, Pos));

        let f = Fragment::clamped(4, &[(0, Pos), (1, Neg), (2, Pos)]).unwrap();
        let s = spread_step(&b, &f).unwrap();
        assert_eq!((s.neuron, s.field, s.value), (3, -2, Neg));
        assert!(s.fragment.is_complete());
        assert!(!s.fragment.is_clamped(3));
    }

    #[test]
    fn spread_step_errors() {
        let b = decompose(&two_memory());
        let full = Fragment::clamped(4, &[(0, Pos), (1, Pos), (2, Pos), (3, Pos)]).unwrap();
        assert!(spread_step(&b, &full).is_err());
        let gap = Fragment::clamped(4, &[(0, Pos), (2, Pos)]).unwrap();
        assert!(spread_step(&b, &gap).is_err());
        assert!(spread_step(&b, &Fragment::empty(4).unwrap()).is_err());
        assert!(spread_step(&b, &Fragment::empty(3).unwrap()).is_err());
    }

    #[test]
    fn spread_full_recovers_both_memories() {
        let t = two_memory();
        let tr = spread_full(&t, OrderSource::ByIndex, &[(0, Pos)]).unwrap();
        assert_eq!(tr.final_state, v(&[1, 1, 1, 1]));
        assert_eq!(tr.steps.len(), 3);
        assert!(tr.consistency_flags.is_empty());

        let tr = spread_full(&t, OrderSource::ByIndex, &[(0, Pos), (1, Neg)]).unwrap();
        assert_eq!(tr.final_state, v(&[1, -1, 1, -1]));
        let fields: Vec<i64> = tr.steps.iter().map(|s| s.field).collect();
        assert_eq!(fields, vec![2, -2]);
        assert!(tr.consistency_flags.is_empty());
    }

    #[test]
    fn spread_full_with_everything_clamped() {
        let t = two_memory();
        let start = [(0, Neg), (1, Pos), (2, Pos), (3, Neg)];
        let tr = spread_full(&t, OrderSource::ByIndex, &start).unwrap();
        assert!(tr.steps.is_empty());
        assert_eq!(tr.final_state, v(&[-1, 1, 1, -1]));
        // (Tx) = (2,-2,-2,2): every neuron disagrees
        assert_eq!(tr.consistency_flags, vec![0, 1, 2, 3]);
    }

    #[test]
    fn spread_full_via_proximity_maps_back() {
        let t = two_memory();
        let p = ProximityMatrix::new(vec![
            vec![0.0, 1.0, 3.0, 2.0],
            vec![1.0, 0.0, 4.0, 5.0],
            vec![3.0, 4.0, 0.0, 1.0],
            vec![2.0, 5.0, 1.0, 0.0],
        ])
        .unwrap();
        // start at neuron 3 with -1; order 3, 2, 0, 1
        let tr = spread_full(&t, OrderSource::Proximity(&p), &[(3, Neg)]).unwrap();
        assert_eq!(tr.order.permutation(), &[3, 2, 0, 1]);
        // 2 ← sgn(T23·x3)=sgn(0)=+1, 0 ← sgn(T02·x2)=+1, 1 ← sgn(T13·x3)=−1
        assert_eq!(tr.final_state, v(&[1, -1, 1, -1]));
        let assigned: Vec<usize> = tr.steps.iter().map(|s| s.neuron).collect();
        assert_eq!(assigned, vec![2, 0, 1]);
    }

    #[test]
    fn explicit_order_must_match_start() {
        let t = two_memory();
        let o = SpreadOrder::new(vec![1, 0, 2, 3], &[1]).unwrap();
        assert!(spread_full(&t, OrderSource::Explicit(o.clone()), &[(0, Pos)]).is_err());
        let tr = spread_full(&t, OrderSource::Explicit(o), &[(1, Neg)]).unwrap();
        assert_eq!(tr.final_state.get(1), Neg);
    }

    #[test]
    fn retrieve_report_examples() {
        let t = two_memory();
        let r = retrieve_report(&t, OrderSource::ByIndex, &[(0, Pos)], &memories()).unwrap();
        assert_eq!(r.matched_memory, Some(0));
        assert_eq!(r.hamming_to_nearest, Some(0));
        assert!(r.fixed_point);

        let zero = InterconnectionMatrix::zeros(4).unwrap();
        let r = retrieve_report(&zero, OrderSource::ByIndex, &[(0, Pos)], &memories()).unwrap();
        assert_eq!(r.trace.final_state, v(&[1, 1, 1, 1]));
        let r =
            retrieve_report(&zero, OrderSource::ByIndex, &[(0, Pos)], &memories()[1..]).unwrap();
        assert_eq!(r.matched_memory, None);

        // 1 ← sgn(0)=+1, 2 ← sgn(−2)=−1, 3 ← sgn(2)=+1
        let r = retrieve_report(&t, OrderSource::ByIndex, &[(0, Neg)], &memories()).unwrap();
        assert_eq!(r.trace.final_state, v(&[-1, 1, -1, 1]));
        assert_eq!(r.matched_memory, None);
        assert_eq!(r.complement_of, Some(1));
        assert_eq!(r.nearest_memory, Some(0));
        assert_eq!(r.hamming_to_nearest, Some(2));
        assert_eq!(r.trace.final_state.hamming(&memories()[1]).unwrap(), 4);
        assert!(r.fixed_point);
    }
}
