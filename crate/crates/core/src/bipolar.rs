//! Bipolar neuron states and the `sgn` nonlinearity.
//!
//! Neurons take values in {+1, −1}. The threshold maps zero to +1, which
//! makes the nonlinearity asymmetric: `sgn(0) = +1` but `−sgn(0) ≠ sgn(−0)`.
//! That asymmetry is the reason not every complement of a stored memory is
//! itself stored (see [`crate::analysis::complement_asymmetry_probe`]).

use std::fmt;
use std::ops::Neg;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A single neuron value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "i8", into = "i8")]
pub enum Bipolar {
    Neg,
    Pos,
}

impl Bipolar {
    #[inline]
    pub fn value(self) -> i32 {
        match self {
            Bipolar::Pos => 1,
            Bipolar::Neg => -1,
        }
    }

    /// Threshold on an integer field; zero maps to `Pos`.
    #[inline]
    pub fn from_field(field: i64) -> Self {
        if field >= 0 {
            Bipolar::Pos
        } else {
            Bipolar::Neg
        }
    }
}

impl Neg for Bipolar {
    type Output = Bipolar;

    fn neg(self) -> Bipolar {
        match self {
            Bipolar::Pos => Bipolar::Neg,
            Bipolar::Neg => Bipolar::Pos,
        }
    }
}

impl TryFrom<i8> for Bipolar {
    type Error = String;

    fn try_from(v: i8) -> std::result::Result<Self, String> {
        match v {
            1 => Ok(Bipolar::Pos),
            -1 => Ok(Bipolar::Neg),
            other => Err(format!("bipolar value must be 1 or -1, got {other}")),
        }
    }
}

impl From<Bipolar> for i8 {
    fn from(b: Bipolar) -> i8 {
        b.value() as i8
    }
}

impl fmt::Display for Bipolar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Bipolar::Pos => f.write_str("+1"),
            Bipolar::Neg => f.write_str("-1"),
        }
    }
}

/// `+1` if `v >= 0`, `−1` otherwise. Non-finite input is rejected.
pub fn sgn(v: f64) -> Result<Bipolar> {
    if !v.is_finite() {
        return Err(Error::param(format!("sgn of non-finite value {v}")));
    }
    Ok(if v >= 0.0 { Bipolar::Pos } else { Bipolar::Neg })
}

/// A state of `n >= 1` neurons.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<Bipolar>", into = "Vec<Bipolar>")]
pub struct BipolarVector(Vec<Bipolar>);

impl BipolarVector {
    pub fn new(values: Vec<Bipolar>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::param("a bipolar vector needs at least one neuron"));
        }
        Ok(BipolarVector(values))
    }

    /// Builds a vector from integers, each of which must be exactly 1 or −1.
    pub fn from_ints(values: &[i32]) -> Result<Self> {
        let values = values
            .iter()
            .enumerate()
            .map(|(i, &v)| match v {
                1 => Ok(Bipolar::Pos),
                -1 => Ok(Bipolar::Neg),
                _ => Err(Error::param(format!(
                    "entry {} is {v}, expected 1 or -1",
                    i + 1
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        BipolarVector::new(values)
    }

    pub fn ones(n: usize) -> Result<Self> {
        BipolarVector::new(vec![Bipolar::Pos; n])
    }

    /// Decodes the low `n` bits of `bits`, most significant first, with a set
    /// bit meaning `+1`. Counting `bits` upward walks the states in
    /// lexicographic order (−1 < +1).
    pub fn from_bits(bits: u64, n: usize) -> Result<Self> {
        if n == 0 || n > 64 {
            return Err(Error::param(format!(
                "bit-encoded width {n} out of range 1..=64"
            )));
        }
        let values = (0..n)
            .map(|i| {
                if (bits >> (n - 1 - i)) & 1 == 1 {
                    Bipolar::Pos
                } else {
                    Bipolar::Neg
                }
            })
            .collect();
        Ok(BipolarVector(values))
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    /// Always false; kept for API symmetry with `len`.
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> Bipolar {
        self.0[i]
    }

    pub fn as_slice(&self) -> &[Bipolar] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Bipolar> + '_ {
        self.0.iter().copied()
    }

    pub fn to_ints(&self) -> Vec<i32> {
        self.0.iter().map(|b| b.value()).collect()
    }

    pub fn negated(&self) -> Self {
        BipolarVector(self.0.iter().map(|&b| -b).collect())
    }

    pub(crate) fn set(&mut self, i: usize, value: Bipolar) {
        self.0[i] = value;
    }

    /// Number of positions where the two states differ.
    pub fn hamming(&self, other: &BipolarVector) -> Result<usize> {
        crate::error::check_dim("hamming distance operand", self.len(), other.len())?;
        Ok(self.0.iter().zip(&other.0).filter(|(a, b)| a != b).count())
    }

    /// Returns `y` with `y[k] = self[perm[k]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        crate::error::check_dim("permutation length", self.len(), perm.len())?;
        Ok(BipolarVector(perm.iter().map(|&p| self.0[p]).collect()))
    }
}

impl TryFrom<Vec<Bipolar>> for BipolarVector {
    type Error = Error;

    fn try_from(v: Vec<Bipolar>) -> Result<Self> {
        BipolarVector::new(v)
    }
}

impl From<BipolarVector> for Vec<Bipolar> {
    fn from(v: BipolarVector) -> Self {
        v.0
    }
}

impl fmt::Display for BipolarVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{}", b.value())?;
        }
        f.write_str(")")
    }
}

/// A nonempty list of memories sharing one dimension.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MemorySet {
    memories: Vec<BipolarVector>,
    n: usize,
    duplicates: Vec<(usize, usize)>,
}

impl MemorySet {
    pub fn memories(&self) -> &[BipolarVector] {
        &self.memories
    }

    pub fn into_memories(self) -> Vec<BipolarVector> {
        self.memories
    }

    /// Neuron count.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Memory count.
    pub fn m(&self) -> usize {
        self.memories.len()
    }

    /// Pairs `(earlier, later)` of 0-based indices holding identical memories.
    pub fn duplicates(&self) -> &[(usize, usize)] {
        &self.duplicates
    }
}

/// Checks that `memories` is nonempty and dimensionally consistent.
/// Duplicates are allowed and reported.
pub fn validate_memory_set(memories: Vec<BipolarVector>) -> Result<MemorySet> {
    let n = common_dimension(&memories)?;
    let mut duplicates = Vec::new();
    for later in 1..memories.len() {
        if let Some(earlier) = (0..later).find(|&e| memories[e] == memories[later]) {
            duplicates.push((earlier, later));
        }
    }
    Ok(MemorySet {
        memories,
        n,
        duplicates,
    })
}

/// The shared neuron count of a nonempty memory list.
pub(crate) fn common_dimension(memories: &[BipolarVector]) -> Result<usize> {
    let first = memories
        .first()
        .ok_or_else(|| Error::param("memory set is empty"))?;
    let n = first.len();
    for (k, mem) in memories.iter().enumerate() {
        if mem.len() != n {
            return Err(Error::dim(format!(
                "memory {} has {} neurons, memory 1 has {n}",
                k + 1,
                mem.len()
            )));
        }
    }
    Ok(n)
}
