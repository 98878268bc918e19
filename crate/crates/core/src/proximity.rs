use serde::Serialize;

use crate::error::{check_dim, Error, Result};

/// Tolerance for the symmetry and zero-diagonal checks.
pub const PROXIMITY_TOLERANCE: f64 = 1e-9;

/// Pairwise neuron distances.
///
/// Symmetric with a zero diagonal and strictly positive off-diagonal
/// entries. The triangle inequality is not required: neural pathways are
/// not straight lines.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProximityMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl ProximityMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::param("proximity matrix is empty"));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::dim(format!(
                    "proximity matrix is not square: row {} has {} entries, expected {n}",
                    i + 1,
                    row.len()
                )));
            }
        }
        for i in 0..n {
            for j in 0..n {
                let d = rows[i][j];
                if !d.is_finite() {
                    return Err(Error::param(format!(
                        "proximity ({}, {}) is not finite",
                        i + 1,
                        j + 1
                    )));
                }
                if i == j {
                    if d.abs() > PROXIMITY_TOLERANCE {
                        return Err(Error::param(format!(
                            "proximity diagonal ({0}, {0}) is {d}, expected 0",
                            i + 1
                        )));
                    }
                } else {
                    if d <= 0.0 {
                        return Err(Error::param(format!(
                            "proximity ({}, {}) is {d}, distances must be positive",
                            i + 1,
                            j + 1
                        )));
                    }
                    if (d - rows[j][i]).abs() > PROXIMITY_TOLERANCE {
                        return Err(Error::param(format!(
                            "proximity matrix is asymmetric at ({}, {}): {d} vs {}",
                            i + 1,
                            j + 1,
                            rows[j][i]
                        )));
                    }
                }
            }
        }
        let entries = rows
            .into_iter()
            .enumerate()
            .flat_map(|(i, row)| {
                row.into_iter()
                    .enumerate()
                    .map(move |(j, d)| if i == j { 0.0 } else { d })
            })
            .collect();
        Ok(ProximityMatrix { n, entries })
    }

    /// Every pair at distance 1.
    pub fn uniform(n: usize) -> Result<Self> {
        ProximityMatrix::new(
            (0..n)
                .map(|i| (0..n).map(|j| if i == j { 0.0 } else { 1.0 }).collect())
                .collect(),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries.chunks(self.n).map(<[f64]>::to_vec).collect()
    }

    /// `Q[a][b] = P[perm[a]][perm[b]]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_dim("permutation length", self.n, perm.len())?;
        let mut entries = Vec::with_capacity(self.n * self.n);
        for &pa in perm {
            for &pb in perm {
                entries.push(self.distance(pa, pb));
            }
        }
        Ok(ProximityMatrix { n: self.n, entries })
    }
}
