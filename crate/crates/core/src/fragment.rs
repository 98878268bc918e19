use serde::Serialize;

use crate::bipolar::{Bipolar, BipolarVector};
use crate::error::{check_dim, Error, Result};

/// A partial neuron state.
///
/// Each neuron is either unassigned or holds a bipolar value. Assigned
/// neurons whose values came from the caller are *clamped*; neurons filled
/// in by spreading activity are assigned but not clamped. Unassigned is a
/// separate state, never a zero activity.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Fragment {
    values: Vec<Option<Bipolar>>,
    clamped: Vec<bool>,
}

impl Fragment {
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::param("a fragment needs at least one neuron"));
        }
        Ok(Fragment {
            values: vec![None; n],
            clamped: vec![false; n],
        })
    }

    /// A fragment over `n` neurons with every given assignment clamped.
    /// Indices are 0-based; repeated or out-of-range indices are rejected.
    pub fn clamped(n: usize, assignments: &[(usize, Bipolar)]) -> Result<Self> {
        let mut f = Fragment::empty(n)?;
        for &(i, v) in assignments {
            if i >= n {
                return Err(Error::param(format!(
                    "neuron {} out of range 1..={n}",
                    i + 1
                )));
            }
            if f.values[i].is_some() {
                return Err(Error::param(format!("neuron {} assigned twice", i + 1)));
            }
            f.values[i] = Some(v);
            f.clamped[i] = true;
        }
        Ok(f)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, i: usize) -> Option<Bipolar> {
        self.values[i]
    }

    pub fn is_assigned(&self, i: usize) -> bool {
        self.values[i].is_some()
    }

    pub fn is_clamped(&self, i: usize) -> bool {
        self.clamped[i]
    }

    pub fn assigned_count(&self) -> usize {
        self.values.iter().filter(|v| v.is_some()).count()
    }

    pub fn assigned_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.is_assigned(i)).collect()
    }

    pub fn clamped_indices(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.clamped[i]).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.values.iter().all(Option::is_some)
    }

    /// Assigns an unclamped value to a currently unassigned neuron.
    pub fn assign(&mut self, i: usize, value: Bipolar) -> Result<()> {
        if i >= self.len() {
            return Err(Error::param(format!("neuron {} out of range", i + 1)));
        }
        if self.values[i].is_some() {
            return Err(Error::param(format!(
                "neuron {} is already assigned",
                i + 1
            )));
        }
        self.values[i] = Some(value);
        Ok(())
    }

    /// `Some(k)` when exactly neurons `0..k` are assigned.
    pub fn prefix_len(&self) -> Option<usize> {
        let k = self.values.iter().take_while(|v| v.is_some()).count();
        self.values[k..].iter().all(Option::is_none).then_some(k)
    }

    /// The full state, if every neuron is assigned.
    pub fn to_vector(&self) -> Option<BipolarVector> {
        let values: Option<Vec<_>> = self.values.iter().copied().collect();
        values.and_then(|v| BipolarVector::new(v).ok())
    }

    /// Relabels so that position `k` of the result holds neuron `perm[k]`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        check_dim("permutation length", self.len(), perm.len())?;
        Ok(Fragment {
            values: perm.iter().map(|&p| self.values[p]).collect(),
            clamped: perm.iter().map(|&p| self.clamped[p]).collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Bipolar::{Neg, Pos};

    #[test]
    fn clamped_construction() {
        let f = Fragment::clamped(4, &[(2, Neg), (0, Pos)]).unwrap();
        assert_eq!(f.assigned_indices(), vec![0, 2]);
        assert_eq!(f.clamped_indices(), vec![0, 2]);
        assert_eq!(f.value(1), None);
        assert_eq!(f.prefix_len(), None);
        assert!(Fragment::clamped(2, &[(2, Pos)]).is_err());
        assert!(Fragment::clamped(2, &[(1, Pos), (1, Neg)]).is_err());
    }

    #[test]
    fn assign_keeps_clamped_subset() {
        let mut f = Fragment::clamped(3, &[(0, Pos)]).unwrap();
        f.assign(1, Neg).unwrap();
        assert!(f.is_assigned(1));
        assert!(!f.is_clamped(1));
        assert_eq!(f.prefix_len(), Some(2));
        assert!(f.assign(1, Pos).is_err());
        assert!(f.to_vector().is_none());
        f.assign(2, Pos).unwrap();
        assert_eq!(f.to_vector().unwrap().to_ints(), vec![1, -1, 1]);
    }

    #[test]
    fn permuting_moves_clamps_with_values() {
        let f = Fragment::clamped(3, &[(2, Neg)]).unwrap();
        let g = f.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(g.value(0), Some(Neg));
        assert!(g.is_clamped(0));
        assert_eq!(g.prefix_len(), Some(1));
    }
}
