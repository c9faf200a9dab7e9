//! 0/1 injection matrices defined by an ordered index set.

use crate::error::{Error, Result};

/// Which side of `H` to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    /// `H v`: gather `v[s_i]` into position `i`.
    Forward,
    /// `Hᵀ x`: scatter `x[i]` into position `s_i`, zeros elsewhere.
    Transpose,
}

/// The `m × n` mapping matrix `H_S` of an ordered set `S = ⟨s_1, …, s_m⟩`.
///
/// Row `i` has a single one at column `s_i`. Indices are stored 0-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingMatrix {
    target_size: usize,
    map: Vec<usize>,
}

impl MappingMatrix {
    /// Builds `H_S` from 0-based targets. Every target must be `< target_size`
    /// and targets must be pairwise distinct.
    pub fn new(map: Vec<usize>, target_size: usize) -> Result<Self> {
        let mut seen = vec![false; target_size];
        for (i, &s) in map.iter().enumerate() {
            if s >= target_size {
                return Err(Error::InvalidMapping(format!(
                    "entry {i} maps to {s}, outside 0..{target_size}"
                )));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::InvalidMapping(format!("target {s} used twice")));
            }
        }
        Ok(Self { target_size, map })
    }

    /// Builds `H_S` from 1-based targets, as written in documents and files.
    pub fn from_one_based(map: &[usize], target_size: usize) -> Result<Self> {
        let zero_based = map
            .iter()
            .map(|&s| {
                s.checked_sub(1)
                    .ok_or_else(|| Error::InvalidMapping("1-based index 0".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(zero_based, target_size)
    }

    pub(crate) fn new_unchecked(map: Vec<usize>, target_size: usize) -> Self {
        debug_assert!(map.iter().all(|&s| s < target_size));
        Self { target_size, map }
    }

    /// Number of rows `m`.
    pub fn source_size(&self) -> usize {
        self.map.len()
    }

    /// Number of columns `n`.
    pub fn target_size(&self) -> usize {
        self.target_size
    }

    /// The ordered set, 0-based.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn is_permutation(&self) -> bool {
        self.map.len() == self.target_size
    }

    /// `s_j⁻¹`: the row whose one sits in column `j`, if any.
    pub fn inverse_of(&self, j: usize) -> Option<usize> {
        self.map.iter().position(|&s| s == j)
    }

    pub fn apply(&self, v: &[f64], direction: Direction) -> Result<Vec<f64>> {
        match direction {
            Direction::Forward => self.gather(v),
            Direction::Transpose => self.scatter(v),
        }
    }

    /// `H v`.
    pub fn gather(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.target_size {
            return Err(Error::DimensionMismatch {
                expected: self.target_size,
                actual: v.len(),
            });
        }
        Ok(self.map.iter().map(|&s| v[s]).collect())
    }

    /// `Hᵀ x`.
    pub fn scatter(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.map.len() {
            return Err(Error::DimensionMismatch {
                expected: self.map.len(),
                actual: x.len(),
            });
        }
        let mut out = vec![0.0; self.target_size];
        for (&s, &value) in self.map.iter().zip(x) {
            out[s] = value;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn scatter_and_gather_by_definition() {
        let h = MappingMatrix::from_one_based(&[3, 1], 3).unwrap();
        assert_eq!(h.scatter(&[1.0, 2.0]).unwrap(), vec![2.0, 0.0, 1.0]);
        assert_eq!(h.gather(&[7.0, 8.0, 9.0]).unwrap(), vec![9.0, 7.0]);
        assert_eq!(
            h.apply(&[7.0, 8.0, 9.0], Direction::Forward).unwrap(),
            vec![9.0, 7.0]
        );
        assert_eq!(h.inverse_of(2), Some(0));
        assert_eq!(h.inverse_of(1), None);
    }

    #[test]
    fn rejects_bad_sets_and_lengths() {
        assert!(matches!(
            MappingMatrix::new(vec![0, 0], 2),
            Err(Error::InvalidMapping(_))
        ));
        assert!(matches!(
            MappingMatrix::new(vec![5], 2),
            Err(Error::InvalidMapping(_))
        ));
        let h = MappingMatrix::new(vec![1], 2).unwrap();
        assert!(matches!(
            h.gather(&[1.0]),
            Err(Error::DimensionMismatch { expected: 2, actual: 1 })
        ));
        assert!(matches!(
            h.scatter(&[1.0, 2.0]),
            Err(Error::DimensionMismatch { expected: 1, actual: 2 })
        ));
    }

    proptest! {
        #[test]
        fn injection_identity(
            (n, picks, v) in (1usize..40).prop_flat_map(|n| (
                Just(n),
                Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                proptest::collection::vec(-1e3f64..1e3, n),
            ))
        ) {
            let m = picks.len().div_ceil(2);
            let h = MappingMatrix::new(picks[..m].to_vec(), n).unwrap();
            let x = &v[..m];
            // H Hᵀ x = x
            prop_assert_eq!(h.gather(&h.scatter(x).unwrap()).unwrap(), x.to_vec());
        }
    }
}
