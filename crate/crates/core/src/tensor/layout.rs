use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered tensor-factor layout `(label, dim)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SubsystemLayout {
    factors: Vec<(String, usize)>,
}

impl SubsystemLayout {
    pub fn new<S: Into<String>>(factors: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let factors: Vec<(String, usize)> =
            factors.into_iter().map(|(l, d)| (l.into(), d)).collect();
        for (i, (label, dim)) in factors.iter().enumerate() {
            if *dim == 0 {
                return Err(Error::InvalidDimension(format!(
                    "label `{label}` has dim 0"
                )));
            }
            if label.is_empty() {
                return Err(Error::InvalidParameter("empty label".into()));
            }
            if factors[..i].iter().any(|(l, _)| l == label) {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { factors })
    }

    /// Layout of `labels.len()` factors of equal dimension.
    pub fn uniform(labels: &[&str], dim: usize) -> Result<Self> {
        Self::new(labels.iter().map(|l| (*l, dim)))
    }

    pub fn qubits(labels: &[&str]) -> Result<Self> {
        Self::uniform(labels, 2)
    }

    pub fn empty() -> Self {
        Self {
            factors: Vec::new(),
        }
    }

    pub fn factors(&self) -> &[(String, usize)] {
        &self.factors
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.factors.iter().map(|(l, _)| l.as_str()).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.factors.iter().map(|(_, d)| *d).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.factors.iter().map(|(_, d)| *d).product()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.position(label).is_some()
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.factors.iter().position(|(l, _)| l == label)
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        self.position(label)
            .map(|i| self.factors[i].1)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    /// Product of the dims of `labels`.
    pub fn dim_of_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        labels
            .iter()
            .try_fold(1usize, |acc, l| Ok(acc * self.dim_of(l.as_ref())?))
    }

    /// Positions of `labels`, in the order given.
    pub fn indices_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::with_capacity(labels.len());
        for l in labels {
            let l = l.as_ref();
            let i = self
                .position(l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
            if out.contains(&i) {
                return Err(Error::DuplicateLabel(l.to_string()));
            }
            out.push(i);
        }
        Ok(out)
    }

    /// Sub-layout on `indices`, keeping the original order.
    pub fn select_sorted(&self, indices: &[usize]) -> Self {
        let mut idx = indices.to_vec();
        idx.sort_unstable();
        idx.dedup();
        Self {
            factors: idx.into_iter().map(|i| self.factors[i].clone()).collect(),
        }
    }

    /// Layout with factors reordered: new factor `j` is old factor `order[j]`.
    pub fn reorder(&self, order: &[usize]) -> Self {
        Self {
            factors: order.iter().map(|&i| self.factors[i].clone()).collect(),
        }
    }

    pub fn concat(&self, other: &Self) -> Result<Self> {
        for (l, _) in &other.factors {
            if self.contains(l) {
                return Err(Error::LabelCollision(l.clone()));
            }
        }
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        Ok(Self { factors })
    }

    pub fn with_factor(&self, label: &str, dim: usize) -> Result<Self> {
        self.concat(&Self::new([(label, dim)])?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_zero_dims() {
        assert!(matches!(
            SubsystemLayout::new([("A", 2), ("A", 3)]),
            Err(Error::DuplicateLabel(_))
        ));
        assert!(SubsystemLayout::new([("A", 0)]).is_err());
    }

    #[test]
    fn totals_and_lookup() {
        let l = SubsystemLayout::new([("A", 2), ("B", 3), ("C", 4)]).unwrap();
        assert_eq!(l.total_dim(), 24);
        assert_eq!(l.dim_of_set(&["C", "A"]).unwrap(), 8);
        assert_eq!(l.indices_of(&["C", "A"]).unwrap(), vec![2, 0]);
        assert!(l.concat(&SubsystemLayout::qubits(&["B"]).unwrap()).is_err());
    }
}
