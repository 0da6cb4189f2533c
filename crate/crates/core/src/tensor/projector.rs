use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{CMat, Real};
use crate::tensor::SubsystemLayout;
use crate::tolerance::tolerances;

/// Per-label orthogonal projectors; labels without an entry act as identity.
#[derive(Clone, Debug)]
pub struct ProjectorFamily<T: Real> {
    projectors: BTreeMap<String, CMat<T>>,
}

impl<T: Real> Default for ProjectorFamily<T> {
    fn default() -> Self {
        Self {
            projectors: BTreeMap::new(),
        }
    }
}

impl<T: Real> ProjectorFamily<T> {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn new<S: Into<String>>(entries: impl IntoIterator<Item = (S, CMat<T>)>) -> Result<Self> {
        let mut fam = Self::default();
        for (label, p) in entries {
            fam.insert(label, p)?;
        }
        Ok(fam)
    }

    /// Adds a projector after checking `P = P† = P²`.
    pub fn insert<S: Into<String>>(&mut self, label: S, p: CMat<T>) -> Result<()> {
        let tol = T::lit(tolerances().herm);
        if p.nrows() != p.ncols() {
            return Err(Error::InvalidDimension("projector not square".into()));
        }
        if linalg::hermitian_deviation(&p) > tol || linalg::max_abs(&(&p * &p - &p)) > tol {
            return Err(Error::InvalidParameter(
                "matrix is not an orthogonal projector".into(),
            ));
        }
        self.projectors.insert(label.into(), p);
        Ok(())
    }

    pub fn get(&self, label: &str) -> Option<&CMat<T>> {
        self.projectors.get(label)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.projectors.keys().map(String::as_str)
    }

    pub fn rank(&self, label: &str, layout: &SubsystemLayout) -> Result<usize> {
        match self.projectors.get(label) {
            Some(p) => Ok(linalg::trace_re(p).as_f64().round() as usize),
            None => layout.dim_of(label),
        }
    }

    /// The family with projectors only on the labels of `layout`.
    pub fn restricted(&self, layout: &SubsystemLayout) -> Self {
        Self {
            projectors: self
                .projectors
                .iter()
                .filter(|(l, _)| layout.contains(l))
                .map(|(l, p)| (l.clone(), p.clone()))
                .collect(),
        }
    }

    /// `P_{A1} ⊗ … ⊗ P_{An}` in layout order.
    pub fn operator(&self, layout: &SubsystemLayout) -> Result<CMat<T>> {
        for l in self.projectors.keys() {
            let d = layout.dim_of(l)?;
            if self.projectors[l].nrows() != d {
                return Err(Error::InvalidDimension(format!(
                    "projector on `{l}` has wrong size"
                )));
            }
        }
        let mut q = CMat::<T>::identity(1, 1);
        for (label, dim) in layout.factors() {
            let p = match self.projectors.get(label) {
                Some(p) => p.clone(),
                None => linalg::identity(*dim),
            };
            q = linalg::kron(&q, &p);
        }
        Ok(q)
    }
}
