use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{cr, CMat, CVec, Real};
use crate::tensor::SubsystemLayout;
use crate::tolerance::tolerances;

/// Positive operator with trace in `(0, 1]` on a labeled tensor space.
///
/// Subnormalized elements of the positive cone are first-class values; most
/// measures are homogeneous of degree one on them.
#[derive(Clone, Debug)]
pub struct MultipartiteState<T: Real> {
    matrix: CMat<T>,
    layout: SubsystemLayout,
    trace: T,
}

impl<T: Real> MultipartiteState<T> {
    /// Validates hermiticity, positivity and trace before accepting `matrix`.
    pub fn new(matrix: CMat<T>, layout: SubsystemLayout) -> Result<Self> {
        let tol = tolerances();
        check_shape(&matrix, &layout)?;
        let dev = linalg::hermitian_deviation(&matrix).as_f64();
        if dev > tol.herm {
            return Err(Error::NotHermitian(dev));
        }
        let matrix = linalg::hermitize(&matrix);
        let min = linalg::eigvalsh(&matrix)
            .last()
            .copied()
            .unwrap_or_else(T::zero)
            .as_f64();
        if min < -tol.psd {
            return Err(Error::NotPsd(min));
        }
        let trace = linalg::trace_re(&matrix);
        let tr = trace.as_f64();
        if !(tr > 0.0 && tr <= 1.0 + tol.trace) {
            return Err(Error::InvalidTrace(tr));
        }
        Ok(Self {
            matrix,
            layout,
            trace,
        })
    }

    /// Skips validation; the matrix is hermitized. Callers guarantee positivity.
    pub(crate) fn from_parts(matrix: CMat<T>, layout: SubsystemLayout) -> Self {
        debug_assert_eq!(matrix.nrows(), layout.total_dim());
        let matrix = linalg::hermitize(&matrix);
        let trace = linalg::trace_re(&matrix);
        Self {
            matrix,
            layout,
            trace,
        }
    }

    /// Normalized pure state `|ψ⟩⟨ψ|`.
    pub fn pure(psi: &CVec<T>, layout: SubsystemLayout) -> Result<Self> {
        if psi.len() != layout.total_dim() {
            return Err(Error::InvalidDimension(format!(
                "vector length {} vs layout dim {}",
                psi.len(),
                layout.total_dim()
            )));
        }
        let n = psi.norm();
        if n <= T::zero() {
            return Err(Error::InvalidParameter("zero vector".into()));
        }
        let v = psi / cr(n);
        Ok(Self::from_parts(linalg::projector_from_vector(&v), layout))
    }

    pub fn from_diagonal(diag: &[T], layout: SubsystemLayout) -> Result<Self> {
        if diag.len() != layout.total_dim() {
            return Err(Error::InvalidDimension("diagonal length".into()));
        }
        Self::new(linalg::diag(diag), layout)
    }

    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let d = layout.total_dim();
        let m = linalg::identity::<T>(d) * cr(T::one() / T::from_usize(d).unwrap());
        Self::from_parts(m, layout)
    }

    /// Computational basis state with per-factor indices `digits`.
    pub fn basis(layout: SubsystemLayout, digits: &[usize]) -> Result<Self> {
        let dims = layout.dims();
        if digits.len() != dims.len() || digits.iter().zip(&dims).any(|(d, n)| d >= n) {
            return Err(Error::InvalidParameter("basis digits".into()));
        }
        let idx = digits.iter().zip(&dims).fold(0, |acc, (d, n)| acc * n + d);
        let mut v = CVec::zeros(layout.total_dim());
        v[idx] = cr(T::one());
        Self::pure(&v, layout)
    }

    pub fn matrix(&self) -> &CMat<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMat<T> {
        self.matrix
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn trace(&self) -> T {
        self.trace
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.layout.labels()
    }

    pub fn is_normalized(&self) -> bool {
        (self.trace.as_f64() - 1.0).abs() <= tolerances().trace
    }

    pub fn eigenvalues(&self) -> Vec<T> {
        linalg::eigvalsh(&self.matrix)
    }

    pub fn purity(&self) -> T {
        let tr = (&self.matrix * &self.matrix).trace().re;
        tr / (self.trace * self.trace)
    }

    pub fn rank(&self, threshold: T) -> usize {
        self.eigenvalues()
            .into_iter()
            .filter(|&x| x > threshold)
            .count()
    }

    pub fn normalized(&self) -> Self {
        Self::from_parts(
            &self.matrix * cr(T::one() / self.trace),
            self.layout.clone(),
        )
    }

    /// Cone element `λ·ω` for `λ ∈ (0, 1/Tr ω]`.
    pub fn scaled(&self, lambda: T) -> Result<Self> {
        let t = (lambda * self.trace).as_f64();
        if !(lambda > T::zero() && t <= 1.0 + tolerances().trace) {
            return Err(Error::InvalidParameter(format!(
                "scale factor {}",
                lambda.as_f64()
            )));
        }
        Ok(Self::from_parts(
            &self.matrix * cr(lambda),
            self.layout.clone(),
        ))
    }

    /// `λ·self + (1−λ)·other`.
    pub fn mix(&self, other: &Self, lambda: T) -> Result<Self> {
        same_layout(&self.layout, &other.layout)?;
        if lambda < T::zero() || lambda > T::one() {
            return Err(Error::OutOfRange(format!(
                "mixing weight {}",
                lambda.as_f64()
            )));
        }
        let m = &self.matrix * cr(lambda) + &other.matrix * cr(T::one() - lambda);
        Ok(Self::from_parts(m, self.layout.clone()))
    }

    /// Marginal on `keep` (layout order preserved).
    pub fn marginal<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        crate::tensor::partial_trace(self, keep)
    }

    /// Same operator with factors reordered to `order`, which must list every label.
    pub fn reordered<S: AsRef<str>>(&self, order: &[S]) -> Result<Self> {
        if order.len() != self.layout.len() {
            return Err(Error::LayoutMismatch(
                "reorder must list every label".into(),
            ));
        }
        let idx = self.layout.indices_of(order)?;
        let m = linalg::permute_subsystems(&self.matrix, &self.layout.dims(), &idx);
        Ok(Self {
            matrix: m,
            layout: self.layout.reorder(&idx),
            trace: self.trace,
        })
    }

    /// Renames one label.
    pub fn relabel(&self, from: &str, to: &str) -> Result<Self> {
        let pos = self
            .layout
            .position(from)
            .ok_or_else(|| Error::UnknownLabel(from.into()))?;
        let factors: Vec<(String, usize)> = self
            .layout
            .factors()
            .iter()
            .enumerate()
            .map(|(i, (l, d))| (if i == pos { to.to_string() } else { l.clone() }, *d))
            .collect();
        Ok(Self {
            matrix: self.matrix.clone(),
            layout: SubsystemLayout::new(factors)?,
            trace: self.trace,
        })
    }

    /// Operator with a new matrix on the same layout (validated).
    pub fn with_matrix(&self, matrix: CMat<T>) -> Result<Self> {
        Self::new(matrix, self.layout.clone())
    }
}

pub(crate) fn check_shape<T: Real>(m: &CMat<T>, layout: &SubsystemLayout) -> Result<()> {
    let d = layout.total_dim();
    if m.nrows() != d || m.ncols() != d {
        return Err(Error::InvalidDimension(format!(
            "matrix {}x{} vs layout dim {d}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(())
}

pub(crate) fn same_layout(a: &SubsystemLayout, b: &SubsystemLayout) -> Result<()> {
    if a != b {
        return Err(Error::LayoutMismatch(format!(
            "{:?} vs {:?}",
            a.labels(),
            b.labels()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    #[test]
    fn rejects_non_hermitian_and_negative() {
        let l = SubsystemLayout::qubits(&["A"]).unwrap();
        let mut m = CMat::<f64>::identity(2, 2) * cr(0.5);
        m[(0, 1)] = cx(0.1, 0.0);
        assert!(matches!(
            MultipartiteState::new(m, l.clone()),
            Err(Error::NotHermitian(_))
        ));
        let neg = linalg::diag(&[1.2, -0.2]);
        assert!(matches!(
            MultipartiteState::new(neg, l.clone()),
            Err(Error::NotPsd(_))
        ));
        let big = linalg::diag(&[0.9, 0.9]);
        assert!(matches!(
            MultipartiteState::new(big, l),
            Err(Error::InvalidTrace(_))
        ));
    }

    #[test]
    fn cone_elements_allowed() {
        let l = SubsystemLayout::qubits(&["A"]).unwrap();
        let s = MultipartiteState::<f64>::maximally_mixed(l)
            .scaled(0.5)
            .unwrap();
        assert!((s.trace() - 0.5).abs() < 1e-15);
        assert!(!s.is_normalized());
    }

    #[test]
    fn reorder_roundtrip() {
        let l = SubsystemLayout::new([("A", 2), ("B", 3)]).unwrap();
        let s = MultipartiteState::<f64>::basis(l, &[1, 2]).unwrap();
        let r = s.reordered(&["B", "A"]).unwrap();
        assert_eq!(r.labels(), vec!["B", "A"]);
        assert!((r.matrix()[(5, 5)].re - 1.0).abs() < 1e-15);
        let back = r.reordered(&["A", "B"]).unwrap();
        assert!(linalg::max_abs(&(back.matrix() - s.matrix())) < 1e-15);
    }
}
