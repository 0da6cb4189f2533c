use serde::{Deserialize, Serialize};

use super::{check_disjoint, mi2, to_set, union, Entropies};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensor::MultipartiteState;

/// Linear combination `Σ_k α_k H(ω_{X_k})` of marginal entropies.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropicCombo<T: Real> {
    terms: Vec<(T, Vec<String>)>,
}

impl<T: Real> EntropicCombo<T> {
    pub fn new<S: AsRef<str>>(terms: impl IntoIterator<Item = (T, Vec<S>)>) -> Result<Self> {
        let mut out = Vec::new();
        for (alpha, set) in terms {
            if !alpha.is_finite_value() {
                return Err(Error::InvalidParameter("non-finite coefficient".into()));
            }
            if set.is_empty() {
                return Err(Error::InvalidParameter(
                    "empty subsystem set in combo".into(),
                ));
            }
            out.push((alpha, to_set(&set)));
        }
        Ok(Self { terms: out })
    }

    pub fn terms(&self) -> &[(T, Vec<String>)] {
        &self.terms
    }

    pub fn value(&self, s: &MultipartiteState<T>) -> Result<T> {
        let e = Entropies::new(s);
        self.terms
            .iter()
            .try_fold(T::zero(), |acc, (a, x)| Ok(acc + *a * e.h(x)?))
    }

    /// `(Σ|α_k|, Σ_{α_k>0} α_k, Σ_{α_k<0} |α_k|)`.
    pub fn coefficient_sums(&self) -> (T, T, T) {
        let mut all = T::zero();
        let mut pos = T::zero();
        let mut neg = T::zero();
        for (a, _) in &self.terms {
            all += a.abs();
            if *a > T::zero() {
                pos += *a;
            } else {
                neg -= *a;
            }
        }
        (all, pos, neg)
    }

    pub fn coefficient_total(&self) -> T {
        self.terms.iter().fold(T::zero(), |acc, (a, _)| acc + *a)
    }

    /// `Σ α_k H(X_kB) − (Σ α_k) H(B)`.
    pub fn conditioned<S: AsRef<str>>(&self, b: &[S]) -> Result<Self> {
        let b = to_set(b);
        let mut terms: Vec<(T, Vec<String>)> = self
            .terms
            .iter()
            .map(|(a, x)| (*a, union(&[x, &b])))
            .collect();
        if !b.is_empty() {
            terms.push((-self.coefficient_total(), b));
        }
        Ok(Self { terms })
    }

    /// Combo with `drop` removed from every set; terms that become empty vanish.
    pub fn reduced(&self, drop: &str) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(a, x)| {
                (
                    *a,
                    x.iter().filter(|l| *l != drop).cloned().collect::<Vec<_>>(),
                )
            })
            .filter(|(_, x)| !x.is_empty())
            .collect();
        Self { terms }
    }

    fn check_labels(&self, s: &MultipartiteState<T>) -> Result<()> {
        for (_, x) in &self.terms {
            check_disjoint(s, &[x])?;
        }
        Ok(())
    }
}

/// `[F_{·|B} − F](ω) = −Σ α_k I(X_k:B)`.
pub fn conditional_combo_difference<T: Real, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    combo: &EntropicCombo<T>,
    b: &[S],
) -> Result<T> {
    let b = to_set(b);
    combo.check_labels(s)?;
    for (_, x) in combo.terms() {
        check_disjoint(s, &[x, &b])?;
    }
    combo
        .terms()
        .iter()
        .try_fold(T::zero(), |acc, (a, x)| Ok(acc - *a * mi2(s, x, &b)?))
}

/// `min{H(B)(|Σα_k| + Σ|α_k|), 2 Σ|α_k| H(X_k)}`.
pub fn conditional_combo_bound<T: Real, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    combo: &EntropicCombo<T>,
    b: &[S],
) -> Result<T> {
    let e = Entropies::new(s);
    let (abs_sum, _, _) = combo.coefficient_sums();
    let first = e.h(b)? * (combo.coefficient_total().abs() + abs_sum);
    let second = combo.terms().iter().try_fold(T::zero(), |acc, (a, x)| {
        Ok::<T, Error>(acc + T::lit(2.0) * a.abs() * e.h(x)?)
    })?;
    Ok(first.min(second))
}

/// `[F_{∖A} − F](ω) = −Σ_{k: A∈X_k} α_k H_e(A | X_k∖A)`.
pub fn reduced_combo_difference<T: Real>(
    s: &MultipartiteState<T>,
    combo: &EntropicCombo<T>,
    drop: &str,
) -> Result<T> {
    if !s.layout().contains(drop) {
        return Err(Error::UnknownLabel(drop.into()));
    }
    combo.check_labels(s)?;
    let a = vec![drop.to_string()];
    let ha = Entropies::new(s).h(&a)?;
    let mut v = T::zero();
    for (alpha, x) in combo.terms() {
        if !x.iter().any(|l| l == drop) {
            continue;
        }
        let rest: Vec<String> = x.iter().filter(|l| *l != drop).cloned().collect();
        let he = ha - mi2(s, &a, &rest)?;
        v -= *alpha * he;
    }
    Ok(v)
}

/// `H(ω_A) Σ_{k: A∈X_k} |α_k|`.
pub fn reduced_combo_bound<T: Real>(
    s: &MultipartiteState<T>,
    combo: &EntropicCombo<T>,
    drop: &str,
) -> Result<T> {
    let ha = Entropies::new(s).h(&[drop])?;
    let c = combo
        .terms()
        .iter()
        .filter(|(_, x)| x.iter().any(|l| l == drop))
        .fold(T::zero(), |acc, (a, _)| acc + a.abs());
    Ok(ha * c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{states, tensor_product, SubsystemLayout};

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn bell_conditional_difference() {
        let bell = states::bell::<f64>("A", "B").unwrap();
        let combo = EntropicCombo::new([(1.0, vec!["A"])]).unwrap();
        let v = conditional_combo_difference(&bell, &combo, &["B"]).unwrap();
        assert!((v + 2.0 * LN2).abs() < 1e-10);
        assert!(conditional_combo_difference(&bell, &combo, &["A"]).is_err());
    }

    #[test]
    fn reduced_difference_product_case() {
        let a = MultipartiteState::<f64>::from_diagonal(
            &[0.3, 0.7],
            SubsystemLayout::qubits(&["A"]).unwrap(),
        )
        .unwrap();
        let b = MultipartiteState::<f64>::from_diagonal(
            &[0.9, 0.1],
            SubsystemLayout::qubits(&["B"]).unwrap(),
        )
        .unwrap();
        let ab = tensor_product(&a, &b).unwrap();
        let combo = EntropicCombo::new([(1.0, vec!["A", "B"])]).unwrap();
        let ha = crate::measures::von_neumann_entropy(&a).unwrap();
        let v = reduced_combo_difference(&ab, &combo, "A").unwrap();
        assert!((v + ha).abs() < 1e-10);
        let untouched = EntropicCombo::new([(2.0, vec!["B"])]).unwrap();
        assert_eq!(reduced_combo_difference(&ab, &untouched, "A").unwrap(), 0.0);
    }

    #[test]
    fn coefficient_sums_split_by_sign() {
        let c = EntropicCombo::new([(1.5, vec!["A"]), (-0.5, vec!["B"]), (2.0, vec!["A", "B"])])
            .unwrap();
        assert_eq!(c.coefficient_sums(), (4.0, 3.5, 0.5));
        assert!(EntropicCombo::<f64>::new([(1.0, Vec::<&str>::new())]).is_err());
    }
}
