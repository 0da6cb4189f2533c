//! Entropies, relative entropy, mutual informations and every derived
//! correlation measure. All values are in nats.
//!
//! Entropy uses its extension to the positive cone, `H(ρ) = Tr η(ρ) − η(Tr ρ)`,
//! so every linear combination of marginal entropies is homogeneous of degree
//! one in the state.

mod bounds;
mod cmi;
mod combo;
mod multipartite;
mod record;

use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

pub use bounds::{upper_bound, UpperBound};
pub use cmi::{
    cmi, cmi_all_formulas, cmi_upper_bounds, pure_tripartite_identity_check, CmiFormula,
};
pub use combo::{
    conditional_combo_bound, conditional_combo_difference, reduced_combo_bound,
    reduced_combo_difference, EntropicCombo,
};
pub use multipartite::{
    cmi_conditioning_difference, cmi_multipartite, cmi_multipartite_chain, information_gap,
    information_gap_chain, interaction_information, interaction_information_conditional,
    interaction_information_remark_form, secrecy_conditioning_difference, secrecy_monotone,
    secrecy_monotone_chain,
};
pub use record::MeasureRecord;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{eta, CMat, Real};
use crate::tensor::{same_layout, MultipartiteState};
use crate::tolerance::tolerances;

/// Which defining expression produced a value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormulaTag {
    Entropy,
    RelativeEntropy,
    MutualInformation,
    MutualInformationEntropic,
    ConditionalEntropy,
    CmiDirect,
    CmiViaAb,
    CmiViaCb,
    CmiFourMi,
    CmiPurified,
    MultiCmiDirect,
    MultiCmiChain,
    SecrecyDirect,
    SecrecyChain,
    InteractionAlternating,
    InteractionConditional,
    InfoGapDirect,
    InfoGapChain,
}

/// A measure value; `+∞` only arises from relative-entropy support violations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasureValue<T: Real> {
    pub value: T,
    pub formula: FormulaTag,
}

impl<T: Real> MeasureValue<T> {
    pub fn new(value: T, formula: FormulaTag) -> Self {
        Self { value, formula }
    }

    pub fn is_infinite(&self) -> bool {
        !self.value.is_finite_value()
    }
}

/// Clamps tiny negative eigenvalues and rejects genuinely negative ones.
fn clean_spectrum<T: Real>(values: Vec<T>) -> Result<Vec<T>> {
    let tol = tolerances();
    let floor = T::lit(tol.eig_floor);
    if let Some(&min) = values.last() {
        if min.as_f64() < -tol.psd {
            return Err(Error::NotPsd(min.as_f64()));
        }
    }
    Ok(values
        .into_iter()
        .map(|x| if x > floor { x } else { T::zero() })
        .collect())
}

/// Extended entropy of a positive matrix: `Tr η(ρ) − η(Tr ρ)`.
pub fn entropy_of_matrix<T: Real>(m: &CMat<T>) -> Result<T> {
    let spec = clean_spectrum(linalg::eigvalsh(m))?;
    let tr = linalg::trace_re(m);
    let s = spec.iter().fold(T::zero(), |acc, &x| acc + eta(x));
    let h = s - eta(tr);
    Ok(if h < T::zero() { T::zero() } else { h })
}

pub fn von_neumann_entropy<T: Real>(s: &MultipartiteState<T>) -> Result<T> {
    entropy_of_matrix(s.matrix())
}

/// `H(ρ‖σ) = Tr ρ ln ρ − Tr ρ ln σ + Tr σ − Tr ρ`, or `+∞` on support violation.
pub fn relative_entropy_matrices<T: Real>(r: &CMat<T>, s: &CMat<T>) -> Result<T> {
    let tol = tolerances();
    let floor = T::lit(tol.eig_floor);
    let es = linalg::eigh(s);
    let rot = es.vectors.adjoint() * r * &es.vectors;
    let mut leak = T::zero();
    let mut cross = T::zero();
    for (i, &sv) in es.values.iter().enumerate() {
        let rii = rot[(i, i)].re;
        if sv > floor {
            cross += rii * sv.ln();
        } else {
            leak += rii;
        }
    }
    if leak.as_f64() > tol.supp {
        return Ok(T::infinity());
    }
    let rspec = clean_spectrum(linalg::eigvalsh(r))?;
    let neg_ent = rspec.iter().fold(T::zero(), |acc, &x| acc - eta(x));
    Ok(neg_ent - cross + linalg::trace_re(s) - linalg::trace_re(r))
}

pub fn relative_entropy<T: Real>(
    r: &MultipartiteState<T>,
    s: &MultipartiteState<T>,
) -> Result<MeasureValue<T>> {
    same_layout(r.layout(), s.layout())?;
    Ok(MeasureValue::new(
        relative_entropy_matrices(r.matrix(), s.matrix())?,
        FormulaTag::RelativeEntropy,
    ))
}

/// Owned label-set partition.
pub(crate) type Parts = Vec<Vec<String>>;

pub(crate) fn to_set<S: AsRef<str>>(labels: &[S]) -> Vec<String> {
    labels.iter().map(|l| l.as_ref().to_string()).collect()
}

pub(crate) fn to_parts<P: AsRef<[S]>, S: AsRef<str>>(parts: &[P]) -> Parts {
    parts.iter().map(|p| to_set(p.as_ref())).collect()
}

pub(crate) fn union(sets: &[&[String]]) -> Vec<String> {
    sets.iter().flat_map(|s| s.iter().cloned()).collect()
}

/// Checks that every set is known to the layout and that sets are pairwise disjoint.
pub(crate) fn check_disjoint<T: Real>(s: &MultipartiteState<T>, sets: &[&[String]]) -> Result<()> {
    let mut seen: Vec<&str> = Vec::new();
    for set in sets {
        for l in set.iter() {
            if !s.layout().contains(l) {
                return Err(Error::UnknownLabel(l.clone()));
            }
            if seen.contains(&l.as_str()) {
                return Err(Error::OverlappingLabels(l.clone()));
            }
            seen.push(l);
        }
    }
    Ok(())
}

/// Matrix of the marginal on `labels`, factors in the order given.
pub(crate) fn marginal_in_order<T: Real>(
    s: &MultipartiteState<T>,
    labels: &[String],
) -> Result<CMat<T>> {
    let idx = s.layout().indices_of(labels)?;
    let dims = s.layout().dims();
    let m = linalg::partial_trace(s.matrix(), &dims, &idx);
    let mut sorted = idx.clone();
    sorted.sort_unstable();
    if sorted == idx {
        return Ok(m);
    }
    let sub_dims: Vec<usize> = sorted.iter().map(|&i| dims[i]).collect();
    let order: Vec<usize> = idx
        .iter()
        .map(|i| sorted.iter().position(|j| j == i).unwrap())
        .collect();
    Ok(linalg::permute_subsystems(&m, &sub_dims, &order))
}

/// Memoized marginal entropies of one state, keyed by label subset.
pub struct Entropies<'a, T: Real> {
    state: &'a MultipartiteState<T>,
    cache: RefCell<HashMap<u64, T>>,
}

impl<'a, T: Real> Entropies<'a, T> {
    pub fn new(state: &'a MultipartiteState<T>) -> Self {
        Self {
            state,
            cache: RefCell::new(HashMap::new()),
        }
    }

    fn mask<S: AsRef<str>>(&self, labels: &[S]) -> Result<u64> {
        let mut mask = 0u64;
        for l in labels {
            let l = l.as_ref();
            let i = self
                .state
                .layout()
                .position(l)
                .ok_or_else(|| Error::UnknownLabel(l.into()))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    /// Entropy of the marginal on `labels`; the empty set gives 0.
    pub fn h<S: AsRef<str>>(&self, labels: &[S]) -> Result<T> {
        let mask = self.mask(labels)?;
        if mask == 0 {
            return Ok(T::zero());
        }
        if let Some(&v) = self.cache.borrow().get(&mask) {
            return Ok(v);
        }
        let n = self.state.layout().len();
        let keep: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let v = if keep.len() == n {
            entropy_of_matrix(self.state.matrix())?
        } else {
            entropy_of_matrix(&linalg::partial_trace(
                self.state.matrix(),
                &self.state.layout().dims(),
                &keep,
            ))?
        };
        self.cache.borrow_mut().insert(mask, v);
        Ok(v)
    }

    /// Entropy of the union of several sets.
    pub fn h_union(&self, sets: &[&[String]]) -> Result<T> {
        self.h(&union(sets))
    }
}

/// Relative-entropy mutual information `H(ω ‖ ω_1⊗…⊗ω_n / [Tr ω]^{n−1})`.
pub fn mutual_information<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    partition: &[P],
) -> Result<MeasureValue<T>> {
    let parts = to_parts(partition);
    mi_parts(s, &parts).map(|v| MeasureValue::new(v, FormulaTag::MutualInformation))
}

pub(crate) fn mi_parts<T: Real>(s: &MultipartiteState<T>, parts: &[Vec<String>]) -> Result<T> {
    if parts.is_empty() {
        return Err(Error::EmptyParts);
    }
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::InvalidParameter("empty cell in partition".into()));
    }
    let refs: Vec<&[String]> = parts.iter().map(|p| p.as_slice()).collect();
    check_disjoint(s, &refs)?;
    if parts.len() == 1 {
        return Ok(T::zero());
    }
    let joint = marginal_in_order(s, &union(&refs))?;
    let tr = s.trace();
    let factors = parts
        .iter()
        .map(|p| marginal_in_order(s, p))
        .collect::<Result<Vec<_>>>()?;
    let scale = T::one() / tr.powi(parts.len() as i32 - 1);
    relative_entropy_to_product(&joint, &factors, scale)
}

/// `H(ρ ‖ c·σ_1⊗…⊗σ_n)` evaluated in the product eigenbasis, so that the
/// support floor applies to each factor rather than to their products.
pub(crate) fn relative_entropy_to_product<T: Real>(
    r: &CMat<T>,
    factors: &[CMat<T>],
    c: T,
) -> Result<T> {
    let tol = tolerances();
    let floor = T::lit(tol.eig_floor);
    let mut basis = CMat::<T>::identity(1, 1);
    // (log-eigenvalue, in support) per product basis vector
    let mut logs: Vec<(T, bool)> = vec![(c.ln(), true)];
    let mut trace_sigma = c;
    for f in factors {
        let e = linalg::eigh(f);
        basis = linalg::kron(&basis, &e.vectors);
        trace_sigma *= linalg::trace_re(f);
        logs = logs
            .iter()
            .flat_map(|&(l, ok)| {
                e.values.iter().map(move |&v| {
                    if v > floor {
                        (l + v.ln(), ok)
                    } else {
                        (l, false)
                    }
                })
            })
            .collect();
    }
    let rot = basis.adjoint() * r * &basis;
    let mut leak = T::zero();
    let mut cross = T::zero();
    for (i, &(l, ok)) in logs.iter().enumerate() {
        let rii = rot[(i, i)].re;
        if ok {
            cross += rii * l;
        } else {
            leak += rii;
        }
    }
    if leak.as_f64() > tol.supp {
        return Ok(T::infinity());
    }
    let rspec = clean_spectrum(linalg::eigvalsh(r))?;
    let neg_ent = rspec.iter().fold(T::zero(), |acc, &x| acc - eta(x));
    Ok(neg_ent - cross + trace_sigma - linalg::trace_re(r))
}

/// Bipartite relative-entropy mutual information; 0 if either side is empty.
pub(crate) fn mi2<T: Real>(s: &MultipartiteState<T>, a: &[String], b: &[String]) -> Result<T> {
    if a.is_empty() || b.is_empty() {
        return Ok(T::zero());
    }
    mi_parts(s, &[a.to_vec(), b.to_vec()])
}

/// `Σ H(ω_{A_i}) − H(ω_{A_1…A_n})`.
pub fn mutual_information_entropic<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    partition: &[P],
) -> Result<MeasureValue<T>> {
    let parts = to_parts(partition);
    if parts.is_empty() {
        return Err(Error::EmptyParts);
    }
    let refs: Vec<&[String]> = parts.iter().map(|p| p.as_slice()).collect();
    check_disjoint(s, &refs)?;
    let ent = Entropies::new(s);
    let mut v = T::zero();
    for p in &parts {
        v += ent.h(p)?;
    }
    v -= ent.h_union(&refs)?;
    Ok(MeasureValue::new(v, FormulaTag::MutualInformationEntropic))
}

/// `H_e(A|B) = H(ω_A) − I(A:B)`.
pub fn conditional_entropy_ext<T: Real, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    a: &[S],
    b: &[S],
) -> Result<T> {
    let a = to_set(a);
    let b = to_set(b);
    if a.is_empty() {
        return Err(Error::InvalidParameter(
            "conditional entropy needs a nonempty A".into(),
        ));
    }
    check_disjoint(s, &[&a, &b])?;
    let ha = Entropies::new(s).h(&a)?;
    Ok(ha - mi2(s, &a, &b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{states, tensor_product, SubsystemLayout};

    const LN2: f64 = std::f64::consts::LN_2;

    fn qubit(diag: [f64; 2], label: &str) -> MultipartiteState<f64> {
        MultipartiteState::from_diagonal(&diag, SubsystemLayout::qubits(&[label]).unwrap()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        let mixed = qubit([0.5, 0.5], "A");
        assert!((von_neumann_entropy(&mixed).unwrap() - LN2).abs() < 1e-14);
        assert!(von_neumann_entropy(&qubit([1.0, 0.0], "A")).unwrap().abs() < 1e-14);
        let half = mixed.scaled(0.5).unwrap();
        let direct = 2.0 * eta(0.25) - eta(0.5);
        let h = von_neumann_entropy(&half).unwrap();
        assert!((h - direct).abs() < 1e-14);
        assert!((h - 0.5 * LN2).abs() < 1e-14);
    }

    #[test]
    fn relative_entropy_examples() {
        let a = qubit([0.5, 0.5], "A");
        let b = qubit([0.75, 0.25], "A");
        let oracle = 0.5 * (0.5f64 / 0.75).ln() + 0.5 * (0.5f64 / 0.25).ln();
        let v = relative_entropy(&a, &b).unwrap().value;
        assert!((v - oracle).abs() < 1e-14);
        assert!((v - 0.143841).abs() < 1e-6);
        assert!(relative_entropy(&a, &a).unwrap().value.abs() < 1e-14);
        let zero = qubit([1.0, 0.0], "A");
        let one = qubit([0.0, 1.0], "A");
        assert!(relative_entropy(&zero, &one).unwrap().is_infinite());
        let v = relative_entropy(&a.scaled(0.4).unwrap(), &b.scaled(0.4).unwrap())
            .unwrap()
            .value;
        assert!((v - 0.4 * oracle).abs() < 1e-14);
    }

    #[test]
    fn mutual_information_examples() {
        let bell = states::bell::<f64>("A", "B").unwrap();
        let v = mutual_information(&bell, &[&["A"][..], &["B"]])
            .unwrap()
            .value;
        assert!((v - 2.0 * LN2).abs() < 1e-12);
        let prod = tensor_product(&qubit([0.3, 0.7], "A"), &qubit([0.6, 0.4], "B")).unwrap();
        assert!(
            mutual_information(&prod, &[&["A"][..], &["B"]])
                .unwrap()
                .value
                .abs()
                < 1e-12
        );
        let ghz = states::ghz::<f64>(&["A", "B", "C"]).unwrap();
        let v = mutual_information(&ghz, &[&["A"][..], &["B"], &["C"]])
            .unwrap()
            .value;
        let oracle = mutual_information_entropic(&ghz, &[&["A"][..], &["B"], &["C"]])
            .unwrap()
            .value;
        assert!((v - 3.0 * LN2).abs() < 1e-12);
        assert!((v - oracle).abs() < 1e-12);
        assert!(matches!(
            mutual_information(&ghz, &[&["A"][..], &["A", "B"]]),
            Err(Error::OverlappingLabels(_))
        ));
    }

    #[test]
    fn conditional_entropy_examples() {
        let bell = states::bell::<f64>("A", "B").unwrap();
        assert!((conditional_entropy_ext(&bell, &["A"], &["B"]).unwrap() + LN2).abs() < 1e-12);
        let prod = tensor_product(&qubit([0.3, 0.7], "A"), &qubit([0.6, 0.4], "B")).unwrap();
        let ha = von_neumann_entropy(&qubit([0.3, 0.7], "A")).unwrap();
        assert!((conditional_entropy_ext(&prod, &["A"], &["B"]).unwrap() - ha).abs() < 1e-12);
    }
}
