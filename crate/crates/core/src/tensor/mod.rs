//! Labeled multipartite operators and the tensor-space operations on them.

mod layout;
mod projector;
mod state;

pub use layout::SubsystemLayout;
pub use projector::ProjectorFamily;
pub(crate) use state::same_layout;
pub use state::MultipartiteState;

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{cr, modulus, CMat, CVec, Real};
use crate::tolerance::tolerances;

/// Reserved label of purification ancillas.
pub const PURIFIER: &str = "~R";
/// Reserved label of Stinespring environments.
pub const ENVIRONMENT: &str = "~E";

pub fn tensor_product<T: Real>(
    a: &MultipartiteState<T>,
    b: &MultipartiteState<T>,
) -> Result<MultipartiteState<T>> {
    let layout = a.layout().concat(b.layout())?;
    Ok(MultipartiteState::from_parts(
        linalg::kron(a.matrix(), b.matrix()),
        layout,
    ))
}

/// Marginal on `keep`; the kept factors stay in layout order.
pub fn partial_trace<T: Real, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    keep: &[S],
) -> Result<MultipartiteState<T>> {
    if keep.is_empty() {
        return Err(Error::InvalidParameter(
            "partial trace needs a nonempty keep set".into(),
        ));
    }
    let idx = s.layout().indices_of(keep)?;
    let m = linalg::partial_trace(s.matrix(), &s.layout().dims(), &idx);
    Ok(MultipartiteState::from_parts(
        m,
        s.layout().select_sorted(&idx),
    ))
}

/// `(QωQ / λ, λ)` with `λ = Tr QωQ`.
pub fn truncate<T: Real>(
    s: &MultipartiteState<T>,
    q: &ProjectorFamily<T>,
) -> Result<(MultipartiteState<T>, T)> {
    let op = q.operator(s.layout())?;
    let m = &op * s.matrix() * &op;
    let lambda = linalg::trace_re(&m);
    if lambda.as_f64() <= tolerances().num {
        return Err(Error::DegenerateTruncation(lambda.as_f64()));
    }
    let out = MultipartiteState::from_parts(m * cr(T::one() / lambda), s.layout().clone());
    Ok((out, lambda))
}

/// Standard purification on `H ⊗ H_R` with `dim R = dim H`, ancilla labeled [`PURIFIER`].
pub fn purify<T: Real>(s: &MultipartiteState<T>) -> Result<MultipartiteState<T>> {
    if !s.is_normalized() {
        return Err(Error::NonUnitTrace(s.trace().as_f64()));
    }
    let d = s.dim();
    let layout = s.layout().with_factor(PURIFIER, d)?;
    let e = linalg::eigh(s.matrix());
    let mut psi = CVec::<T>::zeros(d * d);
    for (i, &p) in e.values.iter().enumerate() {
        if p <= T::zero() {
            continue;
        }
        let w = cr(p.sqrt());
        for row in 0..d {
            psi[row * d + i] = e.vectors[(row, i)] * w;
        }
    }
    MultipartiteState::pure(&psi, layout)
}

/// `F(ρ,σ) = ‖√ρ√σ‖₁`.
pub fn fidelity<T: Real>(r: &MultipartiteState<T>, s: &MultipartiteState<T>) -> Result<T> {
    same_layout(r.layout(), s.layout())?;
    Ok(fidelity_matrices(r.matrix(), s.matrix()))
}

pub(crate) fn fidelity_matrices<T: Real>(r: &CMat<T>, s: &CMat<T>) -> T {
    let floor = T::lit(tolerances().eig_floor);
    let a = linalg::psd_sqrt(r, floor);
    let b = linalg::psd_sqrt(s, floor);
    linalg::trace_norm(&(a * b))
}

/// `½‖r − s‖₁`.
pub fn trace_distance_half<T: Real>(
    r: &MultipartiteState<T>,
    s: &MultipartiteState<T>,
) -> Result<T> {
    same_layout(r.layout(), s.layout())?;
    Ok(linalg::trace_norm_herm(&(r.matrix() - s.matrix())) * T::lit(0.5))
}

/// Rank-`n` projector onto the top eigenvectors of the marginal on `label`.
///
/// Within a degenerate eigenvalue cluster the basis is fixed by projecting the
/// computational basis vectors onto the cluster in ascending order.
pub fn spectral_projector<T: Real>(
    s: &MultipartiteState<T>,
    label: &str,
    n: usize,
) -> Result<CMat<T>> {
    let marg = partial_trace(s, &[label])?;
    let d = marg.dim();
    if n > d {
        return Err(Error::OutOfRange(format!("rank {n} exceeds dim {d}")));
    }
    let vecs = canonical_eigenvectors(marg.matrix());
    let mut p = CMat::<T>::zeros(d, d);
    for v in vecs.iter().take(n) {
        p += linalg::projector_from_vector(v);
    }
    Ok(p)
}

/// Eigenvectors sorted by descending eigenvalue with canonical bases inside
/// degenerate clusters.
pub(crate) fn canonical_eigenvectors<T: Real>(m: &CMat<T>) -> Vec<CVec<T>> {
    let e = linalg::eigh(m);
    let d = e.values.len();
    let tol = T::lit(tolerances().num);
    let mut out = Vec::with_capacity(d);
    let mut start = 0;
    while start < d {
        let mut end = start + 1;
        while end < d && (e.values[start] - e.values[end]).abs() <= tol {
            end += 1;
        }
        let cluster: Vec<CVec<T>> = (start..end)
            .map(|c| e.vectors.column(c).into_owned())
            .collect();
        out.extend(canonical_cluster_basis(&cluster, d));
        start = end;
    }
    out
}

fn canonical_cluster_basis<T: Real>(cluster: &[CVec<T>], d: usize) -> Vec<CVec<T>> {
    if cluster.len() == 1 {
        let mut v = cluster[0].clone();
        fix_phase(&mut v);
        return vec![v];
    }
    let proj = cluster.iter().fold(CMat::<T>::zeros(d, d), |acc, v| {
        acc + linalg::projector_from_vector(v)
    });
    let mut basis: Vec<CVec<T>> = Vec::with_capacity(cluster.len());
    for k in 0..d {
        if basis.len() == cluster.len() {
            break;
        }
        let mut v: CVec<T> = proj.column(k).into_owned();
        for b in &basis {
            let c = b.dotc(&v);
            v -= b * c;
        }
        let nrm = v.norm();
        if nrm > T::lit(1e-6) {
            v /= cr(nrm);
            fix_phase(&mut v);
            basis.push(v);
        }
    }
    basis
}

/// Makes the largest-modulus component real positive.
fn fix_phase<T: Real>(v: &mut CVec<T>) {
    let mut best = 0;
    for i in 0..v.len() {
        if modulus(v[i]) > modulus(v[best]) + T::lit(1e-12) {
            best = i;
        }
    }
    let n = modulus(v[best]);
    if n > T::zero() {
        let phase = v[best].conj() / cr(n);
        *v *= phase;
    }
}

/// Canonical named states used in checks and examples.
pub mod states {
    use super::*;

    /// `(|00⟩ + |11⟩)/√2` on `a ⊗ b`.
    pub fn bell<T: Real>(a: &str, b: &str) -> Result<MultipartiteState<T>> {
        ghz(&[a, b])
    }

    /// `(|0…0⟩ + |1…1⟩)/√2` on qubits `labels`.
    pub fn ghz<T: Real>(labels: &[&str]) -> Result<MultipartiteState<T>> {
        let layout = SubsystemLayout::qubits(labels)?;
        let d = layout.total_dim();
        let mut v = CVec::<T>::zeros(d);
        v[0] = cr(T::one());
        v[d - 1] = cr(T::one());
        MultipartiteState::pure(&v, layout)
    }

    /// Product of normalized marginals of `s` over each single label.
    pub fn product_of_marginals<T: Real>(s: &MultipartiteState<T>) -> Result<MultipartiteState<T>> {
        let labels: Vec<String> = s.labels().iter().map(|l| l.to_string()).collect();
        let tr = s.trace();
        let mut acc: Option<MultipartiteState<T>> = None;
        for l in &labels {
            let m = partial_trace(s, &[l.as_str()])?.normalized();
            acc = Some(match acc {
                None => m,
                Some(a) => tensor_product(&a, &m)?,
            });
        }
        let out = acc.ok_or(Error::EmptyParts)?;
        Ok(MultipartiteState::from_parts(
            out.matrix() * cr(tr),
            out.layout().clone(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_of_pure_basis_states() {
        let a = MultipartiteState::<f64>::basis(SubsystemLayout::qubits(&["A"]).unwrap(), &[0])
            .unwrap();
        let b = MultipartiteState::<f64>::basis(SubsystemLayout::qubits(&["B"]).unwrap(), &[0])
            .unwrap();
        let ab = tensor_product(&a, &b).unwrap();
        let expect =
            MultipartiteState::<f64>::basis(SubsystemLayout::qubits(&["A", "B"]).unwrap(), &[0, 0])
                .unwrap();
        assert!(linalg::max_abs(&(ab.matrix() - expect.matrix())) < 1e-15);
        assert!(matches!(
            tensor_product(&a, &a),
            Err(Error::LabelCollision(_))
        ));
    }

    #[test]
    fn maximally_mixed_product() {
        let a = MultipartiteState::<f64>::maximally_mixed(SubsystemLayout::qubits(&["A"]).unwrap());
        let b = MultipartiteState::<f64>::maximally_mixed(SubsystemLayout::qubits(&["B"]).unwrap());
        let ab = tensor_product(&a, &b).unwrap();
        let expect = linalg::identity::<f64>(4) * cr(0.25);
        assert!(linalg::max_abs(&(ab.matrix() - expect)) < 1e-15);
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        let bell = states::bell::<f64>("A", "B").unwrap();
        let a = partial_trace(&bell, &["A"]).unwrap();
        assert!(linalg::max_abs(&(a.matrix() - linalg::identity::<f64>(2) * cr(0.5))) < 1e-15);
        assert!(partial_trace(&bell, &["Z"]).is_err());
    }

    #[test]
    fn truncate_bell_to_corner() {
        let bell = states::bell::<f64>("A", "B").unwrap();
        let q = ProjectorFamily::new([("A", linalg::diag(&[1.0, 0.0]))]).unwrap();
        let (t, lambda) = truncate(&bell, &q).unwrap();
        assert!((lambda - 0.5).abs() < 1e-15);
        assert!((t.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        let (same, one) = truncate(&bell, &ProjectorFamily::identity()).unwrap();
        assert!((one - 1.0).abs() < 1e-15);
        assert!(linalg::max_abs(&(same.matrix() - bell.matrix())) < 1e-15);
        let zero = ProjectorFamily::new([
            ("A", linalg::diag(&[1.0, 0.0])),
            ("B", linalg::diag(&[0.0, 1.0])),
        ])
        .unwrap();
        assert!(matches!(
            truncate(&bell, &zero),
            Err(Error::DegenerateTruncation(_))
        ));
    }

    #[test]
    fn purify_pure_and_mixed() {
        let l = SubsystemLayout::qubits(&["A"]).unwrap();
        let mixed = MultipartiteState::<f64>::maximally_mixed(l.clone());
        let p = purify(&mixed).unwrap();
        assert!((p.purity() - 1.0).abs() < 1e-12);
        let back = partial_trace(&p, &["A"]).unwrap();
        assert!(linalg::max_abs(&(back.matrix() - mixed.matrix())) < 1e-12);
        let pure = MultipartiteState::<f64>::basis(l, &[1]).unwrap();
        let pp = purify(&pure).unwrap();
        let anc = partial_trace(&pp, &[PURIFIER]).unwrap();
        assert!((anc.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fidelity_and_distance_closed_forms() {
        let l = SubsystemLayout::qubits(&["A"]).unwrap();
        let mixed = MultipartiteState::<f64>::maximally_mixed(l.clone());
        let zero = MultipartiteState::<f64>::basis(l.clone(), &[0]).unwrap();
        let one = MultipartiteState::<f64>::basis(l, &[1]).unwrap();
        assert!((fidelity(&mixed, &zero).unwrap() - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(fidelity(&zero, &one).unwrap().abs() < 1e-12);
        assert!((fidelity(&mixed, &mixed).unwrap() - 1.0).abs() < 1e-12);
        assert!((trace_distance_half(&mixed, &zero).unwrap() - 0.5).abs() < 1e-12);
        assert!((trace_distance_half(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
        assert!(trace_distance_half(&zero, &zero).unwrap().abs() < 1e-15);
    }

    #[test]
    fn spectral_projector_ties_and_order() {
        let l = SubsystemLayout::uniform(&["A"], 3).unwrap();
        let thermal = MultipartiteState::<f64>::from_diagonal(&[0.7, 0.2, 0.1], l.clone()).unwrap();
        let p = spectral_projector(&thermal, "A", 2).unwrap();
        assert!(linalg::max_abs(&(p - linalg::diag(&[1.0, 1.0, 0.0]))) < 1e-12);
        let mixed = MultipartiteState::<f64>::maximally_mixed(l);
        let p1 = spectral_projector(&mixed, "A", 1).unwrap();
        assert!(linalg::max_abs(&(p1 - linalg::diag(&[1.0, 0.0, 0.0]))) < 1e-12);
        let full = spectral_projector(&mixed, "A", 3).unwrap();
        assert!(linalg::max_abs(&(full - linalg::identity::<f64>(3))) < 1e-12);
        assert!(spectral_projector(&mixed, "A", 4).is_err());
    }
}
