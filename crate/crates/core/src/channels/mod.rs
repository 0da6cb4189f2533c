//! Completely positive maps in Kraus form, their dilations and information
//! quantities.

mod capacity;
mod complete;
mod info;

pub use capacity::{constrained_capacity, CapacityOptions, CapacityResult, ConstraintSpec};
pub use complete::{completed_channel, df_decomposition, DfTerms};
pub use info::{
    channel_mutual_information, channel_mutual_information_entropic, coherent_information,
    entropy_exchange, entropy_gain, triangle_margins, EntropyGainKind,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{cr, CMat, Real};
use crate::tensor::{same_layout, MultipartiteState, SubsystemLayout, ENVIRONMENT};
use crate::tolerance::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    /// Trace preserving.
    Channel,
    /// Trace non-increasing.
    Operation,
}

/// `ρ ↦ Σ_k K_k ρ K_k†` with `K_k: in → out`.
#[derive(Clone, Debug)]
pub struct QuantumChannel<T: Real> {
    kraus: Vec<CMat<T>>,
    in_layout: SubsystemLayout,
    out_layout: SubsystemLayout,
    kind: ChannelKind,
}

impl<T: Real> QuantumChannel<T> {
    /// Validates shapes and `Σ K†K ⪯ I`; the kind is inferred.
    pub fn new(
        kraus: Vec<CMat<T>>,
        in_layout: SubsystemLayout,
        out_layout: SubsystemLayout,
    ) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::NotAChannel("empty Kraus list".into()));
        }
        let (d_in, d_out) = (in_layout.total_dim(), out_layout.total_dim());
        for k in &kraus {
            if k.shape() != (d_out, d_in) {
                return Err(Error::InvalidDimension(format!(
                    "Kraus operator is {:?}, expected {:?}",
                    k.shape(),
                    (d_out, d_in)
                )));
            }
        }
        let tol = tolerances().cptp;
        let gap = linalg::identity::<T>(d_in) - gram(&kraus);
        let kind = if linalg::max_abs(&gap).as_f64() <= tol {
            ChannelKind::Channel
        } else {
            let min = linalg::eigvalsh(&gap)
                .last()
                .copied()
                .unwrap_or_else(T::zero)
                .as_f64();
            if min < -tol {
                return Err(Error::NotAChannel(format!("Σ K†K exceeds I by {:e}", -min)));
            }
            ChannelKind::Operation
        };
        Ok(Self {
            kraus,
            in_layout,
            out_layout,
            kind,
        })
    }

    pub fn identity(layout: &SubsystemLayout) -> Self {
        let d = layout.total_dim();
        Self {
            kraus: vec![linalg::identity(d)],
            in_layout: layout.clone(),
            out_layout: layout.clone(),
            kind: ChannelKind::Channel,
        }
    }

    /// `ρ ↦ Tr ρ · I/d_out`.
    pub fn fully_depolarizing(in_layout: &SubsystemLayout, out_layout: &SubsystemLayout) -> Self {
        let (d_in, d_out) = (in_layout.total_dim(), out_layout.total_dim());
        let w = cr(T::one() / T::lit(d_out as f64).sqrt());
        let mut kraus = Vec::with_capacity(d_in * d_out);
        for b in 0..d_out {
            for i in 0..d_in {
                let mut k = CMat::zeros(d_out, d_in);
                k[(b, i)] = w;
                kraus.push(k);
            }
        }
        Self {
            kraus,
            in_layout: in_layout.clone(),
            out_layout: out_layout.clone(),
            kind: ChannelKind::Channel,
        }
    }

    /// `ρ ↦ Tr ρ · σ`.
    pub fn replacement(in_layout: &SubsystemLayout, sigma: &MultipartiteState<T>) -> Result<Self> {
        if !sigma.is_normalized() {
            return Err(Error::NonUnitTrace(sigma.trace().as_f64()));
        }
        let d_in = in_layout.total_dim();
        let kraus = trace_dump_kraus(&linalg::identity(d_in), sigma.matrix());
        Self::new(kraus, in_layout.clone(), sigma.layout().clone())
    }

    /// Channel with the given Kraus operators, failing unless trace preserving.
    pub fn channel(
        kraus: Vec<CMat<T>>,
        in_layout: SubsystemLayout,
        out_layout: SubsystemLayout,
    ) -> Result<Self> {
        let ch = Self::new(kraus, in_layout, out_layout)?;
        if ch.kind != ChannelKind::Channel {
            return Err(Error::NotAChannel("not trace preserving".into()));
        }
        Ok(ch)
    }

    /// `c·Φ` for `c ∈ [0, 1]`.
    pub fn scaled(&self, c: T) -> Result<Self> {
        if c < T::zero() || c > T::one() {
            return Err(Error::OutOfRange(format!(
                "scale {} outside [0, 1]",
                c.as_f64()
            )));
        }
        let w = cr(c.sqrt());
        let kraus = self.kraus.iter().map(|k| k * w).collect();
        Self::new(kraus, self.in_layout.clone(), self.out_layout.clone())
    }

    pub fn kraus(&self) -> &[CMat<T>] {
        &self.kraus
    }

    pub fn in_layout(&self) -> &SubsystemLayout {
        &self.in_layout
    }

    pub fn out_layout(&self) -> &SubsystemLayout {
        &self.out_layout
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn is_trace_preserving(&self) -> bool {
        self.kind == ChannelKind::Channel
    }

    /// `Σ K†K`.
    pub fn kraus_gram(&self) -> CMat<T> {
        gram(&self.kraus)
    }

    pub fn apply_matrix(&self, rho: &CMat<T>) -> CMat<T> {
        let d_out = self.out_layout.total_dim();
        self.kraus.iter().fold(CMat::zeros(d_out, d_out), |acc, k| {
            acc + k * rho * k.adjoint()
        })
    }

    pub fn apply(&self, s: &MultipartiteState<T>) -> Result<MultipartiteState<T>> {
        same_layout(s.layout(), &self.in_layout)?;
        Ok(MultipartiteState::from_parts(
            self.apply_matrix(s.matrix()),
            self.out_layout.clone(),
        ))
    }

    /// `id ⊗ Φ` on a state containing every input label. The output factors
    /// take the place of the first input factor; the others keep their order.
    pub fn apply_local(&self, s: &MultipartiteState<T>) -> Result<MultipartiteState<T>> {
        let inl = self.in_layout.labels();
        for l in &inl {
            let d = s.layout().dim_of(l)?;
            if d != self.in_layout.dim_of(l)? {
                return Err(Error::LayoutMismatch(format!("factor `{l}` has dim {d}")));
            }
        }
        let rest: Vec<&str> = s
            .labels()
            .into_iter()
            .filter(|l| !inl.contains(l))
            .collect();
        if rest.is_empty() {
            return self.apply(&s.reordered(&inl)?);
        }
        let mut order = rest.clone();
        order.extend(inl.iter().copied());
        let moved = s.reordered(&order)?;
        let rest_layout = moved
            .layout()
            .select_sorted(&(0..rest.len()).collect::<Vec<_>>());
        let out_layout = rest_layout.concat(&self.out_layout)?;
        let id = linalg::identity::<T>(rest_layout.total_dim());
        let d = out_layout.total_dim();
        let m = self.kraus.iter().fold(CMat::zeros(d, d), |acc, k| {
            let big = linalg::kron(&id, k);
            acc + &big * moved.matrix() * big.adjoint()
        });
        let out = MultipartiteState::from_parts(m, out_layout);
        let all = s.labels();
        let first = all
            .iter()
            .position(|l| inl.contains(l))
            .expect("checked above");
        let before = all[..first].len();
        let out_labels = self.out_layout.labels();
        let mut final_order: Vec<&str> = rest[..before].to_vec();
        final_order.extend(out_labels.iter().copied());
        final_order.extend(rest[before..].iter().copied());
        out.reordered(&final_order)
    }

    /// `J = Σ_{ij} |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)` on `in ⊗ out`.
    pub fn choi_matrix(&self) -> CMat<T> {
        let (d_in, d_out) = (self.in_layout.total_dim(), self.out_layout.total_dim());
        let n = d_in * d_out;
        let mut j = CMat::zeros(n, n);
        for k in &self.kraus {
            let v = crate::scalar::CVec::from_fn(n, |idx, _| k[(idx % d_out, idx / d_out)]);
            j += &v * v.adjoint();
        }
        j
    }

    /// Number of Choi eigenvalues above the `choi_rank` tolerance.
    pub fn choi_rank(&self) -> usize {
        let t = T::lit(tolerances().choi_rank);
        linalg::eigvalsh(&self.choi_matrix())
            .iter()
            .filter(|&&v| v > t)
            .count()
    }

    /// Equivalent channel with exactly `choi_rank` orthogonal Kraus operators.
    pub fn canonicalize(&self) -> Self {
        let (d_in, d_out) = (self.in_layout.total_dim(), self.out_layout.total_dim());
        let e = linalg::eigh(&self.choi_matrix());
        let t = T::lit(tolerances().choi_rank);
        let kraus: Vec<CMat<T>> = e
            .values
            .iter()
            .enumerate()
            .filter(|(_, &v)| v > t)
            .map(|(c, &v)| {
                let w = cr(v.sqrt());
                CMat::from_fn(d_out, d_in, |b, i| e.vectors[(i * d_out + b, c)] * w)
            })
            .collect();
        let kraus = if kraus.is_empty() {
            vec![CMat::zeros(d_out, d_in)]
        } else {
            kraus
        };
        Self {
            kraus,
            in_layout: self.in_layout.clone(),
            out_layout: self.out_layout.clone(),
            kind: self.kind,
        }
    }

    /// `next ∘ self`.
    pub fn then(&self, next: &Self) -> Result<Self> {
        same_layout(&self.out_layout, &next.in_layout)?;
        let kraus = next
            .kraus
            .iter()
            .flat_map(|l| self.kraus.iter().map(move |k| l * k))
            .collect();
        Self::new(kraus, self.in_layout.clone(), next.out_layout.clone())
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        let inl = self.in_layout.concat(&other.in_layout)?;
        let outl = self.out_layout.concat(&other.out_layout)?;
        let kraus = self
            .kraus
            .iter()
            .flat_map(|a| other.kraus.iter().map(move |b| linalg::kron(a, b)))
            .collect();
        Self::new(kraus, inl, outl)
    }

    /// Stinespring isometry `V: in → out ⊗ E` with `dim E` the number of
    /// Kraus operators; row `b·k + j` holds row `b` of `K_j`.
    pub fn stinespring(&self) -> CMat<T> {
        let k = self.kraus.len();
        let (d_in, d_out) = (self.in_layout.total_dim(), self.out_layout.total_dim());
        CMat::from_fn(d_out * k, d_in, |r, i| self.kraus[r % k][(r / k, i)])
    }

    pub fn environment_layout(&self) -> SubsystemLayout {
        SubsystemLayout::new([(ENVIRONMENT, self.kraus.len())]).expect("positive dimension")
    }

    /// `VρV†` on `out ⊗ E`.
    pub fn dilate(&self, s: &MultipartiteState<T>) -> Result<MultipartiteState<T>> {
        same_layout(s.layout(), &self.in_layout)?;
        let v = self.stinespring();
        let layout = self.out_layout.concat(&self.environment_layout())?;
        Ok(MultipartiteState::from_parts(
            &v * s.matrix() * v.adjoint(),
            layout,
        ))
    }

    /// `ρ ↦ Tr_out VρV†` for the isometry of [`stinespring`](Self::stinespring).
    pub fn complementary(&self) -> Result<Self> {
        if !self.is_trace_preserving() {
            return Err(Error::NotAChannel(
                "complementary map is defined for channels only".into(),
            ));
        }
        let k = self.kraus.len();
        let (d_in, d_out) = (self.in_layout.total_dim(), self.out_layout.total_dim());
        let kraus = (0..d_out)
            .map(|b| CMat::from_fn(k, d_in, |j, i| self.kraus[j][(b, i)]))
            .collect();
        Ok(Self {
            kraus,
            in_layout: self.in_layout.clone(),
            out_layout: self.environment_layout(),
            kind: ChannelKind::Channel,
        })
    }

    pub fn relabel_output(&self, layout: SubsystemLayout) -> Result<Self> {
        if layout.total_dim() != self.out_layout.total_dim() {
            return Err(Error::LayoutMismatch("output dimension differs".into()));
        }
        Ok(Self {
            out_layout: layout,
            ..self.clone()
        })
    }

    pub fn relabel_input(&self, layout: SubsystemLayout) -> Result<Self> {
        if layout.total_dim() != self.in_layout.total_dim() {
            return Err(Error::LayoutMismatch("input dimension differs".into()));
        }
        Ok(Self {
            in_layout: layout,
            ..self.clone()
        })
    }
}

pub(crate) fn gram<T: Real>(kraus: &[CMat<T>]) -> CMat<T> {
    let d = kraus[0].ncols();
    kraus
        .iter()
        .fold(CMat::zeros(d, d), |acc, k| acc + k.adjoint() * k)
}

/// Kraus operators of `ρ ↦ Tr[Mρ] σ` for PSD `M` and PSD `σ`.
pub(crate) fn trace_dump_kraus<T: Real>(m: &CMat<T>, sigma: &CMat<T>) -> Vec<CMat<T>> {
    let em = linalg::eigh(m);
    let es = linalg::eigh(sigma);
    let floor = T::lit(tolerances().eig_floor);
    let mut out = Vec::new();
    for (a, &mu) in em.values.iter().enumerate() {
        if mu <= floor {
            continue;
        }
        for (b, &s) in es.values.iter().enumerate() {
            if s <= floor {
                continue;
            }
            let w = cr((mu * s).sqrt());
            let col = es.vectors.column(b) * w;
            out.push(&col * em.vectors.column(a).adjoint());
        }
    }
    if out.is_empty() {
        out.push(CMat::zeros(sigma.nrows(), m.nrows()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_channel, random_state};
    use crate::tensor::states;

    fn qubit(l: &str) -> SubsystemLayout {
        SubsystemLayout::qubits(&[l]).unwrap()
    }

    fn dephasing() -> QuantumChannel<f64> {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let i = linalg::identity::<f64>(2) * cr(h);
        let mut z = linalg::identity::<f64>(2) * cr(h);
        z[(1, 1)] = cr(-h);
        QuantumChannel::new(vec![i, z], qubit("A"), qubit("A")).unwrap()
    }

    #[test]
    fn identity_and_depolarizing_actions() {
        let s = random_state::<f64>(&qubit("A"), 2, 3).unwrap();
        let id = QuantumChannel::identity(&qubit("A"));
        assert!(linalg::max_abs(&(id.apply(&s).unwrap().matrix() - s.matrix())) < 1e-15);
        let dep = QuantumChannel::fully_depolarizing(&qubit("A"), &qubit("A"));
        let out = dep.apply(&s).unwrap();
        assert!(linalg::max_abs(&(out.matrix() - linalg::identity::<f64>(2) * cr(0.5))) < 1e-14);
    }

    #[test]
    fn rejects_expanding_maps() {
        let k = linalg::identity::<f64>(2) * cr(1.1);
        assert!(matches!(
            QuantumChannel::new(vec![k], qubit("A"), qubit("A")),
            Err(Error::NotAChannel(_))
        ));
        assert!(QuantumChannel::<f64>::new(vec![], qubit("A"), qubit("A")).is_err());
    }

    #[test]
    fn stinespring_reconstructs_dephasing() {
        let ch = dephasing();
        let v = ch.stinespring();
        assert!(linalg::max_abs(&(v.adjoint() * &v - linalg::identity::<f64>(2))) < 1e-14);
        let s = random_state::<f64>(&qubit("A"), 2, 9).unwrap();
        let dil = ch.dilate(&s).unwrap();
        let back = dil.marginal(&["A"]).unwrap();
        assert!(linalg::max_abs(&(back.matrix() - ch.apply(&s).unwrap().matrix())) < 1e-12);
        let env = dil.marginal(&[ENVIRONMENT]).unwrap();
        let comp = ch.complementary().unwrap().apply(&s).unwrap();
        assert!(linalg::max_abs(&(env.matrix() - comp.matrix())) < 1e-12);
    }

    #[test]
    fn identity_dilation_is_trivial() {
        let id = QuantumChannel::<f64>::identity(&qubit("A"));
        let v = id.stinespring();
        assert_eq!(v.shape(), (2, 2));
        let comp = id.complementary().unwrap();
        let s = random_state::<f64>(&qubit("A"), 2, 1).unwrap();
        let out = comp.apply(&s).unwrap();
        assert!((out.matrix()[(0, 0)].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn choi_of_random_channel() {
        let ch = random_channel::<f64>(2, 3, 2, 11).unwrap();
        let j = ch.choi_matrix();
        assert!((linalg::trace_re(&j) - 2.0).abs() < 1e-12);
        assert!(linalg::eigvalsh(&j).last().unwrap() > &-1e-12);
        assert_eq!(ch.choi_rank(), 2);
        let canon = ch.canonicalize();
        assert_eq!(canon.kraus().len(), 2);
        let s = random_state::<f64>(ch.in_layout(), 2, 4).unwrap();
        let d = ch.apply(&s).unwrap().matrix() - canon.apply(&s).unwrap().matrix();
        assert!(linalg::max_abs(&d) < 1e-12);
    }

    #[test]
    fn local_action_preserves_label_positions() {
        let s =
            random_state::<f64>(&SubsystemLayout::qubits(&["A", "B", "C"]).unwrap(), 8, 5).unwrap();
        let dep = QuantumChannel::fully_depolarizing(
            &qubit("B"),
            &SubsystemLayout::new([("B", 3)]).unwrap(),
        );
        let out = dep.apply_local(&s).unwrap();
        assert_eq!(out.labels(), vec!["A", "B", "C"]);
        assert_eq!(out.layout().dims(), vec![2, 3, 2]);
        let ac = out.marginal(&["A", "C"]).unwrap();
        assert!(
            linalg::max_abs(&(ac.matrix() - s.marginal(&["A", "C"]).unwrap().matrix())) < 1e-12
        );
    }

    #[test]
    fn composition_and_tensor() {
        let a = random_channel::<f64>(2, 2, 2, 1).unwrap();
        let b = random_channel::<f64>(2, 2, 3, 2)
            .unwrap()
            .relabel_input(a.out_layout().clone())
            .unwrap();
        let ab = a.then(&b).unwrap();
        let s = random_state::<f64>(a.in_layout(), 2, 3).unwrap();
        let lhs = ab.apply(&s).unwrap();
        let rhs = b.apply(&a.apply(&s).unwrap()).unwrap();
        assert!(linalg::max_abs(&(lhs.matrix() - rhs.matrix())) < 1e-12);
        let b2 = b
            .relabel_input(qubit("x"))
            .unwrap()
            .relabel_output(qubit("y"))
            .unwrap();
        let t = a.tensor(&b2).unwrap();
        assert!(t.is_trace_preserving());
        assert_eq!(t.kraus().len(), 6);
    }

    #[test]
    fn bell_through_local_identity() {
        let bell = states::bell::<f64>("A", "B").unwrap();
        let out = QuantumChannel::identity(&qubit("A"))
            .apply_local(&bell)
            .unwrap();
        assert!(linalg::max_abs(&(out.matrix() - bell.matrix())) < 1e-15);
    }
}
