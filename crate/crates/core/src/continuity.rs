//! Alicki–Fannes–Winter continuity bounds, the interpolating decomposition
//! behind them, and an empirical verifier.

use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{entropy_gain, EntropyGainKind, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg;
use crate::measures::{
    cmi, cmi_multipartite, conditional_entropy_ext, information_gap_chain, interaction_information,
    mutual_information, secrecy_monotone, von_neumann_entropy, CmiFormula, EntropicCombo,
};
use crate::random::{random_channel_with, random_state_with, rng_for};
use crate::scalar::{binary_entropy, cr, Real};
use crate::tensor::{trace_distance_half, MultipartiteState, SubsystemLayout};
use crate::tolerance::tolerances;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Concavity {
    Concave,
    Convex,
    Neither,
}

/// Inputs of the generic bound for `F = Σ α_k H(X_k)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundSpec<T: Real> {
    pub combo: EntropicCombo<T>,
    /// `sup |F(ω) − F(ω')|` over finite-rank states.
    pub sup_range: T,
    pub concavity: Concavity,
}

impl<T: Real> BoundSpec<T> {
    pub fn new(combo: EntropicCombo<T>, sup_range: T, concavity: Concavity) -> Result<Self> {
        if !(sup_range >= T::zero()) || !sup_range.is_finite_value() {
            return Err(Error::InvalidParameter(
                "sup_range must be finite and nonnegative".into(),
            ));
        }
        Ok(Self {
            combo,
            sup_range,
            concavity,
        })
    }

    /// Uses `Σ|α_k| ln dim X_k` as the range, valid for any combo on `layout`.
    pub fn with_dimension_range(
        combo: EntropicCombo<T>,
        layout: &SubsystemLayout,
        concavity: Concavity,
    ) -> Result<Self> {
        let mut range = T::zero();
        for (a, x) in combo.terms() {
            range += a.abs() * T::lit(layout.dim_of_set(x)? as f64).ln();
        }
        Self::new(combo, range, concavity)
    }

    /// `(Σ|α_k|, Σ_{α_k>0} α_k, Σ_{α_k<0} |α_k|)`.
    pub fn coefficient_sums(&self) -> (T, T, T) {
        self.combo.coefficient_sums()
    }

    /// Coefficient multiplying `(1+ε)h₂(ε/(1+ε))`.
    pub fn entropy_weight(&self, refined: bool) -> T {
        let (all, pos, neg) = self.coefficient_sums();
        match (refined, self.concavity) {
            (true, Concavity::Concave) => pos,
            (true, Concavity::Convex) => neg,
            _ => all,
        }
    }
}

/// `g(ε) = (1+ε) h₂(ε/(1+ε))`.
pub fn winter_g<T: Real>(eps: T) -> T {
    let one = T::one();
    (one + eps) * binary_entropy(eps / (one + eps))
}

fn check_eps<T: Real>(eps: T) -> Result<()> {
    if eps >= T::zero() && eps < T::one() {
        Ok(())
    } else {
        Err(Error::EpsilonOutOfRange(eps.as_f64()))
    }
}

/// `ε·sup|F−F'| + (1+ε)h₂(ε/(1+ε))·C` with `C` refined by the concavity flag.
pub fn generic_bound<T: Real>(spec: &BoundSpec<T>, eps: T) -> Result<T> {
    check_eps(eps)?;
    Ok(eps * spec.sup_range + winter_g(eps) * spec.entropy_weight(true))
}

/// As [`generic_bound`] but always with `Σ|α_k|`.
pub fn generic_bound_unrefined<T: Real>(spec: &BoundSpec<T>, eps: T) -> Result<T> {
    check_eps(eps)?;
    Ok(eps * spec.sup_range + winter_g(eps) * spec.entropy_weight(false))
}

/// `ω* = (ω¹ + [ω²−ω¹]₊)/(1+ε)` with both convex decompositions.
#[derive(Clone, Debug)]
pub struct WinterDecomposition<T: Real> {
    pub omega_star: MultipartiteState<T>,
    pub w1_tilde: MultipartiteState<T>,
    pub w2_tilde: MultipartiteState<T>,
    pub epsilon: T,
}

impl<T: Real> WinterDecomposition<T> {
    /// Max-entry residuals of `ω* = (ω^i + ε ω̃^i)/(1+ε)` for `i = 1, 2`.
    pub fn residuals(&self, w1: &MultipartiteState<T>, w2: &MultipartiteState<T>) -> (T, T) {
        let s = cr(T::one() / (T::one() + self.epsilon));
        let e = cr(self.epsilon);
        let r = |w: &MultipartiteState<T>, t: &MultipartiteState<T>| {
            linalg::max_abs(&((w.matrix() + t.matrix() * e) * s - self.omega_star.matrix()))
        };
        (r(w1, &self.w1_tilde), r(w2, &self.w2_tilde))
    }
}

pub fn winter_interpolation<T: Real>(
    w1: &MultipartiteState<T>,
    w2: &MultipartiteState<T>,
) -> Result<WinterDecomposition<T>> {
    let eps = trace_distance_half(w1, w2)?;
    for w in [w1, w2] {
        if !w.is_normalized() {
            return Err(Error::NonUnitTrace(w.trace().as_f64()));
        }
    }
    let tol = tolerances().num;
    if eps.as_f64() <= tol {
        return Err(Error::DegeneratePair);
    }
    if eps.as_f64() >= 1.0 - tol {
        return Err(Error::EpsilonOutOfRange(eps.as_f64()));
    }
    let diff = w2.matrix() - w1.matrix();
    let pos = linalg::positive_part(&diff);
    let neg = linalg::positive_part(&(-diff));
    let layout = w1.layout().clone();
    let inv = cr(T::one() / eps);
    Ok(WinterDecomposition {
        omega_star: MultipartiteState::from_parts(
            (w1.matrix() + &pos) * cr(T::one() / (T::one() + eps)),
            layout.clone(),
        ),
        w1_tilde: MultipartiteState::from_parts(pos * inv, layout.clone()),
        w2_tilde: MultipartiteState::from_parts(neg * inv, layout),
        epsilon: eps,
    })
}

/// Quantities with a dedicated continuity bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    /// `dims = [d_A]`
    Entropy,
    /// `H_e(A|B)`, `dims = [d_A, d_B]`
    ConditionalEntropy,
    /// `dims = [d_A, d_B]`
    MutualInformation,
    /// `dims = [d_1, …, d_n]`
    MultiMutualInformation,
    /// `I(A:C|B)`, `dims = [d_A, d_B, d_C]`
    Cmi,
    /// `I(A_1:…:A_n|B)`, `dims = [d_1, …, d_n, d_B]`
    MultiCmi,
    /// `S_n(A_1:…:A_n|B)`, `dims = [d_1, …, d_n, d_B]`
    Secrecy,
    /// `ΔI`, `dims = [d_1, …, d_n]` for both `A_i` and `A'_i`
    InformationGap,
    /// `I_n`, `dims = [d_1, …, d_n]`
    Interaction,
    /// `EG(Φ,ρ)`, `dims = [d_in, d_out, k]` with `k` the Choi rank
    EntropyGain,
}

impl BoundKind {
    pub const ALL: [BoundKind; 10] = [
        Self::Entropy,
        Self::ConditionalEntropy,
        Self::MutualInformation,
        Self::MultiMutualInformation,
        Self::Cmi,
        Self::MultiCmi,
        Self::Secrecy,
        Self::InformationGap,
        Self::Interaction,
        Self::EntropyGain,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Entropy => "entropy",
            Self::ConditionalEntropy => "conditional_entropy",
            Self::MutualInformation => "mutual_information",
            Self::MultiMutualInformation => "multi_mutual_information",
            Self::Cmi => "cmi",
            Self::MultiCmi => "multi_cmi",
            Self::Secrecy => "secrecy",
            Self::InformationGap => "information_gap",
            Self::Interaction => "interaction",
            Self::EntropyGain => "entropy_gain",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| Error::UnknownName(name.into()))
    }

    fn min_dims(self) -> usize {
        match self {
            Self::Entropy => 1,
            Self::ConditionalEntropy | Self::MutualInformation => 2,
            Self::MultiMutualInformation | Self::InformationGap | Self::Interaction => 1,
            Self::Cmi | Self::EntropyGain => 3,
            Self::MultiCmi | Self::Secrecy => 2,
        }
    }
}

fn ln_dim(d: usize) -> f64 {
    (d as f64).ln()
}

/// Sum of `ln d_i` over all but the largest factor.
fn ln_all_but_largest(dims: &[usize]) -> f64 {
    let total: f64 = dims.iter().map(|&d| ln_dim(d)).sum();
    total - dims.iter().map(|&d| ln_dim(d)).fold(0.0, f64::max)
}

/// Named continuity bound in nats; see [`BoundKind`] for the `dims` layout.
pub fn specialized_bound(kind: BoundKind, dims: &[usize], eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if dims.len() < kind.min_dims() || dims.contains(&0) {
        return Err(Error::InvalidDimension(format!(
            "{dims:?} for bound `{}`",
            kind.name()
        )));
    }
    let g = winter_g(eps);
    Ok(match kind {
        BoundKind::Entropy => eps * ln_dim(dims[0]) + g,
        BoundKind::ConditionalEntropy => 2.0 * eps * ln_dim(dims[0]) + g,
        BoundKind::MutualInformation => 2.0 * eps * ln_dim(dims[0].min(dims[1])) + 3.0 * g,
        BoundKind::MultiMutualInformation => {
            let n = dims.len() as f64;
            2.0 * eps * ln_all_but_largest(dims) + (n + 1.0) * g
        }
        BoundKind::Cmi => 2.0 * eps * ln_dim(dims[0].min(dims[2])) + 4.0 * g,
        BoundKind::MultiCmi | BoundKind::Secrecy => {
            let parts = &dims[..dims.len() - 1];
            let n = parts.len() as f64;
            2.0 * eps * ln_all_but_largest(parts) + 2.0 * n * g
        }
        BoundKind::InformationGap => {
            let n = dims.len() as f64;
            let c: f64 = dims.iter().map(|&d| ln_dim(d)).sum();
            2.0 * eps * c + 2.0 * (n + 1.0) * g
        }
        BoundKind::Interaction => {
            let p = 2f64.powi(dims.len() as i32);
            let dmin = *dims.iter().min().expect("nonempty");
            p * eps * ln_dim(dmin) + (p - 1.0) * g
        }
        BoundKind::EntropyGain => 2.0 * eps * ln_dim(dims[2]) + g,
    })
}

/// Quantity under test together with its bound.
#[derive(Clone, Debug)]
pub enum BoundTarget<T: Real> {
    Specialized {
        kind: BoundKind,
        dims: Vec<usize>,
        channel: Option<QuantumChannel<T>>,
    },
    Generic {
        spec: BoundSpec<T>,
        layout: SubsystemLayout,
    },
}

fn labels(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("{prefix}{i}")).collect()
}

impl<T: Real> BoundTarget<T> {
    /// For [`BoundKind::EntropyGain`] a channel of the requested Choi rank
    /// is drawn from `channel_seed`.
    pub fn specialized(kind: BoundKind, dims: &[usize], channel_seed: u64) -> Result<Self> {
        specialized_bound(kind, dims, 0.0)?;
        let channel = if kind == BoundKind::EntropyGain {
            let inl = SubsystemLayout::new([("A", dims[0])])?;
            let outl = SubsystemLayout::new([("B", dims[1])])?;
            let ch =
                random_channel_with::<T, _>(&inl, &outl, dims[2], &mut rng_for(channel_seed, 0))?
                    .canonicalize();
            if ch.kraus().len() != dims[2] {
                return Err(Error::InvalidDimension(
                    "sampled channel has a different Choi rank".into(),
                ));
            }
            Some(ch)
        } else {
            None
        };
        Ok(Self::Specialized {
            kind,
            dims: dims.to_vec(),
            channel,
        })
    }

    pub fn generic(spec: BoundSpec<T>, layout: SubsystemLayout) -> Self {
        Self::Generic { spec, layout }
    }

    pub fn name(&self) -> String {
        match self {
            Self::Specialized { kind, .. } => kind.name().to_string(),
            Self::Generic { .. } => "generic".to_string(),
        }
    }

    /// Layout the sampled states must carry.
    pub fn layout(&self) -> Result<SubsystemLayout> {
        let Self::Specialized { kind, dims, .. } = self else {
            let Self::Generic { layout, .. } = self else {
                unreachable!()
            };
            return Ok(layout.clone());
        };
        let named = |names: Vec<String>, ds: &[usize]| {
            SubsystemLayout::new(names.into_iter().zip(ds.iter().copied()))
        };
        match kind {
            BoundKind::Entropy => named(vec!["A".into()], &dims[..1]),
            BoundKind::ConditionalEntropy | BoundKind::MutualInformation => {
                named(vec!["A".into(), "B".into()], &dims[..2])
            }
            BoundKind::Cmi => named(vec!["A".into(), "B".into(), "C".into()], &dims[..3]),
            BoundKind::MultiMutualInformation | BoundKind::Interaction => {
                named(labels("A", dims.len()), dims)
            }
            BoundKind::MultiCmi | BoundKind::Secrecy => {
                let mut names = labels("A", dims.len() - 1);
                names.push("B".into());
                named(names, dims)
            }
            BoundKind::InformationGap => {
                let mut f = Vec::new();
                for (i, &d) in dims.iter().enumerate() {
                    f.push((format!("A{}", i + 1), d));
                    f.push((format!("A{}'", i + 1), d));
                }
                SubsystemLayout::new(f)
            }
            BoundKind::EntropyGain => named(vec!["A".into()], &dims[..1]),
        }
    }

    pub fn evaluate(&self, s: &MultipartiteState<T>) -> Result<T> {
        let (kind, dims, channel) = match self {
            Self::Generic { spec, .. } => return spec.combo.value(s),
            Self::Specialized {
                kind,
                dims,
                channel,
            } => (*kind, dims, channel),
        };
        match kind {
            BoundKind::Entropy => von_neumann_entropy(s),
            BoundKind::ConditionalEntropy => conditional_entropy_ext(s, &["A"], &["B"]),
            BoundKind::MutualInformation => Ok(mutual_information(s, &[&["A"][..], &["B"]])?.value),
            BoundKind::Cmi => Ok(cmi(s, &["A"], &["C"], &["B"], CmiFormula::Direct)?.value),
            BoundKind::MultiMutualInformation => {
                let parts: Vec<Vec<String>> = labels("A", dims.len())
                    .into_iter()
                    .map(|l| vec![l])
                    .collect();
                Ok(mutual_information(s, &parts)?.value)
            }
            BoundKind::Interaction => {
                let parts: Vec<Vec<String>> = labels("A", dims.len())
                    .into_iter()
                    .map(|l| vec![l])
                    .collect();
                Ok(interaction_information(s, &parts)?.value)
            }
            BoundKind::MultiCmi | BoundKind::Secrecy => {
                let parts: Vec<Vec<String>> = labels("A", dims.len() - 1)
                    .into_iter()
                    .map(|l| vec![l])
                    .collect();
                let v = if kind == BoundKind::MultiCmi {
                    cmi_multipartite(s, &parts, &["B".to_string()])?
                } else {
                    secrecy_monotone(s, &parts, &["B".to_string()])?
                };
                Ok(v.value)
            }
            BoundKind::InformationGap => {
                let un: Vec<Vec<String>> = labels("A", dims.len())
                    .into_iter()
                    .map(|l| vec![l])
                    .collect();
                let pr: Vec<Vec<String>> = labels("A", dims.len())
                    .into_iter()
                    .map(|l| vec![format!("{l}'")])
                    .collect();
                Ok(information_gap_chain(s, &pr, &un)?.value)
            }
            BoundKind::EntropyGain => {
                let ch = channel
                    .as_ref()
                    .ok_or_else(|| Error::InvalidParameter("missing channel".into()))?;
                entropy_gain(ch, s, EntropyGainKind::OfChannel)
            }
        }
    }

    pub fn bound(&self, eps: T) -> Result<T> {
        match self {
            Self::Specialized { kind, dims, .. } => {
                Ok(T::lit(specialized_bound(*kind, dims, eps.as_f64())?))
            }
            Self::Generic { spec, .. } => generic_bound(spec, eps),
        }
    }
}

/// One sampled pair: `kind, seed, epsilon, delta_F, bound, ratio`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundRow {
    pub kind: String,
    pub seed: u64,
    pub epsilon: f64,
    #[serde(rename = "delta_F")]
    pub delta_f: f64,
    pub bound: f64,
    pub ratio: f64,
}

impl BoundRow {
    pub fn passes(&self) -> bool {
        self.delta_f <= self.bound + tolerances().bound
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub kind: String,
    pub rows: Vec<BoundRow>,
    pub max_ratio: f64,
    pub violations: usize,
    /// Pairs with `ε ≥ 1`, outside the bound's domain.
    pub skipped: usize,
}

impl BoundReport {
    pub fn pass(&self) -> bool {
        self.violations == 0
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        for r in &self.rows {
            w.serialize(r)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Seed of pair `index` under `seed` (SplitMix64 finalizer).
pub fn pair_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixture pairs: `ω¹` of random rank and `ω² = (1−t)ω¹ + tω'` with
/// `t ~ U(0,1)`, so `ε ≤ t < 1`. One pair in eight is identical.
pub fn mixture_pair<T: Real>(
    layout: &SubsystemLayout,
    rng: &mut ChaCha20Rng,
) -> Result<(MultipartiteState<T>, MultipartiteState<T>)> {
    use rand::Rng;
    let d = layout.total_dim();
    let w1 = random_state_with::<T, _>(layout, rng.random_range(1..=d), rng)?;
    if rng.random_range(0..8) == 0 {
        return Ok((w1.clone(), w1));
    }
    let other = random_state_with::<T, _>(layout, rng.random_range(1..=d), rng)?;
    let t: f64 = rng.random_range(0.0..1.0);
    let w2 = w1.mix(&other, T::lit(1.0 - t))?;
    Ok((w1, w2))
}

/// Samples `n_pairs` pairs (pair `i` from [`pair_seed`]`(seed, i)`) and checks
/// `|F(ω¹) − F(ω²)| ≤ bound(ε) + tol_bound`. Rows come back in pair order.
pub fn verify_bound<T, S>(
    target: &BoundTarget<T>,
    sampler: S,
    n_pairs: usize,
    seed: u64,
) -> Result<BoundReport>
where
    T: Real,
    S: Fn(
            &SubsystemLayout,
            &mut ChaCha20Rng,
        ) -> Result<(MultipartiteState<T>, MultipartiteState<T>)>
        + Sync,
{
    let layout = target.layout()?;
    let name = target.name();
    let rows: Vec<Option<BoundRow>> = (0..n_pairs as u64)
        .into_par_iter()
        .map(|i| {
            let ps = pair_seed(seed, i);
            let (w1, w2) = sampler(&layout, &mut rng_for(ps, 0))?;
            if w1.layout() != &layout || w2.layout() != &layout {
                return Err(Error::LayoutMismatch(format!(
                    "sampler produced {:?}",
                    w1.layout().factors()
                )));
            }
            let eps = trace_distance_half(&w1, &w2)?;
            if eps >= T::one() {
                return Ok(None);
            }
            let delta = (target.evaluate(&w1)? - target.evaluate(&w2)?)
                .abs()
                .as_f64();
            let bound = target.bound(eps)?.as_f64();
            let ratio = if bound > 0.0 {
                delta / bound
            } else if delta <= tolerances().bound {
                0.0
            } else {
                f64::INFINITY
            };
            Ok(Some(BoundRow {
                kind: name.clone(),
                seed: ps,
                epsilon: eps.as_f64(),
                delta_f: delta,
                bound,
                ratio,
            }))
        })
        .collect::<Result<_>>()?;
    let skipped = rows.iter().filter(|r| r.is_none()).count();
    let rows: Vec<BoundRow> = rows.into_iter().flatten().collect();
    let violations = rows.iter().filter(|r| !r.passes()).count();
    let max_ratio = rows.iter().fold(0.0, |m: f64, r| m.max(r.ratio));
    Ok(BoundReport {
        kind: name,
        rows,
        max_ratio,
        violations,
        skipped,
    })
}
