//! Property registry and the fuzz driver.
//!
//! Every property maps a sample seed to a [`Sample`] whose `margin` is the
//! slack of the checked inequality (or tolerance minus deviation for
//! identities); a sample passes iff `margin ≥ 0`. The seed alone fixes the
//! dimensions and all random draws, so `(property, seed)` reproduces a run.

use rand::Rng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channels::{
    channel_mutual_information, entropy_exchange, triangle_margins, QuantumChannel,
};
use crate::continuity::{
    generic_bound, generic_bound_unrefined, mixture_pair, pair_seed, verify_bound,
    winter_interpolation, BoundKind, BoundSpec, BoundTarget, Concavity,
};
use crate::error::{Error, Result};
use crate::extension::{
    faithfulness_sweep, ie_projector_supremum, marginal_entropy_convergence,
    truncation_domination_residual, ProjectorGenerator, SupremumSide, TruncationScheme,
};
use crate::linalg;
use crate::measures::{
    cmi, cmi_all_formulas, cmi_conditioning_difference, cmi_multipartite, entropy_of_matrix,
    information_gap_chain, mutual_information, pure_tripartite_identity_check,
    secrecy_conditioning_difference, secrecy_monotone, von_neumann_entropy, CmiFormula,
    EntropicCombo,
};
use crate::random::{random_channel_with, random_pure_state, random_state_with, rng_for};
use crate::recovery::{petz_map, recovery_search, wilde_check, RecoveryOptions};
use crate::scalar::{binary_entropy, eta};
use crate::tensor::{
    fidelity, purify, states, tensor_product, trace_distance_half, MultipartiteState,
    SubsystemLayout,
};
use crate::tolerance::tolerances;

type State = MultipartiteState<f64>;

/// Outcome of one property evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub margin: f64,
    pub dims: Vec<usize>,
}

impl Sample {
    fn new(margin: f64, layout: &SubsystemLayout) -> Self {
        Self {
            margin,
            dims: layout.dims(),
        }
    }
}

pub struct Property {
    pub name: &'static str,
    pub module: &'static str,
    pub description: &'static str,
    run: fn(u64) -> Result<Sample>,
}

impl Property {
    pub fn run(&self, seed: u64) -> Result<Sample> {
        (self.run)(seed)
    }
}

macro_rules! prop {
    ($name:expr, $module:expr, $desc:expr, $f:expr) => {
        Property {
            name: $name,
            module: $module,
            description: $desc,
            run: $f,
        }
    };
}

pub fn registry() -> &'static [Property] {
    REGISTRY
}

pub fn property_names() -> Vec<&'static str> {
    REGISTRY.iter().map(|p| p.name).collect()
}

pub fn find_property(name: &str) -> Result<&'static Property> {
    REGISTRY
        .iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::UnknownName(name.into()))
}

/// Seed of sample `index` of `property` under the run seed.
pub fn sample_seed(property: &str, seed: u64, index: u64) -> u64 {
    // FNV-1a keeps the per-property streams stable across registry edits
    let h = property.bytes().fold(0xcbf2_9ce4_8422_2325u64, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    });
    pair_seed(seed ^ h, index)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub property: String,
    pub seed: u64,
    pub dims: Vec<usize>,
    pub margin: f64,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PropertyOutcome {
    pub property: String,
    pub samples: usize,
    pub passes: usize,
    pub failures: usize,
    /// Smallest margin seen (`+∞` with no samples).
    pub worst_margin: f64,
    pub worst_seed: Option<u64>,
    pub failing: Vec<FailureRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FuzzReport {
    pub seed: u64,
    pub budget: usize,
    pub outcomes: Vec<PropertyOutcome>,
}

impl FuzzReport {
    pub fn pass(&self) -> bool {
        self.outcomes.iter().all(|o| o.failures == 0)
    }

    pub fn failures(&self) -> impl Iterator<Item = &FailureRecord> {
        self.outcomes.iter().flat_map(|o| o.failing.iter())
    }

    /// `property, samples, passes, failures, worst_margin, worst_seed`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record([
            "property",
            "samples",
            "passes",
            "failures",
            "worst_margin",
            "worst_seed",
        ])?;
        for o in &self.outcomes {
            w.write_record([
                o.property.clone(),
                o.samples.to_string(),
                o.passes.to_string(),
                o.failures.to_string(),
                format!("{:e}", o.worst_margin),
                o.worst_seed.map(|s| s.to_string()).unwrap_or_default(),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Runs `budget` samples of each named property. Samples run in parallel and
/// are reported in index order.
pub fn fuzz<S: AsRef<str>>(properties: &[S], budget: usize, seed: u64) -> Result<FuzzReport> {
    let props = properties
        .iter()
        .map(|p| find_property(p.as_ref()))
        .collect::<Result<Vec<_>>>()?;
    let outcomes = props.iter().map(|p| run_outcome(p, budget, seed)).collect();
    Ok(FuzzReport {
        seed,
        budget,
        outcomes,
    })
}

fn run_outcome(p: &Property, budget: usize, seed: u64) -> PropertyOutcome {
    let results: Vec<(u64, Result<Sample>)> = (0..budget as u64)
        .into_par_iter()
        .map(|i| {
            let s = sample_seed(p.name, seed, i);
            (s, p.run(s))
        })
        .collect();
    let mut out = PropertyOutcome {
        property: p.name.to_string(),
        samples: budget,
        passes: 0,
        failures: 0,
        worst_margin: f64::INFINITY,
        worst_seed: None,
        failing: Vec::new(),
    };
    for (s, r) in results {
        let (margin, dims, error) = match r {
            Ok(sample) => (sample.margin, sample.dims, None),
            Err(e) => (f64::NEG_INFINITY, Vec::new(), Some(e.to_string())),
        };
        if margin < out.worst_margin || out.worst_seed.is_none() {
            out.worst_margin = margin;
            out.worst_seed = Some(s);
        }
        if margin >= 0.0 {
            out.passes += 1;
        } else {
            out.failures += 1;
            out.failing.push(FailureRecord {
                property: p.name.into(),
                seed: s,
                dims,
                margin,
                error,
            });
        }
    }
    out
}

fn rng(seed: u64) -> ChaCha20Rng {
    rng_for(seed, 0)
}

fn layout(labels: &[&str], dims: &[usize]) -> SubsystemLayout {
    SubsystemLayout::new(labels.iter().copied().zip(dims.iter().copied())).expect("valid layout")
}

fn dims_in(rng: &mut ChaCha20Rng, n: usize, lo: usize, hi: usize) -> Vec<usize> {
    (0..n).map(|_| rng.random_range(lo..=hi)).collect()
}

fn any_state(l: &SubsystemLayout, rng: &mut ChaCha20Rng) -> Result<State> {
    let rank = rng.random_range(1..=l.total_dim());
    random_state_with(l, rank, rng)
}

fn full_state(l: &SubsystemLayout, rng: &mut ChaCha20Rng) -> Result<State> {
    random_state_with(l, l.total_dim(), rng)
}

fn local_channel(label: &str, d: usize, rng: &mut ChaCha20Rng) -> Result<QuantumChannel<f64>> {
    let l = layout(&[label], &[d]);
    let k = rng.random_range(1..=d * d);
    random_channel_with(&l, &l, k, rng)
}

fn apply_locals(s: &State, labels: &[&str], rng: &mut ChaCha20Rng) -> Result<State> {
    let mut out = s.clone();
    for l in labels {
        let d = s.layout().dim_of(l)?;
        out = local_channel(l, d, rng)?.apply_local(&out)?;
    }
    Ok(out)
}

fn singles(labels: &[&str]) -> Vec<Vec<String>> {
    labels.iter().map(|l| vec![l.to_string()]).collect()
}

fn mi(s: &State, a: &[&str], b: &[&str]) -> Result<f64> {
    Ok(mutual_information(s, &[a, b])?.value)
}

fn cmi_abc(s: &State) -> Result<f64> {
    Ok(cmi(s, &["A"], &["C"], &["B"], CmiFormula::Direct)?.value)
}

fn qubits3(rng: &mut ChaCha20Rng) -> Result<State> {
    any_state(&layout(&["A", "B", "C"], &[2, 2, 2]), rng)
}

// ---------------------------------------------------------------- tensor core

fn p_partial_trace_product(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let d = dims_in(&mut r, 2, 2, 3);
    let a = any_state(&layout(&["A"], &d[..1]), &mut r)?;
    let t = r.random_range(0.2..=1.0);
    let b = any_state(&layout(&["B"], &d[1..]), &mut r)?.scaled(t)?;
    let ab = tensor_product(&a, &b)?;
    let dev = linalg::max_abs(&(ab.marginal(&["A"])?.matrix() - a.matrix() * crate::scalar::cr(t)));
    Ok(Sample::new(tolerances().num - dev, ab.layout()))
}

/// Scheme with a random generator and a random increasing rank grid per factor.
pub fn random_scheme(l: &SubsystemLayout, r: &mut ChaCha20Rng) -> TruncationScheme {
    let mut scheme = TruncationScheme::new();
    for (label, d) in l.factors() {
        let mut ranks: Vec<usize> = (1..*d).filter(|_| r.random_bool(0.5)).collect();
        ranks.push(*d);
        let g = match r.random_range(0..3) {
            0 => ProjectorGenerator::Spectral { ranks },
            1 => ProjectorGenerator::Basis { ranks },
            _ => ProjectorGenerator::RandomSubspace {
                ranks,
                seed: r.random(),
            },
        };
        scheme = scheme.with(label, g);
    }
    scheme
}

fn random_subset(labels: &[&str], r: &mut ChaCha20Rng) -> Vec<String> {
    let mut out: Vec<String> = labels
        .iter()
        .filter(|_| r.random_bool(0.5))
        .map(|l| l.to_string())
        .collect();
    if out.is_empty() {
        out.push(labels[r.random_range(0..labels.len())].to_string());
    }
    out
}

fn p_truncation_domination(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let labels = ["A", "B", "C"];
    let n = r.random_range(2..=3);
    let l = layout(&labels[..n], &dims_in(&mut r, n, 2, 3));
    let s = full_state(&l, &mut r)?;
    let scheme = random_scheme(&l, &mut r);
    let x = random_subset(&labels[..n], &mut r);
    let mut worst = f64::INFINITY;
    for k in 0..scheme.grid_len(&l) {
        let q = scheme.projectors(&s, k)?;
        worst = worst.min(truncation_domination_residual(&s, &q, &x)?);
    }
    Ok(Sample::new(worst + tolerances().psd, &l))
}

fn p_fuchs_van_de_graaf(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let l = layout(&["A"], &[r.random_range(2..=6)]);
    let (a, b) = (any_state(&l, &mut r)?, any_state(&l, &mut r)?);
    let f = fidelity(&a, &b)?.min(1.0);
    let e = trace_distance_half(&a, &b)?;
    let m = (e - (1.0 - f)).min((1.0 - f * f).max(0.0).sqrt() - e);
    Ok(Sample::new(m + tolerances().num, &l))
}

fn p_purify_roundtrip(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let d = r.random_range(2..=8);
    let l = layout(&["A"], &[d]);
    let s = any_state(&l, &mut r)?;
    let back = purify(&s)?.marginal(&["A"])?;
    let dev = linalg::trace_norm_herm(&(back.matrix() - s.matrix()));
    Ok(Sample::new(1e-10 - dev, &l))
}

// ---------------------------------------------------------------- measures

fn p_concavity_supplement(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let l = layout(&["A"], &[r.random_range(2..=4)]);
    let rho = any_state(&l, &mut r)?.scaled(r.random_range(0.1..=1.0))?;
    let sigma = any_state(&l, &mut r)?.scaled(r.random_range(0.1..=1.0))?;
    let lam: f64 = r.random_range(0.01..0.99);
    let mix = rho.matrix() * crate::scalar::cr(lam) + sigma.matrix() * crate::scalar::cr(1.0 - lam);
    let (hr, hs, hm) = (
        entropy_of_matrix(rho.matrix())?,
        entropy_of_matrix(sigma.matrix())?,
        entropy_of_matrix(&mix)?,
    );
    let lower = lam * hr + (1.0 - lam) * hs;
    let upper = lower + rho.trace().max(sigma.trace()) * binary_entropy(lam);
    Ok(Sample::new(
        (hm - lower).min(upper - hm) + tolerances().num,
        &l,
    ))
}

fn mixing_margin(
    seed: u64,
    measure: fn(&State) -> Result<f64>,
    factor: f64,
    three: bool,
) -> Result<Sample> {
    let mut r = rng(seed);
    let l = if three {
        layout(&["A", "B", "C"], &[2, 2, 2])
    } else {
        layout(&["A", "B"], &dims_in(&mut r, 2, 2, 3))
    };
    let (a, b) = (any_state(&l, &mut r)?, any_state(&l, &mut r)?);
    let lam: f64 = r.random_range(0.01..0.99);
    let lhs = lam * measure(&a)? + (1.0 - lam) * measure(&b)?;
    let rhs = measure(&a.mix(&b, lam)?)? + factor * binary_entropy(lam);
    Ok(Sample::new(rhs - lhs + tolerances().num, &l))
}

fn p_mi_mixing(seed: u64) -> Result<Sample> {
    mixing_margin(seed, |s| mi(s, &["A"], &["B"]), 1.0, false)
}

fn p_cmi_mixing(seed: u64) -> Result<Sample> {
    mixing_margin(seed, cmi_abc, 2.0, true)
}

fn p_ssa(seed: u64) -> Result<Sample> {
    let s = qubits3(&mut rng(seed))?;
    Ok(Sample::new(cmi_abc(&s)? + 1e-9, s.layout()))
}

fn p_mi_extension(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let s = any_state(&layout(&["A", "B", "C"], &dims_in(&mut r, 3, 2, 3)), &mut r)?;
    let m = mi(&s, &["A"], &["B", "C"])? - mi(&s, &["A"], &["B"])?;
    Ok(Sample::new(m + tolerances().mono, s.layout()))
}

fn local_monotone(
    seed: u64,
    labels: &[&str],
    dims: (usize, usize),
    acted: &[&str],
    f: impl Fn(&State) -> Result<f64>,
) -> Result<Sample> {
    let mut r = rng(seed);
    let s = any_state(
        &layout(labels, &dims_in(&mut r, labels.len(), dims.0, dims.1)),
        &mut r,
    )?;
    let t = apply_locals(&s, acted, &mut r)?;
    Ok(Sample::new(f(&s)? - f(&t)? + tolerances().mono, s.layout()))
}

fn p_local_mi(seed: u64) -> Result<Sample> {
    local_monotone(seed, &["A", "B"], (2, 3), &["A", "B"], |s| {
        mi(s, &["A"], &["B"])
    })
}

fn p_local_multi_mi(seed: u64) -> Result<Sample> {
    let labels = ["A1", "A2", "A3"];
    local_monotone(seed, &labels, (2, 2), &labels, |s| {
        Ok(mutual_information(s, &singles(&labels))?.value)
    })
}

fn p_local_cmi(seed: u64) -> Result<Sample> {
    local_monotone(seed, &["A", "B", "C"], (2, 2), &["A", "C"], cmi_abc)
}

fn p_local_secrecy(seed: u64) -> Result<Sample> {
    let labels = ["A1", "A2", "A3", "B"];
    local_monotone(seed, &labels, (2, 2), &labels[..3], |s| {
        Ok(secrecy_monotone(s, &singles(&labels[..3]), &["B".to_string()])?.value)
    })
}

fn gap(s: &State, n: usize) -> Result<f64> {
    let un: Vec<Vec<String>> = (1..=n).map(|i| vec![format!("A{i}")]).collect();
    let pr: Vec<Vec<String>> = (1..=n).map(|i| vec![format!("A{i}'")]).collect();
    Ok(information_gap_chain(s, &pr, &un)?.value)
}

fn p_local_info_gap(seed: u64) -> Result<Sample> {
    local_monotone(
        seed,
        &["A1", "A1'", "A2", "A2'"],
        (2, 2),
        &["A1", "A2"],
        |s| gap(s, 2),
    )
}

fn p_additivity(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let x = any_state(&layout(&["A1", "B1", "C1"], &[2, 2, 2]), &mut r)?;
    let y = any_state(&layout(&["A2", "B2"], &dims_in(&mut r, 2, 2, 3)), &mut r)?;
    let xy = tensor_product(&x, &y)?;
    let mi_dev = (mi(&xy, &["A1", "A2"], &["B1", "B2"])?
        - mi(&x, &["A1"], &["B1"])?
        - mi(&y, &["A2"], &["B2"])?)
    .abs();
    let c = |s: &State, a: &[&str], c: &[&str], b: &[&str]| {
        Ok::<f64, Error>(cmi(s, a, c, b, CmiFormula::Direct)?.value)
    };
    let cmi_dev =
        (c(&xy, &["A1", "A2"], &["C1"], &["B1", "B2"])? - c(&x, &["A1"], &["C1"], &["B1"])?).abs();
    Ok(Sample::new(
        tolerances().num - mi_dev.max(cmi_dev),
        xy.layout(),
    ))
}

fn p_duality(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let l = layout(&["A", "B", "C", "D"], &[2, 2, 2, 2]);
    let s: State = random_pure_state(&l, &mut r)?;
    let dev: f64 = (cmi(&s, &["A"], &["C"], &["B"], CmiFormula::Direct)?.value
        - cmi(&s, &["A"], &["C"], &["D"], CmiFormula::Direct)?.value)
        .abs();
    Ok(Sample::new(tolerances().agree - dev, &l))
}

fn p_mi_chain(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let labels = ["A1", "A2", "A3", "A4"];
    let n = r.random_range(3..=4);
    let s = any_state(&layout(&labels[..n], &vec![2; n]), &mut r)?;
    let total = mutual_information(&s, &singles(&labels[..n]))?.value;
    let mut chain = 0.0;
    for k in 1..n {
        chain += mi(&s, &[labels[k]], &labels[..k])?;
    }
    Ok(Sample::new(
        tolerances().num - (total - chain).abs(),
        s.layout(),
    ))
}

fn p_cmi_conditioning(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let s = any_state(&layout(&["A1", "A2", "A3", "B"], &[2, 2, 2, 2]), &mut r)?;
    let parts = singles(&["A1", "A2", "A3"]);
    let b = ["B".to_string()];
    let direct = cmi_multipartite(&s, &parts, &b)?.value - mutual_information(&s, &parts)?.value;
    let dev = (direct - cmi_conditioning_difference(&s, &parts, &b)?).abs();
    Ok(Sample::new(tolerances().agree - dev, s.layout()))
}

fn p_secrecy_conditioning(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let s = any_state(&layout(&["A1", "A2", "A3", "B"], &[2, 2, 2, 2]), &mut r)?;
    let parts = singles(&["A1", "A2", "A3"]);
    let b = ["B".to_string()];
    let none: [String; 0] = [];
    let direct =
        secrecy_monotone(&s, &parts, &b)?.value - secrecy_monotone(&s, &parts, &none)?.value;
    let dev = (direct - secrecy_conditioning_difference(&s, &parts, &b)?).abs();
    Ok(Sample::new(tolerances().agree - dev, s.layout()))
}

fn p_mixing_lemma(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let s = qubits3(&mut r)?;
    let eps = [0.1, 0.5, 0.9][r.random_range(0..3)];
    let prod = tensor_product(&s.marginal(&["A", "B"])?, &s.marginal(&["C"])?)?;
    let mixed = s.mix(&prod, 1.0 - eps)?;
    Ok(Sample::new(
        (1.0 - eps) * cmi_abc(&s)? - cmi_abc(&mixed)? + tolerances().mono,
        s.layout(),
    ))
}

fn p_cmi_formulas(seed: u64) -> Result<Sample> {
    let s = qubits3(&mut rng(seed))?;
    let v = cmi_all_formulas(&s, &["A"], &["C"], &["B"])?;
    let spread = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
        - v.iter().cloned().fold(f64::INFINITY, f64::min);
    Ok(Sample::new(1e-8 - spread, s.layout()))
}

fn p_pure_identity(seed: u64) -> Result<Sample> {
    let l = layout(&["A", "B", "C"], &[2, 2, 2]);
    let s = random_pure_state(&l, &mut rng(seed))?;
    let (lhs, rhs): (f64, f64) = pure_tripartite_identity_check(&s, &["A"], &["B"], &["C"])?;
    Ok(Sample::new(1e-9 - (lhs - rhs).abs(), &l))
}

// ---------------------------------------------------------------- continuity

/// Dimensions for `kind` with every local dimension `d`.
pub fn bound_dims(kind: BoundKind, d: usize, n: usize) -> Vec<usize> {
    match kind {
        BoundKind::Entropy => vec![d],
        BoundKind::ConditionalEntropy | BoundKind::MutualInformation => vec![d, d],
        BoundKind::Cmi => vec![d, d, d],
        BoundKind::MultiMutualInformation | BoundKind::Interaction => vec![d; n],
        BoundKind::MultiCmi | BoundKind::Secrecy => vec![d; n + 1],
        BoundKind::InformationGap => vec![d; n],
        BoundKind::EntropyGain => vec![d, d, (d * d).min(3)],
    }
}

fn bound_sample(kind: BoundKind, seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let d = r.random_range(2..=3);
    let n = if d == 2 { 3 } else { 2 };
    let n = if kind == BoundKind::InformationGap {
        n - 1
    } else {
        n
    };
    let target = BoundTarget::<f64>::specialized(kind, &bound_dims(kind, d, n), r.random())?;
    let rep = verify_bound(&target, mixture_pair, 1, r.random())?;
    let m = rep
        .rows
        .first()
        .map_or(0.0, |row| row.bound + tolerances().bound - row.delta_f);
    Ok(Sample::new(m, &target.layout()?))
}

macro_rules! bound_prop {
    ($f:ident, $kind:expr) => {
        fn $f(seed: u64) -> Result<Sample> {
            bound_sample($kind, seed)
        }
    };
}
bound_prop!(p_bound_entropy, BoundKind::Entropy);
bound_prop!(p_bound_conditional_entropy, BoundKind::ConditionalEntropy);
bound_prop!(p_bound_mutual_information, BoundKind::MutualInformation);
bound_prop!(p_bound_multi_mi, BoundKind::MultiMutualInformation);
bound_prop!(p_bound_cmi, BoundKind::Cmi);
bound_prop!(p_bound_multi_cmi, BoundKind::MultiCmi);
bound_prop!(p_bound_secrecy, BoundKind::Secrecy);
bound_prop!(p_bound_information_gap, BoundKind::InformationGap);
bound_prop!(p_bound_interaction, BoundKind::Interaction);
bound_prop!(p_bound_entropy_gain, BoundKind::EntropyGain);

fn p_refinement(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let sets: [&[&str]; 6] = [
        &["A"],
        &["B"],
        &["C"],
        &["A", "B"],
        &["B", "C"],
        &["A", "B", "C"],
    ];
    let n = r.random_range(1..=4);
    let terms: Vec<(f64, Vec<&str>)> = (0..n)
        .map(|_| {
            (
                r.random_range(-2.0..2.0),
                sets[r.random_range(0..6)].to_vec(),
            )
        })
        .collect();
    let combo = EntropicCombo::new(terms)?;
    let conc = [Concavity::Concave, Concavity::Convex, Concavity::Neither][r.random_range(0..3)];
    let spec = BoundSpec::new(combo, r.random_range(0.1..3.0), conc)?;
    let eps: f64 = r.random_range(0.0..0.99);
    let m = generic_bound_unrefined(&spec, eps)? - generic_bound(&spec, eps)?;
    Ok(Sample::new(
        m + tolerances().num,
        &layout(&["A", "B", "C"], &[2, 2, 2]),
    ))
}

fn p_winter(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let l = layout(&["A", "B"], &dims_in(&mut r, 2, 2, 3));
    let (w1, w2) = mixture_pair::<f64>(&l, &mut r)?;
    let dec = match winter_interpolation(&w1, &w2) {
        Ok(dec) => dec,
        Err(Error::DegeneratePair) => return Ok(Sample::new(1e-12, &l)),
        Err(e) => return Err(e),
    };
    let (a, b) = dec.residuals(&w1, &w2);
    Ok(Sample::new(1e-12 - a.max(b), &l))
}

// ---------------------------------------------------------------- extension

fn p_sweep_diag_oracle(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let (da, db) = (r.random_range(2..=4), r.random_range(1..=3));
    let l = layout(&["A", "B"], &[da, db]);
    let mut p: Vec<f64> = (0..da * db).map(|_| r.random_range(0.01..1.0)).collect();
    let z: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= z);
    let s = MultipartiteState::from_diagonal(&p, l.clone())?;
    let ranks: Vec<usize> = (1..=da).collect();
    let res =
        marginal_entropy_convergence(&s, &TruncationScheme::spectral(&["A"], &ranks), &["A", "B"])?;
    // oracle: keep the rows `a` of the largest marginals p(a)
    let pa: Vec<f64> = (0..da)
        .map(|a| (0..db).map(|b| p[a * db + b]).sum())
        .collect();
    let mut order: Vec<usize> = (0..da).collect();
    order.sort_by(|&x, &y| pa[y].partial_cmp(&pa[x]).unwrap());
    let mut worst: f64 = 0.0;
    for (k, point) in res.points.iter().enumerate() {
        let kept: Vec<f64> = order[..k + 1]
            .iter()
            .flat_map(|&a| (0..db).map(move |b| a * db + b))
            .map(|i| p[i])
            .collect();
        let lam: f64 = kept.iter().sum();
        let h: f64 = kept.iter().map(|&x| eta(x / lam)).sum();
        worst = worst
            .max((h - point.value).abs())
            .max((lam - point.lambda).abs());
    }
    Ok(Sample::new(1e-12 - worst, &l))
}

fn p_sweep_final_gap(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let l = layout(&["A", "B", "C"], &dims_in(&mut r, 3, 2, 2));
    let s = any_state(&l, &mut r)?;
    let scheme = random_scheme(&l, &mut r);
    let res = faithfulness_sweep(&s, cmi_abc, &scheme)?;
    Ok(Sample::new(tolerances().conv - res.final_gap, &l))
}

fn p_supremum_le_cmi(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let l = layout(&["A", "B", "C"], &dims_in(&mut r, 3, 2, 3));
    let s = full_state(&l, &mut r)?;
    let c = cmi_abc(&s)?;
    let mut worst = f64::NEG_INFINITY;
    for side in [SupremumSide::OverA, SupremumSide::OverC] {
        let res = ie_projector_supremum(&s, &["A"], &["C"], &["B"], side, &[1, 2])?;
        worst = res.trajectory.iter().fold(worst, |m, &v| m.max(v));
    }
    Ok(Sample::new(c + tolerances().num - worst, &l))
}

// ---------------------------------------------------------------- channels

fn channel_draw(r: &mut ChaCha20Rng) -> Result<(QuantumChannel<f64>, SubsystemLayout)> {
    let (di, dout) = (r.random_range(2..=3), r.random_range(2..=3));
    let inl = layout(&["A"], &[di]);
    let k = r.random_range(1..=di * dout);
    let k = k.max(di.div_ceil(dout));
    Ok((
        random_channel_with(&inl, &layout(&["B"], &[dout]), k, r)?,
        inl,
    ))
}

fn p_triangle(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let (ch, l) = channel_draw(&mut r)?;
    let rho = any_state(&l, &mut r)?;
    let m = triangle_margins(&ch, &rho)?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(Sample::new(m + tolerances().num, &l))
}

fn p_channel_mi_concave(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let (ch, l) = channel_draw(&mut r)?;
    let (a, b) = (any_state(&l, &mut r)?, any_state(&l, &mut r)?);
    let lam: f64 = r.random_range(0.0..1.0);
    let m = channel_mutual_information(&ch, &a.mix(&b, lam)?)?
        - lam * channel_mutual_information(&ch, &a)?
        - (1.0 - lam) * channel_mutual_information(&ch, &b)?;
    Ok(Sample::new(m + tolerances().num, &l))
}

fn p_post_processing(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let (ch, l) = channel_draw(&mut r)?;
    let dout = ch.out_layout().total_dim();
    let post = local_channel("B", dout, &mut r)?;
    let rho = any_state(&l, &mut r)?;
    let m = channel_mutual_information(&ch, &rho)?
        - channel_mutual_information(&ch.then(&post)?, &rho)?;
    Ok(Sample::new(m + tolerances().num, &l))
}

fn p_pure_exchange(seed: u64) -> Result<Sample> {
    let mut r = rng(seed);
    let (ch, l) = channel_draw(&mut r)?;
    let rho = random_pure_state(&l, &mut r)?;
    let dev = (von_neumann_entropy(&ch.apply(&rho)?)? - entropy_exchange(&ch, &rho)?).abs();
    Ok(Sample::new(tolerances().num - dev, &l))
}

// ---------------------------------------------------------------- recovery

fn p_fr_inequality(seed: u64) -> Result<Sample> {
    let s = qubits3(&mut rng(seed))?;
    let rep = recovery_search(
        &s,
        &["A"],
        &["B"],
        &["C"],
        &RecoveryOptions {
            seed,
            ..Default::default()
        },
    )?;
    Ok(Sample::new(
        rep.fidelity + tolerances().fr - rep.fr_lhs,
        s.layout(),
    ))
}

fn p_fr_marginals(seed: u64) -> Result<Sample> {
    let s = qubits3(&mut rng(seed))?;
    let rep = recovery_search(
        &s,
        &["A"],
        &["B"],
        &["C"],
        &RecoveryOptions {
            seed,
            ..Default::default()
        },
    )?;
    Ok(Sample::new(
        1e-8 - rep.marginal_residual_b.max(rep.marginal_residual_c),
        s.layout(),
    ))
}

/// Markov state: `ω_AB ⊗ ω_C`, or `Σ_j Π_j ω_AB Π_j ⊗ σ_j` with `Π_j` the
/// computational projectors on B.
fn markov_state(r: &mut ChaCha20Rng) -> Result<State> {
    let ab = any_state(&layout(&["A", "B"], &[2, 2]), r)?;
    let lc = layout(&["C"], &[2]);
    if r.random_bool(0.5) {
        return tensor_product(&ab, &any_state(&lc, r)?);
    }
    let mut m = crate::scalar::CMat::<f64>::zeros(8, 8);
    for j in 0..2 {
        let pj = linalg::kron(
            &linalg::identity(2),
            &linalg::diag(&[(1 - j) as f64, j as f64]),
        );
        let sigma = any_state(&lc, r)?;
        m += linalg::kron(&(&pj * ab.matrix() * &pj), sigma.matrix());
    }
    MultipartiteState::new(m, layout(&["A", "B", "C"], &[2, 2, 2]))
}

fn p_markov_petz(seed: u64) -> Result<Sample> {
    let s = markov_state(&mut rng(seed))?;
    let c = cmi_abc(&s)?;
    if c > 1e-10 {
        return Ok(Sample::new(0.0, s.layout()));
    }
    let petz = petz_map(&s.marginal(&["B", "C"])?, &s.marginal(&["B"])?)?;
    let rec = petz.apply_local(&s.marginal(&["A", "B"])?)?;
    let f = fidelity(&s, &rec)?;
    Ok(Sample::new(1e-8 - (1.0 - f), s.layout()))
}

fn p_exact_recovery_markov(seed: u64) -> Result<Sample> {
    let s = markov_state(&mut rng(seed))?;
    Ok(Sample::new(1e-8 - cmi_abc(&s)?, s.layout()))
}

fn paired(r: &mut ChaCha20Rng) -> Result<State> {
    any_state(&layout(&["A1", "A1'", "A2", "A2'"], &[2, 2, 2, 2]), r)
}

fn wilde(seed: u64) -> Result<(crate::recovery::WildeReport, State)> {
    let s = paired(&mut rng(seed))?;
    let rep = wilde_check(
        &s,
        &[&["A1"][..], &["A2"]],
        &[&["A1'"][..], &["A2'"]],
        None,
        &RecoveryOptions {
            seed,
            ..Default::default()
        },
    )?;
    Ok((rep, s))
}

fn p_wilde(seed: u64) -> Result<Sample> {
    let (rep, s) = wilde(seed)?;
    Ok(Sample::new(
        rep.delta_i + tolerances().fr - rep.rhs,
        s.layout(),
    ))
}

fn p_recovery_info_gap(seed: u64) -> Result<Sample> {
    let (rep, s) = wilde(seed)?;
    Ok(Sample::new(
        rep.delta_i + tolerances().num - rep.reconstructed_delta_i,
        s.layout(),
    ))
}

fn p_exact_checkpoints(_seed: u64) -> Result<Sample> {
    let ln2 = std::f64::consts::LN_2;
    let bell = states::bell::<f64>("A", "B")?;
    let ghz = states::ghz::<f64>(&["A", "B", "C"])?;
    let devs = [
        mi(&bell, &["A"], &["B"])? - 2.0 * ln2,
        cmi_abc(&ghz)? - ln2,
        crate::measures::interaction_information(&ghz, &singles(&["A", "B", "C"]))?.value,
    ];
    let m = devs.iter().fold(f64::NEG_INFINITY, |a, d| a.max(d.abs()));
    Ok(Sample::new(1e-10 - m, ghz.layout()))
}

static REGISTRY: &[Property] = &[
    prop!(
        "partial-trace-product",
        "tensor-core",
        "Tr_B(a⊗b) = Tr(b)·a",
        p_partial_trace_product
    ),
    prop!(
        "truncation-domination",
        "tensor-core",
        "λ ω^k_X ⪯ P_X ω_X P_X at every grid point",
        p_truncation_domination
    ),
    prop!(
        "fuchs-van-de-graaf",
        "tensor-core",
        "1 − F ≤ ε ≤ √(1 − F²)",
        p_fuchs_van_de_graaf
    ),
    prop!(
        "purify-roundtrip",
        "tensor-core",
        "marginal of the purification returns the state",
        p_purify_roundtrip
    ),
    prop!(
        "exact-checkpoints",
        "entropic-measures",
        "Bell MI, GHZ CMI and GHZ I₃",
        p_exact_checkpoints
    ),
    prop!(
        "concavity-supplement",
        "entropic-measures",
        "two-sided concavity of the extended entropy",
        p_concavity_supplement
    ),
    prop!(
        "mi-mixing",
        "entropic-measures",
        "λI_ρ + (1−λ)I_σ ≤ I_mix + h₂(λ)",
        p_mi_mixing
    ),
    prop!(
        "cmi-mixing",
        "entropic-measures",
        "λI_ρ + (1−λ)I_σ ≤ I_mix + 2h₂(λ) for CMI",
        p_cmi_mixing
    ),
    prop!("ssa", "entropic-measures", "I(A:C|B) ≥ 0", p_ssa),
    prop!(
        "mi-extension",
        "entropic-measures",
        "I(A:BC) ≥ I(A:B)",
        p_mi_extension
    ),
    prop!(
        "local-channel-mi",
        "entropic-measures",
        "local channels do not increase I(A:B)",
        p_local_mi
    ),
    prop!(
        "local-channel-multi-mi",
        "entropic-measures",
        "local channels do not increase I(A1:A2:A3)",
        p_local_multi_mi
    ),
    prop!(
        "local-channel-cmi",
        "entropic-measures",
        "channels on A and C do not increase I(A:C|B)",
        p_local_cmi
    ),
    prop!(
        "local-channel-secrecy",
        "entropic-measures",
        "channels on the A_i do not increase S_n",
        p_local_secrecy
    ),
    prop!(
        "local-channel-info-gap",
        "entropic-measures",
        "channels on the A_i do not increase ΔI",
        p_local_info_gap
    ),
    prop!(
        "additivity",
        "entropic-measures",
        "MI and CMI add over tensor products",
        p_additivity
    ),
    prop!(
        "duality-pure",
        "entropic-measures",
        "I(A:C|B) = I(A:C|D) on pure ABCD",
        p_duality
    ),
    prop!(
        "mi-chain",
        "entropic-measures",
        "multipartite MI equals its chain expansion",
        p_mi_chain
    ),
    prop!(
        "cmi-conditioning",
        "entropic-measures",
        "conditioning difference of multipartite CMI",
        p_cmi_conditioning
    ),
    prop!(
        "secrecy-conditioning",
        "entropic-measures",
        "conditioning difference of S_n",
        p_secrecy_conditioning
    ),
    prop!(
        "mixing-lemma",
        "entropic-measures",
        "CMI of (1−ε)ω + εω_AB⊗ω_C ≤ (1−ε) I(A:C|B)_ω",
        p_mixing_lemma
    ),
    prop!(
        "cmi-formulas",
        "entropic-measures",
        "five CMI formulas agree",
        p_cmi_formulas
    ),
    prop!(
        "pure-identity",
        "entropic-measures",
        "I(A:B) + I(B:C) = 2H(B) on pure states",
        p_pure_identity
    ),
    prop!(
        "bound-entropy",
        "continuity-bounds",
        "entropy continuity bound",
        p_bound_entropy
    ),
    prop!(
        "bound-conditional-entropy",
        "continuity-bounds",
        "conditional entropy bound",
        p_bound_conditional_entropy
    ),
    prop!(
        "bound-mutual-information",
        "continuity-bounds",
        "mutual information bound",
        p_bound_mutual_information
    ),
    prop!(
        "bound-multi-mutual-information",
        "continuity-bounds",
        "multipartite MI bound",
        p_bound_multi_mi
    ),
    prop!("bound-cmi", "continuity-bounds", "CMI bound", p_bound_cmi),
    prop!(
        "bound-multi-cmi",
        "continuity-bounds",
        "multipartite CMI bound",
        p_bound_multi_cmi
    ),
    prop!(
        "bound-secrecy",
        "continuity-bounds",
        "secrecy monotone bound",
        p_bound_secrecy
    ),
    prop!(
        "bound-information-gap",
        "continuity-bounds",
        "information gap bound",
        p_bound_information_gap
    ),
    prop!(
        "bound-interaction",
        "continuity-bounds",
        "interaction information bound",
        p_bound_interaction
    ),
    prop!(
        "bound-entropy-gain",
        "continuity-bounds",
        "entropy gain bound",
        p_bound_entropy_gain
    ),
    prop!(
        "bound-refinement",
        "continuity-bounds",
        "refined generic bound ≤ unrefined",
        p_refinement
    ),
    prop!(
        "winter-interpolation",
        "continuity-bounds",
        "ω* decomposition residuals",
        p_winter
    ),
    prop!(
        "sweep-diag-oracle",
        "extension-engine",
        "spectral sweep on classical states",
        p_sweep_diag_oracle
    ),
    prop!(
        "sweep-final-gap",
        "extension-engine",
        "sweep converges at full rank",
        p_sweep_final_gap
    ),
    prop!(
        "supremum-le-cmi",
        "extension-engine",
        "projector supremum never exceeds the CMI",
        p_supremum_le_cmi
    ),
    prop!(
        "triangle",
        "channels",
        "three triangle inequalities",
        p_triangle
    ),
    prop!(
        "channel-mi-concave",
        "channels",
        "I(Φ,ρ) concave in ρ",
        p_channel_mi_concave
    ),
    prop!(
        "post-processing",
        "channels",
        "I(Ψ∘Φ,ρ) ≤ I(Φ,ρ)",
        p_post_processing
    ),
    prop!(
        "pure-exchange",
        "channels",
        "H(Φ(ρ)) = entropy exchange for pure ρ",
        p_pure_exchange
    ),
    prop!(
        "fr-inequality",
        "recovery",
        "e^{−cmi/2} ≤ achieved fidelity",
        p_fr_inequality
    ),
    prop!(
        "fr-marginals",
        "recovery",
        "fixed-up channel reproduces both marginals",
        p_fr_marginals
    ),
    prop!(
        "markov-petz",
        "recovery",
        "zero CMI ⇒ Petz recovers",
        p_markov_petz
    ),
    prop!(
        "exact-recovery-markov",
        "recovery",
        "classical-record Markov states have zero CMI",
        p_exact_recovery_markov
    ),
    prop!("wilde", "recovery", "ΔI ≥ ‖ω − rec‖₁²/4n²", p_wilde),
    prop!(
        "recovery-info-gap",
        "recovery",
        "local recovery does not increase ΔI",
        p_recovery_info_gap
    ),
];
