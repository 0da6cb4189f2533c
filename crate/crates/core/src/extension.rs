//! Truncation sweeps: projector sequences refining to the identity, the
//! measure trajectories along them, the iterated CMI limit, projector
//! suprema, and finite-cutoff model states.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::measures::{cmi, mi2, von_neumann_entropy, CmiFormula};
use crate::random::{haar_unitary, random_state, rng_for};
use crate::scalar::{cr, CMat, CVec, Real};
use crate::tensor::{
    spectral_projector, truncate, MultipartiteState, ProjectorFamily, SubsystemLayout,
};
use crate::tolerance::tolerances;

/// How the projectors of one label are generated along the grid.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProjectorGenerator {
    /// Top eigenvectors of the state's marginal.
    Spectral { ranks: Vec<usize> },
    /// First computational basis vectors.
    Basis { ranks: Vec<usize> },
    /// Leading columns of a seeded Haar unitary, so the sequence is nested.
    RandomSubspace { ranks: Vec<usize>, seed: u64 },
}

impl ProjectorGenerator {
    pub fn ranks(&self) -> &[usize] {
        match self {
            Self::Spectral { ranks }
            | Self::Basis { ranks }
            | Self::RandomSubspace { ranks, .. } => ranks,
        }
    }
}

/// Per-label projector sequences `P^k_X`; labels without a generator keep
/// the identity. Every sequence is padded with full rank, so the last grid
/// point is always `Q = I`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruncationScheme {
    pub generators: BTreeMap<String, ProjectorGenerator>,
}

impl TruncationScheme {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, label: &str, generator: ProjectorGenerator) -> Self {
        self.generators.insert(label.to_string(), generator);
        self
    }

    pub fn spectral(labels: &[&str], ranks: &[usize]) -> Self {
        labels.iter().fold(Self::new(), |s, l| {
            s.with(
                l,
                ProjectorGenerator::Spectral {
                    ranks: ranks.to_vec(),
                },
            )
        })
    }

    /// Checks labels and that each rank list is strictly increasing within `[1, dim]`.
    pub fn validate(&self, layout: &SubsystemLayout) -> Result<()> {
        for (label, g) in &self.generators {
            let d = layout.dim_of(label)?;
            let r = g.ranks();
            if r.iter().any(|&x| x == 0 || x > d) {
                return Err(Error::OutOfRange(format!(
                    "ranks {r:?} for `{label}` must lie in 1..={d}"
                )));
            }
            if r.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "ranks {r:?} for `{label}` are not strictly increasing"
                )));
            }
        }
        Ok(())
    }

    fn padded(&self, label: &str, d: usize) -> Vec<usize> {
        let mut r = self
            .generators
            .get(label)
            .map(|g| g.ranks().to_vec())
            .unwrap_or_default();
        if r.last() != Some(&d) {
            r.push(d);
        }
        r
    }

    /// Number of grid points.
    pub fn grid_len(&self, layout: &SubsystemLayout) -> usize {
        layout
            .factors()
            .iter()
            .map(|(l, d)| self.padded(l, *d).len())
            .max()
            .unwrap_or(1)
            .max(1)
    }

    /// Rank of every layout label at grid point `k`.
    pub fn ranks_at(&self, layout: &SubsystemLayout, k: usize) -> Vec<(String, usize)> {
        layout
            .factors()
            .iter()
            .map(|(l, d)| {
                let r = self.padded(l, *d);
                (l.clone(), r[k.min(r.len() - 1)])
            })
            .collect()
    }

    /// `Q_k` for state `s` (spectral generators use the marginals of `s`).
    pub fn projectors<T: Real>(
        &self,
        s: &MultipartiteState<T>,
        k: usize,
    ) -> Result<ProjectorFamily<T>> {
        let layout = s.layout();
        let mut q = ProjectorFamily::identity();
        for (idx, (label, rank)) in self.ranks_at(layout, k).into_iter().enumerate() {
            let d = layout.dim_of(&label)?;
            if rank == d {
                continue;
            }
            let p = match self.generators.get(&label) {
                Some(ProjectorGenerator::Spectral { .. }) => spectral_projector(s, &label, rank)?,
                Some(ProjectorGenerator::Basis { .. }) => {
                    let diag: Vec<T> = (0..d)
                        .map(|i| if i < rank { T::one() } else { T::zero() })
                        .collect();
                    linalg::diag(&diag)
                }
                Some(ProjectorGenerator::RandomSubspace { seed, .. }) => {
                    let u: CMat<T> = haar_unitary(d, &mut rng_for(*seed, idx as u64));
                    let cols = u.columns(0, rank);
                    cols * cols.adjoint()
                }
                None => unreachable!("padded ranks are full without a generator"),
            };
            q.insert(label, p)?;
        }
        Ok(q)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub ranks: Vec<(String, usize)>,
    pub lambda: f64,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub points: Vec<SweepPoint>,
    /// Measure on the untruncated state.
    pub reference: f64,
    pub final_gap: f64,
    pub converged: bool,
}

impl SweepResult {
    /// Whether `λ_k` never decreases along the grid (up to `tol_num`).
    pub fn lambda_nondecreasing(&self) -> bool {
        let tol = tolerances().num;
        self.points
            .windows(2)
            .all(|w| w[1].lambda >= w[0].lambda - tol)
    }

    /// CSV with one `rank_<label>` column per factor, then `lambda, value`.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        if let Some(first) = self.points.first() {
            let mut header: Vec<String> = first
                .ranks
                .iter()
                .map(|(l, _)| format!("rank_{l}"))
                .collect();
            header.push("lambda".into());
            header.push("value".into());
            w.write_record(&header)?;
        }
        for p in &self.points {
            let mut rec: Vec<String> = p.ranks.iter().map(|(_, r)| r.to_string()).collect();
            rec.push(format!("{:e}", p.lambda));
            rec.push(format!("{:e}", p.value));
            w.write_record(&rec)?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }
}

/// Evaluates `measure` on `ω^k = Q_kωQ_k / λ_k` at every grid point and
/// compares the last value with `measure(ω)`.
pub fn faithfulness_sweep<T, F>(
    s: &MultipartiteState<T>,
    measure: F,
    scheme: &TruncationScheme,
) -> Result<SweepResult>
where
    T: Real,
    F: Fn(&MultipartiteState<T>) -> Result<T> + Sync,
{
    scheme.validate(s.layout())?;
    let reference = measure(s)?.as_f64();
    let n = scheme.grid_len(s.layout());
    let points: Vec<SweepPoint> = (0..n)
        .into_par_iter()
        .map(|k| {
            let q = scheme.projectors(s, k)?;
            let (t, lambda) = truncate(s, &q)?;
            Ok(SweepPoint {
                ranks: scheme.ranks_at(s.layout(), k),
                lambda: lambda.as_f64(),
                value: measure(&t)?.as_f64(),
            })
        })
        .collect::<Result<_>>()?;
    let last = points.last().expect("grid is nonempty").value;
    let final_gap = (last - reference).abs();
    Ok(SweepResult {
        points,
        reference,
        final_gap,
        converged: final_gap <= tolerances().conv,
    })
}

/// Sweep of `H(ω^k_X)` for the marginal on `subset`.
pub fn marginal_entropy_convergence<T: Real, S: AsRef<str> + Sync>(
    s: &MultipartiteState<T>,
    scheme: &TruncationScheme,
    subset: &[S],
) -> Result<SweepResult> {
    let keep: Vec<String> = subset.iter().map(|l| l.as_ref().to_string()).collect();
    faithfulness_sweep(s, |t| von_neumann_entropy(&t.marginal(&keep)?), scheme)
}

/// Smallest eigenvalue of `P_X ω_X P_X − λ ω^k_X` where `X = subset`; the
/// difference is PSD for any product projector `Q`.
pub fn truncation_domination_residual<T: Real, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    q: &ProjectorFamily<T>,
    subset: &[S],
) -> Result<T> {
    let (t, lambda) = truncate(s, q)?;
    let lhs = t.marginal(subset)?.matrix() * cr(lambda);
    let marg = s.marginal(subset)?;
    let px = q.restricted(marg.layout()).operator(marg.layout())?;
    let rhs = &px * marg.matrix() * &px;
    Ok(linalg::eigvalsh(&linalg::hermitize(&(rhs - lhs)))
        .last()
        .copied()
        .unwrap_or_else(T::zero))
}

fn full_rank_grid(ranks: &[usize], dmax: usize) -> Result<Vec<usize>> {
    if ranks.is_empty() || ranks.contains(&0) {
        return Err(Error::InvalidParameter(
            "rank grid must be nonempty and positive".into(),
        ));
    }
    if *ranks.last().unwrap() < dmax {
        return Err(Error::InvalidParameter(format!(
            "rank grid must end at full rank {dmax}"
        )));
    }
    Ok(ranks.to_vec())
}

fn spectral_family<T: Real>(
    s: &MultipartiteState<T>,
    labels: &[String],
    rank: usize,
) -> Result<ProjectorFamily<T>> {
    let mut q = ProjectorFamily::identity();
    for l in labels {
        let d = s.layout().dim_of(l)?;
        if rank < d {
            q.insert(l.clone(), spectral_projector(s, l, rank)?)?;
        }
    }
    Ok(q)
}

fn merge<T: Real>(a: &ProjectorFamily<T>, b: &ProjectorFamily<T>) -> Result<ProjectorFamily<T>> {
    let mut out = a.clone();
    for l in b.labels() {
        out.insert(l.to_string(), b.get(l).expect("listed label").clone())?;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoubleLimit {
    /// `grid[k][l] = I(A:C|B)` at outer rank `ranks_ac[k]`, inner rank `ranks_b[l]`.
    pub grid: Vec<Vec<f64>>,
    /// Inner (B) limit for each outer index.
    pub inner_limits: Vec<f64>,
    pub estimate: f64,
}

/// `lim_k lim_l I(A:C|B)` along spectral truncations, inner limit over `B`.
pub fn cmi_double_limit<T: Real, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    a: &[S],
    c: &[S],
    b: &[S],
    ranks_ac: &[usize],
    ranks_b: &[usize],
) -> Result<DoubleLimit> {
    let own = |x: &[S]| {
        x.iter()
            .map(|l| l.as_ref().to_string())
            .collect::<Vec<String>>()
    };
    let (a, c, b) = (own(a), own(c), own(b));
    let ac: Vec<String> = a.iter().chain(&c).cloned().collect();
    let dmax = |set: &[String]| -> Result<usize> {
        set.iter()
            .try_fold(1, |m, l| Ok::<usize, Error>(m.max(s.layout().dim_of(l)?)))
    };
    let ranks_ac = full_rank_grid(ranks_ac, dmax(&ac)?)?;
    let ranks_b = full_rank_grid(ranks_b, dmax(&b)?)?;
    let grid: Vec<Vec<f64>> = ranks_ac
        .par_iter()
        .map(|&rk| {
            let outer = spectral_family(s, &ac, rk)?;
            ranks_b
                .iter()
                .map(|&rl| {
                    let q = merge(&outer, &spectral_family(s, &b, rl)?)?;
                    let (t, _) = truncate(s, &q)?;
                    Ok(cmi(&t, &a, &c, &b, CmiFormula::Direct)?.value.as_f64())
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;
    let inner_limits: Vec<f64> = grid
        .iter()
        .map(|row| *row.last().expect("nonempty grid"))
        .collect();
    let estimate = *inner_limits.last().expect("nonempty grid");
    Ok(DoubleLimit {
        grid,
        inner_limits,
        estimate,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupremumSide {
    /// `sup_{P_A} [I(A:BC) − I(A:B)]` at `Q = P_A ⊗ I ⊗ I`.
    OverA,
    /// `sup_{P_C} [I(AB:C) − I(B:C)]` at `Q = I ⊗ I ⊗ P_C`.
    OverC,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupremumResult {
    pub ranks: Vec<usize>,
    /// Bracketed difference on the cone element `QωQ` at each rank.
    pub trajectory: Vec<f64>,
    pub running_max: Vec<f64>,
    pub value: f64,
}

/// Running maximum of the bracketed MI difference over spectral projectors
/// of increasing rank on `A` (or `C`). The ranks are padded with full rank.
pub fn ie_projector_supremum<T: Real, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    a: &[S],
    c: &[S],
    b: &[S],
    which: SupremumSide,
    ranks: &[usize],
) -> Result<SupremumResult> {
    let own = |x: &[S]| {
        x.iter()
            .map(|l| l.as_ref().to_string())
            .collect::<Vec<String>>()
    };
    let (a, c, b) = (own(a), own(c), own(b));
    cmi(s, &a, &c, &b, CmiFormula::Direct)?;
    let side = match which {
        SupremumSide::OverA => &a,
        SupremumSide::OverC => &c,
    };
    let dmax = side
        .iter()
        .try_fold(1, |m, l| Ok::<usize, Error>(m.max(s.layout().dim_of(l)?)))?;
    let mut grid: Vec<usize> = ranks
        .iter()
        .copied()
        .filter(|&r| r >= 1 && r < dmax)
        .collect();
    grid.sort_unstable();
    grid.dedup();
    grid.push(dmax);
    let ab: Vec<String> = a.iter().chain(&b).cloned().collect();
    let bc: Vec<String> = b.iter().chain(&c).cloned().collect();
    let trajectory: Vec<f64> = grid
        .par_iter()
        .map(|&r| {
            let q = spectral_family(s, side, r)?;
            let op = q.operator(s.layout())?;
            let cone = MultipartiteState::from_parts(&op * s.matrix() * &op, s.layout().clone());
            if cone.trace().as_f64() <= tolerances().num {
                return Err(Error::DegenerateTruncation(cone.trace().as_f64()));
            }
            let v = match which {
                SupremumSide::OverA => mi2(&cone, &a, &bc)? - mi2(&cone, &a, &b)?,
                SupremumSide::OverC => mi2(&cone, &ab, &c)? - mi2(&cone, &b, &c)?,
            };
            Ok(v.as_f64())
        })
        .collect::<Result<_>>()?;
    let mut running_max = Vec::with_capacity(trajectory.len());
    let mut m = f64::NEG_INFINITY;
    for &v in &trajectory {
        m = m.max(v);
        running_max.push(m);
    }
    Ok(SupremumResult {
        ranks: grid,
        trajectory,
        running_max,
        value: m,
    })
}

/// Finite-cutoff stand-ins for infinite-dimensional states.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelState {
    /// Two-mode squeezed vacuum `Σ_n tanhⁿ(r)/cosh(r) |n,n⟩` on `A ⊗ B`.
    Tmsv { r: f64, cutoff: usize },
    /// Gibbs state of one mode with mean photon number `mean` on `A`.
    Thermal { mean: f64, cutoff: usize },
    /// Induced random state on labels `A1, A2, …` with an ancilla of the given dimension.
    RandomInduced {
        dims: Vec<usize>,
        ancilla: usize,
        seed: u64,
    },
}

/// Renormalized cutoff probabilities of a thermal mode.
fn thermal_weights(mean: f64, cutoff: usize) -> Vec<f64> {
    let q = if mean > 0.0 { mean / (mean + 1.0) } else { 0.0 };
    let mut w: Vec<f64> = (0..cutoff).map(|n| q.powi(n as i32)).collect();
    let z: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= z);
    w
}

/// Entropy of the untruncated thermal state, `(n̄+1)ln(n̄+1) − n̄ ln n̄`.
pub fn thermal_entropy(mean: f64) -> f64 {
    if mean <= 0.0 {
        return 0.0;
    }
    (mean + 1.0) * (mean + 1.0).ln() - mean * mean.ln()
}

pub fn model_state<T: Real>(kind: &ModelState) -> Result<MultipartiteState<T>> {
    let check_cutoff = |c: usize| {
        if c < 2 {
            Err(Error::InvalidParameter(format!("cutoff {c} below 2")))
        } else {
            Ok(())
        }
    };
    match kind {
        ModelState::Tmsv { r, cutoff } => {
            check_cutoff(*cutoff)?;
            if !(*r >= 0.0) || !r.is_finite() {
                return Err(Error::InvalidParameter(
                    "squeezing must be finite and nonnegative".into(),
                ));
            }
            let layout = SubsystemLayout::new([("A", *cutoff), ("B", *cutoff)])?;
            let amps = thermal_weights(r.sinh().powi(2), *cutoff);
            let mut psi = CVec::<T>::zeros(cutoff * cutoff);
            for (n, p) in amps.iter().enumerate() {
                psi[n * cutoff + n] = cr(T::lit(p.sqrt()));
            }
            MultipartiteState::pure(&psi, layout)
        }
        ModelState::Thermal { mean, cutoff } => {
            check_cutoff(*cutoff)?;
            if !(*mean >= 0.0) || !mean.is_finite() {
                return Err(Error::InvalidParameter(
                    "mean photon number must be finite and nonnegative".into(),
                ));
            }
            let w: Vec<T> = thermal_weights(*mean, *cutoff)
                .into_iter()
                .map(T::lit)
                .collect();
            MultipartiteState::from_diagonal(&w, SubsystemLayout::new([("A", *cutoff)])?)
        }
        ModelState::RandomInduced {
            dims,
            ancilla,
            seed,
        } => {
            if dims.is_empty() || *ancilla == 0 {
                return Err(Error::InvalidParameter(
                    "random induced state needs dims and a positive ancilla".into(),
                ));
            }
            let layout = SubsystemLayout::new(
                dims.iter()
                    .enumerate()
                    .map(|(i, &d)| (format!("A{}", i + 1), d)),
            )?;
            let rank = (*ancilla).min(layout.total_dim());
            random_state(&layout, rank, *seed)
        }
    }
}
