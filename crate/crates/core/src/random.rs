//! Seeded random ensembles: Ginibre-induced states, Haar unitaries and
//! isometries, random channels.
//!
//! Every sampler takes either an explicit RNG or a `(seed, stream)` pair. The
//! stream index splits one seed into independent per-task generators, so
//! parallel runs draw the same numbers regardless of scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use crate::channels::QuantumChannel;
use crate::error::{Error, Result};
use crate::linalg;
use crate::scalar::{cr, cx, CMat, CVec, Real};
use crate::tensor::{MultipartiteState, SubsystemLayout};

/// Generator for task `stream` under `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Complex Ginibre matrix with i.i.d. standard complex normal entries.
pub fn ginibre<T: Real, R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat<T> {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_fn(rows, cols, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        cx(T::lit(re * s), T::lit(im * s))
    })
}

pub fn haar_unitary<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> CMat<T> {
    linalg::orthonormal_columns(ginibre(d, d, rng))
}

/// Haar-distributed isometry `C^cols → C^rows`.
pub fn haar_isometry<T: Real, R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> Result<CMat<T>> {
    if rows < cols || cols == 0 {
        return Err(Error::InvalidDimension(format!(
            "no isometry from dim {cols} into dim {rows}"
        )));
    }
    Ok(linalg::orthonormal_columns(ginibre(rows, cols, rng)))
}

pub fn random_pure_vector<T: Real, R: Rng + ?Sized>(d: usize, rng: &mut R) -> CVec<T> {
    let g: CMat<T> = ginibre(d, 1, rng);
    let v: CVec<T> = g.column(0).into_owned();
    let n = v.norm();
    v / cr(n)
}

/// Induced-measure state `GG†/Tr GG†` with `G` of shape `dim × rank`.
pub fn random_state_with<T: Real, R: Rng + ?Sized>(
    layout: &SubsystemLayout,
    rank: usize,
    rng: &mut R,
) -> Result<MultipartiteState<T>> {
    let d = layout.total_dim();
    if rank == 0 {
        return Err(Error::InvalidParameter("rank must be at least 1".into()));
    }
    if rank > d {
        return Err(Error::OutOfRange(format!("rank {rank} exceeds dim {d}")));
    }
    let g: CMat<T> = ginibre(d, rank, rng);
    let m = &g * g.adjoint();
    let tr = linalg::trace_re(&m);
    Ok(MultipartiteState::from_parts(
        m * cr(T::one() / tr),
        layout.clone(),
    ))
}

pub fn random_state<T: Real>(
    layout: &SubsystemLayout,
    rank: usize,
    seed: u64,
) -> Result<MultipartiteState<T>> {
    random_state_with(layout, rank, &mut rng_for(seed, 0))
}

pub fn random_pure_state<T: Real, R: Rng + ?Sized>(
    layout: &SubsystemLayout,
    rng: &mut R,
) -> Result<MultipartiteState<T>> {
    MultipartiteState::pure(&random_pure_vector(layout.total_dim(), rng), layout.clone())
}

/// Full-rank induced state.
pub fn random_full_state<T: Real, R: Rng + ?Sized>(
    layout: &SubsystemLayout,
    rng: &mut R,
) -> Result<MultipartiteState<T>> {
    random_state_with(layout, layout.total_dim(), rng)
}

/// Channel `ρ ↦ Tr_E VρV†` for a Haar isometry `V: in → out ⊗ E`, `dim E = choi_rank`.
pub fn random_channel_with<T: Real, R: Rng + ?Sized>(
    in_layout: &SubsystemLayout,
    out_layout: &SubsystemLayout,
    choi_rank: usize,
    rng: &mut R,
) -> Result<QuantumChannel<T>> {
    let (d_in, d_out) = (in_layout.total_dim(), out_layout.total_dim());
    if choi_rank == 0 {
        return Err(Error::InvalidParameter(
            "Choi rank must be at least 1".into(),
        ));
    }
    if d_out * choi_rank < d_in {
        return Err(Error::InvalidDimension(format!(
            "d_out·rank = {} below d_in = {d_in}",
            d_out * choi_rank
        )));
    }
    let v = haar_isometry::<T, _>(d_out * choi_rank, d_in, rng)?;
    let kraus = (0..choi_rank)
        .map(|j| CMat::from_fn(d_out, d_in, |b, i| v[(b * choi_rank + j, i)]))
        .collect();
    QuantumChannel::new(kraus, in_layout.clone(), out_layout.clone())
}

pub fn random_channel<T: Real>(
    d_in: usize,
    d_out: usize,
    choi_rank: usize,
    seed: u64,
) -> Result<QuantumChannel<T>> {
    let inl = SubsystemLayout::new([("in", d_in)])?;
    let outl = SubsystemLayout::new([("out", d_out)])?;
    random_channel_with(&inl, &outl, choi_rank, &mut rng_for(seed, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_states_are_reproducible() {
        let l = SubsystemLayout::qubits(&["A", "B"]).unwrap();
        let a = random_state::<f64>(&l, 3, 42).unwrap();
        let b = random_state::<f64>(&l, 3, 42).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let c = random_state::<f64>(&l, 3, 43).unwrap();
        assert_ne!(a.matrix(), c.matrix());
    }

    #[test]
    fn rank_one_is_pure() {
        let l = SubsystemLayout::qubits(&["A", "B"]).unwrap();
        let s = random_state::<f64>(&l, 1, 7).unwrap();
        assert!((s.purity() - 1.0).abs() < 1e-12);
        assert!(random_state::<f64>(&l, 0, 7).is_err());
        assert!(random_state::<f64>(&l, 5, 7).is_err());
    }

    #[test]
    fn streams_differ() {
        let mut a = rng_for(1, 0);
        let mut b = rng_for(1, 1);
        assert_ne!(a.random::<u64>(), b.random::<u64>());
    }

    #[test]
    fn mean_purity_matches_induced_moment() {
        // E[Tr ρ²] = (d + r)/(d r + 1) for the induced measure.
        let l = SubsystemLayout::qubits(&["A"]).unwrap();
        let mut rng = rng_for(2024, 0);
        let n = 10_000;
        let mean: f64 = (0..n)
            .map(|_| {
                random_state_with::<f64, _>(&l, 2, &mut rng)
                    .unwrap()
                    .purity()
            })
            .sum::<f64>()
            / n as f64;
        assert!((mean - 0.8).abs() < 1e-2, "{mean}");
    }

    #[test]
    fn channel_dimension_checks() {
        assert!(random_channel::<f64>(4, 1, 2, 0).is_err());
        let tr = random_channel::<f64>(2, 1, 2, 0).unwrap();
        assert!(tr.is_trace_preserving());
        let iso = random_channel::<f64>(2, 3, 1, 5).unwrap();
        assert_eq!(iso.choi_rank(), 1);
    }
}
