use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use super::{channel_mutual_information, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg;
use crate::measures::entropy_of_matrix;
use crate::optim::{best_index, multi_start, AscentOptions};
use crate::random::ginibre;
use crate::scalar::{cr, cx, CMat, Real};
use crate::tensor::MultipartiteState;
use crate::tolerance::tolerances;

/// Input constraint `Tr Fρ ≤ E`.
#[derive(Clone, Debug)]
pub struct ConstraintSpec<T: Real> {
    f: CMat<T>,
    e: T,
}

impl<T: Real> ConstraintSpec<T> {
    pub fn new(f: CMat<T>, e: T) -> Result<Self> {
        let tol = tolerances();
        if !f.is_square() {
            return Err(Error::InvalidDimension(
                "constraint operator must be square".into(),
            ));
        }
        let dev = linalg::hermitian_deviation(&f).as_f64();
        if dev > tol.herm {
            return Err(Error::NotHermitian(dev));
        }
        let f = linalg::hermitize(&f);
        let min = linalg::eigvalsh(&f)
            .last()
            .copied()
            .unwrap_or_else(T::zero)
            .as_f64();
        if min < -tol.psd {
            return Err(Error::NotPsd(min));
        }
        if !(e > T::zero()) || !e.is_finite_value() {
            return Err(Error::InvalidParameter(
                "energy bound must be positive".into(),
            ));
        }
        Ok(Self { f, e })
    }

    /// `F = 0`, so every state is feasible.
    pub fn unconstrained(d: usize) -> Self {
        Self {
            f: CMat::zeros(d, d),
            e: T::one(),
        }
    }

    pub fn operator(&self) -> &CMat<T> {
        &self.f
    }

    pub fn energy(&self) -> T {
        self.e
    }

    pub fn value(&self, rho: &CMat<T>) -> T {
        (&self.f * rho).trace().re
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CapacityOptions {
    pub restarts: usize,
    pub seed: u64,
    pub ascent: AscentOptions,
}

impl Default for CapacityOptions {
    fn default() -> Self {
        Self {
            restarts: 16,
            seed: 0,
            ascent: AscentOptions::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CapacityResult<T: Real> {
    /// Best value of `I(Φ,ρ)` found, in nats.
    pub value: T,
    pub argmax: MultipartiteState<T>,
    /// `Tr Fρ` at the argmax.
    pub constraint_value: T,
    pub restarts: usize,
    pub iterations: Vec<usize>,
    pub best_per_restart: Vec<T>,
}

/// Maps unconstrained parameters to a feasible state: `ρ = LL†/Tr LL†`, then
/// mixed toward the ground state of `F` just enough to meet `Tr Fρ ≤ E`.
struct Parametrization<T: Real> {
    d: usize,
    f: CMat<T>,
    e: T,
    f_min: T,
    ground: CMat<T>,
}

impl<T: Real> Parametrization<T> {
    fn new(c: &ConstraintSpec<T>) -> Self {
        let eig = linalg::eigh(&c.f);
        let d = c.f.nrows();
        let v = eig.vectors.column(d - 1).into_owned();
        Self {
            d,
            f: c.f.clone(),
            e: c.e,
            f_min: eig.values[d - 1],
            ground: linalg::projector_from_vector(&v),
        }
    }

    fn state(&self, x: &[T]) -> CMat<T> {
        let d = self.d;
        let l = CMat::from_fn(d, d, |i, j| cx(x[2 * (i * d + j)], x[2 * (i * d + j) + 1]));
        let m = &l * l.adjoint();
        let tr = linalg::trace_re(&m);
        let rho = if tr > T::zero() {
            m * cr(T::one() / tr)
        } else {
            linalg::identity::<T>(d) * cr(T::one() / T::lit(d as f64))
        };
        let energy = (&self.f * &rho).trace().re;
        if energy <= self.e {
            return rho;
        }
        let t = (self.e - self.f_min) / (energy - self.f_min);
        rho * cr(t) + &self.ground * cr(T::one() - t)
    }

    fn params_of_identity(&self) -> Vec<T> {
        let d = self.d;
        let mut x = vec![T::zero(); 2 * d * d];
        for i in 0..d {
            x[2 * (i * d + i)] = T::one();
        }
        x
    }
}

/// `C_ea(Φ,F,E) = sup_{Tr Fρ ≤ E} I(Φ,ρ)` by multi-start local ascent.
///
/// Restart 0 starts from the maximally mixed state, the others from
/// Ginibre-random square roots. The value is the best found, so it is a
/// lower bound on the supremum.
pub fn constrained_capacity<T: Real>(
    ch: &QuantumChannel<T>,
    constraint: &ConstraintSpec<T>,
    opts: &CapacityOptions,
) -> Result<CapacityResult<T>> {
    if !ch.is_trace_preserving() {
        return Err(Error::NotAChannel(
            "capacity needs a trace-preserving map".into(),
        ));
    }
    let d = ch.in_layout().total_dim();
    if constraint.f.nrows() != d {
        return Err(Error::InvalidDimension(format!(
            "constraint is {}×{0}, channel input dim {d}",
            constraint.f.nrows()
        )));
    }
    if opts.restarts == 0 {
        return Err(Error::InvalidParameter(
            "at least one restart is required".into(),
        ));
    }
    let param = Parametrization::new(constraint);
    if param.f_min > constraint.e {
        return Err(Error::Infeasible {
            min_eig: param.f_min.as_f64(),
            energy: constraint.e.as_f64(),
        });
    }
    let comp = ch.complementary()?;
    let objective = |x: &[T]| -> T {
        let rho = param.state(x);
        let h = entropy_of_matrix(&rho).unwrap_or_else(|_| T::zero());
        let hb = entropy_of_matrix(&ch.apply_matrix(&rho)).unwrap_or_else(|_| T::zero());
        let he = entropy_of_matrix(&comp.apply_matrix(&rho)).unwrap_or_else(|_| T::zero());
        h + hb - he
    };
    let init = |i: usize, rng: &mut ChaCha20Rng| -> Vec<T> {
        if i == 0 {
            return param.params_of_identity();
        }
        let g: CMat<T> = ginibre(d, d, rng);
        (0..d * d)
            .flat_map(|k| [g[(k / d, k % d)].re, g[(k / d, k % d)].im])
            .collect()
    };
    let runs = multi_start(opts.restarts, opts.seed, init, objective, &opts.ascent);
    let best = best_index(&runs).expect("restarts > 0");
    let rho = param.state(&runs[best].x);
    let argmax = MultipartiteState::from_parts(rho, ch.in_layout().clone());
    let value = channel_mutual_information(ch, &argmax)?;
    Ok(CapacityResult {
        value,
        constraint_value: constraint.value(argmax.matrix()),
        argmax,
        restarts: opts.restarts,
        iterations: runs.iter().map(|r| r.iterations).collect(),
        best_per_restart: runs.iter().map(|r| r.value).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::SubsystemLayout;

    const LN2: f64 = std::f64::consts::LN_2;

    fn qubit() -> SubsystemLayout {
        SubsystemLayout::qubits(&["A"]).unwrap()
    }

    fn quick() -> CapacityOptions {
        CapacityOptions {
            restarts: 3,
            seed: 1,
            ascent: AscentOptions {
                max_iters: 100,
                ..Default::default()
            },
        }
    }

    #[test]
    fn identity_qubit_unconstrained() {
        let id = QuantumChannel::<f64>::identity(&qubit());
        let r = constrained_capacity(&id, &ConstraintSpec::unconstrained(2), &quick()).unwrap();
        assert!((r.value - 2.0 * LN2).abs() < 1e-4, "{}", r.value);
    }

    #[test]
    fn identity_qubit_with_excited_state_cost() {
        let id = QuantumChannel::<f64>::identity(&qubit());
        let f = linalg::diag(&[0.0, 1.0]);
        let c = ConstraintSpec::new(f, 0.5).unwrap();
        let r = constrained_capacity(&id, &c, &quick()).unwrap();
        assert!((r.value - 2.0 * LN2).abs() < 1e-4);
        assert!(r.constraint_value <= 0.5 + 1e-9);
    }

    #[test]
    fn binding_constraint_is_respected() {
        let id = QuantumChannel::<f64>::identity(&qubit());
        let c = ConstraintSpec::new(linalg::diag(&[0.0, 1.0]), 0.1).unwrap();
        let r = constrained_capacity(&id, &c, &quick()).unwrap();
        assert!(r.constraint_value <= 0.1 + 1e-9);
        let expected = 2.0 * crate::scalar::binary_entropy(0.1);
        assert!(
            (r.value - expected).abs() < 1e-4,
            "{} vs {expected}",
            r.value
        );
    }

    #[test]
    fn depolarizing_has_zero_capacity_and_infeasible_is_rejected() {
        let dep = QuantumChannel::<f64>::fully_depolarizing(&qubit(), &qubit());
        let r = constrained_capacity(&dep, &ConstraintSpec::unconstrained(2), &quick()).unwrap();
        assert!(r.value.abs() < 1e-8);
        let c = ConstraintSpec::new(linalg::identity::<f64>(2), 0.5).unwrap();
        assert!(matches!(
            constrained_capacity(&dep, &c, &quick()),
            Err(Error::Infeasible { .. })
        ));
    }
}
