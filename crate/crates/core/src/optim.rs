//! Derivative-free local ascent with multi-start, shared by the capacity and
//! recovery searches.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::random::rng_for;
use crate::scalar::Real;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AscentOptions {
    pub max_iters: usize,
    /// Central-difference step.
    pub fd_step: f64,
    pub initial_step: f64,
    pub min_step: f64,
    /// Stop once an accepted step improves the objective by less than this.
    pub ftol: f64,
}

impl Default for AscentOptions {
    fn default() -> Self {
        Self {
            max_iters: 200,
            fd_step: 1e-6,
            initial_step: 0.1,
            min_step: 1e-10,
            ftol: 1e-13,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AscentResult<T> {
    pub x: Vec<T>,
    pub value: T,
    pub iterations: usize,
}

/// Central finite-difference gradient.
pub fn gradient<T: Real>(f: &impl Fn(&[T]) -> T, x: &[T], h: T) -> Vec<T> {
    let mut probe = x.to_vec();
    let two_h = h + h;
    (0..x.len())
        .map(|i| {
            let xi = probe[i];
            probe[i] = xi + h;
            let up = f(&probe);
            probe[i] = xi - h;
            let down = f(&probe);
            probe[i] = xi;
            (up - down) / two_h
        })
        .collect()
}

/// Normalized-gradient ascent with an adaptive step: a step that improves is
/// accepted and grown, otherwise the step is halved and retried.
pub fn ascend<T: Real>(f: impl Fn(&[T]) -> T, x0: Vec<T>, opts: &AscentOptions) -> AscentResult<T> {
    let mut x = x0;
    let mut value = f(&x);
    let mut step = T::lit(opts.initial_step);
    let min_step = T::lit(opts.min_step);
    let h = T::lit(opts.fd_step);
    let mut iterations = 0;
    while iterations < opts.max_iters {
        iterations += 1;
        let g = gradient(&f, &x, h);
        let norm = g.iter().fold(T::zero(), |a, &v| a + v * v).sqrt();
        if !(norm > T::zero()) || !norm.is_finite_value() {
            break;
        }
        let mut accepted = false;
        while step >= min_step {
            let cand: Vec<T> = x
                .iter()
                .zip(&g)
                .map(|(&xi, &gi)| xi + step * gi / norm)
                .collect();
            let v = f(&cand);
            if v > value {
                let gain = v - value;
                x = cand;
                value = v;
                step *= T::lit(1.5);
                accepted = true;
                if gain.as_f64() < opts.ftol {
                    return AscentResult {
                        x,
                        value,
                        iterations,
                    };
                }
                break;
            }
            step *= T::lit(0.5);
        }
        if !accepted {
            break;
        }
    }
    AscentResult {
        x,
        value,
        iterations,
    }
}

/// Runs [`ascend`] from `restarts` starting points. Start `i` is drawn by
/// `init(i, rng)` with the generator of stream `i` under `seed`; results come
/// back in restart order whatever the thread schedule.
pub fn multi_start<T, F, I>(
    restarts: usize,
    seed: u64,
    init: I,
    f: F,
    opts: &AscentOptions,
) -> Vec<AscentResult<T>>
where
    T: Real,
    F: Fn(&[T]) -> T + Sync,
    I: Fn(usize, &mut rand_chacha::ChaCha20Rng) -> Vec<T> + Sync,
{
    (0..restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng_for(seed, i as u64);
            ascend(&f, init(i, &mut rng), opts)
        })
        .collect()
}

/// Index of the best result; ties keep the earliest.
pub fn best_index<T: Real>(results: &[AscentResult<T>]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, r) in results.iter().enumerate() {
        match best {
            Some(b) if !(r.value > results[b].value) => {}
            _ => best = Some(i),
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn finds_maximum_of_concave_quadratic() {
        let f = |x: &[f64]| -(x[0] - 1.0).powi(2) - 2.0 * (x[1] + 0.5).powi(2);
        let r = ascend(f, vec![0.0, 0.0], &AscentOptions::default());
        assert!(r.value > -1e-8, "{r:?}");
        assert!((r.x[0] - 1.0).abs() < 1e-4 && (r.x[1] + 0.5).abs() < 1e-4);
    }

    #[test]
    fn multi_start_is_ordered_and_deterministic() {
        let f = |x: &[f64]| -(x[0] * x[0]);
        let init = |_: usize, rng: &mut rand_chacha::ChaCha20Rng| vec![rng.random_range(-3.0..3.0)];
        let a = multi_start(4, 9, init, f, &AscentOptions::default());
        let b = multi_start(4, 9, init, f, &AscentOptions::default());
        assert_eq!(a, b);
        assert_eq!(a.len(), 4);
        assert!(best_index(&a).is_some());
        assert!(best_index::<f64>(&[]).is_none());
    }
}
