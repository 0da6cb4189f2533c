//! Dense complex Hermitian kernels on raw matrices.
//!
//! Subsystem-aware routines take the factor dimensions explicitly; the labeled
//! wrappers live in [`crate::tensor`].

use nalgebra::DMatrix;
use num_complex::Complex;

use crate::scalar::{cr, modulus, CMat, Real};

/// Hermitian eigendecomposition with eigenvalues sorted in descending order.
#[derive(Clone, Debug)]
pub struct Eigh<T: Real> {
    pub values: Vec<T>,
    pub vectors: CMat<T>,
}

pub fn hermitize<T: Real>(m: &CMat<T>) -> CMat<T> {
    let half = cr(T::lit(0.5));
    (m + m.adjoint()) * half
}

/// Largest entrywise modulus of `m − m†`.
pub fn hermitian_deviation<T: Real>(m: &CMat<T>) -> T {
    let n = m.nrows();
    let mut dev = T::zero();
    for i in 0..n {
        for j in i..n {
            let d = modulus(m[(i, j)] - m[(j, i)].conj());
            if d > dev {
                dev = d;
            }
        }
    }
    dev
}

pub fn eigh<T: Real>(m: &CMat<T>) -> Eigh<T> {
    let e = hermitize(m).symmetric_eigen();
    let n = e.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        e.eigenvalues[b]
            .partial_cmp(&e.eigenvalues[a])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.cmp(&b))
    });
    let values = order.iter().map(|&i| e.eigenvalues[i]).collect();
    let vectors = CMat::from_fn(n, n, |r, c| e.eigenvectors[(r, order[c])]);
    Eigh { values, vectors }
}

/// Eigenvalues of a Hermitian matrix, descending.
pub fn eigvalsh<T: Real>(m: &CMat<T>) -> Vec<T> {
    let mut v: Vec<T> = hermitize(m)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    v.sort_by(|a, b| b.partial_cmp(a).unwrap_or(std::cmp::Ordering::Equal));
    v
}

/// `V diag(f(λ)) V†` for Hermitian `m`.
pub fn apply_fn<T: Real>(m: &CMat<T>, f: impl Fn(T) -> T) -> CMat<T> {
    let e = eigh(m);
    reassemble(&e, f)
}

pub fn reassemble<T: Real>(e: &Eigh<T>, f: impl Fn(T) -> T) -> CMat<T> {
    let n = e.values.len();
    let mut scaled = e.vectors.clone();
    for (c, &lam) in e.values.iter().enumerate() {
        let w = cr(f(lam));
        for r in 0..n {
            scaled[(r, c)] *= w;
        }
    }
    &scaled * e.vectors.adjoint()
}

/// Principal square root of a PSD matrix; eigenvalues below `floor` are zeroed.
pub fn psd_sqrt<T: Real>(m: &CMat<T>, floor: T) -> CMat<T> {
    apply_fn(m, |x| if x > floor { x.sqrt() } else { T::zero() })
}

/// Pseudo-inverse square root on the support (eigenvalues above `floor`).
pub fn psd_inv_sqrt<T: Real>(m: &CMat<T>, floor: T) -> CMat<T> {
    apply_fn(m, |x| {
        if x > floor {
            T::one() / x.sqrt()
        } else {
            T::zero()
        }
    })
}

/// Orthogonal projector onto the span of eigenvectors with eigenvalue above `floor`.
pub fn support_projector<T: Real>(m: &CMat<T>, floor: T) -> CMat<T> {
    apply_fn(m, |x| if x > floor { T::one() } else { T::zero() })
}

/// Positive part `[m]₊` of a Hermitian matrix.
pub fn positive_part<T: Real>(m: &CMat<T>) -> CMat<T> {
    apply_fn(m, |x| if x > T::zero() { x } else { T::zero() })
}

pub fn trace_re<T: Real>(m: &CMat<T>) -> T {
    (0..m.nrows()).fold(T::zero(), |acc, i| acc + m[(i, i)].re)
}

/// Trace norm of a Hermitian matrix.
pub fn trace_norm_herm<T: Real>(m: &CMat<T>) -> T {
    eigvalsh(m)
        .into_iter()
        .fold(T::zero(), |acc, x| acc + x.abs())
}

/// Trace norm of an arbitrary square matrix.
pub fn trace_norm<T: Real>(m: &CMat<T>) -> T {
    m.clone()
        .singular_values()
        .iter()
        .fold(T::zero(), |acc, &x| acc + x)
}

pub fn max_abs<T: Real>(m: &CMat<T>) -> T {
    m.iter().fold(
        T::zero(),
        |acc, z| if modulus(*z) > acc { modulus(*z) } else { acc },
    )
}

pub fn kron<T: Real>(a: &CMat<T>, b: &CMat<T>) -> CMat<T> {
    a.kronecker(b)
}

pub fn identity<T: Real>(n: usize) -> CMat<T> {
    CMat::identity(n, n)
}

/// Outer product `|v⟩⟨v|`.
pub fn projector_from_vector<T: Real>(v: &crate::scalar::CVec<T>) -> CMat<T> {
    v * v.adjoint()
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Partial trace keeping the factors at `keep` (original order preserved).
pub fn partial_trace<T: Real>(m: &CMat<T>, dims: &[usize], keep: &[usize]) -> CMat<T> {
    let total: usize = dims.iter().product();
    debug_assert_eq!(m.nrows(), total);
    let mut keep_sorted = keep.to_vec();
    keep_sorted.sort_unstable();
    keep_sorted.dedup();
    let traced: Vec<usize> = (0..dims.len())
        .filter(|i| !keep_sorted.contains(i))
        .collect();
    if traced.is_empty() {
        return m.clone();
    }
    let st = strides(dims);
    let kdims: Vec<usize> = keep_sorted.iter().map(|&i| dims[i]).collect();
    let tdims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
    let dk: usize = kdims.iter().product();
    let dt: usize = tdims.iter().product();
    let kst = strides(&kdims);
    let tst = strides(&tdims);
    // full[k * dt + t] = flat index in the original ordering
    let mut full = vec![0usize; total];
    for i in 0..total {
        let mut k = 0;
        let mut t = 0;
        for (pos, &f) in keep_sorted.iter().enumerate() {
            k += ((i / st[f]) % dims[f]) * kst[pos];
        }
        for (pos, &f) in traced.iter().enumerate() {
            t += ((i / st[f]) % dims[f]) * tst[pos];
        }
        full[k * dt + t] = i;
    }
    let mut out = CMat::<T>::zeros(dk, dk);
    for k1 in 0..dk {
        for k2 in 0..dk {
            let mut acc = Complex::new(T::zero(), T::zero());
            for t in 0..dt {
                acc += m[(full[k1 * dt + t], full[k2 * dt + t])];
            }
            out[(k1, k2)] = acc;
        }
    }
    out
}

/// Reorders tensor factors: new factor `j` is old factor `order[j]`.
pub fn permute_subsystems<T: Real>(m: &CMat<T>, dims: &[usize], order: &[usize]) -> CMat<T> {
    let map = permutation_map(dims, order);
    let n = map.len();
    let mut out = CMat::<T>::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(map[i], map[j])] = m[(i, j)];
        }
    }
    out
}

/// Old flat index to new flat index under the factor reordering `order`.
pub fn permutation_map(dims: &[usize], order: &[usize]) -> Vec<usize> {
    let total: usize = dims.iter().product();
    let st = strides(dims);
    let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let nst = strides(&new_dims);
    (0..total)
        .map(|i| {
            order
                .iter()
                .enumerate()
                .map(|(j, &o)| ((i / st[o]) % dims[o]) * nst[j])
                .sum()
        })
        .collect()
}

/// Real matrix embedded as complex.
pub fn from_real<T: Real>(m: &DMatrix<T>) -> CMat<T> {
    m.map(cr)
}

pub fn diag<T: Real>(values: &[T]) -> CMat<T> {
    let n = values.len();
    let mut m = CMat::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = cr(v);
    }
    m
}

/// Orthonormalizes the columns of `m` (thin QR with phases fixed so `R` has a
/// positive diagonal). Used for Haar sampling and isometry retraction.
pub fn orthonormal_columns<T: Real>(m: CMat<T>) -> CMat<T> {
    let (rows, cols) = m.shape();
    let qr = m.qr();
    let q = qr.q();
    let r = qr.r();
    let mut q = q.columns(0, cols.min(rows)).into_owned();
    for c in 0..q.ncols() {
        let d = r[(c, c)];
        let n = modulus(d);
        if n > T::zero() {
            let phase = d / cr(n);
            for row in 0..rows {
                q[(row, c)] *= phase;
            }
        }
    }
    q
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::cx;

    fn sample(n: usize, seed: u64) -> CMat<f64> {
        let mut s = seed;
        let mut next = move || {
            s = s
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        };
        let g = CMat::from_fn(n, n, |_, _| cx(next(), next()));
        &g * g.adjoint()
    }

    #[test]
    fn eigh_reconstructs_and_sorts() {
        let m = sample(5, 3);
        let e = eigh(&m);
        assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        let back = reassemble(&e, |x| x);
        assert!(max_abs(&(back - &m)) < 1e-12);
    }

    #[test]
    fn partial_trace_of_kron_matches_factor() {
        let a = sample(2, 1);
        let b = sample(3, 2);
        let c = sample(2, 9);
        let abc = kron(&kron(&a, &b), &c);
        let tb = trace_re(&b);
        let tc = trace_re(&c);
        let ac = partial_trace(&abc, &[2, 3, 2], &[0, 2]);
        let expect = kron(&a, &c) * cr(tb);
        assert!(max_abs(&(ac - expect)) < 1e-12);
        let b_only = partial_trace(&abc, &[2, 3, 2], &[1]);
        let expect_b = &b * cr(trace_re(&a) * tc);
        assert!(max_abs(&(b_only - expect_b)) < 1e-12);
    }

    #[test]
    fn permute_swaps_kron_factors() {
        let a = sample(2, 4);
        let b = sample(3, 5);
        let ab = kron(&a, &b);
        let ba = permute_subsystems(&ab, &[2, 3], &[1, 0]);
        assert!(max_abs(&(ba - kron(&b, &a))) < 1e-13);
    }

    #[test]
    fn sqrt_squares_back() {
        let m = sample(4, 8);
        let s = psd_sqrt(&m, 0.0);
        assert!(max_abs(&(&s * &s - &m)) < 1e-12);
    }

    #[test]
    fn orthonormal_columns_are_isometric() {
        let m = CMat::<f64>::from_fn(6, 3, |r, c| {
            cx(
                (r * 3 + c) as f64 * 0.37 % 1.0 - 0.4,
                (r + 2 * c) as f64 * 0.21 % 1.0,
            )
        });
        let q = orthonormal_columns(m);
        let g = q.adjoint() * &q;
        assert!(max_abs(&(g - CMat::identity(3, 3))) < 1e-12);
    }
}
