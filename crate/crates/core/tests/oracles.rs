//! Library results against independently computed references.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;

use qcorr::channels::{constrained_capacity, entropy_exchange, CapacityOptions, ConstraintSpec};
use qcorr::extension::{model_state, ModelState};
use qcorr::measures::{cmi, entropy_of_matrix, mutual_information, relative_entropy, CmiFormula};
use qcorr::random::{random_channel, random_pure_vector, rng_for};
use qcorr::recovery::{markov_check, recovery_search, MarkovVerdict, RecoveryOptions};
use qcorr::tensor::{fidelity, states, tensor_product, trace_distance_half};
use qcorr::{Channel, State, SubsystemLayout};

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn shannon(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

fn diag_state(p: &[f64], dims: &[usize]) -> State {
    let l = SubsystemLayout::new(["A", "B", "C"].into_iter().zip(dims.iter().copied())).unwrap();
    State::from_diagonal(p, l).unwrap()
}

/// `I(A:C|B)` of `p[a][b][c]` straight from Shannon entropies of the marginals.
fn classical_cmi(p: &[f64], (da, db, dc): (usize, usize, usize)) -> f64 {
    let idx = |a: usize, b: usize, c: usize| (a * db + b) * dc + c;
    let mut pab = vec![0.0; da * db];
    let mut pbc = vec![0.0; db * dc];
    let mut pb = vec![0.0; db];
    for a in 0..da {
        for b in 0..db {
            for c in 0..dc {
                let x = p[idx(a, b, c)];
                pab[a * db + b] += x;
                pbc[b * dc + c] += x;
                pb[b] += x;
            }
        }
    }
    shannon(&pab) + shannon(&pbc) - shannon(p) - shannon(&pb)
}

#[test]
fn classical_cmi_matches_shannon_oracle() {
    let mut r = rng_for(11, 0);
    for _ in 0..50 {
        let dims = (
            r.random_range(1..=3),
            r.random_range(1..=3),
            r.random_range(1..=3),
        );
        let n = dims.0 * dims.1 * dims.2;
        let mut p: Vec<f64> = (0..n).map(|_| r.random::<f64>()).collect();
        let z: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= z);
        let s = diag_state(&p, &[dims.0, dims.1, dims.2]);
        let lib = cmi(&s, &["A"], &["C"], &["B"], CmiFormula::Direct)
            .unwrap()
            .value;
        assert!((lib - classical_cmi(&p, dims)).abs() < 1e-12);
    }
}

#[test]
fn classical_markov_chain_is_recognized() {
    let mut r = rng_for(12, 0);
    let norm = |v: Vec<f64>| {
        let z: f64 = v.iter().sum();
        v.into_iter().map(|x| x / z).collect::<Vec<_>>()
    };
    let pa = norm((0..2).map(|_| r.random::<f64>()).collect());
    let pba: Vec<Vec<f64>> = (0..2)
        .map(|_| norm((0..3).map(|_| r.random::<f64>()).collect()))
        .collect();
    let pcb: Vec<Vec<f64>> = (0..3)
        .map(|_| norm((0..2).map(|_| r.random::<f64>()).collect()))
        .collect();
    let mut p = Vec::new();
    for a in 0..2 {
        for b in 0..3 {
            for pc in &pcb[b] {
                p.push(pa[a] * pba[a][b] * pc);
            }
        }
    }
    assert!(classical_cmi(&p, (2, 3, 2)).abs() < 1e-14);
    let s = diag_state(&p, &[2, 3, 2]);
    let rep = markov_check(&s, &["A"], &["B"], &["C"], &RecoveryOptions::default()).unwrap();
    assert_eq!(rep.verdict, MarkovVerdict::Markov);
    assert!(rep.petz_fidelity >= 1.0 - 1e-6);
}

#[test]
fn pure_state_marginal_spectra_match_schmidt_coefficients() {
    let mut r = rng_for(13, 0);
    for _ in 0..20 {
        let psi: DVector<Complex64> = random_pure_vector(8, &mut r);
        let s = State::pure(&psi, SubsystemLayout::qubits(&["A", "B", "C"]).unwrap()).unwrap();
        // reshape |ψ⟩ into a 4×2 matrix (AB row index, C column index)
        let m = DMatrix::from_fn(4, 2, |i, j| psi[i * 2 + j]);
        let mut schmidt: Vec<f64> = m
            .svd(false, false)
            .singular_values
            .iter()
            .map(|x| x * x)
            .collect();
        schmidt.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut ab: Vec<f64> = s.marginal(&["A", "B"]).unwrap().eigenvalues();
        ab.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let mut cc = s.marginal(&["C"]).unwrap().eigenvalues();
        cc.sort_by(|a, b| b.partial_cmp(a).unwrap());
        for k in 0..2 {
            assert!((ab[k] - schmidt[k]).abs() < 1e-10);
            assert!((cc[k] - schmidt[k]).abs() < 1e-10);
        }
        assert!(ab[2..].iter().all(|x| x.abs() < 1e-10));
    }
}

#[test]
fn isotropic_state_mutual_information_closed_form() {
    let bell: State = states::bell("A", "B").unwrap();
    let l = bell.layout().clone();
    for p in [0.0, 0.2, 0.5, 0.9, 1.0] {
        let s = bell.mix(&State::maximally_mixed(l.clone()), p).unwrap();
        let top = (1.0 + 3.0 * p) / 4.0;
        let rest = (1.0 - p) / 4.0;
        let exact = 2.0 * LN_2 - shannon(&[top, rest, rest, rest]);
        let mi = mutual_information(&s, &[&["A"][..], &["B"]]).unwrap().value;
        assert!((mi - exact).abs() < 1e-12, "p = {p}");
    }
}

#[test]
fn tmsv_marginal_is_thermal() {
    let r = 0.5f64;
    let s: State = model_state(&ModelState::Tmsv { r, cutoff: 12 }).unwrap();
    let a = s.marginal(&["A"]).unwrap();
    let t2 = r.tanh().powi(2);
    for n in 0..12 {
        let thermal = t2.powi(n as i32) * (1.0 - t2);
        assert!((a.matrix()[(n, n)].re - thermal).abs() < 1e-6, "n = {n}");
    }
}

#[test]
fn scalar_oracles_for_small_states() {
    let l = SubsystemLayout::new([("A", 2)]).unwrap();
    let mixed = State::maximally_mixed(l.clone());
    let zero = State::basis(l.clone(), &[0]).unwrap();
    assert!((fidelity(&mixed, &zero).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
    assert!((trace_distance_half(&mixed, &zero).unwrap() - 0.5).abs() < 1e-12);

    let sigma = State::from_diagonal(&[0.75, 0.25], l.clone()).unwrap();
    let d = relative_entropy(&mixed, &sigma).unwrap().value;
    assert!((d - (-LN_2 - 0.5 * 0.75f64.ln() - 0.5 * 0.25f64.ln())).abs() < 1e-12);
    assert!((d - 0.143_841_036_225_890_1).abs() < 1e-12);

    // extended entropy of the cone element ½·(I/2)
    let eta = |x: f64| -x * x.ln();
    let half = mixed.matrix() * c(0.5);
    assert!((entropy_of_matrix(&half).unwrap() - (2.0 * eta(0.25) - eta(0.5))).abs() < 1e-14);

    // Tr(ρ ⊗ σ) = Tr ρ · Tr σ for cone elements
    let a = mixed.scaled(0.3).unwrap();
    let b = State::maximally_mixed(SubsystemLayout::new([("B", 3)]).unwrap())
        .scaled(0.6)
        .unwrap();
    assert!((tensor_product(&a, &b).unwrap().trace() - 0.18).abs() < 1e-12);
}

#[test]
fn choi_spectrum_of_random_channels() {
    for (seed, (din, dout, k)) in [
        (1, (2, 2, 3)),
        (2, (3, 2, 2)),
        (3, (2, 3, 1)),
        (4, (3, 3, 5)),
    ] {
        let ch: Channel = random_channel(din, dout, k, seed).unwrap();
        // Choi matrix from the action on |i⟩⟨j|, independent of the Kraus layout
        let n = din * dout;
        let mut j = DMatrix::<Complex64>::zeros(n, n);
        for i in 0..din {
            for jj in 0..din {
                let mut e = DMatrix::<Complex64>::zeros(din, din);
                e[(i, jj)] = c(1.0);
                let out = ch.apply_matrix(&e);
                for x in 0..dout {
                    for y in 0..dout {
                        j[(i * dout + x, jj * dout + y)] = out[(x, y)];
                    }
                }
            }
        }
        let eig = j.clone().symmetric_eigenvalues();
        assert!(eig.iter().all(|&x| x > -1e-12));
        assert!((j.trace().re - din as f64).abs() < 1e-12);
        assert_eq!(eig.iter().filter(|&&x| x > 1e-10).count(), k);
        assert!((&j - ch.choi_matrix()).norm() < 1e-12);
    }
}

#[test]
fn dephasing_entropy_exchange_on_plus() {
    let l = SubsystemLayout::new([("A", 2)]).unwrap();
    let h = FRAC_1_SQRT_2;
    let id = DMatrix::<Complex64>::identity(2, 2) * c(h);
    let z = DMatrix::from_diagonal(&DVector::from_vec(vec![c(h), c(-h)]));
    let ch = Channel::new(vec![id, z], l.clone(), l.clone()).unwrap();
    let plus = State::pure(&DVector::from_vec(vec![c(h), c(h)]), l).unwrap();
    assert!((entropy_exchange(&ch, &plus).unwrap() - LN_2).abs() < 1e-12);
}

#[test]
fn capacity_of_identity_with_excitation_cost_matches_brute_force() {
    let l = SubsystemLayout::new([("A", 2)]).unwrap();
    let id = Channel::identity(&l);
    let f = DMatrix::from_diagonal(&DVector::from_vec(vec![c(0.0), c(1.0)]));
    let spec = ConstraintSpec::new(f, 0.5).unwrap();
    let r = constrained_capacity(
        &id,
        &spec,
        &CapacityOptions {
            restarts: 4,
            ..Default::default()
        },
    )
    .unwrap();
    // I(id, ρ) = 2H(ρ); coherences lower H, so scan diagonal states with ⟨1|ρ|1⟩ ≤ E
    let brute = (0..=5000)
        .map(|k| 0.5 * k as f64 / 5000.0)
        .map(|x| 2.0 * shannon(&[x, 1.0 - x]))
        .fold(0.0, f64::max);
    assert!((brute - 2.0 * LN_2).abs() < 1e-12);
    assert!((r.value - brute).abs() < 1e-4);
    assert!(r.constraint_value <= 0.5 + 1e-9);
}

#[test]
fn ghz_recovery_reaches_the_fidelity_bound() {
    let ghz: State = states::ghz(&["A", "B", "C"]).unwrap();
    let rep = recovery_search(&ghz, &["A"], &["B"], &["C"], &RecoveryOptions::default()).unwrap();
    assert!((rep.fr_lhs - FRAC_1_SQRT_2).abs() < 1e-12);
    assert!(rep.fidelity >= FRAC_1_SQRT_2 - 1e-6);
}
