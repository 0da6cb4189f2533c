//! Recovery channels `B → BC`: the Petz map, a numerical search for channels
//! meeting the recovery fidelity bound, the marginal fixup, the Markov
//! characterization and the local-recovery bound on the information gap.

use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{trace_dump_kraus, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg;
use crate::measures::{cmi, information_gap_chain, CmiFormula};
use crate::optim::{best_index, multi_start, AscentOptions};
use crate::random::ginibre;
use crate::scalar::{cr, cx, CMat, Real};
use crate::tensor::MultipartiteState;
use crate::tolerance::tolerances;

fn owned<S: AsRef<str>>(x: &[S]) -> Vec<String> {
    x.iter().map(|l| l.as_ref().to_string()).collect()
}

/// `ρ ↦ ω_BC^{1/2}(ω_B^{-1/2} ρ ω_B^{-1/2} ⊗ I_C)ω_BC^{1/2}` on `supp ω_B`,
/// completed by a trace dump onto `ω_BC` outside the support.
///
/// The input layout is that of `omega_b`; the output lists the `B` labels
/// first, then the remaining labels of `omega_bc`.
pub fn petz_map<T: Real>(
    omega_bc: &MultipartiteState<T>,
    omega_b: &MultipartiteState<T>,
) -> Result<QuantumChannel<T>> {
    let tol = tolerances();
    let b = owned(&omega_b.labels());
    let c: Vec<String> = omega_bc
        .labels()
        .into_iter()
        .filter(|l| !b.iter().any(|x| x == l))
        .map(String::from)
        .collect();
    if c.is_empty() {
        return Err(Error::InvalidParameter("ω_BC has no C factor".into()));
    }
    if omega_b.trace().as_f64() <= tol.num {
        return Err(Error::InvalidTrace(omega_b.trace().as_f64()));
    }
    let bc = omega_bc.reordered(&[b.clone(), c].concat())?;
    let marg = bc.marginal(&b)?;
    if marg.layout() != omega_b.layout() {
        return Err(Error::LayoutMismatch(
            "ω_B layout differs from the B factors of ω_BC".into(),
        ));
    }
    if linalg::max_abs(&(marg.matrix() - omega_b.matrix())).as_f64() > tol.agree {
        return Err(Error::InvalidParameter(
            "ω_B is not the marginal of ω_BC".into(),
        ));
    }
    let (db, dbc) = (omega_b.dim(), bc.dim());
    let dc = dbc / db;
    let floor = T::lit(tol.supp);
    let inv = linalg::psd_inv_sqrt(omega_b.matrix(), floor);
    let sq = linalg::psd_sqrt(bc.matrix(), T::zero());
    let mut kraus: Vec<CMat<T>> = (0..dc)
        .map(|k| {
            let e = CMat::from_fn(
                dc,
                1,
                |i, _| if i == k { cr(T::one()) } else { cr(T::zero()) },
            );
            &sq * linalg::kron(&inv, &e)
        })
        .collect();
    // renormalize on the support so that Σ K†K is exactly the support projector
    let g = crate::channels::gram(&kraus);
    let fix = linalg::psd_inv_sqrt(&g, floor);
    kraus.iter_mut().for_each(|k| *k = &*k * &fix);
    let deficit = linalg::identity::<T>(db) - linalg::support_projector(&g, floor);
    if linalg::trace_re(&deficit).as_f64() > 0.5 {
        kraus.extend(trace_dump_kraus(
            &deficit,
            &(bc.matrix() * cr(T::one() / bc.trace())),
        ));
    }
    QuantumChannel::channel(kraus, omega_b.layout().clone(), bc.layout().clone())
}

/// Channel from [`marginal_fixup`]; `degenerate` marks the case where both
/// marginal residuals vanish and a fixed product state was used instead.
#[derive(Clone, Debug)]
pub struct Fixup<T: Real> {
    pub channel: QuantumChannel<T>,
    pub degenerate: bool,
}

/// `Φ(ρ) = Φ′(ρ) + [Tr ρ − Tr Φ′(ρ)] σ` with `σ ∝ (ω_B − X_B) ⊗ (ω_C − X_C)`
/// and `X = Φ′(ω_B)`. The output of `op` is read as `B ⊗ C` in that order.
pub fn marginal_fixup<T: Real>(
    op: &QuantumChannel<T>,
    omega_b: &MultipartiteState<T>,
    omega_c: &MultipartiteState<T>,
) -> Result<Fixup<T>> {
    let tol = tolerances();
    let (db, dc) = (omega_b.dim(), omega_c.dim());
    if op.in_layout().total_dim() != db || op.out_layout().total_dim() != db * dc {
        return Err(Error::InvalidDimension(
            "operation must map B to B ⊗ C".into(),
        ));
    }
    let x = op.apply_matrix(omega_b.matrix());
    let xb = linalg::partial_trace(&x, &[db, dc], &[0]);
    let xc = linalg::partial_trace(&x, &[db, dc], &[1]);
    let rb = linalg::hermitize(&(omega_b.matrix() - &xb));
    let rc = linalg::hermitize(&(omega_c.matrix() - &xc));
    for (name, r) in [("B", &rb), ("C", &rc)] {
        let min = linalg::eigvalsh(r)
            .last()
            .copied()
            .unwrap_or_else(T::zero)
            .as_f64();
        if min < -tol.psd {
            return Err(Error::Precondition(format!(
                "[Φ′(ω_B)]_{name} exceeds ω_{name} by {:e}",
                -min
            )));
        }
    }
    let (rb, rc) = (linalg::positive_part(&rb), linalg::positive_part(&rc));
    let (tb, tc) = (linalg::trace_re(&rb), linalg::trace_re(&rc));
    let degenerate = tb.as_f64() <= tol.num || tc.as_f64() <= tol.num;
    let sigma = if degenerate {
        linalg::kron(omega_b.matrix(), omega_c.matrix())
            * cr(T::one() / (omega_b.trace() * omega_c.trace()))
    } else {
        linalg::kron(&rb, &rc) * cr(T::one() / (tb * tc))
    };
    let deficit = linalg::hermitize(&(linalg::identity::<T>(db) - op.kraus_gram()));
    let mut kraus = op.kraus().to_vec();
    if linalg::max_abs(&deficit).as_f64() > tol.cptp {
        kraus.extend(trace_dump_kraus(&deficit, &sigma));
    }
    let channel = QuantumChannel::channel(kraus, op.in_layout().clone(), op.out_layout().clone())?;
    Ok(Fixup {
        channel,
        degenerate,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RecoveryOptions {
    pub restarts: usize,
    pub seed: u64,
    pub ascent: AscentOptions,
    /// Skip the search when the Petz map already meets the fidelity bound.
    pub early_exit: bool,
}

impl Default for RecoveryOptions {
    fn default() -> Self {
        Self {
            restarts: 4,
            seed: 0,
            ascent: AscentOptions {
                max_iters: 60,
                ..Default::default()
            },
            early_exit: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct RecoveryReport<T: Real> {
    /// Recovery channel `B → BC`, output ordered `B` then `C`.
    pub channel: QuantumChannel<T>,
    /// `F(ω_ABC, id_A ⊗ Φ(ω_AB))`.
    pub fidelity: T,
    /// `I(A:C|B)` in nats.
    pub cmi: T,
    /// `e^{−cmi/2}`.
    pub fr_lhs: T,
    /// `‖[Φ(ω_B)]_B − ω_B‖₁`.
    pub marginal_residual_b: T,
    /// `‖[Φ(ω_B)]_C − ω_C‖₁`.
    pub marginal_residual_c: T,
    pub petz_fidelity: T,
    /// Whether the multi-start ascent ran.
    pub searched: bool,
    /// Whether the marginal fixup hit its degenerate branch.
    pub fixup_degenerate: bool,
    /// Whether the marginal fixup could be applied at all.
    pub fixed_up: bool,
}

impl<T: Real> RecoveryReport<T> {
    pub fn pass(&self) -> bool {
        self.fr_lhs.as_f64() <= self.fidelity.as_f64() + tolerances().fr
    }
}

/// Precomputed pieces of `ω_ABC` for fast fidelity evaluation.
struct Problem<T: Real> {
    da: usize,
    db: usize,
    dc: usize,
    target_sqrt: CMat<T>,
    omega_ab: CMat<T>,
    omega_a: CMat<T>,
    omega_b: CMat<T>,
    omega_c: CMat<T>,
    inv_b: CMat<T>,
    inv_c: CMat<T>,
}

impl<T: Real> Problem<T> {
    fn new(
        s: &MultipartiteState<T>,
        a: &[String],
        b: &[String],
        c: &[String],
    ) -> Result<(Self, MultipartiteState<T>)> {
        let abc: Vec<String> = [a, b, c].concat();
        let ordered = s.marginal(&abc)?.reordered(&abc)?.normalized();
        let dims = ordered.layout().dims();
        let (na, nb) = (a.len(), b.len());
        let idx = |r: std::ops::Range<usize>| r.collect::<Vec<_>>();
        let m = ordered.matrix();
        let pt = |keep: Vec<usize>| linalg::partial_trace(m, &dims, &keep);
        let floor = T::lit(tolerances().supp);
        let omega_b = pt(idx(na..na + nb));
        let omega_c = pt(idx(na + nb..dims.len()));
        let p = Self {
            da: dims[..na].iter().product(),
            db: dims[na..na + nb].iter().product(),
            dc: dims[na + nb..].iter().product(),
            target_sqrt: linalg::psd_sqrt(m, T::zero()),
            omega_ab: pt(idx(0..na + nb)),
            omega_a: pt(idx(0..na)),
            inv_b: linalg::psd_inv_sqrt(&omega_b, floor),
            inv_c: linalg::psd_inv_sqrt(&omega_c, floor),
            omega_b,
            omega_c,
        };
        Ok((p, ordered))
    }

    fn fidelity_of(&self, out: &CMat<T>) -> T {
        let m = &self.target_sqrt * out * &self.target_sqrt;
        linalg::eigvalsh(&m).into_iter().fold(T::zero(), |acc, v| {
            if v > T::zero() {
                acc + v.sqrt()
            } else {
                acc
            }
        })
    }

    fn image(&self, kraus: &[CMat<T>]) -> CMat<T> {
        let ia = linalg::identity::<T>(self.da);
        let d = self.da * self.db * self.dc;
        kraus.iter().fold(CMat::zeros(d, d), |acc, k| {
            let big = linalg::kron(&ia, k);
            acc + &big * &self.omega_ab * big.adjoint()
        })
    }

    fn marginals(&self, kraus: &[CMat<T>]) -> (CMat<T>, CMat<T>) {
        let d = self.db * self.dc;
        let x = kraus.iter().fold(CMat::zeros(d, d), |acc, k| {
            acc + k * &self.omega_b * k.adjoint()
        });
        (
            linalg::partial_trace(&x, &[self.db, self.dc], &[0]),
            linalg::partial_trace(&x, &[self.db, self.dc], &[1]),
        )
    }

    /// Largest `c ≤ 1` with `c·X_B ⪯ ω_B` and `c·X_C ⪯ ω_C` on the supports.
    fn scale(&self, xb: &CMat<T>, xc: &CMat<T>) -> T {
        let top = |inv: &CMat<T>, x: &CMat<T>| {
            linalg::eigvalsh(&(inv * x * inv))
                .first()
                .copied()
                .unwrap_or_else(T::zero)
        };
        [top(&self.inv_b, xb), top(&self.inv_c, xc)]
            .into_iter()
            .fold(T::one(), |c, l| {
                if l > T::zero() && T::one() / l < c {
                    T::one() / l
                } else {
                    c
                }
            })
    }

    /// Fidelity after scaling the channel and applying the marginal fixup.
    fn fixed_up_fidelity(&self, kraus: &[CMat<T>]) -> T {
        let (xb, xc) = self.marginals(kraus);
        let c = self.scale(&xb, &xc);
        let mut out = self.image(kraus) * cr(c);
        let rest = T::one() - c;
        if rest.as_f64() > 0.0 {
            let rb = linalg::positive_part(&linalg::hermitize(&(&self.omega_b - &xb * cr(c))));
            let rc = linalg::positive_part(&linalg::hermitize(&(&self.omega_c - &xc * cr(c))));
            let (tb, tc) = (linalg::trace_re(&rb), linalg::trace_re(&rc));
            let sigma = if tb.as_f64() <= tolerances().num || tc.as_f64() <= tolerances().num {
                linalg::kron(&self.omega_b, &self.omega_c)
            } else {
                linalg::kron(&rb, &rc) * cr(T::one() / (tb * tc))
            };
            out += linalg::kron(&self.omega_a, &sigma) * cr(rest);
        }
        self.fidelity_of(&out)
    }

    fn kraus_from_params(&self, x: &[T], k: usize) -> Vec<CMat<T>> {
        let (db, dbc) = (self.db, self.db * self.dc);
        let m = CMat::from_fn(dbc * k, db, |r, i| {
            cx(x[2 * (r * db + i)], x[2 * (r * db + i) + 1])
        });
        let g = m.adjoint() * &m;
        let v = &m * linalg::psd_inv_sqrt(&g, T::lit(tolerances().eig_floor));
        (0..k)
            .map(|j| CMat::from_fn(dbc, db, |b, i| v[(b * k + j, i)]))
            .collect()
    }

    fn params_from_kraus(&self, kraus: &[CMat<T>], k: usize) -> Vec<T> {
        let (db, dbc) = (self.db, self.db * self.dc);
        let mut x = vec![T::zero(); 2 * dbc * k * db];
        for (j, kj) in kraus.iter().enumerate() {
            for b in 0..dbc {
                for i in 0..db {
                    let r = b * k + j;
                    x[2 * (r * db + i)] = kj[(b, i)].re;
                    x[2 * (r * db + i) + 1] = kj[(b, i)].im;
                }
            }
        }
        x
    }
}

/// Searches for `Φ: B → BC` maximizing `F(ω_ABC, id_A ⊗ Φ(ω_AB))`.
///
/// The Petz map is evaluated first. Unless it already meets the bound (and
/// `early_exit` is set), a multi-start ascent over Stinespring isometries
/// follows, restart 0 starting at the Petz map. Candidates are scored after
/// scaling and the marginal fixup, so the returned channel reproduces both
/// marginals whenever the fixup applies.
pub fn recovery_search<T: Real, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    a: &[S],
    b: &[S],
    c: &[S],
    opts: &RecoveryOptions,
) -> Result<RecoveryReport<T>> {
    let tol = tolerances();
    let (a, b, c) = (owned(a), owned(b), owned(c));
    if b.is_empty() || c.is_empty() {
        return Err(Error::InvalidParameter(
            "recovery needs nonempty B and C".into(),
        ));
    }
    let (problem, ordered) = Problem::new(s, &a, &b, &c)?;
    let cmi_value = if a.is_empty() {
        T::zero()
    } else {
        cmi(&ordered, &a, &c, &b, CmiFormula::Direct)?.value
    };
    let fr_lhs = (-cmi_value * T::lit(0.5)).exp();
    let omega_b = ordered.marginal(&b)?;
    let omega_c = ordered.marginal(&c)?;
    let bc: Vec<String> = [b.clone(), c.clone()].concat();
    let petz = petz_map(&ordered.marginal(&bc)?, &omega_b)?;
    let petz_fidelity = problem.fixed_up_fidelity(petz.kraus());
    let dbc = problem.db * problem.dc;
    let k = dbc.max(petz.kraus().len());

    let mut best = petz.kraus().to_vec();
    let mut searched = false;
    if !(opts.early_exit && fr_lhs.as_f64() <= petz_fidelity.as_f64() + tol.fr) && opts.restarts > 0
    {
        searched = true;
        let warm = problem.params_from_kraus(petz.kraus(), k);
        let init = |i: usize, rng: &mut ChaCha20Rng| -> Vec<T> {
            if i == 0 {
                return warm.clone();
            }
            let g: CMat<T> = ginibre(dbc * k, problem.db, rng);
            (0..dbc * k * problem.db)
                .flat_map(|f| {
                    let z = g[(f / problem.db, f % problem.db)];
                    [z.re, z.im]
                })
                .collect()
        };
        let objective = |x: &[T]| problem.fixed_up_fidelity(&problem.kraus_from_params(x, k));
        let runs = multi_start(opts.restarts, opts.seed, init, objective, &opts.ascent);
        let i = best_index(&runs).expect("restarts > 0");
        if runs[i].value > petz_fidelity {
            best = problem.kraus_from_params(&runs[i].x, k);
        }
    }

    let raw = QuantumChannel::new(
        best,
        omega_b.layout().clone(),
        ordered.marginal(&bc)?.layout().clone(),
    )?;
    let (xb, xc) = problem.marginals(raw.kraus());
    let scale = problem.scale(&xb, &xc);
    let (channel, fixed_up, fixup_degenerate) =
        match marginal_fixup(&raw.scaled(scale)?, &omega_b, &omega_c) {
            Ok(f) => (f.channel, true, f.degenerate),
            Err(Error::Precondition(_)) => (raw, false, false),
            Err(e) => return Err(e),
        };
    let fidelity = problem
        .fidelity_of(&problem.image(channel.kraus()))
        .min(T::one());
    let (xb, xc) = problem.marginals(channel.kraus());
    Ok(RecoveryReport {
        fidelity,
        cmi: cmi_value,
        fr_lhs,
        marginal_residual_b: linalg::trace_norm_herm(&(xb - &problem.omega_b)),
        marginal_residual_c: linalg::trace_norm_herm(&(xc - &problem.omega_c)),
        petz_fidelity,
        searched,
        fixup_degenerate,
        fixed_up,
        channel,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum MarkovVerdict {
    Markov,
    NotMarkov,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MarkovReport {
    pub cmi: f64,
    pub petz_fidelity: f64,
    pub best_fidelity: f64,
    pub verdict: MarkovVerdict,
}

/// `MARKOV` iff `I(A:C|B) ≤ tol_markov`, with the recovery fidelities found.
pub fn markov_check<T: Real, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    a: &[S],
    b: &[S],
    c: &[S],
    opts: &RecoveryOptions,
) -> Result<MarkovReport> {
    let r = recovery_search(s, a, b, c, opts)?;
    let verdict = if r.cmi.as_f64() <= tolerances().markov {
        MarkovVerdict::Markov
    } else {
        MarkovVerdict::NotMarkov
    };
    Ok(MarkovReport {
        cmi: r.cmi.as_f64(),
        petz_fidelity: r.petz_fidelity.as_f64(),
        best_fidelity: r.fidelity.as_f64(),
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WildeReport {
    pub n: usize,
    /// Information gap in nats.
    pub delta_i: f64,
    pub delta_i_bits: f64,
    /// `‖ω − Φ₁⊗…⊗Φ_n(ω_{A'})‖₁`.
    pub reconstruction_error: f64,
    /// `error² / 4n²`.
    pub rhs: f64,
    pub pass: bool,
    pub pass_bits: bool,
    /// Conditional mutual information used by each pair's search, when searched.
    pub pair_cmi: Vec<f64>,
    /// Information gap of the reconstructed state.
    pub reconstructed_delta_i: f64,
}

/// Checks `ΔI(ω) ≥ ‖ω − Φ₁⊗…⊗Φ_n(ω_{A'})‖₁² / 4n²`.
///
/// `channels[i]` maps `A'_i` to `A'_i A_i`. Without channels, pair `i` is
/// recovered by [`recovery_search`] on `ω` with `A_1…A_{i−1}` traced out,
/// taking `B = A'_i`, `C = A_i` and the remaining labels as the reference.
pub fn wilde_check<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    unprimed: &[P],
    primed: &[P],
    channels: Option<&[QuantumChannel<T>]>,
    opts: &RecoveryOptions,
) -> Result<WildeReport> {
    let tol = tolerances();
    let un: Vec<Vec<String>> = unprimed.iter().map(|p| owned(p.as_ref())).collect();
    let pr: Vec<Vec<String>> = primed.iter().map(|p| owned(p.as_ref())).collect();
    let n = un.len();
    if n == 0 || pr.len() != n {
        return Err(Error::LayoutMismatch(format!(
            "{} unprimed vs {} primed parts",
            n,
            pr.len()
        )));
    }
    let delta_i = information_gap_chain(s, &pr, &un)?.value;
    let mut pair_cmi = Vec::new();
    let owned_channels: Vec<QuantumChannel<T>> = match channels {
        Some(ch) => {
            if ch.len() != n {
                return Err(Error::LayoutMismatch(format!(
                    "{} channels for {n} pairs",
                    ch.len()
                )));
            }
            ch.to_vec()
        }
        None => (0..n)
            .map(|i| {
                let earlier: Vec<&String> = un[..i].iter().flatten().collect();
                let keep: Vec<&str> = s
                    .labels()
                    .into_iter()
                    .filter(|l| !earlier.iter().any(|e| e == l))
                    .collect();
                let st = s.marginal(&keep)?;
                let reference: Vec<String> = un[i + 1..]
                    .iter()
                    .flatten()
                    .chain(
                        pr.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != i)
                            .flat_map(|(_, p)| p),
                    )
                    .cloned()
                    .collect();
                let o = RecoveryOptions {
                    seed: opts.seed.wrapping_add(i as u64),
                    ..opts.clone()
                };
                let r = recovery_search(&st, &reference, &pr[i], &un[i], &o)?;
                pair_cmi.push(r.cmi.as_f64());
                Ok(r.channel)
            })
            .collect::<Result<_>>()?,
    };
    let all_primed: Vec<String> = pr.iter().flatten().cloned().collect();
    let mut rec = s.marginal(&all_primed)?;
    for ch in &owned_channels {
        rec = ch.apply_local(&rec)?;
    }
    let rec = rec.reordered(&s.labels())?;
    if rec.layout() != s.layout() {
        return Err(Error::LayoutMismatch(
            "recovered factors do not match the state".into(),
        ));
    }
    let err = linalg::trace_norm_herm(&(s.matrix() - rec.matrix())).as_f64();
    let rhs = err * err / (4.0 * (n * n) as f64);
    let reconstructed_delta_i = information_gap_chain(&rec, &pr, &un)?.value.as_f64();
    let d = delta_i.as_f64();
    let bits = d / std::f64::consts::LN_2;
    Ok(WildeReport {
        n,
        delta_i: d,
        delta_i_bits: bits,
        reconstruction_error: err,
        rhs,
        pass: d + tol.fr >= rhs,
        pass_bits: bits + tol.fr >= rhs,
        pair_cmi,
        reconstructed_delta_i,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_channel_with, random_full_state, random_state, rng_for};
    use crate::tensor::{states, tensor_product, SubsystemLayout};

    fn qubits(l: &[&str]) -> SubsystemLayout {
        SubsystemLayout::qubits(l).unwrap()
    }

    #[test]
    fn petz_reproduces_omega_bc() {
        for seed in 0..5 {
            let bc = random_state::<f64>(&qubits(&["B", "C"]), 4, seed).unwrap();
            let b = bc.marginal(&["B"]).unwrap();
            let p = petz_map(&bc, &b).unwrap();
            assert!(p.is_trace_preserving());
            let out = p.apply(&b).unwrap();
            assert!(linalg::max_abs(&(out.matrix() - bc.matrix())) < 1e-9);
        }
    }

    #[test]
    fn petz_on_product_appends_omega_c() {
        let mut rng = rng_for(3, 0);
        let b = random_full_state::<f64, _>(&qubits(&["B"]), &mut rng).unwrap();
        let c = random_full_state::<f64, _>(&qubits(&["C"]), &mut rng).unwrap();
        let p = petz_map(&tensor_product(&b, &c).unwrap(), &b).unwrap();
        let rho = random_full_state::<f64, _>(&qubits(&["B"]), &mut rng).unwrap();
        let out = p.apply(&rho).unwrap();
        let want = linalg::kron(rho.matrix(), c.matrix());
        assert!(linalg::max_abs(&(out.matrix() - want)) < 1e-9);
    }

    #[test]
    fn petz_on_rank_deficient_marginal_is_a_channel() {
        let bc = MultipartiteState::<f64>::basis(qubits(&["B", "C"]), &[0, 0]).unwrap();
        let b = bc.marginal(&["B"]).unwrap();
        let p = petz_map(&bc, &b).unwrap();
        assert!(p.is_trace_preserving());
        assert!(linalg::max_abs(&(p.apply(&b).unwrap().matrix() - bc.matrix())) < 1e-12);
    }

    #[test]
    fn ghz_search_meets_bound() {
        let ghz = states::ghz::<f64>(&["A", "B", "C"]).unwrap();
        let r = recovery_search(&ghz, &["A"], &["B"], &["C"], &RecoveryOptions::default()).unwrap();
        assert!((r.cmi - std::f64::consts::LN_2).abs() < 1e-10);
        assert!((r.fr_lhs - 0.5f64.sqrt()).abs() < 1e-10);
        assert!(r.pass(), "{} < {}", r.fidelity, r.fr_lhs);
        assert!(r.marginal_residual_b < 1e-8 && r.marginal_residual_c < 1e-8);
    }

    #[test]
    fn product_state_is_markov() {
        let mut rng = rng_for(4, 0);
        let ab = random_full_state::<f64, _>(&qubits(&["A", "B"]), &mut rng).unwrap();
        let c = random_full_state::<f64, _>(&qubits(&["C"]), &mut rng).unwrap();
        let s = tensor_product(&ab, &c).unwrap();
        let m = markov_check(&s, &["A"], &["B"], &["C"], &RecoveryOptions::default()).unwrap();
        assert_eq!(m.verdict, MarkovVerdict::Markov);
        assert!(m.petz_fidelity > 1.0 - 1e-8);
        let g = markov_check(
            &states::ghz::<f64>(&["A", "B", "C"]).unwrap(),
            &["A"],
            &["B"],
            &["C"],
            &RecoveryOptions::default(),
        )
        .unwrap();
        assert_eq!(g.verdict, MarkovVerdict::NotMarkov);
    }

    #[test]
    fn classical_markov_chain() {
        // p(a,b,c) = p(a) p(b|a) p(c|b)
        let pa = [0.3, 0.7];
        let pba = [[0.9, 0.1], [0.2, 0.8]];
        let pcb = [[0.6, 0.4], [0.25, 0.75]];
        let mut diag = vec![0.0; 8];
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..2 {
                    diag[a * 4 + b * 2 + c] = pa[a] * pba[a][b] * pcb[b][c];
                }
            }
        }
        let s = MultipartiteState::<f64>::from_diagonal(&diag, qubits(&["A", "B", "C"])).unwrap();
        let m = markov_check(&s, &["A"], &["B"], &["C"], &RecoveryOptions::default()).unwrap();
        assert_eq!(m.verdict, MarkovVerdict::Markov);
        assert!(m.petz_fidelity > 1.0 - 1e-8);
    }

    #[test]
    fn fixup_of_half_petz_restores_marginals() {
        let s = random_state::<f64>(&qubits(&["B", "C"]), 4, 11).unwrap();
        let (b, c) = (s.marginal(&["B"]).unwrap(), s.marginal(&["C"]).unwrap());
        let half = petz_map(&s, &b).unwrap().scaled(0.5).unwrap();
        let f = marginal_fixup(&half, &b, &c).unwrap();
        assert!(!f.degenerate);
        let out = f.channel.apply(&b).unwrap();
        assert!(linalg::max_abs(&(out.marginal(&["B"]).unwrap().matrix() - b.matrix())) < 1e-9);
        assert!(linalg::max_abs(&(out.marginal(&["C"]).unwrap().matrix() - c.matrix())) < 1e-9);
    }

    #[test]
    fn fixup_of_a_channel_is_flagged_and_unchanged() {
        let s = random_state::<f64>(&qubits(&["B", "C"]), 4, 12).unwrap();
        let (b, c) = (s.marginal(&["B"]).unwrap(), s.marginal(&["C"]).unwrap());
        let p = petz_map(&s, &b).unwrap();
        let f = marginal_fixup(&p, &b, &c).unwrap();
        assert!(f.degenerate);
        let rho = random_full_state::<f64, _>(&qubits(&["B"]), &mut rng_for(1, 1)).unwrap();
        let diff = f.channel.apply(&rho).unwrap().matrix() - p.apply(&rho).unwrap().matrix();
        assert!(linalg::max_abs(&diff) < 1e-12);
    }

    #[test]
    fn fixup_of_damped_random_operation() {
        let mut rng = rng_for(13, 0);
        let s = random_state::<f64>(&qubits(&["B", "C"]), 4, 13).unwrap();
        let (b, c) = (s.marginal(&["B"]).unwrap(), s.marginal(&["C"]).unwrap());
        for _ in 0..5 {
            let ch =
                random_channel_with::<f64, _>(&qubits(&["B"]), &qubits(&["B", "C"]), 3, &mut rng)
                    .unwrap();
            let x = ch.apply(&b).unwrap();
            let lam = |w: &MultipartiteState<f64>, label: &str| {
                let inv = linalg::psd_inv_sqrt(w.matrix(), 1e-12);
                let xm = x.marginal(&[label]).unwrap();
                linalg::eigvalsh(&(&inv * xm.matrix() * &inv))[0]
            };
            let scale = 0.9 / lam(&b, "B").max(lam(&c, "C")).max(1.0);
            let f = marginal_fixup(&ch.scaled(scale).unwrap(), &b, &c).unwrap();
            let out = f.channel.apply(&b).unwrap();
            assert!(linalg::max_abs(&(out.marginal(&["B"]).unwrap().matrix() - b.matrix())) < 1e-9);
            assert!(linalg::max_abs(&(out.marginal(&["C"]).unwrap().matrix() - c.matrix())) < 1e-9);
        }
    }

    #[test]
    fn fixup_rejects_violated_precondition() {
        let s = random_state::<f64>(&qubits(&["B", "C"]), 4, 14).unwrap();
        let (b, c) = (s.marginal(&["B"]).unwrap(), s.marginal(&["C"]).unwrap());
        let swap_in = QuantumChannel::replacement(
            &qubits(&["B"]),
            &MultipartiteState::basis(qubits(&["B", "C"]), &[0, 0]).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            marginal_fixup(&swap_in, &b, &c),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn random_three_qubit_states_satisfy_fr() {
        for seed in 0..5 {
            let s = random_state::<f64>(&qubits(&["A", "B", "C"]), 8, seed).unwrap();
            let r =
                recovery_search(&s, &["A"], &["B"], &["C"], &RecoveryOptions::default()).unwrap();
            assert!(r.pass(), "seed {seed}: {} < {}", r.fidelity, r.fr_lhs);
            assert!(r.fixed_up && r.marginal_residual_b < 1e-8 && r.marginal_residual_c < 1e-8);
        }
    }

    #[test]
    fn wilde_on_product_and_bell() {
        let l = SubsystemLayout::qubits(&["A1", "A1'", "A2", "A2'"]).unwrap();
        let mut rng = rng_for(8, 0);
        let x = random_full_state::<f64, _>(
            &SubsystemLayout::qubits(&["A1", "A1'"]).unwrap(),
            &mut rng,
        )
        .unwrap();
        let y = random_full_state::<f64, _>(
            &SubsystemLayout::qubits(&["A2", "A2'"]).unwrap(),
            &mut rng,
        )
        .unwrap();
        let s = tensor_product(&x, &y).unwrap();
        assert_eq!(s.layout(), &l);
        let r = wilde_check(
            &s,
            &[&["A1"][..], &["A2"]],
            &[&["A1'"][..], &["A2'"]],
            None,
            &RecoveryOptions::default(),
        )
        .unwrap();
        assert!(r.delta_i.abs() < 1e-10 && r.reconstruction_error < 1e-8 && r.pass);

        let bell = states::bell::<f64>("A1", "A1'").unwrap();
        let r = wilde_check(
            &bell,
            &[&["A1"][..]],
            &[&["A1'"][..]],
            None,
            &RecoveryOptions::default(),
        )
        .unwrap();
        assert!(r.rhs <= 1.0 + 1e-12 && r.pass && r.pass_bits);
    }

    #[test]
    fn wilde_random_paired_states() {
        for seed in 0..3 {
            let s = random_state::<f64>(
                &SubsystemLayout::qubits(&["A1", "A1'", "A2", "A2'"]).unwrap(),
                16,
                seed,
            )
            .unwrap();
            let r = wilde_check(
                &s,
                &[&["A1"][..], &["A2"]],
                &[&["A1'"][..], &["A2'"]],
                None,
                &RecoveryOptions::default(),
            )
            .unwrap();
            assert!(r.pass, "{r:?}");
            assert!((r.pair_cmi.iter().sum::<f64>() - r.delta_i).abs() < 1e-8);
        }
    }
}
