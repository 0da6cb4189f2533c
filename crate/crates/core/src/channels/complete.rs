use serde::{Deserialize, Serialize};

use super::{trace_dump_kraus, QuantumChannel};
use crate::error::{Error, Result};
use crate::linalg;
use crate::measures::{mutual_information, relative_entropy_matrices};
use crate::scalar::{cr, CMat, Real};
use crate::tensor::{MultipartiteState, SubsystemLayout};
use crate::tolerance::tolerances;

/// `Ψ = Φ ⊕ Δ` with `Δ(ρ) = [Tr ρ − Tr Φ(ρ)] σ`.
///
/// The output is one factor of dimension `d_out + d_σ` whose first block
/// carries `Φ` and whose second block carries `Δ`. Its label joins the output
/// labels of `op` and of `σ` with `⊕`.
pub fn completed_channel<T: Real>(
    op: &QuantumChannel<T>,
    sigma: &MultipartiteState<T>,
) -> Result<QuantumChannel<T>> {
    if !sigma.is_normalized() {
        return Err(Error::NonUnitTrace(sigma.trace().as_f64()));
    }
    let d_in = op.in_layout().total_dim();
    let d_out = op.out_layout().total_dim();
    let d_s = sigma.dim();
    let label = format!(
        "{}⊕{}",
        op.out_layout().labels().join(""),
        sigma.labels().join("")
    );
    let out_layout = SubsystemLayout::new([(label, d_out + d_s)])?;
    let embed = |k: &CMat<T>, offset: usize| {
        let mut big = CMat::zeros(d_out + d_s, d_in);
        big.view_mut((offset, 0), k.shape()).copy_from(k);
        big
    };
    let deficit = linalg::hermitize(&(linalg::identity::<T>(d_in) - op.kraus_gram()));
    let mut kraus: Vec<CMat<T>> = op.kraus().iter().map(|k| embed(k, 0)).collect();
    kraus.extend(
        trace_dump_kraus(&deficit, sigma.matrix())
            .iter()
            .map(|k| embed(k, d_out)),
    );
    QuantumChannel::channel(kraus, op.in_layout().clone(), out_layout)
}

/// Terms of `I(A'':B)_Ψ = I(A':B)_ω̃ + H(ω̃_B‖λω_B) + H(Δ⊗id(ω) ‖ Δ(ω_A)⊗ω_B)`,
/// where `ω̃ = Φ⊗id(ω)` and `λ = Tr ω̃`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DfTerms {
    pub lhs: f64,
    pub mi_term: f64,
    pub lambda_term: f64,
    pub dump_term: f64,
    pub lambda: f64,
}

impl DfTerms {
    pub fn residual(&self) -> f64 {
        (self.lhs - self.mi_term - self.lambda_term - self.dump_term).abs()
    }
}

/// Evaluates both sides of the decomposition on `ω`, where `op` acts on its
/// input labels and every other label of `ω` forms `B`.
pub fn df_decomposition<T: Real>(
    op: &QuantumChannel<T>,
    sigma: &MultipartiteState<T>,
    omega: &MultipartiteState<T>,
) -> Result<DfTerms> {
    let a: Vec<String> = op
        .in_layout()
        .labels()
        .iter()
        .map(|l| l.to_string())
        .collect();
    let b: Vec<String> = omega
        .labels()
        .iter()
        .filter(|l| !a.iter().any(|x| x == *l))
        .map(|l| l.to_string())
        .collect();
    if b.is_empty() {
        return Err(Error::InvalidParameter("state has no B part".into()));
    }
    let psi = completed_channel(op, sigma)?;
    let out = psi.apply_local(&omega.reordered(&[a.clone(), b.clone()].concat())?)?;
    let a2: Vec<String> = psi
        .out_layout()
        .labels()
        .iter()
        .map(|l| l.to_string())
        .collect();
    let lhs = mutual_information(&out, &[a2, b.clone()])?.value;

    let tilde = op.apply_local(&omega.reordered(&[a.clone(), b.clone()].concat())?)?;
    let lambda = tilde.trace();
    if lambda.as_f64() <= tolerances().num {
        return Err(Error::DegenerateTruncation(lambda.as_f64()));
    }
    let a1: Vec<String> = op
        .out_layout()
        .labels()
        .iter()
        .map(|l| l.to_string())
        .collect();
    let mi_term = mutual_information(&tilde, &[a1, b.clone()])?.value;
    let tilde_b = tilde.marginal(&b)?;
    let omega_b = omega.marginal(&b)?;
    let lambda_term =
        relative_entropy_matrices(tilde_b.matrix(), &(omega_b.matrix() * cr(lambda)))?;
    let dump_term = if (T::one() - lambda).as_f64() <= tolerances().num {
        T::zero()
    } else {
        let rest = omega_b.matrix() - tilde_b.matrix();
        let joint = linalg::kron(sigma.matrix(), &rest);
        let prod = linalg::kron(sigma.matrix(), &(omega_b.matrix() * cr(T::one() - lambda)));
        relative_entropy_matrices(&joint, &prod)?
    };
    Ok(DfTerms {
        lhs: lhs.as_f64(),
        mi_term: mi_term.as_f64(),
        lambda_term: lambda_term.as_f64(),
        dump_term: dump_term.as_f64(),
        lambda: lambda.as_f64(),
    })
}
