use serde::{Deserialize, Serialize};

use super::QuantumChannel;
use crate::error::{Error, Result};
use crate::measures::{relative_entropy, von_neumann_entropy};
use crate::scalar::Real;
use crate::tensor::{purify, tensor_product, MultipartiteState, PURIFIER};

fn require_channel<T: Real>(ch: &QuantumChannel<T>) -> Result<()> {
    if ch.is_trace_preserving() {
        Ok(())
    } else {
        Err(Error::NotAChannel("expected a trace-preserving map".into()))
    }
}

/// `I(Φ,ρ) = H(Φ⊗id(|φ_ρ⟩⟨φ_ρ|) ‖ Φ(ρ)⊗ϱ)` with `|φ_ρ⟩` a purification of `ρ`
/// and `ϱ` its reference marginal.
pub fn channel_mutual_information<T: Real>(
    ch: &QuantumChannel<T>,
    rho: &MultipartiteState<T>,
) -> Result<T> {
    let pure = purify(rho)?;
    let joint = ch.apply_local(&pure)?;
    let out = ch.apply(rho)?;
    let reference = pure.marginal(&[PURIFIER])?;
    let prod = tensor_product(&out, &reference)?;
    let labels = prod.labels();
    Ok(relative_entropy(&joint.reordered(&labels)?, &prod)?.value)
}

/// `H(ρ) + H(Φ(ρ)) − H(Φ̂(ρ))`.
pub fn channel_mutual_information_entropic<T: Real>(
    ch: &QuantumChannel<T>,
    rho: &MultipartiteState<T>,
) -> Result<T> {
    require_channel(ch)?;
    let h = von_neumann_entropy(rho)?;
    let hb = von_neumann_entropy(&ch.apply(rho)?)?;
    let he = entropy_exchange(ch, rho)?;
    Ok(h + hb - he)
}

/// `H(Φ̂(ρ))`.
pub fn entropy_exchange<T: Real>(ch: &QuantumChannel<T>, rho: &MultipartiteState<T>) -> Result<T> {
    von_neumann_entropy(&ch.complementary()?.apply(rho)?)
}

/// `I_c(Φ,ρ) = I(Φ,ρ) − H(ρ)`.
pub fn coherent_information<T: Real>(
    ch: &QuantumChannel<T>,
    rho: &MultipartiteState<T>,
) -> Result<T> {
    require_channel(ch)?;
    Ok(channel_mutual_information(ch, rho)? - von_neumann_entropy(rho)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyGainKind {
    OfChannel,
    OfComplement,
}

/// Entropy gain `H(VρV† ‖ Φ(ρ)⊗Φ̂(ρ)) − H_Φ̂(ρ)` of the channel, or the same
/// with `H_Φ` subtracted for the complement.
pub fn entropy_gain<T: Real>(
    ch: &QuantumChannel<T>,
    rho: &MultipartiteState<T>,
    which: EntropyGainKind,
) -> Result<T> {
    require_channel(ch)?;
    let dil = ch.dilate(rho)?;
    let out = ch.apply(rho)?;
    let env = ch.complementary()?.apply(rho)?;
    let prod = tensor_product(&out, &env)?;
    let i_be = relative_entropy(&dil, &prod)?.value;
    let sub = match which {
        EntropyGainKind::OfChannel => von_neumann_entropy(&env)?,
        EntropyGainKind::OfComplement => von_neumann_entropy(&out)?,
    };
    Ok(i_be - sub)
}

/// Slack of the three triangle inequalities, each `rhs − |lhs|`:
/// `H(ρ) − |I_c|`, `H_Φ̂ − |EG(Φ)|`, `H_Φ − |EG(Φ̂)|`.
pub fn triangle_margins<T: Real>(
    ch: &QuantumChannel<T>,
    rho: &MultipartiteState<T>,
) -> Result<[T; 3]> {
    let h = von_neumann_entropy(rho)?;
    let hb = von_neumann_entropy(&ch.apply(rho)?)?;
    let he = entropy_exchange(ch, rho)?;
    let ic = coherent_information(ch, rho)?;
    let g = entropy_gain(ch, rho, EntropyGainKind::OfChannel)?;
    let gc = entropy_gain(ch, rho, EntropyGainKind::OfComplement)?;
    Ok([h - ic.abs(), he - g.abs(), hb - gc.abs()])
}
