//! Multipartite measures: conditional multipartite mutual information, secrecy
//! monotone, interaction information and information gap, each with its
//! alternative representation for cross-checking.

use super::cmi::cmi_sets;
use super::{
    check_disjoint, mi2, mi_parts, to_parts, union, CmiFormula, Entropies, FormulaTag,
    MeasureValue, Parts,
};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensor::MultipartiteState;

fn refs(parts: &Parts) -> Vec<&[String]> {
    parts.iter().map(|p| p.as_slice()).collect()
}

fn prepare<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    parts: &[P],
    b: &[S],
) -> Result<(Parts, Vec<String>)> {
    let parts = to_parts(parts);
    if parts.is_empty() {
        return Err(Error::EmptyParts);
    }
    if parts.iter().any(|p| p.is_empty()) {
        return Err(Error::InvalidParameter("empty part".into()));
    }
    let b = super::to_set(b);
    let mut all = refs(&parts);
    all.push(&b);
    check_disjoint(s, &all)?;
    Ok((parts, b))
}

/// `I(A_1:…:A_n|B) = Σ H(A_iB) − H(A_1…A_nB) − (n−1)H(B)`.
pub fn cmi_multipartite<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    parts: &[P],
    b: &[S],
) -> Result<MeasureValue<T>> {
    let (parts, b) = prepare(s, parts, b)?;
    let e = Entropies::new(s);
    let n = parts.len();
    let mut v = T::zero();
    for p in &parts {
        v += e.h(&union(&[p, &b]))?;
    }
    let mut all = refs(&parts);
    all.push(&b);
    v -= e.h_union(&all)?;
    v -= e.h(&b)? * T::from_usize(n - 1).unwrap();
    Ok(MeasureValue::new(v, FormulaTag::MultiCmiDirect))
}

/// Chain form `Σ_k I(A_{σ(k)} : A_{σ(1)}…A_{σ(k−1)} | B)` for the ordering `order`.
pub fn cmi_multipartite_chain<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    parts: &[P],
    b: &[S],
    order: &[usize],
) -> Result<MeasureValue<T>> {
    let (parts, b) = prepare(s, parts, b)?;
    check_order(order, parts.len())?;
    let mut v = T::zero();
    let mut prefix: Vec<String> = parts[order[0]].clone();
    for &k in &order[1..] {
        v += cmi_sets(s, &parts[k], &prefix, &b, CmiFormula::ViaAb)?;
        prefix.extend(parts[k].iter().cloned());
    }
    Ok(MeasureValue::new(v, FormulaTag::MultiCmiChain))
}

fn check_order(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::InvalidParameter(
            "ordering must be a permutation of the parts".into(),
        ));
    }
    for &i in order {
        if i >= n || seen[i] {
            return Err(Error::InvalidParameter(
                "ordering must be a permutation of the parts".into(),
            ));
        }
        seen[i] = true;
    }
    Ok(())
}

/// `I(A_1…A_n:B) − Σ I(A_i:B)`, the change of `I(A_1:…:A_n)` under conditioning on `B`.
pub fn cmi_conditioning_difference<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    parts: &[P],
    b: &[S],
) -> Result<T> {
    let (parts, b) = prepare(s, parts, b)?;
    let all = union(&refs(&parts));
    let mut v = mi2(s, &all, &b)?;
    for p in &parts {
        v -= mi2(s, p, &b)?;
    }
    Ok(v)
}

/// `S_n(A_1:…:A_n|B) = Σ_i H(A_1…Â_i…A_nB) − (n−1)H(A_1…A_nB) − H(B)`; `B` may be empty.
pub fn secrecy_monotone<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    parts: &[P],
    b: &[S],
) -> Result<MeasureValue<T>> {
    let (parts, b) = prepare(s, parts, b)?;
    let e = Entropies::new(s);
    let n = parts.len();
    let mut v = T::zero();
    for i in 0..n {
        let mut sets: Vec<&[String]> = parts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, p)| p.as_slice())
            .collect();
        sets.push(&b);
        v += e.h_union(&sets)?;
    }
    let mut all = refs(&parts);
    all.push(&b);
    v -= e.h_union(&all)? * T::from_usize(n - 1).unwrap();
    v -= e.h(&b)?;
    Ok(MeasureValue::new(v, FormulaTag::SecrecyDirect))
}

/// Chain form `Σ_{k<n} I(A_k : A_{k+1}…A_n | A_1…A_{k−1}B)` (parts taken in `order`).
pub fn secrecy_monotone_chain<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    parts: &[P],
    b: &[S],
    order: &[usize],
) -> Result<MeasureValue<T>> {
    let (parts, b) = prepare(s, parts, b)?;
    check_order(order, parts.len())?;
    let n = parts.len();
    let mut v = T::zero();
    let mut cond = b.clone();
    for k in 0..n.saturating_sub(1) {
        let rest: Vec<String> = order[k + 1..]
            .iter()
            .flat_map(|&j| parts[j].iter().cloned())
            .collect();
        v += cmi_sets(s, &parts[order[k]], &rest, &cond, CmiFormula::ViaAb)?;
        cond.extend(parts[order[k]].iter().cloned());
    }
    Ok(MeasureValue::new(v, FormulaTag::SecrecyChain))
}

/// `(n−1) I(A_1…A_n:B) − Σ_i I(A_1…Â_i…A_n:B)`, the change of `S_n` under conditioning on `B`.
pub fn secrecy_conditioning_difference<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    parts: &[P],
    b: &[S],
) -> Result<T> {
    let (parts, b) = prepare(s, parts, b)?;
    let n = parts.len();
    let all = union(&refs(&parts));
    let mut v = mi2(s, &all, &b)? * T::from_usize(n - 1).unwrap();
    for i in 0..n {
        let rest: Vec<String> = parts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .flat_map(|(_, p)| p.iter().cloned())
            .collect();
        v -= mi2(s, &rest, &b)?;
    }
    Ok(v)
}

/// `I_n = Σ_{∅≠S⊆[n]} (−1)^{|S|+1} H(A_S)`.
pub fn interaction_information<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    parts: &[P],
) -> Result<MeasureValue<T>> {
    let (parts, _) = prepare::<T, P, S>(s, parts, &[])?;
    let e = Entropies::new(s);
    let n = parts.len();
    let mut v = T::zero();
    for mask in 1u32..(1 << n) {
        let sets: Vec<&[String]> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| parts[i].as_slice())
            .collect();
        let h = e.h_union(&sets)?;
        if mask.count_ones() % 2 == 1 {
            v += h;
        } else {
            v -= h;
        }
    }
    Ok(MeasureValue::new(v, FormulaTag::InteractionAlternating))
}

/// Conditional-entropy form around part `i`:
/// `H(A_i) + Σ_{∅≠J⊆[n]∖{i}} (−1)^{|J|} H_e(A_i|A_J)`.
pub fn interaction_information_conditional<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    parts: &[P],
    i: usize,
) -> Result<MeasureValue<T>> {
    let (parts, _) = prepare::<T, P, S>(s, parts, &[])?;
    let n = parts.len();
    if i >= n {
        return Err(Error::OutOfRange(format!("part index {i}")));
    }
    let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
    let ai = &parts[i];
    let h_ai = Entropies::new(s).h(ai)?;
    let mut v = h_ai;
    for mask in 1u32..(1 << others.len()) {
        let cond: Vec<String> = others
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .flat_map(|(_, &j)| parts[j].iter().cloned())
            .collect();
        let he = h_ai - mi2(s, ai, &cond)?;
        if mask.count_ones() % 2 == 1 {
            v -= he;
        } else {
            v += he;
        }
    }
    Ok(MeasureValue::new(v, FormulaTag::InteractionConditional))
}

/// Tripartite `I_3 = I(A_1:A_2) − I(A_1:A_2|A_3)`.
pub fn interaction_information_remark_form<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    parts: &[P],
) -> Result<T> {
    let (parts, _) = prepare::<T, P, S>(s, parts, &[])?;
    if parts.len() != 3 {
        return Err(Error::InvalidParameter(
            "tripartite form needs exactly three parts".into(),
        ));
    }
    Ok(mi2(s, &parts[0], &parts[1])?
        - cmi_sets(s, &parts[0], &parts[1], &parts[2], CmiFormula::Direct)?)
}

fn prepare_gap<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    primed: &[P],
    unprimed: &[P],
) -> Result<(Parts, Parts)> {
    let primed = to_parts(primed);
    let unprimed = to_parts(unprimed);
    if primed.is_empty() {
        return Err(Error::EmptyParts);
    }
    if primed.len() != unprimed.len() {
        return Err(Error::InvalidParameter(
            "primed and unprimed parts must pair up".into(),
        ));
    }
    if primed.iter().chain(&unprimed).any(|p| p.is_empty()) {
        return Err(Error::InvalidParameter("empty part".into()));
    }
    let mut all = refs(&primed);
    all.extend(refs(&unprimed));
    check_disjoint(s, &all)?;
    Ok((primed, unprimed))
}

/// `ΔI = I(A_1A'_1:…:A_nA'_n) − I(A'_1:…:A'_n)`.
pub fn information_gap<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    primed: &[P],
    unprimed: &[P],
) -> Result<MeasureValue<T>> {
    let (primed, unprimed) = prepare_gap(s, primed, unprimed)?;
    let joint: Parts = unprimed
        .iter()
        .zip(&primed)
        .map(|(a, p)| union(&[a, p]))
        .collect();
    let v = mi_parts(s, &joint)? - mi_parts(s, &primed)?;
    Ok(MeasureValue::new(v, FormulaTag::InfoGapDirect))
}

/// Chain form `I(A_1:A'_2…A'_n|A'_1) + Σ_{i≥2} I(A_i : A_1…A_{i−1}A'_1…Â'_i…A'_n | A'_i)`.
pub fn information_gap_chain<T: Real, P: AsRef<[S]>, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    primed: &[P],
    unprimed: &[P],
) -> Result<MeasureValue<T>> {
    let (primed, unprimed) = prepare_gap(s, primed, unprimed)?;
    let n = primed.len();
    let mut v = T::zero();
    for i in 0..n {
        let side: Vec<String> = unprimed[..i]
            .iter()
            .flatten()
            .chain(
                primed
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .flat_map(|(_, p)| p.iter()),
            )
            .cloned()
            .collect();
        if side.is_empty() {
            continue;
        }
        v += cmi_sets(s, &unprimed[i], &side, &primed[i], CmiFormula::ViaAb)?;
    }
    Ok(MeasureValue::new(v, FormulaTag::InfoGapChain))
}
