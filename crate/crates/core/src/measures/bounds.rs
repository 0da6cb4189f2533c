use serde::{Deserialize, Serialize};

use super::cmi::cmi_upper_bounds;
use super::{check_disjoint, Entropies};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensor::MultipartiteState;

/// Entropic upper bounds on the correlation measures.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UpperBound {
    /// `I(A:B) ≤ 2 min{H(A), H(B)}`
    Mi { a: Vec<String>, b: Vec<String> },
    /// `I(A_1:…:A_n) ≤ 2 min_j Σ_{i≠j} H(A_i)`
    MultiMi { parts: Vec<Vec<String>> },
    /// `I(A:C|B) ≤ 2 min{H(A), H(C), H(AB), H(BC), H(B)+½I(A:C), H(ABC)+½I(A:C)}`
    Cmi {
        a: Vec<String>,
        c: Vec<String>,
        b: Vec<String>,
    },
    /// `I(A_1:…:A_n|B) ≤ 2 min_j Σ_{i≠j} min{H(A_i), H(A_iB)}`
    MultiCmi {
        parts: Vec<Vec<String>>,
        b: Vec<String>,
    },
    /// `S_n(A_1:…:A_n|B) ≤ 2 min_j Σ_{i≠j} H(A_i)`
    Secrecy { parts: Vec<Vec<String>> },
    /// `|I_n| ≤ 2^{n−1} min_i H(A_i)`
    Interaction { parts: Vec<Vec<String>> },
    /// `ΔI ≤ 2 Σ_i H(A_i)` over the unprimed parts
    InfoGap { unprimed: Vec<Vec<String>> },
}

fn owned<S: AsRef<str>>(x: &[S]) -> Vec<String> {
    x.iter().map(|l| l.as_ref().to_string()).collect()
}

fn owned_parts<P: AsRef<[S]>, S: AsRef<str>>(x: &[P]) -> Vec<Vec<String>> {
    x.iter().map(|p| owned(p.as_ref())).collect()
}

impl UpperBound {
    pub fn mi<S: AsRef<str>>(a: &[S], b: &[S]) -> Self {
        Self::Mi {
            a: owned(a),
            b: owned(b),
        }
    }
    pub fn multi_mi<P: AsRef<[S]>, S: AsRef<str>>(parts: &[P]) -> Self {
        Self::MultiMi {
            parts: owned_parts(parts),
        }
    }
    pub fn cmi<S: AsRef<str>>(a: &[S], c: &[S], b: &[S]) -> Self {
        Self::Cmi {
            a: owned(a),
            c: owned(c),
            b: owned(b),
        }
    }
    pub fn multi_cmi<P: AsRef<[S]>, S: AsRef<str>>(parts: &[P], b: &[S]) -> Self {
        Self::MultiCmi {
            parts: owned_parts(parts),
            b: owned(b),
        }
    }
    pub fn secrecy<P: AsRef<[S]>, S: AsRef<str>>(parts: &[P]) -> Self {
        Self::Secrecy {
            parts: owned_parts(parts),
        }
    }
    pub fn interaction<P: AsRef<[S]>, S: AsRef<str>>(parts: &[P]) -> Self {
        Self::Interaction {
            parts: owned_parts(parts),
        }
    }
    pub fn info_gap<P: AsRef<[S]>, S: AsRef<str>>(unprimed: &[P]) -> Self {
        Self::InfoGap {
            unprimed: owned_parts(unprimed),
        }
    }
}

fn min_leave_one_out<T: Real>(values: &[T]) -> T {
    let total = values.iter().fold(T::zero(), |a, &b| a + b);
    values.iter().fold(T::infinity(), |m, &v| m.min(total - v))
}

pub fn upper_bound<T: Real>(s: &MultipartiteState<T>, which: &UpperBound) -> Result<T> {
    let e = Entropies::new(s);
    let two = T::lit(2.0);
    let part_refs = |p: &[Vec<String>]| -> Result<Vec<T>> {
        let refs: Vec<&[String]> = p.iter().map(|x| x.as_slice()).collect();
        check_disjoint(s, &refs)?;
        p.iter().map(|x| e.h(x)).collect()
    };
    match which {
        UpperBound::Mi { a, b } => {
            check_disjoint(s, &[a, b])?;
            Ok(two * e.h(a)?.min(e.h(b)?))
        }
        UpperBound::MultiMi { parts } | UpperBound::Secrecy { parts } => {
            if parts.is_empty() {
                return Err(Error::EmptyParts);
            }
            Ok(two * min_leave_one_out(&part_refs(parts)?))
        }
        UpperBound::Cmi { a, c, b } => {
            let all = cmi_upper_bounds(s, a, c, b)?;
            Ok(all.iter().fold(T::infinity(), |m, &v| m.min(v)))
        }
        UpperBound::MultiCmi { parts, b } => {
            if parts.is_empty() {
                return Err(Error::EmptyParts);
            }
            let mut sets: Vec<&[String]> = parts.iter().map(|x| x.as_slice()).collect();
            sets.push(b);
            check_disjoint(s, &sets)?;
            let vals: Vec<T> = parts
                .iter()
                .map(|p| Ok(e.h(p)?.min(e.h_union(&[p, b])?)))
                .collect::<Result<_>>()?;
            Ok(two * min_leave_one_out(&vals))
        }
        UpperBound::Interaction { parts } => {
            if parts.is_empty() {
                return Err(Error::EmptyParts);
            }
            let vals = part_refs(parts)?;
            let min = vals.iter().fold(T::infinity(), |m, &v| m.min(v));
            Ok(T::lit(2f64.powi(parts.len() as i32 - 1)) * min)
        }
        UpperBound::InfoGap { unprimed } => {
            let vals = part_refs(unprimed)?;
            Ok(two * vals.iter().fold(T::zero(), |a, &b| a + b))
        }
    }
}
