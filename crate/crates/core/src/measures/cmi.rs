use serde::{Deserialize, Serialize};

use super::{check_disjoint, mi2, to_set, union, Entropies, FormulaTag, MeasureValue};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tensor::{purify, MultipartiteState, PURIFIER};
use crate::tolerance::tolerances;

/// Defining expression used to evaluate `I(A:C|B)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CmiFormula {
    /// `H(AB) + H(BC) − H(ABC) − H(B)`
    Direct,
    /// `I(A:BC) − I(A:B)`
    ViaAb,
    /// `I(AB:C) − I(B:C)`
    ViaCb,
    /// `I(A:C) − I(A:B) − I(C:B) + I(AC:B)`
    FourMi,
    /// `I(A:C) + I(AB:D) + I(BC:D) + I(AC:D) − 4H(ABC)` for a purification on `D`
    Purified,
}

impl CmiFormula {
    pub const ALL: [CmiFormula; 5] = [
        Self::Direct,
        Self::ViaAb,
        Self::ViaCb,
        Self::FourMi,
        Self::Purified,
    ];

    pub fn tag(self) -> FormulaTag {
        match self {
            Self::Direct => FormulaTag::CmiDirect,
            Self::ViaAb => FormulaTag::CmiViaAb,
            Self::ViaCb => FormulaTag::CmiViaCb,
            Self::FourMi => FormulaTag::CmiFourMi,
            Self::Purified => FormulaTag::CmiPurified,
        }
    }
}

/// Conditional mutual information `I(A:C|B)`; `B` may be empty.
pub fn cmi<T: Real, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    a: &[S],
    c: &[S],
    b: &[S],
    formula: CmiFormula,
) -> Result<MeasureValue<T>> {
    let (a, c, b) = (to_set(a), to_set(c), to_set(b));
    cmi_sets(s, &a, &c, &b, formula).map(|v| MeasureValue::new(v, formula.tag()))
}

pub(crate) fn cmi_sets<T: Real>(
    s: &MultipartiteState<T>,
    a: &[String],
    c: &[String],
    b: &[String],
    formula: CmiFormula,
) -> Result<T> {
    if a.is_empty() || c.is_empty() {
        return Err(Error::InvalidParameter(
            "conditional mutual information needs nonempty A and C".into(),
        ));
    }
    check_disjoint(s, &[a, c, b])?;
    let ab = union(&[a, b]);
    let cb = union(&[c, b]);
    let ac = union(&[a, c]);
    match formula {
        CmiFormula::Direct => {
            let e = Entropies::new(s);
            Ok(e.h(&ab)? + e.h(&cb)? - e.h(&union(&[a, b, c]))? - e.h(b)?)
        }
        CmiFormula::ViaAb => Ok(mi2(s, a, &cb)? - mi2(s, a, b)?),
        CmiFormula::ViaCb => Ok(mi2(s, &ab, c)? - mi2(s, b, c)?),
        CmiFormula::FourMi => Ok(mi2(s, a, c)? - mi2(s, a, b)? - mi2(s, c, b)? + mi2(s, &ac, b)?),
        CmiFormula::Purified => {
            let abc = union(&[a, b, c]);
            let marg = if abc.len() == s.layout().len() {
                s.clone()
            } else {
                s.marginal(&abc)?
            };
            if !marg.is_normalized() {
                return Err(Error::NonUnitTrace(marg.trace().as_f64()));
            }
            let pure = purify(&marg)?;
            let d = vec![PURIFIER.to_string()];
            let h_abc = Entropies::new(&marg).h(&abc)?;
            Ok(mi2(&marg, a, c)?
                + mi2(&pure, &ab, &d)?
                + mi2(&pure, &cb, &d)?
                + mi2(&pure, &ac, &d)?
                - h_abc * T::lit(4.0))
        }
    }
}

/// Values of all five formulas, in [`CmiFormula::ALL`] order.
pub fn cmi_all_formulas<T: Real, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    a: &[S],
    c: &[S],
    b: &[S],
) -> Result<[T; 5]> {
    let (a, c, b) = (to_set(a), to_set(c), to_set(b));
    let mut out = [T::zero(); 5];
    for (slot, f) in out.iter_mut().zip(CmiFormula::ALL) {
        *slot = cmi_sets(s, &a, &c, &b, f)?;
    }
    Ok(out)
}

/// Twice each quantity bounding `½ I(A:C|B)`:
/// `H(A), H(C), H(AB), H(BC), H(B) + ½I(A:C), H(ABC) + ½I(A:C)`.
pub fn cmi_upper_bounds<T: Real, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    a: &[S],
    c: &[S],
    b: &[S],
) -> Result<[T; 6]> {
    let (a, c, b) = (to_set(a), to_set(c), to_set(b));
    check_disjoint(s, &[&a, &c, &b])?;
    let e = Entropies::new(s);
    let half_iac = mi2(s, &a, &c)? * T::lit(0.5);
    let two = T::lit(2.0);
    Ok([
        two * e.h(&a)?,
        two * e.h(&c)?,
        two * e.h(&union(&[&a, &b]))?,
        two * e.h(&union(&[&b, &c]))?,
        two * (e.h(&b)? + half_iac),
        two * (e.h(&union(&[&a, &b, &c]))? + half_iac),
    ])
}

/// `(I(A:B) + I(B:C), 2H(ω_B))` for a pure state on `ABC`.
pub fn pure_tripartite_identity_check<T: Real, S: AsRef<str>>(
    s: &MultipartiteState<T>,
    a: &[S],
    b: &[S],
    c: &[S],
) -> Result<(T, T)> {
    let (a, b, c) = (to_set(a), to_set(b), to_set(c));
    check_disjoint(s, &[&a, &b, &c])?;
    let abc = union(&[&a, &b, &c]);
    let marg = if abc.len() == s.layout().len() {
        s.clone()
    } else {
        s.marginal(&abc)?
    };
    let purity = marg.purity().as_f64();
    if (purity - 1.0).abs() > tolerances().num.sqrt() {
        return Err(Error::NotPure(purity));
    }
    let lhs = mi2(&marg, &a, &b)? + mi2(&marg, &b, &c)?;
    let rhs = Entropies::new(&marg).h(&b)? * T::lit(2.0);
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{states, tensor_product, SubsystemLayout};

    const LN2: f64 = std::f64::consts::LN_2;

    #[test]
    fn ghz_cmi_all_formulas() {
        let ghz = states::ghz::<f64>(&["A", "B", "C"]).unwrap();
        for v in cmi_all_formulas(&ghz, &["A"], &["C"], &["B"]).unwrap() {
            assert!((v - LN2).abs() < 1e-10, "{v}");
        }
        let bounds = cmi_upper_bounds(&ghz, &["A"], &["C"], &["B"]).unwrap();
        assert!((bounds[0] - 2.0 * LN2).abs() < 1e-10);
    }

    #[test]
    fn product_cmi_is_zero() {
        let one = |l: &str, p: f64| {
            MultipartiteState::<f64>::from_diagonal(
                &[p, 1.0 - p],
                SubsystemLayout::qubits(&[l]).unwrap(),
            )
            .unwrap()
        };
        let s = tensor_product(
            &tensor_product(&one("A", 0.2), &one("B", 0.6)).unwrap(),
            &one("C", 0.9),
        )
        .unwrap();
        for v in cmi_all_formulas(&s, &["A"], &["C"], &["B"]).unwrap() {
            assert!(v.abs() < 1e-10);
        }
    }

    #[test]
    fn pure_identity_on_ghz_and_product() {
        let ghz = states::ghz::<f64>(&["A", "B", "C"]).unwrap();
        let (l, r) = pure_tripartite_identity_check(&ghz, &["A"], &["B"], &["C"]).unwrap();
        assert!((l - 2.0 * LN2).abs() < 1e-10 && (r - 2.0 * LN2).abs() < 1e-10);
        let prod = MultipartiteState::<f64>::basis(
            SubsystemLayout::qubits(&["A", "B", "C"]).unwrap(),
            &[0, 1, 0],
        )
        .unwrap();
        let (l, r) = pure_tripartite_identity_check(&prod, &["A"], &["B"], &["C"]).unwrap();
        assert!(l.abs() < 1e-10 && r.abs() < 1e-10);
        let mixed = MultipartiteState::<f64>::maximally_mixed(
            SubsystemLayout::qubits(&["A", "B", "C"]).unwrap(),
        );
        assert!(matches!(
            pure_tripartite_identity_check(&mixed, &["A"], &["B"], &["C"]),
            Err(Error::NotPure(_))
        ));
    }

    #[test]
    fn overlap_is_rejected() {
        let ghz = states::ghz::<f64>(&["A", "B", "C"]).unwrap();
        assert!(matches!(
            cmi(&ghz, &["A"], &["A"], &["B"], CmiFormula::Direct),
            Err(Error::OverlappingLabels(_))
        ));
    }
}
