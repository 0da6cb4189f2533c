//! Parsing of measure names, partitions and label groups.

use anyhow::{bail, Context, Result};
use qcorr::measures::{
    cmi, cmi_multipartite, conditional_entropy_ext, information_gap_chain, interaction_information,
    mutual_information, secrecy_monotone, upper_bound, von_neumann_entropy, CmiFormula, FormulaTag,
    MeasureValue, UpperBound,
};
use qcorr::State;

/// `"A,B;C"` → `[["A","B"],["C"]]`. Empty groups are dropped.
pub fn parse_parts(text: &str) -> Vec<Vec<String>> {
    text.split(';')
        .map(parse_group)
        .filter(|g| !g.is_empty())
        .collect()
}

/// `"A1+A2"` or `"A1,A2"` → `["A1","A2"]`.
pub fn parse_group(text: &str) -> Vec<String> {
    text.split([',', '+'])
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(String::from)
        .collect()
}

pub fn parse_formula(name: &str) -> Result<CmiFormula> {
    Ok(match name {
        "direct" => CmiFormula::Direct,
        "via-ab" | "via_ab" => CmiFormula::ViaAb,
        "via-cb" | "via_cb" => CmiFormula::ViaCb,
        "four-mi" | "four_mi" => CmiFormula::FourMi,
        "purified" => CmiFormula::Purified,
        _ => bail!("unknown CMI formula `{name}` (direct, via-ab, via-cb, four-mi, purified)"),
    })
}

pub const MEASURES: [&str; 7] = [
    "entropy",
    "conditional-entropy",
    "mi",
    "cmi",
    "secrecy",
    "interaction",
    "info-gap",
];

/// A named measure on a fixed partition.
#[derive(Clone, Debug)]
pub struct MeasureSpec {
    pub name: String,
    pub parts: Vec<Vec<String>>,
    pub cond: Vec<String>,
    pub formula: CmiFormula,
}

impl MeasureSpec {
    pub fn new(name: &str, parts: &str, cond: &str, formula: &str) -> Result<Self> {
        let spec = Self {
            name: name.to_string(),
            parts: parse_parts(parts),
            cond: parse_group(cond),
            formula: parse_formula(formula)?,
        };
        let n = spec.parts.len();
        let need = match name {
            "entropy" | "conditional-entropy" | "info-gap" => 1,
            "mi" | "cmi" | "secrecy" | "interaction" => 2,
            _ => bail!("unknown measure `{name}` (one of {})", MEASURES.join(", ")),
        };
        if n < need {
            bail!("measure `{name}` needs at least {need} part(s), got {n}");
        }
        Ok(spec)
    }

    /// Primed partners for `info-gap`: each label with a trailing `'`.
    fn primed(&self) -> Vec<Vec<String>> {
        self.parts
            .iter()
            .map(|p| p.iter().map(|l| format!("{l}'")).collect())
            .collect()
    }

    pub fn evaluate(&self, s: &State) -> qcorr::Result<MeasureValue<f64>> {
        let parts = &self.parts;
        let v = match self.name.as_str() {
            "entropy" => {
                let h = von_neumann_entropy(&s.marginal(&parts[0])?)?;
                MeasureValue::new(h, FormulaTag::Entropy)
            }
            "conditional-entropy" => MeasureValue::new(
                conditional_entropy_ext(s, &parts[0], &self.cond)?,
                FormulaTag::ConditionalEntropy,
            ),
            "mi" if self.cond.is_empty() => mutual_information(s, parts)?,
            "mi" => cmi_multipartite(s, parts, &self.cond)?,
            "cmi" if parts.len() == 2 => cmi(s, &parts[0], &parts[1], &self.cond, self.formula)?,
            "cmi" => cmi_multipartite(s, parts, &self.cond)?,
            "secrecy" => secrecy_monotone(s, parts, &self.cond)?,
            "interaction" => interaction_information(s, parts)?,
            "info-gap" => information_gap_chain(s, &self.primed(), parts)?,
            other => return Err(qcorr::Error::UnknownName(other.into())),
        };
        Ok(v)
    }

    /// Entropic upper bound, where one is defined for the measure.
    pub fn upper_bound(&self, s: &State) -> Result<Option<f64>> {
        let parts = &self.parts;
        let which = match self.name.as_str() {
            "mi" if self.cond.is_empty() && parts.len() == 2 => {
                UpperBound::mi(&parts[0], &parts[1])
            }
            "mi" if self.cond.is_empty() => UpperBound::multi_mi(parts),
            "cmi" if parts.len() == 2 => UpperBound::cmi(&parts[0], &parts[1], &self.cond),
            "mi" | "cmi" => UpperBound::multi_cmi(parts, &self.cond),
            "secrecy" if self.cond.is_empty() => UpperBound::secrecy(parts),
            "interaction" => UpperBound::interaction(parts),
            "info-gap" => UpperBound::info_gap(parts),
            _ => return Ok(None),
        };
        Ok(Some(
            upper_bound(s, &which).context("evaluating the upper bound")?,
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parts_and_groups() {
        assert_eq!(parse_parts("A,B; C;"), vec![vec!["A", "B"], vec!["C"]]);
        assert_eq!(parse_group("A1+A2"), vec!["A1", "A2"]);
        assert!(parse_group("").is_empty());
    }

    #[test]
    fn rejects_unknown_and_short() {
        assert!(MeasureSpec::new("nope", "A;B", "", "direct").is_err());
        assert!(MeasureSpec::new("cmi", "A", "B", "direct").is_err());
        assert!(MeasureSpec::new("cmi", "A;C", "B", "bogus").is_err());
    }
}
