use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::FormulaTag;

/// Serialized result of one measure evaluation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureRecord {
    pub measure: String,
    pub partition: Vec<Vec<String>>,
    /// Conditioning system, empty when unconditioned.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub condition: Vec<String>,
    /// `None` encodes `+∞`.
    pub value_nats: Option<f64>,
    pub formula_tag: FormulaTag,
    pub bounds: BTreeMap<String, f64>,
}

impl MeasureRecord {
    pub fn new(
        measure: &str,
        partition: Vec<Vec<String>>,
        value: f64,
        formula_tag: FormulaTag,
    ) -> Self {
        Self {
            measure: measure.to_string(),
            partition,
            condition: Vec::new(),
            value_nats: value.is_finite().then_some(value),
            formula_tag,
            bounds: BTreeMap::new(),
        }
    }

    pub fn with_condition(mut self, condition: Vec<String>) -> Self {
        self.condition = condition;
        self
    }

    pub fn with_bound(mut self, name: &str, value: f64) -> Self {
        self.bounds.insert(name.to_string(), value);
        self
    }

    pub fn to_json(&self) -> crate::Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// One-line human-readable summary.
    pub fn summary(&self) -> String {
        let parts: Vec<String> = self.partition.iter().map(|p| p.join("")).collect();
        let value = self
            .value_nats
            .map_or("+inf".to_string(), |v| format!("{v:.12}"));
        let cond = if self.condition.is_empty() {
            String::new()
        } else {
            format!("|{}", self.condition.join(""))
        };
        format!(
            "{}({}{cond}) = {} nats [{:?}]",
            self.measure,
            parts.join(":"),
            value,
            self.formula_tag
        )
    }
}
