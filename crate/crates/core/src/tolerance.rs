//! Process-wide numerical tolerances.
//!
//! Configure once at startup with [`set_tolerances`]; every routine reads a
//! snapshot through [`tolerances`].

use std::sync::RwLock;

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Tolerances {
    pub herm: f64,
    pub psd: f64,
    pub num: f64,
    pub trace: f64,
    pub agree: f64,
    pub eig_floor: f64,
    pub supp: f64,
    pub conv: f64,
    pub conv_model: f64,
    pub bound: f64,
    pub mono: f64,
    pub fr: f64,
    pub markov: f64,
    pub cptp: f64,
    pub choi_rank: f64,
    pub constraint: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            herm: 1e-9,
            psd: 1e-9,
            num: 1e-10,
            trace: 1e-10,
            agree: 1e-8,
            eig_floor: 1e-14,
            supp: 1e-10,
            conv: 1e-6,
            conv_model: 1e-3,
            bound: 1e-9,
            mono: 1e-9,
            fr: 1e-6,
            markov: 1e-8,
            cptp: 1e-9,
            choi_rank: 1e-10,
            constraint: 1e-9,
        }
    }
}

static GLOBAL: RwLock<Option<Tolerances>> = RwLock::new(None);

pub fn tolerances() -> Tolerances {
    GLOBAL
        .read()
        .map(|g| g.unwrap_or_default())
        .unwrap_or_default()
}

pub fn set_tolerances(t: Tolerances) {
    if let Ok(mut g) = GLOBAL.write() {
        *g = Some(t);
    }
}
