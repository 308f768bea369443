//! Tract variables: the controllable dimensions of the vocal tract model.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// The ten control dimensions. Constriction-degree and -location pairs share
/// an articulator: LP/LA the lips, TH/TP the tongue body, TTH/TTP the tongue
/// tip; VA is velic aperture, GA glottal aperture, PR lung pressure and CT
/// vocal cord tension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TractVar {
    VA,
    LP,
    LA,
    TH,
    TP,
    TTH,
    TTP,
    PR,
    CT,
    GA,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("unknown tract variable `{0}`")]
pub struct UnknownTractVar(pub String);

impl TractVar {
    pub const ALL: [TractVar; 10] = [
        TractVar::VA,
        TractVar::LP,
        TractVar::LA,
        TractVar::TH,
        TractVar::TP,
        TractVar::TTH,
        TractVar::TTP,
        TractVar::PR,
        TractVar::CT,
        TractVar::GA,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TractVar::VA => "VA",
            TractVar::LP => "LP",
            TractVar::LA => "LA",
            TractVar::TH => "TH",
            TractVar::TP => "TP",
            TractVar::TTH => "TTH",
            TractVar::TTP => "TTP",
            TractVar::PR => "PR",
            TractVar::CT => "CT",
            TractVar::GA => "GA",
        }
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|v| *v == self).unwrap()
    }

    pub fn parse(s: &str) -> Result<TractVar, UnknownTractVar> {
        Self::ALL
            .iter()
            .copied()
            .find(|v| v.as_str() == s)
            .ok_or_else(|| UnknownTractVar(s.to_string()))
    }
}

impl std::fmt::Display for TractVar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
