//! Serialization of gestural scores.
//!
//! The JSON schema is stable and deterministic: object keys follow struct
//! order, gestures keep score order, and numbers are 64-bit floats written
//! in shortest round-trip form, so identical scores serialize to identical
//! bytes.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::timing::{ClipMode, GesturalScore, ParameterTable, ScoreGesture};
use crate::tract::TractVar;

#[derive(Debug, Error)]
pub enum ScoreIoError {
    #[error("malformed score JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown tract variable `{0}`")]
    UnknownTract(String),
    #[error("unknown clip mode `{0}`")]
    UnknownClip(String),
    #[error("unknown gesture class `{0}`")]
    UnknownClass(String),
    #[error("score span must be [0, end] with end >= 0")]
    BadSpan,
    #[error("gesture `{0}` has non-finite or inverted timing")]
    BadTiming(String),
}

#[derive(Serialize, Deserialize)]
struct ScoreDoc {
    utterance: Vec<String>,
    span_ms: [f64; 2],
    gestures: Vec<GestureDoc>,
}

#[derive(Serialize, Deserialize)]
struct GestureDoc {
    tract_var: String,
    code: u32,
    class: String,
    target: f64,
    cd_category: String,
    cl_category: String,
    start_ms: f64,
    end_ms: f64,
    eigenperiod_ms: f64,
    assoc_deg: f64,
    release_deg: f64,
    segment: String,
    segment_index: usize,
    role: String,
    clip: String,
}

/// Renders a score as pretty-printed JSON.
pub fn score_to_json(score: &GesturalScore) -> String {
    let doc = ScoreDoc {
        utterance: score.utterance.clone(),
        span_ms: score.span_ms,
        gestures: score
            .gestures
            .iter()
            .map(|g| GestureDoc {
                tract_var: g.tract_var.as_str().to_string(),
                code: g.code,
                class: g.class.clone(),
                target: g.target,
                cd_category: g.cd_category.clone(),
                cl_category: g.cl_category.clone(),
                start_ms: g.start_ms,
                end_ms: g.end_ms,
                eigenperiod_ms: g.eigenperiod_ms,
                assoc_deg: g.assoc_deg,
                release_deg: g.release_deg,
                segment: g.segment.clone(),
                segment_index: g.segment_index,
                role: g.role.clone(),
                clip: g.clip.as_str().to_string(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("score serializes");
    s.push('\n');
    s
}

/// Parses a score back from JSON; gesture kinds are recovered from the
/// parameter table's class entries.
pub fn score_from_json(text: &str, table: &ParameterTable) -> Result<GesturalScore, ScoreIoError> {
    let doc: ScoreDoc = serde_json::from_str(text)?;
    if !(doc.span_ms[0] == 0.0 && doc.span_ms[1] >= 0.0 && doc.span_ms[1].is_finite()) {
        return Err(ScoreIoError::BadSpan);
    }
    let mut gestures = Vec::with_capacity(doc.gestures.len());
    for g in doc.gestures {
        let tract_var = TractVar::parse(&g.tract_var)
            .map_err(|_| ScoreIoError::UnknownTract(g.tract_var.clone()))?;
        let clip = ClipMode::parse(&g.clip).ok_or(ScoreIoError::UnknownClip(g.clip.clone()))?;
        let kind = table
            .class(&g.class)
            .map_err(|_| ScoreIoError::UnknownClass(g.class.clone()))?
            .kind;
        let finite = [g.target, g.start_ms, g.end_ms, g.eigenperiod_ms, g.assoc_deg, g.release_deg]
            .iter()
            .all(|v| v.is_finite());
        if !finite || g.end_ms < g.start_ms || g.eigenperiod_ms <= 0.0 {
            return Err(ScoreIoError::BadTiming(g.segment.clone()));
        }
        gestures.push(ScoreGesture {
            tract_var,
            code: g.code,
            class: g.class,
            kind,
            target: g.target,
            cd_category: g.cd_category,
            cl_category: g.cl_category,
            start_ms: g.start_ms,
            end_ms: g.end_ms,
            eigenperiod_ms: g.eigenperiod_ms,
            assoc_deg: g.assoc_deg,
            release_deg: g.release_deg,
            segment: g.segment,
            segment_index: g.segment_index,
            role: g.role,
            clip,
        });
    }
    Ok(GesturalScore {
        utterance: doc.utterance,
        span_ms: doc.span_ms,
        gestures,
    })
}
