//! The segment inventory: lexicon entries bundling gestures with
//! phonological class and voicing policy.

use std::collections::BTreeMap;

use crate::lattice::TypeLattice;
use crate::phonology::PhonologyError;
use crate::timing::{GestureSpec, ParameterTable, TimingError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VowelLength {
    None,
    LaxShort,
    TenseLong,
}

impl VowelLength {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "-" | "none" => Some(VowelLength::None),
            "lax_short" => Some(VowelLength::LaxShort),
            "tense_long" => Some(VowelLength::TenseLong),
            _ => None,
        }
    }
}

/// How a segment's secondary gesture state is decided.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SecondaryPolicy {
    /// Pinned in the lexicon to a named state type (`voiceless`, `inactive`,
    /// `velic`, ...).
    Fixed(String),
    /// Left open; the attached process constraints decide. Only meaningful
    /// for the alternating obstruents.
    Alternating,
}

/// A secondary gesture plus the state type under which it surfaces.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondaryGesture {
    pub spec: GestureSpec,
    pub emit_when: String,
}

/// One lexicon entry.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub id: String,
    pub class: String,
    pub length: VowelLength,
    pub primary: GestureSpec,
    pub secondary: Option<SecondaryGesture>,
    pub policy: SecondaryPolicy,
    pub is_vowel: bool,
    pub is_boundary: bool,
}

impl Segment {
    pub fn alternating(&self) -> bool {
        self.policy == SecondaryPolicy::Alternating
    }
}

/// Immutable segment inventory with id/alias lookup and the legal complex
/// onsets used by syllabification.
#[derive(Clone, Debug, Default)]
pub struct SegmentInventory {
    segments: Vec<Segment>,
    by_id: BTreeMap<String, usize>,
    legal_onsets: Vec<Vec<String>>,
}

impl SegmentInventory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(
        &mut self,
        segment: Segment,
        aliases: &[String],
        lattice: &TypeLattice,
        table: &ParameterTable,
    ) -> Result<(), PhonologyError> {
        let id = segment.id.clone();
        let invalid = |msg: &str| PhonologyError::InvalidSegment {
            seg: id.clone(),
            msg: msg.to_string(),
        };
        if !lattice.contains(&segment.class) {
            return Err(invalid(&format!("unknown class `{}`", segment.class)));
        }
        check_gesture(&id, &segment.primary, table)?;
        if let Some(sec) = &segment.secondary {
            check_gesture(&id, &sec.spec, table)?;
            if !lattice.contains(&sec.emit_when) {
                return Err(invalid(&format!(
                    "secondary surfaces under unknown type `{}`",
                    sec.emit_when
                )));
            }
        }
        match &segment.policy {
            SecondaryPolicy::Fixed(state) => {
                if !lattice.contains(state) {
                    return Err(invalid(&format!("unknown secondary state `{state}`")));
                }
            }
            SecondaryPolicy::Alternating => {
                if segment.secondary.is_none() {
                    return Err(invalid("alternating segment needs a secondary gesture"));
                }
                // Alternation is the voicing alternation of obstruents.
                let class_ok = lattice
                    .ty(&segment.class)
                    .ok()
                    .zip(lattice.ty("obstruent").ok())
                    .map(|(c, o)| lattice.subsumed_by(c, o))
                    .unwrap_or(false);
                if !class_ok {
                    return Err(invalid("alternating segments must be obstruents"));
                }
            }
        }
        let idx = self.segments.len();
        if self.by_id.insert(id.clone(), idx).is_some() {
            return Err(PhonologyError::DuplicateSegment(id));
        }
        for alias in aliases {
            if self.by_id.insert(alias.clone(), idx).is_some() {
                return Err(PhonologyError::DuplicateSegment(alias.clone()));
            }
        }
        self.segments.push(segment);
        Ok(())
    }

    pub fn add_legal_onset(&mut self, cluster: Vec<String>) -> Result<(), PhonologyError> {
        let canonical: Result<Vec<String>, PhonologyError> = cluster
            .iter()
            .map(|id| self.lookup(id).map(|s| s.id.clone()))
            .collect();
        self.legal_onsets.push(canonical?);
        Ok(())
    }

    pub fn lookup(&self, id: &str) -> Result<&Segment, PhonologyError> {
        self.lookup_idx(id).map(|i| &self.segments[i])
    }

    pub fn lookup_idx(&self, id: &str) -> Result<usize, PhonologyError> {
        self.by_id
            .get(id)
            .copied()
            .ok_or_else(|| PhonologyError::UnknownSegment(id.to_string()))
    }

    pub fn get(&self, idx: usize) -> &Segment {
        &self.segments[idx]
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn segments(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter()
    }

    /// Is this id sequence (canonical ids) a legal complex onset?
    pub fn is_legal_onset(&self, cluster: &[String]) -> bool {
        if cluster.len() <= 1 {
            return true;
        }
        self.legal_onsets.iter().any(|c| c == cluster)
    }

    pub fn max_onset_len(&self) -> usize {
        self.legal_onsets.iter().map(|c| c.len()).max().unwrap_or(1)
    }
}

fn check_gesture(
    seg: &str,
    spec: &GestureSpec,
    table: &ParameterTable,
) -> Result<(), PhonologyError> {
    let invalid = |msg: String| PhonologyError::InvalidSegment {
        seg: seg.to_string(),
        msg,
    };
    match table.class(&spec.class) {
        Ok(_) => {}
        Err(TimingError::UnknownClass(c)) => {
            return Err(invalid(format!("unknown gesture class `{c}`")))
        }
        Err(e) => return Err(invalid(e.to_string())),
    }
    let Some(tract) = table.tract(spec.tract) else {
        return Err(invalid(format!(
            "tract variable `{}` missing from the parameter table",
            spec.tract
        )));
    };
    // Targets must lie within the physical range; the default clip bounds
    // may be tighter, letting closure targets overshoot contact.
    if spec.target < tract.min || spec.target > tract.max {
        return Err(invalid(format!(
            "target {} outside physical range of {}",
            crate::affine::rat_to_f64(&spec.target),
            spec.tract
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::default_setup;
    use crate::tract::TractVar;

    #[test]
    fn lookup_b_is_alternating_lip_stop() {
        let (lattice, table, inv) = default_setup();
        let b = inv.lookup("b").unwrap();
        assert!(b.alternating());
        assert_eq!(b.primary.tract, TractVar::LA);
        assert_eq!(b.primary.class, "stop");
        let class = lattice.ty(&b.class).unwrap();
        let obstruent = lattice.ty("obstruent").unwrap();
        assert!(lattice.subsumed_by(class, obstruent));
        let _ = table;
    }

    #[test]
    fn lookup_schwa_has_neutral_targets() {
        let (_, table, inv) = default_setup();
        let schwa = inv.lookup("ə").unwrap();
        assert!(schwa.is_vowel);
        let tract = table.tract(schwa.primary.tract).unwrap();
        assert_eq!(schwa.primary.target, tract.neutral);
    }

    #[test]
    fn unknown_id_is_an_error() {
        let (_, _, inv) = default_setup();
        assert!(matches!(
            inv.lookup("zz"),
            Err(PhonologyError::UnknownSegment(_))
        ));
    }

    #[test]
    fn aliases_resolve_to_the_same_entry() {
        let (_, _, inv) = default_setup();
        let a = inv.lookup_idx("ʔ").unwrap();
        let b = inv.lookup_idx("glottal_stop").unwrap();
        let c = inv.lookup_idx("q").unwrap();
        assert_eq!(a, b);
        assert_eq!(b, c);
    }

    #[test]
    fn corpus_segments_are_present() {
        let (_, _, inv) = default_setup();
        for id in [
            "ʔ", "aː", "ʊ", "oː", "ɛ", "ə", "iː", "b", "d", "g", "v", "z", "p", "t",
            "k", "f", "s", "n", "ŋ", "l", "j", "ʁ", "postphonatory_opening",
        ] {
            assert!(inv.lookup(id).is_ok(), "missing segment {id}");
        }
    }
}
