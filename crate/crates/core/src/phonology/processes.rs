//! The monotonic voicing constraints and word assembly.
//!
//! Final devoicing and onset voicing are not rules that rewrite features;
//! they are conditional descriptions conjoined with the lexicon entries.
//! Each is a disjunction whose cases cover all segments, so attaching one
//! never makes a well-formed word unsatisfiable — it only narrows the
//! secondary gesture state where its antecedent holds.

use crate::lattice::TypeLattice;
use crate::phonology::inventory::{SecondaryPolicy, SegmentInventory};
use crate::phonology::syllable::{syllabify, PhonWord};
use crate::phonology::PhonologyError;
use crate::solve::Constraint;
use crate::term::{and, at_path, not, or, ty, FeatureTerm};
use crate::timing::{plan_timing, ParameterTable, ScorePlan, TimingError};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BuildError {
    #[error(transparent)]
    Phonology(#[from] PhonologyError),
    #[error(transparent)]
    Timing(#[from] TimingError),
}

/// Obstruents are voiceless in the syllable coda:
/// `self:(seg:~obstruent ; seg:obstruent & (~coda ; coda & seg:secondary:voiceless))`.
///
/// `coda` denotes only `pure_coda`, so ambisyllabic segments fall under the
/// `~coda` case and stay open for the onset constraint.
pub fn final_devoicing(seg_path: &str) -> FeatureTerm {
    let class = format!("{seg_path}.class");
    let role = format!("{seg_path}.role");
    let secondary = format!("{seg_path}.secondary");
    or(vec![
        at_path(&class, not(ty("obstruent"))),
        and(vec![
            at_path(&class, ty("obstruent")),
            or(vec![
                at_path(&role, not(ty("coda"))),
                and(vec![
                    at_path(&role, ty("coda")),
                    at_path(&secondary, ty("voiceless")),
                ]),
            ]),
        ]),
    ])
}

/// Alternating obstruents are voiced in the syllable onset:
/// `self:(~in_onset ; in_onset & seg:secondary:inactive)`.
pub fn voiced_in_onset(seg_path: &str) -> FeatureTerm {
    let role = format!("{seg_path}.role");
    let secondary = format!("{seg_path}.secondary");
    or(vec![
        at_path(&role, not(ty("in_onset"))),
        and(vec![
            at_path(&role, ty("in_onset")),
            at_path(&secondary, ty("inactive")),
        ]),
    ])
}

/// A word ready for solving: lexicon terms, role assignment, process
/// constraints and the timing equations, plus the gesture plan needed to
/// assemble the solved score.
#[derive(Clone, Debug)]
pub struct WordProblem {
    pub constraints: Vec<Constraint>,
    pub word: PhonWord,
    pub plan: ScorePlan,
}

/// Conjoins everything known about a segment id sequence.
pub fn build_word(
    lattice: &TypeLattice,
    inv: &SegmentInventory,
    table: &ParameterTable,
    ids: &[&str],
) -> Result<WordProblem, BuildError> {
    // The process terms are spelled over these names.
    for required in ["obstruent", "coda", "in_onset", "voiceless", "inactive"] {
        if !lattice.contains(required) {
            return Err(BuildError::Phonology(PhonologyError::MissingType(
                required.to_string(),
            )));
        }
    }
    let word = syllabify(inv, ids)?;
    let mut constraints: Vec<Constraint> = Vec::new();

    for (pos, &seg_idx) in word.seg_refs.iter().enumerate() {
        let seg = inv.get(seg_idx);
        let path = format!("seg{pos}");
        let mut lex = vec![at_path(&format!("{path}.class"), ty(seg.class.clone()))];
        if let SecondaryPolicy::Fixed(state) = &seg.policy {
            lex.push(at_path(&format!("{path}.secondary"), ty(state.clone())));
        }
        constraints.push(Constraint::new(
            format!("lex:{}@{pos}", seg.id),
            and(lex),
        ));

        if let Some(role) = word.roles[pos] {
            constraints.push(Constraint::new(
                format!("role:{}@{pos}", role.type_name()),
                at_path(&format!("{path}.role"), ty(role.type_name())),
            ));
            constraints.push(Constraint::new(
                format!("final_devoicing@{pos}"),
                final_devoicing(&path),
            ));
            if seg.alternating() {
                constraints.push(Constraint::new(
                    format!("voiced_in_onset@{pos}"),
                    voiced_in_onset(&path),
                ));
            }
        }
    }

    let plan = plan_timing(&word, inv, table)?;
    constraints.extend(plan.constraints.iter().cloned());

    Ok(WordProblem {
        constraints,
        word,
        plan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::default_setup;
    use crate::solve::solve;

    fn voicing_of(word: &[&str], position: usize) -> &'static str {
        let (lattice, table, inv) = default_setup();
        let problem = build_word(&lattice, &inv, &table, word).unwrap();
        let solution = solve(&lattice, &problem.constraints).unwrap();
        let path = format!("seg{position}.secondary");
        if solution.entails_type(&lattice, &path, "voiceless") {
            "voiceless"
        } else if solution.entails_type(&lattice, &path, "inactive")
            || solution.entails_type(&lattice, &path, "velic")
        {
            "voiced"
        } else {
            "open"
        }
    }

    #[test]
    fn coda_b_of_ebbt_surfaces_voiceless() {
        assert_eq!(voicing_of(&["ʔ", "ɛ", "b", "t"], 2), "voiceless");
    }

    #[test]
    fn coda_d_of_bund_surfaces_voiceless() {
        assert_eq!(voicing_of(&["b", "ʊ", "n", "d"], 3), "voiceless");
    }

    #[test]
    fn coda_sonorant_is_untouched_by_devoicing() {
        // n in coda satisfies the ~obstruent case; no glottal gesture.
        assert_eq!(voicing_of(&["b", "ʊ", "n", "d"], 2), "voiced");
    }

    #[test]
    fn ambisyllabic_b_of_ebbe_stays_voiced() {
        assert_eq!(voicing_of(&["ʔ", "ɛ", "b", "ə"], 2), "voiced");
    }

    #[test]
    fn onset_g_of_jagen_stays_voiced() {
        assert_eq!(voicing_of(&["j", "aː", "g", "ə", "n"], 2), "voiced");
    }

    #[test]
    fn empty_word_is_an_error() {
        let (lattice, table, inv) = default_setup();
        assert!(matches!(
            build_word(&lattice, &inv, &table, &[]),
            Err(BuildError::Phonology(PhonologyError::EmptyWord))
        ));
    }

    #[test]
    fn attachment_order_does_not_change_voicing() {
        // Re-solving with the constraint list reversed gives identical
        // solved paths: no feature changing, conjunction only.
        let (lattice, table, inv) = default_setup();
        let problem = build_word(&lattice, &inv, &table, &["ʔ", "ɛ", "b", "t"]).unwrap();
        let forward = solve(&lattice, &problem.constraints).unwrap();
        let mut reversed = problem.constraints.clone();
        reversed.reverse();
        let backward = solve(&lattice, &reversed).unwrap();
        let f: Vec<_> = forward.paths().collect();
        let b: Vec<_> = backward.paths().collect();
        assert_eq!(f, b);
        assert_eq!(forward.bindings(), backward.bindings());
    }
}
