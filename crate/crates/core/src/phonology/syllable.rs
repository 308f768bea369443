//! Syllable roles and declarative syllabification.
//!
//! Roles are static types: a segment is `pure_onset`, `nucleus`, `pure_coda`
//! or ambisyllabic `codaonset`. The derived types `in_onset = {pure_onset,
//! codaonset}` and `coda = {pure_coda}` make the voicing constraints come out
//! right on ambisyllabic segments without any configurational machinery.
//!
//! Role assignment maximizes onsets against a configured legal-onset list; a
//! single consonant between a lax short vowel and a following vowel is
//! ambisyllabic; post-nuclear word-final consonants are codas.

use crate::phonology::inventory::{SegmentInventory, VowelLength};
use crate::phonology::PhonologyError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SyllableRole {
    PureOnset,
    Nucleus,
    PureCoda,
    CodaOnset,
}

impl SyllableRole {
    /// Name of the corresponding atom in the role lattice.
    pub fn type_name(self) -> &'static str {
        match self {
            SyllableRole::PureOnset => "pure_onset",
            SyllableRole::Nucleus => "nucleus",
            SyllableRole::PureCoda => "pure_coda",
            SyllableRole::CodaOnset => "codaonset",
        }
    }
}

/// One syllable, as positions into the word. An ambisyllabic segment appears
/// in the onset of the following syllable with role `codaonset`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Syllable {
    pub onset: Vec<usize>,
    pub nucleus: usize,
    pub coda: Vec<usize>,
}

/// A syllabified word: per-position roles plus derived syllable grouping.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhonWord {
    /// Canonical segment ids per position.
    pub ids: Vec<String>,
    /// Inventory index per position.
    pub seg_refs: Vec<usize>,
    /// One role atom per non-boundary position.
    pub roles: Vec<Option<SyllableRole>>,
    pub syllables: Vec<Syllable>,
    /// Word-initial boundary positions, attached to the first onset.
    pub leading_boundary: Vec<usize>,
    /// Word-final boundary positions, attached after the last coda.
    pub trailing_boundary: Vec<usize>,
}

/// Assigns syllable roles to a segment id sequence.
pub fn syllabify(inv: &SegmentInventory, word: &[&str]) -> Result<PhonWord, PhonologyError> {
    if word.is_empty() {
        return Err(PhonologyError::EmptyWord);
    }
    let mut seg_refs = Vec::with_capacity(word.len());
    let mut ids = Vec::with_capacity(word.len());
    for id in word {
        let idx = inv.lookup_idx(id)?;
        seg_refs.push(idx);
        ids.push(inv.get(idx).id.clone());
    }

    let n = word.len();
    let is_boundary: Vec<bool> = seg_refs.iter().map(|&i| inv.get(i).is_boundary).collect();
    let is_vowel: Vec<bool> = seg_refs.iter().map(|&i| inv.get(i).is_vowel).collect();

    let mut leading_boundary = Vec::new();
    let mut i = 0;
    while i < n && is_boundary[i] {
        leading_boundary.push(i);
        i += 1;
    }
    let mut trailing_boundary = Vec::new();
    let mut j = n;
    while j > i && is_boundary[j - 1] {
        trailing_boundary.push(j - 1);
        j -= 1;
    }
    trailing_boundary.reverse();
    let core: Vec<usize> = (i..j).collect();
    for &p in &core {
        if is_boundary[p] {
            return Err(PhonologyError::BoundaryInside(ids[p].clone()));
        }
    }

    let nuclei: Vec<usize> = core.iter().copied().filter(|&p| is_vowel[p]).collect();
    if nuclei.is_empty() {
        return Err(PhonologyError::NoVowel);
    }

    let mut roles: Vec<Option<SyllableRole>> = vec![None; n];
    let mut syllables: Vec<Syllable> = nuclei
        .iter()
        .map(|&p| Syllable {
            onset: Vec::new(),
            nucleus: p,
            coda: Vec::new(),
        })
        .collect();
    for &p in &nuclei {
        roles[p] = Some(SyllableRole::Nucleus);
    }

    // Word-initial consonants all join the first onset; word-final ones are
    // all codas.
    let first_nucleus = nuclei[0];
    let last_nucleus = *nuclei.last().unwrap();
    for &p in core.iter().filter(|&&p| p < first_nucleus) {
        roles[p] = Some(SyllableRole::PureOnset);
        syllables[0].onset.push(p);
    }
    for &p in core.iter().filter(|&&p| p > last_nucleus) {
        roles[p] = Some(SyllableRole::PureCoda);
        syllables.last_mut().unwrap().coda.push(p);
    }

    // Medial clusters between adjacent nuclei.
    for k in 0..nuclei.len() - 1 {
        let left = nuclei[k];
        let right = nuclei[k + 1];
        let cluster: Vec<usize> = (left + 1..right).collect();
        if cluster.is_empty() {
            continue;
        }
        let left_seg = inv.get(seg_refs[left]);
        if cluster.len() == 1 && left_seg.length == VowelLength::LaxShort {
            // Ambisyllabic: coda of σk and onset of σk+1 in one static type.
            let p = cluster[0];
            roles[p] = Some(SyllableRole::CodaOnset);
            syllables[k + 1].onset.push(p);
            continue;
        }
        // Onset maximization: longest legal suffix of the cluster becomes
        // the next onset; single consonants are always legal.
        let max_len = inv.max_onset_len().min(cluster.len());
        let mut split = cluster.len() - 1;
        for take in (1..=max_len).rev() {
            let suffix: Vec<String> = cluster[cluster.len() - take..]
                .iter()
                .map(|&p| ids[p].clone())
                .collect();
            if inv.is_legal_onset(&suffix) {
                split = cluster.len() - take;
                break;
            }
        }
        for (ci, &p) in cluster.iter().enumerate() {
            if ci < split {
                roles[p] = Some(SyllableRole::PureCoda);
                syllables[k].coda.push(p);
            } else {
                roles[p] = Some(SyllableRole::PureOnset);
                syllables[k + 1].onset.push(p);
            }
        }
    }

    Ok(PhonWord {
        ids,
        seg_refs,
        roles,
        syllables,
        leading_boundary,
        trailing_boundary,
    })
}
