//! Quantitative gesture records, phase arithmetic and the association rules
//! that fix absolute timing of all gestures in an utterance.
//!
//! Every gesture carries an inherent phase scale: 0°–360° spans one
//! eigenperiod. The end of its activation interval is the release phase
//! point, `end = start + eigenperiod·release/360`, posted as an affine
//! equation so timing resolves in any order, even when a start time is still
//! unknown. Association equates phase points across gestures: onset
//! constituents anchor to the start of their syllable's vocalic gesture,
//! coda constituents to its end, cluster members chain release-to-assoc, and
//! secondary (glottal/velic) gestures anchor to their host's assoc point.

use std::collections::BTreeMap;

use num_traits::Signed;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::affine::{rat_int, rat_to_f64, Determination, Rat};
use crate::lattice::TypeLattice;
use crate::phonology::inventory::SegmentInventory;
use crate::phonology::syllable::{PhonWord, SyllableRole};
use crate::solve::{Constraint, Solution};
use crate::term::{at_path, equal, ArithExpr, FeatureTerm};
use crate::tract::TractVar;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TimingError {
    #[error("unknown gesture class `{0}`")]
    UnknownClass(String),
    #[error("undetermined timing: {0:?}")]
    UndeterminedTiming(Vec<String>),
    #[error("gesture `{0}` starts before t = 0")]
    NegativeStart(String),
    #[error("vocalic tier has a gap between `{0}` and `{1}`")]
    VocalicGap(String, String),
    #[error("consonantal gesture `{0}` does not overlap any vocalic gesture")]
    NoVowelOverlap(String),
    #[error("activation interval of `{0}` violates end = start + eigenperiod·release/360")]
    ResidualViolation(String),
}

/// Broad temporal behaviour of a gesture class.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GestureKind {
    Vocalic,
    Consonantal,
    Opening,
}

impl GestureKind {
    pub fn as_str(self) -> &'static str {
        match self {
            GestureKind::Vocalic => "vocalic",
            GestureKind::Consonantal => "consonantal",
            GestureKind::Opening => "opening",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "vocalic" => Some(GestureKind::Vocalic),
            "consonantal" => Some(GestureKind::Consonantal),
            "opening" => Some(GestureKind::Opening),
            _ => None,
        }
    }
}

/// Output saturation mode for a gesture.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClipMode {
    /// Saturate at the tract variable's contact bounds; targets may overshoot
    /// past them to guarantee firm closure.
    Default,
    /// Saturate only at the physical range.
    None,
}

impl ClipMode {
    pub fn as_str(self) -> &'static str {
        match self {
            ClipMode::Default => "default",
            ClipMode::None => "none",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "default" => Some(ClipMode::Default),
            "none" => Some(ClipMode::None),
            _ => None,
        }
    }
}

/// A gesture as specified in the lexicon: what constriction to make, where,
/// on which tract variable, with which class of timing parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct GestureSpec {
    pub tract: TractVar,
    pub class: String,
    pub cd_category: String,
    pub cl_category: String,
    pub target: Rat,
    pub clip: ClipMode,
}

/// Timing parameters of one gesture class.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassParams {
    pub kind: GestureKind,
    pub eigenperiod: Rat,
    pub assoc: Rat,
    pub release: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TractParams {
    pub var: TractVar,
    pub code: u32,
    pub neutral: Rat,
    pub min: Rat,
    pub max: Rat,
    pub clip_lo: Rat,
    pub clip_hi: Rat,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenderSettings {
    pub neutral_eigenperiod: Rat,
    pub ga_threshold: Rat,
    pub pr_threshold: Rat,
}

impl Default for RenderSettings {
    fn default() -> Self {
        RenderSettings {
            neutral_eigenperiod: rat_int(250),
            ga_threshold: crate::affine::rat(1, 2),
            pr_threshold: crate::affine::rat(1, 2),
        }
    }
}

/// Per-class timing parameters and per-tract-variable physical data.
#[derive(Clone, Debug, Default)]
pub struct ParameterTable {
    classes: BTreeMap<String, ClassParams>,
    tract: BTreeMap<TractVar, TractParams>,
    // Context-sensitive release: optional per-(class, role) override.
    release_overrides: BTreeMap<(String, String), Rat>,
    pub render: RenderSettings,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TableError {
    #[error("duplicate gesture class `{0}`")]
    DuplicateClass(String),
    #[error("gesture class `{0}`: {1}")]
    InvalidClass(String, String),
    #[error("tract variable `{0}`: {1}")]
    InvalidTract(String, String),
    #[error("release override references unknown class `{0}`")]
    UnknownOverrideClass(String),
}

impl ParameterTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_class(&mut self, name: &str, params: ClassParams) -> Result<(), TableError> {
        if self.classes.contains_key(name) {
            return Err(TableError::DuplicateClass(name.to_string()));
        }
        validate_phases(name, &params)?;
        self.classes.insert(name.to_string(), params);
        Ok(())
    }

    pub fn set_tract(&mut self, params: TractParams) -> Result<(), TableError> {
        let name = params.var.as_str().to_string();
        if params.min >= params.max {
            return Err(TableError::InvalidTract(name, "min must be below max".into()));
        }
        if params.neutral < params.min || params.neutral > params.max {
            return Err(TableError::InvalidTract(
                name,
                "neutral must lie within [min, max]".into(),
            ));
        }
        if params.clip_lo < params.min
            || params.clip_hi > params.max
            || params.clip_lo >= params.clip_hi
        {
            return Err(TableError::InvalidTract(
                name,
                "clip bounds must be ordered and within [min, max]".into(),
            ));
        }
        self.tract.insert(params.var, params);
        Ok(())
    }

    pub fn add_release_override(
        &mut self,
        class: &str,
        role: &str,
        release: Rat,
    ) -> Result<(), TableError> {
        let Some(base) = self.classes.get(class) else {
            return Err(TableError::UnknownOverrideClass(class.to_string()));
        };
        let probe = ClassParams {
            release: release.clone(),
            ..base.clone()
        };
        validate_phases(class, &probe)?;
        self.release_overrides
            .insert((class.to_string(), role.to_string()), release);
        Ok(())
    }

    pub fn class(&self, name: &str) -> Result<&ClassParams, TimingError> {
        self.classes
            .get(name)
            .ok_or_else(|| TimingError::UnknownClass(name.to_string()))
    }

    pub fn has_class(&self, name: &str) -> bool {
        self.classes.contains_key(name)
    }

    /// Class parameters with any context-sensitive release override applied.
    pub fn class_for_role(&self, name: &str, role: &str) -> Result<ClassParams, TimingError> {
        let mut params = self.class(name)?.clone();
        if let Some(r) = self.release_overrides.get(&(name.to_string(), role.to_string())) {
            params.release = r.clone();
        }
        Ok(params)
    }

    pub fn tract(&self, var: TractVar) -> Option<&TractParams> {
        self.tract.get(&var)
    }

    pub fn is_complete(&self) -> bool {
        TractVar::ALL.iter().all(|v| self.tract.contains_key(v))
    }
}

fn validate_phases(name: &str, p: &ClassParams) -> Result<(), TableError> {
    let zero = Rat::from_integer(0.into());
    if p.eigenperiod <= zero {
        return Err(TableError::InvalidClass(
            name.into(),
            "eigenperiod must be positive".into(),
        ));
    }
    if p.release <= zero || p.release > rat_int(720) {
        return Err(TableError::InvalidClass(
            name.into(),
            "release must satisfy 0 < release <= 720".into(),
        ));
    }
    if p.assoc < zero || p.assoc > p.release {
        return Err(TableError::InvalidClass(
            name.into(),
            "assoc must satisfy 0 <= assoc <= release".into(),
        ));
    }
    Ok(())
}

/// `start + eigenperiod·phase/360`, evaluated exactly.
pub fn phase_point(start: &Rat, eigenperiod: &Rat, phase: &Rat) -> Rat {
    start + eigenperiod * phase / rat_int(360)
}

/// The same phase point as a symbolic expression over a start variable, so
/// it can be posted before the start time is known.
pub fn phase_point_expr(start: ArithExpr, eigenperiod: &Rat, phase: &Rat) -> ArithExpr {
    start.add(
        ArithExpr::constant(eigenperiod.clone())
            .mul(ArithExpr::constant(phase.clone()).div(ArithExpr::constant(rat_int(360)))),
    )
}

/// Timing record of one gesture: endpoint variables plus per-class constants.
#[derive(Clone, Debug, PartialEq)]
pub struct Timing {
    pub start: String,
    pub end: String,
    pub eigenperiod: Rat,
    pub assoc: Rat,
    pub release: Rat,
}

impl Timing {
    pub fn start_expr(&self) -> ArithExpr {
        ArithExpr::var(self.start.clone())
    }

    pub fn end_expr(&self) -> ArithExpr {
        ArithExpr::var(self.end.clone())
    }

    pub fn assoc_point(&self) -> ArithExpr {
        phase_point_expr(self.start_expr(), &self.eigenperiod, &self.assoc)
    }

    pub fn release_point(&self) -> ArithExpr {
        phase_point_expr(self.start_expr(), &self.eigenperiod, &self.release)
    }
}

/// The endpoint equation `end = phase_point(start, eigenperiod, release)`.
pub fn end_constraint(name: impl Into<String>, t: &Timing) -> Constraint {
    Constraint::new(name, equal(t.end_expr(), t.release_point()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GestureSlot {
    Primary,
    Secondary,
}

/// One gesture of a planned utterance, with its timing variables.
#[derive(Clone, Debug)]
pub struct GestureInstance {
    pub index: usize,
    pub position: usize,
    pub segment_id: String,
    pub role: String,
    pub slot: GestureSlot,
    pub spec: GestureSpec,
    pub params: ClassParams,
    pub timing: Timing,
    /// For secondary gestures: emit to the score only when the solution
    /// entails this type at `state_path`.
    pub emit_when: Option<String>,
    pub state_path: Option<String>,
}

impl GestureInstance {
    fn label(&self) -> String {
        match self.slot {
            GestureSlot::Primary => format!("{}@{}", self.segment_id, self.position),
            GestureSlot::Secondary => format!("{}@{}:sec", self.segment_id, self.position),
        }
    }
}

/// Timing plan of a word: its gestures and the affine constraints that place
/// them, including the utterance anchor.
#[derive(Clone, Debug)]
pub struct ScorePlan {
    pub gestures: Vec<GestureInstance>,
    pub constraints: Vec<Constraint>,
    pub anchor: Rat,
}

fn role_name(role: Option<SyllableRole>) -> String {
    match role {
        Some(r) => r.type_name().to_string(),
        None => "boundary".to_string(),
    }
}

/// Builds gesture instances and the full set of timing equations for a
/// syllabified word. Secondary gestures are planned unconditionally; whether
/// they reach the score is decided by the solved secondary state.
pub fn plan_timing(
    word: &PhonWord,
    inv: &SegmentInventory,
    table: &ParameterTable,
) -> Result<ScorePlan, TimingError> {
    let mut gestures: Vec<GestureInstance> = Vec::new();
    let mut constraints: Vec<Constraint> = Vec::new();
    // position -> (primary gesture index, secondary gesture index)
    let mut primary_of: BTreeMap<usize, usize> = BTreeMap::new();

    for (pos, &seg_idx) in word.seg_refs.iter().enumerate() {
        let seg = inv.get(seg_idx);
        let role = role_name(word.roles[pos]);
        let g_idx = gestures.len();
        primary_of.insert(pos, g_idx);
        let params = table.class_for_role(&seg.primary.class, &role)?;
        let timing = Timing {
            start: format!("g{g_idx}.start"),
            end: format!("g{g_idx}.end"),
            eigenperiod: params.eigenperiod.clone(),
            assoc: params.assoc.clone(),
            release: params.release.clone(),
        };
        gestures.push(GestureInstance {
            index: g_idx,
            position: pos,
            segment_id: seg.id.clone(),
            role: role.clone(),
            slot: GestureSlot::Primary,
            spec: seg.primary.clone(),
            params,
            timing,
            emit_when: None,
            state_path: None,
        });

        if let Some(sec) = &seg.secondary {
            let s_idx = gestures.len();
            let params = table.class_for_role(&sec.spec.class, &role)?;
            let timing = Timing {
                start: format!("g{s_idx}.start"),
                end: format!("g{s_idx}.end"),
                eigenperiod: params.eigenperiod.clone(),
                assoc: params.assoc.clone(),
                release: params.release.clone(),
            };
            gestures.push(GestureInstance {
                index: s_idx,
                position: pos,
                segment_id: seg.id.clone(),
                role,
                slot: GestureSlot::Secondary,
                spec: sec.spec.clone(),
                params,
                timing,
                emit_when: Some(sec.emit_when.clone()),
                state_path: Some(format!("seg{pos}.secondary")),
            });
        }
    }

    // Endpoint equation for every gesture.
    for g in &gestures {
        constraints.push(end_constraint(format!("endtime:{}", g.label()), &g.timing));
    }

    // Variable bindings at the timing paths, so the solved structure carries
    // start/end at their attribute positions.
    for g in &gestures {
        let slot = match g.slot {
            GestureSlot::Primary => "primary",
            GestureSlot::Secondary => "secondary_gesture",
        };
        let base = format!("seg{}.{}.time", g.position, slot);
        constraints.push(Constraint::new(
            format!("time-vars:{}", g.label()),
            crate::term::and(vec![
                at_path(&format!("{base}.start"), FeatureTerm::Var(g.timing.start.clone())),
                at_path(&format!("{base}.end"), FeatureTerm::Var(g.timing.end.clone())),
            ]),
        ));
    }

    // Vocalic tier: nuclei in order, concatenated gap-free.
    let vocalic: Vec<usize> = word
        .syllables
        .iter()
        .map(|s| primary_of[&s.nucleus])
        .collect();
    for w in vocalic.windows(2) {
        let (a, b) = (&gestures[w[0]], &gestures[w[1]]);
        constraints.push(Constraint::new(
            format!("concat:{}-{}", a.label(), b.label()),
            equal(a.timing.end_expr(), b.timing.start_expr()),
        ));
    }

    // Onset and coda constituents per syllable. Leading boundary items join
    // the first onset, trailing ones the last coda (appendix position).
    for (si, syl) in word.syllables.iter().enumerate() {
        let nucleus = &gestures[primary_of[&syl.nucleus]];

        let mut onset_positions: Vec<usize> = Vec::new();
        if si == 0 {
            onset_positions.extend(word.leading_boundary.iter().copied());
        }
        onset_positions.extend(syl.onset.iter().copied());
        let onset: Vec<&GestureInstance> = onset_positions
            .iter()
            .map(|p| &gestures[primary_of[p]])
            .collect();
        if let Some((last, rest)) = onset.split_last() {
            // The nucleus-adjacent member anchors to the vocalic start.
            constraints.push(Constraint::new(
                format!("assoc:onset:{}", last.label()),
                equal(last.timing.assoc_point(), nucleus.timing.start_expr()),
            ));
            // Earlier members chain: next assoc point = previous release point.
            for pair in rest.iter().chain(std::iter::once(last)).collect::<Vec<_>>().windows(2) {
                let (c1, c2) = (pair[0], pair[1]);
                constraints.push(Constraint::new(
                    format!("chain:{}->{}", c1.label(), c2.label()),
                    equal(c2.timing.assoc_point(), c1.timing.release_point()),
                ));
            }
        }

        let mut coda_positions: Vec<usize> = syl.coda.clone();
        if si + 1 == word.syllables.len() {
            coda_positions.extend(word.trailing_boundary.iter().copied());
        }
        let coda: Vec<&GestureInstance> = coda_positions
            .iter()
            .map(|p| &gestures[primary_of[p]])
            .collect();
        if let Some((first, rest)) = coda.split_first() {
            constraints.push(Constraint::new(
                format!("assoc:coda:{}", first.label()),
                equal(first.timing.assoc_point(), nucleus.timing.end_expr()),
            ));
            for pair in std::iter::once(first).chain(rest.iter()).collect::<Vec<_>>().windows(2) {
                let (c1, c2) = (pair[0], pair[1]);
                constraints.push(Constraint::new(
                    format!("chain:{}->{}", c1.label(), c2.label()),
                    equal(c2.timing.assoc_point(), c1.timing.release_point()),
                ));
            }
        }
    }

    // Secondary gestures anchor their assoc point to the host's assoc point.
    let host_indices: Vec<(usize, usize)> = gestures
        .iter()
        .filter(|g| g.slot == GestureSlot::Secondary)
        .map(|g| (g.index, primary_of[&g.position]))
        .collect();
    for (sec_idx, host_idx) in host_indices {
        let sec = &gestures[sec_idx];
        let host = &gestures[host_idx];
        constraints.push(Constraint::new(
            format!("assoc:sec:{}", sec.label()),
            equal(sec.timing.assoc_point(), host.timing.assoc_point()),
        ));
    }

    // Utterance anchor: place the first vocalic gesture far enough in that
    // nothing starts before t = 0, with equality for the deepest lead.
    let anchor = compute_anchor(word, &gestures, &primary_of);
    if let Some(&first_vocalic) = vocalic.first() {
        constraints.push(Constraint::new(
            "anchor:utterance",
            equal(
                gestures[first_vocalic].timing.start_expr(),
                ArithExpr::constant(anchor.clone()),
            ),
        ));
    }

    Ok(ScorePlan {
        gestures,
        constraints,
        anchor,
    })
}

/// Lead time of every pre-nuclear gesture of the first syllable, measured
/// backwards from the vocalic start through the anchor and chain equations;
/// the maximum (clamped at zero) becomes the vocalic start time.
fn compute_anchor(
    word: &PhonWord,
    gestures: &[GestureInstance],
    primary_of: &BTreeMap<usize, usize>,
) -> Rat {
    let zero = Rat::from_integer(0.into());
    let Some(first) = word.syllables.first() else {
        return zero;
    };
    let mut onset_positions: Vec<usize> = Vec::new();
    onset_positions.extend(word.leading_boundary.iter().copied());
    onset_positions.extend(first.onset.iter().copied());
    if onset_positions.is_empty() {
        return zero;
    }

    let d360 = rat_int(360);
    let mut lead = zero.clone();
    // position -> lead of its primary gesture (start_V - start_g)
    let mut primary_lead: BTreeMap<usize, Rat> = BTreeMap::new();
    // (lead, assoc lead) of the member to the right in the chain
    let mut next: Option<(Rat, Rat)> = None;
    for &pos in onset_positions.iter().rev() {
        let g = &gestures[primary_of[&pos]];
        let assoc_lead = &g.params.eigenperiod * &g.params.assoc / &d360;
        let delta = match &next {
            // Nucleus-adjacent member: assoc point sits at the vocalic start.
            None => assoc_lead.clone(),
            // start_g = start_next + T_next·a_next/360 − T_g·r_g/360
            Some((next_lead, next_assoc)) => {
                let release_lead = &g.params.eigenperiod * &g.params.release / &d360;
                next_lead - next_assoc + release_lead
            }
        };
        if delta > lead {
            lead = delta.clone();
        }
        primary_lead.insert(pos, delta.clone());
        next = Some((delta, assoc_lead));
    }
    // Secondary gestures of first-syllable onset hosts can also lead.
    for g in gestures.iter().filter(|g| g.slot == GestureSlot::Secondary) {
        if let Some(host_delta) = primary_lead.get(&g.position) {
            let host = &gestures[primary_of[&g.position]];
            let host_assoc = &host.params.eigenperiod * &host.params.assoc / &d360;
            let sec_assoc = &g.params.eigenperiod * &g.params.assoc / &d360;
            let delta = host_delta - host_assoc + sec_assoc;
            if delta > lead {
                lead = delta;
            }
        }
    }
    if lead < zero {
        zero
    } else {
        lead
    }
}

/// One fully timed gesture of an assembled score.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreGesture {
    pub tract_var: TractVar,
    pub code: u32,
    pub class: String,
    pub kind: GestureKind,
    pub target: f64,
    pub cd_category: String,
    pub cl_category: String,
    pub start_ms: f64,
    pub end_ms: f64,
    pub eigenperiod_ms: f64,
    pub assoc_deg: f64,
    pub release_deg: f64,
    pub segment: String,
    pub segment_index: usize,
    pub role: String,
    pub clip: ClipMode,
}

/// The solved, fully timed set of gestures of one utterance.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct GesturalScore {
    pub utterance: Vec<String>,
    pub span_ms: [f64; 2],
    pub gestures: Vec<ScoreGesture>,
}

impl GesturalScore {
    pub fn vocalic(&self) -> impl Iterator<Item = &ScoreGesture> {
        self.gestures.iter().filter(|g| g.kind == GestureKind::Vocalic)
    }

    pub fn on_tract(&self, var: TractVar) -> impl Iterator<Item = &ScoreGesture> {
        self.gestures.iter().filter(move |g| g.tract_var == var)
    }
}

/// Extracts concrete millisecond values for every emitted gesture. Fails if
/// any timing variable is still undetermined; an under-constrained system is
/// an error, never a guess.
pub fn assemble_score(
    plan: &ScorePlan,
    solution: &Solution,
    lattice: &TypeLattice,
    table: &ParameterTable,
    utterance: &[String],
) -> Result<GesturalScore, TimingError> {
    let mut gestures: Vec<ScoreGesture> = Vec::new();
    let mut unbound: Vec<String> = Vec::new();
    let d360 = rat_int(360);

    for g in &plan.gestures {
        let emitted = match (&g.emit_when, &g.state_path) {
            (Some(ty), Some(path)) => solution.entails_type(lattice, path, ty),
            _ => true,
        };
        if !emitted {
            continue;
        }
        let start = match solution.value_of(&g.timing.start) {
            Ok(Determination::Determined(r)) => Some(r),
            _ => {
                unbound.push(g.timing.start.clone());
                None
            }
        };
        let end = match solution.value_of(&g.timing.end) {
            Ok(Determination::Determined(r)) => Some(r),
            _ => {
                unbound.push(g.timing.end.clone());
                None
            }
        };
        let (Some(start), Some(end)) = (start, end) else {
            continue;
        };
        // Exact in rational arithmetic by construction; verify anyway.
        let expected = &start + &g.params.eigenperiod * &g.params.release / &d360;
        if (&end - &expected).abs() != Rat::from_integer(0.into()) {
            return Err(TimingError::ResidualViolation(g.label()));
        }
        if start < Rat::from_integer(0.into()) {
            return Err(TimingError::NegativeStart(g.label()));
        }
        let tract = table
            .tract(g.spec.tract)
            .expect("tract table validated at load");
        gestures.push(ScoreGesture {
            tract_var: g.spec.tract,
            code: tract.code,
            class: g.spec.class.clone(),
            kind: g.params.kind,
            target: rat_to_f64(&g.spec.target),
            cd_category: g.spec.cd_category.clone(),
            cl_category: g.spec.cl_category.clone(),
            start_ms: rat_to_f64(&start),
            end_ms: rat_to_f64(&end),
            eigenperiod_ms: rat_to_f64(&g.params.eigenperiod),
            assoc_deg: rat_to_f64(&g.params.assoc),
            release_deg: rat_to_f64(&g.params.release),
            segment: g.segment_id.clone(),
            segment_index: g.position,
            role: g.role.clone(),
            clip: g.spec.clip,
        });
    }
    if !unbound.is_empty() {
        unbound.sort();
        unbound.dedup();
        return Err(TimingError::UndeterminedTiming(unbound));
    }

    let span_end = gestures
        .iter()
        .map(|g| g.end_ms)
        .fold(0.0_f64, f64::max);
    let score = GesturalScore {
        utterance: utterance.to_vec(),
        span_ms: [0.0, span_end],
        gestures,
    };
    validate_score(&score)?;
    Ok(score)
}

/// Score invariants: the vocalic tier is gap-free and every consonantal
/// gesture shares at least an instant with some vocalic activation interval
/// (activation intervals are closed).
pub fn validate_score(score: &GesturalScore) -> Result<(), TimingError> {
    let vocalic: Vec<&ScoreGesture> = score.vocalic().collect();
    for w in vocalic.windows(2) {
        if w[0].end_ms != w[1].start_ms {
            return Err(TimingError::VocalicGap(
                w[0].segment.clone(),
                w[1].segment.clone(),
            ));
        }
    }
    for g in &score.gestures {
        if g.kind != GestureKind::Consonantal {
            continue;
        }
        let overlaps = vocalic
            .iter()
            .any(|v| g.start_ms <= v.end_ms && v.start_ms <= g.end_ms);
        if !vocalic.is_empty() && !overlaps {
            return Err(TimingError::NoVowelOverlap(format!(
                "{}@{}",
                g.segment, g.segment_index
            )));
        }
    }
    Ok(())
}
