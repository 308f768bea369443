//! Batch front end: load configuration, run solve → associate → assemble →
//! render for one word, and emit score JSON, trajectory CSV, an SVG panel
//! plot and an optional human-readable solved structure.

use std::fs;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::config::{
    self, parse_inventory, parse_lattice, parse_params, ConfigError,
};
use crate::dynamics::{render, DynamicsError, Trajectory};
use crate::export::{trajectory_csv, trajectory_svg};
use crate::lattice::TypeLattice;
use crate::phonology::inventory::SegmentInventory;
use crate::phonology::processes::{build_word, BuildError, WordProblem};
use crate::phonology::PhonologyError;
use crate::score_json::score_to_json;
use crate::solve::{solve, Solution, SolveError};
use crate::timing::{assemble_score, GestureSlot, GesturalScore, ParameterTable, TimingError};

#[derive(Debug, Error)]
pub enum RunError {
    #[error("unsatisfiable constraints (failed at `{constraint}`)")]
    Unsatisfiable { constraint: String },
    #[error("word cannot be syllabified: {0}")]
    Unsyllabifiable(PhonologyError),
    #[error("undetermined timing for {0:?}")]
    UndeterminedTiming(Vec<String>),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl RunError {
    /// Process exit status: 2 unsatisfiable, 3 undetermined timing,
    /// 4 configuration or io problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Unsatisfiable { .. } | RunError::Unsyllabifiable(_) => 2,
            RunError::UndeterminedTiming(_) => 3,
            RunError::Config(_) | RunError::Io { .. } => 4,
        }
    }
}

impl From<SolveError> for RunError {
    fn from(e: SolveError) -> Self {
        match e {
            SolveError::Unsatisfiable { constraint } => RunError::Unsatisfiable { constraint },
            other => RunError::Config(other.to_string()),
        }
    }
}

impl From<BuildError> for RunError {
    fn from(e: BuildError) -> Self {
        match e {
            BuildError::Phonology(p) => match p {
                PhonologyError::EmptyWord
                | PhonologyError::NoVowel
                | PhonologyError::BoundaryInside(_) => RunError::Unsyllabifiable(p),
                other => RunError::Config(other.to_string()),
            },
            BuildError::Timing(t) => RunError::Config(t.to_string()),
        }
    }
}

impl From<TimingError> for RunError {
    fn from(e: TimingError) -> Self {
        match e {
            TimingError::UndeterminedTiming(vars) => RunError::UndeterminedTiming(vars),
            other => RunError::Config(other.to_string()),
        }
    }
}

impl From<DynamicsError> for RunError {
    fn from(e: DynamicsError) -> Self {
        RunError::Config(e.to_string())
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.to_string())
    }
}

/// Run configuration: where the knowledge files live, how to sample, what to
/// emit.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub lattice_path: Option<PathBuf>,
    pub params_path: Option<PathBuf>,
    pub inventory_path: Option<PathBuf>,
    pub sample_rate: f64,
    pub out_dir: PathBuf,
    pub emit_score: bool,
    pub emit_trajectory: bool,
    pub emit_plot: bool,
    pub explain: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            lattice_path: None,
            params_path: None,
            inventory_path: None,
            sample_rate: 1000.0,
            out_dir: PathBuf::from("."),
            emit_score: true,
            emit_trajectory: true,
            emit_plot: true,
            explain: false,
        }
    }
}

impl RunConfig {
    /// Point the three knowledge files at `dir/{lattice,params,inventory}.cfg`.
    pub fn with_config_dir(mut self, dir: &Path) -> Self {
        self.lattice_path = Some(dir.join("lattice.cfg"));
        self.params_path = Some(dir.join("params.cfg"));
        self.inventory_path = Some(dir.join("inventory.cfg"));
        self
    }
}

/// Loaded knowledge: the lattice, parameter table and inventory.
pub struct Knowledge {
    pub lattice: TypeLattice,
    pub table: ParameterTable,
    pub inventory: SegmentInventory,
}

fn read(path: &Path) -> Result<String, RunError> {
    fs::read_to_string(path).map_err(|source| RunError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Loads the configured knowledge files, falling back to built-ins.
pub fn load_knowledge(cfg: &RunConfig) -> Result<Knowledge, RunError> {
    let lattice_text = match &cfg.lattice_path {
        Some(p) => read(p)?,
        None => config::DEFAULT_LATTICE.to_string(),
    };
    let params_text = match &cfg.params_path {
        Some(p) => read(p)?,
        None => config::DEFAULT_PARAMS.to_string(),
    };
    let inventory_text = match &cfg.inventory_path {
        Some(p) => read(p)?,
        None => config::DEFAULT_INVENTORY.to_string(),
    };
    let lattice = parse_lattice(&lattice_text)?;
    let table = parse_params(&params_text)?;
    let inventory = parse_inventory(&inventory_text, &lattice, &table)?;
    Ok(Knowledge {
        lattice,
        table,
        inventory,
    })
}

/// Everything produced for one word.
pub struct RunOutcome {
    pub problem: WordProblem,
    pub solution: Solution,
    pub score: GesturalScore,
    pub trajectory: Option<Trajectory>,
    pub written: Vec<PathBuf>,
}

/// Solve and assemble one word against loaded knowledge.
pub fn synthesize_word(
    knowledge: &Knowledge,
    word: &[&str],
) -> Result<(WordProblem, Solution, GesturalScore), RunError> {
    let problem = build_word(
        &knowledge.lattice,
        &knowledge.inventory,
        &knowledge.table,
        word,
    )?;
    let solution = solve(&knowledge.lattice, &problem.constraints)?;
    let utterance: Vec<String> = problem.word.ids.clone();
    let score = assemble_score(
        &problem.plan,
        &solution,
        &knowledge.lattice,
        &knowledge.table,
        &utterance,
    )?;
    Ok((problem, solution, score))
}

/// Full pipeline for one word: solve, assemble, render, write artifacts.
pub fn run(word: &[&str], cfg: &RunConfig) -> Result<RunOutcome, RunError> {
    let knowledge = load_knowledge(cfg)?;
    let (problem, solution, score) = synthesize_word(&knowledge, word)?;

    let need_render = cfg.emit_trajectory || cfg.emit_plot;
    let trajectory = if need_render {
        Some(render(&score, cfg.sample_rate, &knowledge.table)?)
    } else {
        None
    };

    fs::create_dir_all(&cfg.out_dir).map_err(|source| RunError::Io {
        path: cfg.out_dir.clone(),
        source,
    })?;
    let mut written = Vec::new();
    let emit = |name: &str, contents: String| -> Result<PathBuf, RunError> {
        let path = cfg.out_dir.join(name);
        fs::write(&path, contents).map_err(|source| RunError::Io {
            path: path.clone(),
            source,
        })?;
        Ok(path)
    };

    if cfg.emit_score {
        written.push(emit("score.json", score_to_json(&score))?);
    }
    if let Some(traj) = &trajectory {
        if cfg.emit_trajectory {
            written.push(emit("trajectory.csv", trajectory_csv(traj))?);
        }
        if cfg.emit_plot {
            written.push(emit("plot.svg", trajectory_svg(&score, traj, &knowledge.table))?);
        }
    }
    if cfg.explain {
        let text = explain(&knowledge, &problem, &solution, &score);
        written.push(emit("explain.txt", text)?);
    }

    Ok(RunOutcome {
        problem,
        solution,
        score,
        trajectory,
        written,
    })
}

/// The solved per-segment attribute-value structure in indented text form.
pub fn explain(
    knowledge: &Knowledge,
    problem: &WordProblem,
    solution: &Solution,
    score: &GesturalScore,
) -> String {
    use std::fmt::Write as _;
    let mut out = String::new();
    let _ = writeln!(out, "utterance: {}", problem.word.ids.join(" "));
    let _ = writeln!(out, "span: {:.3} .. {:.3} ms", score.span_ms[0], score.span_ms[1]);
    for (pos, id) in problem.word.ids.iter().enumerate() {
        let _ = writeln!(out);
        let _ = writeln!(out, "seg{pos} {id}");
        let class = solution
            .type_at(&format!("seg{pos}.class"))
            .unwrap_or("top");
        let _ = writeln!(out, "  class: {class}");
        if let Some(role) = solution.type_at(&format!("seg{pos}.role")) {
            let _ = writeln!(out, "  role: {role}");
        }
        if let Some(state) = solution.type_at(&format!("seg{pos}.secondary")) {
            let _ = writeln!(out, "  secondary: {state}");
        }
        for g in &problem.plan.gestures {
            if g.position != pos {
                continue;
            }
            let slot = match g.slot {
                GestureSlot::Primary => "primary",
                GestureSlot::Secondary => "secondary_gesture",
            };
            let emitted = match (&g.emit_when, &g.state_path) {
                (Some(state), Some(path)) => {
                    solution.entails_type(&knowledge.lattice, path, state)
                }
                _ => true,
            };
            if !emitted {
                let _ = writeln!(out, "  {slot}: not emitted");
                continue;
            }
            let code = knowledge
                .table
                .tract(g.spec.tract)
                .map(|t| t.code)
                .unwrap_or_default();
            let _ = writeln!(out, "  {slot}:");
            let _ = writeln!(
                out,
                "    gesture: {} on {} (art {code})",
                g.spec.class, g.spec.tract
            );
            let _ = writeln!(
                out,
                "    cd: {}   cl: {}   target: {}   clip: {}",
                g.spec.cd_category,
                g.spec.cl_category,
                crate::affine::rat_to_f64(&g.spec.target),
                g.spec.clip.as_str()
            );
            let _ = writeln!(out, "    time:");
            for (label, var) in [("start", &g.timing.start), ("end", &g.timing.end)] {
                let value = match solution.value_of(var) {
                    Ok(crate::affine::Determination::Determined(r)) => {
                        format!("{:.3} ms", crate::affine::rat_to_f64(&r))
                    }
                    _ => "undetermined".to_string(),
                };
                let _ = writeln!(out, "      {label}: {value}");
            }
            let _ = writeln!(
                out,
                "      eigenperiod: {} ms",
                crate::affine::rat_to_f64(&g.params.eigenperiod)
            );
            let _ = writeln!(
                out,
                "      assoc: {}°   release: {}°",
                crate::affine::rat_to_f64(&g.params.assoc),
                crate::affine::rat_to_f64(&g.params.release)
            );
        }
    }
    out
}

/// Voicing verdict of one segment position in a solved word.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Voicing {
    Voiced,
    Voiceless,
    Open,
}

impl Voicing {
    pub fn as_str(self) -> &'static str {
        match self {
            Voicing::Voiced => "voiced",
            Voicing::Voiceless => "voiceless",
            Voicing::Open => "open",
        }
    }
}

/// Reads the surfaced voicing of position `pos` off a solution: an entailed
/// glottal-opening state is voiceless, an entailed inactive or velic state
/// is voiced.
pub fn voicing_of(lattice: &TypeLattice, solution: &Solution, pos: usize) -> Voicing {
    let path = format!("seg{pos}.secondary");
    if solution.entails_type(lattice, &path, "voiceless") {
        Voicing::Voiceless
    } else if solution.entails_type(lattice, &path, "inactive")
        || (lattice.contains("velic") && solution.entails_type(lattice, &path, "velic"))
    {
        Voicing::Voiced
    } else {
        Voicing::Open
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CorpusError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// One corpus entry: a word plus expected voicing verdicts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusEntry {
    pub name: String,
    pub ids: Vec<String>,
    /// (position selector, expected verdict)
    pub expectations: Vec<(CorpusSelector, Voicing)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CorpusSelector {
    Index(usize),
    Id(String),
}

/// Parses a corpus file: `name | segment ids | id=verdict ...`.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, CorpusError> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(CorpusError::Parse {
                line: line_no,
                msg: "expected: name | segment ids | expectations".into(),
            });
        }
        let name = fields[0].to_string();
        if name.is_empty() {
            return Err(CorpusError::Parse {
                line: line_no,
                msg: "empty word name".into(),
            });
        }
        let ids: Vec<String> = fields[1].split_whitespace().map(str::to_string).collect();
        if ids.is_empty() {
            return Err(CorpusError::Parse {
                line: line_no,
                msg: "empty segment list".into(),
            });
        }
        let mut expectations = Vec::new();
        for tok in fields[2].split_whitespace() {
            let Some((sel, verdict)) = tok.split_once('=') else {
                return Err(CorpusError::Parse {
                    line: line_no,
                    msg: format!("expected selector=verdict, got `{tok}`"),
                });
            };
            let verdict = match verdict {
                "voiced" => Voicing::Voiced,
                "voiceless" => Voicing::Voiceless,
                other => {
                    return Err(CorpusError::Parse {
                        line: line_no,
                        msg: format!("unknown verdict `{other}`"),
                    });
                }
            };
            let selector = match sel.strip_prefix('#') {
                Some(idx) => CorpusSelector::Index(idx.parse().map_err(|_| CorpusError::Parse {
                    line: line_no,
                    msg: format!("malformed index `{sel}`"),
                })?),
                None => CorpusSelector::Id(sel.to_string()),
            };
            expectations.push((selector, verdict));
        }
        if expectations.is_empty() {
            return Err(CorpusError::Parse {
                line: line_no,
                msg: "entry has no expectations".into(),
            });
        }
        entries.push(CorpusEntry {
            name,
            ids,
            expectations,
        });
    }
    Ok(entries)
}

/// One row of a corpus check.
#[derive(Clone, Debug)]
pub struct CorpusRow {
    pub name: String,
    pub detail: String,
    pub pass: bool,
}

/// Runs every corpus entry and compares solved voicing to the expectations.
pub fn check_corpus(
    knowledge: &Knowledge,
    entries: &[CorpusEntry],
) -> Result<Vec<CorpusRow>, RunError> {
    let mut rows = Vec::new();
    for entry in entries {
        let ids: Vec<&str> = entry.ids.iter().map(String::as_str).collect();
        match synthesize_word(knowledge, &ids) {
            Ok((problem, solution, _score)) => {
                let mut parts = Vec::new();
                let mut pass = true;
                for (sel, expected) in &entry.expectations {
                    let pos = match sel {
                        CorpusSelector::Index(i) => {
                            if *i >= problem.word.ids.len() {
                                pass = false;
                                parts.push(format!("#{i}: out of range"));
                                continue;
                            }
                            *i
                        }
                        CorpusSelector::Id(id) => {
                            let canonical = knowledge
                                .inventory
                                .lookup(id)
                                .map(|s| s.id.clone())
                                .unwrap_or_else(|_| id.clone());
                            let hits: Vec<usize> = problem
                                .word
                                .ids
                                .iter()
                                .enumerate()
                                .filter(|(_, w)| **w == canonical)
                                .map(|(p, _)| p)
                                .collect();
                            match hits.as_slice() {
                                [one] => *one,
                                _ => {
                                    pass = false;
                                    parts.push(format!("{id}: ambiguous or absent"));
                                    continue;
                                }
                            }
                        }
                    };
                    let got = voicing_of(&knowledge.lattice, &solution, pos);
                    let ok = got == *expected;
                    pass &= ok;
                    parts.push(format!(
                        "{}={} ({})",
                        problem.word.ids[pos],
                        got.as_str(),
                        if ok { "expected" } else { "MISMATCH" }
                    ));
                }
                rows.push(CorpusRow {
                    name: entry.name.clone(),
                    detail: parts.join(", "),
                    pass,
                });
            }
            Err(e) => rows.push(CorpusRow {
                name: entry.name.clone(),
                detail: format!("error: {e}"),
                pass: false,
            }),
        }
    }
    Ok(rows)
}
