//! Plain-text configuration files for the lattice, the parameter table and
//! the segment inventory.
//!
//! The format is line oriented. `#` starts a comment, blank lines are
//! ignored, `[name]` opens a section. Numbers are decimal literals and are
//! parsed as exact rationals, so configuration values survive solving
//! without rounding.
//!
//! Grammar, by file:
//!
//! ```text
//! lattice.cfg    [atoms]   atom names, whitespace separated
//!                [types]   name = member | member | ...
//!
//! params.cfg     [classes] name kind eigenperiod assoc release
//!                [tract]   var code neutral min max clip_lo clip_hi
//!                [release_overrides] class role release
//!                [render]  key value
//!
//! inventory.cfg  [segments] id | aliases | class | length | primary | secondary | state
//!                [onsets]   segment id sequence per line
//! ```
//!
//! Gesture fields are `key=value` lists: `var=LA class=stop cd=closed
//! cl=bilabial target=-0.05 clip=default`, secondaries add `when=<type>`.

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::affine::{rat_int, Rat};
use crate::lattice::{LatticeError, TypeLattice};
use crate::phonology::inventory::{
    SecondaryGesture, SecondaryPolicy, Segment, SegmentInventory, VowelLength,
};
use crate::phonology::PhonologyError;
use crate::timing::{
    ClassParams, ClipMode, GestureKind, GestureSpec, ParameterTable, TableError, TractParams,
};
use crate::tract::TractVar;

pub const DEFAULT_LATTICE: &str = include_str!("../assets/lattice.cfg");
pub const DEFAULT_PARAMS: &str = include_str!("../assets/params.cfg");
pub const DEFAULT_INVENTORY: &str = include_str!("../assets/inventory.cfg");
pub const DEFAULT_CORPUS: &str = include_str!("../assets/corpus.txt");

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConfigError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("missing section [{0}]")]
    MissingSection(String),
    #[error("{0}")]
    Invalid(String),
}

impl ConfigError {
    fn at(line: usize, msg: impl Into<String>) -> Self {
        ConfigError::Parse {
            line,
            msg: msg.into(),
        }
    }
}

fn ctx<E: std::fmt::Display>(line: usize) -> impl Fn(E) -> ConfigError {
    move |e| ConfigError::at(line, e.to_string())
}

/// Parses a decimal literal (`-12`, `0.35`, `.5`) into an exact rational.
pub fn parse_decimal(s: &str) -> Result<Rat, String> {
    let t = s.trim();
    if t.is_empty() {
        return Err("empty number".to_string());
    }
    let (neg, body) = match t.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match body.split_once('.') {
        Some((i, f)) => (i, f),
        None => (body, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(format!("malformed number `{t}`"));
    }
    if !int_part.bytes().all(|b| b.is_ascii_digit())
        || !frac_part.bytes().all(|b| b.is_ascii_digit())
    {
        return Err(format!("malformed number `{t}`"));
    }
    if frac_part.len() > 64 || int_part.len() > 64 {
        return Err(format!("number `{t}` has too many digits"));
    }
    let mut num = BigInt::zero();
    for b in int_part.bytes().chain(frac_part.bytes()) {
        num = num * 10 + (b - b'0');
    }
    let mut den = BigInt::from(1);
    for _ in 0..frac_part.len() {
        den *= 10;
    }
    let mut r = Rat::new(num, den);
    if neg {
        r = -r;
    }
    Ok(r)
}

// Content lines of one section, with their line numbers.
type SectionLines<'a> = Vec<(usize, &'a str)>;

struct Sections<'a> {
    sections: Vec<(String, usize, SectionLines<'a>)>,
}

impl<'a> Sections<'a> {
    fn parse(text: &'a str, allowed: &[&str]) -> Result<Self, ConfigError> {
        let mut sections: Vec<(String, usize, SectionLines<'a>)> = Vec::new();
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
            if let Some(name) = line.strip_prefix('[') {
                let Some(name) = name.strip_suffix(']') else {
                    return Err(ConfigError::at(line_no, "malformed section header"));
                };
                let name = name.trim();
                if !allowed.contains(&name) {
                    return Err(ConfigError::at(line_no, format!("unknown section [{name}]")));
                }
                if sections.iter().any(|(n, _, _)| n == name) {
                    return Err(ConfigError::at(line_no, format!("duplicate section [{name}]")));
                }
                sections.push((name.to_string(), line_no, Vec::new()));
                continue;
            }
            match sections.last_mut() {
                Some((_, _, lines)) => lines.push((line_no, line)),
                None => {
                    return Err(ConfigError::at(line_no, "content before any [section]"));
                }
            }
        }
        Ok(Sections { sections })
    }

    fn get(&self, name: &str) -> Option<&[(usize, &'a str)]> {
        self.sections
            .iter()
            .find(|(n, _, _)| n == name)
            .map(|(_, _, lines)| lines.as_slice())
    }

    fn require(&self, name: &str) -> Result<&[(usize, &'a str)], ConfigError> {
        self.get(name)
            .ok_or_else(|| ConfigError::MissingSection(name.to_string()))
    }
}

/// Parses a type lattice description.
pub fn parse_lattice(text: &str) -> Result<TypeLattice, ConfigError> {
    let sections = Sections::parse(text, &["atoms", "types"])?;
    let mut lattice = TypeLattice::new();
    for (line_no, line) in sections.require("atoms")? {
        for atom in line.split_whitespace() {
            lattice.add_atom(atom).map_err(ctx::<LatticeError>(*line_no))?;
        }
    }
    if let Some(types) = sections.get("types") {
        for (line_no, line) in types {
            let Some((name, members)) = line.split_once('=') else {
                return Err(ConfigError::at(*line_no, "expected `name = member | ...`"));
            };
            let name = name.trim();
            if name.is_empty() || name.contains(char::is_whitespace) {
                return Err(ConfigError::at(*line_no, "type name must be a single token"));
            }
            let members: Vec<&str> = members.split('|').map(str::trim).collect();
            if members.iter().any(|m| m.is_empty()) {
                return Err(ConfigError::at(*line_no, "empty member in union"));
            }
            lattice
                .define_union(name, &members)
                .map_err(ctx::<LatticeError>(*line_no))?;
        }
    }
    if lattice.atom_count() == 0 {
        return Err(ConfigError::Invalid("lattice defines no atoms".into()));
    }
    Ok(lattice)
}

/// Parses gesture class and tract variable parameters.
pub fn parse_params(text: &str) -> Result<ParameterTable, ConfigError> {
    let sections = Sections::parse(
        text,
        &["classes", "tract", "release_overrides", "render"],
    )?;
    let mut table = ParameterTable::new();

    for (line_no, line) in sections.require("classes")? {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 5 {
            return Err(ConfigError::at(
                *line_no,
                "expected: name kind eigenperiod assoc release",
            ));
        }
        let kind = GestureKind::parse(f[1])
            .ok_or_else(|| ConfigError::at(*line_no, format!("unknown kind `{}`", f[1])))?;
        let params = ClassParams {
            kind,
            eigenperiod: parse_decimal(f[2]).map_err(ctx(*line_no))?,
            assoc: parse_decimal(f[3]).map_err(ctx(*line_no))?,
            release: parse_decimal(f[4]).map_err(ctx(*line_no))?,
        };
        table.add_class(f[0], params).map_err(ctx::<TableError>(*line_no))?;
    }

    for (line_no, line) in sections.require("tract")? {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 7 {
            return Err(ConfigError::at(
                *line_no,
                "expected: var code neutral min max clip_lo clip_hi",
            ));
        }
        let var = TractVar::parse(f[0]).map_err(ctx(*line_no))?;
        let code: u32 = f[1]
            .parse()
            .map_err(|_| ConfigError::at(*line_no, format!("malformed code `{}`", f[1])))?;
        let params = TractParams {
            var,
            code,
            neutral: parse_decimal(f[2]).map_err(ctx(*line_no))?,
            min: parse_decimal(f[3]).map_err(ctx(*line_no))?,
            max: parse_decimal(f[4]).map_err(ctx(*line_no))?,
            clip_lo: parse_decimal(f[5]).map_err(ctx(*line_no))?,
            clip_hi: parse_decimal(f[6]).map_err(ctx(*line_no))?,
        };
        table.set_tract(params).map_err(ctx::<TableError>(*line_no))?;
    }
    if !table.is_complete() {
        return Err(ConfigError::Invalid(
            "the [tract] section must cover all ten tract variables".into(),
        ));
    }

    if let Some(lines) = sections.get("release_overrides") {
        for (line_no, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(ConfigError::at(*line_no, "expected: class role release"));
            }
            let release = parse_decimal(f[2]).map_err(ctx(*line_no))?;
            table
                .add_release_override(f[0], f[1], release)
                .map_err(ctx::<TableError>(*line_no))?;
        }
    }

    if let Some(lines) = sections.get("render") {
        for (line_no, line) in lines {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 2 {
                return Err(ConfigError::at(*line_no, "expected: key value"));
            }
            let value = parse_decimal(f[1]).map_err(ctx(*line_no))?;
            match f[0] {
                "neutral_eigenperiod" => {
                    if value <= rat_int(0) {
                        return Err(ConfigError::at(*line_no, "neutral_eigenperiod must be positive"));
                    }
                    table.render.neutral_eigenperiod = value;
                }
                "ga_threshold" => table.render.ga_threshold = value,
                "pr_threshold" => table.render.pr_threshold = value,
                other => {
                    return Err(ConfigError::at(*line_no, format!("unknown render key `{other}`")));
                }
            }
        }
    }
    Ok(table)
}

fn parse_kv(line_no: usize, text: &str) -> Result<Vec<(String, String)>, ConfigError> {
    let mut out = Vec::new();
    for tok in text.split_whitespace() {
        let Some((k, v)) = tok.split_once('=') else {
            return Err(ConfigError::at(line_no, format!("expected key=value, got `{tok}`")));
        };
        if k.is_empty() || v.is_empty() {
            return Err(ConfigError::at(line_no, format!("expected key=value, got `{tok}`")));
        }
        out.push((k.to_string(), v.to_string()));
    }
    Ok(out)
}

fn parse_gesture(
    line_no: usize,
    text: &str,
) -> Result<(GestureSpec, Option<String>), ConfigError> {
    let mut var = None;
    let mut class = None;
    let mut cd = None;
    let mut cl = None;
    let mut target = None;
    let mut clip = ClipMode::Default;
    let mut when = None;
    for (k, v) in parse_kv(line_no, text)? {
        match k.as_str() {
            "var" => var = Some(TractVar::parse(&v).map_err(ctx(line_no))?),
            "class" => class = Some(v),
            "cd" => cd = Some(v),
            "cl" => cl = Some(v),
            "target" => target = Some(parse_decimal(&v).map_err(ctx(line_no))?),
            "clip" => {
                clip = ClipMode::parse(&v)
                    .ok_or_else(|| ConfigError::at(line_no, format!("unknown clip mode `{v}`")))?;
            }
            "when" => when = Some(v),
            other => {
                return Err(ConfigError::at(line_no, format!("unknown gesture key `{other}`")));
            }
        }
    }
    let missing = |what: &str| ConfigError::at(line_no, format!("gesture is missing `{what}=`"));
    Ok((
        GestureSpec {
            tract: var.ok_or_else(|| missing("var"))?,
            class: class.ok_or_else(|| missing("class"))?,
            cd_category: cd.ok_or_else(|| missing("cd"))?,
            cl_category: cl.ok_or_else(|| missing("cl"))?,
            target: target.ok_or_else(|| missing("target"))?,
            clip,
        },
        when,
    ))
}

/// Parses a segment inventory against an already loaded lattice and table.
pub fn parse_inventory(
    text: &str,
    lattice: &TypeLattice,
    table: &ParameterTable,
) -> Result<SegmentInventory, ConfigError> {
    for required in ["vowel", "boundary"] {
        if !lattice.contains(required) {
            return Err(ConfigError::Invalid(format!(
                "inventory requires the lattice to define `{required}`"
            )));
        }
    }
    let sections = Sections::parse(text, &["segments", "onsets"])?;
    let mut inv = SegmentInventory::new();

    for (line_no, line) in sections.require("segments")? {
        let fields: Vec<&str> = line.split('|').map(str::trim).collect();
        if fields.len() != 7 {
            return Err(ConfigError::at(
                *line_no,
                "expected 7 fields: id | aliases | class | length | primary | secondary | state",
            ));
        }
        let id = fields[0];
        if id.is_empty() || id.contains(char::is_whitespace) {
            return Err(ConfigError::at(*line_no, "segment id must be a single token"));
        }
        let aliases: Vec<String> = if fields[1] == "-" || fields[1].is_empty() {
            Vec::new()
        } else {
            fields[1].split(',').map(|s| s.trim().to_string()).collect()
        };
        if aliases.iter().any(|a| a.is_empty() || a.contains(char::is_whitespace)) {
            return Err(ConfigError::at(*line_no, "malformed alias list"));
        }
        let class = fields[2].to_string();
        let length = VowelLength::parse(fields[3])
            .ok_or_else(|| ConfigError::at(*line_no, format!("unknown length `{}`", fields[3])))?;
        let (primary, primary_when) = parse_gesture(*line_no, fields[4])?;
        if primary_when.is_some() {
            return Err(ConfigError::at(*line_no, "`when=` is only valid on secondary gestures"));
        }
        let secondary = if fields[5] == "none" {
            None
        } else {
            let (spec, when) = parse_gesture(*line_no, fields[5])?;
            let when = when.ok_or_else(|| {
                ConfigError::at(*line_no, "secondary gesture needs `when=<state type>`")
            })?;
            Some(SecondaryGesture { spec, emit_when: when })
        };
        let policy = if fields[6] == "alternating" {
            SecondaryPolicy::Alternating
        } else if let Some(state) = fields[6].strip_prefix("fixed:") {
            SecondaryPolicy::Fixed(state.to_string())
        } else {
            return Err(ConfigError::at(
                *line_no,
                format!("state must be `alternating` or `fixed:<type>`, got `{}`", fields[6]),
            ));
        };

        let class_ref = lattice
            .ty(&class)
            .map_err(ctx::<LatticeError>(*line_no))?;
        let is_vowel = lattice.subsumed_by(class_ref, lattice.ty("vowel").unwrap());
        let is_boundary = lattice.subsumed_by(class_ref, lattice.ty("boundary").unwrap());
        if is_vowel && length == VowelLength::None {
            return Err(ConfigError::at(
                *line_no,
                format!("vowel `{id}` needs a length (lax_short or tense_long)"),
            ));
        }

        let segment = Segment {
            id: id.to_string(),
            class,
            length,
            primary,
            secondary,
            policy,
            is_vowel,
            is_boundary,
        };
        inv.insert(segment, &aliases, lattice, table)
            .map_err(ctx::<PhonologyError>(*line_no))?;
    }

    if let Some(onsets) = sections.get("onsets") {
        for (line_no, line) in onsets {
            let cluster: Vec<String> = line.split_whitespace().map(str::to_string).collect();
            if cluster.len() < 2 {
                return Err(ConfigError::at(
                    *line_no,
                    "onset clusters need at least two segments",
                ));
            }
            inv.add_legal_onset(cluster).map_err(ctx::<PhonologyError>(*line_no))?;
        }
    }
    Ok(inv)
}

/// The built-in configuration: lattice, parameter table and inventory.
pub fn default_setup() -> (TypeLattice, ParameterTable, SegmentInventory) {
    let lattice = parse_lattice(DEFAULT_LATTICE).expect("built-in lattice parses");
    let table = parse_params(DEFAULT_PARAMS).expect("built-in parameters parse");
    let inv = parse_inventory(DEFAULT_INVENTORY, &lattice, &table)
        .expect("built-in inventory parses");
    (lattice, table, inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine::rat;

    #[test]
    fn defaults_parse() {
        let (lattice, table, inv) = default_setup();
        assert!(lattice.contains("obstruent"));
        assert!(table.is_complete());
        assert!(inv.len() >= 20);
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_decimal("0.35").unwrap(), rat(35, 100));
        assert_eq!(parse_decimal("-0.05").unwrap(), rat(-5, 100));
        assert_eq!(parse_decimal("120").unwrap(), rat_int(120));
        assert_eq!(parse_decimal(".5").unwrap(), rat(1, 2));
        assert!(parse_decimal("1.2.3").is_err());
        assert!(parse_decimal("abc").is_err());
        assert!(parse_decimal("").is_err());
        assert!(parse_decimal("-").is_err());
    }

    #[test]
    fn unknown_sections_and_stray_content_are_rejected() {
        assert!(parse_lattice("[nonsense]\nx").is_err());
        assert!(parse_lattice("stray\n[atoms]\na").is_err());
        assert!(parse_lattice("[atoms\na").is_err());
    }

    #[test]
    fn duplicate_segment_ids_are_rejected() {
        let (lattice, table, _) = default_setup();
        let text = "[segments]\n\
            x | - | vowel | lax_short | var=TH class=vocalic cd=mid cl=central target=0.5 | none | fixed:inactive\n\
            x | - | vowel | lax_short | var=TH class=vocalic cd=mid cl=central target=0.5 | none | fixed:inactive\n";
        let err = parse_inventory(text, &lattice, &table).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn unknown_gesture_class_is_rejected() {
        let (lattice, table, _) = default_setup();
        let text = "[segments]\n\
            x | - | vowel | lax_short | var=TH class=warble cd=mid cl=central target=0.5 | none | fixed:inactive\n";
        let err = parse_inventory(text, &lattice, &table).unwrap_err();
        assert!(err.to_string().contains("warble"), "{err}");
    }

    #[test]
    fn degenerate_release_is_rejected() {
        let text = "[classes]\nbad consonantal 120 0 0\n[tract]\n";
        let err = parse_params(text).unwrap_err();
        assert!(err.to_string().contains("release"), "{err}");
    }

    #[test]
    fn out_of_range_targets_are_rejected() {
        let (lattice, table, _) = default_setup();
        let text = "[segments]\n\
            x | - | vowel | lax_short | var=TH class=vocalic cd=mid cl=central target=9.9 | none | fixed:inactive\n";
        assert!(parse_inventory(text, &lattice, &table).is_err());
    }

    #[test]
    fn incomplete_tract_table_is_rejected() {
        let text = "[classes]\nvocalic vocalic 250 180 360\n[tract]\nVA 1 0.0 -0.25 1.25 0.0 1.0\n";
        let err = parse_params(text).unwrap_err();
        assert!(err.to_string().contains("ten tract variables"), "{err}");
    }
}
