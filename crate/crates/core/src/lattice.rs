//! Finite type lattice over a set of atoms.
//!
//! Every named type denotes a non-empty subset of the registered atoms;
//! `bottom` denotes the empty set. Meet is denotation intersection and
//! complement is denotation complement, so satisfiability of a conjunction
//! of type constraints on one path reduces to a non-empty mask.

use std::collections::BTreeMap;

use thiserror::Error;

/// Denotations are bitmasks over atom indices.
pub const MAX_ATOMS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("unknown type name `{0}`")]
    UnknownType(String),
    #[error("duplicate type name `{0}`")]
    DuplicateType(String),
    #[error("at most {MAX_ATOMS} atoms are supported")]
    TooManyAtoms,
    #[error("named type `{0}` would denote the empty set")]
    EmptyType(String),
}

/// A type, identified by its denotation within one lattice.
///
/// A `TypeRef` is only meaningful relative to the lattice that produced it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TypeRef {
    mask: u64,
}

impl TypeRef {
    pub fn is_bottom(self) -> bool {
        self.mask == 0
    }
}

#[derive(Clone, Debug, Default)]
pub struct TypeLattice {
    atoms: Vec<String>,
    by_name: BTreeMap<String, u64>,
    // Registration order; the first name with a given denotation is canonical.
    order: Vec<(String, u64)>,
}

impl TypeLattice {
    pub fn new() -> Self {
        Self::default()
    }

    /// Registers an atom. The atom is also a named type denoting itself.
    pub fn add_atom(&mut self, name: &str) -> Result<(), LatticeError> {
        if self.by_name.contains_key(name) {
            return Err(LatticeError::DuplicateType(name.to_string()));
        }
        if self.atoms.len() >= MAX_ATOMS {
            return Err(LatticeError::TooManyAtoms);
        }
        let mask = 1u64 << self.atoms.len();
        self.atoms.push(name.to_string());
        self.by_name.insert(name.to_string(), mask);
        self.order.push((name.to_string(), mask));
        Ok(())
    }

    /// Defines a named type as the union of previously defined names.
    pub fn define_union(&mut self, name: &str, members: &[&str]) -> Result<(), LatticeError> {
        if self.by_name.contains_key(name) {
            return Err(LatticeError::DuplicateType(name.to_string()));
        }
        let mut mask = 0u64;
        for m in members {
            mask |= self.lookup(m)?;
        }
        if mask == 0 {
            return Err(LatticeError::EmptyType(name.to_string()));
        }
        self.by_name.insert(name.to_string(), mask);
        self.order.push((name.to_string(), mask));
        Ok(())
    }

    fn lookup(&self, name: &str) -> Result<u64, LatticeError> {
        if name == "bottom" {
            return Ok(0);
        }
        if name == "top" {
            return Ok(self.top().mask);
        }
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| LatticeError::UnknownType(name.to_string()))
    }

    pub fn ty(&self, name: &str) -> Result<TypeRef, LatticeError> {
        Ok(TypeRef {
            mask: self.lookup(name)?,
        })
    }

    pub fn contains(&self, name: &str) -> bool {
        name == "top" || name == "bottom" || self.by_name.contains_key(name)
    }

    pub fn top(&self) -> TypeRef {
        let n = self.atoms.len();
        TypeRef {
            mask: if n == 0 { 0 } else { u64::MAX >> (64 - n) },
        }
    }

    pub fn bottom(&self) -> TypeRef {
        TypeRef { mask: 0 }
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn atom_names(&self) -> impl Iterator<Item = &str> {
        self.atoms.iter().map(|s| s.as_str())
    }

    /// All registered type names (atoms and unions) in registration order.
    pub fn type_names(&self) -> impl Iterator<Item = &str> {
        self.order.iter().map(|(n, _)| n.as_str())
    }

    pub fn meet(&self, a: TypeRef, b: TypeRef) -> TypeRef {
        TypeRef {
            mask: a.mask & b.mask,
        }
    }

    pub fn complement(&self, a: TypeRef) -> TypeRef {
        TypeRef {
            mask: self.top().mask & !a.mask,
        }
    }

    /// Does `a` denote a subset of `b`?
    pub fn subsumed_by(&self, a: TypeRef, b: TypeRef) -> bool {
        a.mask & !b.mask == 0
    }

    pub fn denotation(&self, t: TypeRef) -> Vec<&str> {
        (0..self.atoms.len())
            .filter(|i| t.mask & (1 << i) != 0)
            .map(|i| self.atoms[i].as_str())
            .collect()
    }

    /// The canonical display name of a type: the first registered name with
    /// this denotation, else `bottom`/`top`, else the atom set spelled out.
    pub fn name_of(&self, t: TypeRef) -> String {
        if t.mask == 0 {
            return "bottom".to_string();
        }
        for (name, mask) in &self.order {
            if *mask == t.mask {
                return name.clone();
            }
        }
        if t.mask == self.top().mask {
            return "top".to_string();
        }
        let mut s = String::from("{");
        s.push_str(&self.denotation(t).join("|"));
        s.push('}');
        s
    }

    /// Meet of two named types, reported by canonical name.
    pub fn meet_named(&self, a: &str, b: &str) -> Result<String, LatticeError> {
        let m = self.meet(self.ty(a)?, self.ty(b)?);
        Ok(self.name_of(m))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn role_lattice() -> TypeLattice {
        let mut l = TypeLattice::new();
        for a in ["pure_onset", "nucleus", "pure_coda", "codaonset"] {
            l.add_atom(a).unwrap();
        }
        l.define_union("in_onset", &["pure_onset", "codaonset"]).unwrap();
        l.define_union("coda", &["pure_coda"]).unwrap();
        l.define_union("rhyme", &["nucleus", "pure_coda"]).unwrap();
        l
    }

    #[test]
    fn meet_is_idempotent() {
        let l = role_lattice();
        assert_eq!(l.meet_named("in_onset", "in_onset").unwrap(), "in_onset");
    }

    #[test]
    fn coda_meet_in_onset_is_bottom() {
        // Denotations: coda={pure_coda}, in_onset={pure_onset,codaonset};
        // intersection is empty.
        let l = role_lattice();
        assert_eq!(l.meet_named("coda", "in_onset").unwrap(), "bottom");
    }

    #[test]
    fn nucleus_is_rhyme_and_not_coda() {
        let l = role_lattice();
        let m = l.meet(
            l.ty("rhyme").unwrap(),
            l.complement(l.ty("coda").unwrap()),
        );
        assert_eq!(l.name_of(m), "nucleus");
    }

    #[test]
    fn unknown_type_is_an_error() {
        let l = role_lattice();
        assert!(matches!(
            l.meet_named("coda", "zz"),
            Err(LatticeError::UnknownType(_))
        ));
    }

    #[test]
    fn meet_denotation_equals_intersection_exhaustively() {
        let l = role_lattice();
        let names: Vec<&str> = l.type_names().collect();
        for a in &names {
            for b in &names {
                let ta = l.ty(a).unwrap();
                let tb = l.ty(b).unwrap();
                let m = l.meet(ta, tb);
                let da: std::collections::BTreeSet<_> =
                    l.denotation(ta).into_iter().collect();
                let db: std::collections::BTreeSet<_> =
                    l.denotation(tb).into_iter().collect();
                let dm: std::collections::BTreeSet<_> = l.denotation(m).into_iter().collect();
                let expect: std::collections::BTreeSet<_> =
                    da.intersection(&db).copied().collect();
                assert_eq!(dm, expect, "meet({a},{b})");
            }
        }
    }

    #[test]
    fn complement_excludes_exactly_the_denotation() {
        let l = role_lattice();
        let c = l.complement(l.ty("coda").unwrap());
        let d = l.denotation(c);
        assert!(d.contains(&"pure_onset") && d.contains(&"nucleus") && d.contains(&"codaonset"));
        assert!(!d.contains(&"pure_coda"));
    }

    #[test]
    fn duplicate_and_empty_definitions_rejected() {
        let mut l = role_lattice();
        assert!(matches!(
            l.add_atom("nucleus"),
            Err(LatticeError::DuplicateType(_))
        ));
        assert!(matches!(
            l.define_union("nothing", &[]),
            Err(LatticeError::EmptyType(_))
        ));
    }
}
