//! Order-free constraint solving over typed paths and affine equations.
//!
//! A query is a set of named constraints interpreted conjunctively. The
//! search explores disjuncts depth-first in textual order and returns the
//! first satisfiable combination. Conjunct sets are canonicalized before the
//! search, and both per-path type meets and the affine store are themselves
//! order-free, so any permutation of the same constraint set yields the same
//! solution.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::affine::{AffineStore, ArithVar, Determination, Rat, StoreError, VarPool};
use crate::lattice::{LatticeError, TypeLattice, TypeRef};
use crate::term::{to_dnf, FeatureTerm, Literal, TermError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("unsatisfiable constraint set (failed at `{constraint}`)")]
    Unsatisfiable { constraint: String },
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Term(#[from] TermError),
    #[error("unknown arithmetic variable `{0}`")]
    UnknownVar(String),
}

/// A named conjunct of a query; the name is used in failure reports.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Constraint {
    pub name: String,
    pub term: FeatureTerm,
}

impl Constraint {
    pub fn new(name: impl Into<String>, term: FeatureTerm) -> Self {
        Constraint {
            name: name.into(),
            term,
        }
    }
}

/// An immutable solved description: most specific type per constrained path
/// plus the entailed arithmetic bindings.
#[derive(Clone, Debug)]
pub struct Solution {
    types: BTreeMap<String, (TypeRef, String)>,
    var_paths: BTreeMap<String, String>,
    pool: VarPool,
    store: AffineStore,
}

impl Solution {
    /// Canonical name of the solved type at `path`.
    pub fn type_at(&self, path: &str) -> Option<&str> {
        self.types.get(path).map(|(_, n)| n.as_str())
    }

    pub fn type_ref_at(&self, path: &str) -> Option<TypeRef> {
        self.types.get(path).map(|(t, _)| *t)
    }

    /// Does the solved type at `path` entail (denote a subset of) `name`?
    pub fn entails_type(&self, lattice: &TypeLattice, path: &str, name: &str) -> bool {
        match (self.types.get(path), lattice.ty(name)) {
            (Some((t, _)), Ok(target)) => !t.is_bottom() && lattice.subsumed_by(*t, target),
            _ => false,
        }
    }

    pub fn paths(&self) -> impl Iterator<Item = (&str, &str)> {
        self.types.iter().map(|(p, (_, n))| (p.as_str(), n.as_str()))
    }

    /// Entailed value of a named arithmetic variable.
    pub fn value_of(&self, var: &str) -> Result<Determination, SolveError> {
        let v = self
            .pool
            .get(var)
            .ok_or_else(|| SolveError::UnknownVar(var.to_string()))?;
        Ok(self.store.value(v))
    }

    pub fn value_of_var(&self, v: ArithVar) -> Determination {
        self.store.value(v)
    }

    /// All entailed arithmetic bindings, keyed by variable name.
    pub fn bindings(&self) -> BTreeMap<String, Rat> {
        self.store
            .entailed()
            .into_iter()
            .map(|(v, r)| (self.pool.name(v).to_string(), r))
            .collect()
    }

    /// The arithmetic variable bound at a path, if any.
    pub fn var_at(&self, path: &str) -> Option<&str> {
        self.var_paths.get(path).map(|s| s.as_str())
    }

    pub fn pool(&self) -> &VarPool {
        &self.pool
    }
}

#[derive(Clone)]
struct SearchState {
    types: BTreeMap<String, TypeRef>,
    vars: BTreeMap<String, ArithVar>,
    pool: VarPool,
    store: AffineStore,
}

struct Search<'a> {
    lattice: &'a TypeLattice,
    // Deepest constraint reached before a failure, for reporting.
    deepest_failure: Option<(usize, String)>,
}

enum Outcome {
    Done(SearchState),
    Fail,
}

impl<'a> Search<'a> {
    fn fail(&mut self, idx: usize, name: &str) -> Result<Outcome, SolveError> {
        match &self.deepest_failure {
            Some((d, _)) if *d >= idx => {}
            _ => self.deepest_failure = Some((idx, name.to_string())),
        }
        Ok(Outcome::Fail)
    }

    fn apply_literal(
        &mut self,
        state: &mut SearchState,
        lit: &Literal,
    ) -> Result<bool, SolveError> {
        match lit {
            Literal::TypeAt { path, name, positive } => {
                let mut t = self.lattice.ty(name)?;
                if !positive {
                    t = self.lattice.complement(t);
                }
                let cur = state
                    .types
                    .get(path)
                    .copied()
                    .unwrap_or_else(|| self.lattice.top());
                let met = self.lattice.meet(cur, t);
                if met.is_bottom() {
                    return Ok(false);
                }
                state.types.insert(path.clone(), met);
                Ok(true)
            }
            Literal::VarAt { path, var } => {
                let v = state.pool.var(var);
                if let Some(&prev) = state.vars.get(path) {
                    if prev != v {
                        // Two names on one path are the same quantity.
                        let ok = state
                            .store
                            .post(&crate::affine::AffineExpr::var(prev), &crate::affine::AffineExpr::var(v));
                        if let Err(StoreError::Inconsistent(_)) = ok {
                            return Ok(false);
                        }
                    }
                } else {
                    state.vars.insert(path.clone(), v);
                }
                Ok(true)
            }
            Literal::Equation(a, b) => {
                let la = a.lower(&mut state.pool)?;
                let lb = b.lower(&mut state.pool)?;
                match state.store.post(&la, &lb) {
                    Ok(()) => Ok(true),
                    Err(StoreError::Inconsistent(_)) => Ok(false),
                    Err(StoreError::UnknownVar(v)) => Err(SolveError::UnknownVar(v)),
                }
            }
        }
    }

    /// Depth-first search over the remaining constraints.
    fn dfs(
        &mut self,
        constraints: &[(String, Vec<Vec<Literal>>)],
        idx: usize,
        state: SearchState,
    ) -> Result<Outcome, SolveError> {
        let Some((name, dnf)) = constraints.get(idx) else {
            return Ok(Outcome::Done(state));
        };
        for conjunct in dnf {
            let mut branch = state.clone();
            let mut ok = true;
            for lit in conjunct {
                if !self.apply_literal(&mut branch, lit)? {
                    ok = false;
                    break;
                }
            }
            if !ok {
                continue;
            }
            match self.dfs(constraints, idx + 1, branch)? {
                Outcome::Done(s) => return Ok(Outcome::Done(s)),
                Outcome::Fail => {}
            }
        }
        self.fail(idx, name)
    }
}

/// Solves a conjunction of named constraints, returning the first solution
/// under the documented deterministic exploration order.
pub fn solve(lattice: &TypeLattice, constraints: &[Constraint]) -> Result<Solution, SolveError> {
    // Conjunction is commutative; canonicalize so posting order is
    // immaterial even for disjunct selection.
    let mut ordered: Vec<&Constraint> = constraints.iter().collect();
    ordered.sort();

    let mut compiled: Vec<(String, Vec<Vec<Literal>>)> = Vec::with_capacity(ordered.len());
    for c in &ordered {
        compiled.push((c.name.clone(), to_dnf(&c.term)?));
    }

    let mut search = Search {
        lattice,
        deepest_failure: None,
    };
    let init = SearchState {
        types: BTreeMap::new(),
        vars: BTreeMap::new(),
        pool: VarPool::new(),
        store: AffineStore::new(),
    };
    match search.dfs(&compiled, 0, init)? {
        Outcome::Done(state) => {
            let types = state
                .types
                .into_iter()
                .map(|(p, t)| {
                    let name = lattice.name_of(t);
                    (p, (t, name))
                })
                .collect();
            let var_paths = state
                .vars
                .iter()
                .map(|(p, v)| (p.clone(), state.pool.name(*v).to_string()))
                .collect();
            Ok(Solution {
                types,
                var_paths,
                pool: state.pool,
                store: state.store,
            })
        }
        Outcome::Fail => {
            let constraint = search
                .deepest_failure
                .map(|(_, n)| n)
                .unwrap_or_else(|| "<empty>".to_string());
            Err(SolveError::Unsatisfiable { constraint })
        }
    }
}

/// Brute-force satisfiability over explicit atom assignments. Test oracle:
/// enumerates one atom per constrained path and evaluates the term
/// classically. Only valid for terms without arithmetic.
pub fn brute_force_satisfiable(
    lattice: &TypeLattice,
    term: &FeatureTerm,
) -> Result<bool, SolveError> {
    let mut paths: Vec<String> = Vec::new();
    collect_paths(term, "", &mut paths)?;
    paths.sort();
    paths.dedup();
    let atoms: Vec<TypeRef> = lattice
        .atom_names()
        .map(|a| lattice.ty(a).unwrap())
        .collect();
    let n = atoms.len();
    if paths.is_empty() {
        // No type constraints: evaluate once with an empty assignment.
        return eval_term(lattice, term, "", &BTreeMap::new());
    }
    let mut idx = vec![0usize; paths.len()];
    loop {
        let assignment: BTreeMap<&str, TypeRef> = paths
            .iter()
            .zip(&idx)
            .map(|(p, &i)| (p.as_str(), atoms[i]))
            .collect();
        if eval_term(lattice, term, "", &assignment)? {
            return Ok(true);
        }
        // Next assignment in mixed radix.
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(false);
            }
            idx[k] += 1;
            if idx[k] < n {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn collect_paths(term: &FeatureTerm, path: &str, out: &mut Vec<String>) -> Result<(), SolveError> {
    match term {
        FeatureTerm::Ty(_) => {
            out.push(path.to_string());
            Ok(())
        }
        FeatureTerm::At(attr, inner) => {
            let p = if path.is_empty() {
                attr.clone()
            } else {
                format!("{path}.{attr}")
            };
            collect_paths(inner, &p, out)
        }
        FeatureTerm::And(ts) | FeatureTerm::Or(ts) => {
            for t in ts {
                collect_paths(t, path, out)?;
            }
            Ok(())
        }
        FeatureTerm::Not(t) => collect_paths(t, path, out),
        FeatureTerm::Var(_) => Ok(()),
        FeatureTerm::Equal(_, _) => Err(SolveError::Term(TermError::NonAffine(
            "brute-force oracle does not cover arithmetic".into(),
        ))),
    }
}

fn eval_term(
    lattice: &TypeLattice,
    term: &FeatureTerm,
    path: &str,
    assignment: &BTreeMap<&str, TypeRef>,
) -> Result<bool, SolveError> {
    match term {
        FeatureTerm::Ty(name) => {
            let t = lattice.ty(name)?;
            let atom = assignment
                .get(path)
                .copied()
                .expect("path collected before evaluation");
            Ok(lattice.subsumed_by(atom, t))
        }
        FeatureTerm::At(attr, inner) => {
            let p = if path.is_empty() {
                attr.clone()
            } else {
                format!("{path}.{attr}")
            };
            eval_term(lattice, inner, &p, assignment)
        }
        FeatureTerm::And(ts) => {
            for t in ts {
                if !eval_term(lattice, t, path, assignment)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        FeatureTerm::Or(ts) => {
            for t in ts {
                if eval_term(lattice, t, path, assignment)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        FeatureTerm::Not(t) => Ok(!eval_term(lattice, t, path, assignment)?),
        FeatureTerm::Var(_) => Ok(true),
        FeatureTerm::Equal(_, _) => unreachable!("rejected by collect_paths"),
    }
}
