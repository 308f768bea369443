//! Order-free store of affine equality constraints over exact rationals.
//!
//! Equations are kept in solved form by incremental Gaussian elimination:
//! each pivot variable maps to an affine expression over non-pivot variables.
//! A variable is entailed once its fully substituted expression is constant.
//! Because elimination is exact, the set of entailed bindings depends only on
//! the set of posted equations, never on posting order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact scalar used throughout the solver.
pub type Rat = BigRational;

/// Builds a rational from a numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rat {
    Rat::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ArithVar(pub u32);

/// Interns variable names; an [`ArithVar`] is an index into the pool.
#[derive(Clone, Debug, Default)]
pub struct VarPool {
    names: Vec<String>,
    by_name: BTreeMap<String, u32>,
}

impl VarPool {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn var(&mut self, name: &str) -> ArithVar {
        if let Some(&i) = self.by_name.get(name) {
            return ArithVar(i);
        }
        let i = self.names.len() as u32;
        self.names.push(name.to_string());
        self.by_name.insert(name.to_string(), i);
        ArithVar(i)
    }

    pub fn get(&self, name: &str) -> Option<ArithVar> {
        self.by_name.get(name).map(|&i| ArithVar(i))
    }

    pub fn name(&self, v: ArithVar) -> &str {
        &self.names[v.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vars(&self) -> impl Iterator<Item = ArithVar> {
        (0..self.names.len() as u32).map(ArithVar)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StoreError {
    #[error("inconsistent equation: derived 0 = {0}")]
    Inconsistent(String),
    #[error("unknown arithmetic variable `{0}`")]
    UnknownVar(String),
}

/// Sum of coefficient·variable terms plus a constant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AffineExpr {
    terms: BTreeMap<ArithVar, Rat>,
    constant: Rat,
}

impl AffineExpr {
    pub fn constant(c: Rat) -> Self {
        AffineExpr {
            terms: BTreeMap::new(),
            constant: c,
        }
    }

    pub fn var(v: ArithVar) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(v, rat_int(1));
        AffineExpr {
            terms,
            constant: Rat::zero(),
        }
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_part(&self) -> &Rat {
        &self.constant
    }

    pub fn variables(&self) -> impl Iterator<Item = ArithVar> + '_ {
        self.terms.keys().copied()
    }

    pub fn add(&self, other: &AffineExpr) -> AffineExpr {
        let mut out = self.clone();
        for (v, c) in &other.terms {
            out.add_term(*v, c.clone());
        }
        out.constant += &other.constant;
        out
    }

    pub fn sub(&self, other: &AffineExpr) -> AffineExpr {
        self.add(&other.scale(&rat_int(-1)))
    }

    pub fn scale(&self, k: &Rat) -> AffineExpr {
        if k.is_zero() {
            return AffineExpr::constant(Rat::zero());
        }
        AffineExpr {
            terms: self.terms.iter().map(|(v, c)| (*v, c * k)).collect(),
            constant: &self.constant * k,
        }
    }

    pub fn add_term(&mut self, v: ArithVar, c: Rat) {
        let entry = self.terms.entry(v).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&v);
        }
    }

    /// Replaces `v` by `repl` wherever it occurs.
    fn substitute(&mut self, v: ArithVar, repl: &AffineExpr) {
        if let Some(c) = self.terms.remove(&v) {
            for (w, k) in &repl.terms {
                self.add_term(*w, k * &c);
            }
            self.constant += &repl.constant * &c;
        }
    }

    pub fn render(&self, pool: &VarPool) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (v, c) in &self.terms {
            parts.push(format!("{}·{}", c, pool.name(*v)));
        }
        if !self.constant.is_zero() || parts.is_empty() {
            parts.push(self.constant.to_string());
        }
        parts.join(" + ")
    }
}

impl fmt::Display for AffineExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (v, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}·v{}", c, v.0)?;
            first = false;
        }
        if !self.constant.is_zero() || first {
            if !first {
                write!(f, " + ")?;
            }
            write!(f, "{}", self.constant)?;
        }
        Ok(())
    }
}

/// Result of asking a store for the value of a variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Determination {
    Determined(Rat),
    Undetermined,
}

impl Determination {
    pub fn determined(&self) -> Option<&Rat> {
        match self {
            Determination::Determined(r) => Some(r),
            Determination::Undetermined => None,
        }
    }
}

/// Monotonic store of affine equalities in solved form.
#[derive(Clone, Debug, Default)]
pub struct AffineStore {
    rows: BTreeMap<ArithVar, AffineExpr>,
    seen: BTreeSet<ArithVar>,
}

impl AffineStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Fully substitutes solved pivots into `e`.
    fn reduce(&self, mut e: AffineExpr) -> AffineExpr {
        let pivots: Vec<ArithVar> = e
            .terms
            .keys()
            .copied()
            .filter(|v| self.rows.contains_key(v))
            .collect();
        for p in pivots {
            let row = self.rows[&p].clone();
            e.substitute(p, &row);
        }
        e
    }

    /// Posts `lhs = rhs`. On inconsistency the store is left unchanged and
    /// the contradiction is reported rather than overwriting anything.
    pub fn post(&mut self, lhs: &AffineExpr, rhs: &AffineExpr) -> Result<(), StoreError> {
        for v in lhs.variables().chain(rhs.variables()) {
            self.seen.insert(v);
        }
        let e = self.reduce(lhs.sub(rhs));
        if e.is_constant() {
            if e.constant.is_zero() {
                return Ok(());
            }
            return Err(StoreError::Inconsistent(e.constant.abs().to_string()));
        }
        // Deterministic pivot: the lowest variable id in the residual.
        let pivot = *e.terms.keys().next().expect("non-constant residual");
        let mut rest = e.clone();
        let coef = rest.terms.remove(&pivot).expect("pivot coefficient");
        let solution = rest.scale(&(-Rat::from_integer(BigInt::from(1)) / coef));
        for row in self.rows.values_mut() {
            row.substitute(pivot, &solution);
        }
        self.rows.insert(pivot, solution);
        Ok(())
    }

    /// The entailed value of `v`, if the posted equations determine it.
    pub fn value(&self, v: ArithVar) -> Determination {
        match self.rows.get(&v) {
            Some(e) if e.is_constant() => Determination::Determined(e.constant.clone()),
            _ => Determination::Undetermined,
        }
    }

    pub fn knows(&self, v: ArithVar) -> bool {
        self.seen.contains(&v)
    }

    /// All currently entailed bindings.
    pub fn entailed(&self) -> BTreeMap<ArithVar, Rat> {
        self.rows
            .iter()
            .filter(|(_, e)| e.is_constant())
            .map(|(v, e)| (*v, e.constant.clone()))
            .collect()
    }

    pub fn equation_count(&self) -> usize {
        self.rows.len()
    }
}

/// Exact rational → nearest f64, used only at export boundaries.
pub fn rat_to_f64(r: &Rat) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}
