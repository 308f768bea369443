//! Typed feature terms: the phonological description language.
//!
//! A term constrains attribute paths of one description with named types,
//! combined by conjunction, disjunction and negation, plus affine equality
//! atoms over arithmetic variables. Negation is classical finite-domain
//! complement and is only defined over type constraints.

use thiserror::Error;

use crate::affine::{AffineExpr, Rat, VarPool};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TermError {
    #[error("negation is only supported over finite-domain type constraints, not `{0}`")]
    UnsupportedNegation(String),
    #[error("non-affine arithmetic: {0}")]
    NonAffine(String),
    #[error("division by zero in arithmetic term")]
    DivisionByZero,
    #[error("normal form exceeds {0} disjuncts")]
    TooLarge(usize),
}

/// Arithmetic expression surface, lowered to [`AffineExpr`] before solving.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ArithExpr {
    Var(String),
    Const(Rat),
    Add(Box<ArithExpr>, Box<ArithExpr>),
    Sub(Box<ArithExpr>, Box<ArithExpr>),
    Mul(Box<ArithExpr>, Box<ArithExpr>),
    Div(Box<ArithExpr>, Box<ArithExpr>),
}

// Constructor names mirror the operation nodes they build, not std::ops.
#[allow(clippy::should_implement_trait)]
impl ArithExpr {
    pub fn var(name: impl Into<String>) -> Self {
        ArithExpr::Var(name.into())
    }

    pub fn constant(r: Rat) -> Self {
        ArithExpr::Const(r)
    }

    pub fn add(self, other: ArithExpr) -> Self {
        ArithExpr::Add(Box::new(self), Box::new(other))
    }

    pub fn sub(self, other: ArithExpr) -> Self {
        ArithExpr::Sub(Box::new(self), Box::new(other))
    }

    pub fn mul(self, other: ArithExpr) -> Self {
        ArithExpr::Mul(Box::new(self), Box::new(other))
    }

    pub fn div(self, other: ArithExpr) -> Self {
        ArithExpr::Div(Box::new(self), Box::new(other))
    }

    /// Lowers to an affine expression, rejecting variable·variable products
    /// and division by non-constants.
    pub fn lower(&self, pool: &mut VarPool) -> Result<AffineExpr, TermError> {
        match self {
            ArithExpr::Var(name) => Ok(AffineExpr::var(pool.var(name))),
            ArithExpr::Const(r) => Ok(AffineExpr::constant(r.clone())),
            ArithExpr::Add(a, b) => Ok(a.lower(pool)?.add(&b.lower(pool)?)),
            ArithExpr::Sub(a, b) => Ok(a.lower(pool)?.sub(&b.lower(pool)?)),
            ArithExpr::Mul(a, b) => {
                let la = a.lower(pool)?;
                let lb = b.lower(pool)?;
                if la.is_constant() {
                    Ok(lb.scale(la.constant_part()))
                } else if lb.is_constant() {
                    Ok(la.scale(lb.constant_part()))
                } else {
                    Err(TermError::NonAffine(format!("{la} · {lb}")))
                }
            }
            ArithExpr::Div(a, b) => {
                let la = a.lower(pool)?;
                let lb = b.lower(pool)?;
                if !lb.is_constant() {
                    return Err(TermError::NonAffine(format!("{la} / {lb}")));
                }
                if lb.constant_part() == &Rat::from_integer(0.into()) {
                    return Err(TermError::DivisionByZero);
                }
                let inv = Rat::from_integer(1.into()) / lb.constant_part().clone();
                Ok(la.scale(&inv))
            }
        }
    }
}

/// A composite description over typed attribute paths.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum FeatureTerm {
    /// Type constraint on the current path.
    Ty(String),
    /// attribute : term
    At(String, Box<FeatureTerm>),
    And(Vec<FeatureTerm>),
    Or(Vec<FeatureTerm>),
    Not(Box<FeatureTerm>),
    /// Binds the current path to a named arithmetic variable.
    Var(String),
    /// Affine equality atom.
    Equal(ArithExpr, ArithExpr),
}

pub fn ty(name: impl Into<String>) -> FeatureTerm {
    FeatureTerm::Ty(name.into())
}

pub fn at(attr: impl Into<String>, t: FeatureTerm) -> FeatureTerm {
    FeatureTerm::At(attr.into(), Box::new(t))
}

/// attribute path `a.b.c : t`
pub fn at_path(path: &str, t: FeatureTerm) -> FeatureTerm {
    let mut out = t;
    for part in path.split('.').rev() {
        out = at(part, out);
    }
    out
}

pub fn and(ts: Vec<FeatureTerm>) -> FeatureTerm {
    FeatureTerm::And(ts)
}

pub fn or(ts: Vec<FeatureTerm>) -> FeatureTerm {
    FeatureTerm::Or(ts)
}

pub fn not(t: FeatureTerm) -> FeatureTerm {
    FeatureTerm::Not(Box::new(t))
}

pub fn equal(lhs: ArithExpr, rhs: ArithExpr) -> FeatureTerm {
    FeatureTerm::Equal(lhs, rhs)
}

const MAX_DNF: usize = 1 << 16;

/// One atomic constraint of a flattened conjunct.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Literal {
    /// Type constraint at an attribute path; `positive: false` means the
    /// finite-domain complement.
    TypeAt { path: String, name: String, positive: bool },
    /// Path bound to an arithmetic variable.
    VarAt { path: String, var: String },
    Equation(ArithExpr, ArithExpr),
}

fn join_path(prefix: &str, attr: &str) -> String {
    if prefix.is_empty() {
        attr.to_string()
    } else {
        format!("{prefix}.{attr}")
    }
}

fn flatten(
    term: &FeatureTerm,
    path: &str,
    positive: bool,
    out: &mut Vec<Vec<Literal>>,
) -> Result<(), TermError> {
    match (term, positive) {
        (FeatureTerm::Ty(name), p) => {
            for conj in out.iter_mut() {
                conj.push(Literal::TypeAt {
                    path: path.to_string(),
                    name: name.clone(),
                    positive: p,
                });
            }
            Ok(())
        }
        (FeatureTerm::At(attr, inner), p) => {
            flatten(inner, &join_path(path, attr), p, out)
        }
        (FeatureTerm::Not(inner), p) => flatten(inner, path, !p, out),
        (FeatureTerm::And(ts), true) | (FeatureTerm::Or(ts), false) => {
            for t in ts {
                flatten(t, path, positive, out)?;
            }
            Ok(())
        }
        (FeatureTerm::Or(ts), true) | (FeatureTerm::And(ts), false) => {
            // Distribute: every existing conjunct splits per disjunct,
            // preserving textual order.
            let base = std::mem::take(out);
            let mut acc: Vec<Vec<Literal>> = Vec::new();
            for prefix in &base {
                for t in ts {
                    let mut branch = vec![prefix.clone()];
                    flatten(t, path, positive, &mut branch)?;
                    acc.extend(branch);
                    if acc.len() > MAX_DNF {
                        return Err(TermError::TooLarge(MAX_DNF));
                    }
                }
            }
            *out = acc;
            Ok(())
        }
        (FeatureTerm::Var(name), true) => {
            for conj in out.iter_mut() {
                conj.push(Literal::VarAt {
                    path: path.to_string(),
                    var: name.clone(),
                });
            }
            Ok(())
        }
        (FeatureTerm::Equal(a, b), true) => {
            for conj in out.iter_mut() {
                conj.push(Literal::Equation(a.clone(), b.clone()));
            }
            Ok(())
        }
        (FeatureTerm::Var(_), false) => {
            Err(TermError::UnsupportedNegation("variable binding".into()))
        }
        (FeatureTerm::Equal(_, _), false) => {
            Err(TermError::UnsupportedNegation("arithmetic atom".into()))
        }
    }
}

/// Flattens a term into disjunctive normal form: a list of conjuncts, each a
/// list of path literals, in the term's textual order.
pub fn to_dnf(term: &FeatureTerm) -> Result<Vec<Vec<Literal>>, TermError> {
    let mut out = vec![Vec::new()];
    flatten(term, "", true, &mut out)?;
    Ok(out)
}

/// Rebuilds a [`FeatureTerm`] in DNF shape from the flattened form, i.e. a
/// disjunction of conjunctions of path literals. Logically equivalent to the
/// input of [`to_dnf`].
pub fn normalize(term: &FeatureTerm) -> Result<FeatureTerm, TermError> {
    let dnf = to_dnf(term)?;
    let disjuncts: Vec<FeatureTerm> = dnf
        .into_iter()
        .map(|conj| {
            let lits: Vec<FeatureTerm> = conj
                .into_iter()
                .map(|l| match l {
                    Literal::TypeAt { path, name, positive } => {
                        let leaf = if positive { ty(name) } else { not(ty(name)) };
                        if path.is_empty() {
                            leaf
                        } else {
                            at_path(&path, leaf)
                        }
                    }
                    Literal::VarAt { path, var } => at_path(&path, FeatureTerm::Var(var)),
                    Literal::Equation(a, b) => FeatureTerm::Equal(a, b),
                })
                .collect();
            match lits.len() {
                1 => lits.into_iter().next().unwrap(),
                _ => and(lits),
            }
        })
        .collect();
    Ok(match disjuncts.len() {
        1 => disjuncts.into_iter().next().unwrap(),
        _ => or(disjuncts),
    })
}
