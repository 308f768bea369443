//! Constraint-based gestural synthesis.
//!
//! This crate couples a declarative phonology component to an articulatory
//! gesture synthesizer. A word comes in as a segment id sequence; typed
//! feature constraints over a finite lattice decide syllable-conditioned
//! alternations such as German final devoicing; affine equations over exact
//! rationals fix every gesture's activation interval without any rule
//! ordering; and critically damped oscillator dynamics turn the solved
//! gestural score into articulator trajectories.
//!
//! The pipeline, end to end:
//!
//! ```
//! use gestura_core::config::default_setup;
//! use gestura_core::phonology::build_word;
//! use gestura_core::solve::solve;
//! use gestura_core::timing::assemble_score;
//! use gestura_core::dynamics::render;
//!
//! let (lattice, table, inventory) = default_setup();
//! let word = ["ʔ", "ɛ", "b", "t"];
//! let problem = build_word(&lattice, &inventory, &table, &word).unwrap();
//! let solution = solve(&lattice, &problem.constraints).unwrap();
//! let ids: Vec<String> = problem.word.ids.clone();
//! let score = assemble_score(&problem.plan, &solution, &lattice, &table, &ids).unwrap();
//! let trajectory = render(&score, 1000.0, &table).unwrap();
//! assert_eq!(trajectory.len(), (score.span_ms[1] as usize) + 1);
//! ```

pub mod affine;
pub mod config;
pub mod dynamics;
pub mod export;
pub mod lattice;
pub mod phonology;
pub mod pipeline;
pub mod score_json;
pub mod solve;
pub mod term;
pub mod timing;
pub mod tract;

pub use affine::{AffineExpr, AffineStore, ArithVar, Determination, Rat, VarPool};
pub use lattice::{TypeLattice, TypeRef};
pub use solve::{solve, Constraint, Solution, SolveError};
pub use term::{ArithExpr, FeatureTerm};
pub use timing::{GesturalScore, ParameterTable, ScoreGesture};
pub use tract::TractVar;
