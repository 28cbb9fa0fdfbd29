//! Correspondence engine for inductive modal inequalities: parsing,
//! inductive-shape recognition, the ALBA reduction, standard translation
//! into first-order logic, and a finite-frame semantic checker.

pub mod classify;
pub mod cli;
pub mod engine;
pub mod fol;
pub mod generate;
pub mod semantics;
pub mod syntax;

pub use classify::{check_inductive, InductiveCertificate, InductiveFailure, OmegaOrder, Polarity};
pub use engine::{run, AlbaFailure, AlbaResult, Status, TraceStep};
pub use fol::{correspondent, simplify, st_formula, st_quasi, FOFormula, FOSentence, FOTerm};
pub use semantics::{correspondence_check, eval, eval_fo, frame_valid, holds_ineq, FiniteFrame, Model, Report, Valuation};
pub use syntax::{parse_formula, parse_inequality, Formula, Inequality, ParseError, QuasiInequality};
