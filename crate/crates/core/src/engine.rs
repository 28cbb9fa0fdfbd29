//! The rewrite pipeline: distribution and splitting, first approximation,
//! the reduction-elimination cycle, and assembly of pure quasi-inequalities.
//!
//! Rule scheduling follows the success argument for inductive inequalities:
//! inequalities with a nominal on the left are split and residuated into
//! minimal-valuation shape, succedent inequalities with a conominal on the
//! right are approximated, `α ≤ T` is deleted, and finally variables are
//! eliminated one at a time, always picking an Ω-minimal one (ties broken
//! alphabetically) and substituting the join of its minimal valuations.
//!
//! Every rule application replaces its consumed inequalities by its produced
//! ones at the position of the first consumed inequality, which is also how
//! [`replay`] interprets a recorded [`TraceStep`].

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classify::{self, InductiveFailure, OmegaOrder, Polarity};
use crate::syntax::{self, Formula, Inequality, ParseError, QuasiInequality, SymbolKind, SymbolPool};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    SplitAnd,
    SplitOr,
    ResiduationBox,
    ResiduationImp,
    ApproximationBox,
    ApproximationImp,
    Delete,
    Ackermann,
}

impl Rule {
    pub fn name(self) -> &'static str {
        match self {
            Rule::SplitAnd => "split-and",
            Rule::SplitOr => "split-or",
            Rule::ResiduationBox => "residuation-box",
            Rule::ResiduationImp => "residuation-imp",
            Rule::ApproximationBox => "approximation-box",
            Rule::ApproximationImp => "approximation-imp",
            Rule::Delete => "delete",
            Rule::Ackermann => "ackermann",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Substitution {
    pub var: String,
    pub formula: Formula,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: Rule,
    pub consumed: Vec<Inequality>,
    pub produced: Vec<Inequality>,
    pub subst: Option<Substitution>,
}

/// Wire form of a trace step: formulas rendered with the concrete syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStepJson {
    pub rule: Rule,
    pub consumed: Vec<String>,
    pub produced: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub subst: Option<SubstJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubstJson {
    pub var: String,
    pub formula: String,
}

impl From<&TraceStep> for TraceStepJson {
    fn from(step: &TraceStep) -> Self {
        TraceStepJson {
            rule: step.rule,
            consumed: step.consumed.iter().map(ToString::to_string).collect(),
            produced: step.produced.iter().map(ToString::to_string).collect(),
            subst: step.subst.as_ref().map(|s| SubstJson { var: s.var.clone(), formula: s.formula.to_string() }),
        }
    }
}

impl TryFrom<&TraceStepJson> for TraceStep {
    type Error = ParseError;

    fn try_from(json: &TraceStepJson) -> Result<Self, ParseError> {
        let parse_all = |items: &[String]| -> Result<Vec<Inequality>, ParseError> {
            items.iter().map(|s| syntax::parse_inequality(s)).collect()
        };
        Ok(TraceStep {
            rule: json.rule,
            consumed: parse_all(&json.consumed)?,
            produced: parse_all(&json.produced)?,
            subst: match &json.subst {
                Some(s) => Some(Substitution { var: s.var.clone(), formula: syntax::parse_formula(&s.formula)? }),
                None => None,
            },
        })
    }
}

impl fmt::Display for TraceStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[Inequality]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(" & ");
        write!(f, "{}: {} ==> {}", self.rule, join(&self.consumed), join(&self.produced))?;
        if let Some(s) = &self.subst {
            write!(f, "  [{} := {}]", s.var, s.formula)?;
        }
        Ok(())
    }
}

/// Working set of inequalities with the distinguished nominal and conominal
/// of its first approximation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct System {
    pub inequalities: Vec<Inequality>,
    pub i0: String,
    pub m0: String,
    pub pool: SymbolPool,
}

impl System {
    pub fn conclusion(&self) -> Inequality {
        Inequality::new(Formula::nom(&self.i0), Formula::conom(&self.m0))
    }

    pub fn is_pure(&self) -> bool {
        self.inequalities.iter().all(Inequality::is_pure)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("variable {var} not eliminable: {reason}{}", inequality.as_ref().map(|i| format!(" in `{i}`")).unwrap_or_default())]
pub struct Stuck {
    pub var: String,
    pub inequality: Option<Inequality>,
    pub reason: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Reduction {
    Pure(System),
    Stuck { system: System, stuck: Stuck },
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ReplayError {
    #[error("step {step}: consumed inequality `{ineq}` not present")]
    Missing { step: usize, ineq: Inequality },
}

/// Applies one step: removes every consumed inequality (first unmatched equal
/// copy each) and inserts the produced ones where the first of them stood.
pub fn apply_step(list: &mut Vec<Inequality>, step: &TraceStep, index: usize) -> Result<(), ReplayError> {
    let mut taken = vec![false; list.len()];
    for c in &step.consumed {
        let pos = (0..list.len())
            .find(|&k| !taken[k] && list[k] == *c)
            .ok_or_else(|| ReplayError::Missing { step: index, ineq: c.clone() })?;
        taken[pos] = true;
    }
    let at = taken.iter().position(|t| *t);
    let mut kept: Vec<Inequality> = Vec::with_capacity(list.len() + step.produced.len());
    for (k, ineq) in list.drain(..).enumerate() {
        if Some(k) == at {
            kept.extend(step.produced.iter().cloned());
        }
        if !taken[k] {
            kept.push(ineq);
        }
    }
    if at.is_none() {
        kept.extend(step.produced.iter().cloned());
    }
    *list = kept;
    Ok(())
}

pub fn replay(initial: &[Inequality], steps: &[TraceStep]) -> Result<Vec<Inequality>, ReplayError> {
    let mut list = initial.to_vec();
    for (k, step) in steps.iter().enumerate() {
        apply_step(&mut list, step, k)?;
    }
    Ok(list)
}

// ---------------------------------------------------------------------------
// Stage 1

/// `α ∧ (β ∨ γ)` and `(β ∨ γ) ∧ α` distributed to fixpoint, at every node.
pub fn distribute_antecedent(phi: &Formula) -> Formula {
    match phi {
        Formula::And(a, b) => {
            let a = distribute_antecedent(a);
            let b = distribute_antecedent(b);
            match (&a, &b) {
                (_, Formula::Or(c, d)) => Formula::or(
                    distribute_antecedent(&Formula::and(a.clone(), (**c).clone())),
                    distribute_antecedent(&Formula::and(a.clone(), (**d).clone())),
                ),
                (Formula::Or(c, d), _) => Formula::or(
                    distribute_antecedent(&Formula::and((**c).clone(), b.clone())),
                    distribute_antecedent(&Formula::and((**d).clone(), b.clone())),
                ),
                _ => Formula::and(a, b),
            }
        }
        Formula::Or(a, b) => Formula::or(distribute_antecedent(a), distribute_antecedent(b)),
        Formula::Imp(a, b) => Formula::imp(distribute_antecedent(a), distribute_antecedent(b)),
        Formula::Box(a) => Formula::boxed(distribute_antecedent(a)),
        Formula::BlackDiamond(a) => Formula::bdiam(distribute_antecedent(a)),
        _ => phi.clone(),
    }
}

/// `α → β∧γ`, `box(α∧β)`, `α ∨ (β∧γ)` and `(β∧γ) ∨ α` pushed to fixpoint so
/// that conjunctions surface at the top.
pub fn distribute_succedent(phi: &Formula) -> Formula {
    match phi {
        Formula::Imp(a, b) => {
            let a = distribute_succedent(a);
            let b = distribute_succedent(b);
            match &b {
                Formula::And(c, d) => Formula::and(
                    distribute_succedent(&Formula::imp(a.clone(), (**c).clone())),
                    distribute_succedent(&Formula::imp(a.clone(), (**d).clone())),
                ),
                _ => Formula::imp(a, b),
            }
        }
        Formula::Box(a) => {
            let a = distribute_succedent(a);
            match &a {
                Formula::And(c, d) => Formula::and(
                    distribute_succedent(&Formula::boxed((**c).clone())),
                    distribute_succedent(&Formula::boxed((**d).clone())),
                ),
                _ => Formula::boxed(a),
            }
        }
        Formula::Or(a, b) => {
            let a = distribute_succedent(a);
            let b = distribute_succedent(b);
            match (&a, &b) {
                (_, Formula::And(c, d)) => Formula::and(
                    distribute_succedent(&Formula::or(a.clone(), (**c).clone())),
                    distribute_succedent(&Formula::or(a.clone(), (**d).clone())),
                ),
                (Formula::And(c, d), _) => Formula::and(
                    distribute_succedent(&Formula::or((**c).clone(), b.clone())),
                    distribute_succedent(&Formula::or((**d).clone(), b.clone())),
                ),
                _ => Formula::or(a, b),
            }
        }
        Formula::And(a, b) => Formula::and(distribute_succedent(a), distribute_succedent(b)),
        Formula::BlackDiamond(a) => Formula::bdiam(distribute_succedent(a)),
        _ => phi.clone(),
    }
}

/// `α ∨ β ≤ γ` and `α ≤ β ∧ γ` split exhaustively; left disjuncts outermost.
pub fn split(ineq: &Inequality) -> Vec<Inequality> {
    match (&ineq.lhs, &ineq.rhs) {
        (Formula::Or(a, b), _) => {
            let mut out = split(&Inequality::new((**a).clone(), ineq.rhs.clone()));
            out.extend(split(&Inequality::new((**b).clone(), ineq.rhs.clone())));
            out
        }
        (_, Formula::And(b, c)) => {
            let mut out = split(&Inequality::new(ineq.lhs.clone(), (**b).clone()));
            out.extend(split(&Inequality::new(ineq.lhs.clone(), (**c).clone())));
            out
        }
        _ => vec![ineq.clone()],
    }
}

pub fn preprocess(ineq: &Inequality) -> Vec<Inequality> {
    let distributed = Inequality::new(distribute_antecedent(&ineq.lhs), distribute_succedent(&ineq.rhs));
    split(&distributed)
}

/// `φ ≤ ψ` becomes the system `{i0 ≤ φ, ψ ≤ m0}` with `i0`, `m0` fresh in
/// `pool`.
pub fn first_approximation(ineq: &Inequality, mut pool: SymbolPool) -> System {
    pool.register_inequality(ineq);
    let i0 = pool.fresh(SymbolKind::Nominal);
    let m0 = pool.fresh(SymbolKind::Conominal);
    System {
        inequalities: vec![
            Inequality::new(Formula::nom(&i0), ineq.lhs.clone()),
            Inequality::new(ineq.rhs.clone(), Formula::conom(&m0)),
        ],
        i0,
        m0,
        pool,
    }
}

// ---------------------------------------------------------------------------
// Stage 2

/// Splitting on the right, residuation and deletion.
fn residuation_step(list: &[Inequality]) -> Option<TraceStep> {
    list.iter().find_map(|ineq| {
        let single = |rule, produced| Some(TraceStep { rule, consumed: vec![ineq.clone()], produced, subst: None });
        if ineq.rhs == Formula::Top {
            return single(Rule::Delete, vec![]);
        }
        if ineq.is_pure() {
            return None;
        }
        match &ineq.rhs {
            Formula::And(b, c) => single(
                Rule::SplitAnd,
                vec![
                    Inequality::new(ineq.lhs.clone(), (**b).clone()),
                    Inequality::new(ineq.lhs.clone(), (**c).clone()),
                ],
            ),
            Formula::Box(b) => single(
                Rule::ResiduationBox,
                vec![Inequality::new(Formula::bdiam(ineq.lhs.clone()), (**b).clone())],
            ),
            Formula::Imp(b, c) => single(
                Rule::ResiduationImp,
                vec![Inequality::new(Formula::and(ineq.lhs.clone(), (**b).clone()), (**c).clone())],
            ),
            _ => None,
        }
    })
}

/// Approximation of `box α ≤ m` and `α → β ≤ m`, and splitting `α ∨ β ≤ m`.
fn approximation_step(list: &[Inequality], pool: &mut SymbolPool) -> Option<TraceStep> {
    let ineq = list.iter().find(|ineq| {
        !ineq.is_pure()
            && matches!(ineq.rhs, Formula::CoNom(_))
            && matches!(ineq.lhs, Formula::Box(_) | Formula::Imp(..) | Formula::Or(..))
    })?;
    let m = ineq.rhs.clone();
    let (rule, produced) = match &ineq.lhs {
        Formula::Box(a) => {
            let n = Formula::conom(pool.fresh(SymbolKind::Conominal));
            (
                Rule::ApproximationBox,
                vec![Inequality::new(Formula::boxed(n.clone()), m), Inequality::new((**a).clone(), n)],
            )
        }
        Formula::Imp(a, b) => {
            let j = Formula::nom(pool.fresh(SymbolKind::Nominal));
            let n = Formula::conom(pool.fresh(SymbolKind::Conominal));
            (
                Rule::ApproximationImp,
                vec![
                    Inequality::new(Formula::imp(j.clone(), n.clone()), m),
                    Inequality::new(j, (**a).clone()),
                    Inequality::new((**b).clone(), n),
                ],
            )
        }
        Formula::Or(a, b) => (
            Rule::SplitOr,
            vec![Inequality::new((**a).clone(), m.clone()), Inequality::new((**b).clone(), m)],
        ),
        _ => unreachable!("filtered above"),
    };
    Some(TraceStep { rule, consumed: vec![ineq.clone()], produced, subst: None })
}

fn ackermann_step(list: &[Inequality], p: &str) -> Result<TraceStep, Stuck> {
    let stuck = |ineq: &Inequality, reason: &str| Stuck {
        var: p.to_string(),
        inequality: Some(ineq.clone()),
        reason: reason.to_string(),
    };
    let target = Formula::prop(p);
    let mut minimal = Vec::new();
    let mut consumed = Vec::new();
    for ineq in list.iter().filter(|i| i.contains_prop(p)) {
        if ineq.rhs == target && !ineq.lhs.contains_prop(p) {
            minimal.push(ineq.lhs.clone());
        } else {
            if !classify::uniformly(&ineq.lhs, p, Polarity::Positive) {
                return Err(stuck(ineq, "occurs negatively on a left-hand side"));
            }
            if !classify::uniformly(&ineq.rhs, p, Polarity::Negative) {
                return Err(stuck(ineq, "occurs positively on a right-hand side"));
            }
        }
        consumed.push(ineq.clone());
    }
    let valuation = Formula::join(minimal);
    let produced = consumed
        .iter()
        .filter(|i| !(i.rhs == target && !i.lhs.contains_prop(p)))
        .map(|i| i.substitute(p, &valuation))
        .collect();
    Ok(TraceStep {
        rule: Rule::Ackermann,
        consumed,
        produced,
        subst: Some(Substitution { var: p.to_string(), formula: valuation }),
    })
}

/// Runs the reduction-elimination cycle on one system. The returned trace
/// replays from `system.inequalities`.
pub fn reduce(system: &System, omega: &OmegaOrder) -> (Reduction, Vec<TraceStep>) {
    let mut sys = system.clone();
    let mut trace = Vec::new();
    let record = |sys: &mut System, step: TraceStep, trace: &mut Vec<TraceStep>| {
        let index = trace.len();
        apply_step(&mut sys.inequalities, &step, index).expect("engine steps consume present inequalities");
        trace.push(step);
    };

    loop {
        if let Some(step) = residuation_step(&sys.inequalities) {
            record(&mut sys, step, &mut trace);
            continue;
        }
        if let Some(step) = approximation_step(&sys.inequalities, &mut sys.pool) {
            record(&mut sys, step, &mut trace);
            continue;
        }
        break;
    }

    loop {
        let remaining = sys.inequalities.iter().flat_map(Inequality::props).collect();
        let Some(p) = omega.minimal(&remaining).cloned() else {
            break;
        };
        match ackermann_step(&sys.inequalities, &p) {
            Ok(step) => record(&mut sys, step, &mut trace),
            Err(stuck) => return (Reduction::Stuck { system: sys, stuck }, trace),
        }
    }
    (Reduction::Pure(sys), trace)
}

// ---------------------------------------------------------------------------
// Stage 3

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Success,
    Failure,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AlbaFailure {
    NotInductive(InductiveFailure),
    Stuck { system: usize, stuck: Stuck },
}

impl fmt::Display for AlbaFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlbaFailure::NotInductive(reason) => write!(f, "not an inductive inequality: {reason}"),
            AlbaFailure::Stuck { system, stuck } => write!(f, "{stuck} (system {system})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlbaResult {
    pub status: Status,
    pub quasis: Vec<QuasiInequality>,
    /// One trace per system, each replaying from the matching entry of
    /// `systems`.
    pub traces: Vec<Vec<TraceStep>>,
    /// Systems as produced by the first approximation.
    pub systems: Vec<System>,
    pub omega: Option<OmegaOrder>,
    pub failure: Option<AlbaFailure>,
}

impl AlbaResult {
    fn failed(failure: AlbaFailure) -> Self {
        AlbaResult {
            status: Status::Failure,
            quasis: Vec::new(),
            traces: Vec::new(),
            systems: Vec::new(),
            omega: None,
            failure: Some(failure),
        }
    }
}

pub fn run(ineq: &Inequality) -> AlbaResult {
    let certificate = match classify::check_inductive(ineq) {
        Ok(c) => c,
        Err(reason) => return AlbaResult::failed(AlbaFailure::NotInductive(reason)),
    };
    let mut base_pool = SymbolPool::new();
    base_pool.register_inequality(ineq);

    let mut result = AlbaResult {
        status: Status::Success,
        quasis: Vec::new(),
        traces: Vec::new(),
        systems: Vec::new(),
        omega: Some(certificate.omega.clone()),
        failure: None,
    };
    for (k, residual) in preprocess(ineq).iter().enumerate() {
        let system = first_approximation(residual, base_pool.clone());
        let (reduction, trace) = reduce(&system, &certificate.omega);
        match reduction {
            Reduction::Pure(done) => result.quasis.push(QuasiInequality {
                antecedents: done.inequalities.clone(),
                conclusion: done.conclusion(),
            }),
            Reduction::Stuck { stuck, .. } => {
                if result.failure.is_none() {
                    result.failure = Some(AlbaFailure::Stuck { system: k, stuck });
                }
                result.status = Status::Failure;
            }
        }
        result.systems.push(system);
        result.traces.push(trace);
    }
    if result.status == Status::Failure {
        result.quasis.clear();
    }
    result
}
