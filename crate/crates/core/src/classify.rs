//! Polarity, the positive / PIA / antecedent / succedent grammars, and
//! recognition of inductive inequalities together with a dependence order.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::syntax::{Formula, Inequality};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Polarity {
    Positive,
    Negative,
}

impl Polarity {
    pub fn flip(self) -> Self {
        match self {
            Polarity::Positive => Polarity::Negative,
            Polarity::Negative => Polarity::Positive,
        }
    }
}

/// Path from the root: 0 selects the left (or only) child, 1 the right child.
pub type Path = Vec<u8>;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Occurrence {
    pub path: Path,
    pub var: String,
    pub polarity: Polarity,
}

/// Polarity of every propositional-variable occurrence. Only the left side of
/// an implication flips polarity.
pub fn polarity_map(phi: &Formula) -> Vec<Occurrence> {
    fn walk(phi: &Formula, pol: Polarity, path: &mut Path, out: &mut Vec<Occurrence>) {
        match phi {
            Formula::Prop(p) => out.push(Occurrence { path: path.clone(), var: p.clone(), polarity: pol }),
            Formula::Top | Formula::Bot | Formula::Nom(_) | Formula::CoNom(_) => {}
            Formula::Imp(a, b) => {
                path.push(0);
                walk(a, pol.flip(), path, out);
                path.pop();
                path.push(1);
                walk(b, pol, path, out);
                path.pop();
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                path.push(0);
                walk(a, pol, path, out);
                path.pop();
                path.push(1);
                walk(b, pol, path, out);
                path.pop();
            }
            Formula::Box(a) | Formula::BlackDiamond(a) => {
                path.push(0);
                walk(a, pol, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    walk(phi, Polarity::Positive, &mut Vec::new(), &mut out);
    out
}

/// True when every occurrence of `p` in `phi` has polarity `pol` (vacuously
/// true when `p` does not occur).
pub fn uniformly(phi: &Formula, p: &str, pol: Polarity) -> bool {
    polarity_map(phi).iter().filter(|o| o.var == p).all(|o| o.polarity == pol)
}

/// Membership in `POS_A ::= p | T | box POS | POS /\ POS | POS \/ POS` with
/// variables restricted to `allowed`.
pub fn is_pos(phi: &Formula, allowed: &BTreeSet<String>) -> bool {
    match phi {
        Formula::Prop(p) => allowed.contains(p),
        Formula::Top => true,
        Formula::Box(a) => is_pos(a, allowed),
        Formula::And(a, b) | Formula::Or(a, b) => is_pos(a, allowed) && is_pos(b, allowed),
        _ => false,
    }
}

fn pos_vars(phi: &Formula) -> Option<BTreeSet<String>> {
    match phi {
        Formula::Prop(p) => Some(BTreeSet::from([p.clone()])),
        Formula::Top => Some(BTreeSet::new()),
        Formula::Box(a) => pos_vars(a),
        Formula::And(a, b) | Formula::Or(a, b) => {
            let mut vars = pos_vars(a)?;
            vars.extend(pos_vars(b)?);
            Some(vars)
        }
        _ => None,
    }
}

/// `q <Ω p` is stored as the pair `(q, p)`.
pub type Constraint = (String, String);

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PiaFailure {
    /// The subformula at the given path is outside the grammar.
    Shape(Path),
    /// The main variable occurs in a positive antecedent block.
    SelfDependence(String),
    /// The spine ends in a variable other than the requested main variable.
    WrongMainVariable { expected: String, found: String },
}

/// The terminal of the rightmost `box` / `->` spine: a variable, `T`, or
/// `None` when the spine hits something outside the PIA grammar.
fn spine_terminal(phi: &Formula) -> Option<Option<&str>> {
    match phi {
        Formula::Prop(p) => Some(Some(p)),
        Formula::Top => Some(None),
        Formula::Box(a) => spine_terminal(a),
        Formula::Imp(_, b) => spine_terminal(b),
        _ => None,
    }
}

fn pia_constraints(
    phi: &Formula,
    main: Option<&str>,
    path: &mut Path,
    out: &mut BTreeSet<Constraint>,
) -> Result<(), PiaFailure> {
    match phi {
        Formula::Prop(q) => match main {
            Some(p) if p == q => Ok(()),
            Some(p) => Err(PiaFailure::WrongMainVariable { expected: p.to_string(), found: q.clone() }),
            None => Err(PiaFailure::Shape(path.clone())),
        },
        Formula::Top => Ok(()),
        Formula::Box(a) => {
            path.push(0);
            pia_constraints(a, main, path, out)?;
            path.pop();
            Ok(())
        }
        Formula::Imp(a, b) => {
            path.push(0);
            let vars = pos_vars(a).ok_or_else(|| PiaFailure::Shape(path.clone()))?;
            path.pop();
            if let Some(p) = main {
                if vars.contains(p) {
                    return Err(PiaFailure::SelfDependence(p.to_string()));
                }
                out.extend(vars.into_iter().map(|q| (q, p.to_string())));
            }
            path.push(1);
            pia_constraints(b, main, path, out)?;
            path.pop();
            Ok(())
        }
        _ => Err(PiaFailure::Shape(path.clone())),
    }
}

/// Matches `phi` against `PIA_p ::= p | T | box PIA_p | POS -> PIA_p` and
/// returns the constraints `q <Ω p` for every `q` in a positive block.
pub fn parse_pia(phi: &Formula, p: &str) -> Result<BTreeSet<Constraint>, PiaFailure> {
    let mut out = BTreeSet::new();
    pia_constraints(phi, Some(p), &mut Vec::new(), &mut out)?;
    Ok(out)
}

/// Strict dependence order given by its generating edges; the order itself is
/// the transitive closure.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaOrder {
    pub edges: BTreeSet<Constraint>,
}

impl OmegaOrder {
    pub fn new(edges: impl IntoIterator<Item = Constraint>) -> Self {
        OmegaOrder { edges: edges.into_iter().collect() }
    }

    /// `{q | q <Ω p}` under the transitive closure.
    pub fn below(&self, p: &str) -> BTreeSet<String> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![p.to_string()];
        while let Some(top) = stack.pop() {
            for (q, r) in &self.edges {
                if *r == top && seen.insert(q.clone()) {
                    stack.push(q.clone());
                }
            }
        }
        seen
    }

    /// A variable lying on a directed cycle, if any (Kahn's algorithm).
    pub fn find_cycle(&self) -> Option<Vec<String>> {
        let mut indegree: BTreeMap<&str, usize> = BTreeMap::new();
        for (q, p) in &self.edges {
            indegree.entry(q).or_default();
            *indegree.entry(p).or_default() += 1;
        }
        let mut ready: Vec<&str> = indegree.iter().filter(|(_, d)| **d == 0).map(|(v, _)| *v).collect();
        let mut removed = BTreeSet::new();
        while let Some(v) = ready.pop() {
            removed.insert(v);
            for (q, p) in &self.edges {
                if q == v {
                    let d = indegree.get_mut(p.as_str()).expect("endpoint registered");
                    *d -= 1;
                    if *d == 0 {
                        ready.push(p);
                    }
                }
            }
        }
        let stuck: Vec<String> = indegree
            .keys()
            .filter(|v| !removed.contains(*v))
            .map(|v| v.to_string())
            .collect();
        (!stuck.is_empty()).then_some(stuck)
    }

    pub fn is_acyclic(&self) -> bool {
        self.find_cycle().is_none()
    }

    /// Alphabetically first element of `remaining` with no predecessor in
    /// `remaining`.
    pub fn minimal<'a>(&self, remaining: &'a BTreeSet<String>) -> Option<&'a String> {
        remaining
            .iter()
            .find(|p| !self.edges.iter().any(|(q, r)| r == *p && remaining.contains(q)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Lhs,
    Rhs,
}

/// One PIA block of the decomposition. `main` is `None` for blocks whose
/// spine ends in `T`, which never mention their main variable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PiaBlock {
    pub side: Side,
    pub path: Path,
    pub main: Option<String>,
    pub formula: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InductiveCertificate {
    pub omega: OmegaOrder,
    pub ant_blocks: Vec<PiaBlock>,
    pub suc_blocks: Vec<PiaBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum InductiveFailure {
    NotBaseLanguage,
    /// The left-hand side is not an ∧/∨ combination of PIA formulas.
    NotAntecedent { path: Path, detail: String },
    /// The right-hand side is outside the succedent grammar.
    NotSuccedent { path: Path, detail: String },
    DependenceCycle { vars: Vec<String> },
    /// A variable lacks an occurrence of the given polarity (left-hand side
    /// occurrences counted with flipped polarity).
    Polarity { var: String, missing: Polarity },
}

impl fmt::Display for InductiveFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            InductiveFailure::NotBaseLanguage => {
                f.write_str("input uses symbols outside the base language")
            }
            InductiveFailure::NotAntecedent { path, detail } => {
                write!(f, "left-hand side is not an inductive antecedent at {path:?}: {detail}")
            }
            InductiveFailure::NotSuccedent { path, detail } => {
                write!(f, "right-hand side is not an inductive succedent at {path:?}: {detail}")
            }
            InductiveFailure::DependenceCycle { vars } => {
                write!(f, "dependence constraints are cyclic among {}", vars.join(", "))
            }
            InductiveFailure::Polarity { var, missing } => {
                let which = match missing {
                    Polarity::Positive => "positive",
                    Polarity::Negative => "negative",
                };
                write!(f, "variable {var} has no {which} occurrence")
            }
        }
    }
}

fn pia_failure_detail(e: &PiaFailure) -> (Path, String) {
    match e {
        PiaFailure::Shape(path) => (path.clone(), "not a PIA formula".into()),
        PiaFailure::SelfDependence(p) => (Vec::new(), format!("{p} occurs in its own positive block")),
        PiaFailure::WrongMainVariable { expected, found } => {
            (Vec::new(), format!("expected main variable {expected}, found {found}"))
        }
    }
}

struct Collector {
    side: Side,
    blocks: Vec<PiaBlock>,
    constraints: BTreeSet<Constraint>,
}

impl Collector {
    fn pia(&mut self, phi: &Formula, path: &mut Path) -> Result<(), (Path, String)> {
        let main = match spine_terminal(phi) {
            Some(t) => t.map(str::to_string),
            None => return Err((path.clone(), "not a PIA formula".into())),
        };
        let mut local = path.clone();
        pia_constraints(phi, main.as_deref(), &mut local, &mut self.constraints).map_err(|e| {
            let (sub, detail) = pia_failure_detail(&e);
            if sub.is_empty() {
                (path.clone(), detail)
            } else {
                (sub, detail)
            }
        })?;
        self.blocks.push(PiaBlock {
            side: self.side,
            path: path.clone(),
            main,
            formula: phi.to_string(),
        });
        Ok(())
    }

    fn ant(&mut self, phi: &Formula, path: &mut Path) -> Result<(), (Path, String)> {
        match phi {
            Formula::And(a, b) | Formula::Or(a, b) => {
                path.push(0);
                self.ant(a, path)?;
                path.pop();
                path.push(1);
                self.ant(b, path)?;
                path.pop();
                Ok(())
            }
            _ => self.pia(phi, path),
        }
    }

    fn suc(&mut self, phi: &Formula, path: &mut Path) -> Result<(), (Path, String)> {
        match phi {
            Formula::Prop(_) | Formula::Top => Ok(()),
            Formula::Box(a) => {
                path.push(0);
                self.suc(a, path)?;
                path.pop();
                Ok(())
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                path.push(0);
                self.suc(a, path)?;
                path.pop();
                path.push(1);
                self.suc(b, path)?;
                path.pop();
                Ok(())
            }
            Formula::Imp(a, b) => {
                path.push(0);
                self.pia(a, path)?;
                path.pop();
                path.push(1);
                self.suc(b, path)?;
                path.pop();
                Ok(())
            }
            _ => Err((path.clone(), "not a succedent".into())),
        }
    }
}

/// Decides whether `ineq` is an Ω-inductive inequality for some Ω and, if so,
/// returns a certificate whose Ω is generated by exactly the constraints the
/// grammars impose.
pub fn check_inductive(ineq: &Inequality) -> Result<InductiveCertificate, InductiveFailure> {
    if !ineq.is_base() {
        return Err(InductiveFailure::NotBaseLanguage);
    }
    let mut ant = Collector { side: Side::Lhs, blocks: Vec::new(), constraints: BTreeSet::new() };
    ant.ant(&ineq.lhs, &mut Vec::new())
        .map_err(|(path, detail)| InductiveFailure::NotAntecedent { path, detail })?;
    let mut suc = Collector { side: Side::Rhs, blocks: Vec::new(), constraints: BTreeSet::new() };
    suc.suc(&ineq.rhs, &mut Vec::new())
        .map_err(|(path, detail)| InductiveFailure::NotSuccedent { path, detail })?;

    let omega = OmegaOrder::new(ant.constraints.into_iter().chain(suc.constraints));
    if let Some(vars) = omega.find_cycle() {
        return Err(InductiveFailure::DependenceCycle { vars });
    }
    check_polarity(ineq)?;
    Ok(InductiveCertificate { omega, ant_blocks: ant.blocks, suc_blocks: suc.blocks })
}

/// Every variable needs a positive and a negative occurrence, reading `φ ≤ ψ`
/// as `φ -> ψ`.
fn check_polarity(ineq: &Inequality) -> Result<(), InductiveFailure> {
    let mut seen: BTreeMap<String, BTreeSet<Polarity>> = BTreeMap::new();
    for occ in polarity_map(&ineq.lhs) {
        seen.entry(occ.var).or_default().insert(occ.polarity.flip());
    }
    for occ in polarity_map(&ineq.rhs) {
        seen.entry(occ.var).or_default().insert(occ.polarity);
    }
    for (var, pols) in seen {
        for needed in [Polarity::Positive, Polarity::Negative] {
            if !pols.contains(&needed) {
                return Err(InductiveFailure::Polarity { var, missing: needed });
            }
        }
    }
    Ok(())
}

fn subformula<'a>(phi: &'a Formula, path: &[u8]) -> Option<&'a Formula> {
    let Some((&step, rest)) = path.split_first() else {
        return Some(phi);
    };
    let child = match (phi, step) {
        (Formula::Imp(a, _) | Formula::And(a, _) | Formula::Or(a, _), 0) => a,
        (Formula::Imp(_, b) | Formula::And(_, b) | Formula::Or(_, b), 1) => b,
        (Formula::Box(a) | Formula::BlackDiamond(a), 0) => a,
        _ => return None,
    };
    subformula(child, rest)
}

/// Membership in `PIA_p` with `A_p` taken from a fixed order.
pub fn is_pia(phi: &Formula, main: Option<&str>, omega: &OmegaOrder) -> bool {
    let allowed = main.map(|p| omega.below(p)).unwrap_or_default();
    fn go(phi: &Formula, main: Option<&str>, allowed: &BTreeSet<String>) -> bool {
        match phi {
            Formula::Prop(q) => main == Some(q.as_str()),
            Formula::Top => true,
            Formula::Box(a) => go(a, main, allowed),
            // with no main variable, A_p may be chosen to contain any variable
            Formula::Imp(a, b) => {
                let pos_ok = match main {
                    Some(_) => is_pos(a, allowed),
                    None => pos_vars(a).is_some(),
                };
                pos_ok && go(b, main, allowed)
            }
            _ => false,
        }
    }
    go(phi, main, &allowed)
}

impl InductiveCertificate {
    /// Re-checks the certificate against the grammars with its own Ω.
    pub fn validate(&self, ineq: &Inequality) -> bool {
        if !self.omega.is_acyclic() || check_polarity(ineq).is_err() {
            return false;
        }
        let blocks_ok = |side: &Formula, blocks: &[PiaBlock]| {
            blocks.iter().all(|b| {
                subformula(side, &b.path)
                    .is_some_and(|sub| is_pia(sub, b.main.as_deref(), &self.omega))
            })
        };
        if !blocks_ok(&ineq.lhs, &self.ant_blocks) || !blocks_ok(&ineq.rhs, &self.suc_blocks) {
            return false;
        }
        // the blocks must tile the skeletons exactly
        let ant_paths: BTreeSet<&Path> = self.ant_blocks.iter().map(|b| &b.path).collect();
        let suc_paths: BTreeSet<&Path> = self.suc_blocks.iter().map(|b| &b.path).collect();
        ant_skeleton_ok(&ineq.lhs, &mut Vec::new(), &ant_paths)
            && suc_skeleton_ok(&ineq.rhs, &mut Vec::new(), &suc_paths)
    }
}

fn ant_skeleton_ok(phi: &Formula, path: &mut Path, blocks: &BTreeSet<&Path>) -> bool {
    if blocks.contains(path) {
        return true;
    }
    match phi {
        Formula::And(a, b) | Formula::Or(a, b) => {
            path.push(0);
            let l = ant_skeleton_ok(a, path, blocks);
            path.pop();
            path.push(1);
            let r = ant_skeleton_ok(b, path, blocks);
            path.pop();
            l && r
        }
        _ => false,
    }
}

fn suc_skeleton_ok(phi: &Formula, path: &mut Path, blocks: &BTreeSet<&Path>) -> bool {
    let child = |path: &mut Path, step: u8, sub: &Formula, as_block: bool| {
        path.push(step);
        let ok = if as_block { blocks.contains(path) } else { suc_skeleton_ok(sub, path, blocks) };
        path.pop();
        ok
    };
    match phi {
        Formula::Prop(_) | Formula::Top => true,
        Formula::Box(a) => child(path, 0, a, false),
        Formula::And(a, b) | Formula::Or(a, b) => child(path, 0, a, false) && child(path, 1, b, false),
        Formula::Imp(a, b) => child(path, 0, a, true) && child(path, 1, b, false),
        _ => false,
    }
}
