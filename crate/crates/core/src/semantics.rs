//! Finite Kripke semantics for the expanded language, brute-force frame
//! validity, first-order evaluation and correspondence checking.
//!
//! On a finite frame every subset is admissible, so valuations range over
//! the full powerset. Truth sets are `u64` bitmasks, which limits frames to
//! 64 worlds; exhaustive checks are only practical for far fewer.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fol::{FOFormula, FOSentence, FOTerm};
use crate::syntax::{Formula, Inequality, QuasiInequality, SymbolKind};

pub type World = usize;

pub const MAX_WORLDS: usize = 64;
/// Largest `max_n` accepted by [`correspondence_check`].
pub const MAX_ENUMERATED_WORLDS: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SemanticsError {
    #[error("unassigned symbol `{0}`")]
    UnassignedSymbol(String),
    #[error("world {world} out of range for a frame with {n} worlds")]
    OutOfRange { world: World, n: usize },
    #[error("frame size {0} unsupported (1..={MAX_WORLDS})")]
    FrameSize(usize),
    #[error("enumeration bound {0} unsupported (1..={MAX_ENUMERATED_WORLDS})")]
    EnumerationBound(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteFrame {
    n: usize,
    succ: Vec<u64>,
    pred: Vec<u64>,
}

impl FiniteFrame {
    pub fn new(n: usize, pairs: &[(World, World)]) -> Result<Self, SemanticsError> {
        if n == 0 || n > MAX_WORLDS {
            return Err(SemanticsError::FrameSize(n));
        }
        let mut succ = vec![0u64; n];
        let mut pred = vec![0u64; n];
        for &(a, b) in pairs {
            for w in [a, b] {
                if w >= n {
                    return Err(SemanticsError::OutOfRange { world: w, n });
                }
            }
            succ[a] |= 1 << b;
            pred[b] |= 1 << a;
        }
        Ok(FiniteFrame { n, succ, pred })
    }

    /// The frame whose relation has pair `(a, b)` iff bit `a*n + b` of
    /// `index` is set. Enumerating `0..2^(n*n)` visits every frame once.
    pub fn from_index(n: usize, index: u64) -> Self {
        assert!(n >= 1 && n * n <= 64, "frame size {n} too large to index");
        let pairs: Vec<(World, World)> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .filter(|&(a, b)| index >> (a * n + b) & 1 == 1)
            .collect();
        FiniteFrame::new(n, &pairs).expect("in range by construction")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relates(&self, a: World, b: World) -> bool {
        self.succ[a] >> b & 1 == 1
    }

    pub fn pairs(&self) -> Vec<(World, World)> {
        (0..self.n)
            .flat_map(|a| (0..self.n).map(move |b| (a, b)))
            .filter(|&(a, b)| self.relates(a, b))
            .collect()
    }

    pub fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }
}

impl fmt::Display for FiniteFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.pairs().iter().map(|(a, b)| format!("({a},{b})")).collect();
        write!(f, "n={} R={{{}}}", self.n, pairs.join(","))
    }
}

/// Interpretation of propositional variables (as subsets, bitmask-encoded),
/// nominals (as points) and conominals (as the complement of a point).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Valuation {
    pub props: BTreeMap<String, u64>,
    pub nominals: BTreeMap<String, World>,
    pub conominals: BTreeMap<String, World>,
}

impl Valuation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_prop(mut self, p: &str, worlds: &[World]) -> Self {
        self.props.insert(p.to_string(), worlds.iter().fold(0, |acc, w| acc | 1 << w));
        self
    }

    pub fn with_nominal(mut self, i: &str, w: World) -> Self {
        self.nominals.insert(i.to_string(), w);
        self
    }

    pub fn with_conominal(mut self, m: &str, w: World) -> Self {
        self.conominals.insert(m.to_string(), w);
        self
    }

    /// The world denoted by a nominal or conominal name.
    pub fn point(&self, name: &str) -> Option<World> {
        self.nominals.get(name).or_else(|| self.conominals.get(name)).copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    pub frame: FiniteFrame,
    pub valuation: Valuation,
}

impl Model {
    pub fn new(frame: FiniteFrame, valuation: Valuation) -> Result<Self, SemanticsError> {
        let n = frame.n();
        let points = valuation.nominals.values().chain(valuation.conominals.values());
        if let Some(&w) = points.into_iter().find(|&&w| w >= n) {
            return Err(SemanticsError::OutOfRange { world: w, n });
        }
        if valuation.props.values().any(|&s| s & !frame.full() != 0) {
            return Err(SemanticsError::OutOfRange { world: n, n });
        }
        Ok(Model { frame, valuation })
    }
}

/// The set of worlds satisfying `phi`, as a bitmask.
pub fn truth_set(m: &Model, phi: &Formula) -> Result<u64, SemanticsError> {
    let fr = &m.frame;
    let full = fr.full();
    Ok(match phi {
        Formula::Prop(p) => *m.valuation.props.get(p).ok_or_else(|| SemanticsError::UnassignedSymbol(p.clone()))?,
        Formula::Top => full,
        Formula::Bot => 0,
        Formula::Nom(i) => 1 << m.valuation.nominals.get(i).ok_or_else(|| SemanticsError::UnassignedSymbol(i.clone()))?,
        Formula::CoNom(c) => {
            full & !(1 << m.valuation.conominals.get(c).ok_or_else(|| SemanticsError::UnassignedSymbol(c.clone()))?)
        }
        Formula::And(a, b) => truth_set(m, a)? & truth_set(m, b)?,
        Formula::Or(a, b) => truth_set(m, a)? | truth_set(m, b)?,
        Formula::Imp(a, b) => (full & !truth_set(m, a)?) | truth_set(m, b)?,
        Formula::Box(a) => {
            let s = truth_set(m, a)?;
            (0..fr.n).filter(|&w| fr.succ[w] & !s == 0).fold(0, |acc, w| acc | 1 << w)
        }
        Formula::BlackDiamond(a) => {
            let s = truth_set(m, a)?;
            (0..fr.n).filter(|&w| fr.pred[w] & s != 0).fold(0, |acc, w| acc | 1 << w)
        }
    })
}

pub fn eval(m: &Model, w: World, phi: &Formula) -> Result<bool, SemanticsError> {
    if w >= m.frame.n {
        return Err(SemanticsError::OutOfRange { world: w, n: m.frame.n });
    }
    Ok(truth_set(m, phi)? >> w & 1 == 1)
}

pub fn holds_ineq(m: &Model, ineq: &Inequality) -> Result<bool, SemanticsError> {
    Ok(truth_set(m, &ineq.lhs)? & !truth_set(m, &ineq.rhs)? == 0)
}

pub fn holds_all(m: &Model, ineqs: &[Inequality]) -> Result<bool, SemanticsError> {
    for ineq in ineqs {
        if !holds_ineq(m, ineq)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn holds_quasi(m: &Model, q: &QuasiInequality) -> Result<bool, SemanticsError> {
    Ok(!holds_all(m, &q.antecedents)? || holds_ineq(m, &q.conclusion)?)
}

/// Symbols to enumerate, grouped by kind, each list sorted.
#[derive(Clone, Debug, Default)]
struct Signature {
    props: Vec<String>,
    nominals: Vec<String>,
    conominals: Vec<String>,
}

impl Signature {
    fn of<'a>(ineqs: impl IntoIterator<Item = &'a Inequality>) -> Self {
        let mut props = std::collections::BTreeSet::new();
        let mut noms = std::collections::BTreeSet::new();
        let mut conoms = std::collections::BTreeSet::new();
        for ineq in ineqs {
            ineq.collect_symbols(&mut |kind, name| {
                match kind {
                    SymbolKind::Prop => props.insert(name.to_string()),
                    SymbolKind::Nominal => noms.insert(name.to_string()),
                    SymbolKind::Conominal => conoms.insert(name.to_string()),
                };
            });
        }
        Signature {
            props: props.into_iter().collect(),
            nominals: noms.into_iter().collect(),
            conominals: conoms.into_iter().collect(),
        }
    }

    fn without_points(mut self, names: &[&str]) -> Self {
        self.nominals.retain(|x| !names.contains(&x.as_str()));
        self.conominals.retain(|x| !names.contains(&x.as_str()));
        self
    }

    /// Calls `f` on every valuation of the signature over `frame`, extending
    /// `base`, until `f` returns `false`. Returns whether the enumeration ran
    /// to completion.
    fn for_each_valuation(&self, frame: &FiniteFrame, base: &Valuation, mut f: impl FnMut(&Model) -> bool) -> bool {
        let n = frame.n() as u64;
        let subsets = 1u64 << frame.n();
        let radices: Vec<u64> = self
            .props
            .iter()
            .map(|_| subsets)
            .chain(self.nominals.iter().chain(&self.conominals).map(|_| n))
            .collect();
        let mut digits = vec![0u64; radices.len()];
        let mut model = Model { frame: frame.clone(), valuation: base.clone() };
        loop {
            let mut k = 0;
            for p in &self.props {
                model.valuation.props.insert(p.clone(), digits[k]);
                k += 1;
            }
            for i in &self.nominals {
                model.valuation.nominals.insert(i.clone(), digits[k] as World);
                k += 1;
            }
            for c in &self.conominals {
                model.valuation.conominals.insert(c.clone(), digits[k] as World);
                k += 1;
            }
            if !f(&model) {
                return false;
            }
            // odometer increment
            let mut pos = 0;
            loop {
                if pos == digits.len() {
                    return true;
                }
                digits[pos] += 1;
                if digits[pos] < radices[pos] {
                    break;
                }
                digits[pos] = 0;
                pos += 1;
            }
        }
    }
}

/// Validity of `ineq` on `frame` under every valuation of its symbols.
pub fn frame_valid(frame: &FiniteFrame, ineq: &Inequality) -> bool {
    let sig = Signature::of([ineq]);
    sig.for_each_valuation(frame, &Valuation::new(), |m| holds_ineq(m, ineq).expect("all symbols assigned"))
}

/// Validity of a quasi-inequality on `frame` under every valuation.
pub fn frame_valid_quasi(frame: &FiniteFrame, q: &QuasiInequality) -> bool {
    let sig = Signature::of(q.antecedents.iter().chain([&q.conclusion]));
    sig.for_each_valuation(frame, &Valuation::new(), |m| holds_quasi(m, q).expect("all symbols assigned"))
}

/// The anchor pairs `(a, b)` such that some valuation with `i0 ↦ a` and
/// `m0 ↦ b` satisfies every inequality in `system`. Bit `a*n + b` is set
/// for each such pair.
///
/// A rewrite step from `S` to `S'` is sound in both directions on `frame`
/// exactly when both systems yield the same anchor set.
pub fn satisfiable_anchors(frame: &FiniteFrame, system: &[Inequality], i0: &str, m0: &str) -> u64 {
    let n = frame.n();
    let sig = Signature::of(system).without_points(&[i0, m0]);
    let mut anchors = 0u64;
    for a in 0..n {
        for b in 0..n {
            let base = Valuation::new().with_nominal(i0, a).with_conominal(m0, b);
            let exhausted = sig.for_each_valuation(frame, &base, |m| !holds_all(m, system).expect("all symbols assigned"));
            if !exhausted {
                anchors |= 1 << (a * n + b);
            }
        }
    }
    anchors
}

// ---------------------------------------------------------------------------
// First-order evaluation

#[derive(Clone, Debug)]
enum Compiled {
    R(usize, usize),
    Eq(usize, usize),
    True,
    False,
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
    Imp(Box<Compiled>, Box<Compiled>),
    Forall(usize, Box<Compiled>),
    Exists(usize, Box<Compiled>),
}

struct Compiler {
    slots: Vec<String>,
    scope: Vec<(String, usize)>,
    free: BTreeMap<String, usize>,
}

impl Compiler {
    fn slot_of(&mut self, t: &FOTerm) -> usize {
        let key = match t {
            FOTerm::Var(v) => {
                if let Some((_, s)) = self.scope.iter().rev().find(|(name, _)| name == v) {
                    return *s;
                }
                v.clone()
            }
            FOTerm::Const(c) => format!("#{c}"),
        };
        if let Some(&s) = self.free.get(&key) {
            return s;
        }
        let s = self.slots.len();
        self.slots.push(key.clone());
        self.free.insert(key, s);
        s
    }

    fn compile(&mut self, phi: &FOFormula) -> Compiled {
        let bx = Box::new;
        match phi {
            FOFormula::R(a, b) => Compiled::R(self.slot_of(a), self.slot_of(b)),
            FOFormula::Eq(a, b) => Compiled::Eq(self.slot_of(a), self.slot_of(b)),
            FOFormula::Neq(a, b) => Compiled::Not(bx(Compiled::Eq(self.slot_of(a), self.slot_of(b)))),
            FOFormula::True => Compiled::True,
            FOFormula::False => Compiled::False,
            FOFormula::Not(a) => Compiled::Not(bx(self.compile(a))),
            FOFormula::And(a, b) => Compiled::And(bx(self.compile(a)), bx(self.compile(b))),
            FOFormula::Or(a, b) => Compiled::Or(bx(self.compile(a)), bx(self.compile(b))),
            FOFormula::Imp(a, b) => Compiled::Imp(bx(self.compile(a)), bx(self.compile(b))),
            FOFormula::Forall(v, a) | FOFormula::Exists(v, a) => {
                let s = self.slots.len();
                self.slots.push(v.clone());
                self.scope.push((v.clone(), s));
                let body = bx(self.compile(a));
                self.scope.pop();
                if matches!(phi, FOFormula::Forall(..)) {
                    Compiled::Forall(s, body)
                } else {
                    Compiled::Exists(s, body)
                }
            }
        }
    }
}

fn run_compiled(f: &FiniteFrame, c: &Compiled, env: &mut [World]) -> bool {
    match c {
        Compiled::R(a, b) => f.relates(env[*a], env[*b]),
        Compiled::Eq(a, b) => env[*a] == env[*b],
        Compiled::True => true,
        Compiled::False => false,
        Compiled::Not(a) => !run_compiled(f, a, env),
        Compiled::And(a, b) => run_compiled(f, a, env) && run_compiled(f, b, env),
        Compiled::Or(a, b) => run_compiled(f, a, env) || run_compiled(f, b, env),
        Compiled::Imp(a, b) => !run_compiled(f, a, env) || run_compiled(f, b, env),
        Compiled::Forall(s, body) => (0..f.n).all(|w| {
            env[*s] = w;
            run_compiled(f, body, env)
        }),
        Compiled::Exists(s, body) => (0..f.n).any(|w| {
            env[*s] = w;
            run_compiled(f, body, env)
        }),
    }
}

/// A first-order formula prepared for repeated evaluation.
pub struct CompiledFormula {
    code: Compiled,
    slots: usize,
    free: BTreeMap<String, usize>,
}

impl CompiledFormula {
    pub fn new(phi: &FOFormula) -> Self {
        let mut c = Compiler { slots: Vec::new(), scope: Vec::new(), free: BTreeMap::new() };
        let code = c.compile(phi);
        CompiledFormula { code, slots: c.slots.len(), free: c.free }
    }

    /// Evaluates with free variables taken from `vars` and constants from
    /// the nominal/conominal points of `val`.
    pub fn eval(&self, frame: &FiniteFrame, val: &Valuation, vars: &BTreeMap<String, World>) -> Result<bool, SemanticsError> {
        let mut env = vec![0; self.slots];
        for (key, &slot) in &self.free {
            let w = match key.strip_prefix('#') {
                Some(c) => val.point(c),
                None => vars.get(key).copied(),
            }
            .ok_or_else(|| SemanticsError::UnassignedSymbol(key.trim_start_matches('#').to_string()))?;
            if w >= frame.n {
                return Err(SemanticsError::OutOfRange { world: w, n: frame.n });
            }
            env[slot] = w;
        }
        Ok(run_compiled(frame, &self.code, &mut env))
    }
}

/// Tarskian evaluation of a first-order formula in a model, with variable
/// assignment `vars`.
pub fn eval_fo_in(m: &Model, phi: &FOFormula, vars: &BTreeMap<String, World>) -> Result<bool, SemanticsError> {
    CompiledFormula::new(phi).eval(&m.frame, &m.valuation, vars)
}

/// Truth of a closed sentence on a frame.
pub fn eval_fo(frame: &FiniteFrame, s: &FOSentence) -> bool {
    CompiledFormula::new(&s.formula)
        .eval(frame, &Valuation::new(), &BTreeMap::new())
        .expect("sentence is closed")
}

// ---------------------------------------------------------------------------
// Correspondence checking

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counterexample {
    pub n: usize,
    pub relation: Vec<(World, World)>,
    pub inequality_valid: bool,
    pub correspondent_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub max_n: usize,
    pub frames_checked: u64,
    pub counterexamples: Vec<Counterexample>,
}

impl Report {
    pub fn agrees(&self) -> bool {
        self.counterexamples.is_empty()
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.agrees() {
            return write!(f, "verified on all frames n<={} ({} frames)", self.max_n, self.frames_checked);
        }
        write!(f, "{} counterexample(s) among {} frames n<={}", self.counterexamples.len(), self.frames_checked, self.max_n)?;
        for c in &self.counterexamples {
            let pairs: Vec<String> = c.relation.iter().map(|(a, b)| format!("({a},{b})")).collect();
            write!(
                f,
                "\n  n={} R={{{}}}: inequality valid={}, correspondent holds={}",
                c.n,
                pairs.join(","),
                c.inequality_valid,
                c.correspondent_holds
            )?;
        }
        Ok(())
    }
}

/// Compares frame validity of `ineq` against truth of `s` on every frame
/// with at most `max_n` worlds. Counterexamples come out ordered by frame
/// size, then relation index.
pub fn correspondence_check(ineq: &Inequality, s: &FOSentence, max_n: usize) -> Result<Report, SemanticsError> {
    if max_n == 0 || max_n > MAX_ENUMERATED_WORLDS {
        return Err(SemanticsError::EnumerationBound(max_n));
    }
    let compiled = CompiledFormula::new(&s.formula);
    let empty = Valuation::new();
    let no_vars = BTreeMap::new();
    let mut frames_checked = 0;
    let mut counterexamples = Vec::new();
    for n in 1..=max_n {
        let count = 1u64 << (n * n);
        frames_checked += count;
        let found: Vec<Counterexample> = (0..count)
            .into_par_iter()
            .filter_map(|index| {
                let frame = FiniteFrame::from_index(n, index);
                let valid = frame_valid(&frame, ineq);
                let holds = compiled.eval(&frame, &empty, &no_vars).expect("sentence is closed");
                (valid != holds).then(|| Counterexample {
                    n,
                    relation: frame.pairs(),
                    inequality_valid: valid,
                    correspondent_holds: holds,
                })
            })
            .collect();
        counterexamples.extend(found);
    }
    Ok(Report { max_n, frames_checked, counterexamples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fol::{st_quasi, FOTerm};
    use crate::syntax::{parse_formula, parse_inequality};

    fn ineq(s: &str) -> Inequality {
        parse_inequality(s).unwrap()
    }

    fn form(s: &str) -> Formula {
        parse_formula(s).unwrap()
    }

    fn chain() -> FiniteFrame {
        FiniteFrame::new(2, &[(0, 1)]).unwrap()
    }

    fn reflexive_point() -> FiniteFrame {
        FiniteFrame::new(1, &[(0, 0)]).unwrap()
    }

    fn v(n: &str) -> FOTerm {
        FOTerm::var(n)
    }

    #[test]
    fn eval_examples() {
        let m = Model::new(reflexive_point(), Valuation::new().with_prop("p", &[0])).unwrap();
        assert!(eval(&m, 0, &form("box p")).unwrap());
        let m = Model::new(chain(), Valuation::new().with_prop("p", &[])).unwrap();
        assert!(!eval(&m, 0, &form("box p")).unwrap());
        let m = Model::new(chain(), Valuation::new().with_nominal("i0", 0)).unwrap();
        assert!(eval(&m, 1, &form("bdiam i0")).unwrap());
        assert!(!eval(&m, 0, &form("bdiam i0")).unwrap());
        assert_eq!(eval(&m, 0, &form("q")), Err(SemanticsError::UnassignedSymbol("q".into())));
        let m = Model::new(chain(), Valuation::new().with_conominal("m0", 0)).unwrap();
        assert!(!eval(&m, 0, &form("m0")).unwrap());
        assert!(eval(&m, 1, &form("m0")).unwrap());
    }

    #[test]
    fn holds_ineq_examples() {
        let m = Model::new(chain(), Valuation::new().with_prop("p", &[1])).unwrap();
        assert!(holds_ineq(&m, &ineq("p <= p")).unwrap());
        assert!(!holds_ineq(&m, &ineq("box p <= p")).unwrap());
        let m = Model::new(reflexive_point(), Valuation::new().with_prop("p", &[0])).unwrap();
        assert!(holds_ineq(&m, &ineq("box p <= p")).unwrap());
    }

    #[test]
    fn frame_valid_examples() {
        assert!(frame_valid(&reflexive_point(), &ineq("box p <= p")));
        assert!(!frame_valid(&chain(), &ineq("box p <= p")));
        assert!(frame_valid(&chain(), &ineq("p <= T")));
        assert!(frame_valid(&FiniteFrame::new(3, &[]).unwrap(), &ineq("p <= T")));
    }

    #[test]
    fn eval_fo_examples() {
        let refl = FOSentence::close(FOFormula::R(v("x"), v("x")), ["x".to_string()]);
        assert!(eval_fo(&reflexive_point(), &refl));
        let shift = FOSentence::close(
            FOFormula::imp(FOFormula::R(v("i0"), v("i1")), FOFormula::R(v("i1"), v("i1"))),
            ["i0".to_string(), "i1".to_string()],
        );
        assert!(!eval_fo(&chain(), &shift));
        assert!(eval_fo(&FiniteFrame::new(3, &[]).unwrap(), &shift));
    }

    #[test]
    fn eval_fo_respects_shadowing() {
        // ∀x (∃x R(x,x)) ∧ R(x,x) with the outer x free
        let phi = FOFormula::and(FOFormula::exists("x", FOFormula::R(v("x"), v("x"))), FOFormula::R(v("x"), v("x")));
        let frame = FiniteFrame::new(2, &[(1, 1)]).unwrap();
        let m = Model::new(frame, Valuation::new()).unwrap();
        let at = |w| BTreeMap::from([("x".to_string(), w)]);
        assert!(!eval_fo_in(&m, &phi, &at(0)).unwrap());
        assert!(eval_fo_in(&m, &phi, &at(1)).unwrap());
    }

    #[test]
    fn correspondence_examples() {
        let refl = FOSentence::close(FOFormula::R(v("x"), v("x")), ["x".to_string()]);
        let report = correspondence_check(&ineq("box p <= p"), &refl, 3).unwrap();
        assert!(report.agrees());
        assert_eq!(report.frames_checked, 2 + 16 + 512);

        let shift = FOSentence::close(
            FOFormula::imp(FOFormula::R(v("x"), v("y")), FOFormula::R(v("y"), v("y"))),
            ["x".to_string(), "y".to_string()],
        );
        assert!(correspondence_check(&ineq("T <= box(box p -> p)"), &shift, 3).unwrap().agrees());

        let report = correspondence_check(&ineq("box p <= p"), &shift, 2).unwrap();
        assert!(!report.agrees());
        assert!(report.counterexamples.iter().any(|c| c.relation == vec![(0, 1), (1, 1)]));
        assert!(report.to_string().contains("counterexample"));

        assert!(correspondence_check(&ineq("p <= p"), &refl, 0).is_err());
    }

    #[test]
    fn st_quasi_agrees_with_quasi_semantics() {
        let q = QuasiInequality {
            antecedents: vec![ineq("bdiam i0 <= m0")],
            conclusion: ineq("i0 <= m0"),
        };
        let s = st_quasi(&q).unwrap();
        for index in 0..16 {
            let frame = FiniteFrame::from_index(2, index);
            assert_eq!(frame_valid_quasi(&frame, &q), eval_fo(&frame, &s), "{frame}");
        }
    }

    #[test]
    fn anchors_detect_satisfiability() {
        let frame = chain();
        // no constraint: every anchor pair satisfiable
        assert_eq!(satisfiable_anchors(&frame, &[ineq("i0 <= T")], "i0", "m0"), 0b1111);
        // i0 ≤ m0 means i0 ≠ m0
        assert_eq!(satisfiable_anchors(&frame, &[ineq("i0 <= m0")], "i0", "m0"), 0b0110);
        // existential over p
        let a = satisfiable_anchors(&frame, &[ineq("i0 <= p"), ineq("p <= m0")], "i0", "m0");
        assert_eq!(a, 0b0110);
    }

    #[test]
    fn frame_index_roundtrip() {
        for index in 0..512u64 {
            let f = FiniteFrame::from_index(3, index);
            let back: u64 = f.pairs().iter().map(|(a, b)| 1u64 << (a * 3 + b)).sum();
            assert_eq!(back, index);
        }
    }
}
