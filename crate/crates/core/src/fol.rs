//! First-order correspondence language over a binary relation `R` and
//! equality, the standard translation of pure expanded formulas, and a
//! best-effort simplifier.
//!
//! The simplifier works on negation normal form and applies one-point rules
//! (`∀x(x≠t ∨ φ) ⇒ φ[t/x]`, `∃x(x=t ∧ φ) ⇒ φ[t/x]`), miniscoping, unit
//! removal and vacuous-quantifier elimination until nothing changes, then
//! renders disjunctions with negative literals back as implications.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::syntax::{Formula, Inequality, QuasiInequality};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", content = "name", rename_all = "lowercase")]
pub enum FOTerm {
    Var(String),
    /// A nominal or conominal name, interpreted by a valuation.
    Const(String),
}

impl FOTerm {
    pub fn var(name: impl Into<String>) -> Self {
        FOTerm::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        FOTerm::Const(name.into())
    }

    pub fn name(&self) -> &str {
        match self {
            FOTerm::Var(n) | FOTerm::Const(n) => n,
        }
    }
}

impl fmt::Display for FOTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "op", content = "args", rename_all = "lowercase")]
pub enum FOFormula {
    R(FOTerm, FOTerm),
    Eq(FOTerm, FOTerm),
    Neq(FOTerm, FOTerm),
    True,
    False,
    Not(Box<FOFormula>),
    And(Box<FOFormula>, Box<FOFormula>),
    Or(Box<FOFormula>, Box<FOFormula>),
    Imp(Box<FOFormula>, Box<FOFormula>),
    Forall(String, Box<FOFormula>),
    Exists(String, Box<FOFormula>),
}

impl FOFormula {
    pub fn negate(a: FOFormula) -> Self {
        FOFormula::Not(Box::new(a))
    }

    pub fn and(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::Or(Box::new(a), Box::new(b))
    }

    pub fn imp(a: FOFormula, b: FOFormula) -> Self {
        FOFormula::Imp(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, body: FOFormula) -> Self {
        FOFormula::Forall(v.into(), Box::new(body))
    }

    pub fn exists(v: impl Into<String>, body: FOFormula) -> Self {
        FOFormula::Exists(v.into(), Box::new(body))
    }

    /// Left-nested conjunction; the empty conjunction is `True`.
    pub fn conj(items: impl IntoIterator<Item = FOFormula>) -> Self {
        items.into_iter().reduce(FOFormula::and).unwrap_or(FOFormula::True)
    }

    /// Left-nested disjunction; the empty disjunction is `False`.
    pub fn disj(items: impl IntoIterator<Item = FOFormula>) -> Self {
        items.into_iter().reduce(FOFormula::or).unwrap_or(FOFormula::False)
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        fn go(phi: &FOFormula, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
            let mut term = |t: &FOTerm, bound: &Vec<String>| {
                if let FOTerm::Var(v) = t {
                    if !bound.contains(v) {
                        out.insert(v.clone());
                    }
                }
            };
            match phi {
                FOFormula::R(a, b) | FOFormula::Eq(a, b) | FOFormula::Neq(a, b) => {
                    term(a, bound);
                    term(b, bound);
                }
                FOFormula::True | FOFormula::False => {}
                FOFormula::Not(a) => go(a, bound, out),
                FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Imp(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                FOFormula::Forall(v, a) | FOFormula::Exists(v, a) => {
                    bound.push(v.clone());
                    go(a, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn constants(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit_terms(&mut |t| {
            if let FOTerm::Const(c) = t {
                out.insert(c.clone());
            }
        });
        out
    }

    /// Names of all quantifier binders, in order of appearance.
    pub fn binders(&self) -> Vec<String> {
        let mut out = Vec::new();
        fn go(phi: &FOFormula, out: &mut Vec<String>) {
            match phi {
                FOFormula::Not(a) => go(a, out),
                FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Imp(a, b) => {
                    go(a, out);
                    go(b, out);
                }
                FOFormula::Forall(v, a) | FOFormula::Exists(v, a) => {
                    out.push(v.clone());
                    go(a, out);
                }
                _ => {}
            }
        }
        go(self, &mut out);
        out
    }

    fn visit_terms(&self, f: &mut impl FnMut(&FOTerm)) {
        match self {
            FOFormula::R(a, b) | FOFormula::Eq(a, b) | FOFormula::Neq(a, b) => {
                f(a);
                f(b);
            }
            FOFormula::True | FOFormula::False => {}
            FOFormula::Not(a) | FOFormula::Forall(_, a) | FOFormula::Exists(_, a) => a.visit_terms(f),
            FOFormula::And(a, b) | FOFormula::Or(a, b) | FOFormula::Imp(a, b) => {
                a.visit_terms(f);
                b.visit_terms(f);
            }
        }
    }

    fn map_terms(&self, f: &impl Fn(&FOTerm) -> FOTerm) -> FOFormula {
        match self {
            FOFormula::R(a, b) => FOFormula::R(f(a), f(b)),
            FOFormula::Eq(a, b) => FOFormula::Eq(f(a), f(b)),
            FOFormula::Neq(a, b) => FOFormula::Neq(f(a), f(b)),
            FOFormula::True => FOFormula::True,
            FOFormula::False => FOFormula::False,
            FOFormula::Not(a) => FOFormula::negate(a.map_terms(f)),
            FOFormula::And(a, b) => FOFormula::and(a.map_terms(f), b.map_terms(f)),
            FOFormula::Or(a, b) => FOFormula::or(a.map_terms(f), b.map_terms(f)),
            FOFormula::Imp(a, b) => FOFormula::imp(a.map_terms(f), b.map_terms(f)),
            FOFormula::Forall(v, a) => FOFormula::forall(v.clone(), a.map_terms(f)),
            FOFormula::Exists(v, a) => FOFormula::exists(v.clone(), a.map_terms(f)),
        }
    }
}

/// Sort key for names of the form `<letters><digits>`: nominals before
/// conominals, then numerically.
pub fn symbol_order(name: &str) -> (String, u64, String) {
    let split = name.find(|c: char| c.is_ascii_digit()).unwrap_or(name.len());
    let (head, tail) = name.split_at(split);
    let index = tail.parse().unwrap_or(u64::MAX);
    (head.to_string(), index, name.to_string())
}

/// A closed formula whose leading universal block binds the promoted
/// nominal and conominal names.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FOSentence {
    pub formula: FOFormula,
    pub promoted: Vec<String>,
}

impl FOSentence {
    /// Universally closes `matrix` over `vars` in sorted order.
    pub fn close(matrix: FOFormula, vars: impl IntoIterator<Item = String>) -> Self {
        let mut vars: Vec<String> = vars.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        vars.sort_by_key(|v| symbol_order(v));
        let formula = vars
            .iter()
            .rev()
            .fold(matrix, |acc, v| FOFormula::forall(v.clone(), acc));
        FOSentence { formula, promoted: vars }
    }

    pub fn is_closed(&self) -> bool {
        self.formula.free_vars().is_empty() && self.formula.constants().is_empty()
    }

    /// The correspondent of several quasi-inequalities: the conjunction of
    /// their translations, with universal quantifiers shared.
    pub fn conjoin(sentences: &[FOSentence]) -> FOSentence {
        match sentences {
            [one] => one.clone(),
            _ => {
                let mut vars = BTreeSet::new();
                let mut matrices = Vec::new();
                for s in sentences {
                    let (prefix, matrix) = split_universal_prefix(&s.formula);
                    vars.extend(prefix);
                    matrices.push(matrix);
                }
                FOSentence::close(FOFormula::conj(matrices), vars)
            }
        }
    }
}

fn split_universal_prefix(phi: &FOFormula) -> (Vec<String>, FOFormula) {
    let mut vars = Vec::new();
    let mut cur = phi;
    while let FOFormula::Forall(v, body) = cur {
        vars.push(v.clone());
        cur = body;
    }
    (vars, cur.clone())
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum FolError {
    #[error("formula `{0}` contains propositional variables")]
    NonPureInput(String),
}

struct VarGen {
    next: usize,
    avoid: BTreeSet<String>,
}

impl VarGen {
    fn new(avoid: impl IntoIterator<Item = String>) -> Self {
        VarGen { next: 0, avoid: avoid.into_iter().collect() }
    }

    fn fresh(&mut self) -> String {
        loop {
            let name = format!("x{}", self.next);
            self.next += 1;
            if !self.avoid.contains(&name) {
                return name;
            }
        }
    }
}

fn st(phi: &Formula, x: &FOTerm, gen: &mut VarGen) -> FOFormula {
    match phi {
        Formula::Prop(_) => unreachable!("purity checked by callers"),
        Formula::Top => FOFormula::True,
        Formula::Bot => FOFormula::False,
        Formula::Nom(i) => FOFormula::Eq(x.clone(), FOTerm::constant(i)),
        Formula::CoNom(m) => FOFormula::Neq(x.clone(), FOTerm::constant(m)),
        Formula::And(a, b) => FOFormula::and(st(a, x, gen), st(b, x, gen)),
        Formula::Or(a, b) => FOFormula::or(st(a, x, gen), st(b, x, gen)),
        Formula::Imp(a, b) => FOFormula::imp(st(a, x, gen), st(b, x, gen)),
        Formula::Box(a) => {
            let y = gen.fresh();
            let yt = FOTerm::var(&y);
            FOFormula::forall(y, FOFormula::imp(FOFormula::R(x.clone(), yt.clone()), st(a, &yt, gen)))
        }
        Formula::BlackDiamond(a) => {
            let y = gen.fresh();
            let yt = FOTerm::var(&y);
            FOFormula::exists(y, FOFormula::and(FOFormula::R(yt.clone(), x.clone()), st(a, &yt, gen)))
        }
    }
}

fn require_pure(phi: &Formula) -> Result<(), FolError> {
    if phi.is_pure() {
        Ok(())
    } else {
        Err(FolError::NonPureInput(phi.to_string()))
    }
}

/// Standard translation of a pure formula at the free variable `x`.
/// Bound variables are `x0, x1, …` (skipping `x` itself), allocated left to
/// right; nominals and conominals become constants.
pub fn st_formula(phi: &Formula, x: &str) -> Result<FOFormula, FolError> {
    require_pure(phi)?;
    let mut gen = VarGen::new([x.to_string()]);
    Ok(st(phi, &FOTerm::var(x), &mut gen))
}

fn st_ineq(ineq: &Inequality, gen: &mut VarGen) -> FOFormula {
    let x = gen.fresh();
    let xt = FOTerm::var(&x);
    FOFormula::forall(x, FOFormula::imp(st(&ineq.lhs, &xt, gen), st(&ineq.rhs, &xt, gen)))
}

pub fn st_inequality(ineq: &Inequality) -> Result<FOFormula, FolError> {
    require_pure(&ineq.lhs)?;
    require_pure(&ineq.rhs)?;
    Ok(st_ineq(ineq, &mut VarGen::new([])))
}

/// Translation of a pure quasi-inequality with every nominal and conominal
/// promoted to a universally quantified variable.
pub fn st_quasi(q: &QuasiInequality) -> Result<FOSentence, FolError> {
    for ineq in q.antecedents.iter().chain([&q.conclusion]) {
        require_pure(&ineq.lhs)?;
        require_pure(&ineq.rhs)?;
    }
    let mut gen = VarGen::new([]);
    let antecedents: Vec<FOFormula> = q.antecedents.iter().map(|i| st_ineq(i, &mut gen)).collect();
    let conclusion = st_ineq(&q.conclusion, &mut gen);
    let body = if antecedents.is_empty() {
        conclusion
    } else {
        FOFormula::imp(FOFormula::conj(antecedents), conclusion)
    };
    let constants = body.constants();
    let promote = |t: &FOTerm| match t {
        FOTerm::Const(c) => FOTerm::Var(c.clone()),
        other => other.clone(),
    };
    Ok(FOSentence::close(body.map_terms(&promote), constants))
}

/// The first-order correspondent of a list of pure quasi-inequalities: the
/// conjunction of their translations, optionally simplified.
pub fn correspondent(quasis: &[QuasiInequality], simplified: bool) -> Result<FOSentence, FolError> {
    let parts = quasis.iter().map(st_quasi).collect::<Result<Vec<_>, _>>()?;
    let s = FOSentence::conjoin(&parts);
    Ok(if simplified { simplify(&s) } else { s })
}

// ---------------------------------------------------------------------------
// Simplification

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Atom {
    R(FOTerm, FOTerm),
    Eq(FOTerm, FOTerm),
}

impl Atom {
    fn same(&self, other: &Atom) -> bool {
        match (self, other) {
            (Atom::Eq(a, b), Atom::Eq(c, d)) => (a == c && b == d) || (a == d && b == c),
            _ => self == other,
        }
    }

    fn mentions(&self, v: &str) -> bool {
        let (a, b) = match self {
            Atom::R(a, b) | Atom::Eq(a, b) => (a, b),
        };
        is_var(a, v) || is_var(b, v)
    }
}

fn is_var(t: &FOTerm, v: &str) -> bool {
    matches!(t, FOTerm::Var(n) if n == v)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Nnf {
    True,
    False,
    Lit(bool, Atom),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    Forall(String, Box<Nnf>),
    Exists(String, Box<Nnf>),
}

fn to_nnf(phi: &FOFormula, negate: bool) -> Nnf {
    match phi {
        FOFormula::R(a, b) => Nnf::Lit(!negate, Atom::R(a.clone(), b.clone())),
        FOFormula::Eq(a, b) => Nnf::Lit(!negate, Atom::Eq(a.clone(), b.clone())),
        FOFormula::Neq(a, b) => Nnf::Lit(negate, Atom::Eq(a.clone(), b.clone())),
        FOFormula::True => if negate { Nnf::False } else { Nnf::True },
        FOFormula::False => if negate { Nnf::True } else { Nnf::False },
        FOFormula::Not(a) => to_nnf(a, !negate),
        FOFormula::And(a, b) => {
            let items = vec![to_nnf(a, negate), to_nnf(b, negate)];
            if negate { Nnf::Or(items) } else { Nnf::And(items) }
        }
        FOFormula::Or(a, b) => {
            let items = vec![to_nnf(a, negate), to_nnf(b, negate)];
            if negate { Nnf::And(items) } else { Nnf::Or(items) }
        }
        FOFormula::Imp(a, b) => {
            if negate {
                Nnf::And(vec![to_nnf(a, false), to_nnf(b, true)])
            } else {
                Nnf::Or(vec![to_nnf(a, true), to_nnf(b, false)])
            }
        }
        FOFormula::Forall(v, a) => {
            if negate {
                Nnf::Exists(v.clone(), Box::new(to_nnf(a, true)))
            } else {
                Nnf::Forall(v.clone(), Box::new(to_nnf(a, false)))
            }
        }
        FOFormula::Exists(v, a) => {
            if negate {
                Nnf::Forall(v.clone(), Box::new(to_nnf(a, true)))
            } else {
                Nnf::Exists(v.clone(), Box::new(to_nnf(a, false)))
            }
        }
    }
}

impl Nnf {
    fn free_in(&self, v: &str) -> bool {
        match self {
            Nnf::True | Nnf::False => false,
            Nnf::Lit(_, atom) => atom.mentions(v),
            Nnf::And(items) | Nnf::Or(items) => items.iter().any(|i| i.free_in(v)),
            Nnf::Forall(w, body) | Nnf::Exists(w, body) => w != v && body.free_in(v),
        }
    }

    /// `self[t/v]`, or `None` when a binder would capture `t`.
    fn subst(&self, v: &str, t: &FOTerm) -> Option<Nnf> {
        let term = |s: &FOTerm| if is_var(s, v) { t.clone() } else { s.clone() };
        Some(match self {
            Nnf::True | Nnf::False => self.clone(),
            Nnf::Lit(pos, Atom::R(a, b)) => Nnf::Lit(*pos, Atom::R(term(a), term(b))),
            Nnf::Lit(pos, Atom::Eq(a, b)) => Nnf::Lit(*pos, Atom::Eq(term(a), term(b))),
            Nnf::And(items) => Nnf::And(items.iter().map(|i| i.subst(v, t)).collect::<Option<_>>()?),
            Nnf::Or(items) => Nnf::Or(items.iter().map(|i| i.subst(v, t)).collect::<Option<_>>()?),
            Nnf::Forall(w, body) | Nnf::Exists(w, body) => {
                if w == v || !body.free_in(v) {
                    return Some(self.clone());
                }
                if is_var(t, w) {
                    return None;
                }
                let body = Box::new(body.subst(v, t)?);
                match self {
                    Nnf::Forall(..) => Nnf::Forall(w.clone(), body),
                    _ => Nnf::Exists(w.clone(), body),
                }
            }
        })
    }
}

/// Junction helper: `conj` selects ∧ (unit True, zero False) or ∨.
fn junction(conj: bool, items: Vec<Nnf>) -> Nnf {
    let (unit, zero) = if conj { (Nnf::True, Nnf::False) } else { (Nnf::False, Nnf::True) };
    let mut flat: Vec<Nnf> = Vec::new();
    let mut stack: Vec<Nnf> = items.into_iter().rev().collect();
    while let Some(item) = stack.pop() {
        match item {
            Nnf::And(inner) if conj => stack.extend(inner.into_iter().rev()),
            Nnf::Or(inner) if !conj => stack.extend(inner.into_iter().rev()),
            i if i == unit => {}
            i if i == zero => return zero,
            i => {
                if !flat.contains(&i) {
                    flat.push(i);
                }
            }
        }
    }
    // complementary literals
    for (k, a) in flat.iter().enumerate() {
        if let Nnf::Lit(pa, atom_a) = a {
            for b in &flat[k + 1..] {
                if let Nnf::Lit(pb, atom_b) = b {
                    if pa != pb && atom_a.same(atom_b) {
                        return zero;
                    }
                }
            }
        }
    }
    // symmetric duplicates of equalities
    let mut dedup: Vec<Nnf> = Vec::new();
    for item in flat {
        let dup = dedup.iter().any(|d| match (d, &item) {
            (Nnf::Lit(p1, a1), Nnf::Lit(p2, a2)) => p1 == p2 && a1.same(a2),
            _ => false,
        });
        if !dup {
            dedup.push(item);
        }
    }
    match dedup.len() {
        0 => unit,
        1 => dedup.pop().expect("one element"),
        _ => {
            if conj {
                Nnf::And(dedup)
            } else {
                Nnf::Or(dedup)
            }
        }
    }
}

fn simp(n: &Nnf) -> Nnf {
    match n {
        Nnf::True | Nnf::False => n.clone(),
        Nnf::Lit(pos, Atom::Eq(a, b)) if a == b => if *pos { Nnf::True } else { Nnf::False },
        Nnf::Lit(..) => n.clone(),
        Nnf::And(items) => junction(true, items.iter().map(simp).collect()),
        Nnf::Or(items) => junction(false, items.iter().map(simp).collect()),
        Nnf::Forall(v, body) => quantifier(true, v, simp(body)),
        Nnf::Exists(v, body) => quantifier(false, v, simp(body)),
    }
}

/// Simplifies `∀v body` (`universal`) or `∃v body` with `body` already simple.
fn quantifier(universal: bool, v: &str, body: Nnf) -> Nnf {
    if !body.free_in(v) {
        return body;
    }
    let rebuild = |b: Nnf| {
        if universal {
            Nnf::Forall(v.to_string(), Box::new(b))
        } else {
            Nnf::Exists(v.to_string(), Box::new(b))
        }
    };
    // ∀ looks for `v ≠ t` among disjuncts, ∃ for `v = t` among conjuncts
    let (items, inner_conj) = match &body {
        Nnf::Or(items) if universal => (items.clone(), false),
        Nnf::And(items) if !universal => (items.clone(), true),
        other => (vec![other.clone()], !universal),
    };
    let wanted = !universal;
    for (k, item) in items.iter().enumerate() {
        let Nnf::Lit(pos, Atom::Eq(a, b)) = item else { continue };
        if *pos != wanted {
            continue;
        }
        let t = if is_var(a, v) && !is_var(b, v) {
            b
        } else if is_var(b, v) && !is_var(a, v) {
            a
        } else {
            continue;
        };
        let rest: Vec<Nnf> = items.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, i)| i.clone()).collect();
        if let Some(substituted) = junction(inner_conj, rest).subst(v, t) {
            return simp(&substituted);
        }
    }
    match body {
        // ∀ distributes over ∧, ∃ over ∨
        Nnf::And(items) if universal => {
            simp(&Nnf::And(items.into_iter().map(|i| Nnf::Forall(v.to_string(), Box::new(i))).collect()))
        }
        Nnf::Or(items) if !universal => {
            simp(&Nnf::Or(items.into_iter().map(|i| Nnf::Exists(v.to_string(), Box::new(i))).collect()))
        }
        Nnf::Or(items) if universal => scope_out(universal, v, items, false, rebuild),
        Nnf::And(items) if !universal => scope_out(universal, v, items, true, rebuild),
        other => rebuild(other),
    }
}

/// Moves junction members not mentioning `v` out of the quantifier.
fn scope_out(universal: bool, v: &str, items: Vec<Nnf>, conj: bool, rebuild: impl Fn(Nnf) -> Nnf) -> Nnf {
    let (dependent, independent): (Vec<Nnf>, Vec<Nnf>) = items.into_iter().partition(|i| i.free_in(v));
    if independent.is_empty() {
        return rebuild(junction(conj, dependent));
    }
    let inner = quantifier(universal, v, junction(conj, dependent));
    let mut all = independent;
    all.push(inner);
    simp(&junction(conj, all))
}

fn atom_formula(atom: &Atom) -> FOFormula {
    match atom {
        Atom::R(a, b) => FOFormula::R(a.clone(), b.clone()),
        Atom::Eq(a, b) => FOFormula::Eq(a.clone(), b.clone()),
    }
}

fn from_nnf(n: &Nnf) -> FOFormula {
    match n {
        Nnf::True => FOFormula::True,
        Nnf::False => FOFormula::False,
        Nnf::Lit(true, atom) => atom_formula(atom),
        Nnf::Lit(false, Atom::R(a, b)) => FOFormula::negate(FOFormula::R(a.clone(), b.clone())),
        Nnf::Lit(false, Atom::Eq(a, b)) => FOFormula::Neq(a.clone(), b.clone()),
        Nnf::And(items) => FOFormula::conj(items.iter().map(from_nnf)),
        Nnf::Or(items) => {
            let (negative, positive): (Vec<&Nnf>, Vec<&Nnf>) =
                items.iter().partition(|i| matches!(i, Nnf::Lit(false, _)));
            let positive = FOFormula::disj(positive.into_iter().map(from_nnf));
            if negative.is_empty() {
                return positive;
            }
            let antecedent = FOFormula::conj(negative.into_iter().map(|i| match i {
                Nnf::Lit(_, atom) => atom_formula(atom),
                _ => unreachable!("partitioned on negative literals"),
            }));
            FOFormula::imp(antecedent, positive)
        }
        Nnf::Forall(v, body) => FOFormula::forall(v.clone(), from_nnf(body)),
        Nnf::Exists(v, body) => FOFormula::exists(v.clone(), from_nnf(body)),
    }
}

/// Pulls universal quantifiers out of disjunctions where no other disjunct
/// mentions the bound variable, so `a ∨ ∀v b` prints as `∀v (a ∨ b)`.
fn lift_universals(n: Nnf) -> Nnf {
    match n {
        Nnf::Forall(v, body) => Nnf::Forall(v, Box::new(lift_universals(*body))),
        Nnf::Or(items) => {
            let mut items: Vec<Nnf> = items.into_iter().map(lift_universals).collect();
            let mut bound: Vec<String> = Vec::new();
            for k in 0..items.len() {
                while let Nnf::Forall(v, body) = &items[k] {
                    let clash = bound.contains(v)
                        || items.iter().enumerate().any(|(j, other)| j != k && other.free_in(v));
                    if clash {
                        break;
                    }
                    bound.push(v.clone());
                    items[k] = (**body).clone();
                }
            }
            let inner = junction(false, items);
            bound.into_iter().rev().fold(inner, |acc, v| Nnf::Forall(v, Box::new(acc)))
        }
        other => other,
    }
}

/// Best-effort simplification; the result is logically equivalent to the
/// input, printed in implication form with a sorted universal prefix.
pub fn simplify(s: &FOSentence) -> FOSentence {
    let mut cur = to_nnf(&s.formula, false);
    for _ in 0..64 {
        let next = simp(&cur);
        if next == cur {
            break;
        }
        cur = next;
    }
    let (prefix, matrix) = split_universal_prefix(&from_nnf(&lift_universals(cur)));
    FOSentence::close(matrix, prefix)
}

// ---------------------------------------------------------------------------
// Printing

const P_IMP: u8 = 1;
const P_OR: u8 = 2;
const P_AND: u8 = 3;
const P_NOT: u8 = 4;

fn write_fo(f: &mut fmt::Formatter<'_>, phi: &FOFormula, min: u8) -> fmt::Result {
    let paren = |f: &mut fmt::Formatter<'_>, prec: u8, body: &dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result| {
        if prec < min {
            f.write_str("(")?;
            body(f)?;
            f.write_str(")")
        } else {
            body(f)
        }
    };
    match phi {
        FOFormula::R(a, b) => write!(f, "R({a},{b})"),
        FOFormula::Eq(a, b) => write!(f, "{a} = {b}"),
        FOFormula::Neq(a, b) => write!(f, "{a} != {b}"),
        FOFormula::True => f.write_str("T"),
        FOFormula::False => f.write_str("F"),
        FOFormula::Not(a) => {
            f.write_str("~")?;
            write_fo(f, a, P_NOT + 1)
        }
        FOFormula::And(a, b) => paren(f, P_AND, &|f| {
            write_fo(f, a, P_AND)?;
            f.write_str(" /\\ ")?;
            write_fo(f, b, P_AND + 1)
        }),
        FOFormula::Or(a, b) => paren(f, P_OR, &|f| {
            write_fo(f, a, P_OR)?;
            f.write_str(" \\/ ")?;
            write_fo(f, b, P_OR + 1)
        }),
        FOFormula::Imp(a, b) => paren(f, P_IMP, &|f| {
            write_fo(f, a, P_IMP + 1)?;
            f.write_str(" -> ")?;
            write_fo(f, b, P_IMP)
        }),
        FOFormula::Forall(v, body) | FOFormula::Exists(v, body) => {
            let q = if matches!(phi, FOFormula::Forall(..)) { "A" } else { "E" };
            paren(f, 0, &|f| {
                write!(f, "{q} {v}. ")?;
                match **body {
                    FOFormula::Forall(..) | FOFormula::Exists(..) => write_fo(f, body, 0),
                    FOFormula::And(..) | FOFormula::Or(..) | FOFormula::Imp(..) => {
                        f.write_str("(")?;
                        write_fo(f, body, 0)?;
                        f.write_str(")")
                    }
                    _ => write_fo(f, body, P_NOT),
                }
            })
        }
    }
}

impl fmt::Display for FOFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_fo(f, self, 0)
    }
}

impl fmt::Display for FOSentence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.formula)
    }
}
