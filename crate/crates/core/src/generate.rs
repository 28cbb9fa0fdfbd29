//! Seeded random generators for tests: inductive inequalities built
//! directly from the Ant/Suc/PIA/POS grammars, arbitrary and pure formulas
//! of the expanded language, and random finite models.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::classify::Polarity;
use crate::semantics::{FiniteFrame, Model, Valuation};
use crate::syntax::{Formula, Inequality, SymbolKind};

pub const DEFAULT_SEED: u64 = 0x00a1_ba5e_ed00;

/// The seed from `ALBA_SEED` (decimal or `0x` hex), or [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var("ALBA_SEED")
        .ok()
        .and_then(|s| {
            let s = s.trim();
            match s.strip_prefix("0x") {
                Some(hex) => u64::from_str_radix(hex, 16).ok(),
                None => s.parse().ok(),
            }
        })
        .unwrap_or(DEFAULT_SEED)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

const VAR_NAMES: [&str; 4] = ["p", "q", "r", "s"];

/// A generated inductive inequality with the dependence order used to
/// build it: `order[k]` may only appear in POS positions of blocks whose
/// main variable comes later in `order`.
#[derive(Clone, Debug)]
pub struct Generated {
    pub inequality: Inequality,
    pub order: Vec<String>,
}

/// Random inductive inequalities over at most `max_vars` variables with
/// both sides of depth at most `max_depth`.
#[derive(Clone, Debug)]
pub struct InductiveGenerator {
    pub max_vars: usize,
    pub max_depth: usize,
}

struct Build<'a, R: Rng> {
    rng: &'a mut R,
    order: &'a [String],
    seen: BTreeSet<(String, Polarity)>,
}

impl<R: Rng> Build<'_, R> {
    fn var(&mut self, name: &str, pol: Polarity) -> Formula {
        self.seen.insert((name.to_string(), pol));
        Formula::prop(name)
    }

    fn below(&self, p: &str) -> Vec<String> {
        let k = self.order.iter().position(|v| v == p).expect("variable in order");
        self.order[..k].to_vec()
    }

    fn pos(&mut self, allowed: &[String], depth: usize, pol: Polarity) -> Formula {
        let leaf = depth == 0 || self.rng.gen_bool(0.45);
        if leaf {
            if allowed.is_empty() || self.rng.gen_bool(0.15) {
                return Formula::Top;
            }
            let v = allowed.choose(self.rng).expect("non-empty").clone();
            return self.var(&v, pol);
        }
        match self.rng.gen_range(0..3) {
            0 => Formula::boxed(self.pos(allowed, depth - 1, pol)),
            1 => Formula::and(self.pos(allowed, depth - 1, pol), self.pos(allowed, depth - 1, pol)),
            _ => Formula::or(self.pos(allowed, depth - 1, pol), self.pos(allowed, depth - 1, pol)),
        }
    }

    fn pia(&mut self, p: &str, depth: usize, pol: Polarity) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.35) {
            if self.rng.gen_bool(0.05) {
                return Formula::Top;
            }
            return self.var(p, pol);
        }
        if self.rng.gen_bool(0.4) {
            Formula::boxed(self.pia(p, depth - 1, pol))
        } else {
            let allowed = self.below(p);
            let left = self.pos(&allowed, depth - 1, pol.flip());
            Formula::imp(left, self.pia(p, depth - 1, pol))
        }
    }

    fn ant(&mut self, depth: usize, pol: Polarity) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.6) {
            let p = self.order.choose(self.rng).expect("non-empty order").clone();
            return self.pia(&p, depth, pol);
        }
        let a = self.ant(depth - 1, pol);
        let b = self.ant(depth - 1, pol);
        if self.rng.gen_bool(0.5) {
            Formula::and(a, b)
        } else {
            Formula::or(a, b)
        }
    }

    fn suc(&mut self, depth: usize, pol: Polarity) -> Formula {
        if depth == 0 || self.rng.gen_bool(0.3) {
            if self.rng.gen_bool(0.1) {
                return Formula::Top;
            }
            let v = self.order.choose(self.rng).expect("non-empty order").clone();
            return self.var(&v, pol);
        }
        match self.rng.gen_range(0..5) {
            0 => {
                let q = self.order.choose(self.rng).expect("non-empty order").clone();
                let block = self.pia(&q, depth - 1, pol.flip());
                Formula::imp(block, self.suc(depth - 1, pol))
            }
            1 => Formula::boxed(self.suc(depth - 1, pol)),
            2 => Formula::and(self.suc(depth - 1, pol), self.suc(depth - 1, pol)),
            _ => Formula::or(self.suc(depth - 1, pol), self.suc(depth - 1, pol)),
        }
    }
}

impl Default for InductiveGenerator {
    fn default() -> Self {
        InductiveGenerator { max_vars: 3, max_depth: 4 }
    }
}

impl InductiveGenerator {
    pub fn new(max_vars: usize, max_depth: usize) -> Self {
        assert!((1..=VAR_NAMES.len()).contains(&max_vars));
        InductiveGenerator { max_vars, max_depth }
    }

    /// Samples until every occurring variable has both a positive and a
    /// negative occurrence (lhs occurrences counted flipped).
    pub fn generate(&self, rng: &mut impl Rng) -> Generated {
        loop {
            let k = rng.gen_range(1..=self.max_vars);
            let mut order: Vec<String> = VAR_NAMES[..k].iter().map(|s| s.to_string()).collect();
            order.shuffle(rng);
            let mut b = Build { rng: &mut *rng, order: &order, seen: BTreeSet::new() };
            let lhs = b.ant(self.max_depth, Polarity::Negative);
            let rhs = b.suc(self.max_depth, Polarity::Positive);
            let vars: BTreeSet<&String> = b.seen.iter().map(|(v, _)| v).collect();
            let balanced = vars.iter().all(|v| {
                b.seen.contains(&((*v).clone(), Polarity::Positive)) && b.seen.contains(&((*v).clone(), Polarity::Negative))
            });
            if balanced && !vars.is_empty() && lhs.depth() <= self.max_depth && rhs.depth() <= self.max_depth {
                order.retain(|v| vars.contains(v));
                return Generated { inequality: Inequality::new(lhs, rhs), order };
            }
        }
    }
}

/// Which constructors a random formula may use.
#[derive(Clone, Debug)]
pub struct FormulaShape {
    pub props: Vec<String>,
    pub nominals: Vec<String>,
    pub conominals: Vec<String>,
    pub expanded: bool,
}

impl FormulaShape {
    /// Pure expanded formulas over the given nominal and conominal names.
    pub fn pure(nominals: &[&str], conominals: &[&str]) -> Self {
        FormulaShape {
            props: Vec::new(),
            nominals: nominals.iter().map(|s| s.to_string()).collect(),
            conominals: conominals.iter().map(|s| s.to_string()).collect(),
            expanded: true,
        }
    }

    /// The whole expanded language.
    pub fn any(props: &[&str], nominals: &[&str], conominals: &[&str]) -> Self {
        FormulaShape {
            props: props.iter().map(|s| s.to_string()).collect(),
            ..FormulaShape::pure(nominals, conominals)
        }
    }
}

pub fn random_formula(rng: &mut impl Rng, shape: &FormulaShape, depth: usize) -> Formula {
    if depth == 0 || rng.gen_bool(0.3) {
        let mut leaves: Vec<Formula> = vec![Formula::Top];
        if shape.expanded {
            leaves.push(Formula::Bot);
        }
        leaves.extend(shape.props.iter().map(Formula::prop));
        leaves.extend(shape.nominals.iter().map(Formula::nom));
        leaves.extend(shape.conominals.iter().map(Formula::conom));
        return leaves.choose(rng).expect("non-empty").clone();
    }
    let ops = if shape.expanded { 5 } else { 4 };
    let op = rng.gen_range(0..ops);
    let mut sub = || random_formula(rng, shape, depth - 1);
    match op {
        0 => Formula::imp(sub(), sub()),
        1 => Formula::and(sub(), sub()),
        2 => Formula::or(sub(), sub()),
        3 => Formula::boxed(sub()),
        _ => Formula::bdiam(sub()),
    }
}

pub fn random_frame(rng: &mut impl Rng, n: usize) -> FiniteFrame {
    let index = if n * n == 64 { rng.gen() } else { rng.gen_range(0..1u64 << (n * n)) };
    FiniteFrame::from_index(n, index)
}

/// A random model on `n` worlds interpreting every symbol in `symbols`.
pub fn random_model<'a>(rng: &mut impl Rng, n: usize, symbols: impl IntoIterator<Item = (SymbolKind, &'a str)>) -> Model {
    let frame = random_frame(rng, n);
    let mut val = Valuation::new();
    for (kind, name) in symbols {
        match kind {
            SymbolKind::Prop => {
                val.props.insert(name.to_string(), rng.gen_range(0..1u64 << n));
            }
            SymbolKind::Nominal => {
                val.nominals.insert(name.to_string(), rng.gen_range(0..n));
            }
            SymbolKind::Conominal => {
                val.conominals.insert(name.to_string(), rng.gen_range(0..n));
            }
        }
    }
    Model::new(frame, val).expect("in range by construction")
}
