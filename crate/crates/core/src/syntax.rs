//! Formulas of the generalized modal language and its expanded form,
//! inequalities, quasi-inequalities, concrete syntax and fresh names.
//!
//! A single [`Formula`] type covers both languages. The base language uses
//! `Prop`, `Top`, `Imp`, `And`, `Or` and `Box`; the expanded language adds
//! `Bot`, nominals, conominals and the black diamond (the diamond along the
//! converse relation). [`Formula::is_base`] tells the two apart.

use std::collections::BTreeSet;
use std::fmt;
use std::iter::Peekable;
use std::str::CharIndices;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    Prop(String),
    Top,
    Bot,
    /// Interpreted as a singleton.
    Nom(String),
    /// Interpreted as the complement of a singleton.
    CoNom(String),
    Imp(Box<Formula>, Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Box(Box<Formula>),
    BlackDiamond(Box<Formula>),
}

impl Formula {
    pub fn prop(name: impl Into<String>) -> Self {
        Formula::Prop(name.into())
    }

    pub fn nom(name: impl Into<String>) -> Self {
        Formula::Nom(name.into())
    }

    pub fn conom(name: impl Into<String>) -> Self {
        Formula::CoNom(name.into())
    }

    pub fn imp(a: Formula, b: Formula) -> Self {
        Formula::Imp(Box::new(a), Box::new(b))
    }

    pub fn and(a: Formula, b: Formula) -> Self {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Self {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn boxed(a: Formula) -> Self {
        Formula::Box(Box::new(a))
    }

    pub fn bdiam(a: Formula) -> Self {
        Formula::BlackDiamond(Box::new(a))
    }

    /// Left-nested join of `items`; the empty join is `Bot`.
    pub fn join(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or(Formula::Bot)
    }

    /// True when the formula only uses the constructors of the base language.
    pub fn is_base(&self) -> bool {
        match self {
            Formula::Prop(_) | Formula::Top => true,
            Formula::Bot | Formula::Nom(_) | Formula::CoNom(_) | Formula::BlackDiamond(_) => false,
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => a.is_base() && b.is_base(),
            Formula::Box(a) => a.is_base(),
        }
    }

    /// A formula is pure when it contains no propositional variable.
    pub fn is_pure(&self) -> bool {
        match self {
            Formula::Prop(_) => false,
            Formula::Top | Formula::Bot | Formula::Nom(_) | Formula::CoNom(_) => true,
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => a.is_pure() && b.is_pure(),
            Formula::Box(a) | Formula::BlackDiamond(a) => a.is_pure(),
        }
    }

    pub fn contains_prop(&self, p: &str) -> bool {
        match self {
            Formula::Prop(q) => q == p,
            Formula::Top | Formula::Bot | Formula::Nom(_) | Formula::CoNom(_) => false,
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.contains_prop(p) || b.contains_prop(p)
            }
            Formula::Box(a) | Formula::BlackDiamond(a) => a.contains_prop(p),
        }
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_symbols(&mut |kind, name| {
            if kind == SymbolKind::Prop {
                out.insert(name.to_string());
            }
        });
        out
    }

    /// Visits every symbol occurrence, left to right.
    pub fn collect_symbols(&self, f: &mut impl FnMut(SymbolKind, &str)) {
        match self {
            Formula::Prop(p) => f(SymbolKind::Prop, p),
            Formula::Nom(i) => f(SymbolKind::Nominal, i),
            Formula::CoNom(m) => f(SymbolKind::Conominal, m),
            Formula::Top | Formula::Bot => {}
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => {
                a.collect_symbols(f);
                b.collect_symbols(f);
            }
            Formula::Box(a) | Formula::BlackDiamond(a) => a.collect_symbols(f),
        }
    }

    /// Uniform substitution of `eta` for every occurrence of `Prop(p)`.
    pub fn substitute(&self, p: &str, eta: &Formula) -> Formula {
        match self {
            Formula::Prop(q) if q == p => eta.clone(),
            Formula::Prop(_) | Formula::Top | Formula::Bot | Formula::Nom(_) | Formula::CoNom(_) => {
                self.clone()
            }
            Formula::Imp(a, b) => Formula::imp(a.substitute(p, eta), b.substitute(p, eta)),
            Formula::And(a, b) => Formula::and(a.substitute(p, eta), b.substitute(p, eta)),
            Formula::Or(a, b) => Formula::or(a.substitute(p, eta), b.substitute(p, eta)),
            Formula::Box(a) => Formula::boxed(a.substitute(p, eta)),
            Formula::BlackDiamond(a) => Formula::bdiam(a.substitute(p, eta)),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Prop(_) | Formula::Top | Formula::Bot | Formula::Nom(_) | Formula::CoNom(_) => 0,
            Formula::Imp(a, b) | Formula::And(a, b) | Formula::Or(a, b) => 1 + a.depth().max(b.depth()),
            Formula::Box(a) | Formula::BlackDiamond(a) => 1 + a.depth(),
        }
    }
}

/// Uniform substitution, free-function form.
pub fn substitute(phi: &Formula, p: &str, eta: &Formula) -> Formula {
    phi.substitute(p, eta)
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Inequality {
    pub lhs: Formula,
    pub rhs: Formula,
}

impl Inequality {
    pub fn new(lhs: Formula, rhs: Formula) -> Self {
        Inequality { lhs, rhs }
    }

    pub fn is_pure(&self) -> bool {
        self.lhs.is_pure() && self.rhs.is_pure()
    }

    pub fn is_base(&self) -> bool {
        self.lhs.is_base() && self.rhs.is_base()
    }

    pub fn contains_prop(&self, p: &str) -> bool {
        self.lhs.contains_prop(p) || self.rhs.contains_prop(p)
    }

    pub fn props(&self) -> BTreeSet<String> {
        let mut out = self.lhs.props();
        out.extend(self.rhs.props());
        out
    }

    pub fn substitute(&self, p: &str, eta: &Formula) -> Inequality {
        Inequality::new(self.lhs.substitute(p, eta), self.rhs.substitute(p, eta))
    }

    pub fn collect_symbols(&self, f: &mut impl FnMut(SymbolKind, &str)) {
        self.lhs.collect_symbols(f);
        self.rhs.collect_symbols(f);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuasiInequality {
    pub antecedents: Vec<Inequality>,
    pub conclusion: Inequality,
}

impl QuasiInequality {
    pub fn is_pure(&self) -> bool {
        self.conclusion.is_pure() && self.antecedents.iter().all(Inequality::is_pure)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    Prop,
    Nominal,
    Conominal,
}

/// Names already in use, per kind. Fresh nominals and conominals are
/// `i<k>` / `m<k>` with the smallest unused `k`; fresh propositional
/// variables are `p<k>`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolPool {
    props: BTreeSet<String>,
    nominals: BTreeSet<String>,
    conominals: BTreeSet<String>,
}

impl SymbolPool {
    pub fn new() -> Self {
        Self::default()
    }

    fn names(&self, kind: SymbolKind) -> &BTreeSet<String> {
        match kind {
            SymbolKind::Prop => &self.props,
            SymbolKind::Nominal => &self.nominals,
            SymbolKind::Conominal => &self.conominals,
        }
    }

    fn names_mut(&mut self, kind: SymbolKind) -> &mut BTreeSet<String> {
        match kind {
            SymbolKind::Prop => &mut self.props,
            SymbolKind::Nominal => &mut self.nominals,
            SymbolKind::Conominal => &mut self.conominals,
        }
    }

    pub fn contains(&self, kind: SymbolKind, name: &str) -> bool {
        self.names(kind).contains(name)
    }

    pub fn insert(&mut self, kind: SymbolKind, name: impl Into<String>) {
        self.names_mut(kind).insert(name.into());
    }

    pub fn register_formula(&mut self, phi: &Formula) {
        phi.collect_symbols(&mut |kind, name| self.insert(kind, name));
    }

    pub fn register_inequality(&mut self, ineq: &Inequality) {
        self.register_formula(&ineq.lhs);
        self.register_formula(&ineq.rhs);
    }

    pub fn fresh(&mut self, kind: SymbolKind) -> String {
        let prefix = match kind {
            SymbolKind::Prop => 'p',
            SymbolKind::Nominal => 'i',
            SymbolKind::Conominal => 'm',
        };
        let used = self.names_mut(kind);
        let name = (0..)
            .map(|k| format!("{prefix}{k}"))
            .find(|n| !used.contains(n))
            .expect("unbounded index range");
        used.insert(name.clone());
        name
    }
}

// ---------------------------------------------------------------------------
// Printing

const PREC_IMP: u8 = 1;
const PREC_OR: u8 = 2;
const PREC_AND: u8 = 3;
const PREC_UNARY: u8 = 4;

fn precedence(phi: &Formula) -> u8 {
    match phi {
        Formula::Imp(..) => PREC_IMP,
        Formula::Or(..) => PREC_OR,
        Formula::And(..) => PREC_AND,
        _ => PREC_UNARY,
    }
}

fn write_formula(f: &mut fmt::Formatter<'_>, phi: &Formula, min_prec: u8) -> fmt::Result {
    let prec = precedence(phi);
    if prec < min_prec {
        f.write_str("(")?;
        write_formula(f, phi, 0)?;
        return f.write_str(")");
    }
    match phi {
        Formula::Prop(name) | Formula::Nom(name) | Formula::CoNom(name) => f.write_str(name),
        Formula::Top => f.write_str("T"),
        Formula::Bot => f.write_str("F"),
        // `->` is right-associative, `/\` and `\/` left-associative.
        Formula::Imp(a, b) => {
            write_formula(f, a, PREC_IMP + 1)?;
            f.write_str(" -> ")?;
            write_formula(f, b, PREC_IMP)
        }
        Formula::Or(a, b) => {
            write_formula(f, a, PREC_OR)?;
            f.write_str(" \\/ ")?;
            write_formula(f, b, PREC_OR + 1)
        }
        Formula::And(a, b) => {
            write_formula(f, a, PREC_AND)?;
            f.write_str(" /\\ ")?;
            write_formula(f, b, PREC_AND + 1)
        }
        Formula::Box(a) => write_unary(f, "box", a),
        Formula::BlackDiamond(a) => write_unary(f, "bdiam", a),
    }
}

fn write_unary(f: &mut fmt::Formatter<'_>, op: &str, arg: &Formula) -> fmt::Result {
    f.write_str(op)?;
    if precedence(arg) < PREC_UNARY {
        f.write_str("(")?;
        write_formula(f, arg, 0)?;
        f.write_str(")")
    } else {
        f.write_str(" ")?;
        write_formula(f, arg, PREC_UNARY)
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_formula(f, self, 0)
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <= {}", self.lhs, self.rhs)
    }
}

impl fmt::Display for QuasiInequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, ineq) in self.antecedents.iter().enumerate() {
            if k > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "{ineq}")?;
        }
        if !self.antecedents.is_empty() {
            f.write_str(" ")?;
        }
        write!(f, "=> {}", self.conclusion)
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("parse error at byte {position}: found {found}, expected one of: {}", expected.join(", "))]
pub struct ParseError {
    pub position: usize,
    pub found: String,
    pub expected: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Token {
    Top,
    Bot,
    Box,
    BlackDiamond,
    Ident(String),
    Imp,
    And,
    Or,
    Leq,
    LParen,
    RParen,
    End,
}

impl Token {
    fn describe(&self) -> String {
        match self {
            Token::Top => "`T`".into(),
            Token::Bot => "`F`".into(),
            Token::Box => "`box`".into(),
            Token::BlackDiamond => "`bdiam`".into(),
            Token::Ident(s) => format!("identifier `{s}`"),
            Token::Imp => "`->`".into(),
            Token::And => "`/\\`".into(),
            Token::Or => "`\\/`".into(),
            Token::Leq => "`<=`".into(),
            Token::LParen => "`(`".into(),
            Token::RParen => "`)`".into(),
            Token::End => "end of input".into(),
        }
    }
}

fn tokenize(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let mut out = Vec::new();
    let mut chars: Peekable<CharIndices<'_>> = text.char_indices().peekable();
    let err = |position: usize, found: String, expected: &[&str]| ParseError {
        position,
        found,
        expected: expected.iter().map(|s| s.to_string()).collect(),
    };
    while let Some(&(pos, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let two = |chars: &mut Peekable<CharIndices<'_>>, second: char, expected: &str| {
            chars.next();
            match chars.next() {
                Some((_, d)) if d == second => Ok(()),
                Some((p, d)) => Err(err(p, format!("`{d}`"), &[expected])),
                None => Err(err(text.len(), "end of input".into(), &[expected])),
            }
        };
        let tok = match c {
            '(' => {
                chars.next();
                Token::LParen
            }
            ')' => {
                chars.next();
                Token::RParen
            }
            '-' => {
                two(&mut chars, '>', "`->`")?;
                Token::Imp
            }
            '<' => {
                two(&mut chars, '=', "`<=`")?;
                Token::Leq
            }
            '/' => {
                two(&mut chars, '\\', "`/\\`")?;
                Token::And
            }
            '\\' => {
                two(&mut chars, '/', "`\\/`")?;
                Token::Or
            }
            c if c.is_ascii_alphabetic() => {
                let mut word = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() {
                        word.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                match word.as_str() {
                    "T" => Token::Top,
                    "F" => Token::Bot,
                    "box" => Token::Box,
                    "bdiam" => Token::BlackDiamond,
                    w if w.starts_with(|c: char| c.is_ascii_lowercase()) => Token::Ident(word),
                    _ => {
                        return Err(err(
                            pos,
                            format!("`{word}`"),
                            &["propositional variable", "nominal", "conominal", "`T`", "`F`"],
                        ))
                    }
                }
            }
            other => {
                return Err(err(
                    pos,
                    format!("`{other}`"),
                    &["formula", "`->`", "`/\\`", "`\\/`", "`<=`", "`(`", "`)`"],
                ))
            }
        };
        out.push((pos, tok));
    }
    out.push((text.len(), Token::End));
    Ok(out)
}

fn indexed(name: &str, prefix: char) -> bool {
    let mut chars = name.chars();
    chars.next() == Some(prefix) && {
        let rest = chars.as_str();
        !rest.is_empty() && rest.chars().all(|c| c.is_ascii_digit())
    }
}

fn classify_ident(name: &str) -> Formula {
    if indexed(name, 'i') {
        Formula::Nom(name.to_string())
    } else if indexed(name, 'm') {
        Formula::CoNom(name.to_string())
    } else {
        Formula::Prop(name.to_string())
    }
}

struct Parser {
    tokens: Vec<(usize, Token)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos].1
    }

    fn bump(&mut self) -> Token {
        let tok = self.tokens[self.pos].1.clone();
        if self.pos + 1 < self.tokens.len() {
            self.pos += 1;
        }
        tok
    }

    fn error(&self, expected: &[&str]) -> ParseError {
        let (position, tok) = &self.tokens[self.pos];
        ParseError {
            position: *position,
            found: tok.describe(),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn form(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.or()?;
        if *self.peek() == Token::Imp {
            self.bump();
            let rhs = self.form()?;
            Ok(Formula::imp(lhs, rhs))
        } else {
            Ok(lhs)
        }
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.and()?;
        while *self.peek() == Token::Or {
            self.bump();
            acc = Formula::or(acc, self.and()?);
        }
        Ok(acc)
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut acc = self.unary()?;
        while *self.peek() == Token::And {
            self.bump();
            acc = Formula::and(acc, self.unary()?);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Token::Box => {
                self.bump();
                Ok(Formula::boxed(self.unary()?))
            }
            Token::BlackDiamond => {
                self.bump();
                Ok(Formula::bdiam(self.unary()?))
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula, ParseError> {
        const ATOM: &[&str] = &["`T`", "`F`", "identifier", "`box`", "`bdiam`", "`(`"];
        match self.peek().clone() {
            Token::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Token::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Token::Ident(name) => {
                self.bump();
                Ok(classify_ident(&name))
            }
            Token::LParen => {
                self.bump();
                let inner = self.form()?;
                if *self.peek() != Token::RParen {
                    return Err(self.error(&["`)`", "`->`", "`/\\`", "`\\/`"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(ATOM)),
        }
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        if *self.peek() == Token::End {
            Ok(())
        } else {
            Err(self.error(&["end of input", "`->`", "`/\\`", "`\\/`"]))
        }
    }
}

pub fn parse_formula(text: &str) -> Result<Formula, ParseError> {
    let mut parser = Parser { tokens: tokenize(text)?, pos: 0 };
    let phi = parser.form()?;
    parser.expect_end()?;
    Ok(phi)
}

pub fn parse_inequality(text: &str) -> Result<Inequality, ParseError> {
    let mut parser = Parser { tokens: tokenize(text)?, pos: 0 };
    let lhs = parser.form()?;
    if *parser.peek() != Token::Leq {
        return Err(parser.error(&["`<=`", "`->`", "`/\\`", "`\\/`"]));
    }
    parser.bump();
    let rhs = parser.form()?;
    parser.expect_end()?;
    Ok(Inequality::new(lhs, rhs))
}
