//! Boolean expressions over named variables.
//!
//! [`BoolExpr`] is the concrete representation of every local function. The
//! textual grammar is
//!
//! ```text
//! expr   := term ('|' term)*
//! term   := factor ('&' factor)*
//! factor := '!' factor | '(' expr ')' | ident | '0' | '1'
//! ```
//!
//! with `&` binding tighter than `|`. Both binary operators associate to the
//! left, and [`Display`](fmt::Display) prints the minimum parentheses needed
//! for `parse_expr(&e.to_string()) == e` to hold exactly.
//!
//! Semantic predicates ([`is_monotone`], [`to_cnf`], support computation) go
//! through a bit-sliced [`TruthTable`], which evaluates 64 assignments per
//! pass.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::limits;

/// Identifier of an automaton or an input.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct VarName(String);

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

impl VarName {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if is_identifier(&name) {
            Ok(VarName(name))
        } else {
            Err(Error::InvalidName(name))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for VarName {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for VarName {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

impl FromStr for VarName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        VarName::new(s)
    }
}

impl TryFrom<String> for VarName {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        VarName::new(s)
    }
}

impl TryFrom<&str> for VarName {
    type Error = Error;
    fn try_from(s: &str) -> Result<Self> {
        VarName::new(s)
    }
}

impl From<VarName> for String {
    fn from(v: VarName) -> String {
        v.0
    }
}

/// Shorthand for building names in code that already knows they are valid.
///
/// Panics on an invalid identifier.
pub fn name(s: &str) -> VarName {
    VarName::new(s).unwrap_or_else(|e| panic!("{e}"))
}

pub fn names<'a>(items: impl IntoIterator<Item = &'a str>) -> Vec<VarName> {
    items.into_iter().map(name).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BoolExpr {
    Const(bool),
    Var(VarName),
    Not(Box<BoolExpr>),
    And(Box<BoolExpr>, Box<BoolExpr>),
    Or(Box<BoolExpr>, Box<BoolExpr>),
}

impl BoolExpr {
    pub fn var(v: impl Into<VarNameArg>) -> Self {
        BoolExpr::Var(v.into().0)
    }

    pub fn negate(e: BoolExpr) -> Self {
        BoolExpr::Not(Box::new(e))
    }

    pub fn and(l: BoolExpr, r: BoolExpr) -> Self {
        BoolExpr::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: BoolExpr, r: BoolExpr) -> Self {
        BoolExpr::Or(Box::new(l), Box::new(r))
    }

    /// Left-nested conjunction; the empty conjunction is `1`.
    pub fn all(items: impl IntoIterator<Item = BoolExpr>) -> Self {
        items
            .into_iter()
            .reduce(BoolExpr::and)
            .unwrap_or(BoolExpr::Const(true))
    }

    /// Left-nested disjunction; the empty disjunction is `0`.
    pub fn any(items: impl IntoIterator<Item = BoolExpr>) -> Self {
        items
            .into_iter()
            .reduce(BoolExpr::or)
            .unwrap_or(BoolExpr::Const(false))
    }

    pub fn literal(v: VarName, positive: bool) -> Self {
        if positive {
            BoolExpr::Var(v)
        } else {
            BoolExpr::negate(BoolExpr::Var(v))
        }
    }

    pub fn vars(&self) -> BTreeSet<VarName> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<VarName>) {
        match self {
            BoolExpr::Const(_) => {}
            BoolExpr::Var(v) => {
                out.insert(v.clone());
            }
            BoolExpr::Not(e) => e.collect_vars(out),
            BoolExpr::And(l, r) | BoolExpr::Or(l, r) => {
                l.collect_vars(out);
                r.collect_vars(out);
            }
        }
    }

    pub fn mentions(&self, v: &str) -> bool {
        match self {
            BoolExpr::Const(_) => false,
            BoolExpr::Var(x) => x.as_str() == v,
            BoolExpr::Not(e) => e.mentions(v),
            BoolExpr::And(l, r) | BoolExpr::Or(l, r) => l.mentions(v) || r.mentions(v),
        }
    }

    /// Evaluates with a total assignment given as a lookup function.
    pub fn eval_with(&self, lookup: &impl Fn(&VarName) -> Option<bool>) -> Result<bool> {
        Ok(match self {
            BoolExpr::Const(b) => *b,
            BoolExpr::Var(v) => lookup(v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?,
            BoolExpr::Not(e) => !e.eval_with(lookup)?,
            BoolExpr::And(l, r) => l.eval_with(lookup)? & r.eval_with(lookup)?,
            BoolExpr::Or(l, r) => l.eval_with(lookup)? | r.eval_with(lookup)?,
        })
    }

    pub fn eval(&self, env: &BTreeMap<VarName, bool>) -> Result<bool> {
        self.eval_with(&|v: &VarName| env.get(v).copied())
    }

    /// Replaces variables for which `map` returns an expression.
    pub fn substitute(&self, map: &impl Fn(&VarName) -> Option<BoolExpr>) -> BoolExpr {
        match self {
            BoolExpr::Const(b) => BoolExpr::Const(*b),
            BoolExpr::Var(v) => map(v).unwrap_or_else(|| BoolExpr::Var(v.clone())),
            BoolExpr::Not(e) => BoolExpr::negate(e.substitute(map)),
            BoolExpr::And(l, r) => BoolExpr::and(l.substitute(map), r.substitute(map)),
            BoolExpr::Or(l, r) => BoolExpr::or(l.substitute(map), r.substitute(map)),
        }
    }

    pub fn rename(&self, map: &BTreeMap<VarName, VarName>) -> BoolExpr {
        self.substitute(&|v: &VarName| map.get(v).map(|w| BoolExpr::Var(w.clone())))
    }

    /// Negation normal form: `Not` only directly above a variable, constants
    /// under negation folded.
    pub fn nnf(&self) -> BoolExpr {
        self.nnf_signed(true)
    }

    fn nnf_signed(&self, positive: bool) -> BoolExpr {
        match self {
            BoolExpr::Const(b) => BoolExpr::Const(*b == positive),
            BoolExpr::Var(v) => BoolExpr::literal(v.clone(), positive),
            BoolExpr::Not(e) => e.nnf_signed(!positive),
            BoolExpr::And(l, r) if positive => BoolExpr::and(l.nnf_signed(true), r.nnf_signed(true)),
            BoolExpr::And(l, r) => BoolExpr::or(l.nnf_signed(false), r.nnf_signed(false)),
            BoolExpr::Or(l, r) if positive => BoolExpr::or(l.nnf_signed(true), r.nnf_signed(true)),
            BoolExpr::Or(l, r) => BoolExpr::and(l.nnf_signed(false), r.nnf_signed(false)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            BoolExpr::Const(_) | BoolExpr::Var(_) => 1,
            BoolExpr::Not(e) => 1 + e.size(),
            BoolExpr::And(l, r) | BoolExpr::Or(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Variables that semantically influence the function, in sorted order.
    pub fn support(&self) -> Result<Vec<VarName>> {
        let vars: Vec<VarName> = self.vars().into_iter().collect();
        let table = TruthTable::of(self, &vars)?;
        Ok(vars
            .iter()
            .enumerate()
            .filter(|(i, _)| table.depends_on(*i))
            .map(|(_, v)| v.clone())
            .collect())
    }

    pub(crate) fn compile(&self, slot: &impl Fn(&VarName) -> Option<usize>) -> Result<Compiled> {
        Ok(match self {
            BoolExpr::Const(b) => Compiled::Const(*b),
            BoolExpr::Var(v) => {
                Compiled::Var(slot(v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?)
            }
            BoolExpr::Not(e) => Compiled::Not(Box::new(e.compile(slot)?)),
            BoolExpr::And(l, r) => Compiled::And(Box::new(l.compile(slot)?), Box::new(r.compile(slot)?)),
            BoolExpr::Or(l, r) => Compiled::Or(Box::new(l.compile(slot)?), Box::new(r.compile(slot)?)),
        })
    }
}

/// Argument wrapper so `BoolExpr::var` accepts both `&str` and [`VarName`].
pub struct VarNameArg(VarName);

impl From<VarName> for VarNameArg {
    fn from(v: VarName) -> Self {
        VarNameArg(v)
    }
}

impl From<&VarName> for VarNameArg {
    fn from(v: &VarName) -> Self {
        VarNameArg(v.clone())
    }
}

impl From<&str> for VarNameArg {
    fn from(s: &str) -> Self {
        VarNameArg(name(s))
    }
}

impl ops::Not for BoolExpr {
    type Output = BoolExpr;
    fn not(self) -> BoolExpr {
        BoolExpr::negate(self)
    }
}

impl ops::BitAnd for BoolExpr {
    type Output = BoolExpr;
    fn bitand(self, rhs: BoolExpr) -> BoolExpr {
        BoolExpr::and(self, rhs)
    }
}

impl ops::BitOr for BoolExpr {
    type Output = BoolExpr;
    fn bitor(self, rhs: BoolExpr) -> BoolExpr {
        BoolExpr::or(self, rhs)
    }
}

const PREC_OR: u8 = 1;
const PREC_AND: u8 = 2;
const PREC_ATOM: u8 = 3;

impl BoolExpr {
    fn write_prec(&self, f: &mut fmt::Formatter<'_>, ctx: u8) -> fmt::Result {
        match self {
            BoolExpr::Const(b) => write!(f, "{}", u8::from(*b)),
            BoolExpr::Var(v) => write!(f, "{v}"),
            BoolExpr::Not(e) => {
                f.write_str("!")?;
                e.write_prec(f, PREC_ATOM)
            }
            BoolExpr::And(l, r) => {
                let paren = ctx > PREC_AND;
                if paren {
                    f.write_str("(")?;
                }
                l.write_prec(f, PREC_AND)?;
                f.write_str(" & ")?;
                r.write_prec(f, PREC_ATOM)?;
                if paren {
                    f.write_str(")")?;
                }
                Ok(())
            }
            BoolExpr::Or(l, r) => {
                let paren = ctx > PREC_OR;
                if paren {
                    f.write_str("(")?;
                }
                l.write_prec(f, PREC_OR)?;
                f.write_str(" | ")?;
                r.write_prec(f, PREC_AND)?;
                if paren {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for BoolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_prec(f, PREC_OR)
    }
}

impl FromStr for BoolExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_expr(s)
    }
}

impl Serialize for BoolExpr {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BoolExpr {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let text = String::deserialize(d)?;
        parse_expr(&text).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Bit(bool),
    Not,
    And,
    Or,
    LParen,
    RParen,
    End,
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::CharIndices<'a>>,
    line: usize,
    col: usize,
}

impl<'a> Lexer<'a> {
    fn tokens(text: &'a str, line: usize, col: usize) -> Result<Vec<(Tok, usize, usize)>> {
        let mut lx = Lexer {
            chars: text.char_indices().peekable(),
            line,
            col,
        };
        let mut out = Vec::new();
        loop {
            let tok = lx.next_token()?;
            let done = tok.0 == Tok::End;
            out.push(tok);
            if done {
                return Ok(out);
            }
        }
    }

    fn bump(&mut self) -> Option<char> {
        let (_, c) = self.chars.next()?;
        if c == '\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn next_token(&mut self) -> Result<(Tok, usize, usize)> {
        while let Some(&(_, c)) = self.chars.peek() {
            if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
        let (line, col) = (self.line, self.col);
        let Some(&(_, c)) = self.chars.peek() else {
            return Ok((Tok::End, line, col));
        };
        let tok = match c {
            '!' => {
                self.bump();
                Tok::Not
            }
            '&' => {
                self.bump();
                Tok::And
            }
            '|' => {
                self.bump();
                Tok::Or
            }
            '(' => {
                self.bump();
                Tok::LParen
            }
            ')' => {
                self.bump();
                Tok::RParen
            }
            '0' | '1' => {
                self.bump();
                if let Some(&(_, n)) = self.chars.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' {
                        return Err(Error::parse(line, col, "constants are the single digits `0` and `1`"));
                    }
                }
                Tok::Bit(c == '1')
            }
            c if c.is_ascii_alphabetic() => {
                let mut ident = String::new();
                while let Some(&(_, n)) = self.chars.peek() {
                    if n.is_ascii_alphanumeric() || n == '_' {
                        ident.push(n);
                        self.bump();
                    } else {
                        break;
                    }
                }
                Tok::Ident(ident)
            }
            other => return Err(Error::parse(line, col, format!("unexpected character `{other}`"))),
        };
        Ok((tok, line, col))
    }
}

struct Parser {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn here(&self) -> (usize, usize) {
        let (_, l, c) = &self.toks[self.pos];
        (*l, *c)
    }

    fn advance(&mut self) -> Tok {
        let t = self.toks[self.pos].0.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        let (l, c) = self.here();
        Error::parse(l, c, msg)
    }

    fn expr(&mut self) -> Result<BoolExpr> {
        let mut lhs = self.term()?;
        while *self.peek() == Tok::Or {
            self.advance();
            let rhs = self.term()?;
            lhs = BoolExpr::or(lhs, rhs);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<BoolExpr> {
        let mut lhs = self.factor()?;
        while *self.peek() == Tok::And {
            self.advance();
            let rhs = self.factor()?;
            lhs = BoolExpr::and(lhs, rhs);
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<BoolExpr> {
        match self.peek().clone() {
            Tok::Not => {
                self.advance();
                Ok(BoolExpr::negate(self.factor()?))
            }
            Tok::LParen => {
                self.advance();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error("expected `)`"));
                }
                self.advance();
                Ok(inner)
            }
            Tok::Ident(s) => {
                self.advance();
                Ok(BoolExpr::Var(VarName(s)))
            }
            Tok::Bit(b) => {
                self.advance();
                Ok(BoolExpr::Const(b))
            }
            Tok::End => Err(self.error("unexpected end of expression")),
            other => Err(self.error(format!("unexpected token {other:?}"))),
        }
    }
}

pub fn parse_expr(text: &str) -> Result<BoolExpr> {
    parse_expr_at(text, 1, 1)
}

/// Parses an expression embedded in a larger text, reporting positions
/// relative to `(line, column)`.
pub fn parse_expr_at(text: &str, line: usize, column: usize) -> Result<BoolExpr> {
    let toks = Lexer::tokens(text, line, column)?;
    let mut p = Parser { toks, pos: 0 };
    let e = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error("trailing input after expression"));
    }
    Ok(e)
}

// ---------------------------------------------------------------------------
// Compiled evaluation

/// Expression with variables resolved to slot indices.
#[derive(Clone, Debug)]
pub(crate) enum Compiled {
    Const(bool),
    Var(usize),
    Not(Box<Compiled>),
    And(Box<Compiled>, Box<Compiled>),
    Or(Box<Compiled>, Box<Compiled>),
}

impl Compiled {
    pub(crate) fn eval(&self, vals: &[bool]) -> bool {
        match self {
            Compiled::Const(b) => *b,
            Compiled::Var(i) => vals[*i],
            Compiled::Not(e) => !e.eval(vals),
            Compiled::And(l, r) => l.eval(vals) && r.eval(vals),
            Compiled::Or(l, r) => l.eval(vals) || r.eval(vals),
        }
    }

    /// Evaluates on a configuration packed into bits (slot `i` is bit `i`).
    pub(crate) fn eval_bits(&self, bits: u64) -> bool {
        match self {
            Compiled::Const(b) => *b,
            Compiled::Var(i) => bits >> i & 1 == 1,
            Compiled::Not(e) => !e.eval_bits(bits),
            Compiled::And(l, r) => l.eval_bits(bits) && r.eval_bits(bits),
            Compiled::Or(l, r) => l.eval_bits(bits) || r.eval_bits(bits),
        }
    }

    fn eval_word(&self, columns: &[u64]) -> u64 {
        match self {
            Compiled::Const(b) => {
                if *b {
                    u64::MAX
                } else {
                    0
                }
            }
            Compiled::Var(i) => columns[*i],
            Compiled::Not(e) => !e.eval_word(columns),
            Compiled::And(l, r) => l.eval_word(columns) & r.eval_word(columns),
            Compiled::Or(l, r) => l.eval_word(columns) | r.eval_word(columns),
        }
    }
}

// ---------------------------------------------------------------------------
// Truth tables

const LOW_PATTERNS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

/// Full truth table of a function over an ordered variable list.
///
/// Point `p` assigns bit `i` of `p` to `vars[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruthTable {
    vars: Vec<VarName>,
    words: Vec<u64>,
}

impl TruthTable {
    pub fn of(expr: &BoolExpr, vars: &[VarName]) -> Result<Self> {
        Self::check_width(vars.len())?;
        let compiled = expr.compile(&|v: &VarName| vars.iter().position(|w| w == v))?;
        let n = vars.len();
        let nwords = Self::word_count(n);
        let mut columns = vec![0u64; n];
        let mut words = Vec::with_capacity(nwords);
        for w in 0..nwords {
            for (i, col) in columns.iter_mut().enumerate() {
                *col = if i < 6 {
                    LOW_PATTERNS[i]
                } else if (w >> (i - 6)) & 1 == 1 {
                    u64::MAX
                } else {
                    0
                };
            }
            words.push(compiled.eval_word(&columns));
        }
        let mut t = TruthTable { vars: vars.to_vec(), words };
        t.mask_tail();
        Ok(t)
    }

    pub fn from_fn(vars: &[VarName], f: impl Fn(u64) -> bool) -> Result<Self> {
        Self::check_width(vars.len())?;
        let n = vars.len();
        let mut words = vec![0u64; Self::word_count(n)];
        for p in 0..(1u64 << n) {
            if f(p) {
                words[(p >> 6) as usize] |= 1 << (p & 63);
            }
        }
        Ok(TruthTable { vars: vars.to_vec(), words })
    }

    fn check_width(n: usize) -> Result<()> {
        let cap = limits::max_bits();
        if n > cap {
            Err(Error::TooManyVariables { count: n, cap })
        } else {
            Ok(())
        }
    }

    fn word_count(n: usize) -> usize {
        if n <= 6 {
            1
        } else {
            1 << (n - 6)
        }
    }

    fn mask_tail(&mut self) {
        let n = self.vars.len();
        if n < 6 {
            self.words[0] &= (1u64 << (1 << n)) - 1;
        }
    }

    pub fn vars(&self) -> &[VarName] {
        &self.vars
    }

    pub fn len(&self) -> u64 {
        1 << self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn get(&self, point: u64) -> bool {
        self.words[(point >> 6) as usize] >> (point & 63) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn constant(&self) -> Option<bool> {
        match self.count_ones() {
            0 => Some(false),
            c if c == self.len() => Some(true),
            _ => None,
        }
    }

    /// Whether flipping variable `i` changes the value at some point.
    pub fn depends_on(&self, i: usize) -> bool {
        if i < 6 {
            let shift = 1u32 << i;
            let low = !LOW_PATTERNS[i];
            self.words
                .iter()
                .any(|&w| ((w ^ (w >> shift)) & low & self.valid_mask()) != 0)
        } else {
            let stride = 1usize << (i - 6);
            (0..self.words.len())
                .filter(|w| w & stride == 0)
                .any(|w| self.words[w] != self.words[w + stride])
        }
    }

    fn valid_mask(&self) -> u64 {
        let n = self.vars.len();
        if n < 6 {
            (1u64 << (1 << n)) - 1
        } else {
            u64::MAX
        }
    }

    /// Order-preserving check: raising any single variable never lowers the
    /// value. Covering pairs suffice for the pointwise order.
    pub fn is_monotone(&self) -> bool {
        (0..self.vars.len()).all(|i| {
            if i < 6 {
                let shift = 1u32 << i;
                let low = !LOW_PATTERNS[i] & self.valid_mask();
                self.words.iter().all(|&w| (w & !(w >> shift)) & low == 0)
            } else {
                let stride = 1usize << (i - 6);
                (0..self.words.len())
                    .filter(|w| w & stride == 0)
                    .all(|w| self.words[w] & !self.words[w + stride] == 0)
            }
        })
    }

    pub fn assignment(&self, point: u64) -> BTreeMap<VarName, bool> {
        self.vars
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), point >> i & 1 == 1))
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Clauses and CNF

/// Disjunction of literals, each variable with one polarity.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    literals: BTreeMap<VarName, bool>,
}

impl Clause {
    pub fn new(literals: impl IntoIterator<Item = (VarName, bool)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (v, pol) in literals {
            if let Some(prev) = map.insert(v.clone(), pol) {
                if prev != pol {
                    return Err(Error::ConflictingLiteral(v.to_string()));
                }
            }
        }
        Ok(Clause { literals: map })
    }

    pub fn literals(&self) -> impl Iterator<Item = (&VarName, bool)> {
        self.literals.iter().map(|(v, p)| (v, *p))
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn polarity(&self, v: &str) -> Option<bool> {
        self.literals.get(v).copied()
    }

    /// `self` subsumes `other` when every literal of `self` occurs in `other`.
    pub fn subsumes(&self, other: &Clause) -> bool {
        self.literals
            .iter()
            .all(|(v, p)| other.literals.get(v) == Some(p))
    }

    pub fn to_expr(&self) -> BoolExpr {
        BoolExpr::any(self.literals.iter().map(|(v, p)| BoolExpr::literal(v.clone(), *p)))
    }

    pub fn eval(&self, env: &BTreeMap<VarName, bool>) -> Result<bool> {
        for (v, p) in &self.literals {
            let val = env.get(v).ok_or_else(|| Error::UnboundVariable(v.to_string()))?;
            if *val == *p {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (v, p)) in self.literals.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{}{v}", if *p { '+' } else { '-' })?;
        }
        f.write_str("}")
    }
}

/// Clause decomposition over the expression's own variables.
///
/// Walks the falsifying points in index order; every point not yet excluded
/// by an earlier clause contributes its maxterm, shrunk literal by literal
/// (in variable order) while it stays an implicate. The resulting clauses
/// are prime implicates, so the final subsumption pass only guards the
/// invariant. `Const(1)` (or any tautology) yields no clauses; a constant-0
/// function is rejected.
pub fn to_cnf(expr: &BoolExpr) -> Result<Vec<Clause>> {
    let vars: Vec<VarName> = expr.vars().into_iter().collect();
    let table = TruthTable::of(expr, &vars)?;
    match table.constant() {
        Some(true) => return Ok(Vec::new()),
        Some(false) => return Err(Error::ConstantFunction),
        None => {}
    }
    let n = vars.len();
    let mut covered = vec![false; 1usize << n];
    let mut cubes: Vec<(u64, u64)> = Vec::new();

    for point in 0..(1u64 << n) {
        if table.get(point) || covered[point as usize] {
            continue;
        }
        // Clause as a cube of falsifying points: `fixed` marks the literal
        // variables, whose falsifying values are read from `point`.
        let mut fixed: u64 = (1u64 << n) - 1;
        for i in 0..n {
            let candidate = fixed & !(1u64 << i);
            if cube_all_false(&table, point, candidate, n) {
                fixed = candidate;
            }
        }
        for_each_in_cube(point, fixed, n, |q| covered[q as usize] = true);
        cubes.push((point & fixed, fixed));
    }

    let mut clauses: Vec<Clause> = cubes
        .into_iter()
        .map(|(point, fixed)| Clause {
            literals: (0..n)
                .filter(|i| fixed >> i & 1 == 1)
                .map(|i| (vars[i].clone(), point >> i & 1 == 0))
                .collect(),
        })
        .collect();
    absorb_subsumed(&mut clauses);
    Ok(clauses)
}

fn cube_all_false(table: &TruthTable, point: u64, fixed: u64, n: usize) -> bool {
    let free: Vec<usize> = (0..n).filter(|i| fixed >> i & 1 == 0).collect();
    let base = point & fixed;
    (0..(1u64 << free.len())).all(|k| {
        let mut q = base;
        for (j, &i) in free.iter().enumerate() {
            q |= (k >> j & 1) << i;
        }
        !table.get(q)
    })
}

fn for_each_in_cube(point: u64, fixed: u64, n: usize, mut f: impl FnMut(u64)) {
    let free: Vec<usize> = (0..n).filter(|i| fixed >> i & 1 == 0).collect();
    let base = point & fixed;
    for k in 0..(1u64 << free.len()) {
        let mut q = base;
        for (j, &i) in free.iter().enumerate() {
            q |= (k >> j & 1) << i;
        }
        f(q);
    }
}

fn absorb_subsumed(clauses: &mut Vec<Clause>) {
    let keep: Vec<bool> = (0..clauses.len())
        .map(|i| {
            !(0..clauses.len()).any(|j| {
                j != i && clauses[j].subsumes(&clauses[i]) && (clauses[j] != clauses[i] || j < i)
            })
        })
        .collect();
    let mut k = 0;
    clauses.retain(|_| {
        k += 1;
        keep[k - 1]
    });
}

/// Syntactic clause test: a disjunction (nested `Or`, flattened) of
/// variables and directly negated variables. A bare `0` is the empty clause.
pub fn is_clause(expr: &BoolExpr) -> bool {
    fn disjunct(e: &BoolExpr) -> bool {
        match e {
            BoolExpr::Var(_) => true,
            BoolExpr::Not(inner) => matches!(**inner, BoolExpr::Var(_)),
            BoolExpr::Or(l, r) => disjunct(l) && disjunct(r),
            _ => false,
        }
    }
    matches!(expr, BoolExpr::Const(false)) || disjunct(expr)
}

/// Exhaustive monotonicity check over the expression's variables.
pub fn is_monotone(expr: &BoolExpr) -> Result<bool> {
    let vars: Vec<VarName> = expr.vars().into_iter().collect();
    Ok(TruthTable::of(expr, &vars)?.is_monotone())
}

/// Exhaustive equivalence over the union of both variable sets.
pub fn equivalent(a: &BoolExpr, b: &BoolExpr) -> Result<bool> {
    let mut vars = a.vars();
    vars.extend(b.vars());
    let vars: Vec<VarName> = vars.into_iter().collect();
    Ok(TruthTable::of(a, &vars)? == TruthTable::of(b, &vars)?)
}
