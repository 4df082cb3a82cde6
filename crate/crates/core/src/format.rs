//! Text formats: `.ban` modules, `.sban` signed networks, update modes and
//! configurations.
//!
//! A `.ban` file holds one module, one automaton per line:
//!
//! ```text
//! # Example
//! node a inputs(a1, a2, a3) : b | a1 | a2 | a3
//! node c inputs(c1) : !c1
//! ```
//!
//! A `.sban` file lists the signed in-edges of each automaton; its function
//! is the disjunction of the corresponding literals, `0` when the list is
//! empty:
//!
//! ```text
//! node h : +c -e
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::expr::{parse_expr_at, BoolExpr, VarName};
use crate::network::{Configuration, Module, NodeDef, Update, UpdateMode};

/// Strips a trailing `#` comment and returns the meaningful text.
fn content(line: &str) -> &str {
    line.split_once('#').map_or(line, |(head, _)| head)
}

struct Cursor<'a> {
    text: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn column(&self) -> usize {
        self.text[..self.pos].chars().count() + 1
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::parse(self.line, self.column(), msg)
    }

    fn skip_ws(&mut self) {
        let rest = &self.text[self.pos..];
        self.pos += rest.len() - rest.trim_start().len();
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<()> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    fn ident(&mut self) -> Result<VarName> {
        self.skip_ws();
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
            .unwrap_or(self.rest().len());
        let word = &self.rest()[..len];
        let name = VarName::new(word).map_err(|_| self.error(format!("expected a name, found `{word}`")))?;
        self.pos += len;
        Ok(name)
    }

    /// `node` followed by whitespace.
    fn keyword_node(&mut self) -> Result<()> {
        self.skip_ws();
        let rest = self.rest();
        let ok = rest.starts_with("node") && rest[4..].starts_with(|c: char| c.is_whitespace());
        if !ok {
            return Err(self.error("expected `node`"));
        }
        self.pos += 4;
        Ok(())
    }
}

pub fn parse_ban(text: &str) -> Result<Module> {
    let mut nodes = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = content(raw);
        if line.trim().is_empty() {
            continue;
        }
        let mut c = Cursor { text: line, pos: 0, line: k + 1 };
        c.keyword_node()?;
        let name = c.ident()?;
        let mut inputs = Vec::new();
        c.skip_ws();
        if c.rest().starts_with("inputs") {
            c.pos += "inputs".len();
            c.expect("(")?;
            if !c.eat(")") {
                loop {
                    inputs.push(c.ident()?);
                    if c.eat(")") {
                        break;
                    }
                    c.expect(",")?;
                }
            }
        }
        c.expect(":")?;
        c.skip_ws();
        let column = c.column();
        let function = parse_expr_at(c.rest(), k + 1, column)?;
        nodes.push(NodeDef::new(name, inputs, function));
    }
    Module::new(nodes)
}

pub fn write_ban(m: &Module) -> String {
    let mut out = String::new();
    for n in m.nodes() {
        out.push_str("node ");
        out.push_str(n.name.as_str());
        if !n.inputs.is_empty() {
            let inputs: Vec<&str> = n.inputs.iter().map(VarName::as_str).collect();
            let _ = write!(out, " inputs({})", inputs.join(", "));
        }
        let _ = writeln!(out, " : {}", n.function);
    }
    out
}

/// Network given by signed in-edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedNetwork {
    /// Automaton and its in-edges `(source, positive)`, in file order.
    pub nodes: Vec<(VarName, Vec<(VarName, bool)>)>,
}

impl SignedNetwork {
    /// Each automaton gets the clause with one literal per in-edge.
    pub fn to_module(&self) -> Result<Module> {
        Module::ban(
            self.nodes
                .iter()
                .map(|(a, edges)| {
                    let f = BoolExpr::any(edges.iter().map(|(s, pos)| BoolExpr::literal(s.clone(), *pos)));
                    (a.clone(), f)
                })
                .collect(),
        )
    }

    /// Reads the signed edges back from a network whose functions are clauses.
    pub fn from_module(m: &Module) -> Result<Self> {
        if !m.is_ban() {
            return Err(Error::InvalidModule("signed networks have no inputs".into()));
        }
        let nodes = m
            .nodes()
            .iter()
            .map(|n| {
                let mut edges = Vec::new();
                literals(&n.function, &mut edges).ok_or_else(|| {
                    Error::InvalidModule(format!("function of `{}` is not a disjunction of literals", n.name))
                })?;
                Ok((n.name.clone(), edges))
            })
            .collect::<Result<_>>()?;
        Ok(SignedNetwork { nodes })
    }
}

fn literals(e: &BoolExpr, out: &mut Vec<(VarName, bool)>) -> Option<()> {
    match e {
        BoolExpr::Const(false) => Some(()),
        BoolExpr::Var(v) => {
            out.push((v.clone(), true));
            Some(())
        }
        BoolExpr::Not(inner) => match inner.as_ref() {
            BoolExpr::Var(v) => {
                out.push((v.clone(), false));
                Some(())
            }
            _ => None,
        },
        BoolExpr::Or(l, r) => {
            literals(l, out)?;
            literals(r, out)
        }
        _ => None,
    }
}

pub fn parse_sban(text: &str) -> Result<SignedNetwork> {
    let mut nodes: Vec<(VarName, Vec<(VarName, bool)>)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = content(raw);
        if line.trim().is_empty() {
            continue;
        }
        let mut c = Cursor { text: line, pos: 0, line: k + 1 };
        c.keyword_node()?;
        let name = c.ident()?;
        c.expect(":")?;
        let mut edges = Vec::new();
        let mut sources = BTreeSet::new();
        loop {
            c.skip_ws();
            if c.rest().is_empty() {
                break;
            }
            let positive = if c.eat("+") {
                true
            } else if c.eat("-") {
                false
            } else {
                return Err(c.error("expected `+` or `-` before an edge source"));
            };
            let at = c.column();
            let source = c.ident()?;
            if !sources.insert(source.clone()) {
                return Err(Error::parse(k + 1, at, format!("edge from `{source}` listed twice")));
            }
            edges.push((source, positive));
        }
        nodes.push((name, edges));
    }
    let net = SignedNetwork { nodes };
    net.to_module()?;
    Ok(net)
}

pub fn write_sban(net: &SignedNetwork) -> String {
    let mut out = String::new();
    for (a, edges) in &net.nodes {
        let _ = write!(out, "node {a} :");
        for (s, positive) in edges {
            let _ = write!(out, " {}{s}", if *positive { '+' } else { '-' });
        }
        out.push('\n');
    }
    out
}

/// Parses `{a,b}` or `a,b`; `{}` is the empty update.
pub fn parse_update(text: &str) -> Result<Update> {
    let t = text.trim();
    let inner = match (t.strip_prefix('{'), t.ends_with('}')) {
        (Some(rest), true) => &rest[..rest.len() - 1],
        (None, false) => t,
        _ => return Err(Error::parse(1, 1, format!("unbalanced braces in update `{t}`"))),
    };
    inner
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(VarName::new)
        .collect::<Result<BTreeSet<_>>>()
        .map(Update::new)
}

/// Parses `{a,b};{c}`, `parallel` (one step over `automata`) or `seq:a,b,c`.
/// The empty string is the empty mode.
pub fn parse_update_mode(text: &str, automata: &[VarName]) -> Result<UpdateMode> {
    let t = text.trim();
    if t == "parallel" {
        return Ok(UpdateMode::parallel(automata));
    }
    if let Some(list) = t.strip_prefix("seq:") {
        let order = list
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(VarName::new)
            .collect::<Result<Vec<_>>>()?;
        return Ok(UpdateMode::sequential(&order));
    }
    if t.is_empty() {
        return Ok(UpdateMode::default());
    }
    let steps = t
        .split(';')
        .map(|step| {
            let step = step.trim();
            if !(step.starts_with('{') && step.ends_with('}')) {
                return Err(Error::parse(1, 1, format!("update `{step}` must be written `{{a,b}}`")));
            }
            parse_update(step)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(UpdateMode::new(steps))
}

/// Parses a binary word in support order or a `name=bit` list covering the
/// support. Mixing the two forms is rejected.
pub fn parse_configuration(text: &str, support: &[VarName]) -> Result<Configuration> {
    let t = text.trim();
    if !t.contains('=') {
        return Configuration::from_word(support, t);
    }
    let mut pairs = BTreeMap::new();
    for item in t.split(',').map(str::trim) {
        let (v, b) = item.split_once('=').ok_or_else(|| {
            Error::parse(1, 1, format!("`{item}`: binary words and name=bit lists cannot be mixed"))
        })?;
        let bit = match b.trim() {
            "0" => false,
            "1" => true,
            other => return Err(Error::parse(1, 1, format!("`{other}` is not a bit"))),
        };
        let v = VarName::new(v.trim())?;
        if pairs.insert(v.clone(), bit).is_some() {
            return Err(Error::parse(1, 1, format!("`{v}` assigned twice")));
        }
    }
    Configuration::from_pairs(support, &pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::names;

    const EXAMPLE_ONE: &str = "\
# three automata, six inputs
node a inputs(a1, a2, a3) : b | a1 | a2 | a3
node b inputs(b1, b2) : !b | c | !b1 & b2   # trailing comment
node c inputs(c1) : !c1
";

    #[test]
    fn ban_round_trip() {
        let m = parse_ban(EXAMPLE_ONE).unwrap();
        assert_eq!(m.automata(), names(["a", "b", "c"]));
        assert_eq!(m.inputs(), &names(["a1", "a2", "a3", "b1", "b2", "c1"])[..]);
        let printed = write_ban(&m);
        assert_eq!(parse_ban(&printed).unwrap(), m);
        assert_eq!(write_ban(&parse_ban(&printed).unwrap()), printed);
    }

    #[test]
    fn ban_errors_carry_positions() {
        match parse_ban("node a : b |\n") {
            Err(Error::Parse { line: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_ban("node a : a\nnode b inputs(x : a") {
            Err(Error::Parse { line: 2, .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_ban("nod a : 1") {
            Err(Error::Parse { line: 1, column: 1, .. }) => {}
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            parse_ban("node a inputs(e) : e\nnode b inputs(e) : e"),
            Err(Error::InvalidModule(_))
        ));
    }

    #[test]
    fn sban_expansion() {
        let net = parse_sban("node h : +c -e\nnode c :\nnode e : +e\n").unwrap();
        let m = net.to_module().unwrap();
        assert_eq!(m.function("h").unwrap().to_string(), "c | !e");
        assert_eq!(m.function("c").unwrap(), &BoolExpr::Const(false));
        assert_eq!(parse_sban(&write_sban(&net)).unwrap(), net);
        assert_eq!(SignedNetwork::from_module(&m).unwrap(), net);
        assert!(parse_sban("node h : c").is_err());
        assert!(parse_sban("node h : +c +c\nnode c :").is_err());
        assert!(parse_sban("node h : +z").is_err());
    }

    #[test]
    fn update_modes() {
        let s = names(["a", "b", "c"]);
        let m = parse_update_mode("{a,b};{c}", &s).unwrap();
        assert_eq!(m.to_string(), "{a,b};{c}");
        assert_eq!(parse_update_mode("parallel", &s).unwrap(), UpdateMode::parallel(&s));
        assert_eq!(parse_update_mode("seq:c,a", &s).unwrap().to_string(), "{c};{a}");
        assert_eq!(parse_update_mode("{};{a}", &s).unwrap().step(1), Update::empty());
        assert!(parse_update_mode("a,b", &s).is_err());
        assert_eq!(parse_update("{a,b}").unwrap(), Update::new(names(["b", "a"])));
    }

    #[test]
    fn configurations() {
        let s = names(["a", "b", "c"]);
        assert_eq!(parse_configuration("101", &s).unwrap().word(), "101");
        assert_eq!(parse_configuration("c=1,a=1,b=0", &s).unwrap().word(), "101");
        assert!(parse_configuration("10,c=1", &s).is_err());
        assert!(parse_configuration("a=1,b=0", &s).is_err());
        assert!(parse_configuration("a=1,b=0,c=1,d=0", &s).is_err());
        assert_eq!(parse_configuration("", &[]).unwrap(), Configuration::empty());
    }
}
