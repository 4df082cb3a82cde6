//! State transition graphs, fixed points and fair convergence.
//!
//! Nodes are configurations identified by their binary-word index, the first
//! automaton being the most significant bit.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::VarName;
use crate::limits;
use crate::network::{Configuration, Module, Update};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StgMode {
    /// One edge per node, all automata updated at once.
    Parallel,
    /// One edge per automaton per node, self-loops included.
    Asynchronous,
    /// One edge per listed update per node.
    Custom(Vec<Update>),
}

impl StgMode {
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "parallel" => Ok(StgMode::Parallel),
            "async" | "asynchronous" => Ok(StgMode::Asynchronous),
            other => Err(Error::parse(1, 1, format!("unknown mode `{other}` (expected parallel or async)"))),
        }
    }

    fn updates(&self, automata: &[VarName]) -> Vec<Update> {
        match self {
            StgMode::Parallel => vec![Update::new(automata.iter().cloned())],
            StgMode::Asynchronous => automata.iter().map(|a| Update::new([a.clone()])).collect(),
            StgMode::Custom(list) => list.clone(),
        }
    }
}

impl fmt::Display for StgMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StgMode::Parallel => f.write_str("parallel"),
            StgMode::Asynchronous => f.write_str("async"),
            StgMode::Custom(list) => {
                let items: Vec<String> = list.iter().map(Update::to_string).collect();
                f.write_str(&items.join(";"))
            }
        }
    }
}

/// Converts between packed kernel bits (automaton `k` at bit `k`) and word
/// indices (automaton `0` most significant).
fn flip(bits: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        bits.reverse_bits() >> (64 - n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: u64,
    pub to: u64,
    /// Position in [`TransitionGraph::labels`].
    pub label: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionGraph {
    automata: Vec<VarName>,
    mode: StgMode,
    labels: Vec<Update>,
    nodes: Vec<u64>,
    edges: Vec<Edge>,
}

impl TransitionGraph {
    pub fn automata(&self) -> &[VarName] {
        &self.automata
    }

    pub fn mode(&self) -> &StgMode {
        &self.mode
    }

    pub fn labels(&self) -> &[Update] {
        &self.labels
    }

    /// Word indices in increasing order.
    pub fn nodes(&self) -> &[u64] {
        &self.nodes
    }

    /// Grouped by source in node order, then by label.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn configuration(&self, index: u64) -> Configuration {
        Configuration::from_index(&self.automata, index)
    }

    pub fn successors(&self, index: u64) -> Vec<u64> {
        self.edges.iter().filter(|e| e.from == index).map(|e| e.to).collect()
    }

    pub fn word(&self, index: u64) -> String {
        self.configuration(index).word()
    }

    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph stg {\n  node [shape=box];\n");
        for &n in &self.nodes {
            out.push_str(&format!("  \"{}\";\n", self.word(n)));
        }
        for e in &self.edges {
            out.push_str(&format!(
                "  \"{}\" -> \"{}\" [label=\"{}\"];\n",
                self.word(e.from),
                self.word(e.to),
                self.labels[e.label]
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn closed(f: &Module) -> Result<()> {
    if f.is_ban() {
        Ok(())
    } else {
        Err(Error::InvalidModule("state transition graphs need a network without inputs".into()))
    }
}

/// Builds the whole graph, or the part reachable from `seeds`.
pub fn build_stg(f: &Module, mode: &StgMode, seeds: Option<&[Configuration]>) -> Result<TransitionGraph> {
    build_stg_capped(f, mode, seeds, limits::max_bits())
}

fn build_stg_capped(f: &Module, mode: &StgMode, seeds: Option<&[Configuration]>, cap: usize) -> Result<TransitionGraph> {
    closed(f)?;
    let automata = f.automata();
    let n = automata.len();
    limits::check_bits(n, cap, "state transition graph")?;
    let labels = mode.updates(&automata);
    let masks: Vec<u64> = labels
        .iter()
        .map(|u| {
            u.iter().try_fold(0u64, |acc, v| {
                f.automaton_position(v.as_str())
                    .map(|k| acc | 1 << k)
                    .ok_or_else(|| Error::SupportMismatch(format!("update member `{v}` is not an automaton")))
            })
        })
        .collect::<Result<_>>()?;
    let kernel = f.kernel();
    let step = |index: u64| -> Vec<u64> {
        let bits = flip(index, n);
        masks.iter().map(|&m| flip(kernel.step_bits(bits, m), n)).collect()
    };

    let nodes: Vec<u64> = match seeds {
        None => (0..1u64 << n).collect(),
        Some(seeds) => {
            let mut seen = BTreeSet::new();
            let mut queue = VecDeque::new();
            for s in seeds {
                let idx = Configuration::new(automata.clone(), s.aligned_to(&automata)?)?.index();
                if seen.insert(idx) {
                    queue.push_back(idx);
                }
            }
            while let Some(x) = queue.pop_front() {
                for y in step(x) {
                    if seen.insert(y) {
                        queue.push_back(y);
                    }
                }
            }
            seen.into_iter().collect()
        }
    };
    let edges = nodes
        .par_iter()
        .flat_map_iter(|&x| {
            step(x)
                .into_iter()
                .enumerate()
                .map(move |(label, to)| Edge { from: x, to, label })
        })
        .collect();
    Ok(TransitionGraph {
        automata,
        mode: mode.clone(),
        labels,
        nodes,
        edges,
    })
}

/// Configurations left unchanged by the full parallel update.
pub fn fixed_points(f: &Module) -> Result<Vec<Configuration>> {
    closed(f)?;
    let automata = f.automata();
    let n = automata.len();
    limits::check_bits(n, limits::max_bits(), "fixed-point enumeration")?;
    let kernel = f.kernel();
    let all = if n == 0 { 0 } else { u64::MAX >> (64 - n) };
    let mut points: Vec<u64> = (0..1u64 << n)
        .into_par_iter()
        .filter(|&x| {
            let bits = flip(x, n);
            kernel.step_bits(bits, all) == bits
        })
        .collect();
    points.sort_unstable();
    Ok(points.into_iter().map(|x| Configuration::from_index(&automata, x)).collect())
}

/// Conjunction of `name=bit` conditions; the empty conjunction holds
/// everywhere.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Predicate {
    conditions: BTreeMap<VarName, bool>,
}

impl Predicate {
    pub fn always() -> Self {
        Predicate::default()
    }

    pub fn new(conditions: BTreeMap<VarName, bool>) -> Self {
        Predicate { conditions }
    }

    /// Parses `a=1,d=1`; `all` or an empty string holds everywhere.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "all" {
            return Ok(Predicate::always());
        }
        let mut conditions = BTreeMap::new();
        for item in text.split(',').map(str::trim) {
            let (v, b) = item
                .split_once('=')
                .ok_or_else(|| Error::parse(1, 1, format!("condition `{item}` is not `name=bit`")))?;
            let bit = match b.trim() {
                "0" => false,
                "1" => true,
                other => return Err(Error::parse(1, 1, format!("`{other}` is not a bit"))),
            };
            let v = VarName::new(v.trim())?;
            if conditions.insert(v.clone(), bit).is_some_and(|prev| prev != bit) {
                return Err(Error::parse(1, 1, format!("contradictory conditions on `{v}`")));
            }
        }
        Ok(Predicate { conditions })
    }

    pub fn conditions(&self) -> &BTreeMap<VarName, bool> {
        &self.conditions
    }

    pub fn holds(&self, x: &Configuration) -> bool {
        self.conditions.iter().all(|(v, b)| x.get(v.as_str()) == Some(*b))
    }
}

impl fmt::Display for Predicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conditions.is_empty() {
            return f.write_str("all");
        }
        let items: Vec<String> = self
            .conditions
            .iter()
            .map(|(v, b)| format!("{v}={}", u8::from(*b)))
            .collect();
        f.write_str(&items.join(","))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FairReport {
    pub converges: bool,
    pub seeds: usize,
    pub reachable: usize,
    pub terminal_components: usize,
    /// Fixed points reachable from the trap, in word order.
    pub fixed_points: Vec<Configuration>,
    /// A terminal component with more than one configuration, if any.
    pub cycle: Option<Vec<Configuration>>,
}

/// Every fair asynchronous run entering the trap ends in a fixed point iff
/// every terminal strongly connected component of the asynchronous graph
/// reachable from the trap is a single configuration.
pub fn check_fair_convergence(f: &Module, trap: &Predicate) -> Result<FairReport> {
    closed(f)?;
    let automata = f.automata();
    if let Some(v) = trap.conditions().keys().find(|v| !f.has_automaton(v.as_str())) {
        return Err(Error::SupportMismatch(format!("trap condition on unknown automaton `{v}`")));
    }
    limits::check_bits(automata.len(), limits::stg_bits(), "fair-convergence analysis")?;
    let seeds: Vec<Configuration> = (0..1u64 << automata.len())
        .map(|x| Configuration::from_index(&automata, x))
        .filter(|x| trap.holds(x))
        .collect();
    let stg = build_stg_capped(f, &StgMode::Asynchronous, Some(&seeds), limits::stg_bits())?;

    let mut graph: DiGraph<u64, ()> = DiGraph::with_capacity(stg.nodes().len(), stg.edges().len());
    let position: BTreeMap<u64, NodeIndex> = stg.nodes().iter().map(|&x| (x, graph.add_node(x))).collect();
    for e in stg.edges() {
        if e.from != e.to {
            graph.add_edge(position[&e.from], position[&e.to], ());
        }
    }
    let sccs = tarjan_scc(&graph);
    let mut component = vec![0usize; graph.node_count()];
    for (c, members) in sccs.iter().enumerate() {
        for n in members {
            component[n.index()] = c;
        }
    }
    let mut terminal = vec![true; sccs.len()];
    for edge in graph.raw_edges() {
        let (a, b) = (component[edge.source().index()], component[edge.target().index()]);
        if a != b {
            terminal[a] = false;
        }
    }
    let mut fixed = Vec::new();
    let mut cycle: Option<Vec<u64>> = None;
    for (members, _) in sccs.iter().zip(&terminal).filter(|(_, t)| **t) {
        let mut words: Vec<u64> = members.iter().map(|n| graph[*n]).collect();
        words.sort_unstable();
        if words.len() == 1 {
            fixed.push(words[0]);
        } else if cycle.as_ref().is_none_or(|best| words[0] < best[0]) {
            cycle = Some(words);
        }
    }
    fixed.sort_unstable();
    Ok(FairReport {
        converges: cycle.is_none(),
        seeds: seeds.len(),
        reachable: stg.nodes().len(),
        terminal_components: terminal.iter().filter(|t| **t).count(),
        fixed_points: fixed.into_iter().map(|x| stg.configuration(x)).collect(),
        cycle: cycle.map(|words| words.into_iter().map(|x| stg.configuration(x)).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{name, parse_expr};

    fn ban(fs: &[(&str, &str)]) -> Module {
        Module::ban(fs.iter().map(|(a, f)| (name(a), parse_expr(f).unwrap())).collect()).unwrap()
    }

    #[test]
    fn negation_parallel_cycle() {
        let f = ban(&[("a", "!a")]);
        let g = build_stg(&f, &StgMode::Parallel, None).unwrap();
        assert_eq!(g.successors(0), vec![1]);
        assert_eq!(g.successors(1), vec![0]);
        assert!(fixed_points(&f).unwrap().is_empty());
        let report = check_fair_convergence(&f, &Predicate::always()).unwrap();
        assert!(!report.converges);
        assert_eq!(report.cycle.unwrap().len(), 2);
    }

    #[test]
    fn identity_network_self_loops() {
        let f = ban(&[("a", "a"), ("b", "b")]);
        let g = build_stg(&f, &StgMode::Asynchronous, None).unwrap();
        assert_eq!(g.edges().len(), 8);
        assert!(g.edges().iter().all(|e| e.from == e.to));
        assert_eq!(fixed_points(&f).unwrap().len(), 4);
        assert!(check_fair_convergence(&f, &Predicate::always()).unwrap().converges);
    }

    #[test]
    fn constant_network_fixed_point() {
        let f = ban(&[("a", "1")]);
        let points: Vec<String> = fixed_points(&f).unwrap().iter().map(Configuration::word).collect();
        assert_eq!(points, ["1"]);
    }

    #[test]
    fn word_order_is_msb_first() {
        let f = ban(&[("a", "1"), ("b", "0")]);
        let g = build_stg(&f, &StgMode::Parallel, None).unwrap();
        // 00 -> 10
        assert_eq!(g.successors(0), vec![2]);
        assert!(g.to_dot().contains("\"00\" -> \"10\""));
    }

    #[test]
    fn seeded_reachability() {
        let f = ban(&[("a", "a | b"), ("b", "b")]);
        let seed = Configuration::from_word(&f.automata(), "01").unwrap();
        let g = build_stg(&f, &StgMode::Asynchronous, Some(&[seed])).unwrap();
        assert_eq!(g.nodes(), &[1, 3]);
    }

    #[test]
    fn predicates() {
        let p = Predicate::parse("a=1,d=1").unwrap();
        assert_eq!(p.to_string(), "a=1,d=1");
        assert!(Predicate::parse("a=2").is_err());
        assert!(Predicate::parse("a=1,a=0").is_err());
        assert!(Predicate::parse("all").unwrap().conditions().is_empty());
    }
}
