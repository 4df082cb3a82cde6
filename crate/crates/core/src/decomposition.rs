//! Partition of a module into sub-modules and recomposition.
//!
//! In the sub-module of part `p`, every automaton `q` outside `p` that a local
//! function reads becomes a fresh input named `q__p`. When several automata
//! of `p` read `q`, each gets its own input `q__p__s` so that the input
//! declaration stays a partition. Clashing names get a `_k` suffix and
//! never-read outside automata produce no input. The recompose wiring maps
//! every fresh input back to the automaton it stands for.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{BoolExpr, VarName};
use crate::network::{Module, NodeDef};
use crate::wiring::{union_all, wire_recursive, Wiring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Part {
    pub id: VarName,
    pub members: Vec<VarName>,
}

/// Labelled partition of the automata of a module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<Part>,
}

impl Partition {
    pub fn new(parts: Vec<Part>) -> Result<Self> {
        let mut ids = BTreeSet::new();
        let mut seen = BTreeSet::new();
        for part in &parts {
            if !ids.insert(part.id.clone()) {
                return Err(Error::InvalidPartition(format!("part id `{}` used twice", part.id)));
            }
            if part.members.is_empty() {
                return Err(Error::InvalidPartition(format!("part `{}` is empty", part.id)));
            }
            for s in &part.members {
                if !seen.insert(s.clone()) {
                    return Err(Error::InvalidPartition(format!("`{s}` belongs to two parts")));
                }
            }
        }
        Ok(Partition { parts })
    }

    /// Unlabelled blocks get ids `p0, p1, …`.
    pub fn from_blocks(blocks: Vec<Vec<VarName>>) -> Result<Self> {
        Partition::new(
            blocks
                .into_iter()
                .enumerate()
                .map(|(k, members)| Part {
                    id: VarName::new(format!("p{k}")).expect("valid id"),
                    members,
                })
                .collect(),
        )
    }

    /// Parses `a,d/b/c` or the labelled form `r:a,d/s:b/t:c`.
    pub fn parse(text: &str) -> Result<Self> {
        let blocks: Vec<&str> = text.split('/').map(str::trim).collect();
        let labelled = blocks.iter().filter(|b| b.contains(':')).count();
        if labelled != 0 && labelled != blocks.len() {
            return Err(Error::InvalidPartition("either label every part or none".into()));
        }
        let members = |list: &str| -> Result<Vec<VarName>> {
            list.split(',')
                .map(str::trim)
                .filter(|s| !s.is_empty())
                .map(VarName::new)
                .collect()
        };
        if labelled == 0 {
            return Partition::from_blocks(blocks.iter().map(|b| members(b)).collect::<Result<_>>()?);
        }
        let parts = blocks
            .iter()
            .map(|b| {
                let (id, list) = b.split_once(':').expect("labelled");
                Ok(Part {
                    id: VarName::new(id.trim())?,
                    members: members(list)?,
                })
            })
            .collect::<Result<Vec<Part>>>()?;
        Partition::new(parts)
    }

    /// One part per automaton, labelled by the automaton name.
    pub fn atomic(m: &Module) -> Self {
        Partition {
            parts: m
                .automata()
                .into_iter()
                .map(|s| Part {
                    id: s.clone(),
                    members: vec![s],
                })
                .collect(),
        }
    }

    /// The single-part partition.
    pub fn whole(m: &Module) -> Self {
        Partition {
            parts: vec![Part {
                id: VarName::new("p0").expect("valid id"),
                members: m.automata(),
            }],
        }
    }

    pub fn parts(&self) -> &[Part] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn part_of(&self, s: &str) -> Option<&Part> {
        self.parts.iter().find(|p| p.members.iter().any(|m| m.as_str() == s))
    }

    /// Checks that the blocks cover exactly the automata of `m`.
    pub fn validate(&self, m: &Module) -> Result<()> {
        for part in &self.parts {
            for s in &part.members {
                if !m.has_automaton(s.as_str()) {
                    return Err(Error::InvalidPartition(format!("`{s}` is not an automaton of the module")));
                }
            }
        }
        if let Some(missing) = m.automata().iter().find(|s| self.part_of(s.as_str()).is_none()) {
            return Err(Error::InvalidPartition(format!("`{missing}` belongs to no part")));
        }
        Ok(())
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let blocks: Vec<String> = self
            .parts
            .iter()
            .map(|p| {
                let names: Vec<&str> = p.members.iter().map(VarName::as_str).collect();
                format!("{}:{}", p.id, names.join(","))
            })
            .collect();
        f.write_str(&blocks.join("/"))
    }
}

/// Every set partition of `items` into at most `max_parts` blocks, in
/// restricted-growth order.
pub fn all_partitions(items: &[VarName], max_parts: usize) -> Vec<Partition> {
    fn grow(k: usize, labels: &mut Vec<usize>, n: usize, max_parts: usize, out: &mut Vec<Vec<usize>>) {
        if k == n {
            out.push(labels.clone());
            return;
        }
        let used = labels.iter().copied().max().map_or(0, |m| m + 1);
        for l in 0..=used.min(max_parts.saturating_sub(1)) {
            labels.push(l);
            grow(k + 1, labels, n, max_parts, out);
            labels.pop();
        }
    }
    if items.is_empty() || max_parts == 0 {
        return Vec::new();
    }
    let mut labelings = Vec::new();
    grow(0, &mut Vec::new(), items.len(), max_parts, &mut labelings);
    labelings
        .into_iter()
        .map(|labels| {
            let count = labels.iter().copied().max().unwrap_or(0) + 1;
            let mut blocks = vec![Vec::new(); count];
            for (item, l) in items.iter().zip(labels) {
                blocks[l].push(item.clone());
            }
            Partition::from_blocks(blocks).expect("blocks are disjoint and non-empty")
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubModule {
    pub id: VarName,
    pub module: Module,
}

/// Result of [`split`]: the sub-modules and the wiring that recomposes them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub partition: Partition,
    pub parts: Vec<SubModule>,
    pub wires: Wiring,
}

impl Split {
    pub fn recompose(&self) -> Result<Module> {
        let modules: Vec<Module> = self.parts.iter().map(|p| p.module.clone()).collect();
        recompose(&modules, &self.wires)
    }
}

fn fresh(base: String, taken: &mut BTreeSet<VarName>) -> VarName {
    let mut candidate = base.clone();
    let mut k = 1;
    while taken.contains(candidate.as_str()) {
        candidate = format!("{base}_{k}");
        k += 1;
    }
    let v = VarName::new(candidate).expect("generated names are identifiers");
    taken.insert(v.clone());
    v
}

pub fn split(m: &Module, partition: &Partition) -> Result<Split> {
    partition.validate(m)?;
    let mut taken = m.all_names();
    let mut wires = Wiring::empty();
    let mut parts = Vec::new();
    for part in partition.parts() {
        let inside: BTreeSet<&VarName> = part.members.iter().collect();
        let mut members: Vec<&NodeDef> = part
            .members
            .iter()
            .map(|s| m.node(s.as_str()).expect("validated"))
            .collect();
        members.sort_by_key(|n| m.automaton_position(n.name.as_str()));
        let mut readers: BTreeMap<VarName, usize> = BTreeMap::new();
        for n in &members {
            for v in n.function.vars() {
                if m.has_automaton(v.as_str()) && !inside.contains(&v) {
                    *readers.entry(v).or_default() += 1;
                }
            }
        }
        let mut nodes = Vec::new();
        for n in members {
            let mut inputs = n.inputs.clone();
            let mut renaming: BTreeMap<VarName, VarName> = BTreeMap::new();
            for q in n.function.vars() {
                let Some(&count) = readers.get(&q) else { continue };
                let base = if count == 1 {
                    format!("{q}__{}", part.id)
                } else {
                    format!("{q}__{}__{}", part.id, n.name)
                };
                let input = fresh(base, &mut taken);
                wires.insert(input.clone(), q.clone());
                inputs.push(input.clone());
                renaming.insert(q, input);
            }
            let function = n
                .function
                .substitute(&|v: &VarName| renaming.get(v).map(BoolExpr::var));
            nodes.push(NodeDef::new(n.name.clone(), inputs, function));
        }
        parts.push(SubModule {
            id: part.id.clone(),
            module: Module::new(nodes)?,
        });
    }
    Ok(Split {
        partition: partition.clone(),
        parts,
        wires,
    })
}

/// Unites the parts and wires every fresh input back to its automaton.
pub fn recompose(parts: &[Module], wires: &Wiring) -> Result<Module> {
    let whole = union_all(parts.iter()).map_err(|e| Error::IncompatibleParts(e.to_string()))?;
    wire_recursive(&whole, wires).map_err(|e| Error::IncompatibleParts(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{name, names, parse_expr};
    use crate::wiring::modules_equal;

    fn node(n: &str, inputs: &[&str], f: &str) -> NodeDef {
        NodeDef::new(name(n), names(inputs.iter().copied()), parse_expr(f).unwrap())
    }

    fn example_two() -> Module {
        Module::new(vec![
            node("a", &[], "d"),
            node("b", &[], "a & !b"),
            node("c", &["e"], "e"),
            node("d", &[], "b | c"),
        ])
        .unwrap()
    }

    #[test]
    fn example_two_sub_modules() {
        let m = example_two();
        let s = split(&m, &Partition::parse("r:a,d/s:b/t:c").unwrap()).unwrap();
        let by_id: BTreeMap<&str, &Module> = s.parts.iter().map(|p| (p.id.as_str(), &p.module)).collect();
        let r = by_id["r"];
        assert!(r.declared_inputs("a").unwrap().is_empty());
        assert_eq!(r.declared_inputs("d").unwrap(), &names(["b__r", "c__r"])[..]);
        assert_eq!(by_id["s"].declared_inputs("b").unwrap(), &names(["a__s"])[..]);
        assert_eq!(by_id["t"].declared_inputs("c").unwrap(), &names(["e"])[..]);
        assert_eq!(s.wires.get("b__r"), Some(&name("b")));
        assert!(modules_equal(&s.recompose().unwrap(), &m).unwrap());
    }

    #[test]
    fn singleton_partition_is_identity() {
        let m = example_two();
        let s = split(&m, &Partition::whole(&m)).unwrap();
        assert_eq!(s.parts.len(), 1);
        assert!(s.wires.is_empty());
        assert!(modules_equal(&s.parts[0].module, &m).unwrap());
    }

    #[test]
    fn two_node_split_by_hand() {
        let m = Module::ban(vec![(name("a"), parse_expr("b").unwrap()), (name("b"), parse_expr("a").unwrap())]).unwrap();
        let s = split(&m, &Partition::parse("a/b").unwrap()).unwrap();
        let expect_a = Module::new(vec![node("a", &["b__p0"], "b__p0")]).unwrap();
        let expect_b = Module::new(vec![node("b", &["a__p1"], "a__p1")]).unwrap();
        assert_eq!(s.parts[0].module, expect_a);
        assert_eq!(s.parts[1].module, expect_b);
        assert!(modules_equal(&s.recompose().unwrap(), &m).unwrap());
    }

    #[test]
    fn several_readers_and_collisions() {
        let m = Module::new(vec![
            node("a", &[], "c"),
            node("b", &["c__p0"], "c & c__p0"),
            node("c", &[], "a"),
        ])
        .unwrap();
        let s = split(&m, &Partition::parse("a,b/c").unwrap()).unwrap();
        let p0 = &s.parts[0].module;
        assert_eq!(p0.declared_inputs("a").unwrap(), &names(["c__p0__a"])[..]);
        assert_eq!(p0.declared_inputs("b").unwrap(), &names(["c__p0", "c__p0__b"])[..]);
        assert!(modules_equal(&s.recompose().unwrap(), &m).unwrap());

        let m = Module::new(vec![node("a", &["b__p0"], "b & b__p0"), node("b", &[], "a")]).unwrap();
        let s = split(&m, &Partition::parse("a/b").unwrap()).unwrap();
        assert_eq!(s.parts[0].module.declared_inputs("a").unwrap(), &names(["b__p0", "b__p0_1"])[..]);
        assert!(modules_equal(&s.recompose().unwrap(), &m).unwrap());
    }

    #[test]
    fn invalid_partitions() {
        let m = example_two();
        assert!(Partition::parse("a,b/b,c").is_err());
        assert!(Partition::parse("r:a/b").is_err());
        assert!(matches!(
            split(&m, &Partition::parse("a,b/c").unwrap()),
            Err(Error::InvalidPartition(_))
        ));
        assert!(split(&m, &Partition::parse("a,b/c,d,z").unwrap()).is_err());
    }

    #[test]
    fn partition_enumeration_counts() {
        let s = names(["a", "b", "c", "d", "e"]);
        // Stirling numbers: S(5,1)+S(5,2)+S(5,3) = 1+15+25
        assert_eq!(all_partitions(&s, 3).len(), 41);
        assert_eq!(all_partitions(&s, 5).len(), 52);
        assert_eq!(all_partitions(&s[..1], 3).len(), 1);
    }

    #[test]
    fn display_round_trip() {
        let p = Partition::parse("r:a,d/s:b/t:c").unwrap();
        assert_eq!(Partition::parse(&p.to_string()).unwrap(), p);
    }
}
