//! JSON files describing simulation schemes and global encodings, and file
//! loading helpers.
//!
//! ```json
//! {
//!   "target": "target.ban",
//!   "parts": { "a": { "module": "a.ban", "one": "!r_a", "zero": "r_a", "delta": "{u_a_1};{r_a}" } },
//!   "comm": { "b->a": { "U": ["r_b"], "one": "!r_b", "zero": "r_b" } },
//!   "interfaces": { "b->a": { "e_b_a_1": "r_b" } }
//! }
//! ```
//!
//! Paths are relative to the scheme file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::expr::{parse_expr, VarName};
use crate::format::{parse_ban, parse_sban, parse_update_mode, write_ban};
use crate::network::Module;
use crate::simulation::{Channel, Encoding, GlobalEncoding, LocalSimulator, SimulationScheme};

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
    }
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Loads a `.ban` module, or a `.sban` signed network.
pub fn load_module(path: &Path) -> Result<Module> {
    let text = read_text(path)?;
    let parsed = if path.extension().is_some_and(|e| e == "sban") {
        parse_sban(&text).and_then(|n| n.to_module())
    } else {
        parse_ban(&text)
    };
    parsed.map_err(|e| match e {
        Error::Parse { line, column, message } => Error::Parse {
            line,
            column,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartEntry {
    pub module: String,
    pub one: String,
    pub zero: String,
    pub delta: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommEntry {
    #[serde(rename = "U")]
    pub u: Vec<String>,
    pub one: String,
    pub zero: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeFile {
    pub target: String,
    pub parts: BTreeMap<String, PartEntry>,
    #[serde(default)]
    pub comm: BTreeMap<String, CommEntry>,
    #[serde(default)]
    pub interfaces: BTreeMap<String, BTreeMap<String, String>>,
}

fn json_error(path: &Path, e: serde_json::Error) -> Error {
    Error::Parse {
        line: e.line(),
        column: e.column(),
        message: format!("{}: {e}", path.display()),
    }
}

fn pair_key(key: &str) -> Result<(VarName, VarName)> {
    let (a, b) = key
        .split_once("->")
        .ok_or_else(|| Error::InvalidScheme(format!("channel key `{key}` is not `a->b`")))?;
    Ok((VarName::new(a.trim())?, VarName::new(b.trim())?))
}

impl SchemeFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| json_error(Path::new("<scheme>"), e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        serde_json::from_str(&read_text(path)?).map_err(|e| json_error(path, e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serialises") + "\n"
    }

    /// Loads the referenced modules and validates the scheme.
    pub fn resolve(&self, base: &Path) -> Result<SimulationScheme> {
        let target = load_module(&base.join(&self.target))?;
        let mut parts = Vec::new();
        for (a, entry) in &self.parts {
            let module = load_module(&base.join(&entry.module))?;
            let encoding = Encoding::inferred(parse_expr(&entry.one)?, parse_expr(&entry.zero)?)
                .map_err(|e| Error::InvalidEncoding(format!("φ_{a}: {e}")))?;
            let mode = parse_update_mode(&entry.delta, &module.automata())?;
            parts.push((VarName::new(a.as_str())?, LocalSimulator { module, encoding, mode }));
        }
        if let Some(key) = self.interfaces.keys().find(|k| !self.comm.contains_key(*k)) {
            return Err(Error::InvalidScheme(format!("interface `{key}` has no comm entry")));
        }
        let mut channels = Vec::new();
        for (key, entry) in &self.comm {
            let (from, to) = pair_key(key)?;
            let u = entry.u.iter().map(|v| VarName::new(v.as_str())).collect::<Result<Vec<_>>>()?;
            let encoding = Encoding::new(u, parse_expr(&entry.one)?, parse_expr(&entry.zero)?)
                .map_err(|e| Error::InvalidEncoding(format!("channel {key}: {e}")))?;
            let interface = self
                .interfaces
                .get(key)
                .into_iter()
                .flatten()
                .map(|(e, s)| Ok((VarName::new(e.as_str())?, VarName::new(s.as_str())?)))
                .collect::<Result<BTreeMap<_, _>>>()?;
            channels.push(Channel { from, to, encoding, interface });
        }
        SimulationScheme::new(target, parts, channels)
    }

    /// Describes `scheme` with the given target file and part files named
    /// `part_<a>.ban`.
    pub fn describe(scheme: &SimulationScheme, target_file: &str) -> Self {
        let parts = scheme
            .parts()
            .iter()
            .map(|(a, sim)| {
                (
                    a.to_string(),
                    PartEntry {
                        module: format!("part_{a}.ban"),
                        one: sim.encoding.one().to_string(),
                        zero: sim.encoding.zero().to_string(),
                        delta: sim.mode.to_string(),
                    },
                )
            })
            .collect();
        let key = |c: &Channel| format!("{}->{}", c.from, c.to);
        let comm = scheme
            .channels()
            .iter()
            .map(|c| {
                (
                    key(c),
                    CommEntry {
                        u: c.exposed().iter().map(ToString::to_string).collect(),
                        one: c.encoding.one().to_string(),
                        zero: c.encoding.zero().to_string(),
                    },
                )
            })
            .collect();
        let interfaces = scheme
            .channels()
            .iter()
            .map(|c| {
                let map = c.interface.iter().map(|(e, s)| (e.to_string(), s.to_string())).collect();
                (key(c), map)
            })
            .collect();
        SchemeFile {
            target: target_file.to_string(),
            parts,
            comm,
            interfaces,
        }
    }
}

/// Writes `scheme.json`, the target and every part module into `dir`.
/// Returns the path of the scheme file.
pub fn write_scheme_dir(scheme: &SimulationScheme, dir: &Path) -> Result<PathBuf> {
    let file = SchemeFile::describe(scheme, "target.ban");
    write_text(&dir.join("target.ban"), &write_ban(scheme.target()))?;
    for (a, sim) in scheme.parts() {
        write_text(&dir.join(format!("part_{a}.ban")), &write_ban(&sim.module))?;
    }
    let path = dir.join("scheme.json");
    write_text(&path, &file.to_json())?;
    Ok(path)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiEntry {
    pub one: String,
    pub zero: String,
}

/// `{"components": {"a": {"one": …, "zero": …}}}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhiFile {
    pub components: BTreeMap<String, PhiEntry>,
}

impl PhiFile {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| json_error(Path::new("<encoding>"), e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        serde_json::from_str(&read_text(path)?).map_err(|e| json_error(path, e))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serialises") + "\n"
    }

    /// Global encoding over the automata of `source`.
    pub fn resolve(&self, source: &Module) -> Result<GlobalEncoding> {
        let components = self
            .components
            .iter()
            .map(|(a, entry)| {
                let enc = Encoding::inferred(parse_expr(&entry.one)?, parse_expr(&entry.zero)?)
                    .map_err(|e| Error::InvalidEncoding(format!("component {a}: {e}")))?;
                Ok((VarName::new(a.as_str())?, enc))
            })
            .collect::<Result<Vec<_>>>()?;
        GlobalEncoding::new(source.automata(), components)
    }

    pub fn describe(phi: &GlobalEncoding) -> Self {
        PhiFile {
            components: phi
                .components()
                .iter()
                .map(|(a, enc)| {
                    (
                        a.to_string(),
                        PhiEntry {
                            one: enc.one().to_string(),
                            zero: enc.zero().to_string(),
                        },
                    )
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{name, parse_expr};
    use crate::transforms::to_clause_network;

    #[test]
    fn scheme_directory_round_trip() {
        let f = Module::ban(vec![
            (name("a"), parse_expr("!b").unwrap()),
            (name("b"), parse_expr("a | b").unwrap()),
        ])
        .unwrap();
        let t = to_clause_network(&f).unwrap();
        let dir = std::env::temp_dir().join(format!("ban-scheme-{}", std::process::id()));
        let path = write_scheme_dir(&t.scheme, &dir).unwrap();
        let file = SchemeFile::load(&path).unwrap();
        assert_eq!(SchemeFile::parse(&file.to_json()).unwrap(), file);
        let back = file.resolve(&dir).unwrap();
        assert_eq!(back, t.scheme);
        fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn malformed_scheme_files() {
        assert!(matches!(SchemeFile::parse("{\"target\": 1}"), Err(Error::Parse { .. })));
        assert!(SchemeFile::parse("{\"target\": \"t.ban\", \"parts\": {}, \"extra\": 0}").is_err());
        assert!(pair_key("ab").is_err());
    }
}
