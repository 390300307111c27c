//! File formats: edge-list graphs, JSON systems, families and nested sets,
//! and DOT rendering of a nested set.
//!
//! Every writer is a deterministic function of its input, so saving a loaded
//! file that was itself written here reproduces it byte for byte.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::orientation::{Family, Orientation};
use crate::sepsys::{RawSystem, SepId, SeparationSystem};
use crate::tree::{Certificate, NestedSet, Round};

/// Parses the edge-list format: the vertex count on the first line, then one
/// `u v` pair per line. Blank lines and `#` comments are ignored.
pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content.split_whitespace().collect();
        let number = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::Parse {
                line,
                msg: format!("expected a non-negative integer, found {s:?}"),
            })
        };
        match (n, fields.as_slice()) {
            (None, [count]) => n = Some(number(count)?),
            (None, _) => {
                return Err(Error::Parse {
                    line,
                    msg: "expected the vertex count alone on the first line".into(),
                })
            }
            (Some(count), [u, v]) => {
                let (u, v) = (number(u)?, number(v)?);
                if u >= count || v >= count {
                    return Err(Error::Parse {
                        line,
                        msg: format!("vertex out of range 0..{count} in edge {u} {v}"),
                    });
                }
                if u == v {
                    return Err(Error::Parse {
                        line,
                        msg: format!("self-loop at vertex {u}"),
                    });
                }
                edges.push((u, v));
            }
            (Some(_), _) => {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected an edge \"u v\", found {content:?}"),
                })
            }
        }
    }
    let n = n.ok_or(Error::Parse {
        line: 1,
        msg: "missing vertex count".into(),
    })?;
    Graph::new(n, &edges)
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&fs::read_to_string(path)?)
}

/// Renders a graph back in the edge-list format.
pub fn format_graph(g: &Graph) -> String {
    let mut out = format!("{}\n", g.vertex_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

fn from_json<T: DeserializeOwned>(text: &str) -> Result<T> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| Error::Schema {
        path: e.path().to_string(),
        msg: e.inner().to_string(),
    })
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("serializable value");
    text.push('\n');
    text
}

/// Parses and fully validates a system.
pub fn parse_system(text: &str) -> Result<SeparationSystem> {
    let raw: RawSystem = from_json(text)?;
    SeparationSystem::from_raw(&raw)
}

pub fn format_system(sys: &SeparationSystem) -> String {
    to_json(&sys.to_raw())
}

pub fn load_system(path: &Path) -> Result<SeparationSystem> {
    parse_system(&fs::read_to_string(path)?)
}

pub fn save_system(path: &Path, sys: &SeparationSystem) -> Result<()> {
    Ok(fs::write(path, format_system(sys))?)
}

/// One listed orientation; the flags are informational and ignored on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientationEntry {
    pub bits: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub consistent: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyFile {
    pub m: usize,
    pub orientations: Vec<OrientationEntry>,
}

impl FamilyFile {
    pub fn from_family(fam: &Family, m: usize) -> Self {
        FamilyFile {
            m,
            orientations: fam
                .members()
                .iter()
                .map(|o| OrientationEntry {
                    bits: o.to_string(),
                    consistent: None,
                    profile: None,
                })
                .collect(),
        }
    }
}

/// Parses a family of `sys`; members must be consistent and distinct.
pub fn parse_family(text: &str, sys: &SeparationSystem) -> Result<Family> {
    let file: FamilyFile = from_json(text)?;
    if file.m != sys.separation_count() {
        return Err(Error::Schema {
            path: "m".into(),
            msg: format!("family is for {} separations, system has {}", file.m, sys.separation_count()),
        });
    }
    let members = file
        .orientations
        .iter()
        .enumerate()
        .map(|(i, entry)| {
            entry.bits.parse::<Orientation>().map_err(|msg| Error::Schema {
                path: format!("orientations[{i}].bits"),
                msg,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Family::new(sys, members)
}

pub fn format_family(fam: &Family, sys: &SeparationSystem) -> String {
    to_json(&FamilyFile::from_family(fam, sys.separation_count()))
}

pub fn load_family(path: &Path, sys: &SeparationSystem) -> Result<Family> {
    parse_family(&fs::read_to_string(path)?, sys)
}

pub fn save_family(path: &Path, fam: &Family, sys: &SeparationSystem) -> Result<()> {
    Ok(fs::write(path, format_family(fam, sys))?)
}

/// On-disk form of a nested set: `N` as canonical ids, certificates as
/// `[first, second, separation]`, and the per-round trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NestedSetFile {
    #[serde(rename = "N")]
    pub n: Vec<SepId>,
    pub certificates: Vec<[usize; 3]>,
    pub rounds: Vec<Round>,
}

impl From<&NestedSet> for NestedSetFile {
    fn from(n: &NestedSet) -> Self {
        NestedSetFile {
            n: n.separations.clone(),
            certificates: n
                .certificates
                .iter()
                .map(|c| [c.first, c.second, c.separation])
                .collect(),
            rounds: n.rounds.clone(),
        }
    }
}

impl From<NestedSetFile> for NestedSet {
    fn from(file: NestedSetFile) -> Self {
        NestedSet {
            separations: file.n,
            certificates: file
                .certificates
                .iter()
                .map(|&[first, second, separation]| Certificate {
                    first,
                    second,
                    separation,
                })
                .collect(),
            rounds: file.rounds,
        }
    }
}

pub fn format_nested_set(n: &NestedSet) -> String {
    to_json(&NestedSetFile::from(n))
}

pub fn parse_nested_set(text: &str) -> Result<NestedSet> {
    from_json::<NestedSetFile>(text).map(NestedSet::from)
}

pub fn save_nested_set(path: &Path, n: &NestedSet) -> Result<()> {
    Ok(fs::write(path, format_nested_set(n))?)
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// DOT drawing of the tree induced by a nested set. Nodes are the consistent
/// orientations of `N`; a node is labelled with the family member that
/// induces it, and neighbouring nodes differ on one separation, which labels
/// the edge.
pub fn emit_dot(sys: &SeparationSystem, fam: &Family, n: &NestedSet) -> String {
    let seps = &n.separations;
    let mut nodes: Vec<Vec<SepId>> = Vec::new();
    let mut current = Vec::with_capacity(seps.len());
    consistent_orientations(sys, seps, &mut current, &mut nodes);

    let mut out = String::from("graph tree_set {\n  node [shape=box];\n");
    for (i, node) in nodes.iter().enumerate() {
        let members: Vec<String> = (0..fam.len())
            .filter(|&p| node.iter().all(|&x| fam.contains(p, x)))
            .map(|p| format!("P{p}"))
            .collect();
        let _ = writeln!(out, "  v{i} [label=\"{}\"];", members.join(", "));
    }
    for i in 0..nodes.len() {
        for j in i + 1..nodes.len() {
            let differing: Vec<usize> = (0..seps.len()).filter(|&k| nodes[i][k] != nodes[j][k]).collect();
            if let [k] = differing[..] {
                let _ = writeln!(
                    out,
                    "  v{i} -- v{j} [label=\"{}\"];",
                    dot_escape(&sys.display_name(seps[k]))
                );
            }
        }
    }
    out.push_str("}\n");
    out
}

fn consistent_orientations(sys: &SeparationSystem, seps: &[SepId], current: &mut Vec<SepId>, out: &mut Vec<Vec<SepId>>) {
    if current.len() == seps.len() {
        out.push(current.clone());
        return;
    }
    let s = seps[current.len()];
    // inverse orientation first so that lower-id orientations sort later
    for x in [sys.inv(s), s] {
        let clash = current
            .iter()
            .any(|&y| sys.leq(sys.inv(x), y) || sys.leq(sys.inv(y), x));
        if !clash {
            current.push(x);
            consistent_orientations(sys, seps, current, out);
            current.pop();
        }
    }
}
