//! Patch-set documents: a JSON file holding a list of patches in one basis,
//! plus an optional adjacency list.
//!
//! ```text
//! {
//!   "version": 1,
//!   "basis": "hermite",
//!   "patches": [
//!     {
//!       "id": "a",
//!       "x": [[..4..], [..4..], [..4..], [..4..]],
//!       "y": ...,
//!       "z": ...
//!     }
//!   ],
//!   "adjacency": [
//!     {"a": "a", "side_a": "u1", "b": 1, "side_b": "u0", "reversed": false}
//!   ]
//! }
//! ```
//!
//! With `"basis": "hs-input"` each coordinate is `{"corners": [4], "tangents": [8]}`
//! instead of a 4×4 matrix. Patch references in the adjacency list are either
//! zero-based indices or ids.

use std::fmt::Write as _;

use hspatch::analysis::{Edge, Side};
use hspatch::hs::{CoordInput, HsPatchInput};
use hspatch::{Basis, GeometricPatch, Mat4};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::ParseError;

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DocBasis {
    Geometric(Basis),
    HsInput,
}

impl DocBasis {
    pub fn name(self) -> &'static str {
        match self {
            DocBasis::Geometric(b) => b.name(),
            DocBasis::HsInput => "hs-input",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        if s == "hs-input" {
            Some(DocBasis::HsInput)
        } else {
            s.parse().ok().map(DocBasis::Geometric)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PatchData {
    Geometric(GeometricPatch),
    HsInput(HsPatchInput),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatchEntry {
    pub id: Option<String>,
    pub data: PatchData,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PatchRef {
    Index(usize),
    Id(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SideName {
    U0,
    U1,
    V0,
    V1,
}

impl From<SideName> for Side {
    fn from(s: SideName) -> Side {
        match s {
            SideName::U0 => Side::U0,
            SideName::U1 => Side::U1,
            SideName::V0 => Side::V0,
            SideName::V1 => Side::V1,
        }
    }
}

/// Side `side_a` of patch `a` meets side `side_b` of patch `b`. With
/// `reversed`, the parameter along `side_b` runs from 1 to 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Adjacency {
    pub a: PatchRef,
    pub side_a: SideName,
    pub b: PatchRef,
    pub side_b: SideName,
    #[serde(default)]
    pub reversed: bool,
}

impl Adjacency {
    pub fn edges(&self) -> (Edge, Edge) {
        let eb = if self.reversed {
            Edge::reversed(self.side_b.into())
        } else {
            Edge::new(self.side_b.into())
        };
        (Edge::new(self.side_a.into()), eb)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatchSetDocument {
    pub version: u32,
    pub basis: DocBasis,
    /// Every entry's data matches `basis`.
    pub patches: Vec<PatchEntry>,
    pub adjacency: Vec<Adjacency>,
}

impl PatchSetDocument {
    /// All patches must share `basis`.
    pub fn geometric(basis: Basis, patches: impl IntoIterator<Item = GeometricPatch>) -> Self {
        let patches = patches
            .into_iter()
            .map(|p| {
                assert_eq!(p.basis, basis, "patch basis differs from document basis");
                PatchEntry {
                    id: None,
                    data: PatchData::Geometric(p),
                }
            })
            .collect();
        PatchSetDocument {
            version: FORMAT_VERSION,
            basis: DocBasis::Geometric(basis),
            patches,
            adjacency: Vec::new(),
        }
    }

    pub fn hs_input(inputs: impl IntoIterator<Item = HsPatchInput>) -> Self {
        PatchSetDocument {
            version: FORMAT_VERSION,
            basis: DocBasis::HsInput,
            patches: inputs
                .into_iter()
                .map(|i| PatchEntry {
                    id: None,
                    data: PatchData::HsInput(i),
                })
                .collect(),
            adjacency: Vec::new(),
        }
    }

    /// Same ids and adjacency, new patch data.
    pub fn with_data(&self, basis: DocBasis, data: Vec<PatchData>) -> Self {
        assert_eq!(data.len(), self.patches.len());
        PatchSetDocument {
            version: self.version,
            basis,
            patches: self
                .patches
                .iter()
                .zip(data)
                .map(|(e, data)| PatchEntry {
                    id: e.id.clone(),
                    data,
                })
                .collect(),
            adjacency: self.adjacency.clone(),
        }
    }

    /// Display label of patch `k`: its id, or its index.
    pub fn label(&self, k: usize) -> String {
        self.patches[k].id.clone().unwrap_or_else(|| k.to_string())
    }

    pub fn resolve(&self, r: &PatchRef) -> Option<usize> {
        match r {
            PatchRef::Index(i) => (*i < self.patches.len()).then_some(*i),
            PatchRef::Id(id) => self
                .patches
                .iter()
                .position(|p| p.id.as_deref() == Some(id)),
        }
    }
}

#[derive(Deserialize)]
struct Header {
    version: u32,
    basis: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawDoc<C> {
    #[allow(dead_code)]
    version: u32,
    #[allow(dead_code)]
    basis: String,
    patches: Vec<RawPatch<C>>,
    #[serde(default)]
    adjacency: Vec<Adjacency>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPatch<C> {
    #[serde(default)]
    id: Option<String>,
    x: C,
    y: C,
    z: C,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawHsCoord {
    corners: [f64; 4],
    tangents: [f64; 8],
}

#[derive(Deserialize)]
struct RawAdjacencyFile {
    adjacency: Vec<Adjacency>,
}

fn json_error(e: serde_json::Error, field: String) -> ParseError {
    ParseError::new(e.line(), e.column(), field, e.to_string())
}

fn parse_typed<T: DeserializeOwned>(text: &str) -> Result<T, ParseError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(de).map_err(|e| {
        let field = e.path().to_string();
        json_error(
            e.into_inner(),
            if field == "." { String::new() } else { field },
        )
    })?;
    // reject trailing garbage
    let mut de = serde_json::Deserializer::from_str(text);
    serde::de::IgnoredAny::deserialize(&mut de)
        .and_then(|_| de.end())
        .map_err(|e| json_error(e, String::new()))?;
    Ok(value)
}

pub fn parse_document(text: &str) -> Result<PatchSetDocument, ParseError> {
    let header: Header = parse_typed(text)?;
    if header.version != FORMAT_VERSION {
        return Err(ParseError::new(
            1,
            0,
            "version",
            format!(
                "unsupported version {} (expected {FORMAT_VERSION})",
                header.version
            ),
        ));
    }
    let basis = DocBasis::parse(&header.basis).ok_or_else(|| {
        ParseError::new(
            1,
            0,
            "basis",
            format!(
                "unknown basis {:?} (expected hermite, bezier, bspline or hs-input)",
                header.basis
            ),
        )
    })?;

    let (entries, adjacency) = match basis {
        DocBasis::Geometric(b) => {
            let raw: RawDoc<[[f64; 4]; 4]> = parse_typed(text)?;
            let entries = raw
                .patches
                .into_iter()
                .map(|p| PatchEntry {
                    id: p.id,
                    data: PatchData::Geometric(GeometricPatch::new(
                        Mat4(p.x),
                        Mat4(p.y),
                        Mat4(p.z),
                        b,
                    )),
                })
                .collect();
            (entries, raw.adjacency)
        }
        DocBasis::HsInput => {
            let raw: RawDoc<RawHsCoord> = parse_typed(text)?;
            let c = |r: RawHsCoord| CoordInput::new(r.corners, r.tangents);
            let entries = raw
                .patches
                .into_iter()
                .map(|p| PatchEntry {
                    id: p.id,
                    data: PatchData::HsInput(HsPatchInput::new(c(p.x), c(p.y), c(p.z))),
                })
                .collect();
            (entries, raw.adjacency)
        }
    };
    let doc = PatchSetDocument {
        version: header.version,
        basis,
        patches: entries,
        adjacency,
    };
    check_adjacency(&doc, &doc.adjacency, "adjacency")?;
    Ok(doc)
}

/// Adjacency list from a standalone file: either `{"adjacency": [...]}` or a bare list.
pub fn parse_adjacency(text: &str, doc: &PatchSetDocument) -> Result<Vec<Adjacency>, ParseError> {
    let list = if text.trim_start().starts_with('[') {
        parse_typed::<Vec<Adjacency>>(text)?
    } else {
        parse_typed::<RawAdjacencyFile>(text)?.adjacency
    };
    check_adjacency(doc, &list, "")?;
    Ok(list)
}

fn check_adjacency(
    doc: &PatchSetDocument,
    list: &[Adjacency],
    prefix: &str,
) -> Result<(), ParseError> {
    let mut ids = std::collections::HashSet::new();
    for (k, p) in doc.patches.iter().enumerate() {
        if let Some(id) = &p.id {
            if !ids.insert(id) {
                return Err(ParseError::new(
                    0,
                    0,
                    format!("patches[{k}].id"),
                    format!("duplicate id {id:?}"),
                ));
            }
        }
    }
    for (k, adj) in list.iter().enumerate() {
        for (name, r) in [("a", &adj.a), ("b", &adj.b)] {
            if doc.resolve(r).is_none() {
                return Err(ParseError::new(
                    0,
                    0,
                    format!("{prefix}[{k}].{name}"),
                    format!("no patch {r:?} in document"),
                ));
            }
        }
    }
    Ok(())
}

/// 17 significant digits; parses back to the same double.
pub fn fmt_num(x: f64) -> String {
    assert!(x.is_finite(), "non-finite value {x} cannot be written");
    format!("{x:.16e}")
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|&x| fmt_num(x)).collect();
    format!("[{}]", parts.join(", "))
}

fn fmt_matrix(m: &Mat4) -> String {
    let rows: Vec<String> = m.0.iter().map(|r| fmt_list(r)).collect();
    format!("[{}]", rows.join(", "))
}

fn fmt_coord(c: &CoordInput) -> String {
    format!(
        "{{\"corners\": {}, \"tangents\": {}}}",
        fmt_list(&c.corners),
        fmt_list(&c.tangents)
    )
}

fn fmt_ref(r: &PatchRef) -> String {
    serde_json::to_string(r).expect("patch ref serializes")
}

/// Deterministic text form. Panics on non-finite numbers, which no parsed
/// document can contain.
pub fn write_document(doc: &PatchSetDocument) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"version\": {},", doc.version);
    let _ = writeln!(out, "  \"basis\": \"{}\",", doc.basis.name());
    if doc.patches.is_empty() {
        out.push_str("  \"patches\": [],\n");
    } else {
        out.push_str("  \"patches\": [\n");
        for (k, p) in doc.patches.iter().enumerate() {
            out.push_str("    {\n");
            if let Some(id) = &p.id {
                let _ = writeln!(
                    out,
                    "      \"id\": {},",
                    serde_json::to_string(id).expect("string")
                );
            }
            let coords: [String; 3] = match &p.data {
                PatchData::Geometric(g) => g.coords().map(fmt_matrix),
                PatchData::HsInput(h) => h.coords.map(|c| fmt_coord(&c)),
            };
            let _ = writeln!(out, "      \"x\": {},", coords[0]);
            let _ = writeln!(out, "      \"y\": {},", coords[1]);
            let _ = writeln!(out, "      \"z\": {}", coords[2]);
            out.push_str(if k + 1 == doc.patches.len() {
                "    }\n"
            } else {
                "    },\n"
            });
        }
        out.push_str("  ],\n");
    }
    if doc.adjacency.is_empty() {
        out.push_str("  \"adjacency\": []\n");
    } else {
        out.push_str("  \"adjacency\": [\n");
        for (k, a) in doc.adjacency.iter().enumerate() {
            let sep = if k + 1 == doc.adjacency.len() {
                ""
            } else {
                ","
            };
            let _ = writeln!(
                out,
                "    {{\"a\": {}, \"side_a\": \"{}\", \"b\": {}, \"side_b\": \"{}\", \"reversed\": {}}}{sep}",
                fmt_ref(&a.a),
                Side::from(a.side_a).name(),
                fmt_ref(&a.b),
                Side::from(a.side_b).name(),
                a.reversed
            );
        }
        out.push_str("  ]\n");
    }
    out.push_str("}\n");
    out
}
