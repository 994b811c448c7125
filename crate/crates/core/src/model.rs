//! Embedded, arc-labelled current graphs and their line-based text format.
//!
//! An edge `e` has two darts `e.0` and `e.1`; the dart sitting at a vertex is
//! the arc leaving that vertex. Only the current on `e.0` is stored. The
//! current on `e.1` is derived from the signature so that
//! `current(e.0) = -sig(e) * current(e.1)` holds by construction.
//!
//! ```text
//! group 3 12
//! index 1
//! v 1 cw e1.0 e2.0 e3.1     # cw: listed order is the rotation
//! v 2 ccw e1.1 e4.0 e5.0    # ccw: listed order reversed
//! v 3 : e2.1 e4.1 e5.1      # explicit rotation
//! e 1 sig +1 cur (0,1)
//! ```

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::group::{GroupElement, GroupError, GroupSpec, Residue};

/// One end of an edge; as an arc it points away from the vertex it sits at.
#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Dart {
    pub edge: u32,
    pub end: u8,
}

impl Dart {
    pub fn new(edge: usize, end: u8) -> Self {
        debug_assert!(end < 2);
        Dart {
            edge: edge as u32,
            end,
        }
    }

    #[inline]
    pub fn reverse(self) -> Self {
        Dart {
            edge: self.edge,
            end: 1 - self.end,
        }
    }

    #[inline]
    pub fn index(self) -> usize {
        2 * self.edge as usize + self.end as usize
    }

    #[inline]
    pub fn from_index(i: usize) -> Self {
        Dart {
            edge: (i / 2) as u32,
            end: (i % 2) as u8,
        }
    }

    #[inline]
    pub fn edge(self) -> usize {
        self.edge as usize
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn toggled(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn is_twisted(self) -> bool {
        self == Sign::Minus
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}, column {column}: unknown group element {text}: {source}")]
    UnknownElement {
        line: usize,
        column: usize,
        text: String,
        source: GroupError,
    },
    #[error("missing `group` line")]
    MissingGroup,
    #[error("dart e{edge}.{end} does not appear in any rotation")]
    DanglingDart { edge: u64, end: u8 },
    #[error("dart e{edge}.{end} refers to an undeclared edge")]
    UndeclaredEdge { edge: u64, end: u8 },
    #[error("dart e{edge}.{end} appears more than once")]
    DuplicateDart { edge: u64, end: u8 },
    #[error("vertex {0} declared twice")]
    DuplicateVertex(u64),
    #[error("edge {0} declared twice")]
    DuplicateEdge(u64),
    #[error("vertex {0} has an empty rotation")]
    EmptyRotation(u64),
    #[error("edge {edge}: current on e{edge}.1 is {found}, but signature {sig} forces {expected}")]
    Inconsistent {
        edge: u64,
        sig: Sign,
        found: String,
        expected: String,
    },
    #[error("no vertex with id {0}")]
    UnknownVertex(u64),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Rotations and signatures only: the combinatorial embedding without labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    rotations: Vec<Vec<Dart>>,
    signatures: Vec<Sign>,
    /// (vertex, position in its rotation) per dart index
    home: Vec<(u32, u32)>,
}

impl Embedding {
    /// Fails with the dense index of the offending edge wrapped in `DanglingDart`
    /// or `DuplicateDart`; callers map it back to their own ids.
    pub fn new(rotations: Vec<Vec<Dart>>, signatures: Vec<Sign>) -> Result<Self, ModelError> {
        const UNSET: (u32, u32) = (u32::MAX, u32::MAX);
        let mut home = vec![UNSET; 2 * signatures.len()];
        for (v, rot) in rotations.iter().enumerate() {
            if rot.is_empty() {
                return Err(ModelError::EmptyRotation(v as u64));
            }
            for (p, d) in rot.iter().enumerate() {
                if d.edge() >= signatures.len() || d.end > 1 {
                    return Err(ModelError::UndeclaredEdge {
                        edge: d.edge as u64,
                        end: d.end,
                    });
                }
                let slot = &mut home[d.index()];
                if *slot != UNSET {
                    return Err(ModelError::DuplicateDart {
                        edge: d.edge as u64,
                        end: d.end,
                    });
                }
                *slot = (v as u32, p as u32);
            }
        }
        if let Some(i) = home.iter().position(|h| *h == UNSET) {
            let d = Dart::from_index(i);
            return Err(ModelError::DanglingDart {
                edge: d.edge as u64,
                end: d.end,
            });
        }
        Ok(Embedding {
            rotations,
            signatures,
            home,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.signatures.len()
    }

    pub fn dart_count(&self) -> usize {
        self.home.len()
    }

    pub fn rotation(&self, v: usize) -> &[Dart] {
        &self.rotations[v]
    }

    pub fn rotations(&self) -> &[Vec<Dart>] {
        &self.rotations
    }

    pub fn signature(&self, e: usize) -> Sign {
        self.signatures[e]
    }

    pub fn signatures(&self) -> &[Sign] {
        &self.signatures
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotations[v].len()
    }

    /// Vertex the dart sits at.
    #[inline]
    pub fn tail(&self, d: Dart) -> usize {
        self.home[d.index()].0 as usize
    }

    /// Vertex the dart points to.
    #[inline]
    pub fn head(&self, d: Dart) -> usize {
        self.tail(d.reverse())
    }

    #[inline]
    pub fn position(&self, d: Dart) -> usize {
        self.home[d.index()].1 as usize
    }

    /// Successor of `d` in the rotation at its tail.
    #[inline]
    pub fn next(&self, d: Dart) -> Dart {
        let (v, p) = self.home[d.index()];
        let rot = &self.rotations[v as usize];
        rot[(p as usize + 1) % rot.len()]
    }

    #[inline]
    pub fn prev(&self, d: Dart) -> Dart {
        let (v, p) = self.home[d.index()];
        let rot = &self.rotations[v as usize];
        rot[(p as usize + rot.len() - 1) % rot.len()]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.tail(Dart::new(e, 0)) == self.tail(Dart::new(e, 1))
    }

    /// Reverses the rotation at `v` and toggles the signature of every
    /// non-loop edge at `v`.
    pub fn flipped(&self, v: usize) -> Embedding {
        let mut out = self.clone();
        out.rotations[v].reverse();
        for (p, d) in out.rotations[v].iter().enumerate() {
            out.home[d.index()] = (v as u32, p as u32);
        }
        for d in &self.rotations[v] {
            if !self.is_loop(d.edge()) {
                out.signatures[d.edge()] = out.signatures[d.edge()].toggled();
            }
        }
        out
    }

    pub(crate) fn with_signature(&self, e: usize, sign: Sign) -> Embedding {
        let mut out = self.clone();
        out.signatures[e] = sign;
        out
    }

    pub(crate) fn with_rotation_swapped(&self, v: usize, i: usize, j: usize) -> Embedding {
        let mut out = self.clone();
        out.rotations[v].swap(i, j);
        for (p, d) in out.rotations[v].iter().enumerate() {
            out.home[d.index()] = (v as u32, p as u32);
        }
        out
    }
}

/// An embedded graph with currents from an abelian group on its arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurrentGraph<R> {
    group: GroupSpec<R>,
    index: Option<u8>,
    vertex_ids: Vec<u64>,
    edge_ids: Vec<u64>,
    embedding: Embedding,
    currents: Vec<GroupElement<R>>,
}

impl<R: Residue> CurrentGraph<R> {
    pub fn group(&self) -> &GroupSpec<R> {
        &self.group
    }

    /// The `index` line of the source file, if any.
    pub fn declared_index(&self) -> Option<u8> {
        self.index
    }

    pub fn embedding(&self) -> &Embedding {
        &self.embedding
    }

    pub fn vertex_count(&self) -> usize {
        self.embedding.vertex_count()
    }

    pub fn edge_count(&self) -> usize {
        self.embedding.edge_count()
    }

    pub fn vertex_id(&self, v: usize) -> u64 {
        self.vertex_ids[v]
    }

    pub fn edge_id(&self, e: usize) -> u64 {
        self.edge_ids[e]
    }

    pub fn vertex_index(&self, id: u64) -> Option<usize> {
        self.vertex_ids.binary_search(&id).ok()
    }

    pub fn edge_index(&self, id: u64) -> Option<usize> {
        self.edge_ids.binary_search(&id).ok()
    }

    pub fn dart_name(&self, d: Dart) -> String {
        format!("e{}.{}", self.edge_ids[d.edge()], d.end)
    }

    /// Current carried by the arc `d`.
    pub fn current(&self, d: Dart) -> GroupElement<R> {
        let stored = &self.currents[d.edge()];
        match (d.end, self.embedding.signature(d.edge())) {
            (0, _) | (_, Sign::Minus) => stored.clone(),
            _ => self.group.negate(stored),
        }
    }

    /// Stored current, i.e. the current on `e.0`.
    pub fn edge_current(&self, e: usize) -> &GroupElement<R> {
        &self.currents[e]
    }

    /// Vertex flip: rotation reversed, incident signatures toggled, and the
    /// currents on arcs leaving the vertex negated so that face logs are
    /// unchanged.
    pub fn apply_flip(&self, vertex_id: u64) -> Result<CurrentGraph<R>, ModelError> {
        let v = self.vertex_index(vertex_id).ok_or(ModelError::UnknownVertex(vertex_id))?;
        Ok(self.flip_at(v))
    }

    pub fn flip_at(&self, v: usize) -> CurrentGraph<R> {
        let mut out = self.clone();
        out.embedding = self.embedding.flipped(v);
        for d in self.embedding.rotation(v) {
            if d.end == 0 {
                out.currents[d.edge()] = self.group.negate(&self.currents[d.edge()]);
            }
        }
        out
    }

    pub fn with_edge_current(&self, e: usize, current: GroupElement<R>) -> CurrentGraph<R> {
        let mut out = self.clone();
        out.currents[e] = current;
        out
    }

    /// Toggles a signature while keeping the stored current on `e.0`.
    pub fn with_signature_toggled(&self, e: usize) -> CurrentGraph<R> {
        let mut out = self.clone();
        out.embedding = self.embedding.with_signature(e, self.embedding.signature(e).toggled());
        out
    }

    pub fn with_rotation_swapped(&self, v: usize, i: usize, j: usize) -> CurrentGraph<R> {
        let mut out = self.clone();
        out.embedding = self.embedding.with_rotation_swapped(v, i, j);
        out
    }

    pub fn with_declared_index(&self, index: Option<u8>) -> CurrentGraph<R> {
        let mut out = self.clone();
        out.index = index;
        out
    }

    /// Canonical text form: vertices ascending, each rotation starting at its
    /// smallest dart, edges ascending.
    pub fn serialize(&self) -> String {
        let mut out = String::new();
        let moduli: Vec<String> = self.group.moduli().iter().map(|m| m.to_string()).collect();
        writeln!(out, "group {}", moduli.join(" ")).unwrap();
        if let Some(index) = self.index {
            writeln!(out, "index {index}").unwrap();
        }
        for (v, rot) in self.embedding.rotations().iter().enumerate() {
            let start = (0..rot.len()).min_by_key(|&i| rot[i]).unwrap_or(0);
            write!(out, "v {} :", self.vertex_ids[v]).unwrap();
            for k in 0..rot.len() {
                write!(out, " {}", self.dart_name(rot[(start + k) % rot.len()])).unwrap();
            }
            out.push('\n');
        }
        for e in 0..self.edge_count() {
            writeln!(
                out,
                "e {} sig {} cur {}",
                self.edge_ids[e],
                self.embedding.signature(e),
                self.currents[e]
            )
            .unwrap();
        }
        out
    }

    pub fn parse(text: &str) -> Result<CurrentGraph<R>, ModelError> {
        parse(text)
    }
}

/// Collects vertices and edges by user id, then validates them into a graph.
#[derive(Debug, Clone)]
pub struct GraphBuilder<R> {
    group: GroupSpec<R>,
    index: Option<u8>,
    vertices: Vec<(u64, Vec<(u64, u8)>)>,
    edges: Vec<(u64, Sign, GroupElement<R>, Option<GroupElement<R>>)>,
}

impl<R: Residue> GraphBuilder<R> {
    pub fn new(group: GroupSpec<R>) -> Self {
        GraphBuilder {
            group,
            index: None,
            vertices: Vec::new(),
            edges: Vec::new(),
        }
    }

    pub fn index(mut self, index: u8) -> Self {
        self.index = Some(index);
        self
    }

    pub fn set_index(&mut self, index: Option<u8>) {
        self.index = index;
    }

    /// `rotation` lists `(edge id, end)` pairs in rotation order.
    pub fn vertex(&mut self, id: u64, rotation: Vec<(u64, u8)>) -> &mut Self {
        self.vertices.push((id, rotation));
        self
    }

    pub fn edge(&mut self, id: u64, sig: Sign, current: GroupElement<R>) -> &mut Self {
        self.edges.push((id, sig, current, None));
        self
    }

    /// Edge whose end-1 current is also given, to be checked for consistency.
    pub fn edge_with_reverse(
        &mut self,
        id: u64,
        sig: Sign,
        current: GroupElement<R>,
        reverse: GroupElement<R>,
    ) -> &mut Self {
        self.edges.push((id, sig, current, Some(reverse)));
        self
    }

    pub fn build(mut self) -> Result<CurrentGraph<R>, ModelError> {
        self.vertices.sort_by_key(|v| v.0);
        self.edges.sort_by_key(|e| e.0);
        if let Some(w) = self.vertices.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(ModelError::DuplicateVertex(w[0].0));
        }
        if let Some(w) = self.edges.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(ModelError::DuplicateEdge(w[0].0));
        }
        let edge_ids: Vec<u64> = self.edges.iter().map(|e| e.0).collect();
        let vertex_ids: Vec<u64> = self.vertices.iter().map(|v| v.0).collect();
        let mut rotations = Vec::with_capacity(self.vertices.len());
        for (vid, rot) in &self.vertices {
            if rot.is_empty() {
                return Err(ModelError::EmptyRotation(*vid));
            }
            let mut darts = Vec::with_capacity(rot.len());
            for &(eid, end) in rot {
                let e = edge_ids
                    .binary_search(&eid)
                    .map_err(|_| ModelError::UndeclaredEdge { edge: eid, end })?;
                if end > 1 {
                    return Err(ModelError::UndeclaredEdge { edge: eid, end });
                }
                darts.push(Dart::new(e, end));
            }
            rotations.push(darts);
        }
        let mut currents = Vec::with_capacity(self.edges.len());
        let mut signatures = Vec::with_capacity(self.edges.len());
        for (id, sig, cur, rev) in self.edges {
            if !self.group.contains(&cur) {
                return Err(ModelError::Group(GroupError::Mismatch {
                    element: cur.to_string(),
                    group: self.group.to_string(),
                }));
            }
            if let Some(rev) = rev {
                let expected = match sig {
                    Sign::Plus => self.group.negate(&cur),
                    Sign::Minus => cur.clone(),
                };
                if rev != expected {
                    return Err(ModelError::Inconsistent {
                        edge: id,
                        sig,
                        found: rev.to_string(),
                        expected: expected.to_string(),
                    });
                }
            }
            currents.push(cur);
            signatures.push(sig);
        }
        let embedding = Embedding::new(rotations, signatures).map_err(|err| match err {
            ModelError::DanglingDart { edge, end } => ModelError::DanglingDart {
                edge: edge_ids[edge as usize],
                end,
            },
            ModelError::DuplicateDart { edge, end } => ModelError::DuplicateDart {
                edge: edge_ids[edge as usize],
                end,
            },
            other => other,
        })?;
        Ok(CurrentGraph {
            group: self.group,
            index: self.index,
            vertex_ids,
            edge_ids,
            embedding,
            currents,
        })
    }
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

/// Splits on whitespace, keeping parenthesised groups such as `(0, 1)` whole.
fn tokenize(line: &str) -> Result<Vec<Token<'_>>, usize> {
    let mut tokens = Vec::new();
    let bytes = line.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        if bytes[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let mut depth = 0i32;
        while i < bytes.len() && (depth > 0 || !bytes[i].is_ascii_whitespace()) {
            match bytes[i] {
                b'(' => depth += 1,
                b')' => depth -= 1,
                _ => {}
            }
            i += 1;
        }
        if depth != 0 {
            return Err(start + 1);
        }
        tokens.push(Token {
            text: &line[start..i],
            column: start + 1,
        });
    }
    Ok(tokens)
}

fn parse_dart(token: &Token<'_>, line: usize) -> Result<(u64, u8), ModelError> {
    let bad = || ModelError::Syntax {
        line,
        column: token.column,
        message: format!("expected a dart like e12.0, found {:?}", token.text),
    };
    let body = token.text.strip_prefix('e').ok_or_else(bad)?;
    let (edge, end) = body.split_once('.').ok_or_else(bad)?;
    let edge = edge.parse::<u64>().map_err(|_| bad())?;
    let end = match end {
        "0" => 0,
        "1" => 1,
        _ => return Err(bad()),
    };
    Ok((edge, end))
}

pub fn parse<R: Residue>(text: &str) -> Result<CurrentGraph<R>, ModelError> {
    let mut builder: Option<GraphBuilder<R>> = None;
    let mut index = None;
    // vertex and edge lines may precede the group line only in error
    let mut pending_vertices = Vec::new();
    let mut pending_edges: Vec<(u64, Sign, GroupElement<R>, Option<GroupElement<R>>)> = Vec::new();
    let mut seen_edges = BTreeMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("");
        let tokens = tokenize(content).map_err(|column| ModelError::Syntax {
            line,
            column,
            message: "unbalanced parentheses".into(),
        })?;
        let Some(head) = tokens.first() else { continue };
        let syntax = |column: usize, message: String| ModelError::Syntax {
            line,
            column,
            message,
        };
        let end_col = content.trim_end().len() + 1;
        match head.text {
            "group" => {
                if builder.is_some() {
                    return Err(syntax(head.column, "duplicate group line".into()));
                }
                let spec = match tokens.len() {
                    1 => return Err(syntax(end_col, "expected moduli after `group`".into())),
                    2 if tokens[1].text.starts_with('Z') => tokens[1]
                        .text
                        .parse::<GroupSpec<R>>()
                        .map_err(|e| syntax(tokens[1].column, e.to_string()))?,
                    _ => {
                        let moduli = tokens[1..]
                            .iter()
                            .map(|t| {
                                t.text
                                    .parse::<R>()
                                    .map_err(|_| syntax(t.column, format!("bad modulus {:?}", t.text)))
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        GroupSpec::new(moduli).map_err(|e| syntax(tokens[1].column, e.to_string()))?
                    }
                };
                builder = Some(GraphBuilder::new(spec));
            }
            "index" => {
                let value = tokens
                    .get(1)
                    .ok_or_else(|| syntax(end_col, "expected 1 or 2 after `index`".into()))?;
                index = Some(match value.text {
                    "1" => 1,
                    "2" => 2,
                    other => return Err(syntax(value.column, format!("index must be 1 or 2, found {other:?}"))),
                });
                if tokens.len() > 2 {
                    return Err(syntax(tokens[2].column, "trailing tokens".into()));
                }
            }
            "v" => {
                let id_tok = tokens.get(1).ok_or_else(|| syntax(end_col, "expected vertex id".into()))?;
                let id = id_tok
                    .text
                    .parse::<u64>()
                    .map_err(|_| syntax(id_tok.column, format!("bad vertex id {:?}", id_tok.text)))?;
                let mode = tokens
                    .get(2)
                    .ok_or_else(|| syntax(end_col, "expected `cw`, `ccw` or `:`".into()))?;
                let mut darts = tokens[3..]
                    .iter()
                    .map(|t| parse_dart(t, line))
                    .collect::<Result<Vec<_>, _>>()?;
                match mode.text {
                    ":" | "cw" => {}
                    "ccw" => darts.reverse(),
                    other => {
                        return Err(syntax(
                            mode.column,
                            format!("expected `cw`, `ccw` or `:`, found {other:?}"),
                        ))
                    }
                }
                if darts.is_empty() {
                    return Err(ModelError::EmptyRotation(id));
                }
                pending_vertices.push((id, darts));
            }
            "e" => {
                let group = builder
                    .as_ref()
                    .map(|b| b.group.clone())
                    .ok_or(ModelError::MissingGroup)?;
                let id_tok = tokens.get(1).ok_or_else(|| syntax(end_col, "expected edge id".into()))?;
                let id = id_tok
                    .text
                    .parse::<u64>()
                    .map_err(|_| syntax(id_tok.column, format!("bad edge id {:?}", id_tok.text)))?;
                if seen_edges.insert(id, line).is_some() {
                    return Err(ModelError::DuplicateEdge(id));
                }
                let mut sig = None;
                let mut cur = None;
                let mut rev = None;
                let mut k = 2;
                while k < tokens.len() {
                    let key = &tokens[k];
                    let value = tokens
                        .get(k + 1)
                        .ok_or_else(|| syntax(end_col, format!("expected a value after `{}`", key.text)))?;
                    let element = |t: &Token<'_>| {
                        group.parse_element(t.text).map_err(|source| ModelError::UnknownElement {
                            line,
                            column: t.column,
                            text: t.text.to_string(),
                            source,
                        })
                    };
                    match key.text {
                        "sig" => {
                            sig = Some(match value.text {
                                "+1" | "1" | "+" => Sign::Plus,
                                "-1" | "-" => Sign::Minus,
                                other => {
                                    return Err(syntax(value.column, format!("signature must be +1 or -1, found {other:?}")))
                                }
                            })
                        }
                        "cur" => cur = Some(element(value)?),
                        "cur1" => rev = Some(element(value)?),
                        other => return Err(syntax(key.column, format!("unknown edge field {other:?}"))),
                    }
                    k += 2;
                }
                let cur = cur.ok_or_else(|| syntax(end_col, "edge is missing `cur`".into()))?;
                pending_edges.push((id, sig.unwrap_or(Sign::Plus), cur, rev));
            }
            other => return Err(syntax(head.column, format!("unknown record {other:?}"))),
        }
    }

    let mut builder = builder.ok_or(ModelError::MissingGroup)?;
    builder.set_index(index);
    for (id, darts) in pending_vertices {
        builder.vertex(id, darts);
    }
    for (id, sig, cur, rev) in pending_edges {
        match rev {
            Some(rev) => builder.edge_with_reverse(id, sig, cur, rev),
            None => builder.edge(id, sig, cur),
        };
    }
    builder.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = CurrentGraph<u32>;

    const K2: &str = "group 3 12\nv 1 : e1.0\nv 2 : e1.1\ne 1 sig +1 cur (0,6)\n";

    #[test]
    fn parse_one_edge() {
        let g: G = parse(K2).unwrap();
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.current(Dart::new(0, 1)).to_string(), "(0,6)");
        assert_eq!(g.serialize(), K2);
        assert_eq!(g.serialize().lines().count(), 4);
    }

    #[test]
    fn empty_graph_is_header_only() {
        let g: G = parse("group 3 12\n").unwrap();
        assert_eq!(g.serialize(), "group 3 12\n");
        let g: G = parse("group Z3xZ12\nindex 2\n").unwrap();
        assert_eq!(g.serialize(), "group 3 12\nindex 2\n");
    }

    #[test]
    fn duplicate_dart_rejected() {
        let text = "group 3 12\nv 1 : e1.0\nv 2 : e1.0\ne 1 sig +1 cur (0,6)\n";
        assert_eq!(parse::<u32>(text).unwrap_err(), ModelError::DuplicateDart { edge: 1, end: 0 });
    }

    #[test]
    fn dangling_dart_rejected() {
        let text = "group 3 12\nv 1 : e1.0\ne 1 sig +1 cur (0,6)\n";
        assert_eq!(parse::<u32>(text).unwrap_err(), ModelError::DanglingDart { edge: 1, end: 1 });
        let text = "group 3 12\nv 1 : e1.0 e2.0\nv 2 : e1.1\ne 1 sig +1 cur (0,6)\n";
        assert_eq!(parse::<u32>(text).unwrap_err(), ModelError::UndeclaredEdge { edge: 2, end: 0 });
    }

    #[test]
    fn inconsistent_reverse_current() {
        let ok = "group 3 12\nv 1 : e1.0\nv 2 : e1.1\ne 1 sig +1 cur (1,2) cur1 (2,10)\n";
        assert!(parse::<u32>(ok).is_ok());
        let twisted = "group 3 12\nv 1 : e1.0\nv 2 : e1.1\ne 1 sig -1 cur (1,2) cur1 (1,2)\n";
        assert!(parse::<u32>(twisted).is_ok());
        let bad = "group 3 12\nv 1 : e1.0\nv 2 : e1.1\ne 1 sig -1 cur (1,2) cur1 (2,10)\n";
        assert!(matches!(parse::<u32>(bad), Err(ModelError::Inconsistent { edge: 1, .. })));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let text = "group 3 12\nv 1 : e1.0\nv 2 : e1.x\n";
        assert_eq!(
            parse::<u32>(text).unwrap_err(),
            ModelError::Syntax {
                line: 3,
                column: 7,
                message: "expected a dart like e12.0, found \"e1.x\"".into()
            }
        );
        let text = "group 3 12\nq 1\n";
        assert!(matches!(parse::<u32>(text), Err(ModelError::Syntax { line: 2, column: 1, .. })));
        let text = "group 3 12\nv 1 : e1.0\nv 2 : e1.1\ne 1 sig +1 cur (0,12)\n";
        assert!(matches!(
            parse::<u32>(text),
            Err(ModelError::UnknownElement { line: 4, column: 16, .. })
        ));
        assert_eq!(parse::<u32>("v 1 : e1.0\n").unwrap_err(), ModelError::MissingGroup);
    }

    #[test]
    fn cw_and_ccw_shorthand() {
        let text = "group 3 12\nv 1 cw e1.0 e2.0 e3.0\nv 2 ccw e1.1 e2.1 e3.1\ne 1 cur (0,1)\ne 2 cur (0,2)\ne 3 cur (0,9)\n";
        let g: G = parse(text).unwrap();
        assert_eq!(g.embedding().rotation(0), &[Dart::new(0, 0), Dart::new(1, 0), Dart::new(2, 0)]);
        assert_eq!(g.embedding().rotation(1), &[Dart::new(2, 1), Dart::new(1, 1), Dart::new(0, 1)]);
        // canonical form starts each rotation at its smallest dart
        assert!(g.serialize().contains("v 2 : e1.1 e3.1 e2.1\n"));
    }

    #[test]
    fn comments_and_spaced_elements() {
        let text = "# header\ngroup 3 12   # Z3xZ12\n\nv 7 : e4.0 # pendant\nv 9 : e4.1\ne 4 sig -1 cur (2, 11)\n";
        let g: G = parse(text).unwrap();
        assert_eq!(g.vertex_id(1), 9);
        assert_eq!(g.edge_current(0).to_string(), "(2,11)");
        assert_eq!(g.embedding().signature(0), Sign::Minus);
    }

    #[test]
    fn flip_examples() {
        let g: G = parse(K2).unwrap();
        let f = g.apply_flip(1).unwrap();
        assert_eq!(f.embedding().signature(0), Sign::Minus);
        assert_eq!(f.apply_flip(1).unwrap(), g);
        assert!(matches!(g.apply_flip(5), Err(ModelError::UnknownVertex(5))));
    }

    #[test]
    fn flip_keeps_loop_signature() {
        let text = "group 3 12\nv 1 : e1.0 e1.1 e2.0\nv 2 : e2.1\ne 1 sig -1 cur (1,1)\ne 2 sig +1 cur (0,6)\n";
        let g: G = parse(text).unwrap();
        let f = g.apply_flip(1).unwrap();
        assert_eq!(f.embedding().signature(0), Sign::Minus);
        assert_eq!(f.embedding().signature(1), Sign::Minus);
        assert_eq!(f.edge_current(0).to_string(), "(2,11)");
        assert_eq!(f.apply_flip(1).unwrap(), g);
    }

    #[test]
    fn flip_preserves_arc_relation() {
        let text = "group 3 12\nv 1 : e1.0 e2.0 e3.0\nv 2 : e1.1 e2.1 e3.1\ne 1 sig +1 cur (0,1)\ne 2 sig -1 cur (1,3)\ne 3 sig +1 cur (2,7)\n";
        let g: G = parse(text).unwrap();
        for v in [1, 2] {
            let f = g.apply_flip(v).unwrap();
            for e in 0..3 {
                let (a, b) = (f.current(Dart::new(e, 0)), f.current(Dart::new(e, 1)));
                let lhs = match f.embedding().signature(e) {
                    Sign::Plus => f.group().negate(&b),
                    Sign::Minus => b,
                };
                assert_eq!(a, lhs);
            }
            let degree_sum: usize = (0..f.vertex_count()).map(|v| f.embedding().degree(v)).sum();
            assert_eq!(degree_sum, 2 * f.edge_count());
        }
    }
}
