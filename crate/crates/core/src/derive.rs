//! Derived embeddings of the Cayley graph on the current group.
//!
//! Derived vertices are group elements, named here by their mixed-radix index
//! (`(a,b)` in `Z3 x Zn` becomes `a + 3b`).

use std::fmt::{self, Write as _};

use thiserror::Error;

use crate::group::{GroupSpec, Residue};
use crate::laws::{self, Mode};
use crate::model::{CurrentGraph, Sign};
use crate::tracer::{classify_edges, face_log, oriented_faces, trace_faces, Direction, Log};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("current graph fails the {mode} laws:\n{report}")]
    LawsFailed { mode: Mode, report: String },
    #[error("signature -1 on edge {{{0}, {1}}} whose ends have equal parity")]
    NotBipartite(usize, usize),
    #[error("signature +1 on edge {{{0}, {1}}} whose ends have different parity")]
    UntwistedCrossing(usize, usize),
    #[error("group {0} has no parity split")]
    NoParity(String),
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

/// One cyclic neighbor list per vertex, with optional edge signatures stored
/// parallel to the rotations. No signatures means pure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    rotations: Vec<Vec<usize>>,
    signatures: Option<Vec<Vec<Sign>>>,
}

impl RotationSystem {
    pub fn pure(rotations: Vec<Vec<usize>>) -> Self {
        RotationSystem {
            rotations,
            signatures: None,
        }
    }

    pub fn with_signatures(rotations: Vec<Vec<usize>>, signatures: Vec<Vec<Sign>>) -> Self {
        assert_eq!(rotations.len(), signatures.len());
        RotationSystem {
            rotations,
            signatures: Some(signatures),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn rotation(&self, v: usize) -> &[usize] {
        &self.rotations[v]
    }

    pub fn rotations(&self) -> &[Vec<usize>] {
        &self.rotations
    }

    pub fn signatures(&self) -> Option<&[Vec<Sign>]> {
        self.signatures.as_deref()
    }

    pub fn is_pure(&self) -> bool {
        self.signatures
            .as_ref()
            .map_or(true, |s| s.iter().flatten().all(|&x| x == Sign::Plus))
    }

    /// Reverses every rotation.
    pub fn mirrored(&self) -> RotationSystem {
        let mut out = self.clone();
        out.rotations.iter_mut().for_each(|r| r.reverse());
        if let Some(s) = out.signatures.as_mut() {
            s.iter_mut().for_each(|r| r.reverse());
        }
        out
    }

    /// Renames vertex `v` to `perm[v]`.
    pub fn relabeled(&self, perm: &[usize]) -> RotationSystem {
        let mut rotations = vec![Vec::new(); self.rotations.len()];
        let mut signatures = self.signatures.as_ref().map(|_| vec![Vec::new(); self.rotations.len()]);
        for (v, rot) in self.rotations.iter().enumerate() {
            rotations[perm[v]] = rot.iter().map(|&u| perm[u]).collect();
            if let (Some(out), Some(src)) = (signatures.as_mut(), self.signatures.as_ref()) {
                out[perm[v]] = src[v].clone();
            }
        }
        RotationSystem { rotations, signatures }
    }

    /// `i : j1 j2 ...`, one line per vertex. Only meaningful for pure systems.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (v, rot) in self.rotations.iter().enumerate() {
            write!(out, "{v} :").unwrap();
            for u in rot {
                write!(out, " {u}").unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Same layout with vertices written as group elements.
    pub fn to_element_text<R: Residue>(&self, group: &GroupSpec<R>) -> String {
        let mut out = String::new();
        for (v, rot) in self.rotations.iter().enumerate() {
            write!(out, "{} :", group.from_index(v)).unwrap();
            for &u in rot {
                write!(out, " {}", group.from_index(u)).unwrap();
            }
            out.push('\n');
        }
        out
    }

    /// Parses the integer layout of [`RotationSystem::to_text`]; `#` starts a
    /// comment. Vertices must be `0..n`, each listed once.
    pub fn parse(text: &str) -> Result<RotationSystem, DeriveError> {
        let mut rows: Vec<(usize, usize, Vec<usize>)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let syntax = |message: String| DeriveError::Syntax { line, message };
            let (head, tail) = content
                .split_once(':')
                .ok_or_else(|| syntax("expected `i : j1 j2 ...`".into()))?;
            let v = head
                .trim()
                .parse::<usize>()
                .map_err(|_| syntax(format!("bad vertex {:?}", head.trim())))?;
            let rot = tail
                .split_whitespace()
                .map(|t| t.parse::<usize>().map_err(|_| syntax(format!("bad neighbor {t:?}"))))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push((line, v, rot));
        }
        let n = rows.len();
        let mut rotations: Vec<Option<Vec<usize>>> = vec![None; n];
        for (line, v, rot) in rows {
            if v >= n {
                return Err(DeriveError::Syntax {
                    line,
                    message: format!("vertex {v} out of range for {n} rows"),
                });
            }
            if let Some(u) = rot.iter().find(|&&u| u >= n) {
                return Err(DeriveError::Syntax {
                    line,
                    message: format!("neighbor {u} out of range for {n} rows"),
                });
            }
            if rotations[v].replace(rot).is_some() {
                return Err(DeriveError::Syntax {
                    line,
                    message: format!("vertex {v} listed twice"),
                });
            }
        }
        Ok(RotationSystem::pure(rotations.into_iter().map(Option::unwrap).collect()))
    }
}

impl fmt::Display for RotationSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

fn log_indices<R: Residue>(g: &CurrentGraph<R>, log: &Log<R>) -> Vec<usize> {
    log.values().map(|v| g.group().index_of(v)).collect()
}

fn translate<R: Residue>(group: &GroupSpec<R>, i: usize, log: &[usize]) -> Vec<usize> {
    let base = group.from_index(i);
    log.iter()
        .map(|&l| group.index_of(&group.add_unchecked(&base, &group.from_index(l))))
        .collect()
}

fn ensure_laws<R: Residue>(g: &CurrentGraph<R>, mode: Mode) -> Result<(), DeriveError> {
    let report = laws::check(g, mode);
    if report.passed() {
        Ok(())
    } else {
        Err(DeriveError::LawsFailed {
            mode,
            report: report.to_string(),
        })
    }
}

/// Index-1 rule: the rotation at `i` is `i` plus the log, and a derived edge
/// has signature +1 iff the current-graph edge behind its log entry is
/// bidirectional.
pub fn derive_index1<R: Residue>(g: &CurrentGraph<R>) -> Result<RotationSystem, DeriveError> {
    ensure_laws(g, Mode::Cascade)?;
    Ok(derive_index1_unchecked(g))
}

/// [`derive_index1`] without the law check; the first face is used.
pub fn derive_index1_unchecked<R: Residue>(g: &CurrentGraph<R>) -> RotationSystem {
    let group = g.group();
    let walks = trace_faces(g.embedding());
    let directions = classify_edges(g.embedding(), &walks);
    let log = face_log(&walks[0], g);
    let entries = log_indices(g, &log);
    let signs: Vec<Sign> = log
        .entries()
        .iter()
        .map(|entry| match directions[walks[0].steps()[entry.step].dart.edge()] {
            Direction::Bidirectional => Sign::Plus,
            Direction::Unidirectional => Sign::Minus,
        })
        .collect();
    let n = group.order();
    let rotations = (0..n).map(|i| translate(group, i, &entries)).collect();
    RotationSystem::with_signatures(rotations, vec![signs; n])
}

/// Flips every odd vertex. Requires signature -1 exactly on the edges joining
/// an even and an odd vertex; a system with no -1 signature is returned as is.
pub fn normalize_to_pure<R: Residue>(rs: &RotationSystem, group: &GroupSpec<R>) -> Result<RotationSystem, DeriveError> {
    if rs.is_pure() {
        return Ok(RotationSystem::pure(rs.rotations.clone()));
    }
    if !group.has_parity() {
        return Err(DeriveError::NoParity(group.to_string()));
    }
    let odd = |v: usize| !group.is_even(&group.from_index(v)).unwrap();
    let signatures = rs.signatures.as_ref().unwrap();
    for (v, rot) in rs.rotations.iter().enumerate() {
        for (&u, &sig) in rot.iter().zip(&signatures[v]) {
            match (sig, odd(u) != odd(v)) {
                (Sign::Minus, false) => return Err(DeriveError::NotBipartite(v, u)),
                (Sign::Plus, true) => return Err(DeriveError::UntwistedCrossing(v, u)),
                _ => {}
            }
        }
    }
    let rotations = rs
        .rotations
        .iter()
        .enumerate()
        .map(|(v, rot)| {
            let mut rot = rot.clone();
            if odd(v) {
                rot.reverse();
            }
            rot
        })
        .collect();
    Ok(RotationSystem::pure(rotations))
}

/// Index-2 rule: even vertices translate the log of face [0], odd vertices the
/// log of face [1]. Face [0] is the consistently oriented walk through the
/// smallest dart.
pub fn derive_index2<R: Residue>(g: &CurrentGraph<R>) -> Result<RotationSystem, DeriveError> {
    derive_index2_labeled(g, false)
}

/// [`derive_index2`] with the option of exchanging the face labels.
pub fn derive_index2_labeled<R: Residue>(g: &CurrentGraph<R>, swap: bool) -> Result<RotationSystem, DeriveError> {
    ensure_laws(g, Mode::Index2)?;
    let group = g.group();
    let walks = oriented_faces(g.embedding()).expect("orientable after law check");
    let mut logs: Vec<Vec<usize>> = walks.iter().map(|w| log_indices(g, &face_log(w, g))).collect();
    if swap {
        logs.swap(0, 1);
    }
    let rotations = (0..group.order())
        .map(|i| {
            let odd = !group.is_even(&group.from_index(i)).unwrap();
            translate(group, i, &logs[odd as usize])
        })
        .collect();
    Ok(RotationSystem::pure(rotations))
}

/// Dispatches on mode and returns a pure system.
pub fn derive<R: Residue>(g: &CurrentGraph<R>, mode: Mode) -> Result<RotationSystem, DeriveError> {
    match mode {
        Mode::Cascade => normalize_to_pure(&derive_index1(g)?, g.group()),
        Mode::Index2 => derive_index2(g),
    }
}
