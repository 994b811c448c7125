//! Checks for the properties a current graph must have to generate a
//! triangular embedding:
//!
//! * C1: every vertex has degree 1 or 3;
//! * C2: Kirchhoff's current law at every degree-3 vertex;
//! * C3: the excess at every degree-1 vertex has order 2 or 3;
//! * C4: every face log lists each nonzero group element exactly once;
//! * C5 (cascade): a current is odd iff its edge is unidirectional;
//! * C5' (index 2): a current is odd iff both faces traverse its edge.
//!
//! The face count and surface type required by the mode are reported as two
//! further laws. All laws are evaluated; nothing short-circuits.

use std::fmt;

use crate::group::{GroupElement, Residue};
use crate::model::CurrentGraph;
use crate::tracer::{self, classify_edges, edge_traversals, face_log, Direction, FaceWalk};

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Mode {
    /// Index 1, nonorientable surface, orientable derived embedding.
    Cascade,
    /// Index 2, orientable surface.
    Index2,
}

impl Mode {
    pub fn face_count(self) -> usize {
        match self {
            Mode::Cascade => 1,
            Mode::Index2 => 2,
        }
    }

    pub fn from_index(index: u8) -> Option<Mode> {
        match index {
            1 => Some(Mode::Cascade),
            2 => Some(Mode::Index2),
            _ => None,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Cascade => "cascade",
            Mode::Index2 => "index2",
        })
    }
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cascade" | "index1" | "1" => Ok(Mode::Cascade),
            "index2" | "2" => Ok(Mode::Index2),
            other => Err(format!("unknown mode {other:?}, expected cascade or index2")),
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Law {
    Degrees,
    Kirchhoff,
    Vortices,
    Logs,
    Parity,
    Index,
    Surface,
}

impl Law {
    pub fn label(self, mode: Mode) -> &'static str {
        match (self, mode) {
            (Law::Degrees, _) => "C1",
            (Law::Kirchhoff, _) => "C2",
            (Law::Vortices, _) => "C3",
            (Law::Logs, _) => "C4",
            (Law::Parity, Mode::Cascade) => "C5",
            (Law::Parity, Mode::Index2) => "C5'",
            (Law::Index, _) => "INDEX",
            (Law::Surface, _) => "SURFACE",
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Witness<R> {
    Degree { vertex: u64, degree: usize },
    Excess { vertex: u64, excess: GroupElement<R> },
    VortexOrder { vertex: u64, excess: GroupElement<R>, order: u64 },
    Missing { face: usize, element: GroupElement<R> },
    Repeated { face: usize, element: GroupElement<R>, count: usize },
    Parity { edge: u64, current: GroupElement<R>, odd: bool, shared: bool },
    NotBidirectional { edge: u64 },
    FaceCount { found: usize, expected: usize },
    Surface { orientable: bool },
}

impl<R: Residue> fmt::Display for Witness<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Degree { vertex, degree } => write!(f, "vertex={vertex} degree={degree}"),
            Witness::Excess { vertex, excess } => write!(f, "vertex={vertex} excess={excess}"),
            Witness::VortexOrder { vertex, excess, order } => {
                write!(f, "vertex={vertex} excess={excess} order={order}")
            }
            Witness::Missing { face, element } => write!(f, "face={face} missing={element}"),
            Witness::Repeated { face, element, count } => {
                write!(f, "face={face} repeated={element} count={count}")
            }
            Witness::Parity { edge, current, odd, shared } => write!(
                f,
                "edge={edge} current={current} {} {}",
                if *odd { "odd" } else { "even" },
                if *shared { "unidirectional/shared" } else { "bidirectional/unshared" }
            ),
            Witness::NotBidirectional { edge } => write!(f, "edge={edge} not-bidirectional"),
            Witness::FaceCount { found, expected } => write!(f, "faces={found} expected={expected}"),
            Witness::Surface { orientable } => {
                write!(f, "surface={}", if *orientable { "orientable" } else { "nonorientable" })
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Verdict<R> {
    pub law: Law,
    pub witnesses: Vec<Witness<R>>,
}

impl<R> Verdict<R> {
    fn new(law: Law, witnesses: Vec<Witness<R>>) -> Self {
        Verdict { law, witnesses }
    }

    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LawReport<R> {
    pub mode: Mode,
    pub faces: usize,
    pub verdicts: Vec<Verdict<R>>,
}

impl<R: Residue> LawReport<R> {
    pub fn passed(&self) -> bool {
        self.verdicts.iter().all(Verdict::passed)
    }

    pub fn verdict(&self, law: Law) -> &Verdict<R> {
        self.verdicts.iter().find(|v| v.law == law).expect("every law is evaluated")
    }

    pub fn failed_laws(&self) -> Vec<Law> {
        self.verdicts.iter().filter(|v| !v.passed()).map(|v| v.law).collect()
    }
}

/// At most this many witnesses are printed per law.
const SHOWN_WITNESSES: usize = 8;

impl<R: Residue> fmt::Display for LawReport<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.verdicts {
            write!(f, "{} ", v.law.label(self.mode))?;
            if v.passed() {
                writeln!(f, "PASS")?;
                continue;
            }
            write!(f, "FAIL")?;
            for w in v.witnesses.iter().take(SHOWN_WITNESSES) {
                write!(f, " [{w}]")?;
            }
            if v.witnesses.len() > SHOWN_WITNESSES {
                write!(f, " (+{} more)", v.witnesses.len() - SHOWN_WITNESSES)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Sum of the currents entering `v`, i.e. minus the sum over darts leaving it.
pub fn excess<R: Residue>(g: &CurrentGraph<R>, v: usize) -> GroupElement<R> {
    let group = g.group();
    let out = g
        .embedding()
        .rotation(v)
        .iter()
        .fold(group.identity(), |acc, &d| group.add_unchecked(&acc, &g.current(d)));
    group.negate(&out)
}

pub fn check_degrees<R: Residue>(g: &CurrentGraph<R>) -> Verdict<R> {
    let witnesses = (0..g.vertex_count())
        .filter_map(|v| {
            let degree = g.embedding().degree(v);
            (degree != 1 && degree != 3).then(|| Witness::Degree {
                vertex: g.vertex_id(v),
                degree,
            })
        })
        .collect();
    Verdict::new(Law::Degrees, witnesses)
}

pub fn check_kcl<R: Residue>(g: &CurrentGraph<R>) -> Verdict<R> {
    let witnesses = (0..g.vertex_count())
        .filter(|&v| g.embedding().degree(v) == 3)
        .filter_map(|v| {
            let excess = excess(g, v);
            (!g.group().is_identity(&excess)).then(|| Witness::Excess {
                vertex: g.vertex_id(v),
                excess,
            })
        })
        .collect();
    Verdict::new(Law::Kirchhoff, witnesses)
}

pub fn check_vortices<R: Residue>(g: &CurrentGraph<R>) -> Verdict<R> {
    let witnesses = (0..g.vertex_count())
        .filter(|&v| g.embedding().degree(v) == 1)
        .filter_map(|v| {
            let excess = excess(g, v);
            let order = g.group().element_order(&excess);
            (order != 2 && order != 3).then(|| Witness::VortexOrder {
                vertex: g.vertex_id(v),
                excess,
                order,
            })
        })
        .collect();
    Verdict::new(Law::Vortices, witnesses)
}

/// Each face log, as a multiset, must equal the nonzero group elements.
pub fn check_logs<R: Residue>(g: &CurrentGraph<R>, walks: &[FaceWalk]) -> Verdict<R> {
    let group = g.group();
    let mut witnesses = Vec::new();
    for (face, walk) in walks.iter().enumerate() {
        let mut counts = vec![0usize; group.order()];
        for value in face_log(walk, g).values() {
            counts[group.index_of(value)] += 1;
        }
        for (i, &count) in counts.iter().enumerate() {
            let element = group.from_index(i);
            if i == 0 {
                if count > 0 {
                    witnesses.push(Witness::Repeated { face, element, count });
                }
            } else if count == 0 {
                witnesses.push(Witness::Missing { face, element });
            } else if count > 1 {
                witnesses.push(Witness::Repeated { face, element, count });
            }
        }
    }
    Verdict::new(Law::Logs, witnesses)
}

/// C5 for cascades, C5' for index-2 graphs. `walks` must come from
/// [`face_walks`] for the same mode.
pub fn check_parity<R: Residue>(g: &CurrentGraph<R>, mode: Mode, walks: &[FaceWalk]) -> Verdict<R> {
    let group = g.group();
    if !group.has_parity() {
        return Verdict::new(Law::Parity, vec![]);
    }
    let emb = g.embedding();
    let mut witnesses = Vec::new();
    let directions = classify_edges(emb, walks);
    let traversals = edge_traversals(emb, walks);
    for e in 0..g.edge_count() {
        let current = g.edge_current(e).clone();
        let odd = !group.is_even(&current).unwrap();
        let shared = match mode {
            Mode::Cascade => directions[e] == Direction::Unidirectional,
            Mode::Index2 => traversals[e][0].0 != traversals[e][1].0,
        };
        if mode == Mode::Index2 && directions[e] == Direction::Unidirectional {
            witnesses.push(Witness::NotBidirectional { edge: g.edge_id(e) });
        }
        if odd != shared {
            witnesses.push(Witness::Parity {
                edge: g.edge_id(e),
                current,
                odd,
                shared,
            });
        }
    }
    Verdict::new(Law::Parity, witnesses)
}

/// Face walks as the mode reads them: for index 2 on an orientable surface
/// the walks are consistently oriented; otherwise plain traced walks.
pub fn face_walks<R: Residue>(g: &CurrentGraph<R>, mode: Mode) -> Vec<FaceWalk> {
    match mode {
        Mode::Index2 => tracer::oriented_faces(g.embedding()).unwrap_or_else(|| tracer::trace_faces(g.embedding())),
        Mode::Cascade => tracer::trace_faces(g.embedding()),
    }
}

pub fn check<R: Residue>(g: &CurrentGraph<R>, mode: Mode) -> LawReport<R> {
    let walks = face_walks(g, mode);
    let orientable = tracer::surface_orientable(g.embedding());
    let expected = mode.face_count();
    let index = Verdict::new(
        Law::Index,
        if walks.len() == expected {
            vec![]
        } else {
            vec![Witness::FaceCount {
                found: walks.len(),
                expected,
            }]
        },
    );
    let surface_ok = match mode {
        Mode::Cascade => !orientable,
        Mode::Index2 => orientable,
    };
    let surface = Verdict::new(
        Law::Surface,
        if surface_ok { vec![] } else { vec![Witness::Surface { orientable }] },
    );
    LawReport {
        mode,
        faces: walks.len(),
        verdicts: vec![
            check_degrees(g),
            check_kcl(g),
            check_vortices(g),
            check_logs(g, &walks),
            check_parity(g, mode, &walks),
            index,
            surface,
        ],
    }
}
