//! Ladder scaffolds and a backtracking search for current assignments.
//!
//! A scaffold is a closed two-rail ladder: `columns` rungs joining a top and a
//! bottom rail, the rails closed into cycles (prism) or crossed over at the
//! seam (Mobius). The first `rungs` columns form the fixed ladder: their rung
//! currents are `(0, start), (0, start+1), ...` with alternating direction and
//! their vertices alternate clockwise/counterclockwise in a checkerboard. The
//! remaining columns are the end gadget, whose rotations (and, for cascades,
//! edge signatures) are chosen by the search. An optional tail ladder fixes
//! the last few columns the same way with the checkerboard shifted by one
//! column; in index 2 a single checkerboard ladder feeds three of its four
//! strands to one face, and a tail of the other phase evens that out. Each
//! vortex is a pendant vertex hung from a new vertex that subdivides a gadget
//! rail edge.
//!
//! The search runs in two phases. Phase one picks an embedding and keeps it
//! only if its faces have the shape a solution needs: the right face count,
//! every face of length `|G|`, and a parity pattern compatible with Kirchhoff's
//! law. Phase two assigns currents edge by edge, forcing the third current at
//! each trivalent vertex and rejecting any repeated log entry; large
//! problems use a tabu local search over the same variables instead.

use std::fmt;
use std::time::{Duration, Instant};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::group::{GroupElement, GroupSpec, GroupTable};
use crate::laws::{self, Mode};
use crate::model::{CurrentGraph, Dart, Embedding, GraphBuilder, Sign};
use crate::tracer::{classify_edges, edge_traversals, trace_faces, Behavior, Direction, FaceWalk};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScaffoldError {
    #[error("s must be at least 1")]
    ZeroS,
    #[error("{mode} scaffolds need {parity} s, got s = {s}")]
    WrongParity { mode: Mode, parity: &'static str, s: u32 },
    #[error("handshake fails: {trivalent} trivalent vertices minus {vortices} subdividers is odd or negative")]
    Handshake { trivalent: i64, vortices: usize },
    #[error("{rungs} fixed rungs leave no gadget columns out of {columns}")]
    TooManyRungs { rungs: usize, columns: usize },
    #[error("vortex slot at column {column} is outside the gadget columns {first}..{columns}")]
    SlotOutsideGadget { column: usize, first: usize, columns: usize },
    #[error("end shape has {found} vortices of order {order}, {mode} needs {needed}")]
    VortexProfile { mode: Mode, order: u8, found: usize, needed: usize },
    #[error("current group too large for lookup tables")]
    GroupTooLarge,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search space exhausted without a solution ({embeddings} embeddings, {nodes} nodes)")]
    NoSolution { embeddings: u64, nodes: u64 },
    #[error("budget of {budget:?} exhausted without a solution ({embeddings} embeddings, {nodes} nodes)")]
    BudgetExhausted { budget: Duration, embeddings: u64, nodes: u64 },
    #[error("emitted graph fails its laws:\n{0}")]
    Unsound(String),
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Closure {
    Prism,
    Mobius,
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Rail {
    Top,
    Bottom,
}

/// Required order of a vortex's excess.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum VortexKind {
    Involution,
    Triple,
}

impl VortexKind {
    pub fn order(self) -> u32 {
        match self {
            VortexKind::Involution => 2,
            VortexKind::Triple => 3,
        }
    }
}

/// A vortex subdividing the rail edge from `column` to the next column.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct VortexSlot {
    pub rail: Rail,
    pub column: usize,
    pub kind: VortexKind,
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct EndShape {
    pub closure: Closure,
    pub vortices: Vec<VortexSlot>,
}

impl fmt::Display for EndShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.closure)?;
        for v in &self.vortices {
            let rail = match v.rail {
                Rail::Top => 't',
                Rail::Bottom => 'b',
            };
            write!(f, " {}{}@{}", v.kind.order(), rail, v.column)?;
        }
        Ok(())
    }
}

/// Vortex orders the construction needs: a cascade has one involution vortex
/// and two order-3 vortices; an index-2 graph needs an involution vortex in
/// each face, and four order-3 vortices to make the vertex count divisible.
pub fn vortex_profile(mode: Mode) -> Vec<VortexKind> {
    use VortexKind::*;
    match mode {
        Mode::Cascade => vec![Involution, Triple, Triple],
        Mode::Index2 => vec![Involution, Involution, Triple, Triple, Triple, Triple],
    }
}

/// Number of ladder columns for `K(36s)` in the given mode.
pub fn column_count(s: u32, mode: Mode) -> Result<usize, ScaffoldError> {
    let order = 36 * s as i64;
    let vortices = vortex_profile(mode).len();
    let (edges2, v1) = match mode {
        Mode::Cascade => (order, vortices as i64),
        Mode::Index2 => (2 * order, vortices as i64),
    };
    let trivalent = (edges2 - v1) / 3;
    let rest = trivalent - vortices as i64;
    if (edges2 - v1) % 3 != 0 || rest < 6 || rest % 2 != 0 {
        return Err(ScaffoldError::Handshake { trivalent, vortices });
    }
    Ok((rest / 2) as usize)
}

impl EndShape {
    /// A small catalog of gadget shapes: both closures, with the vortices
    /// spread over the gadget columns in a few patterns.
    pub fn catalog(mode: Mode, columns: usize, rungs: usize) -> Vec<EndShape> {
        Self::catalog_span(mode, rungs..columns)
    }

    /// Catalog with vortices confined to the given gadget columns.
    pub fn catalog_span(mode: Mode, gadget: std::ops::Range<usize>) -> Vec<EndShape> {
        let kinds = vortex_profile(mode);
        let gadget: Vec<usize> = gadget.collect();
        let mut shapes = Vec::new();
        let patterns: [fn(usize, usize) -> (Rail, usize); 4] = [
            // all on top, consecutive
            |i, _| (Rail::Top, i),
            // alternating rails, consecutive columns
            |i, _| (if i % 2 == 0 { Rail::Top } else { Rail::Bottom }, i),
            // alternating rails, paired columns
            |i, _| (if i % 2 == 0 { Rail::Top } else { Rail::Bottom }, i / 2),
            // spread out
            |i, n| (if i % 2 == 0 { Rail::Bottom } else { Rail::Top }, i * n / 6),
        ];
        for closure in [Closure::Prism, Closure::Mobius] {
            for pattern in patterns {
                let vortices = kinds
                    .iter()
                    .enumerate()
                    .map(|(i, &kind)| {
                        let (rail, offset) = pattern(i, gadget.len());
                        VortexSlot {
                            rail,
                            column: gadget[offset.min(gadget.len() - 1)],
                            kind,
                        }
                    })
                    .collect();
                let shape = EndShape { closure, vortices };
                if !shapes.contains(&shape) {
                    shapes.push(shape);
                }
            }
        }
        shapes
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Role {
    /// Fixed-rung ladder vertex.
    Ladder,
    /// End-gadget vertex with a free rotation.
    Gadget,
    Vortex(VortexKind),
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum EdgeKind {
    Rung(usize),
    Rail(Rail),
    Pendant(VortexKind),
}

/// A ladder-shaped current graph with free slots.
#[derive(Clone, Debug)]
pub struct LadderScaffold {
    pub s: u32,
    pub mode: Mode,
    pub columns: usize,
    pub rungs: usize,
    pub rung_start: u32,
    pub tail: Option<TailLadder>,
    pub shape: EndShape,
    group: GroupSpec<u32>,
    table: GroupTable,
    /// Rotations in drawing-clockwise order.
    base: Vec<Vec<Dart>>,
    roles: Vec<Role>,
    edge_kinds: Vec<EdgeKind>,
    /// `Some(true)` = clockwise, i.e. the base order.
    fixed_orientation: Vec<Option<bool>>,
    fixed_signature: Vec<Option<Sign>>,
    fixed_current: Vec<Option<u32>>,
    /// Spanning tree whose fundamental cycles are mostly the ladder squares.
    tree: Vec<bool>,
}

struct TopologyBuilder {
    base: Vec<Vec<Dart>>,
    roles: Vec<Role>,
    edge_kinds: Vec<EdgeKind>,
    ends: Vec<[usize; 2]>,
}

impl TopologyBuilder {
    fn vertex(&mut self, role: Role) -> usize {
        self.base.push(Vec::new());
        self.roles.push(role);
        self.base.len() - 1
    }

    fn edge(&mut self, a: usize, b: usize, kind: EdgeKind) -> usize {
        self.edge_kinds.push(kind);
        self.ends.push([a, b]);
        self.edge_kinds.len() - 1
    }
}

pub fn build_scaffold(s: u32, mode: Mode, rungs: usize, shape: &EndShape) -> Result<LadderScaffold, ScaffoldError> {
    build_scaffold_from(s, mode, rungs, 1, shape)
}

/// A second block of fixed rungs near the far end of the ladder.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub struct TailLadder {
    pub rungs: usize,
    /// Second component of the first tail rung current.
    pub start: u32,
    /// Free columns between the tail and the seam. Strands cross the seam
    /// without turning, so with no gap the tail just extends the head.
    pub gap: usize,
}

/// Builds the scaffold; `rung_start` is the second component of the first
/// fixed rung current.
pub fn build_scaffold_from(
    s: u32,
    mode: Mode,
    rungs: usize,
    rung_start: u32,
    shape: &EndShape,
) -> Result<LadderScaffold, ScaffoldError> {
    build_scaffold_with(s, mode, rungs, rung_start, None, shape)
}

pub fn build_scaffold_with(
    s: u32,
    mode: Mode,
    rungs: usize,
    rung_start: u32,
    tail: Option<TailLadder>,
    shape: &EndShape,
) -> Result<LadderScaffold, ScaffoldError> {
    if s == 0 {
        return Err(ScaffoldError::ZeroS);
    }
    match mode {
        Mode::Cascade if s % 2 == 0 => return Err(ScaffoldError::WrongParity { mode, parity: "odd", s }),
        Mode::Index2 if s % 2 == 1 => return Err(ScaffoldError::WrongParity { mode, parity: "even", s }),
        _ => {}
    }
    let columns = column_count(s, mode)?;
    let tail_span = tail.map_or(0, |t| t.rungs + t.gap);
    if rungs + tail_span >= columns {
        return Err(ScaffoldError::TooManyRungs {
            rungs: rungs + tail_span,
            columns,
        });
    }
    let gadget_end = columns - tail_span;
    // (first column, start, checkerboard shifted)
    let blocks: Vec<(usize, usize, u32, bool)> = std::iter::once((0, rungs, rung_start, false))
        .chain(tail.map(|t| (gadget_end, t.rungs, t.start, true)))
        .filter(|b| b.1 > 0)
        .collect();
    let block_of = |c: usize| blocks.iter().find(|b| c >= b.0 && c < b.0 + b.1).copied();
    let profile = vortex_profile(mode);
    for kind in [VortexKind::Involution, VortexKind::Triple] {
        let needed = profile.iter().filter(|&&k| k == kind).count();
        let found = shape.vortices.iter().filter(|v| v.kind == kind).count();
        if needed != found {
            return Err(ScaffoldError::VortexProfile {
                mode,
                order: kind.order() as u8,
                found,
                needed,
            });
        }
    }
    if let Some(slot) = shape.vortices.iter().find(|v| v.column < rungs || v.column >= gadget_end) {
        return Err(ScaffoldError::SlotOutsideGadget {
            column: slot.column,
            first: rungs,
            columns: gadget_end,
        });
    }
    let group = GroupSpec::z3_z12s(s).map_err(|_| ScaffoldError::GroupTooLarge)?;
    let table = GroupTable::new(&group).ok_or(ScaffoldError::GroupTooLarge)?;

    let mut t = TopologyBuilder {
        base: Vec::new(),
        roles: Vec::new(),
        edge_kinds: Vec::new(),
        ends: Vec::new(),
    };
    let role = |c: usize| if block_of(c).is_some() { Role::Ladder } else { Role::Gadget };
    let top: Vec<usize> = (0..columns).map(|c| t.vertex(role(c))).collect();
    let bottom: Vec<usize> = (0..columns).map(|c| t.vertex(role(c))).collect();

    // Rungs first, so edge indices run along the ladder.
    let mut rung_edges = Vec::new();
    for c in 0..columns {
        // even rungs point down, odd rungs point up
        let (a, b) = if c % 2 == 0 { (top[c], bottom[c]) } else { (bottom[c], top[c]) };
        rung_edges.push(t.edge(a, b, EdgeKind::Rung(c)));
    }
    // Rail segments: (rail, column) -> chain of vertices from column c to c+1.
    // Each vertex gets its darts in drawing-clockwise order once all edges
    // exist, so record (vertex, neighbor direction) tags first.
    #[derive(Clone, Copy)]
    enum Dir {
        Left,
        Right,
        Up,
        Down,
    }
    let mut tags: Vec<Vec<(Dir, Dart)>> = vec![Vec::new(); 2 * columns];
    let mut chains: Vec<usize> = Vec::new();
    let mut seam: Vec<usize> = Vec::new();
    for (c, &e) in rung_edges.iter().enumerate() {
        let down_end = if c % 2 == 0 { 0 } else { 1 }; // end sitting at top
        tags[top[c]].push((Dir::Down, Dart::new(e, down_end)));
        tags[bottom[c]].push((Dir::Up, Dart::new(e, 1 - down_end)));
    }
    for rail in [Rail::Top, Rail::Bottom] {
        for c in 0..columns {
            let (from, to) = match (rail, c + 1 == columns, shape.closure) {
                (Rail::Top, false, _) => (top[c], top[c + 1]),
                (Rail::Bottom, false, _) => (bottom[c], bottom[c + 1]),
                (Rail::Top, true, Closure::Prism) => (top[c], top[0]),
                (Rail::Bottom, true, Closure::Prism) => (bottom[c], bottom[0]),
                (Rail::Top, true, Closure::Mobius) => (top[c], bottom[0]),
                (Rail::Bottom, true, Closure::Mobius) => (bottom[c], top[0]),
            };
            let slots: Vec<VortexKind> = shape
                .vortices
                .iter()
                .filter(|v| v.rail == rail && v.column == c)
                .map(|v| v.kind)
                .collect();
            let mut prev = from;
            let mut chain = Vec::new();
            for kind in slots {
                let sub = t.vertex(Role::Gadget);
                tags.push(Vec::new());
                let pend = t.vertex(Role::Vortex(kind));
                tags.push(Vec::new());
                let seg = t.edge(prev, sub, EdgeKind::Rail(rail));
                chain.push(seg);
                tags[prev].push((Dir::Right, Dart::new(seg, 0)));
                tags[sub].push((Dir::Left, Dart::new(seg, 1)));
                let p = t.edge(sub, pend, EdgeKind::Pendant(kind));
                let outward = if rail == Rail::Top { Dir::Up } else { Dir::Down };
                tags[sub].push((outward, Dart::new(p, 0)));
                tags[pend].push((Dir::Down, Dart::new(p, 1)));
                prev = sub;
            }
            let seg = t.edge(prev, to, EdgeKind::Rail(rail));
            if c + 1 == columns {
                seam.push(seg);
            }
            tags[prev].push((Dir::Right, Dart::new(seg, 0)));
            tags[to].push((Dir::Left, Dart::new(seg, 1)));
            // comb tree: rungs, the open bottom rail, and every rail chain
            // but its last segment
            if rail == Rail::Bottom && c + 1 < columns {
                chain.push(seg);
            }
            chains.extend(chain);
        }
    }
    // Clockwise in the drawing: right, down, left, up.
    for (v, list) in tags.into_iter().enumerate() {
        let mut list = list;
        list.sort_by_key(|(dir, _)| match dir {
            Dir::Right => 0,
            Dir::Down => 1,
            Dir::Left => 2,
            Dir::Up => 3,
        });
        t.base[v] = list.into_iter().map(|(_, d)| d).collect();
    }

    let vertex_count = t.base.len();
    let edge_count = t.edge_kinds.len();
    let mut tree = vec![false; edge_count];
    for (e, kind) in t.edge_kinds.iter().enumerate() {
        if matches!(kind, EdgeKind::Rung(_) | EdgeKind::Pendant(_)) {
            tree[e] = true;
        }
    }
    for &e in &chains {
        tree[e] = true;
    }
    debug_assert_eq!(tree.iter().filter(|&&b| b).count() + 1, vertex_count);
    let mut fixed_orientation = vec![None; vertex_count];
    for c in 0..columns {
        if let Some((_, _, _, shifted)) = block_of(c) {
            fixed_orientation[top[c]] = Some((c % 2 == 0) != shifted);
            fixed_orientation[bottom[c]] = Some((c % 2 == 1) != shifted);
        }
    }
    for (v, r) in t.roles.iter().enumerate() {
        if matches!(r, Role::Vortex(_)) {
            fixed_orientation[v] = Some(true);
        }
    }
    let mut fixed_signature = vec![None; edge_count];
    let mut fixed_current = vec![None; edge_count];
    for (e, kind) in t.edge_kinds.iter().enumerate() {
        let [a, b] = t.ends[e];
        let ladder_edge = t.roles[a] == Role::Ladder && t.roles[b] == Role::Ladder && !seam.contains(&e);
        if mode == Mode::Index2 || ladder_edge {
            fixed_signature[e] = Some(Sign::Plus);
        }
        if let EdgeKind::Rung(c) = *kind {
            if let Some((first, _, start, _)) = block_of(c) {
                let b = (start as u64 + (c - first) as u64) % (12 * s as u64);
                fixed_current[e] = Some(group.index_of(&group.element(&[0, b as i64]).unwrap()) as u32);
            }
        }
    }
    // Gauge: every gadget or vortex vertex keeps one incident edge at +1
    // along a spanning forest grown from the fixed part, since flipping that
    // vertex would otherwise reproduce the same embedding.
    if mode == Mode::Cascade {
        let mut reached: Vec<bool> = t.roles.iter().map(|r| *r == Role::Ladder).collect();
        let mut queue: std::collections::VecDeque<usize> = (0..vertex_count).filter(|&v| reached[v]).collect();
        if queue.is_empty() {
            // no fixed vertex: fix the first gadget vertex's rotation instead
            reached[0] = true;
            fixed_orientation[0] = Some(true);
            queue.push_back(0);
        }
        while let Some(u) = queue.pop_front() {
            for d in t.base[u].clone() {
                let e = d.edge();
                let w = t.ends[e][1 - d.end as usize];
                if !reached[w] {
                    reached[w] = true;
                    fixed_signature[e] = Some(Sign::Plus);
                    queue.push_back(w);
                }
            }
        }
    }
    Ok(LadderScaffold {
        s,
        mode,
        columns,
        rungs,
        rung_start,
        tail,
        shape: shape.clone(),
        group,
        table,
        base: t.base,
        roles: t.roles,
        edge_kinds: t.edge_kinds,
        fixed_orientation,
        fixed_signature,
        fixed_current,
        tree,
    })
}

impl LadderScaffold {
    pub fn group(&self) -> &GroupSpec<u32> {
        &self.group
    }

    pub fn vertex_count(&self) -> usize {
        self.base.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_kinds.len()
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn edge_kinds(&self) -> &[EdgeKind] {
        &self.edge_kinds
    }

    pub fn degree(&self, v: usize) -> usize {
        self.base[v].len()
    }

    /// Fixed rung currents as group elements, in column order.
    pub fn rung_currents(&self) -> Vec<GroupElement<u32>> {
        self.fixed_current
            .iter()
            .flatten()
            .map(|&i| self.group.from_index(i as usize))
            .collect()
    }

    pub fn fixed_current(&self, e: usize) -> Option<GroupElement<u32>> {
        self.fixed_current[e].map(|i| self.group.from_index(i as usize))
    }

    pub fn fixed_orientation(&self, v: usize) -> Option<bool> {
        self.fixed_orientation[v]
    }

    /// Vertices whose rotation the search chooses.
    pub fn free_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| self.fixed_orientation[v].is_none())
            .collect()
    }

    /// Edges whose signature the search chooses.
    pub fn free_signatures(&self) -> Vec<usize> {
        (0..self.edge_count())
            .filter(|&e| self.fixed_signature[e].is_none())
            .collect()
    }

    pub fn free_bits(&self) -> usize {
        self.free_vertices().len() + self.free_signatures().len()
    }

    /// Embedding for one choice of free bits: vertex orientations first
    /// (`true` = clockwise), then signatures (`true` = -1).
    pub fn embedding(&self, bits: &[bool]) -> Embedding {
        let free_v = self.free_vertices();
        let free_e = self.free_signatures();
        assert_eq!(bits.len(), free_v.len() + free_e.len());
        let mut cw: Vec<bool> = self.fixed_orientation.iter().map(|o| o.unwrap_or(true)).collect();
        for (&v, &b) in free_v.iter().zip(bits) {
            cw[v] = b;
        }
        let rotations = self
            .base
            .iter()
            .zip(&cw)
            .map(|(rot, &cw)| {
                let mut r = rot.clone();
                if !cw {
                    r.reverse();
                }
                r
            })
            .collect();
        let mut signatures: Vec<Sign> = self.fixed_signature.iter().map(|s| s.unwrap_or(Sign::Plus)).collect();
        for (&e, &b) in free_e.iter().zip(&bits[free_v.len()..]) {
            signatures[e] = if b { Sign::Minus } else { Sign::Plus };
        }
        Embedding::new(rotations, signatures).expect("scaffold topology is valid")
    }

    /// Assembles a current graph from an embedding and end-0 currents.
    pub fn to_graph(&self, emb: &Embedding, currents: &[u32]) -> CurrentGraph<u32> {
        let mut b = GraphBuilder::new(self.group.clone()).index(self.mode.face_count() as u8);
        for v in 0..emb.vertex_count() {
            b.vertex(
                v as u64 + 1,
                emb.rotation(v).iter().map(|d| (d.edge as u64 + 1, d.end)).collect(),
            );
        }
        for (e, &c) in currents.iter().enumerate() {
            b.edge(e as u64 + 1, emb.signature(e), self.group.from_index(c as usize));
        }
        b.build().expect("scaffold graphs are structurally valid")
    }

    /// Phase-one analysis of an embedding; `None` if no current assignment
    /// can satisfy the laws on it.
    pub fn face_shape(&self, emb: &Embedding, even_only: bool) -> Option<FaceShape> {
        let (defect, shape) = self.shape_defect(emb, even_only);
        if defect == 0 {
            shape
        } else {
            None
        }
    }

    /// How far an embedding is from passing phase one; zero exactly when
    /// [`face_shape`](Self::face_shape) accepts it.
    pub fn shape_defect(&self, emb: &Embedding, even_only: bool) -> (usize, Option<FaceShape>) {
        let order = self.table.order();
        let faces = self.mode.face_count();
        let walks = trace_faces(emb);
        if walks.len() != faces {
            return (1000 + 100 * walks.len().abs_diff(faces), None);
        }
        let mut defect: usize = walks.iter().map(|w| w.len().abs_diff(order)).sum::<usize>();
        let traversals = edge_traversals(emb, &walks);
        let directions = classify_edges(emb, &walks);
        let odd: Vec<bool> = (0..emb.edge_count())
            .map(|e| match self.mode {
                Mode::Cascade => directions[e] == Direction::Unidirectional,
                Mode::Index2 => traversals[e][0].0 != traversals[e][1].0,
            })
            .collect();
        let odd_count = odd.iter().filter(|&&o| o).count();
        let expected_odd = match self.mode {
            Mode::Cascade => order / 4,
            Mode::Index2 => order / 2,
        };
        defect += odd_count.abs_diff(expected_odd);
        if even_only {
            defect += odd_count;
        }
        defect += (0..emb.vertex_count())
            .filter(|&v| emb.degree(v) == 3 && emb.rotation(v).iter().filter(|d| odd[d.edge()]).count() % 2 == 1)
            .count();
        defect += self
            .fixed_current
            .iter()
            .enumerate()
            .filter(|(e, c)| c.is_some_and(|c| self.table.is_even(c) == odd[*e]))
            .count();
        // one involution vortex per face
        let mut per_face = vec![0usize; walks.len()];
        for (e, kind) in self.edge_kinds.iter().enumerate() {
            if *kind == EdgeKind::Pendant(VortexKind::Involution) {
                per_face[traversals[e][0].0] += 1;
            }
        }
        defect += 4 * per_face.iter().map(|&n| n.abs_diff(1)).sum::<usize>();
        (defect, Some(FaceShape { walks, odd }))
    }

    /// Simulated annealing over the free bits towards a zero-defect
    /// embedding.
    pub fn anneal(&self, rng: &mut impl Rng, steps: usize, even_only: bool) -> Option<Vec<bool>> {
        let n = self.free_bits();
        let mut bits: Vec<bool> = (0..n).map(|_| rng.gen()).collect();
        if n == 0 {
            return (self.shape_defect(&self.embedding(&bits), even_only).0 == 0).then_some(bits);
        }
        let mut cost = self.shape_defect(&self.embedding(&bits), even_only).0;
        for step in 0..steps {
            if cost == 0 {
                return Some(bits);
            }
            let temperature = 3.0 * (1.0 - step as f64 / steps as f64) + 0.05;
            let i = rng.gen_range(0..n);
            bits[i] = !bits[i];
            let c = self.shape_defect(&self.embedding(&bits), even_only).0;
            if c <= cost || rng.gen::<f64>() < (-((c - cost) as f64) / temperature).exp() {
                cost = c;
            } else {
                bits[i] = !bits[i];
            }
        }
        (cost == 0).then_some(bits)
    }
}

/// Faces of an embedding that passed phase one, with the edges that must carry
/// odd currents.
#[derive(Clone, Debug)]
pub struct FaceShape {
    pub walks: Vec<FaceWalk>,
    pub odd: Vec<bool>,
}

#[derive(Clone, Debug)]
pub struct SearchConstraints {
    pub mode: Mode,
    pub budget: Duration,
    /// Stop after this many solutions; `None` collects all.
    pub max_solutions: Option<usize>,
    pub seed: u64,
    /// Restrict every current to the even subgroup.
    pub even_only: bool,
    /// Backtracking nodes per embedding before moving on; `None` is exhaustive.
    pub node_limit: Option<u64>,
    /// Embeddings to examine; exhaustive enumeration is used when the free
    /// bits allow it and this is `None`.
    pub max_embeddings: Option<u64>,
    /// Only emit one of each pair of solutions related by negating all
    /// currents (applies when no current is fixed).
    pub quotient_negation: bool,
    /// Shuffle value orders per embedding with `seed`.
    pub shuffle: bool,
    pub strategy: Strategy,
    /// Steps per embedding for the local search.
    pub tabu_steps: u64,
}

/// How phase two looks for currents on a viable embedding.
#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum Strategy {
    /// Depth-first search with forcing; exhaustive within the node limit.
    Backtrack,
    /// Tabu local search over the branching currents; finds at most one
    /// solution per embedding and never proves absence.
    Local,
    /// Backtrack when at most `AUTO_BRANCHES` currents are free, else local search.
    Auto,
}

const AUTO_BRANCHES: usize = 12;

impl SearchConstraints {
    pub fn new(mode: Mode) -> Self {
        SearchConstraints {
            mode,
            budget: Duration::from_secs(600),
            max_solutions: Some(1),
            seed: 0,
            even_only: false,
            node_limit: Some(2_000_000),
            max_embeddings: None,
            quotient_negation: true,
            shuffle: true,
            strategy: Strategy::Auto,
            tabu_steps: 3000,
        }
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Debug)]
pub enum SearchStatus {
    Complete,
    BudgetExhausted,
    LimitReached,
}

#[derive(Clone, Debug)]
pub struct Solution {
    /// Candidate embedding number that produced it.
    pub embedding: u64,
    pub graph: CurrentGraph<u32>,
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub solutions: Vec<Solution>,
    pub status: SearchStatus,
    pub embeddings: u64,
    pub viable_embeddings: u64,
    pub nodes: u64,
}

/// Largest free-bit count enumerated exhaustively.
const EXHAUSTIVE_BITS: usize = 22;
const BATCH: u64 = 64;
const ANNEAL_STEPS: usize = 20_000;

pub fn search(scaffold: &LadderScaffold, constraints: &SearchConstraints) -> Result<SearchOutcome, SearchError> {
    let start = Instant::now();
    let deadline = start + constraints.budget;
    let bits = scaffold.free_bits();
    let exhaustive = bits <= EXHAUSTIVE_BITS;
    let total: u64 = match (exhaustive, constraints.max_embeddings) {
        (true, Some(m)) => m.min(1u64 << bits),
        (true, None) => 1u64 << bits,
        (false, Some(m)) => m,
        (false, None) => u64::MAX,
    };
    let mut solutions = Vec::new();
    let mut nodes = 0u64;
    let mut viable = 0u64;
    let mut next = 0u64;
    let mut status = SearchStatus::Complete;
    while next < total {
        if Instant::now() >= deadline {
            status = SearchStatus::BudgetExhausted;
            break;
        }
        let end = (next + BATCH).min(total);
        let results: Vec<CandidateResult> = (next..end)
            .into_par_iter()
            .map(|k| {
                let choice = if exhaustive {
                    (0..bits).map(|i| (k >> i) & 1 == 1).collect()
                } else {
                    let mut rng = ChaCha8Rng::seed_from_u64(constraints.seed ^ k.wrapping_mul(0x9E37_79B9_7F4A_7C15));
                    match scaffold.anneal(&mut rng, ANNEAL_STEPS, constraints.even_only) {
                        Some(bits) => bits,
                        None => return CandidateResult::empty(k),
                    }
                };
                solve_candidate(scaffold, constraints, k, &choice, deadline)
            })
            .collect();
        next = end;
        let mut timed_out = false;
        for r in results {
            nodes += r.nodes;
            viable += r.viable as u64;
            timed_out |= r.timed_out;
            for graph in r.solutions {
                let report = laws::check(&graph, constraints.mode);
                if !report.passed() {
                    return Err(SearchError::Unsound(report.to_string()));
                }
                solutions.push(Solution { embedding: r.index, graph });
            }
        }
        if let Some(max) = constraints.max_solutions {
            if solutions.len() >= max {
                solutions.truncate(max);
                status = if next < total { SearchStatus::LimitReached } else { SearchStatus::Complete };
                break;
            }
        }
        if timed_out {
            status = SearchStatus::BudgetExhausted;
            break;
        }
    }
    if solutions.is_empty() {
        return Err(match status {
            SearchStatus::BudgetExhausted => SearchError::BudgetExhausted {
                budget: constraints.budget,
                embeddings: next,
                nodes,
            },
            _ => SearchError::NoSolution { embeddings: next, nodes },
        });
    }
    Ok(SearchOutcome {
        solutions,
        status,
        embeddings: next,
        viable_embeddings: viable,
        nodes,
    })
}

struct CandidateResult {
    index: u64,
    solutions: Vec<CurrentGraph<u32>>,
    nodes: u64,
    viable: bool,
    timed_out: bool,
}

impl CandidateResult {
    fn empty(index: u64) -> Self {
        CandidateResult {
            index,
            solutions: Vec::new(),
            nodes: 0,
            viable: false,
            timed_out: false,
        }
    }
}

fn solve_candidate(
    scaffold: &LadderScaffold,
    constraints: &SearchConstraints,
    index: u64,
    choice: &[bool],
    deadline: Instant,
) -> CandidateResult {
    let emb = scaffold.embedding(choice);
    let mut result = CandidateResult {
        index,
        solutions: Vec::new(),
        nodes: 0,
        viable: false,
        timed_out: false,
    };
    let Some(shape) = scaffold.face_shape(&emb, constraints.even_only) else {
        return result;
    };
    result.viable = true;
    let mut rng = ChaCha8Rng::seed_from_u64(constraints.seed.wrapping_add(index.wrapping_mul(0xD1B5_4A32_D192_ED03)));
    let mut problem = CurrentProblem::new(scaffold, &emb, &shape, constraints, false);
    let anneal = match constraints.strategy {
        Strategy::Backtrack => false,
        Strategy::Local => true,
        Strategy::Auto => problem.levels.len() > AUTO_BRANCHES,
    };
    if anneal {
        problem = CurrentProblem::new(scaffold, &emb, &shape, constraints, true);
    }
    let found = if anneal {
        problem.tabu(&mut rng, constraints.tabu_steps, deadline)
    } else {
        if constraints.shuffle {
            problem.shuffle(&mut rng);
        }
        problem.run(constraints.node_limit, constraints.max_solutions, deadline)
    };
    result.nodes = problem.nodes;
    result.timed_out = problem.timed_out;
    result.solutions = found.into_iter().map(|c| scaffold.to_graph(&emb, &c)).collect();
    result
}

#[derive(Clone, Copy, Debug)]
enum Op {
    Force { edge: usize, vertex: usize },
    Check { vertex: usize },
}

#[derive(Clone, Debug)]
struct Level {
    edge: usize,
    domain: Vec<u32>,
    ops: Vec<Op>,
}

/// Phase two: the current-assignment CSP on one embedding.
struct CurrentProblem<'a> {
    table: &'a GroupTable,
    faces: usize,
    /// Per edge: (face, +1/-1) for each of its two log entries.
    entries: Vec<[(usize, bool); 2]>,
    /// Per edge: allowed values (indexed by element).
    allowed: Vec<Vec<bool>>,
    /// Per vertex: (edge, positive) for each dart, trivalent vertices only.
    incidence: Vec<Vec<(usize, bool)>>,
    prelude: Vec<(usize, u32)>,
    prelude_ops: Vec<Op>,
    levels: Vec<Level>,
    nodes: u64,
    timed_out: bool,
}

fn signed(table: &GroupTable, x: u32, positive: bool) -> u32 {
    if positive {
        x
    } else {
        table.neg(x)
    }
}

impl<'a> CurrentProblem<'a> {
    fn new(
        scaffold: &'a LadderScaffold,
        emb: &Embedding,
        shape: &FaceShape,
        constraints: &SearchConstraints,
        local: bool,
    ) -> Self {
        let table = &scaffold.table;
        let order = table.order();
        let m = emb.edge_count();
        let mut entries = vec![[(0usize, true); 2]; m];
        let mut filled = vec![0usize; m];
        for (f, walk) in shape.walks.iter().enumerate() {
            for step in walk.steps() {
                let e = step.dart.edge();
                let arc_positive = step.dart.end == 0 || emb.signature(e) == Sign::Minus;
                let positive = arc_positive == (step.behavior == Behavior::Normal);
                entries[e][filled[e]] = (f, positive);
                filled[e] += 1;
            }
        }
        let involution = (0..order as u32).find(|&x| table.element_order(x) == 2);
        let allowed: Vec<Vec<bool>> = (0..m)
            .map(|e| {
                (0..order as u32)
                    .map(|x| {
                        if x == 0 || table.is_even(x) == shape.odd[e] {
                            return false;
                        }
                        if constraints.even_only && !table.is_even(x) {
                            return false;
                        }
                        match scaffold.edge_kinds[e] {
                            EdgeKind::Pendant(kind) => table.element_order(x) == kind.order(),
                            _ => Some(x) != involution,
                        }
                    })
                    .collect()
            })
            .collect();
        let incidence: Vec<Vec<(usize, bool)>> = (0..emb.vertex_count())
            .map(|v| {
                if emb.degree(v) != 3 {
                    return Vec::new();
                }
                emb.rotation(v)
                    .iter()
                    .map(|d| (d.edge(), d.end == 0 || emb.signature(d.edge()) == Sign::Minus))
                    .collect()
            })
            .collect();
        // edge -> trivalent vertices it touches (with multiplicity for loops)
        let mut touches: Vec<Vec<usize>> = vec![Vec::new(); m];
        for (v, inc) in incidence.iter().enumerate() {
            for &(e, _) in inc {
                if !touches[e].contains(&v) {
                    touches[e].push(v);
                }
            }
        }
        let mut determined = vec![false; m];
        let mut checked = vec![false; emb.vertex_count()];
        let prelude: Vec<(usize, u32)> = scaffold
            .fixed_current
            .iter()
            .enumerate()
            .filter_map(|(e, c)| c.map(|c| (e, c)))
            .collect();
        for &(e, _) in &prelude {
            determined[e] = true;
        }
        let closure = |determined: &mut Vec<bool>, checked: &mut Vec<bool>, seeds: &[usize]| -> Vec<Op> {
            let mut ops = Vec::new();
            let mut stack: Vec<usize> = seeds.iter().flat_map(|&e| touches[e].iter().copied()).collect();
            while let Some(v) = stack.pop() {
                if checked[v] {
                    continue;
                }
                let open: Vec<usize> = incidence[v].iter().map(|p| p.0).filter(|&e| !determined[e]).collect();
                if open.is_empty() {
                    checked[v] = true;
                    ops.push(Op::Check { vertex: v });
                } else if open.len() == 1 {
                    let e = open[0];
                    determined[e] = true;
                    ops.push(Op::Force { edge: e, vertex: v });
                    checked[v] = true;
                    stack.extend(touches[e].iter().copied());
                }
            }
            ops
        };
        let prelude_edges: Vec<usize> = prelude.iter().map(|p| p.0).collect();
        let prelude_ops = closure(&mut determined, &mut checked, &prelude_edges);
        let mut levels = Vec::new();
        if local {
            // branch on cotree and pendant currents so that each one only
            // moves the currents around its own short cycle
            let branches = (0..m).filter(|&e| !scaffold.tree[e] || matches!(scaffold.edge_kinds[e], EdgeKind::Pendant(_)));
            for e in branches.collect::<Vec<_>>() {
                if determined[e] {
                    continue;
                }
                determined[e] = true;
                let ops = closure(&mut determined, &mut checked, &[e]);
                let domain = (0..order as u32).filter(|&x| allowed[e][x as usize]).collect();
                levels.push(Level { edge: e, domain, ops });
            }
        }
        while determined.iter().any(|d| !d) {
            // branch on the open edge that forces the most, earliest index first
            let mut best: Option<(usize, usize)> = None;
            for e in (0..m).filter(|&e| !determined[e]) {
                let mut det = determined.clone();
                let mut chk = checked.clone();
                det[e] = true;
                let gain = closure(&mut det, &mut chk, &[e]).len();
                if best.map_or(true, |(_, g)| gain > g) {
                    best = Some((e, gain));
                }
            }
            let (e, _) = best.unwrap();
            determined[e] = true;
            let ops = closure(&mut determined, &mut checked, &[e]);
            let domain = (0..order as u32).filter(|&x| allowed[e][x as usize]).collect();
            levels.push(Level { edge: e, domain, ops });
        }
        if constraints.quotient_negation && prelude.is_empty() {
            if let Some(first) = levels.first_mut() {
                first.domain.retain(|&x| x <= table.neg(x));
            }
        }
        CurrentProblem {
            table,
            faces: shape.walks.len(),
            entries,
            allowed,
            incidence,
            prelude,
            prelude_ops,
            levels,
            nodes: 0,
            timed_out: false,
        }
    }

    fn shuffle(&mut self, rng: &mut impl Rng) {
        for level in &mut self.levels {
            level.domain.shuffle(rng);
        }
    }

    fn run(&mut self, node_limit: Option<u64>, max_solutions: Option<usize>, deadline: Instant) -> Vec<Vec<u32>> {
        let m = self.entries.len();
        let mut state = DfsState {
            value: vec![u32::MAX; m],
            used: vec![false; self.faces * self.table.order()],
            trail: Vec::new(),
            solutions: Vec::new(),
        };
        for i in 0..self.prelude.len() {
            let (e, x) = self.prelude[i];
            if !self.assign(&mut state, e, x) {
                return Vec::new();
            }
        }
        let ops = self.prelude_ops.clone();
        if !self.apply_ops(&mut state, &ops) {
            return Vec::new();
        }
        self.dfs(&mut state, 0, node_limit.unwrap_or(u64::MAX), max_solutions.unwrap_or(usize::MAX), deadline);
        state.solutions
    }

    /// Tabu search over the branching currents: forced currents follow the
    /// plan, and the cost counts broken checks, out-of-domain currents and
    /// repeated log entries. Each step takes the best non-tabu single change.
    fn tabu(&mut self, rng: &mut impl Rng, steps: u64, deadline: Instant) -> Vec<Vec<u32>> {
        if self.levels.iter().any(|l| l.domain.is_empty()) {
            return Vec::new();
        }
        let order = self.table.order();
        let mut buf = LocalBuffers {
            value: vec![0; self.entries.len()],
            count: vec![0; self.faces * order],
        };
        let mut choice: Vec<u32> = self.levels.iter().map(|l| *l.domain.choose(rng).unwrap()).collect();
        let mut best = self.conflicts(&choice, &mut buf);
        let mut tabu_until = vec![0u64; choice.len() * order];
        let mut moves: Vec<(usize, usize, u32)> = Vec::new();
        for step in 0..steps {
            if best == 0 {
                break;
            }
            if Instant::now() >= deadline {
                self.timed_out = true;
                return Vec::new();
            }
            moves.clear();
            let mut floor = usize::MAX;
            for i in 0..choice.len() {
                let old = choice[i];
                for &v in &self.levels[i].domain {
                    if v == old {
                        continue;
                    }
                    choice[i] = v;
                    let c = self.conflicts(&choice, &mut buf);
                    self.nodes += 1;
                    if (tabu_until[i * order + v as usize] > step && c >= best) || c > floor {
                        continue;
                    }
                    if c < floor {
                        floor = c;
                        moves.clear();
                    }
                    moves.push((c, i, v));
                }
                choice[i] = old;
            }
            let Some(&(c, i, v)) = moves.choose(rng) else {
                break;
            };
            tabu_until[i * order + choice[i] as usize] = step + rng.gen_range(5..15);
            choice[i] = v;
            best = best.min(c);
            if c == 0 {
                self.conflicts(&choice, &mut buf);
                return vec![buf.value.clone()];
            }
        }
        if best == 0 {
            self.conflicts(&choice, &mut buf);
            return vec![buf.value.clone()];
        }
        Vec::new()
    }

    fn conflicts(&self, choice: &[u32], buf: &mut LocalBuffers) -> usize {
        let mut cost = 0;
        for &(e, x) in &self.prelude {
            buf.value[e] = x;
        }
        cost += self.relaxed_ops(&self.prelude_ops, buf);
        for (level, &x) in self.levels.iter().zip(choice) {
            buf.value[level.edge] = x;
            cost += self.relaxed_ops(&level.ops, buf);
        }
        buf.count.iter_mut().for_each(|c| *c = 0);
        let order = self.table.order();
        for (e, &x) in buf.value.iter().enumerate() {
            if !self.allowed[e][x as usize] {
                cost += 2;
            }
            let [(f0, p0), (f1, p1)] = self.entries[e];
            let a = f0 * order + signed(self.table, x, p0) as usize;
            let b = f1 * order + signed(self.table, x, p1) as usize;
            buf.count[a] += 1;
            if b != a || !self.allowed[e][x as usize] {
                buf.count[b] += 1;
            }
        }
        cost + buf.count.iter().map(|&c| c.saturating_sub(1) as usize).sum::<usize>()
    }

    fn relaxed_ops(&self, ops: &[Op], buf: &mut LocalBuffers) -> usize {
        let mut cost = 0;
        for op in ops {
            match *op {
                Op::Check { vertex } => {
                    if self.flow(&buf.value, vertex, usize::MAX) != 0 {
                        cost += 3;
                    }
                }
                Op::Force { edge, vertex } => {
                    let rest = self.flow(&buf.value, vertex, edge);
                    let positive = self.incidence[vertex].iter().find(|p| p.0 == edge).unwrap().1;
                    buf.value[edge] = if positive { self.table.neg(rest) } else { rest };
                }
            }
        }
        cost
    }

    fn flow(&self, value: &[u32], v: usize, skip: usize) -> u32 {
        let mut sum = 0;
        for &(e, positive) in &self.incidence[v] {
            if e != skip {
                sum = self.table.add(sum, signed(self.table, value[e], positive));
            }
        }
        sum
    }

    /// Returns false when the search must stop.
    fn dfs(&mut self, st: &mut DfsState, depth: usize, limit: u64, max: usize, deadline: Instant) -> bool {
        if depth == self.levels.len() {
            st.solutions.push(st.value.clone());
            return st.solutions.len() < max;
        }
        let e = self.levels[depth].edge;
        for i in 0..self.levels[depth].domain.len() {
            let x = self.levels[depth].domain[i];
            self.nodes += 1;
            if self.nodes >= limit {
                return false;
            }
            if self.nodes % 4096 == 0 && Instant::now() >= deadline {
                self.timed_out = true;
                return false;
            }
            let mark = st.trail.len();
            let ok = self.assign(st, e, x) && {
                let ops = std::mem::take(&mut self.levels[depth].ops);
                let ok = self.apply_ops(st, &ops);
                self.levels[depth].ops = ops;
                ok
            };
            if ok && !self.dfs(st, depth + 1, limit, max, deadline) {
                return false;
            }
            self.undo(st, mark);
        }
        true
    }

    fn apply_ops(&self, st: &mut DfsState, ops: &[Op]) -> bool {
        for op in ops {
            match *op {
                Op::Check { vertex } => {
                    if self.outflow(st, vertex, usize::MAX) != 0 {
                        return false;
                    }
                }
                Op::Force { edge, vertex } => {
                    let rest = self.outflow(st, vertex, edge);
                    let positive = self.incidence[vertex].iter().find(|p| p.0 == edge).unwrap().1;
                    // positive * x + rest = 0
                    let x = if positive { self.table.neg(rest) } else { rest };
                    if !self.assign(st, edge, x) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Sum of outgoing arc currents at `v`, skipping `skip`.
    fn outflow(&self, st: &DfsState, v: usize, skip: usize) -> u32 {
        let mut sum = 0;
        for &(e, positive) in &self.incidence[v] {
            if e != skip {
                sum = self.table.add(sum, signed(self.table, st.value[e], positive));
            }
        }
        sum
    }

    fn assign(&self, st: &mut DfsState, e: usize, x: u32) -> bool {
        if !self.allowed[e][x as usize] {
            return false;
        }
        let order = self.table.order();
        let [(f0, p0), (f1, p1)] = self.entries[e];
        let a = f0 * order + signed(self.table, x, p0) as usize;
        let b = f1 * order + signed(self.table, x, p1) as usize;
        if st.used[a] {
            return false;
        }
        st.value[e] = x;
        st.used[a] = true;
        st.trail.push(Mark { edge: e, slot: a });
        if b != a {
            if st.used[b] {
                return false;
            }
            st.used[b] = true;
            st.trail.push(Mark { edge: e, slot: b });
        }
        true
    }

    fn undo(&self, st: &mut DfsState, mark: usize) {
        while st.trail.len() > mark {
            let m = st.trail.pop().unwrap();
            st.used[m.slot] = false;
            st.value[m.edge] = u32::MAX;
        }
    }
}

struct LocalBuffers {
    value: Vec<u32>,
    count: Vec<u16>,
}

struct Mark {
    edge: usize,
    slot: usize,
}

struct DfsState {
    value: Vec<u32>,
    used: Vec<bool>,
    trail: Vec<Mark>,
    solutions: Vec<Vec<u32>>,
}

/// Why a partial assignment cannot be completed.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PruneReason {
    /// Every dart at a trivalent vertex is assigned and the excess is nonzero.
    Kirchhoff { vertex: usize, excess: GroupElement<u32> },
    /// The current forced onto `edge` by Kirchhoff's law at `vertex` is zero
    /// or repeats a log entry already present.
    Forced { vertex: usize, edge: usize, current: GroupElement<u32> },
    /// A face log already contains `element` twice.
    Repeated { face: usize, element: GroupElement<u32> },
    /// A face has more steps than a complete log allows.
    FaceTooLong { face: usize, length: usize },
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum PruneVerdict {
    Viable,
    Prune(PruneReason),
}

/// Fail-fast test for a partial current assignment (`None` = unassigned) on
/// a fixed embedding. Repeated log entries within one face are what a
/// repeated current (up to sign) looks like for a cascade.
pub fn prune_partial(emb: &Embedding, group: &GroupSpec<u32>, currents: &[Option<GroupElement<u32>>]) -> PruneVerdict {
    assert_eq!(currents.len(), emb.edge_count());
    let order = group.order();
    let walks = trace_faces(emb);
    if let Some((face, w)) = walks.iter().enumerate().find(|(_, w)| w.len() > order) {
        return PruneVerdict::Prune(PruneReason::FaceTooLong { face, length: w.len() });
    }
    let value = |e: usize, d: Dart, c: &GroupElement<u32>| -> GroupElement<u32> {
        if d.end == 0 || emb.signature(e) == Sign::Minus {
            c.clone()
        } else {
            group.negate(c)
        }
    };
    // face -> element -> edges logging it
    let mut seen: Vec<Vec<Vec<usize>>> = vec![vec![Vec::new(); order]; walks.len()];
    let pendant = |e: usize| emb.degree(emb.tail(Dart::new(e, 0))) == 1 || emb.degree(emb.head(Dart::new(e, 0))) == 1;
    for (face, walk) in walks.iter().enumerate() {
        for step in walk.steps() {
            let e = step.dart.edge();
            let Some(c) = &currents[e] else { continue };
            let mut x = value(e, step.dart, c);
            if step.behavior == Behavior::Alternate {
                x = group.negate(&x);
            }
            let slot = &mut seen[face][group.index_of(&x)];
            // the involution on a pendant is logged twice in a row and merged
            let merged = slot.len() == 1 && slot[0] == e && pendant(e) && group.element_order(&x) == 2;
            if !slot.is_empty() && !merged {
                return PruneVerdict::Prune(PruneReason::Repeated { face, element: x });
            }
            slot.push(e);
        }
    }
    let traversals = edge_traversals(emb, &walks);
    // log entries an edge would get if it carried stored current `c`
    let entries_of = |e: usize, c: &GroupElement<u32>| -> [(usize, GroupElement<u32>); 2] {
        traversals[e].map(|(face, i)| {
            let step = walks[face].steps()[i];
            let x = value(e, step.dart, c);
            let x = if step.behavior == Behavior::Alternate { group.negate(&x) } else { x };
            (face, x)
        })
    };
    for v in (0..emb.vertex_count()).filter(|&v| emb.degree(v) == 3) {
        let darts = emb.rotation(v);
        let open: Vec<Dart> = darts.iter().copied().filter(|d| currents[d.edge()].is_none()).collect();
        let mut out = group.identity();
        for &d in darts.iter().filter(|d| currents[d.edge()].is_some()) {
            out = group.add_unchecked(&out, &value(d.edge(), d, currents[d.edge()].as_ref().unwrap()));
        }
        match open.as_slice() {
            [] if !group.is_identity(&out) => {
                return PruneVerdict::Prune(PruneReason::Kirchhoff {
                    vertex: v,
                    excess: group.negate(&out),
                })
            }
            [d] if !emb.is_loop(d.edge()) => {
                let e = d.edge();
                // the dart current at d must be -out
                let forced = value(e, *d, &group.negate(&out));
                let [(fa, a), (fb, b)] = entries_of(e, &forced);
                let merged = fa == fb && a == b && pendant(e) && group.element_order(&a) == 2;
                let clash = group.is_identity(&forced)
                    || !seen[fa][group.index_of(&a)].is_empty()
                    || !seen[fb][group.index_of(&b)].is_empty()
                    || (fa == fb && a == b && !merged);
                if clash {
                    return PruneVerdict::Prune(PruneReason::Forced {
                        vertex: v,
                        edge: e,
                        current: forced,
                    });
                }
            }
            _ => {}
        }
    }
    PruneVerdict::Viable
}
