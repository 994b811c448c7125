//! Face tracing for general rotation systems.
//!
//! A walk starts in normal behavior and leaves each vertex through the
//! successor of the arriving edge-end in the rotation; crossing an edge of
//! signature -1 switches to alternate behavior, which uses the predecessor
//! instead, and crossing another such edge switches back.

use std::collections::VecDeque;

use crate::group::{GroupElement, Residue};
use crate::model::{CurrentGraph, Dart, Embedding, Sign};

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Behavior {
    Normal,
    Alternate,
}

impl Behavior {
    pub fn toggled(self) -> Behavior {
        match self {
            Behavior::Normal => Behavior::Alternate,
            Behavior::Alternate => Behavior::Normal,
        }
    }

    fn crossing(self, sign: Sign) -> Behavior {
        if sign.is_twisted() {
            self.toggled()
        } else {
            self
        }
    }
}

/// Traversal of `dart`, with the behavior the walk has when it leaves the
/// dart's tail.
#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub struct Step {
    pub dart: Dart,
    pub behavior: Behavior,
}

impl Step {
    fn state(self) -> usize {
        2 * self.dart.index() + (self.behavior == Behavior::Alternate) as usize
    }

    /// The same edge side walked in the opposite direction.
    pub fn reversed(self, emb: &Embedding) -> Step {
        let sign = emb.signature(self.dart.edge());
        Step {
            dart: self.dart.reverse(),
            behavior: self.behavior.crossing(sign).toggled(),
        }
    }

    pub fn advance(self, emb: &Embedding) -> Step {
        let arriving = self.dart.reverse();
        let behavior = self.behavior.crossing(emb.signature(self.dart.edge()));
        let dart = match behavior {
            Behavior::Normal => emb.next(arriving),
            Behavior::Alternate => emb.prev(arriving),
        };
        Step { dart, behavior }
    }
}

/// A closed face-boundary walk.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FaceWalk {
    steps: Vec<Step>,
}

impl FaceWalk {
    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

/// Traces every face once. Walks are discovered by scanning darts in index
/// order and starting, in normal behavior, at the first side not yet covered;
/// the output is in discovery order.
pub fn trace_faces(emb: &Embedding) -> Vec<FaceWalk> {
    let mut covered = vec![false; 2 * emb.dart_count()];
    let mut walks = Vec::new();
    for i in 0..emb.dart_count() {
        let start = Step {
            dart: Dart::from_index(i),
            behavior: Behavior::Normal,
        };
        if covered[start.state()] {
            continue;
        }
        let mut steps = Vec::new();
        let mut step = start;
        loop {
            covered[step.state()] = true;
            covered[step.reversed(emb).state()] = true;
            steps.push(step);
            step = step.advance(emb);
            if step == start {
                break;
            }
        }
        walks.push(FaceWalk { steps });
    }
    walks
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, Debug)]
pub enum Direction {
    /// Traversed once in each direction.
    Bidirectional,
    /// Traversed twice along the same dart.
    Unidirectional,
}

/// Where each edge is traversed: `(walk, step)` for both of its sides.
pub fn edge_traversals(emb: &Embedding, walks: &[FaceWalk]) -> Vec<[(usize, usize); 2]> {
    let mut out = vec![[(usize::MAX, usize::MAX); 2]; emb.edge_count()];
    let mut filled = vec![0u8; emb.edge_count()];
    for (w, walk) in walks.iter().enumerate() {
        for (k, step) in walk.steps.iter().enumerate() {
            let e = step.dart.edge();
            out[e][filled[e] as usize] = (w, k);
            filled[e] += 1;
        }
    }
    debug_assert!(filled.iter().all(|&f| f == 2));
    out
}

pub fn classify_edges(emb: &Embedding, walks: &[FaceWalk]) -> Vec<Direction> {
    edge_traversals(emb, walks)
        .iter()
        .map(|[(w1, k1), (w2, k2)]| {
            if walks[*w1].steps[*k1].dart == walks[*w2].steps[*k2].dart {
                Direction::Unidirectional
            } else {
                Direction::Bidirectional
            }
        })
        .collect()
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LogEntry<R> {
    pub value: GroupElement<R>,
    /// Index of the producing step in the walk.
    pub step: usize,
}

/// Cyclic sequence of signed currents read along a walk.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Log<R> {
    entries: Vec<LogEntry<R>>,
}

impl<R: Residue> Log<R> {
    pub fn entries(&self) -> &[LogEntry<R>] {
        &self.entries
    }

    pub fn values(&self) -> impl Iterator<Item = &GroupElement<R>> {
        self.entries.iter().map(|e| &e.value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

/// Signed current of one step: the arc's current in normal behavior, its
/// negation in alternate behavior.
pub fn step_value<R: Residue>(g: &CurrentGraph<R>, step: Step) -> GroupElement<R> {
    let current = g.current(step.dart);
    match step.behavior {
        Behavior::Normal => current,
        Behavior::Alternate => g.group().negate(&current),
    }
}

/// Log of a walk with each pair of consecutive equal order-2 entries merged
/// into one.
pub fn face_log<R: Residue>(walk: &FaceWalk, g: &CurrentGraph<R>) -> Log<R> {
    let group = g.group();
    let raw: Vec<GroupElement<R>> = walk.steps.iter().map(|&s| step_value(g, s)).collect();
    let n = raw.len();
    let mut paired = vec![false; n];
    let mut keep = vec![true; n];
    for i in 0..n {
        let j = (i + 1) % n;
        if j == i || paired[i] || paired[j] {
            continue;
        }
        if raw[i] == raw[j] && group.element_order(&raw[i]) == 2 {
            paired[i] = true;
            paired[j] = true;
            keep[j] = false;
        }
    }
    let entries = raw
        .into_iter()
        .enumerate()
        .filter(|(i, _)| keep[*i])
        .map(|(step, value)| LogEntry { value, step })
        .collect();
    Log { entries }
}

/// Vertex flips that make every signature +1, if the surface is orientable.
/// Vertex 0 of each component is left unflipped.
pub fn orienting_flips(emb: &Embedding) -> Option<Vec<bool>> {
    let n = emb.vertex_count();
    let mut flip: Vec<Option<bool>> = vec![None; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        if flip[root].is_some() {
            continue;
        }
        flip[root] = Some(false);
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let fu = flip[u].unwrap();
            for &d in emb.rotation(u) {
                let v = emb.head(d);
                let want = fu ^ emb.signature(d.edge()).is_twisted();
                match flip[v] {
                    None => {
                        flip[v] = Some(want);
                        queue.push_back(v);
                    }
                    Some(fv) if fv != want => return None,
                    Some(_) => {}
                }
            }
        }
    }
    Some(flip.into_iter().map(|f| f.unwrap()).collect())
}

/// True iff every cycle has positive signature product.
pub fn surface_orientable(emb: &Embedding) -> bool {
    orienting_flips(emb).is_some()
}

/// Walks of an orientable embedding, oriented consistently so every edge is
/// traversed once in each direction. Each walk starts at its smallest dart.
/// `None` for nonorientable embeddings.
pub fn oriented_faces(emb: &Embedding) -> Option<Vec<FaceWalk>> {
    let flips = orienting_flips(emb)?;
    let mut pure = emb.clone();
    for (v, &f) in flips.iter().enumerate() {
        if f {
            pure = pure.flipped(v);
        }
    }
    let walks = trace_faces(&pure)
        .into_iter()
        .map(|walk| FaceWalk {
            steps: walk
                .steps
                .into_iter()
                .map(|s| Step {
                    dart: s.dart,
                    behavior: if flips[emb.tail(s.dart)] {
                        Behavior::Alternate
                    } else {
                        Behavior::Normal
                    },
                })
                .collect(),
        })
        .collect();
    Some(walks)
}
