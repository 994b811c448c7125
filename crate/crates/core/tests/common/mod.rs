#![allow(dead_code)]

pub mod mutation;

use std::collections::BTreeSet;

use currents::model::{Dart, Embedding, Sign};
use currents::tracer::{Behavior, FaceWalk};
use currents::Graph;
use rand::seq::SliceRandom;
use rand::Rng;

pub const K36: &str = include_str!("../../data/k36_cascade.txt");
/// Where an s=2 index-2 solution goes once a search produces one; nothing is
/// bundled yet.
pub const K72_PATH: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/data/k72_index2.txt");

pub fn k36() -> Graph {
    Graph::parse(K36).unwrap()
}

pub fn k72() -> Option<Graph> {
    let text = std::fs::read_to_string(K72_PATH).ok()?;
    Some(Graph::parse(&text).unwrap())
}

/// Random embedded multigraph: loops and parallel edges allowed, every vertex
/// has at least one dart.
pub fn random_embedding(rng: &mut impl Rng, max_edges: usize) -> Embedding {
    let edges = rng.gen_range(1..=max_edges);
    let vertices = rng.gen_range(1..=(2 * edges).min(8));
    let mut darts: Vec<Dart> = (0..edges).flat_map(|e| [Dart::new(e, 0), Dart::new(e, 1)]).collect();
    darts.shuffle(rng);
    let mut rotations: Vec<Vec<Dart>> = vec![Vec::new(); vertices];
    for (v, d) in darts.iter().take(vertices).enumerate() {
        rotations[v].push(*d);
    }
    for d in darts.iter().skip(vertices) {
        rotations[rng.gen_range(0..vertices)].push(*d);
    }
    let signatures = (0..edges)
        .map(|_| if rng.gen_bool(0.4) { Sign::Minus } else { Sign::Plus })
        .collect();
    Embedding::new(rotations, signatures).unwrap()
}

/// A flag is (edge, end, side): side 0 is the corner towards the next dart in
/// the rotation, side 1 the corner towards the previous one.
pub type Flag = (usize, u8, u8);

/// Faces as orbits of the two flag involutions: across the edge, and across
/// the corner at a vertex. Independent of the walk-and-behavior tracer.
pub fn oracle_faces(emb: &Embedding) -> BTreeSet<BTreeSet<Flag>> {
    let across = |(e, end, s): Flag| -> Flag {
        if emb.signature(e) == Sign::Minus {
            (e, 1 - end, s)
        } else {
            (e, 1 - end, 1 - s)
        }
    };
    let corner = |(e, end, s): Flag| -> Flag {
        let d = Dart::new(e, end);
        if s == 0 {
            let n = emb.next(d);
            (n.edge(), n.end, 1)
        } else {
            let p = emb.prev(d);
            (p.edge(), p.end, 0)
        }
    };
    let mut seen = BTreeSet::new();
    let mut faces = BTreeSet::new();
    for e in 0..emb.edge_count() {
        for end in 0..2 {
            for s in 0..2 {
                let start = (e, end, s);
                if seen.contains(&start) {
                    continue;
                }
                let mut orbit = BTreeSet::new();
                let mut stack = vec![start];
                while let Some(f) = stack.pop() {
                    if orbit.insert(f) {
                        stack.push(across(f));
                        stack.push(corner(f));
                    }
                }
                seen.extend(orbit.iter().copied());
                faces.insert(orbit);
            }
        }
    }
    faces
}

/// Flags covered by the tracer's walks: a step leaving in normal behavior
/// sweeps the corner before its dart, in alternate behavior the one after.
pub fn walk_flags(emb: &Embedding, walks: &[FaceWalk]) -> BTreeSet<BTreeSet<Flag>> {
    walks
        .iter()
        .map(|w| {
            w.steps()
                .iter()
                .flat_map(|st| {
                    let s = match st.behavior {
                        Behavior::Normal => 1,
                        Behavior::Alternate => 0,
                    };
                    let (e, end) = (st.dart.edge(), st.dart.end);
                    let far = if emb.signature(e) == Sign::Minus { s } else { 1 - s };
                    [(e, end, s), (e, 1 - end, far)]
                })
                .collect()
        })
        .collect()
}
