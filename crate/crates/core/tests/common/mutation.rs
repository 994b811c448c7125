use currents::laws::{self, face_walks, Mode, Witness};
use currents::tracer::{classify_edges, edge_traversals, face_log, surface_orientable, Direction};
use currents::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug)]
pub enum Mutation {
    Current { edge: usize, delta: usize },
    Swap { vertex: usize, i: usize, j: usize },
    Toggle { edge: usize },
}

pub fn apply(g: &Graph, m: &Mutation) -> Graph {
    let group = g.group();
    match *m {
        Mutation::Current { edge, delta } => {
            let c = group.add(g.edge_current(edge), &group.from_index(delta)).unwrap();
            g.with_edge_current(edge, c)
        }
        Mutation::Swap { vertex, i, j } => g.with_rotation_swapped(vertex, i, j),
        Mutation::Toggle { edge } => g.with_signature_toggled(edge),
    }
}

pub fn corpus(g: &Graph, seed: u64, n: usize) -> Vec<Mutation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let emb = g.embedding();
    let far = |d: currents::model::Dart| emb.head(d);
    // a pendant may sit on either side of its corner without changing the
    // face multiset, so swaps there can yield another valid graph
    let trivalent: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| emb.degree(v) == 3 && emb.rotation(v).iter().all(|&d| emb.degree(far(d)) == 3))
        .collect();
    let inner: Vec<usize> = (0..g.edge_count())
        .filter(|&e| emb.degree(emb.tail(currents::model::Dart::new(e, 0))) == 3 && emb.degree(emb.head(currents::model::Dart::new(e, 0))) == 3)
        .collect();
    (0..n)
        .map(|k| match k % 3 {
            0 => Mutation::Current {
                edge: rng.gen_range(0..g.edge_count()),
                delta: rng.gen_range(1..g.group().order()),
            },
            1 => {
                let vertex = trivalent[rng.gen_range(0..trivalent.len())];
                let i = rng.gen_range(0..3);
                Mutation::Swap { vertex, i, j: (i + rng.gen_range(1..3)) % 3 }
            }
            _ => Mutation::Toggle {
                edge: inner[rng.gen_range(0..inner.len())],
            },
        })
        .collect()
}

/// Re-derives each witness from the graph by direct computation.
pub fn witness_holds(g: &Graph, mode: Mode, w: &Witness<u32>) -> bool {
    let group = g.group();
    let emb = g.embedding();
    let vertex = |id: u64| g.vertex_index(id).unwrap();
    let inflow = |v: usize| {
        let mut sum = group.identity();
        for &d in emb.rotation(v) {
            sum = group.sub(&sum, &g.current(d)).unwrap();
        }
        sum
    };
    let walks = face_walks(g, mode);
    match w {
        Witness::Degree { vertex: id, degree } => {
            let d = emb.degree(vertex(*id));
            d == *degree && d != 1 && d != 3
        }
        Witness::Excess { vertex: id, excess } => {
            let v = vertex(*id);
            emb.degree(v) == 3 && inflow(v) == *excess && !group.is_identity(excess)
        }
        Witness::VortexOrder { vertex: id, excess, order } => {
            let v = vertex(*id);
            inflow(v) == *excess && group.element_order(excess) == *order && *order != 2 && *order != 3
        }
        Witness::Missing { face, element } => {
            !face_log(&walks[*face], g).values().any(|x| x == element)
        }
        Witness::Repeated { face, element, count } => {
            let c = face_log(&walks[*face], g).values().filter(|&x| x == element).count();
            c == *count && (c > 1 || group.is_identity(element))
        }
        Witness::Parity { edge, current, odd, shared } => {
            let e = g.edge_index(*edge).unwrap();
            let really_shared = match mode {
                Mode::Cascade => classify_edges(emb, &walks)[e] == Direction::Unidirectional,
                Mode::Index2 => {
                    let t = edge_traversals(emb, &walks)[e];
                    t[0].0 != t[1].0
                }
            };
            g.edge_current(e) == current
                && *odd == !group.is_even(current).unwrap()
                && *shared == really_shared
                && odd != shared
        }
        Witness::NotBidirectional { edge } => {
            classify_edges(emb, &walks)[g.edge_index(*edge).unwrap()] == Direction::Unidirectional
        }
        Witness::FaceCount { found, expected } => walks.len() == *found && found != expected,
        Witness::Surface { orientable } => surface_orientable(emb) == *orientable,
    }
}

/// Runs the corpus; the first mutation that passes every law or yields a
/// bogus witness is reported.
pub fn run_corpus(g: &Graph, mode: Mode, seed: u64, n: usize) -> Result<(), String> {
    if !laws::check(g, mode).passed() {
        return Err("base graph fails its laws".into());
    }
    for m in corpus(g, seed, n) {
        let mutant = apply(g, &m);
        let report = laws::check(&mutant, mode);
        if report.passed() {
            return Err(format!("{m:?} left every law passing"));
        }
        for law in report.failed_laws() {
            for w in &report.verdict(law).witnesses {
                if !witness_holds(&mutant, mode, w) {
                    return Err(format!("{m:?}: bogus witness {w} for {law:?}"));
                }
            }
        }
    }
    Ok(())
}
