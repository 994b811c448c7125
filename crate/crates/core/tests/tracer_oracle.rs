mod common;

use std::time::Instant;

use common::{oracle_faces, random_embedding, walk_flags};
use currents::tracer::trace_faces;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lengths(emb: &currents::model::Embedding) -> Vec<usize> {
    let mut l: Vec<usize> = trace_faces(emb).iter().map(|w| w.len()).collect();
    l.sort_unstable();
    l
}

#[test]
fn tracer_matches_flag_orbits_on_random_multigraphs() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for case in 0..1500 {
        let emb = random_embedding(&mut rng, 12);
        let walks = trace_faces(&emb);
        assert_eq!(walks.iter().map(|w| w.len()).sum::<usize>(), 2 * emb.edge_count());
        assert_eq!(walk_flags(&emb, &walks), oracle_faces(&emb), "case {case}: {emb:?}");
    }
    assert!(start.elapsed().as_secs() < 30);
}

#[test]
fn face_lengths_survive_random_flips() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..1000 {
        let emb = random_embedding(&mut rng, 12);
        let before = lengths(&emb);
        let mut flipped = emb.clone();
        for _ in 0..rng.gen_range(1..6) {
            flipped = flipped.flipped(rng.gen_range(0..emb.vertex_count()));
        }
        assert_eq!(lengths(&flipped), before);
        assert_eq!(oracle_faces(&flipped).len(), before.len());
    }
}
