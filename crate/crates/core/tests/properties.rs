mod common;

use currents::certify::{certify, Certificate};
use currents::derive::{derive, derive_index1_unchecked, derive_index2_labeled, RotationSystem};
use currents::laws::{check, face_walks, Mode};
use currents::tracer::{edge_traversals, step_value};
use currents::{Graph, Group};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn fixtures() -> Vec<(Graph, Mode)> {
    std::iter::once((common::k36(), Mode::Cascade))
        .chain(common::k72().map(|g| (g, Mode::Index2)))
        .collect()
}

fn translate(group: &Group, row: &[usize], t: usize) -> Vec<usize> {
    let t = group.from_index(t);
    row.iter()
        .map(|&j| group.index_of(&group.add(&group.from_index(j), &t).unwrap()))
        .collect()
}

fn summary(c: &Certificate) -> (usize, usize, usize, i64, bool, bool, bool) {
    (c.vertices, c.edges, c.faces, c.genus, c.all_triangles, c.orientable, c.pass)
}

#[test]
fn fixtures_pass_their_laws() {
    for (g, mode) in fixtures() {
        let report = check(&g, mode);
        assert!(report.passed(), "{report}");
    }
}

#[test]
fn the_two_log_entries_of_an_edge_cancel() {
    for (g, mode) in fixtures() {
        let walks = face_walks(&g, mode);
        for pair in edge_traversals(g.embedding(), &walks) {
            let [a, b] = pair.map(|(w, i)| step_value(&g, walks[w].steps()[i]));
            assert!(g.group().is_identity(&g.group().add(&a, &b).unwrap()));
        }
    }
}

#[test]
fn serialization_round_trips() {
    for (g, _) in fixtures() {
        let text = g.serialize();
        let back = Graph::parse(&text).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.serialize(), text);
    }
}

#[test]
fn derived_rows_are_translates() {
    let g = common::k36();
    let rs = derive_index1_unchecked(&g);
    for i in 0..rs.vertex_count() {
        assert_eq!(rs.rotation(i), translate(g.group(), rs.rotation(0), i).as_slice());
    }
}

#[test]
#[ignore = "needs an s=2 index-2 solution in crates/core/data/k72_index2.txt"]
fn index2_rows_are_even_translates() {
    let g = common::k72().unwrap();
    let group = g.group();
    let rs = derive(&g, Mode::Index2).unwrap();
    for i in 0..rs.vertex_count() {
        for t in (0..group.order()).filter(|&t| group.is_even(&group.from_index(t)).unwrap()) {
            let j = group.index_of(&group.add(&group.from_index(i), &group.from_index(t)).unwrap());
            assert_eq!(rs.rotation(j), translate(group, rs.rotation(i), t).as_slice());
        }
    }
}

#[test]
fn derived_rows_are_complete_and_symmetric() {
    for (g, mode) in fixtures() {
        let rs = derive(&g, mode).unwrap();
        let n = rs.vertex_count();
        for i in 0..n {
            let mut row = rs.rotation(i).to_vec();
            row.sort_unstable();
            let others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
            assert_eq!(row, others);
            for &j in rs.rotation(i) {
                assert!(rs.rotation(j).contains(&i));
            }
        }
    }
}

#[test]
fn fixtures_certify_as_genus_embeddings() {
    let c = certify(&derive(&common::k36(), Mode::Cascade).unwrap()).unwrap();
    assert_eq!(summary(&c), (36, 630, 420, 88, true, true, true));
}

#[test]
#[ignore = "needs an s=2 index-2 solution in crates/core/data/k72_index2.txt"]
fn index2_fixture_certifies_k72() {
    let c = certify(&derive(&common::k72().unwrap(), Mode::Index2).unwrap()).unwrap();
    assert_eq!(summary(&c), (72, 2556, 1704, 391, true, true, true));
}

#[test]
fn certificate_ignores_mirroring_and_relabeling() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for (g, mode) in fixtures() {
        let rs = derive(&g, mode).unwrap();
        let base = summary(&certify(&rs).unwrap());
        assert_eq!(summary(&certify(&rs.mirrored()).unwrap()), base);
        let mut perm: Vec<usize> = (0..rs.vertex_count()).collect();
        perm.shuffle(&mut rng);
        assert_eq!(summary(&certify(&rs.relabeled(&perm)).unwrap()), base);
    }
}

#[test]
#[ignore = "needs an s=2 index-2 solution in crates/core/data/k72_index2.txt"]
fn swapping_index2_face_labels_certifies_identically() {
    let g = common::k72().unwrap();
    let a = certify(&derive_index2_labeled(&g, false).unwrap()).unwrap();
    let b = certify(&derive_index2_labeled(&g, true).unwrap()).unwrap();
    assert_eq!(summary(&a), summary(&b));
    assert!(b.pass);
}

#[test]
fn laws_and_certificate_survive_vertex_flips() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for (g, mode) in fixtures() {
        let base = summary(&certify(&derive(&g, mode).unwrap()).unwrap());
        for _ in 0..10 {
            let mut h = g.clone();
            for _ in 0..rng.gen_range(1..8) {
                h = h.flip_at(rng.gen_range(0..g.vertex_count()));
            }
            let report = check(&h, mode);
            assert!(report.passed(), "{report}");
            assert_eq!(summary(&certify(&derive(&h, mode).unwrap()).unwrap()), base);
        }
    }
}

#[test]
fn cascade_run_as_index2_fails_on_face_count() {
    let report = check(&common::k36(), Mode::Index2);
    assert!(!report.passed());
    assert!(report.to_string().contains("faces=1 expected=2"));
}

#[test]
fn rotation_text_round_trips() {
    let rs = derive(&common::k36(), Mode::Cascade).unwrap();
    assert_eq!(RotationSystem::parse(&rs.to_text()).unwrap(), rs);
}
