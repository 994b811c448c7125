//! Certification of a pure rotation system as an orientable triangular
//! embedding of `K(n)` at the genus `ceil((n-3)(n-4)/12)`.

use std::fmt;

use thiserror::Error;

use crate::derive::RotationSystem;
use crate::model::{Dart, Embedding, Sign};
use crate::tracer::trace_faces;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertifyError {
    #[error("genus formula needs n >= 3, got {0}")]
    TooSmall(u64),
    #[error("odd Euler characteristic {0} for an orientable system")]
    OddEulerCharacteristic(i64),
}

pub fn expected_genus(n: u64) -> Result<u64, CertifyError> {
    if n < 3 {
        return Err(CertifyError::TooSmall(n));
    }
    Ok(((n - 3) * n.saturating_sub(4)).div_ceil(12))
}

/// Adjacency defect found while checking completeness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Defect {
    Missing { vertex: usize, neighbor: usize },
    Repeated { vertex: usize, neighbor: usize, count: usize },
    SelfLoop { vertex: usize },
    Unpaired { vertex: usize, neighbor: usize },
}

impl fmt::Display for Defect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Defect::Missing { vertex, neighbor } => write!(f, "{vertex} lacks {neighbor}"),
            Defect::Repeated { vertex, neighbor, count } => write!(f, "{vertex} lists {neighbor} {count} times"),
            Defect::SelfLoop { vertex } => write!(f, "{vertex} lists itself"),
            Defect::Unpaired { vertex, neighbor } => write!(f, "{vertex}->{neighbor} has no partner"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub n: usize,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub all_triangles: bool,
    pub is_complete: bool,
    pub orientable: bool,
    pub euler_characteristic: i64,
    pub genus: i64,
    pub expected_genus: i64,
    pub pass: bool,
    pub defects: Vec<Defect>,
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: [(&str, String); 11] = [
            ("n", self.n.to_string()),
            ("vertices", self.vertices.to_string()),
            ("edges", self.edges.to_string()),
            ("faces", self.faces.to_string()),
            ("all_triangles", self.all_triangles.to_string()),
            ("complete", self.is_complete.to_string()),
            ("orientable", self.orientable.to_string()),
            ("euler_characteristic", self.euler_characteristic.to_string()),
            ("genus", self.genus.to_string()),
            ("expected_genus", self.expected_genus.to_string()),
            ("pass", self.pass.to_string()),
        ];
        for (key, value) in rows {
            writeln!(f, "{key:<21}{value}")?;
        }
        for d in self.defects.iter().take(10) {
            writeln!(f, "defect               {d}")?;
        }
        Ok(())
    }
}

/// Pairs the `k`-th occurrence of `j` around `i` with the `k`-th occurrence
/// of `i` around `j`, giving one edge per pair.
fn to_embedding(rs: &RotationSystem) -> (Option<Embedding>, Vec<Defect>) {
    let n = rs.vertex_count();
    let mut defects = Vec::new();
    // pending[(i, j)] = list of edge indices created at i waiting for j
    let mut pending: std::collections::HashMap<(usize, usize), std::collections::VecDeque<usize>> =
        std::collections::HashMap::new();
    let mut rotations: Vec<Vec<Dart>> = vec![Vec::new(); n];
    let mut edge_count = 0usize;
    for i in 0..n {
        for &j in rs.rotation(i) {
            if j == i {
                defects.push(Defect::SelfLoop { vertex: i });
                continue;
            }
            let dart = match pending.get_mut(&(j, i)).and_then(|q| q.pop_front()) {
                Some(e) => Dart::new(e, 1),
                None => {
                    let e = edge_count;
                    edge_count += 1;
                    pending.entry((i, j)).or_default().push_back(e);
                    Dart::new(e, 0)
                }
            };
            rotations[i].push(dart);
        }
    }
    let mut unpaired: Vec<(usize, usize)> = pending
        .iter()
        .filter(|(_, q)| !q.is_empty())
        .map(|(&(i, j), _)| (i, j))
        .collect();
    unpaired.sort_unstable();
    defects.extend(unpaired.iter().map(|&(vertex, neighbor)| Defect::Unpaired { vertex, neighbor }));
    if !defects.is_empty() || rotations.iter().any(|r| r.is_empty()) {
        return (None, defects);
    }
    let mut signatures = vec![Sign::Plus; edge_count];
    if let Some(sigs) = rs.signatures() {
        for (i, rot) in rotations.iter().enumerate() {
            for (d, &s) in rot.iter().zip(&sigs[i]) {
                if s == Sign::Minus {
                    signatures[d.edge()] = Sign::Minus;
                }
            }
        }
    }
    let emb = Embedding::new(rotations, signatures).expect("pairing yields every dart once");
    (Some(emb), defects)
}

fn completeness_defects(rs: &RotationSystem) -> Vec<Defect> {
    let n = rs.vertex_count();
    let mut defects = Vec::new();
    let mut count = vec![0usize; n];
    for i in 0..n {
        count.iter_mut().for_each(|c| *c = 0);
        for &j in rs.rotation(i) {
            count[j] += 1;
        }
        for (j, &c) in count.iter().enumerate() {
            if j == i {
                continue;
            }
            match c {
                1 => {}
                0 => defects.push(Defect::Missing { vertex: i, neighbor: j }),
                c => defects.push(Defect::Repeated {
                    vertex: i,
                    neighbor: j,
                    count: c,
                }),
            }
        }
    }
    defects
}

pub fn certify(rs: &RotationSystem) -> Result<Certificate, CertifyError> {
    let n = rs.vertex_count();
    let mut defects = completeness_defects(rs);
    let is_complete = defects.is_empty() && rs.rotations().iter().enumerate().all(|(i, r)| !r.contains(&i));
    let orientable = rs.is_pure();
    let (emb, pairing) = to_embedding(rs);
    defects.extend(pairing);
    let (edges, faces, all_triangles) = match &emb {
        Some(emb) => {
            let walks = trace_faces(emb);
            let triangles = !walks.is_empty() && walks.iter().all(|w| w.len() == 3);
            (emb.edge_count(), walks.len(), triangles)
        }
        None => (rs.rotations().iter().map(Vec::len).sum::<usize>() / 2, 0, false),
    };
    let euler_characteristic = n as i64 - edges as i64 + faces as i64;
    if orientable && emb.is_some() && euler_characteristic % 2 != 0 {
        return Err(CertifyError::OddEulerCharacteristic(euler_characteristic));
    }
    let genus = (2 - euler_characteristic).div_euclid(2);
    let expected = if n >= 3 { expected_genus(n as u64)? as i64 } else { 0 };
    let pass = emb.is_some() && is_complete && all_triangles && orientable && n >= 3 && genus == expected;
    Ok(Certificate {
        n,
        vertices: n,
        edges,
        faces,
        all_triangles,
        is_complete,
        orientable,
        euler_characteristic,
        genus,
        expected_genus: expected,
        pass,
        defects,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn genus_formula_values() {
        assert_eq!(expected_genus(7), Ok(1));
        assert_eq!(expected_genus(36), Ok(88));
        assert_eq!(expected_genus(72), Ok(391));
        assert_eq!(expected_genus(108), Ok(910));
        assert_eq!(expected_genus(3), Ok(0));
        assert_eq!(expected_genus(5), Ok(1));
        assert_eq!(expected_genus(2), Err(CertifyError::TooSmall(2)));
    }

    #[test]
    fn k3_is_planar_triangulation() {
        let rs = RotationSystem::pure(vec![vec![1, 2], vec![2, 0], vec![0, 1]]);
        let c = certify(&rs).unwrap();
        assert_eq!((c.vertices, c.edges, c.faces), (3, 3, 2));
        assert_eq!(c.euler_characteristic, 2);
        assert_eq!(c.genus, 0);
        assert!(c.all_triangles && c.is_complete && c.orientable && c.pass);
    }

    #[test]
    fn k4_planar_rotation() {
        // vertex 3 in the middle of triangle 0,1,2
        let rs = RotationSystem::pure(vec![vec![1, 3, 2], vec![2, 3, 0], vec![0, 3, 1], vec![0, 1, 2]]);
        let c = certify(&rs).unwrap();
        assert_eq!((c.edges, c.faces, c.genus), (6, 4, 0));
        assert!(c.pass);
        // reversing one rotation gives a torus embedding with fewer faces
        let mut rot = rs.rotations().to_vec();
        rot[3].reverse();
        let c = certify(&RotationSystem::pure(rot)).unwrap();
        assert!(!c.pass);
        assert_eq!(c.faces, 2);
        assert_eq!(c.genus, 1);
    }

    #[test]
    fn missing_neighbor_is_reported() {
        let rs = RotationSystem::pure(vec![vec![1, 2], vec![0], vec![0]]);
        let c = certify(&rs).unwrap();
        assert!(!c.is_complete);
        assert!(!c.pass);
        assert!(c.defects.contains(&Defect::Missing { vertex: 1, neighbor: 2 }));
    }

    #[test]
    fn unpaired_neighbor_blocks_tracing() {
        let rs = RotationSystem::pure(vec![vec![1, 2], vec![2, 0], vec![1]]);
        let c = certify(&rs).unwrap();
        assert_eq!(c.faces, 0);
        assert!(c.defects.contains(&Defect::Unpaired { vertex: 1, neighbor: 2 }) || c.defects.contains(&Defect::Unpaired { vertex: 0, neighbor: 2 }));
        assert!(!c.pass);
    }

    #[test]
    fn display_is_aligned() {
        let rs = RotationSystem::pure(vec![vec![1, 2], vec![2, 0], vec![0, 1]]);
        let text = certify(&rs).unwrap().to_string();
        assert!(text.starts_with("n                    3\n"));
        assert!(text.ends_with("pass                 true\n"));
    }
}
