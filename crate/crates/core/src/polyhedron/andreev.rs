use serde::{Deserialize, Serialize};

use super::{prismatic_circuits, Kind, Polyhedron, PrismaticCircuit};

/// Evidence for a failed realizability condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum Witness {
    /// Removing these vertices disconnects the graph (empty when V < 4).
    Steinitz {
        separator: Vec<usize>,
    },
    FewFaces {
        faces: usize,
    },
    Valency {
        vertex: usize,
        degree: usize,
    },
    /// `faces[0]`,`faces[1]` and `faces[1]`,`faces[2]` meet along disjoint edges
    /// while `faces[0]` and `faces[2]` still share a vertex.
    Triple {
        faces: [usize; 3],
        common_vertex: usize,
    },
    Prismatic4 {
        circuit: PrismaticCircuit,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidityReport {
    pub steinitz_ok: bool,
    pub cond_faces_ge6: bool,
    pub cond_valency: bool,
    pub cond_triples: bool,
    pub cond_no_prismatic4: bool,
    pub kind: Kind,
    pub witnesses: Vec<Witness>,
}

impl ValidityReport {
    pub fn valid(&self) -> bool {
        self.steinitz_ok
            && self.cond_faces_ge6
            && self.cond_valency
            && self.cond_triples
            && self.cond_no_prismatic4
    }
}

/// Right-angled realizability test: Steinitz plus the four combinatorial
/// conditions (at least six faces, valencies 3 or 4, the face-triple
/// condition, no prismatic 4-circuits).
pub fn andreev_check(p: &Polyhedron) -> ValidityReport {
    let mut witnesses = Vec::new();

    let separator = p.separating_set();
    let steinitz_ok = separator.is_none();
    if let Some(separator) = separator {
        witnesses.push(Witness::Steinitz { separator });
    }

    let cond_faces_ge6 = p.face_count() >= 6;
    if !cond_faces_ge6 {
        witnesses.push(Witness::FewFaces {
            faces: p.face_count(),
        });
    }

    let bad_vertex = (0..p.vertex_count()).find(|&v| !matches!(p.degree(v), 3 | 4));
    let cond_valency = bad_vertex.is_none();
    if let Some(vertex) = bad_vertex {
        witnesses.push(Witness::Valency {
            vertex,
            degree: p.degree(vertex),
        });
    }

    let triple = find_triple_violation(p);
    let cond_triples = triple.is_none();
    if let Some(w) = triple {
        witnesses.push(w);
    }

    let circuits = prismatic_circuits(p, 4);
    let cond_no_prismatic4 = circuits.is_empty();
    if let Some(circuit) = circuits.into_iter().next() {
        witnesses.push(Witness::Prismatic4 { circuit });
    }

    ValidityReport {
        steinitz_ok,
        cond_faces_ge6,
        cond_valency,
        cond_triples,
        cond_no_prismatic4,
        kind: p.kind(),
        witnesses,
    }
}

// For every face F_j and every pair of its vertex-disjoint edges, the faces
// F_i and F_k across those edges must not share a vertex.
fn find_triple_violation(p: &Polyhedron) -> Option<Witness> {
    let nv = p.vertex_count();
    let mut mark = vec![0usize; nv];
    let mut stamp = 0;
    for (j, f) in p.faces().iter().enumerate() {
        let k = f.len();
        let across: Vec<usize> = (0..k)
            .map(|t| p.dart_face(f[(t + 1) % k], f[t]).unwrap())
            .collect();
        for s in 0..k {
            for t in s + 1..k {
                let (a, b) = (f[s], f[(s + 1) % k]);
                let (c, d) = (f[t], f[(t + 1) % k]);
                if a == c || a == d || b == c || b == d {
                    continue;
                }
                let (fi, fk) = (across[s], across[t]);
                stamp += 1;
                for &v in p.face(fi) {
                    mark[v] = stamp;
                }
                if let Some(&v) = p.face(fk).iter().find(|&&v| mark[v] == stamp) {
                    return Some(Witness::Triple {
                        faces: [fi, j, fk],
                        common_vertex: v,
                    });
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{antiprism, lobell};

    #[test]
    fn octahedron_valid_ideal() {
        let r = andreev_check(&antiprism(3).unwrap());
        assert!(r.valid());
        assert_eq!(r.kind, Kind::Ideal);
        assert!(r.witnesses.is_empty());
    }

    #[test]
    fn dodecahedron_valid_compact() {
        let r = andreev_check(&lobell(5).unwrap());
        assert!(r.valid());
        assert_eq!(r.kind, Kind::Compact);
    }

    #[test]
    fn cube_fails_on_prismatic_circuit() {
        let cube = Polyhedron::build_from_faces(vec![
            vec![0, 1, 2, 3],
            vec![4, 7, 6, 5],
            vec![0, 4, 5, 1],
            vec![1, 5, 6, 2],
            vec![2, 6, 7, 3],
            vec![3, 7, 4, 0],
        ])
        .unwrap();
        let r = andreev_check(&cube);
        assert!(!r.valid());
        assert!(r.steinitz_ok && r.cond_faces_ge6 && r.cond_valency);
        assert!(!r.cond_no_prismatic4);
        assert!(r
            .witnesses
            .iter()
            .any(|w| matches!(w, Witness::Prismatic4 { .. })));
    }

    #[test]
    fn tetrahedron_fails_face_count_and_valency_is_fine() {
        let k4 = Polyhedron::build_from_faces(vec![
            vec![0, 1, 2],
            vec![0, 3, 1],
            vec![1, 3, 2],
            vec![2, 3, 0],
        ])
        .unwrap();
        let r = andreev_check(&k4);
        assert!(!r.cond_faces_ge6 && r.cond_valency);
        assert_eq!(r.witnesses, vec![Witness::FewFaces { faces: 4 }]);
    }
}
