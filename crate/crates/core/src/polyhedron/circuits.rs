use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::Polyhedron;

/// A simple k-cycle of faces whose crossed edges are pairwise vertex-disjoint.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrismaticCircuit {
    pub k: usize,
    pub faces: Vec<usize>,
    /// `crossed_edges[i]` separates `faces[i]` and `faces[(i + 1) % k]`.
    pub crossed_edges: Vec<(usize, usize)>,
}

/// All prismatic k-circuits, each listed once starting from its least face,
/// in lexicographic order of face sequences.
pub fn prismatic_circuits(p: &Polyhedron, k: usize) -> Vec<PrismaticCircuit> {
    assert!(k >= 3, "circuits have at least three faces");
    let adj = p.face_adjacency();
    let mut shared: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    for &(u, v) in p.edges() {
        let (a, b) = p.edge_faces(u, v).unwrap();
        shared.entry((a.min(b), a.max(b))).or_insert((u, v));
    }
    let edge = |a: usize, b: usize| shared[&(a.min(b), a.max(b))];

    let mut out = Vec::new();
    let mut path = Vec::with_capacity(k);
    let mut on_path = vec![false; p.face_count()];
    for s in 0..p.face_count() {
        path.push(s);
        on_path[s] = true;
        extend(&adj, k, s, &mut path, &mut on_path, &mut |cycle| {
            let crossed: Vec<_> = (0..k).map(|i| edge(cycle[i], cycle[(i + 1) % k])).collect();
            let disjoint = crossed.iter().enumerate().all(|(i, &(a, b))| {
                crossed[i + 1..]
                    .iter()
                    .all(|&(c, d)| a != c && a != d && b != c && b != d)
            });
            if disjoint {
                out.push(PrismaticCircuit {
                    k,
                    faces: cycle.to_vec(),
                    crossed_edges: crossed,
                });
            }
        });
        path.pop();
        on_path[s] = false;
    }
    out.sort_by(|a, b| a.faces.cmp(&b.faces));
    out
}

fn extend(
    adj: &[Vec<usize>],
    k: usize,
    s: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    emit: &mut dyn FnMut(&[usize]),
) {
    let last = *path.last().unwrap();
    if path.len() == k {
        // close the cycle; orientation fixed by path[1] < path[k-1]
        if path[1] < path[k - 1] && adj[last].binary_search(&s).is_ok() {
            emit(path);
        }
        return;
    }
    for &f in &adj[last] {
        if f > s && !on_path[f] {
            path.push(f);
            on_path[f] = true;
            extend(adj, k, s, path, on_path, emit);
            path.pop();
            on_path[f] = false;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{antiprism, lobell};

    #[test]
    fn cube_has_three_equators() {
        let cube = Polyhedron::build_from_faces(vec![
            vec![0, 1, 2, 3],
            vec![4, 7, 6, 5],
            vec![0, 4, 5, 1],
            vec![1, 5, 6, 2],
            vec![2, 6, 7, 3],
            vec![3, 7, 4, 0],
        ])
        .unwrap();
        assert_eq!(prismatic_circuits(&cube, 4).len(), 3);
        assert!(prismatic_circuits(&cube, 3).is_empty());
    }

    #[test]
    fn octahedron_has_no_triangles_in_dual() {
        assert!(prismatic_circuits(&antiprism(3).unwrap(), 3).is_empty());
    }

    #[test]
    fn dodecahedron_five_circuits() {
        let c = prismatic_circuits(&lobell(5).unwrap(), 5);
        assert_eq!(c.len(), 12);
        for circ in &c {
            assert_eq!(circ.crossed_edges.len(), 5);
        }
    }
}
