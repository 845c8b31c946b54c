//! Combinatorial polyhedra stored as rotation systems on the sphere.

mod andreev;
pub(crate) mod canonical;
mod circuits;
mod io;

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use andreev::{andreev_check, ValidityReport, Witness};
pub use canonical::{CanonicalCode, CodeError};
pub use circuits::{prismatic_circuits, PrismaticCircuit};
pub use io::{parse_polyhedron, ParseError, PolyhedronJson};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolyError {
    #[error("malformed face {face}: {reason}")]
    MalformedFace { face: usize, reason: String },
    #[error("Euler characteristic is {chi}, expected 2")]
    NotASphere { chi: i64 },
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("graph is disconnected")]
    Disconnected,
    #[error("edge {0}-{1} does not lie on exactly two distinct faces")]
    InconsistentEdgeUse(usize, usize),
}

/// Classification by vertex valencies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Ideal,
    Compact,
    Mixed,
    NonRightAngled,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Ideal => "ideal",
            Kind::Compact => "compact",
            Kind::Mixed => "mixed",
            Kind::NonRightAngled => "non-right-angled",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Marks a face as a member of a class of mutually isometric faces.
///
/// `corners[i]` is the type of the corner at `face[i]`; two tagged faces may be
/// glued isometrically only by a matching that preserves corner types.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaceTag {
    pub class: String,
    pub corners: Vec<u8>,
}

impl FaceTag {
    pub fn uniform(class: impl Into<String>, len: usize) -> Self {
        FaceTag {
            class: class.into(),
            corners: vec![0; len],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsProfile {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    /// Number of k-gonal faces, keyed by k.
    pub p: BTreeMap<usize, usize>,
}

impl CountsProfile {
    pub fn p(&self, k: usize) -> usize {
        self.p.get(&k).copied().unwrap_or(0)
    }

    /// `p_3 - 8 - Σ_{k≥5} (k-4) p_k`, zero for every ideal right-angled polyhedron.
    pub fn ideal_defect(&self) -> i64 {
        let tail: i64 = self
            .p
            .iter()
            .filter(|(&k, _)| k >= 5)
            .map(|(&k, &c)| (k as i64 - 4) * c as i64)
            .sum();
        self.p(3) as i64 - 8 - tail
    }

    /// `p_5 - 12 - Σ_{k≥7} (k-6) p_k`, zero for every simple polyhedron with faces of size ≥ 5.
    pub fn compact_defect(&self) -> i64 {
        let tail: i64 = self
            .p
            .iter()
            .filter(|(&k, _)| k >= 7)
            .map(|(&k, &c)| (k as i64 - 6) * c as i64)
            .sum();
        self.p(5) as i64 - 12 - tail
    }
}

/// A polyhedral map on the sphere.
///
/// `rotation[v]` lists the neighbours of `v` in cyclic order. For a face
/// `[.., u, v, w, ..]` the vertex `w` is the successor of `u` in `rotation[v]`.
#[derive(Debug, Clone)]
pub struct Polyhedron {
    rotation: Vec<Vec<usize>>,
    faces: Vec<Vec<usize>>,
    tags: Vec<Option<FaceTag>>,
    edges: Vec<(usize, usize)>,
    // dart_face[u][i] is the face containing the dart u -> rotation[u][i]
    dart_face: Vec<Vec<usize>>,
}

impl PartialEq for Polyhedron {
    fn eq(&self, other: &Self) -> bool {
        self.rotation == other.rotation && self.faces == other.faces && self.tags == other.tags
    }
}

impl Polyhedron {
    /// Builds a polyhedron from face cycles. Faces may be given in either
    /// orientation; they are re-oriented consistently when possible.
    pub fn build_from_faces(faces: Vec<Vec<usize>>) -> Result<Self, PolyError> {
        let n = faces.len();
        Self::build_tagged(faces, vec![None; n])
    }

    pub fn build_tagged(
        mut faces: Vec<Vec<usize>>,
        mut tags: Vec<Option<FaceTag>>,
    ) -> Result<Self, PolyError> {
        assert_eq!(faces.len(), tags.len(), "one tag slot per face");
        if faces.is_empty() {
            return Err(PolyError::MalformedFace {
                face: 0,
                reason: "no faces".into(),
            });
        }
        let mut vmax = 0;
        for (i, f) in faces.iter().enumerate() {
            if f.len() < 3 {
                return Err(PolyError::MalformedFace {
                    face: i,
                    reason: format!("length {} < 3", f.len()),
                });
            }
            if let Some(t) = &tags[i] {
                if t.corners.len() != f.len() {
                    return Err(PolyError::MalformedFace {
                        face: i,
                        reason: "tag length mismatch".into(),
                    });
                }
            }
            for (j, &v) in f.iter().enumerate() {
                if v == f[(j + 1) % f.len()] {
                    return Err(PolyError::NotSimple(format!("loop at vertex {v}")));
                }
            }
            let distinct: HashSet<_> = f.iter().collect();
            if distinct.len() != f.len() {
                return Err(PolyError::MalformedFace {
                    face: i,
                    reason: "repeated vertex".into(),
                });
            }
            vmax = vmax.max(*f.iter().max().unwrap());
        }
        let nv = vmax + 1;

        // undirected edge -> incident faces
        let mut edge_faces: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for j in 0..f.len() {
                let (a, b) = (f[j], f[(j + 1) % f.len()]);
                edge_faces.entry(key(a, b)).or_default().push(i);
            }
        }
        // the same oriented cycle listed twice is one face, so its edges lack a second face
        let mut seen_cycles: HashSet<Vec<usize>> = HashSet::new();
        for f in &faces {
            let m = (0..f.len()).min_by_key(|&j| f[j]).unwrap();
            let rotated: Vec<usize> = f[m..].iter().chain(&f[..m]).copied().collect();
            if !seen_cycles.insert(rotated) {
                let (a, b) = (f[0], f[1]);
                return Err(PolyError::InconsistentEdgeUse(a.min(b), a.max(b)));
            }
        }
        let mut edge_list: Vec<_> = edge_faces.keys().copied().collect();
        edge_list.sort_unstable();
        for &e in &edge_list {
            let fs = &edge_faces[&e];
            if fs.len() != 2 || fs[0] == fs[1] {
                return Err(PolyError::InconsistentEdgeUse(e.0, e.1));
            }
        }

        // orient faces consistently by flooding across shared edges
        let mut flip = vec![None::<bool>; faces.len()];
        for root in 0..faces.len() {
            if flip[root].is_some() {
                continue;
            }
            flip[root] = Some(false);
            let mut stack = vec![root];
            while let Some(i) = stack.pop() {
                let fi = flip[i].unwrap();
                let f = &faces[i];
                for j in 0..f.len() {
                    let (a, b) = (f[j], f[(j + 1) % f.len()]);
                    let (a, b) = if fi { (b, a) } else { (a, b) };
                    let fs = &edge_faces[&key(a, b)];
                    let other = if fs[0] == i { fs[1] } else { fs[0] };
                    // other must traverse b -> a after orientation
                    let g = &faces[other];
                    let has_ab = (0..g.len()).any(|t| g[t] == a && g[(t + 1) % g.len()] == b);
                    let need = has_ab;
                    match flip[other] {
                        None => {
                            flip[other] = Some(need);
                            stack.push(other);
                        }
                        Some(x) if x != need => {
                            return Err(PolyError::NotASphere { chi: 1 });
                        }
                        _ => {}
                    }
                }
            }
        }
        for (i, fl) in flip.iter().enumerate() {
            if fl.unwrap() {
                faces[i].reverse();
                if let Some(t) = &mut tags[i] {
                    t.corners.reverse();
                }
            }
        }

        // rotation from consecutive face triples
        let mut next: Vec<HashMap<usize, usize>> = vec![HashMap::new(); nv];
        for f in &faces {
            let k = f.len();
            for j in 0..k {
                let (u, v, w) = (f[j], f[(j + 1) % k], f[(j + 2) % k]);
                next[v].insert(u, w);
            }
        }
        let mut rotation = Vec::with_capacity(nv);
        for (v, nx) in next.iter().enumerate() {
            if nx.is_empty() {
                return Err(PolyError::Disconnected);
            }
            let start = *nx.keys().min().unwrap();
            let mut cyc = vec![start];
            let mut cur = nx[&start];
            while cur != start {
                cyc.push(cur);
                cur = *nx.get(&cur).ok_or(PolyError::NotASphere { chi: 0 })?;
                if cyc.len() > nx.len() {
                    break;
                }
            }
            if cyc.len() != nx.len() {
                // several fans meet at v: the surface is pinched there
                return Err(PolyError::NotSimple(format!(
                    "vertex {v} is not a manifold point"
                )));
            }
            rotation.push(cyc);
        }
        let p = Self::assemble(rotation, faces, tags, edge_list)?;
        Ok(p)
    }

    /// Builds a polyhedron from a rotation system, tracing its faces.
    pub fn from_rotation(rotation: Vec<Vec<usize>>) -> Result<Self, PolyError> {
        let nv = rotation.len();
        let mut edges = HashSet::new();
        for (u, nb) in rotation.iter().enumerate() {
            let set: HashSet<_> = nb.iter().collect();
            if set.len() != nb.len() {
                return Err(PolyError::NotSimple(format!("parallel edges at {u}")));
            }
            for &v in nb {
                if v == u {
                    return Err(PolyError::NotSimple(format!("loop at vertex {u}")));
                }
                if v >= nv || !rotation[v].contains(&u) {
                    return Err(PolyError::InconsistentEdgeUse(u.min(v), u.max(v)));
                }
                edges.insert(key(u, v));
            }
        }
        let mut used: HashSet<(usize, usize)> = HashSet::new();
        let mut faces = Vec::new();
        for u in 0..nv {
            for &v in &rotation[u] {
                if used.contains(&(u, v)) {
                    continue;
                }
                let mut face = vec![];
                let (mut a, mut b) = (u, v);
                loop {
                    used.insert((a, b));
                    face.push(a);
                    let nb = &rotation[b];
                    let i = nb.iter().position(|&x| x == a).unwrap();
                    let c = nb[(i + 1) % nb.len()];
                    a = b;
                    b = c;
                    if (a, b) == (u, v) {
                        break;
                    }
                }
                faces.push(face);
            }
        }
        let mut edge_list: Vec<_> = edges.into_iter().collect();
        edge_list.sort_unstable();
        // reuse the face-based validation (simple faces, distinct faces per edge)
        let nf = faces.len();
        for (i, f) in faces.iter().enumerate() {
            let distinct: HashSet<_> = f.iter().collect();
            if distinct.len() != f.len() || f.len() < 3 {
                return Err(PolyError::MalformedFace {
                    face: i,
                    reason: "face boundary is not a simple cycle".into(),
                });
            }
        }
        Self::assemble(rotation, faces, vec![None; nf], edge_list)
    }

    fn assemble(
        rotation: Vec<Vec<usize>>,
        faces: Vec<Vec<usize>>,
        tags: Vec<Option<FaceTag>>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, PolyError> {
        let nv = rotation.len();
        let mut face_of: HashMap<(usize, usize), usize> = HashMap::new();
        for (i, f) in faces.iter().enumerate() {
            for j in 0..f.len() {
                face_of.insert((f[j], f[(j + 1) % f.len()]), i);
            }
        }
        let dart_face: Vec<Vec<usize>> = rotation
            .iter()
            .enumerate()
            .map(|(u, nb)| nb.iter().map(|&v| face_of[&(u, v)]).collect())
            .collect();
        for &(a, b) in &edges {
            if face_of[&(a, b)] == face_of[&(b, a)] {
                return Err(PolyError::InconsistentEdgeUse(a, b));
            }
        }
        let p = Polyhedron {
            rotation,
            faces,
            tags,
            edges,
            dart_face,
        };
        if !p.is_connected_without(&[]) {
            return Err(PolyError::Disconnected);
        }
        let chi = nv as i64 - p.edges.len() as i64 + p.faces.len() as i64;
        if chi != 2 {
            return Err(PolyError::NotASphere { chi });
        }
        Ok(p)
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn rotation(&self) -> &[Vec<usize>] {
        &self.rotation
    }

    pub fn faces(&self) -> &[Vec<usize>] {
        &self.faces
    }

    pub fn face(&self, i: usize) -> &[usize] {
        &self.faces[i]
    }

    pub fn tags(&self) -> &[Option<FaceTag>] {
        &self.tags
    }

    /// Sorted list of edges `(u, v)` with `u < v`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.rotation[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edges.binary_search(&key(u, v)).is_ok()
    }

    /// Face on which the dart `u -> v` lies.
    pub fn dart_face(&self, u: usize, v: usize) -> Option<usize> {
        let i = self.rotation[u].iter().position(|&x| x == v)?;
        Some(self.dart_face[u][i])
    }

    /// The two faces sharing the edge `u v`.
    pub fn edge_faces(&self, u: usize, v: usize) -> Option<(usize, usize)> {
        Some((self.dart_face(u, v)?, self.dart_face(v, u)?))
    }

    /// Faces around `v` in rotation order.
    pub fn faces_at(&self, v: usize) -> &[usize] {
        &self.dart_face[v]
    }

    pub fn with_tags(&self, tags: Vec<Option<FaceTag>>) -> Self {
        assert_eq!(tags.len(), self.faces.len());
        Polyhedron {
            tags,
            ..self.clone()
        }
    }

    pub fn without_tags(&self) -> Self {
        self.with_tags(vec![None; self.faces.len()])
    }

    /// Mirror image: every face and rotation reversed.
    pub fn mirror(&self) -> Self {
        let faces: Vec<Vec<usize>> = self
            .faces
            .iter()
            .map(|f| f.iter().rev().copied().collect())
            .collect();
        let tags = self
            .tags
            .iter()
            .map(|t| {
                t.as_ref().map(|t| FaceTag {
                    class: t.class.clone(),
                    corners: t.corners.iter().rev().copied().collect(),
                })
            })
            .collect();
        Self::build_tagged(faces, tags).expect("mirror of a valid map is valid")
    }

    /// Applies a vertex permutation: vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Self {
        let faces = self
            .faces
            .iter()
            .map(|f| f.iter().map(|&v| perm[v]).collect())
            .collect();
        Self::build_tagged(faces, self.tags.clone()).expect("relabelling preserves validity")
    }

    pub fn kind(&self) -> Kind {
        let mut three = false;
        let mut four = false;
        for nb in &self.rotation {
            match nb.len() {
                3 => three = true,
                4 => four = true,
                _ => return Kind::NonRightAngled,
            }
        }
        match (three, four) {
            (false, true) => Kind::Ideal,
            (true, false) => Kind::Compact,
            _ => Kind::Mixed,
        }
    }

    pub fn counts(&self) -> CountsProfile {
        let mut p = BTreeMap::new();
        for f in &self.faces {
            *p.entry(f.len()).or_insert(0) += 1;
        }
        CountsProfile {
            v: self.vertex_count(),
            e: self.edge_count(),
            f: self.face_count(),
            p,
        }
    }

    /// True iff the 1-skeleton is 3-connected and has at least four vertices.
    pub fn is_steinitz(&self) -> bool {
        self.separating_set().is_none()
    }

    /// A set of at most two vertices whose removal disconnects the graph, or
    /// an empty set when there are fewer than four vertices.
    pub fn separating_set(&self) -> Option<Vec<usize>> {
        let n = self.vertex_count();
        if n < 4 {
            return Some(vec![]);
        }
        for a in 0..n {
            if !self.is_connected_without(&[a]) {
                return Some(vec![a]);
            }
            for b in a + 1..n {
                if !self.is_connected_without(&[a, b]) {
                    return Some(vec![a, b]);
                }
            }
        }
        None
    }

    fn is_connected_without(&self, removed: &[usize]) -> bool {
        let n = self.vertex_count();
        let mut seen = vec![false; n];
        for &r in removed {
            seen[r] = true;
        }
        let Some(start) = (0..n).find(|&v| !seen[v]) else {
            return true;
        };
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = removed.len() + 1;
        while let Some(u) = stack.pop() {
            for &w in &self.rotation[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// The dual map: faces become vertices, vertex `i` of the result is face `i`.
    pub fn dual(&self) -> Self {
        let faces: Vec<Vec<usize>> = self
            .dart_face
            .iter()
            .map(|fs| fs.iter().rev().copied().collect())
            .collect();
        Self::build_from_faces(faces).expect("dual of a polyhedral map is a polyhedral map")
    }

    /// Adjacency between faces: `adj[i]` are the faces sharing an edge with face `i`.
    pub fn face_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.face_count()];
        for &(u, v) in &self.edges {
            let (a, b) = self.edge_faces(u, v).unwrap();
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in &mut adj {
            a.sort_unstable();
            a.dedup();
        }
        adj
    }

    /// Edge shared by faces `a` and `b`, if any.
    pub fn shared_edge(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let f = &self.faces[a];
        (0..f.len())
            .map(|j| (f[j], f[(j + 1) % f.len()]))
            .find(|&(u, v)| self.dart_face(v, u) == Some(b))
            .map(|(u, v)| key(u, v))
    }

    pub fn canonical_code(&self) -> CanonicalCode {
        canonical::canonical_code(self)
    }

    /// The canonical representative `code.decode()` with this polyhedron's
    /// face tags carried over.
    pub fn canonical_representative(&self) -> (CanonicalCode, Polyhedron) {
        let (code, labels) = canonical::canonical_form(self);
        let rep = code.decode().expect("canonical codes decode");
        if self.tags.iter().all(Option::is_none) {
            return (code, rep);
        }
        let mut by_set: HashMap<Vec<usize>, usize> = HashMap::new();
        for (i, f) in self.faces.iter().enumerate() {
            let mut s: Vec<usize> = f.iter().map(|&v| labels[v] as usize - 1).collect();
            s.sort_unstable();
            by_set.insert(s, i);
        }
        let tags = rep
            .faces
            .iter()
            .map(|f| {
                let mut s = f.clone();
                s.sort_unstable();
                let i = by_set[&s];
                self.tags[i].as_ref().map(|t| {
                    let orig = &self.faces[i];
                    let corners = f
                        .iter()
                        .map(|&x| {
                            let j = orig
                                .iter()
                                .position(|&v| labels[v] as usize - 1 == x)
                                .unwrap();
                            t.corners[j]
                        })
                        .collect();
                    FaceTag {
                        class: t.class.clone(),
                        corners,
                    }
                })
            })
            .collect();
        (code, rep.with_tags(tags))
    }

    pub fn to_json(&self) -> PolyhedronJson {
        PolyhedronJson {
            faces: self.faces.clone(),
        }
    }
}

pub(crate) fn key(a: usize, b: usize) -> (usize, usize) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Position of `x` in the cyclic sequence `s`.
pub(crate) fn cyc_pos(s: &[usize], x: usize) -> Option<usize> {
    s.iter().position(|&y| y == x)
}
