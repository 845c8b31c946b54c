use serde::{Deserialize, Serialize};

use crate::polyhedron::{
    andreev_check, cyc_pos, prismatic_circuits, Kind, Polyhedron, ValidityReport,
};

use super::{norm, pack, Edge, MoveError};

/// Pairs of vertex-disjoint edges on a common face whose four endpoints are
/// 4-valent, sorted.
pub fn edge_twist_candidates(p: &Polyhedron) -> Vec<(Edge, Edge)> {
    let mut out = Vec::new();
    for f in p.faces() {
        let k = f.len();
        for s in 0..k {
            for t in s + 1..k {
                let (a, b) = (f[s], f[(s + 1) % k]);
                let (c, d) = (f[t], f[(t + 1) % k]);
                if a == c || a == d || b == c || b == d {
                    continue;
                }
                if [a, b, c, d].iter().all(|&v| p.degree(v) == 4) {
                    let (e1, e2) = (norm((a, b)), norm((c, d)));
                    out.push(if e1 < e2 { (e1, e2) } else { (e2, e1) });
                }
            }
        }
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Locates a face containing both edges and rotates it to
/// `[a, b, P1.., c, d, P2..]` with `{a, b} = e1` and `{c, d} = e2`.
fn split_face(p: &Polyhedron, e1: Edge, e2: Edge) -> Option<(usize, Vec<usize>, usize)> {
    for (i, f) in p.faces().iter().enumerate() {
        let k = f.len();
        let pos = |e: Edge| (0..k).find(|&j| norm((f[j], f[(j + 1) % k])) == norm(e));
        if let (Some(s), Some(t)) = (pos(e1), pos(e2)) {
            let rotated: Vec<usize> = (0..k).map(|j| f[(s + j) % k]).collect();
            return Some((i, rotated, (t + k - s) % k));
        }
    }
    None
}

/// Replaces the disjoint edges `e1`, `e2` of a face by a new vertex joined to
/// their four endpoints.
pub fn edge_twist(p: &Polyhedron, e1: Edge, e2: Edge) -> Result<Polyhedron, MoveError> {
    let (e1, e2) = (norm(e1), norm(e2));
    let cands = edge_twist_candidates(p);
    let key = if e1 < e2 { (e1, e2) } else { (e2, e1) };
    if cands.binary_search(&key).is_err() {
        return Err(MoveError::BadOperands(format!(
            "{e1:?} and {e2:?} are not a twist pair"
        )));
    }
    let (fi, f, t) = split_face(p, e1, e2).expect("candidate edges share a face");
    let (a, b, c, d) = (f[0], f[1], f[t], f[t + 1]);
    let g1 = p.dart_face(b, a).unwrap();
    let g2 = p.dart_face(d, c).unwrap();
    if g1 == g2 {
        return Err(MoveError::BadOperands(
            "both edges border the same second face".into(),
        ));
    }
    let v = p.vertex_count();
    let mut faces = Vec::with_capacity(p.face_count() + 1);
    for (j, face) in p.faces().iter().enumerate() {
        if j == fi {
            continue;
        }
        let mut face = face.clone();
        if j == g1 {
            insert_after(&mut face, b, v);
        } else if j == g2 {
            insert_after(&mut face, d, v);
        }
        faces.push(face);
    }
    let mut left: Vec<usize> = f[1..=t].to_vec();
    left.push(v);
    let mut right: Vec<usize> = f[t + 1..].to_vec();
    right.push(a);
    right.push(v);
    faces.push(left);
    faces.push(right);
    let n = faces.len();
    Ok(Polyhedron::build_tagged(faces, vec![None; n])?)
}

fn insert_after(face: &mut Vec<usize>, x: usize, v: usize) {
    let i = cyc_pos(face, x).unwrap();
    face.insert(i + 1, v);
}

/// Subdivides two disjoint edges of face `f` and joins the new vertices by an
/// edge across `f`. The result is returned with its validity report.
pub fn edge_addition(
    p: &Polyhedron,
    f: usize,
    ea: Edge,
    eb: Edge,
) -> Result<(Polyhedron, ValidityReport), MoveError> {
    let face = p
        .faces()
        .get(f)
        .ok_or_else(|| MoveError::BadOperands(format!("no face {f}")))?;
    let k = face.len();
    let pos = |e: Edge| (0..k).find(|&j| norm((face[j], face[(j + 1) % k])) == norm(e));
    let (Some(s), Some(t)) = (pos(ea), pos(eb)) else {
        return Err(MoveError::BadOperands(
            "edges are not on the face boundary".into(),
        ));
    };
    let (ea, eb) = (norm(ea), norm(eb));
    if ea == eb || ea.0 == eb.0 || ea.0 == eb.1 || ea.1 == eb.0 || ea.1 == eb.1 {
        return Err(MoveError::BadOperands(
            "edges must be distinct and non-adjacent".into(),
        ));
    }
    let rot: Vec<usize> = (0..k).map(|j| face[(s + j) % k]).collect();
    let t = (t + k - s) % k;
    let (a, b, c, d) = (rot[0], rot[1], rot[t], rot[t + 1]);
    let ga = p.dart_face(b, a).unwrap();
    let gb = p.dart_face(d, c).unwrap();
    let (sv, tv) = (p.vertex_count(), p.vertex_count() + 1);
    let mut faces = Vec::with_capacity(p.face_count() + 1);
    for (j, fc) in p.faces().iter().enumerate() {
        if j == f {
            continue;
        }
        let mut fc = fc.clone();
        if j == ga {
            insert_after(&mut fc, b, sv);
        }
        if j == gb {
            insert_after(&mut fc, d, tv);
        }
        faces.push(fc);
    }
    let mut first = vec![sv];
    first.extend_from_slice(&rot[1..=t]);
    first.push(tv);
    let mut second = vec![tv];
    second.extend_from_slice(&rot[t + 1..]);
    second.push(a);
    second.push(sv);
    faces.push(first);
    faces.push(second);
    let n = faces.len();
    let q = Polyhedron::build_tagged(faces, vec![None; n])?;
    let report = andreev_check(&q);
    Ok((q, report))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeClass {
    Good,
    VeryGood,
}

/// The two faces at the ends of edge `(u, v)` that do not contain it.
fn end_faces(p: &Polyhedron, u: usize, v: usize) -> (usize, usize) {
    let (a, b) = p.edge_faces(u, v).unwrap();
    let other = |x: usize| *p.faces_at(x).iter().find(|&&f| f != a && f != b).unwrap();
    (other(u), other(v))
}

/// Edges joining two distinct, non-adjacent faces with at least six sides;
/// very good when no prismatic 5-circuit crosses the edge.
pub fn good_edges(p: &Polyhedron) -> Result<Vec<(Edge, EdgeClass)>, MoveError> {
    let kind = p.kind();
    if kind != Kind::Compact {
        return Err(MoveError::WrongKind {
            expected: Kind::Compact,
            got: kind,
        });
    }
    let adj = p.face_adjacency();
    let mut good = Vec::new();
    for &(u, v) in p.edges() {
        let (fu, fv) = end_faces(p, u, v);
        if fu != fv
            && p.face(fu).len() >= 6
            && p.face(fv).len() >= 6
            && adj[fu].binary_search(&fv).is_err()
        {
            good.push((u, v));
        }
    }
    if good.is_empty() {
        return Ok(vec![]);
    }
    let circuits = prismatic_circuits(p, 5);
    Ok(good
        .into_iter()
        .map(|e| {
            let crossed = circuits
                .iter()
                .any(|c| c.crossed_edges.iter().any(|&x| norm(x) == e));
            (
                e,
                if crossed {
                    EdgeClass::Good
                } else {
                    EdgeClass::VeryGood
                },
            )
        })
        .collect())
}

/// Deletes a very good edge, dissolving its endpoints.
pub fn edge_surgery(p: &Polyhedron, e: Edge) -> Result<Polyhedron, MoveError> {
    let e = norm(e);
    let classes = good_edges(p)?;
    if !classes.contains(&(e, EdgeClass::VeryGood)) {
        return Err(MoveError::NotVeryGood(e));
    }
    let (s, t) = e;
    let fa = p.dart_face(s, t).unwrap();
    let fb = p.dart_face(t, s).unwrap();
    let (cs, ct) = end_faces(p, s, t);
    let after = |face: &[usize], x: usize| -> Vec<usize> {
        // vertices following x (x and its successor excluded) around the face
        let i = cyc_pos(face, x).unwrap();
        (2..face.len())
            .map(|j| face[(i + j) % face.len()])
            .collect()
    };
    // face A = [s, t, R_A..], face B = [t, s, R_B..]
    let mut merged = after(p.face(fa), s);
    merged.extend(after(p.face(fb), t));
    let mut faces = Vec::with_capacity(p.face_count() - 1);
    let mut tags = Vec::with_capacity(p.face_count() - 1);
    for (j, f) in p.faces().iter().enumerate() {
        if j == fa || j == fb {
            continue;
        }
        let mut f = f.clone();
        if j == cs || j == ct {
            f.retain(|&x| x != s && x != t);
        }
        faces.push(f);
        tags.push(None);
    }
    faces.push(merged);
    tags.push(None);
    pack(faces, tags)
}
