use std::collections::HashSet;

use crate::polyhedron::{FaceTag, Kind, Polyhedron};

use super::{pack, MoveError};

/// Which identifications of the two glued faces to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Matching {
    /// Vertex `i` of the first face goes to vertex `offset - i` of the second;
    /// `reflect` glues the mirror image of the second polyhedron instead.
    Single { offset: usize, reflect: bool },
    /// Every rotation and reflection, results deduplicated by code.
    All,
}

#[derive(Debug, Clone)]
pub struct Sum {
    pub poly: Polyhedron,
    /// The glued faces are known to be isometric, so volumes add.
    pub isometric: bool,
    pub offset: usize,
    pub reflect: bool,
}

/// Glues `p1` and `p2` along faces `f1` and `f2` of equal size.
///
/// Ideal polyhedra are glued along triangles: the triangles' edges disappear
/// and the surrounding faces merge pairwise. Compact polyhedra lose the two
/// glued faces and their boundary vertices.
pub fn connect_sum(
    p1: &Polyhedron,
    f1: usize,
    p2: &Polyhedron,
    f2: usize,
    matching: Matching,
) -> Result<Vec<Sum>, MoveError> {
    let k = p1.face(f1).len();
    let k2 = p2.face(f2).len();
    if k != k2 {
        return Err(MoveError::SizeMismatch(k, k2));
    }
    let (kind1, kind2) = (p1.kind(), p2.kind());
    if kind1 != kind2 {
        return Err(MoveError::WrongKind {
            expected: kind1,
            got: kind2,
        });
    }
    match kind1 {
        Kind::Ideal if k != 3 => return Err(MoveError::UnsupportedIdealGluing(k)),
        Kind::Ideal | Kind::Compact => {}
        other => {
            return Err(MoveError::WrongKind {
                expected: Kind::Compact,
                got: other,
            })
        }
    }
    let mirrored = p2.mirror();
    let one = |offset: usize, reflect: bool| -> Result<Sum, MoveError> {
        let q = if reflect { &mirrored } else { p2 };
        let poly = glue(p1, p1.face(f1), q, q.face(f2), offset)?;
        let isometric = kind1 == Kind::Ideal
            || tags_match(p1.tags()[f1].as_ref(), q.tags()[f2].as_ref(), offset);
        Ok(Sum {
            poly,
            isometric,
            offset,
            reflect,
        })
    };
    match matching {
        Matching::Single { offset, reflect } => Ok(vec![one(offset % k, reflect)?]),
        Matching::All => {
            let mut out: Vec<(String, Sum)> = Vec::new();
            let mut seen = HashSet::new();
            for reflect in [false, true] {
                for offset in 0..k {
                    let s = one(offset, reflect)?;
                    let code = s.poly.canonical_code().to_string();
                    if seen.insert(code.clone()) {
                        out.push((code, s));
                    } else if s.isometric {
                        let slot = out.iter_mut().find(|(c, _)| *c == code).unwrap();
                        slot.1.isometric = true;
                    }
                }
            }
            Ok(out.into_iter().map(|(_, s)| s).collect())
        }
    }
}

fn tags_match(a: Option<&FaceTag>, b: Option<&FaceTag>, offset: usize) -> bool {
    match (a, b) {
        (Some(a), Some(b)) if a.class == b.class => {
            let k = a.corners.len();
            (0..k).all(|i| a.corners[i] == b.corners[(offset + k - i % k) % k])
        }
        _ => false,
    }
}

/// Glues along explicit face cycles `u` of `p1` and `w` of `p2` (each in its
/// polyhedron's orientation), identifying `u[i]` with `w[(offset - i) mod k]`.
/// The result keeps the tags of untouched faces.
pub fn glue(
    p1: &Polyhedron,
    u: &[usize],
    p2: &Polyhedron,
    w: &[usize],
    offset: usize,
) -> Result<Polyhedron, MoveError> {
    let k = u.len();
    if w.len() != k {
        return Err(MoveError::SizeMismatch(k, w.len()));
    }
    let fu = super::find_face(p1, u)
        .ok_or_else(|| MoveError::BadOperands("first cycle is not a face".into()))?;
    let fw = super::find_face(p2, w)
        .ok_or_else(|| MoveError::BadOperands("second cycle is not a face".into()))?;
    let partner = |i: usize| w[(offset % k + k - i % k) % k];
    let shift = p1.vertex_count();
    let ideal = p1.kind() == Kind::Ideal;

    // faces across each edge of the glued faces, as (face index, interior vertices)
    let ring = |p: &Polyhedron, a: usize, b: usize| -> (usize, Vec<usize>) {
        // face containing the dart b -> a, listed from a onwards, without a and b
        let g = p.dart_face(b, a).unwrap();
        let f = p.face(g);
        let i = f.iter().position(|&x| x == a).unwrap();
        (g, (1..f.len() - 1).map(|j| f[(i + j) % f.len()]).collect())
    };

    let mut drop1 = HashSet::from([fu]);
    let mut drop2 = HashSet::from([fw]);
    let mut merged = Vec::with_capacity(k);
    for i in 0..k {
        let (g, xs) = ring(p1, u[i], u[(i + 1) % k]);
        let (h, ys) = ring(p2, partner(i + 1), partner(i));
        drop1.insert(g);
        drop2.insert(h);
        merged.push((xs, ys));
    }
    if drop1.len() != k + 1 || drop2.len() != k + 1 {
        return Err(MoveError::BadOperands(
            "glued face shares several edges with a neighbour".into(),
        ));
    }

    // vertex map for p2: identified vertices (ideal) or shifted copies
    let map2 = |x: usize| -> usize {
        if ideal {
            if let Some(j) = w.iter().position(|&y| y == x) {
                // w[j] = partner(i) for i = offset - j
                let i = (offset % k + k - j) % k;
                return u[i];
            }
        }
        x + shift
    };

    let mut faces = Vec::new();
    let mut tags = Vec::new();
    for (j, f) in p1.faces().iter().enumerate() {
        if !drop1.contains(&j) {
            faces.push(f.clone());
            tags.push(p1.tags()[j].clone());
        }
    }
    for (j, f) in p2.faces().iter().enumerate() {
        if !drop2.contains(&j) {
            faces.push(f.iter().map(|&x| map2(x)).collect());
            tags.push(p2.tags()[j].clone());
        }
    }
    for (i, (xs, ys)) in merged.into_iter().enumerate() {
        let mut face = Vec::with_capacity(xs.len() + ys.len() + 2);
        if ideal {
            // u_i, x.., u_{i+1}, y..
            face.push(u[i]);
            face.extend(xs);
            face.push(u[(i + 1) % k]);
            face.extend(ys.iter().map(|&y| map2(y)));
        } else {
            // x_i.., x_{i+1}, then y.. on the other side
            face.extend(xs);
            face.extend(ys.iter().map(|&y| y + shift));
        }
        faces.push(face);
        tags.push(None);
    }
    pack(faces, tags)
}
