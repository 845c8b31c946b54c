use crate::polyhedron::{FaceTag, Polyhedron};

use super::MoveError;

/// The antiprism A(n): two n-gons joined by a band of 2n triangles.
pub fn antiprism(n: usize) -> Result<Polyhedron, MoveError> {
    if n < 3 {
        return Err(MoveError::BadParameter(format!(
            "antiprism needs n >= 3, got {n}"
        )));
    }
    let a = |i: usize| i % n;
    let b = |i: usize| n + i % n;
    let mut faces = vec![(0..n).collect::<Vec<_>>()];
    for i in 0..n {
        faces.push(vec![a(i + 1), a(i), b(i)]);
        faces.push(vec![b(i), b(i + 1), a(i + 1)]);
    }
    faces.push((0..n).rev().map(b).collect());
    Ok(Polyhedron::build_from_faces(faces)?)
}

/// The Löbell polyhedron L(n): two n-gons joined by two layers of n pentagons.
///
/// Faces carry isometry tags. For n = 5 (the regular dodecahedron) every face
/// is in one class; otherwise the bases form one class and the lateral
/// pentagons another, with corner types 0 on the base, 1 next to it and 2 at
/// the apex.
pub fn lobell(n: usize) -> Result<Polyhedron, MoveError> {
    tower(n, 1)
}

/// The tower L_k(n): k copies of L(n) stacked along their n-gonal bases.
pub fn tower(n: usize, k: usize) -> Result<Polyhedron, MoveError> {
    if n < 5 {
        return Err(MoveError::BadParameter(format!(
            "Löbell polyhedra need n >= 5, got {n}"
        )));
    }
    if k < 1 {
        return Err(MoveError::BadParameter(
            "tower needs at least one layer".into(),
        ));
    }
    // rings: 0 = top base, then (b, c) for each layer, last = bottom base
    let ring = |r: usize, i: usize| r * n + i % n;
    let last = 2 * k + 1;
    let regular = n == 5;
    let base_tag = || {
        Some(FaceTag::uniform(
            if regular {
                "L5:face".to_string()
            } else {
                format!("L{n}:base")
            },
            n,
        ))
    };
    let lateral = |corners: [u8; 5]| {
        Some(if regular {
            FaceTag::uniform("L5:face", 5)
        } else {
            FaceTag {
                class: format!("L{n}:lateral"),
                corners: corners.to_vec(),
            }
        })
    };

    let mut faces = vec![(0..n).map(|i| ring(0, i)).collect::<Vec<_>>()];
    let mut tags = vec![base_tag()];
    for i in 0..n {
        faces.push(vec![
            ring(0, i),
            ring(0, i + 1),
            ring(1, i + 1),
            ring(2, i),
            ring(1, i),
        ]);
        tags.push(lateral([0, 0, 1, 2, 1]));
    }
    for layer in 1..k {
        let (b, c) = (2 * layer - 1, 2 * layer);
        let (b2, c2) = (b + 2, c + 2);
        for i in 0..n {
            faces.push(vec![
                ring(c, i),
                ring(b, i + 1),
                ring(c, i + 1),
                ring(b2, i + 1),
                ring(c2, i),
                ring(b2, i),
            ]);
            tags.push(None);
        }
    }
    let (b, c) = (2 * k - 1, 2 * k);
    for i in 0..n {
        faces.push(vec![
            ring(c, i),
            ring(b, i + 1),
            ring(c, i + 1),
            ring(last, i + 1),
            ring(last, i),
        ]);
        tags.push(lateral([1, 2, 1, 0, 0]));
    }
    faces.push((0..n).rev().map(|i| ring(last, i)).collect());
    tags.push(base_tag());
    Ok(Polyhedron::build_tagged(faces, tags)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyhedron::{andreev_check, Kind};

    #[test]
    fn antiprism_shapes() {
        for n in 3..10 {
            let p = antiprism(n).unwrap();
            let c = p.counts();
            assert_eq!(
                (c.v, c.f, c.p(3)),
                (2 * n, 2 * n + 2, if n == 3 { 8 } else { 2 * n })
            );
            assert_eq!(c.ideal_defect(), 0);
            let r = andreev_check(&p);
            assert!(r.valid(), "A({n}) {:?}", r.witnesses);
            assert_eq!(r.kind, Kind::Ideal);
        }
        assert!(antiprism(2).is_err());
    }

    #[test]
    fn lobell_shapes() {
        for n in 5..10 {
            let p = lobell(n).unwrap();
            let c = p.counts();
            assert_eq!((c.v, c.f), (4 * n, 2 * n + 2));
            assert_eq!(c.compact_defect(), 0);
            let r = andreev_check(&p);
            assert!(r.valid(), "L({n}) {:?}", r.witnesses);
            assert_eq!(r.kind, Kind::Compact);
        }
        let c7 = lobell(7).unwrap().counts();
        assert_eq!((c7.p(5), c7.p(7)), (14, 2));
        assert!(lobell(4).is_err());
    }

    #[test]
    fn towers() {
        assert_eq!(tower(5, 2).unwrap().vertex_count(), 30);
        let t = tower(6, 3).unwrap();
        assert_eq!(t.vertex_count(), 48);
        assert!(andreev_check(&t).valid());
        assert_eq!(
            tower(5, 1).unwrap().canonical_code(),
            lobell(5).unwrap().canonical_code()
        );
        assert!(tower(6, 0).is_err());
    }

    #[test]
    fn dodecahedron_dual_is_icosahedron() {
        let d = lobell(5).unwrap().dual();
        let c = d.counts();
        assert_eq!((c.v, c.e, c.f, c.p(3)), (12, 30, 20, 20));
        assert!((0..12).all(|v| d.degree(v) == 5));
    }
}
