//! Geometric realization of ideal right-angled polyhedra as orthogonal circle
//! patterns, and their volumes by decomposition into ideal tetrahedra.
//!
//! One ideal vertex (the apex) is sent to ∞. Its four faces become vertical
//! half-planes over a rectangle of lines; every other face is a hemisphere
//! over a circle. Adjacent circles are orthogonal, so the chord of face F cut
//! off by its neighbour G subtends the angle 2·arctan(r_G/r_F) at the centre of
//! F. The radii are therefore fixed by requiring these angles to go once round
//! every circle, Σ_G arctan(r_G/r_F) = π, solved by Newton's method in log r.

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, PI};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::numerics::signed_tet_volume;
use crate::polyhedron::{andreev_check, Kind, Polyhedron};
use crate::volumes::VolumeValue;

pub const DEFAULT_TOL: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 200;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RealizationError {
    #[error("only ideal right-angled polyhedra can be realized, got {0}")]
    NotIdealKind(Kind),
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("pattern inconsistent: residual {0:e}")]
    InconsistentPattern(f64),
    #[error("bad parameter: {0}")]
    BadParameter(String),
}

/// A point of the extended complex plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtPoint {
    Finite(Complex64),
    Infinity,
}

/// The boundary at infinity of a face plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FaceCircle {
    Circle {
        center: Complex64,
        radius: f64,
    },
    Line {
        point: Complex64,
        direction: Complex64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CirclePattern {
    pub apex: usize,
    pub faces: Vec<FaceCircle>,
    pub vertices: Vec<ExtPoint>,
    pub iterations: usize,
    /// Largest orthogonality or incidence defect, relative to the pattern size.
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RealizedPolyhedron {
    pub positions: Vec<ExtPoint>,
    pub pattern: CirclePattern,
    pub apex: usize,
}

/// The vertex labelled first by the canonical code.
pub fn default_apex(p: &Polyhedron) -> usize {
    let (_, labels) = crate::polyhedron::canonical::canonical_form(p);
    labels.iter().position(|&l| l == 1).unwrap_or(0)
}

fn require_ideal(p: &Polyhedron) -> Result<(), RealizationError> {
    let report = andreev_check(p);
    if report.kind != Kind::Ideal || !report.valid() {
        return Err(RealizationError::NotIdealKind(report.kind));
    }
    Ok(())
}

pub fn solve_pattern(p: &Polyhedron, tol: f64) -> Result<CirclePattern, RealizationError> {
    solve_pattern_at(p, default_apex(p), tol)
}

/// Solves for the circle pattern with `apex` sent to ∞.
pub fn solve_pattern_at(
    p: &Polyhedron,
    apex: usize,
    tol: f64,
) -> Result<CirclePattern, RealizationError> {
    if !(tol > 0.0) {
        return Err(RealizationError::BadParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    if apex >= p.vertex_count() {
        return Err(RealizationError::BadParameter(format!("no vertex {apex}")));
    }
    require_ideal(p)?;
    let line: Vec<bool> = (0..p.face_count())
        .map(|f| p.face(f).contains(&apex))
        .collect();
    let circles: Vec<usize> = (0..p.face_count()).filter(|&f| !line[f]).collect();
    let mut slot = vec![usize::MAX; p.face_count()];
    for (i, &f) in circles.iter().enumerate() {
        slot[f] = i;
    }
    let adj = p.face_adjacency();
    let (rho, iterations) = solve_radii(&circles, &slot, &line, &adj, tol)?;
    let radius = |f: usize| rho[slot[f]].exp();
    let (faces, vertices, layout_err) = layout(p, apex, &circles, &line, &radius)?;
    let residual = layout_err.max(pattern_defect(p, &faces, &vertices, &adj));
    if residual > tol.sqrt() {
        return Err(RealizationError::NoConvergence {
            iterations,
            residual,
        });
    }
    Ok(CirclePattern {
        apex,
        faces,
        vertices,
        iterations,
        residual,
    })
}

/// Newton's method on log radii. The first circle keeps radius 1.
fn solve_radii(
    circles: &[usize],
    slot: &[usize],
    line: &[bool],
    adj: &[Vec<usize>],
    tol: f64,
) -> Result<(Vec<f64>, usize), RealizationError> {
    let m = circles.len();
    let eqs = |rho: &[f64]| -> Vec<f64> {
        circles
            .iter()
            .map(|&f| {
                let s: f64 = adj[f]
                    .iter()
                    .map(|&g| {
                        if line[g] {
                            FRAC_PI_2
                        } else {
                            (rho[slot[g]] - rho[slot[f]]).exp().atan()
                        }
                    })
                    .sum();
                s - PI
            })
            .collect()
    };
    let norm = |v: &[f64]| v.iter().skip(1).fold(0.0f64, |a, x| a.max(x.abs()));
    let mut rho = vec![0.0; m];
    let mut phi = eqs(&rho);
    for it in 0..MAX_ITERATIONS {
        let err = norm(&phi);
        if err < tol * 1e-2 {
            return Ok((rho, it));
        }
        // Jacobian restricted to the free unknowns 1..m
        let mut jac = DMatrix::<f64>::zeros(m - 1, m - 1);
        for (i, &f) in circles.iter().enumerate().skip(1) {
            for &g in &adj[f] {
                if line[g] {
                    continue;
                }
                let w = 1.0 / (2.0 * (rho[slot[g]] - rho[i]).cosh());
                jac[(i - 1, i - 1)] -= w;
                let j = slot[g];
                if j > 0 {
                    jac[(i - 1, j - 1)] += w;
                }
            }
        }
        let rhs = DVector::from_iterator(m - 1, phi.iter().skip(1).map(|x| -x));
        let newton = jac.lu().solve(&rhs);
        let mut accepted = false;
        if let Some(step) = newton {
            let mut t = 1.0;
            for _ in 0..40 {
                let trial: Vec<f64> = std::iter::once(0.0)
                    .chain((1..m).map(|i| rho[i] + t * step[i - 1]))
                    .collect();
                let tphi = eqs(&trial);
                if norm(&tphi) < err {
                    rho = trial;
                    phi = tphi;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
        }
        if !accepted {
            // ascent along the equations, which form the gradient of a concave functional
            let mut t = 1.0;
            for _ in 0..60 {
                let trial: Vec<f64> = std::iter::once(0.0)
                    .chain((1..m).map(|i| rho[i] + t * phi[i]))
                    .collect();
                let tphi = eqs(&trial);
                if norm(&tphi) < err {
                    rho = trial;
                    phi = tphi;
                    accepted = true;
                    break;
                }
                t *= 0.5;
            }
        }
        if !accepted {
            return Err(RealizationError::NoConvergence {
                iterations: it,
                residual: err,
            });
        }
    }
    let residual = norm(&phi);
    if residual < tol {
        Ok((rho, MAX_ITERATIONS))
    } else {
        Err(RealizationError::NoConvergence {
            iterations: MAX_ITERATIONS,
            residual,
        })
    }
}

type Layout = (Vec<FaceCircle>, Vec<ExtPoint>, f64);

/// Places circle centres and vertices face by face, starting from the first
/// circle centred at 0.
fn layout(
    p: &Polyhedron,
    apex: usize,
    circles: &[usize],
    line: &[bool],
    radius: &dyn Fn(usize) -> f64,
) -> Result<Layout, RealizationError> {
    let nf = p.face_count();
    let mut center: Vec<Option<Complex64>> = vec![None; nf];
    let mut hits: Vec<Vec<Complex64>> = vec![Vec::new(); p.vertex_count()];
    let step = |f: usize, i: usize| -> f64 {
        let face = p.face(f);
        let (a, b) = (face[i], face[(i + 1) % face.len()]);
        let g = p.dart_face(b, a).unwrap();
        if line[g] {
            PI
        } else {
            2.0 * (radius(g) / radius(f)).atan()
        }
    };
    // vertices of a circle face from a known start vertex and angle
    let place =
        |f: usize, c: Complex64, start: usize, angle0: f64, hits: &mut Vec<Vec<Complex64>>| {
            let face = p.face(f);
            let k = face.len();
            let r = radius(f);
            let mut angle = angle0;
            for t in 0..k {
                let i = (start + t) % k;
                hits[face[i]].push(c + Complex64::from_polar(r, angle));
                angle += step(f, i);
            }
        };
    let root = circles[0];
    center[root] = Some(Complex64::new(0.0, 0.0));
    place(root, Complex64::new(0.0, 0.0), 0, 0.0, &mut hits);
    let mut queue = VecDeque::from([root]);
    let mut placed = 1;
    while let Some(f) = queue.pop_front() {
        let cf = center[f].unwrap();
        let face = p.face(f).to_vec();
        let k = face.len();
        for i in 0..k {
            let (a, b) = (face[i], face[(i + 1) % k]);
            let g = p.dart_face(b, a).unwrap();
            if line[g] || center[g].is_some() {
                continue;
            }
            let (za, zb) = (hits[a][0], hits[b][0]);
            let mid = (za + zb) / 2.0;
            let dir = (mid - cf) / (mid - cf).norm();
            let cg = cf + dir * (radius(f).powi(2) + radius(g).powi(2)).sqrt();
            center[g] = Some(cg);
            // in g the dart b -> a appears, so start at b
            let gface = p.face(g);
            let start = gface.iter().position(|&v| v == b).unwrap();
            place(g, cg, start, (zb - cg).arg(), &mut hits);
            queue.push_back(g);
            placed += 1;
        }
    }
    if placed != circles.len() {
        return Err(RealizationError::InconsistentPattern(f64::INFINITY));
    }
    let scale = circles
        .iter()
        .map(|&f| radius(f))
        .fold(0.0f64, f64::max)
        .max(1.0);
    let mut spread = 0.0f64;
    let mut vertices = Vec::with_capacity(p.vertex_count());
    for (v, h) in hits.iter().enumerate() {
        if v == apex {
            vertices.push(ExtPoint::Infinity);
            continue;
        }
        if h.is_empty() {
            return Err(RealizationError::InconsistentPattern(f64::INFINITY));
        }
        let mean = h.iter().sum::<Complex64>() / h.len() as f64;
        for z in h {
            spread = spread.max((z - mean).norm() / scale);
        }
        vertices.push(ExtPoint::Finite(mean));
    }
    let faces = (0..nf)
        .map(|f| {
            if line[f] {
                let pts: Vec<Complex64> = p
                    .face(f)
                    .iter()
                    .filter_map(|&v| finite(vertices[v]))
                    .collect();
                let (a, b) = (pts[0], pts[pts.len() - 1]);
                FaceCircle::Line {
                    point: a,
                    direction: (b - a) / (b - a).norm(),
                }
            } else {
                FaceCircle::Circle {
                    center: center[f].unwrap(),
                    radius: radius(f),
                }
            }
        })
        .collect();
    Ok((faces, vertices, spread))
}

fn finite(p: ExtPoint) -> Option<Complex64> {
    match p {
        ExtPoint::Finite(z) => Some(z),
        ExtPoint::Infinity => None,
    }
}

/// Largest relative violation of orthogonality and incidence.
fn pattern_defect(
    p: &Polyhedron,
    faces: &[FaceCircle],
    vertices: &[ExtPoint],
    adj: &[Vec<usize>],
) -> f64 {
    let scale = faces
        .iter()
        .filter_map(|c| match c {
            FaceCircle::Circle { radius, .. } => Some(*radius),
            FaceCircle::Line { .. } => None,
        })
        .fold(1.0f64, f64::max);
    let mut worst = 0.0f64;
    for (f, nb) in adj.iter().enumerate() {
        for &g in nb {
            let d = match (faces[f], faces[g]) {
                (
                    FaceCircle::Circle {
                        center: c1,
                        radius: r1,
                    },
                    FaceCircle::Circle {
                        center: c2,
                        radius: r2,
                    },
                ) => ((c1 - c2).norm_sqr() - r1 * r1 - r2 * r2).abs() / (r1 * r1 + r2 * r2),
                (FaceCircle::Circle { center, .. }, FaceCircle::Line { point, direction })
                | (FaceCircle::Line { point, direction }, FaceCircle::Circle { center, .. }) => {
                    ((center - point) * direction.conj()).im.abs() / scale
                }
                (
                    FaceCircle::Line { direction: d1, .. },
                    FaceCircle::Line { direction: d2, .. },
                ) => (d1 * d2.conj()).re.abs(),
            };
            worst = worst.max(d);
        }
    }
    for (f, face) in p.faces().iter().enumerate() {
        for &v in face {
            let Some(z) = finite(vertices[v]) else {
                continue;
            };
            let d = match faces[f] {
                FaceCircle::Circle { center, radius } => {
                    ((z - center).norm() - radius).abs() / radius
                }
                FaceCircle::Line { point, direction } => {
                    ((z - point) * direction.conj()).im.abs() / scale
                }
            };
            worst = worst.max(d);
        }
    }
    worst
}

/// Checks the pattern against `tol` and places the vertices.
pub fn realize(
    p: &Polyhedron,
    pattern: &CirclePattern,
    tol: f64,
) -> Result<RealizedPolyhedron, RealizationError> {
    if pattern.vertices.len() != p.vertex_count() || pattern.faces.len() != p.face_count() {
        return Err(RealizationError::BadParameter(
            "pattern does not belong to this polyhedron".into(),
        ));
    }
    let adj = p.face_adjacency();
    let residual = pattern
        .residual
        .max(pattern_defect(p, &pattern.faces, &pattern.vertices, &adj));
    if residual > tol.sqrt() {
        return Err(RealizationError::InconsistentPattern(residual));
    }
    Ok(RealizedPolyhedron {
        positions: pattern.vertices.clone(),
        pattern: pattern.clone(),
        apex: pattern.apex,
    })
}

/// Cross-ratio (x0, x1; x2, x3) = (x3 − x1)(x2 − x0) / ((x2 − x1)(x3 − x0)),
/// the shape parameter of the ideal tetrahedron on these points. It equals
/// (x3 − x1)/(x2 − x1) when x0 = ∞.
pub fn cross_ratio(x: [ExtPoint; 4]) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let diff = |i: usize, j: usize| -> Option<Complex64> {
        match (x[i], x[j]) {
            (ExtPoint::Finite(a), ExtPoint::Finite(b)) => Some(a - b),
            _ => None,
        }
    };
    // factors involving ∞ cancel in pairs
    let num = [diff(3, 1), diff(2, 0)];
    let den = [diff(2, 1), diff(3, 0)];
    let prod = |v: [Option<Complex64>; 2]| v.iter().flatten().fold(one, |a, b| a * b);
    prod(num) / prod(den)
}

/// A Möbius transformation z ↦ (az + b)/(cz + d).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mobius {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl Mobius {
    pub fn apply(&self, p: ExtPoint) -> ExtPoint {
        match p {
            ExtPoint::Infinity => {
                if self.c == Complex64::new(0.0, 0.0) {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::Finite(self.a / self.c)
                }
            }
            ExtPoint::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == 0.0 {
                    ExtPoint::Infinity
                } else {
                    ExtPoint::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }
}

/// Volume from ideal vertex positions: every face avoiding `apex` is fanned
/// from its lowest-numbered vertex and each triangle is coned to the apex.
/// Summands must share one orientation up to `10·tol`.
pub fn decomposition_volume(
    p: &Polyhedron,
    positions: &[ExtPoint],
    apex: usize,
    tol: f64,
) -> Result<f64, RealizationError> {
    let mut parts = Vec::new();
    for face in p.faces() {
        if face.contains(&apex) {
            continue;
        }
        let k = face.len();
        let s = (0..k).min_by_key(|&i| face[i]).unwrap();
        let v0 = face[s];
        for t in 1..k - 1 {
            let (v1, v2) = (face[(s + t) % k], face[(s + t + 1) % k]);
            let z = cross_ratio([positions[apex], positions[v0], positions[v1], positions[v2]]);
            parts.push(signed_tet_volume(z));
        }
    }
    let total: f64 = parts.iter().sum();
    let sign = total.signum();
    if let Some(bad) = parts.iter().map(|x| x * sign).find(|&x| x < -10.0 * tol) {
        return Err(RealizationError::InconsistentPattern(-bad));
    }
    Ok(total.abs())
}

/// Volume of an ideal right-angled polyhedron realized with `apex` at ∞.
pub fn ideal_volume_at(p: &Polyhedron, apex: usize, tol: f64) -> Result<f64, RealizationError> {
    let pattern = solve_pattern_at(p, apex, tol)?;
    let r = realize(p, &pattern, tol)?;
    decomposition_volume(p, &r.positions, r.apex, tol)
}

pub fn ideal_volume(p: &Polyhedron, tol: f64) -> Result<VolumeValue, RealizationError> {
    Ok(VolumeValue::realized(ideal_volume_at(
        p,
        default_apex(p),
        tol,
    )?))
}

/// Circle through three finite points, or `None` when they are collinear.
pub fn circumcircle(a: Complex64, b: Complex64, c: Complex64) -> Option<(Complex64, f64)> {
    let (b, c) = (b - a, c - a);
    let d = 2.0 * (b.re * c.im - b.im * c.re);
    if d.abs() < 1e-300 {
        return None;
    }
    let (nb, nc) = (b.norm_sqr(), c.norm_sqr());
    let u = Complex64::new((c.im * nb - b.im * nc) / d, (b.re * nc - c.re * nb) / d);
    Some((a + u, u.norm()))
}

/// Face circles after moving the pattern by a Möbius map so that faces `f`
/// and `g` (with disjoint circles) become concentric and `f` becomes the unit
/// circle. Symmetries of the polyhedron fixing both faces then act as
/// rotations about 0.
pub fn concentric_gauge(
    p: &Polyhedron,
    pattern: &CirclePattern,
    f: usize,
    g: usize,
) -> Result<Vec<(Complex64, f64)>, RealizationError> {
    let pts = &pattern.vertices;
    // move ∞ off every circle first
    let probe = pick_pole(pts);
    let pre = Mobius {
        a: Complex64::new(0.0, 0.0),
        b: Complex64::new(1.0, 0.0),
        c: Complex64::new(1.0, 0.0),
        d: -probe,
    };
    let moved: Vec<Complex64> = pts
        .iter()
        .map(|&x| finite(pre.apply(x)).expect("pole avoids vertices"))
        .collect();
    let circle_of =
        |face: usize, pts: &[Complex64]| -> Result<(Complex64, f64), RealizationError> {
            let v = p.face(face);
            circumcircle(pts[v[0]], pts[v[1]], pts[v[2]])
                .ok_or(RealizationError::InconsistentPattern(f64::INFINITY))
        };
    let (c1, r1) = circle_of(f, &moved)?;
    let (c2, r2) = circle_of(g, &moved)?;
    let dist = (c2 - c1).norm();
    if dist == 0.0 {
        return Err(RealizationError::BadParameter(
            "faces are already concentric".into(),
        ));
    }
    let u = (c2 - c1) / dist;
    let q = r1 * r1 + dist * dist - r2 * r2;
    let disc = q * q - 4.0 * dist * dist * r1 * r1;
    if disc <= 0.0 {
        return Err(RealizationError::BadParameter(format!(
            "faces {f} and {g} have intersecting circles"
        )));
    }
    let x1 = (q - disc.sqrt()) / (2.0 * dist);
    let x2 = (q + disc.sqrt()) / (2.0 * dist);
    let (l1, l2) = (c1 + u * x1, c1 + u * x2);
    let m = Mobius {
        a: Complex64::new(1.0, 0.0),
        b: -l1,
        c: Complex64::new(1.0, 0.0),
        d: -l2,
    };
    let img: Vec<Complex64> = moved
        .iter()
        .map(|&z| finite(m.apply(ExtPoint::Finite(z))).unwrap())
        .collect();
    let (_, rf) = circle_of(f, &img)?;
    let scaled: Vec<Complex64> = img.iter().map(|z| z / rf).collect();
    (0..p.face_count()).map(|h| circle_of(h, &scaled)).collect()
}

fn pick_pole(pts: &[ExtPoint]) -> Complex64 {
    let fin: Vec<Complex64> = pts.iter().filter_map(|&x| finite(x)).collect();
    let centroid = fin.iter().sum::<Complex64>() / fin.len() as f64;
    let spread = fin
        .iter()
        .map(|z| (z - centroid).norm())
        .fold(0.0f64, f64::max)
        .max(1.0);
    // candidates on a small spiral; keep the one farthest from every vertex
    (0..64)
        .map(|i| {
            centroid
                + Complex64::from_polar(
                    spread * 0.05 * (1.0 + i as f64 * 0.1),
                    0.7 + i as f64 * 2.39996,
                )
        })
        .max_by(|a, b| {
            let da = fin
                .iter()
                .map(|z| (z - a).norm())
                .fold(f64::INFINITY, f64::min);
            let db = fin
                .iter()
                .map(|z| (z - b).norm())
                .fold(f64::INFINITY, f64::min);
            da.total_cmp(&db)
        })
        .unwrap()
}

/// JSON description of the pattern for external plotting.
pub fn debug_dump(pattern: &CirclePattern) -> serde_json::Value {
    let faces: Vec<serde_json::Value> = pattern
        .faces
        .iter()
        .map(|c| match c {
            FaceCircle::Circle { center, radius } => serde_json::json!({"center": [center.re, center.im], "radius": radius}),
            FaceCircle::Line { point, direction } => {
                serde_json::json!({"line": true, "point": [point.re, point.im], "direction": [direction.re, direction.im]})
            }
        })
        .collect();
    let vertices: Vec<serde_json::Value> = pattern
        .vertices
        .iter()
        .map(|v| match v {
            ExtPoint::Finite(z) => serde_json::json!([z.re, z.im]),
            ExtPoint::Infinity => serde_json::json!("infinity"),
        })
        .collect();
    serde_json::json!({"apex": pattern.apex, "faces": faces, "vertices": vertices, "iterations": pattern.iterations, "residual": pattern.residual})
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::antiprism;
    use crate::numerics::{v_oct_f64, PrecisionSpec};
    use crate::volumes::antiprism_volume;

    #[test]
    fn octahedron_volume() {
        let p = antiprism(3).unwrap();
        let pat = solve_pattern(&p, DEFAULT_TOL).unwrap();
        assert_eq!(pat.faces.len(), 8);
        assert!(pat.residual < 1e-10, "{}", pat.residual);
        let v = ideal_volume(&p, DEFAULT_TOL).unwrap().value;
        assert!((v - v_oct_f64()).abs() < 1e-9, "{v}");
    }

    #[test]
    fn antiprisms_match_closed_form() {
        for n in 3..=8 {
            let p = antiprism(n).unwrap();
            let exact = antiprism_volume(n as u64, PrecisionSpec::double())
                .unwrap()
                .value;
            for apex in [0, 1, n] {
                let v = ideal_volume_at(&p, apex, DEFAULT_TOL).unwrap();
                assert!(
                    (v - exact).abs() < 1e-8,
                    "n={n} apex={apex}: {v} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn compact_polyhedra_are_rejected() {
        let l5 = crate::generators::lobell(5).unwrap();
        assert!(matches!(
            solve_pattern(&l5, DEFAULT_TOL),
            Err(RealizationError::NotIdealKind(Kind::Compact))
        ));
    }
}
