//! Named families and the local moves that grow them.

mod families;
mod moves;
mod replay;
mod sum;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polyhedron::{CanonicalCode, Kind, PolyError, Polyhedron};

pub use families::{antiprism, lobell, tower};
pub use moves::{
    edge_addition, edge_surgery, edge_twist, edge_twist_candidates, good_edges, EdgeClass,
};
pub use replay::{replay, ReplayError, ReplayLog};
pub use sum::{connect_sum, glue, Matching, Sum};

pub type Edge = (usize, usize);

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MoveError {
    #[error("bad parameter: {0}")]
    BadParameter(String),
    #[error("bad operands: {0}")]
    BadOperands(String),
    #[error("edge {0:?} is not very good")]
    NotVeryGood(Edge),
    #[error("expected {expected} polyhedron, got {got}")]
    WrongKind { expected: Kind, got: Kind },
    #[error("faces have different sizes {0} and {1}")]
    SizeMismatch(usize, usize),
    #[error("ideal polyhedra can only be glued along triangles, got {0}-gons")]
    UnsupportedIdealGluing(usize),
    #[error("move produced an invalid map: {0}")]
    Invalid(#[from] PolyError),
}

/// One replayable move. Faces are given as vertex cycles of the polyhedron the
/// move is applied to; `other` names the second summand by its code.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "move", rename_all = "snake_case")]
pub enum MoveDescriptor {
    Twist {
        e1: Edge,
        e2: Edge,
    },
    Addition {
        face: Vec<usize>,
        ea: Edge,
        eb: Edge,
    },
    Surgery {
        edge: Edge,
    },
    Compose {
        face: Vec<usize>,
        other: CanonicalCode,
        other_face: Vec<usize>,
        offset: usize,
        reflect: bool,
    },
}

pub(crate) fn norm(e: Edge) -> Edge {
    if e.0 < e.1 {
        e
    } else {
        (e.1, e.0)
    }
}

/// Index of the face whose cycle is a rotation of `cycle` (same direction).
pub fn find_face(p: &Polyhedron, cycle: &[usize]) -> Option<usize> {
    p.faces().iter().position(|f| {
        f.len() == cycle.len()
            && (0..f.len()).any(|s| (0..f.len()).all(|t| f[(s + t) % f.len()] == cycle[t]))
    })
}

/// Renumbers vertex ids densely (keeping their relative order) and builds.
pub(crate) fn pack(
    faces: Vec<Vec<usize>>,
    tags: Vec<Option<crate::polyhedron::FaceTag>>,
) -> Result<Polyhedron, MoveError> {
    let mut ids: Vec<usize> = faces.iter().flatten().copied().collect();
    ids.sort_unstable();
    ids.dedup();
    let max = ids.last().copied().unwrap_or(0);
    let mut map = vec![usize::MAX; max + 1];
    for (i, &v) in ids.iter().enumerate() {
        map[v] = i;
    }
    let faces = faces
        .into_iter()
        .map(|f| f.into_iter().map(|v| map[v]).collect())
        .collect();
    Ok(Polyhedron::build_tagged(faces, tags)?)
}
