use serde::{Deserialize, Serialize};

use crate::polyhedron::{CanonicalCode, CodeError, Polyhedron};

use super::{edge_addition, edge_surgery, edge_twist, find_face, glue, MoveDescriptor, MoveError};

/// A seed code and the moves that rebuild a polyhedron from it.
///
/// Each move refers to vertex labels of the canonical representative
/// (`code.decode()`) of the polyhedron it is applied to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReplayLog {
    pub seed: CanonicalCode,
    pub moves: Vec<MoveDescriptor>,
}

#[derive(Debug, thiserror::Error)]
pub enum ReplayError {
    #[error("move {index}: {source}")]
    Move { index: usize, source: MoveError },
    #[error(transparent)]
    Code(#[from] CodeError),
}

impl MoveDescriptor {
    /// Applies the move to `p` (which must carry the labels the move refers to).
    pub fn apply(&self, p: &Polyhedron) -> Result<Polyhedron, MoveError> {
        match self {
            MoveDescriptor::Twist { e1, e2 } => edge_twist(p, *e1, *e2),
            MoveDescriptor::Addition { face, ea, eb } => {
                let f = find_face(p, face)
                    .ok_or_else(|| MoveError::BadOperands("face not found".into()))?;
                Ok(edge_addition(p, f, *ea, *eb)?.0)
            }
            MoveDescriptor::Surgery { edge } => edge_surgery(p, *edge),
            MoveDescriptor::Compose {
                face,
                other,
                other_face,
                offset,
                reflect,
            } => {
                let q = other
                    .decode()
                    .map_err(|e| MoveError::BadOperands(e.to_string()))?;
                if *reflect {
                    let w: Vec<usize> = other_face.iter().rev().copied().collect();
                    glue(p, face, &q.mirror(), &w, *offset)
                } else {
                    glue(p, face, &q, other_face, *offset)
                }
            }
        }
    }
}

/// Rebuilds the polyhedron described by `log`, returning the canonical
/// representative of the final result.
pub fn replay(log: &ReplayLog) -> Result<Polyhedron, ReplayError> {
    let mut cur = log.seed.decode()?;
    for (index, m) in log.moves.iter().enumerate() {
        let next = m
            .apply(&cur)
            .map_err(|source| ReplayError::Move { index, source })?;
        cur = next.canonical_code().decode()?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{antiprism, edge_twist_candidates};

    #[test]
    fn replays_a_twist_chain() {
        let seed = antiprism(4).unwrap().canonical_code();
        let mut cur = seed.decode().unwrap();
        let mut moves = vec![];
        for _ in 0..3 {
            let (e1, e2) = edge_twist_candidates(&cur)[0];
            let m = MoveDescriptor::Twist { e1, e2 };
            cur = m.apply(&cur).unwrap().canonical_code().decode().unwrap();
            moves.push(m);
        }
        let log = ReplayLog { seed, moves };
        let text = serde_json::to_string(&log).unwrap();
        let back: ReplayLog = serde_json::from_str(&text).unwrap();
        assert_eq!(
            replay(&back).unwrap().canonical_code(),
            cur.canonical_code()
        );
    }
}
