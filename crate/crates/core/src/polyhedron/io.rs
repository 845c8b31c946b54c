use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{CanonicalCode, CodeError, PolyError, Polyhedron};

/// `{"faces": [[0, 1, 2], ...]}` with 0-based vertex indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedronJson {
    pub faces: Vec<Vec<usize>>,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("empty input")]
    Empty,
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Reads a polyhedron from either the JSON face-list format or an `RA1:` code,
/// chosen by the first non-blank character.
pub fn parse_polyhedron(text: &str) -> Result<Polyhedron, ParseError> {
    let t = text.trim();
    match t.chars().next() {
        None => Err(ParseError::Empty),
        Some('{') => {
            let j: PolyhedronJson = serde_json::from_str(t)?;
            Ok(Polyhedron::build_from_faces(j.faces)?)
        }
        Some(_) => {
            let code: CanonicalCode = t.parse()?;
            Ok(code.decode()?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn both_formats_parse() {
        let json =
            r#"{"faces": [[0,1,2],[0,2,3],[0,3,4],[0,4,1],[5,2,1],[5,3,2],[5,4,3],[5,1,4]]}"#;
        let p = parse_polyhedron(json).unwrap();
        assert_eq!(p.vertex_count(), 6);
        let code = p.canonical_code().to_string();
        let q = parse_polyhedron(&format!("  {code}\n")).unwrap();
        assert_eq!(q.canonical_code(), p.canonical_code());
        let back = serde_json::to_string(&q.to_json()).unwrap();
        assert_eq!(
            parse_polyhedron(&back).unwrap().canonical_code(),
            p.canonical_code()
        );
    }

    #[test]
    fn garbage_is_an_error() {
        assert!(matches!(parse_polyhedron(""), Err(ParseError::Empty)));
        assert!(matches!(
            parse_polyhedron("{faces"),
            Err(ParseError::Json(_))
        ));
        assert!(matches!(
            parse_polyhedron("XYZ"),
            Err(ParseError::Code(CodeError::MissingPrefix))
        ));
    }
}
