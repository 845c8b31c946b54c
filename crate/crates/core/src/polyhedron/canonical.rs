//! Isomorphism-invariant string codes for polyhedral maps.
//!
//! A code is the lexicographically least breadth-first labelling sequence over
//! all starting darts and both orientations, so mirror images share a code.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use super::{PolyError, Polyhedron};

const ALPHABET: &[u8; 64] = b"0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz-_";
pub const PREFIX: &str = "RA1:";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("code must start with {PREFIX}")]
    MissingPrefix,
    #[error("unknown header byte {0:?}")]
    BadHeader(char),
    #[error("invalid character {0:?}")]
    BadChar(char),
    #[error("truncated code")]
    Truncated,
    #[error("code does not describe a polyhedral map: {0}")]
    Invalid(#[from] PolyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode(String);

impl CanonicalCode {
    /// The code body without the `RA1:` prefix.
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn vertex_count(&self) -> usize {
        let bytes = self.0.as_bytes();
        let width = if bytes[0] == b'a' { 1 } else { 2 };
        read_value(&bytes[1..], width).map(|(v, _)| v).unwrap_or(0)
    }

    /// Rebuilds the labelled map described by the code.
    pub fn decode(&self) -> Result<Polyhedron, CodeError> {
        let bytes = self.0.as_bytes();
        let width = match bytes.first() {
            Some(b'a') => 1,
            Some(b'b') => 2,
            Some(&c) => return Err(CodeError::BadHeader(c as char)),
            None => return Err(CodeError::Truncated),
        };
        let mut rest = &bytes[1..];
        let (n, used) = read_value(rest, width)?;
        rest = &rest[used..];
        let mut rotation = Vec::with_capacity(n);
        for _ in 0..n {
            let mut nb = Vec::new();
            loop {
                let (x, used) = read_value(rest, width)?;
                rest = &rest[used..];
                if x == 0 {
                    break;
                }
                if x > n {
                    return Err(CodeError::Truncated);
                }
                nb.push(x - 1);
            }
            rotation.push(nb);
        }
        if !rest.is_empty() {
            return Err(CodeError::BadChar(rest[0] as char));
        }
        Ok(Polyhedron::from_rotation(rotation)?)
    }
}

fn read_value(s: &[u8], width: usize) -> Result<(usize, usize), CodeError> {
    if s.len() < width {
        return Err(CodeError::Truncated);
    }
    let mut v = 0;
    for &c in &s[..width] {
        let d = ALPHABET
            .iter()
            .position(|&a| a == c)
            .ok_or(CodeError::BadChar(c as char))?;
        v = v * 64 + d;
    }
    Ok((v, width))
}

impl fmt::Display for CanonicalCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{PREFIX}{}", self.0)
    }
}

impl FromStr for CanonicalCode {
    type Err = CodeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let body = s
            .trim()
            .strip_prefix(PREFIX)
            .ok_or(CodeError::MissingPrefix)?;
        let code = CanonicalCode(body.to_string());
        // validates the alphabet and structure
        code.decode()?;
        Ok(code)
    }
}

impl Serialize for CanonicalCode {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CanonicalCode {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Breadth-first labelling from the dart `u -> v`, walking rotations forwards
/// (`forward = true`) or backwards. Returns `None` as soon as the sequence
/// exceeds `best`.
fn bfs_sequence(
    p: &Polyhedron,
    u: usize,
    v: usize,
    forward: bool,
    best: Option<&[u16]>,
) -> Option<(Vec<u16>, Vec<u16>)> {
    let n = p.vertex_count();
    let rot = p.rotation();
    let mut label = vec![0u16; n];
    let mut first = vec![usize::MAX; n];
    let mut order = Vec::with_capacity(n);
    let mut seq: Vec<u16> = Vec::with_capacity(2 * p.edge_count() + n);
    let mut tied = best.is_some();
    label[u] = 1;
    first[u] = v;
    order.push(u);
    let mut next = 2u16;
    let mut idx = 0;
    while idx < order.len() {
        let x = order[idx];
        idx += 1;
        let nb = &rot[x];
        let d = nb.len();
        let start = nb.iter().position(|&y| y == first[x]).unwrap();
        for t in 0..=d {
            let val = if t == d {
                0
            } else {
                let w = if forward {
                    nb[(start + t) % d]
                } else {
                    nb[(start + d - t) % d]
                };
                if label[w] == 0 {
                    label[w] = next;
                    next += 1;
                    first[w] = x;
                    order.push(w);
                }
                label[w]
            };
            if tied {
                let b = best.unwrap()[seq.len()];
                match val.cmp(&b) {
                    Ordering::Greater => return None,
                    Ordering::Less => tied = false,
                    Ordering::Equal => {}
                }
            }
            seq.push(val);
        }
    }
    Some((seq, label))
}

pub(crate) fn canonical_code(p: &Polyhedron) -> CanonicalCode {
    canonical_form(p).0
}

/// The code together with the labelling that produced it: vertex `v` of `p`
/// becomes vertex `labels[v] - 1` of `code.decode()`.
pub(crate) fn canonical_form(p: &Polyhedron) -> (CanonicalCode, Vec<u16>) {
    let n = p.vertex_count();
    let rot = p.rotation();
    let sizes: Vec<usize> = p.faces().iter().map(|f| f.len()).collect();
    let invariant = |u: usize, v: usize| {
        let a = sizes[p.dart_face(u, v).unwrap()];
        let b = sizes[p.dart_face(v, u).unwrap()];
        (
            std::cmp::Reverse(rot[u].len()),
            std::cmp::Reverse(rot[v].len()),
            a.min(b),
            a.max(b),
        )
    };
    let mut starts = Vec::new();
    let mut best_inv = None;
    for (u, nbrs) in rot.iter().enumerate() {
        for &v in nbrs {
            let inv = invariant(u, v);
            match best_inv.as_ref().map(|b| inv.cmp(b)) {
                None | Some(Ordering::Less) => {
                    best_inv = Some(inv);
                    starts.clear();
                    starts.push((u, v));
                }
                Some(Ordering::Equal) => starts.push((u, v)),
                Some(Ordering::Greater) => {}
            }
        }
    }
    let mut best: Option<(Vec<u16>, Vec<u16>)> = None;
    for &(u, v) in &starts {
        for forward in [true, false] {
            if let Some(found) =
                bfs_sequence(p, u, v, forward, best.as_ref().map(|b| b.0.as_slice()))
            {
                best = Some(found);
            }
        }
    }
    let (seq, labels) = best.unwrap();
    (encode(n, &seq), labels)
}

fn encode(n: usize, seq: &[u16]) -> CanonicalCode {
    let (header, width) = if n < 64 { ('a', 1) } else { ('b', 2) };
    let mut s = String::with_capacity(1 + width * (seq.len() + 1));
    s.push(header);
    let mut put = |x: usize| {
        if width == 2 {
            s.push(ALPHABET[x / 64] as char);
        }
        s.push(ALPHABET[x % 64] as char);
    };
    put(n);
    for &x in seq {
        put(x as usize);
    }
    CanonicalCode(s)
}
