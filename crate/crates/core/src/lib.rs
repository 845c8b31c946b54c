//! Right-angled hyperbolic polyhedra: combinatorics, realizability, census
//! enumeration, volumes and normalized-volume spectra.

pub mod census;
pub mod generators;
pub mod numerics;
pub mod polyhedron;
pub mod realization;
pub mod spectra;
pub mod volumes;

pub use polyhedron::{andreev_check, CanonicalCode, Kind, Polyhedron, ValidityReport};
