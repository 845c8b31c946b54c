//! Acceptance checks for the ravol workspace live in `tests/acceptance.rs`.
