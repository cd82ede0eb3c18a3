//! Exact two-qubit Pauli algebra and projective lines over GF(2)^n.

pub mod correspondence;
pub mod exact_linalg;
pub mod finite_ring;
pub mod fixtures;
pub mod pauli;
pub mod projective_line;
pub mod relation;
pub mod verify;
