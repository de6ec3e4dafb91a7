//! Genus-2 Jacobian arithmetic, Tate and Weil pairings, ℓ-torsion structure
//! and quartic CM-field screening over small finite fields.

pub mod ff;
pub mod poly;
pub mod curve;
pub mod linalg;
pub mod zeta;
pub mod pairing;
pub mod cmfield;
pub mod torsion;
pub mod harness;
