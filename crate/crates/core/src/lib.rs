//! Naive cyclotomic norms and logarithmic units.
//!
//! The crate computes the rank and Galois character of the group of elements
//! of a number field that are norms from every layer of its cyclotomic
//! `Z_ℓ`-extension. Two independent routes are provided: a closed character
//! formula over the decomposition data `(G, D∞, Dℓ)`, and a brute-force
//! ℓ-adic kernel computation on explicit ℓ-unit generators of quadratic and
//! biquadratic fields.

pub mod chars;
pub mod groups;
pub mod numfield;
pub mod padic;
