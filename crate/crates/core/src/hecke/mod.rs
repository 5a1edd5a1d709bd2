//! Mod-`l` Hecke algebras `H(G, K)`, the Galois action on the extension
//! side, and restriction of invariants to the base field.

mod algebra;
mod galois;

pub use algebra::{HeckeAlgebra, HeckeElement, HeckeJson, SideJson, StructureConstants, TermJson};
pub use galois::{is_sigma_invariant, sigma_act, sigma_key, sigma_orbit, sigma_orbit_sum, Brauer};
pub use crate::gf::CoeffField;

#[cfg(test)]
mod tests;
