//! Truncated rings `o/p^N`, their degree-`l` extensions, the closeness
//! isomorphisms and matched Galois generators.

mod spec;
mod tower;
mod truncated;

pub use spec::{ExtKind, ExtSpec, Model, RingSpec};
pub use tower::{
    build_extension, build_lambda, build_pi, matched_generators, pair_mode, primitive_root_of_unity,
    root_of_unity_residue, GaloisGenerator, GaloisRule, RingFamily, RingIso,
};
pub use truncated::{Elem, Ring, MAX_DEGREE, MAX_RING_SIZE};
