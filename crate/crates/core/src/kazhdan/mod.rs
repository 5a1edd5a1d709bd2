//! Close pairs of local fields, the Kazhdan transfer of Hecke algebras, and
//! the checks of its multiplicativity, Galois equivariance and
//! compatibility with the Brauer map.

mod checks;
mod pair;

pub use checks::{
    check_galois_equivariance, check_kaz_hom, check_lemma_conv, check_main_diagram, random_gl, random_label,
    CaseKind, Report, RunConfig, Sample, EXHAUSTIVE_PAIR_LIMIT, LEMMA_CONV_ELEMENTS, LEVEL_SAMPLE_CAP,
};
pub use pair::{ClosePair, Diagram, ExtensionPair, PairMode, Transfer};
