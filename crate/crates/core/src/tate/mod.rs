//! Tate cohomology of modules with an order-`l` operator, composition
//! factors, and the linkage test.

mod cohomology;
mod linalg;
mod linkage;
mod meataxe;
mod module;

pub use cohomology::{norm_operator, tate_cohomology, tate_module, tate_pair, TateJson, TateResult};
pub use linalg::{coordinates, quotient_basis, reduce_against, Mat};
pub use linkage::{
    element_name, linkage_check, linkage_instances, LinkageInput, LinkageInputJson, LinkageInstance, LinkageVerdict,
};
pub use meataxe::{charpoly, composition_factors, eval_poly, find_submodule, hom_space, is_isomorphic, spin, DEFAULT_DIM_BOUND};
pub use module::{mat_from_json, mat_to_json, CyclicModule, MatJson, ModuleJson};

#[cfg(test)]
mod tests;
