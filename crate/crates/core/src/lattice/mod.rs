//! Matrices over truncated local rings, the Cartan decomposition, and
//! coset bookkeeping for principal congruence subgroups of `GL_n`.

mod cartan;
mod coset;
mod label;
mod matrix;

pub use cartan::{cartan_by_minors, smith_cartan, Cartan};
pub use coset::{depth, spread, DoubleKey, LeftKey, Side};
pub use label::{
    enumerate_labels, gamma_stabilizer, labels_with_invariant, required_precision, CosetLabel, LabelJson, Window,
    DEFAULT_BUDGET,
};
pub use matrix::{EntryJson, FieldElement, GroupMatrix, MatrixJson};

use crate::error::Result;
use crate::ring::GaloisGenerator;

/// Entrywise Galois action on a matrix over the extension. For
/// `g = pi^s M` this is `pi^s (sigma(pi)/pi)^s sigma(M)`.
pub fn sigma_on_group(gen: &GaloisGenerator, g: &GroupMatrix) -> Result<GroupMatrix> {
    let ring = g.ring().clone();
    let scale = if g.shift() == 0 {
        ring.one()
    } else {
        // sigma(pi)/pi is a unit known to full precision one level up
        let up = gen.family().at(ring.base_precision() + 1)?;
        let ratio = up.transfer(up.div_pi(gen.apply(&up, up.pi())?), &ring);
        let ratio = if g.shift() > 0 { ratio } else { ring.inv_unit(ratio)? };
        ring.pow(ratio, g.shift().unsigned_abs())
    };
    let data: Vec<u32> = g
        .data()
        .iter()
        .map(|&x| Ok(ring.mul(scale, gen.apply(&ring, x)?)))
        .collect::<Result<_>>()?;
    Ok(GroupMatrix::from_parts(ring, g.n(), g.shift(), g.precision(), data))
}
