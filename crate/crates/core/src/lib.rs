//! Exact arithmetic for mod-l Hecke algebras of GL_n over pairs of close
//! local fields, presented through truncated rings.

pub mod error;
pub mod gf;
pub mod poly;
pub mod hecke;
pub mod kazhdan;
pub mod lattice;
pub mod ring;
pub mod tate;

pub use error::{Error, Result};
