//! Exact computations around the trace potential `Tr A[B,C]` on
//! representations of the (framed) 3-loop quiver: critical loci, stability,
//! Luna slices, the Koszul dg-algebra of a point and its Ext superpotential,
//! and Hilbert-scheme tangent comparisons.

pub mod cli;
pub mod dgalg;
pub mod error;
pub mod exactalg;
pub mod hilbtan;
pub mod koszul;
pub mod luna;
pub mod potential;
pub mod quiver;
pub mod stability;
pub mod superpotential;

pub use cli::random::random_rep;
pub use error::{Error, Result};
