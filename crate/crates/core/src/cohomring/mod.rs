//! Rational cohomology rings: `H^*(CG(nu); Q)` as a staircase quotient ring,
//! and the generator/relation presentation of `H^*(P(m, nu); R)`.

pub mod emit;
pub mod linalg;
pub mod presentation;
pub mod ring;
pub mod symbolic;

pub use presentation::{presentation, verify_presentation, verify_presentation_with, Presentation, PresentationReport};
pub use ring::{f_polys, NormalFormClass, StaircaseRing};
pub use symbolic::{pair_odd_factors, ChernSymbol, GenMonomial, GenPolynomial, Generator, OddSlot};

use crate::error::Result;
use crate::flagcomb::FlagType;

/// `c_p(γ_j)` in normal form (`j` 1-based).
pub fn chern_class(nu: &FlagType, j: usize, p: usize) -> Result<NormalFormClass> {
    StaircaseRing::new(nu).chern_class(j, p)
}
