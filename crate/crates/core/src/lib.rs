//! Homological Goeritz equivalence of curves on the genus-2 Heegaard surface
//! of the 3-sphere.
//!
//! Everything is exact `i64` arithmetic with overflow reported as
//! [`Error::Overflow`]. The main entry points are
//! [`equivalence::decide_homological`], [`equivalence::decide_extended`] and
//! [`equivalence::zero_slope_screen`]; [`ttk`] reproduces the twisted torus
//! knot families end to end.

mod arith;
pub mod equivalence;
pub mod error;
pub mod factorization;
pub mod freegroup;
pub mod homology;
pub mod ttk;
pub mod words;

pub use error::{BlockSide, Error, Result};
pub use homology::{
    apply, dehn_twist, epsilon_star, gcd_pair, goeritz_form_from_block, split_product,
    symplectic_pairing, Block2Matrix, GoeritzMatrix, HomologyVector, SurfaceSlope, TwistCurve,
};
pub use words::{
    epsilon_parity, evaluate, generator_matrix, named_word, relators, verify_relators,
    GoeritzGenerator, GoeritzWord, Matrix4, NamedWord, Parity,
};
