//! Exact lattices over the group ring `R = ℤ₍p₎C_p`.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: exact rationals, ℤ₍p₎ and p-adic valuations.
//! * [`groupring`]: `R`, `ℚC_p`, the cyclotomic ring `T = ℤ₍p₎[ζ_p]` and the
//!   maximal order `S ⊕ T` with its fibre-product description of `R`.
//! * [`plattice`]: p-local Hermite/Smith normal forms and ℤ₍p₎-lattices in `ℚ^N`.
//! * [`modulestruct`]: σ-lattices, their decomposition type `R^a ⊕ T^b ⊕ S^c`,
//!   R-bases of free lattices and compatible bases for `pM ⊆ L ⊆ M`.
//! * [`hermitian`]: σ-invariant forms, duals, and the splitting of free
//!   elementary lattices into a unimodular and a p-modular part.
//! * [`generate`] and [`acceptance`]: seeded instance generators and the
//!   property checks driven by the CLI `selftest` and the acceptance tests.
//!
//! Lattices are row spans and σ acts on the right (`x ↦ x·σ`) everywhere.

pub mod acceptance;
pub mod arith;
pub mod cancel;
pub mod generate;
pub mod groupring;
pub mod hermitian;
pub mod modulestruct;
pub mod plattice;
pub mod wire;

mod error;

pub use arith::{PLocal, Prime, Rational, Valuation};
pub use error::{Error, Result};
pub use groupring::{CycloElt, GroupRingElt, MaxOrderElt, QAlgebraElt};
pub use modulestruct::{
    CompatibleBasisResult, DecompositionType, PseudoBasisResult, RBasis, SigmaLattice,
};


pub use plattice::{QMatrix, ZpLattice};
pub use hermitian::{FormedLattice, HermitianGram, JordanSplit};
