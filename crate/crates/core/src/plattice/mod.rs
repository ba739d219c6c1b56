//! Exact p-local linear algebra: normal forms and ℤ₍p₎-lattices in `ℚ^N`.

mod lattice;
mod matrix;
mod normal_form;

pub use lattice::ZpLattice;
pub use matrix::QMatrix;
pub(crate) use matrix::vec_scale;
pub use normal_form::{hnf_local, smith_local, snf_local, SmithForm};

/// Lattice generated by both row sets.
pub fn lattice_sum(a: &ZpLattice, b: &ZpLattice) -> crate::Result<ZpLattice> {
    a.sum(b)
}

pub fn lattice_intersection(a: &ZpLattice, b: &ZpLattice) -> crate::Result<ZpLattice> {
    a.intersection(b)
}

pub fn lattice_member(v: &[crate::Rational], l: &ZpLattice) -> bool {
    l.contains(v)
}

pub fn lattice_index(l: &ZpLattice, sub: &ZpLattice) -> crate::Result<i64> {
    l.index_of(sub)
}

pub fn dual_lattice(l: &ZpLattice, form: &QMatrix) -> crate::Result<ZpLattice> {
    l.dual(form)
}
