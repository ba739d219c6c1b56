use num_traits::{One, Zero};

use super::matrix::{vec_scale, vec_sub, QMatrix};
use super::normal_form::{hnf_local, smith_local, snf_local};
use crate::arith::{is_p_local, Prime, Rational};
use crate::{Error, Result};

/// A ℤ₍p₎-lattice in `ℚ^N`, possibly of rank below `N`.
///
/// The basis is always kept in canonical p-local HNF, so two lattices are
/// equal exactly when their bases are equal.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ZpLattice {
    p: Prime,
    dim: usize,
    basis: QMatrix,
}

impl ZpLattice {
    /// Lattice generated by the rows of `gens` (which may be dependent).
    pub fn from_generators(gens: &QMatrix, p: Prime) -> Result<Self> {
        Ok(ZpLattice { p, dim: gens.ncols(), basis: hnf_local(gens, p)? })
    }

    pub fn from_rows(dim: usize, rows: Vec<Vec<Rational>>, p: Prime) -> Result<Self> {
        if rows.iter().any(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch(format!("generator length differs from {dim}")));
        }
        Self::from_generators(&QMatrix::from_rows(dim, rows), p)
    }

    pub fn standard(dim: usize, p: Prime) -> Self {
        ZpLattice { p, dim, basis: QMatrix::identity(dim) }
    }

    pub fn zero(dim: usize, p: Prime) -> Self {
        ZpLattice { p, dim, basis: QMatrix::zeros(0, dim) }
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.basis.nrows()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.dim
    }

    pub fn basis(&self) -> &QMatrix {
        &self.basis
    }

    fn check_compatible(&self, other: &ZpLattice) -> Result<()> {
        self.p.check_same(other.p)?;
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!("ambient {} vs {}", self.dim, other.dim)));
        }
        Ok(())
    }

    pub fn scale(&self, c: &Rational) -> Result<Self> {
        Self::from_generators(&self.basis.scale(c), self.p)
    }

    /// Image of the lattice under `x ↦ x·A`.
    pub fn map(&self, a: &QMatrix) -> Result<Self> {
        if a.nrows() != self.dim {
            return Err(Error::DimensionMismatch("map matrix height".into()));
        }
        Self::from_generators(&(&self.basis * a), self.p)
    }

    pub fn sum(&self, other: &ZpLattice) -> Result<Self> {
        self.check_compatible(other)?;
        Self::from_generators(&self.basis.vstack(&other.basis), self.p)
    }

    /// Intersection via the Zassenhaus construction: the row module of
    /// `[[A, A], [B, 0]]` meets `0 × ℚ^N` in `0 × (A ∩ B)`.
    pub fn intersection(&self, other: &ZpLattice) -> Result<Self> {
        self.check_compatible(other)?;
        let n = self.dim;
        let top = self.basis.hstack(&self.basis);
        let bottom = other.basis.hstack(&QMatrix::zeros(other.rank(), n));
        let h = hnf_local(&top.vstack(&bottom), self.p)?;
        let rows: Vec<Vec<Rational>> = h
            .row_iter()
            .filter(|r| r[..n].iter().all(Zero::is_zero))
            .map(|r| r[n..].to_vec())
            .collect();
        Self::from_rows(n, rows, self.p)
    }

    /// ℚ-coordinates of `v` in the basis, if `v` lies in the ℚ-span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.dim, "vector length");
        // echelon basis: peel off pivots left to right
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        let mut col = 0;
        for row in self.basis.row_iter() {
            let pc = row.iter().position(|x| !x.is_zero()).expect("nonzero basis row");
            if rest[col..pc].iter().any(|x| !x.is_zero()) {
                return None;
            }
            let c = &rest[pc] / &row[pc];
            if !c.is_zero() {
                rest = vec_sub(&rest, &vec_scale(row, &c));
            }
            coords.push(c);
            col = pc + 1;
        }
        if rest.iter().any(|x| !x.is_zero()) {
            return None;
        }
        Some(coords)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coordinates(v).is_some_and(|c| c.iter().all(|x| is_p_local(x, self.p)))
    }

    pub fn contains_lattice(&self, other: &ZpLattice) -> bool {
        self.p == other.p && self.dim == other.dim && other.basis.row_iter().all(|r| self.contains(r))
    }

    /// Coordinates of `sub`'s basis rows in this lattice's basis.
    fn coordinate_matrix(&self, sub: &ZpLattice) -> Result<QMatrix> {
        let rows = sub
            .basis
            .row_iter()
            .map(|r| self.coordinates(r).ok_or(Error::NotSublattice))
            .collect::<Result<Vec<_>>>()?;
        Ok(QMatrix::from_rows(self.rank(), rows))
    }

    /// Exponent `k` with `[self : sub] = p^k`.
    pub fn index_of(&self, sub: &ZpLattice) -> Result<i64> {
        self.check_compatible(sub)?;
        if sub.rank() != self.rank() || !self.contains_lattice(sub) {
            return Err(Error::NotSublattice);
        }
        let c = self.coordinate_matrix(sub)?;
        Ok(snf_local(&c, self.p)?.iter().sum())
    }

    /// Basis `y` of `self` and exponents `m` such that the `p^{m_i} y_i` form a
    /// basis of `sub` (equal ranks, `sub ⊆ self`).
    pub fn adapted_basis(&self, sub: &ZpLattice) -> Result<(QMatrix, Vec<i64>)> {
        self.check_compatible(sub)?;
        if sub.rank() != self.rank() || !self.contains_lattice(sub) {
            return Err(Error::NotSublattice);
        }
        let c = self.coordinate_matrix(sub)?;
        let s = smith_local(&c, self.p)?;
        // U·C·V = D  ⇒  U·sub = D·(V⁻¹·self)
        let v_inv = s.right.inverse().expect("unimodular transform");
        Ok((&v_inv * &self.basis, s.exponents))
    }

    /// Gram matrix of the basis under the ambient form.
    pub fn gram(&self, form: &QMatrix) -> QMatrix {
        &(&self.basis * form) * &self.basis.transpose()
    }

    /// Dual lattice inside the ℚ-span of `self` with respect to `form`.
    pub fn dual(&self, form: &QMatrix) -> Result<Self> {
        if form.nrows() != self.dim || form.ncols() != self.dim {
            return Err(Error::DimensionMismatch("form size".into()));
        }
        let g_inv = self.gram(form).inverse().ok_or(Error::Degenerate)?;
        Self::from_generators(&(&g_inv * &self.basis), self.p)
    }

    /// Saturated left kernel `{c ∈ ℤ₍p₎^n : c·A = 0}` of an `n × m` matrix.
    pub fn left_kernel_local(a: &QMatrix, p: Prime) -> Result<QMatrix> {
        let n = a.nrows();
        let m = a.ncols();
        let h = hnf_local(&a.hstack(&QMatrix::identity(n)), p)?;
        let rows: Vec<Vec<Rational>> = h
            .row_iter()
            .filter(|r| r[..m].iter().all(Zero::is_zero))
            .map(|r| r[m..].to_vec())
            .collect();
        Ok(QMatrix::from_rows(n, rows))
    }

    /// `{x ∈ L : x·A = 0}`.
    pub fn kernel_of(&self, a: &QMatrix) -> Result<Self> {
        let k = Self::left_kernel_local(&(&self.basis * a), self.p)?;
        Self::from_generators(&(&k * &self.basis), self.p)
    }

    pub fn unit_vector(dim: usize, i: usize) -> Vec<Rational> {
        let mut v = vec![Rational::zero(); dim];
        v[i] = Rational::one();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, rat};

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn lat(rows: &[Vec<i64>], p: u32) -> ZpLattice {
        ZpLattice::from_generators(&QMatrix::from_i64(rows), pr(p)).unwrap()
    }

    #[test]
    fn sum_examples() {
        let q = pr(3);
        let a = lat(&[vec![1, 2, 0], vec![0, 3, 1]], 3);
        assert_eq!(a.sum(&a).unwrap(), a);
        let e1 = lat(&[vec![1, 0]], 3);
        let e2 = lat(&[vec![0, 1]], 3);
        assert_eq!(e1.sum(&e2).unwrap(), ZpLattice::standard(2, q));
        let pa = a.scale(&rat(3)).unwrap();
        assert_eq!(a.sum(&pa).unwrap(), a);
    }

    #[test]
    fn intersection_examples() {
        for q in [2u32, 3, 5] {
            let a = ZpLattice::standard(2, pr(q));
            let b = lat(&[vec![1, 1], vec![0, q as i64]], q);
            let i = a.intersection(&b).unwrap();
            assert_eq!(i, b);
            assert!(i.contains(&[rat(1), rat(1)]) && i.contains(&[rat(0), rat(q as i64)]));
            assert_eq!(a.intersection(&a).unwrap(), a);
            let pa = a.scale(&rat(q as i64)).unwrap();
            assert_eq!(a.intersection(&pa).unwrap(), pa);
        }
        // lines meeting only in zero
        let l1 = lat(&[vec![1, 0]], 3);
        let l2 = lat(&[vec![1, 1]], 3);
        assert_eq!(l1.intersection(&l2).unwrap().rank(), 0);
    }

    #[test]
    fn membership_examples() {
        let q = pr(5);
        let a = lat(&[vec![1, 2, 0], vec![0, 5, 1]], 5);
        for r in a.basis().row_iter() {
            assert!(a.contains(r));
            assert!(!a.contains(&vec_scale(r, &frac(1, 5))));
            assert!(a.contains(&vec_scale(r, &frac(3, 7))));
        }
        assert!(!a.contains(&[rat(0), rat(0), rat(1)]));
        let _ = q;
    }

    #[test]
    fn index_examples() {
        let q = pr(3);
        let a = lat(&[vec![1, 2, 0], vec![0, 1, 1], vec![1, 0, 5]], 3);
        assert_eq!(a.index_of(&a.scale(&rat(3)).unwrap()).unwrap(), 3);
        assert_eq!(a.index_of(&a).unwrap(), 0);
        let s = ZpLattice::standard(3, q);
        assert_eq!(a.scale(&rat(3)).unwrap().index_of(&s), Err(Error::NotSublattice));
    }

    #[test]
    fn dual_examples() {
        let q = pr(3);
        let l = lat(&[vec![1, 1], vec![0, 3]], 3);
        let id = QMatrix::identity(2);
        assert_eq!(ZpLattice::standard(2, q).dual(&id).unwrap(), ZpLattice::standard(2, q));
        let pl = l.scale(&rat(3)).unwrap();
        assert_eq!(pl.dual(&id).unwrap(), l.dual(&id).unwrap().scale(&frac(1, 3)).unwrap());
        assert_eq!(l.dual(&id).unwrap().dual(&id).unwrap(), l);
        let degenerate = QMatrix::from_i64(&[vec![1, 1], vec![1, 1]]);
        assert_eq!(l.dual(&degenerate), Err(Error::Degenerate));
    }

    #[test]
    fn adapted_basis_diagonalises() {
        let q = pr(2);
        let outer = lat(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]], 2);
        let inner = lat(&[vec![2, 2, 0], vec![0, 4, 0], vec![1, 1, 1]], 2);
        let (y, m) = outer.adapted_basis(&inner).unwrap();
        assert_eq!(ZpLattice::from_generators(&y, q).unwrap(), outer);
        let scaled: Vec<Vec<Rational>> =
            y.row_iter().zip(&m).map(|(r, &k)| vec_scale(r, &q.pow(k))).collect();
        assert_eq!(ZpLattice::from_rows(3, scaled, q).unwrap(), inner);
        assert_eq!(m, vec![0, 1, 2]);
    }

    #[test]
    fn local_kernel_is_saturated() {
        let q = pr(3);
        let a = QMatrix::from_i64(&[vec![3], vec![-1]]);
        let k = ZpLattice::left_kernel_local(&a, q).unwrap();
        // kernel spanned by (1, 3)
        assert_eq!(k, QMatrix::from_i64(&[vec![1, 3]]));
    }
}
