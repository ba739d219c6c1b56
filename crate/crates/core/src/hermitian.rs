//! σ-invariant bilinear forms, R-valued Hermitian forms, and the orthogonal
//! splitting of free elementary lattices.
//!
//! The two kinds of form determine each other through the trace form
//! `B = (1/p)·Tr_reg ∘ h`. Hermitian forms here are linear in the first
//! argument and conjugate-linear in the second, `h(x, r·y) = h(x, y)·r̄`, which
//! makes `h(x, y) = Σ_k B(x, y·σ^k)·σ^k` the inverse correspondence.

use std::fmt;

use num_traits::Zero;

use crate::arith::{format_rational, Prime, Rational};
use crate::groupring::{GroupRingElt, MaxOrderElt, QAlgebraElt};
use crate::modulestruct::{
    compatible_basis, r_basis_of_free, regular_matrix, CompatibleBasisResult, RBasis, SigmaLattice,
};
use crate::plattice::{QMatrix, ZpLattice};
use crate::{Error, Result};

/// A σ-lattice inside a rational space carrying a σ-invariant symmetric form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormedLattice {
    module: SigmaLattice,
    form: QMatrix,
}

impl FormedLattice {
    pub fn new(module: SigmaLattice, form: QMatrix) -> Result<Self> {
        let n = module.ambient_dim();
        if form.nrows() != n || form.ncols() != n {
            return Err(Error::DimensionMismatch(format!("form must be {n}x{n}")));
        }
        if form != form.transpose() {
            return Err(Error::PreconditionViolated("form is not symmetric".into()));
        }
        let s = module.sigma();
        if &(s * &form) * &s.transpose() != form {
            return Err(Error::NotSigmaInvariant("B(x sigma, y sigma) != B(x, y)".into()));
        }
        if form.det().is_zero() {
            return Err(Error::Degenerate);
        }
        let out = FormedLattice { module, form };
        if out.module.rank() > 0 && out.gram().det().is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(out)
    }

    pub fn module(&self) -> &SigmaLattice {
        &self.module
    }

    pub fn lattice(&self) -> &ZpLattice {
        self.module.lattice()
    }

    pub fn form(&self) -> &QMatrix {
        &self.form
    }

    pub fn prime(&self) -> Prime {
        self.module.prime()
    }

    /// Gram matrix of the lattice basis.
    pub fn gram(&self) -> QMatrix {
        self.lattice().gram(&self.form)
    }

    pub fn pairing(&self, x: &[Rational], y: &[Rational]) -> Rational {
        let fy = self.form.vec_mul(y);
        x.iter().zip(&fy).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    /// A σ-stable sublattice with the same ambient form.
    pub fn with_lattice(&self, lattice: ZpLattice) -> Result<Self> {
        let out = FormedLattice { module: self.module.with_lattice(lattice)?, form: self.form.clone() };
        if out.module.rank() > 0 && out.gram().det().is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(out)
    }

    fn with_stable_lattice(&self, lattice: ZpLattice) -> Self {
        FormedLattice { module: self.module.with_stable_lattice(lattice), form: self.form.clone() }
    }

    /// Same lattice and form in coordinates `x ↦ x·Q`.
    pub fn change_coordinates(&self, q: &QMatrix) -> Result<Self> {
        let q_inv = q.inverse().ok_or(Error::Degenerate)?;
        let form = &(&q_inv * &self.form) * &q_inv.transpose();
        FormedLattice::new(self.module.change_coordinates(q)?, form)
    }

    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        FormedLattice::new(self.module.scaled(c)?, self.form.clone())
    }
}

/// `L^# = {x ∈ ℚL : B(x, L) ⊆ ℤ₍p₎}`, with the same form and σ.
pub fn dual_of(l: &FormedLattice) -> Result<FormedLattice> {
    let d = l.lattice().dual(&l.form)?;
    Ok(l.with_stable_lattice(d))
}

/// `L ⊆ L^#`.
pub fn is_integral(l: &FormedLattice) -> Result<bool> {
    Ok(dual_of(l)?.lattice().contains_lattice(l.lattice()))
}

/// `L = L^#`.
pub fn is_unimodular(l: &FormedLattice) -> Result<bool> {
    Ok(dual_of(l)?.lattice() == l.lattice())
}

/// `p^j L^# = L`.
pub fn is_modular(l: &FormedLattice, j: i64) -> Result<bool> {
    Ok(dual_of(l)?.lattice().scale(&l.prime().pow(j))? == *l.lattice())
}

/// `pL^# ⊆ L ⊆ L^#`.
pub fn is_elementary(l: &FormedLattice) -> Result<bool> {
    Ok(elementary_witness(l)?.is_none())
}

/// A vector of `L ∖ L^#`, or failing that of `pL^# ∖ L`; `None` when elementary.
pub fn elementary_witness(l: &FormedLattice) -> Result<Option<Vec<Rational>>> {
    elementary_witness_in(l, &dual_of(l)?)
}

fn elementary_witness_in(l: &FormedLattice, dual: &FormedLattice) -> Result<Option<Vec<Rational>>> {
    if let Some(w) = integral_witness_in(l, dual) {
        return Ok(Some(w));
    }
    let p_dual = dual.lattice().scale(&l.prime().to_rational())?;
    let witness = p_dual.basis().row_iter().find(|r| !l.lattice().contains(r)).map(<[Rational]>::to_vec);
    Ok(witness)
}

fn integral_witness_in(l: &FormedLattice, dual: &FormedLattice) -> Option<Vec<Rational>> {
    l.lattice().basis().row_iter().find(|r| !dual.lattice().contains(r)).map(<[Rational]>::to_vec)
}

/// A vector of `L ∖ L^#`, or `None` when `L` is integral.
pub fn integral_witness(l: &FormedLattice) -> Result<Option<Vec<Rational>>> {
    Ok(integral_witness_in(l, &dual_of(l)?))
}

/// Matrix `(h(g_i, g_j))` of an R-valued Hermitian form on an R-basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HermitianGram {
    p: Prime,
    entries: Vec<Vec<GroupRingElt>>,
}

impl HermitianGram {
    pub fn new(p: Prime, entries: Vec<Vec<GroupRingElt>>) -> Result<Self> {
        let a = entries.len();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != a {
                return Err(Error::DimensionMismatch("Hermitian Gram must be square".into()));
            }
            for (j, e) in row.iter().enumerate() {
                p.check_same(e.prime())?;
                if entries[j][i] != e.involution() {
                    return Err(Error::PreconditionViolated(format!(
                        "entry ({j},{i}) is not the conjugate of ({i},{j})"
                    )));
                }
            }
        }
        Ok(HermitianGram { p, entries })
    }

    pub fn diagonal(p: Prime, diag: &[GroupRingElt]) -> Result<Self> {
        let a = diag.len();
        let entries = (0..a)
            .map(|i| (0..a).map(|j| if i == j { diag[i].clone() } else { GroupRingElt::zero(p) }).collect())
            .collect();
        Self::new(p, entries)
    }

    pub fn identity(p: Prime, a: usize) -> Self {
        Self::diagonal(p, &vec![GroupRingElt::one(p); a]).expect("identity is Hermitian")
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Vec<GroupRingElt>] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &GroupRingElt {
        &self.entries[i][j]
    }

    /// `U·G·U^*` with `U^*` the conjugate transpose.
    pub fn congruence(&self, u: &[Vec<GroupRingElt>]) -> Result<Self> {
        let a = self.size();
        let mut out = vec![vec![GroupRingElt::zero(self.p); a]; a];
        for (i, out_row) in out.iter_mut().enumerate() {
            for (j, cell) in out_row.iter_mut().enumerate() {
                let mut acc = GroupRingElt::zero(self.p);
                for k in 0..a {
                    for l in 0..a {
                        let term = u[i][k].mul(&self.entries[k][l])?.mul(&u[j][l].involution())?;
                        acc = acc.add(&term)?;
                    }
                }
                *cell = acc;
            }
        }
        Self::new(self.p, out)
    }

    /// The matrix in `S ⊕ T` coordinates.
    pub fn components(&self) -> Vec<Vec<MaxOrderElt>> {
        self.entries.iter().map(|r| r.iter().map(GroupRingElt::components).collect()).collect()
    }
}

impl fmt::Display for HermitianGram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `h(g_i, g_j) = Σ_k B(g_i, g_j σ^k) σ^k`.
pub fn bilinear_to_hermitian(l: &FormedLattice, basis: &RBasis) -> Result<HermitianGram> {
    let s = l.module.sigma();
    if &(s * &l.form) * &s.transpose() != l.form {
        return Err(Error::NotSigmaInvariant("form".into()));
    }
    let p = l.prime();
    let entries = basis
        .vectors
        .iter()
        .map(|gi| {
            basis
                .vectors
                .iter()
                .map(|gj| {
                    let coeffs = l.module.orbit(gj).iter().map(|y| l.pairing(gi, y)).collect();
                    GroupRingElt::new(p, coeffs)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    HermitianGram::new(p, entries)
}

/// The trace form on `R^a`: `B(g_i σ^k, g_j σ^l) = (1/p)·Tr_reg(σ^k h_ij σ^{−l})`,
/// the coefficient of `σ^{l−k}` in `h_ij`.
pub fn hermitian_to_bilinear(g: &HermitianGram) -> Result<FormedLattice> {
    let p = g.p;
    let n = p.as_usize();
    let a = g.size();
    let mut form = QMatrix::zeros(n * a, n * a);
    for i in 0..a {
        for j in 0..a {
            let h = g.entries[i][j].coeffs();
            for k in 0..n {
                for l in 0..n {
                    form.set(i * n + k, j * n + l, h[(l + n - k) % n].clone());
                }
            }
        }
    }
    let sigma = QMatrix::block_diag(&vec![regular_matrix(p); a]);
    let module = SigmaLattice::new(ZpLattice::standard(n * a, p), sigma)?;
    FormedLattice::new(module, form)
}

/// Hermitian dual basis of an R-basis: the `g*_j` with `h(g_i, g*_j) = δ_ij`,
/// expressed as `g*_j = Σ_k C_jk g_k` with `C_jk ∈ ℚC_p`.
pub fn dual_base_change(l: &FormedLattice, basis: &RBasis) -> Result<Vec<Vec<QAlgebraElt>>> {
    let p = l.prime();
    let n = p.as_usize();
    let a = basis.len();
    let rows: Vec<Vec<Rational>> = basis.vectors.iter().flat_map(|g| l.module.orbit(g)).collect();
    let x = QMatrix::from_rows(l.module.ambient_dim(), rows);
    let g_inv = (&(&x * &l.form) * &x.transpose()).inverse().ok_or(Error::Degenerate)?;
    (0..a)
        .map(|j| {
            let coords = g_inv.row(j * n);
            (0..a).map(|k| QAlgebraElt::new(p, coords[k * n..(k + 1) * n].to_vec())).collect()
        })
        .collect()
}

/// `L = L0 ⊥ L1` with `L0` unimodular and `L1` p-modular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanSplit {
    pub l0: FormedLattice,
    pub l1: FormedLattice,
    pub t: usize,
    /// Compatible R-basis of `L^#` from which the split was built.
    pub basis: CompatibleBasisResult,
}

/// Orthogonal complement of a unimodular sublattice `L0 ⊆ L`.
///
/// Each basis vector `x` of `L` is replaced by `x − B(x, X0)·G0⁻¹·X0`, where `X0`
/// is a basis of `L0` with Gram `G0`; `G0` is invertible over ℤ₍p₎, so for
/// integral `L` the projections stay in `L`.
pub fn projection_split(l: &FormedLattice, l0: &FormedLattice) -> Result<FormedLattice> {
    if l0.form != l.form || !l.lattice().contains_lattice(l0.lattice()) {
        return Err(Error::PreconditionViolated("L0 is not a sublattice of L".into()));
    }
    if l0.lattice().rank() == 0 {
        return Ok(l.clone());
    }
    if !is_unimodular(l0)? {
        return Err(Error::NotUnimodularSummand);
    }
    project_away(l, l0)
}

fn project_away(l: &FormedLattice, l0: &FormedLattice) -> Result<FormedLattice> {
    if l0.lattice().rank() == 0 {
        return Ok(l.clone());
    }
    let x0 = l0.lattice().basis();
    let g0_inv = l0.gram().inverse().ok_or(Error::NotUnimodularSummand)?;
    let cross = &(l.lattice().basis() * &l.form) * &x0.transpose();
    let coeffs = &cross * &g0_inv;
    let projected = l.lattice().basis() - &(&coeffs * x0);
    if projected.row_iter().any(|r| !l.lattice().contains(r)) {
        return Err(Error::NotUnimodularSummand);
    }
    let l1 = ZpLattice::from_generators(&projected, l.prime())?;
    Ok(l.with_stable_lattice(l1))
}

/// Machine checks of a Jordan split, as `(name, passed)` pairs.
pub fn jordan_checks(l: &FormedLattice, split: &JordanSplit) -> Result<Vec<(&'static str, bool)>> {
    jordan_checks_in(l, &dual_of(l)?, split)
}

fn jordan_checks_in(l: &FormedLattice, dual: &FormedLattice, split: &JordanSplit) -> Result<Vec<(&'static str, bool)>> {
    let p = l.prime();
    let x0 = split.l0.lattice().basis();
    let x1 = split.l1.lattice().basis();
    let cross = &(x0 * &l.form) * &x1.transpose();
    let sum = split.l0.lattice().sum(split.l1.lattice())?;
    let l0_unimodular = split.l0.lattice().rank() == 0 || is_unimodular(&split.l0)?;
    let l1_modular = split.l1.lattice().rank() == 0 || is_modular(&split.l1, 1)?;
    let a = l.lattice().rank() / p.as_usize();
    let index_ok = split.t <= a && dual.lattice().index_of(l.lattice())? == (p.as_usize() * (a - split.t)) as i64;
    Ok(vec![
        ("cross Gram is zero", cross.is_zero()),
        ("L0 + L1 = L", sum == *l.lattice() && split.l0.lattice().rank() + split.l1.lattice().rank() == l.lattice().rank()),
        ("L0 unimodular", l0_unimodular),
        ("L1 p-modular", l1_modular),
        ("rank L0 = p t", split.l0.lattice().rank() == p.as_usize() * split.t),
        ("[L^# : L] = p^(p(a-t))", index_ok),
    ])
}

/// Splits a free elementary lattice as `L0 ⊥ L1`.
///
/// `M = L^#` is free with `pM ⊆ L ⊆ M`; a compatible basis
/// `(g_1, …, g_a)` of `M` gives the unimodular part `L0 = Rg_1 ⊕ … ⊕ Rg_t`, and
/// `L1` is its orthogonal complement in `L`.
pub fn jordan_split(l: &FormedLattice) -> Result<JordanSplit> {
    r_basis_of_free(&l.module)?;
    let m = dual_of(l)?;
    if let Some(w) = elementary_witness_in(l, &m)? {
        return Err(Error::NotElementary { witness: w.iter().map(format_rational).collect() });
    }
    let basis = compatible_basis(&m.module, &l.module)?;
    let t = basis.t;
    let l0_lat = l.module.r_span(&basis.basis.vectors[..t])?;
    let l0 = l.with_stable_lattice(l0_lat);
    let l1 = project_away(l, &l0)?;
    let split = JordanSplit { l0, l1, t, basis };
    let failed: Vec<&str> = jordan_checks_in(l, &m, &split)?.into_iter().filter(|c| !c.1).map(|c| c.0).collect();
    if !failed.is_empty() {
        return Err(Error::InternalContradiction(format!("Jordan split checks failed: {}", failed.join(", "))));
    }
    Ok(split)
}

/// R-basis of a free formed lattice.
pub fn r_basis(l: &FormedLattice) -> Result<RBasis> {
    r_basis_of_free(&l.module)
}

/// Hermitian Gram `[[(p,0), (0,π)], [(0,π̄), (p,0)]]` of an integral, free,
/// non-elementary lattice of rank 2.
pub fn dim2_gram(p: Prime) -> HermitianGram {
    let n = GroupRingElt::norm_element(p);
    let pi = GroupRingElt::one_minus_sigma(p);
    HermitianGram::new(p, vec![vec![n.clone(), pi.clone()], vec![pi.involution(), n]]).expect("Hermitian")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::groupring::CycloElt;
    use crate::modulestruct::decomposition_type;

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn regular_rep_identity_form() {
        for q in [2, 3, 5].map(pr) {
            let l = hermitian_to_bilinear(&HermitianGram::identity(q, 1)).unwrap();
            assert_eq!(*l.form(), QMatrix::identity(q.as_usize()));
            let b = r_basis(&l).unwrap();
            let h = bilinear_to_hermitian(&l, &b).unwrap();
            assert_eq!(h, HermitianGram::identity(q, 1));
            assert!(is_unimodular(&l).unwrap() && is_elementary(&l).unwrap() && is_integral(&l).unwrap());
        }
    }

    #[test]
    fn scaling_is_linear() {
        let q = pr(3);
        let g = dim2_gram(q);
        let scaled = HermitianGram::new(
            q,
            g.entries().iter().map(|r| r.iter().map(|e| e.scale_int(3)).collect()).collect(),
        )
        .unwrap();
        let b = hermitian_to_bilinear(&g).unwrap();
        let bs = hermitian_to_bilinear(&scaled).unwrap();
        assert_eq!(*bs.form(), b.form().scale(&rat(3)));
    }

    #[test]
    fn p_identity_is_p_modular() {
        for q in [2, 3, 5].map(pr) {
            let g = HermitianGram::diagonal(q, &vec![GroupRingElt::scalar(q, q.get() as i64); 2]).unwrap();
            let l = hermitian_to_bilinear(&g).unwrap();
            assert!(is_modular(&l, 1).unwrap());
            assert!(!is_unimodular(&l).unwrap());
            assert!(is_elementary(&l).unwrap());
        }
    }

    #[test]
    fn dim2_roundtrip_and_predicates() {
        let q = pr(3);
        let g = dim2_gram(q);
        let l = hermitian_to_bilinear(&g).unwrap();
        assert_eq!(l.form().nrows(), 6);
        let b = r_basis(&l).unwrap();
        assert_eq!(bilinear_to_hermitian(&l, &b).unwrap(), g);
        assert!(is_integral(&l).unwrap());
        assert!(!is_elementary(&l).unwrap());
        let w = elementary_witness(&l).unwrap().unwrap();
        let dual = dual_of(&l).unwrap();
        assert!(dual.lattice().scale(&rat(3)).unwrap().contains(&w));
        assert!(!l.lattice().contains(&w));
        assert!(matches!(jordan_split(&l), Err(Error::NotElementary { .. })));
    }

    #[test]
    fn dim2_dual_is_inverse_gram() {
        let q = pr(3);
        let g = dim2_gram(q);
        let l = hermitian_to_bilinear(&g).unwrap();
        let c = dual_base_change(&l, &r_basis(&l).unwrap()).unwrap();
        let pi = CycloElt::pi(q);
        let expected = [
            [MaxOrderElt::new(crate::arith::frac(1, 3), CycloElt::zero(q)), MaxOrderElt::new(rat(0), pi.conj().inverse().unwrap())],
            [MaxOrderElt::new(rat(0), pi.inverse().unwrap()), MaxOrderElt::new(crate::arith::frac(1, 3), CycloElt::zero(q))],
        ];
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(c[i][j].components(), expected[i][j], "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn dual_preserves_type() {
        let q = pr(3);
        let l = hermitian_to_bilinear(&dim2_gram(q)).unwrap();
        let d = dual_of(&l).unwrap();
        assert_eq!(decomposition_type(l.module()).unwrap(), decomposition_type(d.module()).unwrap());
        assert_eq!(dual_of(&d).unwrap(), l);
    }

    #[test]
    fn jordan_endpoints() {
        for q in [2, 3].map(pr) {
            let l = hermitian_to_bilinear(&HermitianGram::identity(q, 2)).unwrap();
            let s = jordan_split(&l).unwrap();
            assert_eq!(s.t, 2);
            assert_eq!(s.l1.lattice().rank(), 0);
            let pg = HermitianGram::diagonal(q, &vec![GroupRingElt::scalar(q, q.get() as i64); 2]).unwrap();
            let s = jordan_split(&hermitian_to_bilinear(&pg).unwrap()).unwrap();
            assert_eq!(s.t, 0);
            assert_eq!(s.l0.lattice().rank(), 0);
        }
    }

    #[test]
    fn jordan_diag_one_p() {
        let q = pr(3);
        let g = HermitianGram::diagonal(q, &[GroupRingElt::one(q), GroupRingElt::scalar(q, 3)]).unwrap();
        let l = hermitian_to_bilinear(&g).unwrap();
        let s = jordan_split(&l).unwrap();
        assert_eq!(s.t, 1);
        assert_eq!(s.l0.lattice().rank(), 3);
        assert_eq!(s.l1.lattice().rank(), 3);
        assert!(jordan_checks(&l, &s).unwrap().iter().all(|c| c.1));
    }

    #[test]
    fn projection_split_endpoints() {
        let q = pr(3);
        let l = hermitian_to_bilinear(&HermitianGram::identity(q, 2)).unwrap();
        let all = projection_split(&l, &l).unwrap();
        assert_eq!(all.lattice().rank(), 0);
        let zero = l.with_lattice(ZpLattice::zero(6, q)).unwrap();
        assert_eq!(projection_split(&l, &zero).unwrap(), l);
        let pl = l.scaled(&rat(3)).unwrap();
        assert_eq!(projection_split(&l, &pl), Err(Error::NotUnimodularSummand));
    }

    #[test]
    fn non_invariant_form_rejected() {
        let q = pr(3);
        let m = SigmaLattice::regular(q);
        let f = QMatrix::diag(&[rat(1), rat(2), rat(3)]);
        assert!(matches!(FormedLattice::new(m, f), Err(Error::NotSigmaInvariant(_))));
    }

    #[test]
    fn non_hermitian_gram_rejected() {
        let q = pr(3);
        let s = GroupRingElt::sigma_pow(q, 1);
        let e = vec![vec![GroupRingElt::one(q), s.clone()], vec![s, GroupRingElt::one(q)]];
        assert!(HermitianGram::new(q, e).is_err());
    }
}
