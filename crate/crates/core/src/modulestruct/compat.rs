//! R-bases of free lattices and compatible bases for `pM ⊆ L ⊆ M`.

use super::{radical_lattice, SigmaLattice};
use crate::arith::{is_p_local, residue_mod_p, Rational};
use crate::plattice::{vec_scale, ZpLattice};
use crate::{Error, Result};

/// Vectors `g_1, …, g_a` whose σ-orbits form a ℤ₍p₎-basis of a free lattice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RBasis {
    pub vectors: Vec<Vec<Rational>>,
}

impl RBasis {
    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatibleBasisResult {
    /// R-basis of the outer lattice `M`.
    pub basis: RBasis,
    /// `(g_1, …, g_t, p·g_{t+1}, …, p·g_a)` is an R-basis of `L`.
    pub t: usize,
}

impl CompatibleBasisResult {
    /// The family `(g_1, …, g_t, p·g_{t+1}, …, p·g_a)`.
    pub fn scaled_family(&self, p: crate::Prime) -> Vec<Vec<Rational>> {
        let pr = p.to_rational();
        self.basis
            .vectors
            .iter()
            .enumerate()
            .map(|(i, g)| if i < self.t { g.clone() } else { vec_scale(g, &pr) })
            .collect()
    }
}

/// Subspaces of `M/pM` over `𝔽_p`, in coordinates of the basis of `M`.
struct ResidueSpace<'a> {
    m: &'a ZpLattice,
    p: u64,
    /// Echelon rows, each with its pivot column.
    rows: Vec<(usize, Vec<u64>)>,
}

impl<'a> ResidueSpace<'a> {
    fn new(m: &'a ZpLattice) -> Self {
        ResidueSpace { m, p: m.prime().get() as u64, rows: Vec::new() }
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn residue(&self, v: &[Rational]) -> Result<Vec<u64>> {
        let coords = self
            .m
            .coordinates(v)
            .filter(|c| c.iter().all(|x| is_p_local(x, self.m.prime())))
            .ok_or_else(|| Error::PreconditionViolated("vector is not in the lattice".into()))?;
        Ok(coords.iter().map(|x| residue_mod_p(x, self.m.prime()) as u64).collect())
    }

    /// Adds the residue of `v`; returns whether the span grew.
    fn insert(&mut self, v: &[Rational]) -> Result<bool> {
        let p = self.p;
        let mut r = self.residue(v)?;
        for (pc, row) in &self.rows {
            let f = r[*pc];
            if f != 0 {
                for (x, y) in r.iter_mut().zip(row) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        let Some(pc) = r.iter().position(|&x| x != 0) else { return Ok(false) };
        let inv = (1..p).find(|&i| i * r[pc] % p == 1).expect("p is prime");
        for x in r.iter_mut() {
            *x = *x * inv % p;
        }
        for (_, row) in self.rows.iter_mut() {
            let f = row[pc];
            if f != 0 {
                for (x, y) in row.iter_mut().zip(&r) {
                    *x = (*x + (p - f) * y) % p;
                }
            }
        }
        self.rows.push((pc, r));
        Ok(true)
    }
}

/// Greedy Nakayama completion inside `M`: starting from the residues of
/// `J(M)` and `seed`, keeps each candidate whose residue in `M/J(M)` is new
/// until the residues span. Since `R/J(R) = 𝔽_p`, the kept vectors together
/// with `seed` generate `M` as an R-module.
fn complete_residues(
    m: &SigmaLattice,
    radical: &ZpLattice,
    seed: &[Vec<Rational>],
    candidates: impl IntoIterator<Item = Vec<Rational>>,
) -> Result<Vec<Vec<Rational>>> {
    let mut space = ResidueSpace::new(m.lattice());
    for j in radical.basis().row_iter() {
        space.insert(j)?;
    }
    for g in seed {
        space.insert(g)?;
    }
    let full = m.rank();
    let mut kept = Vec::new();
    for v in candidates {
        if space.dim() == full {
            break;
        }
        if space.insert(&v)? {
            kept.push(v);
        }
    }
    if space.dim() != full {
        return Err(Error::InternalContradiction("residues do not span the top quotient".into()));
    }
    Ok(kept)
}

/// An R-basis of a free σ-lattice, lifted from an `𝔽_p`-basis of `L/J(R)L`.
///
/// The lift always generates `L`; it is a basis exactly when `L` is free,
/// which is read off from the rank.
pub fn r_basis_of_free(l: &SigmaLattice) -> Result<RBasis> {
    let vectors = complete_residues(l, &radical_lattice(l)?, &[], l.lattice().basis().to_rows())?;
    if l.rank() != vectors.len() * l.prime().as_usize() {
        return Err(Error::NotFree);
    }
    if l.r_span(&vectors)? != *l.lattice() {
        return Err(Error::InternalContradiction("lifted generators do not span the lattice".into()));
    }
    Ok(RBasis { vectors })
}

/// Splits `M = R·g ⊕ M′` for `g ∈ M ∖ J(M)`.
///
/// The complement is spanned by basis rows of `M`, taken in index order,
/// whose residues extend that of `g` to a basis of `M/J(M)`.
pub fn split_off_free_summand(m: &SigmaLattice, g: &[Rational]) -> Result<(SigmaLattice, SigmaLattice)> {
    if !m.lattice().contains(g) {
        return Err(Error::PreconditionViolated("generator is not in M".into()));
    }
    split_with_radical(m, &radical_lattice(m)?, g)
}

fn split_with_radical(m: &SigmaLattice, radical: &ZpLattice, g: &[Rational]) -> Result<(SigmaLattice, SigmaLattice)> {
    if radical.contains(g) {
        return Err(Error::InRadical);
    }
    let rg = m.r_span(&[g.to_vec()])?;
    let rest = complete_residues(m, radical, &[g.to_vec()], m.lattice().basis().to_rows())?;
    let complement = m.r_span(&rest)?;
    if rg.sum(&complement)? != *m.lattice() || rg.rank() + complement.rank() != m.rank() {
        return Err(Error::InternalContradiction("R·g + M' is not a direct sum equal to M".into()));
    }
    Ok((m.with_stable_lattice(rg), m.with_stable_lattice(complement)))
}

/// Compatible R-basis for free lattices `pM ⊆ L ⊆ M`.
///
/// While `L ⊄ J(M)`, an R-generator of `L` outside `J(M)` generates a free
/// summand of both lattices and is split off, continuing with `M′` and
/// `L′ = L ∩ M′`. Once `L ⊆ J(M)` the only possibility for free `L` is
/// `L = pM`; anything else is reported as an internal contradiction.
pub fn compatible_basis(m: &SigmaLattice, l: &SigmaLattice) -> Result<CompatibleBasisResult> {
    let p = m.prime();
    p.check_same(l.prime())?;
    if m.sigma() != l.sigma() {
        return Err(Error::PreconditionViolated("M and L carry different sigma actions".into()));
    }
    fn not_free(what: &'static str) -> impl Fn(Error) -> Error {
        move |e| match e {
            Error::NotFree => Error::PreconditionViolated(format!("{what} is not free")),
            other => other,
        }
    }
    r_basis_of_free(m).map_err(not_free("M"))?;
    let mut gens_l = Some(r_basis_of_free(l).map_err(not_free("L"))?);
    if !m.lattice().contains_lattice(l.lattice()) {
        return Err(Error::PreconditionViolated("L is not contained in M".into()));
    }
    let pm = m.lattice().scale(&p.to_rational())?;
    if !l.lattice().contains_lattice(&pm) {
        return Err(Error::PreconditionViolated("pM is not contained in L".into()));
    }

    let mut cur_m = m.clone();
    let mut cur_l = l.clone();
    let mut unit_part = Vec::new();
    let tail = loop {
        if cur_m.rank() == 0 {
            break Vec::new();
        }
        let j = radical_lattice(&cur_m)?;
        let gens = match gens_l.take() {
            Some(g) => g,
            None => r_basis_of_free(&cur_l)?,
        };
        match gens.vectors.into_iter().find(|g| !j.contains(g)) {
            Some(g) => {
                let (_, m_rest) = split_with_radical(&cur_m, &j, &g)?;
                let l_rest = cur_l.lattice().intersection(m_rest.lattice())?;
                cur_l = cur_m.with_stable_lattice(l_rest);
                cur_m = m_rest;
                unit_part.push(g);
            }
            None => {
                if *cur_l.lattice() != cur_m.lattice().scale(&p.to_rational())? {
                    return Err(Error::InternalContradiction(
                        "free L inside J(M) but L != pM".into(),
                    ));
                }
                break r_basis_of_free(&cur_m)?.vectors;
            }
        }
    };
    let t = unit_part.len();
    let mut vectors = unit_part;
    vectors.extend(tail);
    Ok(CompatibleBasisResult { basis: RBasis { vectors }, t })
}

/// Checks that `result` is a compatible basis for `(M, L)`.
pub fn verify_compatible(m: &SigmaLattice, l: &SigmaLattice, result: &CompatibleBasisResult) -> bool {
    let p = m.prime();
    let a = result.basis.len();
    if result.t > a || m.rank() != p.as_usize() * a || l.rank() != m.rank() {
        return false;
    }
    let Ok(span_m) = m.r_span(&result.basis.vectors) else { return false };
    if span_m != *m.lattice() {
        return false;
    }
    let Ok(span_l) = m.r_span(&result.scaled_family(p)) else { return false };
    if span_l != *l.lattice() {
        return false;
    }
    m.lattice().index_of(l.lattice()).ok() == Some((p.as_usize() * (a - result.t)) as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::modulestruct::decomposition_type;
    use crate::{DecompositionType, Prime};

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    fn unit(n: usize, i: usize) -> Vec<Rational> {
        ZpLattice::unit_vector(n, i)
    }

    #[test]
    fn r_basis_examples() {
        for q in [2, 3, 5].map(pr) {
            let r = SigmaLattice::regular(q);
            assert_eq!(r_basis_of_free(&r).unwrap().vectors, vec![unit(q.as_usize(), 0)]);
            let pr_ = r.scaled(&q.to_rational()).unwrap();
            let b = r_basis_of_free(&pr_).unwrap();
            assert_eq!(b.len(), 1);
            assert_eq!(pr_.r_span(&b.vectors).unwrap(), *pr_.lattice());
            assert_eq!(r_basis_of_free(&SigmaLattice::trivial(q)), Err(Error::NotFree));
        }
    }

    #[test]
    fn split_examples() {
        for q in [2, 3, 5].map(pr) {
            let n = q.as_usize();
            let r = SigmaLattice::regular(q);
            let (rg, rest) = split_off_free_summand(&r, &unit(n, 0)).unwrap();
            assert_eq!(rg.lattice(), r.lattice());
            assert_eq!(rest.rank(), 0);

            let r2 = SigmaLattice::block(q, 2, 0, 0);
            let (rg, rest) = split_off_free_summand(&r2, &unit(2 * n, 0)).unwrap();
            assert_eq!(rg.rank(), n);
            assert_eq!(*rest.lattice(), r2.r_span(&[unit(2 * n, n)]).unwrap());

            let mut g = unit(2 * n, 0);
            g[n] = rat(1);
            let (rg, rest) = split_off_free_summand(&r2, &g).unwrap();
            assert_eq!(rg.lattice().sum(rest.lattice()).unwrap(), *r2.lattice());
            assert_eq!(rg.lattice().intersection(rest.lattice()).unwrap().rank(), 0);
            assert_eq!(decomposition_type(&rest).unwrap(), DecompositionType::new(1, 0, 0));

            let radical_vec = vec_scale(&unit(2 * n, 0), &q.to_rational());
            assert_eq!(split_off_free_summand(&r2, &radical_vec).unwrap_err(), Error::InRadical);
        }
    }

    #[test]
    fn compatible_endpoints() {
        for q in [2, 3].map(pr) {
            for a in 1..=2 {
                let m = SigmaLattice::block(q, a, 0, 0);
                let res = compatible_basis(&m, &m).unwrap();
                assert_eq!(res.t, a);
                assert!(verify_compatible(&m, &m, &res));
                let pm = m.scaled(&q.to_rational()).unwrap();
                let res = compatible_basis(&m, &pm).unwrap();
                assert_eq!(res.t, 0);
                assert!(verify_compatible(&m, &pm, &res));
            }
        }
    }

    #[test]
    fn compatible_mixed_and_tampered() {
        let q = pr(3);
        let n = 3;
        let m = SigmaLattice::block(q, 2, 0, 0);
        // L = R(g1 + g2) ⊕ pR g2
        let mut g = unit(2 * n, 0);
        g[n] = rat(1);
        let l = m
            .with_lattice(m.r_span(&[g, vec_scale(&unit(2 * n, n), &rat(3))]).unwrap())
            .unwrap();
        let res = compatible_basis(&m, &l).unwrap();
        assert_eq!(res.t, 1);
        assert!(verify_compatible(&m, &l, &res));

        let mut off = res.clone();
        off.t = 0;
        assert!(!verify_compatible(&m, &l, &off));
        let mut off = res.clone();
        off.t = 2;
        assert!(!verify_compatible(&m, &l, &off));
        let mut off = res.clone();
        off.basis.vectors[1] = vec_scale(&off.basis.vectors[1], &rat(3));
        assert!(!verify_compatible(&m, &l, &off));
    }

    #[test]
    fn compatible_preconditions() {
        let q = pr(3);
        let m = SigmaLattice::block(q, 1, 0, 0);
        let p2m = m.scaled(&rat(9)).unwrap();
        assert!(matches!(compatible_basis(&m, &p2m), Err(Error::PreconditionViolated(_))));
        let s = SigmaLattice::block(q, 1, 0, 1);
        assert!(matches!(compatible_basis(&s, &s), Err(Error::PreconditionViolated(_))));
    }
}
