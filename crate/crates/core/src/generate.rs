//! Seeded instance generators with known answers.
//!
//! Each generator builds an instance whose invariant is fixed by construction
//! and then disguises it: first by a random R-unimodular change of R-basis,
//! then by a random integral change of ambient coordinates.

use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{frac, rat, Prime, Rational};
use crate::groupring::GroupRingElt;
use crate::hermitian::{dim2_gram, hermitian_to_bilinear, FormedLattice, HermitianGram};
use crate::modulestruct::{counterexample_pair, SigmaLattice};
use crate::plattice::{QMatrix, ZpLattice};
use crate::wire::{gram_to_wire, InstanceDoc, LatticePairDoc, Payload, SigmaLatticeDoc};
use crate::{Error, Result};

/// Identifier of the PRNG behind every seeded generator.
pub const RNG_NAME: &str = "ChaCha8";

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub type RMatrix = Vec<Vec<GroupRingElt>>;

fn random_r_elt(p: Prime, rng: &mut impl Rng) -> GroupRingElt {
    let coeffs: Vec<i64> = (0..p.as_usize()).map(|_| rng.gen_range(-2..=2)).collect();
    GroupRingElt::from_i64(p, &coeffs).expect("integers are p-local")
}

/// Determinant over the commutative ring R by cofactor expansion.
pub fn r_determinant(u: &RMatrix) -> Result<GroupRingElt> {
    fn minor(u: &RMatrix, cols: &[usize], row: usize) -> Result<GroupRingElt> {
        let p = u[0][0].prime();
        if cols.is_empty() {
            return Ok(GroupRingElt::one(p));
        }
        let mut acc = GroupRingElt::zero(p);
        for (k, &c) in cols.iter().enumerate() {
            if u[row][c].is_zero() {
                continue;
            }
            let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let term = u[row][c].mul(&minor(u, &rest, row + 1)?)?;
            acc = if k % 2 == 0 { acc.add(&term)? } else { acc.sub(&term)? };
        }
        Ok(acc)
    }
    if u.is_empty() {
        return Err(Error::DimensionMismatch("empty matrix".into()));
    }
    minor(u, &(0..u.len()).collect::<Vec<_>>(), 0)
}

/// Random `a×a` matrix over R whose determinant is a unit of R, by rejection.
pub fn random_r_unimodular(p: Prime, a: usize, rng: &mut impl Rng) -> Result<RMatrix> {
    loop {
        let u: RMatrix = (0..a).map(|_| (0..a).map(|_| random_r_elt(p, rng)).collect()).collect();
        if r_determinant(&u)?.is_unit() {
            return Ok(u);
        }
    }
}

/// Coordinates of `Σ_j u_ij g_j` in the ambient space of `R^a`, where
/// `g_j σ^k` is the standard basis vector `e_{jp+k}`.
pub fn r_matrix_rows(u: &RMatrix) -> Vec<Vec<Rational>> {
    u.iter().map(|row| row.iter().flat_map(|e| e.coeffs().to_vec()).collect()).collect()
}

/// Random `GL_N(ℤ)` matrix: a row permutation followed by unit transvections.
pub fn random_gl_z(n: usize, rng: &mut impl Rng) -> QMatrix {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut q = QMatrix::identity(n).select_rows(&perm);
    if n < 2 {
        return q;
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let j = (i + rng.gen_range(1..n)) % n;
        let c = rat(if rng.gen_bool(0.5) { 1 } else { -1 });
        let row_j = q.row(j).to_vec();
        let new_row: Vec<Rational> = q.row(i).iter().zip(&row_j).map(|(x, y)| x + &c * y).collect();
        for (k, v) in new_row.into_iter().enumerate() {
            q.set(i, k, v);
        }
    }
    q
}

/// The free module `R^a` on the standard lattice with block-regular σ.
pub fn free_module(p: Prime, a: usize) -> SigmaLattice {
    SigmaLattice::block(p, a, 0, 0)
}

#[derive(Clone, Debug)]
pub struct FreePair {
    pub outer: SigmaLattice,
    pub inner: SigmaLattice,
    pub t: usize,
}

/// `M = R^a ⊇ L = Rh_1 ⊕ … ⊕ Rh_t ⊕ pRh_{t+1} ⊕ … ⊕ pRh_a` for a random
/// R-basis `h` of `M`, in random ambient coordinates.
pub fn free_pair(p: Prime, a: usize, t: usize, rng: &mut impl Rng) -> Result<FreePair> {
    if t > a || a == 0 {
        return Err(Error::PreconditionViolated(format!("need 0 <= t <= a and a >= 1, got a={a}, t={t}")));
    }
    let m = free_module(p, a);
    let h = r_matrix_rows(&random_r_unimodular(p, a, rng)?);
    let pr = p.to_rational();
    let gens: Vec<Vec<Rational>> = h
        .iter()
        .enumerate()
        .map(|(i, v)| if i < t { v.clone() } else { v.iter().map(|x| x * &pr).collect() })
        .collect();
    let l = m.with_lattice(m.r_span(&gens)?)?;
    let q = random_gl_z(m.ambient_dim(), rng);
    Ok(FreePair { outer: m.change_coordinates(&q)?, inner: l.change_coordinates(&q)?, t })
}

#[derive(Clone, Debug)]
pub struct ElementaryInstance {
    pub gram: HermitianGram,
    pub lattice: FormedLattice,
    pub t: usize,
}

/// `U·diag(1,…,1,p,…,p)·U^*` with `t` ones and random R-unimodular `U`.
pub fn elementary_hermitian_gram(p: Prime, a: usize, t: usize, rng: &mut impl Rng) -> Result<HermitianGram> {
    if t > a || a == 0 {
        return Err(Error::PreconditionViolated(format!("need 0 <= t <= a and a >= 1, got a={a}, t={t}")));
    }
    let diag: Vec<GroupRingElt> =
        (0..a).map(|i| GroupRingElt::scalar(p, if i < t { 1 } else { p.get() as i64 })).collect();
    let g = HermitianGram::diagonal(p, &diag)?;
    g.congruence(&random_r_unimodular(p, a, rng)?)
}

/// A scrambled free elementary lattice with unimodular part of R-rank `t`.
pub fn elementary_hermitian(p: Prime, a: usize, t: usize, rng: &mut impl Rng) -> Result<ElementaryInstance> {
    let gram = elementary_hermitian_gram(p, a, t, rng)?;
    let base = hermitian_to_bilinear(&gram)?;
    let q = random_gl_z(base.module().ambient_dim(), rng);
    Ok(ElementaryInstance { lattice: base.change_coordinates(&q)?, gram, t })
}

/// The block lattice `R^a ⊕ T^b ⊕ S^c` in random ambient coordinates.
pub fn block_type(p: Prime, a: usize, b: usize, c: usize, rng: &mut impl Rng) -> Result<SigmaLattice> {
    let m = SigmaLattice::block(p, a, b, c);
    if m.ambient_dim() == 0 {
        return Err(Error::PreconditionViolated("empty block type".into()));
    }
    let q = random_gl_z(m.ambient_dim(), rng);
    m.change_coordinates(&q)
}

/// Positive definite σ-invariant form `Σ_k σ^k D (σ^k)ᵀ` with random positive diagonal `D`.
pub fn random_invariant_form(sigma: &QMatrix, p: Prime, rng: &mut impl Rng) -> QMatrix {
    let n = sigma.nrows();
    let d = QMatrix::diag(&(0..n).map(|_| rat(rng.gen_range(1..=4))).collect::<Vec<_>>());
    let mut form = QMatrix::zeros(n, n);
    let mut power = QMatrix::identity(n);
    for _ in 0..p.get() {
        form = &form + &(&(&power * &d) * &power.transpose());
        power = &power * sigma;
    }
    form
}

/// Random formed lattice of type `(a, b, c)`, optionally scaled by a power of `p`.
pub fn random_formed(p: Prime, a: usize, b: usize, c: usize, rng: &mut impl Rng) -> Result<FormedLattice> {
    let m = block_type(p, a, b, c, rng)?;
    let form = random_invariant_form(m.sigma(), p, rng);
    let k = rng.gen_range(-1..=1);
    let l = FormedLattice::new(m, form)?;
    if k == 0 {
        Ok(l)
    } else {
        l.scaled(&p.pow(k))
    }
}

/// Random conjugate-symmetric `a×a` Gram with nondegenerate trace form.
pub fn random_hermitian_gram(p: Prime, a: usize, rng: &mut impl Rng) -> Result<HermitianGram> {
    loop {
        let mut entries = vec![vec![GroupRingElt::zero(p); a]; a];
        for i in 0..a {
            let x = random_r_elt(p, rng);
            entries[i][i] = x.add(&x.involution())?;
            for j in i + 1..a {
                let y = random_r_elt(p, rng);
                entries[j][i] = y.involution();
                entries[i][j] = y;
            }
        }
        let g = HermitianGram::new(p, entries)?;
        match hermitian_to_bilinear(&g) {
            Ok(_) => return Ok(g),
            Err(Error::Degenerate) => continue,
            Err(e) => return Err(e),
        }
    }
}

fn random_rational(p: Prime, rng: &mut impl Rng) -> Rational {
    let pi = p.get() as i64;
    let den = *[1, 1, pi, pi * pi, 7 - (pi % 7 == 0) as i64].choose(rng).expect("nonempty");
    frac(rng.gen_range(-9..=9), den)
}

/// Random `rows×cols` rational matrix with p-power and coprime denominators.
pub fn random_matrix(p: Prime, rows: usize, cols: usize, rng: &mut impl Rng) -> QMatrix {
    QMatrix::from_rows(cols, (0..rows).map(|_| (0..cols).map(|_| random_rational(p, rng)).collect()).collect())
}

/// Random matrix in `GL_n(ℤ₍p₎)`: small integer entries, determinant a p-unit.
pub fn random_gl_local(p: Prime, n: usize, rng: &mut impl Rng) -> QMatrix {
    loop {
        let m = QMatrix::from_rows(n, (0..n).map(|_| (0..n).map(|_| rat(rng.gen_range(-3..=3))).collect()).collect());
        let det = m.det();
        if !det.is_zero() && crate::arith::vp(&det, p).finite() == Some(0) {
            return m;
        }
    }
}

/// Random full-rank sublattice spanned by `A·basis` for an integral `A` with nonzero determinant.
pub fn random_sublattice(l: &ZpLattice, rng: &mut impl Rng) -> Result<ZpLattice> {
    let r = l.rank();
    loop {
        let a = QMatrix::from_rows(
            r,
            (0..r)
                .map(|i| (0..r).map(|j| rat(if i == j { rng.gen_range(1..=9) } else { rng.gen_range(-3..=3) })).collect())
                .collect(),
        );
        if !a.det().is_zero() {
            return ZpLattice::from_generators(&(&a * l.basis()), l.prime());
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GenerateKind {
    FreePair,
    ElementaryHermitian,
    BlockType,
    Example24,
    ExampleDim2,
}

impl std::str::FromStr for GenerateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "free_pair" => GenerateKind::FreePair,
            "elementary_hermitian" => GenerateKind::ElementaryHermitian,
            "block_type" => GenerateKind::BlockType,
            "example24" => GenerateKind::Example24,
            "exampledim2" => GenerateKind::ExampleDim2,
            other => return Err(Error::Parse(format!("unknown generator kind {other:?}"))),
        })
    }
}

#[derive(Clone, Debug)]
pub struct GenerateParams {
    pub kind: GenerateKind,
    pub p: Prime,
    /// R-rank for free pairs and Hermitian instances, multiplicity of R for block types.
    pub rank: usize,
    pub t: usize,
    /// Multiplicities of T and S for block types.
    pub b: usize,
    pub c: usize,
    pub seed: u64,
}

/// Emits the instance document for `params`; identical parameters give identical documents.
pub fn generate_instance(params: &GenerateParams) -> Result<InstanceDoc> {
    let p = params.p;
    let mut rng = rng_from_seed(params.seed);
    let payload = match params.kind {
        GenerateKind::FreePair => {
            let pair = free_pair(p, params.rank, params.t, &mut rng)?;
            Payload::LatticePair(LatticePairDoc::from_pair(&pair.outer, &pair.inner))
        }
        GenerateKind::ElementaryHermitian => {
            Payload::HermitianGram(gram_to_wire(&elementary_hermitian_gram(p, params.rank, params.t, &mut rng)?))
        }
        GenerateKind::BlockType => {
            Payload::SigmaLattice(SigmaLatticeDoc::from_module(&block_type(p, params.rank, params.b, params.c, &mut rng)?))
        }
        GenerateKind::Example24 => {
            let (m, l) = counterexample_pair(p)?;
            Payload::LatticePair(LatticePairDoc::from_pair(&m, &l))
        }
        GenerateKind::ExampleDim2 => Payload::HermitianGram(gram_to_wire(&dim2_gram(p))),
    };
    Ok(InstanceDoc::new(p, payload))
}

/// `true` when `q` has integral entries and determinant `±1`.
pub fn is_gl_z(q: &QMatrix) -> bool {
    let det = q.det();
    q.row_iter().flatten().all(|x| x.is_integer()) && (det == Rational::one() || det == -Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{is_elementary, jordan_split};
    use crate::modulestruct::{compatible_basis, decomposition_type, is_free, verify_compatible, DecompositionType};

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn r_determinant_of_diagonal() {
        let q = pr(3);
        let s = GroupRingElt::sigma_pow(q, 1);
        let u = vec![vec![s.clone(), GroupRingElt::zero(q)], vec![GroupRingElt::one(q), s.clone()]];
        assert_eq!(r_determinant(&u).unwrap(), GroupRingElt::sigma_pow(q, 2));
    }

    #[test]
    fn scrambles_are_unimodular() {
        let mut rng = rng_from_seed(1);
        for n in 1..6 {
            assert!(is_gl_z(&random_gl_z(n, &mut rng)));
        }
        let q = pr(3);
        let u = random_r_unimodular(q, 2, &mut rng).unwrap();
        let m = free_module(q, 2);
        let span = m.r_span(&r_matrix_rows(&u)).unwrap();
        assert_eq!(span, *m.lattice());
    }

    #[test]
    fn free_pair_recovers_t() {
        let mut rng = rng_from_seed(7);
        for q in [2, 3].map(pr) {
            for t in 0..=2 {
                let inst = free_pair(q, 2, t, &mut rng).unwrap();
                assert!(is_free(&inst.inner).unwrap());
                let res = compatible_basis(&inst.outer, &inst.inner).unwrap();
                assert_eq!(res.t, t);
                assert!(verify_compatible(&inst.outer, &inst.inner, &res));
            }
        }
    }

    #[test]
    fn elementary_recovers_t() {
        let mut rng = rng_from_seed(3);
        let q = pr(3);
        for t in 0..=2 {
            let inst = elementary_hermitian(q, 2, t, &mut rng).unwrap();
            assert!(is_elementary(&inst.lattice).unwrap());
            assert_eq!(jordan_split(&inst.lattice).unwrap().t, t);
        }
    }

    #[test]
    fn block_type_classifies() {
        let mut rng = rng_from_seed(11);
        let q = pr(3);
        let m = block_type(q, 1, 1, 1, &mut rng).unwrap();
        assert_eq!(decomposition_type(&m).unwrap(), DecompositionType::new(1, 1, 1));
        let f = random_formed(q, 0, 2, 1, &mut rng).unwrap();
        assert_eq!(decomposition_type(f.module()).unwrap(), DecompositionType::new(0, 2, 1));
    }

    #[test]
    fn generate_is_deterministic() {
        let params = GenerateParams { kind: GenerateKind::FreePair, p: pr(3), rank: 2, t: 1, b: 0, c: 0, seed: 7 };
        assert_eq!(generate_instance(&params).unwrap(), generate_instance(&params).unwrap());
        let other = GenerateParams { seed: 8, ..params.clone() };
        assert_ne!(generate_instance(&params).unwrap(), generate_instance(&other).unwrap());
    }
}
