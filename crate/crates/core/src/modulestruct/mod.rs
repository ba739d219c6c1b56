//! σ-lattices as modules over `R = ℤ₍p₎C_p`.
//!
//! Every σ-stable ℤ₍p₎-lattice is a direct sum `R^a ⊕ T^b ⊕ S^c` of the three
//! indecomposables. The multiplicities are recovered from the two Tate
//! cohomology groups, both elementary abelian p-groups:
//!
//! | lattice | `dim L^σ / N·L` | `dim ker N / (σ−1)L` |
//! |---------|-----------------|----------------------|
//! | `R`     | 0               | 0                    |
//! | `S`     | 1               | 0                    |
//! | `T`     | 0               | 1                    |
//!
//! so `c` and `b` are these dimensions and `a` follows from the rank.

mod compat;
mod counterexample;
mod pseudobasis;

use std::fmt;

use num_traits::One;

use crate::arith::{rat, Prime, Rational};
use crate::groupring::GroupRingElt;
use crate::plattice::{QMatrix, ZpLattice};
use crate::{Error, Result};

pub use compat::{
    compatible_basis, r_basis_of_free, split_off_free_summand, verify_compatible, CompatibleBasisResult,
    RBasis,
};
pub use counterexample::{counterexample_pair, verify_counterexample, CounterexampleReport};
pub use pseudobasis::{semisimple_pseudobasis, PseudoBasisResult};

/// A σ-stable ℤ₍p₎-lattice with σ of order dividing `p`, acting on the right.
///
/// The lattice may have rank below the ambient dimension; sublattices that
/// arise while splitting off summands share the ambient σ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaLattice {
    lattice: ZpLattice,
    sigma: QMatrix,
    norm: QMatrix,
}

impl SigmaLattice {
    pub fn new(lattice: ZpLattice, sigma: QMatrix) -> Result<Self> {
        let n = lattice.ambient_dim();
        if sigma.nrows() != n || sigma.ncols() != n {
            return Err(Error::DimensionMismatch(format!("sigma must be {n}x{n}")));
        }
        let p = lattice.prime();
        if sigma.pow(p.get()) != QMatrix::identity(n) {
            return Err(Error::InvalidAction(format!("sigma^{p} is not the identity")));
        }
        let out = Self::from_parts(lattice, sigma);
        out.check_stable(&out.lattice)?;
        Ok(out)
    }

    fn from_parts(lattice: ZpLattice, sigma: QMatrix) -> Self {
        let n = sigma.nrows();
        let mut norm = QMatrix::identity(n);
        let mut power = QMatrix::identity(n);
        for _ in 1..lattice.prime().get() {
            power = &power * &sigma;
            norm = &norm + &power;
        }
        SigmaLattice { lattice, sigma, norm }
    }

    fn check_stable(&self, l: &ZpLattice) -> Result<()> {
        if !l.contains_lattice(&l.map(&self.sigma)?) {
            return Err(Error::InvalidAction("lattice is not sigma-stable".into()));
        }
        Ok(())
    }

    /// Another σ-stable lattice in the same ambient space with the same σ.
    pub fn with_lattice(&self, lattice: ZpLattice) -> Result<Self> {
        self.check_stable(&lattice)?;
        Ok(SigmaLattice { lattice, sigma: self.sigma.clone(), norm: self.norm.clone() })
    }

    /// As [`with_lattice`](Self::with_lattice), for lattices known to be σ-stable.
    pub(crate) fn with_stable_lattice(&self, lattice: ZpLattice) -> Self {
        debug_assert!(self.check_stable(&lattice).is_ok());
        SigmaLattice { lattice, sigma: self.sigma.clone(), norm: self.norm.clone() }
    }

    /// The regular representation: `R` itself, with σ cycling the basis `σ^0, …, σ^{p−1}`.
    pub fn regular(p: Prime) -> Self {
        Self::block(p, 1, 0, 0)
    }

    /// `S = ℤ₍p₎` with trivial action.
    pub fn trivial(p: Prime) -> Self {
        Self::block(p, 0, 0, 1)
    }

    /// `T = ℤ₍p₎[ζ_p]` in the basis `ζ^0, …, ζ^{p−2}`, σ acting as `ζ`.
    pub fn cyclotomic(p: Prime) -> Self {
        Self::block(p, 0, 1, 0)
    }

    /// Standard lattice `R^a ⊕ T^b ⊕ S^c` with block-diagonal σ.
    pub fn block(p: Prime, a: usize, b: usize, c: usize) -> Self {
        let mut blocks = Vec::new();
        blocks.extend(std::iter::repeat_n(regular_matrix(p), a));
        blocks.extend(std::iter::repeat_n(companion_matrix(p), b));
        blocks.extend(std::iter::repeat_n(QMatrix::identity(1), c));
        let sigma = QMatrix::block_diag(&blocks);
        let n = sigma.nrows();
        Self::from_parts(ZpLattice::standard(n, p), sigma)
    }

    pub fn lattice(&self) -> &ZpLattice {
        &self.lattice
    }

    pub fn sigma(&self) -> &QMatrix {
        &self.sigma
    }

    pub fn prime(&self) -> Prime {
        self.lattice.prime()
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn ambient_dim(&self) -> usize {
        self.lattice.ambient_dim()
    }

    /// Matrix of `N = 1 + σ + … + σ^{p−1}`.
    pub fn norm_matrix(&self) -> &QMatrix {
        &self.norm
    }

    /// Matrix of `σ − 1`.
    pub fn sigma_minus_one(&self) -> QMatrix {
        &self.sigma - &QMatrix::identity(self.ambient_dim())
    }

    /// `v·r` for a group-ring element `r`.
    pub fn act(&self, r: &GroupRingElt, v: &[Rational]) -> Vec<Rational> {
        r.as_q().act_on(v, &self.sigma)
    }

    /// The σ-orbit `g, gσ, …, gσ^{p−1}`.
    pub fn orbit(&self, g: &[Rational]) -> Vec<Vec<Rational>> {
        let mut out = Vec::with_capacity(self.prime().as_usize());
        let mut cur = g.to_vec();
        for _ in 0..self.prime().get() {
            let next = self.sigma.vec_mul(&cur);
            out.push(cur);
            cur = next;
        }
        out
    }

    /// ℤ₍p₎-lattice generated by the σ-orbits of `gens`, i.e. their R-span.
    pub fn r_span(&self, gens: &[Vec<Rational>]) -> Result<ZpLattice> {
        let rows: Vec<Vec<Rational>> = gens.iter().flat_map(|g| self.orbit(g)).collect();
        ZpLattice::from_rows(self.ambient_dim(), rows, self.prime())
    }

    /// Same module in new coordinates `x ↦ x·Q` (`σ ↦ Q⁻¹σQ`).
    pub fn change_coordinates(&self, q: &QMatrix) -> Result<Self> {
        let q_inv = q.inverse().ok_or(Error::Degenerate)?;
        Ok(Self::from_parts(self.lattice.map(q)?, &(&q_inv * &self.sigma) * q))
    }

    pub fn scaled(&self, c: &Rational) -> Result<Self> {
        Ok(SigmaLattice { lattice: self.lattice.scale(c)?, sigma: self.sigma.clone(), norm: self.norm.clone() })
    }
}

/// Permutation matrix of σ on the basis `σ^0, …, σ^{p−1}` of `R`.
pub fn regular_matrix(p: Prime) -> QMatrix {
    let n = p.as_usize();
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n {
        m.set(i, (i + 1) % n, Rational::one());
    }
    m
}

/// Multiplication by `ζ_p` on the basis `ζ^0, …, ζ^{p−2}` of `T`.
pub fn companion_matrix(p: Prime) -> QMatrix {
    let n = p.as_usize() - 1;
    let mut m = QMatrix::zeros(n, n);
    for i in 0..n - 1 {
        m.set(i, i + 1, Rational::one());
    }
    for j in 0..n {
        m.set(n - 1, j, rat(-1));
    }
    m
}

/// Multiplicities `(a, b, c)` in `L ≅ R^a ⊕ T^b ⊕ S^c`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct DecompositionType {
    pub a: usize,
    pub b: usize,
    pub c: usize,
}

impl DecompositionType {
    pub fn new(a: usize, b: usize, c: usize) -> Self {
        DecompositionType { a, b, c }
    }

    pub fn rank(&self, p: Prime) -> usize {
        p.as_usize() * self.a + (p.as_usize() - 1) * self.b + self.c
    }

    pub fn is_free(&self) -> bool {
        self.b == 0 && self.c == 0
    }
}

impl fmt::Display for DecompositionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R^{} + T^{} + S^{}", self.a, self.b, self.c)
    }
}

/// `{x ∈ L : xσ = x}`.
pub fn fixed_sublattice(l: &SigmaLattice) -> Result<ZpLattice> {
    l.lattice.kernel_of(&l.sigma_minus_one())
}

/// `N·L` for `N = 1 + σ + … + σ^{p−1}`.
pub fn norm_image(l: &SigmaLattice) -> Result<ZpLattice> {
    l.lattice.map(l.norm_matrix())
}

/// `{x ∈ L : xN = 0}`.
pub fn norm_kernel(l: &SigmaLattice) -> Result<ZpLattice> {
    l.lattice.kernel_of(l.norm_matrix())
}

/// `(σ − 1)L`.
pub fn augmentation_image(l: &SigmaLattice) -> Result<ZpLattice> {
    l.lattice.map(&l.sigma_minus_one())
}

/// `𝔽_p`-dimension of `outer / inner`, after checking the quotient is killed by `p`.
fn elementary_quotient_dim(outer: &ZpLattice, inner: &ZpLattice, what: &str) -> Result<usize> {
    let p = outer.prime();
    if outer.rank() != inner.rank() || !outer.contains_lattice(inner) {
        return Err(Error::InconsistentType(format!("{what}: not a finite-index sublattice")));
    }
    if !inner.contains_lattice(&outer.scale(&p.to_rational())?) {
        return Err(Error::InconsistentType(format!("{what}: quotient is not elementary abelian")));
    }
    Ok(outer.index_of(inner)? as usize)
}

/// `(dim Ĥ⁰, dim Ĥ¹) = (dim L^σ/NL, dim ker N/(σ−1)L)`.
pub fn tate_dimensions(l: &SigmaLattice) -> Result<(usize, usize)> {
    let h0 = elementary_quotient_dim(&fixed_sublattice(l)?, &norm_image(l)?, "fixed/norm")?;
    let h1 = elementary_quotient_dim(&norm_kernel(l)?, &augmentation_image(l)?, "ker N/(sigma-1)")?;
    Ok((h0, h1))
}

pub fn decomposition_type(l: &SigmaLattice) -> Result<DecompositionType> {
    let (c, b) = tate_dimensions(l)?;
    let p = l.prime().as_usize();
    let rest = l.rank() as i64 - ((p - 1) * b + c) as i64;
    if rest < 0 || rest % p as i64 != 0 {
        return Err(Error::InconsistentType(format!(
            "rank {} with b = {b}, c = {c} leaves no integral a",
            l.rank()
        )));
    }
    Ok(DecompositionType { a: rest as usize / p, b, c })
}

pub fn is_free(l: &SigmaLattice) -> Result<bool> {
    Ok(decomposition_type(l)?.is_free())
}

/// `J(R)·M = pM + (σ − 1)M`.
pub fn radical_lattice(m: &SigmaLattice) -> Result<ZpLattice> {
    m.lattice.scale(&m.prime().to_rational())?.sum(&augmentation_image(m)?)
}
