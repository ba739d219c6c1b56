//! Adapted bases for `L ⊆ M` when both are of type `T^b ⊕ S^c`.
//!
//! Such lattices split along the idempotents, `M = Me_ζ ⊕ Me_1`; the
//! `e_1`-part is handled by Smith form over ℤ₍p₎ and the `e_ζ`-part by Smith
//! form over the discrete valuation ring `T`, pivoting on `π`-valuation.

use num_traits::Zero;

use super::{decomposition_type, SigmaLattice};
use crate::arith::{Rational, Valuation};
use crate::groupring::{CycloElt, QAlgebraElt};
use crate::plattice::{vec_scale, QMatrix, ZpLattice};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoBasisResult {
    /// T-basis of `Me_ζ`.
    pub x_vectors: Vec<Vec<Rational>>,
    /// `n_1 ≤ … ≤ n_b` with `Le_ζ = ⊕ π^{n_i} T x_i`.
    pub n: Vec<i64>,
    /// ℤ₍p₎-basis of `Me_1`.
    pub y_vectors: Vec<Vec<Rational>>,
    /// `m_1 ≤ … ≤ m_c` with `Le_1 = ⊕ p^{m_i} ℤ₍p₎ y_i`.
    pub m: Vec<i64>,
}

/// `t·v` for `t ∈ ℚ(ζ_p)` acting through σ on `Me_ζ`.
fn cyclo_act(t: &CycloElt, v: &[Rational], sigma: &QMatrix) -> Vec<Rational> {
    let mut coeffs = t.coeffs().to_vec();
    coeffs.push(Rational::zero());
    QAlgebraElt::new(t.prime(), coeffs).expect("length p").act_on(v, sigma)
}

/// ℤ₍p₎-span of `{x σ^j : 0 ≤ j ≤ p−2}` over all `x`.
fn t_span(l: &SigmaLattice, xs: &[Vec<Rational>]) -> Result<ZpLattice> {
    let k = l.prime().as_usize() - 1;
    let rows: Vec<Vec<Rational>> = xs.iter().flat_map(|x| l.orbit(x).into_iter().take(k)).collect();
    ZpLattice::from_rows(l.ambient_dim(), rows, l.prime())
}

/// A T-basis of a lattice on which σ satisfies `Φ_p(σ) = 0`.
fn t_basis(mz: &SigmaLattice) -> Result<Vec<Vec<Rational>>> {
    let pi_m = mz.lattice().map(&(&QMatrix::identity(mz.ambient_dim()) - mz.sigma()))?;
    let mut current = pi_m;
    let mut xs = Vec::new();
    for row in mz.lattice().basis().row_iter() {
        if current == *mz.lattice() {
            break;
        }
        if !current.contains(row) {
            current = current.sum(&t_span(mz, &[row.to_vec()])?)?;
            xs.push(row.to_vec());
        }
    }
    if current != *mz.lattice() || t_span(mz, &xs)? != *mz.lattice() {
        return Err(Error::InternalContradiction("no T-basis found for the e_zeta part".into()));
    }
    Ok(xs)
}

/// Coordinates of `v` in the T-basis `xs`, as elements of `ℚ(ζ_p)`.
fn t_coordinates(l: &SigmaLattice, xs: &[Vec<Rational>], v: &[Rational]) -> Result<Vec<CycloElt>> {
    let p = l.prime();
    let k = p.as_usize() - 1;
    let rows: Vec<Vec<Rational>> = xs.iter().flat_map(|x| l.orbit(x).into_iter().take(k)).collect();
    let basis = QMatrix::from_rows(l.ambient_dim(), rows);
    let c = basis
        .solve_left(v)
        .ok_or_else(|| Error::InternalContradiction("vector outside the T-span".into()))?;
    c.chunks(k).map(|chunk| CycloElt::new(p, chunk.to_vec())).collect()
}

pub fn semisimple_pseudobasis(m: &SigmaLattice, l: &SigmaLattice) -> Result<PseudoBasisResult> {
    let p = m.prime();
    p.check_same(l.prime())?;
    let tm = decomposition_type(m)?;
    let tl = decomposition_type(l)?;
    if tm.a != 0 || tm != tl {
        return Err(Error::PreconditionViolated(format!("types {tm} and {tl} must agree with a = 0")));
    }
    if m.sigma() != l.sigma() || !m.lattice().contains_lattice(l.lattice()) {
        return Err(Error::PreconditionViolated("L is not a sublattice of M".into()));
    }
    let e1 = QAlgebraElt::e1(p).as_matrix(m.sigma());
    let ez = QAlgebraElt::e_zeta(p).as_matrix(m.sigma());
    let (m1, mz) = (m.lattice().map(&e1)?, m.lattice().map(&ez)?);
    let (l1, lz) = (l.lattice().map(&e1)?, l.lattice().map(&ez)?);
    if m1.sum(&mz)? != *m.lattice() || l1.sum(&lz)? != *l.lattice() {
        return Err(Error::InternalContradiction("lattice does not split along e_1, e_zeta".into()));
    }

    let (y, m_exps) = m1.adapted_basis(&l1)?;
    let y_vectors = y.to_rows();

    let mz = m.with_lattice(mz)?;
    let mut xs = t_basis(&mz)?;
    let b = xs.len();
    let mut c: Vec<Vec<CycloElt>> =
        lz.basis().row_iter().map(|r| t_coordinates(&mz, &xs, r)).collect::<Result<_>>()?;
    let sigma = m.sigma().clone();
    for s in 0..b {
        let mut best: Option<(usize, usize, Valuation)> = None;
        for (i, row) in c.iter().enumerate().skip(s) {
            for (j, e) in row.iter().enumerate().skip(s) {
                let v = e.pi_valuation();
                if !v.is_infinite() && best.is_none_or(|bst| v < bst.2) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((bi, bj, _)) = best else {
            return Err(Error::InternalContradiction("L e_zeta has smaller T-rank than M e_zeta".into()));
        };
        c.swap(s, bi);
        for row in c.iter_mut() {
            row.swap(s, bj);
        }
        xs.swap(s, bj);
        let d_inv = c[s][s].inverse().expect("nonzero pivot");
        for i in s + 1..c.len() {
            if c[i][s].is_zero() {
                continue;
            }
            let q = c[i][s].mul(&d_inv);
            let pivot_row = c[s].clone();
            for (x, y) in c[i].iter_mut().zip(&pivot_row) {
                *x = x.sub(&q.mul(y));
            }
        }
        for j in s + 1..b {
            if c[s][j].is_zero() {
                continue;
            }
            // column_j -= q·column_s, so x_s absorbs q·x_j
            let q = c[s][j].mul(&d_inv);
            for row in c.iter_mut() {
                let t = row[s].mul(&q);
                row[j] = row[j].sub(&t);
            }
            let shift = cyclo_act(&q, &xs[j], &sigma);
            xs[s] = xs[s].iter().zip(&shift).map(|(a, b)| a + b).collect();
        }
    }
    let mut pairs: Vec<(i64, Vec<Rational>)> = (0..b)
        .map(|i| {
            let n = c[i][i].pi_valuation().finite().expect("nonzero pivot");
            (n, xs[i].clone())
        })
        .collect();
    pairs.sort_by_key(|(n, _)| *n);
    let (n_exps, x_vectors): (Vec<i64>, Vec<Vec<Rational>>) = pairs.into_iter().unzip();

    let out = PseudoBasisResult { x_vectors, n: n_exps, y_vectors, m: m_exps };
    check_pseudobasis(m, l, &out)?;
    Ok(out)
}

/// Re-derives both lattices from the pseudo-basis.
fn check_pseudobasis(m: &SigmaLattice, l: &SigmaLattice, r: &PseudoBasisResult) -> Result<()> {
    let p = m.prime();
    let one_minus_sigma = &QMatrix::identity(m.ambient_dim()) - m.sigma();
    let m_span = t_span(m, &r.x_vectors)?.sum(&ZpLattice::from_rows(m.ambient_dim(), r.y_vectors.clone(), p)?)?;
    let scaled_x: Vec<Vec<Rational>> = r
        .x_vectors
        .iter()
        .zip(&r.n)
        .map(|(x, &n)| {
            let mut v = x.clone();
            for _ in 0..n {
                v = one_minus_sigma.vec_mul(&v);
            }
            v
        })
        .collect();
    let scaled_y: Vec<Vec<Rational>> =
        r.y_vectors.iter().zip(&r.m).map(|(y, &k)| vec_scale(y, &p.pow(k))).collect();
    let l_span = t_span(m, &scaled_x)?.sum(&ZpLattice::from_rows(m.ambient_dim(), scaled_y, p)?)?;
    let sorted = r.n.windows(2).all(|w| w[0] <= w[1]) && r.m.windows(2).all(|w| w[0] <= w[1]);
    if m_span != *m.lattice() || l_span != *l.lattice() || !sorted || r.n.iter().chain(&r.m).any(|&e| e < 0) {
        return Err(Error::InternalContradiction("pseudo-basis does not reproduce M and L".into()));
    }
    Ok(())
}
