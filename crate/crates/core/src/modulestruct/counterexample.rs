//! The pair `L ⊆ M ≅ R ⊕ S` with `pM ⊆ L`, `L ≅ S ⊕ R` and `|M/L| = p²`.

use super::{decomposition_type, DecompositionType, SigmaLattice};
use crate::arith::Prime;
use crate::plattice::ZpLattice;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct CounterexampleReport {
    pub p: u32,
    pub type_m: DecompositionType,
    pub type_l: DecompositionType,
    pub pm_in_l: bool,
    pub l_in_m: bool,
    /// `k` with `|M/L| = p^k`.
    pub index_exponent: i64,
}

impl CounterexampleReport {
    pub fn types_ok(&self) -> bool {
        let want = DecompositionType::new(1, 0, 1);
        self.type_m == want && self.type_l == want
    }

    pub fn passes(&self) -> bool {
        self.types_ok() && self.pm_in_l && self.l_in_m && self.index_exponent == 2
    }
}

/// Builds `(M, L)`: `M = R·x ⊕ ℤ₍p₎·y` with `x` free and `y` fixed, and
/// `L = ⟨p·x·e_1, x(1 − σ) + y⟩_R`.
pub fn counterexample_pair(p: Prime) -> Result<(SigmaLattice, SigmaLattice)> {
    if p.get() == 2 {
        return Err(Error::UnsupportedPrime(2));
    }
    let n = p.as_usize() + 1;
    let m = SigmaLattice::block(p, 1, 0, 1);
    let x = ZpLattice::unit_vector(n, 0);
    let y = ZpLattice::unit_vector(n, p.as_usize());
    // p·x·e_1 = x·N
    let px_e1 = m.norm_matrix().row(0).to_vec();
    let x_sigma = m.sigma().vec_mul(&x);
    let second: Vec<_> = (0..n).map(|i| &x[i] - &x_sigma[i] + &y[i]).collect();
    let l = m.with_lattice(m.r_span(&[px_e1, second])?)?;
    Ok((m, l))
}

pub fn verify_counterexample(p: Prime) -> Result<CounterexampleReport> {
    let (m, l) = counterexample_pair(p)?;
    let pm = m.lattice().scale(&p.to_rational())?;
    let l_in_m = m.lattice().contains_lattice(l.lattice());
    Ok(CounterexampleReport {
        p: p.get(),
        type_m: decomposition_type(&m)?,
        type_l: decomposition_type(&l)?,
        pm_in_l: l.lattice().contains_lattice(&pm),
        l_in_m,
        index_exponent: if l_in_m { m.lattice().index_of(l.lattice())? } else { -1 },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primes() {
        for q in [3, 5, 7] {
            let r = verify_counterexample(Prime::new(q).unwrap()).unwrap();
            assert!(r.passes(), "{r:?}");
        }
    }

    #[test]
    fn p2_is_refused() {
        assert_eq!(verify_counterexample(Prime::new(2).unwrap()), Err(Error::UnsupportedPrime(2)));
    }
}
