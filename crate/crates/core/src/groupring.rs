//! The group ring `R = ℤ₍p₎C_p`, the group algebra `ℚC_p`, the cyclotomic
//! field `ℚ(ζ_p)` with its ring of integers `T = ℤ₍p₎[ζ_p]`, and the maximal
//! order `S ⊕ T`.
//!
//! `ℚC_p ≅ ℚ ⊕ ℚ(ζ_p)` via `x ↦ (x(1), x(ζ_p))`; inside this, `R` is the
//! fibre product of pairs `(s, t)` in `S ⊕ T` with `s ≡ t (mod π)`,
//! where `π = 1 − ζ_p`.

use std::fmt;

use num_traits::{One, Zero};

use crate::arith::{format_rational, is_p_local, rat, residue_mod_p, vp, Prime, Rational, Valuation};
use crate::plattice::QMatrix;
use crate::{Error, Result};

fn check_len(p: Prime, len: usize, want: usize) -> Result<()> {
    if len != want {
        return Err(Error::DimensionMismatch(format!("expected {want} coefficients for p = {p}, got {len}")));
    }
    Ok(())
}

/// Element of `ℚC_p`: coefficient `i` belongs to `σ^i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QAlgebraElt {
    p: Prime,
    coeffs: Vec<Rational>,
}

impl QAlgebraElt {
    pub fn new(p: Prime, coeffs: Vec<Rational>) -> Result<Self> {
        check_len(p, coeffs.len(), p.as_usize())?;
        Ok(QAlgebraElt { p, coeffs })
    }

    pub fn zero(p: Prime) -> Self {
        QAlgebraElt { p, coeffs: vec![Rational::zero(); p.as_usize()] }
    }

    pub fn scalar(p: Prime, c: Rational) -> Self {
        let mut x = Self::zero(p);
        x.coeffs[0] = c;
        x
    }

    pub fn one(p: Prime) -> Self {
        Self::scalar(p, Rational::one())
    }

    /// `σ^k`, with `k` taken modulo `p`.
    pub fn sigma_pow(p: Prime, k: i64) -> Self {
        let mut x = Self::zero(p);
        x.coeffs[k.rem_euclid(p.get() as i64) as usize] = Rational::one();
        x
    }

    /// The norm element `1 + σ + … + σ^{p−1}`.
    pub fn norm_element(p: Prime) -> Self {
        QAlgebraElt { p, coeffs: vec![Rational::one(); p.as_usize()] }
    }

    /// The idempotent `e_1 = (1/p)(1 + σ + … + σ^{p−1})`.
    pub fn e1(p: Prime) -> Self {
        Self::norm_element(p).scale(&p.pow(-1))
    }

    /// The idempotent `e_ζ = 1 − e_1`.
    pub fn e_zeta(p: Prime) -> Self {
        Self::one(p).sub(&Self::e1(p))
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p);
        QAlgebraElt { p: self.p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QAlgebraElt { p: self.p, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    /// Cyclic convolution: coefficient `k` is `Σ_{i+j ≡ k} x_i y_j`.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p);
        let n = self.p.as_usize();
        let mut out = vec![Rational::zero(); n];
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    out[(i + j) % n] += x * y;
                }
            }
        }
        QAlgebraElt { p: self.p, coeffs: out }
    }

    /// `σ^i ↦ σ^{−i}`.
    pub fn involution(&self) -> Self {
        let n = self.p.as_usize();
        QAlgebraElt { p: self.p, coeffs: (0..n).map(|i| self.coeffs[(n - i) % n].clone()).collect() }
    }

    /// Image under `σ ↦ 1`.
    pub fn augmentation(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    /// Regular trace of `ℚC_p` over `ℚ`: `p` times the coefficient of `σ^0`.
    pub fn trace_reg(&self) -> Rational {
        &self.coeffs[0] * self.p.to_rational()
    }

    /// Image in `ℚ ⊕ ℚ(ζ_p)`.
    pub fn components(&self) -> MaxOrderElt {
        MaxOrderElt { s: self.augmentation(), t: CycloElt::from_power_sum(self.p, &self.coeffs) }
    }

    /// Matrix of `y ↦ y·self` on the basis `σ^0, …, σ^{p−1}`.
    pub fn mult_matrix(&self) -> QMatrix {
        let rows = (0..self.p.get() as i64)
            .map(|i| Self::sigma_pow(self.p, i).mul(self).coeffs)
            .collect();
        QMatrix::from_rows(self.p.as_usize(), rows)
    }

    pub fn inverse(&self) -> Option<Self> {
        let one = Self::one(self.p);
        let y = self.mult_matrix().solve_left(&one.coeffs)?;
        Some(QAlgebraElt { p: self.p, coeffs: y })
    }

    pub fn is_in_r(&self) -> bool {
        self.coeffs.iter().all(|c| is_p_local(c, self.p))
    }

    pub fn to_group_ring(&self) -> Result<GroupRingElt> {
        GroupRingElt::new(self.p, self.coeffs.clone())
    }

    /// Right action `v ↦ v·self` on a row vector, given the matrix of σ.
    pub fn act_on(&self, v: &[Rational], sigma: &QMatrix) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); v.len()];
        let mut cur = v.to_vec();
        for c in &self.coeffs {
            if !c.is_zero() {
                for (o, x) in out.iter_mut().zip(&cur) {
                    *o += c * x;
                }
            }
            cur = sigma.vec_mul(&cur);
        }
        out
    }

    /// Matrix of the right action of `self` given the matrix of σ.
    pub fn as_matrix(&self, sigma: &QMatrix) -> QMatrix {
        let n = sigma.nrows();
        let mut acc = QMatrix::zeros(n, n);
        let mut pow = QMatrix::identity(n);
        for c in &self.coeffs {
            if !c.is_zero() {
                acc = &acc + &pow.scale(c);
            }
            pow = &pow * sigma;
        }
        acc
    }
}

impl fmt::Display for QAlgebraElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "[{}]", cells.join(", "))
    }
}

/// Element of `R = ℤ₍p₎C_p`: all coefficients p-local.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupRingElt(QAlgebraElt);

impl GroupRingElt {
    pub fn new(p: Prime, coeffs: Vec<Rational>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| !is_p_local(c, p)) {
            return Err(Error::NotPLocal(format_rational(c), p.get()));
        }
        Ok(GroupRingElt(QAlgebraElt::new(p, coeffs)?))
    }

    pub fn from_i64(p: Prime, coeffs: &[i64]) -> Result<Self> {
        Self::new(p, coeffs.iter().map(|&c| rat(c)).collect())
    }

    pub fn zero(p: Prime) -> Self {
        GroupRingElt(QAlgebraElt::zero(p))
    }

    pub fn one(p: Prime) -> Self {
        GroupRingElt(QAlgebraElt::one(p))
    }

    pub fn scalar(p: Prime, c: i64) -> Self {
        GroupRingElt(QAlgebraElt::scalar(p, rat(c)))
    }

    pub fn sigma_pow(p: Prime, k: i64) -> Self {
        GroupRingElt(QAlgebraElt::sigma_pow(p, k))
    }

    pub fn norm_element(p: Prime) -> Self {
        GroupRingElt(QAlgebraElt::norm_element(p))
    }

    /// `1 − σ`, the element with components `(0, π)`.
    pub fn one_minus_sigma(p: Prime) -> Self {
        Self::one(p).sub(&Self::sigma_pow(p, 1)).unwrap()
    }

    pub fn as_q(&self) -> &QAlgebraElt {
        &self.0
    }

    pub fn prime(&self) -> Prime {
        self.0.p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.0.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.prime().check_same(rhs.prime())?;
        Ok(GroupRingElt(self.0.add(&rhs.0)))
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.prime().check_same(rhs.prime())?;
        Ok(GroupRingElt(self.0.sub(&rhs.0)))
    }

    pub fn neg(&self) -> Self {
        GroupRingElt(self.0.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.prime().check_same(rhs.prime())?;
        Ok(GroupRingElt(self.0.mul(&rhs.0)))
    }

    pub fn scale_int(&self, c: i64) -> Self {
        GroupRingElt(self.0.scale(&rat(c)))
    }

    pub fn involution(&self) -> Self {
        GroupRingElt(self.0.involution())
    }

    pub fn augmentation(&self) -> Rational {
        self.0.augmentation()
    }

    pub fn components(&self) -> MaxOrderElt {
        self.0.components()
    }

    pub fn trace_reg(&self) -> Rational {
        self.0.trace_reg()
    }

    /// Membership in `J(R) = pS ⊕ πT`: the augmentation is divisible by `p`.
    pub fn in_radical(&self) -> bool {
        vp(&self.augmentation(), self.prime()) >= Valuation::Finite(1)
    }

    /// Image in `R/J(R) ≅ 𝔽_p`.
    pub fn residue(&self) -> u32 {
        residue_mod_p(&self.augmentation(), self.prime())
    }

    pub fn is_unit(&self) -> bool {
        !self.in_radical()
    }

    /// Inverse inside `R`, when it exists.
    pub fn inverse(&self) -> Option<Self> {
        self.0.inverse().and_then(|y| y.to_group_ring().ok())
    }
}

impl fmt::Display for GroupRingElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Element of `ℚ(ζ_p)` in the power basis `ζ^0, …, ζ^{p−2}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CycloElt {
    p: Prime,
    coeffs: Vec<Rational>,
}

impl CycloElt {
    pub fn new(p: Prime, coeffs: Vec<Rational>) -> Result<Self> {
        check_len(p, coeffs.len(), p.as_usize() - 1)?;
        Ok(CycloElt { p, coeffs })
    }

    pub fn from_i64(p: Prime, coeffs: &[i64]) -> Result<Self> {
        Self::new(p, coeffs.iter().map(|&c| rat(c)).collect())
    }

    /// Reduces `Σ c_i ζ^i` (indices mod p) using `ζ^{p−1} = −(1 + … + ζ^{p−2})`.
    fn from_power_sum(p: Prime, c: &[Rational]) -> Self {
        let n = p.as_usize();
        let mut full = vec![Rational::zero(); n];
        for (i, x) in c.iter().enumerate() {
            full[i % n] += x;
        }
        let top = full[n - 1].clone();
        CycloElt { p, coeffs: full[..n - 1].iter().map(|x| x - &top).collect() }
    }

    pub fn zero(p: Prime) -> Self {
        CycloElt { p, coeffs: vec![Rational::zero(); p.as_usize() - 1] }
    }

    pub fn scalar(p: Prime, c: Rational) -> Self {
        let mut t = Self::zero(p);
        t.coeffs[0] = c;
        t
    }

    pub fn one(p: Prime) -> Self {
        Self::scalar(p, Rational::one())
    }

    pub fn zeta_pow(p: Prime, k: i64) -> Self {
        let mut c = vec![Rational::zero(); p.as_usize()];
        c[k.rem_euclid(p.get() as i64) as usize] = Rational::one();
        Self::from_power_sum(p, &c)
    }

    /// The prime element `π = 1 − ζ_p` of `T`.
    pub fn pi(p: Prime) -> Self {
        Self::one(p).sub(&Self::zeta_pow(p, 1))
    }

    pub fn prime(&self) -> Prime {
        self.p
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Membership in `T = ℤ₍p₎[ζ_p]`.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| is_p_local(c, self.p))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p);
        CycloElt { p: self.p, coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rational::one())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        CycloElt { p: self.p, coeffs: self.coeffs.iter().map(|x| x * c).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.p, rhs.p);
        let mut prod = vec![Rational::zero(); self.p.as_usize()];
        let n = self.p.as_usize();
        for (i, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in rhs.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    prod[(i + j) % n] += x * y;
                }
            }
        }
        Self::from_power_sum(self.p, &prod)
    }

    /// Complex conjugation `ζ ↦ ζ^{−1}`.
    pub fn conj(&self) -> Self {
        let n = self.p.as_usize();
        let mut c = vec![Rational::zero(); n];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[(n - i) % n] = x.clone();
        }
        Self::from_power_sum(self.p, &c)
    }

    /// Value at `ζ = 1`, i.e. the image of the lift `Σ t_i σ^i` under augmentation.
    pub fn eval_at_one(&self) -> Rational {
        self.coeffs.iter().sum()
    }

    pub fn inverse(&self) -> Option<Self> {
        let n = self.p.as_usize() - 1;
        let rows = (0..n as i64).map(|i| Self::zeta_pow(self.p, i).mul(self).coeffs).collect();
        let m = QMatrix::from_rows(n, rows);
        let y = m.solve_left(&Self::one(self.p).coeffs)?;
        Some(CycloElt { p: self.p, coeffs: y })
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inverse().map(|inv| self.mul(&inv))
    }

    /// Largest `k` with `self ∈ π^k T`; infinite for zero.
    ///
    /// Writing `self = p^m · t₀` with `t₀ ∈ T ∖ pT` and using `p ∈ π^{p−1}T^×`,
    /// the valuation is `m(p−1)` plus at most `p − 2` exact divisions of `t₀`
    /// by `π`.
    pub fn pi_valuation(&self) -> Valuation {
        if self.is_zero() {
            return Valuation::Infinite;
        }
        let m = self
            .coeffs
            .iter()
            .filter_map(|c| vp(c, self.p).finite())
            .min()
            .expect("nonzero element");
        let mut t = self.scale(&self.p.pow(-m));
        let pi_inv = Self::pi(self.p).inverse().expect("π is invertible");
        let mut k = 0;
        for _ in 0..self.p.get().saturating_sub(2) {
            let q = t.mul(&pi_inv);
            if !q.is_integral() {
                break;
            }
            t = q;
            k += 1;
        }
        Valuation::Finite(m * (self.p.get() as i64 - 1) + k)
    }
}

impl fmt::Display for CycloElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "[{}]", cells.join(", "))
    }
}

/// Pair `(s, t)` in `ℚ ⊕ ℚ(ζ_p)`; the maximal order `S ⊕ T` when both parts are integral.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MaxOrderElt {
    pub s: Rational,
    pub t: CycloElt,
}

impl MaxOrderElt {
    pub fn new(s: Rational, t: CycloElt) -> Self {
        MaxOrderElt { s, t }
    }

    pub fn prime(&self) -> Prime {
        self.t.p
    }

    pub fn is_in_max_order(&self) -> bool {
        is_p_local(&self.s, self.prime()) && self.t.is_integral()
    }

    /// Fibre-product membership: `s ≡ t (mod J)`, read off as `s ≡ Σ t_i (mod p)`.
    pub fn is_in_r(&self) -> bool {
        if !self.is_in_max_order() {
            return false;
        }
        let p = self.prime();
        let diff = &self.s - self.t.eval_at_one();
        vp(&diff, p) >= Valuation::Finite(1)
    }

    /// The unique element of `ℚC_p` with these components:
    /// `t(σ) + ((s − t(1))/p)·N`.
    pub fn lift_q(&self) -> QAlgebraElt {
        let p = self.prime();
        let mut coeffs = self.t.coeffs.clone();
        coeffs.push(Rational::zero());
        let shift = (&self.s - self.t.eval_at_one()) * p.pow(-1);
        QAlgebraElt { p, coeffs: coeffs.into_iter().map(|c| c + &shift).collect() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        MaxOrderElt { s: &self.s + &rhs.s, t: self.t.add(&rhs.t) }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        MaxOrderElt { s: &self.s * &rhs.s, t: self.t.mul(&rhs.t) }
    }

    pub fn neg(&self) -> Self {
        MaxOrderElt { s: -&self.s, t: self.t.neg() }
    }

    pub fn conj(&self) -> Self {
        MaxOrderElt { s: self.s.clone(), t: self.t.conj() }
    }

    pub fn is_zero(&self) -> bool {
        self.s.is_zero() && self.t.is_zero()
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.s.is_zero() {
            return None;
        }
        Some(MaxOrderElt { s: self.s.recip(), t: self.t.inverse()? })
    }

    pub fn one(p: Prime) -> Self {
        MaxOrderElt { s: Rational::one(), t: CycloElt::one(p) }
    }

    pub fn zero(p: Prime) -> Self {
        MaxOrderElt { s: Rational::zero(), t: CycloElt::zero(p) }
    }
}

/// Lifts an `R`-pair back to the group ring.
pub fn lift_pair(m: &MaxOrderElt) -> Result<GroupRingElt> {
    if !m.is_in_r() {
        return Err(Error::NotInR);
    }
    m.lift_q().to_group_ring()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::frac;
    use proptest::prelude::*;

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    const PRIMES: [u32; 4] = [2, 3, 5, 7];

    #[test]
    fn norm_is_annihilated() {
        for q in PRIMES.map(pr) {
            let x = GroupRingElt::one_minus_sigma(q).mul(&GroupRingElt::norm_element(q)).unwrap();
            assert!(x.is_zero());
            let y = GroupRingElt::from_i64(q, &vec![3; q.as_usize()]).unwrap();
            assert_eq!(GroupRingElt::one(q).mul(&y).unwrap(), y);
        }
    }

    #[test]
    fn square_of_one_minus_sigma_p3() {
        // (1 − σ)² = 1 − 2σ + σ² by direct expansion
        let q = pr(3);
        let x = GroupRingElt::one_minus_sigma(q);
        assert_eq!(x.mul(&x).unwrap(), GroupRingElt::from_i64(q, &[1, -2, 1]).unwrap());
    }

    #[test]
    fn mixed_primes_rejected() {
        let a = GroupRingElt::one(pr(3));
        let b = GroupRingElt::one(pr(5));
        assert!(matches!(a.mul(&b), Err(Error::PrimeMismatch(3, 5))));
    }

    #[test]
    fn involution_examples() {
        for q in PRIMES.map(pr) {
            assert_eq!(GroupRingElt::one(q).involution(), GroupRingElt::one(q));
            assert_eq!(
                GroupRingElt::sigma_pow(q, 1).involution(),
                GroupRingElt::sigma_pow(q, q.get() as i64 - 1)
            );
        }
    }

    #[test]
    fn component_examples() {
        for q in PRIMES.map(pr) {
            let c = GroupRingElt::one_minus_sigma(q).components();
            assert_eq!(c, MaxOrderElt::new(rat(0), CycloElt::pi(q)));
            assert_eq!(GroupRingElt::one(q).components(), MaxOrderElt::one(q));
            let e1 = QAlgebraElt::e1(q).components();
            assert_eq!(e1, MaxOrderElt::new(rat(1), CycloElt::zero(q)));
        }
    }

    #[test]
    fn lift_examples() {
        for q in PRIMES.map(pr) {
            let pi_pair = MaxOrderElt::new(rat(0), CycloElt::pi(q));
            assert_eq!(lift_pair(&pi_pair).unwrap(), GroupRingElt::one_minus_sigma(q));
            assert_eq!(lift_pair(&MaxOrderElt::one(q)).unwrap(), GroupRingElt::one(q));
            let e1 = MaxOrderElt::new(rat(1), CycloElt::zero(q));
            assert_eq!(lift_pair(&e1), Err(Error::NotInR));
        }
    }

    #[test]
    fn fibre_product_examples() {
        for q in PRIMES.map(pr) {
            let pe1 = MaxOrderElt::new(q.to_rational(), CycloElt::zero(q));
            assert!(pe1.is_in_r());
            assert_eq!(lift_pair(&pe1).unwrap(), GroupRingElt::norm_element(q));
            assert!(!MaxOrderElt::new(rat(1), CycloElt::zero(q)).is_in_r());
            assert!(MaxOrderElt::new(rat(0), CycloElt::pi(q)).is_in_r());
        }
    }

    #[test]
    fn radical_examples() {
        for q in PRIMES.map(pr) {
            assert!(GroupRingElt::one_minus_sigma(q).in_radical());
            assert!(!GroupRingElt::one(q).in_radical());
            assert!(GroupRingElt::sigma_pow(q, 2).scale_int(q.get() as i64).in_radical());
        }
    }

    /// Trace of the right-multiplication matrix, computed independently.
    fn matrix_trace(x: &QAlgebraElt) -> Rational {
        let m = x.mult_matrix();
        (0..m.nrows()).map(|i| m.get(i, i).clone()).sum()
    }

    #[test]
    fn trace_examples() {
        for q in PRIMES.map(pr) {
            assert_eq!(QAlgebraElt::one(q).trace_reg(), q.to_rational());
            for m in 1..q.get() as i64 {
                assert_eq!(QAlgebraElt::sigma_pow(q, m).trace_reg(), rat(0));
            }
            let e1 = QAlgebraElt::e1(q);
            assert_eq!(e1.trace_reg(), rat(1));
            assert_eq!(matrix_trace(&e1), rat(1));
        }
    }

    #[test]
    fn pi_valuation_examples() {
        for q in PRIMES.map(pr) {
            let pi = CycloElt::pi(q);
            assert_eq!(pi.pi_valuation(), Valuation::Finite(1));
            assert_eq!(CycloElt::one(q).pi_valuation(), Valuation::Finite(0));
            assert_eq!(CycloElt::zero(q).pi_valuation(), Valuation::Infinite);
            // oracle: divide p by π exactly p − 1 times, and no more
            let mut t = CycloElt::scalar(q, q.to_rational());
            for _ in 0..q.get() - 1 {
                t = t.div(&pi).unwrap();
                assert!(t.is_integral());
            }
            assert!(!t.div(&pi).unwrap().is_integral());
            assert_eq!(CycloElt::scalar(q, q.to_rational()).pi_valuation(), Valuation::Finite(q.get() as i64 - 1));
            let inv = pi.inverse().unwrap();
            assert_eq!(inv.pi_valuation(), Valuation::Finite(-1));
        }
    }

    #[test]
    fn p2_is_degenerate_but_legal() {
        let q = pr(2);
        assert_eq!(CycloElt::pi(q), CycloElt::from_i64(q, &[2]).unwrap());
        assert_eq!(CycloElt::zeta_pow(q, 1), CycloElt::from_i64(q, &[-1]).unwrap());
        assert_eq!(CycloElt::scalar(q, frac(4, 3)).pi_valuation(), Valuation::Finite(2));
    }

    fn elt(q: Prime) -> impl Strategy<Value = GroupRingElt> {
        proptest::collection::vec((-6i64..7, 1i64..4), q.as_usize()).prop_map(move |v| {
            let c = v
                .into_iter()
                .map(|(a, b)| {
                    let b = if (b as u32).is_multiple_of(q.get()) { b + 1 } else { b };
                    frac(a, b)
                })
                .collect();
            GroupRingElt::new(q, c).unwrap()
        })
    }

    fn elt_any_prime() -> impl Strategy<Value = (GroupRingElt, GroupRingElt)> {
        prop_oneof![Just(2u32), Just(3), Just(5), Just(7)]
            .prop_flat_map(|q| (elt(pr(q)), elt(pr(q))))
    }

    proptest! {
        #[test]
        fn components_are_multiplicative((x, y) in elt_any_prime()) {
            let lhs = x.mul(&y).unwrap().components();
            let rhs = x.components().mul(&y.components());
            prop_assert_eq!(lhs, rhs);
            let sum = x.add(&y).unwrap().components();
            prop_assert_eq!(sum, x.components().add(&y.components()));
        }

        #[test]
        fn lift_inverts_components((x, _y) in elt_any_prime()) {
            let c = x.components();
            prop_assert!(c.is_in_r());
            prop_assert_eq!(lift_pair(&c).unwrap(), x);
        }

        #[test]
        fn units_are_exactly_nonradical((x, _y) in elt_any_prime()) {
            let inv = x.inverse();
            prop_assert_eq!(inv.is_some(), !x.in_radical());
            if let Some(inv) = inv {
                prop_assert_eq!(x.mul(&inv).unwrap(), GroupRingElt::one(x.prime()));
            }
        }

        #[test]
        fn involution_conjugates_components((x, _y) in elt_any_prime()) {
            prop_assert_eq!(x.involution().involution(), x.clone());
            let c = x.components();
            let ci = x.involution().components();
            prop_assert_eq!(ci.s, c.s);
            prop_assert_eq!(ci.t, c.t.conj());
        }

        #[test]
        fn trace_form_is_nondegenerate((x, _y) in elt_any_prime()) {
            if !x.is_zero() {
                let t = x.mul(&x.involution()).unwrap().trace_reg();
                prop_assert!(!vp(&t, x.prime()).is_infinite());
            }
        }
    }

    #[test]
    fn trace_form_gram_is_identity() {
        for q in PRIMES.map(pr) {
            let n = q.get() as i64;
            for i in 0..n {
                for j in 0..n {
                    let x = QAlgebraElt::sigma_pow(q, i);
                    let y = QAlgebraElt::sigma_pow(q, j);
                    let b = x.mul(&y.involution()).trace_reg() * q.pow(-1);
                    assert_eq!(b, if i == j { rat(1) } else { rat(0) });
                }
            }
        }
    }
}
