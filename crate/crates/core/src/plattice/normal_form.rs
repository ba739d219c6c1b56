//! Hermite and Smith normal forms over the discrete valuation ring ℤ₍p₎.
//!
//! Every p-unit is invertible here, so a pivot can always be normalised to an
//! exact power `p^k` and elimination only ever divides by the pivot of least
//! valuation.

use num_traits::Zero;

use super::matrix::QMatrix;
use crate::arith::{reduce_mod_pk, unit_part, vp, Prime, Rational, Valuation};
use crate::cancel::checkpoint;
use crate::Result;

fn axpy_row(rows: &mut [Vec<Rational>], target: usize, f: &Rational, src: usize) {
    let (t, s) = if target < src {
        let (a, b) = rows.split_at_mut(src);
        (&mut a[target], &b[0])
    } else {
        let (a, b) = rows.split_at_mut(target);
        (&mut b[0], &a[src])
    };
    for (x, y) in t.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x -= f * y;
        }
    }
}

/// Canonical p-local Hermite normal form of the row span of `m`.
///
/// The result is in row echelon form with zero rows removed. Each pivot is an
/// exact power `p^k` (k may be negative) and every entry above a pivot is the
/// canonical representative of its class modulo `p^k ℤ₍p₎` from
/// [`reduce_mod_pk`]. Two matrices with the same ℤ₍p₎-row span give identical
/// results.
pub fn hnf_local(m: &QMatrix, p: Prime) -> Result<QMatrix> {
    let cols = m.ncols();
    let mut rows: Vec<Vec<Rational>> =
        m.row_iter().filter(|r| r.iter().any(|x| !x.is_zero())).map(<[Rational]>::to_vec).collect();
    let mut pivots: Vec<(usize, i64)> = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let best = (r..rows.len())
            .filter(|&i| !rows[i][c].is_zero())
            .min_by_key(|&i| vp(&rows[i][c], p));
        let Some(best) = best else { continue };
        rows.swap(r, best);
        let (k, u) = unit_part(&rows[r][c], p);
        let u_inv = u.recip();
        for x in rows[r].iter_mut() {
            *x *= &u_inv;
        }
        let pk_inv = p.pow(-k);
        for i in r + 1..rows.len() {
            checkpoint()?;
            if rows[i][c].is_zero() {
                continue;
            }
            let f = &rows[i][c] * &pk_inv;
            axpy_row(&mut rows, i, &f, r);
        }
        pivots.push((c, k));
        r += 1;
    }
    rows.truncate(r);
    for (pr, &(c, k)) in pivots.iter().enumerate() {
        let pk_inv = p.pow(-k);
        for i in 0..pr {
            checkpoint()?;
            let e = &rows[i][c];
            let rep = reduce_mod_pk(e, p, k);
            if *e != rep {
                let f = (e - &rep) * &pk_inv;
                axpy_row(&mut rows, i, &f, pr);
            }
        }
    }
    Ok(QMatrix::from_rows(cols, rows))
}

/// Smith normal form over ℤ₍p₎ with transforms.
#[derive(Clone, Debug)]
pub struct SmithForm {
    /// Left transform, unimodular over ℤ₍p₎.
    pub left: QMatrix,
    /// Right transform, unimodular over ℤ₍p₎.
    pub right: QMatrix,
    /// Exponents `k_1 ≤ … ≤ k_r` with `left · M · right = diag(p^{k_i}) ⊕ 0`.
    pub exponents: Vec<i64>,
}

pub fn smith_local(m: &QMatrix, p: Prime) -> Result<SmithForm> {
    let (nr, nc) = (m.nrows(), m.ncols());
    let mut a = m.to_rows();
    let mut u = QMatrix::identity(nr).into_rows();
    // columns of V are tracked as rows of Vᵀ
    let mut vt = QMatrix::identity(nc).into_rows();
    let mut exponents = Vec::new();
    for s in 0..nr.min(nc) {
        let mut best: Option<(usize, usize, Valuation)> = None;
        for (i, row) in a.iter().enumerate().skip(s) {
            for (j, x) in row.iter().enumerate().skip(s) {
                let v = vp(x, p);
                if !v.is_infinite() && best.is_none_or(|b| v < b.2) {
                    best = Some((i, j, v));
                }
            }
        }
        let Some((bi, bj, _)) = best else { break };
        a.swap(s, bi);
        u.swap(s, bi);
        for row in a.iter_mut() {
            row.swap(s, bj);
        }
        vt.swap(s, bj);
        let (k, unit) = unit_part(&a[s][s], p);
        let inv = unit.recip();
        for x in a[s].iter_mut().chain(u[s].iter_mut()) {
            *x *= &inv;
        }
        let pk_inv = p.pow(-k);
        for i in s + 1..nr {
            checkpoint()?;
            if a[i][s].is_zero() {
                continue;
            }
            let f = &a[i][s] * &pk_inv;
            axpy_row(&mut a, i, &f, s);
            axpy_row(&mut u, i, &f, s);
        }
        for j in s + 1..nc {
            checkpoint()?;
            if a[s][j].is_zero() {
                continue;
            }
            let f = &a[s][j] * &pk_inv;
            for row in a.iter_mut() {
                let t = &row[s] * &f;
                row[j] -= t;
            }
            axpy_row(&mut vt, j, &f, s);
        }
        exponents.push(k);
    }
    Ok(SmithForm {
        left: QMatrix::from_rows(nr, u),
        right: QMatrix::from_rows(nc, vt).transpose(),
        exponents,
    })
}

/// Elementary-divisor exponents of `m` over ℤ₍p₎, ascending.
pub fn snf_local(m: &QMatrix, p: Prime) -> Result<Vec<i64>> {
    Ok(smith_local(m, p)?.exponents)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{frac, rat};

    fn pr(n: u32) -> Prime {
        Prime::new(n).unwrap()
    }

    #[test]
    fn hnf_examples() {
        let id = QMatrix::identity(3);
        assert_eq!(hnf_local(&id, pr(5)).unwrap(), id);
        let m = QMatrix::from_i64(&[vec![2, 0], vec![0, 1]]);
        assert_eq!(hnf_local(&m, pr(3)).unwrap(), QMatrix::identity(2));
        for q in [2, 3, 5, 7] {
            let m = QMatrix::from_i64(&[vec![q as i64, 0], vec![1, 1]]);
            let h = hnf_local(&m, pr(q)).unwrap();
            assert_eq!(h, QMatrix::from_i64(&[vec![1, 1], vec![0, q as i64]]));
        }
    }

    #[test]
    fn hnf_drops_dependent_rows() {
        let m = QMatrix::from_i64(&[vec![1, 2], vec![2, 4], vec![0, 0]]);
        let h = hnf_local(&m, pr(3)).unwrap();
        assert_eq!(h, QMatrix::from_i64(&[vec![1, 2]]));
        let z = QMatrix::zeros(2, 3);
        assert_eq!(hnf_local(&z, pr(3)).unwrap().nrows(), 0);
    }

    #[test]
    fn hnf_negative_pivots() {
        let q = pr(3);
        let m = QMatrix::from_rows(2, vec![vec![frac(1, 3), frac(5, 9)], vec![rat(0), frac(1, 9)]]);
        let h = hnf_local(&m, q).unwrap();
        assert_eq!(h, QMatrix::from_rows(2, vec![vec![frac(1, 3), rat(0)], vec![rat(0), frac(1, 9)]]));
    }

    #[test]
    fn snf_examples() {
        let q = pr(3);
        let d = QMatrix::diag(&[rat(1), rat(9)]);
        assert_eq!(snf_local(&d, q).unwrap(), vec![0, 2]);
        let m = QMatrix::from_i64(&[vec![3, 1], vec![0, 3]]);
        assert_eq!(snf_local(&m, q).unwrap(), vec![0, 2]);
        assert!(snf_local(&QMatrix::zeros(3, 2), q).unwrap().is_empty());
    }

    #[test]
    fn smith_transforms_diagonalise() {
        let q = pr(2);
        let m = QMatrix::from_rows(
            3,
            vec![vec![rat(4), frac(2, 3), rat(6)], vec![rat(8), rat(12), frac(1, 2)]],
        );
        let s = smith_local(&m, q).unwrap();
        let d = &(&s.left * &m) * &s.right;
        for i in 0..2 {
            for j in 0..3 {
                let expect = if i == j { q.pow(s.exponents[i]) } else { rat(0) };
                assert_eq!(d.get(i, j), &expect);
            }
        }
        assert_eq!(s.exponents, vec![-1, 1]);
    }

    #[test]
    fn cancelled_hnf() {
        let t = crate::cancel::CancelToken::new();
        t.cancel();
        let m = QMatrix::from_i64(&[vec![3, 1], vec![1, 3], vec![2, 2]]);
        let r = crate::cancel::with_token(&t, || hnf_local(&m, pr(3)));
        assert_eq!(r, Err(crate::Error::Cancelled));
    }
}
