//! Smith normal form over the integers.
//!
//! The reduction uses the smallest nonzero entry of the active block as pivot,
//! clears its row and column by truncated division, and repairs the divisibility
//! chain by folding offending rows into the pivot row. Transforms are tracked
//! together with their inverses so callers can move between the original basis
//! and the adapted one without inverting anything.
//!
//! Arithmetic is either arbitrary precision ([`BigInt`]) or fixed-width `i64`
//! with every operation checked; the fixed-width engine reports
//! [`Error::Overflow`] instead of wrapping.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// Integer arithmetic the reduction needs. Every operation can fail on
/// overflow; arbitrary-precision implementations never do.
pub trait SnfScalar: Clone + Debug + PartialEq + PartialOrd + Zero + One + Send + Sync {
    fn checked_abs_val(&self) -> Option<Self>;
    fn checked_neg_val(&self) -> Option<Self>;
    /// `self - q * b`
    fn checked_mul_sub(&self, q: &Self, b: &Self) -> Option<Self>;
    /// Quotient truncated toward zero.
    fn checked_quot(&self, b: &Self) -> Option<Self>;
    fn is_multiple_of(&self, b: &Self) -> bool;
    fn to_bigint(&self) -> BigInt;
}

impl SnfScalar for i64 {
    fn checked_abs_val(&self) -> Option<Self> {
        self.checked_abs()
    }
    fn checked_neg_val(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn checked_mul_sub(&self, q: &Self, b: &Self) -> Option<Self> {
        q.checked_mul(*b).and_then(|p| self.checked_sub(p))
    }
    fn checked_quot(&self, b: &Self) -> Option<Self> {
        self.checked_div(*b)
    }
    fn is_multiple_of(&self, b: &Self) -> bool {
        self.checked_rem(*b) == Some(0)
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl SnfScalar for BigInt {
    fn checked_abs_val(&self) -> Option<Self> {
        Some(self.abs())
    }
    fn checked_neg_val(&self) -> Option<Self> {
        Some(-self)
    }
    fn checked_mul_sub(&self, q: &Self, b: &Self) -> Option<Self> {
        Some(self - q * b)
    }
    fn checked_quot(&self, b: &Self) -> Option<Self> {
        Some(self / b)
    }
    fn is_multiple_of(&self, b: &Self) -> bool {
        (self % b).is_zero()
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
}

/// `M = U * S * V` with `U`, `V` unimodular and `S` diagonal, `d_1 | d_2 | ...`.
/// The inverses `U^{-1}` and `V^{-1}` are carried along.
#[derive(Debug, Clone)]
pub struct SnfResult<T = BigInt> {
    pub u: IntMatrix<T>,
    pub s: IntMatrix<T>,
    pub v: IntMatrix<T>,
    pub u_inv: IntMatrix<T>,
    pub v_inv: IntMatrix<T>,
    /// Nonzero diagonal entries of `S`, all positive.
    pub divisors: Vec<T>,
}

impl<T: SnfScalar> SnfResult<T> {
    pub fn rank(&self) -> usize {
        self.divisors.len()
    }

    fn into_bigint(self) -> SnfResult<BigInt> {
        let conv = |m: &IntMatrix<T>| m.map(SnfScalar::to_bigint);
        SnfResult {
            u: conv(&self.u),
            s: conv(&self.s),
            v: conv(&self.v),
            u_inv: conv(&self.u_inv),
            v_inv: conv(&self.v_inv),
            divisors: self.divisors.iter().map(SnfScalar::to_bigint).collect(),
        }
    }
}

struct Transforms<T> {
    // l * m * r = s, u = l^{-1}, v = r^{-1}
    l: IntMatrix<T>,
    u: IntMatrix<T>,
    r: IntMatrix<T>,
    v: IntMatrix<T>,
}

struct Engine<T> {
    a: IntMatrix<T>,
    tr: Option<Transforms<T>>,
}

fn ovf<T>(v: Option<T>) -> Result<T> {
    v.ok_or(Error::Overflow)
}

fn row_axpy<T: SnfScalar>(m: &mut IntMatrix<T>, target: usize, src: usize, q: &T) -> Result<()> {
    let cols = m.cols();
    let data = m.data_mut();
    for c in 0..cols {
        let s = data[src * cols + c].clone();
        if !s.is_zero() {
            let t = &data[target * cols + c];
            data[target * cols + c] = ovf(t.checked_mul_sub(q, &s))?;
        }
    }
    Ok(())
}

fn col_axpy<T: SnfScalar>(m: &mut IntMatrix<T>, target: usize, src: usize, q: &T) -> Result<()> {
    let cols = m.cols();
    let rows = m.rows();
    let data = m.data_mut();
    for r in 0..rows {
        let s = data[r * cols + src].clone();
        if !s.is_zero() {
            let t = &data[r * cols + target];
            data[r * cols + target] = ovf(t.checked_mul_sub(q, &s))?;
        }
    }
    Ok(())
}

fn swap_rows<T: Clone + Zero>(m: &mut IntMatrix<T>, i: usize, j: usize) {
    if i == j {
        return;
    }
    let cols = m.cols();
    let data = m.data_mut();
    for c in 0..cols {
        data.swap(i * cols + c, j * cols + c);
    }
}

fn swap_cols<T: Clone + Zero>(m: &mut IntMatrix<T>, i: usize, j: usize) {
    if i == j {
        return;
    }
    let cols = m.cols();
    let rows = m.rows();
    let data = m.data_mut();
    for r in 0..rows {
        data.swap(r * cols + i, r * cols + j);
    }
}

fn neg_row<T: SnfScalar>(m: &mut IntMatrix<T>, i: usize) -> Result<()> {
    let cols = m.cols();
    let data = m.data_mut();
    for c in 0..cols {
        data[i * cols + c] = ovf(data[i * cols + c].checked_neg_val())?;
    }
    Ok(())
}

fn neg_col<T: SnfScalar>(m: &mut IntMatrix<T>, j: usize) -> Result<()> {
    let cols = m.cols();
    let rows = m.rows();
    let data = m.data_mut();
    for r in 0..rows {
        data[r * cols + j] = ovf(data[r * cols + j].checked_neg_val())?;
    }
    Ok(())
}

impl<T: SnfScalar> Engine<T> {
    fn new(m: &IntMatrix<T>, track: bool) -> Self {
        let tr = track.then(|| Transforms {
            l: IntMatrix::identity(m.rows()),
            u: IntMatrix::identity(m.rows()),
            r: IntMatrix::identity(m.cols()),
            v: IntMatrix::identity(m.cols()),
        });
        Engine { a: m.clone(), tr }
    }

    /// row_t -= q * row_s
    fn row_sub(&mut self, t: usize, s: usize, q: &T) -> Result<()> {
        row_axpy(&mut self.a, t, s, q)?;
        if let Some(tr) = &mut self.tr {
            row_axpy(&mut tr.l, t, s, q)?;
            let mq = ovf(q.checked_neg_val())?;
            col_axpy(&mut tr.u, s, t, &mq)?;
        }
        Ok(())
    }

    /// col_t -= q * col_s
    fn col_sub(&mut self, t: usize, s: usize, q: &T) -> Result<()> {
        col_axpy(&mut self.a, t, s, q)?;
        if let Some(tr) = &mut self.tr {
            col_axpy(&mut tr.r, t, s, q)?;
            let mq = ovf(q.checked_neg_val())?;
            row_axpy(&mut tr.v, s, t, &mq)?;
        }
        Ok(())
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        swap_rows(&mut self.a, i, j);
        if let Some(tr) = &mut self.tr {
            swap_rows(&mut tr.l, i, j);
            swap_cols(&mut tr.u, i, j);
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        swap_cols(&mut self.a, i, j);
        if let Some(tr) = &mut self.tr {
            swap_cols(&mut tr.r, i, j);
            swap_rows(&mut tr.v, i, j);
        }
    }

    fn row_negate(&mut self, i: usize) -> Result<()> {
        neg_row(&mut self.a, i)?;
        if let Some(tr) = &mut self.tr {
            neg_row(&mut tr.l, i)?;
            neg_col(&mut tr.u, i)?;
        }
        Ok(())
    }

    fn abs_at(&self, i: usize, j: usize) -> Result<T> {
        ovf(self.a.get(i, j).checked_abs_val())
    }

    /// Smallest nonzero |entry| in rows `rs` x cols `cs`.
    fn smallest(&self, rows: impl Iterator<Item = usize> + Clone, cols: impl Iterator<Item = usize> + Clone) -> Result<Option<(usize, usize)>> {
        let mut best: Option<(T, usize, usize)> = None;
        for i in rows {
            for j in cols.clone() {
                if self.a.get(i, j).is_zero() {
                    continue;
                }
                let v = self.abs_at(i, j)?;
                if best.as_ref().is_none_or(|(b, _, _)| v < *b) {
                    let one = v.is_one();
                    best = Some((v, i, j));
                    if one {
                        return Ok(best.map(|(_, i, j)| (i, j)));
                    }
                }
            }
        }
        Ok(best.map(|(_, i, j)| (i, j)))
    }

    fn run(mut self) -> Result<SnfResult<T>> {
        let (rows, cols) = (self.a.rows(), self.a.cols());
        let mut divisors = Vec::new();
        let mut t = 0;
        while t < rows.min(cols) {
            let Some((pi, pj)) = self.smallest(t..rows, t..cols)? else { break };
            self.row_swap(t, pi);
            self.col_swap(t, pj);
            loop {
                let pivot = self.a.get(t, t).clone();
                let mut clean = true;
                for i in t + 1..rows {
                    if !self.a.get(i, t).is_zero() {
                        let q = ovf(self.a.get(i, t).checked_quot(&pivot))?;
                        if !q.is_zero() {
                            self.row_sub(i, t, &q)?;
                        }
                        clean &= self.a.get(i, t).is_zero();
                    }
                }
                for j in t + 1..cols {
                    if !self.a.get(t, j).is_zero() {
                        let q = ovf(self.a.get(t, j).checked_quot(&pivot))?;
                        if !q.is_zero() {
                            self.col_sub(j, t, &q)?;
                        }
                        clean &= self.a.get(t, j).is_zero();
                    }
                }
                if clean {
                    let offending = (t + 1..rows)
                        .find(|&i| (t + 1..cols).any(|j| !self.a.get(i, j).is_multiple_of(&pivot)));
                    match offending {
                        Some(i) => {
                            let minus_one = ovf(T::one().checked_neg_val())?;
                            self.row_sub(t, i, &minus_one)?;
                            continue;
                        }
                        None => break,
                    }
                }
                // A remainder is now smaller than the pivot; bring it to (t, t).
                let in_col = self.smallest(t..rows, t..t + 1)?;
                let in_row = self.smallest(t..t + 1, t..cols)?;
                let pick = match (in_col, in_row) {
                    (Some(a), Some(b)) => {
                        if self.abs_at(a.0, a.1)? <= self.abs_at(b.0, b.1)? {
                            a
                        } else {
                            b
                        }
                    }
                    (Some(a), None) | (None, Some(a)) => a,
                    (None, None) => unreachable!("pivot row and column cannot both vanish"),
                };
                self.row_swap(t, pick.0);
                self.col_swap(t, pick.1);
            }
            if self.a.get(t, t) < &T::zero() {
                self.row_negate(t)?;
            }
            divisors.push(self.a.get(t, t).clone());
            t += 1;
        }
        let (l, u, r, v) = match self.tr {
            Some(tr) => (tr.l, tr.u, tr.r, tr.v),
            None => (IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0), IntMatrix::zeros(0, 0)),
        };
        Ok(SnfResult { u, s: self.a, v, u_inv: l, v_inv: r, divisors })
    }
}

/// Fixed-width Smith normal form; fails with [`Error::Overflow`] rather than wrapping.
pub fn smith_normal_form_checked(m: &IntMatrix<i64>) -> Result<SnfResult<i64>> {
    Engine::new(m, true).run()
}

/// Arbitrary-precision Smith normal form with unimodular transforms.
///
/// Runs the checked `i64` engine first and falls back to [`BigInt`] only when an
/// intermediate entry overflows, so results are always exact.
pub fn smith_normal_form(m: &IntMatrix<BigInt>) -> SnfResult<BigInt> {
    run_promoting(m, true)
}

/// Nonzero elementary divisors only; transforms are not tracked.
pub fn elementary_divisors(m: &IntMatrix<BigInt>) -> Vec<BigInt> {
    run_promoting(m, false).divisors
}

fn run_promoting(m: &IntMatrix<BigInt>, track: bool) -> SnfResult<BigInt> {
    let small: Option<Vec<i64>> = (0..m.rows())
        .flat_map(|r| m.row(r).iter())
        .map(|v| v.to_i64())
        .collect();
    if let Some(data) = small {
        let mi = IntMatrix::from_rows(m.rows(), m.cols(), data);
        if let Ok(res) = Engine::new(&mi, track).run() {
            return res.into_bigint();
        }
    }
    Engine::new(m, track).run().expect("arbitrary-precision reduction cannot overflow")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix<BigInt>) -> SnfResult<BigInt> {
        let r = smith_normal_form(m);
        assert_eq!(r.u.mul(&r.s).mul(&r.v), *m);
        assert_eq!(r.u.mul(&r.u_inv), IntMatrix::identity(m.rows()));
        assert_eq!(r.v.mul(&r.v_inv), IntMatrix::identity(m.cols()));
        for w in r.divisors.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain broken: {:?}", r.divisors);
        }
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let expect_zero = i != j || i >= r.rank();
                assert_eq!(r.s.get(i, j).is_zero(), expect_zero);
            }
        }
        r
    }

    #[test]
    fn diag_two_three_gives_one_six() {
        let m = IntMatrix::from_i64(2, 2, &[2, 0, 0, 3]);
        let r = check(&m);
        assert_eq!(r.divisors, vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn zero_matrix_keeps_identities() {
        let m = IntMatrix::<BigInt>::zeros(3, 2);
        let r = check(&m);
        assert!(r.divisors.is_empty());
        assert_eq!(r.u, IntMatrix::identity(3));
        assert_eq!(r.v, IntMatrix::identity(2));
    }

    #[test]
    fn one_by_one() {
        let r = check(&IntMatrix::from_i64(1, 1, &[1]));
        assert_eq!(r.s, IntMatrix::from_i64(1, 1, &[1]));
    }

    #[test]
    fn empty_shapes() {
        check(&IntMatrix::<BigInt>::zeros(0, 4));
        check(&IntMatrix::<BigInt>::zeros(4, 0));
    }

    #[test]
    fn mixed_matrix() {
        let m = IntMatrix::from_i64(3, 4, &[2, 4, 4, 0, -6, 6, 12, 2, 10, -4, -16, 8]);
        let r = check(&m);
        assert_eq!(r.divisors, vec![BigInt::from(2), BigInt::from(2), BigInt::from(12)]);
    }

    #[test]
    fn checked_engine_reports_overflow() {
        let m = IntMatrix::from_rows(2, 2, vec![i64::MAX, i64::MAX - 1, i64::MIN + 2, 3]);
        assert_eq!(smith_normal_form_checked(&m).err(), Some(Error::Overflow));
    }

    #[test]
    fn promotion_handles_huge_entries() {
        let big = BigInt::from(i64::MAX) * BigInt::from(7);
        let m = IntMatrix::from_rows(2, 2, vec![big.clone(), BigInt::from(0), BigInt::from(0), BigInt::from(14)]);
        let r = check(&m);
        assert_eq!(r.divisors, vec![BigInt::from(7), BigInt::from(14) * BigInt::from(i64::MAX)]);
    }
}
