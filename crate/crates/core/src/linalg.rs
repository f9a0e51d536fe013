//! Exact dense linear algebra: rank, reduced echelon form, kernels and
//! solves over every supported field.
//!
//! Over ℚ rows are cleared to integers and reduced with Bareiss'
//! fraction-free elimination; over ℚ(ζₘ) the same elimination runs on
//! denominator-cleared entries; over 𝔽ₚ a word-sized Gauss–Jordan is used.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::field::{inv_mod, mul_mod, FieldSpec, Scalar};
use crate::upoly::UniPoly;

/// Ring elements admitting exact division by known divisors.
pub(crate) trait ExactRing: Clone {
    fn is_zero(&self) -> bool;
    fn mul(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn div_exact(&self, other: &Self) -> Self;
}

impl ExactRing for BigInt {
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Self {
        debug_assert!(
            num_traits::Zero::is_zero(&(self % other)),
            "inexact Bareiss division"
        );
        self / other
    }
}

impl ExactRing for Scalar {
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        self.neg_ref()
    }
    fn div_exact(&self, other: &Self) -> Self {
        self.checked_div(other).expect("nonzero Bareiss pivot")
    }
}

impl ExactRing for UniPoly {
    fn is_zero(&self) -> bool {
        UniPoly::is_zero(self)
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn sub(&self, other: &Self) -> Self {
        self - other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn div_exact(&self, other: &Self) -> Self {
        UniPoly::div_exact(self, other).expect("inexact Bareiss division over K[x]")
    }
}

/// Fraction-free row echelon form in place. Returns pivot columns and the
/// permutation sign.
pub(crate) fn bareiss_echelon<T: ExactRing>(rows: &mut [Vec<T>], one: T) -> (Vec<usize>, bool) {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let mut prev = one;
    let mut r = 0;
    let mut pivots = Vec::new();
    let mut negated = false;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(found) = (r..nrows).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        if found != r {
            rows.swap(found, r);
            negated = !negated;
        }
        let (head, tail) = rows.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let pivot = pivot_row[c].clone();
        for row in tail.iter_mut() {
            let factor = row[c].clone();
            for j in c + 1..ncols {
                let v = pivot.mul(&row[j]);
                let v = if factor.is_zero() {
                    v
                } else {
                    v.sub(&factor.mul(&pivot_row[j]))
                };
                row[j] = v.div_exact(&prev);
            }
            row[c] = factor.sub(&factor);
        }
        prev = pivot;
        pivots.push(c);
        r += 1;
    }
    (pivots, negated)
}

/// Determinant of a square matrix over an exact ring.
pub(crate) fn bareiss_det<T: ExactRing>(mut rows: Vec<Vec<T>>, one: T, zero: T) -> T {
    let n = rows.len();
    if n == 0 {
        return one;
    }
    let (pivots, negated) = bareiss_echelon(&mut rows, one);
    if pivots.len() < n {
        return zero;
    }
    let d = rows[n - 1][n - 1].clone();
    if negated {
        d.neg()
    } else {
        d
    }
}

/// A dense matrix of scalars from a single field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: Vec<Vec<Scalar>>,
    ncols: usize,
}

/// Reduced row echelon form: pivot entries are 1 and are the only nonzero
/// entries of their columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub pivots: Vec<usize>,
    pub rows: Vec<Vec<Scalar>>,
    pub ncols: usize,
}

impl Matrix {
    pub fn zeros(field: FieldSpec, nrows: usize, ncols: usize) -> Self {
        Matrix {
            field,
            rows: vec![vec![field.zero(); ncols]; nrows],
            ncols,
        }
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Self {
        let ncols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == ncols), "ragged matrix");
        Matrix { field, rows, ncols }
    }

    /// Builds a matrix whose columns are the given vectors (all of length `nrows`).
    pub fn from_columns(field: FieldSpec, nrows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zeros(field, nrows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows);
            for (i, v) in col.iter().enumerate() {
                m.rows[i][j] = v.clone();
            }
        }
        m
    }

    pub fn from_ints(field: FieldSpec, rows: &[Vec<i64>]) -> Self {
        Matrix::from_rows(
            field,
            rows.iter()
                .map(|r| r.iter().map(|&v| field.int(v)).collect())
                .collect(),
        )
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.rows[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.rows[i][j] = v;
    }

    pub fn rows(&self) -> &[Vec<Scalar>] {
        &self.rows
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.ncols).map(|j| self.column(j)).collect();
        Matrix::from_rows(self.field, cols).with_cols(self.nrows())
    }

    fn with_cols(mut self, ncols: usize) -> Matrix {
        if self.rows.is_empty() {
            self.ncols = ncols;
        }
        self
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self
                .rows
                .iter()
                .map(|r| r.iter().map(|v| v * c).collect())
                .collect(),
            ncols: self.ncols,
        }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ncols);
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect()
    }

    /// Horizontal concatenation.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.nrows(), other.nrows());
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        Matrix {
            field: self.field,
            rows,
            ncols: self.ncols + other.ncols,
        }
    }

    pub fn rank(&self) -> usize {
        if self.rows.is_empty() || self.ncols == 0 {
            return 0;
        }
        match self.field {
            FieldSpec::PrimeField(p) => {
                let mut m = self.to_words(p);
                gauss_jordan_words(&mut m, p, false).len()
            }
            FieldSpec::Rationals => {
                let mut m = self.to_integer_rows();
                bareiss_echelon(&mut m, BigInt::one()).0.len()
            }
            FieldSpec::Cyclotomic(_) => {
                let mut m = self.to_cleared_rows();
                bareiss_echelon(&mut m, self.field.one()).0.len()
            }
        }
    }

    /// Determinant of a square matrix.
    pub fn det(&self) -> Scalar {
        assert_eq!(self.nrows(), self.ncols, "determinant of non-square matrix");
        match self.field {
            FieldSpec::Rationals => {
                let scale = self
                    .rows
                    .iter()
                    .fold(BigInt::one(), |acc, r| acc * row_denominator(r));
                let d = bareiss_det(self.to_integer_rows(), BigInt::one(), BigInt::zero());
                Scalar::Rational(BigRational::new(d, scale))
            }
            _ => bareiss_det(self.rows.clone(), self.field.one(), self.field.zero()),
        }
    }

    pub fn rref(&self) -> Rref {
        let ncols = self.ncols;
        if self.rows.is_empty() || ncols == 0 {
            return Rref {
                pivots: vec![],
                rows: vec![],
                ncols,
            };
        }
        match self.field {
            FieldSpec::PrimeField(p) => {
                let mut m = self.to_words(p);
                let pivots = gauss_jordan_words(&mut m, p, true);
                let rows = m
                    .into_iter()
                    .take(pivots.len())
                    .map(|r| {
                        r.into_iter()
                            .map(|value| Scalar::Prime { p, value })
                            .collect()
                    })
                    .collect();
                Rref {
                    pivots,
                    rows,
                    ncols,
                }
            }
            FieldSpec::Rationals => {
                let mut m = self.to_integer_rows();
                let (pivots, _) = bareiss_echelon(&mut m, BigInt::one());
                let rows = m
                    .into_iter()
                    .take(pivots.len())
                    .map(|r| {
                        r.into_iter()
                            .map(|v| Scalar::Rational(BigRational::from_integer(v)))
                            .collect()
                    })
                    .collect();
                back_substitute(pivots, rows, ncols)
            }
            FieldSpec::Cyclotomic(_) => {
                let mut m = self.to_cleared_rows();
                let (pivots, _) = bareiss_echelon(&mut m, self.field.one());
                m.truncate(pivots.len());
                back_substitute(pivots, m, ncols)
            }
        }
    }

    /// Basis of the right kernel, one vector per non-pivot column.
    pub fn kernel(&self) -> Vec<Vec<Scalar>> {
        let ncols = self.ncols;
        if self.rows.is_empty() {
            return (0..ncols).map(|j| unit(self.field, ncols, j)).collect();
        }
        let rref = self.rref();
        let pivot_set: Vec<bool> = {
            let mut s = vec![false; ncols];
            for &p in &rref.pivots {
                s[p] = true;
            }
            s
        };
        (0..ncols)
            .filter(|&j| !pivot_set[j])
            .map(|free| {
                let mut v = vec![self.field.zero(); ncols];
                v[free] = self.field.one();
                for (row, &p) in rref.rows.iter().zip(&rref.pivots) {
                    v[p] = -&row[free];
                }
                v
            })
            .collect()
    }

    /// A particular solution of `self · x = rhs`, if one exists.
    pub fn solve(&self, rhs: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(rhs.len(), self.nrows());
        let n = self.ncols;
        if self.rows.is_empty() {
            return Some(vec![self.field.zero(); n]);
        }
        let aug = self.hstack(&Matrix::from_columns(
            self.field,
            self.nrows(),
            &[rhs.to_vec()],
        ));
        let rref = aug.rref();
        if rref.pivots.last() == Some(&n) {
            return None;
        }
        let mut x = vec![self.field.zero(); n];
        for (row, &p) in rref.rows.iter().zip(&rref.pivots) {
            x[p] = row[n].clone();
        }
        Some(x)
    }

    fn to_words(&self, p: u64) -> Vec<Vec<u64>> {
        self.rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|v| match v {
                        Scalar::Prime { value, .. } => *value,
                        _ => unreachable!("non-prime-field scalar in 𝔽ₚ matrix"),
                    })
                    .map(|v| v % p)
                    .collect()
            })
            .collect()
    }

    fn to_integer_rows(&self) -> Vec<Vec<BigInt>> {
        self.rows
            .iter()
            .map(|r| {
                let den = row_denominator(r);
                r.iter()
                    .map(|v| match v {
                        Scalar::Rational(q) => {
                            (q * BigRational::from_integer(den.clone())).to_integer()
                        }
                        _ => unreachable!("non-rational scalar in ℚ matrix"),
                    })
                    .collect()
            })
            .collect()
    }

    fn to_cleared_rows(&self) -> Vec<Vec<Scalar>> {
        self.rows
            .iter()
            .map(|r| {
                let den = r
                    .iter()
                    .fold(BigInt::one(), |acc, v| acc.lcm(&v.denominator_lcm()));
                let s = Scalar::from_bigint(self.field, &den);
                r.iter().map(|v| v * &s).collect()
            })
            .collect()
    }
}

fn unit(field: FieldSpec, n: usize, j: usize) -> Vec<Scalar> {
    let mut v = vec![field.zero(); n];
    v[j] = field.one();
    v
}

fn row_denominator(r: &[Scalar]) -> BigInt {
    r.iter()
        .fold(BigInt::one(), |acc, v| acc.lcm(&v.denominator_lcm()))
}

/// Turns a (fraction-free) echelon form into reduced row echelon form.
fn back_substitute(pivots: Vec<usize>, mut rows: Vec<Vec<Scalar>>, ncols: usize) -> Rref {
    for r in (0..pivots.len()).rev() {
        let pc = pivots[r];
        let inv = rows[r][pc].inverse().expect("nonzero pivot");
        for v in rows[r].iter_mut().skip(pc) {
            if !v.is_zero() {
                *v = &*v * &inv;
            }
        }
        let (above, below) = rows.split_at_mut(r);
        let prow = &below[0];
        for row in above.iter_mut() {
            let f = row[pc].clone();
            if f.is_zero() {
                continue;
            }
            for j in pc..ncols {
                if !prow[j].is_zero() {
                    row[j] = &row[j] - &(&f * &prow[j]);
                }
            }
        }
    }
    Rref {
        pivots,
        rows,
        ncols,
    }
}

/// Gauss–Jordan over 𝔽ₚ on machine words. With `reduce` false only the
/// forward pass runs (enough for the rank).
pub(crate) fn gauss_jordan_words(m: &mut [Vec<u64>], p: u64, reduce: bool) -> Vec<usize> {
    let nrows = m.len();
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == nrows {
            break;
        }
        let Some(found) = (r..nrows).find(|&i| m[i][c] != 0) else {
            continue;
        };
        m.swap(found, r);
        let inv = inv_mod(m[r][c], p).expect("nonzero pivot");
        for v in m[r][c..].iter_mut() {
            *v = mul_mod(*v, inv, p);
        }
        let (above, rest) = m.split_at_mut(r);
        let (prow, below) = rest.split_first_mut().expect("pivot row");
        let prow = &*prow;
        let above: &mut [Vec<u64>] = if reduce { above } else { &mut [] };
        for row in below.iter_mut().chain(above.iter_mut()) {
            let f = row[c];
            if f == 0 {
                continue;
            }
            let nf = p - f;
            for j in c..ncols {
                if prow[j] != 0 {
                    row[j] = (row[j] + mul_mod(nf, prow[j], p)) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    /// Naive rational elimination used as an independent oracle.
    pub(crate) fn naive_rank(m: &Matrix) -> usize {
        let mut rows: Vec<Vec<Scalar>> = m.rows().to_vec();
        let ncols = m.ncols();
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
                continue;
            };
            rows.swap(p, rank);
            let inv = rows[rank][c].inverse().unwrap();
            for i in 0..rows.len() {
                if i != rank && !rows[i][c].is_zero() {
                    let f = &rows[i][c] * &inv;
                    for j in 0..ncols {
                        let t = &f * &rows[rank][j];
                        rows[i][j] = &rows[i][j] - &t;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    #[test]
    fn rank_kernel_solve_over_q() {
        let m = Matrix::from_ints(Q, &[vec![1, 2, 3], vec![2, 4, 6], vec![1, 0, 1]]);
        assert_eq!(m.rank(), 2);
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.mul_vec(&k[0]).iter().all(Scalar::is_zero));
        let rhs = vec![Q.int(4), Q.int(8), Q.int(2)];
        let x = m.solve(&rhs).unwrap();
        assert_eq!(m.mul_vec(&x), rhs);
        assert!(m.solve(&[Q.int(1), Q.int(0), Q.int(0)]).is_none());
    }

    #[test]
    fn determinant() {
        let m = Matrix::from_ints(Q, &[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]);
        assert_eq!(m.det(), Q.int(6));
        let f = FieldSpec::PrimeField(7);
        let m = Matrix::from_ints(f, &[vec![2, 0, 1], vec![1, 3, 2], vec![1, 1, 2]]);
        assert_eq!(m.det(), f.int(6));
    }

    #[test]
    fn empty_shapes() {
        let m = Matrix::zeros(Q, 0, 3);
        assert_eq!(m.rank(), 0);
        assert_eq!(m.kernel().len(), 3);
        let m = Matrix::zeros(Q, 3, 0);
        assert!(m.kernel().is_empty());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
            (1usize..7, 1usize..7).prop_flat_map(|(r, c)| {
                prop::collection::vec(prop::collection::vec(-3i64..4, c), r)
            })
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(300))]

            #[test]
            fn rank_matches_naive(rows in int_matrix()) {
                for field in [Q, FieldSpec::PrimeField(5), FieldSpec::Cyclotomic(5)] {
                    let m = Matrix::from_ints(field, &rows);
                    let r = m.rank();
                    prop_assert_eq!(r, naive_rank(&m));
                    let k = m.kernel();
                    prop_assert_eq!(k.len() + r, m.ncols());
                    for v in &k {
                        prop_assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
                    }
                }
            }

            #[test]
            fn rank_nullity_with_fractions(rows in int_matrix(), den in 1i64..9) {
                let m = Matrix::from_ints(Q, &rows).scale(&Scalar::Rational(BigRational::new(1.into(), den.into())));
                prop_assert_eq!(m.rank(), naive_rank(&m));
            }
        }
    }
}
