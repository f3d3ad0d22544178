use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{LinalgError, Rational};

/// Rectangular matrix of rationals stored row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    cols: usize,
    data: Vec<Vec<Rational>>,
}

impl RatMatrix {
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self, LinalgError> {
        if rows.iter().any(|r| r.len() != cols) {
            return Err(LinalgError::Ragged);
        }
        Ok(RatMatrix { cols, data: rows })
    }

    pub fn from_ints(rows: &[&[i64]], cols: usize) -> Result<Self, LinalgError> {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&x| Rational::from_integer(x.into())).collect())
            .collect();
        RatMatrix::from_rows(rows, cols)
    }

    pub fn empty(cols: usize) -> Self {
        RatMatrix { cols, data: Vec::new() }
    }

    pub fn identity(n: usize) -> Self {
        let data = (0..n)
            .map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
            .collect();
        RatMatrix { cols: n, data }
    }

    pub fn rows(&self) -> usize {
        self.data.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> {
        self.data.iter().map(Vec::as_slice)
    }

    pub fn push_row(&mut self, row: Vec<Rational>) -> Result<(), LinalgError> {
        if row.len() != self.cols {
            return Err(LinalgError::Ragged);
        }
        self.data.push(row);
        Ok(())
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> RatMatrix {
        let data = self.data.iter().map(|r| cols.iter().map(|&c| r[c].clone()).collect()).collect();
        RatMatrix { cols: cols.len(), data }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        self.data
            .iter()
            .map(|r| r.iter().zip(v).fold(Rational::zero(), |acc, (a, x)| acc + a * x))
            .collect()
    }

    /// Integer echelon form: each row rescaled to coprime integers, then eliminated
    /// with integer row combinations. Returns the nonzero rows and pivot columns.
    fn integer_echelon(&self) -> (Vec<Vec<BigInt>>, Vec<usize>) {
        let mut m: Vec<Vec<BigInt>> = self.data.iter().map(|r| primitive_row(&clear_denominators(r))).collect();
        let mut pivots = Vec::new();
        let mut top = 0;
        for col in 0..self.cols {
            let Some(p) = (top..m.len()).find(|&r| !m[r][col].is_zero()) else { continue };
            m.swap(top, p);
            if m[top][col].is_negative() {
                for x in m[top].iter_mut() {
                    *x = -&*x;
                }
            }
            let pivot_row = m[top].clone();
            for (r, row) in m.iter_mut().enumerate() {
                if r == top || row[col].is_zero() {
                    continue;
                }
                let g = row[col].gcd(&pivot_row[col]);
                let a = &pivot_row[col] / &g;
                let b = &row[col] / &g;
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = &a * &*x - &b * y;
                }
                *row = primitive_row(row);
            }
            pivots.push(col);
            top += 1;
            if top == m.len() {
                break;
            }
        }
        m.truncate(top);
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.integer_echelon().1.len()
    }

    /// Reduced row echelon form with unit pivots and zero rows dropped.
    pub fn rref(&self) -> RatMatrix {
        let (m, pivots) = self.integer_echelon();
        let data = m
            .into_iter()
            .zip(&pivots)
            .map(|(row, &c)| {
                let p = row[c].clone();
                row.into_iter().map(|x| Rational::new(x, p.clone())).collect()
            })
            .collect();
        RatMatrix { cols: self.cols, data }
    }

    /// Right nullspace basis; one vector per free column, in increasing column order,
    /// with a 1 in that free column.
    pub fn nullspace(&self) -> Vec<Vec<Rational>> {
        let (m, pivots) = self.integer_echelon();
        let free = (0..self.cols).filter(|c| !pivots.contains(c));
        free.map(|f| {
            let mut v = vec![Rational::zero(); self.cols];
            v[f] = Rational::one();
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = -Rational::new(row[f].clone(), row[pc].clone());
            }
            v
        })
        .collect()
    }
}

pub fn nullspace(m: &RatMatrix) -> Vec<Vec<Rational>> {
    m.nullspace()
}

fn clear_denominators(v: &[Rational]) -> Vec<BigInt> {
    let l = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    v.iter().map(|x| x.numer() * (&l / x.denom())).collect()
}

fn primitive_row(v: &[BigInt]) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        return v.to_vec();
    }
    v.iter().map(|x| x / &g).collect()
}

/// Smallest integer multiple of `v` with coprime entries and `v[sign_index] > 0`.
pub fn primitive_normalize(v: &[Rational], sign_index: usize) -> Result<Vec<BigInt>, LinalgError> {
    if v.iter().all(Zero::is_zero) {
        return Err(LinalgError::ZeroVector);
    }
    match v.get(sign_index) {
        None => return Err(LinalgError::Length { expected: sign_index + 1, got: v.len() }),
        Some(x) if x.is_zero() => return Err(LinalgError::AmbiguousSign { index: sign_index }),
        _ => {}
    }
    let mut out = primitive_row(&clear_denominators(v));
    if out[sign_index].is_negative() {
        for x in out.iter_mut() {
            *x = -&*x;
        }
    }
    Ok(out)
}

impl fmt::Display for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.data {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::rat;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| rat(x)).collect()
    }

    fn big(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn identity_has_trivial_nullspace() {
        assert!(RatMatrix::identity(4).nullspace().is_empty());
        assert_eq!(RatMatrix::identity(4).rank(), 4);
    }

    #[test]
    fn two_row_example() {
        let m = RatMatrix::from_ints(&[&[1, 1, 0], &[0, 1, 1]], 3).unwrap();
        assert_eq!(m.nullspace(), vec![ints(&[1, -1, 1])]);
    }

    #[test]
    fn small_hilbert_system() {
        let m = RatMatrix::from_ints(&[&[1, 1, 0], &[1, 3, 3]], 3).unwrap();
        let ns = m.nullspace();
        assert_eq!(ns.len(), 1);
        let third = Rational::new(2.into(), 3.into());
        let scale = &ns[0][0];
        assert_eq!(ns[0].iter().map(|x| x / scale).collect::<Vec<_>>(), vec![rat(1), rat(-1), third]);
        assert_eq!(primitive_normalize(&ns[0], 0).unwrap(), big(&[3, -3, 2]));
    }

    #[test]
    fn normalization() {
        assert_eq!(primitive_normalize(&ints(&[-2, 4]), 0).unwrap(), big(&[1, -2]));
        assert_eq!(primitive_normalize(&ints(&[3, -3, 2]), 0).unwrap(), big(&[3, -3, 2]));
        assert_eq!(primitive_normalize(&ints(&[0, 4]), 0), Err(LinalgError::AmbiguousSign { index: 0 }));
        assert_eq!(primitive_normalize(&ints(&[0, 0]), 1), Err(LinalgError::ZeroVector));
    }

    #[test]
    fn ragged_rejected() {
        assert_eq!(RatMatrix::from_ints(&[&[1, 2], &[1]], 2), Err(LinalgError::Ragged));
    }

    #[test]
    fn rref_of_empty() {
        let m = RatMatrix::empty(3);
        assert_eq!(m.rref(), RatMatrix::empty(3));
        assert_eq!(m.nullspace().len(), 3);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(256))]

        #[test]
        fn nullspace_is_exact(rows in 0usize..6, cols in 1usize..7, seed in proptest::collection::vec(-4i64..5, 36)) {
            let data: Vec<Vec<Rational>> = (0..rows)
                .map(|r| (0..cols).map(|c| Rational::new(seed[r * 6 + c].into(), ((r + c) % 3 + 1).into())).collect())
                .collect();
            let m = RatMatrix::from_rows(data, cols).unwrap();
            let ns = m.nullspace();
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
            }
            prop_assert_eq!(ns.len() + m.rank(), cols);
            // Nullspace vectors are independent: stacking them gives full rank.
            if !ns.is_empty() {
                let stacked = RatMatrix::from_rows(ns.clone(), cols).unwrap();
                prop_assert_eq!(stacked.rank(), ns.len());
            }
        }
    }
}
