//! Integer matrices, Hermite normal form, and exact rational linear algebra.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Row-major integer matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// row[target] += k * row[src]
    fn add_row_multiple(&mut self, target: usize, src: usize, k: &BigInt) {
        if k.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * k;
            self.data[target * self.cols + j] += v;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let idx = i * self.cols + j;
            self.data[idx] = -std::mem::take(&mut self.data[idx]);
        }
    }

    /// Row-style Hermite normal form.
    ///
    /// The result has the same shape; nonzero rows come first in echelon
    /// form with positive pivots, entries above each pivot are reduced into
    /// `[0, pivot)`, and zero rows are moved to the bottom. The row span over
    /// ℤ is preserved.
    pub fn hnf(&self) -> IntMatrix {
        let mut m = self.clone();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            // Euclid down the column until a single nonzero entry remains.
            loop {
                let mut best: Option<usize> = None;
                for r in pivot_row..m.rows {
                    if m[(r, col)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|b| m[(r, col)].abs() < m[(b, col)].abs()) {
                        best = Some(r);
                    }
                }
                let Some(b) = best else { break };
                m.swap_rows(pivot_row, b);
                let mut done = true;
                for r in (pivot_row + 1)..m.rows {
                    if m[(r, col)].is_zero() {
                        continue;
                    }
                    let q = m[(r, col)].div_floor(&m[(pivot_row, col)]);
                    m.add_row_multiple(r, pivot_row, &-q);
                    if !m[(r, col)].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if m[(pivot_row, col)].is_zero() {
                continue;
            }
            if m[(pivot_row, col)].is_negative() {
                m.negate_row(pivot_row);
            }
            let p = m[(pivot_row, col)].clone();
            for r in 0..pivot_row {
                let q = m[(r, col)].div_floor(&p);
                m.add_row_multiple(r, pivot_row, &-q);
            }
            pivot_row += 1;
        }
        m
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[(k, k)].is_zero() {
                let Some(r) = (k + 1..n).find(|&r| !a[(r, k)].is_zero()) else {
                    return BigInt::zero();
                };
                a.swap_rows(k, r);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                    a[(i, j)] = v;
                }
            }
            prev = a[(k, k)].clone();
        }
        sign * &a[(n - 1, n - 1)]
    }

    /// Solve `c · self = v` for an integer row vector `c`, where `self` is
    /// in HNF with full row rank and pivots on the diagonal.
    pub fn solve_upper_integral(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let n = self.rows;
        debug_assert_eq!(n, self.cols);
        let mut c: Vec<BigInt> = Vec::with_capacity(n);
        for j in 0..n {
            let mut acc = v[j].clone();
            for (i, ci) in c.iter().enumerate() {
                acc -= ci * &self[(i, j)];
            }
            let p = &self[(j, j)];
            if p.is_zero() {
                return None;
            }
            let (q, r) = acc.div_rem(p);
            if !r.is_zero() {
                return None;
            }
            c.push(q);
        }
        Some(c)
    }
}

impl std::ops::Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for (j, x) in self.row(i).iter().enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{x}")?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Reduced row echelon form of a rational matrix, in place.
/// Returns the pivot columns.
pub fn rref(m: &mut [Vec<BigRational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let k = m[i][c].clone();
            let pivot_row = m[r].clone();
            for (x, p) in m[i].iter_mut().zip(&pivot_row) {
                *x -= p * &k;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(m: &[Vec<BigRational>]) -> usize {
    let mut a = m.to_vec();
    rref(&mut a).len()
}

/// Solve `x · A = b` for a row vector `x`, where `A` is square and invertible.
/// `None` if `A` is singular.
pub fn solve_left(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    // Transpose into the column system A^T x^T = b^T, augmented.
    let mut aug: Vec<Vec<BigRational>> = (0..n)
        .map(|j| {
            let mut row: Vec<BigRational> = (0..n).map(|i| a[i][j].clone()).collect();
            row.push(b[j].clone());
            row
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().any(|&p| p >= n) {
        return None;
    }
    Some(aug.into_iter().map(|row| row[n].clone()).collect())
}

/// Basis of the right nullspace `{x : M x = 0}`.
pub fn nullspace(m: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut a = m.to_vec();
    let pivots = rref(&mut a);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); cols];
            v[f] = BigRational::one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -a[row][f].clone();
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_i64_rows(rows)
    }

    #[test]
    fn hnf_examples() {
        assert_eq!(m(&[&[1, 0], &[0, 1]]).hnf(), m(&[&[1, 0], &[0, 1]]));
        assert_eq!(m(&[&[0, 1], &[1, 0]]).hnf(), m(&[&[1, 0], &[0, 1]]));
        assert_eq!(m(&[&[2, 0], &[1, 1]]).hnf(), m(&[&[1, 1], &[0, 2]]));
    }

    #[test]
    fn hnf_rank_deficient_moves_zero_rows_down() {
        let h = m(&[&[2, 4], &[1, 2], &[3, 6]]).hnf();
        assert_eq!(h, m(&[&[1, 2], &[0, 0], &[0, 0]]));
    }

    #[test]
    fn bareiss_determinant() {
        assert_eq!(
            m(&[&[2, 0, 1], &[1, 3, 2], &[1, 1, 2]]).det(),
            BigInt::from(6)
        );
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det(), BigInt::from(-1));
        assert_eq!(m(&[&[1, 2], &[2, 4]]).det(), BigInt::zero());
    }

    #[test]
    fn upper_solve() {
        let h = m(&[&[1, 1], &[0, 2]]);
        let v = [BigInt::from(3), BigInt::from(5)];
        assert_eq!(
            h.solve_upper_integral(&v),
            Some(vec![BigInt::from(3), BigInt::from(1)])
        );
        assert_eq!(
            h.solve_upper_integral(&[BigInt::from(0), BigInt::from(1)]),
            None
        );
    }

    #[test]
    fn rational_nullspace() {
        let r = |n: i64| BigRational::from_integer(n.into());
        let a = vec![vec![r(1), r(2), r(3)], vec![r(2), r(4), r(6)]];
        let ns = nullspace(&a);
        assert_eq!(ns.len(), 2);
        for v in ns {
            let dot: BigRational = a[0].iter().zip(&v).map(|(x, y)| x * y).sum();
            assert!(dot.is_zero());
        }
    }
}
