//! Dense matrices over [`Scalar`] with fraction-free elimination.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::scalar::Scalar;
use crate::error::{Error, Result};

pub type Vector = Vec<Scalar>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Scalar::one();
        }
        m
    }

    /// Matrix unit `E_{ij}`.
    pub fn unit(rows: usize, cols: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        m[(i, j)] = Scalar::one();
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<Scalar>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| Scalar::from_int(v)).collect()).collect(),
        )
        .expect("ragged integer rows")
    }

    pub fn diagonal(entries: &[Scalar]) -> Self {
        let mut m = Matrix::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = e.clone();
        }
        m
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(dim: usize, cols: &[Vector]) -> Result<Self> {
        let mut m = Matrix::zeros(dim, cols.len());
        for (j, c) in cols.iter().enumerate() {
            if c.len() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "column of length {} in ambient dimension {dim}",
                    c.len()
                )));
            }
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn conj(&self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(Scalar::conj).collect() }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| x * s).collect() }
    }

    pub fn trace(&self) -> Scalar {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)].clone()).sum()
    }

    /// Sum of `|m_ij|²`.
    pub fn frobenius_norm_sq(&self) -> Scalar {
        self.data.iter().map(Scalar::norm).sum()
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn try_sub(&self, other: &Matrix) -> Result<Matrix> {
        self.check_same_shape(other)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    fn check_same_shape(&self, other: &Matrix) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Block-diagonal matrix with the given square or rectangular blocks.
    pub fn block_diag(blocks: &[Matrix]) -> Matrix {
        let rows = blocks.iter().map(Matrix::rows).sum();
        let cols = blocks.iter().map(Matrix::cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Stacks matrices with equal column counts on top of each other.
    pub fn vstack(parts: &[Matrix]) -> Result<Matrix> {
        let cols = parts.first().map_or(0, Matrix::cols);
        if parts.iter().any(|p| p.cols != cols) {
            return Err(Error::DimensionMismatch("vstack column counts differ".into()));
        }
        let rows = parts.iter().map(Matrix::rows).sum();
        let data = parts.iter().flat_map(|p| p.data.iter().cloned()).collect();
        Ok(Matrix { rows, cols, data })
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out[(i, j)] = self[(r0 + i, c0 + j)].clone();
            }
        }
        out
    }

    /// Fraction-free (Bareiss) forward elimination. Pivots are taken as the
    /// first nonzero entry at or below the current row, scanning columns left
    /// to right.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut prev = Scalar::one();
        let mut swaps = 0usize;
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            if p != r {
                m.swap_rows(p, r);
                swaps += 1;
            }
            let piv = m[(r, c)].clone();
            let prev_inv = prev.inv().expect("nonzero Bareiss pivot");
            for i in r + 1..rows {
                let lead = m[(i, c)].clone();
                for j in 0..cols {
                    if j < c {
                        continue;
                    }
                    let v = if lead.is_zero() {
                        &piv * &m[(i, j)]
                    } else {
                        &(&piv * &m[(i, j)]) - &(&lead * &m[(r, j)])
                    };
                    m[(i, j)] = if prev.is_one() { v } else { &v * &prev_inv };
                }
            }
            // Rows above r keep their scale; rows below were scaled by piv/prev.
            prev = piv;
            pivots.push(c);
            r += 1;
        }
        Echelon { matrix: m, pivots, swaps }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        if self.rows == 0 {
            return Ok(Scalar::one());
        }
        let e = self.echelon();
        if e.pivots.len() < self.rows {
            return Ok(Scalar::zero());
        }
        // Bareiss: the last pivot is the determinant up to the swap sign.
        let d = e.matrix[(self.rows - 1, self.cols - 1)].clone();
        Ok(if e.swaps % 2 == 1 { -d } else { d })
    }

    /// Exact basis of the right null space.
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let e = self.echelon();
        let m = &e.matrix;
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &p in &e.pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut x = vec![Scalar::zero(); self.cols];
            x[free] = Scalar::one();
            for (r, &pc) in e.pivots.iter().enumerate().rev() {
                let mut acc = Scalar::zero();
                for j in pc + 1..self.cols {
                    if !m[(r, j)].is_zero() && !x[j].is_zero() {
                        acc += &(&m[(r, j)] * &x[j]);
                    }
                }
                if !acc.is_zero() {
                    x[pc] = -(&acc / &m[(r, pc)]);
                }
            }
            basis.push(x);
        }
        basis
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for c in 0..n {
            let p = (c..n).find(|&i| !a[(i, c)].is_zero()).ok_or(Error::Singular)?;
            a.swap_rows(p, c);
            inv.swap_rows(p, c);
            let s = a[(c, c)].inv()?;
            for j in 0..n {
                a[(c, j)] = &a[(c, j)] * &s;
                inv[(c, j)] = &inv[(c, j)] * &s;
            }
            for i in 0..n {
                if i == c || a[(i, c)].is_zero() {
                    continue;
                }
                let f = a[(i, c)].clone();
                for j in 0..n {
                    let da = &f * &a[(c, j)];
                    let di = &f * &inv[(c, j)];
                    a[(i, j)] -= &da;
                    inv[(i, j)] -= &di;
                }
            }
        }
        Ok(inv)
    }

    /// Solves `self · x = b` for some `x`, if the system is consistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch("right-hand side length".into()));
        }
        let mut aug = Matrix::zeros(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            aug[(i, self.cols)] = b[i].clone();
        }
        // A solution exists iff (x, -1) spans part of the kernel of [A | b].
        let ker = aug.kernel_basis();
        let Some(v) = ker.iter().find(|v| !v[self.cols].is_zero()) else {
            return Ok(None);
        };
        let s = -(v[self.cols].inv()?);
        Ok(Some(v[..self.cols].iter().map(|x| x * &s).collect()))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

/// Result of [`Matrix::echelon`].
#[derive(Debug, Clone)]
pub struct Echelon {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
    pub swaps: usize,
}

/// `AB − BA`.
pub fn commutator(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if !a.is_square() || !b.is_square() || a.rows != b.rows {
        return Err(Error::DimensionMismatch(format!(
            "commutator of {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    a.try_mul(b)?.try_sub(&b.try_mul(a)?)
}

/// Rank of a list of vectors (as columns).
pub fn vectors_rank(dim: usize, vectors: &[Vector]) -> Result<usize> {
    Ok(Matrix::from_columns(dim, vectors)?.transpose().rank())
}

pub fn dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
    u.iter().zip(v).filter(|(a, b)| !a.is_zero() && !b.is_zero()).map(|(a, b)| a * b).sum()
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &'a Matrix) -> Matrix {
        self.try_add(rhs).expect("matrix addition shape mismatch")
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &'a Matrix) -> Matrix {
        self.try_sub(rhs).expect("matrix subtraction shape mismatch")
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'a Matrix) -> Matrix {
        self.try_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|x| -x).collect() }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.to_rows()).finish()
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Matrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Matrix, D::Error> {
        let rows = Vec::<Vec<Scalar>>::deserialize(deserializer)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn arb_matrix(max: usize) -> impl Strategy<Value = Matrix> {
        (1..=max, 1..=max).prop_flat_map(|(r, c)| {
            proptest::collection::vec((-3i64..=3, -2i64..=2), r * c).prop_map(move |v| {
                Matrix::from_vec(r, c, v.into_iter().map(|(a, b)| Scalar::gaussian(a, b)).collect())
                    .unwrap()
            })
        })
    }

    fn arb_square_pair(max: usize) -> impl Strategy<Value = (Matrix, Matrix)> {
        (1..=max).prop_flat_map(|n| {
            let one = proptest::collection::vec(-4i64..=4, n * n);
            (one.clone(), one).prop_map(move |(a, b)| {
                let to = |v: Vec<i64>| {
                    Matrix::from_vec(n, n, v.into_iter().map(Scalar::from_int).collect()).unwrap()
                };
                (to(a), to(b))
            })
        })
    }

    proptest! {
        #[test]
        fn commutator_is_traceless((a, b) in arb_square_pair(4)) {
            prop_assert!(commutator(&a, &b).unwrap().trace().is_zero());
        }

        #[test]
        fn rank_nullity(m in arb_matrix(5)) {
            let ker = m.kernel_basis();
            prop_assert_eq!(m.rank() + ker.len(), m.cols());
            for v in &ker {
                prop_assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
            }
        }
    }

    #[test]
    fn commutator_examples() {
        let b = Matrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        assert!(commutator(&Matrix::identity(2), &b).unwrap().is_zero());
        assert!(commutator(&b, &b).unwrap().is_zero());
        let e12 = Matrix::unit(2, 2, 0, 1);
        let e21 = Matrix::unit(2, 2, 1, 0);
        assert_eq!(
            commutator(&e12, &e21).unwrap(),
            Matrix::diagonal(&[Scalar::one(), Scalar::from_int(-1)])
        );
        assert!(commutator(&Matrix::identity(2), &Matrix::identity(3)).is_err());
        assert!(commutator(&Matrix::zeros(2, 3), &Matrix::zeros(2, 3)).is_err());
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::zeros(3, 3).kernel_basis().len(), 3);
        assert!(Matrix::identity(3).kernel_basis().is_empty());
        let k = Matrix::from_int_rows(&[&[1, 1], &[2, 2]]).kernel_basis();
        assert_eq!(k.len(), 1);
        // proportional to (1, -1)
        assert_eq!(&k[0][0] + &k[0][1], Scalar::zero());
        assert!(!k[0][0].is_zero());
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_int_rows(&[&[0, 2, 1], &[1, 0, 0], &[3, 1, 5]]);
        // expansion along row 2: -1 * (2*5 - 1*1) = -9
        assert_eq!(m.determinant().unwrap(), Scalar::from_int(-9));
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(3));
        let sing = Matrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert_eq!(sing.determinant().unwrap(), Scalar::zero());
        assert_eq!(sing.inverse(), Err(Error::Singular));
    }

    #[test]
    fn determinant_complex() {
        let m = Matrix::from_rows(vec![
            vec![Scalar::gaussian(1, 1), Scalar::gaussian(0, 2)],
            vec![Scalar::frac(1, 2), Scalar::gaussian(3, 0)],
        ])
        .unwrap();
        // (1+i)·3 − 2i·(1/2) = 3 + 2i
        assert_eq!(m.determinant().unwrap(), Scalar::gaussian(3, 2));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Matrix::from_int_rows(&[&[1, 1], &[2, 2]]);
        let x = m.solve(&[Scalar::from_int(3), Scalar::from_int(6)]).unwrap().unwrap();
        assert_eq!(m.mul_vec(&x).unwrap(), vec![Scalar::from_int(3), Scalar::from_int(6)]);
        assert!(m.solve(&[Scalar::from_int(1), Scalar::from_int(1)]).unwrap().is_none());
    }

    #[test]
    fn json_is_row_major_nested() {
        let m = Matrix::from_int_rows(&[&[1, 2], &[3, 4]]);
        let js = serde_json::to_string(&m).unwrap();
        assert_eq!(js, r#"[["1","2"],["3","4"]]"#);
        assert_eq!(serde_json::from_str::<Matrix>(&js).unwrap(), m);
        assert!(serde_json::from_str::<Matrix>(r#"[["1"],["1","2"]]"#).is_err());
    }
}
