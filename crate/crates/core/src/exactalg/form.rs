//! Symmetric bilinear forms given by a Gram matrix.

use super::matrix::{vectors_rank, Matrix, Vector};
use super::scalar::Scalar;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadraticForm {
    gram: Matrix,
}

impl QuadraticForm {
    pub fn new(gram: Matrix) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::DimensionMismatch("gram matrix must be square".into()));
        }
        if gram != gram.transpose() {
            return Err(Error::InvalidInput("gram matrix is not symmetric".into()));
        }
        Ok(QuadraticForm { gram })
    }

    pub fn zero(dim: usize) -> Self {
        QuadraticForm { gram: Matrix::zeros(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    /// `vᵀ · G · v` (bilinear, no conjugation).
    pub fn eval(&self, v: &[Scalar]) -> Result<Scalar> {
        self.bilinear(v, v)
    }

    pub fn bilinear(&self, u: &[Scalar], v: &[Scalar]) -> Result<Scalar> {
        let gv = self.gram.mul_vec(v)?;
        if u.len() != gv.len() {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok(super::matrix::dot(u, &gv))
    }

    pub fn radical(&self) -> Vec<Vector> {
        self.gram.kernel_basis()
    }

    pub fn rank(&self) -> usize {
        self.gram.rank()
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.determinant().map(|d| !d.is_zero()).unwrap_or(false)
    }

    /// Whether `v` pairs to zero with everything.
    pub fn in_radical(&self, v: &[Scalar]) -> Result<bool> {
        Ok(self.gram.mul_vec(v)?.iter().all(Scalar::is_zero))
    }
}

/// Gram matrix of `q` restricted to the span of `subspace`, in that basis.
pub fn form_restrict(q: &QuadraticForm, subspace: &[Vector]) -> Result<QuadraticForm> {
    if let Some(v) = subspace.iter().find(|v| v.len() != q.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "basis vector of length {} for a form of dimension {}",
            v.len(),
            q.dim()
        )));
    }
    if vectors_rank(q.dim(), subspace)? != subspace.len() {
        return Err(Error::DependentBasis);
    }
    let basis = Matrix::from_columns(q.dim(), subspace)?;
    let gram = basis.transpose().try_mul(&q.gram)?.try_mul(&basis)?;
    QuadraticForm::new(gram)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn std_basis(n: usize) -> Vec<Vector> {
        (0..n).map(|i| Matrix::identity(n).column(i)).collect()
    }

    fn hyperbolic4() -> QuadraticForm {
        // pairs (0,2) and (1,3)
        QuadraticForm::new(Matrix::from_int_rows(&[
            &[0, 0, 1, 0],
            &[0, 0, 0, 1],
            &[1, 0, 0, 0],
            &[0, 1, 0, 0],
        ]))
        .unwrap()
    }

    #[test]
    fn restrict_to_full_basis_is_identity() {
        let q = hyperbolic4();
        assert_eq!(form_restrict(&q, &std_basis(4)).unwrap(), q);
    }

    #[test]
    fn restrict_to_null_vector() {
        let q = QuadraticForm::new(Matrix::from_int_rows(&[&[1, 1], &[1, 1]])).unwrap();
        let null = q.radical();
        assert_eq!(null.len(), 1);
        let r = form_restrict(&q, &null).unwrap();
        assert_eq!(r.dim(), 1);
        assert!(r.gram().is_zero());
    }

    #[test]
    fn restrict_hyperbolic_to_pair() {
        let q = hyperbolic4();
        let e = std_basis(4);
        let r = form_restrict(&q, &[e[0].clone(), e[2].clone()]).unwrap();
        assert_eq!(r.gram(), &Matrix::from_int_rows(&[&[0, 1], &[1, 0]]));
    }

    #[test]
    fn dependent_basis_rejected() {
        let q = hyperbolic4();
        let e = std_basis(4);
        assert_eq!(form_restrict(&q, &[e[0].clone(), e[0].clone()]), Err(Error::DependentBasis));
    }

    #[test]
    fn congruence_under_change_of_basis() {
        let q = QuadraticForm::new(Matrix::from_int_rows(&[&[2, 1, 0], &[1, 0, 3], &[0, 3, -1]])).unwrap();
        let p = Matrix::from_int_rows(&[&[1, 2, 0], &[0, 1, 1], &[1, 0, 1]]);
        let cols: Vec<Vector> = (0..3).map(|j| p.column(j)).collect();
        let r = form_restrict(&q, &cols).unwrap();
        assert_eq!(r.gram(), &(&(&p.transpose() * q.gram()) * &p));
        // congruent forms share rank and determinant up to det(P)^2
        let dp = p.determinant().unwrap();
        assert_eq!(
            r.gram().determinant().unwrap(),
            &(&dp * &dp) * &q.gram().determinant().unwrap()
        );
    }

    #[test]
    fn asymmetric_gram_rejected() {
        assert!(QuadraticForm::new(Matrix::from_int_rows(&[&[0, 1], &[0, 0]])).is_err());
    }
}
