//! θ-stability of framed representations through the cyclic-generation
//! criterion, and critical-locus membership.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{vectors_rank, Matrix, Scalar, Vector};
use crate::potential::{gradient, FramedRep};

/// Linearly independent vectors spanning a subspace of `C^ambient_dim`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubspaceBasis {
    ambient_dim: usize,
    vectors: Vec<Vector>,
    #[serde(skip)]
    reduced: Vec<(usize, Vector)>,
}

impl SubspaceBasis {
    pub fn zero(ambient_dim: usize) -> Self {
        SubspaceBasis { ambient_dim, vectors: Vec::new(), reduced: Vec::new() }
    }

    pub fn new(ambient_dim: usize, vectors: Vec<Vector>) -> Result<Self> {
        if vectors_rank(ambient_dim, &vectors)? != vectors.len() {
            return Err(Error::DependentBasis);
        }
        let mut s = SubspaceBasis::zero(ambient_dim);
        for v in vectors {
            s.extend(v)?;
        }
        Ok(s)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[Vector] {
        &self.vectors
    }

    pub fn into_vectors(self) -> Vec<Vector> {
        self.vectors
    }

    /// Residue of `v` after elimination against the current span.
    fn reduce(&self, v: &[Scalar]) -> Vector {
        let mut w = v.to_vec();
        for (p, row) in &self.reduced {
            if w[*p].is_zero() {
                continue;
            }
            let f = w[*p].clone();
            for (x, y) in w.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        w
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    /// Adds `v` if it is outside the span; returns whether it was added.
    pub fn extend(&mut self, v: Vector) -> Result<bool> {
        if v.len() != self.ambient_dim {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} in ambient dimension {}",
                v.len(),
                self.ambient_dim
            )));
        }
        let w = self.reduce(&v);
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let inv = w[p].inv()?;
        let row: Vector = w.iter().map(|x| x * &inv).collect();
        // keep earlier rows reduced in the new pivot column
        for (_, r) in self.reduced.iter_mut() {
            if r[p].is_zero() {
                continue;
            }
            let f = r[p].clone();
            for (x, y) in r.iter_mut().zip(&row) {
                if !y.is_zero() {
                    *x -= &(&f * y);
                }
            }
        }
        self.reduced.push((p, row));
        self.vectors.push(v);
        Ok(true)
    }
}

/// Smallest `A,B,C`-invariant subspace of `C^n` containing the framing columns.
pub fn krylov_closure(rep: &FramedRep) -> SubspaceBasis {
    let n = rep.n();
    let mut span = SubspaceBasis::zero(n);
    let mut frontier: Vec<Vector> = Vec::new();
    for k in 0..rep.r() {
        let col = rep.v().column(k);
        if span.extend(col.clone()).expect("length n") {
            frontier.push(col);
        }
    }
    while let Some(v) = frontier.pop() {
        for m in rep.triple() {
            let w = m.mul_vec(&v).expect("length n");
            if span.extend(w.clone()).expect("length n") {
                frontier.push(w);
            }
        }
    }
    span
}

pub fn is_stable(rep: &FramedRep) -> bool {
    krylov_closure(rep).dim() == rep.n()
}

/// `[A,B] = [B,C] = [C,A] = 0` exactly.
pub fn is_critical(rep: &FramedRep) -> bool {
    gradient(rep).is_zero()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotPointReport {
    pub n: usize,
    pub r: usize,
    pub is_critical: bool,
    pub is_stable: bool,
    /// Squared Frobenius norm of the gradient, exact.
    pub gradient_norm_sq: Scalar,
    pub krylov_dim: usize,
}

impl QuotPointReport {
    pub fn is_quot_point(&self) -> bool {
        self.is_critical && self.is_stable
    }
}

pub fn quot_point_check(rep: &FramedRep) -> QuotPointReport {
    let g = gradient(rep);
    let k = krylov_closure(rep).dim();
    QuotPointReport {
        n: rep.n(),
        r: rep.r(),
        is_critical: g.is_zero(),
        is_stable: k == rep.n(),
        gradient_norm_sq: g.norm_sq(),
        krylov_dim: k,
    }
}

/// Simultaneous left eigenvectors of a commuting triple for a known joint
/// eigenvalue, as the null space of the stacked `Mᵀ − λ`.
pub fn joint_left_eigenspace(rep: &FramedRep, eig: &[Scalar; 3]) -> Vec<Vector> {
    let n = rep.n();
    let shifted: Vec<Matrix> = rep
        .triple()
        .iter()
        .zip(eig)
        .map(|(m, l)| m.transpose().try_sub(&Matrix::identity(n).scale(l)).expect("square"))
        .collect();
    Matrix::vstack(&shifted).expect("equal widths").kernel_basis()
}
