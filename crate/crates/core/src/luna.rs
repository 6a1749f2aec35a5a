//! Luna-slice linear algebra at a polystable unframed point `y_E`.
//!
//! With `y = (α, β, γ)` block-scalar, the infinitesimal action is
//! `σ(X) = ([X,α], [X,β], [X,γ])`, and the tangent space splits as
//! `Y_a ⊕ im σ ⊕ Y^σ` where `Y^σ` is the zero-diagonal-block part of the
//! conjugate-linear complement of `im σ`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactalg::{form_restrict, vectors_rank, Matrix, Scalar, Vector};
use crate::potential::{hessian, FramedRep};
use crate::quiver::PolystableData;
use crate::stability::SubspaceBasis;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlicePoint {
    data: PolystableData,
    y: FramedRep,
    /// Summand index of each of the `n` basis vectors.
    block_of: Vec<usize>,
}

impl SlicePoint {
    pub fn new(data: PolystableData) -> Result<Self> {
        data.validate()?;
        let block_of: Vec<usize> = data
            .mults
            .iter()
            .enumerate()
            .flat_map(|(i, &a)| std::iter::repeat_n(i, a))
            .collect();
        let slot = |s: usize| {
            Matrix::diagonal(&block_of.iter().map(|&b| data.points[b][s].clone()).collect::<Vec<_>>())
        };
        let y = FramedRep::unframed(slot(0), slot(1), slot(2))?;
        Ok(SlicePoint { data, y, block_of })
    }

    pub fn data(&self) -> &PolystableData {
        &self.data
    }

    pub fn y(&self) -> &FramedRep {
        &self.y
    }

    pub fn n(&self) -> usize {
        self.y.n()
    }

    /// Coordinate dimension `3n²` of the unframed tangent space.
    pub fn dim(&self) -> usize {
        3 * self.n() * self.n()
    }

    fn off_diagonal(&self, i: usize, j: usize) -> bool {
        self.block_of[i] != self.block_of[j]
    }

    /// Number of entries lying in off-diagonal blocks, `Σ_{i≠j} a_i a_j`.
    pub fn off_diagonal_entries(&self) -> usize {
        let n = self.n();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| self.off_diagonal(i, j)).count()
    }
}

/// The `3n² × n²` matrix of `σ`, columns indexed by `E_ij` row-major.
pub fn sigma_matrix(p: &SlicePoint) -> Matrix {
    let cols = p.y.gauge_directions();
    Matrix::from_columns(p.dim(), &cols).expect("3n² rows")
}

/// One conjugate-linear condition per off-diagonal entry `(i,j)`:
/// `conj(α_I−α_J)·X_ij + conj(β_I−β_J)·Y_ij + conj(γ_I−γ_J)·Z_ij = 0`.
fn complement_conditions(p: &SlicePoint) -> Matrix {
    let n = p.n();
    let mut rows: Vec<Vector> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if !p.off_diagonal(i, j) {
                continue;
            }
            let (pi, pj) = (&p.data.points[p.block_of[i]], &p.data.points[p.block_of[j]]);
            let mut row = vec![Scalar::zero(); p.dim()];
            for s in 0..3 {
                row[p.y.slot_index(s, i, j)] = (&pi[s] - &pj[s]).conj();
            }
            rows.push(row);
        }
    }
    let count = rows.len();
    Matrix::from_vec(count, p.dim(), rows.concat()).expect("rows of length 3n²")
}

pub fn im_sigma_perp(p: &SlicePoint) -> SubspaceBasis {
    SubspaceBasis::new(p.dim(), complement_conditions(p).kernel_basis()).expect("kernel basis is independent")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub basis_ya: Vec<Vector>,
    pub basis_im_sigma: Vec<Vector>,
    pub basis_yslice: Vec<Vector>,
}

impl Decomposition {
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.basis_ya.len(), self.basis_im_sigma.len(), self.basis_yslice.len())
    }

    pub fn all(&self) -> Vec<Vector> {
        self.basis_ya.iter().chain(&self.basis_im_sigma).chain(&self.basis_yslice).cloned().collect()
    }
}

pub fn slice_decomposition(p: &SlicePoint) -> Result<Decomposition> {
    let n = p.n();
    let dim = p.dim();
    let diag_coords: Vec<usize> = (0..3)
        .flat_map(|s| (0..n).flat_map(move |i| (0..n).map(move |j| (s, i, j))))
        .filter(|&(_, i, j)| !p.off_diagonal(i, j))
        .map(|(s, i, j)| p.y.slot_index(s, i, j))
        .collect();

    let unit = |k: usize| {
        let mut v = vec![Scalar::zero(); dim];
        v[k] = Scalar::one();
        v
    };
    let basis_ya: Vec<Vector> = diag_coords.iter().map(|&k| unit(k)).collect();

    let sigma = sigma_matrix(p);
    let e = sigma.echelon();
    let expected = p.off_diagonal_entries();
    if e.pivots.len() != expected {
        return Err(Error::Invariant(format!("σ has rank {} but {} was expected", e.pivots.len(), expected)));
    }
    let basis_im_sigma: Vec<Vector> = e.pivots.iter().map(|&c| sigma.column(c)).collect();

    // im σ^⊥ intersected with the zero-diagonal-block triples.
    let mut rows = complement_conditions(p).to_rows();
    rows.extend(diag_coords.iter().map(|&k| unit(k)));
    let count = rows.len();
    let basis_yslice = Matrix::from_vec(count, dim, rows.concat())?.kernel_basis();

    let d = Decomposition { basis_ya, basis_im_sigma, basis_yslice };
    let all = d.all();
    if all.len() != dim || vectors_rank(dim, &all)? != dim {
        return Err(Error::Invariant(format!("decomposition {:?} is not a direct sum of C^{dim}", d.dims())));
    }
    Ok(d)
}

/// Restricted Hessian on `Y^σ`, decided by exact rank.
pub fn slice_hessian_nondegenerate(p: &SlicePoint) -> Result<bool> {
    let d = slice_decomposition(p)?;
    Ok(form_restrict(&hessian(&p.y), &d.basis_yslice)?.is_nondegenerate())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LunaReport {
    pub n: usize,
    pub mults: Vec<usize>,
    pub dim_ya: usize,
    pub dim_im_sigma: usize,
    pub dim_yslice: usize,
    pub sigma_kernel_dim: usize,
    pub slice_hessian_nondegenerate: bool,
}

pub fn luna_report(data: &PolystableData) -> Result<LunaReport> {
    let p = SlicePoint::new(data.clone())?;
    let d = slice_decomposition(&p)?;
    let sigma = sigma_matrix(&p);
    let (dim_ya, dim_im_sigma, dim_yslice) = d.dims();
    let h = form_restrict(&hessian(&p.y), &d.basis_yslice)?;
    Ok(LunaReport {
        n: p.n(),
        mults: data.mults.clone(),
        dim_ya,
        dim_im_sigma,
        dim_yslice,
        sigma_kernel_dim: sigma.cols() - sigma.rank(),
        slice_hessian_nondegenerate: h.is_nondegenerate(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(v: [i64; 3]) -> [Scalar; 3] {
        v.map(Scalar::from_int)
    }

    fn sp(points: Vec<[Scalar; 3]>, mults: Vec<usize>) -> SlicePoint {
        SlicePoint::new(PolystableData::new(points, mults).unwrap()).unwrap()
    }

    fn two_points() -> SlicePoint {
        sp(vec![pt([0, 0, 0]), pt([1, 0, 0])], vec![1, 1])
    }

    #[test]
    fn sigma_examples() {
        assert!(sigma_matrix(&sp(vec![pt([1, 2, 3])], vec![3])).is_zero());
        assert_eq!(sigma_matrix(&two_points()).rank(), 2);
    }

    #[test]
    fn sigma_image_has_zero_diagonal_blocks() {
        let p = sp(vec![pt([0, 1, 0]), pt([2, 0, -1]), pt([1, 1, 1])], vec![2, 1, 1]);
        let s = sigma_matrix(&p);
        let n = p.n();
        for c in 0..s.cols() {
            for slot in 0..3 {
                for i in 0..n {
                    for j in 0..n {
                        if !p.off_diagonal(i, j) {
                            assert!(s[(p.y.slot_index(slot, i, j), c)].is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn complement_examples() {
        let whole = im_sigma_perp(&sp(vec![pt([0, 0, 0])], vec![2]));
        assert_eq!(whole.dim(), 12);
        let p = two_points();
        let perp = im_sigma_perp(&p);
        assert_eq!(perp.dim(), 12 - 2);
        let d = slice_decomposition(&p).unwrap();
        assert!(d.basis_ya.iter().all(|v| perp.contains(v)));
        assert!(d.basis_yslice.iter().all(|v| perp.contains(v)));
    }

    #[test]
    fn decomposition_dimensions() {
        let single = sp(vec![pt([5, 0, 1])], vec![2]);
        assert_eq!(slice_decomposition(&single).unwrap().dims(), (12, 0, 0));
        assert_eq!(slice_decomposition(&two_points()).unwrap().dims(), (6, 2, 4));
        let p = sp(vec![pt([0, 0, 0]), pt([1, 2, -1])], vec![2, 1]);
        assert_eq!(slice_decomposition(&p).unwrap().dims(), (15, 4, 8));
    }

    #[test]
    fn coincident_points_rejected() {
        let d = PolystableData { points: vec![pt([1, 0, 0]), pt([1, 0, 0])], mults: vec![1, 1] };
        assert_eq!(SlicePoint::new(d), Err(Error::CoincidentPoints(0, 1)));
    }

    #[test]
    fn slice_hessian_examples() {
        assert!(slice_hessian_nondegenerate(&sp(vec![pt([0, 0, 0])], vec![3])).unwrap());
        assert!(slice_hessian_nondegenerate(&two_points()).unwrap());
        let p = sp(
            vec![
                [Scalar::frac(1, 2), Scalar::from_int(0), Scalar::from_int(3)],
                [Scalar::from_int(-1), Scalar::frac(2, 3), Scalar::from_int(1)],
                [Scalar::from_int(2), Scalar::from_int(1), Scalar::frac(-5, 7)],
            ],
            vec![1, 1, 1],
        );
        assert!(slice_hessian_nondegenerate(&p).unwrap());
    }

    // p₂ − p₁ = (1,0,0): the slice is spanned by Y₁₂, Y₂₁, Z₁₂, Z₂₁ and the
    // Hessian there is 2·Tr(α[Y,Z]) = 2(Y₂₁Z₁₂ − Z₂₁Y₁₂), a pair of
    // hyperbolic planes.
    #[test]
    fn two_point_slice_is_hyperbolic() {
        let p = two_points();
        let d = slice_decomposition(&p).unwrap();
        let y = p.y();
        let slice = SubspaceBasis::new(12, d.basis_yslice.clone()).unwrap();
        let h = hessian(y);
        let (a, b, c, e) = (Scalar::from_int(2), Scalar::from_int(-3), Scalar::gaussian(1, 1), Scalar::from_int(5));
        let mut v = vec![Scalar::zero(); 12];
        v[y.slot_index(1, 0, 1)] = a.clone();
        v[y.slot_index(1, 1, 0)] = b.clone();
        v[y.slot_index(2, 0, 1)] = c.clone();
        v[y.slot_index(2, 1, 0)] = e.clone();
        assert!(slice.contains(&v));
        let expected = Scalar::from_int(2) * (&(&b * &c) - &(&e * &a));
        assert_eq!(h.eval(&v).unwrap(), expected);
        assert!(form_restrict(&h, &d.basis_yslice).unwrap().is_nondegenerate());
    }

    #[test]
    fn complex_points_use_conjugation() {
        let p = sp(vec![[Scalar::i(), Scalar::zero(), Scalar::zero()], [Scalar::zero(), Scalar::one(), Scalar::zero()]], vec![1, 1]);
        let perp = im_sigma_perp(&p);
        let d = slice_decomposition(&p).unwrap();
        assert_eq!(d.dims(), (6, 2, 4));
        // σ(E₁₂) lies in the conjugate-linear complement only if the form were
        // bilinear; here it must not.
        for v in &d.basis_im_sigma {
            assert!(!perp.contains(v));
        }
        assert!(slice_hessian_nondegenerate(&p).unwrap());
    }

    #[test]
    fn gauge_kernel_and_radical() {
        let p = sp(vec![pt([0, 0, 0]), pt([1, -1, 2]), pt([3, 0, 1])], vec![2, 1, 1]);
        let s = sigma_matrix(&p);
        assert_eq!(s.cols() - s.rank(), 4 + 1 + 1);
        let h = hessian(p.y());
        for c in 0..s.cols() {
            assert!(h.in_radical(&s.column(c)).unwrap());
        }
    }

    #[test]
    fn report_fields() {
        let r = luna_report(&PolystableData::new(vec![pt([0, 0, 0]), pt([1, 2, -1])], vec![2, 1]).unwrap()).unwrap();
        assert_eq!((r.dim_ya, r.dim_im_sigma, r.dim_yslice, r.sigma_kernel_dim), (15, 4, 8, 5));
        assert!(r.slice_hessian_nondegenerate);
    }
}
