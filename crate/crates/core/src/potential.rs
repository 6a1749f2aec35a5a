//! The trace potential `f(A,B,C) = Tr A[B,C]` on framed 3-loop representations
//! together with its gradient and Hessian.
//!
//! Coordinates of `Y_{r,n}` are flattened row-major: the A-block, then B, then
//! C, then the `n × r` framing block V. This ordering is part of the wire format
//! of every vector or Gram matrix this crate emits.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Deserializer, Serialize};

use crate::cli::random::random_matrix;
use crate::error::{Error, Result};
use crate::exactalg::{commutator, Matrix, QuadraticForm, Scalar, Vector};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FramedRep {
    n: usize,
    r: usize,
    #[serde(rename = "A")]
    a: Matrix,
    #[serde(rename = "B")]
    b: Matrix,
    #[serde(rename = "C")]
    c: Matrix,
    #[serde(rename = "V")]
    v: Matrix,
}

#[derive(Deserialize)]
struct RawRep {
    n: usize,
    r: usize,
    #[serde(rename = "A")]
    a: Matrix,
    #[serde(rename = "B")]
    b: Matrix,
    #[serde(rename = "C")]
    c: Matrix,
    #[serde(rename = "V", default)]
    v: Option<Vec<Vec<Scalar>>>,
}

impl<'de> Deserialize<'de> for FramedRep {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RawRep::deserialize(deserializer)?;
        // r = 0 admits `V` omitted, `[]`, or n empty rows
        let v = match raw.v {
            Some(rows) if !rows.is_empty() && raw.r > 0 => {
                Matrix::from_rows(rows).map_err(serde::de::Error::custom)?
            }
            _ => Matrix::zeros(raw.n, raw.r),
        };
        FramedRep::new(raw.a, raw.b, raw.c, v)
            .and_then(|rep| {
                if rep.n != raw.n || rep.r != raw.r {
                    Err(Error::DimensionMismatch(format!(
                        "declared n={}, r={} but matrices have n={}, r={}",
                        raw.n, raw.r, rep.n, rep.r
                    )))
                } else {
                    Ok(rep)
                }
            })
            .map_err(serde::de::Error::custom)
    }
}

impl FramedRep {
    pub fn new(a: Matrix, b: Matrix, c: Matrix, v: Matrix) -> Result<Self> {
        let n = a.rows();
        for (name, m) in [("A", &a), ("B", &b), ("C", &c)] {
            if m.rows() != n || m.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "{name} is {}x{}, expected {n}x{n}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        if v.rows() != n && !(v.rows() == 0 && v.cols() == 0) {
            return Err(Error::DimensionMismatch(format!("V has {} rows, expected {n}", v.rows())));
        }
        let v = if v.rows() == 0 { Matrix::zeros(n, 0) } else { v };
        Ok(FramedRep { n, r: v.cols(), a, b, c, v })
    }

    /// A point of `Y_n` (no framing).
    pub fn unframed(a: Matrix, b: Matrix, c: Matrix) -> Result<Self> {
        let n = a.rows();
        FramedRep::new(a, b, c, Matrix::zeros(n, 0))
    }

    pub fn zero(n: usize, r: usize) -> Self {
        FramedRep {
            n,
            r,
            a: Matrix::zeros(n, n),
            b: Matrix::zeros(n, n),
            c: Matrix::zeros(n, n),
            v: Matrix::zeros(n, r),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    pub fn c(&self) -> &Matrix {
        &self.c
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    pub fn triple(&self) -> [&Matrix; 3] {
        [&self.a, &self.b, &self.c]
    }

    pub fn with_framing(&self, v: Matrix) -> Result<Self> {
        FramedRep::new(self.a.clone(), self.b.clone(), self.c.clone(), v)
    }

    /// `dim Y_{r,n} = 3n² + rn`.
    pub fn dim(&self) -> usize {
        3 * self.n * self.n + self.r * self.n
    }

    pub fn coords(&self) -> Vector {
        [&self.a, &self.b, &self.c, &self.v]
            .iter()
            .flat_map(|m| m.entries().iter().cloned())
            .collect()
    }

    pub fn from_coords(n: usize, r: usize, coords: &[Scalar]) -> Result<Self> {
        if coords.len() != 3 * n * n + r * n {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for n={n}, r={r}",
                coords.len()
            )));
        }
        let nn = n * n;
        let block = |k: usize| Matrix::from_vec(n, n, coords[k * nn..(k + 1) * nn].to_vec());
        FramedRep::new(block(0)?, block(1)?, block(2)?, Matrix::from_vec(n, r, coords[3 * nn..].to_vec())?)
    }

    /// `ρ + t·δ` in coordinates.
    pub fn shifted(&self, dir: &[Scalar], t: &Scalar) -> Result<Self> {
        let c: Vector = self.coords().iter().zip(dir).map(|(x, d)| x + &(d * t)).collect();
        FramedRep::from_coords(self.n, self.r, &c)
    }

    /// `g · ρ = (gAg⁻¹, gBg⁻¹, gCg⁻¹, gV)`.
    pub fn gauge_act(&self, g: &Matrix) -> Result<Self> {
        let gi = g.inverse()?;
        let conj = |m: &Matrix| g.try_mul(m)?.try_mul(&gi);
        FramedRep::new(conj(&self.a)?, conj(&self.b)?, conj(&self.c)?, g.try_mul(&self.v)?)
    }

    /// Infinitesimal gauge directions `X ↦ ([X,A],[X,B],[X,C],XV)` for the
    /// matrix units `X = E_ij`, in coordinate order.
    pub fn gauge_directions(&self) -> Vec<Vector> {
        let n = self.n;
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let x = Matrix::unit(n, n, i, j);
                let moved = FramedRep {
                    n,
                    r: self.r,
                    a: commutator(&x, &self.a).expect("square"),
                    b: commutator(&x, &self.b).expect("square"),
                    c: commutator(&x, &self.c).expect("square"),
                    v: x.try_mul(&self.v).expect("shape"),
                };
                out.push(moved.coords());
            }
        }
        out
    }

    /// Coordinate index of entry `(i, j)` in slot 0..3 (A, B, C).
    pub fn slot_index(&self, slot: usize, i: usize, j: usize) -> usize {
        slot * self.n * self.n + i * self.n + j
    }

    pub fn framing_index(&self, i: usize, k: usize) -> usize {
        3 * self.n * self.n + i * self.r + k
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradientTriple {
    #[serde(rename = "G_A")]
    pub g_a: Matrix,
    #[serde(rename = "G_B")]
    pub g_b: Matrix,
    #[serde(rename = "G_C")]
    pub g_c: Matrix,
}

impl GradientTriple {
    pub fn is_zero(&self) -> bool {
        self.g_a.is_zero() && self.g_b.is_zero() && self.g_c.is_zero()
    }

    /// Directional derivative `Tr(X·G_A) + Tr(Y·G_B) + Tr(Z·G_C)`.
    pub fn pair(&self, x: &Matrix, y: &Matrix, z: &Matrix) -> Result<Scalar> {
        Ok(x.try_mul(&self.g_a)?.trace() + y.try_mul(&self.g_b)?.trace() + z.try_mul(&self.g_c)?.trace())
    }

    pub fn norm_sq(&self) -> Scalar {
        self.g_a.frobenius_norm_sq() + self.g_b.frobenius_norm_sq() + self.g_c.frobenius_norm_sq()
    }
}

/// `Tr(A·(BC − CB))`; the framing plays no role.
pub fn eval_potential(rep: &FramedRep) -> Scalar {
    let bc = commutator(&rep.b, &rep.c).expect("square blocks");
    rep.a.try_mul(&bc).expect("square blocks").trace()
}

pub fn gradient(rep: &FramedRep) -> GradientTriple {
    let comm = |x: &Matrix, y: &Matrix| commutator(x, y).expect("square blocks");
    GradientTriple {
        g_a: comm(&rep.b, &rep.c),
        g_b: comm(&rep.c, &rep.a),
        g_c: comm(&rep.a, &rep.b),
    }
}

/// Matrix of second partial derivatives of `f` over all `3n² + rn` coordinates.
///
/// With this normalization `f(ρ + tδ) = f(ρ) + t·∇f·δ + (t²/2)·δᵀHδ + O(t³)`,
/// so `δᵀHδ = 2·Tr(X[β,Z] + X[Y,γ] + α[Y,Z])` at base point `(α,β,γ)`.
/// Rows and columns of the framing block vanish.
pub fn hessian(rep: &FramedRep) -> QuadraticForm {
    let n = rep.n;
    let mut g = Matrix::zeros(rep.dim(), rep.dim());
    // ∂²f/∂P_ij∂Q_kl = δ_jk M_li − δ_li M_jk for slot pairs (P,Q;M) = (A,B;C),
    // (B,C;A), (C,A;B), the cyclic symmetry of Tr A[B,C].
    let pairs = [(0usize, 1usize, &rep.c), (1, 2, &rep.a), (2, 0, &rep.b)];
    for (p, q, m) in pairs {
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    for l in 0..n {
                        let mut v = Scalar::zero();
                        if j == k {
                            v += &m[(l, i)];
                        }
                        if l == i {
                            v -= &m[(j, k)];
                        }
                        if v.is_zero() {
                            continue;
                        }
                        let (s, t) = (rep.slot_index(p, i, j), rep.slot_index(q, k, l));
                        g[(s, t)] = v.clone();
                        g[(t, s)] = v;
                    }
                }
            }
        }
    }
    QuadraticForm::new(g).expect("Hessian is symmetric by construction")
}

/// Block-diagonal sum of representations; framings are stacked vertically.
pub fn block_embed(parts: &[FramedRep]) -> Result<FramedRep> {
    let first = parts.first().ok_or_else(|| Error::InvalidInput("no parts to embed".into()))?;
    if let Some(p) = parts.iter().find(|p| p.r != first.r) {
        return Err(Error::DimensionMismatch(format!(
            "framing ranks {} and {} differ",
            first.r, p.r
        )));
    }
    let collect = |f: fn(&FramedRep) -> &Matrix| parts.iter().map(|p| f(p).clone()).collect::<Vec<_>>();
    let v = if first.r == 0 {
        Matrix::zeros(parts.iter().map(|p| p.n).sum(), 0)
    } else {
        Matrix::vstack(&collect(|p| &p.v))?
    };
    FramedRep::new(
        Matrix::block_diag(&collect(|p| &p.a)),
        Matrix::block_diag(&collect(|p| &p.b)),
        Matrix::block_diag(&collect(|p| &p.c)),
        v,
    )
}

/// Replaces the framing by `trials` seeded random matrices and checks that
/// the potential is unchanged each time.
pub fn verify_framing_independence(rep: &FramedRep, trials: usize, seed: u64) -> Result<bool> {
    if trials == 0 {
        return Err(Error::InvalidInput("trials must be at least 1".into()));
    }
    let base = eval_potential(rep);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let v = random_matrix(&mut rng, rep.n, rep.r, 5, true);
        if eval_potential(&rep.with_framing(v)?) != base {
            return Ok(false);
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::random::random_rep;
    use crate::exactalg::form_restrict;

    fn e(n: usize, i: usize, j: usize) -> Matrix {
        Matrix::unit(n, n, i, j)
    }

    fn diag(v: &[i64]) -> Matrix {
        Matrix::diagonal(&v.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>())
    }

    #[test]
    fn potential_examples() {
        let d = FramedRep::unframed(diag(&[1, 2]), diag(&[3, 4]), diag(&[5, 6])).unwrap();
        assert!(eval_potential(&d).is_zero());
        let s = random_rep(1, 2, 3, 4).unwrap();
        assert!(eval_potential(&s).is_zero());
        let rep = FramedRep::unframed(e(2, 0, 1), e(2, 1, 0), diag(&[1, 0])).unwrap();
        assert_eq!(eval_potential(&rep), Scalar::one());
    }

    #[test]
    fn gradient_examples() {
        let d = FramedRep::unframed(diag(&[1, 2]), diag(&[3, 4]), diag(&[5, 6])).unwrap();
        assert!(gradient(&d).is_zero());
        let rep = FramedRep::unframed(e(2, 0, 1), e(2, 1, 0), Matrix::zeros(2, 2)).unwrap();
        let g = gradient(&rep);
        assert!(g.g_a.is_zero() && g.g_b.is_zero());
        assert_eq!(g.g_c, diag(&[1, -1]));
    }

    #[test]
    fn gradient_components_are_traceless() {
        let rep = random_rep(3, 1, 11, 3).unwrap();
        let g = gradient(&rep);
        assert!(g.g_a.trace().is_zero() && g.g_b.trace().is_zero() && g.g_c.trace().is_zero());
    }

    #[test]
    fn hessian_trivial_cases() {
        let h = hessian(&random_rep(1, 2, 5, 3).unwrap());
        assert_eq!(h.dim(), 5);
        assert!(h.gram().is_zero());
        let h0 = hessian(&FramedRep::zero(3, 1));
        assert!(h0.gram().is_zero());
    }

    #[test]
    fn hessian_matches_trace_form_at_polystable_point() {
        // base (α,β,γ) diagonal; δᵀHδ = 2·Tr(X[β,Z] + X[Y,γ] + α[Y,Z])
        let base = FramedRep::unframed(diag(&[1, 0]), diag(&[0, 2]), diag(&[3, -1])).unwrap();
        let h = hessian(&base);
        let dir = random_rep(2, 0, 99, 3).unwrap();
        let (x, y, z) = (dir.a(), dir.b(), dir.c());
        let c = |p: &Matrix, q: &Matrix| commutator(p, q).unwrap();
        let expected = (x * &c(base.b(), z)).trace()
            + (x * &c(y, base.c())).trace()
            + (base.a() * &c(y, z)).trace();
        assert_eq!(h.eval(&dir.coords()).unwrap(), &expected * &Scalar::from_int(2));
    }

    #[test]
    fn framing_directions_in_radical() {
        let rep = random_rep(2, 2, 8, 3).unwrap();
        let h = hessian(&rep);
        for i in 0..2 {
            for k in 0..2 {
                let mut v = vec![Scalar::zero(); rep.dim()];
                v[rep.framing_index(i, k)] = Scalar::one();
                assert!(h.in_radical(&v).unwrap());
            }
        }
    }

    #[test]
    fn block_embed_examples() {
        let p = random_rep(2, 1, 1, 3).unwrap();
        assert_eq!(block_embed(std::slice::from_ref(&p)).unwrap(), p);
        let a = random_rep(1, 1, 2, 3).unwrap();
        let b = random_rep(1, 1, 3, 3).unwrap();
        let ab = block_embed(&[a.clone(), b.clone()]).unwrap();
        assert_eq!(ab.a(), &Matrix::diagonal(&[a.a()[(0, 0)].clone(), b.a()[(0, 0)].clone()]));
        assert_eq!(ab.v().column(0), vec![a.v()[(0, 0)].clone(), b.v()[(0, 0)].clone()]);
        assert!(block_embed(&[a, random_rep(1, 2, 0, 1).unwrap()]).is_err());
        assert!(block_embed(&[]).is_err());
    }

    #[test]
    fn block_embed_is_additive() {
        let parts: Vec<_> = (0..3).map(|s| random_rep(s + 1, 0, s as u64, 3).unwrap()).collect();
        let total: Scalar = parts.iter().map(eval_potential).sum();
        assert_eq!(eval_potential(&block_embed(&parts).unwrap()), total);
    }

    #[test]
    fn hessian_of_block_sum_restricts_to_direct_sum() {
        let parts: Vec<_> = [2usize, 1, 2]
            .iter()
            .enumerate()
            .map(|(s, &n)| random_rep(n, 0, 40 + s as u64, 3).unwrap())
            .collect();
        let big = block_embed(&parts).unwrap();
        let mut basis = Vec::new();
        let mut off = 0;
        for p in &parts {
            for slot in 0..3 {
                for i in 0..p.n() {
                    for j in 0..p.n() {
                        let mut v = vec![Scalar::zero(); big.dim()];
                        v[big.slot_index(slot, off + i, off + j)] = Scalar::one();
                        basis.push(v);
                    }
                }
            }
            off += p.n();
        }
        let restricted = form_restrict(&hessian(&big), &basis).unwrap();
        let blocks: Vec<Matrix> = parts.iter().map(|p| hessian(p).gram().clone()).collect();
        assert_eq!(restricted.gram(), &Matrix::block_diag(&blocks));
    }

    #[test]
    fn framing_independence() {
        let rep = random_rep(2, 1, 17, 4).unwrap();
        assert_eq!(
            eval_potential(&rep),
            eval_potential(&rep.with_framing(Matrix::zeros(2, 1)).unwrap())
        );
        assert!(verify_framing_independence(&rep, 10, 1).unwrap());
        assert!(verify_framing_independence(&random_rep(3, 2, 5, 4).unwrap(), 10, 2).unwrap());
        assert!(verify_framing_independence(&rep, 0, 1).is_err());
    }

    #[test]
    fn json_schema() {
        let rep = FramedRep::new(e(2, 0, 1), e(2, 1, 0), diag(&[1, 0]), Matrix::from_int_rows(&[&[1], &[0]]))
            .unwrap();
        let js = serde_json::to_value(&rep).unwrap();
        assert_eq!(js["n"], 2);
        assert_eq!(js["r"], 1);
        assert_eq!(js["A"], serde_json::json!([["0", "1"], ["0", "0"]]));
        let back: FramedRep = serde_json::from_value(js).unwrap();
        assert_eq!(back, rep);
        let unframed: FramedRep =
            serde_json::from_str(r#"{"n":1,"r":0,"A":[["1"]],"B":[["2"]],"C":[["3"]]}"#).unwrap();
        assert_eq!(unframed.r(), 0);
        assert!(serde_json::from_str::<FramedRep>(r#"{"n":2,"r":0,"A":[["1"]],"B":[["2"]],"C":[["3"]]}"#).is_err());
    }
}
